//! Gauss–Jacobi rules for probability-normalized Jacobi weights.
//!
//! Nodes come from the eigenvalues of the Jacobi matrix, are refined by
//! Newton steps on the orthonormal recurrence, and the weights are the
//! Christoffel numbers `1 / Σ_{k<N} p_k(x)²`, which keeps them accurate to
//! a few ulps without any gamma-function normalization.

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Recurrence coefficients of the monic Jacobi polynomials for the weight
/// `(1-x)^a (1+x)^b` on `[-1, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JacobiWeight {
    pub a: f64,
    pub b: f64,
}

impl JacobiWeight {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !(a > -1.0 && b > -1.0 && a.is_finite() && b.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "Jacobi exponents must exceed -1 (a = {a}, b = {b})"
            )));
        }
        Ok(JacobiWeight { a, b })
    }

    /// Symmetric (Gegenbauer) weight `(1-x²)^g`.
    pub fn symmetric(g: f64) -> Result<Self> {
        Self::new(g, g)
    }

    /// Diagonal entry `α_k`.
    pub fn diag(&self, k: usize) -> f64 {
        let (a, b) = (self.a, self.b);
        if a == b {
            return 0.0;
        }
        let k = k as f64;
        let s = 2.0 * k + a + b;
        if k == 0.0 {
            (b - a) / (a + b + 2.0)
        } else {
            (b * b - a * a) / (s * (s + 2.0))
        }
    }

    /// Monic recurrence coefficient `β_k` for `k ≥ 1`.
    pub fn offdiag_sq(&self, k: usize) -> f64 {
        let (a, b) = (self.a, self.b);
        if k == 1 {
            // second moment about the mean, with the (a+b+1) factor cancelled
            return 4.0 * (1.0 + a) * (1.0 + b) / ((2.0 + a + b).powi(2) * (3.0 + a + b));
        }
        let k = k as f64;
        let s = 2.0 * k + a + b;
        4.0 * k * (k + a) * (k + b) * (k + a + b) / (s * s * (s + 1.0) * (s - 1.0))
    }

    /// Orthonormal polynomials `p_0..=p_deg` at `x` (probability normalization, `p_0 = 1`).
    pub fn eval_all(&self, deg: usize, x: f64, out: &mut Vec<f64>) {
        out.clear();
        out.push(1.0);
        if deg == 0 {
            return;
        }
        let b1 = self.offdiag_sq(1).sqrt();
        out.push((x - self.diag(0)) / b1);
        for k in 1..deg {
            let bk = self.offdiag_sq(k).sqrt();
            let bk1 = self.offdiag_sq(k + 1).sqrt();
            let next = ((x - self.diag(k)) * out[k] - bk * out[k - 1]) / bk1;
            out.push(next);
        }
    }

    /// `(p_deg(x), p_deg'(x))` for the orthonormal family.
    fn eval_with_derivative(&self, deg: usize, x: f64) -> (f64, f64) {
        let mut p_prev = 0.0;
        let mut p = 1.0;
        let mut d_prev = 0.0;
        let mut d = 0.0;
        for k in 0..deg {
            let bk = if k == 0 {
                0.0
            } else {
                self.offdiag_sq(k).sqrt()
            };
            let bk1 = self.offdiag_sq(k + 1).sqrt();
            let ak = self.diag(k);
            let p_next = ((x - ak) * p - bk * p_prev) / bk1;
            let d_next = (p + (x - ak) * d - bk * d_prev) / bk1;
            p_prev = p;
            p = p_next;
            d_prev = d;
            d = d_next;
        }
        (p, d)
    }
}

/// Gauss rule on `[-1, 1]` whose weights sum to one.
#[derive(Debug, Clone, PartialEq)]
pub struct JacobiRule {
    pub weight: JacobiWeight,
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl JacobiRule {
    pub fn new(a: f64, b: f64, n_nodes: usize) -> Result<Self> {
        let weight = JacobiWeight::new(a, b)?;
        if n_nodes == 0 {
            return Err(Error::InvalidArgument(
                "a Gauss rule needs at least one node".into(),
            ));
        }
        let n = n_nodes;
        let mut jm = DMatrix::<f64>::zeros(n, n);
        for k in 0..n {
            jm[(k, k)] = weight.diag(k);
            if k + 1 < n {
                let b = weight.offdiag_sq(k + 1).sqrt();
                jm[(k, k + 1)] = b;
                jm[(k + 1, k)] = b;
            }
        }
        let mut nodes: Vec<f64> = jm.symmetric_eigenvalues().iter().copied().collect();
        nodes.sort_by(|x, y| x.partial_cmp(y).unwrap());

        for x in nodes.iter_mut() {
            for _ in 0..3 {
                let (p, d) = weight.eval_with_derivative(n, *x);
                if d == 0.0 {
                    break;
                }
                let step = p / d;
                *x -= step;
                if step.abs() < 1e-16 {
                    break;
                }
            }
        }
        if a == b {
            // mirror the positive half so the rule is exactly symmetric
            for k in 0..n / 2 {
                let v = 0.5 * (nodes[n - 1 - k] - nodes[k]);
                nodes[k] = -v;
                nodes[n - 1 - k] = v;
            }
            if n % 2 == 1 {
                nodes[n / 2] = 0.0;
            }
        }

        let mut buf = Vec::with_capacity(n);
        let mut weights: Vec<f64> = nodes
            .iter()
            .map(|&x| {
                weight.eval_all(n - 1, x, &mut buf);
                1.0 / buf.iter().map(|v| v * v).sum::<f64>()
            })
            .collect();
        if a == b {
            for k in 0..n / 2 {
                let w = 0.5 * (weights[k] + weights[n - 1 - k]);
                weights[k] = w;
                weights[n - 1 - k] = w;
            }
        }
        Ok(JacobiRule {
            weight,
            nodes,
            weights,
        })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Highest polynomial degree integrated exactly.
    pub fn exact_degree(&self) -> usize {
        2 * self.len() - 1
    }

    /// `Σ w_k f(x_k)`, i.e. the normalized integral of `f` against the weight.
    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }
}

/// Gauss rule for the probability measure that `θ·e` induces on `[-1, 1]`
/// when `θ` is uniform on `S^{n-1}`, i.e. weight `(1-t²)^{(n-3)/2}`.
pub fn gauss_jacobi_rule(n: usize, n_nodes: usize) -> Result<JacobiRule> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!(
            "dimension must be at least 2, got {n}"
        )));
    }
    let g = (n as f64 - 3.0) / 2.0;
    JacobiRule::new(g, g, n_nodes)
}

/// Gauss–Legendre rule with weights summing to one.
pub fn gauss_legendre(n_nodes: usize) -> Result<JacobiRule> {
    JacobiRule::new(0.0, 0.0, n_nodes)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn legendre_weights_sum_to_one() {
        let r = gauss_jacobi_rule(3, 7).unwrap();
        assert!((r.weights.iter().sum::<f64>() - 1.0).abs() < 1e-15);
        let g = gauss_legendre(7).unwrap();
        assert_eq!(r.nodes, g.nodes);
    }

    #[test]
    fn second_moment_n3_two_nodes() {
        let r = gauss_jacobi_rule(3, 2).unwrap();
        assert!((r.integrate(|t| t * t) - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn second_moment_n5() {
        // ∫t²(1-t²)dt / ∫(1-t²)dt = (4/15)/(4/3) = 1/5
        let r = gauss_jacobi_rule(5, 4).unwrap();
        assert!((r.integrate(|t| t * t) - 0.2).abs() < 1e-15);
    }

    #[test]
    fn chebyshev_nodes_for_circle() {
        let n = 6;
        let r = gauss_jacobi_rule(2, n).unwrap();
        for (k, x) in r.nodes.iter().enumerate() {
            let expect = -((2 * k + 1) as f64 * std::f64::consts::PI / (2 * n) as f64).cos();
            assert!((x - expect).abs() < 1e-14);
            assert!((r.weights[k] - 1.0 / n as f64).abs() < 1e-14);
        }
    }

    #[test]
    fn asymmetric_moments_against_beta_integrals() {
        // ∫x^4 (1-x)^0.5 (1+x)^-0.75 dx, expanded in beta functions after x = 2y-1
        // and evaluated at 30 digits: 3.500477435501566990534...
        let a = 0.5;
        let b = -0.75;
        let mass = 2f64.powf(a + b + 1.0) * crate::special::beta(a + 1.0, b + 1.0).unwrap();
        let r = JacobiRule::new(a, b, 20).unwrap();
        let m4 = r.integrate(|x| x.powi(4)) * mass;
        assert!((m4 - 3.500_477_435_501_567).abs() < 1e-13, "{m4}");
    }

    #[test]
    fn exactness_degree() {
        let r = JacobiRule::new(1.5, 0.25, 9).unwrap();
        // Orthonormality of p_0..p_8 under the rule checks exactness up to degree 16.
        let mut buf = Vec::new();
        let mut gram = vec![0.0; 81];
        for (&x, &w) in r.nodes.iter().zip(&r.weights) {
            r.weight.eval_all(8, x, &mut buf);
            for i in 0..9 {
                for j in 0..9 {
                    gram[i * 9 + j] += w * buf[i] * buf[j];
                }
            }
        }
        for i in 0..9 {
            for j in 0..9 {
                let e = if i == j { 1.0 } else { 0.0 };
                assert!((gram[i * 9 + j] - e).abs() < 1e-13);
            }
        }
    }
}
