//! Origin-symmetric star bodies given by their radial functions, the
//! intersection-body maps, and the positivity test for the classes `𝒦_{α,n}`.

use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::error::{Error, Result};
use crate::multipliers::{
    constant, excluded, lattice_description, m_mult, Constant, Dim, Family, Operator,
};
use crate::report::{ErrorTally, IdentityReport, Metric, Params};
use crate::s2::direct::funk_direct;
use crate::s2::grassmann::{dual_radon, radon_r1_grid, GrassmannFunctionS2, GrassmannKind};
use crate::s2::grid::{GridFunction, S2Grid};
use crate::s2::harmonics::{analyze, synthesize, HarmonicCoeffs};
use crate::s2::spectral::{apply_spectral, apply_spectral_grid};
use crate::special::gamma_ratio;
use crate::zonal::{zonal_analyze, zonal_analyze_fn, zonal_apply, zonal_rule, ZonalFunction};

/// Largest odd-energy fraction accepted for an origin-symmetric body.
pub const ODD_ENERGY_LIMIT: f64 = 1e-8;

/// Coefficients below this many ulps of the coefficient norm are treated as
/// analysis round-off and dropped before the classifier's multiplier.
pub const ROUNDING_FLOOR_ULPS: f64 = 32.0;

/// Points in `[-1, 1]` at which zonal profiles are checked.
pub const ZONAL_CHECK_POINTS: usize = 201;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "shape", content = "params", rename_all = "snake_case")]
pub enum Shape {
    Ball { r: f64 },
    Ellipsoid { axes: Vec<f64> },
    LpBall { p: f64 },
}

impl Shape {
    fn validate(&self, n: Dim) -> Result<()> {
        let bad = |m: String| Err(Error::BadShapeParams(m));
        match self {
            Shape::Ball { r } if !(r.is_finite() && *r > 0.0) => {
                bad(format!("radius must be positive, got {r}"))
            }
            Shape::Ellipsoid { axes } if axes.len() != n.get() => bad(format!(
                "ellipsoid in dimension {n} needs {n} semi-axes, got {}",
                axes.len()
            )),
            Shape::Ellipsoid { axes } if axes.iter().any(|a| !(a.is_finite() && *a > 0.0)) => {
                bad(format!("semi-axes must be positive, got {axes:?}"))
            }
            Shape::LpBall { p } if !(p.is_finite() && *p > 0.0) => {
                bad(format!("p must be positive, got {p}"))
            }
            _ => Ok(()),
        }
    }

    /// Radial function at the unit vector `x`.
    pub fn radial(&self, x: &[f64]) -> f64 {
        match self {
            Shape::Ball { r } => *r,
            Shape::Ellipsoid { axes } => x
                .iter()
                .zip(axes)
                .map(|(v, a)| (v / a).powi(2))
                .sum::<f64>()
                .powf(-0.5),
            Shape::LpBall { p } => x
                .iter()
                .map(|v| v.abs().powf(*p))
                .sum::<f64>()
                .powf(-1.0 / p),
        }
    }

    /// True when the body is invariant under rotations fixing the last axis.
    fn is_zonal(&self) -> bool {
        match self {
            Shape::Ball { .. } => true,
            Shape::Ellipsoid { axes } => axes[..axes.len() - 1].iter().all(|a| a == &axes[0]),
            Shape::LpBall { p } => *p == 2.0,
        }
    }

    fn meta(&self) -> BodyMeta {
        let v = serde_json::to_value(self).expect("shapes serialize");
        BodyMeta {
            shape: v["shape"].as_str().unwrap_or_default().to_string(),
            params: v["params"].clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BodyMeta {
    pub shape: String,
    pub params: serde_json::Value,
}

#[derive(Debug, Clone, PartialEq)]
pub enum BodyRepr {
    Grid(GridFunction),
    Zonal(ZonalFunction),
}

/// Radial function `ρ_K` of a star body in `ℝⁿ`: grid values on S² for
/// `n = 3`, or a zonal profile about the last axis for any `n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawBody", into = "RawBody")]
pub struct StarBody {
    pub n: Dim,
    pub repr: BodyRepr,
    pub meta: BodyMeta,
}

#[derive(Serialize, Deserialize)]
struct RawBody {
    n: Dim,
    repr_kind: String,
    payload: serde_json::Value,
    meta: BodyMeta,
}

impl TryFrom<RawBody> for StarBody {
    type Error = Error;
    fn try_from(r: RawBody) -> Result<Self> {
        let parse = |e: serde_json::Error| Error::RepresentationMismatch(e.to_string());
        let repr = match r.repr_kind.as_str() {
            "grid" => BodyRepr::Grid(serde_json::from_value(r.payload).map_err(parse)?),
            "zonal" => BodyRepr::Zonal(serde_json::from_value(r.payload).map_err(parse)?),
            other => {
                return Err(Error::RepresentationMismatch(format!(
                    "unknown repr_kind {other:?}"
                )))
            }
        };
        StarBody::new(r.n, repr, r.meta)
    }
}

impl StarBody {
    /// Decodes a body file, keeping validation failures as typed errors.
    pub fn from_json(value: serde_json::Value) -> Result<Self> {
        let raw: RawBody = serde_json::from_value(value)
            .map_err(|e| Error::RepresentationMismatch(e.to_string()))?;
        StarBody::try_from(raw)
    }
}

impl From<StarBody> for RawBody {
    fn from(b: StarBody) -> Self {
        let (repr_kind, payload) = match b.repr {
            BodyRepr::Grid(g) => ("grid", serde_json::to_value(g)),
            BodyRepr::Zonal(z) => ("zonal", serde_json::to_value(z)),
        };
        RawBody {
            n: b.n,
            repr_kind: repr_kind.to_string(),
            payload: payload.expect("representations serialize"),
            meta: b.meta,
        }
    }
}

/// Sampling used by [`make_body`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Resolution {
    pub n_theta: usize,
    pub n_phi: usize,
    pub zonal_band: usize,
}

impl Default for Resolution {
    fn default() -> Self {
        Resolution {
            n_theta: 48,
            n_phi: 96,
            zonal_band: 24,
        }
    }
}

fn zonal_grid_points() -> Vec<f64> {
    (0..ZONAL_CHECK_POINTS)
        .map(|k| -1.0 + 2.0 * k as f64 / (ZONAL_CHECK_POINTS - 1) as f64)
        .collect()
}

impl StarBody {
    /// Checks that the representation fits `n` and that `ρ > 0`.
    pub fn new(n: Dim, repr: BodyRepr, meta: BodyMeta) -> Result<Self> {
        match &repr {
            BodyRepr::Grid(_) if n.get() != 3 => {
                return Err(Error::RepresentationMismatch(format!(
                    "grid bodies live in R^3, got n = {n}"
                )))
            }
            BodyRepr::Zonal(z) if z.n != n => {
                return Err(Error::DimensionMismatch {
                    expected: n.get(),
                    got: z.n.get(),
                })
            }
            _ => {}
        }
        let body = StarBody { n, repr, meta };
        let min = body.min_radius();
        if !(min > 0.0) {
            return Err(Error::NonPositiveBody { min });
        }
        Ok(body)
    }

    /// Body in `ℝ³` from radial values on a grid.
    pub fn from_grid(rho: GridFunction, meta: BodyMeta) -> Result<Self> {
        StarBody::new(Dim::new(3)?, BodyRepr::Grid(rho), meta)
    }

    pub fn grid(&self) -> Result<&GridFunction> {
        match &self.repr {
            BodyRepr::Grid(g) => Ok(g),
            BodyRepr::Zonal(_) => Err(Error::RepresentationMismatch("expected a grid body".into())),
        }
    }

    /// Minimum of `ρ` over the grid, or over the zonal check points.
    pub fn min_radius(&self) -> f64 {
        match &self.repr {
            BodyRepr::Grid(g) => g.min(),
            BodyRepr::Zonal(z) => zonal_grid_points()
                .iter()
                .map(|&t| z.eval(t))
                .fold(f64::INFINITY, f64::min),
        }
    }

    /// Share of `∫ρ²` carried by odd degrees, with `band` used for grid bodies.
    pub fn odd_fraction(&self, band: usize) -> Result<f64> {
        match &self.repr {
            BodyRepr::Grid(g) => {
                let c = analyze(g, band)?;
                Ok(c.odd_energy() / c.energy())
            }
            BodyRepr::Zonal(z) => Ok(z.odd_fraction()),
        }
    }

    pub fn ensure_symmetric(&self, band: usize) -> Result<()> {
        let fraction = self.odd_fraction(band)?;
        if fraction > ODD_ENERGY_LIMIT {
            return Err(Error::OddBody {
                fraction,
                limit: ODD_ENERGY_LIMIT,
            });
        }
        Ok(())
    }

    fn require_n3(&self, what: &str) -> Result<&GridFunction> {
        self.grid().map_err(|_| {
            Error::RepresentationMismatch(format!("{what} is implemented for grid bodies in R^3"))
        })
    }
}

/// Samples a closed-form body. `n = 3` gives a grid body; other dimensions
/// need a shape that is rotation invariant about the last axis.
pub fn make_body(n: Dim, shape: &Shape, res: &Resolution) -> Result<StarBody> {
    shape.validate(n)?;
    if n.get() == 3 {
        let grid = S2Grid::new(res.n_theta, res.n_phi)?;
        let rho = GridFunction::from_fn(&grid, |x| shape.radial(&x));
        return StarBody::new(n, BodyRepr::Grid(rho), shape.meta());
    }
    if !shape.is_zonal() {
        return Err(Error::BadShapeParams(format!(
            "in dimension {n} only bodies of revolution about the last axis are supported"
        )));
    }
    let nn = n.get();
    let profile = |t: f64| {
        let mut x = vec![0.0; nn];
        x[0] = (1.0 - t * t).max(0.0).sqrt();
        x[nn - 1] = t;
        shape.radial(&x)
    };
    let z = zonal_analyze_fn(n, profile, res.zonal_band)?;
    StarBody::new(n, BodyRepr::Zonal(z), shape.meta())
}

fn derived_meta(what: &str, source: &StarBody, extra: serde_json::Value) -> BodyMeta {
    BodyMeta {
        shape: what.to_string(),
        params: json!({ "source": source.meta, "args": extra }),
    }
}

fn zonal_power(z: &ZonalFunction, power: f64, band: usize) -> Result<ZonalFunction> {
    let rule = zonal_rule(z.n, band + 1)?;
    let samples: Vec<f64> = rule.nodes.iter().map(|&t| z.eval(t).powf(power)).collect();
    zonal_analyze(z.n, &rule, &samples, band)
}

/// Intersection body: `ρ_K(θ) = vol_{n-1}(L ∩ θ^⊥) = (σ_{n-2}/(n-1)) M ρ_L^{n-1}`.
pub fn intersection_body(l: &StarBody, band: usize) -> Result<StarBody> {
    l.ensure_symmetric(band)?;
    let c = constant(Constant::IntersectionBody, l.n, 1, 0.0)?;
    let repr = match &l.repr {
        BodyRepr::Grid(g) => BodyRepr::Grid(funk_direct(&g.map(|v| v * v), band)?.scale(c)),
        BodyRepr::Zonal(z) => {
            let p = zonal_power(z, l.n.as_f64() - 1.0, band)?;
            let mut k = zonal_apply(&p, &Operator::Funk)?;
            k.coeffs.iter_mut().for_each(|a| *a *= c);
            BodyRepr::Zonal(k)
        }
    };
    let meta = derived_meta("intersection_body", l, json!({ "band": band }));
    StarBody::new(l.n, repr, meta).map_err(|e| match e {
        Error::NonPositiveBody { min } => Error::NegativeOutput { min },
        other => other,
    })
}

/// `i`-intersection body in `ℝ³`: the body `K` with `vol_i(K ∩ ξ) = vol_{3-i}(L ∩ ξ^⊥)`,
/// obtained from `ρ_K^i = κ^{-1} M^{1-i} ρ_L^{3-i}`, `κ = π^{i-3/2}(3-i)/i`.
pub fn i_intersection_body(l: &StarBody, i: usize, band: usize) -> Result<StarBody> {
    let g = l.require_n3("the i-intersection body")?;
    l.ensure_symmetric(band)?;
    if !(1..=2).contains(&i) {
        return Err(Error::InvalidArgument(format!(
            "i must be 1 or 2 in R^3, got {i}"
        )));
    }
    let kappa = constant(Constant::IntersectionPair, l.n, i, 0.0)?;
    let power = g.map(|v| v.powi(3 - i as i32));
    let rhs = apply_spectral_grid(
        &power,
        &Operator::Cosine {
            alpha: 1.0 - i as f64,
        },
        band,
    )?
    .scale(1.0 / kappa);
    let min = rhs.min();
    if !(min > 0.0) {
        return Err(Error::NonPositiveBody { min });
    }
    let rho = rhs.map(|v| v.powf(1.0 / i as f64));
    StarBody::new(
        l.n,
        BodyRepr::Grid(rho),
        derived_meta("i_intersection_body", l, json!({ "i": i, "band": band })),
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Membership {
    Yes,
    No,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassVerdict {
    pub alpha: f64,
    pub member: Membership,
    pub min_value: f64,
    pub margin: f64,
    pub smoothing_t: f64,
    /// Share of the energy of `ρ^α` in the top four degrees kept.
    pub tail_energy: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassifyOptions {
    pub t_smooth: f64,
    pub margin: f64,
    pub band: usize,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        ClassifyOptions {
            t_smooth: 0.98,
            margin: 1e-7,
            band: 24,
        }
    }
}

pub fn verdict(min_value: f64, margin: f64) -> Membership {
    if min_value >= margin {
        Membership::Yes
    } else if min_value <= -margin {
        Membership::No
    } else {
        Membership::Inconclusive
    }
}

/// Membership test for `𝒦_{α,n}`: the sign of `Π_t M^{1-n+α} ρ_K^α`,
/// computed spectrally and sampled on the body's grid (or 201 points of `[-1, 1]`).
pub fn classify_k_alpha(k: &StarBody, alpha: f64, opts: &ClassifyOptions) -> Result<ClassVerdict> {
    let n = k.n;
    if excluded(n, alpha, Family::StarClass) {
        return Err(Error::ExcludedParameter {
            family: Family::StarClass.to_string(),
            n: n.get(),
            alpha,
            lattice: lattice_description(n, Family::StarClass),
        });
    }
    if !(opts.t_smooth > 0.0 && opts.t_smooth < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "smoothing t must lie in (0, 1), got {}",
            opts.t_smooth
        )));
    }
    k.ensure_symmetric(opts.band)?;
    let order = 1.0 - n.as_f64() + alpha;
    let band = opts.band;
    let mult = (0..=band)
        .map(|j| Ok(m_mult(n, j, order)? * opts.t_smooth.powi(j as i32)))
        .collect::<Result<Vec<f64>>>()?;
    let tail_from = band.saturating_sub(3);
    let (min_value, tail_energy) = match &k.repr {
        BodyRepr::Grid(g) => {
            let mut c = analyze(&g.map(|v| v.powf(alpha)), band)?.into_vec();
            drop_rounding_noise(&mut c);
            let c = HarmonicCoeffs::from_vec(band, c)?;
            let tail = c.tail_energy(tail_from) / c.energy();
            (synthesize(&c.scale_degrees(&mult), &g.grid)?.min(), tail)
        }
        BodyRepr::Zonal(z) => {
            let mut p = zonal_power(z, alpha, band)?;
            drop_rounding_noise(&mut p.coeffs);
            let energy: f64 = p.coeffs.iter().map(|a| a * a).sum();
            let tail = p.coeffs[tail_from..].iter().map(|a| a * a).sum::<f64>() / energy;
            let coeffs = p.coeffs.iter().zip(&mult).map(|(a, m)| a * m).collect();
            let mu = ZonalFunction::new(n, coeffs);
            let min = zonal_grid_points()
                .iter()
                .map(|&t| mu.eval(t))
                .fold(f64::INFINITY, f64::min);
            (min, tail)
        }
    };
    Ok(ClassVerdict {
        alpha,
        member: verdict(min_value, opts.margin),
        min_value,
        margin: opts.margin,
        smoothing_t: opts.t_smooth,
        tail_energy,
    })
}

fn drop_rounding_noise(c: &mut [f64]) {
    let floor = ROUNDING_FLOOR_ULPS * f64::EPSILON * c.iter().map(|a| a * a).sum::<f64>().sqrt();
    c.iter_mut()
        .filter(|a| a.abs() < floor)
        .for_each(|a| *a = 0.0);
}

/// Closed form `M^{1-n+α} ρ_B^α = Γ((n-α)/2)/Γ(α/2)` for the unit ball.
pub fn ball_class_sign(n: Dim, alpha: f64) -> Result<f64> {
    gamma_ratio(&[(n.as_f64() - alpha) / 2.0], &[alpha / 2.0])
}

/// Isometric embedding of `(ℝⁿ, ‖·‖_K)` into `L_p`, tested as membership in `𝒦_{-p,n}`.
pub fn embeds_in_lp(k: &StarBody, p: f64, opts: &ClassifyOptions) -> Result<ClassVerdict> {
    if !(p > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "p must be positive, got {p}"
        )));
    }
    classify_k_alpha(k, -p, opts)
}

/// Residuals of the `i`-intersection relation between `K` and `L` in `ℝ³`:
/// the section identity `(σ_{i-1}/i) R_i ρ_K^i = (σ_{2-i}/(3-i)) R_{3-i,⊥} ρ_L^{3-i}`
/// and the spectral identity `ρ_L^{3-i} = κ M^{i-2} ρ_K^i`.
pub fn i_intersection_pair_check(
    k: &StarBody,
    l: &StarBody,
    i: usize,
    band: usize,
    tol: f64,
) -> Result<IdentityReport> {
    let gk = k.require_n3("the pair check")?;
    let gl = l.require_n3("the pair check")?;
    gk.same_grid(gl)?;
    if !(1..=2).contains(&i) {
        return Err(Error::InvalidArgument(format!(
            "i must be 1 or 2 in R^3, got {i}"
        )));
    }
    let n = k.n;
    let sigma = crate::multipliers::sigma;
    let pk = gk.map(|v| v.powi(i as i32));
    let pl = gl.map(|v| v.powi(3 - i as i32));
    let lhs_c = sigma(i) / i as f64;
    let rhs_c = sigma(3 - i) / (3 - i) as f64;
    // both sides as even functions keyed by the direction of ξ (lines) or its normal (planes)
    let (lhs, rhs) = if i == 2 {
        (funk_direct(&pk, band)?, radon_r1_grid(&pl).repr)
    } else {
        (radon_r1_grid(&pk).repr, funk_direct(&pl, band)?)
    };
    let mut sections = ErrorTally::new();
    sections.push_slices(&lhs.scale(lhs_c).values, &rhs.scale(rhs_c).values);

    let kappa = constant(Constant::IntersectionPair, n, i, 0.0)?;
    let alpha = i as f64 - 2.0;
    let spec = apply_spectral(&analyze(&pk, band)?, &Operator::Cosine { alpha })?.scale(kappa);
    let mut spectral = ErrorTally::new();
    spectral.push_slices(&synthesize(&spec, &gk.grid)?.values, &pl.values);

    let mut all = sections;
    all.merge(&spectral);
    let note = format!(
        "sections {:.3e}, spectral {:.3e}",
        sections.error(Metric::Mixed),
        spectral.error(Metric::Mixed)
    );
    let mut report = all.report(
        "i_intersection_pair",
        Params::default().n(3).i(i).band(band).note(note),
        Metric::Mixed,
        tol,
    );
    report.pass =
        report.pass && sections.error(Metric::Mixed) <= tol && spectral.error(Metric::Mixed) <= tol;
    Ok(report)
}

/// Chain for bodies `K` with `ρ_K = R_2^* ν` (`n = 3`, `i = 1`): checks
/// `R_1 ρ_K = R_{2,⊥} μ` with `μ = R_1^* ν^⊥`, where `g` is the density of `ν` keyed by normals.
pub fn istar_chain_check(g: &GridFunction, band: usize, tol: f64) -> Result<IdentityReport> {
    let nu = GrassmannFunctionS2::new(GrassmannKind::Planes, g.clone())?;
    let rho_k = dual_radon(&nu, band)?;
    let min = rho_k.min();
    if !(min > 0.0) {
        return Err(Error::NonPositiveBody { min });
    }
    let lhs = radon_r1_grid(&rho_k);
    let mu = dual_radon(&nu.perp(), band)?;
    let rhs = GrassmannFunctionS2::new(GrassmannKind::Planes, funk_direct(&mu, band)?.even_part())?
        .perp();
    let mut tally = ErrorTally::new();
    tally.push_slices(&lhs.repr.values, &rhs.repr.values);
    Ok(tally.report(
        "istar_chain",
        Params::default().n(3).i(1).band(band),
        Metric::Mixed,
        tol,
    ))
}
