use std::collections::BTreeSet;
use std::f64::consts::PI;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::{json, Value};
use tempfile::TempDir;

use coslab::s2::grid::{GridFunction, S2Grid};
use coslab::suites::seeded_body;

fn coslab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_coslab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 output")
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("utf-8 output")
}

fn read(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).expect("file exists")).expect("valid JSON")
}

fn write(dir: &TempDir, name: &str, v: &Value) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, serde_json::to_string(v).unwrap()).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn check_schema(report: &Value) {
    let schema_path = Path::new(env!("CARGO_MANIFEST_DIR")).join("schema/run_report.schema.json");
    let schema = read(&schema_path);
    let compiled = jsonschema::JSONSchema::compile(&schema).expect("schema compiles");
    let msgs: Vec<String> = match compiled.validate(report) {
        Ok(()) => Vec::new(),
        Err(errors) => errors
            .map(|e| format!("{} at {}", e, e.instance_path))
            .collect(),
    };
    assert!(
        msgs.is_empty(),
        "report does not match the schema: {msgs:?}"
    );
}

fn failing(report: &Value) -> BTreeSet<String> {
    report["results"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|r| r["pass"] == json!(false))
        .map(|r| r["identity"].as_str().unwrap().to_string())
        .collect()
}

/// Sign of Γ(x) away from its poles.
fn gamma_sign(x: f64) -> f64 {
    if x < 0.0 && (x.floor() as i64).rem_euclid(2) == 1 {
        -1.0
    } else {
        1.0
    }
}

#[test]
fn multiplier_table_csv() {
    let out = coslab(&[
        "multiplier",
        "--family",
        "m",
        "--n",
        "3",
        "--alpha",
        "0.5",
        "--jmax",
        "2",
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let text = stdout(&out);
    let rows: Vec<(usize, f64)> = text
        .lines()
        .skip(1)
        .map(|l| {
            let (j, v) = l.split_once(',').unwrap();
            (j.parse().unwrap(), v.parse().unwrap())
        })
        .collect();
    assert_eq!(text.lines().next(), Some("j,value"));
    assert_eq!(rows.len(), 3);
    assert!((rows[0].1 - 4.0).abs() < 1e-14);
    assert_eq!(rows[1].1, 0.0);
    // -Γ(5/4)/Γ(9/4) = -1/(5/4)
    assert!((rows[2].1 + 0.8).abs() < 1e-14);
}

#[test]
fn sine_order_zero_is_identity() {
    let out = coslab(&[
        "multiplier",
        "--family",
        "q",
        "--n",
        "5",
        "--alpha",
        "0",
        "--jmax",
        "4",
        "--format",
        "json",
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 5);
    for (j, row) in rows.iter().enumerate() {
        let want = if j % 2 == 0 { 1.0 } else { 0.0 };
        assert_eq!(row["value"].as_f64().unwrap(), want, "row {j}");
    }
}

#[test]
fn excluded_alpha_exits_3() {
    let out = coslab(&["multiplier", "--family", "m", "--n", "3", "--alpha", "1"]);
    assert_eq!(code(&out), 3);
    assert!(stderr(&out).contains("{1, 3, 5, ...}"), "{}", stderr(&out));
}

#[test]
fn parse_errors_exit_2() {
    assert_eq!(
        code(&coslab(&[
            "multiplier",
            "--family",
            "m",
            "--n",
            "3",
            "--alpha",
            "half"
        ])),
        2
    );
    assert_eq!(
        code(&coslab(&["multiplier", "--family", "nope", "--n", "3"])),
        2
    );
    assert_eq!(code(&coslab(&["verify", "--suite", "everything"])), 2);
    assert_eq!(code(&coslab(&["frobnicate"])), 2);
}

#[test]
fn thread_cap_must_be_numeric() {
    let out = Command::new(env!("CARGO_BIN_EXE_coslab"))
        .args(["multiplier", "--family", "m", "--n", "3", "--alpha", "0.5"])
        .env("COSLAB_THREADS", "many")
        .output()
        .unwrap();
    assert_eq!(code(&out), 2);
    let ok = Command::new(env!("CARGO_BIN_EXE_coslab"))
        .args(["multiplier", "--family", "m", "--n", "3", "--alpha", "0.5"])
        .env("COSLAB_THREADS", "2")
        .output()
        .unwrap();
    assert_eq!(code(&ok), 0);
}

#[test]
fn config_file_overrides_and_rejects_unknown_keys() {
    let dir = TempDir::new().unwrap();
    let good = dir.path().join("good.cfg");
    std::fs::write(&good, "# grid for bodies\nn_theta = 16\nn_phi = 32\n").unwrap();
    let out_path = dir.path().join("ball.json");
    let out = coslab(&[
        "--config",
        s(&good),
        "body",
        "make",
        "--shape",
        "ball",
        "--r",
        "1",
        "--out",
        s(&out_path),
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert_eq!(
        read(&out_path)["payload"]["values"]
            .as_array()
            .unwrap()
            .len(),
        16 * 32
    );

    let bad = dir.path().join("bad.cfg");
    std::fs::write(&bad, "colour = blue\n").unwrap();
    let out = coslab(&[
        "--config",
        s(&bad),
        "multiplier",
        "--family",
        "m",
        "--n",
        "3",
        "--alpha",
        "0.5",
    ]);
    assert_eq!(code(&out), 2);
}

#[test]
fn multipliers_suite_report() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("report.json");
    let out = coslab(&[
        "verify",
        "--suite",
        "multipliers",
        "--n",
        "2,3,5,8",
        "--jmax",
        "200",
        "--tol",
        "1e-10",
        "--out",
        s(&path),
    ]);
    let report = read(&path);
    check_schema(&report);
    // the only red item is the literal pairing of the two Poisson-integral factors
    assert_eq!(
        failing(&report),
        BTreeSet::from(["smoothing_poisson_factorization".to_string()])
    );
    assert_eq!(code(&out), 1);
    let results = report["results"].as_array().unwrap();
    assert_eq!(
        report["pass_count"].as_u64().unwrap() + report["fail_count"].as_u64().unwrap(),
        results.len() as u64
    );
    for name in [
        "cosine_inversion",
        "cosine_semigroup",
        "smoothing_factorization",
        "smoothing_poisson_factorization_shifted",
    ] {
        let ours: Vec<&Value> = results
            .iter()
            .filter(|r| r["identity"] == json!(name))
            .collect();
        assert_eq!(ours.len(), 4, "{name}");
        assert!(ours.iter().all(|r| r["pass"] == json!(true)), "{name}");
    }
}

#[test]
fn s2_suite_report() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("report.json");
    let out = coslab(&[
        "verify",
        "--suite",
        "s2",
        "--lmax",
        "12",
        "--tol",
        "1e-6",
        "--seed",
        "7",
        "--out",
        s(&path),
    ]);
    let report = read(&path);
    check_schema(&report);
    let want: BTreeSet<String> = ["cosine_limit_at_zero", "dual_family_inversion"]
        .map(String::from)
        .into();
    assert_eq!(failing(&report), want);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("FAIL dual_family_inversion"));
}

#[test]
fn verify_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let run = |name: &str| {
        let path = dir.path().join(name);
        let out = coslab(&[
            "verify",
            "--suite",
            "zonal",
            "--seed",
            "11",
            "--out",
            s(&path),
        ]);
        assert_eq!(code(&out), 0, "{}", stderr(&out));
        read(&path)
    };
    let (a, b) = (run("a.json"), run("b.json"));
    check_schema(&a);
    assert_eq!(a["results"], b["results"]);
    assert_eq!(a["config"], b["config"]);
}

#[test]
fn funk_of_square_profile() {
    let dir = TempDir::new().unwrap();
    // t² = 1/3 + (2/3)P₂ and the orthonormal degree-2 element is √5 P₂
    let f = json!({ "n": 3, "basis": "orthonormal-gegenbauer-prob", "coeffs": [1.0 / 3.0, 0.0, 2.0 / (3.0 * 5f64.sqrt())] });
    let input = write(&dir, "sq.json", &f);
    let output = dir.path().join("funk.json");
    let out = coslab(&[
        "apply",
        "--op",
        "funk",
        "--input",
        s(&input),
        "--output",
        s(&output),
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let g = read(&output);
    let c: Vec<f64> = g["coeffs"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_f64().unwrap())
        .collect();
    // (1-t²)/2 = 1/3 - (1/3)P₂
    assert!((c[0] - 1.0 / 3.0).abs() < 1e-15);
    assert!(c[1].abs() < 1e-15);
    assert!((c[2] + 1.0 / (3.0 * 5f64.sqrt())).abs() < 1e-15);
    assert_eq!(g["meta"]["op"], json!("funk"));
}

#[test]
fn direct_cosine_of_constant_grid() {
    let dir = TempDir::new().unwrap();
    let grid = S2Grid::new(16, 32).unwrap();
    let input = write(
        &dir,
        "one.json",
        &serde_json::to_value(GridFunction::constant(&grid, 1.0)).unwrap(),
    );
    let output = dir.path().join("c.json");
    let out = coslab(&[
        "apply",
        "--op",
        "cosine",
        "--method",
        "direct",
        "--alpha",
        "2",
        "--input",
        s(&input),
        "--output",
        s(&output),
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let g = read(&output);
    let values = g["values"].as_array().unwrap();
    assert_eq!(values.len(), 16 * 32);
    assert!(values
        .iter()
        .all(|v| (v.as_f64().unwrap() + 2.0 * PI.sqrt()).abs() < 1e-10));
    assert_eq!(g["meta"]["method"], json!("direct"));

    let out = coslab(&[
        "apply",
        "--op",
        "cosine",
        "--method",
        "direct",
        "--alpha",
        "0.2",
        "--input",
        s(&input),
    ]);
    assert_eq!(code(&out), 3);
}

#[test]
fn sine_order_zero_is_byte_stable() {
    let dir = TempDir::new().unwrap();
    let c = coslab::testfns::random_coeffs(6, 3, false);
    let input = write(&dir, "c.json", &serde_json::to_value(&c).unwrap());
    let (once, twice) = (dir.path().join("once.json"), dir.path().join("twice.json"));
    for (src, dst) in [(&input, &once), (&once, &twice)] {
        let out = coslab(&[
            "apply",
            "--op",
            "qalpha",
            "--alpha",
            "0",
            "--input",
            s(src),
            "--output",
            s(dst),
        ]);
        assert_eq!(code(&out), 0, "{}", stderr(&out));
    }
    assert_eq!(
        std::fs::read(&once).unwrap(),
        std::fs::read(&twice).unwrap()
    );
    let got: Vec<f64> = read(&once)["coeffs"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_f64().unwrap())
        .collect();
    assert_eq!(got, c.even_part().into_vec());
}

#[test]
fn representation_errors_exit_4() {
    let dir = TempDir::new().unwrap();
    let unknown = write(&dir, "u.json", &json!({ "something": [1, 2, 3] }));
    assert_eq!(
        code(&coslab(&["apply", "--op", "funk", "--input", s(&unknown)])),
        4
    );

    let not_json = dir.path().join("x.json");
    std::fs::write(&not_json, "not json").unwrap();
    assert_eq!(
        code(&coslab(&["apply", "--op", "funk", "--input", s(&not_json)])),
        4
    );

    let zonal = write(
        &dir,
        "z.json",
        &json!({ "n": 3, "basis": "orthonormal-gegenbauer-prob", "coeffs": [1.0] }),
    );
    assert_eq!(
        code(&coslab(&["apply", "--op", "radon", "--input", s(&zonal)])),
        4
    );
    let wrong_basis = write(
        &dir,
        "w.json",
        &json!({ "n": 3, "basis": "monomial", "coeffs": [1.0] }),
    );
    assert_eq!(
        code(&coslab(&[
            "apply",
            "--op",
            "funk",
            "--input",
            s(&wrong_basis)
        ])),
        4
    );
}

#[test]
fn intersection_body_of_ball() {
    let dir = TempDir::new().unwrap();
    let (ball, ib) = (dir.path().join("ball.json"), dir.path().join("ib.json"));
    assert_eq!(
        code(&coslab(&[
            "body",
            "make",
            "--shape",
            "ball",
            "--r",
            "2",
            "--n",
            "3",
            "--out",
            s(&ball)
        ])),
        0
    );
    let out = coslab(&["body", "intersect", "--input", s(&ball), "--out", s(&ib)]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let k = read(&ib);
    assert_eq!(k["repr_kind"], json!("grid"));
    let values = k["payload"]["values"].as_array().unwrap();
    assert!(values
        .iter()
        .all(|v| (v.as_f64().unwrap() - 4.0 * PI).abs() < 1e-12 * 4.0 * PI));
}

#[test]
fn ball_sweep_matches_gamma_signs() {
    let dir = TempDir::new().unwrap();
    let (ball, report, csv) = (
        dir.path().join("b.json"),
        dir.path().join("r.json"),
        dir.path().join("s.csv"),
    );
    assert_eq!(
        code(&coslab(&[
            "body",
            "make",
            "--shape",
            "ball",
            "--r",
            "1",
            "--out",
            s(&ball)
        ])),
        0
    );
    let out = coslab(&[
        "body",
        "classify",
        "--input",
        s(&ball),
        "--alpha-min",
        "-3",
        "--alpha-max",
        "2.9",
        "--steps",
        "59",
        "--csv",
        s(&csv),
        "--out",
        s(&report),
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let r = read(&report);
    check_schema(&r);
    assert_eq!(r["results"].as_array().unwrap().len(), 59);

    let text = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(text.lines().next(), Some("alpha,min_value,verdict"));
    let rows: Vec<Vec<String>> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(String::from).collect())
        .collect();
    assert_eq!(rows.len(), 59);
    for row in rows {
        let alpha: f64 = row[0].parse().unwrap();
        let sign = gamma_sign((3.0 - alpha) / 2.0) * gamma_sign(alpha / 2.0);
        let want = if sign > 0.0 { "yes" } else { "no" };
        assert_eq!(row[2], want, "alpha = {alpha}");
        assert_eq!(
            row[1].parse::<f64>().unwrap().signum(),
            sign,
            "alpha = {alpha}"
        );
    }

    let out = coslab(&["body", "classify", "--input", s(&ball), "--alpha", "0"]);
    assert_eq!(code(&out), 3);
}

#[test]
fn bad_bodies_exit_5() {
    let dir = TempDir::new().unwrap();
    let grid = S2Grid::new(8, 16).unwrap();
    let body = |rho: GridFunction| json!({ "n": 3, "repr_kind": "grid", "payload": rho, "meta": { "shape": "custom", "params": {} } });
    let odd = write(
        &dir,
        "odd.json",
        &body(GridFunction::from_fn(&grid, |x| 1.0 + 0.3 * x[2])),
    );
    let out = coslab(&[
        "body",
        "classify",
        "--input",
        s(&odd),
        "--alpha",
        "1",
        "--lmax",
        "6",
    ]);
    assert_eq!(code(&out), 5, "{}", stderr(&out));

    let negative = write(
        &dir,
        "neg.json",
        &body(GridFunction::from_fn(&grid, |x| x[0] * x[0] - 0.5)),
    );
    assert_eq!(
        code(&coslab(&["body", "intersect", "--input", s(&negative)])),
        5
    );
    assert_eq!(
        code(&coslab(&["body", "make", "--shape", "ball", "--r", "-1"])),
        2
    );
}

#[test]
fn pair_check_on_constructed_pairs() {
    let dir = TempDir::new().unwrap();
    let grid = S2Grid::new(48, 96).unwrap();
    let l_body = seeded_body(&grid, 7).unwrap();
    let l = write(&dir, "l.json", &serde_json::to_value(&l_body).unwrap());
    let k = dir.path().join("k.json");
    let out = coslab(&[
        "body",
        "intersect",
        "--input",
        s(&l),
        "--i",
        "2",
        "--lmax",
        "12",
        "--out",
        s(&k),
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));

    let report = dir.path().join("pair.json");
    let out = coslab(&[
        "body",
        "pair-check",
        "--k",
        s(&k),
        "--l",
        s(&l),
        "--i",
        "2",
        "--lmax",
        "12",
        "--out",
        s(&report),
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    check_schema(&read(&report));
    let out = coslab(&[
        "body",
        "pair-check",
        "--k",
        s(&l),
        "--l",
        s(&k),
        "--i",
        "1",
        "--lmax",
        "12",
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));

    let ball = dir.path().join("ball.json");
    assert_eq!(
        code(&coslab(&[
            "body",
            "make",
            "--shape",
            "ball",
            "--r",
            "1",
            "--out",
            s(&ball)
        ])),
        0
    );
    let out = coslab(&[
        "body",
        "pair-check",
        "--k",
        s(&ball),
        "--l",
        s(&ball),
        "--i",
        "2",
        "--lmax",
        "12",
    ]);
    assert_eq!(code(&out), 1);
}
