//! Self-verification suites, runnable from the CLI (`qcst verify`) and
//! reused by the acceptance tests.
//!
//! Each check measures one number and compares it against a pinned bound;
//! the jet pipeline is always checked against an independent route (the
//! finite-difference oracle, the scalar evaluator, closed-form values, or
//! a second algebraic formula).

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qcst_core::curvature::{self, CurvatureBundle};
use qcst_core::diagnostics;
use qcst_core::expr::{Expr, Params};
use qcst_core::fluid;
use qcst_core::frg::{self, FrModel, GridSpec};
use qcst_core::jet::Jet3;
use qcst_core::linalg::{self, Vec4};
use qcst_core::metric::{builtin, eval_metric, MetricSpec};
use qcst_core::qc;

use crate::csvout;
use crate::oracle;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Cmp {
    /// Pass when `measured <= bound`.
    Le,
    /// Pass when `measured >= bound`.
    Ge,
}

#[derive(Debug, Clone)]
pub struct CheckResult {
    pub name: String,
    pub measured: f64,
    pub bound: f64,
    pub cmp: Cmp,
}

impl CheckResult {
    fn le(name: impl Into<String>, measured: f64, bound: f64) -> Self {
        CheckResult {
            name: name.into(),
            measured,
            bound,
            cmp: Cmp::Le,
        }
    }

    fn ge(name: impl Into<String>, measured: f64, bound: f64) -> Self {
        CheckResult {
            name: name.into(),
            measured,
            bound,
            cmp: Cmp::Ge,
        }
    }

    pub fn pass(&self) -> bool {
        match self.cmp {
            Cmp::Le => self.measured <= self.bound,
            Cmp::Ge => self.measured >= self.bound,
        }
    }

    /// One machine-readable line: `PASS|FAIL <name> <measured> <bound>`.
    pub fn line(&self) -> String {
        format!(
            "{} {} {:.3e} {}{:.3e}",
            if self.pass() { "PASS" } else { "FAIL" },
            self.name,
            self.measured,
            match self.cmp {
                Cmp::Le => "<=",
                Cmp::Ge => ">=",
            },
            self.bound
        )
    }
}

pub const SUITE_NAMES: [&str; 6] = [
    "jets",
    "parser",
    "curvature-oracle",
    "qc-roundtrip",
    "theorem-fixtures",
    "frg-identities",
];

/// Run one suite by name; `Err` is a harness fault, not a check failure.
pub fn run_suite(name: &str, tol: f64) -> Result<Vec<CheckResult>, String> {
    match name {
        "jets" => Ok(suite_jets()),
        "parser" => Ok(suite_parser()),
        "curvature-oracle" => suite_curvature_oracle(),
        "qc-roundtrip" => suite_qc_roundtrip(tol),
        "theorem-fixtures" => suite_theorem_fixtures(tol),
        "frg-identities" => suite_frg_identities(),
        other => Err(format!("unknown suite `{other}`")),
    }
}

/// A catalog entry plus a sampling box of regular points.
pub struct Fixture {
    pub name: &'static str,
    pub params: &'static [(&'static str, &'static str)],
    pub ranges: [(f64, f64); 4],
    /// Does the QC detector accept this metric?
    pub expect_qc: bool,
}

pub const FIXTURES: [Fixture; 7] = [
    Fixture {
        name: "minkowski",
        params: &[],
        ranges: [(-2.0, 2.0), (-2.0, 2.0), (-2.0, 2.0), (-2.0, 2.0)],
        expect_qc: true,
    },
    Fixture {
        name: "flrw-flat",
        params: &[("a", "t^2")],
        ranges: [(0.5, 2.0), (-2.0, 2.0), (-2.0, 2.0), (-2.0, 2.0)],
        expect_qc: true,
    },
    Fixture {
        name: "flrw-closed",
        params: &[("a", "t^2")],
        ranges: [(0.5, 2.0), (0.4, 2.7), (0.4, 2.7), (-3.0, 3.0)],
        expect_qc: true,
    },
    Fixture {
        name: "flrw-open",
        params: &[("a", "t^2")],
        ranges: [(0.5, 2.0), (0.3, 1.8), (0.4, 2.7), (-3.0, 3.0)],
        expect_qc: true,
    },
    Fixture {
        name: "de-sitter",
        params: &[("k", "1")],
        ranges: [(-1.0, 1.0), (-2.0, 2.0), (-2.0, 2.0), (-2.0, 2.0)],
        expect_qc: true,
    },
    Fixture {
        name: "einstein-static",
        params: &[("a0", "1")],
        ranges: [(-2.0, 2.0), (0.4, 2.7), (0.4, 2.7), (-3.0, 3.0)],
        expect_qc: true,
    },
    Fixture {
        name: "schwarzschild",
        params: &[("M", "1")],
        ranges: [(-2.0, 2.0), (3.0, 10.0), (0.4, 2.7), (-3.0, 3.0)],
        expect_qc: false,
    },
];

pub fn fixture_spec(f: &Fixture) -> MetricSpec {
    let params = f
        .params
        .iter()
        .map(|(k, v)| (k.to_string(), v.to_string()))
        .collect();
    builtin(f.name, &params).expect("catalog fixtures are valid")
}

pub fn sample_point(f: &Fixture, rng: &mut impl Rng) -> Vec4 {
    std::array::from_fn(|i| rng.gen_range(f.ranges[i].0..f.ranges[i].1))
}

fn rel4(a: &qcst_core::linalg::Rank4, b: &qcst_core::linalg::Rank4) -> f64 {
    let mut num = 0.0;
    let mut den = 0.0;
    for h in 0..4 {
        for i in 0..4 {
            for j in 0..4 {
                for k in 0..4 {
                    let d = a[h][i][j][k] - b[h][i][j][k];
                    num += d * d;
                    den += a[h][i][j][k] * a[h][i][j][k];
                }
            }
        }
    }
    num.sqrt() / den.sqrt().max(1.0)
}

fn rel2(a: &qcst_core::linalg::Mat4, b: &qcst_core::linalg::Mat4) -> f64 {
    let mut num = 0.0;
    let mut den = 0.0;
    for i in 0..4 {
        for j in 0..4 {
            let d = a[i][j] - b[i][j];
            num += d * d;
            den += a[i][j] * a[i][j];
        }
    }
    num.sqrt() / den.sqrt().max(1.0)
}

/// Mixed relative/absolute deviation used for route-equivalence checks.
fn reldev(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1.0)
}

// ---------------------------------------------------------------- jets

fn suite_jets() -> Vec<CheckResult> {
    let mut out = Vec::new();

    // (2+h)^3 against hand-expanded Taylor coefficients
    let t = Jet3::variable(0, 2.0);
    let cube = t * t * t;
    let expect = [(0u8, 8.0), (1, 12.0), (2, 6.0), (3, 1.0)];
    let worst = expect
        .iter()
        .map(|&(d, c)| (cube.coeff([d, 0, 0, 0]) - c).abs() / c.abs().max(1.0))
        .fold(0.0f64, f64::max);
    out.push(CheckResult::le("jets.cube-coefficients", worst, 1e-13));

    // geometric series 1/(1+h)
    let geo = Jet3::constant(1.0)
        .try_div(&Jet3::variable(1, 1.0))
        .unwrap();
    let expect = [1.0, -1.0, 1.0, -1.0];
    let worst = (0u8..4)
        .map(|d| (geo.coeff([0, d, 0, 0]) - expect[d as usize]).abs())
        .fold(0.0f64, f64::max);
    out.push(CheckResult::le("jets.geometric-series", worst, 1e-14));

    // Mercator series for log(1+h)
    let log = Jet3::variable(2, 1.0).ln().unwrap();
    let expect = [0.0, 1.0, -0.5, 1.0 / 3.0];
    let worst = (0u8..4)
        .map(|d| (log.coeff([0, 0, d, 0]) - expect[d as usize]).abs())
        .fold(0.0f64, f64::max);
    out.push(CheckResult::le("jets.mercator-series", worst, 1e-14));

    // sin^2 + cos^2 = 1 through all coefficients
    let x = Jet3::variable(3, 0.77);
    let unit = x.sin() * x.sin() + x.cos() * x.cos();
    let mut worst = (unit.value() - 1.0).abs();
    for c in &unit.coeffs[1..] {
        worst = worst.max(c.abs());
    }
    out.push(CheckResult::le("jets.pythagorean-identity", worst, 1e-13));

    // chain rule against a central-difference oracle (step 1e-4)
    let scalar = |u: f64| (u.sin().exp()) * (u + 2.0).sqrt();
    let mut worst = 0.0f64;
    for &u0 in &[0.3, 1.1, 2.7, -0.8] {
        let u = Jet3::variable(0, u0);
        let j = (u.sin().exp()) * (u + Jet3::constant(2.0)).sqrt().unwrap();
        let h = 1e-4;
        let fd = (scalar(u0 + h) - scalar(u0 - h)) / (2.0 * h);
        worst = worst.max((j.partial([1, 0, 0, 0]) - fd).abs() / fd.abs().max(1.0));
    }
    out.push(CheckResult::le("jets.chain-rule-fd", worst, 1e-6));

    // ring laws on deterministic pseudo-random jets
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut worst_comm = 0.0f64;
    let mut worst_assoc = 0.0f64;
    for _ in 0..50 {
        let mk = |rng: &mut ChaCha8Rng| {
            let mut coeffs = [0.0; qcst_core::jet::NUM_COEFFS];
            for c in coeffs.iter_mut() {
                *c = rng.gen_range(-2.0..2.0);
            }
            Jet3 { coeffs }
        };
        let (a, b, c) = (mk(&mut rng), mk(&mut rng), mk(&mut rng));
        let ab = a * b;
        let ba = b * a;
        for (p, q) in ab.coeffs.iter().zip(ba.coeffs.iter()) {
            worst_comm = worst_comm.max((p - q).abs() / p.abs().max(1.0));
        }
        let l = (a * b) * c;
        let r = a * (b * c);
        for (p, q) in l.coeffs.iter().zip(r.coeffs.iter()) {
            worst_assoc = worst_assoc.max((p - q).abs() / p.abs().max(1.0));
        }
    }
    out.push(CheckResult::le("jets.mul-commutative", worst_comm, 1e-13));
    out.push(CheckResult::le("jets.mul-associative", worst_assoc, 1e-12));

    out
}

// -------------------------------------------------------------- parser

fn suite_parser() -> Vec<CheckResult> {
    let coords = ["t", "x", "y", "z"];
    let mut out = Vec::new();

    let shape_ok = matches!(
        Expr::parse_str("a+b*c", &[]),
        Ok(Expr::Binary {
            op: qcst_core::expr::BinOp::Add,
            ..
        })
    );
    out.push(CheckResult::le(
        "parser.precedence-shape",
        if shape_ok { 0.0 } else { 1.0 },
        0.0,
    ));

    let v = Expr::parse_str("-t^2", &coords)
        .unwrap()
        .eval_scalar(&[3.0, 0.0, 0.0, 0.0], &Params::new())
        .unwrap();
    out.push(CheckResult::le("parser.unary-vs-pow", (v + 9.0).abs(), 1e-14));

    let v = Expr::parse_str("2^3^2", &[])
        .unwrap()
        .eval_scalar(&[0.0; 4], &Params::new())
        .unwrap();
    out.push(CheckResult::le(
        "parser.pow-right-associative",
        (v - 512.0).abs(),
        1e-12,
    ));

    let corpus = [
        "a+b*c",
        "-t^2",
        "(a+b)*c",
        "a-(b-c)",
        "exp(sqrt(t)*sin(x))-cosh(y)/2.5",
        "t^(-2)*x+1.0e-3",
    ];
    let mut failures = 0.0;
    for src in corpus {
        let e = Expr::parse_str(src, &coords).unwrap();
        match Expr::parse_str(&e.to_string(), &coords) {
            Ok(back) if back == e => {}
            _ => failures += 1.0,
        }
    }
    out.push(CheckResult::le("parser.round-trip-corpus", failures, 0.0));

    // random domain-safe expressions: jet value vs scalar evaluator
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let src = random_safe_expr(&mut rng, 0);
        let e = Expr::parse_str(&src, &coords).expect("generated expressions parse");
        let point = [
            rng.gen_range(0.4..1.9),
            rng.gen_range(0.4..1.9),
            rng.gen_range(0.4..1.9),
            rng.gen_range(0.4..1.9),
        ];
        let s = e.eval_scalar(&point, &Params::new()).expect("domain safe");
        let env: [Jet3; 4] = std::array::from_fn(|i| Jet3::variable(i, point[i]));
        let j = e.evaluate(&env, &Params::new()).expect("domain safe");
        worst = worst.max((j.value() - s).abs() / s.abs().max(1.0));
    }
    out.push(CheckResult::le("parser.scalar-vs-jet-corpus", worst, 1e-13));

    out
}

/// Random expression over positive-safe constructs: every subexpression
/// stays strictly positive, so log/sqrt/div never leave their domain.
fn random_safe_expr(rng: &mut ChaCha8Rng, depth: usize) -> String {
    if depth >= 3 || rng.gen_bool(0.3) {
        return match rng.gen_range(0..3) {
            0 => format!("{:?}", rng.gen_range(0.2..3.0f64)),
            1 => ["t", "x", "y", "z"][rng.gen_range(0..4)].to_string(),
            _ => format!("{}", rng.gen_range(1..4)),
        };
    }
    let a = random_safe_expr(rng, depth + 1);
    let b = random_safe_expr(rng, depth + 1);
    match rng.gen_range(0..6) {
        0 => format!("({a}+{b})"),
        1 => format!("({a}*{b})"),
        2 => format!("({a}/{b})"),
        3 => format!("exp(sin({a}))"),
        4 => format!("sqrt(({a}+{b}))"),
        _ => format!("log((1+{a}))"),
    }
}

// ----------------------------------------------------- curvature-oracle

fn suite_curvature_oracle() -> Result<Vec<CheckResult>, String> {
    let mut out = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(42);

    for fixture in FIXTURES.iter() {
        let spec = fixture_spec(fixture);
        let mut worst_riemann = 0.0f64;
        let mut worst_ricci = 0.0f64;
        let mut worst_identity = 0.0f64;
        let mut worst_metric_derivs = 0.0f64;
        let mut worst_bianchi = 0.0f64;
        let mut worst_weyl_trace = 0.0f64;
        let mut worst_symmetry = 0.0f64;
        for _ in 0..20 {
            let point = sample_point(fixture, &mut rng);
            let mj = eval_metric(&spec, &point)
                .map_err(|e| format!("{}: {e} at {point:?}", fixture.name))?;
            let bundle = curvature::compute(&mj);
            let fd = oracle::fd_curvature(&spec, &point, oracle::DEFAULT_STEP)
                .map_err(|e| format!("{}: {e}", fixture.name))?;

            worst_riemann = worst_riemann.max(rel4(&bundle.riemann, &fd.riemann));
            worst_ricci = worst_ricci.max(rel2(&bundle.ricci, &fd.ricci));

            // g . ginv = Id through every jet coefficient
            for i in 0..4 {
                for j in 0..4 {
                    let prod = linalg::jet_sum1(|k| mj.g[i][k] * mj.ginv[k][j]);
                    let target = if i == j { 1.0 } else { 0.0 };
                    worst_identity = worst_identity.max((prod.value() - target).abs());
                    for c in &prod.coeffs[1..] {
                        worst_identity = worst_identity.max(c.abs());
                    }
                }
            }

            // metric first/second derivatives against central differences
            let dg = oracle::metric_first_derivatives(&spec, &point, oracle::DEFAULT_STEP)
                .map_err(|e| format!("{}: {e}", fixture.name))?;
            let d2g = oracle::metric_second_derivatives(&spec, &point, oracle::DEFAULT_STEP)
                .map_err(|e| format!("{}: {e}", fixture.name))?;
            let scale = linalg::norm_mat4(&bundle.g).max(1.0);
            for k in 0..4 {
                for i in 0..4 {
                    for j in 0..4 {
                        let mut e = [0u8; 4];
                        e[k] = 1;
                        let jet_d = mj.g[i][j].partial(e);
                        worst_metric_derivs =
                            worst_metric_derivs.max((jet_d - dg[k][i][j]).abs() / scale);
                        for l in k..4 {
                            let mut e2 = [0u8; 4];
                            e2[k] += 1;
                            e2[l] += 1;
                            let jet_d2 = mj.g[i][j].partial(e2);
                            worst_metric_derivs = worst_metric_derivs
                                .max((jet_d2 - d2g[k][l][i][j]).abs() / scale);
                        }
                    }
                }
            }

            worst_bianchi = worst_bianchi.max(bundle.contracted_bianchi_rel());
            worst_weyl_trace = worst_weyl_trace.max(weyl_trace_rel(&bundle));
            worst_symmetry = worst_symmetry.max(tensor_symmetry_rel(&bundle));
        }
        out.push(CheckResult::le(
            format!("curvature-oracle.riemann-fd.{}", fixture.name),
            worst_riemann,
            1e-5,
        ));
        out.push(CheckResult::le(
            format!("curvature-oracle.ricci-fd.{}", fixture.name),
            worst_ricci,
            1e-5,
        ));
        out.push(CheckResult::le(
            format!("curvature-oracle.metric-inverse.{}", fixture.name),
            worst_identity,
            1e-12,
        ));
        out.push(CheckResult::le(
            format!("curvature-oracle.metric-derivs-fd.{}", fixture.name),
            worst_metric_derivs,
            1e-6,
        ));
        out.push(CheckResult::le(
            format!("curvature-oracle.contracted-bianchi.{}", fixture.name),
            worst_bianchi,
            1e-9,
        ));
        out.push(CheckResult::le(
            format!("curvature-oracle.weyl-traces.{}", fixture.name),
            worst_weyl_trace,
            1e-10,
        ));
        out.push(CheckResult::le(
            format!("curvature-oracle.tensor-symmetries.{}", fixture.name),
            worst_symmetry,
            1e-10,
        ));
    }

    // the curvature commutator assembled from oracle tensors
    let fixture = &FIXTURES[1]; // flrw-flat
    let spec = fixture_spec(fixture);
    let point = [1.0, 0.0, 0.0, 0.0];
    let bundle = curvature::compute(&eval_metric(&spec, &point).map_err(|e| e.to_string())?);
    let fd = oracle::fd_curvature(&spec, &point, oracle::DEFAULT_STEP)
        .map_err(|e| e.to_string())?;
    let fd_mixed = linalg::rank4(|h, i, j, k| {
        linalg::sum1(|p| fd.ginv[h][p] * fd.riemann[p][i][j][k])
    });
    let fd_q = linalg::rank4(|i, j, l, m| {
        -linalg::sum1(|p| {
            fd_mixed[p][i][l][m] * fd.ricci[p][j] + fd_mixed[p][j][l][m] * fd.ricci[i][p]
        })
    });
    out.push(CheckResult::le(
        "curvature-oracle.commutator-vs-oracle.flrw-flat",
        rel4(&bundle.riem_on_ricci, &fd_q),
        1e-5,
    ));

    Ok(out)
}

/// Worst violation of the algebraic curvature symmetries: antisymmetry in
/// each index pair, pair exchange, the first Bianchi identity, Ricci
/// symmetry, and the commutator matching its defining contraction.
fn tensor_symmetry_rel(bundle: &CurvatureBundle) -> f64 {
    let r = &bundle.riemann;
    let scale = bundle.riemann_norm().max(1.0);
    let mut worst = 0.0f64;
    for h in 0..4 {
        for i in 0..4 {
            for j in 0..4 {
                for k in 0..4 {
                    worst = worst.max((r[h][i][j][k] + r[i][h][j][k]).abs() / scale);
                    worst = worst.max((r[h][i][j][k] + r[h][i][k][j]).abs() / scale);
                    worst = worst.max((r[h][i][j][k] - r[j][k][h][i]).abs() / scale);
                    let bianchi = r[h][i][j][k] + r[h][j][k][i] + r[h][k][i][j];
                    worst = worst.max(bianchi.abs() / scale);
                }
            }
        }
    }
    let ricci_scale = bundle.ricci_norm().max(1.0);
    for i in 0..4 {
        for j in 0..4 {
            worst = worst
                .max((bundle.ricci[i][j] - bundle.ricci[j][i]).abs() / ricci_scale);
        }
    }
    // Q is its defining contraction, never a numerical derivative
    let q_scale = (bundle.riemann_norm() * bundle.ricci_norm()).max(1.0);
    for i in 0..4 {
        for j in 0..4 {
            for l in 0..4 {
                for m in 0..4 {
                    let direct = -linalg::sum1(|p| {
                        bundle.riemann_mixed[p][i][l][m] * bundle.ricci[p][j]
                            + bundle.riemann_mixed[p][j][l][m] * bundle.ricci[i][p]
                    });
                    worst = worst
                        .max((bundle.riem_on_ricci[i][j][l][m] - direct).abs() / q_scale);
                }
            }
        }
    }
    worst
}

fn weyl_trace_rel(bundle: &CurvatureBundle) -> f64 {
    let scale = bundle.riemann_norm().max(1.0);
    let traces = [
        linalg::mat4(|i, k| linalg::sum2(|h, j| bundle.ginv[h][j] * bundle.weyl[h][i][j][k])),
        linalg::mat4(|i, j| linalg::sum2(|h, k| bundle.ginv[h][k] * bundle.weyl[h][i][j][k])),
        linalg::mat4(|h, k| linalg::sum2(|i, j| bundle.ginv[i][j] * bundle.weyl[h][i][j][k])),
        linalg::mat4(|h, j| linalg::sum2(|i, k| bundle.ginv[i][k] * bundle.weyl[h][i][j][k])),
    ];
    traces
        .iter()
        .map(|t| linalg::norm_mat4(t) / scale)
        .fold(0.0, f64::max)
}

// --------------------------------------------------------- qc-roundtrip

fn suite_qc_roundtrip(tol: f64) -> Result<Vec<CheckResult>, String> {
    let mut out = Vec::new();

    // FLRW a = t^2 at t = 1
    let spec = fixture_spec(&FIXTURES[1]);
    let point = [1.0, 0.0, 0.0, 0.0];
    let bundle = curvature::compute(&eval_metric(&spec, &point).map_err(|e| e.to_string())?);
    let report = qc::detect_qc(&bundle, tol).map_err(|e| e.to_string())?;
    out.push(CheckResult::le(
        "qc-roundtrip.flrw-gamma",
        (report.gamma - 4.0).abs(),
        1e-8,
    ));
    out.push(CheckResult::le(
        "qc-roundtrip.flrw-mu",
        (report.mu - 2.0).abs(),
        1e-8,
    ));
    let gen = report
        .generator
        .ok_or("flrw detection lost its generator")?;
    let expected = [1.0, 0.0, 0.0, 0.0];
    let worst = (0..4)
        .map(|i| (gen.contravariant[i] - expected[i]).abs())
        .fold(0.0f64, f64::max);
    out.push(CheckResult::le("qc-roundtrip.flrw-generator", worst, 1e-8));
    out.push(CheckResult::le(
        "qc-roundtrip.flrw-riemann-residual",
        report.riemann_residual_rel,
        1e-8,
    ));
    out.push(CheckResult::le(
        "qc-roundtrip.flrw-accepted",
        if report.is_qc { 0.0 } else { 1.0 },
        0.0,
    ));

    // de Sitter: constant-curvature branch
    let spec = fixture_spec(&FIXTURES[4]);
    let bundle =
        curvature::compute(&eval_metric(&spec, &[0.2, 0.0, 0.0, 0.0]).map_err(|e| e.to_string())?);
    let report = qc::detect_qc(&bundle, tol).map_err(|e| e.to_string())?;
    out.push(CheckResult::le(
        "qc-roundtrip.de-sitter-mu",
        report.mu.abs(),
        1e-10,
    ));
    out.push(CheckResult::le(
        "qc-roundtrip.de-sitter-gamma",
        (report.gamma - 1.0).abs(),
        1e-10,
    ));
    out.push(CheckResult::le(
        "qc-roundtrip.de-sitter-constant-branch",
        if report.constant_curvature && report.generator.is_none() {
            0.0
        } else {
            1.0
        },
        0.0,
    ));

    // Schwarzschild must be rejected on its Weyl tensor
    let spec = fixture_spec(&FIXTURES[6]);
    let bundle = curvature::compute(
        &eval_metric(&spec, &[0.0, 3.0, std::f64::consts::FRAC_PI_2, 0.0])
            .map_err(|e| e.to_string())?,
    );
    let report = qc::detect_qc(&bundle, tol).map_err(|e| e.to_string())?;
    out.push(CheckResult::ge(
        "qc-roundtrip.schwarzschild-weyl",
        report.weyl_norm_rel,
        1e-2,
    ));
    out.push(CheckResult::le(
        "qc-roundtrip.schwarzschild-rejected",
        if report.is_qc { 1.0 } else { 0.0 },
        0.0,
    ));

    // synthetic round trips on random Lorentzian value parts
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst = 0.0f64;
    let mut trials = 0;
    while trials < 200 {
        let b = linalg::mat4(|i, j| {
            (if i == j { 1.0 } else { 0.0 }) + 0.3 * rng.gen_range(-1.0..1.0)
        });
        let eta = [-1.0, 1.0, 1.0, 1.0];
        let g = linalg::mat4(|i, j| linalg::sum1(|p| b[p][i] * eta[p] * b[p][j]));
        if linalg::invert4(&g).is_none() {
            continue;
        }
        let raw = [
            1.0,
            rng.gen_range(-0.4..0.4),
            rng.gen_range(-0.4..0.4),
            rng.gen_range(-0.4..0.4),
        ];
        let q = linalg::sum2(|i, j| g[i][j] * raw[i] * raw[j]);
        if q >= -0.05 {
            continue;
        }
        let a: Vec4 = std::array::from_fn(|i| raw[i] / (-q).sqrt());
        let a_cov: Vec4 = std::array::from_fn(|i| linalg::sum1(|j| g[i][j] * a[j]));
        let gamma = rng.gen_range(-2.0..2.0);
        let mu = rng.gen_range(0.1..2.0) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
        let riemann = qc::reconstruct_riemann(gamma, mu, &a_cov, &g);
        let rep = qc::detect_from_tensors(&g, &riemann, 1e-9)
            .map_err(|e| format!("synthetic detection failed: {e}"))?;
        let scale = gamma.abs().max(mu.abs()).max(1.0);
        worst = worst.max((rep.gamma - gamma).abs() / scale);
        worst = worst.max((rep.mu - mu).abs() / scale);
        let gen = rep.generator.ok_or("synthetic detection lost generator")?;
        for i in 0..4 {
            worst = worst.max((gen.contravariant[i] - a[i]).abs());
        }
        trials += 1;
    }
    out.push(CheckResult::le(
        "qc-roundtrip.synthetic-recovery",
        worst,
        1e-9,
    ));

    // nu = R_ij A^i A^j = 3 (mu - gamma) on every accepted fixture
    let mut worst_nu = 0.0f64;
    for fixture in FIXTURES.iter().filter(|f| f.expect_qc) {
        let spec = fixture_spec(fixture);
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let point = sample_point(fixture, &mut rng);
        let bundle =
            curvature::compute(&eval_metric(&spec, &point).map_err(|e| e.to_string())?);
        let report = qc::detect_qc(&bundle, tol).map_err(|e| e.to_string())?;
        if let Some(gen) = &report.generator {
            let nu = linalg::sum2(|i, j| {
                bundle.ricci[i][j] * gen.contravariant[i] * gen.contravariant[j]
            });
            worst_nu = worst_nu.max((nu - 3.0 * (report.mu - report.gamma)).abs());
        }
    }
    out.push(CheckResult::le("qc-roundtrip.nu-identity", worst_nu, 1e-8));

    Ok(out)
}

// ----------------------------------------------------- theorem-fixtures

fn suite_theorem_fixtures(tol: f64) -> Result<Vec<CheckResult>, String> {
    let mut out = Vec::new();
    let kappa = 1.0;
    let mut rng = ChaCha8Rng::seed_from_u64(1234);

    // fluid mapping against the stress-energy oracle on accepted fixtures
    let mut worst_sigma = 0.0f64;
    let mut worst_p = 0.0f64;
    let mut worst_sum = 0.0f64;
    for fixture in FIXTURES.iter().filter(|f| f.expect_qc) {
        let spec = fixture_spec(fixture);
        for _ in 0..5 {
            let point = sample_point(fixture, &mut rng);
            let bundle =
                curvature::compute(&eval_metric(&spec, &point).map_err(|e| e.to_string())?);
            let report = qc::detect_qc(&bundle, tol).map_err(|e| e.to_string())?;
            if !report.is_qc {
                return Err(format!("{} unexpectedly rejected", fixture.name));
            }
            let state = fluid::fluid_from_qc(report.gamma, report.mu, kappa)
                .map_err(|e| e.to_string())?;
            let t = fluid::stress_energy_from_einstein(&bundle, kappa)
                .map_err(|e| e.to_string())?;
            // projection direction: the generator, or any unit timelike
            // vector on the constant-curvature branch
            let a = match &report.generator {
                Some(gen) => gen.contravariant,
                None => {
                    let g00 = bundle.g[0][0];
                    [1.0 / (-g00).sqrt(), 0.0, 0.0, 0.0]
                }
            };
            let (sigma_oracle, p_oracle) = fluid::fluid_projections(&t, &bundle.ginv, &a);
            worst_sigma = worst_sigma.max((sigma_oracle - state.sigma).abs());
            worst_p = worst_p.max((p_oracle - state.p).abs());
            let expect = 2.0 * report.mu / (kappa * kappa);
            worst_sum = worst_sum.max(reldev(state.p + state.sigma, expect));
        }
    }
    out.push(CheckResult::le(
        "theorem-fixtures.fluid-sigma-oracle",
        worst_sigma,
        1e-8,
    ));
    out.push(CheckResult::le(
        "theorem-fixtures.fluid-p-oracle",
        worst_p,
        1e-8,
    ));
    out.push(CheckResult::le(
        "theorem-fixtures.p-plus-sigma",
        worst_sum,
        1e-12,
    ));

    // static fixture: equal scalars, parallel Ricci, Killing generator
    let fixture = &FIXTURES[5];
    let spec = fixture_spec(fixture);
    let mj = eval_metric(&spec, &[0.0, 1.0, 1.2, 0.4]).map_err(|e| e.to_string())?;
    let bundle = curvature::compute(&mj);
    let report = qc::detect_qc(&bundle, tol).map_err(|e| e.to_string())?;
    out.push(CheckResult::le(
        "theorem-fixtures.static-gamma",
        (report.gamma - 1.0).abs(),
        1e-10,
    ));
    out.push(CheckResult::le(
        "theorem-fixtures.static-mu",
        (report.mu - 1.0).abs(),
        1e-10,
    ));
    out.push(CheckResult::le(
        "theorem-fixtures.static-ricci-symmetric",
        diagnostics::ricci_symmetric_deviation(&bundle),
        1e-10,
    ));
    let gen = diagnostics::resolve_generator(&spec, &mj, &bundle, tol)
        .map_err(|e| e.to_string())?
        .ok_or("einstein-static has no generator")?;
    let checks = diagnostics::generator_checks(&bundle, &gen).map_err(|e| e.to_string())?;
    out.push(CheckResult::le(
        "theorem-fixtures.static-killing",
        checks.killing_dev,
        1e-10,
    ));
    out.push(CheckResult::le(
        "theorem-fixtures.static-vorticity",
        checks.vorticity_dev,
        1e-10,
    ));
    out.push(CheckResult::le(
        "theorem-fixtures.static-type-o",
        if diagnostics::conformally_flat(&bundle, tol) {
            0.0
        } else {
            1.0
        },
        0.0,
    ));

    // semi-symmetry fixtures
    let spec = fixture_spec(&FIXTURES[4]);
    let bundle = curvature::compute(
        &eval_metric(&spec, &[0.1, 0.4, 0.2, -0.5]).map_err(|e| e.to_string())?,
    );
    out.push(CheckResult::le(
        "theorem-fixtures.semisymmetry-de-sitter",
        diagnostics::semisymmetry_deviation(&bundle),
        1e-10,
    ));
    let spec = fixture_spec(&FIXTURES[6]);
    let bundle = curvature::compute(
        &eval_metric(&spec, &[0.0, 5.0, 1.0, 0.3]).map_err(|e| e.to_string())?,
    );
    out.push(CheckResult::le(
        "theorem-fixtures.semisymmetry-schwarzschild",
        diagnostics::semisymmetry_deviation(&bundle),
        1e-10,
    ));

    // Ricci symmetric implies Ricci semi-symmetric, and the QC dichotomy:
    // a Ricci-symmetric QC fixture has mu = 0 or mu = gamma
    let mut worst_semisym = 0.0f64;
    let mut worst_dichotomy = 0.0f64;
    for fixture in FIXTURES.iter() {
        let spec = fixture_spec(fixture);
        let point = sample_point(fixture, &mut rng);
        let bundle =
            curvature::compute(&eval_metric(&spec, &point).map_err(|e| e.to_string())?);
        if diagnostics::ricci_symmetric_deviation(&bundle) <= 1e-10 {
            worst_semisym = worst_semisym.max(diagnostics::semisymmetry_deviation(&bundle));
            let report = qc::detect_qc(&bundle, tol).map_err(|e| e.to_string())?;
            if report.is_qc {
                let split = report
                    .mu
                    .abs()
                    .min((report.mu - report.gamma).abs())
                    / report.gamma.abs().max(1.0);
                worst_dichotomy = worst_dichotomy.max(split);
            }
        }
    }
    out.push(CheckResult::le(
        "theorem-fixtures.symmetric-implies-semisymmetric",
        worst_semisym,
        1e-10,
    ));
    out.push(CheckResult::le(
        "theorem-fixtures.ricci-symmetric-dichotomy",
        worst_dichotomy,
        1e-8,
    ));

    // the expanding FLRW fixture is genuinely non-Codazzi
    let spec = fixture_spec(&FIXTURES[1]);
    let bundle = curvature::compute(
        &eval_metric(&spec, &[1.0, 0.0, 0.0, 0.0]).map_err(|e| e.to_string())?,
    );
    out.push(CheckResult::ge(
        "theorem-fixtures.codazzi-flrw-nonzero",
        diagnostics::codazzi_deviation(&bundle),
        0.1,
    ));

    // era classification fixtures
    let report = qc::detect_qc(&bundle, tol).map_err(|e| e.to_string())?;
    let state =
        fluid::fluid_from_qc(report.gamma, report.mu, kappa).map_err(|e| e.to_string())?;
    out.push(CheckResult::le(
        "theorem-fixtures.flrw-era-quintessence",
        if state.era == fluid::Era::Quintessence {
            0.0
        } else {
            1.0
        },
        0.0,
    ));
    let eras_ok = fluid::classify_era(1.0, 1.0) == fluid::Era::Stiff
        && fluid::classify_era(-2.0, 2.0) == fluid::Era::DarkMatter
        && fluid::classify_era(1.0, 3.0) == fluid::Era::Radiation
        && fluid::classify_era(0.0, 4.0) == fluid::Era::Dust;
    out.push(CheckResult::le(
        "theorem-fixtures.era-boundaries",
        if eras_ok { 0.0 } else { 1.0 },
        0.0,
    ));

    Ok(out)
}

// ------------------------------------------------------- frg-identities

fn suite_frg_identities() -> Result<Vec<CheckResult>, String> {
    let mut out = Vec::new();
    let model = FrModel::model_a(64).map_err(|e| e.to_string())?;

    // F_R collapses to e^R log R
    let mut worst = 0.0f64;
    for &r in &[1.0f64, 2.0, 3.0, 4.0, 5.0] {
        worst = worst.max((model.f_r(r) - r.exp() * r.ln()).abs());
    }
    out.push(CheckResult::le(
        "frg-identities.model-a-derivative",
        worst,
        1e-9,
    ));

    // truncation error shrinks (weakly) with more terms at R = 5
    let r = 5.0f64;
    let exact = r.exp() * r.ln();
    let errs: Vec<f64> = [8u32, 16, 32, 64]
        .iter()
        .map(|&l| {
            let m = FrModel::model_a(l).expect("valid term count");
            (m.f_r(r) - exact).abs()
        })
        .collect();
    let worst_increase = errs
        .windows(2)
        .map(|w| w[1] - w[0])
        .fold(f64::NEG_INFINITY, f64::max);
    out.push(CheckResult::le(
        "frg-identities.model-a-monotone-truncation",
        worst_increase,
        0.0,
    ));

    out.push(CheckResult::le(
        "frg-identities.model-a-fd-consistency",
        model.derivative_consistency(0.5, 10.0, 50),
        1e-5,
    ));

    // route equivalence and pure-GR reduction on 1000 random samples
    let gr = FrModel::pure_gr();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut worst_route = 0.0f64;
    let mut worst_gr = 0.0f64;
    let mut worst_sum = 0.0f64;
    let mut samples = 0;
    while samples < 1000 {
        let gamma = rng.gen_range(0.05..2.5);
        let mu = rng.gen_range(0.05..2.5);
        let r = frg::scalar_curvature(gamma, mu);
        if r <= 0.0 || r >= 30.0 {
            continue;
        }
        samples += 1;

        let (p, sigma) = frg::fr_pressure_density(gamma, mu, &model, 1.0)
            .map_err(|e| e.to_string())?;
        let (p_eff, sigma_eff) =
            frg::effective_quantities(p, sigma, r, &model, 1.0).map_err(|e| e.to_string())?;
        let (sigma_direct, p_direct) =
            frg::effective_from_qc(gamma, mu, &model, 1.0).map_err(|e| e.to_string())?;
        worst_route = worst_route.max(reldev(sigma_eff, sigma_direct));
        worst_route = worst_route.max(reldev(p_eff, p_direct));
        worst_sum = worst_sum.max(reldev(p + sigma, 2.0 * mu * model.f_r(r)));

        // with F(R) = R the whole pipeline is the plain fluid mapping
        let (p_gr, sigma_gr) =
            frg::fr_pressure_density(gamma, mu, &gr, 1.0).map_err(|e| e.to_string())?;
        let state = fluid::fluid_from_qc(gamma, mu, 1.0).map_err(|e| e.to_string())?;
        worst_gr = worst_gr.max(reldev(p_gr, state.p));
        worst_gr = worst_gr.max(reldev(sigma_gr, state.sigma));
        let (sigma_eff_gr, p_eff_gr) =
            frg::effective_from_qc(gamma, mu, &gr, 1.0).map_err(|e| e.to_string())?;
        worst_gr = worst_gr.max(reldev(sigma_eff_gr, state.sigma));
        worst_gr = worst_gr.max(reldev(p_eff_gr, state.p));
    }
    out.push(CheckResult::le(
        "frg-identities.route-equivalence",
        worst_route,
        1e-12,
    ));
    out.push(CheckResult::le(
        "frg-identities.pure-gr-reduction",
        worst_gr,
        1e-12,
    ));
    out.push(CheckResult::le(
        "frg-identities.p-plus-sigma-identity",
        worst_sum,
        1e-11,
    ));

    // scanner determinism: identical bytes on a re-run
    let grid = GridSpec::default();
    let (rec1, _) = frg::scan_grid(&grid, &model, 1.0).map_err(|e| e.to_string())?;
    let (rec2, _) = frg::scan_grid(&grid, &model, 1.0).map_err(|e| e.to_string())?;
    let csv1 = csvout::render_ec_csv(&rec1);
    let csv2 = csvout::render_ec_csv(&rec2);
    out.push(CheckResult::le(
        "frg-identities.scan-determinism",
        if csv1 == csv2 { 0.0 } else { 1.0 },
        0.0,
    ));

    Ok(out)
}
