//! Per-point analysis and its text/CSV rendering.

use std::fmt::Write as _;

use qcst_core::curvature;
use qcst_core::diagnostics::{self, DiagnosticsReport};
use qcst_core::fluid::{self, EnergyConditions, FluidState};
use qcst_core::linalg::Vec4;
use qcst_core::metric::{eval_metric, MetricError, MetricSpec};
use qcst_core::qc::{self, QcError, QcReport};

use crate::csvout::float17;

/// Everything the analyze command reports for one point.
#[derive(Debug, Clone)]
pub struct PointAnalysis {
    pub point: Vec4,
    pub scalar: f64,
    pub ricci_norm: f64,
    pub weyl_norm: f64,
    pub qc: QcReport,
    pub fluid: FluidState,
    pub energy: EnergyConditions,
    pub diagnostics: DiagnosticsReport,
}

#[derive(Debug)]
pub enum AnalyzeError {
    Metric(MetricError),
    Detection(QcError),
    Diagnostics(diagnostics::DiagnosticsError),
    Fluid(fluid::FluidError),
}

impl std::fmt::Display for AnalyzeError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            AnalyzeError::Metric(e) => write!(f, "{e}"),
            AnalyzeError::Detection(e) => write!(f, "{e}"),
            AnalyzeError::Diagnostics(e) => write!(f, "{e}"),
            AnalyzeError::Fluid(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for AnalyzeError {}

/// Full pipeline at one point: curvature, QC detection, fluid state,
/// diagnostics.
pub fn analyze_point(
    spec: &MetricSpec,
    point: &Vec4,
    kappa: f64,
    tol: f64,
) -> Result<PointAnalysis, AnalyzeError> {
    let mj = eval_metric(spec, point).map_err(AnalyzeError::Metric)?;
    let bundle = curvature::compute(&mj);
    let qc_report = qc::detect_qc(&bundle, tol).map_err(AnalyzeError::Detection)?;
    let fluid_state = fluid::fluid_from_qc(qc_report.gamma, qc_report.mu, kappa)
        .map_err(AnalyzeError::Fluid)?;
    let energy = fluid::gr_energy_conditions(fluid_state.p, fluid_state.sigma);
    let generator = diagnostics::resolve_generator(spec, &mj, &bundle, tol)
        .map_err(AnalyzeError::Diagnostics)?;
    let mut diag = diagnostics::run(&bundle, generator.as_ref(), tol)
        .map_err(AnalyzeError::Diagnostics)?;
    if let Some(checks) = diag.generator.as_mut() {
        // the jet-level extraction also gives d(gamma) along the flow
        if let Ok(Some(jets)) = qc::extract_generator_jets(&bundle, tol) {
            checks.gamma_deriv_along_a = Some(jets.gamma_derivative_along_generator());
        }
    }
    Ok(PointAnalysis {
        point: *point,
        scalar: bundle.scalar,
        ricci_norm: bundle.ricci_norm(),
        weyl_norm: bundle.weyl_norm(),
        qc: qc_report,
        fluid: fluid_state,
        energy,
        diagnostics: diag,
    })
}

/// Convention sheet printed at the top of every text report.
pub fn convention_header(kappa: f64, tol: f64) -> String {
    format!(
        "conventions:\n\
         \x20 signature (-,+,+,+); coordinate 0 is time, generator oriented A^0 > 0\n\
         \x20 constant curvature gamma has R_hijk = gamma (g_hk g_ij - g_hj g_ik); de Sitter(k): gamma = k, R = 12 k\n\
         \x20 field equations R_ij - (R/2) g_ij = kappa^2 T_ij with kappa = {kappa}\n\
         \x20 detection tolerance {tol:e}\n"
    )
}

fn yn(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

pub fn render_text(spec: &MetricSpec, a: &PointAnalysis) -> String {
    let mut s = String::new();
    let coords = &a.point;
    let names = spec.coord_names();
    let _ = writeln!(
        s,
        "point: {} = {}, {} = {}, {} = {}, {} = {}",
        names[0], coords[0], names[1], coords[1], names[2], coords[2], names[3], coords[3]
    );
    let _ = writeln!(
        s,
        "curvature: R = {:.12e}, |Ricci| = {:.6e}, |Weyl| = {:.6e}",
        a.scalar, a.ricci_norm, a.weyl_norm
    );
    let _ = writeln!(
        s,
        "qc: detected = {}, constant-curvature branch = {}",
        yn(a.qc.is_qc),
        yn(a.qc.constant_curvature)
    );
    let _ = writeln!(
        s,
        "  gamma = {:.12e}, mu = {:.12e}",
        a.qc.gamma, a.qc.mu
    );
    match &a.qc.generator {
        Some(gen) => {
            let _ = writeln!(
                s,
                "  generator A^i = ({:.9e}, {:.9e}, {:.9e}, {:.9e})",
                gen.contravariant[0], gen.contravariant[1], gen.contravariant[2],
                gen.contravariant[3]
            );
        }
        None => {
            let _ = writeln!(s, "  generator: none (mu = 0 branch)");
        }
    }
    let _ = writeln!(
        s,
        "  residuals: riemann {:.3e}, rank-1 {:.3e}, weyl {:.3e}",
        a.qc.riemann_residual_rel, a.qc.rank1_residual, a.qc.weyl_norm_rel
    );
    let w = a
        .fluid
        .w
        .map(|w| format!("{w:.9e}"))
        .unwrap_or_else(|| "n/a".to_string());
    let _ = writeln!(
        s,
        "fluid: p = {:.12e}, sigma = {:.12e}, w = {}, era = {}",
        a.fluid.p, a.fluid.sigma, w, a.fluid.era
    );
    let _ = writeln!(
        s,
        "  energy conditions: NEC {} WEC {} DEC {} SEC {}",
        yn(a.energy.nec),
        yn(a.energy.wec),
        yn(a.energy.dec),
        yn(a.energy.sec)
    );
    let d = &a.diagnostics;
    let _ = writeln!(
        s,
        "diagnostics (tol {:.1e}):",
        d.tol
    );
    let _ = writeln!(
        s,
        "  codazzi {:.3e}, ricci-symmetric {:.3e}, semi-symmetric {:.3e}, weyl {:.3e}",
        d.codazzi_dev, d.ricci_symmetric_dev, d.semisymmetry_dev, d.weyl_rel
    );
    match &d.generator {
        Some(g) => {
            let extra = g
                .gamma_deriv_along_a
                .map(|v| format!(", d(gamma)/dA = {v:.3e}"))
                .unwrap_or_default();
            let _ = writeln!(
                s,
                "  generator: div A = {:.6e}, killing {:.3e}, vorticity {:.3e}{extra}",
                g.div_a, g.killing_dev, g.vorticity_dev
            );
        }
        None => {
            let _ = writeln!(s, "  generator checks: not available at this point");
        }
    }
    let mut flags: Vec<String> = d
        .flags()
        .into_iter()
        .map(|(name, ok)| format!("{name}={}", if ok { 1 } else { 0 }))
        .collect();
    flags.sort();
    let _ = writeln!(s, "  flags: {}", flags.join(" "));
    s
}

pub fn csv_header(spec: &MetricSpec) -> String {
    let names = spec.coord_names();
    format!(
        "{},{},{},{},R,ricci_norm,weyl_norm,is_qc,constant_curvature,gamma,mu,\
         a0,a1,a2,a3,riemann_residual_rel,rank1_residual,weyl_norm_rel,\
         p,sigma,w,era,nec,wec,dec,sec,\
         codazzi_dev,ricci_symmetric_dev,semisymmetry_dev,div_a,killing_dev,vorticity_dev",
        names[0], names[1], names[2], names[3]
    )
}

pub fn csv_row(a: &PointAnalysis) -> String {
    let mut cells: Vec<String> = Vec::with_capacity(32);
    for c in &a.point {
        cells.push(float17(*c));
    }
    cells.push(float17(a.scalar));
    cells.push(float17(a.ricci_norm));
    cells.push(float17(a.weyl_norm));
    cells.push(if a.qc.is_qc { "1" } else { "0" }.into());
    cells.push(if a.qc.constant_curvature { "1" } else { "0" }.into());
    cells.push(float17(a.qc.gamma));
    cells.push(float17(a.qc.mu));
    match &a.qc.generator {
        Some(gen) => {
            for c in &gen.contravariant {
                cells.push(float17(*c));
            }
        }
        None => {
            for _ in 0..4 {
                cells.push(String::new());
            }
        }
    }
    cells.push(float17(a.qc.riemann_residual_rel));
    cells.push(float17(a.qc.rank1_residual));
    cells.push(float17(a.qc.weyl_norm_rel));
    cells.push(float17(a.fluid.p));
    cells.push(float17(a.fluid.sigma));
    cells.push(a.fluid.w.map(float17).unwrap_or_default());
    cells.push(a.fluid.era.to_string());
    for b in [a.energy.nec, a.energy.wec, a.energy.dec, a.energy.sec] {
        cells.push(if b { "1" } else { "0" }.into());
    }
    let d = &a.diagnostics;
    cells.push(float17(d.codazzi_dev));
    cells.push(float17(d.ricci_symmetric_dev));
    cells.push(float17(d.semisymmetry_dev));
    match &d.generator {
        Some(g) => {
            cells.push(float17(g.div_a));
            cells.push(float17(g.killing_dev));
            cells.push(float17(g.vorticity_dev));
        }
        None => {
            for _ in 0..3 {
                cells.push(String::new());
            }
        }
    }
    cells.join(",")
}
