//! Theorem-level geometric checks on a curvature bundle.
//!
//! All deviations are relative, with a `1e-30` floor against 0/0, so the
//! pass/fail tolerances stay portable across charts. The generator-field
//! checks need `dA` and therefore take the generator as jets — either
//! evaluated from a metric's `generator:` hint or lifted out of the QC
//! detector via [`crate::qc::extract_generator_jets`].

use alloc::collections::BTreeMap;
use core::fmt;

use crate::curvature::CurvatureBundle;
use crate::expr::ExprError;
use crate::jet::Jet3;
use crate::linalg::{self, mat4, rank3, Mat4, Rank3};
use crate::metric::{MetricJet, MetricSpec};
use crate::qc;

const FLOOR: f64 = 1e-30;

/// How far `∇Ricci` is from being totally symmetric in the derivative and
/// second tensor index (the Codazzi property).
///
/// When `∇Ricci` itself is zero up to rounding (parallel Ricci), the
/// quotient would be noise over noise; that 0/0 case is defined as 0.
pub fn codazzi_deviation(bundle: &CurvatureBundle) -> f64 {
    let gr = &bundle.grad_ricci;
    let scale = linalg::norm_rank3(gr);
    if scale <= 1e-12 * bundle.ricci_norm().max(1.0) {
        return 0.0;
    }
    let anti: Rank3 = rank3(|l, h, k| gr[l][h][k] - gr[k][h][l]);
    linalg::norm_rank3(&anti) / scale.max(FLOOR)
}

/// `|∇Ricci|` normalized by the Ricci scale.
pub fn ricci_symmetric_deviation(bundle: &CurvatureBundle) -> f64 {
    linalg::norm_rank3(&bundle.grad_ricci) / bundle.ricci_norm().max(1.0)
}

/// Norm of the curvature commutator acting on Ricci, relative to the
/// product of the tensor scales.
///
/// A Ricci tensor that vanishes up to rounding (vacuum) makes the
/// commutator pure noise; that 0/0 case is defined as 0.
pub fn semisymmetry_deviation(bundle: &CurvatureBundle) -> f64 {
    let ricci_scale = bundle.ricci_norm();
    if ricci_scale <= 1e-12 * bundle.riemann_norm().max(1.0) {
        return 0.0;
    }
    linalg::norm_rank4(&bundle.riem_on_ricci)
        / (bundle.riemann_norm() * ricci_scale).max(FLOOR)
}

/// Petrov type-O test: does the Weyl tensor vanish relative to Riemann?
/// Zero curvature counts as conformally flat.
pub fn conformally_flat(bundle: &CurvatureBundle, tol: f64) -> bool {
    bundle.weyl_norm() <= tol * bundle.riemann_norm().max(FLOOR)
}

/// Results of the generator-field (velocity) checks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeneratorChecks {
    /// `∇_h A^h` (signed expansion scalar).
    pub div_a: f64,
    /// `|∇_i A_j + ∇_j A_i|` over `max(1, |∇A|)`.
    pub killing_dev: f64,
    /// `|A_[i ∇_j A_k]|` over `max(1, |∇A|)`.
    pub vorticity_dev: f64,
    /// Directional derivative of the QC scalar `gamma` along `A`, when the
    /// generator came out of the jet-level extraction.
    pub gamma_deriv_along_a: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum DiagnosticsError {
    /// The candidate generator is not unit timelike at this point.
    NotUnitTimelike { norm: f64 },
    /// A `generator:` hint expression failed to evaluate.
    HintEvaluation(ExprError),
}

impl fmt::Display for DiagnosticsError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DiagnosticsError::NotUnitTimelike { norm } => {
                write!(f, "generator is not unit timelike: g(A,A) = {norm}")
            }
            DiagnosticsError::HintEvaluation(e) => write!(f, "generator hint: {e}"),
        }
    }
}

impl core::error::Error for DiagnosticsError {}

/// Divergence, Killing and vorticity checks for a unit timelike generator
/// field given as contravariant jets.
pub fn generator_checks(
    bundle: &CurvatureBundle,
    a_contra: &[Jet3; 4],
) -> Result<GeneratorChecks, DiagnosticsError> {
    let norm = linalg::sum2(|i, j| {
        bundle.g[i][j] * a_contra[i].value() * a_contra[j].value()
    });
    if (norm + 1.0).abs() > 1e-8 {
        return Err(DiagnosticsError::NotUnitTimelike { norm });
    }

    let a_cov: [Jet3; 4] =
        core::array::from_fn(|j| linalg::jet_sum1(|p| bundle.g_jet[j][p] * a_contra[p]));
    let a_cov_val: [f64; 4] = core::array::from_fn(|j| a_cov[j].value());

    // nabla_i A_j = d_i A_j - Gamma^p_ij A_p
    let nabla: Mat4 = mat4(|i, j| {
        let mut e = [0u8; 4];
        e[i] = 1;
        a_cov[j].partial(e) - linalg::sum1(|p| bundle.gamma[p][i][j] * a_cov_val[p])
    });
    let nabla_scale = linalg::norm_mat4(&nabla).max(1.0);

    let div_a = linalg::sum2(|i, j| bundle.ginv[i][j] * nabla[i][j]);
    let sym: Mat4 = mat4(|i, j| nabla[i][j] + nabla[j][i]);
    let killing_dev = linalg::norm_mat4(&sym) / nabla_scale;

    // full antisymmetrization of A_i nabla_j A_k
    let vort: Rank3 = rank3(|i, j, k| {
        (a_cov_val[i] * nabla[j][k] - a_cov_val[i] * nabla[k][j] + a_cov_val[j] * nabla[k][i]
            - a_cov_val[j] * nabla[i][k]
            + a_cov_val[k] * nabla[i][j]
            - a_cov_val[k] * nabla[j][i])
            / 6.0
    });
    let vorticity_dev = linalg::norm_rank3(&vort) / nabla_scale;

    Ok(GeneratorChecks {
        div_a,
        killing_dev,
        vorticity_dev,
        gamma_deriv_along_a: None,
    })
}

/// Pick the generator field for derivative-level checks: the metric's
/// `generator:` hint when present, otherwise the jet-level QC extraction.
/// `None` when neither applies (constant-curvature branch without a hint,
/// or a Ricci tensor that is not of perfect-fluid type).
pub fn resolve_generator(
    spec: &MetricSpec,
    mj: &MetricJet,
    bundle: &CurvatureBundle,
    tol: f64,
) -> Result<Option<[Jet3; 4]>, DiagnosticsError> {
    if let Some(hint) = &spec.generator_hint {
        let env = linalg::jet_vec4(|i| Jet3::variable(i, mj.point[i]));
        let mut out = [Jet3::ZERO; 4];
        for (slot, expr) in hint.iter().enumerate() {
            out[slot] = expr
                .evaluate(&env, &spec.parameters)
                .map_err(DiagnosticsError::HintEvaluation)?;
        }
        return Ok(Some(out));
    }
    match qc::extract_generator_jets(bundle, tol) {
        Ok(Some(jets)) => Ok(Some(jets.contravariant)),
        Ok(None) | Err(_) => Ok(None),
    }
}

/// Full diagnostics at one point.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagnosticsReport {
    pub codazzi_dev: f64,
    pub ricci_symmetric_dev: f64,
    pub semisymmetry_dev: f64,
    pub weyl_rel: f64,
    /// Present when a generator field was available.
    pub generator: Option<GeneratorChecks>,
    pub tol: f64,
}

impl DiagnosticsReport {
    /// Flag per check: deviation within tolerance.
    pub fn flags(&self) -> BTreeMap<&'static str, bool> {
        let mut m = BTreeMap::new();
        m.insert("codazzi", self.codazzi_dev <= self.tol);
        m.insert("ricci_symmetric", self.ricci_symmetric_dev <= self.tol);
        m.insert("ricci_semisymmetric", self.semisymmetry_dev <= self.tol);
        m.insert("conformally_flat", self.weyl_rel <= self.tol);
        if let Some(gen) = &self.generator {
            m.insert("divergence_free", gen.div_a.abs() <= self.tol);
            m.insert("killing", gen.killing_dev <= self.tol);
            m.insert("irrotational", gen.vorticity_dev <= self.tol);
        }
        m
    }
}

/// Run every diagnostic; the generator checks only when a field is given.
pub fn run(
    bundle: &CurvatureBundle,
    generator: Option<&[Jet3; 4]>,
    tol: f64,
) -> Result<DiagnosticsReport, DiagnosticsError> {
    let generator = match generator {
        Some(a) => Some(generator_checks(bundle, a)?),
        None => None,
    };
    Ok(DiagnosticsReport {
        codazzi_dev: codazzi_deviation(bundle),
        ricci_symmetric_dev: ricci_symmetric_deviation(bundle),
        semisymmetry_dev: semisymmetry_deviation(bundle),
        weyl_rel: bundle.weyl_norm_rel(),
        generator,
        tol,
    })
}
