//! Finite-difference curvature oracle.
//!
//! An independent route to Riemann and Ricci: metric values come from the
//! plain scalar expression evaluator, every derivative from central
//! differences, and the tensors are assembled here from scratch. No jets
//! anywhere, so agreement with the jet pipeline is a real cross-check of
//! the derivative machinery.

use qcst_core::expr::ExprError;
use qcst_core::linalg::{self, mat4, rank3, rank4, Mat4, Rank3, Rank4, Vec4};
use qcst_core::metric::{MetricSpec, COMPONENT_PAIRS};

/// Default central-difference step.
pub const DEFAULT_STEP: f64 = 1e-4;

#[derive(Debug, Clone, PartialEq)]
pub enum OracleError {
    Eval(ExprError),
    SingularMetric,
}

impl std::fmt::Display for OracleError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            OracleError::Eval(e) => write!(f, "oracle evaluation: {e}"),
            OracleError::SingularMetric => write!(f, "oracle: singular metric value part"),
        }
    }
}

impl std::error::Error for OracleError {}

/// Metric value part at a point, via the scalar evaluator.
pub fn metric_values(spec: &MetricSpec, point: &Vec4) -> Result<Mat4, OracleError> {
    let mut g = [[0.0; 4]; 4];
    for (slot, &(i, j)) in COMPONENT_PAIRS.iter().enumerate() {
        let v = spec.components[slot]
            .eval_scalar(point, &spec.parameters)
            .map_err(OracleError::Eval)?;
        g[i][j] = v;
        g[j][i] = v;
    }
    Ok(g)
}

fn shifted(point: &Vec4, var: usize, delta: f64) -> Vec4 {
    let mut p = *point;
    p[var] += delta;
    p
}

/// First partials `d_k g_ij` by central differences.
pub fn metric_first_derivatives(
    spec: &MetricSpec,
    point: &Vec4,
    h: f64,
) -> Result<Rank3, OracleError> {
    let mut out = [[[0.0; 4]; 4]; 4];
    for k in 0..4 {
        let plus = metric_values(spec, &shifted(point, k, h))?;
        let minus = metric_values(spec, &shifted(point, k, -h))?;
        for i in 0..4 {
            for j in 0..4 {
                out[k][i][j] = (plus[i][j] - minus[i][j]) / (2.0 * h);
            }
        }
    }
    Ok(out)
}

/// Second partials `d_k d_l g_ij` by central-difference stencils.
pub fn metric_second_derivatives(
    spec: &MetricSpec,
    point: &Vec4,
    h: f64,
) -> Result<[[Mat4; 4]; 4], OracleError> {
    let center = metric_values(spec, point)?;
    let mut out = [[[[0.0; 4]; 4]; 4]; 4];
    for k in 0..4 {
        for l in k..4 {
            let block: Mat4 = if k == l {
                let plus = metric_values(spec, &shifted(point, k, h))?;
                let minus = metric_values(spec, &shifted(point, k, -h))?;
                mat4(|i, j| (plus[i][j] - 2.0 * center[i][j] + minus[i][j]) / (h * h))
            } else {
                let pp = metric_values(spec, &shifted(&shifted(point, k, h), l, h))?;
                let pm = metric_values(spec, &shifted(&shifted(point, k, h), l, -h))?;
                let mp = metric_values(spec, &shifted(&shifted(point, k, -h), l, h))?;
                let mm = metric_values(spec, &shifted(&shifted(point, k, -h), l, -h))?;
                mat4(|i, j| (pp[i][j] - pm[i][j] - mp[i][j] + mm[i][j]) / (4.0 * h * h))
            };
            out[k][l] = block;
            out[l][k] = block;
        }
    }
    Ok(out)
}

/// Riemann (fully covariant, same sign convention as the jet pipeline)
/// and Ricci from finite differences only.
#[derive(Debug, Clone)]
pub struct OracleCurvature {
    pub riemann: Rank4,
    pub ricci: Mat4,
    pub ginv: Mat4,
}

pub fn fd_curvature(
    spec: &MetricSpec,
    point: &Vec4,
    h: f64,
) -> Result<OracleCurvature, OracleError> {
    let g = metric_values(spec, point)?;
    let ginv = linalg::invert4(&g).ok_or(OracleError::SingularMetric)?;
    let dg = metric_first_derivatives(spec, point, h)?;
    let d2g = metric_second_derivatives(spec, point, h)?;

    let gamma: Rank3 = rank3(|h_, i, j| {
        0.5 * linalg::sum1(|k| ginv[h_][k] * (dg[i][k][j] + dg[j][k][i] - dg[k][i][j]))
    });

    // d_l g^{hk} = -g^{hp} (d_l g_pq) g^{qk}
    let dginv: Rank3 = rank3(|l, h_, k| {
        -linalg::sum2(|p, q| ginv[h_][p] * dg[l][p][q] * ginv[q][k])
    });
    let dgamma: [Rank3; 4] = std::array::from_fn(|l| {
        rank3(|h_, i, j| {
            0.5 * linalg::sum1(|k| {
                dginv[l][h_][k] * (dg[i][k][j] + dg[j][k][i] - dg[k][i][j])
                    + ginv[h_][k] * (d2g[l][i][k][j] + d2g[l][j][k][i] - d2g[l][k][i][j])
            })
        })
    });

    let mixed: Rank4 = rank4(|h_, i, j, k| {
        dgamma[j][h_][i][k] - dgamma[k][h_][i][j]
            + linalg::sum1(|p| gamma[h_][j][p] * gamma[p][i][k] - gamma[h_][k][p] * gamma[p][i][j])
    });

    let riemann: Rank4 =
        rank4(|h_, i, j, k| -linalg::sum1(|p| g[h_][p] * mixed[p][i][j][k]));
    let ricci: Mat4 = mat4(|i, j| linalg::sum1(|p| mixed[p][i][p][j]));

    Ok(OracleCurvature { riemann, ricci, ginv })
}
