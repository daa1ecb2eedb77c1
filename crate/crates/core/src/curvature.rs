//! Curvature tensors at a point, computed from metric jets.
//!
//! Third metric derivatives come out of the jets exactly, so `∇Ricci`
//! carries no finite-difference truncation error. The stored fully
//! covariant tensor follows the convention
//!
//! ```text
//! R_hijk = gamma (g_hk g_ij - g_hj g_ik)        on constant curvature gamma,
//! ```
//!
//! pinned by requiring de Sitter with curvature `k > 0` to come out with
//! `gamma = k` and scalar curvature `R = 12 k`. The Ricci tensor is the
//! contraction `R_ij = R^p_ipj` of the coordinate curvature
//! `R^h_ijk = d_j Gamma^h_ik - d_k Gamma^h_ij + Gamma^h_jp Gamma^p_ik
//! - Gamma^h_kp Gamma^p_ij`, which makes spheres (and de Sitter) positively
//! curved; the stored covariant tensor is `-g_hp R^p_ijk`.

use crate::jet::Jet3;
use crate::linalg::{
    self, jet_mat4, jet_rank3, jet_sum1, mat4, rank3, rank4, JetMat4, JetRank3, Mat4, Rank3,
    Rank4, Vec4,
};
use crate::metric::MetricJet;

/// Everything curvature-related at one point.
///
/// Value tensors are plain arrays; the jet fields keep enough derivative
/// information for downstream consumers (the QC detector re-runs on jets
/// to differentiate the extracted generator field).
#[derive(Debug, Clone)]
pub struct CurvatureBundle {
    pub point: Vec4,
    /// Metric value part.
    pub g: Mat4,
    /// Inverse metric value part.
    pub ginv: Mat4,
    pub g_jet: JetMat4,
    pub ginv_jet: JetMat4,
    /// `Gamma^h_ij` with first and second partials still valid.
    pub gamma_jet: JetRank3,
    /// `Gamma^h_ij` values.
    pub gamma: Rank3,
    /// Fully covariant `R_hijk` (see module docs for the sign convention).
    pub riemann: Rank4,
    /// `R^h_ijk` raised from the stored covariant tensor with `ginv`.
    pub riemann_mixed: Rank4,
    /// `R_ij = R^p_ipj`.
    pub ricci: Mat4,
    pub ricci_jet: JetMat4,
    /// Scalar curvature `R = g^ij R_ij`.
    pub scalar: f64,
    pub scalar_jet: Jet3,
    /// Coordinate gradient `d_l R`.
    pub scalar_grad: Vec4,
    /// Weyl tensor `C_hijk`.
    pub weyl: Rank4,
    /// `nabla_l R_ij`, indexed `[l][i][j]`.
    pub grad_ricci: Rank3,
    /// `Q_ijlm = -R^p_ilm R_pj - R^p_jlm R_ip`, the Ricci-identity form of
    /// the curvature commutator acting on the Ricci tensor.
    pub riem_on_ricci: Rank4,
}

/// Christoffel symbols `Gamma^h_ij` as jets (valid through second partials).
pub fn christoffel(mj: &MetricJet) -> JetRank3 {
    // dg[k][i][j] = d_k g_ij as a jet, trustworthy through degree 2
    let dg: JetRank3 = jet_rank3(|k, i, j| mj.g[i][j].derivative(k));
    jet_rank3(|h, i, j| {
        jet_sum1(|k| mj.ginv[h][k] * (dg[i][k][j] + dg[j][k][i] - dg[k][i][j])) * 0.5
    })
}

/// Weyl tensor from the stored covariant Riemann, Ricci, scalar and metric.
pub fn weyl_from(riemann: &Rank4, ricci: &Mat4, scalar: f64, g: &Mat4) -> Rank4 {
    rank4(|h, i, j, k| {
        riemann[h][i][j][k]
            - 0.5
                * (g[h][k] * ricci[i][j] - g[h][j] * ricci[i][k] + g[i][j] * ricci[h][k]
                    - g[i][k] * ricci[h][j])
            + scalar / 6.0 * (g[h][k] * g[i][j] - g[h][j] * g[i][k])
    })
}

/// Compute the full curvature bundle at the metric jet's point.
pub fn compute(mj: &MetricJet) -> CurvatureBundle {
    let g: Mat4 = mat4(|i, j| mj.g[i][j].value());
    let ginv: Mat4 = mat4(|i, j| mj.ginv[i][j].value());

    let gamma_jet = christoffel(mj);
    let gamma: Rank3 = rank3(|h, i, j| gamma_jet[h][i][j].value());

    // coordinate curvature R^h_ijk, valid through first partials
    let dgamma: [JetRank3; 4] =
        core::array::from_fn(|l| jet_rank3(|h, i, j| gamma_jet[h][i][j].derivative(l)));
    let rm_jet: [[[[Jet3; 4]; 4]; 4]; 4] = core::array::from_fn(|h| {
        core::array::from_fn(|i| {
            core::array::from_fn(|j| {
                core::array::from_fn(|k| {
                    dgamma[j][h][i][k] - dgamma[k][h][i][j]
                        + jet_sum1(|p| {
                            gamma_jet[h][j][p] * gamma_jet[p][i][k]
                                - gamma_jet[h][k][p] * gamma_jet[p][i][j]
                        })
                })
            })
        })
    });

    // sign flip on lowering pins the constant-curvature form to +gamma
    let riemann: Rank4 = rank4(|h, i, j, k| {
        -linalg::sum1(|p| g[h][p] * rm_jet[p][i][j][k].value())
    });
    let riemann_mixed: Rank4 =
        rank4(|h, i, j, k| linalg::sum1(|p| ginv[h][p] * riemann[p][i][j][k]));

    let ricci_jet: JetMat4 = jet_mat4(|i, j| jet_sum1(|p| rm_jet[p][i][p][j]));
    let ricci: Mat4 = mat4(|i, j| ricci_jet[i][j].value());

    let scalar_jet = linalg::jet_sum2(|i, j| mj.ginv[i][j] * ricci_jet[i][j]);
    let scalar = scalar_jet.value();
    let scalar_grad: Vec4 = core::array::from_fn(|l| {
        let mut e = [0u8; 4];
        e[l] = 1;
        scalar_jet.partial(e)
    });

    let grad_ricci: Rank3 = rank3(|l, i, j| {
        let mut e = [0u8; 4];
        e[l] = 1;
        ricci_jet[i][j].partial(e)
            - linalg::sum1(|p| gamma[p][l][i] * ricci[p][j] + gamma[p][l][j] * ricci[i][p])
    });

    let weyl = weyl_from(&riemann, &ricci, scalar, &g);

    let riem_on_ricci: Rank4 = rank4(|i, j, l, m| {
        -linalg::sum1(|p| {
            riemann_mixed[p][i][l][m] * ricci[p][j] + riemann_mixed[p][j][l][m] * ricci[i][p]
        })
    });

    CurvatureBundle {
        point: mj.point,
        g,
        ginv,
        g_jet: mj.g,
        ginv_jet: mj.ginv,
        gamma_jet,
        gamma,
        riemann,
        riemann_mixed,
        ricci,
        ricci_jet,
        scalar,
        scalar_jet,
        scalar_grad,
        weyl,
        grad_ricci,
        riem_on_ricci,
    }
}

impl CurvatureBundle {
    pub fn riemann_norm(&self) -> f64 {
        linalg::norm_rank4(&self.riemann)
    }

    pub fn ricci_norm(&self) -> f64 {
        linalg::norm_mat4(&self.ricci)
    }

    pub fn weyl_norm(&self) -> f64 {
        linalg::norm_rank4(&self.weyl)
    }

    /// `|Weyl| / max(1e-300, |Riemann|)`; zero curvature counts as
    /// conformally flat.
    pub fn weyl_norm_rel(&self) -> f64 {
        self.weyl_norm() / self.riemann_norm().max(1e-300)
    }

    /// Residual of the contracted second Bianchi identity
    /// `nabla_i (R^i_j - R/2 delta^i_j)`, normalized.
    pub fn contracted_bianchi_rel(&self) -> f64 {
        let div_einstein: Vec4 = core::array::from_fn(|j| {
            linalg::sum2(|i, k| self.ginv[i][k] * self.grad_ricci[i][k][j])
                - 0.5 * self.scalar_grad[j]
        });
        linalg::norm_vec4(&div_einstein)
            / linalg::norm_rank3(&self.grad_ricci).max(1.0)
    }
}
