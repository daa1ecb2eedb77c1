//! Perfect-fluid interpretation of the QC scalars.
//!
//! A QC spacetime has `Ricci = (3 gamma - mu) g + 2 mu A ⊗ A`, which is the
//! Ricci tensor of a perfect fluid with 4-velocity `A`. Matching against
//! the Einstein equations `R_ij - (R/2) g_ij = kappa^2 T_ij` gives
//!
//! ```text
//! p = (-3 gamma + 2 mu) / kappa^2,      sigma = 3 gamma / kappa^2,
//! ```
//!
//! so `p + sigma = 2 mu / kappa^2`. [`stress_energy_from_einstein`] is the
//! independent oracle for that mapping: it builds `T_ij` from the computed
//! curvature and projects out density and pressure with the generator.

use core::fmt;

use crate::curvature::CurvatureBundle;
use crate::linalg::{self, mat4, Mat4, Vec4};

/// Named regimes of the equation-of-state ratio `w = p / sigma`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Era {
    Dust,
    Stiff,
    DarkMatter,
    Radiation,
    Quintessence,
    Phantom,
    AcceleratingBoundary,
    Decelerating,
    Vacuum,
}

impl fmt::Display for Era {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Era::Dust => "Dust",
            Era::Stiff => "Stiff",
            Era::DarkMatter => "DarkMatter",
            Era::Radiation => "Radiation",
            Era::Quintessence => "Quintessence",
            Era::Phantom => "Phantom",
            Era::AcceleratingBoundary => "AcceleratingBoundary",
            Era::Decelerating => "Decelerating",
            Era::Vacuum => "Vacuum",
        };
        f.write_str(name)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FluidState {
    /// Isotropic pressure (geometric units).
    pub p: f64,
    /// Energy density.
    pub sigma: f64,
    pub kappa: f64,
    pub era: Era,
    /// `p / sigma`, present when `|sigma|` is above the era tolerance.
    pub w: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FluidError {
    NonPositiveKappa,
}

impl fmt::Display for FluidError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "gravitational coupling kappa must be positive")
    }
}

impl core::error::Error for FluidError {}

/// Classical energy-condition flags.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnergyConditions {
    pub nec: bool,
    pub wec: bool,
    pub dec: bool,
    pub sec: bool,
}

/// Tolerance band for era boundaries and energy-condition slack.
pub fn era_epsilon(p: f64, sigma: f64) -> f64 {
    1e-9 * 1.0f64.max(p.abs()).max(sigma.abs())
}

/// Total, deterministic era classification. The boundary cases carry an
/// `era_epsilon` band and are checked in a fixed priority order, so every
/// `(p, sigma)` pair lands in exactly one era.
pub fn classify_era(p: f64, sigma: f64) -> Era {
    let eps = era_epsilon(p, sigma);
    if p.abs() <= eps && sigma.abs() <= eps {
        return Era::Vacuum;
    }
    if (p + sigma).abs() <= eps {
        return Era::DarkMatter;
    }
    if p.abs() <= eps {
        return Era::Dust;
    }
    if (p - sigma).abs() <= eps {
        return Era::Stiff;
    }
    if (p - sigma / 3.0).abs() <= eps {
        return Era::Radiation;
    }
    // sigma = 0 leftovers give w = +-inf, which the comparisons handle
    let w = p / sigma;
    if w < -1.0 {
        return Era::Phantom;
    }
    if w > -1.0 && w < 0.0 && w + 1.0 / 3.0 < -eps {
        return Era::Quintessence;
    }
    if (w + 1.0 / 3.0).abs() <= eps {
        return Era::AcceleratingBoundary;
    }
    if w > -1.0 && w < 0.0 {
        return Era::Quintessence;
    }
    Era::Decelerating
}

/// Map the QC scalars to the perfect-fluid state.
pub fn fluid_from_qc(gamma: f64, mu: f64, kappa: f64) -> Result<FluidState, FluidError> {
    if !(kappa > 0.0) {
        return Err(FluidError::NonPositiveKappa);
    }
    let k2 = kappa * kappa;
    let p = (-3.0 * gamma + 2.0 * mu) / k2;
    let sigma = 3.0 * gamma / k2;
    Ok(fluid_state(p, sigma, kappa))
}

/// Assemble a state (era, `w`) from already-known pressure and density.
pub fn fluid_state(p: f64, sigma: f64, kappa: f64) -> FluidState {
    let era = classify_era(p, sigma);
    let w = if sigma.abs() > era_epsilon(p, sigma) {
        Some(p / sigma)
    } else {
        None
    };
    FluidState {
        p,
        sigma,
        kappa,
        era,
        w,
    }
}

/// Stress-energy tensor `T_ij = (R_ij - (R/2) g_ij) / kappa^2` from the
/// Einstein field equations (no cosmological constant). This is the
/// independent oracle for [`fluid_from_qc`].
pub fn stress_energy_from_einstein(
    bundle: &CurvatureBundle,
    kappa: f64,
) -> Result<Mat4, FluidError> {
    if !(kappa > 0.0) {
        return Err(FluidError::NonPositiveKappa);
    }
    let k2 = kappa * kappa;
    Ok(mat4(|i, j| {
        (bundle.ricci[i][j] - 0.5 * bundle.scalar * bundle.g[i][j]) / k2
    }))
}

/// Project density and pressure out of a stress-energy tensor with the
/// unit timelike generator: `sigma = T_ij A^i A^j`,
/// `p = (1/3) h^ij T_ij` with `h^ij = g^ij + A^i A^j`.
pub fn fluid_projections(t: &Mat4, ginv: &Mat4, a_contra: &Vec4) -> (f64, f64) {
    let sigma = linalg::sum2(|i, j| t[i][j] * a_contra[i] * a_contra[j]);
    let p = linalg::sum2(|i, j| (ginv[i][j] + a_contra[i] * a_contra[j]) * t[i][j]) / 3.0;
    (sigma, p)
}

/// Classical GR energy conditions on bare `(p, sigma)`, with an
/// `era_epsilon` slack on every inequality.
pub fn gr_energy_conditions(p: f64, sigma: f64) -> EnergyConditions {
    let eps = era_epsilon(p, sigma);
    let nec = sigma + p >= -eps;
    let wec = sigma >= -eps && nec;
    let dec = sigma >= -eps && sigma + p >= -eps && sigma - p >= -eps;
    let sec = sigma + 3.0 * p >= -eps;
    EnergyConditions { nec, wec, dec, sec }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curvature::compute;
    use crate::metric::{builtin, eval_metric};
    use alloc::collections::BTreeMap;
    use alloc::string::ToString;
    use approx::assert_relative_eq;

    fn bundle_for(name: &str, params: &[(&str, &str)], point: [f64; 4]) -> CurvatureBundle {
        let map: BTreeMap<_, _> = params
            .iter()
            .map(|(k, v)| (k.to_string(), v.to_string()))
            .collect();
        let spec = builtin(name, &map).unwrap();
        compute(&eval_metric(&spec, &point).unwrap())
    }

    #[test]
    fn qc_fluid_mapping() {
        // 3 gamma = 2 mu gives dust
        let f = fluid_from_qc(2.0, 3.0, 1.0).unwrap();
        assert_eq!(f.p, 0.0);
        assert_eq!(f.era, Era::Dust);

        let f = fluid_from_qc(4.0, 2.0, 1.0).unwrap();
        assert_eq!(f.p, -8.0);
        assert_eq!(f.sigma, 12.0);
        assert_relative_eq!(f.w.unwrap(), -2.0 / 3.0, epsilon = 1e-15);
        assert_eq!(f.era, Era::Quintessence);

        let f = fluid_from_qc(1.0, 1.0, 1.0).unwrap();
        assert_eq!(f.p, -1.0);
        assert_eq!(f.sigma, 3.0);
        assert_eq!(f.era, Era::AcceleratingBoundary);

        assert_eq!(fluid_from_qc(1.0, 1.0, 0.0), Err(FluidError::NonPositiveKappa));
        assert_eq!(
            fluid_from_qc(1.0, 1.0, -2.0),
            Err(FluidError::NonPositiveKappa)
        );
    }

    #[test]
    fn era_boundaries() {
        assert_eq!(classify_era(2.0, 2.0), Era::Stiff);
        assert_eq!(classify_era(-1.5, 1.5), Era::DarkMatter);
        assert_eq!(classify_era(1.0, 3.0), Era::Radiation);
        assert_eq!(classify_era(0.0, 0.0), Era::Vacuum);
        assert_eq!(classify_era(0.0, 5.0), Era::Dust);
        assert_eq!(classify_era(0.0, -5.0), Era::Dust);
        assert_eq!(classify_era(-2.0, 1.0), Era::Phantom);
        assert_eq!(classify_era(-0.5, 1.0), Era::Quintessence);
        assert_eq!(classify_era(-0.1, 1.0), Era::Quintessence);
        assert_eq!(classify_era(-1.0 / 3.0, 1.0), Era::AcceleratingBoundary);
        assert_eq!(classify_era(1.0, 2.0), Era::Decelerating);
        // sigma ~ 0 leftovers stay total
        assert_eq!(classify_era(5.0, 0.0), Era::Decelerating);
        assert_eq!(classify_era(-5.0, 1e-15), Era::Phantom);
    }

    #[test]
    fn p_plus_sigma_identity() {
        for &(gamma, mu, kappa) in
            &[(4.0, 2.0, 1.0), (1.0, 1.0, 2.0), (0.3, -0.9, 0.7), (2.5, 0.0, 1.3)]
        {
            let f = fluid_from_qc(gamma, mu, kappa).unwrap();
            let expect = 2.0 * mu / (kappa * kappa);
            let got = f.p + f.sigma;
            assert!(
                (got - expect).abs() <= 1e-12 * expect.abs().max(1.0),
                "p+sigma = {got}, expected {expect}"
            );
        }
    }

    #[test]
    fn einstein_oracle_minkowski_and_flrw() {
        let b = bundle_for("minkowski", &[], [0.0; 4]);
        let t = stress_energy_from_einstein(&b, 1.0).unwrap();
        assert_eq!(linalg::norm_mat4(&t), 0.0);

        let b = bundle_for("flrw-flat", &[("a", "t^2")], [1.0, 0.0, 0.0, 0.0]);
        let t = stress_energy_from_einstein(&b, 1.0).unwrap();
        let (sigma, p) = fluid_projections(&t, &b.ginv, &[1.0, 0.0, 0.0, 0.0]);
        assert_relative_eq!(sigma, 12.0, epsilon = 1e-9);
        assert_relative_eq!(p, -8.0, epsilon = 1e-9);
    }

    #[test]
    fn einstein_oracle_de_sitter() {
        let k = 1.0;
        let b = bundle_for("de-sitter", &[("k", "1")], [0.2, 0.1, 0.0, -0.3]);
        let t = stress_energy_from_einstein(&b, 1.0).unwrap();
        // T_ij = -(3k/kappa^2) g_ij, i.e. p = -sigma = -3k
        for i in 0..4 {
            for j in 0..4 {
                assert_relative_eq!(t[i][j], -3.0 * k * b.g[i][j], epsilon = 1e-8);
            }
        }
        let (sigma, p) = fluid_projections(&t, &b.ginv, &[1.0, 0.0, 0.0, 0.0]);
        assert_relative_eq!(sigma, 3.0 * k, epsilon = 1e-8);
        assert_relative_eq!(p, -3.0 * k, epsilon = 1e-8);
    }

    #[test]
    fn energy_condition_flags() {
        let ec = gr_energy_conditions(0.0, 1.0);
        assert!(ec.nec && ec.wec && ec.dec && ec.sec);

        let ec = gr_energy_conditions(-8.0, 12.0);
        assert!(ec.nec && ec.wec && ec.dec);
        assert!(!ec.sec); // sigma + 3p = -12

        let ec = gr_energy_conditions(1.0, -1.0);
        assert!(!ec.wec && !ec.dec);
        // boundary cases: sigma + p = 0 and sigma + 3p = 2 sit on/above zero
        assert!(ec.nec && ec.sec);
    }
}
