//! F(R)-gravity sector at constant scalar curvature.
//!
//! On a QC background the scalar curvature is `R = 6 (2 gamma - mu)`. For
//! a model `F` with derivative `F_R`, the constant-curvature field
//! equation yields
//!
//! ```text
//! p     = (3 gamma - mu) F_R / kappa^2 - F / (2 kappa^2)
//! sigma = 3 (mu - gamma) F_R / kappa^2 + F / (2 kappa^2)
//! ```
//!
//! and the effective quantities shift both by the same curvature
//! correction `(F - R F_R) / (2 kappa^2)` (with opposite signs, so
//! `p_eff + sigma_eff = p + sigma`). Composing the two maps and
//! substituting `R` collapses to
//!
//! ```text
//! sigma_eff = 3 gamma F_R / kappa^2,      p_eff = (2 mu - 3 gamma) F_R / kappa^2,
//! ```
//!
//! i.e. exactly the general-relativity values scaled by `F_R(R)`;
//! [`effective_from_qc`] implements that closed form so the two routes can
//! be cross-checked against each other. With `F(R) = R` the whole sector
//! reduces to the plain fluid mapping.

use alloc::boxed::Box;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::fluid::{self, EnergyConditions};
use crate::math;

type ScalarFn = Box<dyn Fn(f64) -> f64 + Send + Sync>;

/// An F(R) model: the function, its derivative, and the open interval of
/// scalar curvatures it is defined on.
pub struct FrModel {
    label: String,
    domain: (f64, f64),
    f: ScalarFn,
    f_r: ScalarFn,
}

impl fmt::Debug for FrModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FrModel")
            .field("label", &self.label)
            .field("domain", &self.domain)
            .finish()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum FrgError {
    BadTermCount { terms: u32 },
    NonPositiveKappa,
    /// Scalar curvature outside the model's validity interval.
    Domain { r: f64 },
    EmptyGrid,
    UnknownModel { name: String },
}

impl fmt::Display for FrgError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FrgError::BadTermCount { terms } => {
                write!(f, "series truncation needs at least 2 terms, got {terms}")
            }
            FrgError::NonPositiveKappa => {
                write!(f, "gravitational coupling kappa must be positive")
            }
            FrgError::Domain { r } => write!(f, "R = {r} is outside the model's domain"),
            FrgError::EmptyGrid => write!(f, "grid needs at least 2 steps per axis"),
            FrgError::UnknownModel { name } => write!(f, "unknown F(R) model `{name}`"),
        }
    }
}

impl core::error::Error for FrgError {}

impl FrModel {
    pub fn new(
        label: impl Into<String>,
        domain: (f64, f64),
        f: impl Fn(f64) -> f64 + Send + Sync + 'static,
        f_r: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        FrModel {
            label: label.into(),
            domain,
            f: Box::new(f),
            f_r: Box::new(f_r),
        }
    }

    /// Plain general relativity, `F(R) = R`.
    pub fn pure_gr() -> Self {
        FrModel::new("gr", (f64::NEG_INFINITY, f64::INFINITY), |r| r, |_| 1.0)
    }

    /// The logarithmic-exponential toy model
    ///
    /// ```text
    /// F(R) = e^R log R - log R - R - sum_{l=2}^{L} R^l / (l * l!)
    /// ```
    ///
    /// with the series truncated at `terms = L >= 2` and term-wise
    /// derivative
    ///
    /// ```text
    /// F_R(R) = e^R log R + e^R/R - 1/R - 1 - sum_{l=2}^{L} R^{l-1} / l!.
    /// ```
    ///
    /// Since `sum_{l>=2} R^{l-1}/l! = (e^R - 1 - R)/R`, the derivative
    /// collapses to `e^R log R` as `L -> infinity`; at `L = 64` the tail is
    /// far below double-precision rounding for `R <= 30`. Valid for
    /// `R > 0`.
    pub fn model_a(terms: u32) -> Result<Self, FrgError> {
        if terms < 2 {
            return Err(FrgError::BadTermCount { terms });
        }
        let f = move |r: f64| {
            math::exp(r) * math::ln(r) - math::ln(r) - r - series_sum(r, terms).0
        };
        let f_r = move |r: f64| {
            math::exp(r) * math::ln(r) + math::exp(r) / r - 1.0 / r - 1.0
                - series_sum(r, terms).1
        };
        Ok(FrModel::new(
            format!("model-a(L={terms})"),
            (0.0, f64::INFINITY),
            f,
            f_r,
        ))
    }

    /// Look a model up by CLI name.
    pub fn by_name(name: &str, terms: u32) -> Result<Self, FrgError> {
        match name {
            "model-a" => FrModel::model_a(terms),
            "gr" | "pure-gr" => Ok(FrModel::pure_gr()),
            other => Err(FrgError::UnknownModel {
                name: other.to_string(),
            }),
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn valid_domain(&self) -> (f64, f64) {
        self.domain
    }

    /// Open-interval membership.
    pub fn contains(&self, r: f64) -> bool {
        r > self.domain.0 && r < self.domain.1
    }

    pub fn f(&self, r: f64) -> f64 {
        (self.f)(r)
    }

    pub fn f_r(&self, r: f64) -> f64 {
        (self.f_r)(r)
    }

    /// Largest relative deviation between `F_R` and a central difference
    /// quotient of `F` over `samples` points of `[lo, hi]`.
    pub fn derivative_consistency(&self, lo: f64, hi: f64, samples: usize) -> f64 {
        let mut worst = 0.0f64;
        for s in 0..samples {
            let r = lo + (hi - lo) * (s as f64 + 0.5) / samples as f64;
            let h = 1e-6 * r.abs().max(1.0);
            if !(self.contains(r - h) && self.contains(r + h)) {
                continue;
            }
            let fd = (self.f(r + h) - self.f(r - h)) / (2.0 * h);
            let exact = self.f_r(r);
            worst = worst.max((fd - exact).abs() / exact.abs().max(1.0));
        }
        worst
    }
}

/// `(sum_{l=2..L} R^l/(l*l!), sum_{l=2..L} R^{l-1}/l!)`.
fn series_sum(r: f64, terms: u32) -> (f64, f64) {
    let mut f_part = 0.0;
    let mut fr_part = 0.0;
    // t_l = R^l / l!
    let mut t = r * r / 2.0;
    for l in 2..=terms {
        f_part += t / l as f64;
        fr_part += t / r;
        t *= r / (l + 1) as f64;
    }
    (f_part, fr_part)
}

fn check_kappa(kappa: f64) -> Result<f64, FrgError> {
    if kappa > 0.0 {
        Ok(kappa * kappa)
    } else {
        Err(FrgError::NonPositiveKappa)
    }
}

/// Scalar curvature of a QC background.
pub fn scalar_curvature(gamma: f64, mu: f64) -> f64 {
    6.0 * (2.0 * gamma - mu)
}

/// Pressure and density of the constant-curvature field equation,
/// `(p, sigma)`.
pub fn fr_pressure_density(
    gamma: f64,
    mu: f64,
    model: &FrModel,
    kappa: f64,
) -> Result<(f64, f64), FrgError> {
    let k2 = check_kappa(kappa)?;
    let r = scalar_curvature(gamma, mu);
    if !model.contains(r) {
        return Err(FrgError::Domain { r });
    }
    let (f, f_r) = (model.f(r), model.f_r(r));
    let p = (3.0 * gamma - mu) * f_r / k2 - f / (2.0 * k2);
    let sigma = 3.0 * (mu - gamma) * f_r / k2 + f / (2.0 * k2);
    Ok((p, sigma))
}

/// Shift `(p, sigma)` by the constant-curvature correction,
/// `(p_eff, sigma_eff)`.
pub fn effective_quantities(
    p: f64,
    sigma: f64,
    r: f64,
    model: &FrModel,
    kappa: f64,
) -> Result<(f64, f64), FrgError> {
    let k2 = check_kappa(kappa)?;
    if !model.contains(r) {
        return Err(FrgError::Domain { r });
    }
    let shift = (model.f(r) - r * model.f_r(r)) / (2.0 * k2);
    Ok((p + shift, sigma - shift))
}

/// Closed form of `effective_quantities . fr_pressure_density` on a QC
/// background, `(sigma_eff, p_eff)`. The `F` terms cancel in the
/// composition, leaving `F_R(R)` times the general-relativity values.
pub fn effective_from_qc(
    gamma: f64,
    mu: f64,
    model: &FrModel,
    kappa: f64,
) -> Result<(f64, f64), FrgError> {
    let k2 = check_kappa(kappa)?;
    let r = scalar_curvature(gamma, mu);
    if !model.contains(r) {
        return Err(FrgError::Domain { r });
    }
    let f_r = model.f_r(r);
    let sigma_eff = (6.0 * (mu - gamma) + r) * f_r / (2.0 * k2);
    let p_eff = (6.0 * gamma - 2.0 * mu - r) * f_r / (2.0 * k2);
    Ok((sigma_eff, p_eff))
}

/// Energy-condition flags on the effective quantities (same predicates as
/// the GR sector).
pub fn ec_flags_eff(sigma_eff: f64, p_eff: f64) -> EnergyConditions {
    fluid::gr_energy_conditions(p_eff, sigma_eff)
}

/// One cell of the `(mu, gamma)` energy-condition scan.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EcRecord {
    pub mu: f64,
    pub gamma: f64,
    pub r: f64,
    pub f: f64,
    pub f_r: f64,
    pub sigma_eff: f64,
    pub p_eff: f64,
    pub flags: EnergyConditions,
}

/// Rectangular scan region, inclusive endpoints.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub mu_min: f64,
    pub mu_max: f64,
    pub mu_steps: usize,
    pub gamma_min: f64,
    pub gamma_max: f64,
    pub gamma_steps: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec {
            mu_min: 1.0,
            mu_max: 2.0,
            mu_steps: 50,
            gamma_min: 0.5,
            gamma_max: 2.0,
            gamma_steps: 50,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanSummary {
    pub total_cells: usize,
    /// Cells whose `R` fell outside the model domain; not emitted.
    pub skipped_cells: usize,
    pub nec_fraction: f64,
    pub wec_fraction: f64,
    pub dec_fraction: f64,
    pub sec_fraction: f64,
}

/// Evaluate the effective quantities and energy conditions over the grid.
///
/// Cells are emitted in row-major order (`mu` outer, `gamma` inner);
/// out-of-domain cells are skipped and counted, never clamped.
pub fn scan_grid(
    grid: &GridSpec,
    model: &FrModel,
    kappa: f64,
) -> Result<(Vec<EcRecord>, ScanSummary), FrgError> {
    check_kappa(kappa)?;
    if grid.mu_steps < 2 || grid.gamma_steps < 2 {
        return Err(FrgError::EmptyGrid);
    }
    if !(grid.mu_min.is_finite()
        && grid.mu_max.is_finite()
        && grid.gamma_min.is_finite()
        && grid.gamma_max.is_finite())
    {
        return Err(FrgError::EmptyGrid);
    }

    let mut records = Vec::with_capacity(grid.mu_steps * grid.gamma_steps);
    let mut skipped = 0usize;
    let mut held = [0usize; 4];
    for iu in 0..grid.mu_steps {
        let mu = grid.mu_min
            + (grid.mu_max - grid.mu_min) * iu as f64 / (grid.mu_steps - 1) as f64;
        for ig in 0..grid.gamma_steps {
            let gamma = grid.gamma_min
                + (grid.gamma_max - grid.gamma_min) * ig as f64 / (grid.gamma_steps - 1) as f64;
            let r = scalar_curvature(gamma, mu);
            if !model.contains(r) {
                skipped += 1;
                continue;
            }
            let (sigma_eff, p_eff) = effective_from_qc(gamma, mu, model, kappa)?;
            let flags = ec_flags_eff(sigma_eff, p_eff);
            for (slot, ok) in [flags.nec, flags.wec, flags.dec, flags.sec]
                .into_iter()
                .enumerate()
            {
                if ok {
                    held[slot] += 1;
                }
            }
            records.push(EcRecord {
                mu,
                gamma,
                r,
                f: model.f(r),
                f_r: model.f_r(r),
                sigma_eff,
                p_eff,
                flags,
            });
        }
    }

    let emitted = records.len().max(1) as f64;
    let summary = ScanSummary {
        total_cells: grid.mu_steps * grid.gamma_steps,
        skipped_cells: skipped,
        nec_fraction: held[0] as f64 / emitted,
        wec_fraction: held[1] as f64 / emitted,
        dec_fraction: held[2] as f64 / emitted,
        sec_fraction: held[3] as f64 / emitted,
    };
    Ok((records, summary))
}
