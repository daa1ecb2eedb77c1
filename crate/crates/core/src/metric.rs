//! Metric specifications and their jet-valued evaluation.
//!
//! A [`MetricSpec`] holds the ten independent components `g_ij` (`i <= j`)
//! of a 4-dimensional Lorentzian metric as expressions over the declared
//! coordinates plus named real parameters. [`eval_metric`] evaluates `g`
//! and `g^{-1}` as degree-3 jets at a point, which is all downstream
//! curvature code ever needs.
//!
//! Coordinate 0 is the time coordinate by convention; the required
//! signature is `(-,+,+,+)` and coordinate singularities are reported as
//! errors, never smoothed over.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use core::fmt;

use crate::expr::{Expr, ExprError, Params};
use crate::jet::{Jet3, JetError};
use crate::linalg::{self, JetMat4, Mat4, Vec4};

/// Slot of component `(i, j)`, `i <= j`, in the packed upper triangle.
pub fn component_slot(i: usize, j: usize) -> usize {
    debug_assert!(i <= j && j < 4);
    const OFF: [usize; 4] = [0, 4, 7, 9];
    OFF[i] + (j - i)
}

/// The `(i, j)` pair stored at a packed slot.
pub const COMPONENT_PAIRS: [(usize, usize); 10] = [
    (0, 0),
    (0, 1),
    (0, 2),
    (0, 3),
    (1, 1),
    (1, 2),
    (1, 3),
    (2, 2),
    (2, 3),
    (3, 3),
];

#[derive(Debug, Clone, PartialEq)]
pub struct MetricSpec {
    pub label: String,
    /// Coordinate names in order; slot 0 is time.
    pub coordinates: [String; 4],
    /// Independent components `g_ij` for `i <= j` in [`COMPONENT_PAIRS`] order.
    pub components: [Expr; 10],
    pub parameters: Params,
    /// Optional candidate generator field `A^i` (contravariant components).
    pub generator_hint: Option<[Expr; 4]>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum MetricError {
    UnknownBuiltin { name: String },
    BadParameter { name: String, reason: String },
    /// Degenerate metric or coordinate-singular component at this point.
    Singular { point: Vec4 },
    /// Value-part eigenvalue signs are not `(-,+,+,+)`.
    Signature { negative_count: usize },
    Expr(ExprError),
}

impl fmt::Display for MetricError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MetricError::UnknownBuiltin { name } => write!(f, "unknown builtin metric `{name}`"),
            MetricError::BadParameter { name, reason } => {
                write!(f, "bad parameter `{name}`: {reason}")
            }
            MetricError::Singular { point } => write!(
                f,
                "metric is singular at ({}, {}, {}, {})",
                point[0], point[1], point[2], point[3]
            ),
            MetricError::Signature { negative_count } => write!(
                f,
                "metric signature is not (-,+,+,+): {negative_count} negative eigenvalue(s)"
            ),
            MetricError::Expr(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for MetricError {}

impl From<ExprError> for MetricError {
    fn from(e: ExprError) -> Self {
        MetricError::Expr(e)
    }
}

/// Metric and inverse metric as jets at a point.
#[derive(Debug, Clone)]
pub struct MetricJet {
    pub g: JetMat4,
    pub ginv: JetMat4,
    pub point: Vec4,
    pub det_value: f64,
}

impl MetricSpec {
    pub fn coord_names(&self) -> [&str; 4] {
        core::array::from_fn(|i| self.coordinates[i].as_str())
    }

    /// Component expression for `(i, j)` in either index order.
    pub fn component(&self, i: usize, j: usize) -> &Expr {
        let (i, j) = if i <= j { (i, j) } else { (j, i) };
        &self.components[component_slot(i, j)]
    }
}

/// Evaluate the metric and its inverse as jets at `point`.
pub fn eval_metric(spec: &MetricSpec, point: &Vec4) -> Result<MetricJet, MetricError> {
    let env = linalg::jet_vec4(|i| Jet3::variable(i, point[i]));
    let singular = |e: ExprError| match e {
        ExprError::Eval {
            source: JetError::DivisionByZero,
            ..
        } => MetricError::Singular { point: *point },
        other => MetricError::Expr(other),
    };

    let mut g = [[Jet3::ZERO; 4]; 4];
    for (slot, &(i, j)) in COMPONENT_PAIRS.iter().enumerate() {
        let jet = spec.components[slot]
            .evaluate(&env, &spec.parameters)
            .map_err(singular)?;
        g[i][j] = jet;
        g[j][i] = jet;
    }

    let values: Mat4 = linalg::mat4(|i, j| g[i][j].value());
    let det_value = linalg::det4(&values);
    let scale: f64 = (0..4)
        .map(|i| linalg::norm_vec4(&values[i]))
        .product::<f64>()
        .max(1e-300);
    if det_value.abs() < 1e-12 * scale {
        return Err(MetricError::Singular { point: *point });
    }

    let eig = linalg::sym_eigenvalues4(&values);
    let negative_count = eig.iter().filter(|&&l| l < 0.0).count();
    if negative_count != 1 || det_value >= 0.0 {
        return Err(MetricError::Signature { negative_count });
    }

    let ginv = linalg::invert_jet4(&g).map_err(|_| MetricError::Singular { point: *point })?;
    Ok(MetricJet {
        g,
        ginv,
        point: *point,
        det_value,
    })
}

fn zero_expr() -> Expr {
    Expr::Number {
        value: 0.0,
        pos: 0,
    }
}

fn build_spec(
    label: &str,
    coords: [&str; 4],
    entries: &[(usize, usize, String)],
    parameters: Params,
    hint: Option<[&str; 4]>,
) -> Result<MetricSpec, MetricError> {
    let mut components: [Expr; 10] = core::array::from_fn(|_| zero_expr());
    for (i, j, src) in entries {
        components[component_slot(*i, *j)] =
            Expr::parse_str(src, &coords).map_err(MetricError::Expr)?;
    }
    let generator_hint = match hint {
        Some(h) => {
            let mut out: [Expr; 4] = core::array::from_fn(|_| zero_expr());
            for (slot, src) in h.iter().enumerate() {
                out[slot] = Expr::parse_str(src, &coords).map_err(MetricError::Expr)?;
            }
            Some(out)
        }
        None => None,
    };
    Ok(MetricSpec {
        label: label.to_string(),
        coordinates: core::array::from_fn(|i| coords[i].to_string()),
        components,
        parameters,
        generator_hint,
    })
}

fn require<'a>(
    params: &'a BTreeMap<String, String>,
    builtin: &str,
    name: &str,
) -> Result<&'a str, MetricError> {
    params
        .get(name)
        .map(String::as_str)
        .ok_or_else(|| MetricError::BadParameter {
            name: name.to_string(),
            reason: format!("builtin `{builtin}` needs `{name}`"),
        })
}

fn positive_real(
    params: &BTreeMap<String, String>,
    builtin: &str,
    name: &str,
) -> Result<f64, MetricError> {
    let text = require(params, builtin, name)?;
    match text.parse::<f64>() {
        Ok(v) if v.is_finite() && v > 0.0 => Ok(v),
        _ => Err(MetricError::BadParameter {
            name: name.to_string(),
            reason: format!("`{text}` is not a positive real"),
        }),
    }
}

fn check_no_extra_params(
    params: &BTreeMap<String, String>,
    allowed: &[&str],
) -> Result<(), MetricError> {
    for name in params.keys() {
        if !allowed.contains(&name.as_str()) {
            return Err(MetricError::BadParameter {
                name: name.clone(),
                reason: "not a parameter of this builtin".to_string(),
            });
        }
    }
    Ok(())
}

fn flrw(label: &str, a_expr: &str, kind: FlrwKind, parameters: Params) -> Result<MetricSpec, MetricError> {
    // validate the scale factor on its own before splicing it in
    Expr::parse_str(a_expr, &["t", "x", "y", "z"]).map_err(|e| MetricError::BadParameter {
        name: "a".to_string(),
        reason: format!("scale factor does not parse: {e}"),
    })?;
    let a2 = format!("({a_expr})^2");
    let hint = Some(["1", "0", "0", "0"]);
    match kind {
        FlrwKind::Flat => build_spec(
            label,
            ["t", "x", "y", "z"],
            &[
                (0, 0, "-1".to_string()),
                (1, 1, a2.clone()),
                (2, 2, a2.clone()),
                (3, 3, a2),
            ],
            parameters,
            hint,
        ),
        FlrwKind::Closed => build_spec(
            label,
            ["t", "chi", "theta", "phi"],
            &[
                (0, 0, "-1".to_string()),
                (1, 1, a2.clone()),
                (2, 2, format!("{a2}*sin(chi)^2")),
                (3, 3, format!("{a2}*sin(chi)^2*sin(theta)^2")),
            ],
            parameters,
            hint,
        ),
        FlrwKind::Open => build_spec(
            label,
            ["t", "chi", "theta", "phi"],
            &[
                (0, 0, "-1".to_string()),
                (1, 1, a2.clone()),
                (2, 2, format!("{a2}*sinh(chi)^2")),
                (3, 3, format!("{a2}*sinh(chi)^2*sin(theta)^2")),
            ],
            parameters,
            hint,
        ),
    }
}

enum FlrwKind {
    Flat,
    Closed,
    Open,
}

/// One entry of the builtin catalog, for listings.
pub struct CatalogEntry {
    pub name: &'static str,
    /// `(name, kind, meaning)` for each accepted parameter.
    pub params: &'static [(&'static str, &'static str, &'static str)],
    pub description: &'static str,
}

pub const CATALOG: [CatalogEntry; 7] = [
    CatalogEntry {
        name: "minkowski",
        params: &[],
        description: "flat spacetime, ds^2 = -dt^2 + dx^2 + dy^2 + dz^2",
    },
    CatalogEntry {
        name: "flrw-flat",
        params: &[("a", "expression in t", "scale factor")],
        description: "spatially flat FLRW, ds^2 = -dt^2 + a(t)^2 (dx^2 + dy^2 + dz^2)",
    },
    CatalogEntry {
        name: "flrw-closed",
        params: &[("a", "expression in t", "scale factor")],
        description: "closed FLRW in the hyperspherical chart (t, chi, theta, phi)",
    },
    CatalogEntry {
        name: "flrw-open",
        params: &[("a", "expression in t", "scale factor")],
        description: "open FLRW in the hyperbolic chart (t, chi, theta, phi)",
    },
    CatalogEntry {
        name: "de-sitter",
        params: &[("k", "positive real", "constant sectional curvature")],
        description: "de Sitter space as flat FLRW with a(t) = exp(sqrt(k) t)",
    },
    CatalogEntry {
        name: "einstein-static",
        params: &[("a0", "positive real", "radius of the spatial 3-sphere")],
        description: "Einstein static universe, ds^2 = -dt^2 + a0^2 dOmega_3^2",
    },
    CatalogEntry {
        name: "schwarzschild",
        params: &[("M", "positive real", "mass")],
        description: "Schwarzschild exterior in the standard static chart (t, r, theta, phi)",
    },
];

/// Construct a catalog metric by name.
pub fn builtin(name: &str, params: &BTreeMap<String, String>) -> Result<MetricSpec, MetricError> {
    match name {
        "minkowski" => {
            check_no_extra_params(params, &[])?;
            build_spec(
                "minkowski",
                ["t", "x", "y", "z"],
                &[
                    (0, 0, "-1".to_string()),
                    (1, 1, "1".to_string()),
                    (2, 2, "1".to_string()),
                    (3, 3, "1".to_string()),
                ],
                Params::new(),
                Some(["1", "0", "0", "0"]),
            )
        }
        "flrw-flat" => {
            check_no_extra_params(params, &["a"])?;
            flrw("flrw-flat", require(params, name, "a")?, FlrwKind::Flat, Params::new())
        }
        "flrw-closed" => {
            check_no_extra_params(params, &["a"])?;
            flrw(
                "flrw-closed",
                require(params, name, "a")?,
                FlrwKind::Closed,
                Params::new(),
            )
        }
        "flrw-open" => {
            check_no_extra_params(params, &["a"])?;
            flrw("flrw-open", require(params, name, "a")?, FlrwKind::Open, Params::new())
        }
        "de-sitter" => {
            check_no_extra_params(params, &["k"])?;
            let k = positive_real(params, name, "k")?;
            let mut p = Params::new();
            p.insert("k".to_string(), k);
            flrw("de-sitter", "exp(sqrt(k)*t)", FlrwKind::Flat, p)
        }
        "einstein-static" => {
            check_no_extra_params(params, &["a0"])?;
            let a0 = positive_real(params, name, "a0")?;
            let mut p = Params::new();
            p.insert("a0".to_string(), a0);
            build_spec(
                "einstein-static",
                ["t", "chi", "theta", "phi"],
                &[
                    (0, 0, "-1".to_string()),
                    (1, 1, "a0^2".to_string()),
                    (2, 2, "a0^2*sin(chi)^2".to_string()),
                    (3, 3, "a0^2*sin(chi)^2*sin(theta)^2".to_string()),
                ],
                p,
                Some(["1", "0", "0", "0"]),
            )
        }
        "schwarzschild" => {
            check_no_extra_params(params, &["M"])?;
            let m = positive_real(params, name, "M")?;
            let mut p = Params::new();
            p.insert("M".to_string(), m);
            build_spec(
                "schwarzschild",
                ["t", "r", "theta", "phi"],
                &[
                    (0, 0, "-(1-2*M/r)".to_string()),
                    (1, 1, "1/(1-2*M/r)".to_string()),
                    (2, 2, "r^2".to_string()),
                    (3, 3, "r^2*sin(theta)^2".to_string()),
                ],
                p,
                Some(["1/sqrt(1-2*M/r)", "0", "0", "0"]),
            )
        }
        other => Err(MetricError::UnknownBuiltin {
            name: other.to_string(),
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec::Vec;
    use approx::assert_relative_eq;

    fn builtin_with(name: &str, params: &[(&str, &str)]) -> MetricSpec {
        let map: BTreeMap<String, String> = params
            .iter()
            .map(|(k, v)| (k.to_string(), v.to_string()))
            .collect();
        builtin(name, &map).unwrap()
    }

    #[test]
    fn minkowski_is_flat() {
        let spec = builtin_with("minkowski", &[]);
        let mj = eval_metric(&spec, &[0.3, -1.0, 2.0, 0.0]).unwrap();
        assert_eq!(mj.det_value, -1.0);
        for i in 0..4 {
            for j in 0..4 {
                let expect = match (i, j) {
                    (0, 0) => -1.0,
                    (a, b) if a == b => 1.0,
                    _ => 0.0,
                };
                assert_eq!(mj.ginv[i][j].value(), expect);
                for c in &mj.ginv[i][j].coeffs[1..] {
                    assert_eq!(*c, 0.0);
                }
            }
        }
    }

    #[test]
    fn flrw_scale_factor_derivatives() {
        let spec = builtin_with("flrw-flat", &[("a", "t^2")]);
        let mj = eval_metric(&spec, &[1.0, 0.0, 0.0, 0.0]).unwrap();
        // g_xx = t^4: value 1, d/dt = 4
        assert_relative_eq!(mj.g[1][1].value(), 1.0, epsilon = 1e-14);
        assert_relative_eq!(mj.g[1][1].partial([1, 0, 0, 0]), 4.0, epsilon = 1e-13);
        // degenerate at t = 0
        assert!(matches!(
            eval_metric(&spec, &[0.0, 0.0, 0.0, 0.0]),
            Err(MetricError::Singular { .. })
        ));
    }

    #[test]
    fn schwarzschild_values_and_horizon() {
        let spec = builtin_with("schwarzschild", &[("M", "1")]);
        let p = [0.0, 3.0, core::f64::consts::FRAC_PI_2, 0.0];
        let mj = eval_metric(&spec, &p).unwrap();
        assert_relative_eq!(mj.g[0][0].value(), -1.0 / 3.0, epsilon = 1e-14);
        assert_relative_eq!(mj.g[1][1].value(), 3.0, epsilon = 1e-14);
        assert!(matches!(
            eval_metric(&spec, &[0.0, 2.0, 1.0, 0.0]),
            Err(MetricError::Singular { .. })
        ));
    }

    #[test]
    fn de_sitter_matches_hand_built_flrw() {
        let ds = builtin_with("de-sitter", &[("k", "1")]);
        let mj = eval_metric(&ds, &[0.3, 0.0, 0.0, 0.0]).unwrap();
        assert_relative_eq!(mj.g[1][1].value(), (0.6f64).exp(), epsilon = 1e-13);
    }

    #[test]
    fn inverse_is_exact_through_derivatives() {
        let spec = builtin_with("schwarzschild", &[("M", "1")]);
        let mj = eval_metric(&spec, &[0.0, 3.5, 1.1, 0.4]).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                let prod = linalg::jet_sum1(|k| mj.g[i][k] * mj.ginv[k][j]);
                let target = if i == j { 1.0 } else { 0.0 };
                assert_relative_eq!(prod.value(), target, epsilon = 1e-12);
                for c in &prod.coeffs[1..] {
                    assert!(c.abs() <= 1e-12);
                }
            }
        }
    }

    #[test]
    fn euclidean_signature_rejected() {
        let spec = MetricSpec {
            label: "euclid".into(),
            coordinates: core::array::from_fn(|i| ["t", "x", "y", "z"][i].into()),
            components: {
                let mut c: [Expr; 10] = core::array::from_fn(|_| zero_expr());
                for i in 0..4 {
                    c[component_slot(i, i)] = Expr::parse_str("1", &["t", "x", "y", "z"]).unwrap();
                }
                c
            },
            parameters: Params::new(),
            generator_hint: None,
        };
        assert!(matches!(
            eval_metric(&spec, &[0.0; 4]),
            Err(MetricError::Signature { negative_count: 0 })
        ));
    }

    #[test]
    fn builtin_errors() {
        assert!(matches!(
            builtin("kerr", &BTreeMap::new()),
            Err(MetricError::UnknownBuiltin { .. })
        ));
        assert!(matches!(
            builtin("flrw-flat", &BTreeMap::new()),
            Err(MetricError::BadParameter { .. })
        ));
        let mut p = BTreeMap::new();
        p.insert("k".to_string(), "-2".to_string());
        assert!(matches!(
            builtin("de-sitter", &p),
            Err(MetricError::BadParameter { .. })
        ));
        let mut p = BTreeMap::new();
        p.insert("a".to_string(), "t^2".to_string());
        p.insert("zz".to_string(), "1".to_string());
        assert!(matches!(
            builtin("flrw-flat", &p),
            Err(MetricError::BadParameter { .. })
        ));
    }

    #[test]
    fn catalog_names_build() {
        let defaults: Vec<(&str, Vec<(&str, &str)>)> = alloc::vec![
            ("minkowski", alloc::vec![]),
            ("flrw-flat", alloc::vec![("a", "t^2")]),
            ("flrw-closed", alloc::vec![("a", "t^2")]),
            ("flrw-open", alloc::vec![("a", "t^2")]),
            ("de-sitter", alloc::vec![("k", "1")]),
            ("einstein-static", alloc::vec![("a0", "1")]),
            ("schwarzschild", alloc::vec![("M", "1")]),
        ];
        assert_eq!(defaults.len(), CATALOG.len());
        for (name, params) in defaults {
            let spec = builtin_with(name, &params);
            assert_eq!(spec.label, name);
        }
    }
}
