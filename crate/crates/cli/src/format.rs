//! The line-oriented metric file format.
//!
//! ```text
//! # FLRW with a quadratic scale factor
//! label: my-flrw
//! coordinates: t x y z
//! param H = 0.7
//! g_tt = -1
//! g_xx = (t^2)^2
//! g_yy = (t^2)^2
//! g_zz = (t^2)^2
//! generator: 1 0 0 0
//! ```
//!
//! The `coordinates:` line must come before any component or generator
//! line. Component keys use coordinate names as indices (`g_tt`, `g_tx`,
//! either index order); omitted off-diagonal components default to zero,
//! omitted diagonal components are an error. `generator:` takes four
//! whitespace-separated expressions (no spaces inside an expression) for
//! a candidate `A^i`. `#` starts a comment, blank lines are ignored, and
//! unknown keys are errors. Full grammar notes live in
//! `docs/metric-format.md`.

use std::collections::BTreeSet;
use std::fmt;

use qcst_core::expr::{Expr, ExprError};
use qcst_core::metric::{component_slot, MetricSpec, COMPONENT_PAIRS};

#[derive(Debug, Clone, PartialEq)]
pub enum LoadError {
    Parse {
        line: usize,
        col: usize,
        message: String,
    },
    MissingComponent {
        name: String,
    },
    MissingCoordinates,
    DuplicateKey {
        line: usize,
        name: String,
    },
    UnknownCoordinate {
        line: usize,
        name: String,
    },
    UnknownKey {
        line: usize,
        key: String,
    },
    UndeclaredParameter {
        line: usize,
        col: usize,
        name: String,
    },
}

impl fmt::Display for LoadError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LoadError::Parse { line, col, message } => {
                write!(f, "line {line}, column {col}: {message}")
            }
            LoadError::MissingComponent { name } => {
                write!(f, "missing diagonal component `{name}`")
            }
            LoadError::MissingCoordinates => write!(f, "missing `coordinates:` line"),
            LoadError::DuplicateKey { line, name } => {
                write!(f, "line {line}: duplicate key `{name}`")
            }
            LoadError::UnknownCoordinate { line, name } => {
                write!(f, "line {line}: `{name}` does not name a coordinate pair")
            }
            LoadError::UnknownKey { line, key } => write!(f, "line {line}: unknown key `{key}`"),
            LoadError::UndeclaredParameter { line, col, name } => write!(
                f,
                "line {line}, column {col}: parameter `{name}` is not declared"
            ),
        }
    }
}

impl std::error::Error for LoadError {}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Translate an expression error into a file-level error with 1-based
/// line/column. `col_base` is the 1-based column where the expression
/// starts on its line.
fn expr_error(line: usize, col_base: usize, src: &ExprError) -> LoadError {
    let col = col_base + src.pos().unwrap_or(0);
    LoadError::Parse {
        line,
        col,
        message: src.to_string(),
    }
}

/// Resolve a component key like `ttheta` against the coordinate list.
/// Returns the unordered `(i, j)` pair with `i <= j`.
fn resolve_component(
    coords: &[String; 4],
    suffix: &str,
    line: usize,
) -> Result<(usize, usize), LoadError> {
    let mut found: Option<(usize, usize)> = None;
    for i in 0..4 {
        for j in 0..4 {
            if suffix.len() == coords[i].len() + coords[j].len()
                && suffix.starts_with(coords[i].as_str())
                && suffix.ends_with(coords[j].as_str())
            {
                let pair = (i.min(j), i.max(j));
                match found {
                    None => found = Some(pair),
                    Some(prev) if prev == pair => {}
                    Some(_) => {
                        return Err(LoadError::Parse {
                            line,
                            col: 1,
                            message: format!("component key `g_{suffix}` is ambiguous"),
                        })
                    }
                }
            }
        }
    }
    found.ok_or_else(|| LoadError::UnknownCoordinate {
        line,
        name: format!("g_{suffix}"),
    })
}

/// Parse the metric file format into a [`MetricSpec`].
pub fn load_metric(text: &str) -> Result<MetricSpec, LoadError> {
    let mut label: Option<String> = None;
    let mut coords: Option<[String; 4]> = None;
    let mut params = qcst_core::expr::Params::new();
    let mut components: [Option<Expr>; 10] = Default::default();
    // (line, 1-based column) where each stored expression begins
    let mut component_pos = [(0usize, 1usize); 10];
    let mut generator: Option<[Expr; 4]> = None;
    let mut generator_pos: [(usize, usize); 4] = [(0, 1); 4];

    for (idx, raw_line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let content = match raw_line.find('#') {
            Some(at) => &raw_line[..at],
            None => raw_line,
        };
        if content.trim().is_empty() {
            continue;
        }
        let indent = content.len() - content.trim_start().len();
        let content = content.trim();

        if let Some(rest) = content.strip_prefix("label:") {
            if label.is_some() {
                return Err(LoadError::DuplicateKey {
                    line: line_no,
                    name: "label".into(),
                });
            }
            label = Some(rest.trim().to_string());
        } else if let Some(rest) = content.strip_prefix("coordinates:") {
            if coords.is_some() {
                return Err(LoadError::DuplicateKey {
                    line: line_no,
                    name: "coordinates".into(),
                });
            }
            let names: Vec<&str> = rest.split_whitespace().collect();
            if names.len() != 4 || !names.iter().all(|n| is_identifier(n)) {
                return Err(LoadError::Parse {
                    line: line_no,
                    col: 1,
                    message: "expected exactly 4 coordinate names".into(),
                });
            }
            let set: BTreeSet<&str> = names.iter().copied().collect();
            if set.len() != 4 {
                return Err(LoadError::Parse {
                    line: line_no,
                    col: 1,
                    message: "coordinate names must be distinct".into(),
                });
            }
            coords = Some(std::array::from_fn(|i| names[i].to_string()));
        } else if let Some(rest) = content.strip_prefix("param ") {
            let (name, value) = rest.split_once('=').ok_or(LoadError::Parse {
                line: line_no,
                col: 1,
                message: "expected `param <name> = <real>`".into(),
            })?;
            let name = name.trim();
            if !is_identifier(name) {
                return Err(LoadError::Parse {
                    line: line_no,
                    col: 1,
                    message: format!("`{name}` is not a valid parameter name"),
                });
            }
            let value: f64 = value.trim().parse().map_err(|_| LoadError::Parse {
                line: line_no,
                col: 1,
                message: format!("`{}` is not a real number", value.trim()),
            })?;
            if !value.is_finite() {
                return Err(LoadError::Parse {
                    line: line_no,
                    col: 1,
                    message: "parameter value must be finite".into(),
                });
            }
            if params.insert(name.to_string(), value).is_some() {
                return Err(LoadError::DuplicateKey {
                    line: line_no,
                    name: name.to_string(),
                });
            }
        } else if let Some(rest) = content.strip_prefix("generator:") {
            let coords = coords.as_ref().ok_or(LoadError::MissingCoordinates)?;
            if generator.is_some() {
                return Err(LoadError::DuplicateKey {
                    line: line_no,
                    name: "generator".into(),
                });
            }
            let parts: Vec<&str> = rest.split_whitespace().collect();
            if parts.len() != 4 {
                return Err(LoadError::Parse {
                    line: line_no,
                    col: 1,
                    message: "generator needs exactly 4 expressions".into(),
                });
            }
            let names: [&str; 4] = std::array::from_fn(|i| coords[i].as_str());
            let mut out: Vec<Expr> = Vec::with_capacity(4);
            for (slot, part) in parts.iter().enumerate() {
                // column of this token within the trimmed content
                let col_base = indent + content.find(part).unwrap_or(0) + 1;
                generator_pos[slot] = (line_no, col_base);
                out.push(
                    Expr::parse_str(part, &names)
                        .map_err(|e| expr_error(line_no, col_base, &e))?,
                );
            }
            generator = Some(std::array::from_fn(|i| out[i].clone()));
        } else if let Some(rest) = content.strip_prefix("g_") {
            let coords_ref = coords.as_ref().ok_or(LoadError::MissingCoordinates)?;
            let (key, expr_src) = rest.split_once('=').ok_or(LoadError::Parse {
                line: line_no,
                col: 1,
                message: "expected `g_<i><j> = <expression>`".into(),
            })?;
            let key = key.trim();
            let (i, j) = resolve_component(coords_ref, key, line_no)?;
            let slot = component_slot(i, j);
            if components[slot].is_some() {
                return Err(LoadError::DuplicateKey {
                    line: line_no,
                    name: format!("g_{key}"),
                });
            }
            let names: [&str; 4] = std::array::from_fn(|i| coords_ref[i].as_str());
            // 1-based column where the expression text begins
            let eq_at = raw_line.find('=').expect("split on '=' succeeded");
            let expr_offset = eq_at + 1 + (expr_src.len() - expr_src.trim_start().len());
            let expr = Expr::parse_str(expr_src.trim(), &names)
                .map_err(|e| expr_error(line_no, expr_offset + 1, &e))?;
            components[slot] = Some(expr);
            component_pos[slot] = (line_no, expr_offset + 1);
        } else {
            let key = content.split_whitespace().next().unwrap_or(content);
            return Err(LoadError::UnknownKey {
                line: line_no,
                key: key.trim_end_matches(':').to_string(),
            });
        }
    }

    let coords = coords.ok_or(LoadError::MissingCoordinates)?;
    // diagonals are required, off-diagonals default to zero
    for d in 0..4 {
        if components[component_slot(d, d)].is_none() {
            return Err(LoadError::MissingComponent {
                name: format!("g_{0}{0}", coords[d]),
            });
        }
    }
    let components: [Expr; 10] = std::array::from_fn(|slot| {
        components[slot]
            .clone()
            .unwrap_or(Expr::Number { value: 0.0, pos: 0 })
    });

    // every referenced parameter must be declared
    for (slot, expr) in components.iter().enumerate() {
        let (i, j) = COMPONENT_PAIRS[slot];
        let (line, col_base) = component_pos[slot];
        check_parameters(expr, &params).map_err(|(name, pos)| {
            LoadError::UndeclaredParameter {
                line,
                col: col_base + pos,
                name: format!("{name} (in g_{}{})", coords[i], coords[j]),
            }
        })?;
    }
    if let Some(gen) = &generator {
        for (slot, expr) in gen.iter().enumerate() {
            let (line, col_base) = generator_pos[slot];
            check_parameters(expr, &params).map_err(|(name, pos)| {
                LoadError::UndeclaredParameter {
                    line,
                    col: col_base + pos,
                    name: format!("{name} (in generator)"),
                }
            })?;
        }
    }

    Ok(MetricSpec {
        label: label.unwrap_or_else(|| "metric".to_string()),
        coordinates: coords,
        components,
        parameters: params,
        generator_hint: generator,
    })
}

fn check_parameters(
    expr: &Expr,
    params: &qcst_core::expr::Params,
) -> Result<(), (String, usize)> {
    match expr {
        Expr::Parameter { name, pos } => {
            if params.contains_key(name) {
                Ok(())
            } else {
                Err((name.clone(), *pos))
            }
        }
        Expr::Number { .. } | Expr::Variable { .. } => Ok(()),
        Expr::Neg { child, .. } => check_parameters(child, params),
        Expr::Binary { lhs, rhs, .. } => {
            check_parameters(lhs, params)?;
            check_parameters(rhs, params)
        }
        Expr::Call { arg, .. } => check_parameters(arg, params),
    }
}
