//! Command-line surface: argument parsing, command drivers, exit codes.
//!
//! Exit codes: 0 success, 1 usage error (or failed verification checks),
//! 2 input/domain error, 3 internal fault.

use std::collections::BTreeMap;
use std::fs;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use qcst_core::frg::{self, FrModel, GridSpec};
use qcst_core::linalg::Vec4;
use qcst_core::metric::{builtin, MetricSpec, CATALOG};

use crate::csvout;
use crate::format;
use crate::report;
use crate::verify;

pub const DEFAULT_TOL: f64 = qcst_core::qc::DEFAULT_TOL;

#[derive(Parser, Debug)]
#[command(
    name = "qcst",
    version,
    about = "Curvature workbench for quasi-constant sectional curvature spacetimes"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutputFormat {
    Text,
    Csv,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Analyze a metric at one or more points: curvature, QC detection,
    /// fluid interpretation, diagnostics.
    Analyze {
        /// Metric source: a file path or `builtin:<name>` (see `catalog`).
        #[arg(long)]
        metric: String,
        /// Metric parameter, `NAME=VALUE`; repeatable.
        #[arg(long = "param", value_name = "NAME=VALUE")]
        params: Vec<String>,
        /// Evaluation point as `name=value` pairs keyed by the declared
        /// coordinates, e.g. `t=1,x=0,y=0,z=0`; repeatable.
        #[arg(long = "point", value_name = "COORDS", required = true)]
        points: Vec<String>,
        /// Gravitational coupling kappa.
        #[arg(long, default_value_t = 1.0)]
        kappa: f64,
        /// Detection tolerance (default 1e-8, or the QCST_TOL env var).
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
        format: OutputFormat,
        /// Write the report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Scan energy conditions of an F(R) model over a (mu, gamma) grid
    /// and write a CSV.
    EcScan {
        #[arg(long, default_value_t = 1.0)]
        mu_min: f64,
        #[arg(long, default_value_t = 2.0)]
        mu_max: f64,
        #[arg(long, default_value_t = 50)]
        mu_steps: usize,
        #[arg(long, default_value_t = 0.5)]
        gamma_min: f64,
        #[arg(long, default_value_t = 2.0)]
        gamma_max: f64,
        #[arg(long, default_value_t = 50)]
        gamma_steps: usize,
        /// F(R) model: `model-a` or `gr`.
        #[arg(long, default_value = "model-a")]
        model: String,
        /// Series truncation for model-a.
        #[arg(long, default_value_t = 64)]
        terms: u32,
        #[arg(long, default_value_t = 1.0)]
        kappa: f64,
        /// Output CSV path.
        #[arg(long, default_value = "ec_scan.csv")]
        out: PathBuf,
    },
    /// List the builtin metric catalog.
    Catalog,
    /// Run the self-verification suites.
    Verify {
        /// Run a single suite: jets, parser, curvature-oracle,
        /// qc-roundtrip, theorem-fixtures, frg-identities.
        #[arg(long)]
        suite: Option<String>,
        #[arg(long)]
        tol: Option<f64>,
    },
}

/// Rendered command output plus the process exit code.
#[derive(Debug)]
pub struct Output {
    pub text: String,
    pub code: i32,
}

impl Output {
    fn ok(text: String) -> Self {
        Output { text, code: 0 }
    }
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Input(String),
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Input(_) => 2,
            CliError::Internal(_) => 3,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Input(m) | CliError::Internal(m) => m,
        }
    }
}

/// Exact suite name, or a unique prefix of one (`frg` works).
fn resolve_suite_name(name: &str) -> Result<&'static str, CliError> {
    if let Some(exact) = verify::SUITE_NAMES.iter().find(|s| **s == name) {
        return Ok(exact);
    }
    let matches: Vec<&'static str> = verify::SUITE_NAMES
        .iter()
        .copied()
        .filter(|s| s.starts_with(name))
        .collect();
    match matches.as_slice() {
        [single] => Ok(single),
        _ => Err(CliError::Usage(format!(
            "unknown suite `{name}`; expected one of {}",
            verify::SUITE_NAMES.join(", ")
        ))),
    }
}

/// Tolerance resolution: explicit flag, then `QCST_TOL`, then the default.
pub fn resolve_tol(flag: Option<f64>) -> Result<f64, CliError> {
    if let Some(t) = flag {
        if !(t > 0.0) {
            return Err(CliError::Usage("--tol must be positive".into()));
        }
        return Ok(t);
    }
    match std::env::var("QCST_TOL") {
        Ok(text) => text
            .parse::<f64>()
            .ok()
            .filter(|t| *t > 0.0)
            .ok_or_else(|| {
                CliError::Usage(format!("QCST_TOL=`{text}` is not a positive real"))
            }),
        Err(_) => Ok(DEFAULT_TOL),
    }
}

fn parse_params(raw: &[String]) -> Result<BTreeMap<String, String>, CliError> {
    let mut map = BTreeMap::new();
    for item in raw {
        let (k, v) = item.split_once('=').ok_or_else(|| {
            CliError::Usage(format!("--param `{item}` is not of the form NAME=VALUE"))
        })?;
        if map.insert(k.trim().to_string(), v.trim().to_string()).is_some() {
            return Err(CliError::Usage(format!("--param `{k}` given twice")));
        }
    }
    Ok(map)
}

/// Load a metric from `builtin:<name>` or a file path, applying `--param`
/// values (builtin parameters, or overrides of file `param` lines).
pub fn load_metric_source(
    source: &str,
    params: &BTreeMap<String, String>,
) -> Result<MetricSpec, CliError> {
    if let Some(name) = source.strip_prefix("builtin:") {
        return builtin(name, params).map_err(|e| CliError::Input(e.to_string()));
    }
    let text = fs::read_to_string(source)
        .map_err(|e| CliError::Input(format!("cannot read `{source}`: {e}")))?;
    let mut spec = format::load_metric(&text)
        .map_err(|e| CliError::Input(format!("{source}: {e}")))?;
    for (k, v) in params {
        let value: f64 = v.parse().map_err(|_| {
            CliError::Input(format!("--param {k}={v}: value is not a real number"))
        })?;
        if !spec.parameters.contains_key(k) {
            return Err(CliError::Input(format!(
                "--param {k}: the file declares no such parameter"
            )));
        }
        spec.parameters.insert(k.clone(), value);
    }
    Ok(spec)
}

/// Parse `t=1,x=0,...` against the declared coordinate names.
pub fn parse_point(spec: &MetricSpec, text: &str) -> Result<Vec4, CliError> {
    let mut values = [None::<f64>; 4];
    for part in text.split(',') {
        let (name, value) = part.split_once('=').ok_or_else(|| {
            CliError::Usage(format!("--point `{part}` is not of the form name=value"))
        })?;
        let name = name.trim();
        let idx = spec
            .coordinates
            .iter()
            .position(|c| c == name)
            .ok_or_else(|| {
                CliError::Input(format!(
                    "`{name}` is not a coordinate of this metric (expected {})",
                    spec.coordinates.join(", ")
                ))
            })?;
        let v: f64 = value
            .trim()
            .parse()
            .map_err(|_| CliError::Input(format!("`{value}` is not a real number")))?;
        if values[idx].replace(v).is_some() {
            return Err(CliError::Input(format!("coordinate `{name}` given twice")));
        }
    }
    let mut out = [0.0; 4];
    for (i, v) in values.iter().enumerate() {
        out[i] = v.ok_or_else(|| {
            CliError::Input(format!("--point is missing `{}`", spec.coordinates[i]))
        })?;
    }
    Ok(out)
}

pub fn run(cli: Cli) -> Result<Output, CliError> {
    match cli.command {
        Command::Analyze {
            metric,
            params,
            points,
            kappa,
            tol,
            format: fmt,
            out,
        } => {
            let tol = resolve_tol(tol)?;
            if !(kappa > 0.0) {
                return Err(CliError::Usage("--kappa must be positive".into()));
            }
            let spec = load_metric_source(&metric, &parse_params(&params)?)?;
            let mut analyses = Vec::new();
            for point_text in &points {
                let point = parse_point(&spec, point_text)?;
                let analysis = report::analyze_point(&spec, &point, kappa, tol)
                    .map_err(|e| CliError::Input(format!("at {point_text}: {e}")))?;
                analyses.push(analysis);
            }
            let body = match fmt {
                OutputFormat::Text => {
                    let mut s = format!("metric: {}\n", spec.label);
                    s.push_str(&report::convention_header(kappa, tol));
                    for a in &analyses {
                        s.push('\n');
                        s.push_str(&report::render_text(&spec, a));
                    }
                    s
                }
                OutputFormat::Csv => {
                    let mut s = report::csv_header(&spec);
                    s.push('\n');
                    for a in &analyses {
                        s.push_str(&report::csv_row(a));
                        s.push('\n');
                    }
                    s
                }
            };
            match out {
                Some(path) => {
                    csvout::write_atomic(&path, body.as_bytes())
                        .map_err(|e| CliError::Input(format!("writing output: {e}")))?;
                    Ok(Output::ok(format!("wrote {}\n", path.display())))
                }
                None => Ok(Output::ok(body)),
            }
        }

        Command::EcScan {
            mu_min,
            mu_max,
            mu_steps,
            gamma_min,
            gamma_max,
            gamma_steps,
            model,
            terms,
            kappa,
            out,
        } => {
            let model = FrModel::by_name(&model, terms)
                .map_err(|e| CliError::Usage(e.to_string()))?;
            let grid = GridSpec {
                mu_min,
                mu_max,
                mu_steps,
                gamma_min,
                gamma_max,
                gamma_steps,
            };
            let (records, summary) = frg::scan_grid(&grid, &model, kappa)
                .map_err(|e| CliError::Input(e.to_string()))?;
            if records.is_empty() {
                return Err(CliError::Input(
                    "every grid cell fell outside the model domain".into(),
                ));
            }
            let csv = csvout::render_ec_csv(&records);
            csvout::write_atomic(&out, csv.as_bytes())
                .map_err(|e| CliError::Input(format!("writing {}: {e}", out.display())))?;
            Ok(Output::ok(csvout::render_summary(
                &grid,
                &summary,
                model.label(),
                kappa,
                &out,
            )))
        }

        Command::Catalog => {
            let mut s = String::from("builtin metrics:\n");
            for entry in CATALOG.iter() {
                s.push_str(&format!("  {:<16} {}\n", entry.name, entry.description));
                for (name, kind, meaning) in entry.params {
                    s.push_str(&format!("    param {name} ({kind}): {meaning}\n"));
                }
            }
            Ok(Output::ok(s))
        }

        Command::Verify { suite, tol } => {
            let tol = resolve_tol(tol)?;
            let names: Vec<&str> = match &suite {
                Some(name) => vec![resolve_suite_name(name)?],
                None => verify::SUITE_NAMES.to_vec(),
            };
            let mut s = String::new();
            let mut failed = 0usize;
            let mut total = 0usize;
            for name in names {
                let checks =
                    verify::run_suite(name, tol).map_err(CliError::Internal)?;
                for check in checks {
                    total += 1;
                    if !check.pass() {
                        failed += 1;
                    }
                    s.push_str(&check.line());
                    s.push('\n');
                }
            }
            s.push_str(&format!("{total} checks, {failed} failed\n"));
            Ok(Output {
                text: s,
                code: if failed > 0 { 1 } else { 0 },
            })
        }
    }
}
