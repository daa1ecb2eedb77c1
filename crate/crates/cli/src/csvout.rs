//! Deterministic CSV rendering and atomic file output.

use std::io::Write;
use std::path::Path;

use qcst_core::frg::{EcRecord, GridSpec, ScanSummary};

/// A float with 17 significant digits, enough to round-trip any `f64`.
pub fn float17(x: f64) -> String {
    format!("{x:.16e}")
}

fn flag(b: bool) -> &'static str {
    if b {
        "1"
    } else {
        "0"
    }
}

pub const EC_CSV_HEADER: &str = "mu,gamma,R,F,F_R,sigma_eff,p_eff,nec,wec,dec,sec";

/// Render scan records as CSV: pinned header, `\n` line endings, floats
/// with 17 significant digits, booleans as 0/1.
pub fn render_ec_csv(records: &[EcRecord]) -> String {
    let mut out = String::with_capacity(64 + records.len() * 160);
    out.push_str(EC_CSV_HEADER);
    out.push('\n');
    for r in records {
        out.push_str(&float17(r.mu));
        out.push(',');
        out.push_str(&float17(r.gamma));
        out.push(',');
        out.push_str(&float17(r.r));
        out.push(',');
        out.push_str(&float17(r.f));
        out.push(',');
        out.push_str(&float17(r.f_r));
        out.push(',');
        out.push_str(&float17(r.sigma_eff));
        out.push(',');
        out.push_str(&float17(r.p_eff));
        out.push(',');
        out.push_str(flag(r.flags.nec));
        out.push(',');
        out.push_str(flag(r.flags.wec));
        out.push(',');
        out.push_str(flag(r.flags.dec));
        out.push(',');
        out.push_str(flag(r.flags.sec));
        out.push('\n');
    }
    out
}

/// Human summary block (stdout, not part of the CSV).
pub fn render_summary(
    grid: &GridSpec,
    summary: &ScanSummary,
    model_label: &str,
    kappa: f64,
    out_path: &Path,
) -> String {
    format!(
        "ec-scan: model {model_label}, kappa = {kappa}\n\
         grid: mu in [{}, {}] x {} steps, gamma in [{}, {}] x {} steps\n\
         cells: {} total, {} skipped (R outside the model domain), {} written\n\
         satisfied: NEC {:.1}%  WEC {:.1}%  DEC {:.1}%  SEC {:.1}%\n\
         csv: {}\n",
        grid.mu_min,
        grid.mu_max,
        grid.mu_steps,
        grid.gamma_min,
        grid.gamma_max,
        grid.gamma_steps,
        summary.total_cells,
        summary.skipped_cells,
        summary.total_cells - summary.skipped_cells,
        summary.nec_fraction * 100.0,
        summary.wec_fraction * 100.0,
        summary.dec_fraction * 100.0,
        summary.sec_fraction * 100.0,
        out_path.display(),
    )
}

/// Write via a temporary file in the target directory and rename into
/// place, so a failed run never leaves a partial CSV behind.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> std::io::Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty());
    let mut tmp = match dir {
        Some(d) => tempfile::NamedTempFile::new_in(d)?,
        None => tempfile::NamedTempFile::new_in(".")?,
    };
    tmp.write_all(bytes)?;
    tmp.flush()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}
