//! CSV and gnuplot writers.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use super::{SweepMetrics, SweepTable};
use crate::correlator::CorrelationScan;
use crate::error::{Error, Result};

pub const SCAN_HEADER: &str = "u2_mm,gamma_re,gamma_im,gamma_sq,gamma_sq_norm,I1,I2,G2";
pub const SWEEP_HEADER: &str = "value,V,Q,error";

/// 17 significant digits, enough to round-trip an `f64`.
fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn opt(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

fn quoted(text: &str) -> String {
    if text.contains([',', '"', '\n']) {
        format!("\"{}\"", text.replace('"', "\"\""))
    } else {
        text.to_string()
    }
}

pub fn scan_csv(scan: &CorrelationScan<f64>) -> String {
    let norm = scan.normalized_gamma_sq();
    let mut out = String::with_capacity(scan.len() * 200);
    out.push_str(SCAN_HEADER);
    out.push('\n');
    for (i, &n) in norm.iter().enumerate() {
        let g = scan.gamma[i];
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            num(scan.u2_grid[i]),
            num(g.re),
            num(g.im),
            num(g.norm_sqr()),
            num(n),
            num(scan.i1_ref),
            num(scan.i2[i]),
            num(scan.g2[i])
        );
    }
    out
}

pub fn sweep_csv(table: &SweepTable) -> String {
    let mut out = String::from(SWEEP_HEADER);
    out.push('\n');
    for row in &table.rows {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            num(row.value),
            opt(row.visibility),
            opt(row.quality),
            quoted(row.error.as_deref().unwrap_or(""))
        );
    }
    out
}

fn gp_string(s: &str) -> String {
    format!("'{}'", s.replace('\'', "''"))
}

/// Gnuplot script plotting normalized `|Γ|²` against `u2` from `csv`.
pub fn scan_gnuplot(csv: &str, title: &str) -> String {
    format!(
        "set datafile separator ','\n\
         set key off\n\
         set title {title}\n\
         set xlabel 'u2 (mm)'\n\
         set ylabel 'normalized |Gamma(u1_ref, u2)|^2'\n\
         set yrange [0:1.05]\n\
         plot {csv} using 1:5 skip 1 with lines lw 2\n",
        title = gp_string(title),
        csv = gp_string(csv)
    )
}

/// Gnuplot script plotting the sweep metrics against the swept value.
pub fn sweep_gnuplot(csv: &str, parameter: &str, metrics: SweepMetrics) -> String {
    let mut plots = Vec::new();
    if metrics.visibility() {
        plots.push(format!(
            "{} using 1:2 skip 1 with linespoints title 'V'",
            gp_string(csv)
        ));
    }
    if metrics.quality() {
        plots.push(format!(
            "{} using 1:3 skip 1 with linespoints title 'Q'",
            gp_string(csv)
        ));
    }
    format!(
        "set datafile separator ','\n\
         set logscale x\n\
         set xlabel {param}\n\
         set key top left\n\
         plot {plots}\n",
        param = gp_string(parameter),
        plots = plots.join(", \\\n     ")
    )
}

pub fn write_file(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}

/// `out.csv` with label `sigma_I=5` becomes `out_sigma_I-5.csv`. An empty
/// label returns the path unchanged.
pub fn labelled_path(path: &Path, label: &str) -> PathBuf {
    if label.is_empty() {
        return path.to_path_buf();
    }
    let clean: String = label
        .chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || c == '.' || c == '_' {
                c
            } else {
                '-'
            }
        })
        .collect();
    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    let name = match path.extension() {
        Some(ext) => format!("{stem}_{clean}.{}", ext.to_string_lossy()),
        None => format!("{stem}_{clean}"),
    };
    path.with_file_name(name)
}
