//! Serialization of sweep results.
//!
//! Floats are written with 17 significant digits (`{:.16e}`), which parses
//! back to the identical `f64`. Lines starting with `#` carry provenance.
//! Cells without a report (unstable or failed) leave the measure fields of the
//! CSV empty and appear as `NaN` in matrix files.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use super::CliError;
use crate::measures::{Bipartition, MeasureKind};
use crate::sweep::{CellStatus, SweepResult};

pub const CSV_COLUMNS: [&str; 11] = [
    "axis1",
    "axis2",
    "bipartition",
    "stable",
    "E_n",
    "steer_12",
    "steer_21",
    "discord_12",
    "discord_21",
    "nu_minus_pt",
    "residual",
];

const REPORT_KINDS: [MeasureKind; 6] = [
    MeasureKind::Entanglement,
    MeasureKind::Steer12,
    MeasureKind::Steer21,
    MeasureKind::Discord12,
    MeasureKind::Discord21,
    MeasureKind::NuMinusPt,
];

pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

fn io_err(path: &Path, e: impl std::fmt::Display) -> CliError {
    CliError::Io(format!("{}: {e}", path.display()))
}

/// Provenance comment lines shared by every output file.
pub fn provenance(res: &SweepResult) -> Vec<String> {
    let s = &res.spec;
    let b = &s.base;
    let axis = |a: &crate::sweep::Axis| {
        format!("{} min={} max={} steps={} scale={:?}", a.parameter, a.min, a.max, a.steps, a.scale)
    };
    let mut lines = vec![
        format!("mcom {}", res.code_version),
        format!("sweep: {}", s.name),
        format!("description: {}", s.description),
        format!("axis1: {}", axis(&s.axis1)),
        format!("axis2: {}", s.axis2.as_ref().map_or("none".to_string(), axis)),
        format!(
            "effective: delta_a_eff={} delta_c={} g_a_lin={} g_c={} kappa_a={} kappa_c={} gamma_m={} n_th={}",
            b.delta_a_eff, b.delta_c, b.g_a_lin, b.g_c, b.kappa_a, b.kappa_c, b.gamma_m, b.n_th
        ),
        format!(
            "temperature_k: {}",
            s.temperature.map_or("none".to_string(), |t| t.to_string())
        ),
        format!("omega_m_si: {}", s.omega_m_si),
        format!(
            "bipartitions: {}",
            s.bipartitions.iter().map(|b| b.to_string()).collect::<Vec<_>>().join(",")
        ),
        format!("measures: {:?}", s.measures),
        format!(
            "tolerances: lyapunov_residual={} stability_margin={} steady_state_tol={}",
            s.tolerances.lyapunov_residual, s.tolerances.stability_margin, s.tolerances.steady_state_tol
        ),
    ];
    if let Some(p) = &s.physical {
        lines.push(format!("physical: {p:?}"));
    }
    lines.push("frequencies in units of omega_m; missing values mark unstable or failed cells".into());
    lines
}

fn write_header(w: &mut impl Write, res: &SweepResult) -> io::Result<()> {
    for line in provenance(res) {
        writeln!(w, "# {line}")?;
    }
    Ok(())
}

pub fn csv_path(dir: &Path, res: &SweepResult) -> PathBuf {
    dir.join(format!("{}_{}.csv", res.spec.name, res.spec.headline()))
}

/// One row per (cell, bipartition), cells in row-major order.
pub fn write_csv(dir: &Path, res: &SweepResult) -> Result<PathBuf, CliError> {
    let path = csv_path(dir, res);
    let mut file = BufWriter::new(File::create(&path).map_err(|e| io_err(&path, e))?);
    write_header(&mut file, res).map_err(|e| io_err(&path, e))?;
    let mut w = csv::Writer::from_writer(file);
    w.write_record(CSV_COLUMNS).map_err(|e| io_err(&path, e))?;
    for cell in &res.cells {
        for (k, b) in res.spec.bipartitions.iter().enumerate() {
            let mut row = vec![
                fmt_f64(cell.axis1),
                cell.axis2.map(fmt_f64).unwrap_or_default(),
                b.to_string(),
                cell.stable.to_string(),
            ];
            match cell.report(k) {
                Some(r) => row.extend(REPORT_KINDS.iter().map(|m| fmt_f64(r.get(*m)))),
                None => row.extend(std::iter::repeat_n(String::new(), REPORT_KINDS.len())),
            }
            row.push(cell.residual.map(fmt_f64).unwrap_or_default());
            w.write_record(&row).map_err(|e| io_err(&path, e))?;
        }
    }
    w.flush().map_err(|e| io_err(&path, e))?;
    Ok(path)
}

/// A parsed CSV row. Measure values are `None` for empty fields.
#[derive(Debug, Clone, PartialEq)]
pub struct CsvRow {
    pub axis1: f64,
    pub axis2: Option<f64>,
    pub bipartition: Bipartition,
    pub stable: bool,
    pub values: [Option<f64>; 6],
    pub residual: Option<f64>,
}

pub fn read_csv(path: &Path) -> Result<Vec<CsvRow>, CliError> {
    let mut r = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_path(path)
        .map_err(|e| io_err(path, e))?;
    let headers = r.headers().map_err(|e| io_err(path, e))?.clone();
    if headers.iter().ne(CSV_COLUMNS.iter().copied()) {
        return Err(CliError::Config(format!("{}: unexpected columns", path.display())));
    }
    let bad = |what: &str| CliError::Config(format!("{}: bad {what}", path.display()));
    let opt = |s: &str| -> Result<Option<f64>, CliError> {
        if s.is_empty() {
            Ok(None)
        } else {
            s.parse().map(Some).map_err(|_| bad("number"))
        }
    };
    let mut rows = Vec::new();
    for rec in r.records() {
        let rec = rec.map_err(|e| io_err(path, e))?;
        let mut values = [None; 6];
        for (k, v) in values.iter_mut().enumerate() {
            *v = opt(&rec[4 + k])?;
        }
        rows.push(CsvRow {
            axis1: rec[0].parse().map_err(|_| bad("axis1"))?,
            axis2: opt(&rec[1])?,
            bipartition: rec[2].parse().map_err(|_| bad("bipartition"))?,
            stable: rec[3].parse().map_err(|_| bad("stable flag"))?,
            values,
            residual: opt(&rec[10])?,
        });
    }
    Ok(rows)
}

/// Writes one matrix per requested (measure, bipartition) plus axis sidecars.
/// Rows follow axis1, columns axis2 (a single column for 1-D sweeps).
pub fn write_matrices(dir: &Path, res: &SweepResult) -> Result<Vec<PathBuf>, CliError> {
    let name = &res.spec.name;
    let mut written = Vec::new();

    let axis1_path = dir.join(format!("{name}_axis1.txt"));
    write_vector(&axis1_path, res, &res.axis1_values)?;
    written.push(axis1_path);
    if let Some(v2) = &res.axis2_values {
        let p = dir.join(format!("{name}_axis2.txt"));
        write_vector(&p, res, v2)?;
        written.push(p);
    }

    for &b in &res.spec.bipartitions {
        for set in &res.spec.measures {
            for &m in set.kinds() {
                let path = dir.join(format!("{name}_{}_{}.txt", m.column(), b.suffix()));
                let field = res.field(b, m);
                let mut f = BufWriter::new(File::create(&path).map_err(|e| io_err(&path, e))?);
                let body = (|| -> io::Result<()> {
                    write_header(&mut f, res)?;
                    writeln!(f, "# {} for {}", m.label(b), b)?;
                    for row in &field {
                        let line: Vec<String> =
                            row.iter().map(|v| v.map_or_else(|| "NaN".to_string(), fmt_f64)).collect();
                        writeln!(f, "{}", line.join(" "))?;
                    }
                    f.flush()
                })();
                body.map_err(|e| io_err(&path, e))?;
                written.push(path);
            }
        }
    }
    Ok(written)
}

fn write_vector(path: &Path, res: &SweepResult, values: &[f64]) -> Result<(), CliError> {
    let mut f = BufWriter::new(File::create(path).map_err(|e| io_err(path, e))?);
    let body = (|| -> io::Result<()> {
        write_header(&mut f, res)?;
        for v in values {
            writeln!(f, "{}", fmt_f64(*v))?;
        }
        f.flush()
    })();
    body.map_err(|e| io_err(path, e))
}

/// Reads a matrix file back, `NaN` entries included.
pub fn read_matrix(path: &Path) -> Result<Vec<Vec<f64>>, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    text.lines()
        .filter(|l| !l.starts_with('#') && !l.trim().is_empty())
        .map(|l| {
            l.split_whitespace()
                .map(|t| t.parse::<f64>().map_err(|_| CliError::Config(format!("{}: bad number `{t}`", path.display()))))
                .collect()
        })
        .collect()
}

/// One line per bipartition: stable fraction and min/max of each measure.
pub fn summary_lines(res: &SweepResult) -> Vec<String> {
    let failed = res.cells.iter().filter(|c| matches!(c.status, CellStatus::Failed(_))).count();
    let mut out = Vec::new();
    for &b in &res.spec.bipartitions {
        let mut parts = vec![format!(
            "{} {}: stable {:.4} failed {}",
            res.spec.name,
            b,
            res.stable_fraction(),
            failed
        )];
        for set in &res.spec.measures {
            for &m in set.kinds() {
                let vals: Vec<f64> = res.field(b, m).into_iter().flatten().flatten().collect();
                let part = if vals.is_empty() {
                    format!("{} n/a", m.label(b))
                } else {
                    let lo = vals.iter().copied().fold(f64::INFINITY, f64::min);
                    let hi = vals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                    format!("{} [{lo:.6e}, {hi:.6e}]", m.label(b))
                };
                parts.push(part);
            }
        }
        out.push(parts.join(" | "));
    }
    out
}
