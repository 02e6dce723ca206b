//! Plot-ready output files: delimited text with '#'-prefixed headers, an
//! optional little-endian binary grid format, and a deterministic run
//! manifest (no timestamps — identical inputs give byte-identical files).

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use ndarray::Array2;
use sha2::{Digest, Sha256};

use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Text,
    Binary,
}

/// SHA-256 of the scenario file content, hex-encoded; stamped into every
/// output header so files can be traced back to their inputs.
pub fn scenario_hash(source_text: &str) -> String {
    let mut hasher = Sha256::new();
    hasher.update(source_text.as_bytes());
    format!("{:x}", hasher.finalize())
}

fn render_header(header: &[(String, String)]) -> String {
    let mut out = String::new();
    for (k, v) in header {
        writeln!(out, "# {k} = {v}").unwrap();
    }
    out
}

/// Multi-column curve file: header lines, then one '#' column-name line,
/// then whitespace-delimited rows.
pub fn write_curve(
    path: &Path,
    header: &[(String, String)],
    columns: &[(&str, &[f64])],
) -> Result<()> {
    assert!(!columns.is_empty());
    let rows = columns[0].1.len();
    assert!(columns.iter().all(|(_, c)| c.len() == rows), "column length mismatch");
    let mut out = render_header(header);
    writeln!(out, "# {}", columns.iter().map(|(n, _)| *n).collect::<Vec<_>>().join(" ")).unwrap();
    for i in 0..rows {
        let row: Vec<String> = columns.iter().map(|(_, c)| format!("{:.12e}", c[i])).collect();
        writeln!(out, "{}", row.join(" ")).unwrap();
    }
    fs::write(path, out)?;
    Ok(())
}

/// 2-D grid, Omega_s-major: row i holds the values for detuning axis[i]
/// of the signal across all idler detunings.
pub fn write_grid(
    path: &Path,
    header: &[(String, String)],
    axis: &[f64],
    grid: &Array2<f64>,
    format: OutputFormat,
) -> Result<()> {
    assert_eq!(grid.shape(), [axis.len(), axis.len()]);
    match format {
        OutputFormat::Text => {
            let mut out = render_header(header);
            writeln!(out, "# rows: Omega_s (axis below); columns: Omega_i (same axis)").unwrap();
            writeln!(
                out,
                "# axis: {}",
                axis.iter().map(|v| format!("{v:.12e}")).collect::<Vec<_>>().join(" ")
            )
            .unwrap();
            for row in grid.rows() {
                let line: Vec<String> = row.iter().map(|v| format!("{v:.12e}")).collect();
                writeln!(out, "{}", line.join(" ")).unwrap();
            }
            fs::write(path, out)?;
        }
        OutputFormat::Binary => {
            // header as text, then a blank line, then n as u64 LE, the
            // axis as f64 LE, and the grid row-major as f64 LE
            let mut bytes = render_header(header).into_bytes();
            bytes.push(b'\n');
            bytes.extend_from_slice(&(axis.len() as u64).to_le_bytes());
            for v in axis {
                bytes.extend_from_slice(&v.to_le_bytes());
            }
            for v in grid.iter() {
                bytes.extend_from_slice(&v.to_le_bytes());
            }
            fs::write(path, bytes)?;
        }
    }
    Ok(())
}

/// Run manifest: '#'-headed key = value lines plus the verbatim scenario
/// text (prefixed) so a run can be reproduced from the manifest alone.
pub fn write_manifest(
    path: &Path,
    entries: &[(String, String)],
    scenario_text: &str,
) -> Result<()> {
    let mut out = String::new();
    writeln!(out, "# {} run manifest (deterministic)", env!("CARGO_PKG_NAME")).unwrap();
    writeln!(out, "version = {}", env!("CARGO_PKG_VERSION")).unwrap();
    for (k, v) in entries {
        writeln!(out, "{k} = {v}").unwrap();
    }
    writeln!(out, "scenario.begin =").unwrap();
    for line in scenario_text.lines() {
        writeln!(out, "|{line}").unwrap();
    }
    writeln!(out, "scenario.end =").unwrap();
    fs::write(path, out)?;
    Ok(())
}

/// Extract the verbatim scenario text embedded in a manifest, for
/// rerunning a recorded configuration.
pub fn scenario_from_manifest(manifest: &str) -> Option<String> {
    let mut lines = manifest.lines();
    lines.find(|l| l.trim() == "scenario.begin =")?;
    let mut out = String::new();
    for line in lines {
        if line.trim() == "scenario.end =" {
            return Some(out);
        }
        out.push_str(line.strip_prefix('|')?);
        out.push('\n');
    }
    None
}
