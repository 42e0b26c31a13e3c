//! Fixed-schema CSV output and the matching reader.
//!
//! Every file starts with `#` provenance lines, then one header line, then
//! data rows. Fields never contain commas, so no quoting is needed. Printed
//! values are rounded (errors to 3 significant digits, `delta` and `cfl` to
//! 6); the `_raw` columns carry the shortest exact representation.

use std::fmt::Write as _;

use rkdg_core::experiments::{AccuracyRow, RowStatus};
use rkdg_core::Variant;

use crate::config::RunConfig;
use crate::error::{CliError, Result};

pub const ACCURACY_HEADER: &str = "scheme,variant,dim,N,dofs,l2_error,eoc,l2_error_raw,eoc_raw,status";
pub const REGULARITY_HEADER: &str =
    "scheme,variant,dim,N,dofs,l2_error,eoc,l2_error_raw,eoc_raw,status,flat,T";
pub const STABILITY_HEADER: &str = "scheme,variant,dim,N,m,cfl,delta,delta_raw,status";
pub const CFL_HEADER: &str = "scheme,variant,r,k,cfl,cfl_raw,weak,status";
pub const PROP_HEADER: &str = "check,dim,k,N,samples,max_residual,tolerance,status";

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// `x` with `digits` significant digits in scientific notation.
pub fn sig(x: f64, digits: usize) -> String {
    format!("{:.*e}", digits.saturating_sub(1), x)
}

/// Shortest representation that parses back to the same `f64`.
pub fn raw(x: f64) -> String {
    format!("{x:e}")
}

fn clean(s: &str) -> String {
    s.replace([',', '\n', '\r'], ";")
}

pub fn provenance(cfg: &RunConfig) -> String {
    format!("# config: {}\n# seed: {}\n# version: {VERSION}\n", cfg.echo(), cfg.seed)
}

fn status_text(s: &RowStatus) -> String {
    clean(&s.describe())
}

fn accuracy_fields(row: &AccuracyRow) -> String {
    let ok = row.status.is_ok();
    let err = if ok { sig(row.l2_error, 3) } else { String::new() };
    let err_raw = if ok { raw(row.l2_error) } else { String::new() };
    let eoc = row.eoc.map(|e| format!("{e:.2}")).unwrap_or_default();
    let eoc_raw = row.eoc.map(raw).unwrap_or_default();
    format!(
        "{},{},{},{},{},{err},{eoc},{err_raw},{eoc_raw},{}",
        row.scheme,
        row.variant,
        row.dim,
        row.n,
        row.dofs,
        status_text(&row.status)
    )
}

pub fn write_accuracy(cfg: &RunConfig, rows: &[AccuracyRow]) -> String {
    let mut out = provenance(cfg);
    out.push_str(ACCURACY_HEADER);
    out.push('\n');
    for row in rows {
        out.push_str(&accuracy_fields(row));
        out.push('\n');
    }
    out
}

/// A limited-regularity row with its data parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct RegularityRow {
    pub row: AccuracyRow,
    pub flat: u32,
    pub t_final: f64,
}

pub fn write_regularity(cfg: &RunConfig, rows: &[RegularityRow]) -> String {
    let mut out = provenance(cfg);
    out.push_str(REGULARITY_HEADER);
    out.push('\n');
    for r in rows {
        let _ = writeln!(out, "{},{},{}", accuracy_fields(&r.row), r.flat, r.t_final);
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct StabilityRow {
    pub scheme: String,
    pub variant: Variant,
    pub dim: usize,
    pub n: usize,
    pub m: usize,
    pub cfl: f64,
    /// `None` when the point failed
    pub delta: Option<f64>,
    pub status: String,
}

pub fn write_stability(cfg: &RunConfig, rows: &[StabilityRow]) -> String {
    let mut out = provenance(cfg);
    out.push_str(STABILITY_HEADER);
    out.push('\n');
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            r.scheme,
            r.variant,
            r.dim,
            r.n,
            r.m,
            sig(r.cfl, 6),
            r.delta.map(|d| sig(d, 6)).unwrap_or_default(),
            r.delta.map(raw).unwrap_or_default(),
            clean(&r.status)
        );
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct CflRow {
    pub scheme: String,
    pub variant: Variant,
    pub r: usize,
    pub k: usize,
    pub cfl: Option<f64>,
    pub weak: bool,
    pub status: String,
}

pub fn write_cfl(cfg: &RunConfig, rows: &[CflRow]) -> String {
    let mut out = provenance(cfg);
    out.push_str(CFL_HEADER);
    out.push('\n');
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            r.scheme,
            r.variant,
            r.r,
            r.k,
            r.cfl.map(|c| sig(c, 6)).unwrap_or_default(),
            r.cfl.map(raw).unwrap_or_default(),
            r.weak,
            clean(&r.status)
        );
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct PropRow {
    pub check: String,
    pub dim: usize,
    pub k: usize,
    pub n: usize,
    pub samples: usize,
    pub max_residual: f64,
    pub tolerance: f64,
}

impl PropRow {
    pub fn passed(&self) -> bool {
        self.max_residual <= self.tolerance
    }
}

pub fn write_props(cfg: &RunConfig, rows: &[PropRow]) -> String {
    let mut out = provenance(cfg);
    out.push_str(PROP_HEADER);
    out.push('\n');
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            r.check,
            r.dim,
            r.k,
            r.n,
            r.samples,
            sig(r.max_residual, 3),
            sig(r.tolerance, 1),
            if r.passed() { "pass" } else { "fail" }
        );
    }
    out
}

// ------------------------------------------------------------------ reader

/// A parsed CSV file.
#[derive(Debug, Clone, PartialEq)]
pub struct CsvTable {
    /// `# key: value` lines before the header
    pub provenance: Vec<(String, String)>,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

pub fn parse_csv(text: &str) -> Result<CsvTable> {
    let mut provenance = Vec::new();
    let mut lines = text.lines().enumerate();
    let header = loop {
        match lines.next() {
            None => return Err(CliError::Csv("no header line".into())),
            Some((_, l)) if l.starts_with('#') => {
                let body = l.trim_start_matches('#').trim();
                let (k, v) = body.split_once(':').unwrap_or((body, ""));
                provenance.push((k.trim().to_string(), v.trim().to_string()));
            }
            Some((_, l)) => break l.split(',').map(str::to_string).collect::<Vec<_>>(),
        }
    };
    let mut rows = Vec::new();
    for (i, l) in lines {
        if l.is_empty() {
            continue;
        }
        let fields: Vec<String> = l.split(',').map(str::to_string).collect();
        if fields.len() != header.len() {
            return Err(CliError::Csv(format!(
                "line {}: {} fields, header has {}",
                i + 1,
                fields.len(),
                header.len()
            )));
        }
        rows.push(fields);
    }
    Ok(CsvTable {
        provenance,
        header,
        rows,
    })
}

impl CsvTable {
    pub fn column(&self, name: &str) -> Result<usize> {
        self.header
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| CliError::Csv(format!("missing column `{name}`")))
    }

    pub fn provenance_value(&self, key: &str) -> Option<&str> {
        self.provenance.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    fn get<'a>(&self, row: &'a [String], name: &str) -> Result<&'a str> {
        Ok(&row[self.column(name)?])
    }

    pub fn accuracy_records(&self) -> Result<Vec<AccuracyRecord>> {
        self.rows
            .iter()
            .map(|row| {
                Ok(AccuracyRecord {
                    scheme: self.get(row, "scheme")?.to_string(),
                    variant: variant(self.get(row, "variant")?)?,
                    dim: int(self.get(row, "dim")?)?,
                    n: int(self.get(row, "N")?)?,
                    dofs: int(self.get(row, "dofs")?)?,
                    l2_error: opt_float(self.get(row, "l2_error")?)?.unwrap_or(f64::NAN),
                    l2_error_raw: opt_float(self.get(row, "l2_error_raw")?)?.unwrap_or(f64::NAN),
                    eoc: opt_float(self.get(row, "eoc")?)?,
                    eoc_raw: opt_float(self.get(row, "eoc_raw")?)?,
                    status: self.get(row, "status")?.to_string(),
                })
            })
            .collect()
    }

    pub fn stability_records(&self) -> Result<Vec<StabilityRecord>> {
        self.rows
            .iter()
            .map(|row| {
                Ok(StabilityRecord {
                    scheme: self.get(row, "scheme")?.to_string(),
                    variant: variant(self.get(row, "variant")?)?,
                    dim: int(self.get(row, "dim")?)?,
                    n: int(self.get(row, "N")?)?,
                    m: int(self.get(row, "m")?)?,
                    cfl: opt_float(self.get(row, "cfl")?)?.unwrap_or(f64::NAN),
                    delta: opt_float(self.get(row, "delta")?)?,
                    delta_raw: opt_float(self.get(row, "delta_raw")?)?,
                    status: self.get(row, "status")?.to_string(),
                })
            })
            .collect()
    }

    pub fn cfl_records(&self) -> Result<Vec<CflRecord>> {
        self.rows
            .iter()
            .map(|row| {
                Ok(CflRecord {
                    scheme: self.get(row, "scheme")?.to_string(),
                    variant: variant(self.get(row, "variant")?)?,
                    r: int(self.get(row, "r")?)?,
                    k: int(self.get(row, "k")?)?,
                    cfl: opt_float(self.get(row, "cfl")?)?,
                    cfl_raw: opt_float(self.get(row, "cfl_raw")?)?,
                    weak: match self.get(row, "weak")? {
                        "true" => true,
                        "false" => false,
                        s => return Err(CliError::Csv(format!("bad boolean `{s}`"))),
                    },
                    status: self.get(row, "status")?.to_string(),
                })
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AccuracyRecord {
    pub scheme: String,
    pub variant: Variant,
    pub dim: usize,
    pub n: usize,
    pub dofs: usize,
    /// NaN for flagged rows
    pub l2_error: f64,
    pub l2_error_raw: f64,
    pub eoc: Option<f64>,
    pub eoc_raw: Option<f64>,
    pub status: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StabilityRecord {
    pub scheme: String,
    pub variant: Variant,
    pub dim: usize,
    pub n: usize,
    pub m: usize,
    pub cfl: f64,
    pub delta: Option<f64>,
    pub delta_raw: Option<f64>,
    pub status: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CflRecord {
    pub scheme: String,
    pub variant: Variant,
    pub r: usize,
    pub k: usize,
    pub cfl: Option<f64>,
    pub cfl_raw: Option<f64>,
    pub weak: bool,
    pub status: String,
}

fn variant(s: &str) -> Result<Variant> {
    s.parse().map_err(|_| CliError::Csv(format!("bad variant `{s}`")))
}

fn int(s: &str) -> Result<usize> {
    s.parse().map_err(|_| CliError::Csv(format!("bad integer `{s}`")))
}

fn opt_float(s: &str) -> Result<Option<f64>> {
    if s.is_empty() {
        return Ok(None);
    }
    s.parse().map(Some).map_err(|_| CliError::Csv(format!("bad number `{s}`")))
}
