use std::io::Write;

use crate::error::{Error, Result};

/// One checked quantity.
#[derive(Debug, Clone, PartialEq)]
pub struct ReportRow {
    pub id: String,
    pub params: String,
    pub value: f64,
    pub bound: f64,
    pub pass: bool,
    pub residual: f64,
}

const ABS_FLOOR: f64 = 1e-12;

impl ReportRow {
    fn new(id: &str, params: String, value: f64, bound: f64, residual: f64, tol: f64) -> Self {
        ReportRow {
            id: id.into(),
            params,
            value,
            bound,
            pass: residual <= tol,
            residual,
        }
    }

    /// `value ≈ expected` up to relative `tol` with an absolute floor.
    pub fn equality(id: &str, params: String, value: f64, expected: f64, tol: f64) -> Self {
        let diff = ((value - expected).abs() - ABS_FLOOR).max(0.0);
        Self::new(id, params, value, expected, diff / expected.abs().max(ABS_FLOOR), tol)
    }

    /// `value ≤ bound` up to relative `tol` with an absolute floor.
    pub fn inequality(id: &str, params: String, value: f64, bound: f64, tol: f64) -> Self {
        let excess = (value - bound - ABS_FLOOR).max(0.0);
        Self::new(id, params, value, bound, excess / bound.abs().max(ABS_FLOOR), tol)
    }

    /// `value ≤ bound + abs_tol`.
    pub fn inequality_abs(id: &str, params: String, value: f64, bound: f64, abs_tol: f64) -> Self {
        Self::new(id, params, value, bound, (value - bound).max(0.0), abs_tol)
    }

    /// Exact check; the residual is `0` or `1`.
    pub fn exact(id: &str, params: String, value: f64, bound: f64, ok: bool) -> Self {
        Self::new(id, params, value, bound, if ok { 0.0 } else { 1.0 }, 0.0)
    }

    /// Integer inequality `value ≤ bound`.
    pub fn at_most(id: &str, params: String, value: f64, bound: f64) -> Self {
        Self::exact(id, params, value, bound, value <= bound)
    }
}

/// Keeps the row with the largest residual among many checks of one kind.
#[derive(Debug, Default)]
pub struct Worst {
    row: Option<ReportRow>,
    count: usize,
}

impl Worst {
    pub fn push(&mut self, row: ReportRow) {
        self.count += 1;
        let ratio = |r: &ReportRow| if r.bound != 0.0 { r.value / r.bound } else { r.value };
        let replace = match &self.row {
            None => true,
            Some(r) => row.residual > r.residual || (row.residual == r.residual && ratio(&row) > ratio(r)),
        };
        if replace {
            self.row = Some(row);
        }
    }

    /// The worst row, its parameters extended with the number of checks.
    pub fn finish(self) -> Option<ReportRow> {
        let count = self.count;
        self.row.map(|mut r| {
            r.params = format!("{} checks={count}", r.params);
            r
        })
    }
}

pub const CSV_HEADER: [&str; 6] = ["id", "params", "value", "bound", "pass", "residual"];

fn float(x: f64) -> String {
    format!("{x:.16e}")
}

/// Writes rows sorted by `(id, params)`.
pub fn write_csv<W: Write>(out: W, rows: &[ReportRow]) -> Result<()> {
    let mut sorted: Vec<&ReportRow> = rows.iter().collect();
    sorted.sort_by(|a, b| (&a.id, &a.params).cmp(&(&b.id, &b.params)));
    let mut w = csv::Writer::from_writer(out);
    let io = |e: csv::Error| Error::Io(e.to_string());
    w.write_record(CSV_HEADER).map_err(io)?;
    for r in sorted {
        w.write_record([
            r.id.clone(),
            r.params.clone(),
            float(r.value),
            float(r.bound),
            (if r.pass { "PASS" } else { "FAIL" }).to_string(),
            float(r.residual),
        ])
        .map_err(io)?;
    }
    w.flush()?;
    Ok(())
}
