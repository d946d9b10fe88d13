//! Reproducible experiment runner behind the command-line tool.
pub mod config;
pub mod report;
pub mod suites;

use std::fmt::Write as _;
use std::io::Write;

use num_bigint::BigUint;

pub use config::RunConfig;
pub use report::{write_csv, ReportRow};
pub use suites::{run_suite, SUITES};

use crate::cumulants::{CumulantKind, CumulantSpec};
use crate::engine::family::{parse_text, Parsed};
use crate::engine::{
    holo_norm_2m, holo_rhs_bound, ml_norms, ml_operator_norms, nonholo_norm_2m, nonholo_rhs_bound, NonHoloFamily,
};
use crate::error::{Error, Result};
use crate::families::{
    catalan, chebyshev_pair_count, enumerate_interval_pairings, enumerate_ncdm_capped, enumerate_ncstar2,
    enumerate_ncstar_capped, fuss_catalan, ncdm_size_bound, NCDM_CAP, NCSTAR_CAP,
};
use crate::partition::{enumerate_nc_capped, Partition, DEFAULT_NC_CAP};
use crate::symmetrize::GridShape;

/// Process exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitStatus {
    Pass = 0,
    Failure = 1,
    Usage = 2,
}

pub const FAMILIES: [&str; 5] = ["nc", "ncstar", "ncstar2", "ncdm", "interval-pairings"];

/// Result of `enumerate`: the partitions and the closed-form comparison.
#[derive(Debug, Clone)]
pub struct Enumeration {
    pub partitions: Vec<Partition>,
    pub summary: String,
    pub consistent: bool,
}

fn need(v: Option<usize>, name: &str, family: &str) -> Result<usize> {
    v.ok_or_else(|| Error::Config(format!("family {family} needs --{name}")))
}

pub fn cmd_enumerate(cfg: &RunConfig) -> Result<Enumeration> {
    cfg.validate()?;
    let family = cfg.family.as_deref().unwrap_or("nc");
    let grid = || -> Result<GridShape> { GridShape::new(need(cfg.d, "d", family)?, need(cfg.m, "m", family)?) };
    let count_check = |parts: &[Partition], want: Option<(BigUint, &str)>, upper: Option<BigUint>| {
        let n = BigUint::from(parts.len());
        let mut summary = format!("count={n}");
        let mut ok = true;
        if let Some((w, what)) = want {
            ok &= n == w;
            write!(summary, " expected={w} ({what})").unwrap();
        }
        if let Some(u) = upper {
            ok &= n <= u;
            write!(summary, " bound={u}").unwrap();
        }
        (summary, ok)
    };
    let (partitions, (summary, consistent)) = match family {
        "nc" => {
            let n = need(cfg.n, "n", family)?;
            let parts = enumerate_nc_capped(n, cfg.cap.unwrap_or(DEFAULT_NC_CAP))?;
            let c = count_check(&parts, Some((catalan(n as u64), "Catalan")), None);
            (parts, c)
        }
        "ncstar" => {
            let parts = enumerate_ncstar_capped(grid()?, cfg.cap.unwrap_or(NCSTAR_CAP))?;
            let c = count_check(&parts, None, None);
            (parts, c)
        }
        "ncstar2" => {
            let g = grid()?;
            let parts = enumerate_ncstar2(g)?;
            let c = count_check(&parts, Some((fuss_catalan(g.d, g.m), "Fuss-Catalan")), None);
            (parts, c)
        }
        "ncdm" => {
            let g = grid()?;
            let parts = enumerate_ncdm_capped(g, cfg.cap.unwrap_or(NCDM_CAP))?;
            let c = count_check(&parts, None, Some(ncdm_size_bound(g.d, g.m)));
            (parts, c)
        }
        "interval-pairings" => {
            let g = grid()?;
            let parts = enumerate_interval_pairings(g)?;
            let c = count_check(&parts, Some((chebyshev_pair_count(g.d, g.m), "Chebyshev moment")), None);
            (parts, c)
        }
        other => {
            return Err(Error::Config(format!(
                "unknown family {other:?}; expected one of {}",
                FAMILIES.join(", ")
            )))
        }
    };
    Ok(Enumeration {
        partitions,
        summary,
        consistent,
    })
}

/// Writes the enumeration CSV (`index,partition`).
pub fn write_enumeration<W: Write>(out: W, e: &Enumeration) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let io = |e: csv::Error| Error::Io(e.to_string());
    w.write_record(["index", "partition"]).map_err(io)?;
    for (i, p) in e.partitions.iter().enumerate() {
        w.write_record([(i + 1).to_string(), p.to_string()]).map_err(io)?;
    }
    w.flush()?;
    Ok(())
}

pub fn cmd_verify(cfg: &RunConfig) -> Result<Vec<ReportRow>> {
    let suite = cfg
        .suite
        .as_deref()
        .ok_or_else(|| Error::Config(format!("--suite is required: {}", SUITES.join(", "))))?;
    run_suite(suite, cfg)
}

pub fn rows_status(rows: &[ReportRow]) -> ExitStatus {
    if rows.iter().all(|r| r.pass) {
        ExitStatus::Pass
    } else {
        ExitStatus::Failure
    }
}

/// Note printed with verification output.
pub const OPERATOR_NORM_NOTE: &str = "note: operator-norm (p = infinity) statements are not checked exactly; \
they are covered by even-norm bounds at growing m and by the Fock lower bound max_l ||M_l|| <= ||A||";

/// Values reported by `norm`.
#[derive(Debug, Clone, PartialEq)]
pub struct NormSummary {
    pub setting: &'static str,
    pub lhs: f64,
    pub ml_norms: Vec<f64>,
    pub ml_operator_norms: Vec<f64>,
    pub rhs: f64,
}

impl NormSummary {
    pub fn ratio(&self) -> f64 {
        if self.rhs == 0.0 {
            0.0
        } else {
            self.lhs / self.rhs
        }
    }

    pub fn render(&self, spec: &CumulantSpec, m: usize) -> String {
        let mut s = String::new();
        writeln!(s, "setting={} spec={} m={m}", self.setting, spec.name()).unwrap();
        writeln!(s, "lhs={:.16e}", self.lhs).unwrap();
        for (l, (x, y)) in self.ml_norms.iter().zip(&self.ml_operator_norms).enumerate() {
            writeln!(s, "M_{l}: schatten_2m={x:.16e} operator={y:.16e}").unwrap();
        }
        writeln!(s, "rhs={:.16e}", self.rhs).unwrap();
        writeln!(s, "ratio={:.16e}", self.ratio()).unwrap();
        s
    }
}

/// Norm report for a family given as text.
pub fn norm_of_text(text: &str, spec: &CumulantSpec, m: usize, nonholo: bool) -> Result<NormSummary> {
    let parsed = parse_text(text)?;
    let semicircular = matches!(spec.kind, CumulantKind::Semicircular);
    let (setting, lhs, source) = match &parsed {
        Parsed::Star(a) => ("non-holomorphic", nonholo_norm_2m(NonHoloFamily::Star(a), spec, m)?.norm, a.as_doubled()),
        Parsed::Plain(a) if semicircular || nonholo => {
            ("non-holomorphic", nonholo_norm_2m(NonHoloFamily::Plain(a), spec, m)?.norm, a)
        }
        Parsed::Plain(a) => ("holomorphic", holo_norm_2m(a, spec, m)?.norm, a),
    };
    let rhs = if setting == "holomorphic" {
        holo_rhs_bound(source, spec, m)?
    } else {
        nonholo_rhs_bound(source, spec, m)?
    };
    Ok(NormSummary {
        setting,
        lhs,
        ml_norms: ml_norms(source, m)?,
        ml_operator_norms: ml_operator_norms(source, 1e-12)?,
        rhs,
    })
}

pub fn cmd_norm(cfg: &RunConfig) -> Result<String> {
    cfg.validate()?;
    let path = cfg
        .input
        .as_ref()
        .ok_or_else(|| Error::Config("norm needs a family file".into()))?;
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    let spec = CumulantSpec::from_name(cfg.spec_name())?;
    let m = cfg.m_or(2);
    Ok(norm_of_text(&text, &spec, m, cfg.nonholo.unwrap_or(false))?.render(&spec, m))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(f: impl FnOnce(&mut RunConfig)) -> RunConfig {
        let mut c = RunConfig::default();
        f(&mut c);
        c
    }

    #[test]
    fn enumerate_examples() {
        let e = cmd_enumerate(&cfg(|c| {
            c.family = Some("nc".into());
            c.n = Some(4)
        }))
        .unwrap();
        assert_eq!(e.partitions.len(), 14);
        assert!(e.consistent);
        let e = cmd_enumerate(&cfg(|c| {
            c.family = Some("ncstar2".into());
            c.d = Some(2);
            c.m = Some(2)
        }))
        .unwrap();
        assert_eq!(e.partitions.len(), 3);
        assert!(cmd_enumerate(&cfg(|c| c.n = Some(0))).is_err());
        assert!(cmd_enumerate(&cfg(|c| c.family = Some("ncdm".into()))).is_err());
        assert!(cmd_enumerate(&cfg(|c| c.family = Some("trees".into()))).is_err());
    }

    #[test]
    fn norm_of_zero_family() {
        let s = norm_of_text("family d=2 r=2 alpha=1\n", &CumulantSpec::haar(), 2, false).unwrap();
        assert_eq!((s.lhs, s.rhs), (0.0, 0.0));
    }

    #[test]
    fn failing_rows_give_failure_status() {
        let good = ReportRow::exact("x", String::new(), 0.0, 0.0, true);
        let bad = ReportRow::exact("x", String::new(), 1.0, 0.0, false);
        assert_eq!(rows_status(std::slice::from_ref(&good)), ExitStatus::Pass);
        assert_eq!(rows_status(&[good, bad]), ExitStatus::Failure);
    }

    #[test]
    fn unknown_suite() {
        assert!(cmd_verify(&cfg(|c| c.suite = Some("nope".into()))).is_err());
        assert!(cmd_verify(&RunConfig::default()).is_err());
    }
}
