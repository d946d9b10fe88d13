use std::path::PathBuf;

use crate::error::{Error, Result};

/// Parameters of one run. Unset fields fall back to a config file, then to defaults.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunConfig {
    pub suite: Option<String>,
    pub family: Option<String>,
    pub spec: Option<String>,
    pub n: Option<usize>,
    pub d: Option<usize>,
    pub m: Option<usize>,
    pub r: Option<usize>,
    pub alpha: Option<usize>,
    pub p: Option<u64>,
    pub seed: Option<u64>,
    pub trials: Option<usize>,
    pub tol: Option<f64>,
    pub cap: Option<usize>,
    pub nonholo: Option<bool>,
    pub input: Option<PathBuf>,
    pub out: Option<PathBuf>,
}

fn parse<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| Error::Config(format!("bad value {value:?} for {key}")))
}

impl RunConfig {
    /// Parses flat `key = value` lines; `#` starts a comment.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut c = RunConfig::default();
        for (no, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected key=value", no + 1)))?;
            let (key, value) = (key.trim().replace('-', "_"), value.trim());
            match key.as_str() {
                "suite" => c.suite = Some(value.into()),
                "family" => c.family = Some(value.into()),
                "spec" => c.spec = Some(value.into()),
                "n" => c.n = Some(parse(&key, value)?),
                "d" => c.d = Some(parse(&key, value)?),
                "m" => c.m = Some(parse(&key, value)?),
                "r" => c.r = Some(parse(&key, value)?),
                "alpha" => c.alpha = Some(parse(&key, value)?),
                "p" => c.p = Some(parse(&key, value)?),
                "seed" => c.seed = Some(parse(&key, value)?),
                "trials" => c.trials = Some(parse(&key, value)?),
                "tol" => c.tol = Some(parse(&key, value)?),
                "cap" => c.cap = Some(parse(&key, value)?),
                "nonholo" => c.nonholo = Some(parse(&key, value)?),
                "input" => c.input = Some(value.into()),
                "out" => c.out = Some(value.into()),
                other => return Err(Error::Config(format!("line {}: unknown key {other:?}", no + 1))),
            }
        }
        Ok(c)
    }

    pub fn from_file(path: &std::path::Path) -> Result<Self> {
        Self::from_text(&std::fs::read_to_string(path)?)
    }

    /// Fills fields unset here from `base`.
    pub fn or(self, base: RunConfig) -> RunConfig {
        RunConfig {
            suite: self.suite.or(base.suite),
            family: self.family.or(base.family),
            spec: self.spec.or(base.spec),
            n: self.n.or(base.n),
            d: self.d.or(base.d),
            m: self.m.or(base.m),
            r: self.r.or(base.r),
            alpha: self.alpha.or(base.alpha),
            p: self.p.or(base.p),
            seed: self.seed.or(base.seed),
            trials: self.trials.or(base.trials),
            tol: self.tol.or(base.tol),
            cap: self.cap.or(base.cap),
            nonholo: self.nonholo.or(base.nonholo),
            input: self.input.or(base.input),
            out: self.out.or(base.out),
        }
    }

    pub fn d_or(&self, default: usize) -> usize {
        self.d.unwrap_or(default)
    }

    pub fn m_or(&self, default: usize) -> usize {
        self.m.unwrap_or(default)
    }

    pub fn r_or(&self, default: usize) -> usize {
        self.r.unwrap_or(default)
    }

    pub fn alpha_or(&self, default: usize) -> usize {
        self.alpha.unwrap_or(default)
    }

    pub fn seed(&self) -> u64 {
        self.seed.unwrap_or(0)
    }

    pub fn trials_or(&self, default: usize) -> usize {
        self.trials.unwrap_or(default)
    }

    pub fn tol(&self) -> f64 {
        self.tol.unwrap_or(1e-9)
    }

    pub fn spec_name(&self) -> &str {
        self.spec.as_deref().unwrap_or("circular")
    }

    /// Rejects sizes no enumerator can handle.
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("d", self.d), ("m", self.m), ("r", self.r), ("alpha", self.alpha), ("n", self.n)] {
            if v == Some(0) {
                return Err(Error::Config(format!("{name} must be positive")));
            }
        }
        if let (Some(d), Some(m)) = (self.d, self.m) {
            if 2 * d * m > crate::partition::MAX_GROUND {
                return Err(Error::Config(format!("2dm = {} exceeds {}", 2 * d * m, crate::partition::MAX_GROUND)));
            }
        }
        if let Some(t) = self.tol {
            if t.is_nan() || t < 0.0 {
                return Err(Error::Config("tol must be nonnegative".into()));
            }
        }
        Ok(())
    }
}
