use serde::{Deserialize, Serialize};

use crate::error::{invalid_arg, Error, Result};
use crate::selection::BettiPreset;

/// One (σ, ρ) cell of an experiment.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub p: usize,
    pub k: usize,
    pub rho: f64,
    pub sigma: f64,
    pub n: usize,
    pub splits: [f64; 3],
    pub replications: usize,
    pub seed: u64,
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        if self.p == 0 || self.p > crate::terms::MAX_VARIABLES {
            return Err(invalid_arg(format!("p = {} is out of range", self.p)));
        }
        if self.k == 0 || self.k > self.p {
            return Err(invalid_arg(format!("order {} must lie in 1..={}", self.k, self.p)));
        }
        if !(0.0..1.0).contains(&self.rho) {
            return Err(invalid_arg(format!("rho = {} must lie in [0, 1)", self.rho)));
        }
        if !(self.sigma > 0.0) || !self.sigma.is_finite() {
            return Err(invalid_arg(format!("sigma = {} must be positive", self.sigma)));
        }
        if self.replications == 0 {
            return Err(invalid_arg("need at least one replication"));
        }
        crate::regression::split_counts(self.n, self.splits).map(|_| ())
    }
}

/// A method compared by the harness.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Method {
    Cc(BettiPreset),
    LarsOls,
    Lasso,
    LassoCv,
    Nng,
    Maic,
}

impl Method {
    pub fn all() -> Vec<Method> {
        let mut v: Vec<Method> = BettiPreset::ALL.into_iter().map(Method::Cc).collect();
        v.extend([Method::LarsOls, Method::Lasso, Method::LassoCv, Method::Nng, Method::Maic]);
        v
    }

    pub fn name(self) -> String {
        match self {
            Method::Cc(p) => format!("cc:{}", p.name()),
            Method::LarsOls => "lars-ols".into(),
            Method::Lasso => "lasso".into(),
            Method::LassoCv => "lasso-cv".into(),
            Method::Nng => "nng".into(),
            Method::Maic => "maic".into(),
        }
    }

    pub fn label(self) -> String {
        match self {
            Method::Cc(p) => format!("CC {}", p.label()),
            Method::LarsOls => "LARS-OLS".into(),
            Method::Lasso => "LASSO".into(),
            Method::LassoCv => "LASSO-CV".into(),
            Method::Nng => "NNG".into(),
            Method::Maic => "MAIC".into(),
        }
    }

    pub fn parse(s: &str) -> Result<Method> {
        let s = s.trim();
        if let Some(rest) = s.strip_prefix("cc:") {
            return BettiPreset::parse(rest)
                .map(Method::Cc)
                .ok_or_else(|| invalid_arg(format!("unknown Betti preset `{rest}`")));
        }
        match s {
            "lars-ols" => Ok(Method::LarsOls),
            "lasso" => Ok(Method::Lasso),
            "lasso-cv" => Ok(Method::LassoCv),
            "nng" => Ok(Method::Nng),
            "maic" => Ok(Method::Maic),
            _ => Err(invalid_arg(format!("unknown method `{s}`"))),
        }
    }
}

impl Serialize for Method {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.name())
    }
}

impl<'de> Deserialize<'de> for Method {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        Method::parse(&s).map_err(serde::de::Error::custom)
    }
}

/// A full experiment: one preset over a grid of (σ, ρ) cells.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub preset: String,
    pub order: usize,
    pub n: usize,
    pub splits: [f64; 3],
    pub sigmas: Vec<f64>,
    pub rhos: Vec<f64>,
    pub replications: usize,
    pub seed: u64,
    pub methods: Vec<Method>,
    pub cv_folds: usize,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            preset: "model2".into(),
            order: 3,
            n: 625,
            splits: [0.6, 0.2, 0.2],
            sigmas: vec![1.0, 3.0, 6.0],
            rhos: vec![0.0, 0.3],
            replications: 50,
            seed: 20_111_969,
            methods: Method::all(),
            cv_folds: 5,
        }
    }
}

fn parse_list<T: std::str::FromStr>(key: &str, value: &str) -> Result<Vec<T>> {
    value
        .split(',')
        .map(|v| {
            v.trim().parse().map_err(|_| invalid_arg(format!("`{key}`: cannot parse `{}`", v.trim())))
        })
        .collect()
}

fn parse_one<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
    value.parse().map_err(|_| invalid_arg(format!("`{key}`: cannot parse `{value}`")))
}

impl ExperimentConfig {
    /// Parses `key = value` lines; `#` starts a comment. Unset keys keep
    /// their defaults.
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = Self::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let at = |e: Error| Error::InvalidInput(format!("line {}: {e}", i + 1));
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::InvalidInput(format!("line {}: expected `key = value`", i + 1)))?;
            let (key, value) = (key.trim(), value.trim());
            match key {
                "preset" => cfg.preset = value.to_string(),
                "order" => cfg.order = parse_one(key, value).map_err(at)?,
                "n" => cfg.n = parse_one(key, value).map_err(at)?,
                "splits" => {
                    let v: Vec<f64> = parse_list(key, value).map_err(at)?;
                    cfg.splits = v
                        .try_into()
                        .map_err(|_| Error::InvalidInput(format!("line {}: `splits` needs three fractions", i + 1)))?;
                }
                "sigma" => cfg.sigmas = parse_list(key, value).map_err(at)?,
                "rho" => cfg.rhos = parse_list(key, value).map_err(at)?,
                "replications" => cfg.replications = parse_one(key, value).map_err(at)?,
                "seed" => cfg.seed = parse_one(key, value).map_err(at)?,
                "methods" => {
                    cfg.methods = value.split(',').map(Method::parse).collect::<Result<_>>().map_err(at)?
                }
                "cv_folds" => cfg.cv_folds = parse_one(key, value).map_err(at)?,
                _ => return Err(Error::InvalidInput(format!("line {}: unknown key `{key}`", i + 1))),
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.sigmas.is_empty() || self.rhos.is_empty() {
            return Err(invalid_arg("sigma and rho lists must be non-empty"));
        }
        if self.methods.is_empty() {
            return Err(invalid_arg("no methods requested"));
        }
        if self.cv_folds < 2 {
            return Err(invalid_arg("cv_folds must be at least 2"));
        }
        for cell in self.cells(8) {
            cell.validate()?;
        }
        Ok(())
    }

    /// Cells in row-major (ρ, σ) order for a preset on `p` variables.
    pub fn cells(&self, p: usize) -> Vec<SimConfig> {
        let mut out = Vec::new();
        for &rho in &self.rhos {
            for &sigma in &self.sigmas {
                out.push(SimConfig {
                    p,
                    k: self.order,
                    rho,
                    sigma,
                    n: self.n,
                    splits: self.splits,
                    replications: self.replications,
                    seed: self.seed,
                });
            }
        }
        out
    }
}
