use std::path::Path;

use anyhow::{anyhow, bail, Result};
use nlmkdv::fixtures;
use nlmkdv::scattering::BoundaryData;
use nlmkdv::soliton::{Pole, PoleRecord, ReflectionlessData};
use serde::{Deserialize, Serialize};

/// `lo:hi:n`
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Span {
    pub lo: f64,
    pub hi: f64,
    pub n: usize,
}

impl Span {
    pub fn points(&self) -> Vec<f64> {
        if self.n == 1 {
            return vec![self.lo];
        }
        (0..self.n)
            .map(|i| self.lo + (self.hi - self.lo) * i as f64 / (self.n - 1) as f64)
            .collect()
    }
}

impl std::str::FromStr for Span {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            bail!("expected lo:hi:n, got {s:?}");
        }
        let lo: f64 = parts[0].trim().parse()?;
        let hi: f64 = parts[1].trim().parse()?;
        let n: usize = parts[2].trim().parse()?;
        if n == 0 || !(hi >= lo) {
            bail!("empty range {s:?}");
        }
        Ok(Span { lo, hi, n })
    }
}

/// Comma-separated floats.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FloatList(pub Vec<f64>);

impl std::str::FromStr for FloatList {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        let v = float_list(s)?;
        if v.is_empty() {
            bail!("empty list");
        }
        Ok(FloatList(v))
    }
}

pub fn float_list(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|v| v.trim().parse::<f64>().map_err(|e| anyhow!("{v:?}: {e}")))
        .collect()
}

/// `{poles: [{eta, c_hat}], q_minus?, sigma?, delta?}`; unknown fields are
/// ignored, so scattering-data files are accepted too.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PolesFile {
    pub poles: Vec<PoleRecord>,
    #[serde(default)]
    pub q_minus: Option<f64>,
    #[serde(default)]
    pub sigma: Option<i32>,
    #[serde(default)]
    pub delta: Option<i32>,
}

impl PolesFile {
    pub fn from_data(d: &ReflectionlessData) -> Self {
        PolesFile {
            poles: d.poles.iter().map(|&p| p.into()).collect(),
            q_minus: Some(d.boundary.q_minus),
            sigma: Some(d.boundary.sigma),
            delta: Some(d.boundary.delta),
        }
    }

    pub fn data(&self) -> Result<ReflectionlessData> {
        let b = BoundaryData::new(self.q_minus.unwrap_or(-1.0), self.sigma.unwrap_or(-1), self.delta.unwrap_or(1))?;
        Ok(ReflectionlessData::new(self.poles.iter().map(|&p| Pole::from(p)).collect(), b)?)
    }
}

pub fn load_poles(path: Option<&Path>, default: fn() -> nlmkdv::Result<ReflectionlessData>) -> Result<ReflectionlessData> {
    match path {
        Some(p) => {
            let f: PolesFile = serde_json::from_str(&crate::output::read(p)?).map_err(|e| anyhow!("{}: {e}", p.display()))?;
            f.data()
        }
        None => Ok(default()?),
    }
}

pub fn default_residual() -> nlmkdv::Result<ReflectionlessData> {
    fixtures::residual_solution(1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spans() {
        let s: Span = "-3:3:4".parse().unwrap();
        assert_eq!(s.points(), vec![-3.0, -1.0, 1.0, 3.0]);
        assert!("1:0:3".parse::<Span>().is_err());
        assert!("1:2".parse::<Span>().is_err());
        assert_eq!(float_list("100, 1e3,10000").unwrap(), vec![100.0, 1000.0, 10000.0]);
    }
}
