//! One-parameter sweeps of the Bellman value.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::bellman::{bellman_value_with, BellmanConfig, Params};
use crate::error::{Error, Result};
use crate::extremizer::build_extremizer_with;
use crate::par::{map_slice, Execution};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SweepParam {
    #[serde(rename = "p")]
    P,
    #[serde(rename = "f")]
    F,
    #[serde(rename = "F")]
    BigF,
    #[serde(rename = "k")]
    K,
}

impl FromStr for SweepParam {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "p" => Ok(SweepParam::P),
            "f" => Ok(SweepParam::F),
            "F" => Ok(SweepParam::BigF),
            "k" => Ok(SweepParam::K),
            other => Err(Error::InvalidParams(format!(
                "unknown sweep parameter {other:?} (expected p, f, F or k)"
            ))),
        }
    }
}

impl fmt::Display for SweepParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SweepParam::P => "p",
            SweepParam::F => "f",
            SweepParam::BigF => "F",
            SweepParam::K => "k",
        })
    }
}

/// `steps` evenly spaced values of `param` from `start` to `stop`
/// (inclusive), the other three held at `base`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub param: SweepParam,
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
    /// `[p, f, F, k]`; the swept entry is ignored.
    pub base: [f64; 4],
}

impl SweepSpec {
    pub fn points(&self) -> Result<Vec<[f64; 4]>> {
        if self.steps == 0 {
            return Err(Error::InvalidParams("sweep needs at least one step".into()));
        }
        if !(self.start.is_finite() && self.stop.is_finite()) {
            return Err(Error::InvalidParams("sweep bounds must be finite".into()));
        }
        let idx = match self.param {
            SweepParam::P => 0,
            SweepParam::F => 1,
            SweepParam::BigF => 2,
            SweepParam::K => 3,
        };
        let span = self.stop - self.start;
        Ok((0..self.steps)
            .map(|i| {
                let mut pt = self.base;
                pt[idx] = if self.steps == 1 {
                    self.start
                } else if i + 1 == self.steps {
                    self.stop
                } else {
                    self.start + span * i as f64 / (self.steps - 1) as f64
                };
                pt
            })
            .collect())
    }
}

/// Everything reported for one feasible sweep point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepValues {
    pub value: f64,
    #[serde(rename = "B0")]
    pub b0: f64,
    #[serde(rename = "Z0")]
    pub z0: f64,
    pub a: f64,
    #[serde(rename = "A1")]
    pub a1: f64,
    pub c: f64,
    pub p0: f64,
    pub p1: f64,
    pub grid_consistent: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    /// `[p, f, F, k]` as requested.
    pub point: [f64; 4],
    /// `Err` carries the reason the point was skipped.
    pub outcome: std::result::Result<SweepValues, String>,
}

pub fn evaluate_point(point: [f64; 4], cfg: &BellmanConfig) -> Result<SweepValues> {
    let [p, f, big_f, k] = point;
    let params = Params::new(p, f, big_f, k)?;
    let report = bellman_value_with(&params, cfg)?;
    let g = build_extremizer_with(&params, &cfg.root)?;
    Ok(SweepValues {
        value: report.value,
        b0: report.b0,
        z0: report.z0,
        a: g.a,
        a1: g.a1,
        c: g.c,
        p0: report.interval.p0,
        p1: report.interval.p1,
        grid_consistent: report.grid_consistent(),
    })
}

/// Rows come back in grid order regardless of `exec`.
pub fn run_sweep(spec: &SweepSpec, cfg: &BellmanConfig, exec: Execution) -> Result<Vec<SweepRow>> {
    let points = spec.points()?;
    Ok(map_slice(&points, exec, |&point| SweepRow {
        point,
        outcome: evaluate_point(point, cfg).map_err(|e| e.to_string()),
    }))
}
