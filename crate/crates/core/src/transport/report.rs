use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{pairwise_distance_series, TimedDistance};
use crate::error::{Error, Result};
use crate::integrator::SnapshotSeries;

/// `C_{k+1} = ln(M_{k+1,k+2} / M_{k,k+1}) / ln(N_{k+1} / N_k)` for each
/// consecutive pair of sup-distances. A rate is `None` when either
/// distance is zero.
pub fn convergence_rates(m: &[f64], n: &[usize]) -> Result<Vec<Option<f64>>> {
    if m.len() < 2 {
        return Err(Error::domain("rates need at least two distances"));
    }
    if n.len() != m.len() + 1 {
        return Err(Error::domain(format!(
            "{} distances need {} resolutions, got {}",
            m.len(),
            m.len() + 1,
            n.len()
        )));
    }
    if n.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::domain("resolutions must be strictly increasing"));
    }
    if let Some(bad) = m.iter().find(|x| !(**x >= 0.0) || !x.is_finite()) {
        return Err(Error::domain(format!("invalid distance {bad}")));
    }
    Ok(m.windows(2)
        .zip(n.windows(2))
        .map(|(mm, nn)| {
            if mm[0] > 0.0 && mm[1] > 0.0 {
                Some((mm[1] / mm[0]).ln() / (nn[1] as f64 / nn[0] as f64).ln())
            } else {
                None
            }
        })
        .collect())
}

/// Distances between the series at levels `k` and `k + 1`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairDistances {
    pub n_coarse: usize,
    pub n_fine: usize,
    pub per_time: Vec<TimedDistance>,
    /// `M_{k,k+1}`: maximum over the time grid, `t = 0` included.
    pub sup: f64,
}

/// Levels are numbered from 1. Pair `k` compares levels `k` and `k + 1`;
/// `rates[k - 2]` is `C_k` for `k >= 2`, plotted against `N_k`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceReport {
    pub dimension: u8,
    pub levels: Vec<usize>,
    pub pairs: Vec<PairDistances>,
    pub rates: Vec<Option<f64>>,
}

impl ConvergenceReport {
    /// Distances between consecutive series (solved concurrently) and the
    /// resulting rates. `series[k]` must hold `levels[k]` particles.
    pub fn from_series(dimension: u8, levels: &[usize], series: &[SnapshotSeries]) -> Result<Self> {
        if levels.len() != series.len() || levels.len() < 2 {
            return Err(Error::Transport(
                "need at least two series, one per resolution".into(),
            ));
        }
        let pairs: Vec<PairDistances> = series
            .par_windows(2)
            .zip(levels.par_windows(2))
            .map(|(s, n)| {
                let per_time = pairwise_distance_series(&s[0], &s[1])?;
                let sup = per_time.iter().fold(0.0f64, |m, d| m.max(d.distance));
                Ok(PairDistances {
                    n_coarse: n[0],
                    n_fine: n[1],
                    per_time,
                    sup,
                })
            })
            .collect::<Result<_>>()?;
        Self::from_pairs(dimension, levels.to_vec(), pairs)
    }

    pub fn from_pairs(dimension: u8, levels: Vec<usize>, pairs: Vec<PairDistances>) -> Result<Self> {
        if pairs.len() + 1 != levels.len() {
            return Err(Error::Transport("one pair per consecutive level expected".into()));
        }
        let sups: Vec<f64> = pairs.iter().map(|p| p.sup).collect();
        let rates = if sups.len() >= 2 {
            convergence_rates(&sups, &levels)?
        } else {
            Vec::new()
        };
        Ok(ConvergenceReport {
            dimension,
            levels,
            pairs,
            rates,
        })
    }

    /// `-1 / d`.
    pub fn target_rate(&self) -> f64 {
        -1.0 / self.dimension as f64
    }

    pub fn sups(&self) -> Vec<f64> {
        self.pairs.iter().map(|p| p.sup).collect()
    }

    /// `C_k` for pair `k` (1-based), if defined.
    pub fn rate_for_pair(&self, k: usize) -> Option<f64> {
        k.checked_sub(2).and_then(|r| self.rates.get(r).copied().flatten())
    }

    /// Columns `k,N_k,N_k+1,t,W`.
    pub fn write_distances_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["k", "N_k", "N_k+1", "t", "W"])?;
        for (k, pair) in self.pairs.iter().enumerate() {
            for d in &pair.per_time {
                w.write_record([
                    (k + 1).to_string(),
                    pair.n_coarse.to_string(),
                    pair.n_fine.to_string(),
                    format!("{:.16e}", d.time),
                    format!("{:.16e}", d.distance),
                ])?;
            }
        }
        w.flush()?;
        Ok(())
    }

    /// Columns `k,N_k,N_k+1,M,C`; `C` is empty on the first row and
    /// `undefined` where a distance vanishes.
    pub fn write_table_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["k", "N_k", "N_k+1", "M", "C"])?;
        for (k, pair) in self.pairs.iter().enumerate() {
            let c = match k {
                0 => String::new(),
                _ => match self.rates.get(k - 1).copied().flatten() {
                    Some(c) => format!("{c:.16e}"),
                    None => "undefined".into(),
                },
            };
            w.write_record([
                (k + 1).to_string(),
                pair.n_coarse.to_string(),
                pair.n_fine.to_string(),
                format!("{:.16e}", pair.sup),
                c,
            ])?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}
