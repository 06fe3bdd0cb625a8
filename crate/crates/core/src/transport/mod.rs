//! Exact 1-Wasserstein distances between discrete measures and the
//! empirical convergence statistics built on them.
//!
//! ```text
//! M_{k,k+1} = max_t W1(mu_t^{N_k}, mu_t^{N_{k+1}})
//! C_{k+1}   = ln(M_{k+1,k+2} / M_{k,k+1}) / ln(N_{k+1} / N_k)
//! ```

mod brute;
mod report;
mod simplex;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use brute::{brute_force_wasserstein, MAX_CELLS};
pub use report::{convergence_rates, ConvergenceReport, PairDistances};

use crate::error::{Error, Result};
use crate::init::normalize_total_mass;
use crate::integrator::SnapshotSeries;
use crate::sph::ParticleState;
use crate::vector::Vec2;

/// Tolerance on the total weight of a measure.
pub const NORMALIZATION_TOL: f64 = 1e-12;

/// Probability measure `sum_i w_i delta_{p_i}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiscreteMeasure {
    points: Vec<Vec2>,
    weights: Vec<f64>,
}

impl DiscreteMeasure {
    pub fn new(points: Vec<Vec2>, weights: Vec<f64>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::domain("a measure needs at least one point"));
        }
        if points.len() != weights.len() {
            return Err(Error::domain(format!(
                "{} points but {} weights",
                points.len(),
                weights.len()
            )));
        }
        if let Some(i) = points.iter().position(|p| !p.is_finite()) {
            return Err(Error::domain(format!("point {i} is not finite")));
        }
        if let Some(i) = weights.iter().position(|w| !(*w >= 0.0) || !w.is_finite()) {
            return Err(Error::domain(format!("weight {i} is negative or not finite")));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > NORMALIZATION_TOL {
            return Err(Error::domain(format!("weights sum to {total}, not 1")));
        }
        Ok(DiscreteMeasure { points, weights })
    }

    /// Empirical measure of a particle system, masses normalized to one.
    pub fn from_state(state: &ParticleState) -> Result<Self> {
        let normalized = normalize_total_mass(state)?;
        DiscreteMeasure::new(normalized.positions, normalized.masses)
    }

    pub fn points(&self) -> &[Vec2] {
        &self.points
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Same weights, points shifted by `c`.
    pub fn translated(&self, c: Vec2) -> Self {
        DiscreteMeasure {
            points: self.points.iter().map(|&p| p + c).collect(),
            weights: self.weights.clone(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlanEntry {
    pub source: usize,
    pub target: usize,
    pub mass: f64,
}

/// Sparse optimal coupling, entries sorted by (source, target).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TransportPlan {
    pub entries: Vec<PlanEntry>,
    pub cost: f64,
}

impl TransportPlan {
    pub fn row_sums(&self, n: usize) -> Vec<f64> {
        let mut sums = vec![0.0; n];
        for e in &self.entries {
            sums[e.source] += e.mass;
        }
        sums
    }

    pub fn column_sums(&self, n: usize) -> Vec<f64> {
        let mut sums = vec![0.0; n];
        for e in &self.entries {
            sums[e.target] += e.mass;
        }
        sums
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct W1Solution {
    pub distance: f64,
    pub plan: TransportPlan,
    /// Dual potentials with `u_i + v_j <= |p_i - q_j|`, tight on the plan.
    pub u: Vec<f64>,
    pub v: Vec<f64>,
}

/// Exact `W_1` with Euclidean ground cost via network simplex.
pub fn wasserstein1(mu: &DiscreteMeasure, nu: &DiscreteMeasure) -> Result<W1Solution> {
    // Zero-weight atoms are left out of the network and given the
    // tightest feasible potentials afterwards.
    let rows: Vec<usize> = (0..mu.len()).filter(|&i| mu.weights[i] > 0.0).collect();
    let cols: Vec<usize> = (0..nu.len()).filter(|&j| nu.weights[j] > 0.0).collect();
    let n2 = cols.len();
    let cost: Vec<f64> = rows
        .par_iter()
        .flat_map_iter(|&i| cols.iter().map(move |&j| (mu.points[i] - nu.points[j]).norm()))
        .collect();
    let supply: Vec<f64> = rows.iter().map(|&i| mu.weights[i]).collect();
    let demand: Vec<f64> = cols.iter().map(|&j| nu.weights[j]).collect();
    let solution = simplex::NetworkSimplex::new(&supply, &demand, &cost).run()?;

    let entries: Vec<PlanEntry> = solution
        .flows
        .iter()
        .map(|&(r, c, mass)| PlanEntry {
            source: rows[r],
            target: cols[c],
            mass,
        })
        .collect();
    let distance: f64 = solution
        .flows
        .iter()
        .map(|&(r, c, mass)| mass * cost[r * n2 + c])
        .sum();

    let ground = |i: usize, j: usize| (mu.points[i] - nu.points[j]).norm();
    let mut u = vec![f64::NAN; mu.len()];
    let mut v = vec![f64::NAN; nu.len()];
    for (r, &i) in rows.iter().enumerate() {
        u[i] = -solution.pi[r];
    }
    for (c, &j) in cols.iter().enumerate() {
        v[j] = solution.pi[rows.len() + c];
    }
    for i in 0..mu.len() {
        if u[i].is_nan() {
            u[i] = cols
                .iter()
                .map(|&j| ground(i, j) - v[j])
                .fold(f64::INFINITY, f64::min);
        }
    }
    for j in 0..nu.len() {
        if v[j].is_nan() {
            v[j] = (0..mu.len())
                .map(|i| ground(i, j) - u[i])
                .fold(f64::INFINITY, f64::min);
        }
    }

    Ok(W1Solution {
        distance,
        plan: TransportPlan {
            entries,
            cost: distance,
        },
        u,
        v,
    })
}

/// Per-time distance between two series sampled on the same instants.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TimedDistance {
    pub time: f64,
    pub distance: f64,
}

/// `W_1` between the normalized empirical measures of `a` and `b` at each
/// shared snapshot time. Instants are solved concurrently.
pub fn pairwise_distance_series(a: &SnapshotSeries, b: &SnapshotSeries) -> Result<Vec<TimedDistance>> {
    let (ta, tb) = (a.times(), b.times());
    let aligned = ta.len() == tb.len()
        && ta
            .iter()
            .zip(&tb)
            .all(|(x, y)| (x - y).abs() <= 1e-12 * x.abs().max(y.abs()).max(1.0));
    if !aligned {
        return Err(Error::Transport(format!(
            "snapshot grids differ: {ta:?} vs {tb:?}"
        )));
    }
    a.snapshots
        .par_iter()
        .zip(&b.snapshots)
        .map(|(sa, sb)| {
            let mu = DiscreteMeasure::from_state(&sa.state)?;
            let nu = DiscreteMeasure::from_state(&sb.state)?;
            Ok(TimedDistance {
                time: sa.time,
                distance: wasserstein1(&mu, &nu)?.distance,
            })
        })
        .collect()
}
