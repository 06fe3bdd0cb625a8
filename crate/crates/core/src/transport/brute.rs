//! Exhaustive test oracle for small transport problems.
//!
//! Two independent strategies, neither sharing code with the simplex:
//!
//! * weights that are all multiples of `1/D` for a small `D`: split every
//!   atom into unit copies and minimize over all `D!` assignments (an
//!   optimal coupling of two uniform `D`-point measures is a permutation);
//! * otherwise: enumerate every spanning tree of the complete bipartite
//!   graph, solve the tree flows, keep the feasible ones. Each vertex of
//!   the transportation polytope has a spanning-tree basis.

use super::DiscreteMeasure;
use crate::error::{Error, Result};

/// Guard on `n1 * n2`.
pub const MAX_CELLS: usize = 64;
const MAX_DENOMINATOR: usize = 9;
const MAX_TREES: f64 = 2.0e6;

/// Exact `W_1` by exhaustive search; intended for test instances only.
pub fn brute_force_wasserstein(mu: &DiscreteMeasure, nu: &DiscreteMeasure) -> Result<f64> {
    let (n1, n2) = (mu.len(), nu.len());
    if n1 * n2 > MAX_CELLS {
        return Err(Error::Transport(format!(
            "brute force limited to {MAX_CELLS} cells, got {n1} x {n2}"
        )));
    }
    let cost: Vec<f64> = mu
        .points()
        .iter()
        .flat_map(|&p| nu.points().iter().map(move |&q| (p - q).norm()))
        .collect();

    if let Some(d) = common_denominator(mu.weights(), nu.weights()) {
        return Ok(assignment_minimum(mu.weights(), nu.weights(), &cost, d));
    }
    // Cayley count of spanning trees of K_{n1,n2}.
    let trees = (n1 as f64).powi(n2 as i32 - 1) * (n2 as f64).powi(n1 as i32 - 1);
    if trees > MAX_TREES {
        return Err(Error::Transport(format!(
            "{n1} x {n2} instance with irrational weights is too large to enumerate"
        )));
    }
    Ok(tree_enumeration(mu.weights(), nu.weights(), &cost))
}

fn common_denominator(a: &[f64], b: &[f64]) -> Option<usize> {
    (1..=MAX_DENOMINATOR).find(|&d| {
        a.iter()
            .chain(b)
            .all(|&w| (w * d as f64 - (w * d as f64).round()).abs() < 1e-9)
    })
}

fn assignment_minimum(a: &[f64], b: &[f64], cost: &[f64], d: usize) -> f64 {
    let expand = |w: &[f64]| -> Vec<usize> {
        w.iter()
            .enumerate()
            .flat_map(|(i, &w)| std::iter::repeat_n(i, (w * d as f64).round() as usize))
            .collect()
    };
    let rows = expand(a);
    let cols = expand(b);
    debug_assert_eq!(rows.len(), d);
    debug_assert_eq!(cols.len(), d);
    let n2 = b.len();

    // Heap's algorithm over column orderings.
    let mut perm: Vec<usize> = (0..d).collect();
    let total = |perm: &[usize]| -> f64 {
        perm.iter()
            .enumerate()
            .map(|(k, &p)| cost[rows[k] * n2 + cols[p]])
            .sum::<f64>()
            / d as f64
    };
    let mut best = total(&perm);
    let mut c = vec![0usize; d];
    let mut k = 0;
    while k < d {
        if c[k] < k {
            if k % 2 == 0 {
                perm.swap(0, k);
            } else {
                perm.swap(c[k], k);
            }
            best = best.min(total(&perm));
            c[k] += 1;
            k = 0;
        } else {
            c[k] = 0;
            k += 1;
        }
    }
    best
}

fn tree_enumeration(a: &[f64], b: &[f64], cost: &[f64]) -> f64 {
    let (n1, n2) = (a.len(), b.len());
    let mut search = TreeSearch {
        n1,
        n2,
        a,
        b,
        cost,
        uf: (0..n1 + n2).collect(),
        chosen: Vec::with_capacity(n1 + n2 - 1),
        best: f64::INFINITY,
    };
    search.extend(0);
    search.best
}

struct TreeSearch<'a> {
    n1: usize,
    n2: usize,
    a: &'a [f64],
    b: &'a [f64],
    cost: &'a [f64],
    /// Union-find parents without path compression, so undo is a reset.
    uf: Vec<usize>,
    chosen: Vec<usize>,
    best: f64,
}

impl TreeSearch<'_> {
    fn find(&self, mut u: usize) -> usize {
        while self.uf[u] != u {
            u = self.uf[u];
        }
        u
    }

    fn extend(&mut self, from: usize) {
        let need = self.n1 + self.n2 - 1;
        if self.chosen.len() == need {
            if let Some(c) = self.evaluate() {
                self.best = self.best.min(c);
            }
            return;
        }
        let cells = self.n1 * self.n2;
        for e in from..cells {
            if cells - e < need - self.chosen.len() {
                break;
            }
            let (ru, rv) = (self.find(e / self.n2), self.find(self.n1 + e % self.n2));
            if ru == rv {
                continue;
            }
            self.uf[ru] = rv;
            self.chosen.push(e);
            self.extend(e + 1);
            self.chosen.pop();
            self.uf[ru] = ru;
        }
    }

    /// Flows on the chosen tree by leaf elimination; `None` if infeasible.
    fn evaluate(&self) -> Option<f64> {
        let (n1, n2) = (self.n1, self.n2);
        let mut rest: Vec<f64> = self.a.iter().chain(self.b).copied().collect();
        let mut degree = vec![0usize; n1 + n2];
        for &e in &self.chosen {
            degree[e / n2] += 1;
            degree[n1 + e % n2] += 1;
        }
        let mut alive = vec![true; self.chosen.len()];
        let mut total = 0.0;
        for _ in 0..self.chosen.len() {
            let (k, leaf) = self
                .chosen
                .iter()
                .enumerate()
                .filter(|&(k, _)| alive[k])
                .find_map(|(k, &e)| {
                    let (r, c) = (e / n2, n1 + e % n2);
                    if degree[r] == 1 {
                        Some((k, r))
                    } else if degree[c] == 1 {
                        Some((k, c))
                    } else {
                        None
                    }
                })?;
            let e = self.chosen[k];
            let (r, c) = (e / n2, n1 + e % n2);
            let other = if leaf == r { c } else { r };
            let x = rest[leaf];
            if x < -1e-12 {
                return None;
            }
            total += x * self.cost[e];
            rest[other] -= x;
            rest[leaf] = 0.0;
            degree[r] -= 1;
            degree[c] -= 1;
            alive[k] = false;
        }
        Some(total)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vector::Vec2;

    fn measure(points: &[(f64, f64)], weights: &[f64]) -> DiscreteMeasure {
        DiscreteMeasure::new(
            points.iter().map(|&(x, y)| Vec2::new(x, y)).collect(),
            weights.to_vec(),
        )
        .unwrap()
    }

    #[test]
    fn equal_weights_three_points_is_best_permutation() {
        let p = [(0.0, 0.0), (1.0, 0.0), (3.0, 0.0)];
        let q = [(0.5, 0.0), (2.0, 0.0), (2.5, 0.0)];
        let w = [1.0 / 3.0; 3];
        // Sorted matching is optimal on the line: (0.5 + 1 + 0.5) / 3.
        let d = brute_force_wasserstein(&measure(&p, &w), &measure(&q, &w)).unwrap();
        assert!((d - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn single_target_forces_the_plan() {
        let p = [(0.0, 0.0), (3.0, 4.0), (-1.0, 0.0)];
        let w = [0.2, 0.5, 0.3];
        let q = measure(&[(0.0, 0.0)], &[1.0]);
        let expected = 0.5 * 5.0 + 0.3 * 1.0;
        assert!((brute_force_wasserstein(&measure(&p, &w), &q).unwrap() - expected).abs() < 1e-15);
        // Irrational weights take the tree path.
        let w = [0.3_f64.sqrt() / 2.0, 0.25, 0.75 - 0.3_f64.sqrt() / 2.0];
        let expected = 0.25 * 5.0 + w[2];
        assert!((brute_force_wasserstein(&measure(&p, &w), &q).unwrap() - expected).abs() < 1e-14);
    }

    #[test]
    fn strategies_agree() {
        let p = [(0.0, 0.0), (1.0, 2.0), (2.0, -1.0)];
        let q = [(1.0, 1.0), (0.0, -2.0)];
        let a = [0.5, 0.25, 0.25];
        let b = [0.75, 0.25];
        let exact = assignment_minimum(&a, &b, &cost_of(&p, &q), 4);
        let tree = tree_enumeration(&a, &b, &cost_of(&p, &q));
        assert!((exact - tree).abs() < 1e-14, "{exact} vs {tree}");
    }

    fn cost_of(p: &[(f64, f64)], q: &[(f64, f64)]) -> Vec<f64> {
        p.iter()
            .flat_map(|&(x, y)| q.iter().map(move |&(u, v)| ((x - u).powi(2) + (y - v).powi(2)).sqrt()))
            .collect()
    }

    #[test]
    fn size_guard() {
        let pts: Vec<(f64, f64)> = (0..9).map(|i| (i as f64, 0.0)).collect();
        let w = vec![1.0 / 9.0; 9];
        let m = measure(&pts[..9], &w);
        let n = measure(&pts[..8], &[0.125; 8]);
        assert!(matches!(brute_force_wasserstein(&m, &n), Err(Error::Transport(_))));
    }
}
