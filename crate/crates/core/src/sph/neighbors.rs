//! Candidate neighbor sets for the per-particle kernel sums.
//!
//! Both strategies hand each particle its candidates in ascending index
//! order. Candidates beyond the kernel support contribute exact zeros, so a
//! sum over the cell-grid candidates is bit-identical to the brute-force sum
//! over every particle.

use std::ops::Range;
use std::slice;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::vector::Vec2;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NeighborSearch {
    /// Every particle is a candidate of every other, O(N^2).
    BruteForce,
    /// Uniform grid with cell edge equal to the largest support radius.
    #[default]
    CellGrid,
}

#[derive(Clone, Debug)]
pub struct Neighborhood {
    inner: Inner,
}

#[derive(Clone, Debug)]
enum Inner {
    All(usize),
    Lists { offsets: Vec<usize>, indices: Vec<u32> },
}

pub enum Candidates<'a> {
    All(Range<usize>),
    List(slice::Iter<'a, u32>),
}

impl Iterator for Candidates<'_> {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        match self {
            Candidates::All(r) => r.next(),
            Candidates::List(it) => it.next().map(|&j| j as usize),
        }
    }
}

/// Upper bound on grid cells relative to the particle count; sparse or
/// widely scattered systems get coarser cells instead of a huge grid.
const MAX_CELLS_PER_PARTICLE: usize = 4;

impl Neighborhood {
    pub fn all(n: usize) -> Self {
        Neighborhood { inner: Inner::All(n) }
    }

    /// `radius` must bound every pairwise kernel support that will be
    /// evaluated through this neighborhood.
    pub fn build(positions: &[Vec2], radius: f64, search: NeighborSearch) -> Self {
        match search {
            NeighborSearch::BruteForce => Self::all(positions.len()),
            NeighborSearch::CellGrid => Self::cell_grid(positions, radius),
        }
    }

    pub fn len(&self) -> usize {
        match &self.inner {
            Inner::All(n) => *n,
            Inner::Lists { offsets, .. } => offsets.len() - 1,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    #[inline]
    pub fn candidates(&self, i: usize) -> Candidates<'_> {
        match &self.inner {
            Inner::All(n) => Candidates::All(0..*n),
            Inner::Lists { offsets, indices } => {
                Candidates::List(indices[offsets[i]..offsets[i + 1]].iter())
            }
        }
    }

    fn cell_grid(positions: &[Vec2], radius: f64) -> Self {
        let n = positions.len();
        if n == 0 || !(radius > 0.0) || !radius.is_finite() {
            return Self::all(n);
        }
        let (mut lo, mut hi) = (positions[0], positions[0]);
        for p in positions {
            lo.x = lo.x.min(p.x);
            lo.y = lo.y.min(p.y);
            hi.x = hi.x.max(p.x);
            hi.y = hi.y.max(p.y);
        }

        let max_cells = (MAX_CELLS_PER_PARTICLE * n).max(64);
        let mut edge = radius;
        let (nx, ny) = loop {
            let nx = ((hi.x - lo.x) / edge).floor() as usize + 1;
            let ny = ((hi.y - lo.y) / edge).floor() as usize + 1;
            if nx.saturating_mul(ny) <= max_cells {
                break (nx, ny);
            }
            edge *= 2.0;
        };

        let cell_of = |p: Vec2| -> (usize, usize) {
            let cx = (((p.x - lo.x) / edge) as usize).min(nx - 1);
            let cy = (((p.y - lo.y) / edge) as usize).min(ny - 1);
            (cx, cy)
        };

        // Counting sort by cell, stable in particle index.
        let mut cell_start = vec![0usize; nx * ny + 1];
        let cells: Vec<(usize, usize)> = positions.iter().map(|&p| cell_of(p)).collect();
        for &(cx, cy) in &cells {
            cell_start[cy * nx + cx + 1] += 1;
        }
        for c in 0..nx * ny {
            cell_start[c + 1] += cell_start[c];
        }
        let mut fill = cell_start.clone();
        let mut sorted = vec![0u32; n];
        for (i, &(cx, cy)) in cells.iter().enumerate() {
            let c = cy * nx + cx;
            sorted[fill[c]] = i as u32;
            fill[c] += 1;
        }

        let reach = radius * (1.0 + 1e-12);
        let reach2 = reach * reach;
        let lists: Vec<Vec<u32>> = (0..n)
            .into_par_iter()
            .map(|i| {
                let xi = positions[i];
                let (cx, cy) = cells[i];
                let mut out = Vec::new();
                for gy in cy.saturating_sub(1)..=(cy + 1).min(ny - 1) {
                    for gx in cx.saturating_sub(1)..=(cx + 1).min(nx - 1) {
                        let c = gy * nx + gx;
                        for &j in &sorted[cell_start[c]..cell_start[c + 1]] {
                            if (xi - positions[j as usize]).norm_squared() <= reach2 {
                                out.push(j);
                            }
                        }
                    }
                }
                out.sort_unstable();
                out
            })
            .collect();

        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0);
        let mut indices = Vec::with_capacity(lists.iter().map(Vec::len).sum());
        for list in lists {
            indices.extend_from_slice(&list);
            offsets.push(indices.len());
        }
        Neighborhood {
            inner: Inner::Lists { offsets, indices },
        }
    }
}
