//! Primal network simplex for the dense bipartite transportation problem.
//!
//! Spanning-tree basis over `n1 + n2` real nodes plus an artificial root,
//! stored as parent/thread lists (the LEMON layout). Rows are supply nodes
//! `0..n1`, columns are demand nodes `n1..n1 + n2`, and real arc
//! `e = i * n2 + j` runs from row `i` to column `j` with infinite capacity.
//!
//! Every non-tree arc sits at its lower bound, so flows are stored per tree
//! node (the flow on the arc to its parent). Entering arcs come from a
//! block search over reduced costs; the leaving arc is the last blocking
//! arc met on the cycle, which keeps the tree strongly feasible and rules
//! out cycling under degeneracy.

use crate::error::{Error, Result};

const UP: i8 = 1;
const DOWN: i8 = -1;
const NONE: usize = usize::MAX;

pub(crate) struct Solution {
    /// `(row, column, mass)` for every real tree arc with positive flow.
    pub flows: Vec<(usize, usize, f64)>,
    /// Node potentials; reduced cost of arc (i, j) is `c_ij + pi_i - pi_j`.
    pub pi: Vec<f64>,
}

pub(crate) struct NetworkSimplex<'a> {
    n1: usize,
    n2: usize,
    m: usize,
    root: usize,
    cost: &'a [f64],
    art_cost: f64,
    tol: f64,
    /// Artificial arc of node u runs u -> root (true) or root -> u.
    art_out: Vec<bool>,
    in_tree: Vec<bool>,

    parent: Vec<usize>,
    pred: Vec<usize>,
    pred_dir: Vec<i8>,
    thread: Vec<usize>,
    rev_thread: Vec<usize>,
    succ_num: Vec<usize>,
    last_succ: Vec<usize>,
    pi: Vec<f64>,
    flow: Vec<f64>,

    block_size: usize,
    next_arc: usize,
    in_arc: usize,
    join: usize,
    u_in: usize,
    v_in: usize,
    u_out: usize,
    delta: f64,
    dirty_revs: Vec<usize>,
}

impl<'a> NetworkSimplex<'a> {
    /// `supply` and `demand` must be strictly positive; `cost` is the
    /// row-major `n1 x n2` ground cost matrix.
    pub fn new(supply: &[f64], demand: &[f64], cost: &'a [f64]) -> Self {
        let (n1, n2) = (supply.len(), demand.len());
        let m = n1 * n2;
        debug_assert_eq!(cost.len(), m);
        let node_num = n1 + n2;
        let root = node_num;
        let max_cost = cost.iter().fold(0.0f64, |a, &c| a.max(c));
        let art_cost = (max_cost + 1.0) * node_num as f64;

        let mut s = NetworkSimplex {
            n1,
            n2,
            m,
            root,
            cost,
            art_cost,
            tol: 64.0 * f64::EPSILON * art_cost,
            art_out: vec![false; node_num],
            in_tree: vec![false; m],
            parent: vec![NONE; node_num + 1],
            pred: vec![NONE; node_num + 1],
            pred_dir: vec![0; node_num + 1],
            thread: vec![0; node_num + 1],
            rev_thread: vec![0; node_num + 1],
            succ_num: vec![0; node_num + 1],
            last_succ: vec![0; node_num + 1],
            pi: vec![0.0; node_num + 1],
            flow: vec![0.0; node_num + 1],
            block_size: ((m as f64).sqrt().ceil() as usize).max(10),
            next_arc: 0,
            in_arc: 0,
            join: 0,
            u_in: 0,
            v_in: 0,
            u_out: 0,
            delta: 0.0,
            dirty_revs: Vec::new(),
        };

        s.thread[root] = 0;
        s.rev_thread[0] = root;
        s.succ_num[root] = node_num + 1;
        s.last_succ[root] = root - 1;
        for u in 0..node_num {
            s.parent[u] = root;
            s.pred[u] = m + u;
            s.thread[u] = u + 1;
            s.rev_thread[u + 1] = u;
            s.succ_num[u] = 1;
            s.last_succ[u] = u;
            if u < n1 {
                s.art_out[u] = true;
                s.pred_dir[u] = UP;
                s.pi[u] = 0.0;
                s.flow[u] = supply[u];
            } else {
                s.pred_dir[u] = DOWN;
                s.pi[u] = art_cost;
                s.flow[u] = demand[u - n1];
            }
        }
        s
    }

    #[inline]
    fn source(&self, e: usize) -> usize {
        if e < self.m {
            e / self.n2
        } else if self.art_out[e - self.m] {
            e - self.m
        } else {
            self.root
        }
    }

    #[inline]
    fn target(&self, e: usize) -> usize {
        if e < self.m {
            self.n1 + e % self.n2
        } else if self.art_out[e - self.m] {
            self.root
        } else {
            e - self.m
        }
    }

    #[inline]
    fn arc_cost(&self, e: usize) -> f64 {
        if e < self.m {
            self.cost[e]
        } else if self.art_out[e - self.m] {
            0.0
        } else {
            self.art_cost
        }
    }

    pub fn run(mut self) -> Result<Solution> {
        let limit = 64 * (self.m as u64 + self.root as u64) + 1_000_000;
        let mut iterations = 0u64;
        while self.find_entering_arc() {
            iterations += 1;
            if iterations > limit {
                return Err(Error::Transport(format!(
                    "network simplex exceeded {limit} pivots"
                )));
            }
            self.find_join_node();
            self.find_leaving_arc();
            self.change_flow();
            self.update_tree_structure();
            self.update_potential();
        }
        Ok(self.solution())
    }

    fn solution(&self) -> Solution {
        let mut flows: Vec<(usize, usize, f64)> = (0..self.root)
            .filter(|&u| self.pred[u] < self.m && self.flow[u] > 0.0)
            .map(|u| {
                let e = self.pred[u];
                (e / self.n2, e % self.n2, self.flow[u])
            })
            .collect();
        flows.sort_by_key(|&(i, j, _)| (i, j));
        Solution {
            flows,
            pi: self.pi[..self.root].to_vec(),
        }
    }

    /// Block search: scan cyclically from the last stop, take the most
    /// negative reduced cost once a block contains any candidate. Ties go
    /// to the first arc scanned.
    fn find_entering_arc(&mut self) -> bool {
        let (n1, n2, m) = (self.n1, self.n2, self.m);
        let mut min = -self.tol;
        let mut found = NONE;
        let mut cnt = self.block_size;
        let mut e = self.next_arc;
        let (mut i, mut j) = (e / n2, e % n2);
        for _ in 0..m {
            if !self.in_tree[e] {
                let c = self.cost[e] + self.pi[i] - self.pi[n1 + j];
                if c < min {
                    min = c;
                    found = e;
                }
            }
            cnt -= 1;
            if cnt == 0 {
                if found != NONE {
                    break;
                }
                cnt = self.block_size;
            }
            e += 1;
            j += 1;
            if j == n2 {
                j = 0;
                i += 1;
            }
            if e == m {
                e = 0;
                i = 0;
                j = 0;
            }
        }
        if found == NONE {
            return false;
        }
        self.in_arc = found;
        self.next_arc = e;
        true
    }

    fn find_join_node(&mut self) {
        let mut u = self.source(self.in_arc);
        let mut v = self.target(self.in_arc);
        while u != v {
            if self.succ_num[u] < self.succ_num[v] {
                u = self.parent[u];
            } else {
                v = self.parent[v];
            }
        }
        self.join = u;
    }

    /// Capacities are infinite, so only arcs whose flow decreases can block.
    fn find_leaving_arc(&mut self) {
        let first = self.source(self.in_arc);
        let second = self.target(self.in_arc);
        let mut delta = f64::INFINITY;
        let mut result = 0;
        let mut u = first;
        while u != self.join {
            if self.pred_dir[u] == UP && self.flow[u] < delta {
                delta = self.flow[u];
                self.u_out = u;
                result = 1;
            }
            u = self.parent[u];
        }
        u = second;
        while u != self.join {
            if self.pred_dir[u] == DOWN && self.flow[u] <= delta {
                delta = self.flow[u];
                self.u_out = u;
                result = 2;
            }
            u = self.parent[u];
        }
        // Real arcs only run row -> column, so every cycle has a
        // backward arc and some arc always blocks.
        debug_assert!(result != 0);
        if result == 1 {
            self.u_in = first;
            self.v_in = second;
        } else {
            self.u_in = second;
            self.v_in = first;
        }
        self.delta = delta;
    }

    fn change_flow(&mut self) {
        let val = self.delta;
        if val > 0.0 {
            let mut u = self.source(self.in_arc);
            while u != self.join {
                self.flow[u] -= self.pred_dir[u] as f64 * val;
                u = self.parent[u];
            }
            u = self.target(self.in_arc);
            while u != self.join {
                self.flow[u] += self.pred_dir[u] as f64 * val;
                u = self.parent[u];
            }
        }
        let out_arc = self.pred[self.u_out];
        if out_arc < self.m {
            self.in_tree[out_arc] = false;
        }
        self.in_tree[self.in_arc] = true;
    }

    fn update_tree_structure(&mut self) {
        let (u_in, v_in, u_out, join, in_arc) =
            (self.u_in, self.v_in, self.u_out, self.join, self.in_arc);
        let old_rev_thread = self.rev_thread[u_out];
        let old_succ_num = self.succ_num[u_out];
        let old_last_succ = self.last_succ[u_out];
        let v_out = self.parent[u_out];
        let in_dir = if u_in == self.source(in_arc) { UP } else { DOWN };

        if u_in == u_out {
            self.parent[u_in] = v_in;
            self.pred[u_in] = in_arc;
            self.pred_dir[u_in] = in_dir;
            self.flow[u_in] = self.delta;

            if self.thread[v_in] != u_out {
                let mut after = self.thread[old_last_succ];
                self.thread[old_rev_thread] = after;
                self.rev_thread[after] = old_rev_thread;
                after = self.thread[v_in];
                self.thread[v_in] = u_out;
                self.rev_thread[u_out] = v_in;
                self.thread[old_last_succ] = after;
                self.rev_thread[after] = old_last_succ;
            }
        } else {
            let thread_continue = if old_rev_thread == v_in {
                self.thread[old_last_succ]
            } else {
                self.thread[v_in]
            };

            // Re-hang the stem u_in .. u_out below v_in.
            let mut stem = u_in;
            let mut par_stem = v_in;
            let mut last = self.last_succ[u_in];
            let mut after = self.thread[last];
            self.thread[v_in] = u_in;
            self.dirty_revs.clear();
            self.dirty_revs.push(v_in);
            while stem != u_out {
                let next_stem = self.parent[stem];
                self.thread[last] = next_stem;
                self.dirty_revs.push(last);

                let before = self.rev_thread[stem];
                self.thread[before] = after;
                self.rev_thread[after] = before;

                self.parent[stem] = par_stem;
                par_stem = stem;
                stem = next_stem;

                last = if self.last_succ[stem] == self.last_succ[par_stem] {
                    self.rev_thread[par_stem]
                } else {
                    self.last_succ[stem]
                };
                after = self.thread[last];
            }
            self.parent[u_out] = par_stem;
            self.thread[last] = thread_continue;
            self.rev_thread[thread_continue] = last;
            self.last_succ[u_out] = last;

            if old_rev_thread != v_in {
                self.thread[old_rev_thread] = after;
                self.rev_thread[after] = old_rev_thread;
            }

            for k in 0..self.dirty_revs.len() {
                let u = self.dirty_revs[k];
                let t = self.thread[u];
                self.rev_thread[t] = u;
            }

            // Pred arcs, flows and subtree data shift one step along the
            // reversed stem.
            let mut tmp_sc = 0usize;
            let tmp_ls = self.last_succ[u_out];
            let mut u = u_out;
            while u != u_in {
                let p = self.parent[u];
                self.pred[u] = self.pred[p];
                self.pred_dir[u] = -self.pred_dir[p];
                self.flow[u] = self.flow[p];
                tmp_sc += self.succ_num[u];
                tmp_sc -= self.succ_num[p];
                self.succ_num[u] = tmp_sc;
                self.last_succ[p] = tmp_ls;
                u = p;
            }
            self.pred[u_in] = in_arc;
            self.pred_dir[u_in] = in_dir;
            self.flow[u_in] = self.delta;
            self.succ_num[u_in] = old_succ_num;
        }

        let up_limit_out = if self.last_succ[join] == v_in { join } else { NONE };
        let last_succ_out = self.last_succ[u_out];
        let mut u = v_in;
        while u != NONE && self.last_succ[u] == v_in {
            self.last_succ[u] = last_succ_out;
            u = self.parent[u];
        }

        if join != old_rev_thread && v_in != old_rev_thread {
            let mut u = v_out;
            while u != up_limit_out && self.last_succ[u] == old_last_succ {
                self.last_succ[u] = old_rev_thread;
                u = self.parent[u];
            }
        } else if last_succ_out != old_last_succ {
            let mut u = v_out;
            while u != up_limit_out && self.last_succ[u] == old_last_succ {
                self.last_succ[u] = last_succ_out;
                u = self.parent[u];
            }
        }

        let mut u = v_in;
        while u != join {
            self.succ_num[u] += old_succ_num;
            u = self.parent[u];
        }
        let mut u = v_out;
        while u != join {
            self.succ_num[u] -= old_succ_num;
            u = self.parent[u];
        }
    }

    fn update_potential(&mut self) {
        let u_in = self.u_in;
        let sigma = self.pi[self.v_in]
            - self.pi[u_in]
            - self.pred_dir[u_in] as f64 * self.arc_cost(self.in_arc);
        let end = self.thread[self.last_succ[u_in]];
        let mut u = u_in;
        while u != end {
            self.pi[u] += sigma;
            u = self.thread[u];
        }
    }

    /// Full consistency check of the basis; test support only.
    #[cfg(test)]
    fn check_tree(&self) -> std::result::Result<(), String> {
        let nodes = self.root + 1;
        let mut order = Vec::with_capacity(nodes);
        let mut u = self.root;
        for _ in 0..nodes {
            order.push(u);
            u = self.thread[u];
        }
        if u != self.root {
            return Err("thread does not close at the root".into());
        }
        let mut pos = vec![NONE; nodes];
        for (k, &u) in order.iter().enumerate() {
            if pos[u] != NONE {
                return Err(format!("node {u} repeated in thread"));
            }
            pos[u] = k;
            if self.rev_thread[self.thread[u]] != u {
                return Err(format!("rev_thread broken at {u}"));
            }
        }
        let mut size = vec![1usize; nodes];
        for &u in order.iter().rev() {
            if u != self.root {
                size[self.parent[u]] += size[u];
            }
        }
        for u in 0..nodes {
            if size[u] != self.succ_num[u] {
                return Err(format!("succ_num of {u}: {} vs {}", self.succ_num[u], size[u]));
            }
            let last = order[pos[u] + size[u] - 1];
            if self.last_succ[u] != last {
                return Err(format!("last_succ of {u}"));
            }
            if u == self.root {
                continue;
            }
            let p = self.parent[u];
            if pos[p] >= pos[u] {
                return Err(format!("parent of {u} after it in thread"));
            }
            let e = self.pred[u];
            let (s, t) = (self.source(e), self.target(e));
            let ok = match self.pred_dir[u] {
                UP => s == u && t == p,
                DOWN => s == p && t == u,
                _ => false,
            };
            if !ok {
                return Err(format!("pred arc of {u} does not join it to its parent"));
            }
            let reduced = self.arc_cost(e) + self.pi[s] - self.pi[t];
            if reduced.abs() > 1e3 * self.tol {
                return Err(format!("tree arc {e} has reduced cost {reduced}"));
            }
            if e < self.m && !self.in_tree[e] {
                return Err(format!("tree arc {e} not flagged"));
            }
            if !(self.flow[u] >= 0.0) {
                return Err(format!("negative flow at {u}"));
            }
        }
        let flagged = self.in_tree.iter().filter(|&&b| b).count();
        let real = (0..self.root).filter(|&u| self.pred[u] < self.m).count();
        if flagged != real {
            return Err("tree flags out of sync".into());
        }
        Ok(())
    }
}
