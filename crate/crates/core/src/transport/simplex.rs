//! Primal network simplex on the bipartite transportation graph.
//!
//! Nodes `0..m` are sources (rows), nodes `m..m+n` are sinks (columns). A basis
//! is a spanning tree of `m + n − 1` cells; zero-flow cells stay in the tree to
//! absorb degeneracy. Pricing is most-negative reduced cost, switching to
//! Bland's rule after `m·n` consecutive degenerate pivots.

use std::collections::VecDeque;

use nalgebra::DMatrix;

use super::{plan_from_flows, TransportPlan};

/// Optimal flows plus the dual potentials that certify them.
#[derive(Debug, Clone)]
#[cfg_attr(not(test), allow(dead_code))]
pub(crate) struct Solution {
    pub plan: TransportPlan,
    pub basis: Vec<(usize, usize)>,
    pub row_potential: Vec<f64>,
    pub col_potential: Vec<f64>,
}

impl Solution {
    pub fn into_plan(self) -> TransportPlan {
        self.plan
    }
}

pub(super) struct NetworkSimplex<'a> {
    cost: &'a DMatrix<f64>,
    m: usize,
    n: usize,
    flow: Vec<i64>,
    basic: Vec<bool>,
    basis: Vec<usize>,
    tolerance: f64,
}

struct Tree {
    potential: Vec<f64>,
    parent: Vec<usize>,
    parent_cell: Vec<usize>,
    depth: Vec<usize>,
}

impl<'a> NetworkSimplex<'a> {
    pub fn new(cost: &'a DMatrix<f64>) -> Self {
        let (m, n) = cost.shape();
        let scale = cost.amax();
        let mut s = Self {
            cost,
            m,
            n,
            flow: vec![0; m * n],
            basic: vec![false; m * n],
            basis: Vec::with_capacity(m + n - 1),
            tolerance: 1e-13 * (m + n) as f64 * scale,
        };
        s.initial_basis();
        s
    }

    #[inline]
    fn cell_cost(&self, cell: usize) -> f64 {
        self.cost[(cell / self.n, cell % self.n)]
    }

    /// Greedy least-cost allocation, completed to a spanning tree with
    /// zero-flow cells.
    fn initial_basis(&mut self) {
        let (m, n) = (self.m, self.n);
        let mut order: Vec<usize> = (0..m * n).collect();
        order.sort_by(|&a, &b| self.cell_cost(a).total_cmp(&self.cell_cost(b)).then(a.cmp(&b)));

        let mut supply = vec![n as i64; m];
        let mut demand = vec![m as i64; n];
        let mut dsu = Dsu::new(m + n);
        for &cell in &order {
            let (i, j) = (cell / n, cell % n);
            if supply[i] > 0 && demand[j] > 0 {
                let f = supply[i].min(demand[j]);
                supply[i] -= f;
                demand[j] -= f;
                let joined = dsu.union(i, m + j);
                debug_assert!(joined, "greedy allocation produced a cycle");
                self.flow[cell] = f;
                self.basic[cell] = true;
                self.basis.push(cell);
            }
        }
        for &cell in &order {
            if self.basis.len() == m + n - 1 {
                break;
            }
            let (i, j) = (cell / n, cell % n);
            if !self.basic[cell] && dsu.union(i, m + j) {
                self.basic[cell] = true;
                self.basis.push(cell);
            }
        }
        debug_assert_eq!(self.basis.len(), m + n - 1);
    }

    fn tree(&self) -> Tree {
        let (m, n) = (self.m, self.n);
        let nodes = m + n;
        let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); nodes];
        for &cell in &self.basis {
            let (i, j) = (cell / n, cell % n);
            adj[i].push((m + j, cell));
            adj[m + j].push((i, cell));
        }
        let mut potential = vec![0.0; nodes];
        let mut parent = vec![usize::MAX; nodes];
        let mut parent_cell = vec![usize::MAX; nodes];
        let mut depth = vec![0; nodes];
        let mut seen = vec![false; nodes];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        while let Some(a) = queue.pop_front() {
            for &(b, cell) in &adj[a] {
                if seen[b] {
                    continue;
                }
                seen[b] = true;
                // u_i + v_j = c_ij on every tree cell
                potential[b] = self.cell_cost(cell) - potential[a];
                parent[b] = a;
                parent_cell[b] = cell;
                depth[b] = depth[a] + 1;
                queue.push_back(b);
            }
        }
        Tree {
            potential,
            parent,
            parent_cell,
            depth,
        }
    }

    fn reduced_cost(&self, tree: &Tree, cell: usize) -> f64 {
        let (i, j) = (cell / self.n, cell % self.n);
        self.cell_cost(cell) - tree.potential[i] - tree.potential[self.m + j]
    }

    fn entering(&self, tree: &Tree, bland: bool) -> Option<usize> {
        let mut best: Option<(usize, f64)> = None;
        for cell in 0..self.m * self.n {
            if self.basic[cell] {
                continue;
            }
            let rc = self.reduced_cost(tree, cell);
            if rc < -self.tolerance {
                if bland {
                    return Some(cell);
                }
                if best.is_none_or(|(_, b)| rc < b) {
                    best = Some((cell, rc));
                }
            }
        }
        best.map(|(c, _)| c)
    }

    /// Tree cells on the cycle closed by `entering`, in order starting next to
    /// its column node. Even positions lose flow, odd positions gain it.
    fn cycle(&self, tree: &Tree, entering: usize) -> Vec<usize> {
        let mut a = self.m + entering % self.n;
        let mut b = entering / self.n;
        let mut from_col = Vec::new();
        let mut from_row = Vec::new();
        while a != b {
            if tree.depth[a] >= tree.depth[b] {
                from_col.push(tree.parent_cell[a]);
                a = tree.parent[a];
            } else {
                from_row.push(tree.parent_cell[b]);
                b = tree.parent[b];
            }
        }
        from_col.extend(from_row.into_iter().rev());
        from_col
    }

    pub fn run(mut self) -> Solution {
        let degenerate_limit = self.m * self.n;
        let mut streak = 0usize;
        let mut pivots = 0usize;
        loop {
            let tree = self.tree();
            let bland = streak >= degenerate_limit;
            let Some(entering) = self.entering(&tree, bland) else {
                log::debug!("network simplex: optimal after {pivots} pivots");
                return self.finish(tree);
            };
            let cycle = self.cycle(&tree, entering);

            let mut theta = i64::MAX;
            let mut leaving = usize::MAX;
            for &cell in cycle.iter().step_by(2) {
                let f = self.flow[cell];
                let better = f < theta || (f == theta && bland && cell < leaving);
                if better {
                    theta = f;
                    leaving = cell;
                }
            }

            for (k, &cell) in cycle.iter().enumerate() {
                if k % 2 == 0 {
                    self.flow[cell] -= theta;
                } else {
                    self.flow[cell] += theta;
                }
            }
            self.flow[entering] += theta;
            self.basic[leaving] = false;
            self.basic[entering] = true;
            let slot = self.basis.iter().position(|&c| c == leaving).unwrap();
            self.basis[slot] = entering;

            streak = if theta == 0 { streak + 1 } else { 0 };
            pivots += 1;
        }
    }

    fn finish(self, tree: Tree) -> Solution {
        let n = self.n;
        let flows: Vec<(usize, usize, i64)> = self
            .basis
            .iter()
            .map(|&c| (c / n, c % n, self.flow[c]))
            .collect();
        let mut basis: Vec<(usize, usize)> = self.basis.iter().map(|&c| (c / n, c % n)).collect();
        basis.sort_unstable();
        Solution {
            plan: plan_from_flows(self.cost, &flows),
            basis,
            row_potential: tree.potential[..self.m].to_vec(),
            col_potential: tree.potential[self.m..].to_vec(),
        }
    }
}

/// Disjoint-set forest over tree nodes.
pub(super) struct Dsu(Vec<usize>);

impl Dsu {
    pub fn new(n: usize) -> Self {
        Dsu((0..n).collect())
    }

    pub fn find(&mut self, mut a: usize) -> usize {
        while self.0[a] != a {
            self.0[a] = self.0[self.0[a]];
            a = self.0[a];
        }
        a
    }

    /// Joins the sets of `a` and `b`; false if they were already joined.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.0[ra] = rb;
        true
    }
}
