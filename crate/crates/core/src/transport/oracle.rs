//! Exhaustive reference solver for small transportation problems.
//!
//! Square instances enumerate all permutations (an optimal vertex of the
//! square uniform polytope is a scaled permutation). Rectangular instances
//! enumerate every spanning tree of the bipartite cell graph, solve its unique
//! basic flow and keep the cheapest feasible one. Shares no code with the
//! simplex beyond the plan type.

use nalgebra::DMatrix;

use super::{check_cost, plan_from_flows, TransportPlan};
use crate::error::{Error, Result};

/// Largest `Ni·Nj` accepted by [`brute_force_transport`].
pub const BRUTE_FORCE_MAX_CELLS: usize = 30;

pub fn brute_force_transport(cost: &DMatrix<f64>) -> Result<TransportPlan> {
    check_cost(cost)?;
    let (m, n) = cost.shape();
    if m * n > BRUTE_FORCE_MAX_CELLS {
        return Err(Error::TooLarge {
            rows: m,
            cols: n,
            limit: BRUTE_FORCE_MAX_CELLS,
        });
    }
    if m == n {
        Ok(best_permutation(cost))
    } else {
        Ok(best_basic_solution(cost))
    }
}

fn best_permutation(cost: &DMatrix<f64>) -> TransportPlan {
    let n = cost.nrows();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut best_perm = perm.clone();
    let mut best = f64::INFINITY;
    permute(&mut perm, 0, &mut |p| {
        let c: f64 = p.iter().enumerate().map(|(i, &j)| cost[(i, j)]).sum();
        if c < best {
            best = c;
            best_perm = p.to_vec();
        }
    });
    // square scaling: each matched cell carries n units out of n·n
    let flows: Vec<_> = best_perm
        .iter()
        .enumerate()
        .map(|(i, &j)| (i, j, n as i64))
        .collect();
    plan_from_flows(cost, &flows)
}

fn permute(p: &mut Vec<usize>, k: usize, visit: &mut impl FnMut(&[usize])) {
    if k == p.len() {
        visit(p);
        return;
    }
    for i in k..p.len() {
        p.swap(k, i);
        permute(p, k + 1, visit);
        p.swap(k, i);
    }
}

struct TreeSearch<'a> {
    cost: &'a DMatrix<f64>,
    m: usize,
    n: usize,
    chosen: Vec<usize>,
    best: Option<(f64, Vec<(usize, usize, i64)>)>,
}

fn best_basic_solution(cost: &DMatrix<f64>) -> TransportPlan {
    let (m, n) = cost.shape();
    let mut search = TreeSearch {
        cost,
        m,
        n,
        chosen: Vec::with_capacity(m + n - 1),
        best: None,
    };
    let parent: Vec<usize> = (0..m + n).collect();
    search.extend(0, &parent);
    let (_, flows) = search.best.expect("uniform transportation problem is always feasible");
    plan_from_flows(cost, &flows)
}

fn root(parent: &[usize], mut a: usize) -> usize {
    while parent[a] != a {
        a = parent[a];
    }
    a
}

impl TreeSearch<'_> {
    fn extend(&mut self, next: usize, parent: &[usize]) {
        let need = self.m + self.n - 1;
        if self.chosen.len() == need {
            self.evaluate();
            return;
        }
        let cells = self.m * self.n;
        if cells - next < need - self.chosen.len() {
            return;
        }
        for cell in next..cells {
            let (i, j) = (cell / self.n, cell % self.n);
            let (ri, rj) = (root(parent, i), root(parent, self.m + j));
            if ri == rj {
                continue;
            }
            let mut p = parent.to_vec();
            p[ri] = rj;
            self.chosen.push(cell);
            self.extend(cell + 1, &p);
            self.chosen.pop();
        }
    }

    /// Peels leaves off the spanning tree to get its unique basic flow.
    fn evaluate(&mut self) {
        let (m, n) = (self.m, self.n);
        let mut residual: Vec<i64> = (0..m + n)
            .map(|v| if v < m { n as i64 } else { m as i64 })
            .collect();
        let mut degree = vec![0usize; m + n];
        for &c in &self.chosen {
            degree[c / n] += 1;
            degree[m + c % n] += 1;
        }
        let mut flow = vec![None::<i64>; self.chosen.len()];
        for _ in 0..self.chosen.len() {
            let leaf_edge = (0..self.chosen.len()).find(|&e| {
                flow[e].is_none() && {
                    let c = self.chosen[e];
                    degree[c / n] == 1 || degree[m + c % n] == 1
                }
            });
            let e = leaf_edge.expect("a tree always has a leaf");
            let c = self.chosen[e];
            let (a, b) = (c / n, m + c % n);
            let (leaf, other) = if degree[a] == 1 { (a, b) } else { (b, a) };
            let f = residual[leaf];
            flow[e] = Some(f);
            residual[leaf] = 0;
            residual[other] -= f;
            degree[leaf] -= 1;
            degree[other] -= 1;
        }
        let flows: Vec<(usize, usize, i64)> = self
            .chosen
            .iter()
            .zip(&flow)
            .map(|(&c, f)| (c / n, c % n, f.unwrap()))
            .collect();
        if flows.iter().any(|&(_, _, f)| f < 0) {
            return;
        }
        let total: f64 = flows
            .iter()
            .map(|&(i, j, f)| f as f64 * self.cost[(i, j)])
            .sum();
        if self.best.as_ref().is_none_or(|(b, _)| total < *b) {
            self.best = Some((total, flows));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::dmatrix;

    #[test]
    fn single_row_is_uniform() {
        let p = brute_force_transport(&dmatrix![4.0, 0.0, 2.0]).unwrap();
        assert!((p.cost - 2.0).abs() < 1e-12);
        assert!(p.plan.iter().all(|v| (v - 1.0 / 3.0).abs() < 1e-15));
    }

    #[test]
    fn constant_cost() {
        let c = 3.5;
        let p = brute_force_transport(&DMatrix::from_element(2, 2, c)).unwrap();
        assert!((p.cost - c).abs() < 1e-12);
        let p = brute_force_transport(&DMatrix::from_element(2, 3, c)).unwrap();
        assert!((p.cost - c).abs() < 1e-12);
    }

    #[test]
    fn size_limit() {
        assert!(matches!(
            brute_force_transport(&DMatrix::zeros(6, 6)),
            Err(Error::TooLarge { .. })
        ));
    }

    #[test]
    fn hand_solved_rectangle() {
        // Rows send 1/2 each, columns take 1/3 each. Row 1 can put only 1/3
        // into its free column 2; the other 1/6 costs 9. Row 0 fills the rest
        // for free.
        let cost = dmatrix![0.0, 0.0, 5.0; 9.0, 9.0, 0.0];
        let p = brute_force_transport(&cost).unwrap();
        assert!((p.cost - 9.0 / 6.0).abs() < 1e-12);
        assert!(p.marginal_error() < 1e-15);
    }
}
