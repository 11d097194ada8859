//! Exact solver for the transportation problem with uniform marginals.
//!
//! A plan over an `Ni × Nj` cost matrix has every row summing to `1/Ni` and
//! every column summing to `1/Nj`. Internally the problem is scaled to integer
//! supplies (`Nj` per row, `Ni` per column) so that all flows are exact.

mod oracle;
mod simplex;

use nalgebra::DMatrix;

pub use oracle::{brute_force_transport, BRUTE_FORCE_MAX_CELLS};
pub(crate) use simplex::Solution;

use crate::error::{Error, Result};

/// A feasible transport plan and its objective value.
#[derive(Debug, Clone, PartialEq)]
pub struct TransportPlan {
    pub plan: DMatrix<f64>,
    pub cost: f64,
}

impl TransportPlan {
    /// Largest deviation of any row or column sum from its uniform marginal.
    pub fn marginal_error(&self) -> f64 {
        let (m, n) = self.plan.shape();
        let row = self
            .plan
            .row_iter()
            .map(|r| (r.sum() - 1.0 / m as f64).abs())
            .fold(0.0, f64::max);
        let col = self
            .plan
            .column_iter()
            .map(|c| (c.sum() - 1.0 / n as f64).abs())
            .fold(0.0, f64::max);
        row.max(col)
    }

    pub fn nonzeros(&self) -> usize {
        self.plan.iter().filter(|v| **v != 0.0).count()
    }

    /// For a square plan, the permutation it encodes (`row -> column`), if it
    /// is `1/n` times a permutation matrix within `tol`.
    pub fn as_permutation(&self, tol: f64) -> Option<Vec<usize>> {
        let (m, n) = self.plan.shape();
        if m != n {
            return None;
        }
        let target = 1.0 / n as f64;
        let mut perm = Vec::with_capacity(n);
        let mut used = vec![false; n];
        for i in 0..n {
            let mut hit = None;
            for j in 0..n {
                let v = self.plan[(i, j)];
                if (v - target).abs() <= tol {
                    if hit.is_some() {
                        return None;
                    }
                    hit = Some(j);
                } else if v.abs() > tol {
                    return None;
                }
            }
            let j = hit?;
            if std::mem::replace(&mut used[j], true) {
                return None;
            }
            perm.push(j);
        }
        Some(perm)
    }
}

fn check_cost(cost: &DMatrix<f64>) -> Result<()> {
    if cost.nrows() == 0 || cost.ncols() == 0 {
        return Err(Error::Shape(format!(
            "transport cost matrix is {}x{}",
            cost.nrows(),
            cost.ncols()
        )));
    }
    for (j, col) in cost.column_iter().enumerate() {
        if let Some(i) = col.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { row: i, col: j });
        }
    }
    Ok(())
}

/// Minimizes `Σ plan·cost` over the uniform-marginal transportation polytope
/// with the network simplex method. The returned plan is a vertex, so it has
/// at most `Ni + Nj − 1` nonzero entries.
pub fn solve_transport(cost: &DMatrix<f64>) -> Result<TransportPlan> {
    Ok(solve_with_certificate(cost)?.into_plan())
}

pub(crate) fn solve_with_certificate(cost: &DMatrix<f64>) -> Result<Solution> {
    check_cost(cost)?;
    Ok(simplex::NetworkSimplex::new(cost).run())
}

/// Turns integer flows (scaled by `Ni·Nj`) into a plan and its cost.
fn plan_from_flows(cost: &DMatrix<f64>, flows: &[(usize, usize, i64)]) -> TransportPlan {
    let (m, n) = cost.shape();
    let scale = (m * n) as f64;
    let mut plan = DMatrix::zeros(m, n);
    let mut total = 0.0;
    for &(i, j, f) in flows {
        if f != 0 {
            plan[(i, j)] = f as f64 / scale;
            total += f as f64 * cost[(i, j)];
        }
    }
    TransportPlan {
        plan,
        cost: total / scale,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::dmatrix;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_int_cost(rng: &mut ChaCha8Rng, m: usize, n: usize) -> DMatrix<f64> {
        DMatrix::from_fn(m, n, |_, _| rng.random_range(0..100) as f64)
    }

    fn check_certificate(cost: &DMatrix<f64>, sol: &Solution) {
        let scale = cost.amax().max(1.0);
        for i in 0..cost.nrows() {
            for j in 0..cost.ncols() {
                let reduced = cost[(i, j)] - sol.row_potential[i] - sol.col_potential[j];
                assert!(reduced >= -1e-9 * scale, "dual infeasible at ({i},{j}): {reduced}");
            }
        }
        for &(i, j) in &sol.basis {
            let reduced = cost[(i, j)] - sol.row_potential[i] - sol.col_potential[j];
            assert!(reduced.abs() <= 1e-9 * scale, "basic cell ({i},{j}) not tight");
        }
        assert_eq!(sol.basis.len(), cost.nrows() + cost.ncols() - 1);
    }

    #[test]
    fn zero_cost_is_feasible() {
        for (m, n) in [(1, 1), (3, 3), (2, 5), (6, 4)] {
            let p = solve_transport(&DMatrix::zeros(m, n)).unwrap();
            assert_eq!(p.cost, 0.0);
            assert!(p.marginal_error() < 1e-12);
        }
    }

    #[test]
    fn two_by_two_diagonal() {
        let p = solve_transport(&dmatrix![0.0, 1.0; 1.0, 0.0]).unwrap();
        assert_eq!(p.plan, dmatrix![0.5, 0.0; 0.0, 0.5]);
        assert_eq!(p.cost, 0.0);
    }

    #[test]
    fn single_row() {
        let cost = dmatrix![3.0, 1.0, 2.0, 6.0];
        let p = solve_transport(&cost).unwrap();
        assert!((p.cost - 3.0).abs() < 1e-12);
        assert!(p.plan.iter().all(|v| (v - 0.25).abs() < 1e-15));
    }

    #[test]
    fn rejects_bad_input() {
        assert!(solve_transport(&DMatrix::zeros(0, 3)).is_err());
        assert!(matches!(
            solve_transport(&dmatrix![0.0, f64::INFINITY]),
            Err(Error::NonFinite { row: 0, col: 1 })
        ));
    }

    #[test]
    fn certificate_square_and_rectangular() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let m = rng.random_range(1..9);
            let n = rng.random_range(1..9);
            let cost = random_int_cost(&mut rng, m, n);
            let sol = solve_with_certificate(&cost).unwrap();
            check_certificate(&cost, &sol);
            let plan = sol.into_plan();
            assert!(plan.marginal_error() < 1e-12);
            assert!(plan.plan.iter().all(|v| *v >= 0.0));
            assert!(plan.nonzeros() < m + n);
        }
    }

    #[test]
    fn heavily_degenerate_instances_terminate() {
        // Many equal costs and gcd(m, n) > 1 give long degenerate pivot runs.
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..50 {
            let (m, n) = (rng.random_range(2..13), rng.random_range(2..13));
            let cost = DMatrix::from_fn(m, n, |_, _| rng.random_range(0..3) as f64);
            let sol = solve_with_certificate(&cost).unwrap();
            check_certificate(&cost, &sol);
        }
        let sol = solve_with_certificate(&DMatrix::from_element(12, 8, 1.0)).unwrap();
        check_certificate(&DMatrix::from_element(12, 8, 1.0), &sol);
    }

    #[test]
    fn square_plans_are_scaled_permutations() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..100 {
            let n = rng.random_range(1..10);
            let cost = DMatrix::from_fn(n, n, |_, _| rng.random_range(0.0..1.0));
            let p = solve_transport(&cost).unwrap();
            assert!(p.as_permutation(1e-12).is_some());
        }
    }

    #[test]
    fn larger_instance_matches_dual_certificate() {
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        let cost = DMatrix::from_fn(40, 25, |_, _| rng.random_range(0.0..10.0));
        let sol = solve_with_certificate(&cost).unwrap();
        check_certificate(&cost, &sol);
    }
}
