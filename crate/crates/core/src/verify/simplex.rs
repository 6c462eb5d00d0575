//! Dense two-phase tableau simplex for `max cᵀx` subject to `Ax = b`, `x ≥ 0`.
//!
//! Pivots use the largest reduced cost until a run of degenerate pivots is
//! seen, then switch permanently to Bland's smallest-index rule, which
//! cannot cycle.

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
    IterationLimit,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub status: LpStatus,
    pub x: Vec<f64>,
    pub objective: f64,
    pub iterations: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimplexOptions {
    pub max_iterations: usize,
    /// Reduced costs above this are improving.
    pub optimality_tol: f64,
    /// Pivot elements must exceed this in magnitude.
    pub pivot_tol: f64,
    /// Phase-one residual below this counts as feasible.
    pub feasibility_tol: f64,
    /// Consecutive degenerate pivots before switching to Bland's rule.
    pub degenerate_streak: usize,
}

impl Default for SimplexOptions {
    fn default() -> Self {
        Self {
            max_iterations: 100_000,
            optimality_tol: 1e-12,
            pivot_tol: 1e-12,
            feasibility_tol: 1e-9,
            degenerate_streak: 50,
        }
    }
}

struct Tableau {
    rows: usize,
    /// Columns including artificials, excluding the right-hand side.
    cols: usize,
    data: Vec<f64>,
    /// Reduced costs, then minus the objective value in the last slot.
    z: Vec<f64>,
    basis: Vec<usize>,
}

impl Tableau {
    fn at(&self, r: usize, c: usize) -> f64 {
        self.data[r * (self.cols + 1) + c]
    }

    fn rhs(&self, r: usize) -> f64 {
        self.at(r, self.cols)
    }

    fn row(&self, r: usize) -> &[f64] {
        let w = self.cols + 1;
        &self.data[r * w..(r + 1) * w]
    }

    fn pivot(&mut self, pr: usize, pc: usize) {
        let w = self.cols + 1;
        let p = self.at(pr, pc);
        for v in &mut self.data[pr * w..(pr + 1) * w] {
            *v /= p;
        }
        let pivot_row = self.row(pr).to_vec();
        for r in 0..self.rows {
            if r == pr {
                continue;
            }
            let f = self.at(r, pc);
            if f != 0.0 {
                for (v, pv) in self.data[r * w..(r + 1) * w].iter_mut().zip(&pivot_row) {
                    *v -= f * pv;
                }
                self.data[r * w + pc] = 0.0;
            }
        }
        let f = self.z[pc];
        if f != 0.0 {
            for (v, pv) in self.z.iter_mut().zip(&pivot_row) {
                *v -= f * pv;
            }
            self.z[pc] = 0.0;
        }
        self.basis[pr] = pc;
    }

    /// Sets the reduced costs for objective `c` and prices out the basis.
    fn set_objective(&mut self, c: &[f64]) {
        self.z = c.to_vec();
        self.z.push(0.0);
        for r in 0..self.rows {
            let f = self.z[self.basis[r]];
            if f != 0.0 {
                let row = self.row(r).to_vec();
                for (v, pv) in self.z.iter_mut().zip(row) {
                    *v -= f * pv;
                }
            }
        }
    }

    fn objective(&self) -> f64 {
        -self.z[self.cols]
    }
}

enum PhaseEnd {
    Optimal,
    Unbounded,
    IterationLimit,
}

fn run_phase(t: &mut Tableau, allowed: usize, opts: &SimplexOptions, iterations: &mut usize) -> PhaseEnd {
    let mut bland = false;
    let mut streak = 0;
    loop {
        let entering = if bland {
            (0..allowed).find(|&j| t.z[j] > opts.optimality_tol)
        } else {
            (0..allowed)
                .filter(|&j| t.z[j] > opts.optimality_tol)
                .max_by(|&a, &b| t.z[a].total_cmp(&t.z[b]).then(b.cmp(&a)))
        };
        let Some(pc) = entering else {
            return PhaseEnd::Optimal;
        };
        if *iterations >= opts.max_iterations {
            return PhaseEnd::IterationLimit;
        }
        // Ratio test; ties go to the smallest basic index.
        let mut best: Option<(usize, f64)> = None;
        for r in 0..t.rows {
            let a = t.at(r, pc);
            if a > opts.pivot_tol {
                let ratio = t.rhs(r).max(0.0) / a;
                best = match best {
                    None => Some((r, ratio)),
                    Some((br, bv)) => {
                        if ratio < bv || (ratio == bv && t.basis[r] < t.basis[br]) {
                            Some((r, ratio))
                        } else {
                            Some((br, bv))
                        }
                    }
                };
            }
        }
        let Some((pr, ratio)) = best else {
            return PhaseEnd::Unbounded;
        };
        if ratio == 0.0 {
            streak += 1;
            if streak >= opts.degenerate_streak {
                bland = true;
            }
        } else {
            streak = 0;
        }
        t.pivot(pr, pc);
        *iterations += 1;
    }
}

/// Solves `max cᵀx` subject to `Ax = b`, `x ≥ 0`, with `a` given row-major.
pub fn solve(a: &[Vec<f64>], b: &[f64], c: &[f64], opts: &SimplexOptions) -> LpSolution {
    let m = a.len();
    let n = c.len();
    assert_eq!(b.len(), m, "one right-hand side per constraint");
    assert!(a.iter().all(|r| r.len() == n), "constraint rows must match the objective length");

    let cols = n + m;
    let mut data = vec![0.0; m * (cols + 1)];
    for r in 0..m {
        let sign = if b[r] < 0.0 { -1.0 } else { 1.0 };
        let row = &mut data[r * (cols + 1)..(r + 1) * (cols + 1)];
        for j in 0..n {
            row[j] = sign * a[r][j];
        }
        row[n + r] = 1.0;
        row[cols] = sign * b[r];
    }
    let mut t = Tableau { rows: m, cols, data, z: Vec::new(), basis: (n..n + m).collect() };
    let mut iterations = 0;

    let mut phase1 = vec![0.0; cols];
    phase1[n..].iter_mut().for_each(|v| *v = -1.0);
    t.set_objective(&phase1);
    let end = run_phase(&mut t, cols, opts, &mut iterations);
    let fail = |status, iterations| LpSolution { status, x: vec![0.0; n], objective: f64::NAN, iterations };
    if let PhaseEnd::IterationLimit = end {
        return fail(LpStatus::IterationLimit, iterations);
    }
    if t.objective() < -opts.feasibility_tol {
        return fail(LpStatus::Infeasible, iterations);
    }

    // Drive zero-level artificials out of the basis; rows where that is
    // impossible are redundant and stay pinned at zero.
    for r in 0..m {
        if t.basis[r] >= n {
            if let Some(j) = (0..n).find(|&j| t.at(r, j).abs() > 1e-9) {
                t.pivot(r, j);
            }
        }
    }

    let mut phase2 = c.to_vec();
    phase2.extend(std::iter::repeat_n(0.0, m));
    t.set_objective(&phase2);
    let status = match run_phase(&mut t, n, opts, &mut iterations) {
        PhaseEnd::Optimal => LpStatus::Optimal,
        PhaseEnd::Unbounded => LpStatus::Unbounded,
        PhaseEnd::IterationLimit => LpStatus::IterationLimit,
    };
    let mut x = vec![0.0; n];
    for r in 0..m {
        if t.basis[r] < n {
            x[t.basis[r]] = t.rhs(r);
        }
    }
    let objective = c.iter().zip(&x).map(|(ci, xi)| ci * xi).sum();
    LpSolution { status, x, objective, iterations }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_lp() {
        // max x + y  s.t.  x + 2y + s1 = 4,  3x + y + s2 = 6
        let a = vec![vec![1.0, 2.0, 1.0, 0.0], vec![3.0, 1.0, 0.0, 1.0]];
        let s = solve(&a, &[4.0, 6.0], &[1.0, 1.0, 0.0, 0.0], &SimplexOptions::default());
        assert_eq!(s.status, LpStatus::Optimal);
        assert!((s.objective - 2.8).abs() < 1e-12);
        assert!((s.x[0] - 1.6).abs() < 1e-12 && (s.x[1] - 1.2).abs() < 1e-12);
    }

    #[test]
    fn infeasible() {
        let a = vec![vec![1.0, 1.0], vec![1.0, 1.0]];
        let s = solve(&a, &[1.0, 2.0], &[1.0, 0.0], &SimplexOptions::default());
        assert_eq!(s.status, LpStatus::Infeasible);
    }

    #[test]
    fn unbounded() {
        let a = vec![vec![1.0, -1.0]];
        let s = solve(&a, &[1.0], &[0.0, 1.0], &SimplexOptions::default());
        assert_eq!(s.status, LpStatus::Unbounded);
    }

    #[test]
    fn redundant_rows() {
        let a = vec![vec![1.0, 1.0, 1.0], vec![2.0, 2.0, 2.0]];
        let s = solve(&a, &[1.0, 2.0], &[0.0, 3.0, 1.0], &SimplexOptions::default());
        assert_eq!(s.status, LpStatus::Optimal);
        assert!((s.objective - 3.0).abs() < 1e-12);
    }

    #[test]
    fn negative_rhs() {
        // x - y = -1, x + y = 3  =>  x = 1, y = 2
        let a = vec![vec![1.0, -1.0], vec![1.0, 1.0]];
        let s = solve(&a, &[-1.0, 3.0], &[1.0, 0.0], &SimplexOptions::default());
        assert_eq!(s.status, LpStatus::Optimal);
        assert!((s.x[0] - 1.0).abs() < 1e-12 && (s.x[1] - 2.0).abs() < 1e-12);
    }

    #[test]
    fn iteration_limit_is_reported() {
        let a = vec![vec![1.0, 2.0, 1.0, 0.0], vec![3.0, 1.0, 0.0, 1.0]];
        let opts = SimplexOptions { max_iterations: 1, ..Default::default() };
        let s = solve(&a, &[4.0, 6.0], &[1.0, 1.0, 0.0, 0.0], &opts);
        assert_eq!(s.status, LpStatus::IterationLimit);
    }
}
