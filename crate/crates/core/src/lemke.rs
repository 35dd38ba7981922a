//! Lemke's complementary pivoting method with an all-ones covering vector.
//!
//! The tableau holds `w - M z - e z0 = q` in dense form. Columns are laid
//! out as `[w_0..w_n | z_0..z_n | z0 | rhs]`; since the starting basis is
//! `w`, the first block always equals the current basis inverse, which is
//! what the lexicographic ratio test reads.

use alloc::vec;
use alloc::vec::Vec;

use crate::dense::DenseVector;
use crate::error::{Error, Result};
use crate::lcp::{validate, LcpProblem, LcpSolution, SolverTag};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LemkeOptions {
    /// Pivot budget; `None` means `10 n^2` (at least 10).
    pub max_pivots: Option<usize>,
    /// Column entries at or below this are not eligible pivots.
    pub zero_tol: f64,
    /// Lexicographic ratio test. When off, ties go to the lowest row index.
    pub lexicographic: bool,
}

impl Default for LemkeOptions {
    fn default() -> Self {
        Self {
            max_pivots: None,
            zero_tol: 1e-10,
            lexicographic: true,
        }
    }
}

impl LemkeOptions {
    fn pivot_limit(&self, n: usize) -> usize {
        self.max_pivots.unwrap_or_else(|| (10 * n * n).max(10))
    }

    fn check(&self) -> Result<()> {
        if self.max_pivots == Some(0) {
            return Err(Error::InvalidParameter("max_pivots must be at least 1"));
        }
        if !(self.zero_tol > 0.0) {
            return Err(Error::InvalidParameter("zero_tol must be positive"));
        }
        Ok(())
    }
}

struct Tableau {
    n: usize,
    width: usize,
    data: Vec<f64>,
    /// Variable index held by each row: `w_i -> i`, `z_i -> n + i`, `z0 -> 2n`.
    basis: Vec<usize>,
}

impl Tableau {
    fn new(problem: &LcpProblem) -> Self {
        let n = problem.dim();
        let width = 2 * n + 2;
        let mut data = vec![0.0; n * width];
        for i in 0..n {
            let row = &mut data[i * width..(i + 1) * width];
            row[i] = 1.0;
            for j in 0..n {
                row[n + j] = -problem.m().get(i, j);
            }
            row[2 * n] = -1.0;
            row[2 * n + 1] = problem.q()[i];
        }
        Self {
            n,
            width,
            data,
            basis: (0..n).collect(),
        }
    }

    fn at(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.width + j]
    }

    fn rhs(&self, i: usize) -> f64 {
        self.at(i, self.width - 1)
    }

    fn artificial(&self) -> usize {
        2 * self.n
    }

    fn complement(&self, var: usize) -> usize {
        if var < self.n {
            var + self.n
        } else {
            var - self.n
        }
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let w = self.width;
        let p = self.at(row, col);
        for v in &mut self.data[row * w..(row + 1) * w] {
            *v /= p;
        }
        let pivot_row: Vec<f64> = self.data[row * w..(row + 1) * w].to_vec();
        for i in 0..self.n {
            if i == row {
                continue;
            }
            let factor = self.at(i, col);
            if factor == 0.0 {
                continue;
            }
            let target = &mut self.data[i * w..(i + 1) * w];
            for (t, pr) in target.iter_mut().zip(&pivot_row) {
                *t -= factor * pr;
            }
            target[col] = 0.0;
        }
        self.data[row * w + col] = 1.0;
        self.basis[row] = col;
    }

    /// Keeps the rows of `rows` minimizing `T[i][key] / T[i][col]` within `tol`.
    fn min_ratio_rows(&self, rows: &[usize], key: usize, col: usize, tol: f64) -> Vec<usize> {
        let ratio = |i: usize| self.at(i, key) / self.at(i, col);
        let best = rows.iter().map(|&i| ratio(i)).fold(f64::INFINITY, f64::min);
        let slack = tol * (1.0 + best.abs());
        rows.iter()
            .copied()
            .filter(|&i| ratio(i) <= best + slack)
            .collect()
    }

    fn leaving_row(&self, col: usize, opts: &LemkeOptions) -> Result<Option<usize>> {
        let eligible: Vec<usize> = (0..self.n)
            .filter(|&i| self.at(i, col) > opts.zero_tol)
            .collect();
        if eligible.is_empty() {
            return Ok(None);
        }
        let mut ties = self.min_ratio_rows(&eligible, self.width - 1, col, opts.zero_tol);
        if let Some(&row) = ties.iter().find(|&&i| self.basis[i] == self.artificial()) {
            return Ok(Some(row));
        }
        if !opts.lexicographic {
            return Ok(Some(ties[0]));
        }
        for key in 0..self.n {
            if ties.len() == 1 {
                break;
            }
            ties = self.min_ratio_rows(&ties, key, col, opts.zero_tol);
        }
        if ties.len() > 1 {
            return Err(Error::NumericalBreakdown {
                reason: "lexicographic ratio test left a tie",
            });
        }
        Ok(Some(ties[0]))
    }
}

/// Solves `(q, M)` by complementary pivoting.
///
/// Returns a point that validates as solved at `1e-8 (1 + |q|_inf)`.
/// `M` is not assumed symmetric.
pub fn lemke_solve(problem: &LcpProblem, opts: &LemkeOptions) -> Result<LcpSolution> {
    opts.check()?;
    let n = problem.dim();
    let q = problem.q();
    if q.iter().all(|&v| v >= 0.0) {
        return LcpSolution::from_z(problem, DenseVector::zeros(n), SolverTag::Lemke, 0);
    }

    let limit = opts.pivot_limit(n);
    let mut t = Tableau::new(problem);

    // z0 enters; the row with the most negative q leaves. Among equal
    // minima the last row keeps the tableau lexicographically positive.
    let qmin = q.min();
    let first = if opts.lexicographic {
        (0..n).rev().find(|&i| q[i] == qmin)
    } else {
        (0..n).find(|&i| q[i] == qmin)
    }
    .expect("q has a minimum");
    let mut entering = t.complement(t.basis[first]);
    t.pivot(first, t.artificial());
    let mut pivots = 1;

    loop {
        if pivots >= limit {
            return Err(Error::PivotLimitExceeded { limit });
        }
        let Some(row) = t.leaving_row(entering, opts)? else {
            return Err(Error::RayTermination { pivots });
        };
        let leaving = t.basis[row];
        t.pivot(row, entering);
        pivots += 1;
        if leaving == t.artificial() {
            break;
        }
        entering = t.complement(leaving);
    }

    let scale = 1.0 + q.norm_inf();
    let mut z = vec![0.0; n];
    for (row, &var) in t.basis.iter().enumerate() {
        if (n..2 * n).contains(&var) {
            let value = t.rhs(row);
            if value < -opts.zero_tol * scale {
                return Err(Error::NumericalBreakdown {
                    reason: "basic variable went negative",
                });
            }
            z[var - n] = value.max(0.0);
        }
    }
    let solution = LcpSolution::from_z(
        problem,
        DenseVector::from_vec_unchecked(z),
        SolverTag::Lemke,
        pivots,
    )?;
    if !validate(problem, &solution.z, 1e-8 * scale)?.solved {
        return Err(Error::NumericalBreakdown {
            reason: "terminal point fails validation",
        });
    }
    Ok(solution)
}
