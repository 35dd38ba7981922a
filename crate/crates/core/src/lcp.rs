//! The LCP `(q, M)`: find `z >= 0` with `w = q + M z >= 0` and `z'w = 0`.

use alloc::vec::Vec;
use core::fmt;

use crate::dense::{check_len, dot, DenseMatrix, DenseVector};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct LcpProblem {
    m: DenseMatrix,
    q: DenseVector,
}

impl LcpProblem {
    pub fn new(m: DenseMatrix, q: DenseVector) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::NotSquare {
                rows: m.rows(),
                cols: m.cols(),
            });
        }
        check_len(m.rows(), q.len())?;
        Ok(Self { m, q })
    }

    pub fn dim(&self) -> usize {
        self.q.len()
    }

    pub fn m(&self) -> &DenseMatrix {
        &self.m
    }

    pub fn q(&self) -> &DenseVector {
        &self.q
    }

    /// `w = q + M z`.
    pub fn assemble_w(&self, z: &[f64]) -> Result<DenseVector> {
        let mz = self.m.mul_vec(z)?;
        Ok(DenseVector::from_vec_unchecked(
            self.q.iter().zip(mz.iter()).map(|(q, v)| q + v).collect(),
        ))
    }
}

/// Free-function form of [`LcpProblem::assemble_w`].
pub fn assemble_w(problem: &LcpProblem, z: &DenseVector) -> Result<DenseVector> {
    problem.assemble_w(z)
}

/// Which procedure produced a candidate point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SolverTag {
    Lemke,
    Structured,
    Cascade,
    Enumeration,
    FeasiblePoint,
    External,
}

impl SolverTag {
    pub fn as_str(self) -> &'static str {
        match self {
            SolverTag::Lemke => "lemke",
            SolverTag::Structured => "pgs",
            SolverTag::Cascade => "cascade",
            SolverTag::Enumeration => "enumeration",
            SolverTag::FeasiblePoint => "feasible-point",
            SolverTag::External => "external",
        }
    }
}

impl fmt::Display for SolverTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A candidate point `z` together with `w = q + M z`.
#[derive(Debug, Clone, PartialEq)]
pub struct LcpSolution {
    pub z: DenseVector,
    pub w: DenseVector,
    pub complementarity_gap: f64,
    pub solver: SolverTag,
    pub iterations: usize,
}

impl LcpSolution {
    /// Recomputes `w` and the gap `z'w` from `z`.
    pub fn from_z(
        problem: &LcpProblem,
        z: DenseVector,
        solver: SolverTag,
        iterations: usize,
    ) -> Result<Self> {
        let w = problem.assemble_w(&z)?;
        let complementarity_gap = dot(&z, &w);
        Ok(Self {
            z,
            w,
            complementarity_gap,
            solver,
            iterations,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ViolationKind {
    /// `z_i < -tol`
    NegativeZ,
    /// `w_i < -tol`
    NegativeW,
    /// `z_i` and `w_i` both clearly positive.
    Complementarity,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Violation {
    pub index: usize,
    pub kind: ViolationKind,
    pub magnitude: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    pub min_z: f64,
    pub min_w: f64,
    pub comp_gap: f64,
    pub feasible: bool,
    pub solved: bool,
    pub violations: Vec<Violation>,
    /// Indices with `|z_i| <= tol` and `|w_i| <= tol`. Admissible, not violations.
    pub degenerate: Vec<usize>,
}

/// Checks the sign conditions (feasibility) and complementarity of `z`.
///
/// Sign conditions use the absolute `tol`; the complementarity gap is
/// compared against `tol * (1 + |q|_inf + |z|_inf)`.
pub fn validate(problem: &LcpProblem, z: &[f64], tol: f64) -> Result<ValidationReport> {
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter("tolerance must be positive"));
    }
    let w = problem.assemble_w(z)?;
    let scale = 1.0 + problem.q.norm_inf() + crate::dense::norm_inf(z);
    let gap_tol = tol * scale;

    let mut violations = Vec::new();
    let mut degenerate = Vec::new();
    for (i, (&zi, &wi)) in z.iter().zip(w.iter()).enumerate() {
        if zi < -tol {
            violations.push(Violation {
                index: i,
                kind: ViolationKind::NegativeZ,
                magnitude: -zi,
            });
        }
        if wi < -tol {
            violations.push(Violation {
                index: i,
                kind: ViolationKind::NegativeW,
                magnitude: -wi,
            });
        }
        if zi > tol && wi > tol && zi * wi > gap_tol {
            violations.push(Violation {
                index: i,
                kind: ViolationKind::Complementarity,
                magnitude: zi * wi,
            });
        }
        if zi.abs() <= tol && wi.abs() <= tol {
            degenerate.push(i);
        }
    }

    let min_z = z.iter().copied().fold(f64::INFINITY, f64::min);
    let min_w = w.min();
    let comp_gap = dot(z, &w);
    let feasible = min_z >= -tol && min_w >= -tol;
    let solved = feasible && comp_gap.abs() <= gap_tol;
    Ok(ValidationReport {
        min_z,
        min_w,
        comp_gap,
        feasible,
        solved,
        violations,
        degenerate,
    })
}
