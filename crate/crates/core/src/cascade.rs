//! Block lower-triangular chains of contact problems.
//!
//! Block `i` owns forces `z_i = (z_i1, z_i2)` and sees the blocks before it
//! only through coupling matrices `K̃_ij` (shape `n_i x n_j`, `j < i`):
//!
//! ```text
//! M_ii = [[K_i, -K_i], [-K_i, K_i]]      M_ij = [[K̃_ij, -K̃_ij], [-K̃_ij, K̃_ij]]
//! ```
//!
//! Once the earlier blocks are solved their contribution is a shift
//! `s_i = Σ_j K̃_ij (z_j1 - z_j2)` added to `q_i1` and subtracted from
//! `q_i2`. The sum `q_i1 + q_i2` is untouched, so each shifted block is again
//! a contact problem with `y* = (q_i1 + q_i2) / 2`.

use alloc::vec::Vec;

use crate::contact::{ContactLcp, ContactSolution, PgsOptions};
use crate::dense::{check_len, DenseMatrix, DenseVector};
use crate::error::{Error, Result};
use crate::lcp::LcpProblem;

#[derive(Debug, Clone, PartialEq)]
pub struct Coupling {
    /// Index `j` of the earlier block.
    pub source: usize,
    /// `K̃_ij`, `n_i x n_j`.
    pub matrix: DenseMatrix,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CascadeBlock {
    pub k: DenseMatrix,
    pub couplings: Vec<Coupling>,
    pub q_lower: DenseVector,
    pub q_upper: DenseVector,
}

impl CascadeBlock {
    pub fn new(
        k: DenseMatrix,
        couplings: Vec<Coupling>,
        q_lower: DenseVector,
        q_upper: DenseVector,
    ) -> Result<Self> {
        if !k.is_square() {
            return Err(Error::NotSquare {
                rows: k.rows(),
                cols: k.cols(),
            });
        }
        check_len(k.rows(), q_lower.len())?;
        check_len(k.rows(), q_upper.len())?;
        let block = Self {
            k,
            couplings,
            q_lower,
            q_upper,
        };
        if block.gap_sum().iter().any(|&s| !(s > 0.0)) {
            return Err(Error::InvariantViolation(
                "q_i1 + q_i2 must be strictly positive",
            ));
        }
        Ok(block)
    }

    pub fn dim(&self) -> usize {
        self.k.rows()
    }

    /// `q_i1 + q_i2`.
    pub fn gap_sum(&self) -> DenseVector {
        DenseVector::from_vec_unchecked(
            self.q_lower
                .iter()
                .zip(self.q_upper.iter())
                .map(|(a, b)| a + b)
                .collect(),
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CascadeProblem {
    blocks: Vec<CascadeBlock>,
}

impl CascadeProblem {
    /// Checks that every coupling points to an earlier block and has shape
    /// `n_i x n_j`.
    pub fn new(blocks: Vec<CascadeBlock>) -> Result<Self> {
        for (i, block) in blocks.iter().enumerate() {
            for c in &block.couplings {
                if c.source >= i {
                    return Err(Error::InvariantViolation(
                        "couplings must refer to an earlier block",
                    ));
                }
                check_len(block.dim(), c.matrix.rows())?;
                check_len(blocks[c.source].dim(), c.matrix.cols())?;
            }
        }
        Ok(Self { blocks })
    }

    pub fn blocks(&self) -> &[CascadeBlock] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// Total LCP dimension `2 Σ n_i`.
    pub fn dim(&self) -> usize {
        2 * self.blocks.iter().map(CascadeBlock::dim).sum::<usize>()
    }

    fn offsets(&self) -> Vec<usize> {
        let mut acc = 0;
        self.blocks
            .iter()
            .map(|b| {
                let at = acc;
                acc += 2 * b.dim();
                at
            })
            .collect()
    }

    /// The full LCP. `M` is block lower-triangular and generally not
    /// symmetric. Repeated couplings to the same block are summed.
    pub fn assemble_full(&self) -> LcpProblem {
        let size = self.dim();
        let offsets = self.offsets();
        let mut m = DenseMatrix::zeros(size, size);
        let place = |m: &mut DenseMatrix, row0: usize, col0: usize, a: &DenseMatrix| {
            let (r, c) = (a.rows(), a.cols());
            for i in 0..r {
                for j in 0..c {
                    let v = a.get(i, j);
                    let cells = [
                        (row0 + i, col0 + j, v),
                        (row0 + i, col0 + c + j, -v),
                        (row0 + r + i, col0 + j, -v),
                        (row0 + r + i, col0 + c + j, v),
                    ];
                    for (ri, ci, val) in cells {
                        let cur = m.get(ri, ci);
                        m.set(ri, ci, cur + val);
                    }
                }
            }
        };
        let mut q = Vec::with_capacity(size);
        for (i, block) in self.blocks.iter().enumerate() {
            place(&mut m, offsets[i], offsets[i], &block.k);
            for c in &block.couplings {
                place(&mut m, offsets[i], offsets[c.source], &c.matrix);
            }
            q.extend_from_slice(&block.q_lower);
            q.extend_from_slice(&block.q_upper);
        }
        LcpProblem::new(m, DenseVector::from_vec_unchecked(q)).expect("square by construction")
    }
}

/// The shifted offsets `(q̂_i1, q̂_i2)` of one block.
#[derive(Debug, Clone, PartialEq)]
pub struct ShiftedOffsets {
    pub lower: DenseVector,
    pub upper: DenseVector,
    /// `q_i1 + q_i2` of the unshifted block.
    pub sum: DenseVector,
}

impl ShiftedOffsets {
    /// `q̂_i2 = (q_i1 + q_i2) - q̂_i1` holds bit for bit.
    pub fn sum_preserved(&self) -> bool {
        self.lower
            .iter()
            .zip(self.upper.iter())
            .zip(self.sum.iter())
            .all(|((l, u), s)| *u == s - l)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CascadeSolution {
    pub blocks: Vec<ContactSolution>,
    pub shifted: Vec<ShiftedOffsets>,
}

impl CascadeSolution {
    /// Stacked `(z_11, z_12, z_21, z_22, ...)`.
    pub fn z(&self) -> DenseVector {
        let mut out = Vec::new();
        for b in &self.blocks {
            out.extend_from_slice(&b.f_lower);
            out.extend_from_slice(&b.f_upper);
        }
        DenseVector::from_vec_unchecked(out)
    }

    pub fn iterations(&self) -> usize {
        self.blocks.iter().map(|b| b.iterations).sum()
    }
}

/// Solves the blocks in order, each as a contact problem with its offsets
/// shifted by the net forces of the blocks it couples to.
pub fn solve_cascade(problem: &CascadeProblem, opts: &PgsOptions) -> Result<CascadeSolution> {
    let mut blocks: Vec<ContactSolution> = Vec::with_capacity(problem.len());
    let mut shifted = Vec::with_capacity(problem.len());
    for block in problem.blocks() {
        let sum = block.gap_sum();
        if sum.iter().any(|&s| !(s > 0.0)) {
            return Err(Error::InvariantViolation(
                "q_i1 + q_i2 must be strictly positive",
            ));
        }
        let mut lower = block.q_lower.clone().into_vec();
        for c in &block.couplings {
            let shift = c.matrix.mul_vec(&blocks[c.source].net_force)?;
            for (l, s) in lower.iter_mut().zip(shift.iter()) {
                *l += s;
            }
        }
        let upper: Vec<f64> = sum.iter().zip(&lower).map(|(s, l)| s - l).collect();
        let y_star: Vec<f64> = sum.iter().map(|s| 0.5 * s).collect();
        let q_tilde: Vec<f64> = lower.iter().zip(&y_star).map(|(l, y)| l - y).collect();

        let contact = ContactLcp::new(
            block.k.clone(),
            DenseVector::from_vec_unchecked(q_tilde),
            DenseVector::from_vec_unchecked(y_star),
        )?;
        blocks.push(contact.solve_structured(opts)?);
        shifted.push(ShiftedOffsets {
            lower: DenseVector::from_vec_unchecked(lower),
            upper: DenseVector::from_vec_unchecked(upper),
            sum,
        });
    }
    Ok(CascadeSolution { blocks, shifted })
}
