//! Contact instances from a simply supported Euler-Bernoulli beam.
//!
//! Stabilizers are the only points that can touch either wall. The
//! flexibility matrix collects the deflection at each stabilizer per unit
//! transverse force at every other, and the load vector is the deflection
//! caused by the external point loads with no contact at all.

use alloc::vec::Vec;

use crate::contact::ContactLcp;
use crate::dense::{DenseMatrix, DenseVector};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Stabilizer {
    pub position: f64,
    /// Clearance to either wall when centered.
    pub gap: f64,
}

/// Transverse point load, positive toward the upper wall.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Load {
    pub position: f64,
    pub magnitude: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BeamConfig {
    length: f64,
    bending_stiffness: f64,
    stabilizers: Vec<Stabilizer>,
    loads: Vec<Load>,
}

impl BeamConfig {
    pub fn new(
        length: f64,
        bending_stiffness: f64,
        stabilizers: Vec<Stabilizer>,
        loads: Vec<Load>,
    ) -> Result<Self> {
        if !(length > 0.0 && length.is_finite()) {
            return Err(Error::InvalidParameter("beam length must be positive"));
        }
        if !(bending_stiffness > 0.0 && bending_stiffness.is_finite()) {
            return Err(Error::InvalidParameter(
                "bending stiffness must be positive",
            ));
        }
        for (i, s) in stabilizers.iter().enumerate() {
            check_interior(s.position, length)?;
            if !(s.gap > 0.0 && s.gap.is_finite()) {
                return Err(Error::InvariantViolation(
                    "nominal gaps must be strictly positive",
                ));
            }
            if i > 0 {
                let prev = stabilizers[i - 1].position;
                if s.position == prev {
                    return Err(Error::DuplicatePositions {
                        first: i - 1,
                        second: i,
                    });
                }
                if s.position < prev {
                    return Err(Error::InvariantViolation(
                        "stabilizer positions must be strictly increasing",
                    ));
                }
            }
        }
        for l in &loads {
            check_interior(l.position, length)?;
            if !l.magnitude.is_finite() {
                return Err(Error::InvalidParameter("load magnitude must be finite"));
            }
        }
        Ok(Self {
            length,
            bending_stiffness,
            stabilizers,
            loads,
        })
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn bending_stiffness(&self) -> f64 {
        self.bending_stiffness
    }

    pub fn stabilizers(&self) -> &[Stabilizer] {
        &self.stabilizers
    }

    pub fn loads(&self) -> &[Load] {
        &self.loads
    }

    /// `K[i][j] = δ(x_i, x_j)`, symmetric by construction.
    pub fn flexibility_matrix(&self) -> Result<DenseMatrix> {
        let n = self.stabilizers.len();
        let mut k = DenseMatrix::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                let v = influence(
                    self.length,
                    self.bending_stiffness,
                    self.stabilizers[i].position,
                    self.stabilizers[j].position,
                )?;
                k.set(i, j, v);
                k.set(j, i, v);
            }
        }
        Ok(k)
    }

    /// `q̃_i = Σ P δ(x_i, a)` over all loads.
    pub fn load_vector(&self) -> Result<DenseVector> {
        let q = self
            .stabilizers
            .iter()
            .map(|s| {
                self.loads.iter().try_fold(0.0, |acc, l| {
                    Ok(acc
                        + l.magnitude
                            * influence(
                                self.length,
                                self.bending_stiffness,
                                s.position,
                                l.position,
                            )?)
                })
            })
            .collect::<Result<Vec<f64>>>()?;
        Ok(DenseVector::from_vec_unchecked(q))
    }

    pub fn to_contact_lcp(&self) -> Result<ContactLcp> {
        let y_star = self.stabilizers.iter().map(|s| s.gap).collect();
        ContactLcp::new(
            self.flexibility_matrix()?,
            self.load_vector()?,
            DenseVector::from_vec_unchecked(y_star),
        )
    }
}

fn check_interior(x: f64, length: f64) -> Result<()> {
    if x > 0.0 && x < length {
        Ok(())
    } else {
        Err(Error::OutOfDomain { value: x, length })
    }
}

/// Deflection at `x` due to a unit transverse force at `a` on a simply
/// supported beam of span `length` and bending stiffness `ei`:
/// `b x (L² - b² - x²) / (6 L EI)` with `b = L - a` for `x <= a`, and the
/// mirrored expression for `x > a`.
pub fn influence(length: f64, ei: f64, x: f64, a: f64) -> Result<f64> {
    check_interior(x, length)?;
    check_interior(a, length)?;
    let (x, a) = if x <= a { (x, a) } else { (a, x) };
    let b = length - a;
    Ok(b * x * (length * length - b * b - x * x) / (6.0 * length * ei))
}
