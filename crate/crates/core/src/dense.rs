//! Small dense linear algebra: row-major matrices, finite vectors, and a
//! Cholesky factorization for symmetric positive definite systems.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Deref, Index};

use crate::error::{Error, Result};

/// Relative tolerance for the symmetry check in [`spd_factor`].
pub const SYMMETRY_TOL: f64 = 1e-10;

/// A vector whose entries are all finite.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct DenseVector(Vec<f64>);

impl DenseVector {
    pub fn new(entries: Vec<f64>) -> Result<Self> {
        check_finite(&entries)?;
        Ok(Self(entries))
    }

    pub fn zeros(len: usize) -> Self {
        Self(vec![0.0; len])
    }

    /// Wraps entries produced by arithmetic on finite inputs.
    pub(crate) fn from_vec_unchecked(entries: Vec<f64>) -> Self {
        Self(entries)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }

    /// Largest absolute entry, zero for an empty vector.
    pub fn norm_inf(&self) -> f64 {
        norm_inf(&self.0)
    }

    /// Smallest entry, `+inf` for an empty vector.
    pub fn min(&self) -> f64 {
        self.0.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn dot(&self, other: &[f64]) -> Result<f64> {
        check_len(self.len(), other.len())?;
        Ok(dot(&self.0, other))
    }

    /// Concatenates `self` and `tail`.
    pub fn concat(&self, tail: &[f64]) -> Self {
        let mut out = Vec::with_capacity(self.len() + tail.len());
        out.extend_from_slice(&self.0);
        out.extend_from_slice(tail);
        Self(out)
    }
}

impl Deref for DenseVector {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}

impl From<DenseVector> for Vec<f64> {
    fn from(v: DenseVector) -> Self {
        v.0
    }
}

impl TryFrom<Vec<f64>> for DenseVector {
    type Error = Error;

    fn try_from(v: Vec<f64>) -> Result<Self> {
        Self::new(v)
    }
}

/// Row-major dense matrix with finite entries.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::BadShape {
                rows,
                cols,
                found: data.len(),
            });
        }
        check_finite(&data)?;
        Ok(Self { rows, cols, data })
    }

    /// Builds a matrix from equally long rows.
    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for row in rows {
            let row = row.as_ref();
            check_len(cols, row.len())?;
            data.extend_from_slice(row);
        }
        Self::new(rows.len(), cols, data)
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = 1.0;
        }
        m
    }

    pub(crate) fn from_fn(
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> f64,
    ) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    pub(crate) fn set(&mut self, i: usize, j: usize, value: f64) {
        self.data[i * self.cols + j] = value;
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i))
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> f64 {
        norm_inf(&self.data)
    }

    /// Induced infinity norm (maximum absolute row sum).
    pub fn norm_inf(&self) -> f64 {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(|v| v.abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// `A x` for a slice `x`.
    pub fn mul_vec(&self, x: &[f64]) -> Result<DenseVector> {
        check_len(self.cols, x.len())?;
        Ok(DenseVector(
            (0..self.rows).map(|i| dot(self.row(i), x)).collect(),
        ))
    }

    /// `x' A x`.
    pub fn quad_form(&self, x: &[f64]) -> Result<f64> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let ax = self.mul_vec(x)?;
        Ok(dot(x, &ax))
    }

    /// Checks `|a_ij - a_ji| <= tol * max|a|` for every pair.
    pub fn check_symmetric(&self, tol: f64) -> Result<()> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let bound = tol * self.max_abs();
        for i in 0..self.rows {
            for j in (i + 1)..self.cols {
                if (self.get(i, j) - self.get(j, i)).abs() > bound {
                    return Err(Error::NotSymmetric { row: i, col: j });
                }
            }
        }
        Ok(())
    }
}

impl Index<(usize, usize)> for DenseMatrix {
    type Output = f64;

    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.cols + j]
    }
}

/// Lower-triangular factor `L` with `L L' = A`.
#[derive(Debug, Clone, PartialEq)]
pub struct Cholesky {
    lower: DenseMatrix,
}

impl Cholesky {
    pub fn dim(&self) -> usize {
        self.lower.rows
    }

    pub fn lower(&self) -> &DenseMatrix {
        &self.lower
    }

    /// Solves `A x = b` by forward and back substitution.
    pub fn solve(&self, b: &[f64]) -> Result<DenseVector> {
        let n = self.dim();
        check_len(n, b.len())?;
        let l = &self.lower;
        let mut y = b.to_vec();
        for i in 0..n {
            let mut s = y[i];
            for (k, yk) in y.iter().enumerate().take(i) {
                s -= l.get(i, k) * yk;
            }
            y[i] = s / l.get(i, i);
        }
        for i in (0..n).rev() {
            let mut s = y[i];
            for (k, yk) in y.iter().enumerate().skip(i + 1) {
                s -= l.get(k, i) * yk;
            }
            y[i] = s / l.get(i, i);
        }
        Ok(DenseVector(y))
    }

    /// `L L'`.
    pub fn reconstruct(&self) -> DenseMatrix {
        let n = self.dim();
        let l = &self.lower;
        DenseMatrix::from_fn(n, n, |i, j| {
            (0..=i.min(j)).map(|k| l.get(i, k) * l.get(j, k)).sum()
        })
    }
}

/// Cholesky factorization without pivoting.
///
/// The input must be symmetric within [`SYMMETRY_TOL`] relative to its
/// largest entry. Only the lower triangle is read afterwards.
pub fn spd_factor(a: &DenseMatrix) -> Result<Cholesky> {
    a.check_symmetric(SYMMETRY_TOL)?;
    let n = a.rows;
    let mut l = DenseMatrix::zeros(n, n);
    for j in 0..n {
        let mut pivot = a.get(j, j);
        for k in 0..j {
            pivot -= l.get(j, k) * l.get(j, k);
        }
        if !(pivot > 0.0) {
            return Err(Error::NotPositiveDefinite { index: j, pivot });
        }
        let diag = libm::sqrt(pivot);
        l.set(j, j, diag);
        for i in (j + 1)..n {
            let mut s = a.get(i, j);
            for k in 0..j {
                s -= l.get(i, k) * l.get(j, k);
            }
            l.set(i, j, s / diag);
        }
    }
    Ok(Cholesky { lower: l })
}

pub fn spd_solve(factor: &Cholesky, b: &DenseVector) -> Result<DenseVector> {
    factor.solve(b)
}

pub fn matvec(a: &DenseMatrix, x: &DenseVector) -> Result<DenseVector> {
    a.mul_vec(x)
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm_inf(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |acc, x| acc.max(x.abs()))
}

pub(crate) fn check_len(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(Error::DimensionMismatch { expected, found });
    }
    Ok(())
}

fn check_finite(values: &[f64]) -> Result<()> {
    match values.iter().position(|v| !v.is_finite()) {
        Some(index) => Err(Error::NonFinite { index }),
        None => Ok(()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[f64]]) -> DenseMatrix {
        DenseMatrix::from_rows(rows).unwrap()
    }

    fn v(x: &[f64]) -> DenseVector {
        DenseVector::new(x.to_vec()).unwrap()
    }

    fn max_diff(a: &DenseMatrix, b: &DenseMatrix) -> f64 {
        a.as_slice()
            .iter()
            .zip(b.as_slice())
            .fold(0.0, |acc, (x, y)| acc.max((x - y).abs()))
    }

    #[test]
    fn factor_identity() {
        let f = spd_factor(&DenseMatrix::identity(2)).unwrap();
        assert_eq!(f.lower(), &DenseMatrix::identity(2));
    }

    #[test]
    fn factor_two_by_two() {
        let a = m(&[&[2.0, 1.0], &[1.0, 2.0]]);
        let f = spd_factor(&a).unwrap();
        let expected = m(&[&[2f64.sqrt(), 0.0], &[1.0 / 2f64.sqrt(), 1.5f64.sqrt()]]);
        assert!(max_diff(f.lower(), &expected) < 1e-15);
        assert!(max_diff(&f.reconstruct(), &a) <= 1e-12 * a.max_abs());
    }

    #[test]
    fn indefinite_is_rejected() {
        let a = m(&[&[1.0, 2.0], &[2.0, 1.0]]);
        assert!(matches!(
            spd_factor(&a),
            Err(Error::NotPositiveDefinite { index: 1, .. })
        ));
    }

    #[test]
    fn asymmetric_is_rejected_not_symmetrized() {
        let a = m(&[&[2.0, 1.0], &[1.0 + 1e-6, 2.0]]);
        assert_eq!(spd_factor(&a), Err(Error::NotSymmetric { row: 0, col: 1 }));
        // within the relative tolerance is fine
        let b = m(&[&[2.0, 1.0], &[1.0 + 1e-12, 2.0]]);
        assert!(spd_factor(&b).is_ok());
    }

    #[test]
    fn solve_examples() {
        let id = spd_factor(&DenseMatrix::identity(2)).unwrap();
        assert_eq!(
            spd_solve(&id, &v(&[3.0, -1.0])).unwrap().as_slice(),
            &[3.0, -1.0]
        );

        let f = spd_factor(&m(&[&[2.0, 1.0], &[1.0, 2.0]])).unwrap();
        let x = spd_solve(&f, &v(&[1.0, 1.0])).unwrap();
        assert!((x[0] - 1.0 / 3.0).abs() < 1e-15 && (x[1] - 1.0 / 3.0).abs() < 1e-15);

        let one = spd_factor(&m(&[&[1.0]])).unwrap();
        assert_eq!(spd_solve(&one, &v(&[-1.0])).unwrap().as_slice(), &[-1.0]);

        assert_eq!(
            spd_solve(&one, &v(&[1.0, 2.0])),
            Err(Error::DimensionMismatch {
                expected: 1,
                found: 2
            })
        );
    }

    #[test]
    fn matvec_examples() {
        let id = DenseMatrix::identity(2);
        assert_eq!(
            matvec(&id, &v(&[1.0, 2.0])).unwrap().as_slice(),
            &[1.0, 2.0]
        );
        let lap = m(&[&[1.0, -1.0], &[-1.0, 1.0]]);
        assert_eq!(
            matvec(&lap, &v(&[1.0, 1.0])).unwrap().as_slice(),
            &[0.0, 0.0]
        );
        let a = m(&[&[2.0, 1.0], &[1.0, 2.0]]);
        let y = matvec(&a, &v(&[7.0 / 6.0, -1.0 / 3.0])).unwrap();
        assert!((y[0] - 2.0).abs() < 1e-15 && (y[1] - 0.5).abs() < 1e-15);
        assert!(matches!(
            matvec(&a, &v(&[1.0])),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn construction_rejects_bad_input() {
        assert!(matches!(
            DenseMatrix::new(2, 2, vec![1.0; 3]),
            Err(Error::BadShape { .. })
        ));
        assert_eq!(
            DenseVector::new(vec![1.0, f64::NAN]),
            Err(Error::NonFinite { index: 1 })
        );
        assert!(DenseMatrix::from_rows(&[vec![1.0, 2.0], vec![3.0]]).is_err());
    }
}
