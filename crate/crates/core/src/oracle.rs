//! Brute-force support enumeration for small LCPs.
//!
//! Every support `S` of `{0..n}` is tried: `z_S` solves `M_SS z_S = -q_S`,
//! the rest of `z` is zero, and the point is kept if it validates. Singular
//! supports are not skipped. When `M_SS z_S = -q_S` is consistent the whole
//! affine family of solutions is intersected with the sign conditions; a
//! family with more than one admissible point proves non-uniqueness, which
//! vertex enumeration alone cannot see.
//!
//! This is a test oracle, not a solver: the cost is `O(2^n n^3)`.

use alloc::vec;
use alloc::vec::Vec;

use crate::dense::{norm_inf, DenseVector};
use crate::error::{Error, Result};
use crate::lcp::{validate, LcpProblem, LcpSolution, SolverTag};

/// Default enumeration cap: problems up to `2^14` supports.
pub const DEFAULT_CAP: usize = 14;

/// A pivot below this times `|M_SS|_inf` marks the support as singular.
pub const SINGULAR_PIVOT_TOL: f64 = 1e-10;

/// A singular system is consistent when its residual is at most this times
/// `1 + |q_S|_inf`.
pub const CONSISTENCY_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct EnumeratedSolution {
    pub solution: LcpSolution,
    /// Bitmask of the first support that produced this point.
    pub support: u64,
    /// Number of supports that produced it (after deduplication).
    pub multiplicity: usize,
}

/// Admissible points of a consistent singular support.
#[derive(Debug, Clone, PartialEq)]
pub struct SolutionFamily {
    /// Distinct vertices of the admissible set, each an LCP solution.
    pub vertices: Vec<DenseVector>,
    /// A direction along which the admissible set is unbounded, if any.
    pub ray: Option<DenseVector>,
}

impl SolutionFamily {
    /// More than one point satisfies the support's conditions.
    pub fn is_multiple(&self) -> bool {
        self.vertices.len() > 1 || (!self.vertices.is_empty() && self.ray.is_some())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SingularSupport {
    pub support: u64,
    pub consistent: bool,
    /// Present for consistent supports whose family meets the sign conditions.
    pub family: Option<SolutionFamily>,
}

impl SingularSupport {
    pub fn signals_multiple(&self) -> bool {
        self.family
            .as_ref()
            .is_some_and(SolutionFamily::is_multiple)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnumerationResult {
    /// Deduplicated solutions ordered by the support that first produced them.
    pub solutions: Vec<EnumeratedSolution>,
    /// Singular supports in ascending bitmask order.
    pub singular_supports: Vec<SingularSupport>,
    pub exhaustive: bool,
}

impl EnumerationResult {
    pub fn verdict(&self) -> Verdict {
        let family = self
            .singular_supports
            .iter()
            .any(SingularSupport::signals_multiple);
        match self.solutions.as_slice() {
            [] => Verdict::None,
            [only] if !family => Verdict::Unique(only.solution.z.clone()),
            _ => Verdict::Multiple,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Verdict {
    Unique(DenseVector),
    Multiple,
    None,
}

/// Lists the support indices of a bitmask.
pub fn support_indices(mask: u64, n: usize) -> Vec<usize> {
    (0..n).filter(|&i| mask >> i & 1 == 1).collect()
}

/// Enumerates all `2^n` supports.
///
/// Candidates are validated at `tol` and deduplicated at `tol` in the max
/// norm.
pub fn enumerate_solutions(
    problem: &LcpProblem,
    tol: f64,
    cap: usize,
) -> Result<EnumerationResult> {
    let n = problem.dim();
    if n > cap || n >= 64 {
        return Err(Error::DimensionTooLarge { dim: n, cap });
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter("tolerance must be positive"));
    }
    let m = problem.m();
    let q = problem.q();
    let mut solutions: Vec<EnumeratedSolution> = Vec::new();
    let mut singular_supports = Vec::new();

    let offer = |z: Vec<f64>, mask: u64, out: &mut Vec<EnumeratedSolution>| -> Result<()> {
        if !validate(problem, &z, tol)?.solved {
            return Ok(());
        }
        if let Some(hit) = out.iter_mut().find(|s| max_dist(&s.solution.z, &z) <= tol) {
            hit.multiplicity += 1;
            return Ok(());
        }
        let solution = LcpSolution::from_z(
            problem,
            DenseVector::from_vec_unchecked(z),
            SolverTag::Enumeration,
            0,
        )?;
        out.push(EnumeratedSolution {
            solution,
            support: mask,
            multiplicity: 1,
        });
        Ok(())
    };

    for mask in 0u64..(1u64 << n) {
        let idx = support_indices(mask, n);
        let k = idx.len();
        let a: Vec<f64> = idx
            .iter()
            .flat_map(|&i| idx.iter().map(move |&j| m.get(i, j)))
            .collect();
        let b: Vec<f64> = idx.iter().map(|&i| -q[i]).collect();
        let sys = Reduced::new(&a, &b, k, k);

        if sys.rank == k {
            let mut z = vec![0.0; n];
            for (&i, v) in idx.iter().zip(&sys.particular) {
                z[i] = *v;
            }
            offer(z, mask, &mut solutions)?;
            continue;
        }

        let consistent = sys.residual(&a, &b, k) <= CONSISTENCY_TOL * (1.0 + norm_inf(&b));
        let family = if consistent {
            admissible_family(problem, &idx, &sys, tol)
        } else {
            None
        };
        if let Some(f) = &family {
            for v in &f.vertices {
                offer(v.as_slice().to_vec(), mask, &mut solutions)?;
            }
        }
        singular_supports.push(SingularSupport {
            support: mask,
            consistent,
            family,
        });
    }

    Ok(EnumerationResult {
        solutions,
        singular_supports,
        exhaustive: true,
    })
}

/// Enumerates with the default cap and classifies the solution set.
pub fn certify_unique(problem: &LcpProblem, tol: f64) -> Result<Verdict> {
    Ok(enumerate_solutions(problem, tol, DEFAULT_CAP)?.verdict())
}

fn max_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .fold(0.0, |acc, (x, y)| acc.max((x - y).abs()))
}

/// Intersects `{z : z_S = x_p + N t, z_rest = 0}` with `z >= 0` and
/// `w_rest >= 0` (`w_S` is zero on the whole family).
fn admissible_family(
    problem: &LcpProblem,
    idx: &[usize],
    sys: &Reduced,
    tol: f64,
) -> Option<SolutionFamily> {
    let n = problem.dim();
    let m = problem.m();
    let q = problem.q();
    let dof = sys.null_basis.len();

    // Map parameters t to full z.
    let base: Vec<f64> = {
        let mut z = vec![0.0; n];
        for (&i, v) in idx.iter().zip(&sys.particular) {
            z[i] = *v;
        }
        z
    };
    let dirs: Vec<Vec<f64>> = sys
        .null_basis
        .iter()
        .map(|nb| {
            let mut z = vec![0.0; n];
            for (&i, v) in idx.iter().zip(nb) {
                z[i] = *v;
            }
            z
        })
        .collect();

    // Constraints g_r . t + h_r >= 0.
    let mut g: Vec<Vec<f64>> = Vec::with_capacity(n);
    let mut h: Vec<f64> = Vec::with_capacity(n);
    for i in 0..n {
        if idx.contains(&i) {
            g.push(dirs.iter().map(|d| d[i]).collect());
            h.push(base[i]);
        } else {
            let row = m.row(i);
            g.push(dirs.iter().map(|d| dot(row, d)).collect());
            h.push(q[i] + dot(row, &base));
        }
    }

    let point = |t: &[f64]| -> Vec<f64> {
        let mut z = base.clone();
        for (d, ti) in dirs.iter().zip(t) {
            for (zi, di) in z.iter_mut().zip(d) {
                *zi += ti * di;
            }
        }
        z
    };

    let mut vertices: Vec<DenseVector> = Vec::new();
    for rows in subsets(n, dof) {
        let a: Vec<f64> = rows.iter().flat_map(|&r| g[r].iter().copied()).collect();
        let b: Vec<f64> = rows.iter().map(|&r| -h[r]).collect();
        let sub = Reduced::new(&a, &b, dof, dof);
        if sub.rank < dof {
            continue;
        }
        let t = &sub.particular;
        let feasible = (0..n).all(|r| dot(&g[r], t) + h[r] >= -tol);
        if !feasible {
            continue;
        }
        let z = point(t);
        if vertices.iter().all(|v| max_dist(v, &z) > tol) {
            vertices.push(DenseVector::from_vec_unchecked(z));
        }
    }
    if vertices.is_empty() {
        return None;
    }

    let ray = recession_ray(&g, dof, tol).map(|r| {
        let mut z = vec![0.0; n];
        for (d, ri) in dirs.iter().zip(&r) {
            for (zi, di) in z.iter_mut().zip(d) {
                *zi += ri * di;
            }
        }
        let scale = norm_inf(&z);
        DenseVector::from_vec_unchecked(z.iter().map(|v| v / scale).collect())
    });
    Some(SolutionFamily { vertices, ray })
}

/// A nonzero `r` with `g_r . r >= 0` for every constraint, if one exists.
/// The cone is pointed, so it suffices to test candidate extreme rays.
fn recession_ray(g: &[Vec<f64>], dof: usize, tol: f64) -> Option<Vec<f64>> {
    let admissible = |r: &[f64]| {
        let scale = norm_inf(r);
        g.iter()
            .all(|row| dot(row, r) >= -tol * scale * (1.0 + norm_inf(row)))
    };
    if dof == 1 {
        return [[1.0], [-1.0]]
            .into_iter()
            .find(|r| admissible(r))
            .map(|r| r.to_vec());
    }
    for rows in subsets(g.len(), dof - 1) {
        let a: Vec<f64> = rows.iter().flat_map(|&r| g[r].iter().copied()).collect();
        let b = vec![0.0; rows.len()];
        let sub = Reduced::new(&a, &b, rows.len(), dof);
        if sub.null_basis.len() != 1 {
            continue;
        }
        let r = &sub.null_basis[0];
        if admissible(r) {
            return Some(r.clone());
        }
        let neg: Vec<f64> = r.iter().map(|v| -v).collect();
        if admissible(&neg) {
            return Some(neg);
        }
    }
    None
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// All `k`-subsets of `0..n` in lexicographic order.
fn subsets(n: usize, k: usize) -> impl Iterator<Item = Vec<usize>> {
    let mut current: Option<Vec<usize>> = if k <= n { Some((0..k).collect()) } else { None };
    core::iter::from_fn(move || {
        let out = current.clone()?;
        // advance
        let mut next = out.clone();
        let mut i = k;
        loop {
            if i == 0 {
                current = None;
                break;
            }
            i -= 1;
            if next[i] < n - k + i {
                next[i] += 1;
                for j in (i + 1)..k {
                    next[j] = next[j - 1] + 1;
                }
                current = Some(next);
                break;
            }
        }
        Some(out)
    })
}

/// Gauss-Jordan elimination with complete pivoting on `A x = b`
/// (`A` is `rows x cols`, row-major).
struct Reduced {
    rank: usize,
    /// Basic solution with free variables at zero.
    particular: Vec<f64>,
    /// One vector per free variable.
    null_basis: Vec<Vec<f64>>,
}

impl Reduced {
    fn new(a: &[f64], b: &[f64], rows: usize, cols: usize) -> Self {
        let norm = (0..rows)
            .map(|i| {
                a[i * cols..(i + 1) * cols]
                    .iter()
                    .map(|v| v.abs())
                    .sum::<f64>()
            })
            .fold(0.0, f64::max);
        let threshold = SINGULAR_PIVOT_TOL * norm;
        let mut t = a.to_vec();
        let mut rhs = b.to_vec();
        let mut perm: Vec<usize> = (0..cols).collect();
        let mut rank = 0;
        while rank < rows.min(cols) {
            let mut best = (rank, rank, 0.0f64);
            for i in rank..rows {
                for j in rank..cols {
                    let v = t[i * cols + j].abs();
                    if v > best.2 {
                        best = (i, j, v);
                    }
                }
            }
            if !(best.2 > threshold) {
                break;
            }
            let (pr, pc, _) = best;
            if pr != rank {
                for j in 0..cols {
                    t.swap(pr * cols + j, rank * cols + j);
                }
                rhs.swap(pr, rank);
            }
            if pc != rank {
                for i in 0..rows {
                    t.swap(i * cols + pc, i * cols + rank);
                }
                perm.swap(pc, rank);
            }
            let p = t[rank * cols + rank];
            for j in 0..cols {
                t[rank * cols + j] /= p;
            }
            rhs[rank] /= p;
            for i in 0..rows {
                if i == rank {
                    continue;
                }
                let f = t[i * cols + rank];
                if f == 0.0 {
                    continue;
                }
                for j in 0..cols {
                    t[i * cols + j] -= f * t[rank * cols + j];
                }
                rhs[i] -= f * rhs[rank];
            }
            rank += 1;
        }

        let mut particular = vec![0.0; cols];
        for r in 0..rank {
            particular[perm[r]] = rhs[r];
        }
        let null_basis = (rank..cols)
            .map(|f| {
                let mut x = vec![0.0; cols];
                x[perm[f]] = 1.0;
                for r in 0..rank {
                    x[perm[r]] = -t[r * cols + f];
                }
                x
            })
            .collect();
        Self {
            rank,
            particular,
            null_basis,
        }
    }

    fn residual(&self, a: &[f64], b: &[f64], cols: usize) -> f64 {
        b.iter()
            .enumerate()
            .map(|(i, bi)| (dot(&a[i * cols..(i + 1) * cols], &self.particular) - bi).abs())
            .fold(0.0, f64::max)
    }
}
