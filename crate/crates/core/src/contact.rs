//! Two-sided contact LCP.
//!
//! Each of `n` stabilizers sits between a lower and an upper wall with
//! nominal clearance `y*_i > 0` on either side. `K` maps contact forces to
//! displacements (a flexibility matrix, even though it is often called a
//! stiffness matrix in the drilling literature), and `q̃` is the
//! displacement caused by external loads:
//!
//! ```text
//! γ_l =  K (F_l - F_u) + q̃ + y*
//! γ_u = -K (F_l - F_u) - q̃ + y* = 2 y* - γ_l
//! ```
//!
//! At any solution `F_l,i F_u,i = 0`, so the pair is recovered from the
//! signed net force `d = F_l - F_u` by taking positive and negative parts.

use alloc::boxed::Box;
use alloc::vec;
use alloc::vec::Vec;

use crate::dense::{check_len, dot, spd_factor, Cholesky, DenseMatrix, DenseVector};
use crate::error::{Error, Result};
use crate::lcp::{LcpProblem, LcpSolution, SolverTag};

#[derive(Debug, Clone, PartialEq)]
pub struct ContactLcp {
    k: DenseMatrix,
    factor: Cholesky,
    q_tilde: DenseVector,
    y_star: DenseVector,
}

impl ContactLcp {
    /// `k` must be symmetric positive definite and every `y_star` entry
    /// strictly positive.
    pub fn new(k: DenseMatrix, q_tilde: DenseVector, y_star: DenseVector) -> Result<Self> {
        let factor = spd_factor(&k)?;
        check_len(k.rows(), q_tilde.len())?;
        check_len(k.rows(), y_star.len())?;
        if y_star.iter().any(|&y| !(y > 0.0)) {
            return Err(Error::InvariantViolation(
                "nominal gaps must be strictly positive",
            ));
        }
        Ok(Self {
            k,
            factor,
            q_tilde,
            y_star,
        })
    }

    pub fn dim(&self) -> usize {
        self.y_star.len()
    }

    pub fn k(&self) -> &DenseMatrix {
        &self.k
    }

    pub fn q_tilde(&self) -> &DenseVector {
        &self.q_tilde
    }

    pub fn y_star(&self) -> &DenseVector {
        &self.y_star
    }

    /// `q̃ + y*`, the lower block of `q`.
    fn lower_offset(&self) -> Vec<f64> {
        self.q_tilde
            .iter()
            .zip(self.y_star.iter())
            .map(|(q, y)| q + y)
            .collect()
    }

    /// The `2n` LCP with `M = [[K, -K], [-K, K]]` and
    /// `q = (q̃ + y*, -q̃ + y*)`, lower block first.
    pub fn assemble(&self) -> LcpProblem {
        let n = self.dim();
        let m = DenseMatrix::from_fn(2 * n, 2 * n, |i, j| {
            let v = self.k.get(i % n, j % n);
            if (i < n) == (j < n) {
                v
            } else {
                -v
            }
        });
        let mut q = self.lower_offset();
        q.extend(
            self.q_tilde
                .iter()
                .zip(self.y_star.iter())
                .map(|(q, y)| -q + y),
        );
        LcpProblem::new(m, DenseVector::from_vec_unchecked(q)).expect("square by construction")
    }

    /// `M z` evaluated through the block structure as `(K d, -K d)` with
    /// `d = z_l - z_u`. Directions `(u, u)` give an exact zero.
    pub fn apply_m(&self, z: &[f64]) -> Result<DenseVector> {
        let n = self.dim();
        check_len(2 * n, z.len())?;
        let d: Vec<f64> = (0..n).map(|i| z[i] - z[n + i]).collect();
        let kd = self.k.mul_vec(&d)?;
        let mut out = kd.as_slice().to_vec();
        out.extend(kd.iter().map(|v| -v));
        Ok(DenseVector::from_vec_unchecked(out))
    }

    /// Gaps for a signed net force `d`: `γ_l = K d + q̃ + y*`, `γ_u = 2y* - γ_l`.
    pub fn gaps(&self, d: &[f64]) -> Result<(DenseVector, DenseVector)> {
        let kd = self.k.mul_vec(d)?;
        let lower: Vec<f64> = kd
            .iter()
            .zip(self.lower_offset())
            .map(|(a, c)| a + c)
            .collect();
        let upper = lower
            .iter()
            .zip(self.y_star.iter())
            .map(|(g, y)| 2.0 * y - g)
            .collect();
        Ok((
            DenseVector::from_vec_unchecked(lower),
            DenseVector::from_vec_unchecked(upper),
        ))
    }

    /// A feasible (not necessarily complementary) point: `d = -K^{-1}(q̃ + y*)`
    /// split into force parts, which puts every lower gap at zero and every
    /// upper gap at `2 y*`.
    pub fn feasible_point(&self) -> Result<LcpSolution> {
        let rhs = self.lower_offset();
        let d: Vec<f64> = self.factor.solve(&rhs)?.iter().map(|v| -v).collect();
        let (f_lower, f_upper) = split_signed(&d);
        let (gl, gu) = self.gaps(&d)?;
        let z = f_lower.concat(&f_upper);
        let w = gl.concat(&gu);
        let complementarity_gap = dot(&z, &w);
        Ok(LcpSolution {
            z,
            w,
            complementarity_gap,
            solver: SolverTag::FeasiblePoint,
            iterations: 0,
        })
    }

    /// Builds the canonical solution for a net force `d`.
    pub fn solution_from_net_force(
        &self,
        d: Vec<f64>,
        iterations: usize,
    ) -> Result<ContactSolution> {
        check_len(self.dim(), d.len())?;
        let (gap_lower, gap_upper) = self.gaps(&d)?;
        let (f_lower, f_upper) = split_signed(&d);
        Ok(ContactSolution {
            f_lower,
            f_upper,
            gap_lower,
            gap_upper,
            net_force: DenseVector::from_vec_unchecked(d),
            iterations,
        })
    }

    /// Normalizes a raw `2n` point `(F_l, F_u)` through `d = F_l - F_u`.
    pub fn solution_from_z(&self, z: &[f64], iterations: usize) -> Result<ContactSolution> {
        let n = self.dim();
        check_len(2 * n, z.len())?;
        let d = (0..n).map(|i| z[i] - z[n + i]).collect();
        self.solution_from_net_force(d, iterations)
    }

    /// Coordinate relaxation on the signed net force.
    ///
    /// The `2n` problem is equivalent to minimizing the strictly convex
    ///
    /// ```text
    /// f(d) = ½ d'K d + (q̃ + y*)'d + Σ 2 y*_i max(-d_i, 0)
    /// ```
    ///
    /// Each coordinate step minimizes `f` exactly along one axis. With
    /// `opts.polish` the iteration also tries the linear solve implied by
    /// the current sign pattern once that pattern stops changing.
    pub fn solve_structured(&self, opts: &PgsOptions) -> Result<ContactSolution> {
        let n = self.dim();
        if !(opts.tol > 0.0) {
            return Err(Error::InvalidParameter("tolerance must be positive"));
        }
        let max_sweeps = opts.max_sweeps.unwrap_or(200 * n).max(1);
        let c = self.lower_offset();
        let tol = opts.tol * (1.0 + crate::dense::norm_inf(&c));
        let y = &self.y_star;

        let mut d = vec![0.0; n];
        if self.residual(&d, &c) <= tol {
            return self.solution_from_net_force(d, 0);
        }

        // g = K d + c, kept current across coordinate updates
        let mut g = c.clone();
        let mut last_pattern: Option<Vec<i8>> = None;
        let mut residual = f64::INFINITY;
        for sweep in 1..=max_sweeps {
            for i in 0..n {
                let kii = self.k.get(i, i);
                let r = g[i] - kii * d[i];
                let up = -r / kii;
                let down = (2.0 * y[i] - r) / kii;
                let next = if up > 0.0 {
                    up
                } else if down < 0.0 {
                    down
                } else {
                    0.0
                };
                let delta = next - d[i];
                if delta != 0.0 {
                    for (j, gj) in g.iter_mut().enumerate() {
                        *gj += self.k.get(j, i) * delta;
                    }
                    d[i] = next;
                }
            }

            residual = self.residual(&d, &c);
            if residual <= tol {
                return self.solution_from_net_force(d, sweep);
            }

            if opts.polish {
                let pattern = sign_pattern(&d);
                if last_pattern.as_ref() == Some(&pattern) {
                    if let Some(exact) = self.polish(&pattern, &c) {
                        if self.residual(&exact, &c) <= tol {
                            return self.solution_from_net_force(exact, sweep);
                        }
                    }
                }
                last_pattern = Some(pattern);
            }
            // resync against accumulated drift
            let kd = self.k.mul_vec(&d)?;
            for ((gi, kdi), ci) in g.iter_mut().zip(kd.iter()).zip(&c) {
                *gi = kdi + ci;
            }
        }
        let last = self.solution_from_net_force(d, max_sweeps)?;
        Err(Error::MaxIterationsExceeded {
            sweeps: max_sweeps,
            residual,
            last: Box::new(last),
        })
    }

    /// `max_i dist(0, ∂_i f(d))`.
    fn residual(&self, d: &[f64], c: &[f64]) -> f64 {
        let kd = self.k.mul_vec(d).expect("dimension checked");
        let mut worst = 0.0f64;
        for i in 0..d.len() {
            let g = kd[i] + c[i];
            let two_y = 2.0 * self.y_star[i];
            let r = if d[i] > 0.0 {
                g.abs()
            } else if d[i] < 0.0 {
                (g - two_y).abs()
            } else if g < 0.0 {
                -g
            } else if g > two_y {
                g - two_y
            } else {
                0.0
            };
            worst = worst.max(r);
        }
        worst
    }

    /// Solves `K_SS d_S = t_S - c_S` on the support of the sign pattern,
    /// where `t_i` is `0` for lower contact and `2 y*_i` for upper contact.
    fn polish(&self, pattern: &[i8], c: &[f64]) -> Option<Vec<f64>> {
        let support: Vec<usize> = (0..pattern.len()).filter(|&i| pattern[i] != 0).collect();
        let mut d = vec![0.0; pattern.len()];
        if support.is_empty() {
            return Some(d);
        }
        let sub = DenseMatrix::from_fn(support.len(), support.len(), |a, b| {
            self.k.get(support[a], support[b])
        });
        let rhs: Vec<f64> = support
            .iter()
            .map(|&i| {
                let target = if pattern[i] < 0 {
                    2.0 * self.y_star[i]
                } else {
                    0.0
                };
                target - c[i]
            })
            .collect();
        let x = spd_factor(&sub).ok()?.solve(&rhs).ok()?;
        for (&i, &v) in support.iter().zip(x.iter()) {
            if v * f64::from(pattern[i]) < 0.0 {
                return None;
            }
            d[i] = v;
        }
        Some(d)
    }
}

fn sign_pattern(d: &[f64]) -> Vec<i8> {
    d.iter()
        .map(|&v| {
            if v > 0.0 {
                1
            } else if v < 0.0 {
                -1
            } else {
                0
            }
        })
        .collect()
}

/// Splits `d` into `(max(d, 0), max(-d, 0))`.
pub fn split_signed(d: &[f64]) -> (DenseVector, DenseVector) {
    let lower = d.iter().map(|&v| if v > 0.0 { v } else { 0.0 }).collect();
    let upper = d.iter().map(|&v| if v < 0.0 { -v } else { 0.0 }).collect();
    (
        DenseVector::from_vec_unchecked(lower),
        DenseVector::from_vec_unchecked(upper),
    )
}

/// Options for [`ContactLcp::solve_structured`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PgsOptions {
    /// Stop once the optimality residual is at most `tol (1 + |q̃ + y*|_inf)`.
    pub tol: f64,
    /// Sweep budget; `None` means `200 n`.
    pub max_sweeps: Option<usize>,
    pub polish: bool,
}

impl Default for PgsOptions {
    fn default() -> Self {
        Self {
            tol: 1e-12,
            max_sweeps: None,
            polish: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ContactSolution {
    pub f_lower: DenseVector,
    pub f_upper: DenseVector,
    pub gap_lower: DenseVector,
    pub gap_upper: DenseVector,
    /// `F_l - F_u`.
    pub net_force: DenseVector,
    pub iterations: usize,
}

impl ContactSolution {
    /// `(F_l, F_u)`.
    pub fn z(&self) -> DenseVector {
        self.f_lower.concat(&self.f_upper)
    }

    /// `(γ_l, γ_u)`.
    pub fn w(&self) -> DenseVector {
        self.gap_lower.concat(&self.gap_upper)
    }

    pub fn to_lcp_solution(&self, solver: SolverTag) -> LcpSolution {
        let z = self.z();
        let w = self.w();
        let complementarity_gap = dot(&z, &w);
        LcpSolution {
            z,
            w,
            complementarity_gap,
            solver,
            iterations: self.iterations,
        }
    }

    /// Largest `|(2 y* - γ_l) - γ_u|`. Zero whenever the gaps were produced
    /// by [`ContactLcp::gaps`].
    pub fn gap_identity_residual(&self, y_star: &[f64]) -> f64 {
        self.gap_lower
            .iter()
            .zip(self.gap_upper.iter())
            .zip(y_star)
            .map(|((gl, gu), y)| ((2.0 * y - gl) - gu).abs())
            .fold(0.0, f64::max)
    }
}

/// `max_i F_l,i F_u,i`; zero for any solution of a contact LCP.
pub fn force_complementarity(sol: &ContactSolution) -> f64 {
    force_products(&sol.f_lower, &sol.f_upper)
}

pub fn force_products(f_lower: &[f64], f_upper: &[f64]) -> f64 {
    f_lower
        .iter()
        .zip(f_upper)
        .map(|(a, b)| a * b)
        .fold(0.0, f64::max)
}
