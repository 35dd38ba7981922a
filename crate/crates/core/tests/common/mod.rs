#![allow(dead_code)]

use contact_lcp::{CascadeBlock, CascadeProblem, ContactLcp, Coupling, DenseMatrix, DenseVector};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `A'A + n I` with `A` uniform in [-1, 1].
pub fn random_spd(rng: &mut impl Rng, n: usize) -> DenseMatrix {
    let a: Vec<f64> = (0..n * n).map(|_| rng.gen_range(-1.0..=1.0)).collect();
    let mut k = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            let mut s = if i == j { n as f64 } else { 0.0 };
            for r in 0..n {
                s += a[r * n + i] * a[r * n + j];
            }
            k[i * n + j] = s;
        }
    }
    DenseMatrix::new(n, n, k).unwrap()
}

pub fn random_vec(rng: &mut impl Rng, n: usize, lo: f64, hi: f64) -> DenseVector {
    DenseVector::new((0..n).map(|_| rng.gen_range(lo..=hi)).collect()).unwrap()
}

pub fn random_gaps(rng: &mut impl Rng, n: usize) -> DenseVector {
    DenseVector::new((0..n).map(|_| 2.0 - rng.gen_range(0.0..1.9)).collect()).unwrap()
}

pub fn random_contact(rng: &mut impl Rng, n: usize) -> ContactLcp {
    let k = random_spd(rng, n);
    let q_tilde = random_vec(rng, n, -5.0, 5.0);
    let y_star = random_gaps(rng, n);
    ContactLcp::new(k, q_tilde, y_star).unwrap()
}

pub fn random_cascade(rng: &mut impl Rng, t: usize, max_n: usize) -> CascadeProblem {
    let sizes: Vec<usize> = (0..t).map(|_| rng.gen_range(1..=max_n)).collect();
    let blocks = (0..t)
        .map(|i| {
            let n = sizes[i];
            let couplings = (0..i)
                .map(|j| {
                    let data = (0..n * sizes[j])
                        .map(|_| rng.gen_range(-1.0..=1.0))
                        .collect();
                    Coupling {
                        source: j,
                        matrix: DenseMatrix::new(n, sizes[j], data).unwrap(),
                    }
                })
                .collect();
            let q_tilde = random_vec(rng, n, -5.0, 5.0);
            let y = random_gaps(rng, n);
            let lower = q_tilde.iter().zip(y.iter()).map(|(a, b)| a + b).collect();
            let upper = q_tilde.iter().zip(y.iter()).map(|(a, b)| -a + b).collect();
            CascadeBlock::new(
                random_spd(rng, n),
                couplings,
                DenseVector::new(lower).unwrap(),
                DenseVector::new(upper).unwrap(),
            )
            .unwrap()
        })
        .collect();
    CascadeProblem::new(blocks).unwrap()
}

pub fn max_dist(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .fold(0.0, |acc, (x, y)| acc.max((x - y).abs()))
}
