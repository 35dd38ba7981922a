//! Seeded random problem generator.
//!
//! Every draw comes from a ChaCha8 stream seeded with the caller's 64-bit
//! seed, so the same arguments always produce the same file.

use clap::ValueEnum;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::CliError;
use crate::format::{BlockFile, CouplingFile, LoadFile, Payload, ProblemFile, StabilizerFile};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GenKind {
    General,
    Contact,
    Cascade,
    Beam,
}

impl GenKind {
    pub fn as_str(self) -> &'static str {
        match self {
            GenKind::General => "general",
            GenKind::Contact => "contact",
            GenKind::Cascade => "cascade",
            GenKind::Beam => "beam",
        }
    }
}

/// `A'A + n I` with `A` uniform in `[-1, 1]`.
pub fn random_spd(rng: &mut impl Rng, n: usize) -> Vec<Vec<f64>> {
    let a: Vec<Vec<f64>> = (0..n)
        .map(|_| (0..n).map(|_| rng.gen_range(-1.0..=1.0)).collect())
        .collect();
    let mut k = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in i..n {
            let v: f64 = (0..n).map(|r| a[r][i] * a[r][j]).sum();
            k[i][j] = v;
            k[j][i] = v;
        }
        k[i][i] += n as f64;
    }
    k
}

/// Uniform in `[-5, 5]`.
pub fn random_load(rng: &mut impl Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.gen_range(-5.0..=5.0)).collect()
}

/// Uniform in `(0.1, 2]`.
pub fn random_gaps(rng: &mut impl Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| 2.0 - rng.gen_range(0.0..1.9)).collect()
}

/// Generates one instance. `t` is the block count and only used for cascades.
pub fn generate(kind: GenKind, n: usize, t: usize, seed: u64) -> Result<ProblemFile, CliError> {
    if n == 0 {
        return Err(CliError::Usage("--n must be at least 1".into()));
    }
    if kind == GenKind::Cascade && t == 0 {
        return Err(CliError::Usage("--t must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let payload = match kind {
        GenKind::General => Payload::General {
            m: random_spd(&mut rng, n),
            q: random_load(&mut rng, n),
        },
        GenKind::Contact => Payload::Contact {
            k: random_spd(&mut rng, n),
            q_tilde: random_load(&mut rng, n),
            y_star: random_gaps(&mut rng, n),
        },
        GenKind::Cascade => {
            let blocks = (0..t)
                .map(|i| {
                    let k = random_spd(&mut rng, n);
                    let q_tilde = random_load(&mut rng, n);
                    let y = random_gaps(&mut rng, n);
                    let couplings = (0..i)
                        .map(|source| CouplingFile {
                            source,
                            matrix: (0..n)
                                .map(|_| (0..n).map(|_| rng.gen_range(-1.0..=1.0)).collect())
                                .collect(),
                        })
                        .collect();
                    BlockFile {
                        k,
                        couplings,
                        q_lower: q_tilde.iter().zip(&y).map(|(q, y)| q + y).collect(),
                        q_upper: q_tilde.iter().zip(&y).map(|(q, y)| -q + y).collect(),
                    }
                })
                .collect();
            Payload::Cascade { blocks }
        }
        GenKind::Beam => {
            let length = rng.gen_range(5.0..=20.0);
            let ei = rng.gen_range(50.0..=500.0);
            // evenly spaced slots with jitter keep positions strictly increasing
            let stabilizers = (0..n)
                .map(|i| StabilizerFile {
                    position: length * (i as f64 + 0.5 + rng.gen_range(-0.3..=0.3)) / n as f64,
                    gap: 2.0 - rng.gen_range(0.0..1.9),
                })
                .collect();
            let count = rng.gen_range(1..=3);
            let loads = (0..count)
                .map(|_| LoadFile {
                    position: rng.gen_range(0.05 * length..=0.95 * length),
                    magnitude: rng.gen_range(-50.0..=50.0),
                })
                .collect();
            Payload::Beam {
                length,
                ei,
                stabilizers,
                loads,
            }
        }
    };
    let mut file = ProblemFile::new(payload);
    file.name = Some(format!("{}-n{n}-seed{seed}", kind.as_str()));
    file.seed = Some(seed);
    Ok(file)
}
