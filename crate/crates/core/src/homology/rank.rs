//! Two-prime modular rank with exact rational fallback.

use std::sync::atomic::{AtomicUsize, Ordering};

use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::matrix::SparseMatrix;
use super::reduce::{reduce, SparseVec};
use crate::scalar::{is_prime_u64, Exact, Field, FieldOps, PrimeField};

pub const DEFAULT_SEED: u64 = 0x5e97_e001;

/// Outcome of one rank computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RankOutcome {
    pub rank: usize,
    /// The two modular ranks disagreed and the exact rank was used.
    pub exact_fallback: bool,
}

/// Rank oracle for integer matrices: elimination modulo two independent
/// primes in `[2^30, 2^31)`, falling back to exact rational elimination when
/// they disagree.
#[derive(Debug)]
pub struct RankEngine {
    primes: [u64; 2],
    seed: u64,
    fallbacks: AtomicUsize,
}

impl Default for RankEngine {
    fn default() -> Self {
        Self::with_seed(DEFAULT_SEED)
    }
}

impl Clone for RankEngine {
    fn clone(&self) -> Self {
        RankEngine {
            primes: self.primes,
            seed: self.seed,
            fallbacks: AtomicUsize::new(self.fallbacks.load(Ordering::Relaxed)),
        }
    }
}

impl RankEngine {
    pub fn with_seed(seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let first = random_prime(&mut rng);
        let second = loop {
            let p = random_prime(&mut rng);
            if p != first {
                break p;
            }
        };
        Self::with_primes(first, second, seed)
    }

    /// Fixed primes, mainly for tests that force a disagreement.
    pub fn with_primes(first: u64, second: u64, seed: u64) -> Self {
        RankEngine {
            primes: [first, second],
            seed,
            fallbacks: AtomicUsize::new(0),
        }
    }

    pub fn primes(&self) -> [u64; 2] {
        self.primes
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// How many ranks so far needed the exact fallback.
    pub fn exact_fallbacks(&self) -> usize {
        self.fallbacks.load(Ordering::Relaxed)
    }

    pub fn rank(&self, m: &SparseMatrix<i64>) -> RankOutcome {
        if m.nnz() == 0 {
            return RankOutcome {
                rank: 0,
                exact_fallback: false,
            };
        }
        let r1 = rank_mod_p(m, self.primes[0]);
        let r2 = rank_mod_p(m, self.primes[1]);
        if r1 == r2 {
            return RankOutcome {
                rank: r1,
                exact_fallback: false,
            };
        }
        self.fallbacks.fetch_add(1, Ordering::Relaxed);
        let exact = rank_exact::<BigRational>(m);
        log::warn!(
            "modular ranks disagree ({r1} mod {}, {r2} mod {}); exact rank {exact}",
            self.primes[0],
            self.primes[1]
        );
        RankOutcome {
            rank: exact,
            exact_fallback: true,
        }
    }
}

fn random_prime(rng: &mut ChaCha8Rng) -> u64 {
    loop {
        let c = rng.gen_range((1u64 << 30)..(1u64 << 31)) | 1;
        if is_prime_u64(c) {
            return c;
        }
    }
}

/// Rank of an integer matrix over `Z/pZ`.
pub fn rank_mod_p(m: &SparseMatrix<i64>, p: u64) -> usize {
    let field = PrimeField::new(p);
    rank_with(&field, m)
}

/// Rank over the field `F` (e.g. `BigRational`) by exact elimination.
pub fn rank_exact<F: Field>(m: &SparseMatrix<i64>) -> usize {
    rank_with(&Exact::<F>::new(), m)
}

fn rank_with<F: FieldOps>(field: &F, m: &SparseMatrix<i64>) -> usize {
    let cols: Vec<SparseVec<F::Elem>> = m
        .columns()
        .iter()
        .map(|c| {
            c.iter()
                .map(|&(r, x)| (r, field.from_int(x)))
                .filter(|(_, x)| !field.is_zero(x))
                .collect()
        })
        .collect();
    reduce(field, cols, false).rank()
}
