//! Random instances of `S = (UΛ)^-1 U'Λ'` where `Λ, Λ'` are lower
//! unitriangular, supported on the first subdiagonal, and never both
//! nonzero in the same slot.

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::ModelError;
use crate::exact::{log_abs, rat, ExactMatrix};

/// Off-diagonal entries of the random `U, U'` lie in `[-U_RANGE, U_RANGE]`.
pub const U_RANGE: i64 = 10;

/// `(UΛ)^-1 U'Λ'`, with the inverse taken factor by factor.
pub fn s_matrix(
    u: &ExactMatrix,
    lambda: &ExactMatrix,
    u2: &ExactMatrix,
    lambda2: &ExactMatrix,
) -> Result<ExactMatrix, ModelError> {
    let left = lambda.inverse()?.try_mul(&u.inverse()?)?;
    Ok(left.try_mul(u2)?.try_mul(lambda2)?)
}

/// Both lower unitriangular with support on the first subdiagonal, and
/// `l_{j+1,j} l'_{j+1,j} = 0` for every `j`.
pub fn satisfies_hypotheses(lambda: &ExactMatrix, lambda2: &ExactMatrix) -> bool {
    let n = lambda.size();
    if lambda2.size() != n || !lambda.is_lower_unitriangular() || !lambda2.is_lower_unitriangular() {
        return false;
    }
    let off_first = |m: &ExactMatrix| (0..n).all(|i| (0..i.saturating_sub(1)).all(|j| m[(i, j)].is_zero()));
    off_first(lambda)
        && off_first(lambda2)
        && (1..n).all(|i| lambda[(i, i - 1)].is_zero() || lambda2[(i, i - 1)].is_zero())
}

#[derive(Debug, Clone)]
pub struct Lemma25Instance {
    pub u: ExactMatrix,
    pub lambda: ExactMatrix,
    pub u2: ExactMatrix,
    pub lambda2: ExactMatrix,
    pub s: ExactMatrix,
}

impl Lemma25Instance {
    pub fn max_entry(&self) -> BigRational {
        self.s.max_abs()
    }
}

fn random_upper(n: usize, rng: &mut ChaCha8Rng) -> ExactMatrix {
    let mut u = ExactMatrix::identity(n);
    for i in 0..n {
        for j in i + 1..n {
            u[(i, j)] = rat(rng.gen_range(-U_RANGE..=U_RANGE));
        }
    }
    u
}

/// Draws one instance. Each subdiagonal slot is owned by `Λ` or `Λ'`, the
/// other matrix gets 0 there; one slot is forced to `±magnitude` and the
/// remaining owned slots are uniform in `[-magnitude, magnitude]`.
pub fn random_instance(n: usize, magnitude: i64, rng: &mut ChaCha8Rng) -> Result<Lemma25Instance, ModelError> {
    if n < 2 {
        return Err(ModelError::InvalidSize(n));
    }
    let u = random_upper(n, rng);
    let u2 = random_upper(n, rng);
    let mut lambda = ExactMatrix::identity(n);
    let mut lambda2 = ExactMatrix::identity(n);
    let forced = rng.gen_range(1..n);
    for i in 1..n {
        let value = if i == forced {
            if rng.gen_bool(0.5) {
                magnitude
            } else {
                -magnitude
            }
        } else {
            rng.gen_range(-magnitude..=magnitude)
        };
        let target = if rng.gen_bool(0.5) { &mut lambda } else { &mut lambda2 };
        target[(i, i - 1)] = rat(value);
    }
    let s = s_matrix(&u, &lambda, &u2, &lambda2)?;
    Ok(Lemma25Instance {
        u,
        lambda,
        u2,
        lambda2,
        s,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct Lemma25Stats {
    pub n: usize,
    pub magnitude: i64,
    pub samples: usize,
    pub seed: u64,
    /// Minimum over samples of `max |S_ij|`, exact.
    #[serde(serialize_with = "as_string")]
    pub min_max_entry: BigRational,
    pub min_log10: f64,
    pub max_log10: f64,
}

/// Sample `i` uses its own stream, so results do not depend on thread
/// scheduling.
pub fn lemma25_experiment(n: usize, magnitude: i64, samples: usize, seed: u64) -> Result<Lemma25Stats, ModelError> {
    if n < 2 {
        return Err(ModelError::InvalidSize(n));
    }
    let maxima: Vec<BigRational> = (0..samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i as u64);
            random_instance(n, magnitude, &mut rng).map(|inst| inst.max_entry())
        })
        .collect::<Result<_, _>>()?;
    let min = maxima.iter().min().cloned().unwrap_or_else(BigRational::zero);
    let max = maxima.iter().max().cloned().unwrap_or_else(BigRational::zero);
    let log10 = |x: &BigRational| {
        if x.is_positive() {
            log_abs(x) / std::f64::consts::LN_10
        } else {
            f64::NEG_INFINITY
        }
    };
    Ok(Lemma25Stats {
        n,
        magnitude,
        samples,
        seed,
        min_max_entry: min.clone(),
        min_log10: log10(&min),
        max_log10: log10(&max),
    })
}

/// `10^1, ..., 10^max`.
pub fn decades(max: u32) -> Vec<i64> {
    (1..=max).map(|k| 10i64.pow(k)).collect()
}

/// Whether the minima grow strictly from one magnitude to the next.
pub fn strictly_increasing(stats: &[Lemma25Stats]) -> bool {
    stats.windows(2).all(|w| w[0].min_max_entry < w[1].min_max_entry)
}

fn as_string<S: serde::Serializer>(x: &BigRational, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(x)
}
