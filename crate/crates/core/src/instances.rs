//! Seeded random instances for verification runs. ChaCha keeps draws
//! reproducible across platforms; every report that uses them records the
//! seed. The generic generators draw small integer ratios, so the same
//! seed yields corresponding exact and float instances.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
pub use rand_chacha::ChaCha8Rng;

use crate::matrix::DenseOperator;
use crate::scalar::{Rational, RealScalar};
use crate::seq::FiniteSeq;

pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Sequence with support inside `[0, max_end]`, entries `num/den` with
/// numerators in `[-num_span, num_span]` and denominators in `[1, den_span]`.
pub fn scalar_seq<S: RealScalar>(
    rng: &mut ChaCha8Rng,
    max_end: usize,
    num_span: i64,
    den_span: i64,
) -> FiniteSeq<S> {
    let len = rng.gen_range(1..=max_end + 1);
    let coeffs = (0..len)
        .map(|_| {
            S::from_ratio(rng.gen_range(-num_span..=num_span), rng.gen_range(1..=den_span))
        })
        .collect();
    FiniteSeq::from_coeffs(coeffs)
}

/// Dense matrix with ratio entries drawn like [`scalar_seq`].
pub fn scalar_matrix<S: RealScalar>(
    rng: &mut ChaCha8Rng,
    dim: usize,
    num_span: i64,
    den_span: i64,
) -> DenseOperator<S> {
    DenseOperator::from_fn(dim, |_, _| {
        S::from_ratio(rng.gen_range(-num_span..=num_span), rng.gen_range(1..=den_span))
    })
}

pub fn rational_seq(
    rng: &mut ChaCha8Rng,
    max_end: usize,
    num_span: i64,
    den_span: i64,
) -> FiniteSeq<Rational> {
    scalar_seq(rng, max_end, num_span, den_span)
}

pub fn rational_matrix(
    rng: &mut ChaCha8Rng,
    dim: usize,
    num_span: i64,
    den_span: i64,
) -> DenseOperator<Rational> {
    scalar_matrix(rng, dim, num_span, den_span)
}

/// Float sequence with entries uniform in `[-amplitude, amplitude]`.
pub fn float_seq(rng: &mut ChaCha8Rng, max_end: usize, amplitude: f64) -> FiniteSeq<f64> {
    let len = rng.gen_range(1..=max_end + 1);
    let coeffs = (0..len).map(|_| rng.gen_range(-amplitude..=amplitude)).collect();
    FiniteSeq::from_coeffs(coeffs)
}

/// Dense float matrix with entries uniform in `[-amplitude, amplitude]`.
pub fn float_matrix(rng: &mut ChaCha8Rng, dim: usize, amplitude: f64) -> DenseOperator<f64> {
    DenseOperator::from_fn(dim, |_, _| rng.gen_range(-amplitude..=amplitude))
}
