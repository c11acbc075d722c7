//! Seeded random model generators.
//!
//! Used by the sampled positivity check and by the property suites.

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::hermitian::{HermitianMatrix, MarkovDensity};
use crate::linalg::{vector_inner, vector_norm, ComplexMatrix, RealMatrix};
use crate::oom::ObservableOperatorModel;
use crate::operator::StochasticMatrix;
use crate::scalar::{Real, Scalar};
use crate::words::Scale;

/// Deterministic generator used throughout the crate.
pub type ModelRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> ModelRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian<T: Real, R: Rng + ?Sized>(rng: &mut R) -> T {
    let x: f64 = StandardNormal.sample(rng);
    T::lit(x)
}

pub fn complex_gaussian<T: Real, R: Rng + ?Sized>(rng: &mut R) -> Complex<T> {
    Complex::new(gaussian(rng), gaussian(rng))
}

pub fn complex_vector<T: Real, R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<Complex<T>> {
    (0..n).map(|_| complex_gaussian(rng)).collect()
}

pub fn ginibre<T: Real, R: Rng + ?Sized>(
    rows: usize,
    cols: usize,
    rng: &mut R,
) -> ComplexMatrix<T> {
    ComplexMatrix::from_fn(rows, cols, |_, _| complex_gaussian(rng))
}

/// Full-rank quantum density `GG*/tr(GG*)`.
pub fn quantum_density<T: Real, R: Rng + ?Sized>(n: usize, rng: &mut R) -> MarkovDensity<T> {
    let g = ginibre::<T, R>(n, n, rng);
    let gg = g.matmul(&g.adjoint()).expect("square");
    let tr = gg.trace().re;
    MarkovDensity::from_complex(gg.scale_real(T::one() / tr))
        .expect("GG* is Hermitian with trace 1")
}

/// Random Hermitian matrix with Gaussian entries.
pub fn hermitian<T: Real, R: Rng + ?Sized>(n: usize, rng: &mut R) -> HermitianMatrix<T> {
    let g = ginibre::<T, R>(n, n, rng);
    HermitianMatrix::new((&g + &g.adjoint()).scale_real(T::lit(0.5))).expect("symmetrized")
}

/// Random Markov density: trace-1 Hermitian, usually indefinite.
pub fn markov_density<T: Real, R: Rng + ?Sized>(n: usize, rng: &mut R) -> MarkovDensity<T> {
    let h = hermitian::<T, R>(n, rng);
    let shift = (T::one() - h.trace()) / T::from_usize(n);
    let id = HermitianMatrix::identity(n).scale(shift);
    MarkovDensity::new(h.add(&id)).expect("trace fixed to 1")
}

/// Orthonormalizes the columns of `m` (modified Gram–Schmidt).
fn orthonormal_columns<T: Real>(m: &ComplexMatrix<T>) -> ComplexMatrix<T> {
    let (rows, cols) = m.shape();
    let mut basis: Vec<Vec<Complex<T>>> = Vec::with_capacity(cols);
    for c in 0..cols {
        let mut v = m.column(c);
        for b in &basis {
            let proj = vector_inner(b, &v);
            for (x, y) in v.iter_mut().zip(b) {
                *x = *x - *y * proj;
            }
        }
        let norm = vector_norm(&v);
        for x in v.iter_mut() {
            *x = *x / norm;
        }
        basis.push(v);
    }
    ComplexMatrix::from_fn(rows, cols, |r, c| basis[c][r])
}

/// Haar-like random unitary from Gram–Schmidt on a Ginibre matrix.
pub fn unitary<T: Real, R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexMatrix<T> {
    orthonormal_columns(&ginibre::<T, R>(n, n, rng))
}

/// `count` Kraus matrices obtained by slicing a random isometry
/// `C^n → C^{count·n}`, so that `Σ K_a* K_a = I`.
pub fn kraus_family<T: Real, R: Rng + ?Sized>(
    n: usize,
    count: usize,
    rng: &mut R,
) -> Vec<ComplexMatrix<T>> {
    let v = orthonormal_columns(&ginibre::<T, R>(n * count, n, rng));
    (0..count)
        .map(|a| ComplexMatrix::from_fn(n, n, |r, c| v[(a * n + r, c)]))
        .collect()
}

/// Column-stochastic matrix with nonnegative entries.
pub fn stochastic<T: Scalar, R: Rng + ?Sized>(m: usize, rng: &mut R) -> RealMatrix<T> {
    let raw: Vec<Vec<f64>> = (0..m)
        .map(|_| (0..m).map(|_| rng.gen_range(0.01..1.0)).collect())
        .collect();
    let sums: Vec<f64> = (0..m).map(|c| raw.iter().map(|row| row[c]).sum()).collect();
    RealMatrix::from_fn(m, m, |r, c| {
        T::approx_from_f64(raw[r][c] / sums[c]).expect("finite")
    })
}

/// Probability vector with strictly positive entries.
pub fn probability_vector<R: Rng + ?Sized>(m: usize, rng: &mut R) -> Vec<f64> {
    let raw: Vec<f64> = (0..m).map(|_| rng.gen_range(0.01..1.0)).collect();
    let s: f64 = raw.iter().sum();
    raw.into_iter().map(|x| x / s).collect()
}

/// Column-stochastic `rows × cols` matrix with positive entries.
pub fn column_stochastic<T: Scalar, R: Rng + ?Sized>(
    rows: usize,
    cols: usize,
    rng: &mut R,
) -> RealMatrix<T> {
    let columns: Vec<Vec<f64>> = (0..cols).map(|_| probability_vector(rows, rng)).collect();
    RealMatrix::from_fn(rows, cols, |r, c| {
        T::approx_from_f64(columns[c][r]).expect("finite")
    })
}

/// Random hidden Markov model: transition, emission table and initial law.
pub fn hmm<T: Real, R: Rng + ?Sized>(
    states: usize,
    alphabet: usize,
    rng: &mut R,
) -> (StochasticMatrix<T>, RealMatrix<T>, Vec<T>) {
    let transition = StochasticMatrix::new_nonnegative(column_stochastic(states, states, rng))
        .expect("stochastic");
    let emissions = column_stochastic(alphabet, states, rng);
    let init = probability_vector(states, rng)
        .into_iter()
        .map(T::lit)
        .collect();
    (transition, emissions, init)
}

/// OOM with Gaussian entries of standard deviation `spread`; the last
/// operator and π are shifted so the normalization conditions hold exactly
/// up to rounding.
pub fn signed_oom<T: Real, R: Rng + ?Sized>(
    scale: Scale,
    dim: usize,
    spread: f64,
    rng: &mut R,
) -> ObservableOperatorModel<T> {
    let k = scale.len();
    let spread = T::lit(spread);
    let mut ops: Vec<RealMatrix<T>> = (0..k)
        .map(|_| RealMatrix::from_fn(dim, dim, |_, _| gaussian::<T, R>(rng) * spread))
        .collect();
    let mut total = RealMatrix::zeros(dim, dim);
    for op in &ops {
        total = &total + op;
    }
    let sums = total.column_sums();
    let m = T::from_usize(dim);
    let last = ops.last_mut().expect("non-empty scale");
    for c in 0..dim {
        let delta = (T::one() - sums[c]) / m;
        for r in 0..dim {
            last[(r, c)] = last[(r, c)] + delta;
        }
    }
    let raw: Vec<T> = (0..dim).map(|_| gaussian::<T, R>(rng) * spread).collect();
    let shift = (T::one() - raw.iter().copied().sum::<T>()) / m;
    let pi = raw.into_iter().map(|x| x + shift).collect();
    ObservableOperatorModel::new(scale, ops, pi).expect("normalized by construction")
}

/// Table of ±1 values, `count` rows over `states` hidden states.
pub fn sign_table<R: Rng + ?Sized>(states: usize, count: usize, rng: &mut R) -> Vec<Vec<i8>> {
    (0..count)
        .map(|_| {
            (0..states)
                .map(|_| if rng.gen::<bool>() { 1 } else { -1 })
                .collect()
        })
        .collect()
}

/// Nonnegative Markov state with a few exact zeros mixed in.
pub fn nonnegative_state<R: Rng + ?Sized>(states: usize, rng: &mut R) -> Vec<f64> {
    let raw: Vec<f64> = (0..states)
        .map(|_| {
            if rng.gen_bool(0.2) {
                0.0
            } else {
                rng.gen_range(0.0..1.0)
            }
        })
        .collect();
    let s: f64 = raw.iter().sum();
    if s == 0.0 {
        return vec![1.0 / states as f64; states];
    }
    raw.into_iter().map(|x| x / s).collect()
}
