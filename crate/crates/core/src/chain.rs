//! Markov chains `(µ, P) = {µ^t(P) | t ≥ 0}` and their Cesàro limits.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::hermitian::{HermitianMatrix, MarkovDensity};
use crate::linalg::{vector_norm, ComplexMatrix, RealMatrix};
use crate::operator::MarkovOperator;
use crate::scalar::Real;

pub const DEFAULT_CESARO_TOL: f64 = 1e-8;
pub const DEFAULT_MAX_DOUBLINGS: usize = 40;

#[derive(Clone, Debug)]
pub struct MarkovChain<T> {
    evolution: MarkovOperator<T>,
    start: MarkovDensity<T>,
}

/// Result of [`MarkovChain::boundedness_probe`].
#[derive(Clone, Debug, PartialEq)]
pub struct BoundednessReport<T> {
    pub horizon: usize,
    /// `max_t tr(µ^t(P)²)` over `t ≤ horizon`.
    pub max_trace_square: T,
    pub argmax: usize,
    pub bound: T,
    /// First `t` with `tr(µ^t(P)²) > bound`.
    pub first_exceeding: Option<usize>,
}

impl<T> BoundednessReport<T> {
    pub fn exceeded(&self) -> bool {
        self.first_exceeding.is_some()
    }
}

/// Averaged density `P̃` with its stationarity residual.
#[derive(Clone, Debug)]
pub struct CesaroResult<T> {
    pub average: MarkovDensity<T>,
    /// Number of averaged iterates (a power of two, or 0 if `P` was
    /// already stationary).
    pub iterations: u64,
    /// `‖µ(P̃) − P̃‖`.
    pub residual: T,
    /// Residual after each doubling, starting with `t = 1`.
    pub residual_history: Vec<T>,
}

impl<T: Real> MarkovChain<T> {
    pub fn new(evolution: MarkovOperator<T>, start: MarkovDensity<T>) -> Result<Self> {
        if evolution.dim() != start.dim() {
            return Err(Error::DimensionMismatch {
                expected: evolution.dim(),
                found: start.dim(),
            });
        }
        Ok(Self { evolution, start })
    }

    pub fn evolution(&self) -> &MarkovOperator<T> {
        &self.evolution
    }

    pub fn start(&self) -> &MarkovDensity<T> {
        &self.start
    }

    pub fn dim(&self) -> usize {
        self.start.dim()
    }

    /// `P, µ(P), …, µ^steps(P)`.
    pub fn evolve(&self, steps: usize) -> Vec<MarkovDensity<T>> {
        let mut out = Vec::with_capacity(steps + 1);
        out.push(self.start.clone());
        for _ in 0..steps {
            let next = self
                .evolution
                .apply_density(out.last().expect("non-empty"))
                .expect("dimension checked");
            out.push(next);
        }
        out
    }

    /// Tracks `tr(µ^t(P)²)` for `t ≤ horizon` against the bound `c`.
    pub fn boundedness_probe(&self, horizon: usize, bound: T) -> Result<BoundednessReport<T>> {
        if horizon == 0 {
            return Err(Error::Invalid("horizon must be at least 1".into()));
        }
        let mut coords = self.start.matrix().coords();
        let square = |c: &[T]| c.iter().map(|&x| x * x).sum::<T>();
        let mut max = square(&coords);
        let mut argmax = 0;
        let mut first_exceeding = (max > bound).then_some(0);
        for t in 1..=horizon {
            coords = self.evolution.as_superoperator().apply_coords(&coords)?;
            let s = square(&coords);
            if s > max || s.is_nan() {
                max = s;
                argmax = t;
            }
            if first_exceeding.is_none() && !(s <= bound) {
                first_exceeding = Some(t);
            }
        }
        Ok(BoundednessReport {
            horizon,
            max_trace_square: max,
            argmax,
            bound,
            first_exceeding,
        })
    }

    fn residual_of(&self, coords: &[T]) -> T {
        let image = self
            .evolution
            .as_superoperator()
            .apply_coords(coords)
            .expect("dimension checked");
        image
            .iter()
            .zip(coords)
            .map(|(&a, &b)| (a - b) * (a - b))
            .sum::<T>()
            .sqrt()
    }

    /// `‖µ(P) − P‖ ≤ tol`.
    pub fn is_stationary(&self, tol: T) -> bool {
        self.residual_of(&self.start.matrix().coords()) <= tol
    }

    /// Cesàro average `(1/t) Σ_{k=1}^t µ^k(P)` at `t = 2^j`, doubling until
    /// the stationarity residual drops to `tol`.
    ///
    /// Keeps `T_t = µ^t` and `s_t = Σ_{k=1}^t µ^k(P)`, updated by
    /// `s_{2t} = s_t + T_t s_t` and `T_{2t} = T_t²`.
    pub fn cesaro_average(&self, tol: T, max_doublings: usize) -> Result<CesaroResult<T>> {
        let n = self.dim();
        let p = self.start.matrix().coords();
        let r0 = self.residual_of(&p);
        if r0 <= tol {
            return Ok(CesaroResult {
                average: self.start.clone(),
                iterations: 0,
                residual: r0,
                residual_history: Vec::new(),
            });
        }
        let mut power = self.evolution.matrix().clone();
        let mut sum = power.matvec(&p)?;
        let mut t: u64 = 1;
        let mut history = Vec::new();
        let mut doublings = 0;
        loop {
            let scale = T::one() / T::lit(t as f64);
            let avg: Vec<T> = sum.iter().map(|&x| x * scale).collect();
            let residual = self.residual_of(&avg);
            history.push(residual);
            if residual <= tol {
                let average = HermitianMatrix::from_coords(n, &avg)?;
                return Ok(CesaroResult {
                    average: MarkovDensity::from_hermitian_unchecked(average),
                    iterations: t,
                    residual,
                    residual_history: history,
                });
            }
            if doublings == max_doublings {
                return Err(Error::CesaroNotConverged {
                    tol: tol.as_f64(),
                    doublings,
                    residual: residual.as_f64(),
                });
            }
            let shifted = power.matvec(&sum)?;
            for (s, x) in sum.iter_mut().zip(shifted) {
                *s = *s + x;
            }
            power = power.matmul(&power)?;
            restore_trace_row(&mut power, n);
            t = t.saturating_mul(2);
            doublings += 1;
        }
    }

    /// `⟨X|P̃⟩` for the Cesàro average `P̃`.
    pub fn functional_average(
        &self,
        functional: &HermitianMatrix<T>,
        tol: T,
        max_doublings: usize,
    ) -> Result<T> {
        if functional.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: functional.dim(),
            });
        }
        let result = self.cesaro_average(tol, max_doublings)?;
        functional.inner(result.average.matrix())
    }
}

/// Running mean of `U^k v` for `k = 1..=steps`.
#[derive(Clone, Debug)]
pub struct VectorAverage<T> {
    pub average: Vec<Complex<T>>,
    pub norm: T,
    /// `steps · ‖average‖`; stays bounded when U has no eigenvalue 1.
    pub scaled_norm: T,
}

/// `(1/T) Σ_{k=1}^T U^k v`.
pub fn unitary_vector_average<T: Real>(
    u: &ComplexMatrix<T>,
    v: &[Complex<T>],
    steps: usize,
) -> Result<VectorAverage<T>> {
    if !crate::hermitian::is_unitary(u, T::tolerance(crate::hermitian::SEMANTIC_TOL)) {
        return Err(Error::NotUnitary {
            deviation: u.unitarity_defect().as_f64(),
        });
    }
    if steps == 0 {
        return Err(Error::Invalid("steps must be at least 1".into()));
    }
    let mut current = v.to_vec();
    let mut acc = vec![Complex::new(T::zero(), T::zero()); v.len()];
    for _ in 0..steps {
        current = u.matvec(&current)?;
        for (a, &c) in acc.iter_mut().zip(&current) {
            *a = *a + c;
        }
    }
    let inv = T::one() / T::lit(steps as f64);
    let average: Vec<_> = acc.into_iter().map(|z| z * inv).collect();
    let norm = vector_norm(&average);
    Ok(VectorAverage {
        average,
        norm,
        scaled_norm: norm * T::lit(steps as f64),
    })
}

/// Projects `power` onto maps whose trace row is `1` on diagonal
/// coordinates and `0` elsewhere.
fn restore_trace_row<T: Real>(power: &mut RealMatrix<T>, n: usize) {
    let inv_n = T::one() / T::lit(n as f64);
    for j in 0..n * n {
        let target = if j < n { T::one() } else { T::zero() };
        let mut defect = -target;
        for i in 0..n {
            defect = defect + power[(i, j)];
        }
        let shift = defect * inv_n;
        for i in 0..n {
            power[(i, j)] = power[(i, j)] - shift;
        }
    }
}
