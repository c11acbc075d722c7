//! Linear and trace-preserving operators on the space of Hermitian matrices.
//!
//! An operator on H_n is stored as a real n²×n² matrix acting on the
//! coordinates of [`HermitianMatrix::coords`]. Composition and powers are
//! then plain matrix products.

use rand::Rng;

use crate::error::{Error, Result};
use crate::hermitian::{
    spectral_decompose, HermitianBasis, HermitianMatrix, MarkovDensity, SEMANTIC_TOL,
};
use crate::linalg::{ComplexMatrix, RealMatrix};
use crate::random;
use crate::scalar::{Real, Scalar};

/// Eigenvalue floor below which a sampled image counts as a positivity witness.
pub const WITNESS_TOL: f64 = 1e-9;

/// Unconstrained real-linear map on H_n.
#[derive(Clone, Debug, PartialEq)]
pub struct Superoperator<T> {
    n: usize,
    matrix: RealMatrix<T>,
}

impl<T: Real> Superoperator<T> {
    pub fn from_matrix(n: usize, matrix: RealMatrix<T>) -> Result<Self> {
        if matrix.shape() != (n * n, n * n) {
            return Err(Error::ShapeMismatch {
                expected: format!("{0}x{0}", n * n),
                found: format!("{}x{}", matrix.rows(), matrix.cols()),
            });
        }
        Ok(Self { n, matrix })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            n,
            matrix: RealMatrix::identity(n * n),
        }
    }

    pub fn zero(n: usize) -> Self {
        Self {
            n,
            matrix: RealMatrix::zeros(n * n, n * n),
        }
    }

    /// Tabulates a Hermiticity-preserving linear map on the canonical basis.
    pub fn from_map(n: usize, f: impl Fn(&HermitianMatrix<T>) -> HermitianMatrix<T>) -> Self {
        let basis = HermitianBasis::<T>::canonical(n);
        let d = n * n;
        let mut matrix = RealMatrix::zeros(d, d);
        for (k, b) in basis.elements().iter().enumerate() {
            for (r, x) in f(b).coords().into_iter().enumerate() {
                matrix[(r, k)] = x;
            }
        }
        Self { n, matrix }
    }

    /// `Q ↦ M Q M*`.
    pub fn conjugation(m: &ComplexMatrix<T>) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::NotSquare {
                rows: m.rows(),
                cols: m.cols(),
            });
        }
        Ok(Self::from_map(m.rows(), |q| {
            HermitianMatrix::from_hermitian_unchecked(hermitize(
                m.conjugate(q.as_complex()).expect("square"),
            ))
        }))
    }

    /// Acts on diagonal matrices as `diag(x) ↦ diag(M x)` and annihilates
    /// off-diagonal coordinates.
    pub fn diagonal_action(m: &RealMatrix<T>) -> Result<Self> {
        if m.rows() != m.cols() {
            return Err(Error::NotSquare {
                rows: m.rows(),
                cols: m.cols(),
            });
        }
        let n = m.rows();
        let mut matrix = RealMatrix::zeros(n * n, n * n);
        for r in 0..n {
            for c in 0..n {
                matrix[(r, c)] = m[(r, c)];
            }
        }
        Ok(Self { n, matrix })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &RealMatrix<T> {
        &self.matrix
    }

    pub fn apply(&self, q: &HermitianMatrix<T>) -> Result<HermitianMatrix<T>> {
        self.check_dim(q.dim())?;
        let out = self.matrix.matvec(&q.coords())?;
        HermitianMatrix::from_coords(self.n, &out)
    }

    pub fn apply_coords(&self, coords: &[T]) -> Result<Vec<T>> {
        self.matrix.matvec(coords)
    }

    /// `self ∘ inner`: apply `inner` first.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        self.check_dim(inner.n)?;
        Ok(Self {
            n: self.n,
            matrix: self.matrix.matmul(&inner.matrix)?,
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_dim(other.n)?;
        Ok(Self {
            n: self.n,
            matrix: &self.matrix + &other.matrix,
        })
    }

    /// `self^t` by repeated squaring.
    pub fn power(&self, mut t: u64) -> Self {
        let mut result = Self::identity(self.n);
        let mut base = self.clone();
        while t > 0 {
            if t & 1 == 1 {
                result = result.compose(&base).expect("same dimension");
            }
            t >>= 1;
            if t > 0 {
                base = base.compose(&base).expect("same dimension");
            }
        }
        result
    }

    /// Largest `|tr(µ(B_k)) − tr(B_k)|` over the canonical basis.
    pub fn trace_defect(&self) -> T {
        let n = self.n;
        (0..n * n)
            .map(|k| {
                let image_trace = T::sum_iter((0..n).map(|i| self.matrix[(i, k)]));
                let own = if k < n { T::one() } else { T::zero() };
                (image_trace - own).abs()
            })
            .fold(T::zero(), |a, b| if b > a || b.is_nan() { b } else { a })
    }

    pub fn is_trace_preserving(&self, tol: T) -> bool {
        self.trace_defect() <= tol
    }

    /// Operator-matrix Frobenius distance.
    pub fn distance(&self, other: &Self) -> T {
        (&self.matrix - &other.matrix).frobenius_norm()
    }

    /// Pushes random full-rank quantum densities through the map and reports
    /// the first image with an eigenvalue below `-1e-9`.
    pub fn sampled_nonnegativity(
        &self,
        trials: usize,
        seed: u64,
    ) -> Result<NonnegativityReport<T>> {
        let mut rng = random::seeded(seed);
        self.sampled_nonnegativity_with(trials, &mut rng)
    }

    pub fn sampled_nonnegativity_with<R: Rng + ?Sized>(
        &self,
        trials: usize,
        rng: &mut R,
    ) -> Result<NonnegativityReport<T>> {
        if trials == 0 {
            return Err(Error::Invalid("trials must be at least 1".into()));
        }
        let floor = -T::lit(WITNESS_TOL);
        let mut min_eigenvalue = T::infinity();
        for passed in 0..trials {
            let q = random::quantum_density::<T, R>(self.n, rng);
            let image = self.apply(q.matrix())?;
            let low = spectral_decompose(&image)?.min_eigenvalue();
            min_eigenvalue = min_eigenvalue.min(low);
            if low < floor {
                return Ok(NonnegativityReport {
                    trials,
                    passed,
                    witness: Some(q),
                    min_eigenvalue,
                });
            }
        }
        Ok(NonnegativityReport {
            trials,
            passed: trials,
            witness: None,
            min_eigenvalue,
        })
    }

    fn check_dim(&self, n: usize) -> Result<()> {
        if n != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: n,
            });
        }
        Ok(())
    }
}

/// Outcome of [`Superoperator::sampled_nonnegativity`].
#[derive(Clone, Debug)]
pub struct NonnegativityReport<T> {
    pub trials: usize,
    /// Samples whose image was nonnegative before the first witness.
    pub passed: usize,
    pub witness: Option<MarkovDensity<T>>,
    pub min_eigenvalue: T,
}

impl<T> NonnegativityReport<T> {
    pub fn is_pass(&self) -> bool {
        self.witness.is_none()
    }
}

/// Trace-preserving linear map on H_n (a Markovian).
#[derive(Clone, Debug, PartialEq)]
pub struct MarkovOperator<T> {
    op: Superoperator<T>,
}

impl<T: Real> MarkovOperator<T> {
    /// Validates trace preservation at `1e-10`.
    pub fn new(op: Superoperator<T>) -> Result<Self> {
        let deviation = op.trace_defect();
        if !(deviation <= T::tolerance(SEMANTIC_TOL)) {
            return Err(Error::NotTracePreserving {
                deviation: deviation.as_f64(),
            });
        }
        Ok(Self { op })
    }

    pub fn from_matrix(n: usize, matrix: RealMatrix<T>) -> Result<Self> {
        Self::new(Superoperator::from_matrix(n, matrix)?)
    }

    pub fn identity(n: usize) -> Self {
        Self {
            op: Superoperator::identity(n),
        }
    }

    /// Sum operator `Q ↦ Σ_a M_a Q M_a*`.
    pub fn from_kraus(family: &[ComplexMatrix<T>]) -> Result<Self> {
        let n = check_kraus(family)?;
        let mut op = Superoperator::zero(n);
        for m in family {
            op = op.add(&Superoperator::conjugation(m)?)?;
        }
        Ok(Self { op })
    }

    /// `Q ↦ U Q U*`.
    pub fn from_unitary(u: &ComplexMatrix<T>) -> Result<Self> {
        if !u.is_square() {
            return Err(Error::NotSquare {
                rows: u.rows(),
                cols: u.cols(),
            });
        }
        let deviation = u.unitarity_defect();
        if !(deviation <= T::tolerance(SEMANTIC_TOL)) {
            return Err(Error::NotUnitary {
                deviation: deviation.as_f64(),
            });
        }
        Ok(Self {
            op: Superoperator::conjugation(u)?,
        })
    }

    /// Pinch to the diagonal, then act as `x ↦ M x`.
    pub fn from_stochastic(m: &StochasticMatrix<T>) -> Self {
        Self {
            op: Superoperator::diagonal_action(m.matrix()).expect("stochastic matrices are square"),
        }
    }

    pub fn dim(&self) -> usize {
        self.op.dim()
    }

    pub fn as_superoperator(&self) -> &Superoperator<T> {
        &self.op
    }

    pub fn into_superoperator(self) -> Superoperator<T> {
        self.op
    }

    pub fn matrix(&self) -> &RealMatrix<T> {
        self.op.matrix()
    }

    pub fn apply(&self, q: &HermitianMatrix<T>) -> Result<HermitianMatrix<T>> {
        self.op.apply(q)
    }

    /// Image of a Markov density; the trace stays 1.
    pub fn apply_density(&self, q: &MarkovDensity<T>) -> Result<MarkovDensity<T>> {
        Ok(MarkovDensity::from_hermitian_unchecked(
            self.op.apply(q.matrix())?,
        ))
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        Ok(Self {
            op: self.op.compose(&inner.op)?,
        })
    }

    pub fn power(&self, t: u64) -> Self {
        Self {
            op: self.op.power(t),
        }
    }

    pub fn is_trace_preserving(&self, tol: T) -> bool {
        self.op.is_trace_preserving(tol)
    }

    pub fn sampled_nonnegativity(
        &self,
        trials: usize,
        seed: u64,
    ) -> Result<NonnegativityReport<T>> {
        self.op.sampled_nonnegativity(trials, seed)
    }
}

/// Checks that all matrices are n×n and `Σ M_a* M_a = I` within `1e-10`.
/// Returns n.
pub fn check_kraus<T: Real>(family: &[ComplexMatrix<T>]) -> Result<usize> {
    let first = family
        .first()
        .ok_or_else(|| Error::Invalid("empty Kraus family".into()))?;
    let n = first.rows();
    let mut sum = ComplexMatrix::zeros(n, n);
    for m in family {
        if m.shape() != (n, n) {
            return Err(Error::ShapeMismatch {
                expected: format!("{n}x{n}"),
                found: format!("{}x{}", m.rows(), m.cols()),
            });
        }
        sum = &sum + &m.adjoint().matmul(m)?;
    }
    let deviation = (&sum - &ComplexMatrix::identity(n)).frobenius_norm();
    if !(deviation <= T::tolerance(SEMANTIC_TOL)) {
        return Err(Error::PovmIncomplete {
            deviation: deviation.as_f64(),
        });
    }
    Ok(n)
}

fn hermitize<T: Real>(mut m: ComplexMatrix<T>) -> ComplexMatrix<T> {
    let n = m.rows();
    let half = T::lit(0.5);
    for i in 0..n {
        m[(i, i)].im = T::zero();
        for j in i + 1..n {
            let z = (m[(i, j)] + m[(j, i)].conj()) * half;
            m[(i, j)] = z;
            m[(j, i)] = z.conj();
        }
    }
    m
}

/// Square real matrix whose columns sum to 1. Entries may be negative.
#[derive(Clone, Debug, PartialEq)]
pub struct StochasticMatrix<T> {
    matrix: RealMatrix<T>,
}

impl<T: Scalar> StochasticMatrix<T> {
    pub fn new(matrix: RealMatrix<T>) -> Result<Self> {
        if matrix.rows() != matrix.cols() {
            return Err(Error::NotSquare {
                rows: matrix.rows(),
                cols: matrix.cols(),
            });
        }
        let tol = T::tolerance(SEMANTIC_TOL);
        for (column, sum) in matrix.column_sums().into_iter().enumerate() {
            if !((sum - T::one()).magnitude() <= tol) {
                return Err(Error::ColumnSum {
                    column,
                    sum: sum.as_f64(),
                });
            }
        }
        Ok(Self { matrix })
    }

    /// Additionally requires every entry to be nonnegative.
    pub fn new_nonnegative(matrix: RealMatrix<T>) -> Result<Self> {
        let s = Self::new(matrix)?;
        for r in 0..s.size() {
            for c in 0..s.size() {
                if s.matrix[(r, c)] < T::zero() {
                    return Err(Error::NegativeEntry { row: r, col: c });
                }
            }
        }
        Ok(s)
    }

    pub fn from_rows(rows: &[Vec<T>]) -> Result<Self> {
        Self::new(RealMatrix::from_rows(rows)?)
    }

    pub fn size(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &RealMatrix<T> {
        &self.matrix
    }

    pub fn is_nonnegative(&self) -> bool {
        self.matrix.as_slice().iter().all(|&x| x >= T::zero())
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        Ok(Self {
            matrix: self.matrix.matmul(&other.matrix)?,
        })
    }
}
