//! Hermitian matrices, Markov densities and their spectral calculus.
//!
//! The real vector space of n×n Hermitian matrices has dimension n² and
//! carries the Hilbert–Schmidt inner product `⟨A|B⟩ = tr(A* B)`. Every
//! superoperator in [`crate::operator`] is expressed in the orthonormal
//! basis returned by [`HermitianBasis::canonical`].

use std::cmp::Ordering;

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::{vector_norm, ComplexMatrix};
use crate::scalar::Real;

/// Trace and nonnegativity slack for semantic checks.
pub const SEMANTIC_TOL: f64 = 1e-10;

/// Per-dimension slack for the Hermiticity check at construction.
pub const HERMITIAN_ATOL: f64 = 1e-12;

const JACOBI_MAX_SWEEPS: usize = 100;
const JACOBI_REL_TOL: f64 = 1e-12;

/// Conjugate transpose.
pub fn adjoint<T: Real>(c: &ComplexMatrix<T>) -> ComplexMatrix<T> {
    c.adjoint()
}

/// Hilbert–Schmidt inner product `tr(C* D)`.
pub fn hs_inner<T: Real>(c: &ComplexMatrix<T>, d: &ComplexMatrix<T>) -> Result<Complex<T>> {
    c.hs_inner(d)
}

/// `‖U U* − I‖ ≤ tol`.
pub fn is_unitary<T: Real>(u: &ComplexMatrix<T>, tol: T) -> bool {
    u.is_square() && u.unitarity_defect() <= tol
}

/// A self-adjoint complex matrix.
#[derive(Clone, PartialEq)]
pub struct HermitianMatrix<T> {
    inner: ComplexMatrix<T>,
}

impl<T: Real> HermitianMatrix<T> {
    /// Validates `‖C − C*‖ ≤ 1e-12·n·max(1, ‖C‖)` and stores the exact
    /// Hermitian part `(C + C*)/2`.
    pub fn new(c: ComplexMatrix<T>) -> Result<Self> {
        if !c.is_square() {
            return Err(Error::NotSquare {
                rows: c.rows(),
                cols: c.cols(),
            });
        }
        let n = c.rows();
        let adj = c.adjoint();
        let deviation = (&c - &adj).frobenius_norm();
        let atol = T::tolerance(HERMITIAN_ATOL)
            * T::from_usize(n.max(1))
            * c.frobenius_norm().max(T::one());
        if !(deviation <= atol) {
            return Err(Error::NotHermitian {
                deviation: deviation.as_f64(),
            });
        }
        let half = T::lit(0.5);
        let mut sym = (&c + &adj).scale_real(half);
        for i in 0..n {
            sym[(i, i)].im = T::zero();
        }
        Ok(Self { inner: sym })
    }

    pub fn from_real_diagonal(diag: &[T]) -> Self {
        Self {
            inner: ComplexMatrix::from_real_diagonal(diag),
        }
    }

    pub fn identity(n: usize) -> Self {
        Self {
            inner: ComplexMatrix::identity(n),
        }
    }

    pub fn zeros(n: usize) -> Self {
        Self {
            inner: ComplexMatrix::zeros(n, n),
        }
    }

    /// Trusted constructor for results of Hermiticity-preserving algebra.
    pub(crate) fn from_hermitian_unchecked(inner: ComplexMatrix<T>) -> Self {
        debug_assert!(inner.is_square());
        Self { inner }
    }

    pub fn dim(&self) -> usize {
        self.inner.rows()
    }

    pub fn as_complex(&self) -> &ComplexMatrix<T> {
        &self.inner
    }

    pub fn into_complex(self) -> ComplexMatrix<T> {
        self.inner
    }

    pub fn trace(&self) -> T {
        self.inner.trace().re
    }

    pub fn diagonal(&self) -> Vec<T> {
        (0..self.dim()).map(|i| self.inner[(i, i)].re).collect()
    }

    pub fn frobenius_norm(&self) -> T {
        self.inner.frobenius_norm()
    }

    /// `⟨self|other⟩`, always real for Hermitian arguments.
    pub fn inner(&self, other: &Self) -> Result<T> {
        Ok(self.inner.hs_inner(&other.inner)?.re)
    }

    /// Purity-style quadratic `tr(Q²)`.
    pub fn trace_of_square(&self) -> T {
        self.inner.as_slice().iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn add(&self, other: &Self) -> Self {
        Self {
            inner: &self.inner + &other.inner,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self {
            inner: &self.inner - &other.inner,
        }
    }

    pub fn scale(&self, k: T) -> Self {
        Self {
            inner: self.inner.scale_real(k),
        }
    }

    /// `v* Q v`.
    pub fn quadratic_form(&self, v: &[Complex<T>]) -> Result<T> {
        let qv = self.inner.matvec(v)?;
        Ok(crate::linalg::vector_inner(v, &qv).re)
    }

    /// Coordinates in the canonical orthonormal Hermitian basis.
    pub fn coords(&self) -> Vec<T> {
        let n = self.dim();
        let sqrt2 = T::SQRT_2();
        let mut out = Vec::with_capacity(n * n);
        out.extend((0..n).map(|i| self.inner[(i, i)].re));
        for i in 0..n {
            for j in i + 1..n {
                let z = self.inner[(i, j)];
                out.push(sqrt2 * z.re);
                out.push(sqrt2 * z.im);
            }
        }
        out
    }

    /// Inverse of [`HermitianMatrix::coords`].
    pub fn from_coords(n: usize, coords: &[T]) -> Result<Self> {
        if coords.len() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                found: coords.len(),
            });
        }
        let inv = T::FRAC_1_SQRT_2();
        let mut m = ComplexMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex::new(coords[i], T::zero());
        }
        let mut k = n;
        for i in 0..n {
            for j in i + 1..n {
                let z = Complex::new(coords[k] * inv, coords[k + 1] * inv);
                m[(i, j)] = z;
                m[(j, i)] = z.conj();
                k += 2;
            }
        }
        Ok(Self { inner: m })
    }
}

impl<T: std::fmt::Debug> std::fmt::Debug for HermitianMatrix<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "HermitianMatrix({:?})", self.inner)
    }
}

/// Hermitian matrix of unit trace. Eigenvalues may be negative.
#[derive(Clone, PartialEq)]
pub struct MarkovDensity<T> {
    matrix: HermitianMatrix<T>,
}

impl<T: Real> MarkovDensity<T> {
    pub fn new(matrix: HermitianMatrix<T>) -> Result<Self> {
        let trace = matrix.trace();
        if !((trace - T::one()).abs() <= T::tolerance(SEMANTIC_TOL)) {
            return Err(Error::TraceNotOne {
                trace: trace.as_f64(),
            });
        }
        Ok(Self { matrix })
    }

    pub fn from_complex(c: ComplexMatrix<T>) -> Result<Self> {
        Self::new(HermitianMatrix::new(c)?)
    }

    pub fn from_real_diagonal(diag: &[T]) -> Result<Self> {
        Self::new(HermitianMatrix::from_real_diagonal(diag))
    }

    /// The maximally mixed density `I/n`.
    pub fn maximally_mixed(n: usize) -> Self {
        Self {
            matrix: HermitianMatrix::identity(n).scale(T::one() / T::from_usize(n)),
        }
    }

    pub(crate) fn from_hermitian_unchecked(matrix: HermitianMatrix<T>) -> Self {
        Self { matrix }
    }

    pub fn matrix(&self) -> &HermitianMatrix<T> {
        &self.matrix
    }

    pub fn into_matrix(self) -> HermitianMatrix<T> {
        self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    /// Quantum densities are the nonnegative Markov densities.
    pub fn is_quantum(&self, tol: T) -> Result<bool> {
        is_nonnegative(&self.matrix, tol)
    }
}

impl<T: std::fmt::Debug> std::fmt::Debug for MarkovDensity<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "MarkovDensity({:?})", self.matrix.inner)
    }
}

impl<T: Real> AsRef<HermitianMatrix<T>> for MarkovDensity<T> {
    fn as_ref(&self) -> &HermitianMatrix<T> {
        &self.matrix
    }
}

/// `vv*/⟨v|v⟩`.
pub fn pure_state<T: Real>(v: &[Complex<T>]) -> Result<MarkovDensity<T>> {
    let norm = vector_norm(v);
    if !(norm > T::zero()) {
        return Err(Error::ZeroVector);
    }
    let mut m = ComplexMatrix::outer(v, v).scale_real(T::one() / (norm * norm));
    for i in 0..v.len() {
        m[(i, i)].im = T::zero();
    }
    Ok(MarkovDensity::from_hermitian_unchecked(
        HermitianMatrix::from_hermitian_unchecked(m),
    ))
}

/// Real eigenvalues (descending) with orthonormal eigenvector columns.
#[derive(Clone, Debug)]
pub struct SpectralDecomposition<T> {
    pub eigenvalues: Vec<T>,
    pub eigenvectors: ComplexMatrix<T>,
}

impl<T: Real> SpectralDecomposition<T> {
    /// `Σ λ_i v_i v_i*`.
    pub fn reconstruct(&self) -> ComplexMatrix<T> {
        let n = self.eigenvalues.len();
        let mut out = ComplexMatrix::zeros(n, n);
        for (k, &lambda) in self.eigenvalues.iter().enumerate() {
            let v = self.eigenvectors.column(k);
            for r in 0..n {
                for c in 0..n {
                    out[(r, c)] = out[(r, c)] + v[r] * v[c].conj() * lambda;
                }
            }
        }
        out
    }

    pub fn min_eigenvalue(&self) -> T {
        self.eigenvalues.last().copied().unwrap_or_else(T::zero)
    }
}

/// Cyclic Jacobi eigensolver for Hermitian matrices.
///
/// Each rotation first removes the phase of the pivot `a_pq` with a
/// diagonal unitary, then applies the real symmetric Jacobi rotation.
/// Converges when the off-diagonal Frobenius norm drops below
/// `1e-12·‖Q‖`.
pub fn spectral_decompose<T: Real>(q: &HermitianMatrix<T>) -> Result<SpectralDecomposition<T>> {
    let n = q.dim();
    let mut a = q.as_complex().clone();
    let mut v = ComplexMatrix::<T>::identity(n);
    let rel = T::lit(JACOBI_REL_TOL).max(T::epsilon() * T::lit(16.0));
    let threshold = rel * q.frobenius_norm();

    let off_norm = |a: &ComplexMatrix<T>| -> T {
        let mut s = T::zero();
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s = s + a[(i, j)].norm_sqr();
                }
            }
        }
        s.sqrt()
    };

    let mut converged = off_norm(&a) <= threshold;
    let mut sweeps = 0;
    while !converged && sweeps < JACOBI_MAX_SWEEPS {
        sweeps += 1;
        for p in 0..n {
            for r in p + 1..n {
                jacobi_rotate(&mut a, &mut v, p, r);
            }
        }
        converged = off_norm(&a) <= threshold;
    }
    if !converged {
        return Err(Error::NoConvergence {
            sweeps: JACOBI_MAX_SWEEPS,
        });
    }

    let mut pairs: Vec<(T, Vec<Complex<T>>)> = (0..n)
        .map(|k| {
            let mut col = v.column(k);
            normalize_phase(&mut col);
            (a[(k, k)].re, col)
        })
        .collect();
    pairs.sort_by(|(la, va), (lb, vb)| match lb.partial_cmp(la) {
        Some(Ordering::Equal) | None => lexicographic(va, vb),
        Some(ord) => ord,
    });

    let eigenvalues = pairs.iter().map(|(l, _)| *l).collect();
    let eigenvectors = ComplexMatrix::from_fn(n, n, |r, c| pairs[c].1[r]);
    Ok(SpectralDecomposition {
        eigenvalues,
        eigenvectors,
    })
}

fn jacobi_rotate<T: Real>(a: &mut ComplexMatrix<T>, v: &mut ComplexMatrix<T>, p: usize, q: usize) {
    let apq = a[(p, q)];
    let r = apq.norm();
    if r == T::zero() {
        return;
    }
    let n = a.rows();
    // Phase that makes the pivot real and positive.
    let phase = apq.conj() / r;
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    let theta = (aqq - app) / (T::lit(2.0) * r);
    let t = if theta.is_infinite() {
        T::zero()
    } else {
        let sign = if theta >= T::zero() {
            T::one()
        } else {
            -T::one()
        };
        sign / (theta.abs() + (theta * theta + T::one()).sqrt())
    };
    let c = T::one() / (t * t + T::one()).sqrt();
    let s = t * c;

    // Block of U = diag(1, phase) · [[c, s], [-s, c]] on indices (p, q).
    let u_pp = Complex::new(c, T::zero());
    let u_pq = Complex::new(s, T::zero());
    let u_qp = phase * (-s);
    let u_qq = phase * c;

    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * u_pp + akq * u_qp;
        a[(k, q)] = akp * u_pq + akq * u_qq;
    }
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = u_pp.conj() * apk + u_qp.conj() * aqk;
        a[(q, k)] = u_pq.conj() * apk + u_qq.conj() * aqk;
    }
    a[(p, q)] = Complex::zero();
    a[(q, p)] = Complex::zero();
    a[(p, p)].im = T::zero();
    a[(q, q)].im = T::zero();

    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * u_pp + vkq * u_qp;
        v[(k, q)] = vkp * u_pq + vkq * u_qq;
    }
}

/// Rotates the vector so that its first non-negligible component is real
/// and positive.
fn normalize_phase<T: Real>(v: &mut [Complex<T>]) {
    let cutoff = T::lit(1e-8);
    if let Some(&pivot) = v.iter().find(|z| z.norm() > cutoff) {
        let phase = pivot.conj() / pivot.norm();
        for z in v.iter_mut() {
            *z = *z * phase;
        }
    }
}

fn lexicographic<T: Real>(a: &[Complex<T>], b: &[Complex<T>]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        let ord =
            x.re.partial_cmp(&y.re)
                .unwrap_or(Ordering::Equal)
                .then(x.im.partial_cmp(&y.im).unwrap_or(Ordering::Equal));
        if ord != Ordering::Equal {
            return ord;
        }
    }
    Ordering::Equal
}

/// `min λ(Q) ≥ −tol`.
pub fn is_nonnegative<T: Real>(q: &HermitianMatrix<T>, tol: T) -> Result<bool> {
    Ok(spectral_decompose(q)?.min_eigenvalue() >= -tol)
}

/// Which canonical basis element a coordinate refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BasisElement {
    /// `E_ii`
    Diagonal(usize),
    /// `(E_ij + E_ji)/√2`
    Symmetric(usize, usize),
    /// `i(E_ij − E_ji)/√2`
    Antisymmetric(usize, usize),
}

impl BasisElement {
    /// Trace of the element: 1 for diagonal units, 0 otherwise.
    pub fn is_diagonal(&self) -> bool {
        matches!(self, BasisElement::Diagonal(_))
    }
}

/// Labels of the n² canonical basis elements, in coordinate order:
/// `D_1..D_n`, then `S_ij, A_ij` for each `i < j` in lexicographic order.
pub fn basis_layout(n: usize) -> Vec<BasisElement> {
    let mut out: Vec<BasisElement> = (0..n).map(BasisElement::Diagonal).collect();
    for i in 0..n {
        for j in i + 1..n {
            out.push(BasisElement::Symmetric(i, j));
            out.push(BasisElement::Antisymmetric(i, j));
        }
    }
    out
}

/// Orthonormal basis of the n²-dimensional real space of Hermitian matrices.
#[derive(Clone, Debug)]
pub struct HermitianBasis<T> {
    n: usize,
    elements: Vec<HermitianMatrix<T>>,
}

impl<T: Real> HermitianBasis<T> {
    pub fn canonical(n: usize) -> Self {
        let inv = T::FRAC_1_SQRT_2();
        let zero = T::zero();
        let elements = basis_layout(n)
            .into_iter()
            .map(|e| {
                let mut m = ComplexMatrix::zeros(n, n);
                match e {
                    BasisElement::Diagonal(i) => m[(i, i)] = Complex::one(),
                    BasisElement::Symmetric(i, j) => {
                        m[(i, j)] = Complex::new(inv, zero);
                        m[(j, i)] = Complex::new(inv, zero);
                    }
                    BasisElement::Antisymmetric(i, j) => {
                        m[(i, j)] = Complex::new(zero, inv);
                        m[(j, i)] = Complex::new(zero, -inv);
                    }
                }
                HermitianMatrix::from_hermitian_unchecked(m)
            })
            .collect();
        Self { n, elements }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn elements(&self) -> &[HermitianMatrix<T>] {
        &self.elements
    }

    pub fn coords(&self, q: &HermitianMatrix<T>) -> Result<Vec<T>> {
        if q.dim() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: q.dim(),
            });
        }
        Ok(q.coords())
    }

    pub fn from_coords(&self, coords: &[T]) -> Result<HermitianMatrix<T>> {
        HermitianMatrix::from_coords(self.n, coords)
    }
}
