//! Kraus (POVM) measurements and general Markov measurements.
//!
//! A Kraus measurement `{M_a}` assigns to a Markov density Q the outcome
//! values `p_Q(a) = tr(M_a Q M_a*)`. For a Markov density that is not
//! nonnegative some of these values may be negative; the measurement is
//! *observable* in Q exactly when none are.
//!
//! A Markov measurement generalises the per-outcome maps `Q ↦ M_a Q M_a*`
//! to arbitrary linear operators `µ_a` whose sum is trace preserving.
//! Words `w = a_1…a_t` act by `µ_w = µ_{a_t} ∘ … ∘ µ_{a_1}`.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::hermitian::{HermitianMatrix, MarkovDensity, SEMANTIC_TOL};
use crate::linalg::ComplexMatrix;
use crate::operator::{check_kraus, MarkovOperator, Superoperator};
use crate::scalar::{Real, Scalar};
use crate::words::{check_enumeration, for_each_word, Scale, Word};

/// Probabilities below this are too small to condition on.
pub const POSTERIOR_THRESHOLD: f64 = 1e-12;

/// Outcome values over a scale. Sums to 1; entries may be negative.
#[derive(Clone, Debug, PartialEq)]
pub struct OutcomeDistribution<T> {
    pub scale: Scale,
    pub values: Vec<T>,
}

impl<T: Scalar> OutcomeDistribution<T> {
    pub fn new(scale: Scale, values: Vec<T>) -> Result<Self> {
        if values.len() != scale.len() {
            return Err(Error::DimensionMismatch {
                expected: scale.len(),
                found: values.len(),
            });
        }
        Ok(Self { scale, values })
    }

    pub fn get(&self, symbol: &str) -> Result<T> {
        Ok(self.values[self.scale.index_of(symbol)?])
    }

    pub fn total(&self) -> T {
        T::sum_iter(self.values.iter().copied())
    }

    pub fn min(&self) -> T {
        self.values
            .iter()
            .copied()
            .fold(None, |m: Option<T>, x| match m {
                Some(m) if m <= x => Some(m),
                _ => Some(x),
            })
            .unwrap_or_else(T::zero)
    }

    /// Every value is at least `-tol`.
    pub fn is_observable(&self, tol: T) -> bool {
        self.values.iter().all(|&v| v >= -tol)
    }
}

/// Quantum measurement `{M_a | a ∈ Σ}` with `Σ_a M_a* M_a = I`.
#[derive(Clone, Debug)]
pub struct KrausMeasurement<T> {
    scale: Scale,
    kraus: Vec<ComplexMatrix<T>>,
    n: usize,
}

impl<T: Real> KrausMeasurement<T> {
    pub fn new(scale: Scale, kraus: Vec<ComplexMatrix<T>>) -> Result<Self> {
        if kraus.len() != scale.len() {
            return Err(Error::DimensionMismatch {
                expected: scale.len(),
                found: kraus.len(),
            });
        }
        let n = check_kraus(&kraus)?;
        Ok(Self { scale, kraus, n })
    }

    /// Projective measurement in the computational basis, symbols `0..n`.
    pub fn computational(n: usize) -> Self {
        let scale = Scale::new((0..n).map(|i| i.to_string())).expect("distinct");
        let kraus = (0..n)
            .map(|i| {
                let mut m = ComplexMatrix::zeros(n, n);
                m[(i, i)] = Complex::new(T::one(), T::zero());
                m
            })
            .collect();
        Self { scale, kraus, n }
    }

    pub fn scale(&self) -> &Scale {
        &self.scale
    }

    pub fn kraus(&self) -> &[ComplexMatrix<T>] {
        &self.kraus
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// POVM elements `X_a = M_a* M_a`, so that `⟨X_a|Q⟩ = tr(M_a Q M_a*)`.
    pub fn povm(&self) -> Vec<HermitianMatrix<T>> {
        self.kraus
            .iter()
            .map(|m| {
                HermitianMatrix::from_hermitian_unchecked(m.adjoint().matmul(m).expect("square"))
            })
            .collect()
    }

    fn check_dim(&self, q: &MarkovDensity<T>) -> Result<()> {
        if q.dim() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: q.dim(),
            });
        }
        Ok(())
    }

    pub fn outcome_distribution(&self, q: &MarkovDensity<T>) -> Result<OutcomeDistribution<T>> {
        self.check_dim(q)?;
        let values = self
            .kraus
            .iter()
            .map(|m| Ok(m.conjugate(q.matrix().as_complex())?.trace().re))
            .collect::<Result<_>>()?;
        OutcomeDistribution::new(self.scale.clone(), values)
    }

    pub fn is_observable(&self, q: &MarkovDensity<T>, tol: T) -> Result<bool> {
        Ok(self.outcome_distribution(q)?.is_observable(tol))
    }

    /// `(p_Q(a), Q_a)` with `p_Q(a) Q_a = M_a Q M_a*`.
    pub fn posterior(&self, q: &MarkovDensity<T>, symbol: &str) -> Result<(T, MarkovDensity<T>)> {
        self.check_dim(q)?;
        let a = self.scale.index_of(symbol)?;
        let image = self.kraus[a].conjugate(q.matrix().as_complex())?;
        let p = image.trace().re;
        if !(p > T::lit(POSTERIOR_THRESHOLD)) {
            return Err(Error::ZeroProbability {
                probability: p.as_f64(),
            });
        }
        let posterior = MarkovDensity::from_complex(image.scale_real(T::one() / p))?;
        Ok((p, posterior))
    }

    /// Sum operator `Q ↦ Σ_a M_a Q M_a*`.
    pub fn sum_operator(&self) -> MarkovOperator<T> {
        MarkovOperator::from_kraus(&self.kraus).expect("validated at construction")
    }

    pub fn as_markov_measurement(&self) -> MarkovMeasurement<T> {
        let operators = self
            .kraus
            .iter()
            .map(|m| Superoperator::conjugation(m).expect("square"))
            .collect();
        MarkovMeasurement {
            scale: self.scale.clone(),
            operators,
            n: self.n,
        }
    }
}

/// Family of linear operators `{µ_a}` on H_n whose sum is trace preserving.
#[derive(Clone, Debug)]
pub struct MarkovMeasurement<T> {
    scale: Scale,
    operators: Vec<Superoperator<T>>,
    n: usize,
}

/// Values `tr(µ_w(Q))` for all words of one length, lexicographic.
#[derive(Clone, Debug)]
pub struct WordDistribution<T> {
    pub scale: Scale,
    pub length: usize,
    pub words: Vec<Word>,
    pub values: Vec<T>,
}

impl<T: Real> WordDistribution<T> {
    pub fn total(&self) -> T {
        self.values.iter().copied().sum()
    }

    pub fn min(&self) -> T {
        self.values.iter().copied().fold(T::infinity(), T::min)
    }

    pub fn is_observable(&self, tol: T) -> bool {
        self.values.iter().all(|&v| v >= -tol)
    }

    pub fn get(&self, word: &[usize]) -> Option<T> {
        self.words
            .iter()
            .position(|w| w == word)
            .map(|i| self.values[i])
    }
}

impl<T: Real> MarkovMeasurement<T> {
    pub fn new(scale: Scale, operators: Vec<Superoperator<T>>) -> Result<Self> {
        if operators.len() != scale.len() {
            return Err(Error::DimensionMismatch {
                expected: scale.len(),
                found: operators.len(),
            });
        }
        let n = operators[0].dim();
        let mut sum = Superoperator::zero(n);
        for op in &operators {
            sum = sum.add(op)?;
        }
        MarkovOperator::new(sum)?;
        Ok(Self {
            scale,
            operators,
            n,
        })
    }

    pub fn scale(&self) -> &Scale {
        &self.scale
    }

    pub fn operators(&self) -> &[Superoperator<T>] {
        &self.operators
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// `µ_X = Σ_a µ_a`.
    pub fn sum_operator(&self) -> MarkovOperator<T> {
        let mut sum = Superoperator::zero(self.n);
        for op in &self.operators {
            sum = sum.add(op).expect("same dimension");
        }
        MarkovOperator::new(sum).expect("validated at construction")
    }

    /// `µ_w = µ_{a_t} ∘ … ∘ µ_{a_1}`; the empty word gives the identity.
    pub fn word_operator(&self, word: &[usize]) -> Result<Superoperator<T>> {
        let mut acc = Superoperator::identity(self.n);
        for &a in word {
            let op = self
                .operators
                .get(a)
                .ok_or_else(|| Error::UnknownSymbol(format!("#{a}")))?;
            acc = op.compose(&acc)?;
        }
        Ok(acc)
    }

    pub fn word_operator_str(&self, word: &str) -> Result<Superoperator<T>> {
        self.word_operator(&self.scale.parse_word(word)?)
    }

    /// `tr(µ_w(Q))` for every `w ∈ Σ^t`.
    pub fn word_distribution(
        &self,
        q: &MarkovDensity<T>,
        t: usize,
        cap: u64,
    ) -> Result<WordDistribution<T>> {
        if q.dim() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: q.dim(),
            });
        }
        let count = check_enumeration(self.scale.len(), t, cap)? as usize;
        let n = self.n;
        let mut words = Vec::with_capacity(count);
        let mut values = Vec::with_capacity(count);
        for_each_word(
            self.scale.len(),
            t,
            q.matrix().coords(),
            |coords, a| {
                self.operators[a]
                    .apply_coords(coords)
                    .expect("dimension checked")
            },
            |w, coords| {
                words.push(w.to_vec());
                values.push(coords[..n].iter().copied().sum());
            },
        );
        Ok(WordDistribution {
            scale: self.scale.clone(),
            length: t,
            words,
            values,
        })
    }

    pub fn outcome_distribution(&self, q: &MarkovDensity<T>) -> Result<OutcomeDistribution<T>> {
        let d = self.word_distribution(q, 1, u64::MAX)?;
        OutcomeDistribution::new(self.scale.clone(), d.values)
    }

    /// `X^t` observable in Q: every word value is at least `-tol`.
    pub fn is_t_observable(
        &self,
        q: &MarkovDensity<T>,
        t: usize,
        tol: T,
        cap: u64,
    ) -> Result<bool> {
        if t == 0 {
            return Ok(true);
        }
        Ok(self.word_distribution(q, t, cap)?.is_observable(tol))
    }

    /// Smallest `t ≤ max_t` at which the measurement stops being
    /// t-observable, if any.
    pub fn first_unobservable_depth(
        &self,
        q: &MarkovDensity<T>,
        max_t: usize,
        tol: T,
        cap: u64,
    ) -> Result<Option<usize>> {
        for t in 1..=max_t {
            if !self.is_t_observable(q, t, tol, cap)? {
                return Ok(Some(t));
            }
        }
        Ok(None)
    }
}

/// Default slack used by observability checks.
pub fn default_tol<T: Scalar>() -> T {
    T::tolerance(SEMANTIC_TOL)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hermitian::pure_state;
    use crate::random;
    use crate::words::DEFAULT_ENUM_CAP;

    fn z_measurement() -> KrausMeasurement<f64> {
        KrausMeasurement::computational(2)
    }

    fn x_measurement() -> KrausMeasurement<f64> {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let plus = [Complex::new(s, 0.0), Complex::new(s, 0.0)];
        let minus = [Complex::new(s, 0.0), Complex::new(-s, 0.0)];
        KrausMeasurement::new(
            Scale::new(["+", "-"]).unwrap(),
            vec![
                ComplexMatrix::outer(&plus, &plus),
                ComplexMatrix::outer(&minus, &minus),
            ],
        )
        .unwrap()
    }

    fn plus_state() -> MarkovDensity<f64> {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        pure_state(&[Complex::new(s, 0.0), Complex::new(s, 0.0)]).unwrap()
    }

    #[test]
    fn outcome_distribution_examples() {
        let z = z_measurement();
        let d = z
            .outcome_distribution(&MarkovDensity::from_real_diagonal(&[0.3, 0.7]).unwrap())
            .unwrap();
        assert_eq!(d.values, vec![0.3, 0.7]);
        let d = z.outcome_distribution(&plus_state()).unwrap();
        assert!((d.values[0] - 0.5).abs() < 1e-15 && (d.values[1] - 0.5).abs() < 1e-15);
        let d = z
            .outcome_distribution(&MarkovDensity::from_real_diagonal(&[1.25, -0.25]).unwrap())
            .unwrap();
        assert_eq!(d.values, vec![1.25, -0.25]);
        assert_eq!(d.total(), 1.0);
    }

    #[test]
    fn observability_examples() {
        let q = MarkovDensity::from_real_diagonal(&[1.25, -0.25]).unwrap();
        assert!(!z_measurement().is_observable(&q, 1e-10).unwrap());
        let d = x_measurement().outcome_distribution(&q).unwrap();
        assert!((d.values[0] - 0.5).abs() < 1e-15 && (d.values[1] - 0.5).abs() < 1e-15);
        assert!(x_measurement().is_observable(&q, 1e-10).unwrap());
        let mut rng = random::seeded(4);
        let qd = random::quantum_density::<f64, _>(2, &mut rng);
        assert!(x_measurement().is_observable(&qd, 0.0).unwrap());
    }

    #[test]
    fn posterior_examples() {
        let z = z_measurement();
        let (p, post) = z.posterior(&plus_state(), "0").unwrap();
        assert!((p - 0.5).abs() < 1e-15);
        assert!(
            (&post.into_matrix().into_complex() - &ComplexMatrix::from_real_diagonal(&[1.0, 0.0]))
                .frobenius_norm()
                < 1e-15
        );
        let e0 = MarkovDensity::from_real_diagonal(&[1.0, 0.0]).unwrap();
        let (p, post) = z.posterior(&e0, "0").unwrap();
        assert_eq!(p, 1.0);
        assert_eq!(post.matrix().diagonal(), vec![1.0, 0.0]);
        assert!(matches!(
            z.posterior(&e0, "1"),
            Err(Error::ZeroProbability { .. })
        ));
        assert!(matches!(
            z.posterior(&e0, "7"),
            Err(Error::UnknownSymbol(_))
        ));
    }

    #[test]
    fn unary_measurement_is_unitary_channel() {
        let mut rng = random::seeded(9);
        let u = random::unitary::<f64, _>(3, &mut rng);
        let m = KrausMeasurement::new(Scale::new(["u"]).unwrap(), vec![u.clone()]).unwrap();
        let mm = m.as_markov_measurement();
        let direct = MarkovOperator::from_unitary(&u).unwrap();
        assert!(mm.operators()[0].distance(direct.as_superoperator()) < 1e-12);
    }

    #[test]
    fn projective_pair_sums_to_pinching() {
        let mm = z_measurement().as_markov_measurement();
        let pinch = MarkovOperator::from_stochastic(
            &crate::operator::StochasticMatrix::new(crate::linalg::RealMatrix::identity(2))
                .unwrap(),
        );
        assert!(
            mm.sum_operator()
                .as_superoperator()
                .distance(pinch.as_superoperator())
                < 1e-15
        );
    }

    #[test]
    fn word_operator_examples() {
        let mm = z_measurement().as_markov_measurement();
        assert_eq!(mm.word_operator(&[]).unwrap(), Superoperator::identity(2));
        let w01 = mm.word_operator_str("01").unwrap();
        assert!(w01.matrix().max_abs() < 1e-15);
        assert!(matches!(
            mm.word_operator_str("2"),
            Err(Error::UnknownSymbol(_))
        ));
    }

    #[test]
    fn t_observability_basics() {
        let mut rng = random::seeded(21);
        let ks = random::kraus_family::<f64, _>(3, 2, &mut rng);
        let m = KrausMeasurement::new(Scale::new(["a", "b"]).unwrap(), ks).unwrap();
        let mm = m.as_markov_measurement();
        let q = random::quantum_density::<f64, _>(3, &mut rng);
        for t in 0..5 {
            assert!(mm.is_t_observable(&q, t, 1e-10, DEFAULT_ENUM_CAP).unwrap());
            let d = mm.word_distribution(&q, t, DEFAULT_ENUM_CAP).unwrap();
            assert!((d.total() - 1.0).abs() < 1e-9);
        }
        // t = 0 is always observable, even for a non-quantum density
        let bad = MarkovDensity::from_real_diagonal(&[2.0, -0.5, -0.5]).unwrap();
        assert!(mm.is_t_observable(&bad, 0, 0.0, DEFAULT_ENUM_CAP).unwrap());
        assert!(matches!(
            mm.word_distribution(&q, 30, DEFAULT_ENUM_CAP),
            Err(Error::EnumerationCap { .. })
        ));
    }

    #[test]
    fn rejects_mismatched_scale() {
        let k = vec![ComplexMatrix::<f64>::identity(2)];
        assert!(KrausMeasurement::new(Scale::new(["a", "b"]).unwrap(), k).is_err());
        let ops = vec![
            Superoperator::<f64>::identity(2),
            Superoperator::identity(2),
        ];
        assert!(matches!(
            MarkovMeasurement::new(Scale::new(["a", "b"]).unwrap(), ops),
            Err(Error::NotTracePreserving { .. })
        ));
    }
}
