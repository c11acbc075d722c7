//! Observable operator models.
//!
//! An OOM over a scale Σ is a family of real m×m matrices `M_a` together with
//! a real vector π such that `M = Σ_a M_a` has unit column sums and π sums
//! to 1. Word probabilities are `p(a_1…a_t) = 1ᵀ M_{a_t} ⋯ M_{a_1} π`; entries
//! of the matrices and of π may be negative.

use crate::error::{Error, Result};
use crate::hermitian::{MarkovDensity, SEMANTIC_TOL};
use crate::hidden::{HiddenStateSpace, InformationFunction};
use crate::linalg::RealMatrix;
use crate::measurement::{MarkovMeasurement, OutcomeDistribution};
use crate::operator::{StochasticMatrix, Superoperator};
use crate::scalar::{Real, Scalar};
use crate::words::{check_enumeration, for_each_word, words_up_to, Scale, Word};

/// Below this a word probability is treated as zero when conditioning.
pub const CONDITION_THRESHOLD: f64 = 1e-12;
/// Relative singular-value cutoff for the prediction-matrix rank.
pub const RANK_TOL: f64 = 1e-8;
/// Slack below zero tolerated by the entropy computation.
pub const ENTROPY_NEG_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct ObservableOperatorModel<T> {
    scale: Scale,
    operators: Vec<RealMatrix<T>>,
    pi: Vec<T>,
}

fn column_sum_defect<T: Scalar>(ops: &[RealMatrix<T>], m: usize) -> T {
    let mut total = RealMatrix::zeros(m, m);
    for op in ops {
        total = &total + op;
    }
    total
        .column_sums()
        .into_iter()
        .map(|s| (s - T::one()).magnitude())
        .fold(T::zero(), |a, b| if b > a { b } else { a })
}

fn pi_sum_defect<T: Scalar>(pi: &[T]) -> T {
    (T::sum_iter(pi.iter().copied()) - T::one()).magnitude()
}

impl<T: Scalar> ObservableOperatorModel<T> {
    pub fn new(scale: Scale, operators: Vec<RealMatrix<T>>, pi: Vec<T>) -> Result<Self> {
        if operators.len() != scale.len() {
            return Err(Error::DimensionMismatch {
                expected: scale.len(),
                found: operators.len(),
            });
        }
        let m = pi.len();
        if m == 0 {
            return Err(Error::EmptySpace);
        }
        for op in &operators {
            if op.shape() != (m, m) {
                return Err(Error::ShapeMismatch {
                    expected: format!("{m}x{m}"),
                    found: format!("{}x{}", op.rows(), op.cols()),
                });
            }
        }
        let tol = T::tolerance(SEMANTIC_TOL);
        let mut total = RealMatrix::zeros(m, m);
        for op in &operators {
            total = &total + op;
        }
        for (column, sum) in total.column_sums().into_iter().enumerate() {
            if !((sum - T::one()).magnitude() <= tol) {
                return Err(Error::ColumnSum {
                    column,
                    sum: sum.as_f64(),
                });
            }
        }
        if !(pi_sum_defect(&pi) <= tol) {
            return Err(Error::NotNormalized {
                sum: T::sum_iter(pi.iter().copied()).as_f64(),
            });
        }
        Ok(Self {
            scale,
            operators,
            pi,
        })
    }

    pub fn dim(&self) -> usize {
        self.pi.len()
    }

    pub fn scale(&self) -> &Scale {
        &self.scale
    }

    pub fn operators(&self) -> &[RealMatrix<T>] {
        &self.operators
    }

    pub fn pi(&self) -> &[T] {
        &self.pi
    }

    /// `M = Σ_a M_a`.
    pub fn markov_matrix(&self) -> StochasticMatrix<T> {
        let m = self.dim();
        let mut total = RealMatrix::zeros(m, m);
        for op in &self.operators {
            total = &total + op;
        }
        StochasticMatrix::new(total).expect("checked at construction")
    }

    fn check_word(&self, word: &[usize]) -> Result<()> {
        match word.iter().find(|&&a| a >= self.scale.len()) {
            Some(a) => Err(Error::UnknownSymbol(format!("#{a}"))),
            None => Ok(()),
        }
    }

    /// `M_a x`.
    pub fn step(&self, state: &[T], symbol: usize) -> Vec<T> {
        self.operators[symbol]
            .matvec(state)
            .expect("state has model dimension")
    }

    /// `M_w π` for a word read oldest first.
    pub fn state_after(&self, word: &[usize]) -> Result<Vec<T>> {
        self.check_word(word)?;
        Ok(word.iter().fold(self.pi.clone(), |s, &a| self.step(&s, a)))
    }

    /// `1ᵀ M_{a_t} ⋯ M_{a_1} π`; the empty word has probability 1.
    pub fn word_probability(&self, word: &[usize]) -> Result<T> {
        Ok(T::sum_iter(self.state_after(word)?))
    }

    pub fn word_probability_str(&self, word: &str) -> Result<T> {
        self.word_probability(&self.scale.parse_word(word)?)
    }

    /// `p(v | w) = p(wv) / p(w)`.
    pub fn conditional(&self, v: &[usize], w: &[usize]) -> Result<T> {
        let pw = self.word_probability(w)?;
        if !(pw > T::tolerance(CONDITION_THRESHOLD)) {
            return Err(Error::ZeroProbability {
                probability: pw.as_f64(),
            });
        }
        let mut wv = w.to_vec();
        wv.extend_from_slice(v);
        Ok(self.word_probability(&wv)? / pw)
    }

    /// Calls `visit(word, p(word))` for every word of length `t`.
    pub fn for_each_word_probability(
        &self,
        t: usize,
        cap: u64,
        mut visit: impl FnMut(&[usize], T),
    ) -> Result<()> {
        check_enumeration(self.scale.len(), t, cap)?;
        for_each_word(
            self.scale.len(),
            t,
            self.pi.clone(),
            |s, a| self.step(s, a),
            |w, s| visit(w, T::sum_iter(s.iter().copied())),
        );
        Ok(())
    }

    /// Scans every word of length `1..=horizon`.
    pub fn validate(&self, horizon: usize, cap: u64) -> Result<OomValidation<T>> {
        let mut by_depth = Vec::with_capacity(horizon);
        for t in 1..=horizon {
            let mut best: Option<(Word, T)> = None;
            self.for_each_word_probability(t, cap, |w, p| {
                if best.as_ref().is_none_or(|(_, b)| p < *b) {
                    best = Some((w.to_vec(), p));
                }
            })?;
            let (word, probability) = best.expect("non-empty scale");
            by_depth.push(DepthMinimum {
                t,
                word,
                probability,
            });
        }
        Ok(OomValidation {
            column_sum_defect: column_sum_defect(&self.operators, self.dim()),
            pi_sum_defect: pi_sum_defect(&self.pi),
            by_depth,
        })
    }

    /// Hidden-state representation with `N = |Σ|·m` states `(a, j)`.
    pub fn lift_hidden_states(&self) -> HiddenStateLift<T> {
        let m = self.dim();
        let k = self.scale.len();
        let n = k * m;
        let lifted_ops = self
            .operators
            .iter()
            .enumerate()
            .map(|(a, op)| {
                RealMatrix::from_fn(n, n, |r, c| {
                    let (b, i) = (r / m, r % m);
                    if b == a {
                        op[(i, c % m)]
                    } else {
                        T::zero()
                    }
                })
            })
            .collect();
        let kk = T::from_usize(k);
        let lifted_pi = (0..n).map(|idx| self.pi[idx % m] / kk).collect();
        let labels = (0..n).map(|idx| format!("({},{})", self.scale.symbol(idx / m), idx % m + 1));
        let space = HiddenStateSpace::new(labels).expect("labels are distinct");
        let info = InformationFunction::from_indices(
            space.clone(),
            self.scale.clone(),
            (0..n).map(|idx| idx / m).collect(),
        )
        .expect("block indices are in the scale");
        HiddenStateLift {
            space,
            info,
            lifted_ops,
            lifted_pi,
        }
    }
}

impl<T: Real> ObservableOperatorModel<T> {
    /// Truncated matrix `[p(v | w)]` over words of length at most `max_len`.
    /// Columns with `p(w) ≤ 1e-12` are left out.
    pub fn prediction_matrix(
        &self,
        max_len: usize,
        tol: T,
        cap: u64,
    ) -> Result<(PredictionMatrix<T>, usize)> {
        let k = self.scale.len();
        let mut total: u128 = 0;
        for t in 0..=max_len {
            total += check_enumeration(k, t, cap)? as u128;
        }
        if total > cap as u128 {
            return Err(Error::EnumerationCap { count: total, cap });
        }
        let words = words_up_to(k, max_len);
        // row functional 1ᵀ M_v, built by right-multiplying M_{a_1}, M_{a_2}, ...
        let row_functionals: Vec<Vec<T>> = words
            .iter()
            .map(|v| {
                let mut f = vec![T::one(); self.dim()];
                for &a in v.iter().rev() {
                    f = self.operators[a].transpose().matvec(&f).expect("square");
                }
                f
            })
            .collect();
        let threshold = T::lit(CONDITION_THRESHOLD);
        let mut col_words = Vec::new();
        let mut col_states = Vec::new();
        for w in &words {
            let s = self.state_after(w)?;
            let pw: T = s.iter().copied().sum();
            if pw > threshold {
                col_words.push(w.clone());
                col_states.push(s.into_iter().map(|x| x / pw).collect::<Vec<T>>());
            }
        }
        let values = RealMatrix::from_fn(words.len(), col_words.len(), |r, c| {
            row_functionals[r]
                .iter()
                .zip(&col_states[c])
                .map(|(&a, &b)| a * b)
                .sum()
        });
        let rank = values.numerical_rank(tol);
        Ok((
            PredictionMatrix {
                scale: self.scale.clone(),
                row_words: words,
                col_words,
                values,
            },
            rank,
        ))
    }

    /// Block entropies in bits: for `t = 1..=t_max` the rows
    /// `(t, H(X^t)/t, H(X^t) − H(X^{t−1}))`.
    pub fn entropy_rate(&self, t_max: usize, cap: u64) -> Result<Vec<EntropyRow<T>>> {
        let neg_tol = T::lit(ENTROPY_NEG_TOL);
        let mut rows = Vec::with_capacity(t_max);
        let mut previous = T::zero();
        for t in 1..=t_max {
            let mut h = T::zero();
            let mut negative: Option<(Word, T)> = None;
            self.for_each_word_probability(t, cap, |w, p| {
                if p < -neg_tol {
                    if negative.is_none() {
                        negative = Some((w.to_vec(), p));
                    }
                } else if p > T::zero() {
                    h = h - p * p.log2();
                }
            })?;
            if let Some((w, p)) = negative {
                return Err(Error::NegativeProbability {
                    word: self.scale.format_word(&w),
                    probability: p.as_f64(),
                });
            }
            rows.push(EntropyRow {
                t,
                entropy_rate: h / T::from_usize(t),
                conditional_entropy: h - previous,
            });
            previous = h;
        }
        Ok(rows)
    }

    /// Per-symbol diagonal actions `diag(x) ↦ diag(M_a x)`.
    pub fn to_markov_measurement(&self) -> MarkovMeasurement<T> {
        let ops = self
            .operators
            .iter()
            .map(|m| Superoperator::diagonal_action(m).expect("square"))
            .collect();
        MarkovMeasurement::new(self.scale.clone(), ops)
            .expect("column sums checked at construction")
    }

    /// `Π = diag(π)`.
    pub fn pi_density(&self) -> MarkovDensity<T> {
        MarkovDensity::from_real_diagonal(&self.pi).expect("π sums to 1")
    }
}

/// `M_a = T · diag(O(a | ·))` for a hidden Markov model with column-stochastic
/// transition matrix `T`, emission table `emissions[a][j] = O(a | j)` and
/// initial distribution `init` (the state at the first emission).
pub fn hmm_to_oom<T: Scalar>(
    scale: Scale,
    transition: &StochasticMatrix<T>,
    emissions: &RealMatrix<T>,
    init: Vec<T>,
) -> Result<ObservableOperatorModel<T>> {
    let m = transition.size();
    if !transition.is_nonnegative() {
        return Err(Error::Invalid(
            "transition matrix has a negative entry".into(),
        ));
    }
    if emissions.shape() != (scale.len(), m) {
        return Err(Error::ShapeMismatch {
            expected: format!("{}x{m}", scale.len()),
            found: format!("{}x{}", emissions.rows(), emissions.cols()),
        });
    }
    let tol = T::tolerance(SEMANTIC_TOL);
    for (column, sum) in emissions.column_sums().into_iter().enumerate() {
        if !((sum - T::one()).magnitude() <= tol) {
            return Err(Error::ColumnSum {
                column,
                sum: sum.as_f64(),
            });
        }
    }
    for a in 0..scale.len() {
        for j in 0..m {
            if emissions[(a, j)] < T::zero() {
                return Err(Error::NegativeEntry { row: a, col: j });
            }
        }
    }
    if init.len() != m {
        return Err(Error::DimensionMismatch {
            expected: m,
            found: init.len(),
        });
    }
    if init.iter().any(|&x| x < T::zero()) {
        return Err(Error::Invalid(
            "initial distribution has a negative entry".into(),
        ));
    }
    let t = transition.matrix();
    let operators = (0..scale.len())
        .map(|a| RealMatrix::from_fn(m, m, |i, j| t[(i, j)] * emissions[(a, j)]))
        .collect();
    ObservableOperatorModel::new(scale, operators, init)
}

#[derive(Clone, Debug, PartialEq)]
pub struct DepthMinimum<T> {
    pub t: usize,
    pub word: Word,
    pub probability: T,
}

#[derive(Clone, Debug, PartialEq)]
pub struct OomValidation<T> {
    pub column_sum_defect: T,
    pub pi_sum_defect: T,
    /// Smallest word probability at each length `1..=horizon`.
    pub by_depth: Vec<DepthMinimum<T>>,
}

impl<T: Scalar> OomValidation<T> {
    pub fn min_probability(&self) -> Option<&DepthMinimum<T>> {
        self.by_depth
            .iter()
            .fold(None, |best: Option<&DepthMinimum<T>>, d| match best {
                Some(b) if b.probability <= d.probability => Some(b),
                _ => Some(d),
            })
    }

    /// First length with a word probability below `−tol`.
    pub fn first_negative(&self, tol: T) -> Option<&DepthMinimum<T>> {
        self.by_depth.iter().find(|d| d.probability < -tol)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PredictionMatrix<T> {
    pub scale: Scale,
    /// Future words `v`, rows.
    pub row_words: Vec<Word>,
    /// Conditioning histories `w` with `p(w) > 1e-12`, columns.
    pub col_words: Vec<Word>,
    pub values: RealMatrix<T>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EntropyRow<T> {
    pub t: usize,
    pub entropy_rate: T,
    pub conditional_entropy: T,
}

#[derive(Clone, Debug, PartialEq)]
pub struct HiddenStateLift<T> {
    pub space: HiddenStateSpace,
    /// `X(a, j) = a`.
    pub info: InformationFunction,
    pub lifted_ops: Vec<RealMatrix<T>>,
    pub lifted_pi: Vec<T>,
}

impl<T: Scalar> HiddenStateLift<T> {
    pub fn len(&self) -> usize {
        self.lifted_pi.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lifted_pi.is_empty()
    }

    /// `Σ_ω (M̄_w π̄)(ω)`.
    pub fn word_probability(&self, word: &[usize]) -> Result<T> {
        let mut s = self.lifted_pi.clone();
        for &a in word {
            let op = self
                .lifted_ops
                .get(a)
                .ok_or_else(|| Error::UnknownSymbol(format!("#{a}")))?;
            s = op.matvec(&s)?;
        }
        Ok(T::sum_iter(s))
    }

    /// `π̄^(t) = M̄^t π̄` with `M̄ = Σ_a M̄_a`.
    pub fn state_at(&self, t: usize) -> Vec<T> {
        let n = self.len();
        let mut total = RealMatrix::zeros(n, n);
        for op in &self.lifted_ops {
            total = &total + op;
        }
        (0..t).fold(self.lifted_pi.clone(), |s, _| {
            total.matvec(&s).expect("square")
        })
    }
}

/// `Pr{X_t = a} = Σ_{X(ω)=a} π̄^(t)(ω)`.
pub fn step_distribution<T: Scalar>(
    lift: &HiddenStateLift<T>,
    t: usize,
) -> Result<OutcomeDistribution<T>> {
    let s = lift.state_at(t);
    let scale = lift.info.scale().clone();
    let mut values = vec![T::zero(); scale.len()];
    for (&a, &x) in lift.info.indices().iter().zip(&s) {
        values[a] = values[a] + x;
    }
    OutcomeDistribution::new(scale, values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;
    use crate::words::DEFAULT_ENUM_CAP;

    fn ab() -> Scale {
        Scale::new(["a", "b"]).unwrap()
    }

    fn m(rows: &[&[f64]]) -> RealMatrix<f64> {
        RealMatrix::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    fn iid_uniform() -> ObservableOperatorModel<f64> {
        ObservableOperatorModel::new(
            ab(),
            vec![
                m(&[&[0.5, 0.5], &[0.0, 0.0]]),
                m(&[&[0.0, 0.0], &[0.5, 0.5]]),
            ],
            vec![0.5, 0.5],
        )
        .unwrap()
    }

    fn alternating() -> ObservableOperatorModel<f64> {
        ObservableOperatorModel::new(
            ab(),
            vec![
                m(&[&[0.0, 0.0], &[1.0, 0.0]]),
                m(&[&[0.0, 1.0], &[0.0, 0.0]]),
            ],
            vec![1.0, 0.0],
        )
        .unwrap()
    }

    fn rq(rows: &[&[(i64, i64)]]) -> RealMatrix<Rational> {
        RealMatrix::from_rows(
            &rows
                .iter()
                .map(|r| r.iter().map(|&(n, d)| Rational::from_ratio(n, d)).collect())
                .collect::<Vec<_>>(),
        )
        .unwrap()
    }

    #[test]
    fn word_probabilities() {
        let o = iid_uniform();
        assert_eq!(o.word_probability(&[]).unwrap(), 1.0);
        assert_eq!(o.word_probability_str("a").unwrap(), 0.5);
        assert_eq!(o.word_probability_str("ab").unwrap(), 0.25);
        let det =
            ObservableOperatorModel::new(Scale::new(["a"]).unwrap(), vec![m(&[&[1.0]])], vec![1.0])
                .unwrap();
        assert_eq!(det.word_probability_str("aaa").unwrap(), 1.0);
        assert!(matches!(
            o.word_probability(&[2]),
            Err(Error::UnknownSymbol(_))
        ));
    }

    #[test]
    fn construction_checks() {
        assert!(matches!(
            ObservableOperatorModel::new(ab(), vec![m(&[&[0.5]]), m(&[&[0.4]])], vec![1.0]),
            Err(Error::ColumnSum { .. })
        ));
        assert!(matches!(
            ObservableOperatorModel::new(ab(), vec![m(&[&[0.5]]), m(&[&[0.5]])], vec![0.9]),
            Err(Error::NotNormalized { .. })
        ));
        assert!(matches!(
            ObservableOperatorModel::new(ab(), vec![m(&[&[1.0]])], vec![1.0]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn conditionals() {
        let o = iid_uniform();
        assert_eq!(
            o.conditional(&[1], &[]).unwrap(),
            o.word_probability(&[1]).unwrap()
        );
        assert_eq!(o.conditional(&[0], &[1]).unwrap(), 0.5);
        let det =
            ObservableOperatorModel::new(Scale::new(["a"]).unwrap(), vec![m(&[&[1.0]])], vec![1.0])
                .unwrap();
        assert_eq!(det.conditional(&[0], &[0, 0]).unwrap(), 1.0);
        assert!(matches!(
            alternating().conditional(&[0], &[1]),
            Err(Error::ZeroProbability { .. })
        ));
    }

    #[test]
    fn validation_reports() {
        let v = iid_uniform().validate(5, DEFAULT_ENUM_CAP).unwrap();
        let min = v.min_probability().unwrap();
        assert_eq!(min.t, 5);
        assert_eq!(min.probability, 1.0 / 32.0);
        assert!(v.first_negative(1e-12).is_none());
    }

    #[test]
    fn negative_at_depth_three_exact() {
        let o = ObservableOperatorModel::new(
            ab(),
            vec![
                rq(&[&[(-1, 4), (1, 2)], &[(3, 2), (1, 4)]]),
                rq(&[&[(1, 1), (-1, 2)], &[(-5, 4), (3, 4)]]),
            ],
            vec![Rational::from_ratio(1, 4), Rational::from_ratio(3, 4)],
        )
        .unwrap();
        let v = o.validate(3, DEFAULT_ENUM_CAP).unwrap();
        let mins: Vec<Rational> = v.by_depth.iter().map(|d| d.probability).collect();
        assert_eq!(
            mins,
            [
                Rational::from_ratio(1, 8),
                Rational::from_ratio(1, 32),
                Rational::from_ratio(-9, 128)
            ]
        );
        let first = v.first_negative(Rational::from_ratio(0, 1)).unwrap();
        assert_eq!(
            (first.t, o.scale().format_word(&first.word)),
            (3, "bab".to_string())
        );
    }

    #[test]
    fn prediction_ranks() {
        let (p, rank) = iid_uniform()
            .prediction_matrix(3, RANK_TOL, DEFAULT_ENUM_CAP)
            .unwrap();
        assert_eq!(rank, 1);
        assert_eq!(p.row_words.len(), 15);
        assert_eq!(p.col_words.len(), 15);
        let (p, rank) = alternating()
            .prediction_matrix(3, RANK_TOL, DEFAULT_ENUM_CAP)
            .unwrap();
        assert_eq!(rank, 2);
        // only □, a, ab, aba have positive probability
        assert_eq!(
            p.col_words,
            vec![vec![], vec![0], vec![0, 1], vec![0, 1, 0]]
        );
    }

    #[test]
    fn hmm_examples() {
        let one = StochasticMatrix::from_rows(&[vec![1.0]]).unwrap();
        let o = hmm_to_oom(ab(), &one, &m(&[&[0.3], &[0.7]]), vec![1.0]).unwrap();
        assert!((o.word_probability_str("ab").unwrap() - 0.21).abs() < 1e-15);

        let cycle = StochasticMatrix::from_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        let o = hmm_to_oom(
            ab(),
            &cycle,
            &m(&[&[1.0, 0.0], &[0.0, 1.0]]),
            vec![1.0, 0.0],
        )
        .unwrap();
        assert_eq!(o.word_probability_str("abab").unwrap(), 1.0);
        assert_eq!(o.word_probability_str("aa").unwrap(), 0.0);
        assert_eq!(o.markov_matrix(), cycle);

        assert!(matches!(
            hmm_to_oom(
                ab(),
                &cycle,
                &m(&[&[0.5, 0.0], &[0.4, 1.0]]),
                vec![1.0, 0.0]
            ),
            Err(Error::ColumnSum { .. })
        ));
    }

    #[test]
    fn lift_examples() {
        let o = iid_uniform();
        let lift = o.lift_hidden_states();
        assert_eq!(lift.len(), 4);
        assert_eq!(lift.lifted_pi, vec![0.25; 4]);
        assert_eq!(lift.word_probability(&[0, 1]).unwrap(), 0.25);
        assert_eq!(lift.space.states()[2], "(b,1)");

        let single = ObservableOperatorModel::new(
            Scale::new(["a"]).unwrap(),
            vec![m(&[&[0.2, 0.5], &[0.8, 0.5]])],
            vec![0.3, 0.7],
        )
        .unwrap();
        let lift = single.lift_hidden_states();
        assert_eq!(lift.lifted_ops[0], single.operators()[0]);
        assert_eq!(lift.lifted_pi, single.pi());
    }

    #[test]
    fn step_distributions() {
        let lift = iid_uniform().lift_hidden_states();
        assert_eq!(step_distribution(&lift, 1).unwrap().values, vec![0.5, 0.5]);
        let lift = alternating().lift_hidden_states();
        for t in 1..8 {
            let d = step_distribution(&lift, t).unwrap();
            let want = if t % 2 == 1 {
                vec![1.0, 0.0]
            } else {
                vec![0.0, 1.0]
            };
            assert_eq!(d.values, want, "t = {t}");
        }
    }

    #[test]
    fn entropy_examples() {
        for row in iid_uniform().entropy_rate(6, DEFAULT_ENUM_CAP).unwrap() {
            assert!((row.entropy_rate - 1.0).abs() < 1e-12);
            assert!((row.conditional_entropy - 1.0).abs() < 1e-12);
        }
        for row in alternating().entropy_rate(6, DEFAULT_ENUM_CAP).unwrap() {
            assert_eq!(row.entropy_rate, 0.0);
        }
        let neg = ObservableOperatorModel::new(
            ab(),
            vec![
                m(&[&[-0.25, 0.5], &[1.5, 0.25]]),
                m(&[&[1.0, -0.5], &[-1.25, 0.75]]),
            ],
            vec![0.25, 0.75],
        )
        .unwrap();
        assert!(matches!(
            neg.entropy_rate(3, DEFAULT_ENUM_CAP),
            Err(Error::NegativeProbability { .. })
        ));
    }

    #[test]
    fn bridge_to_measurement() {
        let o = iid_uniform();
        let meas = o.to_markov_measurement();
        let d = meas
            .word_distribution(&o.pi_density(), 2, DEFAULT_ENUM_CAP)
            .unwrap();
        assert!((d.get(&[0, 1]).unwrap() - 0.25).abs() < 1e-15);
        let det =
            ObservableOperatorModel::new(Scale::new(["a"]).unwrap(), vec![m(&[&[1.0]])], vec![1.0])
                .unwrap();
        let d = det
            .to_markov_measurement()
            .word_distribution(&det.pi_density(), 3, DEFAULT_ENUM_CAP)
            .unwrap();
        assert_eq!(d.values, vec![1.0]);
    }
}
