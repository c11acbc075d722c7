//! Finite hidden-state systems.
//!
//! A system with hidden states `Ω = {ω_1, …, ω_N}` is prepared in a Markov
//! state `q` (a real vector over Ω summing to 1, possibly with negative
//! components) and read out through information functions `X: Ω → Σ`.
//! Outcome values are `p_q(a) = Σ_{X(ω)=a} q_ω`.
//!
//! Everything here is generic over [`Scalar`], so the worked examples can be
//! evaluated in exact rational arithmetic.

use std::collections::HashSet;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::measurement::{KrausMeasurement, OutcomeDistribution};
use crate::scalar::{Real, Scalar};
use crate::words::Scale;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HiddenStateSpace {
    states: Vec<String>,
}

impl HiddenStateSpace {
    pub fn new<S: Into<String>>(states: impl IntoIterator<Item = S>) -> Result<Self> {
        let states: Vec<String> = states.into_iter().map(Into::into).collect();
        if states.is_empty() {
            return Err(Error::EmptySpace);
        }
        let mut seen = HashSet::new();
        for s in &states {
            if !seen.insert(s.as_str()) {
                return Err(Error::DuplicateState(s.clone()));
            }
        }
        Ok(Self { states })
    }

    /// States labelled `ω1 … ωN`.
    pub fn numbered(n: usize) -> Result<Self> {
        Self::new((1..=n).map(|i| format!("ω{i}")))
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }
}

/// `X: Ω → Σ`, stored as a scale index per hidden state.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InformationFunction {
    space: HiddenStateSpace,
    scale: Scale,
    values: Vec<usize>,
}

impl InformationFunction {
    pub fn new<S: AsRef<str>>(space: HiddenStateSpace, scale: Scale, values: &[S]) -> Result<Self> {
        let values = scale.word(values)?;
        Self::from_indices(space, scale, values)
    }

    pub fn from_indices(space: HiddenStateSpace, scale: Scale, values: Vec<usize>) -> Result<Self> {
        if values.len() != space.len() {
            return Err(Error::DimensionMismatch {
                expected: space.len(),
                found: values.len(),
            });
        }
        if let Some(&bad) = values.iter().find(|&&v| v >= scale.len()) {
            return Err(Error::UnknownSymbol(format!("#{bad}")));
        }
        Ok(Self {
            space,
            scale,
            values,
        })
    }

    /// A ±1-valued function from signs; the scale is `{-1, +1}`.
    pub fn from_signs(space: HiddenStateSpace, signs: &[i8]) -> Result<Self> {
        let scale = Scale::new(["-1", "+1"])?;
        let values = signs
            .iter()
            .map(|&s| match s {
                -1 => Ok(0),
                1 => Ok(1),
                _ => Err(Error::NotPlusMinusOne(s.to_string())),
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_indices(space, scale, values)
    }

    pub fn space(&self) -> &HiddenStateSpace {
        &self.space
    }

    pub fn scale(&self) -> &Scale {
        &self.scale
    }

    pub fn indices(&self) -> &[usize] {
        &self.values
    }

    pub fn value(&self, state: usize) -> &str {
        self.scale.symbol(self.values[state])
    }

    /// Numeric value of `X(ω)` for every state.
    pub fn numeric_values<T: Scalar>(&self) -> Result<Vec<T>> {
        let table = self
            .scale
            .symbols()
            .iter()
            .map(|s| parse_numeric::<T>(s))
            .collect::<Result<Vec<T>>>()?;
        Ok(self.values.iter().map(|&i| table[i]).collect())
    }

    /// Checks that every used value is exactly −1 or +1.
    pub fn check_plus_minus_one(&self) -> Result<()> {
        for &i in &self.values {
            let s = self.scale.symbol(i);
            let v = parse_numeric::<f64>(s).map_err(|_| Error::NotPlusMinusOne(s.to_string()))?;
            if v != 1.0 && v != -1.0 {
                return Err(Error::NotPlusMinusOne(s.to_string()));
            }
        }
        Ok(())
    }

    /// The same function as a diagonal 0/1 POVM on C^N.
    pub fn diagonal_povm<T: Real>(&self) -> KrausMeasurement<T> {
        let n = self.space.len();
        let kraus = (0..self.scale.len())
            .map(|a| {
                let d: Vec<Complex<T>> = self
                    .values
                    .iter()
                    .map(|&v| Complex::new(if v == a { T::one() } else { T::zero() }, T::zero()))
                    .collect();
                ComplexMatrix::from_diagonal(&d)
            })
            .collect();
        debug_assert_eq!(n, self.values.len());
        KrausMeasurement::new(self.scale.clone(), kraus).expect("partition of the hidden states")
    }
}

/// Parses `-1`, `+1`, `−1` (Unicode minus), integers, `p/q` and decimals.
pub fn parse_numeric<T: Scalar>(token: &str) -> Result<T> {
    let t = token.trim().replace('−', "-");
    let t = t.strip_prefix('+').unwrap_or(&t);
    let err = || Error::NonNumericSymbol(token.to_string());
    if let Some((num, den)) = t.split_once('/') {
        let num: i64 = num.trim().parse().map_err(|_| err())?;
        let den: i64 = den.trim().parse().map_err(|_| err())?;
        if den == 0 {
            return Err(err());
        }
        return Ok(T::from_ratio(num, den));
    }
    if let Ok(i) = t.parse::<i64>() {
        return Ok(T::from_ratio(i, 1));
    }
    let x: f64 = t.parse().map_err(|_| err())?;
    T::approx_from_f64(x).ok_or_else(err)
}

/// Real vector over Ω summing to 1.
#[derive(Clone, Debug, PartialEq)]
pub struct MarkovState<T> {
    q: Vec<T>,
}

impl<T: Scalar> MarkovState<T> {
    pub fn new(q: Vec<T>) -> Result<Self> {
        let sum = T::sum_iter(q.iter().copied());
        if !((sum - T::one()).magnitude() <= T::tolerance(crate::hermitian::SEMANTIC_TOL)) {
            return Err(Error::NotNormalized { sum: sum.as_f64() });
        }
        Ok(Self { q })
    }

    pub fn uniform(n: usize) -> Self {
        Self {
            q: vec![T::from_ratio(1, n as i64); n],
        }
    }

    pub fn components(&self) -> &[T] {
        &self.q
    }

    pub fn len(&self) -> usize {
        self.q.len()
    }

    pub fn is_empty(&self) -> bool {
        self.q.is_empty()
    }

    pub fn is_nonnegative(&self) -> bool {
        self.q.iter().all(|&x| x >= T::zero())
    }
}

fn check_space<T>(x: &InformationFunction, q: &MarkovState<T>) -> Result<()> {
    if x.space.len() != q.q.len() {
        return Err(Error::DimensionMismatch {
            expected: x.space.len(),
            found: q.q.len(),
        });
    }
    Ok(())
}

/// `p_q(a) = Σ_{X(ω)=a} q_ω`.
pub fn observe_distribution<T: Scalar>(
    x: &InformationFunction,
    q: &MarkovState<T>,
) -> Result<OutcomeDistribution<T>> {
    check_space(x, q)?;
    let mut values = vec![T::zero(); x.scale.len()];
    for (&a, &w) in x.values.iter().zip(&q.q) {
        values[a] = values[a] + w;
    }
    OutcomeDistribution::new(x.scale.clone(), values)
}

pub fn is_observable<T: Scalar>(
    x: &InformationFunction,
    q: &MarkovState<T>,
    tol: T,
) -> Result<bool> {
    Ok(observe_distribution(x, q)?.is_observable(tol))
}

/// Algebraic moment `Σ X(ω) q_ω` with a flag telling whether it is a
/// statistical expectation (X observable in q).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RawMoment<T> {
    pub value: T,
    pub statistical: bool,
}

pub fn raw_moment<T: Scalar>(
    x: &InformationFunction,
    q: &MarkovState<T>,
    tol: T,
) -> Result<RawMoment<T>> {
    check_space(x, q)?;
    let xs = x.numeric_values::<T>()?;
    let value = T::sum_iter(xs.iter().zip(&q.q).map(|(&a, &b)| a * b));
    Ok(RawMoment {
        value,
        statistical: is_observable(x, q, tol)?,
    })
}

/// `E_q(X) = Σ X(ω) q_ω`, defined only when X is observable in q.
pub fn expectation<T: Scalar>(x: &InformationFunction, q: &MarkovState<T>, tol: T) -> Result<T> {
    let m = raw_moment(x, q, tol)?;
    if !m.statistical {
        return Err(Error::NotObservable(format!(
            "information function with scale {} in the given Markov state",
            x.scale
        )));
    }
    Ok(m.value)
}

/// Composite function `ω ↦ (X_1(ω), …, X_k(ω))` over the product scale.
pub fn joint(xs: &[&InformationFunction]) -> Result<InformationFunction> {
    let first = xs
        .first()
        .ok_or_else(|| Error::Invalid("joint of an empty collection".into()))?;
    if xs.iter().any(|x| x.space != first.space) {
        return Err(Error::SpaceMismatch);
    }
    let scales: Vec<&Scale> = xs.iter().map(|x| &x.scale).collect();
    let scale = Scale::product(&scales)?;
    let values = (0..first.space.len())
        .map(|w| {
            xs.iter()
                .fold(0, |acc, x| acc * x.scale.len() + x.values[w])
        })
        .collect();
    InformationFunction::from_indices(first.space.clone(), scale, values)
}

pub fn is_jointly_observable<T: Scalar>(
    xs: &[&InformationFunction],
    q: &MarkovState<T>,
    tol: T,
) -> Result<bool> {
    is_observable(&joint(xs)?, q, tol)
}

/// `E_q(XY)`, defined when X and Y are jointly observable in q.
pub fn product_expectation<T: Scalar>(
    x: &InformationFunction,
    y: &InformationFunction,
    q: &MarkovState<T>,
    tol: T,
) -> Result<T> {
    if !is_jointly_observable(&[x, y], q, tol)? {
        return Err(Error::NotObservable(
            "pair is not jointly observable".into(),
        ));
    }
    check_space(x, q)?;
    let xv = x.numeric_values::<T>()?;
    let yv = y.numeric_values::<T>()?;
    Ok(T::sum_iter(
        xv.iter().zip(&yv).zip(&q.q).map(|((&a, &b), &w)| a * b * w),
    ))
}

#[derive(Clone, Debug, PartialEq)]
pub struct BellReport<T> {
    pub e_xy: T,
    pub e_yz: T,
    pub e_xz: T,
    /// `|E(XY) − E(YZ)|`
    pub lhs: T,
    /// `1 − E(XZ)`
    pub rhs: T,
    pub satisfied: bool,
    pub pairwise_observable: bool,
    pub jointly_observable: bool,
}

/// Evaluates `|E_q(XY) − E_q(YZ)| ≤ 1 − E_q(XZ)` for ±1-valued X, Y, Z
/// that are pairwise jointly observable in q.
pub fn bell_check<T: Scalar>(
    x: &InformationFunction,
    y: &InformationFunction,
    z: &InformationFunction,
    q: &MarkovState<T>,
    tol: T,
) -> Result<BellReport<T>> {
    for f in [x, y, z] {
        f.check_plus_minus_one()?;
        check_space(f, q)?;
    }
    if x.space != y.space || y.space != z.space {
        return Err(Error::SpaceMismatch);
    }
    for (name, a, b) in [("X,Y", x, y), ("Y,Z", y, z), ("X,Z", x, z)] {
        if !is_jointly_observable(&[a, b], q, tol)? {
            return Err(Error::NotObservable(format!(
                "pair {name} is not jointly observable"
            )));
        }
    }
    let e_xy = product_expectation(x, y, q, tol)?;
    let e_yz = product_expectation(y, z, q, tol)?;
    let e_xz = product_expectation(x, z, q, tol)?;
    let lhs = (e_xy - e_yz).magnitude();
    let rhs = T::one() - e_xz;
    Ok(BellReport {
        e_xy,
        e_yz,
        e_xz,
        lhs,
        rhs,
        satisfied: lhs <= rhs + tol,
        pairwise_observable: true,
        jointly_observable: is_jointly_observable(&[x, y, z], q, tol)?,
    })
}

/// Hidden states `++, +−, −+, −−` of the two-spin table.
pub fn feynman_space() -> HiddenStateSpace {
    HiddenStateSpace::new(["++", "+-", "-+", "--"]).expect("distinct")
}

/// First-sign (`X`) and second-sign (`Z`) functions on [`feynman_space`].
pub fn feynman_functions() -> (InformationFunction, InformationFunction) {
    let space = feynman_space();
    let x = InformationFunction::from_signs(space.clone(), &[1, 1, -1, -1]).expect("valid");
    let z = InformationFunction::from_signs(space, &[1, -1, 1, -1]).expect("valid");
    (x, z)
}

/// The four-component state
///
/// ```text
/// P(++) = [1 + sz + sx + sy]/4
/// P(+−) = [1 + sz − sx − sy]/4
/// P(−+) = [1 + sz + sx − sy]/4
/// P(−−) = [1 − sz − sx − sy]/4
/// ```
///
/// These components sum to `[4 + 2 sz − 2 sy]/4`, so the result is only a
/// Markov state when `sz = sy`; otherwise the sum is reported as an error.
pub fn feynman_state<T: Scalar>(sx: T, sy: T, sz: T) -> Result<MarkovState<T>> {
    let one = T::one();
    let four = T::from_ratio(4, 1);
    let q = vec![
        (one + sz + sx + sy) / four,
        (one + sz - sx - sy) / four,
        (one + sz + sx - sy) / four,
        (one - sz - sx - sy) / four,
    ];
    MarkovState::new(q)
}

/// Five hidden states with three ±1 functions that are pairwise but not
/// jointly observable in `q = (−1/3, 1/3, 1/3, 1/3, 1/3)`.
#[derive(Clone, Debug)]
pub struct FiveStateExample<T> {
    pub space: HiddenStateSpace,
    pub x: InformationFunction,
    pub y: InformationFunction,
    pub z: InformationFunction,
    pub q: MarkovState<T>,
}

pub fn five_state_example<T: Scalar>() -> FiveStateExample<T> {
    let space = HiddenStateSpace::numbered(5).expect("non-empty");
    let f = |signs: &[i8]| InformationFunction::from_signs(space.clone(), signs).expect("valid");
    let third = T::from_ratio(1, 3);
    FiveStateExample {
        x: f(&[-1, 1, -1, -1, -1]),
        y: f(&[1, 1, -1, 1, -1]),
        z: f(&[1, 1, 1, -1, -1]),
        q: MarkovState::new(vec![-third, third, third, third, third]).expect("sums to 1"),
        space,
    }
}
