//! Markov densities and the processes they generate.
//!
//! A Markov density is a Hermitian matrix of unit trace that need not be
//! positive semidefinite. This crate covers
//!
//! - Hermitian linear algebra and the canonical real coordinates of the
//!   Hermitian matrices ([`hermitian`], [`linalg`]),
//! - trace-preserving linear maps on those matrices ([`operator`]),
//! - Kraus and general Markov measurements with word-level outcome
//!   distributions ([`measurement`]),
//! - Markov chains and their Cesàro averages ([`chain`]), including quantum
//!   walks on directed graphs ([`walk`]),
//! - finite hidden-state systems with signed Markov states ([`hidden`]),
//! - observable operator models ([`oom`]),
//! - file formats ([`io`]).
//!
//! Linear algebra is generic over [`Real`] (`f32`, `f64`). Hidden-state and
//! OOM probability code is generic over [`Scalar`], which also covers the
//! exact [`Rational`] type.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod chain;
pub mod error;
pub mod hermitian;
pub mod hidden;
pub mod io;
pub mod linalg;
pub mod measurement;
pub mod oom;
pub mod operator;
pub mod random;
pub mod scalar;
pub mod walk;
pub mod words;

pub use chain::{CesaroResult, MarkovChain};
pub use error::{Error, Result};
pub use hermitian::{HermitianBasis, HermitianMatrix, MarkovDensity, SpectralDecomposition};
pub use hidden::{HiddenStateSpace, InformationFunction, MarkovState};
pub use linalg::{ComplexMatrix, RealMatrix};
pub use measurement::{KrausMeasurement, MarkovMeasurement, OutcomeDistribution};
pub use oom::{HiddenStateLift, ObservableOperatorModel, PredictionMatrix};
pub use operator::{MarkovOperator, StochasticMatrix, Superoperator};
pub use scalar::{Rational, Real, Scalar};
pub use walk::DirectedGraph;
pub use words::{Scale, Word};

pub type ComplexMatrix64 = ComplexMatrix<f64>;
pub type HermitianMatrix64 = HermitianMatrix<f64>;
pub type HermitianMatrix32 = HermitianMatrix<f32>;
pub type MarkovDensity64 = MarkovDensity<f64>;
pub type MarkovDensity32 = MarkovDensity<f32>;
pub type Superoperator64 = Superoperator<f64>;
pub type MarkovOperator64 = MarkovOperator<f64>;
pub type MarkovOperator32 = MarkovOperator<f32>;
pub type KrausMeasurement64 = KrausMeasurement<f64>;
pub type MarkovMeasurement64 = MarkovMeasurement<f64>;
pub type MarkovChain64 = MarkovChain<f64>;
pub type MarkovState64 = MarkovState<f64>;
pub type MarkovStateQ = MarkovState<Rational>;
pub type Oom64 = ObservableOperatorModel<f64>;
pub type OomQ = ObservableOperatorModel<Rational>;
pub type StochasticMatrix64 = StochasticMatrix<f64>;
pub type StochasticMatrixQ = StochasticMatrix<Rational>;
