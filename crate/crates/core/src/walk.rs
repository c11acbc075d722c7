//! Quantum walks on directed graphs.
//!
//! The walk lives on H_{|E|}: one basis vector per edge, in the order the
//! edges were given. A node `v` is observed through the diagonal projector
//! onto all edges leaving `v`; these projectors form a POVM.

use std::collections::HashSet;

use num_complex::Complex;

use crate::chain::MarkovChain;
use crate::error::{Error, Result};
use crate::hermitian::{HermitianMatrix, MarkovDensity};
use crate::linalg::ComplexMatrix;
use crate::measurement::KrausMeasurement;
use crate::operator::MarkovOperator;
use crate::scalar::Real;
use crate::words::Scale;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DirectedGraph {
    node_count: usize,
    edges: Vec<(usize, usize)>,
}

impl DirectedGraph {
    pub fn new(node_count: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        let mut seen = HashSet::new();
        for &(u, v) in &edges {
            if u >= node_count || v >= node_count {
                return Err(Error::NodeOutOfRange(u, v));
            }
            if !seen.insert((u, v)) {
                return Err(Error::DuplicateEdge(u, v));
            }
        }
        Ok(Self { node_count, edges })
    }

    /// Parses one `u v` pair per line; blank lines and `#` comments are
    /// skipped. The node count is one past the largest index.
    pub fn parse_edge_list(text: &str) -> Result<Self> {
        let mut edges = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let parts: Vec<&str> = line.split_whitespace().collect();
            let parse = |s: &str| {
                s.parse::<usize>().map_err(|_| {
                    Error::Invalid(format!("line {}: {s:?} is not a node index", lineno + 1))
                })
            };
            if parts.len() != 2 {
                return Err(Error::Invalid(format!(
                    "line {}: expected \"u v\", found {line:?}",
                    lineno + 1
                )));
            }
            edges.push((parse(parts[0])?, parse(parts[1])?));
        }
        let node_count = edges.iter().map(|&(u, v)| u.max(v) + 1).max().unwrap_or(0);
        Self::new(node_count, edges)
    }

    /// Directed cycle `0 → 1 → … → n-1 → 0`.
    pub fn cycle(n: usize) -> Self {
        Self::new(n, (0..n).map(|i| (i, (i + 1) % n)).collect()).expect("valid cycle")
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn out_degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|&&(u, _)| u == v).count()
    }

    pub fn in_degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|&&(_, w)| w == v).count()
    }

    /// Nodes without outgoing edges. They never carry probability.
    pub fn sinks(&self) -> Vec<usize> {
        (0..self.node_count)
            .filter(|&v| self.out_degree(v) == 0)
            .collect()
    }
}

/// Diagonal 0/1 projectors `X_v`, one per node, on H_{|E|}.
#[derive(Clone, Debug)]
pub struct NodePovm<T> {
    projectors: Vec<HermitianMatrix<T>>,
}

impl<T: Real> NodePovm<T> {
    pub fn projectors(&self) -> &[HermitianMatrix<T>] {
        &self.projectors
    }

    /// `p(v) = tr(X_v Q)`, read off the diagonal.
    pub fn probabilities(&self, q: &HermitianMatrix<T>) -> Vec<T> {
        let diag = q.diagonal();
        self.projectors
            .iter()
            .map(|x| {
                x.diagonal()
                    .iter()
                    .zip(&diag)
                    .filter(|(&m, _)| m != T::zero())
                    .map(|(_, &d)| d)
                    .sum()
            })
            .collect()
    }

    /// The same POVM as a projective Kraus measurement with node labels.
    pub fn as_measurement(&self) -> KrausMeasurement<T> {
        let scale =
            Scale::new((0..self.projectors.len()).map(|v| v.to_string())).expect("distinct");
        let kraus = self
            .projectors
            .iter()
            .map(|x| x.as_complex().clone())
            .collect();
        KrausMeasurement::new(scale, kraus).expect("node projectors are complete")
    }
}

pub fn node_povm<T: Real>(g: &DirectedGraph) -> Result<NodePovm<T>> {
    if g.edges.is_empty() {
        return Err(Error::EmptyGraph);
    }
    let projectors = (0..g.node_count)
        .map(|v| {
            let diag: Vec<T> = g
                .edges
                .iter()
                .map(|&(u, _)| if u == v { T::one() } else { T::zero() })
                .collect();
            HermitianMatrix::from_real_diagonal(&diag)
        })
        .collect();
    Ok(NodePovm { projectors })
}

#[derive(Clone, Debug)]
pub struct WalkStep<T> {
    pub density: MarkovDensity<T>,
    pub node_probs: Vec<T>,
}

#[derive(Clone, Debug)]
pub struct WalkTrace<T> {
    pub steps: Vec<WalkStep<T>>,
}

fn check_walk_dims<T: Real>(
    g: &DirectedGraph,
    op: &MarkovOperator<T>,
    start: &MarkovDensity<T>,
) -> Result<()> {
    for found in [op.dim(), start.dim()] {
        if found != g.edge_count() {
            return Err(Error::DimensionMismatch {
                expected: g.edge_count(),
                found,
            });
        }
    }
    Ok(())
}

/// `P^(t) = µ(P^(t−1))` for `t ≤ steps`, with node probabilities.
pub fn walk<T: Real>(
    g: &DirectedGraph,
    op: &MarkovOperator<T>,
    start: &MarkovDensity<T>,
    steps: usize,
) -> Result<WalkTrace<T>> {
    check_walk_dims(g, op, start)?;
    let povm = node_povm::<T>(g)?;
    let chain = MarkovChain::new(op.clone(), start.clone())?;
    let steps = chain
        .evolve(steps)
        .into_iter()
        .map(|density| WalkStep {
            node_probs: povm.probabilities(density.matrix()),
            density,
        })
        .collect();
    Ok(WalkTrace { steps })
}

/// `p̄(v) = tr(X_v P̃)` for the Cesàro average `P̃` of the walk.
pub fn limiting_node_distribution<T: Real>(
    g: &DirectedGraph,
    op: &MarkovOperator<T>,
    start: &MarkovDensity<T>,
    tol: T,
    max_doublings: usize,
) -> Result<Vec<T>> {
    check_walk_dims(g, op, start)?;
    let povm = node_povm::<T>(g)?;
    let chain = MarkovChain::new(op.clone(), start.clone())?;
    let avg = chain.cesaro_average(tol, max_doublings)?;
    Ok(povm.probabilities(avg.average.matrix()))
}

/// Permutation sending edge `(u, v)` to the unique edge `(v, w)`.
///
/// Requires every node touched by an edge to have in- and out-degree 1.
pub fn shift_unitary<T: Real>(g: &DirectedGraph) -> Result<ComplexMatrix<T>> {
    if g.edges.is_empty() {
        return Err(Error::EmptyGraph);
    }
    let m = g.edge_count();
    let mut out = ComplexMatrix::zeros(m, m);
    for (e, &(u, v)) in g.edges.iter().enumerate() {
        for node in [u, v] {
            let (din, dout) = (g.in_degree(node), g.out_degree(node));
            if din != 1 || dout != 1 {
                return Err(Error::NotCycleCover(format!(
                    "node {node} has in-degree {din} and out-degree {dout}"
                )));
            }
        }
        let next = g
            .edges
            .iter()
            .position(|&(a, _)| a == v)
            .expect("out-degree checked");
        out[(next, e)] = Complex::new(T::one(), T::zero());
    }
    Ok(out)
}
