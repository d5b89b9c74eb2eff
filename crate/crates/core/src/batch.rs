//! Batch sweeps over many graphs or characters.
//!
//! With the `parallel` feature (on by default) [`Execution::Parallel`] fans
//! work out over rayon's thread pool; without it every mode runs
//! sequentially. Results always come back in input order.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::coxeter::{reduce, ReductionOutcome};
use crate::error::Result;
use crate::functionals::{InvarianceCheck, InvariantFunctional};
use crate::graph::{
    classify_structural, Character, GeneralizedCharacter, GraphClass, GraphKind, StarGraph,
};
use crate::rational::Rational;
use crate::spectral::{classify_analytic, SpectralResult};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Execution {
    Sequential,
    #[default]
    Parallel,
}

impl Execution {
    /// Whether `Parallel` actually runs on more than one thread in this build.
    pub const PARALLEL_AVAILABLE: bool = cfg!(feature = "parallel");
}

/// Maps `f` over `items`, preserving order.
pub fn map_ordered<T, R, F>(items: &[T], mode: Execution, f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    match mode {
        #[cfg(feature = "parallel")]
        Execution::Parallel => items.par_iter().map(f).collect(),
        _ => items.iter().map(f).collect(),
    }
}

/// Every star graph with `Σ k_l ≤ max_total`, one per multiset of branch
/// lengths (branches listed in non-increasing order).
pub fn star_graphs_up_to(max_total: usize) -> Vec<StarGraph> {
    fn extend(
        remaining: usize,
        max_part: usize,
        prefix: &mut Vec<usize>,
        out: &mut Vec<StarGraph>,
    ) {
        for part in (1..=max_part.min(remaining)).rev() {
            prefix.push(part);
            out.push(StarGraph::new(prefix.clone()).expect("positive parts"));
            extend(remaining - part, part, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    extend(max_total, max_total, &mut Vec::new(), &mut out);
    out
}

#[derive(Clone, Debug, PartialEq)]
pub struct ClassifierComparison {
    pub graph: StarGraph,
    pub structural: GraphClass,
    pub analytic: SpectralResult,
}

impl ClassifierComparison {
    pub fn agrees(&self) -> bool {
        self.structural.kind() == self.analytic.kind
    }
}

/// Runs both classifiers on every star graph with `Σ k_l ≤ max_total`.
pub fn compare_classifiers(
    max_total: usize,
    tol: f64,
    mode: Execution,
) -> Vec<ClassifierComparison> {
    let graphs = star_graphs_up_to(max_total);
    map_ordered(&graphs, mode, |g| ClassifierComparison {
        graph: g.clone(),
        structural: classify_structural(g),
        analytic: classify_analytic(g, tol),
    })
}

/// Counts of each kind among the analytic results.
pub fn kind_histogram(results: &[ClassifierComparison]) -> [(GraphKind, usize); 3] {
    let count = |k| results.iter().filter(|r| r.analytic.kind == k).count();
    [
        (GraphKind::Dynkin, count(GraphKind::Dynkin)),
        (GraphKind::ExtendedDynkin, count(GraphKind::ExtendedDynkin)),
        (GraphKind::Hyperbolic, count(GraphKind::Hyperbolic)),
    ]
}

pub fn verify_invariance_batch(
    functional: &InvariantFunctional,
    characters: &[GeneralizedCharacter],
    tol: f64,
    mode: Execution,
) -> Vec<Result<InvarianceCheck>> {
    map_ordered(characters, mode, |chi| {
        functional.verify_invariance(chi, tol)
    })
}

pub fn reduce_batch(
    g: &StarGraph,
    inputs: &[(Character, Rational)],
    max_steps: usize,
    mode: Execution,
) -> Vec<Result<ReductionOutcome>> {
    map_ordered(inputs, mode, |(chi, lambda)| {
        reduce(g, chi, lambda, max_steps)
    })
}
