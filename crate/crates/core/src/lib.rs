//! Coxeter reflection functors and invariant functionals on star-shaped graphs.
//!
//! A star graph is a collection of `n` paths (branches) of lengths
//! `k_1, ..., k_n` glued at a single root vertex. A *character* marks the
//! non-root vertices of every branch with strictly increasing positive
//! weights and a *weighted pair* adds a root weight `λ`. Such a pair fixes the
//! spectra of `n` self-adjoint operators whose sum is `λ·I`.
//!
//! The crate provides:
//!
//! * [`graph`]: star graphs, characters, special characters and the
//!   structural Dynkin / extended Dynkin / hyperbolic classifier.
//! * [`spectral`]: the scalar type-distinguishing equation
//!   `n - s = Σ_l 1/(1 + (s-1) + ... + (s-1)^{k_l})` and the analytic
//!   classifier built on it.
//! * [`functionals`]: `TS`-invariant linear functionals on characters.
//! * [`coxeter`]: the functors `S` and `T` on pairs, orbits, periodicity and
//!   the reduction engine for extended Dynkin graphs.
//! * [`matrix_reps`]: verification of explicit operator tuples, commutants
//!   and the rigidity index.
//! * [`batch`]: data-parallel sweeps over graphs and characters (rayon behind
//!   the `parallel` feature, sequential otherwise).
//! * [`wire`]: the JSON formats used by the command-line tool.
//!
//! Everything except [`matrix_reps`] and the hyperbolic branch of
//! [`spectral`]/[`functionals`] runs in exact rational arithmetic.

pub mod batch;
pub mod coxeter;
pub mod error;
pub mod functionals;
pub mod graph;
pub mod matrix_reps;
pub mod rational;
pub mod spectral;
pub mod wire;

pub use coxeter::{
    apply_s, apply_st, apply_t, apply_ts, orbit, reduce, verify_periodicity, Functor, OrbitStep,
    ReductionOutcome, Terminal,
};
pub use error::{Error, Result};
pub use functionals::{build_functionals, InvariantFunctional};
pub use graph::{
    classify_structural, decompose, special_character, Character, DynkinType, ExtendedType,
    GeneralizedCharacter, GraphClass, GraphKind, StarGraph, WeightedPair,
};
pub use rational::Rational;
pub use spectral::{classify_analytic, eval_f, eval_f_prime, hyperbolic_roots, SpectralResult};
