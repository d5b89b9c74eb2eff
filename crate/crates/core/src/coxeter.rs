//! The reflection functors `S` and `T` acting on weighted pairs.
//!
//! On a pair `(χ, λ)` with branch weights `α_1 < ... < α_k` (and `α_0 = 0`):
//!
//! * `S` replaces every branch by `(α_k - α_{k-1}, ..., α_k - α_0)` and `λ` by
//!   `Σ_l α_{k_l}^{(l)} - λ`;
//! * `T` replaces every branch by `(λ - α_k, ..., λ - α_1)` and keeps `λ`.
//!
//! Composites follow function notation: `ST = S ∘ T` applies `T` first. With
//! this order one period of `ST` on an extended Dynkin graph shifts a
//! normalized pair by a multiple of the special character; see
//! [`verify_periodicity`].

use std::fmt;
use std::ops::{Add, Sub};

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::functionals::InvariantFunctional;
use crate::graph::{
    require_extended, special_character, Character, GeneralizedCharacter, StarGraph, WeightedPair,
};
use crate::rational::{self, Rational};

pub const DEFAULT_MAX_STEPS: usize = 10_000;

/// Scalars the functors can act on: exact rationals or doubles.
pub trait Weight: Clone + Zero + Add<Output = Self> + Sub<Output = Self> {}

impl<W: Clone + Zero + Add<Output = W> + Sub<Output = W>> Weight for W {}

pub(crate) fn reflect_s<W: Weight>(branches: &[Vec<W>], lambda: &W) -> (Vec<Vec<W>>, W) {
    let mut top_sum = W::zero();
    let reflected = branches
        .iter()
        .map(|b| {
            let k = b.len();
            let top = b[k - 1].clone();
            top_sum = top_sum.clone() + top.clone();
            // position i holds α_k - α_{k-1-i}; α_m sits at b[m-1]
            (0..k)
                .map(|i| match k - 1 - i {
                    0 => top.clone(),
                    m => top.clone() - b[m - 1].clone(),
                })
                .collect()
        })
        .collect();
    (reflected, top_sum - lambda.clone())
}

pub(crate) fn reflect_t<W: Weight>(branches: &[Vec<W>], lambda: &W) -> (Vec<Vec<W>>, W) {
    let reflected = branches
        .iter()
        .map(|b| b.iter().rev().map(|x| lambda.clone() - x.clone()).collect())
        .collect();
    (reflected, lambda.clone())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Functor {
    S,
    T,
}

impl Functor {
    pub fn apply(self, p: &WeightedPair) -> WeightedPair {
        match self {
            Functor::S => apply_s(p),
            Functor::T => apply_t(p),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Functor::S => "S",
            Functor::T => "T",
        }
    }
}

impl fmt::Display for Functor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Parses a word such as `"STST"`. Whitespace is ignored.
pub fn parse_word(word: &str) -> Result<Vec<Functor>> {
    word.chars()
        .filter(|c| !c.is_whitespace())
        .map(|c| match c {
            'S' | 's' => Ok(Functor::S),
            'T' | 't' => Ok(Functor::T),
            _ => Err(Error::InvalidWord(word.to_string())),
        })
        .collect()
}

fn pair_from(branches: Vec<Vec<Rational>>, lambda: Rational) -> WeightedPair {
    WeightedPair::new(
        GeneralizedCharacter::from_branches_unchecked(branches),
        lambda,
    )
}

pub fn apply_s(p: &WeightedPair) -> WeightedPair {
    let (branches, lambda) = reflect_s(p.character.branches(), &p.lambda);
    pair_from(branches, lambda)
}

pub fn apply_t(p: &WeightedPair) -> WeightedPair {
    let (branches, lambda) = reflect_t(p.character.branches(), &p.lambda);
    pair_from(branches, lambda)
}

/// `S ∘ T`: `T` first, then `S`.
pub fn apply_st(p: &WeightedPair) -> WeightedPair {
    apply_s(&apply_t(p))
}

/// `T ∘ S`: `S` first, then `T`.
pub fn apply_ts(p: &WeightedPair) -> WeightedPair {
    apply_t(&apply_s(p))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitStep {
    pub index: usize,
    pub pair: WeightedPair,
    /// `None` for the starting pair.
    pub op: Option<Functor>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Orbit {
    pub steps: Vec<OrbitStep>,
    /// Set when the word was longer than the step budget.
    pub step_limit_hit: bool,
}

impl Orbit {
    pub fn last(&self) -> &WeightedPair {
        &self
            .steps
            .last()
            .expect("orbit holds the starting pair")
            .pair
    }
}

/// Replays `word` on `p`, recording every intermediate pair.
///
/// The word is read as a composition, so its rightmost letter acts first:
/// `"ST"` applies `T` and then `S`, and `"STST"` equals two applications of
/// [`apply_st`].
pub fn orbit(p: &WeightedPair, word: &[Functor], max_steps: usize) -> Orbit {
    let mut steps = vec![OrbitStep {
        index: 0,
        pair: p.clone(),
        op: None,
    }];
    let mut current = p.clone();
    for (i, &op) in word.iter().rev().enumerate() {
        if i == max_steps {
            return Orbit {
                steps,
                step_limit_hit: true,
            };
        }
        current = op.apply(&current);
        steps.push(OrbitStep {
            index: i + 1,
            pair: current.clone(),
            op: Some(op),
        });
    }
    Orbit {
        steps,
        step_limit_hit: false,
    }
}

/// Applies a word (rightmost letter first) and returns the final pair.
pub fn apply_word(p: &WeightedPair, word: &[Functor]) -> WeightedPair {
    word.iter().rev().fold(p.clone(), |acc, op| op.apply(&acc))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeriodicityCheck {
    pub holds: bool,
    /// Number of `ST` applications performed.
    pub applications: usize,
    pub gamma: Rational,
    /// Orbit endpoint minus the predicted pair.
    pub residual_character: GeneralizedCharacter,
    pub residual_lambda: Rational,
}

/// Checks `(ST)^{m·k}(χ, λ) = (χ - c·k·γ·χ_Γ, λ - d·k·γ)` on an extended
/// Dynkin graph, where `γ = ω_Γ - λ` and `(m, c, d)` is `(2, 2, 4)`,
/// `(6, 3, 9)`, `(12, 4, 16)` or `(30, 6, 36)` for `D̃4`, `Ẽ6`, `Ẽ7`, `Ẽ8`.
///
/// `χ` must already be normalized so that `ω(χ) = ω_Γ`.
pub fn verify_periodicity(
    g: &StarGraph,
    chi: &GeneralizedCharacter,
    lambda: &Rational,
    k: usize,
) -> Result<PeriodicityCheck> {
    let ty = require_extended(g)?;
    chi.check_shape(g)?;
    if k == 0 {
        return Err(Error::Domain(
            "periodicity multiplier k must be positive".into(),
        ));
    }
    let omega = InvariantFunctional::exact(g)?.evaluate_exact(chi)?;
    let special_value = rational::int(ty.special_value());
    if omega != special_value {
        return Err(Error::NotNormalized {
            actual: rational::format(&omega),
            expected: rational::format(&special_value),
        });
    }
    let gamma = &special_value - lambda;
    let applications = ty.period() * k;
    let mut pair = WeightedPair::new(chi.clone(), lambda.clone());
    for _ in 0..applications {
        pair = apply_st(&pair);
    }

    let (c, d) = ty.period_shift();
    let kk = rational::int(k as i64);
    let special = special_character(g)?;
    let expected_chi = chi.add_scaled(&-(rational::int(c) * &kk * &gamma), &special)?;
    let expected_lambda = lambda - rational::int(d) * &kk * &gamma;

    let residual_character = pair
        .character
        .add_scaled(&rational::int(-1), &expected_chi)?;
    let residual_lambda = &pair.lambda - expected_lambda;
    Ok(PeriodicityCheck {
        holds: residual_character.is_zero() && residual_lambda.is_zero(),
        applications,
        gamma,
        residual_character,
        residual_lambda,
    })
}

/// Why the reduction loop stopped. Positions are 1-based `(branch, j)`,
/// naming the weight `α_j^{(branch)}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Terminal {
    /// Some weight exceeds `λ`: the matching projection must vanish.
    CoefficientExceedsLambda {
        branch: usize,
        position: usize,
    },
    /// Some weight equals `λ`: the matching projection is `0` or `I`.
    CoefficientEqualsLambda {
        branch: usize,
        position: usize,
    },
    NonpositiveCoefficient {
        branch: usize,
        position: usize,
    },
    /// `λ = ω(χ)`; the loop does not apply.
    SpecialPoint,
    StepLimit,
}

impl Terminal {
    pub fn name(&self) -> &'static str {
        match self {
            Terminal::CoefficientExceedsLambda { .. } => "CoefficientExceedsLambda",
            Terminal::CoefficientEqualsLambda { .. } => "CoefficientEqualsLambda",
            Terminal::NonpositiveCoefficient { .. } => "NonpositiveCoefficient",
            Terminal::SpecialPoint => "SpecialPoint",
            Terminal::StepLimit => "StepLimit",
        }
    }

    /// `(branch, position)` of the offending weight, if any.
    pub fn location(&self) -> Option<(usize, usize)> {
        match *self {
            Terminal::CoefficientExceedsLambda { branch, position }
            | Terminal::CoefficientEqualsLambda { branch, position }
            | Terminal::NonpositiveCoefficient { branch, position } => Some((branch, position)),
            Terminal::SpecialPoint | Terminal::StepLimit => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionOutcome {
    pub terminal: Terminal,
    /// `ST` applications performed inside the loop.
    pub steps: usize,
    /// Whether an initial `S` was applied because `λ > ω(χ)`.
    pub reflected: bool,
    /// Every pair visited, one entry per single functor application.
    pub trace: Vec<OrbitStep>,
}

fn inspect(p: &WeightedPair) -> Option<Terminal> {
    let lambda = &p.lambda;
    let chi = &p.character;
    if let Some((branch, position, _)) = chi.indexed_entries().find(|(_, _, x)| *x > lambda) {
        return Some(Terminal::CoefficientExceedsLambda { branch, position });
    }
    if let Some((branch, position, _)) = chi.indexed_entries().find(|(_, _, x)| *x == lambda) {
        return Some(Terminal::CoefficientEqualsLambda { branch, position });
    }
    if let Some((branch, position, _)) = chi.indexed_entries().find(|(_, _, x)| !x.is_positive()) {
        return Some(Terminal::NonpositiveCoefficient { branch, position });
    }
    None
}

/// Upper bound on the `ST` steps [`reduce`] needs once `λ < ω(χ)`:
/// `⌈m·ω(χ) / (d·(ω(χ) - λ))⌉ + m` with `m`, `d` as in
/// [`verify_periodicity`]. Each period lowers the normalized `λ` by `d·γ`,
/// and no weight can sit strictly between `0` and `λ ≤ 0`.
pub fn reduction_step_bound(
    g: &StarGraph,
    chi: &GeneralizedCharacter,
    lambda: &Rational,
) -> Result<u64> {
    let ty = require_extended(g)?;
    let omega = InvariantFunctional::exact(g)?.evaluate_exact(chi)?;
    let gap = &omega - lambda;
    if !gap.is_positive() || !omega.is_positive() {
        return Err(Error::Domain(format!(
            "step bound needs 0 < λ < ω(χ) style input, got ω(χ) = {omega}, λ = {lambda}"
        )));
    }
    let m = rational::int(ty.period() as i64);
    let d = rational::int(ty.period_shift().1);
    let bound = rational::ceil_to_u64(&(&m * &omega / (d * gap)))
        .ok_or_else(|| Error::Domain("step bound overflows u64".into()))?;
    Ok(bound + ty.period() as u64)
}

/// Runs the reduction loop on an extended Dynkin graph.
///
/// * `λ = ω(χ)`: stops at once with [`Terminal::SpecialPoint`].
/// * `λ > ω(χ)`: applies `S` once, which yields `λ' < ω(χ')`, then loops.
/// * `λ < ω(χ)`: inspects every weight (exceeds `λ`, equals `λ`,
///   nonpositive, in that order) and applies `ST` until one of them fires.
pub fn reduce(
    g: &StarGraph,
    chi: &Character,
    lambda: &Rational,
    max_steps: usize,
) -> Result<ReductionOutcome> {
    require_extended(g)?;
    chi.check_shape(g)?;
    if !lambda.is_positive() {
        return Err(Error::Domain(format!("λ must be positive, got {lambda}")));
    }
    let omega = InvariantFunctional::exact(g)?.evaluate_exact(chi)?;
    let mut pair = WeightedPair::new(chi.as_generalized().clone(), lambda.clone());
    let mut trace = vec![OrbitStep {
        index: 0,
        pair: pair.clone(),
        op: None,
    }];
    if *lambda == omega {
        return Ok(ReductionOutcome {
            terminal: Terminal::SpecialPoint,
            steps: 0,
            reflected: false,
            trace,
        });
    }

    let push = |trace: &mut Vec<OrbitStep>, pair: &WeightedPair, op| {
        let index = trace.len();
        trace.push(OrbitStep {
            index,
            pair: pair.clone(),
            op: Some(op),
        });
    };

    let reflected = *lambda > omega;
    if reflected {
        pair = apply_s(&pair);
        push(&mut trace, &pair, Functor::S);
    }

    let mut steps = 0;
    loop {
        if let Some(terminal) = inspect(&pair) {
            return Ok(ReductionOutcome {
                terminal,
                steps,
                reflected,
                trace,
            });
        }
        if steps == max_steps {
            return Ok(ReductionOutcome {
                terminal: Terminal::StepLimit,
                steps,
                reflected,
                trace,
            });
        }
        pair = apply_t(&pair);
        push(&mut trace, &pair, Functor::T);
        pair = apply_s(&pair);
        push(&mut trace, &pair, Functor::S);
        steps += 1;
    }
}
