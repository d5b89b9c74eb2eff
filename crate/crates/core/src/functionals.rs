//! Linear functionals on characters that are invariant under `TS`.
//!
//! A functional `ω(χ) = Σ_l Σ_j a_j^{(l)} α_j^{(l)}` is `TS`-invariant when
//! `TS(χ, ω(χ)) = (χ̃, ω(χ̃))` for every character `χ`. The invariant ones are
//! exactly
//!
//! ```text
//! a_j^{(l)} = (s-1)^j / (1 + (s-1) + ... + (s-1)^{k_l})
//! ```
//!
//! with `s` a root of the spectral equation, so there are none on Dynkin
//! graphs, one (`s = 2`, `a_j^{(l)} = 1/(k_l+1)`) on extended Dynkin graphs
//! and two on hyperbolic graphs.

use num_traits::{One, Zero};

use crate::coxeter::{reflect_s, reflect_t};
use crate::error::{Error, Result};
use crate::graph::{require_extended, ExtendedType, GeneralizedCharacter, StarGraph};
use crate::rational::{self, Rational};
use crate::spectral::{classify_analytic, RootValue, SpectralRoot};

#[derive(Clone, Debug, PartialEq)]
pub enum Coefficients {
    Exact(Vec<Vec<Rational>>),
    Approx(Vec<Vec<f64>>),
}

/// The value of a functional on a character; exact when the coefficients are.
#[derive(Clone, Debug, PartialEq)]
pub enum FunctionalValue {
    Exact(Rational),
    Approx(f64),
}

impl FunctionalValue {
    pub fn as_f64(&self) -> f64 {
        match self {
            FunctionalValue::Exact(r) => rational::to_f64(r),
            FunctionalValue::Approx(x) => *x,
        }
    }
}

/// Outcome of [`InvariantFunctional::verify_invariance`].
#[derive(Clone, Debug, PartialEq)]
pub struct InvarianceCheck {
    pub holds: bool,
    /// `ω(χ̃) - λ̃` where `(χ̃, λ̃) = TS(χ, ω(χ))`.
    pub residual: FunctionalValue,
}

#[derive(Clone, Debug, PartialEq)]
pub struct InvariantFunctional {
    graph: StarGraph,
    root: Option<SpectralRoot>,
    coeffs: Coefficients,
}

/// `(s-1)^j / (1 + ... + (s-1)^k)` for `j = 1..=k`, in exact arithmetic.
fn exact_branch_coefficients(s: &Rational, k: usize) -> Vec<Rational> {
    let x = s - Rational::one();
    let mut powers = Vec::with_capacity(k + 1);
    let mut p = Rational::one();
    for _ in 0..=k {
        powers.push(p.clone());
        p *= &x;
    }
    let denom: Rational = powers.iter().sum();
    powers[1..].iter().map(|p| p / &denom).collect()
}

fn approx_branch_coefficients(s: f64, k: usize) -> Vec<f64> {
    let x = s - 1.0;
    let powers: Vec<f64> = (0..=k as i32).map(|j| x.powi(j)).collect();
    let denom: f64 = powers.iter().sum();
    powers[1..].iter().map(|p| p / denom).collect()
}

/// The closed forms listed for the four extended Dynkin stars, by branch
/// length.
fn closed_form_branch(ty: ExtendedType, k: usize) -> Vec<Rational> {
    let (numerators, denominator): (&[i64], i64) = match (ty, k) {
        (ExtendedType::D4, 1) => (&[1], 2),
        (ExtendedType::E6, 2) => (&[1, 1], 3),
        (ExtendedType::E7, 3) => (&[1, 1, 1], 4),
        (ExtendedType::E7, 1) => (&[2], 4),
        (ExtendedType::E8, 5) => (&[1, 1, 1, 1, 1], 6),
        (ExtendedType::E8, 2) => (&[2, 2], 6),
        (ExtendedType::E8, 1) => (&[3], 6),
        _ => unreachable!("branch length {k} does not occur in {ty:?}"),
    };
    numerators
        .iter()
        .map(|&a| rational::frac(a, denominator))
        .collect()
}

impl InvariantFunctional {
    /// The unique invariant functional of an extended Dynkin graph.
    pub fn exact(g: &StarGraph) -> Result<Self> {
        let ty = require_extended(g)?;
        let functional = Self::from_exact_root(g, rational::int(2));
        if let Coefficients::Exact(coeffs) = &functional.coeffs {
            for (branch, &k) in coeffs.iter().zip(g.branch_lengths()) {
                assert_eq!(
                    *branch,
                    closed_form_branch(ty, k),
                    "coefficient formula disagrees with the closed form for {}",
                    ty.name()
                );
            }
        }
        Ok(functional)
    }

    /// Coefficients from a rational root `s` of the spectral equation.
    pub fn from_exact_root(g: &StarGraph, s: Rational) -> Self {
        let coeffs = g
            .branch_lengths()
            .iter()
            .map(|&k| exact_branch_coefficients(&s, k))
            .collect();
        InvariantFunctional {
            graph: g.clone(),
            root: Some(SpectralRoot::exact(s)),
            coeffs: Coefficients::Exact(coeffs),
        }
    }

    /// Coefficients from a floating-point root. Panics if a coefficient comes
    /// out negative, which can only happen for `s < 1`.
    pub fn from_root(g: &StarGraph, root: SpectralRoot) -> Self {
        let s = match &root.value {
            RootValue::Exact(r) => return Self::from_exact_root(g, r.clone()),
            RootValue::Approx(s) => *s,
        };
        let coeffs: Vec<Vec<f64>> = g
            .branch_lengths()
            .iter()
            .map(|&k| approx_branch_coefficients(s, k))
            .collect();
        assert!(
            coeffs.iter().flatten().all(|&a| a >= 0.0),
            "negative coefficient for root s = {s} on {g}"
        );
        InvariantFunctional {
            graph: g.clone(),
            root: Some(root),
            coeffs: Coefficients::Approx(coeffs),
        }
    }

    /// An arbitrary linear functional with the given coefficients. Useful to
    /// test whether a candidate is invariant.
    pub fn with_coefficients(g: &StarGraph, coeffs: Vec<Vec<Rational>>) -> Result<Self> {
        GeneralizedCharacter::on(g, coeffs.clone())?;
        Ok(InvariantFunctional {
            graph: g.clone(),
            root: None,
            coeffs: Coefficients::Exact(coeffs),
        })
    }

    pub fn graph(&self) -> &StarGraph {
        &self.graph
    }

    /// The root `s` the coefficients were built from, if any.
    pub fn root(&self) -> Option<&SpectralRoot> {
        self.root.as_ref()
    }

    pub fn coefficients(&self) -> &Coefficients {
        &self.coeffs
    }

    pub fn is_exact(&self) -> bool {
        matches!(self.coeffs, Coefficients::Exact(_))
    }

    pub fn evaluate(&self, chi: &GeneralizedCharacter) -> Result<FunctionalValue> {
        chi.check_shape(&self.graph)?;
        Ok(match &self.coeffs {
            Coefficients::Exact(a) => FunctionalValue::Exact(dot_exact(a, chi.branches())),
            Coefficients::Approx(a) => FunctionalValue::Approx(dot_f64(a, &chi.to_f64())),
        })
    }

    /// [`evaluate`](Self::evaluate) for functionals with exact coefficients.
    pub fn evaluate_exact(&self, chi: &GeneralizedCharacter) -> Result<Rational> {
        match self.evaluate(chi)? {
            FunctionalValue::Exact(r) => Ok(r),
            FunctionalValue::Approx(_) => Err(Error::Domain(
                "functional has floating-point coefficients".into(),
            )),
        }
    }

    /// Checks `TS(χ, ω(χ)) = (χ̃, ω(χ̃))`. Exact functionals must match
    /// exactly and ignore `tol`.
    pub fn verify_invariance(
        &self,
        chi: &GeneralizedCharacter,
        tol: f64,
    ) -> Result<InvarianceCheck> {
        chi.check_shape(&self.graph)?;
        match &self.coeffs {
            Coefficients::Exact(a) => {
                let omega = dot_exact(a, chi.branches());
                let (reflected, lambda) = reflect_s(chi.branches(), &omega);
                let (image, lambda) = reflect_t(&reflected, &lambda);
                let residual = dot_exact(a, &image) - lambda;
                Ok(InvarianceCheck {
                    holds: residual.is_zero(),
                    residual: FunctionalValue::Exact(residual),
                })
            }
            Coefficients::Approx(a) => {
                let chi = chi.to_f64();
                let omega = dot_f64(a, &chi);
                let (reflected, lambda) = reflect_s(&chi, &omega);
                let (image, lambda) = reflect_t(&reflected, &lambda);
                let residual = dot_f64(a, &image) - lambda;
                Ok(InvarianceCheck {
                    holds: residual.abs() < tol,
                    residual: FunctionalValue::Approx(residual),
                })
            }
        }
    }
}

fn dot_exact(a: &[Vec<Rational>], chi: &[Vec<Rational>]) -> Rational {
    a.iter()
        .zip(chi)
        .flat_map(|(a, x)| a.iter().zip(x))
        .map(|(a, x)| a * x)
        .sum()
}

fn dot_f64(a: &[Vec<f64>], chi: &[Vec<f64>]) -> f64 {
    a.iter()
        .zip(chi)
        .flat_map(|(a, x)| a.iter().zip(x))
        .map(|(a, x)| a * x)
        .sum()
}

/// One invariant functional per root of the spectral equation on `[1, ∞)`.
pub fn build_functionals(g: &StarGraph, tol: f64) -> Vec<InvariantFunctional> {
    classify_analytic(g, tol)
        .roots
        .into_iter()
        .map(|root| InvariantFunctional::from_root(g, root))
        .collect()
}
