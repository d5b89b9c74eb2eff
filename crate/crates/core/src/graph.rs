//! Star graphs, characters and weighted pairs.

use std::fmt;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::functionals::InvariantFunctional;
use crate::rational::{self, Rational};

/// A star-shaped graph: `n ≥ 1` paths of lengths `k_1, ..., k_n` joined at a
/// single root vertex.
///
/// Branch order is kept as given, since characters attach weights per branch.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct StarGraph {
    branches: Vec<usize>,
}

impl StarGraph {
    pub fn new(branch_lengths: Vec<usize>) -> Result<Self> {
        if branch_lengths.is_empty() {
            return Err(Error::InvalidShape(
                "a star graph needs at least one branch".into(),
            ));
        }
        if let Some(pos) = branch_lengths.iter().position(|&k| k == 0) {
            return Err(Error::InvalidShape(format!(
                "branch {} has length 0; every branch needs at least one vertex",
                pos + 1
            )));
        }
        Ok(StarGraph {
            branches: branch_lengths,
        })
    }

    /// Like [`StarGraph::new`] but accepts signed lengths, as read from JSON.
    pub fn from_signed(branch_lengths: &[i64]) -> Result<Self> {
        let lengths = branch_lengths
            .iter()
            .map(|&k| {
                usize::try_from(k)
                    .map_err(|_| Error::InvalidShape(format!("branch length {k} is negative")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(lengths)
    }

    pub fn branch_lengths(&self) -> &[usize] {
        &self.branches
    }

    /// Number of branches `n`.
    pub fn branch_count(&self) -> usize {
        self.branches.len()
    }

    /// `Σ k_l`, the number of non-root vertices.
    pub fn total_length(&self) -> usize {
        self.branches.iter().sum()
    }

    pub fn vertex_count(&self) -> usize {
        1 + self.total_length()
    }

    pub fn sorted_lengths(&self) -> Vec<usize> {
        let mut sorted = self.branches.clone();
        sorted.sort_unstable();
        sorted
    }
}

impl fmt::Display for StarGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, k) in self.branches.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{k}")?;
        }
        write!(f, "]")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DynkinType {
    /// `A_d`, `d` vertices.
    A(usize),
    /// `D_d`, `d ≥ 4` vertices.
    D(usize),
    E6,
    E7,
    E8,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ExtendedType {
    D4,
    E6,
    E7,
    E8,
}

impl ExtendedType {
    pub const ALL: [ExtendedType; 4] = [
        ExtendedType::D4,
        ExtendedType::E6,
        ExtendedType::E7,
        ExtendedType::E8,
    ];

    /// Branch lengths in the order used for the special character table.
    pub fn branch_lengths(self) -> Vec<usize> {
        match self {
            ExtendedType::D4 => vec![1, 1, 1, 1],
            ExtendedType::E6 => vec![2, 2, 2],
            ExtendedType::E7 => vec![3, 3, 1],
            ExtendedType::E8 => vec![5, 2, 1],
        }
    }

    pub fn graph(self) -> StarGraph {
        StarGraph::new(self.branch_lengths()).expect("static shape is valid")
    }

    /// `ω_Γ = ω(χ_Γ)`.
    pub fn special_value(self) -> i64 {
        match self {
            ExtendedType::D4 => 2,
            ExtendedType::E6 => 3,
            ExtendedType::E7 => 4,
            ExtendedType::E8 => 6,
        }
    }

    /// Number of `ST` applications after which the orbit shifts by a
    /// multiple of the special character.
    pub fn period(self) -> usize {
        match self {
            ExtendedType::D4 => 2,
            ExtendedType::E6 => 6,
            ExtendedType::E7 => 12,
            ExtendedType::E8 => 30,
        }
    }

    /// `(c, d)` such that one period maps `(χ, λ)` to `(χ - cγχ_Γ, λ - dγ)`.
    pub fn period_shift(self) -> (i64, i64) {
        match self {
            ExtendedType::D4 => (2, 4),
            ExtendedType::E6 => (3, 9),
            ExtendedType::E7 => (4, 16),
            ExtendedType::E8 => (6, 36),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ExtendedType::D4 => "D4~",
            ExtendedType::E6 => "E6~",
            ExtendedType::E7 => "E7~",
            ExtendedType::E8 => "E8~",
        }
    }

    /// Special character weights on a branch of length `k`.
    fn special_branch(self, k: usize) -> Option<Vec<i64>> {
        let weights = match (self, k) {
            (ExtendedType::D4, 1) => vec![1],
            (ExtendedType::E6, 2) => vec![1, 2],
            (ExtendedType::E7, 3) => vec![1, 2, 3],
            (ExtendedType::E7, 1) => vec![2],
            (ExtendedType::E8, 5) => vec![1, 2, 3, 4, 5],
            (ExtendedType::E8, 2) => vec![2, 4],
            (ExtendedType::E8, 1) => vec![3],
            _ => return None,
        };
        Some(weights)
    }
}

/// Coarse trichotomy shared by the structural and analytic classifiers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GraphKind {
    Dynkin,
    ExtendedDynkin,
    Hyperbolic,
}

impl GraphKind {
    pub fn as_str(self) -> &'static str {
        match self {
            GraphKind::Dynkin => "dynkin",
            GraphKind::ExtendedDynkin => "extended",
            GraphKind::Hyperbolic => "hyperbolic",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GraphClass {
    Dynkin(DynkinType),
    ExtendedDynkin(ExtendedType),
    /// Neither Dynkin nor extended Dynkin.
    Hyperbolic,
}

impl GraphClass {
    pub fn kind(self) -> GraphKind {
        match self {
            GraphClass::Dynkin(_) => GraphKind::Dynkin,
            GraphClass::ExtendedDynkin(_) => GraphKind::ExtendedDynkin,
            GraphClass::Hyperbolic => GraphKind::Hyperbolic,
        }
    }

    pub fn name(self) -> String {
        match self {
            GraphClass::Dynkin(DynkinType::A(d)) => format!("A{d}"),
            GraphClass::Dynkin(DynkinType::D(d)) => format!("D{d}"),
            GraphClass::Dynkin(DynkinType::E6) => "E6".into(),
            GraphClass::Dynkin(DynkinType::E7) => "E7".into(),
            GraphClass::Dynkin(DynkinType::E8) => "E8".into(),
            GraphClass::ExtendedDynkin(t) => t.name().into(),
            GraphClass::Hyperbolic => "hyperbolic".into(),
        }
    }

    pub fn extended(self) -> Option<ExtendedType> {
        match self {
            GraphClass::ExtendedDynkin(t) => Some(t),
            _ => None,
        }
    }
}

/// Pattern match on the multiset of branch lengths.
pub fn classify_structural(g: &StarGraph) -> GraphClass {
    let sorted = g.sorted_lengths();
    if sorted.len() <= 2 {
        return GraphClass::Dynkin(DynkinType::A(g.vertex_count()));
    }
    match sorted.as_slice() {
        [1, 1, m] => GraphClass::Dynkin(DynkinType::D(m + 3)),
        [1, 2, 2] => GraphClass::Dynkin(DynkinType::E6),
        [1, 2, 3] => GraphClass::Dynkin(DynkinType::E7),
        [1, 2, 4] => GraphClass::Dynkin(DynkinType::E8),
        [1, 1, 1, 1] => GraphClass::ExtendedDynkin(ExtendedType::D4),
        [2, 2, 2] => GraphClass::ExtendedDynkin(ExtendedType::E6),
        [1, 3, 3] => GraphClass::ExtendedDynkin(ExtendedType::E7),
        [1, 2, 5] => GraphClass::ExtendedDynkin(ExtendedType::E8),
        _ => GraphClass::Hyperbolic,
    }
}

/// Returns the extended Dynkin type of `g` or an unsupported-graph error.
pub fn require_extended(g: &StarGraph) -> Result<ExtendedType> {
    classify_structural(g)
        .extended()
        .ok_or_else(|| Error::UnsupportedGraph {
            graph: g.to_string(),
            reason: "an extended Dynkin graph (D4~, E6~, E7~ or E8~) is required".into(),
        })
}

/// Per-branch rational weights with no sign or ordering constraint.
///
/// Functor orbits and the residual of [`decompose`] leave the cone of
/// positive increasing characters, so most operations work on this type.
/// The weight `α_0 = 0` of every branch is implicit.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GeneralizedCharacter {
    branches: Vec<Vec<Rational>>,
}

impl GeneralizedCharacter {
    /// Builds a character from per-branch weights. Every branch must be
    /// nonempty.
    pub fn new(branches: Vec<Vec<Rational>>) -> Result<Self> {
        if branches.is_empty() {
            return Err(Error::InvalidShape(
                "a character needs at least one branch".into(),
            ));
        }
        if let Some(pos) = branches.iter().position(Vec::is_empty) {
            return Err(Error::InvalidShape(format!("branch {} is empty", pos + 1)));
        }
        Ok(GeneralizedCharacter { branches })
    }

    /// Builds a character and checks that it fits `g`.
    pub fn on(g: &StarGraph, branches: Vec<Vec<Rational>>) -> Result<Self> {
        let chi = Self::new(branches)?;
        chi.check_shape(g)?;
        Ok(chi)
    }

    pub fn from_integers(branches: &[&[i64]]) -> Result<Self> {
        Self::new(
            branches
                .iter()
                .map(|b| b.iter().map(|&x| rational::int(x)).collect())
                .collect(),
        )
    }

    pub fn zero(g: &StarGraph) -> Self {
        GeneralizedCharacter {
            branches: g
                .branch_lengths()
                .iter()
                .map(|&k| vec![Rational::zero(); k])
                .collect(),
        }
    }

    pub(crate) fn from_branches_unchecked(branches: Vec<Vec<Rational>>) -> Self {
        GeneralizedCharacter { branches }
    }

    pub fn branches(&self) -> &[Vec<Rational>] {
        &self.branches
    }

    pub fn into_branches(self) -> Vec<Vec<Rational>> {
        self.branches
    }

    /// The star graph this character lives on.
    pub fn shape(&self) -> StarGraph {
        StarGraph {
            branches: self.branches.iter().map(Vec::len).collect(),
        }
    }

    pub fn fits(&self, g: &StarGraph) -> bool {
        self.branches.len() == g.branch_count()
            && self
                .branches
                .iter()
                .zip(g.branch_lengths())
                .all(|(b, &k)| b.len() == k)
    }

    pub fn check_shape(&self, g: &StarGraph) -> Result<()> {
        if self.fits(g) {
            Ok(())
        } else {
            Err(Error::InvalidShape(format!(
                "character with branch lengths {} does not fit graph {g}",
                self.shape()
            )))
        }
    }

    /// `α_{k_l}^{(l)}` for every branch.
    pub fn tops(&self) -> impl Iterator<Item = &Rational> {
        self.branches
            .iter()
            .map(|b| b.last().expect("branches are nonempty"))
    }

    /// Entries with 1-based `(branch, position)` indices.
    pub fn indexed_entries(&self) -> impl Iterator<Item = (usize, usize, &Rational)> {
        self.branches
            .iter()
            .enumerate()
            .flat_map(|(l, b)| b.iter().enumerate().map(move |(j, x)| (l + 1, j + 1, x)))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        self.map(|x| x * c)
    }

    pub fn map(&self, f: impl Fn(&Rational) -> Rational) -> Self {
        GeneralizedCharacter {
            branches: self
                .branches
                .iter()
                .map(|b| b.iter().map(&f).collect())
                .collect(),
        }
    }

    /// Entrywise `self + c·other`; shapes must agree.
    pub fn add_scaled(&self, c: &Rational, other: &GeneralizedCharacter) -> Result<Self> {
        other.check_shape(&self.shape())?;
        Ok(GeneralizedCharacter {
            branches: self
                .branches
                .iter()
                .zip(&other.branches)
                .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x + c * y).collect())
                .collect(),
        })
    }

    pub fn is_zero(&self) -> bool {
        self.branches.iter().flatten().all(Zero::is_zero)
    }

    /// `0 < α_1 < ... < α_k` on every branch.
    pub fn is_positive_increasing(&self) -> bool {
        self.branches
            .iter()
            .all(|b| b[0].is_positive() && b.windows(2).all(|w| w[0] < w[1]))
    }

    pub fn to_f64(&self) -> Vec<Vec<f64>> {
        self.branches
            .iter()
            .map(|b| b.iter().map(rational::to_f64).collect())
            .collect()
    }
}

impl fmt::Display for GeneralizedCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (l, b) in self.branches.iter().enumerate() {
            if l > 0 {
                write!(f, "; ")?;
            }
            for (j, x) in b.iter().enumerate() {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{x}")?;
            }
        }
        write!(f, ")")
    }
}

/// A character in the strict sense: strictly increasing positive weights on
/// every branch.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Character(GeneralizedCharacter);

impl Character {
    pub fn new(g: &StarGraph, branches: Vec<Vec<Rational>>) -> Result<Self> {
        Self::try_from(GeneralizedCharacter::on(g, branches)?)
    }

    pub fn from_integers(g: &StarGraph, branches: &[&[i64]]) -> Result<Self> {
        let chi = GeneralizedCharacter::from_integers(branches)?;
        chi.check_shape(g)?;
        Self::try_from(chi)
    }

    pub fn as_generalized(&self) -> &GeneralizedCharacter {
        &self.0
    }

    pub fn into_generalized(self) -> GeneralizedCharacter {
        self.0
    }
}

impl TryFrom<GeneralizedCharacter> for Character {
    type Error = Error;

    fn try_from(chi: GeneralizedCharacter) -> Result<Self> {
        for (l, b) in chi.branches.iter().enumerate() {
            if !b[0].is_positive() {
                return Err(Error::InvalidCharacter(format!(
                    "branch {} starts with {} which is not positive",
                    l + 1,
                    b[0]
                )));
            }
            if let Some(j) = b.windows(2).position(|w| w[0] >= w[1]) {
                return Err(Error::InvalidCharacter(format!(
                    "branch {} is not strictly increasing at position {}",
                    l + 1,
                    j + 2
                )));
            }
        }
        Ok(Character(chi))
    }
}

impl std::ops::Deref for Character {
    type Target = GeneralizedCharacter;

    fn deref(&self) -> &GeneralizedCharacter {
        &self.0
    }
}

impl fmt::Display for Character {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// A character together with the root weight `λ`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WeightedPair {
    pub character: GeneralizedCharacter,
    pub lambda: Rational,
}

impl WeightedPair {
    pub fn new(character: GeneralizedCharacter, lambda: Rational) -> Self {
        WeightedPair { character, lambda }
    }
}

impl fmt::Display for WeightedPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.character, self.lambda)
    }
}

/// The special character `χ_Γ` of an extended Dynkin star, laid out in the
/// branch order of `g`.
pub fn special_character(g: &StarGraph) -> Result<Character> {
    let ty = require_extended(g)?;
    let branches = g
        .branch_lengths()
        .iter()
        .map(|&k| {
            ty.special_branch(k)
                .expect("classification guarantees a table entry")
                .into_iter()
                .map(rational::int)
                .collect()
        })
        .collect();
    Character::new(g, branches)
}

/// Result of [`decompose`]: `χ = scale⁻¹·(χ_Γ + residual)` and
/// `scale·λ = ω_Γ - gamma`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    /// Factor that brings `ω(χ)` to `ω_Γ`.
    pub scale: Rational,
    /// `scale·χ - χ_Γ`; `ω(residual) = 0`.
    pub residual: GeneralizedCharacter,
    pub gamma: Rational,
}

impl Decomposition {
    /// Recovers the original character.
    pub fn recompose(&self, g: &StarGraph) -> Result<GeneralizedCharacter> {
        let special = special_character(g)?;
        let normalized = special.add_scaled(&rational::int(1), &self.residual)?;
        Ok(normalized.scale(&(rational::int(1) / &self.scale)))
    }
}

/// Splits a character on an extended Dynkin graph into the special character
/// plus a residual annihilated by the invariant functional, after
/// normalizing `ω(χ)` to `ω_Γ`.
pub fn decompose(g: &StarGraph, chi: &Character, lambda: &Rational) -> Result<Decomposition> {
    let ty = require_extended(g)?;
    chi.check_shape(g)?;
    let omega = InvariantFunctional::exact(g)?.evaluate_exact(chi)?;
    let special_value = rational::int(ty.special_value());
    // ω(χ) > 0 for any positive character
    let scale = &special_value / &omega;
    let special = special_character(g)?;
    let residual = chi.scale(&scale).add_scaled(&rational::int(-1), &special)?;
    let gamma = special_value - &scale * lambda;
    Ok(Decomposition {
        scale,
        residual,
        gamma,
    })
}
