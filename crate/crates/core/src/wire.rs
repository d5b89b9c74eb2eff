//! JSON formats read and written by the command-line tool.
//!
//! Rationals always travel as strings (`"3"`, `"-7/2"`); plain JSON integers
//! are accepted on input as well. Floating-point values only appear where the
//! underlying quantity is numeric: hyperbolic roots and coefficients, and
//! operator tuples.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::coxeter::{OrbitStep, PeriodicityCheck, ReductionOutcome};
use crate::error::{Error, Result};
use crate::functionals::{Coefficients, FunctionalValue, InvarianceCheck, InvariantFunctional};
use crate::graph::{classify_structural, Character, GeneralizedCharacter, StarGraph};
use crate::matrix_reps::{complex_from_rows, Check, OperatorTuple, RigidityReport, TupleReport};
use crate::rational::{self, Rational};
use crate::spectral::{RootValue, SpectralResult, SpectralRoot};

/// `{"branches": [k_1, ..., k_n]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphJson {
    pub branches: Vec<i64>,
}

/// Parses either `{"branches": [...]}` or a bare array `[k_1, ...]`.
pub fn parse_graph(text: &str) -> Result<StarGraph> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Input {
        Object(GraphJson),
        Bare(Vec<i64>),
    }
    let input: Input = serde_json::from_str(text)
        .map_err(|e| Error::InvalidShape(format!("malformed graph JSON: {e}")))?;
    let lengths = match input {
        Input::Object(g) => g.branches,
        Input::Bare(b) => b,
    };
    StarGraph::from_signed(&lengths)
}

pub fn graph_json(g: &StarGraph) -> GraphJson {
    GraphJson {
        branches: g.branch_lengths().iter().map(|&k| k as i64).collect(),
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RationalText {
    Text(String),
    Integer(i64),
}

impl RationalText {
    fn parse(&self) -> Result<Rational> {
        match self {
            RationalText::Text(s) => rational::parse(s),
            RationalText::Integer(n) => Ok(rational::int(*n)),
        }
    }
}

/// `{"branches": [["p/q", ...], ...]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CharacterJson {
    pub branches: Vec<Vec<String>>,
}

impl From<&GeneralizedCharacter> for CharacterJson {
    fn from(chi: &GeneralizedCharacter) -> Self {
        CharacterJson {
            branches: chi
                .branches()
                .iter()
                .map(|b| b.iter().map(rational::format).collect())
                .collect(),
        }
    }
}

/// Parses a character payload, either `{"branches": [[...], ...]}` or the
/// bare nested array. Signs are allowed; use [`parse_character`] for the
/// strict form.
pub fn parse_generalized_character(text: &str) -> Result<GeneralizedCharacter> {
    #[derive(Deserialize)]
    struct Object {
        branches: Vec<Vec<RationalText>>,
    }
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Input {
        Object(Object),
        Bare(Vec<Vec<RationalText>>),
    }
    let input: Input = serde_json::from_str(text)
        .map_err(|e| Error::InvalidCharacter(format!("malformed character JSON: {e}")))?;
    let raw = match input {
        Input::Object(o) => o.branches,
        Input::Bare(b) => b,
    };
    let branches = raw
        .iter()
        .map(|b| {
            b.iter()
                .map(RationalText::parse)
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    GeneralizedCharacter::new(branches)
}

/// Parses a character and checks positivity and strict increase.
pub fn parse_character(text: &str) -> Result<Character> {
    Character::try_from(parse_generalized_character(text)?)
}

/// A float or an exact rational string, as used for roots and coefficients.
fn number_value(exact: Option<&Rational>, approx: f64) -> Value {
    match exact {
        Some(r) => Value::String(rational::format(r)),
        None => serde_json::Number::from_f64(approx).map_or(Value::Null, Value::Number),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RootJson {
    pub s: Value,
    pub residual: f64,
    pub exact: bool,
}

impl From<&SpectralRoot> for RootJson {
    fn from(root: &SpectralRoot) -> Self {
        let s = match &root.value {
            RootValue::Exact(r) => number_value(Some(r), 0.0),
            RootValue::Approx(x) => number_value(None, *x),
        };
        RootJson {
            s,
            residual: root.residual,
            exact: root.is_exact(),
        }
    }
}

/// `{"class": "dynkin|extended|hyperbolic", "name": ..., "roots": [...]}`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpectralJson {
    pub class: &'static str,
    pub name: String,
    pub roots: Vec<RootJson>,
}

pub fn spectral_json(g: &StarGraph, result: &SpectralResult) -> SpectralJson {
    SpectralJson {
        class: result.kind.as_str(),
        name: classify_structural(g).name(),
        roots: result.roots.iter().map(RootJson::from).collect(),
    }
}

/// `{"s": "2" | float, "coeffs": [[...], ...]}`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FunctionalJson {
    pub s: Value,
    pub coeffs: Vec<Vec<Value>>,
}

impl From<&InvariantFunctional> for FunctionalJson {
    fn from(f: &InvariantFunctional) -> Self {
        let s = f.root().map_or(Value::Null, |r| RootJson::from(r).s);
        let coeffs = match f.coefficients() {
            Coefficients::Exact(a) => a
                .iter()
                .map(|b| b.iter().map(|x| number_value(Some(x), 0.0)).collect())
                .collect(),
            Coefficients::Approx(a) => a
                .iter()
                .map(|b| b.iter().map(|&x| number_value(None, x)).collect())
                .collect(),
        };
        FunctionalJson { s, coeffs }
    }
}

pub fn functional_value_json(v: &FunctionalValue) -> Value {
    match v {
        FunctionalValue::Exact(r) => number_value(Some(r), 0.0),
        FunctionalValue::Approx(x) => number_value(None, *x),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InvarianceJson {
    pub s: Value,
    pub holds: bool,
    pub residual: Value,
}

pub fn invariance_json(f: &InvariantFunctional, check: &InvarianceCheck) -> InvarianceJson {
    InvarianceJson {
        s: FunctionalJson::from(f).s,
        holds: check.holds,
        residual: functional_value_json(&check.residual),
    }
}

/// `{"step": i, "op": "S"|"T"|null, "character": {...}, "lambda": "p/q"}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrbitStepJson {
    pub step: usize,
    pub op: Option<&'static str>,
    pub character: CharacterJson,
    pub lambda: String,
}

impl From<&OrbitStep> for OrbitStepJson {
    fn from(s: &OrbitStep) -> Self {
        OrbitStepJson {
            step: s.index,
            op: s.op.map(|op| op.as_str()),
            character: CharacterJson::from(&s.pair.character),
            lambda: rational::format(&s.pair.lambda),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PairJson {
    pub character: CharacterJson,
    pub lambda: String,
}

impl From<&crate::graph::WeightedPair> for PairJson {
    fn from(p: &crate::graph::WeightedPair) -> Self {
        PairJson {
            character: CharacterJson::from(&p.character),
            lambda: rational::format(&p.lambda),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TerminalJson {
    pub kind: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub branch: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub position: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReductionJson {
    pub terminal: TerminalJson,
    pub steps: usize,
    pub reflected: bool,
    pub trace: Vec<OrbitStepJson>,
}

impl From<&ReductionOutcome> for ReductionJson {
    fn from(r: &ReductionOutcome) -> Self {
        let location = r.terminal.location();
        ReductionJson {
            terminal: TerminalJson {
                kind: r.terminal.name(),
                branch: location.map(|l| l.0),
                position: location.map(|l| l.1),
            },
            steps: r.steps,
            reflected: r.reflected,
            trace: r.trace.iter().map(OrbitStepJson::from).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PeriodicityJson {
    pub holds: bool,
    pub applications: usize,
    pub gamma: String,
    pub residual_character: CharacterJson,
    pub residual_lambda: String,
}

impl From<&PeriodicityCheck> for PeriodicityJson {
    fn from(c: &PeriodicityCheck) -> Self {
        PeriodicityJson {
            holds: c.holds,
            applications: c.applications,
            gamma: rational::format(&c.gamma),
            residual_character: CharacterJson::from(&c.residual_character),
            residual_lambda: rational::format(&c.residual_lambda),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub re: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub im: Option<Vec<Vec<f64>>>,
}

/// `{"dim": d, "lambda": x, "spectra": [[...]], "matrices": [{"re": ..., "im": ...}]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TupleJson {
    pub dim: usize,
    pub lambda: f64,
    pub spectra: Vec<Vec<f64>>,
    pub matrices: Vec<MatrixJson>,
}

impl TupleJson {
    pub fn into_tuple(self) -> Result<OperatorTuple> {
        let matrices = self
            .matrices
            .iter()
            .map(|m| complex_from_rows(&m.re, m.im.as_deref()))
            .collect::<Result<Vec<_>>>()?;
        OperatorTuple::new(self.dim, self.lambda, matrices, self.spectra)
    }
}

impl From<&OperatorTuple> for TupleJson {
    fn from(t: &OperatorTuple) -> Self {
        let matrices = t
            .matrices()
            .iter()
            .map(|m| {
                let rows = |f: fn(&num_complex::Complex64) -> f64| {
                    (0..m.nrows())
                        .map(|i| (0..m.ncols()).map(|j| f(&m[(i, j)])).collect())
                        .collect::<Vec<Vec<f64>>>()
                };
                let im = rows(|z| z.im);
                MatrixJson {
                    re: rows(|z| z.re),
                    im: im.iter().flatten().any(|&x| x != 0.0).then_some(im),
                }
            })
            .collect();
        TupleJson {
            dim: t.dim(),
            lambda: t.lambda(),
            spectra: t.spectra().to_vec(),
            matrices,
        }
    }
}

pub fn parse_tuple(text: &str) -> Result<OperatorTuple> {
    let json: TupleJson = serde_json::from_str(text)
        .map_err(|e| Error::DimensionMismatch(format!("malformed operator tuple JSON: {e}")))?;
    json.into_tuple()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CheckJson {
    pub passed: bool,
    pub residual: f64,
}

impl From<Check> for CheckJson {
    fn from(c: Check) -> Self {
        CheckJson {
            passed: c.passed,
            residual: c.residual,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TupleReportJson {
    pub passed: bool,
    pub residual: f64,
    pub hermitian: CheckJson,
    pub sum: CheckJson,
    pub spectrum: CheckJson,
}

impl From<&TupleReport> for TupleReportJson {
    fn from(r: &TupleReport) -> Self {
        TupleReportJson {
            passed: r.passed(),
            residual: r.residual(),
            hermitian: r.hermitian.into(),
            sum: r.sum.into(),
            spectrum: r.spectrum.into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RigidityJson {
    pub rigidity_index: i64,
    pub dim: usize,
    pub operators: usize,
    pub centralizer_dims: Vec<usize>,
    pub commutant_dim: usize,
    pub irreducible: bool,
}

pub fn rigidity_json(t: &OperatorTuple, r: &RigidityReport) -> RigidityJson {
    RigidityJson {
        rigidity_index: r.index,
        dim: t.dim(),
        operators: t.matrices().len(),
        centralizer_dims: r.centralizer_dims.clone(),
        commutant_dim: r.commutant_dim,
        irreducible: r.irreducible,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functionals::build_functionals;
    use crate::matrix_reps::four_projection_tuple;
    use crate::spectral::{classify_analytic, DEFAULT_TOL};
    use proptest::prelude::*;

    #[test]
    fn graph_formats() {
        let g = parse_graph(r#"{"branches": [5, 2, 1]}"#).unwrap();
        assert_eq!(g.branch_lengths(), &[5, 2, 1]);
        assert_eq!(parse_graph("[2,2,2]").unwrap().branch_count(), 3);
        assert!(matches!(parse_graph("[1,-1]"), Err(Error::InvalidShape(_))));
        assert!(matches!(parse_graph("[]"), Err(Error::InvalidShape(_))));
        assert!(parse_graph("{branches: 1}").is_err());
        assert_eq!(
            serde_json::to_string(&graph_json(&g)).unwrap(),
            r#"{"branches":[5,2,1]}"#
        );
    }

    #[test]
    fn character_formats() {
        let chi = parse_character(r#"{"branches": [["1/2", "3"], ["2"]]}"#).unwrap();
        assert_eq!(chi.to_string(), "(1/2, 3; 2)");
        let bare = parse_character(r#"[["1"],["1"],["1"],["1"]]"#).unwrap();
        assert_eq!(bare.shape().branch_lengths(), &[1, 1, 1, 1]);
        assert!(parse_character(r#"[[1, 2], [3]]"#).is_ok());

        assert!(matches!(
            parse_character(r#"[["-1"]]"#),
            Err(Error::InvalidCharacter(_))
        ));
        assert!(parse_generalized_character(r#"[["-1", "0"]]"#).is_ok());
        assert!(matches!(
            parse_generalized_character(r#"[["1/0"]]"#),
            Err(Error::ParseRational(_))
        ));
        assert!(parse_generalized_character(r#"[[1.5]]"#).is_err());

        let json = serde_json::to_string(&CharacterJson::from(chi.as_generalized())).unwrap();
        assert_eq!(json, r#"{"branches":[["1/2","3"],["2"]]}"#);
    }

    #[test]
    fn spectral_formats() {
        let g = StarGraph::new(vec![2, 2, 2]).unwrap();
        let json =
            serde_json::to_string(&spectral_json(&g, &classify_analytic(&g, DEFAULT_TOL))).unwrap();
        assert_eq!(
            json,
            r#"{"class":"extended","name":"E6~","roots":[{"s":"2","residual":0.0,"exact":true}]}"#
        );
        let g = StarGraph::new(vec![1, 1, 1, 1, 1]).unwrap();
        let value =
            serde_json::to_value(spectral_json(&g, &classify_analytic(&g, DEFAULT_TOL))).unwrap();
        assert_eq!(value["class"], "hyperbolic");
        assert!(value["roots"][0]["s"].is_f64());
        assert_eq!(value["roots"][1]["exact"], false);
    }

    #[test]
    fn functional_formats() {
        let g = StarGraph::new(vec![3, 3, 1]).unwrap();
        let f = &build_functionals(&g, DEFAULT_TOL)[0];
        let json = serde_json::to_string(&FunctionalJson::from(f)).unwrap();
        assert_eq!(
            json,
            r#"{"s":"2","coeffs":[["1/4","1/4","1/4"],["1/4","1/4","1/4"],["1/2"]]}"#
        );
    }

    #[test]
    fn tuple_format_roundtrip() {
        let t = four_projection_tuple();
        let text = serde_json::to_string(&TupleJson::from(&t)).unwrap();
        assert_eq!(parse_tuple(&text).unwrap(), t);

        let complex = r#"{"dim": 2, "lambda": 1.0, "spectra": [[0, 1]],
            "matrices": [{"re": [[0.5, 0], [0, 0.5]], "im": [[0, -0.5], [0.5, 0]]}]}"#;
        let t = parse_tuple(complex).unwrap();
        assert_eq!(t.matrices()[0][(0, 1)].im, -0.5);
        assert!(parse_tuple(r#"{"dim": 2}"#).is_err());
    }

    proptest! {
        #[test]
        fn character_json_roundtrip(
            entries in prop::collection::vec(prop::collection::vec((-99i64..99, 1i64..30), 1..5), 1..5)
        ) {
            let branches = entries
                .iter()
                .map(|b| b.iter().map(|&(p, q)| rational::frac(p, q)).collect())
                .collect();
            let chi = GeneralizedCharacter::new(branches).unwrap();
            let text = serde_json::to_string(&CharacterJson::from(&chi)).unwrap();
            prop_assert_eq!(parse_generalized_character(&text).unwrap(), chi);
        }
    }
}
