//! The scalar equation that separates Dynkin, extended Dynkin and hyperbolic
//! star graphs.
//!
//! For a star graph with branch lengths `k_1, ..., k_n` put
//!
//! ```text
//! f(s) = n - s - Σ_l φ_{k_l}(s - 1),    φ_k(x) = 1 / (1 + x + ... + x^k).
//! ```
//!
//! `f(1) = -1`, `f(n) < 0` and `f` is strictly concave on `s > 1`, so on
//! `[1, n]` it has no root (Dynkin), a double root at `s = 2` (extended
//! Dynkin) or two simple roots `1 < s_1 < 2 < s_2 < n` (everything else).

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::graph::{GraphKind, StarGraph};
use crate::rational::{self, Rational};

pub const DEFAULT_TOL: f64 = 1e-12;

/// Hard cap on exact bisection steps while bracketing the maximizer. The
/// decision normally takes a handful of steps.
const MAX_EXACT_BISECTIONS: usize = 512;

/// `1 + x + ... + x^k` by Horner's rule.
fn geometric_sum(x: &Rational, k: usize) -> Rational {
    let mut acc = Rational::one();
    for _ in 0..k {
        acc = acc * x + Rational::one();
    }
    acc
}

/// `1 + 2x + ... + k x^{k-1}`.
fn geometric_sum_derivative(x: &Rational, k: usize) -> Rational {
    let mut acc = Rational::zero();
    for j in (1..=k).rev() {
        acc = acc * x + rational::int(j as i64);
    }
    acc
}

fn domain_error(g: &StarGraph, s: &Rational) -> Error {
    Error::Domain(format!(
        "1 + (s-1) + ... + (s-1)^k vanishes at s = {s} for graph {g}"
    ))
}

/// Exact value of `f_Γ(s)`.
pub fn eval_f(g: &StarGraph, s: &Rational) -> Result<Rational> {
    let x = s - Rational::one();
    let mut value = rational::int(g.branch_count() as i64) - s;
    for &k in g.branch_lengths() {
        let p = geometric_sum(&x, k);
        if p.is_zero() {
            return Err(domain_error(g, s));
        }
        value -= p.recip();
    }
    Ok(value)
}

/// Exact value of `f_Γ'(s) = -1 + Σ_l P'_{k_l}(s-1) / P_{k_l}(s-1)^2`.
pub fn eval_f_prime(g: &StarGraph, s: &Rational) -> Result<Rational> {
    let x = s - Rational::one();
    let mut value = -Rational::one();
    for &k in g.branch_lengths() {
        let p = geometric_sum(&x, k);
        if p.is_zero() {
            return Err(domain_error(g, s));
        }
        value += geometric_sum_derivative(&x, k) / (&p * &p);
    }
    Ok(value)
}

/// Double-precision `f_Γ(s)`, used for root refinement.
pub fn eval_f_f64(g: &StarGraph, s: f64) -> f64 {
    let x = s - 1.0;
    let mut value = g.branch_count() as f64 - s;
    for &k in g.branch_lengths() {
        let mut p = 1.0;
        for _ in 0..k {
            p = p * x + 1.0;
        }
        value -= 1.0 / p;
    }
    value
}

#[derive(Clone, Debug, PartialEq)]
pub enum RootValue {
    Exact(Rational),
    Approx(f64),
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpectralRoot {
    pub value: RootValue,
    /// `|f_Γ(s)|`, evaluated exactly at the reported value.
    pub residual: f64,
}

impl SpectralRoot {
    pub fn exact(value: Rational) -> Self {
        SpectralRoot {
            value: RootValue::Exact(value),
            residual: 0.0,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self.value, RootValue::Exact(_))
    }

    pub fn as_f64(&self) -> f64 {
        match &self.value {
            RootValue::Exact(r) => rational::to_f64(r),
            RootValue::Approx(x) => *x,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpectralResult {
    pub kind: GraphKind,
    /// Roots of `f_Γ` on `[1, ∞)` in increasing order.
    pub roots: Vec<SpectralRoot>,
}

enum Shape {
    Dynkin,
    Tangent,
    /// A point where `f_Γ > 0`; both roots are bracketed around it.
    Positive(Rational),
}

/// Decides the shape of `f_Γ` on `[1, n]` in exact arithmetic.
fn analyze(g: &StarGraph) -> Shape {
    let two = rational::int(2);
    let f2 = eval_f(g, &two).expect("s = 2 is in the domain");
    let fp2 = eval_f_prime(g, &two).expect("s = 2 is in the domain");
    if f2.is_zero() && fp2.is_zero() {
        return Shape::Tangent;
    }
    if f2.is_positive() {
        return Shape::Positive(two);
    }

    // f' is strictly decreasing on (1, n]; bracket its zero and bound the
    // maximum from above with the tangents at both ends of the bracket.
    let f = |s: &Rational| eval_f(g, s).expect("s >= 1 is in the domain");
    let fp = |s: &Rational| eval_f_prime(g, s).expect("s >= 1 is in the domain");
    let mut lo = Rational::one();
    let mut hi = rational::int(g.branch_count() as i64);
    if !fp(&lo).is_positive() {
        // n = 1: f is decreasing from f(1) = -1
        return Shape::Dynkin;
    }
    let mut fp_hi = fp(&hi);
    if !fp_hi.is_negative() {
        // maximum at s = n where f(n) < 0
        return Shape::Dynkin;
    }
    for _ in 0..MAX_EXACT_BISECTIONS {
        let width = &hi - &lo;
        let upper_lo = f(&lo) + fp(&lo) * &width;
        let upper_hi = f(&hi) - &fp_hi * &width;
        if upper_lo.is_negative() || upper_hi.is_negative() {
            return Shape::Dynkin;
        }
        let mid = (&lo + &hi) / rational::int(2);
        if f(&mid).is_positive() {
            return Shape::Positive(mid);
        }
        let slope = fp(&mid);
        if slope.is_positive() {
            lo = mid;
        } else if slope.is_negative() {
            hi = mid;
            fp_hi = slope;
        } else {
            // maximizer found exactly and f(mid) <= 0; a zero maximum away
            // from s = 2 would contradict the trichotomy
            return Shape::Dynkin;
        }
    }
    let mid = (&lo + &hi) / rational::int(2);
    if f(&mid).is_negative() {
        Shape::Dynkin
    } else {
        Shape::Positive(mid)
    }
}

/// Bisection for the sign change of `f_Γ` on `[lo, hi]`. Stops once the
/// double-precision value drops well below `tol` or the bracket can no
/// longer be split.
fn refine_root(g: &StarGraph, mut lo: f64, mut hi: f64, tol: f64) -> SpectralRoot {
    let rising = eval_f_f64(g, lo) < eval_f_f64(g, hi);
    loop {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let value = eval_f_f64(g, mid);
        if value.abs() < tol / 64.0 {
            lo = mid;
            hi = mid;
            break;
        }
        if (value < 0.0) == rising {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let (value, residual) = [lo, hi]
        .into_iter()
        .map(|s| (s, exact_residual(g, s)))
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .expect("two candidates");
    SpectralRoot {
        value: RootValue::Approx(value),
        residual,
    }
}

/// `|f_Γ(s)|` with `s` converted exactly to a rational.
pub fn exact_residual(g: &StarGraph, s: f64) -> f64 {
    let exact = rational::from_f64(s).expect("finite root");
    rational::to_f64(&eval_f(g, &exact).expect("s >= 1 is in the domain").abs())
}

/// Analytic classification via the roots of `f_Γ` on `[1, ∞)`.
///
/// The extended Dynkin case is decided by the exact tests `f(2) = 0` and
/// `f'(2) = 0`; Dynkin graphs are certified by an exact upper bound on the
/// maximum of `f`. Hyperbolic roots are refined in double precision.
pub fn classify_analytic(g: &StarGraph, tol: f64) -> SpectralResult {
    match analyze(g) {
        Shape::Dynkin => SpectralResult {
            kind: GraphKind::Dynkin,
            roots: Vec::new(),
        },
        Shape::Tangent => SpectralResult {
            kind: GraphKind::ExtendedDynkin,
            roots: vec![SpectralRoot::exact(rational::int(2))],
        },
        Shape::Positive(peak) => {
            let peak = rational::to_f64(&peak);
            let n = g.branch_count() as f64;
            SpectralResult {
                kind: GraphKind::Hyperbolic,
                roots: vec![refine_root(g, 1.0, peak, tol), refine_root(g, peak, n, tol)],
            }
        }
    }
}

/// The two roots `s_1 < 2 < s_2` of a hyperbolic graph.
pub fn hyperbolic_roots(g: &StarGraph, tol: f64) -> Result<(f64, f64)> {
    let result = classify_analytic(g, tol);
    match (result.kind, result.roots.as_slice()) {
        (GraphKind::Hyperbolic, [s1, s2]) => Ok((s1.as_f64(), s2.as_f64())),
        (kind, _) => Err(Error::UnsupportedGraph {
            graph: g.to_string(),
            reason: format!("graph is {} and has no pair of simple roots", kind.as_str()),
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::classify_structural;
    use crate::rational::{frac, int};
    use proptest::prelude::*;

    fn graph(k: &[usize]) -> StarGraph {
        StarGraph::new(k.to_vec()).unwrap()
    }

    #[test]
    fn eval_f_examples() {
        assert_eq!(eval_f(&graph(&[1, 1, 1, 1]), &int(2)).unwrap(), int(0));
        for k in [&[1][..], &[3, 2], &[1, 1, 1, 2], &[7, 1, 1, 1, 1]] {
            assert_eq!(eval_f(&graph(k), &int(1)).unwrap(), int(-1));
        }
        assert_eq!(eval_f(&graph(&[1, 1, 1, 2]), &int(2)).unwrap(), frac(1, 6));
    }

    #[test]
    fn eval_f_prime_examples() {
        assert_eq!(eval_f_prime(&graph(&[2, 2, 2]), &int(2)).unwrap(), int(0));
        assert_eq!(
            eval_f_prime(&graph(&[1, 1, 1]), &int(2)).unwrap(),
            frac(-1, 4)
        );
        assert_eq!(
            eval_f_prime(&graph(&[1, 1, 1, 1, 1]), &int(1)).unwrap(),
            int(4)
        );
    }

    #[test]
    fn eval_f_domain_error() {
        // 1 + x vanishes at x = -1, i.e. s = 0
        assert!(matches!(
            eval_f(&graph(&[1]), &int(0)),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            eval_f_prime(&graph(&[3]), &int(0)),
            Err(Error::Domain(_))
        ));
        // 1 + x + x^2 never vanishes
        assert!(eval_f(&graph(&[2]), &int(0)).is_ok());
    }

    #[test]
    fn classify_analytic_examples() {
        let e6 = classify_analytic(&graph(&[2, 2, 2]), DEFAULT_TOL);
        assert_eq!(e6.kind, GraphKind::ExtendedDynkin);
        assert_eq!(e6.roots, vec![SpectralRoot::exact(int(2))]);

        let d4 = classify_analytic(&graph(&[1, 1, 1]), DEFAULT_TOL);
        assert_eq!(d4.kind, GraphKind::Dynkin);
        assert!(d4.roots.is_empty());

        let star5 = classify_analytic(&graph(&[1, 1, 1, 1, 1]), DEFAULT_TOL);
        assert_eq!(star5.kind, GraphKind::Hyperbolic);
        // s^2 - 5s + 5 = 0
        let sqrt5 = 5f64.sqrt();
        let expected = [(5.0 - sqrt5) / 2.0, (5.0 + sqrt5) / 2.0];
        for (root, want) in star5.roots.iter().zip(expected) {
            assert!(!root.is_exact());
            assert!(
                (root.as_f64() - want).abs() < 1e-10,
                "{} vs {want}",
                root.as_f64()
            );
            assert!(root.residual < DEFAULT_TOL);
        }
    }

    #[test]
    fn hyperbolic_roots_examples() {
        let (s1, s2) = hyperbolic_roots(&graph(&[1, 1, 1, 1, 1]), DEFAULT_TOL).unwrap();
        assert!((s1 - 1.381_966_011_3).abs() < 1e-9);
        assert!((s2 - 3.618_033_988_7).abs() < 1e-9);

        let g = graph(&[2, 2, 3]);
        assert_eq!(eval_f(&g, &int(2)).unwrap(), frac(1, 12));
        let (s1, s2) = hyperbolic_roots(&g, DEFAULT_TOL).unwrap();
        assert!(1.0 < s1 && s1 < 2.0 && 2.0 < s2 && s2 < 3.0);

        let g = graph(&[1, 1, 1, 2]);
        let (s1, s2) = hyperbolic_roots(&g, DEFAULT_TOL).unwrap();
        assert!(1.0 < s1 && s1 < 2.0 && 2.0 < s2 && s2 < 4.0);
        assert!(exact_residual(&g, s1) < DEFAULT_TOL);
        assert!(exact_residual(&g, s2) < DEFAULT_TOL);

        assert!(matches!(
            hyperbolic_roots(&graph(&[2, 2, 2]), DEFAULT_TOL),
            Err(Error::UnsupportedGraph { .. })
        ));
        assert!(hyperbolic_roots(&graph(&[1, 2, 4]), DEFAULT_TOL).is_err());
    }

    #[test]
    fn endpoint_values() {
        for k in [
            &[1, 1, 1, 1][..],
            &[1, 2, 5],
            &[3, 3, 3, 3],
            &[1, 1, 1, 1, 1, 1, 1],
        ] {
            let g = graph(k);
            let n = int(g.branch_count() as i64);
            assert!(eval_f(&g, &n).unwrap().is_negative());
        }
    }

    fn arb_graph() -> impl Strategy<Value = StarGraph> {
        prop::collection::vec(1usize..6, 1..7).prop_map(|k| StarGraph::new(k).unwrap())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn derivative_matches_central_difference(g in arb_graph(), num in 0i64..64) {
            // s on a grid in [1, n]; f''' is bounded there so the O(h^2)
            // error of the central difference shrinks by ~4x when h halves
            let n = g.branch_count() as i64;
            let s = int(1) + frac(num * (n - 1).max(1), 64);
            let exact = eval_f_prime(&g, &s).unwrap();
            let diff = |h: &Rational| {
                (eval_f(&g, &(&s + h)).unwrap() - eval_f(&g, &(&s - h)).unwrap()) / (int(2) * h)
            };
            let e1 = (diff(&frac(1, 1000)) - &exact).abs();
            let e2 = (diff(&frac(1, 2000)) - &exact).abs();
            prop_assert!(e1 < frac(1, 1000));
            prop_assert!(e2 * int(3) <= e1 || e1.is_zero());
        }

        #[test]
        fn concave_above_one(g in arb_graph(), a in 1i64..100, b in 1i64..100, c in 1i64..100) {
            let mut pts = [a, a + b, a + b + c];
            pts.sort();
            let [sa, sb, sc] = pts.map(|p| int(1) + frac(p, 40));
            let fa = eval_f(&g, &sa).unwrap();
            let fb = eval_f(&g, &sb).unwrap();
            let fc = eval_f(&g, &sc).unwrap();
            let chord = &fa + (&fc - &fa) * (&sb - &sa) / (&sc - &sa);
            prop_assert!(fb > chord);
        }

        #[test]
        fn analytic_agrees_with_structural(g in arb_graph()) {
            let analytic = classify_analytic(&g, DEFAULT_TOL);
            prop_assert_eq!(analytic.kind, classify_structural(&g).kind());
            if analytic.kind == GraphKind::Hyperbolic {
                let s1 = analytic.roots[0].as_f64();
                let s2 = analytic.roots[1].as_f64();
                prop_assert!(1.0 < s1 && s1 < 2.0 && 2.0 < s2 && s2 < g.branch_count() as f64);
                prop_assert!(analytic.roots.iter().all(|r| r.residual < DEFAULT_TOL));
            }
        }
    }
}
