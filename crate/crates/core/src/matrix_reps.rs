//! Explicit finite-dimensional operator tuples.
//!
//! A tuple `A_1, ..., A_k` of Hermitian `d × d` matrices represents the pair
//! `(χ, λ)` when `σ(A_l) ⊂ M_l` for the prescribed spectra `M_l` and
//! `Σ_l A_l = λ·I`. This module checks those conditions numerically and
//! computes the centralizer dimensions, the joint commutant and the rigidity
//! index `r = d²(2 - k) + Σ_l c(A_l)`.
//!
//! Note that `d` here is the dimension of the representation space, not the
//! branch count of the graph.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub const DEFAULT_TOL: f64 = 1e-9;

pub type CMatrix = DMatrix<Complex64>;

#[derive(Clone, Debug, PartialEq)]
pub struct OperatorTuple {
    dim: usize,
    lambda: f64,
    matrices: Vec<CMatrix>,
    spectra: Vec<Vec<f64>>,
}

impl OperatorTuple {
    pub fn new(
        dim: usize,
        lambda: f64,
        matrices: Vec<CMatrix>,
        spectra: Vec<Vec<f64>>,
    ) -> Result<Self> {
        if dim == 0 {
            return Err(Error::DimensionMismatch(
                "dimension must be positive".into(),
            ));
        }
        if matrices.len() != spectra.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} matrices but {} spectra",
                matrices.len(),
                spectra.len()
            )));
        }
        if let Some((i, m)) = matrices
            .iter()
            .enumerate()
            .find(|(_, m)| m.nrows() != dim || m.ncols() != dim)
        {
            return Err(Error::DimensionMismatch(format!(
                "matrix {} is {}x{}, expected {dim}x{dim}",
                i + 1,
                m.nrows(),
                m.ncols()
            )));
        }
        if let Some(i) = spectra.iter().position(Vec::is_empty) {
            return Err(Error::DimensionMismatch(format!(
                "spectrum {} is empty",
                i + 1
            )));
        }
        Ok(OperatorTuple {
            dim,
            lambda,
            matrices,
            spectra,
        })
    }

    /// Real symmetric matrices given row by row.
    pub fn from_real(
        dim: usize,
        lambda: f64,
        matrices: &[Vec<Vec<f64>>],
        spectra: Vec<Vec<f64>>,
    ) -> Result<Self> {
        let matrices = matrices
            .iter()
            .map(|rows| complex_from_rows(rows, None))
            .collect::<Result<Vec<_>>>()?;
        Self::new(dim, lambda, matrices, spectra)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn matrices(&self) -> &[CMatrix] {
        &self.matrices
    }

    pub fn spectra(&self) -> &[Vec<f64>] {
        &self.spectra
    }

    /// `U A_l U*` for every matrix.
    pub fn conjugated(&self, unitary: &CMatrix) -> Result<Self> {
        if unitary.nrows() != self.dim || unitary.ncols() != self.dim {
            return Err(Error::DimensionMismatch(
                "unitary has the wrong size".into(),
            ));
        }
        let adjoint = unitary.adjoint();
        Ok(OperatorTuple {
            matrices: self
                .matrices
                .iter()
                .map(|a| unitary * a * &adjoint)
                .collect(),
            ..self.clone()
        })
    }
}

/// Builds a complex matrix from real and optional imaginary rows.
pub fn complex_from_rows(re: &[Vec<f64>], im: Option<&[Vec<f64>]>) -> Result<CMatrix> {
    let rows = re.len();
    let cols = re.first().map_or(0, Vec::len);
    if re.iter().any(|r| r.len() != cols) {
        return Err(Error::DimensionMismatch("ragged matrix rows".into()));
    }
    if let Some(im) = im {
        if im.len() != rows || im.iter().any(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch(
                "imaginary part does not match the real part".into(),
            ));
        }
    }
    Ok(CMatrix::from_fn(rows, cols, |i, j| {
        Complex64::new(re[i][j], im.map_or(0.0, |im| im[i][j]))
    }))
}

/// Orthogonal projection onto the line spanned by `v`.
pub fn rank_one_projection(v: &DVector<Complex64>) -> CMatrix {
    let norm_sq = v.norm_squared();
    v * v.adjoint() / Complex64::new(norm_sq, 0.0)
}

fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Largest entry of `|A - A*|`.
pub fn hermitian_deviation(a: &CMatrix) -> f64 {
    max_abs(&(a - a.adjoint()))
}

/// Eigenvalues of the Hermitian part of `a`, ascending.
pub fn hermitian_eigenvalues(a: &CMatrix) -> Vec<f64> {
    let hermitian = (a + a.adjoint()) * Complex64::new(0.5, 0.0);
    let mut values: Vec<f64> = hermitian
        .symmetric_eigen()
        .eigenvalues
        .iter()
        .copied()
        .collect();
    values.sort_by(f64::total_cmp);
    values
}

/// Multiplicities of sorted eigenvalues under single-linkage clustering with
/// the given gap.
fn cluster_multiplicities(sorted: &[f64], gap: f64) -> Vec<usize> {
    let mut clusters = Vec::new();
    let mut current = 0usize;
    for (i, x) in sorted.iter().enumerate() {
        if i > 0 && x - sorted[i - 1] > gap {
            clusters.push(current);
            current = 0;
        }
        current += 1;
    }
    if current > 0 {
        clusters.push(current);
    }
    clusters
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Check {
    pub passed: bool,
    pub residual: f64,
}

impl Check {
    fn new(residual: f64, tol: f64) -> Self {
        Check {
            passed: residual <= tol,
            residual,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TupleReport {
    pub hermitian: Check,
    /// `‖Σ A_l - λI‖` (largest entry).
    pub sum: Check,
    /// Largest distance from an eigenvalue of `A_l` to `M_l`.
    pub spectrum: Check,
}

impl TupleReport {
    pub fn passed(&self) -> bool {
        self.hermitian.passed && self.sum.passed && self.spectrum.passed
    }

    pub fn residual(&self) -> f64 {
        self.hermitian
            .residual
            .max(self.sum.residual)
            .max(self.spectrum.residual)
    }
}

/// Checks that every matrix is Hermitian, that the matrices sum to `λ·I`,
/// and that every spectrum lies in its allowed set.
pub fn verify_tuple(t: &OperatorTuple, tol: f64) -> TupleReport {
    let hermitian = t
        .matrices
        .iter()
        .map(hermitian_deviation)
        .fold(0.0, f64::max);

    let mut sum = CMatrix::from_diagonal_element(t.dim, t.dim, Complex64::new(-t.lambda, 0.0));
    for a in &t.matrices {
        sum += a;
    }

    let spectrum = t
        .matrices
        .iter()
        .zip(&t.spectra)
        .flat_map(|(a, allowed)| {
            hermitian_eigenvalues(a).into_iter().map(move |x| {
                allowed
                    .iter()
                    .map(|m| (x - m).abs())
                    .fold(f64::INFINITY, f64::min)
            })
        })
        .fold(0.0, f64::max);

    TupleReport {
        hermitian: Check::new(hermitian, tol),
        sum: Check::new(max_abs(&sum), tol),
        spectrum: Check::new(spectrum, tol),
    }
}

fn check_hermitian(index: usize, a: &CMatrix, tol: f64) -> Result<()> {
    let deviation = hermitian_deviation(a);
    if deviation > tol * max_abs(a).max(1.0) {
        return Err(Error::NotHermitian { index, deviation });
    }
    Ok(())
}

/// Complex dimension of `{X : XA = AX}`, i.e. `Σ m_i²` over the eigenvalue
/// multiplicities of `A`.
pub fn centralizer_dim(a: &CMatrix, tol: f64) -> Result<usize> {
    if a.nrows() != a.ncols() {
        return Err(Error::DimensionMismatch("matrix is not square".into()));
    }
    check_hermitian(1, a, tol)?;
    let eigenvalues = hermitian_eigenvalues(a);
    let norm = eigenvalues.iter().map(|x| x.abs()).fold(0.0, f64::max);
    let gap = tol * norm.max(1.0);
    Ok(cluster_multiplicities(&eigenvalues, gap)
        .into_iter()
        .map(|m| m * m)
        .sum())
}

/// Dimension of the joint commutant `{X : X A_l = A_l X for all l}`,
/// computed as the nullity of the stacked commutation system. The tuple is
/// irreducible exactly when this is 1.
pub fn joint_commutant_dim(t: &OperatorTuple, tol: f64) -> Result<usize> {
    for (i, a) in t.matrices.iter().enumerate() {
        check_hermitian(i + 1, a, tol)?;
    }
    let d = t.dim;
    let n = d * d;
    if t.matrices.is_empty() {
        return Ok(n);
    }
    let identity = CMatrix::identity(d, d);
    // vec(AX - XA) = (I ⊗ A - Aᵀ ⊗ I) vec(X)
    let mut system = CMatrix::zeros(n * t.matrices.len(), n);
    for (i, a) in t.matrices.iter().enumerate() {
        let block = identity.kronecker(a) - a.transpose().kronecker(&identity);
        system.view_mut((i * n, 0), (n, n)).copy_from(&block);
    }
    let singular = system.svd(false, false).singular_values;
    let largest = singular.iter().copied().fold(0.0, f64::max);
    let threshold = tol * largest.max(1.0);
    let rank = singular.iter().filter(|&&s| s > threshold).count();
    Ok(n - rank)
}

pub fn is_irreducible(t: &OperatorTuple, tol: f64) -> Result<bool> {
    Ok(joint_commutant_dim(t, tol)? == 1)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RigidityReport {
    pub index: i64,
    pub centralizer_dims: Vec<usize>,
    pub commutant_dim: usize,
    pub irreducible: bool,
}

/// `r = d²(2 - k) + Σ_l c(A_l)` with `d` the space dimension and `k` the
/// number of matrices, reported together with an irreducibility flag.
pub fn rigidity_index(t: &OperatorTuple, tol: f64) -> Result<RigidityReport> {
    let centralizer_dims = t
        .matrices
        .iter()
        .enumerate()
        .map(|(i, a)| {
            centralizer_dim(a, tol).map_err(|e| match e {
                Error::NotHermitian { deviation, .. } => Error::NotHermitian {
                    index: i + 1,
                    deviation,
                },
                other => other,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let commutant_dim = joint_commutant_dim(t, tol)?;
    let d = t.dim as i64;
    let k = t.matrices.len() as i64;
    let index = d * d * (2 - k) + centralizer_dims.iter().map(|&c| c as i64).sum::<i64>();
    Ok(RigidityReport {
        index,
        centralizer_dims,
        commutant_dim,
        irreducible: commutant_dim == 1,
    })
}

/// All 1-dimensional tuples obtained by picking one point of every spectrum.
/// Each comes with `λ` equal to the sum of the picked values.
pub fn one_dimensional_tuples(spectra: &[Vec<f64>]) -> Vec<OperatorTuple> {
    let mut picks: Vec<Vec<f64>> = vec![Vec::new()];
    for allowed in spectra {
        picks = picks
            .into_iter()
            .flat_map(|prefix| {
                allowed.iter().map(move |&x| {
                    let mut next = prefix.clone();
                    next.push(x);
                    next
                })
            })
            .collect();
    }
    picks
        .into_iter()
        .map(|values| {
            let lambda = values.iter().sum();
            let matrices = values
                .iter()
                .map(|&x| CMatrix::from_element(1, 1, Complex64::new(x, 0.0)))
                .collect();
            OperatorTuple::new(1, lambda, matrices, spectra.to_vec())
                .expect("1x1 matrices match dimension 1")
        })
        .collect()
}

/// The 2-dimensional tuple of projections onto the lines at 0°, 90°, 45°
/// and 135°. It sums to `2·I`, i.e. `χ = (1; 1; 1; 1)` and `λ = 2` on `D̃4`.
pub fn four_projection_tuple() -> OperatorTuple {
    let matrices = [0.0f64, 90.0, 45.0, 135.0]
        .iter()
        .map(|deg| {
            let t = deg.to_radians();
            rank_one_projection(&DVector::from_vec(vec![
                Complex64::new(t.cos(), 0.0),
                Complex64::new(t.sin(), 0.0),
            ]))
        })
        .collect();
    OperatorTuple::new(2, 2.0, matrices, vec![vec![0.0, 1.0]; 4]).expect("2x2 projections")
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn diag(values: &[f64]) -> CMatrix {
        CMatrix::from_diagonal(&DVector::from_iterator(
            values.len(),
            values.iter().map(|&x| Complex64::new(x, 0.0)),
        ))
    }

    fn scalars(values: &[f64], lambda: f64) -> OperatorTuple {
        OperatorTuple::new(
            1,
            lambda,
            values.iter().map(|&x| diag(&[x])).collect(),
            vec![vec![0.0, 1.0]; values.len()],
        )
        .unwrap()
    }

    #[test]
    fn verify_tuple_examples() {
        let report = verify_tuple(&four_projection_tuple(), DEFAULT_TOL);
        assert!(report.passed(), "{report:?}");

        assert!(verify_tuple(&scalars(&[1.0, 0.0, 0.0, 0.0], 1.0), DEFAULT_TOL).passed());

        let report = verify_tuple(&scalars(&[1.0, 1.0], 1.0), DEFAULT_TOL);
        assert!(!report.passed());
        assert!(!report.sum.passed);
        assert!(report.hermitian.passed && report.spectrum.passed);
        assert_eq!(report.sum.residual, 1.0);
    }

    #[test]
    fn verify_tuple_detects_bad_spectrum_and_non_hermitian() {
        let t = OperatorTuple::new(1, 0.5, vec![diag(&[0.5])], vec![vec![0.0, 1.0]]).unwrap();
        let report = verify_tuple(&t, DEFAULT_TOL);
        assert!(!report.spectrum.passed);
        assert!((report.spectrum.residual - 0.5).abs() < 1e-12);

        let skew = complex_from_rows(&[vec![0.0, 1.0], vec![0.0, 0.0]], None).unwrap();
        let t = OperatorTuple::new(2, 0.0, vec![skew.clone()], vec![vec![0.0]]).unwrap();
        assert!(!verify_tuple(&t, DEFAULT_TOL).hermitian.passed);
        assert!(matches!(
            centralizer_dim(&skew, DEFAULT_TOL),
            Err(Error::NotHermitian { .. })
        ));
    }

    #[test]
    fn tuple_shape_errors() {
        assert!(matches!(
            OperatorTuple::new(2, 1.0, vec![diag(&[1.0])], vec![vec![0.0, 1.0]]),
            Err(Error::DimensionMismatch(_))
        ));
        assert!(matches!(
            OperatorTuple::new(1, 1.0, vec![diag(&[1.0])], vec![]),
            Err(Error::DimensionMismatch(_))
        ));
        assert!(complex_from_rows(&[vec![1.0], vec![1.0, 2.0]], None).is_err());
    }

    #[test]
    fn centralizer_examples() {
        assert_eq!(
            centralizer_dim(&diag(&[1.0, 1.0, 0.0]), DEFAULT_TOL).unwrap(),
            5
        );
        for d in 1..5 {
            let scalar = CMatrix::from_diagonal_element(d, d, Complex64::new(3.5, 0.0));
            assert_eq!(centralizer_dim(&scalar, DEFAULT_TOL).unwrap(), d * d);
        }
        let t = four_projection_tuple();
        assert_eq!(centralizer_dim(&t.matrices()[2], DEFAULT_TOL).unwrap(), 2);
    }

    #[test]
    fn commutant_examples() {
        let t = four_projection_tuple();
        assert_eq!(joint_commutant_dim(&t, DEFAULT_TOL).unwrap(), 1);
        assert!(is_irreducible(&t, DEFAULT_TOL).unwrap());

        let t = OperatorTuple::new(
            2,
            1.0,
            vec![diag(&[1.0, 0.0]), diag(&[0.0, 1.0])],
            vec![vec![0.0, 1.0]; 2],
        )
        .unwrap();
        assert_eq!(joint_commutant_dim(&t, DEFAULT_TOL).unwrap(), 2);

        assert_eq!(
            joint_commutant_dim(&scalars(&[1.0, 0.0, 0.0, 0.0], 1.0), DEFAULT_TOL).unwrap(),
            1
        );
    }

    #[test]
    fn rigidity_examples() {
        let r = rigidity_index(&scalars(&[1.0, 0.0, 0.0, 0.0], 1.0), DEFAULT_TOL).unwrap();
        assert_eq!(r.index, 2);
        assert!(r.irreducible);

        let r = rigidity_index(&four_projection_tuple(), DEFAULT_TOL).unwrap();
        assert_eq!(r.index, 0);
        assert_eq!(r.centralizer_dims, vec![2; 4]);
        assert!(r.irreducible);

        let t = OperatorTuple::new(
            2,
            1.0,
            vec![diag(&[1.0, 0.0]), diag(&[0.0, 1.0])],
            vec![vec![0.0, 1.0]; 2],
        )
        .unwrap();
        let r = rigidity_index(&t, DEFAULT_TOL).unwrap();
        assert_eq!(r.index, 4);
        assert!(!r.irreducible);
    }

    #[test]
    fn multiplicities_sum_to_dimension() {
        let values = [0.0, 0.0, 1.0, 1.0 + 1e-12, 2.0, 5.0];
        let clusters = cluster_multiplicities(&values, 1e-9);
        assert_eq!(clusters, vec![2, 2, 1, 1]);
        assert_eq!(clusters.iter().sum::<usize>(), values.len());
    }

    /// Looks for a common invariant proper subspace spanned by eigenvectors
    /// of a matrix with simple spectrum.
    fn has_invariant_subspace(t: &OperatorTuple) -> bool {
        let d = t.dim();
        let Some(pivot) = t.matrices().iter().find(|a| {
            let ev = hermitian_eigenvalues(a);
            ev.windows(2).all(|w| w[1] - w[0] > 1e-6)
        }) else {
            return false;
        };
        let vectors = pivot.clone().symmetric_eigen().eigenvectors;
        for mask in 1..(1u32 << d) - 1 {
            let cols: Vec<_> = (0..d).filter(|i| mask & (1 << i) != 0).collect();
            let basis = CMatrix::from_fn(d, cols.len(), |i, j| vectors[(i, cols[j])]);
            let projector = &basis * basis.adjoint();
            let complement = CMatrix::identity(d, d) - &projector;
            if t.matrices()
                .iter()
                .all(|a| max_abs(&(&complement * a * &projector)) < 1e-8)
            {
                return true;
            }
        }
        false
    }

    #[test]
    fn commutant_agrees_with_subspace_search() {
        let t = four_projection_tuple();
        assert!(!has_invariant_subspace(&t));

        // block-diagonal 3-dim tuple: reducible
        let a = complex_from_rows(
            &[
                vec![1.0, 0.0, 0.0],
                vec![0.0, 0.5, 0.5],
                vec![0.0, 0.5, 0.5],
            ],
            None,
        )
        .unwrap();
        let b = diag(&[0.0, 1.0, 2.0]);
        let t = OperatorTuple::new(3, 0.0, vec![a.clone(), b], vec![vec![0.0]; 2]).unwrap();
        assert!(joint_commutant_dim(&t, DEFAULT_TOL).unwrap() > 1);
        assert!(has_invariant_subspace(&t));

        // generic pair in dim 3: irreducible
        let c = complex_from_rows(
            &[
                vec![1.0, 0.3, 0.2],
                vec![0.3, 0.5, 0.7],
                vec![0.2, 0.7, 0.5],
            ],
            Some(&[
                vec![0.0, 0.1, 0.0],
                vec![-0.1, 0.0, 0.2],
                vec![0.0, -0.2, 0.0],
            ]),
        )
        .unwrap();
        let t = OperatorTuple::new(3, 0.0, vec![c, diag(&[0.0, 1.0, 2.0])], vec![vec![0.0]; 2])
            .unwrap();
        assert_eq!(joint_commutant_dim(&t, DEFAULT_TOL).unwrap(), 1);
        assert!(!has_invariant_subspace(&t));
    }

    fn random_unitary(d: usize, seed: &[f64]) -> CMatrix {
        let m = CMatrix::from_fn(d, d, |i, j| {
            let k = 2 * (i * d + j);
            Complex64::new(seed[k % seed.len()], seed[(k + 1) % seed.len()])
        }) + CMatrix::identity(d, d) * Complex64::new(3.0, 0.0);
        m.qr().q()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn rigidity_is_conjugation_invariant(seed in prop::collection::vec(-1.0f64..1.0, 8)) {
            let t = four_projection_tuple();
            let u = random_unitary(2, &seed);
            let conj = t.conjugated(&u).unwrap();
            prop_assert!(verify_tuple(&conj, DEFAULT_TOL).passed());
            prop_assert_eq!(
                rigidity_index(&conj, DEFAULT_TOL).unwrap(),
                rigidity_index(&t, DEFAULT_TOL).unwrap()
            );
        }
    }
}
