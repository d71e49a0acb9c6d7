//! Dense Hermitian eigendecomposition, trace norm and negative-eigenspace
//! projector. Every negativity in this crate reduces to these routines.

use nalgebra::linalg::SymmetricEigen;

use crate::error::{Error, Result};
use crate::multistate::max_hermiticity_deviation;
use crate::types::CMatrix;

/// Tolerance separating a negative eigenvalue from numerical zero.
pub const DEFAULT_ZERO_TOL: f64 = 1e-10;

/// Hermiticity tolerance accepted on input matrices; the matrix is
/// symmetrized as (M + M^dag)/2 before decomposition either way.
pub const HERMITICITY_TOL: f64 = 1e-10;

/// Eigenvalues (ascending) and the projector onto the negative eigenspace.
#[derive(Debug, Clone)]
pub struct SpectralResult {
    eigenvalues: Vec<f64>,
    negative_projector: CMatrix,
    zero_tol: f64,
}

impl SpectralResult {
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn negative_projector(&self) -> &CMatrix {
        &self.negative_projector
    }

    pub fn zero_tol(&self) -> f64 {
        self.zero_tol
    }

    pub fn count_negative(&self) -> usize {
        self.eigenvalues.iter().filter(|&&l| l < -self.zero_tol).count()
    }

    pub fn negative_eigenvalues(&self) -> impl Iterator<Item = f64> + '_ {
        let tol = self.zero_tol;
        self.eigenvalues.iter().copied().filter(move |&l| l < -tol)
    }

    pub fn sum_negative(&self) -> f64 {
        self.negative_eigenvalues().sum()
    }

    pub fn trace_norm(&self) -> f64 {
        self.eigenvalues.iter().map(|l| l.abs()).sum()
    }
}

fn check_hermitian(m: &CMatrix) -> Result<()> {
    if m.nrows() == 0 {
        return Err(Error::EmptyMatrix);
    }
    if m.nrows() != m.ncols() {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} matrix is not square",
            m.nrows(),
            m.ncols()
        )));
    }
    let max_dev = max_hermiticity_deviation(m);
    if max_dev > HERMITICITY_TOL {
        return Err(Error::NotHermitian { max_dev });
    }
    Ok(())
}

/// Eigenpairs of a Hermitian matrix, eigenvalues ascending.
pub(crate) fn hermitian_eigenpairs(m: &CMatrix) -> (Vec<f64>, CMatrix) {
    let symmetrized = (m + m.adjoint()).scale(0.5);
    let eig = SymmetricEigen::new(symmetrized);
    let n = eig.eigenvalues.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vectors = CMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_column(dst, &eig.eigenvectors.column(src));
    }
    (values, vectors)
}

pub fn eigendecompose(m: &CMatrix, zero_tol: f64) -> Result<SpectralResult> {
    check_hermitian(m)?;
    let (eigenvalues, vectors) = hermitian_eigenpairs(m);
    let n = eigenvalues.len();
    let mut negative_projector = CMatrix::zeros(n, n);
    for (i, &l) in eigenvalues.iter().enumerate() {
        if l < -zero_tol {
            let v = vectors.column(i);
            negative_projector += v * v.adjoint();
        }
    }
    Ok(SpectralResult { eigenvalues, negative_projector, zero_tol })
}

/// Sum of absolute eigenvalues.
pub fn trace_norm(m: &CMatrix) -> Result<f64> {
    check_hermitian(m)?;
    let (values, _) = hermitian_eigenpairs(m);
    Ok(values.iter().map(|l| l.abs()).sum())
}

/// Number of eigenvalues below `-zero_tol`.
pub fn count_negative(m: &CMatrix, zero_tol: f64) -> Result<usize> {
    check_hermitian(m)?;
    let (values, _) = hermitian_eigenpairs(m);
    Ok(values.iter().filter(|&&l| l < -zero_tol).count())
}

/// Negative part sum_{lambda < -zero_tol} lambda |v><v|.
pub fn negative_part(m: &CMatrix, zero_tol: f64) -> Result<CMatrix> {
    check_hermitian(m)?;
    let (values, vectors) = hermitian_eigenpairs(m);
    let n = values.len();
    let mut out = CMatrix::zeros(n, n);
    for (i, &l) in values.iter().enumerate() {
        if l < -zero_tol {
            let v = vectors.column(i);
            out += (v * v.adjoint()).scale(l);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types::c;

    fn max_abs(m: &CMatrix) -> f64 {
        m.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    #[test]
    fn identity_over_four() {
        let m = CMatrix::identity(4, 4).scale(0.25);
        let spec = eigendecompose(&m, DEFAULT_ZERO_TOL).unwrap();
        for &l in spec.eigenvalues() {
            assert!((l - 0.25).abs() < 1e-12);
        }
        assert_eq!(spec.count_negative(), 0);
        assert!(max_abs(spec.negative_projector()) == 0.0);
    }

    #[test]
    fn bell_pt_spectrum() {
        // expected eigenvalues frozen from the analytic 2x2 blocks of the
        // partially transposed Bell state: {-1/2, 1/2, 1/2, 1/2}
        let bell = crate::catalog::ghz_state(2).unwrap();
        let rho = crate::multistate::pure_to_density(&bell);
        let pt = crate::ptranspose::global_pt(&rho, 0).unwrap();
        let spec = eigendecompose(pt.matrix(), DEFAULT_ZERO_TOL).unwrap();
        let expect = [-0.5, 0.5, 0.5, 0.5];
        for (l, e) in spec.eigenvalues().iter().zip(expect) {
            assert!((l - e).abs() < 1e-12);
        }
        assert!((spec.trace_norm() - 2.0).abs() < 1e-12);
        assert!((trace_norm(pt.matrix()).unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn ghz_pt_negative_projector() {
        // single negative eigenvalue -1/2, eigenvector (|100> - |011>)/sqrt(2)
        let ghz = crate::catalog::ghz_state(3).unwrap();
        let rho = crate::multistate::pure_to_density(&ghz);
        let pt = crate::ptranspose::global_pt(&rho, 0).unwrap();
        let spec = eigendecompose(pt.matrix(), DEFAULT_ZERO_TOL).unwrap();
        assert_eq!(spec.count_negative(), 1);
        assert!((spec.eigenvalues()[0] + 0.5).abs() < 1e-12);
        let mut psi = crate::types::CVector::zeros(8);
        psi[4] = c(1.0 / 2f64.sqrt(), 0.0); // |100>
        psi[3] = c(-1.0 / 2f64.sqrt(), 0.0); // |011>
        let expected = &psi * psi.adjoint();
        assert!(max_abs(&(spec.negative_projector() - expected)) < 1e-10);
    }

    #[test]
    fn projector_is_idempotent_and_hermitian() {
        let rho = crate::multistate::pure_to_density(&crate::catalog::random_pure(
            &crate::multistate::SubsystemDims::new(vec![2, 2, 3]).unwrap(),
            42,
        ));
        let pt = crate::ptranspose::global_pt(&rho, 1).unwrap();
        let spec = eigendecompose(pt.matrix(), DEFAULT_ZERO_TOL).unwrap();
        let p = spec.negative_projector();
        assert!(max_abs(&(p * p - p)) < 1e-9);
        assert!(max_hermiticity_deviation(p) < 1e-10);
        let rank = p.trace().re.round() as usize;
        assert_eq!(rank, spec.count_negative());
        // eigenvalue sum equals trace
        let sum: f64 = spec.eigenvalues().iter().sum();
        assert!((sum - pt.matrix().trace().re).abs() < 1e-10);
    }

    #[test]
    fn projector_expectation_basis_independent() {
        // permute the subsystem roles and compare Tr(P_- X) for degenerate
        // negative spectra
        let ghz = crate::catalog::ghz_state(3).unwrap();
        let rho = crate::multistate::pure_to_density(&ghz);
        let pt = crate::ptranspose::global_pt(&rho, 0).unwrap();
        let x = crate::ptranspose::kway_pt(&rho, 0, 2).unwrap();
        let a = eigendecompose(pt.matrix(), DEFAULT_ZERO_TOL).unwrap();
        // second decomposition of a slightly perturbed representation
        let jitter = pt.matrix() + pt.matrix().adjoint();
        let b = eigendecompose(&jitter.scale(0.5), DEFAULT_ZERO_TOL).unwrap();
        let ta = (a.negative_projector() * x.matrix()).trace().re;
        let tb = (b.negative_projector() * x.matrix()).trace().re;
        assert!((ta - tb).abs() < 1e-9);
    }

    #[test]
    fn eigenvalue_shift_sanity() {
        let rho = crate::multistate::pure_to_density(&crate::catalog::random_pure(
            &crate::multistate::SubsystemDims::new(vec![2, 2]).unwrap(),
            7,
        ));
        let pt = crate::ptranspose::global_pt(&rho, 0).unwrap();
        let base = eigendecompose(pt.matrix(), DEFAULT_ZERO_TOL).unwrap();
        let eps = 1e-3;
        let shifted_m = pt.matrix() + CMatrix::identity(4, 4).scale(eps);
        let shifted = eigendecompose(&shifted_m, DEFAULT_ZERO_TOL).unwrap();
        for (a, b) in base.eigenvalues().iter().zip(shifted.eigenvalues()) {
            assert!((a + eps - b).abs() < 1e-10);
        }
    }

    #[test]
    fn trace_norm_edge_cases() {
        let zero = CMatrix::zeros(3, 3);
        assert_eq!(trace_norm(&zero).unwrap(), 0.0);
        let rho = crate::multistate::pure_to_density(&crate::catalog::random_pure(
            &crate::multistate::SubsystemDims::new(vec![2, 2]).unwrap(),
            9,
        ));
        assert!((trace_norm(rho.matrix()).unwrap() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn rejects_non_hermitian() {
        let mut m = CMatrix::zeros(2, 2);
        m[(0, 1)] = c(1.0, 0.0);
        assert!(eigendecompose(&m, DEFAULT_ZERO_TOL).is_err());
        assert!(eigendecompose(&CMatrix::zeros(0, 0), DEFAULT_ZERO_TOL).is_err());
    }

    #[test]
    fn reconstruction_residual() {
        let rho = crate::multistate::pure_to_density(&crate::catalog::random_pure(
            &crate::multistate::SubsystemDims::new(vec![2, 2, 2]).unwrap(),
            13,
        ));
        let pt = crate::ptranspose::kway_pt(&rho, 0, 2).unwrap();
        let (values, vectors) = hermitian_eigenpairs(pt.matrix());
        let lambda = CMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
            values.len(),
            values.iter().map(|&l| c(l, 0.0)),
        ));
        let recon = &vectors * lambda * vectors.adjoint();
        let scale = max_abs(pt.matrix()).max(1e-300);
        assert!(max_abs(&(recon - pt.matrix())) < 1e-9 * scale.max(1.0));
    }
}
