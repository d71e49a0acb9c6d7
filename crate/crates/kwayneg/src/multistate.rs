//! State representation for composite quantum systems: subsystem dimensions,
//! multi-index encoding, pure states and density operators.
//!
//! Flat indices are row-major with subsystem 0 most significant:
//! `flat = sum_m i_m * prod_{k>m} d_k`.

use crate::error::{Error, Result};
use crate::types::{C64, CMatrix, CVector};

/// Normalization / Hermiticity tolerance used at construction time.
pub const CONSTRUCT_TOL: f64 = 1e-12;

/// Default cap on the composite dimension (dense matrices get quadratic).
pub const DEFAULT_DIM_CAP: usize = 4096;

/// Default modulus threshold below which an amplitude counts as absent.
pub const LBPS_THRESHOLD: f64 = 1e-8;

/// Ordered subsystem dimensions d_0..d_{N-1} of a composite Hilbert space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubsystemDims {
    dims: Vec<usize>,
    strides: Vec<usize>,
    total: usize,
}

impl SubsystemDims {
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        Self::with_cap(dims, DEFAULT_DIM_CAP)
    }

    pub fn with_cap(dims: Vec<usize>, cap: usize) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::NoSubsystems);
        }
        for (m, &d) in dims.iter().enumerate() {
            if d < 2 {
                return Err(Error::DimensionTooSmall { m, d });
            }
        }
        let mut total: usize = 1;
        for &d in &dims {
            total = total
                .checked_mul(d)
                .ok_or(Error::DimensionCapExceeded { total: usize::MAX, cap })?;
        }
        if total > cap {
            return Err(Error::DimensionCapExceeded { total, cap });
        }
        // stride of subsystem m is prod_{k>m} d_k
        let n = dims.len();
        let mut strides = vec![1usize; n];
        for m in (0..n - 1).rev() {
            strides[m] = strides[m + 1] * dims[m + 1];
        }
        Ok(Self { dims, strides, total })
    }

    pub fn n(&self) -> usize {
        self.dims.len()
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self, m: usize) -> usize {
        self.dims[m]
    }

    pub fn total_dim(&self) -> usize {
        self.total
    }

    pub fn stride(&self, m: usize) -> usize {
        self.strides[m]
    }

    pub fn check_subsystem(&self, p: usize) -> Result<()> {
        if p >= self.n() {
            return Err(Error::SubsystemOutOfRange { p, n: self.n() });
        }
        Ok(())
    }

    /// Digit of `flat` belonging to subsystem `m`.
    pub fn digit(&self, flat: usize, m: usize) -> usize {
        (flat / self.strides[m]) % self.dims[m]
    }

    pub fn encode(&self, index: &MultiIndex) -> Result<usize> {
        if index.len() != self.n() {
            return Err(Error::DimensionMismatch(format!(
                "multi-index of length {} in a {}-partite space",
                index.len(),
                self.n()
            )));
        }
        let mut flat = 0;
        for (m, &i) in index.indices().iter().enumerate() {
            if i >= self.dims[m] {
                return Err(Error::OutcomeOutOfRange { outcome: i, d: self.dims[m] });
            }
            flat += i * self.strides[m];
        }
        Ok(flat)
    }

    pub fn decode(&self, flat: usize) -> MultiIndex {
        MultiIndex::new((0..self.n()).map(|m| self.digit(flat, m)).collect())
    }
}

/// Basis multi-index (i_0..i_{N-1}).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiIndex(Vec<usize>);

impl MultiIndex {
    pub fn new(indices: Vec<usize>) -> Self {
        Self(indices)
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Number of positions at which the two indices differ.
pub fn hamming_distance(i: &MultiIndex, j: &MultiIndex) -> Result<usize> {
    if i.len() != j.len() {
        return Err(Error::DimensionMismatch(format!(
            "multi-indices of lengths {} and {}",
            i.len(),
            j.len()
        )));
    }
    Ok(i.indices()
        .iter()
        .zip(j.indices())
        .filter(|(a, b)| a != b)
        .count())
}

/// Normalized pure state over a composite space.
#[derive(Debug, Clone)]
pub struct PureState {
    dims: SubsystemDims,
    amplitudes: CVector,
}

impl PureState {
    pub fn new(dims: SubsystemDims, amplitudes: CVector) -> Result<Self> {
        if amplitudes.len() != dims.total_dim() {
            return Err(Error::DimensionMismatch(format!(
                "{} amplitudes for total dimension {}",
                amplitudes.len(),
                dims.total_dim()
            )));
        }
        let norm = amplitudes.norm();
        if (norm - 1.0).abs() > CONSTRUCT_TOL {
            return Err(Error::NotNormalized { norm });
        }
        Ok(Self { dims, amplitudes })
    }

    /// Construct with explicit renormalization of the amplitude vector.
    pub fn new_renormalized(dims: SubsystemDims, amplitudes: CVector) -> Result<Self> {
        let norm = amplitudes.norm();
        if norm < 1e-14 {
            return Err(Error::NotNormalized { norm });
        }
        Self::new(dims, amplitudes / C64::new(norm, 0.0))
    }

    /// Build from sparse (multi-index, amplitude) entries; renormalizes.
    pub fn from_entries(dims: SubsystemDims, entries: &[(Vec<usize>, C64)]) -> Result<Self> {
        let mut amps = CVector::zeros(dims.total_dim());
        for (idx, amp) in entries {
            let flat = dims.encode(&MultiIndex::new(idx.clone()))?;
            amps[flat] += *amp;
        }
        Self::new_renormalized(dims, amps)
    }

    pub fn dims(&self) -> &SubsystemDims {
        &self.dims
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.amplitudes
    }

    pub fn amplitude(&self, flat: usize) -> C64 {
        self.amplitudes[flat]
    }
}

/// Hermitian unit-trace operator over a composite space. Positivity is
/// checked lazily via [`DensityOperator::min_eigenvalue_bound`].
#[derive(Debug, Clone)]
pub struct DensityOperator {
    dims: SubsystemDims,
    matrix: CMatrix,
}

pub(crate) fn max_hermiticity_deviation(m: &CMatrix) -> f64 {
    let mut max_dev: f64 = 0.0;
    for i in 0..m.nrows() {
        for j in i..m.ncols() {
            max_dev = max_dev.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    max_dev
}

impl DensityOperator {
    pub fn new(dims: SubsystemDims, matrix: CMatrix) -> Result<Self> {
        let d = dims.total_dim();
        if matrix.nrows() != d || matrix.ncols() != d {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} matrix for total dimension {}",
                matrix.nrows(),
                matrix.ncols(),
                d
            )));
        }
        let max_dev = max_hermiticity_deviation(&matrix);
        if max_dev > CONSTRUCT_TOL {
            return Err(Error::NotHermitian { max_dev });
        }
        let trace = matrix.trace();
        if (trace.re - 1.0).abs() > CONSTRUCT_TOL || trace.im.abs() > CONSTRUCT_TOL {
            return Err(Error::TraceNotOne { trace: trace.re });
        }
        Ok(Self { dims, matrix })
    }

    pub fn dims(&self) -> &SubsystemDims {
        &self.dims
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    /// Smallest eigenvalue; used for the lazy positivity check.
    pub fn min_eigenvalue(&self) -> f64 {
        let spec = crate::spectral::eigendecompose(&self.matrix, 1e-10)
            .expect("density operator is Hermitian by construction");
        spec.eigenvalues()[0]
    }

    pub fn purity(&self) -> f64 {
        (&self.matrix * &self.matrix).trace().re
    }
}

/// Outer product |psi><psi|.
pub fn pure_to_density(psi: &PureState) -> DensityOperator {
    let a = psi.amplitudes();
    let matrix = a * a.adjoint();
    DensityOperator::new(psi.dims().clone(), matrix)
        .expect("outer product of a normalized state is a density operator")
}

/// Trace out every subsystem not listed in `keep`. Kept subsystems retain
/// their original relative order.
pub fn partial_trace(rho: &DensityOperator, keep: &[usize]) -> Result<DensityOperator> {
    if keep.is_empty() {
        return Err(Error::EmptyKeepSet);
    }
    let dims = rho.dims();
    let n = dims.n();
    let mut keep_sorted = keep.to_vec();
    keep_sorted.sort_unstable();
    keep_sorted.dedup();
    for &m in &keep_sorted {
        dims.check_subsystem(m)?;
    }
    if keep_sorted.len() == n {
        return Ok(rho.clone());
    }
    let traced: Vec<usize> = (0..n).filter(|m| !keep_sorted.contains(m)).collect();
    let new_dims =
        SubsystemDims::with_cap(keep_sorted.iter().map(|&m| dims.dim(m)).collect(), usize::MAX)?;
    let d_new = new_dims.total_dim();
    let d_traced: usize = traced.iter().map(|&m| dims.dim(m)).product();

    // flat index of the kept digits combined with one assignment of the
    // traced digits
    let compose = |kept_flat: usize, traced_flat: usize| -> usize {
        let mut flat = 0;
        for (pos, &m) in keep_sorted.iter().enumerate() {
            flat += new_dims.digit(kept_flat, pos) * dims.stride(m);
        }
        let mut rem = traced_flat;
        for &m in traced.iter().rev() {
            flat += (rem % dims.dim(m)) * dims.stride(m);
            rem /= dims.dim(m);
        }
        flat
    };

    let src = rho.matrix();
    let mut out = CMatrix::zeros(d_new, d_new);
    for r in 0..d_new {
        for c in 0..=r {
            let mut acc = C64::new(0.0, 0.0);
            for t in 0..d_traced {
                acc += src[(compose(r, t), compose(c, t))];
            }
            out[(r, c)] = acc;
            if r != c {
                out[(c, r)] = acc.conj();
            }
        }
    }
    DensityOperator::new(new_dims, out)
}

/// Projective measurement of one subsystem in the computational basis.
/// Returns the outcome probability and, when the probability is nonzero,
/// the renormalized post-measurement state on the full space.
pub fn project_and_renormalize(
    psi: &PureState,
    subsystem: usize,
    outcome: usize,
) -> Result<(f64, Option<PureState>)> {
    let dims = psi.dims();
    dims.check_subsystem(subsystem)?;
    if outcome >= dims.dim(subsystem) {
        return Err(Error::OutcomeOutOfRange { outcome, d: dims.dim(subsystem) });
    }
    let mut projected = CVector::zeros(dims.total_dim());
    let mut prob = 0.0;
    for f in 0..dims.total_dim() {
        if dims.digit(f, subsystem) == outcome {
            let a = psi.amplitude(f);
            prob += a.norm_sqr();
            projected[f] = a;
        }
    }
    if prob <= 1e-14 {
        return Ok((prob, None));
    }
    let state = PureState::new_renormalized(dims.clone(), projected)?;
    Ok((prob, Some(state)))
}

/// Number of amplitudes with modulus above `threshold` (local basis product
/// states in the computational-basis expansion).
pub fn count_lbps(psi: &PureState, threshold: f64) -> usize {
    psi.amplitudes().iter().filter(|a| a.norm() > threshold).count()
}
