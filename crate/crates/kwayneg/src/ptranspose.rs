//! Global, K-way and subset-restricted partial transposes, built by
//! selective permutation of flat (row, col) pairs, plus the decomposition
//! identities relating them.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::multistate::{DensityOperator, SubsystemDims};
use crate::types::CMatrix;

/// Which matrix elements a transpose touches.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TransposeKind {
    /// All elements get the p-swap.
    Global,
    /// Only elements whose bra and ket multi-indices differ in exactly K
    /// positions.
    KWay(usize),
    /// Only elements whose set of differing positions is exactly S.
    Subset(BTreeSet<usize>),
}

/// Result of a (possibly selective) partial transpose. Hermitian and
/// unit-trace, generally not positive semidefinite.
#[derive(Debug, Clone)]
pub struct TransposedOperator {
    dims: SubsystemDims,
    matrix: CMatrix,
    subsystem: usize,
    kind: TransposeKind,
}

impl TransposedOperator {
    pub fn dims(&self) -> &SubsystemDims {
        &self.dims
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn subsystem(&self) -> usize {
        self.subsystem
    }

    pub fn kind(&self) -> &TransposeKind {
        &self.kind
    }
}

/// Core permutation kernel. For each element (f, g) the selector decides,
/// from the per-subsystem digits of f and g, whether the p-digit swap is
/// applied. Swapped pairs are mutual images, so the permutation is an
/// involution and Hermiticity survives exactly.
fn selective_transpose<F>(matrix: &CMatrix, dims: &SubsystemDims, p: usize, select: F) -> CMatrix
where
    F: Fn(&[usize], &[usize]) -> bool,
{
    let d = dims.total_dim();
    let n = dims.n();
    let stride_p = dims.stride(p);
    // digit tables: digits[f][m]
    let digits: Vec<Vec<usize>> =
        (0..d).map(|f| (0..n).map(|m| dims.digit(f, m)).collect()).collect();
    let mut out = CMatrix::zeros(d, d);
    for f in 0..d {
        for g in 0..d {
            let fi = &digits[f];
            let gi = &digits[g];
            out[(f, g)] = if select(fi, gi) {
                let delta = gi[p] as isize - fi[p] as isize;
                let f_src = (f as isize + delta * stride_p as isize) as usize;
                let g_src = (g as isize - delta * stride_p as isize) as usize;
                matrix[(f_src, g_src)]
            } else {
                matrix[(f, g)]
            };
        }
    }
    out
}

/// Transpose the indices of subsystem `p` on every matrix element.
pub fn global_pt(rho: &DensityOperator, p: usize) -> Result<TransposedOperator> {
    rho.dims().check_subsystem(p)?;
    let matrix = selective_transpose(rho.matrix(), rho.dims(), p, |_, _| true);
    Ok(TransposedOperator { dims: rho.dims().clone(), matrix, subsystem: p, kind: TransposeKind::Global })
}

/// True when the bra/ket pair differs at position `p` and nowhere else.
/// The p-swap conjugates these elements, so they must belong to exactly one
/// distance class for the global decomposition to close; folding them into
/// the K = N class is the unique choice that also keeps the bipartite
/// K = 2 transpose equal to the global one and leaves the tripartite
/// pair decomposition intact.
fn differs_only_at_p(fi: &[usize], gi: &[usize], p: usize) -> bool {
    fi[p] != gi[p] && fi.iter().zip(gi).filter(|(a, b)| a != b).count() == 1
}

fn kway_selects(fi: &[usize], gi: &[usize], p: usize, k: usize, n: usize) -> bool {
    let dist = fi.iter().zip(gi).filter(|(a, b)| a != b).count();
    dist == k || (k == n && differs_only_at_p(fi, gi, p))
}

fn subset_selects(fi: &[usize], gi: &[usize], p: usize, subset: &BTreeSet<usize>, n: usize) -> bool {
    (0..n).all(|m| (fi[m] != gi[m]) == subset.contains(&m))
        || (subset.len() == n && differs_only_at_p(fi, gi, p))
}

/// Transpose the indices of subsystem `p` only on elements whose bra and
/// ket multi-indices differ in exactly `k` positions (the K = N class also
/// absorbs elements differing only at `p`; see `differs_only_at_p`).
pub fn kway_pt(rho: &DensityOperator, p: usize, k: usize) -> Result<TransposedOperator> {
    let dims = rho.dims();
    dims.check_subsystem(p)?;
    if k < 2 || k > dims.n() {
        return Err(Error::KOutOfRange { k, n: dims.n() });
    }
    let n = dims.n();
    let matrix =
        selective_transpose(rho.matrix(), dims, p, |fi, gi| kway_selects(fi, gi, p, k, n));
    Ok(TransposedOperator { dims: dims.clone(), matrix, subsystem: p, kind: TransposeKind::KWay(k) })
}

/// Transpose the indices of subsystem `p` only on elements whose set of
/// differing positions is exactly `subset` (which must contain `p`).
pub fn subset_pt(
    rho: &DensityOperator,
    p: usize,
    subset: &BTreeSet<usize>,
) -> Result<TransposedOperator> {
    let dims = rho.dims();
    dims.check_subsystem(p)?;
    for &m in subset {
        dims.check_subsystem(m)?;
    }
    if !subset.contains(&p) {
        return Err(Error::SubsystemNotInSubset { p });
    }
    if subset.len() < 2 {
        return Err(Error::SubsetTooSmall(subset.len()));
    }
    let n = dims.n();
    let matrix =
        selective_transpose(rho.matrix(), dims, p, |fi, gi| subset_selects(fi, gi, p, subset, n));
    Ok(TransposedOperator {
        dims: dims.clone(),
        matrix,
        subsystem: p,
        kind: TransposeKind::Subset(subset.clone()),
    })
}

/// Apply the same selective transpose again; used by involution checks and
/// by the serialization round trip.
pub fn reapply(t: &TransposedOperator) -> CMatrix {
    let n = t.dims.n();
    match &t.kind {
        TransposeKind::Global => selective_transpose(&t.matrix, &t.dims, t.subsystem, |_, _| true),
        TransposeKind::KWay(k) => selective_transpose(&t.matrix, &t.dims, t.subsystem, |fi, gi| {
            kway_selects(fi, gi, t.subsystem, *k, n)
        }),
        TransposeKind::Subset(s) => selective_transpose(&t.matrix, &t.dims, t.subsystem, |fi, gi| {
            subset_selects(fi, gi, t.subsystem, s, n)
        }),
    }
}

fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Max elementwise residual of the tripartite decomposition
/// rho_2^{T_p} = rho_2^{T_p-pq} + rho_2^{T_p-pr} - rho.
pub fn verify_tripartite_decomposition(rho: &DensityOperator, p: usize) -> Result<f64> {
    let dims = rho.dims();
    if dims.n() != 3 {
        return Err(Error::DimensionMismatch(format!(
            "tripartite decomposition needs 3 subsystems, got {}",
            dims.n()
        )));
    }
    dims.check_subsystem(p)?;
    let others: Vec<usize> = (0..3).filter(|&m| m != p).collect();
    let two_way = kway_pt(rho, p, 2)?;
    let s_q: BTreeSet<usize> = [p, others[0]].into_iter().collect();
    let s_r: BTreeSet<usize> = [p, others[1]].into_iter().collect();
    let t_q = subset_pt(rho, p, &s_q)?;
    let t_r = subset_pt(rho, p, &s_r)?;
    let residual = two_way.matrix() - t_q.matrix() - t_r.matrix() + rho.matrix();
    Ok(max_abs(&residual))
}

/// Max elementwise residual of the global decomposition
/// rho_G^{T_p} = sum_{K=2}^{N} rho_K^{T_p} - (N-2) rho.
pub fn verify_global_decomposition(rho: &DensityOperator, p: usize) -> Result<f64> {
    let dims = rho.dims();
    dims.check_subsystem(p)?;
    let n = dims.n();
    let global = global_pt(rho, p)?;
    let mut acc = -global.matrix().clone();
    for k in 2..=n {
        acc += kway_pt(rho, p, k)?.matrix();
    }
    if n >= 2 {
        acc -= rho.matrix().scale((n - 2) as f64);
    }
    Ok(max_abs(&acc))
}
