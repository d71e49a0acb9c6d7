//! Scalar entanglement measures: global, K-way and subset negativities,
//! partial K-way negativities E_K^p and E_0^p, and the identity and
//! inequality checks built on them.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::multistate::{partial_trace, project_and_renormalize, pure_to_density, DensityOperator, PureState};
use crate::ptranspose::{global_pt, kway_pt, subset_pt, TransposedOperator};
use crate::spectral::{self, SpectralResult};
use crate::types::CMatrix;

/// Agreement tolerance between the trace-norm route and the
/// negative-eigenvalue-sum route, and for the splitting identity
/// N_G = sum_K E_K - E_0 enforced at report construction.
pub const DEFAULT_REPORT_TOL: f64 = 1e-9;

fn negativity_two_routes(t: &TransposedOperator, zero_tol: f64) -> Result<f64> {
    let d_p = t.dims().dim(t.subsystem());
    let spec = spectral::eigendecompose(t.matrix(), zero_tol)?;
    let scale = (d_p - 1) as f64;
    let via_trace_norm = (spec.trace_norm() - 1.0) / scale;
    let via_eigensum = -2.0 * spec.sum_negative() / scale;
    if (via_trace_norm - via_eigensum).abs() > DEFAULT_REPORT_TOL {
        return Err(Error::RouteMismatch { route_a: via_trace_norm, route_b: via_eigensum });
    }
    Ok(via_trace_norm)
}

/// (||rho_G^{T_p}||_1 - 1) / (d_p - 1).
pub fn global_negativity(rho: &DensityOperator, p: usize, zero_tol: f64) -> Result<f64> {
    negativity_two_routes(&global_pt(rho, p)?, zero_tol)
}

/// Negativity attributable to the coherences a selective transpose acts on.
///
/// A selective transpose relocates one class of coherences and leaves the
/// rest of the matrix alone. Taking the trace norm of the transposed matrix
/// itself would also pick up negative eigenvalues created inside the
/// untouched block by the removal of the relocated elements, which have
/// nothing to do with the class being probed. The class negativity is
/// therefore computed from the displacement D = T(rho) - rho, a traceless
/// Hermitian matrix supported on the class positions alone. D carries each
/// relocated coherence twice (once negated at its origin, once at its
/// destination), so the negative part of its spectrum is twice the class
/// contribution: N = -sum(lambda^-(D)) / (d_p - 1) = ||D||_1 / (2(d_p - 1)).
///
/// This reduces to the ordinary trace-norm negativity whenever the
/// untouched block stays positive semidefinite (GHZ, W, all full global
/// transposes of the benchmark states).
fn displacement_negativity(t: &TransposedOperator, rho: &DensityOperator, zero_tol: f64) -> Result<f64> {
    let d_p = t.dims().dim(t.subsystem());
    let diff = t.matrix() - rho.matrix();
    let spec = spectral::eigendecompose(&diff, zero_tol)?;
    let scale = (d_p - 1) as f64;
    let via_trace_norm = spec.trace_norm() / (2.0 * scale);
    let via_eigensum = -spec.sum_negative() / scale;
    if (via_trace_norm - via_eigensum).abs() > DEFAULT_REPORT_TOL {
        return Err(Error::RouteMismatch { route_a: via_trace_norm, route_b: via_eigensum });
    }
    Ok(via_eigensum)
}

/// Negativity of the K-way coherences of subsystem p.
pub fn kway_negativity(rho: &DensityOperator, p: usize, k: usize, zero_tol: f64) -> Result<f64> {
    displacement_negativity(&kway_pt(rho, p, k)?, rho, zero_tol)
}

/// Negativity of the coherences whose differing subsystems are exactly S.
pub fn subset_negativity(
    rho: &DensityOperator,
    p: usize,
    subset: &BTreeSet<usize>,
    zero_tol: f64,
) -> Result<f64> {
    displacement_negativity(&subset_pt(rho, p, subset)?, rho, zero_tol)
}

/// All scalar measures for one subsystem. `subsystem` is 1-based for
/// reporting; maps are keyed by K.
#[derive(Debug, Clone, Serialize)]
pub struct NegativityReport {
    pub subsystem: usize,
    pub d_p: usize,
    pub n_g: f64,
    pub n_k: BTreeMap<usize, f64>,
    pub e_k: BTreeMap<usize, f64>,
    pub e_0: f64,
    pub nu_g: usize,
    pub nu_k: BTreeMap<usize, usize>,
}

/// Expectation of -X on the negative eigenspace of the global transpose,
/// scaled by 2/(d_p - 1).
fn projector_expectation(global: &SpectralResult, x: &CMatrix, d_p: usize) -> f64 {
    -2.0 * (global.negative_projector() * x).trace().re / (d_p - 1) as f64
}

/// Global negativity, every K-way negativity, the partial K-way
/// negativities E_K^p, the remainder term E_0^p, and the negative
/// eigenvalue counts, from a single pass over the transposes of subsystem
/// `p`.
pub fn partial_kway_negativities(
    rho: &DensityOperator,
    p: usize,
    zero_tol: f64,
    report_tol: f64,
) -> Result<NegativityReport> {
    let dims = rho.dims();
    dims.check_subsystem(p)?;
    let n = dims.n();
    let d_p = dims.dim(p);
    let scale = (d_p - 1) as f64;

    let global = global_pt(rho, p)?;
    let global_spec = spectral::eigendecompose(global.matrix(), zero_tol)?;
    let n_g = -2.0 * global_spec.sum_negative() / scale;
    let via_trace_norm = (global_spec.trace_norm() - 1.0) / scale;
    if (n_g - via_trace_norm).abs() > report_tol {
        return Err(Error::RouteMismatch { route_a: via_trace_norm, route_b: n_g });
    }

    let mut n_k = BTreeMap::new();
    let mut e_k = BTreeMap::new();
    let mut nu_k = BTreeMap::new();
    for k in 2..=n {
        let t = kway_pt(rho, p, k)?;
        let spec = spectral::eigendecompose(t.matrix(), zero_tol)?;
        n_k.insert(k, displacement_negativity(&t, rho, zero_tol)?);
        nu_k.insert(k, spec.count_negative());
        e_k.insert(k, projector_expectation(&global_spec, t.matrix(), d_p));
    }
    let e_0 = if n >= 2 {
        -2.0 * (n as f64 - 2.0) * (global_spec.negative_projector() * rho.matrix()).trace().re
            / scale
    } else {
        0.0
    };

    let split: f64 = e_k.values().sum::<f64>() - e_0;
    if (n_g - split).abs() > report_tol {
        return Err(Error::RouteMismatch { route_a: n_g, route_b: split });
    }
    Ok(NegativityReport {
        subsystem: p + 1,
        d_p,
        n_g,
        n_k,
        e_k,
        e_0,
        nu_g: global_spec.count_negative(),
        nu_k,
    })
}

/// Outcome of the single-negative-eigenvalue identity check.
#[derive(Debug, Clone, Serialize)]
pub struct SingleNegativeCheck {
    /// True when the global transpose has exactly one negative eigenvalue.
    pub applicable: bool,
    /// |(N_G^p)^2 - 4 sum_K sum_m (lambda_m^{K-})^2| when applicable, with
    /// lambda_m^{K-} the class-K displacement spectrum (see
    /// displacement_negativity: the displacement holds each coherence twice,
    /// so its squared negative sum is halved).
    pub residual: f64,
}

pub fn single_negative_identity_check(
    rho: &DensityOperator,
    p: usize,
    zero_tol: f64,
) -> Result<SingleNegativeCheck> {
    let dims = rho.dims();
    dims.check_subsystem(p)?;
    let d_p = dims.dim(p);
    let global = global_pt(rho, p)?;
    let global_spec = spectral::eigendecompose(global.matrix(), zero_tol)?;
    if global_spec.count_negative() != 1 {
        return Ok(SingleNegativeCheck { applicable: false, residual: 0.0 });
    }
    let mut sq_sum = 0.0;
    for k in 2..=dims.n() {
        let t = kway_pt(rho, p, k)?;
        let diff = t.matrix() - rho.matrix();
        let spec = spectral::eigendecompose(&diff, zero_tol)?;
        sq_sum += spec.negative_eigenvalues().map(|l| l * l).sum::<f64>() / 2.0;
    }
    let n_g = -2.0 * global_spec.sum_negative() / (d_p - 1) as f64;
    let residual = (n_g * n_g - 4.0 * sq_sum).abs();
    Ok(SingleNegativeCheck { applicable: true, residual })
}

/// Both sides of the measurement convexity bound for a tripartite pure
/// state: the negativity of the reduced pair versus the probability-weighted
/// negativities of the post-measurement pair states.
pub fn reduced_convexity_check(
    psi: &PureState,
    measured: usize,
    pair: (usize, usize),
    zero_tol: f64,
) -> Result<(f64, f64)> {
    let dims = psi.dims();
    if dims.n() != 3 {
        return Err(Error::DimensionMismatch(format!(
            "convexity check needs 3 subsystems, got {}",
            dims.n()
        )));
    }
    let (p, q) = pair;
    dims.check_subsystem(measured)?;
    dims.check_subsystem(p)?;
    dims.check_subsystem(q)?;
    if measured == p || measured == q || p == q {
        return Err(Error::InvalidParameter(
            "measured subsystem must differ from the entangled pair".into(),
        ));
    }
    let rho = pure_to_density(psi);
    let mut keep = [p, q];
    keep.sort_unstable();
    // position of p inside the kept pair
    let p_pos = if keep[0] == p { 0 } else { 1 };

    let reduced = partial_trace(&rho, &keep)?;
    let lhs = global_negativity(&reduced, p_pos, zero_tol)?;

    let mut rhs = 0.0;
    for outcome in 0..dims.dim(measured) {
        let (prob, post) = project_and_renormalize(psi, measured, outcome)?;
        if let Some(post) = post {
            let post_rho = partial_trace(&pure_to_density(&post), &keep)?;
            rhs += prob * global_negativity(&post_rho, p_pos, zero_tol)?;
        }
    }
    Ok((lhs, rhs))
}
