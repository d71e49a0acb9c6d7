//! Diagnostics around negative-eigenvalue counts and a heuristic search for
//! a low-LBPS representative of a pure state under local unitaries.

use std::collections::BTreeMap;

use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::catalog::{apply_gate, GateSpec};
use crate::error::Result;
use crate::multistate::{count_lbps, pure_to_density, DensityOperator, PureState, LBPS_THRESHOLD};
use crate::ptranspose::{global_pt, kway_pt};
use crate::spectral;
use crate::types::{c, C64, CMatrix};

/// Negative-eigenvalue counts of the K-way and global transposes of one
/// subsystem, and their sum nu = sum_K nu_K.
#[derive(Debug, Clone, Serialize)]
pub struct NuProfile {
    pub subsystem: usize,
    pub nu_k: BTreeMap<usize, usize>,
    pub nu_g: usize,
    pub nu_total: usize,
}

pub fn nu_profile(rho: &DensityOperator, p: usize, zero_tol: f64) -> Result<NuProfile> {
    let dims = rho.dims();
    dims.check_subsystem(p)?;
    let mut nu_k = BTreeMap::new();
    for k in 2..=dims.n() {
        let t = kway_pt(rho, p, k)?;
        nu_k.insert(k, spectral::count_negative(t.matrix(), zero_tol)?);
    }
    let nu_g = spectral::count_negative(global_pt(rho, p)?.matrix(), zero_tol)?;
    let nu_total = nu_k.values().sum();
    Ok(NuProfile { subsystem: p + 1, nu_k, nu_g, nu_total })
}

/// Result of the GHZ-like pair decomposition check.
#[derive(Debug, Clone)]
pub struct GhzProjectionCheck {
    pub matched: bool,
    /// Disjoint (flat index, flat index) pairs differing in every position.
    pub pairs: Vec<(usize, usize)>,
    /// |N_N^p - 2 sum_i |a_i||b_i|| when matched.
    pub residual: Option<f64>,
}

/// Try to decompose a pure state into disjoint two-term components whose
/// basis kets differ in every position, and then verify that the N-way
/// negativity equals twice the sum of the pair amplitude products.
pub fn ghz_projection_check(psi: &PureState, p: usize, zero_tol: f64) -> Result<GhzProjectionCheck> {
    let dims = psi.dims();
    dims.check_subsystem(p)?;
    let n = dims.n();
    let support: Vec<usize> = (0..dims.total_dim())
        .filter(|&f| psi.amplitude(f).norm() > LBPS_THRESHOLD)
        .collect();
    let all_differ = |f: usize, g: usize| (0..n).all(|m| dims.digit(f, m) != dims.digit(g, m));

    // greedy pairing; each support ket must pair with exactly one partner
    let mut pairs = Vec::new();
    let mut used = vec![false; support.len()];
    for (ai, &f) in support.iter().enumerate() {
        if used[ai] {
            continue;
        }
        let partners: Vec<usize> = (ai + 1..support.len())
            .filter(|&bi| !used[bi] && all_differ(f, support[bi]))
            .collect();
        if partners.len() != 1 {
            return Ok(GhzProjectionCheck { matched: false, pairs: Vec::new(), residual: None });
        }
        let bi = partners[0];
        used[ai] = true;
        used[bi] = true;
        pairs.push((f, support[bi]));
    }
    if pairs.is_empty() {
        return Ok(GhzProjectionCheck { matched: false, pairs: Vec::new(), residual: None });
    }

    let predicted: f64 = pairs
        .iter()
        .map(|&(f, g)| 2.0 * psi.amplitude(f).norm() * psi.amplitude(g).norm())
        .sum();
    let rho = pure_to_density(psi);
    let n_n = crate::negativity::kway_negativity(&rho, p, n, zero_tol)?;
    Ok(GhzProjectionCheck {
        matched: true,
        pairs,
        residual: Some((n_n - predicted).abs()),
    })
}

/// Best representative found by the local-unitary LBPS search.
#[derive(Debug, Clone)]
pub struct CanonicalSearchResult {
    pub best_state: PureState,
    pub best_lbps: usize,
    pub nu_by_k: BTreeMap<usize, usize>,
    /// Per-subsystem unitaries whose application to the input reproduces
    /// `best_state`.
    pub unitaries: Vec<CMatrix>,
    pub iterations: usize,
    pub converged: bool,
}

/// Hermitian matrix from d^2 real parameters; diagonal entries first, then
/// (re, im) pairs for the upper triangle.
fn hermitian_from_params(d: usize, params: &[f64]) -> CMatrix {
    let mut h = CMatrix::zeros(d, d);
    for i in 0..d {
        h[(i, i)] = c(params[i], 0.0);
    }
    let mut k = d;
    for i in 0..d {
        for j in i + 1..d {
            h[(i, j)] = c(params[k], params[k + 1]);
            h[(j, i)] = c(params[k], -params[k + 1]);
            k += 2;
        }
    }
    h
}

/// exp(i H) for Hermitian H via its eigendecomposition.
fn exp_i_hermitian(h: &CMatrix) -> CMatrix {
    let (values, vectors) = spectral::hermitian_eigenpairs(h);
    let phases = CMatrix::from_diagonal(&DVector::from_iterator(
        values.len(),
        values.iter().map(|&l| C64::new(l.cos(), l.sin())),
    ));
    &vectors * phases * vectors.adjoint()
}

fn rotate(psi: &PureState, params: &[Vec<f64>]) -> PureState {
    let mut out = psi.clone();
    for (m, local) in params.iter().enumerate() {
        let u = exp_i_hermitian(&hermitian_from_params(psi.dims().dim(m), local));
        let gate = GateSpec::new(vec![m], u).expect("exp(iH) is unitary");
        out = apply_gate(&out, &gate).expect("dimensions match by construction");
    }
    out
}

/// Lexicographic objective: LBPS count first, then the smallest surviving
/// amplitude modulus (driving it toward the threshold drops a term).
fn objective(psi: &PureState) -> (usize, f64) {
    let lbps = count_lbps(psi, LBPS_THRESHOLD);
    let smallest = psi
        .amplitudes()
        .iter()
        .map(|a| a.norm())
        .filter(|&m| m > LBPS_THRESHOLD)
        .fold(f64::INFINITY, f64::min);
    (lbps, smallest)
}

/// Lexicographic comparison with a relative margin on the amplitude key, so
/// last-ulp float noise does not count as progress and stall step halving.
fn better(a: (usize, f64), b: (usize, f64)) -> bool {
    a.0 < b.0 || (a.0 == b.0 && a.1 < b.1 * (1.0 - 1e-9))
}

/// Best-effort minimization of the LBPS count over products of local
/// unitaries: random restarts plus coordinate descent with step halving.
/// The result is heuristic, never worse than the input, and deterministic
/// per seed.
pub fn heuristic_canonicalize(
    psi: &PureState,
    restarts: usize,
    seed: u64,
    zero_tol: f64,
) -> Result<CanonicalSearchResult> {
    assert!(restarts >= 1, "at least one restart required");
    let dims = psi.dims().clone();
    let n = dims.n();
    let mut best_params: Vec<Vec<f64>> = (0..n).map(|m| vec![0.0; dims.dim(m).pow(2)]).collect();
    let mut best_obj = objective(psi);
    let mut iterations = 0usize;

    for restart in 0..restarts {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(restart as u64));
        let mut params: Vec<Vec<f64>> = (0..n)
            .map(|m| {
                (0..dims.dim(m).pow(2))
                    .map(|_| {
                        if restart == 0 {
                            0.0
                        } else {
                            rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI)
                        }
                    })
                    .collect()
            })
            .collect();
        let mut obj = objective(&rotate(psi, &params));
        // the floor must resolve parameters finely enough to push residual
        // amplitudes below the LBPS threshold, so it sits well under 1e-8
        let mut step = std::f64::consts::FRAC_PI_4;
        let mut sweeps = 0usize;
        while step >= 1e-9 && sweeps < 300 {
            sweeps += 1;
            let mut improved = false;
            for m in 0..n {
                for idx in 0..params[m].len() {
                    for sign in [1.0, -1.0] {
                        let saved = params[m][idx];
                        params[m][idx] = saved + sign * step;
                        let trial = objective(&rotate(psi, &params));
                        iterations += 1;
                        if better(trial, obj) {
                            obj = trial;
                            improved = true;
                        } else {
                            params[m][idx] = saved;
                        }
                    }
                }
            }
            if !improved {
                step *= 0.5;
            }
        }
        if better(obj, best_obj) {
            best_obj = obj;
            best_params = params;
        }
    }

    let unitaries: Vec<CMatrix> = (0..n)
        .map(|m| exp_i_hermitian(&hermitian_from_params(dims.dim(m), &best_params[m])))
        .collect();
    let best_state = rotate(psi, &best_params);
    let rho = pure_to_density(&best_state);
    let nu_by_k = nu_profile(&rho, 0, zero_tol)?.nu_k;
    Ok(CanonicalSearchResult {
        best_state,
        best_lbps: best_obj.0,
        nu_by_k,
        unitaries,
        iterations,
        converged: true,
    })
}
