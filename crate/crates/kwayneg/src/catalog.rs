//! Builders for the named states used throughout the crate, random-state
//! generators, gate application, and the negativity table for the W-like /
//! GHZ-like pair of three-qubit states.

use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::multistate::{pure_to_density, DensityOperator, PureState, SubsystemDims};
use crate::negativity::{self, DEFAULT_REPORT_TOL};
use crate::types::{c, C64, CMatrix, CVector};

fn qubits(n: usize) -> Result<SubsystemDims> {
    SubsystemDims::new(vec![2; n])
}

/// (|0...0> + |1...1>)/sqrt(2) on N qubits.
pub fn ghz_state(n: usize) -> Result<PureState> {
    let dims = qubits(n)?;
    let s = c(1.0 / 2f64.sqrt(), 0.0);
    PureState::from_entries(dims, &[(vec![0; n], s), (vec![1; n], s)])
}

/// Equal superposition of the N single-excitation basis states.
pub fn w_state(n: usize) -> Result<PureState> {
    let dims = qubits(n)?;
    let s = c(1.0 / (n as f64).sqrt(), 0.0);
    let entries: Vec<(Vec<usize>, C64)> = (0..n)
        .map(|k| {
            let mut idx = vec![0; n];
            idx[k] = 1;
            (idx, s)
        })
        .collect();
    PureState::from_entries(dims, &entries)
}

/// sqrt(mu_0)|000> + sqrt(mu_1/3)(|110> + |101> + |111>), mu_1 = 1 - mu_0.
pub fn eq9_state(mu0: f64) -> Result<PureState> {
    if !(0.0..=1.0).contains(&mu0) {
        return Err(Error::InvalidParameter(format!("mu0 = {mu0} outside [0, 1]")));
    }
    let mu1 = 1.0 - mu0;
    let b = c((mu1 / 3.0).sqrt(), 0.0);
    PureState::from_entries(
        qubits(3)?,
        &[
            (vec![0, 0, 0], c(mu0.sqrt(), 0.0)),
            (vec![1, 1, 0], b),
            (vec![1, 0, 1], b),
            (vec![1, 1, 1], b),
        ],
    )
}

/// W-like state sqrt(a)|100> + sqrt(a)|010> + sqrt(1-2a)|001>.
pub fn psi_i_state(a: f64) -> Result<PureState> {
    if !(0.0..=0.5).contains(&a) {
        return Err(Error::InvalidParameter(format!("a = {a} outside [0, 1/2]")));
    }
    let sa = c(a.sqrt(), 0.0);
    PureState::from_entries(
        qubits(3)?,
        &[
            (vec![1, 0, 0], sa),
            (vec![0, 1, 0], sa),
            (vec![0, 0, 1], c((1.0 - 2.0 * a).sqrt(), 0.0)),
        ],
    )
}

/// GHZ-like state sqrt(a)|010> + sqrt(a)|110> + sqrt(1-2a)|001>, the image
/// of `psi_i_state` under CNOT with qubit 0 as control and qubit 1 as
/// target.
pub fn psi_f_state(a: f64) -> Result<PureState> {
    if !(0.0..=0.5).contains(&a) {
        return Err(Error::InvalidParameter(format!("a = {a} outside [0, 1/2]")));
    }
    let sa = c(a.sqrt(), 0.0);
    PureState::from_entries(
        qubits(3)?,
        &[
            (vec![0, 1, 0], sa),
            (vec![1, 1, 0], sa),
            (vec![0, 0, 1], c((1.0 - 2.0 * a).sqrt(), 0.0)),
        ],
    )
}

/// Qubit-qubit-qutrit family a_0|000> + a_1|101> + a_2|011> + a_3|112> on
/// dimensions (2, 2, 3). Coefficients are renormalized.
pub fn qutrit_state(a: [C64; 4]) -> Result<PureState> {
    let dims = SubsystemDims::new(vec![2, 2, 3])?;
    PureState::from_entries(
        dims,
        &[
            (vec![0, 0, 0], a[0]),
            (vec![1, 0, 1], a[1]),
            (vec![0, 1, 1], a[2]),
            (vec![1, 1, 2], a[3]),
        ],
    )
}

/// The recommended parameter range for `psi_i_state` / `psi_f_state`.
pub const WLIKE_A_RANGE: (f64, f64) = (1.0 / 3.0, 0.5);

/// A named-state request. `warning` on the built result flags parameters
/// outside the range the family is usually quoted for.
#[derive(Debug, Clone, PartialEq)]
pub enum NamedState {
    Ghz(usize),
    W(usize),
    Eq9 { mu0: f64 },
    PsiI { a: f64 },
    PsiF { a: f64 },
    Qutrit { a: [C64; 4] },
}

#[derive(Debug, Clone)]
pub struct BuiltState {
    pub state: PureState,
    pub warning: Option<String>,
}

pub fn build_named(spec: &NamedState) -> Result<BuiltState> {
    let mut warning = None;
    let state = match spec {
        NamedState::Ghz(n) => ghz_state(*n)?,
        NamedState::W(n) => w_state(*n)?,
        NamedState::Eq9 { mu0 } => eq9_state(*mu0)?,
        NamedState::PsiI { a } => {
            if *a < WLIKE_A_RANGE.0 || *a > WLIKE_A_RANGE.1 {
                warning = Some(format!("a = {a} outside the quoted range [1/3, 1/2]"));
            }
            psi_i_state(*a)?
        }
        NamedState::PsiF { a } => {
            if *a < WLIKE_A_RANGE.0 || *a > WLIKE_A_RANGE.1 {
                warning = Some(format!("a = {a} outside the quoted range [1/3, 1/2]"));
            }
            psi_f_state(*a)?
        }
        NamedState::Qutrit { a } => qutrit_state(*a)?,
    };
    Ok(BuiltState { state, warning })
}

/// A unitary acting on an ordered list of target subsystems.
#[derive(Debug, Clone)]
pub struct GateSpec {
    targets: Vec<usize>,
    matrix: CMatrix,
}

impl GateSpec {
    pub fn new(targets: Vec<usize>, matrix: CMatrix) -> Result<Self> {
        let mut seen = targets.clone();
        seen.sort_unstable();
        seen.dedup();
        if seen.len() != targets.len() {
            return Err(Error::InvalidParameter("gate targets must be distinct".into()));
        }
        let d = matrix.nrows();
        if matrix.ncols() != d {
            return Err(Error::DimensionMismatch("gate matrix must be square".into()));
        }
        let dev = (matrix.adjoint() * &matrix - CMatrix::identity(d, d))
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        if dev > 1e-10 {
            return Err(Error::NotUnitary { max_dev: dev });
        }
        Ok(Self { targets, matrix })
    }

    pub fn targets(&self) -> &[usize] {
        &self.targets
    }

    /// CNOT with `control` and `target` qubits.
    pub fn cnot(control: usize, target: usize) -> Self {
        let mut m = CMatrix::zeros(4, 4);
        m[(0, 0)] = c(1.0, 0.0);
        m[(1, 1)] = c(1.0, 0.0);
        m[(2, 3)] = c(1.0, 0.0);
        m[(3, 2)] = c(1.0, 0.0);
        Self::new(vec![control, target], m).expect("CNOT is unitary")
    }
}

/// Apply a gate on its target subsystems, identity elsewhere.
pub fn apply_gate(psi: &PureState, gate: &GateSpec) -> Result<PureState> {
    let dims = psi.dims();
    for &t in &gate.targets {
        dims.check_subsystem(t)?;
    }
    let gate_dim: usize = gate.targets.iter().map(|&t| dims.dim(t)).product();
    if gate.matrix.nrows() != gate_dim {
        return Err(Error::DimensionMismatch(format!(
            "gate of dimension {} on targets of joint dimension {}",
            gate.matrix.nrows(),
            gate_dim
        )));
    }
    let total = dims.total_dim();
    // flat offset of a target configuration t (digits in target order)
    let target_offset = |mut t: usize| -> usize {
        let mut off = 0;
        for &m in gate.targets.iter().rev() {
            off += (t % dims.dim(m)) * dims.stride(m);
            t /= dims.dim(m);
        }
        off
    };
    let offsets: Vec<usize> = (0..gate_dim).map(target_offset).collect();
    let mut out = CVector::zeros(total);
    for f in 0..total {
        // visit each rest-configuration once, at its all-zero target digits
        if gate.targets.iter().any(|&m| dims.digit(f, m) != 0) {
            continue;
        }
        for row in 0..gate_dim {
            let mut acc = c(0.0, 0.0);
            for col in 0..gate_dim {
                acc += gate.matrix[(row, col)] * psi.amplitude(f + offsets[col]);
            }
            out[f + offsets[row]] = acc;
        }
    }
    PureState::new(dims.clone(), out)
}

fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_amplitudes(rng: &mut ChaCha8Rng, d: usize) -> CVector {
    DVector::from_iterator(
        d,
        (0..d).map(|_| c(rng.sample(StandardNormal), rng.sample(StandardNormal))),
    )
}

/// Haar-like random pure state (normalized complex Gaussian amplitudes),
/// deterministic per seed.
pub fn random_pure(dims: &SubsystemDims, seed: u64) -> PureState {
    let mut rng = rng_from_seed(seed);
    random_pure_with_rng(dims, &mut rng)
}

fn random_pure_with_rng(dims: &SubsystemDims, rng: &mut ChaCha8Rng) -> PureState {
    loop {
        let amps = random_amplitudes(rng, dims.total_dim());
        if let Ok(state) = PureState::new_renormalized(dims.clone(), amps) {
            return state;
        }
    }
}

/// Convex combination of `rank` random pure projectors with uniform-simplex
/// weights, deterministic per seed.
pub fn random_mixed(dims: &SubsystemDims, rank: usize, seed: u64) -> DensityOperator {
    assert!(rank >= 1, "rank must be at least 1");
    let mut rng = rng_from_seed(seed);
    // exponential draws normalized to the simplex
    let mut weights: Vec<f64> = (0..rank).map(|_| -rng.gen::<f64>().max(1e-300).ln()).collect();
    let total: f64 = weights.iter().sum();
    for w in &mut weights {
        *w /= total;
    }
    let d = dims.total_dim();
    let mut matrix = CMatrix::zeros(d, d);
    for &w in &weights {
        let psi = random_pure_with_rng(dims, &mut rng);
        matrix += (psi.amplitudes() * psi.amplitudes().adjoint()).scale(w);
    }
    DensityOperator::new(dims.clone(), matrix).expect("convex combination of projectors")
}

/// Fully product random pure state (independent random pure state per
/// subsystem), deterministic per seed.
pub fn random_product_pure(dims: &SubsystemDims, seed: u64) -> PureState {
    let mut rng = rng_from_seed(seed);
    let mut amps = CVector::from_element(1, c(1.0, 0.0));
    for m in 0..dims.n() {
        let local = {
            let v = random_amplitudes(&mut rng, dims.dim(m));
            let norm = v.norm();
            v / c(norm, 0.0)
        };
        amps = amps.kronecker(&local);
    }
    PureState::new_renormalized(dims.clone(), amps).expect("product of normalized factors")
}

/// Haar-distributed random unitary of dimension d (QR of a Ginibre matrix
/// with phase-fixed diagonal), deterministic per rng state.
pub fn random_unitary(d: usize, rng: &mut ChaCha8Rng) -> CMatrix {
    let g = CMatrix::from_fn(d, d, |_, _| {
        c(rng.sample(StandardNormal), rng.sample(StandardNormal))
    });
    let qr = g.qr();
    let r = qr.r();
    let mut q = qr.q();
    for k in 0..d {
        let diag = r[(k, k)];
        let phase = if diag.norm() > 0.0 { diag / c(diag.norm(), 0.0) } else { c(1.0, 0.0) };
        for i in 0..d {
            q[(i, k)] *= phase.conj();
        }
    }
    q
}

/// One measure cell of the negativity table: computed value, closed-form
/// reference, and their difference.
#[derive(Debug, Clone, serde::Serialize)]
pub struct TableEntry {
    pub measure: &'static str,
    pub computed: f64,
    pub reference: f64,
    pub residual: f64,
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct TableRow {
    pub state: &'static str,
    pub subsystem: usize,
    pub entries: Vec<TableEntry>,
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct NegativityTable {
    pub a: f64,
    pub rows: Vec<TableRow>,
}

pub const TABLE_MEASURES: [&str; 5] = ["N_G", "N_2", "N_3", "E_2", "E_3"];

/// Closed forms for the (N_G, N_2, N_3, E_2, E_3) row of one subsystem.
/// `state` is "psiI" or "psiF", `p` is 0-based.
pub fn table_reference(state: &str, p: usize, a: f64) -> [f64; 5] {
    let w = 2.0 * (a - a * a).max(0.0).sqrt();
    let g = 2.0 * (a - 2.0 * a * a).max(0.0).sqrt();
    let t = 2.0 * (2.0 * a * (1.0 - 2.0 * a)).max(0.0).sqrt();
    match (state, p) {
        ("psiI", 0) | ("psiI", 1) => [w, w, 0.0, w, 0.0],
        ("psiI", 2) => [t, t, 0.0, t, 0.0],
        ("psiF", 0) => [g, 0.0, g, 0.0, g],
        ("psiF", 1) | ("psiF", 2) => [t, g, g, t / 2.0, t / 2.0],
        _ => panic!("unknown table row {state}/{p}"),
    }
}

/// Compute the full 2-state x 3-subsystem x 5-measure negativity table at
/// parameter `a`, with closed-form references and residuals per cell.
pub fn table1(a: f64, zero_tol: f64) -> Result<NegativityTable> {
    let mut rows = Vec::new();
    for (name, state) in [("psiI", psi_i_state(a)?), ("psiF", psi_f_state(a)?)] {
        let rho = pure_to_density(&state);
        for p in 0..3 {
            let report = negativity::partial_kway_negativities(&rho, p, zero_tol, DEFAULT_REPORT_TOL)?;
            let computed = [
                report.n_g,
                report.n_k[&2],
                report.n_k[&3],
                report.e_k[&2],
                report.e_k[&3],
            ];
            let reference = table_reference(name, p, a);
            let entries = TABLE_MEASURES
                .iter()
                .zip(computed.iter().zip(reference))
                .map(|(&measure, (&computed, reference))| TableEntry {
                    measure,
                    computed,
                    reference,
                    residual: (computed - reference).abs(),
                })
                .collect();
            rows.push(TableRow { state: name, subsystem: p + 1, entries });
        }
    }
    Ok(NegativityTable { a, rows })
}
