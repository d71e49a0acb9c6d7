//! Command-line front end: load or build states, emit negativity reports,
//! reproduce the W-like/GHZ-like negativity table, and run the identity
//! verification suite.
//!
//! Exit codes: 0 ok, 1 verification failure, 2 input parse error,
//! 3 state-invariant violation.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::canonical;
use crate::catalog::{self, BuiltState, NamedState};
use crate::error::Error;
use crate::multistate::{count_lbps, SubsystemDims, LBPS_THRESHOLD};
use crate::negativity::{self, NegativityReport};
use crate::ptranspose;
use crate::statejson::{self, LoadedState};
use crate::types::c;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_PARSE_ERROR: i32 = 2;
pub const EXIT_INVARIANT_VIOLATION: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "kwayneg", about = "negativities of selective partial transposes")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Emit a negativity report per selected subsystem.
    Analyze(AnalyzeArgs),
    /// Reproduce the 2-state x 3-subsystem x 5-measure negativity table.
    Table1(Table1Args),
    /// Run every applicable identity and inequality check.
    Verify(VerifyArgs),
    /// Heuristic local-unitary search for a low-LBPS representative.
    Canonicalize(CanonicalizeArgs),
    /// Negative-eigenvalue counts per K and for the global transpose.
    Nu(NuArgs),
}

#[derive(Debug, Args)]
pub struct InputArgs {
    /// Named state, e.g. ghz3, w3, eq9:mu0=0.5, psiI:a=0.4,
    /// qutrit:0.5,0.5,0.5,0.5
    #[arg(long)]
    pub named: Option<String>,
    /// Path to a state JSON file.
    #[arg(long)]
    pub state: Option<String>,
    /// Generate a seeded random pure state on the given dims, e.g. 2,2,2.
    #[arg(long, value_name = "DIMS")]
    pub random_pure: Option<String>,
    /// Seed for random state generation.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Subsystem (1-based) or "all".
    #[arg(long, default_value = "all")]
    subsystem: String,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    #[arg(long, default_value_t = 1e-10)]
    pub zero_tol: f64,
}

#[derive(Debug, Args)]
pub struct Table1Args {
    /// Family parameter a (quoted range [1/3, 1/2]).
    #[arg(long)]
    pub a: f64,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    #[arg(long, default_value_t = 1e-10)]
    pub zero_tol: f64,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long, default_value_t = 1e-10)]
    pub zero_tol: f64,
    /// Tolerance for scalar identities; elementwise identities use 1e-12.
    #[arg(long, default_value_t = 1e-9)]
    pub identity_tol: f64,
}

#[derive(Debug, Args)]
pub struct CanonicalizeArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long, default_value_t = 50)]
    pub restarts: usize,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    #[arg(long, default_value_t = 1e-10)]
    pub zero_tol: f64,
}

#[derive(Debug, Args)]
pub struct NuArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long, default_value = "all")]
    pub subsystem: String,
    #[arg(long, default_value_t = 1e-10)]
    pub zero_tol: f64,
}

/// A finished run: what to print and which exit code to return.
#[derive(Debug)]
pub struct Outcome {
    pub stdout: String,
    pub code: i32,
}

#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

fn failure(code: i32, message: impl Into<String>) -> Failure {
    Failure { code, message: message.into() }
}

fn classify(err: Error) -> Failure {
    let code = match &err {
        Error::NotNormalized { .. }
        | Error::NotHermitian { .. }
        | Error::TraceNotOne { .. }
        | Error::NotUnitary { .. } => EXIT_INVARIANT_VIOLATION,
        _ => EXIT_PARSE_ERROR,
    };
    failure(code, err.to_string())
}

/// Round to 12 significant digits.
pub fn sig12(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{x:.11e}").parse().unwrap_or(x)
}

fn fmt12(x: f64) -> String {
    // 12 significant digits, '.' decimal separator
    format!("{:.11e}", x)
}

/// Parse a named-state spec: `name[:k=v,...]` with positional shorthand.
pub fn parse_named(text: &str) -> Result<NamedState, Failure> {
    let (head, rest) = match text.split_once(':') {
        Some((h, r)) => (h, Some(r)),
        None => (text, None),
    };
    let bad = |msg: String| failure(EXIT_PARSE_ERROR, msg);
    let parse_value = |rest: Option<&str>, key: &str| -> Result<f64, Failure> {
        let r = rest.ok_or_else(|| bad(format!("missing parameter {key} in '{text}'")))?;
        let raw = match r.split_once('=') {
            Some((k, v)) if k == key => v,
            Some((k, _)) => {
                return Err(bad(format!("unknown parameter '{k}' in '{text}'")));
            }
            None => r,
        };
        raw.parse::<f64>().map_err(|e| bad(format!("bad value '{raw}' in '{text}': {e}")))
    };
    let family_size = |prefix: &str| -> Result<usize, Failure> {
        let suffix = &head[prefix.len()..];
        if suffix.is_empty() {
            Ok(3)
        } else {
            suffix
                .parse::<usize>()
                .map_err(|_| bad(format!("bad subsystem count in '{head}'")))
        }
    };
    if head.starts_with("ghz") {
        return Ok(NamedState::Ghz(family_size("ghz")?));
    }
    if head.starts_with('w') && head.chars().skip(1).all(|ch| ch.is_ascii_digit()) {
        return Ok(NamedState::W(family_size("w")?));
    }
    match head {
        "eq9" => Ok(NamedState::Eq9 { mu0: parse_value(rest, "mu0")? }),
        "psiI" | "psii" => Ok(NamedState::PsiI { a: parse_value(rest, "a")? }),
        "psiF" | "psif" => Ok(NamedState::PsiF { a: parse_value(rest, "a")? }),
        "qutrit" => {
            let r = rest.ok_or_else(|| bad(format!("qutrit needs 4 coefficients in '{text}'")))?;
            let values: Result<Vec<f64>, Failure> = r
                .split(',')
                .map(|v| v.trim().parse::<f64>().map_err(|e| bad(format!("bad value '{v}': {e}"))))
                .collect();
            let values = values?;
            if values.len() != 4 {
                return Err(bad(format!("qutrit needs exactly 4 coefficients, got {}", values.len())));
            }
            Ok(NamedState::Qutrit {
                a: [c(values[0], 0.0), c(values[1], 0.0), c(values[2], 0.0), c(values[3], 0.0)],
            })
        }
        _ => Err(bad(format!("unknown named state '{head}'"))),
    }
}

/// A resolved input state plus, where known, the named family it came from.
pub struct ResolvedInput {
    pub state: LoadedState,
    pub named: Option<NamedState>,
    pub warning: Option<String>,
}

fn resolve_input(input: &InputArgs) -> Result<ResolvedInput, Failure> {
    let sources =
        input.named.is_some() as usize + input.state.is_some() as usize + input.random_pure.is_some() as usize;
    if sources != 1 {
        return Err(failure(
            EXIT_PARSE_ERROR,
            "exactly one of --named, --state, --random-pure is required",
        ));
    }
    if let Some(named) = &input.named {
        let spec = parse_named(named)?;
        let BuiltState { state, warning } = catalog::build_named(&spec).map_err(classify)?;
        return Ok(ResolvedInput { state: LoadedState::Pure(state), named: Some(spec), warning });
    }
    if let Some(path) = &input.state {
        let text = std::fs::read_to_string(path)
            .map_err(|e| failure(EXIT_PARSE_ERROR, format!("cannot read {path}: {e}")))?;
        let doc: statejson::StateJson = serde_json::from_str(&text).map_err(|e| {
            let offset = byte_offset(&text, e.line(), e.column());
            failure(
                EXIT_PARSE_ERROR,
                format!("JSON parse error at byte offset {offset} (line {}, column {}): {e}", e.line(), e.column()),
            )
        })?;
        let state = statejson::from_json(&doc).map_err(classify)?;
        return Ok(ResolvedInput { state, named: None, warning: None });
    }
    let dims_text = input.random_pure.as_ref().unwrap();
    let dims: Result<Vec<usize>, Failure> = dims_text
        .split(',')
        .map(|v| {
            v.trim()
                .parse::<usize>()
                .map_err(|e| failure(EXIT_PARSE_ERROR, format!("bad dimension '{v}': {e}")))
        })
        .collect();
    let dims = SubsystemDims::new(dims?).map_err(classify)?;
    let psi = catalog::random_pure(&dims, input.seed);
    Ok(ResolvedInput { state: LoadedState::Pure(psi), named: None, warning: None })
}

fn byte_offset(text: &str, line: usize, column: usize) -> usize {
    let mut offset = 0;
    for (i, l) in text.split('\n').enumerate() {
        if i + 1 == line {
            return offset + column.saturating_sub(1);
        }
        offset += l.len() + 1;
    }
    offset
}

fn parse_subsystems(spec: &str, n: usize) -> Result<Vec<usize>, Failure> {
    if spec == "all" {
        return Ok((0..n).collect());
    }
    let p: usize = spec
        .parse()
        .map_err(|e| failure(EXIT_PARSE_ERROR, format!("bad subsystem '{spec}': {e}")))?;
    if p < 1 || p > n {
        return Err(failure(
            EXIT_PARSE_ERROR,
            format!("subsystem {p} out of range 1..={n}"),
        ));
    }
    Ok(vec![p - 1])
}

fn rounded_report(report: &NegativityReport) -> NegativityReport {
    NegativityReport {
        subsystem: report.subsystem,
        d_p: report.d_p,
        n_g: sig12(report.n_g),
        n_k: report.n_k.iter().map(|(&k, &v)| (k, sig12(v))).collect(),
        e_k: report.e_k.iter().map(|(&k, &v)| (k, sig12(v))).collect(),
        e_0: sig12(report.e_0),
        nu_g: report.nu_g,
        nu_k: report.nu_k.clone(),
    }
}

pub fn cmd_analyze(args: &AnalyzeArgs) -> Result<Outcome, Failure> {
    let resolved = resolve_input(&args.input)?;
    let rho = resolved.state.density();
    let subsystems = parse_subsystems(&args.subsystem, rho.dims().n())?;
    let reports: Result<Vec<NegativityReport>, Failure> = subsystems
        .iter()
        .map(|&p| {
            negativity::partial_kway_negativities(&rho, p, args.zero_tol, negativity::DEFAULT_REPORT_TOL)
                .map(|r| rounded_report(&r))
                .map_err(classify)
        })
        .collect();
    let reports = reports?;
    let mut out = String::new();
    if let Some(w) = &resolved.warning {
        writeln!(out, "warning: {w}").unwrap();
    }
    match args.format {
        Format::Json => {
            writeln!(out, "{}", serde_json::to_string_pretty(&reports).unwrap()).unwrap();
        }
        Format::Csv => {
            writeln!(out, "subsystem,d_p,measure,value").unwrap();
            for r in &reports {
                writeln!(out, "{},{},N_G,{}", r.subsystem, r.d_p, fmt12(r.n_g)).unwrap();
                for (k, v) in &r.n_k {
                    writeln!(out, "{},{},N_{k},{}", r.subsystem, r.d_p, fmt12(*v)).unwrap();
                }
                for (k, v) in &r.e_k {
                    writeln!(out, "{},{},E_{k},{}", r.subsystem, r.d_p, fmt12(*v)).unwrap();
                }
                writeln!(out, "{},{},E_0,{}", r.subsystem, r.d_p, fmt12(r.e_0)).unwrap();
                writeln!(out, "{},{},nu_G,{}", r.subsystem, r.d_p, r.nu_g).unwrap();
                for (k, v) in &r.nu_k {
                    writeln!(out, "{},{},nu_{k},{v}", r.subsystem, r.d_p).unwrap();
                }
            }
        }
        Format::Text => {
            for r in &reports {
                writeln!(out, "subsystem {} (d_p = {})", r.subsystem, r.d_p).unwrap();
                writeln!(out, "  N_G = {}", fmt12(r.n_g)).unwrap();
                for (k, v) in &r.n_k {
                    writeln!(out, "  N_{k} = {}", fmt12(*v)).unwrap();
                }
                for (k, v) in &r.e_k {
                    writeln!(out, "  E_{k} = {}", fmt12(*v)).unwrap();
                }
                writeln!(out, "  E_0 = {}", fmt12(r.e_0)).unwrap();
                writeln!(out, "  nu_G = {}", r.nu_g).unwrap();
                for (k, v) in &r.nu_k {
                    writeln!(out, "  nu_{k} = {v}").unwrap();
                }
            }
        }
    }
    Ok(Outcome { stdout: out, code: EXIT_OK })
}

pub fn cmd_table1(args: &Table1Args) -> Result<Outcome, Failure> {
    let mut out = String::new();
    if args.a < catalog::WLIKE_A_RANGE.0 || args.a > catalog::WLIKE_A_RANGE.1 {
        writeln!(out, "warning: a = {} outside the quoted range [1/3, 1/2]", args.a).unwrap();
    }
    let table = catalog::table1(args.a, args.zero_tol).map_err(classify)?;
    match args.format {
        Format::Json => {
            writeln!(out, "{}", serde_json::to_string_pretty(&table).unwrap()).unwrap();
        }
        Format::Csv | Format::Text => {
            writeln!(out, "state,subsystem,measure,computed,reference,residual").unwrap();
            for row in &table.rows {
                for e in &row.entries {
                    writeln!(
                        out,
                        "{},{},{},{},{},{}",
                        row.state,
                        row.subsystem,
                        e.measure,
                        fmt12(e.computed),
                        fmt12(e.reference),
                        fmt12(e.residual)
                    )
                    .unwrap();
                }
            }
        }
    }
    Ok(Outcome { stdout: out, code: EXIT_OK })
}

struct Check {
    name: String,
    residual: f64,
    tol: f64,
}

impl Check {
    fn pass(&self) -> bool {
        self.residual <= self.tol
    }
}

const ELEMENTWISE_TOL: f64 = 1e-12;

pub fn cmd_verify(args: &VerifyArgs) -> Result<Outcome, Failure> {
    let resolved = resolve_input(&args.input)?;
    let rho = resolved.state.density();
    let n = rho.dims().n();
    let mut checks: Vec<Check> = Vec::new();

    for p in 0..n {
        if n == 3 {
            let r = ptranspose::verify_tripartite_decomposition(&rho, p).map_err(classify)?;
            checks.push(Check {
                name: format!("tripartite_decomposition p={}", p + 1),
                residual: r,
                tol: ELEMENTWISE_TOL,
            });
        }
        let r = ptranspose::verify_global_decomposition(&rho, p).map_err(classify)?;
        checks.push(Check {
            name: format!("global_decomposition p={}", p + 1),
            residual: r,
            tol: ELEMENTWISE_TOL,
        });
        let report = negativity::partial_kway_negativities(&rho, p, args.zero_tol, args.identity_tol)
            .map_err(classify)?;
        let split: f64 = report.e_k.values().sum::<f64>() - report.e_0;
        checks.push(Check {
            name: format!("negativity_splitting p={}", p + 1),
            residual: (report.n_g - split).abs(),
            tol: args.identity_tol,
        });
    }

    if n == 3 {
        if let Some(psi) = resolved.state.as_pure() {
            for measured in 0..3 {
                let pair: Vec<usize> = (0..3).filter(|&m| m != measured).collect();
                let (lhs, rhs) = negativity::reduced_convexity_check(
                    psi,
                    measured,
                    (pair[0], pair[1]),
                    args.zero_tol,
                )
                .map_err(classify)?;
                checks.push(Check {
                    name: format!("measurement_convexity measured={}", measured + 1),
                    residual: (lhs - rhs).max(0.0),
                    tol: args.identity_tol,
                });
            }
        }
    }

    match &resolved.named {
        Some(NamedState::Eq9 { .. }) => {
            let n2 = negativity::kway_negativity(&rho, 0, 2, args.zero_tol).map_err(classify)?;
            let ab: BTreeSet<usize> = [0, 1].into_iter().collect();
            let ac: BTreeSet<usize> = [0, 2].into_iter().collect();
            let n_ab = negativity::subset_negativity(&rho, 0, &ab, args.zero_tol).map_err(classify)?;
            let n_ac = negativity::subset_negativity(&rho, 0, &ac, args.zero_tol).map_err(classify)?;
            checks.push(Check {
                name: "pairwise_monogamy".into(),
                residual: (n2 * n2 - n_ab * n_ab - n_ac * n_ac).abs(),
                tol: args.identity_tol,
            });
        }
        Some(NamedState::Qutrit { .. }) => {
            for (label, p) in [("A", 0usize), ("B", 1)] {
                let report = negativity::partial_kway_negativities(&rho, p, args.zero_tol, args.identity_tol)
                    .map_err(classify)?;
                let lhs = report.n_g * report.n_g;
                let rhs = report.n_k[&2] * report.n_k[&2] + report.n_k[&3] * report.n_k[&3];
                checks.push(Check {
                    name: format!("kway_quadratic_bound {label}"),
                    residual: (lhs - rhs).max(0.0),
                    tol: args.identity_tol,
                });
                // subset split of E_2 into the two pair contributions
                let others: Vec<usize> = (0..3).filter(|&m| m != p).collect();
                let mut sum = 0.0;
                for &q in &others {
                    let s: BTreeSet<usize> = [p, q].into_iter().collect();
                    sum += subset_projector_expectation(&rho, p, &s, args.zero_tol).map_err(classify)?;
                }
                checks.push(Check {
                    name: format!("pairwise_split_of_E2 {label}"),
                    residual: (report.e_k[&2] - sum).abs(),
                    tol: args.identity_tol,
                });
            }
        }
        _ => {}
    }

    let mut out = String::new();
    if let Some(w) = &resolved.warning {
        writeln!(out, "warning: {w}").unwrap();
    }
    let mut all_pass = true;
    for check in &checks {
        all_pass &= check.pass();
        writeln!(
            out,
            "{}: residual {} vs tolerance {} -> {}",
            check.name,
            fmt12(check.residual),
            check.tol,
            if check.pass() { "pass" } else { "FAIL" }
        )
        .unwrap();
    }
    writeln!(out, "{}", if all_pass { "all checks passed" } else { "verification failed" }).unwrap();
    Ok(Outcome { stdout: out, code: if all_pass { EXIT_OK } else { EXIT_VERIFY_FAILED } })
}

/// E_2 contribution of one pair subset: projector expectation of the subset
/// transpose against the negative eigenspace of the global transpose.
pub fn subset_projector_expectation(
    rho: &crate::multistate::DensityOperator,
    p: usize,
    subset: &BTreeSet<usize>,
    zero_tol: f64,
) -> crate::error::Result<f64> {
    let global = ptranspose::global_pt(rho, p)?;
    let spec = crate::spectral::eigendecompose(global.matrix(), zero_tol)?;
    let t = ptranspose::subset_pt(rho, p, subset)?;
    let d_p = rho.dims().dim(p);
    Ok(-2.0 * (spec.negative_projector() * t.matrix()).trace().re / (d_p - 1) as f64)
}

pub fn cmd_canonicalize(args: &CanonicalizeArgs) -> Result<Outcome, Failure> {
    let resolved = resolve_input(&args.input)?;
    let psi = resolved.state.as_pure().ok_or_else(|| {
        failure(EXIT_PARSE_ERROR, "canonicalize needs a pure state input")
    })?;
    let result = canonical::heuristic_canonicalize(psi, args.restarts, args.input.seed, args.zero_tol)
        .map_err(classify)?;
    let mut out = String::new();
    if let Some(w) = &resolved.warning {
        writeln!(out, "warning: {w}").unwrap();
    }
    match args.format {
        Format::Json => {
            let doc = serde_json::json!({
                "input_lbps": count_lbps(psi, LBPS_THRESHOLD),
                "best_lbps": result.best_lbps,
                "iterations": result.iterations,
                "converged": result.converged,
                "heuristic": true,
                "nu_by_k": result.nu_by_k,
                "best_state": statejson::pure_to_json(&result.best_state),
            });
            writeln!(out, "{}", serde_json::to_string_pretty(&doc).unwrap()).unwrap();
        }
        Format::Csv | Format::Text => {
            writeln!(out, "input LBPS: {}", count_lbps(psi, LBPS_THRESHOLD)).unwrap();
            writeln!(out, "best LBPS (heuristic, not certified minimal): {}", result.best_lbps)
                .unwrap();
            writeln!(out, "iterations: {}", result.iterations).unwrap();
            writeln!(out, "converged: {}", result.converged).unwrap();
            for (k, v) in &result.nu_by_k {
                writeln!(out, "nu_{k} (subsystem 1) = {v}").unwrap();
            }
        }
    }
    Ok(Outcome { stdout: out, code: EXIT_OK })
}

pub fn cmd_nu(args: &NuArgs) -> Result<Outcome, Failure> {
    let resolved = resolve_input(&args.input)?;
    let rho = resolved.state.density();
    let subsystems = parse_subsystems(&args.subsystem, rho.dims().n())?;
    let mut out = String::new();
    if let Some(w) = &resolved.warning {
        writeln!(out, "warning: {w}").unwrap();
    }
    for &p in &subsystems {
        let prof = canonical::nu_profile(&rho, p, args.zero_tol).map_err(classify)?;
        write!(out, "subsystem {}: nu_G = {}", prof.subsystem, prof.nu_g).unwrap();
        for (k, v) in &prof.nu_k {
            write!(out, ", nu_{k} = {v}").unwrap();
        }
        writeln!(out, ", nu = {}", prof.nu_total).unwrap();
    }
    Ok(Outcome { stdout: out, code: EXIT_OK })
}

pub fn run(cli: &Cli) -> Result<Outcome, Failure> {
    match &cli.command {
        Command::Analyze(args) => cmd_analyze(args),
        Command::Table1(args) => cmd_table1(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Canonicalize(args) => cmd_canonicalize(args),
        Command::Nu(args) => cmd_nu(args),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> Result<Outcome, Failure> {
        let cli = Cli::try_parse_from(args).expect("argument parsing");
        run(&cli)
    }

    #[test]
    fn named_grammar() {
        assert_eq!(parse_named("ghz3").unwrap(), NamedState::Ghz(3));
        assert_eq!(parse_named("ghz").unwrap(), NamedState::Ghz(3));
        assert_eq!(parse_named("w4").unwrap(), NamedState::W(4));
        assert_eq!(parse_named("eq9:mu0=0.5").unwrap(), NamedState::Eq9 { mu0: 0.5 });
        assert_eq!(parse_named("eq9:0.5").unwrap(), NamedState::Eq9 { mu0: 0.5 });
        assert_eq!(parse_named("psiI:a=0.4").unwrap(), NamedState::PsiI { a: 0.4 });
        assert!(matches!(parse_named("qutrit:0.5,0.5,0.5,0.5").unwrap(), NamedState::Qutrit { .. }));
        assert!(parse_named("nope").is_err());
        assert!(parse_named("qutrit:1,2").is_err());
        assert!(parse_named("eq9:k=0.5").is_err());
    }

    #[test]
    fn analyze_ghz_all() {
        let out = run_args(&["kwayneg", "analyze", "--named", "ghz3", "--subsystem", "all"]).unwrap();
        assert_eq!(out.code, EXIT_OK);
        assert_eq!(out.stdout.matches("subsystem").count(), 3);
        assert!(out.stdout.contains("N_G = 1.00000000000e0"));
        assert!(out.stdout.contains("E_3 = 1.00000000000e0"));
    }

    #[test]
    fn analyze_eq9_json_values() {
        let out = run_args(&[
            "kwayneg", "analyze", "--named", "eq9:mu0=0.5", "--subsystem", "1", "--format", "json",
        ])
        .unwrap();
        let parsed: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
        let report = &parsed[0];
        assert!((report["n_g"].as_f64().unwrap() - 1.0).abs() < 1e-9);
        assert!((report["n_k"]["2"].as_f64().unwrap() - 0.816496580928).abs() < 1e-9);
        assert!((report["n_k"]["3"].as_f64().unwrap() - 0.577350269190).abs() < 1e-9);
        assert!((report["e_k"]["2"].as_f64().unwrap() - 2.0 / 3.0).abs() < 1e-9);
        assert!((report["e_k"]["3"].as_f64().unwrap() - 1.0 / 3.0).abs() < 1e-9);
    }

    #[test]
    fn analyze_rejects_malformed_json() {
        let dir = std::env::temp_dir().join("kwayneg-cli-test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("broken.json");
        std::fs::write(&path, "{\"dims\": [2,").unwrap();
        let err = run_args(&["kwayneg", "analyze", "--state", path.to_str().unwrap()])
            .unwrap_err();
        assert_eq!(err.code, EXIT_PARSE_ERROR);
        assert!(err.message.contains("byte offset"));
    }

    #[test]
    fn analyze_rejects_invariant_violations() {
        let dir = std::env::temp_dir().join("kwayneg-cli-test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("unnormalized.json");
        std::fs::write(
            &path,
            r#"{"dims":[2],"pure":{"amplitudes":[{"index":[0],"re":0.5,"im":0.0}]}}"#,
        )
        .unwrap();
        let err = run_args(&["kwayneg", "analyze", "--state", path.to_str().unwrap()])
            .unwrap_err();
        assert_eq!(err.code, EXIT_INVARIANT_VIOLATION);
        assert!(err.message.contains("norm"));
    }

    #[test]
    fn verify_named_states() {
        let out = run_args(&["kwayneg", "verify", "--named", "eq9:mu0=0.25"]).unwrap();
        assert_eq!(out.code, EXIT_OK);
        assert!(out.stdout.contains("pairwise_monogamy"));
        assert!(out.stdout.contains("all checks passed"));

        let out = run_args(&["kwayneg", "verify", "--random-pure", "2,2,2", "--seed", "7"]).unwrap();
        assert_eq!(out.code, EXIT_OK);

        let out = run_args(&["kwayneg", "verify", "--named", "qutrit:0.5,0.5,0.5,0.5"]).unwrap();
        assert_eq!(out.code, EXIT_OK);
        assert!(out.stdout.contains("kway_quadratic_bound"));
        assert!(out.stdout.contains("pairwise_split_of_E2"));
    }

    #[test]
    fn table1_runs() {
        let out = run_args(&["kwayneg", "table1", "--a", "0.4", "--format", "csv"]).unwrap();
        assert_eq!(out.code, EXIT_OK);
        // 30 cells + header
        assert_eq!(out.stdout.lines().count(), 31);
        let out = run_args(&["kwayneg", "table1", "--a", "0.2"]).unwrap();
        assert!(out.stdout.contains("warning"));
    }

    #[test]
    fn deterministic_output() {
        let a = run_args(&["kwayneg", "analyze", "--random-pure", "2,2", "--seed", "3", "--format", "json"])
            .unwrap();
        let b = run_args(&["kwayneg", "analyze", "--random-pure", "2,2", "--seed", "3", "--format", "json"])
            .unwrap();
        assert_eq!(a.stdout, b.stdout);
    }

    #[test]
    fn nu_command() {
        let out = run_args(&["kwayneg", "nu", "--named", "ghz3"]).unwrap();
        assert!(out.stdout.contains("nu_G = 1"));
        assert!(out.stdout.contains("nu_3 = 1"));
    }

    #[test]
    fn json_dump_reanalysis_roundtrip() {
        // a mixed-state dump re-analyzed yields the same report
        let dims = SubsystemDims::new(vec![2, 2, 2]).unwrap();
        let rho = crate::catalog::random_mixed(&dims, 3, 5);
        let doc = statejson::mixed_to_json(&rho);
        let dir = std::env::temp_dir().join("kwayneg-cli-test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("dump.json");
        std::fs::write(&path, serde_json::to_string(&doc).unwrap()).unwrap();
        let direct = negativity::partial_kway_negativities(&rho, 0, 1e-10, 1e-9).unwrap();
        let out = run_args(&[
            "kwayneg", "analyze", "--state", path.to_str().unwrap(), "--subsystem", "1",
            "--format", "json",
        ])
        .unwrap();
        let parsed: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
        assert!((parsed[0]["n_g"].as_f64().unwrap() - direct.n_g).abs() < 1e-12);
        assert!((parsed[0]["e_0"].as_f64().unwrap() - direct.e_0).abs() < 1e-12);
    }
}
