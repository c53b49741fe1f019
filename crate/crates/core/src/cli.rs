//! Command-line front end. [`run`] does all the work and returns the exit
//! code with the rendered report, so the binary is a thin wrapper.
//!
//! Exit codes: 0 ran clean, 1 a checked property failed, 2 bad input or
//! configuration.

use std::fmt::Write as _;

use clap::{Parser, Subcommand, ValueEnum};
use rand::Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::complementable::{
    affine_intersection_oracle, is_complementable, random_dims, random_instance, schur_complement,
    verify_affine_intersection_with, verify_b_factors_through_d, verify_domain_range_decompositions,
    verify_null_projections, verify_projection_pair_with, verify_shorted_identities_with, Instance,
    IntersectionVerdict, PropertyCheck, SchurFormula,
};
use crate::douglas::{check_certificate, douglas_factorize, verify_minimality};
use crate::error::{DouglasError, FormatError};
use crate::json::{
    banded_to_json, index_set_to_json, instance_to_json, matrix_to_json, operator_spec_to_json, parse_index_set,
    parse_instance, parse_matrix, parse_operator_spec, parse_sequence,
};
use crate::matrix::ExactMatrix;
use crate::rng::{random_int_matrix, trial_rng};
use crate::scalar::Rational;
use crate::seqspace::{
    adjoint_truncation_check, complement_consistency, decide_decomposable, divergence_probe, formal_adjoint,
    truncation_stability, validate_witness, IndexSet, SequenceRecipe, Verdict, WITNESS_GRID,
};

/// Largest ambient dimension accepted by the randomized suites.
pub const MAX_DIM_CAP: usize = 12;

const FIXTURES: &[(&str, &str)] = &[
    ("pairing-example", include_str!("../fixtures/pairing_example.json")),
    (
        "parity-adversarial",
        include_str!("../fixtures/parity_adversarial.json"),
    ),
    (
        "worked-complementable",
        include_str!("../fixtures/worked_complementable.json"),
    ),
    (
        "worked-not-complementable",
        include_str!("../fixtures/worked_not_complementable.json"),
    ),
    ("douglas-row", include_str!("../fixtures/douglas_row.json")),
];

pub fn fixture(name: &str) -> Option<&'static str> {
    FIXTURES.iter().find(|(n, _)| *n == name).map(|(_, s)| *s)
}

pub fn fixture_names() -> impl Iterator<Item = &'static str> {
    FIXTURES.iter().map(|(n, _)| *n)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mutant {
    /// Shorted operator computed as `A + B D⁺ C`.
    SchurSign,
}

#[derive(Debug, Parser)]
#[command(
    name = "opcomp",
    version,
    about = "Exact checks of operator complementability and decomposability"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Master seed for every randomized check.
    #[arg(long, global = true, default_value_t = 42)]
    pub seed: u64,
    /// Number of random trials.
    #[arg(long, global = true)]
    pub trials: Option<usize>,
    /// Largest ambient dimension of generated instances (at most 12).
    #[arg(long, global = true, default_value_t = 6)]
    pub max_dim: usize,
    /// Comma-separated counts: rows for probes, sizes for truncations.
    #[arg(long, global = true, value_delimiter = ',')]
    pub grid: Option<Vec<u64>>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Instance file, inline JSON, or `fixture:NAME`.
    #[arg(long, global = true)]
    pub input: Option<String>,
    #[arg(long, global = true, value_enum, hide = true)]
    pub inject_mutant: Option<Mutant>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Complementability, factors X and Y, shorted operator, and the
    /// affine-intersection cross-check for one instance.
    Check,
    /// Shorted operator of one instance.
    Schur,
    /// Douglas factorization of `{"A", "B"}`, or a randomized suite without input.
    Douglas,
    /// Randomized verification of every characterization.
    Verify,
    /// Banded sequence-space model.
    Seqspace {
        #[command(subcommand)]
        action: SeqAction,
    },
}

#[derive(Debug, Subcommand)]
pub enum SeqAction {
    /// Decide T-decomposability of M, with witness and complement check.
    Decompose,
    /// Partial sums of ‖Wx‖² and ‖W P_M x‖².
    Probe,
    /// Complementability of truncations across a grid of sizes.
    Truncate,
    /// Formal adjoint and its agreement with transposed truncations.
    Adjoint,
}

pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

struct Report {
    code: i32,
    json: Value,
    text: String,
}

enum CliError {
    Input(FormatError),
    Config(String),
}

impl From<FormatError> for CliError {
    fn from(e: FormatError) -> Self {
        Self::Input(e)
    }
}

pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let rendered = e.render().to_string();
            return if code == 0 {
                Outcome {
                    code,
                    stdout: rendered,
                    stderr: String::new(),
                }
            } else {
                Outcome {
                    code,
                    stdout: String::new(),
                    stderr: rendered,
                }
            };
        }
    };
    match execute(&cli) {
        Ok(r) => {
            let stdout = match cli.format {
                Format::Json => {
                    let mut s = serde_json::to_string_pretty(&r.json).expect("reports serialize");
                    s.push('\n');
                    s
                }
                Format::Text => r.text,
            };
            Outcome {
                code: r.code,
                stdout,
                stderr: String::new(),
            }
        }
        Err(CliError::Input(e)) => Outcome {
            code: 2,
            stdout: String::new(),
            stderr: format!("error: malformed input at {}: {}\n", e.field, e.message),
        },
        Err(CliError::Config(msg)) => Outcome {
            code: 2,
            stdout: String::new(),
            stderr: format!("error: {msg}\n"),
        },
    }
}

fn execute(cli: &Cli) -> Result<Report, CliError> {
    if cli.max_dim == 0 || cli.max_dim > MAX_DIM_CAP {
        return Err(CliError::Config(format!(
            "--max-dim must be between 1 and {MAX_DIM_CAP}"
        )));
    }
    if cli.trials == Some(0) {
        return Err(CliError::Config("--trials must be at least 1".into()));
    }
    match &cli.command {
        Command::Check => cmd_check(cli),
        Command::Schur => cmd_schur(cli),
        Command::Douglas => cmd_douglas(cli),
        Command::Verify => cmd_verify(cli),
        Command::Seqspace { action } => cmd_seqspace(cli, action),
    }
}

fn load_input(cli: &Cli, default: Option<&str>) -> Result<Value, CliError> {
    let spec = match (&cli.input, default) {
        (Some(s), _) => s.clone(),
        (None, Some(d)) => format!("fixture:{d}"),
        (None, None) => return Err(CliError::Config("--input is required for this command".into())),
    };
    let text = if let Some(name) = spec.strip_prefix("fixture:") {
        fixture(name)
            .ok_or_else(|| {
                let names: Vec<_> = fixture_names().collect();
                CliError::Config(format!("unknown fixture {name:?}; available: {}", names.join(", ")))
            })?
            .to_string()
    } else if spec.trim_start().starts_with('{') {
        spec
    } else {
        std::fs::read_to_string(&spec).map_err(|e| CliError::Config(format!("cannot read {spec}: {e}")))?
    };
    serde_json::from_str(&text).map_err(|e| {
        CliError::Input(FormatError::new(
            "input",
            format!("invalid JSON at line {}, column {}: {e}", e.line(), e.column()),
        ))
    })
}

fn grid_or(cli: &Cli, default: &[u64]) -> Result<Vec<u64>, CliError> {
    let grid = cli.grid.clone().unwrap_or_else(|| default.to_vec());
    if grid.is_empty() || grid[0] == 0 || grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(CliError::Config(
            "--grid must be positive and strictly increasing".into(),
        ));
    }
    Ok(grid)
}

fn formula(cli: &Cli) -> SchurFormula {
    match cli.inject_mutant {
        Some(Mutant::SchurSign) => SchurFormula::SignFlipped,
        None => SchurFormula::Standard,
    }
}

fn opt_matrix(m: Option<&ExactMatrix>) -> Value {
    m.map_or(Value::Null, matrix_to_json)
}

fn cmd_check(cli: &Cli) -> Result<Report, CliError> {
    let input = load_input(cli, None)?;
    let inst: Instance<Rational> = parse_instance(&input)?;
    let report = is_complementable(&inst.operator, &inst.m, &inst.n).map_err(|e| CliError::Config(e.to_string()))?;
    let intersection =
        affine_intersection_oracle(&inst.operator, &inst.m, &inst.n).map_err(|e| CliError::Config(e.to_string()))?;
    let intersection_agrees = match (&report.schur, &intersection.verdict) {
        (Some(s), IntersectionVerdict::Unique) => intersection
            .points
            .iter()
            .all(|p| (s * &ExactMatrix::column_vector(p.x.clone())).column(0) == p.z),
        (None, v) => *v != IntersectionVerdict::Unique,
        (Some(_), _) => false,
    };
    let points: Vec<Value> = intersection
        .points
        .iter()
        .map(|p| {
            json!({
                "x": p.x.iter().map(ToString::to_string).collect::<Vec<_>>(),
                "z": p.z.iter().map(ToString::to_string).collect::<Vec<_>>(),
            })
        })
        .collect();
    let json = json!({
        "command": "check",
        "complementable": report.complementable,
        "failing_inclusion": report.failing_inclusion,
        "x_factor": opt_matrix(report.x_factor.as_ref()),
        "y_factor": opt_matrix(report.y_factor.as_ref()),
        "schur": opt_matrix(report.schur.as_ref()),
        "affine_intersection": { "verdict": intersection.verdict, "points": points, "agrees_with_schur": intersection_agrees },
    });
    let mut text = String::new();
    let _ = writeln!(text, "complementable: {}", report.complementable);
    let _ = writeln!(text, "failing inclusion: {}", report.failing_inclusion.as_str());
    if let (Some(x), Some(y), Some(s)) = (&report.x_factor, &report.y_factor, &report.schur) {
        let _ = writeln!(text, "X = {x}");
        let _ = writeln!(text, "Y = {y}");
        let _ = writeln!(text, "shorted operator = {s}");
    }
    let _ = writeln!(
        text,
        "affine intersection: {:?}, agrees with shorted operator: {intersection_agrees}",
        intersection.verdict
    );
    Ok(Report {
        code: if intersection_agrees { 0 } else { 1 },
        json,
        text,
    })
}

fn cmd_schur(cli: &Cli) -> Result<Report, CliError> {
    let input = load_input(cli, None)?;
    let inst: Instance<Rational> = parse_instance(&input)?;
    let (json, text) = match schur_complement(&inst.operator, &inst.m, &inst.n) {
        Ok(s) => (
            json!({ "command": "schur", "complementable": true, "schur": matrix_to_json(&s) }),
            format!("shorted operator = {s}\n"),
        ),
        Err(crate::error::ComplementError::NotComplementable(tag)) => (
            json!({ "command": "schur", "complementable": false, "failing_inclusion": tag, "schur": null }),
            format!("not complementable: {tag} fails\n"),
        ),
        Err(e) => return Err(CliError::Config(e.to_string())),
    };
    Ok(Report { code: 0, json, text })
}

const DOUGLAS_NOTES: [&str; 2] = [
    "lambda_star is the smallest lambda with AA* <= lambda BB*; it equals the squared norm of C",
    "the kernel identity checked is N(C) = N(A); N(A) = N(B) is reported separately and not required",
];

fn douglas_json(a: &ExactMatrix, b: &ExactMatrix, trials: usize, seed: u64) -> Result<(Value, bool), CliError> {
    match douglas_factorize(a, b) {
        Ok(cert) => {
            let checks = check_certificate(a, b, &cert).map_err(|e| CliError::Config(e.to_string()))?;
            let minimal = verify_minimality(&cert, b, trials, seed);
            let ok = checks.all_required_pass() && minimal;
            Ok((
                json!({
                    "range_included": true,
                    "reduced_solution": matrix_to_json(&cert.reduced_solution),
                    "lambda_star": cert.lambda_star,
                    "norm_c": cert.norm_c,
                    "checks": checks,
                    "minimality_trials": trials,
                    "minimal": minimal,
                }),
                ok,
            ))
        }
        Err(DouglasError::RangeNotIncluded) => Ok((json!({ "range_included": false }), true)),
        Err(DouglasError::Linalg(e)) => Err(CliError::Config(e.to_string())),
    }
}

fn cmd_douglas(cli: &Cli) -> Result<Report, CliError> {
    if cli.input.is_some() {
        let input = load_input(cli, None)?;
        let obj = input
            .as_object()
            .ok_or_else(|| FormatError::new("input", "expected an object with A and B"))?;
        let a: ExactMatrix = parse_matrix(obj.get("A").ok_or_else(|| FormatError::new("A", "missing field"))?, "A")?;
        let b: ExactMatrix = parse_matrix(obj.get("B").ok_or_else(|| FormatError::new("B", "missing field"))?, "B")?;
        if a.rows() != b.rows() {
            return Err(FormatError::new("A", format!("A has {} rows, B has {}", a.rows(), b.rows())).into());
        }
        let trials = cli.trials.unwrap_or(50);
        let (result, ok) = douglas_json(&a, &b, trials, cli.seed)?;
        let text = format!("{}\n", serde_json::to_string_pretty(&result).expect("serializable"));
        let json = json!({ "command": "douglas", "seed": cli.seed, "notes": DOUGLAS_NOTES, "result": result });
        return Ok(Report {
            code: if ok { 0 } else { 1 },
            json,
            text,
        });
    }
    let trials = cli.trials.unwrap_or(100);
    let results: Vec<(bool, Value)> = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = trial_rng(cli.seed, trial as u64);
            let rows = rng.gen_range(1..=cli.max_dim);
            let cols = rng.gen_range(1..=cli.max_dim);
            let rhs = rng.gen_range(1..=cli.max_dim);
            let inner = rng.gen_range(0..=rows.min(cols));
            let left: ExactMatrix = random_int_matrix(&mut rng, rows, inner, 3);
            let right: ExactMatrix = random_int_matrix(&mut rng, inner, cols, 3);
            let b = &left * &right;
            let x: ExactMatrix = random_int_matrix(&mut rng, cols, rhs, 3);
            let a = &b * &x;
            match douglas_json(&a, &b, 50, cli.seed ^ trial as u64) {
                Ok((v, ok)) => {
                    let ok = ok && v["range_included"] == json!(true);
                    (
                        ok,
                        json!({ "trial": trial, "A": matrix_to_json(&a), "B": matrix_to_json(&b), "result": v }),
                    )
                }
                Err(_) => (false, json!({ "trial": trial })),
            }
        })
        .collect();
    let passed = results.iter().filter(|(ok, _)| *ok).count();
    let literal_kernel = results
        .iter()
        .filter(|(_, v)| v["result"]["checks"]["kernel_of_a_equals_kernel_of_b"] == json!(true))
        .count();
    let failures: Vec<&Value> = results.iter().filter(|(ok, _)| !ok).map(|(_, v)| v).collect();
    let json = json!({
        "command": "douglas",
        "seed": cli.seed,
        "trials": trials,
        "max_dim": cli.max_dim,
        "notes": DOUGLAS_NOTES,
        "passed": passed,
        "kernel_of_a_equals_kernel_of_b_count": literal_kernel,
        "failures": failures,
    });
    let text = format!(
        "douglas factorization: {passed}/{trials} passed (exact factorization, R(C) orthogonal to N(B), N(C) = N(A), |norm_c^2 - lambda_star| <= 1e-9, minimality over 50 perturbations)\nN(A) = N(B) held in {literal_kernel}/{trials} (reported only)\n"
    );
    Ok(Report {
        code: if failures.is_empty() { 0 } else { 1 },
        json,
        text,
    })
}

/// Results of every check on one generated instance, in a fixed order.
fn complementable_trial(
    inst: &Instance<Rational>,
    formula: SchurFormula,
    seed: u64,
    trial: usize,
) -> Vec<PropertyCheck> {
    let (t, m, n) = (&inst.operator, &inst.m, &inst.n);
    let unwrap = |r: Result<PropertyCheck, crate::error::ComplementError>, name: &'static str| {
        r.unwrap_or_else(|_| PropertyCheck::failed(name, "hypotheses hold"))
    };
    let mut rng = trial_rng(seed, (1 << 40) + trial as u64);
    let e: ExactMatrix = random_int_matrix(&mut rng, t.cols(), t.cols(), 3);
    let f: ExactMatrix = random_int_matrix(&mut rng, t.rows(), t.rows(), 3);
    let pair = |e: Option<&ExactMatrix>, f: Option<&ExactMatrix>, name: &'static str| {
        verify_projection_pair_with(t, m, n, e, f).map_or_else(
            |_| PropertyCheck::failed(name, "hypotheses hold"),
            |(_, c)| c.renamed(name),
        )
    };
    let decomposition = verify_domain_range_decompositions(t, m, n).map_or_else(
        |_| PropertyCheck::failed("domain and range decompositions", "shapes conform"),
        |d| PropertyCheck::from_clauses("domain and range decompositions", d.identities()),
    );
    vec![
        unwrap(
            verify_shorted_identities_with(t, m, n, formula),
            "shorted operator identities",
        ),
        unwrap(
            verify_affine_intersection_with(t, m, n, formula),
            "affine intersection characterization",
        ),
        pair(None, None, "projection-pair characterization"),
        pair(Some(&e), Some(&f), "projection-pair characterization (oblique E, F)"),
        unwrap(verify_null_projections(t, m, n), "null-space projections"),
        unwrap(verify_b_factors_through_d(t, m, n), "B factors through D"),
        decomposition,
    ]
}

fn tally(name: &str, checks: &[&PropertyCheck]) -> Value {
    let passed = checks.iter().filter(|c| c.passed()).count();
    let clause_names: Vec<&'static str> = checks
        .first()
        .map(|c| c.clauses.iter().map(|x| x.clause).collect())
        .unwrap_or_default();
    let clauses: Vec<Value> = clause_names
        .iter()
        .enumerate()
        .map(|(i, name)| {
            let ok = checks
                .iter()
                .filter(|c| c.clauses.get(i).is_some_and(|x| x.passed))
                .count();
            json!({ "clause": name, "passed": ok })
        })
        .collect();
    json!({ "name": name, "passed": passed, "failed": checks.len() - passed, "clauses": clauses })
}

fn cmd_verify(cli: &Cli) -> Result<Report, CliError> {
    let trials = cli.trials.unwrap_or(200);
    let formula = formula(cli);
    let generated: Vec<(Instance<Rational>, Vec<PropertyCheck>)> = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = trial_rng(cli.seed, trial as u64);
            let (m1, m2, n1, n2) = random_dims(&mut rng, cli.max_dim);
            let inst = crate::complementable::generate_complementable_with(&mut rng, m1, m2, n1, n2, 3);
            let checks = complementable_trial(&inst, formula, cli.seed, trial);
            (inst, checks)
        })
        .collect();
    let names: Vec<&'static str> = generated[0].1.iter().map(|c| c.name).collect();
    let checks_table: Vec<Value> = names
        .iter()
        .enumerate()
        .map(|(i, name)| tally(name, &generated.iter().map(|(_, c)| &c[i]).collect::<Vec<_>>()))
        .collect();
    let mut failures = Vec::new();
    for (trial, (inst, checks)) in generated.iter().enumerate() {
        for c in checks.iter().filter(|c| !c.passed()) {
            failures.push(json!({
                "trial": trial,
                "check": c.name,
                "failed_clauses": c.failed_clauses(),
                "instance": instance_to_json(inst),
            }));
        }
    }

    // the equivalences also have to hold where the hypotheses fail
    let random: Vec<(Instance<Rational>, bool, bool)> = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = trial_rng(cli.seed, (1 << 32) + trial as u64);
            let inst = random_instance(&mut rng, cli.max_dim);
            let d =
                verify_domain_range_decompositions(&inst.operator, &inst.m, &inst.n).expect("generated shapes conform");
            let adjoint_agrees = is_complementable(&inst.operator.adjoint(), &inst.n, &inst.m)
                .expect("generated shapes conform")
                .complementable
                == d.complementable;
            let complementable = d.complementable;
            (inst, d.consistent() && adjoint_agrees, complementable)
        })
        .collect();
    let complementable_count = random.iter().filter(|(_, _, c)| *c).count();
    let agreements = random.iter().filter(|(_, ok, _)| *ok).count();
    for (trial, (inst, ok, _)) in random.iter().enumerate() {
        if !ok {
            failures.push(json!({
                "trial": trial,
                "check": "decompositions hold iff complementable (random instance)",
                "instance": instance_to_json(inst),
            }));
        }
    }

    let all_passed = failures.is_empty();
    let json = json!({
        "command": "verify",
        "seed": cli.seed,
        "trials": trials,
        "max_dim": cli.max_dim,
        "mutant": cli.inject_mutant.map(|_| "schur-sign"),
        "checks": checks_table,
        "equivalence": {
            "instances": trials,
            "complementable": complementable_count,
            "not_complementable": trials - complementable_count,
            "agreements": agreements,
        },
        "failures": failures,
        "all_passed": all_passed,
    });
    let mut text = format!("seed {} trials {} max-dim {}\n", cli.seed, trials, cli.max_dim);
    for t in &checks_table {
        let _ = writeln!(
            text,
            "{:<52} {}/{}",
            t["name"].as_str().unwrap_or(""),
            t["passed"],
            trials
        );
    }
    let _ = writeln!(
        text,
        "{:<52} {agreements}/{trials} ({complementable_count} complementable, {} not)",
        "decompositions hold iff complementable (random)",
        trials - complementable_count
    );
    for f in &failures {
        let _ = writeln!(text, "FAILED trial {} {}: {}", f["trial"], f["check"], f["instance"]);
    }
    let _ = writeln!(
        text,
        "{}",
        if all_passed {
            "all checks passed"
        } else {
            "property violations found"
        }
    );
    Ok(Report {
        code: if all_passed { 0 } else { 1 },
        json,
        text,
    })
}

struct SeqInput {
    operator: crate::seqspace::DenselyDefinedOperator,
    m: IndexSet,
    n: IndexSet,
    x: SequenceRecipe,
}

fn load_seq_input(cli: &Cli) -> Result<SeqInput, CliError> {
    let input = load_input(cli, Some("pairing-example"))?;
    let obj = input
        .as_object()
        .ok_or_else(|| FormatError::new("input", "expected an object with operator and M"))?;
    let operator = parse_operator_spec(
        obj.get("operator")
            .ok_or_else(|| FormatError::new("operator", "missing field"))?,
        "operator",
    )?;
    let m = match obj.get("M") {
        Some(v) => parse_index_set(v, "M")?,
        None => IndexSet::odds(),
    };
    let n = match obj.get("N") {
        Some(v) => parse_index_set(v, "N")?,
        None => m.clone(),
    };
    let x = match obj.get("x") {
        Some(v) => parse_sequence(v, "x")?,
        None => SequenceRecipe::harmonic(),
    };
    Ok(SeqInput { operator, m, n, x })
}

/// Rows of the default probe: `K` pairs of the worked example at
/// `K = 125000, …, 10⁶`.
pub const PROBE_GRID: [u64; 4] = [250_000, 500_000, 1_000_000, 2_000_000];
pub const STABILITY_GRID: [u64; 4] = [64, 128, 256, 512];
pub const ADJOINT_GRID: [u64; 3] = [32, 64, 128];

fn series_text(label: &str, s: &crate::seqspace::SeriesReport, out: &mut String) {
    let _ = writeln!(out, "  {label}");
    for p in &s.points {
        let exact = p.exact.as_ref().map(|e| format!("  (exact {e})")).unwrap_or_default();
        let _ = writeln!(out, "    {:>10}  {:.9}{exact}", p.count, p.value);
    }
    let _ = writeln!(
        out,
        "    slope {:.4}, last increment {:.3e}: {:?}",
        s.slope, s.tail, s.growth
    );
}

fn cmd_seqspace(cli: &Cli, action: &SeqAction) -> Result<Report, CliError> {
    let input = load_seq_input(cli)?;
    let t = &input.operator;
    let seq_err = |e: crate::error::SeqError| CliError::Config(e.to_string());
    match action {
        SeqAction::Decompose => {
            let decision = decide_decomposable(t, &input.m);
            let consistency = complement_consistency(t, &input.m);
            let validation = match &decision.witness {
                Some(w) => Some(validate_witness(t, &input.m, w, &WITNESS_GRID).map_err(seq_err)?),
                None => None,
            };
            let grid = grid_or(cli, &PROBE_GRID)?;
            let probe = divergence_probe(t, &input.m, &input.x, &grid).map_err(seq_err)?;
            let terms = decision.witness.as_ref().map(|w| w.terms(8));
            let witness_ok = validation.as_ref().is_none_or(|v| v.validated);
            let not_decomposable_has_witness =
                decision.verdict != Verdict::NotDecomposable || decision.witness.is_some();
            let ok = witness_ok && consistency.consistent && not_decomposable_has_witness;
            let json = json!({
                "command": "seqspace decompose",
                "operator": operator_spec_to_json(t),
                "M": index_set_to_json(&input.m),
                "decision": decision,
                "witness_terms": terms,
                "witness_validation": validation,
                "complement": consistency,
                "probe": probe,
            });
            let mut text = format!("verdict: {:?}\n{}\n", decision.verdict, decision.evidence.detail);
            if let Some(w) = &decision.witness {
                let _ = writeln!(text, "witness on {}: {}; {}", w.pairs, w.formula, w.subsequence);
                for term in terms.iter().flatten() {
                    let _ = writeln!(
                        text,
                        "  k={} x[{}]={} x[{}]={}",
                        term.k, term.first, term.x_first, term.second, term.x_second
                    );
                }
            }
            if let Some(v) = &validation {
                let _ = writeln!(text, "witness validation (sums over witness terms): {}", v.validated);
                series_text("|Wx|^2", &v.domain, &mut text);
                series_text("|W P_M x|^2", &v.projected, &mut text);
            }
            let _ = writeln!(
                text,
                "complement: {:?}, consistent: {}",
                consistency.complement_verdict, consistency.consistent
            );
            let _ = writeln!(text, "probe (rows summed):");
            series_text("|Wx|^2", &probe.domain, &mut text);
            series_text("|W P_M x|^2", &probe.projected, &mut text);
            Ok(Report {
                code: if ok { 0 } else { 1 },
                json,
                text,
            })
        }
        SeqAction::Probe => {
            let grid = grid_or(cli, &PROBE_GRID)?;
            let probe = divergence_probe(t, &input.m, &input.x, &grid).map_err(seq_err)?;
            let mut text = String::from("probe (rows summed):\n");
            series_text("|Wx|^2", &probe.domain, &mut text);
            series_text("|W P_M x|^2", &probe.projected, &mut text);
            let json = json!({
                "command": "seqspace probe",
                "operator": operator_spec_to_json(t),
                "M": index_set_to_json(&input.m),
                "grid": grid,
                "probe": probe,
            });
            Ok(Report { code: 0, json, text })
        }
        SeqAction::Truncate => {
            let grid = grid_or(cli, &STABILITY_GRID)?;
            let sizes: Vec<usize> = grid.iter().map(|&g| g as usize).collect();
            let report = truncation_stability(t, &input.m, &input.n, &sizes).map_err(seq_err)?;
            let mut text = String::new();
            for v in &report.verdicts {
                let _ = writeln!(
                    text,
                    "size {:>5}: complementable {} ({})",
                    v.size,
                    v.complementable,
                    v.failing_inclusion.as_str()
                );
            }
            let _ = writeln!(text, "stable: {}", report.stable);
            let json = json!({
                "command": "seqspace truncate",
                "operator": operator_spec_to_json(t),
                "M": index_set_to_json(&input.m),
                "N": index_set_to_json(&input.n),
                "stability": report,
            });
            Ok(Report { code: 0, json, text })
        }
        SeqAction::Adjoint => {
            let grid = grid_or(cli, &ADJOINT_GRID)?;
            let adjoint = formal_adjoint(t);
            let checks = grid
                .iter()
                .map(|&g| adjoint_truncation_check(&t.action, g as usize))
                .collect::<Result<Vec<_>, _>>()
                .map_err(seq_err)?;
            let ok = checks.iter().all(|c| c.interior_equal);
            let mut text = String::new();
            for c in &checks {
                let _ = writeln!(
                    text,
                    "size {:>5}: interior rows {} agree {}, whole corner agrees {}",
                    c.size, c.interior_rows, c.interior_equal, c.full_equal
                );
            }
            let json = json!({
                "command": "seqspace adjoint",
                "operator": operator_spec_to_json(t),
                "adjoint": banded_to_json(&adjoint),
                "checks": checks,
            });
            Ok(Report {
                code: if ok { 0 } else { 1 },
                json,
                text,
            })
        }
    }
}
