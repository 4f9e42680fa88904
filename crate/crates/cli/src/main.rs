//! Command-line interface: validation, spectral numbers, best approximation,
//! adapted bases, boundary depth, homology ranks, and oracle cross-checks.
//!
//! Exit codes: 0 success, 1 validation failure or cross-check mismatch,
//! 2 precision exhausted or undecided, 3 parse or input error.

use std::fmt::Write as _;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use novikov_core::complex::{
    FilteredComplex, FiltrationLevel, RankResult, Rho, SpectralError, SpectralResult,
    SpectralStatus,
};
use novikov_core::exponent::Exponent;
use novikov_core::field::Field;
use novikov_core::generate::InstanceGenerator;
use novikov_core::io::{
    load_complex, load_instance, load_matrix, AnyComplex, AnyInstance, AnyMatrix, ParsedInstance,
};
use novikov_core::linalg::{ValuedMatrix, ValuedVector, WeightVector};
use novikov_core::oracle::{
    oracle_best_approx, window_start, OracleConfig, OracleError, OracleOutcome,
};
use novikov_core::parse::{parse_exponent, parse_vector, parse_weights};
use novikov_core::period::ValueGroup;
use novikov_core::reduction::{adapted_basis, best_approx, ApproxResult, ApproxStatus};
use novikov_core::series::Valuation;

const SCHEMA: &str = "novikov/1";

const EXIT_OK: i32 = 0;
const EXIT_INVALID: i32 = 1;
const EXIT_PRECISION: i32 = 2;
const EXIT_PARSE: i32 = 3;

#[derive(Parser)]
#[command(
    name = "novikov",
    about = "Exact non-Archimedean best approximation and spectral numbers of filtered complexes",
    version
)]
struct Cli {
    /// Emit machine-readable JSON instead of human-readable text.
    #[arg(long, global = true)]
    json: bool,

    /// Seed for randomized commands (overrides NOVIKOV_SEED).
    #[arg(long, global = true)]
    seed: Option<u64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a complex file: filtration, boundary squared, grading.
    Check { file: String },
    /// Spectral number of a cycle in a complex.
    Spectral {
        file: String,
        /// Cycle in generator coordinates, e.g. "[1, 0]".
        #[arg(long)]
        cycle: String,
        #[command(flatten)]
        opts: PrecisionOpts,
        /// Print the reduction trace.
        #[arg(long)]
        trace: bool,
    },
    /// Best approximation of a target vector by the image of a matrix.
    Approx {
        file: String,
        /// Row weights, e.g. "0,1/2".
        #[arg(long)]
        weights: String,
        /// Target vector, e.g. "[0, 1]".
        #[arg(long)]
        target: String,
        #[command(flatten)]
        opts: PrecisionOpts,
        #[arg(long)]
        trace: bool,
    },
    /// Adapted basis of a matrix image: generators, preimages, gamma.
    Basis {
        file: String,
        /// Optional row weights.
        #[arg(long)]
        weights: Option<String>,
        #[command(flatten)]
        opts: PrecisionOpts,
    },
    /// Boundary depth of a complex.
    Depth {
        file: String,
        #[command(flatten)]
        opts: PrecisionOpts,
    },
    /// Homology rank of a complex, per degree when graded.
    Rank {
        file: String,
        #[command(flatten)]
        opts: PrecisionOpts,
    },
    /// Brute-force cross-check: an instance file, or --random batches.
    Oracle {
        file: Option<String>,
        /// Cross-check this many random instances instead of a file.
        #[arg(long)]
        random: Option<u64>,
    },
}

#[derive(Args)]
struct PrecisionOpts {
    /// Certification level (exact rational); defaults to 4*spread + 1.
    #[arg(long)]
    precision: Option<String>,
}

struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn parse(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_PARSE,
            message: message.into(),
        }
    }
}

fn main() {
    env_logger::init();
    let cli = Cli::parse();
    let code = match run(cli) {
        Ok(code) => code,
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.code
        }
    };
    std::process::exit(code);
}

fn read_file(path: &str) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::parse(format!("cannot read {path}: {e}")))
}

fn parse_precision_opt(opts: &PrecisionOpts) -> Result<Option<Exponent>, Failure> {
    opts.precision
        .as_deref()
        .map(|s| parse_exponent(s).map_err(|e| Failure::parse(format!("--precision: {e}"))))
        .transpose()
}

fn effective_seed(cli_seed: Option<u64>) -> u64 {
    cli_seed
        .or_else(|| {
            std::env::var("NOVIKOV_SEED")
                .ok()
                .and_then(|s| s.parse().ok())
        })
        .unwrap_or(0)
}

fn valuation_text(v: &Valuation) -> String {
    match v {
        Valuation::Known(e) => format!("{e} (d = e^-({e}))"),
        Valuation::Infinite => "+inf (d = 0)".to_owned(),
        Valuation::AtLeast(e) => format!(">= {e} (d <= e^-({e}))"),
    }
}

fn valuation_json(v: &Valuation) -> serde_json::Value {
    match v {
        Valuation::Known(e) => json!({ "known": e.to_string() }),
        Valuation::Infinite => json!("infinite"),
        Valuation::AtLeast(e) => json!({ "at_least": e.to_string() }),
    }
}

fn level_json(l: &FiltrationLevel) -> serde_json::Value {
    match l {
        FiltrationLevel::Finite(e) => json!({ "finite": e.to_string() }),
        FiltrationLevel::MinusInfinite => json!("-inf"),
        FiltrationLevel::Unknown { at_most } => json!({ "at_most": at_most.to_string() }),
    }
}

fn rho_json(r: &Rho) -> serde_json::Value {
    match r {
        Rho::Finite(e) => json!({ "finite": e.to_string() }),
        Rho::MinusInfinity => json!("-inf"),
        Rho::Unknown { at_most } => json!({ "unknown_at_most": at_most.to_string() }),
    }
}

fn vector_json<F: Field>(v: &ValuedVector<F>) -> serde_json::Value {
    json!(v.entries().iter().map(|s| s.to_string()).collect::<Vec<_>>())
}

fn run(cli: Cli) -> Result<i32, Failure> {
    match cli.command {
        Command::Check { ref file } => {
            let text = read_file(file)?;
            let complex = load_complex(&text).map_err(|e| Failure::parse(e.to_string()))?;
            match complex {
                AnyComplex::Rationals(c) => check_cmd(&c, cli.json),
                AnyComplex::Prime(c) => check_cmd(&c, cli.json),
            }
        }
        Command::Spectral {
            ref file,
            ref cycle,
            ref opts,
            trace,
        } => {
            let text = read_file(file)?;
            let precision = parse_precision_opt(opts)?;
            let complex = load_complex(&text).map_err(|e| Failure::parse(e.to_string()))?;
            match complex {
                AnyComplex::Rationals(c) => spectral_cmd(&c, cycle, precision, trace, cli.json),
                AnyComplex::Prime(c) => spectral_cmd(&c, cycle, precision, trace, cli.json),
            }
        }
        Command::Approx {
            ref file,
            ref weights,
            ref target,
            ref opts,
            trace,
        } => {
            let text = read_file(file)?;
            let precision = parse_precision_opt(opts)?;
            let matrix = load_matrix(&text).map_err(|e| Failure::parse(e.to_string()))?;
            match matrix {
                AnyMatrix::Rationals(m, _) => {
                    approx_cmd(&m, weights, target, precision, trace, cli.json)
                }
                AnyMatrix::Prime(m, _) => {
                    approx_cmd(&m, weights, target, precision, trace, cli.json)
                }
            }
        }
        Command::Basis {
            ref file,
            ref weights,
            ref opts,
        } => {
            let text = read_file(file)?;
            let precision = parse_precision_opt(opts)?;
            let matrix = load_matrix(&text).map_err(|e| Failure::parse(e.to_string()))?;
            match matrix {
                AnyMatrix::Rationals(m, _) => basis_cmd(&m, weights.as_deref(), precision, cli.json),
                AnyMatrix::Prime(m, _) => basis_cmd(&m, weights.as_deref(), precision, cli.json),
            }
        }
        Command::Depth { ref file, ref opts } => {
            let text = read_file(file)?;
            let precision = parse_precision_opt(opts)?;
            let complex = load_complex(&text).map_err(|e| Failure::parse(e.to_string()))?;
            match complex {
                AnyComplex::Rationals(c) => depth_cmd(&c, precision, cli.json),
                AnyComplex::Prime(c) => depth_cmd(&c, precision, cli.json),
            }
        }
        Command::Rank { ref file, ref opts } => {
            let text = read_file(file)?;
            let precision = parse_precision_opt(opts)?;
            let complex = load_complex(&text).map_err(|e| Failure::parse(e.to_string()))?;
            match complex {
                AnyComplex::Rationals(c) => rank_cmd(&c, precision, cli.json),
                AnyComplex::Prime(c) => rank_cmd(&c, precision, cli.json),
            }
        }
        Command::Oracle { ref file, random } => match (file, random) {
            (Some(path), None) => {
                let text = read_file(path)?;
                let instance = load_instance(&text).map_err(|e| Failure::parse(e.to_string()))?;
                match instance {
                    AnyInstance::Rationals(i) => oracle_cmd(&i, cli.json),
                    AnyInstance::Prime(i) => oracle_cmd(&i, cli.json),
                }
            }
            (None, Some(count)) => oracle_random_cmd(count, effective_seed(cli.seed), cli.json),
            _ => Err(Failure::parse(
                "oracle needs an instance file or --random N",
            )),
        },
    }
}

fn check_cmd<F: Field>(c: &FilteredComplex<F>, json: bool) -> Result<i32, Failure> {
    let report = c.validate();
    if json {
        let violations: Vec<String> = report.violations.iter().map(|v| v.to_string()).collect();
        println!(
            "{}",
            json!({
                "schema": SCHEMA,
                "command": "check",
                "field": c.field().name(),
                "generators": c.n(),
                "valid": report.is_valid(),
                "violations": violations,
            })
        );
    } else if report.is_valid() {
        println!(
            "valid: {} generators over {}, boundary obeys the filtration and squares to zero",
            c.n(),
            c.field().name()
        );
    } else {
        println!("invalid: {}", report.first().expect("nonempty"));
        if report.violations.len() > 1 {
            println!("        ({} violations total)", report.violations.len());
        }
    }
    Ok(if report.is_valid() { EXIT_OK } else { EXIT_INVALID })
}

fn spectral_cmd<F: Field>(
    c: &FilteredComplex<F>,
    cycle: &str,
    precision: Option<Exponent>,
    trace: bool,
    json: bool,
) -> Result<i32, Failure> {
    let x = parse_vector(c.field(), cycle).map_err(|e| Failure::parse(format!("--cycle: {e}")))?;
    if x.len() != c.n() {
        return Err(Failure::parse(format!(
            "cycle has {} coordinates for {} generators",
            x.len(),
            c.n()
        )));
    }
    let precision = precision.unwrap_or_else(|| c.default_precision());
    let result = match c.spectral_number_at(&x, &precision) {
        Ok(r) => r,
        Err(SpectralError::NotACycle { row }) => {
            return Err(Failure {
                code: EXIT_INVALID,
                message: format!("not a cycle: boundary is nonzero in coordinate {row}"),
            })
        }
        Err(SpectralError::CycleUndecided { bound }) => {
            return Err(Failure {
                code: EXIT_PRECISION,
                message: format!("cycle status undecided at precision O(T^({bound}))"),
            })
        }
        Err(e) => return Err(Failure::parse(e.to_string())),
    };
    print_spectral(c, &result, trace, json);
    Ok(match result.status {
        SpectralStatus::Optimal => EXIT_OK,
        SpectralStatus::PrecisionExhausted => EXIT_PRECISION,
    })
}

fn print_spectral<F: Field>(
    c: &FilteredComplex<F>,
    r: &SpectralResult<F>,
    trace: bool,
    json: bool,
) {
    if json {
        let mut obj = json!({
            "schema": SCHEMA,
            "command": "spectral",
            "rho": rho_json(&r.rho),
            "status": match r.status {
                SpectralStatus::Optimal => "optimal",
                SpectralStatus::PrecisionExhausted => "precision_exhausted",
            },
            "distance": valuation_json(&r.distance),
            "gamma": r.gamma.to_string(),
            "boundary_depth": r.boundary_depth.to_string(),
            "precision": r.precision.to_string(),
            "spectrality": c.spectrality_check(r),
        });
        if let Some(alpha) = &r.representative {
            obj["representative"] = vector_json(alpha);
        }
        if let Some(w) = &r.witness {
            obj["witness"] = json!({
                "h": vector_json(&w.h),
                "level_h": level_json(&w.level_h),
                "allowed_level": w.allowed.as_ref().map(|e| e.to_string()),
                "verified_below": w.verified_below.as_ref().map(|e| e.to_string()),
            });
        }
        if trace {
            obj["trace"] = json!(r.trace.render());
        }
        println!("{obj}");
        return;
    }
    match &r.rho {
        Rho::Finite(e) => println!("rho = {e}"),
        Rho::MinusInfinity => println!("rho = -inf (the class vanishes)"),
        Rho::Unknown { at_most } => println!("rho undecided: <= {at_most} at this precision"),
    }
    println!(
        "status: {}",
        match r.status {
            SpectralStatus::Optimal => "optimal",
            SpectralStatus::PrecisionExhausted => "precision exhausted",
        }
    );
    if let Some(alpha) = &r.representative {
        println!("optimal representative: {alpha}");
        if c.spectrality_check(r) {
            println!("spectrality: rho lies in the action spectrum");
        }
    }
    if let Some(w) = &r.witness {
        println!("solving chain h = {}", w.h);
        let allowed = w
            .allowed
            .as_ref()
            .map(|e| e.to_string())
            .unwrap_or_else(|| "-inf".to_owned());
        println!("level(h) = {} <= level(cycle) + depth = {allowed}", w.level_h);
        match &w.verified_below {
            None => println!("certificate: boundary(h) equals the cycle exactly"),
            Some(level) => println!("certificate: boundary(h) matches the cycle below T^({level})"),
        }
    }
    println!("gamma = {}, boundary depth = {}", r.gamma, r.boundary_depth);
    if trace {
        print!("{}", r.trace.render());
    }
}

fn approx_cmd<F: Field>(
    matrix: &ValuedMatrix<F>,
    weights: &str,
    target: &str,
    precision: Option<Exponent>,
    trace: bool,
    json: bool,
) -> Result<i32, Failure> {
    let t = parse_weights(weights).map_err(|e| Failure::parse(format!("--weights: {e}")))?;
    let w = parse_vector(matrix.field(), target)
        .map_err(|e| Failure::parse(format!("--target: {e}")))?;
    if t.len() != matrix.rows() || w.len() != matrix.rows() {
        return Err(Failure::parse(format!(
            "matrix has {} rows, got {} weights and {} target entries",
            matrix.rows(),
            t.len(),
            w.len()
        )));
    }
    let precision = precision.unwrap_or_else(|| default_matrix_precision(matrix));
    let r = best_approx(matrix, &t, &w, &precision).map_err(|e| Failure::parse(e.to_string()))?;
    print_approx(&r, &precision, trace, json);
    Ok(match r.status {
        ApproxStatus::Optimal => EXIT_OK,
        ApproxStatus::PrecisionExhausted => EXIT_PRECISION,
    })
}

fn print_approx<F: Field>(r: &ApproxResult<F>, precision: &Exponent, trace: bool, json: bool) {
    if json {
        let mut obj = json!({
            "schema": SCHEMA,
            "command": "approx",
            "distance": valuation_json(&r.distance),
            "status": match r.status {
                ApproxStatus::Optimal => "optimal",
                ApproxStatus::PrecisionExhausted => "precision_exhausted",
            },
            "x0": vector_json(&r.x0),
            "residual": vector_json(&r.residual),
            "gamma": r.gamma.to_string(),
            "certificate": {
                "x0_valuation": valuation_json(&r.certificate.x0_valuation),
                "input_valuation": valuation_json(&r.certificate.input_valuation),
                "lower_bound": r.certificate.lower_bound.as_ref().map(|e| e.to_string()),
                "holds": r.certificate.holds,
            },
            "precision": precision.to_string(),
        });
        if trace {
            obj["trace"] = json!(r.trace.render());
        }
        println!("{obj}");
        return;
    }
    println!("distance exponent: {}", valuation_text(&r.distance));
    println!(
        "status: {}",
        match r.status {
            ApproxStatus::Optimal => "optimal",
            ApproxStatus::PrecisionExhausted => "precision exhausted",
        }
    );
    println!("x0 = {}", r.x0);
    println!("residual = {}", r.residual);
    println!(
        "gamma = {}; valuation bound {} (x0 valuation {})",
        r.gamma,
        if r.certificate.holds { "holds" } else { "FAILS" },
        match &r.certificate.x0_valuation {
            Valuation::Known(e) => e.to_string(),
            Valuation::Infinite => "+inf".to_owned(),
            Valuation::AtLeast(e) => format!(">= {e}"),
        }
    );
    if trace {
        print!("{}", r.trace.render());
    }
}

fn default_matrix_precision<F: Field>(m: &ValuedMatrix<F>) -> Exponent {
    let support = m.exponent_support();
    let spread = match (support.first(), support.last()) {
        (Some(lo), Some(hi)) => hi - lo,
        _ => Exponent::zero(),
    };
    let four = Exponent::from(4);
    Exponent::from_rational(
        four.as_rational() * spread.as_rational() + Exponent::one().as_rational(),
    )
}

fn basis_cmd<F: Field>(
    matrix: &ValuedMatrix<F>,
    weights: Option<&str>,
    precision: Option<Exponent>,
    json: bool,
) -> Result<i32, Failure> {
    let t = match weights {
        Some(s) => {
            let t = parse_weights(s).map_err(|e| Failure::parse(format!("--weights: {e}")))?;
            if t.len() != matrix.rows() {
                return Err(Failure::parse(format!(
                    "matrix has {} rows, got {} weights",
                    matrix.rows(),
                    t.len()
                )));
            }
            t
        }
        None => WeightVector::zero(matrix.rows()),
    };
    let rescaled = matrix.reweight_rows(&t);
    let precision = precision.unwrap_or_else(|| default_matrix_precision(&rescaled));
    let basis = adapted_basis(&rescaled, &precision).map_err(|e| Failure::parse(e.to_string()))?;
    if json {
        println!(
            "{}",
            json!({
                "schema": SCHEMA,
                "command": "basis",
                "size": basis.len(),
                "vectors": basis.vectors().iter().map(vector_json).collect::<Vec<_>>(),
                "preimages": basis.preimages().iter().map(vector_json).collect::<Vec<_>>(),
                "gamma": basis.gamma().to_string(),
                "unresolved_columns": basis.unresolved_columns(),
                "precision": precision.to_string(),
            })
        );
    } else {
        println!(
            "adapted basis of the image: {} generator(s), gamma = {}, precision O(T^({}))",
            basis.len(),
            basis.gamma(),
            precision
        );
        for (i, (u, x)) in basis.vectors().iter().zip(basis.preimages()).enumerate() {
            println!("  u_{i} = {u}");
            println!("    preimage {x}");
        }
        if basis.unresolved_columns() > 0 {
            println!(
                "  note: {} column(s) unresolved below the precision",
                basis.unresolved_columns()
            );
        }
    }
    Ok(if basis.unresolved_columns() == 0 {
        EXIT_OK
    } else {
        EXIT_PRECISION
    })
}

fn depth_cmd<F: Field>(
    c: &FilteredComplex<F>,
    precision: Option<Exponent>,
    json: bool,
) -> Result<i32, Failure> {
    let precision = precision.unwrap_or_else(|| c.default_precision());
    let depth = c
        .boundary_depth_at(&precision)
        .map_err(|e| Failure::parse(e.to_string()))?;
    if json {
        println!(
            "{}",
            json!({
                "schema": SCHEMA,
                "command": "depth",
                "boundary_depth": depth.to_string(),
                "precision": precision.to_string(),
            })
        );
    } else {
        println!("boundary depth M = {depth} (at precision O(T^({precision})))");
    }
    Ok(EXIT_OK)
}

fn rank_json(r: &RankResult) -> serde_json::Value {
    match r {
        RankResult::Known(n) => json!(n),
        RankResult::Undecided => json!("undecided"),
    }
}

fn rank_cmd<F: Field>(
    c: &FilteredComplex<F>,
    precision: Option<Exponent>,
    json: bool,
) -> Result<i32, Failure> {
    let precision = precision.unwrap_or_else(|| c.default_precision());
    let ranks = c.homology_rank(&precision);
    let undecided = matches!(ranks.total, RankResult::Undecided)
        || ranks
            .by_degree
            .as_ref()
            .is_some_and(|m| m.values().any(|r| matches!(r, RankResult::Undecided)));
    if json {
        println!(
            "{}",
            json!({
                "schema": SCHEMA,
                "command": "rank",
                "total": rank_json(&ranks.total),
                "by_degree": ranks.by_degree.as_ref().map(|m| {
                    m.iter()
                        .map(|(k, r)| (k.to_string(), rank_json(r)))
                        .collect::<serde_json::Map<_, _>>()
                }),
                "precision": precision.to_string(),
            })
        );
    } else {
        match &ranks.total {
            RankResult::Known(n) => println!("total homology rank: {n}"),
            RankResult::Undecided => println!("total homology rank: undecided at this precision"),
        }
        if let Some(by_degree) = &ranks.by_degree {
            let mut line = String::from("by degree:");
            for (k, r) in by_degree {
                match r {
                    RankResult::Known(n) => {
                        let _ = write!(line, " H_{k} = {n};");
                    }
                    RankResult::Undecided => {
                        let _ = write!(line, " H_{k} = undecided;");
                    }
                }
            }
            println!("{}", line.trim_end_matches(';'));
        }
    }
    Ok(if undecided { EXIT_PRECISION } else { EXIT_OK })
}

fn oracle_cmd<F: Field>(inst: &ParsedInstance<F>, json: bool) -> Result<i32, Failure> {
    let r = best_approx(&inst.matrix, &inst.weights, &inst.target, &inst.precision)
        .map_err(|e| Failure::parse(e.to_string()))?;
    let group = inst.period.value_group();
    let x_lo = inst.window_lo.clone().unwrap_or_else(|| {
        window_start(
            inst.target.weighted_valuation(&inst.weights).lower_bound(),
            &r.gamma,
            &group,
        )
    });
    let mut cfg = OracleConfig::new(group, x_lo, inst.precision.clone());
    if let Some(limit) = inst.max_leaves {
        cfg.max_leaves = limit;
    }
    let outcome = oracle_best_approx(&inst.matrix, &inst.weights, &inst.target, &cfg);
    report_cross_check(&r, outcome, &inst.precision, json)
}

fn distances_match<F: Field>(
    r: &ApproxResult<F>,
    outcome: &OracleOutcome,
    precision: &Exponent,
) -> bool {
    match (&r.distance, outcome) {
        (Valuation::Known(d), OracleOutcome::Finite(o)) => d == o && d < precision,
        (Valuation::Known(d), OracleOutcome::AtLeastCap) => d >= precision,
        (Valuation::AtLeast(b), OracleOutcome::AtLeastCap) => b >= precision,
        (Valuation::Infinite, OracleOutcome::AtLeastCap) => true,
        _ => false,
    }
}

fn report_cross_check<F: Field>(
    r: &ApproxResult<F>,
    outcome: Result<OracleOutcome, OracleError>,
    precision: &Exponent,
    json: bool,
) -> Result<i32, Failure> {
    let outcome = match outcome {
        Ok(o) => o,
        Err(OracleError::SearchSpaceTooLarge { leaves, guard }) => {
            return Err(Failure {
                code: EXIT_PRECISION,
                message: format!(
                    "oracle search space of {leaves:.3e} assignments exceeds the guard of {guard}"
                ),
            })
        }
        Err(e) => return Err(Failure::parse(e.to_string())),
    };
    let agree = distances_match(r, &outcome, precision);
    let oracle_text = match &outcome {
        OracleOutcome::Finite(e) => format!("{e}"),
        OracleOutcome::AtLeastCap => format!(">= {precision} (cap)"),
    };
    if json {
        println!(
            "{}",
            json!({
                "schema": SCHEMA,
                "command": "oracle",
                "reduction_distance": valuation_json(&r.distance),
                "oracle_distance": match &outcome {
                    OracleOutcome::Finite(e) => json!({ "known": e.to_string() }),
                    OracleOutcome::AtLeastCap => json!("at_least_cap"),
                },
                "agree": agree,
            })
        );
    } else {
        println!("reduction: {}", valuation_text(&r.distance));
        println!("oracle:    {oracle_text}");
        println!("agreement: {}", if agree { "yes" } else { "NO" });
    }
    Ok(if agree { EXIT_OK } else { EXIT_INVALID })
}

fn oracle_random_cmd(count: u64, seed: u64, json: bool) -> Result<i32, Failure> {
    use novikov_core::field::PrimeField;
    let gen = InstanceGenerator::new(seed);
    let mut checked = 0u64;
    let mut skipped = 0u64;
    let mut mismatches = 0u64;
    let mut index = 0u64;
    while checked < count && index < 20 * count.max(8) {
        let group = if index % 2 == 0 {
            ValueGroup::from_step(Exponent::one())
        } else {
            ValueGroup::from_step(Exponent::from_ratio(1, 2))
        };
        let field = if index % 3 == 0 { 3 } else { 2 };
        let inst = gen.approx_instance(PrimeField::new(field), index, group);
        index += 1;
        let r = best_approx(&inst.matrix, &inst.weights, &inst.target, &inst.precision)
            .map_err(|e| Failure::parse(e.to_string()))?;
        let x_lo = window_start(
            inst.target.weighted_valuation(&inst.weights).lower_bound(),
            &r.gamma,
            &inst.group,
        );
        let cfg = OracleConfig::new(inst.group.clone(), x_lo, inst.precision.clone());
        match oracle_best_approx(&inst.matrix, &inst.weights, &inst.target, &cfg) {
            Err(OracleError::SearchSpaceTooLarge { .. }) => skipped += 1,
            Err(e) => return Err(Failure::parse(e.to_string())),
            Ok(outcome) => {
                checked += 1;
                if !distances_match(&r, &outcome, &inst.precision) {
                    mismatches += 1;
                    eprintln!("mismatch at seed {seed} index {}", index - 1);
                }
            }
        }
    }
    if json {
        println!(
            "{}",
            json!({
                "schema": SCHEMA,
                "command": "oracle",
                "seed": seed,
                "checked": checked,
                "skipped": skipped,
                "mismatches": mismatches,
            })
        );
    } else {
        println!(
            "checked {checked} random instances (seed {seed}, {skipped} oversized skipped): \
             {mismatches} mismatches"
        );
    }
    Ok(if mismatches == 0 { EXIT_OK } else { EXIT_INVALID })
}
