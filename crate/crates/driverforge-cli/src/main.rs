//! Command-line front end: every library operation as a subcommand.
//!
//! Results go to standard output as a single JSON document; diagnostics and
//! progress notes go to standard error. Identical inputs produce
//! byte-identical output. Exit codes separate mathematical answers from
//! failures: 0 means a witness or term was found (or a checked property
//! holds), 3 means the run succeeded but nothing exists, 1 is a usage or
//! input error, and 2 is an internal invariant violation.

use std::fs;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;
use serde_json::json;

use driverforge::algebra::{DriverHamiltonian, TermFile};
use driverforge::feasibility::{
    build_transition_graph, enumerate_feasible_with_cap, FeasibleSpace,
};
use driverforge::model::{Constraint, ConstraintSet};
use driverforge::reductions::binary_lp::build_binary_lp;
use driverforge::reductions::oracles::{
    oracle_equal_subset_sum_with_cap, oracle_subset_sum_with_cap, oracle_two_or_more_with_cap,
};
use driverforge::reductions::{
    reduce_2om_to_nontrivial, reduce_ess_to_constraint, reduce_ss_to_2om, SubsetInstance,
};
use driverforge::search::{find_k_local_drivers, find_two_local_by_columns};
use driverforge::verify::matrix::{commutator, constraint_matrix, hamiltonian_matrix};
use driverforge::verify::{exact_commutator_is_zero_with_cap, has_offdiagonal_term};
use driverforge::{DEFAULT_ORACLE_CAP, DEFAULT_STATE_CAP, HARD_STATE_CAP};

const EXIT_WITNESS: u8 = 0;
const EXIT_USAGE: u8 = 1;
const EXIT_INTERNAL: u8 = 2;
const EXIT_NO_WITNESS: u8 = 3;

/// Largest site count for which the dense cross-check is allowed; the
/// matrices are 2^n by 2^n.
const DENSE_ORACLE_CAP: usize = 12;

#[derive(Parser)]
#[command(
    name = "driverforge",
    version,
    about = "Constructs and checks driver terms that commute with linear equality constraints"
)]
struct Cli {
    /// Worker threads for parallel sections (default: all cores).
    #[arg(long, global = true, value_name = "COUNT")]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate every commuting ladder term up to a weight bound.
    FindDrivers(FindDriversArgs),
    /// Check a term list against an instance, exactly.
    Verify(VerifyArgs),
    /// Report feasible-state count, motion, and connectivity under terms.
    Reach(ReachArgs),
    /// Rewrite a subset-sum style input into another problem form.
    #[command(subcommand)]
    Reduce(ReduceCommand),
    /// Answer a subset-sum question exhaustively on small inputs.
    #[command(subcommand)]
    Oracle(OracleCommand),
    /// Run a built-in worked example.
    #[command(subcommand)]
    Demo(DemoCommand),
}

#[derive(Args)]
struct FindDriversArgs {
    /// Instance file: {"n": ..., "constraints": [{"coeffs": [...], "value": ...}, ...]}.
    #[arg(long, value_name = "FILE")]
    instance: PathBuf,

    /// Largest ladder weight to enumerate.
    #[arg(long, value_name = "K")]
    max_weight: usize,

    /// Use column matching instead of enumeration; requires --max-weight 2.
    #[arg(long)]
    two_local_fast: bool,

    /// Also write the resulting term file here.
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Instance file.
    #[arg(long, value_name = "FILE")]
    instance: PathBuf,

    /// Term file: {"n": ..., "terms": [{"plus": [...], "minus": [...], ...}, ...]}.
    #[arg(long, value_name = "FILE")]
    terms: PathBuf,

    /// Site-count cap for the transition check (hard limit 28).
    #[arg(long, value_name = "N")]
    cap: Option<usize>,

    /// Cross-check against literal dense matrices (site count at most 12).
    #[arg(long)]
    dense_oracle: bool,
}

#[derive(Args)]
struct ReachArgs {
    /// Instance file.
    #[arg(long, value_name = "FILE")]
    instance: PathBuf,

    /// Term file.
    #[arg(long, value_name = "FILE")]
    terms: PathBuf,

    /// Replace the constraint right-hand sides, comma separated.
    #[arg(long, value_name = "B1,B2,...")]
    values: Option<String>,

    /// Site-count cap for state enumeration (hard limit 28).
    #[arg(long, value_name = "N")]
    cap: Option<usize>,
}

#[derive(Args)]
struct SubsetArgs {
    /// Subset file {"values": [...], "target": ...} or the same JSON inline.
    #[arg(long, value_name = "FILE|JSON")]
    input: String,
}

#[derive(Args)]
struct OracleArgs {
    /// Subset file {"values": [...], "target": ...} or the same JSON inline.
    #[arg(long, value_name = "FILE|JSON")]
    input: String,

    /// Largest value count the exhaustive scan accepts.
    #[arg(long, value_name = "N")]
    cap: Option<usize>,
}

#[derive(Subcommand)]
enum ReduceCommand {
    /// Equal-sum split question to a one-row integer constraint instance.
    #[command(name = "ess-to-ilp")]
    EssToIlp(SubsetArgs),
    /// Subset-sum question to a two-or-more-solutions question.
    #[command(name = "ss-to-2om")]
    SsTo2om(SubsetArgs),
    /// Two-or-more question to a nontrivial-feasible-space instance.
    #[command(name = "2om-to-nontrivial")]
    TwoOmToNontrivial(SubsetArgs),
    /// Equal-sum split question to a binary program with adder gadgets.
    #[command(name = "ess-to-binary-lp")]
    EssToBinaryLp(SubsetArgs),
}

#[derive(Subcommand)]
enum OracleCommand {
    /// Two disjoint subsets with equal sums, or null.
    #[command(name = "ess")]
    Ess(OracleArgs),
    /// A nonempty subset hitting the target, or null.
    #[command(name = "ss")]
    Ss(OracleArgs),
    /// Two distinct subsets hitting the target, or null.
    #[command(name = "2om")]
    TwoOm(OracleArgs),
}

#[derive(Subcommand)]
enum DemoCommand {
    /// Equal bipartition on a path: instance, drivers, connectivity.
    GraphPartition {
        /// Number of sites; must be even.
        #[arg(long, value_name = "SITES")]
        n: usize,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return ExitCode::SUCCESS;
            }
            eprint!("{e}");
            return ExitCode::from(EXIT_USAGE);
        }
    };
    if let Some(threads) = cli.threads {
        if threads == 0 {
            eprintln!("error: --threads must be positive");
            return ExitCode::from(EXIT_USAGE);
        }
        if rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .is_err()
        {
            eprintln!("warning: thread pool already initialized, --threads ignored");
        }
    }
    match catch_unwind(AssertUnwindSafe(|| run(cli.command))) {
        Ok(Ok(code)) => ExitCode::from(code),
        Ok(Err(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(_) => {
            eprintln!("error: internal invariant violated; this is a bug");
            ExitCode::from(EXIT_INTERNAL)
        }
    }
}

fn run(command: Command) -> Result<u8, String> {
    match command {
        Command::FindDrivers(args) => cmd_find_drivers(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Reach(args) => cmd_reach(args),
        Command::Reduce(command) => cmd_reduce(command),
        Command::Oracle(command) => cmd_oracle(command),
        Command::Demo(DemoCommand::GraphPartition { n }) => cmd_demo_graph_partition(n),
    }
}

fn load_instance(path: &Path) -> Result<ConstraintSet, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let cs = ConstraintSet::parse_instance(&text).map_err(|e| e.to_string())?;
    for (a, b) in cs.duplicate_row_pairs() {
        eprintln!("warning: constraint rows {a} and {b} are identical");
    }
    Ok(cs)
}

fn load_terms(path: &Path, n: usize) -> Result<TermFile, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let file = TermFile::parse(&text).map_err(|e| e.to_string())?;
    if file.n != n {
        return Err(format!(
            "the instance has {n} sites but the term file says {}",
            file.n
        ));
    }
    Ok(file)
}

/// Subset input is a file path, or the JSON document itself when it starts
/// with a brace.
fn load_subset(input: &str) -> Result<SubsetInstance, String> {
    let text = if input.trim_start().starts_with('{') {
        input.to_string()
    } else {
        fs::read_to_string(input).map_err(|e| format!("{input}: {e}"))?
    };
    SubsetInstance::parse(&text).map_err(|e| e.to_string())
}

fn env_cap() -> Result<Option<usize>, String> {
    match std::env::var("DRIVERFORGE_CAP") {
        Ok(text) => text
            .trim()
            .parse::<usize>()
            .map(Some)
            .map_err(|_| format!("DRIVERFORGE_CAP must be a positive integer, got {text:?}")),
        Err(std::env::VarError::NotPresent) => Ok(None),
        Err(e) => Err(format!("DRIVERFORGE_CAP: {e}")),
    }
}

/// Flag beats environment beats default; site-count caps also respect the
/// hard limit.
fn state_cap(flag: Option<usize>) -> Result<usize, String> {
    let cap = match flag {
        Some(cap) => cap,
        None => env_cap()?.unwrap_or(DEFAULT_STATE_CAP),
    };
    if cap == 0 {
        return Err("the cap must be positive".to_string());
    }
    if cap > HARD_STATE_CAP {
        return Err(format!("cap {cap} exceeds the hard limit {HARD_STATE_CAP}"));
    }
    Ok(cap)
}

fn oracle_cap(flag: Option<usize>) -> Result<usize, String> {
    let cap = match flag {
        Some(cap) => cap,
        None => env_cap()?.unwrap_or(DEFAULT_ORACLE_CAP),
    };
    if cap == 0 {
        return Err("the cap must be positive".to_string());
    }
    Ok(cap)
}

fn big_number(value: &BigInt) -> serde_json::Number {
    serde_json::Number::from_str(&value.to_string())
        .expect("an integer in decimal notation parses as a JSON number")
}

fn print_document(value: &serde_json::Value) {
    println!("{value}");
}

fn cmd_find_drivers(args: FindDriversArgs) -> Result<u8, String> {
    let cs = load_instance(&args.instance)?;
    let report = if args.two_local_fast {
        if args.max_weight != 2 {
            return Err("column matching fixes the weight at 2; use --max-weight 2".to_string());
        }
        find_two_local_by_columns(&cs)
    } else {
        find_k_local_drivers(&cs, args.max_weight).map_err(|e| e.to_string())?
    };
    eprintln!(
        "checked {} candidates in {:?}, kept {}",
        report.candidates_checked,
        report.elapsed,
        report.terms.len()
    );
    let file = TermFile {
        n: cs.n(),
        terms: report.terms,
    };
    let rendered = file.to_json_string();
    if let Some(out) = &args.out {
        fs::write(out, format!("{rendered}\n")).map_err(|e| format!("{}: {e}", out.display()))?;
    }
    println!("{rendered}");
    Ok(if file.terms.is_empty() {
        EXIT_NO_WITNESS
    } else {
        EXIT_WITNESS
    })
}

fn cmd_verify(args: VerifyArgs) -> Result<u8, String> {
    let cs = load_instance(&args.instance)?;
    let file = load_terms(&args.terms, cs.n())?;
    let cap = state_cap(args.cap)?;
    let h = DriverHamiltonian::new(file.n, file.terms).map_err(|e| e.to_string())?;
    let check = exact_commutator_is_zero_with_cap(&h, &cs, cap).map_err(|e| e.to_string())?;
    let offdiagonal = has_offdiagonal_term(&h);
    if args.dense_oracle {
        if cs.n() > DENSE_ORACLE_CAP {
            return Err(format!(
                "--dense-oracle materializes 2^n by 2^n matrices and allows n up to {DENSE_ORACLE_CAP}, got {}",
                cs.n()
            ));
        }
        let hm = hamiltonian_matrix(&h);
        let dense_commutes = cs
            .constraints()
            .iter()
            .all(|row| commutator(&hm, &constraint_matrix(row, cs.n())).is_zero());
        assert_eq!(
            dense_commutes, check.commutes,
            "dense commutator disagrees with the transition check"
        );
        assert_eq!(
            hm.has_offdiagonal_entry(),
            offdiagonal,
            "dense off-diagonal scan disagrees with the term scan"
        );
        eprintln!("dense oracle agrees");
    }
    let counterexample = match &check.counterexample {
        None => serde_json::Value::Null,
        Some(ce) => json!({
            "term_index": ce.term_index,
            "row_index": ce.row_index,
            "source": ce.source,
            "target": ce.target,
            "source_eigenvalue": big_number(&ce.source_eigenvalue),
            "target_eigenvalue": big_number(&ce.target_eigenvalue),
        }),
    };
    print_document(&json!({
        "commutes": check.commutes,
        "offdiagonal": offdiagonal,
        "counterexample": counterexample,
    }));
    Ok(if check.commutes {
        EXIT_WITNESS
    } else {
        EXIT_NO_WITNESS
    })
}

fn replace_values(cs: ConstraintSet, list: &str) -> Result<ConstraintSet, String> {
    let values: Vec<BigInt> = list
        .split(',')
        .map(|part| {
            BigInt::from_str(part.trim()).map_err(|_| format!("--values: not an integer: {part:?}"))
        })
        .collect::<Result<_, _>>()?;
    if values.len() != cs.constraints().len() {
        return Err(format!(
            "--values lists {} entries but the instance has {} rows",
            values.len(),
            cs.constraints().len()
        ));
    }
    let rows = cs
        .constraints()
        .iter()
        .zip(values)
        .map(|(row, value)| Constraint {
            coeffs: row.coeffs.clone(),
            value,
        })
        .collect();
    ConstraintSet::new(cs.n(), rows, Some(cs.domain_tag())).map_err(|e| e.to_string())
}

fn reachability_value(graph: &FeasibleSpace) -> Result<serde_json::Value, String> {
    let connectivity = graph.connectivity().map_err(|e| e.to_string())?;
    let nontrivial = graph.is_nontrivial().map_err(|e| e.to_string())?;
    Ok(json!({
        "feasible_count": graph.state_count(),
        "nontrivial": nontrivial,
        "connected": connectivity.connected,
        "components": connectivity.component_sizes,
    }))
}

fn cmd_reach(args: ReachArgs) -> Result<u8, String> {
    let mut cs = load_instance(&args.instance)?;
    let file = load_terms(&args.terms, cs.n())?;
    if let Some(list) = &args.values {
        cs = replace_values(cs, list)?;
    }
    let cap = state_cap(args.cap)?;
    let space = enumerate_feasible_with_cap(&cs, cap).map_err(|e| e.to_string())?;
    let graph = build_transition_graph(space, &file.terms).map_err(|e| e.to_string())?;
    print_document(&reachability_value(&graph)?);
    Ok(if graph.state_count() > 0 {
        EXIT_WITNESS
    } else {
        EXIT_NO_WITNESS
    })
}

fn cmd_reduce(command: ReduceCommand) -> Result<u8, String> {
    let document = match command {
        ReduceCommand::EssToIlp(args) => {
            let inst = load_subset(&args.input)?;
            reduce_ess_to_constraint(&inst).to_json_value()
        }
        ReduceCommand::SsTo2om(args) => {
            let inst = load_subset(&args.input)?;
            let reduction = reduce_ss_to_2om(&inst).map_err(|e| e.to_string())?;
            let mut value = reduction.instance.to_json_value();
            value["appended_index"] = json!(reduction.appended_index);
            value
        }
        ReduceCommand::TwoOmToNontrivial(args) => {
            let inst = load_subset(&args.input)?;
            let reduction = reduce_2om_to_nontrivial(&inst).map_err(|e| e.to_string())?;
            json!({
                "constraint_set": reduction.constraint_set.to_json_value(),
                "spin_eigenvalue": big_number(&reduction.spin_eigenvalue),
            })
        }
        ReduceCommand::EssToBinaryLp(args) => {
            let inst = load_subset(&args.input)?;
            let layout = build_binary_lp(&inst).map_err(|e| e.to_string())?;
            eprintln!(
                "layout: adders={} layers={} columns={}",
                layout.adders().len(),
                layout.layer_count(),
                layout.column_count()
            );
            layout.to_json_value()
        }
    };
    print_document(&document);
    Ok(EXIT_WITNESS)
}

fn index_list(indices: &[usize]) -> serde_json::Value {
    json!(indices)
}

fn cmd_oracle(command: OracleCommand) -> Result<u8, String> {
    let (witness, document) = match command {
        OracleCommand::Ess(args) => {
            let inst = load_subset(&args.input)?;
            let cap = oracle_cap(args.cap)?;
            let answer = oracle_equal_subset_sum_with_cap(&inst, cap).map_err(|e| e.to_string())?;
            let value = match &answer {
                None => serde_json::Value::Null,
                Some((plus, minus)) => json!({
                    "plus": index_list(plus),
                    "minus": index_list(minus),
                }),
            };
            (answer.is_some(), json!({ "witness": value }))
        }
        OracleCommand::Ss(args) => {
            let inst = load_subset(&args.input)?;
            let cap = oracle_cap(args.cap)?;
            let answer = oracle_subset_sum_with_cap(&inst, cap).map_err(|e| e.to_string())?;
            let value = match &answer {
                None => serde_json::Value::Null,
                Some(chosen) => index_list(chosen),
            };
            (answer.is_some(), json!({ "witness": value }))
        }
        OracleCommand::TwoOm(args) => {
            let inst = load_subset(&args.input)?;
            let cap = oracle_cap(args.cap)?;
            let answer = oracle_two_or_more_with_cap(&inst, cap).map_err(|e| e.to_string())?;
            let value = match &answer {
                None => serde_json::Value::Null,
                Some((first, second)) => json!({
                    "first": index_list(first),
                    "second": index_list(second),
                }),
            };
            (answer.is_some(), json!({ "witness": value }))
        }
    };
    print_document(&document);
    Ok(if witness {
        EXIT_WITNESS
    } else {
        EXIT_NO_WITNESS
    })
}

fn cmd_demo_graph_partition(n: usize) -> Result<u8, String> {
    if n < 2 || !n.is_multiple_of(2) {
        return Err("the partition demo needs an even site count of at least 2".to_string());
    }
    let coeffs = vec![BigInt::from(1); n];
    let row = Constraint {
        coeffs,
        value: BigInt::from(n as u64 / 2),
    };
    let cs = ConstraintSet::new(n, vec![row], None).map_err(|e| e.to_string())?;
    let report = find_k_local_drivers(&cs, 2).map_err(|e| e.to_string())?;
    eprintln!(
        "checked {} candidates in {:?}, kept {}",
        report.candidates_checked,
        report.elapsed,
        report.terms.len()
    );
    let cap = state_cap(None)?;
    let space = enumerate_feasible_with_cap(&cs, cap).map_err(|e| e.to_string())?;
    let graph = build_transition_graph(space, &report.terms).map_err(|e| e.to_string())?;
    let file = TermFile {
        n,
        terms: report.terms,
    };
    print_document(&json!({
        "instance": cs.to_json_value(),
        "terms": file.to_json_value(),
        "reachability": reachability_value(&graph)?,
    }));
    Ok(EXIT_WITNESS)
}
