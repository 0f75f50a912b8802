//! `msk` — plan, validate, and benchmark mapping schemas.
//!
//! Exit codes: 0 success/feasible, 1 I/O or parse or inapplicable
//! strategy, 2 infeasible instance (or oracle budget exhausted), 3
//! validation failure, 64 usage error.

mod files;

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use files::{read_json, report_for, write_json, InstanceFile, SchemaFile};
use msk_core::approx::{self, StrategyChoice};
use msk_core::oracle::{self, PartitionInstance};
use msk_core::{bounds, schema, Error, Instance, MappingSchema};

const EXIT_OK: i32 = 0;
const EXIT_FAILURE: i32 = 1;
const EXIT_INFEASIBLE: i32 = 2;
const EXIT_INVALID: i32 = 3;
const EXIT_USAGE: i32 = 64;

#[derive(Parser)]
#[command(
    name = "msk",
    about = "Mapping-schema planner and validator",
    disable_help_flag = false
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Construct a schema for an instance and report its cost.
    Solve(SolveArgs),
    /// Check a schema file against an instance file.
    Validate { instance: PathBuf, schema: PathBuf },
    /// Print the lower bounds applicable to an instance.
    Bounds { instance: PathBuf },
    /// Exhaustively search for an optimal schema (tiny instances only).
    Oracle {
        instance: PathBuf,
        #[arg(long, default_value_t = 16)]
        max_reducers: usize,
    },
    /// Generate a hardness-reduction instance from partition numbers.
    Gen(GenArgs),
}

#[derive(Args)]
struct SolveArgs {
    instance: PathBuf,
    /// auto, binpack, alg1a, alg1b, alg2, alg3, alg4, big, au, q2, q3, x2y
    #[arg(long, default_value = "auto")]
    strategy: String,
    /// Bin divisor for alg1a/alg1b.
    #[arg(long)]
    k: Option<u64>,
    /// Tree depth for alg3 (inferred from m when omitted).
    #[arg(long)]
    l: Option<u32>,
    /// Write the schema file here.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct GenArgs {
    /// a2a or x2y
    #[arg(long)]
    reduction: String,
    /// Comma-separated positive integers.
    #[arg(long, value_delimiter = ',', required = true)]
    numbers: Vec<u64>,
    /// Reducer budget for the reduction.
    #[arg(long)]
    z: usize,
    /// Write the instance file here.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version requests are not usage errors.
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    let code = match cli.command {
        Command::Solve(args) => cmd_solve(args),
        Command::Validate { instance, schema } => cmd_validate(&instance, &schema),
        Command::Bounds { instance } => cmd_bounds(&instance),
        Command::Oracle {
            instance,
            max_reducers,
        } => cmd_oracle(&instance, max_reducers),
        Command::Gen(args) => cmd_gen(args),
    };
    std::process::exit(code);
}

fn load_instance(path: &Path) -> Result<Instance, String> {
    read_json::<InstanceFile>(path)?.to_instance()
}

fn fail(message: &str) -> i32 {
    eprintln!("error: {message}");
    EXIT_FAILURE
}

/// Map a strategy name plus flags onto a concrete choice, deriving the
/// parameters the instance determines (alg2's prime split, alg3's depth).
fn resolve_strategy(
    args: &SolveArgs,
    instance: &Instance,
) -> Result<StrategyChoice, (i32, String)> {
    let q = instance.capacity();
    let m = instance.len();
    let usage = |msg: String| (EXIT_USAGE, msg);
    match args.strategy.as_str() {
        "auto" => approx::auto_select(instance).map_err(classify_strategy_error),
        "binpack" => Ok(StrategyChoice::BinPackPairs),
        "alg1a" => {
            let k = args
                .k
                .ok_or_else(|| usage("alg1a needs --k (odd, > 3, dividing q)".into()))?;
            Ok(StrategyChoice::Alg1A { k })
        }
        "alg1b" => {
            let k = args
                .k
                .ok_or_else(|| usage("alg1b needs --k (even, >= 4, dividing q)".into()))?;
            Ok(StrategyChoice::Alg1B { k })
        }
        "alg2" => {
            let d = approx::nearest_prime_decomposition(q, m)
                .map_err(|e| (EXIT_FAILURE, e.to_string()))?;
            Ok(StrategyChoice::Alg2 { p: d.p, l: d.l })
        }
        "alg3" => {
            let l = match args.l {
                Some(l) => l,
                None => infer_depth(q, m).ok_or((
                    EXIT_FAILURE,
                    format!("cannot infer l with q={q}, m={m}; pass --l"),
                ))?,
            };
            Ok(StrategyChoice::Alg3 { q, l })
        }
        "alg4" => Ok(StrategyChoice::Alg4),
        "big" => Ok(StrategyChoice::BigInput),
        "au" => Ok(StrategyChoice::Au),
        "q2" => Ok(StrategyChoice::SchemaQ2),
        "q3" => Ok(StrategyChoice::SchemaQ3),
        "x2y" => Ok(StrategyChoice::X2Y),
        other => Err(usage(format!("unknown strategy `{other}`"))),
    }
}

/// Smallest l > 2 with q^l >= m.
fn infer_depth(q: u64, m: usize) -> Option<u32> {
    if q < 2 {
        return None;
    }
    let mut value: u128 = u128::from(q).pow(3);
    let mut l = 3u32;
    while value < m as u128 {
        value = value.checked_mul(u128::from(q))?;
        l += 1;
    }
    Some(l)
}

fn classify_strategy_error(e: Error) -> (i32, String) {
    match e {
        Error::Infeasible(msg) => (EXIT_INFEASIBLE, format!("infeasible: {msg}")),
        other => (EXIT_FAILURE, other.to_string()),
    }
}

fn cmd_solve(args: SolveArgs) -> i32 {
    let instance = match load_instance(&args.instance) {
        Ok(i) => i,
        Err(e) => return fail(&e),
    };
    if !instance.is_pairable() {
        eprintln!("infeasible: a required pair of inputs exceeds the capacity together");
        return EXIT_INFEASIBLE;
    }
    let choice = match resolve_strategy(&args, &instance) {
        Ok(c) => c,
        Err((code, msg)) => {
            eprintln!("error: {msg}");
            return code;
        }
    };
    let schema = match approx::apply(&instance, choice) {
        Ok(s) => s,
        Err(Error::Infeasible(msg)) => {
            eprintln!("infeasible: {msg}");
            return EXIT_INFEASIBLE;
        }
        Err(e) => return fail(&e.to_string()),
    };
    let report = match report_for(&schema, &instance) {
        Ok(r) => r,
        Err(e) => return fail(&e),
    };
    let validation = match schema::validate(&schema, &instance) {
        Ok(v) => v,
        Err(e) => return fail(&e.to_string()),
    };
    let ratio = report
        .cost_ratio
        .map(|r| format!("{:.3}", *r.numer() as f64 / *r.denom() as f64))
        .unwrap_or_else(|| "-".into());
    println!(
        "strategy={choice} reducers={} cost={} lower_bound_cost={} lower_bound_reducers={} ratio={ratio} feasible={}",
        report.reducer_count,
        report.communication_cost,
        report.lower_bound_cost,
        report.lower_bound_reducers,
        validation.feasible(),
    );
    if let Some(out) = &args.out {
        let file = match SchemaFile::from_schema(&schema, &instance, &report) {
            Ok(f) => f,
            Err(e) => return fail(&e),
        };
        if let Err(e) = write_json(out, &file) {
            return fail(&e);
        }
    }
    if validation.feasible() {
        EXIT_OK
    } else {
        eprintln!("infeasible: the generated schema does not cover the instance");
        EXIT_INFEASIBLE
    }
}

fn cmd_validate(instance_path: &Path, schema_path: &Path) -> i32 {
    let instance = match load_instance(instance_path) {
        Ok(i) => i,
        Err(e) => return fail(&e),
    };
    let schema_file: SchemaFile = match read_json(schema_path) {
        Ok(f) => f,
        Err(e) => return fail(&e),
    };
    let schema: MappingSchema = match schema_file.to_schema(&instance) {
        Ok(s) => s,
        Err(e) => return fail(&e),
    };
    let report = match schema::validate(&schema, &instance) {
        Ok(r) => r,
        Err(e) => return fail(&e.to_string()),
    };
    if report.feasible() {
        println!(
            "feasible: {} reducers cover all required pairs",
            schema.reducer_count()
        );
        return EXIT_OK;
    }
    for (a, b) in &report.uncovered_pairs {
        println!("uncovered pair: {a} {b}");
    }
    for (reducer, load) in &report.capacity_violations {
        println!(
            "over capacity: reducer {reducer} load {load} > {}",
            instance.capacity()
        );
    }
    EXIT_INVALID
}

fn cmd_bounds(instance_path: &Path) -> i32 {
    let instance = match load_instance(instance_path) {
        Ok(i) => i,
        Err(e) => return fail(&e),
    };
    let pair = match schema::applicable_lower_bounds(&instance) {
        Ok(p) => p,
        Err(e) => return fail(&e.to_string()),
    };
    println!("problem          {}", instance.kind().as_str());
    println!("inputs           {}", instance.len());
    println!("capacity         {}", instance.capacity());
    match instance.kind() {
        msk_core::ProblemKind::A2A => {
            println!("total_size       {}", instance.total_size());
        }
        msk_core::ProblemKind::X2Y => {
            println!("sum_x            {}", instance.sum_x());
            println!("sum_y            {}", instance.sum_y());
        }
    }
    println!(
        "cost_bound       {} (raw {})",
        pair.cost_bound, pair.raw_cost
    );
    println!(
        "reducer_bound    {} (raw {})",
        pair.reducer_bound, pair.raw_reducers
    );
    if instance.kind() == msk_core::ProblemKind::A2A {
        let q = instance.capacity();
        let s = instance.total_size();
        for k in 2..=q.min(8) {
            if q % k == 0 {
                if let Ok(bound) = bounds::lb_a2a_binned(s, q, k) {
                    println!("binned_cost(k={k}) {bound}");
                }
            }
        }
        if instance.is_unit() && q >= 2 {
            if let Ok(unit) = bounds::lb_a2a_unit(instance.len() as u64, q) {
                println!("unit_cost_bound  {}", unit.cost_bound);
                println!("unit_reducer_bound {}", unit.reducer_bound);
            }
        }
    }
    EXIT_OK
}

fn cmd_oracle(instance_path: &Path, max_reducers: usize) -> i32 {
    let instance = match load_instance(instance_path) {
        Ok(i) => i,
        Err(e) => return fail(&e),
    };
    let result = match instance.kind() {
        msk_core::ProblemKind::A2A => oracle::brute_force_a2a(&instance, max_reducers),
        msk_core::ProblemKind::X2Y => oracle::brute_force_x2y(&instance, max_reducers),
    };
    let result = match result {
        Ok(r) => r,
        Err(e) => return fail(&e.to_string()),
    };
    match result.best {
        Some(best) => {
            println!(
                "optimal_reducers={} optimal_cost={} exhausted=false",
                best.reducer_count, best.communication_cost
            );
            for r in best.witness.reducers() {
                let ids: Vec<&str> = r.assigned().iter().map(|i| i.as_str()).collect();
                println!("reducer {}: {}", r.id(), ids.join(" "));
            }
            EXIT_OK
        }
        None => {
            println!("exhausted=true max_reducers={max_reducers}");
            eprintln!("infeasible: no schema within {max_reducers} reducers");
            EXIT_INFEASIBLE
        }
    }
}

fn cmd_gen(args: GenArgs) -> i32 {
    let numbers = match PartitionInstance::new(args.numbers.clone()) {
        Ok(p) => p,
        Err(e) => return fail(&e.to_string()),
    };
    let reduction = match args.reduction.as_str() {
        "a2a" => oracle::partition_to_a2a(&numbers, args.z),
        "x2y" => oracle::partition_to_x2y(&numbers, args.z),
        other => {
            eprintln!("error: unknown reduction `{other}` (expected a2a or x2y)");
            return EXIT_USAGE;
        }
    };
    let reduction = match reduction {
        Ok(r) => r,
        Err(e) => return fail(&e.to_string()),
    };
    let mut file = InstanceFile::from_instance(&reduction.instance);
    file.reducer_budget = Some(reduction.reducer_budget);
    file.trivially_no = Some(reduction.trivially_no);
    println!(
        "reduction={} z={} inputs={} capacity={} trivially_no={}",
        args.reduction,
        reduction.reducer_budget,
        reduction.instance.len(),
        reduction.instance.capacity(),
        reduction.trivially_no
    );
    if let Some(out) = &args.out {
        if let Err(e) = write_json(out, &file) {
            return fail(&e);
        }
    } else if let Ok(text) = serde_json::to_string_pretty(&file) {
        println!("{text}");
    }
    EXIT_OK
}
