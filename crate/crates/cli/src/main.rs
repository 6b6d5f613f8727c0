use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use ndt_core::instances::{parse_edge_list, write_edge_list, ResultFile};
use ndt_core::{
    compute_params, decompose, fractional_arboricity, generate, verify_partition, DecomposeOptions, DensityCertificate,
    Family, GenSpec, MultiGraph, Outcome, Params, PipelineError, SolverOptions,
};

mod selftest;

const EXIT_OK: u8 = 0;
const EXIT_PARSE: u8 = 1;
const EXIT_DENSE: u8 = 2;
const EXIT_INTERNAL: u8 = 3;

/// Splits a multigraph into k spanning forests plus one forest with small
/// components, or reports a subgraph that is too dense.
#[derive(Parser)]
#[command(name = "ndt", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decompose an edge-list graph and write the result JSON.
    Decompose(DecomposeArgs),
    /// Print the exact fractional arboricity and a densest vertex set.
    Gamma(InputArgs),
    /// Check a result JSON against its graph.
    Verify(VerifyArgs),
    /// Write a generated instance as an edge list.
    Gen(GenArgs),
    /// Compare the library against brute-force oracles on small graphs.
    Selftest(SelftestArgs),
}

#[derive(Args)]
struct InputArgs {
    /// edge-list file; stdin when absent
    #[arg(long)]
    input: Option<PathBuf>,
}

#[derive(Args)]
struct DecomposeArgs {
    #[arg(long)]
    k: usize,
    #[arg(long)]
    d: usize,
    #[command(flatten)]
    input: InputArgs,
    /// result file; stdout when absent
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long)]
    max_iters: Option<usize>,
    /// run every post-mutation check (default)
    #[arg(long, overrides_with = "fast")]
    checked: bool,
    /// skip post-mutation checks
    #[arg(long, overrides_with = "checked")]
    fast: bool,
    /// write one line per solver move
    #[arg(long)]
    trace: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    input: InputArgs,
    /// result JSON written by `decompose`
    #[arg(long)]
    result: PathBuf,
    /// needed for certificates; forest results carry their own
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    d: Option<usize>,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, value_parser = parse_family)]
    family: Family,
    #[arg(long, default_value_t = 10)]
    n: usize,
    #[arg(long, default_value_t = 15)]
    m: usize,
    #[arg(long, default_value_t = 1)]
    k: usize,
    #[arg(long, default_value_t = 1)]
    d: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct SelftestArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// graphs per suite
    #[arg(long, default_value_t = 200)]
    count: usize,
}

fn parse_family(s: &str) -> Result<Family, String> {
    s.parse()
}

/// Message plus exit status.
struct Failure(u8, String);

impl Failure {
    fn parse(msg: impl ToString) -> Self {
        Failure(EXIT_PARSE, msg.to_string())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_PARSE } else { EXIT_OK });
        }
    };
    let result = match cli.command {
        Command::Decompose(a) => run_decompose(a),
        Command::Gamma(a) => run_gamma(a),
        Command::Verify(a) => run_verify(a),
        Command::Gen(a) => run_gen(a),
        Command::Selftest(a) => selftest::run(a.seed, a.count),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(Failure(code, msg)) => {
            eprintln!("ndt: {msg}");
            ExitCode::from(code)
        }
    }
}

fn read_input(path: Option<&Path>) -> Result<String, Failure> {
    match path {
        Some(p) => fs::read_to_string(p).map_err(|e| Failure::parse(format!("{}: {e}", p.display()))),
        None => {
            let mut s = String::new();
            io::stdin().read_to_string(&mut s).map_err(Failure::parse)?;
            Ok(s)
        }
    }
}

fn read_graph(args: &InputArgs) -> Result<MultiGraph, Failure> {
    parse_edge_list(&read_input(args.input.as_deref())?).map_err(Failure::parse)
}

fn write_output(path: Option<&Path>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Failure(EXIT_INTERNAL, format!("{}: {e}", p.display()))),
        None => io::stdout().write_all(text.as_bytes()).map_err(|e| Failure(EXIT_INTERNAL, e.to_string())),
    }
}

fn params(k: usize, d: usize) -> Result<Params, Failure> {
    compute_params(k, d).map_err(Failure::parse)
}

fn run_decompose(a: DecomposeArgs) -> Result<u8, Failure> {
    let p = params(a.k, a.d)?;
    let g = read_graph(&a.input)?;
    let opts = DecomposeOptions { solver: SolverOptions { max_iters: a.max_iters, checked: !a.fast } };
    let report = decompose(&g, &p, &opts).map_err(internal)?;
    if let Some(path) = &a.trace {
        let lines: String = report.trace.iter().map(|t| format!("{t}\n")).collect();
        write_output(Some(path), &lines)?;
    }
    write_output(a.output.as_deref(), &(ResultFile::from_outcome(&report.outcome).to_json() + "\n"))?;
    Ok(match report.outcome {
        Outcome::Forests(_) => EXIT_OK,
        Outcome::Dense(_) => EXIT_DENSE,
    })
}

fn internal(e: PipelineError) -> Failure {
    Failure(EXIT_INTERNAL, format!("internal check failed: {e}"))
}

fn run_gamma(a: InputArgs) -> Result<u8, Failure> {
    let g = read_graph(&a)?;
    let (gamma, w) = fractional_arboricity(&g).map_err(Failure::parse)?;
    let vs: Vec<String> = w.vertices.iter().map(usize::to_string).collect();
    println!("{}/{}", gamma.numer(), gamma.denom());
    println!("{}", vs.join(" "));
    Ok(EXIT_OK)
}

fn run_verify(a: VerifyArgs) -> Result<u8, Failure> {
    let g = read_graph(&a.input)?;
    let text = fs::read_to_string(&a.result).map_err(|e| Failure::parse(format!("{}: {e}", a.result.display())))?;
    let result = ResultFile::parse(&text).map_err(Failure::parse)?;
    match result {
        ResultFile::Forests { k, d, d_prime, forests, special_forest_index } => {
            let p = params(k, d)?;
            if a.k.is_some_and(|x| x != k) || a.d.is_some_and(|x| x != d) {
                return Err(Failure::parse("--k/--d disagree with the result file"));
            }
            if d_prime != p.d_prime {
                return Err(Failure(EXIT_INTERNAL, format!("d_prime {d_prime} should be {}", p.d_prime)));
            }
            let report = verify_partition(&g, &p, &forests, special_forest_index);
            if report.is_valid() {
                println!("ok: {} forests, special forest {special_forest_index}", forests.len());
                Ok(EXIT_OK)
            } else {
                print!("{report}");
                Err(Failure(EXIT_INTERNAL, format!("{} violations", report.violations.len())))
            }
        }
        ResultFile::Certificate { certificate } => {
            let (Some(k), Some(d)) = (a.k, a.d) else {
                return Err(Failure::parse("certificates need --k and --d"));
            };
            let p = params(k, d)?;
            match DensityCertificate::new(&g, &p, certificate.vertices) {
                Some(c) if c.verify(&g, &p) => {
                    println!("ok: {} edges on {} vertices exceed {}", c.edge_count, c.vertices.len(), p.threshold());
                    Ok(EXIT_OK)
                }
                _ => Err(Failure(EXIT_INTERNAL, "certificate is not denser than the threshold".into())),
            }
        }
    }
}

fn run_gen(a: GenArgs) -> Result<u8, Failure> {
    let spec = GenSpec { family: a.family, n: a.n, m: a.m, k: a.k, d: a.d, seed: a.seed };
    let g = generate(&spec).map_err(Failure::parse)?;
    write_output(a.output.as_deref(), &write_edge_list(&g))?;
    Ok(EXIT_OK)
}
