//! `rsnd`: solve, verify and benchmark relative fault-tolerant network design instances.
//!
//! Exit codes: 0 success, 1 malformed input or usage, 2 instance incompatible with the
//! algorithm, 3 solution infeasible, 4 oracle budget exceeded.

mod io;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rsnd_core::rounding::{kefts_unweighted, kefts_weighted, violated_kefts_cut};
use rsnd_core::rsnd::{rsnd2, rsnd3_single};
use rsnd_core::verify::{
    exact_opt, gen_random, verify_rsnd_with_budget, DemandSpec, GenParams, Requirement, WeightSpec,
    DEFAULT_FAULT_BUDGET, DEFAULT_OPT_BUDGET,
};
use rsnd_core::{Error, Rational};
use serde_json::json;

use io::{read_json, write_json, InstanceFile, SolutionFile};

#[derive(Debug)]
pub enum CliError {
    Input(String),
    Core(Error),
    Infeasible(serde_json::Value),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) => 1,
            CliError::Core(Error::InternalLogic(_)) => 1,
            CliError::Core(Error::Resource(_)) => 4,
            CliError::Core(_) => 2,
            CliError::Infeasible(_) => 3,
        }
    }
}

#[derive(Parser)]
#[command(name = "rsnd", version, about = "Relative fault-tolerant network design solvers and oracles")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Alg {
    KeftsWeighted,
    KeftsUnweighted,
    Rsnd2,
    Rsnd3Single,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    FaultEnum,
    CutOracle,
}

#[derive(Subcommand)]
enum Command {
    /// Run an algorithm and write a solution file.
    Solve {
        #[arg(long, value_enum)]
        alg: Alg,
        /// Fault-tolerance level for the k-EFTS algorithms.
        #[arg(long)]
        k: Option<u32>,
        #[arg(long = "in")]
        input: PathBuf,
        /// Defaults to stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a solution; exit 3 with the violation if it is infeasible.
    Verify {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        solution: PathBuf,
        #[arg(long, value_enum, default_value = "fault-enum")]
        mode: Mode,
        /// Check the all-pairs requirement with this k instead of the file's demands.
        #[arg(long)]
        k: Option<u32>,
        /// Maximum number of fault sets to enumerate.
        #[arg(long, default_value_t = DEFAULT_FAULT_BUDGET)]
        budget: u64,
    },
    /// Exact optimum by exhaustive search.
    Oracle {
        #[arg(long = "in")]
        input: PathBuf,
        /// Maximum number of edge subsets (2^m).
        #[arg(long, default_value_t = DEFAULT_OPT_BUDGET)]
        budget: u64,
        #[arg(long)]
        k: Option<u32>,
    },
    /// Generate a random instance.
    Gen {
        #[arg(long, default_value_t = 6)]
        n: usize,
        /// Edge probability as an exact rational, e.g. 1/2.
        #[arg(long, default_value = "1/2")]
        p: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// none | kefts:K | single:K | pairs:COUNT:MAXK
        #[arg(long, default_value = "none")]
        demand_spec: String,
        /// unit | int:MIN:MAX | rational:MAXNUM:MAXDEN
        #[arg(long, default_value = "unit")]
        weights: String,
        /// Chance of each extra parallel copy, as a rational.
        #[arg(long, default_value = "0")]
        parallel: String,
        /// Plant size-2 cuts between 2-edge-connected blocks; `--n` is ignored.
        #[arg(long)]
        planted: bool,
        #[arg(long, default_value_t = 16)]
        max_edges: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a benchmark suite (smoke or ratios) and print the ratio table.
    Bench {
        #[arg(long, default_value = "ratios")]
        suite: String,
    },
}

fn requirement(k: Option<u32>, inst: &rsnd_core::Instance) -> Requirement {
    match k {
        Some(k) => Requirement::AllPairs { k },
        None => Requirement::Pairs(inst.demands.clone()),
    }
}

fn need_k(k: Option<u32>) -> Result<u32, CliError> {
    k.ok_or_else(|| CliError::Input("--k is required for the k-EFTS algorithms".into()))
}

fn parse_rational(flag: &str, text: &str) -> Result<Rational, CliError> {
    text.trim()
        .parse()
        .map_err(|e| CliError::Input(format!("{flag}: {text:?} is not a rational: {e}")))
}

fn parse_fields<const N: usize>(flag: &str, text: &str) -> Result<(String, [i64; N]), CliError> {
    let mut parts = text.split(':');
    let head = parts.next().unwrap_or_default().to_string();
    let rest: Vec<&str> = parts.collect();
    if rest.len() != N {
        return Err(CliError::Input(format!("{flag}: {text:?} needs {N} numeric fields after {head:?}")));
    }
    let mut out = [0; N];
    for (slot, part) in out.iter_mut().zip(rest) {
        *slot = part
            .parse()
            .map_err(|_| CliError::Input(format!("{flag}: {part:?} is not an integer")))?;
    }
    Ok((head, out))
}

fn parse_demand_spec(text: &str) -> Result<DemandSpec, CliError> {
    let flag = "--demand-spec";
    let as_u32 = |v: i64| u32::try_from(v).map_err(|_| CliError::Input(format!("{flag}: {v} out of range")));
    match text.split(':').next() {
        Some("none") if text == "none" => Ok(DemandSpec::None),
        Some("kefts") => Ok(DemandSpec::Kefts(as_u32(parse_fields::<1>(flag, text)?.1[0])?)),
        Some("single") => Ok(DemandSpec::Single(as_u32(parse_fields::<1>(flag, text)?.1[0])?)),
        Some("pairs") => {
            let [count, max_k] = parse_fields::<2>(flag, text)?.1;
            Ok(DemandSpec::Pairs {
                count: usize::try_from(count).map_err(|_| CliError::Input(format!("{flag}: negative count")))?,
                max_k: as_u32(max_k)?,
            })
        }
        _ => Err(CliError::Input(format!("{flag}: unknown spec {text:?}"))),
    }
}

fn parse_weights(text: &str) -> Result<WeightSpec, CliError> {
    let flag = "--weights";
    match text.split(':').next() {
        Some("unit") if text == "unit" => Ok(WeightSpec::Unit),
        Some("int") => {
            let [min, max] = parse_fields::<2>(flag, text)?.1;
            Ok(WeightSpec::Integer { min, max })
        }
        Some("rational") => {
            let [max_numer, max_denom] = parse_fields::<2>(flag, text)?.1;
            Ok(WeightSpec::Rational { max_numer, max_denom })
        }
        _ => Err(CliError::Input(format!("{flag}: unknown spec {text:?}"))),
    }
}

fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::Solve { alg, k, input, out } => {
            let inst = read_json::<InstanceFile>(&input)?.to_instance()?;
            let g = &inst.graph;
            let (h, trace) = match alg {
                Alg::KeftsWeighted => {
                    let (h, t) = kefts_weighted(g, need_k(k)?)?;
                    (h, report::rounding(&t))
                }
                Alg::KeftsUnweighted => {
                    let (h, r) = kefts_unweighted(g, need_k(k)?)?;
                    (h, report::unweighted(&r))
                }
                Alg::Rsnd2 => (rsnd2(g, &inst.demands)?, json!({})),
                Alg::Rsnd3Single => match inst.demands.as_slice() {
                    [d] if d.k == 3 => {
                        let (h, t) = rsnd3_single(g, d.s, d.t)?;
                        (h, report::rsnd3(&t))
                    }
                    _ => return Err(Error::InvalidArgument("single demand k=3 required".into()).into()),
                },
            };
            write_json(out.as_deref(), &SolutionFile::new(g, &h, trace))
        }
        Command::Verify {
            input,
            solution,
            mode,
            k,
            budget,
        } => {
            let inst = read_json::<InstanceFile>(&input)?.to_instance()?;
            let g = &inst.graph;
            let h = read_json::<SolutionFile>(&solution)?.to_edge_set(g)?;
            match mode {
                Mode::FaultEnum => {
                    match verify_rsnd_with_budget(g, &h, &requirement(k, &inst), budget)? {
                        None => write_json(None, &json!({ "feasible": true })),
                        Some(v) => Err(CliError::Infeasible(json!({
                            "feasible": false,
                            "violation": {
                                "demand": v.demand,
                                "k": v.k,
                                "fault": v.fault.iter().map(|id| id.0).collect::<Vec<_>>(),
                                "s": v.s,
                                "t": v.t,
                            }
                        }))),
                    }
                }
                Mode::CutOracle => {
                    let k = k.ok_or_else(|| CliError::Input("--mode cut-oracle needs --k".into()))?;
                    match violated_kefts_cut(g, k, &h)? {
                        None => write_json(None, &json!({ "feasible": true })),
                        Some(cut) => Err(CliError::Infeasible(json!({
                            "feasible": false,
                            "violated_cut": {
                                "nodes": cut.nodes,
                                "boundary": cut.boundary.iter().map(|id| id.0).collect::<Vec<_>>(),
                            }
                        }))),
                    }
                }
            }
        }
        Command::Oracle { input, budget, k } => {
            let inst = read_json::<InstanceFile>(&input)?.to_instance()?;
            let (cost, h) = exact_opt(&inst.graph, &requirement(k, &inst), budget)?;
            write_json(
                None,
                &json!({ "cost": cost.to_string(), "edges": h.iter().map(|id| id.0).collect::<Vec<_>>() }),
            )
        }
        Command::Gen {
            n,
            p,
            seed,
            demand_spec,
            weights,
            parallel,
            planted,
            max_edges,
            out,
        } => {
            let params = GenParams {
                n,
                edge_probability: parse_rational("--p", &p)?,
                parallel_probability: parse_rational("--parallel", &parallel)?,
                weights: parse_weights(&weights)?,
                demands: parse_demand_spec(&demand_spec)?,
                seed,
                planted_two_cut: planted,
                max_edges,
            };
            if params.parallel_probability >= Rational::from_integer(1.into()) {
                return Err(CliError::Input("--parallel must be below 1".into()));
            }
            let inst = gen_random(&params).map_err(|e| CliError::Input(e.to_string()))?;
            write_json(out.as_deref(), &InstanceFile::from_instance(&inst))
        }
        Command::Bench { suite } => {
            let (table, ok) = report::bench(&suite)?;
            print!("{table}");
            if ok {
                Ok(())
            } else {
                Err(CliError::Infeasible(json!({ "bench": "some algorithm failed its guarantee" })))
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            match &err {
                CliError::Input(msg) => eprintln!("error: {msg}"),
                CliError::Core(e) => eprintln!("error: {e}"),
                CliError::Infeasible(report) => {
                    println!("{}", serde_json::to_string_pretty(report).expect("json value"));
                }
            }
            ExitCode::from(err.exit_code())
        }
    }
}
