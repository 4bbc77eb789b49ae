//! Command-line driver: solve/enumerate programs, brute-force small ones
//! by definition, emit generated instances, verify codes, and benchmark.
//!
//! Exit codes follow solver conventions: 10 = satisfiable,
//! 20 = unsatisfiable (or an invalid code for `check`), 1 = usage or
//! input error, 0 = neutral output (`gen`, `bench`, valid `check`).

use crate::generate::{self, CnfFormula, HammingSpec, KnapsackSpec};
use crate::oracle;
use crate::parse;
use crate::program::{agrees, Literal, LiteralSet, Model, Program};
use crate::search::{SearchStats, Solver, SolverOptions};
use clap::{Args, Parser, Subcommand};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

pub const EXIT_SAT: u8 = 10;
pub const EXIT_UNSAT: u8 = 20;
pub const EXIT_ERROR: u8 = 1;

#[derive(Parser)]
#[command(
    name = "answerset",
    version,
    about = "Ground answer-set solver: stable models of basic, cardinality, choice, and weight rules"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Find one stable model
    Solve(SearchArgs),
    /// List stable models (all, or up to --limit)
    Enumerate(EnumerateArgs),
    /// Enumerate stable models by brute force over all atom subsets
    Oracle(OracleArgs),
    /// Emit a generated instance as program text
    Gen {
        #[command(subcommand)]
        family: GenCommand,
    },
    /// Verify that words form a code with the required minimum distance
    Check(CheckArgs),
    /// Time repeated solver runs on shuffled instances
    Bench {
        #[command(subcommand)]
        family: BenchCommand,
    },
}

#[derive(Args)]
struct SearchArgs {
    /// Program file; omit or use "-" for standard input
    input: Option<PathBuf>,
    /// Assume a literal: `name` (true) or `-name` (false); repeatable
    #[arg(long, value_name = "LITERAL", allow_hyphen_values = true)]
    assume: Vec<String>,
    /// Branch on the first unassigned atom instead of probing
    #[arg(long)]
    no_lookahead: bool,
    /// Permute the probe order with this seed
    #[arg(long, value_name = "N")]
    seed: Option<u64>,
    /// Print search statistics as a trailing comment line
    #[arg(long)]
    stats: bool,
}

#[derive(Args)]
struct EnumerateArgs {
    #[command(flatten)]
    search: SearchArgs,
    /// Stop after this many models (default: all)
    #[arg(long, value_name = "N")]
    limit: Option<usize>,
}

#[derive(Args)]
struct OracleArgs {
    /// Program file; omit or use "-" for standard input
    input: Option<PathBuf>,
    /// Assume a literal: `name` (true) or `-name` (false); repeatable
    #[arg(long, value_name = "LITERAL", allow_hyphen_values = true)]
    assume: Vec<String>,
}

#[derive(Subcommand)]
enum GenCommand {
    /// Fixed-distance binary code search: is there a code of BITS-wide
    /// words, pairwise distance >= DISTANCE, with at least SIZE words?
    Hamming {
        bits: u32,
        distance: u32,
        size: u64,
    },
    /// CNF satisfiability from a DIMACS file (variables become v1..vN)
    Sat {
        /// DIMACS file; omit or use "-" for standard input
        input: Option<PathBuf>,
    },
    /// Subset packing: total weight under --cap, total value at least --floor
    Knapsack {
        /// Item weights, comma-separated
        #[arg(long, value_delimiter = ',', required = true)]
        weights: Vec<u64>,
        /// Item values, comma-separated
        #[arg(long, value_delimiter = ',', required = true)]
        values: Vec<u64>,
        #[arg(long)]
        cap: u64,
        #[arg(long)]
        floor: u64,
    },
}

#[derive(Args)]
struct CheckArgs {
    bits: u32,
    distance: u32,
    /// Code words as integers
    #[arg(required = true)]
    words: Vec<u64>,
}

#[derive(Subcommand)]
enum BenchCommand {
    /// Solve the (BITS, DISTANCE, SIZE) code instance repeatedly with
    /// shuffled rule order and probe order
    Hamming {
        bits: u32,
        distance: u32,
        size: u64,
        #[arg(long, default_value_t = 10)]
        runs: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

/// Parse the process arguments and run the selected mode.
pub fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(EXIT_ERROR)
        }
    }
}

fn dispatch(command: Command) -> Result<u8, String> {
    match command {
        Command::Solve(args) => {
            let program = load_program(args.input.as_deref())?;
            let assumptions = resolve_assumptions(&program, &args.assume)?;
            let mut solver = solver_for(&args, program);
            let outcome = solver.decide(&assumptions);
            let sat = outcome.is_some();
            match outcome {
                Some(model) => println!("{}", solver.program().format_model(&model)),
                None => println!("UNSATISFIABLE"),
            }
            if args.stats {
                print_stats(&solver.stats());
            }
            Ok(if sat { EXIT_SAT } else { EXIT_UNSAT })
        }
        Command::Enumerate(args) => {
            if args.limit == Some(0) {
                return Err("--limit must be at least 1".into());
            }
            let program = load_program(args.search.input.as_deref())?;
            let assumptions = resolve_assumptions(&program, &args.search.assume)?;
            let mut solver = solver_for(&args.search, program);
            let models = solver.enumerate(&assumptions, args.limit);
            print_models(solver.program(), &models);
            if args.search.stats {
                print_stats(&solver.stats());
            }
            Ok(if models.is_empty() { EXIT_UNSAT } else { EXIT_SAT })
        }
        Command::Oracle(args) => {
            let program = load_program(args.input.as_deref())?;
            let assumptions = resolve_assumptions(&program, &args.assume)?;
            let filter = LiteralSet::from_literals(program.atom_count(), assumptions);
            let models: Vec<Model> = oracle::enumerate_stable_brute(&program)
                .map_err(|e| e.to_string())?
                .into_iter()
                .filter(|m| agrees(m, &filter))
                .collect();
            print_models(&program, &models);
            Ok(if models.is_empty() { EXIT_UNSAT } else { EXIT_SAT })
        }
        Command::Gen { family } => {
            let (banner, program, assumptions) = match family {
                GenCommand::Hamming {
                    bits,
                    distance,
                    size,
                } => {
                    let spec = HammingSpec {
                        bits,
                        distance,
                        min_size: size,
                    };
                    let (p, a) = generate::hamming(&spec).map_err(|e| e.to_string())?;
                    (format!("code search bits={bits} distance={distance} size={size}"), p, a)
                }
                GenCommand::Sat { input } => {
                    let formula = parse_dimacs(&read_input(input.as_deref())?)?;
                    let (p, a) = generate::sat(&formula).map_err(|e| e.to_string())?;
                    let (vars, clauses) = (formula.variables.len(), formula.clauses.len());
                    (format!("cnf vars={vars} clauses={clauses}"), p, a)
                }
                GenCommand::Knapsack {
                    weights,
                    values,
                    cap,
                    floor,
                } => {
                    if weights.len() != values.len() {
                        return Err(format!(
                            "{} weights but {} values",
                            weights.len(),
                            values.len()
                        ));
                    }
                    let spec = KnapsackSpec {
                        items: weights.into_iter().zip(values).collect(),
                        max_weight: cap,
                        min_value: floor,
                    };
                    let (p, a) = generate::knapsack(&spec).map_err(|e| e.to_string())?;
                    (
                        format!(
                            "packing items={} cap={} floor={}",
                            spec.items.len(),
                            spec.max_weight,
                            spec.min_value
                        ),
                        p,
                        a,
                    )
                }
            };
            println!("% {banner}");
            let rendered: Vec<String> = assumptions
                .iter()
                .map(|&l| assumption_flag(&program, l))
                .collect();
            println!("% assumptions: {}", rendered.join(" "));
            print!("{}", parse::serialize_program(&program));
            Ok(0)
        }
        Command::Check(args) => {
            if generate::verify_code(&args.words, args.bits, args.distance) {
                println!("valid");
                Ok(0)
            } else {
                println!("invalid");
                Ok(EXIT_UNSAT)
            }
        }
        Command::Bench { family } => match family {
            BenchCommand::Hamming {
                bits,
                distance,
                size,
                runs,
                seed,
            } => {
                if runs == 0 {
                    return Err("--runs must be at least 1".into());
                }
                let report = bench_hamming(
                    &HammingSpec {
                        bits,
                        distance,
                        min_size: size,
                    },
                    runs,
                    seed,
                )
                .map_err(|e| e.to_string())?;
                println!("{report}");
                Ok(0)
            }
        },
    }
}

fn solver_for(args: &SearchArgs, program: Program) -> Solver {
    Solver::with_options(
        program,
        SolverOptions {
            lookahead: !args.no_lookahead,
            seed: args.seed,
        },
    )
}

fn read_input(path: Option<&Path>) -> Result<String, String> {
    match path {
        Some(p) if p.as_os_str() != "-" => {
            std::fs::read_to_string(p).map_err(|e| format!("{}: {e}", p.display()))
        }
        _ => {
            let mut text = String::new();
            std::io::stdin()
                .read_to_string(&mut text)
                .map_err(|e| format!("standard input: {e}"))?;
            Ok(text)
        }
    }
}

fn load_program(path: Option<&Path>) -> Result<Program, String> {
    parse::parse_program(&read_input(path)?).map_err(|e| e.to_string())
}

/// `name` (positive) or `-name` (negative) to a literal over the
/// program's atoms.
fn resolve_assumptions(program: &Program, specs: &[String]) -> Result<Vec<Literal>, String> {
    specs
        .iter()
        .map(|raw| {
            let (name, negative) = match raw.strip_prefix('-') {
                Some(rest) => (rest, true),
                None => (raw.as_str(), false),
            };
            let atom = program
                .atom(name)
                .ok_or_else(|| format!("unknown atom {name:?} in --assume"))?;
            Ok(if negative {
                Literal::negative(atom)
            } else {
                Literal::positive(atom)
            })
        })
        .collect()
}

fn assumption_flag(program: &Program, lit: Literal) -> String {
    if lit.is_positive() {
        program.atom_name(lit.atom()).to_string()
    } else {
        format!("-{}", program.atom_name(lit.atom()))
    }
}

fn print_models(program: &Program, models: &[Model]) {
    if models.is_empty() {
        println!("UNSATISFIABLE");
    }
    for m in models {
        println!("{}", program.format_model(m));
    }
}

fn print_stats(stats: &SearchStats) {
    println!(
        "c choices={} conflicts={} lookaheads={} time_ms={}",
        stats.choice_points,
        stats.conflicts,
        stats.lookahead_probes,
        stats.duration.as_millis()
    );
}

/// Minimal DIMACS CNF reader: `c` comments, `p cnf V C` header, clauses
/// as 0-terminated integer lists. Variables are named `v1..vV`.
fn parse_dimacs(text: &str) -> Result<CnfFormula, String> {
    let mut variables = 0usize;
    let mut seen_header = false;
    let mut clauses: Vec<Vec<(usize, bool)>> = Vec::new();
    let mut current: Vec<(usize, bool)> = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        if let Some(rest) = line.strip_prefix('p') {
            let mut fields = rest.split_whitespace();
            if fields.next() != Some("cnf") {
                return Err(format!("line {}: expected `p cnf`", lineno + 1));
            }
            variables = fields
                .next()
                .and_then(|t| t.parse().ok())
                .ok_or(format!("line {}: bad variable count", lineno + 1))?;
            seen_header = true;
            continue;
        }
        if !seen_header {
            return Err(format!("line {}: clause before `p cnf` header", lineno + 1));
        }
        for token in line.split_whitespace() {
            let value: i64 = token
                .parse()
                .map_err(|_| format!("line {}: bad literal {token:?}", lineno + 1))?;
            if value == 0 {
                clauses.push(std::mem::take(&mut current));
            } else {
                let var = value.unsigned_abs() as usize;
                if var > variables {
                    return Err(format!(
                        "line {}: variable {var} exceeds declared count {variables}",
                        lineno + 1
                    ));
                }
                current.push((var - 1, value > 0));
            }
        }
    }
    if !current.is_empty() {
        clauses.push(current);
    }
    if !seen_header {
        return Err("missing `p cnf` header".into());
    }
    Ok(CnfFormula {
        variables: (1..=variables).map(|i| format!("v{i}")).collect(),
        clauses,
    })
}

/// Timing report for repeated runs of one instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BenchReport {
    pub spec: HammingSpec,
    pub runs: u32,
    pub satisfiable: bool,
    pub min: Duration,
    pub max: Duration,
    pub total: Duration,
}

impl BenchReport {
    pub fn average(&self) -> Duration {
        self.total / self.runs
    }
}

impl std::fmt::Display for BenchReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "hamming bits={} distance={} size={} runs={} verdict={} min_ms={} avg_ms={} max_ms={}",
            self.spec.bits,
            self.spec.distance,
            self.spec.min_size,
            self.runs,
            if self.satisfiable { "SAT" } else { "UNSAT" },
            self.min.as_millis(),
            self.average().as_millis(),
            self.max.as_millis(),
        )
    }
}

/// Solve the code instance `runs` times, shuffling both the rule order
/// of the emitted program text and the solver's probe order per run.
/// The verdict must be identical across runs; timings vary.
pub fn bench_hamming(
    spec: &HammingSpec,
    runs: u32,
    seed: u64,
) -> Result<BenchReport, generate::GenError> {
    let (program, assumptions) = generate::hamming(spec)?;
    let names: Vec<String> = assumptions
        .iter()
        .map(|&l| assumption_flag(&program, l))
        .collect();
    let text = parse::serialize_program(&program);
    let (header, rules) = split_rule_lines(&text);

    let mut verdict = None;
    let mut min = Duration::MAX;
    let mut max = Duration::ZERO;
    let mut total = Duration::ZERO;
    for run in 0..runs {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(run as u64));
        let mut shuffled = rules.clone();
        shuffled.shuffle(&mut rng);
        let instance =
            parse::parse_program(&format!("{header}{}", shuffled.join("")))
                .expect("shuffled instance parses");
        let assumptions = resolve_assumptions(&instance, &names)
            .expect("assumption atoms survive shuffling");
        let mut solver = Solver::with_options(
            instance,
            SolverOptions {
                lookahead: true,
                seed: Some(seed.wrapping_add(run as u64)),
            },
        );
        let started = Instant::now();
        let outcome = solver.decide(&assumptions);
        let elapsed = started.elapsed();
        let sat = outcome.is_some();
        match verdict {
            None => verdict = Some(sat),
            Some(v) => assert_eq!(v, sat, "verdict changed under shuffling"),
        }
        min = min.min(elapsed);
        max = max.max(elapsed);
        total += elapsed;
    }
    Ok(BenchReport {
        spec: *spec,
        runs,
        satisfiable: verdict.unwrap(),
        min,
        max,
        total,
    })
}

/// Split serialized program text into the `#atoms` header (which pins
/// atom identity) and the individual rule lines.
fn split_rule_lines(text: &str) -> (String, Vec<String>) {
    let mut header = String::new();
    let mut rules = Vec::new();
    for line in text.split_inclusive('\n') {
        if line.starts_with("#atoms") {
            header.push_str(line);
        } else {
            rules.push(line.to_string());
        }
    }
    (header, rules)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dimacs_reader_handles_the_usual_shape() {
        let text = "c example\np cnf 4 3\n1 2 -3 0\n-1 2 -4 0\n-2 3 4 0\n";
        let formula = parse_dimacs(text).unwrap();
        assert_eq!(formula.variables.len(), 4);
        assert_eq!(
            formula.clauses,
            vec![
                vec![(0, true), (1, true), (2, false)],
                vec![(0, false), (1, true), (3, false)],
                vec![(1, false), (2, true), (3, true)],
            ]
        );
    }

    #[test]
    fn dimacs_reader_rejects_malformed_input() {
        assert!(parse_dimacs("1 2 0\n").is_err()); // clause before header
        assert!(parse_dimacs("p cnf 1 1\n2 0\n").is_err()); // undeclared var
        assert!(parse_dimacs("p dnf 1 1\n").is_err());
        assert!(parse_dimacs("").is_err());
        // trailing clause without terminating 0 is accepted
        let f = parse_dimacs("p cnf 2 1\n1 -2\n").unwrap();
        assert_eq!(f.clauses, vec![vec![(0, true), (1, false)]]);
    }

    #[test]
    fn assumption_specs_resolve_by_name_and_sign() {
        let (program, _) = generate::hamming(&HammingSpec {
            bits: 2,
            distance: 2,
            min_size: 2,
        })
        .unwrap();
        let lits =
            resolve_assumptions(&program, &["true".into(), "-false".into()]).unwrap();
        assert_eq!(lits.len(), 2);
        assert!(lits[0].is_positive());
        assert!(!lits[1].is_positive());
        assert!(resolve_assumptions(&program, &["nonesuch".into()]).is_err());
        let rendered: Vec<String> = lits
            .iter()
            .map(|&l| assumption_flag(&program, l))
            .collect();
        assert_eq!(rendered, vec!["true", "-false"]);
    }

    #[test]
    fn shuffled_benchmark_keeps_the_verdict() {
        let report = bench_hamming(
            &HammingSpec {
                bits: 2,
                distance: 2,
                min_size: 2,
            },
            3,
            7,
        )
        .unwrap();
        assert!(report.satisfiable);
        assert_eq!(report.runs, 3);
        let row = report.to_string();
        assert!(row.contains("verdict=SAT"));
        assert!(row.contains("runs=3"));

        let unsat = bench_hamming(
            &HammingSpec {
                bits: 2,
                distance: 2,
                min_size: 3,
            },
            2,
            0,
        )
        .unwrap();
        assert!(!unsat.satisfiable);
    }

    #[test]
    fn rule_lines_split_off_the_atom_header() {
        let (p, _) = generate::knapsack(&KnapsackSpec {
            items: vec![(1, 1)],
            max_weight: 5,
            min_value: 0,
        })
        .unwrap();
        let text = parse::serialize_program(&p);
        let (header, rules) = split_rule_lines(&text);
        assert!(header.starts_with("#atoms"));
        assert_eq!(rules.len(), 3);
        assert_eq!(format!("{header}{}", rules.join("")), text);
    }
}
