//! `coalition-tactics` command-line front end.
//!
//! Exit codes: 0 feasible (or agreement, or success), 1 infeasible (or
//! disagreement), 2 error or bad usage.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use coalition_tactics::election::check_objectives;
use coalition_tactics::fixtures::worked_example;
use coalition_tactics::io::{self, GenParams, ParsedInstance, Problem};
use coalition_tactics::rational::{self, Rational};
use coalition_tactics::reductions::{self, ExactCoverInstance, Graph};
use coalition_tactics::{Error, Execution};

#[derive(Parser)]
#[command(name = "coalition-tactics", version, about = "Bribery and control solvers for threshold PR elections")]
struct Cli {
    /// Run solvers on one thread.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve an instance document and write the result document.
    Solve {
        file: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare the solver with exhaustive search on each file.
    OracleCheck {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        #[arg(long)]
        guard: Option<usize>,
    },
    /// Emit the instance built from a graph (dcp-jf, dcp-j-tau, dop, acp,
    /// aop-tau, aop-jf) or an exact-cover input (exact-cover, shift).
    Reduce {
        kind: String,
        #[arg(long)]
        graph: Option<PathBuf>,
        #[arg(short = 'k')]
        k: Option<usize>,
        #[arg(long = "in")]
        input: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Tally the five-party worked example, optionally after deleting one
    /// party.
    #[command(name = "paper-example")]
    WorkedExample {
        #[arg(long)]
        delete: Option<String>,
    },
    /// Generate a random instance document.
    Gen {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 6)]
        voters: usize,
        #[arg(long, default_value_t = 4)]
        parties: usize,
        #[arg(long, default_value = "bribery-dollar")]
        problem: String,
        /// Unregistered voters for control-av.
        #[arg(long, default_value_t = 0)]
        spoilers: usize,
        #[arg(long, default_value_t = 5)]
        max_cost: i64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn read(path: &Path) -> Result<Vec<u8>, Error> {
    fs::read(path).map_err(|e| Error::parse(path.display().to_string(), e.to_string()))
}

fn read_text(path: &Path) -> Result<String, Error> {
    fs::read_to_string(path).map_err(|e| Error::parse(path.display().to_string(), e.to_string()))
}

fn emit(text: &str, out: Option<&Path>) -> Result<(), Error> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| Error::parse(p.display().to_string(), e.to_string())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load(path: &Path) -> Result<ParsedInstance, Error> {
    io::parse_instance(&read(path)?).map_err(|e| match e {
        Error::Parse { path: field, message } => Error::Parse {
            path: format!("{}: {field}", path.display()),
            message,
        },
        other => other,
    })
}

fn pct(r: &Rational) -> String {
    format!("{} ({}%)", rational::format(r), rational::percent(r))
}

fn worked_example_rows(delete: Option<&str>) -> Result<bool, Error> {
    let (election, goal) = worked_example();
    let universe = election.universe().clone();
    let rows: Vec<Option<String>> = match delete {
        Some(d) => {
            universe.party(d)?;
            vec![Some(d.to_string())]
        }
        None => std::iter::once(None)
            .chain(universe.names().iter().cloned().map(Some))
            .collect(),
    };
    println!(
        "threshold {} of {} voters: T = {}",
        rational::format(election.tau()),
        election.num_voters(),
        election.threshold_count()
    );
    let favored = goal.favored.expect("example has a favored party");
    for row in rows {
        let running = match &row {
            Some(d) => election.running().difference(&universe.set_of([d.as_str()])?),
            None => election.running().clone(),
        };
        let tally = election.restrict(running)?.tally();
        let share = tally.share(&goal.coalition);
        let ratio = if share == rational::zero() {
            "-".to_string()
        } else {
            pct(&(tally.fraction(favored) / share))
        };
        let active: Vec<&str> = tally.active.iter().map(|p| universe.name(p)).collect();
        let check = check_objectives(&tally, &goal);
        println!(
            "delete {:<4} active {{{}}}  coalition {}  favored ratio {}  goal {}",
            row.as_deref().unwrap_or("-"),
            active.join(", "),
            pct(&share),
            ratio,
            if check.met() { "met" } else { "unmet" }
        );
    }
    Ok(true)
}

fn run(cli: Cli) -> Result<bool, Error> {
    let exec = if cli.sequential {
        Execution::Sequential
    } else {
        Execution::default()
    };
    match cli.command {
        Command::Solve { file, out } => {
            let parsed = load(&file)?;
            let solution = io::solve(&parsed, exec)?;
            emit(&io::to_json(&solution.document), out.as_deref())?;
            Ok(solution.verdict.feasible)
        }
        Command::OracleCheck { files, guard } => {
            let mut agree = true;
            for file in &files {
                let parsed = load(file)?;
                let solved = io::solve(&parsed, exec)?;
                let oracle = io::oracle(&parsed, guard)?;
                let same = solved.verdict == oracle && (!solved.verdict.feasible || solved.document.checked);
                println!(
                    "{}: solver {} | oracle {} | {}",
                    file.display(),
                    solved.verdict,
                    oracle,
                    if same { "agree" } else { "DISAGREE" }
                );
                agree &= same;
            }
            Ok(agree)
        }
        Command::Reduce {
            kind,
            graph,
            k,
            input,
            out,
        } => {
            let parsed: ParsedInstance = if kind == "exact-cover" || kind == "shift" {
                let path = input.ok_or_else(|| Error::Usage("--in <file> is required".into()))?;
                let ec = ExactCoverInstance::parse(&read_text(&path)?)?;
                let mut parsed: ParsedInstance = reductions::exact_cover_to_shift(&ec)?.into();
                parsed.expected_feasible = reductions::brute_force_exact_cover(&ec).ok();
                parsed
            } else {
                let path = graph.ok_or_else(|| Error::Usage("--graph <file> is required".into()))?;
                let k = k.ok_or_else(|| Error::Usage("-k <int> is required".into()))?;
                let g = Graph::parse_edge_list(&read_text(&path)?)?;
                let mut parsed: ParsedInstance = reductions::graph_reduction(&kind, &g, k)?.into();
                parsed.expected_feasible = reductions::graph_source_answer(&kind, &g, k).ok();
                parsed
            };
            emit(&io::to_json(&parsed.to_document()), out.as_deref())?;
            Ok(true)
        }
        Command::WorkedExample { delete } => worked_example_rows(delete.as_deref()),
        Command::Gen {
            seed,
            voters,
            parties,
            problem,
            spoilers,
            max_cost,
            out,
        } => {
            let problem: Problem = problem.parse().map_err(|_| Error::Usage(format!("unknown problem `{problem}`")))?;
            let mut params = GenParams::for_problem(problem);
            params.spoilers = spoilers;
            params.max_cost = max_cost;
            let doc = io::generate_random(seed, voters, parties, problem, &params)?;
            emit(&io::to_json(&doc), out.as_deref())?;
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
