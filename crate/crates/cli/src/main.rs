//! `bgcohom`: run one scenario file, or replay the regression fixtures.
//!
//! Reports are written atomically (temp file + rename) and their bytes depend
//! only on the scenario; timing goes to stderr.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use bgcohom::scenario::{self, Budgets};

#[derive(Parser)]
#[command(name = "bgcohom", version, about)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Clone, Copy)]
struct BudgetArgs {
    /// cap on chain/page cells materialized per computation
    #[arg(long, default_value_t = 4_000_000)]
    budget_cells: u64,
    /// cap on search-tree branches per forced search
    #[arg(long, default_value_t = 200_000)]
    budget_branches: u64,
}

impl From<BudgetArgs> for Budgets {
    fn from(b: BudgetArgs) -> Budgets {
        Budgets {
            cells: b.budget_cells,
            branches: b.budget_branches,
        }
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Run one scenario file and write <out>/<name>.json and .csv
    Run {
        #[arg(long)]
        scenario: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        budgets: BudgetArgs,
    },
    /// Replay every scenario under <root>/scenarios against <root>/fixtures
    Regress {
        #[arg(long, default_value = ".")]
        root: PathBuf,
        #[command(flatten)]
        budgets: BudgetArgs,
    },
}

fn write_atomic(path: &Path, contents: &str) -> std::io::Result<()> {
    let tmp = path.with_extension("tmp");
    std::fs::write(&tmp, contents)?;
    std::fs::rename(&tmp, path)
}

fn run_one(scenario: &Path, out: &Path, budgets: Budgets) -> Result<(), (i32, String)> {
    let fail = |e: &bgcohom::Error| (scenario::exit_code(e), e.to_string());
    let io_fail = |e: std::io::Error| (1, e.to_string());
    let text = std::fs::read_to_string(scenario).map_err(io_fail)?;
    let stem = scenario
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "scenario".into());
    let parsed = scenario::parse_scenario(&stem, &text).map_err(|e| fail(&e))?;
    let started = Instant::now();
    let report = scenario::run(&parsed, &budgets).map_err(|e| fail(&e))?;
    eprintln!(
        "{stem}: computed in {:.3}s",
        started.elapsed().as_secs_f64()
    );
    std::fs::create_dir_all(out).map_err(io_fail)?;
    write_atomic(&out.join(format!("{stem}.json")), &report.to_json()).map_err(io_fail)?;
    write_atomic(&out.join(format!("{stem}.csv")), &report.to_csv()).map_err(io_fail)?;
    Ok(())
}

fn run_regress(root: &Path, budgets: Budgets) -> Result<bool, (i32, String)> {
    let started = Instant::now();
    let entries = scenario::regress(root, &budgets)
        .map_err(|e| (scenario::exit_code(&e), e.to_string()))?;
    let mut ok = true;
    for e in &entries {
        match &e.failure {
            None => println!("pass  {}", e.name),
            Some(why) => {
                ok = false;
                println!("FAIL  {}: {why}", e.name);
            }
        }
    }
    let passed = entries.iter().filter(|e| e.failure.is_none()).count();
    println!("{passed}/{} fixtures match", entries.len());
    eprintln!("regress: {:.3}s", started.elapsed().as_secs_f64());
    Ok(ok)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.cmd {
        Cmd::Run {
            scenario,
            out,
            budgets,
        } => run_one(&scenario, &out, budgets.into()).map(|()| true),
        Cmd::Regress { root, budgets } => run_regress(&root, budgets.into()),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err((code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code as u8)
        }
    }
}
