use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use covext::verify::{list_scenarios, summary_table, verify_paper};
use covext::{run_text, RunError, RunOptions};

#[derive(Parser)]
#[command(name = "covext", version, about = "Cover extension computations from scenario files")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one scenario file and print or write its report.
    Run {
        scenario: PathBuf,
        /// Write the report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Include coset tables and lasso geometry in the report.
        #[arg(long)]
        debug_tables: bool,
    },
    /// Run every bundled scenario and print one row per claim.
    VerifyPaper {
        /// Only scenarios whose name contains this string.
        #[arg(long)]
        filter: Option<String>,
        /// Write each report as `<name>.json` into this directory.
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// List the bundled scenarios.
    ListScenarios,
}

fn fail(e: &RunError) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(e.exit_code() as u8)
}

fn write_file(path: &PathBuf, text: &str) -> Result<(), RunError> {
    std::fs::write(path, text).map_err(|e| RunError::Io(format!("cannot write {}: {e}", path.display())))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Run {
            scenario,
            out,
            debug_tables,
        } => {
            let text = match std::fs::read_to_string(&scenario) {
                Ok(t) => t,
                Err(e) => {
                    return fail(&RunError::Io(format!("cannot read {}: {e}", scenario.display())))
                }
            };
            let start = Instant::now();
            let report = match run_text(&text, RunOptions { debug_tables }) {
                Ok(r) => r,
                Err(e) => return fail(&e),
            };
            eprintln!("elapsed: {:.3} s", start.elapsed().as_secs_f64());
            let json = report.to_json();
            match out {
                Some(path) => {
                    if let Err(e) = write_file(&path, &json) {
                        return fail(&e);
                    }
                }
                None => print!("{json}"),
            }
            ExitCode::SUCCESS
        }
        Command::VerifyPaper { filter, out_dir } => {
            let start = Instant::now();
            let runs = verify_paper(filter.as_deref());
            if runs.is_empty() {
                eprintln!("error: no bundled scenario matches the filter");
                return ExitCode::from(2);
            }
            print!("{}", summary_table(&runs));
            let mut code = 0u8;
            for run in &runs {
                eprintln!("{:<26} {:.3} s", run.name, run.elapsed.as_secs_f64());
                match &run.outcome {
                    Ok(report) => {
                        if let Some(dir) = &out_dir {
                            let written = std::fs::create_dir_all(dir)
                                .map_err(|e| RunError::Io(format!("cannot create {}: {e}", dir.display())))
                                .and_then(|()| write_file(&dir.join(format!("{}.json", run.name)), &report.to_json()));
                            if let Err(e) = written {
                                eprintln!("error: {e}");
                                code = code.max(1);
                            }
                        }
                    }
                    Err(e) => {
                        eprintln!("error in {}: {e}", run.name);
                        code = code.max(e.exit_code() as u8);
                    }
                }
            }
            eprintln!("total: {:.3} s", start.elapsed().as_secs_f64());
            ExitCode::from(code)
        }
        Command::ListScenarios => {
            print!("{}", list_scenarios());
            ExitCode::SUCCESS
        }
    }
}
