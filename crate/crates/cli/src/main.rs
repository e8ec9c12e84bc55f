use std::io::Write;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::Parser;
use tetk::cli::{run, Cli};
use tetk::formats::InputError;
use tetk::report::Report;
use tetk_core::Error as CoreError;

const EXIT_MATH: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_BUDGET: u8 = 3;

fn exit_code(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if cause.downcast_ref::<InputError>().is_some() || cause.downcast_ref::<serde_json::Error>().is_some() {
            return EXIT_INPUT;
        }
        if let Some(e) = cause.downcast_ref::<CoreError>() {
            return match e {
                CoreError::Budget { .. } => EXIT_BUDGET,
                CoreError::NotCocycle { .. }
                | CoreError::NotNormalized { .. }
                | CoreError::NotCentral { .. }
                | CoreError::Unsolvable { .. } => EXIT_MATH,
                _ => EXIT_INPUT,
            };
        }
    }
    EXIT_INPUT
}

fn emit(cli: &Cli, report: &Report) -> Result<()> {
    let text = report.render(cli.global.output);
    match &cli.global.out {
        Some(path) => std::fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            Ok(out.flush()?)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(b) = cli.global.budget {
        tetk_core::nerve::set_tuple_budget(b);
    }
    match run(&cli) {
        Ok(report) => {
            if let Err(e) = emit(&cli, &report) {
                eprintln!("error: {e:#}");
                return ExitCode::from(EXIT_INPUT);
            }
            ExitCode::from(if report.passed { 0 } else { EXIT_MATH })
        }
        Err(e) => {
            let code = exit_code(&e);
            eprintln!("error: {e:#}");
            if code == EXIT_MATH {
                // the failed check still gets a report so the witness is machine readable
                let command = std::env::args().skip(1).take_while(|a| !a.starts_with('-')).collect::<Vec<_>>();
                let mut report = Report::new(command.join(" "));
                report.check("input is valid for this command", false, format!("{e:#}"));
                let _ = emit(&cli, &report);
            }
            ExitCode::from(code)
        }
    }
}
