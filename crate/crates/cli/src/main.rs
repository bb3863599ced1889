mod args;
mod commands;
mod error;
mod report;

use std::fs::File;
use std::io::Write;
use std::path::Path;
use std::process::ExitCode;

use clap::Parser;
use exuberance::rng::DEFAULT_SEED;

use args::{Cli, Command, PlotDataArgs, StudyArgs, StudySpec};
use error::CliError;
use report::{read_config, write_plot_csv, Report};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn execute(cli: Cli) -> Result<(), CliError> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Usage(format!("--threads: {e}")))?;
    }
    let mut cmd = match (cli.command, &cli.config) {
        (Some(_), Some(_)) => {
            return Err(CliError::Usage("--config replays a recorded run and takes no subcommand".into()))
        }
        (Some(c), None) => c,
        (None, Some(p)) => read_config(p)?,
        (None, None) => return Err(CliError::Usage("a subcommand or --config is required; see --help".into())),
    };
    if let Command::PlotData(a) = &cmd {
        return plot_data(a, cli.out.as_deref());
    }
    if let Command::Study(a) = &mut cmd {
        load_study_spec(a)?;
    }
    let seed = {
        let s = cmd.seed_mut().expect("report-producing subcommands carry a seed");
        *s.get_or_insert(DEFAULT_SEED)
    };
    let outcome = commands::run(&cmd, seed)?;
    for w in &outcome.warnings {
        eprintln!("warning: {w}");
    }
    eprintln!("{}: {}", cmd.name(), outcome.summary);
    Report::new(cmd, seed, outcome.result, outcome.plot, outcome.warnings).write(cli.out.as_deref())
}

fn load_study_spec(a: &mut StudyArgs) -> Result<(), CliError> {
    if a.spec.is_some() {
        return Ok(());
    }
    let path = a
        .spec_file
        .as_ref()
        .ok_or_else(|| CliError::Usage("study needs --spec".into()))?;
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let spec: StudySpec = serde_json::from_str(&text)
        .map_err(|e| CliError::Usage(format!("{}: invalid study spec: {e}", path.display())))?;
    a.spec = Some(spec);
    Ok(())
}

fn plot_data(a: &PlotDataArgs, out: Option<&Path>) -> Result<(), CliError> {
    let text = std::fs::read_to_string(&a.report).map_err(|e| CliError::io(&a.report, e))?;
    let report: Report = serde_json::from_str(&text)
        .map_err(|e| CliError::Data(format!("{}: not a report: {e}", a.report.display())))?;
    let plot = report
        .plot
        .ok_or_else(|| CliError::Data(format!("{} holds no sequence or episode data", a.report.display())))?;
    let rows = match out {
        Some(p) => write_plot_csv(&plot, File::create(p).map_err(|e| CliError::io(p, e))?)?,
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            let n = write_plot_csv(&plot, &mut lock)?;
            lock.flush().map_err(|e| CliError::Data(e.to_string()))?;
            n
        }
    };
    eprintln!("plot-data: {rows} rows");
    Ok(())
}
