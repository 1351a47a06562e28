use std::fs;

use anyhow::{Context, Result};
use ctpower_core::analysis::{pe4_sweep_with, verdict_with};
use ctpower_core::{McConfig, Scheme};

use crate::args::{AnalyzeArgs, Cli, Command, FormatArg, OutputArgs, ReproduceArgs, SweepArgs};
use crate::config::{method, mode, scheme_id};
use crate::report::{self, Report};
use crate::reproduce;
use crate::runner::Parallel;

/// Rendered output plus whether every verdict in it passed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub text: String,
    pub passed: bool,
}

pub fn analyze_report(args: &AnalyzeArgs) -> Result<Report> {
    let id = scheme_id(&args.scheme)?;
    let scheme = Scheme::build(id).with_context(|| format!("cannot build {}", id.name()))?;
    let cfg = McConfig::new(args.sampling.samples, args.sampling.seed, mode(args.sampling.mode));
    let analysis = verdict_with(&Parallel, &scheme, method(args.method), &cfg)?;
    Ok(Report::from(&analysis))
}

pub fn analyze(args: &AnalyzeArgs) -> Result<Outcome> {
    let r = analyze_report(args)?;
    let text = match args.format {
        FormatArg::Table => report::render_table(&r),
        FormatArg::Json => report::render_json(&r)?,
        FormatArg::Csv => report::render_csv(&r)?,
    };
    Ok(Outcome {
        text,
        passed: r.criteria.passed,
    })
}

pub fn sweep(args: &SweepArgs) -> Result<Outcome> {
    let cfg = McConfig::new(args.sampling.samples, args.sampling.seed, mode(args.sampling.mode));
    let rows = pe4_sweep_with(&Parallel, args.resolution, &cfg)?;
    let text = match args.format {
        FormatArg::Json => report::sweep_json(&rows)?,
        FormatArg::Csv | FormatArg::Table => report::sweep_csv(&rows)?,
    };
    Ok(Outcome {
        text,
        passed: rows.iter().all(|r| r.pass),
    })
}

pub fn reproduce(args: &ReproduceArgs) -> Result<Outcome> {
    let checks = reproduce::run(args.samples, args.seed, args.corrupt_table)?;
    let text = match args.format {
        FormatArg::Json => {
            let mut s = serde_json::to_string_pretty(&checks)?;
            s.push('\n');
            s
        }
        FormatArg::Table | FormatArg::Csv => reproduce::render_table(&checks),
    };
    Ok(Outcome {
        text,
        passed: checks.iter().all(|c| c.pass),
    })
}

fn output(cmd: &Command) -> &OutputArgs {
    match cmd {
        Command::Analyze(a) => &a.output,
        Command::Sweep(a) => &a.output,
        Command::Reproduce(a) => &a.output,
    }
}

/// Runs a command and writes its output; returns the process exit status.
pub fn run(cli: &Cli) -> Result<u8> {
    let outcome = match &cli.command {
        Command::Analyze(a) => analyze(a)?,
        Command::Sweep(a) => sweep(a)?,
        Command::Reproduce(a) => reproduce(a)?,
    };
    let out = output(&cli.command);
    match &out.out {
        Some(path) => fs::write(path, &outcome.text)
            .with_context(|| format!("cannot write {}", path.display()))?,
        None => print!("{}", outcome.text),
    }
    Ok(if out.strict && !outcome.passed { 2 } else { 0 })
}
