//! Command-line front end for `chipfire-core`: the JSON instance format,
//! report rendering and the seeded verification suites.

pub mod args;
pub mod commands;
mod error;
pub mod instance;
pub mod suites;

use std::ffi::OsString;
use std::io::{Read, Write};
use std::path::Path;

use clap::Parser;
use serde_json::Value;

pub use commands::Report;
pub use error::{CliError, Result};
pub use instance::Instance;

use args::{Check, Cli, Command, Family, Input, Transform};

fn read_instance(input: &Input, stdin: &mut dyn Read) -> Result<Instance> {
    let text = match input.input.as_deref() {
        None => read_stdin(stdin)?,
        Some(p) if p == Path::new("-") => read_stdin(stdin)?,
        Some(p) => {
            std::fs::read_to_string(p).map_err(|source| CliError::Io { path: p.display().to_string(), source })?
        }
    };
    Instance::parse(&text)
}

fn read_stdin(stdin: &mut dyn Read) -> Result<String> {
    let mut text = String::new();
    stdin.read_to_string(&mut text).map_err(|source| CliError::Io { path: "<stdin>".into(), source })?;
    Ok(text)
}

/// Runs one parsed command.
pub fn execute(command: &Command, stdin: &mut dyn Read) -> Result<Report> {
    let mut load = |input: &Input| read_instance(input, stdin);
    match command {
        Command::Classify(i) => commands::classify(&load(i)?),
        Command::Simulate { input, policy, script, seed, cap, trace } => {
            commands::simulate(&load(input)?, *policy, script, *seed, *cap, *trace)
        }
        Command::Dist(i) => commands::dist(&load(i)?),
        Command::Rank(i) => commands::rank(&load(i)?),
        Command::Winnable(i) => commands::winnable(&load(i)?),
        Command::Reduce { transform: None, input, q } => commands::reduce(&load(input)?, *q),
        Command::Reduce { transform: Some(Transform::Phi { input, scaled_m }), .. } => {
            commands::reduce_phi(&load(input)?, *scaled_m)
        }
        Command::Reduce { transform: Some(Transform::Subdivide(i)), .. } => commands::reduce_subdivide(&load(i)?),
        Command::Minfas(i) => commands::minfas(&load(i)?),
        Command::UnderAcyclic { input, mode } => commands::under_acyclic(&load(input)?, *mode),
        Command::Verify { check } => match check {
            Check::PhiLemma { input, scaled_m } => commands::verify_phi_lemma(&load(input)?, *scaled_m),
            Check::Subdivision(i) => commands::verify_subdivision(&load(i)?),
            Check::RiemannRoch(s) => suites::riemann_roch(s.n_max, s.samples, s.seed),
            Check::OracleSuite(s) => suites::oracle_suite(s.n_max, s.samples, s.seed),
            Check::Abelian { input, trials, seed } => commands::verify_abelian(&load(input)?, *trials, *seed),
        },
        Command::Gen { family } => match family {
            Family::Graph { n, max_mult, seed } => commands::gen_graph(*n, *max_mult, *seed),
            Family::Eulerian { n, cycles, max_len, seed } => commands::gen_eulerian(*n, *cycles, *max_len, *seed),
        },
        Command::VerifyWitness { input, k, g } => commands::verify_witness(&load(input)?, *k, g),
        Command::RiemannRoch(i) => commands::riemann_roch(&load(i)?),
    }
}

/// One `key: value` line per top-level field.
pub fn render_human(body: &Value) -> String {
    match body {
        Value::Object(map) => map.iter().map(|(k, v)| format!("{k}: {v}\n")).collect(),
        other => format!("{other}\n"),
    }
}

pub fn render(report: &Report, human: bool) -> String {
    let mut out: String = report.trace.iter().map(|line| format!("{line}\n")).collect();
    if human {
        out.push_str(&render_human(&report.body));
    } else {
        out.push_str(&report.body.to_string());
        out.push('\n');
    }
    out
}

pub fn exit_status(report: &Report) -> i32 {
    if report.verified {
        0
    } else {
        1
    }
}

/// Parses `args`, runs the command and writes the report. Returns the exit
/// status.
pub fn run<I, T>(args: I, stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let sink: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    match execute(&cli.command, stdin) {
        Ok(report) => {
            let _ = stdout.write_all(render(&report, cli.human).as_bytes());
            exit_status(&report)
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}
