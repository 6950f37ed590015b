use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use num_rational::Rational64;
use tropical_subst::oracle::{
    differential_check, fractional_differential_check, fractional_grid_optimize, grid_optimize, is_feasible, Finding,
    GridSpec, Verdict,
};
use tropical_subst::solver::solve_with;
use tropical_subst::{charnes_cooper, recover, ExtScalar, SolveOptions, Status};

use crate::file::{read_problem, InputError, ProblemSpec};
use crate::report::{self, Format};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_GAP: i32 = 2;
pub const EXIT_MISMATCH: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "tropical-subst", version, about = "Max-plus linear and linear-fractional programming by substitution")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Solve a problem file.
    Solve {
        file: PathBuf,
        /// Value of the homogenization variable in the reported point.
        #[arg(long, default_value = "0", allow_hyphen_values = true, value_parser = scalar)]
        h: ExtScalar,
        /// Include every substitution step.
        #[arg(long)]
        trace: bool,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Maximum number of min/max switches (default 2n).
        #[arg(long)]
        switch_limit: Option<usize>,
    },
    /// Brute-force optimum over a lattice box.
    Oracle {
        file: PathBuf,
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Feasibility and objective of one point.
    Check {
        file: PathBuf,
        /// Comma-separated coordinates, e.g. `-2,2` or `0,-inf`.
        #[arg(long, allow_hyphen_values = true)]
        point: String,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Compare the solver against the lattice oracle.
    Verify {
        file: PathBuf,
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

#[derive(clap::Args, Debug)]
struct GridArgs {
    /// Half-width of the search box (default 3 M + 3, M the largest entry).
    #[arg(long, value_parser = rational)]
    bound: Option<Rational64>,
    /// Lattice step (default 1).
    #[arg(long, value_parser = rational)]
    step: Option<Rational64>,
}

fn scalar(s: &str) -> Result<ExtScalar, String> {
    s.parse().map_err(|e: tropical_subst::Error| e.to_string())
}

fn rational(s: &str) -> Result<Rational64, String> {
    scalar(s)?.finite().ok_or_else(|| format!("{s} is not finite"))
}

enum Failure {
    Input(String),
    Gap,
    Mismatch,
}

impl From<InputError> for Failure {
    fn from(e: InputError) -> Self {
        Failure::Input(e.to_string())
    }
}

impl From<tropical_subst::Error> for Failure {
    fn from(e: tropical_subst::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

/// Runs the command line `args` (program name first) and returns the exit
/// code. Results go to `out`, errors and notes to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    let mut text = String::new();
    let result = dispatch(cli.command, &mut text, err);
    let _ = out.write_all(text.as_bytes());
    match result {
        Ok(()) => EXIT_OK,
        Err(Failure::Input(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_INPUT
        }
        Err(Failure::Gap) => EXIT_GAP,
        Err(Failure::Mismatch) => EXIT_MISMATCH,
    }
}

fn grid_for(spec: &ProblemSpec, g: &GridArgs) -> Result<GridSpec, Failure> {
    let default = match spec {
        ProblemSpec::Linear(p) => GridSpec::default_for(p),
        ProblemSpec::Fractional(fp) => GridSpec::default_for_fractional(fp),
    };
    if g.bound.is_none() && g.step.is_none() {
        return Ok(default);
    }
    Ok(GridSpec::new(g.bound.unwrap_or(default.bound), g.step.unwrap_or(default.step))?)
}

fn emit(out: &mut String, format: Format, json: serde_json::Map<String, serde_json::Value>, text: String) {
    match format {
        Format::Json => out.push_str(&report::render_json(json)),
        Format::Text => out.push_str(&text),
    }
}

fn dispatch(cmd: Command, out: &mut String, err: &mut dyn Write) -> Result<(), Failure> {
    match cmd {
        Command::Solve {
            file,
            h,
            trace,
            format,
            switch_limit,
        } => solve_cmd(&file, h, trace, format, switch_limit, out, err),
        Command::Oracle { file, grid, format } => {
            let spec = read_problem(&file)?;
            let g = grid_for(&spec, &grid)?;
            let r = match &spec {
                ProblemSpec::Linear(p) => grid_optimize(p, &g)?,
                ProblemSpec::Fractional(fp) => fractional_grid_optimize(fp, &g)?,
            };
            emit(out, format, report::grid_json(&r), report::grid_text(&r));
            Ok(())
        }
        Command::Check { file, point, format } => check_cmd(&file, &point, format, out),
        Command::Verify { file, grid, format } => {
            let spec = read_problem(&file)?;
            let g = grid_for(&spec, &grid)?;
            let rep = match &spec {
                ProblemSpec::Linear(p) => differential_check(p, &g),
                ProblemSpec::Fractional(fp) => fractional_differential_check(fp, &g),
            };
            emit(out, format, report::verify_json(&rep), report::verify_text(&rep));
            let status = rep.solution.as_ref().map(|s| s.status);
            match rep.verdict {
                Verdict::Agree => Ok(()),
                Verdict::Disagree => Err(Failure::Mismatch),
                Verdict::NotComparable => match rep.findings.first() {
                    Some(Finding::SolverError(e)) | Some(Finding::OracleError(e)) => Err(Failure::Input(e.to_string())),
                    _ if status == Some(Status::PaperGap) => Err(Failure::Gap),
                    _ => Err(Failure::Mismatch),
                },
            }
        }
    }
}

fn solve_cmd(
    file: &Path,
    h: ExtScalar,
    trace: bool,
    format: Format,
    switch_limit: Option<usize>,
    out: &mut String,
    err: &mut dyn Write,
) -> Result<(), Failure> {
    let spec = read_problem(file)?;
    let opts = SolveOptions { h, switch_limit };
    let (lp, fractional) = match &spec {
        ProblemSpec::Linear(p) => (p.clone(), false),
        ProblemSpec::Fractional(fp) => (charnes_cooper(fp)?, true),
    };
    let sol = solve_with(&lp, &opts)?;
    let names = report::variable_names(spec.n(), fractional);
    let mut json = report::solution_json(&sol, &names, trace);
    let mut text = report::solution_text(&sol, &names, trace);
    if fractional && sol.status == Status::Finite {
        let rec = recover(&sol);
        json.insert("recovered".into(), report::recovered_json(&rec));
        text.push_str(&report::recovered_text(&rec));
    }
    emit(out, format, json, text);
    if sol.status == Status::PaperGap {
        for d in &sol.diagnostics {
            let _ = writeln!(err, "stopped: {d}");
        }
        return Err(Failure::Gap);
    }
    Ok(())
}

fn check_cmd(file: &Path, point: &str, format: Format, out: &mut String) -> Result<(), Failure> {
    let spec = read_problem(file)?;
    let x = point
        .split(',')
        .map(|t| scalar(t.trim()))
        .collect::<Result<Vec<_>, _>>()
        .map_err(Failure::Input)?;
    if x.len() != spec.n() {
        return Err(Failure::Input(format!("point has {} coordinates, the problem has {}", x.len(), spec.n())));
    }
    let (feasible, objective) = match &spec {
        ProblemSpec::Linear(p) => (is_feasible(&x, p)?, Some(p.objective(&x, ExtScalar::one()))),
        ProblemSpec::Fractional(fp) => (is_feasible(&x, &fp.constraints())?, fp.objective(&x)),
    };
    let mut json = serde_json::Map::new();
    json.insert("feasible".into(), feasible.into());
    json.insert("objective".into(), objective.map_or(serde_json::Value::Null, crate::file::token));
    let text = format!(
        "{}\nobjective: {}\n",
        if feasible { "feasible" } else { "infeasible" },
        objective.map_or("undefined".to_string(), |v| v.to_string())
    );
    emit(out, format, json, text);
    Ok(())
}
