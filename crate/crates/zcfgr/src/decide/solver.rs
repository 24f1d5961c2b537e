//! External SMT-LIB2 solver sessions: script emission, process control with
//! a kill-based timeout, and model parsing.

use std::io::Read;
use std::path::PathBuf;
use std::process::{Command, Stdio};
use std::time::{Duration, Instant};

use thiserror::Error;

use crate::presburger::{emit_smt_with_logic, Assignment, Formula, Logic, SmtError};

/// Environment variable naming the solver executable. The solver is invoked
/// as `<solver> <file.smt2>` and must print `sat`/`unsat`/`unknown` and, on
/// sat, an SMT-LIB model block.
pub const SOLVER_ENV_VAR: &str = "ZCFGR_SOLVER";

pub const DEFAULT_TIMEOUT: Duration = Duration::from_secs(60);

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SatResult {
    Sat(Assignment),
    Unsat,
    Unknown,
}

#[derive(Debug, Error)]
pub enum SolverError {
    #[error("solver executable `{path}` could not be run: {source}")]
    NotFound {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("no solver configured: set {SOLVER_ENV_VAR} or put `z3` on PATH")]
    NotConfigured,
    #[error("i/o error while talking to the solver: {0}")]
    Io(#[from] std::io::Error),
    #[error("unparseable solver output: {0}")]
    Unparseable(String),
    #[error(transparent)]
    Emit(#[from] SmtError),
}

/// Handle to one external solver configuration. Each query spawns a fresh
/// process; a session should serve one query at a time, and cloning one per
/// worker thread is cheap.
#[derive(Debug, Clone)]
pub struct SolverSession {
    pub executable: PathBuf,
    pub timeout: Duration,
    pub logic: Logic,
}

impl SolverSession {
    pub fn new(executable: impl Into<PathBuf>, timeout: Duration, logic: Logic) -> Self {
        Self { executable: executable.into(), timeout, logic }
    }

    /// Resolves the solver from `ZCFGR_SOLVER`, falling back to `z3` on PATH.
    pub fn from_env(timeout: Duration, logic: Logic) -> Result<Self, SolverError> {
        if let Ok(path) = std::env::var(SOLVER_ENV_VAR) {
            return Ok(Self::new(path, timeout, logic));
        }
        let path_var = std::env::var_os("PATH").unwrap_or_default();
        for dir in std::env::split_paths(&path_var) {
            let candidate = dir.join("z3");
            if candidate.is_file() {
                return Ok(Self::new(candidate, timeout, logic));
            }
        }
        Err(SolverError::NotConfigured)
    }

    /// Emits the formula and runs one solver query. Quantified formulas are
    /// always declared under the quantified logic, whatever the session says.
    pub fn check_sat(&self, f: &Formula) -> Result<SatResult, SolverError> {
        let logic = if f.is_quantifier_free() { self.logic } else { Logic::Lia };
        let script = emit_smt_with_logic(f, logic)?;
        let free: Vec<String> = f.free_vars().into_iter().map(|v| v.name).collect();
        let stdout = self.run_script(&script)?;
        match stdout {
            None => Ok(SatResult::Unknown),
            Some(output) => parse_solver_output(&output, &free),
        }
    }

    /// Runs the script through the solver; `None` means the timeout fired.
    fn run_script(&self, script: &str) -> Result<Option<String>, SolverError> {
        let dir = tempfile::tempdir()?;
        let file = dir.path().join("query.smt2");
        std::fs::write(&file, script)?;
        let mut child = Command::new(&self.executable)
            .arg(&file)
            .stdin(Stdio::null())
            .stdout(Stdio::piped())
            .stderr(Stdio::piped())
            .spawn()
            .map_err(|source| SolverError::NotFound { path: self.executable.clone(), source })?;

        // Drain the pipes on their own threads so a large model cannot
        // deadlock against the timeout polling.
        let mut stdout_pipe = child.stdout.take().expect("stdout was piped");
        let mut stderr_pipe = child.stderr.take().expect("stderr was piped");
        let stdout_reader = std::thread::spawn(move || {
            let mut buffer = String::new();
            let _ = stdout_pipe.read_to_string(&mut buffer);
            buffer
        });
        let stderr_reader = std::thread::spawn(move || {
            let mut buffer = String::new();
            let _ = stderr_pipe.read_to_string(&mut buffer);
            buffer
        });

        let deadline = Instant::now() + self.timeout;
        let timed_out = loop {
            match child.try_wait()? {
                Some(_) => break false,
                None if Instant::now() >= deadline => {
                    let _ = child.kill();
                    let _ = child.wait();
                    break true;
                }
                None => std::thread::sleep(Duration::from_millis(2)),
            }
        };
        let stdout = stdout_reader.join().unwrap_or_default();
        let _ = stderr_reader.join();
        if timed_out {
            return Ok(None);
        }
        Ok(Some(stdout))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Sexp {
    Atom(String),
    List(Vec<Sexp>),
}

fn tokenize_sexp(input: &str) -> Vec<String> {
    let mut tokens = Vec::new();
    let mut current = String::new();
    for ch in input.chars() {
        match ch {
            '(' | ')' => {
                if !current.is_empty() {
                    tokens.push(std::mem::take(&mut current));
                }
                tokens.push(ch.to_string());
            }
            c if c.is_whitespace() => {
                if !current.is_empty() {
                    tokens.push(std::mem::take(&mut current));
                }
            }
            c => current.push(c),
        }
    }
    if !current.is_empty() {
        tokens.push(current);
    }
    tokens
}

fn parse_sexp_list(tokens: &[String], at: &mut usize) -> Result<Vec<Sexp>, SolverError> {
    let mut items = Vec::new();
    while *at < tokens.len() {
        match tokens[*at].as_str() {
            "(" => {
                *at += 1;
                items.push(Sexp::List(parse_sexp_list(tokens, at)?));
                if *at >= tokens.len() || tokens[*at] != ")" {
                    return Err(SolverError::Unparseable("unbalanced parentheses".into()));
                }
                *at += 1;
            }
            ")" => break,
            atom => {
                items.push(Sexp::Atom(atom.to_string()));
                *at += 1;
            }
        }
    }
    Ok(items)
}

fn sexp_int(value: &Sexp) -> Option<i64> {
    match value {
        Sexp::Atom(a) => a.parse().ok(),
        Sexp::List(items) => match items.as_slice() {
            [Sexp::Atom(minus), inner] if minus == "-" => sexp_int(inner).map(|n| -n),
            _ => None,
        },
    }
}

fn collect_model(items: &[Sexp], model: &mut Assignment) {
    for item in items {
        let Sexp::List(parts) = item else { continue };
        match parts.as_slice() {
            [Sexp::Atom(head), rest @ ..] if head == "model" => collect_model(rest, model),
            [Sexp::Atom(head), Sexp::Atom(name), Sexp::List(args), Sexp::Atom(_sort), value]
                if head == "define-fun" && args.is_empty() =>
            {
                if let Some(n) = sexp_int(value) {
                    model.set(name.clone(), n);
                }
            }
            _ => collect_model(parts, model),
        }
    }
}

/// Parses `sat`/`unsat`/`unknown` and, on sat, the model block. Variables the
/// solver leaves out default to zero, which downstream validation catches if
/// it ever matters.
fn parse_solver_output(output: &str, free_vars: &[String]) -> Result<SatResult, SolverError> {
    let verdict = output
        .lines()
        .map(str::trim)
        .find(|l| matches!(*l, "sat" | "unsat" | "unknown"))
        .ok_or_else(|| {
            let head: String = output.chars().take(400).collect();
            SolverError::Unparseable(head)
        })?;
    match verdict {
        "unsat" => Ok(SatResult::Unsat),
        "unknown" => Ok(SatResult::Unknown),
        _ => {
            let rest: String = output
                .lines()
                .skip_while(|l| l.trim() != "sat")
                .skip(1)
                .collect::<Vec<_>>()
                .join("\n");
            let tokens = tokenize_sexp(&rest);
            let mut at = 0;
            let items = parse_sexp_list(&tokens, &mut at)?;
            let mut model = Assignment::default();
            collect_model(&items, &mut model);
            for name in free_vars {
                if !model.contains(name) {
                    model.set(name.clone(), 0);
                }
            }
            Ok(SatResult::Sat(model))
        }
    }
}

/// Convenience wrapper matching the library-level naming.
pub fn check_sat(f: &Formula, session: &SolverSession) -> Result<SatResult, SolverError> {
    session.check_sat(f)
}
