//! Line-oriented problem files.
//!
//! ```text
//! # comments and blank lines are ignored
//! vars: t, x1, x2
//! term h: dlog t = -1/(2*t)
//! input f1 = t/(t + x1) * h
//! input f2 = 1/(t + x2) * h
//! task: paratele
//! ```
//!
//! The first variable is the integration variable. A term lists the
//! log-derivatives of a hyperexponential function; omitted entries are 0.
//! An input is a rational expression, optionally times a term name; input
//! `i` pairs with the `i`-th parameter.

use std::sync::Arc;

use paratele_core::hyperexp::{HElement, HTerm};
use paratele_core::syntax::{parse_expr_at, DT};
use paratele_core::{Error, RatFun, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Task {
    /// Minimal telescoper of one input with respect to one parameter.
    Telescope { input: String, var: String },
    Paratele,
    Exists,
    Ppv,
}

impl Task {
    pub fn name(&self) -> &'static str {
        match self {
            Task::Telescope { .. } => "telescope",
            Task::Paratele => "paratele",
            Task::Exists => "exists",
            Task::Ppv => "ppv",
        }
    }
}

#[derive(Clone, Debug)]
pub struct Input {
    pub name: String,
    pub element: HElement,
    /// Whether the input was given without a term.
    pub rational: bool,
}

#[derive(Clone, Debug)]
pub struct Problem {
    pub names: Vec<String>,
    pub terms: Vec<(String, Arc<HTerm>)>,
    pub inputs: Vec<Input>,
    pub task: Option<Task>,
}

impl Problem {
    pub fn nvars(&self) -> usize {
        self.names.len()
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|v| v == name)
    }

    pub fn input(&self, name: &str) -> Option<&Input> {
        self.inputs.iter().find(|i| i.name == name)
    }

    pub fn elements(&self) -> Vec<HElement> {
        self.inputs.iter().map(|i| i.element.clone()).collect()
    }
}

fn problem_err(line: usize, msg: impl std::fmt::Display) -> Error {
    Error::Problem(format!("line {line}: {msg}"))
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_alphabetic() || c == '_')
        && chars.all(|c| c.is_alphanumeric() || c == '_')
}

/// Byte offset to character column.
fn col_of(line: &str, part: &str) -> usize {
    let offset = part.as_ptr() as usize - line.as_ptr() as usize;
    line[..offset].chars().count()
}

pub fn parse_problem(text: &str) -> Result<Problem> {
    let mut names: Option<Vec<String>> = None;
    let mut terms: Vec<(String, Arc<HTerm>)> = Vec::new();
    let mut inputs: Vec<Input> = Vec::new();
    let mut task = None;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("");
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        if let Some(rest) = trimmed.strip_prefix("vars:") {
            if names.is_some() {
                return Err(problem_err(line_no, "`vars:` given twice"));
            }
            let vs: Vec<String> = rest.split(',').map(|s| s.trim().to_string()).collect();
            for (i, v) in vs.iter().enumerate() {
                if !is_identifier(v) || v == DT {
                    return Err(problem_err(line_no, format!("`{v}` is not a valid variable name")));
                }
                if vs[..i].contains(v) {
                    return Err(problem_err(line_no, format!("variable `{v}` declared twice")));
                }
            }
            if vs.len() < 2 {
                return Err(problem_err(line_no, "need the integration variable and at least one parameter"));
            }
            names = Some(vs);
            continue;
        }
        if let Some(rest) = trimmed.strip_prefix("task:") {
            task = Some(parse_task(rest, line_no)?);
            continue;
        }
        let vars = names.as_ref().ok_or_else(|| problem_err(line_no, "`vars:` must come first"))?;
        let n = vars.len();
        if let Some(rest) = trimmed.strip_prefix("term ") {
            let (name, body) = rest
                .split_once(':')
                .ok_or_else(|| problem_err(line_no, "expected `term NAME: dlog VAR = EXPR, ...`"))?;
            let name = name.trim();
            if !is_identifier(name) || vars.iter().any(|v| v == name) || terms.iter().any(|(t, _)| t == name) {
                return Err(problem_err(line_no, format!("`{name}` is not a fresh term name")));
            }
            let mut logd = vec![RatFun::zero(n); n];
            let mut seen = vec![false; n];
            for entry in body.split(',') {
                let (lhs, rhs) = entry
                    .split_once('=')
                    .ok_or_else(|| problem_err(line_no, "expected `dlog VAR = EXPR`"))?;
                let var = lhs
                    .trim()
                    .strip_prefix("dlog")
                    .map(str::trim)
                    .ok_or_else(|| problem_err(line_no, "expected `dlog VAR = EXPR`"))?;
                let v = vars
                    .iter()
                    .position(|x| x == var)
                    .ok_or_else(|| Error::UnknownVariable(var.to_string()))?;
                if std::mem::replace(&mut seen[v], true) {
                    return Err(problem_err(line_no, format!("dlog {var} given twice")));
                }
                logd[v] = parse_expr_at(rhs, vars, line_no, col_of(raw, rhs))?;
            }
            terms.push((name.to_string(), HTerm::new(name, logd)?));
            continue;
        }
        if let Some(rest) = trimmed.strip_prefix("input ") {
            let (name, body) = rest
                .split_once('=')
                .ok_or_else(|| problem_err(line_no, "expected `input NAME = EXPR [* TERM]`"))?;
            let name = name.trim();
            if !is_identifier(name) || inputs.iter().any(|i| i.name == name) {
                return Err(problem_err(line_no, format!("`{name}` is not a fresh input name")));
            }
            // a trailing `* TERM` names the term; everything before it is the coefficient
            let (expr, term) = match body.rsplit_once('*') {
                Some((e, t)) if terms.iter().any(|(k, _)| k == t.trim()) => {
                    let t = t.trim();
                    (e, terms.iter().find(|(k, _)| k == t).map(|(_, h)| h.clone()))
                }
                _ => (body, None),
            };
            let coeff = parse_expr_at(expr, vars, line_no, col_of(raw, expr))?;
            let rational = term.is_none();
            let element = match term {
                Some(h) => HElement::single(coeff, h),
                None => HElement::rational(coeff),
            };
            inputs.push(Input { name: name.to_string(), element, rational });
            continue;
        }
        return Err(problem_err(line_no, format!("unrecognized line `{trimmed}`")));
    }
    let names = names.ok_or_else(|| problem_err(0, "missing `vars:` line"))?;
    Ok(Problem { names, terms, inputs, task })
}

fn parse_task(rest: &str, line_no: usize) -> Result<Task> {
    let words: Vec<&str> = rest.split_whitespace().collect();
    match words.as_slice() {
        ["telescope", input, var] => Ok(Task::Telescope { input: input.to_string(), var: var.to_string() }),
        ["paratele"] => Ok(Task::Paratele),
        ["exists"] => Ok(Task::Exists),
        ["ppv"] => Ok(Task::Ppv),
        _ => Err(problem_err(
            line_no,
            "expected `task: telescope INPUT VAR`, `task: paratele`, `task: exists` or `task: ppv`",
        )),
    }
}
