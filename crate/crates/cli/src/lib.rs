//! Problem-file driver behind the `paratele` binary.

pub mod problem;

use std::time::Instant;

use serde::Serialize;

use paratele_core::exec::Config;
use paratele_core::hyperexp::{d_apply, elements_equal, op_apply, HElement};
use paratele_core::paratele::{existence_check_with, paratele_general_with, verify_parallel};
use paratele_core::ppv::ppv_defining_operator_with;
use paratele_core::syntax::{render_operator, render_ratfun};
use paratele_core::telescope::min_telescoper_with;
use paratele_core::{Error, ErrorClass, RatFun, Result};

pub use problem::{parse_problem, Problem, Task};

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct CertificatePart {
    pub coeff: String,
    pub term: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct Timings {
    pub total_ms: f64,
}

/// Outcome of a task; serialized as the JSON report.
#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub task: String,
    pub operator: Option<String>,
    pub certificate: Vec<CertificatePart>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub minimal: Option<bool>,
    pub order: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub group: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exists: Option<bool>,
    pub verified: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings: Option<Timings>,
}

#[derive(Clone, Debug, Default)]
pub struct Options {
    pub config: Config,
    pub verify: bool,
    pub timings: bool,
}

fn certificate_parts(g: &HElement, names: &[String]) -> Vec<CertificatePart> {
    g.parts()
        .iter()
        .map(|(c, h)| CertificatePart { coeff: render_ratfun(c, names), term: h.label().to_string() })
        .collect()
}

fn verify_failed(what: &str) -> Error {
    Error::InvariantBreach(format!("verification failed: {what}"))
}

fn check_input_count(p: &Problem) -> Result<()> {
    if p.inputs.len() + 1 != p.nvars() {
        return Err(Error::Problem(format!(
            "{} inputs for {} parameters; input i pairs with parameter i",
            p.inputs.len(),
            p.nvars() - 1
        )));
    }
    Ok(())
}

/// Runs `task` on `problem`. The `exists` task reports a negative answer as
/// `exists: false`; the `paratele` task fails with
/// [`Error::NoParallelTelescoperExists`].
pub fn execute(problem: &Problem, task: &Task, opts: &Options) -> Result<Report> {
    let start = Instant::now();
    let names = &problem.names;
    let cfg = &opts.config;
    let mut report = Report {
        task: task.name().to_string(),
        operator: None,
        certificate: Vec::new(),
        minimal: None,
        order: None,
        group: None,
        exists: None,
        verified: false,
        timings: None,
    };
    match task {
        Task::Telescope { input, var } => {
            let f = &problem
                .input(input)
                .ok_or_else(|| Error::Problem(format!("unknown input `{input}`")))?
                .element;
            let z = problem.var_index(var).ok_or_else(|| Error::UnknownVariable(var.clone()))?;
            let r = min_telescoper_with(f, z, cfg)?;
            if opts.verify && !elements_equal(&op_apply(&r.operator, f), &d_apply(&r.certificate, z)) {
                return Err(verify_failed("L(f) != D_z(g)"));
            }
            report.operator = Some(render_operator(&r.operator, names));
            report.order = Some(r.operator.order());
            report.minimal = Some(true);
            report.certificate = certificate_parts(&r.certificate, names);
        }
        Task::Paratele => {
            check_input_count(problem)?;
            let inputs = problem.elements();
            let r = paratele_general_with(&inputs, cfg)?;
            if opts.verify {
                verify_parallel(&r.operator, &r.certificate, &inputs).map_err(|e| verify_failed(&e.to_string()))?;
            }
            report.operator = Some(render_operator(&r.operator, names));
            report.order = Some(r.order());
            report.minimal = Some(r.minimal);
            report.certificate = certificate_parts(&r.certificate, names);
        }
        Task::Exists => {
            check_input_count(problem)?;
            let inputs = problem.elements();
            let Some(p) = existence_check_with(&inputs, cfg)? else {
                report.exists = Some(false);
                return Ok(finish(report, opts, start));
            };
            if opts.verify {
                for i in 0..inputs.len() {
                    for j in i + 1..inputs.len() {
                        let diff = d_apply(&inputs[j], i + 1).sub(&d_apply(&inputs[i], j + 1));
                        if !op_apply(&p, &diff).is_zero() {
                            return Err(verify_failed(&format!("P does not annihilate the pair ({}, {})", i + 1, j + 1)));
                        }
                    }
                }
            }
            report.exists = Some(true);
            report.operator = Some(render_operator(&p, names));
            report.order = Some(p.order());
        }
        Task::Ppv => {
            check_input_count(problem)?;
            if let Some(i) = problem.inputs.iter().find(|i| !i.rational) {
                return Err(Error::Problem(format!("ppv needs rational inputs; `{}` carries a term", i.name)));
            }
            let fs: Vec<_> = problem
                .inputs
                .iter()
                .map(|i| i.element.parts().first().map_or_else(|| RatFun::zero(problem.nvars()), |p| p.0.clone()))
                .collect();
            let r = ppv_defining_operator_with(&fs, cfg)?;
            if opts.verify {
                for (i, f) in fs.iter().enumerate() {
                    if r.operator.apply_to(f) != r.certificate.derive(i + 1) {
                        return Err(verify_failed(&format!("L(f_{}) != D_{}(g)", i + 1, i + 1)));
                    }
                }
            }
            report.operator = Some(render_operator(&r.operator, names));
            report.order = Some(r.operator.order());
            report.minimal = Some(true);
            report.certificate = vec![CertificatePart { coeff: render_ratfun(&r.certificate, names), term: "1".into() }];
            report.group = Some(r.group_description);
        }
    }
    Ok(finish(report, opts, start))
}

fn finish(mut report: Report, opts: &Options, start: Instant) -> Report {
    report.verified = opts.verify;
    if opts.timings {
        report.timings = Some(Timings { total_ms: start.elapsed().as_secs_f64() * 1e3 });
    }
    report
}

/// Human-readable report, one `key: value` per line.
pub fn render_text(r: &Report) -> String {
    let mut out = format!("task: {}\n", r.task);
    if let Some(e) = r.exists {
        out += &format!("exists: {e}\n");
    }
    if let Some(op) = &r.operator {
        out += &format!("operator: {op}\n");
    }
    if let Some(k) = r.order {
        out += &format!("order: {k}\n");
    }
    if let Some(m) = r.minimal {
        out += &format!("minimal: {m}\n");
    }
    if let Some(g) = &r.group {
        out += &format!("group: {g}\n");
    }
    if r.exists.is_none() {
        let parts: Vec<String> = r
            .certificate
            .iter()
            .map(|p| if p.term == "1" { p.coeff.clone() } else { format!("({}) * {}", p.coeff, p.term) })
            .collect();
        out += &format!("certificate: {}\n", if parts.is_empty() { "0".to_string() } else { parts.join(" + ") });
    }
    if r.verified {
        out += "verified: true\n";
    }
    if let Some(t) = &r.timings {
        out += &format!("time: {:.3} ms\n", t.total_ms);
    }
    out
}

/// Process exit code for an error: 1 negative answer, 2 bad input, 3 internal.
pub fn exit_code(e: &Error) -> i32 {
    match e.class() {
        ErrorClass::Negative => 1,
        ErrorClass::Input => 2,
        ErrorClass::Internal => 3,
    }
}
