//! Batch front end for the `umbral` crate: reads a JSON job, runs it, and
//! prints polynomials and verification outcomes in a deterministic form.

pub mod job;
pub mod render;

use std::fmt::Write;

use serde::{Serialize, Serializer};
use thiserror::Error;
use umbral::abel::{abel_affine, abel_closed, abel_operator_form, binomial_type_classify, AbelMatrices};
use umbral::algebra::{MPoly, MultiIndex};
use umbral::goncarov::{biorthogonality_check, interpolation_solve, GoncarovTable, InterpolationGrid, LinearGrid};
use umbral::operators::SeparableSystem;
use umbral::report::Outcome;
use umbral::sequences::{
    appell_verify, basic_from_generating_function, binomial_identity_check, verify_basic_properties, BasicSequence,
};

pub use job::{Job, JobSpec, Overrides, Suite, Target};
pub use render::{render, Format};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("internal error: {0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Invalid(_) => EXIT_INVALID,
            CliError::Internal(_) => EXIT_INTERNAL,
        }
    }
}

impl From<umbral::Error> for CliError {
    fn from(e: umbral::Error) -> Self {
        match e {
            umbral::Error::NonExactDivision => CliError::Internal(e.to_string()),
            _ => CliError::Invalid(e.to_string()),
        }
    }
}

/// One computed polynomial.
#[derive(Clone, Debug, Serialize)]
pub struct Entry {
    pub name: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<MultiIndex>,
    #[serde(serialize_with = "poly_json")]
    pub poly: MPoly,
}

fn poly_json<S: Serializer>(p: &MPoly, ser: S) -> Result<S::Ok, S::Error> {
    p.to_json().serialize(ser)
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub outcome: Outcome,
}

impl Check {
    fn new(name: impl Into<String>, outcome: Outcome) -> Self {
        Check { name: name.into(), outcome }
    }
}

/// Everything a run prints. Identical jobs give identical reports; wall-clock
/// timing is reported on stderr by the binary and never lands here.
#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub job: JobSpec,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub results: Vec<Entry>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub explain: Vec<String>,
}

impl Report {
    fn new(job: &Job) -> Self {
        Report { job: job.spec.clone(), results: Vec::new(), checks: Vec::new(), explain: Vec::new() }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.outcome.passed())
    }

    /// A failed suite exits with 1; a failed cross-check during a
    /// computation means two exact paths disagree, which exits with 3.
    pub fn exit_code(&self) -> i32 {
        match (self.passed(), self.job.target) {
            (true, _) => EXIT_OK,
            (false, Target::Verify) => EXIT_VERIFY_FAILED,
            (false, _) => EXIT_INTERNAL,
        }
    }

    /// A JSON object with one compact line per job, result, check and
    /// explanation.
    fn to_json_text(&self) -> String {
        fn line<T: Serialize>(v: &T) -> String {
            serde_json::to_string(v).expect("reports serialize")
        }
        fn section<T: Serialize>(name: &str, items: &[T]) -> Option<String> {
            if items.is_empty() {
                return None;
            }
            let body: Vec<String> = items.iter().map(|v| format!("    {}", line(v))).collect();
            Some(format!("  \"{name}\": [\n{}\n  ]", body.join(",\n")))
        }
        let mut parts = vec![format!("  \"job\": {}", line(&self.job))];
        parts.extend(section("results", &self.results));
        parts.extend(section("checks", &self.checks));
        parts.extend(section("explain", &self.explain));
        format!("{{\n{}\n}}\n", parts.join(",\n"))
    }

    pub fn to_text(&self) -> String {
        let format = self.job.format();
        if format == Format::Json {
            return self.to_json_text();
        }
        let comment = if format == Format::Latex { "% " } else { "# " };
        let mut out = String::new();
        for e in &self.results {
            let label = match &e.n {
                Some(n) => render::indexed_name(&e.name, n, format),
                None => e.name.clone(),
            };
            let _ = writeln!(out, "{label} = {}", render(&e.poly, format));
        }
        for c in &self.checks {
            let _ = writeln!(out, "{comment}{}: {}", c.name, c.outcome);
        }
        for line in &self.explain {
            let _ = writeln!(out, "{comment}{line}");
        }
        out
    }
}

fn explain_system(job: &Job, report: &mut Report) -> Result<(), CliError> {
    let s = &job.system;
    for (i, op) in s.ops().iter().enumerate() {
        report.explain.push(format!("operator {i}: {}", op.label()));
    }
    report.explain.push(format!("jacobian determinant: {}", s.det()));
    let strict = s.check_strict()?;
    let scope = match strict.certified_to {
        None => "proved".to_string(),
        Some(n) => format!("checked to order {n}"),
    };
    report.explain.push(format!("strict: {} ({scope})", strict.strict));
    Ok(())
}

fn separable(job: &Job) -> Result<SeparableSystem, CliError> {
    job.system.as_separable().ok_or_else(|| CliError::Invalid("closed Abel formulas need a separable system".into()))
}

fn first_mismatch(
    indices: &[MultiIndex],
    got: &[MPoly],
    other: impl Fn(&MultiIndex) -> Result<MPoly, CliError>,
    what: &str,
) -> Result<Outcome, CliError> {
    for (n, p) in indices.iter().zip(got) {
        if &other(n)? != p {
            return Ok(Outcome::fail(n, format!("{what} differs")));
        }
    }
    Ok(Outcome::Pass)
}

/// Runs a job whose target is `basic`, `goncarov`, `abel` or `solve`.
pub fn cmd_compute(job: &Job, jobs: usize) -> Result<Report, CliError> {
    let mut report = Report::new(job);
    if job.spec.explain {
        explain_system(job, &mut report)?;
    }
    let s = &job.system;
    match job.spec.target {
        Target::Basic => {
            let basic = BasicSequence::new(s.clone());
            let polys: Vec<MPoly> = job.indices.iter().map(|n| basic.get(n)).collect::<Result<_, _>>()?;
            if job.spec.crosscheck && s.is_separable() {
                let o = first_mismatch(
                    &job.indices,
                    &polys,
                    |n| Ok(basic_from_generating_function(s, n)?),
                    "generating function coefficient",
                )?;
                report.checks.push(Check::new("product formula agrees with generating function", o));
            }
            push_results(&mut report, "p", &job.indices, polys);
        }
        Target::Goncarov => {
            let table = GoncarovTable::new(s.clone(), job.grid().clone())?;
            table.populate(&job.indices, jobs)?;
            let polys: Vec<MPoly> = job.indices.iter().map(|n| table.get(n)).collect::<Result<_, _>>()?;
            push_results(&mut report, "t", &job.indices, polys);
        }
        Target::Abel => {
            let sep = separable(job)?;
            let (offset, linear): (Option<&[_]>, &LinearGrid) = match job.grid() {
                InterpolationGrid::Linear(a) => (None, a),
                InterpolationGrid::Affine { offset, linear } => (Some(offset), linear),
                InterpolationGrid::Table { .. } => {
                    return Err(CliError::Invalid("abel target needs a linear or affine grid".into()));
                }
            };
            let closed = |n: &MultiIndex| -> Result<MPoly, CliError> {
                Ok(match offset {
                    None => abel_closed(&sep, linear, n)?,
                    Some(v) => abel_affine(&sep, v, linear, n)?,
                })
            };
            let polys: Vec<MPoly> = job.indices.iter().map(closed).collect::<Result<_, _>>()?;
            if job.spec.explain {
                for n in &job.indices {
                    let det = AbelMatrices::new(&sep, linear, n)?.det_b_plus_c();
                    report.explain.push(format!("det(B+C) at n={n}: {}", render(&det, Format::Plain)));
                }
            }
            if job.spec.crosscheck {
                let minus: Vec<_> = offset.unwrap_or(&[]).iter().map(|c| -c).collect();
                let operator = |n: &MultiIndex| -> Result<MPoly, CliError> {
                    let p = abel_operator_form(&sep, linear, n)?;
                    Ok(if minus.is_empty() { p } else { p.translate(&minus)? })
                };
                let o = first_mismatch(&job.indices, &polys, operator, "operator form")?;
                report.checks.push(Check::new("closed form agrees with operator form", o));

                let table = GoncarovTable::new(s.clone(), job.grid().clone())?;
                table.populate(&job.indices, jobs)?;
                let o = first_mismatch(&job.indices, &polys, |n| Ok(table.get(n)?), "recurrence")?;
                report.checks.push(Check::new("closed form agrees with recurrence", o));
            }
            push_results(&mut report, "t", &job.indices, polys);
        }
        Target::Solve => {
            let set = job.lower_set.as_ref().expect("validated solve jobs have a lower set");
            let p = interpolation_solve(s, job.grid(), set, &job.values)?;
            report.results.push(Entry { name: "P".into(), n: None, poly: p });
        }
        Target::Verify => return cmd_verify(job, jobs),
    }
    Ok(report)
}

fn push_results(report: &mut Report, name: &str, indices: &[MultiIndex], polys: Vec<MPoly>) {
    for (n, poly) in indices.iter().zip(polys) {
        report.results.push(Entry { name: name.into(), n: Some(n.clone()), poly });
    }
}

/// Runs the named verification suite.
pub fn cmd_verify(job: &Job, jobs: usize) -> Result<Report, CliError> {
    let mut report = Report::new(job);
    if job.spec.explain {
        explain_system(job, &mut report)?;
    }
    let s = &job.system;
    let suite = job.spec.suite.ok_or_else(|| CliError::Invalid("target verify needs a suite".into()))?;
    match suite {
        Suite::Biorthogonality => {
            let maxdeg = job.max_degree(3);
            let t = GoncarovTable::new(s.clone(), job.grid().clone())?.table(maxdeg, jobs)?;
            report.checks.push(Check::new("biorthogonality", biorthogonality_check(s, job.grid(), &t, maxdeg)?));
        }
        Suite::Binomial => {
            let v = binomial_type_classify(s, job.grid(), job.max_degree(3))?;
            report.checks.push(Check::new("nodes on a linear grid", v.geometric));
            report.checks.push(Check::new("binomial identity", v.algebraic));
        }
        Suite::Appell => {
            let order = job.spec.order.unwrap_or(6);
            let t = GoncarovTable::new(s.clone(), job.grid().clone())?.table(order as u32, jobs)?;
            let r = appell_verify(s, job.grid(), &t, order)?;
            report.checks.push(Check::new("appell relation", r.alternate));
            if let Some(o) = r.delta_form {
                report.checks.push(Check::new("appell relation in delta form", o));
            }
        }
        Suite::Basic => {
            let maxdeg = job.max_degree(4);
            let table = BasicSequence::new(s.clone()).table(maxdeg)?;
            let r = verify_basic_properties(s, &table, maxdeg)?;
            report.checks.push(Check::new("normalization", r.normalization));
            report.checks.push(Check::new("vanishing at the origin", r.vanishing));
            report.checks.push(Check::new("lowering", r.lowering));
            report.checks.push(Check::new("binomial identity", binomial_identity_check(&table, maxdeg)));
        }
    }
    Ok(report)
}

/// Validates a job and runs it, returning the report.
pub fn run_job(text: &str, overrides: &Overrides, jobs: usize) -> Result<Report, CliError> {
    let mut spec = JobSpec::from_json(text)?;
    spec.apply(overrides);
    let job = spec.validate()?;
    match job.spec.target {
        Target::Verify => cmd_verify(&job, jobs),
        _ => cmd_compute(&job, jobs),
    }
}

/// A polynomial to render: `{"dim": 2, "poly": [{"exp": [1, 1], "coef": "3/2"}]}`.
#[derive(Debug, serde::Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RenderSpec {
    #[serde(default)]
    pub dim: Option<usize>,
    pub poly: serde_json::Value,
    #[serde(default)]
    pub format: Option<Format>,
}

pub fn run_render(text: &str, format: Option<Format>) -> Result<String, CliError> {
    let spec: RenderSpec = serde_json::from_str(text).map_err(|e| CliError::Invalid(format!("render spec: {e}")))?;
    let p = MPoly::from_json(&spec.poly, spec.dim)?;
    let mut out = render(&p, format.or(spec.format).unwrap_or(Format::Plain));
    out.push('\n');
    Ok(out)
}
