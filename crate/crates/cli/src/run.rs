//! Command execution and report assembly.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use crosshull::cross::{verify_prop24, Prop24Report};
use crosshull::extremal::{remark22_campaign, Counterexample, ExtremalProblem, PropertyCheck};
use crosshull::reinhardt::{
    cross_envelope_verify, DohFailure, DohVerdict, LogPoint, RelativeExtremal, DEFAULT_TRUNCATION,
};
use crosshull::{Error, Rational};
use serde::de::DeserializeOwned;
use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::format::{
    domain_json, hpolytope_json, log_point_json, rat, vector, vdata_json,
    CrossJson, DomainJson, FormatError, LogPointsJson, PointsJson, ProblemJson, ReinhardtCrossJson,
};
use crate::modulus;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Command {
    PhiEval { spec: PathBuf, points: PathBuf },
    PhiVerify { spec: PathBuf, samples: usize, seed: u64 },
    CrossVerify { spec: PathBuf, samples: usize, seed: u64 },
    ReinhardtDoh { domain: PathBuf },
    ReinhardtEnvelope { domain: PathBuf },
    ReinhardtHstar { a: PathBuf, d: PathBuf, points: PathBuf },
    ReinhardtCrossVerify { spec: PathBuf, samples: usize, seed: u64 },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Self::PhiEval { .. } => "phi eval",
            Self::PhiVerify { .. } => "phi verify",
            Self::CrossVerify { .. } => "cross verify",
            Self::ReinhardtDoh { .. } => "reinhardt doh",
            Self::ReinhardtEnvelope { .. } => "reinhardt envelope",
            Self::ReinhardtHstar { .. } => "reinhardt hstar",
            Self::ReinhardtCrossVerify { .. } => "reinhardt cross-verify",
        }
    }
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub command: Command,
    /// Lower bound `-M` for polydisc log-images.
    pub truncation: Rational,
    /// Decimal digits for modulus input and approximate modulus output.
    pub precision: Option<u32>,
    /// Accept decimal moduli, which are rounded to rational log-coordinates.
    pub inexact: bool,
    pub timing: bool,
}

impl RunConfig {
    pub fn new(command: Command) -> Self {
        Self {
            command,
            truncation: Rational::from_integer(DEFAULT_TRUNCATION.into()),
            precision: None,
            inexact: false,
            timing: false,
        }
    }

    fn to_json(&self) -> Value {
        let path = |p: &Path| Value::String(p.display().to_string());
        let mut m = Map::new();
        match &self.command {
            Command::PhiEval { spec, points } => {
                m.insert("spec".into(), path(spec));
                m.insert("points".into(), path(points));
            }
            Command::PhiVerify { spec, samples, seed }
            | Command::CrossVerify { spec, samples, seed }
            | Command::ReinhardtCrossVerify { spec, samples, seed } => {
                m.insert("spec".into(), path(spec));
                m.insert("samples".into(), json!(samples));
                m.insert("seed".into(), json!(seed));
            }
            Command::ReinhardtDoh { domain } | Command::ReinhardtEnvelope { domain } => {
                m.insert("domain".into(), path(domain));
            }
            Command::ReinhardtHstar { a, d, points } => {
                m.insert("A".into(), path(a));
                m.insert("D".into(), path(d));
                m.insert("points".into(), path(points));
            }
        }
        m.insert("truncation".into(), rat(&self.truncation));
        m.insert("precision".into(), json!(self.precision));
        m.insert("inexact".into(), json!(self.inexact));
        Value::Object(m)
    }
}

/// Ways a run can fail before producing results.
#[derive(Debug, Error)]
pub enum RunError {
    #[error("{path}: {source}")]
    Read { path: String, source: std::io::Error },
    #[error("{path}: {source}")]
    Json { path: String, source: serde_json::Error },
    #[error("{path}: {source}")]
    Format { path: String, source: FormatError },
    #[error(transparent)]
    Modulus(#[from] modulus::ModulusError),
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Library(#[from] Error),
}

impl RunError {
    /// Invariant failures are counterexamples to the implementation (exit 1);
    /// everything else is rejected input (exit 2).
    pub fn exit_code(&self) -> u8 {
        match self {
            Self::Library(Error::Invariant(_)) => 1,
            _ => 2,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub report: Value,
    /// 0: success; 1: counterexample found; 2: input error.
    pub exit_code: u8,
}

impl Outcome {
    /// Pretty JSON with sorted keys and a trailing newline.
    pub fn render(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.report).expect("report is valid JSON");
        s.push('\n');
        s
    }
}

struct Body {
    results: Value,
    violations: Vec<Value>,
    exit_code: u8,
}

impl Body {
    fn new(results: Value, violations: Vec<Value>) -> Self {
        let exit_code = if violations.is_empty() { 0 } else { 1 };
        Self {
            results,
            violations,
            exit_code,
        }
    }
}

pub fn run(config: &RunConfig) -> Outcome {
    let start = Instant::now();
    let (body, error) = match execute(config) {
        Ok(body) => (body, None),
        Err(e) => {
            let code = e.exit_code();
            let violations = if code == 1 {
                vec![json!({"detail": e.to_string()})]
            } else {
                vec![]
            };
            let body = Body {
                results: Value::Null,
                violations,
                exit_code: code,
            };
            (body, Some(e.to_string()))
        }
    };
    let timing = if config.timing {
        json!(start.elapsed().as_millis() as u64)
    } else {
        Value::Null
    };
    let mut report = json!({
        "command": config.command.name(),
        "config": config.to_json(),
        "results": body.results,
        "violations": body.violations,
        "timing_ms": timing,
    });
    if let Some(e) = error {
        report["error"] = Value::String(e);
    }
    Outcome {
        report,
        exit_code: body.exit_code,
    }
}

fn load<T: DeserializeOwned>(path: &Path) -> Result<T, RunError> {
    let text = fs::read_to_string(path).map_err(|source| RunError::Read {
        path: path.display().to_string(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|source| RunError::Json {
        path: path.display().to_string(),
        source,
    })
}

fn parsed<T>(path: &Path, r: Result<T, FormatError>) -> Result<T, RunError> {
    r.map_err(|source| match source {
        FormatError::Library(Error::Invariant(m)) => RunError::Library(Error::Invariant(m)),
        source => RunError::Format {
            path: path.display().to_string(),
            source,
        },
    })
}

fn execute(config: &RunConfig) -> Result<Body, RunError> {
    match &config.command {
        Command::PhiEval { spec, points } => {
            let prob = parsed(spec, load::<ProblemJson>(spec)?.parse())?;
            let pts = load::<PointsJson>(points)?.parse();
            phi_eval(&prob, &pts)
        }
        Command::PhiVerify { spec, samples, seed } => {
            let prob = parsed(spec, load::<ProblemJson>(spec)?.parse())?;
            phi_verify(&prob, *samples, *seed)
        }
        Command::CrossVerify { spec, samples, seed } => {
            let cross = parsed(spec, load::<CrossJson>(spec)?.parse())?;
            let report = verify_prop24(&cross, *samples, *seed)?;
            let (results, violations) = prop24_json(&report);
            Ok(Body::new(results, violations))
        }
        Command::ReinhardtDoh { domain } => {
            let dom = parsed(domain, load::<DomainJson>(domain)?.parse(&config.truncation))?;
            Ok(doh(&dom.is_doh()?))
        }
        Command::ReinhardtEnvelope { domain } => {
            let dom = parsed(domain, load::<DomainJson>(domain)?.parse(&config.truncation))?;
            let env = dom.envelope()?;
            let results = json!({
                "hull": vdata_json(&env.hull),
                "axis_meets": env.axis_meets,
                "hrep": env.hrep.as_ref().map(hpolytope_json),
                "domain": env.hrep.as_ref().map(|_| env.to_domain().map(|d| domain_json(&d))).transpose()?,
            });
            Ok(Body::new(results, vec![]))
        }
        Command::ReinhardtHstar { a, d, points } => {
            let a_dom = parsed(a, load::<DomainJson>(a)?.parse(&config.truncation))?;
            let d_dom = parsed(d, load::<DomainJson>(d)?.parse(&config.truncation))?;
            let pts = log_points(config, points)?;
            let h = RelativeExtremal::new(&a_dom, &d_dom)?;
            let values = pts
                .iter()
                .map(|p| {
                    let mut v = json!({"point": log_point_json(p), "value": rat(&h.eval(p)?)});
                    if let Some(digits) = config.precision {
                        v["moduli_approx"] = json!(modulus::modulus_point(p, digits)?);
                    }
                    Ok(v)
                })
                .collect::<Result<Vec<_>, RunError>>()?;
            Ok(Body::new(json!({ "values": values }), vec![]))
        }
        Command::ReinhardtCrossVerify { spec, samples, seed } => {
            let cross = parsed(spec, load::<ReinhardtCrossJson>(spec)?.parse(&config.truncation))?;
            let report = cross_envelope_verify(&cross, *samples, *seed)?;
            let (mut results, mut violations) = prop24_json(&report.hull);
            results["h_star_checked"] = json!(report.h_star_checked);
            let axis: Vec<Value> = report
                .axis_checks
                .iter()
                .map(|c| {
                    json!({
                        "block": c.block + 1,
                        "axis": c.axis + 1,
                        "witness": log_point_json(&c.witness),
                        "member": c.member,
                    })
                })
                .collect();
            for (c, v) in report.axis_checks.iter().zip(&axis) {
                if !c.member {
                    violations.push(json!({"detail": "axis witness is not in the domain", "axis_check": v}));
                }
            }
            results["axis_checks"] = Value::Array(axis);
            Ok(Body::new(results, violations))
        }
    }
}

fn log_points(config: &RunConfig, path: &Path) -> Result<Vec<LogPoint>, RunError> {
    let file: LogPointsJson = load(path)?;
    match (&file.points, &file.moduli) {
        (Some(points), None) => points
            .iter()
            .map(|p| Ok(LogPoint(p.iter().map(|c| c.0.clone()).collect())))
            .collect(),
        (None, Some(moduli)) => {
            if !config.inexact {
                return Err(RunError::Usage(format!(
                    "{}: decimal moduli are rounded to rational logarithms; pass --inexact to accept this",
                    path.display()
                )));
            }
            let digits = config.precision.unwrap_or(9);
            Ok(moduli
                .iter()
                .map(|m| modulus::log_point(m, digits))
                .collect::<Result<Vec<_>, _>>()?)
        }
        _ => Err(RunError::Usage(format!(
            "{}: exactly one of \"points\" and \"moduli\" is required",
            path.display()
        ))),
    }
}

fn phi_eval(prob: &ExtremalProblem, pts: &[Vec<Rational>]) -> Result<Body, RunError> {
    let values = pts
        .iter()
        .map(|x| {
            let value = prob.phi(x)?;
            let (dual, competitor) = prob.phi_dual(x)?;
            if dual != value {
                return Err(Error::Invariant(format!("Φ is {value} but the competitor gives {dual}")).into());
            }
            Ok(json!({
                "point": vector(x),
                "value": rat(&value),
                "competitor": {"linear": vector(&competitor.linear), "constant": rat(&competitor.constant)},
            }))
        })
        .collect::<Result<Vec<_>, RunError>>()?;
    Ok(Body::new(json!({ "values": values }), vec![]))
}

fn counterexample_json(c: &Counterexample) -> Value {
    json!({"point": vector(&c.point), "detail": c.detail})
}

fn phi_verify(prob: &ExtremalProblem, samples: usize, seed: u64) -> Result<Body, RunError> {
    let (mu, report) = remark22_campaign(prob, samples, seed)?;
    let props: [(&str, &PropertyCheck); 4] = [
        ("range", &report.range),
        ("hull_invariance", &report.hull_invariance),
        ("rescaling", &report.rescaling),
        ("monotone", &report.monotone),
    ];
    let mut properties = Map::new();
    let mut violations = Vec::new();
    for (name, check) in props {
        let cx = check.counterexample.as_ref().map(counterexample_json);
        if let Some(c) = &cx {
            let mut v = c.clone();
            v["property"] = json!(name);
            violations.push(v);
        }
        properties.insert(
            name.into(),
            json!({
                "pass": check.passed(),
                "checked": check.checked,
                "skipped": check.skipped,
                "counterexample": cx,
            }),
        );
    }
    let results = json!({"mu": rat(&mu), "properties": properties});
    Ok(Body::new(results, violations))
}

fn prop24_json(r: &Prop24Report) -> (Value, Vec<Value>) {
    let results = json!({
        "samples": r.samples,
        "skipped": r.skipped,
        "classes": {"inside": r.inside, "boundary": r.boundary, "outside": r.outside},
    });
    (results, r.violations.iter().map(counterexample_json).collect())
}

fn doh(verdict: &DohVerdict) -> Body {
    let (name, certificate, violation) = match verdict {
        DohVerdict::Holds => ("holds", Value::Null, None),
        DohVerdict::Inconclusive { samples } => {
            ("inconclusive", json!({"condition": "log_convexity", "unfalsified_samples": samples}), None)
        }
        DohVerdict::Fails(DohFailure::NotLogConvex { witness }) => {
            let c = json!({"condition": "log_convexity", "witness": vector(witness)});
            ("fails", c.clone(), Some(c))
        }
        DohVerdict::Fails(DohFailure::AxisFlag { axis }) => {
            let c = json!({"condition": "axis_flags", "axis": axis + 1});
            ("fails", c.clone(), Some(c))
        }
    };
    let mut body = Body::new(json!({"verdict": name, "certificate": certificate}), violation.into_iter().collect());
    if name == "inconclusive" {
        body.exit_code = 1;
    }
    body
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_and_exit_codes() {
        let cfg = RunConfig::new(Command::ReinhardtDoh {
            domain: PathBuf::from("/nonexistent/domain.json"),
        });
        let out = run(&cfg);
        assert_eq!(out.exit_code, 2);
        assert_eq!(out.report["command"], "reinhardt doh");
        assert_eq!(out.report["config"]["truncation"], "64");
        assert_eq!(out.report["timing_ms"], Value::Null);
        assert!(out.report["error"].as_str().unwrap().contains("/nonexistent/domain.json"));
        assert_eq!(RunError::Library(Error::Invariant("x".into())).exit_code(), 1);
        assert_eq!(RunError::Library(Error::Domain("x".into())).exit_code(), 2);
    }

    #[test]
    fn doh_bodies() {
        assert_eq!(doh(&DohVerdict::Holds).exit_code, 0);
        assert_eq!(doh(&DohVerdict::Inconclusive { samples: 3 }).exit_code, 1);
        let b = doh(&DohVerdict::Fails(DohFailure::AxisFlag { axis: 1 }));
        assert_eq!(b.exit_code, 1);
        assert_eq!(b.results["certificate"]["axis"], 2);
    }
}
