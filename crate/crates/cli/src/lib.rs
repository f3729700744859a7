//! Verb implementations behind the `flagric` binary.
//!
//! Every verb except `system` produces a [`RunReport`]; `system` produces a
//! document in the requested format.

pub mod render;
pub mod verify;

use std::time::Instant;

use flagric_core::einstein::{export_system, Edition, ExplicitSystem, Flavor, Format};
use flagric_core::flagspace::table1;
use flagric_core::solver::{explicit_residual, multistart};
use flagric_core::{Error, FlagManifold, FlagSpec, SolverConfig};
use serde::Serialize;
use serde_json::{json, Value};

pub const TOOL: &str = "flagric";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub mod exit {
    pub const OK: i32 = 0;
    pub const USAGE: i32 = 2;
    pub const UNSUPPORTED_SHAPE: i32 = 3;
    pub const VERIFICATION: i32 = 4;
    pub const NUMERICAL: i32 = 5;
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        CliError {
            code: exit::USAGE,
            message: message.into(),
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for CliError {}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::UnsupportedShape(_) => exit::UNSUPPORTED_SHAPE,
            Error::EquivalenceFailure { .. } => exit::VERIFICATION,
            _ => exit::USAGE,
        };
        CliError {
            code,
            message: e.to_string(),
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Ok,
    Warning,
    Fail,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub tool: &'static str,
    pub version: &'static str,
    pub verb: &'static str,
    /// Echo of the parsed spec; absent for suite runs.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub spec: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub status: Status,
    pub result: Value,
    /// Wall-clock seconds; only filled in on request so reports stay reproducible.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing: Option<f64>,
}

impl RunReport {
    fn new(verb: &'static str, spec: Option<&FlagSpec>, result: Value) -> Self {
        RunReport {
            tool: TOOL,
            version: VERSION,
            verb,
            spec: spec.map(ToString::to_string),
            seed: None,
            status: Status::Ok,
            result,
            timing: None,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn exit_code(&self) -> i32 {
        match (self.verb, self.status) {
            ("verify", Status::Fail) => exit::VERIFICATION,
            ("solve", Status::Fail) => exit::NUMERICAL,
            _ => exit::OK,
        }
    }
}

/// Measures a report-producing closure when `timing` is set.
pub fn timed(timing: bool, f: impl FnOnce() -> CliResult<RunReport>) -> CliResult<RunReport> {
    let start = Instant::now();
    let mut report = f()?;
    if timing {
        report.timing = Some(start.elapsed().as_secs_f64());
    }
    Ok(report)
}

pub fn parse_spec(s: &str) -> CliResult<FlagSpec> {
    s.parse().map_err(CliError::from)
}

pub fn cmd_summands(spec: &FlagSpec) -> CliResult<RunReport> {
    let m = FlagManifold::new(spec.clone())?;
    let (expected, formula) = table1(spec);
    let summands: Vec<Value> = m
        .summands()
        .iter()
        .map(|s| {
            json!({
                "troot": s.troot.id(),
                "fiber_size": s.fiber.len(),
                "real_dimension": s.real_dimension,
            })
        })
        .collect();
    let mut report = RunReport::new(
        "summands",
        Some(spec),
        json!({
            "count": m.count_summands(),
            "s": spec.s(),
            "m": spec.m(),
            "t": spec.tail.unwrap_or(0),
            "formula": formula,
            "formula_value": expected,
            "summands": summands,
        }),
    );
    if expected != m.count_summands() {
        report.status = Status::Warning;
    }
    Ok(report)
}

pub fn cmd_troots(spec: &FlagSpec) -> CliResult<RunReport> {
    let m = FlagManifold::new(spec.clone())?;
    let troots: Vec<Value> = m
        .summands()
        .iter()
        .map(|s| {
            json!({
                "id": s.troot.id(),
                "fiber_size": s.fiber.len(),
                "real_dimension": s.real_dimension,
            })
        })
        .collect();
    Ok(RunReport::new(
        "troots",
        Some(spec),
        json!({
            "classification": m.classify_t_root_set().to_string(),
            "troots": troots,
        }),
    ))
}

pub fn parse_format(s: &str) -> CliResult<Format> {
    s.parse().map_err(CliError::from)
}

pub fn parse_flavor(flavor: &str, edition: &str) -> CliResult<Flavor> {
    let edition: Edition = edition.parse().map_err(|_| {
        CliError::usage(format!(
            "unknown edition `{edition}` (expected printed or corrected)"
        ))
    })?;
    match flavor {
        "generated" => Ok(Flavor::Generated),
        "explicit" => Ok(Flavor::Explicit(edition)),
        other => Err(CliError::usage(format!(
            "unknown flavor `{other}` (expected generated or explicit)"
        ))),
    }
}

pub fn cmd_system(spec: &FlagSpec, format: Format, flavor: Flavor) -> CliResult<String> {
    let mut out = export_system(spec, format, flavor)?;
    if !out.ends_with('\n') {
        out.push('\n');
    }
    Ok(out)
}

pub fn cmd_solve(spec: &FlagSpec, cfg: &SolverConfig) -> CliResult<RunReport> {
    cfg.validate()?;
    let m = FlagManifold::new(spec.clone())?;
    let report = multistart(spec, cfg)?;
    let explicit = ExplicitSystem::new(&m, Edition::Corrected)?;
    let bound = 10.0 * cfg.newton_tol;
    let mut solutions = Vec::new();
    let mut bad = Vec::new();
    for (i, s) in report.solutions.iter().enumerate() {
        let er = explicit_residual(&m, &explicit, &s.lambda)?;
        if s.residual_norm > bound || er.is_nan() || er > bound {
            bad.push(i);
        }
        let mut v = serde_json::to_value(s).expect("solution serializes");
        v["explicit_residual"] = json!(er);
        solutions.push(v);
    }
    let mut out = RunReport::new(
        "solve",
        Some(spec),
        json!({
            "config": {
                "starts": cfg.starts,
                "newton_tol": cfg.newton_tol,
                "max_iters": cfg.max_iters,
                "dedup_tol": cfg.dedup_tol,
                "sample_box": [cfg.sample_box.0, cfg.sample_box.1],
            },
            "starts": report.stats,
            "solution_count": solutions.len(),
            "solutions": solutions,
        }),
    );
    out.seed = Some(cfg.seed);
    if !bad.is_empty() {
        out.status = Status::Fail;
        out.result["failed_reevaluation"] = json!(bad);
    } else if report.solutions.is_empty() {
        out.status = Status::Warning;
    }
    Ok(out)
}

pub fn cmd_verify(spec: Option<&FlagSpec>, suite: Option<&str>) -> CliResult<RunReport> {
    let checks = match (spec, suite) {
        (Some(spec), None) => verify::spec_checks(spec)?,
        (None, Some("default")) => verify::default_suite()?,
        (None, Some(other)) => return Err(CliError::usage(format!("unknown suite `{other}`"))),
        _ => return Err(CliError::usage("verify takes a spec or --suite, not both")),
    };
    let passed = checks.iter().all(|c| c.passed);
    let mut report = RunReport::new(
        "verify",
        spec,
        json!({
            "suite": suite,
            "passed": passed,
            "checks": checks,
        }),
    );
    if !passed {
        report.status = Status::Fail;
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(s: &str) -> FlagSpec {
        s.parse().unwrap()
    }

    #[test]
    fn summands_examples() {
        for (s, count, formula) in [
            ("B:2,2,1", 11, "(s+m)^2+s"),
            ("C:1,1,1", 9, "(s+m)^2"),
            ("D:1,1,1,1", 12, "(s+m)^2-m"),
        ] {
            let r = cmd_summands(&spec(s)).unwrap();
            assert_eq!(r.result["count"], count, "{s}");
            assert_eq!(r.result["formula"], formula);
            assert_eq!(r.status, Status::Ok);
        }
    }

    #[test]
    fn troots_examples() {
        let c = |s: &str| cmd_troots(&spec(s)).unwrap().result["classification"].clone();
        assert_eq!(c("C:2,2"), "root_system(C,2)");
        assert_eq!(c("B:2,2"), "non_reduced");
        let r = cmd_troots(&spec("A:1,1,1")).unwrap();
        let t = r.result["troots"].as_array().unwrap();
        assert_eq!(t.len(), 3);
        assert!(t.iter().all(|x| x["fiber_size"] == 1));
    }

    #[test]
    fn error_codes() {
        assert_eq!(parse_spec("E:1,1").unwrap_err().code, exit::USAGE);
        assert_eq!(parse_format("xml").unwrap_err().code, exit::USAGE);
        assert_eq!(
            parse_flavor("both", "corrected").unwrap_err().code,
            exit::USAGE
        );
        assert_eq!(
            CliError::from(Error::UnsupportedShape("x".into())).code,
            exit::UNSUPPORTED_SHAPE
        );
        assert_eq!(
            CliError::from(Error::EquivalenceFailure { failures: vec![] }).code,
            exit::VERIFICATION
        );
    }

    #[test]
    fn system_poly_a111() {
        let out = cmd_system(
            &spec("A:1,1,1"),
            Format::Poly,
            Flavor::Explicit(Edition::Corrected),
        )
        .unwrap();
        assert_eq!(out.lines().filter(|l| !l.starts_with('#')).count(), 3);
    }

    #[test]
    fn solve_single_block() {
        let cfg = SolverConfig {
            starts: 10,
            ..SolverConfig::default()
        };
        let r = cmd_solve(&spec("C:5"), &cfg).unwrap();
        assert_eq!(r.result["solution_count"], 1);
        assert_eq!(r.seed, Some(0));
        assert!(r.timing.is_none());
    }
}
