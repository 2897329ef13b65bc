//! JSON report envelope shared by every subcommand.

use serde::Serialize;
use serde_json::Value;

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub observed: Value,
    pub expected: String,
}

impl Check {
    /// Passes when `value` is finite and at most `limit`.
    pub fn at_most(name: impl Into<String>, value: f64, limit: f64) -> Check {
        Check { name: name.into(), pass: value <= limit, observed: float(value), expected: format!("<= {limit:e}") }
    }

    pub fn at_least(name: impl Into<String>, value: f64, limit: f64) -> Check {
        Check { name: name.into(), pass: value >= limit, observed: float(value), expected: format!(">= {limit:e}") }
    }

    pub fn equals(name: impl Into<String>, value: i64, want: i64) -> Check {
        Check { name: name.into(), pass: value == want, observed: value.into(), expected: format!("= {want}") }
    }

    pub fn holds(name: impl Into<String>, ok: bool) -> Check {
        Check { name: name.into(), pass: ok, observed: ok.into(), expected: "true".into() }
    }
}

fn float(v: f64) -> Value {
    serde_json::Number::from_f64(v).map(Value::Number).unwrap_or_else(|| Value::String(v.to_string()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Error,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub polynomial: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a: Option<[f64; 2]>,
    pub seed: u64,
    pub checks: Vec<Check>,
    pub data: Value,
}

impl Report {
    pub fn new(command: &str, polynomial: Option<String>, a: Option<[f64; 2]>, seed: u64) -> Report {
        Report { command: command.into(), status: Status::Pass, polynomial, a, seed, checks: Vec::new(), data: Value::Null }
    }

    pub fn check(&mut self, c: Check) {
        self.checks.push(c);
    }

    pub fn finish(mut self) -> Report {
        self.status = if self.checks.iter().all(|c| c.pass) { Status::Pass } else { Status::Fail };
        self
    }

    pub fn exit_code(&self) -> i32 {
        match self.status {
            Status::Pass => 0,
            Status::Fail => 1,
            Status::Error => 2,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ErrorReport {
    pub command: String,
    pub status: Status,
    pub error: ErrorBody,
}

#[derive(Clone, Debug, Serialize)]
pub struct ErrorBody {
    pub kind: String,
    pub message: String,
    pub exit_code: i32,
}
