//! Report documents: deterministic JSON with sorted keys and 17-significant-digit
//! floats, plus a plain-text rendering.

use serde_json::{json, Map, Number, Value};
use sha2::{Digest, Sha256};
use spcsep::bipartite::SchmidtDecomposition;
use spcsep::classify::ClassificationReport;
use spcsep::linalg::ComplexMatrix;
use spcsep::sweeps::{SampleOutcome, SweepSummary};

use crate::matrix_file::{format_float, split};

/// JSON number with 17 significant digits; `null` when not finite.
pub fn num(x: f64) -> Value {
    if !x.is_finite() {
        return Value::Null;
    }
    let n: Number = serde_json::from_str(&format_float(x)).expect("formatted float is a JSON number");
    Value::Number(n)
}

pub fn opt_num(x: Option<f64>) -> Value {
    x.map_or(Value::Null, num)
}

pub fn nums(xs: &[f64]) -> Value {
    Value::Array(xs.iter().map(|&x| num(x)).collect())
}

pub fn matrix(m: &ComplexMatrix<f64>) -> Value {
    let (re, im) = split(m);
    let rows = |r: Vec<Vec<f64>>| Value::Array(r.iter().map(|row| nums(row)).collect());
    json!({ "re": rows(re), "im": rows(im) })
}

pub fn digest(bytes: &[u8]) -> String {
    let h = Sha256::digest(bytes);
    let hex: String = h.iter().map(|b| format!("{b:02x}")).collect();
    format!("sha256:{hex}")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    /// A claimed property failed numerically.
    Finding,
    /// The artifact could not carry out the check.
    Failure,
    /// Reported without a claim attached.
    Info,
}

impl Outcome {
    pub fn tag(self) -> &'static str {
        match self {
            Outcome::Pass => "PASS",
            Outcome::Finding => "FINDING",
            Outcome::Failure => "FAILURE",
            Outcome::Info => "INFO",
        }
    }

    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Outcome::Pass
        } else {
            Outcome::Finding
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: String,
    pub claim: String,
    pub outcome: Outcome,
    pub detail: String,
}

impl Check {
    pub fn new(name: &str, claim: &str, ok: bool, detail: impl Into<String>) -> Self {
        Self { name: name.into(), claim: claim.into(), outcome: Outcome::from_bool(ok), detail: detail.into() }
    }

    pub fn to_json(&self) -> Value {
        json!({ "name": self.name, "claim": self.claim, "outcome": self.outcome.tag(), "detail": self.detail })
    }
}

/// 0 when every check passes, 1 on a finding, 4 on a failure.
pub fn exit_code(checks: &[Check]) -> i32 {
    if checks.iter().any(|c| c.outcome == Outcome::Failure) {
        4
    } else if checks.iter().any(|c| c.outcome == Outcome::Finding) {
        1
    } else {
        0
    }
}

pub fn classification(r: &ClassificationReport<f64>) -> Value {
    json!({
        "k": r.k,
        "m": r.m,
        "hermitian": r.hermitian,
        "psd": r.psd,
        "ppt": r.ppt,
        "spc": r.spc,
        "symmetric_state": r.symmetric_state,
        "tensor_rank": r.tensor_rank,
        "min_eig": opt_num(r.min_eig),
        "min_eig_pt": opt_num(r.min_eig_pt),
        "separability": {
            "verdict": r.separability.verdict.tag(),
            "certificates": r.separability.certificates.iter().map(|c| c.tag()).collect::<Vec<_>>(),
        },
    })
}

pub fn schmidt(d: &SchmidtDecomposition<f64>) -> Value {
    Value::Array(
        d.terms
            .iter()
            .map(|t| json!({ "coeff": num(t.coeff), "left": matrix(&t.left), "right": matrix(&t.right) }))
            .collect(),
    )
}

/// How many violating samples a report lists.
const LISTED_SAMPLES: usize = 20;

/// Checks and metrics for a sweep. With `claimed = false` the sweep is
/// informational and violations are not findings.
pub fn sweep(s: &SweepSummary, claim: &str, claimed: bool) -> (Vec<Check>, Value) {
    let violations = s.violations();
    let errors = s.errors();
    let listed = |rs: &[&spcsep::sweeps::SampleResult]| {
        Value::Array(
            rs.iter()
                .take(LISTED_SAMPLES)
                .map(|r| {
                    let detail = match &r.outcome {
                        SampleOutcome::Violation(d) | SampleOutcome::Error(d) => d.clone(),
                        SampleOutcome::Pass => String::new(),
                    };
                    json!({ "index": r.index, "seed": r.seed, "detail": detail })
                })
                .collect(),
        )
    };
    let holds = violations.len() + errors.len() == 0;
    let mut checks = vec![Check {
        name: s.name.to_string(),
        claim: claim.to_string(),
        outcome: if !claimed {
            Outcome::Info
        } else if violations.is_empty() {
            Outcome::Pass
        } else {
            Outcome::Finding
        },
        detail: format!("{}/{} samples satisfy the property", s.samples() - violations.len(), s.samples()),
    }];
    if !errors.is_empty() {
        checks.push(Check {
            name: format!("{}-runs", s.name),
            claim: "the algorithm runs on every sample".into(),
            outcome: Outcome::Failure,
            detail: format!("{} samples raised an error", errors.len()),
        });
    }
    let metrics = json!({
        "samples": s.samples(),
        "passed": s.passed(),
        "base_seed": s.base_seed,
        "all_hold": holds,
        "metric": s.metric_label,
        "worst_metric": num(s.worst_metric()),
        "violations": listed(&violations),
        "errors": listed(&errors),
    });
    (checks, metrics)
}

/// Serializes with sorted keys and a trailing newline.
pub fn to_json_string(doc: &Value) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("JSON values always serialize");
    s.push('\n');
    s
}

fn scalar_text(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("none".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        _ => None,
    }
}

fn render(out: &mut String, key: &str, v: &Value, depth: usize) {
    let pad = "  ".repeat(depth);
    if let Some(s) = scalar_text(v) {
        out.push_str(&format!("{pad}{key}: {s}\n"));
        return;
    }
    match v {
        Value::Array(items) if items.iter().all(|x| scalar_text(x).is_some()) => {
            let cells: Vec<String> = items.iter().filter_map(scalar_text).collect();
            out.push_str(&format!("{pad}{key}: [{}]\n", cells.join(", ")));
        }
        Value::Array(items) => {
            out.push_str(&format!("{pad}{key}:\n"));
            for (i, x) in items.iter().enumerate() {
                render(out, &format!("[{i}]"), x, depth + 1);
            }
        }
        Value::Object(map) => {
            out.push_str(&format!("{pad}{key}:\n"));
            render_map(out, map, depth + 1);
        }
        _ => unreachable!("scalars handled above"),
    }
}

fn render_map(out: &mut String, map: &Map<String, Value>, depth: usize) {
    for (k, v) in map {
        if k != "checks" {
            render(out, k, v, depth);
        }
    }
}

/// Checks first, one line each, then the remaining fields as an indented tree.
pub fn to_text(doc: &Value) -> String {
    let mut out = String::new();
    if let Some(Value::Array(checks)) = doc.get("checks") {
        for c in checks {
            let field = |k: &str| c.get(k).and_then(Value::as_str).unwrap_or("");
            let detail = field("detail");
            let detail = if detail.is_empty() { String::new() } else { format!(" ({detail})") };
            out.push_str(&format!("[{}] {}: {}{detail}\n", field("outcome"), field("name"), field("claim")));
        }
    }
    if let Value::Object(map) = doc {
        render_map(&mut out, map, 0);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_keep_seventeen_digits() {
        assert_eq!(num(0.1).to_string(), "1.0000000000000001e-1");
        assert_eq!(num(-2.0).to_string(), "-2.0000000000000000e+0");
        assert_eq!(num(f64::NAN), Value::Null);
    }

    #[test]
    fn keys_are_sorted() {
        let v = json!({ "zeta": 1, "alpha": num(1.5) });
        assert_eq!(to_json_string(&v), "{\n  \"alpha\": 1.5000000000000000e+0,\n  \"zeta\": 1\n}\n");
    }

    #[test]
    fn exit_codes() {
        let pass = Check::new("a", "x", true, "");
        let finding = Check::new("b", "y", false, "");
        let mut failure = pass.clone();
        failure.outcome = Outcome::Failure;
        assert_eq!(exit_code(std::slice::from_ref(&pass)), 0);
        assert_eq!(exit_code(&[pass.clone(), finding.clone()]), 1);
        assert_eq!(exit_code(&[finding, failure]), 4);
    }

    #[test]
    fn digest_is_hex_sha256() {
        assert_eq!(digest(b"abc"), "sha256:ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    }
}
