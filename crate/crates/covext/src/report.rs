//! Reports and claim adjudication.

use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::Value;

use crate::scenario::{Check, Claim, Op, Scenario};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    #[serde(rename = "MATCHES")]
    Matches,
    #[serde(rename = "CONTRADICTS")]
    Contradicts,
    /// A computed fact the source makes no claim about.
    #[serde(rename = "NOT-CLAIMED")]
    NotClaimed,
    /// The fact could not be computed or has the wrong shape for the check.
    #[serde(rename = "INCONCLUSIVE")]
    Inconclusive,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Matches => "MATCHES",
            Verdict::Contradicts => "CONTRADICTS",
            Verdict::NotClaimed => "NOT-CLAIMED",
            Verdict::Inconclusive => "INCONCLUSIVE",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClaimOutcome {
    pub id: String,
    pub text: String,
    pub anchor: String,
    pub fact: String,
    pub op: Op,
    pub expected: Value,
    pub observed: Value,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Observation {
    pub fact: String,
    pub observed: Value,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub scenario: Scenario,
    pub facts: BTreeMap<String, Value>,
    pub details: Value,
    pub claims: Vec<ClaimOutcome>,
    pub observations: Vec<Observation>,
}

impl Report {
    pub fn new(scenario: Scenario, facts: BTreeMap<String, Value>, details: Value) -> Report {
        let claims = scenario
            .claims
            .iter()
            .map(|c| adjudicate(c, facts.get(&c.check.fact).unwrap_or(&Value::Null)))
            .collect();
        let observations = scenario
            .observe
            .iter()
            .map(|f| Observation {
                fact: f.clone(),
                observed: facts.get(f).cloned().unwrap_or(Value::Null),
                verdict: Verdict::NotClaimed,
            })
            .collect();
        Report {
            scenario,
            facts,
            details,
            claims,
            observations,
        }
    }

    /// Pretty JSON with a trailing newline.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

pub fn adjudicate(claim: &Claim, observed: &Value) -> ClaimOutcome {
    let verdict = match evaluate(&claim.check, observed) {
        Some(true) => Verdict::Matches,
        Some(false) => Verdict::Contradicts,
        None => Verdict::Inconclusive,
    };
    ClaimOutcome {
        id: claim.id.clone(),
        text: claim.text.clone(),
        anchor: claim.anchor.clone(),
        fact: claim.check.fact.clone(),
        op: claim.check.op,
        expected: claim.check.value.clone(),
        observed: observed.clone(),
        verdict,
    }
}

/// Outcome of a check, `None` when the observed value cannot be compared.
pub fn evaluate(check: &Check, observed: &Value) -> Option<bool> {
    if observed.is_null() && !check.value.is_null() {
        return None;
    }
    let expected = &check.value;
    match check.op {
        Op::Eq => Some(same(observed, expected)),
        Op::Ne => Some(!same(observed, expected)),
        Op::Le => Some(observed.as_f64()? <= expected.as_f64()?),
        Op::Ge => Some(observed.as_f64()? >= expected.as_f64()?),
        Op::Approx => close(observed, expected, check.tol?),
    }
}

fn same(a: &Value, b: &Value) -> bool {
    match (a, b) {
        (Value::Number(x), Value::Number(y)) => x.as_f64() == y.as_f64(),
        (Value::Array(x), Value::Array(y)) => {
            x.len() == y.len() && x.iter().zip(y).all(|(p, q)| same(p, q))
        }
        _ => a == b,
    }
}

/// Structural comparison with numbers within `tol`; `None` on shape mismatch.
fn close(a: &Value, b: &Value, tol: f64) -> Option<bool> {
    match (a, b) {
        (Value::Number(x), Value::Number(y)) => Some((x.as_f64()? - y.as_f64()?).abs() <= tol),
        (Value::Array(x), Value::Array(y)) => {
            if x.len() != y.len() {
                return None;
            }
            let mut all = true;
            for (p, q) in x.iter().zip(y) {
                all &= close(p, q, tol)?;
            }
            Some(all)
        }
        _ => Some(a == b),
    }
}
