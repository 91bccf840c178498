//! Bundled scenarios and the harness that runs them all.

use std::fmt::Write as _;
use std::time::{Duration, Instant};

use crate::report::{Report, Verdict};
use crate::run::{run_text, RunError, RunOptions};
use crate::scenario::Scenario;

macro_rules! bundled {
    ($($name:literal),* $(,)?) => {
        &[$(($name, include_str!(concat!("../scenarios/", $name, ".json")))),*]
    };
}

/// `(name, document)` for every scenario shipped with the crate, in run order.
pub const BUNDLED: &[(&str, &str)] = bundled![
    "example3_extension",
    "two_sheet_extension",
    "stein_weierstrass",
    "cubic_slice",
    "galois_slice",
    "galois_extension",
    "braid_4_3",
    "braid_grid",
    "minimal_extension_degree",
    "hartogs_signature",
];

pub fn bundled(name: &str) -> Option<&'static str> {
    BUNDLED.iter().find(|(n, _)| *n == name).map(|(_, t)| *t)
}

pub struct ScenarioRun {
    pub name: &'static str,
    pub outcome: Result<Report, RunError>,
    pub elapsed: Duration,
}

/// Runs every bundled scenario whose name contains `filter`, concurrently,
/// and returns the runs in bundle order.
pub fn verify_paper(filter: Option<&str>) -> Vec<ScenarioRun> {
    let selected: Vec<(&'static str, &'static str)> = BUNDLED
        .iter()
        .copied()
        .filter(|(n, _)| filter.is_none_or(|f| n.contains(f)))
        .collect();
    std::thread::scope(|scope| {
        let handles: Vec<_> = selected
            .iter()
            .map(|&(name, text)| {
                scope.spawn(move || {
                    let start = Instant::now();
                    let outcome = run_text(text, RunOptions::default());
                    ScenarioRun {
                        name,
                        outcome,
                        elapsed: start.elapsed(),
                    }
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("scenario thread panicked"))
            .collect()
    })
}

fn compact(v: &serde_json::Value) -> String {
    let s = v.to_string();
    if s.chars().count() > 60 {
        let cut: String = s.chars().take(57).collect();
        format!("{cut}...")
    } else {
        s
    }
}

/// One row per claim and observation, plus one row per failed scenario.
pub fn summary_table(runs: &[ScenarioRun]) -> String {
    let mut rows: Vec<[String; 5]> = vec![[
        "scenario".into(),
        "claim".into(),
        "anchor".into(),
        "verdict".into(),
        "observed".into(),
    ]];
    for run in runs {
        match &run.outcome {
            Ok(report) => {
                for c in &report.claims {
                    rows.push([
                        run.name.into(),
                        c.id.clone(),
                        c.anchor.clone(),
                        c.verdict.as_str().into(),
                        compact(&c.observed),
                    ]);
                }
                for o in &report.observations {
                    rows.push([
                        run.name.into(),
                        o.fact.clone(),
                        "-".into(),
                        Verdict::NotClaimed.as_str().into(),
                        compact(&o.observed),
                    ]);
                }
            }
            Err(e) => rows.push([
                run.name.into(),
                "-".into(),
                "-".into(),
                "ERROR".into(),
                e.to_string(),
            ]),
        }
    }
    let mut widths = [0usize; 5];
    for r in &rows {
        for (w, cell) in widths.iter_mut().zip(r) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let mut out = String::new();
    for r in &rows {
        let mut line = String::new();
        for (i, cell) in r.iter().enumerate() {
            if i + 1 == r.len() {
                line.push_str(cell);
            } else {
                let _ = write!(line, "{cell:<w$}  ", w = widths[i]);
            }
        }
        out.push_str(line.trim_end());
        out.push('\n');
    }
    out
}

/// Name, kind and description of each bundled scenario.
pub fn list_scenarios() -> String {
    let mut out = String::new();
    for (name, text) in BUNDLED {
        let s = Scenario::from_json(text).expect("bundled scenarios are valid");
        let _ = writeln!(out, "{name:<26} {:<16} {}", s.kind().as_str(), s.description);
    }
    out
}
