//! Scenario files, reports and the bundled example runs for `covext-core`.

pub mod report;
pub mod run;
pub mod scenario;
pub mod verify;

pub use report::{ClaimOutcome, Report, Verdict};
pub use run::{run, run_text, RunError, RunOptions};
pub use scenario::{Scenario, SchemaError};
pub use verify::{verify_paper, ScenarioRun, BUNDLED};
