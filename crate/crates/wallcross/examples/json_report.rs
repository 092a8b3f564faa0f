//! Assemble a byte-stable JSON report for a weight matrix, matching what
//! the `wallcross analyze` subcommand emits.
//!
//! Run with: `cargo run --example json_report`

use wallcross::report::{run_analyze, AnalysisRequest, RequestParams, Task};

fn main() -> wallcross::Result<()> {
    let weights = wallcross::report::parse_input(
        r#"{"schema": 1,
            "weights": [[1, 1, 1, 0, 0, 0, -2, -1], [0, 0, 0, 1, 1, 1, 0, -3]],
            "labels": ["x", "x", "x", "y", "y", "y", "p", "q"]}"#,
    )?;
    let request = AnalysisRequest {
        weights,
        tasks: [Task::Fan, Task::Horn, Task::Expected].into_iter().collect(),
        params: RequestParams::default(),
    };
    let report = run_analyze(&request)?;
    print!("{}", report.to_json());
    Ok(())
}
