//! Browser bindings for the queue solver.
//!
//! Three operations back the demo page: an analytic solve, a mean-size
//! parameter sweep, and a quick simulation for visual cross-checking. All
//! three take the same TOML config text the command-line tool uses and
//! return JSON; errors come back as a JSON object with an `error` field
//! rather than an exception.

use wasm_bindgen::prelude::wasm_bindgen;

use gqueue::config::{RunConfig, SweepConfig};
use gqueue::report::{SolveArtifact, SweepArtifact};
use gqueue::{run_sweep, simulate, solve};

fn error_json(err: impl std::fmt::Display) -> String {
    serde_json::json!({ "error": err.to_string() }).to_string()
}

/// Solve the model in `config_toml` analytically.
///
/// Returns the table artifact JSON: `rows` of `n`, `p_pre`, `p_arb`,
/// `ratio` plus a `summary` with means, decay rate, roots, and diagnostics.
#[wasm_bindgen]
pub fn solve_model(config_toml: &str) -> String {
    let config = match RunConfig::from_toml(config_toml) {
        Ok(c) => c,
        Err(e) => return error_json(e),
    };
    let params = match config.model_params() {
        Ok(p) => p,
        Err(e) => return error_json(e),
    };
    match solve(&params) {
        Ok(dist) => SolveArtifact::build(&dist, config.solve.max_rows, config.solve.tail_cutoff)
            .to_json(config.output.precision),
        Err(e) => error_json(e),
    }
}

/// Evaluate the mean system size over the grid described by `config_toml`
/// (a sweep config). Returns the sweep rows as JSON.
#[wasm_bindgen]
pub fn sweep_mean(config_toml: &str) -> String {
    let config = match SweepConfig::from_toml(config_toml) {
        Ok(c) => c,
        Err(e) => return error_json(e),
    };
    match run_sweep(&config) {
        Ok(rows) => SweepArtifact { rows: &rows }.to_json(config.output.precision),
        Err(e) => error_json(e),
    }
}

/// Run the event-driven simulation described by `config_toml`, overriding
/// its seed. Returns the empirical laws with standard errors as JSON.
#[wasm_bindgen]
pub fn simulate_model(config_toml: &str, seed: u64) -> String {
    let config = match RunConfig::from_toml(config_toml) {
        Ok(c) => c,
        Err(e) => return error_json(e),
    };
    let sim_config = match config.sim_config(Some(seed)) {
        Ok(c) => c,
        Err(e) => return error_json(e),
    };
    match simulate(&sim_config) {
        Ok(result) => {
            gqueue::report::SimArtifact { result: &result }.to_json(config.output.precision)
        }
        Err(e) => error_json(e),
    }
}
