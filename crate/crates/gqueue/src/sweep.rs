//! Parameter sweeps producing plottable series of the mean system size.

use serde::Serialize;

use crate::arrival::InterArrivalModel;
use crate::config::{SweepConfig, SweepParameter};
use crate::error::{Error, Result};
use crate::model::{require_stable, ModelParams};
use crate::solver::solve;

#[derive(Clone, Debug, Serialize)]
pub struct SweepRow {
    /// Value of the swept parameter.
    pub param: f64,
    /// Series label.
    pub series: String,
    /// Mean system size at arbitrary epochs.
    pub l: f64,
    /// Mean system size at pre-arrival epochs.
    pub l_pre: f64,
    /// Empty-system probability at arbitrary epochs.
    pub p0: f64,
    /// Largest real characteristic root.
    pub rb: f64,
}

enum Series {
    Single,
    Delta(f64),
    Family(String),
}

impl Series {
    fn label(&self) -> String {
        match self {
            Series::Single => "base".to_string(),
            Series::Delta(d) => format!("delta={d}"),
            Series::Family(f) => f.clone(),
        }
    }
}

/// Evaluate every (series, grid point) pair; any unstable point aborts the
/// sweep with an error naming it.
pub fn run_sweep(config: &SweepConfig) -> Result<Vec<SweepRow>> {
    let base = config.model.to_params()?;
    let series: Vec<Series> = if let Some(deltas) = &config.sweep.series_delta {
        deltas.iter().map(|&d| Series::Delta(d)).collect()
    } else if let Some(families) = &config.sweep.series_family {
        families.iter().map(|f| Series::Family(f.clone())).collect()
    } else {
        vec![Series::Single]
    };

    let mut rows = Vec::with_capacity(series.len() * config.sweep.grid.len());
    for s in &series {
        for &value in &config.sweep.grid {
            let params = point_params(&base, config, s, value)?;
            let label = s.label();
            require_stable(&params).map_err(|e| match e {
                Error::Unstable { condition, rho } => Error::Unstable {
                    condition: format!(
                        "{condition} at sweep point {}={value} (series {label})",
                        config.sweep.parameter.name()
                    ),
                    rho,
                },
                other => other,
            })?;
            let dist = solve(&params)?;
            let (l_pre, l) = dist.mean_system_size();
            rows.push(SweepRow {
                param: value,
                series: label,
                l,
                l_pre,
                p0: dist.p0_arbitrary(),
                rb: dist.tail_decay(),
            });
        }
    }
    Ok(rows)
}

fn point_params(
    base: &ModelParams,
    config: &SweepConfig,
    series: &Series,
    value: f64,
) -> Result<ModelParams> {
    let mut params = base.clone();
    if let Series::Delta(d) = series {
        params.delta = *d;
    }
    match config.sweep.parameter {
        SweepParameter::Lambda => {
            params.inter_arrival = with_rate(&params.inter_arrival, value)?;
        }
        SweepParameter::Mu => params.mu = value,
        SweepParameter::Eta => params.eta = value,
        SweepParameter::Delta => params.delta = value,
    }
    if let Series::Family(name) = series {
        let rate = params.inter_arrival.batch_rate();
        let phases = config.sweep.erlang_phases.unwrap_or(4);
        params.inter_arrival = match name.as_str() {
            "exponential" => InterArrivalModel::exponential(rate)?,
            "erlang" => InterArrivalModel::erlang(phases, rate)?,
            "deterministic" => InterArrivalModel::deterministic(1.0 / rate)?,
            other => {
                return Err(Error::Config(format!(
                    "unknown series family `{other}` (expected exponential, erlang, deterministic)"
                )))
            }
        };
    }
    ModelParams::new(
        params.inter_arrival,
        params.batch,
        params.mu,
        params.eta,
        params.delta,
    )
}

/// Rebuild an inter-arrival law with a new batch rate, preserving its shape.
fn with_rate(model: &InterArrivalModel, rate: f64) -> Result<InterArrivalModel> {
    match model {
        InterArrivalModel::Exponential { .. } => InterArrivalModel::exponential(rate),
        InterArrivalModel::Erlang { phases, .. } => InterArrivalModel::erlang(*phases, rate),
        InterArrivalModel::Deterministic { .. } => InterArrivalModel::deterministic(1.0 / rate),
        InterArrivalModel::Hyperexponential { weights, rates } => {
            let factor = rate / model.batch_rate();
            InterArrivalModel::hyperexponential(
                weights.clone(),
                rates.iter().map(|r| r * factor).collect(),
            )
        }
    }
}
