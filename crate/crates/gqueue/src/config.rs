//! Text-config schema shared by the command-line front end and the demo.
//!
//! Configs are TOML with nested blocks:
//!
//! ```toml
//! [model]
//! mu = 10.0
//! eta = 5.0
//! delta = 2.0
//!
//! [model.inter_arrival]
//! family = "exponential"   # erlang | deterministic | hyperexponential
//! rate = 10.0
//!
//! [model.batch]            # sparse size = probability pairs
//! 1 = 0.2
//! 3 = 0.4
//! 6 = 0.3
//! 10 = 0.1
//!
//! [solve]
//! max_rows = 300
//!
//! [sim]
//! batch_arrivals = 1111111
//! warmup_fraction = 0.1
//! seed = 42
//! replications = 10
//!
//! [output]
//! format = "csv"           # csv | json
//! precision = 8
//! ```
//!
//! Unknown keys are rejected so typos fail loudly.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::arrival::{BatchSizeDistribution, InterArrivalModel};
use crate::error::{Error, Result};
use crate::model::ModelParams;
use crate::sim::SimConfig;

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub model: ModelBlock,
    #[serde(default)]
    pub solve: SolveBlock,
    #[serde(default)]
    pub sim: SimBlock,
    #[serde(default)]
    pub output: OutputBlock,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelBlock {
    pub inter_arrival: InterArrivalBlock,
    /// Sparse batch law: TOML keys are sizes, values probabilities.
    pub batch: BTreeMap<String, f64>,
    pub mu: f64,
    #[serde(default)]
    pub eta: f64,
    #[serde(default)]
    pub delta: f64,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InterArrivalBlock {
    pub family: String,
    /// Batch arrival rate (exponential, erlang).
    pub rate: Option<f64>,
    /// Erlang stage count.
    pub phases: Option<u32>,
    /// Erlang per-stage rate, as an alternative to `rate`.
    pub phase_rate: Option<f64>,
    /// Deterministic inter-arrival time.
    pub value: Option<f64>,
    /// Hyperexponential branch weights.
    pub weights: Option<Vec<f64>>,
    /// Hyperexponential branch rates.
    pub rates: Option<Vec<f64>>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SolveBlock {
    /// Number of table rows to emit (n = 0..max_rows).
    pub max_rows: usize,
    /// Reporting tail cutoff for series summaries.
    pub tail_cutoff: f64,
}

impl Default for SolveBlock {
    fn default() -> Self {
        Self {
            max_rows: 300,
            tail_cutoff: 1e-14,
        }
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SimBlock {
    /// Total batch arrivals per replication, warmup included.
    pub batch_arrivals: u64,
    pub warmup_fraction: f64,
    pub seed: u64,
    pub replications: u32,
}

impl Default for SimBlock {
    fn default() -> Self {
        Self {
            batch_arrivals: 100_000,
            warmup_fraction: 0.1,
            seed: 1,
            replications: 4,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputBlock {
    pub format: OutputFormat,
    pub path: Option<String>,
    pub precision: usize,
}

impl Default for OutputBlock {
    fn default() -> Self {
        Self {
            format: OutputFormat::Csv,
            path: None,
            precision: 8,
        }
    }
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<()> {
        if self.output.precision == 0 || self.output.precision > 17 {
            return Err(Error::Config(format!(
                "output precision must be in 1..=17, got {}",
                self.output.precision
            )));
        }
        Ok(())
    }

    pub fn model_params(&self) -> Result<ModelParams> {
        self.model.to_params()
    }

    pub fn sim_config(&self, seed_override: Option<u64>) -> Result<SimConfig> {
        SimConfig::new(
            self.model_params()?,
            self.sim.batch_arrivals,
            self.sim.warmup_fraction,
            seed_override.unwrap_or(self.sim.seed),
            self.sim.replications,
        )
    }
}

impl ModelBlock {
    pub fn to_params(&self) -> Result<ModelParams> {
        let inter_arrival = self.inter_arrival.to_model()?;
        let batch = parse_batch(&self.batch)?;
        ModelParams::new(inter_arrival, batch, self.mu, self.eta, self.delta)
    }
}

impl InterArrivalBlock {
    pub fn to_model(&self) -> Result<InterArrivalModel> {
        match self.family.as_str() {
            "exponential" => {
                let rate = self.require("rate", self.rate)?;
                InterArrivalModel::exponential(rate)
            }
            "erlang" => {
                let phases = self.phases.unwrap_or(4);
                match (self.rate, self.phase_rate) {
                    (Some(rate), None) => InterArrivalModel::erlang(phases, rate),
                    (None, Some(phase_rate)) => {
                        InterArrivalModel::erlang_per_phase(phases, phase_rate)
                    }
                    _ => Err(Error::Config(
                        "erlang needs exactly one of `rate` or `phase_rate`".into(),
                    )),
                }
            }
            "deterministic" => {
                let value = self.require("value", self.value)?;
                InterArrivalModel::deterministic(value)
            }
            "hyperexponential" => {
                let weights = self
                    .weights
                    .clone()
                    .ok_or_else(|| Error::Config("hyperexponential needs `weights`".into()))?;
                let rates = self
                    .rates
                    .clone()
                    .ok_or_else(|| Error::Config("hyperexponential needs `rates`".into()))?;
                InterArrivalModel::hyperexponential(weights, rates)
            }
            other => Err(Error::Config(format!(
                "unknown inter-arrival family `{other}`"
            ))),
        }
    }

    fn require(&self, name: &str, value: Option<f64>) -> Result<f64> {
        value.ok_or_else(|| {
            Error::Config(format!("family `{}` needs the `{name}` field", self.family))
        })
    }
}

fn parse_batch(map: &BTreeMap<String, f64>) -> Result<BatchSizeDistribution> {
    let mut pairs = Vec::with_capacity(map.len());
    for (key, &p) in map {
        let size: usize = key
            .parse()
            .map_err(|_| Error::Config(format!("batch size key `{key}` is not an integer")))?;
        pairs.push((size, p));
    }
    BatchSizeDistribution::from_sparse(&pairs)
}

/// Parameter swept by `cmd_sweep`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SweepParameter {
    Lambda,
    Mu,
    Eta,
    Delta,
}

impl SweepParameter {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Lambda => "lambda",
            Self::Mu => "mu",
            Self::Eta => "eta",
            Self::Delta => "delta",
        }
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub model: ModelBlock,
    pub sweep: SweepBlock,
    #[serde(default)]
    pub output: OutputBlock,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepBlock {
    pub parameter: SweepParameter,
    /// Strictly increasing grid of values for the swept parameter.
    pub grid: Vec<f64>,
    /// One series per disaster rate.
    pub series_delta: Option<Vec<f64>>,
    /// One series per inter-arrival family (equal means); entries are
    /// `exponential`, `erlang`, `deterministic`.
    pub series_family: Option<Vec<String>>,
    /// Stage count used when `series_family` contains `erlang`.
    pub erlang_phases: Option<u32>,
}

impl SweepConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<()> {
        let grid = &self.sweep.grid;
        if grid.is_empty() {
            return Err(Error::Config("sweep grid is empty".into()));
        }
        if grid.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::Config(
                "sweep grid must be strictly increasing".into(),
            ));
        }
        if self.sweep.series_delta.is_some() && self.sweep.series_family.is_some() {
            return Err(Error::Config(
                "choose one of `series_delta` or `series_family`, not both".into(),
            ));
        }
        if self.sweep.series_delta.is_some() && self.sweep.parameter == SweepParameter::Delta {
            return Err(Error::Config(
                "cannot sweep `delta` while also using it as the series".into(),
            ));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const TABLE1: &str = r#"
[model]
mu = 10.0
eta = 5.0
delta = 2.0

[model.inter_arrival]
family = "exponential"
rate = 10.0

[model.batch]
1 = 0.2
3 = 0.4
6 = 0.3
10 = 0.1
"#;

    #[test]
    fn parses_the_reference_config() {
        let cfg = RunConfig::from_toml(TABLE1).unwrap();
        let params = cfg.model_params().unwrap();
        assert_eq!(params.batch.max_size(), 10);
        assert!((params.batch.mean() - 4.2).abs() < 1e-12);
        assert_eq!(cfg.solve.max_rows, 300);
        assert_eq!(cfg.output.format, OutputFormat::Csv);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let bad = format!("{TABLE1}\n[extra]\nx = 1\n");
        assert!(RunConfig::from_toml(&bad).is_err());
        let bad2 = TABLE1.replace("mu = 10.0", "mu = 10.0\nmoo = 3.0");
        assert!(RunConfig::from_toml(&bad2).is_err());
    }

    #[test]
    fn erlang_accepts_exactly_one_rate_form() {
        let both = r#"
[model]
mu = 10.0
[model.inter_arrival]
family = "erlang"
phases = 4
rate = 10.0
phase_rate = 40.0
[model.batch]
1 = 1.0
"#;
        let cfg = RunConfig::from_toml(both).unwrap();
        assert!(cfg.model_params().is_err());

        let by_phase = both.replace("rate = 10.0\nphase_rate", "phase_rate");
        let params = RunConfig::from_toml(&by_phase)
            .unwrap()
            .model_params()
            .unwrap();
        assert!((params.inter_arrival.mean() - 0.1).abs() < 1e-15);
    }

    #[test]
    fn sweep_grid_must_increase() {
        let spec = r#"
[model]
mu = 10.0
eta = 5.0
delta = 2.0
[model.inter_arrival]
family = "exponential"
rate = 10.0
[model.batch]
1 = 1.0

[sweep]
parameter = "eta"
grid = [0.0, 2.0, 1.0]
"#;
        assert!(SweepConfig::from_toml(spec).is_err());
        let ok = spec.replace("[0.0, 2.0, 1.0]", "[0.0, 1.0, 2.0]");
        assert!(SweepConfig::from_toml(&ok).is_ok());
    }

    #[test]
    fn batch_keys_must_be_integers() {
        let bad = TABLE1.replace("1 = 0.2", "one = 0.2");
        let cfg = RunConfig::from_toml(&bad).unwrap();
        assert!(cfg.model_params().is_err());
    }
}
