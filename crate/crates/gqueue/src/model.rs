//! Full model parameterization and stability classification.

use serde::Serialize;

use crate::arrival::{BatchSizeDistribution, InterArrivalModel};
use crate::error::{Error, Result};

/// Parameters of the batch-renewal single-server queue with negative
/// customers (head-of-line removal) and disasters.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ModelParams {
    pub inter_arrival: InterArrivalModel,
    pub batch: BatchSizeDistribution,
    /// Service rate.
    pub mu: f64,
    /// Negative-customer arrival rate.
    pub eta: f64,
    /// Disaster arrival rate.
    pub delta: f64,
}

impl ModelParams {
    pub fn new(
        inter_arrival: InterArrivalModel,
        batch: BatchSizeDistribution,
        mu: f64,
        eta: f64,
        delta: f64,
    ) -> Result<Self> {
        if !(mu > 0.0) || !mu.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "service rate must be positive and finite, got {mu}"
            )));
        }
        if !(eta >= 0.0) || !eta.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "negative-customer rate must be nonnegative and finite, got {eta}"
            )));
        }
        if !(delta >= 0.0) || !delta.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "disaster rate must be nonnegative and finite, got {delta}"
            )));
        }
        Ok(Self {
            inter_arrival,
            batch,
            mu,
            eta,
            delta,
        })
    }

    /// Batch arrival rate.
    pub fn batch_rate(&self) -> f64 {
        self.inter_arrival.batch_rate()
    }

    /// Customer arrival rate (batch rate times mean batch size).
    pub fn customer_rate(&self) -> f64 {
        self.batch_rate() * self.batch.mean()
    }
}

/// Which condition decided stability.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StabilityCondition {
    /// Disasters occur; the system empties regardless of load.
    DeltaPositive,
    /// No disasters: drift condition against service plus removals.
    RhoMuEta,
    /// Neither disasters nor negative customers: classical drift condition.
    RhoMu,
}

impl StabilityCondition {
    pub fn describe(&self) -> &'static str {
        match self {
            Self::DeltaPositive => "delta > 0",
            Self::RhoMuEta => "lambda * gbar < mu + eta",
            Self::RhoMu => "lambda * gbar < mu",
        }
    }
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct StabilityReport {
    pub stable: bool,
    pub condition_used: StabilityCondition,
    /// Traffic measure used by the condition: customer rate over the
    /// applicable removal capacity.
    pub rho: f64,
}

/// Classify stability.
///
/// A positive disaster rate keeps the system stable at any load; otherwise
/// the customer arrival rate must stay below the total removal rate.
pub fn stability_check(params: &ModelParams) -> StabilityReport {
    let load = params.customer_rate();
    if params.delta > 0.0 {
        StabilityReport {
            stable: true,
            condition_used: StabilityCondition::DeltaPositive,
            rho: load / (params.mu + params.eta),
        }
    } else if params.eta > 0.0 {
        let rho = load / (params.mu + params.eta);
        StabilityReport {
            stable: rho < 1.0,
            condition_used: StabilityCondition::RhoMuEta,
            rho,
        }
    } else {
        let rho = load / params.mu;
        StabilityReport {
            stable: rho < 1.0,
            condition_used: StabilityCondition::RhoMu,
            rho,
        }
    }
}

/// Fail with a descriptive error when the model is unstable.
pub fn require_stable(params: &ModelParams) -> Result<StabilityReport> {
    let report = stability_check(params);
    if report.stable {
        Ok(report)
    } else {
        Err(Error::Unstable {
            condition: report.condition_used.describe().to_string(),
            rho: report.rho,
        })
    }
}
