//! Artifact assembly and deterministic CSV/JSON emission.
//!
//! Byte-identical reruns are part of the contract: floats are printed with a
//! fixed number of decimals in CSV, and JSON numbers are rounded to the
//! declared precision before serialization so re-parsing an artifact
//! reproduces the emitted values exactly.

use serde::Serialize;
use serde_json::Value;

use crate::model::{stability_check, StabilityReport};
use crate::sim::{ComparisonReport, SimResult};
use crate::solver::{HeadRoute, SystemDistribution};
use crate::sweep::SweepRow;

#[derive(Clone, Debug, Serialize)]
pub struct TableRow {
    pub n: usize,
    pub p_pre: f64,
    pub p_arb: f64,
    /// Successive pre-arrival ratio `p_{n+1}^- / p_n^-`; zero when the
    /// denominator vanishes.
    pub ratio: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct SolveSummary {
    pub lambda: f64,
    pub batch_mean: f64,
    pub batch_max: usize,
    pub stability: StabilityReport,
    pub p0_prearrival: f64,
    pub p0_arbitrary: f64,
    pub l_pre: f64,
    pub l_arb: f64,
    pub decay_rate: f64,
    pub head_route: HeadRoute,
    /// Roots as (re, im) pairs in reporting order.
    pub roots: Vec<(f64, f64)>,
    pub constants: Vec<(f64, f64)>,
    pub residual_homogeneous: f64,
    pub residual_rate: f64,
    pub residual_roots_max: f64,
    /// Absent for a single root, where no pair exists.
    pub multiplicity_gap: Option<f64>,
    pub condition_estimate: f64,
    pub small_root_warning: bool,
    /// First n at which both laws fall below the reporting cutoff.
    pub tail_truncation: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct SolveArtifact {
    pub summary: SolveSummary,
    pub rows: Vec<TableRow>,
}

impl SolveArtifact {
    pub fn build(dist: &SystemDistribution, max_rows: usize, tail_cutoff: f64) -> Self {
        let rows = (0..=max_rows)
            .map(|n| {
                let p_pre = dist.prearrival_pmf(n);
                let next = dist.prearrival_pmf(n + 1);
                TableRow {
                    n,
                    p_pre,
                    p_arb: dist.arbitrary_pmf(n),
                    ratio: if p_pre > 0.0 { next / p_pre } else { 0.0 },
                }
            })
            .collect();
        let solution = dist.solution();
        let (l_pre, l_arb) = dist.mean_system_size();
        let summary = SolveSummary {
            lambda: solution.lambda,
            batch_mean: dist.params().batch.mean(),
            batch_max: dist.params().batch.max_size(),
            stability: stability_check(dist.params()),
            p0_prearrival: dist.prearrival_pmf(0),
            p0_arbitrary: dist.p0_arbitrary(),
            l_pre,
            l_arb,
            decay_rate: dist.tail_decay(),
            head_route: dist.head_route(),
            roots: solution.roots.roots.iter().map(|r| (r.re, r.im)).collect(),
            constants: solution.constants.iter().map(|c| (c.re, c.im)).collect(),
            residual_homogeneous: solution.residual_homogeneous,
            residual_rate: solution.residual_rate,
            residual_roots_max: solution.roots.residual_max,
            multiplicity_gap: solution
                .roots
                .multiplicity_gap
                .is_finite()
                .then_some(solution.roots.multiplicity_gap),
            condition_estimate: solution.condition_estimate,
            small_root_warning: dist.small_root_warning(),
            tail_truncation: dist.reporting_truncation(tail_cutoff),
        };
        Self { summary, rows }
    }

    pub fn to_csv(&self, precision: usize) -> String {
        let mut out = String::from("n,p_pre,p_arb,ratio\n");
        for row in &self.rows {
            out.push_str(&format!(
                "{},{:.p$},{:.p$},{:.p$}\n",
                row.n,
                row.p_pre,
                row.p_arb,
                row.ratio,
                p = precision
            ));
        }
        out
    }

    pub fn to_json(&self, precision: usize) -> String {
        to_rounded_json(self, precision)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SimArtifact<'a> {
    pub result: &'a SimResult,
}

impl SimArtifact<'_> {
    /// Empirical table rows share the solve schema plus per-bin standard
    /// errors.
    pub fn to_csv(&self, precision: usize) -> String {
        let r = self.result;
        let mut out = String::from("n,p_pre,p_arb,ratio,se_pre,se_arb\n");
        let len = r.prearrival_pmf.len().max(r.timeavg_pmf.len());
        for n in 0..len {
            let pre = r.prearrival_pmf.get(n).copied().unwrap_or(0.0);
            let next = r.prearrival_pmf.get(n + 1).copied().unwrap_or(0.0);
            out.push_str(&format!(
                "{},{:.p$},{:.p$},{:.p$},{:.p$},{:.p$}\n",
                n,
                pre,
                r.timeavg_pmf.get(n).copied().unwrap_or(0.0),
                if pre > 0.0 { next / pre } else { 0.0 },
                r.prearrival_se.get(n).copied().unwrap_or(0.0),
                r.timeavg_se.get(n).copied().unwrap_or(0.0),
                p = precision
            ));
        }
        out
    }

    pub fn to_json(&self, precision: usize) -> String {
        to_rounded_json(self, precision)
    }
}

pub struct CompareArtifact<'a> {
    pub report: &'a ComparisonReport,
}

impl CompareArtifact<'_> {
    pub fn to_csv(&self, precision: usize) -> String {
        let mut out =
            String::from("n,analytic_pre,empirical_pre,z_pre,analytic_arb,empirical_arb,z_arb\n");
        for bin in &self.report.bins {
            out.push_str(&format!(
                "{},{:.p$},{:.p$},{:.p$},{:.p$},{:.p$},{:.p$}\n",
                bin.n,
                bin.analytic_pre,
                bin.empirical_pre,
                bin.z_pre,
                bin.analytic_arb,
                bin.empirical_arb,
                bin.z_arb,
                p = precision
            ));
        }
        out
    }

    pub fn to_json(&self, precision: usize) -> String {
        to_rounded_json(self.report, precision)
    }
}

pub struct SweepArtifact<'a> {
    pub rows: &'a [SweepRow],
}

impl SweepArtifact<'_> {
    pub fn to_csv(&self, precision: usize) -> String {
        let mut out = String::from("param,series,L,L_pre,p0,rb\n");
        for row in self.rows {
            out.push_str(&format!(
                "{:.p$},{},{:.p$},{:.p$},{:.p$},{:.p$}\n",
                row.param,
                row.series,
                row.l,
                row.l_pre,
                row.p0,
                row.rb,
                p = precision
            ));
        }
        out
    }

    pub fn to_json(&self, precision: usize) -> String {
        to_rounded_json(&self.rows, precision)
    }
}

/// Serialize with every float rounded to `precision` decimals.
fn to_rounded_json<T: Serialize>(value: &T, precision: usize) -> String {
    let mut tree = serde_json::to_value(value).expect("artifacts serialize infallibly");
    round_tree(&mut tree, precision);
    let mut text = serde_json::to_string_pretty(&tree).expect("value tree serializes");
    text.push('\n');
    text
}

fn round_tree(value: &mut Value, precision: usize) {
    match value {
        Value::Number(n) => {
            if n.is_f64() {
                let x = n.as_f64().unwrap_or(0.0);
                if x.is_finite() && x.abs() < 1e15 {
                    let factor = 10f64.powi(precision as i32);
                    let rounded = (x * factor).round() / factor;
                    if let Some(num) = serde_json::Number::from_f64(rounded) {
                        *n = num;
                    }
                }
            }
        }
        Value::Array(items) => items.iter_mut().for_each(|v| round_tree(v, precision)),
        Value::Object(map) => map.values_mut().for_each(|v| round_tree(v, precision)),
        _ => {}
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arrival::{BatchSizeDistribution, InterArrivalModel};
    use crate::model::ModelParams;
    use crate::solver::solve;

    fn dist() -> SystemDistribution {
        let params = ModelParams::new(
            InterArrivalModel::exponential(10.0).unwrap(),
            BatchSizeDistribution::from_sparse(&[(1, 0.2), (3, 0.4), (6, 0.3), (10, 0.1)]).unwrap(),
            10.0,
            5.0,
            2.0,
        )
        .unwrap();
        solve(&params).unwrap()
    }

    #[test]
    fn csv_schema_is_stable() {
        let artifact = SolveArtifact::build(&dist(), 5, 1e-14);
        let csv = artifact.to_csv(8);
        let mut lines = csv.lines();
        assert_eq!(lines.next().unwrap(), "n,p_pre,p_arb,ratio");
        let first = lines.next().unwrap();
        assert!(first.starts_with("0,0.20533567,0.20533567,"), "{first}");
        assert_eq!(csv.lines().count(), 7);
    }

    #[test]
    fn json_round_trips_at_declared_precision() {
        let artifact = SolveArtifact::build(&dist(), 10, 1e-14);
        let text = artifact.to_json(8);
        let parsed: Value = serde_json::from_str(&text).unwrap();
        let rows = parsed["rows"].as_array().unwrap();
        assert_eq!(rows.len(), 11);
        for (row, parsed_row) in artifact.rows.iter().zip(rows) {
            let want = (row.p_pre * 1e8).round() / 1e8;
            assert_eq!(parsed_row["p_pre"].as_f64().unwrap(), want);
        }
    }

    #[test]
    fn emission_is_deterministic() {
        let artifact = SolveArtifact::build(&dist(), 50, 1e-14);
        assert_eq!(artifact.to_json(8), artifact.to_json(8));
        assert_eq!(artifact.to_csv(8), artifact.to_csv(8));
    }

    #[test]
    fn single_root_artifact_stays_finite() {
        let params = ModelParams::new(
            InterArrivalModel::exponential(5.0).unwrap(),
            BatchSizeDistribution::single(),
            10.0,
            0.0,
            0.0,
        )
        .unwrap();
        let artifact = SolveArtifact::build(&solve(&params).unwrap(), 10, 1e-14);
        let text = artifact.to_json(8);
        let parsed: Value = serde_json::from_str(&text).unwrap();
        assert!(parsed["summary"]["multiplicity_gap"].is_null());
        assert!(parsed["summary"]["decay_rate"].as_f64().unwrap() > 0.0);
        // Every number in the artifact survives the round trip.
        assert!(!text.contains("inf") && !text.contains("NaN"));
    }
}
