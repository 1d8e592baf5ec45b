use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::error::Result;
use crate::metrics::Architecture;
use crate::rng::RNG_ALGORITHM;

use super::config::{ExperimentConfig, SweepVariable};
use super::trial::{CsiKind, Metric, SimContext, TrialOutcome};

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub scheme: String,
    pub estimator: String,
    pub sweep_name: String,
    pub sweep_value: f64,
    pub metric: String,
    pub mean: f64,
    /// Sample standard deviation over `sqrt(trials)`.
    pub std_error: f64,
    pub trials: usize,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SweepResult {
    pub metadata: Vec<(String, String)>,
    pub rows: Vec<SweepRow>,
}

impl SweepResult {
    pub fn meta(&self, key: &str) -> Option<&str> {
        self.metadata
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    pub fn find(
        &self,
        scheme: &str,
        estimator: &str,
        metric: &str,
        sweep_value: f64,
    ) -> Option<&SweepRow> {
        self.rows.iter().find(|r| {
            r.scheme == scheme
                && r.estimator == estimator
                && r.metric == metric
                && r.sweep_value == sweep_value
        })
    }

    /// `(sweep_value, mean)` pairs of one curve, in sweep order.
    pub fn curve(&self, scheme: &str, estimator: &str, metric: &str) -> Vec<(f64, f64)> {
        self.rows
            .iter()
            .filter(|r| r.scheme == scheme && r.estimator == estimator && r.metric == metric)
            .map(|r| (r.sweep_value, r.mean))
            .collect()
    }
}

/// Runs every trial (in parallel) and aggregates in trial order.
pub fn run_sweep(config: &ExperimentConfig) -> Result<SweepResult> {
    let ctx = SimContext::new(config.clone())?;
    let outcomes: Vec<TrialOutcome> = (0..config.trials as u64)
        .into_par_iter()
        .map(|t| ctx.run_trial(t))
        .collect();
    Ok(aggregate(config, &outcomes))
}

type Key = (Architecture, CsiKind, &'static str, usize, Metric);

pub fn aggregate(config: &ExperimentConfig, outcomes: &[TrialOutcome]) -> SweepResult {
    let sweep = config.sweep_variable();
    let grid = config.sweep_values();
    let mut groups: BTreeMap<Key, Vec<f64>> = BTreeMap::new();
    for o in outcomes {
        for s in &o.samples {
            groups
                .entry((s.scheme, s.csi, s.estimator, s.point, s.metric))
                .or_default()
                .push(s.value);
        }
    }
    let rows = groups
        .into_iter()
        .map(|((scheme, _, estimator, point, metric), values)| {
            let n = values.len();
            let mean = values.iter().sum::<f64>() / n as f64;
            let std_error = if n > 1 {
                let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
                var.sqrt() / (n as f64).sqrt()
            } else {
                0.0
            };
            SweepRow {
                scheme: scheme.name().into(),
                estimator: estimator.into(),
                sweep_name: sweep.name().into(),
                sweep_value: grid[point],
                metric: metric.name().into(),
                mean,
                std_error,
                trials: n,
            }
        })
        .collect();

    let mut metadata: Vec<(String, String)> = vec![
        (
            "generator".into(),
            format!("hbf-core {}", env!("CARGO_PKG_VERSION")),
        ),
        ("seed".into(), config.seed.to_string()),
        ("rng".into(), RNG_ALGORITHM.into()),
        ("config_hash".into(), config.hash()),
        ("sweep_name".into(), sweep.name().into()),
    ];
    for (k, v) in config.canonical() {
        metadata.push((format!("config.{k}"), v));
    }
    metadata.push((
        "snr_convention".into(),
        "noise_var = N_s / 10^(snr_db/10), unit power per stream (||F||_F^2 = N_s), rates on the true channel".into(),
    ));
    if sweep == SweepVariable::Users {
        metadata.push((
            "power_efficiency_rate".into(),
            format!(
                "sum-rate at snr_db={} with csi={}, n_rf = users unless set",
                config.snr_db[0], config.csi
            ),
        ));
    }
    let max_pilots = outcomes
        .iter()
        .map(|o| o.max_pilots_used)
        .max()
        .unwrap_or(0);
    metadata.push(("pilots_budget".into(), config.pilots.to_string()));
    metadata.push(("max_pilots_used".into(), max_pilots.to_string()));
    let regularized: usize = outcomes.iter().map(|o| o.regularized).sum();
    metadata.push(("regularized_precoders".into(), regularized.to_string()));
    let mut failures: BTreeMap<(Architecture, &str, String), usize> = BTreeMap::new();
    for o in outcomes {
        for f in &o.failures {
            let at = f.point.map_or("all".to_string(), |p| grid[p].to_string());
            *failures.entry((f.scheme, f.estimator, at)).or_default() += 1;
        }
    }
    metadata.push((
        "failed_trials".into(),
        failures.values().sum::<usize>().to_string(),
    ));
    for ((scheme, estimator, at), count) in failures {
        metadata.push((
            "flagged".into(),
            format!(
                "scheme={} estimator={estimator} sweep_value={at} failed={count}",
                scheme.name()
            ),
        ));
    }
    SweepResult { metadata, rows }
}
