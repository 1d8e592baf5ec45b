use crate::channel::{dft_matrix, gen_scenario, ArrayGeometry, BeamspaceTransform, ScenarioConfig};
use crate::error::Result;
use crate::estimation::{
    build_sensing_plan, estimate_adaptive_cs, estimate_beamspace_cs, estimate_coarse_cs,
    estimate_ls_full_digital, DirectionDictionary, PilotBudget,
};
use crate::linalg::CMat;
use crate::metrics::{
    noise_variance, power_efficiency, sum_rate, Architecture, Interferer, PowerConstants,
};
use crate::precoding::{
    fully_digital_precoder, lahp_precoder, select_beams_ia, select_beams_incremental,
    select_beams_mm, two_stage_full_pahp, PhaseCodebook, PhaseCodebookConfig, PrecoderPair,
};
use crate::rng::{self, Purpose};

use super::config::{CsiMode, ExperimentConfig, PahpEstimator, SelectionRule, SweepVariable};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CsiKind {
    Perfect,
    Estimated,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Metric {
    SumRate,
    PowerEfficiency,
}

impl Metric {
    pub fn name(&self) -> &'static str {
        match self {
            Metric::SumRate => "sum_rate",
            Metric::PowerEfficiency => "power_efficiency",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    pub scheme: Architecture,
    pub csi: CsiKind,
    pub estimator: &'static str,
    /// Index into the sweep grid.
    pub point: usize,
    pub metric: Metric,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrialFailure {
    pub scheme: Architecture,
    pub estimator: &'static str,
    pub point: Option<usize>,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct TrialOutcome {
    pub trial: u64,
    pub samples: Vec<Sample>,
    pub failures: Vec<TrialFailure>,
    /// Precoders whose ZF Gram matrix needed regularization.
    pub regularized: usize,
    pub max_pilots_used: usize,
}

/// Immutable per-experiment state shared by all trials.
#[derive(Debug, Clone)]
pub struct SimContext {
    pub config: ExperimentConfig,
    pub geometry: ArrayGeometry,
    pub transform: BeamspaceTransform,
    pub dictionary: DirectionDictionary,
    pub codebook: PhaseCodebook,
    pub power: PowerConstants,
}

impl SimContext {
    pub fn new(config: ExperimentConfig) -> Result<Self> {
        config.validate()?;
        let geometry = ArrayGeometry::new(config.n_antennas)?;
        let codebook = PhaseCodebook::new(
            &geometry,
            PhaseCodebookConfig {
                bits: config.phase_bits,
                oversampling: config.codebook_oversampling,
            },
        )?;
        Ok(Self {
            transform: dft_matrix(&geometry),
            dictionary: DirectionDictionary::new(&geometry, config.grid_size)?,
            codebook,
            geometry,
            power: PowerConstants::default(),
            config,
        })
    }

    fn csi_kinds(&self) -> &'static [CsiKind] {
        match self.config.csi {
            CsiMode::Perfect => &[CsiKind::Perfect],
            CsiMode::Estimated => &[CsiKind::Estimated],
            CsiMode::Both => &[CsiKind::Perfect, CsiKind::Estimated],
        }
    }

    fn estimator_name(&self, scheme: Architecture, csi: CsiKind) -> &'static str {
        match (csi, scheme) {
            (CsiKind::Perfect, _) => "perfect",
            (CsiKind::Estimated, Architecture::FullyDigital) => "ls",
            (CsiKind::Estimated, Architecture::FullPahp) => self.config.pahp_estimator.name(),
            (CsiKind::Estimated, Architecture::LahpAdaptive) => "beamspace_cs",
        }
    }

    fn budget(&self) -> PilotBudget {
        PilotBudget::new(self.config.pilots, self.config.training_snr_db)
    }

    /// Channel knowledge a base station designs with: spatial for the fully
    /// digital and phased arrays, beamspace for the lens array.
    #[allow(clippy::too_many_arguments)]
    fn knowledge(
        &self,
        scheme: Architecture,
        csi: CsiKind,
        h: &CMat,
        n_rf: usize,
        trial: u64,
        cell: usize,
        outcome: &mut TrialOutcome,
    ) -> Result<CMat> {
        let cfg = &self.config;
        let budget = self.budget();
        let idx = cell as u32;
        let report = match (csi, scheme) {
            (CsiKind::Perfect, Architecture::LahpAdaptive) => {
                return Ok(h * &self.transform.matrix)
            }
            (CsiKind::Perfect, _) => return Ok(h.clone()),
            (CsiKind::Estimated, Architecture::FullyDigital) => {
                let mut r = rng::stream(cfg.seed, trial, Purpose::EstimateFullyDigital, idx);
                estimate_ls_full_digital(h, &budget, &mut r)?
            }
            (CsiKind::Estimated, Architecture::FullPahp) => {
                let mut r = rng::stream(cfg.seed, trial, Purpose::EstimatePahp, idx);
                let paths = cfg.n_nlos + 1;
                match cfg.pahp_estimator {
                    PahpEstimator::AdaptiveCs => {
                        estimate_adaptive_cs(h, &self.dictionary, &budget, paths, &mut r)?
                    }
                    PahpEstimator::CoarseCs => {
                        estimate_coarse_cs(h, &self.dictionary, &budget, paths, &mut r)?
                    }
                }
            }
            (CsiKind::Estimated, Architecture::LahpAdaptive) => {
                let mut plan_rng = rng::stream(cfg.seed, trial, Purpose::SensingPlan, idx);
                let plan = build_sensing_plan(cfg.n_antennas, n_rf, &budget, &mut plan_rng)?;
                let mut r = rng::stream(cfg.seed, trial, Purpose::EstimateLahp, idx);
                estimate_beamspace_cs(h, &self.transform, &plan, &budget, cfg.sparsity, &mut r)?
            }
        };
        outcome.max_pilots_used = outcome.max_pilots_used.max(report.pilots_used);
        Ok(report.estimate)
    }

    fn design(
        &self,
        scheme: Architecture,
        knowledge: &CMat,
        n_rf: usize,
        snr_db: f64,
    ) -> Result<PrecoderPair> {
        match scheme {
            Architecture::FullyDigital => fully_digital_precoder(knowledge),
            Architecture::FullPahp => two_stage_full_pahp(knowledge, &self.codebook, n_rf),
            Architecture::LahpAdaptive => {
                let beams = match self.config.selection {
                    SelectionRule::Ia => select_beams_ia(knowledge, n_rf, snr_db)?,
                    SelectionRule::Mm => select_beams_mm(knowledge, n_rf)?,
                    SelectionRule::Incremental => {
                        select_beams_incremental(knowledge, n_rf, snr_db)?
                    }
                };
                lahp_precoder(knowledge, &beams)
            }
        }
    }

    /// Antenna-domain precoders of every cell for each SNR of `snrs`.
    fn precoders(
        &self,
        scheme: Architecture,
        knowledge: &[CMat],
        n_rf: usize,
        snrs: &[f64],
        outcome: &mut TrialOutcome,
    ) -> Result<Vec<Vec<CMat>>> {
        let snr_dependent =
            scheme == Architecture::LahpAdaptive && self.config.selection != SelectionRule::Mm;
        let mut per_snr: Vec<Vec<CMat>> = Vec::with_capacity(snrs.len());
        for (i, &snr) in snrs.iter().enumerate() {
            if i > 0 && !snr_dependent {
                per_snr.push(per_snr[0].clone());
                continue;
            }
            let mut cells = Vec::with_capacity(knowledge.len());
            for k in knowledge {
                let pair = self.design(scheme, k, n_rf, snr)?;
                debug_assert!(
                    (pair.combined().norm_squared() - pair.n_streams() as f64).abs() < 1e-6
                );
                outcome.regularized += usize::from(pair.regularized);
                cells.push(pair.spatial(&self.transform));
            }
            per_snr.push(cells);
        }
        Ok(per_snr)
    }

    /// One channel realization pushed through every configured scheme and
    /// CSI mode. Rates are always evaluated on the true channel. Failures are
    /// recorded against their scheme and never abort the trial.
    pub fn run_trial(&self, trial: u64) -> TrialOutcome {
        let cfg = &self.config;
        let mut outcome = TrialOutcome {
            trial,
            ..Default::default()
        };
        let sweep = cfg.sweep_variable();
        let user_points: Vec<(Option<usize>, usize)> = match sweep {
            SweepVariable::Users => cfg
                .users
                .iter()
                .enumerate()
                .map(|(i, &u)| (Some(i), u))
                .collect(),
            SweepVariable::Snr => vec![(None, cfg.users[0])],
        };
        for (user_point, n_users) in user_points {
            let scenario = ScenarioConfig {
                geometry: self.geometry,
                n_users,
                n_cells: cfg.cells,
                n_nlos: cfg.n_nlos,
                nlos_variance: cfg.nlos_variance,
                seed: cfg.seed,
            };
            let realization = match gen_scenario(&scenario, trial) {
                Ok(r) => r,
                Err(e) => {
                    for scheme in Architecture::ALL {
                        outcome.failures.push(TrialFailure {
                            scheme,
                            estimator: "channel",
                            point: user_point,
                            message: e.to_string(),
                        });
                    }
                    continue;
                }
            };
            let n_rf = cfg.n_rf.unwrap_or(n_users);
            for scheme in Architecture::ALL {
                for &csi in self.csi_kinds() {
                    let estimator = self.estimator_name(scheme, csi);
                    let result = (|| -> Result<Vec<f64>> {
                        let knowledge = (0..cfg.cells)
                            .map(|c| {
                                let h = &realization.serving(c).spatial;
                                self.knowledge(scheme, csi, h, n_rf, trial, c, &mut outcome)
                            })
                            .collect::<Result<Vec<_>>>()?;
                        let precoders =
                            self.precoders(scheme, &knowledge, n_rf, &cfg.snr_db, &mut outcome)?;
                        cfg.snr_db
                            .iter()
                            .zip(&precoders)
                            .map(|(&snr, f)| {
                                let noise = noise_variance(snr, n_users);
                                let mut total = 0.0;
                                for c in 0..cfg.cells {
                                    let interferers: Vec<Interferer<'_>> = (0..cfg.cells)
                                        .filter(|&b| b != c)
                                        .map(|b| Interferer {
                                            channel: &realization.link(c, b).spatial,
                                            precoder: &f[b],
                                        })
                                        .collect();
                                    total += sum_rate(
                                        &realization.serving(c).spatial,
                                        &f[c],
                                        noise,
                                        &interferers,
                                    )?
                                    .sum_rate;
                                }
                                Ok(total / cfg.cells as f64)
                            })
                            .collect()
                    })();
                    match result {
                        Ok(rates) => {
                            for (snr_point, rate) in rates.into_iter().enumerate() {
                                let point = user_point.unwrap_or(snr_point);
                                outcome.samples.push(Sample {
                                    scheme,
                                    csi,
                                    estimator,
                                    point,
                                    metric: Metric::SumRate,
                                    value: rate,
                                });
                                if sweep == SweepVariable::Users {
                                    let eta = power_efficiency(
                                        rate,
                                        scheme,
                                        cfg.n_antennas,
                                        n_rf,
                                        &self.power,
                                    )
                                    .expect("rate is non-negative");
                                    outcome.samples.push(Sample {
                                        scheme,
                                        csi,
                                        estimator,
                                        point,
                                        metric: Metric::PowerEfficiency,
                                        value: eta,
                                    });
                                }
                            }
                        }
                        Err(e) => outcome.failures.push(TrialFailure {
                            scheme,
                            estimator,
                            point: user_point,
                            message: e.to_string(),
                        }),
                    }
                }
            }
        }
        outcome
    }
}

/// Convenience wrapper that builds a fresh [`SimContext`] for a single trial.
pub fn run_trial(config: &ExperimentConfig, trial: u64) -> Result<TrialOutcome> {
    Ok(SimContext::new(config.clone())?.run_trial(trial))
}
