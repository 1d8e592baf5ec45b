use std::fmt;
use std::str::FromStr;

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scenario {
    /// Sum-rate against SNR, perfect and estimated CSI.
    Fig4,
    /// Power efficiency against the number of users.
    Fig5,
    /// Two-cell sum-rate against SNR.
    Fig6,
    Custom,
}

impl FromStr for Scenario {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fig4" => Ok(Scenario::Fig4),
            "fig5" => Ok(Scenario::Fig5),
            "fig6" => Ok(Scenario::Fig6),
            "custom" => Ok(Scenario::Custom),
            _ => Err(Error::Config(format!("unknown scenario '{s}'"))),
        }
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Scenario::Fig4 => "fig4",
            Scenario::Fig5 => "fig5",
            Scenario::Fig6 => "fig6",
            Scenario::Custom => "custom",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CsiMode {
    Perfect,
    Estimated,
    Both,
}

impl FromStr for CsiMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "perfect" => Ok(CsiMode::Perfect),
            "estimated" => Ok(CsiMode::Estimated),
            "both" => Ok(CsiMode::Both),
            _ => Err(Error::Config(format!("unknown CSI mode '{s}'"))),
        }
    }
}

impl fmt::Display for CsiMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CsiMode::Perfect => "perfect",
            CsiMode::Estimated => "estimated",
            CsiMode::Both => "both",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SelectionRule {
    Ia,
    Mm,
    Incremental,
}

impl FromStr for SelectionRule {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ia" => Ok(SelectionRule::Ia),
            "mm" => Ok(SelectionRule::Mm),
            "incremental" => Ok(SelectionRule::Incremental),
            _ => Err(Error::Config(format!("unknown beam selection '{s}'"))),
        }
    }
}

impl fmt::Display for SelectionRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SelectionRule::Ia => "ia",
            SelectionRule::Mm => "mm",
            SelectionRule::Incremental => "incremental",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PahpEstimator {
    AdaptiveCs,
    CoarseCs,
}

impl PahpEstimator {
    pub fn name(&self) -> &'static str {
        match self {
            PahpEstimator::AdaptiveCs => "adaptive_cs",
            PahpEstimator::CoarseCs => "coarse_cs",
        }
    }
}

impl FromStr for PahpEstimator {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "adaptive_cs" => Ok(PahpEstimator::AdaptiveCs),
            "coarse_cs" => Ok(PahpEstimator::CoarseCs),
            _ => Err(Error::Config(format!("unknown PAHP estimator '{s}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepVariable {
    Snr,
    Users,
}

impl SweepVariable {
    pub fn name(&self) -> &'static str {
        match self {
            SweepVariable::Snr => "snr_db",
            SweepVariable::Users => "users",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub scenario: Scenario,
    pub n_antennas: usize,
    /// RF chains of the hybrid architectures; `None` means one per user.
    pub n_rf: Option<usize>,
    pub users: Vec<usize>,
    pub snr_db: Vec<f64>,
    pub trials: usize,
    pub seed: u64,
    pub csi: CsiMode,
    pub pilots: usize,
    pub training_snr_db: f64,
    pub n_nlos: usize,
    pub nlos_variance: f64,
    pub phase_bits: Option<u32>,
    pub codebook_oversampling: usize,
    pub grid_size: usize,
    pub cells: usize,
    pub sparsity: usize,
    pub selection: SelectionRule,
    pub pahp_estimator: PahpEstimator,
}

impl ExperimentConfig {
    pub fn for_scenario(scenario: Scenario) -> Self {
        let base = Self {
            scenario,
            n_antennas: 256,
            n_rf: None,
            users: vec![16],
            snr_db: (0..=6).map(|i| 5.0 * i as f64).collect(),
            trials: 200,
            seed: 2017,
            csi: CsiMode::Both,
            pilots: 96,
            training_snr_db: 20.0,
            n_nlos: 2,
            nlos_variance: 0.1,
            phase_bits: Some(4),
            codebook_oversampling: 4,
            grid_size: 1024,
            cells: 1,
            sparsity: 8,
            selection: SelectionRule::Ia,
            pahp_estimator: PahpEstimator::AdaptiveCs,
        };
        match scenario {
            Scenario::Fig4 | Scenario::Custom => base,
            Scenario::Fig5 => Self {
                users: (2..=16).collect(),
                snr_db: vec![20.0],
                csi: CsiMode::Perfect,
                ..base
            },
            Scenario::Fig6 => Self {
                snr_db: (0..=8).map(|i| 5.0 * i as f64).collect(),
                csi: CsiMode::Perfect,
                cells: 2,
                ..base
            },
        }
    }

    pub fn sweep_variable(&self) -> SweepVariable {
        if self.users.len() > 1 {
            SweepVariable::Users
        } else {
            SweepVariable::Snr
        }
    }

    pub fn sweep_values(&self) -> Vec<f64> {
        match self.sweep_variable() {
            SweepVariable::Users => self.users.iter().map(|&u| u as f64).collect(),
            SweepVariable::Snr => self.snr_db.clone(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |m: String| Err(Error::Config(m));
        if self.trials == 0 {
            return fail("trials must be >= 1".into());
        }
        if self.users.is_empty() || self.snr_db.is_empty() {
            return fail("sweep grids must be non-empty".into());
        }
        if self.users.len() > 1 && self.snr_db.len() > 1 {
            return fail("sweep either users or snr, not both".into());
        }
        if self.users.iter().any(|&u| u == 0 || u > self.n_antennas) {
            return fail(format!("user counts must be in 1..={}", self.n_antennas));
        }
        if self.n_antennas < 2 {
            return fail("n_antennas must be >= 2".into());
        }
        if !(1..=2).contains(&self.cells) {
            return fail(format!("unsupported cell count {}", self.cells));
        }
        if let Some(n_rf) = self.n_rf {
            if self.users.iter().any(|&u| n_rf < u) || n_rf > self.n_antennas {
                return fail(format!(
                    "n_rf {n_rf} must cover every user count and fit the array"
                ));
            }
        }
        if self.grid_size < self.n_antennas || self.codebook_oversampling == 0 {
            return fail("grid_size must be >= n_antennas and oversampling >= 1".into());
        }
        if self.sparsity == 0 || self.sparsity > self.pilots {
            return fail("sparsity must be in 1..=pilots".into());
        }
        if self.nlos_variance.is_nan() || self.nlos_variance <= 0.0 {
            return fail("nlos_variance must be positive".into());
        }
        Ok(())
    }

    /// Applies one `key = value` setting. Keys mirror the CLI flags.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        fn num<T: FromStr>(key: &str, v: &str) -> Result<T> {
            v.parse()
                .map_err(|_| Error::Config(format!("invalid value '{v}' for '{key}'")))
        }
        match key {
            "scenario" => self.scenario = value.parse()?,
            "n_antennas" => self.n_antennas = num(key, value)?,
            "n_rf" => {
                self.n_rf = match value {
                    "auto" | "users" => None,
                    v => Some(num(key, v)?),
                }
            }
            "users" => {
                self.users = parse_grid(value)?
                    .into_iter()
                    .map(|u| {
                        if u.fract() == 0.0 && u >= 1.0 {
                            Ok(u as usize)
                        } else {
                            Err(Error::Config(format!("invalid user count {u}")))
                        }
                    })
                    .collect::<Result<_>>()?
            }
            "snr" => self.snr_db = parse_grid(value)?,
            "trials" => self.trials = num(key, value)?,
            "seed" => self.seed = num(key, value)?,
            "csi" => self.csi = value.parse()?,
            "pilots" => self.pilots = num(key, value)?,
            "training_snr" => self.training_snr_db = num(key, value)?,
            "n_nlos" => self.n_nlos = num(key, value)?,
            "nlos_variance" => self.nlos_variance = num(key, value)?,
            "phase_bits" => {
                self.phase_bits = match value {
                    "none" | "inf" => None,
                    v => Some(num(key, v)?),
                }
            }
            "codebook_oversampling" => self.codebook_oversampling = num(key, value)?,
            "grid_size" => self.grid_size = num(key, value)?,
            "cells" => self.cells = num(key, value)?,
            "sparsity" => self.sparsity = num(key, value)?,
            "selection" => self.selection = value.parse()?,
            "pahp_estimator" => self.pahp_estimator = value.parse()?,
            _ => return Err(Error::Config(format!("unknown config key '{key}'"))),
        }
        Ok(())
    }

    /// Every setting as `(key, value)`, in a fixed order. Feeding these back
    /// through [`ExperimentConfig::set`] reproduces the config.
    pub fn canonical(&self) -> Vec<(&'static str, String)> {
        let list = |v: &[f64]| {
            v.iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(",")
        };
        vec![
            ("scenario", self.scenario.to_string()),
            ("n_antennas", self.n_antennas.to_string()),
            ("n_rf", self.n_rf.map_or("auto".into(), |n| n.to_string())),
            (
                "users",
                self.users
                    .iter()
                    .map(|u| u.to_string())
                    .collect::<Vec<_>>()
                    .join(","),
            ),
            ("snr", list(&self.snr_db)),
            ("trials", self.trials.to_string()),
            ("seed", self.seed.to_string()),
            ("csi", self.csi.to_string()),
            ("pilots", self.pilots.to_string()),
            ("training_snr", self.training_snr_db.to_string()),
            ("n_nlos", self.n_nlos.to_string()),
            ("nlos_variance", self.nlos_variance.to_string()),
            (
                "phase_bits",
                self.phase_bits.map_or("none".into(), |b| b.to_string()),
            ),
            (
                "codebook_oversampling",
                self.codebook_oversampling.to_string(),
            ),
            ("grid_size", self.grid_size.to_string()),
            ("cells", self.cells.to_string()),
            ("sparsity", self.sparsity.to_string()),
            ("selection", self.selection.to_string()),
            ("pahp_estimator", self.pahp_estimator.name().to_string()),
        ]
    }

    /// First 16 hex digits of SHA-256 over the canonical settings.
    pub fn hash(&self) -> String {
        let mut hasher = Sha256::new();
        for (k, v) in self.canonical() {
            hasher.update(k.as_bytes());
            hasher.update(b"=");
            hasher.update(v.as_bytes());
            hasher.update(b"\n");
        }
        hex::encode(hasher.finalize())[..16].to_string()
    }
}

/// Parses `a,b,c` or an inclusive range `start:stop:step`.
pub fn parse_grid(text: &str) -> Result<Vec<f64>> {
    let bad = || Error::Config(format!("invalid grid '{text}'"));
    let text = text.trim();
    if text.contains(':') {
        let parts: Vec<f64> = text
            .split(':')
            .map(|p| p.trim().parse::<f64>().map_err(|_| bad()))
            .collect::<Result<_>>()?;
        let [start, stop, step] = parts[..] else {
            return Err(bad());
        };
        if step.is_nan() || step <= 0.0 || stop < start {
            return Err(bad());
        }
        let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
        return Ok((0..count).map(|i| start + step * i as f64).collect());
    }
    text.split(',')
        .map(|p| p.trim().parse::<f64>().map_err(|_| bad()))
        .collect()
}

/// Parses flat `key = value` text. Blank lines and `#` comments are skipped.
pub fn parse_kv(text: &str) -> Result<Vec<(String, String)>> {
    text.lines()
        .enumerate()
        .filter_map(|(i, line)| {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                return None;
            }
            Some(match line.split_once('=') {
                Some((k, v)) if !k.trim().is_empty() => {
                    Ok((k.trim().to_string(), v.trim().to_string()))
                }
                _ => Err(Error::Config(format!(
                    "line {}: expected key = value",
                    i + 1
                ))),
            })
        })
        .collect()
}
