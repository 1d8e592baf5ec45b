//! Two-stage multi-user precoding for the fully connected phased array.

use std::f64::consts::TAU;

use num_complex::Complex64;

use super::{zf_precoder, PrecoderPair};
use crate::channel::ArrayGeometry;
use crate::error::{Error, Result};
use crate::estimation::DirectionDictionary;
use crate::linalg::CMat;
use crate::metrics::Architecture;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PhaseCodebookConfig {
    /// Phase-shifter resolution; `None` for unquantized phases.
    pub bits: Option<u32>,
    /// Codeword directions per DFT beam. `1` gives the DFT beams themselves.
    pub oversampling: usize,
}

impl Default for PhaseCodebookConfig {
    fn default() -> Self {
        Self {
            bits: Some(4),
            oversampling: 4,
        }
    }
}

/// Rounds a phase to the nearest point of `{2 pi k / 2^bits}`.
pub fn quantize_phase(phase: f64, bits: u32) -> f64 {
    let step = TAU / f64::from(1u32 << bits);
    ((phase / step).round() * step).rem_euclid(TAU)
}

/// Beamsteering codewords realizable by the phase shifters: steering vectors
/// on an oversampled DFT grid with phases snapped to the shifter resolution.
#[derive(Debug, Clone)]
pub struct PhaseCodebook {
    pub config: PhaseCodebookConfig,
    /// `N x G`, every entry of magnitude `1/sqrt(N)`.
    pub codewords: CMat,
}

impl PhaseCodebook {
    pub fn new(geometry: &ArrayGeometry, config: PhaseCodebookConfig) -> Result<Self> {
        if config.oversampling == 0 {
            return Err(Error::InvalidArgument(
                "codebook oversampling must be >= 1".into(),
            ));
        }
        let n = geometry.n_antennas();
        let grid = DirectionDictionary::new(geometry, n * config.oversampling)?;
        let magnitude = 1.0 / (n as f64).sqrt();
        let codewords = grid.atoms.map(|z| {
            let phase = match config.bits {
                Some(b) => quantize_phase(z.arg(), b),
                None => z.arg(),
            };
            Complex64::from_polar(magnitude, phase)
        });
        Ok(Self { config, codewords })
    }

    pub fn len(&self) -> usize {
        self.codewords.ncols()
    }

    pub fn is_empty(&self) -> bool {
        self.codewords.ncols() == 0
    }
}

/// Stage one picks, per user, the codeword maximizing `|h_k a|` on the
/// (estimated) channel; a codeword already taken by an earlier user is
/// skipped in favor of that user's best unused one. Stage two applies ZF to
/// the effective channel `H A`.
pub fn two_stage_full_pahp(
    h_est: &CMat,
    codebook: &PhaseCodebook,
    n_rf: usize,
) -> Result<PrecoderPair> {
    let n_users = h_est.nrows();
    if n_rf != n_users {
        return Err(Error::InvalidArgument(format!(
            "two-stage PAHP needs one RF chain per user ({n_users}), got {n_rf}"
        )));
    }
    if h_est.ncols() != codebook.codewords.nrows() {
        return Err(Error::dims(
            "two_stage_full_pahp",
            format!("{} antennas", codebook.codewords.nrows()),
            h_est.ncols(),
        ));
    }
    if n_users > codebook.len() {
        return Err(Error::InvalidArgument("more users than codewords".into()));
    }
    let gains = h_est * &codebook.codewords;
    let mut taken = vec![false; codebook.len()];
    let mut chosen = Vec::with_capacity(n_users);
    for k in 0..n_users {
        let mut best: Option<(usize, f64)> = None;
        for g in (0..codebook.len()).filter(|&g| !taken[g]) {
            let v = gains[(k, g)].norm();
            if best.is_none_or(|(_, b)| v > b) {
                best = Some((g, v));
            }
        }
        let (g, _) = best.expect("codebook has an unused codeword");
        taken[g] = true;
        chosen.push(g);
    }
    let analog = crate::linalg::select_columns(&codebook.codewords, &chosen);
    let zf = zf_precoder(&(h_est * &analog))?;
    Ok(PrecoderPair::new(
        analog,
        zf.digital,
        Architecture::FullPahp,
        zf.regularized,
    ))
}
