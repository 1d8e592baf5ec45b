//! Transmit precoders for the three architectures.
//!
//! Every [`PrecoderPair`] is normalized to `||A D||_F^2 = N_s`. Zero-forcing
//! pairs give each stream unit power, so every user transmits with the same
//! power.

mod factorize;
mod pahp;
mod selection;

pub use factorize::{hybrid_factorize_omp, HybridFactorization};
pub use pahp::{quantize_phase, two_stage_full_pahp, PhaseCodebook, PhaseCodebookConfig};
pub use selection::{
    beam_set_rate, lahp_precoder, select_beams_exhaustive, select_beams_ia,
    select_beams_incremental, select_beams_mm, BeamSet, EXHAUSTIVE_LIMIT,
};

use num_complex::Complex64;

use crate::channel::BeamspaceTransform;
use crate::error::Result;
use crate::linalg::{hermitian_inverse, CMat};
use crate::metrics::Architecture;

#[derive(Debug, Clone, PartialEq)]
pub struct PrecoderPair {
    /// `N x N_RF`. Unit-modulus entries of magnitude `1/sqrt(N)` for
    /// phased arrays, 0/1 beam selectors (in beamspace) for lens arrays, the
    /// identity for the fully digital transmitter.
    pub analog: CMat,
    /// `N_RF x N_s`.
    pub digital: CMat,
    pub architecture: Architecture,
    /// Set when the zero-forcing Gram matrix had to be regularized.
    pub regularized: bool,
}

impl PrecoderPair {
    /// Builds the pair and rescales each stream of `A D` to unit power.
    pub fn new(analog: CMat, digital: CMat, architecture: Architecture, regularized: bool) -> Self {
        let mut pair = Self {
            analog,
            digital,
            architecture,
            regularized,
        };
        let combined = pair.combined();
        for (k, column) in combined.column_iter().enumerate() {
            let power = column.norm_squared();
            if power > 0.0 && power.is_finite() {
                pair.digital.column_mut(k).unscale_mut(power.sqrt());
            }
        }
        pair
    }

    /// Builds the pair and rescales the digital stage as a whole to
    /// `||A D||_F^2 = N_s`, keeping the relative stream powers.
    pub fn with_total_power(
        analog: CMat,
        digital: CMat,
        architecture: Architecture,
        regularized: bool,
    ) -> Self {
        let mut pair = Self {
            analog,
            digital,
            architecture,
            regularized,
        };
        let power = pair.combined().norm_squared();
        if power > 0.0 {
            let scale = (pair.n_streams() as f64 / power).sqrt();
            pair.digital *= Complex64::new(scale, 0.0);
        }
        pair
    }

    pub fn n_streams(&self) -> usize {
        self.digital.ncols()
    }

    pub fn n_rf(&self) -> usize {
        self.analog.ncols()
    }

    /// `A D` in the architecture's own domain (beamspace for LAHP).
    pub fn combined(&self) -> CMat {
        &self.analog * &self.digital
    }

    /// Precoder applied to the antenna elements.
    pub fn spatial(&self, transform: &BeamspaceTransform) -> CMat {
        match self.architecture {
            Architecture::LahpAdaptive => &transform.matrix * self.combined(),
            _ => self.combined(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ZfPrecoder {
    /// `M x N_s`, every column scaled to unit norm.
    pub digital: CMat,
    pub regularized: bool,
}

/// Zero forcing on an effective channel: `D = H^H (H H^H)^-1` with unit-norm
/// columns. A numerically singular Gram matrix gets a small ridge and the
/// result is flagged instead of failing.
pub fn zf_precoder(h_eff: &CMat) -> Result<ZfPrecoder> {
    let gram = h_eff * h_eff.adjoint();
    let (inv, regularized) = hermitian_inverse(&gram);
    let mut digital = h_eff.adjoint() * inv;
    for mut column in digital.column_iter_mut() {
        let norm = column.norm();
        if norm > 0.0 && norm.is_finite() {
            column.unscale_mut(norm);
        }
    }
    Ok(ZfPrecoder {
        digital,
        regularized,
    })
}

/// Fully digital ZF over all antennas.
pub fn fully_digital_precoder(h: &CMat) -> Result<PrecoderPair> {
    let zf = zf_precoder(h)?;
    let n = h.ncols();
    Ok(PrecoderPair::new(
        CMat::identity(n, n),
        zf.digital,
        Architecture::FullyDigital,
        zf.regularized,
    ))
}
