//! Saleh-Valenzuela multipath channels on a half-wavelength uniform linear
//! array, and the lens-array beamspace transform.
//!
//! Conventions: spatial frequency `psi = 0.5 * sin(theta)`; the response of
//! element `n` (0-based) to spatial frequency `psi` is
//! `exp(-j 2 pi psi (n - (N-1)/2)) / sqrt(N)`; a user's channel row is
//! `sum_l beta_l * a(theta_l)^H`.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::{complex_gaussian, CMat, CVec};
use crate::rng::{self, Purpose, SimRng};

/// Element spacing in wavelengths. Fixed: it makes the lens transform an exact DFT.
pub const ELEMENT_SPACING: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ArrayGeometry {
    n_antennas: usize,
}

impl ArrayGeometry {
    pub fn new(n_antennas: usize) -> Result<Self> {
        if n_antennas < 2 {
            return Err(Error::InvalidArgument(format!(
                "array needs at least 2 antennas, got {n_antennas}"
            )));
        }
        Ok(Self { n_antennas })
    }

    pub fn n_antennas(&self) -> usize {
        self.n_antennas
    }

    pub fn element_spacing_wavelengths(&self) -> f64 {
        ELEMENT_SPACING
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathComponent {
    pub gain: Complex64,
    /// Angle of departure in radians, within `[-pi/2, pi/2]`.
    pub angle: f64,
}

/// Array response at an arbitrary spatial frequency.
pub fn steering_at_frequency(n: usize, psi: f64) -> CVec {
    let center = (n as f64 - 1.0) / 2.0;
    let scale = 1.0 / (n as f64).sqrt();
    CVec::from_fn(n, |i, _| {
        Complex64::from_polar(scale, -2.0 * PI * psi * (i as f64 - center))
    })
}

pub fn steering_vector(geometry: &ArrayGeometry, angle: f64) -> Result<CVec> {
    if !(-FRAC_PI_2..=FRAC_PI_2).contains(&angle) {
        return Err(Error::AngleOutOfRange(angle));
    }
    Ok(steering_at_frequency(
        geometry.n_antennas,
        ELEMENT_SPACING * angle.sin(),
    ))
}

/// Channel row `sum_l gain_l * a(angle_l)^H` for a set of paths.
pub fn row_from_paths(geometry: &ArrayGeometry, paths: &[PathComponent]) -> Result<CVec> {
    let mut row = CVec::zeros(geometry.n_antennas);
    for p in paths {
        let a = steering_vector(geometry, p.angle)?;
        row.zip_apply(&a, |h, ai| *h += p.gain * ai.conj());
    }
    Ok(row)
}

/// The lens array's spatial DFT: an `N x N` unitary matrix whose columns are
/// steering vectors at spatial frequencies `(m - (N+1)/2) / N`, `m = 1..=N`.
#[derive(Debug, Clone)]
pub struct BeamspaceTransform {
    pub matrix: CMat,
    pub beam_directions: Vec<f64>,
}

impl BeamspaceTransform {
    pub fn n(&self) -> usize {
        self.matrix.nrows()
    }
}

pub fn beam_direction(n: usize, m: usize) -> f64 {
    (m as f64 + 1.0 - (n as f64 + 1.0) / 2.0) / n as f64
}

pub fn dft_matrix(geometry: &ArrayGeometry) -> BeamspaceTransform {
    let n = geometry.n_antennas;
    let beam_directions: Vec<f64> = (0..n).map(|m| beam_direction(n, m)).collect();
    let mut matrix = CMat::zeros(n, n);
    for (m, &psi) in beam_directions.iter().enumerate() {
        matrix.set_column(m, &steering_at_frequency(n, psi));
    }
    BeamspaceTransform {
        matrix,
        beam_directions,
    }
}

pub fn to_beamspace(h: &CMat, transform: &BeamspaceTransform) -> Result<CMat> {
    if h.ncols() != transform.matrix.nrows() {
        return Err(Error::dims(
            "to_beamspace",
            format!("{} columns", transform.matrix.nrows()),
            format!("{} columns", h.ncols()),
        ));
    }
    Ok(h * &transform.matrix)
}

/// One user's channel: a unit-magnitude line-of-sight path with uniform phase
/// plus `n_nlos` paths with `CN(0, nlos_variance)` gains, all angles IID
/// uniform on `[-pi/2, pi/2]`. The line-of-sight path comes first in `paths`.
pub fn gen_user_channel<R: Rng + ?Sized>(
    geometry: &ArrayGeometry,
    rng: &mut R,
    n_nlos: usize,
    nlos_variance: f64,
) -> Result<(CVec, Vec<PathComponent>)> {
    if nlos_variance.is_nan() || nlos_variance <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "NLoS variance must be positive, got {nlos_variance}"
        )));
    }
    let mut paths = Vec::with_capacity(n_nlos + 1);
    let los_phase = rng.random_range(0.0..2.0 * PI);
    paths.push(PathComponent {
        gain: Complex64::from_polar(1.0, los_phase),
        angle: rng.random_range(-FRAC_PI_2..=FRAC_PI_2),
    });
    for _ in 0..n_nlos {
        let gain = complex_gaussian(rng, nlos_variance);
        paths.push(PathComponent {
            gain,
            angle: rng.random_range(-FRAC_PI_2..=FRAC_PI_2),
        });
    }
    let row = row_from_paths(geometry, &paths)?;
    Ok((row, paths))
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub geometry: ArrayGeometry,
    pub n_users: usize,
    pub n_cells: usize,
    pub n_nlos: usize,
    pub nlos_variance: f64,
    pub seed: u64,
}

impl ScenarioConfig {
    pub fn new(n_antennas: usize, n_users: usize, n_cells: usize, seed: u64) -> Result<Self> {
        Ok(Self {
            geometry: ArrayGeometry::new(n_antennas)?,
            n_users,
            n_cells,
            n_nlos: 2,
            nlos_variance: 0.1,
            seed,
        })
    }
}

/// Channels from one base station to one cell's users.
#[derive(Debug, Clone, PartialEq)]
pub struct LinkChannel {
    /// `n_users x N`.
    pub spatial: CMat,
    pub paths: Vec<Vec<PathComponent>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChannelRealization {
    pub n_cells: usize,
    pub geometry: ArrayGeometry,
    links: Vec<LinkChannel>,
}

impl ChannelRealization {
    /// Channel from base station `bs` to the users of cell `user_cell`.
    pub fn link(&self, user_cell: usize, bs: usize) -> &LinkChannel {
        &self.links[user_cell * self.n_cells + bs]
    }

    pub fn serving(&self, cell: usize) -> &LinkChannel {
        self.link(cell, cell)
    }

    pub fn links(&self) -> &[LinkChannel] {
        &self.links
    }
}

/// Draws every (user cell, base station) link of one trial. Each user of each
/// link gets its own random stream, so growing `n_users` leaves the channels
/// of the first users unchanged.
pub fn gen_scenario(config: &ScenarioConfig, trial: u64) -> Result<ChannelRealization> {
    if !(1..=2).contains(&config.n_cells) {
        return Err(Error::Config(format!(
            "unsupported cell count {} (expected 1 or 2)",
            config.n_cells
        )));
    }
    if config.n_users == 0 {
        return Err(Error::Config("user count must be positive".into()));
    }
    let n = config.geometry.n_antennas;
    let mut links = Vec::with_capacity(config.n_cells * config.n_cells);
    for link_idx in 0..config.n_cells * config.n_cells {
        let mut spatial = CMat::zeros(config.n_users, n);
        let mut paths = Vec::with_capacity(config.n_users);
        for k in 0..config.n_users {
            let index = u32::try_from(link_idx * 4096 + k)
                .map_err(|_| Error::Config("too many users".into()))?;
            let mut rng: SimRng = rng::stream(config.seed, trial, Purpose::Channel, index);
            let (row, p) = gen_user_channel(
                &config.geometry,
                &mut rng,
                config.n_nlos,
                config.nlos_variance,
            )?;
            spatial.set_row(k, &row.transpose());
            paths.push(p);
        }
        links.push(LinkChannel { spatial, paths });
    }
    Ok(ChannelRealization {
        n_cells: config.n_cells,
        geometry: config.geometry,
        links,
    })
}
