//! Beam selection for the lens array and the dimension-reduced ZF precoder.

use itertools::Itertools;
use num_complex::Complex64;

use super::{zf_precoder, PrecoderPair};
use crate::error::{Error, Result};
use crate::linalg::{log2_det_identity_plus, select_columns, selection_matrix, CMat};
use crate::metrics::{noise_variance, sum_rate, Architecture};

/// Largest `C(N, N_RF)` that exhaustive search accepts.
pub const EXHAUSTIVE_LIMIT: u128 = 1_000_000;

/// Distinct beam indices, in the order they were selected.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BeamSet {
    indices: Vec<usize>,
}

impl BeamSet {
    pub fn new(indices: Vec<usize>, n_beams: usize) -> Result<Self> {
        if let Some(&bad) = indices.iter().find(|&&i| i >= n_beams) {
            return Err(Error::InvalidArgument(format!(
                "beam {bad} out of range for {n_beams} beams"
            )));
        }
        if indices.iter().duplicates().next().is_some() {
            return Err(Error::InvalidArgument("duplicate beam index".into()));
        }
        Ok(Self { indices })
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn contains(&self, beam: usize) -> bool {
        self.indices.contains(&beam)
    }

    pub fn sorted(&self) -> Vec<usize> {
        let mut v = self.indices.clone();
        v.sort_unstable();
        v
    }
}

fn check_selection_args(h_beam: &CMat, n_rf: usize) -> Result<()> {
    if n_rf == 0 || n_rf > h_beam.ncols() {
        return Err(Error::InvalidArgument(format!(
            "cannot select {n_rf} of {} beams",
            h_beam.ncols()
        )));
    }
    Ok(())
}

/// Sum-rate of the system reduced to `beams` at transmit SNR `snr_db`.
///
/// With at least as many beams as users this is the ZF sum-rate of the
/// reduced channel. With fewer beams ZF is infeasible and the reduced
/// channel's `log2 det(I + H_r^H H_r / sigma^2)` is used instead, so that
/// greedy selection can grow a set from empty.
pub fn beam_set_rate(h_beam: &CMat, beams: &[usize], snr_db: f64) -> f64 {
    let n_users = h_beam.nrows();
    let noise_var = noise_variance(snr_db, n_users);
    let hr = select_columns(h_beam, beams);
    if beams.len() >= n_users {
        let zf = zf_precoder(&hr).expect("ZF on a reduced channel");
        sum_rate(&hr, &zf.digital, noise_var, &[])
            .expect("consistent dimensions")
            .sum_rate
    } else {
        let gram = hr.adjoint() * &hr / Complex64::new(noise_var, 0.0);
        log2_det_identity_plus(&gram)
    }
}

/// Magnitude maximization: the `n_rf` beams with the largest column norm.
pub fn select_beams_mm(h_beam: &CMat, n_rf: usize) -> Result<BeamSet> {
    check_selection_args(h_beam, n_rf)?;
    let norms: Vec<f64> = h_beam.column_iter().map(|c| c.norm_squared()).collect();
    let mut order: Vec<usize> = (0..norms.len()).collect();
    order.sort_by(|&a, &b| norms[b].total_cmp(&norms[a]).then(a.cmp(&b)));
    order.truncate(n_rf);
    BeamSet::new(order, h_beam.ncols())
}

fn greedy_fill(h_beam: &CMat, mut chosen: Vec<usize>, n_rf: usize, snr_db: f64) -> Result<BeamSet> {
    let n = h_beam.ncols();
    let mut used = vec![false; n];
    chosen.iter().for_each(|&b| used[b] = true);
    while chosen.len() < n_rf {
        let mut best: Option<(usize, f64)> = None;
        let mut trial = chosen.clone();
        trial.push(0);
        for b in (0..n).filter(|&b| !used[b]) {
            *trial.last_mut().unwrap() = b;
            let rate = beam_set_rate(h_beam, &trial, snr_db);
            if best.is_none_or(|(_, r)| rate > r) {
                best = Some((b, rate));
            }
        }
        let (b, _) = best.expect("unused beam available");
        used[b] = true;
        chosen.push(b);
    }
    BeamSet::new(chosen, n)
}

/// Incremental selection: add, one at a time, the beam that most increases
/// the reduced-system sum-rate.
pub fn select_beams_incremental(h_beam: &CMat, n_rf: usize, snr_db: f64) -> Result<BeamSet> {
    check_selection_args(h_beam, n_rf)?;
    greedy_fill(h_beam, Vec::new(), n_rf, snr_db)
}

/// Interference-aware selection.
///
/// A user whose strongest beam is not the strongest beam of any other user
/// is interference-free and claims that beam directly. Users that collide on
/// a strongest beam form the interference group; their beams, and any spare
/// RF chains, are chosen incrementally among the unclaimed beams.
pub fn select_beams_ia(h_beam: &CMat, n_rf: usize, snr_db: f64) -> Result<BeamSet> {
    check_selection_args(h_beam, n_rf)?;
    let n_users = h_beam.nrows();
    if n_rf < n_users {
        return Err(Error::InvalidArgument(format!(
            "IA selection needs at least one RF chain per user ({n_users}), got {n_rf}"
        )));
    }
    let strongest: Vec<usize> = h_beam
        .row_iter()
        .map(|row| {
            row.iter()
                .enumerate()
                .fold((0, -1.0), |(bi, bv), (i, z)| {
                    if z.norm() > bv {
                        (i, z.norm())
                    } else {
                        (bi, bv)
                    }
                })
                .0
        })
        .collect();
    let claimed: Vec<usize> = strongest
        .iter()
        .filter(|&&b| strongest.iter().filter(|&&o| o == b).count() == 1)
        .copied()
        .collect();
    greedy_fill(h_beam, claimed, n_rf, snr_db)
}

/// Sum-rate-optimal subset by enumeration. Only for small instances.
pub fn select_beams_exhaustive(h_beam: &CMat, n_rf: usize, snr_db: f64) -> Result<BeamSet> {
    check_selection_args(h_beam, n_rf)?;
    let n = h_beam.ncols();
    let count = binomial(n, n_rf);
    if count > EXHAUSTIVE_LIMIT {
        return Err(Error::InvalidArgument(format!(
            "exhaustive search over C({n}, {n_rf}) = {count} subsets exceeds {EXHAUSTIVE_LIMIT}"
        )));
    }
    let mut best: Option<(Vec<usize>, f64)> = None;
    for subset in (0..n).combinations(n_rf) {
        let rate = beam_set_rate(h_beam, &subset, snr_db);
        if best.as_ref().is_none_or(|(_, r)| rate > *r) {
            best = Some((subset, rate));
        }
    }
    BeamSet::new(best.expect("at least one subset").0, n)
}

fn binomial(n: usize, k: usize) -> u128 {
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// Lens-array precoder: 0/1 beam selectors as the analog stage and ZF on the
/// reduced beamspace channel as the digital stage. The pair lives in beamspace.
pub fn lahp_precoder(h_beam_est: &CMat, beams: &BeamSet) -> Result<PrecoderPair> {
    let n = h_beam_est.ncols();
    if beams.indices().iter().any(|&b| b >= n) {
        return Err(Error::dims(
            "lahp_precoder",
            format!("beams below {n}"),
            "out of range",
        ));
    }
    let analog = selection_matrix(n, beams.indices());
    let zf = zf_precoder(&select_columns(h_beam_est, beams.indices()))?;
    Ok(PrecoderPair::new(
        analog,
        zf.digital,
        Architecture::LahpAdaptive,
        zf.regularized,
    ))
}
