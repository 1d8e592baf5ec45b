//! Channel estimators: least squares on an effective channel, adaptive
//! compressive sensing over direction grids, and compressive beamspace
//! estimation through a 0/1 switching network. All share [`omp_recover`].

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;

use crate::channel::{steering_at_frequency, ArrayGeometry, BeamspaceTransform};
use crate::error::{Error, Result};
use crate::linalg::{self, complex_gaussian, complex_gaussian_matrix, CMat, CVec};

/// Scalar pilot measurements available per user, and the training SNR.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PilotBudget {
    pub total_pilots: usize,
    pub training_snr_db: f64,
}

impl Default for PilotBudget {
    fn default() -> Self {
        Self {
            total_pilots: 96,
            training_snr_db: 20.0,
        }
    }
}

impl PilotBudget {
    pub fn new(total_pilots: usize, training_snr_db: f64) -> Self {
        Self {
            total_pilots,
            training_snr_db,
        }
    }

    /// Noise variance per scalar measurement relative to a unit-power pilot.
    /// An infinite training SNR gives noiseless measurements.
    pub fn noise_var(&self) -> f64 {
        if self.training_snr_db == f64::INFINITY {
            0.0
        } else {
            10f64.powf(-self.training_snr_db / 10.0)
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EstimationReport {
    pub estimate: CMat,
    pub per_user_nmse: Vec<f64>,
    pub pilots_used: usize,
}

impl EstimationReport {
    fn new(truth: &CMat, estimate: CMat, pilots_used: usize) -> Self {
        let per_user_nmse = (0..truth.nrows())
            .map(|k| {
                let err = (estimate.row(k) - truth.row(k)).norm_squared();
                err / truth.row(k).norm_squared().max(f64::MIN_POSITIVE)
            })
            .collect();
        Self {
            estimate,
            per_user_nmse,
            pilots_used,
        }
    }

    pub fn mean_nmse(&self) -> f64 {
        self.per_user_nmse.iter().sum::<f64>() / self.per_user_nmse.len().max(1) as f64
    }
}

/// Steering vectors on a uniform grid of `grid_size` spatial frequencies
/// spanning one full period. The grid starts at the first lens beam, so it
/// contains every DFT direction whenever `grid_size` is a multiple of `N`.
#[derive(Debug, Clone)]
pub struct DirectionDictionary {
    pub grid_size: usize,
    pub frequencies: Vec<f64>,
    /// `N x grid_size`, unit-norm columns.
    pub atoms: CMat,
}

impl DirectionDictionary {
    pub fn new(geometry: &ArrayGeometry, grid_size: usize) -> Result<Self> {
        if grid_size == 0 {
            return Err(Error::InvalidArgument("empty direction grid".into()));
        }
        let n = geometry.n_antennas();
        let start = crate::channel::beam_direction(n, 0);
        let frequencies: Vec<f64> = (0..grid_size)
            .map(|g| {
                let psi = start + g as f64 / grid_size as f64;
                if psi >= 0.5 {
                    psi - 1.0
                } else {
                    psi
                }
            })
            .collect();
        let mut atoms = CMat::zeros(n, grid_size);
        for (g, &psi) in frequencies.iter().enumerate() {
            atoms.set_column(g, &steering_at_frequency(n, psi));
        }
        Ok(Self {
            grid_size,
            frequencies,
            atoms,
        })
    }

    pub fn spacing(&self) -> f64 {
        1.0 / self.grid_size as f64
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OmpSolution {
    pub coefficients: CVec,
    /// Selected column indices in selection order.
    pub support: Vec<usize>,
    /// Residual norm before the first iteration and after each accepted atom.
    pub residual_norms: Vec<f64>,
}

/// Orthogonal matching pursuit.
///
/// Each iteration picks the column with the largest normalized correlation to
/// the residual, re-solves least squares on the whole support and updates the
/// residual. An atom that makes the support rank deficient is discarded and
/// never reconsidered. Stops at `sparsity` atoms or a vanishing residual.
pub fn omp_recover(measurements: &CVec, sensing: &CMat, sparsity: usize) -> Result<OmpSolution> {
    let (m, n) = sensing.shape();
    if measurements.len() != m {
        return Err(Error::dims(
            "omp_recover",
            format!("{m} measurements"),
            measurements.len(),
        ));
    }
    if sparsity > m {
        return Err(Error::InvalidArgument(format!(
            "sparsity {sparsity} exceeds measurement count {m}"
        )));
    }
    let col_norms: Vec<f64> = sensing.column_iter().map(|c| c.norm()).collect();
    let y_norm = measurements.norm();
    let mut solution = OmpSolution {
        coefficients: CVec::zeros(n),
        support: Vec::with_capacity(sparsity),
        residual_norms: vec![y_norm],
    };
    if y_norm == 0.0 {
        return Ok(solution);
    }
    let stop = 1e-13 * y_norm;
    let mut blocked = vec![false; n];
    let mut residual = measurements.clone();
    let mut coeffs = CVec::zeros(0);

    while solution.support.len() < sparsity {
        let corr = sensing.ad_mul(&residual);
        let best = (0..n)
            .filter(|&j| !blocked[j] && col_norms[j] > 0.0)
            .map(|j| (j, corr[j].norm() / col_norms[j]))
            .fold(None, |acc: Option<(usize, f64)>, (j, c)| match acc {
                Some((_, best)) if best >= c => acc,
                _ => Some((j, c)),
            });
        let Some((j, _)) = best else { break };
        blocked[j] = true;

        let mut trial_support = solution.support.clone();
        trial_support.push(j);
        let sub = linalg::select_columns(sensing, &trial_support);
        let Some(x) = linalg::lstsq_vec(&sub, measurements) else {
            continue;
        };
        let new_residual = measurements - &sub * &x;
        let new_norm = new_residual.norm();
        let prev = *solution.residual_norms.last().unwrap();
        debug_assert!(
            new_norm <= prev * (1.0 + 1e-9) + 1e-14,
            "OMP residual increased: {prev} -> {new_norm}"
        );
        solution.support = trial_support;
        solution.residual_norms.push(new_norm);
        residual = new_residual;
        coeffs = x;
        if new_norm <= stop {
            break;
        }
    }
    for (i, &j) in solution.support.iter().enumerate() {
        solution.coefficients[j] = coeffs[i];
    }
    Ok(solution)
}

/// `g + mean of reps independent CN(0, noise_var)` observations.
fn averaged_observation<R: Rng + ?Sized>(
    g: &CMat,
    reps: usize,
    noise_var: f64,
    rng: &mut R,
) -> CMat {
    if noise_var == 0.0 {
        return g.clone();
    }
    let mut acc = CMat::zeros(g.nrows(), g.ncols());
    for _ in 0..reps {
        acc += complex_gaussian_matrix(rng, g.nrows(), g.ncols(), noise_var);
    }
    g + acc / Complex64::new(reps as f64, 0.0)
}

/// LS estimate of the effective channel `H A` once the analog stage is fixed.
///
/// One sweep over the `N_RF` effective-channel columns costs `N_RF` pilots;
/// the budget is filled with `floor(budget / N_RF)` sweeps that are averaged.
pub fn estimate_ls_effective<R: Rng + ?Sized>(
    h_true: &CMat,
    analog: &CMat,
    budget: &PilotBudget,
    rng: &mut R,
) -> Result<EstimationReport> {
    if h_true.ncols() != analog.nrows() {
        return Err(Error::dims(
            "estimate_ls_effective",
            format!("analog stage with {} rows", h_true.ncols()),
            analog.nrows(),
        ));
    }
    let n_rf = analog.ncols();
    if n_rf == 0 || budget.total_pilots < n_rf {
        return Err(Error::PilotBudget {
            budget: budget.total_pilots,
            required: n_rf.max(1),
        });
    }
    let reps = budget.total_pilots / n_rf;
    let effective = h_true * analog;
    let estimate = averaged_observation(&effective, reps, budget.noise_var(), rng);
    Ok(EstimationReport::new(&effective, estimate, reps * n_rf))
}

/// Classical LS for the fully digital array: every RF chain sees its own
/// antenna, so each pilot symbol yields a full snapshot of the user's row and
/// the budget is spent on repeated snapshots.
pub fn estimate_ls_full_digital<R: Rng + ?Sized>(
    h_true: &CMat,
    budget: &PilotBudget,
    rng: &mut R,
) -> Result<EstimationReport> {
    if budget.total_pilots == 0 {
        return Err(Error::PilotBudget {
            budget: 0,
            required: 1,
        });
    }
    let reps = budget.total_pilots;
    let noise_var = budget.noise_var();
    let estimate = if noise_var == 0.0 {
        h_true.clone()
    } else {
        h_true
            + complex_gaussian_matrix(rng, h_true.nrows(), h_true.ncols(), noise_var / reps as f64)
    };
    Ok(EstimationReport::new(h_true, estimate, reps))
}

/// Local atoms per refined path.
pub const REFINE_ATOMS: usize = 16;

/// Adaptive compressive estimation of the spatial channel with one
/// refinement level: coarse OMP over the direction grid, then each selected
/// direction is re-fitted on a 16-point grid spanning one coarse cell either
/// side of it.
pub fn estimate_adaptive_cs<R: Rng + ?Sized>(
    h_true: &CMat,
    dictionary: &DirectionDictionary,
    budget: &PilotBudget,
    n_paths: usize,
    rng: &mut R,
) -> Result<EstimationReport> {
    spatial_cs(h_true, dictionary, budget, n_paths, true, rng)
}

/// Same measurements as [`estimate_adaptive_cs`] without the refinement step.
pub fn estimate_coarse_cs<R: Rng + ?Sized>(
    h_true: &CMat,
    dictionary: &DirectionDictionary,
    budget: &PilotBudget,
    n_paths: usize,
    rng: &mut R,
) -> Result<EstimationReport> {
    spatial_cs(h_true, dictionary, budget, n_paths, false, rng)
}

fn spatial_cs<R: Rng + ?Sized>(
    h_true: &CMat,
    dictionary: &DirectionDictionary,
    budget: &PilotBudget,
    n_paths: usize,
    refine: bool,
    rng: &mut R,
) -> Result<EstimationReport> {
    let n = dictionary.atoms.nrows();
    if h_true.ncols() != n {
        return Err(Error::dims(
            "estimate_adaptive_cs",
            format!("{n} antennas"),
            h_true.ncols(),
        ));
    }
    let m = budget.total_pilots;
    if m < n_paths || n_paths == 0 {
        return Err(Error::PilotBudget {
            budget: m,
            required: n_paths.max(1),
        });
    }
    // Unit-modulus random combiners, shared by all users within a block.
    let combiners = CMat::from_fn(m, n, |_, _| {
        Complex64::from_polar(1.0, rng.random_range(0.0..std::f64::consts::TAU))
    });
    let sensing = linalg::matmul(&combiners, &dictionary.atoms);
    let noise_var = budget.noise_var();

    let mut estimate = CMat::zeros(h_true.nrows(), n);
    for k in 0..h_true.nrows() {
        // Work with the column v = h_k^H, a sparse combination of atoms.
        let v = h_true.row(k).adjoint();
        let mut y = &combiners * &v;
        if noise_var > 0.0 {
            y.iter_mut()
                .for_each(|z| *z += complex_gaussian(rng, noise_var));
        }
        let sol = omp_recover(&y, &sensing, n_paths)?;
        let mut freqs: Vec<f64> = sol
            .support
            .iter()
            .map(|&g| dictionary.frequencies[g])
            .collect();
        let mut coeffs: Vec<Complex64> = sol.support.iter().map(|&g| sol.coefficients[g]).collect();
        if refine && !freqs.is_empty() {
            (freqs, coeffs) = refine_paths(&combiners, &y, freqs, coeffs, dictionary.spacing());
        }
        let mut v_hat = CVec::zeros(n);
        for (psi, c) in freqs.iter().zip(&coeffs) {
            v_hat += steering_at_frequency(n, *psi) * *c;
        }
        estimate.set_row(k, &v_hat.adjoint());
    }
    Ok(EstimationReport::new(h_true, estimate, m))
}

fn refine_paths(
    combiners: &CMat,
    y: &CVec,
    mut freqs: Vec<f64>,
    coeffs: Vec<Complex64>,
    spacing: f64,
) -> (Vec<f64>, Vec<Complex64>) {
    let n = combiners.ncols();
    let sense = |psi: f64| combiners * steering_at_frequency(n, psi);
    let mut columns: Vec<CVec> = freqs.iter().map(|&p| sense(p)).collect();
    for i in 0..freqs.len() {
        let mut others = y.clone();
        for (j, col) in columns.iter().enumerate() {
            if j != i {
                others -= col * coeffs[j];
            }
        }
        // Incumbent first, so it survives unless a local atom fits strictly better.
        let score = |c: &CVec| c.dotc(&others).norm() / c.norm().max(f64::MIN_POSITIVE);
        let mut best = (freqs[i], score(&columns[i]), None);
        for t in 0..REFINE_ATOMS {
            let offset = -1.0 + 2.0 * t as f64 / (REFINE_ATOMS - 1) as f64;
            let psi = freqs[i] + offset * spacing;
            let col = sense(psi);
            let s = score(&col);
            if s > best.1 {
                best = (psi, s, Some(col));
            }
        }
        if let (psi, _, Some(col)) = best {
            freqs[i] = psi;
            columns[i] = col;
        }
    }
    let a = CMat::from_columns(&columns);
    match linalg::lstsq_vec(&a, y) {
        Some(x) => (freqs, x.iter().copied().collect()),
        None => (freqs, coeffs),
    }
}

/// Pilot combining patterns of the adaptive selecting network: `Q` blocks of
/// equiprobable 0/1 switch states, one row per RF chain.
#[derive(Debug, Clone, PartialEq)]
pub struct SensingPlan {
    pub blocks: Vec<DMatrix<f64>>,
    /// `Q * N_RF x N`.
    pub stacked: DMatrix<f64>,
}

impl SensingPlan {
    pub fn n_blocks(&self) -> usize {
        self.blocks.len()
    }

    pub fn n_measurements(&self) -> usize {
        self.stacked.nrows()
    }
}

pub const PLAN_ATTEMPTS: usize = 16;

pub fn build_sensing_plan<R: Rng + ?Sized>(
    n: usize,
    n_rf: usize,
    budget: &PilotBudget,
    rng: &mut R,
) -> Result<SensingPlan> {
    if n_rf == 0 || budget.total_pilots < n_rf {
        return Err(Error::PilotBudget {
            budget: budget.total_pilots,
            required: n_rf.max(1),
        });
    }
    let q = budget.total_pilots / n_rf;
    for _ in 0..PLAN_ATTEMPTS {
        let blocks: Vec<DMatrix<f64>> = (0..q)
            .map(|_| DMatrix::from_fn(n_rf, n, |_, _| if rng.random::<bool>() { 1.0 } else { 0.0 }))
            .collect();
        let mut stacked = DMatrix::zeros(q * n_rf, n);
        for (b, block) in blocks.iter().enumerate() {
            stacked.rows_mut(b * n_rf, n_rf).copy_from(block);
        }
        if has_full_rank(&stacked) {
            return Ok(SensingPlan { blocks, stacked });
        }
    }
    Err(Error::RankDeficientPlan {
        attempts: PLAN_ATTEMPTS,
    })
}

fn has_full_rank(m: &DMatrix<f64>) -> bool {
    let sv = m.clone().svd(false, false).singular_values;
    let max = sv.iter().cloned().fold(0.0, f64::max);
    let rank = sv.iter().filter(|&&s| s > 1e-10 * max).count();
    max > 0.0 && rank == m.nrows().min(m.ncols())
}

/// Compressive beamspace estimation: per user, `z = Phi h_b + noise` with the
/// stacked 0/1 plan `Phi`, then OMP with the given sparsity. Returns the
/// estimated beamspace matrix.
pub fn estimate_beamspace_cs<R: Rng + ?Sized>(
    h_true: &CMat,
    transform: &BeamspaceTransform,
    plan: &SensingPlan,
    budget: &PilotBudget,
    sparsity: usize,
    rng: &mut R,
) -> Result<EstimationReport> {
    let n = transform.n();
    if plan.stacked.ncols() != n || h_true.ncols() != n {
        return Err(Error::dims(
            "estimate_beamspace_cs",
            format!("{n} beams"),
            format!("plan {} / channel {}", plan.stacked.ncols(), h_true.ncols()),
        ));
    }
    let m = plan.n_measurements();
    if m > budget.total_pilots {
        return Err(Error::PilotBudget {
            budget: budget.total_pilots,
            required: m,
        });
    }
    let phi = linalg::real_to_complex(&plan.stacked);
    let truth = h_true * &transform.matrix;
    let noise_var = budget.noise_var();
    let mut estimate = CMat::zeros(h_true.nrows(), n);
    for k in 0..h_true.nrows() {
        let b = truth.row(k).transpose();
        let mut z = &phi * &b;
        if noise_var > 0.0 {
            z.iter_mut()
                .for_each(|v| *v += complex_gaussian(rng, noise_var));
        }
        let sol = omp_recover(&z, &phi, sparsity)?;
        estimate.set_row(k, &sol.coefficients.transpose());
    }
    Ok(EstimationReport::new(&truth, estimate, m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{dft_matrix, row_from_paths, PathComponent};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn rng(seed: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(seed)
    }

    #[test]
    fn omp_one_sparse_exact() {
        let mut r = rng(1);
        let a = complex_gaussian_matrix(&mut r, 20, 50, 1.0);
        let mut x = CVec::zeros(50);
        x[17] = Complex64::new(0.3, -1.2);
        let sol = omp_recover(&(&a * &x), &a, 1).unwrap();
        assert_eq!(sol.support, vec![17]);
        assert!((sol.coefficients - x).norm() < 1e-10);
    }

    #[test]
    fn omp_zero_measurements() {
        let a = complex_gaussian_matrix(&mut rng(2), 10, 30, 1.0);
        let sol = omp_recover(&CVec::zeros(10), &a, 3).unwrap();
        assert!(sol.support.is_empty());
        assert_eq!(sol.coefficients.norm(), 0.0);
    }

    #[test]
    fn omp_argument_errors() {
        let a = complex_gaussian_matrix(&mut rng(3), 4, 10, 1.0);
        assert!(matches!(
            omp_recover(&CVec::zeros(4), &a, 5),
            Err(Error::InvalidArgument(_))
        ));
        assert!(omp_recover(&CVec::zeros(3), &a, 2).is_err());
    }

    #[test]
    fn omp_skips_duplicate_atom() {
        let mut r = rng(4);
        let mut a = complex_gaussian_matrix(&mut r, 12, 6, 1.0);
        let c0 = a.column(0).into_owned();
        a.set_column(1, &(c0 * Complex64::new(2.0, 0.0)));
        let mut x = CVec::zeros(6);
        x[0] = Complex64::new(1.0, 0.0);
        x[3] = Complex64::new(0.5, 0.5);
        let y = &a * &x;
        let sol = omp_recover(&y, &a, 3).unwrap();
        assert!(!(sol.support.contains(&0) && sol.support.contains(&1)));
        assert!((&a * &sol.coefficients - y).norm() < 1e-10);
    }

    #[test]
    fn ls_effective_noiseless_is_exact() {
        let mut r = rng(5);
        let h = complex_gaussian_matrix(&mut r, 4, 32, 1.0);
        let a = complex_gaussian_matrix(&mut r, 32, 4, 1.0);
        let rep =
            estimate_ls_effective(&h, &a, &PilotBudget::new(96, f64::INFINITY), &mut r).unwrap();
        assert!((rep.estimate - &h * &a).camax() < 1e-10);
        assert_eq!(rep.pilots_used, 96);
    }

    #[test]
    fn ls_effective_budget_error() {
        let mut r = rng(6);
        let h = CMat::zeros(2, 8);
        let a = CMat::zeros(8, 4);
        assert!(matches!(
            estimate_ls_effective(&h, &a, &PilotBudget::new(3, 20.0), &mut r),
            Err(Error::PilotBudget { .. })
        ));
    }

    #[test]
    fn ls_effective_variance_matches_closed_form() {
        // 96 pilots over 16 columns: 6 averaged sweeps, NMSE = sigma^2 / (6 * E|g|^2).
        let mut r = rng(7);
        let h = complex_gaussian_matrix(&mut r, 16, 64, 1.0);
        let a = complex_gaussian_matrix(&mut r, 64, 16, 1.0 / 64.0);
        let g = &h * &a;
        let gain = g.norm_squared() / g.len() as f64;
        let budget = PilotBudget::new(96, 10.0);
        let mut total = 0.0;
        let trials = 400;
        for _ in 0..trials {
            let rep = estimate_ls_effective(&h, &a, &budget, &mut r).unwrap();
            total += (rep.estimate - &g).norm_squared() / g.norm_squared();
        }
        let nmse = total / trials as f64;
        let predicted = 1.0 / (6.0 * 10.0 * gain);
        assert!(
            (nmse / predicted - 1.0).abs() < 0.2,
            "{nmse} vs {predicted}"
        );
    }

    #[test]
    fn sensing_plan_shapes() {
        let mut r = rng(8);
        let plan = build_sensing_plan(256, 16, &PilotBudget::default(), &mut r).unwrap();
        assert_eq!(plan.n_blocks(), 6);
        assert_eq!(plan.stacked.shape(), (96, 256));
        assert!(has_full_rank(&plan.stacked));
        let single = build_sensing_plan(64, 16, &PilotBudget::new(16, 20.0), &mut r).unwrap();
        assert_eq!(single.n_blocks(), 1);
        assert!(build_sensing_plan(64, 16, &PilotBudget::new(15, 20.0), &mut r).is_err());
    }

    #[test]
    fn sensing_plan_entries_are_fair_coins() {
        let mut r = rng(9);
        let plan = build_sensing_plan(256, 16, &PilotBudget::default(), &mut r).unwrap();
        assert!(plan.stacked.iter().all(|&x| x == 0.0 || x == 1.0));
        let ones = plan.stacked.sum() / plan.stacked.len() as f64;
        assert!((ones - 0.5).abs() < 0.05, "{ones}");
    }

    #[test]
    fn dictionary_contains_dft_directions() {
        let g = ArrayGeometry::new(32).unwrap();
        let d = DirectionDictionary::new(&g, 128).unwrap();
        let u = dft_matrix(&g);
        for (m, psi) in u.beam_directions.iter().enumerate() {
            let col = d.atoms.column(4 * m);
            assert!((d.frequencies[4 * m] - psi).abs() < 1e-12);
            assert!((col - u.matrix.column(m)).camax() < 1e-12);
        }
        assert!(d.frequencies.iter().all(|f| (-0.5..0.5).contains(f)));
        for c in d.atoms.column_iter() {
            assert!((c.norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn adaptive_cs_on_grid_noiseless() {
        let g = ArrayGeometry::new(64).unwrap();
        let d = DirectionDictionary::new(&g, 256).unwrap();
        let psi = d.frequencies[77];
        let h_row = row_from_paths(
            &g,
            &[PathComponent {
                gain: Complex64::from_polar(1.0, 0.4),
                angle: (2.0 * psi).asin(),
            }],
        )
        .unwrap();
        let h = CMat::from_row_slice(1, 64, h_row.as_slice());
        let budget = PilotBudget::new(24, f64::INFINITY);
        let rep = estimate_adaptive_cs(&h, &d, &budget, 1, &mut rng(10)).unwrap();
        assert!(rep.per_user_nmse[0] <= 1e-6, "{}", rep.per_user_nmse[0]);
        assert_eq!(rep.pilots_used, 24);
        assert!(estimate_adaptive_cs(&h, &d, &PilotBudget::new(2, 20.0), 3, &mut rng(10)).is_err());
    }

    #[test]
    fn beamspace_cs_on_grid_noiseless() {
        let g = ArrayGeometry::new(64).unwrap();
        let t = dft_matrix(&g);
        let h_row = t.matrix.column(9).adjoint() * Complex64::from_polar(1.0, 1.1);
        let h = CMat::from_row_slice(1, 64, h_row.as_slice());
        let budget = PilotBudget::new(32, f64::INFINITY);
        let mut r = rng(11);
        let plan = build_sensing_plan(64, 8, &budget, &mut r).unwrap();
        let rep = estimate_beamspace_cs(&h, &t, &plan, &budget, 8, &mut r).unwrap();
        assert!(rep.per_user_nmse[0] < 1e-8);
        assert!((rep.estimate[(0, 9)] - Complex64::from_polar(1.0, 1.1)).norm() < 1e-8);
    }

    #[test]
    fn beamspace_cs_full_support_is_ls() {
        let g = ArrayGeometry::new(16).unwrap();
        let t = dft_matrix(&g);
        let mut r = rng(12);
        let h = complex_gaussian_matrix(&mut r, 2, 16, 1.0);
        let budget = PilotBudget::new(16, f64::INFINITY);
        let plan = build_sensing_plan(16, 4, &budget, &mut r).unwrap();
        assert_eq!(plan.stacked.shape(), (16, 16));
        let rep = estimate_beamspace_cs(&h, &t, &plan, &budget, 16, &mut r).unwrap();
        assert!((rep.estimate - &h * &t.matrix).camax() < 1e-8);
    }

    #[test]
    fn beamspace_cs_rejects_oversized_plan() {
        let g = ArrayGeometry::new(16).unwrap();
        let t = dft_matrix(&g);
        let mut r = rng(13);
        let plan = build_sensing_plan(16, 4, &PilotBudget::new(16, 20.0), &mut r).unwrap();
        let h = CMat::zeros(1, 16);
        assert!(matches!(
            estimate_beamspace_cs(&h, &t, &plan, &PilotBudget::new(8, 20.0), 4, &mut r),
            Err(Error::PilotBudget { .. })
        ));
    }
}
