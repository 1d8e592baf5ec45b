//! Thin helpers over `nalgebra` for the complex matrix work the simulator needs.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

pub type CMat = DMatrix<Complex64>;
pub type CVec = DVector<Complex64>;

/// Relative threshold on `|R_ii| / max |R_jj|` below which a QR factor is
/// treated as rank deficient.
pub const RANK_TOL: f64 = 1e-10;

/// Circularly symmetric complex Gaussian sample with the given variance.
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R, variance: f64) -> Complex64 {
    let scale = (variance / 2.0).sqrt();
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    Complex64::new(re * scale, im * scale)
}

pub fn complex_gaussian_matrix<R: Rng + ?Sized>(
    rng: &mut R,
    rows: usize,
    cols: usize,
    variance: f64,
) -> CMat {
    // Column-major fill keeps the draw order fixed for a given shape.
    CMat::from_fn(rows, cols, |_, _| complex_gaussian(rng, variance))
}

/// Least-squares solution of `a x = b` for a tall, full-column-rank `a`.
///
/// Returns `None` when `a` is numerically rank deficient.
pub fn lstsq(a: &CMat, b: &CMat) -> Option<CMat> {
    let (m, n) = a.shape();
    if n == 0 {
        return Some(CMat::zeros(0, b.ncols()));
    }
    if m < n {
        return None;
    }
    let qr = a.clone().qr();
    let r = qr.r();
    let diag_max = (0..n).map(|i| r[(i, i)].norm()).fold(0.0, f64::max);
    if diag_max == 0.0 || (0..n).any(|i| r[(i, i)].norm() < RANK_TOL * diag_max) {
        return None;
    }
    let rhs = qr.q().adjoint() * b;
    r.solve_upper_triangular(&rhs)
}

pub fn lstsq_vec(a: &CMat, b: &CVec) -> Option<CVec> {
    let b = CMat::from_column_slice(b.len(), 1, b.as_slice());
    lstsq(a, &b).map(|x| x.column(0).into_owned())
}

/// Inverse of a Hermitian positive semidefinite matrix.
///
/// When the eigenvalue spread exceeds `1e12` the matrix is treated as
/// numerically singular: a ridge of `1e-12 * lambda_max` is added and the
/// returned flag is `true`.
pub fn hermitian_inverse(g: &CMat) -> (CMat, bool) {
    let n = g.nrows();
    let eig = g.clone().symmetric_eigen();
    let lmax = eig.eigenvalues.iter().cloned().fold(0.0, f64::max);
    let lmin = eig
        .eigenvalues
        .iter()
        .cloned()
        .fold(f64::INFINITY, f64::min);
    let singular = lmax.is_nan() || lmax <= 0.0 || lmin < 1e-12 * lmax;
    let ridge = if singular {
        1e-12 * lmax.max(f64::MIN_POSITIVE)
    } else {
        0.0
    };
    let inv_diag = CVec::from_iterator(
        n,
        eig.eigenvalues
            .iter()
            .map(|&l| Complex64::new(1.0 / (l.max(0.0) + ridge), 0.0)),
    );
    let v = &eig.eigenvectors;
    let inv = v * CMat::from_diagonal(&inv_diag) * v.adjoint();
    (inv, singular)
}

/// `log2 det(I + a)` for Hermitian positive semidefinite `a`.
pub fn log2_det_identity_plus(a: &CMat) -> f64 {
    let n = a.nrows();
    let m = CMat::identity(n, n) + a;
    match m.clone().cholesky() {
        Some(ch) => {
            let l = ch.l_dirty();
            (0..n).map(|i| 2.0 * l[(i, i)].re.ln()).sum::<f64>() / std::f64::consts::LN_2
        }
        None => m
            .symmetric_eigen()
            .eigenvalues
            .iter()
            .map(|l| l.max(f64::MIN_POSITIVE).log2())
            .sum(),
    }
}

/// Matrix made of the listed columns of `m`, in order.
pub fn select_columns(m: &CMat, cols: &[usize]) -> CMat {
    CMat::from_fn(m.nrows(), cols.len(), |r, c| m[(r, cols[c])])
}

/// `n x k` matrix whose columns are the standard basis vectors `e_idx`.
pub fn selection_matrix(n: usize, indices: &[usize]) -> CMat {
    let mut s = CMat::zeros(n, indices.len());
    for (c, &i) in indices.iter().enumerate() {
        s[(i, c)] = Complex64::new(1.0, 0.0);
    }
    s
}

pub fn real_to_complex(m: &DMatrix<f64>) -> CMat {
    m.map(|x| Complex64::new(x, 0.0))
}

/// `a b` through four real products, which go through the blocked real GEMM
/// kernel. Worth it for large products only.
pub fn matmul(a: &CMat, b: &CMat) -> CMat {
    let (ar, ai) = (a.map(|z| z.re), a.map(|z| z.im));
    let (br, bi) = (b.map(|z| z.re), b.map(|z| z.im));
    let re = &ar * &br - &ai * &bi;
    let im = &ar * &bi + &ai * &br;
    re.zip_map(&im, Complex64::new)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn split_product_matches_complex_product() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let a = complex_gaussian_matrix(&mut rng, 7, 40, 1.0);
        let b = complex_gaussian_matrix(&mut rng, 40, 33, 1.0);
        assert!((matmul(&a, &b) - &a * &b).norm() < 1e-12);
    }

    #[test]
    fn lstsq_recovers_exact_solution() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let a = complex_gaussian_matrix(&mut rng, 12, 4, 1.0);
        let x = complex_gaussian_matrix(&mut rng, 4, 2, 1.0);
        let b = &a * &x;
        let got = lstsq(&a, &b).unwrap();
        assert!((got - x).norm() < 1e-10);
    }

    #[test]
    fn lstsq_rejects_duplicate_columns() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let mut a = complex_gaussian_matrix(&mut rng, 8, 3, 1.0);
        let c0 = a.column(0).into_owned();
        a.set_column(2, &c0);
        assert!(lstsq(&a, &CMat::zeros(8, 1)).is_none());
    }

    #[test]
    fn hermitian_inverse_matches_and_flags() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let h = complex_gaussian_matrix(&mut rng, 4, 10, 1.0);
        let g = &h * h.adjoint();
        let (inv, flagged) = hermitian_inverse(&g);
        assert!(!flagged);
        assert!((&g * inv - CMat::identity(4, 4)).norm() < 1e-10);

        let mut h2 = h.clone();
        let r0 = h2.row(0).into_owned();
        h2.set_row(1, &r0);
        let (inv2, flagged2) = hermitian_inverse(&(&h2 * h2.adjoint()));
        assert!(flagged2);
        assert!(inv2.iter().all(|z| z.re.is_finite() && z.im.is_finite()));
    }

    #[test]
    fn log_det_of_diagonal() {
        let a = CMat::from_diagonal(&CVec::from_vec(vec![
            Complex64::new(1.0, 0.0),
            Complex64::new(3.0, 0.0),
        ]));
        assert!((log2_det_identity_plus(&a) - 3.0).abs() < 1e-12);
    }
}
