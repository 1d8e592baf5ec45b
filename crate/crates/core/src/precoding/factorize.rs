//! Spatially sparse hybrid factorization of a target precoder.

use super::PrecoderPair;
use crate::error::{Error, Result};
use crate::estimation::DirectionDictionary;
use crate::linalg::{lstsq, select_columns, CMat};
use crate::metrics::Architecture;

#[derive(Debug, Clone, PartialEq)]
pub struct HybridFactorization {
    pub pair: PrecoderPair,
    /// Dictionary columns used as the analog stage.
    pub atoms: Vec<usize>,
    /// `||F_target - A D_ls||_F` of the least-squares fit, before the
    /// power renormalization.
    pub residual: f64,
}

/// Greedy OMP-style factorization `F_target ~ A D` with the analog columns
/// drawn from the direction dictionary. Each step adds the atom most
/// correlated with the current residual and refits `D` by least squares.
pub fn hybrid_factorize_omp(
    f_target: &CMat,
    dictionary: &DirectionDictionary,
    n_rf: usize,
) -> Result<HybridFactorization> {
    let atoms = &dictionary.atoms;
    if f_target.nrows() != atoms.nrows() {
        return Err(Error::dims(
            "hybrid_factorize_omp",
            format!("{} rows", atoms.nrows()),
            f_target.nrows(),
        ));
    }
    if n_rf == 0 || n_rf > dictionary.grid_size {
        return Err(Error::InvalidArgument(format!(
            "n_rf {n_rf} must be in 1..={}",
            dictionary.grid_size
        )));
    }
    let mut chosen: Vec<usize> = Vec::with_capacity(n_rf);
    let mut blocked = vec![false; dictionary.grid_size];
    let mut residual = f_target.clone();
    let mut digital = CMat::zeros(0, f_target.ncols());
    while chosen.len() < n_rf {
        let corr = atoms.ad_mul(&residual);
        let next = (0..dictionary.grid_size)
            .filter(|&g| !blocked[g])
            .map(|g| (g, corr.row(g).norm_squared()))
            .fold(None, |acc: Option<(usize, f64)>, (g, v)| match acc {
                Some((_, b)) if b >= v => acc,
                _ => Some((g, v)),
            });
        let Some((g, _)) = next else { break };
        blocked[g] = true;
        chosen.push(g);
        let a = select_columns(atoms, &chosen);
        match lstsq(&a, f_target) {
            Some(d) => {
                residual = f_target - &a * &d;
                digital = d;
            }
            None => {
                chosen.pop();
            }
        }
    }
    let residual_norm = residual.norm();
    let analog = select_columns(atoms, &chosen);
    let pair = PrecoderPair::with_total_power(analog, digital, Architecture::FullPahp, false);
    Ok(HybridFactorization {
        pair,
        atoms: chosen,
        residual: residual_norm,
    })
}
