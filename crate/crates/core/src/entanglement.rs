//! Schmidt analysis of two-mode coefficient matrices.

use rayon::prelude::*;

use crate::error::arg;
use crate::hermite::{AlphaParam, Point};
use crate::states::{coherent_state, CoeffMatrix, FockVector, State};
use crate::{Error, Result, C64};

/// Relative cutoff for counting Schmidt values, in units of the largest one.
pub const DEFAULT_RANK_TOL: f64 = 1e-10;

/// Truncation per mode used by sweeps unless told otherwise.
pub const DEFAULT_SWEEP_N: usize = 12;

#[derive(Clone, Debug, PartialEq)]
pub struct SchmidtResult {
    /// nonincreasing
    pub singular_values: Vec<f64>,
    /// natural-log units
    pub entropy: f64,
    pub entropy_log2: f64,
    pub effective_rank: usize,
}

/// Schmidt values and entanglement entropy of `C`.
///
/// `rank_tol` is relative to the largest singular value. Values at or below
/// it count neither toward the rank nor the entropy, so a rank-one matrix
/// has entropy exactly zero.
pub fn schmidt(state: &CoeffMatrix, rank_tol: f64) -> Result<SchmidtResult> {
    if !(rank_tol >= 0.0) {
        return arg("rank tolerance must be nonnegative");
    }
    let mut sv: Vec<f64> = state.coeffs.singular_values().iter().copied().collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    let top = sv.first().copied().unwrap_or(0.0);
    if !(top > 0.0) {
        return arg("zero coefficient matrix has no Schmidt decomposition");
    }
    let cut = rank_tol * top;
    let kept: Vec<f64> = sv.iter().copied().filter(|&s| s > cut).collect();
    let total: f64 = kept.iter().map(|s| (s / top).powi(2)).sum();
    let entropy = if kept.len() == 1 {
        0.0
    } else {
        kept.iter()
            .map(|s| {
                let p = (s / top).powi(2) / total;
                if p > 0.0 {
                    -p * p.ln()
                } else {
                    0.0
                }
            })
            .sum::<f64>()
            .max(0.0)
    };
    Ok(SchmidtResult {
        singular_values: sv,
        entropy,
        entropy_log2: entropy / std::f64::consts::LN_2,
        effective_rank: kept.len(),
    })
}

/// One point of an entropy sweep.
#[derive(Clone, Debug)]
pub struct EntropyPoint {
    pub alpha: f64,
    pub schmidt: SchmidtResult,
    pub tail: f64,
    pub warnings: Vec<String>,
}

/// Entropy of the bipartite coherent state at `(z1, z2)` for each alpha.
///
/// Points are independent and computed in parallel; output order follows
/// `alphas`.
pub fn alpha_entropy_sweep(z1: C64, z2: C64, alphas: &[f64], n: usize) -> Result<Vec<EntropyPoint>> {
    if n < 8 {
        return arg(format!("sweep truncation must be at least 8, got {n}"));
    }
    let params = alphas
        .iter()
        .map(|&a| AlphaParam::new(a))
        .collect::<Result<Vec<_>>>()?;
    params
        .par_iter()
        .map(|&alpha| {
            let cs = coherent_state(Point::Two(z1, z2), alpha, n, false)?;
            let State::Bipartite(c) = &cs.state else {
                unreachable!("two points give a bipartite state")
            };
            Ok(EntropyPoint {
                alpha: alpha.alpha(),
                schmidt: schmidt(c, DEFAULT_RANK_TOL)?,
                tail: cs.tail,
                warnings: cs.warnings.clone(),
            })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub enum Witness {
    /// `C = u v^T` up to the tolerance.
    Product(FockVector, FockVector),
    /// `||C - s1 u1 v1^H|| / ||C||` (Frobenius).
    Entangled { residual: f64 },
}

impl Witness {
    pub fn factors(&self) -> Option<(&FockVector, &FockVector)> {
        match self {
            Witness::Product(u, v) => Some((u, v)),
            Witness::Entangled { .. } => None,
        }
    }
}

/// Splits `C` into `u v^T` when its effective rank is one.
pub fn factorization_witness(state: &CoeffMatrix, tol: f64) -> Result<Witness> {
    let rank = schmidt(state, tol)?.effective_rank;
    let svd = state.coeffs.clone().svd(true, true);
    let (u, v_t) = match (&svd.u, &svd.v_t) {
        (Some(u), Some(v_t)) => (u, v_t),
        _ => return Err(Error::NumericRange("SVD did not return singular vectors".into())),
    };
    let (k, s1) = svd
        .singular_values
        .iter()
        .copied()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(&b.1))
        .expect("nonempty matrix");
    let root = s1.sqrt();
    let left = u.column(k) * C64::from(root);
    let right = v_t.row(k).transpose() * C64::from(root);
    if rank == 1 {
        return Ok(Witness::Product(FockVector::new(left)?, FockVector::new(right)?));
    }
    let approx = &left * right.transpose();
    let residual = (&state.coeffs - approx).norm() / state.coeffs.norm();
    Ok(Witness::Entangled { residual })
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::{DMatrix, DVector};

    #[test]
    fn rank_one_has_zero_entropy() {
        let u = FockVector::new(DVector::from_vec(vec![C64::new(1.0, 0.5), C64::new(-0.2, 0.0), C64::new(0.3, 0.1)])).unwrap();
        let v = FockVector::new(DVector::from_vec(vec![C64::new(0.0, 1.0), C64::new(2.0, 0.0), C64::new(0.1, -0.1)])).unwrap();
        let c = CoeffMatrix::product(&u, &v).unwrap();
        let r = schmidt(&c, DEFAULT_RANK_TOL).unwrap();
        assert_eq!(r.effective_rank, 1);
        assert_eq!(r.entropy, 0.0);
        let w = factorization_witness(&c, DEFAULT_RANK_TOL).unwrap();
        let (a, b) = w.factors().unwrap();
        let back = &a.coeffs * b.coeffs.transpose();
        assert!((back - &c.coeffs).norm() < 1e-14);
    }

    #[test]
    fn maximally_mixed_diagonal() {
        let c = CoeffMatrix::new(DMatrix::identity(4, 4)).unwrap();
        let r = schmidt(&c, DEFAULT_RANK_TOL).unwrap();
        assert_eq!(r.effective_rank, 4);
        assert!((r.entropy - 4f64.ln()).abs() < 1e-14);
        assert!((r.entropy_log2 - 2.0).abs() < 1e-14);
    }

    #[test]
    fn zero_matrix_rejected() {
        let c = CoeffMatrix::new(DMatrix::zeros(3, 3)).unwrap();
        assert!(matches!(schmidt(&c, DEFAULT_RANK_TOL), Err(Error::Argument(_))));
    }
}
