//! Moment-preserving support reduction of atomic measures.
//!
//! Given a measure with `N` atoms and a basis of dimension `m`, [`reduce`]
//! returns a measure supported on at most `m` of the original atoms with the
//! same integral against every basis element. Each iteration takes a null
//! vector `z` of the evaluation matrix restricted to a working set of at most
//! `m + 1` active atoms, moves the weights along `-z` until the first weight
//! hits zero, and drops it. Weights stay nonnegative throughout.

use serde::{Deserialize, Serialize};

use crate::basis::{eval_matrix, moments, FunctionBasis};
use crate::error::{Error, Result};
use crate::linalg::{Matrix, PivotedQr};
use crate::measure::{DiscreteMeasure, WEIGHT_DUST};

/// Default bound on the relative moment residual.
pub const DEFAULT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReduceOptions {
    /// Bound on `|int g dnu - int g dmu| / (1 + |int g dmu|)` over basis elements.
    pub tol: f64,
    /// Prepend the constant function when the basis lacks it, so total mass is preserved.
    pub adjoin_constant: bool,
}

impl Default for ReduceOptions {
    fn default() -> Self {
        ReduceOptions {
            tol: DEFAULT_TOL,
            adjoin_constant: true,
        }
    }
}

impl ReduceOptions {
    pub fn with_tol(tol: f64) -> Self {
        ReduceOptions {
            tol,
            ..Default::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReductionReport {
    pub initial_support: usize,
    pub final_support: usize,
    pub iterations: usize,
    pub max_relative_moment_residual: f64,
    /// Numerical rank of the full evaluation matrix.
    pub rank_used: usize,
    /// Dimension of the basis as supplied.
    pub basis_dim: usize,
    /// Support bound actually enforced: the dimension after any adjoined constant.
    pub support_bound: usize,
}

/// Result of one elimination along a null direction.
#[derive(Debug, Clone, PartialEq)]
pub struct EliminationStep {
    /// Updated weights, entrywise `>= 0`.
    pub weights: Vec<f64>,
    /// Positions whose weight became exactly zero.
    pub zeroed: Vec<usize>,
    /// The null vector used, normalized to unit max-norm with a positive first nonzero entry.
    pub direction: Vec<f64>,
    /// The step length.
    pub alpha: f64,
}

/// Removes at least one atom from `weights` without changing `active * weights`.
///
/// `active` is the `m x N'` evaluation matrix of the active atoms. Requires
/// `N'` to exceed the numerical rank of `active`.
pub fn elimination_step(weights: &[f64], active: &Matrix) -> Result<EliminationStep> {
    if weights.len() != active.cols() {
        return Err(Error::LengthMismatch {
            atoms: active.cols(),
            weights: weights.len(),
        });
    }
    let qr = PivotedQr::new(active);
    let z = qr.null_vector().ok_or(Error::NullVectorNotFound {
        iteration: 0,
        residual: f64::NAN,
    })?;
    step_along(weights, z)
}

fn step_along(weights: &[f64], mut z: Vec<f64>) -> Result<EliminationStep> {
    if !z.iter().any(|v| *v > 0.0) {
        z.iter_mut().for_each(|v| *v = -*v);
    }
    // smallest ratio w_j / z_j over z_j > 0; first index wins ties
    let mut alpha = f64::INFINITY;
    for (w, zj) in weights.iter().zip(&z) {
        if *zj > 0.0 {
            let r = w / zj;
            if r < alpha {
                alpha = r;
            }
        }
    }
    if !alpha.is_finite() {
        return Err(Error::NullVectorNotFound {
            iteration: 0,
            residual: f64::NAN,
        });
    }
    let cutoff = alpha.next_up();
    let mut out: Vec<f64> = weights
        .iter()
        .zip(&z)
        .map(|(w, zj)| {
            if *zj > 0.0 && w / zj <= cutoff {
                0.0
            } else {
                (w - alpha * zj).max(0.0)
            }
        })
        .collect();
    let max = out.iter().copied().fold(0.0, f64::max);
    for w in &mut out {
        if *w < WEIGHT_DUST * max {
            *w = 0.0;
        }
    }
    let zeroed = out
        .iter()
        .enumerate()
        .filter(|(_, w)| **w == 0.0)
        .map(|(j, _)| j)
        .collect();
    Ok(EliminationStep {
        weights: out,
        zeroed,
        direction: z,
        alpha,
    })
}

/// Reduces `measure` to at most `dim(V)` of its own atoms with the same
/// integrals over the span `V` of `basis`.
///
/// The constant function is adjoined first when `options.adjoin_constant` is
/// set and the basis lacks it; the enforced bound is then `dim(V) + 1`.
pub fn reduce(
    measure: &DiscreteMeasure,
    basis: &FunctionBasis,
    options: &ReduceOptions,
) -> Result<(DiscreteMeasure, ReductionReport)> {
    if !(options.tol > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "tolerance must be positive, got {}",
            options.tol
        )));
    }
    let source = measure.require_mass()?;
    let basis_dim = basis.dim();
    let basis = if options.adjoin_constant {
        basis.clone().with_constant()
    } else {
        basis.clone()
    };
    let m = basis.dim();
    if m == 0 {
        return Err(Error::EmptyBasis);
    }
    let n = source.len();
    let full = eval_matrix(&basis, source.atoms())?;
    let target = moments(&source, &basis)?;
    let rank_used = PivotedQr::new(&full).rank();

    // working set: original indices and their current weights
    let mut active: Vec<usize> = Vec::with_capacity(m + 1);
    let mut weights: Vec<f64> = Vec::with_capacity(m + 1);
    let mut next = 0;
    let mut iterations = 0;
    loop {
        while active.len() <= m && next < n {
            active.push(next);
            weights.push(source.weights()[next]);
            next += 1;
        }
        if active.len() <= 1 {
            break;
        }
        let window = full.select_cols(&active);
        let qr = PivotedQr::new(&window);
        let Some(z) = qr.null_vector() else {
            if next < n {
                // m + 1 columns in R^m always have a null vector
                let residual = qr.diagonal().last().copied().unwrap_or(f64::NAN);
                return Err(Error::NullVectorNotFound {
                    iteration: iterations,
                    residual,
                });
            }
            break;
        };
        let step = step_along(&weights, z).map_err(|_| Error::NullVectorNotFound {
            iteration: iterations,
            residual: f64::NAN,
        })?;
        iterations += 1;
        let mut kept_active = Vec::with_capacity(active.len());
        let mut kept_weights = Vec::with_capacity(active.len());
        for (idx, w) in active.iter().zip(&step.weights) {
            if *w > 0.0 {
                kept_active.push(*idx);
                kept_weights.push(*w);
            }
        }
        active = kept_active;
        weights = kept_weights;
    }

    let mut order: Vec<usize> = (0..active.len()).collect();
    order.sort_by_key(|&k| active[k]);
    let atoms = order.iter().map(|&k| source.atoms()[active[k]].clone()).collect();
    let final_weights = order.iter().map(|&k| weights[k]).collect();
    let reduced = DiscreteMeasure::new(atoms, final_weights)?;

    let achieved = moments(&reduced, &basis)?;
    let residual = achieved.max_relative_residual(&target);
    if !(residual <= options.tol) {
        return Err(Error::ResidualExceeded {
            residual,
            tol: options.tol,
        });
    }
    let report = ReductionReport {
        initial_support: n,
        final_support: reduced.len(),
        iterations,
        max_relative_moment_residual: residual,
        rank_used,
        basis_dim,
        support_bound: m,
    };
    Ok((reduced, report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::Point;
    use std::sync::Arc;

    #[test]
    fn duplicate_atoms_merge() {
        let a = Matrix::from_rows(&[vec![1.0, 1.0]]);
        let step = elimination_step(&[0.5, 0.5], &a).unwrap();
        assert_eq!(step.direction, vec![1.0, -1.0]);
        assert_eq!(step.weights, vec![0.0, 1.0]);
        assert_eq!(step.zeroed, vec![0]);
    }

    #[test]
    fn tie_zeroes_two_weights() {
        // rows 1 and x at x = 0, 1, 2; null direction (1, -2, 1)
        let a = Matrix::from_rows(&[vec![1.0, 1.0, 1.0], vec![0.0, 1.0, 2.0]]);
        let step = elimination_step(&[0.25, 0.5, 0.25], &a).unwrap();
        assert_eq!(step.zeroed, vec![0, 2]);
        assert_eq!(step.weights[1], 1.0);
    }

    #[test]
    fn full_rank_has_no_step() {
        let a = Matrix::from_rows(&[vec![1.0, 1.0], vec![0.0, 1.0]]);
        assert!(matches!(
            elimination_step(&[0.5, 0.5], &a),
            Err(Error::NullVectorNotFound { .. })
        ));
    }

    #[test]
    fn single_atom_is_unchanged() {
        let m = DiscreteMeasure::new(vec![Point::new(vec![0.3, 0.7]).unwrap()], vec![2.0]).unwrap();
        let b = FunctionBasis::scaled_monomials(3, &[(0.0, 1.0), (0.0, 1.0)]).unwrap();
        let (r, rep) = reduce(&m, &b, &ReduceOptions::default()).unwrap();
        assert_eq!(r, m);
        assert_eq!(rep.iterations, 0);
    }

    #[test]
    fn rejects_zero_mass_and_bad_tol() {
        let m = DiscreteMeasure::from_rows(vec![vec![0.0], vec![1.0]], vec![0.0, 0.0]).unwrap();
        let b = FunctionBasis::scaled_monomials(1, &[(0.0, 1.0)]).unwrap();
        assert_eq!(reduce(&m, &b, &ReduceOptions::default()).unwrap_err(), Error::ZeroMass);
        let m = DiscreteMeasure::from_rows(vec![vec![0.0]], vec![1.0]).unwrap();
        assert!(matches!(
            reduce(&m, &b, &ReduceOptions::with_tol(0.0)),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn adjoined_constant_raises_bound() {
        let m = DiscreteMeasure::from_rows(
            (0..50).map(|i| vec![i as f64 / 49.0]).collect(),
            vec![1.0; 50],
        )
        .unwrap();
        let f = FunctionBasis::custom(1, vec![Arc::new(|x: &[f64]| x[0] * x[0])]).unwrap();
        let (r, rep) = reduce(&m, &f, &ReduceOptions::default()).unwrap();
        assert_eq!((rep.basis_dim, rep.support_bound), (1, 2));
        assert!(r.len() <= 2);
        assert!((r.total_mass() - 50.0).abs() < 1e-9 * 51.0);

        let opts = ReduceOptions {
            adjoin_constant: false,
            ..Default::default()
        };
        let (r, rep) = reduce(&m, &f, &opts).unwrap();
        assert_eq!(rep.support_bound, 1);
        assert_eq!(r.len(), 1);
    }
}
