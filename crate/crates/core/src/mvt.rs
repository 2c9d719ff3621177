//! Mean-value certificates.
//!
//! A two-point certificate writes the `mu`-average of an integrable `f` as a
//! convex combination `lambda f(x0) + (1 - lambda) f(x1)` of two values of `f`
//! at atoms of `mu`. It comes from reducing `mu` over the span of `{1, f}`.
//! The classical one-point form `f(x*) = mean` needs continuity and a
//! connected domain; [`one_point_mvt_1d`] searches for it on an interval and
//! reports failure when the grid shows it does not exist.

use std::cmp::Ordering;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::basis::{BasisFn, FunctionBasis};
use crate::error::{Error, Result};
use crate::measure::{weighted_mean, DiscreteMeasure, Point};
use crate::recombine::{reduce, ReduceOptions};
use crate::sampler::{discretize, SamplerSpec};

/// `mean = lambda f(x0) + (1 - lambda) f(x1)` up to `residual`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MvtCertificate {
    pub lambda: f64,
    pub x0: Point,
    pub x1: Point,
    /// Mass-normalized integral `tau / mu(Omega)`.
    pub mean: f64,
    pub residual: f64,
    /// The reduction returned a single atom; then `x1 == x0` and `lambda == 1`.
    pub degenerate: bool,
}

impl MvtCertificate {
    /// `lambda f(x0) + (1 - lambda) f(x1)`.
    pub fn combination<F: Fn(&[f64]) -> f64>(&self, f: F) -> f64 {
        self.lambda * f(self.x0.coords()) + (1.0 - self.lambda) * f(self.x1.coords())
    }
}

/// Two-point mean-value certificate of `f` against `measure`.
///
/// `x0` is the atom carrying the larger reduced weight (ties: lexicographically
/// smaller atom). The residual is guaranteed `<= tol * (1 + |mean|)`.
pub fn two_point_mvt<F>(measure: &DiscreteMeasure, f: F, tol: f64) -> Result<MvtCertificate>
where
    F: Fn(&[f64]) -> f64 + Send + Sync + 'static,
{
    let f: BasisFn = Arc::new(f);
    let source = measure.require_mass()?;
    let mean = weighted_mean(&source, |x| f(x))?;
    let basis = FunctionBasis::custom(source.dimension(), vec![f.clone()])?;
    let (nu, _) = reduce(&source, &basis, &ReduceOptions::with_tol(tol))?;

    let mut atoms: Vec<(&Point, f64)> = nu.iter().collect();
    atoms.sort_by(|a, b| match b.1.total_cmp(&a.1) {
        Ordering::Equal => a.0.lex_cmp(b.0),
        ord => ord,
    });
    let cert = match atoms.as_slice() {
        [(x0, _)] => {
            let v = f(x0.coords());
            MvtCertificate {
                lambda: 1.0,
                x0: (*x0).clone(),
                x1: (*x0).clone(),
                mean,
                residual: (v - mean).abs(),
                degenerate: true,
            }
        }
        [(x0, a), (x1, b)] => {
            let lambda = (a / (a + b)).clamp(0.0, 1.0);
            let combo = lambda * f(x0.coords()) + (1.0 - lambda) * f(x1.coords());
            MvtCertificate {
                lambda,
                x0: (*x0).clone(),
                x1: (*x1).clone(),
                mean,
                residual: (combo - mean).abs(),
                degenerate: false,
            }
        }
        other => {
            return Err(Error::InvalidArgument(format!(
                "reduction over {{1, f}} returned {} atoms",
                other.len()
            )))
        }
    };
    let bound = tol * (1.0 + mean.abs());
    if !(cert.residual <= bound) {
        return Err(Error::ResidualExceeded {
            residual: cert.residual,
            tol: bound,
        });
    }
    Ok(cert)
}

/// A point `x*` of an interval with `f(x*)` equal to the `mu`-average of `f`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OnePointWitness {
    pub x: Point,
    pub value: f64,
    pub mean: f64,
    pub residual: f64,
    /// Acceptance bound the residual was checked against.
    pub tol_f: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OnePointOptions {
    /// Number of midpoint cells used for both the average and the scan.
    pub grid: usize,
    /// Bisection stops at brackets no wider than this; defaults to `1e-10 * (hi - lo)`.
    pub tol_x: Option<f64>,
}

impl Default for OnePointOptions {
    fn default() -> Self {
        OnePointOptions {
            grid: 1000,
            tol_x: None,
        }
    }
}

/// Allowed growth of `|f - mean|` per unit of `tol_x / h` for a continuous `f`.
const SLOPE_SLACK: f64 = 1e4;
const MAX_BISECTIONS: usize = 200;

/// Classical one-point mean value on `[lo, hi]` for a continuous `f` and
/// `mu = density(x) dx`.
///
/// The average is taken on the midpoint grid; the same midpoints are scanned
/// for a zero or sign change of `g = f - mean`, which is then bisected. A
/// bracket whose residual does not shrink with it (a jump) is rejected, and
/// if no bracket survives the result is [`Error::NoWitness`].
pub fn one_point_mvt_1d<F, D>(
    f: F,
    interval: (f64, f64),
    density: D,
    options: &OnePointOptions,
) -> Result<OnePointWitness>
where
    F: Fn(f64) -> f64,
    D: Fn(&[f64]) -> f64,
{
    let (lo, hi) = interval;
    let sampler = SamplerSpec::grid_1d(options.grid, lo, hi)?;
    let tol_x = options.tol_x.unwrap_or(1e-10 * (hi - lo));
    if !(tol_x > 0.0) {
        return Err(Error::InvalidArgument(format!("tol_x must be positive, got {tol_x}")));
    }
    let measure = discretize(&density, &sampler)?;
    let mean = weighted_mean(&measure, |x| f(x[0]))?;
    let near_zero = 4.0 * f64::EPSILON * (1.0 + mean.abs());
    let h = (hi - lo) / options.grid as f64;

    let xs: Vec<f64> = sampler.points()?.iter().map(|p| p.coords()[0]).collect();
    let mut gs = Vec::with_capacity(xs.len());
    for (atom, &x) in xs.iter().enumerate() {
        let v = f(x);
        if !v.is_finite() {
            return Err(Error::NonFiniteFunction { atom });
        }
        gs.push(v - mean);
    }
    let witness = |x: f64, g: f64, tol_f: f64| -> Result<OnePointWitness> {
        Ok(OnePointWitness {
            x: Point::scalar(x)?,
            value: g + mean,
            mean,
            residual: g.abs(),
            tol_f,
        })
    };

    for i in 0..xs.len() {
        if gs[i].abs() <= near_zero {
            return witness(xs[i], gs[i], near_zero);
        }
        if i == 0 || gs[i - 1].signum() == gs[i].signum() {
            continue;
        }
        let (mut a, mut b) = (xs[i - 1], xs[i]);
        let (mut ga, mut gb) = (gs[i - 1], gs[i]);
        let tol_f = near_zero + SLOPE_SLACK * (tol_x / h) * ga.abs().max(gb.abs());
        let mut exact = None;
        for _ in 0..MAX_BISECTIONS {
            if b - a <= tol_x {
                break;
            }
            let mid = a + 0.5 * (b - a);
            if mid <= a || mid >= b {
                break;
            }
            let gm = f(mid) - mean;
            if !gm.is_finite() {
                return Err(Error::NonFiniteFunction { atom: i });
            }
            if gm.abs() <= near_zero {
                exact = Some((mid, gm));
                break;
            }
            if gm.signum() == ga.signum() {
                a = mid;
                ga = gm;
            } else {
                b = mid;
                gb = gm;
            }
        }
        let (x, g) = exact.unwrap_or(if ga.abs() <= gb.abs() { (a, ga) } else { (b, gb) });
        if g.abs() <= tol_f {
            return witness(x, g, tol_f);
        }
    }
    let (min, max) = gs
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), g| {
            (lo.min(g + mean), hi.max(g + mean))
        });
    Err(Error::NoWitness { mean, min, max })
}
