//! Finite-dimensional function spaces, evaluation matrices and moment vectors.
//!
//! Monomial bases enumerate exponents in graded-lexicographic order: by total
//! degree, then descending lexicographically in `(a_1, ..., a_d)`. For `d = 2`,
//! `n = 2` that is `1, x1, x2, x1^2, x1 x2, x2^2`.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::measure::DiscreteMeasure;

/// A real function on `R^d`.
pub type BasisFn = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;

/// `C(n + d, d)`, the dimension of the polynomials of total degree `<= n` in
/// `d` variables. Overflow is reported, never wrapped.
pub fn basis_dimension(n: usize, d: usize) -> Result<usize> {
    if d == 0 {
        return Err(Error::ZeroDimension);
    }
    // c_i = C(n + i, i); c_i = c_{i-1} * (n + i) / i divides exactly.
    let mut c: u128 = 1;
    for i in 1..=d as u128 {
        c = c
            .checked_mul(n as u128 + i)
            .ok_or(Error::BinomialOverflow { n, d })?
            / i;
    }
    usize::try_from(c).map_err(|_| Error::BinomialOverflow { n, d })
}

/// Exponent vectors of total degree `<= degree` in graded-lex order.
pub fn graded_lex_exponents(degree: usize, dim: usize) -> Vec<Vec<u32>> {
    fn fill(rest: usize, axis: usize, current: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if axis + 1 == current.len() {
            current[axis] = rest as u32;
            out.push(current.clone());
            return;
        }
        for a in (0..=rest).rev() {
            current[axis] = a as u32;
            fill(rest - a, axis + 1, current, out);
        }
    }
    let mut out = Vec::new();
    let mut current = vec![0; dim];
    for total in 0..=degree {
        fill(total, 0, &mut current, &mut out);
    }
    out
}

/// Affine map of one axis onto `[-1, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AxisScaling {
    pub center: f64,
    pub half_width: f64,
}

impl AxisScaling {
    /// Maps `[lo, hi]` onto `[-1, 1]`. A degenerate axis is only centered.
    pub fn from_interval(lo: f64, hi: f64) -> Self {
        let half = 0.5 * (hi - lo);
        AxisScaling {
            center: 0.5 * (lo + hi),
            half_width: if half > 0.0 { half } else { 1.0 },
        }
    }

    #[inline]
    pub fn apply(&self, x: f64) -> f64 {
        (x - self.center) / self.half_width
    }
}

#[derive(Clone)]
enum Kind {
    Monomial {
        degree: usize,
        exponents: Vec<Vec<u32>>,
        scaling: Option<Vec<AxisScaling>>,
    },
    Custom(Vec<BasisFn>),
}

/// An ordered spanning set of a finite-dimensional space `V` of functions on `R^d`.
#[derive(Clone)]
pub struct FunctionBasis {
    domain_dim: usize,
    kind: Kind,
    adjoined_constant: bool,
}

impl fmt::Debug for FunctionBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = f.debug_struct("FunctionBasis");
        s.field("domain_dim", &self.domain_dim).field("dim", &self.dim());
        match &self.kind {
            Kind::Monomial {
                degree, scaling, ..
            } => s.field("degree", degree).field("scaling", scaling),
            Kind::Custom(fs) => s.field("custom", &fs.len()),
        };
        s.field("adjoined_constant", &self.adjoined_constant).finish()
    }
}

impl FunctionBasis {
    /// Total-degree monomials of degree `<= degree`, each axis mapped from its
    /// `(lo, hi)` interval onto `[-1, 1]` before evaluation.
    pub fn scaled_monomials(degree: usize, domain: &[(f64, f64)]) -> Result<Self> {
        if domain.is_empty() {
            return Err(Error::ZeroDimension);
        }
        basis_dimension(degree, domain.len())?;
        Ok(FunctionBasis {
            domain_dim: domain.len(),
            kind: Kind::Monomial {
                degree,
                exponents: graded_lex_exponents(degree, domain.len()),
                scaling: Some(
                    domain
                        .iter()
                        .map(|&(lo, hi)| AxisScaling::from_interval(lo, hi))
                        .collect(),
                ),
            },
            adjoined_constant: false,
        })
    }

    /// Raw monomials `x^a`. Poorly conditioned; meant for cross-checks.
    pub fn unscaled_monomials(degree: usize, dim: usize) -> Result<Self> {
        basis_dimension(degree, dim)?;
        Ok(FunctionBasis {
            domain_dim: dim,
            kind: Kind::Monomial {
                degree,
                exponents: graded_lex_exponents(degree, dim),
                scaling: None,
            },
            adjoined_constant: false,
        })
    }

    pub fn custom(domain_dim: usize, functions: Vec<BasisFn>) -> Result<Self> {
        if domain_dim == 0 {
            return Err(Error::ZeroDimension);
        }
        if functions.is_empty() {
            return Err(Error::EmptyBasis);
        }
        Ok(FunctionBasis {
            domain_dim,
            kind: Kind::Custom(functions),
            adjoined_constant: false,
        })
    }

    /// Prepends the constant function unless the basis already starts with it.
    pub fn with_constant(mut self) -> Self {
        if !self.contains_constant() {
            self.adjoined_constant = true;
        }
        self
    }

    /// Whether element 0 is the constant function 1.
    pub fn contains_constant(&self) -> bool {
        self.adjoined_constant || matches!(self.kind, Kind::Monomial { .. })
    }

    pub fn dim(&self) -> usize {
        let own = match &self.kind {
            Kind::Monomial { exponents, .. } => exponents.len(),
            Kind::Custom(fs) => fs.len(),
        };
        own + usize::from(self.adjoined_constant)
    }

    pub fn domain_dim(&self) -> usize {
        self.domain_dim
    }

    pub fn degree(&self) -> Option<usize> {
        match &self.kind {
            Kind::Monomial { degree, .. } => Some(*degree),
            Kind::Custom(_) => None,
        }
    }

    pub fn exponents(&self) -> Option<&[Vec<u32>]> {
        match &self.kind {
            Kind::Monomial { exponents, .. } => Some(exponents),
            Kind::Custom(_) => None,
        }
    }

    pub fn scaling(&self) -> Option<&[AxisScaling]> {
        match &self.kind {
            Kind::Monomial { scaling, .. } => scaling.as_deref(),
            Kind::Custom(_) => None,
        }
    }

    /// Human-readable element names, e.g. `1`, `t1^2*t2` (scaled) or `f0`.
    pub fn labels(&self) -> Vec<String> {
        let mut out = Vec::with_capacity(self.dim());
        if self.adjoined_constant {
            out.push("1".to_string());
        }
        match &self.kind {
            Kind::Monomial {
                exponents, scaling, ..
            } => {
                let var = if scaling.is_some() { "t" } else { "x" };
                for e in exponents {
                    let factors: Vec<String> = e
                        .iter()
                        .enumerate()
                        .filter(|(_, a)| **a > 0)
                        .map(|(i, a)| match a {
                            1 => format!("{var}{}", i + 1),
                            _ => format!("{var}{}^{a}", i + 1),
                        })
                        .collect();
                    out.push(if factors.is_empty() {
                        "1".to_string()
                    } else {
                        factors.join("*")
                    });
                }
            }
            Kind::Custom(fs) => out.extend((0..fs.len()).map(|i| format!("f{i}"))),
        }
        out
    }

    /// Writes every basis element evaluated at `x` into `out` (length `dim`).
    /// Assumes `x.len() == domain_dim`.
    pub fn eval_into(&self, x: &[f64], out: &mut [f64]) {
        debug_assert_eq!(out.len(), self.dim());
        let mut slot = 0;
        if self.adjoined_constant {
            out[0] = 1.0;
            slot = 1;
        }
        match &self.kind {
            Kind::Monomial {
                degree,
                exponents,
                scaling,
            } => {
                // powers[axis * (degree + 1) + k] = t_axis^k
                let stride = degree + 1;
                let mut powers = vec![1.0; self.domain_dim * stride];
                for (axis, &xi) in x.iter().enumerate() {
                    let t = match scaling {
                        Some(s) => s[axis].apply(xi),
                        None => xi,
                    };
                    for k in 1..stride {
                        powers[axis * stride + k] = powers[axis * stride + k - 1] * t;
                    }
                }
                for (e, o) in exponents.iter().zip(&mut out[slot..]) {
                    *o = e
                        .iter()
                        .enumerate()
                        .map(|(axis, &a)| powers[axis * stride + a as usize])
                        .product();
                }
            }
            Kind::Custom(fs) => {
                for (f, o) in fs.iter().zip(&mut out[slot..]) {
                    *o = f(x);
                }
            }
        }
    }

    pub fn eval(&self, x: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.dim()];
        self.eval_into(x, &mut out);
        out
    }
}

/// Integrals of each basis element against a measure.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentVector {
    pub labels: Vec<String>,
    pub values: Vec<f64>,
}

impl MomentVector {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `max_i |a_i - b_i| / (1 + |b_i|)` against a reference vector.
    pub fn max_relative_residual(&self, reference: &MomentVector) -> f64 {
        relative_residual(&self.values, &reference.values)
    }
}

pub(crate) fn relative_residual(values: &[f64], reference: &[f64]) -> f64 {
    values
        .iter()
        .zip(reference)
        .map(|(a, b)| (a - b).abs() / (1.0 + b.abs()))
        .fold(0.0, f64::max)
}

/// `m x N` matrix whose column `j` holds every basis element evaluated at `points[j]`.
pub fn eval_matrix<P: AsRef<[f64]>>(basis: &FunctionBasis, points: &[P]) -> Result<Matrix> {
    let m = basis.dim();
    let mut mat = Matrix::zeros(m, points.len());
    for (j, p) in points.iter().enumerate() {
        let x = p.as_ref();
        if x.len() != basis.domain_dim() {
            return Err(Error::DimensionMismatch {
                index: j,
                expected: basis.domain_dim(),
                found: x.len(),
            });
        }
        let col = mat.col_mut(j);
        basis.eval_into(x, col);
        if let Some(element) = col.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFiniteEvaluation { element, point: j });
        }
    }
    Ok(mat)
}

/// The moment vector `(integral of g_i d(measure))_i`.
pub fn moments(measure: &DiscreteMeasure, basis: &FunctionBasis) -> Result<MomentVector> {
    if measure.dimension() != basis.domain_dim() {
        return Err(Error::DimensionMismatch {
            index: 0,
            expected: basis.domain_dim(),
            found: measure.dimension(),
        });
    }
    let m = basis.dim();
    let mut values = vec![0.0; m];
    let mut col = vec![0.0; m];
    for (j, (p, w)) in measure.iter().enumerate() {
        basis.eval_into(p.coords(), &mut col);
        for (element, (acc, v)) in values.iter_mut().zip(&col).enumerate() {
            if !v.is_finite() {
                return Err(Error::NonFiniteEvaluation { element, point: j });
            }
            *acc += w * v;
        }
    }
    Ok(MomentVector {
        labels: basis.labels(),
        values,
    })
}
