//! Points and finitely supported (atomic) measures.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative threshold below which a weight counts as zero.
pub const WEIGHT_DUST: f64 = 1e-15;

/// A point of `R^d` with finite coordinates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Point(Vec<f64>);

impl Point {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::ZeroDimension);
        }
        if let Some(axis) = coords.iter().position(|c| !c.is_finite()) {
            return Err(Error::NonFiniteCoordinate { atom: 0, axis });
        }
        Ok(Point(coords))
    }

    pub fn scalar(x: f64) -> Result<Self> {
        Self::new(vec![x])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    /// Lexicographic order on coordinates (total since coordinates are finite).
    pub fn lex_cmp(&self, other: &Point) -> Ordering {
        for (a, b) in self.0.iter().zip(&other.0) {
            match a.total_cmp(b) {
                Ordering::Equal => continue,
                ord => return ord,
            }
        }
        self.0.len().cmp(&other.0.len())
    }
}

impl AsRef<[f64]> for Point {
    fn as_ref(&self) -> &[f64] {
        &self.0
    }
}

/// A nonnegative measure `sum_j w_j delta_{x_j}` on `R^d`.
///
/// Construction validates shapes, finiteness and nonnegativity but keeps
/// zero-weight atoms; [`DiscreteMeasure::canonical`] drops them. Zero total
/// mass is representable and is rejected by the operations that need mass.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteMeasure {
    dimension: usize,
    atoms: Vec<Point>,
    weights: Vec<f64>,
}

impl DiscreteMeasure {
    pub fn new(atoms: Vec<Point>, weights: Vec<f64>) -> Result<Self> {
        if atoms.len() != weights.len() {
            return Err(Error::LengthMismatch {
                atoms: atoms.len(),
                weights: weights.len(),
            });
        }
        let dimension = match atoms.first() {
            Some(p) => p.dim(),
            None => {
                return Err(Error::InvalidArgument(
                    "a measure needs at least one atom".into(),
                ))
            }
        };
        for (index, p) in atoms.iter().enumerate() {
            if p.dim() != dimension {
                return Err(Error::DimensionMismatch {
                    index,
                    expected: dimension,
                    found: p.dim(),
                });
            }
        }
        if let Some((atom, &value)) = weights
            .iter()
            .enumerate()
            .find(|(_, w)| !(w.is_finite() && **w >= 0.0))
        {
            return Err(Error::InvalidWeight { atom, value });
        }
        Ok(DiscreteMeasure {
            dimension,
            atoms,
            weights,
        })
    }

    /// Builds a measure from raw coordinate rows.
    pub fn from_rows(rows: Vec<Vec<f64>>, weights: Vec<f64>) -> Result<Self> {
        let atoms = rows
            .into_iter()
            .enumerate()
            .map(|(atom, coords)| {
                Point::new(coords).map_err(|e| match e {
                    Error::NonFiniteCoordinate { axis, .. } => {
                        Error::NonFiniteCoordinate { atom, axis }
                    }
                    other => other,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(atoms, weights)
    }

    /// Equal weights `1/N` on the given atoms.
    pub fn uniform(atoms: Vec<Point>) -> Result<Self> {
        let n = atoms.len() as f64;
        let weights = vec![1.0 / n; atoms.len()];
        Self::new(atoms, weights)
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn atoms(&self) -> &[Point] {
        &self.atoms
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Point, f64)> {
        self.atoms.iter().zip(self.weights.iter().copied())
    }

    /// Compensated sum, so a grid of `N` equal cells adds up to its volume
    /// within a few ulps rather than `N` of them.
    pub fn total_mass(&self) -> f64 {
        compensated_sum(self.weights.iter().copied())
    }

    /// Number of atoms carrying positive weight.
    pub fn support_size(&self) -> usize {
        self.weights.iter().filter(|w| **w > 0.0).count()
    }

    /// Drops atoms whose weight is zero or below `WEIGHT_DUST` times the
    /// largest weight. Atom order is preserved.
    pub fn canonical(&self) -> DiscreteMeasure {
        let max = self.weights.iter().copied().fold(0.0, f64::max);
        let floor = WEIGHT_DUST * max;
        let (atoms, weights) = self
            .iter()
            .filter(|(_, w)| *w > 0.0 && *w >= floor)
            .map(|(p, w)| (p.clone(), w))
            .unzip();
        DiscreteMeasure {
            dimension: self.dimension,
            atoms,
            weights,
        }
    }

    /// Same atoms, weights multiplied by `factor > 0`.
    pub fn scaled(&self, factor: f64) -> Result<DiscreteMeasure> {
        if !(factor.is_finite() && factor > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "scale factor must be positive and finite, got {factor}"
            )));
        }
        Self::new(
            self.atoms.clone(),
            self.weights.iter().map(|w| w * factor).collect(),
        )
    }

    /// Canonical form with positive mass, or `ZeroMass`.
    pub(crate) fn require_mass(&self) -> Result<DiscreteMeasure> {
        let canon = self.canonical();
        if canon.is_empty() || canon.total_mass() <= 0.0 {
            return Err(Error::ZeroMass);
        }
        Ok(canon)
    }

    /// Per-axis `(min, max)` of the atom coordinates.
    pub fn bounding_box(&self) -> Vec<(f64, f64)> {
        (0..self.dimension)
            .map(|axis| {
                self.atoms.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| {
                    let c = p.coords()[axis];
                    (lo.min(c), hi.max(c))
                })
            })
            .collect()
    }
}

/// Neumaier summation.
pub(crate) fn compensated_sum(values: impl Iterator<Item = f64>) -> f64 {
    let (mut sum, mut carry) = (0.0f64, 0.0f64);
    for v in values {
        let t = sum + v;
        carry += if sum.abs() >= v.abs() { (sum - t) + v } else { (v - t) + sum };
        sum = t;
    }
    sum + carry
}

/// `sum_j w_j f(x_j)`.
pub fn integrate<F>(measure: &DiscreteMeasure, f: F) -> Result<f64>
where
    F: Fn(&[f64]) -> f64,
{
    let mut acc = 0.0;
    for (atom, (p, w)) in measure.iter().enumerate() {
        let v = f(p.coords());
        if !v.is_finite() {
            return Err(Error::NonFiniteFunction { atom });
        }
        acc += w * v;
    }
    Ok(acc)
}

/// Mass-normalized average `sum_j w_j f(x_j) / sum_j w_j`.
///
/// Uses the incremental weighted-mean update, so a constant `f` yields its
/// value exactly.
pub fn weighted_mean<F>(measure: &DiscreteMeasure, f: F) -> Result<f64>
where
    F: Fn(&[f64]) -> f64,
{
    let mut mean = 0.0;
    let mut mass = 0.0;
    for (atom, (p, w)) in measure.iter().enumerate() {
        let v = f(p.coords());
        if !v.is_finite() {
            return Err(Error::NonFiniteFunction { atom });
        }
        if w <= 0.0 {
            continue;
        }
        mass += w;
        mean += (w / mass) * (v - mean);
    }
    if mass <= 0.0 {
        return Err(Error::ZeroMass);
    }
    Ok(mean)
}
