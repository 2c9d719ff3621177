//! Compressed cubature rules.
//!
//! A point cloud is reduced over the polynomials of total degree `<= n`
//! (scaled graded-lex monomials), giving a rule with at most `C(n + d, d)`
//! positive-weight nodes drawn from the cloud that integrates every such
//! polynomial exactly against the cloud.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::basis::{basis_dimension, moments, relative_residual, FunctionBasis};
use crate::error::{Error, Result};
use crate::measure::{DiscreteMeasure, Point};
use crate::recombine::{reduce, ReduceOptions};
use crate::sampler::{unit_f64, SamplerSpec};

/// Where the compressed cloud came from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Origin {
    Sampler { sampler: SamplerSpec },
    File { path: String },
    InMemory,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    #[serde(flatten)]
    pub origin: Origin,
    /// SHA-256 of the canonical cloud, see [`cloud_sha256`].
    pub cloud_sha256: String,
    pub input_atoms: usize,
    pub input_mass: f64,
    /// Per-axis box mapped onto `[-1, 1]` by the monomial basis.
    pub scaling_box: Vec<(f64, f64)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CubatureRule {
    pub dimension: usize,
    pub degree: usize,
    pub nodes: Vec<Point>,
    pub weights: Vec<f64>,
    pub moment_residual: f64,
    pub source: Provenance,
}

impl CubatureRule {
    pub fn to_measure(&self) -> Result<DiscreteMeasure> {
        DiscreteMeasure::new(self.nodes.clone(), self.weights.clone())
    }

    /// Monomial basis the rule is exact for.
    pub fn basis(&self) -> Result<FunctionBasis> {
        FunctionBasis::scaled_monomials(self.degree, &self.source.scaling_box)
    }

    pub fn integrate<F: Fn(&[f64]) -> f64>(&self, f: F) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(p, w)| w * f(p.coords()))
            .sum()
    }
}

/// SHA-256 over the dimension (`u64` LE) followed by every atom's coordinates
/// and weight as IEEE-754 bit patterns (`u64` LE), in atom order.
pub fn cloud_sha256(cloud: &DiscreteMeasure) -> String {
    let mut h = Sha256::new();
    h.update((cloud.dimension() as u64).to_le_bytes());
    for (p, w) in cloud.iter() {
        for c in p.coords() {
            h.update(c.to_bits().to_le_bytes());
        }
        h.update(w.to_bits().to_le_bytes());
    }
    hex::encode(h.finalize())
}

/// Compresses `cloud` into a rule exact on total degree `<= degree`.
pub fn compress_to_cubature(cloud: &DiscreteMeasure, degree: usize, tol: f64) -> Result<CubatureRule> {
    compress_with_origin(cloud, degree, tol, Origin::InMemory)
}

pub fn compress_with_origin(
    cloud: &DiscreteMeasure,
    degree: usize,
    tol: f64,
    origin: Origin,
) -> Result<CubatureRule> {
    let source = cloud.require_mass()?;
    let scaling_box = source.bounding_box();
    let basis = FunctionBasis::scaled_monomials(degree, &scaling_box)?;
    let (nu, report) = reduce(&source, &basis, &ReduceOptions::with_tol(tol))?;
    debug_assert!(nu.len() <= basis_dimension(degree, source.dimension())?);
    Ok(CubatureRule {
        dimension: source.dimension(),
        degree,
        nodes: nu.atoms().to_vec(),
        weights: nu.weights().to_vec(),
        moment_residual: report.max_relative_moment_residual,
        source: Provenance {
            origin,
            cloud_sha256: cloud_sha256(&source),
            input_atoms: source.len(),
            input_mass: source.total_mass(),
            scaling_box,
        },
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExactnessReport {
    /// Largest `|int g dnu - int g dmu| / (1 + |int g dmu|)` over basis monomials.
    pub basis_max_rel_err: f64,
    /// Same quantity over the random polynomial draws.
    pub sampled_max_rel_err: f64,
    pub trials: usize,
    pub seed: u64,
}

/// Checks the rule against `reference` on polynomials of total degree `<= degree`.
///
/// Test polynomials are combinations of the rule's scaled monomials with
/// coefficients uniform in `[-1, 1]`, drawn from ChaCha8 seeded with `seed`
/// (one `u64` per coefficient, mapped as `2 u - 1`). Each is evaluated
/// pointwise on both measures.
pub fn verify_exactness(
    rule: &CubatureRule,
    reference: &DiscreteMeasure,
    degree: usize,
    trials: usize,
    seed: u64,
) -> Result<ExactnessReport> {
    if reference.dimension() != rule.dimension {
        return Err(Error::DimensionMismatch {
            index: 0,
            expected: rule.dimension,
            found: reference.dimension(),
        });
    }
    if trials == 0 {
        return Err(Error::InvalidArgument("at least one trial is required".into()));
    }
    let rule_measure = rule.to_measure()?;
    let basis = FunctionBasis::scaled_monomials(degree, &rule.source.scaling_box)?;
    let basis_max_rel_err = relative_residual(
        &moments(&rule_measure, &basis)?.values,
        &moments(reference, &basis)?.values,
    );

    let m = basis.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut buf = vec![0.0; m];
    let mut integrate_poly = |measure: &DiscreteMeasure, coeffs: &[f64]| -> f64 {
        measure
            .iter()
            .map(|(p, w)| {
                basis.eval_into(p.coords(), &mut buf);
                w * coeffs.iter().zip(&buf).map(|(c, g)| c * g).sum::<f64>()
            })
            .sum()
    };
    let mut sampled_max_rel_err: f64 = 0.0;
    for _ in 0..trials {
        let coeffs: Vec<f64> = (0..m).map(|_| 2.0 * unit_f64(rng.next_u64()) - 1.0).collect();
        let exact = integrate_poly(reference, &coeffs);
        let approx = integrate_poly(&rule_measure, &coeffs);
        sampled_max_rel_err = sampled_max_rel_err.max((approx - exact).abs() / (1.0 + exact.abs()));
    }
    Ok(ExactnessReport {
        basis_max_rel_err,
        sampled_max_rel_err,
        trials,
        seed,
    })
}
