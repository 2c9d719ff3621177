//! Recombination against an arbitrary function basis.
//!
//! Any finite set of test functions works; the reduced measure keeps at most
//! one atom per function, plus one for the adjoined constant.

use std::sync::Arc;

use richter::{discretize, moments, reduce, BasisFn, FunctionBasis, ReduceOptions, SamplerSpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let sampler = SamplerSpec::monte_carlo(5_000, 1, vec![(0.0, std::f64::consts::PI); 2])?;
    let mu = discretize(|x| 1.0 + x[1], &sampler)?;

    let fs: Vec<BasisFn> = vec![
        Arc::new(|x| x[0].sin() * x[1].cos()),
        Arc::new(|x| (x[0] - x[1]).abs()),
        Arc::new(|x| (-x[0]).exp()),
        Arc::new(|x| if x[0] + x[1] < 3.0 { 1.0 } else { 0.0 }),
    ];
    let basis = FunctionBasis::custom(2, fs)?;
    let (nu, report) = reduce(&mu, &basis, &ReduceOptions::default())?;

    println!(
        "{} -> {} atoms in {} eliminations (bound {})",
        report.initial_support, report.final_support, report.iterations, report.support_bound
    );
    let (before, after) = (moments(&mu, &basis)?, moments(&nu, &basis)?);
    for ((label, a), b) in before.labels.iter().zip(&before.values).zip(&after.values) {
        println!("  {label}: {a:.12} vs {b:.12}");
    }
    for (x, w) in nu.iter() {
        println!("  atom {:?} weight {w:.10}", x.coords());
    }
    Ok(())
}
