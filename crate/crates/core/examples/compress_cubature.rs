//! Compress a sampled density into a positive cubature rule.
//!
//! Usage: `cargo run --example compress_cubature -- [degree] [samples]`

use richter::cubature::compress_to_cubature;
use richter::{basis_dimension, discretize, SamplerSpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let degree: usize = args.next().map_or(Ok(3), |s| s.parse())?;
    let samples: usize = args.next().map_or(Ok(20_000), |s| s.parse())?;

    // Gaussian-like weight on the square, Monte Carlo sampled
    let sampler = SamplerSpec::monte_carlo(samples, 42, vec![(-1.0, 1.0), (-1.0, 1.0)])?;
    let cloud = discretize(|x| (-(x[0] * x[0] + x[1] * x[1])).exp(), &sampler)?;
    let rule = compress_to_cubature(&cloud, degree, 1e-9)?;

    println!(
        "{} samples -> {} nodes (bound {}), residual {:e}",
        cloud.len(),
        rule.nodes.len(),
        basis_dimension(degree, 2)?,
        rule.moment_residual
    );
    for (x, w) in rule.nodes.iter().zip(&rule.weights) {
        println!("  ({:+.6}, {:+.6})  w = {:.8}", x.coords()[0], x.coords()[1], w);
    }

    // exact up to `degree`, approximate beyond it
    let within = |x: &[f64]| x[0].powi(degree as i32) - x[0] * x[1] + 1.0;
    let beyond = |x: &[f64]| x[0].powi(degree as i32 + 1) * x[1].powi(2);
    for (name, f) in [("within degree", &within as &dyn Fn(&[f64]) -> f64), ("beyond degree", &beyond)] {
        let exact = richter::integrate(&cloud, f)?;
        println!("{name}: cloud {exact:.12}, rule {:.12}", rule.integrate(f));
    }
    Ok(())
}
