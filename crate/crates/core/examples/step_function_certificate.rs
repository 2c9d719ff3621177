//! Two-point mean-value certificate for a step function on [0, 1].
//!
//! The mean of `f = 1 on [0, 1/2], 2 on (1/2, 1]` is 3/2, which `f` never
//! takes. Recombination still finds two atoms whose convex combination
//! reproduces it exactly.

use richter::{discretize, two_point_mvt, SamplerSpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let f = |x: &[f64]| if x[0] <= 0.5 { 1.0 } else { 2.0 };
    let lebesgue = discretize(|_| 1.0, &SamplerSpec::grid_1d(1000, 0.0, 1.0)?)?;
    let cert = two_point_mvt(&lebesgue, f, 1e-9)?;

    println!("mean    = {:.12}", cert.mean);
    println!("lambda  = {:.12}", cert.lambda);
    println!("x0 = {:?}, f(x0) = {}", cert.x0.coords(), f(cert.x0.coords()));
    println!("x1 = {:?}, f(x1) = {}", cert.x1.coords(), f(cert.x1.coords()));
    println!("lambda f(x0) + (1 - lambda) f(x1) = {:.15}", cert.combination(f));
    Ok(())
}
