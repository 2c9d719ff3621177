//! Seeded sampling and lossless CSV/JSON persistence.
//!
//! A Monte Carlo cloud is a pure function of its sampler; its SHA-256 is
//! stable across runs and platforms, and both file formats round-trip bits.

use richter::cubature::cloud_sha256;
use richter::io::{measure_to_csv, measure_to_json, parse_cloud_str};
use richter::{discretize, SamplerSpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let sampler = SamplerSpec::monte_carlo(1_000, 2024, vec![(0.0, 1.0), (-2.0, 2.0), (0.0, 10.0)])?;
    let a = discretize(|x| 1.0 + x[0] * x[0], &sampler)?;
    let b = discretize(|x| 1.0 + x[0] * x[0], &sampler)?;
    println!("sha256 {}", cloud_sha256(&a));
    println!("resample identical: {}", a == b);

    let csv = measure_to_csv(&a);
    let json = measure_to_json(&a);
    println!("csv head:\n{}", csv.lines().take(3).collect::<Vec<_>>().join("\n"));
    println!("csv round trip exact:  {}", parse_cloud_str(&csv)? == a);
    println!("json round trip exact: {}", parse_cloud_str(&json)? == a);
    println!("sampler spec: {}", serde_json::to_string(&sampler)?);
    Ok(())
}
