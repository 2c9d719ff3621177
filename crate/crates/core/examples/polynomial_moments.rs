//! Graded-lex monomial bases and their moment vectors.

use richter::{basis_dimension, moments, DiscreteMeasure, FunctionBasis};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for (n, d) in [(2, 2), (3, 3), (6, 4)] {
        println!("degree {n} in {d} variables: {} monomials", basis_dimension(n, d)?);
    }

    // corners of the unit square with unequal weights
    let mu = DiscreteMeasure::from_rows(
        vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0], vec![1.0, 1.0]],
        vec![0.1, 0.2, 0.3, 0.4],
    )?;
    let raw = moments(&mu, &FunctionBasis::unscaled_monomials(2, 2)?)?;
    let scaled = moments(&mu, &FunctionBasis::scaled_monomials(2, &mu.bounding_box())?)?;
    println!("{:>8} {:>10} {:>10}", "monomial", "raw", "scaled");
    for i in 0..raw.values.len() {
        println!("{:>8} {:>10.4} {:>10.4}", raw.labels[i], raw.values[i], scaled.values[i]);
    }
    Ok(())
}
