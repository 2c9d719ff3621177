//! Exactness check of a compressed rule against its source cloud, at the
//! compression degree and one above it.

use richter::cubature::{compress_to_cubature, verify_exactness};
use richter::{discretize, SamplerSpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let grid = SamplerSpec::grid(vec![32, 32], vec![(0.0, 1.0), (0.0, 1.0)])?;
    let cloud = discretize(|_| 1.0, &grid)?;
    let rule = compress_to_cubature(&cloud, 2, 1e-9)?;
    println!("{} grid cells -> {} nodes", cloud.len(), rule.nodes.len());

    for degree in [2, 3] {
        let r = verify_exactness(&rule, &cloud, degree, 100, 7)?;
        println!(
            "degree {degree}: basis max rel err {:.3e}, random polynomials {:.3e}",
            r.basis_max_rel_err, r.sampled_max_rel_err
        );
    }
    Ok(())
}
