//! Classical one-point mean values on an interval, and why they can fail.

use richter::mvt::{one_point_mvt_1d, OnePointOptions};
use richter::Error;

fn main() {
    let opts = OnePointOptions::default();

    // continuous: a witness always exists
    for (name, f) in [("x^2", (|x: f64| x * x) as fn(f64) -> f64), ("sin", f64::sin), ("exp", f64::exp)] {
        let w = one_point_mvt_1d(f, (0.0, 2.0), |_| 1.0, &opts).unwrap();
        println!("{name:>4}: mean {:.10} attained at x* = {:.10}", w.mean, w.x.coords()[0]);
    }

    // weighted: density 3x^2 pulls the mean of x towards 1
    let w = one_point_mvt_1d(|x| x, (0.0, 1.0), |x| 3.0 * x[0] * x[0], &opts).unwrap();
    println!("   x: weighted mean {:.6} at x* = {:.6}", w.mean, w.x.coords()[0]);

    // a jump skips over its mean
    match one_point_mvt_1d(|x| if x <= 0.5 { 1.0 } else { 2.0 }, (0.0, 1.0), |_| 1.0, &opts) {
        Err(e @ Error::NoWitness { .. }) => println!("step: {e}"),
        other => println!("step: unexpected {other:?}"),
    }
}
