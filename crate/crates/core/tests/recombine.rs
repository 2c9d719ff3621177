use std::sync::Arc;

use num_rational::BigRational;
use proptest::prelude::*;
use richter::basis::eval_matrix;
use richter::linalg::{numerical_rank, Matrix};
use richter::{
    discretize, elimination_step, moments, reduce, BasisFn, DiscreteMeasure, FunctionBasis,
    ReduceOptions, SamplerSpec,
};

fn rat(x: f64) -> BigRational {
    BigRational::from_float(x).unwrap()
}

/// Exact elimination on the 2 x 3 matrix with rows `1` and `x`: the null
/// direction is the cross product of the rows, signed so its first nonzero
/// entry is positive.
fn rational_step(xs: [f64; 3], ws: [f64; 3]) -> (Vec<BigRational>, Vec<BigRational>) {
    let (a, b, c) = (rat(xs[0]), rat(xs[1]), rat(xs[2]));
    let mut z = vec![&c - &b, &a - &c, &b - &a];
    let zero = BigRational::from_integer(0.into());
    if z.iter().find(|v| **v != zero).unwrap() < &zero {
        z.iter_mut().for_each(|v| *v = -v.clone());
    }
    let w: Vec<BigRational> = ws.iter().map(|v| rat(*v)).collect();
    let alpha = w
        .iter()
        .zip(&z)
        .filter(|(_, zj)| **zj > zero)
        .map(|(wj, zj)| wj / zj)
        .min()
        .unwrap();
    let out = w.iter().zip(&z).map(|(wj, zj)| wj - &alpha * zj).collect();
    (w, out)
}

fn rational_moments(xs: [f64; 3], w: &[BigRational]) -> (BigRational, BigRational) {
    let mass = w.iter().cloned().sum();
    let first = w.iter().zip(xs).map(|(wj, x)| wj * rat(x)).sum();
    (mass, first)
}

#[test]
fn elimination_matches_exact_rational_step() {
    let cases = [
        ([0.25, 0.5, 1.0], [0.3, 0.2, 0.5]),
        ([0.0, 0.125, 0.75], [1.0, 2.0, 0.5]),
        ([-1.0, 3.0, 0.5], [0.1, 0.7, 0.2]),
    ];
    for (xs, ws) in cases {
        let (w, exact) = rational_step(xs, ws);
        // exact arithmetic preserves both moments
        assert_eq!(rational_moments(xs, &w), rational_moments(xs, &exact));
        assert_eq!(exact.iter().filter(|v| **v == rat(0.0)).count(), 1);

        let a = Matrix::from_rows(&[vec![1.0; 3], xs.to_vec()]);
        let step = elimination_step(&ws, &a).unwrap();
        for (got, want) in step.weights.iter().zip(&exact) {
            let want = rational_to_f64(want);
            assert!((got - want).abs() <= 1e-15, "{got} vs {want}");
            assert_eq!(*got == 0.0, want == 0.0);
        }
    }
}

fn rational_to_f64(r: &BigRational) -> f64 {
    let (n, d) = (r.numer().to_string(), r.denom().to_string());
    n.parse::<f64>().unwrap() / d.parse::<f64>().unwrap()
}

#[test]
fn step_function_reduces_to_one_atom_per_piece() {
    let mu = discretize(|_| 1.0, &SamplerSpec::grid_1d(1000, 0.0, 1.0).unwrap()).unwrap();
    let f: BasisFn = Arc::new(|x| if x[0] <= 0.5 { 1.0 } else { 2.0 });
    let basis = FunctionBasis::custom(1, vec![f]).unwrap().with_constant();
    let (nu, report) = reduce(&mu, &basis, &ReduceOptions::default()).unwrap();
    assert_eq!(nu.len(), 2);
    assert_eq!(report.final_support, 2);
    let (left, right): (Vec<_>, Vec<_>) = nu.iter().partition(|(p, _)| p.coords()[0] <= 0.5);
    assert_eq!((left.len(), right.len()), (1, 1));
    assert!((left[0].1 - 0.5).abs() < 1e-10);
    assert!((right[0].1 - 0.5).abs() < 1e-10);
}

#[test]
fn quadratic_grid_moments_match_direct_sums() {
    let xs: Vec<f64> = (0..100).map(|i| (i as f64 + 0.5) / 100.0).collect();
    let mu = DiscreteMeasure::from_rows(xs.iter().map(|x| vec![*x]).collect(), vec![0.01; 100]).unwrap();
    let basis = FunctionBasis::unscaled_monomials(2, 1).unwrap();
    let (nu, _) = reduce(&mu, &basis, &ReduceOptions::default()).unwrap();
    assert!(nu.len() <= 3);
    let oracle = [
        xs.iter().map(|_| 0.01).sum::<f64>(),
        xs.iter().map(|x| 0.01 * x).sum::<f64>(),
        xs.iter().map(|x| 0.01 * x * x).sum::<f64>(),
    ];
    for (k, want) in oracle.iter().enumerate() {
        let got: f64 = nu.iter().map(|(p, w)| w * p.coords()[0].powi(k as i32)).sum();
        assert!((got - want).abs() <= 1e-12 * want.abs(), "moment {k}: {got} vs {want}");
    }
}

#[test]
fn report_fields_are_consistent() {
    let s = SamplerSpec::monte_carlo(300, 11, vec![(0.0, 2.0), (-1.0, 1.0)]).unwrap();
    let mu = discretize(|x| 1.0 + x[0], &s).unwrap();
    let basis = FunctionBasis::scaled_monomials(3, &mu.bounding_box()).unwrap();
    let (nu, r) = reduce(&mu, &basis, &ReduceOptions::default()).unwrap();
    assert_eq!(r.initial_support, 300);
    assert_eq!(r.final_support, nu.len());
    assert_eq!(r.rank_used, 10);
    assert!(r.final_support <= r.rank_used.min(r.initial_support));
    assert!(r.iterations <= r.initial_support - r.final_support);
    assert!(r.max_relative_moment_residual <= 1e-9);
}

#[test]
fn rank_deficient_basis_uses_fewer_atoms() {
    // x and 2x span one dimension; with the constant, rank 2
    let xs: Vec<Vec<f64>> = (0..40).map(|i| vec![i as f64 / 39.0]).collect();
    let mu = DiscreteMeasure::uniform(xs.iter().map(|x| richter::Point::new(x.clone()).unwrap()).collect()).unwrap();
    let f: BasisFn = Arc::new(|x| x[0]);
    let g: BasisFn = Arc::new(|x| 2.0 * x[0]);
    let basis = FunctionBasis::custom(1, vec![f, g]).unwrap().with_constant();
    let (nu, r) = reduce(&mu, &basis, &ReduceOptions::default()).unwrap();
    assert_eq!(r.rank_used, 2);
    assert!(nu.len() <= 2);
    let a = eval_matrix(&basis, mu.atoms()).unwrap();
    assert_eq!(numerical_rank(&a), 2);
}

fn arb_measure(max_atoms: usize, dim: usize) -> impl Strategy<Value = DiscreteMeasure> {
    prop::collection::vec(
        (prop::collection::vec(-3.0f64..3.0, dim), 1e-3f64..10.0),
        1..max_atoms,
    )
    .prop_map(|rows| {
        let (atoms, weights): (Vec<_>, Vec<_>) = rows.into_iter().unzip();
        DiscreteMeasure::from_rows(atoms, weights).unwrap()
    })
}

fn arb_case() -> impl Strategy<Value = (DiscreteMeasure, usize)> {
    (1usize..=3, 0usize..=3).prop_flat_map(|(d, n)| (arb_measure(150, d), Just(n)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn reduction_invariants((mu, degree) in arb_case()) {
        let basis = FunctionBasis::scaled_monomials(degree, &mu.bounding_box()).unwrap();
        let opts = ReduceOptions::default();
        let (nu, report) = reduce(&mu, &basis, &opts).unwrap();

        // support bound and report consistency
        prop_assert!(nu.len() <= basis.dim());
        prop_assert!(report.final_support <= report.initial_support.min(report.rank_used));
        prop_assert!(report.iterations <= mu.len() - nu.len());
        // exact positivity
        prop_assert!(nu.weights().iter().all(|w| *w > 0.0));
        // atoms come from the input, bit for bit
        for p in nu.atoms() {
            let found = mu.atoms().iter().any(|q| {
                q.coords().iter().zip(p.coords()).all(|(a, b)| a.to_bits() == b.to_bits())
            });
            prop_assert!(found, "atom {:?} not in input", p);
        }
        // mass and moments preserved
        let mass = mu.total_mass();
        prop_assert!((nu.total_mass() - mass).abs() <= opts.tol * (1.0 + mass));
        let (a, b) = (moments(&mu, &basis).unwrap(), moments(&nu, &basis).unwrap());
        for (x, y) in a.values.iter().zip(&b.values) {
            prop_assert!((x - y).abs() <= opts.tol * (1.0 + x.abs()));
        }
        // idempotence
        let (again, second) = reduce(&nu, &basis, &opts).unwrap();
        prop_assert_eq!(&again, &nu);
        prop_assert_eq!(second.iterations, 0);
    }

    #[test]
    fn custom_basis_bound(mu in arb_measure(120, 2)) {
        let fs: Vec<BasisFn> = vec![
            Arc::new(|x| (x[0] * x[1]).sin()),
            Arc::new(|x| (-x[0] * x[0]).exp()),
            Arc::new(|x| x[1].abs()),
        ];
        let basis = FunctionBasis::custom(2, fs).unwrap();
        let (nu, report) = reduce(&mu, &basis, &ReduceOptions::default()).unwrap();
        prop_assert_eq!(report.support_bound, 4);
        prop_assert!(nu.len() <= 4);
    }

    #[test]
    fn elimination_preserves_products_and_zeroes(
        cols in prop::collection::vec(prop::collection::vec(-2.0f64..2.0, 3), 4..9),
        seed_w in prop::collection::vec(0.01f64..1.0, 9),
    ) {
        let rows: Vec<Vec<f64>> = (0..3).map(|i| cols.iter().map(|c| c[i]).collect()).collect();
        let a = Matrix::from_rows(&rows);
        let w = &seed_w[..cols.len()];
        let step = elimination_step(w, &a).unwrap();
        prop_assert!(!step.zeroed.is_empty());
        prop_assert!(step.weights.iter().all(|v| *v >= 0.0));
        let (before, after) = (a.mul_vec(w), a.mul_vec(&step.weights));
        let scale = a.max_col_norm() * w.iter().sum::<f64>();
        for (x, y) in before.iter().zip(&after) {
            prop_assert!((x - y).abs() <= 1e-12 * scale);
        }
    }
}
