use nullscri_core::asymptotics::{admissible, admissible_inhom, decay_rate, extended_admissible, fit_points, Boundary, WeightTriple};
use nullscri_core::evolve::GridField;
use nullscri_core::geometry::{Geometry, Grid, NullGrid};
use proptest::prelude::*;
use std::sync::{Arc, OnceLock};

fn grid() -> &'static Arc<Grid> {
    static G: OnceLock<Arc<Grid>> = OnceLock::new();
    G.get_or_init(|| Grid::new(NullGrid::with_ratios(-2.0, 1.0, -1e6, 1e6, 1.05, 1.05), Geometry::Minkowski).unwrap())
}

fn weight() -> impl Strategy<Value = WeightTriple> {
    (-1.0f64..3.0, -2.0f64..4.0, -3.0f64..2.0).prop_map(|(m, z, p)| WeightTriple::new(m, z, p))
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 128, rng_seed: proptest::test_runner::RngSeed::Fixed(5), ..ProptestConfig::default() })]

    #[test]
    fn exact_data_is_recovered_on_any_window(a in -2.0f64..2.0, b in -2.0f64..2.0, c in -2.0f64..2.0, lo in 5.0f64..50.0, span in 20.0f64..2000.0) {
        let basis = [(1.0, 0), (2.0, 1), (2.0, 0)];
        let rs: Vec<f64> = (0..60).map(|i| lo * span.powf(i as f64 / 59.0)).collect();
        let r_ref = lo;
        let vals: Vec<f64> = rs.iter().map(|&r| a / r + b * (r / r_ref).ln() / (r * r) + c / (r * r)).collect();
        let (coeffs, _, rms, _) = fit_points(&rs, &vals, &basis, r_ref).unwrap();
        prop_assert!((coeffs[0] - a).abs() < 1e-9 && (coeffs[1] - b).abs() < 1e-9 && (coeffs[2] - c).abs() < 1e-9, "{coeffs:?}");
        prop_assert!(rms < 1e-12);
    }

    #[test]
    fn decay_rate_ignores_a_positive_factor(k in 1e-3f64..1e3, q in 0.5f64..3.0) {
        let f = GridField::from_fn(grid().clone(), "f", |i, j| grid().r(i, j).powf(-q)).unwrap();
        let g = f.map("kf", |_, _, x| k * x).unwrap();
        for b in [Boundary::ScriMinus, Boundary::I0, Boundary::ScriPlus] {
            let (rf, rg) = (decay_rate(&f, b).unwrap(), decay_rate(&g, b).unwrap());
            prop_assert!((rf - rg).abs() <= 1e-9 * rf.abs().max(1.0), "{b:?}: {rf} vs {rg}");
        }
    }

    #[test]
    fn inhomogeneous_weights_are_extended(a in weight(), af in weight()) {
        if admissible_inhom(a, af) {
            prop_assert!(extended_admissible(a, af));
        }
        if extended_admissible(a, af) {
            prop_assert!(admissible(a));
        }
    }
}

#[test]
fn decay_rate_of_inverse_radius() {
    let f = GridField::from_fn(grid().clone(), "f", |i, j| 1.0 / grid().r(i, j)).unwrap();
    let zero = GridField::zeros(grid().clone(), "zero");
    assert_eq!(decay_rate(&zero, Boundary::I0).unwrap(), f64::INFINITY);
    let rate = decay_rate(&f, Boundary::I0).unwrap();
    assert!(rate.is_finite() && rate > 0.0, "{rate}");
}
