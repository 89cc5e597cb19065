use std::f64::consts::{E, TAU};

use nalgebra::{DMatrix, SymmetricEigen};
use ndarray::{array, Array1, Array2};
use proptest::prelude::*;
use rffkit::kernels::{
    eval_exact, gram_matrix, mc_identity_check, sparse_subset_average, FeatureMap, GramSource, KernelSpec, Projection,
};
use rffkit::verify::{median_and_p90, unit_ball_pairs};
use rffkit::Error;

fn dense(map: &FeatureMap) -> &Array2<f64> {
    match map.projection() {
        Projection::Dense(omega) => omega,
        Projection::Sparse { .. } => panic!("expected a dense projection"),
    }
}

#[test]
fn gaussian_entries_have_variance_inverse_sigma_squared() {
    let map = FeatureMap::sample(&KernelSpec::gaussian(2.0).unwrap(), 5, 1000, 7).unwrap();
    let omega = dense(&map);
    let n = omega.len() as f64;
    let mean = omega.sum() / n;
    let var = omega.iter().map(|w| (w - mean) * (w - mean)).sum::<f64>() / (n - 1.0);
    assert!((var - 0.25).abs() <= 0.025, "variance {var}");
}

#[test]
fn laplacian_half_mass_within_scale() {
    let lambda = 1.0;
    let map = FeatureMap::sample(&KernelSpec::laplacian(lambda).unwrap(), 1, 10_000, 3).unwrap();
    let inside = dense(&map).iter().filter(|w| w.abs() <= lambda).count() as f64 / 10_000.0;
    assert!((inside - 0.5).abs() <= 0.02, "fraction {inside}");
}

#[test]
fn sparse_rows_have_exactly_k_nonzeros() {
    let map = FeatureMap::sample(&KernelSpec::sparse_gaussian(1.0, 2).unwrap(), 10, 100, 1).unwrap();
    for slot in 0..100 {
        let row = map.omega_row(slot);
        assert_eq!(row.iter().filter(|w| **w != 0.0).count(), 2);
        let support = map.support(slot);
        assert_eq!(support.len(), 2);
        assert!(support[0] < support[1] && support[1] < 10);
    }
}

#[test]
fn sparse_kernel_needs_k_at_most_d() {
    let spec = KernelSpec::sparse_gaussian(1.0, 4).unwrap();
    assert!(FeatureMap::sample(&spec, 3, 10, 0).is_err());
    assert!(eval_exact(&spec, &[0.0; 3], &[1.0; 3]).is_err());
}

#[test]
fn enumeration_cap_is_enforced() {
    let spec = KernelSpec::sparse_gaussian(1.0, 10).unwrap();
    let x = vec![0.0; 40];
    match eval_exact(&spec, &x, &x) {
        Err(Error::EnumerationCap { subsets, cap }) => {
            assert!(subsets > cap);
            assert_eq!(cap, 1_000_000);
        }
        other => panic!("expected enumeration cap error, got {other:?}"),
    }
    // binom(20, 10) = 184756 is under the cap.
    assert!(eval_exact(&KernelSpec::sparse_gaussian(1.0, 10).unwrap(), &x[..20], &x[..20]).is_ok());
}

#[test]
fn mismatched_dimensions_are_rejected() {
    let spec = KernelSpec::gaussian(1.0).unwrap();
    assert!(matches!(eval_exact(&spec, &[1.0, 2.0], &[1.0]), Err(Error::DimensionMismatch { .. })));
    let map = FeatureMap::sample(&spec, 3, 8, 0).unwrap();
    assert!(matches!(map.apply(Array2::zeros((2, 4)).view()), Err(Error::DimensionMismatch { .. })));
    assert!(map.approx_kernel(&[0.0; 2], &[0.0; 2]).is_err());
}

#[test]
fn zero_row_gives_maximal_feature() {
    let d_features = 4;
    let map = FeatureMap::from_parts(
        KernelSpec::gaussian(1.0).unwrap(),
        2,
        0,
        Projection::Dense(Array2::zeros((d_features, 2))),
        Array1::zeros(d_features),
        vec![0; d_features],
    )
    .unwrap();
    let z = map.apply(array![[3.0, -1.0]].view()).unwrap();
    let expected = (2.0 / d_features as f64).sqrt();
    assert!(z.iter().all(|&v| v == expected));
}

#[test]
fn from_parts_rejects_bad_phase() {
    let r = FeatureMap::from_parts(
        KernelSpec::gaussian(1.0).unwrap(),
        1,
        0,
        Projection::Dense(Array2::zeros((1, 1))),
        array![TAU],
        vec![0],
    );
    assert!(r.is_err());
}

#[test]
fn single_feature_kernel_is_product_of_cosines() {
    let map = FeatureMap::sample(&KernelSpec::gaussian(1.3).unwrap(), 3, 1, 11).unwrap();
    let (x, y) = ([0.2, -0.4, 1.0], [0.5, 0.1, -0.3]);
    let px = map.pre_activation(0, &ndarray::ArrayView1::from(&x));
    let py = map.pre_activation(0, &ndarray::ArrayView1::from(&y));
    let expected = 2.0 * px.cos() * py.cos();
    assert!((map.approx_kernel(&x, &y).unwrap() - expected).abs() < 1e-15);
}

#[test]
fn apply_matches_scalar_formula() {
    for spec in [KernelSpec::gaussian(0.7).unwrap(), KernelSpec::sparse_gaussian(1.0, 2).unwrap()] {
        let map = FeatureMap::sample(&spec, 4, 16, 5).unwrap();
        let x = array![[0.1, 0.2, -0.3, 0.9], [1.5, -2.0, 0.0, 0.4]];
        let z = map.apply(x.view()).unwrap();
        for n in 0..2 {
            for i in 0..16 {
                let w = map.omega_row(i);
                let dot: f64 = (0..4).map(|j| w[j] * x[[n, j]]).sum();
                let expected = (2.0f64 / 16.0).sqrt() * (dot + map.phases()[i]).cos();
                assert!((z[[n, i]] - expected).abs() < 1e-14);
            }
        }
    }
}

#[test]
fn gaussian_approximation_at_4096_features() {
    let spec = KernelSpec::gaussian(1.0).unwrap();
    let map = FeatureMap::sample(&spec, 10, 4096, 2024).unwrap();
    for (x, y) in unit_ball_pairs(10, 100, 9) {
        let err = (map.approx_kernel(&x, &y).unwrap() - eval_exact(&spec, &x, &y).unwrap()).abs();
        assert!(err < 0.1, "error {err}");
    }
}

#[test]
fn median_error_over_resamplings_decreases() {
    let spec = KernelSpec::gaussian(1.0).unwrap();
    let pairs = unit_ball_pairs(10, 5, 17);
    let mut medians = Vec::new();
    for features in [256, 1024, 4096] {
        let mut errors = Vec::new();
        for r in 0..50u64 {
            let map = FeatureMap::sample(&spec, 10, features, 1000 + r).unwrap();
            for (x, y) in &pairs {
                errors.push((map.approx_kernel(x, y).unwrap() - eval_exact(&spec, x, y).unwrap()).abs());
            }
        }
        medians.push(median_and_p90(&errors).0);
    }
    assert!(medians[0] > medians[1] && medians[1] > medians[2], "{medians:?}");
}

#[test]
fn identity_on_equal_points() {
    for spec in [KernelSpec::gaussian(1.0).unwrap(), KernelSpec::laplacian(2.0).unwrap()] {
        let x = [0.3, -0.2, 0.5];
        let mc = mc_identity_check(&spec, &x, &x, 10_000, 4).unwrap();
        assert!(mc.within(1.0, 4.0), "{spec}: {mc:?}");
    }
}

#[test]
fn identity_at_closed_form_points() {
    // Gaussian σ = 1 with squared distance 2.
    let g = mc_identity_check(&KernelSpec::gaussian(1.0).unwrap(), &[0.0, 0.0], &[1.0, 1.0], 100_000, 8).unwrap();
    assert!(g.within(1.0 / E, 4.0), "{g:?}");
    // Laplacian λ = 0.5 with l1 distance 2.
    let l = mc_identity_check(&KernelSpec::laplacian(0.5).unwrap(), &[0.0, 0.0], &[1.5, -0.5], 100_000, 8).unwrap();
    assert!(l.within(1.0 / E, 4.0), "{l:?}");
}

#[test]
fn identity_needs_enough_samples() {
    assert!(mc_identity_check(&KernelSpec::gaussian(1.0).unwrap(), &[0.0], &[1.0], 99, 0).is_err());
}

#[test]
fn sparse_enumeration_matches_subset_sampling() {
    let spec = KernelSpec::sparse_gaussian(1.0, 2).unwrap();
    let x = [0.3, -0.8, 0.1, 0.9, -0.4];
    let y = [-0.5, 0.2, 0.7, 0.0, 0.6];
    let exact = eval_exact(&spec, &x, &y).unwrap();
    let mc = sparse_subset_average(1.0, 2, &x, &y, 100_000, 21).unwrap();
    assert!(mc.within(exact, 4.0), "exact {exact}, {mc:?}");
}

#[test]
fn single_point_gram() {
    let g = gram_matrix(GramSource::Exact(&KernelSpec::laplacian(1.0).unwrap()), array![[0.4, 0.2]].view()).unwrap();
    assert_eq!(g, array![[1.0]]);
}

fn random_points(n: usize, d: usize, seed: u64) -> Array2<f64> {
    let pairs = unit_ball_pairs(d, n.div_ceil(2), seed);
    let mut x = Array2::zeros((n, d));
    for (i, row) in pairs.iter().flat_map(|(a, b)| [a, b]).take(n).enumerate() {
        x.row_mut(i).assign(&Array1::from(row.clone()));
    }
    x * 2.0
}

fn min_eigenvalue(g: &Array2<f64>) -> f64 {
    let n = g.nrows();
    let m = DMatrix::from_fn(n, n, |i, j| g[[i, j]]);
    SymmetricEigen::new(m).eigenvalues.iter().copied().fold(f64::INFINITY, f64::min)
}

#[test]
fn exact_grams_are_positive_semidefinite() {
    let x = random_points(50, 4, 12);
    for spec in [
        KernelSpec::gaussian(1.0).unwrap(),
        KernelSpec::laplacian(0.7).unwrap(),
        KernelSpec::sparse_gaussian(0.8, 2).unwrap(),
    ] {
        let g = gram_matrix(GramSource::Exact(&spec), x.view()).unwrap();
        assert!(g.diag().iter().all(|&v| v == 1.0));
        assert_eq!(g, g.t());
        let min = min_eigenvalue(&g);
        assert!(min >= -1e-8, "{spec}: min eigenvalue {min}");
    }
}

#[test]
fn approximate_gram_approaches_exact() {
    let spec = KernelSpec::gaussian(1.0).unwrap();
    let x = random_points(40, 3, 99);
    let exact = gram_matrix(GramSource::Exact(&spec), x.view()).unwrap();
    let dist: Vec<f64> = [64, 256, 1024]
        .iter()
        .map(|&features| {
            let map = FeatureMap::sample(&spec, 3, features, 5).unwrap();
            let approx = gram_matrix(GramSource::Approx(&map), x.view()).unwrap();
            let z = map.apply(x.view()).unwrap();
            let zz = z.dot(&z.t());
            assert!(approx.iter().zip(&zz).all(|(a, b)| (a - b).abs() < 1e-14));
            (&approx - &exact).mapv(|v| v * v).sum().sqrt()
        })
        .collect();
    assert!(dist[0] > dist[1] && dist[1] > dist[2], "{dist:?}");
}

#[test]
fn gram_size_guard() {
    let x = Array2::zeros((5001, 1));
    let r = gram_matrix(GramSource::Exact(&KernelSpec::gaussian(1.0).unwrap()), x.view());
    assert!(matches!(r, Err(Error::SizeGuard { .. })));
}

fn spec_strategy() -> impl Strategy<Value = KernelSpec> {
    prop_oneof![
        (0.1f64..5.0).prop_map(|sigma| KernelSpec::Gaussian { sigma }),
        (0.1f64..5.0).prop_map(|lambda| KernelSpec::Laplacian { lambda }),
        (0.1f64..5.0, 1usize..=4).prop_map(|(sigma, k)| KernelSpec::SparseGaussian { sigma, k }),
    ]
}

fn pair_strategy() -> impl Strategy<Value = (Vec<f64>, Vec<f64>, Vec<f64>)> {
    (4usize..=7).prop_flat_map(|d| {
        (
            prop::collection::vec(-3.0f64..3.0, d),
            prop::collection::vec(-3.0f64..3.0, d),
            prop::collection::vec(-10.0f64..10.0, d),
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn kernel_is_symmetric_and_normalized(spec in spec_strategy(), (x, y, _) in pair_strategy()) {
        prop_assert_eq!(eval_exact(&spec, &x, &y).unwrap(), eval_exact(&spec, &y, &x).unwrap());
        prop_assert_eq!(eval_exact(&spec, &x, &x).unwrap(), 1.0);
    }

    #[test]
    fn kernel_is_shift_invariant(spec in spec_strategy(), (x, y, t) in pair_strategy()) {
        let xs: Vec<f64> = x.iter().zip(&t).map(|(a, b)| a + b).collect();
        let ys: Vec<f64> = y.iter().zip(&t).map(|(a, b)| a + b).collect();
        let diff = (eval_exact(&spec, &xs, &ys).unwrap() - eval_exact(&spec, &x, &y).unwrap()).abs();
        prop_assert!(diff <= 1e-12, "difference {}", diff);
    }

    #[test]
    fn values_are_bounded(spec in spec_strategy(), (x, y, _) in pair_strategy(), seed in any::<u64>(), features in 1usize..64) {
        let k = eval_exact(&spec, &x, &y).unwrap();
        prop_assert!(k > 0.0 || (x != y && k == 0.0));
        prop_assert!(k <= 1.0);
        let map = FeatureMap::sample(&spec, x.len(), features, seed).unwrap();
        let a = map.approx_kernel(&x, &y).unwrap();
        prop_assert!(a.abs() <= 2.0 + 1e-12);
        let s = map.approx_kernel(&x, &x).unwrap();
        prop_assert!((0.0..=2.0 + 1e-12).contains(&s));
        let bound = (2.0 / features as f64).sqrt();
        let z = map.apply(Array2::from_shape_vec((1, x.len()), x.clone()).unwrap().view()).unwrap();
        prop_assert!(z.iter().all(|v| v.abs() <= bound));
    }

    #[test]
    fn sampling_is_deterministic(spec in spec_strategy(), seed in any::<u64>(), features in 1usize..32) {
        let a = FeatureMap::sample(&spec, 6, features, seed).unwrap();
        let b = FeatureMap::sample(&spec, 6, features, seed).unwrap();
        prop_assert_eq!(&a, &b);
        prop_assert!(a.phases().iter().all(|p| (0.0..TAU).contains(p)));
        prop_assert!(a.generations().iter().all(|&g| g == 0));
    }

    #[test]
    fn adding_features_keeps_earlier_slots(spec in spec_strategy(), seed in any::<u64>(), features in 1usize..32) {
        let small = FeatureMap::sample(&spec, 6, features, seed).unwrap();
        let large = FeatureMap::sample(&spec, 6, features + 7, seed).unwrap();
        for slot in 0..features {
            prop_assert_eq!(small.omega_row(slot), large.omega_row(slot));
            prop_assert_eq!(small.phases()[slot], large.phases()[slot]);
        }
    }
}
