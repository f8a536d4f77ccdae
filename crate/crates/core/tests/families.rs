use ffr_core::ensembles::{random_set, surface_measure, PointSet, SetDescriptor};
use ffr_core::error::Error;
use ffr_core::field::VectorSpace;
use ffr_core::restriction::{converse_witness, growth_sweep, ExtensionConfig};
use ffr_core::salem::{
    check_interpolated_salem_transform, fit_salem_exponent, measured_sup_exponent,
};
use ffr_core::{Exponent, FFMeasure64};

#[test]
fn hamming_fit_at_twelve() {
    let fit = fit_salem_exponent::<f64>(
        &SetDescriptor::Hamming { d: 4, j: 1 },
        &Exponent::Finite(12.0),
        &[5, 7, 11, 13, 17],
        1 << 24,
    )
    .unwrap();
    assert!((fit.fitted_s - 5.0 / 12.0).abs() <= 0.1, "{fit:?}");
    assert!((fit.predicted_s.unwrap() - 5.0 / 12.0).abs() < 1e-15);
    assert_eq!(fit.field_sizes, vec![5, 7, 11, 13, 17]);
}

#[test]
fn circles_are_salem() {
    let fit = fit_salem_exponent::<f64>(
        &SetDescriptor::Sphere { k: 2, r: 1 },
        &Exponent::Infinity,
        &[5, 7, 11, 13, 17, 19, 23],
        1 << 24,
    )
    .unwrap();
    assert!((fit.fitted_s - 0.5).abs() <= 0.1, "{fit:?}");
}

#[test]
fn family_errors_carry_context() {
    let err = fit_salem_exponent::<f64>(
        &SetDescriptor::Sphere { k: 2, r: 1 },
        &Exponent::Finite(2.0),
        &[2, 3, 5, 7],
        1 << 24,
    )
    .unwrap_err();
    match err {
        Error::Family { family, p, .. } => {
            assert_eq!(family, "sphere");
            assert_eq!(p, 2);
        }
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn hamming_plane_interpolation_constant_is_bounded() {
    let grid: Vec<Exponent<f64>> = [2.0, 3.0, 4.0, 6.0, 8.0, 16.0]
        .into_iter()
        .map(Exponent::Finite)
        .chain([Exponent::Infinity])
        .collect();
    let mut constants = Vec::new();
    for p in [5u64, 7, 11, 13, 17] {
        let set = SetDescriptor::Hamming { d: 2, j: 1 }.build(p).unwrap();
        let mhat = surface_measure::<f64>(&set).unwrap().transform();
        let s_inf = measured_sup_exponent(&mhat, set.cardinality()).unwrap();
        let rep = check_interpolated_salem_transform(&mhat, set.cardinality(), s_inf, &grid).unwrap();
        constants.push(rep.max_constant);
    }
    assert!(constants.iter().all(|&c| c <= 1.0 + 1e-9), "{constants:?}");

    // against the closed-form s_∞ = 1/2 the constant stays bounded as p grows
    let mut with_formula = Vec::new();
    for p in [5u64, 7, 11, 13, 17] {
        let set = SetDescriptor::Hamming { d: 2, j: 1 }.build(p).unwrap();
        let mhat = surface_measure::<f64>(&set).unwrap().transform();
        let rep = check_interpolated_salem_transform(&mhat, set.cardinality(), 0.5, &grid).unwrap();
        with_formula.push(rep.max_constant);
    }
    assert!(with_formula.iter().all(|&c| c <= 3.0), "{with_formula:?}");
}

#[test]
fn converse_witness_lower_bound() {
    // 0 ∉ E: (fμ)^‸ = μ̂ and the left side gains |μ̂(0)|^p = 1
    for p in [5u64, 7, 11] {
        let set = SetDescriptor::Hamming { d: 2, j: 1 }.build(p).unwrap();
        let mu = surface_measure::<f64>(&set).unwrap();
        for p_exp in [2.0, 4.0, 8.0] {
            let c = converse_witness(&mu, &Exponent::Finite(p_exp)).unwrap();
            assert!(!c.origin_in_support);
            let expect = (1.0 + c.scaled_average.powf(p_exp)).powf(1.0 / p_exp);
            assert!((c.extension_norm - expect).abs() <= 1e-10 * expect);
        }
    }
    // 0 ∈ E: both sides are only compared, never asserted equal
    let space = VectorSpace::of(7, 2).unwrap();
    for seed in 0..20 {
        let set = random_set(space, 0.4, seed).unwrap();
        let with_origin = PointSet::from_indices(space, set.indices().into_iter().chain([0])).unwrap();
        let mu = surface_measure::<f64>(&with_origin).unwrap();
        let c = converse_witness(&mu, &Exponent::Finite(4.0)).unwrap();
        assert!(c.origin_in_support);
        assert!(c.extension_norm.is_finite() && c.scaled_average.is_finite());
    }
}

#[test]
fn full_space_extension_norm_is_one() {
    let cfg = ExtensionConfig {
        seeds: vec![0, 1],
        ..Default::default()
    };
    for q in [2.0, 4.0] {
        let sweep = growth_sweep(&SetDescriptor::FullSpace { d: 1 }, q, &[5, 7, 11, 13], &cfg, 1 << 24).unwrap();
        for row in &sweep.rows {
            assert!((row.lower_bound - 1.0).abs() <= 1e-9, "{row:?}");
        }
        assert!(sweep.fitted_growth_exponent.abs() <= 1e-9);
    }
    let single = growth_sweep(&SetDescriptor::FullSpace { d: 1 }, 2.0, &[5], &cfg, 1 << 24).unwrap_err();
    assert!(matches!(single, Error::TooFewFieldSizes { required: 4, got: 1 }));
    assert!(single.to_string().contains("4 field sizes"));
}

#[test]
fn dirac_measure_profile() {
    let space = VectorSpace::of(11, 2).unwrap();
    let mu = FFMeasure64::dirac(space, &space.zero()).unwrap();
    let prof = ffr_core::salem::profile(&mu, &[Exponent::Finite(2.0)]).unwrap();
    let expect = (120.0f64 / 121.0).sqrt();
    assert!((prof.entries[0].norm - expect).abs() < 1e-12);
}
