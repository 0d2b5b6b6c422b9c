use gegenfun::brafman::{first_gf, second_gf, Variant};
use gegenfun::gegenbauer::{gegenbauer_recurrence, ordinary_gf_by_power};
use gegenfun::legendre::{closed_form, legendre_p_real, LegendreIndex};
use gegenfun::verify::{run_many, RunConfig, CATALOG};
use gegenfun::Complex;
use proptest::prelude::*;

#[test]
fn whole_catalog_passes_with_defaults() {
    let reports = run_many(&["all"], &RunConfig::default()).unwrap();
    assert_eq!(reports.len(), CATALOG.len());
    for r in &reports {
        assert!(r.overall_pass, "{} worst {:e}", r.identity_id, r.worst_deviation());
    }
}

#[test]
fn reports_round_trip_through_json() {
    let reports = run_many(&["alt.1", "elliptic"], &RunConfig::default()).unwrap();
    for r in reports {
        let v: serde_json::Value = serde_json::from_str(&r.to_json_line()).unwrap();
        assert_eq!(v["identity_id"], r.identity_id.as_str());
        assert_eq!(v["samples"].as_array().unwrap().len(), r.samples.len());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn power_expansion_matches_recurrence(lambda in 0.05f64..3.0, x in -0.95f64..3.0) {
        let x = Complex::new(x, 0.0);
        let gf = ordinary_gf_by_power(lambda, x, 12);
        let direct = gegenbauer_recurrence(lambda, 12, x);
        for (n, d) in direct.iter().enumerate() {
            prop_assert!((gf.coeff(n) - d).norm() <= 1e-11 * d.norm().max(1.0));
        }
    }

    #[test]
    fn first_gf_variants_agree(lambda in 0.1f64..2.0, gamma in -0.9f64..1.9, x in 0.2f64..0.8) {
        let x = Complex::new(x, 0.0);
        let a = first_gf(lambda, gamma, x, 10, Variant::A).unwrap();
        let b = first_gf(lambda, gamma, x, 10, Variant::B).unwrap();
        prop_assert!(a.deviation(10) < 1e-9);
        prop_assert!(a.rhs.max_mixed_deviation(&b.rhs, 10) < 1e-9);
    }

    #[test]
    fn second_gf_matches_its_series(lambda in 0.1f64..2.0, gamma in -0.9f64..1.9, x in 1.2f64..3.0) {
        let pair = second_gf(lambda, gamma, Complex::new(x, 0.0), 10, Variant::A).unwrap();
        prop_assert!(pair.deviation(10) < 1e-9);
    }

    #[test]
    fn octahedral_closed_form_matches_definition(xi in 0.1f64..2.5, sign in prop::bool::ANY) {
        let mu = if sign { 0.25 } else { -0.25 };
        let idx = LegendreIndex::legendre(-1.0 / 6.0, mu);
        let z = xi.cosh();
        let exact = closed_form(&idx, z).unwrap();
        let series = legendre_p_real(&idx, z).unwrap();
        prop_assert!((exact - series).abs() <= 1e-10 * series.abs());
    }
}
