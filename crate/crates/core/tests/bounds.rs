mod common;

use common::fixture;
use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;
use rrf_core::{
    gap_ratio, natural_base, rrf_bounds, rrf_estimate, rrf_exact_lp, ConeKind, NominalProblem,
    OracleConfig, SolverConfig,
};

fn problem_strategy() -> impl Strategy<Value = NominalProblem> {
    let cone = prop_oneof![
        (1usize..=5).prop_map(|m| ConeKind::NonnegOrthant { m }),
        (2usize..=5).prop_map(|m| ConeKind::SecondOrderCone { m }),
        (1usize..=3).prop_map(|q| ConeKind::PsdCone { q }),
    ];
    (cone, 1usize..=3).prop_flat_map(|(cone, n)| {
        let m = cone.dim();
        (
            prop::collection::vec(-2.0f64..2.0, n * m),
            prop::collection::vec(-2.0f64..2.0, m),
        )
            .prop_map(move |(a, b)| {
                NominalProblem::new(
                    DMatrix::from_row_slice(m, n, &a),
                    DVector::from_vec(b),
                    cone,
                )
                .unwrap()
            })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn bounds_are_ordered(p in problem_strategy()) {
        let r = rrf_bounds(&p, &SolverConfig::default()).unwrap();
        prop_assert!(r.rrf_lower <= r.rrf_upper);
        prop_assert!(r.rrf_lower >= 0.0);
        if r.dist_hi - r.dist_lo <= 1e-9 {
            let tau = gap_ratio(&natural_base(p.cone));
            prop_assert!(tau * r.rrf_upper <= r.rrf_lower + 1e-9);
        }
        let json = serde_json::to_value(&r).unwrap();
        for key in ["dist_lo", "dist_hi", "rrf_lower", "rrf_upper", "c1", "c2"] {
            prop_assert!(json[key].as_f64().unwrap().is_finite());
        }
    }

    #[test]
    fn lp_bounds_equal_exact_formula(p in problem_strategy()) {
        prop_assume!(matches!(p.cone, ConeKind::NonnegOrthant { .. }));
        let cfg = SolverConfig::default();
        let r = rrf_bounds(&p, &cfg).unwrap();
        let lp = rrf_exact_lp(&p, &cfg).unwrap();
        prop_assert_eq!(r.rrf_lower, lp.lo);
        prop_assert_eq!(r.rrf_upper, lp.hi);
        prop_assert!(r.exact);
    }
}

#[test]
fn oracle_estimate_is_bracketed_by_bounds() {
    let tol_grid = 2e-2;
    for name in ["example21.json", "soc_fixture.json", "sdp_fixture.json"] {
        let p = fixture(name);
        let r = rrf_bounds(&p, &SolverConfig::default()).unwrap();
        let est = rrf_estimate(&p, &OracleConfig::default()).unwrap();
        assert!(
            r.rrf_lower - tol_grid <= est.estimate && est.estimate <= r.rrf_upper + tol_grid,
            "{name}: {} outside [{}, {}]",
            est.estimate,
            r.rrf_lower,
            r.rrf_upper
        );
    }
}
