use isoperilab_core::constructions::{cross_polytope, cube, simplex_regular};
use isoperilab_core::numkit::GenMatrix;
use isoperilab_core::polytope::{
    euclidean_ball_iq, facet_enumeration, mc_volume, vertex_enumeration, HPolytope, Halfspace, Polytope,
};
use proptest::prelude::*;
use proptest::test_runner::RngSeed;

/// Origin-symmetric body from `k` random ± pairs, `n ≤ k ≤ 10`.
fn symmetric_body() -> impl Strategy<Value = HPolytope> {
    (2usize..=5)
        .prop_flat_map(|n| (Just(n), n..=10))
        .prop_flat_map(|(n, k)| {
            (Just(n), prop::collection::vec((prop::collection::vec(-1.0f64..1.0, n), 0.5f64..1.5), k))
        })
        .prop_filter_map("degenerate directions", |(n, pairs)| {
            let mut hs = Vec::new();
            for (a, b) in pairs {
                let s = a.iter().map(|x| x * x).sum::<f64>().sqrt();
                if s < 1e-3 {
                    return None;
                }
                let u: Vec<f64> = a.iter().map(|x| x / s).collect();
                hs.push(Halfspace::new(u.iter().map(|x| -x).collect(), b).ok()?);
                hs.push(Halfspace::new(u, b).ok()?);
            }
            let h = HPolytope::new(n, hs).ok()?;
            vertex_enumeration(&h).ok()?;
            Some(h)
        })
}

fn map_for(n: usize) -> impl Strategy<Value = GenMatrix> {
    prop::collection::vec(-1.0f64..1.0, n * n).prop_filter_map("near-singular map", move |d| {
        let mut m = GenMatrix::new(n, n, d).unwrap();
        for i in 0..n {
            m.set(i, i, m.get(i, i) + 1.5);
        }
        (m.det().ok()?.abs() > 0.05).then_some(m)
    })
}

fn with_map() -> impl Strategy<Value = (HPolytope, GenMatrix)> {
    symmetric_body().prop_flat_map(|h| {
        let n = h.dim();
        (Just(h), map_for(n))
    })
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn vertex_facet_round_trip(h in symmetric_body()) {
        let n = h.dim();
        let (v, incidence) = vertex_enumeration(&h).unwrap();
        let facets = facet_enumeration(&v).unwrap();
        let matches = |hs: &Halfspace, normal: &[f64], offset: f64| {
            hs.normal.iter().zip(normal).all(|(a, b)| (a - b).abs() <= 1e-8) && (hs.offset - offset).abs() <= 1e-8
        };
        for f in &facets {
            prop_assert!(h.halfspaces().iter().any(|hs| matches(hs, &f.normal, f.offset)));
        }
        for (hs, inc) in h.halfspaces().iter().zip(&incidence) {
            let found = facets.iter().any(|f| matches(hs, &f.normal, f.offset));
            prop_assert_eq!(found, inc.len() >= n);
        }
    }

    #[test]
    fn volume_scales_with_determinant((h, m) in with_map()) {
        let p = Polytope::from_hrep(&h).unwrap();
        let q = p.apply_map(&m).unwrap();
        prop_assert!(rel(q.volume(), m.det().unwrap().abs() * p.volume()) <= 1e-9);
    }

    #[test]
    fn surface_area_matches_pushforward((h, m) in with_map()) {
        let p = Polytope::from_hrep(&h).unwrap();
        let q = p.apply_map(&m).unwrap();
        let pushed = p.area_measure().pushforward(&m).unwrap();
        prop_assert!(rel(pushed.total_mass(), q.surface_area()) <= 1e-9);
    }

    #[test]
    fn iq_is_bounded_by_ball_and_inradius(h in symmetric_body()) {
        let p = Polytope::from_hrep(&h).unwrap();
        let n = h.dim() as f64;
        prop_assert!(p.iq() >= euclidean_ball_iq(h.dim()) * (1.0 - 1e-12));
        prop_assert!(p.iq() <= n / h.inradius_origin() * p.volume().powf(1.0 / n) * (1.0 + 1e-9));
    }

    #[test]
    fn covariance_trace_is_surface_area(h in symmetric_body()) {
        let p = Polytope::from_hrep(&h).unwrap();
        prop_assert!(rel(p.area_measure().covariance().trace(), p.surface_area()) <= 1e-9);
    }
}

proptest! {
    #![proptest_config(ProptestConfig { rng_seed: RngSeed::Fixed(11), ..ProptestConfig::with_cases(12) })]

    #[test]
    fn mc_volume_brackets_exact(family in 0usize..3, n in 2usize..=4, seed in any::<u64>()) {
        let c = match family {
            0 => cube(n, 1.0),
            1 => cross_polytope(n, 1.0),
            _ => simplex_regular(n),
        }
        .unwrap();
        let h = c.hrep.unwrap();
        let exact = Polytope::from_hrep(&h).unwrap().volume();
        let est = mc_volume(&h, 200_000, seed).unwrap();
        prop_assert!((est.mean - exact).abs() <= 4.0 * est.std_error + 1e-12 * exact, "{} vs {exact} ± {}", est.mean, est.std_error);
    }
}
