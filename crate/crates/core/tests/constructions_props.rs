use isoperilab_core::constructions::{
    central_symmetrize, cross_polytope, cube, extremal_facet_polytope, extremal_vertex_polytope, l1_sum,
    lindelof_body, simplex_regular, Construction, L1SumSpec,
};
use isoperilab_core::polytope::{iq_circumscribed, HPolytope, Halfspace, Polytope, VPolytope};
use proptest::prelude::*;

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn summand(family: usize, n: usize, scale: f64) -> Construction {
    match family {
        0 => cube(n, scale),
        1 => cross_polytope(n, scale),
        _ => simplex_regular(n),
    }
    .unwrap()
}

fn summands() -> impl Strategy<Value = Vec<Construction>> {
    prop::collection::vec((0usize..3, 1usize..=3, 0.5f64..2.0), 2..=3)
        .prop_filter("total dimension above 5", |s| s.iter().map(|t| t.1).sum::<usize>() <= 5)
        .prop_map(|s| s.into_iter().map(|(f, n, c)| summand(f, n, c)).collect())
}

fn unit(v: Vec<f64>) -> Option<Vec<f64>> {
    let s = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    (s > 1e-3).then(|| v.into_iter().map(|x| x / s).collect())
}

/// Random normals in dimension 2..=4 including ±e_i, so the body is bounded.
fn normals() -> impl Strategy<Value = Vec<Vec<f64>>> {
    (2usize..=4)
        .prop_flat_map(|n| (Just(n), prop::collection::vec(prop::collection::vec(-1.0f64..1.0, n), 1..=8)))
        .prop_filter_map("short direction", |(n, extra)| {
            let mut us = Vec::new();
            for i in 0..n {
                for s in [1.0, -1.0] {
                    let mut e = vec![0.0; n];
                    e[i] = s;
                    us.push(e);
                }
            }
            for v in extra {
                us.push(unit(v)?);
            }
            Some(us)
        })
}

fn simplex_points() -> impl Strategy<Value = VPolytope> {
    (2usize..=3)
        .prop_flat_map(|n| (Just(n), prop::collection::vec(prop::collection::vec(-1.0f64..1.0, n), n + 1)))
        .prop_filter_map("flat simplex", |(n, pts)| {
            let v = VPolytope::new(n, pts).ok()?;
            let p = Polytope::from_vrep(&v).ok()?;
            (p.vertex_count() == n + 1 && p.volume() > 1e-3).then_some(v)
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn l1_sum_closed_forms_match_geometry(parts in summands()) {
        let c = l1_sum(&L1SumSpec::new(parts)).unwrap();
        let p = c.polytope().unwrap();
        prop_assert!(rel(c.closed.volume, p.volume()) <= 1e-9);
        prop_assert!(rel(c.closed.surface_area, p.surface_area()) <= 1e-9);
        prop_assert_eq!(c.closed.facet_count, p.facet_count() as u64);
        prop_assert_eq!(c.closed.vertex_count, p.vertex_count() as u64);
    }

    #[test]
    fn circumscribed_body_iq(us in normals()) {
        let h = lindelof_body(&us).unwrap();
        let p = Polytope::from_hrep(&h).unwrap();
        prop_assert!(rel(iq_circumscribed(&h).unwrap(), p.iq()) <= 1e-9);
    }

    #[test]
    fn circumscribed_body_minimizes_iq(us in normals(), offsets in prop::collection::vec(0.5f64..1.5, 16)) {
        let k0 = Polytope::from_hrep(&lindelof_body(&us).unwrap()).unwrap();
        let hs = us.iter().zip(offsets.iter().cycle()).map(|(u, &b)| Halfspace::new(u.clone(), b).unwrap()).collect();
        let k = Polytope::from_hrep(&HPolytope::new(us[0].len(), hs).unwrap()).unwrap();
        prop_assert!(k.iq() >= k0.iq() - 1e-9);
    }

    #[test]
    fn symmetrization_keeps_half_the_volume(v in simplex_points()) {
        let n = v.dim() as f64;
        let s = central_symmetrize(&v).unwrap();
        prop_assert!(s.volume_ratio.powf(1.0 / n) >= 0.5 - 1e-12);
        prop_assert!(s.body.is_origin_symmetric(1e-9));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn extremal_facet_count(n in 2usize..=4, extra in 1u64..=12) {
        let phi = n as u64 + extra;
        let e = extremal_facet_polytope(n, phi).unwrap();
        prop_assert_eq!(e.construction.polytope().unwrap().facet_count() as u64, phi);
    }

    #[test]
    fn extremal_vertex_count(n in 2usize..=4, extra in 0u64..=6) {
        let beta = 2 * (n as u64 + extra);
        let e = extremal_vertex_polytope(n, beta).unwrap();
        prop_assert_eq!(e.construction.polytope().unwrap().vertex_count() as u64, beta);
    }
}
