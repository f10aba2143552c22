use super::*;
use crate::constructions::{cross_polytope, cube};
use crate::positions::slab_polytope;

fn cube_tf(n: usize) -> (HPolytope, TestFunction) {
    let (dec, bk) = bl_transform(cube(n, 1.0).unwrap().hrep.as_ref().unwrap()).unwrap();
    (bk, TestFunction::from_decomposition(&dec))
}

#[test]
fn gradient_matches_finite_differences() {
    let tf = TestFunction::new(
        vec![0.5, 0.75, 0.75],
        vec![vec![1.0, 0.0], vec![0.6, 0.8], vec![-0.6, 0.8]],
    )
    .unwrap();
    let x = [0.3, -0.2];
    let g = phi_grad(&tf, &x);
    let h = 1e-6;
    for k in 0..2 {
        let mut a = x;
        let mut b = x;
        a[k] += h;
        b[k] -= h;
        let fd = (phi_eval(&tf, &a) - phi_eval(&tf, &b)) / (2.0 * h);
        assert!((fd - g[k]).abs() < 1e-8, "{fd} vs {}", g[k]);
    }
}

#[test]
fn segment_gives_five_halves() {
    let (bk, tf) = cube_tf(1);
    let r = rayleigh_bound(&bk, &tf, 0, 0).unwrap();
    assert!(r.exact);
    assert!((r.lambda_bound - 2.5).abs() < 1e-13);
}

#[test]
fn square_gives_five() {
    let (bk, tf) = cube_tf(2);
    let r = rayleigh_bound(&bk, &tf, 0, 0).unwrap();
    assert!(r.exact && r.halfwidth == 0.0);
    assert!((r.lambda_bound - 5.0).abs() < 1e-12, "{}", r.lambda_bound);
}

#[test]
fn cube_monte_carlo_brackets_exact_value() {
    let (bk, tf) = cube_tf(3);
    let r = rayleigh_bound(&bk, &tf, 200_000, 7).unwrap();
    assert!(!r.exact && r.halfwidth > 0.0);
    assert!((r.lambda_bound - 7.5).abs() <= r.halfwidth, "{} ± {}", r.lambda_bound, r.halfwidth);
    // same seed, same answer
    assert_eq!(r, rayleigh_bound(&bk, &tf, 200_000, 7).unwrap());
}

#[test]
fn scaling_law() {
    let (bk, tf) = cube_tf(2);
    let rep = scaling_law_check(&bk, &tf, 3.0, 0, 0).unwrap();
    assert!(rep.holds && (rep.ratio - 9.0).abs() < 1e-10);
    let (bk, tf) = cube_tf(3);
    let rep = scaling_law_check(&bk, &tf, 0.5, 50_000, 1).unwrap();
    assert!(rep.holds && (rep.ratio - 0.25).abs() < 1e-3);
}

#[test]
fn bound_dominates_box_eigenvalue() {
    for n in 1..=2 {
        let (bk, tf) = cube_tf(n);
        let r = rayleigh_bound(&bk, &tf, 0, 0).unwrap();
        assert!(r.lambda_bound >= box_lambda_reference(&vec![2.0; n]).unwrap());
    }
    assert!(box_lambda_reference(&[1.0, 0.0]).is_err());
}

#[test]
fn certificates() {
    let c = spectral_certificate(cube(2, 1.0).unwrap().hrep.as_ref().unwrap(), 0, 0).unwrap();
    assert!(c.passes && c.exact && (c.lambda_bound - 5.0).abs() < 1e-12 && c.five_m == 10.0);
    let hex = slab_polytope(&[vec![1.0, 0.0], vec![0.0, 1.0], vec![1.0, 1.0]]).unwrap();
    let c = spectral_certificate(&hex, 0, 0).unwrap();
    assert!(c.passes && c.lambda_bound <= 15.0 && c.vol_bound_lhs <= c.vol_bound_rhs);
    let c = spectral_certificate(cross_polytope(3, 1.0).unwrap().hrep.as_ref().unwrap(), 100_000, 3).unwrap();
    assert!(c.passes, "{c:?}");
    let j = c.to_json();
    for key in ["lambda_bound", "halfwidth", "five_m", "vol_bound_lhs", "vol_bound_rhs", "samples", "seed"] {
        assert!(j.get(key).is_some());
    }
}

#[test]
fn dimension_mismatch_is_rejected() {
    let (bk, _) = cube_tf(2);
    let (_, tf) = cube_tf(3);
    assert!(matches!(rayleigh_bound(&bk, &tf, 10, 0), Err(Error::Input(_))));
}
