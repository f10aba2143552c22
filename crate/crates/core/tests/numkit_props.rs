use isoperilab_core::numkit::{normalize_det_one, psd_power, schatten1, sym_eig, GenMatrix, SymMatrix};
use proptest::prelude::*;

fn square(max: usize) -> impl Strategy<Value = (usize, Vec<f64>)> {
    (1..=max).prop_flat_map(|n| (Just(n), prop::collection::vec(-1.0f64..1.0, n * n)))
}

fn symmetric(n: usize, data: &[f64]) -> SymMatrix {
    let mut s = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            s[i * n + j] = data[i * n + j] + data[j * n + i];
        }
    }
    SymMatrix::new(n, s).unwrap()
}

fn psd(n: usize, data: &[f64]) -> SymMatrix {
    let m = GenMatrix::new(n, n, data.to_vec()).unwrap();
    let mut g = m.gram();
    for i in 0..n {
        g.add_outer(0.1, &(0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect::<Vec<_>>());
    }
    g
}

/// Orthogonal factor of a random matrix by Gram-Schmidt.
fn orthogonal(n: usize, data: &[f64]) -> GenMatrix {
    let mut cols: Vec<Vec<f64>> = Vec::new();
    for j in 0..n {
        let mut v: Vec<f64> = (0..n).map(|i| data[i * n + j] + if i == j { 2.0 } else { 0.0 }).collect();
        for c in &cols {
            let d: f64 = v.iter().zip(c).map(|(a, b)| a * b).sum();
            v.iter_mut().zip(c).for_each(|(a, b)| *a -= d * b);
        }
        let s = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        cols.push(v.into_iter().map(|x| x / s).collect());
    }
    GenMatrix::from_columns(&cols).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn eigen_reconstruction((n, data) in square(8)) {
        let s = symmetric(n, &data);
        let e = sym_eig(&s).unwrap();
        let r = e.reconstruct_with(|l| l);
        let scale = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).map(|(i, j)| s.get(i, j).abs()).fold(0.0, f64::max);
        prop_assert!(r.max_abs_diff(&s) <= 1e-10 * scale.max(1e-300));
    }

    #[test]
    fn powers_add((n, data) in square(6), a in -1.5f64..1.5, b in -1.5f64..1.5) {
        let s = psd(n, &data);
        let lhs = psd_power(&s, a).unwrap().to_gen().matmul(&psd_power(&s, b).unwrap().to_gen()).unwrap();
        let rhs = psd_power(&s, a + b).unwrap().to_gen();
        prop_assert!(lhs.max_abs_diff(&rhs) <= 1e-9 * rhs.max_abs().max(1.0));
    }

    #[test]
    fn schatten_is_orthogonally_invariant((n, data) in square(6), u in prop::collection::vec(-1.0f64..1.0, 36), v in prop::collection::vec(-1.0f64..1.0, 36)) {
        let m = GenMatrix::new(n, n, data).unwrap();
        let (u, v) = (orthogonal(n, &u[..n * n]), orthogonal(n, &v[..n * n]));
        let rotated = u.matmul(&m).unwrap().matmul(&v).unwrap();
        let s = schatten1(&m).unwrap();
        prop_assert!((schatten1(&rotated).unwrap() - s).abs() <= 1e-9 * s.max(1.0));
    }

    #[test]
    fn normalized_determinant_is_one((n, data) in square(6)) {
        let m = GenMatrix::new(n, n, data).unwrap();
        prop_assume!(m.det().unwrap() > 1e-3);
        prop_assert!((normalize_det_one(&m).unwrap().det().unwrap() - 1.0).abs() <= 1e-12);
    }
}
