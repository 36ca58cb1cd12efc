mod common;

use common::{gaussian, low_rank, rng};
use proptest::prelude::*;
use shorted::{numerical_rank, penrose_residual, pinv, singular_values, svd, Mat, Mat32, Tol, Tol32};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn svd_reconstructs(seed in any::<u64>(), rows in 0usize..14, cols in 0usize..14) {
        let m = gaussian(&mut rng(seed), rows, cols);
        let f = svd(&m).unwrap();
        let scale = 1.0 + m.norm();
        prop_assert!((&f.reconstruct() - &m).norm() <= 1e-12 * scale);
        let k = f.s.len();
        prop_assert!((&(&f.u.adjoint() * &f.u) - &Mat::identity(k)).max_abs() <= 1e-12);
        prop_assert!((&(&f.vh * &f.vh.adjoint()) - &Mat::identity(k)).max_abs() <= 1e-12);
        prop_assert!(f.s.windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn rank_and_pinv_of_low_rank(seed in any::<u64>(), rows in 1usize..14, cols in 1usize..14, r in 0usize..6) {
        let r = r.min(rows).min(cols);
        let m = low_rank(&mut rng(seed), rows, cols, r);
        let tol = Tol::default();
        prop_assert_eq!(numerical_rank(&m, &tol), r);
        let x = pinv(&m, &tol);
        let scale = (1.0 + m.norm()) * (1.0 + x.norm());
        prop_assert!(penrose_residual(&m, &x) <= 1e-10 * scale * scale);
    }

    #[test]
    fn singular_values_match_vectors_path(seed in any::<u64>(), rows in 1usize..10, cols in 1usize..10) {
        let m = gaussian(&mut rng(seed), rows, cols);
        let a = singular_values(&m);
        let b = svd(&m).unwrap().s;
        for (x, y) in a.iter().zip(&b) {
            prop_assert!((x - y).abs() <= 1e-12 * (1.0 + b[0]));
        }
    }
}

#[test]
fn single_precision_pinv() {
    let m: Mat32 = low_rank(&mut rng(9), 7, 5, 3).cast();
    let tol = Tol32::default();
    assert_eq!(numerical_rank(&m, &tol), 3);
    let x = pinv(&m, &tol);
    assert!(penrose_residual(&m, &x) < 1e-3);
}
