mod common;

use common::{gaussian, rng, subspace};
use rand::Rng;
use shorted::decompose;

#[test]
fn round_trip_on_500_triples() {
    let mut r = rng(11);
    for case in 0..500 {
        let dom = r.random_range(1..=12);
        let cod = r.random_range(1..=12);
        // cycle through the extremes 0 and full
        let km = match case % 4 {
            0 => 0,
            1 => dom,
            _ => r.random_range(0..=dom),
        };
        let kn = match case % 3 {
            0 => cod,
            1 => 0,
            _ => r.random_range(0..=cod),
        };
        let t = gaussian(&mut r, cod, dom);
        let m = subspace(&mut r, dom, km);
        let n = subspace(&mut r, cod, kn);
        let blk = decompose(&t, &m, &n).unwrap();
        assert_eq!(blk.a.shape(), (kn, km));
        assert_eq!(blk.d.shape(), (cod - kn, dom - km));
        let err = (&blk.reassemble() - &t).norm();
        assert!(err <= 1e-12 * t.norm(), "case {case}: {err:e}");

        let adj = decompose(&t.adjoint(), &n, &m).unwrap();
        let scale = 1e-12 * (1.0 + t.norm());
        assert!((&adj.a - &blk.a.adjoint()).max_abs() <= scale);
        assert!((&adj.b - &blk.c.adjoint()).max_abs() <= scale);
        assert!((&adj.c - &blk.b.adjoint()).max_abs() <= scale);
        assert!((&adj.d - &blk.d.adjoint()).max_abs() <= scale);
    }
}
