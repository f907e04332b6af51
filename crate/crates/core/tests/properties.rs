mod common;

use common::{dot, norm};
use convex_rounder::rounding::strictify_with;
use convex_rounder::{
    gauge_energy, hausdorff, presets, strict_certificate, Body, DirectionGrid, QuadGauge,
};
use proptest::prelude::*;

fn grid2() -> DirectionGrid {
    DirectionGrid::new(2, 360, 0).unwrap()
}

fn polytope() -> impl Strategy<Value = Body> {
    (2usize..=3, 6usize..14, 0u64..1000)
        .prop_map(|(d, n, seed)| presets::random_polytope(d, n.max(d + 2), seed).unwrap())
}

fn planar_polytope() -> impl Strategy<Value = Body> {
    (5usize..14, 0u64..1000).prop_map(|(n, seed)| presets::random_polytope(2, n, seed).unwrap())
}

fn vector(d: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-3.0f64..3.0, d)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn gauge_is_subadditive_and_homogeneous(
        b in polytope(),
        x in vector(3),
        y in vector(3),
        t in 0.0f64..10.0,
    ) {
        let d = b.dim();
        let (x, y) = (&x[..d], &y[..d]);
        let xy: Vec<f64> = x.iter().zip(y).map(|(a, c)| a + c).collect();
        let (px, py) = (b.gauge(x).unwrap(), b.gauge(y).unwrap());
        prop_assert!(b.gauge(&xy).unwrap() <= px + py + 1e-12 * (1.0 + px + py));
        let tx: Vec<f64> = x.iter().map(|v| t * v).collect();
        prop_assert!((b.gauge(&tx).unwrap() - t * px).abs() <= 1e-12 * (1.0 + t * px));
        prop_assert!(px >= 0.0);
    }

    #[test]
    fn support_is_sublinear(b in polytope(), u in vector(3), v in vector(3)) {
        let d = b.dim();
        let (u, v) = (&u[..d], &v[..d]);
        let uv: Vec<f64> = u.iter().zip(v).map(|(a, c)| a + c).collect();
        let (su, sv) = (b.support(u).unwrap(), b.support(v).unwrap());
        prop_assert!(b.support(&uv).unwrap() <= su + sv + 1e-12 * (1.0 + su.abs() + sv.abs()));
    }

    #[test]
    fn hausdorff_axioms(
        a in planar_polytope(),
        b in planar_polytope(),
        c in planar_polytope(),
    ) {
        let g = grid2();
        let ab = hausdorff(&a, &b, &g).unwrap();
        prop_assert_eq!(hausdorff(&a, &a, &g).unwrap(), 0.0);
        prop_assert_eq!(ab, hausdorff(&b, &a, &g).unwrap());
        prop_assert!(ab >= 0.0);
        let via = hausdorff(&a, &c, &g).unwrap() + hausdorff(&c, &b, &g).unwrap();
        prop_assert!(ab <= via + 1e-14);
    }

    #[test]
    fn polar_is_an_involution(b in polytope(), u in vector(3)) {
        let d = b.dim();
        let u = &u[..d];
        prop_assume!(norm(u) > 1e-3);
        let pp = b.polar().unwrap().polar().unwrap();
        let (want, got) = (b.support(u).unwrap(), pp.support(u).unwrap());
        prop_assert!((want - got).abs() <= 1e-9 * (1.0 + want.abs()));
        // The polar gauge is the support function.
        let polar_gauge = b.polar().unwrap().gauge(u).unwrap();
        prop_assert!((polar_gauge - want).abs() <= 1e-9 * (1.0 + want.abs()));
    }

    #[test]
    fn conjugate_obeys_young(b in polytope(), x in vector(3), u in vector(3), w in 0.2f64..5.0) {
        let d = b.dim();
        let (x, u) = (&x[..d], &u[..d]);
        let f = QuadGauge::squared_gauge(b, w).unwrap();
        let fx = f.eval(x).unwrap();
        let fu = f.fenchel().unwrap().eval(u).unwrap();
        prop_assert!(fx + fu >= dot(x, u) - 1e-9 * (1.0 + fx + fu));
    }

    #[test]
    fn gauge_energy_is_two_homogeneous(b in polytope(), x in vector(3), t in 0.0f64..4.0) {
        let d = b.dim();
        let x = &x[..d];
        let f = gauge_energy(&b).unwrap();
        let tx: Vec<f64> = x.iter().map(|v| t * v).collect();
        let (fx, ftx) = (f.eval(x).unwrap(), f.eval(&tx).unwrap());
        prop_assert!((ftx - t * t * fx).abs() <= 1e-12 * (1.0 + ftx));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn strict_value_is_nonnegative(b in planar_polytope(), eps in 0.01f64..0.5, seed in 0u64..100) {
        let r = strict_certificate(&b, 64, 0.2, seed).unwrap();
        prop_assert!(r.value >= -1e-12);
        let s = strictify_with(&b, eps).unwrap();
        let r = strict_certificate(&s, 64, 0.2, seed).unwrap();
        prop_assert!(r.value > 0.0);
    }
}
