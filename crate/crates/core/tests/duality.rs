mod common;

use common::*;
use convex_rounder::energy::energy_distance;
use convex_rounder::lipschitz::{check_forward_lipschitz, check_inverse_lipschitz};
use convex_rounder::{
    add, brute_conjugate, gauge_energy, hausdorff, inf_conv, level_body, presets, Body,
    DirectionGrid, Error, QuadGauge,
};

fn grid2() -> DirectionGrid {
    DirectionGrid::new(2, 720, 0).unwrap()
}

fn sorted_vertices(b: &Body) -> Vec<Vec<f64>> {
    let Body::Polytope(p) = b else { panic!("not a polytope") };
    let mut v: Vec<Vec<f64>> = p
        .vertices()
        .iter()
        .map(|x| x.iter().map(|c| (c * 1e9).round() / 1e9).collect())
        .collect();
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    v
}

#[test]
fn polar_of_square_is_cross() {
    let p = presets::square().polar().unwrap();
    assert_eq!(sorted_vertices(&p), sorted_vertices(&presets::cross()));
}

#[test]
fn polar_of_cube_is_octahedron() {
    let p = presets::cube().polar().unwrap();
    let v = sorted_vertices(&p);
    assert_eq!(v.len(), 6);
    for x in &v {
        assert_eq!(norm(x), 1.0);
    }
}

#[test]
fn polar_of_ball_inverts_radius() {
    let p = Body::ball(3, 4.0).unwrap().polar().unwrap();
    assert!(matches!(p, Body::Ball { radius, .. } if radius == 0.25));
}

#[test]
fn polar_gauge_is_support_off_grid() {
    for seed in 0..8 {
        for dim in [2, 3] {
            let b = presets::random_polytope(dim, 11, 40 + seed).unwrap();
            let p = b.polar().unwrap();
            for u in random_units(seed, dim, 30) {
                let x: Vec<f64> = u.iter().map(|c| 0.7 * c).collect();
                assert!((p.gauge(&x).unwrap() - b.support(&x).unwrap()).abs() < 1e-12);
                assert!((p.support(&x).unwrap() - b.gauge(&x).unwrap()).abs() < 1e-12);
            }
        }
    }
}

#[test]
fn sampled_support_model_has_polytope_polar() {
    let g = grid2();
    let m = convex_rounder::minkowski_sum(&presets::square(), &Body::ball(2, 0.2).unwrap(), &g).unwrap();
    let p = m.polar().unwrap();
    assert!(matches!(p, Body::Polytope(_)));
    for u in g.iter().step_by(7) {
        assert!((p.gauge(u).unwrap() - m.support(u).unwrap()).abs() < 1e-12);
    }
}

#[test]
fn conjugate_of_squared_gauge_matches_direct_transform() {
    for (k, b) in [presets::square(), presets::cross(), presets::simplex(2).unwrap()]
        .into_iter()
        .enumerate()
    {
        let w = 0.5 + k as f64;
        let f = QuadGauge::squared_gauge(b.clone(), w).unwrap();
        let fs = f.fenchel().unwrap();
        let h = |x: &[f64]| 0.5 * w * b.gauge(x).unwrap().powi(2);
        for u in random_units(k as u64, 2, 20) {
            let direct = conjugate_direct_2d(&h, &u);
            assert!(rel_err(fs.eval(&u).unwrap(), direct) < 1e-12, "{} vs {direct}", fs.eval(&u).unwrap());
        }
    }
}

#[test]
fn numeric_conjugate_of_sum_in_the_plane() {
    let f = add(
        &QuadGauge::squared_gauge(presets::square(), 1.0).unwrap(),
        &QuadGauge::squared_gauge(presets::cross(), 0.3).unwrap(),
    )
    .unwrap();
    let fs = f.fenchel().unwrap();
    let h = |x: &[f64]| f.eval(x).unwrap();
    for u in random_units(2, 2, 40) {
        assert!(rel_err(fs.eval(&u).unwrap(), conjugate_direct_2d(&h, &u)) < 1e-12);
    }
}

#[test]
fn numeric_conjugate_of_sum_in_space() {
    // f = ½p² + p² = (3/2) p², so Ff = σ² / 6.
    let b = presets::random_polytope(3, 10, 17).unwrap();
    let f = add(
        &QuadGauge::squared_gauge(b.clone(), 1.0).unwrap(),
        &QuadGauge::squared_gauge(b.clone(), 2.0).unwrap(),
    )
    .unwrap();
    let fs = f.fenchel().unwrap();
    for u in random_units(3, 3, 40) {
        let want = b.support(&u).unwrap().powi(2) / 6.0;
        assert!(rel_err(fs.eval(&u).unwrap(), want) < 1e-10);
    }
}

#[test]
fn biconjugate_through_the_direct_transform() {
    let f = add(
        &QuadGauge::squared_gauge(presets::simplex(2).unwrap(), 1.0).unwrap(),
        &QuadGauge::squared_gauge(Body::ball(2, 1.0).unwrap(), 0.2).unwrap(),
    )
    .unwrap();
    let fs = f.fenchel().unwrap();
    let h = |x: &[f64]| fs.eval(x).unwrap();
    for x in random_units(5, 2, 10) {
        assert!(rel_err(conjugate_direct_2d(&h, &x), f.eval(&x).unwrap()) < 1e-6);
    }
    assert!(energy_distance(&fs.fenchel().unwrap(), &f, &grid2()).unwrap() == 0.0);
}

#[test]
fn brute_conjugate_is_a_converging_lower_bound() {
    let f = gauge_energy(&presets::random_polytope(2, 9, 2).unwrap()).unwrap();
    let fs = f.fenchel().unwrap();
    for u in random_units(6, 2, 10) {
        let exact = fs.eval(&u).unwrap();
        let g = DirectionGrid::new(2, 64, 0).unwrap();
        let mut prev = f64::INFINITY;
        // Doubling the radial resolution only adds samples.
        for steps in [4, 8, 16, 32, 64, 128] {
            let b = brute_conjugate(&f, &u, &g, steps).unwrap();
            assert!(b <= exact + 1e-12);
            let err = exact - b;
            assert!(err <= prev + 1e-15);
            prev = err;
        }
        assert!(prev < 1e-4 * (1.0 + exact));
    }
}

#[test]
fn level_set_support_and_polar() {
    let f = add(
        &QuadGauge::squared_gauge(presets::square(), 1.0).unwrap(),
        &QuadGauge::squared_gauge(Body::ball(2, 1.0).unwrap(), 0.1).unwrap(),
    )
    .unwrap();
    let r = 0.8;
    let body = level_body(&f, r).unwrap();
    let h = |x: &[f64]| f.eval(x).unwrap();
    for u in random_units(8, 2, 20) {
        let want = 2.0 * (r * conjugate_direct_2d(&h, &u)).sqrt();
        assert!(rel_err(body.support(&u).unwrap(), want) < 1e-12);
        let x: Vec<f64> = u.iter().map(|c| c * 0.5).collect();
        assert!(rel_err(body.gauge(&x).unwrap(), (h(&x) / r).sqrt()) < 1e-14);
    }
    let polar = body.polar().unwrap();
    assert!(matches!(polar, Body::LevelSet(_)));
    for u in random_units(9, 2, 20) {
        assert!(rel_err(polar.gauge(&u).unwrap(), body.support(&u).unwrap()) < 1e-12);
    }
}

#[test]
fn gauge_energy_and_level_body_are_inverse() {
    let g = grid2();
    let b = presets::random_polytope(2, 8, 11).unwrap();
    let back = level_body(&gauge_energy(&b).unwrap(), 0.5).unwrap();
    assert!(hausdorff(&b, &back, &g).unwrap() < 1e-12);
}

#[test]
fn energies_reverse_inclusion() {
    let inner = presets::cross();
    let outer = presets::square();
    let fi = gauge_energy(&inner).unwrap();
    let fo = gauge_energy(&outer).unwrap();
    for u in random_units(1, 2, 50) {
        assert!(fi.eval(&u).unwrap() >= fo.eval(&u).unwrap());
    }
}

#[test]
fn cone_axioms_on_samples() {
    let f = add(
        &QuadGauge::squared_gauge(presets::random_polytope(2, 7, 1).unwrap(), 0.7).unwrap(),
        &QuadGauge::squared_gauge(presets::cross(), 1.3).unwrap(),
    )
    .unwrap();
    let g = f.scale(2.0).unwrap();
    let mut r = rng(4);
    assert_eq!(f.eval(&[0.0, 0.0]).unwrap(), 0.0);
    for u in random_units(12, 2, 40) {
        let k: f64 = rand::Rng::random_range(&mut r, 0.0..4.0);
        let ku: Vec<f64> = u.iter().map(|c| c * k).collect();
        assert!(rel_err(f.eval(&ku).unwrap(), k * k * f.eval(&u).unwrap()) < 1e-13);
        assert!(rel_err(g.eval(&u).unwrap(), 2.0 * f.eval(&u).unwrap()) < 1e-15);
        let v = random_unit(&mut r, 2);
        let mid = [(u[0] + v[0]) / 2.0, (u[1] + v[1]) / 2.0];
        let avg = (f.eval(&u).unwrap() + f.eval(&v).unwrap()) / 2.0;
        assert!(f.eval(&mid).unwrap() <= avg + 1e-9);
    }
    assert!(f.min_on(&grid2()) > 0.0);
}

#[test]
fn inf_convolution_matches_direct_minimization_and_reverses_order() {
    let sq = presets::square();
    let f = QuadGauge::squared_gauge(sq.clone(), 1.0).unwrap();
    let g = QuadGauge::squared_gauge(Body::ball(2, 1.0).unwrap(), 2.0).unwrap();
    let c = inf_conv(&f, &g).unwrap();
    let fr = |x: &[f64]| 0.5 * sq.gauge(x).unwrap().powi(2);
    let gr = |x: &[f64]| norm(x).powi(2);
    for x in random_units(14, 2, 20) {
        let direct = inf_conv_direct(&fr, &gr, &x, 3.0);
        let v = c.eval(&x).unwrap();
        assert!(rel_err(v, direct) < 1e-9);
        assert!(v <= f.eval(&x).unwrap() && v <= g.eval(&x).unwrap());
    }
}

#[test]
fn conjugation_rejects_bad_input() {
    let f = QuadGauge::squared_gauge(presets::square(), 1.0).unwrap();
    assert!(f.eval(&[1.0]).is_err());
    assert!(f.conjugate_at(&[f64::NAN, 0.0]).is_err());
    assert!(QuadGauge::squared_gauge(presets::square(), -1.0).is_err());
    assert!(QuadGauge::squared_gauge(presets::square(), 0.0).unwrap().fenchel().is_err());
}

fn perturbed(b: &Body, amount: f64, seed: u64) -> Body {
    let Body::Polytope(p) = b else { unreachable!() };
    let mut r = rng(seed);
    Body::polytope(
        p.vertices()
            .iter()
            .map(|v| {
                let w = random_unit(&mut r, v.len());
                v.iter().zip(&w).map(|(a, b)| a + amount * b).collect()
            })
            .collect(),
    )
    .unwrap()
}

#[test]
fn lipschitz_bounds_hold_in_space() {
    let g = DirectionGrid::new(3, 2048, 0).unwrap();
    for seed in 0..5 {
        let b = presets::random_polytope(3, 10, 70 + seed).unwrap();
        let delta = 0.5 * b.inradius(&g);
        let c = perturbed(&b, 0.4 * delta, seed);
        assert!(check_forward_lipschitz(&b, &c, delta, &g).unwrap().holds);
        assert!(check_inverse_lipschitz(&b, &c, &g).unwrap().holds);
    }
}

#[test]
fn lipschitz_of_identical_bodies() {
    let g = grid2();
    let b = presets::square();
    let w = check_forward_lipschitz(&b, &b, 0.5, &g).unwrap();
    assert!(w.holds && w.observed_ratio == 0.0);
    let w = check_inverse_lipschitz(&b, &b, &g).unwrap();
    assert!(w.holds && w.observed_ratio == 0.0);
}

#[test]
fn lipschitz_requires_the_inner_ball() {
    let g = grid2();
    let r = check_forward_lipschitz(&presets::square(), &presets::cross(), 0.9, &g);
    assert!(matches!(r, Err(Error::Precondition(_))));
    assert!(check_forward_lipschitz(&presets::square(), &presets::cross(), 0.0, &g).is_err());
}

#[test]
fn forward_bound_of_nested_squares() {
    // B = [-1,1]², C = [-1.1,1.1]²: d_H = 0.1·√2, and
    // sup ½|p_B² - p_C²| on the unit sphere is ½(1 - 1/1.21), at the axes.
    let g = grid2();
    let b = presets::square();
    let c = b.scaled(1.1).unwrap();
    let w = check_forward_lipschitz(&b, &c, 1.0, &g).unwrap();
    let d_t = 0.5 * (1.0 - 1.0 / 1.21);
    let d_h = 0.1 * 2f64.sqrt();
    assert!((w.observed_ratio - d_t / d_h).abs() < 1e-12, "{} vs {}", w.observed_ratio, d_t / d_h);
    assert!(w.holds);
}
