mod common;

use common::*;
use convex_rounder::certificates::{strict_certificate_with, StrictParams};
use convex_rounder::rounding::{smoothify_with, strictify_with, MAX_HALVINGS};
use convex_rounder::{
    asplund_round, containment_ratio, hausdorff, presets, smoothify, strictify, Body,
    DirectionGrid, Error, GridSpec, RoundingConfig,
};

fn grid2() -> DirectionGrid {
    DirectionGrid::new(2, 720, 0).unwrap()
}

#[test]
fn strictified_ball_is_a_ball() {
    for eps in [0.05, 0.3, 1.0] {
        let s = strictify_with(&Body::ball(2, 1.0).unwrap(), eps).unwrap();
        let r = 1.0 / (1.0 + eps).sqrt();
        for u in random_units(1, 2, 10) {
            assert!((s.support(&u).unwrap() - r).abs() < 1e-14);
        }
    }
}

#[test]
fn smoothified_ball_is_a_ball() {
    let s = smoothify_with(&Body::ball(3, 1.0).unwrap(), 0.2).unwrap();
    for u in random_units(2, 3, 10) {
        assert!((s.support(&u).unwrap() - 1.2f64.sqrt()).abs() < 1e-12);
    }
}

#[test]
fn strictify_is_inner_and_converges() {
    let g = grid2();
    for b in [presets::square(), presets::simplex(2).unwrap(), presets::random_polytope(2, 10, 4).unwrap()] {
        let mut prev = f64::INFINITY;
        for eps in [0.4, 0.2, 0.1, 0.05] {
            let s = strictify_with(&b, eps).unwrap();
            let sb = b.support_on(&g);
            let ss = s.support_on(&g);
            assert!(ss.iter().zip(&sb).all(|(x, y)| *x <= y + 1e-12));
            let d = hausdorff(&b, &s, &g).unwrap();
            assert!(d < prev);
            prev = d;
        }
    }
}

#[test]
fn smoothify_is_outer_and_converges() {
    let g = grid2();
    let b = presets::square();
    let mut prev = f64::INFINITY;
    for eps in [0.4, 0.2, 0.1, 0.05] {
        let s = smoothify_with(&b, eps).unwrap();
        assert!(containment_ratio(&b, &s, &g).unwrap() <= 1.0 + 1e-12);
        let d = hausdorff(&b, &s, &g).unwrap();
        assert!(d < prev);
        prev = d;
    }
}

#[test]
fn config_entry_points_agree() {
    let cfg = RoundingConfig::default().with_reg_weight(0.2);
    let u = [0.3, 0.8];
    let b = presets::square();
    assert_eq!(
        strictify(&b, &cfg).unwrap().support(&u).unwrap(),
        strictify_with(&b, 0.2).unwrap().support(&u).unwrap()
    );
    assert_eq!(
        smoothify(&b, &cfg).unwrap().support(&u).unwrap(),
        smoothify_with(&b, 0.2).unwrap().support(&u).unwrap()
    );
    assert!(strictify_with(&b, 0.0).is_err());
    assert!(strictify_with(&b, f64::NAN).is_err());
}

#[test]
fn strictified_body_is_strictly_convex_in_space() {
    let s = strictify_with(&presets::cube(), 0.2).unwrap();
    let r = strict_certificate_with(&s, &StrictParams::default()).unwrap();
    assert!(r.pass, "{}", r.value);
}

#[test]
fn asplund_on_square() {
    let g = grid2();
    let b = presets::square();
    let out = asplund_round(&b, &RoundingConfig::default()).unwrap();
    let t = &out.trace;
    assert!(t.converged);
    assert!(t.final_gap < 1e-6);
    assert!(t.all_flags_ok());
    assert!(t.gaps_non_increasing(0.0));
    assert_eq!(t.halvings, 1);
    assert_eq!(t.reg_weight, 0.05);
    let rate = t.empirical_rate.unwrap();
    assert!(rate > 0.0 && rate < 1.0);
    assert!(hausdorff(&out.inner, &out.outer, &g).unwrap() < 0.1);
    assert!(hausdorff(&b, &out.body, &g).unwrap() < 0.1);
    // The result sits between the two bodies the iteration started from.
    let (si, so, sd) = (out.inner.support_on(&g), out.outer.support_on(&g), out.body.support_on(&g));
    for k in 0..g.len() {
        assert!(si[k] <= sd[k] + 1e-9 && sd[k] <= so[k] + 1e-9);
    }
    let strict = strict_certificate_with(&out.body, &StrictParams::default()).unwrap();
    assert!(strict.pass);
}

#[test]
fn asplund_trace_csv() {
    let out = asplund_round(&presets::simplex(2).unwrap(), &RoundingConfig::default()).unwrap();
    let csv = out.trace.to_csv();
    let mut lines = csv.lines();
    assert_eq!(
        lines.next().unwrap(),
        "iter,gap,monotone_upper_ok,monotone_lower_ok,sandwich_ok,drift"
    );
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), out.trace.steps.len());
    assert!(rows[0].starts_with("0,"));
    assert!(rows.iter().all(|r| r.split(',').count() == 6 && r.contains(",true,true,true,")));
}

#[test]
fn asplund_ball_is_a_fixed_point() {
    let g = grid2();
    let out = asplund_round(&Body::ball(2, 1.0).unwrap(), &RoundingConfig::default()).unwrap();
    let s = out.body.support_on(&g);
    let lo = s.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = s.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    assert!(hi - lo < 1e-9);
    assert!(hi <= 1.0 && lo >= 1.0 / 1.1f64.sqrt());
}

#[test]
fn asplund_is_deterministic() {
    let b = presets::random_polytope(2, 8, 8).unwrap();
    let a = asplund_round(&b, &RoundingConfig::default()).unwrap();
    let c = asplund_round(&b, &RoundingConfig::default()).unwrap();
    assert_eq!(a.trace, c.trace);
    let g = grid2();
    assert_eq!(a.body.support_on(&g), c.body.support_on(&g));
}

#[test]
fn asplund_reports_budget_failure() {
    let cfg = RoundingConfig {
        epsilon: 1e-300,
        ..Default::default()
    };
    match asplund_round(&presets::square(), &cfg) {
        Err(Error::Budget { halvings, achieved, .. }) => {
            assert_eq!(halvings, MAX_HALVINGS);
            assert!(achieved > 0.0);
        }
        other => panic!("expected a budget error, got {other:?}"),
    }
}

#[test]
fn asplund_is_planar_only() {
    let r = asplund_round(&presets::cube(), &RoundingConfig::default());
    assert!(matches!(r, Err(Error::Unsupported(_))));
}

#[test]
fn asplund_rejects_bad_input() {
    let off = Body::polytope(vec![vec![1.0, 1.0], vec![2.0, 1.0], vec![1.0, 2.0]]).unwrap();
    assert!(asplund_round(&off, &RoundingConfig::default()).is_err());
    let bad = RoundingConfig {
        max_iter: 0,
        ..Default::default()
    };
    assert!(asplund_round(&presets::square(), &bad).is_err());
}

#[test]
fn asplund_stops_at_max_iter() {
    let cfg = RoundingConfig {
        max_iter: 3,
        ..Default::default()
    };
    let out = asplund_round(&presets::square(), &cfg).unwrap();
    assert!(!out.trace.converged);
    assert_eq!(out.trace.steps.len(), 4);
}

#[test]
fn asplund_on_a_coarser_grid() {
    let cfg = RoundingConfig {
        grid: GridSpec::new(180, 0),
        table_factor: 4,
        ..Default::default()
    };
    let out = asplund_round(&presets::cross(), &cfg).unwrap();
    assert!(out.trace.converged && out.trace.all_flags_ok());
}

#[test]
fn config_json_round_trip() {
    let cfg = RoundingConfig {
        epsilon: 0.2,
        ..Default::default()
    };
    let s = serde_json::to_string(&cfg).unwrap();
    let back: RoundingConfig = serde_json::from_str(&s).unwrap();
    assert_eq!(back, cfg);
    let legacy = r#"{"epsilon":0.1,"reg_weight":0.1,"tol":1e-6,"max_iter":200,"grid":{"n":720,"seed":0}}"#;
    let parsed: RoundingConfig = serde_json::from_str(legacy).unwrap();
    assert_eq!(parsed, RoundingConfig::default());
}
