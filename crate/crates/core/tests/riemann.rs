use temple_core::frame::frame_fast;
use temple_core::grid::GridField;
use temple_core::riemann::*;
use temple_core::system::{self, SystemSpec};

fn sup(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn bundled() -> Vec<SystemSpec> {
    vec![
        system::burgers(),
        system::rotated2(),
        system::rotated3(),
        system::chromatography(),
    ]
}

#[test]
fn chromatography_curves_are_straight() {
    let sys = system::chromatography();
    let u = [0.3, 0.2];
    let f = frame_fast(&sys, &u).unwrap();
    for i in 0..2 {
        for s in [-0.1, -0.05, 0.04, 0.1] {
            let end = rarefaction_curve(&sys, i, &u, s).unwrap();
            let line: Vec<f64> = (0..2).map(|c| u[c] + s * f.r(i)[c]).collect();
            assert!(sup(&end, &line) < 1e-8, "family {i} sigma {s}");
        }
    }
}

#[test]
fn curve_leaving_the_box_is_rejected() {
    let sys = system::rotated2();
    assert!(rarefaction_curve(&sys, 0, &[0.3, 0.0], 0.5).is_err());
}

#[test]
fn pure_first_wave_is_recovered() {
    for sys in bundled() {
        let u_l = sys.domain.from_unit(&vec![0.5; sys.n]);
        let u_r = rarefaction_curve(&sys, 0, &u_l, 0.2).unwrap();
        let d = wave_decomposition(&sys, &u_l, &u_r).unwrap();
        assert!((d.sigma[0] - 0.2).abs() < 1e-10, "{}", sys.name);
        assert!(d.sigma[1..].iter().all(|s| s.abs() < 1e-10), "{}", sys.name);
    }
}

#[test]
fn constant_frame_strengths_are_projections() {
    let sys = system::rotated3();
    let u_l = [0.05, -0.1, 0.1];
    let u_r = [-0.1, 0.05, 0.0];
    let f = frame_fast(&sys, &u_l).unwrap();
    let du: Vec<f64> = (0..3).map(|c| u_r[c] - u_l[c]).collect();
    let d = wave_decomposition(&sys, &u_l, &u_r).unwrap();
    assert!(d.iterations <= 1);
    assert!(sup(&d.sigma, f.project(&du).as_slice()) < 1e-13);
}

#[test]
fn wave_curves_follow_straight_lines() {
    let cases: Vec<(SystemSpec, Vec<f64>, Vec<f64>)> = vec![
        (system::rotated2(), vec![0.1, -0.1], vec![-0.15, 0.2]),
        (system::rotated3(), vec![0.1, 0.0, -0.1], vec![0.0, 0.1, 0.05]),
        (system::chromatography(), vec![0.3, 0.2], vec![0.25, 0.3]),
    ];
    for (sys, l, r) in cases {
        let d = wave_decomposition(&sys, &l, &r).unwrap();
        assert!(d.residual <= NEWTON_TOL);
        assert_eq!(d.w[0], l);
        assert!(sup(&d.w[sys.n], &r) <= 1e-11);
        for i in 0..sys.n {
            let f = frame_fast(&sys, &d.w[i]).unwrap();
            let line: Vec<f64> = (0..sys.n).map(|c| d.w[i][c] + d.sigma[i] * f.r(i)[c]).collect();
            assert!(sup(&d.w[i + 1], &line) <= 1e-8, "{} family {}", sys.name, i);
        }
    }
}

#[test]
fn flux_tables() {
    let burgers = system::burgers();
    for sigma in [0.7, -0.9] {
        let f = scalar_flux(&burgers, 0, &[0.0], sigma).unwrap();
        assert_eq!(f.values[0], 0.0);
        assert!(f.nodes() >= MIN_FLUX_NODES);
        for k in 0..f.nodes() {
            let w = f.omega(k);
            assert!((f.values[k] - 0.5 * w * w).abs() < 1e-10);
        }
        assert!(f.derivative_error < 1e-8);
        assert!((f.eval(0.3 * sigma) - 0.045 * sigma * sigma).abs() < 1e-12);
    }
    let chrom = system::chromatography();
    for i in 0..2 {
        let f = scalar_flux(&chrom, i, &[0.5, 0.5], -0.2).unwrap();
        assert!(f.derivative_error < 1e-8, "family {i}: {}", f.derivative_error);
    }
}

#[test]
fn burgers_profiles() {
    let sys = system::burgers();
    let fan = solve_riemann(&sys, &[0.0], &[1.0]).unwrap();
    let p = &fan.profiles[0];
    assert_eq!(p.waves.len(), 1);
    assert_eq!(p.waves[0].kind, WaveKind::Rarefaction);
    for k in 0..=400 {
        let xi = -0.5 + 2.0 * k as f64 / 400.0;
        assert!((p.eval(xi) - xi.clamp(0.0, 1.0)).abs() < 1e-10);
        assert!((fan.sample_xi(xi)[0] - xi.clamp(0.0, 1.0)).abs() < 1e-10);
    }
    for &(xi, _) in &p.knots {
        assert!((p.eval(xi) - xi.clamp(0.0, 1.0)).abs() < 1e-10);
    }

    let fan = solve_riemann(&sys, &[0.0], &[-1.0]).unwrap();
    let p = &fan.profiles[0];
    assert_eq!(p.waves.len(), 1);
    assert_eq!(p.waves[0].kind, WaveKind::Shock);
    assert!((p.waves[0].speed_left + 0.5).abs() < 1e-12);
    assert_eq!(p.eval(-0.5 - 1e-9), 0.0);
    assert_eq!(p.eval(-0.5 + 1e-9), -1.0);
    assert!(p.entropy_violation <= 0.0);
}

#[test]
fn linear_flux_gives_a_contact() {
    let sys = system::advection();
    let fan = solve_riemann(&sys, &[0.2], &[-0.3]).unwrap();
    let p = &fan.profiles[0];
    assert_eq!(p.waves.len(), 1);
    assert_eq!(p.waves[0].kind, WaveKind::Contact);
    assert!((p.waves[0].speed_left - 1.0).abs() < 1e-12);
    assert_eq!(fan.sample(1.0, 0.99), vec![0.2]);
    assert!((fan.sample(1.0, 1.01)[0] + 0.3).abs() < 1e-14);
}

#[test]
fn equal_states_give_constant_fan() {
    for sys in bundled() {
        let u = sys.domain.from_unit(&vec![0.5; sys.n]);
        let fan = solve_riemann(&sys, &u, &u).unwrap();
        assert!(fan.active_range().is_none());
        for xi in [-5.0, -0.1, 0.0, 0.3, 7.0] {
            assert_eq!(fan.sample_xi(xi), u);
        }
    }
}

#[test]
fn pure_rarefaction_maps_scalar_fan() {
    let sys = system::chromatography();
    let u_l = vec![0.3, 0.2];
    let u_r = rarefaction_curve(&sys, 1, &u_l, 0.15).unwrap();
    let fan = solve_riemann(&sys, &u_l, &u_r).unwrap();
    assert!(fan.profiles[0].is_trivial());
    let flux = scalar_flux(&sys, 1, &u_l, fan.sigma[1]).unwrap();
    let profile = scalar_riemann(&flux).unwrap();
    for k in 0..=200 {
        let xi = -1.0 + 4.0 * k as f64 / 200.0;
        let expect = if xi < fan.lambda_bar[0] {
            u_l.clone()
        } else {
            flux.state(profile.eval(xi))
        };
        assert!(sup(&fan.sample_xi(xi), &expect) < 1e-9, "xi {xi}");
    }
}

#[test]
fn constant_frame_fan_decouples() {
    let sys = system::rotated2();
    let cf = sys.constant_frame.clone().unwrap();
    let u_l = [0.2, -0.1];
    let u_r = [-0.1, 0.15];
    let fan = solve_riemann(&sys, &u_l, &u_r).unwrap();
    let wl = cf.to_characteristic(&u_l);
    let wr = cf.to_characteristic(&u_r);
    // independent scalar solutions: w1 in Burgers form, w2 with speed 2 + w
    let scalar = |a: f64, b: f64, base: f64, xi: f64| -> f64 {
        if a <= b {
            (xi - base).clamp(a, b)
        } else if xi < base + 0.5 * (a + b) {
            a
        } else {
            b
        }
    };
    for k in 0..=300 {
        let xi = -1.0 + 4.0 * k as f64 / 300.0;
        let w = [scalar(wl[0], wr[0], 0.0, xi), scalar(wl[1], wr[1], 2.0, xi)];
        let near_shock = (0..2).any(|i| {
            let base = 2.0 * i as f64;
            wl[i] > wr[i] && (xi - base - 0.5 * (wl[i] + wr[i])).abs() < 1e-9
        });
        if near_shock {
            continue;
        }
        assert!(sup(&fan.sample_xi(xi), &cf.to_state(&w)) < 1e-10, "xi {xi}");
    }
}

#[test]
fn fans_are_self_similar_and_entropic() {
    let cases: Vec<(SystemSpec, Vec<f64>, Vec<f64>)> = vec![
        (system::burgers(), vec![0.5], vec![-0.5]),
        (system::rotated2(), vec![0.1, -0.1], vec![-0.15, 0.2]),
        (system::rotated3(), vec![0.1, 0.0, -0.1], vec![0.0, 0.1, 0.05]),
        (system::chromatography(), vec![0.3, 0.2], vec![0.25, 0.3]),
    ];
    for (sys, l, r) in cases {
        let fan = solve_riemann(&sys, &l, &r).unwrap();
        for p in &fan.profiles {
            assert!(p.entropy_violation <= 1e-14, "{}", sys.name);
            let z: Vec<f64> = p.knots.iter().map(|k| k.1).collect();
            assert!(z.windows(2).all(|w| (w[1] - w[0]) * p.sigma.signum() >= 0.0));
        }
        for k in 0..50 {
            let x = -2.0 + 0.08 * k as f64;
            for a in [0.25, 2.0, 1024.0] {
                assert_eq!(fan.sample(0.5, x), fan.sample(0.5 * a, x * a));
            }
        }
        assert!(fan.lambda_bar.windows(2).all(|w| w[0] < w[1]));
        for i in 0..sys.n {
            let (lo, hi) = fan.profiles[i].speed_range();
            if i > 0 {
                assert!(lo > fan.lambda_bar[i - 1]);
            }
            if i + 1 < sys.n {
                assert!(hi < fan.lambda_bar[i]);
            }
        }
    }
}

#[test]
fn fan_json_lists_one_family_for_a_pure_wave() {
    let sys = system::rotated2();
    let u_l = vec![0.0, 0.0];
    let u_r = rarefaction_curve(&sys, 0, &u_l, -0.2).unwrap();
    let fan = solve_riemann(&sys, &u_l, &u_r).unwrap();
    let json = fan.to_json();
    let nontrivial = json["families"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|f| !f["trivial"].as_bool().unwrap())
        .count();
    assert_eq!(nontrivial, 1);
    assert_eq!(json["families"][0]["waves"][0]["type"], "shock");
}

#[test]
fn glued_single_jump_matches_fan() {
    let sys = system::chromatography();
    let (l, r) = (vec![0.3, 0.2], vec![0.25, 0.3]);
    let fan = solve_riemann(&sys, &l, &r).unwrap();
    let g = glued_evolution(&sys, PiecewiseConstant::new(vec![0.5], vec![l, r]).unwrap()).unwrap();
    assert!(g.horizon.is_infinite());
    for k in 0..40 {
        let x = -1.0 + 0.1 * k as f64;
        assert_eq!(g.sample(0.7, x).unwrap(), fan.sample(0.7, x - 0.5));
    }
}

#[test]
fn glued_horizon_and_midpoint() {
    let sys = system::rotated2();
    let delta = 0.4;
    let pieces =
        PiecewiseConstant::new(vec![0.0, delta], vec![vec![0.1, 0.0], vec![-0.1, 0.1], vec![0.0, -0.1]]).unwrap();
    let g = glued_evolution(&sys, pieces).unwrap();
    let lmax = g
        .jumps
        .iter()
        .flat_map(|(_, f)| {
            let (a, b) = f.active_range().unwrap();
            [a.abs(), b.abs()]
        })
        .fold(0.0, f64::max);
    assert!(g.horizon >= delta / (2.0 * lmax));
    let t = 0.9 * g.horizon;
    let mid = 0.5 * delta;
    let a = g.sample(t, mid - 1e-9).unwrap();
    let b = g.sample(t, mid + 1e-9).unwrap();
    assert!(sup(&a, &b) < 1e-6);
    assert!(matches!(
        g.sample(1.1 * g.horizon, 0.0),
        Err(temple_core::LabError::InteractionReached { .. })
    ));
}

#[test]
fn perturbed_riemann_data_keep_their_waves() {
    // states joined by single-family waves, one jump per family
    let sys = system::rotated3();
    let delta = 0.5;
    let u_minus = vec![0.05, -0.05, 0.0];
    let mut w = vec![u_minus.clone()];
    for (i, s) in [0.1, -0.08, 0.06].iter().enumerate() {
        let next = rarefaction_curve(&sys, i, &w[i], *s).unwrap();
        w.push(next);
    }
    let breaks: Vec<f64> = (0..3).map(|i| i as f64 * delta).collect();
    let g = glued_evolution(&sys, PiecewiseConstant::new(breaks, w.clone()).unwrap()).unwrap();
    let t = 0.5 * g.horizon.min(1.0);
    for i in 0..3 {
        let flux = scalar_flux(&sys, i, &w[i], [0.1, -0.08, 0.06][i]).unwrap();
        let profile = scalar_riemann(&flux).unwrap();
        let (lo, hi) = profile.speed_range();
        for k in 0..20 {
            let x = i as f64 * delta + t * (lo - 0.1 + (hi - lo + 0.2) * (k as f64 + 0.5) / 20.0);
            let expect = flux.state(profile.eval((x - i as f64 * delta) / t));
            assert!(sup(&g.sample(t, x).unwrap(), &expect) < 1e-9);
        }
    }
}

#[test]
fn front_tracking_matches_fan_for_riemann_data() {
    let sys = system::rotated2();
    let (l, r) = (vec![0.2, -0.1], vec![-0.1, 0.15]);
    let u0 = GridField::from_fn(-1.0, 3.0, 801, 2, |x| if x < 0.0 { l.clone() } else { r.clone() }).unwrap();
    let exact = exact_semigroup_decoupled(&sys, &u0, 0.5).unwrap();
    let fan = solve_riemann(&sys, &l, &r).unwrap();
    let j = (0..u0.len()).find(|&j| u0.x(j + 1) >= 0.0).unwrap();
    let reference = fan.to_grid(0.5, u0.x(j) + 0.5 * u0.dx, &u0);
    let gap = exact.l1_distance(&reference).unwrap();
    assert!(gap < 2e-3, "gap {gap}");
}
