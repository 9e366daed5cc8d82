use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use temple_core::estimates::*;
use temple_core::system::{self, SystemSpec};
use temple_core::viscous::{solve_viscous, SolveConfig};
use temple_core::{EstimateReport, GridField};

fn bump(family: usize, center: f64, width: f64, amplitude: f64) -> WaveProfile {
    WaveProfile {
        family,
        shape: Shape::Bump,
        center,
        width,
        amplitude,
    }
}

fn rotated2_waves(waves: Vec<WaveProfile>, span: (f64, f64), cells: usize) -> GridField {
    InitialData::waves(Some(vec![0.0, 0.0]), waves)
        .sample(&system::rotated2(), span.0, span.1, cells)
        .unwrap()
}

fn transversal_run(sys: &SystemSpec, u0: &GridField, eps: f64, t_end: f64, records: usize) -> EstimateReport {
    let cfg = SolveConfig::new(eps, t_end).with_uniform_records(records);
    let traj = solve_viscous(sys, u0, &cfg).unwrap();
    let k = kernel_for_run(sys, &traj, eps, 0, 1).unwrap();
    transversal_decay_check(sys, &traj, eps, (0, 1), &k, &TransversalOptions::default()).unwrap()
}

#[test]
fn potential_of_unit_blocks_matches_monte_carlo() {
    let k = InteractionKernel::new(1.0, 1.0).unwrap();
    let exact = 0.5 + 2.0 * (1.0 - (-0.5f64).exp()) - (4.0 - 6.0 * (-0.5f64).exp());
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let samples = 1_000_000;
    let mc = (0..samples)
        .map(|_| {
            let (x, y): (f64, f64) = (rng.random(), rng.random());
            k.eval(x - y)
        })
        .sum::<f64>()
        / samples as f64;
    let block = |x: f64, dx: f64| {
        if x > 0.5 * dx && x < 1.0 - 0.5 * dx {
            vec![1.0]
        } else if (x.abs() <= 0.5 * dx) || ((x - 1.0).abs() <= 0.5 * dx) {
            vec![0.5]
        } else {
            vec![0.0]
        }
    };
    let cells = 30_001;
    let dx = 3.0 / (cells - 1) as f64;
    let z = GridField::from_fn(-1.0, 2.0, cells, 1, |x| block(x, dx)).unwrap();
    let q = interaction_potential(&z, &z, &k).unwrap();
    assert!((mc - exact).abs() < 1e-3, "mc {mc} exact {exact}");
    assert!((q - mc).abs() < 1e-3, "grid {q} mc {mc}");
    assert!((q - exact).abs() < 1e-4, "grid {q} exact {exact}");
}

#[test]
fn kernel_solves_its_ode_off_the_diagonal() {
    let k = InteractionKernel::new(1.3, 0.2).unwrap();
    for s in [-3.0, -1.0, -0.1, -1e-3, 1e-3, 0.5, 4.0] {
        assert!(k.ode_defect(s).abs() <= 1e-12 * (1.0 + k.second_derivative(s).abs()));
    }
    assert!((k.eval(0.0) - 1.0 / 1.3).abs() < 1e-15);
    assert!(k.eval(-1e-12) <= k.eval(0.0));
    assert!(InteractionKernel::new(0.0, 1.0).is_err());
}

#[test]
fn single_family_has_no_interaction() {
    let sys = system::rotated2();
    let u0 = rotated2_waves(vec![bump(1, 0.0, 0.1, 0.1)], (-1.0, 1.5), 500);
    let r = transversal_run(&sys, &u0, 0.01, 0.3, 20);
    assert!(r.pass, "{r}");
    assert!(r.get("interaction_integral").unwrap() < 1e-14);
    assert!(r.get("q_initial").unwrap() < 1e-14);
}

#[test]
fn crossing_waves_stay_below_the_transversal_bound() {
    let sys = system::rotated2();
    let waves = vec![bump(2, -0.5, 0.12, 0.1), bump(1, 0.2, 0.12, 0.1)];
    let mut totals = Vec::new();
    for cells in [1000, 2000] {
        let u0 = rotated2_waves(waves.clone(), (-1.0, 1.8), cells);
        let r = transversal_run(&sys, &u0, 0.02, 0.7, 141);
        println!("{r}");
        assert!(r.pass, "{r}");
        totals.push(r.get("interaction_integral").unwrap());
    }
    let rel = (totals[0] - totals[1]).abs() / totals[1];
    // first order in dx through the numerical viscosity
    assert!(rel < 0.03, "resolutions differ by {rel}");
}

#[test]
fn separating_waves_barely_interact() {
    let sys = system::rotated2();
    let u0 = rotated2_waves(
        vec![bump(1, -0.4, 0.06, 0.1), bump(2, 0.4, 0.06, 0.1)],
        (-1.0, 1.8),
        700,
    );
    let r = transversal_run(&sys, &u0, 0.005, 0.4, 41);
    assert!(r.pass, "{r}");
    let e = r.get("e1").unwrap() * r.get("e2").unwrap();
    assert!(
        r.get("interaction_integral").unwrap() <= 1e-8 * e,
        "{:?}",
        r.get("interaction_integral")
    );
}

#[test]
fn equal_families_are_rejected() {
    let sys = system::rotated2();
    let u0 = rotated2_waves(vec![bump(1, 0.0, 0.1, 0.1)], (-1.0, 1.0), 100);
    let traj = solve_viscous(&sys, &u0, &SolveConfig::new(0.01, 0.05).with_uniform_records(3)).unwrap();
    let k = InteractionKernel::new(1.0, 1.0).unwrap();
    assert!(transversal_decay_check(&sys, &traj, 0.01, (1, 1), &k, &TransversalOptions::default()).is_err());
    let huge = InteractionKernel::new(10.0, 1.0).unwrap();
    assert!(transversal_decay_check(&sys, &traj, 0.01, (0, 1), &huge, &TransversalOptions::default()).is_err());
}

#[test]
fn scalar_total_variation_does_not_grow() {
    let sys = system::burgers();
    let data = InitialData::Piecewise {
        breaks: vec![-0.3, 0.3],
        states: vec![vec![0.0], vec![0.8], vec![-0.2]],
    };
    let u0 = data.sample(&sys, -1.0, 1.0, 400).unwrap();
    let r = bv_study(
        &sys,
        &u0,
        &[0.02, 0.01],
        &SolveConfig::new(0.01, 0.4),
        &BvOptions::default(),
    )
    .unwrap();
    assert!(r.pass, "{r}");
    assert!(r.get("l1_fit").unwrap() <= 1.0 + 1e-6);
}

#[test]
fn separated_constant_frame_variation_is_bounded() {
    let sys = system::rotated2();
    let u0 = rotated2_waves(
        vec![bump(1, -0.4, 0.08, 0.15), bump(2, 0.3, 0.08, -0.15)],
        (-1.0, 1.8),
        600,
    );
    let r = bv_study(
        &sys,
        &u0,
        &[0.01, 0.005],
        &SolveConfig::new(0.01, 0.3),
        &BvOptions::default(),
    )
    .unwrap();
    assert!(r.pass, "{r}");
}

#[test]
fn scalar_viscous_flow_contracts() {
    let sys = system::burgers();
    let u0 = GridField::from_fn(-1.0, 1.0, 300, 1, |x| vec![0.5 * (-8.0 * x * x).exp()]).unwrap();
    let v0 = GridField::from_fn(-1.0, 1.0, 300, 1, |x| vec![0.3 * (-8.0 * (x - 0.1) * (x - 0.1)).exp()]).unwrap();
    let r = stability_study(
        &sys,
        &u0,
        &v0,
        0.01,
        4,
        &SolveConfig::new(0.01, 0.4),
        &StabilityOptions::default(),
    )
    .unwrap();
    assert!(r.pass, "{r}");
    assert!(r.get("l2_fit").unwrap() <= 1.0 + 1e-6);
}

#[test]
fn homotopy_quotient_matches_linearized_flow() {
    let sys = system::rotated2();
    let u0 = rotated2_waves(vec![bump(1, -0.2, 0.1, 0.15), bump(2, 0.2, 0.1, 0.1)], (-1.0, 1.5), 250);
    let v0 = rotated2_waves(vec![bump(1, -0.1, 0.1, 0.1), bump(2, 0.1, 0.1, 0.15)], (-1.0, 1.5), 250);
    let cfg = SolveConfig::new(0.01, 0.2).with_fixed_dt(1e-3);
    let r = homotopy_identity_check(&sys, &u0, &v0, 0.5, 1e-4, &cfg, 5.0).unwrap();
    assert!(r.pass, "{r}");
}

#[test]
fn heat_flow_continuity_is_parabolic() {
    let sys = system::heat();
    let u0 = InitialData::riemann(vec![1.0], vec![0.0], 0.0)
        .sample(&sys, -2.0, 2.0, 400)
        .unwrap();
    let pairs = [(0.05, 0.1), (0.1, 0.2), (0.05, 0.2)];
    let r = time_continuity_study(
        &sys,
        &u0,
        &[0.02, 0.01],
        &pairs,
        &SolveConfig::new(0.01, 0.2),
        &ContinuityOptions::default(),
    )
    .unwrap();
    assert!(r.pass, "{r}");
    assert!(r.get("b").unwrap() > 10.0 * r.get("a").unwrap(), "{r:?}");
}

#[test]
fn transport_continuity_is_lipschitz() {
    let sys = system::advection();
    let u0 = InitialData::riemann(vec![1.0], vec![0.0], -1.0)
        .sample(&sys, -2.0, 2.0, 800)
        .unwrap();
    let pairs = [(0.1, 0.3), (0.3, 0.6), (0.1, 0.6)];
    let r = time_continuity_study(
        &sys,
        &u0,
        &[1e-3, 5e-4],
        &pairs,
        &SolveConfig::new(1e-3, 0.6),
        &ContinuityOptions::default(),
    )
    .unwrap();
    assert!(r.pass, "{r}");
    assert!(r.get("a").unwrap() > 0.5, "{:?}", r.get("a"));
}

#[test]
fn disturbances_stay_in_the_cone() {
    let sys = system::burgers();
    let u0 = GridField::from_fn(-3.0, 3.0, 600, 1, |x| vec![if x.abs() < 0.2 { 0.3 } else { 0.0 }]).unwrap();
    let v0 = GridField::from_fn(-3.0, 3.0, 600, 1, |_| vec![0.0]).unwrap();
    let r = propagation_study(
        &sys,
        &u0,
        &v0,
        (-0.2, 0.2),
        0.01,
        &SolveConfig::new(0.01, 0.5),
        &PropagationOptions::default(),
    )
    .unwrap();
    assert!(r.pass, "{r}");
    assert!(r.get("decay_rate").unwrap() > 0.0);
}

#[test]
fn outside_support_differences_are_rejected() {
    let sys = system::burgers();
    let u0 = GridField::from_fn(-1.0, 1.0, 100, 1, |x| vec![0.1 * x]).unwrap();
    let v0 = GridField::from_fn(-1.0, 1.0, 100, 1, |_| vec![0.0]).unwrap();
    let r = propagation_study(
        &sys,
        &u0,
        &v0,
        (-0.2, 0.2),
        0.01,
        &SolveConfig::new(0.01, 0.1),
        &PropagationOptions::default(),
    );
    assert!(r.is_err());
}

#[test]
fn burgers_shock_converges_at_first_order() {
    let sys = system::burgers();
    let data = InitialData::riemann(vec![0.8], vec![-0.4], 0.0);
    let u0 = data.sample(&sys, -1.0, 1.0, 1024).unwrap();
    let r = vanishing_viscosity_study(
        &sys,
        &data,
        &u0,
        &[0.04, 0.02, 0.01],
        0.3,
        &SolveConfig::new(0.01, 0.3),
        &ConvergenceOptions::default(),
    )
    .unwrap();
    println!("{r}");
    assert!(r.pass, "{r}");
    let p = r.fit.as_ref().unwrap().exponent;
    assert!((p - 1.0).abs() < 0.2, "order {p}");
}

#[test]
fn smooth_data_without_reference_are_rejected() {
    let sys = system::chromatography();
    let data = InitialData::waves(None, vec![bump(1, 0.0, 0.2, 0.1)]);
    let u0 = data.sample(&sys, -1.0, 1.0, 64).unwrap();
    let r = vanishing_viscosity_study(
        &sys,
        &data,
        &u0,
        &[0.1, 0.05],
        0.1,
        &SolveConfig::new(0.1, 0.1),
        &Default::default(),
    );
    assert!(r.is_err());
}

#[test]
fn scalar_smoothing_follows_inverse_square_root() {
    let sys = system::burgers();
    let u0 = GridField::from_fn(-2.0, 2.0, 1600, 1, |x| vec![if x.abs() < 0.5 { 0.2 } else { 0.0 }]).unwrap();
    let h0 = GridField::from_fn(-2.0, 2.0, 1600, 1, |x| vec![(-(x / 0.02).powi(2)).exp()]).unwrap();
    let r = decay_study(&sys, &u0, &h0, &SolveConfig::new(0.05, 0.2), &DecayOptions::default()).unwrap();
    println!("{r}");
    assert!(r.pass, "{r}");
}

#[test]
fn burgers_residual_converges() {
    let sys = system::burgers();
    let data = InitialData::waves(Some(vec![0.0]), vec![bump(1, 0.0, 0.35, 0.5)]);
    let r = residual_study(
        &sys,
        &data,
        (-1.0, 1.0),
        &[81, 161, 321],
        0.1,
        0.1,
        &SolveConfig::new(0.1, 0.2),
        0.8,
    )
    .unwrap();
    println!("{r}");
    assert!(r.pass, "{r}");
}
