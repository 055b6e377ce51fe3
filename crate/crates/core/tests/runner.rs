use syncline_core::catalog::*;
use syncline_core::simulator::*;
use syncline_core::syncline::log_space;

fn fixed_wing() -> Scenario {
    let r = Registry::builtin();
    let s = |n| r.sensor(n).unwrap().clone();
    let platform = r.platform("Fixed Wing").unwrap().clone();
    let payload =
        Payload::new(s("F9P RTK"), s("MRU5"), s("VUX1")).unwrap().with_levers(Levers::for_baseline(platform.b));
    Scenario::Georef { platform, payload }
}

fn small_sv() -> Scenario {
    Scenario::Survey(Registry::builtin().survey("Small SV").unwrap().clone())
}

fn config(mode: NoiseMode, trials: usize) -> RunConfig {
    RunConfig {
        tau_grid: log_space(1e-6, 1e-1, 12).unwrap(),
        trials_per_tau: trials,
        noise_mode: mode,
        seed: 42,
        maneuver: None,
    }
}

#[test]
fn adversarial_worst_case_is_monotone_and_dominated() {
    for scenario in [fixed_wing(), small_sv()] {
        let r = run(scenario.clone(), config(NoiseMode::Adversarial, 64)).unwrap();
        assert!(r.worst_case.windows(2).all(|w| w[0] <= w[1]), "{}: {:?}", scenario.name(), r.worst_case);
        for (w, p) in r.worst_case.iter().zip(&r.prediction) {
            assert!(*w <= RATIO_BAND_HIGH * p, "{}: {w} > 1.02·{p}", scenario.name());
        }
    }
}

#[test]
fn adversarial_worst_case_is_tight_once_sync_bound() {
    for scenario in [fixed_wing(), small_sv()] {
        let tau_crit = scenario.budget().unwrap().tau_crit();
        let r = run(scenario.clone(), config(NoiseMode::Adversarial, 64)).unwrap();
        for (tau, ratio) in r.taus.iter().zip(&r.ratio) {
            if *tau >= tau_crit {
                assert!(*ratio >= RATIO_BAND_LOW, "{} tau={tau}: {ratio}", scenario.name());
            }
        }
    }
}

#[test]
fn adversarial_values_have_exact_magnitudes() {
    let sim = Simulation::new(small_sv(), config(NoiseMode::Adversarial, 8)).unwrap();
    let mags = sim.source_magnitudes(1e-3);
    for trial in 0..8 {
        let (_, values) = sim.greedy_worst(trial, &mags).unwrap();
        for (v, m) in values.iter().zip(&mags) {
            assert_eq!(v.abs(), *m);
        }
    }
}

#[test]
fn evaluation_order_does_not_matter() {
    let sim = Simulation::new(fixed_wing(), config(NoiseMode::Stochastic, 40)).unwrap();
    let serial = sim.run().unwrap();
    let n = sim.config().tau_grid.len();
    let mut worst = vec![0.0_f64; n];
    // Reverse order over both axes.
    for i in (0..n).rev() {
        for k in (0..40).rev() {
            worst[i] = worst[i].max(sim.trial_error(i, k).unwrap());
        }
    }
    assert_eq!(sim.finish(worst).unwrap(), serial);
}

#[test]
fn runs_are_deterministic() {
    for mode in [NoiseMode::Adversarial, NoiseMode::Stochastic] {
        let a = run(small_sv(), config(mode, 16)).unwrap();
        let b = run(small_sv(), config(mode, 16)).unwrap();
        assert_eq!(a, b);
        assert!(a.ratio.iter().all(|r| r.is_finite()));
    }
}

#[test]
fn stochastic_errors_stay_below_adversarial_bound_on_average() {
    // Gaussian tails may exceed the σ-sum bound, but not typically.
    let r = run(fixed_wing(), config(NoiseMode::Stochastic, 64)).unwrap();
    let mean: f64 = r.ratio.iter().sum::<f64>() / r.ratio.len() as f64;
    assert!(mean < 1.0, "mean ratio {mean}");
}

#[test]
fn profile_limits() {
    let p = Registry::builtin().platform("Car").unwrap().clone();
    assert!(TrajectoryProfile::at_limits(&p, Pattern::Circular).validate_for(&p).is_ok());
    let over = TrajectoryProfile { speed: p.v_max * 1.1, turn_rate: 0.0, pattern: Pattern::Straight };
    assert!(over.validate_for(&p).is_err());
}
