//! Cross-module wiring through the public interface: seed runs feed
//! envelope fits and reconstructed fields, fronts feed tail fits and
//! reflections, and the reconstructed fields satisfy the equation they
//! came from. Exponents here differ from the unit suites' staples.

use selfsim::heteroclinic;
use selfsim::homoclinic::{self, Seed, AMP_FLOOR};
use selfsim::integrator::IntegratorConfig;
use selfsim::kernels::ProblemParams;
use selfsim::pde::{self, SelfSimilarProfile, Shift};

#[test]
fn decaying_seed_feeds_fit_and_field() {
    let k = ProblemParams::new(0.4).unwrap();
    let seed = Seed::new(0.6 * k.x_eq(), 0.0);
    let run = homoclinic::run_homoclinic(&k, seed, &homoclinic::recommended_config()).unwrap();
    assert_eq!(run.c_seed, k.lyapunov(seed.alpha, seed.beta));
    assert!(run.converged_plus && run.converged_minus);

    let env = homoclinic::extract_envelope(&run.forward, &k, 3.0, AMP_FLOOR).unwrap();
    let fit = homoclinic::fit_decay(&k, &env).unwrap();
    assert!((fit.gaussian_slope - 2.0 / (3.0 + k.p)).abs() < 0.04);

    // The reconstructed field evaluates the trajectory: at t = 1 the
    // similarity variable equals x, so u(eta, 1) must match the samples.
    let profile = SelfSimilarProfile::oscillatory(&k, &run, &fit);
    for s in run.forward.samples.iter().step_by(50) {
        let u = profile.u(s.eta, 1.0, Shift::NONE);
        assert!((u - s.x).abs() <= 1e-12, "eta {}: {} vs {}", s.eta, u, s.x);
    }
    // Beyond the horizon the tail model takes over and keeps decaying.
    let horizon = run.forward.terminal().eta;
    let inside = profile.u(horizon - 0.01, 1.0, Shift::NONE).abs();
    let beyond = profile.u(horizon + 1.0, 1.0, Shift::NONE).abs();
    assert!(beyond < inside.max(1e-13));

    // And the field solves the equation away from its zero crossings at
    // second order.
    let coarse = pde::pde_residual(&profile, 12.0, 513, 1.0).unwrap();
    let fine = pde::pde_residual(&profile, 12.0, 1025, 1.0).unwrap();
    let factor = coarse.max_smooth / fine.max_smooth;
    assert!((3.0..5.0).contains(&factor), "smooth residual factor {factor}");
}

#[test]
fn front_pipeline_reflects_and_saturates() {
    let k = ProblemParams::new(0.6).unwrap();
    let run = heteroclinic::bisect_beta(&k, &IntegratorConfig::default(), 1e-10).unwrap();
    let (lo, hi) = heteroclinic::bracket_bounds(&k);
    assert!(run.beta_star > lo && run.beta_star < hi);
    assert!(run.tail.is_some());

    let full = heteroclinic::extend_by_reflection(&run.trajectory);
    let n = full.len();
    assert_eq!(n, 2 * run.trajectory.samples.len() - 1);
    for (a, b) in full.iter().zip(full.iter().rev()) {
        assert_eq!(a.x, -b.x);
        assert_eq!(a.y, b.y);
    }

    // Far fields of the profile saturate at the equilibrium amplitudes,
    // odd in x by the reflection.
    let profile = SelfSimilarProfile::front(&k, &run).unwrap();
    let t: f64 = 1.7;
    let cap = t.powf(1.0 / (1.0 - k.p)) * k.x_eq();
    let right = profile.u(40.0 * t.sqrt(), t, Shift::NONE);
    let left = profile.u(-40.0 * t.sqrt(), t, Shift::NONE);
    assert!((right - cap).abs() <= 1e-6 * cap, "right {right} vs {cap}");
    assert!((left + cap).abs() <= 1e-6 * cap, "left {left} vs {}", -cap);
}

#[test]
fn survey_agrees_with_direct_run() {
    let k = ProblemParams::new(0.4).unwrap();
    let cfg = homoclinic::recommended_config();
    let seeds = homoclinic::sample_seeds(&k, 3, 7);
    let surveys: Vec<_> = selfsim::sweep::survey_seeds(&k, &seeds, &cfg)
        .into_iter()
        .collect::<Result<_, _>>()
        .unwrap();
    for (seed, survey) in seeds.iter().zip(&surveys) {
        let run = homoclinic::run_homoclinic(&k, *seed, &cfg).unwrap();
        assert_eq!(survey.seed, *seed);
        assert_eq!(survey.c_seed, run.c_seed);
        assert_eq!(survey.converged_plus, run.converged_plus);
        assert_eq!(survey.containment_ok, run.containment.ok);
    }
}
