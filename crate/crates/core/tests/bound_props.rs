//! Bound pipeline: frozen optima, reductions, audit flags, and the
//! structural inequalities of the variational bound.

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use su11_core::bound::{
    braced_quadratic, c_q_objective, gamma_lambda_closed_form, minimize_gamma, qfi_lossless,
    NoiseParams, VariationalParams,
};
use su11_core::gaussian::{moments_after_nbs, InputSpec, PhotonMoments, PumpSpec};
use su11_core::Error;

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

fn fig4_moments() -> PhotonMoments {
    let alpha = 1.0f64.exp() / 2.0;
    moments_after_nbs(
        &InputSpec::new(alpha, 0.0, 1.0, 0.0).unwrap(),
        &PumpSpec::new(2.0, 0.0).unwrap(),
    )
}

#[test]
fn fig4_lossless_qfi_frozen() {
    assert!(rel(qfi_lossless(&fig4_moments()), 8241.833235720922) < 1e-12);
}

#[test]
fn fig4_loss_optimum_frozen() {
    let m = fig4_moments();
    let noise = NoiseParams::new(0.9, 0.9, 0.0, 0.0).unwrap();
    let ((ga, gb), ct) = minimize_gamma(&m, &noise).unwrap();
    assert!(rel(ga, 8.71218453562213) < 1e-12);
    assert!(rel(gb, 9.060907303213991) < 1e-12);
    assert!(rel(ct, 915.4381926791534) < 1e-12);
}

#[test]
fn fig4_full_pipeline_frozen() {
    let m = fig4_moments();
    let noise = NoiseParams::new(0.9, 0.9, 0.01, 0.01).unwrap();
    let b = gamma_lambda_closed_form(&m, &noise).unwrap();
    assert!(rel(b.c_tilde, 915.4381926791534) < 1e-12);
    assert!(rel(b.lambda_opt, -0.26802950047269375) < 1e-12);
    assert!(rel(b.c_phi, 670.0737511817343) < 1e-12);
    assert!(rel(b.delta_phi, 0.038631244328849526) < 1e-12);
    assert!(rel(b.diffusion_floor, 4e-4) < 1e-12);
    assert!(!b.printed.degenerate_fallback);
}

#[test]
fn printed_form_audit_flags_transcription_slips() {
    // Equal-loss point: the literal closed form lands several percent off the
    // exact optimum and must be flagged; replacing the squared cross term
    // with the linear one reproduces the exact value to machine precision.
    let m = fig4_moments();
    let noise = NoiseParams::new(0.9, 0.9, 0.0, 0.0).unwrap();
    let b = gamma_lambda_closed_form(&m, &noise).unwrap();
    assert!(rel(b.printed.gamma_a, 22.534476219187873) < 1e-10);
    assert!(rel(b.printed.gamma_b, 21.741216675936666) < 1e-10);
    assert!(rel(b.printed.c_tilde_literal, 866.2537779373343) < 1e-10);
    assert!(rel(b.printed.c_tilde_linear_cross, b.c_tilde) < 1e-12);
    let flagged: Vec<&str> = b.printed.flags.iter().map(|f| f.component).collect();
    assert!(flagged.contains(&"gamma_prime_a"));
    assert!(flagged.contains(&"gamma_prime_b"));
    assert!(flagged.contains(&"c_tilde"));
}

#[test]
fn asymmetric_loss_point_frozen() {
    let m = fig4_moments();
    let noise = NoiseParams::new(0.7, 0.95, 0.0, 0.0).unwrap();
    let b = gamma_lambda_closed_form(&m, &noise).unwrap();
    assert!(rel(b.gamma_opt.0, 5.632837279502969) < 1e-12);
    assert!(rel(b.gamma_opt.1, 4.4059230175202915) < 1e-12);
    assert!(rel(b.c_tilde, 465.1809108212474) < 1e-12);
    assert!(rel(b.printed.gamma_a, 8.380232999132351) < 1e-10);
    assert!(rel(b.printed.gamma_b, 33.83277112873491) < 1e-10);
    assert!(rel(b.printed.c_tilde_literal, 3870.4946007920535) < 1e-10);
    assert!(rel(b.printed.c_tilde_linear_cross, b.c_tilde) < 1e-12);
}

#[test]
fn lossless_bound_collapses_to_qfi() {
    let m = fig4_moments();
    let b = gamma_lambda_closed_form(&m, &NoiseParams::lossless()).unwrap();
    assert_eq!(b.c_tilde, b.f_q_lossless);
    assert_eq!(b.gamma_opt, (1.0, 1.0));
    assert_eq!(b.lambda_opt, 0.0);
    assert_eq!(b.diffusion_floor, 0.0);
    assert!(b.printed.flags.is_empty(), "flags: {:?}", b.printed.flags);
}

#[test]
fn loss_only_reduction_is_exact() {
    // β = 0: λ_opt = 0 and Δφ = √(1/C̃) with no diffusion floor.
    let m = fig4_moments();
    for &eta in &[0.55, 0.7, 0.85, 0.95, 1.0] {
        let noise = NoiseParams::new(eta, eta, 0.0, 0.0).unwrap();
        let b = gamma_lambda_closed_form(&m, &noise).unwrap();
        assert_eq!(b.lambda_opt, 0.0);
        assert_eq!(b.diffusion_floor, 0.0);
        assert!(rel(b.delta_phi, (1.0 / b.c_tilde).sqrt()) < 1e-12);
        assert_eq!(b.c_phi, b.c_tilde);
    }
}

#[test]
fn diffusion_only_reduction_is_exact() {
    // η = 1, β_a = β_b = β: Δφ = √(1/F_Q + 4β²).
    let m = fig4_moments();
    let f_q = qfi_lossless(&m);
    for &beta in &[0.0, 0.003, 0.01, 0.1] {
        let noise = NoiseParams::new(1.0, 1.0, beta, beta).unwrap();
        let b = gamma_lambda_closed_form(&m, &noise).unwrap();
        assert!(rel(b.c_tilde, f_q) < 1e-15);
        assert!(rel(b.delta_phi, (1.0 / f_q + 4.0 * beta * beta).sqrt()) < 1e-12);
    }
}

#[test]
fn optimum_beats_random_variational_points() {
    let m = fig4_moments();
    let noise = NoiseParams::new(0.8, 0.9, 0.02, 0.05).unwrap();
    let b = gamma_lambda_closed_form(&m, &noise).unwrap();
    let at_opt = c_q_objective(
        &m,
        &noise,
        &VariationalParams {
            gamma_prime_a: b.gamma_opt.0,
            gamma_prime_b: b.gamma_opt.1,
            lambda: b.lambda_opt,
        },
    );
    assert!(rel(at_opt, b.c_phi) < 1e-12);
    let mut rng = StdRng::seed_from_u64(7);
    for _ in 0..1000 {
        let v = VariationalParams {
            gamma_prime_a: rng.gen_range(-5.0..12.0),
            gamma_prime_b: rng.gen_range(-5.0..12.0),
            lambda: rng.gen_range(-0.95..0.95),
        };
        assert!(c_q_objective(&m, &noise, &v) >= at_opt * (1.0 - 1e-9));
    }
}

#[test]
fn optimum_is_stationary_under_finite_differences() {
    let m = fig4_moments();
    let noise = NoiseParams::new(0.8, 0.9, 0.02, 0.05).unwrap();
    let b = gamma_lambda_closed_form(&m, &noise).unwrap();
    let f = |ga: f64, gb: f64, l: f64| {
        c_q_objective(
            &m,
            &noise,
            &VariationalParams { gamma_prime_a: ga, gamma_prime_b: gb, lambda: l },
        )
    };
    let (ga, gb, l) = (b.gamma_opt.0, b.gamma_opt.1, b.lambda_opt);
    let h = 1e-4;
    let scale = b.c_phi.max(1.0);
    assert!((f(ga + h, gb, l) - f(ga - h, gb, l)).abs() / (2.0 * h) / scale < 1e-6);
    assert!((f(ga, gb + h, l) - f(ga, gb - h, l)).abs() / (2.0 * h) / scale < 1e-6);
    assert!((f(ga, gb, l + h) - f(ga, gb, l - h)).abs() / (2.0 * h) / scale < 1e-6);
}

#[test]
fn delta_phi_respects_the_algebraic_diffusion_floor() {
    let m = fig4_moments();
    for &(ba, bb) in &[(0.01, 0.01), (0.003, 0.05), (0.1, 0.02), (0.0, 0.08)] {
        for &eta in &[0.6, 0.9, 1.0] {
            let noise = NoiseParams::new(eta, eta, ba, bb).unwrap();
            let b = gamma_lambda_closed_form(&m, &noise).unwrap();
            let floor = if ba == 0.0 || bb == 0.0 {
                0.0
            } else {
                8.0 * ba * ba * bb * bb / (ba * ba + bb * bb)
            };
            assert!(b.delta_phi * b.delta_phi >= floor - 1e-15);
        }
    }
}

#[test]
fn beta_limit_is_continuous_at_zero() {
    let m = fig4_moments();
    for &eta in &[0.7, 1.0] {
        let at_zero = gamma_lambda_closed_form(&m, &NoiseParams::new(eta, eta, 0.0, 0.0).unwrap())
            .unwrap()
            .delta_phi;
        let near_zero =
            gamma_lambda_closed_form(&m, &NoiseParams::new(eta, eta, 1e-8, 1e-8).unwrap())
                .unwrap()
                .delta_phi;
        assert!((near_zero - at_zero).abs() < 1e-6);
    }
}

#[test]
fn delta_phi_is_monotone_in_each_noise_parameter() {
    let m = fig4_moments();
    let dphi = |eta: f64, beta: f64| {
        gamma_lambda_closed_form(&m, &NoiseParams::new(eta, eta, beta, beta).unwrap())
            .unwrap()
            .delta_phi
    };
    let etas: Vec<f64> = (1..=10).map(|i| 0.1 * i as f64).collect();
    let betas: Vec<f64> = (0..10).map(|i| 0.02 * i as f64).collect();
    for &eta in &etas {
        for w in betas.windows(2) {
            assert!(dphi(eta, w[1]) >= dphi(eta, w[0]) - 1e-12);
        }
    }
    for &beta in &betas {
        for w in etas.windows(2) {
            assert!(dphi(w[1], beta) <= dphi(w[0], beta) + 1e-12);
        }
    }
}

#[test]
fn braced_quadratic_matches_objective_at_lambda_zero() {
    let m = fig4_moments();
    let noise = NoiseParams::new(0.8, 0.7, 0.05, 0.02).unwrap();
    for &(ga, gb) in &[(0.0, 0.0), (1.0, 1.0), (-0.7, 2.4), (9.3, 8.1)] {
        let e = braced_quadratic(&m, &noise, ga, gb);
        let v = VariationalParams { gamma_prime_a: ga, gamma_prime_b: gb, lambda: 0.0 };
        assert!(rel(c_q_objective(&m, &noise, &v), e) < 1e-15);
    }
}

#[test]
fn zero_beta_forbids_environment_rotation() {
    let m = fig4_moments();
    let noise = NoiseParams::new(0.9, 0.9, 0.0, 0.05).unwrap();
    let v = VariationalParams { gamma_prime_a: 1.0, gamma_prime_b: 1.0, lambda: -0.3 };
    assert_eq!(c_q_objective(&m, &noise, &v), f64::INFINITY);
}

#[test]
fn degenerate_moments_are_reported() {
    // A vacuum arm with loss has no stationary point: the solve reports it
    // and the pipeline refuses (A_i undefined at var = 0).
    let vac = moments_after_nbs(&InputSpec::vacuum(), &PumpSpec::new(0.0, 0.0).unwrap());
    let noise = NoiseParams::new(0.9, 0.9, 0.0, 0.0).unwrap();
    assert_eq!(minimize_gamma(&vac, &noise), Err(Error::DegenerateMoments));
    assert_eq!(
        gamma_lambda_closed_form(&vac, &noise).unwrap_err(),
        Error::DegenerateMoments
    );
}

#[test]
fn noise_domain_is_enforced() {
    assert!(matches!(
        NoiseParams::new(0.0, 1.0, 0.0, 0.0),
        Err(Error::InvalidDomain { field: "eta_a", .. })
    ));
    assert!(matches!(
        NoiseParams::new(1.0, 1.2, 0.0, 0.0),
        Err(Error::InvalidDomain { field: "eta_b", .. })
    ));
    assert!(matches!(
        NoiseParams::new(1.0, 1.0, -0.01, 0.0),
        Err(Error::InvalidDomain { field: "beta_a", .. })
    ));
}
