//! Gaussian engine: frozen reference values and structural properties.

use su11_core::gaussian::{
    apply_nbs, moments_after_nbs, photon_moments, prepare_input, GaussianState, InputSpec,
    PhotonMoments, PumpSpec,
};
use su11_core::Error;

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

fn fig4_input() -> (InputSpec, PumpSpec) {
    // g = 2, r = 1, |α|² = e²/4, all phases zero.
    let alpha = 1.0f64.exp() / 2.0;
    (
        InputSpec::new(alpha, 0.0, 1.0, 0.0).unwrap(),
        PumpSpec::new(2.0, 0.0).unwrap(),
    )
}

#[test]
fn vacuum_covariance_is_half_identity() {
    let s = GaussianState::vacuum();
    for i in 0..4 {
        for j in 0..4 {
            assert_eq!(s.cov[i][j], if i == j { 0.5 } else { 0.0 });
        }
    }
    let [lo, hi] = s.symplectic_eigenvalues();
    assert!((lo - 0.5).abs() < 1e-14 && (hi - 0.5).abs() < 1e-14);
}

#[test]
fn tmsv_moments_match_closed_form() {
    // Vacuum in at g = 2: mean = sinh²(2), var = cov = sinh²(2)cosh²(2).
    let pump = PumpSpec::new(2.0, 0.0).unwrap();
    let m = moments_after_nbs(&InputSpec::vacuum(), &pump);
    let sh2 = 2.0f64.sinh().powi(2);
    let ch2 = 2.0f64.cosh().powi(2);
    assert!(rel(m.mean_a, sh2) < 1e-12);
    assert!(rel(m.mean_b, sh2) < 1e-12);
    assert!(rel(m.var_a, sh2 * ch2) < 1e-12);
    assert!(rel(m.var_b, sh2 * ch2) < 1e-12);
    assert!(rel(m.cov_ab, sh2 * ch2) < 1e-12);
}

#[test]
fn vacuum_g1_cross_covariance_entry() {
    // cov[x_a, x_b] = ½ sinh(2g) cos θ_p; at g = 1, θ_p = 0 this is ½ sinh 2.
    let pump = PumpSpec::new(1.0, 0.0).unwrap();
    let s = apply_nbs(&GaussianState::vacuum(), &pump);
    assert!(rel(s.cov[0][2], 0.5 * 2.0f64.sinh()) < 1e-12);
    s.validate().unwrap();
}

#[test]
fn fig4_moments_frozen() {
    let (spec, pump) = fig4_input();
    let m = moments_after_nbs(&spec, &pump);
    assert!(rel(m.mean_a, 57.46762832379021) < 1e-12);
    assert!(rel(m.mean_b, 57.00146214459936) < 1e-12);
    assert!(rel(m.var_a, 1997.983229063404) < 1e-12);
    assert!(rel(m.var_b, 2127.1455499139256) < 1e-12);
    assert!(rel(m.cov_ab, 2058.352228371796) < 1e-12);
}

#[test]
fn identity_nbs_returns_input_statistics() {
    // g = 0: coherent arm keeps Poisson statistics, squeezed arm keeps
    // n = sinh²r, Var = 2 sinh²r cosh²r, and no cross-covariance.
    let spec = InputSpec::new(2.0, 0.3, 0.8, 1.1).unwrap();
    let pump = PumpSpec::new(0.0, 0.0).unwrap();
    let m = moments_after_nbs(&spec, &pump);
    let (sh2, ch2) = (0.8f64.sinh().powi(2), 0.8f64.cosh().powi(2));
    assert!(rel(m.mean_a, 4.0) < 1e-12);
    assert!(rel(m.var_a, 4.0) < 1e-12);
    assert!(rel(m.mean_b, sh2) < 1e-12);
    assert!(rel(m.var_b, 2.0 * sh2 * ch2) < 1e-12);
    assert!(m.cov_ab.abs() < 1e-12);
}

#[test]
fn purity_is_preserved_by_nbs() {
    for &g in &[0.0, 0.5, 1.2, 2.0] {
        for &r in &[0.0, 0.4, 1.0] {
            for &alpha in &[0.0, 0.7, 1.4] {
                let spec = InputSpec::new(alpha, 0.4, r, 2.1).unwrap();
                let pump = PumpSpec::new(g, 0.9).unwrap();
                let s = apply_nbs(&prepare_input(&spec), &pump);
                s.validate().unwrap();
                let [lo, hi] = s.symplectic_eigenvalues();
                assert!((lo - 0.5).abs() < 1e-9, "nu_minus = {lo} at g={g}, r={r}");
                assert!((hi - 0.5).abs() < 1e-9, "nu_plus = {hi} at g={g}, r={r}");
            }
        }
    }
}

#[test]
fn photon_moments_are_phase_covariant() {
    // Rotating the mode phases (δ_a, δ_b) maps θ_α → θ_α + δ_a,
    // θ_ς → θ_ς + 2δ_b, θ_p → θ_p + δ_a + δ_b and leaves every
    // photon-number moment fixed.
    let base = moments_after_nbs(
        &InputSpec::new(1.1, 0.3, 0.8, 0.7).unwrap(),
        &PumpSpec::new(1.4, 1.9).unwrap(),
    );
    for &(da, db) in &[(0.53, -1.17), (2.9, 0.44), (-0.8, -2.3)] {
        let m = moments_after_nbs(
            &InputSpec::new(1.1, 0.3 + da, 0.8, 0.7 + 2.0 * db).unwrap(),
            &PumpSpec::new(1.4, 1.9 + da + db).unwrap(),
        );
        assert!(rel(m.mean_a, base.mean_a) < 1e-10);
        assert!(rel(m.mean_b, base.mean_b) < 1e-10);
        assert!(rel(m.var_a, base.var_a) < 1e-10);
        assert!(rel(m.var_b, base.var_b) < 1e-10);
        assert!(rel(m.cov_ab, base.cov_ab) < 1e-10);
    }
}

#[test]
fn total_mean_photon_number_increases_with_gain() {
    let spec = InputSpec::new(0.9, 0.0, 0.6, 0.0).unwrap();
    let mut prev = f64::NEG_INFINITY;
    for i in 0..30 {
        let g = 0.1 * i as f64;
        let m = moments_after_nbs(&spec, &PumpSpec::new(g, 0.0).unwrap());
        let n_tot = m.mean_a + m.mean_b;
        assert!(n_tot > prev, "N_Tot not increasing at g = {g}");
        prev = n_tot;
    }
}

#[test]
fn phases_are_wrapped_into_principal_range() {
    let tau = std::f64::consts::TAU;
    let spec = InputSpec::new(1.0, -1.0, 0.5, 3.0 * tau + 0.25).unwrap();
    assert!((spec.alpha_phase - (tau - 1.0)).abs() < 1e-12);
    assert!((spec.squeeze_phase - 0.25).abs() < 1e-12);
    let pump = PumpSpec::new(1.0, -tau).unwrap();
    assert!(pump.pump_phase.abs() < 1e-12);
}

#[test]
fn domain_violations_are_rejected() {
    assert!(matches!(
        InputSpec::new(-0.1, 0.0, 0.0, 0.0),
        Err(Error::InvalidDomain { field: "alpha_mag", .. })
    ));
    assert!(matches!(
        InputSpec::new(0.0, 0.0, -1.0, 0.0),
        Err(Error::InvalidDomain { field: "squeeze_r", .. })
    ));
    assert!(matches!(
        InputSpec::new(0.0, f64::NAN, 0.0, 0.0),
        Err(Error::InvalidDomain { field: "phase", .. })
    ));
    assert!(matches!(
        PumpSpec::new(-0.5, 0.0),
        Err(Error::InvalidDomain { field: "gain_g", .. })
    ));
    assert!(matches!(
        PhotonMoments::new(1.0, 1.0, -0.2, 1.0, 0.0),
        Err(Error::InvalidDomain { field: "var_a", .. })
    ));
    // Cauchy–Schwarz: |cov| may not exceed √(var_a·var_b) (plus slack).
    assert!(matches!(
        PhotonMoments::new(1.0, 1.0, 1.0, 1.0, 1.5),
        Err(Error::InvalidDomain { field: "cov_ab", .. })
    ));
    assert!(PhotonMoments::new(1.0, 1.0, 1.0, 1.0, 1.0 + 1e-10).is_ok());
}

#[test]
fn moments_agree_between_direct_and_convenience_paths() {
    let (spec, pump) = fig4_input();
    let via_state = photon_moments(&apply_nbs(&prepare_input(&spec), &pump));
    let direct = moments_after_nbs(&spec, &pump);
    assert_eq!(via_state, direct);
}
