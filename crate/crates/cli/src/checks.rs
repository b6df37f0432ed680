//! Self-test suite behind `su11 oracle-check`: every dual-route identity the
//! library promises, evaluated at fixed reference points. Each check reports
//! its worst deviation against the advertised tolerance; the command exits
//! non-zero if any line fails.

use num_complex::Complex64;

use su11_core::bound::{c_q_objective, gamma_lambda_closed_form, NoiseParams, VariationalParams};
use su11_core::critical::{beta_threshold, n_total, sql, ThresholdStatus};
use su11_core::fock::channels::{apply_channels, apply_dephasing, apply_loss_a, apply_loss_b};
use su11_core::fock::qfi::{kraus_cq_check, mixed_qfi};
use su11_core::fock::build_state;
use su11_core::gaussian::{moments_after_nbs, InputSpec, PumpSpec};
use su11_core::Result;

pub struct CheckLine {
    pub name: &'static str,
    pub dev: f64,
    pub tol: f64,
}

impl CheckLine {
    pub fn passed(&self) -> bool {
        self.dev < self.tol
    }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

/// Runs the whole suite; `n_max` sizes the mixed-state pipeline (≥ 30 keeps
/// the reference point under the truncation gate).
pub fn run_suite(n_max: usize) -> Result<Vec<CheckLine>> {
    let mut lines = Vec::new();

    // Closed-form limits.
    {
        let m = moments_after_nbs(
            &InputSpec::new(0.0, 0.0, 0.0, 0.0)?,
            &PumpSpec::new(2.0, 0.0)?,
        );
        let b = gamma_lambda_closed_form(&m, &NoiseParams::new(1.0, 1.0, 0.0, 0.0)?)?;
        lines.push(CheckLine {
            name: "noiseless_recovery",
            dev: rel(b.delta_phi, 1.0 / 4.0f64.sinh()),
            tol: 1e-12,
        });
    }
    let fig_spec = InputSpec::new(1.0f64.exp() / 2.0, 0.0, 1.0, 0.0)?;
    let fig_pump = PumpSpec::new(2.0, 0.0)?;
    let fig_m = moments_after_nbs(&fig_spec, &fig_pump);
    {
        let b = gamma_lambda_closed_form(&fig_m, &NoiseParams::new(0.8, 0.8, 0.0, 0.0)?)?;
        let dev = rel(b.delta_phi, (1.0 / b.c_tilde).sqrt()).max(b.lambda_opt.abs());
        lines.push(CheckLine { name: "loss_only_reduction", dev, tol: 1e-12 });
    }
    {
        let b = gamma_lambda_closed_form(&fig_m, &NoiseParams::new(1.0, 1.0, 0.05, 0.05)?)?;
        let dev = rel(b.delta_phi, (1.0 / b.f_q_lossless + 4.0 * 0.05 * 0.05).sqrt());
        lines.push(CheckLine { name: "diffusion_only_reduction", dev, tol: 1e-12 });
    }

    // Reference mixed pipeline: coherent ⊗ squeezed through the pump, both
    // losses, both dephasings.
    let spec = InputSpec::new(0.6, 0.0, 0.3, 0.0)?;
    let pump = PumpSpec::new(0.7, 0.0)?;
    let noise = NoiseParams::new(0.85, 0.9, 0.06, 0.04)?;
    let psi = build_state(&spec, &pump, n_max)?;

    {
        let deep = build_state(&spec, &pump, 40)?;
        let wick = moments_after_nbs(&spec, &pump);
        let m = deep.moments();
        let dev = [
            rel(m.mean_a, wick.mean_a),
            rel(m.mean_b, wick.mean_b),
            rel(m.var_a, wick.var_a),
            rel(m.var_b, wick.var_b),
            rel(m.cov_ab, wick.cov_ab),
        ]
        .into_iter()
        .fold(0.0, f64::max);
        lines.push(CheckLine { name: "moment_oracle", dev, tol: 1e-7 });
    }
    {
        let tmsv = build_state(&InputSpec::new(0.0, 0.0, 0.0, 0.0)?, &PumpSpec::new(0.8, 0.0)?, 60)?;
        let (t, ch) = (0.8f64.tanh(), 0.8f64.cosh());
        let mut dev = 0.0f64;
        for n in 0..=60usize {
            let want = Complex64::new(t.powi(n as i32) / ch, 0.0);
            dev = dev.max((tmsv.amps[(n, n)] - want).norm());
        }
        lines.push(CheckLine { name: "tmsv_amplitudes", dev, tol: 1e-12 });
    }

    let small = build_state(&InputSpec::new(0.4, 0.0, 0.2, 0.0)?, &PumpSpec::new(0.4, 0.0)?, 16)?;
    let rho_small = small.to_density();
    let d = small.dim();
    let trace = |r: &ndarray::Array2<Complex64>| -> f64 { (0..d * d).map(|i| r[(i, i)].re).sum() };
    {
        let after = apply_loss_b(&apply_loss_a(&rho_small, 0.7, 16), 0.55, 16);
        lines.push(CheckLine {
            name: "loss_trace_preservation",
            dev: rel(trace(&after), trace(&rho_small)),
            tol: 1e-14,
        });
    }
    {
        let out = apply_dephasing(&rho_small, 0.1, 0.0, 16);
        let damp = (-0.01f64).exp();
        let dev = (out[(d, 0)] - rho_small[(d, 0)] * damp).norm();
        lines.push(CheckLine { name: "dephasing_factor", dev, tol: 1e-14 });
    }
    {
        let ab = apply_dephasing(&apply_loss_a(&rho_small, 0.8, 16), 0.05, 0.07, 16);
        let ba = apply_loss_a(&apply_dephasing(&rho_small, 0.05, 0.07, 16), 0.8, 16);
        let dev = ab
            .iter()
            .zip(ba.iter())
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max);
        lines.push(CheckLine { name: "channel_commutation", dev, tol: 1e-15 });
    }

    {
        let m = psi.moments();
        let b = gamma_lambda_closed_form(&m, &noise)?;
        let mut dev = 0.0f64;
        for v in [
            VariationalParams {
                gamma_prime_a: b.gamma_opt.0,
                gamma_prime_b: b.gamma_opt.1,
                lambda: b.lambda_opt,
            },
            VariationalParams { gamma_prime_a: -0.6, gamma_prime_b: 0.5, lambda: 0.2 },
        ] {
            dev = dev.max(rel(kraus_cq_check(&psi, &noise, &v), c_q_objective(&m, &noise, &v)));
        }
        lines.push(CheckLine { name: "dual_route_cq", dev, tol: 1e-8 });
    }
    {
        let rho = apply_channels(&psi.to_density(), &noise, n_max);
        let f_mixed = mixed_qfi(&rho, n_max)?;
        let b = gamma_lambda_closed_form(&moments_after_nbs(&spec, &pump), &noise)?;
        // Signed slack: negative means the chain holds with room to spare.
        let dev = [
            (f_mixed - b.c_phi) / b.c_phi,
            (b.c_phi - b.c_tilde) / b.c_tilde,
            (b.c_tilde - b.f_q_lossless) / b.f_q_lossless,
        ]
        .into_iter()
        .fold(f64::NEG_INFINITY, f64::max);
        lines.push(CheckLine { name: "qfi_sandwich", dev, tol: 1e-6 });
    }

    {
        let r = 1.5f64;
        let locked = InputSpec::new(r.exp() / 2.0, 0.0, r, 0.0)?;
        let m = moments_after_nbs(&locked, &fig_pump);
        let res = beta_threshold(&m)?;
        let dev = if res.status == ThresholdStatus::Found {
            let beta = res.critical_value;
            let b = gamma_lambda_closed_form(&m, &NoiseParams::new(1.0, 1.0, beta, beta)?)?;
            rel(b.delta_phi, sql(n_total(&m))?)
        } else {
            f64::INFINITY
        };
        lines.push(CheckLine { name: "root_certification", dev, tol: 1e-9 });
    }

    Ok(lines)
}
