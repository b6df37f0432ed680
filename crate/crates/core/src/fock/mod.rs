//! Brute-force truncated-Fock reference implementation.
//!
//! Everything here is deliberately direct: states are dense amplitude grids,
//! density matrices are dense d²×d² arrays, channels are explicit Kraus sums.
//! The point is an independent cross-check of the Gaussian engine and the
//! variational bound, not speed.
//!
//! The nonlinear beam splitter U = exp(ξâ†b̂† − ξ*âb̂), ξ = g e^{iθ_p}, is
//! applied in its normally ordered form
//!   U = exp(τ K₊) · exp(−2 ln(cosh g) K₀) · exp(−τ* K₋),
//! τ = e^{iθ_p} tanh g, K₊ = â†b̂†, K₋ = âb̂, K₀ = (n̂_a + n̂_b + 1)/2.
//! K₋ only lowers and K₊ only raises, so on a truncated grid the product is
//! exactly the projection of the untruncated result; the only error is the
//! input tail above n_max, which the leakage gate bounds.

pub mod channels;
pub mod qfi;

use ndarray::Array2;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::gaussian::{InputSpec, PhotonMoments, PumpSpec};

/// Largest supported truncation. Beyond this the single-exp log-domain
/// coefficients in the builder approach the f64 exponent range.
pub const N_MAX_LIMIT: usize = 320;

/// Probability allowed above the truncation edge.
pub const LEAK_TOL: f64 = 1e-8;

/// ln k! for k = 0..=n.
pub(crate) fn ln_factorials(n: usize) -> Vec<f64> {
    let mut lf = vec![0.0; n + 1];
    for k in 1..=n {
        lf[k] = lf[k - 1] + (k as f64).ln();
    }
    lf
}

/// Pure two-mode state on the truncated grid; `amps[(n_a, n_b)]`.
#[derive(Debug, Clone)]
pub struct FockVector {
    pub n_max: usize,
    pub amps: Array2<Complex64>,
}

impl FockVector {
    pub fn dim(&self) -> usize {
        self.n_max + 1
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Probability lost to truncation (clamped at 0 against rounding).
    pub fn leakage(&self) -> f64 {
        (1.0 - self.norm_sqr()).max(0.0)
    }

    /// Balanced phase imprint: e^{iφn̂_a/2} ⊗ e^{iφn̂_b/2}.
    pub fn apply_phase(&mut self, phi: f64) {
        for ((na, nb), a) in self.amps.indexed_iter_mut() {
            *a *= Complex64::from_polar(1.0, 0.5 * phi * (na + nb) as f64);
        }
    }

    /// Photon-number moments, normalised by the retained probability.
    pub fn moments(&self) -> PhotonMoments {
        let d = self.dim();
        let mut norm = 0.0;
        let (mut sa, mut sb, mut saa, mut sbb, mut sab) = (0.0, 0.0, 0.0, 0.0, 0.0);
        for na in 0..d {
            for nb in 0..d {
                let p = self.amps[(na, nb)].norm_sqr();
                let (fa, fb) = (na as f64, nb as f64);
                norm += p;
                sa += fa * p;
                sb += fb * p;
                saa += fa * fa * p;
                sbb += fb * fb * p;
                sab += fa * fb * p;
            }
        }
        let (ma, mb) = (sa / norm, sb / norm);
        PhotonMoments {
            mean_a: ma,
            mean_b: mb,
            var_a: (saa / norm - ma * ma).max(0.0),
            var_b: (sbb / norm - mb * mb).max(0.0),
            cov_ab: sab / norm - ma * mb,
        }
    }

    /// |ψ⟩⟨ψ| as a dense d²×d² matrix, flat index I = n_a·d + n_b.
    pub fn to_density(&self) -> Array2<Complex64> {
        let d = self.dim();
        let n = d * d;
        let flat = self.amps.as_slice().expect("amps are contiguous");
        Array2::from_shape_fn((n, n), |(i, j)| flat[i] * flat[j].conj())
    }
}

/// Photon-number moments of a density matrix (diagonal observables only),
/// normalised by the trace.
pub fn density_moments(rho: &Array2<Complex64>, n_max: usize) -> PhotonMoments {
    let d = n_max + 1;
    assert_eq!(rho.nrows(), d * d, "density dimension mismatch");
    let mut norm = 0.0;
    let (mut sa, mut sb, mut saa, mut sbb, mut sab) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for na in 0..d {
        for nb in 0..d {
            let i = na * d + nb;
            let p = rho[(i, i)].re;
            let (fa, fb) = (na as f64, nb as f64);
            norm += p;
            sa += fa * p;
            sb += fb * p;
            saa += fa * fa * p;
            sbb += fb * fb * p;
            sab += fa * fb * p;
        }
    }
    let (ma, mb) = (sa / norm, sb / norm);
    PhotonMoments {
        mean_a: ma,
        mean_b: mb,
        var_a: (saa / norm - ma * ma).max(0.0),
        var_b: (sbb / norm - mb * mb).max(0.0),
        cov_ab: sab / norm - ma * mb,
    }
}

fn coherent_amps(alpha_mag: f64, alpha_phase: f64, lf: &[f64], d: usize) -> Vec<Complex64> {
    let mut v = vec![Complex64::new(0.0, 0.0); d];
    if alpha_mag == 0.0 {
        v[0] = Complex64::new(1.0, 0.0);
        return v;
    }
    let ln_a = alpha_mag.ln();
    for (n, item) in v.iter_mut().enumerate() {
        let mag = (-0.5 * alpha_mag * alpha_mag + n as f64 * ln_a - 0.5 * lf[n]).exp();
        *item = Complex64::from_polar(mag, n as f64 * alpha_phase);
    }
    v
}

fn squeezed_vac_amps(r: f64, theta: f64, lf: &[f64], d: usize) -> Vec<Complex64> {
    let mut v = vec![Complex64::new(0.0, 0.0); d];
    if r == 0.0 {
        v[0] = Complex64::new(1.0, 0.0);
        return v;
    }
    // amp_{2m} = (cosh r)^{−1/2} (−e^{iθ} tanh r / 2)^m √(2m)!/m!
    let ln_half_t = (r.tanh() / 2.0).ln();
    let ln_ch = r.cosh().ln();
    for m in 0..=((d - 1) / 2) {
        let mag = (0.5 * lf[2 * m] - lf[m] + m as f64 * ln_half_t - 0.5 * ln_ch).exp();
        let phase = Complex64::from_polar(1.0, theta * m as f64) * if m % 2 == 0 { 1.0 } else { -1.0 };
        v[2 * m] = phase * mag;
    }
    v
}

/// Build U|α⟩_a ⊗ |r e^{iθ_ς}⟩_b on the truncated grid and gate the leakage.
pub fn build_state(spec: &InputSpec, pump: &PumpSpec, n_max: usize) -> Result<FockVector> {
    if n_max < 1 || n_max > N_MAX_LIMIT {
        return Err(Error::InvalidDomain {
            field: "n_max",
            value: n_max as f64,
            expected: "1 <= n_max <= 320",
        });
    }
    let d = n_max + 1;
    let lf = ln_factorials(2 * d);

    let ca = coherent_amps(spec.alpha_mag, spec.alpha_phase, &lf, d);
    let sb = squeezed_vac_amps(spec.squeeze_r, spec.squeeze_phase, &lf, d);
    let mut amps = Array2::from_shape_fn((d, d), |(na, nb)| ca[na] * sb[nb]);

    // g = 0 is the identity; amps already holds the input product.
    let g = pump.gain_g;
    if g > 0.0 {
        let tau = Complex64::from_polar(g.tanh(), pump.pump_phase);
        let ln_t = tau.norm().ln();
        let ln_ch = g.cosh().ln();

        // exp(−τ* K₋): lowers both modes by k.
        let unit_down = -tau.conj() / tau.norm();
        let mut lowered = Array2::from_elem((d, d), Complex64::new(0.0, 0.0));
        for m in 0..d {
            for n in 0..d {
                let mut acc = Complex64::new(0.0, 0.0);
                for k in 0..(d - m.max(n)) {
                    let logmag = k as f64 * ln_t - lf[k]
                        + 0.5 * (lf[m + k] - lf[m] + lf[n + k] - lf[n]);
                    acc += unit_down.powi(k as i32) * logmag.exp() * amps[(m + k, n + k)];
                }
                lowered[(m, n)] = acc;
            }
        }

        // exp(−2 ln(cosh g) K₀): diagonal damping (cosh g)^{−(m+n+1)}.
        for ((m, n), a) in lowered.indexed_iter_mut() {
            *a *= (-(((m + n) as f64) + 1.0) * ln_ch).exp();
        }

        // exp(τ K₊): raises both modes by k; anything beyond n_max would land
        // outside the grid in the untruncated result too.
        let unit_up = tau / tau.norm();
        for m in (0..d).rev() {
            for n in (0..d).rev() {
                let mut acc = Complex64::new(0.0, 0.0);
                for k in 0..=m.min(n) {
                    let logmag = k as f64 * ln_t - lf[k]
                        + 0.5 * (lf[m] - lf[m - k] + lf[n] - lf[n - k]);
                    acc += unit_up.powi(k as i32) * logmag.exp() * lowered[(m - k, n - k)];
                }
                amps[(m, n)] = acc;
            }
        }
    }

    let state = FockVector { n_max, amps };
    let leak = state.leakage();
    if leak > LEAK_TOL {
        return Err(Error::TruncationOverflow { leakage: leak, n_max });
    }
    Ok(state)
}
