//! Exact noise channels on the truncated two-mode density matrix.
//!
//! Loss is the standard beam-splitter Kraus family applied elementwise:
//!   ρ′_{m,n} = Σ_l B_l(m,n) ρ_{m+l,n+l},
//!   B_l = (1−η)^l/l! · √((m+l)!/m! (n+l)!/n!) · η^{(m+n)/2},
//! per mode. The l-sum telescopes the binomial theorem on the diagonal, so
//! the map is exactly trace-preserving on the truncated space. Phase
//! diffusion is diagonal: a Gaussian dephasing factor e^{−β²(m−n)²} on each
//! mode's coherences. All three channels commute.

use ndarray::Array2;
use num_complex::Complex64;

use super::ln_factorials;
use crate::bound::NoiseParams;

fn loss_weight(l: usize, m: usize, n: usize, eta: f64, lf: &[f64]) -> f64 {
    // l = 0 must not touch ln1p(−η): at η = 1 that is 0·(−∞).
    let decay = if l == 0 { 0.0 } else { l as f64 * (-eta).ln_1p() };
    (decay - lf[l]
        + 0.5 * (lf[m + l] - lf[m] + lf[n + l] - lf[n])
        + 0.5 * ((m + n) as f64) * eta.ln())
    .exp()
}

/// Photon loss with transmission η on mode a. Flat index I = n_a·d + n_b.
pub fn apply_loss_a(rho: &Array2<Complex64>, eta: f64, n_max: usize) -> Array2<Complex64> {
    let d = n_max + 1;
    assert_eq!(rho.nrows(), d * d, "density dimension mismatch");
    let lf = ln_factorials(2 * d);
    let mut out = Array2::from_elem(rho.dim(), Complex64::new(0.0, 0.0));
    for l in 0..d {
        if eta == 1.0 && l > 0 {
            break;
        }
        for m in 0..(d - l) {
            for n in 0..(d - l) {
                let w = loss_weight(l, m, n, eta, &lf);
                for mb in 0..d {
                    for nb in 0..d {
                        out[(m * d + mb, n * d + nb)] +=
                            w * rho[((m + l) * d + mb, (n + l) * d + nb)];
                    }
                }
            }
        }
    }
    out
}

/// Photon loss with transmission η on mode b.
pub fn apply_loss_b(rho: &Array2<Complex64>, eta: f64, n_max: usize) -> Array2<Complex64> {
    let d = n_max + 1;
    assert_eq!(rho.nrows(), d * d, "density dimension mismatch");
    let lf = ln_factorials(2 * d);
    let mut out = Array2::from_elem(rho.dim(), Complex64::new(0.0, 0.0));
    for l in 0..d {
        if eta == 1.0 && l > 0 {
            break;
        }
        for m in 0..(d - l) {
            for n in 0..(d - l) {
                let w = loss_weight(l, m, n, eta, &lf);
                for ma in 0..d {
                    for na in 0..d {
                        out[(ma * d + m, na * d + n)] +=
                            w * rho[(ma * d + m + l, na * d + n + l)];
                    }
                }
            }
        }
    }
    out
}

/// Collective-dephasing damping e^{−β_a²(m_a−n_a)²} e^{−β_b²(m_b−n_b)²}.
pub fn apply_dephasing(
    rho: &Array2<Complex64>,
    beta_a: f64,
    beta_b: f64,
    n_max: usize,
) -> Array2<Complex64> {
    let d = n_max + 1;
    assert_eq!(rho.nrows(), d * d, "density dimension mismatch");
    let mut out = rho.clone();
    for ((i, j), v) in out.indexed_iter_mut() {
        let (ma, mb) = (i / d, i % d);
        let (na, nb) = (j / d, j % d);
        let da = ma as f64 - na as f64;
        let db = mb as f64 - nb as f64;
        *v *= (-beta_a * beta_a * da * da - beta_b * beta_b * db * db).exp();
    }
    out
}

/// Both losses followed by dephasing (the order is immaterial).
pub fn apply_channels(
    rho: &Array2<Complex64>,
    noise: &NoiseParams,
    n_max: usize,
) -> Array2<Complex64> {
    let after_loss = apply_loss_b(&apply_loss_a(rho, noise.eta_a, n_max), noise.eta_b, n_max);
    apply_dephasing(&after_loss, noise.beta_a, noise.beta_b, n_max)
}
