//! Gaussian input preparation, the nonlinear-beam-splitter transform, and
//! exact photon-number moment extraction.
//!
//! Conventions: quadratures x = (â + â†)/√2, p = (â − â†)/(i√2), vacuum
//! covariance ½·I, state vector ordered (x_a, p_a, x_b, p_b). A displacement
//! by α contributes mean (√2 Re α, √2 Im α). Squeeze phase θ_ς = 0 squeezes
//! x (variance ½e^{−2r}).

use num_complex::Complex64;
use std::f64::consts::TAU;

use crate::error::{Error, Result};

fn wrap_phase(phi: f64) -> f64 {
    phi.rem_euclid(TAU)
}

/// Coherent ⊗ squeezed-vacuum input: mode a carries |α| e^{iθ_α}, mode b a
/// squeezed vacuum with parameter r e^{iθ_ς}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InputSpec {
    pub alpha_mag: f64,
    pub alpha_phase: f64,
    pub squeeze_r: f64,
    pub squeeze_phase: f64,
}

impl InputSpec {
    pub fn new(alpha_mag: f64, alpha_phase: f64, squeeze_r: f64, squeeze_phase: f64) -> Result<Self> {
        if !(alpha_mag >= 0.0) || !alpha_mag.is_finite() {
            return Err(Error::InvalidDomain {
                field: "alpha_mag",
                value: alpha_mag,
                expected: "finite real >= 0",
            });
        }
        if !(squeeze_r >= 0.0) || !squeeze_r.is_finite() {
            return Err(Error::InvalidDomain {
                field: "squeeze_r",
                value: squeeze_r,
                expected: "finite real >= 0",
            });
        }
        if !alpha_phase.is_finite() || !squeeze_phase.is_finite() {
            return Err(Error::InvalidDomain {
                field: "phase",
                value: if alpha_phase.is_finite() { squeeze_phase } else { alpha_phase },
                expected: "finite radians",
            });
        }
        Ok(Self {
            alpha_mag,
            alpha_phase: wrap_phase(alpha_phase),
            squeeze_r,
            squeeze_phase: wrap_phase(squeeze_phase),
        })
    }

    pub fn vacuum() -> Self {
        Self { alpha_mag: 0.0, alpha_phase: 0.0, squeeze_r: 0.0, squeeze_phase: 0.0 }
    }

    pub fn alpha(&self) -> Complex64 {
        Complex64::from_polar(self.alpha_mag, self.alpha_phase)
    }
}

/// Strength g and pump phase of the nonlinear beam splitter
/// â_out = cosh(g) â + e^{iθ_p} sinh(g) b̂†.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PumpSpec {
    pub gain_g: f64,
    pub pump_phase: f64,
}

impl PumpSpec {
    pub fn new(gain_g: f64, pump_phase: f64) -> Result<Self> {
        if !(gain_g >= 0.0) || !gain_g.is_finite() {
            return Err(Error::InvalidDomain {
                field: "gain_g",
                value: gain_g,
                expected: "finite real >= 0",
            });
        }
        if !pump_phase.is_finite() {
            return Err(Error::InvalidDomain {
                field: "pump_phase",
                value: pump_phase,
                expected: "finite radians",
            });
        }
        Ok(Self { gain_g, pump_phase: wrap_phase(pump_phase) })
    }
}

/// Two-mode Gaussian state: quadrature mean vector and 4×4 covariance.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianState {
    pub mean: [f64; 4],
    pub cov: [[f64; 4]; 4],
}

/// Cyclic Jacobi eigensolver for a symmetric 4×4: returns the (unsorted)
/// eigenvalues and the orthogonal matrix of eigenvectors (column j = vector
/// for eigenvalue j). Converges to machine precision in a handful of sweeps.
fn sym_eig4(mut a: [[f64; 4]; 4]) -> ([f64; 4], [[f64; 4]; 4]) {
    let mut v = [[0.0; 4]; 4];
    for (i, row) in v.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    for _ in 0..50 {
        let mut off = 0.0;
        let mut frob = 0.0;
        for p in 0..4 {
            for q in 0..4 {
                frob += a[p][q] * a[p][q];
                if p != q {
                    off += a[p][q] * a[p][q];
                }
            }
        }
        if off <= 1e-30 * frob || frob == 0.0 {
            break;
        }
        for p in 0..3 {
            for q in (p + 1)..4 {
                if a[p][q] == 0.0 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..4 {
                    let (akp, akq) = (a[k][p], a[k][q]);
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..4 {
                    let (apk, aqk) = (a[p][k], a[q][k]);
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
                for k in 0..4 {
                    let (vkp, vkq) = (v[k][p], v[k][q]);
                    v[k][p] = c * vkp - s * vkq;
                    v[k][q] = s * vkp + c * vkq;
                }
            }
        }
    }
    ([a[0][0], a[1][1], a[2][2], a[3][3]], v)
}

fn mat4_mul(a: &[[f64; 4]; 4], b: &[[f64; 4]; 4]) -> [[f64; 4]; 4] {
    let mut c = [[0.0; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            c[i][j] = (0..4).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    c
}

/// Symplectic form in (x_a, p_a, x_b, p_b) ordering.
const OMEGA: [[f64; 4]; 4] = [
    [0.0, 1.0, 0.0, 0.0],
    [-1.0, 0.0, 0.0, 0.0],
    [0.0, 0.0, 0.0, 1.0],
    [0.0, 0.0, -1.0, 0.0],
];

impl GaussianState {
    pub fn vacuum() -> Self {
        let mut cov = [[0.0; 4]; 4];
        for (i, row) in cov.iter_mut().enumerate() {
            row[i] = 0.5;
        }
        Self { mean: [0.0; 4], cov }
    }

    /// Symplectic spectrum {ν₋, ν₊} via the Williamson reduction:
    /// K = σ^{1/2} Ω σ^{1/2} is real antisymmetric, and the eigenvalues of
    /// −K² are {ν₋², ν₋², ν₊², ν₊²}. (The textbook invariant formula
    /// ν±² = (Δ ± √(Δ²−4detσ))/2 cancels catastrophically at large squeezing;
    /// this route keeps absolute error near machine precision.)
    /// Physical states have ν ≥ ½; pure states have ν₋ = ν₊ = ½.
    pub fn symplectic_eigenvalues(&self) -> [f64; 2] {
        let (d, u) = sym_eig4(self.cov);
        // σ^{1/2} = U √D Uᵀ.
        let mut sqrt_d_ut = [[0.0; 4]; 4];
        for i in 0..4 {
            let root = d[i].max(0.0).sqrt();
            for j in 0..4 {
                sqrt_d_ut[i][j] = root * u[j][i];
            }
        }
        let s_half = mat4_mul(&u, &sqrt_d_ut);
        let k = mat4_mul(&s_half, &mat4_mul(&OMEGA, &s_half));
        let mut b = mat4_mul(&k, &k);
        for i in 0..4 {
            for j in i..4 {
                let avg = -0.5 * (b[i][j] + b[j][i]);
                b[i][j] = avg;
                b[j][i] = avg;
            }
        }
        let (mut e, _) = sym_eig4(b);
        e.sort_by(|x, y| x.partial_cmp(y).unwrap());
        // The spectrum is doubly degenerate; average each pair.
        [
            (0.5 * (e[0] + e[1])).max(0.0).sqrt(),
            (0.5 * (e[2] + e[3])).max(0.0).sqrt(),
        ]
    }

    /// Symmetry within 1e−12 and symplectic spectrum ≥ ½ − 1e−9.
    pub fn validate(&self) -> Result<()> {
        for i in 0..4 {
            for j in (i + 1)..4 {
                let dev = (self.cov[i][j] - self.cov[j][i]).abs();
                if dev > 1e-12 {
                    return Err(Error::InvalidDomain {
                        field: "cov",
                        value: dev,
                        expected: "symmetric within 1e-12",
                    });
                }
            }
        }
        let [nu_minus, _] = self.symplectic_eigenvalues();
        if nu_minus < 0.5 - 1e-9 {
            return Err(Error::InvalidDomain {
                field: "cov",
                value: nu_minus,
                expected: "symplectic eigenvalues >= 1/2 - 1e-9",
            });
        }
        Ok(())
    }
}

/// Photon-number moments after the first nonlinear beam splitter; the
/// sufficient statistics for every analytic bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhotonMoments {
    pub mean_a: f64,
    pub mean_b: f64,
    pub var_a: f64,
    pub var_b: f64,
    pub cov_ab: f64,
}

impl PhotonMoments {
    pub fn new(mean_a: f64, mean_b: f64, var_a: f64, var_b: f64, cov_ab: f64) -> Result<Self> {
        for (field, v) in [("mean_a", mean_a), ("mean_b", mean_b), ("var_a", var_a), ("var_b", var_b)] {
            if !(v >= 0.0) || !v.is_finite() {
                return Err(Error::InvalidDomain { field, value: v, expected: "finite real >= 0" });
            }
        }
        // Cauchy–Schwarz with a small slack for rounding.
        if cov_ab.abs() > (var_a * var_b).sqrt() + 1e-9 {
            return Err(Error::InvalidDomain {
                field: "cov_ab",
                value: cov_ab,
                expected: "|cov_ab| <= sqrt(var_a * var_b) + 1e-9",
            });
        }
        Ok(Self { mean_a, mean_b, var_a, var_b, cov_ab })
    }
}

/// Ladder-operator description of a zero-lag two-mode Gaussian state:
/// amplitudes plus central moments n_ii = ⟨δâ†δâ⟩, m_i = ⟨δâδâ⟩,
/// n_ab = ⟨δâ†δb̂⟩, m_ab = ⟨δâδb̂⟩. Interchangeable with the quadrature form.
#[derive(Debug, Clone, Copy)]
struct LadderMoments {
    amp_a: Complex64,
    amp_b: Complex64,
    n_aa: f64,
    n_bb: f64,
    m_a: Complex64,
    m_b: Complex64,
    n_ab: Complex64,
    m_ab: Complex64,
}

const SQRT2: f64 = std::f64::consts::SQRT_2;

impl LadderMoments {
    fn from_state(s: &GaussianState) -> Self {
        let c = &s.cov;
        let amp_a = Complex64::new(s.mean[0], s.mean[1]) / SQRT2;
        let amp_b = Complex64::new(s.mean[2], s.mean[3]) / SQRT2;
        // Var x = ½ + n + Re m, Var p = ½ + n − Re m, Cov(x,p) = Im m.
        let n_aa = (c[0][0] + c[1][1] - 1.0) / 2.0;
        let n_bb = (c[2][2] + c[3][3] - 1.0) / 2.0;
        let m_a = Complex64::new((c[0][0] - c[1][1]) / 2.0, c[0][1]);
        let m_b = Complex64::new((c[2][2] - c[3][3]) / 2.0, c[2][3]);
        // n_ab = (C[x_a x_b] + C[p_a p_b])/2 + i(C[x_a p_b] − C[p_a x_b])/2,
        // m_ab = (C[x_a x_b] − C[p_a p_b])/2 + i(C[x_a p_b] + C[p_a x_b])/2.
        let n_ab = Complex64::new((c[0][2] + c[1][3]) / 2.0, (c[0][3] - c[1][2]) / 2.0);
        let m_ab = Complex64::new((c[0][2] - c[1][3]) / 2.0, (c[0][3] + c[1][2]) / 2.0);
        Self { amp_a, amp_b, n_aa, n_bb, m_a, m_b, n_ab, m_ab }
    }
}

/// Displace mode a by α and squeeze mode b by (r, θ_ς); no cross-correlation.
pub fn prepare_input(spec: &InputSpec) -> GaussianState {
    let mut state = GaussianState::vacuum();
    let alpha = spec.alpha();
    state.mean[0] = SQRT2 * alpha.re;
    state.mean[1] = SQRT2 * alpha.im;
    // Mode-b squeezed vacuum: n = sinh²r, m = −e^{iθ_ς} sinh r cosh r, hence
    // Var x = ½ + sinh²r − cos θ_ς sinh r cosh r, etc.
    let (sh, ch) = (spec.squeeze_r.sinh(), spec.squeeze_r.cosh());
    let shch = sh * ch;
    let (sin_t, cos_t) = spec.squeeze_phase.sin_cos();
    state.cov[2][2] = 0.5 + sh * sh - cos_t * shch;
    state.cov[3][3] = 0.5 + sh * sh + cos_t * shch;
    state.cov[2][3] = -sin_t * shch;
    state.cov[3][2] = state.cov[2][3];
    state
}

/// Symplectic matrix of â′ = c â + e^{iθ_p} s b̂†, b̂′ = c b̂ + e^{iθ_p} s â†.
fn nbs_symplectic(pump: &PumpSpec) -> [[f64; 4]; 4] {
    let c = pump.gain_g.cosh();
    let s = pump.gain_g.sinh();
    let (sin_t, cos_t) = pump.pump_phase.sin_cos();
    [
        [c, 0.0, s * cos_t, s * sin_t],
        [0.0, c, s * sin_t, -s * cos_t],
        [s * cos_t, s * sin_t, c, 0.0],
        [s * sin_t, -s * cos_t, 0.0, c],
    ]
}

/// Propagate through the first nonlinear beam splitter: mean ↦ S·mean,
/// cov ↦ S·cov·Sᵀ. Purity is preserved (S is symplectic).
pub fn apply_nbs(state: &GaussianState, pump: &PumpSpec) -> GaussianState {
    let s = nbs_symplectic(pump);
    let mut mean = [0.0; 4];
    for i in 0..4 {
        mean[i] = (0..4).map(|k| s[i][k] * state.mean[k]).sum();
    }
    let mut sc = [[0.0; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            sc[i][j] = (0..4).map(|k| s[i][k] * state.cov[k][j]).sum();
        }
    }
    let mut cov = [[0.0; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            cov[i][j] = (0..4).map(|k| sc[i][k] * s[j][k]).sum();
        }
    }
    // Re-symmetrise to kill rounding skew.
    for i in 0..4 {
        for j in (i + 1)..4 {
            let avg = (cov[i][j] + cov[j][i]) / 2.0;
            cov[i][j] = avg;
            cov[j][i] = avg;
        }
    }
    GaussianState { mean, cov }
}

/// Exact ⟨n̂_i⟩, ⟨Δ²n̂_i⟩ and Cov[n̂_a, n̂_b] by Wick expansion of the
/// fourth-order ladder moments. No sampling: the values are closed-form in
/// the amplitudes and central moments.
pub fn photon_moments(state: &GaussianState) -> PhotonMoments {
    let lm = LadderMoments::from_state(state);
    let (aa, ab) = (lm.amp_a, lm.amp_b);
    let a2 = aa.norm_sqr();
    let b2 = ab.norm_sqr();

    let mean_a = a2 + lm.n_aa;
    let mean_b = b2 + lm.n_bb;
    // Var n̂ = |α|²(2n + 1) + 2Re(ᾱ² m) + n(n + 1) + |m|².
    let var_a = a2 * (2.0 * lm.n_aa + 1.0)
        + 2.0 * (aa.conj() * aa.conj() * lm.m_a).re
        + lm.n_aa * (lm.n_aa + 1.0)
        + lm.m_a.norm_sqr();
    let var_b = b2 * (2.0 * lm.n_bb + 1.0)
        + 2.0 * (ab.conj() * ab.conj() * lm.m_b).re
        + lm.n_bb * (lm.n_bb + 1.0)
        + lm.m_b.norm_sqr();
    // Cov[n̂_a, n̂_b] = 2Re(ᾱ_a ᾱ_b m_ab) + 2Re(α_a ᾱ_b n_ab) + |m_ab|² + |n_ab|².
    let cov_ab = 2.0 * (aa.conj() * ab.conj() * lm.m_ab).re
        + 2.0 * (aa * ab.conj() * lm.n_ab).re
        + lm.m_ab.norm_sqr()
        + lm.n_ab.norm_sqr();

    // Rounding can drive an exactly-zero variance a few ulps negative.
    PhotonMoments {
        mean_a: mean_a.max(0.0),
        mean_b: mean_b.max(0.0),
        var_a: var_a.max(0.0),
        var_b: var_b.max(0.0),
        cov_ab,
    }
}

/// Input preparation, NBS propagation and moment extraction in one call.
pub fn moments_after_nbs(spec: &InputSpec, pump: &PumpSpec) -> PhotonMoments {
    photon_moments(&apply_nbs(&prepare_input(spec), pump))
}
