//! N_Tot, SQL/HL references, the critical-noise threshold solvers
//! β_cri(N_Tot) and η_cri(N_Tot), and the (η, β) sensitivity surface.
//!
//! N_Tot is the mean photon number after the first nonlinear beam splitter
//! (mean_a + mean_b). Threshold solves use equal-arm noise and bisection:
//! Δφ is smooth, but unconditional convergence matters more than speed when
//! certifying a crossing. Every returned root is certified by a sign change
//! across ±1e−8.

use crate::bound::{gamma_lambda_closed_form, NoiseParams};
use crate::error::{Error, Result};
use crate::exec;
use crate::gaussian::{moments_after_nbs, InputSpec, PhotonMoments, PumpSpec};

/// How sweep points map to input states.
#[derive(Debug, Clone, PartialEq)]
pub enum InputRule {
    /// |α|² = e^{2r}/4 with r swept over [r_start, r_stop]; the photon-number
    /// axis of the threshold curves.
    AlphaLocked { r_start: f64, r_stop: f64 },
    /// Explicit list of input states.
    Explicit(Vec<InputSpec>),
}

/// Sweep definition: fixed gain, an input rule, the number of sweep points
/// and the noise grids used by the surface emitter.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub gain_g: f64,
    pub input_rule: InputRule,
    pub n_points: usize,
    pub eta_grid: Vec<f64>,
    pub beta_grid: Vec<f64>,
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.gain_g >= 0.0) || !self.gain_g.is_finite() {
            return Err(Error::InvalidDomain {
                field: "gain_g",
                value: self.gain_g,
                expected: "finite real >= 0",
            });
        }
        if self.n_points < 2 {
            return Err(Error::InvalidDomain {
                field: "n_points",
                value: self.n_points as f64,
                expected: ">= 2",
            });
        }
        for &eta in &self.eta_grid {
            if !(eta > 0.0 && eta <= 1.0) {
                return Err(Error::InvalidDomain { field: "eta_grid", value: eta, expected: "0 < eta <= 1" });
            }
        }
        for &beta in &self.beta_grid {
            if !(beta >= 0.0) || !beta.is_finite() {
                return Err(Error::InvalidDomain { field: "beta_grid", value: beta, expected: "finite real >= 0" });
            }
        }
        if let InputRule::AlphaLocked { r_start, r_stop } = self.input_rule {
            if !(r_start >= 0.0) || !(r_stop >= r_start) {
                return Err(Error::InvalidDomain {
                    field: "input_rule.r",
                    value: r_start,
                    expected: "0 <= r_start <= r_stop",
                });
            }
        }
        Ok(())
    }

    /// Input state at sweep index `point`.
    pub fn input_at(&self, point: usize) -> Result<InputSpec> {
        match &self.input_rule {
            InputRule::AlphaLocked { r_start, r_stop } => {
                if point >= self.n_points {
                    return Err(Error::InvalidDomain {
                        field: "point",
                        value: point as f64,
                        expected: "< n_points",
                    });
                }
                let r = exec::linspace(*r_start, *r_stop, self.n_points)[point];
                InputSpec::new((2.0 * r).exp().sqrt() / 2.0, 0.0, r, 0.0)
            }
            InputRule::Explicit(list) => list.get(point).copied().ok_or(Error::InvalidDomain {
                field: "point",
                value: point as f64,
                expected: "< number of explicit inputs",
            }),
        }
    }

    /// Post-NBS photon moments at sweep index `point`.
    pub fn moments_at(&self, point: usize) -> Result<PhotonMoments> {
        let spec = self.input_at(point)?;
        let pump = PumpSpec::new(self.gain_g, 0.0)?;
        Ok(moments_after_nbs(&spec, &pump))
    }
}

/// Total mean photon number inside the interferometer (after the first NBS).
pub fn n_total(m: &PhotonMoments) -> f64 {
    m.mean_a + m.mean_b
}

/// Standard quantum limit 1/√N_Tot.
pub fn sql(n_tot: f64) -> Result<f64> {
    if !(n_tot > 0.0) {
        return Err(Error::NonPositivePhotonNumber(n_tot));
    }
    Ok(1.0 / n_tot.sqrt())
}

/// Heisenberg limit 1/N_Tot.
pub fn hl(n_tot: f64) -> Result<f64> {
    if !(n_tot > 0.0) {
        return Err(Error::NonPositivePhotonNumber(n_tot));
    }
    Ok(1.0 / n_tot)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ThresholdStatus {
    Found,
    /// Δφ beats the SQL over the whole scanned noise range.
    NoCrossingAlwaysBeats,
    /// Δφ never beats the SQL, even at the noiseless end of the range.
    NoCrossingNeverBeats,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ThresholdResult {
    pub n_tot: f64,
    /// β_cri or η_cri when status is Found; NaN otherwise.
    pub critical_value: f64,
    pub bracket: (f64, f64),
    pub iterations: u32,
    pub status: ThresholdStatus,
}

// Tight enough that the propagated Δφ error at the root (slope ≤ O(1))
// stays well inside the 1e-9·SQL certification band.
const BISECT_TOL: f64 = 1e-12;
const BISECT_MAX_ITER: u32 = 200;
const CERT_DELTA: f64 = 1e-8;

/// Bisection with root certification. `f` must be continuous with
/// f(lo)·f(hi) ≤ 0; `increasing` states the expected monotone direction,
/// asserted on a coarse scan of the bracket.
fn certified_bisect<F: Fn(f64) -> f64>(
    f: &F,
    mut lo: f64,
    mut hi: f64,
    increasing: bool,
) -> Result<(f64, u32, (f64, f64))> {
    let bracket = (lo, hi);
    // Monotonicity assertion: a violation signals a formula bug.
    let mut prev = f(lo);
    for i in 1..=4 {
        let x = lo + (hi - lo) * i as f64 / 4.0;
        let cur = f(x);
        let ok = if increasing { cur >= prev - 1e-12 } else { cur <= prev + 1e-12 };
        if !ok {
            return Err(Error::BracketFailure("monotonicity violated across bracket"));
        }
        prev = cur;
    }
    let mut flo = f(lo);
    let fhi = f(hi);
    if flo * fhi > 0.0 {
        return Err(Error::BracketFailure("no sign change across bracket"));
    }
    let mut iterations = 0;
    while hi - lo > BISECT_TOL && iterations < BISECT_MAX_ITER {
        let mid = 0.5 * (lo + hi);
        let fmid = f(mid);
        if flo * fmid <= 0.0 {
            hi = mid;
        } else {
            lo = mid;
            flo = fmid;
        }
        iterations += 1;
    }
    let root = 0.5 * (lo + hi);
    let before = f((root - CERT_DELTA).max(bracket.0));
    let after = f((root + CERT_DELTA).min(bracket.1));
    if before * after > 0.0 {
        return Err(Error::BracketFailure("root not certified by sign change at +-1e-8"));
    }
    Ok((root, iterations, bracket))
}

/// Δφ at equal-arm noise for the given moments.
fn delta_phi_at(m: &PhotonMoments, eta: f64, beta: f64) -> f64 {
    let noise = NoiseParams { eta_a: eta, eta_b: eta, beta_a: beta, beta_b: beta };
    match gamma_lambda_closed_form(m, &noise) {
        Ok(b) => b.delta_phi,
        Err(_) => f64::INFINITY,
    }
}

/// Critical diffusion β_cri at which Δφ(β) crosses the SQL, with η = 1 and
/// β_a = β_b = β. Δφ is monotone increasing in β, so the root is unique when
/// it exists; the upper bracket doubles from 0.1 until a sign change appears.
pub fn beta_threshold(m: &PhotonMoments) -> Result<ThresholdResult> {
    let n_tot = n_total(m);
    let sql = sql(n_tot)?;
    let f = |beta: f64| delta_phi_at(m, 1.0, beta) - sql;

    if f(0.0) > 0.0 {
        // Already above the SQL with zero diffusion.
        return Ok(ThresholdResult {
            n_tot,
            critical_value: f64::NAN,
            bracket: (0.0, 0.0),
            iterations: 0,
            status: ThresholdStatus::NoCrossingNeverBeats,
        });
    }
    let mut hi = 0.1;
    let mut doublings = 0;
    while f(hi) <= 0.0 {
        hi *= 2.0;
        doublings += 1;
        if doublings > 60 {
            // Δφ ≥ 2β grows without bound, so this cannot happen.
            return Err(Error::BracketFailure("no upper bracket for beta after 60 doublings"));
        }
    }
    let (root, iterations, bracket) = certified_bisect(&f, 0.0, hi, true)?;
    Ok(ThresholdResult {
        n_tot,
        critical_value: root,
        bracket,
        iterations,
        status: ThresholdStatus::Found,
    })
}

/// Critical transmission η_cri at which Δφ(η) crosses the SQL, with β = 0 and
/// η_a = η_b = η scanned on (0, 1]. Δφ is monotone decreasing in η.
pub fn eta_threshold(m: &PhotonMoments) -> Result<ThresholdResult> {
    let n_tot = n_total(m);
    let sql = sql(n_tot)?;
    const ETA_LO: f64 = 1e-6;
    let f = |eta: f64| delta_phi_at(m, eta, 0.0) - sql;

    if f(ETA_LO) < 0.0 {
        return Ok(ThresholdResult {
            n_tot,
            critical_value: f64::NAN,
            bracket: (ETA_LO, 1.0),
            iterations: 0,
            status: ThresholdStatus::NoCrossingAlwaysBeats,
        });
    }
    if f(1.0) > 0.0 {
        return Ok(ThresholdResult {
            n_tot,
            critical_value: f64::NAN,
            bracket: (ETA_LO, 1.0),
            iterations: 0,
            status: ThresholdStatus::NoCrossingNeverBeats,
        });
    }
    let (root, iterations, bracket) = certified_bisect(&f, ETA_LO, 1.0, false)?;
    Ok(ThresholdResult {
        n_tot,
        critical_value: root,
        bracket,
        iterations,
        status: ThresholdStatus::Found,
    })
}

/// β_cri at one sweep point of `cfg`.
pub fn beta_critical(cfg: &SweepConfig, point: usize) -> Result<ThresholdResult> {
    cfg.validate()?;
    beta_threshold(&cfg.moments_at(point)?)
}

/// η_cri at one sweep point of `cfg`.
pub fn eta_critical(cfg: &SweepConfig, point: usize) -> Result<ThresholdResult> {
    cfg.validate()?;
    eta_threshold(&cfg.moments_at(point)?)
}

fn sweep_len(cfg: &SweepConfig) -> usize {
    match &cfg.input_rule {
        InputRule::AlphaLocked { .. } => cfg.n_points,
        InputRule::Explicit(list) => list.len(),
    }
}

/// β_cri over the whole sweep; points evaluate independently (parallel when
/// enabled) and the result order matches the input order.
pub fn beta_critical_curve(cfg: &SweepConfig) -> Result<Vec<ThresholdResult>> {
    cfg.validate()?;
    exec::map_range(sweep_len(cfg), |i| beta_threshold(&cfg.moments_at(i)?))
        .into_iter()
        .collect()
}

/// η_cri over the whole sweep.
pub fn eta_critical_curve(cfg: &SweepConfig) -> Result<Vec<ThresholdResult>> {
    cfg.validate()?;
    exec::map_range(sweep_len(cfg), |i| eta_threshold(&cfg.moments_at(i)?))
        .into_iter()
        .collect()
}

/// One row of the (η, β) sensitivity surface.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurfaceRow {
    pub eta: f64,
    pub beta: f64,
    pub n_tot: f64,
    pub f_q: f64,
    pub c_tilde: f64,
    pub c_phi: f64,
    pub delta_phi: f64,
    pub sql: f64,
    pub hl: f64,
    pub beats_sql: bool,
}

/// Δφ across the equal-arm noise grid for a single input state (the explicit
/// rule must carry exactly one spec). Rows are emitted row-major: η outer,
/// β inner; evaluation order never changes the output.
pub fn sensitivity_surface(cfg: &SweepConfig) -> Result<Vec<SurfaceRow>> {
    cfg.validate()?;
    let spec = match &cfg.input_rule {
        InputRule::Explicit(list) if list.len() == 1 => list[0],
        _ => {
            return Err(Error::InvalidDomain {
                field: "input_rule",
                value: f64::NAN,
                expected: "Explicit with exactly one input for the surface",
            })
        }
    };
    let pump = PumpSpec::new(cfg.gain_g, 0.0)?;
    let m = moments_after_nbs(&spec, &pump);
    let n_tot = n_total(&m);
    let sql = sql(n_tot)?;
    let hl = hl(n_tot)?;
    let n_eta = cfg.eta_grid.len();
    let n_beta = cfg.beta_grid.len();
    exec::map_range(n_eta * n_beta, |idx| {
        let eta = cfg.eta_grid[idx / n_beta];
        let beta = cfg.beta_grid[idx % n_beta];
        let noise = NoiseParams { eta_a: eta, eta_b: eta, beta_a: beta, beta_b: beta };
        let b = gamma_lambda_closed_form(&m, &noise)?;
        Ok(SurfaceRow {
            eta,
            beta,
            n_tot,
            f_q: b.f_q_lossless,
            c_tilde: b.c_tilde,
            c_phi: b.c_phi,
            delta_phi: b.delta_phi,
            sql,
            hl,
            beats_sql: b.delta_phi < sql,
        })
    })
    .into_iter()
    .collect()
}
