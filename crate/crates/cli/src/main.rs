//! `su11` — phase-sensitivity tables for an SU(1,1) interferometer with
//! lossy, dephasing arms.
//!
//! Subcommands emit deterministic CSV (metadata block, header, rows):
//!   moments      photon-number moments after the pump
//!   bound        one sensitivity row for a single parameter set
//!   sweep-beta   sensitivity vs photon number at fixed diffusion
//!   sweep-eta    sensitivity vs transmission at fixed input
//!   surface      (η, β) sensitivity grid
//!   critical     β_cri / η_cri thresholds along the locked-α photon sweep
//!   oracle-check dual-route self-tests; exit 3 on any failure
//!
//! Exit codes: 0 success, 2 domain error, 3 failed oracle-check.

mod checks;
mod table;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use su11_core::bound::{gamma_lambda_closed_form, BoundBreakdown, NoiseParams};
use su11_core::critical::{
    beta_critical_curve, eta_critical_curve, n_total, sensitivity_surface, InputRule, SweepConfig,
    ThresholdStatus,
};
use su11_core::exec::{linspace, map_range};
use su11_core::gaussian::{moments_after_nbs, InputSpec, PhotonMoments, PumpSpec};
use su11_core::Error;

use table::{sci, Table};

#[derive(Parser)]
#[command(name = "su11", version, about = "SU(1,1) interferometer sensitivity bounds under photon loss and phase diffusion")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Photon-number moments after the pump stage.
    Moments(MomentsArgs),
    /// Sensitivity bound for one parameter set (single CSV row).
    Bound(BoundArgs),
    /// Locked-α photon-number sweep at fixed diffusion (lossless arms by default).
    SweepBeta(SweepBetaArgs),
    /// Transmission sweep at a fixed input state (no diffusion by default).
    SweepEta(SweepEtaArgs),
    /// Full (η, β) sensitivity grid at a fixed input state.
    Surface(SurfaceArgs),
    /// Critical-noise thresholds along the locked-α photon-number sweep.
    Critical(CriticalArgs),
    /// Dual-route self-tests with pass margins.
    OracleCheck(OracleArgs),
}

#[derive(Args, Clone)]
struct InputFlags {
    /// Pump gain g.
    #[arg(long, default_value_t = 2.0)]
    g: f64,
    /// Coherent amplitude |α| on arm a.
    #[arg(long, default_value_t = 0.0)]
    alpha: f64,
    /// Coherent phase arg(α).
    #[arg(long, default_value_t = 0.0)]
    alpha_phase: f64,
    /// Squeezing magnitude r on arm b.
    #[arg(long, default_value_t = 0.0)]
    r: f64,
    /// Squeezing phase θ_ς.
    #[arg(long, default_value_t = 0.0)]
    squeeze_phase: f64,
    /// Pump phase θ_p.
    #[arg(long, default_value_t = 0.0)]
    pump_phase: f64,
}

impl InputFlags {
    fn build(&self) -> Result<(InputSpec, PumpSpec), Error> {
        Ok((
            InputSpec::new(self.alpha, self.alpha_phase, self.r, self.squeeze_phase)?,
            PumpSpec::new(self.g, self.pump_phase)?,
        ))
    }

    fn stamp(&self, t: &mut Table) {
        t.param("g", self.g);
        t.param("alpha", self.alpha);
        t.param("alpha_phase", self.alpha_phase);
        t.param("r", self.r);
        t.param("squeeze_phase", self.squeeze_phase);
        t.param("pump_phase", self.pump_phase);
    }
}

#[derive(Args, Clone)]
struct NoiseFlags {
    /// Transmission of arm a (1 = lossless).
    #[arg(long, default_value_t = 1.0)]
    eta_a: f64,
    /// Transmission of arm b.
    #[arg(long, default_value_t = 1.0)]
    eta_b: f64,
    /// Phase-diffusion coefficient on arm a.
    #[arg(long, default_value_t = 0.0)]
    beta_a: f64,
    /// Phase-diffusion coefficient on arm b.
    #[arg(long, default_value_t = 0.0)]
    beta_b: f64,
}

impl NoiseFlags {
    fn build(&self) -> Result<NoiseParams, Error> {
        NoiseParams::new(self.eta_a, self.eta_b, self.beta_a, self.beta_b)
    }

    fn stamp(&self, t: &mut Table) {
        t.param("eta_a", self.eta_a);
        t.param("eta_b", self.eta_b);
        t.param("beta_a", self.beta_a);
        t.param("beta_b", self.beta_b);
    }
}

#[derive(Args)]
struct MomentsArgs {
    #[command(flatten)]
    input: InputFlags,
    /// Output CSV path (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Reserved; all computation is deterministic.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct BoundArgs {
    #[command(flatten)]
    input: InputFlags,
    #[command(flatten)]
    noise: NoiseFlags,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct SweepBetaArgs {
    /// Pump gain g.
    #[arg(long, default_value_t = 2.0)]
    g: f64,
    /// Locked-α sweep grid over r, as start:stop:count.
    #[arg(long, default_value = "0:3.5:25")]
    grid: String,
    #[command(flatten)]
    noise: NoiseFlags,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct SweepEtaArgs {
    #[command(flatten)]
    input: SurfaceInputFlags,
    /// Transmission grid (η_a = η_b), as start:stop:count.
    #[arg(long, default_value = "0.5:1:26")]
    grid: String,
    /// Phase-diffusion coefficient on arm a.
    #[arg(long, default_value_t = 0.0)]
    beta_a: f64,
    /// Phase-diffusion coefficient on arm b.
    #[arg(long, default_value_t = 0.0)]
    beta_b: f64,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
}

/// Input flags whose defaults are the locked reference state g=2, r=1,
/// |α|² = e²/4 used by the η/β tables.
#[derive(Args, Clone)]
struct SurfaceInputFlags {
    /// Pump gain g.
    #[arg(long, default_value_t = 2.0)]
    g: f64,
    /// Coherent amplitude |α| on arm a.
    #[arg(long, default_value_t = 1.0f64.exp() / 2.0)]
    alpha: f64,
    /// Coherent phase arg(α).
    #[arg(long, default_value_t = 0.0)]
    alpha_phase: f64,
    /// Squeezing magnitude r on arm b.
    #[arg(long, default_value_t = 1.0)]
    r: f64,
    /// Squeezing phase θ_ς.
    #[arg(long, default_value_t = 0.0)]
    squeeze_phase: f64,
    /// Pump phase θ_p.
    #[arg(long, default_value_t = 0.0)]
    pump_phase: f64,
}

impl SurfaceInputFlags {
    fn build(&self) -> Result<(InputSpec, PumpSpec), Error> {
        Ok((
            InputSpec::new(self.alpha, self.alpha_phase, self.r, self.squeeze_phase)?,
            PumpSpec::new(self.g, self.pump_phase)?,
        ))
    }

    fn stamp(&self, t: &mut Table) {
        t.param("g", self.g);
        t.param("alpha", self.alpha);
        t.param("alpha_phase", self.alpha_phase);
        t.param("r", self.r);
        t.param("squeeze_phase", self.squeeze_phase);
        t.param("pump_phase", self.pump_phase);
    }
}

#[derive(Args)]
struct SurfaceArgs {
    #[command(flatten)]
    input: SurfaceInputFlags,
    /// Transmission grid (η_a = η_b), as start:stop:count.
    #[arg(long, default_value = "0.5:1:26")]
    grid: String,
    /// Diffusion grid (β_a = β_b), as start:stop:count.
    #[arg(long, default_value = "0:0.1:26")]
    grid_beta: String,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Copy, Clone, ValueEnum)]
enum ThresholdKind {
    Beta,
    Eta,
}

#[derive(Args)]
struct CriticalArgs {
    /// Which threshold to solve for.
    #[arg(long, value_enum)]
    kind: ThresholdKind,
    /// Pump gain g.
    #[arg(long, default_value_t = 2.0)]
    g: f64,
    /// Locked-α sweep grid over r, as start:stop:count.
    #[arg(long, default_value = "0.5:3.2:12")]
    grid: String,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct OracleArgs {
    /// Cutoff for the mixed-state reference pipeline (≥ 30 clears the gate).
    #[arg(long, default_value_t = 30)]
    n_max: usize,
    #[arg(long)]
    seed: Option<u64>,
}

enum Failure {
    Domain(String),
    Oracle,
    Internal(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidDomain { .. }
            | Error::DegenerateMoments
            | Error::ZeroInformation
            | Error::NonPositivePhotonNumber(_)
            | Error::TruncationOverflow { .. } => Failure::Domain(e.to_string()),
            Error::BracketFailure(_) | Error::IllConditioned(_) => Failure::Internal(e.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Internal(format!("io: {e}"))
    }
}

fn parse_grid(raw: &str, key: &str) -> Result<(f64, f64, usize), Failure> {
    let bad = || {
        Failure::Domain(format!(
            "--{key}: expected start:stop:count with finite start \u{2264} stop and count \u{2265} 2, got '{raw}'"
        ))
    };
    let parts: Vec<&str> = raw.split(':').collect();
    if parts.len() != 3 {
        return Err(bad());
    }
    let start: f64 = parts[0].parse().map_err(|_| bad())?;
    let stop: f64 = parts[1].parse().map_err(|_| bad())?;
    let count: usize = parts[2].parse().map_err(|_| bad())?;
    if !start.is_finite() || !stop.is_finite() || start > stop || count < 2 {
        return Err(bad());
    }
    Ok((start, stop, count))
}

/// The locked-α input family: |α|² = e^{2r}/4.
fn locked_spec(r: f64) -> Result<InputSpec, Error> {
    InputSpec::new(r.exp() / 2.0, 0.0, r, 0.0)
}

const BOUND_COLS: [&str; 12] = [
    "eta_a", "eta_b", "beta_a", "beta_b", "n_tot", "f_q", "c_tilde", "c_phi", "delta_phi", "sql",
    "hl", "beats_sql",
];

fn bound_cells(noise: &NoiseParams, m: &PhotonMoments, b: &BoundBreakdown) -> Vec<String> {
    let n = n_total(m);
    let s = 1.0 / n.sqrt();
    vec![
        sci(noise.eta_a),
        sci(noise.eta_b),
        sci(noise.beta_a),
        sci(noise.beta_b),
        sci(n),
        sci(b.f_q_lossless),
        sci(b.c_tilde),
        sci(b.c_phi),
        sci(b.delta_phi),
        sci(s),
        sci(1.0 / n),
        (b.delta_phi < s).to_string(),
    ]
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.cmd {
        Cmd::Moments(a) => {
            let (spec, pump) = a.input.build()?;
            let m = moments_after_nbs(&spec, &pump);
            let mut t = Table::new(
                "moments",
                vec!["mean_a", "mean_b", "var_a", "var_b", "cov_ab", "n_tot"],
            );
            a.input.stamp(&mut t);
            t.row(vec![
                sci(m.mean_a),
                sci(m.mean_b),
                sci(m.var_a),
                sci(m.var_b),
                sci(m.cov_ab),
                sci(n_total(&m)),
            ]);
            t.emit(a.out.as_deref())?;
        }
        Cmd::Bound(a) => {
            let (spec, pump) = a.input.build()?;
            let noise = a.noise.build()?;
            let m = moments_after_nbs(&spec, &pump);
            let b = gamma_lambda_closed_form(&m, &noise)?;
            let mut t = Table::new("bound", BOUND_COLS.to_vec());
            a.input.stamp(&mut t);
            a.noise.stamp(&mut t);
            t.row(bound_cells(&noise, &m, &b));
            t.emit(a.out.as_deref())?;
        }
        Cmd::SweepBeta(a) => {
            let (start, stop, count) = parse_grid(&a.grid, "grid")?;
            let noise = a.noise.build()?;
            let pump = PumpSpec::new(a.g, 0.0)?;
            let rs = linspace(start, stop, count);
            let rows: Vec<Result<(f64, f64, PhotonMoments, BoundBreakdown), Error>> =
                map_range(count, |i| {
                    let spec = locked_spec(rs[i])?;
                    let m = moments_after_nbs(&spec, &pump);
                    let b = gamma_lambda_closed_form(&m, &noise)?;
                    Ok((rs[i], spec.alpha_mag, m, b))
                });
            let mut t = Table::new("sweep-beta", {
                let mut h = vec!["r", "alpha"];
                h.extend(BOUND_COLS);
                h
            });
            t.param("g", a.g);
            t.param_str("input_rule", "alpha_locked |alpha|^2 = e^{2r}/4");
            t.param_str("grid", &a.grid);
            a.noise.stamp(&mut t);
            for row in rows {
                let (r, alpha, m, b) = row?;
                let mut cells = vec![sci(r), sci(alpha)];
                cells.extend(bound_cells(&noise, &m, &b));
                t.row(cells);
            }
            t.emit(a.out.as_deref())?;
        }
        Cmd::SweepEta(a) => {
            let (start, stop, count) = parse_grid(&a.grid, "grid")?;
            let (spec, pump) = a.input.build()?;
            if !(0.0..=1.0).contains(&start) || !(0.0..=1.0).contains(&stop) || start <= 0.0 {
                return Err(Failure::Domain(format!(
                    "--grid: transmission values must lie in (0, 1], got '{}'",
                    a.grid
                )));
            }
            let m = moments_after_nbs(&spec, &pump);
            let etas = linspace(start, stop, count);
            let rows: Vec<Result<(NoiseParams, BoundBreakdown), Error>> = map_range(count, |i| {
                let noise = NoiseParams::new(etas[i], etas[i], a.beta_a, a.beta_b)?;
                let b = gamma_lambda_closed_form(&m, &noise)?;
                Ok((noise, b))
            });
            let mut t = Table::new("sweep-eta", BOUND_COLS.to_vec());
            a.input.stamp(&mut t);
            t.param_str("grid", &a.grid);
            t.param("beta_a", a.beta_a);
            t.param("beta_b", a.beta_b);
            for row in rows {
                let (noise, b) = row?;
                t.row(bound_cells(&noise, &m, &b));
            }
            t.emit(a.out.as_deref())?;
        }
        Cmd::Surface(a) => {
            let (e0, e1, ne) = parse_grid(&a.grid, "grid")?;
            let (b0, b1, nb) = parse_grid(&a.grid_beta, "grid-beta")?;
            let (spec, pump) = a.input.build()?;
            let cfg = SweepConfig {
                gain_g: pump.gain_g,
                input_rule: InputRule::Explicit(vec![spec]),
                n_points: 2,
                eta_grid: linspace(e0, e1, ne),
                beta_grid: linspace(b0, b1, nb),
            };
            let rows = sensitivity_surface(&cfg)?;
            let mut t = Table::new(
                "surface",
                vec![
                    "eta", "beta", "n_tot", "f_q", "c_tilde", "c_phi", "delta_phi", "sql", "hl",
                    "beats_sql",
                ],
            );
            a.input.stamp(&mut t);
            t.param_str("grid", &a.grid);
            t.param_str("grid_beta", &a.grid_beta);
            t.param_str("row_order", "row-major: eta outer, beta inner");
            for row in rows {
                t.row(vec![
                    sci(row.eta),
                    sci(row.beta),
                    sci(row.n_tot),
                    sci(row.f_q),
                    sci(row.c_tilde),
                    sci(row.c_phi),
                    sci(row.delta_phi),
                    sci(row.sql),
                    sci(row.hl),
                    row.beats_sql.to_string(),
                ]);
            }
            t.emit(a.out.as_deref())?;
        }
        Cmd::Critical(a) => {
            let (start, stop, count) = parse_grid(&a.grid, "grid")?;
            let cfg = SweepConfig {
                gain_g: a.g,
                input_rule: InputRule::AlphaLocked { r_start: start, r_stop: stop },
                n_points: count,
                eta_grid: vec![],
                beta_grid: vec![],
            };
            let (kind, results) = match a.kind {
                ThresholdKind::Beta => ("beta_cri", beta_critical_curve(&cfg)?),
                ThresholdKind::Eta => ("eta_cri", eta_critical_curve(&cfg)?),
            };
            let rs = linspace(start, stop, count);
            let mut t = Table::new(
                "critical",
                vec![
                    "r",
                    "alpha",
                    "n_tot",
                    "critical_value",
                    "status",
                    "iterations",
                    "bracket_lo",
                    "bracket_hi",
                ],
            );
            t.param("g", a.g);
            t.param_str("input_rule", "alpha_locked |alpha|^2 = e^{2r}/4");
            t.param_str("grid", &a.grid);
            t.param_str("kind", kind);
            for (i, res) in results.iter().enumerate() {
                let status = match res.status {
                    ThresholdStatus::Found => "found",
                    ThresholdStatus::NoCrossingAlwaysBeats => "always_beats",
                    ThresholdStatus::NoCrossingNeverBeats => "never_beats",
                };
                t.row(vec![
                    sci(rs[i]),
                    sci(rs[i].exp() / 2.0),
                    sci(res.n_tot),
                    sci(res.critical_value),
                    status.to_string(),
                    res.iterations.to_string(),
                    sci(res.bracket.0),
                    sci(res.bracket.1),
                ]);
            }
            t.emit(a.out.as_deref())?;
        }
        Cmd::OracleCheck(a) => {
            let lines = checks::run_suite(a.n_max)?;
            let mut failed = 0usize;
            for line in &lines {
                let verdict = if line.passed() { "ok  " } else { "FAIL" };
                println!(
                    "{verdict} {:<26} dev={:<10} tol={:.0e}",
                    line.name,
                    format!("{:.3e}", line.dev),
                    line.tol
                );
                if !line.passed() {
                    failed += 1;
                }
            }
            println!("oracle-check: {}/{} passed", lines.len() - failed, lines.len());
            if failed > 0 {
                return Err(Failure::Oracle);
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Domain(msg)) => {
            eprintln!("domain error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Oracle) => ExitCode::from(3),
        Err(Failure::Internal(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::FAILURE
        }
    }
}
