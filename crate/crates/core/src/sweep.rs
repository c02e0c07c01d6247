//! Validated scenarios, grid sweeps over physical parameters, and
//! derivative-free minimisation of the steady-state occupation.
//!
//! Sweep points are evaluated independently and gathered in grid order, so
//! results are bit-identical for any worker count. Divergent points are
//! first-class records (and infinite cost for the optimiser), never errors:
//! sweeps legitimately cross the cooling/heating boundary.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::atom::spectral_factor;
use crate::chain::Phase;
use crate::cooling::{
    assemble_rates, design_position, steady_state_occupation, CoolingRates, SteadyOccupation,
    StrategyChoice,
};
use crate::error::CoolError;
use crate::params::{
    optomech_coupling, rabi_frequency, AtomCloudSpec, DriveSpec, EnvironmentSpec, MirrorSpec,
};
use crate::Result;

/// Direct η overrides, replacing the physical chain coupling per branch.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct EtaOverrides {
    pub plus: Option<Complex64>,
    pub minus: Option<Complex64>,
}

/// Where the cloud sits relative to the mirror.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Placement {
    /// A strategy placement x̄ = nπc/ν or (n+½)πc/ν with exact phase ±1.
    Designed(StrategyChoice),
    /// Arbitrary position; the caller supplies e^{iντ} reduced mod 2π.
    Explicit { xbar: f64, phase: Complex64 },
}

impl Placement {
    pub fn phase(&self) -> Phase {
        match self {
            Placement::Designed(choice) => match choice.kind {
                crate::cooling::StrategyKind::BsEnhance => Phase::PlusOne,
                crate::cooling::StrategyKind::TmsSuppress => Phase::MinusOne,
            },
            Placement::Explicit { phase, .. } => Phase::General(*phase),
        }
    }
}

/// A fully validated parameter set for one evaluation of the pipeline.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub mirror: MirrorSpec,
    pub probe: DriveSpec,
    pub control: DriveSpec,
    pub cloud: AtomCloudSpec,
    pub environment: Option<EnvironmentSpec>,
    pub placement: Placement,
    pub overrides: EtaOverrides,
}

impl Scenario {
    /// Validate cross-field constraints and derive the cloud position for
    /// designed placements.
    pub fn validated(mut self) -> Result<Self> {
        if let Placement::Designed(choice) = self.placement {
            let pos = design_position(choice.kind, self.mirror.nu, choice.placement_index)?;
            self.cloud.xbar = pos.xbar;
        }
        // The chain formulas assume equal drive amplitudes; enforce unless
        // both branches are overridden and the chain never runs.
        let chain_used = self.overrides.plus.is_none() || self.overrides.minus.is_none();
        if chain_used && self.cloud.n_atoms > 0 {
            let (ap, ac) = (self.probe.amplitude, self.control.amplitude);
            let scale = ap.abs().max(ac.abs());
            if scale > 0.0 && (ap - ac).abs() > 1e-6 * scale {
                return Err(CoolError::Scenario(format!(
                    "probe and control amplitudes must match for the chain \
                     formulas (got {ap:.6e} vs {ac:.6e})"
                )));
            }
        }
        Ok(self)
    }

    fn phase(&self) -> Phase {
        self.placement.phase()
    }
}

/// One evaluated scenario point.
#[derive(Debug, Clone, PartialEq)]
pub struct Evaluated {
    pub rates: CoolingRates,
    pub eta_plus: Complex64,
    pub eta_minus: Complex64,
    /// |J(±ν)| when the atomic parameters define a spectral factor.
    pub j_plus_abs: Option<f64>,
    pub j_minus_abs: Option<f64>,
    pub n_ss: SteadyOccupation,
}

/// Run the full pipeline for one scenario: couplings, spectral factor,
/// collective η, rates, and steady state.
pub fn evaluate(scenario: &Scenario) -> Result<Evaluated> {
    let mirror = &scenario.mirror;
    let mu_p = Complex64::from(optomech_coupling(&scenario.probe, mirror));
    let mu_c = Complex64::from(optomech_coupling(&scenario.control, mirror));

    let j = |omega: f64| -> Result<Complex64> {
        spectral_factor(
            omega,
            Complex64::from(rabi_frequency(&scenario.probe)),
            Complex64::from(rabi_frequency(&scenario.control)),
            scenario.cloud.delta,
            scenario.probe.gamma,
            scenario.control.gamma,
            scenario.probe.big_gamma,
            scenario.control.big_gamma,
        )
    };
    let alpha_sq = scenario.probe.amplitude * scenario.probe.amplitude;
    let n_atoms = scenario.cloud.n_atoms as f64;

    let j_plus = j(mirror.nu);
    let j_minus = j(-mirror.nu);
    let eta_plus = match scenario.overrides.plus {
        Some(eta) => eta,
        None if scenario.cloud.n_atoms == 0 => Complex64::default(),
        None => n_atoms * alpha_sq * j_plus.clone()?,
    };
    let eta_minus = match scenario.overrides.minus {
        Some(eta) => eta,
        None if scenario.cloud.n_atoms == 0 => Complex64::default(),
        None => n_atoms * alpha_sq * j_minus.clone()?,
    };

    let mut rates = assemble_rates(mu_p, mu_c, eta_plus, eta_minus, scenario.phase())?;
    if let Some(env) = &scenario.environment {
        rates = rates.with_environment(mirror.env_rate(), env.n_thermal(mirror));
    }
    let n_ss = steady_state_occupation(&rates, true);
    Ok(Evaluated {
        rates,
        eta_plus,
        eta_minus,
        j_plus_abs: j_plus.ok().map(|z| z.norm()),
        j_minus_abs: j_minus.ok().map(|z| z.norm()),
        n_ss,
    })
}

/// A sweepable scalar parameter of a [`Scenario`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParamPath {
    CloudDelta,
    CloudNAtoms,
    /// Both drive powers together, preserving the equal-amplitude contract.
    DrivePower,
    ProbePower,
    ControlPower,
    MirrorQuality,
    EnvTemperature,
}

impl ParamPath {
    pub fn name(self) -> &'static str {
        match self {
            ParamPath::CloudDelta => "cloud.delta",
            ParamPath::CloudNAtoms => "cloud.n_atoms",
            ParamPath::DrivePower => "drive.power",
            ParamPath::ProbePower => "probe.power",
            ParamPath::ControlPower => "control.power",
            ParamPath::MirrorQuality => "mirror.quality",
            ParamPath::EnvTemperature => "environment.temperature",
        }
    }
}

impl std::str::FromStr for ParamPath {
    type Err = CoolError;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "cloud.delta" => ParamPath::CloudDelta,
            "cloud.n_atoms" => ParamPath::CloudNAtoms,
            "drive.power" => ParamPath::DrivePower,
            "probe.power" => ParamPath::ProbePower,
            "control.power" => ParamPath::ControlPower,
            "mirror.quality" => ParamPath::MirrorQuality,
            "environment.temperature" => ParamPath::EnvTemperature,
            other => {
                return Err(CoolError::UnknownPath {
                    path: other.to_string(),
                })
            }
        })
    }
}

fn with_power(drive: &DriveSpec, power: f64) -> Result<DriveSpec> {
    DriveSpec::from_power(drive.omega0, power, drive.gamma, drive.big_gamma)
}

/// Return a copy of the scenario with one parameter replaced.
pub fn apply_value(base: &Scenario, path: ParamPath, value: f64) -> Result<Scenario> {
    let mut s = base.clone();
    match path {
        ParamPath::CloudDelta => s.cloud.delta = value,
        ParamPath::CloudNAtoms => {
            if !(value >= 0.0) || value.fract().abs() > 1e-9 * value.abs().max(1.0) {
                return Err(CoolError::InvalidParameter {
                    name: "cloud.n_atoms",
                    value,
                    constraint: "must be a non-negative integer",
                });
            }
            s.cloud.n_atoms = value.round() as u64;
        }
        ParamPath::DrivePower => {
            s.probe = with_power(&s.probe, value)?;
            s.control = with_power(&s.control, value)?;
        }
        ParamPath::ProbePower => s.probe = with_power(&s.probe, value)?,
        ParamPath::ControlPower => s.control = with_power(&s.control, value)?,
        ParamPath::MirrorQuality => {
            s.mirror = MirrorSpec::new(s.mirror.nu, s.mirror.mass, value)?;
        }
        ParamPath::EnvTemperature => match s.environment {
            Some(_) => s.environment = Some(EnvironmentSpec::new(value)?),
            None => {
                return Err(CoolError::Scenario(
                    "cannot sweep environment.temperature: scenario has no \
                     environment section"
                        .into(),
                ))
            }
        },
    }
    s.validated()
}

/// Point outcome inside a sweep.
#[derive(Debug, Clone, PartialEq)]
pub enum PointStatus {
    Ok,
    Divergent,
    Error(String),
}

impl PointStatus {
    pub fn label(&self) -> &str {
        match self {
            PointStatus::Ok => "ok",
            PointStatus::Divergent => "divergent",
            PointStatus::Error(_) => "error",
        }
    }
}

/// One record of a sweep: the grid coordinates plus every reported quantity.
#[derive(Debug, Clone, PartialEq)]
pub struct PointRecord {
    pub coords: Vec<f64>,
    pub n0: f64,
    pub lambda_plus: f64,
    pub lambda_minus: f64,
    pub eta_plus: Complex64,
    pub eta_minus: Complex64,
    pub j_plus_abs: f64,
    pub j_minus_abs: f64,
    pub n_ss: Option<f64>,
    pub status: PointStatus,
}

/// A completed sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub axes: Vec<(String, Vec<f64>)>,
    pub records: Vec<PointRecord>,
}

/// Hard cap on grid cardinality.
pub const GRID_LIMIT: u64 = 10_000_000;

fn record_for(coords: Vec<f64>, outcome: Result<Evaluated>) -> PointRecord {
    match outcome {
        Ok(ev) => PointRecord {
            coords,
            n0: ev.rates.n0,
            lambda_plus: ev.rates.lambda_plus,
            lambda_minus: ev.rates.lambda_minus,
            eta_plus: ev.eta_plus,
            eta_minus: ev.eta_minus,
            j_plus_abs: ev.j_plus_abs.unwrap_or(f64::NAN),
            j_minus_abs: ev.j_minus_abs.unwrap_or(f64::NAN),
            n_ss: ev.n_ss.finite(),
            status: match ev.n_ss {
                SteadyOccupation::Finite(_) => PointStatus::Ok,
                SteadyOccupation::Divergent => PointStatus::Divergent,
            },
        },
        Err(err) => PointRecord {
            coords,
            n0: f64::NAN,
            lambda_plus: f64::NAN,
            lambda_minus: f64::NAN,
            eta_plus: Complex64::new(f64::NAN, f64::NAN),
            eta_minus: Complex64::new(f64::NAN, f64::NAN),
            j_plus_abs: f64::NAN,
            j_minus_abs: f64::NAN,
            n_ss: None,
            status: PointStatus::Error(err.to_string()),
        },
    }
}

fn evaluate_point(base: &Scenario, axes: &[(ParamPath, Vec<f64>)], flat: usize) -> PointRecord {
    let mut idx = flat;
    let mut coords = vec![0.0; axes.len()];
    for (k, (_, values)) in axes.iter().enumerate().rev() {
        coords[k] = values[idx % values.len()];
        idx /= values.len();
    }
    let mut scenario = Ok(base.clone());
    for (k, (path, _)) in axes.iter().enumerate() {
        scenario = scenario.and_then(|s| apply_value(&s, *path, coords[k]));
    }
    record_for(coords.clone(), scenario.and_then(|s| evaluate(&s)))
}

/// Cartesian sweep over the given axes, in deterministic row-major order
/// (last axis fastest). Per-point failures become `Error` records.
///
/// `threads` caps the rayon pool; `None` uses the global default. Results
/// are identical for every worker count.
pub fn run_sweep(
    base: &Scenario,
    axes: &[(ParamPath, Vec<f64>)],
    threads: Option<usize>,
) -> Result<SweepResult> {
    let mut total: u64 = 1;
    for (path, values) in axes {
        if values.is_empty() {
            return Err(CoolError::Scenario(format!(
                "axis {} has no grid points",
                path.name()
            )));
        }
        total = total.saturating_mul(values.len() as u64);
    }
    if total > GRID_LIMIT {
        return Err(CoolError::GridTooLarge {
            size: total,
            limit: GRID_LIMIT,
        });
    }
    let n_points = total as usize;

    let compute = || -> Vec<PointRecord> {
        (0..n_points)
            .into_par_iter()
            .map(|flat| evaluate_point(base, axes, flat))
            .collect()
    };
    let records = match threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
            .map_err(|e| CoolError::Scenario(format!("thread pool: {e}")))?
            .install(compute),
        None => compute(),
    };

    Ok(SweepResult {
        axes: axes
            .iter()
            .map(|(p, v)| (p.name().to_string(), v.clone()))
            .collect(),
        records,
    })
}

/// Result of an occupation minimisation.
#[derive(Debug, Clone, PartialEq)]
pub struct Optimum {
    pub coords: Vec<f64>,
    pub n_ss: f64,
    pub evaluations: usize,
}

const COARSE_1D: usize = 65;
const COARSE_2D: usize = 33;
const PARAM_TOL: f64 = 1e-6;
const OBJECTIVE_TOL: f64 = 1e-10;

struct Objective<'a> {
    base: &'a Scenario,
    paths: Vec<ParamPath>,
    evals: std::cell::Cell<usize>,
}

impl Objective<'_> {
    fn eval(&self, coords: &[f64]) -> f64 {
        self.evals.set(self.evals.get() + 1);
        let mut scenario = Ok(self.base.clone());
        for (path, &v) in self.paths.iter().zip(coords) {
            scenario = scenario.and_then(|s| apply_value(&s, *path, v));
        }
        match scenario.and_then(|s| evaluate(&s)) {
            Ok(ev) => match ev.n_ss {
                SteadyOccupation::Finite(n) => n,
                SteadyOccupation::Divergent => f64::INFINITY,
            },
            Err(_) => f64::INFINITY,
        }
    }
}

fn golden_section(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_8;
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while (b - a).abs() > tol {
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = f(x2);
        }
    }
    if f1 <= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

fn line_minimum(
    f: impl Fn(f64) -> f64,
    lo: f64,
    hi: f64,
    coarse: usize,
) -> Result<(f64, f64)> {
    if lo == hi {
        let v = f(lo);
        return Ok((lo, v));
    }
    let n = coarse.max(3);
    let mut best = (f64::INFINITY, lo);
    let step = (hi - lo) / (n - 1) as f64;
    let grid: Vec<f64> = (0..n).map(|k| lo + step * k as f64).collect();
    let mut best_idx = None;
    for (k, &x) in grid.iter().enumerate() {
        let v = f(x);
        if v < best.0 {
            best = (v, x);
            best_idx = Some(k);
        }
    }
    let Some(k) = best_idx else {
        return Err(CoolError::ObjectiveDivergent);
    };
    let a = grid[k.saturating_sub(1)];
    let b = grid[(k + 1).min(n - 1)];
    let tol = PARAM_TOL * (hi - lo).abs();
    let (x, v) = golden_section(&f, a, b, tol);
    if v <= best.0 {
        Ok((x, v))
    } else {
        Ok((best.1, best.0))
    }
}

/// Deterministic derivative-free minimisation of n_ss over one or two
/// parameters inside a bounding box: coarse grid, then golden-section
/// refinement (coordinate descent in 2D). Divergent or failing points carry
/// infinite cost; gradients are never used because the objective blows up at
/// the cooling boundary.
pub fn minimize_nss(
    base: &Scenario,
    free: &[(ParamPath, (f64, f64))],
    threads: Option<usize>,
) -> Result<Optimum> {
    let _ = threads;
    if free.is_empty() || free.len() > 2 {
        return Err(CoolError::Scenario(
            "minimize_nss supports one or two free parameters".into(),
        ));
    }
    for (path, (lo, hi)) in free {
        if !lo.is_finite() || !hi.is_finite() || lo > hi {
            return Err(CoolError::Scenario(format!(
                "invalid bounds for {}: [{lo}, {hi}]",
                path.name()
            )));
        }
    }
    let objective = Objective {
        base,
        paths: free.iter().map(|(p, _)| *p).collect(),
        evals: std::cell::Cell::new(0),
    };

    if free.len() == 1 {
        let (lo, hi) = free[0].1;
        let (x, v) = line_minimum(|x| objective.eval(&[x]), lo, hi, COARSE_1D)?;
        if !v.is_finite() {
            return Err(CoolError::ObjectiveDivergent);
        }
        return Ok(Optimum {
            coords: vec![x],
            n_ss: v,
            evaluations: objective.evals.get(),
        });
    }

    let (lo0, hi0) = free[0].1;
    let (lo1, hi1) = free[1].1;
    // Coarse scan for a finite starting point.
    let mut best = (f64::INFINITY, lo0, lo1);
    for i in 0..COARSE_2D {
        let x = lo0 + (hi0 - lo0) * i as f64 / (COARSE_2D - 1) as f64;
        for jdx in 0..COARSE_2D {
            let y = lo1 + (hi1 - lo1) * jdx as f64 / (COARSE_2D - 1) as f64;
            let v = objective.eval(&[x, y]);
            if v < best.0 {
                best = (v, x, y);
            }
        }
    }
    if !best.0.is_finite() {
        return Err(CoolError::ObjectiveDivergent);
    }
    let (mut fbest, mut x, mut y) = best;
    for _sweep in 0..60 {
        let (x_new, fx) = line_minimum(|t| objective.eval(&[t, y]), lo0, hi0, COARSE_2D)?;
        let (y_new, fy) = line_minimum(|t| objective.eval(&[x_new, t]), lo1, hi1, COARSE_2D)?;
        let moved = ((x_new - x) / (hi0 - lo0).max(f64::MIN_POSITIVE)).abs()
            .max(((y_new - y) / (hi1 - lo1).max(f64::MIN_POSITIVE)).abs());
        let improved = (fbest - fy).abs() > OBJECTIVE_TOL * fbest.abs().max(f64::MIN_POSITIVE);
        x = x_new;
        y = y_new;
        fbest = fy.min(fx);
        if moved < PARAM_TOL && !improved {
            break;
        }
    }
    Ok(Optimum {
        coords: vec![x, y],
        n_ss: fbest,
        evaluations: objective.evals.get(),
    })
}
