//! Phonon-occupation dynamics: the bare-drive heating rate N₀, the
//! atom-induced rates Λ±, environmental heating, steady states, time
//! evolution, and the two strategy designers (detuning and cloud placement).
//!
//! The occupation obeys the scalar linear equation
//!
//! ```text
//! dn/dt = N₀ + Λ₊ n + Λ₋ (n+1) + (ν/Q)(𝒩th − n)
//! ```
//!
//! which is integrated exactly; an adaptive RK45 integrator is kept as an
//! independent cross-check.

use num_complex::Complex64;

use crate::chain::Phase;
use crate::constants::C;
use crate::error::CoolError;
use crate::Result;

/// The coefficients of the occupation equation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoolingRates {
    /// Bare-drive heating rate (|μ_p|²+|μ_c|²)/2 (1/s).
    pub n0: f64,
    /// Atom-induced beam-splitting rate; negative values cool.
    pub lambda_plus: f64,
    /// Atom-induced two-mode-squeezing rate; negative values cool.
    pub lambda_minus: f64,
    /// Environmental coupling ν/Q (1/s).
    pub env_rate: f64,
    /// Environmental thermal occupation 𝒩th.
    pub n_thermal: f64,
}

impl CoolingRates {
    /// Net atom-induced rate Λ₊ + Λ₋.
    pub fn net_atomic_rate(&self) -> f64 {
        self.lambda_plus + self.lambda_minus
    }

    /// Whether the atoms cool on balance.
    pub fn is_cooling(&self) -> bool {
        self.net_atomic_rate() < 0.0
    }

    /// Attach the environmental channel.
    pub fn with_environment(mut self, env_rate: f64, n_thermal: f64) -> Self {
        self.env_rate = env_rate;
        self.n_thermal = n_thermal;
        self
    }

    /// Linear drift coefficient λ of dn/dt = source + λ n.
    pub fn drift(&self, include_env: bool) -> f64 {
        let env = if include_env { self.env_rate } else { 0.0 };
        self.lambda_plus + self.lambda_minus - env
    }

    /// Constant source term of dn/dt = source + λ n.
    pub fn source(&self, include_env: bool) -> f64 {
        let env = if include_env {
            self.env_rate * self.n_thermal
        } else {
            0.0
        };
        self.n0 + self.lambda_minus + env
    }
}

/// Assemble N₀ and Λ± from the couplings and the chain's resummed response.
///
/// ```text
/// N₀ = (|μ_p|²+|μ_c|²)/2
/// Λ± = ±Re( e^{±iντ} μ_p* μ_c η±/(1−η±) )
/// ```
pub fn assemble_rates(
    mu_p: Complex64,
    mu_c: Complex64,
    eta_plus: Complex64,
    eta_minus: Complex64,
    phase: Phase,
) -> Result<CoolingRates> {
    let one = Complex64::new(1.0, 0.0);
    for eta in [eta_plus, eta_minus] {
        let dist = (one - eta).norm();
        if dist < 1e-9 {
            return Err(CoolError::EtaNearUnity {
                eta_re: eta.re,
                eta_im: eta.im,
                dist,
            });
        }
    }
    let mu_prod = mu_p.conj() * mu_c;
    let lambda_plus = (phase.value() * mu_prod * (eta_plus / (one - eta_plus))).re;
    let lambda_minus = -(phase.conj_value() * mu_prod * (eta_minus / (one - eta_minus))).re;
    Ok(CoolingRates {
        n0: 0.5 * (mu_p.norm_sqr() + mu_c.norm_sqr()),
        lambda_plus,
        lambda_minus,
        env_rate: 0.0,
        n_thermal: 0.0,
    })
}

/// Steady state of the occupation equation; divergence is a result, not an
/// error, so sweeps can cross the cooling boundary.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SteadyOccupation {
    Finite(f64),
    Divergent,
}

impl SteadyOccupation {
    pub fn finite(self) -> Option<f64> {
        match self {
            SteadyOccupation::Finite(n) => Some(n),
            SteadyOccupation::Divergent => None,
        }
    }
}

/// n_ss = −source/λ when the total drift λ is negative, otherwise divergent.
///
/// Without environment this is −(N₀+Λ₋)/(Λ₊+Λ₋); with environment the
/// extended balance (N₀+Λ₋+(ν/Q)𝒩th)/(−(Λ₊+Λ₋)+ν/Q).
pub fn steady_state_occupation(rates: &CoolingRates, include_env: bool) -> SteadyOccupation {
    let drift = rates.drift(include_env);
    if drift < 0.0 {
        SteadyOccupation::Finite(-rates.source(include_env) / drift)
    } else {
        SteadyOccupation::Divergent
    }
}

/// An occupation trajectory with its drift diagnostics.
#[derive(Debug, Clone)]
pub struct Evolution {
    pub times: Vec<f64>,
    pub occupation: Vec<f64>,
    /// Total drift λ = Λ₊+Λ₋ − ν/Q.
    pub lambda: f64,
    /// Set when λ ≥ 0: no finite steady state, growth (or marginal drift).
    pub diverges: bool,
}

/// Exact exponential solution of the occupation equation on a time grid.
///
/// n(t) = n* + (n₀ − n*) e^{λt} with n* = −source/λ, degenerating to
/// n(t) = n₀ + source·t at λ = 0. A growing solution (λ ≥ 0) is still
/// returned, flagged via [`Evolution::diverges`].
pub fn evolve_occupation(
    n_start: f64,
    rates: &CoolingRates,
    include_env: bool,
    t_grid: &[f64],
) -> Result<Evolution> {
    if !(n_start >= 0.0) {
        return Err(CoolError::InvalidParameter {
            name: "evolve.n_start",
            value: n_start,
            constraint: "must be >= 0",
        });
    }
    if t_grid.windows(2).any(|w| w[1] < w[0]) {
        return Err(CoolError::InvalidParameter {
            name: "evolve.t_grid",
            value: f64::NAN,
            constraint: "must be ascending",
        });
    }
    let lambda = rates.drift(include_env);
    let source = rates.source(include_env);
    let occupation = if lambda == 0.0 {
        t_grid.iter().map(|&t| n_start + source * t).collect()
    } else {
        let fixed = -source / lambda;
        t_grid
            .iter()
            .map(|&t| fixed + (n_start - fixed) * (lambda * t).exp())
            .collect()
    };
    Ok(Evolution {
        times: t_grid.to_vec(),
        occupation,
        lambda,
        diverges: lambda >= 0.0,
    })
}

/// Adaptive RK45 (Cash–Karp) integration of the same equation; retained as
/// an independent cross-check of the exponential solution.
pub fn evolve_occupation_numeric(
    n_start: f64,
    rates: &CoolingRates,
    include_env: bool,
    t_grid: &[f64],
    rel_tol: f64,
) -> Vec<f64> {
    let lambda = rates.drift(include_env);
    let source = rates.source(include_env);
    let f = |n: f64| source + lambda * n;

    let mut out = Vec::with_capacity(t_grid.len());
    let mut t = match t_grid.first() {
        Some(&t0) => t0,
        None => return out,
    };
    let mut n = n_start;
    out.push(n);
    let scale = 1.0 / (lambda.abs() + source.abs() / n_start.max(1.0)).max(1e-300);
    for &t_next in &t_grid[1..] {
        let mut h = (t_next - t).min(0.1 * scale).max(1e-18 * scale);
        while t < t_next {
            h = h.min(t_next - t);
            let (n5, err) = cash_karp_step(&f, n, h);
            let tol = rel_tol * n.abs().max(1.0);
            if err <= tol || h <= 1e-15 * scale {
                t += h;
                n = n5;
                h *= 0.9 * (tol / err.max(1e-300)).powf(0.2).min(5.0);
            } else {
                h *= 0.9 * (tol / err).powf(0.25).max(0.1);
            }
        }
        out.push(n);
    }
    out
}

fn cash_karp_step(f: impl Fn(f64) -> f64, y: f64, h: f64) -> (f64, f64) {
    let k1 = f(y);
    let k2 = f(y + h * (k1 / 5.0));
    let k3 = f(y + h * (3.0 / 40.0 * k1 + 9.0 / 40.0 * k2));
    let k4 = f(y + h * (3.0 / 10.0 * k1 - 9.0 / 10.0 * k2 + 6.0 / 5.0 * k3));
    let k5 = f(y + h * (-11.0 / 54.0 * k1 + 5.0 / 2.0 * k2 - 70.0 / 27.0 * k3 + 35.0 / 27.0 * k4));
    let k6 = f(y
        + h * (1631.0 / 55296.0 * k1
            + 175.0 / 512.0 * k2
            + 575.0 / 13824.0 * k3
            + 44275.0 / 110592.0 * k4
            + 253.0 / 4096.0 * k5));
    let y5 =
        y + h * (37.0 / 378.0 * k1 + 250.0 / 621.0 * k3 + 125.0 / 594.0 * k4 + 512.0 / 1771.0 * k6);
    let y4 = y
        + h * (2825.0 / 27648.0 * k1
            + 18575.0 / 48384.0 * k3
            + 13525.0 / 55296.0 * k4
            + 277.0 / 14336.0 * k5
            + 1.0 / 4.0 * k6);
    (y5, (y5 - y4).abs())
}

/// The two placement strategies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StrategyKind {
    /// e^{iντ} = +1: the converted blue sideband enhances BS cooling.
    BsEnhance,
    /// e^{iντ} = −1: the converted red sideband cancels TMS heating.
    TmsSuppress,
}

/// A strategy with its placement index n (x̄ grows with n).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StrategyChoice {
    pub kind: StrategyKind,
    pub placement_index: u32,
}

/// Detuning that zeroes the resonance term of the J denominator at the
/// targeted sideband:
///
/// * BS: 4Δν − 4ν² + Σ = 0 ⇒ Δ = (4ν² − Σ)/(4ν) (peak at +ν)
/// * TMS: the sign-flipped condition ⇒ Δ = (Σ − 4ν²)/(4ν) (peak at −ν)
pub fn design_detuning(kind: StrategyKind, omega_p: f64, omega_c: f64, nu: f64) -> Result<f64> {
    if !(nu > 0.0) {
        return Err(CoolError::InvalidParameter {
            name: "design.nu",
            value: nu,
            constraint: "must be > 0",
        });
    }
    let rabi_sq = omega_p * omega_p + omega_c * omega_c;
    Ok(match kind {
        StrategyKind::BsEnhance => (4.0 * nu * nu - rabi_sq) / (4.0 * nu),
        StrategyKind::TmsSuppress => (rabi_sq - 4.0 * nu * nu) / (4.0 * nu),
    })
}

/// A designed cloud position.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PositionDesign {
    /// Mean distance x̄ from the mirror (m).
    pub xbar: f64,
    /// Round-trip time τ = 2x̄/c (s).
    pub tau: f64,
    /// e^{iντ}, held symbolically at exactly ±1.
    pub phase: Phase,
    /// Set when x̄ exceeds [`FEASIBLE_XBAR`]; kHz oscillators put the
    /// half-integer placements at kilometre scale.
    pub impractical: bool,
}

/// Placements beyond this distance get a feasibility warning (m).
pub const FEASIBLE_XBAR: f64 = 10.0;

/// x̄ = nπc/ν (BS, e^{iντ}=+1) or (n+½)πc/ν (TMS, e^{iντ}=−1).
///
/// The phase is exact by construction, never evaluated through floating
/// trigonometry.
pub fn design_position(
    kind: StrategyKind,
    nu: f64,
    placement_index: u32,
) -> Result<PositionDesign> {
    if !(nu > 0.0) {
        return Err(CoolError::InvalidParameter {
            name: "design.nu",
            value: nu,
            constraint: "must be > 0",
        });
    }
    let half_periods = match kind {
        StrategyKind::BsEnhance => placement_index as f64,
        StrategyKind::TmsSuppress => placement_index as f64 + 0.5,
    };
    let xbar = half_periods * std::f64::consts::PI * C / nu;
    Ok(PositionDesign {
        xbar,
        tau: 2.0 * xbar / C,
        phase: match kind {
            StrategyKind::BsEnhance => Phase::PlusOne,
            StrategyKind::TmsSuppress => Phase::MinusOne,
        },
        impractical: xbar > FEASIBLE_XBAR,
    })
}

/// Few-atom linearisation of the net rate at the BS placement (e^{iντ}=1):
///
/// ```text
/// Λ₊ + Λ₋ ≈ N_p |α̃|² Re( μ_p* μ_c (J(ν) − J(−ν)) )
/// ```
///
/// Valid for N_p |α̃|² |J(±ν)| ≪ 1; callers should treat couplings above
/// ~0.1 as out of range.
pub fn few_atom_rate(
    mu_p: Complex64,
    mu_c: Complex64,
    n_atoms: u64,
    alpha_sq: f64,
    j_plus: Complex64,
    j_minus: Complex64,
) -> f64 {
    let mu_prod = mu_p.conj() * mu_c;
    n_atoms as f64 * alpha_sq * (mu_prod * (j_plus - j_minus)).re
}

/// Magnitude of the largest collective coupling, for validity checks of the
/// few-atom form.
pub fn collective_coupling_magnitude(
    n_atoms: u64,
    alpha_sq: f64,
    j_plus: Complex64,
    j_minus: Complex64,
) -> f64 {
    n_atoms as f64 * alpha_sq * j_plus.norm().max(j_minus.norm())
}
