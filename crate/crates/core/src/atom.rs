//! Single-atom Λ-system Bloch dynamics, the dark steady state, the
//! frequency-domain resolvent responses, and the closed-form spectral
//! factor J(ω).
//!
//! The nine atomic operators are packed into an 8-entry vector by removing
//! the trace, in the fixed order
//!
//! ```text
//! (σ_dd−σ_gg, σ_ge, σ_eg, σ_dd−σ_ee, σ_gd, σ_dg, σ_ed, σ_de)
//! ```
//!
//! Every matrix in this module is transcribed against that order; a symbolic
//! commutator check in the tests guards the transcription.

use nalgebra::{SMatrix, SVector};
use num_complex::Complex64;

use crate::constants::{C, TAU};
use crate::error::CoolError;
use crate::Result;

type CMat8 = SMatrix<Complex64, 8, 8>;
type CVec8 = SVector<Complex64, 8>;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// Index of σ_gd in the operator basis (projector û₅).
pub const IDX_GD: usize = 4;
/// Index of σ_ed in the operator basis (projector û₇).
pub const IDX_ED: usize = 6;

/// Condition-number threshold beyond which linear solves are refused.
const COND_LIMIT: f64 = 1.0e12;

/// Parameters of a single driven Λ atom.
///
/// The Rabi frequencies are complex so that per-atom position phases
/// (Ω_p e^{−iφ_p}, Ω_c e^{+iφ_c}) can be carried where needed; all chain-level
/// formulas consume the phase-stripped magnitudes only.
#[derive(Debug, Clone, Copy)]
pub struct AtomParams {
    pub omega_p: Complex64,
    pub omega_c: Complex64,
    pub delta_g: f64,
    pub delta_e: f64,
    pub gamma_p: f64,
    pub gamma_c: f64,
    pub big_gamma_p: f64,
    pub big_gamma_c: f64,
}

impl AtomParams {
    /// Equal detunings Δ_g = Δ_e = Δ, real Rabi frequencies.
    pub fn symmetric(
        omega_p: f64,
        omega_c: f64,
        delta: f64,
        gamma_p: f64,
        gamma_c: f64,
        big_gamma_p: f64,
        big_gamma_c: f64,
    ) -> Self {
        Self {
            omega_p: Complex64::new(omega_p, 0.0),
            omega_c: Complex64::new(omega_c, 0.0),
            delta_g: delta,
            delta_e: delta,
            gamma_p,
            gamma_c,
            big_gamma_p,
            big_gamma_c,
        }
    }

    /// Total optical linewidth Γ̃ = γ_p + Γ_p + γ_c + Γ_c.
    pub fn gamma_tilde(&self) -> f64 {
        self.gamma_p + self.big_gamma_p + self.gamma_c + self.big_gamma_c
    }

    /// Decay constant of the (σ_dd−σ_gg) row: Γ₁ = (2γ_p+2Γ_p+γ_c+Γ_c)/3.
    pub fn gamma_1(&self) -> f64 {
        (2.0 * (self.gamma_p + self.big_gamma_p) + self.gamma_c + self.big_gamma_c) / 3.0
    }

    /// Decay constant of the (σ_dd−σ_ee) row: Γ₄ = (γ_p+Γ_p+2γ_c+2Γ_c)/3.
    pub fn gamma_4(&self) -> f64 {
        (self.gamma_p + self.big_gamma_p + 2.0 * (self.gamma_c + self.big_gamma_c)) / 3.0
    }
}

/// The linear Bloch system dσ/dt = M σ + v for one atom.
#[derive(Debug, Clone)]
pub struct BlochSystem {
    pub m: CMat8,
    pub v: CVec8,
}

/// Steady state of the Bloch system, with solve diagnostics.
#[derive(Debug, Clone)]
pub struct SteadyState {
    /// The 8-entry expectation vector (populations/coherences).
    pub sigma: CVec8,
    /// Relative residual ‖Mσ + v‖ / ‖v‖ of the solve.
    pub residual: f64,
    /// 1-norm condition number of M.
    pub condition: f64,
}

impl SteadyState {
    /// Recover the populations (σ_gg, σ_ee, σ_dd) from the trace-reduced
    /// entries, using σ_gg + σ_ee + σ_dd = 1.
    pub fn populations(&self) -> (f64, f64, f64) {
        let s1 = self.sigma[0].re;
        let s4 = self.sigma[3].re;
        let dd = (1.0 + s1 + s4) / 3.0;
        (dd - s1, dd - s4, dd)
    }

    /// Largest magnitude among the optical coherences σ_gd, σ_dg, σ_ed, σ_de.
    ///
    /// Vanishes (to solver precision) exactly when the steady state is dark.
    pub fn dark_residual(&self) -> f64 {
        [4usize, 5, 6, 7]
            .iter()
            .map(|&k| self.sigma[k].norm())
            .fold(0.0, f64::max)
    }
}

/// Build the Bloch matrix and inhomogeneous vector for one atom.
///
/// The rows are the moment equations of the driven Λ Lindbladian with decay
/// channels σ_gd (rate γ_p+Γ_p) and σ_ed (rate γ_c+Γ_c): each coherence row
/// σ_ld carries a detuning term −iΔ_l, an optical damping −Γ̃/2, and the
/// Rabi couplings into the population/ground-coherence sector. The
/// inhomogeneous vector is nonzero only in the rows of σ_dd−σ_gg and
/// σ_dd−σ_ee, with entries −Γ₁ and −Γ₄.
pub fn build_bloch(p: &AtomParams) -> Result<BlochSystem> {
    if p.gamma_tilde() == 0.0 && p.omega_p == ZERO && p.omega_c == ZERO {
        return Err(CoolError::DegenerateBloch);
    }
    let op = p.omega_p;
    let oc = p.omega_c;
    let opc = op.conj();
    let occ = oc.conj();
    let g1 = Complex64::from(p.gamma_1());
    let g4 = Complex64::from(p.gamma_4());
    let gt2 = Complex64::from(p.gamma_tilde() / 2.0);
    let ddiff = Complex64::new(0.0, p.delta_g - p.delta_e);
    let idg = I * p.delta_g;
    let ide = I * p.delta_e;
    let half = Complex64::from(0.5);

    let mut m = CMat8::zeros();
    // d(sigma_dd - sigma_gg)/dt
    m[(0, 0)] = -g1;
    m[(0, 3)] = -g1;
    m[(0, 4)] = -opc;
    m[(0, 5)] = -op;
    m[(0, 6)] = -occ * half;
    m[(0, 7)] = -oc * half;
    // d(sigma_ge)/dt
    m[(1, 1)] = -ddiff;
    m[(1, 4)] = occ * half;
    m[(1, 7)] = op * half;
    // d(sigma_eg)/dt
    m[(2, 2)] = ddiff;
    m[(2, 5)] = oc * half;
    m[(2, 6)] = opc * half;
    // d(sigma_dd - sigma_ee)/dt
    m[(3, 0)] = -g4;
    m[(3, 3)] = -g4;
    m[(3, 4)] = -opc * half;
    m[(3, 5)] = -op * half;
    m[(3, 6)] = -occ;
    m[(3, 7)] = -oc;
    // d(sigma_gd)/dt
    m[(4, 0)] = op * half;
    m[(4, 1)] = -oc * half;
    m[(4, 4)] = -idg - gt2;
    // d(sigma_dg)/dt
    m[(5, 0)] = opc * half;
    m[(5, 2)] = -occ * half;
    m[(5, 5)] = idg - gt2;
    // d(sigma_ed)/dt
    m[(6, 2)] = -op * half;
    m[(6, 3)] = oc * half;
    m[(6, 6)] = -ide - gt2;
    // d(sigma_de)/dt
    m[(7, 1)] = -opc * half;
    m[(7, 3)] = oc.conj() * half;
    m[(7, 7)] = ide - gt2;

    let mut v = CVec8::zeros();
    v[0] = -g1;
    v[3] = -g4;

    Ok(BlochSystem { m, v })
}

fn one_norm(m: &CMat8) -> f64 {
    (0..8)
        .map(|j| (0..8).map(|i| m[(i, j)].norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Dense LU solve of `m x = b` with an explicit 1-norm condition estimate.
fn solve_checked(m: &CMat8, b: &CVec8) -> Result<(CVec8, f64)> {
    let lu = m.clone_owned().lu();
    let inv = lu
        .try_inverse()
        .ok_or(CoolError::SingularBloch { condition: f64::INFINITY })?;
    let cond = one_norm(m) * one_norm(&inv);
    if !cond.is_finite() || cond > COND_LIMIT {
        return Err(CoolError::SingularBloch { condition: cond });
    }
    let x = lu
        .solve(b)
        .ok_or(CoolError::SingularBloch { condition: cond })?;
    Ok((x, cond))
}

/// Direct dense solve of the bare steady state M σ = −v.
pub fn bare_steady_state(sys: &BlochSystem) -> Result<SteadyState> {
    let rhs = -sys.v;
    let (sigma, condition) = solve_checked(&sys.m, &rhs)?;
    let resid = (sys.m * sigma + sys.v).norm();
    let scale = sys.v.norm().max(f64::MIN_POSITIVE);
    Ok(SteadyState {
        sigma,
        residual: resid / scale,
        condition,
    })
}

/// Dark-state amplitudes (c_g, c_e) of |DS⟩ = c_g|g⟩ + c_e|e⟩.
pub fn dark_state_amplitudes(
    omega_p: Complex64,
    omega_c: Complex64,
) -> Result<(Complex64, Complex64)> {
    let norm_sq = omega_p.norm_sqr() + omega_c.norm_sqr();
    if norm_sq == 0.0 {
        return Err(CoolError::DegenerateDarkState);
    }
    let norm = norm_sq.sqrt();
    Ok((omega_c / norm, -omega_p / norm))
}

/// Which transformation matrix multiplies the collective-operator term.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Channel {
    /// [σ_dg, ·] — Probe field term.
    P,
    /// [σ_gd, ·] — Probe daggered term.
    Pd,
    /// [σ_de, ·] — Control field term.
    C,
    /// [σ_ed, ·] — Control daggered term.
    Cd,
}

/// Which coherence row the response projects onto.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Projector {
    /// û₅ · σ = σ_gd (the G responses).
    Gd,
    /// û₇ · σ = σ_ed (the F responses).
    Ed,
}

impl Projector {
    fn index(self) -> usize {
        match self {
            Projector::Gd => IDX_GD,
            Projector::Ed => IDX_ED,
        }
    }
}

/// The four commutator transformation matrices, rows holding the expansion
/// of [op, basis_row] in the operator basis. Integer-valued and sparse.
pub struct TransformationMatrices;

const M_PD_ROWS: [[f64; 8]; 8] = [
    [0., 0., 0., 0., 2., 0., 0., 0.],
    [0., 0., 0., 0., 0., 0., 0., 0.],
    [0., 0., 0., 0., 0., 0., -1., 0.],
    [0., 0., 0., 0., 1., 0., 0., 0.],
    [0., 0., 0., 0., 0., 0., 0., 0.],
    [-1., 0., 0., 0., 0., 0., 0., 0.],
    [0., 0., 0., 0., 0., 0., 0., 0.],
    [0., 1., 0., 0., 0., 0., 0., 0.],
];

const M_P_ROWS: [[f64; 8]; 8] = [
    [0., 0., 0., 0., 0., -2., 0., 0.],
    [0., 0., 0., 0., 0., 0., 0., 1.],
    [0., 0., 0., 0., 0., 0., 0., 0.],
    [0., 0., 0., 0., 0., -1., 0., 0.],
    [1., 0., 0., 0., 0., 0., 0., 0.],
    [0., 0., 0., 0., 0., 0., 0., 0.],
    [0., 0., -1., 0., 0., 0., 0., 0.],
    [0., 0., 0., 0., 0., 0., 0., 0.],
];

const M_CD_ROWS: [[f64; 8]; 8] = [
    [0., 0., 0., 0., 0., 0., 1., 0.],
    [0., 0., 0., 0., -1., 0., 0., 0.],
    [0., 0., 0., 0., 0., 0., 0., 0.],
    [0., 0., 0., 0., 0., 0., 2., 0.],
    [0., 0., 0., 0., 0., 0., 0., 0.],
    [0., 0., 1., 0., 0., 0., 0., 0.],
    [0., 0., 0., 0., 0., 0., 0., 0.],
    [0., 0., 0., -1., 0., 0., 0., 0.],
];

const M_C_ROWS: [[f64; 8]; 8] = [
    [0., 0., 0., 0., 0., 0., 0., -1.],
    [0., 0., 0., 0., 0., 0., 0., 0.],
    [0., 0., 0., 0., 0., 1., 0., 0.],
    [0., 0., 0., 0., 0., 0., 0., -2.],
    [0., -1., 0., 0., 0., 0., 0., 0.],
    [0., 0., 0., 0., 0., 0., 0., 0.],
    [0., 0., 0., 1., 0., 0., 0., 0.],
    [0., 0., 0., 0., 0., 0., 0., 0.],
];

impl TransformationMatrices {
    fn rows(channel: Channel) -> &'static [[f64; 8]; 8] {
        match channel {
            Channel::Pd => &M_PD_ROWS,
            Channel::P => &M_P_ROWS,
            Channel::Cd => &M_CD_ROWS,
            Channel::C => &M_C_ROWS,
        }
    }

    /// The matrix for one channel as a complex 8×8.
    pub fn matrix(channel: Channel) -> CMat8 {
        let rows = Self::rows(channel);
        CMat8::from_fn(|r, c| Complex64::from(rows[r][c]))
    }
}

/// Frequency-domain linear response of one coherence to one collective
/// radiation channel:
///
/// ```text
/// 2π û · ( −(iω I + M)⁻¹ ) · M_channel · σ_DS
/// ```
///
/// with û = û₅ for the G responses (σ_gd row) and û₇ for the F responses
/// (σ_ed row).
pub fn resolvent_response(
    sys: &BlochSystem,
    ss: &SteadyState,
    omega: f64,
    channel: Channel,
    projector: Projector,
) -> Result<Complex64> {
    let a = sys.m + CMat8::identity() * (I * omega);
    let rhs = TransformationMatrices::matrix(channel) * ss.sigma;
    let (z, cond) = solve_checked(&a, &rhs).map_err(|e| match e {
        CoolError::SingularBloch { condition } => CoolError::ResolventPole {
            omega,
            condition,
        },
        other => other,
    })?;
    let _ = cond;
    Ok(-TAU * z[projector.index()])
}

/// Closed-form spectral factor
///
/// ```text
/// J(ω) = (γ_p γ_c / 2π) · i 16 ω c /
///        [ (|Ω_p|²+|Ω_c|²) (−2iω Γ̃ + 4Δω − 4ω² + |Ω_p|²+|Ω_c|²) ]
/// ```
///
/// in metres (so that N_p |α̃|² J is dimensionless). Its real part is
/// strictly negative for every ω ≠ 0 as long as Γ̃ > 0, and it vanishes at
/// ω = 0.
#[allow(clippy::too_many_arguments)]
pub fn spectral_factor(
    omega: f64,
    omega_p: Complex64,
    omega_c: Complex64,
    delta: f64,
    gamma_p: f64,
    gamma_c: f64,
    big_gamma_p: f64,
    big_gamma_c: f64,
) -> Result<Complex64> {
    let rabi_sq = omega_p.norm_sqr() + omega_c.norm_sqr();
    if rabi_sq <= 0.0 {
        return Err(CoolError::DegenerateDarkState);
    }
    if omega == 0.0 {
        return Ok(ZERO);
    }
    let gamma_tilde = gamma_p + big_gamma_p + gamma_c + big_gamma_c;
    let denom = Complex64::new(
        4.0 * delta * omega - 4.0 * omega * omega + rabi_sq,
        -2.0 * omega * gamma_tilde,
    );
    let scale = (4.0 * delta * omega).abs() + 4.0 * omega * omega + rabi_sq;
    if denom.norm() <= 1e-300 * scale.max(1.0) {
        return Err(CoolError::SpectralPole { omega });
    }
    let numer = I * (16.0 * omega * C);
    Ok((gamma_p * gamma_c / TAU) * numer / (rabi_sq * denom))
}

/// The resonance term of the J denominator, 4Δω − 4ω² + |Ω_p|²+|Ω_c|²,
/// evaluated at ω. The strategy detunings are chosen to zero it at ω = ±ν.
pub fn resonance_term(omega: f64, omega_p: Complex64, omega_c: Complex64, delta: f64) -> f64 {
    4.0 * delta * omega - 4.0 * omega * omega + omega_p.norm_sqr() + omega_c.norm_sqr()
}
