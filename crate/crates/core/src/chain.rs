//! Transport of the zero-frequency mirror–sideband correlations through the
//! atom chain.
//!
//! Site i carries the pair (⟨b̂𝒜_p^(i)⟩₀, ⟨b̂𝒜_c^(i)⟩₀) on the red branch and
//! the ⟨b̂†·⟩₀ pair on the blue branch. Each atom applies the same scattering
//! step, and the boundary data live at opposite ends (𝒜_p vanishes past the
//! last atom, 𝒜_c before the first), so the chain is a two-point boundary
//! value problem. It is solved three ways:
//!
//! * [`solve_chain_exact`] — the canonical path: the full 2(N+1)-unknown
//!   system assembled as a tridiagonal matrix and factorised with partial
//!   pivoting;
//! * [`solve_chain_transfer`] — an independent forward transfer-matrix
//!   oracle (affine superposition in the unknown boundary value);
//! * [`solve_chain_closed_form`] — the leading-order resummed boundary
//!   correlation −i e^{∓iντ} (μ_c/2) η/(1−η) · weight, with
//!   η = N_p |α̃|² J(∓ν).

use num_complex::Complex64;

use crate::error::CoolError;
use crate::Result;

const I: Complex64 = Complex64::new(0.0, 1.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// The round-trip placement phase e^{iντ}.
///
/// Designed placements pin it to exactly ±1; arbitrary positions must supply
/// the phase reduced mod 2π themselves, because for kilometre-scale x̄ the
/// product ντ carries too many radians for a meaningful float evaluation
/// from scratch.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Phase {
    PlusOne,
    MinusOne,
    General(Complex64),
}

impl Phase {
    /// The complex value of e^{iντ}.
    pub fn value(self) -> Complex64 {
        match self {
            Phase::PlusOne => ONE,
            Phase::MinusOne => -ONE,
            Phase::General(z) => z,
        }
    }

    /// e^{−iντ}.
    pub fn conj_value(self) -> Complex64 {
        self.value().conj()
    }
}

/// Which sideband family a solve addresses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    /// ⟨b̂·⟩₀ correlations: J(−ν), e^{−iντ}, source weight ⟨b̂b̂†⟩ = n+1.
    Red,
    /// ⟨b̂†·⟩₀ correlations: J(+ν), e^{+iντ}, source weight ⟨b̂†b̂⟩ = n.
    Blue,
}

/// Everything the chain needs, already reduced to dimensionless couplings.
#[derive(Debug, Clone, Copy)]
pub struct ChainInputs {
    /// Number of atoms N_p (the chain solvers require ≥ 1).
    pub n_atoms: usize,
    /// Common drive intensity |α̃|² (both drives equal).
    pub alpha_sq: f64,
    /// Spectral factor at +ν.
    pub j_plus: Complex64,
    /// Spectral factor at −ν.
    pub j_minus: Complex64,
    /// Control optomechanical coupling μ_c.
    pub mu_c: Complex64,
    /// Round-trip phase e^{iντ}.
    pub phase: Phase,
    /// Current mean occupation ⟨n̂⟩ ≥ 0.
    pub n_occ: f64,
}

impl ChainInputs {
    fn branch_j(&self, branch: Branch) -> Complex64 {
        match branch {
            Branch::Red => self.j_minus,
            Branch::Blue => self.j_plus,
        }
    }

    fn branch_phase(&self, branch: Branch) -> Complex64 {
        match branch {
            Branch::Red => self.phase.conj_value(),
            Branch::Blue => self.phase.value(),
        }
    }

    fn branch_weight(&self, branch: Branch) -> f64 {
        match branch {
            Branch::Red => self.n_occ + 1.0,
            Branch::Blue => self.n_occ,
        }
    }

    /// Collective coupling η = N_p |α̃|² J(±ν) for one branch.
    pub fn eta(&self, branch: Branch) -> Complex64 {
        self.n_atoms as f64 * self.alpha_sq * self.branch_j(branch)
    }
}

/// One atom's scattering step, mapping the incoming pair
/// (⟨·𝒜_p^(i+1)⟩, ⟨·𝒜_c^(i)⟩) to the outgoing (⟨·𝒜_p^(i)⟩, ⟨·𝒜_c^(i+1)⟩).
#[derive(Debug, Clone, Copy)]
pub struct StepMap {
    /// 2×2 linear part, row-major.
    pub t: [[Complex64; 2]; 2],
    /// Inhomogeneous source.
    pub s: [Complex64; 2],
}

impl StepMap {
    /// Apply the map to (in_p, in_c) = (⟨·𝒜_p^(i+1)⟩, ⟨·𝒜_c^(i)⟩).
    pub fn apply(&self, in_p: Complex64, in_c: Complex64) -> (Complex64, Complex64) {
        (
            self.t[0][0] * in_p + self.t[0][1] * in_c + self.s[0],
            self.t[1][0] * in_p + self.t[1][1] * in_c + self.s[1],
        )
    }
}

/// General-amplitude step coefficients; the public equal-drive path is the
/// validated special case α̃_p = α̃_c.
fn general_step_map(
    alpha_p: Complex64,
    alpha_c: Complex64,
    j: Complex64,
    mu_c: Complex64,
    source_phase: Complex64,
    weight: f64,
) -> StepMap {
    let cross = alpha_p * alpha_c.conj() * j;
    let cross_rev = alpha_p.conj() * alpha_c * j;
    let source = I * source_phase * (mu_c / 2.0) * weight;
    StepMap {
        t: [
            [ONE + alpha_c.norm_sqr() * j, -cross],
            [-cross_rev, ONE + alpha_p.norm_sqr() * j],
        ],
        s: [-source * cross, source * (alpha_p.norm_sqr() * j)],
    }
}

/// Per-step linear map and source for one branch under equal drives.
pub fn recurrence_coefficients(inputs: &ChainInputs, branch: Branch) -> StepMap {
    let alpha = Complex64::from(inputs.alpha_sq.sqrt());
    general_step_map(
        alpha,
        alpha,
        inputs.branch_j(branch),
        inputs.mu_c,
        inputs.branch_phase(branch),
        inputs.branch_weight(branch),
    )
}

/// One branch of chain correlations along the cloud.
#[derive(Debug, Clone)]
pub struct BranchSolution {
    /// ⟨·𝒜_p^(i)⟩₀ for i = 1..N_p+1 (index 0 ↔ i = 1).
    pub corr_p: Vec<Complex64>,
    /// ⟨·𝒜_c^(i)⟩₀ for i = 1..N_p+1.
    pub corr_c: Vec<Complex64>,
    /// Normalised ∞-norm residual of the assembled linear system.
    pub residual: f64,
}

impl BranchSolution {
    /// The boundary correlation ⟨·𝒜_p^(1)⟩₀ that feeds the mirror equation.
    pub fn boundary(&self) -> Complex64 {
        self.corr_p[0]
    }

    /// Largest violation of the per-atom conversion relation
    /// (Δ𝒜_p + Δ𝒜_c = 0), normalised by the largest amplitude.
    pub fn conservation_defect(&self) -> f64 {
        let n = self.corr_p.len() - 1;
        let scale = self
            .corr_p
            .iter()
            .chain(self.corr_c.iter())
            .map(|z| z.norm())
            .fold(f64::MIN_POSITIVE, f64::max);
        (0..n)
            .map(|i| {
                ((self.corr_p[i] - self.corr_p[i + 1]) + (self.corr_c[i + 1] - self.corr_c[i]))
                    .norm()
            })
            .fold(0.0, f64::max)
            / scale
    }
}

/// Complex tridiagonal LU with partial pivoting (gttrf/gttrs style).
mod tridiag {
    use super::*;

    pub struct Factors {
        dl: Vec<Complex64>,
        d: Vec<Complex64>,
        du: Vec<Complex64>,
        du2: Vec<Complex64>,
        swapped: Vec<bool>,
    }

    pub fn factor(
        mut dl: Vec<Complex64>,
        mut d: Vec<Complex64>,
        mut du: Vec<Complex64>,
    ) -> Result<Factors> {
        let n = d.len();
        let mut du2 = vec![Complex64::default(); n.saturating_sub(2)];
        let mut swapped = vec![false; n.saturating_sub(1)];
        for i in 0..n - 1 {
            if d[i].norm() >= dl[i].norm() {
                if d[i].norm() == 0.0 && dl[i].norm() == 0.0 {
                    return Err(CoolError::SingularChain { index: i });
                }
                let fact = dl[i] / d[i];
                dl[i] = fact;
                d[i + 1] -= fact * du[i];
            } else {
                let fact = d[i] / dl[i];
                d[i] = dl[i];
                dl[i] = fact;
                let tmp = du[i];
                du[i] = d[i + 1];
                d[i + 1] = tmp - fact * d[i + 1];
                if i < n - 2 {
                    du2[i] = du[i + 1];
                    du[i + 1] = -fact * du[i + 1];
                }
                swapped[i] = true;
            }
        }
        if d[n - 1].norm() == 0.0 {
            return Err(CoolError::SingularChain { index: n - 1 });
        }
        Ok(Factors {
            dl,
            d,
            du,
            du2,
            swapped,
        })
    }

    pub fn solve(f: &Factors, mut b: Vec<Complex64>) -> Vec<Complex64> {
        let n = f.d.len();
        for i in 0..n - 1 {
            if f.swapped[i] {
                let tmp = b[i];
                b[i] = b[i + 1];
                b[i + 1] = tmp - f.dl[i] * b[i];
            } else {
                let sub = f.dl[i] * b[i];
                b[i + 1] -= sub;
            }
        }
        b[n - 1] /= f.d[n - 1];
        if n > 1 {
            b[n - 2] = (b[n - 2] - f.du[n - 2] * b[n - 1]) / f.d[n - 2];
        }
        for i in (0..n.saturating_sub(2)).rev() {
            b[i] = (b[i] - f.du[i] * b[i + 1] - f.du2[i] * b[i + 2]) / f.d[i];
        }
        b
    }
}

/// Assembled tridiagonal form of one branch.
struct Assembled {
    dl: Vec<Complex64>,
    d: Vec<Complex64>,
    du: Vec<Complex64>,
    rhs: Vec<Complex64>,
}

fn assemble(inputs: &ChainInputs, branch: Branch) -> Assembled {
    let n = inputs.n_atoms;
    let step = recurrence_coefficients(inputs, branch);
    let dim = 2 * (n + 1);
    let mut dl = vec![Complex64::default(); dim - 1];
    let mut d = vec![Complex64::default(); dim];
    let mut du = vec![Complex64::default(); dim - 1];
    let mut rhs = vec![Complex64::default(); dim];

    // Unknown layout: z[2k] = <.A_p^(k+1)>, z[2k+1] = <.A_c^(k+1)>.
    // Boundary <.A_c^(1)> = 0.
    du[0] = ONE;
    for i in 1..=n {
        // Row 2i-1: x_i - t00 x_{i+1} - t01 y_i = s0.
        dl[2 * i - 2] = ONE;
        d[2 * i - 1] = -step.t[0][1];
        du[2 * i - 1] = -step.t[0][0];
        rhs[2 * i - 1] = step.s[0];
        // Row 2i: y_{i+1} - t10 x_{i+1} - t11 y_i = s1.
        dl[2 * i - 1] = -step.t[1][1];
        d[2 * i] = -step.t[1][0];
        du[2 * i] = ONE;
        rhs[2 * i] = step.s[1];
    }
    // Boundary <.A_p^(N+1)> = 0.
    dl[2 * n] = ONE;

    Assembled { dl, d, du, rhs }
}

fn residual_norm(a: &Assembled, z: &[Complex64]) -> f64 {
    let n = a.d.len();
    let mut worst = 0.0f64;
    let mut a_norm = 0.0f64;
    for r in 0..n {
        let mut acc = a.d[r] * z[r];
        let mut row = a.d[r].norm();
        if r > 0 {
            acc += a.dl[r - 1] * z[r - 1];
            row += a.dl[r - 1].norm();
        }
        if r < n - 1 {
            acc += a.du[r] * z[r + 1];
            row += a.du[r].norm();
        }
        worst = worst.max((acc - a.rhs[r]).norm());
        a_norm = a_norm.max(row);
    }
    let z_norm = z.iter().map(|x| x.norm()).fold(0.0, f64::max);
    let b_norm = a.rhs.iter().map(|x| x.norm()).fold(0.0, f64::max);
    worst / (b_norm + a_norm * z_norm).max(f64::MIN_POSITIVE)
}

fn split_solution(z: Vec<Complex64>, residual: f64) -> BranchSolution {
    let sites = z.len() / 2;
    let mut corr_p = Vec::with_capacity(sites);
    let mut corr_c = Vec::with_capacity(sites);
    for k in 0..sites {
        corr_p.push(z[2 * k]);
        corr_c.push(z[2 * k + 1]);
    }
    BranchSolution {
        corr_p,
        corr_c,
        residual,
    }
}

/// Exact solve of one branch as a pivoted tridiagonal boundary-value system.
pub fn solve_chain_exact(inputs: &ChainInputs, branch: Branch) -> Result<BranchSolution> {
    validate(inputs)?;
    let a = assemble(inputs, branch);
    let f = tridiag::factor(a.dl.clone(), a.d.clone(), a.du.clone())?;
    let z = tridiag::solve(&f, a.rhs.clone());
    let residual = residual_norm(&a, &z);
    Ok(split_solution(z, residual))
}

/// Independent transfer-matrix oracle: forward propagation of the affine
/// dependence on the unknown boundary value ⟨·𝒜_p^(1)⟩₀.
pub fn solve_chain_transfer(inputs: &ChainInputs, branch: Branch) -> Result<BranchSolution> {
    validate(inputs)?;
    let n = inputs.n_atoms;
    let step = recurrence_coefficients(inputs, branch);
    if step.t[0][0].norm() < 1e-300 {
        return Err(CoolError::SingularChain { index: 0 });
    }
    // (x_i, y_i) = (a_i, c_i) * x_1 + (b_i, d_i); y_1 = 0.
    let mut coeffs = Vec::with_capacity(n + 1);
    let (mut a, mut b) = (ONE, Complex64::default());
    let (mut c, mut dd) = (Complex64::default(), Complex64::default());
    coeffs.push((a, b, c, dd));
    for _ in 0..n {
        let a_next = (a - step.t[0][1] * c) / step.t[0][0];
        let b_next = (b - step.t[0][1] * dd - step.s[0]) / step.t[0][0];
        let c_next = step.t[1][0] * a_next + step.t[1][1] * c;
        let d_next = step.t[1][0] * b_next + step.t[1][1] * dd + step.s[1];
        a = a_next;
        b = b_next;
        c = c_next;
        dd = d_next;
        coeffs.push((a, b, c, dd));
    }
    if a.norm() < 1e-300 {
        return Err(CoolError::SingularChain { index: 2 * n });
    }
    let x1 = -b / a;
    let mut corr_p = Vec::with_capacity(n + 1);
    let mut corr_c = Vec::with_capacity(n + 1);
    for (ai, bi, ci, di) in coeffs {
        corr_p.push(ai * x1 + bi);
        corr_c.push(ci * x1 + di);
    }
    Ok(BranchSolution {
        corr_p,
        corr_c,
        residual: 0.0,
    })
}

/// Leading-order closed form of the boundary correlation
/// −i e^{∓iντ} (μ_c/2) η/(1−η) · weight.
pub fn solve_chain_closed_form(inputs: &ChainInputs, branch: Branch) -> Result<Complex64> {
    validate(inputs)?;
    let eta = inputs.eta(branch);
    closed_form_from_eta(eta, inputs.mu_c, inputs.branch_phase(branch), inputs.branch_weight(branch))
}

/// The same closed form with η supplied directly.
pub fn closed_form_from_eta(
    eta: Complex64,
    mu_c: Complex64,
    source_phase: Complex64,
    weight: f64,
) -> Result<Complex64> {
    let denom = ONE - eta;
    if denom.norm() < 1e-9 {
        return Err(CoolError::EtaNearUnity {
            eta_re: eta.re,
            eta_im: eta.im,
            dist: denom.norm(),
        });
    }
    Ok(-I * source_phase * (mu_c / 2.0) * (eta / denom) * weight)
}

fn validate(inputs: &ChainInputs) -> Result<()> {
    if inputs.n_atoms == 0 {
        return Err(CoolError::InvalidParameter {
            name: "chain.n_atoms",
            value: 0.0,
            constraint: "chain solvers need at least one atom",
        });
    }
    if !(inputs.alpha_sq >= 0.0) {
        return Err(CoolError::InvalidParameter {
            name: "chain.alpha_sq",
            value: inputs.alpha_sq,
            constraint: "must be >= 0",
        });
    }
    if !(inputs.n_occ >= 0.0) {
        return Err(CoolError::InvalidParameter {
            name: "chain.n_occ",
            value: inputs.n_occ,
            constraint: "must be >= 0",
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn test_inputs(n_atoms: usize, per_atom: f64) -> ChainInputs {
        // A physically-shaped J: negative real part, nonzero imaginary part.
        let j = Complex64::new(-0.8, 0.6) * per_atom;
        ChainInputs {
            n_atoms,
            alpha_sq: 1.0,
            j_plus: j * 0.21,
            j_minus: j,
            mu_c: Complex64::new(0.9, 0.0),
            phase: Phase::MinusOne,
            n_occ: 1.7,
        }
    }

    #[test]
    fn decoupled_step_is_identity() {
        let mut inputs = test_inputs(3, 1e-3);
        inputs.alpha_sq = 0.0;
        let step = recurrence_coefficients(&inputs, Branch::Red);
        assert_eq!(step.t[0][0], ONE);
        assert_eq!(step.t[1][1], ONE);
        assert_eq!(step.t[0][1], Complex64::default());
        assert_eq!(step.t[1][0], Complex64::default());
        assert_eq!(step.s[0], Complex64::default());
        assert_eq!(step.s[1], Complex64::default());

        let mut inputs = test_inputs(3, 1e-3);
        inputs.j_minus = Complex64::default();
        let step = recurrence_coefficients(&inputs, Branch::Red);
        assert_eq!(step.t[0][0], ONE);
        assert_eq!(step.s[1], Complex64::default());
    }

    #[test]
    fn single_step_source_term() {
        // One atom acting on a zero state produces only the source:
        // <b A_c^(2)> = i e^{-i nu tau} (mu_c/2) |alpha|^2 J(-nu) (n+1).
        let inputs = test_inputs(1, 1e-3);
        let step = recurrence_coefficients(&inputs, Branch::Red);
        let (_, y2) = step.apply(Complex64::default(), Complex64::default());
        let expected = I
            * inputs.phase.conj_value()
            * (inputs.mu_c / 2.0)
            * inputs.alpha_sq
            * inputs.j_minus
            * (inputs.n_occ + 1.0);
        assert!((y2 - expected).norm() < 1e-15 * expected.norm());
    }

    #[test]
    fn n1_matches_hand_elimination() {
        // With one atom the boundary conditions force
        // corr_p[0] = s0 and corr_c[1] = s1 directly.
        let inputs = test_inputs(1, 2e-4);
        let step = recurrence_coefficients(&inputs, Branch::Red);
        let sol = solve_chain_exact(&inputs, Branch::Red).unwrap();
        assert!((sol.corr_p[0] - step.s[0]).norm() <= 1e-14 * step.s[0].norm());
        assert!((sol.corr_c[1] - step.s[1]).norm() <= 1e-14 * step.s[1].norm());
        assert_eq!(sol.corr_p[1], Complex64::default());
        assert_eq!(sol.corr_c[0], Complex64::default());
        assert!(sol.residual < 1e-12);
    }

    #[test]
    fn red_branch_scales_linearly_with_weight() {
        let mut inputs = test_inputs(40, 1e-4);
        inputs.n_occ = 0.3;
        let sol1 = solve_chain_exact(&inputs, Branch::Red).unwrap();
        inputs.n_occ = 2.0 * (0.3 + 1.0) - 1.0; // doubles n_occ + 1
        let sol2 = solve_chain_exact(&inputs, Branch::Red).unwrap();
        for (a, b) in sol1.corr_p.iter().zip(&sol2.corr_p) {
            assert!((b - a * 2.0).norm() <= 1e-12 * a.norm().max(1e-300));
        }
    }

    #[test]
    fn conservation_holds_at_every_interior_index() {
        for branch in [Branch::Red, Branch::Blue] {
            let inputs = test_inputs(137, 3e-4);
            let sol = solve_chain_exact(&inputs, branch).unwrap();
            assert!(
                sol.conservation_defect() < 1e-12,
                "defect {}",
                sol.conservation_defect()
            );
        }
    }

    #[test]
    fn transfer_oracle_agrees_with_tridiagonal() {
        for n in [1usize, 2, 7, 63, 200] {
            let inputs = test_inputs(n, 5e-4);
            for branch in [Branch::Red, Branch::Blue] {
                let a = solve_chain_exact(&inputs, branch).unwrap();
                let b = solve_chain_transfer(&inputs, branch).unwrap();
                let scale = a
                    .corr_p
                    .iter()
                    .map(|z| z.norm())
                    .fold(f64::MIN_POSITIVE, f64::max);
                for k in 0..=n {
                    assert!(
                        (a.corr_p[k] - b.corr_p[k]).norm() <= 1e-12 * scale,
                        "n={n} k={k}"
                    );
                    assert!((a.corr_c[k] - b.corr_c[k]).norm() <= 1e-12 * scale);
                }
            }
        }
    }

    #[test]
    fn closed_form_matches_exact_at_small_coupling() {
        let inputs = test_inputs(200, 5e-6);
        let exact = solve_chain_exact(&inputs, Branch::Red).unwrap().boundary();
        let closed = solve_chain_closed_form(&inputs, Branch::Red).unwrap();
        let rel = (exact - closed).norm() / exact.norm();
        assert!(rel <= 1e-4, "relative deviation {rel}");
    }

    #[test]
    fn closed_form_deviation_scales_inverse_n() {
        // Fixed eta, growing N: the truncation error of the closed form is
        // O(per-atom coupling) = O(eta/N).
        let eta_mag = 1e-3;
        let mut devs = Vec::new();
        for &n in &[50usize, 100, 200, 400] {
            let inputs = test_inputs(n, eta_mag / n as f64);
            let exact = solve_chain_exact(&inputs, Branch::Red).unwrap().boundary();
            let closed = solve_chain_closed_form(&inputs, Branch::Red).unwrap();
            devs.push(((n as f64).ln(), ((exact - closed).norm() / exact.norm()).ln()));
        }
        let slope = {
            let m = devs.len() as f64;
            let sx: f64 = devs.iter().map(|p| p.0).sum();
            let sy: f64 = devs.iter().map(|p| p.1).sum();
            let sxx: f64 = devs.iter().map(|p| p.0 * p.0).sum();
            let sxy: f64 = devs.iter().map(|p| p.0 * p.1).sum();
            (m * sxy - sx * sy) / (m * sxx - sx * sx)
        };
        assert!((slope + 1.0).abs() < 0.1, "log-log slope {slope}");
    }

    #[test]
    fn branch_independence() {
        let inputs = test_inputs(31, 1e-4);
        let red0 = solve_chain_exact(&inputs, Branch::Red).unwrap();
        let blue0 = solve_chain_exact(&inputs, Branch::Blue).unwrap();
        let mut perturbed = inputs;
        perturbed.j_plus *= 3.7;
        let red1 = solve_chain_exact(&perturbed, Branch::Red).unwrap();
        let blue1 = solve_chain_exact(&perturbed, Branch::Blue).unwrap();
        for k in 0..=31 {
            assert_eq!(red0.corr_p[k], red1.corr_p[k]);
            assert_eq!(red0.corr_c[k], red1.corr_c[k]);
        }
        let changed = blue0
            .corr_p
            .iter()
            .zip(&blue1.corr_p)
            .any(|(a, b)| (a - b).norm() > 0.0);
        assert!(changed);
    }

    #[test]
    fn closed_form_saturates_at_large_coupling() {
        // |eta| -> infinity along a fixed complex ray with Re < 0:
        // eta/(1-eta) -> -1, so the boundary amplitude approaches
        // +i e^{-i nu tau} (mu_c/2) (n+1).
        let mut inputs = test_inputs(1000, 1.0);
        inputs.j_minus = Complex64::new(-0.8, 0.6); // |eta| = 1000
        let closed = solve_chain_closed_form(&inputs, Branch::Red).unwrap();
        let limit = I * inputs.phase.conj_value() * (inputs.mu_c / 2.0) * (inputs.n_occ + 1.0);
        assert!((closed - limit).norm() <= 2e-3 * limit.norm());
    }

    #[test]
    fn eta_near_unity_is_an_error() {
        let mut inputs = test_inputs(1, 1.0);
        inputs.j_minus = Complex64::new(1.0, 0.0);
        inputs.alpha_sq = 1.0;
        assert!(matches!(
            solve_chain_closed_form(&inputs, Branch::Red),
            Err(CoolError::EtaNearUnity { .. })
        ));
    }

    #[test]
    fn eta_zero_gives_zero() {
        let mut inputs = test_inputs(5, 1e-4);
        inputs.alpha_sq = 0.0;
        let closed = solve_chain_closed_form(&inputs, Branch::Red).unwrap();
        assert_eq!(closed, Complex64::default());
        let sol = solve_chain_exact(&inputs, Branch::Red).unwrap();
        assert!(sol.corr_p.iter().all(|z| z.norm() == 0.0));
    }

    #[test]
    fn zero_atoms_rejected() {
        let inputs = test_inputs(0, 1e-4);
        assert!(solve_chain_exact(&inputs, Branch::Red).is_err());
    }

    #[test]
    fn tridiag_solver_vs_dense_residual() {
        // Random-ish well-conditioned complex tridiagonal systems.
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        };
        for n in [1usize, 2, 3, 8, 33] {
            let dl: Vec<Complex64> = (0..n.saturating_sub(1))
                .map(|_| Complex64::new(next(), next()))
                .collect();
            let du: Vec<Complex64> = (0..n.saturating_sub(1))
                .map(|_| Complex64::new(next(), next()))
                .collect();
            let d: Vec<Complex64> = (0..n)
                .map(|_| Complex64::new(next() + 3.0, next()))
                .collect();
            let b: Vec<Complex64> = (0..n).map(|_| Complex64::new(next(), next())).collect();

            let f = tridiag::factor(dl.clone(), d.clone(), du.clone()).unwrap();
            let x = tridiag::solve(&f, b.clone());

            for r in 0..n {
                let mut acc = d[r] * x[r];
                if r > 0 {
                    acc += dl[r - 1] * x[r - 1];
                }
                if r < n - 1 {
                    acc += du[r] * x[r + 1];
                }
                assert!((acc - b[r]).norm() < 1e-12, "n={n} row {r}");
            }
        }
    }

    #[test]
    fn tridiag_handles_zero_diagonal_via_pivoting() {
        // The assembled boundary rows have zero diagonal entries by
        // construction; pivoting must handle them.
        let dl = vec![ONE, ONE];
        let d = vec![Complex64::default(), ONE * 2.0, ONE];
        let du = vec![ONE, ONE * 0.5];
        let b = vec![ONE, ONE, ONE];
        let f = tridiag::factor(dl.clone(), d.clone(), du.clone()).unwrap();
        let x = tridiag::solve(&f, b.clone());
        for r in 0..3 {
            let mut acc = d[r] * x[r];
            if r > 0 {
                acc += dl[r - 1] * x[r - 1];
            }
            if r < 2 {
                acc += du[r] * x[r + 1];
            }
            assert!((acc - b[r]).norm() < 1e-12);
        }
    }
}
