//! Physical-parameter records, unit conversions, and the derived coupling
//! constants consumed by the rest of the pipeline.
//!
//! Everything is strict SI internally (rad/s, kg, m, W, K). Drive amplitudes
//! α̃ follow the flux normalisation |α̃|² = 2π𝒫/(cħω₀) and are taken real and
//! non-negative; every exported quantity depends only on |α̃|² or on the real
//! product μ_p μ_c, so the overall drive phase is an unobservable gauge.

use crate::constants::{C, HBAR, KB, TAU};
use crate::error::CoolError;
use crate::Result;

/// Mechanical oscillator: fundamental mode only.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MirrorSpec {
    /// Angular oscillation frequency ν (rad/s).
    pub nu: f64,
    /// Effective mass (kg).
    pub mass: f64,
    /// Quality factor: oscillation periods to lose half the motional
    /// excitation against a zero-temperature environment.
    pub quality: f64,
}

impl MirrorSpec {
    pub fn new(nu: f64, mass: f64, quality: f64) -> Result<Self> {
        if !(nu > 0.0) {
            return Err(CoolError::InvalidParameter {
                name: "mirror.nu",
                value: nu,
                constraint: "must be > 0",
            });
        }
        if !(mass > 0.0) {
            return Err(CoolError::InvalidParameter {
                name: "mirror.mass",
                value: mass,
                constraint: "must be > 0",
            });
        }
        if !(quality > 0.0) {
            return Err(CoolError::InvalidParameter {
                name: "mirror.quality",
                value: quality,
                constraint: "must be > 0",
            });
        }
        Ok(Self { nu, mass, quality })
    }

    /// Zero-point position fluctuation q₀ = sqrt(ħ / (2 m ν)) (m).
    ///
    /// Always recomputed from the stored mass and frequency.
    pub fn q0(&self) -> f64 {
        (HBAR / (2.0 * self.mass * self.nu)).sqrt()
    }

    /// Environmental damping rate ν/Q (rad/s).
    pub fn env_rate(&self) -> f64 {
        self.nu / self.quality
    }
}

/// One classical CW radiation drive and its atomic decay channels.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DriveSpec {
    /// Drive angular frequency ω₀ (rad/s).
    pub omega0: f64,
    /// Drive amplitude α̃ (per √length in the flux normalisation), real ≥ 0.
    pub amplitude: f64,
    /// Decay rate of the atomic transition into this drive's paraxial
    /// radiation continuum (rad/s).
    pub gamma: f64,
    /// Spontaneous decay rate into this drive's bath channel (rad/s).
    pub big_gamma: f64,
}

impl DriveSpec {
    pub fn from_amplitude(omega0: f64, amplitude: f64, gamma: f64, big_gamma: f64) -> Result<Self> {
        if !(omega0 > 0.0) {
            return Err(CoolError::InvalidParameter {
                name: "drive.omega0",
                value: omega0,
                constraint: "must be > 0",
            });
        }
        if !(amplitude >= 0.0) {
            return Err(CoolError::InvalidParameter {
                name: "drive.amplitude",
                value: amplitude,
                constraint: "must be >= 0",
            });
        }
        if !(gamma >= 0.0) {
            return Err(CoolError::InvalidParameter {
                name: "drive.gamma",
                value: gamma,
                constraint: "must be >= 0",
            });
        }
        if !(big_gamma >= 0.0) {
            return Err(CoolError::InvalidParameter {
                name: "drive.big_gamma",
                value: big_gamma,
                constraint: "must be >= 0",
            });
        }
        Ok(Self {
            omega0,
            amplitude,
            gamma,
            big_gamma,
        })
    }

    pub fn from_power(omega0: f64, power: f64, gamma: f64, big_gamma: f64) -> Result<Self> {
        let amplitude = amplitude_from_power(power, omega0)?;
        Self::from_amplitude(omega0, amplitude, gamma, big_gamma)
    }

    /// CW power 𝒫 = |α̃|² c ħ ω₀ / 2π (W).
    pub fn power(&self) -> f64 {
        power_from_amplitude(self.amplitude, self.omega0)
    }
}

/// The trapped atom cloud, reduced to its mean position and common detuning.
///
/// `n_atoms == 0` is the decoupled limit (no cloud); the chain solver itself
/// requires at least one atom.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AtomCloudSpec {
    /// Number of atoms N_p.
    pub n_atoms: u64,
    /// Mean distance of the cloud from the mirror (m).
    pub xbar: f64,
    /// Common detuning Δ (rad/s); Δ_g = Δ_e = Δ is enforced throughout.
    pub delta: f64,
}

impl AtomCloudSpec {
    pub fn new(n_atoms: u64, xbar: f64, delta: f64) -> Result<Self> {
        if !(xbar >= 0.0) {
            return Err(CoolError::InvalidParameter {
                name: "cloud.xbar",
                value: xbar,
                constraint: "must be >= 0",
            });
        }
        if !delta.is_finite() {
            return Err(CoolError::InvalidParameter {
                name: "cloud.delta",
                value: delta,
                constraint: "must be finite",
            });
        }
        Ok(Self {
            n_atoms,
            xbar,
            delta,
        })
    }

    /// Round-trip light travel time τ = 2 x̄ / c (s).
    pub fn tau(&self) -> f64 {
        2.0 * self.xbar / C
    }
}

/// Thermal environment of the mirror.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnvironmentSpec {
    /// Temperature (K).
    pub temperature: f64,
}

impl EnvironmentSpec {
    pub fn new(temperature: f64) -> Result<Self> {
        if !(temperature >= 0.0) {
            return Err(CoolError::InvalidParameter {
                name: "environment.temperature",
                value: temperature,
                constraint: "must be >= 0",
            });
        }
        Ok(Self { temperature })
    }

    /// Thermal occupation 𝒩th = k_B T / (ħ ν) for the given mirror.
    pub fn n_thermal(&self, mirror: &MirrorSpec) -> f64 {
        thermal_occupation(self.temperature, mirror)
    }
}

/// Drive amplitude from CW power: α̃ = sqrt(2π 𝒫 / (c ħ ω₀)).
pub fn amplitude_from_power(power: f64, omega0: f64) -> Result<f64> {
    if !(omega0 > 0.0) {
        return Err(CoolError::InvalidParameter {
            name: "omega0",
            value: omega0,
            constraint: "must be > 0",
        });
    }
    if !(power >= 0.0) {
        return Err(CoolError::InvalidParameter {
            name: "power",
            value: power,
            constraint: "must be >= 0",
        });
    }
    Ok((TAU * power / (C * HBAR * omega0)).sqrt())
}

/// Inverse of [`amplitude_from_power`]: 𝒫 = α̃² c ħ ω₀ / 2π.
pub fn power_from_amplitude(amplitude: f64, omega0: f64) -> f64 {
    amplitude * amplitude * C * HBAR * omega0 / TAU
}

/// Optomechanical coupling of one drive to the mirror motion:
/// μ = 2 sqrt(c/2π) (ω₀/c) q₀ α̃ (units 1/√s).
///
/// Real and non-negative under the real-amplitude convention; the general
/// complex-amplitude case only ever enters through μ_p μ_c and |α̃|².
pub fn optomech_coupling(drive: &DriveSpec, mirror: &MirrorSpec) -> f64 {
    2.0 * (C / TAU).sqrt() * (drive.omega0 / C) * mirror.q0() * drive.amplitude
}

/// Rabi frequency of one drive on its atomic transition:
/// Ω = sqrt(2 c γ / π) α̃ (rad/s).
///
/// Position-dependent phases e^{∓iφ} are applied by the chain layer, not
/// here.
pub fn rabi_frequency(drive: &DriveSpec) -> f64 {
    (2.0 * C * drive.gamma / std::f64::consts::PI).sqrt() * drive.amplitude
}

/// Thermal occupation 𝒩th = k_B T / (ħ ν).
pub fn thermal_occupation(temperature: f64, mirror: &MirrorSpec) -> f64 {
    KB * temperature / (HBAR * mirror.nu)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const NU_32KHZ: f64 = TAU * 32.0e3;

    fn sec6_mirror() -> MirrorSpec {
        // 240 x 12 x 0.66 um^3 single-crystal diamond at 3515 kg/m^3.
        MirrorSpec::new(NU_32KHZ, 6.681_312e-12, 1.5e6).unwrap()
    }

    #[test]
    fn amplitude_of_zero_power_is_zero() {
        assert_eq!(amplitude_from_power(0.0, 2.4e15).unwrap(), 0.0);
    }

    #[test]
    fn amplitude_at_780nm_10mw() {
        // alpha^2 = 2 pi P / (c hbar omega0) with omega0 = 2 pi c / 780 nm.
        let omega0 = TAU * C / 780.0e-9;
        let amp = amplitude_from_power(10.0e-3, omega0).unwrap();
        let expected_sq = TAU * 10.0e-3 / (C * HBAR * omega0);
        assert!((amp * amp - expected_sq).abs() <= 1e-12 * expected_sq);
        // Order of magnitude sanity: ~8.2e8 photons per metre of beam.
        assert!((amp * amp / 8.229e8 - 1.0).abs() < 1e-3);
    }

    #[test]
    fn quadrupling_power_doubles_amplitude() {
        let omega0 = TAU * C / 780.0e-9;
        let a1 = amplitude_from_power(2.5e-3, omega0).unwrap();
        let a4 = amplitude_from_power(10.0e-3, omega0).unwrap();
        assert!((a4 / a1 - 2.0).abs() < 1e-12);
    }

    #[test]
    fn amplitude_rejects_bad_omega0() {
        assert!(amplitude_from_power(1.0, 0.0).is_err());
        assert!(amplitude_from_power(1.0, -1.0).is_err());
    }

    #[test]
    fn coupling_zero_amplitude_is_zero() {
        let mirror = sec6_mirror();
        let drive = DriveSpec::from_amplitude(2.4e15, 0.0, 1.0, 1.0).unwrap();
        assert_eq!(optomech_coupling(&drive, &mirror), 0.0);
    }

    #[test]
    fn coupling_squared_matches_power_form() {
        // |mu|^2 = 4 (omega0/c) q0^2 P / (hbar c), algebraic elimination of
        // the amplitude.
        let mirror = sec6_mirror();
        let omega0 = TAU * C / 780.0e-9;
        let drive = DriveSpec::from_power(omega0, 10.0e-3, 1.0, 1.0).unwrap();
        let mu = optomech_coupling(&drive, &mirror);
        let q0 = mirror.q0();
        let expected = 4.0 * (omega0 / C) * q0 * q0 * drive.power() / (HBAR * C);
        assert!((mu * mu - expected).abs() <= 1e-12 * expected);
        // Recorded value for the sec. VI fixture: |mu|^2 ~ 4.0e2 / s.
        assert!((mu * mu / 400.04 - 1.0).abs() < 1e-3);
    }

    #[test]
    fn equal_drives_give_equal_couplings() {
        let mirror = sec6_mirror();
        let omega0 = TAU * C / 780.0e-9;
        let p = DriveSpec::from_power(omega0, 10.0e-3, 1.0, 2.0).unwrap();
        let c = DriveSpec::from_power(omega0, 10.0e-3, 3.0, 4.0).unwrap();
        assert_eq!(
            optomech_coupling(&p, &mirror),
            optomech_coupling(&c, &mirror)
        );
    }

    #[test]
    fn rabi_zero_cases() {
        let d0 = DriveSpec::from_amplitude(2.4e15, 0.0, 5.0, 1.0).unwrap();
        assert_eq!(rabi_frequency(&d0), 0.0);
        let dg = DriveSpec::from_amplitude(2.4e15, 3.0e4, 0.0, 1.0).unwrap();
        assert_eq!(rabi_frequency(&dg), 0.0);
    }

    #[test]
    fn rabi_can_be_tuned_to_4nu() {
        // Pick gamma so that Omega = 4 nu at 10 mW, 780 nm.
        let omega0 = TAU * C / 780.0e-9;
        let amp = amplitude_from_power(10.0e-3, omega0).unwrap();
        let target = 4.0 * NU_32KHZ;
        let gamma = std::f64::consts::PI * target * target / (2.0 * C * amp * amp);
        let d = DriveSpec::from_amplitude(omega0, amp, gamma, 0.0).unwrap();
        assert!((rabi_frequency(&d) / target - 1.0).abs() < 1e-12);
    }

    #[test]
    fn thermal_occupation_cases() {
        let mirror = sec6_mirror();
        assert_eq!(thermal_occupation(0.0, &mirror), 0.0);
        // 10 mK, nu = 2 pi x 32 kHz -> about 6500.
        let n = thermal_occupation(10.0e-3, &mirror);
        assert!((n / 6500.0 - 1.0).abs() < 0.02, "n_thermal = {n}");
        let n2 = thermal_occupation(20.0e-3, &mirror);
        assert!((n2 / n - 2.0).abs() < 1e-12);
    }

    #[test]
    fn q0_scaling_with_mass() {
        let m1 = MirrorSpec::new(NU_32KHZ, 1.0e-12, 1.0e6).unwrap();
        let m4 = MirrorSpec::new(NU_32KHZ, 4.0e-12, 1.0e6).unwrap();
        assert!((m1.q0() / m4.q0() - 2.0).abs() < 1e-14);
    }

    #[test]
    fn tau_is_round_trip_time() {
        let cloud = AtomCloudSpec::new(10, 2343.6, 0.0).unwrap();
        assert_eq!(cloud.tau(), 2.0 * 2343.6 / C);
    }

    proptest! {
        #[test]
        fn power_amplitude_round_trip(
            log_p in -12.0f64..6.0,
            log_w in 12.0f64..18.0,
        ) {
            let power = 10.0f64.powf(log_p);
            let omega0 = 10.0f64.powf(log_w);
            let amp = amplitude_from_power(power, omega0).unwrap();
            let back = power_from_amplitude(amp, omega0);
            prop_assert!((back - power).abs() <= 1e-12 * power);
        }

        #[test]
        fn coupling_identity_over_random_specs(
            log_p in -9.0f64..0.0,
            log_m in -15.0f64..-6.0,
            log_nu in 3.0f64..9.0,
        ) {
            let power = 10.0f64.powf(log_p);
            let mass = 10.0f64.powf(log_m);
            let nu = 10.0f64.powf(log_nu);
            let mirror = MirrorSpec::new(nu, mass, 1.0e6).unwrap();
            let omega0 = TAU * C / 780.0e-9;
            let drive = DriveSpec::from_power(omega0, power, 1.0, 1.0).unwrap();
            let mu = optomech_coupling(&drive, &mirror);
            let q0 = mirror.q0();
            let expected = 4.0 * (omega0 / C) * q0 * q0 * power / (HBAR * C);
            prop_assert!((mu * mu - expected).abs() <= 1e-12 * expected);
        }
    }
}
