//! Strict JSON scenario files.
//!
//! Every quantity carries a unit-suffixed key; unknown keys are rejected and
//! parse → validate → echo round-trips losslessly (serde_json emits the
//! shortest float representation that re-parses to the same bits).
//!
//! ```json
//! {
//!   "mirror":  { "nu_hz": 32000.0, "mass_kg": 6.681312e-12, "quality": 1.5e6 },
//!   "probe":   { "wavelength_nm": 780.0, "power_mw": 10.0,
//!                "gamma_rad_s": 4.1e-6, "Gamma_rad_s": 20100.0 },
//!   "control": { "...": "as probe" },
//!   "cloud":   { "n_atoms": 20000000000, "delta_rad_s": 1407433.5,
//!                "placement": { "strategy": "tms_suppress", "index": 0 } },
//!   "environment": { "temperature_mk": 10.0 },
//!   "overrides": { "eta_plus": [0.0, 0.0], "eta_minus": [-1.0e12, 0.0] }
//! }
//! ```
//!
//! A drive takes `wavelength_nm` or `omega0_rad_s` (exactly one) and
//! `power_mw` or `amplitude` (exactly one). A placement is either a designed
//! strategy (`strategy` + `index`) or an explicit position (`xbar_m` +
//! `phase` as `[re, im]` of e^{iντ}); the two groups cannot be mixed.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::constants::{C, TAU};
use crate::cooling::{StrategyChoice, StrategyKind};
use crate::error::CoolError;
use crate::params::{AtomCloudSpec, DriveSpec, EnvironmentSpec, MirrorSpec};
use crate::sweep::{EtaOverrides, Placement, Scenario};
use crate::Result;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MirrorSection {
    /// Mechanical frequency ν/2π (Hz).
    pub nu_hz: f64,
    pub mass_kg: f64,
    pub quality: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DriveSection {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wavelength_nm: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub omega0_rad_s: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub power_mw: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub amplitude: Option<f64>,
    pub gamma_rad_s: f64,
    #[serde(rename = "Gamma_rad_s")]
    pub big_gamma_rad_s: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StrategyName {
    BsEnhance,
    TmsSuppress,
}

impl From<StrategyName> for StrategyKind {
    fn from(s: StrategyName) -> Self {
        match s {
            StrategyName::BsEnhance => StrategyKind::BsEnhance,
            StrategyName::TmsSuppress => StrategyKind::TmsSuppress,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlacementSection {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub strategy: Option<StrategyName>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub index: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub xbar_m: Option<f64>,
    /// e^{iντ} as [re, im], reduced mod 2π by the caller.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub phase: Option<[f64; 2]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CloudSection {
    pub n_atoms: u64,
    pub delta_rad_s: f64,
    pub placement: PlacementSection,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnvSection {
    pub temperature_mk: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OverridesSection {
    /// η(+ν) as [re, im].
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eta_plus: Option<[f64; 2]>,
    /// η(−ν) as [re, im].
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eta_minus: Option<[f64; 2]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub mirror: MirrorSection,
    pub probe: DriveSection,
    pub control: DriveSection,
    pub cloud: CloudSection,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub environment: Option<EnvSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub overrides: Option<OverridesSection>,
}

impl ScenarioFile {
    /// Parse the strict schema, reporting serde's line/column diagnostics.
    pub fn parse(json: &str) -> Result<Self> {
        serde_json::from_str(json).map_err(|e| CoolError::Scenario(e.to_string()))
    }

    /// Serialise back to JSON (pretty, stable field order).
    pub fn echo(&self) -> String {
        serde_json::to_string_pretty(self).expect("scenario serialisation cannot fail")
    }

    fn drive_spec(section: &DriveSection, which: &str) -> Result<DriveSpec> {
        let omega0 = match (section.wavelength_nm, section.omega0_rad_s) {
            (Some(wl), None) => {
                if !(wl > 0.0) {
                    return Err(CoolError::Scenario(format!(
                        "{which}.wavelength_nm must be > 0"
                    )));
                }
                TAU * C / (wl * 1.0e-9)
            }
            (None, Some(w0)) => w0,
            _ => {
                return Err(CoolError::Scenario(format!(
                    "{which}: provide exactly one of wavelength_nm, omega0_rad_s"
                )))
            }
        };
        match (section.power_mw, section.amplitude) {
            (Some(p_mw), None) => DriveSpec::from_power(
                omega0,
                p_mw * 1.0e-3,
                section.gamma_rad_s,
                section.big_gamma_rad_s,
            ),
            (None, Some(amp)) => DriveSpec::from_amplitude(
                omega0,
                amp,
                section.gamma_rad_s,
                section.big_gamma_rad_s,
            ),
            _ => Err(CoolError::Scenario(format!(
                "{which}: provide exactly one of power_mw, amplitude"
            ))),
        }
    }

    fn placement(section: &PlacementSection) -> Result<Placement> {
        match (
            &section.strategy,
            section.index,
            section.xbar_m,
            section.phase,
        ) {
            (Some(strategy), index, None, None) => Ok(Placement::Designed(StrategyChoice {
                kind: strategy.clone().into(),
                placement_index: index.unwrap_or(0),
            })),
            (None, None, Some(xbar), Some([re, im])) => {
                let phase = Complex64::new(re, im);
                if (phase.norm() - 1.0).abs() > 1e-9 {
                    return Err(CoolError::Scenario(format!(
                        "placement.phase must lie on the unit circle, |phase| = {}",
                        phase.norm()
                    )));
                }
                if !(xbar >= 0.0) {
                    return Err(CoolError::Scenario("placement.xbar_m must be >= 0".into()));
                }
                Ok(Placement::Explicit { xbar, phase })
            }
            _ => Err(CoolError::Scenario(
                "placement: provide either strategy(+index) or xbar_m+phase".into(),
            )),
        }
    }

    /// Validate and convert into the SI [`Scenario`].
    pub fn to_scenario(&self) -> Result<Scenario> {
        if !(self.mirror.nu_hz > 0.0) {
            return Err(CoolError::Scenario("mirror.nu_hz must be > 0".into()));
        }
        let mirror = MirrorSpec::new(
            TAU * self.mirror.nu_hz,
            self.mirror.mass_kg,
            self.mirror.quality,
        )?;
        let probe = Self::drive_spec(&self.probe, "probe")?;
        let control = Self::drive_spec(&self.control, "control")?;
        let placement = Self::placement(&self.cloud.placement)?;
        let xbar = match placement {
            Placement::Explicit { xbar, .. } => xbar,
            Placement::Designed(_) => 0.0, // derived during validation
        };
        let cloud = AtomCloudSpec::new(self.cloud.n_atoms, xbar, self.cloud.delta_rad_s)?;
        let environment = match &self.environment {
            Some(env) => Some(EnvironmentSpec::new(env.temperature_mk * 1.0e-3)?),
            None => None,
        };
        let overrides = match &self.overrides {
            Some(o) => EtaOverrides {
                plus: o.eta_plus.map(|[re, im]| Complex64::new(re, im)),
                minus: o.eta_minus.map(|[re, im]| Complex64::new(re, im)),
            },
            None => EtaOverrides::default(),
        };
        Scenario {
            mirror,
            probe,
            control,
            cloud,
            environment,
            placement,
            overrides,
        }
        .validated()
    }
}

/// Read and convert a scenario file from disk.
pub fn load_scenario(path: &std::path::Path) -> Result<(ScenarioFile, Scenario)> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CoolError::Scenario(format!("{}: {e}", path.display())))?;
    let file = ScenarioFile::parse(&text)?;
    let scenario = file.to_scenario()?;
    Ok((file, scenario))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> String {
        r#"{
            "mirror": { "nu_hz": 32000.0, "mass_kg": 6.681312e-12, "quality": 1.5e6 },
            "probe": { "wavelength_nm": 780.0, "power_mw": 10.0,
                       "gamma_rad_s": 4.12e-6, "Gamma_rad_s": 20106.0 },
            "control": { "wavelength_nm": 780.0, "power_mw": 10.0,
                         "gamma_rad_s": 4.12e-6, "Gamma_rad_s": 20106.0 },
            "cloud": { "n_atoms": 20000000000, "delta_rad_s": 1407433.5088082282,
                       "placement": { "strategy": "tms_suppress", "index": 0 } },
            "environment": { "temperature_mk": 10.0 }
        }"#
        .to_string()
    }

    #[test]
    fn parse_validate_echo_round_trips() {
        let file = ScenarioFile::parse(&sample()).unwrap();
        let scenario = file.to_scenario().unwrap();
        assert!(scenario.environment.is_some());
        let echoed = file.echo();
        let file2 = ScenarioFile::parse(&echoed).unwrap();
        assert_eq!(file, file2);
        let scenario2 = file2.to_scenario().unwrap();
        assert_eq!(scenario, scenario2);
    }

    #[test]
    fn unknown_keys_rejected() {
        let bad = sample().replace("\"quality\"", "\"qality\"");
        let err = ScenarioFile::parse(&bad).unwrap_err();
        assert!(err.to_string().contains("qality"), "{err}");

        let bad2 = sample().replace(
            "\"temperature_mk\": 10.0",
            "\"temperature_mk\": 10.0, \"pressure\": 1.0",
        );
        assert!(ScenarioFile::parse(&bad2).is_err());
    }

    #[test]
    fn drive_requires_exactly_one_frequency_key() {
        let both = sample().replace(
            "\"probe\": { \"wavelength_nm\": 780.0,",
            "\"probe\": { \"wavelength_nm\": 780.0, \"omega0_rad_s\": 1.0e15,",
        );
        let file = ScenarioFile::parse(&both).unwrap();
        assert!(file.to_scenario().is_err());
    }

    #[test]
    fn explicit_placement_needs_unit_phase() {
        let explicit = sample().replace(
            r#""placement": { "strategy": "tms_suppress", "index": 0 }"#,
            r#""placement": { "xbar_m": 2343.6, "phase": [0.0, 2.0] }"#,
        );
        let file = ScenarioFile::parse(&explicit).unwrap();
        assert!(file.to_scenario().is_err());

        let ok = explicit.replace("[0.0, 2.0]", "[-1.0, 0.0]");
        let file = ScenarioFile::parse(&ok).unwrap();
        let scenario = file.to_scenario().unwrap();
        match scenario.placement {
            Placement::Explicit { xbar, phase } => {
                assert_eq!(xbar, 2343.6);
                assert_eq!(phase, Complex64::new(-1.0, 0.0));
            }
            _ => panic!("expected explicit placement"),
        }
        assert_eq!(scenario.cloud.xbar, 2343.6);
    }

    #[test]
    fn overrides_parse_into_complex() {
        let with = sample().replace(
            "\"environment\": { \"temperature_mk\": 10.0 }",
            "\"environment\": { \"temperature_mk\": 10.0 },\n            \"overrides\": { \"eta_plus\": [0.0, 0.0], \"eta_minus\": [-1.0e12, 0.0] }",
        );
        let file = ScenarioFile::parse(&with).unwrap();
        let scenario = file.to_scenario().unwrap();
        assert_eq!(scenario.overrides.plus, Some(Complex64::new(0.0, 0.0)));
        assert_eq!(scenario.overrides.minus, Some(Complex64::new(-1.0e12, 0.0)));
    }

    #[test]
    fn designed_placement_sets_xbar() {
        let file = ScenarioFile::parse(&sample()).unwrap();
        let scenario = file.to_scenario().unwrap();
        // TMS index 0 at 32 kHz: pi c / (2 nu) ~ 2.34 km.
        assert!((scenario.cloud.xbar / 2343.7 - 1.0).abs() < 1e-3);
    }

    #[test]
    fn float_precision_survives_echo() {
        let file = ScenarioFile::parse(&sample()).unwrap();
        let echoed = file.echo();
        let file2 = ScenarioFile::parse(&echoed).unwrap();
        assert_eq!(
            file.cloud.delta_rad_s.to_bits(),
            file2.cloud.delta_rad_s.to_bits()
        );
        assert_eq!(
            file.mirror.mass_kg.to_bits(),
            file2.mirror.mass_kg.to_bits()
        );
    }
}
