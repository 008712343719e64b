//! JSON-serializable packet and grid specification, the exchange format the
//! command-line front end and any external driver share.

use crate::error::{Error, Result};
use crate::mc::PolarizationKind;
use crate::packet::{
    GridSpec, HelicitySign, MomentumAmplitude, MomentumGrid, PhotonWavePacket, PolarizationField,
};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::sync::Arc;

/// Polarization choice in configuration files: a helicity sign, a linear
/// angle in radians, or fully custom per-node helicity amplitudes given as
/// `[re_plus, im_plus, re_minus, im_minus]` rows.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PolarizationConfig {
    Helicity(i8),
    LinearAngle(f64),
    Custom(Vec<[f64; 4]>),
}

impl Default for PolarizationConfig {
    fn default() -> Self {
        PolarizationConfig::Helicity(1)
    }
}

/// Wave-packet specification: grid layout plus polarization.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PacketConfig {
    #[serde(rename = "k_A")]
    pub k_a: f64,
    pub delta_z: f64,
    pub delta_r: f64,
    #[serde(default = "default_n_z")]
    pub n_z: usize,
    #[serde(default = "default_n_r")]
    pub n_r: usize,
    #[serde(default = "default_n_phi")]
    pub n_phi: usize,
    #[serde(default = "default_truncation")]
    pub truncation: f64,
    #[serde(default)]
    pub polarization: PolarizationConfig,
}

fn default_n_z() -> usize {
    GridSpec::DEFAULT_N_Z
}
fn default_n_r() -> usize {
    GridSpec::DEFAULT_N_R
}
fn default_n_phi() -> usize {
    GridSpec::DEFAULT_N_PHI
}
fn default_truncation() -> f64 {
    GridSpec::DEFAULT_TRUNCATION
}

impl PacketConfig {
    /// Canonical spec for a relative radial spread: `k_A = 1`,
    /// `delta_r = omega`, `delta_z = omega / 10`, default grid.
    pub fn for_omega(omega: f64) -> Self {
        let spec = GridSpec::for_omega(omega);
        Self {
            k_a: spec.k_a,
            delta_z: spec.delta_z,
            delta_r: spec.delta_r,
            n_z: spec.n_z,
            n_r: spec.n_r,
            n_phi: spec.n_phi,
            truncation: spec.truncation,
            polarization: PolarizationConfig::Helicity(1),
        }
    }

    pub fn grid_spec(&self) -> GridSpec {
        GridSpec {
            k_a: self.k_a,
            delta_z: self.delta_z,
            delta_r: self.delta_r,
            n_z: self.n_z,
            n_r: self.n_r,
            n_phi: self.n_phi,
            truncation: self.truncation,
        }
    }

    /// The constant-polarization descriptor, when one exists; custom
    /// per-node fields have none.
    pub fn polarization_kind(&self) -> Option<PolarizationKind> {
        match &self.polarization {
            PolarizationConfig::Helicity(s) => Some(PolarizationKind::Helicity(*s)),
            PolarizationConfig::LinearAngle(a) => Some(PolarizationKind::Linear(*a)),
            PolarizationConfig::Custom(_) => None,
        }
    }

    pub fn build(&self) -> Result<PhotonWavePacket> {
        self.build_on(Arc::new(MomentumGrid::new(self.grid_spec())?))
    }

    /// Build on an existing grid (e.g. a halved-resolution one).
    pub fn build_on(&self, grid: Arc<MomentumGrid>) -> Result<PhotonWavePacket> {
        let polarization = match &self.polarization {
            PolarizationConfig::Helicity(s) => {
                let sign = match s.signum() {
                    1 => HelicitySign::Plus,
                    -1 => HelicitySign::Minus,
                    _ => {
                        return Err(Error::InvalidGridSpec(
                            "polarization.helicity must be +1 or -1".into(),
                        ))
                    }
                };
                PolarizationField::uniform_helicity(grid.len(), sign)
            }
            PolarizationConfig::LinearAngle(a) => PolarizationField::linear(grid.len(), *a),
            PolarizationConfig::Custom(rows) => {
                if rows.len() != grid.len() {
                    return Err(Error::InvalidGridSpec(format!(
                        "polarization.custom has {} rows for a grid of {} nodes",
                        rows.len(),
                        grid.len()
                    )));
                }
                PolarizationField::custom(
                    rows.iter()
                        .map(|r| (Complex64::new(r[0], r[1]), Complex64::new(r[2], r[3])))
                        .collect(),
                )?
            }
        };
        let amplitude = MomentumAmplitude::gaussian(&grid);
        PhotonWavePacket::new(grid, amplitude, polarization)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trips_through_json() {
        let config = PacketConfig::for_omega(0.02);
        let text = serde_json::to_string(&config).unwrap();
        assert!(text.contains("\"k_A\":1.0"));
        assert!(text.contains("\"helicity\":1"));
        let back: PacketConfig = serde_json::from_str(&text).unwrap();
        assert_eq!(config, back);
    }

    #[test]
    fn missing_grid_fields_take_defaults() {
        let text = r#"{"k_A": 1.0, "delta_z": 0.002, "delta_r": 0.02}"#;
        let config: PacketConfig = serde_json::from_str(text).unwrap();
        assert_eq!(config.n_z, GridSpec::DEFAULT_N_Z);
        assert_eq!(config.truncation, GridSpec::DEFAULT_TRUNCATION);
        assert_eq!(config.polarization, PolarizationConfig::Helicity(1));
    }

    #[test]
    fn builds_a_normalized_packet() {
        let config = PacketConfig {
            polarization: PolarizationConfig::LinearAngle(0.5),
            ..PacketConfig::for_omega(0.05)
        };
        let packet = config.build().unwrap();
        assert!((packet.norm() - 1.0).abs() < 1e-10);
        assert!(config.polarization_kind().is_some());
    }

    #[test]
    fn bad_helicity_sign_is_rejected() {
        let config = PacketConfig {
            polarization: PolarizationConfig::Helicity(0),
            ..PacketConfig::for_omega(0.05)
        };
        assert!(config.build().is_err());
    }

    #[test]
    fn custom_rows_must_cover_the_grid() {
        let config = PacketConfig {
            polarization: PolarizationConfig::Custom(vec![[1.0, 0.0, 0.0, 0.0]; 3]),
            ..PacketConfig::for_omega(0.05)
        };
        assert!(matches!(config.build(), Err(Error::InvalidGridSpec(_))));
    }
}
