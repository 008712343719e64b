//! Configuration resolution: defaults, then the JSON config file, then
//! command-line flags, later layers overriding earlier ones. Angles accept a
//! `deg` or `rad` suffix (bare numbers are radians) because lab users think
//! in degrees and the formulas in radians.

use crate::output::Format;
use polchannel::config::{PacketConfig, PolarizationConfig};
use serde::Deserialize;

/// Errors that should terminate with exit code 2, naming the field.
#[derive(Debug)]
pub struct ConfigError(pub String);

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "config error: {}", self.0)
    }
}

pub fn parse_angle(field: &str, s: &str) -> Result<f64, ConfigError> {
    let s = s.trim();
    let (number, scale) = if let Some(stripped) = s.strip_suffix("deg") {
        (stripped, std::f64::consts::PI / 180.0)
    } else if let Some(stripped) = s.strip_suffix("rad") {
        (stripped, 1.0)
    } else {
        (s, 1.0)
    };
    number
        .trim()
        .parse::<f64>()
        .map(|v| v * scale)
        .map_err(|_| {
            ConfigError(format!(
                "{field}: `{s}` is not an angle (use e.g. 45deg or 0.3rad)"
            ))
        })
}

/// The on-disk experiment configuration. Every field is optional; unknown
/// fields are rejected so typos surface as config errors.
#[derive(Debug, Default, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub mode: Option<String>,
    pub packet: Option<PacketConfig>,
    pub omega: Option<f64>,
    pub omegas: Option<Vec<f64>>,
    pub velocity: Option<f64>,
    pub velocities: Option<Vec<f64>>,
    pub a: Option<String>,
    pub b: Option<String>,
    pub theta: Option<String>,
    pub phi: Option<String>,
    pub rms: Option<String>,
    pub b_points: Option<usize>,
    pub grid: Option<[usize; 3]>,
    pub method: Option<String>,
    pub helicity: Option<i8>,
    pub linear_angle: Option<String>,
    pub mc_samples: Option<u64>,
    pub format: Option<String>,
    pub out: Option<String>,
    pub seed: Option<u64>,
}

impl FileConfig {
    pub fn load(path: &str) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError(format!("config: cannot read `{path}`: {e}")))?;
        serde_json::from_str(&text).map_err(|e| ConfigError(format!("config `{path}`: {e}")))
    }
}

/// Flags shared by every subcommand.
#[derive(Debug, Clone, clap::Args)]
pub struct CommonArgs {
    /// JSON experiment configuration; flags override its fields.
    #[arg(long)]
    pub config: Option<String>,
    /// Output path (stdout when absent).
    #[arg(long)]
    pub out: Option<String>,
    /// Output format: json or csv.
    #[arg(long)]
    pub format: Option<String>,
    /// Grid resolution as nz,nr,nphi.
    #[arg(long, value_parser = parse_grid)]
    pub grid: Option<GridDims>,
    /// Seed for any stochastic cross-check.
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Copy)]
pub struct GridDims(pub [usize; 3]);

fn parse_grid(s: &str) -> Result<GridDims, String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 3 {
        return Err("expected nz,nr,nphi".into());
    }
    let mut dims = [0usize; 3];
    for (slot, part) in dims.iter_mut().zip(&parts) {
        *slot = part
            .trim()
            .parse()
            .map_err(|_| format!("`{part}` is not a node count"))?;
    }
    Ok(GridDims(dims))
}

/// Everything resolved: common settings every command needs.
pub struct Resolved {
    pub file: FileConfig,
    pub format: Format,
    pub out: Option<String>,
    pub grid: Option<[usize; 3]>,
    pub seed: u64,
}

const MODES: [&str; 6] = [
    "classical",
    "rho",
    "pe-scan",
    "doppler-scan",
    "reconstruct",
    "cp-witness",
];

pub fn resolve_common(args: &CommonArgs) -> Result<Resolved, ConfigError> {
    let file = match &args.config {
        Some(path) => FileConfig::load(path)?,
        None => FileConfig::default(),
    };
    // The subcommand always wins over the file's mode, but a misspelled
    // mode in the file is still a config error.
    if let Some(mode) = &file.mode {
        if !MODES.contains(&mode.as_str()) {
            return Err(ConfigError(format!(
                "mode: `{mode}` is not one of {MODES:?}"
            )));
        }
    }
    let format_name = args
        .format
        .clone()
        .or_else(|| file.format.clone())
        .unwrap_or_else(|| "csv".to_string());
    let format = Format::parse(&format_name).map_err(|e| ConfigError(format!("format: {e}")))?;
    let out = args.out.clone().or_else(|| file.out.clone());
    let grid = args.grid.map(|g| g.0).or(file.grid);
    if let Some(g) = grid {
        if g.contains(&0) {
            return Err(ConfigError(format!(
                "grid: node counts must be positive, got {g:?}"
            )));
        }
    }
    let seed = args.seed.or(file.seed).unwrap_or(0);
    Ok(Resolved {
        file,
        format,
        out,
        grid,
        seed,
    })
}

impl Resolved {
    /// The packet spec for photon modes: the config file's packet section if
    /// present, otherwise the canonical spread-omega packet; grid dims and
    /// polarization flags layered on top.
    pub fn packet_config(
        &self,
        omega_flag: Option<f64>,
        helicity_flag: Option<i8>,
        linear_flag: Option<&str>,
    ) -> Result<PacketConfig, ConfigError> {
        let mut packet = match &self.file.packet {
            Some(p) => p.clone(),
            None => {
                let omega = omega_flag.or(self.file.omega).unwrap_or(0.02);
                if !(omega.is_finite() && omega > 0.0) {
                    return Err(ConfigError(format!("omega: {omega} must be positive")));
                }
                PacketConfig::for_omega(omega)
            }
        };
        if let Some([nz, nr, nphi]) = self.grid {
            packet.n_z = nz;
            packet.n_r = nr;
            packet.n_phi = nphi;
        }
        let linear = match (linear_flag, &self.file.linear_angle) {
            (Some(s), _) => Some(parse_angle("linear_angle", s)?),
            (None, Some(s)) => Some(parse_angle("linear_angle", s)?),
            (None, None) => None,
        };
        let helicity = helicity_flag.or(self.file.helicity);
        match (helicity, linear) {
            (Some(_), Some(_)) => {
                return Err(ConfigError(
                    "helicity/linear_angle: give one polarization, not both".into(),
                ))
            }
            (Some(h), None) => {
                if h != 1 && h != -1 {
                    return Err(ConfigError(format!("helicity: {h} must be +1 or -1")));
                }
                packet.polarization = PolarizationConfig::Helicity(h);
            }
            (None, Some(a)) => packet.polarization = PolarizationConfig::LinearAngle(a),
            (None, None) => {}
        }
        if packet.k_a - packet.truncation * packet.delta_z <= 0.0 {
            return Err(ConfigError(format!(
                "packet: k_A = {} minus the truncation half-width {} reaches k_z <= 0",
                packet.k_a,
                packet.truncation * packet.delta_z
            )));
        }
        Ok(packet)
    }

    pub fn velocity(&self, flag: Option<f64>, default: f64) -> Result<f64, ConfigError> {
        let v = flag.or(self.file.velocity).unwrap_or(default);
        check_velocity("velocity", v)?;
        Ok(v)
    }

    pub fn velocities(&self, flag: &Option<Vec<f64>>) -> Result<Vec<f64>, ConfigError> {
        let vs = flag
            .clone()
            .or_else(|| self.file.velocities.clone())
            .unwrap_or_else(|| vec![-0.6, -0.4, -0.2, 0.0, 0.2, 0.4, 0.6]);
        if vs.is_empty() {
            return Err(ConfigError("velocities: scan range is empty".into()));
        }
        for &v in &vs {
            check_velocity("velocities", v)?;
        }
        Ok(vs)
    }

    pub fn omegas(&self, flag: &Option<Vec<f64>>) -> Result<Vec<f64>, ConfigError> {
        let os = flag
            .clone()
            .or_else(|| self.file.omegas.clone())
            .unwrap_or_else(|| vec![0.01, 0.02, 0.03, 0.04, 0.05]);
        if os.is_empty() {
            return Err(ConfigError("omegas: scan range is empty".into()));
        }
        for &o in &os {
            if !(o.is_finite() && o > 0.0) {
                return Err(ConfigError(format!("omegas: {o} must be positive")));
            }
        }
        Ok(os)
    }
}

pub fn check_velocity(field: &str, v: f64) -> Result<(), ConfigError> {
    if !(v.is_finite() && v.abs() < 1.0) {
        return Err(ConfigError(format!(
            "{field}: {v} must lie strictly inside (-1, 1)"
        )));
    }
    Ok(())
}
