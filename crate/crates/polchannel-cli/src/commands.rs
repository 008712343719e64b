//! One function per subcommand. Each builds a [`Table`] (or a JSON value),
//! attaches the grid resolution and a half-resolution convergence estimate,
//! and pairs every quantity that has an analytic leading-order form with
//! that form and the relative deviation.

use crate::output::{emit, emit_json, Table};
use crate::settings::{parse_angle, ConfigError, Resolved};
use polchannel::beam::{
    apparent_angle, beam_average_flux, detected_flux, BeamProfile, DetectorSetting,
    PlaneWaveComponent,
};
use polchannel::boost::{
    boosted_rho_method_a, boosted_rho_method_b, cp_violation_witness, doppler_error_ratio,
    BoostMethod,
};
use polchannel::config::PacketConfig;
use polchannel::mc::estimate_rho;
use polchannel::packet::{GaussianProfile, HelicitySign, MomentumGrid, PhotonWavePacket};
use polchannel::povm::{
    circular_leading_order, helstrom_error, reconstruct_offdiagonal, reduced_density_matrix,
    von_neumann_entropy, Axis, PolarizationMatrix,
};
use rayon::prelude::*;
use std::f64::consts::{FRAC_PI_2, PI};
use std::sync::Arc;

/// Numerical failures exit with code 1.
pub struct NumericError(pub String);

impl From<polchannel::Error> for NumericError {
    fn from(e: polchannel::Error) -> Self {
        NumericError(e.to_string())
    }
}

impl From<std::io::Error> for NumericError {
    fn from(e: std::io::Error) -> Self {
        NumericError(format!("io: {e}"))
    }
}

pub enum CliError {
    Config(ConfigError),
    Numeric(NumericError),
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        CliError::Config(e)
    }
}

impl From<NumericError> for CliError {
    fn from(e: NumericError) -> Self {
        CliError::Numeric(e)
    }
}

impl From<polchannel::Error> for CliError {
    fn from(e: polchannel::Error) -> Self {
        CliError::Numeric(e.into())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Numeric(e.into())
    }
}

fn packet_pair(config: &PacketConfig) -> Result<(PhotonWavePacket, PhotonWavePacket), CliError> {
    let grid = Arc::new(MomentumGrid::new(config.grid_spec())?);
    let plus = PhotonWavePacket::helicity(grid, HelicitySign::Plus);
    let minus = plus.mirrored().expect("helicity packet has a mirror");
    Ok((plus, minus))
}

fn halved_pair(config: &PacketConfig) -> Result<(PhotonWavePacket, PhotonWavePacket), CliError> {
    let mut halved = config.clone();
    let spec = config.grid_spec().halved();
    halved.n_z = spec.n_z;
    halved.n_r = spec.n_r;
    halved.n_phi = spec.n_phi;
    packet_pair(&halved)
}

fn grid_meta(table: &mut Table, config: &PacketConfig) {
    table.meta(
        "grid",
        format!(
            "n_z={} n_r={} n_phi={} truncation={}",
            config.n_z, config.n_r, config.n_phi, config.truncation
        ),
    );
    table.meta(
        "packet",
        format!(
            "k_A={} delta_z={} delta_r={}",
            config.k_a, config.delta_z, config.delta_r
        ),
    );
}

// ---------------------------------------------------------------- classical

pub struct ClassicalArgs {
    pub a: Option<String>,
    pub b: Option<String>,
    pub theta: Option<String>,
    pub phi: Option<String>,
    pub rms: Option<String>,
    pub b_points: Option<usize>,
    pub velocity: Option<f64>,
}

pub fn run_classical(resolved: &Resolved, args: &ClassicalArgs) -> Result<(), CliError> {
    let angle = |flag: &Option<String>, file: &Option<String>, name: &str, default: f64| match flag
        .as_ref()
        .or(file.as_ref())
    {
        Some(s) => parse_angle(name, s),
        None => Ok(default),
    };
    let a = angle(&args.a, &resolved.file.a, "a", 0.0)?;
    let theta = angle(&args.theta, &resolved.file.theta, "theta", 0.0)?;
    let phi = angle(&args.phi, &resolved.file.phi, "phi", 0.0)?;
    if !(0.0..FRAC_PI_2).contains(&theta) {
        return Err(ConfigError(format!("theta: {theta} rad must lie in [0, pi/2)")).into());
    }
    let rms = match args.rms.as_ref().or(resolved.file.rms.as_ref()) {
        Some(s) => Some(parse_angle("rms", s)?),
        None => None,
    };
    let b_points = args.b_points.or(resolved.file.b_points).unwrap_or(181);
    if b_points < 2 {
        return Err(ConfigError(format!("b_points: {b_points} must be at least 2")).into());
    }

    // Either a single Fourier component or a Gaussian-profile average.
    let profiles = match rms {
        Some(r) => {
            if !r.is_finite() || r <= 0.0 {
                return Err(ConfigError(format!("rms: {r} rad must be positive")).into());
            }
            let (nt, np) = resolved
                .grid
                .map(|[nz, nr, _]| (nz, nr))
                .unwrap_or((64, 64));
            Some((
                BeamProfile::gaussian_with(r, nt, np)?,
                BeamProfile::gaussian_with(r, (nt / 2).max(2), (np / 2).max(2))?,
            ))
        }
        None => None,
    };

    let flux_at = |b: f64| -> Result<(f64, f64), CliError> {
        match &profiles {
            Some((full, half)) => Ok((
                beam_average_flux(full, a, b)?,
                beam_average_flux(half, a, b)?,
            )),
            None => {
                // Single component at azimuth phi: rotate the frame so the
                // component has azimuth zero, shifting both polarizer angles.
                let c = PlaneWaveComponent::new(theta, 0.0, a - phi);
                let f = detected_flux(&c, &DetectorSetting { b: b - phi });
                Ok((f, f))
            }
        }
    };

    let mut table = Table::new(vec![
        "b_rad",
        "flux",
        "ideal_cos2",
        "rel_dev_from_ideal",
        "flux_half_resolution",
    ]);
    table.meta("mode", "classical");
    table.meta_float("a_rad", a);
    table.meta_float("theta_rad", theta);
    table.meta_float("phi_rad", phi);
    match rms {
        Some(r) => {
            table.meta_float("profile_rms_rad", r);
            table.meta("profile", "gaussian, five sigma cutoff, uniform azimuth");
        }
        None => table.meta("profile", "single plane-wave component"),
    }
    table.meta_float("apparent_angle_rad", apparent_angle(a, theta));
    table.meta_float(
        "loss_fraction_leading_order",
        theta * theta * (a - phi).cos().powi(2),
    );
    if let Some(s) = args.b.as_ref().or(resolved.file.b.as_ref()) {
        let b = parse_angle("b", s)?;
        table.meta_float("b_rad", b);
        table.meta_float("flux_at_b", flux_at(b)?.0);
    }
    // A moving observer sees the tilt aberrated; report the exact angle
    // next to its small-angle Doppler-factor form.
    if let Some(v) = args.velocity.or(resolved.file.velocity) {
        crate::settings::check_velocity("velocity", v)?;
        let boost = polchannel::linalg::BoostParameter::new(v)?;
        let exact =
            polchannel::beam::doppler_tilt(theta, &boost, polchannel::beam::TiltMode::Exact);
        let small =
            polchannel::beam::doppler_tilt(theta, &boost, polchannel::beam::TiltMode::SmallAngle);
        table.meta_float("velocity", v);
        table.meta_float("theta_boosted_exact_rad", exact);
        table.meta_float("theta_boosted_small_angle_rad", small);
        table.meta_float(
            "theta_boosted_rel_dev",
            if exact != 0.0 {
                small / exact - 1.0
            } else {
                0.0
            },
        );
    }

    for i in 0..b_points {
        let b = -FRAC_PI_2 + PI * i as f64 / (b_points - 1) as f64;
        let (flux, flux_half) = flux_at(b)?;
        let ideal = (a - b).cos().powi(2);
        let rel = if ideal.abs() > 1e-300 {
            (flux - ideal) / ideal
        } else {
            f64::INFINITY.min(flux / 1e-300)
        };
        table.push(vec![b, flux, ideal, rel, flux_half]);
    }
    emit(&table, resolved.format, resolved.out.as_deref())?;
    Ok(())
}

// ---------------------------------------------------------------------- rho

pub struct RhoArgs {
    pub omega: Option<f64>,
    pub velocity: Option<f64>,
    pub method: Option<String>,
    pub helicity: Option<i8>,
    pub linear_angle: Option<String>,
    pub mc_samples: Option<u64>,
}

pub fn run_rho(resolved: &Resolved, args: &RhoArgs) -> Result<(), CliError> {
    let config = resolved.packet_config(args.omega, args.helicity, args.linear_angle.as_deref())?;
    let method = match args
        .method
        .as_deref()
        .or(resolved.file.method.as_deref())
        .unwrap_or("rotation")
    {
        "a" | "substitution" => BoostMethod::AmplitudeSubstitution,
        "b" | "rotation" => BoostMethod::RotationSubstitution,
        other => {
            return Err(ConfigError(format!(
                "method: `{other}` is not a/substitution or b/rotation"
            ))
            .into())
        }
    };
    let velocity = match args.velocity.or(resolved.file.velocity) {
        Some(v) => {
            crate::settings::check_velocity("velocity", v)?;
            (v != 0.0).then_some(v)
        }
        None => None,
    };
    let mc_samples = args.mc_samples.or(resolved.file.mc_samples).unwrap_or(0);

    let packet = config.build()?;
    let rho = match velocity {
        None => reduced_density_matrix(&packet)?,
        Some(v) => match method {
            BoostMethod::AmplitudeSubstitution => boosted_rho_method_a(&packet, v)?,
            BoostMethod::RotationSubstitution => boosted_rho_method_b(&packet, v)?,
        },
    };

    // Convergence: the same quantity at half resolution.
    let half_config = {
        let mut c = config.clone();
        let spec = config.grid_spec().halved();
        c.n_z = spec.n_z;
        c.n_r = spec.n_r;
        c.n_phi = spec.n_phi;
        c
    };
    let half_packet = half_config.build()?;
    let rho_half = match velocity {
        None => reduced_density_matrix(&half_packet)?,
        Some(v) => match method {
            BoostMethod::AmplitudeSubstitution => boosted_rho_method_a(&half_packet, v)?,
            BoostMethod::RotationSubstitution => boosted_rho_method_b(&half_packet, v)?,
        },
    };

    let mut value = serde_json::json!({
        "mode": "rho",
        "packet": serde_json::to_value(&config).expect("packet config serializes"),
        "velocity": velocity.unwrap_or(0.0),
        "method": match method {
            BoostMethod::AmplitudeSubstitution => "substitution",
            BoostMethod::RotationSubstitution => "rotation",
        },
        "rho": rho.to_json(),
        "entropy_nats": von_neumann_entropy(&rho)?,
        "omega_estimate": packet.omega_estimate(),
        "convergence": {
            "half_resolution_grid": [half_config.n_z, half_config.n_r, half_config.n_phi],
            "max_entry_change": rho.max_entry_distance(&rho_half),
        },
    });

    // Analytic leading order exists for helicity packets.
    if let polchannel::config::PolarizationConfig::Helicity(sign) = &config.polarization {
        let omega = config.delta_r / config.k_a;
        let doppler = velocity
            .map(|v| ((1.0 + v) / (1.0 - v)).sqrt())
            .unwrap_or(1.0);
        let analytic = PolarizationMatrix::new(circular_leading_order(doppler * omega, *sign))?;
        let entries: Vec<[f64; 2]> = analytic
            .matrix()
            .0
            .iter()
            .flatten()
            .map(|e| [e.re, e.im])
            .collect();
        value["analytic_leading_order"] = serde_json::json!({
            "omega_effective": doppler * omega,
            "entries": entries,
            "max_entry_deviation": rho.max_entry_distance(&analytic),
        });
    }

    if mc_samples > 0 {
        if velocity.is_some() {
            return Err(ConfigError(
                "mc_samples: the sampling cross-check runs in the rest frame only".into(),
            )
            .into());
        }
        let kind = config.polarization_kind().ok_or_else(|| {
            ConfigError("mc_samples: custom per-node polarizations cannot be sampled".into())
        })?;
        let profile = GaussianProfile {
            k_a: config.k_a,
            delta_z: config.delta_z,
            delta_r: config.delta_r,
        };
        let est = estimate_rho(&profile, kind, mc_samples, resolved.seed);
        let mut quad = [[num_complex::Complex64::new(0.0, 0.0); 3]; 3];
        for (i, row) in rho.matrix().0.iter().enumerate() {
            for (j, entry) in row.iter().enumerate() {
                quad[i][j] = *entry;
            }
        }
        let entries: Vec<[f64; 2]> = est.entries.iter().flatten().map(|e| [e.re, e.im]).collect();
        value["monte_carlo"] = serde_json::json!({
            "samples": est.samples,
            "seed": resolved.seed,
            "entries": entries,
            "std_err_re": est.std_err_re,
            "std_err_im": est.std_err_im,
            "max_sigma_distance": est.max_sigma_distance(&quad),
        });
    }

    emit_json(&value, resolved.out.as_deref())?;
    Ok(())
}

// ------------------------------------------------------------------ pe-scan

pub fn run_pe_scan(resolved: &Resolved, omegas_flag: &Option<Vec<f64>>) -> Result<(), CliError> {
    let omegas = resolved.omegas(omegas_flag)?;

    let evaluate = |configs: &[PacketConfig]| -> Result<Vec<(f64, f64)>, CliError> {
        configs
            .par_iter()
            .map(|config| {
                let (plus, minus) = packet_pair(config)?;
                let pe = helstrom_error(
                    &reduced_density_matrix(&plus)?,
                    &reduced_density_matrix(&minus)?,
                )?;
                let (hp, hm) = halved_pair(config)?;
                let pe_half =
                    helstrom_error(&reduced_density_matrix(&hp)?, &reduced_density_matrix(&hm)?)?;
                Ok((pe, pe_half))
            })
            .collect()
    };

    let configs: Vec<PacketConfig> = omegas
        .iter()
        .map(|&omega| {
            let mut c = PacketConfig::for_omega(omega);
            if let Some([nz, nr, nphi]) = resolved.grid {
                c.n_z = nz;
                c.n_r = nr;
                c.n_phi = nphi;
            }
            c
        })
        .collect();
    let results = evaluate(&configs)?;

    let mut table = Table::new(vec![
        "omega",
        "pe",
        "analytic_omega2_4",
        "pe_over_omega2_4",
        "rel_dev",
        "pe_half_resolution",
    ]);
    table.meta("mode", "pe-scan");
    grid_meta(&mut table, &configs[0]);
    table.meta("seed", resolved.seed);
    for (omega, (pe, pe_half)) in omegas.iter().zip(&results) {
        let analytic = 0.25 * omega * omega;
        table.push(vec![
            *omega,
            *pe,
            analytic,
            pe / analytic,
            pe / analytic - 1.0,
            *pe_half,
        ]);
    }
    emit(&table, resolved.format, resolved.out.as_deref())?;
    Ok(())
}

// ------------------------------------------------------------- doppler-scan

pub fn run_doppler_scan(
    resolved: &Resolved,
    velocities_flag: &Option<Vec<f64>>,
    omega_flag: Option<f64>,
) -> Result<(), CliError> {
    let velocities = resolved.velocities(velocities_flag)?;
    let omega = omega_flag.or(resolved.file.omega).unwrap_or(0.01);
    if !(omega.is_finite() && omega > 0.0) {
        return Err(ConfigError(format!("omega: {omega} must be positive")).into());
    }
    let mut config = PacketConfig::for_omega(omega);
    if let Some([nz, nr, nphi]) = resolved.grid {
        config.n_z = nz;
        config.n_r = nr;
        config.n_phi = nphi;
    }
    let (plus, minus) = packet_pair(&config)?;
    let (half_plus, half_minus) = halved_pair(&config)?;

    let results: Vec<_> = velocities
        .par_iter()
        .map(|&v| -> Result<_, CliError> {
            let r = doppler_error_ratio(&plus, &minus, v)?;
            let rh = doppler_error_ratio(&half_plus, &half_minus, v)?;
            Ok((r, rh.ratio))
        })
        .collect::<Result<_, _>>()?;

    let mut table = Table::new(vec![
        "v",
        "pe",
        "pe_boosted",
        "pe_ratio",
        "analytic_ratio",
        "rel_dev",
        "regime_warning",
        "ratio_half_resolution",
    ]);
    table.meta("mode", "doppler-scan");
    table.meta_float("omega", omega);
    grid_meta(&mut table, &config);
    table.meta("seed", resolved.seed);
    for (v, (r, ratio_half)) in velocities.iter().zip(&results) {
        table.push(vec![
            *v,
            r.pe,
            r.pe_boosted,
            r.ratio,
            r.analytic_ratio,
            r.ratio / r.analytic_ratio - 1.0,
            f64::from(u8::from(r.regime_warning)),
            *ratio_half,
        ]);
    }
    emit(&table, resolved.format, resolved.out.as_deref())?;
    Ok(())
}

// -------------------------------------------------------------- reconstruct

pub fn run_reconstruct(resolved: &Resolved, args: &RhoArgs) -> Result<(), CliError> {
    let config = resolved.packet_config(args.omega, args.helicity, args.linear_angle.as_deref())?;
    let packet = config.build()?;
    let rho = reduced_density_matrix(&packet)?;

    let mut table = Table::new(vec![
        "row",
        "col",
        "direct_re",
        "direct_im",
        "reconstructed_re",
        "reconstructed_im",
        "abs_diff",
    ]);
    table.meta("mode", "reconstruct");
    grid_meta(&mut table, &config);
    table.meta("axis_order", "x=0 y=1 z=2");

    let mut worst: f64 = 0.0;
    for m in Axis::ALL {
        for n in Axis::ALL {
            if m == n {
                continue;
            }
            let direct = rho.entry(m, n);
            let rebuilt = reconstruct_offdiagonal(&packet, m, n)?;
            let diff = (rebuilt - direct).norm();
            worst = worst.max(diff);
            table.push(vec![
                m.index() as f64,
                n.index() as f64,
                direct.re,
                direct.im,
                rebuilt.re,
                rebuilt.im,
                diff,
            ]);
        }
    }
    table.meta_float("max_abs_diff", worst);
    emit(&table, resolved.format, resolved.out.as_deref())?;
    Ok(())
}

// --------------------------------------------------------------- cp-witness

pub fn run_cp_witness(
    resolved: &Resolved,
    velocity_flag: Option<f64>,
    omega_flag: Option<f64>,
) -> Result<(), CliError> {
    let v = resolved.velocity(velocity_flag, -0.5)?;
    let omega = omega_flag.or(resolved.file.omega).unwrap_or(0.02);
    if !(omega.is_finite() && omega > 0.0) {
        return Err(ConfigError(format!("omega: {omega} must be positive")).into());
    }
    let mut config = PacketConfig::for_omega(omega);
    if let Some([nz, nr, nphi]) = resolved.grid {
        config.n_z = nz;
        config.n_r = nr;
        config.n_phi = nphi;
    }
    let (plus, minus) = packet_pair(&config)?;
    let report = cp_violation_witness(&plus, &minus, v)?;
    let (half_plus, half_minus) = halved_pair(&config)?;
    let half = cp_violation_witness(&half_plus, &half_minus, v)?;

    let analytic = (1.0 + v) / (1.0 - v);
    let mut table = Table::new(vec![
        "v",
        "pe",
        "pe_boosted",
        "ratio",
        "analytic_ratio",
        "rel_dev",
        "witnessed",
        "threshold",
        "ratio_half_resolution",
    ]);
    table.meta("mode", "cp-witness");
    table.meta_float("omega", omega);
    grid_meta(&mut table, &config);
    table.meta(
        "reading",
        "witnessed=1 means the boost improved distinguishability, which no completely positive map can",
    );
    table.push(vec![
        v,
        report.pe,
        report.pe_boosted,
        report.ratio,
        analytic,
        report.ratio / analytic - 1.0,
        f64::from(u8::from(report.witnessed)),
        report.threshold,
        half.ratio,
    ]);
    emit(&table, resolved.format, resolved.out.as_deref())?;
    Ok(())
}
