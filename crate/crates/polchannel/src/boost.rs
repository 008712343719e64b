//! The moving observer's view of a photon packet: boosted reduced density
//! matrices, the Doppler scaling of the Helstrom error, and the witness that
//! the induced map on reduced matrices is not completely positive.
//!
//! Two equivalent routes compute the boosted matrix. The substitution route
//! pulls the amplitude back through the inverse boost onto a regridded
//! momentum domain centered at the Doppler-shifted carrier and reduces as
//! usual. The rotation route keeps the original grid and amplitude and swaps
//! each node's helicity vectors for those of the aberrated direction; with
//! the change of variables done exactly, the transversal projections are
//! taken at the boosted direction, and the integrand collapses to the outer
//! product of the aberrated helicity vector with itself.
//!
//! Both routes need helicity eigenstate packets: those are the states whose
//! boost-induced phases cancel inside the integrand. General polarization
//! fields would pick up direction-dependent phase pairs that this crate does
//! not model, so they are rejected.

use crate::error::{Error, Result};
use crate::linalg::{boosted_tilt, rotation_to, standard_helicity, BoostParameter};
use crate::packet::{GridSpec, HelicitySign, MomentumGrid, PhotonWavePacket, PolarizationField};
use crate::povm::{helstrom_error, reduced_density_matrix, PolarizationMatrix};
use crate::quadrature::pairwise_sum;
use num_complex::Complex64;
use std::sync::Arc;

/// Above this value of `(doppler * omega)^2` the leading-order error
/// comparison degrades and reports carry a warning flag.
pub const REGIME_GUARD: f64 = 0.01;

/// Witness threshold: a boosted error probability must undercut the rest
/// frame one by more than this before it counts as an improvement.
const IMPROVEMENT_TOL: f64 = 1e-9;

/// An observer moving along the beam axis, with a choice of evaluation
/// route for the boosted matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoostMethod {
    /// Pull the amplitude back onto a regridded domain (substitution route).
    AmplitudeSubstitution,
    /// Swap each node's helicity vectors for the aberrated direction's
    /// (rotation route). Default: no regridding, numerically cleaner.
    RotationSubstitution,
}

/// A z-axis observer: velocity plus evaluation route.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoostedObserver {
    pub boost: BoostParameter,
    pub method: BoostMethod,
}

impl BoostedObserver {
    pub fn new(v: f64) -> Result<Self> {
        Ok(Self {
            boost: BoostParameter::new(v)?,
            method: BoostMethod::RotationSubstitution,
        })
    }

    pub fn with_method(mut self, method: BoostMethod) -> Self {
        self.method = method;
        self
    }

    pub fn rho(&self, packet: &PhotonWavePacket) -> Result<PolarizationMatrix> {
        match self.method {
            BoostMethod::AmplitudeSubstitution => {
                boosted_rho_method_a(packet, self.boost.velocity())
            }
            BoostMethod::RotationSubstitution => {
                boosted_rho_method_b(packet, self.boost.velocity())
            }
        }
    }
}

fn require_helicity(packet: &PhotonWavePacket) -> Result<HelicitySign> {
    packet
        .polarization()
        .helicity_sign()
        .ok_or(Error::UnsupportedPolarization)
}

/// The packet as the moving observer describes it: a regridded momentum
/// domain centered on the Doppler-shifted carrier `k_a sqrt((1 - v)/(1 + v))`
/// with the radial range unchanged, carrying the pulled-back amplitude
/// `f'(k) = f(k_boosted_back)` renormalized on the new grid, with the same
/// helicity label.
///
/// The axial window follows the boosted central ray separately at each
/// radial node: a z-boost preserves `k_r` but shears the axial support by
/// `~gamma v k_r^2 / (2 k_a)` across the radial range, so a window rigidly
/// centered at the shifted carrier clips real support once the spread or the
/// velocity is appreciable. On the axis the window reduces to the carrier
/// scaled by the Doppler factor with the axial width scaled the same way.
pub fn boost_packet(packet: &PhotonWavePacket, v: f64) -> Result<PhotonWavePacket> {
    let sign = require_helicity(packet)?;
    let boost = BoostParameter::new(v)?;
    let profile = packet
        .amplitude()
        .profile()
        .ok_or(Error::UnsupportedAmplitude)?;

    let old = packet.grid().spec();
    let shrink = 1.0 / boost.doppler();
    let spec = GridSpec {
        k_a: old.k_a * shrink,
        delta_z: old.delta_z * shrink,
        ..*old
    };
    let gamma = boost.gamma();
    let cut = old.truncation * old.delta_z;
    let window = |k_r: f64| {
        // Center: the k_z at which the pulled-back axial argument sits on
        // the carrier, gamma (k_z + v sqrt(k_z^2 + k_r^2)) = k_a.
        let u = old.k_a / gamma;
        let center = (u - v * (u * u + (1.0 - v * v) * k_r * k_r).sqrt()) / (1.0 - v * v);
        // Width: the rest-frame truncation mapped through the local slope
        // of the axial pull-back.
        let k0 = (center * center + k_r * k_r).sqrt();
        let slope = gamma * (1.0 + v * center / k0);
        (center, cut / slope)
    };
    let grid = Arc::new(MomentumGrid::with_axial_window(spec, window)?);

    let samples: Vec<Complex64> = grid
        .nodes()
        .iter()
        .map(|n| {
            // Inverse z-boost: k_r and phi are untouched, the axial
            // component maps to gamma (k_z + v k0).
            let kz_back = gamma * (n.k_z + v * n.k0);
            Complex64::new(profile.eval(kz_back, n.k_r), 0.0)
        })
        .collect();
    // from_samples renormalizes, absorbing the Jacobian on the new grid.
    let amplitude = crate::packet::MomentumAmplitude::from_samples(&grid, samples)?;
    let polarization = PolarizationField::uniform_helicity(grid.len(), sign);
    PhotonWavePacket::new(grid, amplitude, polarization)
}

/// Boosted reduced matrix by the substitution route: regrid, pull the
/// amplitude back, reduce.
pub fn boosted_rho_method_a(packet: &PhotonWavePacket, v: f64) -> Result<PolarizationMatrix> {
    reduced_density_matrix(&boost_packet(packet, v)?)
}

/// Boosted reduced matrix by the rotation route: the quadrature of
/// `|f|^2` times the outer product of the aberrated helicity vector
/// `R(k_boosted) eps_p` with itself, on the unchanged grid.
pub fn boosted_rho_method_b(packet: &PhotonWavePacket, v: f64) -> Result<PolarizationMatrix> {
    let sign = require_helicity(packet)?;
    let boost = BoostParameter::new(v)?;
    let gamma = boost.gamma();
    let eps_p = standard_helicity(sign.sign());

    let contributions: Vec<[Complex64; 9]> = packet
        .grid()
        .nodes()
        .iter()
        .zip(packet.amplitude().values())
        .map(|(node, f)| {
            let (st, ct) = node.theta.sin_cos();
            let theta_b = boosted_tilt(st, ct, v, gamma, 1.0 - v * ct);
            let psi = rotation_to(theta_b, node.phi).mul_cvec(&eps_p);
            let comps = psi.components();
            let p = node.weight * f.norm_sqr();
            let mut row = [Complex64::ZERO; 9];
            for m in 0..3 {
                for n in 0..3 {
                    row[3 * m + n] = comps[m] * comps[n].conj() * p;
                }
            }
            row
        })
        .collect();

    let mut m = crate::linalg::Herm3::zero();
    let mut column = Vec::with_capacity(contributions.len());
    for i in 0..3 {
        for j in 0..3 {
            column.clear();
            column.extend(contributions.iter().map(|c| c[3 * i + j]));
            m.0[i][j] = pairwise_sum(&column);
        }
    }
    PolarizationMatrix::new(m)
}

/// How the Helstrom error of a helicity pair responds to the observer's
/// motion.
#[derive(Debug, Clone, Copy)]
pub struct DopplerErrorReport {
    /// Rest-frame error probability.
    pub pe: f64,
    /// Error probability in the moving frame.
    pub pe_boosted: f64,
    /// Measured ratio `pe_boosted / pe`.
    pub ratio: f64,
    /// Leading-order prediction `(1 + v) / (1 - v)`.
    pub analytic_ratio: f64,
    /// Set when `(doppler * omega)^2` exceeds [`REGIME_GUARD`], where the
    /// leading-order comparison degrades.
    pub regime_warning: bool,
}

fn check_pair(plus: &PhotonWavePacket, minus: &PhotonWavePacket) -> Result<()> {
    plus.check_same_grid(minus)?;
    match (
        plus.polarization().helicity_sign(),
        minus.polarization().helicity_sign(),
    ) {
        (Some(a), Some(b)) if a != b => {}
        _ => {
            return Err(Error::MismatchedPair(
                "expected opposite helicity eigenstates".into(),
            ))
        }
    }
    let same_amplitude = plus
        .amplitude()
        .values()
        .iter()
        .zip(minus.amplitude().values())
        .all(|(a, b)| (a - b).norm() <= 1e-12);
    if !same_amplitude {
        return Err(Error::MismatchedPair(
            "helicity pair must share one momentum amplitude".into(),
        ));
    }
    Ok(())
}

/// Ratio of boosted to rest-frame Helstrom error for a helicity pair.
pub fn doppler_error_ratio(
    plus: &PhotonWavePacket,
    minus: &PhotonWavePacket,
    v: f64,
) -> Result<DopplerErrorReport> {
    check_pair(plus, minus)?;
    let boost = BoostParameter::new(v)?;

    let pe = helstrom_error(
        &reduced_density_matrix(plus)?,
        &reduced_density_matrix(minus)?,
    )?;
    let pe_boosted = helstrom_error(
        &boosted_rho_method_b(plus, v)?,
        &boosted_rho_method_b(minus, v)?,
    )?;

    let omega = plus.omega_estimate();
    let spread = boost.doppler() * omega;
    Ok(DopplerErrorReport {
        pe,
        pe_boosted,
        ratio: pe_boosted / pe,
        analytic_ratio: (1.0 + v) / (1.0 - v),
        regime_warning: spread * spread > REGIME_GUARD,
    })
}

/// Outcome of the complete-positivity witness.
#[derive(Debug, Clone, Copy)]
pub struct CpWitnessReport {
    pub pe: f64,
    pub pe_boosted: f64,
    pub ratio: f64,
    /// Absolute margin by which an improvement must beat numerics.
    pub threshold: f64,
    /// True when the boost strictly improved distinguishability, which no
    /// completely positive map on the reduced matrices could do.
    pub witnessed: bool,
}

/// Check whether moving toward the source improves distinguishability
/// beyond numerical tolerance. A `true` result witnesses that the map from
/// rest-frame to boosted reduced matrices is not completely positive.
pub fn cp_violation_witness(
    plus: &PhotonWavePacket,
    minus: &PhotonWavePacket,
    v: f64,
) -> Result<CpWitnessReport> {
    let report = doppler_error_ratio(plus, minus, v)?;
    let threshold = IMPROVEMENT_TOL + 1e-6 * report.pe;
    Ok(CpWitnessReport {
        pe: report.pe,
        pe_boosted: report.pe_boosted,
        ratio: report.ratio,
        threshold,
        witnessed: report.pe_boosted < report.pe - threshold,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::packet::{GridSpec, MomentumAmplitude};
    use crate::povm::circular_leading_order;

    fn helicity_pair(omega: f64) -> (PhotonWavePacket, PhotonWavePacket) {
        let grid = Arc::new(MomentumGrid::new(GridSpec::for_omega(omega)).unwrap());
        let plus = PhotonWavePacket::helicity(grid, HelicitySign::Plus);
        let minus = plus.mirrored().unwrap();
        (plus, minus)
    }

    #[test]
    fn zero_velocity_reproduces_the_rest_frame_matrix() {
        let (plus, _) = helicity_pair(0.05);
        let rho = reduced_density_matrix(&plus).unwrap();
        let via_a = boosted_rho_method_a(&plus, 0.0).unwrap();
        let via_b = boosted_rho_method_b(&plus, 0.0).unwrap();
        assert!(via_b.max_entry_distance(&rho) < 1e-12);
        // The substitution route rebuilds the grid, so agreement is at the
        // quadrature level rather than bitwise.
        assert!(via_a.max_entry_distance(&rho) < 1e-12);
    }

    #[test]
    fn substitution_route_matches_doppler_rescaled_leading_order() {
        let omega = 0.01;
        let (plus, _) = helicity_pair(omega);
        let rho = boosted_rho_method_a(&plus, 0.6).unwrap();
        let scaled = circular_leading_order(2.0 * omega, 1);
        let tol = 5.0 * (2.0 * omega).powi(4);
        for i in 0..3 {
            for j in 0..3 {
                let dev = (rho.matrix().0[i][j] - scaled.0[i][j]).norm();
                assert!(dev < tol, "entry ({i},{j}) off by {dev:e}");
            }
        }
    }

    #[test]
    fn routes_agree_across_velocities_and_spreads() {
        for &v in &[-0.8, -0.6, -0.3, 0.3, 0.6, 0.8] {
            for &omega in &[0.01, 0.05] {
                let (plus, _) = helicity_pair(omega);
                let a = boosted_rho_method_a(&plus, v).unwrap();
                let b = boosted_rho_method_b(&plus, v).unwrap();
                let dist = a.max_entry_distance(&b);
                assert!(dist < 1e-8, "v {v}, omega {omega}: distance {dist:e}");
            }
        }
    }

    #[test]
    fn boosted_error_grows_monotonically_with_velocity() {
        let (plus, minus) = helicity_pair(0.01);
        let mut prev = f64::NEG_INFINITY;
        for i in 0..19 {
            let v = -0.9 + 0.1 * i as f64;
            let report = doppler_error_ratio(&plus, &minus, v).unwrap();
            assert!(
                report.pe_boosted > prev,
                "pe' not increasing at v = {v}: {} vs {prev}",
                report.pe_boosted
            );
            prev = report.pe_boosted;
        }
    }

    #[test]
    fn blueshift_sharpens_the_beam() {
        let (plus, _) = helicity_pair(0.05);
        let pure = PolarizationMatrix::new(circular_leading_order(0.0, 1)).unwrap();
        let rest = reduced_density_matrix(&plus).unwrap();
        let boosted = boosted_rho_method_b(&plus, -0.6).unwrap();
        let d_rest = crate::linalg::trace_norm_diff(rest.matrix(), pure.matrix()).unwrap();
        let d_boost = crate::linalg::trace_norm_diff(boosted.matrix(), pure.matrix()).unwrap();
        assert!(d_boost < d_rest, "{d_boost} !< {d_rest}");
    }

    #[test]
    fn boosted_axial_leak_scales_with_the_doppler_factor() {
        let omega = 0.02;
        let (plus, _) = helicity_pair(omega);
        let rho = boosted_rho_method_b(&plus, 0.6).unwrap();
        let zz = rho.entry(crate::povm::Axis::Z, crate::povm::Axis::Z).re;
        let expect = 0.5 * (2.0 * omega).powi(2);
        assert!(
            ((zz - expect) / expect).abs() < 0.1,
            "zz {zz:e} vs {expect:e}"
        );
    }

    #[test]
    fn error_ratio_follows_the_doppler_square() {
        let (plus, minus) = helicity_pair(0.01);
        for &v in &[-0.6, -0.2, 0.2, 0.6] {
            let report = doppler_error_ratio(&plus, &minus, v).unwrap();
            let rel = (report.ratio / report.analytic_ratio - 1.0).abs();
            assert!(
                rel < 0.02,
                "v {v}: ratio {} vs {}",
                report.ratio,
                report.analytic_ratio
            );
            assert!(!report.regime_warning);
        }
        let report = doppler_error_ratio(&plus, &minus, 0.0).unwrap();
        assert!((report.ratio - 1.0).abs() < 1e-9);
    }

    #[test]
    fn regime_warning_trips_when_the_boosted_spread_grows() {
        let (plus, minus) = helicity_pair(0.05);
        let report = doppler_error_ratio(&plus, &minus, 0.8).unwrap();
        // doppler(0.8) = 3, boosted spread 0.15, squared 0.0225 > 0.01.
        assert!(report.regime_warning);
    }

    #[test]
    fn witness_fires_for_an_approaching_observer() {
        let (plus, minus) = helicity_pair(0.02);
        let report = cp_violation_witness(&plus, &minus, -0.5).unwrap();
        assert!(report.witnessed);
        assert!(((report.ratio) / (1.0 / 3.0) - 1.0).abs() < 0.05);

        let at_rest = cp_violation_witness(&plus, &minus, 0.0).unwrap();
        assert!(!at_rest.witnessed);

        let gentle = cp_violation_witness(&plus, &minus, -0.1).unwrap();
        assert!(gentle.witnessed);
        assert!((gentle.ratio / (0.9 / 1.1) - 1.0).abs() < 0.02);
    }

    #[test]
    fn rapidity_composition_matches_a_single_boost() {
        let (plus, _) = helicity_pair(0.02);
        let v1 = 0.3;
        let v2 = 0.4;
        let combined = (v1 + v2) / (1.0 + v1 * v2);
        let staged = boosted_rho_method_b(&boost_packet(&plus, v1).unwrap(), v2).unwrap();
        let direct = boosted_rho_method_b(&plus, combined).unwrap();
        let dist = staged.max_entry_distance(&direct);
        assert!(dist < 1e-8, "distance {dist:e}");
    }

    #[test]
    fn node_wise_phases_cancel_for_helicity_packets() {
        let grid = Arc::new(MomentumGrid::new(GridSpec::for_omega(0.03)).unwrap());
        let plain = PhotonWavePacket::helicity(grid.clone(), HelicitySign::Plus);
        let phased_field = PolarizationField::custom(
            (0..grid.len())
                .map(|i| {
                    (
                        Complex64::from_polar(1.0, (i as f64 * 0.7).sin() * 2.0),
                        Complex64::ZERO,
                    )
                })
                .collect(),
        )
        .unwrap();
        let phased = PhotonWavePacket::new(
            grid.clone(),
            MomentumAmplitude::gaussian(&grid),
            phased_field,
        )
        .unwrap();

        let rho_plain = reduced_density_matrix(&plain).unwrap();
        let rho_phased = reduced_density_matrix(&phased).unwrap();
        assert!(rho_plain.max_entry_distance(&rho_phased) < 1e-12);

        let b_plain = boosted_rho_method_b(&plain, 0.4).unwrap();
        let b_phased = boosted_rho_method_b(&phased, 0.4).unwrap();
        assert!(b_plain.max_entry_distance(&b_phased) < 1e-12);
    }

    #[test]
    fn non_helicity_packets_are_rejected() {
        let grid = Arc::new(MomentumGrid::new(GridSpec::for_omega(0.02)).unwrap());
        let linear = PhotonWavePacket::linear(grid, 0.3);
        assert!(matches!(
            boosted_rho_method_b(&linear, 0.5),
            Err(Error::UnsupportedPolarization)
        ));
        assert!(matches!(
            boost_packet(&linear, 0.5),
            Err(Error::UnsupportedPolarization)
        ));
    }

    #[test]
    fn sampled_amplitudes_cannot_be_regridded() {
        let grid = Arc::new(MomentumGrid::new(GridSpec::for_omega(0.02)).unwrap());
        let gaussian = MomentumAmplitude::gaussian(&grid);
        let samples = gaussian.values().to_vec();
        let sampled = MomentumAmplitude::from_samples(&grid, samples).unwrap();
        let packet = PhotonWavePacket::new(
            grid.clone(),
            sampled,
            PolarizationField::uniform_helicity(grid.len(), HelicitySign::Plus),
        )
        .unwrap();
        assert!(matches!(
            boost_packet(&packet, 0.3),
            Err(Error::UnsupportedAmplitude)
        ));
        // The rotation route never needs the profile.
        assert!(boosted_rho_method_b(&packet, 0.3).is_ok());
    }

    #[test]
    fn invalid_velocity_propagates() {
        let (plus, minus) = helicity_pair(0.02);
        assert!(matches!(
            doppler_error_ratio(&plus, &minus, 1.0),
            Err(Error::InvalidVelocity(_))
        ));
    }

    #[test]
    fn mismatched_pairs_are_rejected() {
        let (plus, _) = helicity_pair(0.02);
        let (other_plus, _) = helicity_pair(0.03);
        assert!(matches!(
            doppler_error_ratio(&plus, &other_plus, 0.2),
            Err(Error::MismatchedPair(_))
        ));
    }

    /// No fixed matrix conjugation `rho -> A rho A^dag` can describe the
    /// boost on reduced matrices: the determinant ratio it would need is
    /// spread-dependent, and the spectra differ outright.
    #[test]
    fn no_fixed_conjugation_reproduces_the_boost() {
        let v = 0.6;
        let mut ratios = Vec::new();
        for &omega in &[0.02, 0.05] {
            let (plus, _) = helicity_pair(omega);
            let rest = reduced_density_matrix(&plus).unwrap();
            let boosted = boosted_rho_method_b(&plus, v).unwrap();
            let det_rest = rest.matrix().det().re;
            let det_boost = boosted.matrix().det().re;
            assert!(det_rest > 0.0 && det_boost > 0.0);
            ratios.push(det_boost / det_rest);

            // A similarity would preserve the spectrum; the axial eigenvalue
            // scales by the Doppler square instead.
            let rest_eig = rest.eigensystem().unwrap().values;
            let boost_eig = boosted.eigensystem().unwrap().values;
            assert!((boost_eig[1] / rest_eig[1] - 4.0).abs() < 0.2);
        }
        let spread = (ratios[0] - ratios[1]).abs() / ratios[0];
        assert!(
            spread > 1e-3,
            "det ratios {ratios:?} would admit a single conjugation"
        );
    }

    #[test]
    fn observer_struct_selects_routes() {
        let (plus, _) = helicity_pair(0.02);
        let rot = BoostedObserver::new(0.3).unwrap();
        let sub = rot.with_method(BoostMethod::AmplitudeSubstitution);
        let a = sub.rho(&plus).unwrap();
        let b = rot.rho(&plus).unwrap();
        assert!(a.max_entry_distance(&b) < 1e-8);
    }
}
