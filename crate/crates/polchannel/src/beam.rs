//! Classical Fourier-component optics: polarizer fluxes for tilted plane
//! waves, the apparent-angle distortion, small-tilt losses, Doppler
//! aberration of the tilt, and averaging over a beam's angular profile.
//!
//! Proportionality constants are dropped throughout; fluxes are normalized so
//! the ideal aligned case equals one. Only ratios of fluxes ever matter.

use crate::error::{Error, Result};
use crate::linalg::{boosted_tilt, BoostParameter};
use crate::quadrature::{gauss_legendre_on, pairwise_sum};
use std::f64::consts::{FRAC_PI_2, PI};

/// One plane-wave Fourier component of a beam: tilt `theta` off the beam
/// axis, azimuth `phi`, and the source's linear polarization angle `a`.
/// All angles in radians.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlaneWaveComponent {
    pub theta: f64,
    pub phi: f64,
    pub a: f64,
}

impl PlaneWaveComponent {
    pub fn new(theta: f64, phi: f64, a: f64) -> Self {
        debug_assert!((0.0..FRAC_PI_2).contains(&theta));
        Self { theta, phi, a }
    }
}

/// The receiving analyzer's angle `b` in the detector's xy-plane (radians).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectorSetting {
    pub b: f64,
}

/// Electric-field Fourier component for a wave tilted by `theta` in the
/// `phi = 0` frame with source polarization `a`:
/// `(cos a cos theta, sin a, -cos a sin theta)`. Exactly orthogonal to the
/// wave vector `(sin theta, 0, cos theta)`. General azimuths are handled by
/// rotating the frame, see [`beam_average_flux`].
pub fn field_fourier(c: &PlaneWaveComponent) -> [f64; 3] {
    let (st, ct) = c.theta.sin_cos();
    let (sa, ca) = c.a.sin_cos();
    [ca * ct, sa, -ca * st]
}

/// Flux through an analyzer at angle `b` in the `phi = 0` frame:
/// `(cos a cos b cos theta + sin a sin b)^2`.
pub fn detected_flux(c: &PlaneWaveComponent, d: &DetectorSetting) -> f64 {
    let ct = c.theta.cos();
    let (sa, ca) = c.a.sin_cos();
    let (sb, cb) = d.b.sin_cos();
    let amp = ca * cb * ct + sa * sb;
    amp * amp
}

/// Leading-order fraction of the signal lost with a matched analyzer
/// (`b = a`) for a small tilt: `theta^2 cos^2(a - phi)`.
pub fn loss_fraction(c: &PlaneWaveComponent) -> f64 {
    let cos = (c.a - c.phi).cos();
    c.theta * c.theta * cos * cos
}

/// The polarization angle the receiver ascribes to a tilted component,
/// `arctan(tan a / cos theta)`. Defined on `a` in `[-pi/2, pi/2]` by odd
/// symmetry, with the endpoints fixed points.
pub fn apparent_angle(a: f64, theta: f64) -> f64 {
    if a.abs() == FRAC_PI_2 {
        return a;
    }
    (a.tan() / theta.cos()).atan()
}

/// Which branch of the tilt aberration to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TiltMode {
    /// `arcsin(sin theta / (gamma (1 - v cos theta)))` with the quadrant
    /// fixed by the sign of the boosted cosine.
    Exact,
    /// `theta * sqrt((1 + v) / (1 - v))`, valid for `theta^2 << |v|`.
    SmallAngle,
}

/// Aberrated tilt angle seen by an observer moving along the beam axis.
pub fn doppler_tilt(theta: f64, b: &BoostParameter, mode: TiltMode) -> f64 {
    match mode {
        TiltMode::SmallAngle => theta * b.doppler(),
        TiltMode::Exact => {
            let (st, ct) = theta.sin_cos();
            let v = b.velocity();
            boosted_tilt(st, ct, v, b.gamma(), 1.0 - v * ct)
        }
    }
}

/// A beam's angular intensity profile: quadrature nodes over
/// `(theta, phi)` with weights that are a density against `d theta d phi`,
/// normalized to one. Gauss-Legendre in `theta`, uniform (trapezoid on a
/// periodic integrand) in `phi`.
#[derive(Debug, Clone)]
pub struct BeamProfile {
    nodes: Vec<ProfileNode>,
    spec: ProfileSpec,
}

#[derive(Debug, Clone, Copy)]
struct ProfileNode {
    theta: f64,
    phi: f64,
    weight: f64,
}

/// Quadrature layout for a [`BeamProfile`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProfileSpec {
    pub n_theta: usize,
    pub n_phi: usize,
    pub theta_max: f64,
}

impl ProfileSpec {
    pub fn with_cutoff(theta_max: f64) -> Self {
        Self {
            n_theta: 64,
            n_phi: 64,
            theta_max,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.n_theta == 0 || self.n_phi == 0 {
            return Err(Error::InvalidGridSpec(
                "profile node counts must be positive".into(),
            ));
        }
        if !(self.theta_max > 0.0 && self.theta_max < FRAC_PI_2) {
            return Err(Error::InvalidGridSpec(format!(
                "profile cutoff {} must lie in (0, pi/2)",
                self.theta_max
            )));
        }
        Ok(())
    }
}

impl BeamProfile {
    /// Build a profile from an arbitrary nonnegative weight function over
    /// `(theta, phi)`; the quadrature weights are normalized to one.
    pub fn from_weight_fn<F>(spec: ProfileSpec, weight: F) -> Result<Self>
    where
        F: Fn(f64, f64) -> f64,
    {
        spec.validate()?;
        let (thetas, wt) = gauss_legendre_on(spec.n_theta, 0.0, spec.theta_max);
        let dphi = 2.0 * PI / spec.n_phi as f64;
        let mut nodes = Vec::with_capacity(spec.n_theta * spec.n_phi);
        for (t, wtheta) in thetas.iter().zip(&wt) {
            for j in 0..spec.n_phi {
                let phi = dphi * j as f64;
                let w = weight(*t, phi);
                if !(w.is_finite() && w >= 0.0) {
                    return Err(Error::InvalidGridSpec(format!(
                        "profile weight at (theta={t}, phi={phi}) is {w}"
                    )));
                }
                nodes.push(ProfileNode {
                    theta: *t,
                    phi,
                    weight: w * wtheta * dphi,
                });
            }
        }
        let total = pairwise_sum(&nodes.iter().map(|n| n.weight).collect::<Vec<_>>());
        if !(total.is_finite() && total > 0.0) {
            return Err(Error::ProfileNotNormalized(total));
        }
        for n in &mut nodes {
            n.weight /= total;
        }
        Ok(Self { nodes, spec })
    }

    /// The default profile: a truncated Gaussian in `theta` with rms tilt
    /// `rms_theta` (cut at five sigma), uniform in `phi`.
    pub fn gaussian(rms_theta: f64) -> Result<Self> {
        Self::gaussian_with(rms_theta, 64, 64)
    }

    pub fn gaussian_with(rms_theta: f64, n_theta: usize, n_phi: usize) -> Result<Self> {
        if !rms_theta.is_finite() || rms_theta <= 0.0 {
            return Err(Error::InvalidGridSpec(format!(
                "rms tilt {rms_theta} must be positive"
            )));
        }
        let cutoff = (5.0 * rms_theta).min(FRAC_PI_2 * (1.0 - 1e-9));
        let spec = ProfileSpec {
            n_theta,
            n_phi,
            theta_max: cutoff,
        };
        let inv2s2 = 1.0 / (2.0 * rms_theta * rms_theta);
        Self::from_weight_fn(spec, move |theta, _| (-theta * theta * inv2s2).exp())
    }

    /// An ideal perfectly collimated beam: a single component on the axis.
    pub fn pencil() -> Self {
        Self {
            nodes: vec![ProfileNode {
                theta: 0.0,
                phi: 0.0,
                weight: 1.0,
            }],
            spec: ProfileSpec {
                n_theta: 1,
                n_phi: 1,
                theta_max: 0.0,
            },
        }
    }

    pub fn total_weight(&self) -> f64 {
        pairwise_sum(&self.nodes.iter().map(|n| n.weight).collect::<Vec<_>>())
    }

    pub fn spec(&self) -> ProfileSpec {
        self.spec
    }

    /// Second moment of `theta` under the profile.
    pub fn mean_square_tilt(&self) -> f64 {
        pairwise_sum(
            &self
                .nodes
                .iter()
                .map(|n| n.weight * n.theta * n.theta)
                .collect::<Vec<_>>(),
        )
    }
}

/// Profile-averaged analyzer flux. Each component is evaluated after
/// rotating the x-axis onto its azimuth, so a component at azimuth `phi`
/// contributes the `phi = 0` flux with both polarizer angles shifted to
/// `a - phi` and `b - phi`.
pub fn beam_average_flux(profile: &BeamProfile, a: f64, b: f64) -> Result<f64> {
    let total = profile.total_weight();
    if (total - 1.0).abs() > 1e-10 {
        return Err(Error::ProfileNotNormalized(total));
    }
    let terms: Vec<f64> = profile
        .nodes
        .iter()
        .map(|n| {
            let component = PlaneWaveComponent::new(n.theta, 0.0, a - n.phi);
            n.weight * detected_flux(&component, &DetectorSetting { b: b - n.phi })
        })
        .collect();
    Ok(pairwise_sum(&terms))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn field_of_untilted_x_polarized_wave() {
        let e = field_fourier(&PlaneWaveComponent::new(0.0, 0.0, 0.0));
        assert_eq!(e, [1.0, 0.0, 0.0]);
    }

    #[test]
    fn y_polarization_is_unaffected_by_tilt() {
        let e = field_fourier(&PlaneWaveComponent::new(0.2, 0.0, FRAC_PI_2));
        assert!(e[0].abs() < 1e-16);
        assert!((e[1] - 1.0).abs() < 1e-15);
        assert!(e[2].abs() < 1e-16);
    }

    #[test]
    fn field_at_quarter_polarization() {
        // Frozen from the closed form at theta = 0.2, a = pi/4.
        let e = field_fourier(&PlaneWaveComponent::new(
            0.2,
            0.0,
            std::f64::consts::FRAC_PI_4,
        ));
        assert!((e[0] - 0.6930117232058353).abs() < 1e-15);
        assert!((e[1] - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
        assert!((e[2] + 0.1404804310189812).abs() < 1e-15);
    }

    #[test]
    fn field_is_orthogonal_to_wave_vector() {
        for &(theta, a) in &[(0.3, 0.2), (0.9, -1.1), (1.4, 0.7)] {
            let c = PlaneWaveComponent::new(theta, 0.0, a);
            let e = field_fourier(&c);
            let k = [theta.sin(), 0.0, theta.cos()];
            let dot = e[0] * k[0] + e[1] * k[1] + e[2] * k[2];
            assert!(dot.abs() < 1e-15);
        }
    }

    #[test]
    fn aligned_untilted_flux_is_unity() {
        for &a in &[0.0, 0.3, 1.2, -0.8] {
            let c = PlaneWaveComponent::new(0.0, 0.0, a);
            let f = detected_flux(&c, &DetectorSetting { b: a });
            assert!((f - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn crossed_polarizers_block_everything() {
        for &theta in &[0.0, 0.3, 1.0] {
            let c = PlaneWaveComponent::new(theta, 0.0, FRAC_PI_2);
            let f = detected_flux(&c, &DetectorSetting { b: 0.0 });
            assert!(f.abs() < 1e-30);
        }
    }

    #[test]
    fn flux_at_small_tilt_matches_frozen_value() {
        // ((1 + cos 0.1) / 2)^2 for a = b = pi/4.
        let c = PlaneWaveComponent::new(0.1, 0.0, std::f64::consts::FRAC_PI_4);
        let f = detected_flux(
            &c,
            &DetectorSetting {
                b: std::f64::consts::FRAC_PI_4,
            },
        );
        assert!((f - 0.9950104048691681).abs() < 1e-15);
    }

    #[test]
    fn loss_vanishes_for_y_polarized_component() {
        let c = PlaneWaveComponent::new(0.2, 0.0, FRAC_PI_2);
        assert!(loss_fraction(&c) < 1e-30);
    }

    #[test]
    fn loss_of_axis_polarized_component() {
        let c = PlaneWaveComponent::new(0.1, 0.0, 0.0);
        assert!((loss_fraction(&c) - 0.01).abs() < 1e-17);
        let c = PlaneWaveComponent::new(0.05, 0.0, std::f64::consts::FRAC_PI_4);
        assert!((loss_fraction(&c) - 0.00125).abs() < 1e-17);
    }

    #[test]
    fn loss_matches_exact_flux_to_fourth_order() {
        // Richardson-style check over a halving ladder of tilts.
        for &a in &[0.0, 0.4, 1.0, -0.9] {
            for &theta in &[0.1, 0.05, 0.025] {
                let c = PlaneWaveComponent::new(theta, 0.0, a);
                let exact_loss = 1.0 - detected_flux(&c, &DetectorSetting { b: a });
                let residual = (exact_loss - loss_fraction(&c)).abs();
                assert!(
                    residual < 0.5 * theta.powi(4),
                    "theta {theta}, a {a}: residual {residual:e}"
                );
            }
        }
    }

    #[test]
    fn apparent_angle_fixed_points() {
        assert_eq!(apparent_angle(0.4, 0.0), 0.4);
        assert_eq!(apparent_angle(0.0, 0.3), 0.0);
        assert_eq!(apparent_angle(FRAC_PI_2, 0.3), FRAC_PI_2);
        assert_eq!(apparent_angle(-FRAC_PI_2, 0.3), -FRAC_PI_2);
    }

    #[test]
    fn apparent_angle_frozen_value() {
        // arctan(1 / cos 0.2)
        let got = apparent_angle(std::f64::consts::FRAC_PI_4, 0.2);
        assert!((got - 0.7954648697575929).abs() < 1e-15);
    }

    #[test]
    fn apparent_angle_is_odd_and_grows_with_tilt() {
        for &a in &[0.2, 0.7, 1.3] {
            assert!((apparent_angle(-a, 0.4) + apparent_angle(a, 0.4)).abs() < 1e-15);
            let mut prev = apparent_angle(a, 0.0);
            for &theta in &[0.2, 0.5, 0.9, 1.3] {
                let next = apparent_angle(a, theta);
                assert!(next > prev);
                prev = next;
            }
        }
    }

    /// Dense-scan oracle: the apparent angle maximizes the detected flux
    /// over the analyzer setting.
    #[test]
    fn apparent_angle_is_the_flux_argmax() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..40 {
            let a = rng.gen_range(-1.2..1.2);
            let theta = rng.gen_range(0.0..1.2);
            let c = PlaneWaveComponent::new(theta, 0.0, a);
            let best = scan_argmax(&c);
            let predicted = apparent_angle(a, theta);
            assert!(
                (best - predicted).abs() < 1e-6,
                "a {a}, theta {theta}: scan {best} vs {predicted}"
            );
        }
    }

    fn scan_argmax(c: &PlaneWaveComponent) -> f64 {
        let mut best_b = 0.0;
        let mut best = -1.0;
        let n = 4000;
        for i in 0..n {
            let b = -FRAC_PI_2 + PI * i as f64 / n as f64;
            let f = detected_flux(c, &DetectorSetting { b });
            if f > best {
                best = f;
                best_b = b;
            }
        }
        // Golden-section refinement around the scan winner.
        let (mut lo, mut hi) = (best_b - PI / n as f64, best_b + PI / n as f64);
        let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
        for _ in 0..80 {
            let m1 = hi - inv_phi * (hi - lo);
            let m2 = lo + inv_phi * (hi - lo);
            let f1 = detected_flux(c, &DetectorSetting { b: m1 });
            let f2 = detected_flux(c, &DetectorSetting { b: m2 });
            if f1 < f2 {
                lo = m1;
            } else {
                hi = m2;
            }
        }
        0.5 * (lo + hi)
    }

    #[test]
    fn doppler_tilt_is_identity_at_rest() {
        let b = BoostParameter::new(0.0).unwrap();
        for &theta in &[0.0, 0.01, 0.5, 1.5] {
            assert!((doppler_tilt(theta, &b, TiltMode::Exact) - theta).abs() < 1e-15);
            assert!((doppler_tilt(theta, &b, TiltMode::SmallAngle) - theta).abs() < 1e-15);
        }
    }

    #[test]
    fn doppler_tilt_small_angle_doubles_at_point_six() {
        let b = BoostParameter::new(0.6).unwrap();
        let got = doppler_tilt(1e-3, &b, TiltMode::SmallAngle);
        assert!((got - 2e-3).abs() < 1e-15);
    }

    #[test]
    fn doppler_tilt_exact_at_right_angle() {
        // theta = pi/2, v = 0.6: the boosted sine is 1/gamma = 0.8 while the
        // boosted cosine is -v, so the tilt lands in the second quadrant at
        // pi - arcsin(0.8). The naive arcsin branch would break
        // invertibility, which the roundtrip test below pins down.
        let b = BoostParameter::new(0.6).unwrap();
        let got = doppler_tilt(FRAC_PI_2, &b, TiltMode::Exact);
        assert!((got - (PI - 0.9272952180016122)).abs() < 1e-14);
        assert!((got.sin() - 0.8).abs() < 1e-15);
        assert!((got.cos() + 0.6).abs() < 1e-15);
    }

    #[test]
    fn doppler_tilt_roundtrips() {
        for &v in &[0.3, 0.8, -0.6] {
            let b = BoostParameter::new(v).unwrap();
            for &theta in &[0.01, 0.4, 1.1, 1.5] {
                let fwd = doppler_tilt(theta, &b, TiltMode::Exact);
                let back = doppler_tilt(fwd, &b.inverse(), TiltMode::Exact);
                assert!((back - theta).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn approaching_observer_sees_smaller_tilt() {
        let b = BoostParameter::new(-0.4).unwrap();
        for i in 1..20 {
            let theta = FRAC_PI_2 * i as f64 / 20.0;
            assert!(doppler_tilt(theta, &b, TiltMode::Exact) < theta);
        }
    }

    #[test]
    fn pencil_profile_reproduces_ideal_law() {
        let p = BeamProfile::pencil();
        for &(a, b) in &[(0.0, 0.0), (0.4, 0.1), (1.0, -0.6)] {
            let f = beam_average_flux(&p, a, b).unwrap();
            let ideal = (a - b).cos().powi(2);
            assert!((f - ideal).abs() < 1e-15);
        }
    }

    #[test]
    fn gaussian_profile_leading_loss_is_half_mean_square_tilt() {
        // With a phi-symmetric profile the per-component loss
        // theta^2 cos^2(a - phi) averages to <theta^2> / 2 regardless of a.
        let rms = 0.01;
        let p = BeamProfile::gaussian(rms).unwrap();
        for &a in &[0.0, 0.5, 1.2] {
            let loss = 1.0 - beam_average_flux(&p, a, a).unwrap();
            let expect = 0.5 * rms * rms;
            assert!(
                (loss / expect - 1.0).abs() < 0.01,
                "a {a}: loss {loss:e} vs {expect:e}"
            );
        }
    }

    #[test]
    fn gaussian_profile_mean_square_tilt_matches_rms() {
        // The five-sigma cutoff clips the second moment by about 1.6e-5
        // relative, which bounds how closely the profile can match its
        // nominal rms.
        let rms = 0.02;
        let p = BeamProfile::gaussian(rms).unwrap();
        assert!((p.mean_square_tilt() / (rms * rms) - 1.0).abs() < 5e-5);
    }

    #[test]
    fn profile_average_converges_under_refinement() {
        let rms = 0.05;
        let coarse = BeamProfile::gaussian_with(rms, 64, 64).unwrap();
        let fine = BeamProfile::gaussian_with(rms, 128, 128).unwrap();
        let a = 0.7;
        let b = 0.2;
        let f0 = beam_average_flux(&coarse, a, b).unwrap();
        let f1 = beam_average_flux(&fine, a, b).unwrap();
        assert!(((f0 - f1) / f1).abs() < 1e-10);
    }

    #[test]
    fn crossed_average_flux_vanishes_with_the_cutoff() {
        let rms = 0.01;
        let p = BeamProfile::gaussian(rms).unwrap();
        let a = 0.3;
        let f = beam_average_flux(&p, a, a + FRAC_PI_2).unwrap();
        assert!(f < rms * rms);
    }

    #[test]
    fn profile_rejects_negative_weights() {
        let spec = ProfileSpec::with_cutoff(0.1);
        assert!(BeamProfile::from_weight_fn(spec, |t, _| 0.05 - t).is_err());
    }

    #[test]
    fn massless_profile_cannot_normalize() {
        let spec = ProfileSpec::with_cutoff(0.1);
        assert!(matches!(
            BeamProfile::from_weight_fn(spec, |_, _| 0.0),
            Err(Error::ProfileNotNormalized(_))
        ));
    }

    proptest! {
        #[test]
        fn prop_untilted_flux_is_cos_squared(a in -1.5..1.5f64, b in -1.5..1.5f64) {
            let c = PlaneWaveComponent::new(0.0, 0.0, a);
            let f = detected_flux(&c, &DetectorSetting { b });
            prop_assert!((f - (a - b).cos().powi(2)).abs() < 5e-15);
        }

        #[test]
        fn prop_flux_is_bounded(theta in 0.0..1.5f64, a in -1.5..1.5f64, b in -1.5..1.5f64) {
            let c = PlaneWaveComponent::new(theta, 0.0, a);
            let f = detected_flux(&c, &DetectorSetting { b });
            prop_assert!((0.0..=1.0 + 1e-15).contains(&f));
        }

        #[test]
        fn prop_exact_tilt_invertible(theta in 0.001..1.5f64, v in -0.95..0.95f64) {
            let b = BoostParameter::new(v).unwrap();
            let fwd = doppler_tilt(theta, &b, TiltMode::Exact);
            let back = doppler_tilt(fwd, &b.inverse(), TiltMode::Exact);
            prop_assert!((back - theta).abs() < 1e-10);
        }
    }
}
