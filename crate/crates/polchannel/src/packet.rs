//! One-photon wave packets: momentum quadrature grids carrying the invariant
//! measure `d^3 k / ((2 pi)^3 2 k0)`, amplitude profiles, and per-node
//! helicity polarization fields.
//!
//! Grids use cylindrical coordinates `(k_z, k_r, phi)`: the Gaussian profile
//! and all target integrals are either phi-symmetric or low harmonics in phi,
//! so Gauss-Legendre nodes in `k_z` and `k_r` with uniform periodic nodes in
//! `phi` resolve them to near machine precision at modest node counts.

use crate::error::{Error, Result};
use crate::quadrature::{gauss_legendre_on, pairwise_sum};
use num_complex::Complex64;
use std::f64::consts::PI;
use std::sync::Arc;

/// Layout of a momentum quadrature grid.
///
/// `k_z` spans `k_a +- truncation * delta_z` (Gauss-Legendre), `k_r` spans
/// `[0, truncation * delta_r]` (Gauss-Legendre), and `phi` is sampled
/// uniformly on `[0, 2 pi)`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct GridSpec {
    pub k_a: f64,
    pub delta_z: f64,
    pub delta_r: f64,
    pub n_z: usize,
    pub n_r: usize,
    pub n_phi: usize,
    pub truncation: f64,
}

impl GridSpec {
    // A five-sigma Gauss-Legendre window needs 32 axial nodes before the
    // squared-Gaussian marginal integrates below 1e-13 relative; 16 nodes
    // leave a 1e-4 error that leaks into every cross-grid comparison.
    pub const DEFAULT_N_Z: usize = 32;
    pub const DEFAULT_N_R: usize = 32;
    pub const DEFAULT_N_PHI: usize = 32;
    pub const DEFAULT_TRUNCATION: f64 = 5.0;

    /// Default grid for a beam of relative radial spread `omega`, with the
    /// axial spread a tenth of the radial one.
    pub fn for_omega(omega: f64) -> Self {
        let delta_r = omega;
        Self {
            k_a: 1.0,
            delta_z: delta_r / 10.0,
            delta_r,
            n_z: Self::DEFAULT_N_Z,
            n_r: Self::DEFAULT_N_R,
            n_phi: Self::DEFAULT_N_PHI,
            truncation: Self::DEFAULT_TRUNCATION,
        }
    }

    pub fn with_nodes(mut self, n_z: usize, n_r: usize, n_phi: usize) -> Self {
        self.n_z = n_z;
        self.n_r = n_r;
        self.n_phi = n_phi;
        self
    }

    /// The same physical region sampled at half the resolution, for
    /// convergence estimates.
    pub fn halved(&self) -> Self {
        Self {
            n_z: (self.n_z / 2).max(1),
            n_r: (self.n_r / 2).max(2),
            n_phi: (self.n_phi / 2).max(4),
            ..*self
        }
    }

    fn validate(&self) -> Result<()> {
        if self.n_z == 0 || self.n_r == 0 || self.n_phi == 0 {
            return Err(Error::InvalidGridSpec(
                "node counts must be positive".into(),
            ));
        }
        for (name, v) in [
            ("k_a", self.k_a),
            ("delta_z", self.delta_z),
            ("delta_r", self.delta_r),
            ("truncation", self.truncation),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidGridSpec(format!(
                    "{name} = {v} must be positive"
                )));
            }
        }
        let half_width = self.truncation * self.delta_z;
        if self.k_a - half_width <= 0.0 {
            return Err(Error::GridUnderflow {
                k_a: self.k_a,
                half_width,
            });
        }
        Ok(())
    }
}

/// One quadrature node with its cylindrical momentum, derived direction, and
/// measure weight `w = w_z w_r (2 pi / n_phi) k_r / ((2 pi)^3 2 k0)`.
#[derive(Debug, Clone, Copy)]
pub struct GridNode {
    pub k_z: f64,
    pub k_r: f64,
    pub phi: f64,
    pub k0: f64,
    pub theta: f64,
    pub weight: f64,
}

/// Quadrature nodes embedding the invariant momentum measure.
#[derive(Debug, Clone)]
pub struct MomentumGrid {
    spec: GridSpec,
    nodes: Vec<GridNode>,
}

impl MomentumGrid {
    pub fn new(spec: GridSpec) -> Result<Self> {
        let half_width = spec.truncation * spec.delta_z;
        Self::with_axial_window(spec, |_| (spec.k_a, half_width))
    }

    /// Grid whose axial window follows a per-radial-node center and
    /// half-width. Boosted packets need this: a z-boost shears the axial
    /// support across the radial range, and a common window either clips
    /// the support or wastes its nodes.
    pub(crate) fn with_axial_window<F>(spec: GridSpec, window: F) -> Result<Self>
    where
        F: Fn(f64) -> (f64, f64),
    {
        spec.validate()?;
        let (rs, wr) = gauss_legendre_on(spec.n_r, 0.0, spec.truncation * spec.delta_r);
        let dphi = 2.0 * PI / spec.n_phi as f64;
        let measure_scale = 1.0 / (2.0 * PI).powi(3);

        let mut nodes = Vec::with_capacity(spec.n_z * spec.n_r * spec.n_phi);
        for (kr, wkr) in rs.iter().zip(&wr) {
            let (center, half_width) = window(*kr);
            if center - half_width <= 0.0 {
                return Err(Error::GridUnderflow {
                    k_a: center,
                    half_width,
                });
            }
            let (zs, wz) = gauss_legendre_on(spec.n_z, center - half_width, center + half_width);
            for (kz, wkz) in zs.iter().zip(&wz) {
                let k0 = (kz * kz + kr * kr).sqrt();
                let theta = kr.atan2(*kz);
                let base = wkz * wkr * dphi * kr * measure_scale / (2.0 * k0);
                for j in 0..spec.n_phi {
                    nodes.push(GridNode {
                        k_z: *kz,
                        k_r: *kr,
                        phi: dphi * j as f64,
                        k0,
                        theta,
                        weight: base,
                    });
                }
            }
        }
        Ok(Self { spec, nodes })
    }

    pub fn spec(&self) -> &GridSpec {
        &self.spec
    }

    pub fn nodes(&self) -> &[GridNode] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Integrate an arbitrary per-node function against the measure.
    pub fn integrate<F>(&self, f: F) -> f64
    where
        F: Fn(&GridNode) -> f64,
    {
        let terms: Vec<f64> = self.nodes.iter().map(|n| n.weight * f(n)).collect();
        pairwise_sum(&terms)
    }
}

/// Closed-form Gaussian momentum profile (before normalization):
/// `exp(-(k_z - k_a)^2 / (2 delta_z^2)) exp(-k_r^2 / (2 delta_r^2))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianProfile {
    pub k_a: f64,
    pub delta_z: f64,
    pub delta_r: f64,
}

impl GaussianProfile {
    pub fn eval(&self, k_z: f64, k_r: f64) -> f64 {
        let dz = (k_z - self.k_a) / self.delta_z;
        let dr = k_r / self.delta_r;
        (-0.5 * dz * dz).exp() * (-0.5 * dr * dr).exp()
    }
}

/// Momentum amplitude sampled on a grid, normalized so that the
/// measure-weighted square integral is one. When built from a closed-form
/// profile the profile is kept so the amplitude can be re-evaluated off-grid.
#[derive(Debug, Clone)]
pub struct MomentumAmplitude {
    values: Vec<Complex64>,
    norm_constant: f64,
    profile: Option<GaussianProfile>,
}

impl MomentumAmplitude {
    /// The Gaussian wave-packet profile, normalized numerically against the
    /// grid's discrete measure so normalization holds exactly on the grid in
    /// use.
    pub fn gaussian(grid: &MomentumGrid) -> Self {
        let spec = grid.spec();
        let profile = GaussianProfile {
            k_a: spec.k_a,
            delta_z: spec.delta_z,
            delta_r: spec.delta_r,
        };
        Self::from_profile(grid, profile)
    }

    pub fn from_profile(grid: &MomentumGrid, profile: GaussianProfile) -> Self {
        let raw: Vec<Complex64> = grid
            .nodes()
            .iter()
            .map(|n| Complex64::new(profile.eval(n.k_z, n.k_r), 0.0))
            .collect();
        let mut amp = Self {
            values: raw,
            norm_constant: 1.0,
            profile: Some(profile),
        };
        amp.normalize(grid);
        amp
    }

    /// Arbitrary per-node samples (general factorized or fully custom
    /// profiles); these cannot be pulled back off-grid.
    pub fn from_samples(grid: &MomentumGrid, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::InvalidGridSpec(format!(
                "amplitude has {} samples for a grid of {} nodes",
                values.len(),
                grid.len()
            )));
        }
        let mut amp = Self {
            values,
            norm_constant: 1.0,
            profile: None,
        };
        amp.normalize(grid);
        Ok(amp)
    }

    fn normalize(&mut self, grid: &MomentumGrid) {
        let terms: Vec<f64> = grid
            .nodes()
            .iter()
            .zip(&self.values)
            .map(|(n, f)| n.weight * f.norm_sqr())
            .collect();
        let total = pairwise_sum(&terms);
        assert!(total > 0.0, "amplitude has zero norm on the grid");
        let scale = 1.0 / total.sqrt();
        for v in &mut self.values {
            *v *= scale;
        }
        self.norm_constant *= scale;
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    /// The normalization constant applied to the raw profile.
    pub fn norm_constant(&self) -> f64 {
        self.norm_constant
    }

    pub fn profile(&self) -> Option<GaussianProfile> {
        self.profile
    }
}

/// Which helicity eigenstate a packet carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HelicitySign {
    Plus,
    Minus,
}

impl HelicitySign {
    pub fn sign(&self) -> i8 {
        match self {
            HelicitySign::Plus => 1,
            HelicitySign::Minus => -1,
        }
    }

    pub fn flip(&self) -> Self {
        match self {
            HelicitySign::Plus => HelicitySign::Minus,
            HelicitySign::Minus => HelicitySign::Plus,
        }
    }
}

/// Per-node helicity amplitudes `(alpha_plus, alpha_minus)`, unit at every
/// node: `|alpha_+|^2 + |alpha_-|^2 = 1`.
#[derive(Debug, Clone)]
pub struct PolarizationField {
    alphas: Vec<(Complex64, Complex64)>,
}

const UNIT_TOL: f64 = 1e-12;

impl PolarizationField {
    /// Constant helicity eigenstate: `(1, 0)` or `(0, 1)` at every node.
    pub fn uniform_helicity(len: usize, sign: HelicitySign) -> Self {
        let alpha = match sign {
            HelicitySign::Plus => (Complex64::ONE, Complex64::ZERO),
            HelicitySign::Minus => (Complex64::ZERO, Complex64::ONE),
        };
        Self {
            alphas: vec![alpha; len],
        }
    }

    /// Linear polarization at angle `a`:
    /// `(alpha_+, alpha_-) = (e^{-i a}, e^{+i a}) / sqrt 2` at every node, so
    /// the geometric vector is real in the rotated frame of each node.
    pub fn linear(len: usize, a: f64) -> Self {
        let inv = std::f64::consts::FRAC_1_SQRT_2;
        let alpha = (
            Complex64::from_polar(inv, -a),
            Complex64::from_polar(inv, a),
        );
        Self {
            alphas: vec![alpha; len],
        }
    }

    /// Constant elliptic polarization with given helicity amplitudes.
    pub fn elliptic(len: usize, alpha_plus: Complex64, alpha_minus: Complex64) -> Result<Self> {
        check_unit(alpha_plus, alpha_minus)?;
        Self::custom(vec![(alpha_plus, alpha_minus); len])
    }

    /// Fully custom per-node amplitudes; each node must be unit.
    pub fn custom(alphas: Vec<(Complex64, Complex64)>) -> Result<Self> {
        for &(p, m) in &alphas {
            check_unit(p, m)?;
        }
        Ok(Self { alphas })
    }

    pub fn len(&self) -> usize {
        self.alphas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.alphas.is_empty()
    }

    pub fn alphas(&self) -> &[(Complex64, Complex64)] {
        &self.alphas
    }

    /// Detect a helicity eigenstate from the amplitude moduli: node-wise
    /// phases are allowed, a nonzero opposite component is not.
    pub fn helicity_sign(&self) -> Option<HelicitySign> {
        let all_minus_zero = self.alphas.iter().all(|&(_, m)| m.norm() <= UNIT_TOL);
        if all_minus_zero {
            return Some(HelicitySign::Plus);
        }
        let all_plus_zero = self.alphas.iter().all(|&(p, _)| p.norm() <= UNIT_TOL);
        if all_plus_zero {
            return Some(HelicitySign::Minus);
        }
        None
    }
}

fn check_unit(p: Complex64, m: Complex64) -> Result<()> {
    let norm = p.norm_sqr() + m.norm_sqr();
    if (norm - 1.0).abs() > UNIT_TOL {
        return Err(Error::InvalidGridSpec(format!(
            "polarization node has |alpha|^2 = {norm}, expected 1"
        )));
    }
    Ok(())
}

/// A one-photon wave packet: a grid, a normalized momentum amplitude on it,
/// and a unit polarization field per node. Immutable after construction.
#[derive(Debug, Clone)]
pub struct PhotonWavePacket {
    grid: Arc<MomentumGrid>,
    amplitude: MomentumAmplitude,
    polarization: PolarizationField,
}

impl PhotonWavePacket {
    pub fn new(
        grid: Arc<MomentumGrid>,
        amplitude: MomentumAmplitude,
        polarization: PolarizationField,
    ) -> Result<Self> {
        if amplitude.values().len() != grid.len() || polarization.len() != grid.len() {
            return Err(Error::InvalidGridSpec(format!(
                "packet pieces disagree: grid {} nodes, amplitude {}, polarization {}",
                grid.len(),
                amplitude.values().len(),
                polarization.len()
            )));
        }
        Ok(Self {
            grid,
            amplitude,
            polarization,
        })
    }

    /// Helicity eigenstate packet with the grid's Gaussian amplitude.
    pub fn helicity(grid: Arc<MomentumGrid>, sign: HelicitySign) -> Self {
        let amplitude = MomentumAmplitude::gaussian(&grid);
        let polarization = PolarizationField::uniform_helicity(grid.len(), sign);
        Self {
            grid,
            amplitude,
            polarization,
        }
    }

    /// Linearly polarized packet with the grid's Gaussian amplitude.
    pub fn linear(grid: Arc<MomentumGrid>, a: f64) -> Self {
        let amplitude = MomentumAmplitude::gaussian(&grid);
        let polarization = PolarizationField::linear(grid.len(), a);
        Self {
            grid,
            amplitude,
            polarization,
        }
    }

    /// The opposite-helicity twin on the same grid and amplitude, if this is
    /// a helicity packet.
    pub fn mirrored(&self) -> Option<Self> {
        let sign = self.polarization.helicity_sign()?;
        Some(Self {
            grid: self.grid.clone(),
            amplitude: self.amplitude.clone(),
            polarization: PolarizationField::uniform_helicity(self.grid.len(), sign.flip()),
        })
    }

    pub fn grid(&self) -> &MomentumGrid {
        &self.grid
    }

    pub fn grid_handle(&self) -> Arc<MomentumGrid> {
        self.grid.clone()
    }

    pub fn amplitude(&self) -> &MomentumAmplitude {
        &self.amplitude
    }

    pub fn polarization(&self) -> &PolarizationField {
        &self.polarization
    }

    /// `integral d mu |f|^2`; one by construction.
    pub fn norm(&self) -> f64 {
        let terms: Vec<f64> = self
            .grid
            .nodes()
            .iter()
            .zip(self.amplitude.values())
            .map(|(n, f)| n.weight * f.norm_sqr())
            .collect();
        pairwise_sum(&terms)
    }

    /// Full one-photon overlap `<self|other>`, with the per-node helicity
    /// inner product between the polarization fields.
    pub fn state_overlap(&self, other: &Self) -> Result<Complex64> {
        self.check_same_grid(other)?;
        let terms: Vec<Complex64> = self
            .grid
            .nodes()
            .iter()
            .enumerate()
            .map(|(i, n)| {
                let fa = self.amplitude.values()[i];
                let fb = other.amplitude.values()[i];
                let (ap, am) = self.polarization.alphas()[i];
                let (bp, bm) = other.polarization.alphas()[i];
                (ap.conj() * bp + am.conj() * bm) * fa.conj() * fb * n.weight
            })
            .collect();
        Ok(pairwise_sum(&terms))
    }

    /// Estimate of the relative radial spread `delta_r / k_a` from the first
    /// axial and second radial moments of `|f|^2 d mu`.
    pub fn omega_estimate(&self) -> f64 {
        let nodes = self.grid.nodes();
        let values = self.amplitude.values();
        let mut kr2 = Vec::with_capacity(nodes.len());
        let mut kz = Vec::with_capacity(nodes.len());
        for (n, f) in nodes.iter().zip(values) {
            let p = n.weight * f.norm_sqr();
            kr2.push(p * n.k_r * n.k_r);
            kz.push(p * n.k_z);
        }
        pairwise_sum(&kr2).sqrt() / pairwise_sum(&kz)
    }

    pub(crate) fn check_same_grid(&self, other: &Self) -> Result<()> {
        if Arc::ptr_eq(&self.grid, &other.grid) {
            return Ok(());
        }
        if self.grid.spec() != other.grid.spec() {
            return Err(Error::MismatchedPair(
                "packets live on grids with different specs".into(),
            ));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn default_grid(omega: f64) -> Arc<MomentumGrid> {
        Arc::new(MomentumGrid::new(GridSpec::for_omega(omega)).unwrap())
    }

    /// Closed-form integral of the squared Gaussian against the bare
    /// cylindrical measure k_r dk_r dk_z dphi over the truncated region:
    /// 2 pi * delta_z sqrt(pi) erf(c) * (delta_r^2 / 2)(1 - e^{-c^2}).
    /// Frozen for k_a = 1, delta_z = 0.002, delta_r = 0.02, c = 5.
    #[test]
    fn grid_reproduces_gaussian_integral() {
        let grid = default_grid(0.02);
        let profile = GaussianProfile {
            k_a: 1.0,
            delta_z: 0.002,
            delta_r: 0.02,
        };
        // Undo the measure factor to integrate against k_r dk_r dk_z dphi.
        let integral = grid.integrate(|n| {
            let f = profile.eval(n.k_z, n.k_r);
            f * f * (2.0 * PI).powi(3) * 2.0 * n.k0
        });
        let expect = 4.454662397396651e-6;
        assert!(
            ((integral - expect) / expect).abs() < 1e-8,
            "integral {integral:e} vs {expect:e}"
        );
    }

    #[test]
    fn grid_weights_match_measure_volume() {
        // Analytic volume of the truncated region under d mu:
        // (2 pi / (2 pi)^3) * int dk_z [sqrt(k_z^2 + R^2) - k_z] / 2.
        let grid = default_grid(0.05);
        let spec = *grid.spec();
        let r = spec.truncation * spec.delta_r;
        let z1 = spec.k_a - spec.truncation * spec.delta_z;
        let z2 = spec.k_a + spec.truncation * spec.delta_z;
        let anti =
            |z: f64| 0.25 * (z * (z * z + r * r).sqrt() + r * r * (z / r).asinh()) - 0.25 * z * z;
        let expect = (anti(z2) - anti(z1)) * 2.0 * PI / (2.0 * PI).powi(3);
        let got = grid.integrate(|_| 1.0);
        assert!(
            ((got - expect) / expect).abs() < 1e-8,
            "{got:e} vs {expect:e}"
        );
    }

    #[test]
    fn refining_the_grid_leaves_smooth_integrals_unchanged() {
        let spec = GridSpec::for_omega(0.05);
        let coarse = MomentumGrid::new(spec).unwrap();
        let fine = MomentumGrid::new(spec.with_nodes(64, 64, 64)).unwrap();
        let profile = GaussianProfile {
            k_a: spec.k_a,
            delta_z: spec.delta_z,
            delta_r: spec.delta_r,
        };
        let smooth = |n: &GridNode| {
            let f = profile.eval(n.k_z, n.k_r);
            f * f * (1.0 + n.k_r * n.k_r / (spec.delta_r * spec.delta_r) + n.theta.cos())
        };
        let a = coarse.integrate(smooth);
        let b = fine.integrate(smooth);
        assert!(((a - b) / b).abs() < 1e-10, "{a:e} vs {b:e}");
    }

    #[test]
    fn truncation_tail_is_negligible() {
        // Widening the region from five to seven sigmas changes the packet
        // mass by less than 1e-10: the default truncation keeps all but a
        // vanishing tail.
        let spec = GridSpec::for_omega(0.05);
        let wide = GridSpec {
            truncation: 7.0,
            n_z: 48,
            n_r: 48,
            ..spec
        };
        let profile = GaussianProfile {
            k_a: spec.k_a,
            delta_z: spec.delta_z,
            delta_r: spec.delta_r,
        };
        let mass = |g: &MomentumGrid| g.integrate(|n| profile.eval(n.k_z, n.k_r).powi(2));
        let narrow_mass = mass(&MomentumGrid::new(spec).unwrap());
        let wide_mass = mass(&MomentumGrid::new(wide).unwrap());
        assert!(((narrow_mass - wide_mass) / wide_mass).abs() < 1e-10);
    }

    #[test]
    fn underflowing_truncation_is_rejected() {
        let spec = GridSpec {
            k_a: 1.0,
            delta_z: 0.25,
            delta_r: 0.02,
            n_z: 8,
            n_r: 8,
            n_phi: 8,
            truncation: 5.0,
        };
        assert!(matches!(
            MomentumGrid::new(spec),
            Err(Error::GridUnderflow { .. })
        ));
    }

    #[test]
    fn gaussian_amplitude_is_normalized() {
        let grid = default_grid(0.02);
        let packet = PhotonWavePacket::helicity(grid, HelicitySign::Plus);
        assert!((packet.norm() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn normalization_is_refinement_stable() {
        let spec = GridSpec::for_omega(0.02);
        let coarse = MomentumGrid::new(spec).unwrap();
        let fine = MomentumGrid::new(spec.with_nodes(64, 64, 64)).unwrap();
        let na = MomentumAmplitude::gaussian(&coarse).norm_constant();
        let nb = MomentumAmplitude::gaussian(&fine).norm_constant();
        assert!(((na - nb) / nb).abs() < 1e-8, "{na} vs {nb}");
    }

    #[test]
    fn mean_axial_momentum_sits_at_the_center() {
        // The 1/(2 k0) measure factor tilts the mean by at most
        // delta_z^2 / (2 k_a).
        let grid = default_grid(0.02);
        let packet = PhotonWavePacket::helicity(grid.clone(), HelicitySign::Plus);
        let terms: Vec<f64> = grid
            .nodes()
            .iter()
            .zip(packet.amplitude().values())
            .map(|(n, f)| n.weight * f.norm_sqr() * n.k_z)
            .collect();
        let mean = pairwise_sum(&terms);
        let spec = grid.spec();
        let bound = 0.5 * spec.delta_z * spec.delta_z / spec.k_a;
        assert!(
            (mean - spec.k_a).abs() <= bound,
            "mean {mean}, bound {bound:e}"
        );
    }

    #[test]
    fn radial_spread_is_recovered_from_moments() {
        for &omega in &[0.02, 0.05, 0.1] {
            let grid = default_grid(omega);
            let packet = PhotonWavePacket::helicity(grid, HelicitySign::Plus);
            let est = packet.omega_estimate();
            assert!(
                ((est - omega) / omega).abs() < 0.02,
                "omega {omega}: estimate {est}"
            );
        }
    }

    #[test]
    fn helicity_packet_has_unit_plus_component() {
        let grid = default_grid(0.02);
        let packet = PhotonWavePacket::helicity(grid, HelicitySign::Plus);
        for &(p, m) in packet.polarization().alphas() {
            assert_eq!(p, Complex64::ONE);
            assert_eq!(m, Complex64::ZERO);
        }
        assert_eq!(
            packet.polarization().helicity_sign(),
            Some(HelicitySign::Plus)
        );
    }

    #[test]
    fn opposite_helicity_packets_are_orthogonal() {
        let grid = default_grid(0.02);
        let plus = PhotonWavePacket::helicity(grid.clone(), HelicitySign::Plus);
        let minus = plus.mirrored().unwrap();
        let overlap = plus.state_overlap(&minus).unwrap();
        assert!(overlap.norm() < 1e-14);
        let self_overlap = plus.state_overlap(&plus).unwrap();
        assert!((self_overlap.re - 1.0).abs() < 1e-10);
        assert!(self_overlap.im.abs() < 1e-14);
    }

    #[test]
    fn linear_field_is_real_when_unrotated() {
        // a = 0 gives alpha_+ = conj(alpha_-) with equal moduli, a real
        // geometric vector at every node.
        let field = PolarizationField::linear(10, 0.0);
        for &(p, m) in field.alphas() {
            assert!((p - m.conj()).norm() < 1e-15);
            assert!((p.norm_sqr() + m.norm_sqr() - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn linear_field_geometric_vector_at_standard_direction() {
        use crate::linalg::helicity_vectors;
        for &a in &[0.0, 0.3, 1.2] {
            let field = PolarizationField::linear(1, a);
            let (ap, am) = field.alphas()[0];
            let (ep, em) = helicity_vectors(0.0, 0.0);
            let geo = ep.scale(ap).add(&em.scale(am));
            assert!((geo.x.re - a.cos()).abs() < 1e-14);
            assert!(geo.x.im.abs() < 1e-14);
            assert!((geo.y.re - a.sin()).abs() < 1e-14);
            assert!(geo.y.im.abs() < 1e-14);
            assert!(geo.z.norm() < 1e-15);
        }
    }

    #[test]
    fn every_node_is_unit_polarized() {
        for a in [0.0, 0.7, -1.1] {
            let field = PolarizationField::linear(100, a);
            for &(p, m) in field.alphas() {
                assert!((p.norm_sqr() + m.norm_sqr() - 1.0).abs() < 1e-12);
            }
        }
        assert!(PolarizationField::custom(vec![(
            Complex64::new(0.8, 0.0),
            Complex64::new(0.5, 0.0)
        )])
        .is_err());
    }

    #[test]
    fn phased_helicity_field_is_still_recognized() {
        let alphas: Vec<(Complex64, Complex64)> = (0..50)
            .map(|i| (Complex64::from_polar(1.0, 0.13 * i as f64), Complex64::ZERO))
            .collect();
        let field = PolarizationField::custom(alphas).unwrap();
        assert_eq!(field.helicity_sign(), Some(HelicitySign::Plus));
        let field = PolarizationField::linear(5, 0.4);
        assert_eq!(field.helicity_sign(), None);
    }
}
