//! Seeded Monte Carlo evaluation of the reduced density matrix, kept fully
//! independent of the quadrature grid so the two routes can cross-check each
//! other.
//!
//! Momenta are drawn from the Gaussian proposal (normal axial component,
//! Rayleigh radial component, uniform azimuth); the leftover `1 / (2 k0)`
//! measure factor becomes an importance weight and the matrix is a
//! self-normalizing ratio estimator. Standard errors come from the delta
//! method for ratio estimators, separately for real and imaginary parts.

use crate::linalg::helicity_vectors;
use crate::packet::GaussianProfile;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

/// Constant polarization descriptors the sampler can evaluate at an
/// arbitrary direction (per-node custom fields have no off-grid meaning).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PolarizationKind {
    Helicity(i8),
    Linear(f64),
    Elliptic(Complex64, Complex64),
}

impl PolarizationKind {
    fn alphas(&self) -> (Complex64, Complex64) {
        match *self {
            PolarizationKind::Helicity(s) if s >= 0 => (Complex64::ONE, Complex64::ZERO),
            PolarizationKind::Helicity(_) => (Complex64::ZERO, Complex64::ONE),
            PolarizationKind::Linear(a) => {
                let inv = std::f64::consts::FRAC_1_SQRT_2;
                (
                    Complex64::from_polar(inv, -a),
                    Complex64::from_polar(inv, a),
                )
            }
            PolarizationKind::Elliptic(p, m) => (p, m),
        }
    }
}

/// Monte Carlo estimate with per-entry standard errors.
#[derive(Debug, Clone)]
pub struct McEstimate {
    pub entries: [[Complex64; 3]; 3],
    pub std_err_re: [[f64; 3]; 3],
    pub std_err_im: [[f64; 3]; 3],
    pub samples: u64,
}

impl McEstimate {
    /// Largest deviation from `other`, measured in standard errors.
    pub fn max_sigma_distance(&self, other: &[[Complex64; 3]; 3]) -> f64 {
        let mut worst: f64 = 0.0;
        for (i, row) in other.iter().enumerate() {
            for (j, entry) in row.iter().enumerate() {
                let d = self.entries[i][j] - entry;
                worst = worst.max(d.re.abs() / self.std_err_re[i][j].max(1e-15));
                worst = worst.max(d.im.abs() / self.std_err_im[i][j].max(1e-15));
            }
        }
        worst
    }
}

/// Estimate the reduced density matrix of a Gaussian packet with constant
/// polarization by importance sampling `|f|^2 d mu`.
pub fn estimate_rho(
    profile: &GaussianProfile,
    polarization: PolarizationKind,
    samples: u64,
    seed: u64,
) -> McEstimate {
    assert!(samples >= 2, "need at least two samples for an error bar");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // |f|^2 has Gaussian width delta_z / sqrt(2) in k_z and Rayleigh scale
    // delta_r / sqrt(2) in k_r.
    let normal = Normal::new(profile.k_a, profile.delta_z / 2f64.sqrt()).unwrap();
    let rayleigh_sigma = profile.delta_r / 2f64.sqrt();
    let (alpha_p, alpha_m) = polarization.alphas();

    let n = samples as usize;
    let mut sum_w = 0.0;
    let mut sum_w2 = 0.0;
    let mut sum_wg = [[Complex64::ZERO; 3]; 3];
    let mut sum_wg2_re = [[0.0f64; 3]; 3];
    let mut sum_wg2_im = [[0.0f64; 3]; 3];
    let mut sum_wg_w_re = [[0.0f64; 3]; 3];
    let mut sum_wg_w_im = [[0.0f64; 3]; 3];

    for _ in 0..n {
        let k_z: f64 = normal.sample(&mut rng);
        let u: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
        let k_r = rayleigh_sigma * (-2.0 * u.ln()).sqrt();
        let phi = rng.gen_range(0.0..std::f64::consts::TAU);
        let k0 = (k_z * k_z + k_r * k_r).sqrt();
        if k0 <= 0.0 || k_z <= 0.0 {
            continue;
        }
        let w = 1.0 / (2.0 * k0);
        let theta = k_r.atan2(k_z);
        let (ep, em) = helicity_vectors(theta, phi);
        let geo = ep.scale(alpha_p).add(&em.scale(alpha_m));
        let comps = geo.components();

        sum_w += w;
        sum_w2 += w * w;
        for i in 0..3 {
            for j in 0..3 {
                let g = comps[i] * comps[j].conj();
                let wg = g * w;
                sum_wg[i][j] += wg;
                sum_wg2_re[i][j] += wg.re * wg.re;
                sum_wg2_im[i][j] += wg.im * wg.im;
                sum_wg_w_re[i][j] += wg.re * w;
                sum_wg_w_im[i][j] += wg.im * w;
            }
        }
    }

    let nf = n as f64;
    let mean_w = sum_w / nf;
    let var_term = |sum_sq: f64, sum_cross: f64, mean_num: f64| -> f64 {
        // Var(u - r t) for the ratio r = mean(u) / mean(t).
        let r = mean_num / mean_w;
        let m2u = sum_sq / nf;
        let mut_ = sum_cross / nf;
        let m2t = sum_w2 / nf;
        let var = (m2u - mean_num * mean_num) - 2.0 * r * (mut_ - mean_num * mean_w)
            + r * r * (m2t - mean_w * mean_w);
        (var.max(0.0) / nf).sqrt() / mean_w
    };

    let mut entries = [[Complex64::ZERO; 3]; 3];
    let mut std_err_re = [[0.0f64; 3]; 3];
    let mut std_err_im = [[0.0f64; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            let mean_re = sum_wg[i][j].re / nf;
            let mean_im = sum_wg[i][j].im / nf;
            entries[i][j] = Complex64::new(mean_re / mean_w, mean_im / mean_w);
            std_err_re[i][j] = var_term(sum_wg2_re[i][j], sum_wg_w_re[i][j], mean_re);
            std_err_im[i][j] = var_term(sum_wg2_im[i][j], sum_wg_w_im[i][j], mean_im);
        }
    }

    McEstimate {
        entries,
        std_err_re,
        std_err_im,
        samples,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::packet::{GridSpec, HelicitySign, MomentumGrid, PhotonWavePacket};
    use crate::povm::reduced_density_matrix;
    use std::sync::Arc;

    #[test]
    fn estimate_is_seed_deterministic() {
        let profile = GaussianProfile {
            k_a: 1.0,
            delta_z: 0.005,
            delta_r: 0.05,
        };
        let a = estimate_rho(&profile, PolarizationKind::Helicity(1), 20_000, 9);
        let b = estimate_rho(&profile, PolarizationKind::Helicity(1), 20_000, 9);
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(a.entries[i][j], b.entries[i][j]);
            }
        }
    }

    #[test]
    fn estimate_trace_is_one_within_errors() {
        let profile = GaussianProfile {
            k_a: 1.0,
            delta_z: 0.01,
            delta_r: 0.1,
        };
        let est = estimate_rho(&profile, PolarizationKind::Helicity(1), 100_000, 3);
        let trace: f64 = (0..3).map(|i| est.entries[i][i].re).sum();
        assert!((trace - 1.0).abs() < 1e-3);
    }

    #[test]
    fn sampler_agrees_with_quadrature_at_moderate_spread() {
        let omega = 0.1;
        let grid = Arc::new(MomentumGrid::new(GridSpec::for_omega(omega)).unwrap());
        let packet = PhotonWavePacket::helicity(grid.clone(), HelicitySign::Plus);
        let rho = reduced_density_matrix(&packet).unwrap();
        let spec = grid.spec();
        let profile = GaussianProfile {
            k_a: spec.k_a,
            delta_z: spec.delta_z,
            delta_r: spec.delta_r,
        };
        let est = estimate_rho(&profile, PolarizationKind::Helicity(1), 200_000, 17);
        let mut quad = [[Complex64::ZERO; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                quad[i][j] = rho.matrix().0[i][j];
            }
        }
        let sigmas = est.max_sigma_distance(&quad);
        assert!(sigmas < 3.0, "max deviation {sigmas} standard errors");
    }
}
