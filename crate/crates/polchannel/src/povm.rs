//! The transversal-direction POVM and the effective reduced polarization
//! density matrix of a photon wave packet, with Helstrom distinguishability
//! and spectral diagnostics.
//!
//! A lab-frame direction state decomposes at each momentum into helicity
//! components plus an unphysical longitudinal part along the propagation
//! direction. Only the transversal part enters any expectation value, and the
//! three transversal parts resolve the identity on the transversal plane at
//! every momentum, which is what makes `{E_xx, E_yy, E_zz}` a POVM on
//! physical states.
//!
//! Index convention: the density matrix entry at `(m, n)` is the quadrature
//! of `<b_m|alpha><alpha|b_n>`, i.e. the row is the bra side of the outer
//! product, so a right-circular monochromatic packet has entry `(x, y)`
//! equal to `-i/2`.

use crate::error::{Error, Result};
use crate::linalg::{eig_herm3, helicity_vectors, trace_norm_diff, CVec3, Eigensystem, Herm3};
use crate::packet::PhotonWavePacket;
use crate::quadrature::pairwise_sum;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Laboratory axes labelling the POVM directions and the matrix indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    pub fn index(&self) -> usize {
        match self {
            Axis::X => 0,
            Axis::Y => 1,
            Axis::Z => 2,
        }
    }

    pub fn unit(&self) -> [f64; 3] {
        let mut v = [0.0; 3];
        v[self.index()] = 1.0;
        v
    }
}

impl std::fmt::Display for Axis {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Axis::X => "x",
            Axis::Y => "y",
            Axis::Z => "z",
        })
    }
}

/// Decomposition of a lab axis at one direction: helicity components
/// `m_+- = <eps_+-|m_hat>`, the longitudinal component `m_hat . k_hat`, and
/// the transversal weight `c_m = sqrt(|m_+|^2 + |m_-|^2)`.
#[derive(Debug, Clone, Copy)]
pub struct TransversalPart {
    pub plus: Complex64,
    pub minus: Complex64,
    pub longitudinal: f64,
}

impl TransversalPart {
    /// The transversal weight `c_m`. The printed square roots are read on
    /// the moduli: the helicity components are complex, and only the modulus
    /// reading yields a unit closest direction and node-wise completeness.
    pub fn weight(&self) -> f64 {
        (self.plus.norm_sqr() + self.minus.norm_sqr()).sqrt()
    }

    /// The transversal vector `b_m` as a geometric complex 3-vector.
    pub fn vector(&self, theta: f64, phi: f64) -> CVec3 {
        let (ep, em) = helicity_vectors(theta, phi);
        ep.scale(self.plus).add(&em.scale(self.minus))
    }
}

/// Helicity and longitudinal components of the axis `m` at the direction
/// `(theta, phi)`.
pub fn transversal_part(theta: f64, phi: f64, axis: Axis) -> TransversalPart {
    let (ep, em) = helicity_vectors(theta, phi);
    let m_hat = axis.unit();
    let (st, ct) = theta.sin_cos();
    let (sp, cp) = phi.sin_cos();
    let khat = [st * cp, st * sp, ct];
    TransversalPart {
        plus: ep.inner_real(m_hat),
        minus: em.inner_real(m_hat),
        longitudinal: khat[axis.index()],
    }
}

/// The unit transversal direction closest to the axis `m`: `b_m / c_m`.
/// Undefined (and an error) when the axis is parallel to the propagation
/// direction; callers that only need `b_m` never hit this.
pub fn closest_transversal(theta: f64, phi: f64, axis: Axis) -> Result<CVec3> {
    let part = transversal_part(theta, phi, axis);
    let c = part.weight();
    if c <= 1e-14 {
        return Err(Error::DegenerateDirection { axis, weight: c });
    }
    Ok(part.vector(theta, phi).scale(Complex64::from(1.0 / c)))
}

/// A Hermitian, positive semidefinite, unit-trace 3x3 matrix with rows and
/// columns labelled (x, y, z).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolarizationMatrix(Herm3);

const DENSITY_TOL: f64 = 1e-10;

impl PolarizationMatrix {
    /// Validate Hermiticity, unit trace, and positivity (each to 1e-10).
    pub fn new(m: Herm3) -> Result<Self> {
        let defect = m.hermiticity_defect();
        if defect > DENSITY_TOL {
            return Err(Error::NotHermitian {
                deviation: defect,
                tolerance: DENSITY_TOL,
            });
        }
        let trace = m.trace();
        if (trace.re - 1.0).abs() > DENSITY_TOL || trace.im.abs() > DENSITY_TOL {
            return Err(Error::NotDensityMatrix(format!(
                "trace {} + {}i is not 1",
                trace.re, trace.im
            )));
        }
        let eig = eig_herm3(&m)?;
        if eig.values.iter().any(|&l| l < -DENSITY_TOL) {
            return Err(Error::NotDensityMatrix(format!(
                "negative eigenvalue {:e}",
                eig.values[2]
            )));
        }
        Ok(Self(m))
    }

    pub fn matrix(&self) -> &Herm3 {
        &self.0
    }

    pub fn entry(&self, row: Axis, col: Axis) -> Complex64 {
        self.0.entry(row.index(), col.index())
    }

    pub fn trace(&self) -> f64 {
        self.0.trace().re
    }

    pub fn eigensystem(&self) -> Result<Eigensystem> {
        eig_herm3(&self.0)
    }

    /// Entrywise complex conjugate (still a density matrix).
    pub fn conj(&self) -> Self {
        Self(self.0.conj())
    }

    pub fn max_entry_distance(&self, other: &Self) -> f64 {
        self.0.sub(&other.0).max_abs_entry()
    }

    /// JSON form: nine re/im pairs in row-major (x, y, z) order plus the
    /// trace and eigenvalues for human inspection.
    pub fn to_json(&self) -> serde_json::Value {
        let entries: Vec<[f64; 2]> = self.0 .0.iter().flatten().map(|e| [e.re, e.im]).collect();
        let eig = self
            .eigensystem()
            .map(|e| e.values)
            .unwrap_or([f64::NAN; 3]);
        serde_json::json!({
            "order": "row-major (x, y, z)",
            "entries": entries,
            "trace": self.trace(),
            "eigenvalues": eig,
        })
    }
}

/// Per-node bra coefficients `A_m = <b_m|alpha>` for the three axes.
fn bra_coefficients(theta: f64, phi: f64, alpha: (Complex64, Complex64)) -> [Complex64; 3] {
    let (ap, am) = alpha;
    let mut out = [Complex64::ZERO; 3];
    for axis in Axis::ALL {
        let part = transversal_part(theta, phi, axis);
        out[axis.index()] = part.plus.conj() * ap + part.minus.conj() * am;
    }
    out
}

/// The effective reduced polarization density matrix of a packet: the
/// quadrature of `|f|^2 <b_m|alpha><alpha|b_n>` over the packet's grid.
/// Hermitian with unit trace by node-wise transversal completeness.
pub fn reduced_density_matrix(packet: &PhotonWavePacket) -> Result<PolarizationMatrix> {
    let nodes = packet.grid().nodes();
    let values = packet.amplitude().values();
    let alphas = packet.polarization().alphas();

    let contributions: Vec<[Complex64; 9]> = nodes
        .iter()
        .zip(values.iter().zip(alphas))
        .map(|(node, (f, alpha))| {
            let a = bra_coefficients(node.theta, node.phi, *alpha);
            let p = node.weight * f.norm_sqr();
            let mut row = [Complex64::ZERO; 9];
            for m in 0..3 {
                for n in 0..3 {
                    row[3 * m + n] = a[m] * a[n].conj() * p;
                }
            }
            row
        })
        .collect();

    PolarizationMatrix::new(sum_contributions(&contributions))
}

fn sum_contributions(contributions: &[[Complex64; 9]]) -> Herm3 {
    let mut m = Herm3::zero();
    let mut column = Vec::with_capacity(contributions.len());
    for i in 0..3 {
        for j in 0..3 {
            column.clear();
            column.extend(contributions.iter().map(|c| c[3 * i + j]));
            m.0[i][j] = pairwise_sum(&column);
        }
    }
    m
}

/// Reconstruct the off-diagonal entry `(m, n)` from expectation values of
/// POVM elements alone, the way a state-reconstruction measurement would:
/// the combination directions `m + n` and `m - i n` (each with the half
/// normalization of the corresponding projector) give
///
/// ```text
/// Re rho_mn = <E_{m+n}>  - (<E_mm> + <E_nn>) / 2
/// Im rho_mn = <E_{m-in}> - (<E_mm> + <E_nn>) / 2
/// ```
///
/// which agrees with the direct quadrature entry identically at every node.
pub fn reconstruct_offdiagonal(packet: &PhotonWavePacket, m: Axis, n: Axis) -> Result<Complex64> {
    if m == n {
        return Err(Error::SameAxis(m));
    }
    let nodes = packet.grid().nodes();
    let values = packet.amplitude().values();
    let alphas = packet.polarization().alphas();

    let mut e_sum = Vec::with_capacity(nodes.len());
    let mut e_imag = Vec::with_capacity(nodes.len());
    let mut e_mm = Vec::with_capacity(nodes.len());
    let mut e_nn = Vec::with_capacity(nodes.len());

    for (node, (f, alpha)) in nodes.iter().zip(values.iter().zip(alphas)) {
        let a = bra_coefficients(node.theta, node.phi, *alpha);
        let u = a[m.index()];
        let v = a[n.index()];
        let p = node.weight * f.norm_sqr();
        e_sum.push(p * 0.5 * (u + v).norm_sqr());
        // The bra of |b_m - i b_n> pairs with alpha as u + i v.
        e_imag.push(p * 0.5 * (u + Complex64::i() * v).norm_sqr());
        e_mm.push(p * u.norm_sqr());
        e_nn.push(p * v.norm_sqr());
    }

    let half_diag = 0.5 * (pairwise_sum(&e_mm) + pairwise_sum(&e_nn));
    Ok(Complex64::new(
        pairwise_sum(&e_sum) - half_diag,
        pairwise_sum(&e_imag) - half_diag,
    ))
}

/// Helstrom error probability for distinguishing two states from one copy:
/// `1/2 - tr|rho_1 - rho_2| / 4`. One half for identical states, zero for
/// orthogonal supports.
pub fn helstrom_error(rho1: &PolarizationMatrix, rho2: &PolarizationMatrix) -> Result<f64> {
    let tn = trace_norm_diff(rho1.matrix(), rho2.matrix())?;
    Ok(0.5 - 0.25 * tn)
}

/// State overlap `tr(rho_1 rho_2)`; real and nonnegative for density
/// matrices.
pub fn overlap(rho1: &PolarizationMatrix, rho2: &PolarizationMatrix) -> f64 {
    rho1.matrix().matmul(rho2.matrix()).trace().re
}

/// Von Neumann entropy `-sum lambda ln lambda` in nats. Eigenvalues inside
/// `[-1e-8, 0)` are clipped to zero; anything more negative (or a trace away
/// from one) is rejected.
pub fn von_neumann_entropy(rho: &PolarizationMatrix) -> Result<f64> {
    let trace = rho.trace();
    if (trace - 1.0).abs() > 1e-8 {
        return Err(Error::NotDensityMatrix(format!("trace {trace} is not 1")));
    }
    let eig = rho.eigensystem()?;
    let mut s = 0.0;
    for &l in &eig.values {
        if l < -1e-8 {
            return Err(Error::NotDensityMatrix(format!(
                "negative eigenvalue {l:e}"
            )));
        }
        if l > 0.0 {
            s -= l * l.ln();
        }
    }
    Ok(s)
}

/// The leading-order density matrix of a circular packet with relative
/// radial spread `omega`:
/// `(1 - omega^2/2)/2 * [[1, -+i, 0], [+-i, 1, 0], [0,0,0]] + omega^2/2 * diag(0,0,1)`.
/// Shared by tests and the CLI's analytic comparison columns.
pub fn circular_leading_order(omega: f64, sign: i8) -> Herm3 {
    let half = 0.5 * (1.0 - 0.5 * omega * omega);
    let s = f64::from(sign.signum());
    let mut m = Herm3::zero();
    m.0[0][0] = Complex64::new(half, 0.0);
    m.0[1][1] = Complex64::new(half, 0.0);
    m.0[0][1] = Complex64::new(0.0, -s * half);
    m.0[1][0] = Complex64::new(0.0, s * half);
    m.0[2][2] = Complex64::new(0.5 * omega * omega, 0.0);
    m
}
