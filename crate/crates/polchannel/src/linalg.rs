//! Complex 3-vectors, Hermitian 3x3 matrices, rotations, and z-boosts of
//! null wave vectors.
//!
//! All momenta are expressed in units of the reference magnitude (c = 1), so
//! every quantity here is dimensionless. Directions are carried as polar
//! angles `(theta, phi)`; the Cartesian unit vector is derived. At `theta = 0`
//! the azimuth is retained as stored, which makes the rotation a plain
//! z-rotation by `phi` there; the same convention is applied everywhere so
//! phase conventions never mix.

use crate::error::{Error, Result};
use num_complex::Complex64;
use std::f64::consts::PI;

/// Hermiticity is enforced to this entrywise tolerance before
/// eigendecompositions and trace norms.
pub const HERMITICITY_TOL: f64 = 1e-10;

/// Off-diagonal Frobenius mass below which a Jacobi sweep is converged.
const JACOBI_TOL: f64 = 1e-14;

/// A complex 3-vector with components labelled (x, y, z).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CVec3 {
    pub x: Complex64,
    pub y: Complex64,
    pub z: Complex64,
}

impl CVec3 {
    pub fn new(x: Complex64, y: Complex64, z: Complex64) -> Self {
        Self { x, y, z }
    }

    pub fn zero() -> Self {
        Self::new(Complex64::ZERO, Complex64::ZERO, Complex64::ZERO)
    }

    pub fn from_real(v: [f64; 3]) -> Self {
        Self::new(v[0].into(), v[1].into(), v[2].into())
    }

    pub fn components(&self) -> [Complex64; 3] {
        [self.x, self.y, self.z]
    }

    /// Conjugate-linear inner product `<self|other> = sum conj(self_i) other_i`.
    pub fn inner(&self, other: &Self) -> Complex64 {
        self.x.conj() * other.x + self.y.conj() * other.y + self.z.conj() * other.z
    }

    /// Inner product against a real vector, `<self|v>`.
    pub fn inner_real(&self, v: [f64; 3]) -> Complex64 {
        self.x.conj() * v[0] + self.y.conj() * v[1] + self.z.conj() * v[2]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.x.norm_sqr() + self.y.norm_sqr() + self.z.norm_sqr()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self::new(self.x * c, self.y * c, self.z * c)
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::new(self.x + other.x, self.y + other.y, self.z + other.z)
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self::new(self.x - other.x, self.y - other.y, self.z - other.z)
    }

    pub fn conj(&self) -> Self {
        Self::new(self.x.conj(), self.y.conj(), self.z.conj())
    }
}

/// A real 3x3 matrix, used for the direction rotations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RMat3(pub [[f64; 3]; 3]);

impl RMat3 {
    pub fn identity() -> Self {
        Self([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]])
    }

    pub fn mul_real(&self, v: [f64; 3]) -> [f64; 3] {
        let m = &self.0;
        [
            m[0][0] * v[0] + m[0][1] * v[1] + m[0][2] * v[2],
            m[1][0] * v[0] + m[1][1] * v[1] + m[1][2] * v[2],
            m[2][0] * v[0] + m[2][1] * v[1] + m[2][2] * v[2],
        ]
    }

    pub fn mul_cvec(&self, v: &CVec3) -> CVec3 {
        let m = &self.0;
        CVec3::new(
            v.x * m[0][0] + v.y * m[0][1] + v.z * m[0][2],
            v.x * m[1][0] + v.y * m[1][1] + v.z * m[1][2],
            v.x * m[2][0] + v.y * m[2][1] + v.z * m[2][2],
        )
    }

    pub fn transpose(&self) -> Self {
        let m = &self.0;
        Self([
            [m[0][0], m[1][0], m[2][0]],
            [m[0][1], m[1][1], m[2][1]],
            [m[0][2], m[1][2], m[2][2]],
        ])
    }

    pub fn mul(&self, other: &Self) -> Self {
        let a = &self.0;
        let b = &other.0;
        let mut out = [[0.0; 3]; 3];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, entry) in row.iter_mut().enumerate() {
                *entry = a[i][0] * b[0][j] + a[i][1] * b[1][j] + a[i][2] * b[2][j];
            }
        }
        Self(out)
    }

    pub fn det(&self) -> f64 {
        let m = &self.0;
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    }
}

/// A complex 3x3 matrix intended to be Hermitian, with rows and columns
/// indexed by (x, y, z).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Herm3(pub [[Complex64; 3]; 3]);

impl Herm3 {
    pub fn zero() -> Self {
        Self([[Complex64::ZERO; 3]; 3])
    }

    pub fn identity() -> Self {
        let mut m = Self::zero();
        for i in 0..3 {
            m.0[i][i] = Complex64::ONE;
        }
        m
    }

    pub fn from_diag(d: [f64; 3]) -> Self {
        let mut m = Self::zero();
        for (i, v) in d.iter().enumerate() {
            m.0[i][i] = (*v).into();
        }
        m
    }

    /// Outer product `|v><v|` (entry (m, n) is `v_m conj(v_n)`).
    pub fn outer(v: &CVec3) -> Self {
        let c = v.components();
        let mut m = Self::zero();
        for i in 0..3 {
            for j in 0..3 {
                m.0[i][j] = c[i] * c[j].conj();
            }
        }
        m
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.0[row][col]
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut m = Self::zero();
        for i in 0..3 {
            for j in 0..3 {
                m.0[i][j] = self.0[i][j] + other.0[i][j];
            }
        }
        m
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut m = Self::zero();
        for i in 0..3 {
            for j in 0..3 {
                m.0[i][j] = self.0[i][j] - other.0[i][j];
            }
        }
        m
    }

    pub fn scale(&self, c: f64) -> Self {
        let mut m = Self::zero();
        for i in 0..3 {
            for j in 0..3 {
                m.0[i][j] = self.0[i][j] * c;
            }
        }
        m
    }

    pub fn matmul(&self, other: &Self) -> Self {
        let mut m = Self::zero();
        for i in 0..3 {
            for j in 0..3 {
                let mut s = Complex64::ZERO;
                for (k, row) in other.0.iter().enumerate() {
                    s += self.0[i][k] * row[j];
                }
                m.0[i][j] = s;
            }
        }
        m
    }

    pub fn dagger(&self) -> Self {
        let mut m = Self::zero();
        for i in 0..3 {
            for j in 0..3 {
                m.0[i][j] = self.0[j][i].conj();
            }
        }
        m
    }

    pub fn trace(&self) -> Complex64 {
        self.0[0][0] + self.0[1][1] + self.0[2][2]
    }

    pub fn conj(&self) -> Self {
        let mut m = Self::zero();
        for i in 0..3 {
            for j in 0..3 {
                m.0[i][j] = self.0[i][j].conj();
            }
        }
        m
    }

    pub fn det(&self) -> Complex64 {
        let m = &self.0;
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    }

    /// Largest entrywise deviation from `M = M^dag`.
    pub fn hermiticity_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                worst = worst.max((self.0[i][j] - self.0[j][i].conj()).norm());
            }
        }
        worst
    }

    pub fn max_abs_entry(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for row in &self.0 {
            for e in row {
                worst = worst.max(e.norm());
            }
        }
        worst
    }

    fn check_hermitian(&self) -> Result<()> {
        let defect = self.hermiticity_defect();
        if defect > HERMITICITY_TOL {
            return Err(Error::NotHermitian {
                deviation: defect,
                tolerance: HERMITICITY_TOL,
            });
        }
        Ok(())
    }
}

/// Eigenvalues (descending) and matching orthonormal eigenvectors of a
/// Hermitian 3x3 matrix.
#[derive(Debug, Clone)]
pub struct Eigensystem {
    pub values: [f64; 3],
    pub vectors: [CVec3; 3],
}

/// Eigendecomposition by cyclic complex Jacobi rotations.
///
/// The closed-form cubic is fragile near degeneracies, so the sweep iterates
/// until the off-diagonal Frobenius mass drops below `1e-14` relative to the
/// matrix scale.
pub fn eig_herm3(m: &Herm3) -> Result<Eigensystem> {
    m.check_hermitian()?;
    // Symmetrize so rounding-level defects cannot keep the sweep alive.
    let mut a = m.add(&m.dagger()).scale(0.5);
    let mut v = Herm3::identity();
    let scale = a.max_abs_entry().max(1.0);
    let tol = JACOBI_TOL * scale;

    for _ in 0..64 {
        let off = (a.0[0][1].norm_sqr() + a.0[0][2].norm_sqr() + a.0[1][2].norm_sqr()).sqrt();
        if off < tol {
            break;
        }
        for (p, q) in [(0usize, 1usize), (0, 2), (1, 2)] {
            jacobi_rotate(&mut a, &mut v, p, q);
        }
    }

    let mut order = [0usize, 1, 2];
    order.sort_by(|&i, &j| a.0[j][j].re.partial_cmp(&a.0[i][i].re).unwrap());

    let vector = |col: usize| CVec3::new(v.0[0][col], v.0[1][col], v.0[2][col]);
    Ok(Eigensystem {
        values: [
            a.0[order[0]][order[0]].re,
            a.0[order[1]][order[1]].re,
            a.0[order[2]][order[2]].re,
        ],
        vectors: [vector(order[0]), vector(order[1]), vector(order[2])],
    })
}

/// One complex Jacobi rotation zeroing entry (p, q); accumulates into `v`.
fn jacobi_rotate(a: &mut Herm3, v: &mut Herm3, p: usize, q: usize) {
    let apq = a.0[p][q];
    let r = apq.norm();
    if r == 0.0 {
        return;
    }
    let phase = apq / r;
    let tau = (a.0[p][p].re - a.0[q][q].re) / (2.0 * r);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;

    // G differs from the identity only in rows/columns p and q:
    //   G[p][p] = c, G[p][q] = -s e^{i phi}, G[q][p] = s e^{-i phi}, G[q][q] = c.
    let gpq = -phase * s;
    let gqp = phase.conj() * s;

    // a <- G^dag a G
    let mut tmp = *a;
    for k in 0..3 {
        tmp.0[p][k] = a.0[p][k] * c + a.0[q][k] * gqp.conj();
        tmp.0[q][k] = a.0[p][k] * gpq.conj() + a.0[q][k] * c;
    }
    let mut next = tmp;
    for k in 0..3 {
        next.0[k][p] = tmp.0[k][p] * c + tmp.0[k][q] * gqp;
        next.0[k][q] = tmp.0[k][p] * gpq + tmp.0[k][q] * c;
    }
    next.0[p][q] = Complex64::ZERO;
    next.0[q][p] = Complex64::ZERO;
    next.0[p][p] = next.0[p][p].re.into();
    next.0[q][q] = next.0[q][q].re.into();
    *a = next;

    // v <- v G
    let mut vnext = *v;
    for k in 0..3 {
        vnext.0[k][p] = v.0[k][p] * c + v.0[k][q] * gqp;
        vnext.0[k][q] = v.0[k][p] * gpq + v.0[k][q] * c;
    }
    *v = vnext;
}

/// Trace norm of the difference, `tr |A - B| = sum |lambda_i(A - B)|`.
pub fn trace_norm_diff(a: &Herm3, b: &Herm3) -> Result<f64> {
    a.check_hermitian()?;
    b.check_hermitian()?;
    let eig = eig_herm3(&a.sub(b))?;
    Ok(eig.values.iter().map(|l| l.abs()).sum())
}

/// The matrix rotating the standard direction (0, 0, 1) to the unit vector
/// with polar angles `(theta, phi)`:
///
/// ```text
/// [ cos t cos p   -sin p   cos p sin t ]
/// [ cos t sin p    cos p   sin p sin t ]
/// [   -sin t        0         cos t    ]
/// ```
pub fn rotation_to(theta: f64, phi: f64) -> RMat3 {
    let (st, ct) = theta.sin_cos();
    let (sp, cp) = phi.sin_cos();
    RMat3([
        [ct * cp, -sp, cp * st],
        [ct * sp, cp, sp * st],
        [-st, 0.0, ct],
    ])
}

/// Standard right/left circular polarization vectors `(1, +-i, 0)/sqrt(2)`.
pub fn standard_helicity(sign: i8) -> CVec3 {
    let inv = std::f64::consts::FRAC_1_SQRT_2;
    CVec3::new(
        Complex64::new(inv, 0.0),
        Complex64::new(0.0, f64::from(sign.signum()) * inv),
        Complex64::ZERO,
    )
}

/// Helicity vectors at the direction `(theta, phi)`: the rotated standard
/// circular polarization vectors. Both are unit, mutually orthogonal, and
/// orthogonal to the direction itself.
pub fn helicity_vectors(theta: f64, phi: f64) -> (CVec3, CVec3) {
    let r = rotation_to(theta, phi);
    (
        r.mul_cvec(&standard_helicity(1)),
        r.mul_cvec(&standard_helicity(-1)),
    )
}

/// A null four-vector `(k0, k)` with `k0 = |k|`, held as a magnitude and the
/// polar angles of its direction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NullWaveVector {
    magnitude: f64,
    theta: f64,
    phi: f64,
}

impl NullWaveVector {
    /// `theta` must lie in `[0, pi)`; `phi` is wrapped into `[0, 2 pi)`.
    pub fn new(magnitude: f64, theta: f64, phi: f64) -> Result<Self> {
        if !(magnitude.is_finite() && magnitude > 0.0) {
            return Err(Error::InvalidMagnitude(magnitude));
        }
        if !(0.0..PI).contains(&theta) {
            return Err(Error::InvalidPolarAngle(theta));
        }
        Ok(Self {
            magnitude,
            theta,
            phi: phi.rem_euclid(2.0 * PI),
        })
    }

    /// Build from cylindrical momentum components; requires `k_z > 0`.
    pub fn from_cylindrical(k_z: f64, k_r: f64, phi: f64) -> Result<Self> {
        Self::new((k_z * k_z + k_r * k_r).sqrt(), k_r.atan2(k_z), phi)
    }

    pub fn magnitude(&self) -> f64 {
        self.magnitude
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    /// Cartesian unit direction.
    pub fn direction(&self) -> [f64; 3] {
        let (st, ct) = self.theta.sin_cos();
        let (sp, cp) = self.phi.sin_cos();
        [st * cp, st * sp, ct]
    }

    /// The four components `(k0, kx, ky, kz)`.
    pub fn four_vector(&self) -> [f64; 4] {
        let d = self.direction();
        [
            self.magnitude,
            self.magnitude * d[0],
            self.magnitude * d[1],
            self.magnitude * d[2],
        ]
    }
}

/// A boost along the z-axis with velocity `v`, `|v| < 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoostParameter {
    v: f64,
}

impl BoostParameter {
    pub fn new(v: f64) -> Result<Self> {
        if !(v.is_finite() && v.abs() < 1.0) {
            return Err(Error::InvalidVelocity(v));
        }
        Ok(Self { v })
    }

    pub fn velocity(&self) -> f64 {
        self.v
    }

    pub fn gamma(&self) -> f64 {
        1.0 / (1.0 - self.v * self.v).sqrt()
    }

    /// The Doppler factor `sqrt((1 + v) / (1 - v))`.
    pub fn doppler(&self) -> f64 {
        ((1.0 + self.v) / (1.0 - self.v)).sqrt()
    }

    pub fn inverse(&self) -> Self {
        Self { v: -self.v }
    }

    /// Relativistic velocity addition: the single boost equivalent to `self`
    /// followed by `other`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        Self::new((self.v + other.v) / (1.0 + self.v * other.v))
    }
}

/// Boost a null wave vector along z. The magnitude picks up
/// `gamma (1 - v cos theta)`, the tilt transforms by the aberration formula,
/// and the azimuth is untouched.
pub fn boost_null(k: &NullWaveVector, b: &BoostParameter) -> NullWaveVector {
    let v = b.velocity();
    let gamma = b.gamma();
    let (st, ct) = k.theta().sin_cos();
    let denom = 1.0 - v * ct;
    let magnitude = gamma * denom * k.magnitude();
    let theta = boosted_tilt(st, ct, v, gamma, denom);
    NullWaveVector {
        magnitude,
        theta,
        phi: k.phi(),
    }
}

/// Aberration of the tilt angle alone; shared with the classical module.
pub(crate) fn boosted_tilt(sin_t: f64, cos_t: f64, v: f64, gamma: f64, denom: f64) -> f64 {
    // sin and cos of the boosted tilt satisfy sin^2 + cos^2 = 1 identically,
    // so atan2 returns the exact angle with the right quadrant.
    let sin_new = sin_t / (gamma * denom);
    let cos_new = (cos_t - v) / denom;
    sin_new.atan2(cos_new)
}
