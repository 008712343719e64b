//! Error type shared across the crate.

use crate::povm::Axis;
use thiserror::Error;

/// Everything that can go wrong when building states or evaluating channels.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// A matrix handed to an eigensolver or norm failed the Hermiticity check.
    #[error(
        "matrix is not Hermitian: max |M - M^dag| entry {deviation:.3e} exceeds {tolerance:.3e}"
    )]
    NotHermitian { deviation: f64, tolerance: f64 },

    /// Boost velocities must lie strictly inside (-1, 1).
    #[error("velocity {0} is outside the open interval (-1, 1)")]
    InvalidVelocity(f64),

    /// Polar angles are restricted to [0, pi); the antipode is rejected.
    #[error("polar angle {0} is outside [0, pi)")]
    InvalidPolarAngle(f64),

    /// Wave-vector magnitudes must be positive and finite.
    #[error("wave-vector magnitude {0} must be positive and finite")]
    InvalidMagnitude(f64),

    /// The requested truncation would let the axial momentum reach zero.
    #[error(
        "grid underflow: k_a = {k_a} minus truncation half-width {half_width} is not positive"
    )]
    GridUnderflow { k_a: f64, half_width: f64 },

    /// A grid spec had a nonpositive count or width.
    #[error("invalid grid spec: {0}")]
    InvalidGridSpec(String),

    /// A beam profile whose quadrature weights do not sum to one.
    #[error("beam profile is not normalized: total weight {0}")]
    ProfileNotNormalized(f64),

    /// The closest transversal direction is undefined when the axis is
    /// parallel to the propagation direction.
    #[error(
        "degenerate direction: axis {axis} is parallel to k (transversal weight {weight:.3e})"
    )]
    DegenerateDirection { axis: Axis, weight: f64 },

    /// Off-diagonal reconstruction needs two distinct axes.
    #[error("off-diagonal reconstruction requires two distinct axes, got {0} twice")]
    SameAxis(Axis),

    /// A matrix that should have been a density matrix was not.
    #[error("not a density matrix: {0}")]
    NotDensityMatrix(String),

    /// Boost channels are defined only for helicity eigenstate packets.
    #[error("unsupported polarization: boosts require a helicity eigenstate packet")]
    UnsupportedPolarization,

    /// Amplitude pull-back needs a closed-form profile, not bare samples.
    #[error("unsupported amplitude: boost regridding requires a closed-form profile")]
    UnsupportedAmplitude,

    /// Operations on packet pairs require matching grids and amplitudes.
    #[error("packets are not a matched pair: {0}")]
    MismatchedPair(String),
}

pub type Result<T> = std::result::Result<T, Error>;
