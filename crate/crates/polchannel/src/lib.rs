//! Polarized light in free space as a noisy quantum channel.
//!
//! A collimated beam is never a single plane wave: diffraction spreads its
//! wave vectors over a small cone, and a fixed polarization analyzer cannot
//! be perpendicular to all of them at once. This crate quantifies what that
//! costs, classically and for single photons, and how the cost transforms
//! for an observer moving along the beam axis.
//!
//! - [`beam`]: classical Fourier-component fluxes, apparent-angle
//!   distortion, small-tilt losses, Doppler aberration, profile averages.
//! - [`packet`]: one-photon wave packets on momentum quadrature grids that
//!   embed the invariant measure, with Gaussian amplitudes and per-node
//!   helicity polarization fields.
//! - [`povm`]: the transversal-direction POVM, the effective reduced
//!   polarization density matrix, state reconstruction from POVM
//!   expectations, Helstrom error, overlap, and entropy diagnostics.
//! - [`boost`]: the moving observer's reduced matrix by two equivalent
//!   routes, the Doppler scaling of the error probability, and the
//!   complete-positivity witness.
//! - [`mc`]: a grid-independent Monte Carlo estimator used to cross-check
//!   the quadrature.
//! - [`linalg`]: the small dense complex kernel everything rests on.
//!
//! All types are immutable values and all operations are pure, so anything
//! here can be used from concurrent code freely.

pub mod beam;
pub mod boost;
pub mod config;
pub mod error;
pub mod linalg;
pub mod mc;
pub mod packet;
pub mod povm;
pub mod quadrature;

pub use error::{Error, Result};
pub use linalg::{BoostParameter, CVec3, Herm3, NullWaveVector};
pub use packet::{GridSpec, HelicitySign, MomentumGrid, PhotonWavePacket};
pub use povm::{Axis, PolarizationMatrix};
