//! Point vortices on the flat Klein bottle.
//!
//! The bottle is modelled by the square chart `[-π/2, π/2)²` with its
//! orientable double cover, the `2π × π` torus. Energies are written with
//! Jacobi theta functions ([`theta`]), velocities follow from Kirchhoff's
//! equations ([`dynamics`]), trajectories are integrated on the cover
//! ([`integrator`]), and the two-vortex problem is reduced by its horizontal
//! symmetry ([`reduction`]).

pub mod dynamics;
pub mod error;
pub mod hamiltonian;
pub mod integrator;
pub mod reduction;
pub mod roots;
pub mod state;
pub mod theta;

pub use num_complex::Complex64;

pub use error::{CollisionKind, Error, Result};
pub use state::{KleinState, TorusState, Vortex};
