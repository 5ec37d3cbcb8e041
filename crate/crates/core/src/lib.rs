//! Magnetic Berezin transforms on the complex hyperbolic ball.
//!
//! The crate evaluates the reproducing kernels of the Landau-level
//! eigenspaces of the magnetic Schrödinger operator on the unit ball of
//! `Cⁿ`, the associated Berezin kernels, and the closed-form spectral
//! multipliers expressing each Berezin transform as a function of the
//! Laplace-Beltrami operator. Every closed form has a quadrature
//! counterpart so the two can be compared.

pub mod berezin;
pub mod error;
pub mod fourier_jacobi;
pub mod geometry;
pub mod identities;
pub mod operator;
pub mod quadrature;
pub mod special;
mod twofold;

pub use error::{Error, Result};
pub use geometry::BallPoint;
pub use quadrature::QuadratureSpec;
pub use special::{ComplexValue, SeriesResult};
