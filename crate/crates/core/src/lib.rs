//! Particle creation by an accelerated mirror in 1+1 dimensions.
//!
//! Bogoliubov coefficients for perfectly reflecting and semitransparent
//! mirrors on an exponential-then-inertial trajectory, the resulting spectra,
//! and a Bose-Einstein/Fermi-Dirac classifier.

pub mod bogoliubov;
pub mod error;
pub mod quadrature;
pub mod scattering;
pub mod special;
pub mod spectrum;
pub mod trajectory;
pub mod verification;

pub use error::{DceError, Result};
pub use quadrature::{QuadratureConfig, QuadratureResult, TailModel};
pub use scattering::ScatteringParams;
pub use trajectory::MirrorTrajectory;
