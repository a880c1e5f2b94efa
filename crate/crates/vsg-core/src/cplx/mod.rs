//! Complex-coefficient LTI mathematics.
//!
//! Complex-coefficient systems describe dq-frame dynamics with a single
//! complex signal per quantity. Unlike real-coefficient systems their poles
//! need not come in conjugate pairs, so every routine here treats positive
//! and negative frequencies as distinct.

pub mod geometry;
pub mod poly;
pub mod rational;
pub mod ss;

pub use geometry::PoleGeometry;
pub use poly::{dominant_pair, poles_quadratic, CPoly};
pub use rational::CRational;
pub use ss::{CStateSpace, RealStateSpace};
