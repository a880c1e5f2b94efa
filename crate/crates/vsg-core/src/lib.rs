//! Numerical toolkit for complex-coefficient voltage-loop analysis of
//! grid-forming voltage-source inverters.
//!
//! The crate is organized bottom-up:
//!
//! - [`cplx`]: complex-coefficient polynomials, rational transfer functions,
//!   state-space realizations and their real dq embeddings, pole geometry.
//! - [`params`]: circuit and controller parameter records (per-unit).
//! - [`model`]: loop transfer functions, steady state, and power coupling of
//!   the single-machine-infinite-bus converter model.
//! - [`ssm`]: full small-signal state-space assembly around an operating point.
//! - [`design`]: stability margin, pole placement, and gain optimization.
//! - [`analysis`]: step metrics, root loci, Nyquist margins, closed-loop
//!   frequency responses, and mode identification.
//! - [`sim`]: nonlinear time-domain simulator with event scheduling.
//! - [`ident`]: multi-tone frequency-response identification on the simulator.
//! - [`accept`]: end-to-end reproduction checks used by the test suite and CLI.

pub mod accept;
pub mod analysis;
pub mod cplx;
pub mod design;
pub mod error;
pub mod ident;
pub mod model;
pub mod params;
pub mod sim;
pub mod ssm;

pub use error::{Error, Result};
