//! Entanglement dynamics of two qubits coupled by an anisotropic Heisenberg XY
//! interaction and relaxing into a zero- or finite-temperature bath.
//!
//! The crate computes concurrence trajectories and steady states three ways
//! that check one another: closed-form expressions ([`analytic`]), fixed-step
//! integration of the master equation ([`dynamics`]), and a direct solve for
//! the null space of the Liouvillian ([`dynamics::steady_state_nullspace`]).
//!
//! ```
//! use xyent::analytic::steady_concurrence_t0;
//! use xyent::dynamics::steady_state_nullspace;
//! use xyent::entanglement::concurrence_x_form;
//! use xyent::model::ModelParams;
//!
//! let p = ModelParams::figure1();
//! let closed_form = steady_concurrence_t0(&p)?;
//! let numeric = concurrence_x_form(&steady_state_nullspace(&p)?.rho)?.c;
//! assert!((closed_form - numeric).abs() < 1e-12);
//! assert!((closed_form - 0.09309).abs() < 1e-5);
//! # Ok::<(), xyent::Error>(())
//! ```

pub mod analytic;
pub mod dynamics;
pub mod entanglement;
mod error;
pub mod io;
pub mod model;
pub mod qmath;
pub mod sweep;

pub use error::{Error, Result, StateInvariant};

// Compile the guide's code listings as doctests.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    pub struct Introduction;
    #[doc = include_str!("../../../book/src/model.md")]
    pub struct Model;
    #[doc = include_str!("../../../book/src/concurrence.md")]
    pub struct Concurrence;
    #[doc = include_str!("../../../book/src/dynamics.md")]
    pub struct Dynamics;
    #[doc = include_str!("../../../book/src/steady_states.md")]
    pub struct SteadyStates;
    #[doc = include_str!("../../../book/src/optimum.md")]
    pub struct Optimum;
    #[doc = include_str!("../../../book/src/finite_temperature.md")]
    pub struct FiniteTemperature;
    #[doc = include_str!("../../../book/src/coherence.md")]
    pub struct Coherence;
}
