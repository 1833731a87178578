//! Solver core for the discrete condensing aggregation equation: the
//! Oort-Hulst-Safronov growth term coupled with inverse aggregation, on a
//! uniform grid of cells of width ε.
//!
//! The crate is `no_std` and needs only `alloc`.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod analysis;
pub mod error;
pub mod exact;
pub mod grid;
pub mod integrator;
pub mod kernel;
pub mod quad;
pub mod rhs;
pub mod simulation;
pub mod state;

pub use error::{Error, Result};
pub use exact::ExactCase;
pub use grid::Grid;
pub use integrator::{integrate, IntegratorConfig, NegativityPolicy, StepStats};
pub use kernel::{DiscreteKernel, DiscretizationRule, KernelFamily, KernelSpec};
pub use rhs::{eval_rhs, mass_defect_rate, weak_form_rate};
pub use simulation::{simulate, SimulationResult, SimulationSetup};
pub use state::{DiscreteState, InitialProfile, MomentSeries, StepFunction};
