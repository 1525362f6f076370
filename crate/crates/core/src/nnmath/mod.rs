//! Dense-network numerics: MLP forward/backward, squared-error losses,
//! Adam updates, and finite-difference gradient verification.
//!
//! Everything is f64 and fully deterministic: the same seed produces
//! bitwise-identical parameters, and updates are pure functions of
//! (params, grads, state). Hidden layers use tanh, the output layer is
//! linear; action clamping happens downstream in the environment.

mod adam;
mod check;
mod mlp;

pub use adam::AdamState;
pub use check::{grad_check, mse, mse_grad};
pub use mlp::{GradBundle, MlpParams, Workspace};
