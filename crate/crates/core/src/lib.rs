//! Rotation-equivariant planar control environments, batch data collection,
//! trajectory twinning, and goal-conditioned policy learning.
//!
//! Everything is f64 and deterministic: all randomness flows through
//! [`rng::stream_rng`], so a fixed seed reproduces datasets, trained weights,
//! and evaluation results bitwise.

pub mod augment;
pub mod collect;
pub mod env;
pub mod error;
pub mod evaluate;
pub mod learn;
pub mod nnmath;
pub mod rng;
pub mod vec2;

pub use error::{Error, Result};
pub use vec2::Vec2;
