//! Weighted no-regret dynamics for convex-concave games and the
//! projection-free Frank-Wolfe methods they induce.

// `!(x > 0.0)` is used on purpose throughout: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod fw;
pub mod game;
pub mod harness;
pub mod learners;
pub mod objective;
pub mod payoff;
pub mod point;
pub mod sets;
pub mod weights;

pub use error::{Error, Result};
pub use point::{weighted_average, Point};
