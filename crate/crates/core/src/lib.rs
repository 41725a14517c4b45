//! Exact algorithms for Nash equilibria in multi-player concurrent games with
//! limit-average (mean-payoff) objectives.

pub mod numerics;

pub use numerics::{ExtRational, Rational};
pub mod game;
pub mod graph;
pub mod zerosum;
pub mod mppath;
pub mod reductions;
pub mod posne;
pub mod purene;
pub mod statne;
