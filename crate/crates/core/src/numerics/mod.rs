//! Exact arithmetic: rationals, linear systems and linear programs.

mod linalg;
mod lp;
mod rational;

pub use linalg::{solve_linear_system, LinearSolution};
pub use lp::{lp_solve, Constraint, LinearProgram, LpOutcome, Objective, Relation, Sense};
pub use rational::{denominator_lcm, ExtRational, ParseRationalError, Rational};

/// Parses a comma-separated list of extended rationals, e.g. `1/2,-inf,3`.
pub fn parse_ext_vector(s: &str) -> Result<Vec<ExtRational>, ParseRationalError> {
    s.split(',').map(|p| p.trim().parse()).collect()
}
