//! Game generators for the hardness constructions, plus the built-in
//! example games.

mod builtin;
mod counter;
mod ham;
mod sat;
mod sqrt;
mod wrap;

use std::collections::HashMap;

use thiserror::Error;

use crate::game::{is_turn_based, Game, InvalidGame, StationaryProfile};
use crate::numerics::Rational;

pub use builtin::{builtin_example, BUILTIN_NAMES};
pub use counter::{
    check_counter_game, gen_counter_game, simulate_safe_profile, CounterMachine,
    CounterRole, Instruction, MachineConfig, MachineStep, SafeProfileTrace, COUNTER_PLAYER_NAMES,
};
pub use ham::{gen_hamiltonian_game, ham_thresholds};
pub use sat::{gen_sat_game, CnfFormula, Literal};
pub use sqrt::{gen_sqrt_gadget, gen_sqrtsum_game, SqrtGadget, SqrtSumInstance};
pub use wrap::{wrap_with_no_ne_gadget, NoNeGadget};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReductionError {
    #[error(transparent)]
    Game(#[from] InvalidGame),
    #[error("vertex `{0}` has no outgoing edge")]
    DeadEnd(String),
    #[error("parameter {0} must lie strictly between 0 and 1")]
    ProbabilityRange(Rational),
    #[error("invalid formula: {0}")]
    Formula(String),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("invalid counter machine: {0}")]
    Machine(String),
    #[error("the machine halts after {0} steps")]
    Halted(usize),
    #[error("state name `{0}` is used by both the game and the gadget")]
    NameClash(String),
    #[error("the game has no initial state")]
    NoInitial,
    #[error("unknown example `{0}`")]
    UnknownExample(String),
    #[error("{0}")]
    Invalid(String),
}

/// A stationary profile for a turn-based game given by the controllers'
/// distributions over successor labels. States not listed get the
/// controller's first action with probability one.
pub(crate) fn turn_profile(g: &Game, choices: &HashMap<String, Vec<(String, Rational)>>) -> StationaryProfile {
    let ctl = is_turn_based(g).expect("turn-based game");
    let mut sigma = StationaryProfile::from_positional(g, &crate::game::PositionalProfile::first(g));
    for (name, dist) in choices {
        let s = g.id(name).unwrap_or_else(|| panic!("no state `{name}`"));
        let p = ctl[s];
        let mut d = vec![Rational::zero(); g.num_actions(s, p)];
        for (label, q) in dist {
            let a = g
                .action_index(s, p, label)
                .unwrap_or_else(|| panic!("state `{name}` has no action `{label}`"));
            d[a] = q.clone();
        }
        sigma.set(s, p, d);
    }
    sigma
}
