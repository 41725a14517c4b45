//! Concurrent multi-player games with per-state rewards.
//!
//! A game has `k` players and finitely many named states. At every state each
//! player has a non-empty list of legal actions, and a transition is given for
//! every legal action profile. Profiles are stored as vectors of action
//! indices, one per player; internally they are also encoded as mixed-radix
//! integers with player 0 most significant, so iterating codes in order visits
//! profiles lexicographically.

mod builder;
mod memory;
mod profile;

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::numerics::{ExtRational, Rational};

pub use builder::{sparse_rewards, GameBuilder, TurnBasedBuilder, IDLE};
pub use memory::{memory_product, product_state_name, MemoryStructure};
pub use profile::{
    lasso_of, lasso_payoff, Lasso, PositionalProfile, ProfileError, StationaryProfile,
};

pub type StateId = usize;
pub type Player = usize;
/// One action index per player.
pub type ActionProfile = Vec<usize>;
/// Per-player bounds; `-inf` / `+inf` mean unconstrained.
pub type ThresholdVector = Vec<ExtRational>;

/// Whether `x <= v <= y` componentwise.
pub fn in_box(x: &[ExtRational], v: &[Rational], y: &[ExtRational]) -> bool {
    v.iter()
        .enumerate()
        .all(|(i, vi)| x[i].le_finite(vi) && y[i].ge_finite(vi))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StateDesc {
    pub name: String,
    pub actions: Vec<Vec<String>>,
    pub rewards: Vec<Rational>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransitionDesc {
    pub from: String,
    pub profile: Vec<String>,
    pub to: String,
}

/// The on-disk form of a game. It need not be valid; see [`validate_game`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GameDescription {
    pub players: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initial: Option<String>,
    pub states: Vec<StateDesc>,
    pub transitions: Vec<TransitionDesc>,
}

/// A structural defect in a game description.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Violation {
    #[error("a game needs at least one player")]
    NoPlayers,
    #[error("a game needs at least one state")]
    NoStates,
    #[error("state `{0}` is declared twice")]
    DuplicateState(String),
    #[error("state `{state}`: action lists given for {found} players, expected {expected} (arity)")]
    ActionArity { state: String, found: usize, expected: usize },
    #[error("state `{state}`: player {player} has an empty action set")]
    EmptyActions { state: String, player: usize },
    #[error("state `{state}`: player {player} lists action `{action}` twice")]
    DuplicateAction { state: String, player: usize, action: String },
    #[error("state `{state}`: {found} rewards for {expected} players (reward arity)")]
    RewardArity { state: String, found: usize, expected: usize },
    #[error("transition refers to unknown state `{0}`")]
    UnknownState(String),
    #[error("transition from `{state}`: profile {profile:?} has the wrong arity")]
    ProfileArity { state: String, profile: Vec<String> },
    #[error("transition from `{state}` on illegal profile {profile:?}")]
    IllegalProfile { state: String, profile: Vec<String> },
    #[error("transition from `{state}` on profile {profile:?} is given twice")]
    DuplicateTransition { state: String, profile: Vec<String> },
    #[error("state `{state}`: undefined legal profile {profile:?}")]
    UndefinedProfile { state: String, profile: Vec<String> },
    #[error("unknown initial state `{0}`")]
    UnknownInitial(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub struct InvalidGame(pub Vec<Violation>);

impl fmt::Display for InvalidGame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid game:")?;
        for v in &self.0 {
            write!(f, "\n  {v}")?;
        }
        Ok(())
    }
}

/// Lists every structural defect of a description, in a stable order.
pub fn validate_game(desc: &GameDescription) -> Vec<Violation> {
    match Game::from_description(desc) {
        Ok(_) => Vec::new(),
        Err(InvalidGame(v)) => v,
    }
}

#[derive(Debug, Clone)]
pub struct Game {
    players: usize,
    states: Vec<StateDesc>,
    // successor per state, indexed by profile code
    succ: Vec<Vec<StateId>>,
    initial: Option<StateId>,
    index: HashMap<String, StateId>,
}

impl PartialEq for Game {
    fn eq(&self, other: &Self) -> bool {
        self.players == other.players
            && self.states == other.states
            && self.succ == other.succ
            && self.initial == other.initial
    }
}

impl Eq for Game {}

impl Game {
    pub fn from_description(desc: &GameDescription) -> Result<Game, InvalidGame> {
        let mut errs = Vec::new();
        let k = desc.players;
        if k == 0 {
            errs.push(Violation::NoPlayers);
        }
        if desc.states.is_empty() {
            errs.push(Violation::NoStates);
        }
        let mut index = HashMap::new();
        for (i, s) in desc.states.iter().enumerate() {
            if index.insert(s.name.clone(), i).is_some() {
                errs.push(Violation::DuplicateState(s.name.clone()));
            }
            if s.actions.len() != k {
                errs.push(Violation::ActionArity {
                    state: s.name.clone(),
                    found: s.actions.len(),
                    expected: k,
                });
            }
            for (p, acts) in s.actions.iter().enumerate() {
                if acts.is_empty() {
                    errs.push(Violation::EmptyActions { state: s.name.clone(), player: p });
                }
                for (j, a) in acts.iter().enumerate() {
                    if acts[..j].contains(a) {
                        errs.push(Violation::DuplicateAction {
                            state: s.name.clone(),
                            player: p,
                            action: a.clone(),
                        });
                    }
                }
            }
            if s.rewards.len() != k {
                errs.push(Violation::RewardArity {
                    state: s.name.clone(),
                    found: s.rewards.len(),
                    expected: k,
                });
            }
        }
        if !errs.is_empty() {
            return Err(InvalidGame(errs));
        }

        let proto = Game {
            players: k,
            states: desc.states.clone(),
            succ: Vec::new(),
            initial: None,
            index,
        };
        let mut succ: Vec<Vec<Option<StateId>>> =
            (0..proto.num_states()).map(|s| vec![None; proto.profile_count(s)]).collect();

        for t in &desc.transitions {
            let Some(&from) = proto.index.get(&t.from) else {
                errs.push(Violation::UnknownState(t.from.clone()));
                continue;
            };
            let Some(&to) = proto.index.get(&t.to) else {
                errs.push(Violation::UnknownState(t.to.clone()));
                continue;
            };
            if t.profile.len() != k {
                errs.push(Violation::ProfileArity { state: t.from.clone(), profile: t.profile.clone() });
                continue;
            }
            let idx: Option<Vec<usize>> = t
                .profile
                .iter()
                .enumerate()
                .map(|(p, a)| proto.action_index(from, p, a))
                .collect();
            let Some(idx) = idx else {
                errs.push(Violation::IllegalProfile { state: t.from.clone(), profile: t.profile.clone() });
                continue;
            };
            let code = proto.encode(from, &idx);
            if succ[from][code].replace(to).is_some() {
                errs.push(Violation::DuplicateTransition {
                    state: t.from.clone(),
                    profile: t.profile.clone(),
                });
            }
        }
        for (s, row) in succ.iter().enumerate() {
            for (code, t) in row.iter().enumerate() {
                if t.is_none() {
                    errs.push(Violation::UndefinedProfile {
                        state: proto.name(s).to_string(),
                        profile: proto.profile_labels(s, &proto.decode(s, code)),
                    });
                }
            }
        }
        let initial = match &desc.initial {
            None => None,
            Some(n) => match proto.index.get(n) {
                Some(&s) => Some(s),
                None => {
                    errs.push(Violation::UnknownInitial(n.clone()));
                    None
                }
            },
        };
        if !errs.is_empty() {
            return Err(InvalidGame(errs));
        }
        Ok(Game {
            succ: succ.into_iter().map(|r| r.into_iter().map(Option::unwrap).collect()).collect(),
            initial,
            ..proto
        })
    }

    /// Canonical description: states in declaration order, transitions per
    /// state in lexicographic profile order.
    pub fn to_description(&self) -> GameDescription {
        let mut transitions = Vec::new();
        for s in 0..self.num_states() {
            for code in 0..self.profile_count(s) {
                transitions.push(TransitionDesc {
                    from: self.name(s).to_string(),
                    profile: self.profile_labels(s, &self.decode(s, code)),
                    to: self.name(self.succ[s][code]).to_string(),
                });
            }
        }
        GameDescription {
            players: self.players,
            initial: self.initial.map(|s| self.name(s).to_string()),
            states: self.states.clone(),
            transitions,
        }
    }

    pub fn players(&self) -> usize {
        self.players
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn state(&self, s: StateId) -> &StateDesc {
        &self.states[s]
    }

    pub fn name(&self, s: StateId) -> &str {
        &self.states[s].name
    }

    pub fn id(&self, name: &str) -> Option<StateId> {
        self.index.get(name).copied()
    }

    pub fn initial(&self) -> Option<StateId> {
        self.initial
    }

    pub fn with_initial(&self, s: StateId) -> Game {
        Game { initial: Some(s), ..self.clone() }
    }

    pub fn actions(&self, s: StateId, p: Player) -> &[String] {
        &self.states[s].actions[p]
    }

    pub fn num_actions(&self, s: StateId, p: Player) -> usize {
        self.states[s].actions[p].len()
    }

    pub fn action_index(&self, s: StateId, p: Player, label: &str) -> Option<usize> {
        self.states[s].actions[p].iter().position(|a| a == label)
    }

    pub fn reward(&self, s: StateId, p: Player) -> &Rational {
        &self.states[s].rewards[p]
    }

    pub fn rewards(&self, s: StateId) -> &[Rational] {
        &self.states[s].rewards
    }

    /// Sorted list of every action label used anywhere in the game.
    pub fn global_actions(&self) -> Vec<String> {
        let mut all: Vec<String> = self
            .states
            .iter()
            .flat_map(|s| s.actions.iter().flatten().cloned())
            .collect();
        all.sort();
        all.dedup();
        all
    }

    pub fn profile_count(&self, s: StateId) -> usize {
        self.states[s].actions.iter().map(Vec::len).product()
    }

    pub fn encode(&self, s: StateId, profile: &[usize]) -> usize {
        self.states[s]
            .actions
            .iter()
            .zip(profile)
            .fold(0, |acc, (acts, &a)| acc * acts.len() + a)
    }

    pub fn decode(&self, s: StateId, mut code: usize) -> ActionProfile {
        let acts = &self.states[s].actions;
        let mut out = vec![0; acts.len()];
        for p in (0..acts.len()).rev() {
            out[p] = code % acts[p].len();
            code /= acts[p].len();
        }
        out
    }

    pub fn profile_labels(&self, s: StateId, profile: &[usize]) -> Vec<String> {
        profile
            .iter()
            .enumerate()
            .map(|(p, &a)| self.states[s].actions[p][a].clone())
            .collect()
    }

    /// Legal profiles at `s` in lexicographic order.
    pub fn profiles(&self, s: StateId) -> impl Iterator<Item = ActionProfile> + '_ {
        (0..self.profile_count(s)).map(move |c| self.decode(s, c))
    }

    pub fn next(&self, s: StateId, profile: &[usize]) -> StateId {
        self.succ[s][self.encode(s, profile)]
    }

    pub fn next_code(&self, s: StateId, code: usize) -> StateId {
        self.succ[s][code]
    }

    /// `δ(s, (a_{-p}, b))` for every `b` in `Γ_p(s)`, in action order.
    pub fn deviations<'a>(
        &'a self,
        s: StateId,
        profile: &'a [usize],
        p: Player,
    ) -> impl Iterator<Item = (usize, StateId)> + 'a {
        (0..self.num_actions(s, p)).map(move |b| {
            let mut q = profile.to_vec();
            q[p] = b;
            (b, self.next(s, &q))
        })
    }

    /// Distinct successors of `s`, in first-occurrence order.
    pub fn successors(&self, s: StateId) -> Vec<StateId> {
        let mut out = Vec::new();
        for &t in &self.succ[s] {
            if !out.contains(&t) {
                out.push(t);
            }
        }
        out
    }

    pub fn is_terminal(&self, s: StateId) -> bool {
        self.succ[s].iter().all(|&t| t == s)
    }
}

/// For a turn-based game, the controller of every state: the unique player
/// with more than one action, or player 0 when nobody has a choice.
pub fn is_turn_based(g: &Game) -> Option<Vec<Player>> {
    (0..g.num_states())
        .map(|s| {
            let choosers: Vec<Player> = (0..g.players()).filter(|&p| g.num_actions(s, p) > 1).collect();
            match choosers.as_slice() {
                [] => Some(0),
                [p] => Some(*p),
                _ => None,
            }
        })
        .collect()
}

pub fn terminal_states(g: &Game) -> Vec<StateId> {
    (0..g.num_states()).filter(|&s| g.is_terminal(s)).collect()
}

/// Non-terminal states all carry the zero reward vector.
pub fn is_terminal_reward(g: &Game) -> bool {
    (0..g.num_states())
        .all(|s| g.is_terminal(s) || g.rewards(s).iter().all(Rational::is_zero))
}
