//! Strategy profiles and the plays they induce.

use std::collections::HashMap;

use thiserror::Error;

use crate::numerics::Rational;

use super::{ActionProfile, Game, Player, StateId};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProfileError {
    #[error("profile covers {found} states, game has {expected}")]
    StateCount { found: usize, expected: usize },
    #[error("state `{state}`: profile covers {found} players, game has {expected}")]
    PlayerCount { state: String, found: usize, expected: usize },
    #[error("state `{state}`, player {player}: action index {action} is not legal")]
    IllegalAction { state: String, player: Player, action: usize },
    #[error("state `{state}`, player {player}: {found} probabilities for {expected} actions")]
    ActionCount { state: String, player: Player, found: usize, expected: usize },
    #[error("state `{state}`, player {player}: probability {prob} outside [0, 1]")]
    ProbabilityRange { state: String, player: Player, prob: Rational },
    #[error("state `{state}`, player {player}: probabilities sum to {sum}, not 1")]
    NotNormalized { state: String, player: Player, sum: Rational },
}

/// One action per state and player.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PositionalProfile {
    choices: Vec<ActionProfile>,
}

impl PositionalProfile {
    /// Every player picks its first action everywhere.
    pub fn first(g: &Game) -> Self {
        PositionalProfile {
            choices: vec![vec![0; g.players()]; g.num_states()],
        }
    }

    pub fn from_choices(choices: Vec<ActionProfile>) -> Self {
        PositionalProfile { choices }
    }

    pub fn choices(&self) -> &[ActionProfile] {
        &self.choices
    }

    pub fn at(&self, s: StateId) -> &[usize] {
        &self.choices[s]
    }

    pub fn action(&self, s: StateId, p: Player) -> usize {
        self.choices[s][p]
    }

    pub fn set(&mut self, s: StateId, p: Player, a: usize) {
        self.choices[s][p] = a;
    }

    pub fn validate(&self, g: &Game) -> Result<(), ProfileError> {
        if self.choices.len() != g.num_states() {
            return Err(ProfileError::StateCount { found: self.choices.len(), expected: g.num_states() });
        }
        for (s, prof) in self.choices.iter().enumerate() {
            if prof.len() != g.players() {
                return Err(ProfileError::PlayerCount {
                    state: g.name(s).into(),
                    found: prof.len(),
                    expected: g.players(),
                });
            }
            for (p, &a) in prof.iter().enumerate() {
                if a >= g.num_actions(s, p) {
                    return Err(ProfileError::IllegalAction { state: g.name(s).into(), player: p, action: a });
                }
            }
        }
        Ok(())
    }
}

/// A probability distribution over actions per state and player.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StationaryProfile {
    dist: Vec<Vec<Vec<Rational>>>,
}

impl StationaryProfile {
    /// Indexed as `[state][player][action]`.
    pub fn from_distributions(dist: Vec<Vec<Vec<Rational>>>) -> Self {
        StationaryProfile { dist }
    }

    pub fn from_positional(g: &Game, sigma: &PositionalProfile) -> Self {
        let dist = (0..g.num_states())
            .map(|s| {
                (0..g.players())
                    .map(|p| {
                        let mut d = vec![Rational::zero(); g.num_actions(s, p)];
                        d[sigma.action(s, p)] = Rational::one();
                        d
                    })
                    .collect()
            })
            .collect();
        StationaryProfile { dist }
    }

    pub fn distributions(&self) -> &[Vec<Vec<Rational>>] {
        &self.dist
    }

    pub fn prob(&self, s: StateId, p: Player, a: usize) -> &Rational {
        &self.dist[s][p][a]
    }

    pub fn set(&mut self, s: StateId, p: Player, d: Vec<Rational>) {
        self.dist[s][p] = d;
    }

    pub fn validate(&self, g: &Game) -> Result<(), ProfileError> {
        if self.dist.len() != g.num_states() {
            return Err(ProfileError::StateCount { found: self.dist.len(), expected: g.num_states() });
        }
        for (s, per_player) in self.dist.iter().enumerate() {
            let state = || g.name(s).to_string();
            if per_player.len() != g.players() {
                return Err(ProfileError::PlayerCount {
                    state: state(),
                    found: per_player.len(),
                    expected: g.players(),
                });
            }
            for (p, d) in per_player.iter().enumerate() {
                if d.len() != g.num_actions(s, p) {
                    return Err(ProfileError::ActionCount {
                        state: state(),
                        player: p,
                        found: d.len(),
                        expected: g.num_actions(s, p),
                    });
                }
                for x in d {
                    if x.is_negative() || *x > Rational::one() {
                        return Err(ProfileError::ProbabilityRange { state: state(), player: p, prob: x.clone() });
                    }
                }
                let sum: Rational = d.iter().sum();
                if sum != Rational::one() {
                    return Err(ProfileError::NotNormalized { state: state(), player: p, sum });
                }
            }
        }
        Ok(())
    }

    /// Profiles with positive probability at `s`, with their probabilities,
    /// in lexicographic order.
    pub fn profile_distribution(&self, g: &Game, s: StateId) -> Vec<(ActionProfile, Rational)> {
        self.product(g, s, None)
    }

    fn product(&self, g: &Game, s: StateId, fixed: Option<(Player, usize)>) -> Vec<(ActionProfile, Rational)> {
        let mut out = vec![(Vec::new(), Rational::one())];
        for p in 0..g.players() {
            let mut next = Vec::new();
            for (prof, pr) in &out {
                if let Some((fp, b)) = fixed {
                    if fp == p {
                        let mut np = prof.clone();
                        np.push(b);
                        next.push((np, pr.clone()));
                        continue;
                    }
                }
                for (a, q) in self.dist[s][p].iter().enumerate() {
                    if q.is_zero() {
                        continue;
                    }
                    let mut np = prof.clone();
                    np.push(a);
                    next.push((np, pr * q));
                }
            }
            out = next;
        }
        out
    }

    /// Successor distribution at `s`, merged by target state.
    pub fn successor_distribution(&self, g: &Game, s: StateId) -> Vec<(StateId, Rational)> {
        merge(self.product(g, s, None).into_iter().map(|(a, q)| (g.next(s, &a), q)))
    }

    /// Successor distribution at `s` when player `p` plays action `b` and
    /// everybody else follows the profile.
    pub fn deviation_distribution(&self, g: &Game, s: StateId, p: Player, b: usize) -> Vec<(StateId, Rational)> {
        merge(self.product(g, s, Some((p, b))).into_iter().map(|(a, q)| (g.next(s, &a), q)))
    }
}

fn merge(items: impl Iterator<Item = (StateId, Rational)>) -> Vec<(StateId, Rational)> {
    let mut out: Vec<(StateId, Rational)> = Vec::new();
    for (t, q) in items {
        match out.iter_mut().find(|(u, _)| *u == t) {
            Some((_, acc)) => *acc += q,
            None => out.push((t, q)),
        }
    }
    out
}

/// The single play of a positional profile: `states[cycle_start..]` repeats
/// forever.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lasso {
    pub states: Vec<StateId>,
    pub profiles: Vec<ActionProfile>,
    pub cycle_start: usize,
}

impl Lasso {
    pub fn prefix(&self) -> &[StateId] {
        &self.states[..self.cycle_start]
    }

    pub fn cycle(&self) -> &[StateId] {
        &self.states[self.cycle_start..]
    }
}

pub fn lasso_of(g: &Game, sigma: &PositionalProfile, s0: StateId) -> Lasso {
    let mut seen = HashMap::new();
    let mut states = Vec::new();
    let mut profiles = Vec::new();
    let mut s = s0;
    loop {
        if let Some(&i) = seen.get(&s) {
            return Lasso { states, profiles, cycle_start: i };
        }
        seen.insert(s, states.len());
        states.push(s);
        let a = sigma.at(s).to_vec();
        let t = g.next(s, &a);
        profiles.push(a);
        s = t;
    }
}

/// Mean reward vector over the cycle of the lasso.
pub fn lasso_payoff(g: &Game, lasso: &Lasso) -> Vec<Rational> {
    let cyc = lasso.cycle();
    let len = Rational::from_int(cyc.len() as i64);
    (0..g.players())
        .map(|p| cyc.iter().map(|&s| g.reward(s, p)).sum::<Rational>() / &len)
        .collect()
}
