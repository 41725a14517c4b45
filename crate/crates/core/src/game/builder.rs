//! Programmatic construction of games by state and action names.

use crate::numerics::Rational;

use super::{Game, GameDescription, InvalidGame, Player, StateDesc, TransitionDesc};

/// Action label used by players without a choice in turn-based games.
pub const IDLE: &str = "_";

#[derive(Debug, Clone)]
pub struct GameBuilder {
    desc: GameDescription,
}

impl GameBuilder {
    pub fn new(players: usize) -> Self {
        GameBuilder {
            desc: GameDescription {
                players,
                initial: None,
                states: Vec::new(),
                transitions: Vec::new(),
            },
        }
    }

    pub fn state(&mut self, name: &str, actions: &[&[&str]], rewards: Vec<Rational>) -> &mut Self {
        self.desc.states.push(StateDesc {
            name: name.to_string(),
            actions: actions
                .iter()
                .map(|a| a.iter().map(|s| s.to_string()).collect())
                .collect(),
            rewards,
        });
        self
    }

    /// A state where every player has the single idle action and which loops
    /// to itself.
    pub fn terminal(&mut self, name: &str, rewards: Vec<Rational>) -> &mut Self {
        let k = self.desc.players;
        let idle = vec![&[IDLE][..]; k];
        self.state(name, &idle, rewards);
        self.transition(name, &vec![IDLE; k], name)
    }

    pub fn transition(&mut self, from: &str, profile: &[&str], to: &str) -> &mut Self {
        self.desc.transitions.push(TransitionDesc {
            from: from.to_string(),
            profile: profile.iter().map(|s| s.to_string()).collect(),
            to: to.to_string(),
        });
        self
    }

    pub fn initial(&mut self, name: &str) -> &mut Self {
        self.desc.initial = Some(name.to_string());
        self
    }

    pub fn description(&self) -> &GameDescription {
        &self.desc
    }

    pub fn build(&self) -> Result<Game, InvalidGame> {
        Game::from_description(&self.desc)
    }
}

#[derive(Debug, Clone)]
struct TurnState {
    name: String,
    controller: Player,
    rewards: Vec<Rational>,
    succ: Vec<String>,
}

/// Builds a turn-based game from a successor list per state. The
/// controller's action labels are the names of the successor states; the
/// other players idle. A state without outgoing edges becomes a terminal
/// self-loop.
#[derive(Debug, Clone)]
pub struct TurnBasedBuilder {
    players: usize,
    states: Vec<TurnState>,
    initial: Option<String>,
}

impl TurnBasedBuilder {
    pub fn new(players: usize) -> Self {
        TurnBasedBuilder { players, states: Vec::new(), initial: None }
    }

    pub fn players(&self) -> usize {
        self.players
    }

    pub fn has_state(&self, name: &str) -> bool {
        self.states.iter().any(|s| s.name == name)
    }

    pub fn state(&mut self, name: &str, controller: Player, rewards: Vec<Rational>) -> &mut Self {
        self.states.push(TurnState {
            name: name.to_string(),
            controller,
            rewards,
            succ: Vec::new(),
        });
        self
    }

    pub fn terminal(&mut self, name: &str, rewards: Vec<Rational>) -> &mut Self {
        self.state(name, 0, rewards)
    }

    /// Panics if `from` has not been declared yet.
    pub fn edge(&mut self, from: &str, to: &str) -> &mut Self {
        let st = self
            .states
            .iter_mut()
            .find(|s| s.name == from)
            .unwrap_or_else(|| panic!("edge from undeclared state `{from}`"));
        if !st.succ.iter().any(|t| t == to) {
            st.succ.push(to.to_string());
        }
        self
    }

    pub fn initial(&mut self, name: &str) -> &mut Self {
        self.initial = Some(name.to_string());
        self
    }

    pub fn to_builder(&self) -> GameBuilder {
        let k = self.players;
        let mut b = GameBuilder::new(k);
        for st in &self.states {
            let succ: Vec<&str> = if st.succ.is_empty() {
                vec![st.name.as_str()]
            } else {
                st.succ.iter().map(String::as_str).collect()
            };
            let mut actions: Vec<&[&str]> = vec![&[IDLE]; k];
            if st.succ.is_empty() {
                b.state(&st.name, &actions, st.rewards.clone());
                b.transition(&st.name, &vec![IDLE; k], &st.name);
                continue;
            }
            actions[st.controller] = &succ;
            b.state(&st.name, &actions, st.rewards.clone());
            for t in &succ {
                let mut prof = vec![IDLE; k];
                prof[st.controller] = t;
                b.transition(&st.name, &prof, t);
            }
        }
        if let Some(i) = &self.initial {
            b.initial(i);
        }
        b
    }

    pub fn build(&self) -> Result<Game, InvalidGame> {
        self.to_builder().build()
    }
}

/// A reward vector of length `k` that is zero except at the listed players.
pub fn sparse_rewards(k: usize, entries: &[(Player, Rational)]) -> Vec<Rational> {
    let mut v = vec![Rational::zero(); k];
    for (p, r) in entries {
        v[*p] = r.clone();
    }
    v
}
