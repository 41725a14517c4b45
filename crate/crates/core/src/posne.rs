//! Positional Nash equilibria: verification of a given profile and
//! exhaustive search.

use std::collections::VecDeque;

use log::warn;
use serde::Serialize;

use crate::game::{in_box, lasso_of, lasso_payoff, Game, Player, PositionalProfile, StateId};
use crate::graph::{max_mean_cycle, WeightedGraph};
use crate::numerics::{ExtRational, Rational};

pub const DEFAULT_BUDGET: u128 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PosVerdict {
    #[serde(skip)]
    pub profile: PositionalProfile,
    pub payoff: Vec<Rational>,
    /// Best payoff each player can reach by deviating alone.
    pub deviation: Vec<Rational>,
    pub is_ne: bool,
    pub in_box: bool,
}

/// The graph of plays open to player `i` when everybody else follows
/// `choice`, explored from `s0`. States where some other player's choice is
/// unknown are left without outgoing edges and reported as the frontier.
fn deviation_graph(
    g: &Game,
    choice: &dyn Fn(StateId, Player) -> Option<usize>,
    i: Player,
    s0: StateId,
) -> (WeightedGraph, Vec<StateId>, Vec<(StateId, Player)>) {
    let mut wg = WeightedGraph::new(1);
    let mut vid = vec![usize::MAX; g.num_states()];
    let mut order = Vec::new();
    let mut frontier = Vec::new();
    let mut queue = VecDeque::from([s0]);
    vid[s0] = wg.add_vertex(g.name(s0), vec![g.reward(s0, i).clone()]);
    order.push(s0);
    while let Some(s) = queue.pop_front() {
        let mut prof = Vec::with_capacity(g.players());
        let mut missing = None;
        for p in 0..g.players() {
            if p == i {
                prof.push(0);
                continue;
            }
            match choice(s, p) {
                Some(a) => prof.push(a),
                None => {
                    missing = Some(p);
                    break;
                }
            }
        }
        if let Some(p) = missing {
            frontier.push((s, p));
            continue;
        }
        for (_, t) in g.deviations(s, &prof, i) {
            if vid[t] == usize::MAX {
                vid[t] = wg.add_vertex(g.name(t), vec![g.reward(t, i).clone()]);
                order.push(t);
                queue.push_back(t);
            }
            wg.add_edge(vid[s], vid[t]);
        }
    }
    (wg, order, frontier)
}

/// Payoff of the profile's play from `s0` and every player's best
/// deviation value.
pub fn verify_positional(
    g: &Game,
    s0: StateId,
    sigma: &PositionalProfile,
    x: &[ExtRational],
    y: &[ExtRational],
) -> PosVerdict {
    let payoff = lasso_payoff(g, &lasso_of(g, sigma, s0));
    let choice = |s: StateId, p: Player| Some(sigma.action(s, p));
    let deviation: Vec<Rational> = (0..g.players())
        .map(|i| {
            let (wg, _, _) = deviation_graph(g, &choice, i, s0);
            max_mean_cycle(&wg, 0, 0).expect("every state has a successor").mean
        })
        .collect();
    let is_ne = deviation.iter().zip(&payoff).all(|(v, z)| v <= z);
    let in_box = in_box(x, &payoff, y);
    PosVerdict { profile: sigma.clone(), payoff, deviation, is_ne, in_box }
}

#[derive(Debug, Clone)]
pub struct PosSearch {
    /// The lexicographically least positional equilibrium in the box.
    pub found: Option<PosVerdict>,
    /// Number of positional profiles of the game.
    pub profile_space: u128,
    /// Partial assignments examined.
    pub nodes: u64,
}

enum Node {
    Fail,
    Success,
    Need(StateId, Player),
}

struct Search<'a> {
    g: &'a Game,
    s0: StateId,
    x: &'a [ExtRational],
    y: &'a [ExtRational],
    max_reward: Vec<Rational>,
    assigned: Vec<Vec<Option<usize>>>,
    best: Option<Vec<Vec<usize>>>,
    nodes: u64,
}

impl Search<'_> {
    fn completion(&self) -> Vec<Vec<usize>> {
        self.assigned.iter().map(|r| r.iter().map(|a| a.unwrap_or(0)).collect()).collect()
    }

    fn evaluate(&self) -> Node {
        let g = self.g;
        // the play from s0, as far as it is assigned
        let mut seen = vec![usize::MAX; g.num_states()];
        let mut states = Vec::new();
        let mut s = self.s0;
        while seen[s] == usize::MAX {
            seen[s] = states.len();
            states.push(s);
            let row = &self.assigned[s];
            if let Some(p) = row.iter().position(Option::is_none) {
                return Node::Need(s, p);
            }
            let prof: Vec<usize> = row.iter().map(|a| a.unwrap()).collect();
            s = g.next(s, &prof);
        }
        let cycle = &states[seen[s]..];
        let len = Rational::from_int(cycle.len() as i64);
        let z: Vec<Rational> = (0..g.players())
            .map(|p| cycle.iter().map(|&t| g.reward(t, p)).sum::<Rational>() / &len)
            .collect();
        if !in_box(self.x, &z, self.y) {
            return Node::Fail;
        }
        let choice = |s: StateId, p: Player| self.assigned[s][p];
        let mut need = None;
        for i in 0..g.players() {
            if z[i] >= self.max_reward[i] {
                continue;
            }
            let (wg, _, frontier) = deviation_graph(g, &choice, i, self.s0);
            if let Some(c) = max_mean_cycle(&wg, 0, 0) {
                if c.mean > z[i] {
                    return Node::Fail;
                }
            }
            if need.is_none() {
                need = frontier.first().copied();
            }
        }
        match need {
            Some((s, p)) => Node::Need(s, p),
            None => Node::Success,
        }
    }

    fn run(&mut self) {
        self.nodes += 1;
        if let Some(best) = &self.best {
            if self.completion() >= *best {
                return;
            }
        }
        match self.evaluate() {
            Node::Fail => {}
            Node::Success => self.best = Some(self.completion()),
            Node::Need(s, p) => {
                for a in 0..self.g.num_actions(s, p) {
                    self.assigned[s][p] = Some(a);
                    self.run();
                }
                self.assigned[s][p] = None;
            }
        }
    }
}

pub fn profile_space(g: &Game) -> u128 {
    (0..g.num_states())
        .flat_map(|s| (0..g.players()).map(move |p| g.num_actions(s, p) as u128))
        .fold(1u128, |acc, n| acc.saturating_mul(n))
}

/// Searches for a positional Nash equilibrium whose payoff from `s0` lies
/// in `[x, y]`. Only choices that influence the play or some player's
/// deviation options are branched on; among all equilibria the
/// lexicographically least profile (by state, then player) is reported.
/// Exceeding `budget` profiles only triggers a warning.
pub fn decide_pos_ne(g: &Game, s0: StateId, x: &[ExtRational], y: &[ExtRational], budget: u128) -> PosSearch {
    let space = profile_space(g);
    if space > budget {
        warn!("{space} positional profiles exceed the budget of {budget}; the search may take long");
    }
    let max_reward = (0..g.players())
        .map(|p| (0..g.num_states()).map(|s| g.reward(s, p).clone()).max().unwrap())
        .collect();
    let mut search = Search {
        g,
        s0,
        x,
        y,
        max_reward,
        assigned: vec![vec![None; g.players()]; g.num_states()],
        best: None,
        nodes: 0,
    };
    search.run();
    let found = search.best.map(|choices| {
        let v = verify_positional(g, s0, &PositionalProfile::from_choices(choices), x, y);
        debug_assert!(v.is_ne && v.in_box);
        v
    });
    PosSearch { found, profile_space: space, nodes: search.nodes }
}
