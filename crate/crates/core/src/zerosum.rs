//! Two-player zero-sum mean-payoff games and punishing values.
//!
//! Values are computed by value iteration on integer weights. Long before
//! the iteration bound of Zwick and Paterson is reached, the greedy
//! strategies of the current iterate are usually already optimal; they are
//! tried at geometrically spaced checkpoints and accepted only when two
//! one-player mean-cycle computations certify them. If no checkpoint
//! certifies, the values are recovered by rounding at the full bound and
//! strategies are extracted by fixing one edge at a time.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::game::{Game, PositionalProfile, StateId};
use crate::graph::{best_reachable_cycle_means, Extreme, WeightedGraph};
use crate::numerics::{denominator_lcm, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Max,
    Min,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MpgError {
    #[error("vertex {0} has no successor")]
    DeadEnd(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct MeanPayoffGame {
    owner: Vec<Side>,
    succ: Vec<Vec<usize>>,
    weight: Vec<Rational>,
}

impl MeanPayoffGame {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_vertex(&mut self, side: Side, weight: Rational) -> usize {
        self.owner.push(side);
        self.succ.push(Vec::new());
        self.weight.push(weight);
        self.owner.len() - 1
    }

    /// Parallel edges are ignored.
    pub fn add_edge(&mut self, u: usize, v: usize) {
        if !self.succ[u].contains(&v) {
            self.succ[u].push(v);
        }
    }

    pub fn num_vertices(&self) -> usize {
        self.owner.len()
    }

    pub fn owner(&self, u: usize) -> Side {
        self.owner[u]
    }

    pub fn successors(&self, u: usize) -> &[usize] {
        &self.succ[u]
    }

    pub fn weight(&self, u: usize) -> &Rational {
        &self.weight[u]
    }

    fn check(&self) -> Result<(), MpgError> {
        match self.succ.iter().position(Vec::is_empty) {
            Some(u) => Err(MpgError::DeadEnd(u)),
            None => Ok(()),
        }
    }

    /// Keeps only `choice[u]` at vertices owned by `side`.
    fn fix(&self, side: Side, choice: &[usize]) -> WeightedGraph {
        let mut g = WeightedGraph::new(1);
        for u in 0..self.num_vertices() {
            g.add_vertex(&u.to_string(), vec![self.weight[u].clone()]);
        }
        for u in 0..self.num_vertices() {
            if self.owner[u] == side {
                g.add_edge(u, choice[u]);
            } else {
                for &v in &self.succ[u] {
                    g.add_edge(u, v);
                }
            }
        }
        g
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MpgSolution {
    pub values: Vec<Rational>,
    /// Optimal positional strategies: the chosen successor of every vertex,
    /// for the owner of that vertex.
    pub strategy: Vec<usize>,
}

/// Values the fixed strategies guarantee, if they agree everywhere.
fn certify(m: &MeanPayoffGame, strategy: &[usize]) -> Option<Vec<Rational>> {
    let max_fixed = m.fix(Side::Max, strategy);
    let lower = best_reachable_cycle_means(&max_fixed, 0, Extreme::Min);
    let min_fixed = m.fix(Side::Min, strategy);
    let upper = best_reachable_cycle_means(&min_fixed, 0, Extreme::Max);
    if lower == upper {
        lower.into_iter().collect()
    } else {
        None
    }
}

struct Iteration {
    weights: Vec<BigInt>,
    scale: BigInt,
    bound: u64,
}

impl Iteration {
    fn new(m: &MeanPayoffGame) -> Self {
        let scale = denominator_lcm(&m.weight);
        let weights: Vec<BigInt> = m.weight.iter().map(|w| (w * Rational::from(scale.clone())).numer()).collect();
        let w = weights.iter().map(|x| x.abs()).max().unwrap_or_default();
        let n = m.num_vertices() as u64;
        let bound = (BigInt::from(4 * n * n * n) * w).to_u64().unwrap_or(u64::MAX).max(1);
        Iteration { weights, scale, bound }
    }

    fn step(&self, m: &MeanPayoffGame, prev: &[BigInt], choice: &mut [usize]) -> Vec<BigInt> {
        (0..m.num_vertices())
            .map(|u| {
                let succ = &m.succ[u];
                let mut best = succ[0];
                for &v in &succ[1..] {
                    let better = match m.owner[u] {
                        Side::Max => prev[v] > prev[best],
                        Side::Min => prev[v] < prev[best],
                    };
                    if better {
                        best = v;
                    }
                }
                choice[u] = best;
                &self.weights[u] + &prev[best]
            })
            .collect()
    }
}

/// The rational with the smallest denominator in the open interval
/// `(lo, hi)`; `hi = None` means unbounded above.
fn simplest_between(lo: &Rational, hi: Option<&Rational>) -> Rational {
    let fl = Rational::from(lo.floor());
    let next = &fl + Rational::one();
    if hi.is_none_or(|h| next < *h) {
        return next;
    }
    let lo_frac = lo - &fl;
    let hi_frac = hi.unwrap() - &fl;
    let inner_hi = if lo_frac.is_zero() { None } else { Some(lo_frac.recip()) };
    fl + simplest_between(&hi_frac.recip(), inner_hi.as_ref()).recip()
}

/// Exact values from value iteration run to the full bound.
fn rounded_values(m: &MeanPayoffGame) -> Vec<Rational> {
    let it = Iteration::new(m);
    let n = m.num_vertices();
    let mut v = vec![BigInt::zero(); n];
    let mut choice = vec![0; n];
    for _ in 0..it.bound {
        v = it.step(m, &v, &mut choice);
    }
    let k = Rational::from(BigInt::from(it.bound));
    let radius = if n > 1 {
        Rational::new(1, 2 * (n * (n - 1)) as i64)
    } else {
        Rational::new(1, 2)
    };
    let scale = Rational::from(it.scale.clone());
    v.iter()
        .map(|x| {
            let mid = Rational::from(x.clone()) / &k;
            let r = simplest_between(&(&mid - &radius), Some(&(&mid + &radius)));
            debug_assert!(r.denom() <= BigInt::from(n.max(1)));
            r / &scale
        })
        .collect()
}

/// Solves the game exactly; ties between optimal edges are broken in favor
/// of the earliest successor.
pub fn solve_mpg(m: &MeanPayoffGame) -> Result<MpgSolution, MpgError> {
    m.check()?;
    let n = m.num_vertices();
    let it = Iteration::new(m);
    let mut v = vec![BigInt::zero(); n];
    let mut choice = vec![0; n];
    let mut checkpoint = n.max(1) as u64;
    let mut k = 0u64;
    while k < it.bound {
        v = it.step(m, &v, &mut choice);
        k += 1;
        if k == checkpoint || k == it.bound {
            if let Some(values) = certify(m, &choice) {
                return Ok(MpgSolution { values, strategy: choice });
            }
            checkpoint = checkpoint.saturating_mul(2);
        }
    }

    log::debug!("value iteration did not certify; fixing edges one at a time");
    let values = rounded_values(m);
    // One pass per side, each on the original game: an edge restriction on
    // one side is only meaningful while the other side keeps all its edges.
    let mut strategy: Vec<usize> = m.succ.iter().map(|s| s[0]).collect();
    for side in [Side::Max, Side::Min] {
        let mut cur = m.clone();
        for u in 0..n {
            if m.owner[u] != side || cur.succ[u].len() == 1 {
                continue;
            }
            let options = cur.succ[u].clone();
            let kept = options.iter().find(|&&t| {
                cur.succ[u] = vec![t];
                rounded_values(&cur) == values
            });
            let &t = kept.unwrap_or_else(|| panic!("no edge preserves the value at vertex {u}"));
            cur.succ[u] = vec![t];
            strategy[u] = t;
        }
    }
    let certified = certify(m, &strategy).expect("extracted strategies are optimal");
    debug_assert_eq!(certified, values);
    Ok(MpgSolution { values, strategy })
}

/// What a vertex of the coalition game stands for.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoalitionVertex {
    /// The coalition picks a legal profile here.
    State(StateId),
    /// The coalition committed to the profile with this code; the player
    /// now picks its own action.
    Choice(StateId, usize),
}

#[derive(Debug, Clone)]
pub struct CoalitionGame {
    pub player: usize,
    pub mpg: MeanPayoffGame,
    pub vertices: Vec<CoalitionVertex>,
}

/// The zero-sum game where `player` maximizes its mean reward against all
/// other players. Vertex `s` (for `s < |S|`) is the state `s`; the remaining
/// vertices are (state, profile) pairs.
pub fn coalition_game(g: &Game, player: usize) -> CoalitionGame {
    let mut mpg = MeanPayoffGame::new();
    let mut vertices = Vec::new();
    for s in 0..g.num_states() {
        mpg.add_vertex(Side::Min, g.reward(s, player).clone());
        vertices.push(CoalitionVertex::State(s));
    }
    for s in 0..g.num_states() {
        for code in 0..g.profile_count(s) {
            let u = mpg.add_vertex(Side::Max, g.reward(s, player).clone());
            vertices.push(CoalitionVertex::Choice(s, code));
            mpg.add_edge(s, u);
            let a = g.decode(s, code);
            for (_, t) in g.deviations(s, &a, player) {
                mpg.add_edge(u, t);
            }
        }
    }
    CoalitionGame { player, mpg, vertices }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PvalTable {
    /// `values[i][s]`: what player `i` can guarantee from `s` against the
    /// coalition of all others.
    pub values: Vec<Vec<Rational>>,
    /// `punish[i]`: a positional profile whose other-player components hold
    /// player `i` to `values[i]`; player `i`'s component is a best reply.
    pub punish: Vec<PositionalProfile>,
    /// `best_reply[i][s]`: player `i`'s action in `punish[i]` at `s`.
    pub best_reply: Vec<Vec<usize>>,
}

impl PvalTable {
    pub fn value(&self, player: usize, s: StateId) -> &Rational {
        &self.values[player][s]
    }
}

pub fn pval_table(g: &Game) -> PvalTable {
    let mut values = Vec::new();
    let mut punish = Vec::new();
    let mut best_reply = Vec::new();
    for i in 0..g.players() {
        let cg = coalition_game(g, i);
        let sol = solve_mpg(&cg.mpg).expect("coalition games have no dead ends");
        let mut choices = Vec::with_capacity(g.num_states());
        let mut replies = Vec::with_capacity(g.num_states());
        for s in 0..g.num_states() {
            let v = sol.strategy[s];
            let CoalitionVertex::Choice(_, code) = cg.vertices[v] else {
                unreachable!("state vertices lead to choice vertices")
            };
            let a = g.decode(s, code);
            let target = sol.strategy[v];
            let b = g
                .deviations(s, &a, i)
                .find(|&(_, t)| t == target)
                .map(|(b, _)| b)
                .expect("chosen successor comes from some action");
            let mut prof = a;
            prof[i] = b;
            choices.push(prof);
            replies.push(b);
        }
        values.push(sol.values[..g.num_states()].to_vec());
        punish.push(PositionalProfile::from_choices(choices));
        best_reply.push(replies);
    }
    PvalTable { values, punish, best_reply }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn simplest_rational_in_interval() {
        assert_eq!(simplest_between(&r(1, 3), Some(&r(1, 2))), r(2, 5));
        assert_eq!(simplest_between(&r(3, 10), Some(&r(7, 10))), r(1, 2));
        assert_eq!(simplest_between(&r(-7, 10), Some(&r(-3, 10))), r(-1, 2));
        assert_eq!(simplest_between(&r(1, 1), Some(&r(3, 1))), r(2, 1));
        assert_eq!(simplest_between(&r(0, 1), Some(&r(1, 100))), r(1, 101));
    }

    #[test]
    fn two_vertex_cycle() {
        let mut m = MeanPayoffGame::new();
        let a = m.add_vertex(Side::Max, r(1, 1));
        let b = m.add_vertex(Side::Min, r(0, 1));
        m.add_edge(a, a);
        m.add_edge(a, b);
        m.add_edge(b, a);
        m.add_edge(b, b);
        let sol = solve_mpg(&m).unwrap();
        // Min stays at b forever; from a, Max loops on a
        assert_eq!(sol.values, vec![r(1, 1), r(0, 1)]);
        assert_eq!(sol.strategy, vec![a, b]);
    }

    #[test]
    fn extraction_keeps_the_other_side_free() {
        // Value iteration's greedy choice does not certify here, and fixing
        // Min's edges before Max's would let a losing Max edge look optimal.
        let rows: [(Side, i64, &[usize]); 12] = [
            (Side::Min, -1, &[4, 5]),
            (Side::Min, 0, &[6, 7]),
            (Side::Min, -1, &[8, 9]),
            (Side::Min, 0, &[10, 11]),
            (Side::Max, -1, &[0, 1]),
            (Side::Max, -1, &[0, 1]),
            (Side::Max, 0, &[2]),
            (Side::Max, 0, &[0]),
            (Side::Max, -1, &[0]),
            (Side::Max, -1, &[1]),
            (Side::Max, 0, &[2]),
            (Side::Max, 0, &[3]),
        ];
        let mut m = MeanPayoffGame::new();
        for (side, w, _) in &rows {
            m.add_vertex(*side, r(*w, 1));
        }
        for (u, (_, _, succ)) in rows.iter().enumerate() {
            for &v in *succ {
                m.add_edge(u, v);
            }
        }
        let sol = solve_mpg(&m).unwrap();
        // Min forces s0 -> s1 -> s2 -> s0 through the choice vertices
        assert_eq!(sol.values, vec![r(-2, 3); 12]);
        assert_eq!(certify(&m, &sol.strategy), Some(sol.values.clone()));
    }

    #[test]
    fn rounding_matches_certified_values() {
        let mut m = MeanPayoffGame::new();
        let v: Vec<usize> = [(Side::Max, 3), (Side::Min, -1), (Side::Max, 2), (Side::Min, 0)]
            .iter()
            .map(|&(s, w)| m.add_vertex(s, r(w, 2)))
            .collect();
        for (u, w) in [(0, 1), (1, 2), (2, 3), (3, 0), (1, 0), (2, 2), (3, 1)] {
            m.add_edge(v[u], v[w]);
        }
        let sol = solve_mpg(&m).unwrap();
        assert_eq!(rounded_values(&m), sol.values);
    }

    #[test]
    fn dead_end_is_rejected() {
        let mut m = MeanPayoffGame::new();
        m.add_vertex(Side::Max, r(0, 1));
        assert_eq!(solve_mpg(&m), Err(MpgError::DeadEnd(0)));
    }
}
