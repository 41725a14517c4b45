//! Pure Nash equilibria via threshold-secure graphs.
//!
//! A profile `a` is z-secure at `s` when no single player `i` can move the
//! game, by changing only its own action, to a state where it could
//! guarantee more than `z_i` against everybody else. Equilibrium plays are
//! exactly the plays of secure profiles whose payoff is at least `z`; off
//! the play, a deviator is held to its punishment value.

use std::collections::HashMap;
use std::fmt::Write as _;

use thiserror::Error;

use crate::game::{is_terminal_reward, terminal_states, ActionProfile, Game, Player, PositionalProfile, StateId};
use crate::graph::{max_mean_cycle, shortest_path, WeightedGraph};
use crate::mppath::{extract_cycle_witness, feasible_path, CycleWitness, FlowSolution};
use crate::numerics::{ExtRational, Rational};
use crate::zerosum::{pval_table, PvalTable};

/// The graph `G(z)` over the states of a game. Vertex `s` is state `s` and
/// carries the state's reward vector.
#[derive(Debug, Clone)]
pub struct SecureGraph {
    pub z: Vec<ExtRational>,
    pub graph: WeightedGraph,
    /// The least secure profile realizing each edge, aligned with
    /// `graph.edges()`.
    pub profiles: Vec<ActionProfile>,
}

impl SecureGraph {
    pub fn profile(&self, u: StateId, v: StateId) -> Option<&ActionProfile> {
        self.graph.edges().iter().position(|&e| e == (u, v)).map(|e| &self.profiles[e])
    }
}

/// The largest punishment value player `i` could reach from `s` by
/// deviating alone from the profile with code `code`.
fn threat(g: &Game, pt: &PvalTable, s: StateId, code: usize, i: Player) -> Rational {
    let a = g.decode(s, code);
    g.deviations(s, &a, i).map(|(_, t)| pt.value(i, t).clone()).max().expect("non-empty action set")
}

pub fn is_z_secure(g: &Game, pt: &PvalTable, s: StateId, a: &[usize], z: &[ExtRational]) -> bool {
    (0..g.players()).all(|i| {
        g.deviations(s, a, i).all(|(_, t)| z[i].cmp_finite(pt.value(i, t)) != std::cmp::Ordering::Less)
    })
}

/// Threat values of every profile, indexed `[s][code][i]`.
struct Threats(Vec<Vec<Vec<Rational>>>);

impl Threats {
    fn new(g: &Game, pt: &PvalTable) -> Self {
        Threats(
            (0..g.num_states())
                .map(|s| {
                    (0..g.profile_count(s))
                        .map(|c| (0..g.players()).map(|i| threat(g, pt, s, c, i)).collect())
                        .collect()
                })
                .collect(),
        )
    }

    fn graph(&self, g: &Game, z: &[ExtRational]) -> SecureGraph {
        let mut graph = WeightedGraph::new(g.players());
        for s in 0..g.num_states() {
            graph.add_vertex(g.name(s), g.rewards(s).to_vec());
        }
        let mut profiles = Vec::new();
        for s in 0..g.num_states() {
            for (code, th) in self.0[s].iter().enumerate() {
                let secure = th.iter().zip(z).all(|(t, zi)| zi.ge_finite(t));
                if !secure {
                    continue;
                }
                let before = graph.edges().len();
                let e = graph.add_edge(s, g.next_code(s, code));
                if e == before {
                    profiles.push(g.decode(s, code));
                }
            }
        }
        SecureGraph { z: z.to_vec(), graph, profiles }
    }
}

pub fn secure_graph(g: &Game, pt: &PvalTable, z: &[ExtRational]) -> SecureGraph {
    Threats::new(g, pt).graph(g, z)
}

/// An equilibrium play together with the punishments enforcing it.
#[derive(Debug, Clone)]
pub struct PureWitness {
    pub z: Vec<ExtRational>,
    /// Payoff of the equilibrium play.
    pub payoff: Vec<Rational>,
    /// From the initial state into `scc`.
    pub approach: Vec<StateId>,
    pub scc: Vec<StateId>,
    pub flow: FlowSolution,
    pub cycles: CycleWitness,
    /// The secure edges with their stored profiles.
    pub edges: Vec<((StateId, StateId), ActionProfile)>,
    /// `punish[i]`: the positional profile everybody switches to once
    /// player `i` has deviated.
    pub punish: Vec<PositionalProfile>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PureError {
    #[error("the game is not a terminal-reward game")]
    NotTerminalReward,
}

/// Per-player candidate cutoffs: the lower bound and every punishment
/// value above it, dropping those above the upper bound. A cutoff of
/// `-inf` would admit no secure profile at all and is left out.
fn candidates(pt: &PvalTable, i: Player, x: &ExtRational, y: &ExtRational) -> Vec<ExtRational> {
    let mut c: Vec<ExtRational> = pt.values[i]
        .iter()
        .filter(|v| x.le_finite(v))
        .map(|v| ExtRational::Finite(v.clone()))
        .collect();
    if x.is_finite() {
        c.push(x.clone());
    }
    c.sort();
    c.dedup();
    c.retain(|z| z <= y);
    c
}

fn witness_from(
    g: &Game,
    sg: &SecureGraph,
    pt: &PvalTable,
    approach: Vec<StateId>,
    scc: Vec<StateId>,
    flow: FlowSolution,
) -> PureWitness {
    let cycles = extract_cycle_witness(&sg.graph, &flow).expect("flow from the exact program is balanced");
    let edges = sg.graph.edges().iter().copied().zip(sg.profiles.iter().cloned()).collect();
    let _ = g;
    PureWitness {
        z: sg.z.clone(),
        payoff: flow.achieved.clone(),
        approach,
        scc,
        flow,
        cycles,
        edges,
        punish: pt.punish.clone(),
    }
}

/// Decides whether a pure Nash equilibrium with payoff in `[x, y]` exists
/// from `s0`. Candidate cutoff vectors are tried in lexicographic order and
/// the first success is returned.
pub fn decide_pure_ne(g: &Game, s0: StateId, x: &[ExtRational], y: &[ExtRational]) -> Option<PureWitness> {
    let pt = pval_table(g);
    let threats = Threats::new(g, &pt);
    let cands: Vec<Vec<ExtRational>> = (0..g.players()).map(|i| candidates(&pt, i, &x[i], &y[i])).collect();
    if cands.iter().any(Vec::is_empty) {
        return None;
    }
    let mut idx = vec![0usize; g.players()];
    loop {
        let z: Vec<ExtRational> = idx.iter().enumerate().map(|(i, &c)| cands[i][c].clone()).collect();
        let sg = threats.graph(g, &z);
        if let Some(pw) = feasible_path(&sg.graph, s0, &z, y) {
            return Some(witness_from(g, &sg, &pt, pw.approach, pw.scc, pw.flow));
        }
        // odometer, last player fastest
        let mut p = g.players();
        loop {
            if p == 0 {
                return None;
            }
            p -= 1;
            idx[p] += 1;
            if idx[p] < cands[p].len() {
                break;
            }
            idx[p] = 0;
        }
    }
}

/// Every player's flow puts mass `1 / |cycle|` on each edge of one cycle.
fn cycle_flow(g: &WeightedGraph, cycle: &[usize]) -> FlowSolution {
    let len = Rational::from_int(cycle.len() as i64);
    let edges: Vec<(usize, usize)> =
        (0..cycle.len()).map(|i| (cycle[i], cycle[(i + 1) % cycle.len()])).collect();
    let share = len.recip();
    let achieved = (0..g.dims()).map(|j| g.cycle_mean(cycle, j)).collect();
    FlowSolution { flows: vec![vec![share; edges.len()]; g.dims()], edges, achieved }
}

/// The same question for terminal-reward games, where the only possible
/// payoffs are the zero vector and the terminal reward vectors.
pub fn decide_pure_ne_terminal(
    g: &Game,
    s0: StateId,
    x: &[ExtRational],
    y: &[ExtRational],
) -> Result<Option<PureWitness>, PureError> {
    if !is_terminal_reward(g) {
        return Err(PureError::NotTerminalReward);
    }
    let pt = pval_table(g);
    let threats = Threats::new(g, &pt);
    let k = g.players();
    let terminals = terminal_states(g);
    let mut payoffs: Vec<Vec<Rational>> = vec![vec![Rational::zero(); k]];
    for &t in &terminals {
        let r = g.rewards(t).to_vec();
        if !payoffs.contains(&r) {
            payoffs.push(r);
        }
    }
    for p in payoffs {
        if !crate::game::in_box(x, &p, y) {
            continue;
        }
        let z: Vec<ExtRational> = (0..k)
            .map(|i| {
                let best = pt.values[i].iter().filter(|v| **v <= p[i]).max().cloned();
                match best {
                    Some(v) if x[i].le_finite(&v) => ExtRational::Finite(v),
                    _ => x[i].clone(),
                }
            })
            .collect();
        if z.iter().any(|zi| *zi == ExtRational::NegInf) {
            continue;
        }
        let sg = threats.graph(g, &z);
        let all = vec![true; g.num_states()];
        for &t in terminals.iter().filter(|&&t| g.rewards(t) == p.as_slice()) {
            if sg.profile(t, t).is_none() {
                continue;
            }
            if let Some(approach) = shortest_path(&sg.graph, s0, t, &all) {
                let flow = cycle_flow(&sg.graph, &[t]);
                return Ok(Some(witness_from(g, &sg, &pt, approach, vec![t], flow)));
            }
        }
        if p.iter().all(Rational::is_zero) && !g.is_terminal(s0) {
            let mut inner = WeightedGraph::new(k);
            for s in 0..g.num_states() {
                inner.add_vertex(g.name(s), g.rewards(s).to_vec());
            }
            for &(u, v) in sg.graph.edges() {
                if !g.is_terminal(u) && !g.is_terminal(v) {
                    inner.add_edge(u, v);
                }
            }
            if let Some(mc) = max_mean_cycle(&inner, 0, s0) {
                let approach = shortest_path(&inner, s0, mc.cycle[0], &all).expect("cycle is reachable");
                let flow = cycle_flow(&sg.graph, &mc.cycle);
                let mut scc = mc.cycle.clone();
                scc.sort_unstable();
                scc.dedup();
                return Ok(Some(witness_from(g, &sg, &pt, approach, scc, flow)));
            }
        }
    }
    Ok(None)
}

/// The strategy profile behind a witness: follow the equilibrium play with
/// its stored profiles; once a single player `i` has deviated, everybody
/// plays the punishment profile for `i` forever; after any other divergence
/// everybody plays its first action.
pub struct PureStrategy<'a> {
    g: &'a Game,
    w: &'a PureWitness,
    graph: WeightedGraph,
    inside: Vec<bool>,
    profiles: HashMap<(StateId, StateId), ActionProfile>,
}

impl<'a> PureStrategy<'a> {
    pub fn new(g: &'a Game, w: &'a PureWitness) -> Self {
        let mut graph = WeightedGraph::new(0);
        for s in 0..g.num_states() {
            graph.add_vertex(g.name(s), Vec::new());
        }
        for &((u, v), _) in &w.edges {
            graph.add_edge(u, v);
        }
        let mut inside = vec![false; g.num_states()];
        for &v in &w.scc {
            inside[v] = true;
        }
        let profiles = w.edges.iter().cloned().collect();
        PureStrategy { g, w, graph, inside, profiles }
    }

    fn hop(&self, from: StateId, to: StateId) -> Vec<StateId> {
        shortest_path(&self.graph, from, to, &self.inside).expect("component is strongly connected")
    }

    /// `zeta_n^i`: each cycle of family `i` repeated `n` times, joined by
    /// shortest paths and closed back to the start of the first cycle. The
    /// returned walk starts at that vertex and omits the final return to it.
    fn zeta(&self, i: usize, n: usize) -> Vec<StateId> {
        let fam = &self.w.cycles.cycles[i];
        let mut walk = Vec::new();
        for (c, cyc) in fam.iter().enumerate() {
            for _ in 0..n {
                walk.extend_from_slice(cyc);
            }
            let next = fam[(c + 1) % fam.len()][0];
            let path = self.hop(cyc[0], next);
            walk.extend_from_slice(&path[..path.len() - 1]);
        }
        walk
    }

    /// The first `len` states of the equilibrium play: the approach, then
    /// for `n = 1, 2, ...` the walk `zeta_n^(n mod k)` repeated `n!` times
    /// followed by a shortest path to the start of the next one.
    pub fn on_path(&self, len: usize) -> Vec<StateId> {
        let k = self.w.cycles.cycles.len();
        let mut out: Vec<StateId> = self.w.approach.clone();
        let entry = out.pop().expect("approach starts at the initial state");
        // the approach may enter the component away from the first cycle
        let into = self.hop(entry, self.zeta(1 % k, 1)[0]);
        out.extend_from_slice(&into[..into.len() - 1]);
        let mut n = 1usize;
        let mut reps: u128 = 1;
        while out.len() < len {
            let walk = self.zeta(n % k, n);
            let mut r = 0u128;
            while r < reps && out.len() < len {
                out.extend_from_slice(&walk);
                r += 1;
            }
            let next = self.zeta((n + 1) % k, n + 1)[0];
            let path = self.hop(walk[0], next);
            out.extend_from_slice(&path[..path.len() - 1]);
            n += 1;
            reps = reps.saturating_mul(n as u128);
        }
        out.truncate(len);
        out
    }

    /// The profile stored for the on-path step `s -> t`.
    pub fn on_path_profile(&self, s: StateId, t: StateId) -> &ActionProfile {
        &self.profiles[&(s, t)]
    }

    /// The profile played after a history of states `states[0..=m]` and
    /// profiles `profiles[0..m]`, starting at the initial state.
    pub fn action(&self, states: &[StateId], profiles: &[ActionProfile]) -> ActionProfile {
        assert_eq!(states.len(), profiles.len() + 1, "history shape");
        let path = self.on_path(states.len() + 1);
        for (m, a) in profiles.iter().enumerate() {
            let expected = self.on_path_profile(path[m], path[m + 1]);
            if a == expected {
                continue;
            }
            let diff: Vec<Player> = (0..self.g.players()).filter(|&p| a[p] != expected[p]).collect();
            let cur = *states.last().unwrap();
            return match diff.as_slice() {
                [i] => self.w.punish[*i].at(cur).to_vec(),
                _ => vec![0; self.g.players()],
            };
        }
        let m = states.len() - 1;
        self.on_path_profile(path[m], path[m + 1]).clone()
    }

    pub fn describe(&self) -> String {
        let g = self.g;
        let mut out = String::new();
        let names = |v: &[StateId]| v.iter().map(|&s| g.name(s).to_string()).collect::<Vec<_>>().join(" ");
        let _ = writeln!(out, "approach: {}", names(&self.w.approach));
        for (i, fam) in self.w.cycles.cycles.iter().enumerate() {
            for c in fam {
                let _ = writeln!(out, "cycle family {i}: {}", names(c));
            }
        }
        let _ = writeln!(out, "schedule: {}", self.w.cycles);
        let _ = writeln!(out, "on the play: use the stored secure profile of each step");
        for i in 0..g.players() {
            let prof: Vec<String> = (0..g.num_states())
                .map(|s| format!("{}={}", g.name(s), g.profile_labels(s, self.w.punish[i].at(s)).join(",")))
                .collect();
            let _ = writeln!(out, "after a deviation by player {i}: {}", prof.join(" "));
        }
        let _ = writeln!(out, "after any other divergence: every player's first action");
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reductions::builtin_example;

    fn r(n: i64, d: i64) -> ExtRational {
        ExtRational::Finite(Rational::new(n, d))
    }

    #[test]
    fn fig4_pure_equilibrium() {
        let g = builtin_example("fig4").unwrap();
        let x = vec![r(1, 1), ExtRational::NegInf, ExtRational::NegInf];
        let y = vec![ExtRational::PosInf; 3];
        let w = decide_pure_ne(&g, 0, &x, &y).unwrap();
        assert_eq!(w.payoff[0], Rational::one());
        let st = PureStrategy::new(&g, &w);
        let play = st.on_path(4);
        let names: Vec<&str> = play.iter().map(|&s| g.name(s)).collect();
        assert_eq!(names, ["s0", "s1", "goal", "goal"]);
        // player 1 deviates at s0 towards s2; player 0 answers with "right"
        let s0 = g.id("s0").unwrap();
        let s2 = g.id("s2").unwrap();
        let dev = vec![0, g.action_index(s0, 1, "s2").unwrap(), 0];
        let a = st.action(&[s0, s2], &[dev]);
        assert_eq!(g.actions(s2, 0)[a[0]], "right");
        let t = decide_pure_ne_terminal(&g, 0, &x, &y).unwrap().unwrap();
        assert_eq!(t.payoff[0], Rational::one());
    }

    #[test]
    fn fig3_secure_edges() {
        let g = builtin_example("fig3").unwrap();
        let pt = pval_table(&g);
        let z = vec![r(1, 1), r(2, 1), r(0, 1)];
        let sg = secure_graph(&g, &pt, &z);
        assert!(sg.profile(g.id("s1").unwrap(), g.id("s2").unwrap()).is_none());
        let top = secure_graph(&g, &pt, &vec![ExtRational::PosInf; 3]);
        let succ: usize = (0..g.num_states()).map(|s| g.successors(s).len()).sum();
        assert_eq!(top.graph.edges().len(), succ);
        let x = vec![r(1, 1000), ExtRational::NegInf, ExtRational::NegInf];
        assert!(decide_pure_ne(&g, 0, &x, &vec![ExtRational::PosInf; 3]).is_none());
        assert!(decide_pure_ne_terminal(&g, 0, &x, &vec![ExtRational::PosInf; 3]).unwrap().is_none());
    }

    #[test]
    fn g1_has_no_pure_equilibrium() {
        let g = builtin_example("G1").unwrap();
        let x = vec![ExtRational::NegInf; 2];
        let y = vec![ExtRational::PosInf; 2];
        assert!(decide_pure_ne(&g, 0, &x, &y).is_none());
        assert!(decide_pure_ne_terminal(&g, 0, &x, &y).unwrap().is_none());
    }
}
