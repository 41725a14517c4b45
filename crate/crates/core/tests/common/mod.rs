#![allow(dead_code)]

use limitavg::game::{Game, GameBuilder, PositionalProfile, StationaryProfile, TurnBasedBuilder};
use limitavg::graph::WeightedGraph;
use limitavg::reductions::CnfFormula;
use limitavg::zerosum::{MeanPayoffGame, Side};
use limitavg::{ExtRational, Rational};
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

pub fn q(n: i64, d: i64) -> Rational {
    Rational::new(n, d)
}

pub fn fin(n: i64, d: i64) -> ExtRational {
    ExtRational::Finite(Rational::new(n, d))
}

pub fn ninf(k: usize) -> Vec<ExtRational> {
    vec![ExtRational::NegInf; k]
}

pub fn inf(k: usize) -> Vec<ExtRational> {
    vec![ExtRational::PosInf; k]
}

fn add_vertices(rng: &mut StdRng, g: &mut WeightedGraph, n: usize, dims: usize, lo: i64, hi: i64) {
    for v in 0..n {
        let w = (0..dims).map(|_| Rational::from_int(rng.gen_range(lo..=hi))).collect();
        g.add_vertex(&format!("v{v}"), w);
    }
}

/// Every vertex gets at least one successor.
pub fn random_digraph(rng: &mut StdRng, n: usize, dims: usize, lo: i64, hi: i64) -> WeightedGraph {
    let mut g = WeightedGraph::new(dims);
    add_vertices(rng, &mut g, n, dims, lo, hi);
    for u in 0..n {
        g.add_edge(u, rng.gen_range(0..n));
        for v in 0..n {
            if rng.gen_bool(0.3) {
                g.add_edge(u, v);
            }
        }
    }
    g
}

/// Strongly connected: a cycle through all vertices in random order plus
/// random chords.
pub fn random_strongly_connected(rng: &mut StdRng, n: usize, dims: usize, lo: i64, hi: i64) -> WeightedGraph {
    let mut g = WeightedGraph::new(dims);
    add_vertices(rng, &mut g, n, dims, lo, hi);
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    for j in 0..n {
        g.add_edge(order[j], order[(j + 1) % n]);
    }
    for u in 0..n {
        for v in 0..n {
            if rng.gen_bool(0.25) {
                g.add_edge(u, v);
            }
        }
    }
    g
}

pub fn random_mpg(rng: &mut StdRng, n: usize) -> MeanPayoffGame {
    let mut m = MeanPayoffGame::new();
    for _ in 0..n {
        let side = if rng.gen_bool(0.5) { Side::Max } else { Side::Min };
        m.add_vertex(side, Rational::from_int(rng.gen_range(-3..=3)));
    }
    for u in 0..n {
        m.add_edge(u, rng.gen_range(0..n));
        for v in 0..n {
            if rng.gen_bool(0.3) {
                m.add_edge(u, v);
            }
        }
    }
    m
}

pub fn random_cnf(rng: &mut StdRng, max_vars: usize, max_clauses: usize) -> CnfFormula {
    let vars = rng.gen_range(1..=max_vars);
    let m = rng.gen_range(1..=max_clauses);
    let clauses = (0..m)
        .map(|_| {
            let len = rng.gen_range(1..=3);
            (0..len)
                .map(|_| {
                    let v = rng.gen_range(1..=vars) as i32;
                    if rng.gen_bool(0.5) {
                        v
                    } else {
                        -v
                    }
                })
                .collect()
        })
        .collect();
    CnfFormula::new(vars, clauses).unwrap()
}

fn point(g: &Game, s: &str, p: usize, label: &str) -> (usize, usize, Vec<Rational>) {
    let s = g.id(s).unwrap();
    let mut d = vec![Rational::zero(); g.num_actions(s, p)];
    d[g.action_index(s, p, label).unwrap()] = Rational::one();
    (s, p, d)
}

/// On the `fig3` example: players 1 and 2 continue, player 0 plays `down` with
/// probability `q_down` at `s2`.
pub fn fig3_profile(g: &Game, q_down: Rational) -> StationaryProfile {
    let mut sigma = StationaryProfile::from_positional(g, &PositionalProfile::first(g));
    for (s, p, d) in [point(g, "s0", 1, "s1"), point(g, "s1", 2, "s2")] {
        sigma.set(s, p, d);
    }
    let s2 = g.id("s2").unwrap();
    let down = g.action_index(s2, 0, "down").unwrap();
    let mut d = vec![Rational::one() - &q_down; 2];
    d[down] = q_down;
    sigma.set(s2, 0, d);
    sigma
}

const LABELS: [&str; 3] = ["a", "b", "c"];

/// A concurrent game on states `s0..`, starting at `s0`, with one random
/// successor per action profile and integer rewards in `[-2, 2]`.
pub fn random_game(rng: &mut StdRng, players: usize, states: usize, max_actions: usize) -> Game {
    let mut b = GameBuilder::new(players);
    let mut counts = Vec::new();
    for s in 0..states {
        let c: Vec<usize> = (0..players).map(|_| rng.gen_range(1..=max_actions)).collect();
        let actions: Vec<&[&str]> = c.iter().map(|&n| &LABELS[..n]).collect();
        let rewards = (0..players).map(|_| Rational::from_int(rng.gen_range(-2..=2))).collect();
        b.state(&format!("s{s}"), &actions, rewards);
        counts.push(c);
    }
    for (s, c) in counts.iter().enumerate() {
        let mut prof = vec![0; players];
        loop {
            let labels: Vec<&str> = prof.iter().map(|&a| LABELS[a]).collect();
            b.transition(&format!("s{s}"), &labels, &format!("s{}", rng.gen_range(0..states)));
            let Some(p) = (0..players).find(|&p| prof[p] + 1 < c[p]) else { break };
            prof[p] += 1;
            prof[..p].iter_mut().for_each(|a| *a = 0);
        }
    }
    b.initial("s0");
    b.build().unwrap()
}

/// A turn-based game on `s0..` then `t0..`, whose last `terminals` states are absorbing and carry
/// the only nonzero rewards, in `[0, 3]`.
pub fn random_terminal_game(rng: &mut StdRng, players: usize, inner: usize, terminals: usize) -> Game {
    let mut b = TurnBasedBuilder::new(players);
    for s in 0..inner {
        b.state(&format!("s{s}"), rng.gen_range(0..players), vec![Rational::zero(); players]);
    }
    for t in 0..terminals {
        let r = (0..players).map(|_| Rational::from_int(rng.gen_range(0..=3))).collect();
        b.terminal(&format!("t{t}"), r);
    }
    let names: Vec<String> = (0..inner).map(|s| format!("s{s}")).chain((0..terminals).map(|t| format!("t{t}"))).collect();
    for s in 0..inner {
        let from = format!("s{s}");
        b.edge(&from, &names[rng.gen_range(0..names.len())]);
        for to in &names {
            if rng.gen_bool(0.3) {
                b.edge(&from, to);
            }
        }
    }
    b.initial("s0");
    b.build().unwrap()
}

pub fn random_positional(rng: &mut StdRng, g: &Game) -> PositionalProfile {
    let mut sigma = PositionalProfile::first(g);
    for s in 0..g.num_states() {
        for p in 0..g.players() {
            sigma.set(s, p, rng.gen_range(0..g.num_actions(s, p)));
        }
    }
    sigma
}

/// Random distributions with denominators up to 4.
pub fn random_stationary(rng: &mut StdRng, g: &Game) -> StationaryProfile {
    let mut sigma = StationaryProfile::from_positional(g, &PositionalProfile::first(g));
    for s in 0..g.num_states() {
        for p in 0..g.players() {
            let n = g.num_actions(s, p);
            let w: Vec<i64> = (0..n).map(|_| rng.gen_range(0..=3)).collect();
            let total: i64 = w.iter().sum();
            let d = if total == 0 {
                let mut d = vec![Rational::zero(); n];
                d[rng.gen_range(0..n)] = Rational::one();
                d
            } else {
                w.iter().map(|&x| Rational::new(x, total)).collect()
            };
            sigma.set(s, p, d);
        }
    }
    sigma
}

/// A random box: each lower bound is `-inf` or a half-integer in `[-2, 2]`;
/// upper bounds are `+inf` or a half-integer in `[0, 3]`.
pub fn random_box(rng: &mut StdRng, k: usize) -> (Vec<ExtRational>, Vec<ExtRational>) {
    let lo = (0..k)
        .map(|_| if rng.gen_bool(0.5) { ExtRational::NegInf } else { fin(rng.gen_range(-4..=4), 2) })
        .collect();
    let hi = (0..k)
        .map(|_| if rng.gen_bool(0.7) { ExtRational::PosInf } else { fin(rng.gen_range(0..=6), 2) })
        .collect();
    (lo, hi)
}
