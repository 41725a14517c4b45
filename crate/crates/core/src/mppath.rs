//! Existence of an infinite path whose limit-inferior mean reward vector
//! lies in a box, decided per strongly connected component by a linear
//! program over circulations.
//!
//! For each player `i` the program has a normalized circulation `f_i` on the
//! internal edges of the component. Player `i`'s flow fixes its own payoff
//! `z_i = f_i . r_i`, which must lie within the bounds, and every other
//! player's flow must give player `i` at least `z_i`. A path alternating
//! between the flows with growing repetition counts realizes `z` as its
//! limit-inferior payoff.

use std::fmt;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use thiserror::Error;

use crate::graph::{reachable, sccs, shortest_path, WeightedGraph};
use crate::numerics::{denominator_lcm, lp_solve, ExtRational, LinearProgram, LpOutcome, Rational, Relation};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlowSolution {
    /// Internal edges of the component, as global vertex pairs.
    pub edges: Vec<(usize, usize)>,
    /// `flows[i][e]`: player `i`'s circulation on `edges[e]`.
    pub flows: Vec<Vec<Rational>>,
    /// `achieved[i]`: the mean reward of player `i` under its own flow.
    pub achieved: Vec<Rational>,
}

impl FlowSolution {
    /// Mean reward of player `j` under player `i`'s flow.
    pub fn mean(&self, g: &WeightedGraph, i: usize, j: usize) -> Rational {
        self.edges
            .iter()
            .zip(&self.flows[i])
            .filter(|(_, f)| !f.is_zero())
            .map(|(&(u, _), f)| f * g.weight(u, j))
            .sum()
    }
}

fn bounds_unsatisfiable(x: &[ExtRational], y: &[ExtRational]) -> bool {
    x.iter().zip(y).any(|(lo, hi)| *lo == ExtRational::PosInf || *hi == ExtRational::NegInf || lo > hi)
}

fn internal_edges(g: &WeightedGraph, scc: &[usize]) -> Vec<(usize, usize)> {
    let mut inside = vec![false; g.num_vertices()];
    for &v in scc {
        inside[v] = true;
    }
    g.edges().iter().copied().filter(|&(u, v)| inside[u] && inside[v]).collect()
}

/// Adds one normalized circulation over `edges`; returns its variables.
fn add_circulation(lp: &mut LinearProgram, tag: &str, scc: &[usize], edges: &[(usize, usize)]) -> Vec<usize> {
    let vars: Vec<usize> = edges
        .iter()
        .map(|(u, v)| lp.add_nonneg_var(&format!("f{tag}_{u}_{v}")))
        .collect();
    let one = Rational::one();
    let total: Vec<(usize, Rational)> = vars.iter().map(|&f| (f, one.clone())).collect();
    lp.add_sparse(&total, Relation::Eq, one.clone());
    for &w in scc {
        let mut terms = Vec::new();
        for (e, &(u, v)) in edges.iter().enumerate() {
            if v == w {
                terms.push((vars[e], one.clone()));
            }
            if u == w {
                terms.push((vars[e], -&one));
            }
        }
        lp.add_sparse(&terms, Relation::Eq, Rational::zero());
    }
    vars
}

fn payoff_terms(g: &WeightedGraph, edges: &[(usize, usize)], vars: &[usize], j: usize) -> Vec<(usize, Rational)> {
    edges
        .iter()
        .zip(vars)
        .map(|(&(u, _), &f)| (f, g.weight(u, j).clone()))
        .filter(|(_, w)| !w.is_zero())
        .collect()
}

fn add_bounds(lp: &mut LinearProgram, terms: &[(usize, Rational)], lo: &ExtRational, hi: &ExtRational) {
    if let ExtRational::Finite(l) = lo {
        lp.add_sparse(terms, Relation::Ge, l.clone());
    }
    if let ExtRational::Finite(h) = hi {
        lp.add_sparse(terms, Relation::Le, h.clone());
    }
}

fn read_flows(
    g: &WeightedGraph,
    edges: Vec<(usize, usize)>,
    x: &[Rational],
    vars: &[Vec<usize>],
) -> FlowSolution {
    let flows: Vec<Vec<Rational>> = vars.iter().map(|vs| vs.iter().map(|&v| x[v].clone()).collect()).collect();
    let mut sol = FlowSolution { edges, flows, achieved: Vec::new() };
    sol.achieved = (0..g.dims()).map(|i| sol.mean(g, i, i)).collect();
    sol
}

/// The program with one circulation per player, exactly as described in the
/// module documentation.
pub fn scc_lp_full(g: &WeightedGraph, scc: &[usize], x: &[ExtRational], y: &[ExtRational]) -> Option<FlowSolution> {
    if bounds_unsatisfiable(x, y) {
        return None;
    }
    let k = g.dims();
    let edges = internal_edges(g, scc);
    if edges.is_empty() {
        return None;
    }
    let mut lp = LinearProgram::new();
    let vars: Vec<Vec<usize>> = (0..k).map(|i| add_circulation(&mut lp, &i.to_string(), scc, &edges)).collect();
    for i in 0..k {
        let own = payoff_terms(g, &edges, &vars[i], i);
        add_bounds(&mut lp, &own, &x[i], &y[i]);
        for j in 0..k {
            if j == i {
                continue;
            }
            let mut terms = own.clone();
            terms.extend(payoff_terms(g, &edges, &vars[j], i).into_iter().map(|(v, w)| (v, -w)));
            lp.add_sparse(&terms, Relation::Le, Rational::zero());
        }
    }
    match lp_solve(&lp) {
        LpOutcome::Feasible { assignment, .. } => Some(read_flows(g, edges, &assignment, &vars)),
        _ => None,
    }
}

/// A single circulation shared by all players. Feasibility implies
/// feasibility of the full program; when no upper bound is finite (or there
/// is only one player) the converse holds as well.
fn scc_lp_shared(g: &WeightedGraph, scc: &[usize], x: &[ExtRational], y: &[ExtRational]) -> Option<FlowSolution> {
    let edges = internal_edges(g, scc);
    if edges.is_empty() {
        return None;
    }
    let mut lp = LinearProgram::new();
    let vars = add_circulation(&mut lp, "", scc, &edges);
    for i in 0..g.dims() {
        add_bounds(&mut lp, &payoff_terms(g, &edges, &vars, i), &x[i], &y[i]);
    }
    match lp_solve(&lp) {
        LpOutcome::Feasible { assignment, .. } => {
            let all = vec![vars; g.dims()];
            Some(read_flows(g, edges, &assignment, &all))
        }
        _ => None,
    }
}

/// Solves the program for one component. A shared circulation is tried
/// first since it is much smaller; the full program is consulted only when
/// the shared one fails and some upper bound is finite.
pub fn scc_lp(g: &WeightedGraph, scc: &[usize], x: &[ExtRational], y: &[ExtRational]) -> Option<FlowSolution> {
    if bounds_unsatisfiable(x, y) {
        return None;
    }
    if let Some(sol) = scc_lp_shared(g, scc, x, y) {
        return Some(sol);
    }
    let exact = g.dims() == 1 || y.iter().all(|b| *b == ExtRational::PosInf);
    if exact {
        None
    } else {
        scc_lp_full(g, scc, x, y)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathWitness {
    pub scc: Vec<usize>,
    /// Shortest path from the start vertex into the component.
    pub approach: Vec<usize>,
    pub flow: FlowSolution,
}

/// Finds a reachable component whose program is feasible, trying
/// components in reverse topological order.
pub fn feasible_path(g: &WeightedGraph, v0: usize, x: &[ExtRational], y: &[ExtRational]) -> Option<PathWitness> {
    assert_eq!(x.len(), g.dims(), "lower bound arity");
    assert_eq!(y.len(), g.dims(), "upper bound arity");
    if bounds_unsatisfiable(x, y) {
        return None;
    }
    let seen = reachable(g, v0);
    let all = vec![true; g.num_vertices()];
    for c in sccs(g) {
        if !c.has_internal_edge || !seen[c.vertices[0]] {
            continue;
        }
        if let Some(flow) = scc_lp(g, &c.vertices, x, y) {
            let approach = shortest_path(g, v0, c.vertices[0], &all).expect("component is reachable");
            return Some(PathWitness { scc: c.vertices, approach, flow });
        }
    }
    None
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WitnessError {
    #[error("flow of player {0} is not balanced at vertex {1}")]
    Unbalanced(usize, usize),
    #[error("flow of player {0} needs more than {1} edge copies")]
    TooLarge(usize, u64),
    #[error("flow of player {player} gives player {other} mean {mean}, expected {expected}")]
    Mismatch { player: usize, other: usize, mean: Rational, expected: Rational },
}

/// Integer edge multiplicities per player, decomposed into closed walks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleWitness {
    /// `multiplicity[i][e]` copies of `edges[e]` for player `i`; these are the
    /// flows scaled by the least common denominator.
    pub multiplicity: Vec<Vec<u64>>,
    /// `cycles[i]`: closed walks (start vertex not repeated) covering the
    /// multigraph of player `i`, one per connected piece of its support.
    pub cycles: Vec<Vec<Vec<usize>>>,
    /// `means[i][j]`: mean reward of player `j` along player `i`'s cycles.
    pub means: Vec<Vec<Rational>>,
}

impl fmt::Display for CycleWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let k = self.cycles.len();
        write!(
            f,
            "round n = 1, 2, ... plays the cycles of family n mod {k}, each repeated n times in turn and the \
             whole family n! times, moving between cycles along shortest paths"
        )
    }
}

/// Cap on the total number of edge copies per player.
const MAX_COPIES: u64 = 1 << 22;

pub fn extract_cycle_witness(g: &WeightedGraph, flow: &FlowSolution) -> Result<CycleWitness, WitnessError> {
    let k = flow.flows.len();
    let n = g.num_vertices();
    let mut multiplicity = Vec::with_capacity(k);
    let mut cycles = Vec::with_capacity(k);
    for i in 0..k {
        let d = denominator_lcm(&flow.flows[i]);
        let scaled: Vec<u64> = flow.flows[i]
            .iter()
            .map(|f| {
                let c: BigInt = (f * Rational::from(d.clone())).numer();
                c.to_u64().unwrap_or(u64::MAX)
            })
            .collect();
        let total = scaled.iter().fold(0u64, |a, &c| a.saturating_add(c));
        if total > MAX_COPIES {
            return Err(WitnessError::TooLarge(i, MAX_COPIES));
        }
        let mut balance = vec![0i64; n];
        for (&(u, v), &c) in flow.edges.iter().zip(&scaled) {
            balance[u] -= c as i64;
            balance[v] += c as i64;
        }
        if let Some(v) = balance.iter().position(|&b| b != 0) {
            return Err(WitnessError::Unbalanced(i, v));
        }
        cycles.push(euler_walks(n, &flow.edges, &scaled));
        multiplicity.push(scaled);
    }

    let mut means = vec![Vec::with_capacity(k); k];
    for i in 0..k {
        let copies: u64 = multiplicity[i].iter().sum();
        for j in 0..g.dims() {
            let total: Rational = flow
                .edges
                .iter()
                .zip(&multiplicity[i])
                .map(|(&(u, _), &c)| g.weight(u, j) * Rational::from_int(c as i64))
                .sum();
            let mean = total / Rational::from_int(copies as i64);
            let ok = if i == j { mean == flow.achieved[j] } else { mean >= flow.achieved[j] };
            if !ok {
                return Err(WitnessError::Mismatch { player: i, other: j, mean, expected: flow.achieved[j].clone() });
            }
            means[i].push(mean);
        }
    }
    Ok(CycleWitness { multiplicity, cycles, means })
}

/// Hierholzer's algorithm on every connected piece of a balanced multigraph.
fn euler_walks(n: usize, edges: &[(usize, usize)], mult: &[u64]) -> Vec<Vec<usize>> {
    let mut remaining = mult.to_vec();
    let mut out_edges: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (e, &(u, _)) in edges.iter().enumerate() {
        if mult[e] > 0 {
            out_edges[u].push(e);
        }
    }
    let mut ptr = vec![0usize; n];
    let mut walks = Vec::new();
    for start in 0..n {
        if !out_edges[start].iter().any(|&e| remaining[e] > 0) {
            continue;
        }
        let mut stack = vec![start];
        let mut circuit = Vec::new();
        while let Some(&u) = stack.last() {
            while ptr[u] < out_edges[u].len() && remaining[out_edges[u][ptr[u]]] == 0 {
                ptr[u] += 1;
            }
            if ptr[u] < out_edges[u].len() {
                let e = out_edges[u][ptr[u]];
                remaining[e] -= 1;
                stack.push(edges[e].1);
            } else {
                circuit.push(stack.pop().unwrap());
            }
        }
        circuit.reverse();
        circuit.pop();
        walks.push(circuit);
    }
    walks
}
