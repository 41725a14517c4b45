//! Stationary profiles: exact payoffs of the induced Markov chain, best
//! responses in the induced MDP, and the equilibrium check built on both.

mod smt;

pub use smt::{
    build_certificate, evaluate_document, export_statne_constraints, parse_document, ConstraintCounts, SmtDocument,
    SmtError, SmtExpr,
};

use std::collections::HashMap;

use serde::Serialize;

use crate::game::{in_box, Game, Player, ProfileError, StateId, StationaryProfile};
use crate::graph::{reachable, sccs, WeightedGraph};
use crate::numerics::{
    lp_solve, solve_linear_system, ExtRational, LinearProgram, LinearSolution, LpOutcome, Rational, Relation, Sense,
};

/// The Markov chain a stationary profile induces on the states of a game.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InducedChain {
    /// `rows[s]`: successors of `s` with positive probability.
    pub rows: Vec<Vec<(StateId, Rational)>>,
    /// `rewards[i][s]`.
    pub rewards: Vec<Vec<Rational>>,
}

impl InducedChain {
    pub fn new(g: &Game, sigma: &StationaryProfile) -> Self {
        let rows: Vec<_> = (0..g.num_states()).map(|s| sigma.successor_distribution(g, s)).collect();
        for row in &rows {
            assert_eq!(row.iter().map(|(_, q)| q).sum::<Rational>(), Rational::one(), "chain row sums to 1");
        }
        let rewards = (0..g.players()).map(|i| (0..g.num_states()).map(|s| g.reward(s, i).clone()).collect()).collect();
        InducedChain { rows, rewards }
    }

    pub fn num_states(&self) -> usize {
        self.rows.len()
    }

    fn support(&self) -> WeightedGraph {
        let mut wg = WeightedGraph::new(0);
        for s in 0..self.num_states() {
            wg.add_vertex(&s.to_string(), Vec::new());
        }
        for (s, row) in self.rows.iter().enumerate() {
            for (t, _) in row {
                wg.add_edge(s, *t);
            }
        }
        wg
    }

    /// The recurrent classes: strongly connected components nothing leaves.
    pub fn recurrent_classes(&self) -> Vec<Vec<StateId>> {
        let wg = self.support();
        let mut comp = vec![usize::MAX; self.num_states()];
        let cs = sccs(&wg);
        for (c, scc) in cs.iter().enumerate() {
            for &v in &scc.vertices {
                comp[v] = c;
            }
        }
        cs.into_iter()
            .enumerate()
            .filter(|(c, scc)| scc.vertices.iter().all(|&v| self.rows[v].iter().all(|(t, _)| comp[*t] == *c)))
            .map(|(_, scc)| scc.vertices)
            .collect()
    }

    /// Stationary distribution of a recurrent class, aligned with `class`.
    pub fn stationary_distribution(&self, class: &[StateId]) -> Vec<Rational> {
        let n = class.len();
        let pos: HashMap<StateId, usize> = class.iter().enumerate().map(|(j, &s)| (s, j)).collect();
        // pi (P - I) = 0, one balance row replaced by normalisation
        let mut rows: Vec<(Vec<Rational>, Rational)> = vec![(vec![Rational::zero(); n], Rational::zero()); n];
        for (j, &s) in class.iter().enumerate() {
            rows[j].0[j] -= Rational::one();
            for (t, q) in &self.rows[s] {
                rows[pos[t]].0[j] += q;
            }
        }
        rows[0] = (vec![Rational::one(); n], Rational::one());
        solve_linear_system(&rows, n).some_solution().expect("recurrent class has a stationary distribution").to_vec()
    }

    /// Expected limit-average reward of every player from every state,
    /// indexed `[i][s]`.
    pub fn gains(&self) -> Vec<Vec<Rational>> {
        let n = self.num_states();
        let k = self.rewards.len();
        let mut gain: Vec<Vec<Option<Rational>>> = vec![vec![None; n]; k];
        for class in self.recurrent_classes() {
            let pi = self.stationary_distribution(&class);
            for i in 0..k {
                let v: Rational = class.iter().zip(&pi).map(|(&s, p)| p * &self.rewards[i][s]).sum();
                for &s in &class {
                    gain[i][s] = Some(v.clone());
                }
            }
        }
        let transient: Vec<StateId> = (0..n).filter(|&s| gain[0].get(s).map_or(true, Option::is_none)).collect();
        if k == 0 || transient.is_empty() {
            return gain.into_iter().map(|r| r.into_iter().map(Option::unwrap).collect()).collect();
        }
        let pos: HashMap<StateId, usize> = transient.iter().enumerate().map(|(j, &s)| (s, j)).collect();
        for i in 0..k {
            let m = transient.len();
            let rows: Vec<(Vec<Rational>, Rational)> = transient
                .iter()
                .map(|&s| {
                    let mut a = vec![Rational::zero(); m];
                    a[pos[&s]] += Rational::one();
                    let mut b = Rational::zero();
                    for (t, q) in &self.rows[s] {
                        match pos.get(t) {
                            Some(&j) => a[j] -= q,
                            None => b += q * gain[i][*t].as_ref().unwrap(),
                        }
                    }
                    (a, b)
                })
                .collect();
            let LinearSolution::Unique(x) = solve_linear_system(&rows, m) else {
                unreachable!("transient system is nonsingular")
            };
            for (&s, v) in transient.iter().zip(x) {
                gain[i][s] = Some(v);
            }
        }
        gain.into_iter().map(|r| r.into_iter().map(Option::unwrap).collect()).collect()
    }

    /// Some bias vector `b` with `b_s + z_s = r_i(s) + sum_t P(s,t) b_t`, for
    /// the gains `z` of player `i`.
    pub fn bias(&self, i: Player, z: &[Rational]) -> Vec<Rational> {
        let n = self.num_states();
        let rows: Vec<(Vec<Rational>, Rational)> = (0..n)
            .map(|s| {
                let mut a = vec![Rational::zero(); n];
                a[s] += Rational::one();
                for (t, q) in &self.rows[s] {
                    a[*t] -= q;
                }
                (a, &self.rewards[i][s] - &z[s])
            })
            .collect();
        solve_linear_system(&rows, n).some_solution().expect("gains admit a bias").to_vec()
    }
}

/// The MDP left to player `i` when everybody else plays the profile.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InducedMdp {
    pub player: Player,
    /// `kernels[s][b]`: successor distribution when `i` plays `b` at `s`.
    pub kernels: Vec<Vec<Vec<(StateId, Rational)>>>,
    pub rewards: Vec<Rational>,
}

impl InducedMdp {
    pub fn new(g: &Game, sigma: &StationaryProfile, i: Player) -> Self {
        let kernels: Vec<Vec<_>> = (0..g.num_states())
            .map(|s| (0..g.num_actions(s, i)).map(|b| sigma.deviation_distribution(g, s, i, b)).collect())
            .collect();
        for row in kernels.iter().flatten() {
            assert_eq!(row.iter().map(|(_, q)| q).sum::<Rational>(), Rational::one(), "kernel row sums to 1");
        }
        let rewards = (0..g.num_states()).map(|s| g.reward(s, i).clone()).collect();
        InducedMdp { player: i, kernels, rewards }
    }

    /// States reachable from `s0` under some choice of actions.
    pub fn reachable_from(&self, s0: StateId) -> Vec<StateId> {
        let mut wg = WeightedGraph::new(0);
        for s in 0..self.kernels.len() {
            wg.add_vertex(&s.to_string(), Vec::new());
        }
        for (s, ks) in self.kernels.iter().enumerate() {
            for (t, _) in ks.iter().flatten() {
                wg.add_edge(s, *t);
            }
        }
        let seen = reachable(&wg, s0);
        (0..self.kernels.len()).filter(|&s| seen[s]).collect()
    }

    /// Optimal gains `v` and a matching bias `h` on `states`, which must be
    /// closed under every action. Solves: minimise the sum of `v` subject to
    /// `v_s >= sum_t p(t|s,b) v_t` and `v_s + h_s >= r(s) + sum_t p(t|s,b) h_t`.
    pub fn optimal_values(&self, states: &[StateId]) -> (Vec<Rational>, Vec<Rational>) {
        let n = states.len();
        let pos: HashMap<StateId, usize> = states.iter().enumerate().map(|(j, &s)| (s, j)).collect();
        let mut lp = LinearProgram::new();
        for &s in states {
            lp.add_var(&format!("v{s}"));
        }
        for &s in states {
            lp.add_var(&format!("h{s}"));
        }
        for &s in states {
            let j = pos[&s];
            for kernel in &self.kernels[s] {
                let mut v_terms: Vec<(usize, Rational)> = vec![(j, Rational::one())];
                let mut h_terms: Vec<(usize, Rational)> = vec![(j, Rational::one()), (n + j, Rational::one())];
                for (t, q) in kernel {
                    let jt = pos[t];
                    v_terms.push((jt, -q.clone()));
                    h_terms.push((n + jt, -q.clone()));
                }
                lp.add_sparse(&v_terms, Relation::Ge, Rational::zero());
                lp.add_sparse(&h_terms, Relation::Ge, self.rewards[s].clone());
            }
        }
        let obj: Vec<(usize, Rational)> = (0..n).map(|j| (j, Rational::one())).collect();
        lp.set_sparse_objective(Sense::Minimize, &obj);
        match lp_solve(&lp) {
            LpOutcome::Feasible { assignment, .. } => (assignment[..n].to_vec(), assignment[n..].to_vec()),
            other => unreachable!("the value program is feasible and bounded, got {other:?}"),
        }
    }
}

/// Expected limit-average payoff of every player from `s0`.
pub fn mc_mean_payoff(g: &Game, sigma: &StationaryProfile, s0: StateId) -> Vec<Rational> {
    InducedChain::new(g, sigma).gains().into_iter().map(|r| r[s0].clone()).collect()
}

/// The best payoff player `i` can secure from `s0` against the others'
/// stationary strategies.
pub fn best_response_value(g: &Game, sigma: &StationaryProfile, i: Player, s0: StateId) -> Rational {
    let mdp = InducedMdp::new(g, sigma, i);
    let states = mdp.reachable_from(s0);
    let (v, _) = mdp.optimal_values(&states);
    let j = states.iter().position(|&s| s == s0).unwrap();
    v[j].clone()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StatVerdict {
    pub payoff: Vec<Rational>,
    pub best_response: Vec<Rational>,
    /// `best_response[i] - payoff[i]`; positive means player `i` gains by
    /// deviating.
    pub slack: Vec<Rational>,
    pub is_ne: bool,
    pub in_box: bool,
}

pub fn verify_stationary_ne(
    g: &Game,
    s0: StateId,
    sigma: &StationaryProfile,
    x: &[ExtRational],
    y: &[ExtRational],
) -> Result<StatVerdict, ProfileError> {
    sigma.validate(g)?;
    let payoff = mc_mean_payoff(g, sigma, s0);
    let best_response: Vec<Rational> = (0..g.players()).map(|i| best_response_value(g, sigma, i, s0)).collect();
    let slack: Vec<Rational> = best_response.iter().zip(&payoff).map(|(v, z)| v - z).collect();
    let is_ne = slack.iter().all(|d| !d.is_positive());
    let in_box = in_box(x, &payoff, y);
    Ok(StatVerdict { payoff, best_response, slack, is_ne, in_box })
}
