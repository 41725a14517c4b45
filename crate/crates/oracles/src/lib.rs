//! Brute-force reference oracles. Everything here is exponential and meant
//! for the small instances of the test batteries; none of it shares code
//! with the solvers it checks beyond the data types.

use limitavg::game::{lasso_of, lasso_payoff, Game, Player, PositionalProfile, StateId, StationaryProfile};
use limitavg::graph::WeightedGraph;
use limitavg::numerics::{solve_linear_system, LinearProgram, LinearSolution, Sense};
use limitavg::reductions::CnfFormula;
use limitavg::zerosum::{MeanPayoffGame, Side};
use limitavg::{ExtRational, Rational};

/// Every simple cycle of `g`, each listed once from its least vertex.
pub fn simple_cycles(g: &WeightedGraph) -> Vec<Vec<usize>> {
    fn dfs(g: &WeightedGraph, start: usize, path: &mut Vec<usize>, on: &mut [bool], out: &mut Vec<Vec<usize>>) {
        let u = *path.last().unwrap();
        for v in g.successors(u) {
            if v == start {
                out.push(path.clone());
            } else if v > start && !on[v] {
                on[v] = true;
                path.push(v);
                dfs(g, start, path, on, out);
                path.pop();
                on[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    let mut on = vec![false; g.num_vertices()];
    for s in 0..g.num_vertices() {
        on[s] = true;
        dfs(g, s, &mut vec![s], &mut on, &mut out);
        on[s] = false;
    }
    out
}

fn reach(g: &WeightedGraph, from: usize) -> Vec<bool> {
    let mut seen = vec![false; g.num_vertices()];
    let mut stack = vec![from];
    seen[from] = true;
    while let Some(u) = stack.pop() {
        for v in g.successors(u) {
            if !seen[v] {
                seen[v] = true;
                stack.push(v);
            }
        }
    }
    seen
}

fn mean(g: &WeightedGraph, cycle: &[usize], i: usize) -> Rational {
    cycle.iter().map(|&v| g.weight(v, i)).sum::<Rational>() / Rational::from_int(cycle.len() as i64)
}

/// Mean weights (coordinate `i`) of the simple cycles reachable from `from`.
pub fn reachable_cycle_means(g: &WeightedGraph, i: usize, from: usize) -> Vec<Rational> {
    let seen = reach(g, from);
    simple_cycles(g).into_iter().filter(|c| seen[c[0]]).map(|c| mean(g, &c, i)).collect()
}

pub fn max_cycle_mean(g: &WeightedGraph, i: usize, from: usize) -> Option<Rational> {
    reachable_cycle_means(g, i, from).into_iter().max()
}

pub fn min_cycle_mean(g: &WeightedGraph, i: usize, from: usize) -> Option<Rational> {
    reachable_cycle_means(g, i, from).into_iter().min()
}

/// Mean weight of the lasso that the successor choice `next` traces from `v`.
fn lasso_mean(weight: &dyn Fn(usize) -> Rational, next: &[usize], v: usize) -> Rational {
    let mut pos = vec![usize::MAX; next.len()];
    let mut path = Vec::new();
    let mut u = v;
    while pos[u] == usize::MAX {
        pos[u] = path.len();
        path.push(u);
        u = next[u];
    }
    let cycle = &path[pos[u]..];
    cycle.iter().map(|&w| weight(w)).sum::<Rational>() / Rational::from_int(cycle.len() as i64)
}

/// Calls `f` on every choice of one entry per position, `0..sizes[j]`.
pub fn for_each_choice(sizes: &[usize], mut f: impl FnMut(&[usize])) {
    if sizes.iter().any(|&n| n == 0) {
        return;
    }
    let mut idx = vec![0usize; sizes.len()];
    loop {
        f(&idx);
        let mut j = sizes.len();
        loop {
            if j == 0 {
                return;
            }
            j -= 1;
            idx[j] += 1;
            if idx[j] < sizes[j] {
                break;
            }
            idx[j] = 0;
        }
    }
}

/// `(max-min, min-max)` per vertex over all pairs of positional strategies.
pub fn mpg_values(m: &MeanPayoffGame) -> (Vec<Rational>, Vec<Rational>) {
    let n = m.num_vertices();
    let max_v: Vec<usize> = (0..n).filter(|&u| m.owner(u) == Side::Max).collect();
    let min_v: Vec<usize> = (0..n).filter(|&u| m.owner(u) == Side::Min).collect();
    let sizes = |vs: &[usize]| vs.iter().map(|&u| m.successors(u).len()).collect::<Vec<_>>();
    let weight = |u: usize| m.weight(u).clone();
    let payoff = |cmax: &[usize], cmin: &[usize]| {
        let mut next = vec![0; n];
        for (j, &u) in max_v.iter().enumerate() {
            next[u] = m.successors(u)[cmax[j]];
        }
        for (j, &u) in min_v.iter().enumerate() {
            next[u] = m.successors(u)[cmin[j]];
        }
        (0..n).map(|v| lasso_mean(&weight, &next, v)).collect::<Vec<_>>()
    };
    let mut maxmin: Vec<Option<Rational>> = vec![None; n];
    let mut minmax: Vec<Option<Rational>> = vec![None; n];
    // optimum taken per vertex, so uniform optimal strategies are not assumed
    for_each_choice(&sizes(&max_v), |cmax| {
        let mut worst: Vec<Option<Rational>> = vec![None; n];
        for_each_choice(&sizes(&min_v), |cmin| {
            for (v, p) in payoff(cmax, cmin).into_iter().enumerate() {
                if worst[v].as_ref().map_or(true, |w| p < *w) {
                    worst[v] = Some(p);
                }
            }
        });
        for v in 0..n {
            let w = worst[v].clone().unwrap();
            if maxmin[v].as_ref().map_or(true, |b| w > *b) {
                maxmin[v] = Some(w);
            }
        }
    });
    for_each_choice(&sizes(&min_v), |cmin| {
        let mut best: Vec<Option<Rational>> = vec![None; n];
        for_each_choice(&sizes(&max_v), |cmax| {
            for (v, p) in payoff(cmax, cmin).into_iter().enumerate() {
                if best[v].as_ref().map_or(true, |b| p > *b) {
                    best[v] = Some(p);
                }
            }
        });
        for v in 0..n {
            let b = best[v].clone().unwrap();
            if minmax[v].as_ref().map_or(true, |w| b < *w) {
                minmax[v] = Some(b);
            }
        }
    });
    let un = |v: Vec<Option<Rational>>| v.into_iter().map(Option::unwrap).collect();
    (un(maxmin), un(minmax))
}

/// What player `i` can guarantee from each state when the others commit to
/// a positional joint choice first and `i` answers with any play.
pub fn pval(g: &Game, i: Player) -> Vec<Rational> {
    let n = g.num_states();
    // joint choices of the others, with player i's component fixed to 0
    let options: Vec<Vec<Vec<usize>>> = (0..n)
        .map(|s| g.profiles(s).filter(|a| a[i] == 0).collect())
        .collect();
    let sizes: Vec<usize> = options.iter().map(Vec::len).collect();
    let mut best: Vec<Option<Rational>> = vec![None; n];
    for_each_choice(&sizes, |c| {
        let mut wg = WeightedGraph::new(1);
        for s in 0..n {
            wg.add_vertex(g.name(s), vec![g.reward(s, i).clone()]);
        }
        for s in 0..n {
            for (_, t) in g.deviations(s, &options[s][c[s]], i) {
                wg.add_edge(s, t);
            }
        }
        for (s, b) in best.iter_mut().enumerate() {
            let v = max_cycle_mean(&wg, 0, s).unwrap();
            if b.as_ref().map_or(true, |w| v < *w) {
                *b = Some(v);
            }
        }
    });
    best.into_iter().map(Option::unwrap).collect()
}

pub fn is_hamiltonian(g: &WeightedGraph) -> bool {
    let n = g.num_vertices();
    if n == 0 {
        return false;
    }
    fn go(g: &WeightedGraph, path: &mut Vec<usize>, used: &mut [bool]) -> bool {
        let u = *path.last().unwrap();
        if path.len() == used.len() {
            return g.successors(u).any(|v| v == path[0]);
        }
        for v in g.successors(u).collect::<Vec<_>>() {
            if !used[v] {
                used[v] = true;
                path.push(v);
                if go(g, path, used) {
                    return true;
                }
                path.pop();
                used[v] = false;
            }
        }
        false
    }
    let mut used = vec![false; n];
    used[0] = true;
    go(g, &mut vec![0], &mut used)
}

pub fn is_satisfiable(phi: &CnfFormula) -> bool {
    let n = phi.vars();
    (0..1u64 << n).any(|m| {
        let a: Vec<bool> = (0..n).map(|j| m >> j & 1 == 1).collect();
        phi.eval(&a)
    })
}

/// All positional profiles of a game.
pub fn positional_profiles(g: &Game, mut f: impl FnMut(&PositionalProfile)) {
    let slots: Vec<(StateId, Player)> =
        (0..g.num_states()).flat_map(|s| (0..g.players()).map(move |p| (s, p))).collect();
    let sizes: Vec<usize> = slots.iter().map(|&(s, p)| g.num_actions(s, p)).collect();
    for_each_choice(&sizes, |c| {
        let mut sigma = PositionalProfile::first(g);
        for (j, &(s, p)) in slots.iter().enumerate() {
            sigma.set(s, p, c[j]);
        }
        f(&sigma);
    });
}

/// Best lasso payoff player `i` reaches by switching to another positional
/// strategy while the others keep `sigma`.
pub fn best_positional_deviation(g: &Game, sigma: &PositionalProfile, i: Player, s0: StateId) -> Rational {
    let sizes: Vec<usize> = (0..g.num_states()).map(|s| g.num_actions(s, i)).collect();
    let mut best: Option<Rational> = None;
    for_each_choice(&sizes, |c| {
        let mut tau = sigma.clone();
        for (s, &b) in c.iter().enumerate() {
            tau.set(s, i, b);
        }
        let v = lasso_payoff(g, &lasso_of(g, &tau, s0))[i].clone();
        if best.as_ref().map_or(true, |b| v > *b) {
            best = Some(v);
        }
    });
    best.unwrap()
}

fn within(x: &[ExtRational], z: &[Rational], y: &[ExtRational]) -> bool {
    z.iter().zip(x).zip(y).all(|((v, lo), hi)| lo.le_finite(v) && hi.ge_finite(v))
}

/// Some positional Nash equilibrium with payoff in `[x, y]`, by trying every
/// profile and every positional deviation.
pub fn positional_ne(g: &Game, s0: StateId, x: &[ExtRational], y: &[ExtRational]) -> Option<PositionalProfile> {
    let mut found = None;
    positional_profiles(g, |sigma| {
        if found.is_some() {
            return;
        }
        let z = lasso_payoff(g, &lasso_of(g, sigma, s0));
        if !within(x, &z, y) {
            return;
        }
        if (0..g.players()).all(|i| best_positional_deviation(g, sigma, i, s0) <= z[i]) {
            found = Some(sigma.clone());
        }
    });
    found
}

/// A lasso play, through states and profiles, whose every step leaves no
/// single deviator a state with punishment value above its payoff. Any hit
/// is the play of a pure equilibrium; only lassos whose stem and loop are
/// simple are searched, so a miss proves nothing.
pub fn secure_lasso(
    g: &Game,
    pval: &[Vec<Rational>],
    s0: StateId,
    x: &[ExtRational],
    y: &[ExtRational],
) -> Option<(Vec<StateId>, Vec<Rational>)> {
    fn go(
        g: &Game,
        pval: &[Vec<Rational>],
        x: &[ExtRational],
        y: &[ExtRational],
        states: &mut Vec<StateId>,
        profiles: &mut Vec<Vec<usize>>,
    ) -> Option<(Vec<StateId>, Vec<Rational>)> {
        let s = *states.last().unwrap();
        for a in g.profiles(s).collect::<Vec<_>>() {
            let t = g.next(s, &a);
            profiles.push(a);
            if let Some(start) = states.iter().position(|&u| u == t) {
                let cycle = &states[start..];
                let len = Rational::from_int(cycle.len() as i64);
                let z: Vec<Rational> =
                    (0..g.players()).map(|i| cycle.iter().map(|&u| g.reward(u, i)).sum::<Rational>() / &len).collect();
                let secure = states.iter().zip(profiles.iter()).all(|(&u, b)| {
                    (0..g.players()).all(|i| g.deviations(u, b, i).all(|(_, w)| pval[i][w] <= z[i]))
                });
                if secure && within(x, &z, y) {
                    let mut play = states.clone();
                    play.push(t);
                    return Some((play, z));
                }
            } else if states.len() < 2 * g.num_states() {
                states.push(t);
                if let Some(hit) = go(g, pval, x, y, states, profiles) {
                    return Some(hit);
                }
                states.pop();
            }
            profiles.pop();
        }
        None
    }
    go(g, pval, x, y, &mut vec![s0], &mut Vec::new())
}

/// Optimum of a bounded linear program over at most a handful of variables,
/// by solving every square subsystem of tight constraints and keeping the
/// best feasible vertex. Returns `None` when no vertex is feasible.
pub fn lp_by_vertices(lp: &LinearProgram) -> Option<Rational> {
    let n = lp.num_vars();
    let mut rows: Vec<(Vec<Rational>, Rational)> =
        lp.constraints().iter().map(|c| (c.coeffs.clone(), c.rhs.clone())).collect();
    for v in 0..n {
        if lp.is_nonneg(v) {
            let mut e = vec![Rational::zero(); n];
            e[v] = Rational::one();
            rows.push((e, Rational::zero()));
        }
    }
    let obj = lp.objective().expect("objective set");
    let mut best: Option<Rational> = None;
    let m = rows.len();
    // a vertex is the unique solution of n tight rows
    for mask in 0u64..1 << m {
        if mask.count_ones() as usize != n {
            continue;
        }
        let sub: Vec<(Vec<Rational>, Rational)> =
            (0..m).filter(|&j| mask >> j & 1 == 1).map(|j| rows[j].clone()).collect();
        let LinearSolution::Unique(x) = solve_linear_system(&sub, n) else { continue };
        if !lp.satisfied_by(&x) {
            continue;
        }
        let val = lp.objective_value(&x).unwrap();
        let better = match (&best, obj.sense) {
            (None, _) => true,
            (Some(b), Sense::Minimize) => val < *b,
            (Some(b), Sense::Maximize) => val > *b,
        };
        if better {
            best = Some(val);
        }
    }
    best
}

/// Long-run average reward under a stationary profile, approximated in
/// floating point by averaging the state distribution over `steps` steps.
pub fn cesaro_payoff(g: &Game, sigma: &StationaryProfile, s0: StateId, steps: usize) -> Vec<f64> {
    let n = g.num_states();
    let rows: Vec<Vec<(StateId, f64)>> = (0..n)
        .map(|s| sigma.successor_distribution(g, s).into_iter().map(|(t, q)| (t, q.to_f64())).collect())
        .collect();
    let mut dist = vec![0.0; n];
    dist[s0] = 1.0;
    let mut acc = vec![0.0; n];
    for _ in 0..steps {
        for s in 0..n {
            acc[s] += dist[s];
        }
        let mut next = vec![0.0; n];
        for s in 0..n {
            for &(t, q) in &rows[s] {
                next[t] += dist[s] * q;
            }
        }
        dist = next;
    }
    (0..g.players())
        .map(|i| (0..n).map(|s| acc[s] * g.reward(s, i).to_f64()).sum::<f64>() / steps as f64)
        .collect()
}

/// Best payoff of player `i` over its deterministic stationary deviations,
/// each evaluated in floating point by [`cesaro_payoff`].
pub fn best_stationary_deviation(g: &Game, sigma: &StationaryProfile, i: Player, s0: StateId, steps: usize) -> f64 {
    let sizes: Vec<usize> = (0..g.num_states()).map(|s| g.num_actions(s, i)).collect();
    let mut best = f64::NEG_INFINITY;
    for_each_choice(&sizes, |c| {
        let mut tau = sigma.clone();
        for (s, &b) in c.iter().enumerate() {
            let mut d = vec![Rational::zero(); sizes[s]];
            d[b] = Rational::one();
            tau.set(s, i, d);
        }
        best = best.max(cesaro_payoff(g, &tau, s0, steps)[i]);
    });
    best
}
