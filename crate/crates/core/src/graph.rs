//! Vertex-weighted directed graphs: reachability, strongly connected
//! components and exact optimal mean cycles.
//!
//! Every vertex carries a vector of `dims` weights. An edge is weighted by
//! the weight of its source, so the mean of a cycle is the average vertex
//! weight along it.

use std::collections::HashMap;

use crate::numerics::Rational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedGraph {
    names: Vec<String>,
    edges: Vec<(usize, usize)>,
    out: Vec<Vec<usize>>,
    weights: Vec<Vec<Rational>>,
    dims: usize,
    index: HashMap<String, usize>,
}

impl WeightedGraph {
    pub fn new(dims: usize) -> Self {
        WeightedGraph {
            names: Vec::new(),
            edges: Vec::new(),
            out: Vec::new(),
            weights: Vec::new(),
            dims,
            index: HashMap::new(),
        }
    }

    /// Panics on a weight vector of the wrong length.
    pub fn add_vertex(&mut self, name: &str, weights: Vec<Rational>) -> usize {
        assert_eq!(weights.len(), self.dims, "vertex weight arity");
        let id = self.names.len();
        self.names.push(name.to_string());
        self.index.insert(name.to_string(), id);
        self.out.push(Vec::new());
        self.weights.push(weights);
        id
    }

    /// Adds `u -> v` unless it is already present; returns the edge index.
    pub fn add_edge(&mut self, u: usize, v: usize) -> usize {
        assert!(u < self.names.len() && v < self.names.len(), "edge endpoint out of range");
        if let Some(&e) = self.out[u].iter().find(|&&e| self.edges[e].1 == v) {
            return e;
        }
        self.edges.push((u, v));
        self.out[u].push(self.edges.len() - 1);
        self.edges.len() - 1
    }

    pub fn num_vertices(&self) -> usize {
        self.names.len()
    }

    pub fn dims(&self) -> usize {
        self.dims
    }

    pub fn name(&self, v: usize) -> &str {
        &self.names[v]
    }

    pub fn id(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn out_edges(&self, u: usize) -> &[usize] {
        &self.out[u]
    }

    pub fn successors(&self, u: usize) -> impl Iterator<Item = usize> + '_ {
        self.out[u].iter().map(move |&e| self.edges[e].1)
    }

    pub fn weight(&self, v: usize, i: usize) -> &Rational {
        &self.weights[v][i]
    }

    pub fn weights(&self, v: usize) -> &[Rational] {
        &self.weights[v]
    }

    /// Mean of dimension `i` along a cycle given by its vertices.
    pub fn cycle_mean(&self, cycle: &[usize], i: usize) -> Rational {
        let total: Rational = cycle.iter().map(|&v| self.weight(v, i)).sum();
        total / Rational::from_int(cycle.len() as i64)
    }
}

pub fn reachable(g: &WeightedGraph, from: usize) -> Vec<bool> {
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

/// Shortest path (fewest edges) from `from` to `to`, both endpoints included.
pub fn shortest_path(g: &WeightedGraph, from: usize, to: usize, allowed: &[bool]) -> Option<Vec<usize>> {
    let mut pred = vec![usize::MAX; g.num_vertices()];
    let mut queue = std::collections::VecDeque::from([from]);
    pred[from] = from;
    while let Some(u) = queue.pop_front() {
        if u == to {
            let mut path = vec![to];
            let mut x = to;
            while x != from {
                x = pred[x];
                path.push(x);
            }
            path.reverse();
            return Some(path);
        }
        for v in g.successors(u) {
            if allowed[v] && pred[v] == usize::MAX {
                pred[v] = u;
                queue.push_back(v);
            }
        }
    }
    None
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Scc {
    pub vertices: Vec<usize>,
    /// False for a single vertex without a self-loop.
    pub has_internal_edge: bool,
}

/// Strongly connected components in reverse topological order: every edge
/// between components goes from a later component to an earlier one.
pub fn sccs(g: &WeightedGraph) -> Vec<Scc> {
    let n = g.num_vertices();
    let mut index = vec![usize::MAX; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut out = Vec::new();
    let mut counter = 0;

    for root in 0..n {
        if index[root] != usize::MAX {
            continue;
        }
        // explicit DFS frames: (vertex, next out-edge position)
        let mut frames = vec![(root, 0usize)];
        index[root] = counter;
        low[root] = counter;
        counter += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some(&mut (u, ref mut pos)) = frames.last_mut() {
            if *pos < g.out_edges(u).len() {
                let v = g.edges()[g.out_edges(u)[*pos]].1;
                *pos += 1;
                if index[v] == usize::MAX {
                    index[v] = counter;
                    low[v] = counter;
                    counter += 1;
                    stack.push(v);
                    on_stack[v] = true;
                    frames.push((v, 0));
                } else if on_stack[v] {
                    low[u] = low[u].min(index[v]);
                }
            } else {
                frames.pop();
                if let Some(&(parent, _)) = frames.last() {
                    low[parent] = low[parent].min(low[u]);
                }
                if low[u] == index[u] {
                    let mut comp = Vec::new();
                    loop {
                        let w = stack.pop().unwrap();
                        on_stack[w] = false;
                        comp.push(w);
                        if w == u {
                            break;
                        }
                    }
                    comp.sort_unstable();
                    let has_internal_edge = comp.len() > 1 || g.successors(u).any(|v| v == u);
                    out.push(Scc { vertices: comp, has_internal_edge });
                }
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MeanCycle {
    pub mean: Rational,
    /// Vertices of a simple cycle attaining `mean`, in traversal order.
    pub cycle: Vec<usize>,
}

/// Karp's algorithm on one strongly connected component with an internal
/// edge, maximizing the mean of dimension `i` (negated when `negate`).
fn karp(g: &WeightedGraph, comp: &[usize], i: usize, negate: bool) -> MeanCycle {
    let n = comp.len();
    let mut local = HashMap::with_capacity(n);
    for (j, &v) in comp.iter().enumerate() {
        local.insert(v, j);
    }
    let w: Vec<Rational> = comp
        .iter()
        .map(|&v| if negate { -g.weight(v, i) } else { g.weight(v, i).clone() })
        .collect();
    let adj: Vec<Vec<usize>> = comp
        .iter()
        .map(|&u| g.successors(u).filter_map(|v| local.get(&v).copied()).collect())
        .collect();

    let mut d: Vec<Vec<Option<Rational>>> = vec![vec![None; n]; n + 1];
    let mut pred = vec![vec![usize::MAX; n]; n + 1];
    d[0][0] = Some(Rational::zero());
    for k in 1..=n {
        for u in 0..n {
            let Some(du) = d[k - 1][u].clone() else { continue };
            let cand = &du + &w[u];
            for &v in &adj[u] {
                if d[k][v].as_ref().is_none_or(|cur| cand > *cur) {
                    d[k][v] = Some(cand.clone());
                    pred[k][v] = u;
                }
            }
        }
    }

    let mut best: Option<(usize, Rational)> = None;
    for v in 0..n {
        let Some(dn) = &d[n][v] else { continue };
        let worst = (0..n)
            .filter_map(|k| d[k][v].as_ref().map(|dk| (dn - dk) / Rational::from_int((n - k) as i64)))
            .min()
            .expect("d[0] or a shorter walk reaches v");
        if best.as_ref().is_none_or(|(_, b)| worst > *b) {
            best = Some((v, worst));
        }
    }
    let (vstar, value) = best.expect("strongly connected component with an edge has an n-walk");

    let mut walk = vec![0; n + 1];
    walk[n] = vstar;
    for k in (1..=n).rev() {
        walk[k - 1] = pred[k][walk[k]];
    }
    let mut last_seen = vec![usize::MAX; n];
    let mut cycle = None;
    for (pos, &v) in walk.iter().enumerate() {
        if last_seen[v] != usize::MAX {
            cycle = Some(walk[last_seen[v]..pos].to_vec());
            break;
        }
        last_seen[v] = pos;
    }
    let cycle: Vec<usize> = cycle.expect("walk of n edges repeats a vertex").into_iter().map(|j| comp[j]).collect();
    let mean = if negate { -value } else { value };
    debug_assert_eq!(g.cycle_mean(&cycle, i), mean);
    MeanCycle { mean, cycle }
}

fn best_cycle(g: &WeightedGraph, i: usize, from: usize, negate: bool) -> Option<MeanCycle> {
    let seen = reachable(g, from);
    let mut best: Option<MeanCycle> = None;
    for c in sccs(g) {
        if !c.has_internal_edge || !seen[c.vertices[0]] {
            continue;
        }
        let mc = karp(g, &c.vertices, i, negate);
        let better = match &best {
            None => true,
            Some(b) => {
                if negate {
                    mc.mean < b.mean
                } else {
                    mc.mean > b.mean
                }
            }
        };
        if better {
            best = Some(mc);
        }
    }
    best
}

/// The largest mean (in dimension `i`) of a cycle reachable from `from`,
/// with a simple witness cycle; `None` when no cycle is reachable.
pub fn max_mean_cycle(g: &WeightedGraph, i: usize, from: usize) -> Option<MeanCycle> {
    best_cycle(g, i, from, false)
}

pub fn min_mean_cycle(g: &WeightedGraph, i: usize, from: usize) -> Option<MeanCycle> {
    best_cycle(g, i, from, true)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Extreme {
    Max,
    Min,
}

/// For every vertex, the best mean of a cycle reachable from it.
pub fn best_reachable_cycle_means(g: &WeightedGraph, i: usize, extreme: Extreme) -> Vec<Option<Rational>> {
    let negate = extreme == Extreme::Min;
    let comps = sccs(g);
    let mut comp_of = vec![0; g.num_vertices()];
    for (c, scc) in comps.iter().enumerate() {
        for &v in &scc.vertices {
            comp_of[v] = c;
        }
    }
    let pick = |a: Option<Rational>, b: &Option<Rational>| -> Option<Rational> {
        match (a, b) {
            (None, b) => b.clone(),
            (a, None) => a,
            (Some(x), Some(y)) => Some(if (negate && *y < x) || (!negate && *y > x) { y.clone() } else { x }),
        }
    };
    let mut best: Vec<Option<Rational>> = vec![None; comps.len()];
    for (c, scc) in comps.iter().enumerate() {
        let mut b = if scc.has_internal_edge {
            Some(karp(g, &scc.vertices, i, negate).mean)
        } else {
            None
        };
        for &u in &scc.vertices {
            for v in g.successors(u) {
                let cv = comp_of[v];
                if cv != c {
                    b = pick(b, &best[cv]);
                }
            }
        }
        best[c] = b;
    }
    (0..g.num_vertices()).map(|v| best[comp_of[v]].clone()).collect()
}
