mod common;

use common::{random_digraph, rng};
use limitavg::graph::{
    best_reachable_cycle_means, max_mean_cycle, min_mean_cycle, reachable, sccs, shortest_path, Extreme,
    WeightedGraph,
};
use limitavg::Rational;
use limitavg_oracles as oracle;
use proptest::prelude::*;

fn negated(g: &WeightedGraph, i: usize) -> WeightedGraph {
    let mut h = WeightedGraph::new(g.dims());
    for v in 0..g.num_vertices() {
        let mut w = g.weights(v).to_vec();
        w[i] = -&w[i];
        h.add_vertex(g.name(v), w);
    }
    for &(u, v) in g.edges() {
        h.add_edge(u, v);
    }
    h
}

fn is_cycle(g: &WeightedGraph, c: &[usize]) -> bool {
    !c.is_empty() && (0..c.len()).all(|j| g.successors(c[j]).any(|v| v == c[(j + 1) % c.len()]))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn karp_matches_enumeration(seed in any::<u64>(), n in 1usize..=6, from_pick in any::<usize>()) {
        let g = random_digraph(&mut rng(seed), n, 2, -3, 3);
        let from = from_pick % n;
        for i in 0..2 {
            let max = max_mean_cycle(&g, i, from).expect("every vertex has a successor");
            let min = min_mean_cycle(&g, i, from).unwrap();
            prop_assert_eq!(Some(max.mean.clone()), oracle::max_cycle_mean(&g, i, from));
            prop_assert_eq!(Some(min.mean.clone()), oracle::min_cycle_mean(&g, i, from));
            // witnesses are reachable cycles with the claimed mean
            let reach = reachable(&g, from);
            for w in [&max, &min] {
                prop_assert!(is_cycle(&g, &w.cycle));
                prop_assert!(w.cycle.iter().all(|&v| reach[v]));
                prop_assert_eq!(g.cycle_mean(&w.cycle, i), w.mean.clone());
            }
            let neg = max_mean_cycle(&negated(&g, i), i, from).unwrap();
            prop_assert_eq!(neg.mean, -min.mean);
        }
    }

    #[test]
    fn per_vertex_extremes(seed in any::<u64>(), n in 1usize..=6) {
        let g = random_digraph(&mut rng(seed), n, 1, -3, 3);
        let best = best_reachable_cycle_means(&g, 0, Extreme::Max);
        let worst = best_reachable_cycle_means(&g, 0, Extreme::Min);
        for v in 0..n {
            prop_assert_eq!(best[v].clone(), oracle::max_cycle_mean(&g, 0, v));
            prop_assert_eq!(worst[v].clone(), oracle::min_cycle_mean(&g, 0, v));
        }
    }

    #[test]
    fn components_partition_and_order(seed in any::<u64>(), n in 1usize..=7) {
        let g = random_digraph(&mut rng(seed), n, 0, 0, 0);
        let comps = sccs(&g);
        let mut comp_of = vec![usize::MAX; n];
        for (c, scc) in comps.iter().enumerate() {
            for &v in &scc.vertices {
                prop_assert_eq!(comp_of[v], usize::MAX, "vertex in two components");
                comp_of[v] = c;
            }
        }
        prop_assert!(comp_of.iter().all(|&c| c != usize::MAX));
        let reach: Vec<Vec<bool>> = (0..n).map(|v| reachable(&g, v)).collect();
        for u in 0..n {
            for v in 0..n {
                prop_assert_eq!(comp_of[u] == comp_of[v], reach[u][v] && reach[v][u]);
            }
        }
        for &(u, v) in g.edges() {
            // reverse topological order
            prop_assert!(comp_of[u] >= comp_of[v]);
        }
        for scc in &comps {
            let internal = g.edges().iter().any(|&(u, v)| scc.vertices.contains(&u) && scc.vertices.contains(&v));
            prop_assert_eq!(scc.has_internal_edge, internal);
        }
    }

    #[test]
    fn shortest_paths_are_paths(seed in any::<u64>(), n in 1usize..=7, a in any::<usize>(), b in any::<usize>()) {
        let g = random_digraph(&mut rng(seed), n, 0, 0, 0);
        let (from, to) = (a % n, b % n);
        let allowed = vec![true; n];
        match shortest_path(&g, from, to, &allowed) {
            Some(p) => {
                prop_assert_eq!(p.first(), Some(&from));
                prop_assert_eq!(p.last(), Some(&to));
                prop_assert!(p.windows(2).all(|w| g.successors(w[0]).any(|v| v == w[1])));
                // no shorter path: breadth-first distance
                let mut dist = vec![usize::MAX; n];
                dist[from] = 0;
                let mut frontier = vec![from];
                while !frontier.is_empty() {
                    let mut next = Vec::new();
                    for u in frontier {
                        for v in g.successors(u) {
                            if dist[v] == usize::MAX {
                                dist[v] = dist[u] + 1;
                                next.push(v);
                            }
                        }
                    }
                    frontier = next;
                }
                prop_assert_eq!(p.len() - 1, dist[to]);
            }
            None => prop_assert!(!reachable(&g, from)[to]),
        }
    }
}

#[test]
fn fractional_weights() {
    let mut g = WeightedGraph::new(1);
    let a = g.add_vertex("a", vec![Rational::new(1, 3)]);
    let b = g.add_vertex("b", vec![Rational::new(-1, 2)]);
    g.add_edge(a, b);
    g.add_edge(b, a);
    g.add_edge(b, b);
    assert_eq!(max_mean_cycle(&g, 0, a).unwrap().mean, Rational::new(-1, 12));
    assert_eq!(min_mean_cycle(&g, 0, a).unwrap().mean, Rational::new(-1, 2));
    assert_eq!(g.add_edge(a, b), 0, "duplicate edges are merged");
}
