mod common;

use common::{fin, random_digraph, random_strongly_connected, rng};
use limitavg::graph::{reachable, sccs, WeightedGraph};
use limitavg::mppath::{extract_cycle_witness, feasible_path, scc_lp, scc_lp_full, FlowSolution};
use limitavg::{ExtRational, Rational};
use limitavg_oracles as oracle;
use proptest::prelude::*;

fn lower() -> impl Strategy<Value = ExtRational> {
    prop_oneof![1 => Just(ExtRational::NegInf), 3 => (-9i64..=3, 1i64..=3).prop_map(|(n, d)| fin(n, d))]
}

fn upper() -> impl Strategy<Value = ExtRational> {
    prop_oneof![1 => Just(ExtRational::PosInf), 3 => (-3i64..=9, 1i64..=3).prop_map(|(n, d)| fin(n, d))]
}

fn boxes(k: usize) -> impl Strategy<Value = (Vec<ExtRational>, Vec<ExtRational>)> {
    (proptest::collection::vec(lower(), k), proptest::collection::vec(upper(), k))
}

fn in_box(x: &[ExtRational], v: &[Rational], y: &[ExtRational]) -> bool {
    v.iter().zip(x).zip(y).all(|((v, lo), hi)| lo.le_finite(v) && hi.ge_finite(v))
}

fn cycle_means(g: &WeightedGraph, c: &[usize]) -> Vec<Rational> {
    (0..g.dims()).map(|i| g.cycle_mean(c, i)).collect()
}

/// The flow constraints checked from scratch, plus the cycle witness.
fn check_flow(g: &WeightedGraph, f: &FlowSolution, x: &[ExtRational], y: &[ExtRational]) -> Result<(), TestCaseError> {
    let k = g.dims();
    for i in 0..k {
        prop_assert!(f.flows[i].iter().all(|q| !q.is_negative()));
        prop_assert_eq!(f.flows[i].iter().sum::<Rational>(), Rational::one());
        for v in 0..g.num_vertices() {
            let inflow: Rational = f.edges.iter().zip(&f.flows[i]).filter(|((_, b), _)| *b == v).map(|(_, q)| q).sum();
            let outflow: Rational = f.edges.iter().zip(&f.flows[i]).filter(|((a, _), _)| *a == v).map(|(_, q)| q).sum();
            prop_assert_eq!(inflow, outflow);
        }
        prop_assert_eq!(&f.achieved[i], &f.mean(g, i, i));
        for j in 0..k {
            prop_assert!(f.mean(g, j, i) >= f.achieved[i], "flow {} gives {} less than its own", j, i);
        }
    }
    prop_assert!(in_box(x, &f.achieved, y));
    prop_assert!(f.edges.iter().all(|&(u, v)| g.successors(u).any(|w| w == v)));

    let cw = extract_cycle_witness(g, f).unwrap();
    for i in 0..k {
        let mut counts = vec![0u64; f.edges.len()];
        let mut total = vec![Rational::zero(); k];
        let mut len = 0i64;
        for c in &cw.cycles[i] {
            for (j, &u) in c.iter().enumerate() {
                let v = c[(j + 1) % c.len()];
                let e = f.edges.iter().position(|&e| e == (u, v));
                prop_assert!(e.is_some(), "cycle leaves the component");
                counts[e.unwrap()] += 1;
                for (jj, t) in total.iter_mut().enumerate() {
                    *t = &*t + g.weight(u, jj);
                }
                len += 1;
            }
        }
        prop_assert_eq!(&counts, &cw.multiplicity[i]);
        for j in 0..k {
            let m = &total[j] / Rational::from_int(len);
            prop_assert_eq!(&m, &cw.means[i][j]);
            prop_assert!(m >= f.achieved[j]);
        }
        prop_assert_eq!(&cw.means[i][i], &f.achieved[i]);
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]

    #[test]
    fn one_dimension_is_an_interval(seed in any::<u64>(), n in 1usize..=6, (x, y) in boxes(1)) {
        let g = random_strongly_connected(&mut rng(seed), n, 1, -3, 3);
        let all: Vec<usize> = (0..n).collect();
        let means: Vec<Rational> = oracle::simple_cycles(&g).iter().map(|c| g.cycle_mean(c, 0)).collect();
        let lo = means.iter().min().unwrap();
        let hi = means.iter().max().unwrap();
        let meets = x[0].le_finite(hi) && y[0].ge_finite(lo) && x[0] <= y[0];
        let sol = scc_lp(&g, &all, &x, &y);
        prop_assert_eq!(sol.is_some(), meets);
        if let Some(f) = sol {
            check_flow(&g, &f, &x, &y)?;
        }
    }

    #[test]
    fn every_cycle_in_the_box_is_found(seed in any::<u64>(), n in 1usize..=6, (x, y) in boxes(2)) {
        let g = random_digraph(&mut rng(seed), n, 2, -3, 3);
        let seen = reachable(&g, 0);
        let hit = oracle::simple_cycles(&g).into_iter().any(|c| seen[c[0]] && in_box(&x, &cycle_means(&g, &c), &y));
        let w = feasible_path(&g, 0, &x, &y);
        if hit {
            prop_assert!(w.is_some());
        }
        if let Some(w) = w {
            prop_assert_eq!(w.approach.first(), Some(&0));
            prop_assert!(w.scc.contains(w.approach.last().unwrap()));
            prop_assert!(w.approach.windows(2).all(|p| g.successors(p[0]).any(|v| v == p[1])));
            check_flow(&g, &w.flow, &x, &y)?;
        }
    }

    #[test]
    fn shared_circulation_shortcut_is_exact(seed in any::<u64>(), n in 1usize..=5, k in 1usize..=3, (x, y) in boxes(3)) {
        let g = random_strongly_connected(&mut rng(seed), n, k, -3, 3);
        let all: Vec<usize> = (0..n).collect();
        let (x, y) = (&x[..k], &y[..k]);
        let fast = scc_lp(&g, &all, x, y);
        let full = scc_lp_full(&g, &all, x, y);
        prop_assert_eq!(fast.is_some(), full.is_some());
        for f in [fast, full].into_iter().flatten() {
            check_flow(&g, &f, x, y)?;
        }
    }

    #[test]
    fn no_path_means_no_component_works(seed in any::<u64>(), n in 1usize..=6, (x, y) in boxes(1)) {
        let g = random_digraph(&mut rng(seed), n, 1, -3, 3);
        let seen = reachable(&g, 0);
        // in one dimension a component reaches exactly the values between
        // its extreme cycle means
        let possible = sccs(&g).iter().filter(|c| c.has_internal_edge && seen[c.vertices[0]]).any(|c| {
            let means: Vec<Rational> = oracle::simple_cycles(&g)
                .iter()
                .filter(|cyc| c.vertices.contains(&cyc[0]))
                .map(|cyc| g.cycle_mean(cyc, 0))
                .collect();
            let lo = means.iter().min().unwrap();
            let hi = means.iter().max().unwrap();
            x[0].le_finite(hi) && y[0].ge_finite(lo) && x[0] <= y[0]
        });
        prop_assert_eq!(feasible_path(&g, 0, &x, &y).is_some(), possible);
    }
}

#[test]
fn mixing_beats_every_single_cycle() {
    // a <-> b carries (1, 0), c loops with (0, 1); only a mix reaches (1/3, 1/3)
    let mut g = WeightedGraph::new(2);
    let a = g.add_vertex("a", vec![Rational::one(), Rational::zero()]);
    let b = g.add_vertex("b", vec![Rational::zero(), Rational::zero()]);
    let c = g.add_vertex("c", vec![Rational::zero(), Rational::one()]);
    for (u, v) in [(a, b), (b, a), (b, c), (c, b), (c, c)] {
        g.add_edge(u, v);
    }
    let x = vec![fin(1, 3), fin(1, 3)];
    let y = vec![ExtRational::PosInf; 2];
    for cyc in oracle::simple_cycles(&g) {
        assert!(!in_box(&x, &cycle_means(&g, &cyc), &y));
    }
    let w = feasible_path(&g, a, &x, &y).expect("a mix of the two cycles works");
    assert_eq!(w.flow.achieved, vec![Rational::new(1, 3), Rational::new(1, 3)]);
    assert!(feasible_path(&g, a, &[fin(1, 2), fin(1, 2)], &y).is_none());
}
