mod common;

use common::{fin, inf, ninf, random_cnf, random_digraph, random_game, random_positional, rng};
use limitavg::game::{is_terminal_reward, is_turn_based, lasso_of, validate_game, Game};
use limitavg::posne::{decide_pos_ne, DEFAULT_BUDGET};
use limitavg::purene::decide_pure_ne;
use limitavg::reductions::{
    builtin_example, check_counter_game, gen_counter_game, gen_hamiltonian_game, gen_sat_game, gen_sqrt_gadget,
    gen_sqrtsum_game, ham_thresholds, simulate_safe_profile, wrap_with_no_ne_gadget, CnfFormula, CounterMachine,
    Instruction, NoNeGadget, BUILTIN_NAMES,
};
use limitavg::Rational;
use limitavg_oracles as oracle;
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::Rng;

fn well_formed(g: &Game) -> Result<(), TestCaseError> {
    prop_assert_eq!(validate_game(&g.to_description()), vec![]);
    prop_assert!(g.initial().is_some());
    Ok(())
}

/// A machine on `q0..` where every state either increments a counter or
/// tests one for zero, so it never halts. Zero tests lead to increments.
fn random_machine(r: &mut StdRng, states: usize) -> CounterMachine {
    let names: Vec<String> = (0..states).map(|i| format!("q{i}")).collect();
    let inc: Vec<bool> = (0..states).map(|q| q == 0 || r.gen_bool(0.5)).collect();
    let incs: Vec<usize> = (0..states).filter(|&q| inc[q]).collect();
    let mut rules = Vec::new();
    for (q, name) in names.iter().enumerate() {
        let j = r.gen_range(1..=2u8);
        let any = names[r.gen_range(0..states)].clone();
        if inc[q] {
            rules.push((name.clone(), Instruction::Inc(j), any));
        } else {
            let zero = names[incs[r.gen_range(0..incs.len())]].clone();
            rules.push((name.clone(), Instruction::Zero(j), zero));
            rules.push((name.clone(), Instruction::Dec(j), any));
        }
    }
    let borrowed: Vec<(&str, Instruction, &str)> = rules.iter().map(|(a, i, b)| (a.as_str(), *i, b.as_str())).collect();
    CounterMachine::new("q0", &borrowed).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn sat_reduction_is_faithful(seed in any::<u64>()) {
        let phi = random_cnf(&mut rng(seed), 4, 6);
        let g = gen_sat_game(&phi).unwrap();
        well_formed(&g)?;
        prop_assert!(is_turn_based(&g).is_some());
        let k = g.players();
        prop_assert_eq!(k, phi.vars() + 1);
        let s0 = g.initial().unwrap();
        let mut x = ninf(k);
        x[0] = fin(1, 1);
        let expected = oracle::is_satisfiable(&phi);
        prop_assert_eq!(decide_pos_ne(&g, s0, &x, &inf(k), DEFAULT_BUDGET).found.is_some(), expected, "{}", phi);
        prop_assert_eq!(decide_pure_ne(&g, s0, &x, &inf(k)).is_some(), expected, "{}", phi);
    }

    #[test]
    fn dimacs_round_trips(seed in any::<u64>()) {
        let phi = random_cnf(&mut rng(seed), 4, 6);
        let back = CnfFormula::parse_dimacs(&phi.to_dimacs()).unwrap();
        prop_assert_eq!(back.vars(), phi.vars());
        prop_assert_eq!(back.clauses(), phi.clauses());
    }

    #[test]
    fn hamiltonian_reduction_is_faithful(seed in any::<u64>(), n in 1usize..=5) {
        let wg = random_digraph(&mut rng(seed), n, 1, 0, 0);
        let g = gen_hamiltonian_game(&wg, 0).unwrap();
        well_formed(&g)?;
        prop_assert_eq!(is_turn_based(&g), Some(vec![0; n]));
        let r = decide_pos_ne(&g, 0, &ham_thresholds(n), &inf(3), DEFAULT_BUDGET);
        prop_assert_eq!(r.found.is_some(), oracle::is_hamiltonian(&wg));
        if let Some(v) = r.found {
            let ell = Rational::from_int(n as i64);
            prop_assert_eq!(v.payoff, vec![Rational::one(), ell.recip(), (&ell - Rational::one()) / &ell]);
        }
    }

    #[test]
    fn counter_games_follow_the_machine(seed in any::<u64>(), states in 1usize..=3) {
        let m = random_machine(&mut rng(seed), states);
        let g = gen_counter_game(&m).unwrap();
        prop_assert_eq!(check_counter_game(&g, &m), Vec::<String>::new());
        prop_assert!(is_terminal_reward(&g));
        let tr = simulate_safe_profile(&m, 8).unwrap();
        prop_assert_eq!(tr.check_counter_update(), Ok(()));
        prop_assert!(tr.a_within_bound());
        // the recorded run is the machine's own
        for n in 0..8 {
            let (ins, next) = m.successor(tr.configurations[n]).unwrap();
            prop_assert_eq!(tr.instructions[n + 1], Some(ins));
            prop_assert_eq!(tr.configurations[n + 1], next);
        }
    }

    #[test]
    fn wrapped_equilibria_avoid_the_gadget((seed, k, n) in (any::<u64>(), 1usize..=3, 1usize..=3), g1 in any::<bool>(),
                                           exit in proptest::collection::vec((-2i64..=2, 1i64..=2), 3)) {
        let mut r = rng(seed);
        let inner = random_game(&mut r, k, n, 2);
        let gadget = if g1 { NoNeGadget::G1 } else { NoNeGadget::G2 };
        let kk = k.max(3);
        let exit: Vec<Rational> = exit.iter().take(kk - 1).map(|&(a, b)| Rational::new(a, b)).collect();
        let w = wrap_with_no_ne_gadget(&inner, gadget, &exit).unwrap();
        well_formed(&w)?;
        prop_assert_eq!(w.players(), kk);
        for s in 0..inner.num_states() {
            prop_assert!(w.id(inner.name(s)).is_some());
        }
        let s0 = w.initial().unwrap();
        prop_assert_eq!(w.name(s0), "wrap/s0");
        let in_gadget = |s: usize| w.name(s).starts_with("nne/");
        if let Some(v) = decide_pos_ne(&w, s0, &ninf(kk), &inf(kk), DEFAULT_BUDGET).found {
            prop_assert!(!lasso_of(&w, &v.profile, s0).states.iter().any(|&s| in_gadget(s)));
        }
        if let Some(pw) = decide_pure_ne(&w, s0, &ninf(kk), &inf(kk)) {
            prop_assert!(!pw.scc.iter().any(|&s| in_gadget(s)));
        }
        // every positional profile that enters the gadget is beaten by someone
        let sigma = random_positional(&mut r, &w);
        let lasso = lasso_of(&w, &sigma, s0);
        if lasso.states.iter().any(|&s| in_gadget(s)) {
            let v = limitavg::posne::verify_positional(&w, s0, &sigma, &ninf(kk), &inf(kk));
            prop_assert!(!v.is_ne);
        }
    }
}

#[test]
fn builtin_examples_are_well_formed() {
    for name in BUILTIN_NAMES {
        let name = name.replace("(p)", "(1/4)");
        let g = builtin_example(&name).unwrap();
        assert_eq!(validate_game(&g.to_description()), vec![], "{name}");
    }
    assert!(builtin_example("nope").is_err());
}

#[test]
fn square_root_instances() {
    let gd = gen_sqrt_gadget(&Rational::new(1, 4)).unwrap();
    assert!(is_terminal_reward(&gd.game));
    assert!(is_turn_based(&gd.game).is_some());
    assert!(gen_sqrt_gadget(&Rational::one()).is_err());
    assert!(gen_sqrt_gadget(&Rational::zero()).is_err());
    let inst = gen_sqrtsum_game(&[1, 4], 3).unwrap();
    assert!(inst.profile.is_some());
    assert!(gen_sqrtsum_game(&[2, 4], 3).unwrap().profile.is_none());
    assert!(gen_sqrtsum_game(&[], 3).is_err());
    assert_eq!(inst.game.players(), 8);
}
