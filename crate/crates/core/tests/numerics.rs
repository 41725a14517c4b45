mod common;

use common::q;
use limitavg::numerics::{
    lp_solve, parse_ext_vector, solve_linear_system, LinearProgram, LinearSolution, LpOutcome, Relation, Sense,
};
use limitavg::{ExtRational, Rational};
use limitavg_oracles::lp_by_vertices;
use proptest::prelude::*;

fn rational() -> impl Strategy<Value = Rational> {
    (-50i64..=50, 1i64..=12).prop_map(|(n, d)| Rational::new(n, d))
}

/// Large enough that products leave the machine-word range.
fn big_rational() -> impl Strategy<Value = Rational> {
    (any::<i64>(), 1i64..=i64::MAX).prop_map(|(n, d)| Rational::new(n, d))
}

fn relation() -> impl Strategy<Value = Relation> {
    prop_oneof![Just(Relation::Le), Just(Relation::Ge), Just(Relation::Eq)]
}

type RandomLp = (usize, Vec<(Vec<i64>, Relation, i64)>, Vec<i64>, bool);

fn random_lp() -> impl Strategy<Value = RandomLp> {
    (1usize..=4).prop_flat_map(|n| {
        let row = (proptest::collection::vec(-5i64..=5, n), relation(), -5i64..=10);
        (Just(n), proptest::collection::vec(row, 0..=6), proptest::collection::vec(-5i64..=5, n), any::<bool>())
    })
}

/// Non-negative variables boxed by `x_j <= 10`, so the feasible set is a
/// polytope and has a vertex whenever it is non-empty.
fn build(lp: &RandomLp) -> LinearProgram {
    let (n, rows, obj, maximize) = lp;
    let mut p = LinearProgram::new();
    let vars: Vec<usize> = (0..*n).map(|j| p.add_nonneg_var(&format!("x{j}"))).collect();
    for &v in &vars {
        p.add_sparse(&[(v, Rational::one())], Relation::Le, Rational::from_int(10));
    }
    for (coeffs, rel, rhs) in rows {
        let terms: Vec<(usize, Rational)> = vars.iter().zip(coeffs).map(|(&v, &c)| (v, Rational::from_int(c))).collect();
        p.add_sparse(&terms, *rel, Rational::from_int(*rhs));
    }
    let sense = if *maximize { Sense::Maximize } else { Sense::Minimize };
    let terms: Vec<(usize, Rational)> = vars.iter().zip(obj).map(|(&v, &c)| (v, Rational::from_int(c))).collect();
    p.set_sparse_objective(sense, &terms);
    p
}

proptest! {
    #[test]
    fn field_laws(a in rational(), b in rational(), c in rational()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!((&a + &b) + &c, &a + (&b + &c));
        prop_assert_eq!(&a * (&b + &c), &a * &b + &a * &c);
        prop_assert_eq!(&a - &a, Rational::zero());
        if !b.is_zero() {
            prop_assert_eq!((&a / &b) * &b, a.clone());
            prop_assert_eq!(&b * b.recip(), Rational::one());
        }
    }

    #[test]
    fn division_round_trips_with_big_operands(a in big_rational(), b in big_rational()) {
        if !b.is_zero() {
            prop_assert_eq!((&a / &b) * &b, a.clone());
        }
        prop_assert_eq!((&a * &b) - &a * &b, Rational::zero());
        prop_assert_eq!(&a + &b - &b, a);
    }

    #[test]
    fn canonical_form(n in -1000i64..=1000, d in 1i64..=1000, k in 1i64..=50) {
        let r = Rational::new(n * k, d * k);
        prop_assert_eq!(&r, &Rational::new(n, d));
        let g = num_integer::gcd(r.numer(), r.denom());
        prop_assert!(r.is_zero() || g == num_bigint::BigInt::from(1));
        prop_assert!(r.denom() > num_bigint::BigInt::from(0));
        let text = r.to_string();
        prop_assert_eq!(text.parse::<Rational>().unwrap(), r.clone());
        prop_assert!(!text.ends_with("/1"));
        let json = serde_json::to_string(&r).unwrap();
        prop_assert_eq!(serde_json::from_str::<Rational>(&json).unwrap(), r);
    }

    #[test]
    fn order_agrees_with_cross_multiplication(a in rational(), b in rational()) {
        let lhs = a.numer() * b.denom();
        let rhs = b.numer() * a.denom();
        prop_assert_eq!(a.cmp(&b), lhs.cmp(&rhs));
        let (ea, eb) = (ExtRational::Finite(a.clone()), ExtRational::Finite(b.clone()));
        prop_assert_eq!(ea.cmp(&eb), a.cmp(&b));
        prop_assert!(ExtRational::NegInf < ea && ea < ExtRational::PosInf);
        prop_assert!(ExtRational::NegInf.le_finite(&a) && ExtRational::PosInf.ge_finite(&a));
    }

    #[test]
    fn threshold_vectors_parse(v in proptest::collection::vec(prop_oneof![
        Just(ExtRational::NegInf), Just(ExtRational::PosInf), rational().prop_map(ExtRational::Finite)], 1..5)) {
        let text = v.iter().map(ToString::to_string).collect::<Vec<_>>().join(",");
        prop_assert_eq!(parse_ext_vector(&text).unwrap(), v);
    }

    #[test]
    fn square_systems(rows in proptest::collection::vec((proptest::collection::vec(-4i64..=4, 3), -6i64..=6), 1..5)) {
        let sys: Vec<(Vec<Rational>, Rational)> = rows
            .iter()
            .map(|(c, b)| (c.iter().map(|&x| Rational::from_int(x)).collect(), Rational::from_int(*b)))
            .collect();
        let sol = solve_linear_system(&sys, 3);
        let holds = |x: &[Rational]| sys.iter().all(|(c, b)| c.iter().zip(x).map(|(a, v)| a * v).sum::<Rational>() == *b);
        match &sol {
            LinearSolution::Unique(x) => prop_assert!(holds(x)),
            LinearSolution::Underdetermined { particular, free } => {
                prop_assert!(holds(particular));
                prop_assert!(*free > 0);
            }
            LinearSolution::Inconsistent => {
                // no integer point in a small cube solves it either
                for a in -3..=3 {
                    for b in -3..=3 {
                        for c in -3..=3 {
                            prop_assert!(!holds(&[Rational::from_int(a), Rational::from_int(b), Rational::from_int(c)]));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn simplex_matches_vertex_enumeration(spec in random_lp()) {
        let p = build(&spec);
        let brute = lp_by_vertices(&p);
        match lp_solve(&p) {
            LpOutcome::Feasible { assignment, objective } => {
                prop_assert!(p.satisfied_by(&assignment), "assignment violates a constraint");
                prop_assert_eq!(p.objective_value(&assignment), objective.clone());
                prop_assert_eq!(objective, brute);
            }
            LpOutcome::Infeasible => prop_assert_eq!(brute, None),
            LpOutcome::Unbounded => prop_assert!(false, "a bounded program was reported unbounded"),
        }
    }
}

#[test]
fn free_variables_and_unboundedness() {
    let mut p = LinearProgram::new();
    let x = p.add_var("x");
    let y = p.add_var("y");
    p.add_sparse(&[(x, q(1, 1)), (y, q(1, 1))], Relation::Eq, q(1, 1));
    p.add_sparse(&[(x, q(1, 1)), (y, q(-1, 1))], Relation::Ge, q(-3, 1));
    p.set_sparse_objective(Sense::Minimize, &[(x, q(1, 1))]);
    match lp_solve(&p) {
        LpOutcome::Feasible { assignment, objective } => {
            assert_eq!(objective, Some(q(-1, 1)));
            assert_eq!(assignment, vec![q(-1, 1), q(2, 1)]);
        }
        other => panic!("{other:?}"),
    }
    p.set_sparse_objective(Sense::Maximize, &[(x, q(1, 1))]);
    assert_eq!(lp_solve(&p), LpOutcome::Unbounded);
    p.add_sparse(&[(x, q(1, 1))], Relation::Le, q(-2, 1));
    assert_eq!(lp_solve(&p), LpOutcome::Infeasible);
}

#[test]
fn degenerate_program_terminates() {
    // a classic cycling example for the largest-coefficient rule
    let mut p = LinearProgram::new();
    let v: Vec<usize> = (0..4).map(|j| p.add_nonneg_var(&format!("x{j}"))).collect();
    let row = |c: [Rational; 4]| v.iter().copied().zip(c).collect::<Vec<_>>();
    p.add_sparse(&row([q(1, 4), q(-8, 1), q(-1, 1), q(9, 1)]), Relation::Le, q(0, 1));
    p.add_sparse(&row([q(1, 2), q(-12, 1), q(-1, 2), q(3, 1)]), Relation::Le, q(0, 1));
    p.add_sparse(&row([q(0, 1), q(0, 1), q(1, 1), q(0, 1)]), Relation::Le, q(1, 1));
    p.set_sparse_objective(Sense::Maximize, &row([q(3, 4), q(-20, 1), q(1, 2), q(-6, 1)]));
    match lp_solve(&p) {
        LpOutcome::Feasible { objective, .. } => assert_eq!(objective, Some(q(5, 4))),
        other => panic!("{other:?}"),
    }
}
