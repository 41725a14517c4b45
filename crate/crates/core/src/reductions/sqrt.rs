use std::collections::HashMap;

use crate::game::{sparse_rewards, Game, StationaryProfile, ThresholdVector, TurnBasedBuilder};
use crate::numerics::{ExtRational, Rational};

use super::{turn_profile, ReductionError};

pub struct SqrtGadget {
    pub game: Game,
    /// The equilibrium maximising player 1's payoff; present only when
    /// `sqrt(p)` is rational.
    pub profile: Option<StationaryProfile>,
}

pub struct SqrtSumInstance {
    pub game: Game,
    pub lower: ThresholdVector,
    pub upper: ThresholdVector,
    /// Present when every `d_i` is a perfect square.
    pub profile: Option<StationaryProfile>,
}

/// State, controller, quit rewards and successor of every non-terminal state
/// of the gadget, in ring order starting at `s1`.
fn gadget_layout(p: &Rational) -> Vec<(&'static str, usize, Vec<(usize, Rational)>, &'static str)> {
    let one = Rational::one;
    let neg = || Rational::from_int(-1);
    let q = one() - p;
    let two_q = Rational::from_int(2) - p;
    vec![
        ("s1", 2, vec![(0, neg()), (2, one())], "r1"),
        ("r1", 4, vec![(0, neg()), (4, one())], "t1"),
        ("t1", 5, vec![(0, neg()), (5, q.clone())], "u1"),
        ("u1", 0, vec![(1, one()), (2, one()), (4, two_q.clone())], "v1"),
        ("v1", 0, vec![(2, Rational::from_int(2)), (4, q.clone()), (5, one())], "s2"),
        ("s2", 3, vec![(0, neg()), (3, one())], "r2"),
        ("r2", 4, vec![(0, neg()), (4, q.clone())], "t2"),
        ("t2", 5, vec![(0, neg()), (5, one())], "u2"),
        ("u2", 0, vec![(1, one()), (3, one()), (5, two_q)], "v2"),
        ("v2", 0, vec![(3, Rational::from_int(2)), (4, one()), (5, q)], "s1"),
    ]
}

fn quit_name(prefix: &str, s: &str) -> String {
    format!("{prefix}{s}/quit")
}

fn add_gadget(b: &mut TurnBasedBuilder, prefix: &str, p: &Rational, extra: &[(usize, Rational)]) {
    let k = b.players();
    for (s, owner, quit, next) in gadget_layout(p) {
        let name = format!("{prefix}{s}");
        let mut r = quit;
        r.extend(extra.iter().cloned());
        b.state(&name, owner, vec![Rational::zero(); k]);
        b.terminal(&quit_name(prefix, s), sparse_rewards(k, &r));
        b.edge(&name, &format!("{prefix}{next}"));
        b.edge(&name, &quit_name(prefix, s));
    }
}

/// Player 0's choices in the optimal profile: leave `u_i` with probability
/// `p` and continue at `v_i` with probability `(1 - sqrt p) / (1 - p)`.
fn gadget_choices(prefix: &str, p: &Rational, root: &Rational, out: &mut HashMap<String, Vec<(String, Rational)>>) {
    let x0 = (Rational::one() - root) / (Rational::one() - p);
    for (s, next) in [("u1", "v1"), ("u2", "v2")] {
        out.insert(
            format!("{prefix}{s}"),
            vec![
                (format!("{prefix}{next}"), Rational::one() - p),
                (quit_name(prefix, s), p.clone()),
            ],
        );
    }
    for (s, next) in [("v1", "s2"), ("v2", "s1")] {
        out.insert(
            format!("{prefix}{s}"),
            vec![
                (format!("{prefix}{next}"), x0.clone()),
                (quit_name(prefix, s), Rational::one() - &x0),
            ],
        );
    }
}

/// The six-player ring gadget with initial state `s1`.
pub fn gen_sqrt_gadget(p: &Rational) -> Result<SqrtGadget, ReductionError> {
    if !p.is_positive() || *p >= Rational::one() {
        return Err(ReductionError::ProbabilityRange(p.clone()));
    }
    let mut b = TurnBasedBuilder::new(6);
    add_gadget(&mut b, "", p, &[]);
    b.initial("s1");
    let game = b.build()?;
    let profile = p.sqrt_exact().map(|root| {
        let mut ch = HashMap::new();
        gadget_choices("", p, &root, &mut ch);
        turn_profile(&game, &ch)
    });
    Ok(SqrtGadget { game, profile })
}

/// The eight-player chain `s_n, r_n, t_n, ..., s_1, r_1, t_1, s_0` where
/// `t_i` may enter a copy of the gadget with `p_i = d_i / d^2` (states
/// prefixed `G<i>/`). The lower threshold is `k / (d (n+1))` for player 1
/// and 0 for everybody else.
pub fn gen_sqrtsum_game(ds: &[u64], k: u64) -> Result<SqrtSumInstance, ReductionError> {
    if ds.is_empty() || ds.contains(&0) {
        return Err(ReductionError::Invalid("need at least one positive integer".into()));
    }
    let n = ds.len() as i64;
    let d: i64 = ds.iter().map(|&x| x as i64).sum();
    let players = 8;
    let neg = Rational::from_int(-1);
    let mut b = TurnBasedBuilder::new(players);
    let mut choices = HashMap::new();
    let mut all_square = true;
    for i in (1..=n).rev() {
        let (s, r, t) = (format!("s{i}"), format!("r{i}"), format!("t{i}"));
        let zero = vec![Rational::zero(); players];
        b.state(&s, 6, zero.clone());
        b.terminal(&format!("{s}/quit"), sparse_rewards(players, &[(0, neg.clone()), (6, Rational::new(i, i + 1))]));
        b.edge(&s, &r).edge(&s, &format!("{s}/quit"));
        b.state(&r, 7, zero.clone());
        b.terminal(
            &format!("{r}/quit"),
            sparse_rewards(players, &[(0, neg.clone()), (7, Rational::new(n + 1, i + 1))]),
        );
        b.edge(&r, &t).edge(&r, &format!("{r}/quit"));
        b.state(&t, 0, zero);
        let prefix = format!("G{i}/");
        b.edge(&t, &format!("s{}", i - 1)).edge(&t, &format!("{prefix}s1"));
        choices.insert(
            t.clone(),
            vec![
                (format!("s{}", i - 1), Rational::new(i, i + 1)),
                (format!("{prefix}s1"), Rational::new(1, i + 1)),
            ],
        );
        let pi = Rational::new(ds[(i - 1) as usize] as i64, d * d);
        add_gadget(&mut b, &prefix, &pi, &[(6, Rational::one())]);
        match pi.sqrt_exact() {
            Some(root) => gadget_choices(&prefix, &pi, &root, &mut choices),
            None => all_square = false,
        }
    }
    b.terminal("s0", sparse_rewards(players, &[(7, Rational::from_int(n + 1))]));
    b.initial(&format!("s{n}"));
    let game = b.build()?;
    let mut lower = vec![ExtRational::Finite(Rational::zero()); players];
    lower[1] = ExtRational::Finite(Rational::new(k as i64, d * (n + 1)));
    let upper = vec![ExtRational::PosInf; players];
    let profile = all_square.then(|| turn_profile(&game, &choices));
    Ok(SqrtSumInstance { game, lower, upper, profile })
}
