//! Two-counter machines and the fourteen-player game simulating them.
//!
//! State names follow `S/<q>/<instr>/<t>/<pos>` for the step gadgets,
//! `I/<q>/<t>` for the transition choice of player 1 and
//! `C/<instr>/<j>/<t>/<pos>` for the counter gadgets, where `<instr>` is
//! `init` or one of `inc1`, `dec1`, `zero1`, `inc2`, `dec2`, `zero2`. Inside a
//! step gadget the quit chain runs `A1, A2, B1, B2, Dt, Dn` (each followed by
//! its `.quit` terminal), then `grey`, `E1`, `E2` and `white`.

use std::collections::HashMap;
use std::fmt;

use crate::game::{is_terminal_reward, is_turn_based, sparse_rewards, Game, StateId, TurnBasedBuilder};
use crate::numerics::Rational;

use super::ReductionError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Instruction {
    Inc(u8),
    Dec(u8),
    Zero(u8),
}

impl Instruction {
    pub fn counter(self) -> u8 {
        match self {
            Instruction::Inc(j) | Instruction::Dec(j) | Instruction::Zero(j) => j,
        }
    }
}

impl fmt::Display for Instruction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Instruction::Inc(j) => write!(f, "inc{j}"),
            Instruction::Dec(j) => write!(f, "dec{j}"),
            Instruction::Zero(j) => write!(f, "zero{j}"),
        }
    }
}

impl std::str::FromStr for Instruction {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let (op, j) = s.split_at(s.len().saturating_sub(1));
        let j = match j {
            "1" => 1,
            "2" => 2,
            _ => return Err(format!("unknown instruction `{s}`")),
        };
        match op {
            "inc" => Ok(Instruction::Inc(j)),
            "dec" => Ok(Instruction::Dec(j)),
            "zero" => Ok(Instruction::Zero(j)),
            _ => Err(format!("unknown instruction `{s}`")),
        }
    }
}

/// The instruction labels of step and counter gadgets; `None` is `init`.
const GADGET_INSTRS: [Option<Instruction>; 7] = [
    None,
    Some(Instruction::Inc(1)),
    Some(Instruction::Dec(1)),
    Some(Instruction::Zero(1)),
    Some(Instruction::Inc(2)),
    Some(Instruction::Dec(2)),
    Some(Instruction::Zero(2)),
];

fn instr_label(g: Option<Instruction>) -> String {
    g.map_or_else(|| "init".to_string(), |i| i.to_string())
}

/// What a deterministic machine does in one state.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MachineStep {
    Halt,
    Inc { counter: u8, next: usize },
    Branch { counter: u8, zero: usize, dec: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CounterMachine {
    states: Vec<String>,
    initial: usize,
    steps: Vec<MachineStep>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MachineConfig {
    pub state: usize,
    pub counters: [u64; 2],
}

impl CounterMachine {
    /// Checks determinism and that no zero test is followed by another.
    pub fn new(initial: &str, transitions: &[(&str, Instruction, &str)]) -> Result<Self, ReductionError> {
        let mut states = vec![initial.to_string()];
        let mut index = HashMap::from([(initial.to_string(), 0)]);
        let mut intern = |name: &str, states: &mut Vec<String>| {
            *index.entry(name.to_string()).or_insert_with(|| {
                states.push(name.to_string());
                states.len() - 1
            })
        };
        let mut out: Vec<Vec<(Instruction, usize)>> = Vec::new();
        for &(q, ins, q2) in transitions {
            let a = intern(q, &mut states);
            let b = intern(q2, &mut states);
            out.resize(states.len(), Vec::new());
            if out[a].contains(&(ins, b)) {
                continue;
            }
            out[a].push((ins, b));
        }
        out.resize(states.len(), Vec::new());
        let mut steps = Vec::new();
        for (q, ts) in out.iter().enumerate() {
            let bad = || ReductionError::Machine(format!("state `{}` is not deterministic", states[q]));
            let step = match ts.as_slice() {
                [] => MachineStep::Halt,
                [(Instruction::Inc(j), next)] => MachineStep::Inc { counter: *j, next: *next },
                [(x, a), (y, b)] => match (x, y) {
                    (Instruction::Zero(j), Instruction::Dec(k)) if j == k => {
                        MachineStep::Branch { counter: *j, zero: *a, dec: *b }
                    }
                    (Instruction::Dec(j), Instruction::Zero(k)) if j == k => {
                        MachineStep::Branch { counter: *j, zero: *b, dec: *a }
                    }
                    _ => return Err(bad()),
                },
                _ => return Err(bad()),
            };
            steps.push(step);
        }
        for (q, st) in steps.iter().enumerate() {
            if let MachineStep::Branch { zero, .. } = st {
                if matches!(steps[*zero], MachineStep::Branch { .. }) {
                    return Err(ReductionError::Machine(format!(
                        "zero test in `{}` is followed by another zero test",
                        states[q]
                    )));
                }
            }
        }
        Ok(CounterMachine { states, initial: 0, steps })
    }

    /// Lines `q INSTR q'` after a first line `init q0`; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self, ReductionError> {
        let mut initial: Option<String> = None;
        let mut ts: Vec<(String, Instruction, String)> = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |msg: String| ReductionError::Parse { line: i + 1, msg };
            let f: Vec<&str> = line.split_whitespace().collect();
            match (initial.is_some(), f.as_slice()) {
                (false, ["init", q]) => initial = Some(q.to_string()),
                (false, _) => return Err(err("expected `init <state>`".into())),
                (true, [q, ins, q2]) => ts.push((q.to_string(), ins.parse().map_err(err)?, q2.to_string())),
                (true, _) => return Err(err("expected `<state> <instruction> <state>`".into())),
            }
        }
        let initial = initial.ok_or_else(|| ReductionError::Machine("empty machine description".into()))?;
        let refs: Vec<(&str, Instruction, &str)> = ts.iter().map(|(a, i, b)| (a.as_str(), *i, b.as_str())).collect();
        CounterMachine::new(&initial, &refs)
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn step(&self, q: usize) -> MachineStep {
        self.steps[q]
    }

    /// The successor configuration and the instruction taken, or `None` if
    /// the machine halts.
    pub fn successor(&self, c: MachineConfig) -> Option<(Instruction, MachineConfig)> {
        let mut counters = c.counters;
        match self.steps[c.state] {
            MachineStep::Halt => None,
            MachineStep::Inc { counter, next } => {
                counters[counter as usize - 1] += 1;
                Some((Instruction::Inc(counter), MachineConfig { state: next, counters }))
            }
            MachineStep::Branch { counter, zero, dec } => {
                let v = &mut counters[counter as usize - 1];
                if *v == 0 {
                    Some((Instruction::Zero(counter), MachineConfig { state: zero, counters }))
                } else {
                    *v -= 1;
                    Some((Instruction::Dec(counter), MachineConfig { state: dec, counters }))
                }
            }
        }
    }
}

impl fmt::Display for CounterMachine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "init {}", self.states[self.initial])?;
        for (q, st) in self.steps.iter().enumerate() {
            let name = &self.states[q];
            match *st {
                MachineStep::Halt => {}
                MachineStep::Inc { counter, next } => writeln!(f, "{name} inc{counter} {}", self.states[next])?,
                MachineStep::Branch { counter, zero, dec } => {
                    writeln!(f, "{name} zero{counter} {}", self.states[zero])?;
                    writeln!(f, "{name} dec{counter} {}", self.states[dec])?;
                }
            }
        }
        Ok(())
    }
}

pub const COUNTER_PLAYER_NAMES: [&str; 14] = [
    "0", "1", "A1^0", "A1^1", "A2^0", "A2^1", "B1^0", "B1^1", "B2^0", "B2^1", "D^0", "D^1", "E1", "E2",
];

/// The players of the counter game; counters `j` are 1 or 2 and step
/// parities `t` are 0 or 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CounterRole {
    Zero,
    One,
    A(u8, u8),
    B(u8, u8),
    D(u8),
    E(u8),
}

impl CounterRole {
    pub fn index(self) -> usize {
        match self {
            CounterRole::Zero => 0,
            CounterRole::One => 1,
            CounterRole::A(j, t) => 2 + 2 * (j as usize - 1) + t as usize,
            CounterRole::B(j, t) => 6 + 2 * (j as usize - 1) + t as usize,
            CounterRole::D(t) => 10 + t as usize,
            CounterRole::E(j) => 11 + j as usize,
        }
    }
}

fn step_entry(m: &CounterMachine, q: usize, g: Option<Instruction>, t: u8) -> String {
    format!("S/{}/{}/{t}/A1", m.states[q], instr_label(g))
}

fn counter_entry(g: Option<Instruction>, j: u8, t: u8) -> String {
    format!("C/{}/{j}/{t}/ctl", instr_label(g))
}

pub fn gen_counter_game(m: &CounterMachine) -> Result<Game, ReductionError> {
    use CounterRole::*;
    let k = 14;
    let zero = || vec![Rational::zero(); k];
    let rw = |entries: &[(CounterRole, i64)]| {
        sparse_rewards(k, &entries.iter().map(|&(p, v)| (p.index(), Rational::from_int(v))).collect::<Vec<_>>())
    };
    let mut b = TurnBasedBuilder::new(k);
    for q in 0..m.states.len() {
        for &g in &GADGET_INSTRS {
            for t in 0..2u8 {
                let pre = format!("S/{}/{}/{t}/", m.states[q], instr_label(g));
                let chain = [
                    ("A1", A(1, t), 1),
                    ("A2", A(2, t), 1),
                    ("B1", B(1, t), 1),
                    ("B2", B(2, t), 1),
                    ("Dt", D(t), 2),
                    ("Dn", D(1 - t), 1),
                ];
                for (i, &(pos, role, v)) in chain.iter().enumerate() {
                    let name = format!("{pre}{pos}");
                    let next = chain.get(i + 1).map_or("grey", |c| c.0);
                    b.state(&name, role.index(), zero());
                    b.terminal(&format!("{name}.quit"), rw(&[(Zero, -1), (role, v)]));
                    b.edge(&name, &format!("{pre}{next}")).edge(&name, &format!("{name}.quit"));
                }
                b.state(&format!("{pre}grey"), 0, zero());
                b.edge(&format!("{pre}grey"), &format!("I/{}/{t}", m.states[q]));
                b.edge(&format!("{pre}grey"), &format!("{pre}E1"));
                for (pos, j, next) in [("E1", 1u8, "E2"), ("E2", 2, "white")] {
                    let name = format!("{pre}{pos}");
                    b.state(&name, E(j).index(), zero());
                    b.terminal(&format!("{name}.quit"), rw(&[(Zero, -1), (E(j), 1)]));
                    b.edge(&name, &format!("{pre}{next}")).edge(&name, &format!("{name}.quit"));
                }
                b.state(&format!("{pre}white"), 0, zero());
                for j in 1..=2 {
                    b.edge(&format!("{pre}white"), &counter_entry(g, j, t));
                }
            }
        }
        for t in 0..2u8 {
            let name = format!("I/{}/{t}", m.states[q]);
            match m.steps[q] {
                MachineStep::Halt => {
                    b.terminal(&name, rw(&[(Zero, -1)]));
                }
                MachineStep::Inc { counter, next } => {
                    b.state(&name, 1, zero());
                    b.edge(&name, &step_entry(m, next, Some(Instruction::Inc(counter)), 1 - t));
                }
                MachineStep::Branch { counter, zero: qz, dec } => {
                    b.state(&name, 1, zero());
                    b.edge(&name, &step_entry(m, qz, Some(Instruction::Zero(counter)), 1 - t));
                    b.edge(&name, &step_entry(m, dec, Some(Instruction::Dec(counter)), 1 - t));
                }
            }
        }
    }
    for &g in &GADGET_INSTRS {
        for j in 1..=2u8 {
            for t in 0..2u8 {
                let u = 1 - t;
                let pre = format!("C/{}/{j}/{t}/", instr_label(g));
                let ctl = format!("{pre}ctl");
                b.state(&ctl, 0, zero());
                let mine = g.map(Instruction::counter) == Some(j);
                let grey = match g {
                    None => rw(&[(One, 1), (A(j, t), 2), (A(j, u), 2), (B(j, t), 2), (B(j, u), 2), (D(t), 3), (E(j), 2)]),
                    Some(Instruction::Zero(_)) if mine => {
                        rw(&[(One, 1), (A(j, t), 2), (A(j, u), 2), (B(j, t), 2), (B(j, u), 2), (D(t), 3), (E(j), 2)])
                    }
                    Some(Instruction::Inc(_)) if mine => {
                        rw(&[(A(j, t), 2), (A(j, u), 4), (B(j, t), 2), (D(t), 3), (E(j), 2)])
                    }
                    Some(Instruction::Dec(_)) if mine => {
                        rw(&[(A(j, t), 2), (A(j, u), 1), (B(j, t), 2), (B(j, u), 3), (D(t), 3), (E(j), 2)])
                    }
                    _ => rw(&[(A(j, t), 2), (A(j, u), 2), (B(j, t), 2), (B(j, u), 2), (D(t), 3), (E(j), 2)]),
                };
                b.terminal(&format!("{pre}grey"), grey);
                b.edge(&ctl, &format!("{pre}grey"));
                let grey_only = g.is_none() || (mine && matches!(g, Some(Instruction::Zero(_))));
                if !grey_only {
                    b.terminal(&format!("{pre}white"), rw(&[(A(j, t), 3), (B(j, t), 1), (B(j, u), 4), (D(t), 3), (E(j), 2)]));
                    b.edge(&ctl, &format!("{pre}white"));
                }
            }
        }
    }
    b.initial(&step_entry(m, m.initial, None, 0));
    Ok(b.build()?)
}

/// Structural checks of a generated counter game. Returns the list of
/// problems found, empty when the game is well formed.
pub fn check_counter_game(g: &Game, m: &CounterMachine) -> Vec<String> {
    let mut problems = Vec::new();
    if g.players() != 14 {
        problems.push(format!("{} players instead of 14", g.players()));
        return problems;
    }
    if is_turn_based(g).is_none() {
        problems.push("not turn-based".into());
    }
    if !is_terminal_reward(g) {
        problems.push("not a terminal-reward game".into());
    }
    let expected = 254 * m.states.len() + 76;
    if g.num_states() != expected {
        problems.push(format!("{} states instead of {expected}", g.num_states()));
    }
    for s in 0..g.num_states() {
        let name = g.name(s);
        if !g.is_terminal(s) {
            continue;
        }
        let r = g.rewards(s);
        if name.ends_with(".quit") {
            let others: Vec<&Rational> = r[1..].iter().filter(|x| !x.is_zero()).collect();
            let ok = r[0] == Rational::from_int(-1)
                && others.len() == 1
                && (*others[0] == Rational::one() || *others[0] == Rational::from_int(2));
            if !ok {
                problems.push(format!("quit terminal `{name}` has rewards {r:?}"));
            }
        } else if let Some(rest) = name.strip_prefix("C/") {
            let j: u8 = rest.split('/').nth(1).and_then(|x| x.parse().ok()).unwrap_or(0);
            if !(1..=2).contains(&j) || !r[0].is_zero() {
                problems.push(format!("counter terminal `{name}` is malformed"));
                continue;
            }
            for tau in 0..2 {
                let sum = &r[CounterRole::A(j, tau).index()] + &r[CounterRole::B(j, tau).index()];
                if sum != Rational::from_int(4) {
                    problems.push(format!("counter terminal `{name}`: A{j}^{tau} and B{j}^{tau} sum to {sum}"));
                }
            }
        }
    }
    problems
}

/// The run of a machine together with the quantities of the safe profile
/// that follows it. Indices `n` count visits of step gadgets.
#[derive(Debug, Clone)]
pub struct SafeProfileTrace {
    pub horizon: usize,
    /// `rho(0..=N)`.
    pub configurations: Vec<MachineConfig>,
    /// The instruction leading into configuration `n`; `None` at `n = 0`.
    pub instructions: Vec<Option<Instruction>>,
    /// `c[j-1][n]`: player 0's probability of the grey exit in the counter
    /// gadget for counter `j` during step `n`, for `n <= N`.
    pub c: [Vec<Rational>; 2],
    /// Expected payoff of `A_j^{n mod 2}` contributed by step gadgets `n`
    /// and `n+1`, for `n + 1 < N`. Stability forces 3/4.
    pub p: [Vec<Rational>; 2],
    /// Expected payoff of `A_j^{n mod 2}` after reaching step `n`,
    /// counting only plays that end within the first `N` steps, for `n < N`.
    pub a_truncated: [Vec<Rational>; 2],
    /// `4 * 4^-floor((N - n) / 2)`, for `n < N`.
    pub bound: Vec<Rational>,
}

impl SafeProfileTrace {
    /// The first `(j, n)` at which the counter-update law fails.
    pub fn check_counter_update(&self) -> Result<(), (u8, usize)> {
        for j in 1..=2u8 {
            let c = &self.c[j as usize - 1];
            if c[0] != Rational::one() {
                return Err((j, 0));
            }
            for n in 0..self.horizon {
                let half = Rational::new(1, 2);
                let ok = match self.instructions[n + 1] {
                    Some(Instruction::Inc(i)) if i == j => c[n + 1] == &c[n] * &half,
                    Some(Instruction::Dec(i)) if i == j => c[n + 1] == &c[n] * Rational::from_int(2),
                    Some(Instruction::Zero(i)) if i == j => c[n + 1] == c[n] && c[n] == Rational::one(),
                    _ => c[n + 1] == c[n],
                };
                if !ok {
                    return Err((j, n));
                }
            }
        }
        Ok(())
    }

    /// Whether every truncated `a_j^n` lies within its bound of 1.
    pub fn a_within_bound(&self) -> bool {
        (0..2).all(|j| {
            self.a_truncated[j]
                .iter()
                .zip(&self.bound)
                .all(|(a, b)| (a - Rational::one()).abs() <= *b)
        })
    }
}

/// Runs the machine for `horizon` steps and evaluates the safe profile that
/// follows its computation on the generated game.
pub fn simulate_safe_profile(m: &CounterMachine, horizon: usize) -> Result<SafeProfileTrace, ReductionError> {
    let mut configurations = vec![MachineConfig { state: m.initial, counters: [0, 0] }];
    let mut instructions = vec![None];
    for n in 0..horizon {
        let (ins, next) = m.successor(configurations[n]).ok_or(ReductionError::Halted(n))?;
        configurations.push(next);
        instructions.push(Some(ins));
    }
    let half = Rational::new(1, 2);
    let c: [Vec<Rational>; 2] =
        [0, 1].map(|j| configurations.iter().map(|cf| half.pow(cf.counters[j] as u32)).collect());

    let g = gen_counter_game(m)?;
    let entry = |n: usize| {
        let cf = configurations[n];
        g.id(&step_entry(m, cf.state, instructions[n], (n % 2) as u8)).expect("step gadget entry")
    };
    // expected[n][p]: reward of player p collected at terminals of step
    // gadget n, given that step n is reached.
    let mut expected: Vec<Vec<Rational>> = Vec::with_capacity(horizon);
    for n in 0..horizon {
        let stop = entry(n + 1);
        let mut acc = vec![Rational::zero(); g.players()];
        let mut onward = Rational::zero();
        let mut stack = vec![(entry(n), Rational::one())];
        while let Some((s, pr)) = stack.pop() {
            if s == stop {
                onward += pr;
                continue;
            }
            if g.is_terminal(s) {
                for (p, r) in g.rewards(s).iter().enumerate() {
                    acc[p] += &pr * r;
                }
                continue;
            }
            for (t, q) in safe_moves(&g, s, stop, &c, n) {
                stack.push((t, &pr * &q));
            }
        }
        assert_eq!(onward, half, "step {n} must continue with probability 1/2");
        expected.push(acc);
    }

    let mut p = [Vec::new(), Vec::new()];
    let mut a_truncated = [Vec::new(), Vec::new()];
    for j in 1..=2u8 {
        for n in 0..horizon {
            let who = CounterRole::A(j, (n % 2) as u8).index();
            if n + 1 < horizon {
                p[j as usize - 1].push(&expected[n][who] + &half * &expected[n + 1][who]);
            }
            let mut a = Rational::zero();
            let mut w = Rational::one();
            for e in &expected[n..] {
                a += &w * &e[who];
                w = &w * &half;
            }
            a_truncated[j as usize - 1].push(a);
        }
    }
    let bound = (0..horizon)
        .map(|n| Rational::from_int(4) * Rational::new(1, 4).pow(((horizon - n) / 2) as u32))
        .collect();
    Ok(SafeProfileTrace { horizon, configurations, instructions, c, p, a_truncated, bound })
}

/// Successor distribution at `s` under the safe profile during step `n`:
/// monitors stay, player 0 splits evenly in step gadgets and plays grey
/// with probability `c_j^n` in counter gadgets, and player 1 moves to `stop`.
fn safe_moves(g: &Game, s: StateId, stop: StateId, c: &[Vec<Rational>; 2], n: usize) -> Vec<(StateId, Rational)> {
    let name = g.name(s);
    let succ = g.successors(s);
    let labelled = |t: &StateId| g.name(*t).to_string();
    if name.starts_with("S/") {
        if name.ends_with("/grey") || name.ends_with("/white") {
            return succ.into_iter().map(|t| (t, Rational::new(1, 2))).collect();
        }
        let t = succ.into_iter().find(|t| !labelled(t).ends_with(".quit")).expect("continue edge");
        return vec![(t, Rational::one())];
    }
    if name.starts_with("I/") {
        assert!(succ.contains(&stop), "player 1 cannot follow the computation at `{name}`");
        return vec![(stop, Rational::one())];
    }
    let j: usize = name.split('/').nth(2).and_then(|x| x.parse().ok()).expect("counter index");
    let cj = &c[j - 1][n];
    succ.into_iter()
        .map(|t| {
            let q = if labelled(&t).ends_with("/grey") { cj.clone() } else { Rational::one() - cj };
            (t, q)
        })
        .filter(|(_, q)| !q.is_zero())
        .collect()
}
