//! SMT-LIB2 export of the existential sentence whose models are stationary
//! equilibria with payoff in a box, together with a reader and an exact
//! evaluator for the emitted fragment.

use std::collections::{HashMap, HashSet};
use std::fmt;

use thiserror::Error;

use crate::game::{Game, Player, StateId, StationaryProfile};
use crate::numerics::{ExtRational, Rational};

use super::{InducedChain, InducedMdp};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SmtExpr {
    Num(Rational),
    Var(String),
    App(String, Vec<SmtExpr>),
}

impl SmtExpr {
    fn app(op: &str, args: Vec<SmtExpr>) -> SmtExpr {
        SmtExpr::App(op.to_string(), args)
    }

    fn var(name: String) -> SmtExpr {
        SmtExpr::Var(name)
    }

    fn sum(mut terms: Vec<SmtExpr>) -> SmtExpr {
        match terms.len() {
            0 => SmtExpr::Num(Rational::zero()),
            1 => terms.pop().unwrap(),
            _ => SmtExpr::app("+", terms),
        }
    }

    fn product(mut factors: Vec<SmtExpr>) -> SmtExpr {
        match factors.len() {
            0 => SmtExpr::Num(Rational::one()),
            1 => factors.pop().unwrap(),
            _ => SmtExpr::app("*", factors),
        }
    }

    fn variables<'a>(&'a self, out: &mut HashSet<&'a str>) {
        match self {
            SmtExpr::Num(_) => {}
            SmtExpr::Var(v) => {
                out.insert(v);
            }
            SmtExpr::App(_, args) => args.iter().for_each(|a| a.variables(out)),
        }
    }
}

fn write_num(f: &mut fmt::Formatter<'_>, r: &Rational) -> fmt::Result {
    let (n, d) = (r.numer(), r.denom());
    let mag = if n.sign() == num_bigint::Sign::Minus { -n.clone() } else { n.clone() };
    let body = if d == 1.into() { mag.to_string() } else { format!("(/ {mag} {d})") };
    if r.is_negative() {
        write!(f, "(- {body})")
    } else {
        write!(f, "{body}")
    }
}

impl fmt::Display for SmtExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SmtExpr::Num(r) => write_num(f, r),
            SmtExpr::Var(v) => write!(f, "{v}"),
            SmtExpr::App(op, args) => {
                write!(f, "({op}")?;
                for a in args {
                    write!(f, " {a}")?;
                }
                write!(f, ")")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SmtDocument {
    pub logic: Option<String>,
    /// Declared real constants, in order.
    pub declarations: Vec<String>,
    pub assertions: Vec<SmtExpr>,
    pub check_sat: bool,
}

impl fmt::Display for SmtDocument {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(l) = &self.logic {
            writeln!(f, "(set-logic {l})")?;
        }
        for d in &self.declarations {
            writeln!(f, "(declare-fun {d} () Real)")?;
        }
        for a in &self.assertions {
            writeln!(f, "(assert {a})")?;
        }
        if self.check_sat {
            writeln!(f, "(check-sat)")?;
        }
        Ok(())
    }
}

/// How many variables of each family and how many assertions the export of
/// a game carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ConstraintCounts {
    pub alpha: usize,
    pub z: usize,
    pub v: usize,
    /// Bias variables, two fresh blocks per player.
    pub bias: usize,
    pub assertions: usize,
}

impl ConstraintCounts {
    pub fn variables(&self) -> usize {
        self.alpha + self.z + self.v + self.bias
    }

    pub fn of(g: &Game, x: &[ExtRational], y: &[ExtRational]) -> Self {
        let k = g.players();
        let n = g.num_states();
        let globals = g.global_actions().len();
        let legal: usize = (0..k).flat_map(|i| (0..n).map(move |s| (i, s))).map(|(i, s)| g.num_actions(s, i)).sum();
        let bounds = x.iter().chain(y).filter(|b| b.is_finite()).count();
        ConstraintCounts {
            alpha: k * n * globals,
            z: k * n,
            v: k * n,
            bias: 2 * k * n,
            // simplex rows, payoff and value systems, one comparison per player
            assertions: k * n * (1 + globals) + 2 * k * n + 2 * legal + k + bounds,
        }
    }
}

fn alpha(i: Player, s: StateId, a: usize) -> String {
    format!("alpha_{i}_{s}_{a}")
}

fn z_var(i: Player, s: StateId) -> String {
    format!("z_{i}_{s}")
}

fn v_var(i: Player, s: StateId) -> String {
    format!("v_{i}_{s}")
}

fn eta_bias(i: Player, s: StateId) -> String {
    format!("eta_b_{i}_{s}")
}

fn theta_bias(i: Player, s: StateId) -> String {
    format!("theta_b_{i}_{s}")
}

/// Position of every local action in the sorted global action list,
/// indexed `[s][i][c]`.
fn global_index(g: &Game) -> (usize, Vec<Vec<Vec<usize>>>) {
    let globals = g.global_actions();
    let idx: HashMap<&str, usize> = globals.iter().enumerate().map(|(j, a)| (a.as_str(), j)).collect();
    let map = (0..g.num_states())
        .map(|s| (0..g.players()).map(|i| g.actions(s, i).iter().map(|a| idx[a.as_str()]).collect()).collect())
        .collect();
    (globals.len(), map)
}

/// `sum over legal profiles a of value(delta(s, a)) * prod_j alpha_j_s_{a_j}`,
/// where the factor of `fixed.0` is left out and its action pinned to
/// `fixed.1`.
fn expectation(
    g: &Game,
    gl: &[Vec<Vec<usize>>],
    s: StateId,
    fixed: Option<(Player, usize)>,
    value: &dyn Fn(StateId) -> String,
) -> SmtExpr {
    let terms = g
        .profiles(s)
        .filter(|a| fixed.map_or(true, |(p, b)| a[p] == b))
        .map(|a| {
            let mut factors = vec![SmtExpr::var(value(g.next(s, &a)))];
            for (j, &aj) in a.iter().enumerate() {
                if fixed.map_or(true, |(p, _)| p != j) {
                    factors.push(SmtExpr::var(alpha(j, s, gl[s][j][aj])));
                }
            }
            SmtExpr::product(factors)
        })
        .collect();
    SmtExpr::sum(terms)
}

/// The sentence, over QF_NRA, requiring a stationary profile that is a Nash
/// equilibrium from `s0` with payoff in `[x, y]`.
pub fn export_statne_constraints(g: &Game, s0: StateId, x: &[ExtRational], y: &[ExtRational]) -> SmtDocument {
    let k = g.players();
    let n = g.num_states();
    let (globals, gl) = global_index(g);
    let mut doc = SmtDocument { logic: Some("QF_NRA".into()), check_sat: true, ..Default::default() };
    for i in 0..k {
        for s in 0..n {
            doc.declarations.extend((0..globals).map(|a| alpha(i, s, a)));
        }
    }
    for i in 0..k {
        doc.declarations.extend((0..n).map(|s| z_var(i, s)));
        doc.declarations.extend((0..n).map(|s| v_var(i, s)));
        doc.declarations.extend((0..n).map(|s| eta_bias(i, s)));
        doc.declarations.extend((0..n).map(|s| theta_bias(i, s)));
    }
    let num = |r: &Rational| SmtExpr::Num(r.clone());
    let one = || SmtExpr::Num(Rational::one());
    let zero = || SmtExpr::Num(Rational::zero());
    let a = &mut doc.assertions;
    for i in 0..k {
        // the alphas form a distribution over the legal actions
        for s in 0..n {
            a.push(SmtExpr::app("=", vec![SmtExpr::sum((0..globals).map(|c| SmtExpr::var(alpha(i, s, c))).collect()), one()]));
            let legal: HashSet<usize> = gl[s][i].iter().copied().collect();
            for c in 0..globals {
                let op = if legal.contains(&c) { ">=" } else { "=" };
                a.push(SmtExpr::app(op, vec![SmtExpr::var(alpha(i, s, c)), zero()]));
            }
        }
        // the z are the expected payoffs, with some bias
        for s in 0..n {
            let lhs = SmtExpr::app("+", vec![SmtExpr::var(eta_bias(i, s)), SmtExpr::var(z_var(i, s))]);
            let rhs = SmtExpr::app("+", vec![num(g.reward(s, i)), expectation(g, &gl, s, None, &|t| eta_bias(i, t))]);
            a.push(SmtExpr::app("=", vec![lhs, rhs]));
        }
        for s in 0..n {
            let rhs = expectation(g, &gl, s, None, &|t| z_var(i, t));
            a.push(SmtExpr::app("=", vec![SmtExpr::var(z_var(i, s)), rhs]));
        }
        // the v dominate what player i can get in the MDP left to it
        for s in 0..n {
            for b in 0..g.num_actions(s, i) {
                let lhs = SmtExpr::app("+", vec![SmtExpr::var(theta_bias(i, s)), SmtExpr::var(v_var(i, s))]);
                let rhs = SmtExpr::app(
                    "+",
                    vec![num(g.reward(s, i)), expectation(g, &gl, s, Some((i, b)), &|t| theta_bias(i, t))],
                );
                a.push(SmtExpr::app(">=", vec![lhs, rhs]));
                let rhs = expectation(g, &gl, s, Some((i, b)), &|t| v_var(i, t));
                a.push(SmtExpr::app(">=", vec![SmtExpr::var(v_var(i, s)), rhs]));
            }
        }
        a.push(SmtExpr::app("<=", vec![SmtExpr::var(v_var(i, s0)), SmtExpr::var(z_var(i, s0))]));
    }
    for i in 0..k {
        if let ExtRational::Finite(lo) = &x[i] {
            a.push(SmtExpr::app("<=", vec![num(lo), SmtExpr::var(z_var(i, s0))]));
        }
        if let ExtRational::Finite(hi) = &y[i] {
            a.push(SmtExpr::app("<=", vec![SmtExpr::var(z_var(i, s0)), num(hi)]));
        }
    }
    doc
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SmtError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("unbound variable {0}")]
    Unbound(String),
    #[error("cannot evaluate {0}")]
    Eval(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Sexp {
    Atom(String, usize),
    List(Vec<Sexp>, usize),
}

impl Sexp {
    fn line(&self) -> usize {
        match self {
            Sexp::Atom(_, l) | Sexp::List(_, l) => *l,
        }
    }
}

fn tokenize(text: &str) -> Vec<(String, usize)> {
    let mut out = Vec::new();
    for (ln, line) in text.lines().enumerate() {
        let line = line.split(';').next().unwrap_or("");
        let mut cur = String::new();
        for ch in line.chars() {
            match ch {
                '(' | ')' => {
                    if !cur.is_empty() {
                        out.push((std::mem::take(&mut cur), ln + 1));
                    }
                    out.push((ch.to_string(), ln + 1));
                }
                c if c.is_whitespace() => {
                    if !cur.is_empty() {
                        out.push((std::mem::take(&mut cur), ln + 1));
                    }
                }
                c => cur.push(c),
            }
        }
        if !cur.is_empty() {
            out.push((cur, ln + 1));
        }
    }
    out
}

fn read_sexps(text: &str) -> Result<Vec<Sexp>, SmtError> {
    let mut stack: Vec<(Vec<Sexp>, usize)> = vec![(Vec::new(), 0)];
    let mut last = 1;
    for (tok, line) in tokenize(text) {
        last = line;
        match tok.as_str() {
            "(" => stack.push((Vec::new(), line)),
            ")" => {
                if stack.len() == 1 {
                    return Err(SmtError::Parse { line, msg: "unbalanced ')'".into() });
                }
                let (items, start) = stack.pop().unwrap();
                stack.last_mut().unwrap().0.push(Sexp::List(items, start));
            }
            _ => stack.last_mut().unwrap().0.push(Sexp::Atom(tok, line)),
        }
    }
    if stack.len() != 1 {
        return Err(SmtError::Parse { line: last, msg: "missing ')'".into() });
    }
    Ok(stack.pop().unwrap().0)
}

fn parse_numeral(s: &str) -> Option<Rational> {
    if let Some((int, frac)) = s.split_once('.') {
        if int.is_empty() || !int.bytes().all(|b| b.is_ascii_digit()) || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let den = format!("1{}", "0".repeat(frac.len()));
        return format!("{int}{frac}/{den}").parse().ok();
    }
    if !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit()) {
        return s.parse().ok();
    }
    None
}

fn to_expr(e: &Sexp) -> Result<SmtExpr, SmtError> {
    match e {
        Sexp::Atom(a, _) => Ok(parse_numeral(a).map_or_else(|| SmtExpr::Var(a.clone()), SmtExpr::Num)),
        Sexp::List(items, line) => {
            let Some((Sexp::Atom(op, _), args)) = items.split_first() else {
                return Err(SmtError::Parse { line: *line, msg: "expected an operator".into() });
            };
            let args = args.iter().map(to_expr).collect::<Result<Vec<_>, _>>()?;
            // fold negated and divided literals back into numbers
            match (op.as_str(), args.as_slice()) {
                ("-", [SmtExpr::Num(r)]) => Ok(SmtExpr::Num(-r.clone())),
                ("/", [SmtExpr::Num(p), SmtExpr::Num(q)]) if !q.is_zero() => Ok(SmtExpr::Num(p / q)),
                _ => Ok(SmtExpr::App(op.clone(), args)),
            }
        }
    }
}

pub fn parse_document(text: &str) -> Result<SmtDocument, SmtError> {
    let mut doc = SmtDocument::default();
    for cmd in read_sexps(text)? {
        let line = cmd.line();
        let err = |msg: &str| SmtError::Parse { line, msg: msg.to_string() };
        let Sexp::List(items, _) = &cmd else { return Err(err("expected a command")) };
        let head = match items.first() {
            Some(Sexp::Atom(h, _)) => h.as_str(),
            _ => return Err(err("expected a command name")),
        };
        match (head, &items[1..]) {
            ("set-logic", [Sexp::Atom(l, _)]) => doc.logic = Some(l.clone()),
            ("declare-fun", [Sexp::Atom(name, _), Sexp::List(params, _), Sexp::Atom(sort, _)])
                if params.is_empty() && sort == "Real" =>
            {
                doc.declarations.push(name.clone())
            }
            ("declare-const", [Sexp::Atom(name, _), Sexp::Atom(sort, _)]) if sort == "Real" => {
                doc.declarations.push(name.clone())
            }
            ("assert", [e]) => doc.assertions.push(to_expr(e)?),
            ("check-sat", []) => doc.check_sat = true,
            ("exit", []) => {}
            _ => return Err(err(&format!("unsupported command {head}"))),
        }
    }
    let declared: HashSet<&str> = doc.declarations.iter().map(String::as_str).collect();
    if declared.len() != doc.declarations.len() {
        return Err(SmtError::Parse { line: 0, msg: "duplicate declaration".into() });
    }
    let mut used = HashSet::new();
    doc.assertions.iter().for_each(|a| a.variables(&mut used));
    if let Some(v) = used.iter().find(|v| !declared.contains(*v)) {
        return Err(SmtError::Unbound(v.to_string()));
    }
    Ok(doc)
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Value {
    Num(Rational),
    Bool(bool),
}

fn eval(e: &SmtExpr, env: &HashMap<String, Rational>) -> Result<Value, SmtError> {
    let num = |e: &SmtExpr| match eval(e, env)? {
        Value::Num(r) => Ok(r),
        Value::Bool(_) => Err(SmtError::Eval(e.to_string())),
    };
    match e {
        SmtExpr::Num(r) => Ok(Value::Num(r.clone())),
        SmtExpr::Var(v) => env.get(v).cloned().map(Value::Num).ok_or_else(|| SmtError::Unbound(v.clone())),
        SmtExpr::App(op, args) => {
            let nums = || args.iter().map(num).collect::<Result<Vec<_>, _>>();
            let chain = |f: fn(&Rational, &Rational) -> bool| -> Result<Value, SmtError> {
                let xs = nums()?;
                Ok(Value::Bool(xs.windows(2).all(|w| f(&w[0], &w[1]))))
            };
            match op.as_str() {
                "+" => Ok(Value::Num(nums()?.into_iter().sum())),
                "*" => Ok(Value::Num(nums()?.into_iter().fold(Rational::one(), |a, b| a * b))),
                "-" => {
                    let xs = nums()?;
                    match xs.split_first() {
                        Some((h, [])) => Ok(Value::Num(-h.clone())),
                        Some((h, t)) => Ok(Value::Num(t.iter().fold(h.clone(), |a, b| a - b))),
                        None => Err(SmtError::Eval(e.to_string())),
                    }
                }
                "/" => {
                    let xs = nums()?;
                    match xs.split_first() {
                        Some((h, t)) if !t.is_empty() && t.iter().all(|d| !d.is_zero()) => {
                            Ok(Value::Num(t.iter().fold(h.clone(), |a, b| a / b)))
                        }
                        _ => Err(SmtError::Eval(e.to_string())),
                    }
                }
                "=" => chain(|a, b| a == b),
                "<=" => chain(|a, b| a <= b),
                ">=" => chain(|a, b| a >= b),
                "<" => chain(|a, b| a < b),
                ">" => chain(|a, b| a > b),
                "and" | "or" | "not" => {
                    let bs = args
                        .iter()
                        .map(|a| match eval(a, env)? {
                            Value::Bool(b) => Ok(b),
                            Value::Num(_) => Err(SmtError::Eval(a.to_string())),
                        })
                        .collect::<Result<Vec<_>, _>>()?;
                    Ok(Value::Bool(match op.as_str() {
                        "and" => bs.iter().all(|&b| b),
                        "or" => bs.iter().any(|&b| b),
                        _ if bs.len() == 1 => !bs[0],
                        _ => return Err(SmtError::Eval(e.to_string())),
                    }))
                }
                _ => Err(SmtError::Eval(e.to_string())),
            }
        }
    }
}

/// Indices of the assertions that fail under `env`.
pub fn evaluate_document(doc: &SmtDocument, env: &HashMap<String, Rational>) -> Result<Vec<usize>, SmtError> {
    let mut failed = Vec::new();
    for (j, a) in doc.assertions.iter().enumerate() {
        match eval(a, env)? {
            Value::Bool(true) => {}
            Value::Bool(false) => failed.push(j),
            Value::Num(_) => return Err(SmtError::Eval(a.to_string())),
        }
    }
    Ok(failed)
}

/// An assignment to every exported variable built from a stationary
/// profile: its probabilities, the chain gains with a bias, and the optimal
/// MDP values with a matching bias.
pub fn build_certificate(g: &Game, sigma: &StationaryProfile) -> HashMap<String, Rational> {
    let (globals, gl) = global_index(g);
    let n = g.num_states();
    let mut env = HashMap::new();
    let chain = InducedChain::new(g, sigma);
    let gains = chain.gains();
    let all: Vec<StateId> = (0..n).collect();
    for i in 0..g.players() {
        for s in 0..n {
            for c in 0..globals {
                env.insert(alpha(i, s, c), Rational::zero());
            }
            for (c, &gc) in gl[s][i].iter().enumerate() {
                env.insert(alpha(i, s, gc), sigma.prob(s, i, c).clone());
            }
        }
        let bias = chain.bias(i, &gains[i]);
        let (v, h) = InducedMdp::new(g, sigma, i).optimal_values(&all);
        for s in 0..n {
            env.insert(z_var(i, s), gains[i][s].clone());
            env.insert(eta_bias(i, s), bias[s].clone());
            env.insert(v_var(i, s), v[s].clone());
            env.insert(theta_bias(i, s), h[s].clone());
        }
    }
    env
}
