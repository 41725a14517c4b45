use std::fmt;

use crate::game::{Game, TurnBasedBuilder};
use crate::numerics::Rational;

use super::ReductionError;

/// A signed variable index: `3` is X3 and `-3` is ¬X3.
pub type Literal = i32;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CnfFormula {
    vars: usize,
    clauses: Vec<Vec<Literal>>,
}

impl CnfFormula {
    pub fn new(vars: usize, clauses: Vec<Vec<Literal>>) -> Result<Self, ReductionError> {
        if clauses.is_empty() {
            return Err(ReductionError::Formula("no clauses".into()));
        }
        for (j, c) in clauses.iter().enumerate() {
            if c.is_empty() {
                return Err(ReductionError::Formula(format!("clause {} is empty", j + 1)));
            }
            if let Some(l) = c.iter().find(|l| **l == 0 || l.unsigned_abs() as usize > vars) {
                return Err(ReductionError::Formula(format!("literal {l} out of range")));
            }
        }
        Ok(CnfFormula { vars, clauses })
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn clauses(&self) -> &[Vec<Literal>] {
        &self.clauses
    }

    /// `assignment[i]` is the value of X_{i+1}.
    pub fn eval(&self, assignment: &[bool]) -> bool {
        self.clauses
            .iter()
            .all(|c| c.iter().any(|&l| assignment[l.unsigned_abs() as usize - 1] == (l > 0)))
    }

    pub fn parse_dimacs(text: &str) -> Result<Self, ReductionError> {
        let mut header: Option<(usize, usize)> = None;
        let mut clauses = Vec::new();
        let mut cur = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            let err = |msg: String| ReductionError::Parse { line: i + 1, msg };
            if line.is_empty() || line.starts_with('c') || line.starts_with('%') {
                continue;
            }
            if let Some(rest) = line.strip_prefix('p') {
                let f: Vec<&str> = rest.split_whitespace().collect();
                if f.len() != 3 || f[0] != "cnf" {
                    return Err(err("expected `p cnf <vars> <clauses>`".into()));
                }
                let n = f[1].parse().map_err(|_| err(format!("bad variable count `{}`", f[1])))?;
                let m = f[2].parse().map_err(|_| err(format!("bad clause count `{}`", f[2])))?;
                header = Some((n, m));
                continue;
            }
            if header.is_none() {
                return Err(err("clause before the `p cnf` header".into()));
            }
            for tok in line.split_whitespace() {
                let l: Literal = tok.parse().map_err(|_| err(format!("bad literal `{tok}`")))?;
                if l == 0 {
                    clauses.push(std::mem::take(&mut cur));
                } else {
                    cur.push(l);
                }
            }
        }
        if !cur.is_empty() {
            clauses.push(cur);
        }
        let (n, m) = header.ok_or_else(|| ReductionError::Formula("missing `p cnf` header".into()))?;
        if clauses.len() != m {
            return Err(ReductionError::Formula(format!(
                "header announces {m} clauses, found {}",
                clauses.len()
            )));
        }
        CnfFormula::new(n, clauses)
    }

    pub fn to_dimacs(&self) -> String {
        let mut out = format!("p cnf {} {}\n", self.vars, self.clauses.len());
        for c in &self.clauses {
            for l in c {
                out.push_str(&format!("{l} "));
            }
            out.push_str("0\n");
        }
        out
    }
}

impl fmt::Display for CnfFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .clauses
            .iter()
            .map(|c| {
                let lits: Vec<String> = c.iter().map(|&l| literal_name(l)).collect();
                format!("({})", lits.join(" | "))
            })
            .collect();
        write!(f, "{}", parts.join(" & "))
    }
}

fn literal_name(l: Literal) -> String {
    if l > 0 {
        format!("X{l}")
    } else {
        format!("~X{}", -l)
    }
}

/// Clause states `C1..Cm` for player 0, a state `Cj/L` per literal owned by
/// the literal's variable, and the sink `bot`. Repeated literals within a
/// clause share a state.
pub fn gen_sat_game(phi: &CnfFormula) -> Result<Game, ReductionError> {
    let k = phi.vars + 1;
    let m = phi.clauses.len();
    let reward = |player0: i64, zero_for: Option<usize>| {
        (0..k)
            .map(|p| {
                if p == 0 {
                    Rational::from_int(player0)
                } else if Some(p) == zero_for {
                    Rational::zero()
                } else {
                    Rational::one()
                }
            })
            .collect::<Vec<_>>()
    };
    let mut b = TurnBasedBuilder::new(k);
    for j in 1..=m {
        b.state(&format!("C{j}"), 0, reward(1, None));
    }
    for (j, c) in phi.clauses.iter().enumerate() {
        let from = format!("C{}", j + 1);
        let next = format!("C{}", (j + 1) % m + 1);
        for &l in c {
            let name = format!("{from}/{}", literal_name(l));
            let owner = l.unsigned_abs() as usize;
            if b.has_state(&name) {
                continue;
            }
            b.state(&name, owner, reward(1, (l > 0).then_some(owner)));
            b.edge(&from, &name);
            b.edge(&name, &next);
            if l < 0 {
                b.edge(&name, "bot");
            }
        }
    }
    b.terminal("bot", reward(0, None));
    b.initial("C1");
    Ok(b.build()?)
}
