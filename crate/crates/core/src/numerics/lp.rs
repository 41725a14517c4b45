//! Linear programs over the rationals, solved with a two-phase tableau
//! simplex under Bland's rule.

use std::fmt;

use super::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Minimize,
    Maximize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constraint {
    pub coeffs: Vec<Rational>,
    pub relation: Relation,
    pub rhs: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Objective {
    pub sense: Sense,
    pub coeffs: Vec<Rational>,
}

/// Variables are free unless declared non-negative.
#[derive(Debug, Clone, Default)]
pub struct LinearProgram {
    names: Vec<String>,
    nonneg: Vec<bool>,
    constraints: Vec<Constraint>,
    objective: Option<Objective>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpOutcome {
    Feasible {
        assignment: Vec<Rational>,
        objective: Option<Rational>,
    },
    Infeasible,
    Unbounded,
}

impl LpOutcome {
    pub fn assignment(&self) -> Option<&[Rational]> {
        match self {
            LpOutcome::Feasible { assignment, .. } => Some(assignment),
            _ => None,
        }
    }
}

fn dot(a: &[Rational], x: &[Rational]) -> Rational {
    a.iter()
        .zip(x)
        .filter(|(c, _)| !c.is_zero())
        .map(|(c, v)| c * v)
        .sum()
}

impl LinearProgram {
    pub fn new() -> Self {
        Self::default()
    }

    fn push_var(&mut self, name: &str, nonneg: bool) -> usize {
        self.names.push(name.to_string());
        self.nonneg.push(nonneg);
        for c in &mut self.constraints {
            c.coeffs.push(Rational::zero());
        }
        if let Some(o) = &mut self.objective {
            o.coeffs.push(Rational::zero());
        }
        self.names.len() - 1
    }

    pub fn add_var(&mut self, name: &str) -> usize {
        self.push_var(name, false)
    }

    pub fn add_nonneg_var(&mut self, name: &str) -> usize {
        self.push_var(name, true)
    }

    pub fn num_vars(&self) -> usize {
        self.names.len()
    }

    pub fn var_names(&self) -> &[String] {
        &self.names
    }

    pub fn is_nonneg(&self, var: usize) -> bool {
        self.nonneg[var]
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn objective(&self) -> Option<&Objective> {
        self.objective.as_ref()
    }

    /// Panics when `coeffs` does not have one entry per variable.
    pub fn add_constraint(&mut self, coeffs: Vec<Rational>, relation: Relation, rhs: Rational) {
        assert_eq!(coeffs.len(), self.names.len(), "constraint arity");
        self.constraints.push(Constraint { coeffs, relation, rhs });
    }

    /// Adds a constraint given as `(variable, coefficient)` pairs; repeated
    /// variables accumulate.
    pub fn add_sparse(&mut self, terms: &[(usize, Rational)], relation: Relation, rhs: Rational) {
        let mut coeffs = vec![Rational::zero(); self.names.len()];
        for (v, c) in terms {
            coeffs[*v] += c;
        }
        self.add_constraint(coeffs, relation, rhs);
    }

    pub fn set_objective(&mut self, sense: Sense, coeffs: Vec<Rational>) {
        assert_eq!(coeffs.len(), self.names.len(), "objective arity");
        self.objective = Some(Objective { sense, coeffs });
    }

    pub fn set_sparse_objective(&mut self, sense: Sense, terms: &[(usize, Rational)]) {
        let mut coeffs = vec![Rational::zero(); self.names.len()];
        for (v, c) in terms {
            coeffs[*v] += c;
        }
        self.set_objective(sense, coeffs);
    }

    /// Whether `x` satisfies every constraint and sign restriction.
    pub fn satisfied_by(&self, x: &[Rational]) -> bool {
        if x.len() != self.names.len() {
            return false;
        }
        if x.iter().zip(&self.nonneg).any(|(v, &nn)| nn && v.is_negative()) {
            return false;
        }
        self.constraints.iter().all(|c| {
            let lhs = dot(&c.coeffs, x);
            match c.relation {
                Relation::Le => lhs <= c.rhs,
                Relation::Eq => lhs == c.rhs,
                Relation::Ge => lhs >= c.rhs,
            }
        })
    }

    pub fn objective_value(&self, x: &[Rational]) -> Option<Rational> {
        self.objective.as_ref().map(|o| dot(&o.coeffs, x))
    }
}

impl fmt::Display for LinearProgram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let term = |coeffs: &[Rational], f: &mut fmt::Formatter<'_>| -> fmt::Result {
            let mut first = true;
            for (c, n) in coeffs.iter().zip(&self.names) {
                if c.is_zero() {
                    continue;
                }
                if !first {
                    f.write_str(" + ")?;
                }
                first = false;
                write!(f, "{c}*{n}")?;
            }
            if first {
                f.write_str("0")?;
            }
            Ok(())
        };
        if let Some(o) = &self.objective {
            f.write_str(match o.sense {
                Sense::Minimize => "minimize ",
                Sense::Maximize => "maximize ",
            })?;
            term(&o.coeffs, f)?;
            writeln!(f)?;
        }
        for c in &self.constraints {
            term(&c.coeffs, f)?;
            let rel = match c.relation {
                Relation::Le => "<=",
                Relation::Eq => "=",
                Relation::Ge => ">=",
            };
            writeln!(f, " {rel} {}", c.rhs)?;
        }
        Ok(())
    }
}

struct Tableau {
    rows: Vec<Vec<Rational>>,
    // reduced costs followed by the negated objective value
    cost: Vec<Rational>,
    basis: Vec<usize>,
    ncols: usize,
}

impl Tableau {
    fn rhs(&self, r: usize) -> &Rational {
        &self.rows[r][self.ncols]
    }

    fn pivot(&mut self, pr: usize, pc: usize) {
        let inv = self.rows[pr][pc].recip();
        if inv != Rational::one() {
            for v in self.rows[pr].iter_mut() {
                if !v.is_zero() {
                    *v = &*v * &inv;
                }
            }
        }
        let prow = self.rows[pr].clone();
        let nz: Vec<usize> = (0..=self.ncols).filter(|&c| !prow[c].is_zero()).collect();
        let eliminate = |row: &mut Vec<Rational>| {
            if row[pc].is_zero() {
                return;
            }
            let f = row[pc].clone();
            for &c in &nz {
                let v = &row[c] - &(&f * &prow[c]);
                row[c] = v;
            }
        };
        for (r, row) in self.rows.iter_mut().enumerate() {
            if r != pr {
                eliminate(row);
            }
        }
        eliminate(&mut self.cost);
        self.basis[pr] = pc;
    }

    /// Runs Bland's rule on the current cost row. Returns false when the
    /// objective is unbounded below.
    fn optimize(&mut self, allowed: &[bool]) -> bool {
        loop {
            let entering = (0..self.ncols).find(|&c| allowed[c] && self.cost[c].is_negative());
            let Some(e) = entering else {
                return true;
            };
            let mut best: Option<(usize, Rational)> = None;
            for r in 0..self.rows.len() {
                let a = &self.rows[r][e];
                if !a.is_positive() {
                    continue;
                }
                let ratio = self.rhs(r) / a;
                let better = match &best {
                    None => true,
                    Some((br, bv)) => ratio < *bv || (ratio == *bv && self.basis[r] < self.basis[*br]),
                };
                if better {
                    best = Some((r, ratio));
                }
            }
            match best {
                None => return false,
                Some((r, _)) => self.pivot(r, e),
            }
        }
    }

    fn load_costs(&mut self, c: &[Rational]) {
        let mut cost = c.to_vec();
        cost.push(Rational::zero());
        for (r, &b) in self.basis.iter().enumerate() {
            if c[b].is_zero() {
                continue;
            }
            let cb = c[b].clone();
            for (j, v) in self.rows[r].iter().enumerate() {
                if !v.is_zero() {
                    cost[j] -= &cb * v;
                }
            }
        }
        self.cost = cost;
    }
}

/// Solves the program exactly. Without an objective the result is any
/// feasible point.
pub fn lp_solve(lp: &LinearProgram) -> LpOutcome {
    let n = lp.num_vars();
    // column layout: one column per variable, a second (negated) column for
    // each free variable, then slacks, then artificials
    let mut pos_col = Vec::with_capacity(n);
    let mut neg_col = vec![None; n];
    let mut ncols = 0;
    for (j, nn) in lp.nonneg.iter().enumerate() {
        pos_col.push(ncols);
        ncols += 1;
        if !nn {
            neg_col[j] = Some(ncols);
            ncols += 1;
        }
    }
    let structural = ncols;

    let m = lp.constraints.len();
    let mut normalized = Vec::with_capacity(m);
    for c in &lp.constraints {
        if c.rhs.is_negative() {
            let rel = match c.relation {
                Relation::Le => Relation::Ge,
                Relation::Eq => Relation::Eq,
                Relation::Ge => Relation::Le,
            };
            normalized.push((-Rational::one(), rel, -&c.rhs));
        } else {
            normalized.push((Rational::one(), c.relation, c.rhs.clone()));
        }
    }
    let slacks = normalized.iter().filter(|(_, r, _)| *r != Relation::Eq).count();
    let artificials = normalized.iter().filter(|(_, r, _)| *r != Relation::Le).count();
    let slack_base = structural;
    let art_base = structural + slacks;
    ncols = art_base + artificials;

    let mut rows = Vec::with_capacity(m);
    let mut basis = Vec::with_capacity(m);
    let (mut next_slack, mut next_art) = (slack_base, art_base);
    for (c, (sign, rel, rhs)) in lp.constraints.iter().zip(&normalized) {
        let mut row = vec![Rational::zero(); ncols + 1];
        for (j, a) in c.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let v = sign * a;
            if let Some(nc) = neg_col[j] {
                row[nc] = -&v;
            }
            row[pos_col[j]] = v;
        }
        row[ncols] = rhs.clone();
        match rel {
            Relation::Le => {
                row[next_slack] = Rational::one();
                basis.push(next_slack);
                next_slack += 1;
            }
            Relation::Ge => {
                row[next_slack] = -Rational::one();
                next_slack += 1;
                row[next_art] = Rational::one();
                basis.push(next_art);
                next_art += 1;
            }
            Relation::Eq => {
                row[next_art] = Rational::one();
                basis.push(next_art);
                next_art += 1;
            }
        }
        rows.push(row);
    }

    let mut t = Tableau {
        rows,
        cost: Vec::new(),
        basis,
        ncols,
    };

    if artificials > 0 {
        let mut c1 = vec![Rational::zero(); ncols];
        for c in c1.iter_mut().skip(art_base) {
            *c = Rational::one();
        }
        t.load_costs(&c1);
        let allowed = vec![true; ncols];
        t.optimize(&allowed);
        if !t.cost[ncols].is_zero() {
            return LpOutcome::Infeasible;
        }
        // drive the remaining (zero-valued) artificials out of the basis
        let mut r = 0;
        while r < t.rows.len() {
            if t.basis[r] >= art_base {
                match (0..art_base).find(|&c| !t.rows[r][c].is_zero()) {
                    Some(c) => t.pivot(r, c),
                    None => {
                        t.rows.swap_remove(r);
                        t.basis.swap_remove(r);
                        continue;
                    }
                }
            }
            r += 1;
        }
    }

    let mut allowed = vec![true; ncols];
    for a in allowed.iter_mut().skip(art_base) {
        *a = false;
    }

    if let Some(obj) = &lp.objective {
        let mut c2 = vec![Rational::zero(); ncols];
        for (j, a) in obj.coeffs.iter().enumerate() {
            let v = match obj.sense {
                Sense::Minimize => a.clone(),
                Sense::Maximize => -a,
            };
            if let Some(nc) = neg_col[j] {
                c2[nc] = -&v;
            }
            c2[pos_col[j]] = v;
        }
        t.load_costs(&c2);
        if !t.optimize(&allowed) {
            return LpOutcome::Unbounded;
        }
    }

    let mut colval = vec![Rational::zero(); ncols];
    for (r, &b) in t.basis.iter().enumerate() {
        colval[b] = t.rhs(r).clone();
    }
    let assignment: Vec<Rational> = (0..n)
        .map(|j| match neg_col[j] {
            Some(nc) => &colval[pos_col[j]] - &colval[nc],
            None => colval[pos_col[j]].clone(),
        })
        .collect();
    assert!(lp.satisfied_by(&assignment), "simplex produced an infeasible point");
    let objective = lp.objective_value(&assignment);
    LpOutcome::Feasible {
        assignment,
        objective,
    }
}
