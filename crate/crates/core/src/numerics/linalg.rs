//! Exact Gaussian elimination.

use super::Rational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LinearSolution {
    Unique(Vec<Rational>),
    /// A particular solution (free variables set to zero) and the number of
    /// free variables.
    Underdetermined { particular: Vec<Rational>, free: usize },
    Inconsistent,
}

impl LinearSolution {
    /// Any solution, if one exists.
    pub fn some_solution(&self) -> Option<&[Rational]> {
        match self {
            LinearSolution::Unique(x) => Some(x),
            LinearSolution::Underdetermined { particular, .. } => Some(particular),
            LinearSolution::Inconsistent => None,
        }
    }
}

/// Solves `A x = b` where each row is `(coefficients, rhs)` and every
/// coefficient vector has length `nvars`.
pub fn solve_linear_system(rows: &[(Vec<Rational>, Rational)], nvars: usize) -> LinearSolution {
    let mut m: Vec<Vec<Rational>> = rows
        .iter()
        .map(|(a, b)| {
            assert_eq!(a.len(), nvars, "row length does not match variable count");
            let mut r = a.clone();
            r.push(b.clone());
            r
        })
        .collect();

    let mut pivot_cols = Vec::new();
    let mut row = 0;
    for col in 0..nvars {
        let Some(p) = (row..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(row, p);
        let inv = m[row][col].recip();
        if inv != Rational::one() {
            for c in col..=nvars {
                let v = &m[row][c] * &inv;
                m[row][c] = v;
            }
        }
        let pivot_row = m[row].clone();
        let nz: Vec<usize> = (col..=nvars).filter(|&c| !pivot_row[c].is_zero()).collect();
        for (r, other) in m.iter_mut().enumerate() {
            if r == row || other[col].is_zero() {
                continue;
            }
            let f = other[col].clone();
            for &c in &nz {
                let v = &other[c] - &(&f * &pivot_row[c]);
                other[c] = v;
            }
        }
        pivot_cols.push(col);
        row += 1;
        if row == m.len() {
            break;
        }
    }

    if m[row..].iter().any(|r| !r[nvars].is_zero()) {
        return LinearSolution::Inconsistent;
    }

    let mut x = vec![Rational::zero(); nvars];
    for (r, &c) in pivot_cols.iter().enumerate() {
        x[c] = m[r][nvars].clone();
    }
    let free = nvars - pivot_cols.len();
    if free == 0 {
        LinearSolution::Unique(x)
    } else {
        LinearSolution::Underdetermined { particular: x, free }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64) -> Rational {
        Rational::from_int(n)
    }

    #[test]
    fn unique_underdetermined_inconsistent() {
        let rows = vec![(vec![r(1), r(1)], r(3)), (vec![r(1), r(-1)], r(1))];
        assert_eq!(solve_linear_system(&rows, 2), LinearSolution::Unique(vec![r(2), r(1)]));

        let rows = vec![(vec![r(1), r(1)], r(3)), (vec![r(2), r(2)], r(6))];
        match solve_linear_system(&rows, 2) {
            LinearSolution::Underdetermined { particular, free } => {
                assert_eq!(free, 1);
                assert_eq!(&particular[0] + &particular[1], r(3));
            }
            other => panic!("{other:?}"),
        }

        let rows = vec![(vec![r(1), r(1)], r(3)), (vec![r(1), r(1)], r(4))];
        assert_eq!(solve_linear_system(&rows, 2), LinearSolution::Inconsistent);
    }

    #[test]
    fn zero_rows_and_empty_system() {
        assert_eq!(solve_linear_system(&[], 0), LinearSolution::Unique(vec![]));
        let rows = vec![(vec![r(0)], r(1))];
        assert_eq!(solve_linear_system(&rows, 1), LinearSolution::Inconsistent);
    }
}
