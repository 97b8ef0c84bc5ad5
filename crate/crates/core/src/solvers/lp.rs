//! Exact strict-feasibility LP.
//!
//! Each strict row `<a, x> > c` becomes `<a, x> >= c + delta`, the margin
//! `delta` is capped at 1, and a dense two-phase simplex over rationals
//! maximizes it with Bland's rule. The system is strictly feasible exactly
//! when the optimum margin is positive. Free variables are split into
//! positive and negative parts.

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Ge,
    Le,
    Eq,
    Gt,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Row {
    pub coeffs: Vec<Rational>,
    pub relation: Relation,
    pub rhs: Rational,
}

/// A system of linear rows over free real variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearSystem {
    variables: usize,
    rows: Vec<Row>,
}

impl LinearSystem {
    pub fn new(variables: usize) -> Self {
        LinearSystem {
            variables,
            rows: Vec::new(),
        }
    }

    pub fn variables(&self) -> usize {
        self.variables
    }

    pub fn rows(&self) -> &[Row] {
        &self.rows
    }

    pub fn push(&mut self, coeffs: Vec<Rational>, relation: Relation, rhs: Rational) -> Result<()> {
        if coeffs.len() != self.variables {
            return Err(Error::MalformedSystem(format!(
                "row has {} coefficients for {} variables",
                coeffs.len(),
                self.variables
            )));
        }
        self.rows.push(Row {
            coeffs,
            relation,
            rhs,
        });
        Ok(())
    }

    /// Homogeneous system `<v, x> > 0` for every `strict` normal and
    /// `<v, x> <= 0` for every `weak` normal.
    pub fn homogeneous(dim: usize, strict: &[&[Rational]], weak: &[&[Rational]]) -> Result<Self> {
        let mut sys = LinearSystem::new(dim);
        for v in strict {
            sys.push(v.to_vec(), Relation::Gt, Rational::zero())?;
        }
        for v in weak {
            sys.push(v.to_vec(), Relation::Le, Rational::zero())?;
        }
        Ok(sys)
    }

    /// Exact check that `x` satisfies every row, strict rows strictly.
    pub fn is_satisfied_by(&self, x: &[Rational]) -> bool {
        x.len() == self.variables
            && self.rows.iter().all(|row| {
                let lhs = row
                    .coeffs
                    .iter()
                    .zip(x)
                    .fold(Rational::zero(), |acc, (a, b)| acc + a * b);
                match row.relation {
                    Relation::Ge => lhs >= row.rhs,
                    Relation::Le => lhs <= row.rhs,
                    Relation::Eq => lhs == row.rhs,
                    Relation::Gt => lhs > row.rhs,
                }
            })
    }
}

struct Tableau {
    a: Vec<Vec<Rational>>,
    b: Vec<Rational>,
    basis: Vec<usize>,
    cols: usize,
}

enum Outcome {
    Optimal,
    Unbounded,
}

impl Tableau {
    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.a[r][c].clone();
        if !p.is_one() {
            for v in self.a[r].iter_mut() {
                if !v.is_zero() {
                    *v /= &p;
                }
            }
            self.b[r] /= &p;
        }
        let pivot_row = self.a[r].clone();
        let pivot_rhs = self.b[r].clone();
        for i in 0..self.a.len() {
            if i == r || self.a[i][c].is_zero() {
                continue;
            }
            let f = self.a[i][c].clone();
            for (j, pv) in pivot_row.iter().enumerate() {
                if !pv.is_zero() {
                    let t = &f * pv;
                    self.a[i][j] -= t;
                }
            }
            self.b[i] -= &f * &pivot_rhs;
        }
        self.basis[r] = c;
    }

    /// Maximizes `obj . x` over columns flagged in `allowed`, with Bland's rule.
    fn maximize(&mut self, obj: &[Rational], allowed: &[bool]) -> Outcome {
        loop {
            let mut entering = None;
            for j in 0..self.cols {
                if !allowed[j] || self.basis.contains(&j) {
                    continue;
                }
                let mut reduced = obj[j].clone();
                for (i, &bj) in self.basis.iter().enumerate() {
                    if !obj[bj].is_zero() && !self.a[i][j].is_zero() {
                        reduced -= &obj[bj] * &self.a[i][j];
                    }
                }
                if reduced.is_positive() {
                    entering = Some(j);
                    break;
                }
            }
            let Some(c) = entering else {
                return Outcome::Optimal;
            };
            let mut leaving: Option<(usize, Rational)> = None;
            for i in 0..self.a.len() {
                if self.a[i][c].is_positive() {
                    let ratio = &self.b[i] / &self.a[i][c];
                    let better = match &leaving {
                        None => true,
                        Some((li, lr)) => {
                            ratio < *lr || (ratio == *lr && self.basis[i] < self.basis[*li])
                        }
                    };
                    if better {
                        leaving = Some((i, ratio));
                    }
                }
            }
            match leaving {
                None => return Outcome::Unbounded,
                Some((r, _)) => self.pivot(r, c),
            }
        }
    }

    fn value(&self, col: usize) -> Rational {
        self.basis
            .iter()
            .position(|&b| b == col)
            .map(|i| self.b[i].clone())
            .unwrap_or_else(Rational::zero)
    }
}

/// Returns a point satisfying every row (strict rows with positive slack), or
/// `None` when no such point exists.
pub fn solve_lp_feasible_strict(system: &LinearSystem) -> Result<Option<Vec<Rational>>> {
    let n = system.variables;
    let has_strict = system.rows.iter().any(|r| r.relation == Relation::Gt);
    // Columns: x+ (n), x- (n), delta (1), one slack per inequality row, then artificials.
    let delta = 2 * n;
    let mut next = delta + 1;
    let mut rows: Vec<Vec<Rational>> = Vec::new();
    let mut rhs: Vec<Rational> = Vec::new();
    let mut slack_of_row: Vec<Option<usize>> = Vec::new();

    let mut all_rows: Vec<(Vec<Rational>, Relation, Rational, bool)> = system
        .rows
        .iter()
        .map(|r| (r.coeffs.clone(), r.relation, r.rhs.clone(), false))
        .collect();
    if has_strict {
        // delta <= 1
        all_rows.push((Vec::new(), Relation::Le, Rational::one(), true));
    }
    let slack_count = all_rows
        .iter()
        .filter(|r| r.1 != Relation::Eq)
        .count();
    let base_cols = delta + 1 + slack_count;

    for (coeffs, rel, c, is_cap) in &all_rows {
        let mut row = vec![Rational::zero(); base_cols];
        if *is_cap {
            row[delta] = Rational::one();
        } else {
            for (j, a) in coeffs.iter().enumerate() {
                if !a.is_zero() {
                    row[j] = a.clone();
                    row[n + j] = -a.clone();
                }
            }
        }
        let slack = match rel {
            Relation::Eq => None,
            Relation::Le => {
                row[next] = Rational::one();
                Some(next)
            }
            Relation::Ge => {
                row[next] = -Rational::one();
                Some(next)
            }
            Relation::Gt => {
                row[delta] = -Rational::one();
                row[next] = -Rational::one();
                Some(next)
            }
        };
        if slack.is_some() {
            next += 1;
        }
        let mut c = c.clone();
        let flip = c.is_negative()
            || (c.is_zero() && slack.map(|s| row[s].is_negative()).unwrap_or(false));
        if flip {
            for v in row.iter_mut() {
                *v = -v.clone();
            }
            c = -c;
        }
        rows.push(row);
        rhs.push(c);
        slack_of_row.push(slack);
    }

    // Rows whose slack has coefficient +1 start with the slack basic; others get an artificial.
    let m = rows.len();
    let mut basis = vec![usize::MAX; m];
    let mut artificial_rows = Vec::new();
    for i in 0..m {
        match slack_of_row[i] {
            Some(s) if rows[i][s].is_one() => basis[i] = s,
            _ => artificial_rows.push(i),
        }
    }
    let cols = base_cols + artificial_rows.len();
    for row in rows.iter_mut() {
        row.resize(cols, Rational::zero());
    }
    for (k, &i) in artificial_rows.iter().enumerate() {
        rows[i][base_cols + k] = Rational::one();
        basis[i] = base_cols + k;
    }
    let mut t = Tableau {
        a: rows,
        b: rhs,
        basis,
        cols,
    };

    if !artificial_rows.is_empty() {
        let mut obj = vec![Rational::zero(); cols];
        for k in 0..artificial_rows.len() {
            obj[base_cols + k] = -Rational::one();
        }
        let allowed = vec![true; cols];
        t.maximize(&obj, &allowed);
        let infeasibility = (0..artificial_rows.len())
            .map(|k| t.value(base_cols + k))
            .fold(Rational::zero(), |acc, v| acc + v);
        if infeasibility.is_positive() {
            return Ok(None);
        }
        // Drive zero-level artificials out of the basis; drop redundant rows.
        let mut i = 0;
        while i < t.a.len() {
            if t.basis[i] >= base_cols {
                match (0..base_cols).find(|&j| !t.a[i][j].is_zero()) {
                    Some(j) => {
                        t.pivot(i, j);
                        i += 1;
                    }
                    None => {
                        t.a.remove(i);
                        t.b.remove(i);
                        t.basis.remove(i);
                    }
                }
            } else {
                i += 1;
            }
        }
    }

    let mut allowed = vec![true; cols];
    for flag in allowed.iter_mut().skip(base_cols) {
        *flag = false;
    }
    if has_strict {
        let mut obj = vec![Rational::zero(); cols];
        obj[delta] = Rational::one();
        if let Outcome::Unbounded = t.maximize(&obj, &allowed) {
            return Err(Error::MalformedSystem("margin is unbounded".into()));
        }
        if !t.value(delta).is_positive() {
            return Ok(None);
        }
    }
    let x: Vec<Rational> = (0..n).map(|j| t.value(j) - t.value(n + j)).collect();
    debug_assert!(system.is_satisfied_by(&x));
    Ok(Some(x))
}
