//! Dense two-phase primal simplex over exact rationals.
//!
//! Pivoting follows Bland's rule (smallest eligible entering column, smallest
//! basic index among ratio ties), so runs are deterministic and cannot cycle.

use num_traits::{Signed, Zero};

use crate::guard::record;
use crate::rational::{int, Rational};
use crate::LpError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VarBound {
    NonNegative,
    Free,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Constraint {
    pub coeffs: Vec<Rational>,
    pub relation: Relation,
    pub rhs: Rational,
}

impl Constraint {
    pub fn is_satisfied_by(&self, x: &[Rational]) -> bool {
        let lhs = crate::rational::dot(&self.coeffs, x);
        match self.relation {
            Relation::Le => lhs <= self.rhs,
            Relation::Eq => lhs == self.rhs,
            Relation::Ge => lhs >= self.rhs,
        }
    }
}

/// `maximize objective · x` subject to the constraints and per-variable bounds.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearProgram {
    num_vars: usize,
    objective: Vec<Rational>,
    constraints: Vec<Constraint>,
    bounds: Vec<VarBound>,
}

impl LinearProgram {
    /// A feasibility program over `num_vars` nonnegative variables with zero objective.
    pub fn new(num_vars: usize) -> Self {
        LinearProgram {
            num_vars,
            objective: vec![Rational::zero(); num_vars],
            constraints: Vec::new(),
            bounds: vec![VarBound::NonNegative; num_vars],
        }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn objective(&self) -> &[Rational] {
        &self.objective
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn bounds(&self) -> &[VarBound] {
        &self.bounds
    }

    pub fn maximize(mut self, objective: Vec<Rational>) -> Self {
        self.objective = objective;
        self
    }

    pub fn set_objective(&mut self, objective: Vec<Rational>) {
        self.objective = objective;
    }

    pub fn constrain(mut self, coeffs: Vec<Rational>, relation: Relation, rhs: Rational) -> Self {
        self.add_constraint(coeffs, relation, rhs);
        self
    }

    pub fn add_constraint(&mut self, coeffs: Vec<Rational>, relation: Relation, rhs: Rational) {
        self.constraints.push(Constraint {
            coeffs,
            relation,
            rhs,
        });
    }

    pub fn set_bound(&mut self, var: usize, bound: VarBound) {
        self.bounds[var] = bound;
    }

    pub fn free(mut self, var: usize) -> Self {
        self.set_bound(var, VarBound::Free);
        self
    }

    fn validate(&self) -> Result<(), LpError> {
        if self.num_vars == 0 {
            return Err(LpError::NoVariables);
        }
        let expect = |found: usize| {
            if found == self.num_vars {
                Ok(())
            } else {
                Err(LpError::DimensionMismatch {
                    expected: self.num_vars,
                    found,
                })
            }
        };
        expect(self.objective.len())?;
        expect(self.bounds.len())?;
        for c in &self.constraints {
            expect(c.coeffs.len())?;
        }
        Ok(())
    }

    /// True when `x` satisfies every constraint and bound exactly.
    pub fn is_feasible(&self, x: &[Rational]) -> bool {
        x.len() == self.num_vars
            && self
                .bounds
                .iter()
                .zip(x)
                .all(|(b, v)| *b == VarBound::Free || !v.is_negative())
            && self.constraints.iter().all(|c| c.is_satisfied_by(x))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome {
    Infeasible,
    /// `point` is feasible; `point + t * ray` stays feasible for all `t >= 0`
    /// and the objective grows strictly along `ray`.
    Unbounded {
        point: Vec<Rational>,
        ray: Vec<Rational>,
    },
    Optimal {
        value: Rational,
        witness: Vec<Rational>,
    },
}

impl LpOutcome {
    pub fn is_infeasible(&self) -> bool {
        matches!(self, LpOutcome::Infeasible)
    }

    pub fn is_unbounded(&self) -> bool {
        matches!(self, LpOutcome::Unbounded { .. })
    }

    pub fn optimum(&self) -> Option<&Rational> {
        match self {
            LpOutcome::Optimal { value, .. } => Some(value),
            _ => None,
        }
    }
}

/// Which original variable a tableau column stands for.
#[derive(Clone, Copy)]
enum Column {
    Plus(usize),
    Minus(usize),
    Slack,
    Artificial,
}

struct Tableau {
    // m rows of width ncols + 1; the last entry is the right-hand side.
    rows: Vec<Vec<Rational>>,
    // Reduced profits; the last entry is minus the current objective value.
    profit: Vec<Rational>,
    basis: Vec<usize>,
    columns: Vec<Column>,
    blocked: Vec<bool>,
    pivots: u64,
}

enum Step {
    Optimal,
    Unbounded(usize),
}

impl Tableau {
    fn ncols(&self) -> usize {
        self.columns.len()
    }

    fn pivot(&mut self, row: usize, col: usize) {
        self.pivots += 1;
        let inv = Rational::from_integer(1.into()) / &self.rows[row][col];
        for x in self.rows[row].iter_mut() {
            if !x.is_zero() {
                *x *= &inv;
            }
        }
        let pivot_row = std::mem::take(&mut self.rows[row]);
        for (i, r) in self.rows.iter_mut().enumerate() {
            if i == row || r[col].is_zero() {
                continue;
            }
            let factor = r[col].clone();
            for (x, p) in r.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *x -= &factor * p;
                }
            }
        }
        if !self.profit[col].is_zero() {
            let factor = self.profit[col].clone();
            for (x, p) in self.profit.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *x -= &factor * p;
                }
            }
        }
        self.rows[row] = pivot_row;
        self.basis[row] = col;
    }

    fn run(&mut self) -> Step {
        let n = self.ncols();
        loop {
            let entering = (0..n).find(|&j| !self.blocked[j] && self.profit[j].is_positive());
            let Some(col) = entering else {
                return Step::Optimal;
            };
            let mut best: Option<(usize, Rational)> = None;
            for (i, r) in self.rows.iter().enumerate() {
                if !r[col].is_positive() {
                    continue;
                }
                let ratio = &r[n] / &r[col];
                let better = match &best {
                    None => true,
                    Some((bi, br)) => {
                        ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi])
                    }
                };
                if better {
                    best = Some((i, ratio));
                }
            }
            match best {
                Some((row, _)) => self.pivot(row, col),
                None => return Step::Unbounded(col),
            }
        }
    }

    fn set_profit(&mut self, costs: &[Rational]) {
        let n = self.ncols();
        let mut profit: Vec<Rational> = costs.to_vec();
        profit.push(Rational::zero());
        for (r, &b) in self.rows.iter().zip(&self.basis) {
            let cb = &costs[b];
            if cb.is_zero() {
                continue;
            }
            for j in 0..=n {
                if !r[j].is_zero() {
                    profit[j] -= cb * &r[j];
                }
            }
        }
        self.profit = profit;
    }

    fn column_values(&self) -> Vec<Rational> {
        let n = self.ncols();
        let mut values = vec![Rational::zero(); n];
        for (r, &b) in self.rows.iter().zip(&self.basis) {
            values[b] = r[n].clone();
        }
        values
    }

    fn to_original(&self, values: &[Rational], num_vars: usize) -> Vec<Rational> {
        let mut x = vec![Rational::zero(); num_vars];
        for (v, col) in values.iter().zip(&self.columns) {
            match col {
                Column::Plus(j) => x[*j] += v,
                Column::Minus(j) => x[*j] -= v,
                _ => {}
            }
        }
        x
    }
}

/// Solves the program exactly.
pub fn solve(lp: &LinearProgram) -> Result<LpOutcome, LpError> {
    lp.validate()?;
    let mut tableau = build(lp);
    let outcome = solve_tableau(lp, &mut tableau);
    let pivots = tableau.pivots;
    record(|s| {
        s.lp_solves += 1;
        s.lp_pivots += pivots;
    });
    Ok(outcome)
}

fn build(lp: &LinearProgram) -> Tableau {
    let mut columns = Vec::new();
    for (j, bound) in lp.bounds.iter().enumerate() {
        columns.push(Column::Plus(j));
        if *bound == VarBound::Free {
            columns.push(Column::Minus(j));
        }
    }
    let structural = columns.len();

    // Normalize every row to a nonnegative right-hand side.
    let normalized: Vec<(Vec<Rational>, Relation, Rational)> = lp
        .constraints
        .iter()
        .map(|c| {
            if c.rhs.is_negative() {
                let flipped = match c.relation {
                    Relation::Le => Relation::Ge,
                    Relation::Ge => Relation::Le,
                    Relation::Eq => Relation::Eq,
                };
                (
                    c.coeffs.iter().map(|x| -x).collect(),
                    flipped,
                    -c.rhs.clone(),
                )
            } else {
                (c.coeffs.clone(), c.relation, c.rhs.clone())
            }
        })
        .collect();

    let slack_count = normalized.iter().filter(|c| c.1 != Relation::Eq).count();
    let artificial_count = normalized.iter().filter(|c| c.1 != Relation::Le).count();
    columns.extend(std::iter::repeat_n(Column::Slack, slack_count));
    columns.extend(std::iter::repeat_n(Column::Artificial, artificial_count));
    let n = columns.len();

    let mut rows = Vec::with_capacity(normalized.len());
    let mut basis = Vec::with_capacity(normalized.len());
    let mut next_slack = structural;
    let mut next_artificial = structural + slack_count;
    for (coeffs, relation, rhs) in normalized {
        let mut row = vec![Rational::zero(); n + 1];
        let mut col = 0;
        for (j, bound) in lp.bounds.iter().enumerate() {
            row[col] = coeffs[j].clone();
            col += 1;
            if *bound == VarBound::Free {
                row[col] = -coeffs[j].clone();
                col += 1;
            }
        }
        row[n] = rhs;
        match relation {
            Relation::Le => {
                row[next_slack] = int(1);
                basis.push(next_slack);
                next_slack += 1;
            }
            Relation::Ge => {
                row[next_slack] = int(-1);
                next_slack += 1;
                row[next_artificial] = int(1);
                basis.push(next_artificial);
                next_artificial += 1;
            }
            Relation::Eq => {
                row[next_artificial] = int(1);
                basis.push(next_artificial);
                next_artificial += 1;
            }
        }
        rows.push(row);
    }
    Tableau {
        rows,
        profit: vec![Rational::zero(); n + 1],
        basis,
        columns,
        blocked: vec![false; n],
        pivots: 0,
    }
}

fn solve_tableau(lp: &LinearProgram, t: &mut Tableau) -> LpOutcome {
    let n = t.ncols();
    let is_artificial: Vec<bool> = t
        .columns
        .iter()
        .map(|c| matches!(c, Column::Artificial))
        .collect();

    if is_artificial.iter().any(|&a| a) {
        let phase_one: Vec<Rational> = is_artificial
            .iter()
            .map(|&a| if a { int(-1) } else { Rational::zero() })
            .collect();
        t.set_profit(&phase_one);
        // Phase one is bounded above by zero, so it always terminates optimally.
        let _ = t.run();
        if !t.profit[n].is_zero() {
            return LpOutcome::Infeasible;
        }
        // Drive remaining (zero-level) artificials out of the basis.
        let mut i = 0;
        while i < t.rows.len() {
            if is_artificial[t.basis[i]] {
                let replacement = (0..n).find(|&j| !is_artificial[j] && !t.rows[i][j].is_zero());
                match replacement {
                    Some(j) => {
                        t.pivot(i, j);
                        i += 1;
                    }
                    None => {
                        // Redundant equality row.
                        t.rows.remove(i);
                        t.basis.remove(i);
                    }
                }
            } else {
                i += 1;
            }
        }
        for (b, &a) in t.blocked.iter_mut().zip(&is_artificial) {
            *b = a;
        }
    }

    let mut costs = vec![Rational::zero(); n];
    for (j, col) in t.columns.iter().enumerate() {
        match col {
            Column::Plus(v) => costs[j] = lp.objective[*v].clone(),
            Column::Minus(v) => costs[j] = -lp.objective[*v].clone(),
            _ => {}
        }
    }
    t.set_profit(&costs);
    match t.run() {
        Step::Optimal => {
            let values = t.column_values();
            LpOutcome::Optimal {
                value: -t.profit[n].clone(),
                witness: t.to_original(&values, lp.num_vars),
            }
        }
        Step::Unbounded(col) => {
            let values = t.column_values();
            let mut direction = vec![Rational::zero(); n];
            direction[col] = int(1);
            for (r, &b) in t.rows.iter().zip(&t.basis) {
                if !r[col].is_zero() {
                    direction[b] = -r[col].clone();
                }
            }
            LpOutcome::Unbounded {
                point: t.to_original(&values, lp.num_vars),
                ray: t.to_original(&direction, lp.num_vars),
            }
        }
    }
}
