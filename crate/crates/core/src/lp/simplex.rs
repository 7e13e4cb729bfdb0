//! Dense two-phase primal simplex over arbitrary-precision rationals.
//!
//! Pivoting uses Bland's rule (lowest-index entering column, ties in the
//! ratio test broken by lowest basic column), so the method terminates on
//! degenerate problems and its output is a deterministic function of the
//! input. Every returned point is a basic feasible solution of the
//! slack-augmented system, hence an extreme point of the original polytope.

use num_traits::{One, Signed, Zero};

use super::{BasicSolution, LinearProgram, LpStatus, Rational, Relation};

struct Tableau {
    /// `rows[r]` has one entry per column plus the right-hand side last.
    rows: Vec<Vec<Rational>>,
    basis: Vec<usize>,
    /// Reduced costs per column; last entry is minus the objective value.
    obj: Vec<Rational>,
    n_structural: usize,
    first_artificial: usize,
    n_cols: usize,
}

enum Outcome {
    Optimal,
    Unbounded,
}

impl Tableau {
    fn build(lp: &LinearProgram) -> Tableau {
        let n = lp.variables.len();
        let m = lp.constraints.len();

        // Normalise every row to a non-negative right-hand side. A `>=` row
        // with zero rhs is negated into a `<=` row so its slack can start basic.
        let mut normalized = Vec::with_capacity(m);
        for c in &lp.constraints {
            let mut dense = vec![Rational::zero(); n];
            for (v, a) in &c.terms {
                dense[*v] += a.clone();
            }
            let mut rel = c.relation;
            let mut rhs = c.rhs.clone();
            if rhs.is_negative() || (rhs.is_zero() && rel == Relation::Ge) {
                for a in &mut dense {
                    *a = -a.clone();
                }
                rhs = -rhs;
                rel = match rel {
                    Relation::Le => Relation::Ge,
                    Relation::Ge => Relation::Le,
                };
            }
            normalized.push((dense, rel, rhs));
        }

        let n_art = normalized
            .iter()
            .filter(|(_, rel, _)| *rel == Relation::Ge)
            .count();
        let first_artificial = n + m;
        let n_cols = n + m + n_art;

        let mut rows = Vec::with_capacity(m);
        let mut basis = Vec::with_capacity(m);
        let mut next_art = first_artificial;
        for (r, (dense, rel, rhs)) in normalized.into_iter().enumerate() {
            let mut row = vec![Rational::zero(); n_cols + 1];
            for (v, a) in dense.into_iter().enumerate() {
                row[v] = a;
            }
            match rel {
                Relation::Le => {
                    row[n + r] = Rational::one();
                    basis.push(n + r);
                }
                Relation::Ge => {
                    row[n + r] = -Rational::one();
                    row[next_art] = Rational::one();
                    basis.push(next_art);
                    next_art += 1;
                }
            }
            row[n_cols] = rhs;
            rows.push(row);
        }

        Tableau {
            rows,
            basis,
            obj: vec![Rational::zero(); n_cols + 1],
            n_structural: n,
            first_artificial,
            n_cols,
        }
    }

    fn has_artificials(&self) -> bool {
        self.first_artificial < self.n_cols
    }

    /// Recomputes the reduced-cost row for `cost` against the current basis.
    fn price(&mut self, cost: &[Rational]) {
        let mut obj: Vec<Rational> = cost.to_vec();
        obj.push(Rational::zero());
        for (r, &b) in self.basis.iter().enumerate() {
            let cb = &cost[b];
            if cb.is_zero() {
                continue;
            }
            for (o, a) in obj.iter_mut().zip(&self.rows[r]) {
                if !a.is_zero() {
                    *o -= cb * a;
                }
            }
        }
        self.obj = obj;
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let inv = self.rows[row][col].recip();
        for a in &mut self.rows[row] {
            if !a.is_zero() {
                *a *= &inv;
            }
        }
        let pivot_row = self.rows[row].clone();
        for (r, other) in self.rows.iter_mut().enumerate() {
            if r == row || other[col].is_zero() {
                continue;
            }
            let factor = other[col].clone();
            for (a, p) in other.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *a -= &factor * p;
                }
            }
        }
        if !self.obj[col].is_zero() {
            let factor = self.obj[col].clone();
            for (a, p) in self.obj.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *a -= &factor * p;
                }
            }
        }
        self.basis[row] = col;
    }

    /// Runs Bland-rule iterations over columns `< col_limit`.
    fn iterate(&mut self, col_limit: usize) -> Outcome {
        loop {
            let entering = (0..col_limit).find(|&j| self.obj[j].is_negative());
            let Some(col) = entering else {
                return Outcome::Optimal;
            };
            let rhs = self.n_cols;
            let mut best: Option<(usize, Rational)> = None;
            for (r, row) in self.rows.iter().enumerate() {
                if !row[col].is_positive() {
                    continue;
                }
                let ratio = &row[rhs] / &row[col];
                let better = match &best {
                    None => true,
                    Some((br, bratio)) => {
                        ratio < *bratio || (ratio == *bratio && self.basis[r] < self.basis[*br])
                    }
                };
                if better {
                    best = Some((r, ratio));
                }
            }
            match best {
                Some((row, _)) => self.pivot(row, col),
                None => return Outcome::Unbounded,
            }
        }
    }

    /// Phase one: minimise the sum of artificials. Returns false when the
    /// problem is infeasible; otherwise leaves a basis free of artificials
    /// (redundant rows are dropped).
    fn phase_one(&mut self) -> bool {
        if !self.has_artificials() {
            return true;
        }
        let mut cost = vec![Rational::zero(); self.n_cols];
        for c in cost.iter_mut().skip(self.first_artificial) {
            *c = Rational::one();
        }
        self.price(&cost);
        // Phase one is bounded below by zero.
        let _ = self.iterate(self.n_cols);
        if !self.obj[self.n_cols].is_zero() {
            return false;
        }

        // Drive remaining (zero-valued) artificials out of the basis.
        let mut r = 0;
        while r < self.rows.len() {
            if self.basis[r] >= self.first_artificial {
                match (0..self.first_artificial).find(|&j| !self.rows[r][j].is_zero()) {
                    Some(col) => {
                        self.pivot(r, col);
                        r += 1;
                    }
                    None => {
                        self.rows.remove(r);
                        self.basis.remove(r);
                    }
                }
            } else {
                r += 1;
            }
        }
        true
    }

    fn structural_values(&self) -> Vec<Rational> {
        let mut values = vec![Rational::zero(); self.n_structural];
        for (r, &b) in self.basis.iter().enumerate() {
            if b < self.n_structural {
                values[b] = self.rows[r][self.n_cols].clone();
            }
        }
        values
    }
}

fn objective_value(lp: &LinearProgram, values: &[Rational]) -> Rational {
    lp.objective
        .iter()
        .zip(values)
        .map(|(c, x)| c * x)
        .fold(Rational::zero(), |a, b| a + b)
}

fn failed(lp: &LinearProgram, status: LpStatus) -> BasicSolution {
    BasicSolution {
        status,
        values: vec![Rational::zero(); lp.variables.len()],
        objective_value: Rational::zero(),
    }
}

pub(super) fn solve(lp: &LinearProgram, optimize: bool) -> BasicSolution {
    let mut t = Tableau::build(lp);
    if !t.phase_one() {
        return failed(lp, LpStatus::Infeasible);
    }
    if optimize && lp.objective.iter().any(|c| !c.is_zero()) {
        let mut cost = vec![Rational::zero(); t.n_cols];
        cost[..lp.objective.len()].clone_from_slice(&lp.objective);
        t.price(&cost);
        if let Outcome::Unbounded = t.iterate(t.first_artificial) {
            return failed(lp, LpStatus::Unbounded);
        }
    }
    let values = t.structural_values();
    let objective_value = objective_value(lp, &values);
    BasicSolution {
        status: LpStatus::Optimal,
        values,
        objective_value,
    }
}
