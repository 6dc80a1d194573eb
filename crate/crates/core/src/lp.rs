//! Dense two-phase simplex over any [`Scalar`].
//!
//! Pivoting follows Bland's rule, so the method terminates on degenerate
//! problems. With an exact scalar the returned optimum is exact. Sizes here are
//! tiny (tens of rows), so a dense tableau is the right tool.

use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

#[derive(Clone, Debug)]
pub struct Constraint<T> {
    pub coeffs: Vec<T>,
    pub relation: Relation,
    pub rhs: T,
}

/// `maximize objective . x` subject to the constraints and `x >= 0`.
#[derive(Clone, Debug)]
pub struct LinearProgram<T> {
    pub objective: Vec<T>,
    pub constraints: Vec<Constraint<T>>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum LpOutcome<T> {
    Optimal { x: Vec<T>, value: T },
    Infeasible,
    Unbounded,
}

impl<T: Scalar> LpOutcome<T> {
    pub fn optimal(self) -> Option<(Vec<T>, T)> {
        match self {
            LpOutcome::Optimal { x, value } => Some((x, value)),
            _ => None,
        }
    }
}

impl<T: Scalar> LinearProgram<T> {
    pub fn maximize(objective: Vec<T>) -> Self {
        LinearProgram {
            objective,
            constraints: Vec::new(),
        }
    }

    pub fn constrain(&mut self, coeffs: Vec<T>, relation: Relation, rhs: T) -> &mut Self {
        assert_eq!(coeffs.len(), self.objective.len());
        self.constraints.push(Constraint {
            coeffs,
            relation,
            rhs,
        });
        self
    }

    pub fn solve(&self) -> LpOutcome<T> {
        Tableau::build(self).run(&self.objective)
    }
}

struct Tableau<T> {
    n_vars: usize,
    n_cols: usize,
    rows: Vec<Vec<T>>,
    basis: Vec<usize>,
    artificial: Vec<bool>,
    z: Vec<T>,
}

enum PivotResult {
    Optimal,
    Unbounded,
}

impl<T: Scalar> Tableau<T> {
    fn build(lp: &LinearProgram<T>) -> Self {
        let n = lp.objective.len();
        let mut normalized = Vec::with_capacity(lp.constraints.len());
        for c in &lp.constraints {
            if c.rhs < T::zero() {
                let relation = match c.relation {
                    Relation::Le => Relation::Ge,
                    Relation::Ge => Relation::Le,
                    Relation::Eq => Relation::Eq,
                };
                normalized.push((
                    c.coeffs.iter().map(|a| -a.clone()).collect::<Vec<_>>(),
                    relation,
                    -c.rhs.clone(),
                ));
            } else {
                normalized.push((c.coeffs.clone(), c.relation, c.rhs.clone()));
            }
        }

        let extra: usize = normalized
            .iter()
            .map(|(_, r, _)| match r {
                Relation::Le | Relation::Eq => 1,
                Relation::Ge => 2,
            })
            .sum();
        let n_cols = n + extra;
        let mut rows = Vec::with_capacity(normalized.len());
        let mut basis = Vec::with_capacity(normalized.len());
        let mut artificial = vec![false; n_cols];
        let mut next = n;
        for (coeffs, relation, rhs) in normalized {
            let mut row = vec![T::zero(); n_cols + 1];
            row[..n].clone_from_slice(&coeffs);
            row[n_cols] = rhs;
            match relation {
                Relation::Le => {
                    row[next] = T::one();
                    basis.push(next);
                    next += 1;
                }
                Relation::Ge => {
                    row[next] = -T::one();
                    row[next + 1] = T::one();
                    artificial[next + 1] = true;
                    basis.push(next + 1);
                    next += 2;
                }
                Relation::Eq => {
                    row[next] = T::one();
                    artificial[next] = true;
                    basis.push(next);
                    next += 1;
                }
            }
            rows.push(row);
        }
        Tableau {
            n_vars: n,
            n_cols,
            rows,
            basis,
            artificial,
            z: Vec::new(),
        }
    }

    fn price(&mut self, costs: &[T]) {
        let mut z = vec![T::zero(); self.n_cols + 1];
        z[..costs.len()].clone_from_slice(costs);
        for (row, &b) in self.rows.iter().zip(&self.basis) {
            let cb = costs.get(b).cloned().unwrap_or_else(T::zero);
            if cb.is_zero() {
                continue;
            }
            for (zj, a) in z.iter_mut().zip(row) {
                *zj = zj.clone() - cb.clone() * a.clone();
            }
        }
        self.z = z;
    }

    fn pivot(&mut self, p: usize, q: usize) {
        let piv = self.rows[p][q].clone();
        for a in self.rows[p].iter_mut() {
            *a = a.clone() / piv.clone();
        }
        let pivot_row = self.rows[p].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == p {
                continue;
            }
            let f = row[q].clone();
            if f.is_zero() {
                continue;
            }
            for (a, b) in row.iter_mut().zip(&pivot_row) {
                *a = a.clone() - f.clone() * b.clone();
            }
        }
        let f = self.z[q].clone();
        if !f.is_zero() {
            for (a, b) in self.z.iter_mut().zip(&pivot_row) {
                *a = a.clone() - f.clone() * b.clone();
            }
        }
        self.basis[p] = q;
    }

    fn iterate(&mut self, allow: impl Fn(usize) -> bool) -> PivotResult {
        let rhs = self.n_cols;
        loop {
            let entering = (0..self.n_cols).find(|&j| allow(j) && self.z[j].is_positive_strict());
            let Some(q) = entering else {
                return PivotResult::Optimal;
            };
            let mut leave: Option<(usize, T)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if !row[q].is_positive_strict() {
                    continue;
                }
                let ratio = row[rhs].clone() / row[q].clone();
                let better = match &leave {
                    None => true,
                    Some((l, best)) => {
                        ratio < *best || (ratio == *best && self.basis[i] < self.basis[*l])
                    }
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
            match leave {
                Some((p, _)) => self.pivot(p, q),
                None => return PivotResult::Unbounded,
            }
        }
    }

    fn run(mut self, objective: &[T]) -> LpOutcome<T> {
        let rhs = self.n_cols;
        if self.artificial.iter().any(|a| *a) {
            let phase_one: Vec<T> = (0..self.n_cols)
                .map(|j| {
                    if self.artificial[j] {
                        -T::one()
                    } else {
                        T::zero()
                    }
                })
                .collect();
            self.price(&phase_one);
            self.iterate(|_| true);
            // z[rhs] holds minus the phase-one objective, i.e. the artificial sum.
            if self.z[rhs].is_positive_strict() {
                return LpOutcome::Infeasible;
            }
            let mut i = 0;
            while i < self.rows.len() {
                if self.artificial[self.basis[i]] {
                    let col = (0..self.n_cols)
                        .find(|&j| !self.artificial[j] && !self.rows[i][j].is_negligible());
                    match col {
                        Some(q) => {
                            self.pivot(i, q);
                            i += 1;
                        }
                        None => {
                            self.rows.remove(i);
                            self.basis.remove(i);
                        }
                    }
                } else {
                    i += 1;
                }
            }
        }
        self.price(objective);
        let artificial = self.artificial.clone();
        match self.iterate(|j| !artificial[j]) {
            PivotResult::Unbounded => LpOutcome::Unbounded,
            PivotResult::Optimal => {
                let mut x = vec![T::zero(); self.n_vars];
                for (row, &b) in self.rows.iter().zip(&self.basis) {
                    if b < self.n_vars {
                        x[b] = row[rhs].clone();
                    }
                }
                let value = -self.z[rhs].clone();
                LpOutcome::Optimal { x, value }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rational;
    use crate::Rational;

    fn r(n: i64, d: i64) -> Rational {
        rational(n, d)
    }

    #[test]
    fn textbook_maximum() {
        // max 3x + 5y, x <= 4, 2y <= 12, 3x + 2y <= 18 -> (2, 6), 36
        let mut lp = LinearProgram::maximize(vec![r(3, 1), r(5, 1)]);
        lp.constrain(vec![r(1, 1), r(0, 1)], Relation::Le, r(4, 1))
            .constrain(vec![r(0, 1), r(2, 1)], Relation::Le, r(12, 1))
            .constrain(vec![r(3, 1), r(2, 1)], Relation::Le, r(18, 1));
        let (x, v) = lp.solve().optimal().unwrap();
        assert_eq!(x, vec![r(2, 1), r(6, 1)]);
        assert_eq!(v, r(36, 1));
    }

    #[test]
    fn equality_and_ge_rows() {
        // max -x - y, x + y = 1, x >= 1/3
        let mut lp = LinearProgram::maximize(vec![r(-1, 1), r(-2, 1)]);
        lp.constrain(vec![r(1, 1), r(1, 1)], Relation::Eq, r(1, 1))
            .constrain(vec![r(1, 1), r(0, 1)], Relation::Ge, r(1, 3));
        let (x, v) = lp.solve().optimal().unwrap();
        assert_eq!(x, vec![r(1, 1), r(0, 1)]);
        assert_eq!(v, r(-1, 1));
    }

    #[test]
    fn infeasible_and_unbounded() {
        let mut lp = LinearProgram::maximize(vec![r(1, 1)]);
        lp.constrain(vec![r(1, 1)], Relation::Le, r(1, 1))
            .constrain(vec![r(1, 1)], Relation::Ge, r(2, 1));
        assert_eq!(lp.solve(), LpOutcome::Infeasible);

        let mut lp = LinearProgram::maximize(vec![r(1, 1)]);
        lp.constrain(vec![r(1, 1)], Relation::Ge, r(0, 1));
        assert_eq!(lp.solve(), LpOutcome::Unbounded);
    }

    #[test]
    fn redundant_equalities() {
        let mut lp = LinearProgram::maximize(vec![r(1, 1), r(0, 1)]);
        lp.constrain(vec![r(1, 1), r(1, 1)], Relation::Eq, r(1, 1))
            .constrain(vec![r(2, 1), r(2, 1)], Relation::Eq, r(2, 1));
        let (_, v) = lp.solve().optimal().unwrap();
        assert_eq!(v, r(1, 1));
    }

    #[test]
    fn floating_point_agrees() {
        let mut lp = LinearProgram::maximize(vec![3.0f64, 5.0]);
        lp.constrain(vec![1.0, 0.0], Relation::Le, 4.0)
            .constrain(vec![0.0, 2.0], Relation::Le, 12.0)
            .constrain(vec![3.0, 2.0], Relation::Le, 18.0);
        let (_, v) = lp.solve().optimal().unwrap();
        assert!((v - 36.0).abs() < 1e-9);
    }
}
