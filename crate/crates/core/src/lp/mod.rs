//! Exact linear programs: representation, a rational simplex, and the
//! expanded-network flow program.

pub mod flow;
pub mod format;
pub mod scalar;
mod simplex;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RowKind {
    Eq,
    Le,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Row {
    pub name: String,
    pub coeffs: Vec<(usize, Rational)>,
    pub kind: RowKind,
    pub rhs: Rational,
}

/// `maximize c.x` subject to rows and `0 <= x_j <= upper_j`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LinearProgram {
    pub var_names: Vec<String>,
    pub upper: Vec<Option<Rational>>,
    pub objective: Vec<(usize, Rational)>,
    pub rows: Vec<Row>,
}

impl LinearProgram {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_var(&mut self, name: impl Into<String>) -> usize {
        self.var_names.push(name.into());
        self.upper.push(None);
        self.var_names.len() - 1
    }

    pub fn set_upper(&mut self, var: usize, bound: Rational) {
        self.upper[var] = Some(bound);
    }

    pub fn add_row(
        &mut self,
        name: impl Into<String>,
        coeffs: Vec<(usize, Rational)>,
        kind: RowKind,
        rhs: Rational,
    ) {
        self.rows.push(Row {
            name: name.into(),
            coeffs,
            kind,
            rhs,
        });
    }

    pub fn set_objective(&mut self, coeffs: Vec<(usize, Rational)>) {
        self.objective = coeffs;
    }

    pub fn num_vars(&self) -> usize {
        self.var_names.len()
    }

    /// Rejects references to undeclared variables.
    pub fn check(&self) -> Result<()> {
        let n = self.num_vars();
        let bad = self
            .objective
            .iter()
            .chain(self.rows.iter().flat_map(|r| r.coeffs.iter()))
            .find(|(j, _)| *j >= n);
        match bad {
            Some((j, _)) => Err(Error::Structural(format!("variable {j} is not declared"))),
            None => Ok(()),
        }
    }

    pub fn objective_value(&self, values: &[Rational]) -> Rational {
        self.objective.iter().map(|(j, c)| c * &values[*j]).sum()
    }

    /// Substitutes `values` into every row and bound; `Err` names the first
    /// violated one.
    pub fn check_assignment(&self, values: &[Rational]) -> std::result::Result<(), String> {
        if values.len() != self.num_vars() {
            return Err("assignment length mismatch".into());
        }
        for (j, v) in values.iter().enumerate() {
            if v.is_negative() {
                return Err(format!("{} is negative", self.var_names[j]));
            }
            if let Some(u) = &self.upper[j] {
                if v > u {
                    return Err(format!("{} exceeds its upper bound", self.var_names[j]));
                }
            }
        }
        for row in &self.rows {
            let lhs: Rational = row.coeffs.iter().map(|(j, a)| a * &values[*j]).sum();
            let ok = match row.kind {
                RowKind::Eq => lhs == row.rhs,
                RowKind::Le => lhs <= row.rhs,
            };
            if !ok {
                return Err(format!(
                    "row {} violated: lhs {} vs rhs {}",
                    row.name,
                    rational::format(&lhs),
                    rational::format(&row.rhs)
                ));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
    /// Stopped early: the current feasible point already meets the
    /// requested objective target.
    TargetReached,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LpSolution {
    pub status: LpStatus,
    pub values: Vec<Rational>,
    pub objective_value: Rational,
    pub pivots: usize,
    /// True when the fixed-width fast path overflowed and the solve was
    /// redone with arbitrary precision.
    pub used_bigint: bool,
}

#[derive(Debug, Clone, Default)]
pub struct SolveOptions {
    /// Stop as soon as a feasible point reaches this objective value.
    pub target: Option<Rational>,
}

pub fn solve_lp(lp: &LinearProgram) -> LpSolution {
    solve_lp_with(lp, &SolveOptions::default())
}

/// Solves exactly and verifies any returned point by substitution; a failed
/// check is a solver bug and panics.
pub fn solve_lp_with(lp: &LinearProgram, opts: &SolveOptions) -> LpSolution {
    lp.check().expect("malformed linear program");
    let sol = simplex::solve(lp, opts);
    if matches!(sol.status, LpStatus::Optimal | LpStatus::TargetReached) {
        if let Err(why) = lp.check_assignment(&sol.values) {
            panic!("simplex returned an infeasible point: {why}");
        }
        assert_eq!(lp.objective_value(&sol.values), sol.objective_value);
    }
    sol
}

impl LpSolution {
    pub fn is_feasible(&self) -> bool {
        matches!(self.status, LpStatus::Optimal | LpStatus::TargetReached)
    }

    pub(crate) fn empty(status: LpStatus, n: usize) -> Self {
        LpSolution {
            status,
            values: vec![Rational::zero(); n],
            objective_value: Rational::zero(),
            pivots: 0,
            used_bigint: false,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    #[test]
    fn single_bounded_variable() {
        let mut lp = LinearProgram::new();
        let x = lp.add_var("x");
        lp.add_row("cap", vec![(x, int(1))], RowKind::Le, ratio(5, 3));
        lp.set_objective(vec![(x, int(1))]);
        let sol = solve_lp(&lp);
        assert_eq!(sol.status, LpStatus::Optimal);
        assert_eq!(sol.values, vec![ratio(5, 3)]);
    }

    #[test]
    fn equality_row() {
        let mut lp = LinearProgram::new();
        let x = lp.add_var("x");
        let y = lp.add_var("y");
        lp.add_row("sum", vec![(x, int(1)), (y, int(1))], RowKind::Eq, int(1));
        lp.set_objective(vec![(x, int(1)), (y, int(1))]);
        let sol = solve_lp(&lp);
        assert_eq!(sol.status, LpStatus::Optimal);
        assert_eq!(sol.objective_value, int(1));
    }

    #[test]
    fn infeasible_and_unbounded() {
        let mut lp = LinearProgram::new();
        let x = lp.add_var("x");
        lp.add_row("a", vec![(x, int(1))], RowKind::Eq, int(2));
        lp.add_row("b", vec![(x, int(1))], RowKind::Le, int(1));
        assert_eq!(solve_lp(&lp).status, LpStatus::Infeasible);

        let mut lp = LinearProgram::new();
        let x = lp.add_var("x");
        let y = lp.add_var("y");
        lp.add_row("a", vec![(x, int(1)), (y, int(-1))], RowKind::Le, int(1));
        lp.set_objective(vec![(x, int(1))]);
        assert_eq!(solve_lp(&lp).status, LpStatus::Unbounded);
    }

    #[test]
    fn negative_rhs_and_upper_bounds() {
        // x - y <= -1 forces y >= x + 1; y <= 3 caps x at 2
        let mut lp = LinearProgram::new();
        let x = lp.add_var("x");
        let y = lp.add_var("y");
        lp.set_upper(y, int(3));
        lp.add_row("gap", vec![(x, int(1)), (y, int(-1))], RowKind::Le, int(-1));
        lp.set_objective(vec![(x, int(1))]);
        let sol = solve_lp(&lp);
        assert_eq!(sol.status, LpStatus::Optimal);
        assert_eq!(sol.objective_value, int(2));
    }

    #[test]
    fn target_stops_early() {
        let mut lp = LinearProgram::new();
        let x = lp.add_var("x");
        let y = lp.add_var("y");
        lp.add_row("a", vec![(x, int(1))], RowKind::Le, int(4));
        lp.add_row("b", vec![(y, int(1))], RowKind::Le, int(4));
        lp.set_objective(vec![(x, int(1)), (y, int(1))]);
        let opts = SolveOptions {
            target: Some(int(3)),
        };
        let sol = solve_lp_with(&lp, &opts);
        assert_eq!(sol.status, LpStatus::TargetReached);
        assert!(sol.objective_value >= int(3));
    }

    #[test]
    fn huge_coefficients_fall_back_to_bigint() {
        let mut lp = LinearProgram::new();
        let x = lp.add_var("x");
        let big = Rational::from_integer(num_bigint::BigInt::from(i64::MAX) * 8);
        lp.add_row("a", vec![(x, int(3))], RowKind::Le, big.clone());
        lp.set_objective(vec![(x, int(1))]);
        let sol = solve_lp(&lp);
        assert!(sol.used_bigint);
        assert_eq!(sol.objective_value, big / int(3));
    }

    #[test]
    fn undeclared_variable_is_rejected() {
        let mut lp = LinearProgram::new();
        lp.add_var("x");
        lp.add_row("a", vec![(3, int(1))], RowKind::Le, int(1));
        assert!(lp.check().is_err());
    }
}
