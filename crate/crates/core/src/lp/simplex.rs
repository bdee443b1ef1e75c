//! Dense-tableau primal simplex, generic over an exact scalar.
//!
//! Rows whose basic variable is artificial are only flagged; artificial
//! columns are never stored because an artificial that leaves the basis
//! never returns. Phase 1 runs only when some artificial starts positive.
//! In phase 2 a basic artificial sits at zero and is pivoted out as soon as
//! the entering column touches its row, which keeps it at zero.

use std::cmp::Ordering;

use num_traits::{Signed, Zero};

use super::scalar::{Scalar, SmallRat};
use super::{LinearProgram, LpSolution, LpStatus, RowKind, SolveOptions};
use crate::rational::Rational;

/// Consecutive degenerate pivots tolerated before Bland's rule takes over;
/// it stays in force until the objective moves again, so no cycle can form.
const DEGENERATE_LIMIT: usize = 50;
const BUDGET_FACTOR: usize = 16;

pub(super) fn solve(lp: &LinearProgram, opts: &SolveOptions) -> LpSolution {
    if let Some(sol) = run::<SmallRat>(lp, opts) {
        return sol;
    }
    let mut sol = run::<Rational>(lp, opts).expect("arbitrary precision never overflows");
    sol.used_bigint = true;
    sol
}

struct Tableau<S> {
    n_struct: usize,
    n_cols: usize,
    rows: Vec<Vec<S>>,
    rhs: Vec<S>,
    /// Negated reduced costs of the phase-2 objective; `obj_rhs` is its
    /// current value.
    obj: Vec<S>,
    obj_rhs: S,
    /// Phase-1 row for maximizing minus the sum of artificials.
    aux: Vec<S>,
    aux_rhs: S,
    basis: Vec<usize>,
    artificial: Vec<bool>,
    pivots: usize,
}

enum Step {
    Done,
    Unbounded,
    Moved { degenerate: bool },
}

fn run<S: Scalar>(lp: &LinearProgram, opts: &SolveOptions) -> Option<LpSolution> {
    let mut t = build::<S>(lp)?;
    let budget = BUDGET_FACTOR * (t.rows.len() + t.n_cols + 1).pow(2);
    let mut bland = false;
    let mut degenerate_run = 0usize;

    let needs_phase1 = t
        .rhs
        .iter()
        .zip(&t.artificial)
        .any(|(b, &a)| a && !b.is_zero());
    if needs_phase1 {
        loop {
            match t.step(true, bland)? {
                Step::Done => break,
                Step::Unbounded => unreachable!("phase 1 objective is bounded"),
                Step::Moved { degenerate } => {
                    t.track(&mut degenerate_run, &mut bland, degenerate, budget);
                }
            }
        }
        if !t.aux_rhs.is_zero() {
            return Some(LpSolution::empty(LpStatus::Infeasible, lp.num_vars()));
        }
    }

    let target = match &opts.target {
        Some(r) => Some(S::from_rational(r)?),
        None => None,
    };
    let reached = |t: &Tableau<S>| {
        target
            .as_ref()
            .is_some_and(|g| t.obj_rhs.cmp_to(g) != Ordering::Less)
    };
    let status = loop {
        if reached(&t) {
            break LpStatus::TargetReached;
        }
        match t.step(false, bland)? {
            Step::Done => break LpStatus::Optimal,
            Step::Unbounded => break LpStatus::Unbounded,
            Step::Moved { degenerate } => {
                t.track(&mut degenerate_run, &mut bland, degenerate, budget);
            }
        }
    };
    if status == LpStatus::Unbounded {
        let mut sol = LpSolution::empty(status, lp.num_vars());
        sol.pivots = t.pivots;
        return Some(sol);
    }
    let mut values = vec![<Rational as Zero>::zero(); lp.num_vars()];
    for (i, &b) in t.basis.iter().enumerate() {
        if b < t.n_struct && !t.artificial[i] {
            values[b] = t.rhs[i].to_rational();
        }
    }
    Some(LpSolution {
        status,
        objective_value: t.obj_rhs.to_rational(),
        values,
        pivots: t.pivots,
        used_bigint: false,
    })
}

fn build<S: Scalar>(lp: &LinearProgram) -> Option<Tableau<S>> {
    let n = lp.num_vars();
    // (coeffs, kind, rhs) including upper-bound rows
    let mut rows: Vec<(Vec<(usize, &Rational)>, RowKind, Rational)> = lp
        .rows
        .iter()
        .map(|r| (r.coeffs.iter().map(|(j, a)| (*j, a)).collect(), r.kind, r.rhs.clone()))
        .collect();
    let one = Rational::from_integer(1.into());
    for (j, u) in lp.upper.iter().enumerate() {
        if let Some(u) = u {
            rows.push((vec![(j, &one)], RowKind::Le, u.clone()));
        }
    }
    let n_slack = rows.iter().filter(|r| r.1 == RowKind::Le).count();
    let n_cols = n + n_slack;
    let m = rows.len();

    let mut t = Tableau {
        n_struct: n,
        n_cols,
        rows: Vec::with_capacity(m),
        rhs: Vec::with_capacity(m),
        obj: vec![S::zero(); n_cols],
        obj_rhs: S::zero(),
        aux: vec![S::zero(); n_cols],
        aux_rhs: S::zero(),
        basis: Vec::with_capacity(m),
        artificial: Vec::with_capacity(m),
        pivots: 0,
    };
    let mut slack = n;
    for (i, (coeffs, kind, rhs)) in rows.into_iter().enumerate() {
        let flip = Signed::is_negative(&rhs);
        let mut dense = vec![S::zero(); n_cols];
        for (j, a) in coeffs {
            let a = if flip { -a } else { a.clone() };
            dense[j] = dense[j].add(&S::from_rational(&a)?)?;
        }
        let b = S::from_rational(&if flip { -rhs } else { rhs })?;
        let basic = match kind {
            RowKind::Le => {
                dense[slack] = if flip { S::one().neg() } else { S::one() };
                slack += 1;
                if flip {
                    None
                } else {
                    Some(slack - 1)
                }
            }
            RowKind::Eq => None,
        };
        match basic {
            Some(col) => {
                t.basis.push(col);
                t.artificial.push(false);
            }
            None => {
                t.basis.push(n_cols + i);
                t.artificial.push(true);
                for (acc, v) in t.aux.iter_mut().zip(&dense) {
                    if !v.is_zero() {
                        *acc = acc.sub(v)?;
                    }
                }
                t.aux_rhs = t.aux_rhs.sub(&b)?;
            }
        }
        t.rows.push(dense);
        t.rhs.push(b);
    }
    for (j, c) in &lp.objective {
        t.obj[*j] = t.obj[*j].sub(&S::from_rational(c)?)?;
    }
    Some(t)
}

impl<S: Scalar> Tableau<S> {
    fn track(&mut self, run: &mut usize, bland: &mut bool, degenerate: bool, budget: usize) {
        if degenerate {
            *run += 1;
            if *run > DEGENERATE_LIMIT {
                *bland = true;
            }
        } else {
            *run = 0;
            *bland = false;
        }
        assert!(
            self.pivots <= budget,
            "simplex exceeded its pivot budget of {budget}"
        );
    }

    fn entering(&self, phase1: bool, bland: bool) -> Option<usize> {
        let costs = if phase1 { &self.aux } else { &self.obj };
        let mut best: Option<usize> = None;
        for (j, c) in costs.iter().enumerate() {
            if !c.is_negative() {
                continue;
            }
            if bland {
                return Some(j);
            }
            if best.map_or(true, |b| c.cmp_to(&costs[b]) == Ordering::Less) {
                best = Some(j);
            }
        }
        best
    }

    fn step(&mut self, phase1: bool, bland: bool) -> Option<Step> {
        let Some(q) = self.entering(phase1, bland) else {
            return Some(Step::Done);
        };
        let mut leave: Option<(usize, S)> = None;
        for i in 0..self.rows.len() {
            let a = &self.rows[i][q];
            if a.is_zero() {
                continue;
            }
            let ratio = if !phase1 && self.artificial[i] {
                S::zero()
            } else if a.is_positive() {
                self.rhs[i].div(a)?
            } else {
                continue;
            };
            let better = match &leave {
                None => true,
                Some((r, best)) => match ratio.cmp_to(best) {
                    Ordering::Less => true,
                    Ordering::Greater => false,
                    Ordering::Equal => {
                        let (ai, ar) = (self.artificial[i], self.artificial[*r]);
                        (ai && !ar) || (ai == ar && self.basis[i] < self.basis[*r])
                    }
                },
            };
            if better {
                leave = Some((i, ratio));
            }
        }
        let Some((r, ratio)) = leave else {
            return Some(Step::Unbounded);
        };
        self.pivot(r, q)?;
        Some(Step::Moved {
            degenerate: ratio.is_zero(),
        })
    }

    fn pivot(&mut self, r: usize, q: usize) -> Option<()> {
        let mut prow = std::mem::take(&mut self.rows[r]);
        let piv = prow[q].clone();
        let nz: Vec<usize> = (0..self.n_cols).filter(|&j| !prow[j].is_zero()).collect();
        for &j in &nz {
            prow[j] = prow[j].div(&piv)?;
        }
        let prhs = self.rhs[r].div(&piv)?;

        fn eliminate<S: Scalar>(
            row: &mut [S],
            rhs: &mut S,
            prow: &[S],
            prhs: &S,
            nz: &[usize],
            q: usize,
        ) -> Option<()> {
            let f = row[q].clone();
            if f.is_zero() {
                return Some(());
            }
            if f == S::one() {
                for &j in nz {
                    row[j] = row[j].sub(&prow[j])?;
                }
                *rhs = rhs.sub(prhs)?;
            } else if f == S::one().neg() {
                for &j in nz {
                    row[j] = row[j].add(&prow[j])?;
                }
                *rhs = rhs.add(prhs)?;
            } else {
                for &j in nz {
                    row[j] = row[j].sub(&f.mul(&prow[j])?)?;
                }
                *rhs = rhs.sub(&f.mul(prhs)?)?;
            }
            Some(())
        }

        for i in 0..self.rows.len() {
            if i != r {
                let (row, rhs) = (&mut self.rows[i], &mut self.rhs[i]);
                eliminate(row, rhs, &prow, &prhs, &nz, q)?;
            }
        }
        eliminate(&mut self.obj, &mut self.obj_rhs, &prow, &prhs, &nz, q)?;
        eliminate(&mut self.aux, &mut self.aux_rhs, &prow, &prhs, &nz, q)?;
        self.rows[r] = prow;
        self.rhs[r] = prhs;
        self.basis[r] = q;
        self.artificial[r] = false;
        self.pivots += 1;
        Some(())
    }
}
