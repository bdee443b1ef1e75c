//! Feasibility checking and holding-delay normalization of periodic
//! schedules.

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::model::{Instance, PeriodicSolution, ScheduleEntry, Topology};
use crate::rational::{self, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ScheduleViolation {
    Throughput { total: Rational, batch: Rational },
    PeriodOutOfRange { period: i64 },
    NonPositiveAmount { entry: usize },
    Endpoints { entry: usize },
    NotSimple { entry: usize },
    Origin { entry: usize },
    Monotonicity { entry: usize, hop: usize },
    Delivery { entry: usize },
    Bandwidth { link: usize, residue: i64, load: Rational, capacity: Rational },
}

impl fmt::Display for ScheduleViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use ScheduleViolation::*;
        match self {
            Throughput { total, batch } => write!(
                f,
                "entries ship {} per period, batch is {}",
                rational::format(total),
                rational::format(batch)
            ),
            PeriodOutOfRange { period } => write!(f, "period {period} outside the admissible range"),
            NonPositiveAmount { entry } => write!(f, "entry {entry} has a non-positive amount"),
            Endpoints { entry } => write!(f, "entry {entry} does not run sender to receiver"),
            NotSimple { entry } => write!(f, "entry {entry} repeats a node"),
            Origin { entry } => write!(f, "entry {entry} does not start at offset 0"),
            Monotonicity { entry, hop } => {
                write!(f, "entry {entry} pushes hop {hop} before the data arrives")
            }
            Delivery { entry } => write!(f, "entry {entry} delivery offset is not the arrival slot"),
            Bandwidth {
                link,
                residue,
                load,
                capacity,
            } => write!(
                f,
                "link {link} residue {residue} carries {} > {}",
                rational::format(load),
                rational::format(capacity)
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Validation {
    pub ok: bool,
    pub max_delay: i64,
    pub violations: Vec<ScheduleViolation>,
}

fn check_shape(topo: &Topology, idx: usize, e: &ScheduleEntry) -> Result<()> {
    let bad = |why: &str| Err(Error::Structural(format!("entry {idx}: {why}")));
    if e.nodes.len() < 2 {
        return bad("path needs at least two nodes");
    }
    if e.links.len() + 1 != e.nodes.len() || e.offsets.len() != e.nodes.len() + 1 {
        return bad("path, link and offset lengths disagree");
    }
    for (h, &l) in e.links.iter().enumerate() {
        let Some(arc) = topo.arcs.get(l) else {
            return bad("link missing from network");
        };
        if arc.from != e.nodes[h] || arc.to != e.nodes[h + 1] {
            return bad("link does not join consecutive path nodes");
        }
    }
    if e.nodes.iter().any(|&v| v >= topo.node_count) {
        return bad("node missing from network");
    }
    Ok(())
}

/// Aggregated push amount per `(link, residue)`: an entry pushing onto a
/// link at offset `u` contributes to residue `u mod T`.
pub fn residue_loads(
    topo: &Topology,
    sol: &PeriodicSolution,
) -> Result<BTreeMap<(usize, i64), Rational>> {
    let mut loads: BTreeMap<(usize, i64), Rational> = BTreeMap::new();
    for (i, e) in sol.entries.iter().enumerate() {
        check_shape(topo, i, e)?;
        for (h, &l) in e.links.iter().enumerate() {
            let residue = e.push_offset(h).rem_euclid(sol.period);
            *loads.entry((l, residue)).or_insert_with(Rational::zero) += &e.amount;
        }
    }
    Ok(loads)
}

/// Checks throughput, period range, offset monotonicity, path shape and
/// per-residue bandwidth; returns the maximum delay.
pub fn validate_solution(inst: &Instance, sol: &PeriodicSolution) -> Result<Validation> {
    let topo = inst.topology();
    let mut violations = Vec::new();
    if sol.period < 1 {
        return Err(Error::Structural(format!("period {} is not positive", sol.period)));
    }
    let total = sol.total_amount();
    if &total != inst.batch() {
        violations.push(ScheduleViolation::Throughput {
            total,
            batch: inst.batch().clone(),
        });
    }
    if sol.period < inst.min_period() || sol.period > inst.max_period() {
        violations.push(ScheduleViolation::PeriodOutOfRange { period: sol.period });
    }
    for (i, e) in sol.entries.iter().enumerate() {
        check_shape(topo, i, e)?;
        if !e.amount.is_positive() {
            violations.push(ScheduleViolation::NonPositiveAmount { entry: i });
        }
        if e.nodes[0] != inst.sender() || *e.nodes.last().unwrap() != inst.receiver() {
            violations.push(ScheduleViolation::Endpoints { entry: i });
        }
        let mut seen = HashSet::new();
        if !e.nodes.iter().all(|v| seen.insert(*v)) {
            violations.push(ScheduleViolation::NotSimple { entry: i });
        }
        if e.offsets[0] != 0 {
            violations.push(ScheduleViolation::Origin { entry: i });
        }
        for h in 0..e.links.len() {
            if e.holding(topo, h) < 0 {
                violations.push(ScheduleViolation::Monotonicity { entry: i, hop: h });
            }
        }
        let last = e.links.len() - 1;
        let arrival = e.push_offset(last) + topo.arcs[e.links[last]].delay;
        if e.delivery() != arrival {
            violations.push(ScheduleViolation::Delivery { entry: i });
        }
    }
    for ((link, residue), load) in residue_loads(topo, sol)? {
        let capacity = &topo.arcs[link].bandwidth;
        if &load > capacity {
            violations.push(ScheduleViolation::Bandwidth {
                link,
                residue,
                load,
                capacity: capacity.clone(),
            });
        }
    }
    Ok(Validation {
        ok: violations.is_empty(),
        max_delay: sol.max_delay(),
        violations,
    })
}

/// Shifts offsets down by whole periods wherever a node holds data for `T`
/// slots or more. Residues, and therefore link loads, are unchanged; no
/// delivery moves later.
pub fn normalize_holding(topo: &Topology, sol: &PeriodicSolution) -> PeriodicSolution {
    let period = sol.period;
    let entries = sol
        .entries
        .iter()
        .map(|e| {
            let mut e = e.clone();
            for h in 0..e.links.len() {
                let hold = e.holding(topo, h);
                if hold >= period {
                    let shift = (hold / period) * period;
                    for u in &mut e.offsets[h + 1..] {
                        *u -= shift;
                    }
                }
            }
            e
        })
        .collect();
    PeriodicSolution { period, entries }
}

/// Merges entries sharing a path and offset vector, keeping first-seen
/// order.
pub fn merge_duplicates(sol: &PeriodicSolution) -> PeriodicSolution {
    let mut order: Vec<ScheduleEntry> = Vec::new();
    let mut pos: std::collections::HashMap<(Vec<usize>, Vec<i64>), usize> = Default::default();
    for e in &sol.entries {
        match pos.get(&(e.links.clone(), e.offsets.clone())) {
            Some(&i) => order[i].amount += &e.amount,
            None => {
                pos.insert((e.links.clone(), e.offsets.clone()), order.len());
                order.push(e.clone());
            }
        }
    }
    PeriodicSolution {
        period: sol.period,
        entries: order,
    }
}
