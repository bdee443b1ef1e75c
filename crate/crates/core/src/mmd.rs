//! Minimal maximum delay at a fixed period.
//!
//! [`min_max_delay`] follows the classic bisection over `[0, M_U]` with
//! midpoint `ceil((LB + UB) / 2)`. Each probe asks whether the flow program
//! at bound `M` reaches the batch size. By default those answers are
//! memoized: an ascending scan from the shortest sender-receiver delay finds
//! the first feasible bound and decomposes its flow into a schedule, after
//! which every probe is settled by monotonicity (a schedule with maximum
//! delay `m` embeds into the program at any `M >= m`, and infeasibility at
//! `M` implies infeasibility below it). The probe sequence is unchanged and
//! each probe records where its answer came from.

use std::collections::BTreeMap;

use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::expander::{
    build_from_topology, horizon_upper_bound, link_groups, ExpKind, ExpandedNetwork, LinkGroup,
};
use crate::experiments::batch_capacity;
use crate::lp::flow::{build_flow_lp, build_flow_lp_pruned, extract_edge_flow, FlowLp};
use crate::lp::{solve_lp_with, SolveOptions};
use crate::model::{Instance, PeriodicSolution, ScheduleEntry, Topology};
use crate::rational::Rational;
use crate::schedule::{merge_duplicates, normalize_holding, validate_solution};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ProbeSource {
    /// A flow program was solved at this bound.
    Lp,
    /// A schedule with maximum delay at most this bound was already known.
    Witness,
    /// This bound is at or below one already shown infeasible, below the
    /// shortest sender-receiver delay, or the period exceeds static
    /// capacity.
    KnownInfeasible,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Probe {
    pub bound: i64,
    pub feasible: bool,
    pub source: ProbeSource,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MmdResult {
    pub period: i64,
    pub max_delay: i64,
    pub solution: PeriodicSolution,
    /// Bisection probes in the order they were made.
    pub probes: Vec<Probe>,
    /// Flow programs solved, including the warm-up scan.
    pub lp_solves: usize,
}

#[derive(Debug, Clone)]
pub struct MmdOptions {
    /// Replaces the default horizon `|V| * (d_max + D / R_l)`.
    pub horizon: Option<i64>,
    /// Solve a flow program at every bisection probe instead of answering
    /// from the memo.
    pub lp_every_probe: bool,
    /// Drop expanded links no bounded path can use before solving.
    pub prune: bool,
}

impl Default for MmdOptions {
    fn default() -> Self {
        MmdOptions {
            horizon: None,
            lp_every_probe: false,
            prune: true,
        }
    }
}

impl MmdOptions {
    /// Every probe solved by its own unpruned program.
    pub fn plain() -> Self {
        MmdOptions {
            horizon: None,
            lp_every_probe: true,
            prune: false,
        }
    }
}

/// Everything shared by the periods of one instance: the expanded network
/// at the horizon, plus a few per-instance bounds.
#[derive(Debug, Clone)]
pub struct MmdContext<'a> {
    inst: &'a Instance,
    exp: ExpandedNetwork,
    shortest: Option<i64>,
    capacity: Rational,
}

/// Outcome of one feasibility probe solved by a flow program.
#[derive(Debug, Clone)]
pub struct LpProbe {
    pub value: Rational,
    pub feasible: bool,
    /// Decomposed schedule carrying exactly the batch, when feasible.
    pub schedule: Option<PeriodicSolution>,
}

impl<'a> MmdContext<'a> {
    pub fn new(inst: &'a Instance, horizon: Option<i64>) -> Result<Self> {
        let horizon = horizon.unwrap_or_else(|| horizon_upper_bound(inst));
        let exp = build_from_topology(inst.topology(), horizon)?;
        let shortest = inst.topology().delays_from(inst.sender())[inst.receiver()];
        let capacity = batch_capacity(inst.network(), inst.sender_name(), inst.receiver_name())?;
        Ok(MmdContext {
            inst,
            exp,
            shortest,
            capacity,
        })
    }

    pub fn instance(&self) -> &Instance {
        self.inst
    }

    pub fn expanded(&self) -> &ExpandedNetwork {
        &self.exp
    }

    pub fn horizon(&self) -> i64 {
        self.exp.horizon
    }

    pub fn groups(&self, period: i64) -> Vec<LinkGroup> {
        link_groups(&self.exp, self.inst.topology(), period)
    }

    pub fn flow_lp(&self, groups: &[LinkGroup], bound: i64, prune: bool) -> Result<FlowLp> {
        if prune {
            build_flow_lp_pruned(&self.exp, groups, self.inst, bound)
        } else {
            build_flow_lp(&self.exp, groups, self.inst, bound)
        }
    }

    /// Solves the program at `(period, bound)` and, when it reaches the
    /// batch size, decomposes a flow scaled to exactly the batch.
    pub fn probe_lp(
        &self,
        period: i64,
        groups: &[LinkGroup],
        bound: i64,
        prune: bool,
        early_stop: bool,
    ) -> Result<LpProbe> {
        let flp = self.flow_lp(groups, bound, prune)?;
        let batch = self.inst.batch();
        let opts = SolveOptions {
            target: early_stop.then(|| batch.clone()),
        };
        let sol = solve_lp_with(&flp.lp, &opts);
        if !sol.is_feasible() {
            return Err(Error::Structural(format!(
                "flow program at bound {bound} reported {:?}",
                sol.status
            )));
        }
        let value = sol.objective_value.clone();
        if &value < batch {
            return Ok(LpProbe {
                value,
                feasible: false,
                schedule: None,
            });
        }
        let scale = batch / &value;
        let flow: Vec<Rational> = extract_edge_flow(&self.exp, &flp, &sol)
            .into_iter()
            .map(|f| f * &scale)
            .collect();
        let schedule = decompose(&self.exp, &flow, self.inst, period, bound)?;
        let check = validate_solution(self.inst, &schedule)?;
        if !check.ok || check.max_delay > bound {
            return Err(Error::Structural(format!(
                "decomposition at bound {bound} is not a valid schedule: {:?}",
                check.violations
            )));
        }
        Ok(LpProbe {
            value,
            feasible: true,
            schedule: Some(schedule),
        })
    }

    /// Bisection at one period; `Ok(None)` when no bound up to the horizon
    /// carries the batch.
    pub fn min_max_delay(&self, period: i64, opts: &MmdOptions) -> Result<Option<MmdResult>> {
        self.check_period(period)?;
        let groups = self.groups(period);
        let mut lp_solves = 0;
        // largest bound known infeasible, smallest known witness
        let mut dead = -1i64;
        let mut witness: Option<PeriodicSolution> = None;

        if !opts.lp_every_probe {
            let rate = self.inst.throughput(period);
            let reachable = self.shortest.filter(|_| rate <= self.capacity);
            match reachable {
                None => dead = self.horizon(),
                Some(first) => {
                    dead = first.min(self.horizon() + 1) - 1;
                    for bound in first..=self.horizon() {
                        lp_solves += 1;
                        let p = self.probe_lp(period, &groups, bound, opts.prune, true)?;
                        if p.feasible {
                            witness = p.schedule;
                            break;
                        }
                        dead = bound;
                    }
                }
            }
        }

        let (mut lb, mut ub) = (0i64, self.horizon());
        let mut probes = Vec::new();
        let mut best: Option<(i64, PeriodicSolution)> = None;
        while lb <= ub {
            let mid = lb + (ub - lb + 1) / 2;
            let (feasible, source, schedule) = match &witness {
                Some(w) if !opts.lp_every_probe && w.max_delay() <= mid => {
                    (true, ProbeSource::Witness, Some(w.clone()))
                }
                _ if !opts.lp_every_probe && mid <= dead => (false, ProbeSource::KnownInfeasible, None),
                _ => {
                    lp_solves += 1;
                    let p = self.probe_lp(period, &groups, mid, opts.prune, true)?;
                    (p.feasible, ProbeSource::Lp, p.schedule)
                }
            };
            probes.push(Probe {
                bound: mid,
                feasible,
                source,
            });
            if feasible {
                best = schedule.map(|s| (mid, s));
                ub = mid - 1;
            } else {
                lb = mid + 1;
            }
        }
        let Some((answer, solution)) = best else {
            return Ok(None);
        };
        let max_delay = solution.max_delay();
        if max_delay != answer {
            return Err(Error::Structural(format!(
                "bisection settled on {answer} but the schedule reaches {max_delay}"
            )));
        }
        Ok(Some(MmdResult {
            period,
            max_delay,
            solution,
            probes,
            lp_solves,
        }))
    }

    /// Ascending scan `M = 0, 1, 2, ...` solving every program to
    /// optimality, for cross-checking the bisection.
    pub fn oracle(&self, period: i64, prune: bool) -> Result<Option<MmdResult>> {
        self.check_period(period)?;
        let groups = self.groups(period);
        let mut probes = Vec::new();
        for bound in 0..=self.horizon() {
            let p = self.probe_lp(period, &groups, bound, prune, false)?;
            probes.push(Probe {
                bound,
                feasible: p.feasible,
                source: ProbeSource::Lp,
            });
            if let Some(solution) = p.schedule {
                return Ok(Some(MmdResult {
                    period,
                    max_delay: solution.max_delay(),
                    solution,
                    lp_solves: probes.len(),
                    probes,
                }));
            }
        }
        Ok(None)
    }

    fn check_period(&self, period: i64) -> Result<()> {
        if period < 1 {
            return Err(Error::InvalidParameter(format!("period {period} must be positive")));
        }
        Ok(())
    }
}

pub fn min_max_delay(inst: &Instance, period: i64) -> Result<Option<MmdResult>> {
    min_max_delay_with(inst, period, &MmdOptions::default())
}

pub fn min_max_delay_with(
    inst: &Instance,
    period: i64,
    opts: &MmdOptions,
) -> Result<Option<MmdResult>> {
    MmdContext::new(inst, opts.horizon)?.min_max_delay(period, opts)
}

pub fn min_max_delay_oracle(inst: &Instance, period: i64) -> Result<Option<MmdResult>> {
    MmdContext::new(inst, None)?.oracle(period, false)
}

fn flow_error(what: String) -> Error {
    Error::Structural(format!("not a conserving flow: {what}"))
}

/// Peels an `(s, 0) -> (r, bound)` flow into schedule entries.
///
/// Repeatedly takes the positive link with the least flow, extends it to a
/// full source-sink path along positive links, and subtracts the link's
/// flow. Each expanded path collapses to a physical path whose push offsets
/// are the transit layers; a path that revisits a node instead holds at the
/// first visit, which keeps every load on its residue. The result is
/// normalized so holding stays below the period, and duplicate entries are
/// merged.
pub fn decompose(
    exp: &ExpandedNetwork,
    edge_flow: &[Rational],
    inst: &Instance,
    period: i64,
    bound: i64,
) -> Result<PeriodicSolution> {
    if edge_flow.len() != exp.links.len() {
        return Err(flow_error(format!(
            "{} values for {} expanded links",
            edge_flow.len(),
            exp.links.len()
        )));
    }
    if bound < 0 || bound > exp.horizon {
        return Err(Error::InvalidParameter(format!("bound {bound} outside the horizon")));
    }
    let source = exp.node_id(inst.sender(), 0);
    let sink = exp.node_id(inst.receiver(), bound);
    for (k, f) in edge_flow.iter().enumerate() {
        if f.is_negative() {
            return Err(flow_error(format!("link {k} carries a negative amount")));
        }
        if !f.is_zero() && exp.links[k].head_layer > bound {
            return Err(flow_error(format!("link {k} ends past the bound")));
        }
    }
    for id in 0..exp.node_count() {
        if id == source || id == sink {
            continue;
        }
        let inflow: Rational = exp.in_links(id).iter().map(|&k| &edge_flow[k]).sum();
        let outflow: Rational = exp.out_links(id).iter().map(|&k| &edge_flow[k]).sum();
        if inflow != outflow {
            let (v, layer) = exp.node_of(id);
            return Err(flow_error(format!("node {v} at layer {layer} does not balance")));
        }
    }

    let topo = inst.topology();
    let mut flow = edge_flow.to_vec();
    let mut support: Vec<usize> = (0..flow.len()).filter(|&k| flow[k].is_positive()).collect();
    let mut entries = Vec::new();
    while !support.is_empty() {
        let mut pick = support[0];
        for &k in &support[1..] {
            if flow[k] < flow[pick] {
                pick = k;
            }
        }
        let mut path = vec![pick];
        let mut at = exp.links[pick].tail;
        while at != source {
            let prev = exp
                .in_links(at)
                .iter()
                .copied()
                .find(|&k| flow[k].is_positive())
                .ok_or_else(|| flow_error("dangling flow".into()))?;
            path.push(prev);
            at = exp.links[prev].tail;
        }
        path.reverse();
        let mut at = exp.links[pick].head;
        while at != sink {
            let next = exp
                .out_links(at)
                .iter()
                .copied()
                .find(|&k| flow[k].is_positive())
                .ok_or_else(|| flow_error("dangling flow".into()))?;
            path.push(next);
            at = exp.links[next].head;
        }
        let amount = path
            .iter()
            .map(|&k| &flow[k])
            .min()
            .cloned()
            .expect("path is never empty");
        for &k in &path {
            flow[k] -= &amount;
        }
        entries.push(collapse(exp, topo, inst.sender(), &path, amount));
        support.retain(|&k| flow[k].is_positive());
    }
    let raw = PeriodicSolution { period, entries };
    Ok(merge_duplicates(&normalize_holding(topo, &raw)))
}

fn collapse(
    exp: &ExpandedNetwork,
    topo: &Topology,
    sender: usize,
    path: &[usize],
    amount: Rational,
) -> ScheduleEntry {
    let mut nodes = vec![sender];
    let mut links = Vec::new();
    let mut pushes = Vec::new();
    for &k in path {
        if let ExpKind::Transit { link, offset } = exp.links[k].kind {
            links.push(link);
            pushes.push(offset);
            nodes.push(topo.arcs[link].to);
        }
    }
    // cut loops: hold at the first visit and leave on the last departure
    while let Some((i, j)) = first_repeat(&nodes) {
        nodes.drain(i + 1..=j);
        links.drain(i..j);
        pushes.drain(i..j);
    }
    let last = *links.last().expect("sender differs from receiver");
    let delivery = pushes.last().unwrap() + topo.arcs[last].delay;
    let mut offsets = Vec::with_capacity(pushes.len() + 2);
    offsets.push(0);
    offsets.extend(pushes);
    offsets.push(delivery);
    ScheduleEntry {
        nodes,
        links,
        offsets,
        amount,
    }
}

fn first_repeat(nodes: &[usize]) -> Option<(usize, usize)> {
    let mut seen = BTreeMap::new();
    for (j, v) in nodes.iter().enumerate() {
        if let Some(&i) = seen.get(v) {
            return Some((i, j));
        }
        seen.insert(*v, j);
    }
    None
}

/// Maps a schedule back onto the expanded network: each entry holds at a
/// node until its push slot, rides the transit copy at that slot, and
/// finally holds at the receiver up to `bound`.
pub fn embed_schedule(
    exp: &ExpandedNetwork,
    topo: &Topology,
    sol: &PeriodicSolution,
    bound: i64,
) -> Result<Vec<Rational>> {
    let mut flow = vec![Rational::zero(); exp.links.len()];
    let missing = |what: String| Error::Structural(format!("schedule leaves the expanded network: {what}"));
    let hold = |flow: &mut Vec<Rational>, v: usize, from: i64, to: i64, amount: &Rational| {
        for layer in from..to {
            let k = exp
                .holding_index(v, layer)
                .ok_or_else(|| missing(format!("holding at node {v} layer {layer}")))?;
            flow[k] += amount;
        }
        Ok::<(), Error>(())
    };
    for e in &sol.entries {
        if e.delivery() > bound {
            return Err(Error::InvalidParameter(format!(
                "entry delivers at {} past bound {bound}",
                e.delivery()
            )));
        }
        for (h, &link) in e.links.iter().enumerate() {
            let arrival = if h == 0 {
                e.offsets[0]
            } else {
                e.offsets[h] + topo.arcs[e.links[h - 1]].delay
            };
            let push = e.push_offset(h);
            hold(&mut flow, e.nodes[h], arrival, push, &e.amount)?;
            let k = exp
                .transit_index(topo, link, push)
                .ok_or_else(|| missing(format!("link {link} at offset {push}")))?;
            flow[k] += &e.amount;
        }
        hold(&mut flow, *e.nodes.last().unwrap(), e.delivery(), bound, &e.amount)?;
    }
    Ok(flow)
}

/// Variable assignment of `flp` matching an expanded flow, or `None` when
/// the flow uses a link the program has no variable for.
pub fn flow_to_assignment(flp: &FlowLp, flow: &[Rational]) -> Option<Vec<Rational>> {
    let mut used = vec![false; flow.len()];
    let values = flp
        .var_link
        .iter()
        .map(|&k| {
            used[k] = true;
            flow[k].clone()
        })
        .collect();
    flow.iter()
        .zip(&used)
        .all(|(f, &u)| u || f.is_zero())
        .then_some(values)
}

/// Human-readable probe trail, one `M=.. feasible|infeasible (source)` line
/// per probe.
pub fn format_probes(probes: &[Probe]) -> String {
    probes
        .iter()
        .map(|p| {
            format!(
                "M={} {} ({:?})\n",
                p.bound,
                if p.feasible { "feasible" } else { "infeasible" },
                p.source
            )
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::lp::solve_lp;
    use crate::rational::int;

    fn ctx(inst: &Instance) -> MmdContext<'_> {
        MmdContext::new(inst, None).unwrap()
    }

    #[test]
    fn pair_delays() {
        let inst = fixtures::pair();
        let c = ctx(&inst);
        for (t, m) in [(7, 11), (8, 11), (9, 11), (10, 10)] {
            let res = c.min_max_delay(t, &MmdOptions::default()).unwrap().unwrap();
            assert_eq!(res.max_delay, m, "T={t}");
            assert!(validate_solution(&inst, &res.solution).unwrap().ok);
        }
        assert_eq!(c.oracle(10, false).unwrap().unwrap().max_delay, 10);
    }

    #[test]
    fn triple_delays() {
        let inst = fixtures::triple();
        let c = ctx(&inst);
        for (t, m) in [(2, 7), (3, 7), (4, 6), (5, 5)] {
            let res = c.min_max_delay(t, &MmdOptions::plain()).unwrap().unwrap();
            assert_eq!(res.max_delay, m, "T={t}");
            assert!(res.probes.iter().all(|p| p.source == ProbeSource::Lp));
        }
        assert_eq!(c.oracle(5, true).unwrap().unwrap().max_delay, 5);
    }

    #[test]
    fn probe_sequence_is_bisection() {
        let inst = fixtures::pair();
        let c = ctx(&inst);
        let memo = c.min_max_delay(7, &MmdOptions::default()).unwrap().unwrap();
        let plain = c.min_max_delay(7, &MmdOptions::plain()).unwrap().unwrap();
        let bounds = |r: &MmdResult| r.probes.iter().map(|p| (p.bound, p.feasible)).collect::<Vec<_>>();
        assert_eq!(bounds(&memo), bounds(&plain));
        let seq: Vec<i64> = memo.probes.iter().map(|p| p.bound).collect();
        assert_eq!(seq, vec![21, 10, 16, 13, 12, 11]);
        assert!(memo.probes.iter().all(|p| p.source != ProbeSource::Lp));
    }

    #[test]
    fn single_link_is_immediate() {
        let inst = Instance::new(
            fixtures::single_link(1, int(6)),
            "s",
            "r",
            int(6),
            int(2),
            int(6),
        )
        .unwrap();
        let c = ctx(&inst);
        for t in 1..=3 {
            assert_eq!(c.min_max_delay(t, &MmdOptions::default()).unwrap().unwrap().max_delay, 1);
        }
    }

    #[test]
    fn unsupportable_period_is_none() {
        // 1 unit per slot cannot carry 5 in a single slot
        let inst = Instance::new(
            fixtures::single_link(2, int(1)),
            "s",
            "r",
            int(5),
            int(1),
            int(5),
        )
        .unwrap();
        let c = ctx(&inst);
        assert!(c.min_max_delay(1, &MmdOptions::default()).unwrap().is_none());
        assert!(c.min_max_delay(1, &MmdOptions::plain()).unwrap().is_none());
        assert_eq!(c.min_max_delay(5, &MmdOptions::default()).unwrap().unwrap().max_delay, 6);
    }

    #[test]
    fn zero_flow_decomposes_to_nothing() {
        let inst = fixtures::triple();
        let c = ctx(&inst);
        let flow = vec![Rational::zero(); c.expanded().links.len()];
        let sol = decompose(c.expanded(), &flow, &inst, 5, 5).unwrap();
        assert!(sol.entries.is_empty());
    }

    #[test]
    fn triple_stream_on_e1() {
        let inst = fixtures::triple();
        let c = ctx(&inst);
        let exp = c.expanded();
        let topo = inst.topology();
        let mut flow = vec![Rational::zero(); exp.links.len()];
        for i in 0..5 {
            flow[exp.transit_index(topo, 0, i).unwrap()] = int(1);
            for layer in 0..i {
                flow[exp.holding_index(inst.sender(), layer).unwrap()] += int(1);
            }
            for layer in i + 1..5 {
                flow[exp.holding_index(inst.receiver(), layer).unwrap()] += int(1);
            }
        }
        let sol = decompose(exp, &flow, &inst, 5, 5).unwrap();
        assert_eq!(sol.entries.len(), 5);
        for (i, e) in sol.entries.iter().enumerate() {
            let i = i as i64;
            assert_eq!(e.offsets, vec![0, i, i + 1]);
            assert_eq!(e.amount, int(1));
        }
        assert!(validate_solution(&inst, &sol).unwrap().ok);
        assert_eq!(embed_schedule(exp, topo, &sol, 5).unwrap(), flow);
    }

    #[test]
    fn non_conserving_flow_is_rejected() {
        let inst = fixtures::triple();
        let c = ctx(&inst);
        let exp = c.expanded();
        let mut flow = vec![Rational::zero(); exp.links.len()];
        flow[exp.transit_index(inst.topology(), 0, 2).unwrap()] = int(1);
        assert!(matches!(
            decompose(exp, &flow, &inst, 5, 5),
            Err(Error::Structural(_))
        ));
    }

    #[test]
    fn revisits_become_holding() {
        // s -> a -> s -> r collapses to holding at s
        let net = crate::model::Network::new(
            vec!["s".into(), "a".into(), "r".into()],
            vec![
                crate::Link::new("sa", "s", "a", 1, int(1)),
                crate::Link::new("as", "a", "s", 1, int(1)),
                crate::Link::new("sr", "s", "r", 1, int(1)),
            ],
        );
        let inst = Instance::new(net, "s", "r", int(1), int(1), int(1)).unwrap();
        let topo = inst.topology().clone();
        let exp = build_from_topology(&topo, 6).unwrap();
        let mut flow = vec![Rational::zero(); exp.links.len()];
        flow[exp.transit_index(&topo, 0, 0).unwrap()] = int(1);
        flow[exp.transit_index(&topo, 1, 1).unwrap()] = int(1);
        flow[exp.transit_index(&topo, 2, 2).unwrap()] = int(1);
        let sol = decompose(&exp, &flow, &inst, 3, 3).unwrap();
        assert_eq!(sol.entries.len(), 1);
        assert_eq!(sol.entries[0].nodes, vec![0, 2]);
        assert_eq!(sol.entries[0].offsets, vec![0, 2, 3]);
        // holding of two slots at period 1 normalizes away
        let sol = decompose(&exp, &flow, &inst, 1, 3).unwrap();
        assert_eq!(sol.entries[0].offsets, vec![0, 0, 1]);
    }

    #[test]
    fn embedded_schedule_satisfies_the_program() {
        let inst = fixtures::pair();
        let c = ctx(&inst);
        let res = c.min_max_delay(7, &MmdOptions::default()).unwrap().unwrap();
        let groups = c.groups(7);
        for prune in [false, true] {
            let flp = c.flow_lp(&groups, 11, prune).unwrap();
            let flow = embed_schedule(c.expanded(), inst.topology(), &res.solution, 11).unwrap();
            let values = flow_to_assignment(&flp, &flow).unwrap();
            flp.lp.check_assignment(&values).unwrap();
            assert_eq!(flp.lp.objective_value(&values), int(10));
            assert!(solve_lp(&flp.lp).objective_value >= int(10));
        }
    }

    #[test]
    fn probe_trail_formats() {
        let probes = [Probe {
            bound: 3,
            feasible: false,
            source: ProbeSource::Lp,
        }];
        assert_eq!(format_probes(&probes), "M=3 infeasible (Lp)\n");
    }
}
