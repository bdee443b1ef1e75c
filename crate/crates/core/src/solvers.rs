//! Optimal peak/average AoI and min-max-delay over the admissible periods,
//! the unit-period min-max-delay flow, and the approximation framework
//! built on it.

use std::collections::BTreeMap;

use num_traits::{One, Signed};

use crate::error::{Error, Result};
use crate::mmd::{MmdContext, MmdOptions, MmdResult};
use crate::model::{feasible_periods, AoiReport, Instance, Network, PeriodicSolution, ScheduleEntry};
use crate::par::{self, Parallelism};
use crate::rational::{self, int, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Objective {
    PeakAoi,
    AvgAoi,
    MaxDelay,
}

impl Objective {
    pub fn score(self, r: &AoiReport) -> Rational {
        match self {
            Objective::PeakAoi => int(r.peak_aoi),
            Objective::AvgAoi => r.avg_aoi.clone(),
            Objective::MaxDelay => int(r.max_delay),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Objective::PeakAoi => "peak AoI",
            Objective::AvgAoi => "average AoI",
            Objective::MaxDelay => "maximum delay",
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct SolverConfig {
    pub mmd: MmdOptions,
    pub parallelism: Parallelism,
}

/// One admissible period; `report` is `None` when the throughput cannot be
/// carried at all.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridRow {
    pub period: i64,
    pub throughput: Rational,
    pub report: Option<AoiReport>,
}

/// Min-max-delay results for every admissible period, ascending by period.
#[derive(Debug, Clone)]
pub struct PeriodGrid {
    pub rows: Vec<GridRow>,
    pub results: Vec<Option<MmdResult>>,
}

#[derive(Debug, Clone)]
pub struct SolveOutcome {
    pub objective: Objective,
    pub best: AoiReport,
    pub solution: PeriodicSolution,
    pub grid: Vec<GridRow>,
    /// Every throughput attaining the optimum, ascending.
    pub optimal_throughputs: Vec<Rational>,
}

/// Runs the bisection at every admissible period, in parallel unless told
/// otherwise. Assembly is ordered by period regardless of scheduling.
pub fn solve_grid(inst: &Instance, config: &SolverConfig) -> Result<PeriodGrid> {
    let ctx = MmdContext::new(inst, config.mmd.horizon)?;
    let periods = feasible_periods(inst);
    let results = par::map(&periods, config.parallelism, |&t| {
        ctx.min_max_delay(t, &config.mmd)
    });
    let mut rows = Vec::with_capacity(periods.len());
    let mut kept = Vec::with_capacity(periods.len());
    for (&t, res) in periods.iter().zip(results) {
        let res = res?;
        rows.push(GridRow {
            period: t,
            throughput: inst.throughput(t),
            report: res
                .as_ref()
                .map(|r| AoiReport::new(inst.batch(), t, r.max_delay)),
        });
        kept.push(res);
    }
    Ok(PeriodGrid {
        rows,
        results: kept,
    })
}

impl PeriodGrid {
    /// Picks the optimum under `objective`. Ties list every optimal
    /// throughput; the returned schedule belongs to the largest one.
    pub fn select(&self, objective: Objective) -> Result<SolveOutcome> {
        let mut best: Option<(Rational, usize)> = None;
        for (i, row) in self.rows.iter().enumerate() {
            if let Some(rep) = &row.report {
                let score = objective.score(rep);
                if best.as_ref().map_or(true, |(b, _)| &score < b) {
                    best = Some((score, i));
                }
            }
        }
        let (score, first) =
            best.ok_or_else(|| Error::Infeasible("infeasible at every period".into()))?;
        let mut optimal_throughputs: Vec<Rational> = self
            .rows
            .iter()
            .filter(|r| r.report.as_ref().is_some_and(|rep| objective.score(rep) == score))
            .map(|r| r.throughput.clone())
            .collect();
        optimal_throughputs.sort();
        // rows ascend by period, so the first optimum has the largest throughput
        Ok(SolveOutcome {
            objective,
            best: self.rows[first].report.clone().expect("feasible row"),
            solution: self.results[first].as_ref().expect("feasible row").solution.clone(),
            grid: self.rows.clone(),
            optimal_throughputs,
        })
    }
}

pub fn solve_optimal(inst: &Instance, objective: Objective) -> Result<SolveOutcome> {
    solve_grid(inst, &SolverConfig::default())?.select(objective)
}

pub fn solve_mmd_problem(inst: &Instance) -> Result<SolveOutcome> {
    solve_optimal(inst, Objective::MaxDelay)
}

/// A steady per-slot path flow.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathFlow {
    pub nodes: Vec<usize>,
    pub links: Vec<usize>,
    pub rate: Rational,
    pub delay: i64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mmd1Flow {
    pub rate: Rational,
    pub paths: Vec<PathFlow>,
    /// Delay of the slowest path carrying positive rate.
    pub max_delay: i64,
}

/// Unit-period min-max-delay flow solver with a declared guarantee `alpha`:
/// its maximum path delay is at most `alpha` times the optimum.
pub trait Mmd1Backend: Sync {
    fn alpha(&self) -> Rational;
    fn solve(&self, net: &Network, sender: &str, receiver: &str, rate: &Rational) -> Result<Mmd1Flow>;
}

/// The bisection specialized to a period of one slot, which is exact.
#[derive(Debug, Clone, Default)]
pub struct ExactMmd1 {
    pub horizon: Option<i64>,
}

impl Mmd1Backend for ExactMmd1 {
    fn alpha(&self) -> Rational {
        Rational::one()
    }

    fn solve(&self, net: &Network, sender: &str, receiver: &str, rate: &Rational) -> Result<Mmd1Flow> {
        mmd1_exact_with(net, sender, receiver, rate, self.horizon)
    }
}

pub fn mmd1_exact(net: &Network, sender: &str, receiver: &str, rate: &Rational) -> Result<Mmd1Flow> {
    mmd1_exact_with(net, sender, receiver, rate, None)
}

/// With one slot per period no data can usefully wait, so every entry of
/// the normalized schedule is a path pushed hop after hop.
pub fn mmd1_exact_with(
    net: &Network,
    sender: &str,
    receiver: &str,
    rate: &Rational,
    horizon: Option<i64>,
) -> Result<Mmd1Flow> {
    if !rate.is_positive() {
        return Err(Error::InvalidParameter("rate must be positive".into()));
    }
    let inst = Instance::new(
        net.clone(),
        sender,
        receiver,
        rate.clone(),
        rate.clone(),
        rate.clone(),
    )?;
    let topo = inst.topology();
    let horizon = horizon.unwrap_or(topo.node_count as i64 * (topo.max_delay() + 1));
    let ctx = MmdContext::new(&inst, Some(horizon))?;
    let res = ctx
        .min_max_delay(1, &MmdOptions::default())?
        .ok_or_else(|| {
            Error::Infeasible(format!(
                "rate {} is not sustainable within delay {horizon}",
                rational::format(rate)
            ))
        })?;
    let mut by_path: BTreeMap<Vec<usize>, PathFlow> = BTreeMap::new();
    for e in &res.solution.entries {
        let delay: i64 = e.links.iter().map(|&l| topo.arcs[l].delay).sum();
        by_path
            .entry(e.links.clone())
            .and_modify(|p| p.rate += &e.amount)
            .or_insert_with(|| PathFlow {
                nodes: e.nodes.clone(),
                links: e.links.clone(),
                rate: e.amount.clone(),
                delay,
            });
    }
    let paths: Vec<PathFlow> = by_path.into_values().collect();
    let max_delay = paths.iter().map(|p| p.delay).max().unwrap_or(0);
    Ok(Mmd1Flow {
        rate: rate.clone(),
        paths,
        max_delay,
    })
}

/// Replays a per-slot flow with period `T`: path `p` gets one entry per
/// sender offset `j` in `0..T`, each pushing `x_p` and then forwarding
/// without holding. Every residue of every link then carries the per-slot
/// rate, and the maximum delay is `M_hat + T - 1`.
pub fn lift(flow: &Mmd1Flow, net_delays: &[i64], period: i64) -> PeriodicSolution {
    let mut entries = Vec::new();
    for p in &flow.paths {
        for j in 0..period {
            let mut offsets = vec![0];
            let mut at = j;
            for &l in &p.links {
                offsets.push(at);
                at += net_delays[l];
            }
            offsets.push(at);
            entries.push(ScheduleEntry {
                nodes: p.nodes.clone(),
                links: p.links.clone(),
                offsets,
                amount: p.rate.clone(),
            });
        }
    }
    PeriodicSolution { period, entries }
}

#[derive(Debug, Clone)]
pub struct ApproxOutcome {
    pub solution: PeriodicSolution,
    pub report: AoiReport,
    pub alpha: Rational,
    pub ratio_bound: Rational,
    pub mmd1: Mmd1Flow,
}

/// `c` of the approximation bound: `2 R_u / R_l` for peak AoI and
/// `3 R_u / R_l` for average AoI.
pub fn ratio_constant(inst: &Instance, objective: Objective) -> Result<Rational> {
    let spread = inst.r_max() / inst.r_min();
    match objective {
        Objective::PeakAoi => Ok(int(2) * spread),
        Objective::AvgAoi => Ok(int(3) * spread),
        Objective::MaxDelay => Err(Error::InvalidParameter(
            "the approximation framework targets peak or average AoI".into(),
        )),
    }
}

/// Solves the unit-period flow at `R_l` with the exact backend and lifts
/// it to period `D / R_l`; `backend_alpha` is the guarantee reported with
/// the result.
pub fn approx_solve(inst: &Instance, objective: Objective, backend_alpha: &Rational) -> Result<ApproxOutcome> {
    approx_solve_declared(inst, objective, &ExactMmd1::default(), backend_alpha)
}

/// Like [`approx_solve_with`] but reports `alpha` instead of the backend's
/// own guarantee.
pub fn approx_solve_declared(
    inst: &Instance,
    objective: Objective,
    backend: &dyn Mmd1Backend,
    alpha: &Rational,
) -> Result<ApproxOutcome> {
    if alpha < &Rational::one() {
        return Err(Error::InvalidParameter("alpha must be at least 1".into()));
    }
    let mut out = approx_solve_with(inst, objective, backend)?;
    out.ratio_bound = alpha + ratio_constant(inst, objective)?;
    out.alpha = alpha.clone();
    Ok(out)
}

pub fn approx_solve_with(
    inst: &Instance,
    objective: Objective,
    backend: &dyn Mmd1Backend,
) -> Result<ApproxOutcome> {
    let c = ratio_constant(inst, objective)?;
    let period = inst.max_period();
    approx_at(inst, period, backend).map(|(solution, report, mmd1)| ApproxOutcome {
        solution,
        report,
        alpha: backend.alpha(),
        ratio_bound: backend.alpha() + c,
        mmd1,
    })
}

/// The framework's schedule at an arbitrary admissible period.
pub fn approx_at(
    inst: &Instance,
    period: i64,
    backend: &dyn Mmd1Backend,
) -> Result<(PeriodicSolution, AoiReport, Mmd1Flow)> {
    let rate = inst.throughput(period);
    let mmd1 = backend.solve(inst.network(), inst.sender_name(), inst.receiver_name(), &rate)?;
    let delays: Vec<i64> = inst.topology().arcs.iter().map(|a| a.delay).collect();
    let solution = lift(&mmd1, &delays, period);
    let report = AoiReport::new(inst.batch(), period, mmd1.max_delay + period - 1);
    Ok((solution, report, mmd1))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundCheck {
    pub name: &'static str,
    pub holds: bool,
    pub detail: String,
}

/// Evaluates the throughput orderings and AoI gap bounds between the
/// peak-optimal, average-optimal and delay-optimal throughput sets of one
/// instance. All three outcomes must come from the same grid.
pub fn check_gap_bounds(
    inst: &Instance,
    mpa: &SolveOutcome,
    maa: &SolveOutcome,
    mmd: &SolveOutcome,
) -> Vec<BoundCheck> {
    let report = |r: &Rational| -> AoiReport {
        mpa.grid
            .iter()
            .find(|row| &row.throughput == r)
            .and_then(|row| row.report.clone())
            .expect("optimal throughput has a report")
    };
    let (rp, ra, rm) = (&mpa.optimal_throughputs, &maa.optimal_throughputs, &mmd.optimal_throughputs);
    let min = |v: &Vec<Rational>| v.iter().min().cloned().unwrap();
    let max = |v: &Vec<Rational>| v.iter().max().cloned().unwrap();
    let span = int(inst.max_period() - inst.min_period());
    let half = &span / int(2);

    let mut out = Vec::new();
    let mut push = |name: &'static str, holds: bool, detail: String| {
        out.push(BoundCheck { name, holds, detail })
    };
    let fmt = rational::format;
    push(
        "min R_p >= max R_m",
        min(rp) >= max(rm),
        format!("{} vs {}", fmt(&min(rp)), fmt(&max(rm))),
    );
    push(
        "min R_a >= max R_m",
        min(ra) >= max(rm),
        format!("{} vs {}", fmt(&min(ra)), fmt(&max(rm))),
    );
    push(
        "min R_p >= max R_a",
        min(rp) >= max(ra),
        format!("{} vs {}", fmt(&min(rp)), fmt(&max(ra))),
    );
    let m_rp = rp.iter().map(|r| report(r).max_delay).min().unwrap();
    let m_ra = ra.iter().map(|r| report(r).max_delay).max().unwrap();
    push("min M(R_p) >= max M(R_a)", m_rp >= m_ra, format!("{m_rp} vs {m_ra}"));

    let worst = |from: &Vec<Rational>, to: &Vec<Rational>, f: &dyn Fn(&AoiReport) -> Rational| {
        let mut gap: Option<Rational> = None;
        for a in from {
            for b in to {
                let g = f(&report(a)) - f(&report(b));
                if gap.as_ref().map_or(true, |w| &g > w) {
                    gap = Some(g);
                }
            }
        }
        gap.unwrap()
    };
    let peak = |r: &AoiReport| int(r.peak_aoi);
    let avg = |r: &AoiReport| r.avg_aoi.clone();
    let g = worst(rm, rp, &peak);
    let p1 = (g <= span, format!("{} <= {}", fmt(&g), fmt(&span)));
    let g = worst(rm, ra, &avg);
    let p2 = (g <= half, format!("{} <= {}", fmt(&g), fmt(&half)));
    let g = worst(rp, ra, &avg);
    let p3 = (g <= half, format!("{} <= {}", fmt(&g), fmt(&half)));
    let floor = int(rational::floor_i64(&half));
    let g = worst(ra, rp, &peak);
    let p4 = (g <= floor, format!("{} <= {}", fmt(&g), fmt(&floor)));
    push("peak gap of delay-optimal throughputs", p1.0, p1.1);
    push("average gap of delay-optimal throughputs", p2.0, p2.1);
    push("average gap of peak-optimal throughputs", p3.0, p3.1);
    push("floored peak gap of average-optimal throughputs", p4.0, p4.1);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::rational::ratio;
    use crate::schedule::validate_solution;

    fn peaks(out: &SolveOutcome) -> Vec<(i64, i64)> {
        out.grid
            .iter()
            .map(|r| (r.period, r.report.as_ref().unwrap().peak_aoi))
            .collect()
    }

    #[test]
    fn pair_enumeration() {
        let inst = fixtures::pair();
        let grid = solve_grid(&inst, &SolverConfig::default()).unwrap();
        let mpa = grid.select(Objective::PeakAoi).unwrap();
        assert_eq!(peaks(&mpa), vec![(7, 17), (8, 18), (9, 19), (10, 19)]);
        assert_eq!(mpa.optimal_throughputs, vec![ratio(10, 7)]);
        assert_eq!(mpa.best.peak_aoi, 17);
        let maa = grid.select(Objective::AvgAoi).unwrap();
        assert_eq!(maa.optimal_throughputs, vec![ratio(10, 7)]);
        let mmd = grid.select(Objective::MaxDelay).unwrap();
        assert_eq!(mmd.optimal_throughputs, vec![int(1)]);
        assert_eq!(mmd.best.max_delay, 10);
        assert!(validate_solution(&inst, &mpa.solution).unwrap().ok);
        let checks = check_gap_bounds(&inst, &mpa, &maa, &mmd);
        assert!(checks.iter().all(|c| c.holds), "{checks:?}");
    }

    #[test]
    fn triple_enumeration() {
        let inst = fixtures::triple();
        let maa = solve_optimal(&inst, Objective::AvgAoi).unwrap();
        assert_eq!(maa.optimal_throughputs, vec![int(1)]);
        assert_eq!(maa.best.avg_aoi, int(7));
        let mpa = solve_optimal(&inst, Objective::PeakAoi).unwrap();
        assert_eq!(mpa.optimal_throughputs, vec![ratio(5, 2)]);
        assert_eq!(mpa.best.peak_aoi, 8);
        assert_eq!(solve_mmd_problem(&inst).unwrap().best.max_delay, 5);
    }

    #[test]
    fn sequential_matches_parallel() {
        let inst = fixtures::triple();
        let seq = SolverConfig {
            parallelism: Parallelism::Sequential,
            ..Default::default()
        };
        let a = solve_grid(&inst, &seq).unwrap();
        let b = solve_grid(&inst, &SolverConfig::default()).unwrap();
        assert_eq!(a.rows, b.rows);
        assert_eq!(a.results, b.results);
    }

    #[test]
    fn ties_pick_largest_throughput() {
        let inst = Instance::new(
            fixtures::single_link(2, int(6)),
            "s",
            "r",
            int(6),
            int(2),
            int(6),
        )
        .unwrap();
        let mmd = solve_mmd_problem(&inst).unwrap();
        assert_eq!(mmd.optimal_throughputs, vec![int(2), int(3), int(6)]);
        assert_eq!(mmd.best.period, 1);
    }

    #[test]
    fn zero_bandwidth_is_all_infeasible() {
        let inst = Instance::new(
            fixtures::single_link(1, int(0)),
            "s",
            "r",
            int(2),
            int(1),
            int(2),
        )
        .unwrap();
        let grid = solve_grid(&inst, &SolverConfig::default()).unwrap();
        assert!(grid.rows.iter().all(|r| r.report.is_none()));
        assert!(matches!(grid.select(Objective::PeakAoi), Err(Error::Infeasible(_))));
    }

    #[test]
    fn unit_period_flows() {
        let net = fixtures::pair_network();
        let one = mmd1_exact(&net, "s", "r", &int(1)).unwrap();
        assert_eq!(one.max_delay, 1);
        assert_eq!(one.paths.len(), 1);
        let eleven = mmd1_exact(&net, "s", "r", &int(11)).unwrap();
        assert_eq!(eleven.max_delay, 11);
        assert_eq!(eleven.paths.iter().map(|p| &p.rate).sum::<Rational>(), int(11));
        assert!(matches!(mmd1_exact(&net, "s", "r", &int(12)), Err(Error::Infeasible(_))));
        assert!(mmd1_exact(&net, "s", "r", &int(0)).is_err());
    }

    #[test]
    fn pair_approximation() {
        let inst = fixtures::pair();
        let ap = approx_solve(&inst, Objective::PeakAoi, &int(1)).unwrap();
        assert_eq!(ap.mmd1.max_delay, 1);
        assert_eq!(ap.report.max_delay, 10);
        assert_eq!(ap.report.peak_aoi, 19);
        assert_eq!(ap.ratio_bound, ratio(27, 7));
        let v = validate_solution(&inst, &ap.solution).unwrap();
        assert!(v.ok, "{:?}", v.violations);
        assert_eq!(v.max_delay, 10);
    }

    #[test]
    fn triple_approximation_is_optimal_on_average() {
        let inst = fixtures::triple();
        let ap = approx_solve(&inst, Objective::AvgAoi, &int(1)).unwrap();
        assert_eq!(ap.report.max_delay, 5);
        assert_eq!(ap.report.avg_aoi, int(7));
        assert_eq!(ap.ratio_bound, int(1) + int(3) * ratio(5, 2));
        assert!(approx_solve(&inst, Objective::MaxDelay, &int(1)).is_err());
        assert!(approx_solve(&inst, Objective::PeakAoi, &ratio(1, 2)).is_err());
    }

    #[test]
    fn single_link_approximation() {
        let inst = Instance::new(
            fixtures::single_link(1, int(4)),
            "s",
            "r",
            int(4),
            int(4),
            int(4),
        )
        .unwrap();
        let ap = approx_solve(&inst, Objective::PeakAoi, &int(1)).unwrap();
        assert_eq!((ap.report.period, ap.report.max_delay, ap.report.peak_aoi), (1, 1, 1));
        assert_eq!(ap.ratio_bound, int(3));
    }
}
