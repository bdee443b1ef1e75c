//! Slot-by-slot replay of a periodic schedule.
//!
//! Nothing here uses the closed-form AoI relation; the replay tracks which
//! batches have fully arrived at each slot and derives AoI from that.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::model::{PeriodicSolution, Topology};
use crate::rational::{self, Rational};

/// Generation slot of the newest batch fully delivered by slot `t`, or
/// `None` when no simulated batch has completed yet.
fn latest_complete(
    sol: &PeriodicSolution,
    deliveries: &[(i64, &Rational)],
    total: &Rational,
    t: i64,
    first_period: i64,
) -> Option<i64> {
    let period = sol.period;
    let mut newest = None;
    let mut k = first_period;
    while k * period <= t {
        let start = k * period;
        let delivered: Rational = deliveries
            .iter()
            .filter(|(u, _)| start + u <= t)
            .map(|(_, a)| *a)
            .sum();
        if &delivered == total {
            newest = Some(start);
        }
        k += 1;
    }
    newest
}

/// Replays the schedule over the window `[M, M + T)` and returns the peak
/// and the exact mean of the AoI `t - pi(t)` over that window.
pub fn simulate_aoi(sol: &PeriodicSolution, max_delay: i64) -> (i64, Rational) {
    let period = sol.period;
    let deliveries: Vec<(i64, &Rational)> = sol
        .entries
        .iter()
        .map(|e| (e.delivery(), &e.amount))
        .collect();
    let total = sol.total_amount();
    // batches generated before slot 0 are needed to cover the window
    let first_period = -(max_delay / period) - 2;
    let mut peak = i64::MIN;
    let mut sum = 0i64;
    for t in max_delay..max_delay + period {
        let generated = latest_complete(sol, &deliveries, &total, t, first_period)
            .expect("window starts after the first simulated delivery");
        let age = t - generated;
        peak = peak.max(age);
        sum += age;
    }
    (peak, rational::ratio(sum, period))
}

/// Amount pushed onto each link at every absolute slot in `[0, slots)`,
/// including batches generated before slot 0.
pub fn slot_loads(
    topo: &Topology,
    sol: &PeriodicSolution,
    slots: i64,
) -> BTreeMap<usize, Vec<Rational>> {
    let period = sol.period;
    let mut out: BTreeMap<usize, Vec<Rational>> = (0..topo.arcs.len())
        .map(|l| (l, vec![Rational::zero(); slots as usize]))
        .collect();
    let reach = sol
        .entries
        .iter()
        .flat_map(|e| e.offsets.iter().copied())
        .max()
        .unwrap_or(0);
    let first = -(reach / period) - 1;
    let last = slots / period + 1;
    for k in first..=last {
        for e in &sol.entries {
            for (h, &l) in e.links.iter().enumerate() {
                let t = k * period + e.push_offset(h);
                if (0..slots).contains(&t) {
                    out.get_mut(&l).unwrap()[t as usize] += &e.amount;
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::ScheduleEntry;
    use crate::rational::{int, ratio};

    fn burst(period: i64, delivery: i64) -> PeriodicSolution {
        PeriodicSolution {
            period,
            entries: vec![ScheduleEntry {
                nodes: vec![0, 1],
                links: vec![0],
                offsets: vec![0, delivery - 1, delivery],
                amount: int(1),
            }],
        }
    }

    #[test]
    fn reference_values() {
        assert_eq!(simulate_aoi(&burst(5, 5), 5), (9, int(7)));
        assert_eq!(simulate_aoi(&burst(1, 3), 3), (3, int(3)));
        assert_eq!(simulate_aoi(&burst(4, 6), 6), (9, ratio(15, 2)));
    }

    #[test]
    fn partial_deliveries_wait_for_the_last_unit() {
        let mut sol = burst(3, 2);
        sol.entries.push(ScheduleEntry {
            nodes: vec![0, 1],
            links: vec![0],
            offsets: vec![0, 6, 7],
            amount: int(2),
        });
        assert_eq!(simulate_aoi(&sol, 7), (9, int(8)));
    }
}
