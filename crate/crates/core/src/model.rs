//! Networks, instances, periodic schedules and the closed-form AoI relation.

use std::collections::{HashMap, HashSet};
use std::fmt;

use num_traits::Signed;

use crate::error::{Error, Result};
use crate::rational::{self, Rational};

/// A directed link as written in an input file. Endpoints are node names so
/// that malformed input can be represented and reported.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Link {
    pub id: String,
    pub from: String,
    pub to: String,
    /// Slots needed to traverse the link.
    pub delay: i64,
    /// Data units that may be pushed onto the link per slot.
    pub bandwidth: Rational,
}

impl Link {
    pub fn new(id: &str, from: &str, to: &str, delay: i64, bandwidth: Rational) -> Self {
        Link {
            id: id.to_string(),
            from: from.to_string(),
            to: to.to_string(),
            delay,
            bandwidth,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Network {
    pub nodes: Vec<String>,
    pub links: Vec<Link>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NetworkViolation {
    DuplicateNode { node: String },
    DuplicateLink { link: String },
    UnknownEndpoint { link: String, node: String },
    SelfLoop { link: String },
    NonPositiveDelay { link: String, delay: i64 },
    NegativeBandwidth { link: String },
}

impl fmt::Display for NetworkViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NetworkViolation::DuplicateNode { node } => write!(f, "duplicate node `{node}`"),
            NetworkViolation::DuplicateLink { link } => write!(f, "duplicate link id `{link}`"),
            NetworkViolation::UnknownEndpoint { link, node } => {
                write!(f, "link `{link}` references unknown node `{node}`")
            }
            NetworkViolation::SelfLoop { link } => write!(f, "link `{link}` is a self-loop"),
            NetworkViolation::NonPositiveDelay { link, delay } => {
                write!(f, "link `{link}` has non-positive delay {delay}")
            }
            NetworkViolation::NegativeBandwidth { link } => {
                write!(f, "link `{link}` has negative bandwidth")
            }
        }
    }
}

/// Returns every invariant violation of `net`; an empty list means the
/// network is well formed.
pub fn validate_network(net: &Network) -> Vec<NetworkViolation> {
    let mut out = Vec::new();
    let mut seen = HashSet::new();
    for n in &net.nodes {
        if !seen.insert(n.as_str()) {
            out.push(NetworkViolation::DuplicateNode { node: n.clone() });
        }
    }
    let mut ids = HashSet::new();
    for l in &net.links {
        if !ids.insert(l.id.as_str()) {
            out.push(NetworkViolation::DuplicateLink { link: l.id.clone() });
        }
        for end in [&l.from, &l.to] {
            if !seen.contains(end.as_str()) {
                out.push(NetworkViolation::UnknownEndpoint {
                    link: l.id.clone(),
                    node: end.clone(),
                });
            }
        }
        if l.from == l.to {
            out.push(NetworkViolation::SelfLoop { link: l.id.clone() });
        }
        if l.delay < 1 {
            out.push(NetworkViolation::NonPositiveDelay {
                link: l.id.clone(),
                delay: l.delay,
            });
        }
        if l.bandwidth.is_negative() {
            out.push(NetworkViolation::NegativeBandwidth { link: l.id.clone() });
        }
    }
    out
}

/// A validated link with dense node indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Arc {
    pub from: usize,
    pub to: usize,
    pub delay: i64,
    pub bandwidth: Rational,
}

/// Index form of a validated [`Network`]. Link indices match
/// `Network::links` positions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Topology {
    pub node_count: usize,
    pub arcs: Vec<Arc>,
    out_arcs: Vec<Vec<usize>>,
    in_arcs: Vec<Vec<usize>>,
}

impl Topology {
    pub fn out_arcs(&self, v: usize) -> &[usize] {
        &self.out_arcs[v]
    }

    pub fn in_arcs(&self, v: usize) -> &[usize] {
        &self.in_arcs[v]
    }

    pub fn max_delay(&self) -> i64 {
        self.arcs.iter().map(|a| a.delay).max().unwrap_or(0)
    }

    /// Shortest total delay from `src` to every node over links with
    /// positive bandwidth; `None` when unreachable.
    pub fn delays_from(&self, src: usize) -> Vec<Option<i64>> {
        self.shortest(src, false)
    }

    /// Shortest total delay from every node to `dst` over links with
    /// positive bandwidth.
    pub fn delays_to(&self, dst: usize) -> Vec<Option<i64>> {
        self.shortest(dst, true)
    }

    fn shortest(&self, root: usize, reverse: bool) -> Vec<Option<i64>> {
        use std::cmp::Reverse;
        use std::collections::BinaryHeap;
        let mut dist: Vec<Option<i64>> = vec![None; self.node_count];
        let mut heap = BinaryHeap::new();
        dist[root] = Some(0);
        heap.push(Reverse((0i64, root)));
        while let Some(Reverse((d, v))) = heap.pop() {
            if dist[v].is_some_and(|best| best < d) {
                continue;
            }
            let arcs = if reverse { &self.in_arcs[v] } else { &self.out_arcs[v] };
            for &a in arcs {
                let arc = &self.arcs[a];
                if !arc.bandwidth.is_positive() {
                    continue;
                }
                let w = if reverse { arc.from } else { arc.to };
                let nd = d + arc.delay;
                if dist[w].map_or(true, |cur| nd < cur) {
                    dist[w] = Some(nd);
                    heap.push(Reverse((nd, w)));
                }
            }
        }
        dist
    }
}

impl Network {
    pub fn new(nodes: Vec<String>, links: Vec<Link>) -> Self {
        Network { nodes, links }
    }

    pub fn node_index(&self, name: &str) -> Option<usize> {
        self.nodes.iter().position(|n| n == name)
    }

    pub fn link_index(&self, id: &str) -> Option<usize> {
        self.links.iter().position(|l| l.id == id)
    }

    /// Validates and converts to index form.
    pub fn topology(&self) -> Result<Topology> {
        let violations = validate_network(self);
        if let Some(v) = violations.first() {
            return Err(Error::InvalidNetwork(v.to_string()));
        }
        let index: HashMap<&str, usize> = self
            .nodes
            .iter()
            .enumerate()
            .map(|(i, n)| (n.as_str(), i))
            .collect();
        let n = self.nodes.len();
        let mut out_arcs = vec![Vec::new(); n];
        let mut in_arcs = vec![Vec::new(); n];
        let arcs = self
            .links
            .iter()
            .enumerate()
            .map(|(i, l)| {
                let (from, to) = (index[l.from.as_str()], index[l.to.as_str()]);
                out_arcs[from].push(i);
                in_arcs[to].push(i);
                Arc {
                    from,
                    to,
                    delay: l.delay,
                    bandwidth: l.bandwidth.clone(),
                }
            })
            .collect();
        Ok(Topology {
            node_count: n,
            arcs,
            out_arcs,
            in_arcs,
        })
    }
}

/// A routing problem: ship `batch` units from `sender` to `receiver` once per
/// period, with throughput `batch / period` inside `[r_min, r_max]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    network: Network,
    topology: Topology,
    sender: usize,
    receiver: usize,
    batch: Rational,
    r_min: Rational,
    r_max: Rational,
}

impl Instance {
    pub fn new(
        network: Network,
        sender: &str,
        receiver: &str,
        batch: Rational,
        r_min: Rational,
        r_max: Rational,
    ) -> Result<Self> {
        let topology = network.topology()?;
        let find = |name: &str| {
            network
                .node_index(name)
                .ok_or_else(|| Error::InvalidInstance(format!("unknown node `{name}`")))
        };
        let (s, r) = (find(sender)?, find(receiver)?);
        if s == r {
            return Err(Error::InvalidInstance("sender equals receiver".into()));
        }
        if !batch.is_positive() {
            return Err(Error::InvalidInstance("batch size must be positive".into()));
        }
        if !r_min.is_positive() || !r_max.is_positive() {
            return Err(Error::InvalidInstance("throughput bounds must be positive".into()));
        }
        if r_min > r_max {
            return Err(Error::InvalidInstance("r_min exceeds r_max".into()));
        }
        for (label, bound) in [("r_min", &r_min), ("r_max", &r_max)] {
            if rational::as_positive_integer(&(&batch / bound)).is_none() {
                return Err(Error::InvalidInstance(format!(
                    "batch / {label} must be a positive integer"
                )));
            }
        }
        Ok(Instance {
            network,
            topology,
            sender: s,
            receiver: r,
            batch,
            r_min,
            r_max,
        })
    }

    /// Builds an instance from a period range `[t_min, t_max]` instead of
    /// throughput bounds.
    pub fn with_periods(
        network: Network,
        sender: &str,
        receiver: &str,
        batch: Rational,
        t_min: i64,
        t_max: i64,
    ) -> Result<Self> {
        if t_min < 1 || t_max < t_min {
            return Err(Error::InvalidInstance(format!(
                "bad period range [{t_min}, {t_max}]"
            )));
        }
        let r_min = &batch / rational::int(t_max);
        let r_max = &batch / rational::int(t_min);
        Instance::new(network, sender, receiver, batch, r_min, r_max)
    }

    pub fn network(&self) -> &Network {
        &self.network
    }
    pub fn topology(&self) -> &Topology {
        &self.topology
    }
    pub fn sender(&self) -> usize {
        self.sender
    }
    pub fn receiver(&self) -> usize {
        self.receiver
    }
    pub fn sender_name(&self) -> &str {
        &self.network.nodes[self.sender]
    }
    pub fn receiver_name(&self) -> &str {
        &self.network.nodes[self.receiver]
    }
    pub fn batch(&self) -> &Rational {
        &self.batch
    }
    pub fn r_min(&self) -> &Rational {
        &self.r_min
    }
    pub fn r_max(&self) -> &Rational {
        &self.r_max
    }

    /// Largest admissible period, `D / R_l`.
    pub fn max_period(&self) -> i64 {
        rational::floor_i64(&(&self.batch / &self.r_min))
    }

    /// Smallest admissible period, `D / R_u`.
    pub fn min_period(&self) -> i64 {
        rational::floor_i64(&(&self.batch / &self.r_max))
    }

    pub fn throughput(&self, period: i64) -> Rational {
        &self.batch / rational::int(period)
    }

    /// Same network and endpoints with a different batch and period range.
    pub fn reshaped(&self, batch: Rational, r_min: Rational, r_max: Rational) -> Result<Self> {
        Instance::new(
            self.network.clone(),
            self.sender_name(),
            self.receiver_name(),
            batch,
            r_min,
            r_max,
        )
    }
}

/// Integer periods `T` with `D/R_u <= T <= D/R_l`, ascending.
pub fn feasible_periods(inst: &Instance) -> Vec<i64> {
    (inst.min_period()..=inst.max_period()).collect()
}

/// One path/offset assignment of a periodic schedule.
///
/// `offsets` has one more element than `nodes`: `offsets[0]` is always zero,
/// `offsets[i]` for `1 <= i < nodes.len()` is the slot (relative to the
/// period start) at which the data is pushed onto `links[i - 1]`, and the
/// last element is the delivery slot at the receiver.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ScheduleEntry {
    pub nodes: Vec<usize>,
    pub links: Vec<usize>,
    pub offsets: Vec<i64>,
    pub amount: Rational,
}

impl ScheduleEntry {
    pub fn delivery(&self) -> i64 {
        *self.offsets.last().expect("offsets never empty")
    }

    /// Push slot onto hop `h` (zero based).
    pub fn push_offset(&self, hop: usize) -> i64 {
        self.offsets[hop + 1]
    }

    /// Holding delay before hop `h` (zero based): time the data waits at
    /// `nodes[h]` before being pushed.
    pub fn holding(&self, topo: &Topology, hop: usize) -> i64 {
        let arrival = if hop == 0 {
            self.offsets[0]
        } else {
            self.offsets[hop] + topo.arcs[self.links[hop - 1]].delay
        };
        self.offsets[hop + 1] - arrival
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeriodicSolution {
    pub period: i64,
    pub entries: Vec<ScheduleEntry>,
}

impl PeriodicSolution {
    pub fn total_amount(&self) -> Rational {
        self.entries.iter().map(|e| &e.amount).sum()
    }

    /// Largest delivery slot among positive entries, zero when empty.
    pub fn max_delay(&self) -> i64 {
        self.entries
            .iter()
            .filter(|e| e.amount.is_positive())
            .map(ScheduleEntry::delivery)
            .max()
            .unwrap_or(0)
    }
}

/// AoI figures of one solved period.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AoiReport {
    pub throughput: Rational,
    pub period: i64,
    pub max_delay: i64,
    pub peak_aoi: i64,
    pub avg_aoi: Rational,
}

impl AoiReport {
    pub fn new(batch: &Rational, period: i64, max_delay: i64) -> Self {
        let (peak_aoi, avg_aoi) = aoi_from_max_delay(max_delay, period);
        AoiReport {
            throughput: batch / rational::int(period),
            period,
            max_delay,
            peak_aoi,
            avg_aoi,
        }
    }
}

/// Peak and average AoI of any periodic schedule with maximum delay `M` and
/// period `T`: `(M + T - 1, M + (T - 1) / 2)`.
pub fn aoi_from_max_delay(max_delay: i64, period: i64) -> (i64, Rational) {
    let peak = max_delay + period - 1;
    let avg = rational::int(max_delay) + rational::ratio(period - 1, 2);
    (peak, avg)
}

impl fmt::Display for AoiReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "R={} T={} M={} peak={} avg={}",
            rational::format(&self.throughput),
            self.period,
            self.max_delay,
            self.peak_aoi,
            rational::format(&self.avg_aoi)
        )
    }
}
