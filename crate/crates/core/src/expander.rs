//! Time-expanded network: one copy of every node per slot, transit links
//! shifted by their delay, and unit holding links.

use std::fmt::Write as _;

use crate::model::{Instance, Network, Topology};
use crate::error::Result;
use crate::rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ExpKind {
    /// Copy of physical link `link` pushed at slot `offset`.
    Transit { link: usize, offset: i64 },
    Holding { node: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ExpLink {
    pub kind: ExpKind,
    pub tail: usize,
    pub head: usize,
    pub tail_layer: i64,
    pub head_layer: i64,
}

/// Layered DAG over `(node, layer)` pairs. Node ids are
/// `v * (horizon + 1) + layer`; links are transit copies ordered by
/// `(link, offset)` followed by holding links ordered by `(node, layer)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExpandedNetwork {
    pub horizon: i64,
    pub base_nodes: usize,
    pub links: Vec<ExpLink>,
    pub transit_count: usize,
    out_links: Vec<Vec<usize>>,
    in_links: Vec<Vec<usize>>,
}

impl ExpandedNetwork {
    pub fn node_id(&self, v: usize, layer: i64) -> usize {
        v * (self.horizon as usize + 1) + layer as usize
    }

    pub fn node_of(&self, id: usize) -> (usize, i64) {
        let span = self.horizon as usize + 1;
        (id / span, (id % span) as i64)
    }

    pub fn node_count(&self) -> usize {
        self.base_nodes * (self.horizon as usize + 1)
    }

    pub fn transit_links(&self) -> &[ExpLink] {
        &self.links[..self.transit_count]
    }

    pub fn holding_links(&self) -> &[ExpLink] {
        &self.links[self.transit_count..]
    }

    pub fn out_links(&self, id: usize) -> &[usize] {
        &self.out_links[id]
    }

    pub fn in_links(&self, id: usize) -> &[usize] {
        &self.in_links[id]
    }

    /// Index of the transit copy of `link` pushed at `offset`, if present.
    pub fn transit_index(&self, topo: &Topology, link: usize, offset: i64) -> Option<usize> {
        let tail = self.node_id(topo.arcs[link].from, offset);
        self.out_links[tail].iter().copied().find(|&i| {
            matches!(self.links[i].kind, ExpKind::Transit { link: l, .. } if l == link)
        })
    }

    pub fn holding_index(&self, node: usize, layer: i64) -> Option<usize> {
        if layer < 0 || layer >= self.horizon {
            return None;
        }
        let per_node = self.horizon as usize;
        Some(self.transit_count + node * per_node + layer as usize)
    }

    /// Graphviz rendering with nodes labelled `name@layer`.
    pub fn to_dot(&self, net: &Network) -> String {
        let mut out = String::from("digraph expanded {\n  rankdir=LR;\n");
        for v in 0..self.base_nodes {
            for layer in 0..=self.horizon {
                let id = self.node_id(v, layer);
                let _ = writeln!(out, "  n{id} [label=\"{}@{layer}\"];", net.nodes[v]);
            }
        }
        for l in &self.links {
            match l.kind {
                ExpKind::Transit { link, .. } => {
                    let _ = writeln!(
                        out,
                        "  n{} -> n{} [label=\"{}\"];",
                        l.tail, l.head, net.links[link].id
                    );
                }
                ExpKind::Holding { .. } => {
                    let _ = writeln!(out, "  n{} -> n{} [style=dashed];", l.tail, l.head);
                }
            }
        }
        out.push_str("}\n");
        out
    }
}

/// `|V| * (d_max + D / R_l)`, a horizon that covers the optimal maximum
/// delay of every admissible period.
pub fn horizon_upper_bound(inst: &Instance) -> i64 {
    let topo = inst.topology();
    topo.node_count as i64 * (topo.max_delay() + inst.max_period())
}

pub fn build_expanded(net: &Network, horizon: i64) -> Result<ExpandedNetwork> {
    build_from_topology(&net.topology()?, horizon)
}

pub fn build_from_topology(topo: &Topology, horizon: i64) -> Result<ExpandedNetwork> {
    if horizon < 1 {
        return Err(crate::error::Error::InvalidParameter(format!(
            "horizon {horizon} must be at least 1"
        )));
    }
    let span = horizon as usize + 1;
    let id = |v: usize, layer: i64| v * span + layer as usize;
    let mut links = Vec::new();
    for (e, arc) in topo.arcs.iter().enumerate() {
        for i in 0..=(horizon - arc.delay) {
            links.push(ExpLink {
                kind: ExpKind::Transit { link: e, offset: i },
                tail: id(arc.from, i),
                head: id(arc.to, i + arc.delay),
                tail_layer: i,
                head_layer: i + arc.delay,
            });
        }
    }
    let transit_count = links.len();
    for v in 0..topo.node_count {
        for i in 0..horizon {
            links.push(ExpLink {
                kind: ExpKind::Holding { node: v },
                tail: id(v, i),
                head: id(v, i + 1),
                tail_layer: i,
                head_layer: i + 1,
            });
        }
    }
    let n = topo.node_count * span;
    let mut out_links = vec![Vec::new(); n];
    let mut in_links = vec![Vec::new(); n];
    for (k, l) in links.iter().enumerate() {
        out_links[l.tail].push(k);
        in_links[l.head].push(k);
    }
    Ok(ExpandedNetwork {
        horizon,
        base_nodes: topo.node_count,
        links,
        transit_count,
        out_links,
        in_links,
    })
}

/// Transit copies of one physical link whose push offsets share a residue
/// modulo the period; together they may carry at most the link bandwidth.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinkGroup {
    pub link: usize,
    pub residue: i64,
    pub bandwidth: rational::Rational,
    pub members: Vec<usize>,
}

/// One group per `(link, residue)` with `residue` in `0..period`, ordered by
/// link then residue. Groups may be empty.
pub fn link_groups(exp: &ExpandedNetwork, topo: &Topology, period: i64) -> Vec<LinkGroup> {
    assert!(period >= 1, "period must be positive");
    let mut groups: Vec<LinkGroup> = Vec::with_capacity(topo.arcs.len() * period as usize);
    for (e, arc) in topo.arcs.iter().enumerate() {
        for residue in 0..period {
            groups.push(LinkGroup {
                link: e,
                residue,
                bandwidth: arc.bandwidth.clone(),
                members: Vec::new(),
            });
        }
    }
    for (k, l) in exp.transit_links().iter().enumerate() {
        if let ExpKind::Transit { link, offset } = l.kind {
            groups[link * period as usize + (offset % period) as usize]
                .members
                .push(k);
        }
    }
    groups
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn horizon_formula() {
        assert_eq!(horizon_upper_bound(&fixtures::pair()), 42);
        assert_eq!(horizon_upper_bound(&fixtures::triple()), 24);
        let one = Instance::new(
            fixtures::single_link(1, rational::int(3)),
            "s",
            "r",
            rational::int(3),
            rational::int(3),
            rational::int(3),
        )
        .unwrap();
        assert_eq!(horizon_upper_bound(&one), 4);
    }

    #[test]
    fn relay_counts() {
        let exp = build_expanded(&fixtures::relay_network(), 5).unwrap();
        assert_eq!(exp.node_count(), 18);
        let per_link = |e: usize| {
            exp.transit_links()
                .iter()
                .filter(|l| matches!(l.kind, ExpKind::Transit { link, .. } if link == e))
                .count()
        };
        assert_eq!(per_link(0), 4);
        assert_eq!(per_link(1), 5);
        assert_eq!(exp.holding_links().len(), 15);
        assert!(exp.links.iter().all(|l| l.head_layer > l.tail_layer));
    }

    #[test]
    fn short_horizon_has_only_holding_links() {
        let exp = build_expanded(&fixtures::triple_network(), 1).unwrap();
        // only e1 (delay 1) fits
        assert_eq!(exp.transit_count, 1);
        let exp = build_expanded(&fixtures::single_link(3, rational::int(1)), 2).unwrap();
        assert_eq!(exp.transit_count, 0);
        assert_eq!(exp.holding_links().len(), 4);
    }

    #[test]
    fn pair_e2_single_copy() {
        let exp = build_expanded(&fixtures::pair_network(), 11).unwrap();
        let e2: Vec<_> = exp
            .transit_links()
            .iter()
            .filter_map(|l| match l.kind {
                ExpKind::Transit { link: 1, offset } => Some(offset),
                _ => None,
            })
            .collect();
        assert_eq!(e2, vec![0]);
    }

    #[test]
    fn pair_groups_at_period_seven() {
        let net = fixtures::pair_network();
        let topo = net.topology().unwrap();
        let exp = build_from_topology(&topo, 11).unwrap();
        let groups = link_groups(&exp, &topo, 7);
        let sizes: Vec<usize> = groups[..7].iter().map(|g| g.members.len()).collect();
        assert_eq!(sizes, vec![2, 2, 2, 2, 1, 1, 1]);
        let offsets: Vec<i64> = groups[0]
            .members
            .iter()
            .map(|&k| exp.links[k].tail_layer)
            .collect();
        assert_eq!(offsets, vec![0, 7]);
        assert_eq!(link_groups(&exp, &topo, 1)[0].members.len(), 11);
        assert!(link_groups(&exp, &topo, 20).iter().all(|g| g.members.len() <= 1));
    }

    #[test]
    fn indices_and_lookup() {
        let net = fixtures::relay_network();
        let topo = net.topology().unwrap();
        let exp = build_from_topology(&topo, 5).unwrap();
        assert_eq!(exp.node_of(exp.node_id(2, 3)), (2, 3));
        let k = exp.transit_index(&topo, 1, 2).unwrap();
        assert_eq!(exp.links[k].kind, ExpKind::Transit { link: 1, offset: 2 });
        let h = exp.holding_index(1, 4).unwrap();
        assert_eq!(exp.links[h].tail, exp.node_id(1, 4));
        assert!(exp.holding_index(1, 5).is_none());
        assert!(exp.to_dot(&net).contains("a@3"));
    }

    #[test]
    fn deterministic_build() {
        let a = build_expanded(&fixtures::triple_network(), 9).unwrap();
        let b = build_expanded(&fixtures::triple_network(), 9).unwrap();
        assert_eq!(a, b);
    }
}
