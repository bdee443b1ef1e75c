//! Topology generators, the per-slot capacity used to size batches, and the
//! sweep/batch harness.

pub mod generators;
pub mod harness;

use std::collections::VecDeque;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::model::Network;
use crate::rational::Rational;

/// Largest amount that can leave `s` and reach `r` in every slot, i.e. the
/// static max-flow value with link bandwidths as capacities. Zero when `r`
/// is unreachable.
pub fn batch_capacity(net: &Network, s: &str, r: &str) -> Result<Rational> {
    let topo = net.topology()?;
    let find = |n: &str| {
        net.node_index(n)
            .ok_or_else(|| Error::InvalidInstance(format!("unknown node `{n}`")))
    };
    let (s, r) = (find(s)?, find(r)?);
    if s == r {
        return Err(Error::InvalidInstance("sender equals receiver".into()));
    }
    // residual arcs come in pairs: 2k forward, 2k + 1 backward
    let mut cap: Vec<Rational> = Vec::with_capacity(2 * topo.arcs.len());
    let mut head = Vec::with_capacity(2 * topo.arcs.len());
    let mut adj = vec![Vec::new(); topo.node_count];
    for arc in &topo.arcs {
        adj[arc.from].push(cap.len());
        cap.push(arc.bandwidth.clone());
        head.push(arc.to);
        adj[arc.to].push(cap.len());
        cap.push(Rational::zero());
        head.push(arc.from);
    }
    let mut total = Rational::zero();
    loop {
        // shortest augmenting path (Edmonds-Karp)
        let mut via: Vec<Option<usize>> = vec![None; topo.node_count];
        let mut seen = vec![false; topo.node_count];
        seen[s] = true;
        let mut queue = VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            for &a in &adj[v] {
                let w = head[a];
                if !seen[w] && cap[a].is_positive() {
                    seen[w] = true;
                    via[w] = Some(a);
                    queue.push_back(w);
                }
            }
        }
        if !seen[r] {
            return Ok(total);
        }
        let mut path = Vec::new();
        let mut v = r;
        while let Some(a) = via[v] {
            path.push(a);
            v = head[a ^ 1];
        }
        let push = path.iter().map(|&a| cap[a].clone()).min().expect("path is nonempty");
        for &a in &path {
            cap[a] -= &push;
            cap[a ^ 1] += &push;
        }
        total += push;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::rational::{int, ratio};

    #[test]
    fn reference_networks() {
        assert_eq!(batch_capacity(&fixtures::pair_network(), "s", "r").unwrap(), int(11));
        assert_eq!(
            batch_capacity(&fixtures::single_link(4, ratio(7, 3)), "s", "r").unwrap(),
            ratio(7, 3)
        );
        let mut net = fixtures::triple_network();
        for l in &mut net.links {
            l.bandwidth = int(0);
        }
        assert_eq!(batch_capacity(&net, "s", "r").unwrap(), int(0));
        assert_eq!(batch_capacity(&fixtures::relay_network(), "r", "s").unwrap(), int(0));
    }
}
