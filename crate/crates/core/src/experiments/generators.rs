//! Seeded topology generators. Every undirected edge becomes two directed
//! links with independently drawn delay and bandwidth.

use std::collections::BTreeSet;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::model::{Link, Network};
use crate::rational::{int, Rational};

#[derive(Debug, Clone, PartialEq)]
pub enum TopologyKind {
    Complete { n: usize },
    Grid { rows: usize, cols: usize },
    ErdosRenyi { n: usize, m: usize },
    /// Ring lattice of even degree `k` (odd values are rounded up) with each
    /// lattice edge rewired with probability `p`.
    WattsStrogatz { n: usize, k: usize, p: f64 },
    /// Each new node links to a uniform prototype and copies each of the
    /// prototype's edges with probability `1 - p`.
    Copying { n: usize, p: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct TopologySpec {
    pub kind: TopologyKind,
    pub seed: u64,
    pub delay_choices: Vec<i64>,
    pub bandwidth_choices: Vec<Rational>,
}

impl TopologySpec {
    /// Delays from `{1..5}` and bandwidths from `{10, 20, 30, 40, 50}`.
    pub fn new(kind: TopologyKind, seed: u64) -> Self {
        TopologySpec {
            kind,
            seed,
            delay_choices: (1..=5).collect(),
            bandwidth_choices: (1..=5).map(|k| int(10 * k)).collect(),
        }
    }
}

fn node_names(kind: &TopologyKind) -> Vec<String> {
    match kind {
        TopologyKind::Complete { n } => (1..=*n).map(|i| format!("a{i}")).collect(),
        TopologyKind::Grid { rows, cols } => (1..=*rows)
            .flat_map(|r| (1..=*cols).map(move |c| format!("a{r}_{c}")))
            .collect(),
        TopologyKind::ErdosRenyi { n, .. }
        | TopologyKind::WattsStrogatz { n, .. }
        | TopologyKind::Copying { n, .. } => (0..*n).map(|i| format!("v{i}")).collect(),
    }
}

fn check(kind: &TopologyKind) -> Result<()> {
    let bad = |why: String| Err(Error::InvalidParameter(why));
    match *kind {
        TopologyKind::Complete { n } if n < 2 => bad(format!("complete graph needs n >= 2, got {n}")),
        TopologyKind::Grid { rows, cols } if rows < 2 || cols < 2 => {
            bad(format!("grid needs at least 2x2, got {rows}x{cols}"))
        }
        TopologyKind::ErdosRenyi { n, m } if n < 2 || m > n * (n - 1) / 2 => {
            bad(format!("G(n, m) needs n >= 2 and m <= n(n-1)/2, got n={n} m={m}"))
        }
        TopologyKind::WattsStrogatz { n, k, p } => {
            let k = k + k % 2;
            if k == 0 || n <= k || !(0.0..=1.0).contains(&p) {
                bad(format!("Watts-Strogatz needs 0 < k < n and p in [0, 1], got n={n} k={k} p={p}"))
            } else {
                Ok(())
            }
        }
        TopologyKind::Copying { n, p } if n < 2 || !(0.0..=1.0).contains(&p) => {
            bad(format!("copying model needs n >= 2 and p in [0, 1], got n={n} p={p}"))
        }
        _ => Ok(()),
    }
}

/// Undirected edge list `(u, v)` with `u < v`, in generation order.
pub fn undirected_edges(kind: &TopologyKind, rng: &mut ChaCha8Rng) -> Result<Vec<(usize, usize)>> {
    check(kind)?;
    let edges = match *kind {
        TopologyKind::Complete { n } => (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .collect(),
        TopologyKind::Grid { rows, cols } => {
            let id = |r: usize, c: usize| r * cols + c;
            let mut out = Vec::new();
            for r in 0..rows {
                for c in 0..cols {
                    if c + 1 < cols {
                        out.push((id(r, c), id(r, c + 1)));
                    }
                    if r + 1 < rows {
                        out.push((id(r, c), id(r + 1, c)));
                    }
                }
            }
            out
        }
        TopologyKind::ErdosRenyi { n, m } => {
            let pairs: Vec<(usize, usize)> = (0..n)
                .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
                .collect();
            let mut picked: Vec<usize> = sample(rng, pairs.len(), m).into_vec();
            picked.sort_unstable();
            picked.into_iter().map(|i| pairs[i]).collect()
        }
        TopologyKind::WattsStrogatz { n, k, p } => watts_strogatz(n, k + k % 2, p, rng),
        TopologyKind::Copying { n, p } => copying(n, p, rng),
    };
    Ok(edges)
}

fn norm(u: usize, v: usize) -> (usize, usize) {
    (u.min(v), u.max(v))
}

fn watts_strogatz(n: usize, k: usize, p: f64, rng: &mut ChaCha8Rng) -> Vec<(usize, usize)> {
    let mut lattice = Vec::new();
    for j in 1..=k / 2 {
        for u in 0..n {
            lattice.push((u, (u + j) % n));
        }
    }
    let mut present: BTreeSet<(usize, usize)> = lattice.iter().map(|&(u, v)| norm(u, v)).collect();
    let mut out = Vec::with_capacity(lattice.len());
    for (u, v) in lattice {
        let mut edge = norm(u, v);
        if rng.gen_bool(p) {
            let free: Vec<usize> = (0..n)
                .filter(|&w| w != u && !present.contains(&norm(u, w)))
                .collect();
            if !free.is_empty() {
                let w = free[rng.gen_range(0..free.len())];
                present.remove(&edge);
                edge = norm(u, w);
                present.insert(edge);
            }
        }
        out.push(edge);
    }
    out
}

fn copying(n: usize, p: f64, rng: &mut ChaCha8Rng) -> Vec<(usize, usize)> {
    let mut adj: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
    let mut out = vec![(0, 1)];
    adj[0].insert(1);
    adj[1].insert(0);
    for u in 2..n {
        let proto = rng.gen_range(0..u);
        let mut targets = vec![proto];
        for &w in &adj[proto] {
            if rng.gen_bool(1.0 - p) {
                targets.push(w);
            }
        }
        for w in targets {
            if adj[u].insert(w) {
                adj[w].insert(u);
                out.push(norm(u, w));
            }
        }
    }
    out
}

pub fn generate(spec: &TopologySpec) -> Result<Network> {
    if spec.delay_choices.is_empty() || spec.bandwidth_choices.is_empty() {
        return Err(Error::InvalidParameter("empty delay or bandwidth choices".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let edges = undirected_edges(&spec.kind, &mut rng)?;
    let names = node_names(&spec.kind);
    let mut links = Vec::with_capacity(2 * edges.len());
    for (k, &(u, v)) in edges.iter().enumerate() {
        for (dir, (a, b)) in [("f", (u, v)), ("b", (v, u))] {
            let delay = spec.delay_choices[rng.gen_range(0..spec.delay_choices.len())];
            let bw = &spec.bandwidth_choices[rng.gen_range(0..spec.bandwidth_choices.len())];
            links.push(Link::new(
                &format!("e{k}{dir}"),
                &names[a],
                &names[b],
                delay,
                bw.clone(),
            ));
        }
    }
    Ok(Network::new(names, links))
}

/// Uniform distinct sender/receiver pair drawn from `seed`.
pub fn random_endpoints(net: &Network, seed: u64) -> (String, String) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pick = sample(&mut rng, net.nodes.len(), 2).into_vec();
    (net.nodes[pick[0]].clone(), net.nodes[pick[1]].clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io;

    fn undirected(kind: TopologyKind, seed: u64) -> usize {
        generate(&TopologySpec::new(kind, seed)).unwrap().links.len() / 2
    }

    #[test]
    fn typical_sizes() {
        let net = generate(&TopologySpec::new(TopologyKind::Complete { n: 6 }, 1)).unwrap();
        assert_eq!(net.nodes.len(), 6);
        assert_eq!(net.links.len(), 30);
        assert_eq!(undirected(TopologyKind::Grid { rows: 4, cols: 4 }, 1), 24);
        assert_eq!(undirected(TopologyKind::ErdosRenyi { n: 20, m: 50 }, 7), 50);
    }

    #[test]
    fn watts_strogatz_keeps_edge_count() {
        for seed in 0..5 {
            let n = undirected(TopologyKind::WattsStrogatz { n: 20, k: 3, p: 0.1 }, seed);
            assert_eq!(n, 40);
        }
    }

    #[test]
    fn copying_is_simple_and_connected() {
        let net = generate(&TopologySpec::new(TopologyKind::Copying { n: 20, p: 0.1 }, 3)).unwrap();
        let mut seen = BTreeSet::new();
        for l in &net.links {
            assert_ne!(l.from, l.to);
            assert!(seen.insert((l.from.clone(), l.to.clone())));
        }
        let topo = net.topology().unwrap();
        assert!(topo.delays_from(0).iter().all(Option::is_some));
    }

    #[test]
    fn same_seed_same_bytes() {
        for kind in [
            TopologyKind::Complete { n: 6 },
            TopologyKind::ErdosRenyi { n: 20, m: 50 },
            TopologyKind::WattsStrogatz { n: 20, k: 3, p: 0.1 },
            TopologyKind::Copying { n: 20, p: 0.1 },
        ] {
            let spec = TopologySpec::new(kind, 42);
            let a = io::network_to_json(&generate(&spec).unwrap());
            let b = io::network_to_json(&generate(&spec).unwrap());
            assert_eq!(a, b);
        }
    }

    #[test]
    fn attribute_ranges() {
        let net = generate(&TopologySpec::new(TopologyKind::Grid { rows: 4, cols: 4 }, 9)).unwrap();
        for l in &net.links {
            assert!((1..=5).contains(&l.delay));
            assert!([10, 20, 30, 40, 50].iter().any(|&b| l.bandwidth == int(b)));
        }
    }

    #[test]
    fn bad_parameters() {
        for kind in [
            TopologyKind::Complete { n: 1 },
            TopologyKind::Grid { rows: 1, cols: 4 },
            TopologyKind::ErdosRenyi { n: 4, m: 7 },
            TopologyKind::WattsStrogatz { n: 4, k: 4, p: 0.1 },
            TopologyKind::Copying { n: 5, p: 1.5 },
        ] {
            assert!(generate(&TopologySpec::new(kind, 0)).is_err());
        }
    }
}
