//! Seeded random instances shared by the integration tests.

#![allow(dead_code)]

use aoi_core::experiments::batch_capacity;
use aoi_core::rational::{int, ratio};
use aoi_core::{Instance, Link, Network};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Up to six nodes, delays in `1..=5`, bandwidths `p/q` with `q <= 3`
/// (occasionally zero). Sender `n0`, receiver the last node. Most instances
/// carry a backbone path so that some periods are feasible; the batch is
/// the per-slot capacity times the smallest period, scaled down at times.
pub fn random_instance(seed: u64) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(2..=6usize);
    let nodes: Vec<String> = (0..n).map(|i| format!("n{i}")).collect();
    let mut links = Vec::new();
    let add = |rng: &mut ChaCha8Rng, u: usize, v: usize, links: &mut Vec<Link>| {
        let delay = rng.gen_range(1..=5);
        let bw = if rng.gen_bool(0.1) {
            int(0)
        } else {
            ratio(rng.gen_range(1..=6), rng.gen_range(1..=3))
        };
        let id = format!("l{}", links.len());
        links.push(Link::new(&id, &nodes[u], &nodes[v], delay, bw));
    };
    if rng.gen_bool(0.9) {
        let mut at = 0;
        while at != n - 1 {
            let next = rng.gen_range(at + 1..n);
            add(&mut rng, at, next, &mut links);
            at = next;
        }
    }
    let extra = rng.gen_range(0..=n + 2);
    for _ in 0..extra {
        let u = rng.gen_range(0..n);
        let mut v = rng.gen_range(0..n - 1);
        if v >= u {
            v += 1;
        }
        add(&mut rng, u, v, &mut links);
    }
    let net = Network::new(nodes.clone(), links);
    let t_min = rng.gen_range(1..=3);
    let t_max = t_min + rng.gen_range(0..=3);
    let cap = batch_capacity(&net, "n0", &nodes[n - 1]).unwrap();
    let scale = [int(1), int(1), ratio(1, 2), ratio(3, 4)][rng.gen_range(0..4)].clone();
    let batch = if cap == int(0) { int(1) } else { cap * int(t_min) * scale };
    Instance::with_periods(net, "n0", &nodes[n - 1], batch, t_min, t_max).unwrap()
}

pub fn corpus(count: usize) -> Vec<Instance> {
    (0..count as u64).map(|s| random_instance(1000 + s)).collect()
}
