//! Small reference instances with known optimal values, used by tests,
//! benches and the instance files shipped under `instances/`.

use crate::model::{Instance, Link, Network};
use crate::rational::{int, ratio, Rational};

fn two_node(links: &[(&str, i64, Rational)]) -> Network {
    Network::new(
        vec!["s".into(), "r".into()],
        links
            .iter()
            .map(|(id, d, b)| Link::new(id, "s", "r", *d, b.clone()))
            .collect(),
    )
}

/// Two parallel links: `e1` (delay 1, bandwidth 1) and `e2` (delay 11,
/// bandwidth 10).
pub fn pair_network() -> Network {
    two_node(&[("e1", 1, int(1)), ("e2", 11, int(10))])
}

/// [`pair_network`] with `D = 10`, `R_l = 1`, `R_u = 10/7`.
pub fn pair() -> Instance {
    Instance::new(pair_network(), "s", "r", int(10), int(1), ratio(10, 7)).unwrap()
}

/// Three parallel unit-bandwidth links with delays 1, 6 and 7.
pub fn triple_network() -> Network {
    two_node(&[("e1", 1, int(1)), ("e2", 6, int(1)), ("e3", 7, int(1))])
}

/// [`triple_network`] with `D = 5`, `R_l = 1`, `R_u = 5/2`.
pub fn triple() -> Instance {
    Instance::new(triple_network(), "s", "r", int(5), int(1), ratio(5, 2)).unwrap()
}

/// `e1` (delay 1, bandwidth 1) and `e2` (delay `d`, bandwidth 5) with
/// `D = 5`, `R_l = 5/6`, `R_u = 5/3`.
pub fn dip(d: i64) -> Instance {
    let net = two_node(&[("e1", 1, int(1)), ("e2", d, int(5))]);
    Instance::new(net, "s", "r", int(5), ratio(5, 6), ratio(5, 3)).unwrap()
}

/// `s -> a` (delay 2) and `a -> r` (delay 1), unit bandwidths.
pub fn relay_network() -> Network {
    Network::new(
        vec!["s".into(), "a".into(), "r".into()],
        vec![
            Link::new("sa", "s", "a", 2, int(1)),
            Link::new("ar", "a", "r", 1, int(1)),
        ],
    )
}

pub fn single_link(delay: i64, bandwidth: Rational) -> Network {
    two_node(&[("e", delay, bandwidth)])
}

/// Parallel links where minimizing maximum delay is far from minimizing
/// peak AoI: `e1` (delay 1, bandwidth 1) and `e2` (delay `L + 1`, bandwidth
/// `L`) with `L = t_max`, batch `L` and periods `[t_min, t_max]`.
pub fn near_tight_gap(t_min: i64, t_max: i64) -> Instance {
    let l = t_max;
    let net = two_node(&[("e1", 1, int(1)), ("e2", l + 1, int(l))]);
    Instance::with_periods(net, "s", "r", int(l), t_min, t_max).unwrap()
}
