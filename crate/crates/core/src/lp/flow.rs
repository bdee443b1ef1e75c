//! Max-flow program over the expanded network with per-residue link
//! capacities.

use num_traits::{One, Signed, Zero};

use super::{LinearProgram, LpSolution, RowKind};
use crate::error::{Error, Result};
use crate::expander::{ExpKind, ExpLink, ExpandedNetwork, LinkGroup};
use crate::model::Instance;
use crate::rational::Rational;

/// A flow program together with the expanded link behind each variable.
#[derive(Debug, Clone)]
pub struct FlowLp {
    pub lp: LinearProgram,
    pub var_link: Vec<usize>,
    pub bound: i64,
}

/// One variable per expanded link ending at layer `bound` or earlier.
/// Maximizes the outflow of `(s, 0)`, which must equal the inflow of
/// `(r, bound)`; every other node conserves flow and each link group carries
/// at most its bandwidth.
pub fn build_flow_lp(
    exp: &ExpandedNetwork,
    groups: &[LinkGroup],
    inst: &Instance,
    bound: i64,
) -> Result<FlowLp> {
    build(exp, groups, inst, bound, |_| true)
}

/// Same optimum as [`build_flow_lp`] with fewer variables: drops links that
/// no `(s, 0) -> (r, bound)` path can use, judged by shortest delays, and
/// transit copies of zero-bandwidth links.
pub fn build_flow_lp_pruned(
    exp: &ExpandedNetwork,
    groups: &[LinkGroup],
    inst: &Instance,
    bound: i64,
) -> Result<FlowLp> {
    let topo = inst.topology();
    let from_s = topo.delays_from(inst.sender());
    let to_r = topo.delays_to(inst.receiver());
    let usable = |v: usize, w: usize, start: i64, end: i64| match (from_s[v], to_r[w]) {
        (Some(a), Some(b)) => a <= start && end + b <= bound,
        _ => false,
    };
    build(exp, groups, inst, bound, |l: &ExpLink| match l.kind {
        ExpKind::Transit { link, .. } => {
            let arc = &topo.arcs[link];
            arc.bandwidth.is_positive() && usable(arc.from, arc.to, l.tail_layer, l.head_layer)
        }
        ExpKind::Holding { node } => usable(node, node, l.tail_layer, l.head_layer),
    })
}

fn build(
    exp: &ExpandedNetwork,
    groups: &[LinkGroup],
    inst: &Instance,
    bound: i64,
    keep: impl Fn(&ExpLink) -> bool,
) -> Result<FlowLp> {
    let (s, r) = (inst.sender(), inst.receiver());
    if s >= exp.base_nodes || r >= exp.base_nodes {
        return Err(Error::Structural("sender or receiver outside the network".into()));
    }
    if bound < 0 || bound > exp.horizon {
        return Err(Error::InvalidParameter(format!(
            "bound {bound} outside [0, {}]",
            exp.horizon
        )));
    }
    let mut lp = LinearProgram::new();
    let mut var_of = vec![usize::MAX; exp.links.len()];
    let mut var_link = Vec::new();
    for (k, l) in exp.links.iter().enumerate() {
        if l.head_layer > bound || !keep(l) {
            continue;
        }
        let name = match l.kind {
            ExpKind::Transit { link, offset } => format!("t{link}_{offset}"),
            ExpKind::Holding { node } => format!("h{node}_{}", l.tail_layer),
        };
        var_of[k] = lp.add_var(name);
        var_link.push(k);
    }
    let one = Rational::one();
    let var = |k: &usize| (var_of[*k] != usize::MAX).then(|| var_of[*k]);

    let source = exp.node_id(s, 0);
    let sink = exp.node_id(r, bound);
    let out_s: Vec<usize> = exp.out_links(source).iter().filter_map(var).collect();
    let in_r: Vec<usize> = exp.in_links(sink).iter().filter_map(var).collect();
    lp.set_objective(out_s.iter().map(|&j| (j, one.clone())).collect());
    let mut balance: Vec<(usize, Rational)> = out_s.iter().map(|&j| (j, one.clone())).collect();
    balance.extend(in_r.iter().map(|&j| (j, -one.clone())));
    if !balance.is_empty() {
        lp.add_row("balance", balance, RowKind::Eq, Rational::zero());
    }

    for v in 0..exp.base_nodes {
        for layer in 0..=bound {
            let id = exp.node_id(v, layer);
            if id == source || id == sink {
                continue;
            }
            let mut coeffs: Vec<(usize, Rational)> = exp
                .in_links(id)
                .iter()
                .filter_map(var)
                .map(|j| (j, one.clone()))
                .collect();
            coeffs.extend(exp.out_links(id).iter().filter_map(var).map(|j| (j, -one.clone())));
            if !coeffs.is_empty() {
                lp.add_row(format!("node{v}_{layer}"), coeffs, RowKind::Eq, Rational::zero());
            }
        }
    }

    for g in groups {
        let coeffs: Vec<(usize, Rational)> =
            g.members.iter().filter_map(var).map(|j| (j, one.clone())).collect();
        if !coeffs.is_empty() {
            lp.add_row(
                format!("cap{}_{}", g.link, g.residue),
                coeffs,
                RowKind::Le,
                g.bandwidth.clone(),
            );
        }
    }
    Ok(FlowLp { lp, var_link, bound })
}

/// Flow on every expanded link (zero for links without a variable).
pub fn extract_edge_flow(exp: &ExpandedNetwork, flp: &FlowLp, sol: &LpSolution) -> Vec<Rational> {
    let mut flow = vec![Rational::zero(); exp.links.len()];
    for (j, &k) in flp.var_link.iter().enumerate() {
        flow[k] = sol.values[j].clone();
    }
    flow
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expander::{build_from_topology, link_groups};
    use crate::fixtures;
    use crate::lp::{solve_lp, LpStatus};
    use crate::rational::int;

    fn optimum(inst: &Instance, period: i64, bound: i64, pruned: bool) -> Rational {
        let topo = inst.topology();
        let exp = build_from_topology(topo, bound.max(1)).unwrap();
        let groups = link_groups(&exp, topo, period);
        let flp = if pruned {
            build_flow_lp_pruned(&exp, &groups, inst, bound).unwrap()
        } else {
            build_flow_lp(&exp, &groups, inst, bound).unwrap()
        };
        let sol = solve_lp(&flp.lp);
        assert_eq!(sol.status, LpStatus::Optimal);
        sol.objective_value
    }

    #[test]
    fn pair_period_seven() {
        let inst = fixtures::pair();
        for pruned in [false, true] {
            assert!(optimum(&inst, 7, 11, pruned) >= int(10));
            assert_eq!(optimum(&inst, 7, 10, pruned), int(7));
        }
    }

    #[test]
    fn triple_period_two() {
        let inst = fixtures::triple();
        assert!(optimum(&inst, 2, 7, false) >= int(5));
        assert!(optimum(&inst, 2, 6, false) < int(5));
    }

    #[test]
    fn zero_bandwidth_gives_zero() {
        let mut net = fixtures::pair_network();
        for l in &mut net.links {
            l.bandwidth = int(0);
        }
        let inst = Instance::new(net, "s", "r", int(10), int(1), int(1)).unwrap();
        assert_eq!(optimum(&inst, 10, 20, false), int(0));
        assert_eq!(optimum(&inst, 10, 20, true), int(0));
    }

    #[test]
    fn extracted_flow_conserves() {
        let inst = fixtures::pair();
        let topo = inst.topology();
        let exp = build_from_topology(topo, 10).unwrap();
        let groups = link_groups(&exp, topo, 10);
        let flp = build_flow_lp(&exp, &groups, &inst, 10).unwrap();
        let sol = solve_lp(&flp.lp);
        let flow = extract_edge_flow(&exp, &flp, &sol);
        let source = exp.node_id(0, 0);
        let sink = exp.node_id(1, 10);
        for id in 0..exp.node_count() {
            if id == source || id == sink {
                continue;
            }
            let inflow: Rational = exp.in_links(id).iter().map(|&k| &flow[k]).sum();
            let outflow: Rational = exp.out_links(id).iter().map(|&k| &flow[k]).sum();
            assert_eq!(inflow, outflow);
        }
        let total: Rational = exp.out_links(source).iter().map(|&k| &flow[k]).sum();
        assert_eq!(total, sol.objective_value);
        assert!(total >= int(10));
        for g in &groups {
            let load: Rational = g.members.iter().map(|&k| &flow[k]).sum();
            assert!(load <= g.bandwidth);
        }
    }

    #[test]
    fn bound_beyond_horizon_is_rejected() {
        let inst = fixtures::pair();
        let exp = build_from_topology(inst.topology(), 5).unwrap();
        let groups = link_groups(&exp, inst.topology(), 7);
        assert!(build_flow_lp(&exp, &groups, &inst, 6).is_err());
    }
}
