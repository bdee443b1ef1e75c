//! JSON network/instance files and the line-oriented schedule format.
//!
//! Schedule files start with `period=T batch=D` followed by one entry per
//! line: `amount path=v1>v2>...>vk via=l1,...,l(k-1) offsets=u0,...,uk`.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Instance, Link, Network, PeriodicSolution, ScheduleEntry};
use crate::rational::{self, Rational};

#[derive(Debug, Serialize, Deserialize)]
struct LinkRecord {
    id: String,
    from: String,
    to: String,
    delay: i64,
    #[serde(with = "rational::serde_text")]
    bandwidth: Rational,
}

#[derive(Debug, Serialize, Deserialize)]
struct NetworkRecord {
    nodes: Vec<String>,
    links: Vec<LinkRecord>,
}

#[derive(Debug, Serialize, Deserialize)]
struct InstanceRecord {
    #[serde(flatten)]
    network: NetworkRecord,
    sender: String,
    receiver: String,
    #[serde(with = "rational::serde_text")]
    batch: Rational,
    #[serde(with = "rational::serde_text")]
    r_min: Rational,
    #[serde(with = "rational::serde_text")]
    r_max: Rational,
}

impl From<&Network> for NetworkRecord {
    fn from(net: &Network) -> Self {
        NetworkRecord {
            nodes: net.nodes.clone(),
            links: net
                .links
                .iter()
                .map(|l| LinkRecord {
                    id: l.id.clone(),
                    from: l.from.clone(),
                    to: l.to.clone(),
                    delay: l.delay,
                    bandwidth: l.bandwidth.clone(),
                })
                .collect(),
        }
    }
}

impl From<NetworkRecord> for Network {
    fn from(rec: NetworkRecord) -> Self {
        Network::new(
            rec.nodes,
            rec.links
                .into_iter()
                .map(|l| Link::new(&l.id, &l.from, &l.to, l.delay, l.bandwidth))
                .collect(),
        )
    }
}

fn parse_err(e: serde_json::Error) -> Error {
    Error::Parse(e.to_string())
}

pub fn network_to_json(net: &Network) -> String {
    serde_json::to_string_pretty(&NetworkRecord::from(net)).expect("network serializes") + "\n"
}

/// Parses a network without validating it; see
/// [`crate::model::validate_network`].
pub fn network_from_json(text: &str) -> Result<Network> {
    serde_json::from_str::<NetworkRecord>(text)
        .map(Network::from)
        .map_err(parse_err)
}

pub fn instance_to_json(inst: &Instance) -> String {
    let rec = InstanceRecord {
        network: NetworkRecord::from(inst.network()),
        sender: inst.sender_name().to_string(),
        receiver: inst.receiver_name().to_string(),
        batch: inst.batch().clone(),
        r_min: inst.r_min().clone(),
        r_max: inst.r_max().clone(),
    };
    serde_json::to_string_pretty(&rec).expect("instance serializes") + "\n"
}

pub fn instance_from_json(text: &str) -> Result<Instance> {
    let rec: InstanceRecord = serde_json::from_str(text).map_err(parse_err)?;
    Instance::new(
        rec.network.into(),
        &rec.sender,
        &rec.receiver,
        rec.batch,
        rec.r_min,
        rec.r_max,
    )
}

pub fn solution_to_text(inst: &Instance, sol: &PeriodicSolution) -> String {
    let net = inst.network();
    let join = |it: Vec<String>, sep: &str| it.join(sep);
    let mut out = format!(
        "period={} batch={}\n",
        sol.period,
        rational::format(inst.batch())
    );
    for e in &sol.entries {
        out.push_str(&format!(
            "{} path={} via={} offsets={}\n",
            rational::format(&e.amount),
            join(e.nodes.iter().map(|&v| net.nodes[v].clone()).collect(), ">"),
            join(e.links.iter().map(|&l| net.links[l].id.clone()).collect(), ","),
            join(e.offsets.iter().map(i64::to_string).collect(), ","),
        ));
    }
    out
}

/// Parses a schedule against `inst`'s node and link names. The header's
/// batch is informational; throughput is checked by validation.
pub fn solution_from_text(inst: &Instance, text: &str) -> Result<PeriodicSolution> {
    let net = inst.network();
    let mut lines = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'));
    let header = lines
        .next()
        .ok_or_else(|| Error::Parse("empty schedule file".into()))?;
    let mut period = None;
    for field in header.split_whitespace() {
        match field.split_once('=') {
            Some(("period", v)) => {
                period = Some(v.parse::<i64>().map_err(|_| {
                    Error::Parse(format!("bad period `{v}`"))
                })?)
            }
            Some(("batch", v)) => {
                rational::parse(v)?;
            }
            _ => return Err(Error::Parse(format!("unexpected header field `{field}`"))),
        }
    }
    let period = period.ok_or_else(|| Error::Parse("header lacks period=".into()))?;
    let mut entries = Vec::new();
    for line in lines {
        let mut parts = line.split_whitespace();
        let amount = rational::parse(parts.next().unwrap_or(""))?;
        let (mut nodes, mut links, mut offsets) = (None, None, None);
        for field in parts {
            match field.split_once('=') {
                Some(("path", v)) => {
                    nodes = Some(
                        v.split('>')
                            .map(|n| {
                                net.node_index(n).ok_or_else(|| {
                                    Error::Structural(format!("unknown node `{n}`"))
                                })
                            })
                            .collect::<Result<Vec<_>>>()?,
                    )
                }
                Some(("via", v)) => {
                    links = Some(
                        v.split(',')
                            .filter(|s| !s.is_empty())
                            .map(|l| {
                                net.link_index(l).ok_or_else(|| {
                                    Error::Structural(format!("unknown link `{l}`"))
                                })
                            })
                            .collect::<Result<Vec<_>>>()?,
                    )
                }
                Some(("offsets", v)) => {
                    offsets = Some(
                        v.split(',')
                            .map(|u| {
                                u.parse::<i64>()
                                    .map_err(|_| Error::Parse(format!("bad offset `{u}`")))
                            })
                            .collect::<Result<Vec<_>>>()?,
                    )
                }
                _ => return Err(Error::Parse(format!("unexpected field `{field}`"))),
            }
        }
        let missing = |what: &str| Error::Parse(format!("entry lacks {what}= in `{line}`"));
        entries.push(ScheduleEntry {
            nodes: nodes.ok_or_else(|| missing("path"))?,
            links: links.ok_or_else(|| missing("via"))?,
            offsets: offsets.ok_or_else(|| missing("offsets"))?,
            amount,
        });
    }
    Ok(PeriodicSolution { period, entries })
}

pub fn read_instance(path: &Path) -> Result<Instance> {
    instance_from_json(&read(path)?)
}

pub fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

pub fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}
