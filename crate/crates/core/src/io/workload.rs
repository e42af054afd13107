//! Deterministic synthetic people/buildings workload.
//!
//! Interval distribution: starts are uniform over the first half of the
//! horizon and lengths are geometric, so every person and building is alive
//! at the horizon's midpoint and any pair of them can be related. Edge-node
//! elements are drawn inside the intersection of their endpoints.
//!
//! A horizon ending at `Now` is treated as [`OPEN_HORIZON_SPAN`] instants
//! long; elements that reach its end stay open and end at `Now`.

use std::collections::{BTreeMap, HashSet};

use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Geometric};
use thiserror::Error;

use crate::model::{Node, NodeKind, StructuralEdge, TemporalGraph};
use crate::temporal::{Instant, Interval, IntervalEnd, TemporalElement};

pub const OPEN_HORIZON_SPAN: Instant = 36;

const FIRST_NAMES: &[&str] = &[
    "Mary", "James", "Linda", "Robert", "Ana", "Peter", "Laura", "John", "Sofia", "David", "Emma",
    "Lucas", "Julia", "Martin", "Clara", "Pablo", "Irene", "Tomas", "Elena", "Diego",
];
const LAST_NAMES: &[&str] = &[
    "Smith", "Garcia", "Brown", "Lopez", "Miller", "Perez", "Wilson", "Gomez", "Taylor", "Diaz",
    "Moore", "Romero", "Clark", "Sosa", "Lewis", "Alvarez", "Walker", "Ruiz", "Young", "Torres",
];
const STREETS: &[&str] = &[
    "Street Av.", "Main St.", "Corrientes", "Santa Fe", "Oak Rd.", "Libertador", "Elm St.",
    "Cabildo", "Mitre", "Park Ln.",
];
const BUILDING_TYPES: &[&str] = &["apartment", "house", "office", "duplex"];

pub const SPECIAL_PERSON: &str = "John Smith";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WorkloadConfig {
    pub seed: u64,
    pub persons: usize,
    pub buildings: usize,
    pub friendships: usize,
    pub lived_in: usize,
    pub horizon: Interval,
}

impl Default for WorkloadConfig {
    fn default() -> Self {
        WorkloadConfig {
            seed: 1,
            persons: 1000,
            buildings: 100,
            friendships: 2500,
            lived_in: 500,
            horizon: Interval::until_now(1980),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WorkloadError {
    #[error("infeasible counts: {0}")]
    InfeasibleCounts(String),
}

struct Horizon {
    first: Instant,
    last: Instant,
    open: bool,
}

impl Horizon {
    fn mid(&self) -> Instant {
        self.first + (self.last - self.first) / 2
    }

    fn close(&self, end: Instant) -> IntervalEnd {
        if end >= self.last {
            if self.open {
                IntervalEnd::Now
            } else {
                IntervalEnd::At(self.last)
            }
        } else {
            IntervalEnd::At(end)
        }
    }
}

struct Generator {
    rng: ChaCha8Rng,
    horizon: Horizon,
    long: Geometric,
    short: Geometric,
    nodes: Vec<Node>,
    edges: Vec<StructuralEdge>,
}

impl Generator {
    fn next_id(&self) -> u64 {
        self.nodes.len() as u64 + 1
    }

    fn add(&mut self, kind: NodeKind, name: impl Into<String>, element: TemporalElement) -> u64 {
        let id = self.next_id();
        self.nodes.push(Node::new(id, kind, name, element));
        id
    }

    fn link(&mut self, from: u64, to: u64) {
        self.edges.push(StructuralEdge::new(from, to));
    }

    /// An entity lifetime that always covers the horizon midpoint.
    fn lifetime(&mut self) -> Interval {
        let mid = self.horizon.mid();
        let start = self.rng.random_range(self.horizon.first..=mid);
        let len = self.long.sample(&mut self.rng) as Instant;
        let end = (start + len).max(mid);
        Interval::new(start, self.horizon.close(end)).expect("start <= mid <= end")
    }

    /// A sub-interval of `outer`, which must contain the horizon midpoint.
    fn within(&mut self, outer: Interval) -> Interval {
        let mid = self.horizon.mid();
        let start = self.rng.random_range(outer.start()..=mid);
        let len = self.short.sample(&mut self.rng) as Instant;
        let end = self.horizon.close(start + len).min(outer.end());
        Interval::new(start, end).expect("start <= mid <= outer end")
    }

    fn attribute<I>(&mut self, owner: u64, name: &str, element: &TemporalElement, values: I)
    where
        I: IntoIterator<Item = (String, Interval)>,
    {
        let attr = self.add(NodeKind::Attribute, name, element.clone());
        self.link(owner, attr);
        let mut coalesced: BTreeMap<String, Vec<Interval>> = BTreeMap::new();
        let mut order = Vec::new();
        for (value, iv) in values {
            let slot = coalesced.entry(value.clone()).or_default();
            if slot.is_empty() {
                order.push(value);
            }
            slot.push(iv);
        }
        for value in order {
            let element = TemporalElement::normalize(coalesced.remove(&value).unwrap_or_default());
            let v = self.add(NodeKind::Value, value, element);
            self.link(attr, v);
        }
    }

    /// Splits `iv` into up to three consecutive segments.
    fn segments(&mut self, iv: Interval) -> Vec<Interval> {
        let last = match iv.end() {
            IntervalEnd::At(e) => e,
            IntervalEnd::Now => self.horizon.last,
        };
        let pieces = self.rng.random_range(1..=3usize);
        let mut cuts: Vec<Instant> = (1..pieces)
            .filter_map(|_| (iv.start() < last).then(|| self.rng.random_range(iv.start() + 1..=last)))
            .collect();
        cuts.sort();
        cuts.dedup();
        let mut out = Vec::new();
        let mut start = iv.start();
        for c in cuts {
            out.push(Interval::closed(start, c - 1).expect("cut after start"));
            start = c;
        }
        out.push(Interval::new(start, iv.end()).expect("last segment"));
        out
    }
}

fn person_name(rng: &mut ChaCha8Rng) -> String {
    loop {
        let first = FIRST_NAMES.choose(rng).expect("non-empty");
        let last = LAST_NAMES.choose(rng).expect("non-empty");
        let name = format!("{first} {last}");
        if name != SPECIAL_PERSON {
            return name;
        }
    }
}

/// `count` distinct items out of `0..total`, with `must` placed first.
fn sample_pairs<T: Copy + Eq + std::hash::Hash>(
    rng: &mut ChaCha8Rng,
    count: usize,
    total: usize,
    all: impl Fn() -> Vec<T>,
    draw: impl Fn(&mut ChaCha8Rng) -> Option<T>,
    must: Vec<T>,
) -> Vec<T> {
    let mut seen: HashSet<T> = HashSet::new();
    let mut out: Vec<T> = Vec::with_capacity(count);
    for p in must.into_iter().take(count) {
        if seen.insert(p) {
            out.push(p);
        }
    }
    if count * 2 > total {
        let mut every = all();
        every.shuffle(rng);
        out.extend(every.into_iter().filter(|p| !seen.contains(p)).take(count - out.len()));
        return out;
    }
    while out.len() < count {
        if let Some(p) = draw(rng) {
            if seen.insert(p) {
                out.push(p);
            }
        }
    }
    out
}

/// Generates the people/buildings workload; the same config always yields
/// the same graph.
pub fn generate_workload(cfg: &WorkloadConfig) -> Result<TemporalGraph, WorkloadError> {
    let pair_capacity = cfg.persons.saturating_mul(cfg.persons.saturating_sub(1)) / 2;
    if cfg.friendships > pair_capacity {
        return Err(WorkloadError::InfeasibleCounts(format!(
            "{} friendships need more than {} persons allow ({pair_capacity} pairs)",
            cfg.friendships, cfg.persons
        )));
    }
    let lived_capacity = cfg.persons.saturating_mul(cfg.buildings);
    if cfg.lived_in > lived_capacity {
        return Err(WorkloadError::InfeasibleCounts(format!(
            "{} lived-in relationships exceed {} person/building pairs",
            cfg.lived_in, lived_capacity
        )));
    }
    let first = cfg.horizon.start();
    let (last, open) = match cfg.horizon.end() {
        IntervalEnd::At(e) => (e, false),
        IntervalEnd::Now => (first + OPEN_HORIZON_SPAN, true),
    };
    let span = (last - first).max(1) as f64;
    let mut g = Generator {
        rng: ChaCha8Rng::seed_from_u64(cfg.seed),
        horizon: Horizon { first, last, open },
        long: Geometric::new((2.0 / span).min(1.0)).expect("valid probability"),
        short: Geometric::new((5.0 / span).min(1.0)).expect("valid probability"),
        nodes: Vec::new(),
        edges: Vec::new(),
    };

    let mut persons: Vec<(u64, Interval)> = Vec::with_capacity(cfg.persons);
    for i in 0..cfg.persons {
        let (life, name) = if i == 0 {
            (cfg.horizon, SPECIAL_PERSON.to_string())
        } else {
            (g.lifetime(), person_name(&mut g.rng))
        };
        let element = TemporalElement::single(life);
        let id = g.add(NodeKind::Object, "Person", element.clone());
        g.attribute(id, "Name", &element, [(name, life)]);
        persons.push((id, life));
    }

    let mut buildings: Vec<(u64, Interval)> = Vec::with_capacity(cfg.buildings);
    for _ in 0..cfg.buildings {
        let life = g.lifetime();
        let element = TemporalElement::single(life);
        let id = g.add(NodeKind::Object, "Building", element.clone());
        let number = g.rng.random_range(1..=999);
        let segments = g.segments(life);
        let mut streets: Vec<String> = Vec::new();
        for (k, _) in segments.iter().enumerate() {
            let name = if k == 2 && g.rng.random_bool(0.5) {
                streets[0].clone()
            } else {
                loop {
                    let s = format!("{number} {}", STREETS.choose(&mut g.rng).expect("non-empty"));
                    if streets.last() != Some(&s) {
                        break s;
                    }
                }
            };
            streets.push(name);
        }
        g.attribute(id, "Street", &element, streets.into_iter().zip(segments));
        let kind = BUILDING_TYPES.choose(&mut g.rng).expect("non-empty").to_string();
        g.attribute(id, "Type", &element, [(kind, life)]);
        let bedrooms = g.rng.random_range(1..=5).to_string();
        g.attribute(id, "Bedrooms", &element, [(bedrooms, life)]);
        buildings.push((id, life));
    }

    let np = cfg.persons;
    let friend_pairs = sample_pairs(
        &mut g.rng,
        cfg.friendships,
        pair_capacity,
        || {
            (0..np)
                .flat_map(|a| (a + 1..np).map(move |b| (a, b)))
                .collect()
        },
        |rng| {
            let a = rng.random_range(0..np);
            let b = rng.random_range(0..np);
            (a != b).then(|| (a.min(b), a.max(b)))
        },
        (1..np.min(4)).map(|b| (0, b)).collect(),
    );
    for (a, b) in friend_pairs {
        let (a, b) = if g.rng.random_bool(0.5) { (a, b) } else { (b, a) };
        let (pa, pb) = (persons[a], persons[b]);
        let shared = TemporalElement::single(pa.1).intersect(&TemporalElement::single(pb.1));
        let outer = shared.intervals()[0];
        let element = TemporalElement::single(g.within(outer));
        let e = g.add(NodeKind::Edge, "Friend", element);
        g.link(pa.0, e);
        g.link(e, pb.0);
    }

    let nb = cfg.buildings;
    let lived_pairs = sample_pairs(
        &mut g.rng,
        cfg.lived_in,
        lived_capacity,
        || {
            (0..np)
                .flat_map(|p| (0..nb).map(move |b| (p, b)))
                .collect()
        },
        |rng| Some((rng.random_range(0..np), rng.random_range(0..nb))),
        (0..nb.min(3)).map(|b| (0, b)).collect(),
    );
    for (p, b) in lived_pairs {
        let (pp, bb) = (persons[p], buildings[b]);
        let shared = TemporalElement::single(pp.1).intersect(&TemporalElement::single(bb.1));
        let outer = shared.intervals()[0];
        let element = TemporalElement::single(g.within(outer));
        let e = g.add(NodeKind::Edge, "LivedIn", element);
        g.link(pp.0, e);
        g.link(e, bb.0);
    }

    let mut b = TemporalGraph::builder(format!("workload-{}", cfg.seed));
    for n in g.nodes {
        b.push_node(n);
    }
    for e in g.edges {
        b.push_edge(e);
    }
    Ok(b.build().expect("generated graph is well-formed"))
}
