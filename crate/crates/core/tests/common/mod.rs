#![allow(dead_code)]
//! Shared helpers for the integration suites: random graphs, a brute-force
//! reference evaluator, query corpora and an AST fuzzer.

use std::collections::BTreeSet;

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use tgraph_core::model::{element, validate, Node, NodeId, NodeKind, StructuralEdge, TemporalGraph, Value};
use tgraph_core::query::{
    Bounds, CompareOp, Comparison, Condition, Direction, EdgeStep, Hop, Literal, NodeStep,
    PathPattern, Projection, Query, Select, TemporalModifier,
};
use tgraph_core::temporal::{Instant, Interval, IntervalEnd, TemporalElement};

pub const HORIZON_END: Instant = 20;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

// ---------------------------------------------------------------- corpora

/// The ten example queries, verbatim apart from whitespace.
pub const CORPUS_QUERIES: [&str; 10] = [
    "SELECT Building\nFROM Person-LivedIn->Building\nWHERE Person.Name = 'John Smith'",
    "SELECT Person-LivedIn->Building\nFROM Person-LivedIn->Building\nWHERE Person.Name = 'John Smith'",
    "SELECT Person-LivedIn->Building(Street)\nFROM Person-LivedIn->Building\nWHERE Person.Name = 'John Smith'",
    "SELECT Person-Friend->P2\nFROM Person-Friend->Person as P2\nWHERE Person.Name = 'John Smith'",
    "SELECT *\nFROM Person-LivedIn->Building,\n     Person as P2-Friend->Person as P3\nWHERE Person.Name = 'John Smith'\n      and P2.Name= 'John Smith'",
    "SELECT *\nFROM Person as P2<-Friend-Person-LivedIn->Building\nWHERE Person.Name = 'John Smith'",
    "SELECT *\nFROM Person-Friend[1..3]->Person\nWHERE Person.Name = 'John Smith'",
    "SELECT Person-LivedIn->Building\nFROM Person-LivedIn->Building\nWHERE Person.Name = 'John Smith'\nSNAPSHOT 1990",
    "SELECT *\nFROM Person-LivedIn->Building\nWHERE Person.Name = 'John Smith'\nIN [1986-1989]",
    "SELECT *\nFROM Person-LivedIn->Building",
];

/// The example queries in evaluable form: the unaliased variable-length
/// query names its second step.
pub fn workload_queries() -> Vec<String> {
    CORPUS_QUERIES
        .iter()
        .map(|q| q.replace("Person-Friend[1..3]->Person\n", "Person-Friend[1..3]->Person as P2\n"))
        .collect()
}

pub const ORACLE_QUERIES: [&str; 12] = [
    "SELECT P FROM Person as P WHERE P.Name = 'John Smith'",
    "SELECT Building FROM Person-LivedIn->Building WHERE Person.Name = 'John Smith'",
    "SELECT Person-LivedIn->Building FROM Person-LivedIn->Building WHERE Person.Age >= 30",
    "SELECT Person-LivedIn->Building(Street) FROM Person-LivedIn->Building WHERE Person.Name <> 'Bob'",
    "SELECT Person(*) FROM Person WHERE Person.Age < 40 OR Person.Name = 'Ann'",
    "SELECT * FROM Person-LivedIn->Building, Person as P2-Friend->Person as P3 WHERE Person.Name = 'John Smith' and P2.Name = 'John Smith'",
    "SELECT * FROM Person as P-LivedIn->Building, Person as P-Friend->Person as Q WHERE Q.Name = 'Ann'",
    "SELECT * FROM Person as P2<-Friend-Person-LivedIn->Building WHERE Person.Name = 'John Smith'",
    "SELECT * FROM Person-Friend[1..3]->Person as P2 WHERE Person.Name = 'John Smith'",
    "SELECT Person-LivedIn->Building FROM Person-LivedIn->Building WHERE Person.Name = 'John Smith' SNAPSHOT 12",
    "SELECT * FROM Person-LivedIn->Building WHERE Person.Name = 'John Smith' IN [5-9]",
    "SELECT P-Friend->Q(Name) FROM Person as P-Friend[1..2]->Person as Q WHERE P.Age > 20 SNAPSHOT NOW",
];

// ---------------------------------------------------------- random graphs

fn random_interval(r: &mut ChaCha8Rng, lo: Instant) -> Interval {
    let s = r.random_range(lo..=HORIZON_END);
    if r.random_bool(0.3) {
        Interval::until_now(s)
    } else {
        Interval::closed(s, r.random_range(s..=HORIZON_END)).unwrap()
    }
}

fn random_element(r: &mut ChaCha8Rng) -> TemporalElement {
    let first = random_interval(r, 0);
    if r.random_bool(0.3) {
        TemporalElement::normalize([first, random_interval(r, 0)])
    } else {
        TemporalElement::single(first)
    }
}

/// A random non-empty sub-element of a non-empty `e`.
pub fn sub_element(r: &mut ChaCha8Rng, e: &TemporalElement) -> TemporalElement {
    let mut parts = Vec::new();
    for iv in e.intervals() {
        if !r.random_bool(0.75) {
            continue;
        }
        let hi = iv.end().fixed().unwrap_or(HORIZON_END.max(iv.start()));
        let s = r.random_range(iv.start()..=hi);
        let end = if iv.end() == IntervalEnd::Now && r.random_bool(0.5) {
            IntervalEnd::Now
        } else {
            IntervalEnd::At(r.random_range(s..=hi))
        };
        parts.push(Interval::new(s, end).unwrap());
    }
    if parts.is_empty() {
        e.clone()
    } else {
        TemporalElement::normalize(parts)
    }
}

struct Gen {
    r: ChaCha8Rng,
    nodes: Vec<Node>,
    edges: Vec<StructuralEdge>,
    next: u64,
}

impl Gen {
    fn add(&mut self, kind: NodeKind, name: &str, e: TemporalElement) -> u64 {
        let id = self.next;
        self.next += 1;
        self.nodes.push(Node::new(id, kind, name, e));
        id
    }

    fn link(&mut self, a: u64, b: u64) {
        self.edges.push(StructuralEdge::new(a, b));
    }

    /// An attribute on `owner` with one or two distinct values that never
    /// overlap in time.
    fn attribute(&mut self, owner: u64, owner_e: &TemporalElement, name: &str, pool: &[Value]) {
        let ae = sub_element(&mut self.r, owner_e);
        let a = self.add(NodeKind::Attribute, name, ae.clone());
        self.link(owner, a);
        let mut picks: Vec<Value> = pool.choose_multiple(&mut self.r, 2).cloned().collect();
        let pieces = if self.r.random_bool(0.5) {
            let t = self.r.random_range(0..=HORIZON_END);
            vec![
                ae.intersect(&TemporalElement::single(Interval::closed(Instant::MIN, t).unwrap())),
                ae.intersect(&TemporalElement::single(Interval::until_now(t + 1))),
            ]
        } else {
            picks.truncate(1);
            vec![ae.clone()]
        };
        for (piece, value) in pieces.into_iter().zip(picks) {
            if piece.is_empty() {
                continue;
            }
            let ve = sub_element(&mut self.r, &piece);
            let v = self.add(NodeKind::Value, &value.to_string(), ve);
            self.link(a, v);
        }
    }
}

/// A valid graph of persons and buildings with at most `max_nodes` nodes.
///
/// Persons carry `Name` and usually `Age`; buildings carry `Street`;
/// friendships sometimes carry `Since`. Person ids start at 1 and the first
/// person always has an `Age`.
pub fn random_graph(seed: u64, max_nodes: usize) -> TemporalGraph {
    let mut g = Gen {
        r: rng(seed),
        nodes: Vec::new(),
        edges: Vec::new(),
        next: 1,
    };
    let names: Vec<Value> = ["John Smith", "Ann", "Bob", "O'Hara"]
        .iter()
        .map(|s| Value::Str(s.to_string()))
        .collect();
    let ages: Vec<Value> = [18, 25, 30, 41, 57].iter().map(|i| Value::Int(*i)).collect();
    let streets: Vec<Value> = ["Main St.", "25 Street Av.", "7"]
        .iter()
        .map(|s| Value::from_text(s))
        .collect();

    let persons = g.r.random_range(2..=4);
    let buildings = g.r.random_range(1..=2);
    let mut people = Vec::new();
    for i in 0..persons {
        if g.nodes.len() + 7 > max_nodes {
            break;
        }
        let e = random_element(&mut g.r);
        let p = g.add(NodeKind::Object, "Person", e.clone());
        g.attribute(p, &e, "Name", &names);
        if i == 0 || g.r.random_bool(0.7) {
            g.attribute(p, &e, "Age", &ages);
        }
        people.push((p, e));
    }
    let mut places = Vec::new();
    for _ in 0..buildings {
        if g.nodes.len() + 4 > max_nodes {
            break;
        }
        let e = random_element(&mut g.r);
        let b = g.add(NodeKind::Object, "Building", e.clone());
        g.attribute(b, &e, "Street", &streets);
        places.push((b, e));
    }
    let years: Vec<Value> = (1..4).map(Value::Int).collect();
    let relations = g.r.random_range(2..=10);
    for _ in 0..relations {
        if g.nodes.len() + 3 > max_nodes {
            break;
        }
        let lived = !places.is_empty() && g.r.random_bool(0.4);
        let (a, ae) = people.choose(&mut g.r).unwrap().clone();
        let (b, be) = if lived {
            places.choose(&mut g.r).unwrap().clone()
        } else {
            people.choose(&mut g.r).unwrap().clone()
        };
        if a == b {
            continue;
        }
        let common = ae.intersect(&be);
        if common.is_empty() {
            continue;
        }
        let ee = sub_element(&mut g.r, &common);
        let label = if lived { "LivedIn" } else { "Friend" };
        let e = g.add(NodeKind::Edge, label, ee.clone());
        if lived || g.r.random_bool(0.5) {
            g.link(a, e);
            g.link(e, b);
        } else {
            g.link(b, e);
            g.link(e, a);
        }
        if !lived && g.nodes.len() + 2 <= max_nodes && g.r.random_bool(0.3) {
            g.attribute(e, &ee, "Since", &years);
        }
    }
    let mut b = TemporalGraph::builder(format!("random-{seed}"));
    for n in g.nodes {
        b.push_node(n);
    }
    for e in g.edges {
        b.push_edge(e);
    }
    let graph = b.build().expect("generator emits well-formed graphs");
    assert!(validate(&graph).is_empty(), "generator emitted an invalid graph");
    assert!(graph.node_count() <= max_nodes);
    graph
}

// ------------------------------------------------------ reference evaluator

pub type NodeSet = BTreeSet<NodeId>;
pub type EdgeSet = BTreeSet<(NodeId, NodeId)>;

/// Brute-force evaluation by exhaustive enumeration over the node and edge
/// lists, with its own alias handling. Only unambiguous queries are
/// supported.
pub mod oracle {
    use super::*;

    struct Var {
        name: String,
        explicit: bool,
    }

    fn admits(w: Option<TemporalModifier>, e: &TemporalElement, now: Instant) -> bool {
        let holds_at = |t: Instant| {
            e.intervals()
                .iter()
                .any(|iv| iv.start() <= t && t <= iv.end().resolve(now))
        };
        match w {
            None => true,
            Some(TemporalModifier::Snapshot(t)) => holds_at(t.resolve(now)),
            Some(TemporalModifier::In(iv)) => (iv.start()..=iv.end().resolve(now)).any(holds_at),
        }
    }

    fn stored(g: &TemporalGraph, a: NodeId, b: NodeId) -> bool {
        g.edges().iter().any(|e| e.from == a && e.to == b)
    }

    /// One row: node-step ids and, per hop, the physical nodes strictly
    /// between the two node steps.
    #[derive(Clone)]
    struct Row {
        steps: Vec<NodeId>,
        inner: Vec<Vec<NodeId>>,
    }

    fn expansions(
        g: &TemporalGraph,
        from: NodeId,
        edge: &EdgeStep,
        target: &str,
        ok: &dyn Fn(&Node) -> bool,
    ) -> Vec<(Vec<NodeId>, NodeId)> {
        let (min, max) = edge.bounds.map_or((1, 1), |b| (b.min as usize, b.max as usize));
        let objects: Vec<&Node> = g
            .nodes()
            .iter()
            .filter(|n| n.kind == NodeKind::Object && n.name == target && ok(n))
            .collect();
        let edges: Vec<&Node> = g
            .nodes()
            .iter()
            .filter(|n| n.kind == NodeKind::Edge && n.name == edge.label && ok(n))
            .collect();
        let step_ok = |a: NodeId, e: NodeId, b: NodeId| match edge.direction {
            Direction::Forward => stored(g, a, e) && stored(g, e, b),
            Direction::Backward => stored(g, b, e) && stored(g, e, a),
        };
        // enumerate sequences of distinct objects, then edge choices
        let mut out = Vec::new();
        let mut stack: Vec<(Vec<NodeId>, Vec<NodeId>)> = vec![(vec![from], Vec::new())];
        while let Some((objs, physical)) = stack.pop() {
            let depth = objs.len() - 1;
            if depth >= min && depth >= 1 {
                let inner = physical[..physical.len() - 1].to_vec();
                out.push((inner, *objs.last().unwrap()));
            }
            if depth == max {
                continue;
            }
            let at = *objs.last().unwrap();
            for o in &objects {
                if objs.contains(&o.id) {
                    continue;
                }
                for e in &edges {
                    if step_ok(at, e.id, o.id) {
                        let mut objs2 = objs.clone();
                        objs2.push(o.id);
                        let mut phys2 = physical.clone();
                        phys2.push(e.id);
                        phys2.push(o.id);
                        stack.push((objs2, phys2));
                    }
                }
            }
        }
        out
    }

    fn path_rows(g: &TemporalGraph, p: &PathPattern, ok: &dyn Fn(&Node) -> bool) -> Vec<Row> {
        let mut rows: Vec<Row> = g
            .nodes()
            .iter()
            .filter(|n| n.kind == NodeKind::Object && n.name == p.start.label && ok(n))
            .map(|n| Row {
                steps: vec![n.id],
                inner: Vec::new(),
            })
            .collect();
        for hop in &p.hops {
            let mut next = Vec::new();
            for r in &rows {
                for (inner, end) in expansions(g, *r.steps.last().unwrap(), &hop.edge, &hop.node.label, ok) {
                    let mut r2 = r.clone();
                    r2.steps.push(end);
                    r2.inner.push(inner);
                    next.push(r2);
                }
            }
            rows = next;
        }
        rows
    }

    fn values(
        g: &TemporalGraph,
        owner: NodeId,
        attr: &str,
        w: Option<TemporalModifier>,
        now: Instant,
    ) -> Vec<Value> {
        let mut out = Vec::new();
        for a in g.nodes().iter().filter(|n| n.kind == NodeKind::Attribute && n.name == attr) {
            if !(stored(g, owner, a.id) || stored(g, a.id, owner)) {
                continue;
            }
            for v in g.nodes().iter().filter(|n| n.kind == NodeKind::Value) {
                if (stored(g, a.id, v.id) || stored(g, v.id, a.id)) && admits(w, &v.interval, now) {
                    out.push(Value::from_text(&v.name));
                }
            }
        }
        out
    }

    fn test(v: &Value, op: CompareOp, lit: &Literal) -> bool {
        use std::cmp::Ordering::*;
        let ord = match (v, lit) {
            (Value::Int(a), Literal::Int(b)) => a.cmp(b),
            (Value::Str(a), Literal::Str(b)) => a.cmp(b),
            _ => return op == CompareOp::Ne,
        };
        match op {
            CompareOp::Eq => ord == Equal,
            CompareOp::Ne => ord != Equal,
            CompareOp::Lt => ord == Less,
            CompareOp::Le => ord != Greater,
            CompareOp::Gt => ord == Greater,
            CompareOp::Ge => ord != Less,
        }
    }

    pub fn evaluate(g: &TemporalGraph, q: &Query, now: Instant) -> (NodeSet, EdgeSet) {
        let w = q.temporal;
        // variables: explicit aliases are shared, unaliased steps are not
        let mut vars: Vec<Var> = Vec::new();
        let mut var_of: Vec<Vec<usize>> = Vec::new();
        for p in &q.from {
            let mut ids = Vec::new();
            for s in p.nodes() {
                let id = match &s.alias {
                    Some(a) => match vars.iter().position(|v| v.explicit && &v.name == a) {
                        Some(i) => i,
                        None => {
                            vars.push(Var { name: a.clone(), explicit: true });
                            vars.len() - 1
                        }
                    },
                    None => {
                        vars.push(Var { name: s.label.clone(), explicit: false });
                        vars.len() - 1
                    }
                };
                ids.push(id);
            }
            var_of.push(ids);
        }
        let lookup = |name: &str| {
            let hits: Vec<usize> = (0..vars.len()).filter(|&i| vars[i].name == name).collect();
            assert_eq!(hits.len(), 1, "reference `{name}` must be unambiguous");
            hits[0]
        };

        let ok = |n: &Node| admits(w, &n.interval, now);
        let per_path: Vec<Vec<Row>> = q.from.iter().map(|p| path_rows(g, p, &ok)).collect();

        // cartesian product, then alias equality
        let mut combos: Vec<Vec<usize>> = vec![vec![]];
        for rows in &per_path {
            combos = combos
                .into_iter()
                .flat_map(|c| {
                    (0..rows.len()).map(move |i| {
                        let mut c2 = c.clone();
                        c2.push(i);
                        c2
                    })
                })
                .collect();
        }
        let binding = |c: &[usize], var: usize| -> Option<NodeId> {
            for (p, ids) in var_of.iter().enumerate() {
                for (s, v) in ids.iter().enumerate() {
                    if *v == var {
                        return Some(per_path[p][c[p]].steps[s]);
                    }
                }
            }
            None
        };
        let consistent = |c: &[usize]| {
            var_of.iter().enumerate().all(|(p, ids)| {
                ids.iter()
                    .enumerate()
                    .all(|(s, v)| binding(c, *v) == Some(per_path[p][c[p]].steps[s]))
            })
        };
        fn holds(
            cond: &Condition,
            bind: &dyn Fn(&str) -> NodeId,
            vals: &dyn Fn(NodeId, &str) -> Vec<Value>,
        ) -> bool {
            match cond {
                Condition::Or(cs) => cs.iter().any(|c| holds(c, bind, vals)),
                Condition::And(cs) => cs.iter().all(|c| holds(c, bind, vals)),
                Condition::Compare(c) => vals(bind(&c.subject), &c.attribute)
                    .iter()
                    .any(|v| test(v, c.op, &c.literal)),
            }
        }
        let survivors: Vec<Vec<usize>> = combos
            .into_iter()
            .filter(|c| consistent(c))
            .filter(|c| match &q.condition {
                None => true,
                Some(cond) => holds(
                    cond,
                    &|name| binding(c, lookup(name)).unwrap(),
                    &|n, a| values(g, n, a, w, now),
                ),
            })
            .collect();

        let mut nodes = NodeSet::new();
        let mut edges = EdgeSet::new();
        let chain = |seq: &[NodeId], nodes: &mut NodeSet, edges: &mut EdgeSet| {
            nodes.extend(seq.iter().copied());
            for pair in seq.windows(2) {
                for (a, b) in [(pair[0], pair[1]), (pair[1], pair[0])] {
                    if stored(g, a, b) {
                        edges.insert((a, b));
                    }
                }
            }
        };
        let attrs = |owner: NodeId, only: Option<&[String]>, nodes: &mut NodeSet, edges: &mut EdgeSet| {
            nodes.insert(owner);
            for a in g.nodes().iter().filter(|n| n.kind == NodeKind::Attribute) {
                if only.is_some_and(|o| !o.contains(&a.name)) || !admits(w, &a.interval, now) {
                    continue;
                }
                let link = if stored(g, owner, a.id) {
                    (owner, a.id)
                } else if stored(g, a.id, owner) {
                    (a.id, owner)
                } else {
                    continue;
                };
                nodes.insert(a.id);
                edges.insert(link);
                for v in g.nodes().iter().filter(|n| n.kind == NodeKind::Value) {
                    if !admits(w, &v.interval, now) {
                        continue;
                    }
                    for l in [(a.id, v.id), (v.id, a.id)] {
                        if stored(g, l.0, l.1) {
                            nodes.insert(v.id);
                            edges.insert(l);
                        }
                    }
                }
            }
        };
        let full_sequence = |r: &Row| {
            let mut seq = vec![r.steps[0]];
            for (h, inner) in r.inner.iter().enumerate() {
                seq.extend(inner.iter().copied());
                seq.push(r.steps[h + 1]);
            }
            seq
        };
        for c in &survivors {
            match &q.select {
                Select::Star => {
                    for (p, rows) in per_path.iter().enumerate() {
                        let seq = full_sequence(&rows[c[p]]);
                        chain(&seq, &mut nodes, &mut edges);
                        for n in seq {
                            attrs(n, None, &mut nodes, &mut edges);
                        }
                    }
                }
                Select::Paths(paths) => {
                    for sp in paths {
                        let sel: Vec<usize> = sp.nodes().map(|s| lookup(s.name())).collect();
                        for (s, step) in sp.nodes().enumerate() {
                            let n = binding(c, sel[s]).unwrap();
                            nodes.insert(n);
                            match &step.projection {
                                None => {}
                                Some(Projection::All) => attrs(n, None, &mut nodes, &mut edges),
                                Some(Projection::Attributes(list)) => {
                                    attrs(n, Some(list), &mut nodes, &mut edges)
                                }
                            }
                        }
                        for (h, hop) in sp.hops.iter().enumerate() {
                            let (a, b) = (sel[h], sel[h + 1]);
                            for (p, fp) in q.from.iter().enumerate() {
                                for (fh, fhop) in fp.hops.iter().enumerate() {
                                    let (x, y) = (var_of[p][fh], var_of[p][fh + 1]);
                                    let d = hop.edge.direction;
                                    let same = x == a && y == b && fhop.edge.direction == d;
                                    let flip = x == b && y == a && fhop.edge.direction != d;
                                    if fhop.edge.label == hop.edge.label && (same || flip) {
                                        let r = &per_path[p][c[p]];
                                        let mut seq = vec![r.steps[fh]];
                                        seq.extend(r.inner[fh].iter().copied());
                                        seq.push(r.steps[fh + 1]);
                                        chain(&seq, &mut nodes, &mut edges);
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        (nodes, edges)
    }
}

/// Node and edge id sets of a result graph.
pub fn sets(g: &TemporalGraph) -> (NodeSet, EdgeSet) {
    (
        g.nodes().iter().map(|n| n.id).collect(),
        g.edges().iter().map(|e| (e.from, e.to)).collect(),
    )
}

// ------------------------------------------------------------- AST fuzzer

const WORDS: [&str; 10] = [
    "Person", "Building", "LivedIn", "Friend", "P2", "x_1", "Città", "_tmp", "Name", "Street",
];

fn word(r: &mut ChaCha8Rng) -> String {
    WORDS.choose(r).unwrap().to_string()
}

fn node_step(r: &mut ChaCha8Rng, allow_projection: bool) -> NodeStep {
    let mut s = NodeStep::new(word(r));
    if r.random_bool(0.4) {
        s.alias = Some(word(r));
    }
    if allow_projection && r.random_bool(0.4) {
        s.projection = Some(if r.random_bool(0.3) {
            Projection::All
        } else {
            Projection::Attributes((0..r.random_range(1..=3)).map(|_| word(r)).collect())
        });
    }
    s
}

fn path(r: &mut ChaCha8Rng, allow_projection: bool) -> PathPattern {
    let mut p = PathPattern::single(node_step(r, allow_projection));
    for _ in 0..r.random_range(0..=3) {
        let bounds = r.random_bool(0.3).then(|| {
            let min = r.random_range(1..=4);
            Bounds {
                min,
                max: r.random_range(min..=6),
            }
        });
        p.hops.push(Hop {
            edge: EdgeStep {
                label: word(r),
                direction: if r.random_bool(0.5) {
                    Direction::Forward
                } else {
                    Direction::Backward
                },
                bounds,
            },
            node: node_step(r, allow_projection),
        });
    }
    p
}

fn condition(r: &mut ChaCha8Rng, depth: u32) -> Condition {
    if depth == 0 || r.random_bool(0.5) {
        let ops = [CompareOp::Eq, CompareOp::Ne, CompareOp::Lt, CompareOp::Le, CompareOp::Gt, CompareOp::Ge];
        let literal = if r.random_bool(0.5) {
            Literal::Int(r.random_range(-50..=3000))
        } else {
            Literal::Str(["John Smith", "O'Hara", "", "a''b", "ünï"].choose(r).unwrap().to_string())
        };
        return Condition::Compare(Comparison {
            subject: word(r),
            attribute: word(r),
            op: *ops.choose(r).unwrap(),
            literal,
        });
    }
    let children = (0..r.random_range(2..=3)).map(|_| condition(r, depth - 1)).collect();
    if r.random_bool(0.5) {
        Condition::And(children)
    } else {
        Condition::Or(children)
    }
}

/// A random syntactically valid query.
pub fn random_query(r: &mut ChaCha8Rng) -> Query {
    let select = if r.random_bool(0.3) {
        Select::Star
    } else {
        Select::Paths((0..r.random_range(1..=2)).map(|_| path(r, true)).collect())
    };
    let from = (0..r.random_range(1..=3)).map(|_| path(r, false)).collect();
    let condition = r.random_bool(0.7).then(|| condition(r, 3));
    let temporal = match r.random_range(0..4) {
        0 => Some(TemporalModifier::Snapshot(IntervalEnd::At(r.random_range(0..3000)))),
        1 => Some(TemporalModifier::Snapshot(IntervalEnd::Now)),
        2 => {
            let s = r.random_range(0..3000);
            let end = if r.random_bool(0.3) {
                IntervalEnd::Now
            } else {
                IntervalEnd::At(r.random_range(s..3001))
            };
            Some(TemporalModifier::In(Interval::new(s, end).unwrap()))
        }
        _ => None,
    };
    Query {
        select,
        from,
        condition,
        temporal,
    }
}

/// Graph from model shorthand: `(id, kind, name, element text)`.
pub fn graph(nodes: &[(u64, NodeKind, &str, &str)], edges: &[(u64, u64)]) -> TemporalGraph {
    let mut b = TemporalGraph::builder("case");
    for (id, kind, name, e) in nodes {
        b.push_node(Node::new(*id, *kind, *name, element(e)));
    }
    for (a, c) in edges {
        b.push_edge(StructuralEdge::new(*a, *c));
    }
    b.build().expect("crafted case is well-formed")
}
