//! Query evaluation: binding rows, filtering, joins and the result graph.

mod matcher;

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use thiserror::Error;

use crate::model::{Node, NodeId, StructuralEdge, TemporalGraph, Value};
use crate::query::{
    resolve_bindings, BindingTable, CompareOp, Comparison, Condition, Literal,
    PathPattern, Projection, Query, Select, SemanticError, TemporalModifier, VarId,
};
use crate::temporal::{Instant, TemporalElement};

pub use matcher::{match_path, BindingRow, Traversal};
use matcher::{match_path_filtered, Filters};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error(transparent)]
    Semantic(#[from] SemanticError),
}

/// Attribute names known per owner label.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Catalog {
    labels: BTreeMap<String, BTreeSet<String>>,
}

impl Catalog {
    /// Collects the attribute names actually attached to object and edge
    /// nodes of `g`.
    pub fn from_graph(g: &TemporalGraph) -> Catalog {
        let mut c = Catalog::default();
        for n in g.nodes().iter().filter(|n| n.kind.is_owner()) {
            let names = c.labels.entry(n.name.clone()).or_default();
            names.extend(g.attributes_of(n.id).into_iter().map(|a| a.name.clone()));
        }
        c
    }

    pub fn insert(&mut self, label: impl Into<String>, attribute: impl Into<String>) {
        self.labels
            .entry(label.into())
            .or_default()
            .insert(attribute.into());
    }

    pub fn has_label(&self, label: &str) -> bool {
        self.labels.contains_key(label)
    }

    /// Attribute names of `label`, sorted; empty for an unknown label.
    pub fn attributes(&self, label: &str) -> Vec<&str> {
        self.labels
            .get(label)
            .map(|s| s.iter().map(String::as_str).collect())
            .unwrap_or_default()
    }

    /// Whether an attribute reference is acceptable. A label absent from
    /// the catalog accepts everything, since it simply matches nothing.
    fn admits(&self, label: &str, attribute: &str) -> bool {
        self.labels.get(label).is_none_or(|s| s.contains(attribute))
    }
}

/// Result of running a query.
#[derive(Debug, Clone, PartialEq)]
pub struct QueryOutcome {
    pub graph: TemporalGraph,
    /// Binding rows that survived filtering and joins.
    pub rows: usize,
    /// Variable names bound to each selected node.
    pub aliases: BTreeMap<NodeId, BTreeSet<String>>,
}

/// Evaluates `q` over `g`, resolving `Now` to `now`.
pub fn evaluate(g: &TemporalGraph, q: &Query, now: Instant) -> Result<QueryOutcome, EngineError> {
    let catalog = Catalog::from_graph(g);
    let plan = Plan::new(q, &catalog)?;
    Ok(Evaluator {
        g,
        q,
        plan: &plan,
        window: Window::new(q.temporal, now),
    }
    .run())
}

/// Checks `q` against `g`'s attribute catalog without evaluating it.
pub fn check(g: &TemporalGraph, q: &Query) -> Result<(), EngineError> {
    Plan::new(q, &Catalog::from_graph(g)).map(|_| ()).map_err(Into::into)
}

/// Whether two queries produce identical result graphs over `g`.
pub fn equivalent_multi_path_check(
    g: &TemporalGraph,
    a: &Query,
    b: &Query,
    now: Instant,
) -> Result<bool, EngineError> {
    Ok(evaluate(g, a, now)?.graph.content() == evaluate(g, b, now)?.graph.content())
}

/// Temporal filter from `SNAPSHOT` / `IN`.
#[derive(Debug, Clone, Copy)]
struct Window {
    modifier: Option<TemporalModifier>,
    now: Instant,
}

impl Window {
    fn new(modifier: Option<TemporalModifier>, now: Instant) -> Window {
        Window { modifier, now }
    }

    fn admits(&self, e: &TemporalElement) -> bool {
        match self.modifier {
            None => true,
            Some(TemporalModifier::Snapshot(t)) => e.contains_instant(t.resolve(self.now), self.now),
            Some(TemporalModifier::In(iv)) => e.intersects(&iv, self.now),
        }
    }
}

#[derive(Debug, Clone)]
enum Pred {
    Or(Vec<Pred>),
    And(Vec<Pred>),
    Cmp {
        var: VarId,
        attribute: String,
        op: CompareOp,
        literal: Literal,
    },
}

impl Pred {
    fn vars(&self, out: &mut BTreeSet<VarId>) {
        match self {
            Pred::Or(cs) | Pred::And(cs) => cs.iter().for_each(|c| c.vars(out)),
            Pred::Cmp { var, .. } => {
                out.insert(*var);
            }
        }
    }
}

#[derive(Debug, Clone)]
enum Part {
    Node {
        var: VarId,
        projection: Option<Projection>,
    },
    Segment {
        path: usize,
        hop: usize,
    },
}

/// Where a conjunct of `WHERE` is checked.
#[derive(Debug, Default)]
struct Placement {
    /// Per path, per node step: single-variable conjuncts.
    step: Vec<Vec<Vec<usize>>>,
    /// Per path: conjuncts whose variables all occur in that path.
    path: Vec<Vec<usize>>,
    /// Conjuncts spanning several paths.
    joined: Vec<usize>,
}

struct Plan {
    table: BindingTable,
    conjuncts: Vec<Pred>,
    placement: Placement,
    select: Option<Vec<Part>>,
}

impl Plan {
    fn new(q: &Query, catalog: &Catalog) -> Result<Plan, SemanticError> {
        let table = resolve_bindings(q)?;
        let conjuncts = match &q.condition {
            None => Vec::new(),
            Some(Condition::And(children)) => children
                .iter()
                .map(|c| compile(c, &table, catalog))
                .collect::<Result<_, _>>()?,
            Some(c) => vec![compile(c, &table, catalog)?],
        };
        let select = match &q.select {
            Select::Star => None,
            Select::Paths(paths) => {
                let mut parts = Vec::new();
                for p in paths {
                    select_parts(p, q, &table, catalog, &mut parts)?;
                }
                Some(parts)
            }
        };
        let placement = place(&conjuncts, q, &table);
        Ok(Plan {
            table,
            conjuncts,
            placement,
            select,
        })
    }

    /// Node-step index of `var` within path `p`, if it occurs there.
    fn step_in(&self, var: VarId, p: usize) -> Option<usize> {
        self.table
            .variable(var)
            .steps
            .iter()
            .find(|s| s.path == p)
            .map(|s| s.step)
    }
}

fn compile(c: &Condition, table: &BindingTable, catalog: &Catalog) -> Result<Pred, SemanticError> {
    Ok(match c {
        Condition::Or(cs) => Pred::Or(cs.iter().map(|c| compile(c, table, catalog)).collect::<Result<_, _>>()?),
        Condition::And(cs) => {
            Pred::And(cs.iter().map(|c| compile(c, table, catalog)).collect::<Result<_, _>>()?)
        }
        Condition::Compare(Comparison {
            subject,
            attribute,
            op,
            literal,
        }) => {
            let var = table.resolve(subject)?;
            check_attribute(table, var, attribute, catalog)?;
            Pred::Cmp {
                var,
                attribute: attribute.clone(),
                op: *op,
                literal: literal.clone(),
            }
        }
    })
}

fn check_attribute(
    table: &BindingTable,
    var: VarId,
    attribute: &str,
    catalog: &Catalog,
) -> Result<(), SemanticError> {
    let label = &table.variable(var).label;
    if catalog.admits(label, attribute) {
        Ok(())
    } else {
        Err(SemanticError::UnknownAttribute {
            label: label.clone(),
            attribute: attribute.to_string(),
        })
    }
}

fn select_parts(
    p: &PathPattern,
    q: &Query,
    table: &BindingTable,
    catalog: &Catalog,
    parts: &mut Vec<Part>,
) -> Result<(), SemanticError> {
    let mut vars = Vec::with_capacity(p.node_count());
    for step in p.nodes() {
        let var = table.resolve(step.name())?;
        if let Some(Projection::Attributes(names)) = &step.projection {
            for a in names {
                check_attribute(table, var, a, catalog)?;
            }
        }
        vars.push(var);
        parts.push(Part::Node {
            var,
            projection: step.projection.clone(),
        });
    }
    for (h, hop) in p.hops.iter().enumerate() {
        let (a, b) = (vars[h], vars[h + 1]);
        let mut found = false;
        for (fp, from) in q.from.iter().enumerate() {
            for (fh, fhop) in from.hops.iter().enumerate() {
                if fhop.edge.label != hop.edge.label {
                    continue;
                }
                let x = table.var_of(crate::query::StepRef { path: fp, step: fh });
                let y = table.var_of(crate::query::StepRef { path: fp, step: fh + 1 });
                let same = x == a && y == b && fhop.edge.direction == hop.edge.direction;
                let flipped = x == b && y == a && fhop.edge.direction == hop.edge.direction.reversed();
                if same || flipped {
                    found = true;
                    parts.push(Part::Segment { path: fp, hop: fh });
                }
            }
        }
        if !found {
            return Err(SemanticError::SegmentNotInFrom {
                from: p.node(h).name().to_string(),
                edge: hop.edge.label.clone(),
                to: hop.node.name().to_string(),
            });
        }
    }
    Ok(())
}

fn place(conjuncts: &[Pred], q: &Query, table: &BindingTable) -> Placement {
    let mut pl = Placement {
        step: q.from.iter().map(|p| vec![Vec::new(); p.node_count()]).collect(),
        path: vec![Vec::new(); q.from.len()],
        joined: Vec::new(),
    };
    for (i, c) in conjuncts.iter().enumerate() {
        let mut vars = BTreeSet::new();
        c.vars(&mut vars);
        if vars.len() == 1 {
            let v = *vars.iter().next().unwrap();
            for s in &table.variable(v).steps {
                pl.step[s.path][s.step].push(i);
            }
            continue;
        }
        let home = (0..q.from.len()).find(|&p| {
            vars.iter()
                .all(|v| table.variable(*v).steps.iter().any(|s| s.path == p))
        });
        match home {
            Some(p) => pl.path[p].push(i),
            None => pl.joined.push(i),
        }
    }
    pl
}

fn compare(v: &Value, op: CompareOp, lit: &Literal) -> bool {
    let ord = match (v, lit) {
        (Value::Int(a), Literal::Int(b)) => a.cmp(b),
        (Value::Str(a), Literal::Str(b)) => a.as_str().cmp(b.as_str()),
        _ => return op == CompareOp::Ne,
    };
    match op {
        CompareOp::Eq => ord.is_eq(),
        CompareOp::Ne => ord.is_ne(),
        CompareOp::Lt => ord.is_lt(),
        CompareOp::Le => ord.is_le(),
        CompareOp::Gt => ord.is_gt(),
        CompareOp::Ge => ord.is_ge(),
    }
}

struct Evaluator<'a> {
    g: &'a TemporalGraph,
    q: &'a Query,
    plan: &'a Plan,
    window: Window,
}

impl Evaluator<'_> {
    fn holds(&self, p: &Pred, bind: &dyn Fn(VarId) -> NodeId) -> bool {
        match p {
            Pred::Or(cs) => cs.iter().any(|c| self.holds(c, bind)),
            Pred::And(cs) => cs.iter().all(|c| self.holds(c, bind)),
            Pred::Cmp {
                var,
                attribute,
                op,
                literal,
            } => {
                let owner = bind(*var);
                self.g
                    .attributes_of(owner)
                    .into_iter()
                    .filter(|a| &a.name == attribute)
                    .flat_map(|a| self.g.values_of(a.id))
                    .filter(|v| self.window.admits(&v.interval))
                    .any(|v| compare(&v.value(), *op, literal))
            }
        }
    }

    fn match_one(&self, p: usize) -> Vec<BindingRow> {
        let pl = &self.plan.placement;
        let step = |s: usize, n: &Node| {
            pl.step[p][s]
                .iter()
                .all(|&i| self.holds(&self.plan.conjuncts[i], &|_| n.id))
        };
        let any = |n: &Node| self.window.admits(&n.interval);
        let mut rows = match_path_filtered(self.g, &self.q.from[p], &Filters { step: &step, any: &any });
        rows.retain(|row| {
            pl.path[p].iter().all(|&i| {
                self.holds(&self.plan.conjuncts[i], &|v| {
                    row.nodes[self.plan.step_in(v, p).expect("conjunct placed in its path")]
                })
            })
        });
        rows
    }

    fn run(&self) -> QueryOutcome {
        let per_path: Vec<Vec<BindingRow>> = (0..self.q.from.len()).map(|p| self.match_one(p)).collect();
        let joined = self.join(&per_path);
        let bind_in = |row: &[usize], v: VarId| {
            let s = self.plan.table.variable(v).steps[0];
            per_path[s.path][row[s.path]].nodes[s.step]
        };
        let joined: Vec<Vec<usize>> = joined
            .into_iter()
            .filter(|row| {
                self.plan
                    .placement
                    .joined
                    .iter()
                    .all(|&i| self.holds(&self.plan.conjuncts[i], &|v| bind_in(row, v)))
            })
            .collect();

        let mut out = Collector::new(self.g, self.window);
        for row in &joined {
            match &self.plan.select {
                None => {
                    for (p, &r) in row.iter().enumerate() {
                        let b = &per_path[p][r];
                        out.chain(&b.physical());
                        for n in b.all_nodes() {
                            out.attributes(n, None);
                        }
                        for (s, n) in b.nodes.iter().enumerate() {
                            let v = self.plan.table.var_of(crate::query::StepRef { path: p, step: s });
                            out.alias(*n, &self.plan.table.variable(v).name);
                        }
                    }
                }
                Some(parts) => {
                    for part in parts {
                        match part {
                            Part::Node { var, projection } => {
                                let n = bind_in(row, *var);
                                out.node(n);
                                out.alias(n, &self.plan.table.variable(*var).name);
                                match projection {
                                    None => {}
                                    Some(Projection::All) => out.attributes(n, None),
                                    Some(Projection::Attributes(names)) => out.attributes(n, Some(names)),
                                }
                            }
                            Part::Segment { path, hop } => {
                                let b = &per_path[*path][row[*path]];
                                let t = &b.hops[*hop];
                                let mut seq = vec![b.nodes[*hop]];
                                for (k, e) in t.edges.iter().enumerate() {
                                    seq.push(*e);
                                    if let Some(v) = t.via.get(k) {
                                        seq.push(*v);
                                    }
                                }
                                seq.push(b.nodes[*hop + 1]);
                                out.chain(&seq);
                            }
                        }
                    }
                }
            }
        }
        QueryOutcome {
            rows: joined.len(),
            aliases: out.aliases.clone(),
            graph: out.finish(),
        }
    }

    /// Hash join on variables shared between paths; cartesian product
    /// when there are none.
    fn join(&self, per_path: &[Vec<BindingRow>]) -> Vec<Vec<usize>> {
        let mut acc: Vec<Vec<usize>> = vec![Vec::new()];
        for (p, rows) in per_path.iter().enumerate() {
            let shared: Vec<(usize, (usize, usize))> = self
                .plan
                .table
                .variables()
                .iter()
                .filter_map(|v| {
                    let here = v.steps.iter().find(|s| s.path == p)?;
                    let before = v.steps.iter().find(|s| s.path < p)?;
                    Some((here.step, (before.path, before.step)))
                })
                .collect();
            let mut index: HashMap<Vec<NodeId>, Vec<usize>> = HashMap::new();
            for (i, r) in rows.iter().enumerate() {
                let key = shared.iter().map(|(s, _)| r.nodes[*s]).collect();
                index.entry(key).or_default().push(i);
            }
            let mut next = Vec::new();
            for prefix in &acc {
                let key: Vec<NodeId> = shared
                    .iter()
                    .map(|(_, (bp, bs))| per_path[*bp][prefix[*bp]].nodes[*bs])
                    .collect();
                for &i in index.get(&key).into_iter().flatten() {
                    let mut row = prefix.clone();
                    row.push(i);
                    next.push(row);
                }
            }
            acc = next;
            if acc.is_empty() {
                break;
            }
        }
        acc
    }
}

/// Accumulates result nodes and the stored edges between them.
struct Collector<'a> {
    g: &'a TemporalGraph,
    window: Window,
    stored: HashSet<(NodeId, NodeId)>,
    nodes: BTreeSet<NodeId>,
    edges: BTreeSet<StructuralEdge>,
    aliases: BTreeMap<NodeId, BTreeSet<String>>,
}

impl<'a> Collector<'a> {
    fn new(g: &'a TemporalGraph, window: Window) -> Self {
        Collector {
            g,
            window,
            stored: g.edges().iter().map(|e| (e.from, e.to)).collect(),
            nodes: BTreeSet::new(),
            edges: BTreeSet::new(),
            aliases: BTreeMap::new(),
        }
    }

    fn node(&mut self, n: NodeId) {
        self.nodes.insert(n);
    }

    fn alias(&mut self, n: NodeId, name: &str) {
        self.aliases.entry(n).or_default().insert(name.to_string());
    }

    fn link(&mut self, a: NodeId, b: NodeId) {
        for (from, to) in [(a, b), (b, a)] {
            if self.stored.contains(&(from, to)) {
                self.edges.insert(StructuralEdge { from, to });
            }
        }
    }

    fn chain(&mut self, seq: &[NodeId]) {
        self.nodes.extend(seq.iter().copied());
        for w in seq.windows(2) {
            self.link(w[0], w[1]);
        }
    }

    fn attributes(&mut self, owner: NodeId, names: Option<&[String]>) {
        self.node(owner);
        let g = self.g;
        for a in g.attributes_of(owner) {
            if names.is_some_and(|ns| !ns.contains(&a.name)) || !self.window.admits(&a.interval) {
                continue;
            }
            self.node(a.id);
            self.link(owner, a.id);
            for v in g.values_of(a.id) {
                if self.window.admits(&v.interval) {
                    self.node(v.id);
                    self.link(a.id, v.id);
                }
            }
        }
    }

    fn finish(self) -> TemporalGraph {
        let nodes: Vec<Node> = self
            .nodes
            .iter()
            .filter_map(|id| self.g.node(*id).cloned())
            .collect();
        self.g.rebuild(nodes, self.edges.into_iter().collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::{generate_workload, WorkloadConfig};
    use crate::model::{element, fixtures, NodeKind};
    use crate::query::parse;

    fn run(g: &TemporalGraph, q: &str) -> Result<QueryOutcome, EngineError> {
        evaluate(g, &parse(q).unwrap(), g.default_now())
    }

    fn ids(g: &TemporalGraph) -> Vec<u64> {
        g.nodes().iter().map(|n| n.id.0).collect()
    }

    #[test]
    fn star_on_sample() {
        let g = fixtures::sample_graph();
        let out = run(&g, "SELECT * FROM Person-Friend->Person").unwrap();
        assert_eq!(out.rows, 1);
        assert_eq!(ids(&out.graph), vec![1, 2, 3, 4, 5]);
        assert_eq!(out.graph.edges().len(), 4);
    }

    #[test]
    fn where_and_snapshot() {
        let g = fixtures::sample_graph();
        let q = "SELECT * FROM Person as P-Friend->Person as Q WHERE P.Name = 'John Smith'";
        assert_eq!(run(&g, q).unwrap().rows, 1);
        let q2 = format!("{q} SNAPSHOT 2001");
        assert_eq!(run(&g, &q2).unwrap().rows, 0);
        let q3 = format!("{q} IN [1999-2010]");
        assert_eq!(run(&g, &q3).unwrap().rows, 1);
        let miss = "SELECT * FROM Person as P-Friend->Person as Q WHERE P.Name = 'Nobody'";
        assert!(run(&g, miss).unwrap().graph.is_empty());
    }

    #[test]
    fn select_projection() {
        let g = fixtures::sample_graph();
        let out = run(&g, "SELECT Person as P(Name) FROM Person as P-Friend->Person as Q").unwrap();
        assert_eq!(ids(&out.graph), vec![1, 2, 3]);
        let out = run(&g, "SELECT Q FROM Person as P-Friend->Person as Q").unwrap();
        assert_eq!(ids(&out.graph), vec![5]);
        let out = run(&g, "SELECT Q<-Friend-P FROM Person as P-Friend->Person as Q").unwrap();
        assert_eq!(ids(&out.graph), vec![1, 4, 5]);
    }

    #[test]
    fn semantic_errors() {
        let g = fixtures::sample_graph();
        assert!(matches!(
            run(&g, "SELECT * FROM Person-Friend->Person WHERE Person.Name = 'x'"),
            Err(EngineError::Semantic(SemanticError::AmbiguousReference(_)))
        ));
        assert!(matches!(
            run(&g, "SELECT * FROM Person as P WHERE P.Age = 3"),
            Err(EngineError::Semantic(SemanticError::UnknownAttribute { .. }))
        ));
        assert!(matches!(
            run(&g, "SELECT P-Knows->Q FROM Person as P-Friend->Person as Q"),
            Err(EngineError::Semantic(SemanticError::SegmentNotInFrom { .. }))
        ));
        // unknown label: empty result rather than an error
        assert!(run(&g, "SELECT * FROM Robot as R WHERE R.Age = 3").unwrap().graph.is_empty());
    }

    #[test]
    fn mixed_type_comparisons() {
        let v = Value::Str("x".into());
        assert!(!compare(&v, CompareOp::Eq, &Literal::Int(1)));
        assert!(compare(&v, CompareOp::Ne, &Literal::Int(1)));
        assert!(!compare(&v, CompareOp::Lt, &Literal::Int(1)));
        assert!(compare(&Value::Int(3), CompareOp::Le, &Literal::Int(3)));
    }

    #[test]
    fn history_is_existential() {
        let g = fixtures::duplicated_values();
        let q = "SELECT * FROM Building as B WHERE B.Street = 'Main St.'";
        assert_eq!(run(&g, q).unwrap().rows, 1);
        assert_eq!(run(&g, &format!("{q} SNAPSHOT 2005")).unwrap().rows, 0);
        let out = run(&g, "SELECT * FROM Building as B SNAPSHOT 1995").unwrap();
        assert_eq!(ids(&out.graph), vec![1, 2, 4]);
    }

    #[test]
    fn join_on_shared_alias() {
        let g = generate_workload(&WorkloadConfig {
            seed: 5,
            persons: 20,
            buildings: 5,
            friendships: 30,
            lived_in: 15,
            ..Default::default()
        })
        .unwrap();
        let joined = parse(
            "SELECT * FROM Person as P-LivedIn->Building as B, Person as P-Friend->Person as Q",
        )
        .unwrap();
        let a = match_path(&g, &joined.from[0]);
        let b = match_path(&g, &joined.from[1]);
        let expected = a
            .iter()
            .map(|x| b.iter().filter(|y| y.nodes[0] == x.nodes[0]).count())
            .sum::<usize>();
        assert_eq!(evaluate(&g, &joined, 100).unwrap().rows, expected);
        let cross = parse("SELECT * FROM Person as P-LivedIn->Building as B, Person as R-Friend->Person as Q")
            .unwrap();
        assert_eq!(evaluate(&g, &cross, 100).unwrap().rows, a.len() * b.len());
    }

    #[test]
    fn equivalence_of_split_paths() {
        let g = fixtures::sample_graph();
        let one = parse("SELECT * FROM Person as P-Friend->Person as Q").unwrap();
        let two = parse("SELECT * FROM Person as P-Friend->Person as Q, Person as P").unwrap();
        assert!(equivalent_multi_path_check(&g, &one, &two, 2020).unwrap());
    }

    #[test]
    fn snapshot_now_uses_supplied_instant() {
        let g = TemporalGraph::builder("n")
            .node(Node::new(1, NodeKind::Object, "A", element("[[5-Now]]")))
            .build()
            .unwrap();
        let q = parse("SELECT * FROM A SNAPSHOT NOW").unwrap();
        assert_eq!(evaluate(&g, &q, 9).unwrap().rows, 1);
        assert_eq!(evaluate(&g, &q, 3).unwrap().rows, 0);
    }
}
