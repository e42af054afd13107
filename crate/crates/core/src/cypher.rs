//! Translation of TEG-QL into Cypher text.
//!
//! Each `FROM` path becomes one `MATCH` over the physical
//! object→edge→object layout; attribute projections and `WHERE` references
//! each add one `owner→attribute→value` `MATCH`; comparisons target the
//! `value` property of the value node. `SNAPSHOT` / `IN` never reach the
//! Cypher text and are returned as a [`Residual`] for post-filtering.

use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;

use serde_json::{json, Value as Json};
use thiserror::Error;

use crate::engine::Catalog;
use crate::query::{
    resolve_bindings, CompareOp, Condition, Direction, Literal, Projection, Query, Select,
    SemanticError, StepRef, TemporalModifier, VarId,
};
use crate::temporal::{Interval, IntervalEnd};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TranspileError {
    #[error("variable-length path steps cannot be translated to Cypher")]
    Unsupported,
    #[error(transparent)]
    Semantic(#[from] SemanticError),
}

/// Temporal part of a query, applied after the Cypher result comes back.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Residual {
    Snapshot(IntervalEnd),
    In(Interval),
}

impl Residual {
    /// `{"snapshot": 1990}` or `{"in": [1986, 1989]}`; `Now` is the string
    /// `"Now"`.
    pub fn to_json(&self) -> Json {
        fn end(e: IntervalEnd) -> Json {
            match e {
                IntervalEnd::At(t) => json!(t),
                IntervalEnd::Now => json!("Now"),
            }
        }
        match self {
            Residual::Snapshot(t) => json!({ "snapshot": end(*t) }),
            Residual::In(iv) => json!({ "in": [iv.start(), end(iv.end())] }),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TranspileOutput {
    pub cypher: String,
    pub residual: Option<Residual>,
    /// TEG-QL variable name → Cypher variable, in `FROM` order.
    pub variable_map: Vec<(String, String)>,
}

/// Translates `q`. With a catalog, `Label(*)` expands to that label's known
/// attributes; without one it becomes a single unconstrained attribute match.
pub fn transpile(q: &Query, catalog: Option<&Catalog>) -> Result<TranspileOutput, TranspileError> {
    let select_paths = match &q.select {
        Select::Star => &[][..],
        Select::Paths(ps) => ps.as_slice(),
    };
    if q.from.iter().chain(select_paths).any(|p| p.has_variable_length()) {
        return Err(TranspileError::Unsupported);
    }
    let table = resolve_bindings(q)?;
    let mut names = Names::default();

    // Object variables first so aliases keep their spelling when possible.
    let object_vars: Vec<String> = table
        .variables()
        .iter()
        .map(|v| names.fresh(&v.name))
        .collect();
    let mut out = String::new();
    let mut returned: Vec<String> = Vec::new();
    let mut declared = vec![false; object_vars.len()];

    for (p, path) in q.from.iter().enumerate() {
        out.push_str("MATCH ");
        let mut object = |s: usize, out: &mut String, returned: &mut Vec<String>| {
            let var = table.var_of(StepRef { path: p, step: s });
            let name = &object_vars[var.0];
            if declared[var.0] {
                write!(out, "({name})").unwrap();
            } else {
                declared[var.0] = true;
                returned.push(name.clone());
                write!(out, "({name}:OBJECT {{title: {}}})", quote(&table.variable(var).label)).unwrap();
            }
        };
        object(0, &mut out, &mut returned);
        for (h, hop) in path.hops.iter().enumerate() {
            let arrow = match hop.edge.direction {
                Direction::Forward => "-->",
                Direction::Backward => "<--",
            };
            let edge = names.fresh(&hop.edge.label);
            write!(out, "\n  {arrow}({edge}:EDGE {{title: {}}})", quote(&hop.edge.label)).unwrap();
            returned.push(edge);
            write!(out, "\n  {arrow}").unwrap();
            object(h + 1, &mut out, &mut returned);
        }
        out.push('\n');
    }

    // (variable, attribute) → value variable
    let mut attr_matches: HashMap<(VarId, String), String> = HashMap::new();
    let mut attribute_match = |owner: VarId, title: Option<&str>, out: &mut String, names: &mut Names| {
        if let Some(title) = title {
            if let Some(y) = attr_matches.get(&(owner, title.to_string())) {
                return (y.clone(), None);
            }
        }
        let (x, y) = names.pair();
        let head = match title {
            Some(t) => format!("({x}:ATTRIBUTE {{title: {}}})", quote(t)),
            None => format!("({x}:ATTRIBUTE)"),
        };
        writeln!(out, "MATCH ({})-->{head}\n  -->({y}:VALUE)", object_vars[owner.0]).unwrap();
        if let Some(t) = title {
            attr_matches.insert((owner, t.to_string()), y.clone());
        }
        (y, Some(x))
    };

    for path in select_paths {
        for step in path.nodes() {
            let owner = table.resolve(step.name())?;
            let titles: Vec<Option<String>> = match &step.projection {
                None => continue,
                Some(Projection::Attributes(list)) => list.iter().cloned().map(Some).collect(),
                Some(Projection::All) => match catalog {
                    Some(c) => c
                        .attributes(&table.variable(owner).label)
                        .into_iter()
                        .map(|a| Some(a.to_string()))
                        .collect(),
                    None => vec![None],
                },
            };
            for t in titles {
                let (y, x) = attribute_match(owner, t.as_deref(), &mut out, &mut names);
                if let Some(x) = x {
                    returned.push(x);
                    returned.push(y);
                }
            }
        }
    }

    if let Some(cond) = &q.condition {
        let mut refs = Vec::new();
        for c in cond.comparisons() {
            let owner = table.resolve(&c.subject)?;
            let (y, _) = attribute_match(owner, Some(&c.attribute), &mut out, &mut names);
            refs.push(y);
        }
        let mut next = refs.into_iter();
        out.push_str("WHERE ");
        write_condition(cond, &mut next, &mut out);
        out.push('\n');
    }

    writeln!(out, "RETURN {}", returned.join(", ")).unwrap();

    let residual = q.temporal.map(|t| match t {
        TemporalModifier::Snapshot(at) => Residual::Snapshot(at),
        TemporalModifier::In(iv) => Residual::In(iv),
    });
    let variable_map = table
        .variables()
        .iter()
        .zip(&object_vars)
        .map(|(v, c)| (v.name.clone(), c.clone()))
        .collect();
    Ok(TranspileOutput {
        cypher: out,
        residual,
        variable_map,
    })
}

/// Writes the condition tree, consuming value variables in comparison
/// order.
fn write_condition(c: &Condition, refs: &mut dyn Iterator<Item = String>, out: &mut String) {
    let group = |children: &[Condition], sep: &str, parens: &dyn Fn(&Condition) -> bool, refs: &mut dyn Iterator<Item = String>, out: &mut String| {
        for (i, child) in children.iter().enumerate() {
            if i > 0 {
                out.push_str(sep);
            }
            let wrap = parens(child);
            if wrap {
                out.push('(');
            }
            write_condition(child, refs, out);
            if wrap {
                out.push(')');
            }
        }
    };
    match c {
        Condition::Or(cs) => group(cs, " OR ", &|c| matches!(c, Condition::Or(_)), refs, out),
        Condition::And(cs) => group(cs, " AND ", &|c| !matches!(c, Condition::Compare(_)), refs, out),
        Condition::Compare(cmp) => {
            let y = refs.next().expect("one value variable per comparison");
            let op = match cmp.op {
                CompareOp::Eq => "=",
                CompareOp::Ne => "<>",
                CompareOp::Lt => "<",
                CompareOp::Le => "<=",
                CompareOp::Gt => ">",
                CompareOp::Ge => ">=",
            };
            let lit = match &cmp.literal {
                Literal::Int(i) => i.to_string(),
                Literal::Str(s) => quote(s),
            };
            write!(out, "{y}.value {op} {lit}").unwrap();
        }
    }
}

fn quote(s: &str) -> String {
    let mut q = String::with_capacity(s.len() + 2);
    q.push('\'');
    for c in s.chars() {
        match c {
            '\'' => q.push_str("\\'"),
            '\\' => q.push_str("\\\\"),
            c => q.push(c),
        }
    }
    q.push('\'');
    q
}

/// Allocator of distinct Cypher variable names.
#[derive(Default)]
struct Names {
    used: BTreeSet<String>,
    pairs: usize,
}

impl Names {
    fn fresh(&mut self, base: &str) -> String {
        let mut name = base.to_string();
        let mut k = 2;
        while self.used.contains(&name) {
            name = format!("{base}_{k}");
            k += 1;
        }
        self.used.insert(name.clone());
        name
    }

    fn pair(&mut self) -> (String, String) {
        loop {
            self.pairs += 1;
            let (x, y) = (format!("x{}", self.pairs), format!("y{}", self.pairs));
            if !self.used.contains(&x) && !self.used.contains(&y) {
                self.used.insert(x.clone());
                self.used.insert(y.clone());
                return (x, y);
            }
        }
    }
}
