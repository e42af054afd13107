//! TEG-QL syntax tree. `Display` renders the canonical query text.

use std::fmt;

use crate::temporal::{Interval, IntervalEnd};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Query {
    pub select: Select,
    pub from: Vec<PathPattern>,
    pub condition: Option<Condition>,
    pub temporal: Option<TemporalModifier>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Select {
    Star,
    Paths(Vec<PathPattern>),
}

/// `node (edge node)*`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathPattern {
    pub start: NodeStep,
    pub hops: Vec<Hop>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hop {
    pub edge: EdgeStep,
    pub node: NodeStep,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodeStep {
    pub label: String,
    pub alias: Option<String>,
    pub projection: Option<Projection>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Projection {
    All,
    Attributes(Vec<String>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeStep {
    pub label: String,
    pub direction: Direction,
    pub bounds: Option<Bounds>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    /// `-E->`
    Forward,
    /// `<-E-`
    Backward,
}

impl Direction {
    pub fn reversed(self) -> Direction {
        match self {
            Direction::Forward => Direction::Backward,
            Direction::Backward => Direction::Forward,
        }
    }
}

/// Inclusive hop-count range `[min..max]`, `1 <= min <= max`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Bounds {
    pub min: u32,
    pub max: u32,
}

/// Parsed `WHERE` tree. Parentheses survive as nesting; the parser never
/// produces an `And`/`Or` with fewer than two children.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Condition {
    Or(Vec<Condition>),
    And(Vec<Condition>),
    Compare(Comparison),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Comparison {
    pub subject: String,
    pub attribute: String,
    pub op: CompareOp,
    pub literal: Literal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CompareOp {
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Literal {
    Int(i64),
    Str(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TemporalModifier {
    /// `SNAPSHOT t`; `Now` is allowed.
    Snapshot(IntervalEnd),
    In(Interval),
}

impl PathPattern {
    pub fn single(start: NodeStep) -> Self {
        PathPattern {
            start,
            hops: Vec::new(),
        }
    }

    /// Node steps in order.
    pub fn nodes(&self) -> impl Iterator<Item = &NodeStep> {
        std::iter::once(&self.start).chain(self.hops.iter().map(|h| &h.node))
    }

    pub fn node_count(&self) -> usize {
        self.hops.len() + 1
    }

    pub fn node(&self, i: usize) -> &NodeStep {
        if i == 0 {
            &self.start
        } else {
            &self.hops[i - 1].node
        }
    }

    pub fn has_variable_length(&self) -> bool {
        self.hops.iter().any(|h| h.edge.bounds.is_some())
    }
}

impl NodeStep {
    pub fn new(label: impl Into<String>) -> Self {
        NodeStep {
            label: label.into(),
            alias: None,
            projection: None,
        }
    }

    pub fn aliased(label: impl Into<String>, alias: impl Into<String>) -> Self {
        NodeStep {
            alias: Some(alias.into()),
            ..NodeStep::new(label)
        }
    }

    /// The name this step is referred to by: its alias, else its label.
    pub fn name(&self) -> &str {
        self.alias.as_deref().unwrap_or(&self.label)
    }
}

impl Condition {
    /// Comparisons in left-to-right order.
    pub fn comparisons(&self) -> Vec<&Comparison> {
        let mut out = Vec::new();
        fn walk<'a>(c: &'a Condition, out: &mut Vec<&'a Comparison>) {
            match c {
                Condition::Or(cs) | Condition::And(cs) => cs.iter().for_each(|c| walk(c, out)),
                Condition::Compare(cmp) => out.push(cmp),
            }
        }
        walk(self, &mut out);
        out
    }
}

impl CompareOp {
    pub fn as_str(self) -> &'static str {
        match self {
            CompareOp::Eq => "=",
            CompareOp::Ne => "<>",
            CompareOp::Lt => "<",
            CompareOp::Le => "<=",
            CompareOp::Gt => ">",
            CompareOp::Ge => ">=",
        }
    }
}

impl fmt::Display for Query {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SELECT {} FROM ", self.select)?;
        write_list(f, &self.from)?;
        if let Some(c) = &self.condition {
            write!(f, " WHERE {c}")?;
        }
        match &self.temporal {
            Some(TemporalModifier::Snapshot(t)) => write!(f, " SNAPSHOT {t}"),
            Some(TemporalModifier::In(iv)) => write!(f, " IN {iv}"),
            None => Ok(()),
        }
    }
}

fn write_list<T: fmt::Display>(f: &mut fmt::Formatter<'_>, items: &[T]) -> fmt::Result {
    for (i, item) in items.iter().enumerate() {
        if i > 0 {
            f.write_str(", ")?;
        }
        write!(f, "{item}")?;
    }
    Ok(())
}

impl fmt::Display for Select {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Select::Star => f.write_str("*"),
            Select::Paths(paths) => write_list(f, paths),
        }
    }
}

impl fmt::Display for PathPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.start)?;
        for hop in &self.hops {
            write!(f, "{}{}", hop.edge, hop.node)?;
        }
        Ok(())
    }
}

impl fmt::Display for NodeStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label)?;
        if let Some(a) = &self.alias {
            write!(f, " as {a}")?;
        }
        match &self.projection {
            None => Ok(()),
            Some(Projection::All) => f.write_str("(*)"),
            Some(Projection::Attributes(attrs)) => write!(f, "({})", attrs.join(", ")),
        }
    }
}

impl fmt::Display for EdgeStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let bounds = self
            .bounds
            .map(|b| format!("[{}..{}]", b.min, b.max))
            .unwrap_or_default();
        match self.direction {
            Direction::Forward => write!(f, "-{}{bounds}->", self.label),
            Direction::Backward => write!(f, "<-{}{bounds}-", self.label),
        }
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Condition::Compare(c) => write!(f, "{c}"),
            Condition::Or(cs) => {
                for (i, c) in cs.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" OR ")?;
                    }
                    match c {
                        Condition::Or(_) => write!(f, "({c})")?,
                        _ => write!(f, "{c}")?,
                    }
                }
                Ok(())
            }
            Condition::And(cs) => {
                for (i, c) in cs.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" AND ")?;
                    }
                    match c {
                        Condition::Compare(_) => write!(f, "{c}")?,
                        _ => write!(f, "({c})")?,
                    }
                }
                Ok(())
            }
        }
    }
}

impl fmt::Display for Comparison {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}.{} {} {}",
            self.subject,
            self.attribute,
            self.op.as_str(),
            self.literal
        )
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Literal::Int(i) => write!(f, "{i}"),
            Literal::Str(s) => write!(f, "'{}'", s.replace('\'', "''")),
        }
    }
}
