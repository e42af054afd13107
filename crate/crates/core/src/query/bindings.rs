//! Alias resolution.
//!
//! Every node step of the `FROM` paths belongs to exactly one [`Variable`].
//! An explicit alias (`Person as P2`) names a variable; repeating the same
//! alias in another path joins the two steps. An unaliased step gets its own
//! implicit variable named after its label. A reference resolves when it
//! names exactly one variable.

use thiserror::Error;

use super::ast::Query;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SemanticError {
    #[error("alias `{0}` is declared more than once")]
    DuplicateAlias(String),
    #[error("`{0}` is ambiguous: it matches several path steps; give one of them an alias")]
    AmbiguousReference(String),
    #[error("`{0}` does not name any step of the FROM paths")]
    UnknownReference(String),
    #[error("no node labelled `{label}` has an attribute `{attribute}`")]
    UnknownAttribute { label: String, attribute: String },
    #[error("`{from}-{edge}-{to}` in SELECT is not a segment of any FROM path")]
    SegmentNotInFrom {
        from: String,
        edge: String,
        to: String,
    },
}

/// Position of a node step: path index and node-step index within it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StepRef {
    pub path: usize,
    pub step: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VarId(pub usize);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Variable {
    pub name: String,
    pub label: String,
    pub explicit: bool,
    pub steps: Vec<StepRef>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BindingTable {
    vars: Vec<Variable>,
    by_step: Vec<Vec<VarId>>,
}

impl BindingTable {
    pub fn variables(&self) -> &[Variable] {
        &self.vars
    }

    pub fn variable(&self, id: VarId) -> &Variable {
        &self.vars[id.0]
    }

    pub fn var_of(&self, step: StepRef) -> VarId {
        self.by_step[step.path][step.step]
    }

    /// Resolves a bare name used in `SELECT` or `WHERE`.
    pub fn resolve(&self, name: &str) -> Result<VarId, SemanticError> {
        let mut hits = self
            .vars
            .iter()
            .enumerate()
            .filter(|(_, v)| v.name == name)
            .map(|(i, _)| VarId(i));
        match (hits.next(), hits.next()) {
            (Some(id), None) => Ok(id),
            (None, _) => Err(SemanticError::UnknownReference(name.to_string())),
            (Some(_), Some(_)) => Err(SemanticError::AmbiguousReference(name.to_string())),
        }
    }
}

/// Registers the variables of `q`'s `FROM` paths.
pub fn resolve_bindings(q: &Query) -> Result<BindingTable, SemanticError> {
    let mut vars: Vec<Variable> = Vec::new();
    let mut by_step = Vec::with_capacity(q.from.len());
    for (p, path) in q.from.iter().enumerate() {
        let mut ids = Vec::with_capacity(path.node_count());
        for (s, step) in path.nodes().enumerate() {
            let at = StepRef { path: p, step: s };
            let id = match &step.alias {
                Some(alias) => {
                    match vars.iter().position(|v| v.explicit && &v.name == alias) {
                        Some(i) => {
                            let v = &mut vars[i];
                            if v.label != step.label || v.steps.iter().any(|r| r.path == p) {
                                return Err(SemanticError::DuplicateAlias(alias.clone()));
                            }
                            v.steps.push(at);
                            VarId(i)
                        }
                        None => {
                            vars.push(Variable {
                                name: alias.clone(),
                                label: step.label.clone(),
                                explicit: true,
                                steps: vec![at],
                            });
                            VarId(vars.len() - 1)
                        }
                    }
                }
                None => {
                    vars.push(Variable {
                        name: step.label.clone(),
                        label: step.label.clone(),
                        explicit: false,
                        steps: vec![at],
                    });
                    VarId(vars.len() - 1)
                }
            };
            ids.push(id);
        }
        by_step.push(ids);
    }
    Ok(BindingTable { vars, by_step })
}
