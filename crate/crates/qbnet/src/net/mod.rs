//! Network data model: discrete variables, conditional probability tables,
//! assignments and evidence.
//!
//! A [`Network`] is immutable after construction and every constructor
//! validates the full invariant set (unique names, normalized CPT rows,
//! acyclic edge relation). All modules index joint configurations the same
//! way: variables are kept in a canonical order (topological, ties broken by
//! declaration order) and a configuration maps to the mixed-radix integer
//! with the *last* canonical variable as the fastest-moving digit.

mod builtins;
mod format;
mod validate;

pub use builtins::{builtin, BUILTIN_NAMES};
pub use format::{parse_network, serialize_network, NetworkDoc, ParseError, VariableDoc};
pub use validate::{validate, Violation, ViolationCode};

use std::collections::BTreeMap;
use thiserror::Error;

/// Errors raised by model lookups and constructors.
#[derive(Debug, Error)]
pub enum ModelError {
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("unknown state `{state}` for variable `{variable}`")]
    UnknownState { variable: String, state: String },
    #[error("state index {index} out of range for variable `{variable}` ({cardinality} states)")]
    StateOutOfRange {
        variable: String,
        index: usize,
        cardinality: usize,
    },
    #[error("assignment does not cover variable `{0}`")]
    PartialAssignment(String),
    #[error("variable `{0}` assigned more than once")]
    DuplicateAssignment(String),
    #[error("{count} joint configurations exceed the cap of {cap}")]
    ConfigCapExceeded { count: u128, cap: u128 },
    #[error("unknown builtin network `{0}` (expected one of: gamble, burglar, lung_cancer)")]
    UnknownBuiltin(String),
}

/// A named discrete variable with an ordered list of state labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Variable {
    pub name: String,
    pub states: Vec<String>,
}

impl Variable {
    pub fn cardinality(&self) -> usize {
        self.states.len()
    }

    pub fn state_index(&self, label: &str) -> Option<usize> {
        self.states.iter().position(|s| s == label)
    }
}

/// Conditional probability table of one variable given its parents.
///
/// `rows[parent_config]` is the distribution over the owner's states, where
/// `parent_config` is the mixed-radix index of the parent states in declared
/// parent order (first parent most significant).
#[derive(Debug, Clone, PartialEq)]
pub struct Cpt {
    pub parents: Vec<usize>,
    pub rows: Vec<Vec<f64>>,
}

/// A validated discrete Bayesian network.
#[derive(Debug, Clone, PartialEq)]
pub struct Network {
    name: String,
    variables: Vec<Variable>,
    cpts: Vec<Cpt>,
    /// Canonical variable order: topological, ties by declaration order.
    order: Vec<usize>,
    metadata: BTreeMap<String, String>,
}

impl Network {
    pub(crate) fn from_parts(
        name: String,
        variables: Vec<Variable>,
        cpts: Vec<Cpt>,
        order: Vec<usize>,
        metadata: BTreeMap<String, String>,
    ) -> Self {
        Network {
            name,
            variables,
            cpts,
            order,
            metadata,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn metadata(&self) -> &BTreeMap<String, String> {
        &self.metadata
    }

    pub fn var_count(&self) -> usize {
        self.variables.len()
    }

    pub fn variables(&self) -> &[Variable] {
        &self.variables
    }

    pub fn variable(&self, var: usize) -> &Variable {
        &self.variables[var]
    }

    /// Declaration index of a variable by name.
    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.variables.iter().position(|v| v.name == name)
    }

    pub fn var_index_or_err(&self, name: &str) -> Result<usize, ModelError> {
        self.var_index(name)
            .ok_or_else(|| ModelError::UnknownVariable(name.to_string()))
    }

    pub fn cardinality(&self, var: usize) -> usize {
        self.variables[var].cardinality()
    }

    pub fn cpt(&self, var: usize) -> &Cpt {
        &self.cpts[var]
    }

    pub fn parents(&self, var: usize) -> &[usize] {
        &self.cpts[var].parents
    }

    /// Canonical (topological) variable order used for all configuration
    /// indexing.
    pub fn canonical_order(&self) -> &[usize] {
        &self.order
    }

    /// Number of joint configurations, exact in `u128`.
    pub fn config_count(&self) -> u128 {
        self.variables
            .iter()
            .map(|v| v.cardinality() as u128)
            .product()
    }

    /// CPT entry `Pr(var = a(var) | parents as assigned)`.
    pub fn cpt_value(&self, var: usize, a: &Assignment) -> f64 {
        let cpt = &self.cpts[var];
        let row = self.parent_config_index(var, a);
        cpt.rows[row][a.get(var)]
    }

    /// Mixed-radix index of the parent states of `var` under `a`
    /// (declared parent order, first parent most significant).
    pub fn parent_config_index(&self, var: usize, a: &Assignment) -> usize {
        let mut idx = 0;
        for &p in &self.cpts[var].parents {
            idx = idx * self.cardinality(p) + a.get(p);
        }
        idx
    }

    /// Canonical configuration index of a total assignment.
    ///
    /// For canonical order `v1..vn` this is `sum s_i * prod_{j>i} |states(v_j)|`,
    /// a bijection between assignments and `0..config_count()`.
    pub fn config_index(&self, a: &Assignment) -> usize {
        let mut idx = 0;
        for &v in &self.order {
            idx = idx * self.cardinality(v) + a.get(v);
        }
        idx
    }

    /// Inverse of [`Network::config_index`].
    pub fn config_from_index(&self, mut idx: usize) -> Assignment {
        let mut states = vec![0; self.var_count()];
        for &v in self.order.iter().rev() {
            let card = self.cardinality(v);
            states[v] = idx % card;
            idx /= card;
        }
        Assignment { states }
    }

    /// Unobserved variables for a query: everything that is neither the query
    /// nor evidence, in canonical order.
    pub fn unobserved_vars(&self, query: usize, evidence: &Evidence) -> Vec<usize> {
        self.order
            .iter()
            .copied()
            .filter(|&v| v != query && !evidence.contains(v))
            .collect()
    }

    /// Round-trippable document form of this network.
    pub fn to_doc(&self) -> NetworkDoc {
        format::network_to_doc(self)
    }
}

/// A total assignment of one state index per variable.
///
/// Totality is enforced at construction, so operations taking an
/// `Assignment` cannot observe a partial one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Assignment {
    states: Vec<usize>,
}

impl Assignment {
    /// Builds an assignment from raw state indices in declaration order.
    pub fn new(net: &Network, states: Vec<usize>) -> Result<Self, ModelError> {
        if states.len() != net.var_count() {
            let missing = net.variables.get(states.len()).map_or("?", |v| &v.name);
            return Err(ModelError::PartialAssignment(missing.to_string()));
        }
        for (v, &s) in states.iter().enumerate() {
            let card = net.cardinality(v);
            if s >= card {
                return Err(ModelError::StateOutOfRange {
                    variable: net.variable(v).name.clone(),
                    index: s,
                    cardinality: card,
                });
            }
        }
        Ok(Assignment { states })
    }

    /// Builds a total assignment from `(variable, state-label)` pairs.
    pub fn from_labels(net: &Network, pairs: &[(&str, &str)]) -> Result<Self, ModelError> {
        let mut states = vec![usize::MAX; net.var_count()];
        for &(name, label) in pairs {
            let v = net.var_index_or_err(name)?;
            if states[v] != usize::MAX {
                return Err(ModelError::DuplicateAssignment(name.to_string()));
            }
            states[v] = net.variable(v).state_index(label).ok_or_else(|| {
                ModelError::UnknownState {
                    variable: name.to_string(),
                    state: label.to_string(),
                }
            })?;
        }
        if let Some(v) = states.iter().position(|&s| s == usize::MAX) {
            return Err(ModelError::PartialAssignment(net.variable(v).name.clone()));
        }
        Ok(Assignment { states })
    }

    pub fn get(&self, var: usize) -> usize {
        self.states[var]
    }

    pub(crate) fn set(&mut self, var: usize, state: usize) {
        self.states[var] = state;
    }

    pub fn states(&self) -> &[usize] {
        &self.states
    }
}

/// A partial assignment: the observed variables and their states.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Evidence {
    map: BTreeMap<usize, usize>,
}

impl Evidence {
    pub fn empty() -> Self {
        Evidence::default()
    }

    /// Builds evidence from `(variable, state-label)` pairs.
    pub fn from_labels(net: &Network, pairs: &[(&str, &str)]) -> Result<Self, ModelError> {
        let mut ev = Evidence::empty();
        for &(name, label) in pairs {
            let v = net.var_index_or_err(name)?;
            let s = net.variable(v).state_index(label).ok_or_else(|| {
                ModelError::UnknownState {
                    variable: name.to_string(),
                    state: label.to_string(),
                }
            })?;
            if ev.map.insert(v, s).is_some() {
                return Err(ModelError::DuplicateAssignment(name.to_string()));
            }
        }
        Ok(ev)
    }

    pub fn insert(&mut self, net: &Network, var: usize, state: usize) -> Result<(), ModelError> {
        let card = net.cardinality(var);
        if state >= card {
            return Err(ModelError::StateOutOfRange {
                variable: net.variable(var).name.clone(),
                index: state,
                cardinality: card,
            });
        }
        self.map.insert(var, state);
        Ok(())
    }

    pub fn contains(&self, var: usize) -> bool {
        self.map.contains_key(&var)
    }

    pub fn get(&self, var: usize) -> Option<usize> {
        self.map.get(&var).copied()
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    /// Observed `(variable, state)` pairs in ascending variable order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.map.iter().map(|(&v, &s)| (v, s))
    }
}

/// Decodes configuration index `idx` over the given radices into `out`
/// (last radix fastest). Shared by path enumeration and marginalization so
/// every module agrees on configuration order.
pub(crate) fn decode_config(radices: &[usize], mut idx: usize, out: &mut [usize]) {
    debug_assert_eq!(radices.len(), out.len());
    for i in (0..radices.len()).rev() {
        out[i] = idx % radices[i];
        idx /= radices[i];
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_order_is_topological_with_declaration_ties() {
        // Declared out of topological order on purpose.
        let doc: NetworkDoc = serde_json::from_str(
            r#"{
                "name": "scrambled",
                "variables": [
                    {"name": "C", "states": ["a", "b"]},
                    {"name": "A", "states": ["a", "b"]},
                    {"name": "B", "states": ["a", "b"]}
                ],
                "parents": {"C": ["B"], "B": ["A"], "A": []},
                "cpt": {
                    "A": {"": [0.5, 0.5]},
                    "B": {"a": [0.5, 0.5], "b": [0.5, 0.5]},
                    "C": {"a": [0.5, 0.5], "b": [0.5, 0.5]}
                }
            }"#,
        )
        .unwrap();
        let net = Network::try_from(doc).unwrap();
        let names: Vec<&str> = net
            .canonical_order()
            .iter()
            .map(|&v| net.variable(v).name.as_str())
            .collect();
        assert_eq!(names, ["A", "B", "C"]);
    }

    #[test]
    fn config_index_roundtrip_is_bijective() {
        let net = builtin("burglar").unwrap();
        let n = net.config_count() as usize;
        for idx in 0..n {
            let a = net.config_from_index(idx);
            assert_eq!(net.config_index(&a), idx);
        }
    }

    #[test]
    fn assignment_requires_totality() {
        let net = builtin("gamble").unwrap();
        let err = Assignment::from_labels(&net, &[("U", "Play")]).unwrap_err();
        assert!(matches!(err, ModelError::PartialAssignment(_)));
    }

    #[test]
    fn assignment_rejects_unknown_state() {
        let net = builtin("gamble").unwrap();
        let err = Assignment::from_labels(
            &net,
            &[("U", "Maybe"), ("G1", "Win"), ("G2", "Play")],
        )
        .unwrap_err();
        assert!(matches!(err, ModelError::UnknownState { .. }));
    }

    #[test]
    fn evidence_rejects_duplicates() {
        let net = builtin("gamble").unwrap();
        let err = Evidence::from_labels(&net, &[("U", "Play"), ("U", "Not_Play")]).unwrap_err();
        assert!(matches!(err, ModelError::DuplicateAssignment(_)));
    }
}
