//! The textual network format: a UTF-8 JSON document.
//!
//! Top-level keys:
//! - `name`: network name
//! - `variables`: ordered list of `{ "name", "states" }`
//! - `parents`: map from variable name to its ordered parent list
//! - `cpt`: map from variable name to rows; each row key is the `|`-joined
//!   tuple of parent state labels in declared parent order (`""` for root
//!   nodes) and each row value is a probability list in owner-state order
//! - `metadata` (optional): free-form string map
//!
//! `parse_network(serialize_network(net))` is the identity on valid networks.

use super::validate::{topological_order, validate, Violation};
use super::{Cpt, Network, Variable};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

/// One variable in document form.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VariableDoc {
    pub name: String,
    pub states: Vec<String>,
}

/// Structurally parsed, not-yet-validated network document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetworkDoc {
    pub name: String,
    pub variables: Vec<VariableDoc>,
    #[serde(default)]
    pub parents: BTreeMap<String, Vec<String>>,
    pub cpt: BTreeMap<String, BTreeMap<String, Vec<f64>>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub metadata: BTreeMap<String, String>,
}

/// Why a document failed to become a [`Network`].
#[derive(Debug, Error)]
pub enum ParseError {
    #[error("network document is not valid JSON: {0}")]
    Syntax(#[from] serde_json::Error),
    #[error("{}", render_violations(.0))]
    Invalid(Vec<Violation>),
}

impl ParseError {
    /// The individual violations, if this is a semantic error.
    pub fn violations(&self) -> &[Violation] {
        match self {
            ParseError::Syntax(_) => &[],
            ParseError::Invalid(v) => v,
        }
    }
}

fn render_violations(violations: &[Violation]) -> String {
    let lines: Vec<String> = violations.iter().map(Violation::to_string).collect();
    format!(
        "network document violates {} constraint(s):\n{}",
        violations.len(),
        lines.join("\n")
    )
}

impl TryFrom<NetworkDoc> for Network {
    type Error = ParseError;

    fn try_from(doc: NetworkDoc) -> Result<Self, ParseError> {
        let violations = validate(&doc);
        if !violations.is_empty() {
            return Err(ParseError::Invalid(violations));
        }
        let order = topological_order(&doc);
        let index: BTreeMap<&str, usize> = doc
            .variables
            .iter()
            .enumerate()
            .map(|(i, v)| (v.name.as_str(), i))
            .collect();

        let variables: Vec<Variable> = doc
            .variables
            .iter()
            .map(|v| Variable {
                name: v.name.clone(),
                states: v.states.clone(),
            })
            .collect();

        let mut cpts = Vec::with_capacity(variables.len());
        for var in &doc.variables {
            let parent_ids: Vec<usize> = doc
                .parents
                .get(&var.name)
                .map(|ps| ps.iter().map(|p| index[p.as_str()]).collect())
                .unwrap_or_default();
            let rows_by_key = &doc.cpt[&var.name];
            let mut rows = Vec::new();
            for key in row_keys_for(&doc, &parent_ids) {
                rows.push(rows_by_key[&key].clone());
            }
            cpts.push(Cpt {
                parents: parent_ids,
                rows,
            });
        }

        Ok(Network::from_parts(
            doc.name,
            variables,
            cpts,
            order,
            doc.metadata,
        ))
    }
}

/// Row keys for the given parents in dense parent-config order
/// (first parent most significant).
fn row_keys_for(doc: &NetworkDoc, parent_ids: &[usize]) -> Vec<String> {
    let mut keys = vec![String::new()];
    for &p in parent_ids {
        let states = &doc.variables[p].states;
        let mut next = Vec::with_capacity(keys.len() * states.len());
        for key in &keys {
            for s in states {
                if key.is_empty() {
                    next.push(s.clone());
                } else {
                    next.push(format!("{}|{}", key, s));
                }
            }
        }
        keys = next;
    }
    keys
}

pub(super) fn network_to_doc(net: &Network) -> NetworkDoc {
    let variables: Vec<VariableDoc> = net
        .variables()
        .iter()
        .map(|v| VariableDoc {
            name: v.name.clone(),
            states: v.states.clone(),
        })
        .collect();
    let mut parents = BTreeMap::new();
    let mut cpt = BTreeMap::new();
    for (i, var) in net.variables().iter().enumerate() {
        let table = net.cpt(i);
        parents.insert(
            var.name.clone(),
            table
                .parents
                .iter()
                .map(|&p| net.variable(p).name.clone())
                .collect(),
        );
        let mut keys = vec![String::new()];
        for &p in &table.parents {
            let states = &net.variable(p).states;
            let mut next = Vec::with_capacity(keys.len() * states.len());
            for key in &keys {
                for s in states {
                    if key.is_empty() {
                        next.push(s.clone());
                    } else {
                        next.push(format!("{}|{}", key, s));
                    }
                }
            }
            keys = next;
        }
        let rows: BTreeMap<String, Vec<f64>> = keys
            .into_iter()
            .zip(table.rows.iter().cloned())
            .collect();
        cpt.insert(var.name.clone(), rows);
    }
    NetworkDoc {
        name: net.name().to_string(),
        variables,
        parents,
        cpt,
        metadata: net.metadata().clone(),
    }
}

/// Parses and validates a network from its JSON document form.
pub fn parse_network(text: &str) -> Result<Network, ParseError> {
    let doc: NetworkDoc = serde_json::from_str(text)?;
    Network::try_from(doc)
}

/// Serializes a network back to its JSON document form.
///
/// The output is deterministic (map keys sorted, two-space indentation) and
/// parses back to a structurally identical network.
pub fn serialize_network(net: &Network) -> String {
    let doc = network_to_doc(net);
    let mut text =
        serde_json::to_string_pretty(&doc).expect("network documents always serialize");
    text.push('\n');
    text
}

impl fmt::Display for NetworkDoc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}",
            serde_json::to_string_pretty(self).map_err(|_| fmt::Error)?
        )
    }
}
