//! Structural validation of network documents.
//!
//! Violations are data, not errors: [`validate`] returns every problem it can
//! find so a caller (or the CLI) can report them all at once. A document with
//! an empty violation list is guaranteed to build into a [`super::Network`].

use super::format::NetworkDoc;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

/// Tolerance for CPT row sums. Reference tables carry 4 decimals and
/// generated networks are exact, so this is deliberately tight.
pub const ROW_SUM_TOLERANCE: f64 = 1e-9;

/// Machine-readable violation code.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ViolationCode {
    EmptyName,
    EmptyStates,
    ReservedStateChar,
    DuplicateVariableName,
    DuplicateStateLabel,
    UnknownVariable,
    CycleDetected,
    MissingCpt,
    MissingCptRow,
    UnknownCptRow,
    WrongRowLength,
    EntryOutOfRange,
    RowNotNormalized,
}

impl fmt::Display for ViolationCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // The debug name is the stable code printed by the CLI.
        write!(f, "{:?}", self)
    }
}

/// One invariant violation with the offending key path.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub code: ViolationCode,
    pub path: String,
    pub message: String,
}

impl Violation {
    fn new(code: ViolationCode, path: impl Into<String>, message: impl Into<String>) -> Self {
        Violation {
            code,
            path: path.into(),
            message: message.into(),
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} at {}: {}", self.code, self.path, self.message)
    }
}

/// Checks every model invariant on a structurally parseable document.
///
/// Returns an empty list iff the document describes a valid network.
pub fn validate(doc: &NetworkDoc) -> Vec<Violation> {
    let mut out = Vec::new();
    let mut names = BTreeSet::new();

    for (i, var) in doc.variables.iter().enumerate() {
        let path = format!("variables[{}]", i);
        if var.name.is_empty() {
            out.push(Violation::new(
                ViolationCode::EmptyName,
                &path,
                "variable name must be non-empty",
            ));
        }
        if !names.insert(var.name.as_str()) {
            out.push(Violation::new(
                ViolationCode::DuplicateVariableName,
                &path,
                format!("variable `{}` declared more than once", var.name),
            ));
        }
        if var.states.is_empty() {
            out.push(Violation::new(
                ViolationCode::EmptyStates,
                &path,
                format!("variable `{}` must have at least one state", var.name),
            ));
        }
        let mut labels = BTreeSet::new();
        for label in &var.states {
            if label.is_empty() {
                out.push(Violation::new(
                    ViolationCode::EmptyName,
                    &path,
                    format!("variable `{}` has an empty state label", var.name),
                ));
            }
            if label.contains('|') {
                // '|' separates parent states in CPT row keys.
                out.push(Violation::new(
                    ViolationCode::ReservedStateChar,
                    &path,
                    format!("state label `{}` contains the reserved character `|`", label),
                ));
            }
            if !labels.insert(label.as_str()) {
                out.push(Violation::new(
                    ViolationCode::DuplicateStateLabel,
                    &path,
                    format!("state `{}` repeated in variable `{}`", label, var.name),
                ));
            }
        }
    }

    // Parent references must name declared variables.
    let mut parents_ok: BTreeMap<&str, bool> = BTreeMap::new();
    for (child, parents) in &doc.parents {
        let mut ok = names.contains(child.as_str());
        if !ok {
            out.push(Violation::new(
                ViolationCode::UnknownVariable,
                format!("parents.{}", child),
                format!("`{}` is not a declared variable", child),
            ));
        }
        for p in parents {
            if !names.contains(p.as_str()) {
                out.push(Violation::new(
                    ViolationCode::UnknownVariable,
                    format!("parents.{}", child),
                    format!("parent `{}` is not a declared variable", p),
                ));
                ok = false;
            }
        }
        parents_ok.insert(child.as_str(), ok);
    }
    for owner in doc.cpt.keys() {
        if !names.contains(owner.as_str()) {
            out.push(Violation::new(
                ViolationCode::UnknownVariable,
                format!("cpt.{}", owner),
                format!("`{}` is not a declared variable", owner),
            ));
        }
    }

    if let Some(cycle) = find_cycle(doc) {
        out.push(Violation::new(
            ViolationCode::CycleDetected,
            "parents",
            format!("edge relation has no topological order (cycle through {})", cycle),
        ));
    }

    // Row-level checks per declared variable.
    for var in &doc.variables {
        let Some(rows) = doc.cpt.get(&var.name) else {
            out.push(Violation::new(
                ViolationCode::MissingCpt,
                format!("cpt.{}", var.name),
                format!("no conditional probability table for `{}`", var.name),
            ));
            continue;
        };
        let parent_names = doc.parents.get(&var.name).cloned().unwrap_or_default();
        // Row keys can only be enumerated when every parent is known.
        let resolvable = parent_names.iter().all(|p| names.contains(p.as_str()))
            && *parents_ok.get(var.name.as_str()).unwrap_or(&true);
        if resolvable {
            let parent_states: Vec<&[String]> = parent_names
                .iter()
                .map(|p| {
                    doc.variables
                        .iter()
                        .find(|v| &v.name == p)
                        .map(|v| v.states.as_slice())
                        .unwrap_or(&[])
                })
                .collect();
            let mut expected = BTreeSet::new();
            for key in row_keys(&parent_states) {
                if !rows.contains_key(&key) {
                    out.push(Violation::new(
                        ViolationCode::MissingCptRow,
                        format!("cpt.{}.{}", var.name, key),
                        format!("missing row for parent states `{}`", key),
                    ));
                }
                expected.insert(key);
            }
            for key in rows.keys() {
                if !expected.contains(key) {
                    out.push(Violation::new(
                        ViolationCode::UnknownCptRow,
                        format!("cpt.{}.{}", var.name, key),
                        format!("`{}` does not match any parent state combination", key),
                    ));
                }
            }
        }
        for (key, row) in rows {
            let path = format!("cpt.{}.{}", var.name, key);
            if row.len() != var.states.len() {
                out.push(Violation::new(
                    ViolationCode::WrongRowLength,
                    &path,
                    format!("row has {} entries, expected {}", row.len(), var.states.len()),
                ));
                continue;
            }
            let mut in_range = true;
            for &p in row {
                if !(0.0..=1.0).contains(&p) || !p.is_finite() {
                    out.push(Violation::new(
                        ViolationCode::EntryOutOfRange,
                        &path,
                        format!("entry {} is not a probability in [0, 1]", p),
                    ));
                    in_range = false;
                }
            }
            if in_range {
                let sum: f64 = row.iter().sum();
                if (sum - 1.0).abs() > ROW_SUM_TOLERANCE {
                    out.push(Violation::new(
                        ViolationCode::RowNotNormalized,
                        &path,
                        format!("row sums to {} (must be 1 within {:e})", sum, ROW_SUM_TOLERANCE),
                    ));
                }
            }
        }
    }

    out
}

/// Every `|`-joined combination of parent state labels, first parent most
/// significant; a lone empty key when there are no parents.
fn row_keys(parent_states: &[&[String]]) -> Vec<String> {
    let mut keys = vec![String::new()];
    for states in parent_states {
        let mut next = Vec::with_capacity(keys.len() * states.len());
        for key in &keys {
            for s in *states {
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

/// Kahn's algorithm over the declared variables; returns the names stuck in a
/// cycle, if any. Unknown parent names are ignored here (reported separately).
fn find_cycle(doc: &NetworkDoc) -> Option<String> {
    let names: Vec<&str> = doc.variables.iter().map(|v| v.name.as_str()).collect();
    let index: BTreeMap<&str, usize> = names.iter().enumerate().map(|(i, &n)| (n, i)).collect();
    let n = names.len();
    let mut children: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut indegree = vec![0usize; n];
    for (child, parents) in &doc.parents {
        let Some(&c) = index.get(child.as_str()) else {
            continue;
        };
        for p in parents {
            if let Some(&pi) = index.get(p.as_str()) {
                children[pi].push(c);
                indegree[c] += 1;
            }
        }
    }
    let mut placed = vec![false; n];
    let mut remaining = n;
    loop {
        // Lowest declaration index first keeps the order deterministic.
        let Some(next) = (0..n).find(|&i| !placed[i] && indegree[i] == 0) else {
            break;
        };
        placed[next] = true;
        remaining -= 1;
        for &c in &children[next] {
            indegree[c] -= 1;
        }
    }
    if remaining == 0 {
        None
    } else {
        let stuck: Vec<&str> = (0..n).filter(|&i| !placed[i]).map(|i| names[i]).collect();
        Some(stuck.join(", "))
    }
}

/// Topological order with declaration-order tie-breaking. Only call on
/// documents that passed [`validate`].
pub(super) fn topological_order(doc: &NetworkDoc) -> Vec<usize> {
    let names: Vec<&str> = doc.variables.iter().map(|v| v.name.as_str()).collect();
    let index: BTreeMap<&str, usize> = names.iter().enumerate().map(|(i, &n)| (n, i)).collect();
    let n = names.len();
    let mut children: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut indegree = vec![0usize; n];
    for (child, parents) in &doc.parents {
        let c = index[child.as_str()];
        for p in parents {
            children[index[p.as_str()]].push(c);
            indegree[c] += 1;
        }
    }
    let mut order = Vec::with_capacity(n);
    let mut placed = vec![false; n];
    while order.len() < n {
        let next = (0..n)
            .find(|&i| !placed[i] && indegree[i] == 0)
            .expect("validated documents are acyclic");
        placed[next] = true;
        order.push(next);
        for &c in &children[next] {
            indegree[c] -= 1;
        }
    }
    order
}

#[cfg(test)]
mod tests {
    use super::super::{builtin, parse_network};
    use super::*;

    #[test]
    fn builtins_have_no_violations() {
        for name in super::super::BUILTIN_NAMES {
            let net = builtin(name).unwrap();
            assert!(validate(&net.to_doc()).is_empty(), "{name} should validate");
        }
    }

    #[test]
    fn cycle_is_reported() {
        let doc: NetworkDoc = serde_json::from_str(
            r#"{
                "name": "loop",
                "variables": [
                    {"name": "A", "states": ["t", "f"]},
                    {"name": "B", "states": ["t", "f"]}
                ],
                "parents": {"A": ["B"], "B": ["A"]},
                "cpt": {
                    "A": {"t": [0.5, 0.5], "f": [0.5, 0.5]},
                    "B": {"t": [0.5, 0.5], "f": [0.5, 0.5]}
                }
            }"#,
        )
        .unwrap();
        let violations = validate(&doc);
        assert!(violations
            .iter()
            .any(|v| v.code == ViolationCode::CycleDetected));
    }

    #[test]
    fn unnormalized_row_names_the_offending_key() {
        let text = r#"{
            "name": "bad",
            "variables": [{"name": "A", "states": ["t", "f"]}],
            "parents": {"A": []},
            "cpt": {"A": {"": [0.6, 0.6]}}
        }"#;
        let err = parse_network(text).unwrap_err();
        let rendered = err.to_string();
        assert!(rendered.contains("RowNotNormalized"), "{rendered}");
        assert!(rendered.contains("cpt.A."), "{rendered}");
    }

    #[test]
    fn missing_row_is_reported_with_key_path() {
        let doc: NetworkDoc = serde_json::from_str(
            r#"{
                "name": "gap",
                "variables": [
                    {"name": "A", "states": ["t", "f"]},
                    {"name": "B", "states": ["t", "f"]}
                ],
                "parents": {"B": ["A"]},
                "cpt": {
                    "A": {"": [0.5, 0.5]},
                    "B": {"t": [0.5, 0.5]}
                }
            }"#,
        )
        .unwrap();
        let violations = validate(&doc);
        assert!(violations
            .iter()
            .any(|v| v.code == ViolationCode::MissingCptRow && v.path == "cpt.B.f"));
    }

    #[test]
    fn degenerate_one_state_network_is_valid() {
        let text = r#"{
            "name": "unit",
            "variables": [{"name": "A", "states": ["only"]}],
            "parents": {"A": []},
            "cpt": {"A": {"": [1.0]}}
        }"#;
        let net = parse_network(text).unwrap();
        assert_eq!(net.config_count(), 1);
    }
}
