//! Exact classical inference by full-joint enumeration.
//!
//! The networks this library targets have a handful of variables, so plain
//! enumeration is both the production algorithm and the oracle the
//! interference module is checked against. [`joint_table`] refuses to
//! enumerate past [`DEFAULT_CONFIG_CAP`] configurations.

use crate::net::{decode_config, Assignment, Evidence, ModelError, Network};
use thiserror::Error;

/// Default ceiling on enumerable joint configurations (2^20).
pub const DEFAULT_CONFIG_CAP: u128 = 1 << 20;

/// Errors raised by conditional inference.
#[derive(Debug, Error)]
pub enum InferError {
    #[error("query variable `{0}` is part of the evidence")]
    QueryInEvidence(String),
    #[error("evidence has probability zero; the conditional distribution is undefined")]
    ZeroEvidenceMass,
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// A normalized probability distribution over one variable's states.
#[derive(Debug, Clone, PartialEq)]
pub struct Distribution {
    pub variable: String,
    pub probabilities: Vec<f64>,
}

impl Distribution {
    /// Probability of the given state index.
    pub fn p(&self, state: usize) -> f64 {
        self.probabilities[state]
    }
}

/// Full-joint probability of a total assignment:
/// the product of one CPT entry per variable.
pub fn joint_probability(net: &Network, a: &Assignment) -> f64 {
    net.canonical_order()
        .iter()
        .map(|&v| net.cpt_value(v, a))
        .product()
}

/// The full joint distribution, one entry per configuration in canonical
/// index order. Entries sum to 1 within 1e-9 for any valid network.
pub fn joint_table(net: &Network) -> Result<Vec<(Assignment, f64)>, ModelError> {
    joint_table_capped(net, DEFAULT_CONFIG_CAP)
}

/// [`joint_table`] with an explicit configuration cap.
pub fn joint_table_capped(
    net: &Network,
    cap: u128,
) -> Result<Vec<(Assignment, f64)>, ModelError> {
    let count = net.config_count();
    if count > cap {
        return Err(ModelError::ConfigCapExceeded { count, cap });
    }
    let mut table = Vec::with_capacity(count as usize);
    for idx in 0..count as usize {
        let a = net.config_from_index(idx);
        let p = joint_probability(net, &a);
        table.push((a, p));
    }
    Ok(table)
}

/// Exact conditional distribution `Pr(query | evidence)` by summing the
/// joint over every unobserved configuration and normalizing.
///
/// Evidence with probability zero is an explicit error rather than a NaN.
pub fn infer_classical(
    net: &Network,
    query: usize,
    evidence: &Evidence,
) -> Result<Distribution, InferError> {
    let masses = state_masses(net, query, evidence)?;
    normalize(net, query, masses)
}

/// Unnormalized per-state masses: for each query state, the summed joint
/// probability over unobserved configurations consistent with the evidence.
pub(crate) fn state_masses(
    net: &Network,
    query: usize,
    evidence: &Evidence,
) -> Result<Vec<f64>, InferError> {
    if evidence.contains(query) {
        return Err(InferError::QueryInEvidence(
            net.variable(query).name.clone(),
        ));
    }
    let unobserved = net.unobserved_vars(query, evidence);
    let radices: Vec<usize> = unobserved.iter().map(|&v| net.cardinality(v)).collect();
    let configs: usize = radices.iter().product();

    let mut scratch = Assignment::new(net, vec![0; net.var_count()])
        .expect("zero assignment is always total");
    for (v, s) in evidence.iter() {
        scratch.set(v, s);
    }

    let mut digits = vec![0usize; unobserved.len()];
    let mut masses = vec![0.0; net.cardinality(query)];
    for (state, mass) in masses.iter_mut().enumerate() {
        scratch.set(query, state);
        for k in 0..configs {
            decode_config(&radices, k, &mut digits);
            for (i, &v) in unobserved.iter().enumerate() {
                scratch.set(v, digits[i]);
            }
            *mass += joint_probability(net, &scratch);
        }
    }
    Ok(masses)
}

pub(crate) fn normalize(
    net: &Network,
    query: usize,
    masses: Vec<f64>,
) -> Result<Distribution, InferError> {
    let total: f64 = masses.iter().sum();
    if total <= 0.0 {
        return Err(InferError::ZeroEvidenceMass);
    }
    Ok(Distribution {
        variable: net.variable(query).name.clone(),
        probabilities: masses.into_iter().map(|m| m / total).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::net::builtin;

    fn assignment(net: &Network, pairs: &[(&str, &str)]) -> Assignment {
        Assignment::from_labels(net, pairs).unwrap()
    }

    #[test]
    fn gamble_joint_play_win_play() {
        let net = builtin("gamble").unwrap();
        let a = assignment(&net, &[("U", "Play"), ("G1", "Win"), ("G2", "Play")]);
        assert!((joint_probability(&net, &a) - 0.17).abs() < 1e-12);
    }

    #[test]
    fn gamble_joint_play_lose_play() {
        let net = builtin("gamble").unwrap();
        let a = assignment(&net, &[("U", "Play"), ("G1", "Lose"), ("G2", "Play")]);
        assert!((joint_probability(&net, &a) - 0.125).abs() < 1e-12);
    }

    #[test]
    fn one_variable_joint_is_the_prior() {
        let net = crate::net::parse_network(
            r#"{
                "name": "coin",
                "variables": [{"name": "X", "states": ["a", "b"]}],
                "parents": {"X": []},
                "cpt": {"X": {"": [0.3, 0.7]}}
            }"#,
        )
        .unwrap();
        let a = Assignment::new(&net, vec![0]).unwrap();
        assert_eq!(joint_probability(&net, &a), 0.3);
        let table = joint_table(&net).unwrap();
        assert_eq!(table[0].1, 0.3);
        assert_eq!(table[1].1, 0.7);
    }

    #[test]
    fn gamble_joint_table_matches_reference() {
        let net = builtin("gamble").unwrap();
        let expected = [0.17, 0.08, 0.125, 0.125, 0.17, 0.08, 0.125, 0.125];
        let table = joint_table(&net).unwrap();
        assert_eq!(table.len(), 8);
        for (i, (_, p)) in table.iter().enumerate() {
            assert!((p - expected[i]).abs() < 1e-12, "cell {i}: {p}");
        }
    }

    #[test]
    fn burglar_joint_table_sums_to_one() {
        let net = builtin("burglar").unwrap();
        let table = joint_table(&net).unwrap();
        assert_eq!(table.len(), 16);
        let sum: f64 = table.iter().map(|(_, p)| p).sum();
        assert!((sum - 1.0).abs() < 1e-9);
    }

    #[test]
    fn gamble_classical_inference() {
        let net = builtin("gamble").unwrap();
        let q = net.var_index("G2").unwrap();
        let ev = Evidence::from_labels(&net, &[("U", "Play")]).unwrap();
        let dist = infer_classical(&net, q, &ev).unwrap();
        assert!((dist.p(0) - 0.59).abs() < 1e-10);
        assert!((dist.p(1) - 0.41).abs() < 1e-10);
    }

    #[test]
    fn burglar_alarm_prior() {
        let net = builtin("burglar").unwrap();
        let q = net.var_index("Alarm").unwrap();
        let dist = infer_classical(&net, q, &Evidence::empty()).unwrap();
        assert!((dist.p(0) - 0.0347).abs() < 5e-4);
    }

    #[test]
    fn burglar_given_john_calls() {
        let net = builtin("burglar").unwrap();
        let q = net.var_index("Burglar").unwrap();
        let ev = Evidence::from_labels(&net, &[("JohnCalls", "t")]).unwrap();
        let dist = infer_classical(&net, q, &ev).unwrap();
        assert!((dist.p(0) - 0.2158).abs() < 5e-4);
    }

    #[test]
    fn query_in_evidence_is_rejected() {
        let net = builtin("gamble").unwrap();
        let q = net.var_index("U").unwrap();
        let ev = Evidence::from_labels(&net, &[("U", "Play")]).unwrap();
        assert!(matches!(
            infer_classical(&net, q, &ev),
            Err(InferError::QueryInEvidence(_))
        ));
    }

    #[test]
    fn zero_probability_evidence_is_an_error() {
        let net = crate::net::parse_network(
            r#"{
                "name": "dead-branch",
                "variables": [
                    {"name": "A", "states": ["t", "f"]},
                    {"name": "B", "states": ["t", "f"]}
                ],
                "parents": {"B": ["A"]},
                "cpt": {
                    "A": {"": [1.0, 0.0]},
                    "B": {"t": [0.5, 0.5], "f": [0.5, 0.5]}
                }
            }"#,
        )
        .unwrap();
        let q = net.var_index("B").unwrap();
        let ev = Evidence::from_labels(&net, &[("A", "f")]).unwrap();
        assert!(matches!(
            infer_classical(&net, q, &ev),
            Err(InferError::ZeroEvidenceMass)
        ));
    }

    #[test]
    fn cap_is_enforced() {
        let net = builtin("burglar").unwrap();
        assert!(matches!(
            joint_table_capped(&net, 8),
            Err(ModelError::ConfigCapExceeded { .. })
        ));
    }
}
