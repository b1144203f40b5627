//! Shared helpers for the integration suites: a seeded random-network
//! generator and a brute-force conditional oracle that is independent of the
//! library's inference paths (own enumeration order, own CPT row indexing).

use qbnet::net::{Evidence, Network, NetworkDoc, VariableDoc};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;

/// Random network of `1..=max_vars` binary variables. Parents are any subset
/// of the earlier variables; CPT entries stay in [0.05, 0.95] so no evidence
/// combination has zero mass.
pub fn random_binary_network(rng: &mut ChaCha8Rng, max_vars: usize) -> Network {
    let n = rng.gen_range(1..=max_vars);
    let variables: Vec<VariableDoc> = (0..n)
        .map(|i| VariableDoc {
            name: format!("V{i}"),
            states: vec!["a".to_string(), "b".to_string()],
        })
        .collect();
    let mut parents = BTreeMap::new();
    let mut cpt = BTreeMap::new();
    for i in 0..n {
        let my_parents: Vec<usize> = (0..i).filter(|_| rng.gen_bool(0.5)).collect();
        parents.insert(
            format!("V{i}"),
            my_parents.iter().map(|p| format!("V{p}")).collect::<Vec<_>>(),
        );
        let mut rows = BTreeMap::new();
        for mask in 0..(1usize << my_parents.len()) {
            let key: Vec<String> = my_parents
                .iter()
                .enumerate()
                .map(|(pos, _)| {
                    if mask >> (my_parents.len() - 1 - pos) & 1 == 0 {
                        "a".to_string()
                    } else {
                        "b".to_string()
                    }
                })
                .collect();
            let p = rng.gen_range(0.05..0.95);
            rows.insert(key.join("|"), vec![p, 1.0 - p]);
        }
        cpt.insert(format!("V{i}"), rows);
    }
    let doc = NetworkDoc {
        name: "random".to_string(),
        variables,
        parents,
        cpt,
        metadata: BTreeMap::new(),
    };
    Network::try_from(doc).expect("generated networks are valid")
}

/// Random query plus evidence over distinct other variables.
pub fn random_query_evidence(rng: &mut ChaCha8Rng, net: &Network) -> (usize, Evidence) {
    let n = net.var_count();
    let query = rng.gen_range(0..n);
    let mut evidence = Evidence::empty();
    for v in 0..n {
        if v != query && rng.gen_bool(0.35) {
            let s = rng.gen_range(0..net.cardinality(v));
            evidence.insert(net, v, s).expect("state in range");
        }
    }
    (query, evidence)
}

/// Joint probability of a full state vector (declaration order), computed
/// with its own parent-row indexing.
fn raw_joint(net: &Network, states: &[usize]) -> f64 {
    let mut p = 1.0;
    for v in 0..net.var_count() {
        let mut row = 0usize;
        for &parent in net.parents(v) {
            row = row * net.cardinality(parent) + states[parent];
        }
        p *= net.cpt(v).rows[row][states[v]];
    }
    p
}

/// Walks every total assignment in declaration order.
fn for_each_assignment(net: &Network, mut f: impl FnMut(&[usize])) {
    let n = net.var_count();
    let mut states = vec![0usize; n];
    loop {
        f(&states);
        let mut pos = n;
        loop {
            if pos == 0 {
                return;
            }
            pos -= 1;
            states[pos] += 1;
            if states[pos] < net.cardinality(pos) {
                break;
            }
            states[pos] = 0;
        }
    }
}

/// Brute-force conditional `Pr(query | evidence)`: filter all joint rows by
/// the evidence and renormalize. `None` when the evidence has zero mass.
pub fn brute_force_conditional(
    net: &Network,
    query: usize,
    evidence: &Evidence,
) -> Option<Vec<f64>> {
    let mut masses = vec![0.0; net.cardinality(query)];
    for_each_assignment(net, |states| {
        if evidence.iter().all(|(v, s)| states[v] == s) {
            masses[states[query]] += raw_joint(net, states);
        }
    });
    let total: f64 = masses.iter().sum();
    if total <= 0.0 {
        return None;
    }
    Some(masses.into_iter().map(|m| m / total).collect())
}

/// Brute-force probability of the evidence itself.
pub fn brute_force_evidence_mass(net: &Network, evidence: &Evidence) -> f64 {
    let mut total = 0.0;
    for_each_assignment(net, |states| {
        if evidence.iter().all(|(v, s)| states[v] == s) {
            total += raw_joint(net, states);
        }
    });
    total
}
