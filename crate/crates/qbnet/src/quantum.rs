//! Path-based inference with interference.
//!
//! Marginalizing out unobserved variables classically sums the joint
//! probability of every unobserved configuration. Here each configuration is
//! instead treated as a path with amplitude magnitude `sqrt(p_i)` and a free
//! phase `theta_i`. Summing amplitudes rather than probabilities introduces
//! the cross term
//!
//! ```text
//! 2 * sum_{i<j} sqrt(p_i p_j) cos(theta_i - theta_j)
//! ```
//!
//! on top of the classical mass `sum_i p_i`, and a normalization factor
//! `alpha` over the query states turns the result back into a distribution.
//! When every cosine vanishes (or there is at most one path) the result
//! collapses to the classical conditional exactly.

use crate::classical::{self, Distribution, InferError};
use crate::net::{decode_config, Assignment, Evidence, ModelError, Network};
use num_complex::Complex64;
use std::f64::consts::TAU;
use thiserror::Error;

/// Errors raised by interference-based inference.
#[derive(Debug, Error)]
pub enum QuantumError {
    #[error(transparent)]
    Infer(#[from] InferError),
    #[error("theta vector has {got} phases but there are {expected} paths")]
    ThetaLengthMismatch { expected: usize, got: usize },
    #[error("{0} is not a probability in [0, 1]")]
    ProbabilityOutOfRange(f64),
    #[error("every query state has zero unnormalized mass; alpha is undefined")]
    DegenerateNormalization,
}

impl From<ModelError> for QuantumError {
    fn from(e: ModelError) -> Self {
        QuantumError::Infer(InferError::Model(e))
    }
}

/// Amplitude magnitude for a probability: `sqrt(p)`.
///
/// Phases are attached per path, not here.
pub fn amplitude_from_probability(p: f64) -> Result<f64, QuantumError> {
    if !(0.0..=1.0).contains(&p) || !p.is_finite() {
        return Err(QuantumError::ProbabilityOutOfRange(p));
    }
    Ok(p.sqrt())
}

/// Probability of a single path through a chain of transitions: the product
/// of the per-transition probabilities (the empty chain has probability 1).
/// Identical to the classical Markov value for the same path.
pub fn path_probability_single(chain: &[f64]) -> f64 {
    chain.iter().product()
}

/// One unobserved joint configuration viewed as a path.
#[derive(Debug, Clone, PartialEq)]
pub struct PathAmplitude {
    /// States of the unobserved variables, in canonical order.
    pub config: Vec<usize>,
    /// Classical joint probability of this path.
    pub probability: f64,
    /// `sqrt(probability)`.
    pub magnitude: f64,
}

/// `K` phases in `[0, 2pi)`, one per unobserved configuration in canonical
/// index order. The same vector applies to the paths of every query state.
#[derive(Debug, Clone, PartialEq)]
pub struct ThetaVector {
    phases: Vec<f64>,
}

impl ThetaVector {
    /// Wraps each phase into `[0, 2pi)`.
    pub fn new(phases: Vec<f64>) -> Self {
        ThetaVector {
            phases: phases.into_iter().map(wrap_phase).collect(),
        }
    }

    pub fn zeros(len: usize) -> Self {
        ThetaVector {
            phases: vec![0.0; len],
        }
    }

    pub fn len(&self) -> usize {
        self.phases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.phases.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.phases
    }

    pub fn get(&self, i: usize) -> f64 {
        self.phases[i]
    }

    /// Copy with `c` added to every phase (wrapped). Only phase differences
    /// matter, so this never changes an inference result.
    pub fn shifted(&self, c: f64) -> Self {
        ThetaVector::new(self.phases.iter().map(|t| t + c).collect())
    }
}

/// Wraps a phase into `[0, 2pi)`.
pub fn wrap_phase(theta: f64) -> f64 {
    let w = theta.rem_euclid(TAU);
    // rem_euclid can return 2*pi itself when theta is a tiny negative number.
    if w >= TAU {
        0.0
    } else {
        w
    }
}

/// One path per unobserved configuration, in canonical index order.
///
/// `probability` of path `k` is the full joint probability of
/// `evidence + {query = query_state} + configuration k`.
pub fn enumerate_paths(
    net: &Network,
    query: usize,
    query_state: usize,
    evidence: &Evidence,
) -> Result<Vec<PathAmplitude>, InferError> {
    if evidence.contains(query) {
        return Err(InferError::QueryInEvidence(
            net.variable(query).name.clone(),
        ));
    }
    let card = net.cardinality(query);
    if query_state >= card {
        return Err(InferError::Model(ModelError::StateOutOfRange {
            variable: net.variable(query).name.clone(),
            index: query_state,
            cardinality: card,
        }));
    }
    let unobserved = net.unobserved_vars(query, evidence);
    let radices: Vec<usize> = unobserved.iter().map(|&v| net.cardinality(v)).collect();
    let count: usize = radices.iter().product();

    let mut scratch = Assignment::new(net, vec![0; net.var_count()])
        .expect("zero assignment is always total");
    for (v, s) in evidence.iter() {
        scratch.set(v, s);
    }
    scratch.set(query, query_state);

    let mut paths = Vec::with_capacity(count);
    let mut digits = vec![0usize; unobserved.len()];
    for k in 0..count {
        decode_config(&radices, k, &mut digits);
        for (i, &v) in unobserved.iter().enumerate() {
            scratch.set(v, digits[i]);
        }
        let p = classical::joint_probability(net, &scratch);
        paths.push(PathAmplitude {
            config: digits.clone(),
            probability: p,
            magnitude: p.sqrt(),
        });
    }
    Ok(paths)
}

/// Number of paths (unobserved configurations) a theta vector must cover for
/// the given query and evidence.
pub fn path_count(net: &Network, query: usize, evidence: &Evidence) -> usize {
    net.unobserved_vars(query, evidence)
        .iter()
        .map(|&v| net.cardinality(v))
        .product()
}

/// Total probability over observed (distinguishable) paths: the plain sum
/// `sum_i p_i` with no cross terms, i.e. the classical law of total
/// probability.
pub fn multipath_probability_observed(paths: &[PathAmplitude]) -> f64 {
    paths.iter().map(|p| p.probability).sum()
}

/// Squared magnitudes of the joint-state amplitudes, one per configuration
/// in canonical index order. Numerically identical to the full joint table.
pub fn density_diagonal(net: &Network) -> Result<Vec<f64>, ModelError> {
    density_diagonal_capped(net, classical::DEFAULT_CONFIG_CAP)
}

/// [`density_diagonal`] with an explicit configuration cap.
pub fn density_diagonal_capped(net: &Network, cap: u128) -> Result<Vec<f64>, ModelError> {
    let count = net.config_count();
    if count > cap {
        return Err(ModelError::ConfigCapExceeded { count, cap });
    }
    Ok((0..count as usize)
        .map(|idx| classical::joint_probability(net, &net.config_from_index(idx)))
        .collect())
}

/// Marginalization through the density diagonal: sums the diagonal entries
/// selected by the query state and evidence, then normalizes. Without
/// interference this equals [`classical::infer_classical`] exactly.
pub fn marginal_partial_trace(
    net: &Network,
    query: usize,
    evidence: &Evidence,
) -> Result<Distribution, InferError> {
    if evidence.contains(query) {
        return Err(InferError::QueryInEvidence(
            net.variable(query).name.clone(),
        ));
    }
    let diagonal = density_diagonal(net)?;
    let mut masses = vec![0.0; net.cardinality(query)];
    for (idx, &p) in diagonal.iter().enumerate() {
        let a = net.config_from_index(idx);
        if evidence.iter().all(|(v, s)| a.get(v) == s) {
            masses[a.get(query)] += p;
        }
    }
    classical::normalize(net, query, masses)
}

/// The cross term `2 * sum_{i<j} sqrt(p_i p_j) cos(theta_i - theta_j)`.
///
/// Zero-probability paths contribute nothing; a single path has no pairs.
pub fn interference_term(
    paths: &[PathAmplitude],
    thetas: &ThetaVector,
) -> Result<f64, QuantumError> {
    if paths.len() != thetas.len() {
        return Err(QuantumError::ThetaLengthMismatch {
            expected: paths.len(),
            got: thetas.len(),
        });
    }
    let mut sum = 0.0;
    for i in 0..paths.len() {
        for j in (i + 1)..paths.len() {
            sum += paths[i].magnitude
                * paths[j].magnitude
                * (thetas.get(i) - thetas.get(j)).cos();
        }
    }
    Ok(2.0 * sum)
}

/// The same quantity as classical mass plus [`interference_term`], computed
/// as `|sum_i sqrt(p_i) e^(i theta_i)|^2`. The two forms agree within 1e-12.
pub fn coherent_sum_probability(
    paths: &[PathAmplitude],
    thetas: &ThetaVector,
) -> Result<f64, QuantumError> {
    if paths.len() != thetas.len() {
        return Err(QuantumError::ThetaLengthMismatch {
            expected: paths.len(),
            got: thetas.len(),
        });
    }
    let sum: Complex64 = paths
        .iter()
        .zip(thetas.as_slice())
        .map(|(p, &t)| Complex64::from_polar(p.magnitude, t))
        .sum();
    Ok(sum.norm_sqr())
}

/// Per-state decomposition of an interference-weighted inference.
#[derive(Debug, Clone, PartialEq)]
pub struct StateTerms {
    /// `sum_i p_i` over this state's paths.
    pub classical_mass: f64,
    /// The pairwise cosine cross term.
    pub interference: f64,
    /// `classical_mass + interference`; non-negative up to rounding.
    pub unnormalized: f64,
}

/// Result of [`infer_quantum`].
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumInferenceResult {
    /// One entry per query state.
    pub states: Vec<StateTerms>,
    /// Reciprocal of the summed unnormalized masses.
    pub alpha: f64,
    /// The normalized distribution.
    pub distribution: Distribution,
}

/// Interference-weighted conditional inference.
///
/// For every query state the unnormalized mass is
/// `sum_i p_i + 2 sum_{i<j} sqrt(p_i p_j) cos(theta_i - theta_j)` over that
/// state's paths, sharing one theta vector across states (the unobserved
/// configurations align because the unobserved set is identical). `alpha`
/// normalizes over the query states.
pub fn infer_quantum(
    net: &Network,
    query: usize,
    evidence: &Evidence,
    thetas: &ThetaVector,
) -> Result<QuantumInferenceResult, QuantumError> {
    let expected = path_count(net, query, evidence);
    if thetas.len() != expected {
        return Err(QuantumError::ThetaLengthMismatch {
            expected,
            got: thetas.len(),
        });
    }
    let mut states = Vec::with_capacity(net.cardinality(query));
    for state in 0..net.cardinality(query) {
        let paths = enumerate_paths(net, query, state, evidence)?;
        let classical_mass = multipath_probability_observed(&paths);
        let interference = interference_term(&paths, thetas)?;
        states.push(StateTerms {
            classical_mass,
            interference,
            unnormalized: classical_mass + interference,
        });
    }
    // The unnormalized masses are squared amplitude magnitudes, so negative
    // values are rounding noise; clamp before normalizing to keep the
    // distribution inside [0, 1].
    let clamped: Vec<f64> = states.iter().map(|s| s.unnormalized.max(0.0)).collect();
    let total: f64 = clamped.iter().sum();
    if total <= 0.0 {
        return Err(QuantumError::DegenerateNormalization);
    }
    let alpha = 1.0 / total;
    let distribution = Distribution {
        variable: net.variable(query).name.clone(),
        probabilities: clamped.iter().map(|u| u * alpha).collect(),
    };
    Ok(QuantumInferenceResult {
        states,
        alpha,
        distribution,
    })
}
