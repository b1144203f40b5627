//! Search and sweep procedures over phase space.
//!
//! Every routine here maximizes or traces the normalized probability of one
//! query state as a function of the theta vector. The first phase is pinned
//! to zero throughout: only pairwise differences matter, so this loses
//! nothing and removes one search dimension.
//!
//! Exhaustive grid search is only offered for up to three free phases; an
//! eight-phase grid at 0.1 rad (63^8 cells) is not desk-scale, so larger
//! problems use seeded multi-start coordinate ascent instead.

use crate::classical::InferError;
use crate::net::{Evidence, Network};
use crate::quantum::{enumerate_paths, QuantumError, ThetaVector};
use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::f64::consts::{PI, TAU};
use std::fmt;
use thiserror::Error;

/// Most free phases the exhaustive strategy will enumerate.
pub const EXHAUSTIVE_MAX_FREE: usize = 3;

/// Most paths [`best_theta_permutation`] will permute (8! evaluations).
pub const PERMUTATION_MAX_PATHS: usize = 8;

/// Errors raised by sweeps and searches.
#[derive(Debug, Error)]
pub enum SearchError {
    #[error(transparent)]
    Quantum(#[from] QuantumError),
    #[error("step must be positive, got {0}")]
    InvalidStep(f64),
    #[error("theta index {index} out of range for {count} paths")]
    AxisOutOfRange { index: usize, count: usize },
    #[error("the two sweep axes must differ")]
    SameAxes,
    #[error(
        "exhaustive search over {free} free phases exceeds the bound of {EXHAUSTIVE_MAX_FREE} \
         (theta_1 is pinned to 0); use the coordinate-ascent strategy"
    )]
    TooManyFreeParameters { free: usize },
    #[error("target {target} outside the attainable range [{min}, {max}]")]
    TargetOutOfRange { target: f64, min: f64, max: f64 },
    #[error("shared-difference fitting needs exactly 2 paths, got {0}")]
    RequiresTwoPaths(usize),
    #[error("permutation search over {0} paths exceeds the bound of {PERMUTATION_MAX_PATHS}")]
    PermutationSpaceTooLarge(usize),
}

impl From<InferError> for SearchError {
    fn from(e: InferError) -> Self {
        SearchError::Quantum(QuantumError::Infer(e))
    }
}

/// Search strategy tag.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    Exhaustive,
    CoordinateAscent,
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Strategy::Exhaustive => write!(f, "exhaustive"),
            Strategy::CoordinateAscent => write!(f, "coordinate-ascent"),
        }
    }
}

/// Outcome of [`grid_search`].
#[derive(Debug, Clone, PartialEq)]
pub struct SearchResult {
    pub best_probability: f64,
    pub best_thetas: ThetaVector,
    pub evaluations: u64,
    pub strategy: Strategy,
    /// Restarts actually run (0 for the exhaustive strategy).
    pub restarts: u32,
    pub seed: u64,
}

/// One varied axis of a sweep: which theta indices move together, the step,
/// and how many grid points the axis has.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepAxis {
    pub theta_indices: Vec<usize>,
    pub step: f64,
    pub count: usize,
}

/// One sweep sample: the full theta vector and the normalized probability of
/// every query state.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSample {
    pub thetas: Vec<f64>,
    pub probabilities: Vec<f64>,
}

/// A completed sweep. `samples.len()` is the product of the axis counts and
/// samples are emitted in row-major axis order.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepTrace {
    pub query: String,
    pub states: Vec<String>,
    pub axes: Vec<SweepAxis>,
    pub samples: Vec<SweepSample>,
}

/// Evaluates the interference-weighted probability of each query state for
/// candidate theta vectors. Path magnitudes are computed once; evaluation is
/// then a coherent sum per state.
pub struct PhaseObjective {
    query: String,
    states: Vec<String>,
    /// `magnitudes[state][path]` = sqrt of the path probability.
    magnitudes: Vec<Vec<f64>>,
}

impl PhaseObjective {
    pub fn new(net: &Network, query: usize, evidence: &Evidence) -> Result<Self, InferError> {
        let mut magnitudes = Vec::with_capacity(net.cardinality(query));
        for state in 0..net.cardinality(query) {
            let paths = enumerate_paths(net, query, state, evidence)?;
            magnitudes.push(paths.into_iter().map(|p| p.magnitude).collect());
        }
        Ok(PhaseObjective {
            query: net.variable(query).name.clone(),
            states: net.variable(query).states.clone(),
            magnitudes,
        })
    }

    pub fn path_count(&self) -> usize {
        self.magnitudes[0].len()
    }

    pub fn state_count(&self) -> usize {
        self.magnitudes.len()
    }

    /// Unnormalized mass per state: `|sum_k m_k e^(i theta_k)|^2`.
    pub fn unnormalized(&self, thetas: &[f64]) -> Vec<f64> {
        let phasors: Vec<Complex64> = thetas
            .iter()
            .map(|&t| Complex64::from_polar(1.0, t))
            .collect();
        self.magnitudes
            .iter()
            .map(|mags| {
                let sum: Complex64 = mags
                    .iter()
                    .zip(&phasors)
                    .map(|(&m, ph)| m * ph)
                    .sum();
                sum.norm_sqr()
            })
            .collect()
    }

    /// Normalized probabilities, or `None` when every state has zero mass.
    pub fn probabilities(&self, thetas: &[f64]) -> Option<Vec<f64>> {
        let masses = self.unnormalized(thetas);
        let total: f64 = masses.iter().sum();
        if total <= 0.0 {
            return None;
        }
        Some(masses.into_iter().map(|u| u / total).collect())
    }

    /// Normalized probability of one state, or `None` on degenerate input.
    pub fn probability_of(&self, state: usize, thetas: &[f64]) -> Option<f64> {
        self.probabilities(thetas).map(|p| p[state])
    }
}

/// Grid points `0, step, 2*step, ...` covering `[0, 2pi]`.
pub fn grid_points(step: f64) -> Vec<f64> {
    let count = (TAU / step + 1e-9).floor() as usize + 1;
    (0..count).map(|m| m as f64 * step).collect()
}

/// Sweeps the shared phase difference: theta = `(0, d, d, ..., d)` for `d`
/// over the grid. For two paths this is exactly a single-angle sweep.
pub fn sweep_shared_phase(
    net: &Network,
    query: usize,
    evidence: &Evidence,
    step: f64,
) -> Result<SweepTrace, SearchError> {
    if !(step > 0.0) {
        return Err(SearchError::InvalidStep(step));
    }
    let obj = PhaseObjective::new(net, query, evidence)?;
    let k = obj.path_count();
    let grid = grid_points(step);
    let mut samples = Vec::with_capacity(grid.len());
    for &delta in &grid {
        let mut thetas = vec![delta; k];
        thetas[0] = 0.0;
        let probabilities = obj
            .probabilities(&thetas)
            .ok_or(QuantumError::DegenerateNormalization)?;
        samples.push(SweepSample {
            thetas,
            probabilities,
        });
    }
    Ok(SweepTrace {
        query: obj.query.clone(),
        states: obj.states.clone(),
        axes: vec![SweepAxis {
            theta_indices: (1..k).collect(),
            step,
            count: grid.len(),
        }],
        samples,
    })
}

/// Sweeps two theta indices over `[0, 2pi]` while the rest come from
/// `fixed`. Samples are emitted row-major: `i` is the outer axis.
pub fn sweep_pair(
    net: &Network,
    query: usize,
    evidence: &Evidence,
    fixed: &ThetaVector,
    i: usize,
    j: usize,
    step: f64,
) -> Result<SweepTrace, SearchError> {
    if !(step > 0.0) {
        return Err(SearchError::InvalidStep(step));
    }
    if i == j {
        return Err(SearchError::SameAxes);
    }
    let obj = PhaseObjective::new(net, query, evidence)?;
    let k = obj.path_count();
    for index in [i, j] {
        if index >= k {
            return Err(SearchError::AxisOutOfRange { index, count: k });
        }
    }
    if fixed.len() != k {
        return Err(SearchError::Quantum(QuantumError::ThetaLengthMismatch {
            expected: k,
            got: fixed.len(),
        }));
    }
    let grid = grid_points(step);
    let mut samples = Vec::with_capacity(grid.len() * grid.len());
    let mut thetas = fixed.as_slice().to_vec();
    for &ti in &grid {
        thetas[i] = ti;
        for &tj in &grid {
            thetas[j] = tj;
            let probabilities = obj
                .probabilities(&thetas)
                .ok_or(QuantumError::DegenerateNormalization)?;
            samples.push(SweepSample {
                thetas: thetas.clone(),
                probabilities,
            });
        }
    }
    Ok(SweepTrace {
        query: obj.query.clone(),
        states: obj.states.clone(),
        axes: vec![
            SweepAxis {
                theta_indices: vec![i],
                step,
                count: grid.len(),
            },
            SweepAxis {
                theta_indices: vec![j],
                step,
                count: grid.len(),
            },
        ],
        samples,
    })
}

/// Maximizes the normalized probability of `query_state` over the theta
/// grid.
///
/// Deterministic given `(strategy, step, restarts, seed)`; ties break toward
/// the lexicographically smallest theta vector. The exhaustive strategy
/// refuses more than [`EXHAUSTIVE_MAX_FREE`] free phases.
pub fn grid_search(
    net: &Network,
    query: usize,
    query_state: usize,
    evidence: &Evidence,
    step: f64,
    strategy: Strategy,
    restarts: u32,
    seed: u64,
) -> Result<SearchResult, SearchError> {
    if !(step > 0.0) {
        return Err(SearchError::InvalidStep(step));
    }
    let obj = PhaseObjective::new(net, query, evidence)?;
    if query_state >= obj.state_count() {
        return Err(SearchError::from(InferError::Model(
            crate::net::ModelError::StateOutOfRange {
                variable: obj.query.clone(),
                index: query_state,
                cardinality: obj.state_count(),
            },
        )));
    }
    match strategy {
        Strategy::Exhaustive => exhaustive_search(&obj, query_state, step, seed),
        Strategy::CoordinateAscent => {
            coordinate_ascent(&obj, query_state, step, restarts.max(1), seed)
        }
    }
}

fn exhaustive_search(
    obj: &PhaseObjective,
    query_state: usize,
    step: f64,
    seed: u64,
) -> Result<SearchResult, SearchError> {
    let k = obj.path_count();
    let free = k.saturating_sub(1);
    if free > EXHAUSTIVE_MAX_FREE {
        return Err(SearchError::TooManyFreeParameters { free });
    }
    let grid = grid_points(step);
    let mut thetas = vec![0.0; k];
    let mut best_value = f64::NEG_INFINITY;
    let mut best_thetas = thetas.clone();
    let mut evaluations = 0u64;
    // Odometer over the free coordinates, lexicographic ascending; strict
    // improvement keeps the first (smallest) maximizer.
    let mut digits = vec![0usize; free];
    loop {
        for (i, &d) in digits.iter().enumerate() {
            thetas[i + 1] = grid[d];
        }
        evaluations += 1;
        if let Some(value) = obj.probability_of(query_state, &thetas) {
            if value > best_value {
                best_value = value;
                best_thetas.copy_from_slice(&thetas);
            }
        }
        // Advance the odometer (last digit fastest).
        let mut pos = free;
        loop {
            if pos == 0 {
                if !best_value.is_finite() {
                    return Err(SearchError::Quantum(
                        QuantumError::DegenerateNormalization,
                    ));
                }
                return Ok(SearchResult {
                    best_probability: best_value,
                    best_thetas: ThetaVector::new(best_thetas),
                    evaluations,
                    strategy: Strategy::Exhaustive,
                    restarts: 0,
                    seed,
                });
            }
            pos -= 1;
            digits[pos] += 1;
            if digits[pos] < grid.len() {
                break;
            }
            digits[pos] = 0;
        }
    }
}

fn coordinate_ascent(
    obj: &PhaseObjective,
    query_state: usize,
    step: f64,
    restarts: u32,
    seed: u64,
) -> Result<SearchResult, SearchError> {
    let k = obj.path_count();
    let grid = grid_points(step);
    let phasors: Vec<Complex64> = grid
        .iter()
        .map(|&t| Complex64::from_polar(1.0, t))
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut evaluations = 0u64;
    let mut best_value = f64::NEG_INFINITY;
    let mut best_thetas: Vec<f64> = vec![0.0; k];

    for _ in 0..restarts {
        let mut thetas: Vec<f64> = (0..k)
            .map(|i| {
                if i == 0 {
                    0.0
                } else {
                    grid[rng.gen_range(0..grid.len())]
                }
            })
            .collect();
        let mut current = obj.probability_of(query_state, &thetas);
        evaluations += 1;

        loop {
            let mut changed = false;
            for coord in 1..k {
                // Coherent sums with this coordinate removed; scanning the
                // grid is then one complex add per candidate.
                let bases: Vec<Complex64> = obj
                    .magnitudes
                    .iter()
                    .map(|mags| {
                        let full: Complex64 = mags
                            .iter()
                            .zip(&thetas)
                            .map(|(&m, &t)| Complex64::from_polar(m, t))
                            .sum();
                        full - Complex64::from_polar(mags[coord], thetas[coord])
                    })
                    .collect();
                let mut best_here = current;
                let mut best_grid = thetas[coord];
                for (g, phasor) in grid.iter().zip(&phasors) {
                    evaluations += 1;
                    let mut mass_state = 0.0;
                    let mut total = 0.0;
                    for (s, base) in bases.iter().enumerate() {
                        let u = (base + obj.magnitudes[s][coord] * phasor).norm_sqr();
                        if s == query_state {
                            mass_state = u;
                        }
                        total += u;
                    }
                    if total <= 0.0 {
                        continue;
                    }
                    let value = mass_state / total;
                    if best_here.is_none_or(|b| value > b) {
                        best_here = Some(value);
                        best_grid = *g;
                    }
                }
                if best_grid != thetas[coord] {
                    thetas[coord] = best_grid;
                    current = best_here;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }

        // Re-evaluate from scratch so incremental rounding cannot leak into
        // the reported value.
        evaluations += 1;
        if let Some(value) = obj.probability_of(query_state, &thetas) {
            if value > best_value || (value == best_value && thetas < best_thetas) {
                best_value = value;
                best_thetas = thetas;
            }
        }
    }

    if !best_value.is_finite() {
        return Err(SearchError::Quantum(QuantumError::DegenerateNormalization));
    }
    Ok(SearchResult {
        best_probability: best_value,
        best_thetas: ThetaVector::new(best_thetas),
        evaluations,
        strategy: Strategy::CoordinateAscent,
        restarts,
        seed,
    })
}

/// Finds the shared phase difference `d` (theta = `(0, d)`) at which the
/// query state's normalized probability equals `target`, by bisection on the
/// monotone branch `d` in `[0, pi]`, to `|prob - target| <= 1e-6`.
///
/// Only defined for exactly two paths; targets outside the attainable range
/// report that range.
pub fn fit_theta_to_target(
    net: &Network,
    query: usize,
    query_state: usize,
    evidence: &Evidence,
    target: f64,
) -> Result<f64, SearchError> {
    let obj = PhaseObjective::new(net, query, evidence)?;
    if obj.path_count() != 2 {
        return Err(SearchError::RequiresTwoPaths(obj.path_count()));
    }
    let eval = |delta: f64| -> Result<f64, SearchError> {
        obj.probability_of(query_state, &[0.0, delta])
            .ok_or(SearchError::Quantum(QuantumError::DegenerateNormalization))
    };
    let at_zero = eval(0.0)?;
    let at_pi = eval(PI)?;
    let (min, max) = if at_zero <= at_pi {
        (at_zero, at_pi)
    } else {
        (at_pi, at_zero)
    };
    if target < min || target > max {
        return Err(SearchError::TargetOutOfRange { target, min, max });
    }
    // The probability is monotone in cos(d), hence monotone on [0, pi].
    let increasing = at_pi > at_zero;
    let (mut lo, mut hi) = (0.0f64, PI);
    let mut mid = 0.5 * (lo + hi);
    for _ in 0..200 {
        mid = 0.5 * (lo + hi);
        let value = eval(mid)?;
        if (value - target).abs() <= 1e-6 {
            return Ok(mid);
        }
        if (value < target) == increasing {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(mid)
}

/// Best assignment of the given theta values to path indices.
#[derive(Debug, Clone, PartialEq)]
pub struct PermutationFit {
    /// `permutation[k]` is the index into the input thetas used for path `k`.
    pub permutation: Vec<usize>,
    /// Probability of the query state under the best permutation.
    pub probability: f64,
    /// `|probability - target|`.
    pub residual: f64,
    pub evaluations: u64,
}

/// Tries every assignment of `thetas` to the path indices and returns the
/// one whose query-state probability lands closest to `target`.
///
/// Ties break toward the lexicographically smallest permutation. Bounded to
/// [`PERMUTATION_MAX_PATHS`] paths (8! = 40,320 evaluations).
pub fn best_theta_permutation(
    net: &Network,
    query: usize,
    query_state: usize,
    evidence: &Evidence,
    thetas: &ThetaVector,
    target: f64,
) -> Result<PermutationFit, SearchError> {
    let obj = PhaseObjective::new(net, query, evidence)?;
    let k = obj.path_count();
    if k > PERMUTATION_MAX_PATHS {
        return Err(SearchError::PermutationSpaceTooLarge(k));
    }
    if thetas.len() != k {
        return Err(SearchError::Quantum(QuantumError::ThetaLengthMismatch {
            expected: k,
            got: thetas.len(),
        }));
    }
    let phasors: Vec<Complex64> = thetas
        .as_slice()
        .iter()
        .map(|&t| Complex64::from_polar(1.0, t))
        .collect();
    let mut perm: Vec<usize> = (0..k).collect();
    let mut best: Option<PermutationFit> = None;
    let mut evaluations = 0u64;
    loop {
        evaluations += 1;
        let mut mass_state = 0.0;
        let mut total = 0.0;
        for (s, mags) in obj.magnitudes.iter().enumerate() {
            let sum: Complex64 = (0..k).map(|i| mags[i] * phasors[perm[i]]).sum();
            let u = sum.norm_sqr();
            if s == query_state {
                mass_state = u;
            }
            total += u;
        }
        if total > 0.0 {
            let probability = mass_state / total;
            let residual = (probability - target).abs();
            // Lexicographic iteration plus strict improvement keeps the
            // smallest permutation among ties.
            if best.as_ref().is_none_or(|b| residual < b.residual) {
                best = Some(PermutationFit {
                    permutation: perm.clone(),
                    probability,
                    residual,
                    evaluations: 0,
                });
            }
        }
        if !next_permutation(&mut perm) {
            break;
        }
    }
    let mut fit = best.ok_or(SearchError::Quantum(QuantumError::DegenerateNormalization))?;
    fit.evaluations = evaluations;
    Ok(fit)
}

/// Advances `items` to the next lexicographic permutation, returning `false`
/// after the last one.
fn next_permutation(items: &mut [usize]) -> bool {
    let n = items.len();
    if n < 2 {
        return false;
    }
    let Some(i) = (0..n - 1).rev().find(|&i| items[i] < items[i + 1]) else {
        return false;
    };
    let j = (i + 1..n).rev().find(|&j| items[j] > items[i]).unwrap();
    items.swap(i, j);
    items[i + 1..].reverse();
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::net::builtin;
    use crate::quantum::infer_quantum;

    fn gamble_setup() -> (Network, usize, Evidence) {
        let net = builtin("gamble").unwrap();
        let q = net.var_index("G2").unwrap();
        let ev = Evidence::from_labels(&net, &[("U", "Play")]).unwrap();
        (net, q, ev)
    }

    #[test]
    fn grid_points_cover_zero_to_two_pi() {
        let coarse = grid_points(0.1);
        assert_eq!(coarse.len(), 63);
        assert_eq!(coarse[0], 0.0);
        assert!((coarse[62] - 6.2).abs() < 1e-12);
        let fine = grid_points(0.0001);
        assert_eq!(fine.len(), 62832);
    }

    #[test]
    fn shared_sweep_reaches_reference_extremes() {
        let (net, q, ev) = gamble_setup();
        let trace = sweep_shared_phase(&net, q, &ev, 0.0001).unwrap();
        assert_eq!(trace.samples.len(), 62832);

        let play = 0;
        let (max_idx, max) = trace
            .samples
            .iter()
            .enumerate()
            .map(|(i, s)| (i, s.probabilities[play]))
            .fold((0, f64::NEG_INFINITY), |acc, x| if x.1 > acc.1 { x } else { acc });
        assert!((max - 0.5915).abs() < 5e-4, "max {max}");
        assert_eq!(max_idx, 0, "maximum sits at delta = 0");

        let (min_idx, min) = trace
            .samples
            .iter()
            .enumerate()
            .map(|(i, s)| (i, s.probabilities[play]))
            .fold((0, f64::INFINITY), |acc, x| if x.1 < acc.1 { x } else { acc });
        // Closed form at cos = -1: (0.295 - 2 sqrt(0.17 * 0.125)) / (0.5 - I).
        let b = 2.0 * (0.17f64 * 0.125).sqrt();
        let total_i = b + 2.0 * (0.08f64 * 0.125).sqrt();
        let closed_min = (0.295 - b) / (0.5 - total_i);
        assert!((min - closed_min).abs() < 5e-4, "min {min} vs {closed_min}");
        let delta_at_min = trace.samples[min_idx].thetas[1];
        assert!((delta_at_min - PI).abs() <= 0.0001);
    }

    #[test]
    fn shared_sweep_at_quarter_turn_is_classical() {
        let (net, q, ev) = gamble_setup();
        let trace = sweep_shared_phase(&net, q, &ev, 0.0001).unwrap();
        // Grid point closest to pi/2.
        let idx = (std::f64::consts::FRAC_PI_2 / 0.0001).round() as usize;
        let p = trace.samples[idx].probabilities[0];
        assert!((p - 0.59).abs() < 1e-4, "got {p}");
    }

    #[test]
    fn sweep_rejects_bad_step() {
        let (net, q, ev) = gamble_setup();
        assert!(matches!(
            sweep_shared_phase(&net, q, &ev, 0.0),
            Err(SearchError::InvalidStep(_))
        ));
        assert!(matches!(
            sweep_shared_phase(&net, q, &ev, -0.1),
            Err(SearchError::InvalidStep(_))
        ));
    }

    #[test]
    fn pair_sweep_diagonal_matches_shared_sweep() {
        let (net, q, ev) = gamble_setup();
        let step = 0.05;
        let shared = sweep_shared_phase(&net, q, &ev, step).unwrap();
        let fixed = ThetaVector::zeros(2);
        let pair = sweep_pair(&net, q, &ev, &fixed, 0, 1, step).unwrap();
        let n = grid_points(step).len();
        assert_eq!(pair.samples.len(), n * n);
        // Row i = 0 of the pair grid fixes theta_0 = 0 and varies theta_1,
        // which is exactly the shared sweep for two paths.
        for (m, shared_sample) in shared.samples.iter().enumerate() {
            let pair_sample = &pair.samples[m];
            assert_eq!(pair_sample.thetas, shared_sample.thetas);
            assert_eq!(pair_sample.probabilities, shared_sample.probabilities);
        }
    }

    #[test]
    fn pair_sweep_validates_axes() {
        let (net, q, ev) = gamble_setup();
        let fixed = ThetaVector::zeros(2);
        assert!(matches!(
            sweep_pair(&net, q, &ev, &fixed, 1, 1, 0.1),
            Err(SearchError::SameAxes)
        ));
        assert!(matches!(
            sweep_pair(&net, q, &ev, &fixed, 0, 5, 0.1),
            Err(SearchError::AxisOutOfRange { .. })
        ));
    }

    #[test]
    fn global_phase_shift_leaves_probabilities_unchanged() {
        let net = builtin("burglar").unwrap();
        let q = net.var_index("MaryCalls").unwrap();
        let ev = Evidence::empty();
        let obj = PhaseObjective::new(&net, q, &ev).unwrap();
        let thetas = [0.3, 1.1, 2.9, 0.0, 4.4, 5.0, 0.7, 3.3];
        let shifted: Vec<f64> = thetas.iter().map(|t| t + 1.234).collect();
        let a = obj.probabilities(&thetas).unwrap();
        let b = obj.probabilities(&shifted).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn exhaustive_search_finds_the_gamble_maximum() {
        let (net, q, ev) = gamble_setup();
        let result = grid_search(&net, q, 0, &ev, 0.0001, Strategy::Exhaustive, 0, 0).unwrap();
        assert!((result.best_probability - 0.5915).abs() < 5e-4);
        assert_eq!(result.best_thetas.as_slice(), &[0.0, 0.0]);
        assert_eq!(result.evaluations, 62832);
    }

    #[test]
    fn exhaustive_search_refuses_too_many_parameters() {
        let net = builtin("burglar").unwrap();
        let q = net.var_index("Burglar").unwrap();
        let err =
            grid_search(&net, q, 0, &Evidence::empty(), 0.1, Strategy::Exhaustive, 0, 0)
                .unwrap_err();
        assert!(matches!(
            err,
            SearchError::TooManyFreeParameters { free: 7 }
        ));
    }

    #[test]
    fn search_with_single_path_returns_classical() {
        let (net, q, _) = gamble_setup();
        let ev = Evidence::from_labels(&net, &[("U", "Play"), ("G1", "Win")]).unwrap();
        let result = grid_search(&net, q, 0, &ev, 0.1, Strategy::Exhaustive, 0, 0).unwrap();
        assert!((result.best_probability - 0.68).abs() < 1e-12);
        assert_eq!(result.best_thetas.as_slice(), &[0.0]);
    }

    #[test]
    fn search_result_reproduces_through_infer_quantum() {
        let net = builtin("burglar").unwrap();
        let q = net.var_index("Burglar").unwrap();
        let ev = Evidence::empty();
        let result = grid_search(
            &net,
            q,
            0,
            &ev,
            0.1,
            Strategy::CoordinateAscent,
            10,
            42,
        )
        .unwrap();
        let again = infer_quantum(&net, q, &ev, &result.best_thetas).unwrap();
        assert!((again.distribution.p(0) - result.best_probability).abs() < 1e-12);
    }

    #[test]
    fn coordinate_ascent_is_deterministic() {
        let net = builtin("burglar").unwrap();
        let q = net.var_index("JohnCalls").unwrap();
        let ev = Evidence::empty();
        let a = grid_search(&net, q, 0, &ev, 0.1, Strategy::CoordinateAscent, 5, 7).unwrap();
        let b = grid_search(&net, q, 0, &ev, 0.1, Strategy::CoordinateAscent, 5, 7).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn coordinate_ascent_beats_classical_on_burglar() {
        let net = builtin("burglar").unwrap();
        let q = net.var_index("Burglar").unwrap();
        let result = grid_search(
            &net,
            q,
            0,
            &Evidence::empty(),
            0.1,
            Strategy::CoordinateAscent,
            20,
            3,
        )
        .unwrap();
        assert!(result.best_probability > 0.1179 - 0.01);
    }

    #[test]
    fn fit_recovers_the_reference_angle() {
        let (net, q, ev) = gamble_setup();
        let delta = fit_theta_to_target(&net, q, 0, &ev, 0.42).unwrap();
        assert!((delta - 3.09).abs() < 0.01, "delta {delta}");
        assert!(delta.cos() < -0.998, "cos {}", delta.cos());

        let classical_point = fit_theta_to_target(&net, q, 0, &ev, 0.59).unwrap();
        assert!((classical_point - std::f64::consts::FRAC_PI_2).abs() < 1e-4);
    }

    #[test]
    fn fit_reports_attainable_range() {
        let (net, q, ev) = gamble_setup();
        let err = fit_theta_to_target(&net, q, 0, &ev, 0.40).unwrap_err();
        match err {
            SearchError::TargetOutOfRange { min, max, .. } => {
                assert!((min - 0.4084524052577320).abs() < 1e-12);
                assert!((max - 0.5915475947422650).abs() < 1e-12);
            }
            other => panic!("unexpected error {other}"),
        }
    }

    #[test]
    fn fit_requires_two_paths() {
        let net = builtin("burglar").unwrap();
        let q = net.var_index("Burglar").unwrap();
        assert!(matches!(
            fit_theta_to_target(&net, q, 0, &Evidence::empty(), 0.1),
            Err(SearchError::RequiresTwoPaths(8))
        ));
    }

    #[test]
    fn next_permutation_is_lexicographic() {
        let mut items = vec![0, 1, 2];
        let mut seen = vec![items.clone()];
        while next_permutation(&mut items) {
            seen.push(items.clone());
        }
        assert_eq!(seen.len(), 6);
        assert_eq!(seen[1], vec![0, 2, 1]);
        assert_eq!(seen[5], vec![2, 1, 0]);
        let mut sorted = seen.clone();
        sorted.sort();
        assert_eq!(seen, sorted);
    }

    #[test]
    fn permutation_fit_is_exact_when_order_does_not_matter() {
        // Two equal paths: every permutation gives the same probability.
        let (net, q, ev) = gamble_setup();
        let thetas = ThetaVector::new(vec![0.0, PI]);
        let fit =
            best_theta_permutation(&net, q, 0, &ev, &thetas, 0.42).unwrap();
        assert_eq!(fit.evaluations, 2);
        assert_eq!(fit.permutation.len(), 2);
    }
}
