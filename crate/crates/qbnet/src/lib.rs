//! Discrete Bayesian networks with two inference modes: exact classical
//! enumeration and a quantum-like mode in which the unobserved joint
//! configurations act as interfering paths with free phase parameters.
//!
//! The crate is organized around five pieces:
//!
//! - [`net`]: the network data model, its JSON document format, validation,
//!   and the builtin reference networks (`gamble`, `burglar`, `lung_cancer`).
//! - [`classical`]: full-joint enumeration and exact conditionals.
//! - [`quantum`]: path amplitudes, the pairwise-cosine interference term,
//!   and interference-weighted marginalization.
//! - [`search`]: phase sweeps, exhaustive and coordinate-ascent searches
//!   over the phase grid, and target fitting.
//! - [`golden`]: published reference tables and the cell-by-cell
//!   reproduction suites driven by the `qbnet reproduce` subcommand.
//!
//! A quick taste — the two-stage gamble, classically and with phases tuned
//! to the empirically observed 0.42:
//!
//! ```
//! use qbnet::net::{builtin, Evidence};
//! use qbnet::classical::infer_classical;
//! use qbnet::quantum::{infer_quantum, ThetaVector};
//!
//! let net = builtin("gamble")?;
//! let g2 = net.var_index("G2").unwrap();
//! let ev = Evidence::from_labels(&net, &[("U", "Play")])?;
//!
//! let classical = infer_classical(&net, g2, &ev)?;
//! assert!((classical.p(0) - 0.59).abs() < 1e-10);
//!
//! let thetas = ThetaVector::new(vec![0.0, 3.09]);
//! let quantum = infer_quantum(&net, g2, &ev, &thetas)?;
//! assert!((quantum.distribution.p(0) - 0.42).abs() < 0.005);
//! # Ok::<(), Box<dyn std::error::Error>>(())
//! ```

pub mod classical;
pub mod golden;
pub mod net;
pub mod quantum;
pub mod report;
pub mod search;

pub use classical::{infer_classical, joint_probability, joint_table, Distribution, InferError};
pub use net::{
    builtin, parse_network, serialize_network, validate, Assignment, Evidence, ModelError,
    Network, ParseError, Variable, Violation, ViolationCode,
};
pub use quantum::{
    amplitude_from_probability, density_diagonal, enumerate_paths, infer_quantum,
    interference_term, marginal_partial_trace, multipath_probability_observed,
    path_probability_single, PathAmplitude, QuantumError, QuantumInferenceResult, ThetaVector,
};
pub use search::{
    fit_theta_to_target, grid_search, sweep_pair, sweep_shared_phase, SearchError, SearchResult,
    Strategy, SweepTrace,
};

// The guide chapters double as doc-tests so their code blocks cannot rot.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/networks.md")]
    mod networks {}
    #[doc = include_str!("../../../book/src/classical.md")]
    mod classical {}
    #[doc = include_str!("../../../book/src/interference.md")]
    mod interference {}
    #[doc = include_str!("../../../book/src/phase-search.md")]
    mod phase_search {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
