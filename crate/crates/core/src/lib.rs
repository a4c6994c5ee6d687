//! Arc-reversal discrete quantum walks with Grover coin on regular graphs.
//!
//! The crate builds the walk `U = R(2/k·D_tᵀD_t − I)` on the arcs of a
//! `k`-regular graph, derives its eigenprojections from the spectral
//! idempotents of the adjacency matrix, and decides whether the walk started
//! at a vertex gets arbitrarily close to a flat state (local and simultaneous
//! ε-uniform mixing). Flat targets come from real regular Hadamard matrices in
//! the adjacency algebra; reachability is settled by integer-relation checks
//! on the eigenvalue angles and a time search.
//!
//! ```
//! use arc_walk::graphs::complete_graph;
//! use arc_walk::mixing::{local_mixing_report, MixingConfig, TimeMode, Verdict};
//!
//! let k4 = complete_graph(4).unwrap();
//! let report = local_mixing_report(&k4, 0, 1e-6, TimeMode::Real, &MixingConfig::default()).unwrap();
//! assert_eq!(report.verdict, Verdict::Success);
//! ```

pub mod cospec;
pub mod error;
pub mod graphs;
pub mod mixing;
pub mod spectra;
pub mod walk;

pub use error::{Error, Result};
