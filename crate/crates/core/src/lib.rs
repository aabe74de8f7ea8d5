//! Exact diagonalization of spin-1/2 Heisenberg antiferromagnets on finite
//! clusters, and pairwise entanglement (Wootters concurrence) of the
//! resulting states.
//!
//! ```
//! use spinpair::{cluster, report};
//!
//! let graph = cluster::preset("chain:8").unwrap();
//! let rep = report::run_report(&graph, &report::ReportConfig::default()).unwrap();
//! assert_eq!(rep.degeneracy, 1);
//! let nn = rep.primary.pair(0, 1);
//! assert!(nn.gamma < 0.0 && nn.c_wootters > 0.0);
//! ```

pub mod basis;
pub mod cluster;
pub mod concurrence;
pub mod eigen;
pub mod error;
pub mod hamiltonian;
pub mod observables;
pub mod report;

pub use basis::SectorBasis;
pub use cluster::{load_cluster, preset, ClusterGraph};
pub use concurrence::{DegenerateRule, DickeParams, PairReport};
pub use eigen::{EigenResult, SolverConfig};
pub use error::{Error, Result};
pub use hamiltonian::{Hamiltonian, StateVector};
pub use observables::PairDensityMatrix;
