//! Spin-energy operator inequalities for Heisenberg spin-1/2 coupling graphs.
//!
//! For a connected graph with edge set `E`, `dH/4J = sum_E P(i,k)` is the
//! energy above the ferromagnetic ground state and `dS2 = Smax^2 - S^2` the
//! total-spin deficit. The crate builds both operators sector by sector,
//! certifies `dS2 <= c * dH/4J` numerically, evaluates closed-form
//! constants, optimizes path-weight assignments that prove such constants,
//! and compares against the spectral bound from weak homogeneity.

pub mod basis;
pub mod bounds;
pub mod eigen;
pub mod error;
pub mod graph;
pub mod io;
pub mod magnon;
pub mod operators;
pub mod spectral;
pub mod weights;

pub use basis::SectorBasis;
pub use bounds::{BoundSpec, Provenance};
pub use eigen::Method;
pub use error::{Error, Result};
pub use graph::{Boundary, Graph, LatticeSpec, Path};
pub use operators::{ProjectorSum, SparseOperator};
pub use spectral::{certify_inequality, optimal_constant, Certificate, CertifyOptions, PencilResult};
pub use weights::{LoadMap, WeightedAssignment};

