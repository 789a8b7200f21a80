//! Exact-arithmetic analysis of finite clusters in low-dimensional integer
//! lattices: periodic tiling search and verification, cyclotomic vanishing
//! tests, spectral support computations, and the prime-squared cluster
//! classification built on top of them.

pub mod cluster;
pub mod cyclotomic;
pub mod error;
pub mod lattice;
pub mod polyseq;
pub mod spectral;
pub mod tiler;
pub mod trichotomy;

pub use cluster::{Cluster, FiberKind, FiberPartition, PrismDecomposition};
pub use cyclotomic::{CycInt, CycLaurentPoly};
pub use error::{Error, Result};
pub use lattice::{IntMat, IntVec, Sublattice, UnimodularMatrix};
pub use polyseq::{LaurentOperator, PiecewisePolySeq, WeylClass};
pub use spectral::{DeltaSet, RationalLineFamily, RationalTorusPoint, SupportDichotomy};
pub use tiler::{OneDimReport, PeriodicTiling};
pub use trichotomy::{CaseReport, Classification};
