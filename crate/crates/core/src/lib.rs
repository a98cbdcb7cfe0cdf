//! Temporal, versioned dependency-graph analytics.
//!
//! This crate rebuilds a dependency graph from plain metadata records —
//! one line per artifact or per declared dependency — and computes usage
//! metrics over it:
//!
//! * **activity status**: which versions still sit in the dependency tree
//!   of some latest release, which were abandoned, which were never used;
//! * **lifespan**: the interval during which a version was in use;
//! * **popularity**: PageRank-style scores for versions and, via a
//!   weighted elevation to the library level, for libraries;
//! * **timeliness**: whether a version attracted its library's users
//!   while it was the newest release.
//!
//! On top of the metrics sit transitional status patterns, Tukey-fence
//! detection of significantly popular versions, positional histograms,
//! release-profile categories and rank correlation.
//!
//! Graphs are built once via [`ingest`] and frozen; queries and metric
//! passes are read-only and thread-safe. Batch computations take an
//! [`exec::Execution`] strategy and are data-parallel with the `parallel`
//! feature (enabled by default); results are identical either way.

pub mod analysis;
pub mod exec;
pub mod graph;
pub mod ingest;
pub mod metrics;
pub mod version;

pub use exec::Execution;
pub use graph::{Coordinate, DependencyGraph, LibraryGraph, LibraryId, LibraryKey, VertexId};
pub use version::{ReleaseDate, VersionKey};
