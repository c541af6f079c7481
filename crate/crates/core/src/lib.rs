//! Link prediction for social graphs.
//!
//! Node pairs are described by three local indices (common-neighbour count,
//! density of the common neighbourhood, density of the combined
//! neighbourhood) and one global index (a degree-based similarity chained
//! along a minimum-hop path). A boosted ensemble of shallow decision trees
//! trained on those indices decides whether a pair is, or will become, a link.
//!
//! The modules mirror the pipeline:
//!
//! - [`graph`]: SNAP edge lists, reciprocity filtering, snowball subsampling
//! - [`indices`] and [`globalsim`]: the pair indices
//! - [`baselines`]: comparison indices behind a registry
//! - [`sampling`]: held-out positives, negatives, features, folds
//! - [`boost`]: the boosted tree classifier
//! - [`eval`]: metrics, cross-validation and the experiment grid
//! - [`export`], [`config`], [`datasets`], [`cli`]: file formats and the command line

pub mod baselines;
pub mod boost;
pub mod cli;
pub mod config;
pub mod datasets;
pub mod error;
pub mod eval;
pub mod export;
pub mod globalsim;
pub mod graph;
pub mod indices;
pub mod sampling;

pub use error::{Error, Result};
pub use graph::{Graph, NodeId};
