//! Comparison indices behind a common scoring interface.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};
use crate::indices::intersect;

pub type Scorer = Arc<dyn Fn(&Graph, NodeId, NodeId) -> Result<f64> + Send + Sync>;

/// A named pair scorer. Scorers must be symmetric in their node arguments.
#[derive(Clone)]
pub struct BaselineIndex {
    pub name: String,
    pub scorer: Scorer,
}

impl BaselineIndex {
    pub fn new(
        name: impl Into<String>,
        scorer: impl Fn(&Graph, NodeId, NodeId) -> Result<f64> + Send + Sync + 'static,
    ) -> Self {
        BaselineIndex {
            name: name.into(),
            scorer: Arc::new(scorer),
        }
    }

    pub fn score(&self, g: &Graph, u: NodeId, v: NodeId) -> Result<f64> {
        (self.scorer)(g, u, v)
    }
}

impl fmt::Debug for BaselineIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BaselineIndex")
            .field("name", &self.name)
            .finish()
    }
}

/// Mean of the common-neighbour fractions seen from each endpoint:
/// `(|C_u ∩ C_v| / |C_u| + |C_u ∩ C_v| / |C_v|) / 2`.
///
/// A node without neighbours contributes 0 for its side.
pub fn sam(g: &Graph, u: NodeId, v: NodeId) -> Result<f64> {
    g.check(u)?;
    g.check(v)?;
    if u == v {
        return Err(Error::SelfPair(g.original_id(u)));
    }
    let (cu, cv) = (g.adj(u), g.adj(v));
    let common = intersect(cu, cv).len() as f64;
    let side = |deg: usize| if deg == 0 { 0.0 } else { common / deg as f64 };
    Ok((side(cu.len()) + side(cv.len())) / 2.0)
}

/// Name-keyed set of baseline indices. Lookup order is by name.
#[derive(Debug, Clone, Default)]
pub struct BaselineRegistry {
    indices: BTreeMap<String, BaselineIndex>,
}

impl BaselineRegistry {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Registry holding the built-in `sam` index.
    pub fn with_defaults() -> Self {
        let mut r = Self::empty();
        r.register(BaselineIndex::new("sam", sam))
            .expect("fresh registry");
        r
    }

    pub fn register(&mut self, index: BaselineIndex) -> Result<&BaselineIndex> {
        use std::collections::btree_map::Entry;
        match self.indices.entry(index.name.clone()) {
            Entry::Occupied(_) => Err(Error::DuplicateBaseline(index.name)),
            Entry::Vacant(slot) => Ok(slot.insert(index)),
        }
    }

    pub fn get(&self, name: &str) -> Option<&BaselineIndex> {
        self.indices.get(name)
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.indices.keys().map(String::as_str)
    }
}
