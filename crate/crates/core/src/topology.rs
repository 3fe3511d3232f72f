//! Allowed transitions of a machine's state space.
//!
//! A [`Topology`] is a list of edges grouped by their source vertex. Identity
//! transitions are always allowed without being listed.

use std::collections::HashSet;
use std::fmt;

use crate::error::BuildError;

/// Label of a vertex in a state space. Never empty.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexId(String);

impl VertexId {
    pub fn new(label: impl Into<String>) -> Result<Self, BuildError> {
        let label = label.into();
        if label.is_empty() {
            return Err(BuildError::EmptyVertexLabel);
        }
        Ok(VertexId(label))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl AsRef<str> for VertexId {
    fn as_ref(&self) -> &str {
        &self.0
    }
}

/// Explicit set of allowed transitions, grouped by source vertex.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Topology {
    edges: Vec<(VertexId, Vec<VertexId>)>,
}

impl Topology {
    /// Wraps a raw edge listing as given. Call [`Topology::normalize`] to merge
    /// duplicate groups and targets.
    pub fn new(edges: Vec<(VertexId, Vec<VertexId>)>) -> Self {
        Topology { edges }
    }

    /// Builds a normalized topology from text labels.
    ///
    /// ```
    /// use crem::topology::{Topology, VertexId};
    ///
    /// let t = Topology::from_labels([("A", vec!["B"]), ("A", vec!["C", "B"])]).unwrap();
    /// let a = VertexId::new("A").unwrap();
    /// assert_eq!(t.edges().len(), 1);
    /// assert!(t.allows_transition(&a, &VertexId::new("C").unwrap()));
    /// ```
    pub fn from_labels<I, S, T>(groups: I) -> Result<Self, BuildError>
    where
        I: IntoIterator<Item = (S, Vec<T>)>,
        S: Into<String>,
        T: Into<String>,
    {
        let edges = groups
            .into_iter()
            .map(|(source, targets)| {
                let targets = targets
                    .into_iter()
                    .map(VertexId::new)
                    .collect::<Result<Vec<_>, _>>()?;
                Ok((VertexId::new(source)?, targets))
            })
            .collect::<Result<Vec<_>, BuildError>>()?;
        Ok(Topology::new(edges).normalize())
    }

    /// Topology with the single vertex `v` and no explicit edges.
    pub fn trivial(v: VertexId) -> Self {
        Topology {
            edges: vec![(v, Vec::new())],
        }
    }

    pub fn edges(&self) -> &[(VertexId, Vec<VertexId>)] {
        &self.edges
    }

    /// Merges duplicate source groups and drops duplicate targets, keeping the
    /// first appearance of each. Idempotent.
    pub fn normalize(&self) -> Topology {
        let mut merged: Vec<(VertexId, Vec<VertexId>)> = Vec::with_capacity(self.edges.len());
        for (source, targets) in &self.edges {
            let group = match merged.iter().position(|(s, _)| s == source) {
                Some(i) => &mut merged[i].1,
                None => {
                    merged.push((source.clone(), Vec::new()));
                    &mut merged.last_mut().expect("just pushed").1
                }
            };
            for target in targets {
                if !group.contains(target) {
                    group.push(target.clone());
                }
            }
        }
        Topology { edges: merged }
    }

    pub fn is_normalized(&self) -> bool {
        let mut sources = HashSet::new();
        self.edges.iter().all(|(source, targets)| {
            let mut seen = HashSet::new();
            sources.insert(source) && targets.iter().all(|t| seen.insert(t))
        })
    }

    /// True iff `from == to` or `to` is listed among the targets of `from`.
    pub fn allows_transition(&self, from: &VertexId, to: &VertexId) -> bool {
        from == to
            || self
                .edges
                .iter()
                .any(|(source, targets)| source == from && targets.contains(to))
    }

    /// Sources and targets in order of first appearance.
    pub fn vertex_set(&self) -> Vec<VertexId> {
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        for (source, targets) in &self.edges {
            for v in std::iter::once(source).chain(targets) {
                if seen.insert(v) {
                    out.push(v.clone());
                }
            }
        }
        out
    }

    pub fn contains_vertex(&self, v: &VertexId) -> bool {
        self.edges
            .iter()
            .any(|(source, targets)| source == v || targets.contains(v))
    }

    /// Every explicit `(source, target)` pair, in listing order.
    pub fn edge_pairs(&self) -> impl Iterator<Item = (&VertexId, &VertexId)> {
        self.edges
            .iter()
            .flat_map(|(source, targets)| targets.iter().map(move |t| (source, t)))
    }
}
