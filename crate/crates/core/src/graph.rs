//! The versioned dependency graph and its library-level elevation.
//!
//! Vertices are individual library versions identified by a
//! `group:artifact:version` coordinate. Edges are declared dependencies
//! between versions. Versions sharing a `group:artifact` pair form a
//! *library*, ordered into a precedence chain by the version ordering.
//!
//! A graph is built once (see [`crate::ingest`]) and then frozen: every
//! query here is read-only, so a frozen graph can be shared freely across
//! threads.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use thiserror::Error;

use crate::version::{ReleaseDate, VersionKey};

/// Identity of one artifact: `group:artifact:version`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Coordinate {
    pub group: String,
    pub artifact: String,
    pub version: String,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CoordinateError {
    #[error("coordinate {0:?} is not of the form group:artifact:version")]
    Malformed(String),
}

impl Coordinate {
    pub fn new(
        group: impl Into<String>,
        artifact: impl Into<String>,
        version: impl Into<String>,
    ) -> Self {
        Coordinate {
            group: group.into(),
            artifact: artifact.into(),
            version: version.into(),
        }
    }

    /// Parses `group:artifact:version`. The version part may itself
    /// contain `:`; only the first two separators split.
    pub fn parse(text: &str) -> Result<Self, CoordinateError> {
        let mut parts = text.splitn(3, ':');
        match (parts.next(), parts.next(), parts.next()) {
            (Some(g), Some(a), Some(v)) if !g.is_empty() && !a.is_empty() && !v.is_empty() => {
                Ok(Coordinate::new(g, a, v))
            }
            _ => Err(CoordinateError::Malformed(text.to_owned())),
        }
    }

    pub fn library(&self) -> LibraryKey {
        LibraryKey {
            group: self.group.clone(),
            artifact: self.artifact.clone(),
        }
    }
}

impl fmt::Display for Coordinate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.group, self.artifact, self.version)
    }
}

/// A library: the set of versions sharing one `group:artifact` pair.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LibraryKey {
    pub group: String,
    pub artifact: String,
}

impl fmt::Display for LibraryKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.group, self.artifact)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(pub(crate) u32);

impl VertexId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LibraryId(pub(crate) u32);

impl LibraryId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// One vertex of the graph. External stubs stand for coordinates that
/// appear only as dependency targets (or sources) and carry no release
/// date; they are kept out of precedence chains and per-library metrics.
#[derive(Debug, Clone)]
pub struct VertexRecord {
    coordinate: Coordinate,
    released: Option<ReleaseDate>,
    version: VersionKey,
    library: LibraryId,
}

impl VertexRecord {
    pub(crate) fn new(
        coordinate: Coordinate,
        released: Option<ReleaseDate>,
        version: VersionKey,
    ) -> Self {
        VertexRecord {
            coordinate,
            released,
            version,
            library: LibraryId(u32::MAX),
        }
    }

    pub(crate) fn set_library(&mut self, library: LibraryId) {
        self.library = library;
    }

    pub fn coordinate(&self) -> &Coordinate {
        &self.coordinate
    }

    pub fn released(&self) -> Option<ReleaseDate> {
        self.released
    }

    pub fn is_external(&self) -> bool {
        self.released.is_none()
    }

    pub fn version_key(&self) -> &VersionKey {
        &self.version
    }

    pub fn library(&self) -> LibraryId {
        self.library
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("operation not defined for external vertex {0}")]
    ExternalVertex(String),
    #[error("unknown library {0:?}")]
    UnknownLibrary(String),
    #[error("library {0} has no non-external versions")]
    NoVersions(String),
}

#[derive(Debug, Clone)]
pub(crate) struct LibraryEntry {
    pub(crate) key: LibraryKey,
    /// Every member vertex, externals included.
    pub(crate) members: Vec<VertexId>,
    /// Non-external members in version order; the precedence chain.
    pub(crate) chain: Vec<VertexId>,
}

/// Frozen dependency graph over versioned vertices.
#[derive(Debug, Clone)]
pub struct DependencyGraph {
    vertices: Vec<VertexRecord>,
    deps: Vec<Vec<VertexId>>,
    users: Vec<Vec<VertexId>>,
    edge_count: usize,
    libraries: Vec<LibraryEntry>,
    library_lookup: HashMap<LibraryKey, LibraryId>,
    coordinate_lookup: HashMap<Coordinate, VertexId>,
    /// 0-based position of each vertex in its library chain; None for
    /// external vertices.
    chain_position: Vec<Option<u32>>,
    snapshot: ReleaseDate,
}

impl DependencyGraph {
    #[allow(clippy::too_many_arguments)]
    pub(crate) fn assemble(
        vertices: Vec<VertexRecord>,
        deps: Vec<Vec<VertexId>>,
        users: Vec<Vec<VertexId>>,
        edge_count: usize,
        libraries: Vec<LibraryEntry>,
        library_lookup: HashMap<LibraryKey, LibraryId>,
        coordinate_lookup: HashMap<Coordinate, VertexId>,
        snapshot: ReleaseDate,
    ) -> Self {
        let mut chain_position = vec![None; vertices.len()];
        for entry in &libraries {
            for (pos, &v) in entry.chain.iter().enumerate() {
                chain_position[v.index()] = Some(pos as u32);
            }
        }
        DependencyGraph {
            vertices,
            deps,
            users,
            edge_count,
            libraries,
            library_lookup,
            coordinate_lookup,
            chain_position,
            snapshot,
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn external_count(&self) -> usize {
        self.vertices.iter().filter(|v| v.is_external()).count()
    }

    /// Number of distinct `(from, to, scope)` dependency records.
    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn library_count(&self) -> usize {
        self.libraries.len()
    }

    pub fn snapshot(&self) -> ReleaseDate {
        self.snapshot
    }

    pub fn vertex(&self, id: VertexId) -> &VertexRecord {
        &self.vertices[id.index()]
    }

    pub fn vertex_ids(&self) -> impl Iterator<Item = VertexId> + '_ {
        (0..self.vertices.len() as u32).map(VertexId)
    }

    pub fn resolve(&self, coordinate: &Coordinate) -> Option<VertexId> {
        self.coordinate_lookup.get(coordinate).copied()
    }

    pub fn library_ids(&self) -> impl Iterator<Item = LibraryId> + '_ {
        (0..self.libraries.len() as u32).map(LibraryId)
    }

    pub fn library_key(&self, id: LibraryId) -> &LibraryKey {
        &self.libraries[id.index()].key
    }

    pub fn lookup_library(&self, key: &LibraryKey) -> Option<LibraryId> {
        self.library_lookup.get(key).copied()
    }

    /// All member vertices of a library, external stubs included.
    pub fn members(&self, id: LibraryId) -> &[VertexId] {
        &self.libraries[id.index()].members
    }

    /// The precedence chain: non-external versions in version order.
    pub fn chain(&self, id: LibraryId) -> &[VertexId] {
        &self.libraries[id.index()].chain
    }

    /// `(position, chain length)` for a non-external vertex.
    pub fn chain_position(&self, v: VertexId) -> Option<(usize, usize)> {
        let pos = self.chain_position[v.index()]? as usize;
        let len = self.chain(self.vertex(v).library()).len();
        Some((pos, len))
    }

    /// The version-order successor within the vertex's library, or `None`
    /// when `v` is the latest version.
    pub fn next(&self, v: VertexId) -> Result<Option<VertexId>, GraphError> {
        let (pos, _) = self
            .chain_position(v)
            .ok_or_else(|| GraphError::ExternalVertex(self.vertex(v).coordinate().to_string()))?;
        let chain = self.chain(self.vertex(v).library());
        Ok(chain.get(pos + 1).copied())
    }

    /// Transitive closure of [`next`](Self::next): the chain suffix after `v`.
    pub fn next_all(&self, v: VertexId) -> Result<&[VertexId], GraphError> {
        let (pos, _) = self
            .chain_position(v)
            .ok_or_else(|| GraphError::ExternalVertex(self.vertex(v).coordinate().to_string()))?;
        let chain = self.chain(self.vertex(v).library());
        Ok(&chain[pos + 1..])
    }

    /// The chain-terminal (latest) version of a library.
    pub fn latest(&self, id: LibraryId) -> Result<VertexId, GraphError> {
        self.chain(id)
            .last()
            .copied()
            .ok_or_else(|| GraphError::NoVersions(self.library_key(id).to_string()))
    }

    /// Latest versions of every library that has at least one.
    pub fn latests(&self) -> Vec<VertexId> {
        self.libraries
            .iter()
            .filter_map(|entry| entry.chain.last().copied())
            .collect()
    }

    /// Direct dependencies of `v`, sorted and deduplicated.
    pub fn dependencies(&self, v: VertexId) -> &[VertexId] {
        &self.deps[v.index()]
    }

    /// Direct users of `v`: vertices declaring a dependency towards it.
    pub fn users(&self, v: VertexId) -> &[VertexId] {
        &self.users[v.index()]
    }

    /// Every vertex reachable from `v` along dependency edges, excluding
    /// `v` itself unless it sits on a cycle through itself.
    pub fn transitive_dependencies(&self, v: VertexId) -> Vec<VertexId> {
        self.reach(v, &self.deps)
    }

    /// Every vertex that transitively uses `v`.
    pub fn transitive_users(&self, v: VertexId) -> Vec<VertexId> {
        self.reach(v, &self.users)
    }

    fn reach(&self, start: VertexId, adj: &[Vec<VertexId>]) -> Vec<VertexId> {
        let mut seen = vec![false; self.vertices.len()];
        let mut queue = VecDeque::new();
        for &n in &adj[start.index()] {
            if !seen[n.index()] {
                seen[n.index()] = true;
                queue.push_back(n);
            }
        }
        while let Some(v) = queue.pop_front() {
            for &n in &adj[v.index()] {
                if !seen[n.index()] {
                    seen[n.index()] = true;
                    queue.push_back(n);
                }
            }
        }
        let mut out: Vec<VertexId> = seen
            .iter()
            .enumerate()
            .filter(|(_, &s)| s)
            .map(|(i, _)| VertexId(i as u32))
            .collect();
        out.sort_unstable();
        out
    }
}

/// One weighted edge of the library graph: `weight` counts the distinct
/// versions of `from` that depend on some version of `to`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LibraryEdge {
    pub from: LibraryId,
    pub to: LibraryId,
    pub weight: u64,
}

/// Library-level elevation of a [`DependencyGraph`]. Node ids are shared
/// with the underlying graph's [`LibraryId`] space.
#[derive(Debug, Clone)]
pub struct LibraryGraph {
    external: Vec<bool>,
    edges: Vec<LibraryEdge>,
    out_adj: Vec<Vec<(LibraryId, u64)>>,
    in_adj: Vec<Vec<(LibraryId, u64)>>,
    in_weight: Vec<u64>,
    out_weight: Vec<u64>,
}

impl LibraryGraph {
    pub fn node_count(&self) -> usize {
        self.external.len()
    }

    /// True when the library has no non-external versions at all.
    pub fn is_external(&self, l: LibraryId) -> bool {
        self.external[l.index()]
    }

    pub fn edges(&self) -> &[LibraryEdge] {
        &self.edges
    }

    /// D(l): libraries some version of `l` depends on, sorted.
    pub fn dependencies(&self, l: LibraryId) -> impl Iterator<Item = LibraryId> + '_ {
        self.out_adj[l.index()].iter().map(|&(to, _)| to)
    }

    /// Libraries with at least one version depending on a version of `l`.
    pub fn users(&self, l: LibraryId) -> impl Iterator<Item = LibraryId> + '_ {
        self.in_adj[l.index()].iter().map(|&(from, _)| from)
    }

    pub fn weight(&self, from: LibraryId, to: LibraryId) -> Option<u64> {
        self.out_adj[from.index()]
            .binary_search_by_key(&to, |&(l, _)| l)
            .ok()
            .map(|i| self.out_adj[from.index()][i].1)
    }

    /// Sum of incoming edge weights.
    pub fn in_weight(&self, l: LibraryId) -> u64 {
        self.in_weight[l.index()]
    }

    /// Sum of outgoing edge weights.
    pub fn out_weight(&self, l: LibraryId) -> u64 {
        self.out_weight[l.index()]
    }

    pub(crate) fn out_edges(&self, l: LibraryId) -> &[(LibraryId, u64)] {
        &self.out_adj[l.index()]
    }

    pub(crate) fn in_edges(&self, l: LibraryId) -> &[(LibraryId, u64)] {
        &self.in_adj[l.index()]
    }
}

/// Builds the library graph from a frozen dependency graph.
///
/// A vertex that depends on another version of its own library produces a
/// retained self-edge. Libraries consisting only of external stubs become
/// flagged external nodes.
pub fn elevate(g: &DependencyGraph) -> LibraryGraph {
    let n = g.library_count();

    // (source library, target library, source vertex), deduplicated so a
    // source version counts once per target library however many edges it
    // declares into it.
    let mut triples: Vec<(LibraryId, LibraryId, VertexId)> = Vec::new();
    for v in g.vertex_ids() {
        let from_lib = g.vertex(v).library();
        for &d in g.dependencies(v) {
            triples.push((from_lib, g.vertex(d).library(), v));
        }
    }
    triples.sort_unstable();
    triples.dedup();

    let mut edges: Vec<LibraryEdge> = Vec::new();
    for (from, to, _) in triples {
        match edges.last_mut() {
            Some(e) if e.from == from && e.to == to => e.weight += 1,
            _ => edges.push(LibraryEdge {
                from,
                to,
                weight: 1,
            }),
        }
    }

    let mut out_adj = vec![Vec::new(); n];
    let mut in_adj = vec![Vec::new(); n];
    let mut in_weight = vec![0u64; n];
    let mut out_weight = vec![0u64; n];
    for e in &edges {
        out_adj[e.from.index()].push((e.to, e.weight));
        in_adj[e.to.index()].push((e.from, e.weight));
        out_weight[e.from.index()] += e.weight;
        in_weight[e.to.index()] += e.weight;
    }
    for adj in in_adj.iter_mut() {
        adj.sort_unstable_by_key(|&(l, _)| l);
    }

    let external = g.library_ids().map(|l| g.chain(l).is_empty()).collect();

    LibraryGraph {
        external,
        edges,
        out_adj,
        in_adj,
        in_weight,
        out_weight,
    }
}
