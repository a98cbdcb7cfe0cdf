//! Record ingestion: turns artifact/dependency metadata records into a
//! frozen [`DependencyGraph`].
//!
//! Two input encodings are supported:
//!
//! * NDJSON, one record per line:
//!   `{"kind":"artifact","g":…,"a":…,"v":…,"released":"YYYY-MM-DD"}` or
//!   `{"kind":"dep","from":"g:a:v","to":"g:a:v","scope":"compile"}`
//!   (`scope` optional);
//! * CSV with header `kind,g,a,v,released,from,to,scope`, leaving the
//!   columns that do not apply to a record kind empty.
//!
//! Ingestion is two-pass: artifact records are materialized first and
//! dependency records resolved afterwards, so record order never matters.
//! Dependencies naming a coordinate with no artifact record are handled
//! per [`MissingPolicy`].

use std::collections::{BTreeSet, HashMap};
use std::fs::File;
use std::io::{BufRead, BufReader, Read};
use std::path::Path;
use std::str::FromStr;

use serde::Deserialize;
use thiserror::Error;

use crate::graph::{
    Coordinate, DependencyGraph, LibraryEntry, LibraryId, LibraryKey, VertexId, VertexRecord,
};
use crate::version::{ReleaseDate, VersionKey};

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("failed to read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("line {line}: {message}")]
    Malformed { line: u64, message: String },
    #[error("line {line}: duplicate coordinate {coordinate}")]
    DuplicateCoordinate { line: u64, coordinate: String },
    #[error("line {line}: dependency target {to} of {from} has no artifact record")]
    MissingTarget { line: u64, from: String, to: String },
    #[error("line {line}: dependency source {from} (towards {to}) has no artifact record")]
    MissingSource { line: u64, from: String, to: String },
    #[error("no release dates in input and no snapshot configured")]
    NoSnapshot,
    #[error("snapshot {snapshot} predates the release of {coordinate} ({released})")]
    SnapshotTooEarly {
        snapshot: ReleaseDate,
        coordinate: String,
        released: ReleaseDate,
    },
}

/// What to do with a dependency record whose endpoint has no artifact
/// record.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MissingPolicy {
    /// Create an external stub vertex (default).
    #[default]
    Stub,
    /// Drop the edge and record a warning.
    Skip,
    /// Fail ingestion.
    Strict,
}

impl FromStr for MissingPolicy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "stub" => Ok(MissingPolicy::Stub),
            "skip" => Ok(MissingPolicy::Skip),
            "strict" => Ok(MissingPolicy::Strict),
            other => Err(format!("unknown missing-target policy {other:?}")),
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct IngestOptions {
    pub policy: MissingPolicy,
    /// Overrides the snapshot date; defaults to the latest release seen.
    pub snapshot: Option<ReleaseDate>,
    /// Dependency scopes to drop at ingest, compared case-insensitively.
    pub exclude_scopes: BTreeSet<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RawRecord {
    Artifact {
        group: String,
        artifact: String,
        version: String,
        released: String,
    },
    Dep {
        from: String,
        to: String,
        scope: Option<String>,
    },
}

/// A record plus the 1-based input line it came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SourcedRecord {
    pub line: u64,
    pub record: RawRecord,
}

#[derive(Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum WireRecord {
    Artifact {
        g: String,
        a: String,
        v: String,
        released: String,
    },
    Dep {
        from: String,
        to: String,
        #[serde(default)]
        scope: Option<String>,
    },
}

impl From<WireRecord> for RawRecord {
    fn from(w: WireRecord) -> Self {
        match w {
            WireRecord::Artifact { g, a, v, released } => RawRecord::Artifact {
                group: g,
                artifact: a,
                version: v,
                released,
            },
            WireRecord::Dep { from, to, scope } => RawRecord::Dep { from, to, scope },
        }
    }
}

/// Reads NDJSON records, skipping blank lines.
pub fn read_ndjson<R: BufRead>(
    reader: R,
) -> impl Iterator<Item = Result<SourcedRecord, IngestError>> {
    reader.lines().enumerate().filter_map(|(idx, line)| {
        let line_no = idx as u64 + 1;
        match line {
            Err(e) => Some(Err(IngestError::Io {
                path: "<ndjson>".to_owned(),
                source: e,
            })),
            Ok(text) if text.trim().is_empty() => None,
            Ok(text) => Some(
                serde_json::from_str::<WireRecord>(&text)
                    .map(|w| SourcedRecord {
                        line: line_no,
                        record: w.into(),
                    })
                    .map_err(|e| IngestError::Malformed {
                        line: line_no,
                        message: e.to_string(),
                    }),
            ),
        }
    })
}

/// Reads CSV records with the `kind,g,a,v,released,from,to,scope` header.
pub fn read_csv<R: Read>(reader: R) -> impl Iterator<Item = Result<SourcedRecord, IngestError>> {
    #[derive(Deserialize)]
    struct CsvRow {
        kind: String,
        #[serde(default)]
        g: String,
        #[serde(default)]
        a: String,
        #[serde(default)]
        v: String,
        #[serde(default)]
        released: String,
        #[serde(default)]
        from: String,
        #[serde(default)]
        to: String,
        #[serde(default)]
        scope: String,
    }

    let rdr = csv::Reader::from_reader(reader);
    rdr.into_deserialize::<CsvRow>()
        .enumerate()
        .map(|(idx, row)| {
            // header occupies line 1
            let line = idx as u64 + 2;
            let row = row.map_err(|e| IngestError::Malformed {
                line,
                message: e.to_string(),
            })?;
            let record = match row.kind.as_str() {
                "artifact" => RawRecord::Artifact {
                    group: row.g,
                    artifact: row.a,
                    version: row.v,
                    released: row.released,
                },
                "dep" => RawRecord::Dep {
                    from: row.from,
                    to: row.to,
                    scope: if row.scope.is_empty() {
                        None
                    } else {
                        Some(row.scope)
                    },
                },
                other => {
                    return Err(IngestError::Malformed {
                        line,
                        message: format!("unknown record kind {other:?}"),
                    })
                }
            };
            Ok(SourcedRecord { line, record })
        })
}

/// Reads one input file, picking the decoder from the extension
/// (`.csv` means CSV, anything else NDJSON).
pub fn read_path(path: &Path) -> Result<Vec<SourcedRecord>, IngestError> {
    let file = File::open(path).map_err(|source| IngestError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let is_csv = path
        .extension()
        .is_some_and(|ext| ext.eq_ignore_ascii_case("csv"));
    if is_csv {
        read_csv(file).collect()
    } else {
        read_ndjson(BufReader::new(file)).collect()
    }
}

/// The built graph plus non-fatal ingestion warnings (skipped edges).
#[derive(Debug)]
pub struct IngestOutcome {
    pub graph: DependencyGraph,
    pub warnings: Vec<String>,
}

struct PendingDep {
    line: u64,
    from: Coordinate,
    to: Coordinate,
    scope: Option<String>,
}

fn push_vertex(
    vertices: &mut Vec<VertexRecord>,
    lookup: &mut HashMap<Coordinate, VertexId>,
    coordinate: Coordinate,
    released: Option<ReleaseDate>,
    version: VersionKey,
) -> VertexId {
    let id = VertexId(vertices.len() as u32);
    lookup.insert(coordinate.clone(), id);
    vertices.push(VertexRecord::new(coordinate, released, version));
    id
}

fn intern_stub(
    vertices: &mut Vec<VertexRecord>,
    lookup: &mut HashMap<Coordinate, VertexId>,
    coordinate: &Coordinate,
    line: u64,
) -> Result<VertexId, IngestError> {
    if let Some(&id) = lookup.get(coordinate) {
        return Ok(id);
    }
    let key = VersionKey::parse(&coordinate.version).map_err(|e| IngestError::Malformed {
        line,
        message: e.to_string(),
    })?;
    Ok(push_vertex(vertices, lookup, coordinate.clone(), None, key))
}

/// Builds a graph from records. See the module docs for semantics.
pub fn ingest<I>(records: I, options: &IngestOptions) -> Result<IngestOutcome, IngestError>
where
    I: IntoIterator<Item = Result<SourcedRecord, IngestError>>,
{
    let excluded: BTreeSet<String> = options
        .exclude_scopes
        .iter()
        .map(|s| s.to_lowercase())
        .collect();

    let mut vertices: Vec<VertexRecord> = Vec::new();
    let mut coordinate_lookup: HashMap<Coordinate, VertexId> = HashMap::new();
    let mut pending: Vec<PendingDep> = Vec::new();
    let mut warnings = Vec::new();

    for item in records {
        let SourcedRecord { line, record } = item?;
        match record {
            RawRecord::Artifact {
                group,
                artifact,
                version,
                released,
            } => {
                if group.is_empty() || artifact.is_empty() {
                    return Err(IngestError::Malformed {
                        line,
                        message: "artifact record with empty group or artifact id".into(),
                    });
                }
                let key = VersionKey::parse(&version).map_err(|e| IngestError::Malformed {
                    line,
                    message: e.to_string(),
                })?;
                let date = ReleaseDate::parse(&released).map_err(|e| IngestError::Malformed {
                    line,
                    message: e.to_string(),
                })?;
                let coordinate = Coordinate::new(group, artifact, version);
                if coordinate_lookup.contains_key(&coordinate) {
                    return Err(IngestError::DuplicateCoordinate {
                        line,
                        coordinate: coordinate.to_string(),
                    });
                }
                push_vertex(
                    &mut vertices,
                    &mut coordinate_lookup,
                    coordinate,
                    Some(date),
                    key,
                );
            }
            RawRecord::Dep { from, to, scope } => {
                if let Some(s) = &scope {
                    if excluded.contains(&s.to_lowercase()) {
                        continue;
                    }
                }
                let parse = |text: &str| {
                    Coordinate::parse(text).map_err(|e| IngestError::Malformed {
                        line,
                        message: e.to_string(),
                    })
                };
                pending.push(PendingDep {
                    line,
                    from: parse(&from)?,
                    to: parse(&to)?,
                    scope,
                });
            }
        }
    }

    // Second pass: resolve dependency endpoints.
    let mut edge_set: BTreeSet<(VertexId, VertexId, Option<String>)> = BTreeSet::new();
    for dep in pending {
        let from_id = coordinate_lookup.get(&dep.from).copied();
        let to_id = coordinate_lookup.get(&dep.to).copied();
        let (from_id, to_id) = match (from_id, to_id, options.policy) {
            (Some(f), Some(t), _) => (f, t),
            (_, _, MissingPolicy::Stub) => {
                let f = intern_stub(&mut vertices, &mut coordinate_lookup, &dep.from, dep.line)?;
                let t = intern_stub(&mut vertices, &mut coordinate_lookup, &dep.to, dep.line)?;
                (f, t)
            }
            (f, _, MissingPolicy::Skip) => {
                let which = if f.is_none() { "source" } else { "target" };
                warnings.push(format!(
                    "line {}: skipping dependency {} -> {} (missing {} artifact record)",
                    dep.line, dep.from, dep.to, which
                ));
                continue;
            }
            (None, _, MissingPolicy::Strict) => {
                return Err(IngestError::MissingSource {
                    line: dep.line,
                    from: dep.from.to_string(),
                    to: dep.to.to_string(),
                })
            }
            (_, None, MissingPolicy::Strict) => {
                return Err(IngestError::MissingTarget {
                    line: dep.line,
                    from: dep.from.to_string(),
                    to: dep.to.to_string(),
                })
            }
        };
        edge_set.insert((from_id, to_id, dep.scope));
    }

    let n = vertices.len();
    let edge_count = edge_set.len();
    let mut deps: Vec<Vec<VertexId>> = vec![Vec::new(); n];
    let mut users: Vec<Vec<VertexId>> = vec![Vec::new(); n];
    for (from, to, _) in edge_set {
        deps[from.index()].push(to);
        users[to.index()].push(from);
    }
    for list in deps.iter_mut().chain(users.iter_mut()) {
        list.sort_unstable();
        list.dedup();
    }

    // Snapshot: configured override or the latest release observed.
    let max_release = vertices.iter().filter_map(|v| v.released()).max();
    let snapshot = match (options.snapshot, max_release) {
        (Some(s), Some(max)) => {
            if s < max {
                let witness = vertices
                    .iter()
                    .find(|v| v.released() == Some(max))
                    .expect("max release has a witness");
                return Err(IngestError::SnapshotTooEarly {
                    snapshot: s,
                    coordinate: witness.coordinate().to_string(),
                    released: max,
                });
            }
            s
        }
        (Some(s), None) => s,
        (None, Some(max)) => max,
        (None, None) => return Err(IngestError::NoSnapshot),
    };

    // Group vertices into libraries; ids follow sorted key order so they
    // do not depend on record order.
    let mut by_key: HashMap<LibraryKey, Vec<VertexId>> = HashMap::new();
    for (idx, v) in vertices.iter().enumerate() {
        by_key
            .entry(v.coordinate().library())
            .or_default()
            .push(VertexId(idx as u32));
    }
    let mut keys: Vec<LibraryKey> = by_key.keys().cloned().collect();
    keys.sort_unstable();

    let mut libraries = Vec::with_capacity(keys.len());
    let mut library_lookup = HashMap::with_capacity(keys.len());
    for key in keys {
        let members = by_key.remove(&key).expect("key collected from map");
        let mut chain: Vec<VertexId> = members
            .iter()
            .copied()
            .filter(|&v| !vertices[v.index()].is_external())
            .collect();
        chain.sort_by(|&a, &b| {
            let va = &vertices[a.index()];
            let vb = &vertices[b.index()];
            va.version_key()
                .cmp(vb.version_key())
                .then_with(|| va.coordinate().version.cmp(&vb.coordinate().version))
        });
        library_lookup.insert(key.clone(), LibraryId(libraries.len() as u32));
        libraries.push(LibraryEntry {
            key,
            members,
            chain,
        });
    }
    for entry in &libraries {
        let lib_id = library_lookup[&entry.key];
        for &v in &entry.members {
            vertices[v.index()].set_library(lib_id);
        }
    }

    let graph = DependencyGraph::assemble(
        vertices,
        deps,
        users,
        edge_count,
        libraries,
        library_lookup,
        coordinate_lookup,
        snapshot,
    );
    Ok(IngestOutcome { graph, warnings })
}
