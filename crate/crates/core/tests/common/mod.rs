//! Shared test support: the bundled nine-vertex fixture and seeded
//! synthetic graphs with coordinate-level oracles that never touch the
//! graph's own adjacency.

#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap, VecDeque};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use depgraph::graph::{Coordinate, DependencyGraph, LibraryId, VertexId};
use depgraph::ingest::{ingest, IngestOptions, IngestOutcome, RawRecord, SourcedRecord};
use depgraph::version::ReleaseDate;

pub const FIG1: &str = include_str!("../../../../fixtures/fig1.ndjson");

pub fn graph_from_ndjson(text: &str) -> IngestOutcome {
    let records = depgraph::ingest::read_ndjson(std::io::Cursor::new(text));
    ingest(records, &IngestOptions::default()).expect("fixture ingests")
}

pub fn fig1() -> DependencyGraph {
    graph_from_ndjson(FIG1).graph
}

pub fn vid(g: &DependencyGraph, artifact: &str, version: &str) -> VertexId {
    g.resolve(&Coordinate::new("acme", artifact, version))
        .unwrap_or_else(|| panic!("fixture vertex acme:{artifact}:{version}"))
}

pub fn lid(g: &DependencyGraph, artifact: &str) -> LibraryId {
    g.lookup_library(&depgraph::LibraryKey {
        group: "acme".into(),
        artifact: artifact.into(),
    })
    .unwrap_or_else(|| panic!("fixture library acme:{artifact}"))
}

pub fn coords(g: &DependencyGraph, ids: &[VertexId]) -> BTreeSet<String> {
    ids.iter()
        .map(|&v| g.vertex(v).coordinate().to_string())
        .collect()
}

/// Synthetic input held as plain records, so tests can run oracles over
/// the raw data independently of the built graph.
#[derive(Debug, Clone)]
pub struct SyntheticInput {
    pub artifacts: Vec<(Coordinate, ReleaseDate)>,
    pub deps: Vec<(Coordinate, Coordinate)>,
}

impl SyntheticInput {
    pub fn records(&self) -> Vec<Result<SourcedRecord, depgraph::ingest::IngestError>> {
        let mut out = Vec::new();
        for (i, (c, date)) in self.artifacts.iter().enumerate() {
            out.push(Ok(SourcedRecord {
                line: i as u64 + 1,
                record: RawRecord::Artifact {
                    group: c.group.clone(),
                    artifact: c.artifact.clone(),
                    version: c.version.clone(),
                    released: date.to_string(),
                },
            }));
        }
        let base = self.artifacts.len() as u64;
        for (i, (from, to)) in self.deps.iter().enumerate() {
            out.push(Ok(SourcedRecord {
                line: base + i as u64 + 1,
                record: RawRecord::Dep {
                    from: from.to_string(),
                    to: to.to_string(),
                    scope: None,
                },
            }));
        }
        out
    }

    pub fn graph(&self) -> DependencyGraph {
        ingest(self.records(), &IngestOptions::default())
            .expect("synthetic input ingests")
            .graph
    }

    /// Adjacency keyed by coordinate, straight from the records.
    pub fn dep_map(&self) -> HashMap<Coordinate, Vec<Coordinate>> {
        let mut map: HashMap<Coordinate, Vec<Coordinate>> = HashMap::new();
        for (c, _) in &self.artifacts {
            map.entry(c.clone()).or_default();
        }
        for (from, to) in &self.deps {
            map.entry(from.clone()).or_default().push(to.clone());
        }
        map
    }

    /// Reversed adjacency keyed by coordinate.
    pub fn user_map(&self) -> HashMap<Coordinate, Vec<Coordinate>> {
        let mut map: HashMap<Coordinate, Vec<Coordinate>> = HashMap::new();
        for (c, _) in &self.artifacts {
            map.entry(c.clone()).or_default();
        }
        for (from, to) in &self.deps {
            map.entry(to.clone()).or_default().push(from.clone());
        }
        map
    }

    /// Latest version of every library, derived from the numeric major
    /// component the generator encodes, without the library's comparator.
    pub fn oracle_latests(&self) -> Vec<Coordinate> {
        let mut best: HashMap<(String, String), (u64, Coordinate)> = HashMap::new();
        for (c, _) in &self.artifacts {
            let major: u64 = c
                .version
                .split('.')
                .next()
                .and_then(|s| s.parse().ok())
                .expect("generator emits numeric majors");
            let key = (c.group.clone(), c.artifact.clone());
            match best.get(&key) {
                Some((m, _)) if *m >= major => {}
                _ => {
                    best.insert(key, (major, c.clone()));
                }
            }
        }
        best.into_values().map(|(_, c)| c).collect()
    }
}

/// Breadth-first reachability over a coordinate adjacency map, excluding
/// the start unless it sits on a cycle through itself.
pub fn oracle_reachable(
    adj: &HashMap<Coordinate, Vec<Coordinate>>,
    start: &Coordinate,
) -> BTreeSet<Coordinate> {
    let mut seen = BTreeSet::new();
    let mut queue = VecDeque::new();
    for n in adj.get(start).into_iter().flatten() {
        if seen.insert(n.clone()) {
            queue.push_back(n.clone());
        }
    }
    while let Some(c) = queue.pop_front() {
        for n in adj.get(&c).into_iter().flatten() {
            if seen.insert(n.clone()) {
                queue.push_back(n.clone());
            }
        }
    }
    seen
}

pub struct SyntheticSpec {
    pub max_libraries: usize,
    pub max_versions: usize,
    /// Edges per vertex, on average.
    pub edge_factor: f64,
    /// Wire a three-vertex ring to guarantee a cycle.
    pub force_cycle: bool,
    /// Restrict edges to point from earlier to later artifacts, which
    /// keeps the graph acyclic.
    pub acyclic: bool,
}

impl Default for SyntheticSpec {
    fn default() -> Self {
        SyntheticSpec {
            max_libraries: 10,
            max_versions: 8,
            edge_factor: 1.5,
            force_cycle: false,
            acyclic: false,
        }
    }
}

pub fn synthetic(seed: u64, spec: &SyntheticSpec) -> SyntheticInput {
    let mut rng = StdRng::seed_from_u64(seed);
    let n_libs = rng.gen_range(1..=spec.max_libraries);
    let base = ReleaseDate::parse("2015-01-01").unwrap();

    let mut artifacts = Vec::new();
    for lib in 0..n_libs {
        let versions = rng.gen_range(1..=spec.max_versions);
        for k in 1..=versions {
            let c = Coordinate::new("test", format!("lib{lib}"), format!("{k}.0"));
            artifacts.push((c, base.plus_days(rng.gen_range(0..=3650))));
        }
    }

    let n = artifacts.len();
    let mut deps = Vec::new();
    if n >= 2 {
        let edges = (n as f64 * spec.edge_factor).round() as usize;
        for _ in 0..edges {
            let (i, j) = if spec.acyclic {
                let i = rng.gen_range(0..n - 1);
                (i, rng.gen_range(i + 1..n))
            } else {
                let i = rng.gen_range(0..n);
                let mut j = rng.gen_range(0..n);
                if j == i {
                    j = (j + 1) % n;
                }
                (i, j)
            };
            deps.push((artifacts[i].0.clone(), artifacts[j].0.clone()));
        }
        if spec.force_cycle && !spec.acyclic && n >= 3 {
            deps.push((artifacts[0].0.clone(), artifacts[1].0.clone()));
            deps.push((artifacts[1].0.clone(), artifacts[2].0.clone()));
            deps.push((artifacts[2].0.clone(), artifacts[0].0.clone()));
        }
    }

    SyntheticInput { artifacts, deps }
}
