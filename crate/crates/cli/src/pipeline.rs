//! Subcommand implementations: load the graph, run the metric passes a
//! command needs, write its report files.
//!
//! Metrics always run over the full graph; `--study-subjects` only
//! restricts which libraries (and their versions) are reported.

use std::path::{Path, PathBuf};

use depgraph::analysis::{
    histogram, library_summaries, pattern_frequencies, positional_index, significantly_popular,
    spearman, study_filter, SummaryInputs,
};
use depgraph::exec::Execution;
use depgraph::graph::{elevate, DependencyGraph, LibraryId};
use depgraph::ingest::{ingest, read_path, IngestError, IngestOptions, MissingPolicy};
use depgraph::metrics::{
    activity, library_popularity, library_statuses, lifespans, timeliness_all, version_popularity,
    ActivityStatus, LibraryStatus, PopularityConfig, PopularityError, PopularityMode,
    TimelinessVariant,
};
use depgraph::version::ReleaseDate;

use crate::args::{Cli, Command, CommonOpts, FormatArg, HistMetric, MissingArg, ModeArg};
use crate::report::{
    round6, table_path, write_table, CorrelateRow, CorrelateStatsRow, HistRow, LibraryRow,
    PatternRow, PatternStatsRow, SummaryRow, VersionRow,
};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Data(String),
    Convergence(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Data(_) => 2,
            CliError::Convergence(_) => 3,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Data(m) | CliError::Convergence(m) => m,
        }
    }
}

impl From<IngestError> for CliError {
    fn from(e: IngestError) -> Self {
        CliError::Data(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Data(e.to_string())
    }
}

impl From<PopularityError> for CliError {
    fn from(e: PopularityError) -> Self {
        match e {
            PopularityError::InvalidConfig(m) => CliError::Usage(m),
            other => CliError::Convergence(other.to_string()),
        }
    }
}

/// Validated run configuration.
pub struct Settings {
    inputs: Vec<PathBuf>,
    out: Option<PathBuf>,
    format: FormatArg,
    ingest: IngestOptions,
    popularity: PopularityConfig,
    bins: usize,
    study: Option<(usize, usize)>,
    threads: usize,
    timeliness: TimelinessVariant,
}

pub fn validate(opts: &CommonOpts) -> Result<Settings, CliError> {
    let usage = |m: String| Err(CliError::Usage(m));
    if opts.input.is_empty() {
        return usage("at least one --input file is required".into());
    }
    if !(opts.damping > 0.0 && opts.damping < 1.0) {
        return usage(format!(
            "--damping must lie strictly between 0 and 1, got {}",
            opts.damping
        ));
    }
    if !(opts.tol > 0.0 && opts.tol.is_finite()) {
        return usage(format!("--tol must be a positive number, got {}", opts.tol));
    }
    if opts.max_iter == 0 {
        return usage("--max-iter must be at least 1".into());
    }
    if opts.bins == 0 {
        return usage("--bins must be at least 1".into());
    }
    if opts.min_versions > opts.max_versions {
        return usage(format!(
            "--min-versions {} exceeds --max-versions {}",
            opts.min_versions, opts.max_versions
        ));
    }
    let snapshot = match &opts.snapshot {
        None => None,
        Some(text) => match ReleaseDate::parse(text) {
            Ok(d) => Some(d),
            Err(e) => return usage(format!("--snapshot: {e}")),
        },
    };

    Ok(Settings {
        inputs: opts.input.clone(),
        out: opts.out.clone(),
        format: opts.format,
        ingest: IngestOptions {
            policy: match opts.on_missing {
                MissingArg::Stub => MissingPolicy::Stub,
                MissingArg::Skip => MissingPolicy::Skip,
                MissingArg::Strict => MissingPolicy::Strict,
            },
            snapshot,
            exclude_scopes: opts
                .exclude_scopes
                .iter()
                .filter(|s| !s.is_empty())
                .map(|s| s.to_lowercase())
                .collect(),
        },
        popularity: PopularityConfig {
            damping: opts.damping,
            tolerance: opts.tol,
            max_iterations: opts.max_iter,
            mode: match opts.mode {
                ModeArg::Literal => PopularityMode::Literal,
                ModeArg::Normalized => PopularityMode::Normalized,
            },
        },
        bins: opts.bins,
        study: opts
            .study_subjects
            .then_some((opts.min_versions, opts.max_versions)),
        threads: opts.threads,
        timeliness: if opts.strict_timeliness {
            TimelinessVariant::StrictLifespan
        } else {
            TimelinessVariant::Formula
        },
    })
}

pub fn run(cli: &Cli) -> Result<(), CliError> {
    let settings = validate(&cli.opts)?;
    with_threads(settings.threads, |exec| {
        dispatch(&cli.command, &settings, exec)
    })
}

#[cfg(feature = "parallel")]
fn with_threads<T: Send>(threads: usize, f: impl FnOnce(Execution) -> T + Send) -> T {
    match threads {
        1 => f(Execution::Sequential),
        0 => f(Execution::Parallel),
        n => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .expect("thread pool")
            .install(|| f(Execution::Parallel)),
    }
}

#[cfg(not(feature = "parallel"))]
fn with_threads<T: Send>(threads: usize, f: impl FnOnce(Execution) -> T + Send) -> T {
    if threads > 1 {
        eprintln!("warning: built without the `parallel` feature; --threads is ignored");
    }
    f(Execution::Sequential)
}

fn load(settings: &Settings) -> Result<DependencyGraph, CliError> {
    let mut records = Vec::new();
    for path in &settings.inputs {
        let mut batch = read_path(path).map_err(|e| CliError::Data(e.to_string()))?;
        records.append(&mut batch);
    }
    let outcome = ingest(records.into_iter().map(Ok), &settings.ingest)?;
    for warning in &outcome.warnings {
        eprintln!("warning: {warning}");
    }
    Ok(outcome.graph)
}

fn selected_libraries(
    g: &DependencyGraph,
    settings: &Settings,
) -> Result<Vec<LibraryId>, CliError> {
    match settings.study {
        Some((min, max)) => study_filter(g, min, max).map_err(|e| CliError::Usage(e.to_string())),
        None => Ok(g
            .library_ids()
            .filter(|&l| !g.chain(l).is_empty())
            .collect()),
    }
}

fn out_dir<'a>(settings: &'a Settings, command: &str) -> Result<&'a Path, CliError> {
    let dir = settings.out.as_deref().ok_or_else(|| {
        CliError::Usage(format!("--out is required for the {command} subcommand"))
    })?;
    std::fs::create_dir_all(dir)?;
    Ok(dir)
}

fn dispatch(command: &Command, settings: &Settings, exec: Execution) -> Result<(), CliError> {
    let graph = load(settings)?;
    match command {
        Command::Stats => stats(&graph),
        Command::Versions => versions(&graph, settings, exec),
        Command::Libraries => libraries(&graph, settings, exec),
        Command::Patterns => patterns(&graph, settings, exec),
        Command::Hist { metric } => hist(&graph, settings, *metric, exec),
        Command::Correlate => correlate(&graph, settings, exec),
        Command::Summary => summary(&graph, settings, exec),
    }
}

fn stats(g: &DependencyGraph) -> Result<(), CliError> {
    let external_libraries = g.library_ids().filter(|&l| g.chain(l).is_empty()).count();
    println!("vertices: {}", g.vertex_count());
    println!("external-vertices: {}", g.external_count());
    println!("dep-edges: {}", g.edge_count());
    println!("libraries: {}", g.library_count());
    println!("external-libraries: {external_libraries}");
    println!("snapshot: {}", g.snapshot());
    Ok(())
}

fn versions(g: &DependencyGraph, settings: &Settings, exec: Execution) -> Result<(), CliError> {
    let dir = out_dir(settings, "versions")?;
    let table = activity(g, exec);
    let spans = lifespans(g, &table, exec);
    let tims = timeliness_all(g, &table, settings.timeliness, exec);
    let pops = version_popularity(g, &settings.popularity, exec)?;

    let selected = selected_libraries(g, settings)?;
    let mut rows = Vec::new();
    for &l in &selected {
        for &v in g.chain(l) {
            let record = g.vertex(v);
            let status = table.status(v).expect("chain vertices are internal");
            let span = &spans[v.index()];
            let tim = tims[v.index()].expect("chain vertices are internal");
            let flags = match span {
                Some(s) if s.clamped => "lifespan-clamped".to_owned(),
                _ => String::new(),
            };
            rows.push((
                record.coordinate().clone(),
                VersionRow {
                    coordinate: record.coordinate().to_string(),
                    released: record.released().expect("dated").to_string(),
                    status: status.to_string(),
                    lifespan_start: span.map(|s| s.start.to_string()),
                    lifespan_end: span.map(|s| s.end.to_string()),
                    pop_v: round6(pops.scores[v.index()]),
                    timeliness: round6(tim.value),
                    timeliness_class: tim.class.to_string(),
                    positional_index: positional_index(g, v).ok().map(round6),
                    flags,
                },
            ));
        }
    }
    rows.sort_by(|a, b| a.0.cmp(&b.0));
    let rows: Vec<VersionRow> = rows.into_iter().map(|(_, row)| row).collect();
    write_table(
        &rows,
        settings.format,
        &table_path(dir, "versions", settings.format),
    )?;
    Ok(())
}

fn libraries(g: &DependencyGraph, settings: &Settings, exec: Execution) -> Result<(), CliError> {
    let dir = out_dir(settings, "libraries")?;
    let table = activity(g, exec);
    let lg = elevate(g);
    let version_scores = version_popularity(g, &settings.popularity, exec)?;
    let library_scores = library_popularity(&lg, &settings.popularity, exec)?;
    let tims = timeliness_all(g, &table, settings.timeliness, exec);

    let selected = selected_libraries(g, settings)?;
    let inputs = SummaryInputs {
        activity: &table,
        version_scores: &version_scores.scores,
        library_scores: &library_scores.scores,
        timeliness: &tims,
    };
    let rows: Vec<LibraryRow> = library_summaries(g, &selected, &inputs, exec)
        .into_iter()
        .map(|s| LibraryRow {
            library: s.library.to_string(),
            category: s.category.to_string(),
            n_versions: s.n_versions as u64,
            n_active: s.n_active as u64,
            n_passive_nondormant: s.n_passive_nondormant as u64,
            n_dormant: s.n_dormant as u64,
            pct_active: round6(s.pct_active),
            pop_l: round6(s.popularity),
            n_signif_popular: s.n_significantly_popular as u64,
            pattern: s.pattern.to_string(),
            pct_under: round6(s.pct_under_timely),
            pct_timely: round6(s.pct_timely),
            pct_over: round6(s.pct_over_timely),
        })
        .collect();
    write_table(
        &rows,
        settings.format,
        &table_path(dir, "libraries", settings.format),
    )?;
    Ok(())
}

fn patterns(g: &DependencyGraph, settings: &Settings, exec: Execution) -> Result<(), CliError> {
    let dir = out_dir(settings, "patterns")?;
    let table = activity(g, exec);
    let selected = selected_libraries(g, settings)?;
    let freq = pattern_frequencies(g, &selected, &table);

    let rows: Vec<PatternRow> = freq
        .iter()
        .map(|(p, n)| PatternRow {
            pattern: p.to_string(),
            frequency: *n,
        })
        .collect();

    let distinct = freq.len() as u64;
    let libraries: u64 = freq.iter().map(|(_, n)| n).sum();
    let distinct_active = freq.iter().filter(|(p, _)| p.ends_active()).count() as u64;
    let libraries_active: u64 = freq
        .iter()
        .filter(|(p, _)| p.ends_active())
        .map(|(_, n)| n)
        .sum();
    let pct = |part: u64, whole: u64| {
        if whole == 0 {
            0.0
        } else {
            round6(100.0 * part as f64 / whole as f64)
        }
    };
    let stats = PatternStatsRow {
        distinct_patterns: distinct,
        libraries,
        pct_distinct_ending_active: pct(distinct_active, distinct),
        pct_libraries_ending_active: pct(libraries_active, libraries),
    };

    write_table(
        &rows,
        settings.format,
        &table_path(dir, "patterns", settings.format),
    )?;
    write_table(
        &[stats],
        settings.format,
        &table_path(dir, "patterns_stats", settings.format),
    )?;
    Ok(())
}

fn hist(
    g: &DependencyGraph,
    settings: &Settings,
    metric: HistMetric,
    exec: Execution,
) -> Result<(), CliError> {
    let dir = out_dir(settings, "hist")?;
    let table = activity(g, exec);
    let selected = selected_libraries(g, settings)?;

    let mut values = Vec::new();
    match metric {
        HistMetric::PositionalActive => {
            for &l in &selected {
                if g.chain(l).len() < 2 {
                    continue;
                }
                for &v in g.chain(l) {
                    if table.is_active(v) {
                        values.push(
                            positional_index(g, v).map_err(|e| CliError::Data(e.to_string()))?,
                        );
                    }
                }
            }
        }
        HistMetric::PositionalPopular => {
            let pops = version_popularity(g, &settings.popularity, exec)?;
            for &l in &selected {
                if g.chain(l).len() < 2 {
                    continue;
                }
                let (outliers, _) = significantly_popular(g, l, &pops.scores);
                for v in outliers {
                    values.push(positional_index(g, v).map_err(|e| CliError::Data(e.to_string()))?);
                }
            }
        }
    }

    let h = histogram(&values, settings.bins).map_err(|e| CliError::Data(e.to_string()))?;
    let rows: Vec<HistRow> = (0..h.bin_count)
        .map(|i| HistRow {
            bin: i as u64,
            lo: round6(h.edges[i]),
            hi: round6(h.edges[i + 1]),
            count: h.counts[i],
        })
        .collect();
    write_table(
        &rows,
        settings.format,
        &table_path(dir, "hist", settings.format),
    )?;
    Ok(())
}

fn correlate(g: &DependencyGraph, settings: &Settings, exec: Execution) -> Result<(), CliError> {
    let dir = out_dir(settings, "correlate")?;
    let table = activity(g, exec);
    let lg = elevate(g);
    let library_scores = library_popularity(&lg, &settings.popularity, exec)?;
    let selected = selected_libraries(g, settings)?;

    let mut rows = Vec::new();
    for &l in &selected {
        let chain = g.chain(l);
        let active = chain.iter().filter(|&&v| table.is_active(v)).count();
        let pct_active = 100.0 * active as f64 / chain.len() as f64;
        rows.push(CorrelateRow {
            library: g.library_key(l).to_string(),
            pct_active: round6(pct_active),
            pop_l: round6(library_scores.scores[l.index()]),
        });
    }

    let x: Vec<f64> = rows.iter().map(|r| r.pct_active).collect();
    let y: Vec<f64> = rows.iter().map(|r| r.pop_l).collect();
    let s = spearman(&x, &y).map_err(|e| CliError::Data(e.to_string()))?;
    let stats = CorrelateStatsRow {
        n: s.n as u64,
        rho: round6(s.rho),
        p_value: round6(s.p_value),
    };

    write_table(
        &rows,
        settings.format,
        &table_path(dir, "correlate", settings.format),
    )?;
    write_table(
        &[stats],
        settings.format,
        &table_path(dir, "correlate_stats", settings.format),
    )?;
    println!("n: {}", s.n);
    println!("rho: {}", crate::report::fmt6(s.rho));
    println!("p-value: {}", crate::report::fmt6(s.p_value));
    Ok(())
}

fn summary(g: &DependencyGraph, settings: &Settings, exec: Execution) -> Result<(), CliError> {
    let table = activity(g, exec);
    let selected = selected_libraries(g, settings)?;

    let mut version_counts = [0u64; 3];
    for &l in &selected {
        for &v in g.chain(l) {
            if let Some(s) = table.status(v) {
                version_counts[s as usize] += 1;
            }
        }
    }
    let lib_statuses = library_statuses(g, &table);
    let mut library_counts = [0u64; 3];
    for &l in &selected {
        if let Some(s) = lib_statuses[l.index()] {
            let idx = match s {
                LibraryStatus::Active => 0,
                LibraryStatus::Passive => 1,
                LibraryStatus::Dormant => 2,
            };
            library_counts[idx] += 1;
        }
    }

    let total_versions: u64 = version_counts.iter().sum();
    let total_libraries: u64 = library_counts.iter().sum();
    let pct = |part: u64, whole: u64| {
        if whole == 0 {
            0.0
        } else {
            round6(100.0 * part as f64 / whole as f64)
        }
    };
    let labels = [
        (
            "active",
            ActivityStatus::Active as usize,
            LibraryStatus::Active,
        ),
        (
            "passive-nondormant",
            ActivityStatus::PassiveNonDormant as usize,
            LibraryStatus::Passive,
        ),
        (
            "dormant",
            ActivityStatus::Dormant as usize,
            LibraryStatus::Dormant,
        ),
    ];
    let mut rows: Vec<SummaryRow> = labels
        .iter()
        .enumerate()
        .map(|(i, (label, vi, _))| SummaryRow {
            status: (*label).to_owned(),
            n_versions: version_counts[*vi],
            pct_versions: pct(version_counts[*vi], total_versions),
            n_libraries: library_counts[i],
            pct_libraries: pct(library_counts[i], total_libraries),
        })
        .collect();
    rows.push(SummaryRow {
        status: "total".to_owned(),
        n_versions: total_versions,
        pct_versions: pct(total_versions, total_versions),
        n_libraries: total_libraries,
        pct_libraries: pct(total_libraries, total_libraries),
    });

    println!(
        "{:<20} {:>10} {:>9} {:>10} {:>9}",
        "status", "versions", "%", "libraries", "%"
    );
    for row in &rows {
        println!(
            "{:<20} {:>10} {:>9.2} {:>10} {:>9.2}",
            row.status, row.n_versions, row.pct_versions, row.n_libraries, row.pct_libraries
        );
    }

    if settings.out.is_some() {
        let dir = out_dir(settings, "summary")?;
        write_table(
            &rows,
            settings.format,
            &table_path(dir, "summary", settings.format),
        )?;
    }
    Ok(())
}
