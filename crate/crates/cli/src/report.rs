//! Report rows and deterministic file writing.
//!
//! Identical rows produce byte-identical files: rows arrive pre-sorted,
//! floats are rounded to six fractional digits ('.' separator, no
//! locale), CSV cells render with `{:.6}` and JSON carries the rounded
//! numbers.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::args::FormatArg;

pub fn round6(x: f64) -> f64 {
    (x * 1e6).round() / 1e6
}

pub fn fmt6(x: f64) -> String {
    format!("{x:.6}")
}

fn opt_fmt6(x: &Option<f64>) -> String {
    x.map(fmt6).unwrap_or_default()
}

fn opt_str(x: &Option<String>) -> String {
    x.clone().unwrap_or_default()
}

pub trait TableRow: Serialize {
    fn headers() -> &'static [&'static str];
    fn fields(&self) -> Vec<String>;
}

#[derive(Serialize, Debug)]
pub struct VersionRow {
    pub coordinate: String,
    pub released: String,
    pub status: String,
    pub lifespan_start: Option<String>,
    pub lifespan_end: Option<String>,
    pub pop_v: f64,
    pub timeliness: f64,
    pub timeliness_class: String,
    pub positional_index: Option<f64>,
    pub flags: String,
}

impl TableRow for VersionRow {
    fn headers() -> &'static [&'static str] {
        &[
            "coordinate",
            "released",
            "status",
            "lifespan_start",
            "lifespan_end",
            "pop_v",
            "timeliness",
            "timeliness_class",
            "positional_index",
            "flags",
        ]
    }

    fn fields(&self) -> Vec<String> {
        vec![
            self.coordinate.clone(),
            self.released.clone(),
            self.status.clone(),
            opt_str(&self.lifespan_start),
            opt_str(&self.lifespan_end),
            fmt6(self.pop_v),
            fmt6(self.timeliness),
            self.timeliness_class.clone(),
            opt_fmt6(&self.positional_index),
            self.flags.clone(),
        ]
    }
}

#[derive(Serialize, Debug)]
pub struct LibraryRow {
    pub library: String,
    pub category: String,
    pub n_versions: u64,
    pub n_active: u64,
    pub n_passive_nondormant: u64,
    pub n_dormant: u64,
    pub pct_active: f64,
    pub pop_l: f64,
    pub n_signif_popular: u64,
    pub pattern: String,
    pub pct_under: f64,
    pub pct_timely: f64,
    pub pct_over: f64,
}

impl TableRow for LibraryRow {
    fn headers() -> &'static [&'static str] {
        &[
            "library",
            "category",
            "n_versions",
            "n_active",
            "n_passive_nondormant",
            "n_dormant",
            "pct_active",
            "pop_l",
            "n_signif_popular",
            "pattern",
            "pct_under",
            "pct_timely",
            "pct_over",
        ]
    }

    fn fields(&self) -> Vec<String> {
        vec![
            self.library.clone(),
            self.category.clone(),
            self.n_versions.to_string(),
            self.n_active.to_string(),
            self.n_passive_nondormant.to_string(),
            self.n_dormant.to_string(),
            fmt6(self.pct_active),
            fmt6(self.pop_l),
            self.n_signif_popular.to_string(),
            self.pattern.clone(),
            fmt6(self.pct_under),
            fmt6(self.pct_timely),
            fmt6(self.pct_over),
        ]
    }
}

#[derive(Serialize, Debug)]
pub struct PatternRow {
    pub pattern: String,
    pub frequency: u64,
}

impl TableRow for PatternRow {
    fn headers() -> &'static [&'static str] {
        &["pattern", "frequency"]
    }

    fn fields(&self) -> Vec<String> {
        vec![self.pattern.clone(), self.frequency.to_string()]
    }
}

/// Share of patterns ending in an active state, counted both over
/// distinct patterns and over libraries.
#[derive(Serialize, Debug)]
pub struct PatternStatsRow {
    pub distinct_patterns: u64,
    pub libraries: u64,
    pub pct_distinct_ending_active: f64,
    pub pct_libraries_ending_active: f64,
}

impl TableRow for PatternStatsRow {
    fn headers() -> &'static [&'static str] {
        &[
            "distinct_patterns",
            "libraries",
            "pct_distinct_ending_active",
            "pct_libraries_ending_active",
        ]
    }

    fn fields(&self) -> Vec<String> {
        vec![
            self.distinct_patterns.to_string(),
            self.libraries.to_string(),
            fmt6(self.pct_distinct_ending_active),
            fmt6(self.pct_libraries_ending_active),
        ]
    }
}

#[derive(Serialize, Debug)]
pub struct HistRow {
    pub bin: u64,
    pub lo: f64,
    pub hi: f64,
    pub count: u64,
}

impl TableRow for HistRow {
    fn headers() -> &'static [&'static str] {
        &["bin", "lo", "hi", "count"]
    }

    fn fields(&self) -> Vec<String> {
        vec![
            self.bin.to_string(),
            fmt6(self.lo),
            fmt6(self.hi),
            self.count.to_string(),
        ]
    }
}

#[derive(Serialize, Debug)]
pub struct CorrelateRow {
    pub library: String,
    pub pct_active: f64,
    pub pop_l: f64,
}

impl TableRow for CorrelateRow {
    fn headers() -> &'static [&'static str] {
        &["library", "pct_active", "pop_l"]
    }

    fn fields(&self) -> Vec<String> {
        vec![
            self.library.clone(),
            fmt6(self.pct_active),
            fmt6(self.pop_l),
        ]
    }
}

#[derive(Serialize, Debug)]
pub struct CorrelateStatsRow {
    pub n: u64,
    pub rho: f64,
    pub p_value: f64,
}

impl TableRow for CorrelateStatsRow {
    fn headers() -> &'static [&'static str] {
        &["n", "rho", "p_value"]
    }

    fn fields(&self) -> Vec<String> {
        vec![self.n.to_string(), fmt6(self.rho), fmt6(self.p_value)]
    }
}

#[derive(Serialize, Debug)]
pub struct SummaryRow {
    pub status: String,
    pub n_versions: u64,
    pub pct_versions: f64,
    pub n_libraries: u64,
    pub pct_libraries: f64,
}

impl TableRow for SummaryRow {
    fn headers() -> &'static [&'static str] {
        &[
            "status",
            "n_versions",
            "pct_versions",
            "n_libraries",
            "pct_libraries",
        ]
    }

    fn fields(&self) -> Vec<String> {
        vec![
            self.status.clone(),
            self.n_versions.to_string(),
            fmt6(self.pct_versions),
            self.n_libraries.to_string(),
            fmt6(self.pct_libraries),
        ]
    }
}

pub fn table_path(out: &Path, stem: &str, format: FormatArg) -> PathBuf {
    let ext = match format {
        FormatArg::Csv => "csv",
        FormatArg::Json => "json",
    };
    out.join(format!("{stem}.{ext}"))
}

/// Writes rows as a CSV table or a JSON array, depending on the format.
pub fn write_table<T: TableRow>(
    rows: &[T],
    format: FormatArg,
    path: &Path,
) -> Result<(), std::io::Error> {
    let file = File::create(path)?;
    let mut w = BufWriter::new(file);
    match format {
        FormatArg::Csv => {
            let mut csv = csv::Writer::from_writer(w);
            csv.write_record(T::headers())?;
            for row in rows {
                csv.write_record(row.fields())?;
            }
            csv.flush()?;
        }
        FormatArg::Json => {
            serde_json::to_writer_pretty(&mut w, rows)?;
            w.write_all(b"\n")?;
            w.flush()?;
        }
    }
    Ok(())
}
