//! CSV ingestion of price series.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use puck_core::TickSeries;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InputFormat {
    /// Decide from the first parseable row: one column is price-only,
    /// two or more are (timestamp, price).
    Auto,
    TimePrice,
    PriceOnly,
}

#[derive(Debug, Clone)]
pub struct IngestSpec {
    pub path: PathBuf,
    pub format: InputFormat,
    pub delimiter: u8,
    pub skip_header: bool,
}

impl IngestSpec {
    pub fn new(path: impl Into<PathBuf>) -> Self {
        Self { path: path.into(), format: InputFormat::Auto, delimiter: b',', skip_header: false }
    }
}

/// What happened while reading: rows that failed to parse are counted and
/// reported, never silently dropped.
#[derive(Debug, Clone, Default, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct IngestStats {
    pub rows_total: usize,
    pub rows_used: usize,
    pub rows_skipped: usize,
    /// Timestamp decreases seen in a time-price file. When nonzero the
    /// timestamps are dropped (with a warning) and only prices are kept.
    pub timestamp_decreases: usize,
}

pub fn ingest(spec: &IngestSpec) -> Result<(TickSeries, IngestStats)> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(spec.skip_header)
        .delimiter(spec.delimiter)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_path(&spec.path)
        .with_context(|| format!("cannot open input file {}", spec.path.display()))?;

    let mut stats = IngestStats::default();
    let mut format = spec.format;
    let mut prices = Vec::new();
    let mut timestamps = Vec::new();

    for record in reader.records() {
        let record = record.with_context(|| format!("cannot read {}", spec.path.display()))?;
        stats.rows_total += 1;
        if record.iter().all(|f| f.is_empty()) {
            stats.rows_skipped += 1;
            continue;
        }
        if format == InputFormat::Auto {
            format = if record.len() >= 2 { InputFormat::TimePrice } else { InputFormat::PriceOnly };
        }
        let parsed = match format {
            InputFormat::PriceOnly => record.get(0).and_then(parse_f64).map(|p| (None, p)),
            InputFormat::TimePrice => {
                match (record.get(0).and_then(parse_f64), record.get(1).and_then(parse_f64)) {
                    (Some(t), Some(p)) => Some((Some(t), p)),
                    _ => None,
                }
            }
            InputFormat::Auto => unreachable!("format fixed on first data row"),
        };
        match parsed {
            Some((ts, price)) if price.is_finite() => {
                stats.rows_used += 1;
                prices.push(price);
                if let Some(t) = ts {
                    timestamps.push(t);
                }
            }
            _ => stats.rows_skipped += 1,
        }
    }

    if prices.is_empty() {
        bail!("no valid rows in {}", spec.path.display());
    }

    let label = label_for(&spec.path);
    let series = if timestamps.len() == prices.len() {
        stats.timestamp_decreases =
            timestamps.windows(2).filter(|w| w[1] < w[0]).count();
        if stats.timestamp_decreases > 0 {
            eprintln!(
                "warning: {} non-monotone timestamp steps in {}; keeping prices only",
                stats.timestamp_decreases,
                spec.path.display()
            );
            TickSeries::new(prices, label)?
        } else {
            TickSeries::with_timestamps(prices, timestamps, label)?
        }
    } else {
        TickSeries::new(prices, label)?
    };
    Ok((series, stats))
}

fn parse_f64(field: &str) -> Option<f64> {
    field.parse::<f64>().ok()
}

fn label_for(path: &Path) -> String {
    path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "input".into())
}

/// Price-only CSV text, one price per line. `{}` formatting emits the
/// shortest digits that parse back to the identical f64, so emission
/// after ingestion is byte-stable.
pub fn price_csv(series: &TickSeries) -> String {
    let mut out = String::with_capacity(series.len() * 12);
    for p in series.prices() {
        out.push_str(&format!("{p}\n"));
    }
    out
}
