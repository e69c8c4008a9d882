//! Line-delimited report records and two-column plot files.
//!
//! Every report stream starts with a header record carrying the effective
//! configuration; one record follows per fit or window. Records are JSON
//! objects, one per line, so scans stream and `f64` fields survive a
//! parse round trip bit for bit.

use std::fmt::Write as _;

use puck_core::{
    EmpiricalPotential, FitResult, ModelFamily, ModelSelection, RegimeLabel, SimulationConfig,
    WindowOutcome, WindowScanRecord,
};
use serde::{Deserialize, Serialize};

use crate::config::RunConfig;
use crate::demo::DemoSpec;
use crate::ingest::IngestStats;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InputSummary {
    pub path: String,
    pub label: String,
    #[serde(flatten)]
    pub stats: IngestStats,
}

/// Criterion value of each family's best fit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilyCriteria {
    pub no_potential: f64,
    pub quadratic: f64,
    pub nonlinear: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelectionSummary {
    pub winner: ModelFamily,
    pub fit: FitResult,
    pub family_criteria: FamilyCriteria,
    pub delta_criterion: f64,
}

impl SelectionSummary {
    pub fn from_selection(selection: &ModelSelection) -> Self {
        let criterion = selection.criterion;
        Self {
            winner: selection.winner,
            fit: selection.best().clone(),
            family_criteria: FamilyCriteria {
                no_potential: selection.no_potential.criterion_value(criterion),
                quadratic: selection.quadratic.criterion_value(criterion),
                nonlinear: selection.nonlinear.criterion_value(criterion),
            },
            delta_criterion: selection.runner_up_gap(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "record", rename_all = "snake_case")]
pub enum ReportRecord {
    Header {
        command: String,
        #[serde(skip_serializing_if = "Option::is_none")]
        config: Option<RunConfig>,
        #[serde(skip_serializing_if = "Option::is_none")]
        input: Option<InputSummary>,
    },
    Fit {
        selection: SelectionSummary,
        #[serde(skip_serializing_if = "Option::is_none")]
        regime: Option<RegimeLabel>,
    },
    Window {
        start: usize,
        length: usize,
        degenerate: bool,
        #[serde(skip_serializing_if = "Option::is_none")]
        selection: Option<SelectionSummary>,
        #[serde(skip_serializing_if = "Option::is_none")]
        regime: Option<RegimeLabel>,
    },
    Stability {
        m: usize,
        b_low: f64,
        b_high: f64,
    },
    Potential {
        m: usize,
        bins_requested: usize,
        bins_kept: usize,
    },
    Series {
        path: String,
        rows: usize,
        #[serde(skip_serializing_if = "Option::is_none")]
        sim: Option<SimulationConfig>,
        #[serde(skip_serializing_if = "Option::is_none")]
        demo: Option<DemoSpec>,
        #[serde(skip_serializing_if = "Option::is_none")]
        cubic_start: Option<usize>,
        #[serde(skip_serializing_if = "Option::is_none")]
        crash_start: Option<usize>,
    },
}

impl ReportRecord {
    pub fn window(record: &WindowScanRecord) -> Self {
        match &record.outcome {
            WindowOutcome::Classified { selection, regime } => ReportRecord::Window {
                start: record.start,
                length: record.length,
                degenerate: false,
                selection: Some(SelectionSummary::from_selection(selection)),
                regime: Some(regime.clone()),
            },
            WindowOutcome::Degenerate => ReportRecord::Window {
                start: record.start,
                length: record.length,
                degenerate: true,
                selection: None,
                regime: None,
            },
        }
    }
}

/// One JSON object per line.
pub fn render_records(records: &[ReportRecord]) -> String {
    let mut out = String::new();
    for record in records {
        out.push_str(&serde_json::to_string(record).expect("report records serialize"));
        out.push('\n');
    }
    out
}

pub fn parse_records(text: &str) -> anyhow::Result<Vec<ReportRecord>> {
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| serde_json::from_str(l).map_err(Into::into))
        .collect()
}

/// Two-column numeric text, one `x y` pair per line.
pub fn two_column(xs: &[f64], ys: &[f64]) -> String {
    debug_assert_eq!(xs.len(), ys.len());
    let mut out = String::with_capacity(xs.len() * 24);
    for (x, y) in xs.iter().zip(ys) {
        let _ = writeln!(out, "{x} {y}");
    }
    out
}

/// Plot file of the reconstructed potential: displacement vs U.
pub fn potential_curve(potential: &EmpiricalPotential) -> String {
    two_column(&potential.bin_centers, &potential.u_values)
}

/// Plot file of the binned force estimates: displacement vs mean increment.
pub fn increment_curve(potential: &EmpiricalPotential) -> String {
    two_column(&potential.bin_centers, &potential.mean_increment)
}
