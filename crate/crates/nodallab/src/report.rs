//! Run results and the files written for them.

use std::fs;
use std::path::Path;

use nodallab_core::fields::FieldSource;
use nodallab_core::nodal::{
    write_boxcounts_csv, write_nodal_cells_csv, write_singular_points_csv, BoxDimension, NodalLevel, SingularPoint,
};
use serde::Serialize;
use serde_json::Value;

use crate::config::Params;
use crate::experiments::Metrics;
use crate::registry::{Check, ExperimentSpec};
use crate::{svg, HarnessError};

/// Everything an experiment measured.
#[derive(Debug, Default)]
pub struct Outcome {
    pub metrics: Metrics,
    /// Coarsest to finest.
    pub levels: Vec<NodalLevel>,
    pub fit: Option<BoxDimension>,
    /// `nodal_cells.csv` for the finest level.
    pub nodal_cells_csv: Vec<u8>,
    /// Centres of the finest level's flagged cells.
    pub cell_points: Vec<Vec<f64>>,
    pub singular: Vec<SingularPoint>,
    pub gaps: Vec<Vec<f64>>,
}

impl Outcome {
    pub(crate) fn record_levels(&mut self, source: &dyn FieldSource, levels: Vec<NodalLevel>, fit: Option<BoxDimension>) {
        if let Some(top) = levels.last() {
            let mut csv = Vec::new();
            write_nodal_cells_csv(&top.cells, source, &mut csv).expect("writing to memory");
            self.nodal_cells_csv = csv;
            self.cell_points = top.cells.cells.iter().map(|&c| top.cells.grid.cell_center(c)).collect();
        }
        self.levels = levels;
        self.fit = fit;
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CriterionResult {
    pub criterion: String,
    pub metric: String,
    pub expectation: Check,
    pub value: Value,
    pub pass: bool,
}

/// Contents of `summary.json`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Summary {
    pub id: String,
    pub claim: String,
    pub anchor: String,
    pub params: Params,
    pub metrics: Metrics,
    pub criteria: Vec<CriterionResult>,
    pub pass: bool,
}

impl Summary {
    pub fn evaluate(spec: &ExperimentSpec, params: &Params, metrics: &Metrics) -> Self {
        let criteria: Vec<CriterionResult> = spec
            .expectations
            .iter()
            .map(|e| {
                let value = metrics.get(e.metric);
                CriterionResult {
                    criterion: e.criterion.into(),
                    metric: e.metric.into(),
                    expectation: e.check,
                    value: value.cloned().unwrap_or(Value::Null),
                    pass: e.check.holds(value),
                }
            })
            .collect();
        Summary {
            id: spec.id.into(),
            claim: spec.claim.into(),
            anchor: spec.anchor.into(),
            params: params.clone(),
            metrics: metrics.clone(),
            pass: criteria.iter().all(|c| c.pass),
            criteria,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("summary serializes") + "\n"
    }
}

/// A finished run.
#[derive(Debug)]
pub struct Run {
    pub summary: Summary,
    pub outcome: Outcome,
}

pub const OUTPUT_FILES: [&str; 5] =
    ["summary.json", "boxcounts.csv", "nodal_cells.csv", "singular_points.csv", "plot.svg"];

/// Writes all output files into `dir`, creating it if needed. Files with
/// nothing to report still get their header line.
pub fn write_outputs(dir: &Path, run: &Run) -> Result<(), HarnessError> {
    fs::create_dir_all(dir)?;
    fs::write(dir.join("summary.json"), run.summary.to_json())?;

    let mut buf = Vec::new();
    write_boxcounts_csv(&run.outcome.levels, &mut buf)?;
    fs::write(dir.join("boxcounts.csv"), buf)?;

    let cells = if run.outcome.nodal_cells_csv.is_empty() { b"x1,x2,norm\n".to_vec() } else { run.outcome.nodal_cells_csv.clone() };
    fs::write(dir.join("nodal_cells.csv"), cells)?;

    let mut buf = Vec::new();
    write_singular_points_csv(&run.outcome.singular, &run.outcome.gaps, &mut buf)?;
    fs::write(dir.join("singular_points.csv"), buf)?;

    fs::write(dir.join("plot.svg"), svg::render(&run.summary, &run.outcome))?;
    Ok(())
}
