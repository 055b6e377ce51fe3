//! CSV and JSON writers. Numbers are written in shortest round-trip form,
//! so output is byte-stable for identical inputs.

use std::io::Write;

use serde::Serialize;
use syncline_core::simulator::RunResult;
use syncline_core::syncline::SynclineCurve;

use crate::report::ReportTable;
use crate::Result;

/// Shortest round-trip decimal; exponent form outside `[1e-4, 1e15)`.
pub fn number(x: f64) -> String {
    let a = x.abs();
    if x == 0.0 || !x.is_finite() || (1e-4..1e15).contains(&a) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

fn writer<W: Write>(w: W) -> csv::Writer<W> {
    csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(w)
}

pub fn write_curve_csv<W: Write>(curve: &SynclineCurve, w: W) -> Result<()> {
    let mut out = writer(w);
    out.write_record(["tau_s", "delta_m", "sync_accuracy_per_s", "est_accuracy_per_m"])?;
    for s in &curve.samples {
        out.write_record([number(s.tau), number(s.delta), number(s.sync_accuracy), number(s.est_accuracy)])?;
    }
    out.flush().map_err(csv::Error::from)?;
    Ok(())
}

pub fn write_run_csv<W: Write>(result: &RunResult, w: W) -> Result<()> {
    let mut out = writer(w);
    out.write_record(["tau_s", "worst_case_error_m", "syncline_prediction_m", "ratio"])?;
    for i in 0..result.taus.len() {
        out.write_record([
            number(result.taus[i]),
            number(result.worst_case[i]),
            number(result.prediction[i]),
            number(result.ratio[i]),
        ])?;
    }
    out.flush().map_err(csv::Error::from)?;
    Ok(())
}

/// Raw values in base units; `-` cells are empty, unit in each header.
pub fn write_table_csv<W: Write>(table: &ReportTable, w: W) -> Result<()> {
    let mut out = writer(w);
    let unit = table.rows.first().and_then(|r| r.cells.first()).map(|c| c.unit.base_symbol());
    let mut header = vec![table.row_header.clone()];
    header.extend(table.columns.iter().map(|c| match unit {
        Some(u) => format!("{c} [{u}]"),
        None => c.clone(),
    }));
    out.write_record(&header)?;
    for r in &table.rows {
        let mut line = vec![r.label.clone()];
        line.extend(r.cells.iter().map(|c| c.value.map(number).unwrap_or_default()));
        out.write_record(&line)?;
    }
    out.flush().map_err(csv::Error::from)?;
    Ok(())
}

#[derive(Serialize)]
struct RunJson<'a> {
    scenario: &'a str,
    noise_mode: &'a str,
    seed: u64,
    trials_per_tau: usize,
    rng: &'a str,
    rows: Vec<RunRow>,
}

#[derive(Serialize)]
struct RunRow {
    tau_s: f64,
    worst_case_error_m: f64,
    syncline_prediction_m: f64,
    ratio: f64,
}

pub fn run_json(result: &RunResult) -> Result<String> {
    let m = &result.metadata;
    let rows = (0..result.taus.len())
        .map(|i| RunRow {
            tau_s: result.taus[i],
            worst_case_error_m: result.worst_case[i],
            syncline_prediction_m: result.prediction[i],
            ratio: result.ratio[i],
        })
        .collect();
    let doc = RunJson {
        scenario: &m.scenario,
        noise_mode: m.noise_mode.label(),
        seed: m.seed,
        trials_per_tau: m.trials_per_tau,
        rng: m.rng,
        rows,
    };
    Ok(serde_json::to_string_pretty(&doc)?)
}

#[derive(Serialize)]
struct CurveJson {
    tau_crit_s: Option<f64>,
    roof_per_m: f64,
    samples: Vec<[f64; 4]>,
}

/// `samples` rows are `[tau_s, delta_m, sync_accuracy_per_s, est_accuracy_per_m]`.
pub fn curve_json(curve: &SynclineCurve) -> Result<String> {
    let doc = CurveJson {
        tau_crit_s: curve.tau_crit.is_finite().then_some(curve.tau_crit),
        roof_per_m: curve.roof,
        samples: curve.samples.iter().map(|s| [s.tau, s.delta, s.sync_accuracy, s.est_accuracy]).collect(),
    };
    Ok(serde_json::to_string_pretty(&doc)?)
}

pub fn table_json(table: &ReportTable) -> Result<String> {
    Ok(serde_json::to_string_pretty(table)?)
}
