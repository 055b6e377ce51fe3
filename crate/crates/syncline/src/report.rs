//! Report tables and unit formatting.

use serde::Serialize;
use syncline_core::catalog::{Levers, Payload, Registry, SensorKind, SurveySystem};
use syncline_core::syncline::{per_sensor_tau_crit, per_sensor_tau_crit_survey, ErrorBudget, SurveyRole};

use crate::{AppError, Result};

/// Georeferencing platforms of the default `tau-crit` table.
pub const DEFAULT_GEOREF_PLATFORMS: [&str; 4] = ["USV", "Car", "Multi Rotor", "Fixed Wing"];
/// Sensors of the default georeferencing table.
pub const DEFAULT_GEOREF_SENSORS: [&str; 6] = ["F9P PVT", "F9P RTK", "Ellipse", "MRU5", "Alpha Prime", "VUX1"];
/// Sensors of the default survey table.
pub const DEFAULT_SURVEY_SENSORS: [&str; 8] =
    ["F9P PVT", "F9P RTK", "Ellipse", "MRU5", "HIPAP502", "USBL7000", "Sonic 2026", "M3 Sonar"];

/// Display unit of a cell. Values are always stored in base SI units
/// (s, m, 1/m, 1/s).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Unit {
    /// Seconds with an automatic SI prefix.
    #[serde(rename = "s")]
    Seconds,
    /// Milliseconds, three decimals.
    #[serde(rename = "ms")]
    Milliseconds,
    /// Microseconds, no decimals.
    #[serde(rename = "µs")]
    Microseconds,
    #[serde(rename = "m")]
    Meters,
    #[serde(rename = "1/m")]
    PerMeter,
    #[serde(rename = "1/s")]
    PerSecond,
}

impl Unit {
    pub fn symbol(&self) -> &'static str {
        match self {
            Unit::Seconds => "s",
            Unit::Milliseconds => "ms",
            Unit::Microseconds => "µs",
            Unit::Meters => "m",
            Unit::PerMeter => "1/m",
            Unit::PerSecond => "1/s",
        }
    }

    /// Base unit of the stored value.
    pub fn base_symbol(&self) -> &'static str {
        match self {
            Unit::Seconds | Unit::Milliseconds | Unit::Microseconds => "s",
            other => other.symbol(),
        }
    }

    pub fn format(&self, value: f64) -> String {
        if value.is_infinite() {
            return if value > 0.0 { "∞".into() } else { "-∞".into() };
        }
        match self {
            Unit::Seconds => format_si(value, "s"),
            Unit::Meters => format_si(value, "m"),
            Unit::Milliseconds => format!("{:.3} ms", value * 1e3),
            Unit::Microseconds => format!("{:.0} µs", value * 1e6),
            Unit::PerMeter | Unit::PerSecond => format!("{} {}", round_sig(value, 3), self.symbol()),
        }
    }
}

fn round_sig(x: f64, digits: usize) -> f64 {
    format!("{:.*e}", digits.saturating_sub(1), x).parse().expect("formatted float parses")
}

const PREFIXES: [(f64, &str); 9] =
    [(1e9, "G"), (1e6, "M"), (1e3, "k"), (1.0, ""), (1e-3, "m"), (1e-6, "µ"), (1e-9, "n"), (1e-12, "p"), (1e-15, "f")];

/// Three significant digits with an SI prefix chosen so that the mantissa is
/// in `[1, 1000)`: `0.0005196 → "520 µs"`.
pub fn format_si(value: f64, unit: &str) -> String {
    if value.is_nan() {
        return format!("NaN {unit}");
    }
    if value == 0.0 {
        return format!("0 {unit}");
    }
    let v = round_sig(value.abs(), 3);
    let sign = if value < 0.0 { "-" } else { "" };
    if !(1e-15..1e12).contains(&v) {
        return format!("{value:.2e} {unit}");
    }
    let (scale, prefix) = PREFIXES.iter().find(|(s, _)| v >= *s).copied().expect("value within prefix range");
    let mantissa = v / scale;
    let decimals = if mantissa >= 100.0 {
        0
    } else if mantissa >= 10.0 {
        1
    } else {
        2
    };
    format!("{sign}{mantissa:.decimals$} {prefix}{unit}")
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Cell {
    /// `None` renders as `-` (not applicable).
    pub value: Option<f64>,
    pub unit: Unit,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Row {
    pub label: String,
    pub cells: Vec<Cell>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportTable {
    pub caption: String,
    pub row_header: String,
    pub columns: Vec<String>,
    pub rows: Vec<Row>,
}

impl ReportTable {
    pub fn new(caption: &str, row_header: &str, columns: Vec<String>) -> Self {
        ReportTable { caption: caption.into(), row_header: row_header.into(), columns, rows: Vec::new() }
    }

    pub fn push(&mut self, label: &str, cells: Vec<Cell>) -> Result<()> {
        if cells.len() != self.columns.len() {
            return Err(AppError::Usage(format!(
                "row '{label}' has {} cells, table has {} columns",
                cells.len(),
                self.columns.len()
            )));
        }
        self.rows.push(Row { label: label.into(), cells });
        Ok(())
    }

    pub fn cell(&self, row: usize, col: usize) -> Option<f64> {
        self.rows[row].cells[col].value
    }

    /// Aligned plain-text rendering.
    pub fn to_text(&self) -> String {
        let mut grid =
            vec![std::iter::once(self.row_header.clone()).chain(self.columns.iter().cloned()).collect::<Vec<_>>()];
        for r in &self.rows {
            let mut line = vec![r.label.clone()];
            line.extend(r.cells.iter().map(|c| c.value.map_or_else(|| "-".to_string(), |v| c.unit.format(v))));
            grid.push(line);
        }
        let widths: Vec<usize> =
            (0..grid[0].len()).map(|j| grid.iter().map(|l| l[j].chars().count()).max().unwrap_or(0)).collect();
        let mut out = format!("{}\n", self.caption);
        for (i, line) in grid.iter().enumerate() {
            let cols: Vec<String> = line
                .iter()
                .enumerate()
                .map(|(j, s)| {
                    let pad = widths[j] - s.chars().count();
                    if j == 0 {
                        format!("{s}{}", " ".repeat(pad))
                    } else {
                        format!("{}{s}", " ".repeat(pad))
                    }
                })
                .collect();
            out.push_str(cols.join("  ").trim_end());
            out.push('\n');
            if i == 0 {
                out.push_str(&"-".repeat(widths.iter().sum::<usize>() + 2 * (widths.len() - 1)));
                out.push('\n');
            }
        }
        out
    }
}

fn georef_payload(registry: &Registry, names: &[String; 3], b: f64) -> Result<Payload> {
    Ok(Payload::new(
        registry.sensor(&names[0])?.clone(),
        registry.sensor(&names[1])?.clone(),
        registry.sensor(&names[2])?.clone(),
    )?
    .with_levers(Levers::for_baseline(b)))
}

/// Per-sensor `τ_crit` for each platform; optionally a final row with the
/// full-payload value.
pub fn georef_tau_crit_table(
    registry: &Registry,
    platforms: &[String],
    sensors: &[String],
    payload: Option<&[String; 3]>,
) -> Result<ReportTable> {
    if platforms.is_empty() || (sensors.is_empty() && payload.is_none()) {
        return Err(AppError::Usage("need at least one platform and one sensor".into()));
    }
    let platforms = platforms.iter().map(|p| registry.platform(p)).collect::<Result<Vec<_>, _>>()?;
    let mut t = ReportTable::new(
        "Critical synchronization error (georeferencing)",
        "sensor",
        platforms.iter().map(|p| p.name.clone()).collect(),
    );
    for name in sensors {
        let s = registry.sensor(name)?;
        let cells =
            platforms.iter().map(|p| Cell { value: Some(per_sensor_tau_crit(s, p)), unit: Unit::Seconds }).collect();
        t.push(&s.name, cells)?;
    }
    if let Some(names) = payload {
        let mut cells = Vec::new();
        for p in &platforms {
            let budget = ErrorBudget::for_platform(p, &georef_payload(registry, names, p.b)?)?;
            cells.push(Cell { value: Some(budget.tau_crit()), unit: Unit::Seconds });
        }
        t.push(&format!("payload ({})", names.join(" + ")), cells)?;
    }
    Ok(t)
}

/// Per-sensor `τ_crit` on each surface vessel and on the AUV, plus the
/// full-payload value of every system.
pub fn survey_tau_crit_table(
    registry: &Registry,
    systems: &[&SurveySystem],
    sensors: &[String],
) -> Result<ReportTable> {
    if systems.is_empty() || sensors.is_empty() {
        return Err(AppError::Usage("need at least one survey system and one sensor".into()));
    }
    let mut columns: Vec<String> = systems.iter().map(|s| s.sv.name.clone()).collect();
    // One AUV column per distinct AUV.
    let mut auvs: Vec<&SurveySystem> = Vec::new();
    for s in systems {
        if !auvs.iter().any(|a| a.auv == s.auv && a.d_auv == s.d_auv) {
            auvs.push(s);
        }
    }
    let auv_label =
        |s: &SurveySystem| if auvs.len() == 1 { "AUV".to_string() } else { format!("AUV ({})", s.auv.name) };
    columns.extend(auvs.iter().map(|s| auv_label(s)));
    let mut t = ReportTable::new("Critical synchronization error (survey)", "sensor", columns);
    let ms = |v: Option<f64>| Cell { value: v, unit: Unit::Milliseconds };
    for name in sensors {
        let s = registry.sensor(name)?;
        let mut cells: Vec<Cell> =
            systems.iter().map(|sys| ms(Some(per_sensor_tau_crit_survey(s, SurveyRole::Sv, sys)))).collect();
        for sys in &auvs {
            let v = match s.kind {
                // The AUV carries no position sensor.
                SensorKind::Position { .. } => None,
                _ => Some(per_sensor_tau_crit_survey(s, SurveyRole::Auv, sys)),
            };
            cells.push(ms(v));
        }
        t.push(&s.name, cells)?;
    }
    let mut cells =
        systems.iter().map(|sys| Ok(ms(Some(ErrorBudget::for_survey(sys)?.tau_crit())))).collect::<Result<Vec<_>>>()?;
    cells.extend(auvs.iter().map(|_| ms(None)));
    t.push("full payload", cells)?;
    Ok(t)
}
