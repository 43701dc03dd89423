//! JSON shapes emitted by the binary. Field names follow
//! `schema/edgewalk-output.v1.json`; counts are integers and real-valued
//! coefficients are decimal strings with 12 significant digits.

use serde::Serialize;

pub const SCHEMA: &str = "edgewalk-output/v1";

/// 12 significant digits in scientific notation.
pub fn real(x: f64) -> String {
    format!("{x:.11e}")
}

#[derive(Serialize)]
pub struct Envelope<T: Serialize> {
    pub schema: &'static str,
    pub command: &'static str,
    #[serde(flatten)]
    pub body: T,
}

#[derive(Serialize)]
pub struct VertexBirths {
    pub vertex: String,
    pub births: u64,
    pub returns: usize,
}

#[derive(Serialize)]
pub struct SimulateReport {
    pub start: String,
    pub horizon: f64,
    pub initial_departures: u64,
    pub total_points: u64,
    pub event_count: u64,
    pub vertices: Vec<VertexBirths>,
}

#[derive(Serialize)]
pub struct TermRow {
    pub edges: String,
    pub coefficient: i64,
}

#[derive(Serialize)]
pub struct FormulaCount {
    pub horizon: f64,
    pub births: i64,
}

#[derive(Serialize)]
pub struct FormulaReport {
    pub root: String,
    pub terms: Vec<TermRow>,
    pub leading_coefficient: String,
    pub counts: Vec<FormulaCount>,
}

#[derive(Serialize)]
pub struct GameLabel {
    pub vertex: String,
    pub z0: u8,
}

#[derive(Serialize)]
pub struct GameReport {
    pub root: String,
    pub labels: Vec<GameLabel>,
    pub outcome: &'static str,
}

#[derive(Serialize)]
pub struct CountReport {
    pub coefficients: Vec<String>,
    pub bound: String,
    pub strict: bool,
    pub solutions: u64,
}

#[derive(Serialize)]
pub struct SeriesPoint {
    #[serde(rename = "T")]
    pub horizon: f64,
    pub value: i64,
}

#[derive(Serialize)]
pub struct FitReport {
    pub degree: usize,
    pub coefficients: Vec<String>,
    pub residual_rms: String,
    pub grid: Vec<f64>,
}

#[derive(Serialize)]
pub struct ExperimentReport {
    pub kind: &'static str,
    pub engine: &'static str,
    pub times: Vec<String>,
    pub series: Vec<SeriesPoint>,
    pub fit: FitReport,
    pub checked_power: usize,
    pub predicted: String,
    pub fitted: String,
    pub relative_error: String,
    pub tolerance: String,
    pub cubic_bound: Option<String>,
    pub verdict: &'static str,
}
