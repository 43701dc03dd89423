//! Polynomial fits of count series and the H-junction growth predictions.
//!
//! Counts behave like polynomials in `T` plus oscillating remainders of
//! unknown size, so coefficients are estimated by least squares over a grid
//! of horizons and compared with the closed-form predictions at loose
//! relative tolerances.

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::Serialize;

use crate::chrono::Basis;
use crate::error::{Error, Result};
use crate::formula::{h_total, HStart, HTimes};
use crate::graph::{make_h_junction, permute_edge_times, transposition, MetricTree, TimeSpec};
use crate::simulator::simulate_with_basis;

/// Condition number beyond which a fit is refused.
const MAX_CONDITION: f64 = 1e12;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentSeries {
    pub description: String,
    pub grid: Vec<f64>,
    pub values: Vec<i64>,
}

impl ExperimentSeries {
    pub fn new(description: impl Into<String>, grid: Vec<f64>, values: Vec<i64>) -> Result<Self> {
        if grid.len() != values.len() {
            return Err(Error::LengthMismatch(grid.len(), values.len()));
        }
        if grid.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::PreconditionViolated("grid must be strictly increasing".into()));
        }
        Ok(ExperimentSeries { description: description.into(), grid, values })
    }

    /// Evaluates `f` at every grid point in parallel; the result does not
    /// depend on evaluation order.
    pub fn from_fn<F>(description: impl Into<String>, grid: Vec<f64>, f: F) -> Result<Self>
    where
        F: Fn(f64) -> Result<i64> + Sync,
    {
        let values = grid.par_iter().map(|&t| f(t)).collect::<Result<Vec<_>>>()?;
        Self::new(description, grid, values)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("T,value\n");
        for (t, v) in self.grid.iter().zip(&self.values) {
            out.push_str(&format!("{t},{v}\n"));
        }
        out
    }
}

/// `start:step:stop` inclusive, e.g. `100:50:600`.
pub fn grid(start: f64, step: f64, stop: f64) -> Result<Vec<f64>> {
    if !(step > 0.0) || !(stop >= start) || !start.is_finite() || !stop.is_finite() {
        return Err(Error::PreconditionViolated(format!("bad grid {start}:{step}:{stop}")));
    }
    let n = ((stop - start) / step + 1e-9).floor() as usize;
    Ok((0..=n).map(|i| start + i as f64 * step).collect())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AsymptoticFit {
    pub degree: usize,
    /// Ascending powers: `coefficients[m]` multiplies `T^m`.
    pub coefficients: Vec<f64>,
    pub grid: Vec<f64>,
    pub residual_rms: f64,
}

impl AsymptoticFit {
    pub fn coefficient(&self, power: usize) -> f64 {
        self.coefficients.get(power).copied().unwrap_or(0.0)
    }

    pub fn leading(&self) -> f64 {
        self.coefficients[self.degree]
    }
}

/// Least-squares polynomial of the given degree through the series.
pub fn fit_polynomial(series: &ExperimentSeries, degree: usize) -> Result<AsymptoticFit> {
    let n = series.grid.len();
    if n < degree + 3 {
        return Err(Error::InsufficientSamples { needed: degree + 3, got: n });
    }
    // scale T into [-1, 1]-ish to keep the Vandermonde matrix tame
    let scale = series.grid.iter().fold(0.0f64, |m, t| m.max(t.abs())).max(f64::MIN_POSITIVE);
    let x = DMatrix::from_fn(n, degree + 1, |i, j| (series.grid[i] / scale).powi(j as i32));
    let y = DVector::from_iterator(n, series.values.iter().map(|&v| v as f64));

    let svd = x.clone().svd(true, true);
    let (max_sv, min_sv) =
        svd.singular_values.iter().fold((0.0f64, f64::INFINITY), |(hi, lo), &s| (hi.max(s), lo.min(s)));
    let condition = max_sv / min_sv;
    if !condition.is_finite() || condition > MAX_CONDITION {
        return Err(Error::IllConditioned(condition));
    }
    let scaled = svd.solve(&y, 0.0).map_err(|e| Error::PreconditionViolated(e.to_string()))?;
    let residual = &y - &x * &scaled;
    let residual_rms = (residual.norm_squared() / n as f64).sqrt();
    let coefficients = scaled.iter().enumerate().map(|(j, a)| a / scale.powi(j as i32)).collect();
    Ok(AsymptoticFit { degree, coefficients, grid: series.grid.clone(), residual_rms })
}

/// Relative change of the leading coefficient when the lowest third of the
/// grid is dropped.
pub fn fit_stability(series: &ExperimentSeries, degree: usize) -> Result<f64> {
    let full = fit_polynomial(series, degree)?.leading();
    let skip = series.grid.len() / 3;
    let upper = ExperimentSeries::new(
        series.description.clone(),
        series.grid[skip..].to_vec(),
        series.values[skip..].to_vec(),
    )?;
    let upper = fit_polynomial(&upper, degree)?.leading();
    Ok(((upper - full) / full).abs())
}

/// `|value / T^power - target|` at each grid point.
pub fn ratio_distances(series: &ExperimentSeries, power: i32, target: f64) -> Vec<f64> {
    series.grid.iter().zip(&series.values).map(|(&t, &v)| (v as f64 / t.powi(power) - target).abs()).collect()
}

/// True when the best of the last three distances beats the first one:
/// a downward trend that tolerates oscillation.
pub fn trends_toward(distances: &[f64]) -> bool {
    match distances {
        [first, .., _, _, _] => {
            let tail = &distances[distances.len() - 3..];
            tail.iter().copied().fold(f64::INFINITY, f64::min) < *first
        }
        _ => false,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LeadingKind {
    BirthsA,
    BirthsB,
    Total,
}

/// The predicted `T^4` coefficient of the H-junction counts from a start at
/// `A`: one over `4! 2^4` times the product of four times, summed over the
/// 4-edge subsets that appear in each count.
pub fn predicted_leading(t: &HTimes, kind: LeadingKind) -> f64 {
    let inv = |skip: usize| -> f64 { 1.0 / (1..=5).filter(|&i| i != skip).map(|i| t.t(i)).product::<f64>() };
    let sum: f64 = match kind {
        // 4-edge counts in each closed form, named by the edge they omit
        LeadingKind::BirthsA => inv(1) + inv(2),
        LeadingKind::BirthsB => inv(3) + inv(4) + inv(5),
        LeadingKind::Total => (1..=5).map(inv).sum(),
    };
    sum / 384.0
}

/// Predicted `T^3` coefficient of `N(A) - N'(A)` after exchanging e1 and e5.
pub fn predicted_diff_coeff(t: &HTimes) -> f64 {
    -1.0 / (96.0 * t.t(2) * t.t(4)) * (1.0 / t.t(5) - 1.0 / t.t(1))
}

/// Predicted `T^2` coefficient of the four-way symmetric difference.
pub fn predicted_symdiff_coeff(t: &HTimes) -> f64 {
    let (t1, t2, t4, t5) = (t.t(1), t.t(2), t.t(4), t.t(5));
    -0.25 * (1.0 / (t1 * t2) + 1.0 / (t4 * t5) - 1.0 / (t2 * t4) - 1.0 / (t1 * t5))
}

/// Which computation produces point counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Engine {
    Formula,
    Simulator,
}

/// Total points on an H-junction from one inner vertex.
#[derive(Debug, Clone)]
struct HCounter {
    times: HTimes,
    epsilon: f64,
    tree: Option<(MetricTree, Basis)>,
}

impl HCounter {
    fn new(times: HTimes, engine: Engine, epsilon: f64) -> Result<Self> {
        let tree = match engine {
            Engine::Formula => None,
            Engine::Simulator => {
                let specs = times.0.map(TimeSpec::decimal);
                let [a, b, c, d, e] = specs;
                let tree = make_h_junction([a?, b?, c?, d?, e?])?;
                let basis = Basis::from_tree(&tree).with_epsilon(epsilon)?;
                Some((tree, basis))
            }
        };
        Ok(HCounter { times, epsilon, tree })
    }

    fn total(&self, start: HStart, horizon: f64) -> Result<i64> {
        match &self.tree {
            None => h_total(&self.times, start, horizon, self.epsilon),
            Some((tree, basis)) => {
                let v = tree.vertex(match start {
                    HStart::A => "A",
                    HStart::B => "B",
                })?;
                let r = simulate_with_basis(tree, v, horizon, basis)?;
                i64::try_from(r.total_points).map_err(|_| Error::Overflow("point count"))
            }
        }
    }
}

/// Total points from `A` on each horizon.
pub fn total_series(t: &HTimes, grid: Vec<f64>, engine: Engine, epsilon: f64) -> Result<ExperimentSeries> {
    let counter = HCounter::new(*t, engine, epsilon)?;
    ExperimentSeries::from_fn("total points from A", grid, |horizon| counter.total(HStart::A, horizon))
}

/// `N(A) - N'(A)` where the primed junction has e1 and e5 exchanged; `A` is
/// the vertex meeting e1, e2, e3 in both.
pub fn permutation_diff_series(t: &HTimes, grid: Vec<f64>, engine: Engine, epsilon: f64) -> Result<ExperimentSeries> {
    let original = HCounter::new(*t, engine, epsilon)?;
    let swapped = HCounter::new(t.swap15(), engine, epsilon)?;
    ExperimentSeries::from_fn("N(A) - N'(A), e1 <-> e5", grid, |horizon| {
        Ok(original.total(HStart::A, horizon)? - swapped.total(HStart::A, horizon)?)
    })
}

/// `d(A,X) + d(A,Y) + d(B,X) + d(B,Y)` with `d(V,W) = N(V) - N'(W)`; `X` and
/// `Y` sit where `A` and `B` do in the primed junction.
pub fn symmetric_diff_series(t: &HTimes, grid: Vec<f64>, engine: Engine, epsilon: f64) -> Result<ExperimentSeries> {
    let original = HCounter::new(*t, engine, epsilon)?;
    let swapped = HCounter::new(t.swap15(), engine, epsilon)?;
    ExperimentSeries::from_fn("d(A,X) + d(A,Y) + d(B,X) + d(B,Y)", grid, |horizon| {
        let (a, b) = (original.total(HStart::A, horizon)?, original.total(HStart::B, horizon)?);
        let (x, y) = (swapped.total(HStart::A, horizon)?, swapped.total(HStart::B, horizon)?);
        Ok((a - x) + (a - y) + (b - x) + (b - y))
    })
}

/// The three H-junction growth claims that can be checked numerically.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    /// `T^4` coefficient of the total count.
    Leading,
    /// `T^3` coefficient of the e1/e5 permutation difference.
    Razn,
    /// `T^2` coefficient of the symmetric difference, with a vanishing `T^3`.
    Symraz,
}

impl ExperimentKind {
    pub fn default_tolerance(self) -> f64 {
        match self {
            ExperimentKind::Leading => 0.05,
            ExperimentKind::Razn | ExperimentKind::Symraz => 0.15,
        }
    }

    pub fn fit_degree(self) -> usize {
        match self {
            ExperimentKind::Leading => 4,
            ExperimentKind::Razn | ExperimentKind::Symraz => 3,
        }
    }

    /// Power of `T` whose coefficient is compared with the prediction.
    pub fn checked_power(self) -> usize {
        match self {
            ExperimentKind::Leading => 4,
            ExperimentKind::Razn => 3,
            ExperimentKind::Symraz => 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentOutcome {
    pub kind: ExperimentKind,
    pub series: ExperimentSeries,
    pub fit: AsymptoticFit,
    pub predicted: f64,
    pub fitted: f64,
    pub relative_error: f64,
    pub tolerance: f64,
    /// For `Symraz`: the fitted `T^3` coefficient must stay below 10% of the
    /// single-difference `T^3` scale.
    pub cubic_bound: Option<f64>,
    pub pass: bool,
}

pub fn run_experiment(
    kind: ExperimentKind,
    t: &HTimes,
    grid: Vec<f64>,
    engine: Engine,
    tolerance: f64,
    epsilon: f64,
) -> Result<ExperimentOutcome> {
    let (series, predicted) = match kind {
        ExperimentKind::Leading => (total_series(t, grid, engine, epsilon)?, predicted_leading(t, LeadingKind::Total)),
        ExperimentKind::Razn => (permutation_diff_series(t, grid, engine, epsilon)?, predicted_diff_coeff(t)),
        ExperimentKind::Symraz => (symmetric_diff_series(t, grid, engine, epsilon)?, predicted_symdiff_coeff(t)),
    };
    let fit = fit_polynomial(&series, kind.fit_degree())?;
    let fitted = fit.coefficient(kind.checked_power());
    let relative_error = if predicted == 0.0 { fitted.abs() } else { ((fitted - predicted) / predicted).abs() };
    let cubic_bound = (kind == ExperimentKind::Symraz).then(|| 0.1 * predicted_diff_coeff(t).abs());
    let cubic_ok = cubic_bound.map_or(true, |b| fit.coefficient(3).abs() < b);
    let pass = relative_error <= tolerance && cubic_ok && (predicted == 0.0 || fitted.signum() == predicted.signum());
    Ok(ExperimentOutcome { kind, series, fit, predicted, fitted, relative_error, tolerance, cubic_bound, pass })
}

/// The experiment's default horizons for each engine.
pub fn default_grid(engine: Engine) -> Vec<f64> {
    match engine {
        Engine::Formula => grid(100.0, 50.0, 600.0).expect("static grid"),
        Engine::Simulator => grid(10.0, 10.0, 80.0).expect("static grid"),
    }
}

pub fn reference_times() -> HTimes {
    HTimes([1.0, 2f64.sqrt(), 3f64.sqrt(), 5f64.sqrt(), 7f64.sqrt()])
}

/// Permuting to the swapped junction as a tree, for callers that want the
/// graph itself rather than its counts.
pub fn swapped_h_junction(tree: &MetricTree) -> Result<MetricTree> {
    permute_edge_times(tree, &transposition(tree.edge_count(), 0, 4))
}
