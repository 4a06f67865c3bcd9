//! Scaling sweeps over block count and checkerboard/linear comparisons.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::egress::{
    analytic_expected, expected_egress, mortality_mean, mortality_ratio, AnalyticMode,
    MortalityParams,
};
use crate::error::{domain, invalid, Result};
use crate::format::sig6;
use crate::layout::{build_checkerboard, build_linear, Layout};
use crate::propagation::{
    estimate_critical_gamma, receptive_neighbors, CriticalGammaConfig, FireParams, GammaSearch,
};
use crate::rng::derive_seed;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepFamily {
    Checkerboard,
    Linear,
}

impl SweepFamily {
    pub fn as_str(self) -> &'static str {
        match self {
            SweepFamily::Checkerboard => "checkerboard",
            SweepFamily::Linear => "linear",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    Egress,
    Mortality,
    Neighbors,
    GammaC,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub family: SweepFamily,
    pub n_values: Vec<usize>,
    pub metrics: Vec<Metric>,
    /// Required for `Neighbors` (radius) and `GammaC`.
    pub fire: Option<FireParams>,
    /// Required for `GammaC`.
    pub gamma: Option<CriticalGammaConfig>,
    /// Required for `Mortality`.
    pub mortality: Option<MortalityParams>,
    /// Required for `GammaC`.
    pub master_seed: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub family: SweepFamily,
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "L")]
    pub side: Option<usize>,
    pub expected_egress: Option<f64>,
    pub analytic_expected: Option<f64>,
    pub mortality_mean: Option<f64>,
    pub gamma_c: Option<f64>,
    pub neighbors_r: Option<usize>,
    /// Why a metric is missing, when it is.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl SweepRow {
    fn empty(family: SweepFamily, n: usize) -> Self {
        Self {
            family,
            n,
            side: None,
            expected_egress: None,
            analytic_expected: None,
            mortality_mean: None,
            gamma_c: None,
            neighbors_r: None,
            note: None,
        }
    }
}

pub const CSV_HEADER: &str =
    "family,N,L,expected_egress,analytic_expected,mortality_mean,gamma_c,neighbors_r";

/// CSV text with header; missing values are written `NA`.
pub fn rows_to_csv(rows: &[SweepRow]) -> String {
    fn opt<T>(v: Option<T>, f: impl Fn(T) -> String) -> String {
        v.map(f).unwrap_or_else(|| "NA".to_string())
    }
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in rows {
        let fields = [
            r.family.as_str().to_string(),
            r.n.to_string(),
            opt(r.side, |x| x.to_string()),
            opt(r.expected_egress, sig6),
            opt(r.analytic_expected, sig6),
            opt(r.mortality_mean, sig6),
            opt(r.gamma_c, sig6),
            opt(r.neighbors_r, |x| x.to_string()),
        ];
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    out
}

/// Side of the checkerboard holding exactly `n` blocks, if there is one.
pub fn checkerboard_side(n: usize) -> Option<usize> {
    let k = (n as f64).sqrt().round() as usize;
    (k >= 1 && k * k == n).then_some(2 * k)
}

/// The perfect square nearest `n` (at least 1).
pub fn nearest_admissible_blocks(n: usize) -> usize {
    let k = ((n as f64).sqrt().floor() as usize).max(1);
    let (lo, hi) = (k * k, (k + 1) * (k + 1));
    if n.saturating_sub(lo) < hi - n {
        lo
    } else {
        hi
    }
}

fn validate_spec(spec: &SweepSpec) -> Result<()> {
    if spec.n_values.is_empty() {
        return Err(domain("sweep needs at least one block count"));
    }
    if spec.n_values.windows(2).any(|w| w[0] >= w[1]) || spec.n_values[0] < 1 {
        return Err(invalid(
            "block counts must be positive and strictly ascending",
        ));
    }
    for m in &spec.metrics {
        let missing = match m {
            Metric::Egress => None,
            Metric::Mortality => spec.mortality.is_none().then_some("mortality parameters"),
            Metric::Neighbors => spec.fire.is_none().then_some("fire parameters"),
            Metric::GammaC => {
                if spec.fire.is_none() || spec.gamma.is_none() {
                    Some("fire and critical-gamma parameters")
                } else if spec.master_seed.is_none() {
                    Some("a master seed")
                } else {
                    None
                }
            }
        };
        if let Some(what) = missing {
            return Err(invalid(format!("metric {m:?} requires {what}")));
        }
    }
    Ok(())
}

fn sweep_row(spec: &SweepSpec, n: usize) -> Result<SweepRow> {
    let mut row = SweepRow::empty(spec.family, n);
    let layout = match spec.family {
        SweepFamily::Linear => build_linear(n)?,
        SweepFamily::Checkerboard => match checkerboard_side(n) {
            Some(side) => {
                row.side = Some(side);
                build_checkerboard(side)?
            }
            None => {
                row.note = Some(format!(
                    "N={n} has no even-side checkerboard embedding; nearest admissible N is {}",
                    nearest_admissible_blocks(n)
                ));
                return Ok(row);
            }
        },
    };
    let wants = |m: Metric| spec.metrics.contains(&m);

    if wants(Metric::Egress) {
        row.expected_egress = Some(expected_egress(&layout)?.mean);
        if let Some(side) = row.side {
            row.analytic_expected = Some(analytic_expected(side, AnalyticMode::Exact)?);
        }
    }
    if wants(Metric::Mortality) {
        row.mortality_mean = Some(mortality_mean(&layout, spec.mortality.as_ref().unwrap())?);
    }
    let ignition = layout
        .central_block()
        .expect("generated layouts have blocks");
    if wants(Metric::Neighbors) {
        let r = spec.fire.as_ref().unwrap().r;
        row.neighbors_r = Some(receptive_neighbors(&layout, ignition, r)?);
    }
    if wants(Metric::GammaC) {
        let seed = derive_seed(spec.master_seed.unwrap(), n as u64);
        match estimate_critical_gamma(
            &layout,
            spec.fire.as_ref().unwrap(),
            ignition,
            spec.gamma.as_ref().unwrap(),
            seed,
        )? {
            GammaSearch::Converged(est) => row.gamma_c = Some(est.gamma_c),
            GammaSearch::NoCrossing {
                p_at_zero, p_at_one, ..
            } => {
                row.note = Some(format!(
                    "no critical gamma: spread probability {p_at_zero} at gamma=0, {p_at_one} at gamma=1"
                ))
            }
        }
    }
    Ok(row)
}

/// One row per requested block count, in input order.
pub fn run_sweep(spec: &SweepSpec) -> Result<Vec<SweepRow>> {
    validate_spec(spec)?;
    spec.n_values
        .par_iter()
        .map(|&n| sweep_row(spec, n))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CompareParams {
    pub mortality: MortalityParams,
    /// With `gamma` and a seed, critical gamma is estimated for both layouts.
    pub fire: Option<FireParams>,
    pub gamma: Option<CriticalGammaConfig>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    pub checkerboard_n: usize,
    pub checkerboard_side: usize,
    pub linear_n: usize,
    pub egress_checkerboard: f64,
    pub egress_linear: f64,
    pub distance_ratio: f64,
    /// `sqrt(N) / 3` at the checkerboard block count.
    pub analytic_ratio: f64,
    pub mortality_ratio: f64,
    pub gamma_c_checkerboard: Option<f64>,
    pub gamma_c_linear: Option<f64>,
}

impl Comparison {
    pub fn gamma_ratio(&self) -> Option<f64> {
        Some(self.gamma_c_linear? / self.gamma_c_checkerboard?)
    }
}

fn gamma_c_of(
    layout: &Layout,
    fire: &FireParams,
    cfg: &CriticalGammaConfig,
    seed: u64,
) -> Result<Option<f64>> {
    let ignition = layout
        .central_block()
        .expect("generated layouts have blocks");
    Ok(estimate_critical_gamma(layout, fire, ignition, cfg, seed)?
        .estimate()
        .map(|e| e.gamma_c))
}

/// Checkerboard at the perfect square nearest `n_checkerboard` against a
/// linear strip of `n_linear` blocks.
pub fn compare_layouts(
    n_checkerboard: usize,
    n_linear: usize,
    params: &CompareParams,
    master_seed: Option<u64>,
) -> Result<Comparison> {
    let checkerboard_n = nearest_admissible_blocks(n_checkerboard);
    let side = checkerboard_side(checkerboard_n).expect("perfect square");
    let cb = build_checkerboard(side)?;
    let line = build_linear(n_linear)?;
    let egress_checkerboard = expected_egress(&cb)?.mean;
    let egress_linear = expected_egress(&line)?.mean;

    let (gamma_c_checkerboard, gamma_c_linear) = match (&params.fire, &params.gamma, master_seed) {
        (Some(fire), Some(cfg), Some(seed)) => (
            gamma_c_of(&cb, fire, cfg, derive_seed(seed, 0))?,
            gamma_c_of(&line, fire, cfg, derive_seed(seed, 1))?,
        ),
        (Some(_), Some(_), None) => {
            return Err(invalid("critical-gamma comparison requires a master seed"))
        }
        _ => (None, None),
    };

    Ok(Comparison {
        checkerboard_n,
        checkerboard_side: side,
        linear_n: n_linear,
        egress_checkerboard,
        egress_linear,
        distance_ratio: egress_checkerboard / egress_linear,
        analytic_ratio: (checkerboard_n as f64).sqrt() / 3.0,
        mortality_ratio: mortality_ratio(&cb, &line, &params.mortality)?,
        gamma_c_checkerboard,
        gamma_c_linear,
    })
}
