//! Dynamic multipliers and posterior impulse-response bands.

use super::sample::sample_posterior;
use super::{ar_residual_scales, build_design, build_prior, posterior_moments, VarxSpec};
use crate::band::{BandMeta, IrfBand};
use crate::dataio::MonthlyPanel;
use crate::error::{Error, Result};
use crate::linalg::quantile;
use nalgebra::{DMatrix, RowDVector};
use rayon::prelude::*;

/// Response of the system to a one-period unit exogenous impulse:
/// Ψ_0 = b, Ψ_h = Σ_{l=1..min(h,p)} Ψ_{h−l}·A_l. Returns n×(H+1) with
/// column h the horizon-h response.
pub fn dynamic_multipliers(
    a_lags: &[DMatrix<f64>],
    b: &RowDVector<f64>,
    horizon: usize,
) -> DMatrix<f64> {
    dynamic_multipliers_with_lags(a_lags, std::slice::from_ref(b), horizon)
}

/// Generalization where the impulse also enters with its own lags:
/// `b_rows[l]` is the impact row of the shock lagged l periods, so
/// Ψ_h gains b_rows[h] while h is within the exogenous lag window.
pub fn dynamic_multipliers_with_lags(
    a_lags: &[DMatrix<f64>],
    b_rows: &[RowDVector<f64>],
    horizon: usize,
) -> DMatrix<f64> {
    let n = b_rows[0].ncols();
    let p = a_lags.len();
    let mut psi: Vec<RowDVector<f64>> = Vec::with_capacity(horizon + 1);
    for h in 0..=horizon {
        let mut row = RowDVector::zeros(n);
        if h < b_rows.len() {
            row += &b_rows[h];
        }
        for l in 1..=p.min(h) {
            row += &psi[h - l] * &a_lags[l - 1];
        }
        psi.push(row);
    }
    DMatrix::from_fn(n, horizon + 1, |i, h| psi[h][i])
}

/// Splits a k×n coefficient matrix into its p lag blocks; block l−1 holds
/// A_l with entry (j, i) the coefficient of variable j's lag l in equation i.
pub fn lag_matrices(b: &DMatrix<f64>, spec: &VarxSpec) -> Vec<DMatrix<f64>> {
    (0..spec.p)
        .map(|l| b.rows(l * spec.n, spec.n).into_owned())
        .collect()
}

/// Impact rows (contemporaneous first, then each exogenous lag) of
/// exogenous series `e`.
pub fn exo_impact_rows(b: &DMatrix<f64>, spec: &VarxSpec, e: usize) -> Vec<RowDVector<f64>> {
    let base = spec.exo_col(e);
    (0..spec.exo_width())
        .map(|l| b.row(base + l).into_owned())
        .collect()
}

/// Divides a series by its sample standard deviation over the design rows
/// (t_min onward), returning the rescaled series and that scale.
pub(crate) fn standardize_over_design(
    series: &[f64],
    t_min: usize,
    name: &str,
) -> Result<(Vec<f64>, f64)> {
    let window = &series[t_min..];
    let t = window.len();
    if t < 2 {
        return Err(Error::InsufficientObservations { needed: t_min + 2, got: series.len() });
    }
    let mean: f64 = window.iter().sum::<f64>() / t as f64;
    let var: f64 = window.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (t - 1) as f64;
    let sd = var.sqrt();
    if sd <= 0.0 || !sd.is_finite() {
        return Err(Error::NonPositiveScale {
            variable: name.to_string(),
        });
    }
    Ok((series.iter().map(|v| v / sd).collect(), sd))
}

/// Full Bayesian IRF pass: standardize the shock to unit sample variance,
/// estimate the VARX posterior, push every coefficient draw through the
/// multiplier recursion, and report pointwise 5/50/95 percentile paths.
///
/// `exo[0]` is the shock the IRF responds to; any further exogenous series
/// act as controls (each standardized the same way).
pub fn estimate_irf(
    panel: &MonthlyPanel,
    exo: &[&[f64]],
    spec: &VarxSpec,
    variant: &str,
    n_draws: usize,
    seed: u64,
) -> Result<IrfBand> {
    let (paths, shock_scale) = irf_paths(panel, exo, spec, n_draws, seed)?;
    band_from_paths(panel.names(), &paths, BandMeta {
        engine: "bvar".into(),
        variant: variant.to_string(),
        shock_scale,
    })
}

/// The draw-level core of [`estimate_irf`]: one multiplier path per posterior
/// draw, plus the shock's standardization scale. Callers that pool draws
/// across several shock definitions summarize these paths themselves.
pub fn irf_paths(
    panel: &MonthlyPanel,
    exo: &[&[f64]],
    spec: &VarxSpec,
    n_draws: usize,
    seed: u64,
) -> Result<(Vec<DMatrix<f64>>, f64)> {
    spec.validate()?;
    if exo.is_empty() || spec.n_exo != exo.len() {
        return Err(Error::InvalidSpec(format!(
            "irf needs the shock as exogenous series 0 ({} supplied, spec says {})",
            exo.len(),
            spec.n_exo
        )));
    }
    let t_min = spec.t_min();
    let mut standardized: Vec<Vec<f64>> = Vec::with_capacity(exo.len());
    let mut shock_scale = 0.0;
    for (e, series) in exo.iter().enumerate() {
        let (scaled, sd) = standardize_over_design(series, t_min, &format!("exogenous series {e}"))?;
        if e == 0 {
            shock_scale = sd;
        }
        standardized.push(scaled);
    }
    let exo_refs: Vec<&[f64]> = standardized.iter().map(|v| v.as_slice()).collect();
    let (y, x) = build_design(panel, &exo_refs, spec)?;
    let scales = ar_residual_scales(panel, spec.p)?;
    let prior = build_prior(spec, &scales)?;
    let moments = posterior_moments(&prior, &y, &x)?;
    let draws = sample_posterior(&moments, n_draws, seed)?;

    let paths: Vec<DMatrix<f64>> = draws
        .par_iter()
        .map(|d| {
            let a = lag_matrices(&d.b, spec);
            let b_rows = exo_impact_rows(&d.b, spec, 0);
            dynamic_multipliers_with_lags(&a, &b_rows, spec.horizon)
        })
        .collect();
    Ok((paths, shock_scale))
}

/// Pointwise 5/50/95 percentiles across simulated response paths.
pub fn band_from_paths(
    variables: Vec<String>,
    paths: &[DMatrix<f64>],
    meta: BandMeta,
) -> Result<IrfBand> {
    if paths.is_empty() {
        return Err(Error::InvalidSpec("no response paths to summarize".into()));
    }
    let n = paths[0].nrows();
    let width = paths[0].ncols();
    let mut lo = DMatrix::zeros(n, width);
    let mut median = DMatrix::zeros(n, width);
    let mut hi = DMatrix::zeros(n, width);
    let mut cell = Vec::with_capacity(paths.len());
    for i in 0..n {
        for h in 0..width {
            cell.clear();
            cell.extend(paths.iter().map(|p| p[(i, h)]));
            lo[(i, h)] = quantile(&cell, 0.05);
            median[(i, h)] = quantile(&cell, 0.50);
            hi[(i, h)] = quantile(&cell, 0.95);
        }
    }
    IrfBand::new(variables, lo, median, hi, meta)
}
