//! Local-projection impulse responses: one direct regression per horizon of
//! the future outcome on today's shock, with lagged shocks, lagged outcome,
//! domestic and foreign controls, trend and pandemic dummy on the right-hand
//! side, and HAC (Newey-West) or heteroskedasticity-robust standard errors.
//!
//! The horizon-`h` response is the coefficient on the contemporaneous shock;
//! bands are `beta ± z * se` at the configured confidence level.

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;

use crate::band::{BandMeta, IrfBand};
use crate::bvar::irf::standardize_over_design;
use crate::dataio::{build_deterministics, MonthlyPanel, VariableRole};
use crate::error::{Error, Result};
use crate::linalg::{cholesky_ridge, normal_quantile, symmetrize};
use crate::month::Month;

pub const DEFAULT_LP_LAGS: usize = 3;
pub const DEFAULT_LP_HORIZON: usize = 36;
pub const DEFAULT_CONFIDENCE: f64 = 0.90;
/// Largest lag order the optional information-criterion search will try.
pub const MAX_SEARCHED_LAGS: usize = 6;

/// How the per-horizon regression variance is estimated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Inference {
    /// Newey-West sandwich with Bartlett weights; the bandwidth at horizon
    /// `h` is `h + bandwidth_offset`, so overlapping multi-step forecast
    /// errors are covered by construction.
    NeweyWest { bandwidth_offset: usize },
    /// White's heteroskedasticity-robust sandwich (no autocorrelation terms).
    HeteroskedasticityRobust,
}

impl Default for Inference {
    fn default() -> Self {
        Inference::NeweyWest {
            bandwidth_offset: 0,
        }
    }
}

/// Specification of the local-projection regressions.
#[derive(Debug, Clone)]
pub struct LpSpec {
    /// Largest horizon H; regressions run for h = 0..=H.
    pub horizon: usize,
    /// Lags of the shock itself (J_i).
    pub shock_lags: usize,
    /// Lags of the dependent variable (J_y).
    pub outcome_lags: usize,
    /// Lags of each domestic control (J_x).
    pub domestic_lags: usize,
    /// Lags of each foreign control (J_x*).
    pub foreign_lags: usize,
    /// Domestic control columns, by panel column name.
    pub domestic_controls: Vec<String>,
    /// Foreign control columns, by panel column name.
    pub foreign_controls: Vec<String>,
    pub inference: Inference,
    /// Two-sided confidence level for the bands, in (0, 1).
    pub confidence: f64,
    pub trend: bool,
    pub covid: bool,
    /// Divide the shock by its sample standard deviation before regressing,
    /// so responses are per one-standard-deviation impulse.
    pub standardize: bool,
    /// When set, every horizon is fit on the sample feasible at h = H, so
    /// n_obs is constant across horizons. Off by default: each horizon then
    /// uses its maximal sample and n_obs_h + h is constant instead.
    pub common_sample: bool,
    /// When set, replace all four lag counts by a single order chosen by the
    /// Akaike information criterion over 1..=[`MAX_SEARCHED_LAGS`].
    pub aic_lags: bool,
}

impl Default for LpSpec {
    fn default() -> Self {
        LpSpec {
            horizon: DEFAULT_LP_HORIZON,
            shock_lags: DEFAULT_LP_LAGS,
            outcome_lags: DEFAULT_LP_LAGS,
            domestic_lags: DEFAULT_LP_LAGS,
            foreign_lags: DEFAULT_LP_LAGS,
            domestic_controls: Vec::new(),
            foreign_controls: Vec::new(),
            inference: Inference::default(),
            confidence: DEFAULT_CONFIDENCE,
            trend: true,
            covid: true,
            standardize: true,
            common_sample: false,
            aic_lags: false,
        }
    }
}

impl LpSpec {
    pub fn new() -> Self {
        Self::default()
    }

    /// Fills the control sets from the panel's column roles: domestic-side
    /// roles become domestic controls, foreign-role columns foreign controls.
    pub fn from_panel_roles(panel: &MonthlyPanel) -> Self {
        let mut spec = Self::default();
        for col in panel.columns() {
            match col.role {
                VariableRole::Domestic | VariableRole::PolicyRate | VariableRole::ExchangeRate => {
                    spec.domestic_controls.push(col.name.clone());
                }
                VariableRole::Foreign => spec.foreign_controls.push(col.name.clone()),
                VariableRole::Other => {}
            }
        }
        spec
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.confidence > 0.0 && self.confidence < 1.0) {
            return Err(Error::InvalidSpec(format!(
                "confidence level {} not in (0, 1)",
                self.confidence
            )));
        }
        Ok(())
    }

    /// Earliest usable row index: every lagged regressor must be in range.
    /// Control lags only bind when the corresponding control set is
    /// non-empty after excluding `outcome`.
    pub fn min_row(&self, outcome: &str) -> usize {
        let mut m = self.shock_lags.max(self.outcome_lags);
        if self.domestic_controls.iter().any(|c| c != outcome) {
            m = m.max(self.domestic_lags);
        }
        if self.foreign_controls.iter().any(|c| c != outcome) {
            m = m.max(self.foreign_lags);
        }
        m
    }

    /// A copy with every lag count (shock, outcome, both control blocks)
    /// set to `j`.
    pub fn with_all_lags(&self, j: usize) -> LpSpec {
        let mut s = self.clone();
        s.shock_lags = j;
        s.outcome_lags = j;
        s.domestic_lags = j;
        s.foreign_lags = j;
        s
    }
}

/// Per-outcome local-projection estimates across horizons.
#[derive(Debug, Clone)]
pub struct LpResult {
    pub outcome: String,
    /// Response coefficient per horizon (index h).
    pub beta: Vec<f64>,
    /// Standard error per horizon.
    pub se: Vec<f64>,
    /// Regression sample size per horizon.
    pub n_obs: Vec<usize>,
    /// Sample standard deviation the shock was divided by (1.0 when
    /// standardization is off).
    pub shock_scale: f64,
    /// Lag order picked by the information-criterion search, when enabled.
    pub selected_lags: Option<usize>,
}

/// Builds the horizon-`h` regression: `y[t] = outcome at t + h`, one row per
/// usable `t`. Row layout: shock at t, shock lags 1..=J_i, outcome lags
/// 1..=J_y, each domestic control's lags 1..=J_x, each foreign control's lags
/// 1..=J_x*, constant, then trend and pandemic dummy when enabled. The
/// outcome column is excluded from its own control set. The pandemic dummy
/// is omitted when the panel never touches the pandemic window (an all-zero
/// regressor has no identified coefficient and would only trigger the ridge).
pub fn build_lp_design(
    panel: &MonthlyPanel,
    shock: &[f64],
    outcome: &str,
    h: usize,
    spec: &LpSpec,
) -> Result<(DVector<f64>, DMatrix<f64>, Vec<Month>)> {
    build_design_rows(panel, shock, outcome, h, spec, spec.min_row(outcome))
}

fn build_design_rows(
    panel: &MonthlyPanel,
    shock: &[f64],
    outcome: &str,
    h: usize,
    spec: &LpSpec,
    t_min: usize,
) -> Result<(DVector<f64>, DMatrix<f64>, Vec<Month>)> {
    let t_total = panel.len();
    if shock.len() != t_total {
        return Err(Error::InvalidSpec(format!(
            "shock length {} != panel length {}",
            shock.len(),
            t_total
        )));
    }
    let y_col = panel.column_values(panel.column_index(outcome)?);
    let horizon_cut = if spec.common_sample { spec.horizon } else { h };
    let t_end = match t_total.checked_sub(1 + horizon_cut) {
        Some(e) if e >= t_min => e,
        _ => return Err(Error::EmptyDesign { t: t_total, h }),
    };

    let mut domestic = Vec::new();
    for name in spec.domestic_controls.iter().filter(|c| c.as_str() != outcome) {
        domestic.push(panel.column_values(panel.column_index(name)?));
    }
    let mut foreign = Vec::new();
    for name in spec.foreign_controls.iter().filter(|c| c.as_str() != outcome) {
        foreign.push(panel.column_values(panel.column_index(name)?));
    }

    let dets = build_deterministics(panel.start(), t_total);
    let covid_active = spec.covid && dets.covid.iter().any(|&v| v != 0.0);
    let k = 1
        + spec.shock_lags
        + spec.outcome_lags
        + domestic.len() * spec.domestic_lags
        + foreign.len() * spec.foreign_lags
        + 1
        + usize::from(spec.trend)
        + usize::from(covid_active);
    let rows = t_end - t_min + 1;
    let mut y = DVector::zeros(rows);
    let mut x = DMatrix::zeros(rows, k);
    let mut dates = Vec::with_capacity(rows);
    for (r, t) in (t_min..=t_end).enumerate() {
        y[r] = y_col[t + h];
        dates.push(panel.month_at(t));
        let mut c = 0;
        x[(r, c)] = shock[t];
        c += 1;
        for j in 1..=spec.shock_lags {
            x[(r, c)] = shock[t - j];
            c += 1;
        }
        for j in 1..=spec.outcome_lags {
            x[(r, c)] = y_col[t - j];
            c += 1;
        }
        for col in &domestic {
            for j in 1..=spec.domestic_lags {
                x[(r, c)] = col[t - j];
                c += 1;
            }
        }
        for col in &foreign {
            for j in 1..=spec.foreign_lags {
                x[(r, c)] = col[t - j];
                c += 1;
            }
        }
        x[(r, c)] = 1.0;
        c += 1;
        if spec.trend {
            x[(r, c)] = dets.trend[t];
            c += 1;
        }
        if covid_active {
            x[(r, c)] = dets.covid[t];
            c += 1;
        }
        debug_assert_eq!(c, k);
    }
    Ok((y, x, dates))
}

/// Least squares via the normal equations with the shared ridge fallback.
/// Returns coefficients and residuals.
pub fn ols(x: &DMatrix<f64>, y: &DVector<f64>) -> Result<(DVector<f64>, DVector<f64>)> {
    if x.nrows() < x.ncols() {
        return Err(Error::InsufficientObservations {
            needed: x.ncols(),
            got: x.nrows(),
        });
    }
    let mut gram = x.transpose() * x;
    symmetrize(&mut gram);
    let (chol, _ridged) = cholesky_ridge(&gram, "local-projection normal equations")?;
    let beta = chol.solve(&(x.transpose() * y));
    let resid = y - x * &beta;
    Ok((beta, resid))
}

/// HAC sandwich standard errors with Bartlett weights:
/// `V = (X'X)^-1 M (X'X)^-1`, `M = G0 + sum_l w_l (G_l + G_l')` with
/// `w_l = 1 - l/(L+1)` and `G_l = sum_t g_t g_{t-l}'` over scores
/// `g_t = x_t e_t`. Bandwidth 0 is exactly White's estimator. No small-sample
/// degrees-of-freedom correction is applied.
pub fn hac_se(x: &DMatrix<f64>, residuals: &DVector<f64>, bandwidth: usize) -> Result<DVector<f64>> {
    let t = x.nrows();
    let k = x.ncols();
    if residuals.len() != t {
        return Err(Error::InvalidSpec(format!(
            "residual length {} != design rows {t}",
            residuals.len()
        )));
    }
    // Score matrix: row t is x_t scaled by its residual.
    let mut scores = x.clone();
    for r in 0..t {
        scores.row_mut(r).scale_mut(residuals[r]);
    }
    let mut meat = scores.transpose() * &scores;
    for l in 1..=bandwidth.min(t.saturating_sub(1)) {
        let w = 1.0 - l as f64 / (bandwidth + 1) as f64;
        let lead = scores.rows(l, t - l);
        let lag = scores.rows(0, t - l);
        let gamma = lead.transpose() * lag;
        meat += w * (&gamma + gamma.transpose());
    }
    symmetrize(&mut meat);

    let mut gram = x.transpose() * x;
    symmetrize(&mut gram);
    let (chol, _ridged) = cholesky_ridge(&gram, "HAC sandwich bread")?;
    let half = chol.solve(&meat);
    let mut v = chol.solve(&half.transpose());
    symmetrize(&mut v);
    Ok(DVector::from_fn(k, |i, _| v[(i, i)].max(0.0).sqrt()))
}

/// Runs the full horizon loop for one outcome: standardize the shock, fit
/// each horizon's regression, and collect the contemporaneous-shock
/// coefficient with its HAC or robust standard error.
pub fn lp_irf(
    panel: &MonthlyPanel,
    shock: &[f64],
    outcome: &str,
    spec: &LpSpec,
) -> Result<LpResult> {
    spec.validate()?;
    let mut spec_eff = spec.clone();
    let selected_lags = if spec.aic_lags {
        let j = aic_lag_order(panel, shock, outcome, spec)?;
        spec_eff = spec.with_all_lags(j);
        Some(j)
    } else {
        None
    };
    let (shock_used, shock_scale) = if spec.standardize {
        standardize_over_design(shock, spec_eff.min_row(outcome), "shock")?
    } else {
        (shock.to_vec(), 1.0)
    };
    let per_horizon: Vec<(f64, f64, usize)> = (0..=spec_eff.horizon)
        .into_par_iter()
        .map(|h| {
            let (y, x, _) = build_lp_design(panel, &shock_used, outcome, h, &spec_eff)?;
            let (beta, resid) = ols(&x, &y)?;
            let bandwidth = match spec_eff.inference {
                Inference::NeweyWest { bandwidth_offset } => h + bandwidth_offset,
                Inference::HeteroskedasticityRobust => 0,
            };
            let se = hac_se(&x, &resid, bandwidth)?;
            Ok((beta[0], se[0], y.len()))
        })
        .collect::<Result<_>>()?;
    Ok(LpResult {
        outcome: outcome.to_string(),
        beta: per_horizon.iter().map(|r| r.0).collect(),
        se: per_horizon.iter().map(|r| r.1).collect(),
        n_obs: per_horizon.iter().map(|r| r.2).collect(),
        shock_scale,
        selected_lags,
    })
}

/// Critical value for a two-sided interval at the given confidence level.
/// The benchmark 90% level uses the conventional 1.645.
pub fn critical_value(confidence: f64) -> f64 {
    if (confidence - 0.90).abs() < 1e-12 {
        1.645
    } else {
        normal_quantile(0.5 + confidence / 2.0)
    }
}

/// Runs [`lp_irf`] for every panel column and assembles the band matrix
/// `beta ± z·se`, tagged `engine = "local_projection"`.
pub fn lp_band(
    panel: &MonthlyPanel,
    shock: &[f64],
    spec: &LpSpec,
    variant: &str,
) -> Result<IrfBand> {
    spec.validate()?;
    let z = critical_value(spec.confidence);
    let names = panel.names();
    let h1 = spec.horizon + 1;
    let mut lo = DMatrix::zeros(names.len(), h1);
    let mut median = DMatrix::zeros(names.len(), h1);
    let mut hi = DMatrix::zeros(names.len(), h1);
    let mut shock_scale = 1.0;
    for (i, name) in names.iter().enumerate() {
        let result = lp_irf(panel, shock, name, spec)?;
        shock_scale = result.shock_scale;
        for h in 0..h1 {
            lo[(i, h)] = result.beta[h] - z * result.se[h];
            median[(i, h)] = result.beta[h];
            hi[(i, h)] = result.beta[h] + z * result.se[h];
        }
    }
    IrfBand::new(
        names,
        lo,
        median,
        hi,
        BandMeta {
            engine: "local_projection".to_string(),
            variant: variant.to_string(),
            shock_scale,
        },
    )
}

/// Picks a single lag order for all four lag families by AIC on the h = 0
/// regression. Candidates are compared on the common sample feasible at the
/// largest candidate order, so the criterion sees identical observations.
fn aic_lag_order(
    panel: &MonthlyPanel,
    shock: &[f64],
    outcome: &str,
    spec: &LpSpec,
) -> Result<usize> {
    let mut best = (f64::INFINITY, 1);
    for j in 1..=MAX_SEARCHED_LAGS {
        let candidate = spec.with_all_lags(j);
        let (y, x, _) =
            build_design_rows(panel, shock, outcome, 0, &candidate, MAX_SEARCHED_LAGS)?;
        let (_, resid) = ols(&x, &y)?;
        let n = y.len() as f64;
        let ssr = resid.norm_squared();
        let aic = n * (ssr / n).max(f64::MIN_POSITIVE).ln() + 2.0 * x.ncols() as f64;
        if aic < best.0 {
            best = (aic, j);
        }
    }
    Ok(best.1)
}
