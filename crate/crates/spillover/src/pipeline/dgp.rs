//! Synthetic data with a fully known ground truth. One call produces a
//! monthly panel, the surprise events that drove it, and the exact objects
//! every estimator is trying to recover: the impact map, the rotation angle,
//! and the dynamic response paths of both shocks.
//!
//! The generating process mirrors the estimation layout. Each month carries
//! a fixed number of surprise events whose structural shocks are iid
//! standard normal; the observed (ir, eq) surprise is the impact map applied
//! to them. The panel then follows a VARX: lagged own dynamics plus the
//! monthly shock sums times their impact rows plus Gaussian noise.

use chrono::NaiveDate;
use nalgebra::{DMatrix, DVector, Matrix2, RowDVector, Vector2};
use rand::Rng;
use rand_distr::StandardNormal;

use crate::bvar::irf::dynamic_multipliers;
use crate::dataio::{ColumnSpec, EventSurprises, MonthlyPanel, SurpriseEvent, Transform, VariableRole};
use crate::error::{Error, Result};
use crate::linalg::spectral_radius;
use crate::month::Month;
use crate::pipeline::config::DgpConfig;
use crate::rng::{derive_seed, domain, stream_rng};
use crate::shockid::{admissible_angles, cholesky2, median_rotation, rotation, RotationGrid};

/// Margin below 1 the companion spectral radius must stay under.
const STABILITY_MARGIN: f64 = 1e-9;

/// Complete description of the generating process.
#[derive(Debug, Clone)]
pub struct DgpParams {
    /// Transition matrices A_1..A_p in the row convention
    /// y_t = Σ_l y_{t-l}·A_l + shocks + noise; each is n×n.
    pub lag_matrices: Vec<DMatrix<f64>>,
    /// Impact row of a unit policy shock.
    pub impact_mp: RowDVector<f64>,
    /// Impact row of a unit information shock.
    pub impact_info: RowDVector<f64>,
    /// Covariance of the monthly Gaussian noise (n×n, SPD).
    pub noise_cov: DMatrix<f64>,
    /// Covariance of the observed event surprises; its admissible-arc
    /// median pins down the true impact map.
    pub surprise_cov: Matrix2<f64>,
    /// Sample length in months.
    pub t: usize,
    pub events_per_month: usize,
    pub start: Month,
    /// Horizon of the recorded truth response paths.
    pub horizon: usize,
}

impl DgpParams {
    /// Diagonal VAR(1) with common coefficient `rho`, isotropic noise, and
    /// mildly alternating impact rows.
    pub fn diagonal(n: usize, rho: f64, noise_sd: f64, t: usize) -> Self {
        DgpParams {
            lag_matrices: vec![DMatrix::identity(n, n) * rho],
            impact_mp: RowDVector::from_fn(n, |_, i| if i % 2 == 0 { -0.4 } else { 0.2 }),
            impact_info: RowDVector::from_fn(n, |_, i| if i % 2 == 0 { 0.25 } else { -0.1 }),
            noise_cov: DMatrix::identity(n, n) * (noise_sd * noise_sd),
            surprise_cov: Matrix2::new(1.0, 0.3, 0.3, 1.0),
            t,
            events_per_month: 1,
            start: Month::new(2000, 1).expect("valid month"),
            horizon: 12,
        }
    }

    /// Expands the flat-file settings into full matrices.
    pub fn from_config(config: &DgpConfig, horizon: usize) -> Self {
        let n = config.n;
        DgpParams {
            lag_matrices: vec![DMatrix::identity(n, n) * config.rho],
            impact_mp: RowDVector::from_row_slice(&config.impact_mp),
            impact_info: RowDVector::from_row_slice(&config.impact_info),
            noise_cov: DMatrix::identity(n, n) * (config.noise_sd * config.noise_sd),
            surprise_cov: Matrix2::new(
                config.surprise_cov[0],
                config.surprise_cov[1],
                config.surprise_cov[2],
                config.surprise_cov[3],
            ),
            t: config.t,
            events_per_month: config.events_per_month,
            start: config.start,
            horizon,
        }
    }

    pub fn n(&self) -> usize {
        self.impact_mp.ncols()
    }

    fn validate(&self) -> Result<()> {
        let n = self.n();
        if n == 0 {
            return Err(Error::Config("DGP needs at least one variable".into()));
        }
        if self.lag_matrices.is_empty() {
            return Err(Error::Config("DGP needs at least one lag matrix".into()));
        }
        for (l, a) in self.lag_matrices.iter().enumerate() {
            if a.nrows() != n || a.ncols() != n {
                return Err(Error::Config(format!(
                    "lag matrix {} is {}x{}, expected {n}x{n}",
                    l + 1,
                    a.nrows(),
                    a.ncols()
                )));
            }
        }
        if self.impact_info.ncols() != n {
            return Err(Error::Config(format!(
                "impact rows disagree on n: {} vs {n}",
                self.impact_info.ncols()
            )));
        }
        if self.noise_cov.nrows() != n || self.noise_cov.ncols() != n {
            return Err(Error::Config(format!(
                "noise covariance is {}x{}, expected {n}x{n}",
                self.noise_cov.nrows(),
                self.noise_cov.ncols()
            )));
        }
        if self.t == 0 {
            return Err(Error::Config("DGP sample length must be positive".into()));
        }
        if !(1..=27).contains(&self.events_per_month) {
            return Err(Error::Config(format!(
                "events_per_month must lie in 1..=27, got {}",
                self.events_per_month
            )));
        }
        let rho = companion_radius(&self.lag_matrices);
        if rho >= 1.0 - STABILITY_MARGIN {
            return Err(Error::UnstableDgp { rho });
        }
        Ok(())
    }
}

/// Everything the estimators are trying to recover.
#[derive(Debug, Clone)]
pub struct DgpTruth {
    /// True impact map of the surprises: column 0 is the policy shock.
    pub a_true: Matrix2<f64>,
    /// Rotation angle that produced `a_true` from the surprise covariance.
    pub theta_true: f64,
    /// n×(H+1) response of the panel to a unit policy shock.
    pub mp_responses: DMatrix<f64>,
    /// n×(H+1) response to a unit information shock.
    pub info_responses: DMatrix<f64>,
    /// Monthly sums of the true structural policy shocks.
    pub mp_monthly: Vec<f64>,
    /// Monthly sums of the true structural information shocks.
    pub info_monthly: Vec<f64>,
}

impl DgpTruth {
    /// True response paths as a CSV table, one row per variable and horizon.
    pub fn responses_csv(&self, names: &[String]) -> String {
        let mut out = String::from("variable,horizon,mp_response,info_response\n");
        for (i, name) in names.iter().enumerate() {
            for h in 0..self.mp_responses.ncols() {
                out.push_str(&format!(
                    "{name},{h},{},{}\n",
                    self.mp_responses[(i, h)],
                    self.info_responses[(i, h)]
                ));
            }
        }
        out
    }
}

/// Draws one complete synthetic dataset. `seed` is the master seed; the
/// generator runs on its own derived stream, so the same master seed that
/// later drives estimation never reuses these draws.
///
/// Within a month the draw order is fixed: the structural shock pair of
/// each event, then the panel noise vector. Events sit on evenly spread
/// days so dates stay strictly increasing.
pub fn simulate_dgp(
    params: &DgpParams,
    seed: u64,
) -> Result<(MonthlyPanel, EventSurprises, DgpTruth)> {
    params.validate()?;
    let n = params.n();
    let chol = cholesky2(&params.surprise_cov)?;
    let admissible = admissible_angles(&chol, &RotationGrid::default())?;
    let theta_true = median_rotation(&admissible)?;
    let a_true = chol * rotation(theta_true);
    let noise_chol =
        DMatrix::clone_owned(&params.noise_cov)
            .cholesky()
            .ok_or(Error::NotSpd {
                reason: "DGP noise covariance".into(),
            })?
            .l();

    let mut rng = stream_rng(derive_seed(seed, domain::DGP), 0);
    let mut events = Vec::with_capacity(params.t * params.events_per_month);
    let mut mp_monthly = vec![0.0; params.t];
    let mut info_monthly = vec![0.0; params.t];
    let mut values = DMatrix::zeros(params.t, n);

    for m in 0..params.t {
        let month = params.start.plus(m as i64);
        for e in 0..params.events_per_month {
            let u_mp: f64 = rng.sample(StandardNormal);
            let u_info: f64 = rng.sample(StandardNormal);
            let surprise = a_true * Vector2::new(u_mp, u_info);
            let day = ((e + 1) * 28 / (params.events_per_month + 1)) as u32;
            let date = NaiveDate::from_ymd_opt(month.year(), month.month(), day)
                .expect("day in 1..=27 exists in every month");
            events.push(SurpriseEvent {
                date,
                ir: surprise[0],
                eq: surprise[1],
            });
            mp_monthly[m] += u_mp;
            info_monthly[m] += u_info;
        }

        let mut row = RowDVector::zeros(n);
        for (l, a) in params.lag_matrices.iter().enumerate() {
            if m > l {
                row += values.row(m - l - 1) * a;
            }
        }
        row += &params.impact_mp * mp_monthly[m];
        row += &params.impact_info * info_monthly[m];
        let z = DVector::from_fn(n, |_, _| rng.sample(StandardNormal));
        row += (&noise_chol * z).transpose();
        values.set_row(m, &row);
    }

    let columns: Vec<ColumnSpec> = (0..n)
        .map(|i| ColumnSpec::new(format!("y{i}"), Transform::Level, VariableRole::Domestic))
        .collect();
    let panel = MonthlyPanel::new(params.start, columns, values)?;
    let events = EventSurprises::new(events)?;
    let truth = DgpTruth {
        a_true,
        theta_true,
        mp_responses: dynamic_multipliers(&params.lag_matrices, &params.impact_mp, params.horizon),
        info_responses: dynamic_multipliers(&params.lag_matrices, &params.impact_info, params.horizon),
        mp_monthly,
        info_monthly,
    };
    Ok((panel, events, truth))
}

/// Spectral radius of the VAR companion matrix.
fn companion_radius(lag_matrices: &[DMatrix<f64>]) -> f64 {
    let n = lag_matrices[0].nrows();
    let p = lag_matrices.len();
    let mut companion = DMatrix::zeros(n * p, n * p);
    for (l, a) in lag_matrices.iter().enumerate() {
        companion.view_mut((0, l * n), (n, n)).copy_from(&a.transpose());
    }
    for l in 1..p {
        companion
            .view_mut((l * n, (l - 1) * n), (n, n))
            .copy_from(&DMatrix::identity(n, n));
    }
    spectral_radius(&companion)
}
