//! Bayesian VARX under a conjugate Normal-Wishart prior.
//!
//! Endogenous lags carry a Minnesota-style prior (own first lag centered at
//! 0.8, tightness λ1, lag decay λ3); deterministic and exogenous
//! coefficients get a diffuse prior via λ4. The posterior is closed-form;
//! impulse responses to the exogenous shock come from sampled coefficient
//! draws pushed through the dynamic-multiplier recursion.

pub mod irf;
pub mod sample;

use crate::dataio::{build_deterministics, MonthlyPanel};
use crate::error::{Error, Result};
use crate::linalg::{cholesky_ridge, symmetrize};
use nalgebra::{DMatrix, DVector};

pub const DEFAULT_LAGS: usize = 3;
pub const DEFAULT_HORIZON: usize = 36;
pub const DEFAULT_N_DRAWS: usize = 2000;

/// Minnesota-family prior hyperparameters.
#[derive(Debug, Clone)]
pub struct Hyperparams {
    /// Prior mean of each variable's first own lag.
    pub own_lag_mean: f64,
    /// Overall tightness λ1.
    pub lambda1: f64,
    /// Lag-decay exponent λ3.
    pub lambda3: f64,
    /// Deterministic/exogenous looseness multiplier λ4.
    pub lambda4: f64,
    /// Prior degrees of freedom are n plus this offset.
    pub prior_df_offset: f64,
}

impl Default for Hyperparams {
    fn default() -> Self {
        Hyperparams {
            own_lag_mean: 0.8,
            lambda1: 0.1,
            lambda3: 1.0,
            lambda4: 1e5,
            prior_df_offset: 2.0,
        }
    }
}

impl Hyperparams {
    pub fn validate(&self) -> Result<()> {
        if self.lambda1 <= 0.0 || self.lambda4 <= 0.0 || self.lambda3 < 0.0 {
            return Err(Error::InvalidSpec(format!(
                "hyperparameters out of range: lambda1={}, lambda3={}, lambda4={}",
                self.lambda1, self.lambda3, self.lambda4
            )));
        }
        Ok(())
    }
}

/// Shape of the VARX regression: which regressors each equation carries.
///
/// Regressor layout (defines coefficient-row order in B):
/// lag-1 block .. lag-p block, constant, trend, covid, then per exogenous
/// series its contemporaneous value followed by `exo_lags` lags.
#[derive(Debug, Clone)]
pub struct VarxSpec {
    pub n: usize,
    pub p: usize,
    pub constant: bool,
    pub trend: bool,
    pub covid: bool,
    pub n_exo: usize,
    /// Extra lags of each exogenous series (0 = contemporaneous only).
    pub exo_lags: usize,
    pub horizon: usize,
    pub hyper: Hyperparams,
}

impl VarxSpec {
    pub fn new(n: usize) -> Self {
        VarxSpec {
            n,
            p: DEFAULT_LAGS,
            constant: true,
            trend: true,
            covid: true,
            n_exo: 1,
            exo_lags: 0,
            horizon: DEFAULT_HORIZON,
            hyper: Hyperparams::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 || self.p == 0 {
            return Err(Error::InvalidSpec(format!(
                "need n >= 1 and p >= 1, got n={}, p={}",
                self.n, self.p
            )));
        }
        self.hyper.validate()
    }

    pub fn n_det(&self) -> usize {
        self.constant as usize + self.trend as usize + self.covid as usize
    }

    /// Columns per exogenous series.
    pub fn exo_width(&self) -> usize {
        1 + self.exo_lags
    }

    /// Total regressor count k.
    pub fn k(&self) -> usize {
        self.n * self.p + self.n_det() + self.n_exo * self.exo_width()
    }

    /// Column of the contemporaneous impact of exogenous series `e`.
    pub fn exo_col(&self, e: usize) -> usize {
        self.n * self.p + self.n_det() + e * self.exo_width()
    }

    /// Most lags consumed by any regressor; data rows start there.
    pub fn t_min(&self) -> usize {
        self.p.max(self.exo_lags)
    }
}

/// Normal-Wishart prior in moment form. The coefficient-covariance inverse
/// is stored directly so a fully diffuse prior (Ω0⁻¹ = 0) is exact.
#[derive(Debug, Clone)]
pub struct NwPrior {
    /// k×n prior coefficient mean.
    pub b0: DMatrix<f64>,
    /// Diagonal of Ω0⁻¹.
    pub omega_inv_diag: DVector<f64>,
    /// n×n prior scale (diagonal of squared residual scales).
    pub s0: DMatrix<f64>,
    pub alpha0: f64,
}

/// Residual standard deviation of a univariate AR(p)-with-constant fit per
/// column, the Minnesota scaling input. A constant column yields 0.
pub fn ar_residual_scales(panel: &MonthlyPanel, p: usize) -> Result<Vec<f64>> {
    let t = panel.len();
    let t_eff = t.saturating_sub(p);
    // p+1 coefficients per fit and at least one residual degree of freedom.
    if t_eff < p + 2 {
        return Err(Error::InsufficientObservations {
            needed: 2 * p + 2,
            got: t,
        });
    }
    let mut scales = Vec::with_capacity(panel.n_vars());
    for j in 0..panel.n_vars() {
        let col = panel.column_values(j);
        if col.iter().all(|&v| v == col[0]) {
            // A constant column fits itself exactly; report the degenerate
            // scale directly instead of round-tripping a singular solve.
            scales.push(0.0);
            continue;
        }
        let mut x = DMatrix::zeros(t_eff, p + 1);
        let mut y = DVector::zeros(t_eff);
        for row in 0..t_eff {
            let tt = row + p;
            y[row] = col[tt];
            for l in 0..p {
                x[(row, l)] = col[tt - 1 - l];
            }
            x[(row, p)] = 1.0;
        }
        let gram = x.transpose() * &x;
        let (chol, _) = cholesky_ridge(&gram, "ar scale fit")?;
        let beta = chol.solve(&(x.transpose() * &y));
        let resid = &y - &x * beta;
        let dof = (t_eff - (p + 1)) as f64;
        scales.push((resid.norm_squared() / dof).sqrt());
    }
    Ok(scales)
}

/// Builds (B0, Ω0, S0, α0) from the regression shape and per-variable scales.
pub fn build_prior(spec: &VarxSpec, scales: &[f64]) -> Result<NwPrior> {
    spec.validate()?;
    if scales.len() != spec.n {
        return Err(Error::InvalidSpec(format!(
            "{} scales for {} variables",
            scales.len(),
            spec.n
        )));
    }
    if let Some(j) = scales.iter().position(|&s| s <= 0.0 || !s.is_finite()) {
        return Err(Error::NonPositiveScale {
            variable: format!("column {j} (scale {})", scales[j]),
        });
    }
    let (n, k) = (spec.n, spec.k());
    let mut b0 = DMatrix::zeros(k, n);
    for j in 0..n {
        // Own first lag sits in the lag-1 block's diagonal.
        b0[(j, j)] = spec.hyper.own_lag_mean;
    }
    let lam = &spec.hyper;
    let mut omega_inv_diag = DVector::zeros(k);
    for l in 1..=spec.p {
        let decay = (l as f64).powf(lam.lambda3);
        for j in 0..n {
            let sd = lam.lambda1 / (decay * scales[j]);
            omega_inv_diag[(l - 1) * n + j] = 1.0 / (sd * sd);
        }
    }
    let loose = lam.lambda1 * lam.lambda4;
    for c in (n * spec.p)..k {
        omega_inv_diag[c] = 1.0 / (loose * loose);
    }
    let s0 = DMatrix::from_diagonal(&DVector::from_iterator(
        n,
        scales.iter().map(|s| s * s),
    ));
    Ok(NwPrior {
        b0,
        omega_inv_diag,
        s0,
        alpha0: n as f64 + lam.prior_df_offset,
    })
}

/// Stacks the VARX regression: row t covers months t_min..T−1 of the panel,
/// columns in the layout documented on [`VarxSpec`].
pub fn build_design(
    panel: &MonthlyPanel,
    exo: &[&[f64]],
    spec: &VarxSpec,
) -> Result<(DMatrix<f64>, DMatrix<f64>)> {
    spec.validate()?;
    if panel.n_vars() != spec.n {
        return Err(Error::InvalidSpec(format!(
            "panel has {} variables, spec expects {}",
            panel.n_vars(),
            spec.n
        )));
    }
    if exo.len() != spec.n_exo {
        return Err(Error::InvalidSpec(format!(
            "{} exogenous series supplied, spec expects {}",
            exo.len(),
            spec.n_exo
        )));
    }
    let t = panel.len();
    for (e, series) in exo.iter().enumerate() {
        if series.len() != t {
            return Err(Error::InvalidSpec(format!(
                "exogenous series {e} has length {}, panel has {t}",
                series.len()
            )));
        }
    }
    let t_min = spec.t_min();
    if t <= t_min {
        return Err(Error::InsufficientObservations {
            needed: t_min + 1,
            got: t,
        });
    }
    let t_eff = t - t_min;
    let dets = build_deterministics(panel.start(), t);
    let vals = panel.values();
    let mut y = DMatrix::zeros(t_eff, spec.n);
    let mut x = DMatrix::zeros(t_eff, spec.k());
    for row in 0..t_eff {
        let tt = row + t_min;
        for j in 0..spec.n {
            y[(row, j)] = vals[(tt, j)];
        }
        for l in 1..=spec.p {
            for j in 0..spec.n {
                x[(row, (l - 1) * spec.n + j)] = vals[(tt - l, j)];
            }
        }
        let mut c = spec.n * spec.p;
        if spec.constant {
            x[(row, c)] = 1.0;
            c += 1;
        }
        if spec.trend {
            x[(row, c)] = dets.trend[tt];
            c += 1;
        }
        if spec.covid {
            x[(row, c)] = dets.covid[tt];
            c += 1;
        }
        for series in exo {
            for l in 0..=spec.exo_lags {
                x[(row, c)] = series[tt - l];
                c += 1;
            }
        }
    }
    Ok((y, x))
}

/// Closed-form posterior for the conjugate Normal-Wishart model.
#[derive(Debug, Clone)]
pub struct VarxPosterior {
    /// k×n posterior coefficient mean.
    pub b_hat: DMatrix<f64>,
    /// k×k posterior column covariance Ω̂.
    pub omega_hat: DMatrix<f64>,
    /// k×k factor F with F·Fᵀ = Ω̂, used by the sampler.
    pub omega_factor: DMatrix<f64>,
    /// n×n posterior scale.
    pub s_hat: DMatrix<f64>,
    pub alpha_hat: f64,
    pub n: usize,
    /// Whether the precision solve needed the diagonal ridge.
    pub ridged: bool,
}

/// Ω̂ = (Ω0⁻¹ + XᵀX)⁻¹, B̂ = Ω̂(Ω0⁻¹B0 + XᵀY),
/// Ŝ = S0 + YᵀY + B0ᵀΩ0⁻¹B0 − B̂ᵀΩ̂⁻¹B̂, α̂ = α0 + T.
pub fn posterior_moments(
    prior: &NwPrior,
    y: &DMatrix<f64>,
    x: &DMatrix<f64>,
) -> Result<VarxPosterior> {
    let k = prior.b0.nrows();
    let n = prior.b0.ncols();
    if x.ncols() != k || y.ncols() != n || x.nrows() != y.nrows() {
        return Err(Error::InvalidSpec(format!(
            "design {}x{} / outcomes {}x{} inconsistent with prior {}x{}",
            x.nrows(),
            x.ncols(),
            y.nrows(),
            y.ncols(),
            k,
            n
        )));
    }
    let mut precision = x.transpose() * x;
    for i in 0..k {
        precision[(i, i)] += prior.omega_inv_diag[i];
    }
    symmetrize(&mut precision);
    let (chol, ridged) = cholesky_ridge(&precision, "posterior precision")?;
    // Ω0⁻¹·B0 with a diagonal Ω0⁻¹ is a row rescaling.
    let mut rhs = x.transpose() * y;
    for i in 0..k {
        for j in 0..n {
            rhs[(i, j)] += prior.omega_inv_diag[i] * prior.b0[(i, j)];
        }
    }
    let b_hat = chol.solve(&rhs);

    // B̂ᵀ·Ω̂⁻¹·B̂ = B̂ᵀ·rhs because Ω̂⁻¹·B̂ = rhs by construction; using it
    // avoids squaring the condition number.
    let mut s_hat = prior.s0.clone() + y.transpose() * y - b_hat.transpose() * &rhs;
    for i in 0..k {
        let w = prior.omega_inv_diag[i];
        if w != 0.0 {
            for a in 0..n {
                for b in 0..n {
                    s_hat[(a, b)] += w * prior.b0[(i, a)] * prior.b0[(i, b)];
                }
            }
        }
    }
    symmetrize(&mut s_hat);

    let omega_hat = chol.inverse();
    let l = chol.l();
    let eye = DMatrix::identity(k, k);
    let l_inv = l
        .solve_lower_triangular(&eye)
        .ok_or_else(|| Error::SingularSystem {
            context: "posterior precision factor".into(),
        })?;
    Ok(VarxPosterior {
        b_hat,
        omega_hat,
        omega_factor: l_inv.transpose(),
        s_hat,
        alpha_hat: prior.alpha0 + y.nrows() as f64,
        n,
        ridged,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataio::ColumnSpec;
    use crate::month::Month;
    use crate::rng::stream_rng;
    use approx::assert_relative_eq;
    use rand::Rng;
    use rand_distr::StandardNormal;

    fn panel_from(values: DMatrix<f64>) -> MonthlyPanel {
        let cols = (0..values.ncols())
            .map(|j| ColumnSpec::level(format!("v{j}")))
            .collect();
        MonthlyPanel::new(Month::new(1999, 1).unwrap(), cols, values).unwrap()
    }

    fn white_noise_panel(t: usize, n: usize, seed: u64) -> MonthlyPanel {
        let mut rng = stream_rng(seed, 0);
        panel_from(DMatrix::from_fn(t, n, |_, _| rng.sample(StandardNormal)))
    }

    #[test]
    fn layout_counts_add_up() {
        let spec = VarxSpec::new(4);
        assert_eq!(spec.k(), 4 * 3 + 3 + 1);
        assert_eq!(spec.exo_col(0), 15);
        let mut wide = spec.clone();
        wide.n_exo = 2;
        wide.exo_lags = 2;
        assert_eq!(wide.exo_width(), 3);
        assert_eq!(wide.k(), 12 + 3 + 6);
        assert_eq!(wide.exo_col(1), 12 + 3 + 3);
        assert_eq!(wide.t_min(), 3);
    }

    #[test]
    fn ar_scale_recovers_innovation_sd() {
        // AR(1) with coefficient 0.9 and innovation sd 2.
        let mut rng = stream_rng(5, 0);
        let t = 5000;
        let mut col = vec![0.0f64; t];
        for i in 1..t {
            let eps: f64 = rng.sample(StandardNormal);
            col[i] = 0.9 * col[i - 1] + 2.0 * eps;
        }
        let panel = panel_from(DMatrix::from_fn(t, 1, |i, _| col[i]));
        let scales = ar_residual_scales(&panel, 1).unwrap();
        assert_relative_eq!(scales[0], 2.0, max_relative = 0.05);

        let wn = white_noise_panel(5000, 1, 6);
        let scales = ar_residual_scales(&wn, 3).unwrap();
        assert_relative_eq!(scales[0], 1.0, max_relative = 0.05);
    }

    #[test]
    fn constant_column_yields_zero_scale() {
        let panel = panel_from(DMatrix::from_element(50, 1, 3.25));
        let scales = ar_residual_scales(&panel, 2).unwrap();
        assert_eq!(scales[0], 0.0);
        // ... which the prior builder refuses.
        assert!(matches!(
            build_prior(&VarxSpec::new(1), &scales),
            Err(Error::NonPositiveScale { .. })
        ));
    }

    #[test]
    fn too_short_sample_is_rejected() {
        let panel = white_noise_panel(7, 1, 1);
        assert!(matches!(
            ar_residual_scales(&panel, 3),
            Err(Error::InsufficientObservations { .. })
        ));
    }

    #[test]
    fn prior_matches_hand_formulas() {
        let mut spec = VarxSpec::new(2);
        spec.n_exo = 1;
        let prior = build_prior(&spec, &[1.0, 1.0]).unwrap();

        // Own first lag mean 0.8, cross first lag 0.
        assert_eq!(prior.b0[(0, 0)], 0.8);
        assert_eq!(prior.b0[(1, 1)], 0.8);
        assert_eq!(prior.b0[(0, 1)], 0.0);
        assert_eq!(prior.b0[(2, 0)], 0.0); // lag-2 block all zero

        // Unit scales, λ1=0.1, λ3=1: lag-2 sd = 0.05 → precision 400.
        let lag2 = prior.omega_inv_diag[2];
        assert_relative_eq!(lag2, 1.0 / (0.05 * 0.05), epsilon = 1e-9);
        // Deterministic/exogenous sd = λ1·λ4 = 1e4.
        let det = prior.omega_inv_diag[2 * 3];
        assert_relative_eq!(det, 1e-8, epsilon = 1e-20);

        assert_eq!(prior.alpha0, 4.0);
        assert_eq!(prior.s0, DMatrix::identity(2, 2));
    }

    #[test]
    fn scales_rescale_lag_precisions() {
        let spec = VarxSpec::new(2);
        let prior = build_prior(&spec, &[2.0, 0.5]).unwrap();
        // sd for lag-1 of variable 0 = λ1/σ0 = 0.05 → precision 400.
        assert_relative_eq!(prior.omega_inv_diag[0], 400.0, epsilon = 1e-9);
        assert_relative_eq!(prior.omega_inv_diag[1], 25.0, epsilon = 1e-9);
        assert_eq!(prior.s0[(0, 0)], 4.0);
        assert_eq!(prior.s0[(1, 1)], 0.25);
    }

    /// Independent least-squares oracle via SVD, a different factorization
    /// route from the Cholesky used in the implementation.
    fn ols_svd(x: &DMatrix<f64>, y: &DMatrix<f64>) -> DMatrix<f64> {
        x.clone().svd(true, true).solve(y, 1e-12).unwrap()
    }

    #[test]
    fn fully_diffuse_prior_reproduces_ols() {
        let panel = white_noise_panel(200, 2, 9);
        let mut spec = VarxSpec::new(2);
        spec.p = 2;
        spec.covid = false;
        spec.n_exo = 0;
        let (y, x) = build_design(&panel, &[], &spec).unwrap();
        let mut prior = build_prior(&spec, &[1.0, 1.0]).unwrap();
        prior.omega_inv_diag.fill(0.0);
        let post = posterior_moments(&prior, &y, &x).unwrap();

        let ols = ols_svd(&x, &y);
        assert_relative_eq!(post.b_hat, ols, max_relative = 1e-6);

        // With Ω0⁻¹ = 0, Ŝ − S0 must equal the OLS residual scatter.
        let resid = &y - &x * &ols;
        let scatter = resid.transpose() * resid;
        let diff = &post.s_hat - &prior.s0;
        assert_relative_eq!(diff, scatter, max_relative = 1e-6);
        assert_eq!(post.alpha_hat, prior.alpha0 + y.nrows() as f64);
    }

    #[test]
    fn vanishing_tightness_recovers_the_prior_mean() {
        let panel = white_noise_panel(120, 2, 10);
        let mut spec = VarxSpec::new(2);
        spec.hyper.lambda1 = 1e-12;
        let shock: Vec<f64> = {
            let mut rng = stream_rng(11, 0);
            (0..120).map(|_| rng.sample(StandardNormal)).collect()
        };
        let (y, x) = build_design(&panel, &[&shock], &spec).unwrap();
        let prior = build_prior(&spec, &[1.0, 1.0]).unwrap();
        let post = posterior_moments(&prior, &y, &x).unwrap();
        let max_dev = (&post.b_hat - &prior.b0).amax();
        assert!(max_dev < 1e-6, "max deviation from prior mean {max_dev}");
    }

    #[test]
    fn empty_sample_returns_the_prior() {
        let spec = VarxSpec::new(2);
        let prior = build_prior(&spec, &[1.3, 0.7]).unwrap();
        let y = DMatrix::zeros(0, 2);
        let x = DMatrix::zeros(0, spec.k());
        let post = posterior_moments(&prior, &y, &x).unwrap();
        assert_relative_eq!(post.b_hat, prior.b0, epsilon = 1e-12);
        assert_relative_eq!(post.s_hat, prior.s0, epsilon = 1e-12);
        assert_eq!(post.alpha_hat, prior.alpha0);
    }

    #[test]
    fn omega_factor_inverts_the_precision() {
        // Start inside the pandemic window so the covid column varies and
        // the precision matrix is decently conditioned.
        let mut rng = stream_rng(12, 0);
        let values = DMatrix::from_fn(80, 2, |_, _| rng.sample(StandardNormal));
        let cols = vec![ColumnSpec::level("a"), ColumnSpec::level("b")];
        let panel = MonthlyPanel::new(Month::new(2019, 1).unwrap(), cols, values).unwrap();
        let spec = VarxSpec::new(2);
        let shock: Vec<f64> = (0..80).map(|_| rng.sample(StandardNormal)).collect();
        let (y, x) = build_design(&panel, &[&shock], &spec).unwrap();
        let prior = build_prior(&spec, &[1.0, 1.0]).unwrap();
        let post = posterior_moments(&prior, &y, &x).unwrap();

        let mut precision = x.transpose() * &x;
        for i in 0..spec.k() {
            precision[(i, i)] += prior.omega_inv_diag[i];
        }
        let eye = DMatrix::identity(spec.k(), spec.k());
        assert!((&post.omega_hat * &precision - &eye).amax() < 1e-8);
        let rebuilt = &post.omega_factor * post.omega_factor.transpose();
        assert!((rebuilt * &precision - &eye).amax() < 1e-8);
    }

    #[test]
    fn collinear_exogenous_column_still_factorizes() {
        // An exogenous column proportional to the intercept makes X'X rank
        // deficient; the prior precision (tiny but positive on every
        // coefficient) must still yield a usable posterior.
        let mut rng = stream_rng(13, 0);
        let values = DMatrix::from_fn(80, 2, |_, _| rng.sample(StandardNormal));
        let cols = vec![ColumnSpec::level("a"), ColumnSpec::level("b")];
        let panel = MonthlyPanel::new(Month::new(2019, 1).unwrap(), cols, values).unwrap();
        let spec = VarxSpec::new(2);
        let shock = vec![0.5; 80];
        let (y, x) = build_design(&panel, &[&shock], &spec).unwrap();
        let prior = build_prior(&spec, &[1.0, 1.0]).unwrap();
        let post = posterior_moments(&prior, &y, &x).unwrap();
        assert!(post.b_hat.iter().all(|v| v.is_finite()));
        assert!(post.omega_hat.iter().all(|v| v.is_finite()));
        assert!(post.s_hat.iter().all(|v| v.is_finite()));
    }

    #[test]
    fn design_rows_align_lags_and_exo() {
        // 4 months, 1 variable, p=1: values 1,2,3,4; shock 10,20,30,40.
        let panel = panel_from(DMatrix::from_column_slice(4, 1, &[1.0, 2.0, 3.0, 4.0]));
        let mut spec = VarxSpec::new(1);
        spec.p = 1;
        spec.trend = false;
        spec.covid = false;
        let shock = vec![10.0, 20.0, 30.0, 40.0];
        let (y, x) = build_design(&panel, &[&shock], &spec).unwrap();
        assert_eq!(y.as_slice(), &[2.0, 3.0, 4.0]);
        // Columns: [lag1, constant, shock]
        assert_eq!(x.column(0).iter().copied().collect::<Vec<_>>(), vec![1.0, 2.0, 3.0]);
        assert_eq!(x.column(1).iter().copied().collect::<Vec<_>>(), vec![1.0, 1.0, 1.0]);
        assert_eq!(x.column(2).iter().copied().collect::<Vec<_>>(), vec![20.0, 30.0, 40.0]);
    }
}
