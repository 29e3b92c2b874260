//! End-to-end orchestration: load or simulate the data, identify the
//! shocks, run the configured estimators, and write every artifact into the
//! output directory.
//!
//! Determinism is the organizing principle. One master seed fans out into
//! independent streams for each random stage (posterior sampling, rotation
//! draws, synthetic data), estimation is bit-reproducible regardless of
//! thread count, and artifacts contain no timestamps — so rerunning a
//! config reproduces the output directory byte for byte.

pub mod artifacts;
pub mod config;
pub mod dgp;

pub use artifacts::{render_meta, sanitize, write_atomic, ArtifactWriter};
pub use config::{
    BvarSettings, DataFiles, DataSource, DgpConfig, Engine, Identification, LpSettings, RunConfig,
    ShockVariant, DEFAULT_OUT_DIR, DEFAULT_ROTATIONS,
};
pub use dgp::{simulate_dgp, DgpParams, DgpTruth};

use std::path::PathBuf;

use nalgebra::DMatrix;

use crate::band::{BandMeta, IrfBand};
use crate::bvar::irf::{band_from_paths, estimate_irf, irf_paths};
use crate::bvar::VarxSpec;
use crate::dataio::{
    aggregate_events_to_monthly, load_panel, load_surprises, EventSurprises, MonthlyPanel,
    COVID_END, COVID_START,
};
use crate::error::{Error, Result};
use crate::localproj::{lp_band, Inference, LpSpec};
use crate::month::Month;
use crate::rng::{derive_seed, domain};
use crate::shockid::{
    decompose, draw_admissible, identify_median, poor_mans_split, shock_report_csv, RotationGrid,
    ShockMethod, ShockSeries,
};

/// Pooled rotation bands never drop below this many posterior draws per
/// angle, however many angles share the total draw budget.
pub const MIN_DRAWS_PER_ROTATION: usize = 50;

/// What a pipeline invocation produced.
#[derive(Debug)]
pub struct RunOutput {
    pub out_dir: PathBuf,
    /// Every artifact file, in write order.
    pub files: Vec<PathBuf>,
    /// One band per engine (empty for identify-only and simulate runs).
    pub bands: Vec<IrfBand>,
    /// Event-level identified shocks, when identification ran.
    pub shocks: Option<ShockSeries>,
    /// Rotation angle behind the shocks, when the method has one.
    pub theta_star: Option<f64>,
    /// Ground truth, when the data came from the synthetic generator.
    pub truth: Option<DgpTruth>,
}

/// Data ready for identification and estimation: windowed panel, events
/// clamped to the panel's months, and (for synthetic data) the truth.
struct Prepared {
    panel: MonthlyPanel,
    events: EventSurprises,
    truth: Option<DgpTruth>,
}

fn prepare(config: &RunConfig) -> Result<Prepared> {
    let source = config
        .data
        .as_ref()
        .ok_or_else(|| Error::Config("no data source configured".into()))?;
    let (panel, events, truth) = match source {
        DataSource::Files(files) => {
            let panel = load_panel(&files.panel, &files.columns)?;
            let events = load_surprises(&files.surprises)?;
            (panel, events, None)
        }
        DataSource::Synthetic(dgp) => {
            let params = DgpParams::from_config(dgp, truth_horizon(config));
            let (panel, events, truth) = simulate_dgp(&params, config.master_seed())?;
            (panel, events, Some(truth))
        }
    };
    let panel = panel.window(config.window_start, config.window_end)?;
    let events = events.window(panel.start(), panel.end());
    Ok(Prepared { panel, events, truth })
}

/// Horizon the synthetic truth paths are recorded at: long enough for every
/// configured engine.
fn truth_horizon(config: &RunConfig) -> usize {
    config
        .engines
        .iter()
        .map(|e| match e {
            Engine::Bvar => config.bvar.horizon,
            Engine::LocalProjection => config.lp.horizon,
        })
        .max()
        .unwrap_or(config.bvar.horizon)
}

/// Runs the configured identification scheme on the windowed events.
/// Uniform-rotation configs identify at the median angle here; their
/// pooling across angles lives in [`rotation_uncertainty_bands`].
fn identify(config: &RunConfig, events: &EventSurprises) -> Result<ShockSeries> {
    match config.identification {
        Identification::MedianRotation | Identification::UniformRotations(_) => {
            let (_, shocks) = identify_median(events, &RotationGrid::default())?;
            Ok(shocks)
        }
        Identification::PoorMans => Ok(poor_mans_split(events)),
        Identification::FixedAngle(theta) => decompose(events, theta, ShockMethod::FixedRotation),
    }
}

/// The monthly regressor a variant feeds the estimators: identified shocks
/// summed by month, or (raw_hfi) the raw interest-rate surprises summed by
/// month. Standardization to one sample standard deviation happens inside
/// the engines, over each design's own rows.
fn monthly_shock(
    variant: ShockVariant,
    shocks: &ShockSeries,
    events: &EventSurprises,
    panel: &MonthlyPanel,
) -> Result<Vec<f64>> {
    let monthly = match variant {
        ShockVariant::PureMp | ShockVariant::Info => aggregate_events_to_monthly(
            &shocks.dates,
            &shocks.mp,
            &shocks.info,
            panel.start(),
            panel.end(),
        )?,
        ShockVariant::RawHfi => {
            let ir: Vec<f64> = events.events().iter().map(|e| e.ir).collect();
            let zeros = vec![0.0; ir.len()];
            aggregate_events_to_monthly(&events.dates(), &ir, &zeros, panel.start(), panel.end())?
        }
    };
    Ok(match variant {
        ShockVariant::Info => monthly.info,
        _ => monthly.mp,
    })
}

/// The pandemic dummy only enters designs whose sample overlaps its window.
fn covid_effective(config: &RunConfig, panel: &MonthlyPanel) -> bool {
    let lo = Month::new(COVID_START.0, COVID_START.1).expect("valid month");
    let hi = Month::new(COVID_END.0, COVID_END.1).expect("valid month");
    config.covid_dummy && panel.start() <= hi && panel.end() >= lo
}

fn bvar_spec(config: &RunConfig, panel: &MonthlyPanel) -> VarxSpec {
    let mut spec = VarxSpec::new(panel.n_vars());
    spec.p = config.bvar.lags;
    spec.horizon = config.bvar.horizon;
    spec.covid = covid_effective(config, panel);
    spec.n_exo = 1;
    spec.exo_lags = 0;
    if let Some(l1) = config.bvar.lambda1 {
        spec.hyper.lambda1 = l1;
    }
    spec
}

fn lp_spec(config: &RunConfig, panel: &MonthlyPanel) -> LpSpec {
    let mut spec = LpSpec::from_panel_roles(panel).with_all_lags(config.lp.lags);
    spec.horizon = config.lp.horizon;
    spec.inference = Inference::NeweyWest {
        bandwidth_offset: config.lp.bandwidth_offset,
    };
    spec.covid = covid_effective(config, panel);
    spec.common_sample = config.lp.common_sample;
    spec.aic_lags = config.lp.aic;
    spec
}

/// One engine, one shock series, one band. The posterior seed derives from
/// the master seed alone, so every variant estimated under one master seed
/// shares its posterior sampling randomness — differences between variants
/// are then differences in the shocks, not in the Monte Carlo noise.
fn estimate_band(
    engine: Engine,
    config: &RunConfig,
    panel: &MonthlyPanel,
    shock: &[f64],
    variant_label: &str,
) -> Result<IrfBand> {
    match engine {
        Engine::Bvar => estimate_irf(
            panel,
            &[shock],
            &bvar_spec(config, panel),
            variant_label,
            config.bvar.draws,
            derive_seed(config.master_seed(), domain::POSTERIOR),
        ),
        Engine::LocalProjection => lp_band(panel, shock, &lp_spec(config, panel), variant_label),
    }
}

/// Shared metadata block of every run: tool version, the effective config,
/// data coverage, and identification outcomes. Deliberately free of wall
/// times and hostnames so identical runs write identical bytes.
fn meta_pairs(
    config: &RunConfig,
    prep: &Prepared,
    shocks: Option<&ShockSeries>,
) -> Vec<(String, String)> {
    let mut pairs = vec![("tool.version".to_string(), env!("CARGO_PKG_VERSION").to_string())];
    // The output directory is where this file sits — echoing it would make
    // otherwise-identical runs into different directories differ byte-wise.
    pairs.extend(config.echo().into_iter().filter(|(k, _)| k != "out.dir"));
    pairs.push(("panel.rows".into(), prep.panel.len().to_string()));
    pairs.push(("panel.start".into(), prep.panel.start().to_string()));
    pairs.push(("panel.end".into(), prep.panel.end().to_string()));
    pairs.push(("events.count".into(), prep.events.len().to_string()));
    if let Some(shocks) = shocks {
        pairs.push(("identification.method_used".into(), shocks.method.as_str().into()));
        if let Some(theta) = shocks.theta_star {
            pairs.push(("identification.theta_star".into(), theta.to_string()));
        }
    }
    if let Some(truth) = &prep.truth {
        pairs.push(("dgp.theta_true".into(), truth.theta_true.to_string()));
        let a = truth.a_true;
        pairs.push((
            "dgp.a_true".into(),
            format!("{}, {}, {}, {}", a[(0, 0)], a[(0, 1)], a[(1, 0)], a[(1, 1)]),
        ));
    }
    pairs
}

/// Full run: prepare, identify, estimate with every configured engine, and
/// write `irf_<engine>_<variant>.csv`, per-variable fan charts,
/// `shocks.csv`, and `run_meta`. Configs asking for uniform rotations
/// instead produce the pooled rotation band.
pub fn run_pipeline(config: &RunConfig) -> Result<RunOutput> {
    config.validate()?;
    if let Identification::UniformRotations(n_rot) = config.identification {
        return rotation_uncertainty_bands(config, n_rot);
    }
    let prep = prepare(config)?;
    let shocks = identify(config, &prep.events)?;
    let shock = monthly_shock(config.variant, &shocks, &prep.events, &prep.panel)?;
    let mut bands = Vec::with_capacity(config.engines.len());
    for engine in &config.engines {
        bands.push(estimate_band(*engine, config, &prep.panel, &shock, config.variant.as_str())?);
    }
    let mut writer = ArtifactWriter::new(&config.out_dir)?;
    for band in &bands {
        writer.write_band(band)?;
    }
    writer.write("shocks.csv", &shock_report_csv(&prep.events, &shocks))?;
    writer.write("run_meta", &render_meta(&meta_pairs(config, &prep, Some(&shocks))))?;
    Ok(RunOutput {
        out_dir: config.out_dir.clone(),
        files: writer.into_files(),
        bands,
        theta_star: shocks.theta_star,
        shocks: Some(shocks),
        truth: prep.truth,
    })
}

/// Identification only: writes `shocks.csv` and `run_meta`, no estimation.
pub fn identify_run(config: &RunConfig) -> Result<RunOutput> {
    config.validate()?;
    let prep = prepare(config)?;
    let shocks = identify(config, &prep.events)?;
    let mut writer = ArtifactWriter::new(&config.out_dir)?;
    writer.write("shocks.csv", &shock_report_csv(&prep.events, &shocks))?;
    writer.write("run_meta", &render_meta(&meta_pairs(config, &prep, Some(&shocks))))?;
    Ok(RunOutput {
        out_dir: config.out_dir.clone(),
        files: writer.into_files(),
        bands: Vec::new(),
        theta_star: shocks.theta_star,
        shocks: Some(shocks),
        truth: prep.truth,
    })
}

/// Synthetic-data dump: writes the generated `panel.csv`, `surprises.csv`,
/// the true response paths, and `run_meta` with the true impact map.
pub fn simulate_run(config: &RunConfig) -> Result<RunOutput> {
    config.validate()?;
    let Some(DataSource::Synthetic(dgp)) = &config.data else {
        return Err(Error::Config(
            "simulate needs a synthetic data source (dgp.* keys)".into(),
        ));
    };
    let params = DgpParams::from_config(dgp, truth_horizon(config));
    let (panel, events, truth) = simulate_dgp(&params, config.master_seed())?;
    let prep = Prepared {
        panel,
        events,
        truth: Some(truth),
    };
    let mut writer = ArtifactWriter::new(&config.out_dir)?;
    writer.write("panel.csv", &prep.panel.to_csv_string())?;
    writer.write("surprises.csv", &prep.events.to_csv_string())?;
    let truth = prep.truth.as_ref().expect("just built");
    writer.write("truth_irf.csv", &truth.responses_csv(&prep.panel.names()))?;
    writer.write("run_meta", &render_meta(&meta_pairs(config, &prep, None)))?;
    Ok(RunOutput {
        out_dir: config.out_dir.clone(),
        files: writer.into_files(),
        bands: Vec::new(),
        shocks: None,
        theta_star: None,
        truth: prep.truth,
    })
}

/// The three shock definitions side by side.
#[derive(Debug)]
pub struct VariantComparison {
    /// Bands in [`ShockVariant::ALL`] order: pure_mp, info, raw_hfi.
    pub bands: Vec<IrfBand>,
}

impl VariantComparison {
    /// Wide CSV: one row per variable and horizon, three (lo, median, hi)
    /// column triples.
    pub fn side_by_side_csv(&self) -> String {
        let mut out = String::from("variable,horizon");
        for band in &self.bands {
            let v = &band.meta.variant;
            out.push_str(&format!(",{v}_lo,{v}_median,{v}_hi"));
        }
        out.push('\n');
        let first = &self.bands[0];
        for (i, name) in first.variables().iter().enumerate() {
            for h in 0..=first.horizon() {
                out.push_str(&format!("{name},{h}"));
                for band in &self.bands {
                    out.push_str(&format!(
                        ",{},{},{}",
                        band.lo()[(i, h)],
                        band.median()[(i, h)],
                        band.hi()[(i, h)]
                    ));
                }
                out.push('\n');
            }
        }
        out
    }
}

/// Estimates the first configured engine under all three shock variants,
/// holding data, identification, and sampling seed fixed, so the bands
/// differ only through the shock definition. The pure_mp band is exactly
/// the band a plain [`run_pipeline`] under the same config would produce.
///
/// Artifacts: the three per-variant band files, a side-by-side comparison
/// table, `shocks.csv`, and `run_meta`.
pub fn compare_shock_variants(config: &RunConfig) -> Result<(RunOutput, VariantComparison)> {
    config.validate()?;
    let engine = config.engines[0];
    let prep = prepare(config)?;
    let shocks = identify(config, &prep.events)?;
    let mut bands = Vec::with_capacity(ShockVariant::ALL.len());
    for variant in ShockVariant::ALL {
        let shock = monthly_shock(variant, &shocks, &prep.events, &prep.panel)?;
        bands.push(estimate_band(engine, config, &prep.panel, &shock, variant.as_str())?);
    }
    let comparison = VariantComparison { bands };
    let mut writer = ArtifactWriter::new(&config.out_dir)?;
    for band in &comparison.bands {
        writer.write_band(band)?;
    }
    writer.write(
        &format!("irf_comparison_{}.csv", engine.as_str()),
        &comparison.side_by_side_csv(),
    )?;
    writer.write("shocks.csv", &shock_report_csv(&prep.events, &shocks))?;
    writer.write("run_meta", &render_meta(&meta_pairs(config, &prep, Some(&shocks))))?;
    let output = RunOutput {
        out_dir: config.out_dir.clone(),
        files: writer.into_files(),
        bands: Vec::new(),
        theta_star: shocks.theta_star,
        shocks: Some(shocks),
        truth: prep.truth,
    };
    Ok((output, comparison))
}

/// Identification-uncertainty band: draws `n_rot` admissible rotation
/// angles uniformly, re-decomposes the surprises at each, reruns the
/// posterior sampler on every version of the shock, and pools all response
/// paths into one 5/50/95 band. The spread now carries both estimation and
/// rotation uncertainty.
pub fn rotation_uncertainty_bands(config: &RunConfig, n_rot: usize) -> Result<RunOutput> {
    config.validate()?;
    if n_rot == 0 {
        return Err(Error::Config("rotation count must be at least 1".into()));
    }
    if config.variant == ShockVariant::RawHfi {
        return Err(Error::Config(
            "rotation bands need a rotation-based variant (pure_mp or info)".into(),
        ));
    }
    let master = config.master_seed();
    let prep = prepare(config)?;
    let (decomposition, shocks) = identify_median(&prep.events, &RotationGrid::default())?;
    let angles = draw_admissible(&decomposition.admissible, n_rot, master)?;
    let band = pooled_rotation_band(config, &prep.panel, &prep.events, &angles)?;
    let mut writer = ArtifactWriter::new(&config.out_dir)?;
    writer.write_band(&band)?;
    writer.write("shocks.csv", &shock_report_csv(&prep.events, &shocks))?;
    let mut pairs = meta_pairs(config, &prep, Some(&shocks));
    pairs.push(("rotation.count".into(), n_rot.to_string()));
    pairs.push((
        "rotation.draws_per_angle".into(),
        draws_per_angle(config.bvar.draws, angles.len()).to_string(),
    ));
    writer.write("run_meta", &render_meta(&pairs))?;
    Ok(RunOutput {
        out_dir: config.out_dir.clone(),
        files: writer.into_files(),
        bands: vec![band],
        theta_star: Some(decomposition.theta_star),
        shocks: Some(shocks),
        truth: prep.truth,
    })
}

fn draws_per_angle(total_draws: usize, n_angles: usize) -> usize {
    (total_draws / n_angles).max(MIN_DRAWS_PER_ROTATION)
}

/// The draw-pooling core behind [`rotation_uncertainty_bands`], taking the
/// angles directly. Each angle gets its own posterior-sampling stream; with
/// a single angle the stream is the plain posterior stream, so pooling over
/// one angle reproduces the benchmark band draw for draw (given at least
/// [`MIN_DRAWS_PER_ROTATION`] configured draws).
///
/// The reported `shock_scale` is the mean standardization scale across
/// angles; individual angles differ slightly because each rotation defines
/// its own monthly shock series.
pub fn pooled_rotation_band(
    config: &RunConfig,
    panel: &MonthlyPanel,
    events: &EventSurprises,
    angles: &[f64],
) -> Result<IrfBand> {
    if angles.is_empty() {
        return Err(Error::Config("no rotation angles to pool over".into()));
    }
    let master = config.master_seed();
    let spec = bvar_spec(config, panel);
    let per_angle = draws_per_angle(config.bvar.draws, angles.len());
    let pool_base = derive_seed(master, domain::ROTATION_POSTERIOR);
    let mut pooled: Vec<DMatrix<f64>> = Vec::with_capacity(per_angle * angles.len());
    let mut scale_sum = 0.0;
    for (i, &theta) in angles.iter().enumerate() {
        let shocks = decompose(events, theta, ShockMethod::UniformDraw)?;
        let shock = monthly_shock(config.variant, &shocks, events, panel)?;
        let seed = if angles.len() == 1 {
            derive_seed(master, domain::POSTERIOR)
        } else {
            derive_seed(pool_base, i as u64)
        };
        let (paths, scale) = irf_paths(panel, &[&shock], &spec, per_angle, seed)?;
        pooled.extend(paths);
        scale_sum += scale;
    }
    band_from_paths(
        panel.names(),
        &pooled,
        BandMeta {
            engine: "bvar".into(),
            variant: format!("{}_rotations", config.variant.as_str()),
            shock_scale: scale_sum / angles.len() as f64,
        },
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn synthetic_config(dir: &std::path::Path) -> RunConfig {
        let mut config = RunConfig::parse(
            "seed = 42\n\
             dgp.n = 2\n\
             dgp.t = 150\n\
             dgp.rho = 0.5\n\
             bvar.lags = 2\n\
             bvar.horizon = 6\n\
             bvar.draws = 80\n\
             lp.horizon = 4\n\
             lp.lags = 2\n",
        )
        .unwrap();
        config.out_dir = dir.to_path_buf();
        config
    }

    fn read(path: &std::path::Path) -> String {
        std::fs::read_to_string(path).unwrap()
    }

    #[test]
    fn full_run_writes_the_expected_artifact_set() {
        let dir = tempfile::tempdir().unwrap();
        let config = synthetic_config(dir.path());
        let output = run_pipeline(&config).unwrap();
        let names: Vec<String> = output
            .files
            .iter()
            .map(|p| p.file_name().unwrap().to_str().unwrap().to_string())
            .collect();
        assert_eq!(
            names,
            vec![
                "irf_bvar_pure_mp.csv",
                "y0_bvar_pure_mp.svg",
                "y1_bvar_pure_mp.svg",
                "irf_local_projection_pure_mp.csv",
                "y0_local_projection_pure_mp.svg",
                "y1_local_projection_pure_mp.svg",
                "shocks.csv",
                "run_meta"
            ]
        );
        assert_eq!(output.bands.len(), 2);
        assert_eq!(output.bands[0].horizon(), 6);
        assert_eq!(output.bands[1].horizon(), 4);
        assert!(output.theta_star.is_some());
        let meta = read(&output.files[7]);
        assert!(meta.contains("seed = 42"));
        assert!(meta.contains("panel.rows = 150"));
        assert!(meta.contains("identification.theta_star = "));
        assert!(meta.contains("dgp.theta_true = "));
    }

    #[test]
    fn reruns_are_byte_identical() {
        let dir1 = tempfile::tempdir().unwrap();
        let dir2 = tempfile::tempdir().unwrap();
        let out1 = run_pipeline(&synthetic_config(dir1.path())).unwrap();
        let out2 = run_pipeline(&synthetic_config(dir2.path())).unwrap();
        assert_eq!(out1.files.len(), out2.files.len());
        for (a, b) in out1.files.iter().zip(&out2.files) {
            assert_eq!(
                std::fs::read(a).unwrap(),
                std::fs::read(b).unwrap(),
                "artifact {} differs between identical runs",
                a.file_name().unwrap().to_str().unwrap()
            );
        }
    }

    #[test]
    fn variant_comparison_shares_the_pure_mp_band_with_a_plain_run() {
        let dir1 = tempfile::tempdir().unwrap();
        let dir2 = tempfile::tempdir().unwrap();
        let mut config = synthetic_config(dir1.path());
        config.engines = vec![Engine::Bvar];
        let plain = run_pipeline(&config).unwrap();
        config.out_dir = dir2.path().to_path_buf();
        let (_, comparison) = compare_shock_variants(&config).unwrap();
        assert_eq!(comparison.bands.len(), 3);
        assert_eq!(
            comparison.bands[0].to_csv_string(),
            plain.bands[0].to_csv_string(),
            "pure_mp comparison band must equal the standalone run"
        );
        let head = comparison.side_by_side_csv();
        assert!(head.starts_with(
            "variable,horizon,pure_mp_lo,pure_mp_median,pure_mp_hi,info_lo,info_median,info_hi,raw_hfi_lo,raw_hfi_median,raw_hfi_hi\n"
        ));
    }

    #[test]
    fn single_angle_rotation_pool_reproduces_the_benchmark_band() {
        let dir = tempfile::tempdir().unwrap();
        let mut config = synthetic_config(dir.path());
        config.engines = vec![Engine::Bvar];
        let prep = prepare(&config).unwrap();
        let (decomposition, shocks) = identify_median(&prep.events, &RotationGrid::default()).unwrap();
        let shock = monthly_shock(config.variant, &shocks, &prep.events, &prep.panel).unwrap();
        let benchmark =
            estimate_band(Engine::Bvar, &config, &prep.panel, &shock, "pure_mp").unwrap();
        let pooled =
            pooled_rotation_band(&config, &prep.panel, &prep.events, &[decomposition.theta_star])
                .unwrap();
        assert_eq!(pooled.lo(), benchmark.lo());
        assert_eq!(pooled.median(), benchmark.median());
        assert_eq!(pooled.hi(), benchmark.hi());
    }

    #[test]
    fn rotation_run_writes_a_pooled_band() {
        let dir = tempfile::tempdir().unwrap();
        let mut config = synthetic_config(dir.path());
        config.engines = vec![Engine::Bvar];
        config.identification = Identification::UniformRotations(4);
        let output = run_pipeline(&config).unwrap();
        assert_eq!(output.bands.len(), 1);
        assert_eq!(output.bands[0].meta.variant, "pure_mp_rotations");
        let names: Vec<&str> = output
            .files
            .iter()
            .map(|p| p.file_name().unwrap().to_str().unwrap())
            .collect();
        assert!(names.contains(&"irf_bvar_pure_mp_rotations.csv"));
        let meta = read(output.files.iter().find(|p| p.ends_with("run_meta")).unwrap());
        assert!(meta.contains("rotation.count = 4"));
        assert!(meta.contains("rotation.draws_per_angle = 50"));
    }

    #[test]
    fn raw_hfi_monthly_series_sums_events_within_each_month() {
        let config = synthetic_config(std::path::Path::new("unused"));
        let mut with_events = config.clone();
        if let Some(DataSource::Synthetic(dgp)) = &mut with_events.data {
            dgp.events_per_month = 2;
        }
        let prep = prepare(&with_events).unwrap();
        let shocks = identify(&with_events, &prep.events).unwrap();
        let raw = monthly_shock(ShockVariant::RawHfi, &shocks, &prep.events, &prep.panel).unwrap();
        assert_eq!(raw.len(), prep.panel.len());
        let mut manual = vec![0.0; prep.panel.len()];
        for event in prep.events.events() {
            let m = Month::containing(event.date).diff(prep.panel.start()) as usize;
            manual[m] += event.ir;
        }
        for (a, b) in raw.iter().zip(&manual) {
            assert_eq!(a, b);
        }
    }

    #[test]
    fn window_truncates_panel_and_events_together() {
        let dir = tempfile::tempdir().unwrap();
        let mut config = synthetic_config(dir.path());
        config.window_start = Some(Month::new(2002, 1).unwrap());
        config.window_end = Some(Month::new(2008, 12).unwrap());
        let prep = prepare(&config).unwrap();
        assert_eq!(prep.panel.start(), Month::new(2002, 1).unwrap());
        assert_eq!(prep.panel.len(), 84);
        assert_eq!(prep.events.len(), 84);
        for event in prep.events.events() {
            let m = Month::containing(event.date);
            assert!(m >= prep.panel.start() && m <= prep.panel.end());
        }
    }

    #[test]
    fn covid_dummy_switches_off_outside_its_window() {
        let dir = tempfile::tempdir().unwrap();
        let config = synthetic_config(dir.path());
        // synthetic panel starts 2000-01 with t=150, ending before 2020
        let prep = prepare(&config).unwrap();
        assert!(!covid_effective(&config, &prep.panel));
        let mut late = config.clone();
        if let Some(DataSource::Synthetic(dgp)) = &mut late.data {
            dgp.start = Month::new(2019, 1).unwrap();
        }
        let prep_late = prepare(&late).unwrap();
        assert!(covid_effective(&late, &prep_late.panel));
        late.covid_dummy = false;
        assert!(!covid_effective(&late, &prep_late.panel));
    }

    #[test]
    fn identify_run_skips_estimation() {
        let dir = tempfile::tempdir().unwrap();
        let config = synthetic_config(dir.path());
        let output = identify_run(&config).unwrap();
        assert!(output.bands.is_empty());
        let names: Vec<&str> = output
            .files
            .iter()
            .map(|p| p.file_name().unwrap().to_str().unwrap())
            .collect();
        assert_eq!(names, vec!["shocks.csv", "run_meta"]);
        let shocks_csv = read(&output.files[0]);
        assert!(shocks_csv.starts_with("date,ir,eq,mp,info,method,theta_star\n"));
        assert!(shocks_csv.contains("median_rotation"));
    }

    #[test]
    fn simulate_run_dumps_panel_surprises_and_truth() {
        let dir = tempfile::tempdir().unwrap();
        let config = synthetic_config(dir.path());
        let output = simulate_run(&config).unwrap();
        let names: Vec<&str> = output
            .files
            .iter()
            .map(|p| p.file_name().unwrap().to_str().unwrap())
            .collect();
        assert_eq!(names, vec!["panel.csv", "surprises.csv", "truth_irf.csv", "run_meta"]);
        let panel_csv = read(&output.files[0]);
        assert!(panel_csv.starts_with("date,y0,y1\n"));
        assert_eq!(panel_csv.lines().count(), 151);
        let truth_csv = read(&output.files[2]);
        assert!(truth_csv.starts_with("variable,horizon,mp_response,info_response\n"));
        // truth horizon tracks the longest engine horizon (bvar: 6)
        assert_eq!(truth_csv.lines().count(), 1 + 2 * 7);
    }

    #[test]
    fn raw_hfi_rotation_bands_are_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let mut config = synthetic_config(dir.path());
        config.variant = ShockVariant::RawHfi;
        let err = rotation_uncertainty_bands(&config, 3).unwrap_err();
        assert!(err.to_string().contains("rotation-based variant"), "{err}");
    }

    #[test]
    fn fixed_angle_identification_tags_the_shocks() {
        let dir = tempfile::tempdir().unwrap();
        let mut config = synthetic_config(dir.path());
        let prep = prepare(&config).unwrap();
        let (decomposition, _) = identify_median(&prep.events, &RotationGrid::default()).unwrap();
        config.identification = Identification::FixedAngle(decomposition.theta_star);
        let shocks = identify(&config, &prep.events).unwrap();
        assert_eq!(shocks.method, ShockMethod::FixedRotation);
        assert_eq!(shocks.theta_star, Some(decomposition.theta_star));
    }
}
