//! Run configuration: a flat `key = value` text format (one pair per line,
//! `#` starts a comment) parsed into a validated [`RunConfig`]. Every key is
//! checked against the known set — a typo is a hard error, never a silent
//! fallback to defaults — and duplicate keys are rejected.

use std::collections::BTreeMap;
use std::fmt::Display;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::bvar::{DEFAULT_HORIZON, DEFAULT_LAGS, DEFAULT_N_DRAWS};
use crate::dataio::ColumnSpec;
use crate::error::{Error, Result};
use crate::localproj::{DEFAULT_LP_HORIZON, DEFAULT_LP_LAGS};
use crate::month::Month;

/// Artifacts land here unless `out.dir` says otherwise.
pub const DEFAULT_OUT_DIR: &str = "out";
/// Rotation count when `identification.method = uniform_rotations` leaves
/// `identification.rotations` unset.
pub const DEFAULT_ROTATIONS: usize = 200;

/// Estimation engines the pipeline can run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Engine {
    Bvar,
    LocalProjection,
}

impl Engine {
    pub fn as_str(self) -> &'static str {
        match self {
            Engine::Bvar => "bvar",
            Engine::LocalProjection => "local_projection",
        }
    }
}

impl FromStr for Engine {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "bvar" => Ok(Engine::Bvar),
            "local_projection" => Ok(Engine::LocalProjection),
            other => Err(Error::Config(format!(
                "unknown engine `{other}` (expected bvar or local_projection)"
            ))),
        }
    }
}

/// How event-level surprises are turned into structural shocks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Identification {
    /// Rotation at the circular median of the admissible arc.
    MedianRotation,
    /// Comovement sign split of the raw surprises.
    PoorMans,
    /// Rotation at a caller-chosen angle (must satisfy the sign
    /// restrictions for the data at hand).
    FixedAngle(f64),
    /// Pool posterior responses over uniformly drawn admissible angles.
    UniformRotations(usize),
}

impl Identification {
    pub fn method_str(self) -> &'static str {
        match self {
            Identification::MedianRotation => "median_rotation",
            Identification::PoorMans => "poor_mans",
            Identification::FixedAngle(_) => "fixed_angle",
            Identification::UniformRotations(_) => "uniform_rotations",
        }
    }
}

/// Which shock series feeds the response estimators.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ShockVariant {
    /// Identified policy shock.
    PureMp,
    /// Identified information shock.
    Info,
    /// Monthly sum of the raw interest-rate surprises, no rotation at all.
    RawHfi,
}

impl ShockVariant {
    pub const ALL: [ShockVariant; 3] = [ShockVariant::PureMp, ShockVariant::Info, ShockVariant::RawHfi];

    pub fn as_str(self) -> &'static str {
        match self {
            ShockVariant::PureMp => "pure_mp",
            ShockVariant::Info => "info",
            ShockVariant::RawHfi => "raw_hfi",
        }
    }
}

impl FromStr for ShockVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "pure_mp" => Ok(ShockVariant::PureMp),
            "info" => Ok(ShockVariant::Info),
            "raw_hfi" => Ok(ShockVariant::RawHfi),
            other => Err(Error::Config(format!(
                "unknown variant `{other}` (expected pure_mp, info, or raw_hfi)"
            ))),
        }
    }
}

/// On-disk inputs: a monthly panel plus a surprise-event file.
#[derive(Debug, Clone, PartialEq)]
pub struct DataFiles {
    pub panel: PathBuf,
    pub surprises: PathBuf,
    /// Panel schema: which CSV columns to keep, how to transform them, and
    /// their role (domestic, foreign, policy_rate, exchange_rate, other).
    pub columns: Vec<ColumnSpec>,
}

/// Synthetic-data generator settings (the flat-file subset; richer setups
/// construct [`crate::pipeline::DgpParams`] directly).
#[derive(Debug, Clone, PartialEq)]
pub struct DgpConfig {
    /// Number of panel variables.
    pub n: usize,
    /// Sample length in months.
    pub t: usize,
    /// Common own-lag coefficient of the diagonal VAR(1) transition.
    pub rho: f64,
    /// Standard deviation of each variable's independent innovation.
    pub noise_sd: f64,
    /// Impact row of the policy shock (length n).
    pub impact_mp: Vec<f64>,
    /// Impact row of the information shock (length n).
    pub impact_info: Vec<f64>,
    pub events_per_month: usize,
    pub start: Month,
    /// Row-major 2x2 covariance of the observed surprises.
    pub surprise_cov: [f64; 4],
}

impl DgpConfig {
    fn new(n: usize, t: usize) -> Self {
        DgpConfig {
            n,
            t,
            rho: 0.5,
            noise_sd: 1.0,
            impact_mp: default_impacts(n, -0.4),
            impact_info: default_impacts(n, 0.25),
            events_per_month: 1,
            start: Month::new(2000, 1).expect("valid month"),
            surprise_cov: [1.0, 0.3, 0.3, 1.0],
        }
    }
}

/// Alternating-sign impact pattern so no synthetic response is trivially
/// zero: `scale, -scale/2, scale/3, ...`.
fn default_impacts(n: usize, scale: f64) -> Vec<f64> {
    (0..n)
        .map(|i| {
            let sign = if i % 2 == 0 { 1.0 } else { -0.5 };
            sign * scale / (1.0 + i as f64 / 2.0)
        })
        .collect()
}

/// Where the panel and the surprise events come from.
#[derive(Debug, Clone, PartialEq)]
pub enum DataSource {
    Files(DataFiles),
    Synthetic(DgpConfig),
}

#[derive(Debug, Clone, PartialEq)]
pub struct BvarSettings {
    pub lags: usize,
    pub horizon: usize,
    pub draws: usize,
    /// Overall prior tightness; `None` keeps the built-in default.
    pub lambda1: Option<f64>,
}

impl Default for BvarSettings {
    fn default() -> Self {
        BvarSettings {
            lags: DEFAULT_LAGS,
            horizon: DEFAULT_HORIZON,
            draws: DEFAULT_N_DRAWS,
            lambda1: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpSettings {
    pub horizon: usize,
    /// Lag count applied to the shock, the outcome, and every control block.
    pub lags: usize,
    /// Extra lead-lag terms beyond the horizon in the HAC bandwidth.
    pub bandwidth_offset: usize,
    /// Replace the fixed lag count by an information-criterion search.
    pub aic: bool,
    /// Hold the estimation sample fixed at the largest horizon's rows.
    pub common_sample: bool,
}

impl Default for LpSettings {
    fn default() -> Self {
        LpSettings {
            horizon: DEFAULT_LP_HORIZON,
            lags: DEFAULT_LP_LAGS,
            bandwidth_offset: 0,
            aic: false,
            common_sample: false,
        }
    }
}

/// Everything one pipeline run needs, assembled from a config file plus
/// command-line overrides, then checked once by [`RunConfig::validate`].
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    /// Master seed; every random stage derives its own stream from it.
    pub seed: Option<u64>,
    pub out_dir: PathBuf,
    pub engines: Vec<Engine>,
    pub variant: ShockVariant,
    pub identification: Identification,
    pub window_start: Option<Month>,
    pub window_end: Option<Month>,
    /// Include the pandemic step dummy in every design that overlaps it.
    pub covid_dummy: bool,
    pub data: Option<DataSource>,
    pub bvar: BvarSettings,
    pub lp: LpSettings,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            seed: None,
            out_dir: PathBuf::from(DEFAULT_OUT_DIR),
            engines: vec![Engine::Bvar, Engine::LocalProjection],
            variant: ShockVariant::PureMp,
            identification: Identification::MedianRotation,
            window_start: None,
            window_end: None,
            covid_dummy: true,
            data: None,
            bvar: BvarSettings::default(),
            lp: LpSettings::default(),
        }
    }
}

impl RunConfig {
    /// Reads and parses a config file.
    pub fn load(path: &Path) -> Result<RunConfig> {
        let raw = std::fs::read_to_string(path).map_err(|e| Error::io(path.display(), e))?;
        RunConfig::parse(&raw)
    }

    /// Parses flat `key = value` text. Unknown and duplicate keys are hard
    /// errors; so is mixing file-data keys with synthetic-DGP keys.
    pub fn parse(text: &str) -> Result<RunConfig> {
        let mut pairs = Pairs::collect(text)?;
        let mut config = RunConfig::default();

        if let Some(v) = pairs.parse::<u64>("seed")? {
            config.seed = Some(v);
        }
        if let Some(v) = pairs.take("out.dir") {
            config.out_dir = PathBuf::from(v);
        }
        if let Some(v) = pairs.take("engines") {
            config.engines = split_list(&v, "engines")?
                .iter()
                .map(|s| s.parse())
                .collect::<Result<Vec<Engine>>>()?;
        }
        if let Some(v) = pairs.parse::<ShockVariant>("variant")? {
            config.variant = v;
        }
        config.identification = parse_identification(&mut pairs)?;
        config.window_start = pairs.parse::<Month>("window.start")?;
        config.window_end = pairs.parse::<Month>("window.end")?;
        if let Some(v) = pairs.parse::<bool>("covid.dummy")? {
            config.covid_dummy = v;
        }
        config.data = parse_data_source(&mut pairs)?;

        if let Some(v) = pairs.parse::<usize>("bvar.lags")? {
            config.bvar.lags = v;
        }
        if let Some(v) = pairs.parse::<usize>("bvar.horizon")? {
            config.bvar.horizon = v;
        }
        if let Some(v) = pairs.parse::<usize>("bvar.draws")? {
            config.bvar.draws = v;
        }
        config.bvar.lambda1 = pairs.parse::<f64>("bvar.lambda1")?;

        if let Some(v) = pairs.parse::<usize>("lp.horizon")? {
            config.lp.horizon = v;
        }
        if let Some(v) = pairs.parse::<usize>("lp.lags")? {
            config.lp.lags = v;
        }
        if let Some(v) = pairs.parse::<usize>("lp.bandwidth_offset")? {
            config.lp.bandwidth_offset = v;
        }
        if let Some(v) = pairs.parse::<bool>("lp.aic")? {
            config.lp.aic = v;
        }
        if let Some(v) = pairs.parse::<bool>("lp.common_sample")? {
            config.lp.common_sample = v;
        }

        pairs.finish()?;
        Ok(config)
    }

    /// Checks cross-field consistency once, after file plus CLI merging.
    pub fn validate(&self) -> Result<()> {
        if self.seed.is_none() {
            return Err(Error::Config(
                "seed is required: set `seed =` in the config or pass --seed".into(),
            ));
        }
        if self.engines.is_empty() {
            return Err(Error::Config("engines list is empty".into()));
        }
        for (i, e) in self.engines.iter().enumerate() {
            if self.engines[..i].contains(e) {
                return Err(Error::Config(format!("engine `{}` listed twice", e.as_str())));
            }
        }
        if let (Some(s), Some(e)) = (self.window_start, self.window_end) {
            if e < s {
                return Err(Error::Config(format!("window end {e} precedes start {s}")));
            }
        }
        match self.identification {
            Identification::FixedAngle(theta) if !theta.is_finite() => {
                return Err(Error::Config(format!("identification.angle {theta} is not finite")));
            }
            Identification::UniformRotations(0) => {
                return Err(Error::Config("identification.rotations must be at least 1".into()));
            }
            _ => {}
        }
        if self.bvar.lags == 0 {
            return Err(Error::Config("bvar.lags must be at least 1".into()));
        }
        if self.bvar.draws == 0 {
            return Err(Error::Config("bvar.draws must be at least 1".into()));
        }
        if let Some(l1) = self.bvar.lambda1 {
            if l1 <= 0.0 || l1.is_nan() {
                return Err(Error::Config(format!("bvar.lambda1 must be positive, got {l1}")));
            }
        }
        match &self.data {
            None => {
                return Err(Error::Config(
                    "no data source: set data.panel/data.surprises/data.columns or the dgp.* keys"
                        .into(),
                ));
            }
            Some(DataSource::Files(files)) => {
                if files.columns.is_empty() {
                    return Err(Error::Config("data.columns lists no panel columns".into()));
                }
            }
            Some(DataSource::Synthetic(dgp)) => validate_dgp(dgp)?,
        }
        Ok(())
    }

    /// The master seed; call only after [`RunConfig::validate`].
    pub fn master_seed(&self) -> u64 {
        self.seed.expect("config validated before use")
    }

    /// The effective configuration as flat pairs, defaults materialized, in
    /// a fixed order. Rendering these lines reproduces the run exactly.
    pub fn echo(&self) -> Vec<(String, String)> {
        let mut out: Vec<(String, String)> = Vec::new();
        let mut push = |k: &str, v: String| out.push((k.to_string(), v));
        if let Some(seed) = self.seed {
            push("seed", seed.to_string());
        }
        push("out.dir", self.out_dir.display().to_string());
        push(
            "engines",
            self.engines.iter().map(|e| e.as_str()).collect::<Vec<_>>().join(", "),
        );
        push("variant", self.variant.as_str().to_string());
        push("identification.method", self.identification.method_str().to_string());
        match self.identification {
            Identification::FixedAngle(theta) => push("identification.angle", theta.to_string()),
            Identification::UniformRotations(n) => push("identification.rotations", n.to_string()),
            _ => {}
        }
        if let Some(m) = self.window_start {
            push("window.start", m.to_string());
        }
        if let Some(m) = self.window_end {
            push("window.end", m.to_string());
        }
        push("covid.dummy", self.covid_dummy.to_string());
        match &self.data {
            Some(DataSource::Files(files)) => {
                push("data.panel", files.panel.display().to_string());
                push("data.surprises", files.surprises.display().to_string());
                let cols = files
                    .columns
                    .iter()
                    .map(|c| format!("{}:{}:{}", c.name, c.transform.as_str(), c.role.as_str()))
                    .collect::<Vec<_>>()
                    .join(", ");
                push("data.columns", cols);
            }
            Some(DataSource::Synthetic(dgp)) => {
                push("dgp.n", dgp.n.to_string());
                push("dgp.t", dgp.t.to_string());
                push("dgp.rho", dgp.rho.to_string());
                push("dgp.noise_sd", dgp.noise_sd.to_string());
                push("dgp.impact_mp", join_floats(&dgp.impact_mp));
                push("dgp.impact_info", join_floats(&dgp.impact_info));
                push("dgp.events_per_month", dgp.events_per_month.to_string());
                push("dgp.start", dgp.start.to_string());
                push("dgp.surprise_cov", join_floats(&dgp.surprise_cov));
            }
            None => {}
        }
        push("bvar.lags", self.bvar.lags.to_string());
        push("bvar.horizon", self.bvar.horizon.to_string());
        push("bvar.draws", self.bvar.draws.to_string());
        if let Some(l1) = self.bvar.lambda1 {
            push("bvar.lambda1", l1.to_string());
        }
        push("lp.horizon", self.lp.horizon.to_string());
        push("lp.lags", self.lp.lags.to_string());
        push("lp.bandwidth_offset", self.lp.bandwidth_offset.to_string());
        push("lp.aic", self.lp.aic.to_string());
        push("lp.common_sample", self.lp.common_sample.to_string());
        out
    }
}

fn validate_dgp(dgp: &DgpConfig) -> Result<()> {
    if dgp.n == 0 {
        return Err(Error::Config("dgp.n must be at least 1".into()));
    }
    if dgp.t == 0 {
        return Err(Error::Config("dgp.t must be at least 1".into()));
    }
    if !(1..=27).contains(&dgp.events_per_month) {
        return Err(Error::Config(format!(
            "dgp.events_per_month must lie in 1..=27, got {}",
            dgp.events_per_month
        )));
    }
    if dgp.noise_sd <= 0.0 || dgp.noise_sd.is_nan() {
        return Err(Error::Config(format!(
            "dgp.noise_sd must be positive, got {}",
            dgp.noise_sd
        )));
    }
    for (key, v) in [("dgp.impact_mp", &dgp.impact_mp), ("dgp.impact_info", &dgp.impact_info)] {
        if v.len() != dgp.n {
            return Err(Error::Config(format!(
                "{key} has {} entries but dgp.n = {}",
                v.len(),
                dgp.n
            )));
        }
    }
    Ok(())
}

fn parse_identification(pairs: &mut Pairs) -> Result<Identification> {
    let method = pairs.take("identification.method");
    let angle = pairs.parse::<f64>("identification.angle")?;
    let rotations = pairs.parse::<usize>("identification.rotations")?;
    let method = match method.as_deref() {
        None | Some("median_rotation") => Identification::MedianRotation,
        Some("poor_mans") => Identification::PoorMans,
        Some("fixed_angle") => Identification::FixedAngle(angle.ok_or_else(|| {
            Error::Config("identification.method = fixed_angle needs identification.angle".into())
        })?),
        Some("uniform_rotations") => {
            Identification::UniformRotations(rotations.unwrap_or(DEFAULT_ROTATIONS))
        }
        Some(other) => {
            return Err(Error::Config(format!(
                "unknown identification.method `{other}` (expected median_rotation, poor_mans, \
                 fixed_angle, or uniform_rotations)"
            )));
        }
    };
    if angle.is_some() && !matches!(method, Identification::FixedAngle(_)) {
        return Err(Error::Config(
            "identification.angle only applies to identification.method = fixed_angle".into(),
        ));
    }
    if rotations.is_some() && !matches!(method, Identification::UniformRotations(_)) {
        return Err(Error::Config(
            "identification.rotations only applies to identification.method = uniform_rotations"
                .into(),
        ));
    }
    Ok(method)
}

fn parse_data_source(pairs: &mut Pairs) -> Result<Option<DataSource>> {
    let panel = pairs.take("data.panel");
    let surprises = pairs.take("data.surprises");
    let columns = pairs.take("data.columns");
    let any_files = panel.is_some() || surprises.is_some() || columns.is_some();

    let n = pairs.parse::<usize>("dgp.n")?;
    let t = pairs.parse::<usize>("dgp.t")?;
    let rho = pairs.parse::<f64>("dgp.rho")?;
    let noise_sd = pairs.parse::<f64>("dgp.noise_sd")?;
    let impact_mp = pairs.take("dgp.impact_mp");
    let impact_info = pairs.take("dgp.impact_info");
    let events_per_month = pairs.parse::<usize>("dgp.events_per_month")?;
    let start = pairs.parse::<Month>("dgp.start")?;
    let surprise_cov = pairs.take("dgp.surprise_cov");
    let any_dgp = n.is_some()
        || t.is_some()
        || rho.is_some()
        || noise_sd.is_some()
        || impact_mp.is_some()
        || impact_info.is_some()
        || events_per_month.is_some()
        || start.is_some()
        || surprise_cov.is_some();

    if any_files && any_dgp {
        return Err(Error::Config(
            "config mixes data.* file keys with dgp.* synthetic keys; pick one source".into(),
        ));
    }
    if any_files {
        let panel = panel
            .ok_or_else(|| Error::Config("file data needs data.panel".into()))?;
        let surprises = surprises
            .ok_or_else(|| Error::Config("file data needs data.surprises".into()))?;
        let columns = columns
            .ok_or_else(|| Error::Config("file data needs data.columns".into()))?;
        let columns = split_list(&columns, "data.columns")?
            .iter()
            .map(|entry| parse_column(entry))
            .collect::<Result<Vec<_>>>()?;
        return Ok(Some(DataSource::Files(DataFiles {
            panel: PathBuf::from(panel),
            surprises: PathBuf::from(surprises),
            columns,
        })));
    }
    if any_dgp {
        let n = n.ok_or_else(|| Error::Config("synthetic data needs dgp.n".into()))?;
        let t = t.ok_or_else(|| Error::Config("synthetic data needs dgp.t".into()))?;
        let mut dgp = DgpConfig::new(n, t);
        if let Some(v) = rho {
            dgp.rho = v;
        }
        if let Some(v) = noise_sd {
            dgp.noise_sd = v;
        }
        if let Some(v) = impact_mp {
            dgp.impact_mp = parse_floats(&v, "dgp.impact_mp")?;
        }
        if let Some(v) = impact_info {
            dgp.impact_info = parse_floats(&v, "dgp.impact_info")?;
        }
        if let Some(v) = events_per_month {
            dgp.events_per_month = v;
        }
        if let Some(v) = start {
            dgp.start = v;
        }
        if let Some(v) = surprise_cov {
            let flat = parse_floats(&v, "dgp.surprise_cov")?;
            if flat.len() != 4 {
                return Err(Error::Config(format!(
                    "dgp.surprise_cov needs 4 row-major entries, got {}",
                    flat.len()
                )));
            }
            dgp.surprise_cov = [flat[0], flat[1], flat[2], flat[3]];
        }
        return Ok(Some(DataSource::Synthetic(dgp)));
    }
    Ok(None)
}

/// One schema entry: either `name` (level, role `other`) or
/// `name:transform:role`.
fn parse_column(entry: &str) -> Result<ColumnSpec> {
    let parts: Vec<&str> = entry.split(':').map(str::trim).collect();
    match parts.as_slice() {
        [name] if !name.is_empty() => Ok(ColumnSpec::level(*name)),
        [name, transform, role] if !name.is_empty() => {
            Ok(ColumnSpec::new(*name, transform.parse()?, role.parse()?))
        }
        _ => Err(Error::Config(format!(
            "bad column entry `{entry}` (expected `name` or `name:transform:role`)"
        ))),
    }
}

fn split_list<'a>(value: &'a str, key: &str) -> Result<Vec<&'a str>> {
    let items: Vec<&str> = value.split(',').map(str::trim).collect();
    if items.iter().any(|s| s.is_empty()) {
        return Err(Error::Config(format!("empty entry in `{key}` list")));
    }
    Ok(items)
}

fn parse_floats(value: &str, key: &str) -> Result<Vec<f64>> {
    split_list(value, key)?
        .iter()
        .map(|s| {
            s.parse::<f64>()
                .map_err(|e| Error::Config(format!("bad value `{s}` in `{key}`: {e}")))
        })
        .collect()
}

fn join_floats(values: &[f64]) -> String {
    values.iter().map(f64::to_string).collect::<Vec<_>>().join(", ")
}

/// The raw key/value pairs of a config file, consumed key by key so that
/// whatever remains at the end is by definition unknown.
struct Pairs(BTreeMap<String, String>);

impl Pairs {
    fn collect(text: &str) -> Result<Pairs> {
        let mut map = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::Config(format!("line {}: expected `key = value`, got `{line}`", i + 1))
            })?;
            let key = key.trim().to_string();
            let value = value.trim().to_string();
            if key.is_empty() {
                return Err(Error::Config(format!("line {}: empty key", i + 1)));
            }
            if map.insert(key.clone(), value).is_some() {
                return Err(Error::Config(format!("duplicate key `{key}`")));
            }
        }
        Ok(Pairs(map))
    }

    fn take(&mut self, key: &str) -> Option<String> {
        self.0.remove(key)
    }

    fn parse<T: FromStr>(&mut self, key: &str) -> Result<Option<T>>
    where
        T::Err: Display,
    {
        match self.take(key) {
            None => Ok(None),
            Some(raw) => raw
                .parse::<T>()
                .map(Some)
                .map_err(|e| Error::Config(format!("bad value `{raw}` for `{key}`: {e}"))),
        }
    }

    /// Errors on every key nobody claimed.
    fn finish(self) -> Result<()> {
        if self.0.is_empty() {
            Ok(())
        } else {
            let keys: Vec<String> = self.0.into_keys().collect();
            Err(Error::UnknownConfigKey(keys.join("`, `")))
        }
    }
}
