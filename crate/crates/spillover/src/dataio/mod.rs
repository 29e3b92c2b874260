//! Monthly panel and announcement-surprise ingestion.
//!
//! Input CSVs use a `date` first column: `YYYY-MM` for panels, `YYYY-MM-DD`
//! for event surprises. Panels are validated hard: consecutive months, no
//! missing interior values, strictly positive inputs under the log
//! transform. Missing data is never imputed.

pub mod fetch;

use crate::error::{Error, Result};
use crate::month::Month;
use chrono::NaiveDate;
use nalgebra::DMatrix;
use std::fmt;
use std::io::Write;
use std::path::Path;
use std::str::FromStr;

/// COVID dummy window, inclusive on both ends.
pub const COVID_START: (i32, u32) = (2020, 3);
pub const COVID_END: (i32, u32) = (2021, 6);

/// How a raw column is transformed on load.
///
/// `LogTimes100` stores `100 * ln(x)` so impulse responses read in percent;
/// `Level` and `Percent` are identities and only document the units.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Transform {
    Level,
    LogTimes100,
    Percent,
}

impl Transform {
    pub fn as_str(self) -> &'static str {
        match self {
            Transform::Level => "level",
            Transform::LogTimes100 => "log_times_100",
            Transform::Percent => "percent",
        }
    }
}

impl FromStr for Transform {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "level" => Ok(Transform::Level),
            "log_times_100" => Ok(Transform::LogTimes100),
            "percent" => Ok(Transform::Percent),
            other => Err(Error::InvalidSpec(format!("unknown transform `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VariableRole {
    Domestic,
    Foreign,
    PolicyRate,
    ExchangeRate,
    Other,
}

impl VariableRole {
    pub fn as_str(self) -> &'static str {
        match self {
            VariableRole::Domestic => "domestic",
            VariableRole::Foreign => "foreign",
            VariableRole::PolicyRate => "policy_rate",
            VariableRole::ExchangeRate => "exchange_rate",
            VariableRole::Other => "other",
        }
    }
}

impl FromStr for VariableRole {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "domestic" => Ok(VariableRole::Domestic),
            "foreign" => Ok(VariableRole::Foreign),
            "policy_rate" => Ok(VariableRole::PolicyRate),
            "exchange_rate" => Ok(VariableRole::ExchangeRate),
            "other" => Ok(VariableRole::Other),
            other => Err(Error::InvalidSpec(format!("unknown role `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColumnSpec {
    pub name: String,
    pub transform: Transform,
    pub role: VariableRole,
}

impl ColumnSpec {
    pub fn new(name: impl Into<String>, transform: Transform, role: VariableRole) -> Self {
        ColumnSpec {
            name: name.into(),
            transform,
            role,
        }
    }

    pub fn level(name: impl Into<String>) -> Self {
        ColumnSpec::new(name, Transform::Level, VariableRole::Other)
    }
}

/// Aligned monthly time-series matrix. Row t is month `start + t`.
#[derive(Debug, Clone)]
pub struct MonthlyPanel {
    start: Month,
    columns: Vec<ColumnSpec>,
    /// T x n, post-transformation.
    values: DMatrix<f64>,
}

impl MonthlyPanel {
    pub fn new(start: Month, columns: Vec<ColumnSpec>, values: DMatrix<f64>) -> Result<Self> {
        if values.nrows() == 0 || values.ncols() == 0 {
            return Err(Error::EmptyInput("panel must be at least 1x1".into()));
        }
        if columns.len() != values.ncols() {
            return Err(Error::InvalidSpec(format!(
                "{} column specs for {} value columns",
                columns.len(),
                values.ncols()
            )));
        }
        if let Some((i, j)) = values
            .iter()
            .position(|v| !v.is_finite())
            .map(|pos| (pos % values.nrows(), pos / values.nrows()))
        {
            return Err(Error::BadValue {
                column: columns[j].name.clone(),
                row: i,
                raw: format!("{}", values[(i, j)]),
            });
        }
        Ok(MonthlyPanel {
            start,
            columns,
            values,
        })
    }

    pub fn start(&self) -> Month {
        self.start
    }

    pub fn len(&self) -> usize {
        self.values.nrows()
    }

    pub fn is_empty(&self) -> bool {
        self.values.nrows() == 0
    }

    pub fn n_vars(&self) -> usize {
        self.values.ncols()
    }

    pub fn columns(&self) -> &[ColumnSpec] {
        &self.columns
    }

    pub fn names(&self) -> Vec<String> {
        self.columns.iter().map(|c| c.name.clone()).collect()
    }

    pub fn values(&self) -> &DMatrix<f64> {
        &self.values
    }

    pub fn month_at(&self, row: usize) -> Month {
        self.start.plus(row as i64)
    }

    pub fn end(&self) -> Month {
        self.month_at(self.len() - 1)
    }

    pub fn column_index(&self, name: &str) -> Result<usize> {
        self.columns
            .iter()
            .position(|c| c.name == name)
            .ok_or_else(|| Error::MissingColumn {
                column: name.to_string(),
                context: "panel".to_string(),
            })
    }

    pub fn column_values(&self, j: usize) -> Vec<f64> {
        self.values.column(j).iter().copied().collect()
    }

    /// Restricts the panel to `[start, end]` (inclusive), intersected with
    /// the available sample. Data outside the window is dropped entirely.
    pub fn window(&self, start: Option<Month>, end: Option<Month>) -> Result<MonthlyPanel> {
        let lo = start.unwrap_or(self.start).max(self.start);
        let hi = end.unwrap_or(self.end()).min(self.end());
        if hi < lo {
            return Err(Error::EmptyInput(format!(
                "window {lo}..{hi} does not intersect sample {}..{}",
                self.start,
                self.end()
            )));
        }
        let first = lo.diff(self.start) as usize;
        let rows = hi.diff(lo) as usize + 1;
        Ok(MonthlyPanel {
            start: lo,
            columns: self.columns.clone(),
            values: self.values.rows(first, rows).into_owned(),
        })
    }

    /// Canonical CSV: header `date,<names...>`, months as `YYYY-MM`, values
    /// printed with shortest round-trip formatting so reloads are bit-exact.
    pub fn to_csv_string(&self) -> String {
        let mut out = String::from("date");
        for c in &self.columns {
            out.push(',');
            out.push_str(&c.name);
        }
        out.push('\n');
        for t in 0..self.len() {
            out.push_str(&self.month_at(t).to_string());
            for j in 0..self.n_vars() {
                out.push(',');
                out.push_str(&format!("{}", self.values[(t, j)]));
            }
            out.push('\n');
        }
        out
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut f = std::fs::File::create(path).map_err(|e| Error::io(path.display(), e))?;
        f.write_all(self.to_csv_string().as_bytes())
            .map_err(|e| Error::io(path.display(), e))
    }
}

/// Loads and transforms the declared columns from a panel CSV.
///
/// The file's first column must be `date` in `YYYY-MM`; months must be
/// consecutive. Columns not named in `schema` are ignored.
pub fn load_panel(path: &Path, schema: &[ColumnSpec]) -> Result<MonthlyPanel> {
    let raw = std::fs::read_to_string(path).map_err(|e| Error::io(path.display(), e))?;
    parse_panel(&raw, schema)
}

pub fn parse_panel(raw: &str, schema: &[ColumnSpec]) -> Result<MonthlyPanel> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(raw.as_bytes());
    let headers = reader
        .headers()
        .map_err(|e| Error::EmptyInput(format!("unreadable header: {e}")))?
        .clone();
    if headers.is_empty() || headers.get(0) != Some("date") {
        return Err(Error::MissingColumn {
            column: "date".into(),
            context: "panel csv header".into(),
        });
    }
    let mut col_pos = Vec::with_capacity(schema.len());
    for spec in schema {
        let pos = headers
            .iter()
            .position(|h| h == spec.name)
            .ok_or_else(|| Error::MissingColumn {
                column: spec.name.clone(),
                context: "panel csv header".into(),
            })?;
        col_pos.push(pos);
    }

    let mut months: Vec<Month> = Vec::new();
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (row_idx, record) in reader.records().enumerate() {
        let record = record.map_err(|e| Error::BadValue {
            column: "<row>".into(),
            row: row_idx,
            raw: e.to_string(),
        })?;
        let month: Month = record
            .get(0)
            .ok_or_else(|| Error::EmptyInput("row without date".into()))?
            .parse()?;
        if let Some(&prev) = months.last() {
            if month <= prev {
                return Err(Error::NonMonotoneDates {
                    prev: prev.to_string(),
                    next: month.to_string(),
                });
            }
            if month.diff(prev) != 1 {
                return Err(Error::MonthGap {
                    prev: prev.to_string(),
                    next: month.to_string(),
                });
            }
        }
        let mut row = Vec::with_capacity(schema.len());
        for (spec, &pos) in schema.iter().zip(&col_pos) {
            let raw_val = record.get(pos).unwrap_or("");
            let value: f64 = raw_val.trim().parse().map_err(|_| Error::BadValue {
                column: spec.name.clone(),
                row: row_idx,
                raw: raw_val.to_string(),
            })?;
            if !value.is_finite() {
                return Err(Error::BadValue {
                    column: spec.name.clone(),
                    row: row_idx,
                    raw: raw_val.to_string(),
                });
            }
            let transformed = match spec.transform {
                Transform::Level | Transform::Percent => value,
                Transform::LogTimes100 => {
                    if value <= 0.0 {
                        return Err(Error::NonPositiveLog {
                            column: spec.name.clone(),
                            date: month.to_string(),
                            value,
                        });
                    }
                    100.0 * value.ln()
                }
            };
            row.push(transformed);
        }
        months.push(month);
        rows.push(row);
    }
    if months.is_empty() {
        return Err(Error::EmptyInput("panel csv has no data rows".into()));
    }
    let values = DMatrix::from_fn(rows.len(), schema.len(), |i, j| rows[i][j]);
    MonthlyPanel::new(months[0], schema.to_vec(), values)
}

/// Announcement-dated surprise pairs: interest-rate surprise in basis
/// points, equity surprise in percent.
#[derive(Debug, Clone)]
pub struct EventSurprises {
    events: Vec<SurpriseEvent>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurpriseEvent {
    pub date: NaiveDate,
    pub ir: f64,
    pub eq: f64,
}

impl EventSurprises {
    pub fn new(events: Vec<SurpriseEvent>) -> Result<Self> {
        for pair in events.windows(2) {
            if pair[1].date <= pair[0].date {
                return Err(Error::NonMonotoneDates {
                    prev: pair[0].date.to_string(),
                    next: pair[1].date.to_string(),
                });
            }
        }
        if let Some(ev) = events.iter().find(|e| !e.ir.is_finite() || !e.eq.is_finite()) {
            return Err(Error::BadValue {
                column: "surprise".into(),
                row: 0,
                raw: format!("{} at {}", ev.ir, ev.date),
            });
        }
        Ok(EventSurprises { events })
    }

    pub fn events(&self) -> &[SurpriseEvent] {
        &self.events
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    pub fn dates(&self) -> Vec<NaiveDate> {
        self.events.iter().map(|e| e.date).collect()
    }

    /// Keeps events whose calendar month lies in `[start, end]`.
    pub fn window(&self, start: Month, end: Month) -> EventSurprises {
        EventSurprises {
            events: self
                .events
                .iter()
                .filter(|e| {
                    let m = Month::containing(e.date);
                    m >= start && m <= end
                })
                .copied()
                .collect(),
        }
    }

    pub fn to_csv_string(&self) -> String {
        let mut out = String::from("date,ir,eq\n");
        for e in &self.events {
            out.push_str(&format!("{},{},{}\n", e.date, e.ir, e.eq));
        }
        out
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut f = std::fs::File::create(path).map_err(|e| Error::io(path.display(), e))?;
        f.write_all(self.to_csv_string().as_bytes())
            .map_err(|e| Error::io(path.display(), e))
    }
}

/// Loads `date,ir,eq` rows with `YYYY-MM-DD` dates, strictly increasing.
pub fn load_surprises(path: &Path) -> Result<EventSurprises> {
    let raw = std::fs::read_to_string(path).map_err(|e| Error::io(path.display(), e))?;
    parse_surprises(&raw)
}

pub fn parse_surprises(raw: &str) -> Result<EventSurprises> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(raw.as_bytes());
    let headers = reader
        .headers()
        .map_err(|e| Error::EmptyInput(format!("unreadable header: {e}")))?
        .clone();
    for (idx, want) in ["date", "ir", "eq"].iter().enumerate() {
        if headers.get(idx) != Some(want) {
            return Err(Error::MissingColumn {
                column: (*want).to_string(),
                context: "surprises csv header".into(),
            });
        }
    }
    let mut events = Vec::new();
    for (row_idx, record) in reader.records().enumerate() {
        let record = record.map_err(|e| Error::BadValue {
            column: "<row>".into(),
            row: row_idx,
            raw: e.to_string(),
        })?;
        let date_raw = record.get(0).unwrap_or("");
        let date = NaiveDate::parse_from_str(date_raw, "%Y-%m-%d").map_err(|e| Error::BadDate {
            raw: date_raw.to_string(),
            reason: e.to_string(),
        })?;
        let parse_num = |idx: usize, name: &str| -> Result<f64> {
            let raw_val = record.get(idx).unwrap_or("");
            raw_val.trim().parse().map_err(|_| Error::BadValue {
                column: name.to_string(),
                row: row_idx,
                raw: raw_val.to_string(),
            })
        };
        events.push(SurpriseEvent {
            date,
            ir: parse_num(1, "ir")?,
            eq: parse_num(2, "eq")?,
        });
    }
    if events.is_empty() {
        return Err(Error::EmptyInput("surprises csv has no data rows".into()));
    }
    EventSurprises::new(events)
}

/// Deterministic regressors for a T-month sample starting at `start`.
#[derive(Debug, Clone)]
pub struct Deterministics {
    pub trend: Vec<f64>,
    pub covid: Vec<f64>,
}

/// Trend is 1..=T; the COVID indicator is 1 exactly for months in
/// Mar-2020..=Jun-2021 that fall inside the sample.
pub fn build_deterministics(start: Month, t: usize) -> Deterministics {
    let covid_lo = Month::new(COVID_START.0, COVID_START.1).unwrap();
    let covid_hi = Month::new(COVID_END.0, COVID_END.1).unwrap();
    let mut trend = Vec::with_capacity(t);
    let mut covid = Vec::with_capacity(t);
    for i in 0..t {
        let m = start.plus(i as i64);
        trend.push((i + 1) as f64);
        covid.push(if m >= covid_lo && m <= covid_hi { 1.0 } else { 0.0 });
    }
    Deterministics { trend, covid }
}

/// A monthly-frequency shock pair produced by aggregating event-level
/// values: each month's value is the sum over that month's events, zero
/// for months without events.
#[derive(Debug, Clone)]
pub struct MonthlyShocks {
    pub start: Month,
    pub mp: Vec<f64>,
    pub info: Vec<f64>,
}

/// Sums event-dated (mp, info) values into calendar months over
/// `[start, end]`. Every event must fall inside the range.
pub fn aggregate_events_to_monthly(
    dates: &[NaiveDate],
    mp: &[f64],
    info: &[f64],
    start: Month,
    end: Month,
) -> Result<MonthlyShocks> {
    assert_eq!(dates.len(), mp.len());
    assert_eq!(dates.len(), info.len());
    if end < start {
        return Err(Error::EmptyInput(format!("bad range {start}..{end}")));
    }
    let t = (end.diff(start) + 1) as usize;
    let mut mp_out = vec![0.0; t];
    let mut info_out = vec![0.0; t];
    for (i, date) in dates.iter().enumerate() {
        let m = Month::containing(*date);
        if m < start || m > end {
            return Err(Error::EventOutsideRange {
                date: date.to_string(),
                start: start.to_string(),
                end: end.to_string(),
            });
        }
        let idx = m.diff(start) as usize;
        mp_out[idx] += mp[i];
        info_out[idx] += info[i];
    }
    Ok(MonthlyShocks {
        start,
        mp: mp_out,
        info: info_out,
    })
}

impl fmt::Display for MonthlyPanel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "MonthlyPanel({} vars x {} months from {})",
            self.n_vars(),
            self.len(),
            self.start
        )
    }
}
