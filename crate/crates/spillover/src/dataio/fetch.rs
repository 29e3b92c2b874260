//! Remote series download from a FRED-style CSV endpoint.
//!
//! The endpoint is a URL template with `{series_id}` and `{api_key}`
//! placeholders; the response body is `date,value` CSV. Rows carrying the
//! missing-value marker are skipped and counted, never imputed. Nothing is
//! cached to disk.

use crate::error::{Error, Result};
use chrono::NaiveDate;
use reqwest::blocking::Client;
use std::time::Duration;

/// Default missing-value marker used by the target API.
pub const DEFAULT_MISSING_MARKER: &str = ".";

/// Network attempts per series before giving up.
const MAX_ATTEMPTS: u32 = 3;

#[derive(Debug, Clone)]
pub struct FetchConfig {
    /// URL template, e.g. `https://host/obs?series_id={series_id}&api_key={api_key}&file_type=csv`.
    pub endpoint_template: String,
    pub api_key: String,
    pub missing_marker: String,
}

impl FetchConfig {
    pub fn new(endpoint_template: impl Into<String>, api_key: impl Into<String>) -> Self {
        FetchConfig {
            endpoint_template: endpoint_template.into(),
            api_key: api_key.into(),
            missing_marker: DEFAULT_MISSING_MARKER.to_string(),
        }
    }

    fn url(&self, series_id: &str) -> String {
        self.endpoint_template
            .replace("{series_id}", series_id)
            .replace("{api_key}", &self.api_key)
    }

    /// Endpoint string safe to embed in errors and logs.
    fn redacted_url(&self, series_id: &str) -> String {
        self.endpoint_template
            .replace("{series_id}", series_id)
            .replace("{api_key}", "<redacted>")
    }
}

/// One downloaded series, already parsed.
#[derive(Debug, Clone)]
pub struct RawSeries {
    pub series_id: String,
    pub rows: Vec<(NaiveDate, f64)>,
    /// Rows dropped because their value equalled the missing marker.
    pub skipped_missing: usize,
}

/// Downloads and parses one series. Transport failures and 5xx responses
/// are retried up to three attempts; a 404 maps to a not-found error
/// immediately. The API key never appears in returned errors.
pub fn fetch_remote_series(cfg: &FetchConfig, series_id: &str) -> Result<RawSeries> {
    if cfg.api_key.is_empty() {
        return Err(Error::Config("remote fetch requires a non-empty api key".into()));
    }
    let client = Client::builder()
        .timeout(Duration::from_secs(30))
        .build()
        .map_err(|e| Error::Transport {
            endpoint: cfg.redacted_url(series_id),
            reason: e.to_string(),
        })?;
    fetch_with_client(&client, cfg, series_id)
}

pub fn fetch_with_client(client: &Client, cfg: &FetchConfig, series_id: &str) -> Result<RawSeries> {
    let url = cfg.url(series_id);
    let shown = cfg.redacted_url(series_id);
    let mut last_reason = String::new();
    for attempt in 1..=MAX_ATTEMPTS {
        match client.get(&url).send() {
            Ok(resp) => {
                let status = resp.status();
                if status.as_u16() == 404 {
                    return Err(Error::SeriesNotFound { endpoint: shown });
                }
                if status.is_server_error() {
                    last_reason = format!("HTTP {status}");
                } else if !status.is_success() {
                    return Err(Error::HttpStatus {
                        status: status.as_u16(),
                        endpoint: shown,
                    });
                } else {
                    let body = resp.text().map_err(|e| Error::Transport {
                        endpoint: shown.clone(),
                        reason: e.to_string(),
                    })?;
                    let (rows, skipped_missing) =
                        parse_series_payload(&body, &cfg.missing_marker, &shown)?;
                    if rows.is_empty() {
                        return Err(Error::EmptyRemoteResult { endpoint: shown });
                    }
                    return Ok(RawSeries {
                        series_id: series_id.to_string(),
                        rows,
                        skipped_missing,
                    });
                }
            }
            Err(e) => last_reason = e.to_string(),
        }
        if attempt < MAX_ATTEMPTS {
            std::thread::sleep(Duration::from_millis(50 * attempt as u64));
        }
    }
    Err(Error::Transport {
        endpoint: shown,
        reason: format!("{last_reason} after {MAX_ATTEMPTS} attempts"),
    })
}

/// Parses a `date,value` CSV body. Returns the kept rows and the count of
/// rows skipped for carrying the missing marker.
pub fn parse_series_payload(
    payload: &str,
    missing_marker: &str,
    endpoint: &str,
) -> Result<(Vec<(NaiveDate, f64)>, usize)> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .from_reader(payload.as_bytes());
    let headers = reader.headers().map_err(|e| Error::MalformedPayload {
        endpoint: endpoint.to_string(),
        reason: format!("unreadable header: {e}"),
    })?;
    if headers.len() < 2 {
        return Err(Error::MalformedPayload {
            endpoint: endpoint.to_string(),
            reason: format!("expected `date,value` header, got {} columns", headers.len()),
        });
    }
    let mut rows = Vec::new();
    let mut skipped = 0usize;
    for (i, record) in reader.records().enumerate() {
        let record = record.map_err(|e| Error::MalformedPayload {
            endpoint: endpoint.to_string(),
            reason: format!("row {i}: {e}"),
        })?;
        if record.len() < 2 {
            return Err(Error::MalformedPayload {
                endpoint: endpoint.to_string(),
                reason: format!("row {i} has {} fields", record.len()),
            });
        }
        let date_raw = record.get(0).unwrap_or("");
        let value_raw = record.get(1).unwrap_or("").trim();
        if value_raw == missing_marker || value_raw.is_empty() {
            skipped += 1;
            continue;
        }
        let date = NaiveDate::parse_from_str(date_raw, "%Y-%m-%d").map_err(|e| {
            Error::MalformedPayload {
                endpoint: endpoint.to_string(),
                reason: format!("row {i} date `{date_raw}`: {e}"),
            }
        })?;
        let value: f64 = value_raw.parse().map_err(|_| Error::MalformedPayload {
            endpoint: endpoint.to_string(),
            reason: format!("row {i} value `{value_raw}` is not numeric"),
        })?;
        rows.push((date, value));
    }
    Ok((rows, skipped))
}
