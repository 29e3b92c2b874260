//! Output-directory bookkeeping. Every artifact is written atomically
//! (temp file in the same directory, then rename) so a crash or a parallel
//! reader never sees a half-written file, and every writer routes through
//! one place so a run can report exactly which files it produced.
//!
//! Artifacts are pure functions of config and seed: no timestamps, no
//! hostnames, nothing that would stop two identical runs from producing
//! byte-identical directories.

use std::path::{Path, PathBuf};

use crate::band::IrfBand;
use crate::error::{Error, Result};
use crate::svg::fan_chart_svg;

/// Collects artifacts into one directory, creating it on first use.
#[derive(Debug)]
pub struct ArtifactWriter {
    dir: PathBuf,
    files: Vec<PathBuf>,
}

impl ArtifactWriter {
    pub fn new(dir: &Path) -> Result<ArtifactWriter> {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir.display(), e))?;
        Ok(ArtifactWriter {
            dir: dir.to_path_buf(),
            files: Vec::new(),
        })
    }

    /// Writes one named artifact; `name` is a plain file name, not a path.
    pub fn write(&mut self, name: &str, contents: &str) -> Result<PathBuf> {
        let path = self.dir.join(name);
        write_atomic(&path, contents)?;
        self.files.push(path.clone());
        Ok(path)
    }

    /// Writes a response band as its CSV table plus one fan chart per
    /// variable, named `irf_<engine>_<variant>.csv` and
    /// `<variable>_<engine>_<variant>.svg`.
    pub fn write_band(&mut self, band: &IrfBand) -> Result<()> {
        let engine = sanitize(&band.meta.engine);
        let variant = sanitize(&band.meta.variant);
        self.write(&format!("irf_{engine}_{variant}.csv"), &band.to_csv_string())?;
        for (i, name) in band.variables().iter().enumerate() {
            let file = format!("{}_{engine}_{variant}.svg", sanitize(name));
            self.write(&file, &fan_chart_svg(band, i))?;
        }
        Ok(())
    }

    /// Every file written so far, in write order.
    pub fn files(&self) -> &[PathBuf] {
        &self.files
    }

    pub fn into_files(self) -> Vec<PathBuf> {
        self.files
    }
}

/// Write-then-rename so the final path never holds partial content.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let file_name = path
        .file_name()
        .and_then(|n| n.to_str())
        .ok_or_else(|| Error::Config(format!("bad artifact path `{}`", path.display())))?;
    let tmp = path.with_file_name(format!(".{file_name}.tmp"));
    std::fs::write(&tmp, contents).map_err(|e| Error::io(tmp.display(), e))?;
    std::fs::rename(&tmp, path).map_err(|e| Error::io(path.display(), e))
}

/// Maps arbitrary variable names onto safe file-name material: alphanumerics
/// pass through lowercased, everything else collapses to `_`.
pub fn sanitize(name: &str) -> String {
    let mut out = String::with_capacity(name.len());
    for c in name.chars() {
        if c.is_ascii_alphanumeric() || c == '-' || c == '_' {
            out.extend(c.to_lowercase());
        } else {
            out.push('_');
        }
    }
    if out.is_empty() { "unnamed".into() } else { out }
}

/// Flat `key = value` rendering used by the run-metadata artifact.
pub fn render_meta(pairs: &[(String, String)]) -> String {
    let mut out = String::new();
    for (k, v) in pairs {
        out.push_str(k);
        out.push_str(" = ");
        out.push_str(v);
        out.push('\n');
    }
    out
}
