//! Impulse-response band container shared by both estimation engines.

use crate::error::{Error, Result};
use nalgebra::DMatrix;
use std::io::Write;
use std::path::Path;

/// Provenance stamped on every exported band.
#[derive(Debug, Clone)]
pub struct BandMeta {
    /// Which estimator produced the band: `bvar` or `local_projection`.
    pub engine: String,
    /// Shock variant the band responds to: `pure_mp`, `info`, `raw_hfi`, ...
    pub variant: String,
    /// Sample standard deviation the shock was divided by before entering
    /// the regression; responses are per one standard deviation of shock.
    pub shock_scale: f64,
}

/// Pointwise lower/median/upper response paths per variable, horizons 0..H.
#[derive(Debug, Clone)]
pub struct IrfBand {
    variables: Vec<String>,
    /// n × (H+1) each; column h is the response at horizon h.
    lo: DMatrix<f64>,
    median: DMatrix<f64>,
    hi: DMatrix<f64>,
    pub meta: BandMeta,
}

impl IrfBand {
    pub fn new(
        variables: Vec<String>,
        lo: DMatrix<f64>,
        median: DMatrix<f64>,
        hi: DMatrix<f64>,
        meta: BandMeta,
    ) -> Result<Self> {
        let n = variables.len();
        for (name, m) in [("lo", &lo), ("median", &median), ("hi", &hi)] {
            if m.nrows() != n || m.ncols() != lo.ncols() || m.ncols() == 0 {
                return Err(Error::InvalidSpec(format!(
                    "band {name} has shape {}x{}, want {}x{}",
                    m.nrows(),
                    m.ncols(),
                    n,
                    lo.ncols()
                )));
            }
        }
        for i in 0..n {
            for h in 0..lo.ncols() {
                if !(lo[(i, h)] <= median[(i, h)] && median[(i, h)] <= hi[(i, h)]) {
                    return Err(Error::InvalidSpec(format!(
                        "band ordering violated for {} at horizon {h}: {} / {} / {}",
                        variables[i],
                        lo[(i, h)],
                        median[(i, h)],
                        hi[(i, h)]
                    )));
                }
            }
        }
        Ok(IrfBand {
            variables,
            lo,
            median,
            hi,
            meta,
        })
    }

    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    /// Largest horizon H; paths have H+1 points.
    pub fn horizon(&self) -> usize {
        self.lo.ncols() - 1
    }

    pub fn lo(&self) -> &DMatrix<f64> {
        &self.lo
    }

    pub fn median(&self) -> &DMatrix<f64> {
        &self.median
    }

    pub fn hi(&self) -> &DMatrix<f64> {
        &self.hi
    }

    /// `variable,horizon,lo,median,hi` rows grouped by variable.
    pub fn to_csv_string(&self) -> String {
        let mut out = String::from("variable,horizon,lo,median,hi\n");
        for (i, name) in self.variables.iter().enumerate() {
            for h in 0..=self.horizon() {
                out.push_str(&format!(
                    "{},{},{},{},{}\n",
                    name,
                    h,
                    self.lo[(i, h)],
                    self.median[(i, h)],
                    self.hi[(i, h)]
                ));
            }
        }
        out
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut f = std::fs::File::create(path).map_err(|e| Error::io(path.display(), e))?;
        f.write_all(self.to_csv_string().as_bytes())
            .map_err(|e| Error::io(path.display(), e))
    }
}
