//! On-disk formats: split real/imaginary matrices, channel tables, CSV.

use std::fs;
use std::path::Path;

use cgq_core::channel::BasisTable;
use cgq_core::state::Tolerances;
use cgq_core::{ComplexMatrix, DensityMatrix};
use num_complex::Complex64;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

/// A square complex matrix as `{dim, re, im}`; `im` defaults to zero.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateFile {
    pub dim: usize,
    pub re: Vec<Vec<f64>>,
    #[serde(default)]
    pub im: Option<Vec<Vec<f64>>>,
}

impl StateFile {
    pub fn from_matrix(m: &ComplexMatrix) -> Self {
        let dim = m.rows();
        let part = |f: fn(&Complex64) -> f64| -> Vec<Vec<f64>> {
            (0..dim)
                .map(|i| (0..dim).map(|j| f(&m[(i, j)])).collect())
                .collect()
        };
        Self {
            dim,
            re: part(|z| z.re),
            im: Some(part(|z| z.im)),
        }
    }

    pub fn to_matrix(&self) -> Result<ComplexMatrix> {
        let n = self.dim;
        let shape_ok = |rows: &Vec<Vec<f64>>| rows.len() == n && rows.iter().all(|r| r.len() == n);
        if n == 0 || !shape_ok(&self.re) || !self.im.as_ref().is_none_or(shape_ok) {
            return Err(CliError::Usage(format!(
                "matrix file does not hold a {n}x{n} matrix"
            )));
        }
        Ok(ComplexMatrix::from_fn(n, n, |i, j| {
            let im = self.im.as_ref().map_or(0.0, |m| m[i][j]);
            Complex64::new(self.re[i][j], im)
        }))
    }

    /// Parses a density matrix, validating it unless `tol` is `None`.
    pub fn to_density(&self, tol: Option<&Tolerances>) -> Result<DensityMatrix> {
        let m = self.to_matrix()?;
        Ok(match tol {
            Some(tol) => DensityMatrix::with_tolerances(m, tol)?,
            None => DensityMatrix::new_unchecked(m),
        })
    }
}

/// Images of the matrix units `|i><j|`, listed with `i` major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TableFile {
    pub dim_in: usize,
    pub dim_out: usize,
    pub images: Vec<StateFile>,
}

impl TableFile {
    pub fn from_table(table: &BasisTable) -> Self {
        Self {
            dim_in: table.dim_in(),
            dim_out: table.dim_out(),
            images: table.outputs().iter().map(StateFile::from_matrix).collect(),
        }
    }

    pub fn to_table(&self) -> Result<BasisTable> {
        let outputs = self
            .images
            .iter()
            .map(StateFile::to_matrix)
            .collect::<Result<Vec<_>>>()?;
        Ok(BasisTable::new(self.dim_in, self.dim_out, outputs)?)
    }
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|source| CliError::Json {
        path: path.to_path_buf(),
        source,
    })
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable report");
    s.push('\n');
    s
}

/// 17 significant digits.
pub fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

/// Comma-separated, `\n`-terminated CSV with a header row.
pub fn csv_string(header: &[&str], rows: impl IntoIterator<Item = Vec<f64>>) -> Result<String> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    w.write_record(header)?;
    for row in rows {
        w.write_record(row.into_iter().map(fmt_float))?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| CliError::Usage(format!("csv buffer: {e}")))?;
    Ok(String::from_utf8(bytes).expect("ascii output"))
}
