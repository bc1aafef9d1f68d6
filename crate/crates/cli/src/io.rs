use std::fs;
use std::io::Write;
use std::path::Path;

use nalgebra::{DMatrix, DVector};
use sha2::{Digest, Sha256};
use topolasso::Dataset;

use crate::error::{CliError, CliResult};

/// Predictors and response read from a headed CSV file.
#[derive(Clone, Debug)]
pub struct CsvData {
    pub predictors: Vec<String>,
    pub response: String,
    pub dataset: Dataset,
}

/// Reads a CSV with a header row. `response` names the response column;
/// every other column is a predictor, in header order.
pub fn read_csv(path: &Path, response: &str) -> CliResult<CsvData> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    let headers: Vec<String> = reader
        .headers()
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?
        .iter()
        .map(str::to_string)
        .collect();
    let yi = headers.iter().position(|h| h == response).ok_or_else(|| {
        CliError::Input(format!("no column named `{response}`; columns are {}", headers.join(", ")))
    })?;
    let predictors: Vec<String> = headers.iter().enumerate().filter(|(i, _)| *i != yi).map(|(_, h)| h.clone()).collect();
    if predictors.is_empty() {
        return Err(CliError::Input("the file has no predictor columns".into()));
    }
    let mut xs: Vec<f64> = Vec::new();
    let mut ys: Vec<f64> = Vec::new();
    for (row, record) in reader.records().enumerate() {
        let record = record.map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
        if record.len() != headers.len() {
            return Err(CliError::Input(format!(
                "row {}: expected {} fields, found {}",
                row + 1,
                headers.len(),
                record.len()
            )));
        }
        for (col, cell) in record.iter().enumerate() {
            let v: f64 = cell.parse().ok().filter(|v: &f64| v.is_finite()).ok_or_else(|| {
                CliError::Input(format!("row {}, column `{}`: `{cell}` is not a finite number", row + 1, headers[col]))
            })?;
            if col == yi {
                ys.push(v);
            } else {
                xs.push(v);
            }
        }
    }
    let n = ys.len();
    let x = DMatrix::from_row_slice(n, predictors.len(), &xs);
    let dataset = Dataset::new(x, DVector::from_vec(ys))?;
    Ok(CsvData { predictors, response: response.to_string(), dataset })
}

pub fn read_text(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

pub fn sha256_file(path: &Path) -> CliResult<String> {
    let bytes = fs::read(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    Ok(format!("{:x}", Sha256::digest(&bytes)))
}

/// Writes through a sibling temporary file and a rename, so readers never
/// see a partial file.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> CliResult<()> {
    let io = |e: std::io::Error| CliError::Io(format!("{}: {e}", path.display()));
    let name = path.file_name().ok_or_else(|| CliError::Io(format!("{} has no file name", path.display())))?;
    let tmp = path.with_file_name(format!(".{}.tmp-{}", name.to_string_lossy(), std::process::id()));
    let mut f = fs::File::create(&tmp).map_err(io)?;
    f.write_all(bytes).map_err(io)?;
    f.sync_all().map_err(io)?;
    drop(f);
    fs::rename(&tmp, path).map_err(io)
}
