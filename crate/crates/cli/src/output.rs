use std::fs::File;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::{io_error, CliError, Result};

/// Full-precision rendering used in every CSV.
pub fn num(v: f64) -> String {
    format!("{v:.16e}")
}

pub struct CsvOut {
    path: PathBuf,
    writer: csv::Writer<File>,
}

impl CsvOut {
    pub fn create(dir: &Path, name: &str, header: &[String]) -> Result<Self> {
        let path = dir.join(name);
        let file = File::create(&path).map_err(io_error(&path))?;
        let mut out = CsvOut { path, writer: csv::Writer::from_writer(file) };
        out.row(header.iter().cloned())?;
        Ok(out)
    }

    pub fn row<I: IntoIterator<Item = String>>(&mut self, fields: I) -> Result<()> {
        self.writer.write_record(fields).map_err(|e| self.csv_error(e))
    }

    pub fn finish(mut self) -> Result<()> {
        self.writer.flush().map_err(io_error(&self.path))
    }

    fn csv_error(&self, e: csv::Error) -> CliError {
        CliError::Io { path: self.path.clone(), source: std::io::Error::other(e) }
    }
}

pub fn write_json<T: Serialize>(dir: &Path, name: &str, value: &T) -> Result<()> {
    let path = dir.join(name);
    let text = serde_json::to_string_pretty(value).expect("report serializes");
    std::fs::write(&path, text + "\n").map_err(io_error(&path))
}

pub fn ensure_dir(dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(io_error(dir))
}
