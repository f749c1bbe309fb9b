//! Tabular output.
//!
//! CSV files start with one comment line `# bjj <table> schema=<v> columns=<k>`
//! followed by the header row. Floats are written with 17 significant digits,
//! non-finite values as `nan`/`inf`/`-inf`. JSON files hold the same table as
//! `{schema, table, columns, rows}` with non-finite values as `null`.

use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::config::Format;
use crate::{CliError, Result};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Cell {
    Num(f64),
    Text(String),
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Self::Num(x)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Self::Text(s.to_owned())
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Self::Text(s)
    }
}

impl Cell {
    fn to_csv(&self) -> String {
        match self {
            Self::Num(x) => format_float(*x),
            Self::Text(s) => s.clone(),
        }
    }
}

pub fn format_float(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf" } else { "-inf" }.into()
    } else {
        format!("{x:.16e}")
    }
}

/// A table with a fixed column list; every row has exactly that many cells.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Table {
    #[serde(rename = "table")]
    pub name: &'static str,
    pub schema: u32,
    pub columns: &'static [&'static str],
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(name: &'static str, columns: &'static [&'static str]) -> Self {
        Self {
            name,
            schema: SCHEMA_VERSION,
            columns,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(
            row.len(),
            self.columns.len(),
            "row width does not match the {} schema",
            self.name
        );
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<Vec<&Cell>> {
        let idx = self.columns.iter().position(|c| *c == name)?;
        Some(self.rows.iter().map(|r| &r[idx]).collect())
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(
            w,
            "# bjj {} schema={} columns={}",
            self.name,
            self.schema,
            self.columns.len()
        )?;
        let mut csv = csv::Writer::from_writer(w);
        csv.write_record(self.columns)?;
        for row in &self.rows {
            csv.write_record(row.iter().map(Cell::to_csv))?;
        }
        csv.flush()
    }

    pub fn write_json<W: Write>(&self, mut w: W) -> io::Result<()> {
        serde_json::to_writer_pretty(&mut w, self)?;
        writeln!(w)
    }
}

/// Files written during one run. Unless [`OutputSession::finish`] is called,
/// dropping the session deletes them, so a failed run leaves nothing behind.
#[derive(Debug)]
pub struct OutputSession {
    dir: PathBuf,
    format: Format,
    written: Vec<PathBuf>,
    finished: bool,
}

impl OutputSession {
    pub fn create(dir: &Path, format: Format) -> Result<Self> {
        fs::create_dir_all(dir).map_err(|source| CliError::Io {
            path: dir.to_owned(),
            source,
        })?;
        Ok(Self {
            dir: dir.to_owned(),
            format,
            written: Vec::new(),
            finished: false,
        })
    }

    pub fn write(&mut self, stem: &str, table: &Table) -> Result<PathBuf> {
        let path = self.dir.join(format!("{stem}.{}", self.format.extension()));
        let partial = self
            .dir
            .join(format!("{stem}.{}.partial", self.format.extension()));
        let io_err = |source| CliError::Io {
            path: path.clone(),
            source,
        };
        let result = File::create(&partial).and_then(|f| {
            let mut w = BufWriter::new(f);
            match self.format {
                Format::Csv => table.write_csv(&mut w)?,
                Format::Json => table.write_json(&mut w)?,
            }
            w.into_inner().map_err(|e| e.into_error())?.sync_all()
        });
        if let Err(e) = result.and_then(|_| fs::rename(&partial, &path)) {
            let _ = fs::remove_file(&partial);
            return Err(io_err(e));
        }
        self.written.push(path.clone());
        Ok(path)
    }

    pub fn finish(mut self) -> Vec<PathBuf> {
        self.finished = true;
        std::mem::take(&mut self.written)
    }
}

impl Drop for OutputSession {
    fn drop(&mut self) {
        if !self.finished {
            for p in &self.written {
                let _ = fs::remove_file(p);
            }
        }
    }
}
