//! Scan grids and the CSV table carrier.
//!
//! CSV layout: `#`-prefixed metadata lines (key=value), one header row, then
//! data rows. Floats are printed with 17 significant digits so every table
//! re-parses to bit-identical values.

use std::io::{self, Write};

use crate::error::{Error, Result};

/// Strictly monotone 1-D scan grid; `count == 1` is the degenerate grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    min: f64,
    max: f64,
    count: usize,
}

impl Grid {
    pub fn new(min: f64, max: f64, count: usize) -> Result<Self> {
        if !min.is_finite() || !max.is_finite() {
            return Err(Error::InvalidArgument("grid bounds must be finite".into()));
        }
        if count == 0 {
            return Err(Error::InvalidArgument(
                "grid needs at least one point".into(),
            ));
        }
        if count == 1 && min != max {
            return Err(Error::InvalidArgument(
                "a one-point grid needs min == max (write it as a single value)".into(),
            ));
        }
        if count > 1 && !(min < max) {
            return Err(Error::InvalidArgument(format!(
                "grid needs min < max, got {min}:{max}"
            )));
        }
        Ok(Self { min, max, count })
    }

    pub fn singleton(v: f64) -> Result<Self> {
        Self::new(v, v, 1)
    }

    /// Parses `min:max:count`, or a single value as a degenerate grid.
    pub fn parse(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let num = |x: &str| {
            x.trim()
                .parse::<f64>()
                .map_err(|e| Error::InvalidArgument(format!("bad grid number '{x}': {e}")))
        };
        match parts.as_slice() {
            [v] => Self::singleton(num(v)?),
            [min, max, count] => {
                let n = count.trim().parse::<usize>().map_err(|e| {
                    Error::InvalidArgument(format!("bad grid count '{count}': {e}"))
                })?;
                Self::new(num(min)?, num(max)?, n)
            }
            _ => Err(Error::InvalidArgument(format!(
                "grid syntax is 'min:max:count' or a single value, got '{s}'"
            ))),
        }
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn min(&self) -> f64 {
        self.min
    }

    pub fn max(&self) -> f64 {
        self.max
    }

    pub fn values(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.min];
        }
        let step = (self.max - self.min) / (self.count - 1) as f64;
        (0..self.count)
            .map(|i| {
                if i == self.count - 1 {
                    self.max
                } else {
                    self.min + i as f64 * step
                }
            })
            .collect()
    }

    pub fn describe(&self) -> String {
        format!("{}:{}:{}", self.min, self.max, self.count)
    }
}

/// Grid of parameter tuples and probabilities with provenance metadata.
#[derive(Debug, Clone, PartialEq)]
pub struct ScanTable {
    metadata: Vec<(String, String)>,
    columns: Vec<String>,
    rows: Vec<Vec<f64>>,
}

impl ScanTable {
    pub fn new(columns: Vec<String>) -> Self {
        Self {
            metadata: Vec::new(),
            columns,
            rows: Vec::new(),
        }
    }

    pub fn push_meta(&mut self, key: &str, value: impl ToString) {
        self.metadata.push((key.to_string(), value.to_string()));
    }

    pub fn push_row(&mut self, row: Vec<f64>) {
        assert_eq!(row.len(), self.columns.len(), "row width mismatch");
        self.rows.push(row);
    }

    pub fn metadata(&self) -> &[(String, String)] {
        &self.metadata
    }

    pub fn meta_value(&self, key: &str) -> Option<&str> {
        self.metadata
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    pub fn columns(&self) -> &[String] {
        &self.columns
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let idx = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[idx]).collect())
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        for (k, v) in &self.metadata {
            writeln!(w, "# {k}={v}")?;
        }
        writeln!(w, "{}", self.columns.join(","))?;
        for row in &self.rows {
            let line: Vec<String> = row.iter().map(|x| format!("{x:.16e}")).collect();
            writeln!(w, "{}", line.join(","))?;
        }
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("write to Vec cannot fail");
        String::from_utf8(buf).expect("CSV output is ASCII")
    }

    pub fn parse_csv(text: &str) -> Result<Self> {
        let mut metadata = Vec::new();
        let mut columns: Option<Vec<String>> = None;
        let mut rows = Vec::new();

        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            if raw.trim().is_empty() {
                continue;
            }
            if let Some(meta) = raw.strip_prefix('#') {
                let meta = meta.trim();
                let (k, v) = meta.split_once('=').ok_or(Error::Parse {
                    line,
                    msg: format!("metadata line is not key=value: '{meta}'"),
                })?;
                metadata.push((k.trim().to_string(), v.trim().to_string()));
                continue;
            }
            match &columns {
                None => {
                    columns = Some(raw.split(',').map(|c| c.trim().to_string()).collect());
                }
                Some(cols) => {
                    let row: Result<Vec<f64>> = raw
                        .split(',')
                        .map(|x| {
                            x.trim().parse::<f64>().map_err(|e| Error::Parse {
                                line,
                                msg: format!("bad number '{x}': {e}"),
                            })
                        })
                        .collect();
                    let row = row?;
                    if row.len() != cols.len() {
                        return Err(Error::Parse {
                            line,
                            msg: format!("expected {} fields, got {}", cols.len(), row.len()),
                        });
                    }
                    rows.push(row);
                }
            }
        }

        let columns = columns.ok_or(Error::Parse {
            line: 0,
            msg: "missing header row".into(),
        })?;
        Ok(Self {
            metadata,
            columns,
            rows,
        })
    }
}
