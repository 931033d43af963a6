//! Tabular output shared by every subcommand. One dataset is one table
//! with named, unit-annotated columns plus key/value metadata. The CSV
//! form puts metadata in `#` comment lines before the header; the
//! structured form is JSON with the same content. Output carries no
//! timestamps, so repeated runs on the same inputs are byte-identical.

use serde::Serialize;
use std::io::Write;

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct Column {
    pub name: String,
    /// SI unit of the column, empty for dimensionless or text columns.
    pub unit: String,
}

impl Column {
    pub fn new(name: &str, unit: &str) -> Self {
        Column {
            name: name.into(),
            unit: unit.into(),
        }
    }

    fn header_cell(&self) -> String {
        if self.unit.is_empty() {
            self.name.clone()
        } else {
            format!("{} [{}]", self.name, self.unit)
        }
    }
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct Dataset {
    pub name: String,
    pub metadata: Vec<(String, String)>,
    pub columns: Vec<Column>,
    /// Cells are pre-formatted strings; use [`fmt_float`] for numbers.
    pub rows: Vec<Vec<String>>,
}

/// Canonical float formatting: 9 significant digits, scientific.
pub fn fmt_float(x: f64) -> String {
    format!("{x:.8e}")
}

impl Dataset {
    pub fn new(name: &str) -> Self {
        Dataset {
            name: name.into(),
            metadata: Vec::new(),
            columns: Vec::new(),
            rows: Vec::new(),
        }
    }

    pub fn meta(&mut self, key: &str, value: impl Into<String>) {
        self.metadata.push((key.into(), value.into()));
    }

    pub fn push_row(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn write_csv(&self, out: &mut dyn Write) -> std::io::Result<()> {
        writeln!(out, "# dataset: {}", self.name)?;
        for (k, v) in &self.metadata {
            writeln!(out, "# {k}: {v}")?;
        }
        let header: Vec<String> = self.columns.iter().map(Column::header_cell).collect();
        writeln!(out, "{}", header.join(","))?;
        for row in &self.rows {
            writeln!(out, "{}", row.join(","))?;
        }
        Ok(())
    }

    pub fn write_json(&self, out: &mut dyn Write) -> std::io::Result<()> {
        serde_json::to_writer_pretty(&mut *out, self)
            .map_err(|e| std::io::Error::new(std::io::ErrorKind::Other, e))?;
        writeln!(out)
    }

    /// Parse the CSV form back. Accepts exactly what [`write_csv`]
    /// emits; used by round-trip tests and by overlay ingestion.
    pub fn parse_csv(text: &str) -> Result<Self, String> {
        let mut lines = text.lines().peekable();
        let first = lines.next().ok_or("empty input")?;
        let name = first
            .strip_prefix("# dataset: ")
            .ok_or("first line must be '# dataset: <name>'")?
            .to_string();
        let mut metadata = Vec::new();
        while let Some(line) = lines.peek() {
            if let Some(rest) = line.strip_prefix("# ") {
                let (k, v) = rest
                    .split_once(": ")
                    .ok_or_else(|| format!("malformed metadata line: {line}"))?;
                metadata.push((k.to_string(), v.to_string()));
                lines.next();
            } else {
                break;
            }
        }
        let header = lines.next().ok_or("missing header line")?;
        let columns = header
            .split(',')
            .map(|cell| match cell.rsplit_once(" [") {
                Some((name, rest)) if rest.ends_with(']') => Column {
                    name: name.to_string(),
                    unit: rest[..rest.len() - 1].to_string(),
                },
                _ => Column {
                    name: cell.to_string(),
                    unit: String::new(),
                },
            })
            .collect::<Vec<_>>();
        let mut rows = Vec::new();
        for line in lines {
            let row: Vec<String> = line.split(',').map(str::to_string).collect();
            if row.len() != columns.len() {
                return Err(format!(
                    "row has {} cells, expected {}: {line}",
                    row.len(),
                    columns.len()
                ));
            }
            rows.push(row);
        }
        Ok(Dataset {
            name,
            metadata,
            columns,
            rows,
        })
    }

    /// Numeric view of one column, for consumers of parsed files.
    pub fn column_f64(&self, name: &str) -> Result<Vec<f64>, String> {
        let idx = self
            .columns
            .iter()
            .position(|c| c.name == name)
            .ok_or_else(|| format!("no column named {name:?}"))?;
        self.rows
            .iter()
            .map(|r| {
                r[idx]
                    .parse::<f64>()
                    .map_err(|e| format!("cell {:?} in column {name:?}: {e}", r[idx]))
            })
            .collect()
    }
}
