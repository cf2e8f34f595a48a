//! Long-format CSV ingestion and emission.
//!
//! Expected layout: header `entity,year,<var1>,...,<varK>`, UTF-8, decimal
//! point, one row per (entity, year). Rows may arrive in any order; the
//! loader checks balance and reports every gap it finds.

use std::collections::HashMap;
use std::path::Path;

use super::{CellRef, DataError, PanelDataset};

/// Column naming for [`load_long_csv`]. An empty `variables` list means
/// "every header column that is not the entity or year column".
#[derive(Debug, Clone)]
pub struct CsvSchema {
    pub entity: String,
    pub year: String,
    pub variables: Vec<String>,
}

impl Default for CsvSchema {
    fn default() -> Self {
        Self {
            entity: "entity".into(),
            year: "year".into(),
            variables: Vec::new(),
        }
    }
}

pub fn load_long_csv(path: &Path, schema: &CsvSchema) -> Result<PanelDataset, DataError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_path(path)?;
    let headers: Vec<String> = reader.headers()?.iter().map(|h| h.to_string()).collect();

    let entity_col = headers
        .iter()
        .position(|h| *h == schema.entity)
        .ok_or_else(|| DataError::InvalidSchema(format!("missing entity column {:?}", schema.entity)))?;
    let year_col = headers
        .iter()
        .position(|h| *h == schema.year)
        .ok_or_else(|| DataError::InvalidSchema(format!("missing year column {:?}", schema.year)))?;

    let variables: Vec<String> = if schema.variables.is_empty() {
        headers
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != entity_col && *i != year_col)
            .map(|(_, h)| h.clone())
            .collect()
    } else {
        schema.variables.clone()
    };
    if variables.is_empty() {
        return Err(DataError::InvalidSchema(
            "no variable columns in schema".into(),
        ));
    }
    let var_cols: Vec<usize> = variables
        .iter()
        .map(|v| {
            headers
                .iter()
                .position(|h| h == v)
                .ok_or_else(|| DataError::InvalidSchema(format!("missing variable column {v:?}")))
        })
        .collect::<Result<_, _>>()?;

    // First pass: collect rows keyed by (entity, year), preserving the order
    // in which entities first appear.
    let mut entities: Vec<String> = Vec::new();
    let mut entity_idx: HashMap<String, usize> = HashMap::new();
    let mut years: Vec<i32> = Vec::new();
    let mut cells: HashMap<(usize, i32), Vec<f64>> = HashMap::new();

    for (row_no, record) in reader.records().enumerate() {
        let record = record?;
        let line = row_no + 2; // 1-based, after the header
        let entity_name = record.get(entity_col).unwrap_or("").to_string();
        if entity_name.is_empty() {
            return Err(DataError::InvalidSchema(format!(
                "empty entity identifier at row {line}"
            )));
        }
        let year_raw = record.get(year_col).unwrap_or("");
        let year: i32 = year_raw
            .parse()
            .map_err(|_| DataError::UnparsableNumber {
                row: line,
                column: schema.year.clone(),
                value: year_raw.to_string(),
            })?;

        let e = *entity_idx.entry(entity_name.clone()).or_insert_with(|| {
            entities.push(entity_name.clone());
            entities.len() - 1
        });
        if !years.contains(&year) {
            years.push(year);
        }

        let mut row_values = Vec::with_capacity(var_cols.len());
        for (vi, &col) in var_cols.iter().enumerate() {
            let raw = record.get(col).unwrap_or("");
            if raw.is_empty() {
                return Err(DataError::MissingCell(vec![CellRef {
                    entity: entity_name.clone(),
                    year,
                    variable: Some(variables[vi].clone()),
                }]));
            }
            let value: f64 = raw.parse().map_err(|_| DataError::UnparsableNumber {
                row: line,
                column: variables[vi].clone(),
                value: raw.to_string(),
            })?;
            if !value.is_finite() {
                return Err(DataError::NonFinite(CellRef {
                    entity: entity_name.clone(),
                    year,
                    variable: Some(variables[vi].clone()),
                }));
            }
            row_values.push(value);
        }

        if cells.insert((e, year), row_values).is_some() {
            return Err(DataError::DuplicateCell(CellRef {
                entity: entity_name,
                year,
                variable: None,
            }));
        }
    }

    if entities.is_empty() {
        return Err(DataError::Empty);
    }
    years.sort_unstable();

    // Balance check: every (entity, year) must be present.
    let mut gaps = Vec::new();
    for (e, name) in entities.iter().enumerate() {
        for &y in &years {
            if !cells.contains_key(&(e, y)) {
                gaps.push(CellRef {
                    entity: name.clone(),
                    year: y,
                    variable: None,
                });
            }
        }
    }
    if !gaps.is_empty() {
        return Err(DataError::MissingCell(gaps));
    }

    let mut values = Vec::with_capacity(entities.len() * years.len() * variables.len());
    for e in 0..entities.len() {
        for &y in &years {
            values.extend_from_slice(&cells[&(e, y)]);
        }
    }
    PanelDataset::from_parts(entities, years, variables, values)
}

/// Writes a dataset back to long-format CSV. Values are printed with Rust's
/// shortest round-trip float formatting, so reloading reproduces every value
/// bit for bit.
pub fn write_long_csv<W: std::io::Write>(dataset: &PanelDataset, out: W) -> Result<(), DataError> {
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["entity".to_string(), "year".to_string()];
    header.extend(dataset.variables().iter().cloned());
    w.write_record(&header)?;
    for (e, name) in dataset.entities().iter().enumerate() {
        for (t, year) in dataset.periods().iter().enumerate() {
            let mut record = vec![name.clone(), year.to_string()];
            for v in 0..dataset.variables().len() {
                record.push(format!("{}", dataset.value(e, t, v)));
            }
            w.write_record(&record)?;
        }
    }
    w.flush()?;
    Ok(())
}
