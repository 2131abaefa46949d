use crate::error::{Error, Result};

/// A rectangular table destined for CSV. Column names carry their unit in
/// brackets, e.g. `chi[colors]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Table { columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> Result<Vec<u8>> {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
        w.write_record(&self.columns).map_err(csv_err)?;
        for r in &self.rows {
            w.write_record(r).map_err(csv_err)?;
        }
        w.into_inner().map_err(|e| Error::Format(e.to_string()))
    }

    /// Two-column `field,value` view of the scalar top-level fields of a JSON object.
    pub fn from_json_scalars(v: &serde_json::Value) -> Self {
        let mut t = Table::new(&["field", "value"]);
        if let Some(obj) = v.as_object() {
            for (k, x) in obj {
                let s = match x {
                    serde_json::Value::String(s) => s.clone(),
                    serde_json::Value::Number(_) | serde_json::Value::Bool(_) | serde_json::Value::Null => x.to_string(),
                    serde_json::Value::Object(o) if o.contains_key("dec") => o["dec"].as_str().unwrap_or_default().to_string(),
                    _ => continue,
                };
                t.push(vec![k.clone(), s]);
            }
        }
        t
    }
}

fn csv_err(e: csv::Error) -> Error {
    Error::Format(e.to_string())
}
