use std::fmt::Write as _;

use clap::ValueEnum;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    /// `# key<TAB>value` notes, a header line, then tab-separated rows.
    Tsv,
    /// One `key=value` record per line; notes come first.
    Records,
}

/// Tabular command output with leading key/value notes.
#[derive(Clone, Debug, Default)]
pub struct Table {
    notes: Vec<(String, String)>,
    columns: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new<S: Into<String>>(columns: impl IntoIterator<Item = S>) -> Self {
        Table {
            notes: Vec::new(),
            columns: columns.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn note(&mut self, key: &str, value: impl ToString) {
        self.notes.push((key.to_string(), value.to_string()));
    }

    pub fn row(&mut self, cells: Vec<String>) {
        debug_assert_eq!(cells.len(), self.columns.len());
        self.rows.push(cells);
    }

    pub fn render(&self, format: Format) -> String {
        let mut out = String::new();
        match format {
            Format::Tsv => {
                for (k, v) in &self.notes {
                    let _ = writeln!(out, "# {k}\t{v}");
                }
                if !self.columns.is_empty() {
                    let _ = writeln!(out, "{}", self.columns.join("\t"));
                }
                for r in &self.rows {
                    let _ = writeln!(out, "{}", r.join("\t"));
                }
            }
            Format::Records => {
                for (k, v) in &self.notes {
                    let _ = writeln!(out, "{k}={v}");
                }
                for r in &self.rows {
                    let fields: Vec<String> = self.columns.iter().zip(r).map(|(c, v)| format!("{c}={v}")).collect();
                    let _ = writeln!(out, "{}", fields.join(" "));
                }
            }
        }
        out
    }
}
