//! The two output shapes: `key=value` lines and CSV tables.

#[derive(Debug, Clone, PartialEq)]
pub enum Output {
    KeyValue(Vec<(String, String)>),
    Csv {
        header: Vec<String>,
        rows: Vec<Vec<String>>,
    },
}

impl Output {
    pub fn kv() -> Self {
        Output::KeyValue(Vec::new())
    }

    pub fn csv(header: &[&str]) -> Self {
        Output::Csv {
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    /// Appends a `key=value` pair; no-op on a CSV output.
    pub fn put(mut self, key: &str, value: impl ToString) -> Self {
        if let Output::KeyValue(pairs) = &mut self {
            pairs.push((key.to_string(), value.to_string()));
        }
        self
    }

    /// Appends a CSV row; no-op on key=value output.
    pub fn row(&mut self, fields: Vec<String>) {
        if let Output::Csv { rows, .. } = self {
            rows.push(fields);
        }
    }

    pub fn render(&self) -> String {
        match self {
            Output::KeyValue(pairs) => pairs.iter().map(|(k, v)| format!("{k}={v}\n")).collect(),
            Output::Csv { header, rows } => {
                let mut w = csv::Writer::from_writer(Vec::new());
                w.write_record(header).expect("writing to memory");
                for r in rows {
                    w.write_record(r).expect("writing to memory");
                }
                String::from_utf8(w.into_inner().expect("flush to memory")).expect("utf-8 fields")
            }
        }
    }
}
