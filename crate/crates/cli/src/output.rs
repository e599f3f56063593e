use std::fmt::Write;

use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// A table with a fixed header; cells are kept as JSON values so both renderers agree.
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<Value>>,
}

impl Table {
    pub fn new(header: &[&'static str]) -> Self {
        Self { header: header.to_vec(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Value>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => {
                let mut out = self.header.join(",");
                out.push('\n');
                for row in &self.rows {
                    let cells: Vec<String> = row.iter().map(csv_cell).collect();
                    out.push_str(&cells.join(","));
                    out.push('\n');
                }
                out
            }
            Format::Json => {
                let rows: Vec<Value> = self
                    .rows
                    .iter()
                    .map(|row| {
                        let obj: serde_json::Map<String, Value> =
                            self.header.iter().map(|h| h.to_string()).zip(row.iter().cloned()).collect();
                        Value::Object(obj)
                    })
                    .collect();
                json_string(&Value::Array(rows))
            }
        }
    }
}

pub fn json_string(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values always serialize");
    s.push('\n');
    s
}

/// Twelve significant digits, fixed notation in the usual range and scientific outside it.
pub fn fmt_num(x: f64) -> String {
    if !x.is_finite() {
        return if x.is_nan() { "nan".into() } else if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let mag = x.abs().log10().floor() as i32;
    let mut s = String::new();
    if (-4..6).contains(&mag) {
        let decimals = (11 - mag).max(0) as usize;
        write!(s, "{x:.decimals$}").unwrap();
    } else {
        write!(s, "{x:.11e}").unwrap();
    }
    s
}

fn csv_cell(v: &Value) -> String {
    match v {
        Value::Number(n) => match n.as_f64() {
            Some(x) if n.is_f64() => fmt_num(x),
            _ => n.to_string(),
        },
        Value::String(s) => {
            if s.contains([',', '"', '\n']) {
                format!("\"{}\"", s.replace('"', "\"\""))
            } else {
                s.clone()
            }
        }
        Value::Bool(b) => b.to_string(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

/// JSON number, or `null` for non-finite values.
pub fn num(x: f64) -> Value {
    serde_json::Number::from_f64(x).map(Value::Number).unwrap_or(Value::Null)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_keep_twelve_digits() {
        assert_eq!(fmt_num(5.0 / 6.0), "0.833333333333");
        assert_eq!(fmt_num(1.0), "1.00000000000");
        assert_eq!(fmt_num(1.5e-12), "1.50000000000e-12");
        assert_eq!(fmt_num(0.0), "0");
    }

    #[test]
    fn csv_has_header_and_lf() {
        let mut t = Table::new(&["a", "b"]);
        t.push(vec![num(0.5), Value::String("x,y".into())]);
        assert_eq!(t.render(Format::Csv), "a,b\n0.500000000000,\"x,y\"\n");
    }
}
