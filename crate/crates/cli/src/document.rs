//! Tabular/report output shared by every subcommand.

use std::fmt::Write as _;

/// Version of the column and field layout. Bump on any rename or reorder.
pub const SCHEMA_VERSION: i64 = 1;

/// A single output cell.
#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Float(f64),
    Int(i64),
    Bool(bool),
    Text(String),
    Null,
}

impl Value {
    /// Text form used in CSV cells. Floats carry 17 significant digits so
    /// they parse back to the same bits.
    pub fn render(&self) -> String {
        match self {
            Value::Float(x) => format_float(*x),
            Value::Int(i) => i.to_string(),
            Value::Bool(b) => b.to_string(),
            Value::Text(s) => s.clone(),
            Value::Null => String::new(),
        }
    }

    fn to_json(&self) -> serde_json::Value {
        match self {
            Value::Float(x) if x.is_finite() => {
                serde_json::Value::Number(format_float(*x).parse().expect("finite float is a JSON number"))
            }
            Value::Float(x) => serde_json::Value::String(format_float(*x)),
            Value::Int(i) => serde_json::Value::from(*i),
            Value::Bool(b) => serde_json::Value::Bool(*b),
            Value::Text(s) => serde_json::Value::String(s.clone()),
            Value::Null => serde_json::Value::Null,
        }
    }
}

impl From<f64> for Value {
    fn from(x: f64) -> Self {
        Value::Float(x)
    }
}

impl From<bool> for Value {
    fn from(b: bool) -> Self {
        Value::Bool(b)
    }
}

impl From<&str> for Value {
    fn from(s: &str) -> Self {
        Value::Text(s.to_owned())
    }
}

impl From<String> for Value {
    fn from(s: String) -> Self {
        Value::Text(s)
    }
}

macro_rules! int_value {
    ($($t:ty),*) => {$(
        impl From<$t> for Value {
            fn from(i: $t) -> Self {
                Value::Int(i64::try_from(i).expect("integer fits in i64"))
            }
        }
    )*};
}
int_value!(i8, i32, i64, u32, u64, usize);

pub fn format_float(x: f64) -> String {
    if x.is_nan() {
        "NaN".into()
    } else if x.is_infinite() {
        if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        }
    } else {
        format!("{x:.16e}")
    }
}

/// Output format selected with `--format`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// Summary fields plus an optional table.
///
/// In CSV the summary fields become trailing columns repeated on every row;
/// a document without rows is a single CSV record.
#[derive(Debug, Clone, PartialEq)]
pub struct Document {
    pub command: &'static str,
    pub summary: Vec<(&'static str, Value)>,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Value>>,
}

impl Document {
    pub fn new(command: &'static str) -> Self {
        Document { command, summary: Vec::new(), columns: Vec::new(), rows: Vec::new() }
    }

    pub fn field(&mut self, key: &'static str, value: impl Into<Value>) -> &mut Self {
        self.summary.push((key, value.into()));
        self
    }

    pub fn get(&self, key: &str) -> Option<&Value> {
        self.summary.iter().find(|(k, _)| *k == key).map(|(_, v)| v)
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(),
        }
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
        let mut header = vec!["schema_version", "command"];
        header.extend(&self.columns);
        header.extend(self.summary.iter().map(|(k, _)| *k));
        w.write_record(&header).expect("writing to memory");

        let tail: Vec<String> = self.summary.iter().map(|(_, v)| v.render()).collect();
        let head = [SCHEMA_VERSION.to_string(), self.command.to_owned()];
        let mut emit = |cells: &[Value]| {
            let record = head.iter().cloned().chain(cells.iter().map(Value::render)).chain(tail.iter().cloned());
            w.write_record(record).expect("writing to memory");
        };
        if self.rows.is_empty() {
            emit(&[]);
        } else {
            for row in &self.rows {
                emit(row);
            }
        }
        String::from_utf8(w.into_inner().expect("flush to memory")).expect("csv output is utf-8")
    }

    pub fn to_json(&self) -> String {
        let mut obj = serde_json::Map::new();
        obj.insert("schema_version".into(), SCHEMA_VERSION.into());
        obj.insert("command".into(), self.command.into());
        for (k, v) in &self.summary {
            obj.insert((*k).into(), v.to_json());
        }
        if !self.columns.is_empty() {
            let rows = self
                .rows
                .iter()
                .map(|row| {
                    let fields = self.columns.iter().zip(row).map(|(k, v)| ((*k).to_owned(), v.to_json()));
                    serde_json::Value::Object(fields.collect())
                })
                .collect();
            obj.insert("rows".into(), serde_json::Value::Array(rows));
        }
        let mut out = serde_json::to_string_pretty(&serde_json::Value::Object(obj)).expect("serializable");
        let _ = writeln!(out);
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_round_trip() {
        for x in [0.1, 1.0 / 3.0, std::f64::consts::PI, -2.5e-300, 1e300, f64::MIN_POSITIVE] {
            let s = format_float(x);
            assert_eq!(s.parse::<f64>().unwrap().to_bits(), x.to_bits(), "{s}");
        }
        assert_eq!(format_float(0.5), "5.0000000000000000e-1");
    }

    #[test]
    fn json_keeps_float_text() {
        let mut d = Document::new("t");
        d.field("x", 0.1);
        assert!(d.to_json().contains("\"x\": 1.0000000000000001e-1"));
    }

    #[test]
    fn csv_repeats_summary() {
        let mut d = Document::new("t");
        d.field("k", 3u32);
        d.columns = vec!["a"];
        d.rows = vec![vec![Value::Bool(true)], vec![Value::Bool(false)]];
        assert_eq!(d.to_csv(), "schema_version,command,a,k\n1,t,true,3\n1,t,false,3\n");
    }
}
