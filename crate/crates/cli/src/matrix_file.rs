//! The matrix interchange format: one JSON object with fields `k`, `m`, `re`
//! and `im`, the last two being `(km) × (km)` row-major arrays.
//!
//! The canonical writer sorts keys, puts one matrix row per line and prints
//! every float with 17 significant digits, so parsing and rewriting a
//! canonical file reproduces it byte for byte.

use serde::Deserialize;
use spcsep::bipartite::BipartiteOperator;
use spcsep::linalg::ComplexMatrix;
use spcsep::C;

#[derive(Debug, Clone, PartialEq)]
pub struct MatrixFile {
    pub k: usize,
    pub m: usize,
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    /// Offending field, e.g. `re[2]`, or `document` for syntax errors.
    pub field: String,
    pub message: String,
}

impl std::fmt::Display for ParseError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "field `{}`: {}", self.field, self.message)
    }
}

impl std::error::Error for ParseError {}

fn err(field: impl Into<String>, message: impl Into<String>) -> ParseError {
    ParseError { field: field.into(), message: message.into() }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Raw {
    k: Option<serde_json::Value>,
    m: Option<serde_json::Value>,
    re: Option<serde_json::Value>,
    im: Option<serde_json::Value>,
}

fn dimension(name: &str, v: Option<serde_json::Value>) -> Result<usize, ParseError> {
    let v = v.ok_or_else(|| err(name, "missing"))?;
    v.as_u64()
        .filter(|&x| x >= 1)
        .map(|x| x as usize)
        .ok_or_else(|| err(name, format!("expected a positive integer, got {v}")))
}

fn array(name: &str, v: Option<serde_json::Value>, n: usize) -> Result<Vec<Vec<f64>>, ParseError> {
    let v = v.ok_or_else(|| err(name, "missing"))?;
    let rows = v.as_array().ok_or_else(|| err(name, "expected an array of rows"))?;
    if rows.len() != n {
        return Err(err(name, format!("expected {n} rows, got {}", rows.len())));
    }
    rows.iter()
        .enumerate()
        .map(|(i, row)| {
            let field = format!("{name}[{i}]");
            let row = row.as_array().ok_or_else(|| err(&field, "expected an array of numbers"))?;
            if row.len() != n {
                return Err(err(&field, format!("expected {n} entries, got {}", row.len())));
            }
            row.iter()
                .enumerate()
                .map(|(j, x)| {
                    x.as_f64()
                        .filter(|x| x.is_finite())
                        .ok_or_else(|| err(format!("{name}[{i}][{j}]"), format!("expected a finite number, got {x}")))
                })
                .collect()
        })
        .collect()
}

impl MatrixFile {
    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let raw: Raw = serde_json::from_str(text).map_err(|e| {
            let msg = e.to_string();
            // serde names unknown fields in its message; surface them as the field
            match msg.split('`').nth(1) {
                Some(f) if msg.starts_with("unknown field") => err(f, msg.clone()),
                _ => err("document", msg),
            }
        })?;
        let k = dimension("k", raw.k)?;
        let m = dimension("m", raw.m)?;
        let n = k.checked_mul(m).filter(|&n| n <= 4096).ok_or_else(|| err("k", "k·m is too large"))?;
        let re = array("re", raw.re, n)?;
        let im = array("im", raw.im, n)?;
        Ok(Self { k, m, re, im })
    }

    pub fn from_operator(op: &BipartiteOperator<f64>) -> Self {
        let (re, im) = split(op.matrix());
        Self { k: op.k(), m: op.m(), re, im }
    }

    pub fn to_operator(&self) -> BipartiteOperator<f64> {
        let n = self.k * self.m;
        let mat = ComplexMatrix::from_fn(n, n, |i, j| C::new(self.re[i][j], self.im[i][j]));
        BipartiteOperator::new(self.k, self.m, mat).expect("shape checked at parse time")
    }

    /// Canonical text form.
    pub fn write(&self) -> String {
        let mut out = String::from("{\n");
        out.push_str("  \"im\": ");
        write_rows(&mut out, &self.im);
        out.push_str(",\n");
        out.push_str(&format!("  \"k\": {},\n  \"m\": {},\n", self.k, self.m));
        out.push_str("  \"re\": ");
        write_rows(&mut out, &self.re);
        out.push_str("\n}\n");
        out
    }
}

/// Real and imaginary parts as nested rows.
pub fn split(m: &ComplexMatrix<f64>) -> (Vec<Vec<f64>>, Vec<Vec<f64>>) {
    let rows = |f: fn(&C<f64>) -> f64| (0..m.rows()).map(|i| (0..m.cols()).map(|j| f(&m[(i, j)])).collect()).collect();
    (rows(|z| z.re), rows(|z| z.im))
}

/// A float with 17 significant digits and a signed exponent, e.g.
/// `-2.5000000000000000e+0`, as a JSON number literal.
pub fn format_float(x: f64) -> String {
    let s = format!("{x:.16e}");
    match s.split_once('e') {
        Some((mantissa, exp)) if !exp.starts_with('-') => format!("{mantissa}e+{exp}"),
        _ => s,
    }
}

fn write_rows(out: &mut String, rows: &[Vec<f64>]) {
    out.push_str("[\n");
    for (i, row) in rows.iter().enumerate() {
        let cells: Vec<String> = row.iter().map(|&x| format_float(x)).collect();
        out.push_str("    [");
        out.push_str(&cells.join(", "));
        out.push(']');
        if i + 1 < rows.len() {
            out.push(',');
        }
        out.push('\n');
    }
    out.push_str("  ]");
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn write_then_parse_is_identity() {
        let f = MatrixFile {
            k: 1,
            m: 2,
            re: vec![vec![1.0, -0.1], vec![-0.1, 2.5]],
            im: vec![vec![0.0, 0.3], vec![-0.3, 0.0]],
        };
        let text = f.write();
        let back = MatrixFile::parse(&text).unwrap();
        assert_eq!(back, f);
        assert_eq!(back.write(), text);
    }

    #[test]
    fn ragged_rows_name_the_row() {
        let text = r#"{"k":1,"m":2,"re":[[1,0],[0]],"im":[[0,0],[0,0]]}"#;
        assert_eq!(MatrixFile::parse(text).unwrap_err().field, "re[1]");
    }

    #[test]
    fn missing_and_unknown_fields() {
        let e = MatrixFile::parse(r#"{"k":1,"m":1,"re":[[1]]}"#).unwrap_err();
        assert_eq!(e.field, "im");
        let e = MatrixFile::parse(r#"{"k":1,"m":1,"re":[[1]],"im":[[0]],"x":1}"#).unwrap_err();
        assert_eq!(e.field, "x");
        let e = MatrixFile::parse(r#"{"k":0,"m":1,"re":[],"im":[]}"#).unwrap_err();
        assert_eq!(e.field, "k");
        let e = MatrixFile::parse(r#"{"k":1,"m":1,"re":[["a"]],"im":[[0]]}"#).unwrap_err();
        assert_eq!(e.field, "re[0][0]");
        assert_eq!(MatrixFile::parse("{").unwrap_err().field, "document");
    }
}
