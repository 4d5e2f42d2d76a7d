use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde_json::Value;

use super::ScenarioError;
use crate::linalg::{Approx, Exact, Field, Mat};

/// A real number as written in a scenario.
#[derive(Clone, Debug, PartialEq)]
pub enum Number {
    Rational(BigRational),
    Float(f64),
}

impl Number {
    fn to_f64(&self) -> f64 {
        match self {
            Number::Rational(r) => r.to_f64().unwrap_or(f64::NAN),
            Number::Float(x) => *x,
        }
    }
}

fn input(path: &str, message: impl Into<String>) -> ScenarioError {
    ScenarioError::Input { path: path.to_string(), message: message.into() }
}

fn parse_number(v: &Value, path: &str) -> Result<Number, ScenarioError> {
    match v {
        Value::String(s) => Exact::parse_rational(s)
            .map(Number::Rational)
            .ok_or_else(|| input(path, format!("\"{s}\" is not a rational of the form p/q"))),
        Value::Number(n) => match n.as_i64() {
            Some(i) => Ok(Number::Rational(BigRational::from_integer(i.into()))),
            None => Ok(Number::Float(n.as_f64().unwrap_or(f64::NAN))),
        },
        _ => Err(input(path, "expected a number or a \"p/q\" string")),
    }
}

/// A complex entry: a real literal or a `[re, im]` pair.
pub fn parse_entry(v: &Value, path: &str) -> Result<(Number, Number), ScenarioError> {
    match v {
        Value::Array(pair) if pair.len() == 2 => {
            Ok((parse_number(&pair[0], &format!("{path}[0]"))?, parse_number(&pair[1], &format!("{path}[1]"))?))
        }
        Value::Array(_) => Err(input(path, "a complex entry is a pair [re, im]")),
        _ => Ok((parse_number(v, path)?, Number::Rational(BigRational::from_integer(0.into())))),
    }
}

/// Scalars that can be built from scenario literals.
pub trait ScenarioScalar: Field {
    fn from_numbers(re: &Number, im: &Number, tol: f64, path: &str) -> Result<Self, ScenarioError>;
}

impl ScenarioScalar for Exact {
    fn from_numbers(re: &Number, im: &Number, _tol: f64, path: &str) -> Result<Self, ScenarioError> {
        match (re, im) {
            (Number::Rational(r), Number::Rational(i)) => Ok(Exact::new(r.clone(), i.clone())),
            _ => Err(input(path, "decimal literals need float mode")),
        }
    }
}

impl ScenarioScalar for Approx {
    fn from_numbers(re: &Number, im: &Number, tol: f64, _path: &str) -> Result<Self, ScenarioError> {
        Ok(Approx::with_tolerance(re.to_f64(), im.to_f64(), tol))
    }
}

/// Nested arrays of entries, one inner array per row.
pub fn parse_matrix<F: ScenarioScalar>(v: &Value, tol: f64, path: &str) -> Result<Mat<F>, ScenarioError> {
    let Value::Array(rows) = v else {
        return Err(input(path, "a matrix is an array of rows"));
    };
    if rows.is_empty() {
        return Err(input(path, "a matrix needs at least one row"));
    }
    let mut out = Vec::with_capacity(rows.len());
    let mut width = None;
    for (r, row) in rows.iter().enumerate() {
        let row_path = format!("{path}[{r}]");
        let Value::Array(entries) = row else {
            return Err(input(&row_path, "a matrix row is an array of entries"));
        };
        if *width.get_or_insert(entries.len()) != entries.len() || entries.is_empty() {
            return Err(input(&row_path, format!("row has {} entries, expected {}", entries.len(), width.unwrap_or(0))));
        }
        let parsed = entries
            .iter()
            .enumerate()
            .map(|(c, e)| {
                let p = format!("{row_path}[{c}]");
                let (re, im) = parse_entry(e, &p)?;
                F::from_numbers(&re, &im, tol, &p)
            })
            .collect::<Result<Vec<F>, _>>()?;
        out.push(parsed);
    }
    Ok(Mat::from_rows(out))
}

/// Whether a literal anywhere below `v` is a non-integer JSON number.
pub fn contains_decimal(v: &Value) -> bool {
    match v {
        Value::Number(n) => n.as_i64().is_none(),
        Value::Array(items) => items.iter().any(contains_decimal),
        Value::Object(map) => map.values().any(contains_decimal),
        _ => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn rational_and_complex_entries() {
        let m: Mat<Exact> = parse_matrix(&json!([["1/2", ["0", "-1/3"]], [0, 1]]), 0.0, "m").unwrap();
        assert_eq!(m.get(0, 0), &Exact::from_ratio(1, 2));
        assert_eq!(m.get(0, 1), &Exact::from_complex_ratio((0, 1), (-1, 3)));
        assert_eq!(m.get(1, 1), &Exact::one());
    }

    #[test]
    fn decimals_need_float_mode() {
        let err = parse_matrix::<Exact>(&json!([[0.5]]), 0.0, "magic.entries[0][0]").unwrap_err();
        assert_eq!(
            err,
            ScenarioError::Input { path: "magic.entries[0][0][0][0]".into(), message: "decimal literals need float mode".into() }
        );
        let m: Mat<Approx> = parse_matrix(&json!([[0.5]]), 1e-6, "m").unwrap();
        assert_eq!(m.get(0, 0).tolerance(), 1e-6);
    }

    #[test]
    fn ragged_rows_report_their_path() {
        let err = parse_matrix::<Exact>(&json!([[1, 0], [0]]), 0.0, "x").unwrap_err();
        assert!(matches!(err, ScenarioError::Input { ref path, .. } if path == "x[1]"));
    }

    #[test]
    fn decimal_detection_ignores_integers() {
        assert!(!contains_decimal(&json!({"a": [[1, "1/2"]]})));
        assert!(contains_decimal(&json!({"a": [[1, 0.25]]})));
    }
}
