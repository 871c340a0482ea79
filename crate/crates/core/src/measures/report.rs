use std::fmt::Write as _;

use num_rational::Ratio;
use num_traits::ToPrimitive;
use serde::Serialize;

/// Exact measure value.
pub type Rational = Ratio<i128>;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Value {
    Defined(Rational),
    Undefined { reason: String },
}

impl Value {
    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Value::Defined(r) => r.to_f64(),
            Value::Undefined { .. } => None,
        }
    }

    pub fn ratio(&self) -> Option<Rational> {
        match self {
            Value::Defined(r) => Some(*r),
            Value::Undefined { .. } => None,
        }
    }

    pub fn is_defined(&self) -> bool {
        matches!(self, Value::Defined(_))
    }
}

/// Renders a rational to four decimals, rounding half away from zero.
pub fn format4(r: &Rational) -> String {
    let scaled = (*r * Rational::from_integer(10_000)).round().to_integer();
    let sign = if scaled < 0 { "-" } else { "" };
    let a = scaled.abs();
    format!("{sign}{}.{:04}", a / 10_000, a % 10_000)
}

/// Result of one measure evaluation. Options and diagnostics keep their
/// insertion order so that rendering is stable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrecisionReport {
    pub measure: String,
    pub value: Value,
    pub options: Vec<(String, String)>,
    pub diagnostics: Vec<(String, String)>,
}

/// Machine-readable form of a report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportRecord {
    pub measure: String,
    pub defined: bool,
    pub value: Option<f64>,
    pub value_4dp: Option<String>,
    pub exact: Option<String>,
    pub undefined_reason: Option<String>,
    pub options: Vec<(String, String)>,
    pub diagnostics: Vec<(String, String)>,
}

impl PrecisionReport {
    pub fn new(measure: &str, value: Value) -> Self {
        PrecisionReport {
            measure: measure.to_string(),
            value,
            options: Vec::new(),
            diagnostics: Vec::new(),
        }
    }

    pub fn defined(measure: &str, num: i128, den: i128) -> Self {
        Self::new(measure, Value::Defined(Rational::new(num, den)))
    }

    pub fn undefined(measure: &str, reason: impl Into<String>) -> Self {
        Self::new(measure, Value::Undefined { reason: reason.into() })
    }

    pub fn option(mut self, key: &str, value: impl ToString) -> Self {
        self.options.push((key.to_string(), value.to_string()));
        self
    }

    pub fn diag(&mut self, key: impl Into<String>, value: impl ToString) {
        self.diagnostics.push((key.into(), value.to_string()));
    }

    pub fn as_f64(&self) -> Option<f64> {
        self.value.as_f64()
    }

    pub fn ratio(&self) -> Option<Rational> {
        self.value.ratio()
    }

    /// `key=value` lines: measure, value, exact, options, diagnostics.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "measure={}", self.measure);
        match &self.value {
            Value::Defined(r) => {
                let _ = writeln!(out, "value={}", format4(r));
                let _ = writeln!(out, "exact={r}");
            }
            Value::Undefined { reason } => {
                let _ = writeln!(out, "value=undefined");
                let _ = writeln!(out, "reason={reason}");
            }
        }
        for (k, v) in &self.options {
            let _ = writeln!(out, "option.{k}={v}");
        }
        for (k, v) in &self.diagnostics {
            let _ = writeln!(out, "diag.{k}={v}");
        }
        out
    }

    pub fn record(&self) -> ReportRecord {
        let (value, value_4dp, exact, undefined_reason) = match &self.value {
            Value::Defined(r) => (r.to_f64(), Some(format4(r)), Some(r.to_string()), None),
            Value::Undefined { reason } => (None, None, None, Some(reason.clone())),
        };
        ReportRecord {
            measure: self.measure.clone(),
            defined: self.value.is_defined(),
            value,
            value_4dp,
            exact,
            undefined_reason,
            options: self.options.clone(),
            diagnostics: self.diagnostics.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn four_decimal_rounding() {
        assert_eq!(format4(&Rational::new(3, 4)), "0.7500");
        assert_eq!(format4(&Rational::new(5, 7)), "0.7143");
        assert_eq!(format4(&Rational::new(1, 3)), "0.3333");
        assert_eq!(format4(&Rational::new(3, 11)), "0.2727");
        assert_eq!(format4(&Rational::new(1, 1)), "1.0000");
        assert_eq!(format4(&Rational::new(0, 1)), "0.0000");
    }

    #[test]
    fn text_rendering() {
        let mut r = PrecisionReport::defined("etc", 6, 8).option("weighting", "visits");
        r.diag("numerator", 6);
        assert_eq!(
            r.to_text(),
            "measure=etc\nvalue=0.7500\nexact=3/4\noption.weighting=visits\ndiag.numerator=6\n"
        );
        let u = PrecisionReport::undefined("advanced-ba", "no sometimes-follows pairs in the model");
        assert!(u.to_text().contains("value=undefined"));
        assert_eq!(u.as_f64(), None);
        let rec = r.record();
        assert_eq!(rec.exact.as_deref(), Some("3/4"));
        assert!(serde_json::to_string(&rec).unwrap().contains("\"value_4dp\":\"0.7500\""));
    }
}
