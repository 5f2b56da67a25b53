use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

/// The condition a literal places on its column.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum Test {
    /// `x >= value`
    Ge { value: f64 },
    /// `x < value`
    Lt { value: f64 },
    /// `low <= x < high`
    Interval { low: f64, high: f64 },
    /// `x == value` on a 0/1 column
    Indicator { value: u8 },
}

impl Test {
    pub fn matches(&self, x: f64) -> bool {
        match *self {
            Test::Ge { value } => x >= value,
            Test::Lt { value } => x < value,
            Test::Interval { low, high } => low <= x && x < high,
            Test::Indicator { value } => x == f64::from(value),
        }
    }

    fn tag(&self) -> u8 {
        match self {
            Test::Ge { .. } => 0,
            Test::Lt { .. } => 1,
            Test::Interval { .. } => 2,
            Test::Indicator { .. } => 3,
        }
    }

    fn thresholds(&self) -> (f64, f64) {
        match *self {
            Test::Ge { value } | Test::Lt { value } => (value, 0.0),
            Test::Interval { low, high } => (low, high),
            Test::Indicator { value } => (f64::from(value), 0.0),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Literal {
    pub column: usize,
    #[serde(flatten)]
    pub test: Test,
}

impl Literal {
    pub fn ge(column: usize, value: f64) -> Self {
        Self { column, test: Test::Ge { value } }
    }

    pub fn lt(column: usize, value: f64) -> Self {
        Self { column, test: Test::Lt { value } }
    }

    pub fn interval(column: usize, low: f64, high: f64) -> Self {
        debug_assert!(low < high);
        Self { column, test: Test::Interval { low, high } }
    }

    pub fn indicator(column: usize, value: u8) -> Self {
        Self { column, test: Test::Indicator { value } }
    }

    #[inline]
    pub fn matches(&self, row: &[f64]) -> bool {
        self.test.matches(row[self.column])
    }

    /// Total order on (column, form, thresholds), used to break score ties.
    pub fn key_cmp(&self, other: &Self) -> Ordering {
        self.column
            .cmp(&other.column)
            .then(self.test.tag().cmp(&other.test.tag()))
            .then_with(|| {
                let (a0, a1) = self.test.thresholds();
                let (b0, b1) = other.test.thresholds();
                a0.total_cmp(&b0).then(a1.total_cmp(&b1))
            })
    }

    pub fn display<'a>(&'a self, column_names: &'a [String]) -> impl fmt::Display + 'a {
        LiteralDisplay { lit: self, names: column_names }
    }
}

struct LiteralDisplay<'a> {
    lit: &'a Literal,
    names: &'a [String],
}

impl fmt::Display for LiteralDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = self
            .names
            .get(self.lit.column)
            .cloned()
            .unwrap_or_else(|| format!("x{}", self.lit.column));
        match self.lit.test {
            Test::Ge { value } => write!(f, "{name} >= {value}"),
            Test::Lt { value } => write!(f, "{name} < {value}"),
            Test::Interval { low, high } => write!(f, "{low} <= {name} < {high}"),
            Test::Indicator { value } => write!(f, "{name} == {value}"),
        }
    }
}
