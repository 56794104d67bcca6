use serde::{Deserialize, Serialize};

use super::FuzzyError;

/// Degree-of-membership curve over a variable's universe.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "snake_case")]
pub enum MembershipFunction {
    /// Zero outside `(a, c)`, one at `b`, linear in between. `a == b` or
    /// `b == c` gives a shoulder.
    Triangular { a: f64, b: f64, c: f64 },
    /// Zero outside `(a, d)`, one on `[b, c]`, linear in between.
    Trapezoidal { a: f64, b: f64, c: f64, d: f64 },
    /// `exp(-(x - center)^2 / (2 width^2))`
    Gaussian { center: f64, width: f64 },
}

impl MembershipFunction {
    pub fn triangular(a: f64, b: f64, c: f64) -> Self {
        Self::Triangular { a, b, c }
    }

    pub fn trapezoidal(a: f64, b: f64, c: f64, d: f64) -> Self {
        Self::Trapezoidal { a, b, c, d }
    }

    pub fn gaussian(center: f64, width: f64) -> Self {
        Self::Gaussian { center, width }
    }

    pub fn validate(&self) -> Result<(), FuzzyError> {
        let ok = match *self {
            Self::Triangular { a, b, c } => {
                [a, b, c].iter().all(|v| v.is_finite()) && a <= b && b <= c && a < c
            }
            Self::Trapezoidal { a, b, c, d } => {
                [a, b, c, d].iter().all(|v| v.is_finite()) && a <= b && b <= c && c <= d && a < d
            }
            Self::Gaussian { center, width } => center.is_finite() && width.is_finite() && width > 0.0,
        };
        if ok {
            Ok(())
        } else {
            Err(FuzzyError::InvalidMembership(format!("{self:?}")))
        }
    }

    /// Point of maximum membership (plateau midpoint for trapezoids).
    pub fn peak(&self) -> f64 {
        match *self {
            Self::Triangular { b, .. } => b,
            Self::Trapezoidal { b, c, .. } => 0.5 * (b + c),
            Self::Gaussian { center, .. } => center,
        }
    }

    pub fn degree(&self, x: f64) -> f64 {
        match *self {
            Self::Triangular { a, b, c } => {
                if x == b {
                    1.0
                } else if x <= a || x >= c {
                    0.0
                } else if x < b {
                    (x - a) / (b - a)
                } else {
                    (c - x) / (c - b)
                }
            }
            Self::Trapezoidal { a, b, c, d } => {
                if (b..=c).contains(&x) {
                    1.0
                } else if x <= a || x >= d {
                    0.0
                } else if x < b {
                    (x - a) / (b - a)
                } else {
                    (d - x) / (d - c)
                }
            }
            Self::Gaussian { center, width } => {
                let z = x - center;
                (-(z * z) / (2.0 * width * width)).exp()
            }
        }
    }
}
