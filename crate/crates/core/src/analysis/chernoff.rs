//! Closed-form concentration bounds quoted for each protocol, for comparison
//! with measured frequencies.

use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ChernoffBound {
    /// Quorum-Sensing false positive for a rebel of degree `delta_u`:
    /// `2 exp(-9 delta_u eps^2 / 200)`.
    QsOutputRisk { delta_u: f64, epsilon: f64 },
    /// Median false positive: `exp(-0.015 (1 - 2 eps) eps^2 delta)`.
    MedianFew { delta: f64, epsilon: f64 },
    /// Median miss under many rebels: `exp(-0.036 eps^2 delta)`.
    MedianMany { delta: f64, epsilon: f64 },
    /// Self-Immolation false positive: `exp(-3 q delta / 20)`.
    SiOutputRisk { q: f64, delta: f64 },
}

/// Names accepted by [`ChernoffBound::from_name`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChernoffKind {
    QsOutputRisk,
    MedianFew,
    MedianMany,
    SiOutputRisk,
}

impl FromStr for ChernoffKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "qs_output_risk" | "QsOutputRisk" => Ok(ChernoffKind::QsOutputRisk),
            "median_few" | "MedianFew" => Ok(ChernoffKind::MedianFew),
            "median_many" | "MedianMany" => Ok(ChernoffKind::MedianMany),
            "si_output_risk" | "SiOutputRisk" => Ok(ChernoffKind::SiOutputRisk),
            other => Err(Error::param(format!("unknown bound {other:?}"))),
        }
    }
}

impl ChernoffBound {
    /// Builds a bound from its name and its two parameters, in the order
    /// listed on each variant.
    pub fn from_name(name: &str, first: f64, second: f64) -> Result<Self> {
        Ok(match name.parse::<ChernoffKind>()? {
            ChernoffKind::QsOutputRisk => ChernoffBound::QsOutputRisk { delta_u: first, epsilon: second },
            ChernoffKind::MedianFew => ChernoffBound::MedianFew { delta: first, epsilon: second },
            ChernoffKind::MedianMany => ChernoffBound::MedianMany { delta: first, epsilon: second },
            ChernoffKind::SiOutputRisk => ChernoffBound::SiOutputRisk { q: first, delta: second },
        })
    }

    fn params(&self) -> [f64; 2] {
        match *self {
            ChernoffBound::QsOutputRisk { delta_u, epsilon } => [delta_u, epsilon],
            ChernoffBound::MedianFew { delta, epsilon } | ChernoffBound::MedianMany { delta, epsilon } => {
                [delta, epsilon]
            }
            ChernoffBound::SiOutputRisk { q, delta } => [q, delta],
        }
    }
}

pub fn chernoff_reference(bound: ChernoffBound) -> Result<f64> {
    if bound.params().iter().any(|&v| !(v > 0.0 && v.is_finite())) {
        return Err(Error::param(format!("bound parameters must be positive: {bound:?}")));
    }
    Ok(match bound {
        ChernoffBound::QsOutputRisk { delta_u, epsilon } => 2.0 * (-9.0 * delta_u * epsilon * epsilon / 200.0).exp(),
        ChernoffBound::MedianFew { delta, epsilon } => {
            (-0.015 * (1.0 - 2.0 * epsilon) * epsilon * epsilon * delta).exp()
        }
        ChernoffBound::MedianMany { delta, epsilon } => (-0.036 * epsilon * epsilon * delta).exp(),
        ChernoffBound::SiOutputRisk { q, delta } => (-3.0 * q * delta / 20.0).exp(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn quoted_values() {
        let qs = chernoff_reference(ChernoffBound::QsOutputRisk { delta_u: 500.0, epsilon: 0.2 }).unwrap();
        assert_abs_diff_eq!(qs, 2.0 * (-0.9f64).exp(), epsilon = 1e-15);
        assert_abs_diff_eq!(qs, 0.8131, epsilon = 1e-4);
        let many = chernoff_reference(ChernoffBound::MedianMany { delta: 1000.0, epsilon: 0.1 }).unwrap();
        assert_abs_diff_eq!(many, 0.6977, epsilon = 1e-4);
        let si = chernoff_reference(ChernoffBound::SiOutputRisk { q: 0.05, delta: 1000.0 }).unwrap();
        assert_abs_diff_eq!(si, 5.53e-4, epsilon = 1e-6);
        let few = chernoff_reference(ChernoffBound::MedianFew { delta: 1e5, epsilon: 0.1 }).unwrap();
        assert_abs_diff_eq!(few, (-0.015f64 * 0.8 * 0.01 * 1e5).exp(), epsilon = 1e-15);
    }

    #[test]
    fn names_and_errors() {
        let b = ChernoffBound::from_name("si_output_risk", 0.05, 1000.0).unwrap();
        assert_eq!(b, ChernoffBound::SiOutputRisk { q: 0.05, delta: 1000.0 });
        assert!(matches!(ChernoffBound::from_name("bogus", 1.0, 1.0), Err(Error::InvalidParameter(_))));
        assert!(chernoff_reference(ChernoffBound::MedianMany { delta: -1.0, epsilon: 0.1 }).is_err());
    }
}
