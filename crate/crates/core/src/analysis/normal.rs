//! Standard normal distribution function, tail and quantile.

use libm::erfc;
use statrs::function::erf::erfc_inv;
use std::f64::consts::{FRAC_1_SQRT_2, SQRT_2};

/// Standard normal CDF, `P(Z <= z)`.
pub fn normal_cdf(z: f64) -> f64 {
    0.5 * erfc(-z * FRAC_1_SQRT_2)
}

/// Standard normal tail, `P(Z >= z)`. Computed directly from `erfc` so it
/// keeps full relative precision far into the upper tail.
pub fn normal_tail(z: f64) -> f64 {
    0.5 * erfc(z * FRAC_1_SQRT_2)
}

pub fn normal_pdf(z: f64) -> f64 {
    (-0.5 * z * z).exp() / (2.0 * std::f64::consts::PI).sqrt()
}

/// Inverse of [`normal_cdf`] on `(0, 1)`, polished with Newton steps
/// against [`normal_cdf`].
pub fn normal_quantile(p: f64) -> f64 {
    let mut x = -SQRT_2 * erfc_inv(2.0 * p);
    if x.is_finite() {
        for _ in 0..2 {
            let density = normal_pdf(x);
            if density == 0.0 {
                break;
            }
            x -= (normal_cdf(x) - p) / density;
        }
    }
    x
}
