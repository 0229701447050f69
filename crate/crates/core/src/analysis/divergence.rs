//! Distances between the obedient signal law `N(0, 1)` and the rebel signal
//! law `N(eps, 1)`, and the normal-tail bounds behind the median rule.

use super::normal::{normal_cdf, normal_pdf, normal_tail};
use super::quadrature::integrate;
use std::f64::consts::{PI, SQRT_2};

/// `KL(N(0,1) || N(eps,1)) = eps^2 / 2`.
pub fn kl_gauss(epsilon: f64) -> f64 {
    epsilon * epsilon / 2.0
}

/// Total variation between `k` i.i.d. copies of `N(0,1)` and of `N(eps,1)`:
/// `2 Phi(eps sqrt(k) / 2) - 1`. This is the best advantage any test can have.
///
/// # Panics
///
/// Panics if `copies == 0`.
pub fn tv_gauss(epsilon: f64, copies: usize) -> f64 {
    assert!(copies >= 1, "need at least one copy");
    let shift = epsilon.abs() * (copies as f64).sqrt() / 2.0;
    // 2 Phi(s) - 1 = 1 - 2 Q(s), better conditioned for small and large s
    1.0 - 2.0 * normal_tail(shift)
}

/// Pinsker's bound on the single-copy total variation, `eps / sqrt(2)`.
pub fn pinsker_bound(epsilon: f64) -> f64 {
    epsilon.abs() / SQRT_2
}

/// `1/2 * integral |p0 - p1|`, by quadrature split at the crossing point.
pub fn tv_gauss_quadrature(epsilon: f64) -> f64 {
    let gap = |x: f64| 0.5 * (normal_pdf(x) - normal_pdf(x - epsilon)).abs();
    let mid = epsilon / 2.0;
    let span = 40.0;
    integrate(gap, mid - span, mid, 1e-14) + integrate(gap, mid, mid + span, 1e-14)
}

/// `integral p0 log(p0 / p1)`, by quadrature of the literal integrand.
pub fn kl_gauss_quadrature(epsilon: f64) -> f64 {
    let integrand = |x: f64| {
        let log_ratio = (-x * x / 2.0) - (-(x - epsilon) * (x - epsilon) / 2.0);
        normal_pdf(x) * log_ratio
    };
    integrate(integrand, -40.0, 40.0, 1e-13)
}

/// The `psi` approximation `(1 - sqrt(1 - exp(-sqrt(pi/8) eps^2))) / 2`.
pub fn psi_polya(epsilon: f64) -> f64 {
    let inner = 1.0 - (-(PI / 8.0).sqrt() * epsilon * epsilon).exp();
    (1.0 - inner.sqrt()) / 2.0
}

/// Slack allowed around [`psi_polya`].
pub const PSI_SLACK: f64 = 1.0 / 500.0;

/// Range on which the linear bounds are claimed.
pub const PSI_RANGE: (f64, f64) = (0.04, 0.2);

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PsiBoundCheck {
    pub epsilon: f64,
    /// Exact tail `psi(eps) = P(Z >= eps)`.
    pub psi: f64,
    pub polya: f64,
    /// `psi >= polya - 1/500 > (1 - 2 eps) / 2`.
    pub lower_ok: bool,
    /// `psi <= polya + 1/500 < (1 - 2 eps / 3) / 2`.
    pub upper_ok: bool,
    /// Set when `eps` lies outside `[0.04, 0.2]`.
    pub range_warning: bool,
}

pub fn psi_bound_check(epsilon: f64) -> PsiBoundCheck {
    let psi = normal_tail(epsilon);
    let polya = psi_polya(epsilon);
    let lower = polya - PSI_SLACK;
    let upper = polya + PSI_SLACK;
    PsiBoundCheck {
        epsilon,
        psi,
        polya,
        lower_ok: psi >= lower && lower > 0.5 * (1.0 - 2.0 * epsilon),
        upper_ok: psi <= upper && upper < 0.5 * (1.0 - 2.0 * epsilon / 3.0),
        range_warning: !(PSI_RANGE.0..=PSI_RANGE.1).contains(&epsilon),
    }
}

/// Sanity route for [`tv_gauss`] with one copy: `Phi(eps/2) - Phi(-eps/2)`.
pub fn tv_gauss_via_cdf(epsilon: f64) -> f64 {
    normal_cdf(epsilon / 2.0) - normal_cdf(-epsilon / 2.0)
}
