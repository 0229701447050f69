//! Exact per-rebel decision probabilities.
//!
//! These are computed analytically from the signal model and never touch the
//! simulator, so they serve as reference values for Monte Carlo checks.
//!
//! Neighbour roles are independent, so for a rebel of degree `d` the number
//! of rebel neighbours is `Bin(d, rho)` and all noise terms are independent.

use statrs::function::gamma::ln_gamma;

use super::normal::normal_tail;

/// Binomial probability mass function for `Bin(n, p)`, as a vector over `0..=n`.
pub fn binomial_pmf(n: usize, p: f64) -> Vec<f64> {
    if p <= 0.0 {
        let mut v = vec![0.0; n + 1];
        v[0] = 1.0;
        return v;
    }
    if p >= 1.0 {
        let mut v = vec![0.0; n + 1];
        v[n] = 1.0;
        return v;
    }
    let ln_n = ln_gamma(n as f64 + 1.0);
    let (lp, lq) = (p.ln(), (1.0 - p).ln());
    (0..=n)
        .map(|k| {
            let k_f = k as f64;
            (ln_n - ln_gamma(k_f + 1.0) - ln_gamma((n - k) as f64 + 1.0) + k_f * lp + (n - k) as f64 * lq).exp()
        })
        .collect()
}

/// `P(X > threshold)` for `X ~ Bin(n, p)`.
pub fn binomial_tail_gt(n: usize, p: f64, threshold: f64) -> f64 {
    if threshold < 0.0 {
        return 1.0;
    }
    let first = threshold.floor() as usize + 1;
    if first > n {
        return 0.0;
    }
    binomial_pmf(n, p)[first..].iter().sum::<f64>().min(1.0)
}

/// Probability that a Quorum-Sensing rebel of degree `degree >= median`
/// outputs "many": `P((eps K + fixed_sum + sqrt(degree) Z) / degree >= eps / 2)`
/// where `K ~ Bin(random_neighbors, rho)` counts rebel neighbours and
/// `fixed_sum` is the total message of neighbours with a fixed role.
pub fn qs_many_probability_with_fixed(
    degree: usize,
    random_neighbors: usize,
    fixed_sum: f64,
    rho: f64,
    epsilon: f64,
) -> f64 {
    let d = degree as f64;
    binomial_pmf(random_neighbors, rho)
        .iter()
        .enumerate()
        .map(|(k, w)| {
            let mean_total = epsilon * k as f64 + fixed_sum;
            // need sum of noise >= d eps / 2 - mean_total, noise ~ N(0, d)
            w * normal_tail((d * epsilon / 2.0 - mean_total) / d.sqrt())
        })
        .sum()
}

pub fn qs_many_probability(degree: usize, rho: f64, epsilon: f64) -> f64 {
    qs_many_probability_with_fixed(degree, degree, 0.0, rho, epsilon)
}

/// Probability that one signal from a random neighbour is strictly above
/// `eps`: a rebel's signal is above its mean with probability 1/2, an
/// obedient one with probability `psi(eps)`, and an undercover agent running
/// a huge positive attack always is.
pub fn median_high_probability(rho: f64, epsilon: f64, undercover_prob: f64) -> f64 {
    undercover_prob + (1.0 - undercover_prob) * (0.5 * rho + (1.0 - rho) * normal_tail(epsilon))
}

/// `P(fixed_high + Bin(degree - fixed_count, p_high) > fraction * degree)`.
pub fn median_many_probability(
    degree: usize,
    p_high: f64,
    threshold_fraction: f64,
    fixed_count: usize,
    fixed_high: usize,
) -> f64 {
    let threshold = threshold_fraction * degree as f64 - fixed_high as f64;
    binomial_tail_gt(degree - fixed_count, p_high, threshold)
}

/// `P(Bin(degree, rho q) > tau degree / median)` for a gated rebel.
pub fn si_many_probability(degree: usize, median: usize, q: f64, tau: f64, rho: f64) -> f64 {
    binomial_tail_gt(degree, rho * q, tau * degree as f64 / median as f64)
}

/// `P(X >= ceil(fraction * count))` for `X ~ Bin(count, p)`: the chance that
/// at least `fraction` of `count` independent rebels output "many".
pub fn at_least_fraction_probability(count: usize, p: f64, fraction: f64) -> f64 {
    let needed = (fraction * count as f64).ceil();
    binomial_tail_gt(count, p, needed - 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::normal_cdf;
    use approx::assert_abs_diff_eq;

    #[test]
    fn pmf_sums_to_one() {
        for (n, p) in [(10, 0.3), (1000, 0.5), (500, 0.02)] {
            let total: f64 = binomial_pmf(n, p).iter().sum();
            assert_abs_diff_eq!(total, 1.0, epsilon = 1e-10);
        }
        assert_eq!(binomial_pmf(3, 0.0), vec![1.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn small_tail_by_hand() {
        // Bin(4, 1/2): P(X > 2) = (4 + 1) / 16
        assert_abs_diff_eq!(binomial_tail_gt(4, 0.5, 2.0), 5.0 / 16.0, epsilon = 1e-14);
        assert_abs_diff_eq!(binomial_tail_gt(4, 0.5, 2.5), 5.0 / 16.0, epsilon = 1e-14);
        assert_eq!(binomial_tail_gt(4, 0.5, -0.5), 1.0);
        assert_eq!(binomial_tail_gt(4, 0.5, 4.0), 0.0);
    }

    #[test]
    fn quorum_sensing_close_to_gaussian_approximation() {
        // ignoring the role variance, mean ~ N(rho eps, 1/d)
        let approx = normal_cdf(0.06 * 200f64.sqrt());
        let exact = qs_many_probability(200, 0.8, 0.2);
        assert!((exact - approx).abs() < 2e-3, "{exact} vs {approx}");
        // Phi(0.06 sqrt 200) from mpmath
        assert_abs_diff_eq!(approx, 0.801_928_045_423_963, epsilon = 1e-12);
        let risk = qs_many_probability(200, 0.2, 0.2);
        assert!((risk - 0.1982).abs() < 2e-3, "{risk}");
    }

    #[test]
    fn all_rebel_median_probability() {
        // rho = 1: every signal is high with probability exactly 1/2
        assert_abs_diff_eq!(median_high_probability(1.0, 0.1, 0.0), 0.5);
        let p = median_many_probability(1000, 0.5, 0.5 - 7.0 / 300.0, 0, 0);
        // Bin(1000, 1/2) > 476.67, i.e. X >= 477
        let direct = binomial_tail_gt(1000, 0.5, 476.0);
        assert_abs_diff_eq!(p, direct, epsilon = 1e-15);
        assert!(p > 0.9 && p < 0.95, "{p}");
    }

    #[test]
    fn fraction_probability() {
        // two fair coins, at least half heads = 3/4
        assert_abs_diff_eq!(at_least_fraction_probability(2, 0.5, 0.5), 0.75, epsilon = 1e-14);
        assert_abs_diff_eq!(at_least_fraction_probability(3, 0.5, 1.0 / 3.0), 7.0 / 8.0, epsilon = 1e-14);
    }
}
