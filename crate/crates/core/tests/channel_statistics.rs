//! Distributional checks of the noise channel in both emission modes.

use covert_core::channel::{Channel, Message, Mode};
use covert_core::graph::{build_complete, build_random_regular};
use covert_core::rng::{derive, Stream};

const DRAWS: u64 = 4000;

/// Signal of sender 0 as received by agents 1 and 2, over independent rounds.
fn paired_signals(mode: Mode, message: f64) -> Vec<(f64, f64)> {
    let net = build_complete(3).unwrap();
    let messages = vec![Message(message); 3];
    (0..DRAWS)
        .map(|t| {
            let mut rx = derive(77, t, Stream::ReceiverNoise);
            let mut px = derive(77, t, Stream::PoliceNoise);
            let tr = Channel::unit().emit(mode, &messages, &net, &mut rx, &mut px).unwrap();
            let from = |j: usize| tr.received_from(&net, j).find(|(s, _)| *s == 0).unwrap().1;
            (from(1), from(2))
        })
        .collect()
}

fn mean_var(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var)
}

fn correlation(pairs: &[(f64, f64)]) -> f64 {
    let a: Vec<f64> = pairs.iter().map(|p| p.0).collect();
    let b: Vec<f64> = pairs.iter().map(|p| p.1).collect();
    let (ma, va) = mean_var(&a);
    let (mb, vb) = mean_var(&b);
    let cov = pairs.iter().map(|(x, y)| (x - ma) * (y - mb)).sum::<f64>() / (pairs.len() as f64 - 1.0);
    cov / (va * vb).sqrt()
}

/// Two-sample Kolmogorov-Smirnov statistic.
fn ks_statistic(mut a: Vec<f64>, mut b: Vec<f64>) -> f64 {
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (mut i, mut j, mut d) = (0usize, 0usize, 0.0f64);
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / a.len() as f64 - j as f64 / b.len() as f64).abs());
    }
    d
}

#[test]
fn received_signals_have_unit_noise_around_the_message() {
    for mode in [Mode::Public, Mode::Private] {
        let first: Vec<f64> = paired_signals(mode, 0.2).iter().map(|p| p.0).collect();
        let (mean, var) = mean_var(&first);
        // 4 standard errors of the sample mean and variance
        assert!((mean - 0.2).abs() < 4.0 / (DRAWS as f64).sqrt(), "{mode}: mean {mean}");
        assert!((var - 1.0).abs() < 4.0 * (2.0 / DRAWS as f64).sqrt(), "{mode}: variance {var}");
    }
}

#[test]
fn copies_held_by_different_receivers_are_independent() {
    for mode in [Mode::Public, Mode::Private] {
        let pairs = paired_signals(mode, 0.0);
        assert!(pairs.iter().all(|(a, b)| a != b));
        let r = correlation(&pairs);
        assert!(r.abs() < 4.0 / (DRAWS as f64).sqrt(), "{mode}: correlation {r}");
    }
}

#[test]
fn marginal_signal_law_does_not_depend_on_mode() {
    let net = build_random_regular(10_000, 10, 8).unwrap();
    let messages = vec![Message(0.5); net.n()];
    let sample = |mode: Mode, trial: u64| {
        let mut rx = derive(21, trial, Stream::ReceiverNoise);
        let mut px = derive(21, trial, Stream::PoliceNoise);
        let tr = Channel::unit().emit(mode, &messages, &net, &mut rx, &mut px).unwrap();
        (0..net.n()).flat_map(|j| tr.received(j).to_vec()).collect::<Vec<f64>>()
    };
    let public = sample(Mode::Public, 0);
    let private = sample(Mode::Private, 1);
    assert_eq!(public.len(), 100_000);
    let d = ks_statistic(public, private);
    // critical value at level 0.01 for two samples of 10^5
    let critical = 1.628 * (2.0 / 100_000f64).sqrt();
    assert!(d < critical, "KS statistic {d} >= {critical}");
}

#[test]
fn police_views_have_one_copy_per_transmission() {
    let net = build_random_regular(60, 6, 3).unwrap();
    let messages = vec![Message::ZERO; 60];
    let mut rx = derive(5, 0, Stream::ReceiverNoise);
    let mut px = derive(5, 0, Stream::PoliceNoise);
    let public = Channel::unit().emit(Mode::Public, &messages, &net, &mut rx, &mut px).unwrap();
    let private = Channel::unit().emit(Mode::Private, &messages, &net, &mut rx, &mut px).unwrap();
    for i in 0..60 {
        assert_eq!(public.police_view(i).len(), 1);
        assert_eq!(private.police_view(i).len(), net.degree(i));
        assert_eq!(public.received(i).len(), net.degree(i));
    }
}

#[test]
fn police_view_is_independent_of_receiver_noise() {
    let public = {
        let net = build_complete(3).unwrap();
        let messages = vec![Message::ZERO; 3];
        (0..DRAWS)
            .map(|t| {
                let mut rx = derive(11, t, Stream::ReceiverNoise);
                let mut px = derive(11, t, Stream::PoliceNoise);
                let tr = Channel::unit().emit(Mode::Public, &messages, &net, &mut rx, &mut px).unwrap();
                let heard = tr.received_from(&net, 1).next().unwrap().1;
                (tr.police_view(0)[0], heard)
            })
            .collect::<Vec<_>>()
    };
    let r = correlation(&public);
    assert!(r.abs() < 4.0 / (DRAWS as f64).sqrt(), "police/receiver correlation {r}");
}
