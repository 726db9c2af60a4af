//! Test-only reference implementations, written without touching the
//! library's estimator path.

#![allow(dead_code, clippy::needless_range_loop)]

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Plain Maclaurin series for erf; fine for |x| <= 3.
pub fn erf_maclaurin(x: f64) -> f64 {
    let mut sum = 0.0;
    let mut power = x; // x^(2n+1)
    let mut factorial = 1.0; // n!
    for n in 0..200 {
        let nf = n as f64;
        if n > 0 {
            factorial *= nf;
            power *= x * x;
        }
        let term = power / (factorial * (2.0 * nf + 1.0));
        if n % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
        if term.abs() < 1e-18 {
            break;
        }
    }
    sum * 2.0 / std::f64::consts::PI.sqrt()
}

/// Normal quantile by bisection on the reference erf.
pub fn quantile_bisect(alpha: f64) -> f64 {
    let cdf = |z: f64| 0.5 * (1.0 + erf_maclaurin(z / std::f64::consts::SQRT_2));
    let (mut lo, mut hi) = (-4.0f64, 4.0f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if cdf(mid) < alpha {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Direct loop transcription of the window estimator. Returns
/// (center_x, center_y, radius).
pub fn naive_radius(points: &[(f64, f64)], alpha: f64) -> (f64, f64, f64) {
    let w = points.len();
    let mut cx = 0.0;
    let mut cy = 0.0;
    for i in 0..w {
        cx += points[i].0;
        cy += points[i].1;
    }
    cx /= w as f64;
    cy /= w as f64;
    let mut d = vec![0.0; w];
    for i in 0..w {
        let dx = points[i].0 - cx;
        let dy = points[i].1 - cy;
        d[i] = (dx * dx + dy * dy).sqrt();
    }
    let mut mu = 0.0;
    for i in 0..w {
        mu += d[i];
    }
    mu /= w as f64;
    let mut var = 0.0;
    for i in 0..w {
        var += (d[i] - mu) * (d[i] - mu);
    }
    var /= (w - 1) as f64;
    let r = mu + var.sqrt() * quantile_bisect(alpha);
    (cx, cy, if r < 0.0 { 0.0 } else { r })
}

pub fn gaussian<R: Rng>(rng: &mut R) -> f64 {
    // Box-Muller, independent of the library's sampler.
    let u1: f64 = 1.0 - rng.random::<f64>();
    let u2: f64 = rng.random::<f64>();
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

/// Monte Carlo coverage of the window estimator under the normal
/// distance-error model: draw fixes at N(mu, sigma) meters in random
/// directions, slide a window of `w`, and count how often the newest fix's
/// true error is within the radius.
pub fn coverage_oracle(
    mu: f64,
    sigma: f64,
    w: usize,
    alpha: f64,
    windows: usize,
    seed: u64,
) -> f64 {
    let mut r = rng(seed);
    let z = quantile_bisect(alpha);
    let mut fixes: Vec<(f64, f64)> = Vec::new();
    let mut inside = 0usize;
    for _ in 0..(windows + w - 1) {
        let dist = (mu + sigma * gaussian(&mut r)).max(0.0);
        let theta = r.random::<f64>() * std::f64::consts::TAU;
        fixes.push((dist * theta.cos(), dist * theta.sin()));
        if fixes.len() < w {
            continue;
        }
        let win = &fixes[fixes.len() - w..];
        let (cx, cy, _) = naive_radius(win, 0.5);
        let d: Vec<f64> = win
            .iter()
            .map(|p| ((p.0 - cx).powi(2) + (p.1 - cy).powi(2)).sqrt())
            .collect();
        let m = d.iter().sum::<f64>() / w as f64;
        let s = (d.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (w - 1) as f64).sqrt();
        let radius = (m + s * z).max(0.0);
        let newest = win[w - 1];
        if (newest.0 * newest.0 + newest.1 * newest.1).sqrt() <= radius {
            inside += 1;
        }
    }
    inside as f64 / windows as f64
}
