//! Scoring of confidence estimators.
//!
//! Each evaluated fix becomes an [`EvalRecord`] pairing the true localization
//! error with the radius the estimator emitted. The signed error difference
//! (`actual - radius`) is positive when the true location fell outside the
//! circle and negative or zero when it was inside; the absolute error
//! difference is its magnitude.

use crate::error::{Error, Result};
use crate::special_math::erf;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalRecord {
    pub actual_error: f64,
    pub estimated_radius: f64,
}

impl EvalRecord {
    pub fn new(actual_error: f64, estimated_radius: f64) -> Result<Self> {
        for v in [actual_error, estimated_radius] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::Domain {
                    value: v,
                    domain: "[0, inf)",
                });
            }
        }
        Ok(EvalRecord {
            actual_error,
            estimated_radius,
        })
    }

    /// True when the actual location lies in the closed confidence disk.
    pub fn is_inside(&self) -> bool {
        sed(self) <= 0.0
    }
}

pub fn sed(record: &EvalRecord) -> f64 {
    record.actual_error - record.estimated_radius
}

pub fn aed(record: &EvalRecord) -> f64 {
    sed(record).abs()
}

/// One row of the method comparison table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SummaryRow {
    pub count: usize,
    pub median_aed: f64,
    pub inside_fraction: f64,
    pub median_positive_sed: Option<f64>,
    pub median_negative_sed: Option<f64>,
}

/// Median with the even-length convention of averaging the two middle
/// order statistics. Sorts `values` in place.
pub fn median(values: &mut [f64]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    values.sort_by(f64::total_cmp);
    let n = values.len();
    Some(if n % 2 == 1 {
        values[n / 2]
    } else {
        0.5 * (values[n / 2 - 1] + values[n / 2])
    })
}

pub fn summarize(records: &[EvalRecord]) -> Result<SummaryRow> {
    if records.is_empty() {
        return Err(Error::Empty("summarize"));
    }
    let mut aeds: Vec<f64> = records.iter().map(aed).collect();
    let seds: Vec<f64> = records.iter().map(sed).collect();
    let mut positive: Vec<f64> = seds.iter().copied().filter(|s| *s > 0.0).collect();
    let mut negative: Vec<f64> = seds.iter().copied().filter(|s| *s < 0.0).collect();
    let inside = seds.iter().filter(|s| **s <= 0.0).count();
    Ok(SummaryRow {
        count: records.len(),
        median_aed: median(&mut aeds).expect("nonempty"),
        inside_fraction: inside as f64 / records.len() as f64,
        median_positive_sed: median(&mut positive),
        median_negative_sed: median(&mut negative),
    })
}

/// Right-continuous empirical CDF with one step per distinct value.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalCdf {
    points: Vec<(f64, f64)>,
}

impl EmpiricalCdf {
    pub fn new(values: &[f64]) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Empty("empirical_cdf"));
        }
        if let Some(&bad) = values.iter().find(|v| v.is_nan()) {
            return Err(Error::Domain {
                value: bad,
                domain: "non-NaN reals",
            });
        }
        let mut sorted = values.to_vec();
        sorted.sort_by(f64::total_cmp);
        let n = sorted.len() as f64;
        let mut points: Vec<(f64, f64)> = Vec::new();
        for (i, v) in sorted.into_iter().enumerate() {
            let fraction = (i + 1) as f64 / n;
            match points.last_mut() {
                Some(last) if last.0 == v => last.1 = fraction,
                _ => points.push((v, fraction)),
            }
        }
        Ok(EmpiricalCdf { points })
    }

    pub fn points(&self) -> &[(f64, f64)] {
        &self.points
    }

    /// Fraction of samples `<= x`.
    pub fn value_at(&self, x: f64) -> f64 {
        let idx = self.points.partition_point(|(v, _)| *v <= x);
        if idx == 0 {
            0.0
        } else {
            self.points[idx - 1].1
        }
    }
}

pub fn empirical_cdf(values: &[f64]) -> Result<Vec<(f64, f64)>> {
    Ok(EmpiricalCdf::new(values)?.points)
}

pub const MIN_NORMALITY_SAMPLES: usize = 8;

/// Kolmogorov-Smirnov distance between the sample and a normal distribution
/// with the sample's own mean and standard deviation. Advisory only.
pub fn normality_diagnostic(distances: &[f64]) -> Result<f64> {
    if distances.len() < MIN_NORMALITY_SAMPLES {
        return Err(Error::InsufficientSamples {
            required: MIN_NORMALITY_SAMPLES,
            got: distances.len(),
        });
    }
    let n = distances.len() as f64;
    let mean = distances.iter().sum::<f64>() / n;
    let var = distances.iter().map(|d| (d - mean).powi(2)).sum::<f64>() / (n - 1.0);
    let sd = var.sqrt();
    if sd <= 0.0 || sd.is_nan() {
        return Err(Error::Degenerate("zero standard deviation"));
    }
    let mut sorted = distances.to_vec();
    sorted.sort_by(f64::total_cmp);
    let scale = sd * std::f64::consts::SQRT_2;
    let stat = sorted
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = 0.5 * (1.0 + erf((x - mean) / scale));
            let above = (i + 1) as f64 / n - f;
            let below = f - i as f64 / n;
            above.max(below)
        })
        .fold(0.0, f64::max);
    Ok(stat)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rec(a: f64, r: f64) -> EvalRecord {
        EvalRecord::new(a, r).unwrap()
    }

    #[test]
    fn sed_and_aed_examples() {
        assert_eq!(sed(&rec(5.0, 3.0)), 2.0);
        assert_eq!(sed(&rec(3.0, 5.0)), -2.0);
        assert_eq!(sed(&rec(1.7, 1.7)), 0.0);
        assert_eq!(aed(&rec(5.0, 3.0)), 2.0);
        assert_eq!(aed(&rec(3.0, 5.0)), 2.0);
        assert_eq!(aed(&rec(1.7, 1.7)), 0.0);
    }

    #[test]
    fn record_rejects_negative_and_nonfinite() {
        assert!(EvalRecord::new(-1.0, 0.0).is_err());
        assert!(EvalRecord::new(1.0, f64::NAN).is_err());
        assert!(EvalRecord::new(f64::INFINITY, 1.0).is_err());
    }

    #[test]
    fn cdf_examples() {
        assert_eq!(empirical_cdf(&[3.0]).unwrap(), vec![(3.0, 1.0)]);
        let c = empirical_cdf(&[4.0, 2.0, 1.0, 3.0]).unwrap();
        assert_eq!(c, vec![(1.0, 0.25), (2.0, 0.5), (3.0, 0.75), (4.0, 1.0)]);
        assert_eq!(empirical_cdf(&[2.0, 2.0, 2.0]).unwrap(), vec![(2.0, 1.0)]);
        assert!(empirical_cdf(&[]).is_err());
    }

    #[test]
    fn cdf_value_at_steps() {
        let c = EmpiricalCdf::new(&[1.0, 1.0, 2.0, 5.0]).unwrap();
        assert_eq!(c.value_at(0.5), 0.0);
        assert_eq!(c.value_at(1.0), 0.5);
        assert_eq!(c.value_at(4.9), 0.75);
        assert_eq!(c.value_at(5.0), 1.0);
    }

    #[test]
    fn summarize_examples() {
        // SEDs -2, -1, +3
        let rows = [rec(1.0, 3.0), rec(2.0, 3.0), rec(4.0, 1.0)];
        let s = summarize(&rows).unwrap();
        assert!((s.inside_fraction - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(s.median_negative_sed, Some(-1.5));
        assert_eq!(s.median_positive_sed, Some(3.0));
        assert_eq!(s.median_aed, 2.0);

        let s = summarize(&[rec(2.0, 2.0); 4]).unwrap();
        assert_eq!(s.inside_fraction, 1.0);
        assert_eq!(s.median_aed, 0.0);
        assert_eq!(s.median_positive_sed, None);
        assert_eq!(s.median_negative_sed, None);

        assert!(summarize(&[]).is_err());
    }

    #[test]
    fn median_conventions() {
        assert_eq!(median(&mut []), None);
        assert_eq!(median(&mut [3.0, 1.0, 2.0]), Some(2.0));
        assert_eq!(median(&mut [4.0, 1.0, 3.0, 2.0]), Some(2.5));
    }

    // Brute-force sup |F_n - F| over a fine grid plus both sides of every
    // sample, using a separately coded normal CDF.
    fn ks_brute_force(xs: &[f64]) -> f64 {
        let n = xs.len() as f64;
        let mean = xs.iter().sum::<f64>() / n;
        let sd = (xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt();
        let phi = |x: f64| {
            // Simpson integration of the density from mean - 12 sd.
            let z = (x - mean) / sd;
            let lo = -12.0;
            let steps = 4000;
            let h = (z - lo) / steps as f64;
            let pdf = |t: f64| (-0.5 * t * t).exp() / (2.0 * std::f64::consts::PI).sqrt();
            let mut s = pdf(lo) + pdf(z);
            for i in 1..steps {
                let w = if i % 2 == 1 { 4.0 } else { 2.0 };
                s += w * pdf(lo + i as f64 * h);
            }
            s * h / 3.0
        };
        let ecdf = |x: f64| xs.iter().filter(|v| **v <= x).count() as f64 / n;
        let mut probes: Vec<f64> = Vec::new();
        for &x in xs {
            probes.push(x);
            probes.push(x - 1e-9);
        }
        probes
            .into_iter()
            .map(|x| (ecdf(x) - phi(x)).abs())
            .fold(0.0, f64::max)
    }

    #[test]
    fn normality_on_plug_in_quantiles() {
        let n = 40;
        let xs: Vec<f64> = (1..=n)
            .map(|i| {
                let a = crate::special_math::Probability::new(i as f64 / (n + 1) as f64).unwrap();
                3.0 + 0.7 * crate::special_math::std_normal_quantile(a).unwrap()
            })
            .collect();
        let stat = normality_diagnostic(&xs).unwrap();
        let oracle = ks_brute_force(&xs);
        assert!((stat - oracle).abs() < 1e-6, "{stat} vs {oracle}");
        assert!(stat <= 1.0 / (n + 1) as f64 + 0.01, "{stat}");
    }

    #[test]
    fn normality_rejects_short_and_constant() {
        assert!(matches!(
            normality_diagnostic(&[1.0; 5]),
            Err(Error::InsufficientSamples { .. })
        ));
        assert!(matches!(
            normality_diagnostic(&[1.0; 20]),
            Err(Error::Degenerate(_))
        ));
    }

    #[test]
    fn normality_flags_uniform() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let xs: Vec<f64> = (0..10_000).map(|_| rng.random::<f64>()).collect();
        assert!(normality_diagnostic(&xs).unwrap() > 0.05);
    }

    proptest! {
        #[test]
        fn aed_is_abs_sed(a in 0.0..100.0f64, r in 0.0..100.0f64) {
            let x = rec(a, r);
            prop_assert_eq!(aed(&x), sed(&x).abs());
            prop_assert_eq!(sed(&rec(r, a)), -sed(&x));
        }

        #[test]
        fn cdf_monotone(values in prop::collection::vec(-1e3..1e3f64, 1..200)) {
            let c = empirical_cdf(&values).unwrap();
            for pair in c.windows(2) {
                prop_assert!(pair[0].0 < pair[1].0);
                prop_assert!(pair[0].1 < pair[1].1);
            }
            prop_assert_eq!(c.last().unwrap().1, 1.0);
        }

        #[test]
        fn inside_and_outside_partition(pairs in prop::collection::vec((0.0..10.0f64, 0.0..10.0f64), 1..100)) {
            let recs: Vec<_> = pairs.iter().map(|&(a, r)| rec(a, r)).collect();
            let s = summarize(&recs).unwrap();
            let outside = recs.iter().filter(|r| sed(r) > 0.0).count() as f64 / recs.len() as f64;
            prop_assert!((s.inside_fraction + outside - 1.0).abs() < 1e-12);
            let cdf = EmpiricalCdf::new(&recs.iter().map(sed).collect::<Vec<_>>()).unwrap();
            prop_assert_eq!(cdf.value_at(0.0), s.inside_fraction);
        }
    }
}
