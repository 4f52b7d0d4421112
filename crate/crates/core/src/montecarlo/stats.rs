//! Order-fixed, compensated aggregation of per-trial samples.

/// Neumaier's compensated sum.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

impl FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = Self::default();
        for x in iter {
            acc.add(x);
        }
        acc
    }
}

/// Sample mean with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub mean: f64,
    pub stderr: f64,
    pub samples: usize,
}

impl Estimate {
    /// `|mean - reference|` in units of the standard error.
    pub fn z_score(&self, reference: f64) -> f64 {
        let d = (self.mean - reference).abs();
        if self.stderr > 0.0 {
            d / self.stderr
        } else if d == 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    }
}

/// Mean and `s/√n` of the samples, summed in the given order.
pub fn mean_estimate(samples: &[f64]) -> Estimate {
    let n = samples.len();
    if n == 0 {
        return Estimate {
            mean: f64::NAN,
            stderr: f64::NAN,
            samples: 0,
        };
    }
    let mean = samples.iter().copied().collect::<CompensatedSum>().value() / n as f64;
    let stderr = if n > 1 {
        let ss = samples
            .iter()
            .map(|x| (x - mean) * (x - mean))
            .collect::<CompensatedSum>()
            .value();
        (ss / ((n - 1) as f64 * n as f64)).sqrt()
    } else {
        0.0
    };
    Estimate {
        mean,
        stderr,
        samples: n,
    }
}

/// Ratio of sums `Σa / Σb` with a delta-method standard error.
pub fn ratio_estimate(numer: &[f64], denom: &[f64]) -> Estimate {
    let n = numer.len().min(denom.len());
    if n == 0 {
        return Estimate {
            mean: f64::NAN,
            stderr: f64::NAN,
            samples: 0,
        };
    }
    let a = numer[..n].iter().copied().collect::<CompensatedSum>().value();
    let b = denom[..n].iter().copied().collect::<CompensatedSum>().value();
    let ratio = a / b;
    let stderr = if n > 1 {
        let mean_b = b / n as f64;
        let ss = numer[..n]
            .iter()
            .zip(&denom[..n])
            .map(|(x, y)| (x - ratio * y).powi(2))
            .collect::<CompensatedSum>()
            .value();
        (ss / ((n - 1) as f64 * n as f64)).sqrt() / mean_b
    } else {
        0.0
    };
    Estimate {
        mean: ratio,
        stderr,
        samples: n,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compensated_sum_recovers_small_terms() {
        let xs = [1e16, 1.0, -1e16, 1.0];
        assert_eq!(xs.iter().copied().collect::<CompensatedSum>().value(), 2.0);
    }

    #[test]
    fn mean_and_stderr() {
        let e = mean_estimate(&[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(e.mean, 2.5);
        assert!((e.stderr - (5.0f64 / 3.0 / 4.0).sqrt()).abs() < 1e-15);
        assert_eq!(e.z_score(2.5), 0.0);
        assert!(mean_estimate(&[]).mean.is_nan());
        assert_eq!(mean_estimate(&[3.0]).stderr, 0.0);
    }

    #[test]
    fn ratio_of_sums() {
        let e = ratio_estimate(&[1.0, 3.0], &[2.0, 2.0]);
        assert_eq!(e.mean, 1.0);
        let exact = ratio_estimate(&[2.0, 4.0, 6.0], &[1.0, 2.0, 3.0]);
        assert_eq!(exact.mean, 2.0);
        assert_eq!(exact.stderr, 0.0);
    }
}
