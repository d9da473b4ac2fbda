//! Streaming statistics, batch-means confidence intervals, empirical CDFs
//! and a one-sample Kolmogorov-Smirnov statistic.

/// Running mean and variance (Welford).
#[derive(Debug, Clone, Default)]
pub struct Welford {
    n: usize,
    mean: f64,
    m2: f64,
}

impl Welford {
    pub fn push(&mut self, x: f64) {
        self.n += 1;
        let d = x - self.mean;
        self.mean += d / self.n as f64;
        self.m2 += d * (x - self.mean);
    }

    pub fn count(&self) -> usize {
        self.n
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    pub fn variance(&self) -> f64 {
        if self.n < 2 {
            0.0
        } else {
            self.m2 / (self.n - 1) as f64
        }
    }
}

/// 97.5% Student-t quantile for `df = n - 1`, tabulated for the batch
/// counts in use.
fn t_975(df: usize) -> f64 {
    const TABLE: [(usize, f64); 8] = [
        (1, 12.706),
        (2, 4.303),
        (3, 3.182),
        (4, 2.776),
        (9, 2.262),
        (19, 2.093),
        (29, 2.045),
        (59, 2.001),
    ];
    for &(d, t) in &TABLE {
        if df <= d {
            return t;
        }
    }
    1.96
}

/// 95% half-width from batch means: split `samples` into `batches`
/// consecutive batches, take the t-interval of the batch means.
pub fn batch_means_halfwidth(samples: &[f64], batches: usize) -> f64 {
    if samples.len() < batches * 2 || batches < 2 {
        return f64::NAN;
    }
    let per = samples.len() / batches;
    let means: Vec<f64> = (0..batches)
        .map(|b| {
            let chunk = &samples[b * per..(b + 1) * per];
            chunk.iter().sum::<f64>() / per as f64
        })
        .collect();
    halfwidth_of_means(&means)
}

/// 95% t half-width of a small set of replicate means.
pub fn halfwidth_of_means(means: &[f64]) -> f64 {
    let n = means.len();
    if n < 2 {
        return f64::NAN;
    }
    let m = means.iter().sum::<f64>() / n as f64;
    let var = means.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (n - 1) as f64;
    t_975(n - 1) * (var / n as f64).sqrt()
}

/// Empirical CDF of `sorted` evaluated at each grid point.
pub fn empirical_cdf(sorted: &[f64], grid: &[f64]) -> Vec<(f64, f64)> {
    grid.iter()
        .map(|&t| {
            let k = sorted.partition_point(|&x| x <= t);
            (t, k as f64 / sorted.len().max(1) as f64)
        })
        .collect()
}

/// One-sample KS statistic of `samples` against the exponential CDF with
/// the given rate. Sorts a copy.
pub fn ks_statistic_exponential(samples: &[f64], rate: f64) -> f64 {
    if samples.is_empty() {
        return f64::NAN;
    }
    let mut xs = samples.to_vec();
    xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = xs.len() as f64;
    let mut d: f64 = 0.0;
    for (i, &x) in xs.iter().enumerate() {
        let f = 1.0 - (-rate * x).exp();
        let lo = f - i as f64 / n;
        let hi = (i + 1) as f64 / n - f;
        d = d.max(lo).max(hi);
    }
    d
}

/// Asymptotic KS critical value at the 1% level.
pub fn ks_critical_1pct(n: usize) -> f64 {
    1.628 / (n as f64).sqrt()
}
