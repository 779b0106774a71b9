//! Streaming moments and heavy-tail estimators.

/// Welford accumulator; `merge` makes replica reductions order-independent
/// up to rounding.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Moments {
    pub n: u64,
    pub mean: f64,
    m2: f64,
}

impl Moments {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, x: f64) {
        self.n += 1;
        let d = x - self.mean;
        self.mean += d / self.n as f64;
        self.m2 += d * (x - self.mean);
    }

    pub fn merge(&mut self, o: &Moments) {
        if o.n == 0 {
            return;
        }
        if self.n == 0 {
            *self = *o;
            return;
        }
        let n = self.n + o.n;
        let d = o.mean - self.mean;
        self.mean += d * o.n as f64 / n as f64;
        self.m2 += o.m2 + d * d * (self.n as f64) * (o.n as f64) / n as f64;
        self.n = n;
    }

    /// Unbiased sample variance.
    pub fn variance(&self) -> f64 {
        if self.n < 2 {
            return f64::NAN;
        }
        self.m2 / (self.n - 1) as f64
    }

    /// Standard error of the mean.
    pub fn se(&self) -> f64 {
        (self.variance() / self.n as f64).sqrt()
    }

    /// `(mean - target)/se`.
    pub fn z(&self, target: f64) -> f64 {
        (self.mean - target) / self.se()
    }
}

impl FromIterator<f64> for Moments {
    fn from_iter<I: IntoIterator<Item = f64>>(it: I) -> Self {
        let mut m = Moments::new();
        for x in it {
            m.push(x);
        }
        m
    }
}

pub const DEFAULT_BLOCKS: usize = 32;

/// Median of the means of `blocks` consecutive blocks. Any remainder goes to
/// the last block.
pub fn median_of_means(xs: &[f64], blocks: usize) -> f64 {
    assert!(blocks >= 1 && xs.len() >= blocks, "need at least one sample per block");
    let size = xs.len() / blocks;
    let mut means: Vec<f64> = (0..blocks)
        .map(|b| {
            let end = if b + 1 == blocks { xs.len() } else { (b + 1) * size };
            let s = &xs[b * size..end];
            s.iter().sum::<f64>() / s.len() as f64
        })
        .collect();
    median(&mut means)
}

/// Median of ratio estimates `Σnum/Σden` over blocks, for weighted samples.
pub fn median_of_ratios(num: &[f64], den: &[f64], blocks: usize) -> f64 {
    assert_eq!(num.len(), den.len());
    assert!(blocks >= 1 && num.len() >= blocks);
    let size = num.len() / blocks;
    let mut r: Vec<f64> = (0..blocks)
        .map(|b| {
            let end = if b + 1 == blocks { num.len() } else { (b + 1) * size };
            num[b * size..end].iter().sum::<f64>() / den[b * size..end].iter().sum::<f64>()
        })
        .collect();
    median(&mut r)
}

/// Median; sorts `xs` in place.
pub fn median(xs: &mut [f64]) -> f64 {
    assert!(!xs.is_empty());
    xs.sort_by(f64::total_cmp);
    let m = xs.len() / 2;
    if xs.len() % 2 == 1 {
        xs[m]
    } else {
        0.5 * (xs[m - 1] + xs[m])
    }
}

/// Empirical `q`-quantile (nearest rank); sorts in place.
pub fn quantile(xs: &mut [f64], q: f64) -> f64 {
    assert!(!xs.is_empty() && (0.0..=1.0).contains(&q));
    xs.sort_by(f64::total_cmp);
    let k = ((q * xs.len() as f64).ceil() as usize).clamp(1, xs.len());
    xs[k - 1]
}

/// Two-sample z for proportions `a/na` and `b/nb`, pooled.
pub fn two_proportion_z(a: u64, na: u64, b: u64, nb: u64) -> f64 {
    let (pa, pb) = (a as f64 / na as f64, b as f64 / nb as f64);
    let p = (a + b) as f64 / (na + nb) as f64;
    let se = (p * (1.0 - p) * (1.0 / na as f64 + 1.0 / nb as f64)).sqrt();
    if se == 0.0 {
        0.0
    } else {
        (pa - pb) / se
    }
}

/// Percentile bootstrap interval for the variance, resampling with `rng`.
pub fn bootstrap_variance_ci(
    xs: &[f64],
    resamples: usize,
    level: f64,
    rng: &mut impl FnMut(usize) -> usize,
) -> (f64, f64) {
    let mut vs: Vec<f64> = (0..resamples)
        .map(|_| (0..xs.len()).map(|_| xs[rng(xs.len())]).collect::<Moments>().variance())
        .collect();
    let a = (1.0 - level) / 2.0;
    (quantile(&mut vs, a), quantile(&mut vs, 1.0 - a))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn welford_matches_two_pass() {
        let xs = [1.0, 4.0, 2.5, -3.0, 7.0, 0.5];
        let m: Moments = xs.iter().copied().collect();
        let mean = xs.iter().sum::<f64>() / 6.0;
        let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / 5.0;
        assert!((m.mean - mean).abs() < 1e-14);
        assert!((m.variance() - var).abs() < 1e-12);

        let mut a: Moments = xs[..2].iter().copied().collect();
        let b: Moments = xs[2..].iter().copied().collect();
        a.merge(&b);
        assert_eq!(a.n, 6);
        assert!((a.variance() - var).abs() < 1e-12);
    }

    #[test]
    fn mom_ignores_one_wild_block() {
        let mut xs = vec![1.0; 320];
        xs[5] = 1e9;
        assert_eq!(median_of_means(&xs, 32), 1.0);
    }

    #[test]
    fn quantiles() {
        let mut xs: Vec<f64> = (1..=10).map(f64::from).collect();
        assert_eq!(quantile(&mut xs, 0.95), 10.0);
        assert_eq!(quantile(&mut xs, 0.5), 5.0);
        assert_eq!(median(&mut xs), 5.5);
    }
}
