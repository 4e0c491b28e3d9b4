//! Streaming batch-means accumulators. Observations are folded in as they arrive; only the
//! batch means are kept.

/// Number of batches per chain.
pub const BATCHES: usize = 50;

/// Batch means of one scalar observable over a known number of observations.
#[derive(Clone, Debug)]
pub(crate) struct BatchMeans {
    batch_size: usize,
    in_batch: usize,
    batch_sum: f64,
    pub(crate) means: Vec<f64>,
    count: usize,
    mean: f64,
    m2: f64,
}

impl BatchMeans {
    pub(crate) fn new(batch_size: usize) -> Self {
        Self {
            batch_size: batch_size.max(1),
            in_batch: 0,
            batch_sum: 0.0,
            means: Vec::with_capacity(BATCHES),
            count: 0,
            mean: 0.0,
            m2: 0.0,
        }
    }

    pub(crate) fn push(&mut self, x: f64) {
        self.count += 1;
        let d = x - self.mean;
        self.mean += d / self.count as f64;
        self.m2 += d * (x - self.mean);
        self.batch_sum += x;
        self.in_batch += 1;
        if self.in_batch == self.batch_size {
            self.means.push(self.batch_sum / self.batch_size as f64);
            self.batch_sum = 0.0;
            self.in_batch = 0;
        }
    }

    pub(crate) fn count(&self) -> usize {
        self.count
    }

    pub(crate) fn mean(&self) -> f64 {
        self.mean
    }

    /// Sample variance of the individual observations.
    pub(crate) fn variance(&self) -> f64 {
        if self.count < 2 {
            0.0
        } else {
            self.m2 / (self.count - 1) as f64
        }
    }

    pub(crate) fn batch_size(&self) -> usize {
        self.batch_size
    }
}

/// Standard error and integrated autocorrelation time from the batch means of several
/// equally long chains.
pub(crate) fn pooled_error(parts: &[&BatchMeans]) -> (f64, f64) {
    let means: Vec<f64> = parts.iter().flat_map(|p| p.means.iter().copied()).collect();
    let k = means.len();
    if k < 2 {
        return (f64::INFINITY, f64::INFINITY);
    }
    let grand = means.iter().sum::<f64>() / k as f64;
    let var_means = means.iter().map(|m| (m - grand).powi(2)).sum::<f64>() / (k - 1) as f64;
    let se = (var_means / k as f64).sqrt();
    let var_obs = parts.iter().map(|p| p.variance()).sum::<f64>() / parts.len() as f64;
    let batch = parts[0].batch_size() as f64;
    let tau = if var_obs > 0.0 {
        batch * var_means / var_obs
    } else if var_means == 0.0 {
        1.0
    } else {
        f64::INFINITY
    };
    (se, tau)
}
