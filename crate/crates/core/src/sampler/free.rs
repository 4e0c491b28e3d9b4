//! Exact draws from the one-body free measures.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::bounds::truncated_partition;
use crate::error::{Error, Result};
use crate::model::truncated_exponent;
use crate::scalar::Scalar;

/// Infinite stream of `(xi, theta)` with `xi ~ N(0, 1/gamma^2)`, `theta ~ U[0, 2 pi)`.
pub fn free_stream<T: Scalar>(gamma: T, seed: u64) -> Result<impl Iterator<Item = (T, T)>> {
    if !(gamma > T::zero() && gamma.is_finite()) {
        return Err(Error::invalid("gamma", format!("must be positive, got {gamma}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(std::iter::repeat_with(move || {
        let xi = T::sample_normal(&mut rng) / gamma;
        let theta = T::sample_unit(&mut rng) * T::TAU();
        (xi, theta)
    }))
}

/// `n` draws from the Gaussian free measure.
pub fn sample_free<T: Scalar>(gamma: T, n: usize, seed: u64) -> Result<Vec<(T, T)>> {
    Ok(free_stream(gamma, seed)?.take(n).collect())
}

/// Smallest acceptable expected acceptance rate of the truncated-measure rejection sampler.
pub const MIN_REJECTION_EFFICIENCY: f64 = 1e-6;

/// Rejection sampler for `exp(-(gamma^2/2) xi^2/(1+xi)^2)` on `(-1, upper]`.
///
/// Envelope: the Gaussian `exp(-(2/9) gamma^2 xi^2)`, which dominates the target wherever
/// `|xi/(1+xi)| >= 2|xi|/3`, i.e. on `(-1, 1/2]`, plus the constant `exp(-gamma^2/18)` on
/// `(1/2, upper]`, which dominates the target there.
#[derive(Clone, Debug)]
pub struct TruncatedSampler<T> {
    gamma: T,
    upper: T,
    sigma: T,
    plateau: T,
    gaussian_weight: T,
    plateau_weight: T,
    efficiency: T,
}

impl<T: Scalar> TruncatedSampler<T> {
    pub fn new(gamma: T, upper: T) -> Result<Self> {
        if !(gamma > T::zero() && gamma.is_finite()) {
            return Err(Error::invalid("gamma", format!("must be positive, got {gamma}")));
        }
        if !(upper > T::zero() && upper.is_finite()) {
            return Err(Error::invalid("upper", format!("must be positive, got {upper}")));
        }
        let half = T::of(0.5);
        let sigma = T::of(1.5) / gamma;
        let plateau = (-gamma * gamma / T::of(18.0)).exp();
        let gaussian_weight = (T::TAU()).sqrt() * sigma;
        let plateau_weight = if upper > half {
            plateau * (upper - half)
        } else {
            T::zero()
        };
        let z = truncated_partition(gamma, upper)? / T::TAU();
        let efficiency = z / (gaussian_weight + plateau_weight);
        if !(efficiency >= T::of(MIN_REJECTION_EFFICIENCY)) {
            return Err(Error::Sampler(format!(
                "rejection efficiency {:e} below {MIN_REJECTION_EFFICIENCY:e} at gamma = {gamma}, upper = {upper}",
                efficiency.to_f64_lossy()
            )));
        }
        Ok(Self {
            gamma,
            upper,
            sigma,
            plateau,
            gaussian_weight,
            plateau_weight,
            efficiency,
        })
    }

    /// Expected fraction of envelope draws that are accepted.
    pub fn efficiency(&self) -> T {
        self.efficiency
    }

    fn envelope(&self, xi: T) -> T {
        let g = (-T::of(2.0 / 9.0) * self.gamma * self.gamma * xi * xi).exp();
        if xi > T::of(0.5) {
            g + self.plateau
        } else {
            g
        }
    }

    pub fn draw<R: rand::Rng + ?Sized>(&self, rng: &mut R) -> T {
        let total = self.gaussian_weight + self.plateau_weight;
        loop {
            let xi = if T::sample_unit(rng) * total < self.gaussian_weight {
                T::sample_normal(rng) * self.sigma
            } else {
                T::of(0.5) + T::sample_unit(rng) * (self.upper - T::of(0.5))
            };
            if !(xi > -T::one()) || xi > self.upper {
                continue;
            }
            let target = (-truncated_exponent(xi, self.gamma)).exp();
            if T::sample_unit(rng) * self.envelope(xi) < target {
                return xi;
            }
        }
    }
}

/// `n` draws of `(xi, theta)` from the truncated free measure.
pub fn sample_free_truncated<T: Scalar>(gamma: T, upper: T, n: usize, seed: u64) -> Result<Vec<(T, T)>> {
    let sampler = TruncatedSampler::new(gamma, upper)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok((0..n)
        .map(|_| {
            let xi = sampler.draw(&mut rng);
            (xi, T::sample_unit(&mut rng) * T::TAU())
        })
        .collect())
}
