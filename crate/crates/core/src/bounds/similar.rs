//! Belt of `N` bodies of comparable size on a common orbit.

use super::{largest_passing, positive, BoundKind, BoundValue, EpsilonBound, MaxCount, MAX_COUNT};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Lengths may be in any unit as long as all three agree.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SimilarBeltParams<T> {
    pub n: u64,
    /// Size scale `a`; every body has `a <= a_i <= 2a`.
    pub size: T,
    pub gamma: T,
    /// Body density over star density.
    pub density_ratio: T,
    pub orbit_radius: T,
    pub star_radius: T,
}

impl<T: Scalar> SimilarBeltParams<T> {
    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::invalid("n", "need at least one body"));
        }
        positive("size", self.size)?;
        positive("gamma", self.gamma)?;
        positive("density_ratio", self.density_ratio)?;
        positive("orbit_radius", self.orbit_radius)?;
        positive("star_radius", self.star_radius)
    }

    pub fn with_n(self, n: u64) -> Self {
        Self { n, ..self }
    }
}

/// Returns `(A, A_bar)` with `A = N (gamma + 1) rho 5 a^2 R / R_s^3` and `A_bar = 4A/5`.
pub fn similar_a<T: Scalar>(p: &SimilarBeltParams<T>) -> Result<(T, T)> {
    p.validate()?;
    let per_body =
        (p.gamma + T::one()) * p.density_ratio * T::of(5.0) * p.size * p.size * p.orbit_radius / p.star_radius.powi(3);
    let a = T::of(p.n as f64) * per_body;
    Ok((a, T::of(0.8) * a))
}

pub(super) fn formula<T: Scalar>(a: T, a_bar: T) -> BoundValue<T> {
    let ratio = a * a_bar.exp();
    if ratio < T::one() {
        BoundValue::Finite(a_bar.exp() * ratio / (T::one() - ratio))
    } else {
        BoundValue::Diverged
    }
}

/// `A e^{2 A_bar} / (1 - A e^{A_bar})`, or divergence once `A e^{A_bar} >= 1`.
pub fn similar_epsilon_bound<T: Scalar>(a: T, a_bar: T) -> EpsilonBound<T> {
    let ratio = a * a_bar.exp();
    EpsilonBound::new(
        BoundKind::SimilarBelt,
        formula(a, a_bar),
        &[("A", a), ("A_bar", a_bar), ("ratio", ratio)],
    )
}

/// Largest `N` for which the bound is finite and at most `eps_target`.
pub fn similar_max_n<T: Scalar>(p: &SimilarBeltParams<T>, eps_target: T) -> Result<MaxCount<T>> {
    positive("eps_target", eps_target)?;
    p.validate()?;
    let bound_at = |n: u64| -> EpsilonBound<T> {
        let (a, a_bar) = similar_a(&p.with_n(n)).expect("validated");
        similar_epsilon_bound(a, a_bar)
    };
    match largest_passing(MAX_COUNT, |n| bound_at(n).certifies(eps_target)) {
        Ok(0) => Ok(MaxCount {
            n: 0,
            bound: None,
            diagnostic: Some(format!(
                "a single body already gives {:?}, above the target {eps_target}",
                bound_at(1).value
            )),
        }),
        Ok(n) => {
            let bound = bound_at(n);
            log::debug!("similar belt: N_max = {n}, A = {:?}", bound.get("A"));
            Ok(MaxCount {
                n,
                bound: Some(bound),
                diagnostic: None,
            })
        }
        Err(limit) => Ok(MaxCount {
            n: limit,
            bound: Some(bound_at(limit)),
            diagnostic: Some(format!("target met up to the search ceiling {limit}")),
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn reference_values() {
        assert_eq!(similar_epsilon_bound(0.0, 0.0).finite(), Some(0.0));
        // A = 0.2: 0.2 e^0.32 / (1 - 0.2 e^0.16)
        let oracle = 0.2 * (0.32f64).exp() / (1.0 - 0.2 * (0.16f64).exp());
        let b = similar_epsilon_bound(0.2, 0.16).finite().unwrap();
        assert_relative_eq!(b, oracle, max_relative = 1e-15);
        assert!((b - 0.35989).abs() < 1e-4 && b <= 0.4);
        assert!(similar_epsilon_bound(1.0, 0.8).is_diverged());
    }

    #[test]
    fn a_is_linear_in_n_and_a_bar_is_four_fifths() {
        let p = SimilarBeltParams {
            n: 1000,
            size: 1.0,
            gamma: 50.0,
            density_ratio: 2.0,
            orbit_radius: 1e3,
            star_radius: 1e4,
        };
        let (a1, b1) = similar_a(&p).unwrap();
        let (a2, _) = similar_a(&p.with_n(2000)).unwrap();
        assert_eq!(a2, 2.0 * a1);
        assert_eq!(b1, 0.8 * a1);
        assert_relative_eq!(a1, 1000.0 * 51.0 * 2.0 * 5.0 * 1e3 / 1e12, max_relative = 1e-14);
    }

    #[test]
    fn max_n_contract() {
        // A(N) = N / 5e5
        let p = SimilarBeltParams {
            n: 1,
            size: 1.0,
            gamma: 1.0,
            density_ratio: 1.0,
            orbit_radius: 2e-7,
            star_radius: 1.0,
        };
        let r = similar_max_n(&p, 0.4).unwrap();
        let ok = |n| {
            let (a, ab) = similar_a(&p.with_n(n)).unwrap();
            similar_epsilon_bound(a, ab).certifies(0.4)
        };
        assert!(ok(r.n) && !ok(r.n + 1));
        assert!(r.n > 50_000 && r.n < 200_000, "{}", r.n);
        let none = similar_max_n(&p.with_n(1), 1e-9).unwrap();
        assert_eq!(none.n, 0);
        assert!(none.diagnostic.is_some());
    }

    #[test]
    fn rejects_bad_params() {
        let p = SimilarBeltParams {
            n: 0,
            size: 1.0,
            gamma: 1.0,
            density_ratio: 1.0,
            orbit_radius: 1.0,
            star_radius: 1.0,
        };
        assert!(similar_a(&p).is_err());
        assert!(similar_a(&SimilarBeltParams { n: 3, gamma: -1.0, ..p }).is_err());
    }
}
