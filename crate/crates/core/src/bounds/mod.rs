//! Upper bounds on the relative radial variance `epsilon` of a belt or planet chain.
//!
//! Each closed form returns an [`EpsilonBound`] carrying the constants it was computed
//! from, so a report can be re-derived from its logged intermediates alone. Divergence of
//! a geometric series is an ordinary result ([`BoundValue::Diverged`]), not an error.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

mod planets;
mod powerlaw;
mod similar;
mod tree;
mod truncated;

pub use planets::{
    collision_condition, planet_constants, planet_constants_for_mass, planets_epsilon_bar,
    planets_epsilon_bar_explicit, planets_max_mass, BoundForm, MaxMass, PlanetChainParams, PlanetConstants,
};
pub use powerlaw::{
    powerlaw_a, powerlaw_class_size, powerlaw_epsilon_bound, powerlaw_max_n, powerlaw_w, small_asteroid_condition,
    small_asteroid_prefactor, small_asteroid_tail_bound, PowerLawBeltParams,
};
pub use similar::{similar_a, similar_epsilon_bound, similar_max_n, SimilarBeltParams};
pub use tree::{tree_bound_small_n, tree_bound_uniform};
pub use truncated::{gaussian_variance_bracket, truncated_partition, truncated_second_moment, truncated_tail_bound};

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum BoundValue<T> {
    Finite(T),
    /// The series behind the bound does not converge for these parameters.
    Diverged,
}

/// Which closed form produced a bound; determines how [`EpsilonBound::reevaluate`] reads
/// the intermediates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BoundKind {
    /// Uses `A`, `A_bar`.
    SimilarBelt,
    /// Uses `A`, `L`.
    PowerLawBelt,
    /// Uses `c3`, `N`, `a`.
    PlanetsClosed,
    /// Uses `c3`, `N`, `a`.
    PlanetsExplicit,
}

impl BoundKind {
    pub fn name(&self) -> &'static str {
        match self {
            BoundKind::SimilarBelt => "similar-belt",
            BoundKind::PowerLawBelt => "power-law-belt",
            BoundKind::PlanetsClosed => "planets-closed",
            BoundKind::PlanetsExplicit => "planets-explicit",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EpsilonBound<T> {
    pub value: BoundValue<T>,
    pub kind: BoundKind,
    /// Named constants the value was computed from, plus informative extras.
    pub intermediates: BTreeMap<&'static str, T>,
}

impl<T: Scalar> EpsilonBound<T> {
    pub(crate) fn new(kind: BoundKind, value: BoundValue<T>, intermediates: &[(&'static str, T)]) -> Self {
        Self {
            value,
            kind,
            intermediates: intermediates.iter().copied().collect(),
        }
    }

    pub fn finite(&self) -> Option<T> {
        match self.value {
            BoundValue::Finite(v) => Some(v),
            BoundValue::Diverged => None,
        }
    }

    pub fn is_diverged(&self) -> bool {
        matches!(self.value, BoundValue::Diverged)
    }

    /// Finite and no larger than `eps`.
    pub fn certifies(&self, eps: T) -> bool {
        self.finite().is_some_and(|v| v <= eps)
    }

    pub fn get(&self, name: &str) -> Option<T> {
        self.intermediates.get(name).copied()
    }

    fn need(&self, name: &'static str) -> Result<T> {
        self.get(name)
            .ok_or_else(|| Error::Domain(format!("intermediate `{name}` missing from {} bound", self.kind.name())))
    }

    /// Recomputes the value from the recorded intermediates only.
    pub fn reevaluate(&self) -> Result<BoundValue<T>> {
        match self.kind {
            BoundKind::SimilarBelt => Ok(similar::formula(self.need("A")?, self.need("A_bar")?)),
            BoundKind::PowerLawBelt => Ok(powerlaw::formula(self.need("A")?, self.need("L")?)),
            BoundKind::PlanetsClosed => planets::closed_formula(self.need("c3")?, self.need("N")?, self.need("a")?),
            BoundKind::PlanetsExplicit => Ok(BoundValue::Finite(planets::explicit_formula(
                self.need("c3")?,
                count(self.need("N")?)?,
                self.need("a")?,
            ))),
        }
    }
}

fn count<T: Scalar>(x: T) -> Result<usize> {
    x.to_usize().ok_or_else(|| Error::Domain(format!("{x} is not a count")))
}

/// Largest admissible body count for a belt.
#[derive(Clone, Debug, PartialEq)]
pub struct MaxCount<T> {
    /// 0 when even a single body fails the target.
    pub n: u64,
    /// The bound evaluated at `n`, when `n > 0`.
    pub bound: Option<EpsilonBound<T>>,
    pub diagnostic: Option<String>,
}

/// Largest `n` in `1..=limit` with `ok(n)`, assuming `ok` is true on an initial segment.
/// Doubling then integer bisection.
pub(crate) fn largest_passing(limit: u64, mut ok: impl FnMut(u64) -> bool) -> std::result::Result<u64, u64> {
    if !ok(1) {
        return Ok(0);
    }
    let mut lo = 1u64;
    let mut hi = 2u64;
    while ok(hi) {
        lo = hi;
        if hi >= limit {
            return Err(limit);
        }
        hi = hi.saturating_mul(2).min(limit);
    }
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if ok(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}

pub(crate) fn positive<T: Scalar>(field: &'static str, x: T) -> Result<()> {
    if x > T::zero() && x.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(field, format!("must be positive and finite, got {x}")))
    }
}

/// Search ceiling for body counts.
pub const MAX_COUNT: u64 = 1 << 53;
