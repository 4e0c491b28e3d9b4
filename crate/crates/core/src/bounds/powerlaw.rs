//! Belt whose body diameters follow `N(>a) = N / a^nu`, grouped into `L` dyadic classes.

use super::{largest_passing, positive, BoundKind, BoundValue, EpsilonBound, MaxCount, MAX_COUNT};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Orbit and star radius are given in the same physical unit as `unit_length`, the
/// smallest diameter. Internally every length is measured in units of the smallest diameter.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PowerLawBeltParams<T> {
    /// Bodies with diameter at least the smallest one.
    pub n: u64,
    /// Exponent of the cumulative size distribution; the class construction needs 2.
    pub nu: T,
    /// Number of classes; the largest diameter is `2^L`.
    pub classes: u32,
    /// Largest `gamma_i` in the belt.
    pub gamma: T,
    pub density_ratio: T,
    pub orbit_radius: T,
    pub star_radius: T,
    pub unit_length: T,
}

impl<T: Scalar> PowerLawBeltParams<T> {
    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::invalid("n", "need at least one body"));
        }
        if self.classes == 0 {
            return Err(Error::invalid("classes", "need at least one class"));
        }
        if !(self.nu > T::one()) {
            return Err(Error::invalid("nu", format!("must exceed 1, got {}", self.nu)));
        }
        positive("gamma", self.gamma)?;
        positive("density_ratio", self.density_ratio)?;
        positive("orbit_radius", self.orbit_radius)?;
        positive("star_radius", self.star_radius)?;
        positive("unit_length", self.unit_length)
    }

    pub fn with_n(self, n: u64) -> Self {
        Self { n, ..self }
    }

    /// `R / R_s^3` with lengths in units of the smallest diameter.
    pub fn geometric_factor(&self) -> T {
        let r = self.orbit_radius / self.unit_length;
        let rs = self.star_radius / self.unit_length;
        r / rs.powi(3)
    }
}

/// Expected number of bodies in class `l` (diameters in `[2^(l-1), 2^l)`): `3N / 4^l`.
pub fn powerlaw_class_size<T: Scalar>(n: T, l: u32) -> Result<T> {
    if l == 0 {
        return Err(Error::invalid("l", "classes are numbered from 1"));
    }
    Ok(T::of(3.0) * n / T::of(4.0).powi(l as i32))
}

/// Pair-potential bound between a body of class `l` and one of class `m <= l`.
pub fn powerlaw_w<T: Scalar>(l: u32, m: u32, p: &PowerLawBeltParams<T>) -> Result<T> {
    p.validate()?;
    if m == 0 || l > p.classes {
        return Err(Error::Domain(format!(
            "classes must satisfy 1 <= m <= l <= {}",
            p.classes
        )));
    }
    if l < m {
        return Err(Error::Domain(format!("class order: need l >= m, got l = {l}, m = {m}")));
    }
    let coupling = (p.gamma + T::one()) * p.density_ratio * p.geometric_factor();
    let four_m = T::of(4.0).powi(m as i32);
    if l == m {
        Ok(coupling * four_m)
    } else {
        Ok(coupling * four_m * T::of(2.0).powi(-((l - m - 1) as i32)))
    }
}

/// `A = gamma rho 3 R / R_s^3 N`.
pub fn powerlaw_a<T: Scalar>(p: &PowerLawBeltParams<T>) -> Result<T> {
    p.validate()?;
    Ok(p.gamma * p.density_ratio * T::of(3.0) * p.geometric_factor() * T::of(p.n as f64))
}

pub(super) fn formula<T: Scalar>(a: T, classes: T) -> BoundValue<T> {
    let ratio = a * classes * a.exp();
    if ratio < T::one() {
        BoundValue::Finite((a + T::one()).exp() * ratio / (T::one() - ratio))
    } else {
        BoundValue::Diverged
    }
}

/// `e^{A+1} x / (1 - x)` with `x = A L e^A`, diverging once `x >= 1`.
pub fn powerlaw_epsilon_bound<T: Scalar>(p: &PowerLawBeltParams<T>) -> Result<EpsilonBound<T>> {
    p.validate()?;
    if p.nu != T::of(2.0) {
        return Err(Error::invalid(
            "nu",
            format!("the class construction is fixed to nu = 2, got {}", p.nu),
        ));
    }
    let a = powerlaw_a(p)?;
    let classes = T::of(p.classes as f64);
    Ok(EpsilonBound::new(
        BoundKind::PowerLawBelt,
        formula(a, classes),
        &[
            ("A", a),
            ("L", classes),
            ("ratio", a * classes * a.exp()),
            ("geometric_factor", p.geometric_factor()),
        ],
    ))
}

/// Largest `N` with a finite bound no larger than `eps_target`.
pub fn powerlaw_max_n<T: Scalar>(p: &PowerLawBeltParams<T>, eps_target: T) -> Result<MaxCount<T>> {
    positive("eps_target", eps_target)?;
    powerlaw_epsilon_bound(p)?;
    let bound_at = |n: u64| powerlaw_epsilon_bound(&p.with_n(n)).expect("validated");
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
            log::info!("power-law belt: N_max = {n}, implied A = {:?}", bound.get("A"));
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

/// `coupling nu^2 N1^2 / (nu + 1)` where `coupling = (gamma + 1) rho R / R_s^3`.
pub fn small_asteroid_prefactor<T: Scalar>(coupling: T, n1: T, nu: T) -> T {
    coupling * nu * nu * n1 * n1 / (nu + T::one())
}

/// Closed form of the summed pair bound for a continuous size distribution
/// `dN = N1 nu a^{-nu-1} da` on `[a_min, a_max]`, `a_max = N1^{1/nu}`.
///
/// `prefactor` is [`small_asteroid_prefactor`]. At `nu = 3` the second term becomes
/// `a_max^{-4} ln(a_max / a_min)`.
pub fn small_asteroid_tail_bound<T: Scalar>(n1: T, nu: T, a_min: T, prefactor: T) -> Result<T> {
    if !(nu > T::one()) {
        return Err(Error::Domain(format!(
            "nu = {nu}: the sum diverges as the smallest size goes to zero unless nu > 1"
        )));
    }
    positive("n1", n1)?;
    positive("a_min", a_min)?;
    let a_max = n1.powf(nu.recip());
    if !(a_min < a_max) {
        return Err(Error::Domain(format!(
            "a_min = {a_min} must lie below a_max = N1^(1/nu) = {a_max}"
        )));
    }
    let two = T::of(2.0);
    let three = T::of(3.0);
    let e1 = two - two * nu;
    let first = (a_max.powf(e1) - a_min.powf(e1)) / e1;
    let second = if (nu - three).abs() <= T::epsilon() * three {
        a_max.powf(-(nu + T::one())) * (a_max / a_min).ln()
    } else {
        let e2 = three - nu;
        (a_max.powf(e1) - a_min.powf(e2) * a_max.powf(-(nu + T::one()))) / e2
    };
    Ok(prefactor * (first - second))
}

/// `prefactor < threshold`, with `threshold` the caller's choice of the control constant.
pub fn small_asteroid_condition<T: Scalar>(prefactor: T, nu: T, threshold: T) -> bool {
    nu > T::one() && prefactor < threshold
}
