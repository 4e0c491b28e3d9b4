//! Few planets on well separated orbits `R_i = b + c a^i`.

use super::{positive, BoundKind, BoundValue, EpsilonBound};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Orbit lengths (`offset`, `scale`, `planet_radii`) share one unit, AU in the bundled data.
#[derive(Clone, Debug, PartialEq)]
pub struct PlanetChainParams<T> {
    /// `b` in `R_i = b + c a^i`.
    pub offset: T,
    /// `c` in `R_i = b + c a^i`.
    pub scale: T,
    /// `a` in `R_i = b + c a^i`; must exceed 1.
    pub ratio: T,
    pub i_min: i32,
    pub i_max: i32,
    /// Common `gamma` of every planet.
    pub gamma: T,
    /// A deviation is typical when `|xi| < k / gamma`.
    pub k_typical: T,
    /// Planet masses, innermost first; same unit as `star_mass`.
    pub masses: Vec<T>,
    /// Physical planet radii, innermost first.
    pub planet_radii: Vec<T>,
    pub star_mass: T,
    /// Replaces the derived `c + b / a^{i_min}` when set.
    pub c2_override: Option<T>,
}

impl<T: Scalar> PlanetChainParams<T> {
    pub fn count(&self) -> usize {
        (self.i_max - self.i_min + 1).max(0) as usize
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.ratio > T::one()) {
            return Err(Error::invalid("ratio", format!("must exceed 1, got {}", self.ratio)));
        }
        if self.i_min > self.i_max {
            return Err(Error::invalid(
                "i_min",
                format!("{} exceeds i_max = {}", self.i_min, self.i_max),
            ));
        }
        let n = self.count();
        if self.masses.len() != n || self.planet_radii.len() != n {
            return Err(Error::invalid(
                "masses",
                format!(
                    "{} masses and {} radii for {n} orbit indices",
                    self.masses.len(),
                    self.planet_radii.len()
                ),
            ));
        }
        if !(self.offset >= T::zero()) {
            return Err(Error::invalid(
                "offset",
                format!("must be non-negative, got {}", self.offset),
            ));
        }
        positive("scale", self.scale)?;
        positive("gamma", self.gamma)?;
        positive("k_typical", self.k_typical)?;
        positive("star_mass", self.star_mass)?;
        for &m in &self.masses {
            positive("masses", m)?;
        }
        for &r in &self.planet_radii {
            positive("planet_radii", r)?;
        }
        if let Some(c2) = self.c2_override {
            positive("c2_override", c2)?;
        }
        Ok(())
    }

    pub fn orbit_radius(&self, i: i32) -> T {
        self.offset + self.scale * self.ratio.powi(i)
    }

    pub fn max_mass(&self) -> T {
        self.masses.iter().copied().fold(T::zero(), T::max)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PlanetConstants<T> {
    /// Lower bound on the gap per unit of `a^j - a^i` between typical planets.
    pub c1: T,
    pub c2: T,
    /// Scale of the pair bound `c3 a^{-|j-i|}`.
    pub c3: T,
}

pub fn planet_constants<T: Scalar>(p: &PlanetChainParams<T>) -> Result<PlanetConstants<T>> {
    p.validate()?;
    planet_constants_for_mass(p, p.max_mass())
}

/// Constants with the largest planet mass replaced by `max_mass`.
pub fn planet_constants_for_mass<T: Scalar>(p: &PlanetChainParams<T>, max_mass: T) -> Result<PlanetConstants<T>> {
    p.validate()?;
    positive("max_mass", max_mass)?;
    let two = T::of(2.0);
    let c1 = p.scale - two * p.k_typical / p.gamma * (p.scale + p.offset);
    if !(c1 > T::zero()) {
        return Err(Error::TypicalityBand { c1: c1.to_f64_lossy() });
    }
    let c2 = p
        .c2_override
        .unwrap_or_else(|| p.scale + p.offset / p.ratio.powi(p.i_min));
    let c3 = two * p.ratio * p.gamma / (p.ratio - T::one()) * (max_mass / p.star_mass) * (c2 / c1);
    Ok(PlanetConstants { c1, c2, c3 })
}

pub(super) fn closed_formula<T: Scalar>(c3: T, n: T, a: T) -> Result<BoundValue<T>> {
    if !(c3 < T::of(0.5)) {
        return Err(Error::Precondition(format!(
            "c3 = {c3} must stay below 1/2 for the linear bound on exp(V) - 1"
        )));
    }
    let am1 = a - T::one();
    let grow = (T::of(5.0) / T::of(3.0) * c3 * n * T::of(2.0) / am1).exp_m1();
    Ok(BoundValue::Finite(grow * (n * c3 / am1).exp()))
}

/// Tree sum with each planet's predecessor choices summed independently, using the
/// pair bounds `c3 a^{-|j-i|}` directly; maximised over the distinguished planet.
pub(super) fn explicit_formula<T: Scalar>(c3: T, n: usize, a: T) -> T {
    let v = |i: usize, j: usize| c3 * a.powi(-(i.abs_diff(j) as i32));
    let mut pair_sum = T::zero();
    for i in 0..n {
        for j in i + 1..n {
            pair_sum = pair_sum + v(i, j);
        }
    }
    let all_pairs = pair_sum.exp();
    (0..n)
        .map(|m| {
            let prod = (0..n).filter(|&i| i != m).fold(T::one(), |acc, i| {
                let s: T = (0..n).filter(|&j| j != i).map(|j| v(i, j).exp_m1()).sum();
                acc * (T::one() + s)
            });
            (prod - T::one()) * all_pairs
        })
        .fold(T::zero(), T::max)
}

fn bound_from<T: Scalar>(p: &PlanetChainParams<T>, k: PlanetConstants<T>, form: BoundForm) -> Result<EpsilonBound<T>> {
    let n = T::of(p.count() as f64);
    let inter = [("c1", k.c1), ("c2", k.c2), ("c3", k.c3), ("N", n), ("a", p.ratio)];
    Ok(match form {
        BoundForm::Closed => EpsilonBound::new(BoundKind::PlanetsClosed, closed_formula(k.c3, n, p.ratio)?, &inter),
        BoundForm::Explicit => EpsilonBound::new(
            BoundKind::PlanetsExplicit,
            BoundValue::Finite(explicit_formula(k.c3, p.count(), p.ratio)),
            &inter,
        ),
    })
}

/// `(exp((5/3) c3 N 2/(a-1)) - 1) exp(N c3 / (a-1))`; requires `c3 < 1/2`.
pub fn planets_epsilon_bar<T: Scalar>(p: &PlanetChainParams<T>) -> Result<EpsilonBound<T>> {
    bound_from(p, planet_constants(p)?, BoundForm::Closed)
}

/// The tree sum before the geometric-series simplification:
/// `[prod_{i != m} (1 + sum_{j != i} (e^{V_ij} - 1)) - 1] prod_{i<j} e^{V_ij}`.
pub fn planets_epsilon_bar_explicit<T: Scalar>(p: &PlanetChainParams<T>) -> Result<EpsilonBound<T>> {
    bound_from(p, planet_constants(p)?, BoundForm::Explicit)
}

fn margin<T: Scalar>(p: &PlanetChainParams<T>, k: &PlanetConstants<T>, i: i32) -> T {
    let a = p.ratio;
    let slot = (i - p.i_min) as usize;
    let contact = p.planet_radii[slot] + p.planet_radii[slot + 1];
    T::of(2.0 / 9.0) * p.k_typical * p.k_typical - k.c3 * k.c1 * a.powi(i) * (a - T::one()) / (a * contact)
}

/// Free-measure cost of an atypical planet minus the collision weight with its outer
/// neighbour; positive when the single collision is controlled.
pub fn collision_condition<T: Scalar>(p: &PlanetChainParams<T>, i: i32) -> Result<T> {
    let k = planet_constants(p)?;
    if i < p.i_min || i >= p.i_max {
        return Err(Error::Domain(format!(
            "orbit index {i} outside [{}, {})",
            p.i_min, p.i_max
        )));
    }
    Ok(margin(p, &k, i))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoundForm {
    Closed,
    Explicit,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MaxMass<T> {
    /// Largest admissible planet mass; 0 when none qualifies.
    pub mass: T,
    pub ratio_to_star: T,
    /// Bound at `mass`.
    pub bound: Option<EpsilonBound<T>>,
    /// Smallest collision margin at `mass`.
    pub min_margin: Option<T>,
    /// Which requirement fails just above `mass`.
    pub binding: &'static str,
    pub diagnostic: Option<String>,
}

/// Relative accuracy of [`planets_max_mass`].
pub const MASS_TOLERANCE: f64 = 1e-3;

/// Largest common mass cap for which the bound is at most `eps_target` and every
/// neighbouring collision is controlled.
pub fn planets_max_mass<T: Scalar>(p: &PlanetChainParams<T>, eps_target: T, form: BoundForm) -> Result<MaxMass<T>> {
    positive("eps_target", eps_target)?;
    p.validate()?;
    // c1 does not depend on the mass: surface a too-wide band immediately
    planet_constants_for_mass(p, p.star_mass)?;

    let check = |m: T| -> std::result::Result<(EpsilonBound<T>, T), &'static str> {
        let k = planet_constants_for_mass(p, m).map_err(|_| "constants")?;
        let bound = bound_from(p, k, form).map_err(|_| "c3")?;
        if !bound.certifies(eps_target) {
            return Err("epsilon");
        }
        let min_margin = (p.i_min..p.i_max).map(|i| margin(p, &k, i)).fold(T::infinity(), T::min);
        if !(min_margin > T::zero()) {
            return Err("collision");
        }
        Ok((bound, min_margin))
    };

    let mut lo = p.star_mass * T::of(1e-12);
    let floor = p.star_mass * T::of(1e-30);
    while check(lo).is_err() {
        lo = lo * T::of(1e-3);
        if lo < floor {
            return Ok(MaxMass {
                mass: T::zero(),
                ratio_to_star: T::zero(),
                bound: None,
                min_margin: None,
                binding: check(floor).err().unwrap_or("epsilon"),
                diagnostic: Some(format!(
                    "no mass down to {} of the star mass meets epsilon <= {eps_target}",
                    T::of(1e-30)
                )),
            });
        }
    }
    let ceiling = p.star_mass * T::of(1e3);
    let mut hi = lo * T::of(2.0);
    while check(hi).is_ok() {
        lo = hi;
        hi = hi * T::of(2.0);
        if hi > ceiling {
            let (bound, mm) = check(lo).expect("just checked");
            return Ok(MaxMass {
                mass: lo,
                ratio_to_star: lo / p.star_mass,
                bound: Some(bound),
                min_margin: Some(mm),
                binding: "none",
                diagnostic: Some("every mass up to the search ceiling qualifies".into()),
            });
        }
    }
    let binding = check(hi).err().unwrap_or("epsilon");
    while hi / lo > T::one() + T::of(MASS_TOLERANCE) {
        let mid = (lo * hi).sqrt();
        if check(mid).is_ok() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let (bound, mm) = check(lo).expect("lower end stays feasible");
    Ok(MaxMass {
        mass: lo,
        ratio_to_star: lo / p.star_mass,
        bound: Some(bound),
        min_margin: Some(mm),
        binding,
        diagnostic: None,
    })
}
