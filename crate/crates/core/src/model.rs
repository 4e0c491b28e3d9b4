//! Planar star + orbiting bodies: one-body potentials, pair couplings, the dimensionless
//! Hamiltonian and the hard-core constraint.
//!
//! Each body `i` sits on average on a circular orbit of radius `R_i`; its state is the
//! relative radial deviation `xi_i = (rho_i - R_i) / R_i` and the angle `theta_i`. The free
//! measure of a body is `exp(-gamma_i^2 xi_i^2 / 2)`, and bodies attract each other through
//! `gamma_ij * r_ij / |x_i - x_j|` with `r_ij = sqrt(R_i R_j)`. Overlapping configurations
//! (`|x_i - x_j| < a_i + a_j`) are excluded; the contact boundary itself is feasible.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Gravitational field of a fixed central mass.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CentralField<T> {
    pub grav_const: T,
    pub star_mass: T,
}

impl<T: Scalar> CentralField<T> {
    pub fn new(grav_const: T, star_mass: T) -> Result<Self> {
        positive("grav_const", grav_const)?;
        positive("star_mass", star_mass)?;
        Ok(Self { grav_const, star_mass })
    }

    /// `J^2 / (2 m rho^2) - k M m / rho`.
    pub fn effective_potential(&self, rho: T, ang_mom: T, mass: T) -> Result<T> {
        if !(rho > T::zero()) {
            return Err(Error::Domain(format!("radius must be positive, got {rho}")));
        }
        positive("mass", mass)?;
        let two = T::of(2.0);
        Ok(ang_mom * ang_mom / (two * mass * rho * rho) - self.grav_const * self.star_mass * mass / rho)
    }

    /// Radius of the circular orbit, where the effective potential is minimal: `J^2 / (k m^2 M)`.
    pub fn circular_radius(&self, ang_mom: T, mass: T) -> Result<T> {
        positive("mass", mass)?;
        positive("angular momentum", ang_mom)?;
        Ok(ang_mom * ang_mom / (self.grav_const * mass * mass * self.star_mass))
    }

    /// Effective potential rewritten in the radial deviation:
    /// `(1/2)(k M m / R)(-1 + xi^2 / (1 + xi)^2)`.
    pub fn central_potential_xi(&self, xi: T, orbit_radius: T, mass: T) -> Result<T> {
        check_xi(xi)?;
        let scale = self.grav_const * self.star_mass * mass / orbit_radius;
        let ratio = xi / (T::one() + xi);
        Ok(T::of(0.5) * scale * (ratio * ratio - T::one()))
    }

    /// Quadratic part `(1/2)(k M m / R) xi^2` of the central potential.
    pub fn harmonic_potential(&self, xi: T, orbit_radius: T, mass: T) -> T {
        T::of(0.5) * self.grav_const * self.star_mass * mass / orbit_radius * xi * xi
    }

    /// Per-body inverse temperature `R gamma^2 / (k m M)`.
    pub fn beta_free(&self, orbit_radius: T, mass: T, gamma: T) -> Result<T> {
        positive("orbit_radius", orbit_radius)?;
        positive("mass", mass)?;
        positive("gamma", gamma)?;
        Ok(orbit_radius * gamma * gamma / (self.grav_const * mass * self.star_mass))
    }
}

/// Exponent `gamma^2 xi^2 / 2` of the Gaussian free measure.
#[inline]
pub fn gaussian_exponent<T: Scalar>(xi: T, gamma: T) -> T {
    T::of(0.5) * gamma * gamma * xi * xi
}

/// Exponent `(gamma^2 / 2) xi^2 / (1 + xi)^2` of the un-approximated free measure.
#[inline]
pub fn truncated_exponent<T: Scalar>(xi: T, gamma: T) -> T {
    let u = xi / (T::one() + xi);
    T::of(0.5) * gamma * gamma * u * u
}

/// Time over which a one-sigma Chebyshev estimate keeps a body near its orbit: `gamma^2 * period`.
pub fn chebyshev_stability_time<T: Scalar>(gamma: T, period: T) -> Result<T> {
    positive("gamma", gamma)?;
    positive("period", period)?;
    Ok(gamma * gamma * period)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Body<T> {
    pub index: usize,
    pub mass: T,
    /// Hard-core radius `a_i`.
    pub body_radius: T,
    /// Mean orbit radius `R_i`.
    pub orbit_radius: T,
    pub gamma: T,
}

impl<T: Scalar> Body<T> {
    pub fn new(index: usize, mass: T, body_radius: T, orbit_radius: T, gamma: T) -> Result<Self> {
        positive("mass", mass)?;
        positive("body_radius", body_radius)?;
        positive("orbit_radius", orbit_radius)?;
        positive("gamma", gamma)?;
        Ok(Self {
            index,
            mass,
            body_radius,
            orbit_radius,
            gamma,
        })
    }

    /// Body of uniform `density` whose mass follows from its radius.
    pub fn with_density(index: usize, density: T, body_radius: T, orbit_radius: T, gamma: T) -> Result<Self> {
        Self::new(
            index,
            sphere_mass(density, body_radius),
            body_radius,
            orbit_radius,
            gamma,
        )
    }

    /// Cartesian position for the state `(xi, theta)`.
    pub fn position(&self, xi: T, theta: T) -> Result<[T; 2]> {
        check_xi(xi)?;
        Ok(polar(self.orbit_radius, xi, theta))
    }

    /// Inverse of [`Body::position`]: `(xi, theta)` with `theta` in `[0, 2 pi)`.
    pub fn state_of(&self, point: [T; 2]) -> (T, T) {
        let rho = point[0].hypot(point[1]);
        let theta = point[1].atan2(point[0]);
        (rho / self.orbit_radius - T::one(), wrap_angle(theta))
    }
}

#[inline]
fn polar<T: Scalar>(orbit_radius: T, xi: T, theta: T) -> [T; 2] {
    let rho = orbit_radius * (T::one() + xi);
    let (s, c) = theta.sin_cos();
    [rho * c, rho * s]
}

/// `(4/3) pi delta a^3`.
pub fn sphere_mass<T: Scalar>(density: T, radius: T) -> T {
    T::of(4.0 / 3.0) * T::PI() * density * radius * radius * radius
}

#[inline]
pub(crate) fn wrap_angle<T: Scalar>(theta: T) -> T {
    let tau = T::TAU();
    let mut t = theta % tau;
    if t < T::zero() {
        t = t + tau;
    }
    // -tiny % tau + tau can round up to tau
    if t >= tau {
        t = T::zero();
    }
    t
}

#[derive(Debug, Clone, PartialEq)]
pub struct Configuration<T> {
    xi: Vec<T>,
    theta: Vec<T>,
}

impl<T: Scalar> Configuration<T> {
    /// Angles are wrapped into `[0, 2 pi)`.
    pub fn new(xi: Vec<T>, theta: Vec<T>) -> Result<Self> {
        if xi.len() != theta.len() {
            return Err(Error::Domain(format!(
                "xi has {} entries but theta has {}",
                xi.len(),
                theta.len()
            )));
        }
        for &x in &xi {
            check_xi(x)?;
        }
        let theta = theta.into_iter().map(wrap_angle).collect();
        Ok(Self { xi, theta })
    }

    /// Every body on its circular orbit, angles equally spaced.
    pub fn circular(n: usize) -> Self {
        let step = T::TAU() / T::of(n.max(1) as f64);
        Self {
            xi: vec![T::zero(); n],
            theta: (0..n).map(|i| step * T::of(i as f64)).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.xi.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xi.is_empty()
    }

    pub fn xi(&self) -> &[T] {
        &self.xi
    }

    pub fn theta(&self) -> &[T] {
        &self.theta
    }

    pub(crate) fn set(&mut self, i: usize, xi: T, theta: T) {
        self.xi[i] = xi;
        self.theta[i] = theta;
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PairCoupling<T> {
    pub i: usize,
    pub j: usize,
    pub gamma_ij: T,
    /// `sqrt(R_i R_j)`.
    pub r_ij: T,
    pub orbit_radius_i: T,
    pub orbit_radius_j: T,
}

/// Dimensionless coupling of two bodies:
///
/// `gamma_ij = (m_i m_j / M) sqrt(R_i R_j)(1+g_i)(1+g_j) / (m_i R_j (1+g_j) + m_j R_i (1+g_i))`.
pub fn pair_coupling<T: Scalar>(a: &Body<T>, b: &Body<T>, star_mass: T) -> Result<PairCoupling<T>> {
    if a.index == b.index {
        return Err(Error::Domain(format!(
            "pair coupling needs two distinct bodies, got {} twice",
            a.index
        )));
    }
    let (a, b) = if a.index < b.index { (a, b) } else { (b, a) };
    let one = T::one();
    let r_ij = (a.orbit_radius * b.orbit_radius).sqrt();
    let num = r_ij * (one + a.gamma) * (one + b.gamma);
    let den = a.mass * b.orbit_radius * (one + b.gamma) + b.mass * a.orbit_radius * (one + a.gamma);
    let gamma_ij = a.mass * b.mass / star_mass * num / den;
    Ok(PairCoupling {
        i: a.index,
        j: b.index,
        gamma_ij,
        r_ij,
        orbit_radius_i: a.orbit_radius,
        orbit_radius_j: b.orbit_radius,
    })
}

impl<T: Scalar> PairCoupling<T> {
    /// Attraction `gamma_ij r_ij / |x_i - x_j|`; enters the Hamiltonian with a minus sign.
    pub fn interaction_term(&self, config: &Configuration<T>) -> Result<T> {
        let pi = polar(self.orbit_radius_i, config.xi[self.i], config.theta[self.i]);
        let pj = polar(self.orbit_radius_j, config.xi[self.j], config.theta[self.j]);
        let d = (pi[0] - pj[0]).hypot(pi[1] - pj[1]);
        if d == T::zero() {
            return Err(Error::Domain(format!("bodies {} and {} coincide", self.i, self.j)));
        }
        if self.gamma_ij == T::zero() {
            return Ok(T::zero());
        }
        Ok(self.gamma_ij * self.r_ij / d)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StarSystem<T> {
    pub star_mass: T,
    pub star_radius: T,
    pub grav_const: T,
    /// Common body density `delta`.
    pub density: T,
    pub star_density: T,
    pub bodies: Vec<Body<T>>,
}

/// Newton's constant in SI units (CODATA 2018).
pub const GRAVITATIONAL_CONSTANT: f64 = 6.674_30e-11;

impl<T: Scalar> StarSystem<T> {
    /// Validates positivity and that bodies are indexed `0..N` in order of orbit radius.
    pub fn new(
        star_mass: T,
        star_radius: T,
        grav_const: T,
        density: T,
        star_density: T,
        bodies: Vec<Body<T>>,
    ) -> Result<Self> {
        positive("star_mass", star_mass)?;
        positive("star_radius", star_radius)?;
        positive("grav_const", grav_const)?;
        positive("density", density)?;
        positive("star_density", star_density)?;
        for (k, b) in bodies.iter().enumerate() {
            if b.index != k {
                return Err(Error::invalid(
                    "bodies",
                    format!("body at position {k} carries index {}", b.index),
                ));
            }
            if k > 0 && b.orbit_radius < bodies[k - 1].orbit_radius {
                return Err(Error::invalid(
                    "bodies",
                    format!("body {k} is not ordered by orbit radius"),
                ));
            }
        }
        Ok(Self {
            star_mass,
            star_radius,
            grav_const,
            density,
            star_density,
            bodies,
        })
    }

    pub fn n(&self) -> usize {
        self.bodies.len()
    }

    pub fn field(&self) -> CentralField<T> {
        CentralField {
            grav_const: self.grav_const,
            star_mass: self.star_mass,
        }
    }

    /// Relative deviation of body `i`'s mass from `(4/3) pi delta a_i^3`.
    pub fn density_mismatch(&self, i: usize) -> T {
        let b = &self.bodies[i];
        let expected = sphere_mass(self.density, b.body_radius);
        ((b.mass - expected) / expected).abs()
    }

    /// All pairs `i < j` in lexicographic order.
    pub fn pair_couplings(&self) -> Vec<PairCoupling<T>> {
        let n = self.n();
        let mut out = Vec::with_capacity(n * n.saturating_sub(1) / 2);
        for i in 0..n {
            for j in i + 1..n {
                out.push(
                    pair_coupling(&self.bodies[i], &self.bodies[j], self.star_mass).expect("indices are distinct"),
                );
            }
        }
        out
    }

    pub fn gibbs_model(&self) -> GibbsModel<T> {
        GibbsModel::from_system(self)
    }

    pub fn hard_core_ok(&self, config: &Configuration<T>) -> bool {
        self.gibbs_model().hard_core_ok(config)
    }

    pub fn hamiltonian(&self, config: &Configuration<T>) -> Result<T> {
        self.gibbs_model().hamiltonian(config)
    }
}

/// Reference (free) measure of the radial deviations.
#[derive(Debug, Clone, PartialEq)]
pub enum FreeMeasure<T> {
    /// `exp(-gamma^2 xi^2 / 2)` on `xi > -1`.
    Gaussian,
    /// `exp(-(gamma^2/2) xi^2 / (1+xi)^2)` on `-1 < xi <= upper[i]`.
    Truncated { upper: Vec<T> },
}

/// Precomputed data of the canonical measure `exp(-H)`: everything the Hamiltonian and the
/// sampler need, with couplings stored as a dense symmetric table of `gamma_ij r_ij`.
#[derive(Debug, Clone, PartialEq)]
pub struct GibbsModel<T> {
    n: usize,
    gamma: Vec<T>,
    orbit_radius: Vec<T>,
    body_radius: Vec<T>,
    strength: Vec<T>,
    free: FreeMeasure<T>,
}

impl<T: Scalar> GibbsModel<T> {
    pub fn from_system(system: &StarSystem<T>) -> Self {
        let n = system.n();
        let mut strength = vec![T::zero(); n * n];
        for p in system.pair_couplings() {
            let s = p.gamma_ij * p.r_ij;
            strength[p.i * n + p.j] = s;
            strength[p.j * n + p.i] = s;
        }
        Self {
            n,
            gamma: system.bodies.iter().map(|b| b.gamma).collect(),
            orbit_radius: system.bodies.iter().map(|b| b.orbit_radius).collect(),
            body_radius: system.bodies.iter().map(|b| b.body_radius).collect(),
            strength,
            free: FreeMeasure::Gaussian,
        }
    }

    /// Model with explicit pair couplings `gamma_ij`, one per pair `i < j` in lexicographic
    /// order `(0,1), (0,2), ..., (1,2), ...`.
    pub fn new(gamma: Vec<T>, orbit_radius: Vec<T>, body_radius: Vec<T>, couplings: &[T]) -> Result<Self> {
        let n = gamma.len();
        if orbit_radius.len() != n || body_radius.len() != n {
            return Err(Error::invalid(
                "orbit_radius",
                format!(
                    "{} gammas, {} orbit radii, {} body radii",
                    n,
                    orbit_radius.len(),
                    body_radius.len()
                ),
            ));
        }
        if couplings.len() != n * n.saturating_sub(1) / 2 {
            return Err(Error::invalid(
                "couplings",
                format!("{} couplings for {} bodies", couplings.len(), n),
            ));
        }
        for k in 0..n {
            positive("gamma", gamma[k])?;
            positive("orbit_radius", orbit_radius[k])?;
            positive("body_radius", body_radius[k])?;
        }
        let mut strength = vec![T::zero(); n * n];
        let mut slot = 0;
        for i in 0..n {
            for j in i + 1..n {
                let g = couplings[slot];
                if !(g >= T::zero() && g.is_finite()) {
                    return Err(Error::invalid("couplings", format!("coupling {g} for pair ({i}, {j})")));
                }
                let s = g * (orbit_radius[i] * orbit_radius[j]).sqrt();
                strength[i * n + j] = s;
                strength[j * n + i] = s;
                slot += 1;
            }
        }
        Ok(Self {
            n,
            gamma,
            orbit_radius,
            body_radius,
            strength,
            free: FreeMeasure::Gaussian,
        })
    }

    pub fn orbit_radii(&self) -> &[T] {
        &self.orbit_radius
    }

    pub fn body_radii(&self) -> &[T] {
        &self.body_radius
    }

    /// Multiplies every `gamma_ij` by `factor`; zero yields the decoupled (free) system.
    pub fn with_coupling_scale(mut self, factor: T) -> Self {
        for s in &mut self.strength {
            *s = *s * factor;
        }
        self
    }

    pub fn decoupled(self) -> Self {
        self.with_coupling_scale(T::zero())
    }

    pub fn with_free_measure(mut self, free: FreeMeasure<T>) -> Result<Self> {
        if let FreeMeasure::Truncated { upper } = &free {
            if upper.len() != self.n {
                return Err(Error::invalid(
                    "upper",
                    format!("{} cut-offs for {} bodies", upper.len(), self.n),
                ));
            }
            if let Some(u) = upper.iter().find(|u| !(**u > T::zero())) {
                return Err(Error::invalid("upper", format!("cut-off {u} is not positive")));
            }
        }
        self.free = free;
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn gammas(&self) -> &[T] {
        &self.gamma
    }

    pub fn free_measure(&self) -> &FreeMeasure<T> {
        &self.free
    }

    /// `gamma_ij * r_ij` for a pair.
    pub fn strength(&self, i: usize, j: usize) -> T {
        self.strength[i * self.n + j]
    }

    pub fn position(&self, i: usize, xi: T, theta: T) -> [T; 2] {
        polar(self.orbit_radius[i], xi, theta)
    }

    #[inline]
    pub(crate) fn distance_sq(&self, pi: [T; 2], j: usize, config: &Configuration<T>) -> T {
        let pj = polar(self.orbit_radius[j], config.xi[j], config.theta[j]);
        let dx = pi[0] - pj[0];
        let dy = pi[1] - pj[1];
        dx * dx + dy * dy
    }

    #[inline]
    pub(crate) fn contact_sq(&self, i: usize, j: usize) -> T {
        let s = self.body_radius[i] + self.body_radius[j];
        s * s
    }

    /// Whether `xi` lies in the support of body `i`'s free measure.
    #[inline]
    pub fn in_support(&self, i: usize, xi: T) -> bool {
        if !(xi > -T::one()) {
            return false;
        }
        match &self.free {
            FreeMeasure::Gaussian => true,
            FreeMeasure::Truncated { upper } => xi <= upper[i],
        }
    }

    #[inline]
    pub fn one_body_energy(&self, i: usize, xi: T) -> T {
        match self.free {
            FreeMeasure::Gaussian => gaussian_exponent(xi, self.gamma[i]),
            FreeMeasure::Truncated { .. } => truncated_exponent(xi, self.gamma[i]),
        }
    }

    /// `|x_i - x_j| >= a_i + a_j` for every pair.
    pub fn hard_core_ok(&self, config: &Configuration<T>) -> bool {
        self.first_overlap(config).is_none()
    }

    fn first_overlap(&self, config: &Configuration<T>) -> Option<(usize, usize, T)> {
        for i in 0..self.n {
            let pi = self.position(i, config.xi[i], config.theta[i]);
            for j in i + 1..self.n {
                let d2 = self.distance_sq(pi, j, config);
                if d2 < self.contact_sq(i, j) {
                    return Some((i, j, d2.sqrt()));
                }
            }
        }
        None
    }

    /// Sum of pair attractions felt by body `i` placed at `(xi, theta)`, the others as in
    /// `config`. Returns `None` when the placement overlaps another body.
    pub(crate) fn local_attraction(&self, i: usize, xi: T, theta: T, config: &Configuration<T>) -> Option<T> {
        let pi = self.position(i, xi, theta);
        let mut acc = T::zero();
        for j in 0..self.n {
            if j == i {
                continue;
            }
            let d2 = self.distance_sq(pi, j, config);
            if d2 < self.contact_sq(i, j) {
                return None;
            }
            let s = self.strength(i, j);
            if s != T::zero() {
                acc = acc + s / d2.sqrt();
            }
        }
        Some(acc)
    }

    /// `sum_i e_i(xi_i) - sum_{i<j} gamma_ij r_ij / |x_i - x_j|`, where `e_i` is the free-measure
    /// exponent (`gamma_i^2 xi_i^2 / 2` for the Gaussian measure).
    pub fn hamiltonian(&self, config: &Configuration<T>) -> Result<T> {
        if config.len() != self.n {
            return Err(Error::Domain(format!(
                "configuration has {} bodies, system has {}",
                config.len(),
                self.n
            )));
        }
        if let Some((i, j, d)) = self.first_overlap(config) {
            let contact = self.contact_sq(i, j).sqrt();
            return Err(Error::HardCore {
                i,
                j,
                distance: d.to_f64_lossy(),
                contact: contact.to_f64_lossy(),
            });
        }
        for i in 0..self.n {
            if !self.in_support(i, config.xi[i]) {
                return Err(Error::Domain(format!(
                    "xi[{i}] = {} outside the free-measure support",
                    config.xi[i]
                )));
            }
        }
        let free: T = (0..self.n).map(|i| self.one_body_energy(i, config.xi[i])).sum();
        let mut pair = T::zero();
        for i in 0..self.n {
            let pi = self.position(i, config.xi[i], config.theta[i]);
            for j in i + 1..self.n {
                let s = self.strength(i, j);
                if s != T::zero() {
                    pair = pair + s / self.distance_sq(pi, j, config).sqrt();
                }
            }
        }
        Ok(free - pair)
    }
}

fn positive<T: Scalar>(field: &'static str, x: T) -> Result<()> {
    if x > T::zero() && x.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(field, format!("must be positive and finite, got {x}")))
    }
}

fn check_xi<T: Scalar>(xi: T) -> Result<()> {
    if xi > -T::one() && xi.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("xi must exceed -1, got {xi}")))
    }
}
