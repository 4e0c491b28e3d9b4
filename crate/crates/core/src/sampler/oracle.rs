//! Deterministic `<xi^2>` for two bodies by nested quadrature.
//!
//! The Hamiltonian depends on the angles only through their difference, so the common
//! rotation integrates to `2 pi` and cancels in the ratio. What remains is
//! `int dxi_1 dxi_2 exp(-e_1 - e_2) I(xi_1, xi_2)` with
//! `I = int over allowed angle differences of exp(s / |x_1 - x_2|)`.

use crate::error::{Error, Result};
use crate::model::GibbsModel;
use crate::quadrature::{integrate, integrate_with_breakpoints, QuadratureSettings};
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OracleSettings<T> {
    /// Target relative error of the returned moment.
    pub rel_tol: T,
    /// Radial range integrated, in units of `1 / gamma_i` on either side of the orbit.
    pub span: T,
    pub max_intervals: usize,
}

impl<T: Scalar> Default for OracleSettings<T> {
    fn default() -> Self {
        Self {
            rel_tol: T::of(1e-6),
            span: T::of(12.0),
            max_intervals: 400,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TwoBodyMoments<T> {
    /// `<xi_1^2>` and `<xi_2^2>`.
    pub second_moment: [T; 2],
    /// Normalisation, without the `2 pi` of the common rotation.
    pub partition: T,
}

/// Angular weight `I` for fixed radii.
fn angular_weight<T: Scalar>(strength: T, contact: T, rho: [T; 2], settings: &QuadratureSettings<T>) -> Result<T> {
    let two = T::of(2.0);
    let (r1, r2) = (rho[0], rho[1]);
    // cos of the smallest allowed angle difference
    let edge = (r1 * r1 + r2 * r2 - contact * contact) / (two * r1 * r2);
    if edge <= -T::one() {
        return Ok(T::zero());
    }
    let lower = if edge >= T::one() { T::zero() } else { edge.acos() };
    if strength == T::zero() {
        return Ok(two * (T::PI() - lower));
    }
    let r = integrate(
        |phi: T| {
            let d2 = r1 * r1 + r2 * r2 - two * r1 * r2 * phi.cos();
            let d = d2.max(contact * contact).sqrt();
            Ok((strength / d).exp())
        },
        lower,
        T::PI(),
        settings,
    )?;
    Ok(two * r.value)
}

/// `<xi_1^2>` and `<xi_2^2>` under the canonical measure of a two-body model.
pub fn oracle_two_body<T: Scalar>(model: &GibbsModel<T>, settings: &OracleSettings<T>) -> Result<TwoBodyMoments<T>> {
    if model.n() != 2 {
        return Err(Error::Domain(format!(
            "two-body oracle called with {} bodies",
            model.n()
        )));
    }
    let gammas = model.gammas();
    let radii = model.orbit_radii();
    let contact = model.body_radii()[0] + model.body_radii()[1];
    let strength = model.strength(0, 1);
    let range = |i: usize| -> (T, T) {
        let w = settings.span / gammas[i];
        let lo = (-w).max(-T::one() + T::epsilon());
        let hi = match model.free_measure() {
            crate::model::FreeMeasure::Gaussian => w,
            crate::model::FreeMeasure::Truncated { upper } => w.min(upper[i]),
        };
        (lo, hi)
    };
    let (lo1, hi1) = range(0);
    let (lo2, hi2) = range(1);

    let inner = QuadratureSettings {
        abs_tol: T::zero(),
        rel_tol: settings.rel_tol * T::of(1e-3),
        max_intervals: settings.max_intervals,
    };
    let middle = QuadratureSettings {
        abs_tol: T::zero(),
        rel_tol: settings.rel_tol * T::of(1e-2),
        max_intervals: settings.max_intervals,
    };
    let outer = QuadratureSettings {
        abs_tol: T::zero(),
        rel_tol: settings.rel_tol * T::of(0.1),
        max_intervals: settings.max_intervals,
    };

    // the angular weight has kinks where the two radii differ by exactly the contact distance
    let radial_points = |xi1: T| -> Vec<T> {
        let rho1 = radii[0] * (T::one() + xi1);
        let mut pts = vec![lo2, T::zero(), hi2];
        for edge in [rho1 - contact, rho1 + contact] {
            let xi2 = edge / radii[1] - T::one();
            if xi2 > lo2 && xi2 < hi2 {
                pts.push(xi2);
            }
        }
        pts.retain(|&x| x >= lo2 && x <= hi2);
        pts.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
        pts.dedup();
        pts
    };

    let slice = |xi1: T, power: [i32; 2]| -> Result<T> {
        let rho1 = radii[0] * (T::one() + xi1);
        let w1 = (-model.one_body_energy(0, xi1)).exp();
        let r = integrate_with_breakpoints(
            |xi2: T| {
                let rho2 = radii[1] * (T::one() + xi2);
                let w2 = (-model.one_body_energy(1, xi2)).exp();
                if w2 == T::zero() {
                    return Ok(T::zero());
                }
                let ang = angular_weight(strength, contact, [rho1, rho2], &inner)?;
                Ok(xi2.powi(power[1]) * w2 * ang)
            },
            &radial_points(xi1),
            &middle,
        )?;
        Ok(xi1.powi(power[0]) * w1 * r.value)
    };

    let outer_points = [lo1, T::zero(), hi1];
    let z = integrate_with_breakpoints(|x| slice(x, [0, 0]), &outer_points, &outer)?.value;
    if !(z > T::zero()) {
        return Err(Error::Quadrature("normalisation vanished".into()));
    }
    let m1 = integrate_with_breakpoints(|x| slice(x, [2, 0]), &outer_points, &outer)?.value;
    let m2 = integrate_with_breakpoints(|x| slice(x, [0, 2]), &outer_points, &outer)?.value;
    Ok(TwoBodyMoments {
        second_moment: [m1 / z, m2 / z],
        partition: z,
    })
}
