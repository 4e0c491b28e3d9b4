//! The exact one-body radial weight `exp(-(gamma^2/2) xi^2/(1+xi)^2)` on `(-1, upper]`.

use crate::error::{Error, Result};
use crate::model::truncated_exponent;
use crate::quadrature::{integrate_with_breakpoints, QuadratureSettings};
use crate::scalar::Scalar;

use super::positive;

fn breakpoints<T: Scalar>(gamma: T, upper: T) -> Vec<T> {
    let w = (T::of(10.0) / gamma).min(T::of(0.25));
    let mut pts = vec![-T::one(), T::of(-0.5), -w, T::zero(), w, T::of(0.5), T::one()];
    pts.retain(|&x| x < upper);
    pts.push(upper);
    pts
}

fn radial_integral<T: Scalar>(gamma: T, upper: T, power: i32) -> Result<T> {
    let settings = QuadratureSettings {
        abs_tol: T::zero(),
        rel_tol: T::of(1e-10).max(T::epsilon() * T::of(100.0)),
        max_intervals: 2000,
    };
    let pts = breakpoints(gamma, upper);
    let r = integrate_with_breakpoints(
        |xi: T| {
            if xi <= -T::one() {
                return Ok(T::zero());
            }
            Ok(xi.powi(power) * (-truncated_exponent(xi, gamma)).exp())
        },
        &pts,
        &settings,
    )?;
    Ok(r.value)
}

/// `Z = 2 pi * integral over (-1, upper] of exp(-(gamma^2/2) xi^2/(1+xi)^2)`.
pub fn truncated_partition<T: Scalar>(gamma: T, upper: T) -> Result<T> {
    positive("gamma", gamma)?;
    positive("upper", upper)?;
    Ok(T::TAU() * radial_integral(gamma, upper, 0)?)
}

/// `<xi^2>` under the truncated one-body measure.
pub fn truncated_second_moment<T: Scalar>(gamma: T, upper: T) -> Result<T> {
    positive("gamma", gamma)?;
    positive("upper", upper)?;
    let z = radial_integral(gamma, upper, 0)?;
    if !(z > T::zero()) {
        return Err(Error::Quadrature(format!(
            "normalisation underflowed at gamma = {gamma}"
        )));
    }
    Ok(radial_integral(gamma, upper, 2)? / z)
}

/// `upper * exp(-gamma^2/18)`, dominating the radial integral over `|xi| > 1/2`.
pub fn truncated_tail_bound<T: Scalar>(gamma: T, upper: T) -> T {
    upper * (-gamma * gamma / T::of(18.0)).exp()
}

/// Variances of the Gaussians that sandwich the central part of the truncated measure:
/// `(1/(4 gamma^2), 9/(4 gamma^2))`, from `1 + xi` in `[1/2, 3/2]` on `|xi| <= 1/2`.
pub fn gaussian_variance_bracket<T: Scalar>(gamma: T) -> (T, T) {
    let g2 = gamma * gamma;
    (T::one() / (T::of(4.0) * g2), T::of(9.0) / (T::of(4.0) * g2))
}
