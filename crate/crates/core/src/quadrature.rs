//! Globally adaptive 15-point Gauss–Kronrod quadrature on finite intervals.
//!
//! Generic over [`Scalar`]; the integrand may fail, which lets integrals be nested.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

// Nodes and weights as tabulated, digits beyond f64 included.
#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

// Gauss weights for the odd Kronrod nodes XGK[1], XGK[3], XGK[5], XGK[7]
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadratureSettings<T> {
    pub abs_tol: T,
    pub rel_tol: T,
    /// Total number of subintervals allowed before giving up.
    pub max_intervals: usize,
}

impl<T: Scalar> Default for QuadratureSettings<T> {
    fn default() -> Self {
        Self {
            abs_tol: T::zero(),
            rel_tol: T::of(1e-10),
            max_intervals: 500,
        }
    }
}

impl<T: Scalar> QuadratureSettings<T> {
    pub fn with_tolerances(abs_tol: T, rel_tol: T) -> Self {
        Self {
            abs_tol,
            rel_tol,
            ..Self::default()
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Integral<T> {
    pub value: T,
    pub error_estimate: T,
    pub evaluations: usize,
    pub intervals: usize,
}

#[derive(Clone, Copy, Debug)]
struct Piece<T> {
    a: T,
    b: T,
    value: T,
    error: T,
}

fn gauss_kronrod<T: Scalar, F>(f: &mut F, a: T, b: T) -> Result<Piece<T>>
where
    F: FnMut(T) -> Result<T>,
{
    let half = T::of(0.5);
    let center = half * (a + b);
    let half_len = half * (b - a);
    let fc = f(center)?;
    let mut kronrod = fc * T::of(WGK[7]);
    let mut gauss = fc * T::of(WG[3]);
    let mut resabs = kronrod.abs();
    let mut values = [(T::zero(), T::zero()); 7];
    for (k, slot) in values.iter_mut().enumerate() {
        let dx = half_len * T::of(XGK[k]);
        let f1 = f(center - dx)?;
        let f2 = f(center + dx)?;
        if !(f1.is_finite() && f2.is_finite()) {
            return Err(Error::Quadrature(format!(
                "integrand not finite near {} on [{a}, {b}]",
                center.to_f64_lossy()
            )));
        }
        let w = T::of(WGK[k]);
        kronrod = kronrod + w * (f1 + f2);
        resabs = resabs + w * (f1.abs() + f2.abs());
        if k % 2 == 1 {
            gauss = gauss + T::of(WG[k / 2]) * (f1 + f2);
        }
        *slot = (f1, f2);
    }
    if !fc.is_finite() {
        return Err(Error::Quadrature(format!(
            "integrand not finite at {} on [{a}, {b}]",
            center.to_f64_lossy()
        )));
    }
    let mean = kronrod * half;
    let mut resasc = T::of(WGK[7]) * (fc - mean).abs();
    for (k, &(f1, f2)) in values.iter().enumerate() {
        resasc = resasc + T::of(WGK[k]) * ((f1 - mean).abs() + (f2 - mean).abs());
    }
    let scale = half_len.abs();
    let value = kronrod * half_len;
    resabs = resabs * scale;
    resasc = resasc * scale;
    let mut error = ((kronrod - gauss) * half_len).abs();
    if resasc != T::zero() && error != T::zero() {
        let ratio = (T::of(200.0) * error / resasc).powf(T::of(1.5));
        error = resasc * ratio.min(T::one());
    }
    let floor = T::of(50.0) * T::epsilon();
    if resabs > T::min_positive_value() / floor {
        error = error.max(floor * resabs);
    }
    Ok(Piece { a, b, value, error })
}

/// Integrates over `[points[0], points[last]]`, treating interior points as breakpoints.
pub fn integrate_with_breakpoints<T: Scalar, F>(
    mut f: F,
    points: &[T],
    settings: &QuadratureSettings<T>,
) -> Result<Integral<T>>
where
    F: FnMut(T) -> Result<T>,
{
    if points.len() < 2 {
        return Err(Error::Quadrature("need at least two interval end points".into()));
    }
    if points.iter().any(|p| !p.is_finite()) || points.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::Quadrature(format!(
            "breakpoints must be finite and ascending: {:?}",
            points
        )));
    }
    let mut pieces = Vec::with_capacity(settings.max_intervals);
    for w in points.windows(2) {
        if w[1] > w[0] {
            pieces.push(gauss_kronrod(&mut f, w[0], w[1])?);
        }
    }
    let mut evaluations = 15 * pieces.len();
    let mut trace: Vec<(usize, f64, f64)> = Vec::new();
    loop {
        let value: T = pieces.iter().map(|p| p.value).sum();
        let error: T = pieces.iter().map(|p| p.error).sum();
        let target = settings.abs_tol.max(settings.rel_tol * value.abs());
        if error <= target {
            return Ok(Integral {
                value,
                error_estimate: error,
                evaluations,
                intervals: pieces.len(),
            });
        }
        trace.push((pieces.len(), value.to_f64_lossy(), error.to_f64_lossy()));
        let worst = pieces
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.error.partial_cmp(&y.1.error).unwrap_or(std::cmp::Ordering::Equal))
            .map(|(k, _)| k);
        let Some(worst) = worst else {
            return Ok(Integral {
                value,
                error_estimate: error,
                evaluations,
                intervals: 0,
            });
        };
        let p = pieces[worst];
        let mid = T::of(0.5) * (p.a + p.b);
        let exhausted = pieces.len() >= settings.max_intervals;
        if exhausted || !(mid > p.a && mid < p.b) {
            return Err(Error::Quadrature(refinement_report(&trace, &pieces, target, exhausted)));
        }
        let left = gauss_kronrod(&mut f, p.a, mid)?;
        let right = gauss_kronrod(&mut f, mid, p.b)?;
        evaluations += 30;
        pieces[worst] = left;
        pieces.push(right);
    }
}

/// Integrates `f` over `[a, b]`.
pub fn integrate<T: Scalar, F>(f: F, a: T, b: T, settings: &QuadratureSettings<T>) -> Result<Integral<T>>
where
    F: FnMut(T) -> Result<T>,
{
    integrate_with_breakpoints(f, &[a, b], settings)
}

fn refinement_report<T: Scalar>(
    trace: &[(usize, f64, f64)],
    pieces: &[Piece<T>],
    target: T,
    exhausted: bool,
) -> String {
    let mut worst: Vec<_> = pieces.iter().collect();
    worst.sort_by(|x, y| y.error.partial_cmp(&x.error).unwrap_or(std::cmp::Ordering::Equal));
    let mut msg = if exhausted {
        format!("interval budget of {} exhausted", pieces.len())
    } else {
        "interval cannot be bisected further".to_string()
    };
    msg.push_str(&format!(
        "; target error {:e}; refinement trace:",
        target.to_f64_lossy()
    ));
    for (n, v, e) in trace.iter().rev().take(8).rev() {
        msg.push_str(&format!(" [{n} intervals: {v:e} +- {e:e}]"));
    }
    msg.push_str("; worst intervals:");
    for p in worst.iter().take(4) {
        msg.push_str(&format!(
            " [{:e}, {:e}] err {:e}",
            p.a.to_f64_lossy(),
            p.b.to_f64_lossy(),
            p.error.to_f64_lossy()
        ));
    }
    msg
}
