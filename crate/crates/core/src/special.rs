//! Bose-type integrals `Γ(x)` and `Λ(x)`.

use std::f64::consts::{LN_2, PI};

use crate::error::{CapacityError, Result};
use crate::kernels::g_clamped;
use crate::quad::{integrate_scalar, QuadOptions};

/// Past this abscissa the Bose integrands are below `1e−30` and dropped.
const BOSE_CUTOFF: f64 = 80.0;

fn opts() -> QuadOptions {
    QuadOptions { abs_tol: 1e-15, rel_tol: 1e-13, max_intervals: 2000 }
}

/// Breakpoints `0 = p₀ < … < upper` spreading work over the Bose decay.
fn bose_points(upper: f64) -> Vec<f64> {
    let mut pts = vec![0.0];
    pts.extend([0.5, 2.0, 6.0, 15.0, 35.0].into_iter().filter(|&p| p < upper));
    pts.push(upper);
    pts
}

/// `y/(eʸ − 1)`, equal to 1 at the origin.
#[inline]
fn bose_weight(y: f64) -> f64 {
    if y == 0.0 {
        1.0
    } else {
        y / y.exp_m1()
    }
}

/// `Γ(x) = ∫₀ˣ y/(eʸ−1) dy`; `Γ(∞) = π²/6`.
pub fn gamma_fn(x: f64) -> Result<f64> {
    if x.is_nan() || x < 0.0 {
        return Err(CapacityError::domain("gamma_fn", format!("argument {x} < 0")));
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    let upper = x.min(BOSE_CUTOFF);
    integrate_scalar(bose_weight, &bose_points(upper), opts())
}

/// `∫₀ᵘ g(a/(eʸ−1)) dy` for `a ≥ 0` and `u ∈ [0, ∞]`.
///
/// The `ln(1/y)` growth at the origin is removed with `y = t²` on `[0, 1]`.
pub fn bose_entropy_integral(scale: f64, upper: f64) -> Result<f64> {
    if scale.is_nan() || scale < 0.0 || upper.is_nan() || upper < 0.0 {
        return Err(CapacityError::domain(
            "bose_entropy_integral",
            format!("scale {scale} and upper limit {upper} must be >= 0"),
        ));
    }
    if scale == 0.0 || upper == 0.0 {
        return Ok(0.0);
    }
    let integrand = |y: f64| g_clamped(scale / y.exp_m1());
    let upper = upper.min(BOSE_CUTOFF);
    let head_end = upper.min(1.0);
    let head =
        integrate_scalar(|t| 2.0 * t * integrand(t * t), &[0.0, 0.1 * head_end.sqrt(), head_end.sqrt()], opts())?;
    let tail = if upper > 1.0 {
        let mut pts = bose_points(upper);
        pts[0] = 1.0;
        pts.retain(|&p| p >= 1.0);
        integrate_scalar(integrand, &pts, opts())?
    } else {
        0.0
    };
    Ok(head + tail)
}

/// `Λ(x) = ln2 ∫₀^∞ g(x/(eʸ−1)) dy`; `Λ(1) = π²/3`.
pub fn lambda_fn(x: f64) -> Result<f64> {
    if x.is_nan() || x < 0.0 {
        return Err(CapacityError::domain("lambda_fn", format!("argument {x} < 0")));
    }
    Ok(LN_2 * bose_entropy_integral(x, f64::INFINITY)?)
}

/// `π²/6`.
pub const GAMMA_INF: f64 = PI * PI / 6.0;
