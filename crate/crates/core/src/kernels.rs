//! Closed-form single-mode entropy kernels.
//!
//! Every kernel is a scalar function of the signal occupation `N`, the
//! reservoir occupation `N̄` and the quantum efficiency `η`, built from the
//! bosonic entropy function `g(x) = (x+1)log₂(x+1) − x log₂x`.
//!
//! The exchange-entropy arguments `(D ± (N − N′) − 1)/2` are evaluated in a
//! cancellation-free form: with `P = (1−η)(N+N̄) + 1` and `Q = 4η(1−η)N N̄`
//! one has `D² = P² + Q`, so both arguments equal `(1−η)N + h` and
//! `(1−η)N̄ + h` with `h = (D − P)/2 = Q / (2(D + P)) ≥ 0`.

use std::f64::consts::LN_2;
use std::fmt;
use std::str::FromStr;

use crate::error::{CapacityError, Result};

/// Rounding slack accepted on inputs that must be non-negative.
pub const NEGATIVE_TOLERANCE: f64 = 1e-12;

/// Below this argument `g` switches to its leading-order series.
const SERIES_THRESHOLD: f64 = 1e-8;

/// Smallest occupation at which slopes are evaluated; `g'(0)` diverges.
pub(crate) const SLOPE_FLOOR: f64 = 1e-300;

/// Which capacity a kernel (or a spectrum) refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Quantity {
    /// Entanglement-assisted capacity, kernel `c_E`.
    Ce,
    /// Coherent-state lower bound on the classical capacity, kernel `k`.
    CLower,
    /// Coherent-information lower bound on the quantum capacity, kernel `q`.
    QLower,
}

impl Quantity {
    pub const ALL: [Quantity; 3] = [Quantity::Ce, Quantity::CLower, Quantity::QLower];

    pub fn as_str(self) -> &'static str {
        match self {
            Quantity::Ce => "ce",
            Quantity::CLower => "c_lower",
            Quantity::QLower => "q_lower",
        }
    }
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Quantity {
    type Err = CapacityError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "ce" | "c_e" => Ok(Quantity::Ce),
            "c_lower" | "c" | "k" => Ok(Quantity::CLower),
            "q_lower" | "q" => Ok(Quantity::QLower),
            other => Err(CapacityError::Config(format!("unknown quantity '{other}'"))),
        }
    }
}

/// Occupations and efficiency of a single channel mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeParams {
    /// Mean photon number of the signal mode.
    pub n: f64,
    /// Mean photon number of the reservoir mode.
    pub nbar: f64,
    /// Quantum efficiency (beam-splitter transmissivity).
    pub eta: f64,
}

impl ModeParams {
    pub fn new(n: f64, nbar: f64, eta: f64) -> Result<Self> {
        let p = Self { n, nbar, eta };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.n >= 0.0 && self.n.is_finite()) {
            return Err(CapacityError::domain("ModeParams", format!("N = {} must be finite and >= 0", self.n)));
        }
        if !(self.nbar >= 0.0 && self.nbar.is_finite()) {
            return Err(CapacityError::domain("ModeParams", format!("Nbar = {} must be finite and >= 0", self.nbar)));
        }
        validate_eta(self.eta)
    }

    /// Reservoir photons leaking into the output, `(1−η)N̄`.
    #[inline]
    fn leaked(&self) -> f64 {
        (1.0 - self.eta) * self.nbar
    }
}

pub(crate) fn validate_eta(eta: f64) -> Result<()> {
    if (0.0..=1.0).contains(&eta) {
        Ok(())
    } else {
        Err(CapacityError::domain("eta", format!("quantum efficiency {eta} outside [0, 1]")))
    }
}

/// Derived per-mode quantities together with a kernel value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelEval {
    /// Output photon number `N′ = ηN + (1−η)N̄`.
    pub nprime: f64,
    /// `D ≥ 1`.
    pub dfac: f64,
    /// `A`, the exponent coefficient of the stationarity equations.
    pub afac: f64,
    /// Kernel value in bits per mode.
    pub value: f64,
}

/// Entropy of a thermal mode with mean occupation `x`, in bits.
pub fn g_entropy(x: f64) -> Result<f64> {
    if x.is_nan() || x < -NEGATIVE_TOLERANCE {
        return Err(CapacityError::domain("g_entropy", format!("argument {x} < 0")));
    }
    Ok(g_clamped(x))
}

/// `g` with tiny negatives treated as zero. Callers guarantee `x ≥ −1e−12`.
#[inline]
pub(crate) fn g_clamped(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else if x < SERIES_THRESHOLD {
        // −x ln x, not x ln(1/x): 1/x overflows for subnormal x
        x * (1.0 - x.ln()) / LN_2
    } else if x < 1.0 {
        let l1p = x.ln_1p();
        (l1p + x * (l1p - x.ln())) / LN_2
    } else if x.is_infinite() {
        f64::INFINITY
    } else {
        (x.ln_1p() + x * (1.0 / x).ln_1p()) / LN_2
    }
}

/// `g′(x) = log₂(1 + 1/x)`, with the argument floored at [`SLOPE_FLOOR`].
#[inline]
pub(crate) fn g_slope(x: f64) -> f64 {
    (1.0 / x.max(SLOPE_FLOOR)).ln_1p() / LN_2
}

/// `coef · g′(x)`, zero when the coefficient vanishes (even at `x = 0`).
#[inline]
fn weighted_slope(coef: f64, x: f64) -> f64 {
    if coef == 0.0 {
        0.0
    } else {
        coef * g_slope(x)
    }
}

/// Output photon number `ηN + (1−η)N̄`.
pub fn output_photons(p: &ModeParams) -> f64 {
    p.eta * p.n + p.leaked()
}

/// Cancellation-free pieces of `D`: returns `(D, h)` with `h = (D − P)/2`.
#[inline]
fn d_parts(n: f64, nbar: f64, eta: f64) -> (f64, f64) {
    let base = (1.0 - eta) * (n + nbar) + 1.0;
    let cross = 4.0 * eta * (1.0 - eta) * n * nbar;
    let d = (base * base + cross).sqrt();
    (d, 0.5 * cross / (d + base))
}

/// `D = √((N+N′+1)² − 4ηN(N+1))`.
pub fn d_factor(p: &ModeParams) -> Result<f64> {
    p.validate()?;
    // D² = ((1−η)(N+N̄)+1)² + 4η(1−η)N N̄ is a sum of non-negative terms, so
    // the radicand cannot round below zero for valid parameters.
    let (d, _) = d_parts(p.n, p.nbar, p.eta);
    if !d.is_finite() {
        return Err(CapacityError::numeric("d_factor", format!("non-finite D for {p:?}")));
    }
    Ok(d)
}

/// `A = [(1−3η)N + (1−η) + (1+η)N′]/D`.
pub fn a_factor(p: &ModeParams) -> Result<f64> {
    let d = d_factor(p)?;
    let eta = p.eta;
    Ok(((1.0 - 3.0 * eta) * p.n + (1.0 - eta) + (1.0 + eta) * output_photons(p)) / d)
}

/// The two exchange-entropy arguments `(D+N−N′−1)/2` and `(D−N+N′−1)/2`.
#[inline]
fn exchange_args(n: f64, nbar: f64, eta: f64) -> (f64, f64) {
    let (_, h) = d_parts(n, nbar, eta);
    ((1.0 - eta) * n + h, (1.0 - eta) * nbar + h)
}

fn exchange_entropy_bits(n: f64, nbar: f64, eta: f64) -> f64 {
    let (u, v) = exchange_args(n, nbar, eta);
    g_clamped(u) + g_clamped(v)
}

/// Entanglement-assisted kernel `c_E = g(N) + g(N′) − g(u) − g(v)`.
pub fn kernel_ce(p: &ModeParams) -> Result<f64> {
    p.validate()?;
    Ok(g_clamped(p.n) + g_clamped(output_photons(p)) - exchange_entropy_bits(p.n, p.nbar, p.eta))
}

/// Coherent-state Holevo kernel `k = g(N′) − g((1−η)N̄)`.
pub fn kernel_k(p: &ModeParams) -> Result<f64> {
    p.validate()?;
    Ok(g_clamped(output_photons(p)) - g_clamped(p.leaked()))
}

/// Coherent-information kernel `q = g(N′) − g(u) − g(v)`; may be negative.
pub fn kernel_q(p: &ModeParams) -> Result<f64> {
    p.validate()?;
    Ok(g_clamped(output_photons(p)) - exchange_entropy_bits(p.n, p.nbar, p.eta))
}

/// Kernel selected by `kind`.
pub fn kernel(kind: Quantity, p: &ModeParams) -> Result<f64> {
    match kind {
        Quantity::Ce => kernel_ce(p),
        Quantity::CLower => kernel_k(p),
        Quantity::QLower => kernel_q(p),
    }
}

/// Kernel value with the derived quantities `N′`, `D` and `A`.
pub fn evaluate(kind: Quantity, p: &ModeParams) -> Result<KernelEval> {
    Ok(KernelEval { nprime: output_photons(p), dfac: d_factor(p)?, afac: a_factor(p)?, value: kernel(kind, p)? })
}

/// Dephasing-channel kernels, i.e. the general kernels with `N̄ = N`.
///
/// With `D̃ = √(1 + 4N(N+1)(1−η))` these read `2[g(N) − g((D̃−1)/2)]`,
/// `g(N) − g((1−η)N)` and `g(N) − 2g((D̃−1)/2)`.
pub fn kernel_dephasing(kind: Quantity, n: f64, eta: f64) -> Result<f64> {
    ModeParams::new(n, n, eta)?;
    let gn = g_clamped(n);
    Ok(match kind {
        Quantity::Ce => 2.0 * (gn - g_clamped(dephasing_half_excess(n, eta))),
        Quantity::CLower => gn - g_clamped((1.0 - eta) * n),
        Quantity::QLower => gn - 2.0 * g_clamped(dephasing_half_excess(n, eta)),
    })
}

/// `(D̃ − 1)/2` without cancellation.
#[inline]
fn dephasing_half_excess(n: f64, eta: f64) -> f64 {
    exchange_args(n, n, eta).0
}

/// `D̃ = √(1 + 4N(N+1)(1−η))`.
pub fn d_dephasing(n: f64, eta: f64) -> f64 {
    2.0 * dephasing_half_excess(n, eta) + 1.0
}

/// Kernel value and its total derivative in `N`.
///
/// `tracking = true` makes the reservoir follow the signal (`N̄ = N`), which
/// is the dephasing channel; the derivative then includes `∂/∂N̄`.
pub(crate) fn kernel_with_slope(kind: Quantity, n: f64, nbar: f64, tracking: bool, eta: f64) -> (f64, f64) {
    let tau = if tracking { 1.0 } else { 0.0 };
    let nbar = if tracking { n } else { nbar };
    let one_m = 1.0 - eta;
    let nprime = eta * n + one_m * nbar;
    let d_nprime = eta + one_m * tau;

    match kind {
        Quantity::CLower => {
            let leaked = one_m * nbar;
            let value = g_clamped(nprime) - g_clamped(leaked);
            let slope = weighted_slope(d_nprime, nprime) - weighted_slope(one_m * tau, leaked);
            (value, slope)
        }
        Quantity::Ce | Quantity::QLower => {
            let base = one_m * (n + nbar) + 1.0;
            let cross = 4.0 * eta * one_m * n * nbar;
            let d = (base * base + cross).sqrt();
            let h = 0.5 * cross / (d + base);
            let u = one_m * n + h;
            let v = one_m * nbar + h;

            // dh/dN = (Q′/2 − 2P′h) / (2D)
            let d_base = one_m * (1.0 + tau);
            let d_cross = 4.0 * eta * one_m * (nbar + n * tau);
            let dh = (0.5 * d_cross - 2.0 * d_base * h) / (2.0 * d);
            let du = one_m + dh;
            let dv = one_m * tau + dh;

            let mut value = g_clamped(nprime) - g_clamped(u) - g_clamped(v);
            let mut slope = weighted_slope(d_nprime, nprime) - weighted_slope(du, u) - weighted_slope(dv, v);
            if kind == Quantity::Ce {
                value += g_clamped(n);
                slope += g_slope(n);
            }
            (value, slope)
        }
    }
}
