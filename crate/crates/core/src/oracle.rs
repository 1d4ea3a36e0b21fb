//! Single-mode Gaussian states under the beam-splitter channel.
//!
//! Works directly with the eigenvalues `λ±` of the correlation matrix in
//! units of `ħ`. The exchange entropy uses the closed-form symplectic
//! spectrum of the evolved purification, rewritten around
//! `A = 2λ₊ − 1`, `C = 2λ₋ − 1`, `B = 2N̄` so that nothing cancels when the
//! state or the channel is close to pure.

use crate::error::{CapacityError, Result};
use crate::kernels::{g_clamped, ModeParams};

/// Slack allowed on the Heisenberg bound `n₀ ≥ √(c²+1)`.
const BOUND_TOLERANCE: f64 = 1e-12;

/// Gaussian state `α = (ħ/2)[[n₀eʳ, c], [c, n₀e⁻ʳ]]` with displacement term `m`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianModeState {
    pub n0: f64,
    pub r: f64,
    pub c: f64,
    pub m: f64,
}

/// Eigenvalues before and after the channel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralPair {
    pub lam_plus: f64,
    pub lam_minus: f64,
    pub lamp_plus: f64,
    pub lamp_minus: f64,
}

/// Spectrum of the evolved purification.
///
/// `lam` holds `±ν₁, ±ν₂`, the moduli of the four (purely imaginary)
/// eigenvalues; `l0`, `l1` are the scalars they are built from, with
/// `ν² = −(L₀ ± √(L₁ + L₀²))/8`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExchangeEigenvalues {
    pub lam: [f64; 4],
    pub l0: f64,
    pub l1: f64,
}

impl GaussianModeState {
    pub fn new(n0: f64, r: f64, c: f64, m: f64) -> Result<Self> {
        make_state(n0, r, c, m)
    }

    /// Unsqueezed thermal state with `n` photons.
    pub fn thermal(n: f64) -> Result<Self> {
        make_state(2.0 * n + 1.0, 0.0, 0.0, 0.0)
    }

    pub fn vacuum() -> Self {
        Self { n0: 1.0, r: 0.0, c: 0.0, m: 0.0 }
    }

    /// State with prescribed eigenvalues `λ₊ ≥ λ₋ > 0` and `c = 0`.
    pub fn from_eigenvalues(lam_plus: f64, lam_minus: f64, m: f64) -> Result<Self> {
        if !(lam_minus > 0.0 && lam_plus >= lam_minus) {
            return Err(CapacityError::domain(
                "from_eigenvalues",
                format!("need lambda+ >= lambda- > 0, got {lam_plus}, {lam_minus}"),
            ));
        }
        make_state(2.0 * (lam_plus * lam_minus).sqrt(), 0.5 * (lam_plus / lam_minus).ln(), 0.0, m)
    }

    /// `(λ₊, λ₋) = ½[n₀ cosh r ± √((n₀ sinh r)² + c²)]`.
    pub fn eigenvalues(&self) -> (f64, f64) {
        let sum = self.n0 * self.r.cosh();
        let split = (self.n0 * self.r.sinh()).hypot(self.c);
        let plus = 0.5 * (sum + split);
        // λ₊λ₋ = (n₀² − c²)/4
        let minus = 0.25 * (self.n0 * self.n0 - self.c * self.c) / plus;
        (plus, minus)
    }

    /// `N = (λ₊ + λ₋ − 1 + m)/2`.
    pub fn mean_photons(&self) -> f64 {
        0.5 * (self.n0 * self.r.cosh() - 1.0 + self.m)
    }

    pub fn spectral_pair(&self, ch: &ModeParams) -> SpectralPair {
        let (lp, lm) = self.eigenvalues();
        let bath = (1.0 - ch.eta) * (ch.nbar + 0.5);
        SpectralPair { lam_plus: lp, lam_minus: lm, lamp_plus: ch.eta * lp + bath, lamp_minus: ch.eta * lm + bath }
    }

    /// `2λ± − 1`, computed so that pure states give `A·C + A + C = 0` exactly.
    fn excesses(&self) -> (f64, f64) {
        let (lp, lm) = self.eigenvalues();
        (2.0 * lp - 1.0, 2.0 * lm - 1.0)
    }
}

/// Validated state constructor.
pub fn make_state(n0: f64, r: f64, c: f64, m: f64) -> Result<GaussianModeState> {
    if !(n0.is_finite() && r.is_finite() && c.is_finite() && m.is_finite()) {
        return Err(CapacityError::domain("make_state", "parameters must be finite"));
    }
    let bound = c.hypot(1.0);
    if n0 < bound - BOUND_TOLERANCE {
        return Err(CapacityError::domain(
            "make_state",
            format!("n0 = {n0} violates the uncertainty bound sqrt(c^2+1) = {bound}"),
        ));
    }
    if m < 0.0 {
        return Err(CapacityError::domain("make_state", format!("m = {m} must be >= 0")));
    }
    Ok(GaussianModeState { n0: n0.max(bound), r, c, m })
}

/// `g(x/(2(√(1+x)+1)))`, i.e. the entropy of a mode whose symplectic
/// eigenvalue is `√(1+x)/2`.
#[inline]
fn g_of_shifted(x: f64) -> f64 {
    let x = x.max(-1.0);
    g_clamped(x / (2.0 * ((1.0 + x).sqrt() + 1.0)))
}

/// `S(ρ) = g(√(λ₊λ₋) − ½)`.
pub fn input_entropy(s: &GaussianModeState) -> f64 {
    g_of_shifted(s.n0 * s.n0 - s.c * s.c - 1.0)
}

/// Entropy of the output state `α′ = ηα + (1−η)B`.
pub fn output_entropy(s: &GaussianModeState, ch: &ModeParams) -> Result<f64> {
    ch.validate()?;
    let (a, c) = s.excesses();
    let b = 2.0 * ch.nbar;
    let x = ch.eta * a + (1.0 - ch.eta) * b;
    let y = ch.eta * c + (1.0 - ch.eta) * b;
    Ok(g_of_shifted(x + y + x * y))
}

/// Spectrum of the evolved purification.
pub fn exchange_eigenvalues(s: &GaussianModeState, ch: &ModeParams) -> Result<ExchangeEigenvalues> {
    ch.validate()?;
    let (w1, w2, l0, l1) = exchange_roots(s, ch)?;
    let nu1 = 0.5 * (1.0 + w1).max(0.0).sqrt();
    let nu2 = 0.5 * (1.0 + w2).max(0.0).sqrt();
    Ok(ExchangeEigenvalues { lam: [nu1, -nu1, nu2, -nu2], l0, l1 })
}

/// Roots `w = 4ν² − 1` plus the raw `L₀`, `L₁`.
fn exchange_roots(s: &GaussianModeState, ch: &ModeParams) -> Result<(f64, f64, f64, f64)> {
    let eta = ch.eta;
    let om = 1.0 - eta;
    let (a, c) = s.excesses();
    let b = 2.0 * ch.nbar;

    // Sum and shifted product of the w roots; T = −L₀ − 2.
    let t = om * (a + c + 2.0 * b + om * (a * c + b * b) + eta * (a * b + b * c));
    let x = om * (a + b + a * b);
    let y = om * (b + c + b * c);
    let u = x + y + x * y;
    let disc = t * t + 4.0 * t - 4.0 * u;

    let (lp, lm) = s.eigenvalues();
    let nb = ch.nbar;
    let l0 = -(1.0 + eta * eta)
        - 4.0 * om * om * nb * nb
        - 4.0 * om * (om + eta * (lp + lm)) * nb
        - 2.0 * eta * om * (lp + lm)
        - 4.0 * om * om * lp * lm;
    let l1 = -8.0 * om * (1.0 + 2.0 * nb) * (2.0 * om * (1.0 + 2.0 * nb) * lp * lm + eta * (lp + lm)) - 4.0 * eta * eta;

    let scale = 1.0 + t * t;
    if disc < -1e-9 * scale {
        return Err(CapacityError::numeric("exchange_entropy", format!("negative discriminant L1 + L0^2 = {disc}")));
    }
    let sq = disc.max(0.0).sqrt();
    // w² − T w + (U − T) = 0
    let prod = u - t;
    let (w1, w2) = if t >= 0.0 {
        let big = 0.5 * (t + sq);
        (big, if big != 0.0 { prod / big } else { 0.0 })
    } else {
        let big = 0.5 * (t - sq);
        (if big != 0.0 { prod / big } else { 0.0 }, big)
    };
    Ok((w1, w2, l0, l1))
}

/// Entropy of exchange, `½ Σₖ g(|λₖ| − ½)`.
pub fn exchange_entropy(s: &GaussianModeState, ch: &ModeParams) -> Result<f64> {
    ch.validate()?;
    let (w1, w2, _, _) = exchange_roots(s, ch)?;
    Ok(g_of_shifted(w1) + g_of_shifted(w2))
}

/// `I = S(ρ) + S(N[ρ]) − S_exchange`.
pub fn mutual_information(s: &GaussianModeState, ch: &ModeParams) -> Result<f64> {
    Ok(input_entropy(s) + output_entropy(s, ch)? - exchange_entropy(s, ch)?)
}

/// `J = S(N[ρ]) − S_exchange`.
pub fn coherent_information(s: &GaussianModeState, ch: &ModeParams) -> Result<f64> {
    Ok(output_entropy(s, ch)? - exchange_entropy(s, ch)?)
}

/// Outcome of [`verify_no_squeezing`].
#[derive(Debug, Clone, PartialEq)]
pub struct SqueezingScan {
    /// `(λ₊ − λ₋, I)` at each grid point, in increasing order of the difference.
    pub samples: Vec<(f64, f64)>,
    pub argmax_index: usize,
    pub argmax_diff: f64,
    pub grid_step: f64,
    /// Whether the maximum sits within one grid step of `λ₊ = λ₋`.
    pub achieved_at_zero: bool,
}

/// Mutual information along `λ₊ − λ₋ ∈ [0, 2N]` at fixed `λ₊ + λ₋ = 2N + 1`, `m = 0`.
pub fn verify_no_squeezing(n: f64, ch: &ModeParams, grid_size: usize) -> Result<SqueezingScan> {
    if !(n > 0.0 && n.is_finite()) {
        return Err(CapacityError::domain("verify_no_squeezing", format!("N = {n} must be > 0")));
    }
    if grid_size < 2 {
        return Err(CapacityError::domain("verify_no_squeezing", "grid needs at least two points"));
    }
    ch.validate()?;
    let sum = 2.0 * n + 1.0;
    let step = 2.0 * n / (grid_size - 1) as f64;
    let mut samples = Vec::with_capacity(grid_size);
    for i in 0..grid_size {
        let diff = if i + 1 == grid_size { 2.0 * n } else { i as f64 * step };
        let state = GaussianModeState::from_eigenvalues(0.5 * (sum + diff), 0.5 * (sum - diff), 0.0)?;
        samples.push((diff, mutual_information(&state, ch)?));
    }
    let (argmax_index, &(argmax_diff, _)) = samples
        .iter()
        .enumerate()
        .max_by(|a, b| a.1 .1.total_cmp(&b.1 .1).then(b.0.cmp(&a.0)))
        .expect("grid is non-empty");
    Ok(SqueezingScan { argmax_index, argmax_diff, grid_step: step, achieved_at_zero: argmax_index <= 1, samples })
}
