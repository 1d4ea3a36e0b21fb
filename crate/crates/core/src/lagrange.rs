//! Per-mode maximization of `φ(N) = w(N, N̄, η) − x·N/ln2`.

use std::f64::consts::{LN_2, PI};

use crate::error::{CapacityError, Result};
use crate::kernels::{kernel_with_slope, Quantity};
use crate::noise::{ChannelSpec, NoiseModel, NoiseProfile};
use crate::roots::{brent, golden_max};
use crate::special::{bose_entropy_integral, gamma_fn, GAMMA_INF};

/// Number of log-spaced occupations scanned to bracket the maximum.
const SCAN_POINTS: usize = 64;
const SCAN_FLOOR: f64 = 1e-9;
/// A maximum of `φ` below this is treated as "send nothing".
pub const CLAMP_THRESHOLD: f64 = 1e-14;

/// One per-mode problem.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeSolveRequest {
    pub quantity: Quantity,
    pub spec: ChannelSpec,
    /// Scaled frequency `ω/Ω`.
    pub x: f64,
    /// Scaled characteristic frequency `ω̄/Ω`; only read for thermal noise.
    pub y0: f64,
}

/// Optimal occupation at one frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OccupationPoint {
    pub x: f64,
    pub n: f64,
    /// The stationary point was rejected in favour of `N = 0`.
    pub clamped: bool,
}

/// Resolved scalar problem: kernel, reservoir occupation and multiplier.
#[derive(Debug, Clone, Copy)]
pub(crate) struct ModeProblem {
    pub kind: Quantity,
    pub nbar: f64,
    pub tracking: bool,
    pub eta: f64,
    pub x: f64,
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct ModeSolution {
    pub n: f64,
    /// Kernel value `w` at `n`.
    pub value: f64,
    pub clamped: bool,
}

impl ModeProblem {
    pub(crate) fn new(kind: Quantity, profile: &NoiseProfile, eta: f64, x: f64) -> Self {
        Self { kind, nbar: profile.nbar(x), tracking: profile.is_tracking(), eta, x }
    }

    #[inline]
    fn eval(&self, n: f64) -> (f64, f64) {
        let (w, slope) = kernel_with_slope(self.kind, n, self.nbar, self.tracking, self.eta);
        (w - self.x * n / LN_2, slope - self.x / LN_2)
    }

    #[inline]
    fn phi(&self, n: f64) -> f64 {
        self.eval(n).0
    }

    #[inline]
    fn dphi(&self, n: f64) -> f64 {
        self.eval(n).1
    }

    fn scan(&self, hi: f64) -> (Vec<f64>, Vec<f64>) {
        let ratio = (hi / SCAN_FLOOR).ln() / (SCAN_POINTS - 1) as f64;
        let ns: Vec<f64> = (0..SCAN_POINTS).map(|i| SCAN_FLOOR * (ratio * i as f64).exp()).collect();
        let phis = ns.iter().map(|&n| self.phi(n)).collect();
        (ns, phis)
    }

    /// Root of `φ′` on a bracket with `φ′(lo) > 0 > φ′(hi)`.
    fn polish(&self, mut lo: f64, mut hi: f64) -> f64 {
        for _ in 0..600 {
            let mid = if lo == 0.0 {
                hi * 1e-3
            } else if hi > 4.0 * lo {
                (lo * hi).sqrt()
            } else {
                0.5 * (lo + hi)
            };
            if !(mid > lo && mid < hi) || hi - lo <= 4.0 * f64::EPSILON * hi {
                break;
            }
            let s = self.dphi(mid);
            if s == 0.0 {
                return mid;
            }
            if s > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        if lo == 0.0 {
            hi
        } else {
            0.5 * (lo + hi)
        }
    }

    pub(crate) fn solve(&self) -> Result<ModeSolution> {
        if !(self.x > 0.0 && self.x.is_finite()) {
            return Err(CapacityError::domain("mode_occupation", format!("x = {} must be finite and > 0", self.x)));
        }
        let mut hi = 10f64.max(10.0 / self.x);
        let (ns, phis, best) = loop {
            let (ns, phis) = self.scan(hi);
            let best = (0..SCAN_POINTS).max_by(|&a, &b| phis[a].total_cmp(&phis[b])).expect("non-empty scan");
            if best + 1 < SCAN_POINTS {
                break (ns, phis, best);
            }
            hi *= 4.0;
            if hi > 1e300 {
                return Err(CapacityError::no_convergence(
                    "mode_occupation",
                    format!("objective still increasing at N = {hi:e} (x = {})", self.x),
                ));
            }
        };
        if phis.iter().any(|p| !p.is_finite()) {
            return Err(CapacityError::numeric("mode_occupation", format!("non-finite objective at x = {}", self.x)));
        }

        let lo = if best == 0 { 0.0 } else { ns[best - 1] };
        let hi = ns[best + 1];
        let slope_lo = if lo == 0.0 { self.dphi(0.0) } else { self.dphi(lo) };
        let n_star = if slope_lo > 0.0 && self.dphi(hi) < 0.0 {
            self.polish(lo, hi)
        } else {
            golden_max(|n| Ok(self.phi(n)), lo, hi, |n| 1e-12 * n + 1e-300)?.0
        };
        let mut phi_star = self.phi(n_star);
        let mut n_star = n_star;
        if phi_star < phis[best] {
            n_star = ns[best];
            phi_star = phis[best];
        }
        if phi_star < CLAMP_THRESHOLD {
            return Ok(ModeSolution { n: 0.0, value: 0.0, clamped: true });
        }
        let (w, _) = kernel_with_slope(self.kind, n_star, self.nbar, self.tracking, self.eta);
        Ok(ModeSolution { n: n_star, value: w, clamped: false })
    }
}

fn validate_request(req: &ModeSolveRequest) -> Result<NoiseProfile> {
    req.spec.validate()?;
    if !(req.x > 0.0 && req.x.is_finite()) {
        return Err(CapacityError::domain("mode_occupation", format!("x = {} must be finite and > 0", req.x)));
    }
    if !(req.y0 >= 0.0 && req.y0.is_finite()) {
        return Err(CapacityError::domain("mode_occupation", format!("y0 = {} must be finite and >= 0", req.y0)));
    }
    if req.spec.model == NoiseModel::Thermal && req.spec.rho_t > 0.0 && req.y0 == 0.0 {
        return Err(CapacityError::Config("thermal noise with rho_t > 0 needs y0 > 0".into()));
    }
    Ok(req.spec.profile(req.y0))
}

/// Optimal occupation `𝓕(x)` for one mode.
pub fn mode_occupation(req: &ModeSolveRequest) -> Result<OccupationPoint> {
    let profile = validate_request(req)?;
    let sol = ModeProblem::new(req.quantity, &profile, req.spec.eta, req.x).solve()?;
    Ok(OccupationPoint { x: req.x, n: sol.n, clamped: sol.clamped })
}

/// Relative residual `|ln2·∂w/∂N − x|/x` of the stationarity equation at `n`.
pub fn stationarity_residual(req: &ModeSolveRequest, n: f64) -> Result<f64> {
    let profile = validate_request(req)?;
    let p = ModeProblem::new(req.quantity, &profile, req.spec.eta, req.x);
    let (_, slope) = kernel_with_slope(p.kind, n, p.nbar, p.tracking, p.eta);
    Ok((LN_2 * slope - req.x).abs() / req.x)
}

/// Occupations on a frequency grid.
pub fn occupation_profile(quantity: Quantity, spec: &ChannelSpec, y0: f64, xs: &[f64]) -> Result<Vec<OccupationPoint>> {
    xs.iter().map(|&x| mode_occupation(&ModeSolveRequest { quantity, spec: *spec, x, y0 })).collect()
}

/// Closed-form coherent-state occupation for loss, white and thermal noise.
pub fn analytic_occupation_k(spec: &ChannelSpec, x: f64, y0: f64) -> Result<OccupationPoint> {
    spec.validate()?;
    if !(x > 0.0) {
        return Err(CapacityError::domain("analytic_occupation_k", format!("x = {x} must be > 0")));
    }
    let eta = spec.eta;
    if eta == 0.0 {
        return Ok(OccupationPoint { x, n: 0.0, clamped: true });
    }
    let signal = 1.0 / (eta * (x / eta).exp_m1());
    let noise = match spec.model {
        NoiseModel::Loss => 0.0,
        NoiseModel::WhiteNoise => (1.0 - eta) / eta * spec.nbar,
        NoiseModel::Thermal if y0 > 0.0 => (1.0 - eta) / eta / (x / y0).exp_m1(),
        NoiseModel::Thermal => 0.0,
        NoiseModel::Dephasing => {
            return Err(CapacityError::ModelMismatch(
                "closed-form occupation exists only for loss, white and thermal noise".into(),
            ))
        }
    };
    let n = signal - noise;
    Ok(if n > 0.0 { OccupationPoint { x, n, clamped: false } } else { OccupationPoint { x, n: 0.0, clamped: true } })
}

/// Root of the coupled high-temperature equations for the coherent-state bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HighTemperatureParams {
    pub xi: f64,
    pub ln_xi: f64,
    pub y0c: f64,
    /// Upper cutoff of the occupation profile, `η·ln ξ`.
    pub x_max: f64,
    /// `|ξ^{η/y₀} − (1−η)ξ − η| / ξ`.
    pub residual_cutoff: f64,
    /// Relative residual of the energy equation.
    pub residual_energy: f64,
}

/// `ln ξ` solving `ξ^p = (1−η)ξ + η` for `p ∈ (1−η, 1)`; `∞` as `p → 1`.
fn cutoff_log(p: f64, eta: f64) -> Result<f64> {
    if p >= 1.0 {
        return Ok(f64::INFINITY);
    }
    if p <= 1.0 - eta {
        return Ok(0.0);
    }
    // (ξ^p − (1−η)ξ − η)/ξ in logarithmic form, divided by t.
    let h = |t: f64| Ok(-(1.0 - p) - (eta * (-t).exp_m1()).ln_1p() / t);
    let mut t_lo = 1e-300;
    let mut t_hi = 1.0;
    while h(t_hi)? > 0.0 {
        t_lo = t_hi;
        t_hi *= 2.0;
        if t_hi > 1e12 {
            return Ok(f64::INFINITY);
        }
    }
    brent(h, t_lo, t_hi, 1e-300, "high-T cutoff")
}

/// Energy balance `ηΓ(t) − [((1−η)/η)Γ(pt) + (π²/6)/ρ²]·y₀²`.
fn energy_balance(y0: f64, eta: f64, rho: f64) -> Result<(f64, f64)> {
    let p = eta / y0;
    let t = cutoff_log(p, eta)?;
    let lhs = eta * gamma_fn(t)?;
    let rhs = ((1.0 - eta) / eta * gamma_fn(p * t)? + GAMMA_INF / (rho * rho)) * y0 * y0;
    Ok((lhs - rhs, lhs))
}

/// Solves the coupled cutoff and energy equations for `ρ_T > 1`.
pub fn thermal_high_t_params(rho_t: f64, eta: f64) -> Result<HighTemperatureParams> {
    if !(rho_t > 1.0 && rho_t.is_finite()) {
        return Err(CapacityError::domain("thermal_high_t_params", format!("rho_t = {rho_t} must exceed 1")));
    }
    if !(eta > 0.0 && eta < 1.0) {
        return Err(CapacityError::domain("thermal_high_t_params", format!("eta = {eta} must lie in (0, 1)")));
    }
    // The cutoff equation has a root ξ > 1 only for η < y₀ < η/(1−η).
    let lo = eta;
    let hi = eta / (1.0 - eta);
    let y0 = brent(|y| energy_balance(y, eta, rho_t).map(|v| v.0), lo, hi, 1e-15 * hi, "high-T y0")?;
    let p = eta / y0;
    let t = cutoff_log(p, eta)?;
    if !t.is_finite() || t <= 0.0 {
        return Err(CapacityError::no_convergence(
            "thermal_high_t_params",
            format!("degenerate cutoff ln(xi) = {t} at y0 = {y0}"),
        ));
    }
    // ln of ξ^p / ((1−η)ξ + η)
    let log_ratio = -(1.0 - p) * t - (eta * (-t).exp_m1()).ln_1p();
    let (g, lhs) = energy_balance(y0, eta, rho_t)?;
    Ok(HighTemperatureParams {
        xi: t.exp(),
        ln_xi: t,
        y0c: y0,
        x_max: eta * t,
        residual_cutoff: log_ratio.exp_m1().abs(),
        residual_energy: g.abs() / lhs,
    })
}

/// Coherent-state capacity factor in the high-temperature regime.
pub(crate) fn high_t_factor(rho_t: f64, eta: f64) -> Result<f64> {
    let hp = thermal_high_t_params(rho_t, eta)?;
    let p = eta / hp.y0c;
    let bracket = bose_entropy_integral(1.0, hp.ln_xi)? - bose_entropy_integral(1.0 - eta, p * hp.ln_xi)? / p;
    Ok(3.0 * eta * LN_2 / (PI * PI * hp.y0c) * rho_t * bracket)
}
