//! Frequency-integrated capacity factors.
//!
//! With the per-mode optimum `𝓕(x)` the energy integral is
//! `f = ∫ x𝓕 dx` and the capacity factor is
//! `𝒲 = (ln2/π)·√(3/(2f))·∫ w(𝓕(x), N̄(x), η) dx`, in units of `𝒯·R_C`.

use std::f64::consts::{LN_2, PI};

use crate::error::{CapacityError, Result};
use crate::kernels::{g_clamped, Quantity};
use crate::lagrange::{high_t_factor, ModeProblem, OccupationPoint};
use crate::noise::{noiseless_rate, ChannelSpec, NoiseModel, NoiseProfile, PhysicalInputs, HBAR};
use crate::quad::{integrate, QuadOptions};
use crate::roots::brent;
use crate::special::{bose_entropy_integral, gamma_fn, lambda_fn};

/// Log-grid used to locate where the optimal occupation is non-zero.
const SUPPORT_MIN_DECADE: i32 = -8;
const SUPPORT_MAX_DECADE: i32 = 3;
const SAMPLES_PER_DECADE: i32 = 16;

/// Solved broadband problem for one quantity.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumSolution {
    pub quantity: Quantity,
    pub spec: ChannelSpec,
    pub y0: f64,
    /// `∫ x𝓕 dx`.
    pub f_value: f64,
    /// `∫ w dx`.
    pub w_integral: f64,
    /// Capacity factor `𝒲`.
    pub factor: f64,
    /// Frequency intervals on which `𝓕 > 0`.
    pub support: Vec<(f64, f64)>,
    /// Occupations on the log grid used for support detection.
    pub profile: Vec<OccupationPoint>,
}

impl SpectrumSolution {
    /// Frequency scale `Ω = √(2π𝒫/(ħf))` in rad/s.
    pub fn omega_scale(&self, power: f64) -> Result<f64> {
        omega_scale(self.f_value, power)
    }
}

#[derive(Debug, Clone)]
struct Integrals {
    f: f64,
    w: f64,
    support: Vec<(f64, f64)>,
    profile: Vec<OccupationPoint>,
}

struct Spectrum {
    kind: Quantity,
    profile: NoiseProfile,
    eta: f64,
}

impl Spectrum {
    fn new(quantity: Quantity, spec: &ChannelSpec, y0: f64) -> Result<Self> {
        spec.validate()?;
        if !(y0 >= 0.0 && y0.is_finite()) {
            return Err(CapacityError::domain("spectrum", format!("y0 = {y0} must be finite and >= 0")));
        }
        Ok(Self { kind: quantity, profile: spec.profile(y0), eta: spec.eta })
    }

    fn solve(&self, x: f64) -> Result<(f64, f64, bool)> {
        let s = ModeProblem::new(self.kind, &self.profile, self.eta, x).solve()?;
        Ok((s.n, s.value, s.clamped))
    }

    fn is_clamped(&self, x: f64) -> Result<bool> {
        Ok(self.solve(x)?.2)
    }

    /// Point where the clamp flag flips between `a` (flag `at_a`) and `b`.
    fn transition(&self, mut a: f64, mut b: f64, at_a: bool) -> Result<f64> {
        for _ in 0..200 {
            if b - a <= 1e-13 * b {
                break;
            }
            let mid = 0.5 * (a + b);
            if self.is_clamped(mid)? == at_a {
                a = mid;
            } else {
                b = mid;
            }
        }
        Ok(0.5 * (a + b))
    }

    fn support(&self) -> Result<(Vec<(f64, f64)>, Vec<OccupationPoint>)> {
        let count = (SUPPORT_MAX_DECADE - SUPPORT_MIN_DECADE) * SAMPLES_PER_DECADE;
        let xs: Vec<f64> =
            (0..=count).map(|k| 10f64.powf(SUPPORT_MIN_DECADE as f64 + k as f64 / SAMPLES_PER_DECADE as f64)).collect();
        let mut profile = Vec::with_capacity(xs.len());
        for &x in &xs {
            let (n, _, clamped) = self.solve(x)?;
            profile.push(OccupationPoint { x, n, clamped });
        }
        if !profile.last().expect("non-empty grid").clamped {
            return Err(CapacityError::no_convergence(
                "spectrum support",
                format!("occupation still positive at x = {:e}", xs[xs.len() - 1]),
            ));
        }
        let mut intervals = Vec::new();
        let mut start = if profile[0].clamped { None } else { Some(0.0) };
        for w in profile.windows(2) {
            if w[0].clamped == w[1].clamped {
                continue;
            }
            let edge = self.transition(w[0].x, w[1].x, w[0].clamped)?;
            match start.take() {
                Some(a) => intervals.push((a, edge)),
                None => start = Some(edge),
            }
        }
        Ok((intervals, profile))
    }

    fn integrals(&self) -> Result<Integrals> {
        let (support, profile) = self.support()?;
        let opts = QuadOptions::default();
        let mut f = 0.0;
        let mut w = 0.0;
        for &(a, b) in &support {
            let decades: Vec<f64> =
                (SUPPORT_MIN_DECADE..=SUPPORT_MAX_DECADE).map(|d| 10f64.powi(d)).filter(|&d| d > a && d < b).collect();
            let out = if a == 0.0 {
                // x = b s² removes the logarithmic growth of w at the origin.
                let mut pts = vec![0.0];
                pts.extend(decades.iter().map(|&d| (d / b).sqrt()));
                pts.push(1.0);
                integrate::<2, _>(
                    |s| {
                        let x = b * s * s;
                        let jac = 2.0 * b * s;
                        let (n, v, _) = self.solve(x)?;
                        Ok([jac * x * n, jac * v])
                    },
                    &pts,
                    opts,
                )?
            } else {
                let mut pts = vec![a];
                pts.extend(decades);
                pts.push(b);
                integrate::<2, _>(
                    |x| {
                        let (n, v, _) = self.solve(x)?;
                        Ok([x * n, v])
                    },
                    &pts,
                    opts,
                )?
            };
            f += out.value[0];
            w += out.value[1];
        }
        Ok(Integrals { f, w, support, profile })
    }
}

/// `f(y₀) = ∫ x𝓕(x) dx` for the optimal occupation of `quantity`.
pub fn f_integral(quantity: Quantity, spec: &ChannelSpec, y0: f64) -> Result<f64> {
    Ok(Spectrum::new(quantity, spec, y0)?.integrals()?.f)
}

/// Solves `y² = (6/π²)ρ²f(y)` for the thermal channel; 0 for other models.
pub fn solve_y0(quantity: Quantity, spec: &ChannelSpec) -> Result<f64> {
    spec.validate()?;
    if spec.model != NoiseModel::Thermal || spec.rho_t == 0.0 {
        return Ok(0.0);
    }
    let c = 6.0 / (PI * PI) * spec.rho_t * spec.rho_t;
    let h = |y: f64| -> Result<f64> { Ok(y * y - c * f_integral(quantity, spec, y)?) };
    if f_integral(quantity, spec, 0.0)? == 0.0 {
        return Ok(0.0);
    }
    let mut y_hi = 0.5 * spec.rho_t.max(0.1);
    let mut y_lo = 0.0;
    let mut tries = 0;
    while h(y_hi)? <= 0.0 {
        y_lo = y_hi;
        y_hi *= 2.0;
        tries += 1;
        if tries > 60 {
            return Err(CapacityError::no_convergence("solve_y0", format!("no sign change up to y = {y_hi:e}")));
        }
    }
    brent(h, y_lo, y_hi, 1e-12, "solve_y0")
}

fn factor_from(f: f64, w: f64) -> f64 {
    if f <= 0.0 {
        0.0
    } else {
        (LN_2 / PI) * (3.0 / (2.0 * f)).sqrt() * w
    }
}

/// Capacity factor of `quantity` with `y₀` solved self-consistently.
pub fn capacity_factor(quantity: Quantity, spec: &ChannelSpec) -> Result<SpectrumSolution> {
    let y0 = solve_y0(quantity, spec)?;
    let it = Spectrum::new(quantity, spec, y0)?.integrals()?;
    Ok(SpectrumSolution {
        quantity,
        spec: *spec,
        y0,
        f_value: it.f,
        w_integral: it.w,
        factor: factor_from(it.f, it.w).max(0.0),
        support: it.support,
        profile: it.profile,
    })
}

/// Closed-form `y₀` for the coherent-state bound below the critical temperature.
pub fn low_t_y0(eta: f64, rho_t: f64) -> f64 {
    let den = (eta + (1.0 - eta) * rho_t * rho_t).sqrt();
    if den == 0.0 {
        0.0
    } else {
        eta * rho_t / den
    }
}

/// Closed-form coherent-state capacity factor `𝒦`.
pub fn analytic_k(spec: &ChannelSpec) -> Result<f64> {
    spec.validate()?;
    let eta = spec.eta;
    match spec.model {
        NoiseModel::Loss => Ok(eta.sqrt()),
        NoiseModel::WhiteNoise => white_k(eta, spec.nbar),
        NoiseModel::Thermal => {
            let rho = spec.rho_t;
            if eta == 0.0 || eta == 1.0 || rho == 0.0 {
                Ok(eta.sqrt())
            } else if rho <= 1.0 {
                Ok((eta + (1.0 - eta) * rho * rho).sqrt() - lambda_fn(1.0 - eta)? / lambda_fn(1.0)? * rho)
            } else {
                high_t_factor(rho, eta)
            }
        }
        NoiseModel::Dephasing => {
            Err(CapacityError::ModelMismatch("no closed-form classical factor for the dephasing channel".into()))
        }
    }
}

fn white_k(eta: f64, nbar: f64) -> Result<f64> {
    let leak = (1.0 - eta) * nbar;
    if eta == 0.0 {
        return Ok(0.0);
    }
    if leak == 0.0 {
        return Ok(eta.sqrt());
    }
    // cutoff x = η s
    let s = (1.0 / leak).ln_1p();
    let f = eta * (gamma_fn(s)? - (1.0 - eta) * s * s * nbar / 2.0);
    let w = eta * (bose_entropy_integral(1.0, s)? - s * g_clamped(leak));
    Ok(factor_from(f, w))
}

/// Alternative quantum bound `max(𝒞 − 1, 0)`.
pub fn q_alt_bound(ce_factor: f64) -> f64 {
    (ce_factor - 1.0).max(0.0)
}

/// Noiseless classical rate `R_C` in bits/s.
pub fn rate_rc(p: &PhysicalInputs) -> Result<f64> {
    p.validate()?;
    Ok(noiseless_rate(p.power))
}

/// `Ω = √(2π𝒫/(ħf))` in rad/s.
pub fn omega_scale(f_value: f64, power: f64) -> Result<f64> {
    if !(f_value > 0.0) || !(power > 0.0) {
        return Err(CapacityError::domain(
            "omega_scale",
            format!("need f > 0 and power > 0, got f = {f_value}, power = {power}"),
        ));
    }
    Ok((2.0 * PI * power / (HBAR * f_value)).sqrt())
}

/// All capacity factors of a channel and the matching absolute capacities.
#[derive(Debug, Clone, PartialEq)]
pub struct CapacityReport {
    pub spec: ChannelSpec,
    pub inputs: PhysicalInputs,
    pub ce_factor: f64,
    pub c_lower_factor: f64,
    pub c_upper_factor: f64,
    pub q_lower_factor: f64,
    pub q_alt_factor: f64,
    pub qe_factor: f64,
    pub y0_ce: f64,
    pub y0_c: f64,
    pub y0_q: f64,
    pub rc_bits_per_sec: f64,
}

impl CapacityReport {
    /// `factor·𝒯·R_C` in bits.
    pub fn absolute(&self, factor: f64) -> f64 {
        factor * self.inputs.transmission_time * self.rc_bits_per_sec
    }

    /// `(name, factor)` pairs in a fixed order.
    pub fn factors(&self) -> [(&'static str, f64); 6] {
        [
            ("ce", self.ce_factor),
            ("c_lower", self.c_lower_factor),
            ("c_upper", self.c_upper_factor),
            ("q_lower", self.q_lower_factor),
            ("q_alt", self.q_alt_factor),
            ("qe", self.qe_factor),
        ]
    }
}

fn named(quantity: Quantity, r: Result<SpectrumSolution>) -> Result<SpectrumSolution> {
    r.map_err(|e| CapacityError::Quantity { quantity: quantity.as_str(), source: Box::new(e) })
}

/// Computes every factor with its own `y₀` and converts to absolute rates.
pub fn capacity_report(spec: &ChannelSpec, p: &PhysicalInputs) -> Result<CapacityReport> {
    spec.validate()?;
    let rc = rate_rc(p)?;
    let ce = named(Quantity::Ce, capacity_factor(Quantity::Ce, spec))?;
    let c = named(Quantity::CLower, capacity_factor(Quantity::CLower, spec))?;
    let q = named(Quantity::QLower, capacity_factor(Quantity::QLower, spec))?;
    Ok(CapacityReport {
        spec: *spec,
        inputs: *p,
        ce_factor: ce.factor,
        c_lower_factor: c.factor,
        c_upper_factor: ce.factor.min(1.0),
        q_lower_factor: q.factor,
        q_alt_factor: q_alt_bound(ce.factor),
        qe_factor: ce.factor / 2.0,
        y0_ce: ce.y0,
        y0_c: c.y0,
        y0_q: q.y0,
        rc_bits_per_sec: rc,
    })
}
