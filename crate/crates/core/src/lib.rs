//! Capacities of broadband bosonic channels under an input-power constraint.
//!
//! Single-mode entropy kernels ([`kernels`]) are maximized mode by mode
//! ([`lagrange`]) and integrated over frequency ([`broadband`]). The
//! [`oracle`] module evaluates the same entropies from the full Gaussian
//! state and serves as an independent check.

pub mod broadband;
pub mod error;
pub mod kernels;
pub mod lagrange;
pub mod noise;
pub mod oracle;
pub mod special;
pub mod table;

mod quad;
mod roots;

pub use broadband::{
    analytic_k, capacity_factor, capacity_report, f_integral, low_t_y0, omega_scale, q_alt_bound, rate_rc, solve_y0,
    CapacityReport, SpectrumSolution,
};
pub use error::{CapacityError, Result};
pub use kernels::{
    a_factor, d_dephasing, d_factor, evaluate, g_entropy, kernel, kernel_ce, kernel_dephasing, kernel_k, kernel_q,
    output_photons, KernelEval, ModeParams, Quantity,
};
pub use lagrange::{
    analytic_occupation_k, mode_occupation, occupation_profile, stationarity_residual, thermal_high_t_params,
    HighTemperatureParams, ModeSolveRequest, OccupationPoint,
};
pub use noise::{
    critical_temperature, nbar_at, noiseless_rate, thermal_rate, thermal_ratio, ChannelSpec, NoiseModel, PhysicalInputs,
};
pub use oracle::{
    coherent_information, exchange_entropy, input_entropy, make_state, mutual_information, output_entropy,
    verify_no_squeezing, ExchangeEigenvalues, GaussianModeState, SpectralPair, SqueezingScan,
};
pub use special::{gamma_fn, lambda_fn};
