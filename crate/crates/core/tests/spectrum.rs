use std::f64::consts::PI;

use bbcap_core::{
    analytic_k, analytic_occupation_k, capacity_factor, capacity_report, d_dephasing, evaluate, kernel,
    kernel_dephasing, low_t_y0, mode_occupation, occupation_profile, solve_y0, stationarity_residual, ChannelSpec,
    ModeParams, ModeSolveRequest, NoiseModel, PhysicalInputs, Quantity,
};

fn req(quantity: Quantity, spec: ChannelSpec, x: f64, y0: f64) -> ModeSolveRequest {
    ModeSolveRequest { quantity, spec, x, y0 }
}

fn nbar_for(spec: &ChannelSpec, x: f64, y0: f64) -> f64 {
    match spec.model {
        NoiseModel::Loss => 0.0,
        NoiseModel::WhiteNoise => spec.nbar,
        NoiseModel::Thermal => 1.0 / (x / y0).exp_m1(),
        NoiseModel::Dephasing => unreachable!(),
    }
}

/// Logarithmic form of the tabulated stationarity equations, `ln LHS − x − ln RHS`.
fn table_equation(quantity: Quantity, n: f64, nbar: f64, eta: f64, x: f64) -> f64 {
    let p = ModeParams::new(n, nbar, eta).unwrap();
    let e = evaluate(quantity, &p).unwrap();
    let (np, d, a) = (e.nprime, e.dfac, e.afac);
    let exchange = |exp_u: f64, exp_v: f64| {
        let mut s = exp_u * (2.0 / (d + n - np - 1.0)).ln_1p();
        if nbar > 0.0 {
            s += exp_v * (2.0 / (d - n + np - 1.0)).ln_1p();
        }
        s
    };
    match quantity {
        Quantity::Ce => {
            (1.0 / n).ln_1p() + eta * (1.0 / np).ln_1p() - x - exchange((a + 1.0 - eta) / 2.0, (a - 1.0 + eta) / 2.0)
        }
        Quantity::CLower => eta * (1.0 / np).ln_1p() - x,
        Quantity::QLower => eta * (1.0 / np).ln_1p() - x - exchange((a + 1.0 - eta) / 2.0, (a - 1.0 + eta) / 2.0),
    }
}

fn dephasing_table_equation(quantity: Quantity, n: f64, eta: f64, x: f64) -> f64 {
    let dt = d_dephasing(n, eta);
    let noise = 2.0 * (1.0 - eta) * (2.0 * n + 1.0) / dt * (2.0 / (dt - 1.0)).ln_1p();
    let lead = (1.0 / n).ln_1p();
    match quantity {
        Quantity::Ce => 2.0 * lead - x - noise,
        Quantity::CLower => lead - x - (1.0 - eta) * (1.0 / ((1.0 - eta) * n)).ln_1p(),
        Quantity::QLower => lead - x - noise,
    }
}

#[test]
fn interior_solutions_satisfy_tabulated_equations() {
    let specs =
        [(ChannelSpec::loss(0.8), 0.0), (ChannelSpec::white(0.7, 0.5), 0.0), (ChannelSpec::thermal(0.75, 0.5), 0.4)];
    for (spec, y0) in specs {
        for quantity in Quantity::ALL {
            for &x in &[0.05, 0.2, 0.6, 1.5, 3.0] {
                let r = req(quantity, spec, x, y0);
                let pt = mode_occupation(&r).unwrap();
                if pt.clamped {
                    continue;
                }
                assert!(stationarity_residual(&r, pt.n).unwrap() < 1e-8);
                let lit = table_equation(quantity, pt.n, nbar_for(&spec, x, y0), spec.eta, x);
                assert!(lit.abs() / x < 1e-8, "{quantity} {spec:?} x={x}: {lit:e}");
            }
        }
    }
}

#[test]
fn dephasing_solutions_satisfy_tabulated_equations() {
    let spec = ChannelSpec::dephasing(0.8);
    for quantity in Quantity::ALL {
        for &x in &[0.05, 0.3, 1.0, 2.0] {
            let r = req(quantity, spec, x, 0.0);
            let pt = mode_occupation(&r).unwrap();
            if pt.clamped {
                continue;
            }
            let lit = dephasing_table_equation(quantity, pt.n, spec.eta, x);
            assert!(lit.abs() / x < 1e-8, "{quantity} x={x}: {lit:e}");
            assert!(kernel_dephasing(quantity, pt.n, spec.eta).unwrap() - x * pt.n / 2f64.ln() >= 0.0);
        }
    }
}

#[test]
fn numeric_k_profiles_match_closed_forms() {
    let xs: Vec<f64> = (0..40).map(|i| 1e-3 * 1.25f64.powi(i)).collect();
    let cases = [
        (ChannelSpec::loss(0.6), 0.0),
        (ChannelSpec::white(0.5, 1.0), 0.0),
        (ChannelSpec::white(0.9, 0.1), 0.0),
        (ChannelSpec::thermal(0.7, 0.5), low_t_y0(0.7, 0.5)),
    ];
    for (spec, y0) in cases {
        let numeric = occupation_profile(Quantity::CLower, &spec, y0, &xs).unwrap();
        for pt in numeric {
            let closed = analytic_occupation_k(&spec, pt.x, y0).unwrap();
            assert!((pt.n - closed.n).abs() < 1e-7 * (1.0 + closed.n), "{spec:?} x={}: {} vs {}", pt.x, pt.n, closed.n);
        }
    }
}

#[test]
fn thermal_occupation_reduces_to_loss_at_zero_temperature() {
    for &x in &[0.01, 0.3, 2.0] {
        let a = analytic_occupation_k(&ChannelSpec::thermal(0.6, 1e-9), x, 1e-9).unwrap();
        let b = analytic_occupation_k(&ChannelSpec::loss(0.6), x, 0.0).unwrap();
        assert!((a.n - b.n).abs() < 1e-9);
    }
}

#[test]
fn profiles_are_non_increasing_and_never_worse_than_silence() {
    let xs: Vec<f64> = (0..60).map(|i| 1e-3 * 1.2f64.powi(i)).collect();
    let specs = [
        (ChannelSpec::loss(0.7), 0.0),
        (ChannelSpec::white(0.6, 2.0), 0.0),
        (ChannelSpec::thermal(0.8, 0.7), 0.5),
        (ChannelSpec::dephasing(0.7), 0.0),
    ];
    for (spec, y0) in specs {
        for quantity in [Quantity::Ce, Quantity::CLower] {
            let prof = occupation_profile(quantity, &spec, y0, &xs).unwrap();
            for w in prof.windows(2) {
                assert!(w[1].n <= w[0].n * (1.0 + 1e-9), "{quantity} {spec:?} at x={}", w[1].x);
            }
        }
        for quantity in Quantity::ALL {
            for pt in occupation_profile(quantity, &spec, y0, &xs).unwrap() {
                assert!(pt.n >= 0.0);
                if !pt.clamped && spec.model != NoiseModel::Dephasing {
                    let p = ModeParams::new(pt.n, nbar_for(&spec, pt.x, y0), spec.eta).unwrap();
                    assert!(kernel(quantity, &p).unwrap() - pt.x * pt.n / 2f64.ln() >= 0.0);
                }
            }
        }
    }
}

#[test]
fn thermal_quantum_profile_has_two_cutoffs() {
    let spec = ChannelSpec::thermal(0.7, 0.41);
    let sol = capacity_factor(Quantity::QLower, &spec).unwrap();
    assert_eq!(sol.support.len(), 1);
    let (lo, hi) = sol.support[0];
    assert!(lo > 0.0 && hi > lo);
    assert!(sol.profile.first().unwrap().clamped);
}

#[test]
fn thermal_energy_integral_closed_form() {
    let (eta, rho) = (0.6, 0.8);
    let spec = ChannelSpec::thermal(eta, rho);
    let y0 = solve_y0(Quantity::CLower, &spec).unwrap();
    let sol = capacity_factor(Quantity::CLower, &spec).unwrap();
    let closed = PI * PI / 6.0 * (eta - (1.0 - eta) * y0 * y0 / eta);
    assert!((sol.f_value - closed).abs() < 1e-8);
    // y² = (6/π²)ρ²f at the solution
    assert!((y0 * y0 - 6.0 / (PI * PI) * rho * rho * sol.f_value).abs() < 1e-10);
}

#[test]
fn y0_approaches_eta_at_critical_ratio() {
    let y = solve_y0(Quantity::CLower, &ChannelSpec::thermal(0.5, 1.0 - 1e-9)).unwrap();
    assert!((y - 0.5).abs() < 1e-3);
}

#[test]
fn high_temperature_numeric_matches_closed_form() {
    for &(eta, rho) in &[(0.5, 2.0), (0.8, 1.5), (0.3, 4.0)] {
        let spec = ChannelSpec::thermal(eta, rho);
        let numeric = capacity_factor(Quantity::CLower, &spec).unwrap().factor;
        let closed = analytic_k(&spec).unwrap();
        assert!((numeric - closed).abs() < 1e-5, "{eta} {rho}: {numeric} vs {closed}");
    }
}

fn channel_points() -> Vec<ChannelSpec> {
    let mut v = Vec::new();
    for eta in [0.3, 0.6, 0.9] {
        v.push(ChannelSpec::loss(eta));
        v.push(ChannelSpec::white(eta, 0.5));
        v.push(ChannelSpec::thermal(eta, 0.5));
        v.push(ChannelSpec::thermal(eta, 1.5));
        v.push(ChannelSpec::dephasing(eta));
    }
    v
}

#[test]
fn factor_orderings() {
    let p = PhysicalInputs::new(1e-6, 0.0, 1.0).unwrap();
    for spec in channel_points() {
        let r = capacity_report(&spec, &p).unwrap();
        assert!(r.c_lower_factor <= r.ce_factor + 1e-9, "{spec:?}");
        assert!(r.c_lower_factor <= 1.0 + 1e-9, "{spec:?}");
        assert!(r.q_lower_factor.max(r.q_alt_factor) <= r.ce_factor / 2.0 + 1e-9, "{spec:?}");
        assert!(r.ce_factor <= 2.0 + 1e-9);
    }
}

#[test]
fn factors_monotone_in_efficiency_and_noise() {
    let etas = [0.2, 0.4, 0.6, 0.8, 1.0];
    for make in [
        ChannelSpec::loss as fn(f64) -> ChannelSpec,
        |e| ChannelSpec::white(e, 1.0),
        |e| ChannelSpec::thermal(e, 0.6),
        ChannelSpec::dephasing,
    ] {
        for quantity in Quantity::ALL {
            let vals: Vec<f64> = etas.iter().map(|&e| capacity_factor(quantity, &make(e)).unwrap().factor).collect();
            assert!(vals.windows(2).all(|w| w[1] >= w[0] - 1e-9), "{quantity}: {vals:?}");
        }
    }
    for quantity in Quantity::ALL {
        let white: Vec<f64> = [0.0, 0.3, 1.0, 3.0]
            .iter()
            .map(|&n| capacity_factor(quantity, &ChannelSpec::white(0.8, n)).unwrap().factor)
            .collect();
        assert!(white.windows(2).all(|w| w[1] <= w[0] + 1e-9), "{quantity}: {white:?}");
        let thermal: Vec<f64> = [0.0, 0.5, 1.0, 2.0]
            .iter()
            .map(|&r| capacity_factor(quantity, &ChannelSpec::thermal(0.8, r)).unwrap().factor)
            .collect();
        assert!(thermal.windows(2).all(|w| w[1] <= w[0] + 1e-9), "{quantity}: {thermal:?}");
    }
}

#[test]
fn quantum_threshold_fine_grid() {
    for make in [ChannelSpec::loss as fn(f64) -> ChannelSpec, ChannelSpec::dephasing] {
        for eta in [0.1, 0.2, 0.45, 0.5] {
            assert!(capacity_factor(Quantity::QLower, &make(eta)).unwrap().factor < 1e-12);
        }
        for eta in [0.55, 0.7, 0.9] {
            assert!(capacity_factor(Quantity::QLower, &make(eta)).unwrap().factor > 0.0);
        }
    }
}

#[test]
fn report_examples() {
    let p = PhysicalInputs::new(2e-5, 0.0, 3.0).unwrap();
    let r = capacity_report(&ChannelSpec::loss(1.0), &p).unwrap();
    for (name, f) in r.factors() {
        let want = if name == "ce" { 2.0 } else { 1.0 };
        assert!((f - want).abs() < 1e-6, "{name} = {f}");
    }
    assert!((r.absolute(r.c_lower_factor) - 3.0 * r.rc_bits_per_sec).abs() < 1e-6 * r.rc_bits_per_sec);

    let r = capacity_report(&ChannelSpec::loss(0.4), &p).unwrap();
    assert_eq!(r.q_lower_factor, 0.0);
    assert_eq!(r.q_alt_factor, 0.0);

    let w = capacity_report(&ChannelSpec::white(0.7, 1e-6), &p).unwrap();
    let l = capacity_report(&ChannelSpec::loss(0.7), &p).unwrap();
    for ((n, a), (_, b)) in w.factors().into_iter().zip(l.factors()) {
        assert!((a - b).abs() < 1e-3, "{n}: {a} vs {b}");
    }
}

#[test]
fn alternative_quantum_bound_tracks_coherent_information_bound() {
    let r = capacity_report(&ChannelSpec::loss(0.75), &PhysicalInputs::new(1e-6, 0.0, 1.0).unwrap()).unwrap();
    assert!(r.q_alt_factor > 0.0);
    assert!(r.q_alt_factor < r.q_lower_factor + 0.05, "{} vs {}", r.q_alt_factor, r.q_lower_factor);
}
