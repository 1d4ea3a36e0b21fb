use bbcap_core::{g_entropy, kernel, kernel_ce, kernel_dephasing, kernel_k, kernel_q, ModeParams, Quantity};
use proptest::prelude::*;

fn params() -> impl Strategy<Value = ModeParams> {
    (0.0..20.0f64, 0.0..10.0f64, 0.0..=1.0f64).prop_map(|(n, nbar, eta)| ModeParams::new(n, nbar, eta).unwrap())
}

proptest! {
    #[test]
    fn ce_is_q_plus_input_entropy(p in params()) {
        let ce = kernel_ce(&p).unwrap();
        let q = kernel_q(&p).unwrap();
        prop_assert!((ce - q - g_entropy(p.n).unwrap()).abs() < 1e-12 * (1.0 + ce.abs()));
    }

    #[test]
    fn entanglement_assistance_dominates(p in params()) {
        let ce = kernel_ce(&p).unwrap();
        let k = kernel_k(&p).unwrap();
        let q = kernel_q(&p).unwrap();
        prop_assert!(k >= -1e-12);
        prop_assert!(ce >= k - 1e-12);
        prop_assert!(ce >= q - 1e-12);
    }

    #[test]
    fn kernels_vanish_without_signal_or_coupling(nbar in 0.0..10.0f64, n in 0.0..10.0f64, eta in 0.0..=1.0f64) {
        for kind in Quantity::ALL {
            prop_assert!(kernel(kind, &ModeParams::new(0.0, nbar, eta).unwrap()).unwrap().abs() < 1e-12);
        }
        let cut = ModeParams::new(n, nbar, 0.0).unwrap();
        prop_assert!(kernel_ce(&cut).unwrap().abs() < 1e-11);
        prop_assert!(kernel_k(&cut).unwrap().abs() < 1e-11);
        // a severed channel leaves coherent information −S(ρ)
        prop_assert!((kernel_q(&cut).unwrap() + g_entropy(n).unwrap()).abs() < 1e-11);
    }

    #[test]
    fn half_transmissive_loss_has_no_coherent_information(n in 0.0..50.0f64) {
        prop_assert!(kernel_q(&ModeParams::new(n, 0.0, 0.5).unwrap()).unwrap().abs() < 1e-12);
    }

    #[test]
    fn identity_channel_values(n in 0.0..50.0f64, nbar in 0.0..10.0f64) {
        let p = ModeParams::new(n, nbar, 1.0).unwrap();
        let g = g_entropy(n).unwrap();
        prop_assert!((kernel_ce(&p).unwrap() - 2.0 * g).abs() < 1e-12);
        prop_assert!((kernel_k(&p).unwrap() - g).abs() < 1e-12);
        prop_assert!((kernel_q(&p).unwrap() - g).abs() < 1e-12);
    }

    #[test]
    fn dephasing_is_tracking_reservoir(n in 0.0..20.0f64, eta in 0.0..=1.0f64) {
        let p = ModeParams::new(n, n, eta).unwrap();
        for kind in Quantity::ALL {
            let d = kernel_dephasing(kind, n, eta).unwrap();
            prop_assert!((d - kernel(kind, &p).unwrap()).abs() < 1e-12 * (1.0 + d.abs()));
        }
    }

    #[test]
    fn g_is_increasing(a in 0.0..1e4f64, b in 0.0..1e4f64) {
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        prop_assert!(g_entropy(lo).unwrap() <= g_entropy(hi).unwrap());
    }
}
