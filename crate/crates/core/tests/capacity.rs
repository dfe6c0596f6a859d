use approx::assert_relative_eq;
use bqec_core::capacity::*;
use bqec_core::numeric::bisect;
use proptest::prelude::*;

const LOG2_E: f64 = std::f64::consts::LOG2_E;

fn params(eta: f64, n_th: f64, n_bar: Option<f64>) -> ChannelParams {
    ChannelParams::new(eta, n_th, n_bar).unwrap()
}

/// Thermal entropy written with natural logs, independent of the library.
fn g_nat(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        ((x + 1.0) * (x + 1.0).ln() - x * x.ln()) / std::f64::consts::LN_2
    }
}

/// Coherent information of a thermal input sent through the thermal-loss
/// channel, computed from the symplectic eigenvalues of the purified
/// two-mode output state.
fn coherent_info_oracle(eta: f64, n_th: f64, n_bar: f64) -> f64 {
    let a = n_bar + 0.5;
    let c = (n_bar * (n_bar + 1.0)).sqrt() * eta.sqrt();
    let b = eta * (n_bar + 0.5) + (1.0 - eta) * (n_th + 0.5);
    let root = ((a + b).powi(2) - 4.0 * c * c).sqrt();
    let nu_plus = (root + (b - a)) / 2.0;
    let nu_minus = (root - (b - a)) / 2.0;
    g_nat(b - 0.5) - g_nat(nu_plus - 0.5) - g_nat(nu_minus - 0.5)
}

// ---------------------------------------------------------------- g(x)

#[test]
fn g_entropy_values() {
    assert_eq!(g_entropy(0.0).unwrap(), 0.0);
    assert_relative_eq!(g_entropy(1.0).unwrap(), 2.0, epsilon = 1e-15);
    assert!(g_entropy(-0.1).is_err());
    for x in [100.0, 250.0, 1e3, 1e5] {
        let g = g_entropy(x).unwrap();
        assert!((g - (std::f64::consts::E * x).log2()).abs() <= 1.0 / x);
    }
    let mut last = 0.0;
    for k in 1..2000 {
        let g = g_entropy(k as f64 * 0.01).unwrap();
        assert!(g > last);
        last = g;
    }
}

// ---------------------------------------------------------------- pure loss

#[test]
fn pure_loss_examples() {
    assert_eq!(pure_loss_capacity(&params(0.5, 0.0, None)).unwrap(), 0.0);
    for n in [0.1, 1.0, 10.0, 1e4] {
        assert_eq!(pure_loss_capacity(&params(0.5, 0.0, Some(n))).unwrap(), 0.0);
    }
    assert_relative_eq!(
        pure_loss_capacity(&params(2.0 / 3.0, 0.0, None)).unwrap(),
        1.0,
        epsilon = 1e-15
    );
    let q = pure_loss_capacity(&params(0.9, 0.0, Some(3.0))).unwrap();
    assert_relative_eq!(q, g_nat(2.7) - g_nat(0.3), epsilon = 1e-13);
    assert!(pure_loss_capacity(&params(0.9, 0.1, None)).is_err());
}

#[test]
fn pure_loss_is_zero_when_anti_degradable() {
    for k in 0..=50 {
        let eta = 0.5 * k as f64 / 50.0;
        for n in [None, Some(0.5), Some(5.0), Some(500.0)] {
            assert_eq!(pure_loss_capacity(&params(eta, 0.0, n)).unwrap(), 0.0);
        }
    }
}

#[test]
fn infinite_energy_means_unconstrained() {
    let p = params(0.8, 0.5, Some(f64::INFINITY));
    assert_eq!(p.n_bar, None);
    // The energy-constrained bounds approach the closed asymptotic forms.
    for (eta, n_th) in [(0.8, 0.0), (0.9, 0.5), (0.95, 2.0)] {
        let inf = params(eta, n_th, None);
        let big = params(eta, n_th, Some(1e7));
        assert!((q_dp(&inf) - q_dp(&big)).abs() < 1e-5);
        assert!((q_idp(&inf) - q_idp(&big)).abs() < 1e-5);
    }
}

#[test]
fn rejects_invalid_parameters() {
    assert!(ChannelParams::new(-0.1, 0.0, None).is_err());
    assert!(ChannelParams::new(1.1, 0.0, None).is_err());
    assert!(ChannelParams::new(0.5, -1.0, None).is_err());
    assert!(ChannelParams::new(0.5, 0.0, Some(0.0)).is_err());
    assert!(ChannelParams::new(0.5, f64::NAN, None).is_err());
}

// ---------------------------------------------------------------- upper bounds

#[test]
fn unconstrained_upper_bounds_closed_forms() {
    for (eta, n_th) in [(0.7, 0.2), (0.9, 1.0), (0.99, 3.0)] {
        let p = params(eta, n_th, None);
        let dp = (eta / ((1.0 - eta) * (n_th + 1.0))).log2().max(0.0);
        let idp = ((eta - (1.0 - eta) * n_th) / ((1.0 - eta) * (n_th + 1.0)))
            .log2()
            .max(0.0);
        assert_relative_eq!(q_dp(&p), dp, epsilon = 1e-12);
        assert_relative_eq!(q_idp(&p), idp, epsilon = 1e-12);
    }
}

#[test]
fn improved_bound_is_tighter_when_unconstrained() {
    for n_th in [0.01, 0.5, 1.0, 4.0] {
        for k in 0..200 {
            let eta = 0.5 + 0.4999 * k as f64 / 200.0;
            let p = params(eta, n_th, None);
            if q_dp(&p) > 0.0 {
                assert!(q_idp(&p) < q_dp(&p), "eta {eta} n_th {n_th}");
            }
        }
    }
}

#[test]
fn improved_bound_vanishes_at_entanglement_breaking_point() {
    for n_th in [0.5, 1.0, 3.0] {
        let eta = n_th / (n_th + 1.0);
        assert_eq!(q_idp(&params(eta, n_th, None)), 0.0);
        assert_eq!(q_idp(&params(eta, n_th, Some(2.0))), 0.0);
        assert_eq!(q_idp(&params(eta * 0.9, n_th, None)), 0.0);
    }
}

#[test]
fn odp_switch_point_at_one_photon() {
    let eta = odp_switch_point(1.0, Some(1.0), 0.8, 0.95).unwrap();
    assert!((eta - 0.8775).abs() <= 0.0005, "eta* = {eta}");
    // The maximum is the plain bound below the switch and the improved one above.
    let below = params(eta - 0.01, 1.0, Some(1.0));
    let above = params(eta + 0.01, 1.0, Some(1.0));
    assert!(q_idp(&below) < q_dp(&below));
    assert_eq!(q_odp(&below), q_dp(&below));
    assert!(q_dp(&above) < q_idp(&above));
    assert_eq!(q_odp(&above), q_idp(&above));
}

proptest! {
    #[test]
    fn odp_is_exact_maximum(eta in 0.0f64..=1.0, n_th in 0.0f64..5.0, n in prop::option::of(0.01f64..50.0)) {
        let p = params(eta, n_th, n);
        prop_assert_eq!(q_odp(&p), q_dp(&p).max(q_idp(&p)));
    }

    #[test]
    fn correlated_never_below_thermal(eta in 0.5f64..0.999, n_th in 0.0f64..3.0, n in 0.05f64..10.0) {
        let p = params(eta, n_th, Some(n));
        let (rate, x) = lower_bound_correlated(&p);
        prop_assert!(rate >= lower_bound_thermal_input(&p) - 1e-12);
        prop_assert!(x > 0.0 && x <= 1.0);
    }
}

// ---------------------------------------------------------------- lower bounds

#[test]
fn thermal_input_bound_matches_symplectic_oracle() {
    for eta in [0.3, 0.6, 0.81, 0.95, 0.999] {
        for n_th in [0.0, 0.2, 1.0, 3.0] {
            for n in [0.05, 1.0, 2.458, 20.0] {
                let got = lower_bound_thermal_input(&params(eta, n_th, Some(n)));
                assert_relative_eq!(got, coherent_info_oracle(eta, n_th, n), epsilon = 1e-9);
            }
        }
    }
}

#[test]
fn thermal_input_bound_limits() {
    // Identity channel preserves the input entropy.
    for n in [0.3, 1.0, 7.0] {
        assert_relative_eq!(
            lower_bound_thermal_input(&params(1.0, 0.0, Some(n))),
            g_nat(n),
            epsilon = 1e-9
        );
    }
    // Pure loss with unbounded energy approaches log2(η/(1−η)).
    let eta = 0.8;
    let big = lower_bound_thermal_input(&params(eta, 0.0, Some(1e6)));
    assert!((big - (eta / (1.0 - eta)).log2()).abs() < 1e-5);
    // The unconstrained form is reported directly.
    let inf = lower_bound_thermal_input(&params(0.9, 1.0, None));
    assert_relative_eq!(inf, 9f64.log2() - 2.0, epsilon = 1e-12);
}

/// Slope of x ↦ x·I_c(n̄/x) at x = 1, i.e. I_c(n̄) − n̄·I_c'(n̄).
fn slope_at_one(gamma: f64, n_th: f64, n_bar: f64) -> f64 {
    let h = 1e-5;
    let i = |n: f64| coherent_info_oracle(1.0 - gamma, n_th, n);
    let derivative = (i(n_bar + h) - i(n_bar - h)) / (2.0 * h);
    i(n_bar) - n_bar * derivative
}

#[test]
fn correlated_bound_optimum_at_gamma_019() {
    let p = params(0.81, 1.0, Some(1.0));
    let (rate, x) = lower_bound_correlated(&p);
    assert!((x - 0.407).abs() <= 0.005, "x* = {x}");
    // x* is where the ray from the origin touches n ↦ I_c(n): n* = n̄/x*.
    let n_star = 1.0 / x;
    assert!((n_star - 2.458).abs() < 0.02, "n* = {n_star}");
    assert!(slope_at_one(0.19, 1.0, n_star).abs() < 1e-4);
    assert_relative_eq!(
        rate,
        x * coherent_info_oracle(0.81, 1.0, n_star),
        epsilon = 1e-9
    );
    assert!(rate > lower_bound_thermal_input(&p));
}

#[test]
fn correlated_bound_crossover() {
    // Oracle: the first-order condition at x = 1 changes sign.
    let gamma_oracle = bisect(|g| slope_at_one(g, 1.0, 1.0), 0.1, 0.3, 1e-10).unwrap();
    assert!(
        (gamma_oracle - 0.1775).abs() <= 0.002,
        "oracle {gamma_oracle}"
    );
    // Library: the smallest γ on a 0.001 grid where correlated inputs win.
    let crossover = (100..=300)
        .map(|k| k as f64 * 0.001)
        .find(|&g| {
            let p = params(1.0 - g, 1.0, Some(1.0));
            lower_bound_correlated(&p).0 > lower_bound_thermal_input(&p) + 1e-9
        })
        .unwrap();
    assert!((crossover - 0.1775).abs() <= 0.002, "crossover {crossover}");
    assert!((crossover - gamma_oracle).abs() <= 0.0015);
    // Below the crossover the optimum stays at x = 1.
    let p = params(0.85, 1.0, Some(1.0));
    assert_eq!(lower_bound_correlated(&p).1, 1.0);
}

#[test]
fn lower_bounds_never_exceed_upper_bounds() {
    for ei in 0..40 {
        let eta = 0.5 + 0.499 * ei as f64 / 39.0;
        for n_th in [0.0, 0.1, 0.5, 1.0, 2.0] {
            for n in [0.1, 0.5, 1.0, 3.0, 10.0] {
                let p = params(eta, n_th, Some(n));
                let (lower, _) = lower_bound_correlated(&p);
                let upper = q_odp(&p);
                if lower > 0.0 && upper > 0.0 {
                    assert!(
                        lower <= upper + 1e-9,
                        "eta {eta} n_th {n_th} n {n}: {lower} > {upper}"
                    );
                }
                assert!(lower_bound_thermal_input(&p) <= lower + 1e-12);
            }
        }
    }
}

// ---------------------------------------------------------------- covariance

#[test]
fn single_mode_covariance_is_thermal() {
    let v = correlated_thermal_covariance(&CorrelatedThermalSpec {
        block_sizes: vec![1],
        block_photons: vec![2.0],
    })
    .unwrap();
    assert_eq!(v.shape(), (2, 2));
    assert_relative_eq!(v[(0, 0)], 2.5, epsilon = 1e-15);
    assert_relative_eq!(v[(1, 1)], 2.5, epsilon = 1e-15);
    assert_relative_eq!(v[(0, 1)], 0.0, epsilon = 1e-15);
}

#[test]
fn one_hot_covariance_block_form() {
    for modes in [2usize, 3, 5, 8] {
        let n_bar = 0.7;
        let spec = CorrelatedThermalSpec::one_hot(modes, n_bar);
        assert_eq!(spec.total_modes(), modes);
        assert_relative_eq!(spec.mean_photons(), n_bar, epsilon = 1e-14);
        let v = correlated_thermal_covariance(&spec).unwrap();
        for j in 0..modes {
            for k in 0..modes {
                let expected = if j == k { n_bar + 0.5 } else { n_bar };
                assert_relative_eq!(v[(2 * j, 2 * k)], expected, epsilon = 1e-12);
                assert_relative_eq!(v[(2 * j + 1, 2 * k + 1)], expected, epsilon = 1e-12);
                assert_relative_eq!(v[(2 * j, 2 * k + 1)], 0.0, epsilon = 1e-12);
                assert_relative_eq!(v[(2 * j + 1, 2 * k)], 0.0, epsilon = 1e-12);
            }
        }
        assert!(satisfies_uncertainty(&v, 1e-9));
    }
}

#[test]
fn general_blocks_are_physical_with_thermal_marginals() {
    let spec = CorrelatedThermalSpec {
        block_sizes: vec![2, 1, 3],
        block_photons: vec![1.5, 0.0, 0.4],
    };
    let v = correlated_thermal_covariance(&spec).unwrap();
    let n_bar = spec.mean_photons();
    assert_relative_eq!(v.clone(), v.transpose(), epsilon = 1e-12);
    assert!(satisfies_uncertainty(&v, 1e-9));
    for j in 0..6 {
        assert_relative_eq!(v[(2 * j, 2 * j)], n_bar + 0.5, epsilon = 1e-12);
        assert_relative_eq!(v[(2 * j + 1, 2 * j + 1)], n_bar + 0.5, epsilon = 1e-12);
        assert_relative_eq!(v[(2 * j, 2 * j + 1)], 0.0, epsilon = 1e-12);
    }
}

#[test]
fn uncertainty_test_rejects_unphysical_states() {
    let mut v = nalgebra::DMatrix::identity(2, 2) * 0.4;
    assert!(!satisfies_uncertainty(&v, 1e-9));
    v[(0, 0)] = 0.25;
    v[(1, 1)] = 1.0;
    assert!(satisfies_uncertainty(&v, 1e-9));
    assert!(correlated_thermal_covariance(&CorrelatedThermalSpec {
        block_sizes: vec![1, 2],
        block_photons: vec![1.0]
    })
    .is_err());
    assert!(correlated_thermal_covariance(&CorrelatedThermalSpec {
        block_sizes: vec![1],
        block_photons: vec![-1.0]
    })
    .is_err());
}

// ---------------------------------------------------------------- GKP rates

#[test]
fn gkp_rate_examples() {
    assert_relative_eq!(
        gkp_achievable_rate(&params(0.9, 0.0, None)),
        3f64.log2(),
        epsilon = 1e-15
    );
    // (1−η)(n̄_th+1) > 1/(2e) gives zero; at equality the floor is exactly 2.
    let edge = 1.0 / (2.0 * std::f64::consts::E);
    assert_eq!(
        gkp_achievable_rate(&params(1.0 - edge * 1.001, 0.0, None)),
        0.0
    );
    assert_eq!(
        gkp_achievable_rate(&params(1.0 - edge * 0.999, 0.0, None)),
        1.0
    );
    assert_eq!(
        gkp_achievable_rate(&params(1.0 - edge * 1.001 / 2.0, 1.0, None)),
        0.0
    );
    assert_eq!(gkp_achievable_rate(&params(0.5, 1.0, None)), 0.0);
}

#[test]
fn gkp_rate_gap_to_improved_bound() {
    for n_th in [0.0, 0.1, 0.5, 1.0, 3.0] {
        for k in 0..2000 {
            let eta = 0.8 + 0.1999 * k as f64 / 2000.0;
            let p = params(eta, n_th, None);
            let rate = gkp_achievable_rate(&p);
            if rate > 0.0 {
                let gap = q_idp(&p) - rate;
                assert!(gap <= LOG2_E + 1.0, "eta {eta} n_th {n_th}: gap {gap}");
                assert!(rate <= q_dp(&p));
            }
        }
    }
}

#[test]
fn capacity_row_collects_all_bounds() {
    let p = params(0.9, 0.5, Some(2.0));
    let row = capacity_row(&p);
    assert_eq!(row.q_dp, q_dp(&p));
    assert_eq!(row.q_idp, q_idp(&p));
    assert_eq!(row.q_odp, q_odp(&p));
    assert_eq!(row.lb_thermal, lower_bound_thermal_input(&p));
    assert_eq!((row.lb_correlated, row.x_star), lower_bound_correlated(&p));
    assert_relative_eq!(row.gamma, 0.1, epsilon = 1e-15);
    let zero = capacity_row(&params(0.5, 0.0, None));
    assert_eq!(
        (zero.q_dp, zero.q_idp, zero.q_odp, zero.gkp_rate),
        (0.0, 0.0, 0.0, 0.0)
    );
}
