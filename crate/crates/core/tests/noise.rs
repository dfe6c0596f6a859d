use approx::assert_relative_eq;
use bqec_core::channel::{
    compose_gaussian_channels, named_channel, ChannelKind, GaussianChannelSpec,
};
use bqec_core::noise::{
    comb_window, conditional_pauli_prob, loss_to_shift_post_amp, nearest_multiple, normal, p_err,
    p_err_asymptotic, remainder, remainder_unchecked, sample_gaussian,
    thermal_loss_to_shift_pre_amp, GaussianSampler, NoiseParams, ShiftVector,
};
use bqec_core::rng::{seeded_rng, trial_rng};
use bqec_core::SQRT_PI;
use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;

// ---------------------------------------------------------------- remainder

#[test]
fn remainder_examples() {
    assert_eq!(remainder(0.0, SQRT_PI).unwrap(), 0.0);
    assert_eq!(remainder(SQRT_PI, SQRT_PI).unwrap(), 0.0);
    assert_relative_eq!(
        remainder(0.51 * SQRT_PI, SQRT_PI).unwrap(),
        -0.49 * SQRT_PI,
        epsilon = 1e-12
    );
}

#[test]
fn remainder_tie_goes_to_negative_half() {
    assert_eq!(remainder(0.5, 1.0).unwrap(), -0.5);
    assert_eq!(remainder(-0.5, 1.0).unwrap(), -0.5);
}

#[test]
fn remainder_rejects_bad_input() {
    assert!(remainder(f64::NAN, 1.0).is_err());
    assert!(remainder(f64::INFINITY, 1.0).is_err());
    assert!(remainder(1.0, 0.0).is_err());
    assert!(remainder(1.0, -1.0).is_err());
}

proptest! {
    #[test]
    fn remainder_is_bounded_and_congruent(z in -1e4f64..1e4, s in 0.01f64..10.0) {
        let r = remainder(z, s).unwrap();
        prop_assert!(r.abs() <= 0.5 * s + 1e-12);
        let k = (z - r) / s;
        prop_assert!((k - k.round()).abs() < 1e-6);
        prop_assert_eq!(k.round() as i64, nearest_multiple(z, s));
    }

    #[test]
    fn remainder_is_idempotent(z in -1e4f64..1e4, s in 0.01f64..10.0) {
        let r = remainder(z, s).unwrap();
        let rr = remainder(r, s).unwrap();
        // Only the tie point r = −s/2 could move, and it maps to itself.
        prop_assert!((rr - r).abs() <= 1e-12 * s);
    }

    #[test]
    fn remainder_is_periodic(z in -10.0f64..10.0, s in 0.1f64..5.0, k in -1_000_000i64..=1_000_000) {
        let shifted = z + k as f64 * s;
        let a = remainder(shifted, s).unwrap();
        let b = remainder(z, s).unwrap();
        // Compare modulo s so a tie landing on the other side is not a failure.
        let diff = remainder_unchecked(a - b, s).abs();
        prop_assert!(diff <= 1e-9 * shifted.abs().max(1.0), "diff {diff}");
    }

    #[test]
    fn conditional_prob_is_even(sigma in 0.05f64..2.0, z in 0.0f64..0.886) {
        let a = conditional_pauli_prob(sigma, z).unwrap();
        let b = conditional_pauli_prob(sigma, -z).unwrap();
        prop_assert!((a - b).abs() <= 1e-15 * a.max(1e-300), "{a} vs {b}");
    }
}

// ---------------------------------------------------------------- p_err

#[test]
fn p_err_limits() {
    assert_eq!(p_err(0.0).unwrap(), 0.0);
    assert_relative_eq!(p_err(50.0).unwrap(), 0.5, epsilon = 1e-12);
    assert_eq!(p_err(f64::INFINITY).unwrap(), 0.5);
    assert!(p_err(-0.1).is_err());
    assert!(p_err(f64::NAN).is_err());
}

#[test]
fn p_err_matches_monte_carlo() {
    let sigma = 0.1;
    let samples = 10_000_000u64;
    let mut rng = seeded_rng(20_240_601);
    let mut odd = 0u64;
    for _ in 0..samples {
        let x = normal(&mut rng, sigma);
        if nearest_multiple(x, SQRT_PI).rem_euclid(2) == 1 {
            odd += 1;
        }
    }
    let p = p_err(sigma).unwrap();
    let est = odd as f64 / samples as f64;
    // At σ = 0.1 the rate is ~1e-17, so the count must be zero.
    let se = (p * (1.0 - p) / samples as f64)
        .sqrt()
        .max(1.0 / samples as f64);
    assert!((est - p).abs() <= 3.0 * se, "MC {est} vs exact {p}");
}

#[test]
fn p_err_matches_monte_carlo_at_visible_rate() {
    let sigma = 0.4;
    let samples = 2_000_000u64;
    let mut rng = seeded_rng(7);
    let odd = (0..samples)
        .filter(|_| nearest_multiple(normal(&mut rng, sigma), SQRT_PI).rem_euclid(2) == 1)
        .count();
    let p = p_err(sigma).unwrap();
    let est = odd as f64 / samples as f64;
    let se = (p * (1.0 - p) / samples as f64).sqrt();
    assert!(
        (est - p).abs() <= 3.0 * se,
        "MC {est} vs exact {p} (se {se})"
    );
}

#[test]
fn p_err_asymptote_within_five_percent_for_small_sigma() {
    for i in 1..=15 {
        let sigma = 0.01 * i as f64;
        let p = p_err(sigma).unwrap();
        if p == 0.0 {
            // exp(−π/(8σ²)) underflows below σ ≈ 0.023.
            assert!(p_err_asymptotic(sigma) < 1e-300);
            continue;
        }
        let rel = (p - p_err_asymptotic(sigma)).abs() / p;
        assert!(rel < 0.05, "sigma {sigma}: rel {rel}");
    }
}

#[test]
fn p_err_is_monotone() {
    let mut prev = 0.0;
    for i in 1..=400 {
        let p = p_err(0.005 * i as f64).unwrap();
        assert!(p >= prev && p <= 0.5);
        prev = p;
    }
}

#[test]
fn comb_window_covers_eight_sigma() {
    for &s in &[0.01, 0.1, 0.5, 1.0, 3.0] {
        assert!(comb_window(s) as f64 * SQRT_PI >= 8.0 * s);
    }
}

// ---------------------------------------------------------------- p[σ](z)

fn wide_window_oracle(sigma: f64, z: f64) -> f64 {
    let mut num = 0.0;
    let mut den = 0.0;
    for n in -50i64..=50 {
        let e = (-(z - n as f64 * SQRT_PI).powi(2) / (2.0 * sigma * sigma)).exp();
        den += e;
        if n.rem_euclid(2) == 1 {
            num += e;
        }
    }
    num / den
}

#[test]
fn conditional_prob_half_at_decision_boundary() {
    for &s in &[0.05, 0.2, 0.5, 1.0, 3.0] {
        assert_relative_eq!(
            conditional_pauli_prob(s, 0.5 * SQRT_PI).unwrap(),
            0.5,
            epsilon = 1e-12
        );
        assert_relative_eq!(
            conditional_pauli_prob(s, -0.5 * SQRT_PI).unwrap(),
            0.5,
            epsilon = 1e-12
        );
    }
}

#[test]
fn conditional_prob_matches_wide_window() {
    let got = conditional_pauli_prob(0.2, 0.0).unwrap();
    assert_relative_eq!(got, wide_window_oracle(0.2, 0.0), max_relative = 1e-10);
    for &s in &[0.3, 0.5, 1.0, 2.0] {
        for i in 0..=10 {
            let z = 0.05 * i as f64 * SQRT_PI;
            assert_relative_eq!(
                conditional_pauli_prob(s, z).unwrap(),
                wide_window_oracle(s, z),
                max_relative = 1e-10
            );
        }
    }
}

#[test]
fn conditional_prob_strictly_increasing_in_z() {
    for &s in &[0.2, 0.5, 1.0] {
        let mut prev = -1.0;
        for i in 0..=100 {
            let z = 0.5 * SQRT_PI * i as f64 / 100.0;
            let p = conditional_pauli_prob(s, z).unwrap();
            assert!(p > prev, "sigma {s}, z {z}");
            assert!(p > 0.0 && p < 1.0);
            prev = p;
        }
    }
}

#[test]
fn conditional_prob_nondecreasing_in_sigma() {
    for i in 0..=8 {
        let z = 0.1 * i as f64 * 0.5 * SQRT_PI / 0.8;
        let mut prev = 0.0;
        for j in 1..=100 {
            let p = conditional_pauli_prob(0.02 * j as f64, z).unwrap();
            assert!(
                p >= prev * (1.0 - 1e-12),
                "z {z}, sigma {}",
                0.02 * j as f64
            );
            prev = p;
        }
    }
}

#[test]
fn conditional_prob_stays_finite_when_tiny() {
    let p = conditional_pauli_prob(0.05, 0.0).unwrap();
    assert!(p >= 0.0 && p < 1e-100);
    assert!(bqec_core::noise::ln_conditional_pauli_prob(0.01, 0.0)
        .unwrap()
        .is_finite());
}

#[test]
fn conditional_prob_rejects_zero_sigma() {
    assert!(conditional_pauli_prob(0.0, 0.1).is_err());
}

// ---------------------------------------------------------------- conversions

#[test]
fn loss_conversions() {
    assert_eq!(loss_to_shift_post_amp(1.0).unwrap(), 0.0);
    assert_relative_eq!(loss_to_shift_post_amp(0.5).unwrap(), 1.0, epsilon = 1e-15);
    let v = loss_to_shift_post_amp(0.99).unwrap();
    assert_relative_eq!(v, 0.01 / 0.99, epsilon = 1e-15);
    assert_relative_eq!(v.sqrt(), 0.1005, epsilon = 1e-4);
    assert!(loss_to_shift_post_amp(0.0).is_err());

    assert_eq!(thermal_loss_to_shift_pre_amp(1.0, 3.0).unwrap(), 0.0);
    assert_relative_eq!(
        thermal_loss_to_shift_pre_amp(0.99, 0.0).unwrap().sqrt(),
        0.1,
        epsilon = 1e-12
    );
    for i in 1..100 {
        let eta = i as f64 / 100.0;
        assert!(
            thermal_loss_to_shift_pre_amp(eta, 0.0).unwrap() < loss_to_shift_post_amp(eta).unwrap()
        );
    }
}

#[test]
fn post_amp_variance_matches_two_step_composition() {
    let eta = 0.99;
    let loss = named_channel(ChannelKind::PureLoss { eta }).unwrap();
    let amp = named_channel(ChannelKind::QuantumLimitedAmp { gain: 1.0 / eta }).unwrap();
    let net = compose_gaussian_channels(&loss, &amp).unwrap();
    let v = loss_to_shift_post_amp(eta).unwrap();
    assert!(
        net.max_abs_diff(&named_channel(ChannelKind::AdditiveNoise { sigma: v.sqrt() }).unwrap())
            < 1e-12
    );
}

#[test]
fn squeezing_round_trip() {
    let p = NoiseParams::new(0.0, 0.2).unwrap();
    let db = p.gkp_squeezing_db();
    assert_relative_eq!(db, -10.0 * (2.0f64 * 0.04).log10(), epsilon = 1e-12);
    assert_relative_eq!(
        bqec_core::noise::sigma_gkp_from_squeezing_db(db),
        0.2,
        epsilon = 1e-12
    );
    assert!(NoiseParams::new(-0.1, 0.1).is_err());
}

// ---------------------------------------------------------------- channels

fn random_channel(seed: u64) -> GaussianChannelSpec {
    let mut rng = trial_rng(seed, 0);
    let t = DMatrix::from_fn(2, 2, |_, _| normal(&mut rng, 1.0));
    let b = DMatrix::from_fn(2, 2, |_, _| normal(&mut rng, 1.0));
    let n = &b * b.transpose();
    let d = DVector::from_fn(2, |_, _| normal(&mut rng, 1.0));
    GaussianChannelSpec::new(t, n, d).unwrap()
}

#[test]
fn composition_is_associative() {
    for seed in 0..50 {
        let (a, b, c) = (
            random_channel(3 * seed),
            random_channel(3 * seed + 1),
            random_channel(3 * seed + 2),
        );
        let left =
            compose_gaussian_channels(&compose_gaussian_channels(&a, &b).unwrap(), &c).unwrap();
        let right =
            compose_gaussian_channels(&a, &compose_gaussian_channels(&b, &c).unwrap()).unwrap();
        let scale = left.t.amax().max(left.n.amax()).max(left.d.amax()).max(1.0);
        assert!(left.max_abs_diff(&right) <= 1e-12 * scale);
    }
}

#[test]
fn loss_then_amplification_is_additive_noise() {
    for i in 1..20 {
        let eta = i as f64 / 20.0;
        let loss = named_channel(ChannelKind::PureLoss { eta }).unwrap();
        let amp = named_channel(ChannelKind::QuantumLimitedAmp { gain: 1.0 / eta }).unwrap();
        let net = compose_gaussian_channels(&loss, &amp).unwrap();
        let add = named_channel(ChannelKind::AdditiveNoise {
            sigma: ((1.0 - eta) / eta).sqrt(),
        })
        .unwrap();
        assert!(net.max_abs_diff(&add) < 1e-12, "eta {eta}");
    }
}

#[test]
fn amplification_then_loss_adds_one_minus_eta() {
    for i in 1..20 {
        let eta = i as f64 / 20.0;
        let loss = named_channel(ChannelKind::PureLoss { eta }).unwrap();
        let amp = named_channel(ChannelKind::QuantumLimitedAmp { gain: 1.0 / eta }).unwrap();
        let net = compose_gaussian_channels(&amp, &loss).unwrap();
        let expected = GaussianChannelSpec::new(
            DMatrix::identity(2, 2),
            DMatrix::identity(2, 2) * (1.0 - eta),
            DVector::zeros(2),
        )
        .unwrap();
        assert!(net.max_abs_diff(&expected) < 1e-12);
    }
}

#[test]
fn identity_is_neutral() {
    let x = random_channel(99);
    let id = GaussianChannelSpec::identity(1);
    assert!(compose_gaussian_channels(&x, &id).unwrap().max_abs_diff(&x) < 1e-15);
    assert!(compose_gaussian_channels(&id, &x).unwrap().max_abs_diff(&x) < 1e-15);
    assert!(compose_gaussian_channels(&x, &GaussianChannelSpec::identity(2)).is_err());
}

#[test]
fn named_channel_definitions() {
    let pl = named_channel(ChannelKind::PureLoss { eta: 1.0 }).unwrap();
    assert!(pl.max_abs_diff(&GaussianChannelSpec::identity(1)) == 0.0);
    let tl = named_channel(ChannelKind::ThermalLoss {
        eta: 0.3,
        n_th: 2.0,
    })
    .unwrap();
    assert_relative_eq!(tl.n[(0, 0)], 0.7 * 2.5, epsilon = 1e-15);
    assert_relative_eq!(tl.n[(1, 1)], 0.7 * 2.5, epsilon = 1e-15);
    assert_eq!(tl.n[(0, 1)], 0.0);
    assert_relative_eq!(tl.t[(0, 0)], 0.3f64.sqrt(), epsilon = 1e-15);
    let an = named_channel(ChannelKind::AdditiveNoise { sigma: 0.3 }).unwrap();
    assert_eq!(an.t, DMatrix::identity(2, 2));
    assert_relative_eq!(an.n[(0, 0)], 0.09, epsilon = 1e-15);
    let na = named_channel(ChannelKind::NoisyAmp {
        gain: 2.0,
        n_th: 1.0,
    })
    .unwrap();
    assert_relative_eq!(na.n[(0, 0)], 1.5, epsilon = 1e-15);
    assert!(named_channel(ChannelKind::PureLoss { eta: 1.5 }).is_err());
    assert!(named_channel(ChannelKind::NoisyAmp {
        gain: 0.5,
        n_th: 0.0
    })
    .is_err());
    assert!(named_channel(ChannelKind::AdditiveNoise { sigma: -1.0 }).is_err());
}

#[test]
fn channel_rejects_invalid_noise_matrix() {
    let t = DMatrix::identity(2, 2);
    let d = DVector::zeros(2);
    assert!(GaussianChannelSpec::new(
        t.clone(),
        DMatrix::from_row_slice(2, 2, &[1.0, 0.5, 0.4, 1.0]),
        d.clone()
    )
    .is_err());
    assert!(GaussianChannelSpec::new(
        t.clone(),
        DMatrix::from_row_slice(2, 2, &[-1.0, 0.0, 0.0, 1.0]),
        d.clone()
    )
    .is_err());
    assert!(GaussianChannelSpec::new(
        DMatrix::identity(3, 3),
        DMatrix::zeros(3, 3),
        DVector::zeros(3)
    )
    .is_err());
}

#[test]
fn channel_apply_moves_moments() {
    let loss = named_channel(ChannelKind::PureLoss { eta: 0.25 }).unwrap();
    let (m, v) = loss
        .apply(
            &DVector::from_vec(vec![2.0, -4.0]),
            &(DMatrix::identity(2, 2) * 0.5),
        )
        .unwrap();
    assert_relative_eq!(m[0], 1.0, epsilon = 1e-15);
    assert_relative_eq!(m[1], -2.0, epsilon = 1e-15);
    // Vacuum stays vacuum under pure loss.
    assert_relative_eq!(v[(0, 0)], 0.5, epsilon = 1e-15);
}

// ---------------------------------------------------------------- sampling

#[test]
fn zero_covariance_samples_zero() {
    let mut rng = seeded_rng(1);
    let x = sample_gaussian(&mut rng, &DMatrix::zeros(3, 3)).unwrap();
    assert!(x.iter().all(|&v| v == 0.0));
}

#[test]
fn sampler_reproduces_gate_covariance() {
    let sc = 0.3;
    let cov = DMatrix::from_row_slice(2, 2, &[1.0, 0.5, 0.5, 4.0 / 3.0]) * (sc * sc);
    let sampler = GaussianSampler::new(&cov).unwrap();
    let mut rng = seeded_rng(11);
    let draws = 1_000_000;
    let mut acc = [0.0f64; 3];
    for _ in 0..draws {
        let x = sampler.sample(&mut rng);
        acc[0] += x[0] * x[0];
        acc[1] += x[0] * x[1];
        acc[2] += x[1] * x[1];
    }
    let got = [
        acc[0] / draws as f64,
        acc[1] / draws as f64,
        acc[2] / draws as f64,
    ];
    let want = [cov[(0, 0)], cov[(0, 1)], cov[(1, 1)]];
    for (g, w) in got.iter().zip(&want) {
        assert!(((g - w) / w).abs() < 0.01, "{got:?} vs {want:?}");
    }
}

#[test]
fn sampling_is_deterministic() {
    let cov = DMatrix::from_row_slice(2, 2, &[2.0, 0.3, 0.3, 1.0]);
    let a: Vec<_> = {
        let mut rng = trial_rng(5, 17);
        (0..100)
            .map(|_| sample_gaussian(&mut rng, &cov).unwrap())
            .collect()
    };
    let b: Vec<_> = {
        let mut rng = trial_rng(5, 17);
        (0..100)
            .map(|_| sample_gaussian(&mut rng, &cov).unwrap())
            .collect()
    };
    assert_eq!(a, b);
}

#[test]
fn sampling_rejects_indefinite_covariance() {
    let mut rng = seeded_rng(1);
    assert!(sample_gaussian(
        &mut rng,
        &DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 2.0, 1.0])
    )
    .is_err());
}

#[test]
fn shift_vector_validation() {
    assert!(ShiftVector::new(vec![0.0], vec![0.0, 1.0]).is_err());
    assert!(ShiftVector::new(vec![f64::NAN], vec![0.0]).is_err());
    let v = ShiftVector::new(vec![1.0, 2.0], vec![3.0, 4.0]).unwrap();
    assert_eq!(v.interleaved(), vec![1.0, 3.0, 2.0, 4.0]);
    assert_eq!(ShiftVector::from_interleaved(&v.interleaved()).unwrap(), v);
}
