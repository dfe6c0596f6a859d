use approx::assert_relative_eq;
use bqec_core::lattice::{
    failure_bound, loss_error_bound, square_failure_probability, symplectic_form, GkpLatticeCode,
    LogicalResidual,
};
use bqec_core::noise::{nearest_multiple, normal, ShiftVector};
use bqec_core::rng::seeded_rng;
use bqec_core::{Error, Pauli, SQRT_2PI, SQRT_PI};
use nalgebra::{DMatrix, DVector};
use rand::Rng;

fn hex_ratio() -> f64 {
    (2.0 / 3f64.sqrt()).sqrt()
}

fn label(code: &GkpLatticeCode, shift: (f64, f64)) -> Pauli {
    let z = code
        .syndrome(&ShiftVector::new(vec![shift.0], vec![shift.1]).unwrap())
        .unwrap();
    match code.closest_vector_decode(&z).unwrap().residual_logical[0] {
        LogicalResidual::Qubit(p) => p,
        other => panic!("expected a qubit label, got {other:?}"),
    }
}

#[test]
fn constructors_have_expected_determinants() {
    let sq = GkpLatticeCode::square(2).unwrap();
    let hex = GkpLatticeCode::hexagonal(2).unwrap();
    assert_relative_eq!(sq.generator().determinant(), 2.0, epsilon = 1e-12);
    assert_relative_eq!(hex.generator().determinant(), 2.0, epsilon = 1e-12);
    assert_eq!(sq.logical_dims(), &[2]);
    assert_eq!(hex.logical_dims(), &[2]);
    let canonical = GkpLatticeCode::new(DMatrix::identity(2, 2)).unwrap();
    assert_eq!(canonical.logical_dims(), &[1]);
    assert_eq!(GkpLatticeCode::square(3).unwrap().logical_dims(), &[3]);
}

#[test]
fn decoding_lattice_is_scaled_inverse() {
    let hex = GkpLatticeCode::hexagonal(2).unwrap();
    let prod = hex.generator() * hex.decoding_lattice();
    assert!((prod - DMatrix::identity(2, 2) * SQRT_2PI).amax() < 1e-12);
}

#[test]
fn rejects_invalid_generators() {
    assert!(matches!(
        GkpLatticeCode::new(DMatrix::identity(2, 2) * 1.1),
        Err(Error::Invalid(_))
    ));
    assert!(GkpLatticeCode::new(DMatrix::zeros(2, 2)).is_err());
    assert!(matches!(
        GkpLatticeCode::new(DMatrix::identity(3, 3)),
        Err(Error::Dimension(_))
    ));
    // Integral but not in standard block form.
    let mut s = DMatrix::identity(4, 4);
    s[(0, 1)] = 1.0;
    assert!(GkpLatticeCode::new(s).is_err());
}

#[test]
fn multimode_condition_is_integral_gram() {
    let s = DMatrix::identity(4, 4) * 2f64.sqrt();
    let code = GkpLatticeCode::new(s.clone()).unwrap();
    let a = &s * symplectic_form(2) * s.transpose();
    assert!(a.iter().all(|x| (x - x.round()).abs() < 1e-12));
    assert_eq!(code.logical_dims(), &[2, 2]);
}

#[test]
fn parses_text_generators() {
    let code = GkpLatticeCode::from_text(
        "# square qubit\n1.4142135623730951 0\n0 1.4142135623730951\ndims = 2\n",
    )
    .unwrap();
    assert_eq!(code.logical_dims(), &[2]);
    assert!(GkpLatticeCode::from_text("1 0\n0 1\ndims = 2\n").is_err());
    assert!(matches!(
        GkpLatticeCode::from_text("1 x\n0 1\n"),
        Err(Error::Parse(_))
    ));
    assert!(GkpLatticeCode::from_text("1 0 0\n0 1\n").is_err());
}

// ---------------------------------------------------------------- radius

#[test]
fn correctable_radii() {
    let sq = GkpLatticeCode::square(2)
        .unwrap()
        .correctable_radius()
        .unwrap();
    let hex = GkpLatticeCode::hexagonal(2)
        .unwrap()
        .correctable_radius()
        .unwrap();
    assert_relative_eq!(sq, 0.5 * SQRT_PI, epsilon = 1e-14);
    assert_relative_eq!(hex, 0.5 * SQRT_PI * hex_ratio(), epsilon = 1e-14);
    assert!((hex / sq - (2.0 / 3f64.sqrt()).sqrt()).abs() < 1e-12);
}

#[test]
fn radius_of_scaled_identity_is_half_the_spacing() {
    for &c in &[1.0, 2f64.sqrt(), 3f64.sqrt(), 2.0] {
        let code = GkpLatticeCode::new(DMatrix::identity(2, 2) * c).unwrap();
        assert_relative_eq!(
            code.correctable_radius().unwrap(),
            0.5 * SQRT_2PI / c,
            epsilon = 1e-12
        );
    }
}

#[test]
fn radius_matches_brute_force_shortest_vector() {
    for code in [
        GkpLatticeCode::square(2).unwrap(),
        GkpLatticeCode::hexagonal(2).unwrap(),
        GkpLatticeCode::hexagonal(3).unwrap(),
    ] {
        let m = code.decoding_lattice();
        let mut best = f64::INFINITY;
        for a in -5i64..=5 {
            for b in -5i64..=5 {
                if a == 0 && b == 0 {
                    continue;
                }
                best = best.min((m * DVector::from_vec(vec![a as f64, b as f64])).norm());
            }
        }
        assert_relative_eq!(
            code.correctable_radius().unwrap(),
            0.5 * best,
            epsilon = 1e-12
        );
    }
}

// ---------------------------------------------------------------- decoding

#[test]
fn zero_syndrome_decodes_to_identity() {
    for code in [
        GkpLatticeCode::square(2).unwrap(),
        GkpLatticeCode::hexagonal(2).unwrap(),
    ] {
        let out = code.closest_vector_decode(&[0.0, 0.0]).unwrap();
        assert_eq!(out.estimated_shift, ShiftVector::zeros(1));
        assert_eq!(out.residual_logical, vec![LogicalResidual::Qubit(Pauli::I)]);
    }
}

#[test]
fn worked_example_becomes_logical_x() {
    let code = GkpLatticeCode::square(2).unwrap();
    let z = code
        .syndrome(&ShiftVector::new(vec![0.51 * SQRT_PI], vec![0.0]).unwrap())
        .unwrap();
    let out = code.closest_vector_decode(&z).unwrap();
    assert_relative_eq!(out.estimated_shift.q[0], -0.49 * SQRT_PI, epsilon = 1e-12);
    assert_relative_eq!(out.estimated_shift.p[0], 0.0, epsilon = 1e-12);
    assert_eq!(out.residual_logical, vec![LogicalResidual::Qubit(Pauli::X)]);
    assert_eq!(label(&code, (0.0, 0.51 * SQRT_PI)), Pauli::Z);
    assert_eq!(label(&code, (0.51 * SQRT_PI, 0.51 * SQRT_PI)), Pauli::Y);
    assert_eq!(label(&code, (0.49 * SQRT_PI, -0.49 * SQRT_PI)), Pauli::I);
}

#[test]
fn decode_agrees_with_wide_window_on_random_syndromes() {
    let mut rng = seeded_rng(404);
    for code in [
        GkpLatticeCode::square(2).unwrap(),
        GkpLatticeCode::hexagonal(2).unwrap(),
    ] {
        for _ in 0..10_000 {
            let z = [rng.random_range(-20.0..20.0), rng.random_range(-20.0..20.0)];
            let fast = code.closest_vector_decode(&z).unwrap();
            let wide = code.decode_with_window(&z, 10).unwrap();
            let lat = code.decoding_lattice();
            let len = |n: &[i64]| {
                let t = DVector::from_vec(vec![
                    z[0] / SQRT_2PI - n[0] as f64,
                    z[1] / SQRT_2PI - n[1] as f64,
                ]);
                (lat * t).norm()
            };
            // Ties are measure-zero; compare distances so a tie cannot fail the test.
            assert!((len(&fast.lattice_coords) - len(&wide.lattice_coords)).abs() < 1e-12);
        }
    }
}

#[test]
fn decode_is_invariant_under_stabilizer_shifts() {
    let mut rng = seeded_rng(8);
    for code in [
        GkpLatticeCode::square(2).unwrap(),
        GkpLatticeCode::hexagonal(2).unwrap(),
    ] {
        let lat = code.decoding_lattice().clone();
        for _ in 0..1000 {
            let xi = (normal(&mut rng, 0.5), normal(&mut rng, 0.5));
            let base = code
                .syndrome(&ShiftVector::new(vec![xi.0], vec![xi.1]).unwrap())
                .unwrap();
            let out0 = code.closest_vector_decode(&base).unwrap();
            // Stabilizer lattice vectors are √(2π)S⁻¹·(A m) with A = SΩSᵀ.
            let m = [rng.random_range(-3i64..=3), rng.random_range(-3i64..=3)];
            let a = code.generator() * symplectic_form(1) * code.generator().transpose();
            let am: Vec<i64> = (0..2)
                .map(|i| (a[(i, 0)] * m[0] as f64 + a[(i, 1)] * m[1] as f64).round() as i64)
                .collect();
            let v = &lat * DVector::from_vec(vec![am[0] as f64, am[1] as f64]);
            let shifted = code
                .syndrome(&ShiftVector::new(vec![xi.0 + v[0]], vec![xi.1 + v[1]]).unwrap())
                .unwrap();
            let out1 = code.closest_vector_decode(&shifted).unwrap();
            assert_eq!(out1.residual_logical, out0.residual_logical);
            assert_eq!(out1.lattice_coords[0] - out0.lattice_coords[0], am[0]);
            assert_eq!(out1.lattice_coords[1] - out0.lattice_coords[1], am[1]);
            let d = (out1.estimated_shift.q[0] - out0.estimated_shift.q[0]).abs()
                + (out1.estimated_shift.p[0] - out0.estimated_shift.p[0]).abs();
            assert!(d < 1e-9);
        }
    }
}

#[test]
fn shifts_inside_voronoi_cell_are_corrected_exactly() {
    let mut rng = seeded_rng(21);
    for code in [
        GkpLatticeCode::square(2).unwrap(),
        GkpLatticeCode::hexagonal(2).unwrap(),
    ] {
        let lat = code.decoding_lattice().clone();
        let mut accepted = 0;
        while accepted < 2000 {
            let xi = DVector::from_vec(vec![
                rng.random_range(-1.5..1.5),
                rng.random_range(-1.5..1.5),
            ]);
            // Brute-force Voronoi membership: strictly closer to 0 than to every other lattice point.
            let mut inside = true;
            for a in -4i64..=4 {
                for b in -4i64..=4 {
                    if a == 0 && b == 0 {
                        continue;
                    }
                    let v = &lat * DVector::from_vec(vec![a as f64, b as f64]);
                    if (&xi - v).norm() <= xi.norm() + 1e-9 {
                        inside = false;
                    }
                }
            }
            if !inside {
                continue;
            }
            accepted += 1;
            let z = code
                .syndrome(&ShiftVector::new(vec![xi[0]], vec![xi[1]]).unwrap())
                .unwrap();
            let out = code.closest_vector_decode(&z).unwrap();
            assert_relative_eq!(out.estimated_shift.q[0], xi[0], epsilon = 1e-12);
            assert_relative_eq!(out.estimated_shift.p[0], xi[1], epsilon = 1e-12);
            assert_eq!(out.residual_logical, vec![LogicalResidual::Qubit(Pauli::I)]);
        }
    }
}

#[test]
fn hexagonal_logical_rates_are_equal() {
    let code = GkpLatticeCode::hexagonal(2).unwrap();
    let mut rng = seeded_rng(33);
    let sigma = 0.45;
    let trials = 200_000;
    let mut counts = [0usize; 4];
    for _ in 0..trials {
        let p = label(&code, (normal(&mut rng, sigma), normal(&mut rng, sigma)));
        counts[p as usize] += 1;
    }
    let rates: Vec<f64> = counts[1..]
        .iter()
        .map(|&c| c as f64 / trials as f64)
        .collect();
    let mean = rates.iter().sum::<f64>() / 3.0;
    let se = (mean * (1.0 - mean) / trials as f64).sqrt();
    for r in &rates {
        // Difference of two independent-ish estimates: 3·√2 standard errors.
        assert!((r - mean).abs() <= 3.0 * 2f64.sqrt() * se, "{rates:?}");
    }
}

#[test]
fn qudit_residues_are_reported() {
    let code = GkpLatticeCode::square(3).unwrap();
    assert_eq!(code.classify(&[4, -1]), vec![LogicalResidual::Qudit(1, 2)]);
    assert_eq!(code.classify(&[3, 6]), vec![LogicalResidual::Qudit(0, 0)]);
}

#[test]
fn decoding_limits() {
    let code = GkpLatticeCode::square(2).unwrap();
    assert!(matches!(
        code.closest_vector_decode(&[0.0]),
        Err(Error::Dimension(_))
    ));
    assert!(code.closest_vector_decode(&[f64::NAN, 0.0]).is_err());
    let three = GkpLatticeCode::new(DMatrix::identity(6, 6) * 2f64.sqrt()).unwrap();
    assert!(matches!(
        three.closest_vector_decode(&[0.0; 6]),
        Err(Error::Unsupported(_))
    ));
    let five = GkpLatticeCode::new(DMatrix::identity(10, 10)).unwrap();
    assert!(matches!(
        five.correctable_radius(),
        Err(Error::Unsupported(_))
    ));
}

// ---------------------------------------------------------------- failure rates

#[test]
fn square_failure_exact_and_asymptotic() {
    assert!(square_failure_probability(0.02, true).unwrap() < 1e-100);
    for i in 1..=25 {
        let sigma = 0.01 * i as f64;
        let exact = square_failure_probability(sigma, true).unwrap();
        let asy = square_failure_probability(sigma, false).unwrap();
        if exact == 0.0 {
            assert!(asy < 1e-300);
            continue;
        }
        assert!(
            (exact - asy).abs() / exact < 0.10,
            "sigma {sigma}: {exact} vs {asy}"
        );
    }
    assert!(square_failure_probability(0.0, true).is_err());
}

#[test]
fn square_failure_matches_monte_carlo() {
    let sigma = 0.5;
    let trials = 10_000_000u64;
    let mut rng = seeded_rng(55);
    let mut fails = 0u64;
    for _ in 0..trials {
        let a = nearest_multiple(normal(&mut rng, sigma), SQRT_PI).rem_euclid(2);
        let b = nearest_multiple(normal(&mut rng, sigma), SQRT_PI).rem_euclid(2);
        if a == 1 || b == 1 {
            fails += 1;
        }
    }
    let p = square_failure_probability(sigma, true).unwrap();
    let est = fails as f64 / trials as f64;
    let se = (p * (1.0 - p) / trials as f64).sqrt();
    assert!((est - p).abs() <= 3.0 * se, "MC {est} vs {p}");
}

#[test]
fn failure_bounds() {
    let sq = GkpLatticeCode::square(2).unwrap();
    let hex = GkpLatticeCode::hexagonal(2).unwrap();
    for i in 1..=6 {
        let sigma = 0.1 * i as f64;
        let bs = failure_bound(&sq, sigma).unwrap();
        assert_relative_eq!(
            bs,
            (-std::f64::consts::PI / (8.0 * sigma * sigma)).exp(),
            max_relative = 1e-12
        );
        let bh = failure_bound(&hex, sigma).unwrap();
        assert_relative_eq!(
            bh,
            (-std::f64::consts::PI / (4.0 * 3f64.sqrt() * sigma * sigma)).exp(),
            max_relative = 1e-12
        );
        assert!(bs >= square_failure_probability(sigma, true).unwrap());
    }
}

#[test]
fn qudit_failure_bounds() {
    let sigma = 0.2;
    let pi = std::f64::consts::PI;
    for d in 2u64..=4 {
        let sq = failure_bound(&GkpLatticeCode::square(d).unwrap(), sigma).unwrap();
        assert_relative_eq!(
            sq,
            (-pi / (4.0 * d as f64 * sigma * sigma)).exp(),
            max_relative = 1e-12
        );
        let hex = failure_bound(&GkpLatticeCode::hexagonal(d).unwrap(), sigma).unwrap();
        assert_relative_eq!(
            hex,
            (-pi / (2.0 * 3f64.sqrt() * d as f64 * sigma * sigma)).exp(),
            max_relative = 1e-12
        );
    }
}

#[test]
fn loss_bounds() {
    let hex = GkpLatticeCode::hexagonal(2).unwrap();
    let sq = GkpLatticeCode::square(2).unwrap();
    let b = loss_error_bound(&hex, 0.05).unwrap();
    let closed = (-(std::f64::consts::PI / (4.0 * 3f64.sqrt())) * (0.95 / 0.05)).exp();
    assert_relative_eq!(b, closed, max_relative = 1e-12);
    assert!((b - 1.8e-4).abs() / 1.8e-4 < 0.03, "{b}");
    assert!(loss_error_bound(&hex, 1e-4).unwrap() < 1e-300);
    for i in 1..100 {
        let g = i as f64 / 100.0;
        assert!(loss_error_bound(&sq, g).unwrap() >= loss_error_bound(&hex, g).unwrap());
    }
    assert!(loss_error_bound(&hex, 0.0).is_err());
    assert!(loss_error_bound(&hex, 1.0).is_err());
}
