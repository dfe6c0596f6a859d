use bqec_wasm_demo::calc;

#[test]
fn gkp_failure_matches_core() {
    let v = calc::gkp_failure(0.3).unwrap();
    assert_eq!(v.len(), 2);
    assert_eq!(
        v[0],
        bqec_core::lattice::square_failure_probability(0.3, true).unwrap()
    );
    assert!(v[0] > 0.0 && v[0] < v[1]);
    assert!(calc::gkp_failure(-1.0).is_err());
}

#[test]
fn capacity_bounds_follow_row_order() {
    let v = calc::capacity_bounds(0.9, 1.0, Some(1.0)).unwrap();
    assert_eq!(v.len(), 7);
    assert_eq!(v[2], v[0].max(v[1]));
    assert!(v[4] >= v[3]);
    let zero = calc::capacity_bounds(0.5, 0.0, None).unwrap();
    for x in [zero[0], zero[1], zero[2], zero[6]] {
        assert!(x.abs() < 1e-12);
    }
    assert!(calc::capacity_bounds(1.2, 0.0, None).is_err());
}

#[test]
fn tms_optimum_at_tenth() {
    let v = calc::tms_optimum(0.1, None).unwrap();
    assert!((v[0] - 4.8067).abs() < 1e-3);
    assert!((v[2] - 0.0358).abs() < 1e-4);
    assert!((v[3] - 0.01 / (v[2] * v[2])).abs() < 1e-12);
    // A noisy ancilla never beats an ideal one.
    let noisy = calc::tms_optimum(0.1, Some(15.0)).unwrap();
    assert!(noisy[2] >= v[2]);
}
