//! One test per acceptance criterion; each prints a PASS/FAIL line with the
//! measured values.

use watson::verify::run_criterion;

fn check(id: u8) {
    let report = run_criterion(id).unwrap();
    println!("{report}");
    assert!(report.passed, "{report}");
}

#[test]
fn criterion_1_flat_scaled_remainder() {
    check(1);
}

#[test]
fn criterion_2_regime_switch() {
    check(2);
}

#[test]
fn criterion_3_residue_constant() {
    check(3);
}

#[test]
fn criterion_4_no_switch_far_singularity() {
    check(4);
}

#[test]
fn criterion_5_incomplete_gamma_bounds() {
    check(5);
}

#[test]
fn criterion_6_incomplete_gamma_identities() {
    check(6);
}

#[test]
fn criterion_7_convergent_rewrite() {
    check(7);
}

#[test]
fn criterion_8_exponential_integral() {
    check(8);
}

#[test]
fn criterion_9_exact_series() {
    check(9);
}
