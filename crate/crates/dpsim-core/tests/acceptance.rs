//! Acceptance suite: one test per verification criterion.
//!
//! Run with `cargo test -p dpsim-core --test acceptance -- --nocapture` to
//! see the per-criterion report lines; the same checks back the CLI's
//! `verify` subcommand.

use dpsim_core::verify::{self, CheckResult};

fn assert_check(r: CheckResult) {
    println!("{}", r.line());
    assert!(r.passed, "{}", r.line());
}

#[test]
fn criterion_1_analytic_numeric_cross_validation() {
    assert_check(verify::criterion_1_cross_validation());
}

#[test]
fn criterion_2_equal_superposition_values() {
    assert_check(verify::criterion_2_equal_superposition());
}

#[test]
fn criterion_3_error_order_slopes() {
    assert_check(verify::criterion_3_error_orders());
}

#[test]
fn criterion_4_delta_two_thirds_cancellation() {
    assert_check(verify::criterion_4_bb_cancellation());
}

#[test]
fn criterion_5_narrowband_nominal_inversion() {
    assert_check(verify::criterion_5_nb_inversion());
}

#[test]
fn criterion_6_width_threshold() {
    assert_check(verify::criterion_6_width_threshold());
}

#[test]
fn criterion_7_shape_independence() {
    assert_check(verify::criterion_7_shape_independence());
}

#[test]
fn criterion_8_universal_map() {
    assert_check(verify::criterion_8_universal_map());
}

#[test]
fn criterion_9a_unitarity() {
    assert_check(verify::criterion_9a_unitarity());
}

#[test]
fn criterion_9b_picture_equivalence() {
    assert_check(verify::criterion_9b_picture_equivalence());
}

#[test]
fn criterion_9c_gamma_identities() {
    assert_check(verify::criterion_9c_gamma_identities());
}

#[test]
fn criterion_9d_csv_round_trip() {
    assert_check(verify::criterion_9d_csv_round_trip());
}

#[test]
fn criterion_9e_determinism_across_threads() {
    assert_check(verify::criterion_9e_determinism());
}
