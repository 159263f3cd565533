//! The acceptance battery: one test per numbered criterion, each printing a
//! single pass/fail line.  Run with `cargo test --test acceptance` (add
//! `-- --nocapture` to see the lines for passing criteria too).

use cyclonorm::selftest::{self, CriterionReport};
use cyclonorm::SearchConfig;

fn assert_criterion(n: u32, report: CriterionReport) {
    let status = if report.pass { "pass" } else { "FAIL" };
    println!("criterion {n} [{status}] ({} ms): {} — {}", report.millis, report.name, report.detail);
    assert!(report.pass, "criterion {n}: {}", report.detail);
}

fn cfg() -> SearchConfig {
    SearchConfig::default()
}

#[test]
fn criterion_1_wild_reciprocity_vs_local_oracle() {
    assert_criterion(1, selftest::criterion_1(&cfg()));
}

#[test]
fn criterion_2_symbol_algebra_and_pairing_tables() {
    assert_criterion(2, selftest::criterion_2(&cfg()));
}

#[test]
fn criterion_3_hasse_vs_brute_force() {
    assert_criterion(3, selftest::criterion_3(&cfg()));
}

#[test]
fn criterion_4_place_set_partitions() {
    assert_criterion(4, selftest::criterion_4(&cfg()));
}

#[test]
fn criterion_5_j_membership_and_decomposition() {
    assert_criterion(5, selftest::criterion_5(&cfg()));
}

#[test]
fn criterion_6_certificate_round_trip_and_fuzzing() {
    assert_criterion(6, selftest::criterion_6(&cfg()));
}

#[test]
fn criterion_7_trace_set_inclusion() {
    assert_criterion(7, selftest::criterion_7(&cfg()));
}

#[test]
fn criterion_8_norm_form_identity() {
    assert_criterion(8, selftest::criterion_8(&cfg()));
}

#[test]
fn criterion_9_nonpower_witness_pipeline() {
    assert_criterion(9, selftest::criterion_9(&cfg()));
}
