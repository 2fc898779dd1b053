//! Full-scale acceptance suite: one test per criterion, each printing its
//! pass/fail line (visible with --nocapture or on failure).

use linstrand::selftest::{run_criterion, Scale};

fn run(index: usize) {
    let r = run_criterion(index, Scale::Full);
    println!("{}", r.line());
    assert!(r.pass, "{}", r.line());
}

#[test]
fn criterion_1_formula_agreement() {
    run(1);
}

#[test]
fn criterion_2_curve_forward_check() {
    run(2);
}

#[test]
fn criterion_3_union_forward_check() {
    run(3);
}

#[test]
fn criterion_4_converse_at_desk_scale() {
    run(4);
}

#[test]
fn criterion_5_golden_fixture() {
    run(5);
}

#[test]
fn criterion_6_syzygy_identity_suite() {
    run(6);
}

#[test]
fn criterion_7_split_certificates() {
    run(7);
}

#[test]
fn criterion_8_negative_control() {
    run(8);
}

#[test]
fn criterion_9_frame_invariance() {
    run(9);
}
