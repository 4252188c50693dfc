//! Acceptance suite: one test per criterion, each printing its
//! pass/fail line (visible with --nocapture) and asserting both the
//! check and its time budget.

use cubewaring::verify;

fn check(result: verify::CriterionResult) {
    println!("{}", result.line());
    assert!(
        result.passed,
        "criterion {} failed in {:.2}s (limit {}s): {}",
        result.id, result.seconds, result.time_limit, result.detail
    );
}

#[test]
fn criterion_01_cube_sum_residues_mod_9() {
    check(verify::criterion_1());
}

#[test]
fn criterion_02_shifted_cube_classes_at_27() {
    check(verify::criterion_2());
}

#[test]
fn criterion_03_four_square_obstruction() {
    check(verify::criterion_3());
}

#[test]
fn criterion_04_congruence_solubility() {
    check(verify::criterion_4());
}

#[test]
fn criterion_05_quartic_coverage() {
    check(verify::criterion_5());
}

#[test]
fn criterion_06_gauss_modulus() {
    check(verify::criterion_6());
}

#[test]
fn criterion_07_orthogonality_identity() {
    check(verify::criterion_7());
}

#[test]
fn criterion_08_dickman_and_smooth_density() {
    check(verify::criterion_8());
}

#[test]
fn criterion_09_arc_integral_identity() {
    check(verify::criterion_9());
}

#[test]
fn criterion_10_toy_rep_counts() {
    check(verify::criterion_10());
}

#[test]
fn criterion_11_congruence_count_pinned() {
    check(verify::criterion_11());
}

#[test]
fn criterion_12_ratio_scan() {
    check(verify::criterion_12());
}

#[test]
fn criterion_13_eight_squares_evidence() {
    check(verify::criterion_13());
}
