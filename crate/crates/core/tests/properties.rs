//! The fixed-seed property suites as individual test targets, so a
//! failure names the broken law directly.

use lieg2::verify;

#[test]
fn d_squared_is_zero_everywhere() {
    verify::property_d_squared_zero().unwrap();
}

#[test]
fn contraction_is_an_antiderivation() {
    verify::property_contraction_antiderivation().unwrap();
}

#[test]
fn unimodular_examples_satisfy_poincare_duality() {
    verify::property_poincare_duality().unwrap();
}

#[test]
fn extension_differentials_split_into_base_and_action_parts() {
    verify::property_semidirect_differential().unwrap();
}

#[test]
fn both_classification_routes_agree_on_random_derivations() {
    verify::property_crosscheck_agreement().unwrap();
}

#[test]
fn the_adapted_form_has_the_reference_bilinear_form() {
    verify::property_adapted_bilinear().unwrap();
}

#[test]
fn obstruction_certificates_imply_degeneracy_on_instantiation() {
    verify::property_certificate_degeneracy().unwrap();
}
