//! The acceptance battery: twelve exact criteria, one test each, with the
//! stated runtime ceilings enforced. Every check is an exact algebraic
//! identity; there are no tolerances anywhere.

use qsnake_core::kronecker::{
    resolve_h_convention, verify_bar_invariance, verify_classical_limits,
    verify_coefficient_recursions, verify_commutation_exponents, verify_level_counts,
    verify_route_agreement, verify_s1_ground_truth, verify_seed_structure_sequences,
    verify_torus_recursions, Kronecker, KroneckerGraph, H_CONVENTION,
};
use qsnake_core::snake::{demo_graph, MatchingLattice};
use qsnake_core::stembridge::verify_phenomenon;
use qsnake_core::typea::{verify_path_expansions, verify_path_seed_structure};
use std::time::Instant;

#[test]
fn criterion_01_route_agreement_kronecker() {
    let t = Instant::now();
    verify_route_agreement(&Kronecker::new(), 10).unwrap();
    let secs = t.elapsed().as_secs_f64();
    assert!(secs < 60.0, "route agreement took {secs:.1}s, ceiling is 60s");
}

#[test]
fn criterion_02_type_a_expansions() {
    let t = Instant::now();
    for n in 1..=5 {
        verify_path_expansions(n).unwrap();
    }
    let secs = t.elapsed().as_secs_f64();
    assert!(secs < 120.0, "path expansions took {secs:.1}s, ceiling is 120s");
}

#[test]
fn criterion_03_classical_limits() {
    verify_classical_limits(&Kronecker::new(), 10).unwrap();
}

#[test]
fn criterion_04_level_set_counts() {
    verify_level_counts(10).unwrap();
}

#[test]
fn criterion_05_recursions() {
    let kr = Kronecker::new();
    let s_of = |n: usize| kr.s_via_qbinom(n);
    verify_torus_recursions(&kr, 10, &s_of).unwrap();
    verify_coefficient_recursions(10).unwrap();
}

#[test]
fn criterion_06_s1_ground_truth() {
    verify_s1_ground_truth(&Kronecker::new()).unwrap();
}

#[test]
fn criterion_07_quantization_structure() {
    verify_seed_structure_sequences(&Kronecker::new(), 6).unwrap();
    verify_path_seed_structure(6).unwrap();
}

#[test]
fn criterion_08_commutation_exponents() {
    verify_commutation_exponents(&Kronecker::new(), 10).unwrap();
}

#[test]
fn criterion_09_stembridge() {
    let t = Instant::now();
    verify_phenomenon(10).unwrap();
    let secs = t.elapsed().as_secs_f64();
    assert!(secs < 60.0, "phenomenon check took {secs:.1}s, ceiling is 60s");
}

#[test]
fn criterion_10_bar_invariance() {
    verify_bar_invariance(12).unwrap();
}

#[test]
fn criterion_11_lattice_validity() {
    let demo = demo_graph();
    let min = demo
        .boundary_matching_containing(0, qsnake_core::snake::Side::W)
        .unwrap();
    let lattice = MatchingLattice::build(&demo, &min).unwrap();
    assert_eq!(lattice.matchings().len(), 11);
    for n in 0..=6 {
        let kg = KroneckerGraph::g(n);
        MatchingLattice::build(kg.graph(), kg.p_min()).unwrap();
    }
}

#[test]
fn criterion_12_h_convention_resolution() {
    assert_eq!(resolve_h_convention(&Kronecker::new()).unwrap(), H_CONVENTION);
}
