//! Negative controls: damaged extensions must fail named checks.

mod common;

use chiral_core::toroidal::{toroidal_cayley, toroidal_extension};
use chiral_core::verify::check_half_turn_relations;
use chiral_core::{extend, verify_extension, ExtendedGpr, GprGraph, Permutation, ToroidalParams};
use proptest::prelude::*;

use common::*;

fn base(b: u64, c: u64) -> (GprGraph, ExtendedGpr) {
    let p = ToroidalParams::new(b, c).unwrap();
    let cay = toroidal_cayley(&p).unwrap().0;
    let ext = extend(&cay).unwrap();
    (cay, ext)
}

#[test]
fn identity_style_matching_fails() {
    let (cay, ext) = base(1, 2);
    let rep = verify_extension(&identity_matching(&ext), &cay).unwrap();
    assert!(!rep.overall);
    let lemma_fails = rep.relation_checks.iter().any(|c| !c.holds);
    assert!(lemma_fails || !rep.conditions.d.passed);
}

#[test]
fn mismatched_facet_fails_condition_a() {
    let (_, ext) = base(1, 2);
    let p = ToroidalParams::new(1, 2).unwrap();
    let (_, s1, s2) = toroidal_cayley(&p).unwrap();
    // the same group with its generators relabelled is a different colored
    // graph
    let other = GprGraph::cayley(vec![s1.clone(), &s1 * &s2]).unwrap();
    let rep = verify_extension(&ext, &other).unwrap();
    assert!(!rep.conditions.a.passed);
    assert!(!rep.conditions.a.witnesses.is_empty());
    assert!(rep.failures().contains(&"condition (a)".to_string()));
}

#[test]
fn deleted_label_fails() {
    let (cay, ext) = base(1, 2);
    let g = ext.graph();
    let graph = GprGraph::new(g.arrows()[1..].to_vec(), g.matching().cloned(), 1).unwrap();
    let damaged = ExtendedGpr::from_parts(graph, cay.clone()).unwrap();
    let rep = verify_extension(&damaged, &cay).unwrap();
    assert!(!rep.conditions.a.passed);
    assert!(!rep.overall);
}

#[test]
fn permuted_cycle_fails() {
    let (cay, ext) = base(1, 2);
    let g = ext.graph();
    // reverse one square of σ₁ in the first copy
    let fix = Permutation::from_cycles(40, &[vec![2, 4]]).unwrap();
    let mut arrows = g.arrows().to_vec();
    let mut cycles = arrows[0].cycles();
    cycles[0] = cycles[0].iter().map(|&v| fix.apply(v)).collect();
    arrows[0] = Permutation::from_cycles(40, &cycles).unwrap();
    let graph = GprGraph::new(arrows, g.matching().cloned(), 1).unwrap();
    let damaged = ExtendedGpr::from_parts(graph, cay.clone()).unwrap();
    let rep = verify_extension(&damaged, &cay).unwrap();
    assert!(!rep.overall, "{:?}", rep.failures());
}

#[test]
fn explicit_matching_swap_breaks_half_turns() {
    let p = ToroidalParams::new(1, 2).unwrap();
    let ext = toroidal_extension(&p).unwrap();
    let bad = swap_pair(&ext, 1, 2);
    let checks = check_half_turn_relations(&bad.generators());
    assert!(checks.iter().any(|c| !c.holds && c.witness.is_some()));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn swapped_pair_is_caught(u in 1usize..=20, v in 1usize..=20) {
        prop_assume!(u != v);
        let (cay, ext) = base(1, 2);
        let rep = verify_extension(&swap_pair(&ext, u, v), &cay).unwrap();
        prop_assert!(!rep.failures().is_empty());
        prop_assert!(!rep.overall);
    }

    #[test]
    fn broken_relation_is_caught(a in 1usize..=40, d in 1usize..=40) {
        prop_assume!(a != d);
        let (cay, ext) = base(1, 3);
        let rep = verify_extension(&break_relation(&ext, a, d), &cay).unwrap();
        prop_assert!(!rep.overall);
    }
}
