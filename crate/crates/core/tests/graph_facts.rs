//! Instance checks of the structural facts the construction relies on, on
//! small Cayley graphs where brute force is cheap.

mod common;

use std::collections::HashSet;

use chiral_core::extension::shortest_word;
use chiral_core::toroidal::{toroidal_cayley, toroidal_extension};
use chiral_core::verify::{
    check_extension_conditions, check_rotation_relations, chirality_test, schlafli_symbol,
};
use chiral_core::{
    extend, extends_to_automorphism, regular_representation, verify_extension, Chirality,
    GeneratorWord, GprGraph, PermGroup, Permutation, ToroidalParams,
};
use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::*;

fn cayley(b: u64, c: u64) -> GprGraph {
    toroidal_cayley(&ToroidalParams::new(b, c).unwrap())
        .unwrap()
        .0
}

fn small_cayley_graphs() -> Vec<GprGraph> {
    let mut out = vec![cayley(1, 2), cayley(1, 3)];
    for gens in [
        vec![cyc(4, "(1,2,3)"), cyc(4, "(2,3,4)")],
        symmetric(4),
        dihedral(5),
    ] {
        out.push(GprGraph::cayley(regular_representation(&gens, 1000).unwrap()).unwrap());
    }
    out
}

#[test]
fn unique_element_between_vertices() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for g in small_cayley_graphs() {
        let elements = brute_elements(g.arrows(), 5000).unwrap();
        assert_eq!(elements.len(), g.vertex_count());
        let labels: Vec<usize> = (1..=g.label_count()).collect();
        for _ in 0..20 {
            let u = rng.gen_range(1..=g.vertex_count());
            let v = rng.gen_range(1..=g.vertex_count());
            let hits = elements.iter().filter(|e| e.apply(u) == v).count();
            assert_eq!(hits, 1);
            let w = shortest_word(&g, u, v, &labels).unwrap();
            assert_eq!(w.evaluate(g.arrows()).unwrap().apply(u), v);
        }
    }
}

#[test]
fn only_identity_fixes_a_vertex() {
    for g in small_cayley_graphs() {
        for e in brute_elements(g.arrows(), 5000).unwrap() {
            if !e.is_identity() {
                assert_eq!(e.support().len(), g.vertex_count());
            }
        }
    }
}

#[test]
fn two_copies_give_the_same_group() {
    for g in small_cayley_graphs() {
        let d = g.doubled();
        let single = PermGroup::new(g.arrows()).unwrap();
        let double = PermGroup::new(d.arrows()).unwrap();
        assert_eq!(single.order(), double.order());
        // the copy map is an isomorphism: the diagonal test on the summed
        // generators, read back on the first copy
        let restricted: Vec<Permutation> = d
            .arrows()
            .iter()
            .map(|p| {
                let imgs: Vec<usize> = (1..=g.vertex_count()).map(|v| p.apply(v)).collect();
                Permutation::from_images(&imgs).unwrap()
            })
            .collect();
        assert!(extends_to_automorphism(g.arrows(), &restricted).unwrap());
    }
}

#[test]
fn toroidal_components() {
    let g = cayley(1, 2);
    assert_eq!(g.vertex_count(), 20);
    assert_eq!(g.label_count(), 2);
    let squares = g.components(&[1]).unwrap();
    assert_eq!(squares.len(), 5);
    assert!(squares.classes.iter().all(|c| c.len() == 4));
    assert_eq!(g.components(&[1, 2]).unwrap().len(), 1);
    let ext = extend(&g).unwrap();
    let copies = ext.graph().components(&[1, 2]).unwrap();
    assert_eq!(copies.len(), 2);
    assert_eq!(copies.classes[1], (21..=40).collect::<Vec<_>>());
    // the matching as pseudo-label 3 joins them
    assert_eq!(ext.graph().components(&[1, 2, 3]).unwrap().len(), 1);
}

#[test]
fn primed_copy_isomorphic_to_facet() {
    let g = cayley(1, 2);
    let ext = extend(&g).unwrap();
    let map = ext.graph().colored_component_isomorphic(21, &g, 1).unwrap();
    assert!(map.iter().all(|(&a, &b)| a == b + 20));
    assert!(ext
        .graph()
        .colored_component_isomorphic(1, &cayley(1, 3), 1)
        .is_none());
}

#[test]
fn shortest_word_examples() {
    let g = cayley(1, 2);
    assert_eq!(
        shortest_word(&g, 1, 14, &[2]).unwrap(),
        GeneratorWord::power(2, 1)
    );
    assert_eq!(
        shortest_word(&g, 1, 3, &[1]).unwrap(),
        GeneratorWord::power(1, 2)
    );
    assert_eq!(
        shortest_word(&g, 7, 7, &[1, 2]).unwrap(),
        GeneratorWord::empty()
    );
}

#[test]
fn json_round_trip_of_extension() {
    let ext = extend(&cayley(1, 2)).unwrap();
    let back = GprGraph::from_json(&ext.graph().to_json()).unwrap();
    assert_eq!(&back, ext.graph());
    let dot = ext.graph().export_dot();
    assert_eq!(dot.matches("style=dashed").count(), 20);
}

#[test]
fn battery_and_types_on_the_1_2_extension() {
    let g = cayley(1, 2);
    assert!(check_rotation_relations(g.arrows()).iter().all(|c| c.holds));
    assert_eq!(schlafli_symbol(g.arrows()), vec![4, 4]);
    assert_eq!(chirality_test(g.arrows()).unwrap(), Chirality::Chiral);
    let ext = toroidal_extension(&ToroidalParams::new(1, 2).unwrap()).unwrap();
    let gens = ext.generators();
    assert_eq!(schlafli_symbol(&gens), vec![4, 4, 6]);
    assert!(check_rotation_relations(&gens).iter().all(|c| c.holds));
    // σ₃² fixes the base vertex
    let s3sq = &gens[2] * &gens[2];
    assert_eq!(s3sq.apply(1), 1);
    let first = verify_extension(&ext, &g).unwrap();
    let second = verify_extension(&ext, &g).unwrap();
    assert_eq!(first, second);
    assert!(first.overall);
    assert!(first.schlafli.iter().all(|&e| e >= 2));
}

#[test]
fn top_power_condition_matches_brute_intersection() {
    for ext in [
        toroidal_extension(&ToroidalParams::new(1, 2).unwrap()).unwrap(),
        extend(&cayley(1, 2)).unwrap(),
    ] {
        let gens = ext.generators();
        let lower: HashSet<Permutation> = brute_elements(&gens[..2], 5000).unwrap();
        let top = brute_elements(&gens[2..], 5000).unwrap();
        let meet = lower.intersection(&top).count();
        let cond = check_extension_conditions(&ext, ext.facet()).unwrap();
        assert_eq!(cond.c.passed, meet == 1);
        assert!(!PermGroup::new(&gens[..2]).unwrap().contains(&gens[2]));
        assert!(PermGroup::new(&gens)
            .unwrap()
            .contains(&(&gens[2] * &gens[2])));
    }
}

#[test]
fn orders_of_the_small_extensions() {
    let ext = toroidal_extension(&ToroidalParams::new(1, 2).unwrap()).unwrap();
    let gens = ext.generators();
    let all = brute_elements(&gens, 5000).unwrap();
    assert_eq!(all.len(), 480);
    assert_eq!(
        PermGroup::new(&gens).unwrap().order(),
        BigUint::from(480u32)
    );
}
