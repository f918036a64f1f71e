//! Brute-force oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::{HashSet, VecDeque};

use chiral_core::{GeneratorWord, Letter, Permutation, Sign};
use rand::Rng;

/// Every element of `⟨gens⟩`, by breadth-first closure. Gives up (returns
/// `None`) past `limit` elements.
pub fn brute_elements(gens: &[Permutation], limit: usize) -> Option<HashSet<Permutation>> {
    let degree = gens.first()?.degree();
    let id = Permutation::identity(degree);
    let mut seen = HashSet::from([id.clone()]);
    let mut queue = VecDeque::from([id]);
    while let Some(g) = queue.pop_front() {
        for s in gens {
            let h = &g * s;
            if seen.insert(h.clone()) {
                if seen.len() > limit {
                    return None;
                }
                queue.push_back(h);
            }
        }
    }
    Some(seen)
}

pub fn cyc(degree: usize, text: &str) -> Permutation {
    Permutation::parse_cycles(text, Some(degree)).unwrap()
}

pub fn random_perm<R: Rng>(rng: &mut R, degree: usize) -> Permutation {
    use rand::seq::SliceRandom;
    let mut images: Vec<usize> = (1..=degree).collect();
    images.shuffle(rng);
    Permutation::from_images(&images).unwrap()
}

pub fn random_word<R: Rng>(rng: &mut R, max_index: usize, max_len: usize) -> GeneratorWord {
    let len = rng.gen_range(0..=max_len);
    GeneratorWord::new(
        (0..len)
            .map(|_| Letter {
                generator: rng.gen_range(1..=max_index),
                sign: if rng.gen_bool(0.5) {
                    Sign::Pos
                } else {
                    Sign::Neg
                },
            })
            .collect(),
    )
}

pub fn symmetric(n: usize) -> Vec<Permutation> {
    let cycle: Vec<usize> = (1..=n).collect();
    vec![
        Permutation::from_cycles(n, &[vec![1, 2]]).unwrap(),
        Permutation::from_cycles(n, &[cycle]).unwrap(),
    ]
}

pub fn alternating(n: usize) -> Vec<Permutation> {
    (3..=n)
        .map(|k| Permutation::from_cycles(n, &[vec![1, 2, k]]).unwrap())
        .collect()
}

pub fn dihedral(n: usize) -> Vec<Permutation> {
    let rot: Vec<usize> = (1..=n).collect();
    let refl: Vec<Vec<usize>> = (1..=n / 2)
        .map(|i| vec![i, n + 1 - i])
        .filter(|c| c[0] != c[1])
        .collect();
    vec![
        Permutation::from_cycles(n, &[rot]).unwrap(),
        Permutation::from_cycles(n, &refl).unwrap(),
    ]
}

use chiral_core::{ExtendedGpr, GprGraph};

/// Matching with the partners of two first-copy vertices exchanged.
pub fn swap_pair(ext: &ExtendedGpr, u: usize, v: usize) -> ExtendedGpr {
    let tau = ext.tau();
    let (pu, pv) = (tau.apply(u), tau.apply(v));
    let pairs: Vec<(usize, usize)> = (1..=tau.degree() / 2)
        .map(|w| {
            let p = if w == u {
                pv
            } else if w == v {
                pu
            } else {
                tau.apply(w)
            };
            (w, p)
        })
        .collect();
    rematch(ext, &pairs)
}

/// Every vertex matched to its own copy.
pub fn identity_matching(ext: &ExtendedGpr) -> ExtendedGpr {
    let half = ext.graph().vertex_count() / 2;
    let pairs: Vec<(usize, usize)> = (1..=half).map(|w| (w, half + w)).collect();
    rematch(ext, &pairs)
}

/// Breaks the relations by conjugating the label-1 arrows of the second copy
/// by a transposition of two of its vertices.
pub fn break_relation(ext: &ExtendedGpr, a: usize, b: usize) -> ExtendedGpr {
    let g = ext.graph();
    let half = g.vertex_count() / 2;
    let swap = Permutation::from_cycles(g.vertex_count(), &[vec![half + a, half + b]]).unwrap();
    let mut arrows = g.arrows().to_vec();
    arrows[0] = arrows[0].conjugate_by(&swap);
    let graph = GprGraph::new(arrows, g.matching().cloned(), g.base()).unwrap();
    ExtendedGpr::from_parts(graph, ext.facet().clone()).unwrap()
}

fn rematch(ext: &ExtendedGpr, pairs: &[(usize, usize)]) -> ExtendedGpr {
    let g = ext.graph();
    let tau = Permutation::involution_from_pairs(g.vertex_count(), pairs).unwrap();
    ExtendedGpr::from_parts(g.with_matching(tau).unwrap(), ext.facet().clone()).unwrap()
}
