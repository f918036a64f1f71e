//! Extension of a chiral polytope with regular facets by one rank.
//!
//! Two copies of the Cayley GPR graph of `K` (labels `1..r`, `r = d−1`)
//! are joined by a perfect matching `τ`. The matching is seeded on the
//! `σ_r`-orbit of the base vertex (`v₁σ_r^k ↔ v₁′σ_r^{l−k}`) and on one
//! representative of every other `(1,r−1)`-component (`v ↔ v′`), then
//! propagated through each component: when `v` is matched to `w′`, `vα` is
//! matched to `w′ᾱ`, with `ᾱ` the enantiomorphic word taken at `r−1`. The new
//! top generator is `σ_{r+1} = σ_r⁻¹τ`.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::Value;
use thiserror::Error;

use crate::gpr::{GprError, GprFile, GprGraph};
use crate::group::{extends_to_automorphism, orbit, GroupError};
use crate::perm::{enantiomorphic_images, GeneratorWord, Letter, Permutation, WordError};
use crate::verify::{check_product_relations, RelationCheck};

#[derive(Debug, Error)]
pub enum ExtensionError {
    #[error("input must have at least two arrow labels, found {0}")]
    RankTooSmall(usize),
    #[error("input not a Cayley GPR graph: {0}")]
    NotCayley(GprError),
    #[error("precondition failed: {item}")]
    Precondition {
        item: PreconditionItem,
        report: Box<PreconditionReport>,
    },
    #[error("internal consistency failure: {0}")]
    Internal(String),
    #[error("extension file: {0}")]
    File(String),
    #[error(transparent)]
    Gpr(#[from] GprError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Word(#[from] WordError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum PreconditionItem {
    /// The rotation group must not admit the enantiomorphic automorphism.
    InputNotChiral,
    /// The facet rotation group must admit it.
    FacetsNotRegular,
    /// `(σ_i⋯σ_j)² = ε` must hold.
    RelationsViolated,
}

impl std::fmt::Display for PreconditionItem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            PreconditionItem::InputNotChiral => "input not chiral",
            PreconditionItem::FacetsNotRegular => "facets not regular",
            PreconditionItem::RelationsViolated => "rotation relations violated",
        })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PreconditionReport {
    pub chiral: bool,
    pub facets_regular: bool,
    pub relations: Vec<RelationCheck>,
}

impl PreconditionReport {
    pub fn passed(&self) -> bool {
        self.chiral && self.facets_regular && self.relations.iter().all(|r| r.holds)
    }

    fn first_failure(&self) -> Option<PreconditionItem> {
        if !self.relations.iter().all(|r| r.holds) {
            Some(PreconditionItem::RelationsViolated)
        } else if !self.chiral {
            Some(PreconditionItem::InputNotChiral)
        } else if !self.facets_regular {
            Some(PreconditionItem::FacetsNotRegular)
        } else {
            None
        }
    }
}

/// How a `(1,r−1)`-component received its first matched vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum SeedRule {
    /// `v₁σ_r^k ↔ v₁′σ_r^{l−k}`.
    BaseOrbit { power: usize },
    /// Least vertex of `A ∩ E_k` matched to its own copy.
    Representative { level: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LogEntry {
    pub component: usize,
    pub seed: usize,
    #[serde(flatten)]
    pub rule: SeedRule,
    pub vertex: usize,
    /// Partner in the second copy, as a first-copy vertex number.
    pub partner: usize,
    pub word: String,
}

/// The extended graph: two copies of `Cay(K)` joined by `τ`.
#[derive(Debug, Clone)]
pub struct ExtendedGpr {
    graph: GprGraph,
    sigma_d: Permutation,
    facet: GprGraph,
    log: Vec<LogEntry>,
}

impl ExtendedGpr {
    /// Wraps an already matched graph (for instance one read from disk).
    pub fn from_parts(graph: GprGraph, facet: GprGraph) -> Result<Self, ExtensionError> {
        let tau = graph
            .matching()
            .ok_or_else(|| ExtensionError::File("graph has no matching".into()))?
            .clone();
        let top = graph.arrow(graph.label_count());
        let sigma_d = &top.inverse() * &tau;
        Ok(ExtendedGpr {
            graph,
            sigma_d,
            facet,
            log: Vec::new(),
        })
    }

    /// Reads an extension file, checking `sigma_d` against `σ_r⁻¹τ` when
    /// present.
    pub fn from_json(text: &str, facet: GprGraph) -> Result<Self, ExtensionError> {
        let file: GprFile =
            serde_json::from_str(text).map_err(|e| ExtensionError::File(e.to_string()))?;
        let n = file.vertices;
        let stored = file
            .sigma_d
            .clone()
            .map(|s| s.resolve(Some(n)))
            .transpose()
            .map_err(|e| ExtensionError::File(e.to_string()))?;
        let ext = ExtendedGpr::from_parts(file.into_graph()?, facet)?;
        if let Some(s) = stored {
            if s != ext.sigma_d {
                return Err(ExtensionError::File(
                    "sigma_d differs from the inverse top arrow times the matching".into(),
                ));
            }
        }
        Ok(ext)
    }

    pub fn graph(&self) -> &GprGraph {
        &self.graph
    }

    pub fn tau(&self) -> &Permutation {
        self.graph
            .matching()
            .expect("extended graph has a matching")
    }

    pub fn sigma_d(&self) -> &Permutation {
        &self.sigma_d
    }

    pub fn facet(&self) -> &GprGraph {
        &self.facet
    }

    pub fn construction_log(&self) -> &[LogEntry] {
        &self.log
    }

    /// `[σ₁, …, σ_r, σ_{r+1}]` on the doubled vertex set.
    pub fn generators(&self) -> Vec<Permutation> {
        let mut gens = self.graph.arrows().to_vec();
        gens.push(self.sigma_d.clone());
        gens
    }

    /// The extended graph with `σ_{r+1}` as ordinary arrows instead of the
    /// matching.
    pub fn sigma_graph(&self) -> GprGraph {
        GprGraph::new(self.generators(), None, self.graph.base())
            .expect("generators share a degree")
    }

    pub fn to_json_value(&self) -> Value {
        let mut v = self.graph.to_json_value();
        v["sigma_d"] = serde_json::json!(self.sigma_d.images());
        v
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_json_value()).expect("extension JSON serializes")
    }

    /// Re-derives partners along random walks inside the `(1,r−1)`-components
    /// (so generally through words other than the logged ones) and returns
    /// the vertices where the two derivations disagree.
    pub fn audit_propagation(&self, walks: usize, seed: u64) -> Vec<usize> {
        let r = self.facet.label_count();
        let n = self.facet.vertex_count();
        let tau = self.tau();
        let sub = &self.facet.arrows()[..r - 1];
        let inverses: Vec<Permutation> = sub.iter().map(Permutation::inverse).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let letters: Vec<Letter> = (1..r)
            .flat_map(|k| [Letter::pos(k), Letter::neg(k)])
            .collect();
        let seeds: Vec<usize> = self
            .log
            .iter()
            .filter(|e| e.vertex == e.seed)
            .map(|e| e.seed)
            .collect();
        let mut failures = BTreeSet::new();
        if seeds.is_empty() {
            return Vec::new();
        }
        for _ in 0..walks {
            let start = *seeds.choose(&mut rng).unwrap();
            let start_partner = tau.apply(start) - n;
            let len = rng.gen_range(0..=2 * n.min(64));
            let mut word = GeneratorWord::empty();
            let mut v = start;
            for _ in 0..len {
                let l = *letters.choose(&mut rng).unwrap();
                v = match l.sign {
                    crate::perm::Sign::Pos => sub[l.generator - 1].apply(v),
                    crate::perm::Sign::Neg => inverses[l.generator - 1].apply(v),
                };
                word.push(l);
            }
            let bar = word.bar(r - 1).expect("letters below the facet top");
            let derived = bar
                .evaluate(sub)
                .expect("facet generators")
                .apply(start_partner);
            if tau.apply(v) != n + derived {
                failures.insert(v);
            }
        }
        failures.into_iter().collect()
    }
}

/// Checks that `cay` can be extended: its group is chiral, its facet group
/// is regular, and the rotation relations hold.
pub fn verify_extension_preconditions(
    cay: &GprGraph,
) -> Result<PreconditionReport, ExtensionError> {
    let r = cay.label_count();
    if r < 2 {
        return Err(ExtensionError::RankTooSmall(r));
    }
    cay.check_regular().map_err(ExtensionError::NotCayley)?;
    let gens = cay.arrows();
    let relations = check_product_relations(gens);
    let chiral = !extends_to_automorphism(gens, &enantiomorphic_images(gens, r)?)?;
    let facet = &gens[..r - 1];
    let facets_regular = extends_to_automorphism(facet, &enantiomorphic_images(facet, r - 1)?)?;
    let report = PreconditionReport {
        chiral,
        facets_regular,
        relations,
    };
    match report.first_failure() {
        Some(item) => Err(ExtensionError::Precondition {
            item,
            report: Box::new(report),
        }),
        None => Ok(report),
    }
}

/// `E_k` for `k = 1..=r`: the orbit of the base vertex under
/// `⟨σ_k, …, σ_r⟩` (so `E_r` is its `σ_r`-orbit).
pub fn base_orbit_chain(cay: &GprGraph) -> Vec<BTreeSet<usize>> {
    let r = cay.label_count();
    (1..=r)
        .map(|k| orbit(&cay.arrows()[k - 1..], cay.base()))
        .collect()
}

/// Builds `τ` on `2N` points together with the construction log.
pub fn build_matching(cay: &GprGraph) -> Result<(Permutation, Vec<LogEntry>), ExtensionError> {
    let r = cay.label_count();
    if r < 2 {
        return Err(ExtensionError::RankTooSmall(r));
    }
    let n = cay.vertex_count();
    let v1 = cay.base();
    let top = cay.arrow(r);
    let l = usize::try_from(top.order()).map_err(|_| ExtensionError::Internal("order".into()))?;

    // v₁σ_r^k for k = 0..l
    let mut power_of = vec![None; n + 1];
    let mut v = v1;
    for k in 0..l {
        power_of[v] = Some(k);
        v = top.apply(v);
    }
    let power_vertex = |k: usize| top.pow(k as i64).apply(v1);

    let chain = base_orbit_chain(cay);
    let facet_labels: Vec<usize> = (1..r).collect();
    let comps = cay.components(&facet_labels)?;
    let facet_gens = &cay.arrows()[..r - 1];

    let mut partner: Vec<Option<usize>> = vec![None; n + 1];
    let mut log = Vec::with_capacity(n);
    for (ci, class) in comps.classes.iter().enumerate() {
        let on_orbit: Vec<(usize, usize)> = class
            .iter()
            .filter_map(|&u| power_of[u].map(|k| (u, k)))
            .collect();
        let (seed, seed_partner, rule) = match on_orbit.as_slice() {
            [(u, k)] => (
                *u,
                power_vertex((l - k) % l),
                SeedRule::BaseOrbit { power: *k },
            ),
            [] => {
                let level = (1..r)
                    .rev()
                    .find(|&k| class.iter().any(|u| chain[k - 1].contains(u)))
                    .ok_or_else(|| {
                        ExtensionError::Internal(format!("component {} meets no E_k", ci + 1))
                    })?;
                let rep = *class.iter().find(|u| chain[level - 1].contains(u)).unwrap();
                (rep, rep, SeedRule::Representative { level })
            }
            _ => {
                return Err(ExtensionError::Internal(format!(
                    "component {} holds {} vertices of the base sigma orbit",
                    ci + 1,
                    on_orbit.len()
                )))
            }
        };
        let words = cay.word_tree(seed, &facet_labels)?;
        for &u in class {
            let word = words[u - 1]
                .as_ref()
                .ok_or_else(|| ExtensionError::Internal(format!("vertex {u} not reached")))?;
            let image = word.bar(r - 1)?.evaluate(facet_gens)?.apply(seed_partner);
            partner[u] = Some(image);
            log.push(LogEntry {
                component: ci + 1,
                seed,
                rule,
                vertex: u,
                partner: image,
                word: word.to_string(),
            });
        }
    }
    let mut pairs = Vec::with_capacity(n);
    let mut hit = vec![false; n + 1];
    for (u, slot) in partner.iter().enumerate().skip(1) {
        let p = slot.ok_or_else(|| ExtensionError::Internal(format!("{u} unmatched")))?;
        if std::mem::replace(&mut hit[p], true) {
            return Err(ExtensionError::Internal(format!(
                "vertex {p}' matched twice"
            )));
        }
        pairs.push((u, n + p));
    }
    let tau = Permutation::involution_from_pairs(2 * n, &pairs)
        .map_err(|e| ExtensionError::Internal(e.to_string()))?;
    Ok((tau, log))
}

/// Verifies the preconditions, then builds the extended graph.
pub fn extend(cay: &GprGraph) -> Result<ExtendedGpr, ExtensionError> {
    verify_extension_preconditions(cay)?;
    let (tau, log) = build_matching(cay)?;
    let graph = cay.doubled().with_matching(tau)?;
    let mut ext = ExtendedGpr::from_parts(graph, cay.clone())?;
    ext.log = log;
    Ok(ext)
}

/// Shortest word in the given labels moving `from` to `to`; ties go to the
/// lexicographically least word with `+1` before `−1`.
pub fn shortest_word(
    g: &GprGraph,
    from: usize,
    to: usize,
    labels: &[usize],
) -> Result<GeneratorWord, GprError> {
    if to == 0 || to > g.vertex_count() {
        return Err(GprError::BadVertex(to));
    }
    g.word_tree(from, labels)?[to - 1]
        .clone()
        .ok_or(GprError::Unreachable { from, to })
}
