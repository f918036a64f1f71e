//! GPR graphs: a vertex set `{1..N}`, one arrow permutation per label
//! (`u → u·σ_k`), and optionally a matching stored as a fixed-point-free
//! involution.
//!
//! When a matching joins two copies of a graph, vertex `i′` of the second
//! copy is numbered `N/2 + i`; primes appear only in DOT output.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt::Write as _;

use num_bigint::BigUint;
use petgraph::unionfind::UnionFind;
use serde::Deserialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::group::{orbit, GroupError, PermGroup};
use crate::perm::{GeneratorWord, Letter, PermError, PermRepr, Permutation, Sign};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GprError {
    #[error("graph needs at least one arrow label")]
    NoLabels,
    #[error("{what} has degree {found}, expected {expected}")]
    Degree {
        what: String,
        found: usize,
        expected: usize,
    },
    #[error("matching is not an involution without fixed points (vertex {0})")]
    BadMatching(usize),
    #[error("base vertex {0} out of range")]
    BadBase(usize),
    #[error("unknown label {0}")]
    UnknownLabel(usize),
    #[error("vertex {0} out of range")]
    BadVertex(usize),
    #[error("action not regular: {0}")]
    NotRegular(String),
    #[error("vertex {to} unreachable from {from}")]
    Unreachable { from: usize, to: usize },
    #[error("malformed JSON: {0}")]
    Json(String),
    #[error(transparent)]
    Perm(#[from] PermError),
    #[error(transparent)]
    Group(#[from] GroupError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GprGraph {
    arrows: Vec<Permutation>,
    matching: Option<Permutation>,
    base: usize,
}

/// Connected components under a set of labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentPartition {
    pub labels: Vec<usize>,
    /// Sorted vertex lists, ordered by least vertex.
    pub classes: Vec<Vec<usize>>,
    class_of: Vec<usize>,
}

impl ComponentPartition {
    /// Index into `classes` of the component holding `v`.
    pub fn class_of(&self, v: usize) -> usize {
        self.class_of[v - 1]
    }

    pub fn class_containing(&self, v: usize) -> &[usize] {
        &self.classes[self.class_of(v)]
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }
}

impl GprGraph {
    pub fn new(
        arrows: Vec<Permutation>,
        matching: Option<Permutation>,
        base: usize,
    ) -> Result<Self, GprError> {
        let first = arrows.first().ok_or(GprError::NoLabels)?;
        let n = first.degree();
        for (k, a) in arrows.iter().enumerate() {
            if a.degree() != n {
                return Err(GprError::Degree {
                    what: format!("arrow {}", k + 1),
                    found: a.degree(),
                    expected: n,
                });
            }
        }
        if let Some(m) = &matching {
            if m.degree() != n {
                return Err(GprError::Degree {
                    what: "matching".into(),
                    found: m.degree(),
                    expected: n,
                });
            }
            for v in 1..=n {
                let w = m.apply(v);
                if w == v || m.apply(w) != v {
                    return Err(GprError::BadMatching(v));
                }
            }
        }
        if base == 0 || base > n {
            return Err(GprError::BadBase(base));
        }
        Ok(GprGraph {
            arrows,
            matching,
            base,
        })
    }

    /// The Cayley GPR graph of a group acting regularly on `{1..N}`, with
    /// base vertex 1.
    pub fn cayley(gens: Vec<Permutation>) -> Result<Self, GprError> {
        let g = GprGraph::new(gens, None, 1)?;
        g.check_regular()?;
        Ok(g)
    }

    /// Transitive with group order equal to the vertex count.
    pub fn check_regular(&self) -> Result<(), GprError> {
        let n = self.vertex_count();
        let reach = orbit(&self.arrows, 1).len();
        if reach != n {
            return Err(GprError::NotRegular(format!(
                "orbit of 1 has {reach} of {n} vertices"
            )));
        }
        let order = self.group()?.order();
        if order != BigUint::from(n) {
            return Err(GprError::NotRegular(format!(
                "group order {order} differs from {n} vertices"
            )));
        }
        Ok(())
    }

    pub fn vertex_count(&self) -> usize {
        self.arrows[0].degree()
    }

    pub fn label_count(&self) -> usize {
        self.arrows.len()
    }

    /// Arrow permutation of a 1-based label.
    pub fn arrow(&self, label: usize) -> &Permutation {
        &self.arrows[label - 1]
    }

    pub fn arrows(&self) -> &[Permutation] {
        &self.arrows
    }

    pub fn matching(&self) -> Option<&Permutation> {
        self.matching.as_ref()
    }

    pub fn base(&self) -> usize {
        self.base
    }

    pub fn with_matching(&self, matching: Permutation) -> Result<Self, GprError> {
        GprGraph::new(self.arrows.clone(), Some(matching), self.base)
    }

    pub fn without_matching(&self) -> GprGraph {
        GprGraph {
            arrows: self.arrows.clone(),
            matching: None,
            base: self.base,
        }
    }

    /// Group generated by the arrow permutations.
    pub fn group(&self) -> Result<PermGroup, GroupError> {
        PermGroup::new(&self.arrows)
    }

    /// Two disjoint copies, the second shifted by `N`; no matching.
    pub fn doubled(&self) -> GprGraph {
        GprGraph {
            arrows: self.arrows.iter().map(|a| a.direct_sum(a)).collect(),
            matching: None,
            base: self.base,
        }
    }

    fn label_perm(&self, label: usize) -> Result<&Permutation, GprError> {
        if label >= 1 && label <= self.label_count() {
            Ok(&self.arrows[label - 1])
        } else if label == self.label_count() + 1 {
            self.matching.as_ref().ok_or(GprError::UnknownLabel(label))
        } else {
            Err(GprError::UnknownLabel(label))
        }
    }

    /// Components under the given labels. Label `label_count() + 1`
    /// stands for the matching.
    pub fn components(&self, labels: &[usize]) -> Result<ComponentPartition, GprError> {
        let perms = labels
            .iter()
            .map(|&l| self.label_perm(l))
            .collect::<Result<Vec<_>, _>>()?;
        let n = self.vertex_count();
        let mut uf = UnionFind::<usize>::new(n);
        for p in perms {
            for (v, &w) in p.table().iter().enumerate() {
                uf.union(v, w as usize);
            }
        }
        let mut by_root: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for v in 0..n {
            by_root.entry(uf.find(v)).or_default().push(v + 1);
        }
        let mut classes: Vec<Vec<usize>> = by_root.into_values().collect();
        classes.sort_by_key(|c| c[0]);
        let mut class_of = vec![0; n];
        for (ci, c) in classes.iter().enumerate() {
            for &v in c {
                class_of[v - 1] = ci;
            }
        }
        let mut labels = labels.to_vec();
        labels.sort_unstable();
        labels.dedup();
        Ok(ComponentPartition {
            labels,
            classes,
            class_of,
        })
    }

    /// The label-preserving isomorphism from the component of `v1` (arrows
    /// only) onto the component of `v2` in `other` sending `v1 ↦ v2`, found by
    /// propagation. `None` when propagation conflicts or the components
    /// differ.
    pub fn colored_component_isomorphic(
        &self,
        v1: usize,
        other: &GprGraph,
        v2: usize,
    ) -> Option<BTreeMap<usize, usize>> {
        if self.label_count() != other.label_count()
            || v1 == 0
            || v1 > self.vertex_count()
            || v2 == 0
            || v2 > other.vertex_count()
        {
            return None;
        }
        let inv1: Vec<Permutation> = self.arrows.iter().map(Permutation::inverse).collect();
        let inv2: Vec<Permutation> = other.arrows.iter().map(Permutation::inverse).collect();
        let mut map = BTreeMap::from([(v1, v2)]);
        let mut used = BTreeSet::from([v2]);
        let mut queue = VecDeque::from([v1]);
        while let Some(u) = queue.pop_front() {
            let image = map[&u];
            for k in 0..self.label_count() {
                let steps = [
                    (self.arrows[k].apply(u), other.arrows[k].apply(image)),
                    (inv1[k].apply(u), inv2[k].apply(image)),
                ];
                for (a, b) in steps {
                    match map.get(&a) {
                        Some(&existing) if existing != b => return None,
                        Some(_) => {}
                        None => {
                            if !used.insert(b) {
                                return None;
                            }
                            map.insert(a, b);
                            queue.push_back(a);
                        }
                    }
                }
            }
        }
        let target_size = orbit(&other.arrows, v2).len();
        (map.len() == target_size).then_some(map)
    }

    /// Breadth-first words from `from` to every vertex reachable under
    /// `labels`. Letters are tried in (label, `+1` before `−1`) order, so
    /// each word is the lexicographically least among the shortest ones.
    pub fn word_tree(
        &self,
        from: usize,
        labels: &[usize],
    ) -> Result<Vec<Option<GeneratorWord>>, GprError> {
        let n = self.vertex_count();
        if from == 0 || from > n {
            return Err(GprError::BadVertex(from));
        }
        let mut letters: Vec<Letter> = Vec::new();
        let mut sorted = labels.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        for &l in &sorted {
            if l == 0 || l > self.label_count() {
                return Err(GprError::UnknownLabel(l));
            }
            letters.push(Letter::pos(l));
            letters.push(Letter::neg(l));
        }
        let inverses: Vec<Permutation> = self.arrows.iter().map(Permutation::inverse).collect();
        let mut words: Vec<Option<GeneratorWord>> = vec![None; n];
        words[from - 1] = Some(GeneratorWord::empty());
        let mut queue = VecDeque::from([from]);
        while let Some(u) = queue.pop_front() {
            for &letter in &letters {
                let v = match letter.sign {
                    Sign::Pos => self.arrows[letter.generator - 1].apply(u),
                    Sign::Neg => inverses[letter.generator - 1].apply(u),
                };
                if words[v - 1].is_none() {
                    let mut w = words[u - 1].clone().unwrap();
                    w.push(letter);
                    words[v - 1] = Some(w);
                    queue.push_back(v);
                }
            }
        }
        Ok(words)
    }

    pub fn to_json_value(&self) -> Value {
        let arrows: serde_json::Map<String, Value> = self
            .arrows
            .iter()
            .enumerate()
            .map(|(k, a)| ((k + 1).to_string(), json!(a.images())))
            .collect();
        json!({
            "vertices": self.vertex_count(),
            "labels": self.label_count(),
            "arrows": arrows,
            "matching": self.matching.as_ref().map(|m| m.images()),
            "base": self.base,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_json_value()).expect("graph JSON serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, GprError> {
        let file: GprFile =
            serde_json::from_str(text).map_err(|e| GprError::Json(e.to_string()))?;
        file.into_graph()
    }

    /// Graphviz rendering: labelled arrows (loops omitted) and matching
    /// edges drawn undirected and dashed.
    pub fn export_dot(&self) -> String {
        let n = self.vertex_count();
        let primed = self.matching.is_some() && n.is_multiple_of(2);
        let mut out = String::from("digraph gpr {\n");
        for v in 1..=n {
            if primed && v > n / 2 {
                let _ = writeln!(out, "  {v} [label=\"{}\u{2032}\"];", v - n / 2);
            } else {
                let _ = writeln!(out, "  {v} [label=\"{v}\"];");
            }
        }
        for (k, a) in self.arrows.iter().enumerate() {
            for v in 1..=n {
                let w = a.apply(v);
                if w != v {
                    let _ = writeln!(out, "  {v} -> {w} [label=\"{}\"];", k + 1);
                }
            }
        }
        if let Some(m) = &self.matching {
            for v in 1..=n {
                let w = m.apply(v);
                if v < w {
                    let _ = writeln!(out, "  {v} -> {w} [dir=none, style=dashed];");
                }
            }
        }
        out.push_str("}\n");
        out
    }
}

/// On-disk form shared by every command. Extension files also carry
/// `sigma_d`.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub(crate) struct GprFile {
    pub vertices: usize,
    pub labels: usize,
    pub arrows: BTreeMap<String, PermRepr>,
    #[serde(default)]
    pub matching: Option<PermRepr>,
    pub base: usize,
    #[serde(default)]
    pub sigma_d: Option<PermRepr>,
}

impl GprFile {
    pub(crate) fn into_graph(self) -> Result<GprGraph, GprError> {
        let n = self.vertices;
        if n == 0 {
            return Err(GprError::Json("vertices must be positive".into()));
        }
        if self.labels == 0 || self.arrows.len() != self.labels {
            return Err(GprError::Json(format!(
                "expected {} arrow entries, found {}",
                self.labels,
                self.arrows.len()
            )));
        }
        let arrows = (1..=self.labels)
            .map(|k| {
                let repr = self
                    .arrows
                    .get(&k.to_string())
                    .ok_or_else(|| GprError::Json(format!("missing arrows for label {k}")))?;
                Ok(repr.resolve(Some(n))?)
            })
            .collect::<Result<Vec<_>, GprError>>()?;
        let matching = self.matching.map(|m| m.resolve(Some(n))).transpose()?;
        GprGraph::new(arrows, matching, self.base)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cyc(n: usize, s: &str) -> Permutation {
        Permutation::parse_cycles(s, Some(n)).unwrap()
    }

    fn three_cycle() -> GprGraph {
        GprGraph::cayley(vec![cyc(3, "(1,2,3)")]).unwrap()
    }

    #[test]
    fn cayley_requires_regular_action() {
        assert_eq!(three_cycle().vertex_count(), 3);
        let a4 = GprGraph::cayley(vec![cyc(4, "(1,2,3)"), cyc(4, "(2,3,4)")]);
        assert!(matches!(a4, Err(GprError::NotRegular(_))));
        let intransitive = GprGraph::cayley(vec![cyc(4, "(1,2)")]);
        assert!(matches!(intransitive, Err(GprError::NotRegular(_))));
    }

    #[test]
    fn matching_must_be_fixed_point_free_involution() {
        let arrows = vec![cyc(4, "(1,2)(3,4)")];
        assert!(GprGraph::new(arrows.clone(), Some(cyc(4, "(1,3)(2,4)")), 1).is_ok());
        assert!(matches!(
            GprGraph::new(arrows.clone(), Some(cyc(4, "(1,3)")), 1),
            Err(GprError::BadMatching(2))
        ));
        assert!(matches!(
            GprGraph::new(arrows, Some(cyc(4, "(1,2,3,4)")), 1),
            Err(GprError::BadMatching(1))
        ));
    }

    #[test]
    fn components_and_refinement() {
        let g = GprGraph::new(vec![cyc(6, "(1,2)(3,4)"), cyc(6, "(2,3)")], None, 1).unwrap();
        let all = g.components(&[1, 2]).unwrap();
        assert_eq!(all.classes, vec![vec![1, 2, 3, 4], vec![5], vec![6]]);
        let one = g.components(&[1]).unwrap();
        assert_eq!(one.len(), 4);
        assert_eq!(one.class_containing(4), &[3, 4]);
        assert_eq!(g.components(&[3]), Err(GprError::UnknownLabel(3)));
    }

    #[test]
    fn isomorphism_against_itself_is_identity() {
        let g = three_cycle();
        let map = g.colored_component_isomorphic(2, &g, 2).unwrap();
        assert!(map.iter().all(|(a, b)| a == b));
        assert_eq!(map.len(), 3);
        let shifted = g.colored_component_isomorphic(1, &g, 2).unwrap();
        assert_eq!(shifted[&3], 1);
    }

    #[test]
    fn isomorphism_fails_on_size_or_labels() {
        let g = three_cycle();
        let h = GprGraph::cayley(vec![cyc(4, "(1,2,3,4)")]).unwrap();
        assert!(g.colored_component_isomorphic(1, &h, 1).is_none());
        let two = GprGraph::new(vec![cyc(3, "(1,2,3)"), cyc(3, "(1,2,3)")], None, 1).unwrap();
        assert!(g.colored_component_isomorphic(1, &two, 1).is_none());
    }

    #[test]
    fn word_tree_prefers_positive_letters() {
        let g = GprGraph::cayley(vec![cyc(4, "(1,2,3,4)")]).unwrap();
        let words = g.word_tree(1, &[1]).unwrap();
        assert_eq!(words[2].as_ref().unwrap(), &GeneratorWord::power(1, 2));
        assert_eq!(words[3].as_ref().unwrap(), &GeneratorWord::power(1, -1));
    }

    #[test]
    fn dot_for_three_cycle() {
        let dot = three_cycle().export_dot();
        assert_eq!(dot.matches("[label=\"1\"];").count(), 3 + 1);
        assert_eq!(dot.matches(" -> ").count(), 3);
        assert!(dot.contains("1 -> 2 [label=\"1\"];"));
    }

    #[test]
    fn json_round_trip_and_errors() {
        let g = GprGraph::new(vec![cyc(4, "(1,2)(3,4)")], Some(cyc(4, "(1,3)(2,4)")), 1).unwrap();
        assert_eq!(GprGraph::from_json(&g.to_json()).unwrap(), g);
        let text = r#"{"vertices":3,"labels":1,"arrows":{"1":[1,1,2]},"matching":null,"base":1}"#;
        let err = GprGraph::from_json(text).unwrap_err();
        assert!(err.to_string().contains("not a bijection"), "{err}");
        let cycles =
            r#"{"vertices":3,"labels":1,"arrows":{"1":"(1,2,3)"},"matching":null,"base":1}"#;
        assert_eq!(GprGraph::from_json(cycles).unwrap(), three_cycle());
        assert!(matches!(GprGraph::from_json("{"), Err(GprError::Json(_))));
        let short = r#"{"vertices":4,"labels":1,"arrows":{"1":[2,3,1]},"matching":null,"base":1}"#;
        assert!(GprGraph::from_json(short).is_err());
    }
}
