//! Checks that a graph describes the rotation group of a chiral polytope.
//!
//! Relations are verified as permutation identities on every vertex. The
//! intersection property of the extended group is decided through four
//! graph conditions on an [`ExtendedGpr`] rather than through subgroup
//! intersections.

use std::collections::HashMap;

use serde::Serialize;

use crate::extension::ExtendedGpr;
use crate::gpr::GprGraph;
use crate::group::{extends_to_automorphism, GroupError, PermGroup};
use crate::perm::{enantiomorphic_images, Permutation};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RelationCheck {
    pub id: String,
    pub holds: bool,
    /// A vertex where the two sides differ.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<usize>,
}

fn identity_check(id: String, p: &Permutation) -> RelationCheck {
    let witness = p.smallest_moved_point();
    RelationCheck {
        id,
        holds: witness.is_none(),
        witness,
    }
}

fn equality_check(id: String, lhs: &Permutation, rhs: &Permutation) -> RelationCheck {
    identity_check(id, &(lhs * &rhs.inverse()))
}

fn product(gens: &[Permutation], from: usize, to: usize) -> Permutation {
    gens[from - 1..to]
        .iter()
        .skip(1)
        .fold(gens[from - 1].clone(), |acc, g| &acc * g)
}

fn span_name(i: usize, j: usize) -> String {
    (i..=j).map(|k| format!("s{k}")).collect::<String>()
}

/// `(σ_i ⋯ σ_j)² = ε` for all `1 ≤ i < j ≤ r`.
pub fn check_product_relations(gens: &[Permutation]) -> Vec<RelationCheck> {
    let r = gens.len();
    let mut out = Vec::new();
    for i in 1..=r {
        for j in i + 1..=r {
            let p = product(gens, i, j);
            out.push(identity_check(
                format!("({})^2", span_name(i, j)),
                &(&p * &p),
            ));
        }
    }
    out
}

/// The half-turn family at the top index `r`, with `t = σ_{r−1}σ_r`:
/// `t² = ε`, `tσ_{r−2}t = σ_{r−2}⁻¹`, `tσ_{r−3}t = σ_{r−3}σ_{r−2}²`, and
/// `t` commuting with `σ_j` for `j < r−3`.
pub fn check_half_turn_relations(gens: &[Permutation]) -> Vec<RelationCheck> {
    let r = gens.len();
    if r < 2 {
        return Vec::new();
    }
    let t = &gens[r - 2] * &gens[r - 1];
    let tn = format!("t{}{}", r - 1, r);
    let mut out = vec![identity_check(format!("{tn}^2"), &(&t * &t))];
    for j in (1..=r.saturating_sub(2)).rev() {
        let conj = &(&t * &gens[j - 1]) * &t;
        let (id, rhs) = if j == r - 2 {
            (format!("{tn} s{j} {tn} = s{j}^-1"), gens[j - 1].inverse())
        } else if j == r - 3 {
            let s = &gens[j];
            (
                format!("{tn} s{j} {tn} = s{j} s{}^2", j + 1),
                &(&gens[j - 1] * s) * s,
            )
        } else {
            (format!("{tn} s{j} {tn} = s{j}"), gens[j - 1].clone())
        };
        out.push(equality_check(id, &conj, &rhs));
    }
    out
}

/// Both relation families.
pub fn check_rotation_relations(gens: &[Permutation]) -> Vec<RelationCheck> {
    let mut out = check_product_relations(gens);
    out.extend(check_half_turn_relations(gens));
    out
}

/// Orders of the generators. Panics if an order exceeds `u64`.
pub fn schlafli_symbol(gens: &[Permutation]) -> Vec<u64> {
    gens.iter()
        .map(|g| u64::try_from(g.order()).expect("Schläfli entry fits in u64"))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Chirality {
    Chiral,
    OrientablyRegular,
}

/// Orientably regular exactly when the enantiomorphic assignment at the top
/// generator extends to an automorphism of the group.
pub fn chirality_test(gens: &[Permutation]) -> Result<Chirality, GroupError> {
    let images = enantiomorphic_images(gens, gens.len()).map_err(|_| GroupError::Empty)?;
    Ok(if extends_to_automorphism(gens, &images)? {
        Chirality::OrientablyRegular
    } else {
        Chirality::Chiral
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// A vertex where a relation or an isomorphism fails (or, for a passing
    /// condition (d), a vertex of the good intersection).
    Vertex {
        vertex: usize,
    },
    /// The offending relation `(σ_k ⋯ σ_{r+1})²` at a vertex.
    Relation {
        k: usize,
        vertex: usize,
    },
    /// A nontrivial power of the top generator inside the facet group.
    Power {
        m: u64,
    },
    /// A whole component that does not match the facet graph.
    Component {
        component: usize,
        least_vertex: usize,
    },
    /// Condition (d) fails for this `k`.
    Level {
        k: usize,
    },
    Message {
        text: String,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConditionResult {
    pub passed: bool,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub witnesses: Vec<Witness>,
}

impl ConditionResult {
    fn pass() -> Self {
        ConditionResult {
            passed: true,
            witnesses: Vec::new(),
        }
    }

    fn fail(w: Witness) -> Self {
        ConditionResult {
            passed: false,
            witnesses: vec![w],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExtensionConditions {
    pub a: ConditionResult,
    pub b: ConditionResult,
    pub c: ConditionResult,
    pub d: ConditionResult,
}

impl ExtensionConditions {
    pub fn all_passed(&self) -> bool {
        self.a.passed && self.b.passed && self.c.passed && self.d.passed
    }
}

/// (a) every `(1,r)`-component is isomorphic to the facet Cayley graph;
/// (b) `(σ_k⋯σ_{r+1})²` acts trivially for `k = 1..r`;
/// (c) no nontrivial power of `σ_{r+1}` lies in `⟨σ₁,…,σ_r⟩`;
/// (d) for each `k = 2..r` some `(1,r)`-component meets some
///     `(k,r+1)`-component in exactly one `(k,r)`-component.
pub fn check_extension_conditions(
    ext: &ExtendedGpr,
    facet: &GprGraph,
) -> Result<ExtensionConditions, GroupError> {
    let r = ext.graph().label_count();
    let gens = ext.generators();
    let sg = ext.sigma_graph();
    let all_facet: Vec<usize> = (1..=r).collect();
    let facet_parts = sg.components(&all_facet).expect("labels exist");

    let a = if facet.label_count() != r {
        ConditionResult::fail(Witness::Message {
            text: format!(
                "facet graph has {} labels, extension has {r}",
                facet.label_count()
            ),
        })
    } else if let Err(e) = facet.check_regular() {
        ConditionResult::fail(Witness::Message {
            text: format!("facet graph: {e}"),
        })
    } else {
        let bad: Vec<Witness> = facet_parts
            .classes
            .iter()
            .enumerate()
            .filter(|(_, c)| {
                ext.graph()
                    .colored_component_isomorphic(c[0], facet, facet.base())
                    .is_none()
            })
            .map(|(i, c)| Witness::Component {
                component: i + 1,
                least_vertex: c[0],
            })
            .collect();
        if bad.is_empty() {
            ConditionResult::pass()
        } else {
            ConditionResult {
                passed: false,
                witnesses: bad,
            }
        }
    };

    let mut b = ConditionResult::pass();
    for k in 1..=r {
        let p = product(&gens, k, r + 1);
        if let Some(vertex) = (&p * &p).smallest_moved_point() {
            b.passed = false;
            b.witnesses.push(Witness::Relation { k, vertex });
        }
    }

    let lower = PermGroup::new(&gens[..r])?;
    let top = &gens[r];
    let mut c = ConditionResult::pass();
    let mut power = top.clone();
    let mut m = 1u64;
    while !power.is_identity() {
        if lower.contains(&power) {
            c = ConditionResult::fail(Witness::Power { m });
            break;
        }
        power = &power * top;
        m += 1;
    }

    let mut d = ConditionResult::pass();
    for k in 2..=r {
        let upper: Vec<usize> = (k..=r + 1).collect();
        let middle: Vec<usize> = (k..=r).collect();
        let dk = sg.components(&upper).expect("labels exist");
        let mid = sg.components(&middle).expect("labels exist");
        let mut meet: HashMap<(usize, usize), usize> = HashMap::new();
        for v in 1..=sg.vertex_count() {
            *meet
                .entry((facet_parts.class_of(v), dk.class_of(v)))
                .or_default() += 1;
        }
        let good = (1..=sg.vertex_count()).find(|&v| {
            meet[&(facet_parts.class_of(v), dk.class_of(v))] == mid.class_containing(v).len()
        });
        match good {
            Some(vertex) => d.witnesses.push(Witness::Vertex { vertex }),
            None => {
                d.passed = false;
                d.witnesses.push(Witness::Level { k });
            }
        }
    }

    Ok(ExtensionConditions { a, b, c, d })
}

/// Every check run on an extended graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub relation_checks: Vec<RelationCheck>,
    /// The direct relations `(σ_k⋯σ_{r+1})²` and the half-turn family
    /// agree (both hold or both fail).
    pub half_turn_agreement: bool,
    pub conditions: ExtensionConditions,
    pub facet_chirality: Chirality,
    pub schlafli: Vec<u64>,
    /// Decided only when the relations and all four conditions hold, since
    /// the test presupposes a polytopal rotation group.
    pub chirality: Option<Chirality>,
    pub overall: bool,
}

impl VerificationReport {
    /// Names of the failing items.
    pub fn failures(&self) -> Vec<String> {
        let mut out: Vec<String> = self
            .relation_checks
            .iter()
            .filter(|r| !r.holds)
            .map(|r| format!("relation {}", r.id))
            .collect();
        for (name, c) in [
            ("a", &self.conditions.a),
            ("b", &self.conditions.b),
            ("c", &self.conditions.c),
            ("d", &self.conditions.d),
        ] {
            if !c.passed {
                out.push(format!("condition ({name})"));
            }
        }
        if self.facet_chirality != Chirality::Chiral {
            out.push("facet not chiral".into());
        }
        if self.chirality == Some(Chirality::OrientablyRegular) {
            out.push("extension not chiral".into());
        }
        out
    }
}

/// Runs the relation checks, the four graph conditions, and the chirality
/// tests on an extended graph against its facet Cayley graph.
pub fn verify_extension(
    ext: &ExtendedGpr,
    facet: &GprGraph,
) -> Result<VerificationReport, GroupError> {
    let gens = ext.generators();
    let r = gens.len() - 1;
    let relation_checks = check_rotation_relations(&gens);
    let direct_ok = relation_checks
        .iter()
        .take(r * (r + 1) / 2)
        .filter(|c| c.id.ends_with(&format!("s{})^2", r + 1)))
        .all(|c| c.holds);
    let half_turn_ok = check_half_turn_relations(&gens).iter().all(|c| c.holds);
    let lower_ok = check_product_relations(&gens[..r]).iter().all(|c| c.holds);
    // The equivalence presupposes the relations among σ₁..σ_r.
    let half_turn_agreement = !lower_ok || direct_ok == half_turn_ok;
    let conditions = check_extension_conditions(ext, facet)?;
    let facet_chirality = chirality_test(facet.arrows())?;
    let polytopal =
        relation_checks.iter().all(|c| c.holds) && half_turn_agreement && conditions.all_passed();
    let chirality = if polytopal {
        Some(chirality_test(&gens)?)
    } else {
        None
    };
    let overall =
        polytopal && facet_chirality == Chirality::Chiral && chirality == Some(Chirality::Chiral);
    Ok(VerificationReport {
        relation_checks,
        half_turn_agreement,
        conditions,
        facet_chirality,
        schlafli: schlafli_symbol(&gens),
        chirality,
        overall,
    })
}
