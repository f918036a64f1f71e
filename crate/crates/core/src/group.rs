//! Permutation groups through a base and strong generating set.
//!
//! The stabilizer chain is built by deterministic Schreier–Sims: base
//! points are always the smallest point moved by the element that forces a
//! new level, and every Schreier generator of every level is sifted, so the
//! resulting order is exact.

use std::collections::{BTreeSet, HashSet, VecDeque};

use num_bigint::BigUint;
use num_traits::One;
use thiserror::Error;

use crate::perm::{PermError, Permutation};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("no generators given and no degree to build the trivial group on")]
    Empty,
    #[error(transparent)]
    Perm(#[from] PermError),
    #[error("element {index} is not in the group")]
    NotInGroup { index: usize },
    #[error("generator and image lists differ in length ({gens} vs {images})")]
    CountMismatch { gens: usize, images: usize },
    #[error("blocks do not partition the points: {0}")]
    NotAPartition(String),
    #[error("generator {generator} does not map block {block} onto a block")]
    BlocksNotInvariant { generator: usize, block: usize },
    #[error("group order {order} exceeds the limit of {limit} elements")]
    TooLarge { order: BigUint, limit: usize },
}

#[derive(Debug, Clone)]
struct Level {
    base_point: u32,
    /// Strong generators fixing every earlier base point.
    gens: Vec<Permutation>,
    orbit: Vec<u32>,
    /// `transversal[p]` indexes `coset_reps` for orbit points.
    transversal: Vec<Option<u32>>,
    /// `(u, u⁻¹)` with `base_point · u = p`.
    coset_reps: Vec<(Permutation, Permutation)>,
    /// Schreier generators already known to sift through the next level,
    /// keyed by (orbit point, generator index).
    checked: HashSet<(u32, u32)>,
}

impl Level {
    fn new(base_point: u32, degree: usize) -> Self {
        let mut transversal = vec![None; degree];
        transversal[base_point as usize] = Some(0);
        Level {
            base_point,
            gens: Vec::new(),
            orbit: vec![base_point],
            transversal,
            coset_reps: vec![(Permutation::identity(degree), Permutation::identity(degree))],
            checked: HashSet::new(),
        }
    }

    fn rep(&self, point: u32) -> Option<&(Permutation, Permutation)> {
        self.transversal[point as usize].map(|i| &self.coset_reps[i as usize])
    }

    /// Adds a strong generator and extends the orbit, keeping the coset
    /// representatives already chosen.
    fn add_generator(&mut self, g: Permutation) {
        self.gens.push(g);
        let mut queue: VecDeque<u32> = self.orbit.iter().copied().collect();
        while let Some(p) = queue.pop_front() {
            for gi in 0..self.gens.len() {
                let q = self.gens[gi].apply0(p);
                if self.transversal[q as usize].is_none() {
                    let u = &self.rep(p).unwrap().0 * &self.gens[gi];
                    let uinv = u.inverse();
                    self.transversal[q as usize] = Some(self.coset_reps.len() as u32);
                    self.coset_reps.push((u, uinv));
                    self.orbit.push(q);
                    queue.push_back(q);
                }
            }
        }
    }
}

/// A permutation group with a verified base and strong generating set.
#[derive(Debug, Clone)]
pub struct PermGroup {
    degree: usize,
    generators: Vec<Permutation>,
    levels: Vec<Level>,
}

impl PermGroup {
    /// The trivial group on `degree` points.
    pub fn trivial(degree: usize) -> Self {
        PermGroup {
            degree,
            generators: Vec::new(),
            levels: Vec::new(),
        }
    }

    /// Builds the group generated by `gens` (nonempty, equal degrees).
    pub fn new(gens: &[Permutation]) -> Result<Self, GroupError> {
        let first = gens.first().ok_or(GroupError::Empty)?;
        Self::with_degree(first.degree(), gens)
    }

    /// Like [`PermGroup::new`] but accepts an empty generator list.
    pub fn with_degree(degree: usize, gens: &[Permutation]) -> Result<Self, GroupError> {
        if let Some(g) = gens.iter().find(|g| g.degree() != degree) {
            return Err(PermError::DegreeMismatch {
                left: degree,
                right: g.degree(),
            }
            .into());
        }
        let mut group = PermGroup::trivial(degree);
        for g in gens {
            group.push_generator(g.clone());
        }
        group.schreier_sims();
        Ok(group)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    /// Base points, 1-based.
    pub fn base(&self) -> Vec<usize> {
        self.levels
            .iter()
            .map(|l| l.base_point as usize + 1)
            .collect()
    }

    /// Basic orbit lengths along the base.
    pub fn orbit_lengths(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.orbit.len()).collect()
    }

    pub fn strong_generators(&self) -> Vec<Permutation> {
        let mut seen = BTreeSet::new();
        for l in &self.levels {
            for g in &l.gens {
                seen.insert(g.clone());
            }
        }
        seen.into_iter().collect()
    }

    pub fn order(&self) -> BigUint {
        self.levels
            .iter()
            .fold(BigUint::one(), |acc, l| acc * BigUint::from(l.orbit.len()))
    }

    pub fn is_trivial(&self) -> bool {
        self.levels.is_empty()
    }

    /// Membership by sifting through the stabilizer chain.
    pub fn contains(&self, a: &Permutation) -> bool {
        if a.degree() != self.degree {
            return false;
        }
        let (residue, level) = self.sift(a.clone(), 0);
        level == self.levels.len() && residue.is_identity()
    }

    /// Adds a generator and restores a complete strong generating set.
    /// Returns false (and records nothing) when the element is already in
    /// the group.
    pub fn add_generator(&mut self, g: Permutation) -> Result<bool, GroupError> {
        if g.degree() != self.degree {
            return Err(PermError::DegreeMismatch {
                left: self.degree,
                right: g.degree(),
            }
            .into());
        }
        if self.contains(&g) {
            return Ok(false);
        }
        self.push_generator(g);
        self.schreier_sims();
        Ok(true)
    }

    /// Records a generator in every level whose earlier base points it
    /// fixes, opening a new level if it fixes the whole base.
    fn push_generator(&mut self, g: Permutation) {
        self.generators.push(g.clone());
        if g.is_identity() {
            return;
        }
        if self
            .levels
            .iter()
            .all(|l| g.apply0(l.base_point) == l.base_point)
        {
            let b = g.smallest_moved_point().unwrap() - 1;
            self.levels.push(Level::new(b as u32, self.degree));
        }
        for l in self.levels.iter_mut() {
            let fixes = g.apply0(l.base_point) == l.base_point;
            l.add_generator(g.clone());
            if !fixes {
                break;
            }
        }
    }

    /// Sifts `h` starting at `level`; returns the residue and the level
    /// where sifting stopped (`levels.len()` when it passed every level).
    fn sift(&self, mut h: Permutation, level: usize) -> (Permutation, usize) {
        for (j, l) in self.levels.iter().enumerate().skip(level) {
            let beta = h.apply0(l.base_point);
            match l.rep(beta) {
                Some((_, uinv)) => h = &h * uinv,
                None => return (h, j),
            }
        }
        (h, self.levels.len())
    }

    fn schreier_sims(&mut self) {
        if self.levels.is_empty() {
            return;
        }
        let mut i = self.levels.len() - 1;
        loop {
            match self.find_unsifted(i) {
                None => {
                    if i == 0 {
                        break;
                    }
                    i -= 1;
                }
                Some((residue, j)) => {
                    if j == self.levels.len() {
                        let b = residue.smallest_moved_point().unwrap() - 1;
                        self.levels.push(Level::new(b as u32, self.degree));
                    }
                    for l in &mut self.levels[i + 1..=j] {
                        l.add_generator(residue.clone());
                    }
                    i = j;
                }
            }
        }
    }

    /// Finds a Schreier generator of level `i` that does not sift through
    /// the levels below, marking the ones that do.
    fn find_unsifted(&mut self, i: usize) -> Option<(Permutation, usize)> {
        let mut oi = 0;
        while oi < self.levels[i].orbit.len() {
            let beta = self.levels[i].orbit[oi];
            for gi in 0..self.levels[i].gens.len() {
                let key = (beta, gi as u32);
                if self.levels[i].checked.contains(&key) {
                    continue;
                }
                let level = &self.levels[i];
                let x = &level.gens[gi];
                let u = &level.rep(beta).unwrap().0;
                let image = x.apply0(beta);
                let uinv = &level.rep(image).unwrap().1;
                let schreier = &(u * x) * uinv;
                let (residue, j) = self.sift(schreier, i + 1);
                if j < self.levels.len() || !residue.is_identity() {
                    return Some((residue, j));
                }
                self.levels[i].checked.insert(key);
            }
            oi += 1;
        }
        None
    }

    /// Smallest normal subgroup of `self` containing `elems`.
    pub fn normal_closure(&self, elems: &[Permutation]) -> Result<PermGroup, GroupError> {
        for (index, e) in elems.iter().enumerate() {
            if !self.contains(e) {
                return Err(GroupError::NotInGroup { index });
            }
        }
        let mut closure = PermGroup::trivial(self.degree);
        for e in elems {
            closure.add_generator(e.clone())?;
        }
        let mut k = 0;
        while k < closure.generators.len() {
            let g = closure.generators[k].clone();
            if !g.is_identity() {
                for s in &self.generators {
                    let c = g.conjugate_by(s);
                    closure.add_generator(c)?;
                }
            }
            k += 1;
        }
        Ok(closure)
    }

    /// Index of a subgroup given by its order.
    pub fn index_of(&self, sub: &PermGroup) -> BigUint {
        self.order() / sub.order()
    }

    /// Action on a generator-invariant partition; see [`induced_block_action`].
    pub fn block_action(&self, blocks: &[Vec<usize>]) -> Result<BlockAction, GroupError> {
        let block_of = partition_index(self.degree, blocks)?;
        let mut block_generators = Vec::with_capacity(self.generators.len());
        for (gi, g) in self.generators.iter().enumerate() {
            let mut images = Vec::with_capacity(blocks.len());
            for (bi, block) in blocks.iter().enumerate() {
                let target = block_of[g.apply(block[0]) - 1];
                if blocks[target].len() != block.len()
                    || block.iter().any(|&p| block_of[g.apply(p) - 1] != target)
                {
                    return Err(GroupError::BlocksNotInvariant {
                        generator: gi + 1,
                        block: bi + 1,
                    });
                }
                images.push(target + 1);
            }
            block_generators.push(Permutation::from_images(&images)?);
        }
        let image = PermGroup::with_degree(blocks.len(), &block_generators)?;
        let image_order = image.order();
        let kernel_order = self.order() / &image_order;
        Ok(BlockAction {
            block_generators,
            image_order,
            kernel_order,
        })
    }
}

/// Result of acting on a block system.
#[derive(Debug, Clone)]
pub struct BlockAction {
    /// Permutations of block indices (1-based, in the given block order).
    pub block_generators: Vec<Permutation>,
    pub image_order: BigUint,
    pub kernel_order: BigUint,
}

fn partition_index(degree: usize, blocks: &[Vec<usize>]) -> Result<Vec<usize>, GroupError> {
    let mut block_of = vec![usize::MAX; degree];
    for (bi, block) in blocks.iter().enumerate() {
        if block.is_empty() {
            return Err(GroupError::NotAPartition(format!(
                "block {} is empty",
                bi + 1
            )));
        }
        for &p in block {
            if p == 0 || p > degree {
                return Err(GroupError::NotAPartition(format!("point {p} out of range")));
            }
            if block_of[p - 1] != usize::MAX {
                return Err(GroupError::NotAPartition(format!(
                    "point {p} in two blocks"
                )));
            }
            block_of[p - 1] = bi;
        }
    }
    if let Some(p) = block_of.iter().position(|&b| b == usize::MAX) {
        return Err(GroupError::NotAPartition(format!(
            "point {} uncovered",
            p + 1
        )));
    }
    Ok(block_of)
}

/// Induced action of `⟨gens⟩` on a partition of its points, with the
/// order of the kernel.
pub fn induced_block_action(
    gens: &[Permutation],
    blocks: &[Vec<usize>],
) -> Result<BlockAction, GroupError> {
    PermGroup::new(gens)?.block_action(blocks)
}

/// Orbit of a 1-based point under the generators.
pub fn orbit(gens: &[Permutation], point: usize) -> BTreeSet<usize> {
    let mut seen = BTreeSet::from([point]);
    let mut queue = VecDeque::from([point]);
    while let Some(p) = queue.pop_front() {
        for g in gens {
            let q = g.apply(p);
            if seen.insert(q) {
                queue.push_back(q);
            }
        }
    }
    seen
}

/// The right regular action of `⟨gens⟩`: element number `k` (in
/// breadth-first order from the identity, which is number 1) goes to the
/// number of `g·s` under generator `s`. Refuses groups with more than
/// `limit` elements.
pub fn regular_representation(
    gens: &[Permutation],
    limit: usize,
) -> Result<Vec<Permutation>, GroupError> {
    let order = PermGroup::new(gens)?.order();
    if order > BigUint::from(limit) {
        return Err(GroupError::TooLarge { order, limit });
    }
    let id = Permutation::identity(gens[0].degree());
    let mut index = std::collections::HashMap::from([(id.clone(), 0usize)]);
    let mut elements = vec![id];
    let mut k = 0;
    while k < elements.len() {
        for s in gens {
            let h = &elements[k] * s;
            if !index.contains_key(&h) {
                index.insert(h.clone(), elements.len());
                elements.push(h);
            }
        }
        k += 1;
    }
    Ok(gens
        .iter()
        .map(|s| {
            let table = elements.iter().map(|g| index[&(g * s)] as u32).collect();
            Permutation::from_table_unchecked(table)
        })
        .collect())
}

/// Decides whether `gens[i] ↦ images[i]` extends to an automorphism of
/// `G = ⟨gens⟩`. The map is a well-defined homomorphism exactly when the
/// diagonal group `⟨(g_i, h_i)⟩` on two copies of the domain has order
/// `|G|`; it is onto when the images generate all of `G`.
pub fn extends_to_automorphism(
    gens: &[Permutation],
    images: &[Permutation],
) -> Result<bool, GroupError> {
    if gens.len() != images.len() {
        return Err(GroupError::CountMismatch {
            gens: gens.len(),
            images: images.len(),
        });
    }
    let group = PermGroup::new(gens)?;
    for (index, h) in images.iter().enumerate() {
        if h.degree() != group.degree() || !group.contains(h) {
            return Err(GroupError::NotInGroup { index });
        }
    }
    let order = group.order();
    if PermGroup::new(images)?.order() != order {
        return Ok(false);
    }
    let diagonal: Vec<Permutation> = gens
        .iter()
        .zip(images)
        .map(|(g, h)| g.direct_sum(h))
        .collect();
    Ok(PermGroup::new(&diagonal)?.order() == order)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn cyc(n: usize, s: &str) -> Permutation {
        Permutation::parse_cycles(s, Some(n)).unwrap()
    }

    /// Closure by repeated right multiplication; test oracle only.
    fn brute_elements(gens: &[Permutation]) -> HashSet<Permutation> {
        let id = Permutation::identity(gens[0].degree());
        let mut seen = HashSet::from([id.clone()]);
        let mut queue = VecDeque::from([id]);
        while let Some(p) = queue.pop_front() {
            for g in gens {
                let q = &p * g;
                if seen.insert(q.clone()) {
                    queue.push_back(q);
                }
            }
        }
        seen
    }

    #[test]
    fn regular_representation_of_a4() {
        let gens = [cyc(4, "(1,2,3)"), cyc(4, "(2,3,4)")];
        let reg = regular_representation(&gens, 100).unwrap();
        assert_eq!(reg[0].degree(), 12);
        let g = PermGroup::new(&reg).unwrap();
        assert_eq!(g.order(), BigUint::from(12u32));
        assert_eq!(orbit(&reg, 1).len(), 12);
        assert_eq!(
            regular_representation(&gens, 11),
            Err(GroupError::TooLarge {
                order: BigUint::from(12u32),
                limit: 11
            })
        );
    }

    #[test]
    fn trivial_group() {
        let g = PermGroup::new(&[Permutation::identity(5)]).unwrap();
        assert_eq!(g.order(), BigUint::one());
        assert!(g.contains(&Permutation::identity(5)));
        assert!(!g.contains(&cyc(5, "(1,2)")));
    }

    #[test]
    fn alternating_four() {
        let gens = [cyc(4, "(1,2,3)"), cyc(4, "(2,3,4)")];
        let g = PermGroup::new(&gens).unwrap();
        assert_eq!(g.order(), BigUint::from(12u32));
        assert_eq!(brute_elements(&gens).len(), 12);
        assert!(!g.contains(&cyc(4, "(1,2)")));
        assert!(g.contains(&cyc(4, "(1,2)(3,4)")));
    }

    #[test]
    fn symmetric_group_orders() {
        for n in 2..=9usize {
            let gens = [
                cyc(n, "(1,2)"),
                Permutation::from_cycles(n, &[(1..=n).collect()]).unwrap(),
            ];
            let g = PermGroup::new(&gens).unwrap();
            let fact: BigUint = (1..=n).map(BigUint::from).product();
            assert_eq!(g.order(), fact, "S_{n}");
        }
    }

    #[test]
    fn mixed_degrees_rejected() {
        assert!(matches!(
            PermGroup::new(&[cyc(3, "(1,2)"), cyc(4, "(1,2)")]),
            Err(GroupError::Perm(PermError::DegreeMismatch { .. }))
        ));
    }

    #[test]
    fn orbit_examples() {
        assert_eq!(orbit(&[], 1), BTreeSet::from([1]));
        let gens = [cyc(6, "(1,2)(3,4)"), cyc(6, "(2,3)")];
        assert_eq!(orbit(&gens, 1), BTreeSet::from([1, 2, 3, 4]));
        assert_eq!(orbit(&gens, 5), BTreeSet::from([5]));
    }

    #[test]
    fn normal_closure_examples() {
        let s4 = PermGroup::new(&[cyc(4, "(1,2)"), cyc(4, "(1,2,3,4)")]).unwrap();
        let triv = s4.normal_closure(&[Permutation::identity(4)]).unwrap();
        assert!(triv.is_trivial());
        let v4 = s4.normal_closure(&[cyc(4, "(1,2)(3,4)")]).unwrap();
        assert_eq!(v4.order(), BigUint::from(4u32));
        let a4 = s4.normal_closure(&[cyc(4, "(1,2,3)")]).unwrap();
        assert_eq!(a4.order(), BigUint::from(12u32));
        let all = s4.normal_closure(s4.generators()).unwrap();
        assert_eq!(all.order(), s4.order());
        assert_eq!(
            s4.normal_closure(&[cyc(4, "(1,2)"), cyc(5, "(1,2)")])
                .unwrap_err(),
            GroupError::NotInGroup { index: 1 }
        );
    }

    #[test]
    fn block_actions() {
        let gens = [cyc(6, "(1,2,3,4,5,6)")];
        let singletons: Vec<Vec<usize>> = (1..=6).map(|p| vec![p]).collect();
        let act = induced_block_action(&gens, &singletons).unwrap();
        assert_eq!(act.block_generators[0], gens[0]);
        assert_eq!(act.kernel_order, BigUint::one());
        let pairs = vec![vec![1, 4], vec![2, 5], vec![3, 6]];
        let act = induced_block_action(&gens, &pairs).unwrap();
        assert_eq!(act.image_order, BigUint::from(3u32));
        assert_eq!(act.kernel_order, BigUint::from(2u32));
        let whole = vec![(1..=6).collect::<Vec<_>>()];
        let act = induced_block_action(&gens, &whole).unwrap();
        assert_eq!(act.image_order, BigUint::one());
        assert_eq!(act.kernel_order, BigUint::from(6u32));
        let bad = vec![vec![1, 2], vec![3, 4], vec![5, 6]];
        assert!(matches!(
            induced_block_action(&gens, &bad),
            Err(GroupError::BlocksNotInvariant { .. })
        ));
        let overlapping = vec![vec![1, 2], vec![2, 3, 4, 5, 6]];
        assert!(matches!(
            induced_block_action(&gens, &overlapping),
            Err(GroupError::NotAPartition(_))
        ));
    }

    #[test]
    fn automorphism_extension() {
        let s1 = cyc(4, "(1,2,3)");
        let s2 = cyc(4, "(2,3,4)");
        let gens = [s1.clone(), s2.clone()];
        assert!(extends_to_automorphism(&gens, &gens).unwrap());
        let mirror = [&(&s1 * &s2) * &s2, s2.inverse()];
        assert!(extends_to_automorphism(&gens, &mirror).unwrap());
        // Not injective: the images generate only a cyclic group.
        let bad = [s1.clone(), s1.clone()];
        assert!(!extends_to_automorphism(&gens, &bad).unwrap());
        let outside = [cyc(4, "(1,2)"), s2.clone()];
        assert_eq!(
            extends_to_automorphism(&gens, &outside),
            Err(GroupError::NotInGroup { index: 0 })
        );
    }
}
