//! Permutations of `{1..N}` and words in abstract generators.
//!
//! All products use the right action: `p · (a b) = (p · a) · b`, so
//! `a.compose(&b)` applies `a` first and then `b`. Points are 1-based in
//! every public signature; the image table is stored 0-based.

use std::collections::BTreeSet;
use std::fmt;
use std::ops::Mul;

use num_bigint::BigUint;
use num_integer::Integer;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PermError {
    #[error("degree mismatch: {left} vs {right}")]
    DegreeMismatch { left: usize, right: usize },
    #[error("not a bijection: {0}")]
    NotABijection(String),
    #[error("point {point} out of range 1..={degree}")]
    PointOutOfRange { point: usize, degree: usize },
    #[error("degree must be positive")]
    ZeroDegree,
    #[error("cycle notation: {0}")]
    Parse(String),
    #[error("pairs do not define an involution: {0}")]
    InconsistentPairs(String),
    #[error("subset is not invariant under the permutation (point {0})")]
    NotInvariant(usize),
}

/// A bijection of `{1..N}`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<u32>,
}

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        assert!(degree > 0, "permutation degree must be positive");
        Permutation {
            images: (0..degree as u32).collect(),
        }
    }

    /// Builds a permutation from its 1-based image table.
    pub fn from_images(images: &[usize]) -> Result<Self, PermError> {
        let n = images.len();
        if n == 0 {
            return Err(PermError::ZeroDegree);
        }
        let mut seen = vec![false; n];
        let mut table = Vec::with_capacity(n);
        for (i, &img) in images.iter().enumerate() {
            if img == 0 || img > n {
                return Err(PermError::NotABijection(format!(
                    "image {img} of point {} outside 1..={n}",
                    i + 1
                )));
            }
            if seen[img - 1] {
                return Err(PermError::NotABijection(format!(
                    "image {img} occurs more than once"
                )));
            }
            seen[img - 1] = true;
            table.push((img - 1) as u32);
        }
        Ok(Permutation { images: table })
    }

    pub(crate) fn from_table_unchecked(images: Vec<u32>) -> Self {
        debug_assert!(Self::from_images(
            &images.iter().map(|&i| i as usize + 1).collect::<Vec<_>>()
        )
        .is_ok());
        Permutation { images }
    }

    /// Product of the given cycles (1-based points), applied left to right.
    /// Cycles need not be disjoint.
    pub fn from_cycles(degree: usize, cycles: &[Vec<usize>]) -> Result<Self, PermError> {
        if degree == 0 {
            return Err(PermError::ZeroDegree);
        }
        let mut result = Permutation::identity(degree);
        for cycle in cycles {
            let mut table: Vec<u32> = (0..degree as u32).collect();
            let mut seen = BTreeSet::new();
            for &p in cycle {
                if p == 0 || p > degree {
                    return Err(PermError::PointOutOfRange { point: p, degree });
                }
                if !seen.insert(p) {
                    return Err(PermError::Parse(format!("point {p} repeated in a cycle")));
                }
            }
            for (k, &p) in cycle.iter().enumerate() {
                let q = cycle[(k + 1) % cycle.len()];
                table[p - 1] = (q - 1) as u32;
            }
            result = &result * &Permutation { images: table };
        }
        Ok(result)
    }

    /// The involution swapping each listed pair. A pair may be listed more
    /// than once (in either order) as long as the listings agree.
    pub fn involution_from_pairs(
        degree: usize,
        pairs: &[(usize, usize)],
    ) -> Result<Self, PermError> {
        if degree == 0 {
            return Err(PermError::ZeroDegree);
        }
        let mut table: Vec<Option<u32>> = vec![None; degree];
        for &(a, b) in pairs {
            for p in [a, b] {
                if p == 0 || p > degree {
                    return Err(PermError::PointOutOfRange { point: p, degree });
                }
            }
            for (u, v) in [(a, b), (b, a)] {
                match table[u - 1] {
                    None => table[u - 1] = Some((v - 1) as u32),
                    Some(w) if w as usize == v - 1 => {}
                    Some(w) => {
                        return Err(PermError::InconsistentPairs(format!(
                            "{u} paired with both {} and {v}",
                            w + 1
                        )))
                    }
                }
            }
        }
        let images = table
            .into_iter()
            .enumerate()
            .map(|(i, v)| v.unwrap_or(i as u32))
            .collect();
        Ok(Permutation { images })
    }

    /// Parses cycle notation such as `"(1,2,3)(4,5)"`. Whitespace may
    /// separate points instead of commas. `"()"` is the identity. Without an
    /// explicit degree the largest mentioned point is used.
    pub fn parse_cycles(text: &str, degree: Option<usize>) -> Result<Self, PermError> {
        let mut cycles = Vec::new();
        let mut rest = text.trim();
        while !rest.is_empty() {
            let body = rest
                .strip_prefix('(')
                .ok_or_else(|| PermError::Parse(format!("expected '(' at {rest:?}")))?;
            let close = body
                .find(')')
                .ok_or_else(|| PermError::Parse("unterminated cycle".into()))?;
            let points = body[..close]
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|s| !s.is_empty())
                .map(|s| {
                    s.parse::<usize>()
                        .map_err(|_| PermError::Parse(format!("bad point {s:?}")))
                })
                .collect::<Result<Vec<_>, _>>()?;
            if !points.is_empty() {
                cycles.push(points);
            }
            rest = body[close + 1..].trim_start();
        }
        let max_point = cycles.iter().flatten().copied().max().unwrap_or(1);
        let degree = degree.unwrap_or(max_point);
        Self::from_cycles(degree, &cycles)
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    /// Image of a 1-based point. Panics when the point is out of range.
    pub fn apply(&self, point: usize) -> usize {
        self.images[point - 1] as usize + 1
    }

    #[inline]
    pub(crate) fn apply0(&self, point: u32) -> u32 {
        self.images[point as usize]
    }

    pub(crate) fn table(&self) -> &[u32] {
        &self.images
    }

    /// 1-based image table.
    pub fn images(&self) -> Vec<usize> {
        self.images.iter().map(|&i| i as usize + 1).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &v)| i as u32 == v)
    }

    /// Applies `self`, then `other`.
    pub fn compose(&self, other: &Permutation) -> Result<Permutation, PermError> {
        if self.degree() != other.degree() {
            return Err(PermError::DegreeMismatch {
                left: self.degree(),
                right: other.degree(),
            });
        }
        Ok(self * other)
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0u32; self.images.len()];
        for (i, &v) in self.images.iter().enumerate() {
            inv[v as usize] = i as u32;
        }
        Permutation { images: inv }
    }

    pub fn pow(&self, exponent: i64) -> Permutation {
        let base = if exponent < 0 {
            self.inverse()
        } else {
            self.clone()
        };
        let mut e = exponent.unsigned_abs();
        let mut acc = Permutation::identity(self.degree());
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &sq;
            }
            sq = &sq * &sq;
            e >>= 1;
        }
        acc
    }

    /// `g⁻¹ · self · g`.
    pub fn conjugate_by(&self, g: &Permutation) -> Permutation {
        &(&g.inverse() * self) * g
    }

    /// Disjoint cycles of length at least two. Each cycle starts at its least
    /// point and cycles are sorted by their least point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut cycle = vec![start + 1];
            seen[start] = true;
            let mut p = self.images[start] as usize;
            while p != start {
                seen[p] = true;
                cycle.push(p + 1);
                p = self.images[p] as usize;
            }
            if cycle.len() > 1 {
                out.push(cycle);
            }
        }
        out
    }

    /// Least common multiple of the cycle lengths.
    pub fn order(&self) -> BigUint {
        self.cycles().iter().fold(BigUint::from(1u32), |acc, c| {
            acc.lcm(&BigUint::from(c.len()))
        })
    }

    /// Points moved by the permutation, ascending.
    pub fn support(&self) -> Vec<usize> {
        self.images
            .iter()
            .enumerate()
            .filter(|(i, &v)| *i as u32 != v)
            .map(|(i, _)| i + 1)
            .collect()
    }

    pub fn smallest_moved_point(&self) -> Option<usize> {
        self.images
            .iter()
            .enumerate()
            .find(|(i, &v)| *i as u32 != v)
            .map(|(i, _)| i + 1)
    }

    /// Cycles of the restriction to an invariant subset, in canonical form.
    pub fn cycles_on(&self, subset: &BTreeSet<usize>) -> Result<Vec<Vec<usize>>, PermError> {
        for &p in subset {
            if p == 0 || p > self.degree() {
                return Err(PermError::PointOutOfRange {
                    point: p,
                    degree: self.degree(),
                });
            }
            if !subset.contains(&self.apply(p)) {
                return Err(PermError::NotInvariant(p));
            }
        }
        Ok(self
            .cycles()
            .into_iter()
            .filter(|c| subset.contains(&c[0]))
            .collect())
    }

    /// Parity of the restriction to an invariant subset.
    pub fn is_even_on(&self, subset: &BTreeSet<usize>) -> Result<bool, PermError> {
        let transpositions: usize = self.cycles_on(subset)?.iter().map(|c| c.len() - 1).sum();
        Ok(transpositions.is_multiple_of(2))
    }

    /// `self` on `1..=N` alongside `other` on `N+1..=N+M`.
    pub fn direct_sum(&self, other: &Permutation) -> Permutation {
        let shift = self.degree() as u32;
        let images = self
            .images
            .iter()
            .copied()
            .chain(other.images.iter().map(|&v| v + shift))
            .collect();
        Permutation { images }
    }
}

impl Mul<&Permutation> for &Permutation {
    type Output = Permutation;

    /// Right-action product; panics on a degree mismatch (use
    /// [`Permutation::compose`] for a checked product).
    fn mul(self, rhs: &Permutation) -> Permutation {
        assert_eq!(
            self.degree(),
            rhs.degree(),
            "composing permutations of different degree"
        );
        Permutation {
            images: self
                .images
                .iter()
                .map(|&v| rhs.images[v as usize])
                .collect(),
        }
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        for c in cycles {
            write!(f, "(")?;
            for (k, p) in c.iter().enumerate() {
                if k > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{p}")?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation[{}]{}", self.degree(), self)
    }
}

impl Serialize for Permutation {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.images().serialize(serializer)
    }
}

/// Wire form of a permutation: an image array, or a cycle-notation string.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum PermRepr {
    Images(Vec<usize>),
    Cycles(String),
}

impl PermRepr {
    /// Resolves to a permutation. Cycle strings take `degree` when given,
    /// otherwise their largest point; image arrays must match `degree`.
    pub fn resolve(&self, degree: Option<usize>) -> Result<Permutation, PermError> {
        match self {
            PermRepr::Images(images) => {
                let p = Permutation::from_images(images)?;
                match degree {
                    Some(d) if d != p.degree() => Err(PermError::DegreeMismatch {
                        left: p.degree(),
                        right: d,
                    }),
                    _ => Ok(p),
                }
            }
            PermRepr::Cycles(text) => Permutation::parse_cycles(text, degree),
        }
    }
}

impl<'de> Deserialize<'de> for Permutation {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        PermRepr::deserialize(deserializer)?
            .resolve(None)
            .map_err(serde::de::Error::custom)
    }
}

/// Exponent of a word letter. The derived order (`Pos < Neg`) is the
/// tie-break order used when enumerating words.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sign {
    Pos,
    Neg,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Pos => Sign::Neg,
            Sign::Neg => Sign::Pos,
        }
    }

    pub fn as_i64(self) -> i64 {
        match self {
            Sign::Pos => 1,
            Sign::Neg => -1,
        }
    }
}

/// `σ_generator^{±1}` with a 1-based generator index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Letter {
    pub generator: usize,
    pub sign: Sign,
}

impl Letter {
    pub fn pos(generator: usize) -> Self {
        Letter {
            generator,
            sign: Sign::Pos,
        }
    }

    pub fn neg(generator: usize) -> Self {
        Letter {
            generator,
            sign: Sign::Neg,
        }
    }

    pub fn inverse(self) -> Self {
        Letter {
            generator: self.generator,
            sign: self.sign.flip(),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WordError {
    #[error("letter index {index} outside 1..={bound}")]
    IndexOutOfRange { index: usize, bound: usize },
    #[error("cannot evaluate a word without generators")]
    NoGenerators,
    #[error(transparent)]
    Perm(#[from] PermError),
}

/// A word in abstract generators; the empty word is the identity.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub struct GeneratorWord {
    letters: Vec<Letter>,
}

impl GeneratorWord {
    pub fn new(letters: Vec<Letter>) -> Self {
        GeneratorWord { letters }
    }

    pub fn empty() -> Self {
        GeneratorWord::default()
    }

    /// `σ_generator^exponent` written out letter by letter.
    pub fn power(generator: usize, exponent: i64) -> Self {
        let letter = if exponent < 0 {
            Letter::neg(generator)
        } else {
            Letter::pos(generator)
        };
        GeneratorWord {
            letters: vec![letter; exponent.unsigned_abs() as usize],
        }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn push(&mut self, letter: Letter) {
        self.letters.push(letter);
    }

    pub fn concat(&self, other: &GeneratorWord) -> GeneratorWord {
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        GeneratorWord { letters }
    }

    pub fn inverse(&self) -> GeneratorWord {
        GeneratorWord {
            letters: self.letters.iter().rev().map(|l| l.inverse()).collect(),
        }
    }

    /// Cancels adjacent `σσ⁻¹` pairs until none remain.
    pub fn reduced(&self) -> GeneratorWord {
        let mut out: Vec<Letter> = Vec::with_capacity(self.letters.len());
        for &l in &self.letters {
            if out.last() == Some(&l.inverse()) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        GeneratorWord { letters: out }
    }

    pub fn max_index(&self) -> Option<usize> {
        self.letters.iter().map(|l| l.generator).max()
    }

    fn check_bound(&self, bound: usize) -> Result<(), WordError> {
        match self
            .letters
            .iter()
            .find(|l| l.generator == 0 || l.generator > bound)
        {
            Some(l) => Err(WordError::IndexOutOfRange {
                index: l.generator,
                bound,
            }),
            None => Ok(()),
        }
    }

    /// Product of the indicated generators under the right action.
    pub fn evaluate(&self, gens: &[Permutation]) -> Result<Permutation, WordError> {
        let first = gens.first().ok_or(WordError::NoGenerators)?;
        self.check_bound(gens.len())?;
        let degree = first.degree();
        if let Some(g) = gens.iter().find(|g| g.degree() != degree) {
            return Err(PermError::DegreeMismatch {
                left: degree,
                right: g.degree(),
            }
            .into());
        }
        let inverses: Vec<Permutation> = gens.iter().map(Permutation::inverse).collect();
        let mut acc: Vec<u32> = (0..degree as u32).collect();
        for l in &self.letters {
            let g = match l.sign {
                Sign::Pos => &gens[l.generator - 1],
                Sign::Neg => &inverses[l.generator - 1],
            };
            for v in acc.iter_mut() {
                *v = g.apply0(*v);
            }
        }
        Ok(Permutation::from_table_unchecked(acc))
    }

    /// Enantiomorphic rewrite with `top` as the highest generator:
    /// `σ_top^{±1} ↦ σ_top^{∓1}`, `σ_{top−1} ↦ σ_{top−1}σ_top²`,
    /// `σ_{top−1}⁻¹ ↦ σ_top⁻²σ_{top−1}⁻¹`, other letters unchanged. The
    /// result is freely reduced, which makes the rewrite an involution.
    pub fn bar(&self, top: usize) -> Result<GeneratorWord, WordError> {
        self.check_bound(top)?;
        let mut letters = Vec::with_capacity(self.letters.len() * 2);
        for &l in &self.letters {
            if l.generator == top {
                letters.push(l.inverse());
            } else if top >= 2 && l.generator == top - 1 {
                match l.sign {
                    Sign::Pos => {
                        letters.push(l);
                        letters.push(Letter::pos(top));
                        letters.push(Letter::pos(top));
                    }
                    Sign::Neg => {
                        letters.push(Letter::neg(top));
                        letters.push(Letter::neg(top));
                        letters.push(l);
                    }
                }
            } else {
                letters.push(l);
            }
        }
        Ok(GeneratorWord { letters }.reduced())
    }
}

impl fmt::Display for GeneratorWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "e");
        }
        for (k, l) in self.letters.iter().enumerate() {
            if k > 0 {
                write!(f, " ")?;
            }
            match l.sign {
                Sign::Pos => write!(f, "s{}", l.generator)?,
                Sign::Neg => write!(f, "s{}^-1", l.generator)?,
            }
        }
        Ok(())
    }
}

/// Images of `gens[0..top]` under the enantiomorphic assignment with `top`
/// as the highest generator (`σ_top ↦ σ_top⁻¹`, `σ_{top−1} ↦ σ_{top−1}σ_top²`).
pub fn enantiomorphic_images(
    gens: &[Permutation],
    top: usize,
) -> Result<Vec<Permutation>, WordError> {
    if top == 0 || top > gens.len() {
        return Err(WordError::IndexOutOfRange {
            index: top,
            bound: gens.len(),
        });
    }
    let sub = &gens[..top];
    (1..=top)
        .map(|i| {
            GeneratorWord::new(vec![Letter::pos(i)])
                .bar(top)?
                .evaluate(sub)
        })
        .collect()
}
