use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::forest::tree::{bit, Clade};

/// Largest degree for which groups are materialized element by element.
pub const MAX_GROUP_DEGREE: u32 = 10;

/// A permutation of `{1..n}` stored as its image list.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Perm(Vec<u32>);

impl Perm {
    pub fn identity(n: u32) -> Perm {
        Perm((1..=n).collect())
    }

    /// From one-based images: `images[i - 1]` is the image of `i`.
    pub fn from_images(images: Vec<u32>) -> Result<Perm> {
        let n = images.len() as u32;
        let set: BTreeSet<u32> = images.iter().copied().collect();
        if set.len() != images.len() || set.iter().any(|&x| x == 0 || x > n) {
            return Err(Error::Parse(format!("{images:?} is not a permutation")));
        }
        Ok(Perm(images))
    }

    /// Transposition of `a` and `b` in degree `n`.
    pub fn transposition(n: u32, a: u32, b: u32) -> Perm {
        let mut v: Vec<u32> = (1..=n).collect();
        v.swap(a as usize - 1, b as usize - 1);
        Perm(v)
    }

    /// The cycle `first -> first+1 -> ... -> last -> first`.
    pub fn cycle(n: u32, first: u32, last: u32) -> Perm {
        let mut v: Vec<u32> = (1..=n).collect();
        for i in first..last {
            v[i as usize - 1] = i + 1;
        }
        v[last as usize - 1] = first;
        Perm(v)
    }

    pub fn degree(&self) -> u32 {
        self.0.len() as u32
    }

    pub fn apply(&self, i: u32) -> u32 {
        self.0[i as usize - 1]
    }

    pub fn apply_clade(&self, c: Clade) -> Clade {
        let mut out = 0;
        let mut rest = c;
        while rest != 0 {
            let i = rest.trailing_zeros() + 1;
            rest &= rest - 1;
            out |= bit(self.apply(i));
        }
        out
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Perm) -> Perm {
        Perm(other.0.iter().map(|&i| self.apply(i)).collect())
    }

    pub fn inverse(&self) -> Perm {
        let mut v = self.0.clone();
        for (i, &x) in self.0.iter().enumerate() {
            v[x as usize - 1] = i as u32 + 1;
        }
        Perm(v)
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &x)| x == i as u32 + 1)
    }

    pub fn sign(&self) -> i8 {
        let n = self.0.len();
        let mut seen = alloc::vec![false; n];
        let mut even_cycles = 0;
        for s in 0..n {
            if seen[s] {
                continue;
            }
            let mut len = 0;
            let mut i = s;
            while !seen[i] {
                seen[i] = true;
                i = self.0[i] as usize - 1;
                len += 1;
            }
            if len % 2 == 0 {
                even_cycles += 1;
            }
        }
        if even_cycles % 2 == 0 {
            1
        } else {
            -1
        }
    }

    pub fn order(&self) -> usize {
        let mut q = self.clone();
        let mut k = 1;
        while !q.is_identity() {
            q = q.compose(self);
            k += 1;
        }
        k
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, "]")
    }
}

/// A permutation group given by generators, with its elements materialized.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PermGroupSpec {
    degree: u32,
    generators: Vec<Perm>,
    elements: Vec<Perm>,
}

impl PermGroupSpec {
    pub fn from_generators(degree: u32, generators: Vec<Perm>) -> Result<Self> {
        if degree == 0 || degree > MAX_GROUP_DEGREE {
            return Err(Error::Bound { what: "group degree", bound: MAX_GROUP_DEGREE as usize });
        }
        if let Some(g) = generators.iter().find(|g| g.degree() != degree) {
            return Err(Error::Arity { expected: degree as usize, found: g.degree() as usize });
        }
        let elements = closure(degree, &generators);
        Ok(PermGroupSpec { degree, generators, elements })
    }

    /// The subgroup made of `elements`, which must be closed under products.
    pub(crate) fn from_closed_set(degree: u32, mut elements: Vec<Perm>) -> Self {
        elements.sort();
        let mut generators: Vec<Perm> = Vec::new();
        let mut span: BTreeSet<Perm> = BTreeSet::new();
        span.insert(Perm::identity(degree));
        for e in &elements {
            if !span.contains(e) {
                generators.push(e.clone());
                span = closure(degree, &generators).into_iter().collect();
            }
        }
        PermGroupSpec { degree, generators, elements }
    }

    pub fn trivial(degree: u32) -> Result<Self> {
        Self::from_generators(degree, Vec::new())
    }

    pub fn symmetric(degree: u32) -> Result<Self> {
        let mut gens = Vec::new();
        if degree >= 2 {
            gens.push(Perm::transposition(degree, 1, 2));
        }
        if degree >= 3 {
            gens.push(Perm::cycle(degree, 1, degree));
        }
        Self::from_generators(degree, gens)
    }

    /// `1 × Σ_{n-1}`: all permutations fixing the label 1.
    pub fn fixing_first(degree: u32) -> Result<Self> {
        let mut gens = Vec::new();
        if degree >= 3 {
            gens.push(Perm::transposition(degree, 2, 3));
        }
        if degree >= 4 {
            gens.push(Perm::cycle(degree, 2, degree));
        }
        Self::from_generators(degree, gens)
    }

    /// Parses `sigma<n>`, `trivial`, or `sigma<m>-fixing-1` for a group acting
    /// on `degree` labels.
    pub fn by_name(name: &str, degree: u32) -> Result<Self> {
        let bad = || Error::Parse(format!("unknown group {name:?}"));
        match name {
            "trivial" | "1" => Self::trivial(degree),
            _ => {
                let rest = name.strip_prefix("sigma").ok_or_else(bad)?;
                if let Some(m) = rest.strip_suffix("-fixing-1") {
                    let m: u32 = m.parse().map_err(|_| bad())?;
                    if m + 1 != degree {
                        return Err(Error::Arity { expected: degree as usize, found: m as usize + 1 });
                    }
                    Self::fixing_first(degree)
                } else {
                    let m: u32 = rest.parse().map_err(|_| bad())?;
                    if m != degree {
                        return Err(Error::Arity { expected: degree as usize, found: m as usize });
                    }
                    Self::symmetric(degree)
                }
            }
        }
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn generators(&self) -> &[Perm] {
        &self.generators
    }

    /// All elements in sorted order; the identity comes first.
    pub fn elements(&self) -> &[Perm] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, g: &Perm) -> bool {
        self.elements.binary_search(g).is_ok()
    }

    pub fn subgroup_where(&self, keep: impl Fn(&Perm) -> bool) -> PermGroupSpec {
        let elements: Vec<Perm> = self.elements.iter().filter(|g| keep(g)).cloned().collect();
        Self::from_closed_set(self.degree, elements)
    }

    pub fn is_subgroup_of(&self, other: &PermGroupSpec) -> bool {
        self.degree == other.degree && self.elements.iter().all(|g| other.contains(g))
    }

    /// Left coset representatives of `sub`, the smallest element of each coset.
    pub fn coset_representatives(&self, sub: &PermGroupSpec) -> Vec<Perm> {
        let mut seen: BTreeSet<Perm> = BTreeSet::new();
        let mut reps = Vec::new();
        for g in &self.elements {
            if seen.contains(g) {
                continue;
            }
            reps.push(g.clone());
            for h in &sub.elements {
                seen.insert(g.compose(h));
            }
        }
        reps
    }
}

fn closure(degree: u32, generators: &[Perm]) -> Vec<Perm> {
    let mut seen: BTreeMap<Perm, ()> = BTreeMap::new();
    let id = Perm::identity(degree);
    let mut frontier = alloc::vec![id.clone()];
    seen.insert(id, ());
    while let Some(g) = frontier.pop() {
        for s in generators {
            let h = s.compose(&g);
            if !seen.contains_key(&h) {
                seen.insert(h.clone(), ());
                frontier.push(h);
            }
        }
    }
    seen.into_keys().collect()
}

impl fmt::Display for PermGroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gens: Vec<String> = self.generators.iter().map(|g| format!("{g}")).collect();
        write!(f, "<{}> of order {} on {} labels", gens.join(", "), self.order(), self.degree)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn group_orders() {
        assert_eq!(PermGroupSpec::symmetric(1).unwrap().order(), 1);
        assert_eq!(PermGroupSpec::symmetric(3).unwrap().order(), 6);
        assert_eq!(PermGroupSpec::symmetric(5).unwrap().order(), 120);
        assert_eq!(PermGroupSpec::fixing_first(4).unwrap().order(), 6);
        assert_eq!(PermGroupSpec::trivial(4).unwrap().order(), 1);
        assert_eq!(PermGroupSpec::by_name("sigma3-fixing-1", 4).unwrap().order(), 6);
        assert!(PermGroupSpec::by_name("sigma3-fixing-1", 5).is_err());
        assert!(PermGroupSpec::by_name("alternating", 5).is_err());
    }

    #[test]
    fn perm_basics() {
        let c = Perm::cycle(4, 1, 3);
        assert_eq!(c.order(), 3);
        assert_eq!(c.sign(), 1);
        assert_eq!(Perm::transposition(4, 2, 4).sign(), -1);
        assert!(c.compose(&c.inverse()).is_identity());
        assert!(Perm::from_images(alloc::vec![1, 1]).is_err());
    }

    #[test]
    fn cosets_partition_the_group() {
        let g = PermGroupSpec::symmetric(4).unwrap();
        let h = PermGroupSpec::fixing_first(4).unwrap();
        assert_eq!(g.coset_representatives(&h).len(), 4);
    }
}
