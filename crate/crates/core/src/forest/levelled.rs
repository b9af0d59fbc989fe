use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::forest::tree::{full, set_partitions, Clade, Tree, MAX_LEAVES};

/// A tree with a strictly increasing level function on its internal vertices.
///
/// Levels run over `1..=k` and are listed in the preorder of
/// [`Tree::clades`]. Two levelled trees are isomorphic exactly when they have
/// the same labelled tree and the same level list, since levels are only
/// defined up to an increasing reparametrization.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LevelledTree {
    tree: Tree,
    levels: Vec<u32>,
}

impl LevelledTree {
    pub fn new(tree: Tree, levels: Vec<u32>) -> Result<Self> {
        let clades = tree.clades();
        if levels.len() != clades.len() {
            return Err(Error::Arity { expected: clades.len(), found: levels.len() });
        }
        let map: BTreeMap<Clade, u32> = clades.iter().copied().zip(levels.iter().copied()).collect();
        for (&c, &l) in &map {
            for (&d, &m) in &map {
                if d != c && d & c == d && m <= l {
                    return Err(Error::Parse(alloc::string::String::from(
                        "levels must increase away from the root",
                    )));
                }
            }
        }
        let mut distinct: Vec<u32> = levels.clone();
        distinct.sort_unstable();
        distinct.dedup();
        if distinct.iter().enumerate().any(|(i, &l)| l != i as u32 + 1) {
            return Err(Error::Parse(alloc::string::String::from("levels must fill 1..k")));
        }
        Ok(LevelledTree { tree, levels })
    }

    fn from_clade_levels(n: u32, map: &BTreeMap<Clade, u32>) -> Self {
        let family: Vec<Clade> = map.keys().copied().collect();
        let tree = Tree::from_clade_family(n, &family);
        let levels = tree.clades().iter().map(|c| map[c]).collect();
        LevelledTree { tree, levels }
    }

    /// `T_{n,k}`: every vertex has `n` children and there are `k` full levels,
    /// on the labels `1..=n^k`.
    pub fn uniform(n: u32, k: u32) -> Result<Self> {
        let leaves = n.checked_pow(k).filter(|&l| l <= MAX_LEAVES && n >= 2 && k >= 1);
        let Some(leaves) = leaves else {
            return Err(Error::Bound { what: "leaf count of T_{n,k}", bound: MAX_LEAVES as usize });
        };
        let mut map = BTreeMap::new();
        for level in 1..=k {
            let block = n.pow(k - level + 1);
            for start in (0..leaves).step_by(block as usize) {
                let c = full(block) << start;
                map.insert(c, level);
            }
        }
        Ok(Self::from_clade_levels(leaves, &map))
    }

    pub fn tree(&self) -> &Tree {
        &self.tree
    }

    pub fn levels(&self) -> &[u32] {
        &self.levels
    }

    pub fn level_count(&self) -> u32 {
        self.levels.iter().copied().max().unwrap_or(0)
    }

    /// Grafts levelled trees: the base keeps its levels and every part's
    /// levels are placed after them.
    pub fn graft(&self, parts: &[LevelledTree]) -> Result<LevelledTree> {
        let trees: Vec<Tree> = parts.iter().map(|p| p.tree.clone()).collect();
        let grafted = self.tree.graft(&trees)?;
        let offset = self.level_count();
        let mut shifts = Vec::with_capacity(parts.len());
        let mut acc = 0u32;
        for p in parts {
            shifts.push(acc);
            acc += p.tree.leaves();
        }
        let block_of = |label: u32| -> Clade {
            let i = (label - 1) as usize;
            full(parts[i].tree.leaves()) << shifts[i]
        };
        let mut map = BTreeMap::new();
        for (c, &l) in self.tree.clades().iter().zip(&self.levels) {
            let mut out = 0;
            let mut rest = *c;
            while rest != 0 {
                let label = rest.trailing_zeros() + 1;
                rest &= rest - 1;
                out |= block_of(label);
            }
            map.insert(out, l);
        }
        for (i, p) in parts.iter().enumerate() {
            for (c, &l) in p.tree.clades().iter().zip(&p.levels) {
                map.insert(c << shifts[i], l + offset);
            }
        }
        let out = Self::from_clade_levels(grafted.leaves(), &map);
        debug_assert_eq!(out.tree, grafted);
        Ok(out)
    }
}

impl fmt::Display for LevelledTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} @", self.tree)?;
        for l in &self.levels {
            write!(f, " {l}")?;
        }
        Ok(())
    }
}

/// Levelled trees with `n` leaves and exactly `k` levels.
///
/// These are in bijection with strictly decreasing chains of set partitions
/// from the one-block partition down to singletons of length `k`; cutting the
/// tree just below each level reads off the chain.
pub fn enumerate_levelled(n: u32, k: u32) -> Vec<LevelledTree> {
    if n < 2 || k == 0 || k >= n || n > MAX_LEAVES {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut map = BTreeMap::new();
    chains(n, alloc::vec![full(n)], 1, k, &mut map, &mut out);
    out.sort();
    out
}

fn chains(
    n: u32,
    blocks: Vec<Clade>,
    level: u32,
    k: u32,
    map: &mut BTreeMap<Clade, u32>,
    out: &mut Vec<LevelledTree>,
) {
    let splittable: Vec<Clade> = blocks.iter().copied().filter(|b| b.count_ones() > 1).collect();
    if level > k {
        if splittable.is_empty() {
            out.push(LevelledTree::from_clade_levels(n, map));
        }
        return;
    }
    if splittable.is_empty() {
        return;
    }
    let options: Vec<Vec<Vec<Clade>>> = splittable.iter().map(|&b| set_partitions(b)).collect();
    let mut idx = alloc::vec![0usize; options.len()];
    loop {
        let split: Vec<bool> = idx.iter().zip(&options).map(|(&i, o)| o[i].len() > 1).collect();
        if split.iter().any(|&s| s) {
            let mut next: Vec<Clade> = blocks.iter().copied().filter(|b| b.count_ones() == 1).collect();
            let mut added = Vec::new();
            for (j, &b) in splittable.iter().enumerate() {
                let parts = &options[j][idx[j]];
                next.extend(parts.iter().copied());
                if split[j] {
                    map.insert(b, level);
                    added.push(b);
                }
            }
            // Splitting one binary step at a time gives the most levels.
            let room: u32 = next.iter().map(|b| b.count_ones() - 1).sum();
            let left = k - level;
            if (room == 0 && left == 0) || (room > 0 && left > 0 && room >= left) {
                chains(n, next, level + 1, k, map, out);
            }
            for b in added {
                map.remove(&b);
            }
        }
        let mut d = 0;
        while d < idx.len() {
            idx[d] += 1;
            if idx[d] < options[d].len() {
                break;
            }
            idx[d] = 0;
            d += 1;
        }
        if d == idx.len() {
            break;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_counts() {
        assert_eq!(enumerate_levelled(3, 1).len(), 1);
        assert_eq!(enumerate_levelled(3, 1)[0].tree(), &Tree::corolla(3));
        assert_eq!(enumerate_levelled(3, 2).len(), 3);
        // Chains of length k in the partition lattice of {1,2,3,4}.
        assert_eq!(enumerate_levelled(4, 1).len(), 1);
        assert_eq!(enumerate_levelled(4, 2).len(), 13);
        assert_eq!(enumerate_levelled(4, 3).len(), 18);
    }

    #[test]
    fn uniform_tree_shape() {
        let t32 = LevelledTree::uniform(3, 2).unwrap();
        assert_eq!(t32.tree().to_string(), "((1,2,3),(4,5,6),(7,8,9))");
        assert_eq!(t32.levels(), &[1, 2, 2, 2]);
        assert_eq!(LevelledTree::uniform(3, 1).unwrap().tree(), &Tree::corolla(3));
    }

    #[test]
    fn grafting_uniform_trees() {
        let t3 = LevelledTree::uniform(3, 1).unwrap();
        let t31 = LevelledTree::uniform(3, 1).unwrap();
        let out = t3.graft(&[t31.clone(), t31.clone(), t31]).unwrap();
        assert_eq!(out, LevelledTree::uniform(3, 2).unwrap());
    }

    #[test]
    fn invalid_levels_rejected() {
        let t = Tree::t_ji(1, 3);
        assert!(LevelledTree::new(t.clone(), alloc::vec![2, 1]).is_err());
        assert!(LevelledTree::new(t.clone(), alloc::vec![1, 3]).is_err());
        assert!(LevelledTree::new(t, alloc::vec![1, 2]).is_ok());
    }
}
