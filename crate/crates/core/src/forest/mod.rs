//! Labelled rooted trees, label permutations, and levelled trees.

mod levelled;
mod perm;
mod tree;

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

pub use levelled::{enumerate_levelled, LevelledTree};
pub use perm::{Perm, PermGroupSpec, MAX_GROUP_DEGREE};
pub use tree::{enumerate_all_trees, enumerate_trees, Clade, EdgeOrder, Node, Tree, MAX_LEAVES};

pub(crate) use tree::parity_sign;

use crate::error::{Error, Result};

/// Confirms that `levels` lists every tree on `n` leaves exactly once, level
/// `k - 1` holding those with `k` internal vertices, in canonical order.
///
/// Expansion from the corolla reaches every tree, so a list that starts at
/// the corolla and whose next level is always the set of expansions of the
/// current one is complete.
pub fn check_tree_levels(n: u32, levels: &[Vec<Tree>]) -> Result<()> {
    let bad = |why: &str| Err(Error::Integrity(alloc::format!("tree levels for n = {n}: {why}")));
    if n < 2 || levels.len() != n as usize - 1 {
        return bad("wrong number of levels");
    }
    if levels[0] != [Tree::corolla(n)] {
        return bad("level 1 is not the corolla");
    }
    for k in 0..levels.len() {
        if levels[k].windows(2).any(|w| w[0] >= w[1]) {
            return bad("a level is not strictly sorted");
        }
        let grown: BTreeSet<Tree> = levels[k].iter().flat_map(|t| t.expansions()).map(|(e, _)| e).collect();
        match levels.get(k + 1) {
            Some(next) if next.iter().eq(grown.iter()) => {}
            None if grown.is_empty() => {}
            _ => return bad("a level is not the expansion of the one before"),
        }
    }
    Ok(())
}

/// The subgroup of `g` whose elements fix `t` after relabelling.
pub fn symmetry_group(t: &Tree, g: &PermGroupSpec) -> Result<PermGroupSpec> {
    if g.degree() != t.leaves() {
        return Err(Error::Arity { expected: t.leaves() as usize, found: g.degree() as usize });
    }
    Ok(g.subgroup_where(|s| &t.relabel(s) == t))
}

/// One orbit of a group acting on trees.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitRow {
    /// Smallest tree of the orbit in the canonical order.
    pub representative: Tree,
    pub stabilizer_order: usize,
    pub orbit_size: usize,
}

/// Orbits of `g` on the trees with `n` leaves and `k` internal vertices.
pub fn orbit_census(n: u32, k: usize, g: &PermGroupSpec) -> Result<Vec<OrbitRow>> {
    if g.degree() != n {
        return Err(Error::Arity { expected: n as usize, found: g.degree() as usize });
    }
    orbit_census_of(&enumerate_trees(n, k), g)
}

/// Orbits of `g` on the given set of trees, which must be `g`-stable.
pub fn orbit_census_of(trees: &[Tree], g: &PermGroupSpec) -> Result<Vec<OrbitRow>> {
    let pool: BTreeSet<&Tree> = trees.iter().collect();
    let mut seen: BTreeSet<Tree> = BTreeSet::new();
    let mut rows = Vec::new();
    for t in &pool {
        if seen.contains(*t) {
            continue;
        }
        let orbit: BTreeSet<Tree> = g.elements().iter().map(|s| t.relabel(s)).collect();
        if let Some(stray) = orbit.iter().find(|o| !pool.contains(o)) {
            return Err(Error::Integrity(alloc::format!("{stray} lies outside the tree set")));
        }
        let orbit_size = orbit.len();
        let stabilizer_order = symmetry_group(t, g)?.order();
        if stabilizer_order * orbit_size != g.order() {
            return Err(Error::Integrity(alloc::format!("orbit of {t} breaks orbit-stabilizer")));
        }
        rows.push(OrbitRow {
            representative: orbit.first().cloned().unwrap_or_else(|| (*t).clone()),
            stabilizer_order,
            orbit_size,
        });
        seen.extend(orbit);
    }
    Ok(rows)
}
