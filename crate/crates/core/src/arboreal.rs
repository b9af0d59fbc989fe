//! Cellular chains on the space of labelled trees and their homology.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::dims::GradedDims;
use crate::error::{Error, Result};
use crate::fieldlin::{homology_rank, Matrix, Prime};
use crate::forest::{check_tree_levels, enumerate_all_trees, parity_sign, EdgeOrder, Tree};

/// Largest leaf count built unless the caller raises the bound.
pub const DEFAULT_BOUND: u32 = 6;

/// How the cells of the tree complex are oriented.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum SignConvention {
    /// A cell is oriented by the preorder of its internal edges. The
    /// expansion creating edge `e` contributes `(-1)^i`, where `i` is the
    /// position of `e` among the edges of the larger tree, times the parity
    /// relating the two orderings of the shared edges.
    #[default]
    EdgePreorder,
    /// As [`SignConvention::EdgePreorder`] with edges sorted by clade value.
    EdgeClade,
    /// `(-1)^(i+1)` where the split vertex is the `i`-th vertex (from 1) of
    /// the smaller tree in depth-first order. Kept for comparison; it does
    /// not square to zero once two vertices can split.
    SplitVertexIndex,
}

impl SignConvention {
    /// Edge order used to orient cells, if the convention comes from one.
    pub fn edge_order(self) -> Option<EdgeOrder> {
        match self {
            SignConvention::EdgePreorder => Some(EdgeOrder::Preorder),
            SignConvention::EdgeClade => Some(EdgeOrder::CladeValue),
            SignConvention::SplitVertexIndex => None,
        }
    }
}

/// Cellular chains of the tree space on `n` leaves over `F_p`.
///
/// The cell of a tree with `k` internal vertices sits in degree `-k`.
#[derive(Clone, Debug)]
pub struct ChainComplex {
    n: u32,
    p: Prime,
    convention: SignConvention,
    bases: Vec<Vec<Tree>>,
    index: Vec<BTreeMap<Tree, usize>>,
    differentials: Vec<Matrix>,
}

impl ChainComplex {
    pub fn leaves(&self) -> u32 {
        self.n
    }

    pub fn prime(&self) -> Prime {
        self.p
    }

    pub fn convention(&self) -> SignConvention {
        self.convention
    }

    /// Degrees `-1` down to `-(n-1)`.
    pub fn degrees(&self) -> impl Iterator<Item = i64> + '_ {
        (1..=self.bases.len() as i64).map(|k| -k)
    }

    /// Basis of degree `degree`, in canonical tree order.
    pub fn basis(&self, degree: i64) -> &[Tree] {
        match self.slot(degree) {
            Some(k) => &self.bases[k],
            None => &[],
        }
    }

    pub fn labels(&self, degree: i64) -> Vec<String> {
        self.basis(degree).iter().map(ToString::to_string).collect()
    }

    pub fn position(&self, t: &Tree) -> Option<(i64, usize)> {
        let k = t.internal_vertices();
        let i = *self.index.get(k.checked_sub(1)?)?.get(t)?;
        Some((-(k as i64), i))
    }

    /// The differential leaving degree `degree`, or `None` at the bottom.
    pub fn differential(&self, degree: i64) -> Option<&Matrix> {
        self.differentials.get(self.slot(degree)?)
    }

    fn slot(&self, degree: i64) -> Option<usize> {
        let k = usize::try_from(-degree).ok()?.checked_sub(1)?;
        (k < self.bases.len()).then_some(k)
    }

    pub fn homology(&self) -> Result<GradedDims> {
        let mut out = GradedDims::new();
        for degree in self.degrees() {
            let dim = self.basis(degree).len();
            let d_in = match self.differential(degree + 1) {
                Some(m) => m.clone(),
                None => Matrix::zeros(self.p, dim, 0),
            };
            let d_out = match self.differential(degree) {
                Some(m) => m.clone(),
                None => Matrix::zeros(self.p, 0, dim),
            };
            out.add(degree, homology_rank(&d_in, &d_out)?);
        }
        Ok(out)
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.degrees().map(|d| if d % 2 == 0 { 1 } else { -1 } * self.basis(d).len() as i64).sum()
    }
}

/// Builds the complex with the default bound and sign convention.
pub fn build_complex(n: u32, p: Prime) -> Result<ChainComplex> {
    build_complex_with(n, p, SignConvention::default(), DEFAULT_BOUND)
}

pub fn build_complex_with(n: u32, p: Prime, convention: SignConvention, bound: u32) -> Result<ChainComplex> {
    if n > bound {
        return Err(Error::Bound { what: "leaf count of the tree complex", bound: bound as usize });
    }
    if n < 2 {
        return Err(Error::Unsupported(format!("the tree complex needs n >= 2, got {n}")));
    }
    build_complex_from(n, p, convention, enumerate_all_trees(n))
}

/// Builds the complex on supplied bases, one level per internal vertex count,
/// after checking them with [`check_tree_levels`].
pub fn build_complex_from(
    n: u32,
    p: Prime,
    convention: SignConvention,
    bases: Vec<Vec<Tree>>,
) -> Result<ChainComplex> {
    check_tree_levels(n, &bases)?;
    let index: Vec<BTreeMap<Tree, usize>> =
        bases.iter().map(|b| b.iter().cloned().enumerate().map(|(i, t)| (t, i)).collect()).collect();
    let mut differentials = Vec::new();
    for k in 0..bases.len().saturating_sub(1) {
        let mut d = Matrix::zeros(p, bases[k + 1].len(), bases[k].len());
        for (col, t) in bases[k].iter().enumerate() {
            for (e, clade) in t.expansions() {
                let row = *index[k + 1]
                    .get(&e)
                    .ok_or_else(|| Error::Integrity(format!("expansion {e} missing from basis")))?;
                d.set(row, col, expansion_sign(t, &e, clade, convention));
            }
        }
        differentials.push(d);
    }
    for w in differentials.windows(2) {
        if !w[1].mul(&w[0])?.is_zero() {
            return Err(Error::Integrity(format!(
                "d∘d ≠ 0 on the tree complex for n = {n} under {convention:?}"
            )));
        }
    }
    Ok(ChainComplex { n, p, convention, bases, index, differentials })
}

/// Incidence sign of `big` in the boundary of `small`; `big` has the extra
/// vertex with the given clade.
pub fn expansion_sign(small: &Tree, big: &Tree, clade: u64, convention: SignConvention) -> i64 {
    match convention.edge_order() {
        Some(order) => {
            let big_edges = big.edges(order);
            let pos = big_edges.iter().position(|&c| c == clade).expect("new edge present");
            // Compare the orientation of `small` with the one `big` induces on it.
            let small_edges = small.edges(order);
            let induced: Vec<usize> = big_edges
                .iter()
                .filter(|&&c| c != clade)
                .map(|c| small_edges.iter().position(|s| s == c).expect("shared edge"))
                .collect();
            let sign = parity_sign(&induced) as i64;
            if pos % 2 == 0 {
                sign
            } else {
                -sign
            }
        }
        None => {
            // The vertex that splits is the smallest clade of `small` above the new one.
            let clades = small.clades();
            let i = clades
                .iter()
                .enumerate()
                .filter(|(_, &c)| c & clade == clade)
                .min_by_key(|(_, c)| c.count_ones())
                .map(|(i, _)| i + 1)
                .expect("split vertex present");
            if i % 2 == 1 {
                1
            } else {
                -1
            }
        }
    }
}

/// A cell produced by grafting cells together.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraftedCell {
    pub tree: Tree,
    pub label: String,
    pub degree: i64,
}

/// Grafts cells and checks the result is a cell of the expected dimension.
///
/// Vertex counts add (units contribute nothing) and the output must be a
/// canonical tree on the summed leaf count. With `target` given, the cell
/// must also be in that complex's basis.
pub fn graft_chain_map(t: &Tree, parts: &[Tree], target: Option<&ChainComplex>) -> Result<GraftedCell> {
    let tree = t.graft(parts)?;
    let expected = t.internal_vertices() + parts.iter().map(Tree::internal_vertices).sum::<usize>();
    if tree.internal_vertices() != expected {
        return Err(Error::Integrity(format!(
            "grafting produced {} vertices, expected {expected}",
            tree.internal_vertices()
        )));
    }
    let label = tree.to_string();
    let reparsed: Tree = label.parse()?;
    if reparsed != tree {
        return Err(Error::Integrity(format!("{label} is not canonical")));
    }
    if let Some(c) = target {
        if c.leaves() != tree.leaves() || c.position(&tree).is_none() {
            return Err(Error::Integrity(format!("{label} is not a basis cell of the target")));
        }
    }
    Ok(GraftedCell { degree: -(expected as i64), label, tree })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p3() -> Prime {
        Prime::new(3).unwrap()
    }

    #[test]
    fn three_leaf_differential_is_all_ones() {
        let c = build_complex(3, p3()).unwrap();
        let d = c.differential(-1).unwrap();
        assert_eq!((d.rows(), d.cols()), (3, 1));
        assert!((0..3).all(|r| d.get(r, 0) == 1));
    }

    #[test]
    fn small_homology() {
        let h2 = build_complex(2, p3()).unwrap().homology().unwrap();
        assert_eq!(h2.dims.into_iter().collect::<Vec<_>>(), [(-1, 1)]);
        let h3 = build_complex(3, p3()).unwrap().homology().unwrap();
        assert_eq!(h3.dims.into_iter().collect::<Vec<_>>(), [(-2, 2)]);
        let c4 = build_complex(4, p3()).unwrap();
        assert_eq!(c4.euler_characteristic(), -6);
        assert_eq!(c4.homology().unwrap().dims.into_iter().collect::<Vec<_>>(), [(-3, 6)]);
    }

    #[test]
    fn split_vertex_index_convention_fails() {
        let p = p3();
        assert!(build_complex_with(3, p, SignConvention::SplitVertexIndex, 6).is_ok());
        let err = build_complex_with(4, p, SignConvention::SplitVertexIndex, 6).unwrap_err();
        assert_eq!(err.kind(), crate::ErrorKind::Integrity);
    }

    #[test]
    fn bound_is_enforced() {
        let err = build_complex(7, p3()).unwrap_err();
        assert_eq!(err.kind(), crate::ErrorKind::Unsupported);
    }

    #[test]
    fn grafting_figure() {
        let t2 = Tree::corolla(2);
        let t3 = Tree::corolla(3);
        let target = build_complex(5, p3()).unwrap();
        let cell = graft_chain_map(&t3, &[t2.clone(), Tree::unit(), t3.clone()], Some(&target));
        assert!(cell.is_err());
        let cell = graft_chain_map(&t2, &[t2.clone(), t3], Some(&target)).unwrap();
        assert_eq!(cell.label, "((1,2),(3,4,5))");
        assert_eq!(cell.degree, -3);
        let unit = graft_chain_map(&Tree::unit(), std::slice::from_ref(&t2), None).unwrap();
        assert_eq!(unit.tree, t2);
    }
}
