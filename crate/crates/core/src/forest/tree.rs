use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::error::{Error, Result};
use crate::forest::perm::Perm;

/// Largest leaf count representable; clades are stored as `u64` bit sets.
pub const MAX_LEAVES: u32 = 64;

/// A set of leaf labels, bit `i - 1` standing for label `i`.
pub type Clade = u64;

pub(crate) fn bit(label: u32) -> Clade {
    1u64 << (label - 1)
}

pub(crate) fn full(n: u32) -> Clade {
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

pub(crate) fn min_label(c: Clade) -> u32 {
    c.trailing_zeros() + 1
}

/// A vertex of a labelled rooted tree. The root edge is implicit above the
/// top vertex.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Node {
    Leaf(u32),
    Vertex(Vec<Node>),
}

impl Node {
    pub fn min_leaf(&self) -> u32 {
        match self {
            Node::Leaf(l) => *l,
            Node::Vertex(ch) => ch.iter().map(Node::min_leaf).min().unwrap_or(u32::MAX),
        }
    }

    pub fn clade(&self) -> Clade {
        match self {
            Node::Leaf(l) => bit(*l),
            Node::Vertex(ch) => ch.iter().fold(0, |acc, c| acc | c.clade()),
        }
    }

    fn internal_count(&self) -> usize {
        match self {
            Node::Leaf(_) => 0,
            Node::Vertex(ch) => 1 + ch.iter().map(Node::internal_count).sum::<usize>(),
        }
    }

    fn canonicalize(&mut self) {
        if let Node::Vertex(ch) = self {
            for c in ch.iter_mut() {
                c.canonicalize();
            }
            ch.sort_by_key(Node::min_leaf);
        }
    }

    fn collect_leaves(&self, out: &mut Vec<u32>) {
        match self {
            Node::Leaf(l) => out.push(*l),
            Node::Vertex(ch) => ch.iter().for_each(|c| c.collect_leaves(out)),
        }
    }

    fn preorder_clades(&self, out: &mut Vec<Clade>) {
        if let Node::Vertex(ch) = self {
            out.push(self.clade());
            ch.iter().for_each(|c| c.preorder_clades(out));
        }
    }

    fn map_leaves(&self, f: &impl Fn(u32) -> u32) -> Node {
        match self {
            Node::Leaf(l) => Node::Leaf(f(*l)),
            Node::Vertex(ch) => Node::Vertex(ch.iter().map(|c| c.map_leaves(f)).collect()),
        }
    }

    fn write(&self, out: &mut String) {
        match self {
            Node::Leaf(l) => out.push_str(&format!("{l}")),
            Node::Vertex(ch) => {
                out.push('(');
                for (i, c) in ch.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    c.write(out);
                }
                out.push(')');
            }
        }
    }

    /// Rebuilds the subtree on `clade` from a laminar family of clades.
    fn from_clades(clade: Clade, family: &[Clade]) -> Node {
        if clade.count_ones() == 1 {
            return Node::Leaf(min_label(clade));
        }
        let inner: Vec<Clade> = family.iter().copied().filter(|&c| c != clade && c & clade == c).collect();
        let maximal: Vec<Clade> =
            inner.iter().copied().filter(|&c| !inner.iter().any(|&d| d != c && d & c == c)).collect();
        let mut rest = clade;
        let mut children: Vec<Node> = maximal
            .iter()
            .map(|&c| {
                rest &= !c;
                Node::from_clades(c, &inner)
            })
            .collect();
        while rest != 0 {
            let l = min_label(rest);
            rest &= !bit(l);
            children.push(Node::Leaf(l));
        }
        children.sort_by_key(Node::min_leaf);
        Node::Vertex(children)
    }
}

/// A labelled rooted tree in canonical form: the children of every vertex
/// are sorted by the smallest leaf label below them.
///
/// Leaves are labelled `1..=n`, every internal vertex has at least two
/// children, and the only tree with zero internal vertices is the single leaf
/// (the operadic unit).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Tree {
    leaves: u32,
    root: Node,
}

/// How internal edges of a tree are ordered when orienting its cell.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum EdgeOrder {
    /// Depth-first preorder of the lower endpoints in canonical form.
    #[default]
    Preorder,
    /// Increasing value of the lower endpoint's clade bit set.
    CladeValue,
}

impl Tree {
    pub fn new(root: Node) -> Result<Self> {
        let mut labels = Vec::new();
        root.collect_leaves(&mut labels);
        let n = labels.len() as u32;
        if n == 0 || n > MAX_LEAVES {
            return Err(Error::Parse(format!("a tree needs between 1 and {MAX_LEAVES} leaves")));
        }
        labels.sort_unstable();
        if labels.iter().enumerate().any(|(i, &l)| l != i as u32 + 1) {
            return Err(Error::Parse(String::from("leaf labels must be exactly 1..n")));
        }
        fn valid(node: &Node) -> bool {
            match node {
                Node::Leaf(_) => true,
                Node::Vertex(ch) => ch.len() >= 2 && ch.iter().all(valid),
            }
        }
        if !valid(&root) {
            return Err(Error::Parse(String::from("internal vertices need at least two children")));
        }
        let mut root = root;
        root.canonicalize();
        Ok(Tree { leaves: n, root })
    }

    pub(crate) fn from_clade_family(n: u32, family: &[Clade]) -> Tree {
        Tree { leaves: n, root: Node::from_clades(full(n), family) }
    }

    /// The single leaf, unit for grafting.
    pub fn unit() -> Tree {
        Tree { leaves: 1, root: Node::Leaf(1) }
    }

    /// The tree with one internal vertex and `n` leaves.
    pub fn corolla(n: u32) -> Tree {
        assert!((2..=MAX_LEAVES).contains(&n));
        Tree { leaves: n, root: Node::Vertex((1..=n).map(Node::Leaf).collect()) }
    }

    /// Leaf `j` hangs off the top vertex; the other `i - 1` leaves share a
    /// second vertex.
    pub fn t_ji(j: u32, i: u32) -> Tree {
        assert!(i >= 3 && (1..=i).contains(&j));
        let rest = full(i) & !bit(j);
        Tree::from_clade_family(i, &[full(i), rest])
    }

    pub fn leaves(&self) -> u32 {
        self.leaves
    }

    pub fn root(&self) -> &Node {
        &self.root
    }

    pub fn internal_vertices(&self) -> usize {
        self.root.internal_count()
    }

    /// Clades of the internal vertices in depth-first preorder, top first.
    pub fn clades(&self) -> Vec<Clade> {
        let mut out = Vec::new();
        self.root.preorder_clades(&mut out);
        out
    }

    /// Internal edges, each named by the clade of its lower endpoint.
    pub fn edges(&self, order: EdgeOrder) -> Vec<Clade> {
        let mut e = self.clades();
        if !e.is_empty() {
            e.remove(0);
        }
        if order == EdgeOrder::CladeValue {
            e.sort_unstable();
        }
        e
    }

    /// Applies a label permutation and returns the canonical result.
    pub fn relabel(&self, perm: &Perm) -> Tree {
        debug_assert_eq!(perm.degree(), self.leaves);
        let mut root = self.root.map_leaves(&|l| perm.apply(l));
        root.canonicalize();
        Tree { leaves: self.leaves, root }
    }

    /// Sign `±1` by which `perm` acts on the orientation of this cell: the
    /// parity of the induced permutation of internal edges, each side listed
    /// in `order`.
    pub fn orientation_sign(&self, perm: &Perm, order: EdgeOrder) -> i8 {
        let image = self.relabel(perm);
        let target = image.edges(order);
        let moved: Vec<usize> = self
            .edges(order)
            .iter()
            .map(|&c| {
                let pc = perm.apply_clade(c);
                target.iter().position(|&t| t == pc).expect("relabelled edge exists")
            })
            .collect();
        parity_sign(&moved)
    }

    /// Collapses the internal edge above the vertex with the given clade.
    pub fn collapse(&self, clade: Clade) -> Option<Tree> {
        let family = self.clades();
        if clade == full(self.leaves) || !family.contains(&clade) {
            return None;
        }
        let rest: Vec<Clade> = family.into_iter().filter(|&c| c != clade).collect();
        Some(Tree::from_clade_family(self.leaves, &rest))
    }

    /// All trees with one more internal vertex that collapse onto `self`,
    /// each with the clade of its new vertex.
    pub fn expansions(&self) -> Vec<(Tree, Clade)> {
        let family = self.clades();
        let mut out = Vec::new();
        for &v in &family {
            let children = child_clades(v, &family);
            let m = children.len();
            if m < 3 {
                continue;
            }
            // Proper sub-multisets of size 2..m-1 of the children.
            for mask in 1u64..(1u64 << m) - 1 {
                if mask.count_ones() < 2 {
                    continue;
                }
                let new_clade = (0..m).filter(|i| mask >> i & 1 == 1).fold(0, |acc, i| acc | children[i]);
                let mut fam = family.clone();
                fam.push(new_clade);
                out.push((Tree::from_clade_family(self.leaves, &fam), new_clade));
            }
        }
        out.sort();
        out
    }

    /// Operadic composition: leaf `i` of `self` is replaced by `parts[i-1]`,
    /// whose labels are shifted past those of the earlier parts.
    pub fn graft(&self, parts: &[Tree]) -> Result<Tree> {
        if parts.len() != self.leaves as usize {
            return Err(Error::Arity { expected: self.leaves as usize, found: parts.len() });
        }
        let total: u32 = parts.iter().map(Tree::leaves).sum();
        if total > MAX_LEAVES {
            return Err(Error::Bound { what: "grafted leaf count", bound: MAX_LEAVES as usize });
        }
        let mut offsets = Vec::with_capacity(parts.len());
        let mut acc = 0;
        for part in parts {
            offsets.push(acc);
            acc += part.leaves;
        }
        fn substitute(node: &Node, parts: &[Tree], offsets: &[u32]) -> Node {
            match node {
                Node::Leaf(l) => {
                    let i = (*l - 1) as usize;
                    let off = offsets[i];
                    parts[i].root.map_leaves(&|x| x + off)
                }
                Node::Vertex(ch) => Node::Vertex(ch.iter().map(|c| substitute(c, parts, offsets)).collect()),
            }
        }
        let mut root = substitute(&self.root, parts, &offsets);
        root.canonicalize();
        Ok(Tree { leaves: total, root })
    }
}

/// Clades of the children of vertex `v` (leaves included as singletons).
pub(crate) fn child_clades(v: Clade, family: &[Clade]) -> Vec<Clade> {
    let inner: Vec<Clade> = family.iter().copied().filter(|&c| c != v && c & v == c).collect();
    let mut out: Vec<Clade> =
        inner.iter().copied().filter(|&c| !inner.iter().any(|&d| d != c && d & c == c)).collect();
    let mut rest = v & !out.iter().fold(0, |a, &c| a | c);
    while rest != 0 {
        let l = min_label(rest);
        rest &= !bit(l);
        out.push(bit(l));
    }
    out.sort_by_key(|&c| min_label(c));
    out
}

/// `(-1)^{inversions}` of a sequence of distinct indices.
pub(crate) fn parity_sign(seq: &[usize]) -> i8 {
    let mut inv = 0usize;
    for i in 0..seq.len() {
        for j in i + 1..seq.len() {
            if seq[i] > seq[j] {
                inv += 1;
            }
        }
    }
    if inv.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

impl fmt::Display for Tree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        self.root.write(&mut s);
        f.write_str(&s)
    }
}

impl FromStr for Tree {
    type Err = Error;

    fn from_str(s: &str) -> Result<Tree> {
        let bytes: Vec<u8> = s.bytes().filter(|b| !b.is_ascii_whitespace()).collect();
        let mut pos = 0;
        let node = parse_node(&bytes, &mut pos)?;
        if pos != bytes.len() {
            return Err(Error::Parse(format!("trailing input in tree {s:?}")));
        }
        Tree::new(node)
    }
}

fn parse_node(b: &[u8], pos: &mut usize) -> Result<Node> {
    match b.get(*pos) {
        Some(b'(') => {
            *pos += 1;
            let mut children = vec![parse_node(b, pos)?];
            loop {
                match b.get(*pos) {
                    Some(b',') => {
                        *pos += 1;
                        children.push(parse_node(b, pos)?);
                    }
                    Some(b')') => {
                        *pos += 1;
                        return Ok(Node::Vertex(children));
                    }
                    _ => return Err(Error::Parse(format!("expected ',' or ')' at byte {pos}"))),
                }
            }
        }
        Some(c) if c.is_ascii_digit() => {
            let start = *pos;
            while b.get(*pos).is_some_and(u8::is_ascii_digit) {
                *pos += 1;
            }
            let text = core::str::from_utf8(&b[start..*pos]).expect("ascii digits");
            text.parse::<u32>()
                .ok()
                .filter(|&l| l >= 1)
                .map(Node::Leaf)
                .ok_or_else(|| Error::Parse(format!("bad leaf label {text:?}")))
        }
        _ => Err(Error::Parse(format!("unexpected input at byte {pos}"))),
    }
}

/// All trees on the label set `clade`, memoized per subset.
fn trees_on(clade: Clade, memo: &mut BTreeMap<Clade, Vec<Node>>) -> Vec<Node> {
    if let Some(v) = memo.get(&clade) {
        return v.clone();
    }
    let mut out = Vec::new();
    if clade.count_ones() == 1 {
        out.push(Node::Leaf(min_label(clade)));
    } else {
        for blocks in set_partitions(clade) {
            if blocks.len() < 2 {
                continue;
            }
            let options: Vec<Vec<Node>> = blocks.iter().map(|&b| trees_on(b, memo)).collect();
            let mut idx = vec![0usize; options.len()];
            loop {
                out.push(Node::Vertex(idx.iter().zip(&options).map(|(&i, o)| o[i].clone()).collect()));
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
    }
    memo.insert(clade, out.clone());
    out
}

/// Set partitions of a bit set, blocks listed by increasing minimum.
pub(crate) fn set_partitions(set: Clade) -> Vec<Vec<Clade>> {
    if set == 0 {
        return vec![Vec::new()];
    }
    let first = set & set.wrapping_neg();
    let rest = set & !first;
    let mut out = Vec::new();
    // The block containing the minimum is `first | sub` for every subset of `rest`.
    let mut sub = rest;
    loop {
        let block = first | sub;
        for mut tail in set_partitions(rest & !sub) {
            tail.insert(0, block);
            out.push(tail);
        }
        if sub == 0 {
            break;
        }
        sub = (sub - 1) & rest;
    }
    out
}

/// Isomorphism classes of trees with `n` labelled leaves and `k` internal
/// vertices, in canonical order. Empty when `k` is outside `1..n`.
pub fn enumerate_trees(n: u32, k: usize) -> Vec<Tree> {
    if n < 2 || k == 0 || k >= n as usize || n > MAX_LEAVES {
        return Vec::new();
    }
    enumerate_all_trees(n).into_iter().nth(k - 1).unwrap_or_default()
}

/// Trees on `n` leaves grouped by internal vertex count `1..n`.
pub fn enumerate_all_trees(n: u32) -> Vec<Vec<Tree>> {
    if !(2..=MAX_LEAVES).contains(&n) {
        return Vec::new();
    }
    let mut memo = BTreeMap::new();
    let mut by_k: Vec<Vec<Tree>> = vec![Vec::new(); n as usize - 1];
    for mut root in trees_on(full(n), &mut memo) {
        root.canonicalize();
        let k = root.internal_count();
        by_k[k - 1].push(Tree { leaves: n, root });
    }
    for v in &mut by_k {
        v.sort();
    }
    by_k
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(s: &str) -> Tree {
        s.parse().unwrap()
    }

    #[test]
    fn canonical_string_roundtrip() {
        let tree = t("(3,(2,1))");
        assert_eq!(tree.to_string(), "((1,2),3)");
        assert_eq!(t(&tree.to_string()), tree);
        assert_eq!(Tree::corolla(3).to_string(), "(1,2,3)");
        assert_eq!(Tree::t_ji(3, 3).to_string(), "((1,2),3)");
        assert_eq!(Tree::t_ji(1, 4).to_string(), "(1,(2,3,4))");
    }

    #[test]
    fn rejects_bad_trees() {
        assert!("(1,(2))".parse::<Tree>().is_err());
        assert!("(1,3)".parse::<Tree>().is_err());
        assert!("(1,1)".parse::<Tree>().is_err());
        assert!("(1,2".parse::<Tree>().is_err());
        assert!("(0,1)".parse::<Tree>().is_err());
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(enumerate_trees(2, 1).len(), 1);
        assert_eq!(enumerate_trees(3, 2).len(), 3);
        assert_eq!(enumerate_trees(4, 2).len(), 10);
        assert_eq!(enumerate_trees(4, 3).len(), 15);
        assert!(enumerate_trees(4, 4).is_empty());
        assert!(enumerate_trees(4, 0).is_empty());
        // Totals are the labelled series 1, 4, 26, 236, 2752.
        let totals: Vec<usize> = (2..=6).map(|n| enumerate_all_trees(n).iter().map(Vec::len).sum()).collect();
        assert_eq!(totals, vec![1, 4, 26, 236, 2752]);
    }

    #[test]
    fn expansions_of_small_trees() {
        let e: Vec<String> = Tree::corolla(3).expansions().iter().map(|(t, _)| t.to_string()).collect();
        let mut expected: Vec<String> = (1..=3).map(|j| Tree::t_ji(j, 3).to_string()).collect();
        expected.sort();
        let mut got = e.clone();
        got.sort();
        assert_eq!(got, expected);
        assert!(Tree::corolla(2).expansions().is_empty());
        assert_eq!(Tree::corolla(4).expansions().len(), 10);
    }

    #[test]
    fn collapse_inverts_expansion() {
        for tree in enumerate_all_trees(5).concat() {
            for (big, clade) in tree.expansions() {
                assert_eq!(big.collapse(clade).as_ref(), Some(&tree));
            }
        }
    }

    #[test]
    fn figure_one_graft() {
        let out = Tree::corolla(2).graft(&[Tree::corolla(2), Tree::corolla(3)]).unwrap();
        assert_eq!(out.to_string(), "((1,2),(3,4,5))");
        assert_eq!(out.internal_vertices(), 3);
        let base = t("((1,2),3)");
        assert_eq!(base.graft(&[Tree::unit(), Tree::unit(), Tree::unit()]).unwrap(), base);
        assert!(matches!(base.graft(&[Tree::unit()]), Err(Error::Arity { .. })));
    }
}
