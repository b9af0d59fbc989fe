//! The spectral sequence computing the mod `p` homology of the layers
//! `H_*(∂_n ∧_{hG} (S^j)^{∧n})` from the equivariant tree cells.
//!
//! Row `s = 0` is the complex of `G`-coinvariants of the cellular chains
//! twisted by the sphere character. For `s > 0` only cells fixed by a Sylow
//! subgroup `P` (cyclic of order `p`) contribute; row `s` is the complex of
//! `N_G(P)`-coinvariants of the `P`-fixed cells, twisted in addition by the
//! action of the normalizer on `H_s(P)`.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::arboreal::{expansion_sign, SignConvention, DEFAULT_BOUND};
use crate::dims::GradedDims;
use crate::error::{Error, Result};
use crate::fieldlin::{homology_rank, Matrix, Prime};
use crate::forest::{enumerate_all_trees, EdgeOrder, Perm, PermGroupSpec, Tree};
use crate::grouphom::{cyclic_sylow, small_group_homology, CharacterModule};

const CONVENTION: SignConvention = SignConvention::EdgePreorder;

/// One column: a `G`-orbit of trees and its `E¹` ranks by total degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Column {
    pub tree: Tree,
    pub k: usize,
    pub stabilizer_order: usize,
    pub entries: GradedDims,
}

/// A nonzero scalar of `d₁` between two columns in group-homology degree `s`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct D1Block {
    pub s: i64,
    pub source: usize,
    pub target: usize,
    pub scalar: u32,
}

/// A page of the spectral sequence.
#[derive(Clone, Debug)]
pub struct SSPage {
    pub n: u32,
    pub j: i64,
    pub prime: Prime,
    pub max_degree: i64,
    pub page: u8,
    pub columns: Vec<Column>,
    /// Empty on page 1.
    pub d1: Vec<D1Block>,
    /// `E²` ranks keyed by `(k, s)`; empty on page 1.
    pub e2: BTreeMap<(usize, i64), usize>,
    rows: BTreeMap<u32, RowComplex>,
    period: u32,
    s_max: i64,
}

/// Coinvariant complex of one row: per `k`, the columns with a basis vector,
/// and the differentials from `k` to `k + 1`.
#[derive(Clone, Debug)]
struct RowComplex {
    basis: Vec<Vec<usize>>,
    d: Vec<Matrix>,
}

struct Orbits {
    reps: Vec<Tree>,
    /// Each tree's orbit and an element carrying the representative to it.
    of: BTreeMap<Tree, (usize, Perm)>,
    stabilizers: Vec<PermGroupSpec>,
}

fn orbits(trees: &[Tree], group: &PermGroupSpec) -> Orbits {
    let mut sorted: Vec<&Tree> = trees.iter().collect();
    sorted.sort();
    let mut out = Orbits { reps: Vec::new(), of: BTreeMap::new(), stabilizers: Vec::new() };
    for t in sorted {
        if out.of.contains_key(t) {
            continue;
        }
        let idx = out.reps.len();
        let mut stab = Vec::new();
        for g in group.elements() {
            let image = t.relabel(g);
            if &image == t {
                stab.push(g.clone());
            }
            out.of.entry(image).or_insert_with(|| (idx, g.clone()));
        }
        out.reps.push(t.clone());
        out.stabilizers.push(PermGroupSpec::from_closed_set(group.degree(), stab));
    }
    out
}

/// Twisting character `ψ(g, T) = u(g)^i · or(g, T) · sgn(g)^j` in `F_p`.
struct Twist<'a> {
    p: Prime,
    j: i64,
    i: u64,
    units: Option<&'a BTreeMap<Perm, u32>>,
}

impl Twist<'_> {
    fn value(&self, g: &Perm, t: &Tree) -> u32 {
        let mut sign = t.orientation_sign(g, EdgeOrder::Preorder) as i64;
        if self.j.rem_euclid(2) == 1 {
            sign *= g.sign() as i64;
        }
        let v = self.p.reduce(sign);
        match self.units {
            Some(u) => self.p.mul(v, self.p.pow(u[g], self.i)),
            None => v,
        }
    }
}

/// Coinvariants of `group` on the chains spanned by `levels` (trees by `k`).
fn coinvariant_row(
    levels: &[Vec<Tree>],
    group: &PermGroupSpec,
    twist: &Twist<'_>,
    column_of: &dyn Fn(usize, &Tree) -> usize,
) -> Result<RowComplex> {
    let p = twist.p;
    let orbs: Vec<Orbits> = levels.iter().map(|l| orbits(l, group)).collect();
    // Orbit index -> position in the basis, for orbits whose class survives.
    let mut position: Vec<BTreeMap<usize, usize>> = Vec::new();
    let mut basis = Vec::new();
    for (k, o) in orbs.iter().enumerate() {
        let mut pos = BTreeMap::new();
        let mut cols = Vec::new();
        for (idx, rep) in o.reps.iter().enumerate() {
            if o.stabilizers[idx].elements().iter().all(|h| twist.value(h, rep) == 1) {
                pos.insert(idx, cols.len());
                cols.push(column_of(k, rep));
            }
        }
        position.push(pos);
        basis.push(cols);
    }
    let mut d = Vec::new();
    for k in 0..orbs.len().saturating_sub(1) {
        let mut m = Matrix::zeros(p, position[k + 1].len(), position[k].len());
        for (&idx, &col) in &position[k] {
            let rep = &orbs[k].reps[idx];
            for (e, clade) in rep.expansions() {
                let Some((target, g)) = orbs[k + 1].of.get(&e) else {
                    // Not a fixed cell: it dies in positive degrees.
                    continue;
                };
                let Some(&row) = position[k + 1].get(target) else {
                    continue;
                };
                let eps = p.reduce(expansion_sign(rep, &e, clade, CONVENTION));
                let psi = twist.value(g, &orbs[k + 1].reps[*target]);
                m.add_to(row, col, p.mul(eps, p.inv(psi)));
            }
        }
        d.push(m);
    }
    for w in d.windows(2) {
        if !w[1].mul(&w[0])?.is_zero() {
            return Err(Error::Integrity(String::from("coinvariant differential does not square to zero")));
        }
    }
    Ok(RowComplex { basis, d })
}

impl SSPage {
    fn row_key(&self, s: i64) -> u32 {
        if s == 0 {
            0
        } else {
            1 + ((s as u64).div_ceil(2) - 1) as u32 % self.period
        }
    }

    fn row(&self, s: i64) -> Option<&RowComplex> {
        if s < 0 {
            return None;
        }
        self.rows.get(&self.row_key(s))
    }

    pub fn total_degree(&self, k: usize, s: i64) -> i64 {
        self.j * self.n as i64 - k as i64 + s
    }

    /// Column index of the orbit containing `t`.
    pub fn column_of(&self, t: &Tree) -> Option<usize> {
        self.columns.iter().position(|c| &c.tree == t)
    }

    /// `E¹` rank at `(k, s)`.
    pub fn e1(&self, k: usize, s: i64) -> usize {
        self.row(s).and_then(|r| r.basis.get(k - 1)).map_or(0, Vec::len)
    }

    /// `d₁` between two columns in degree `s`, as a `dim_target × dim_source`
    /// matrix (each side has dimension at most 1).
    pub fn block(&self, source: usize, target: usize, s: i64) -> Matrix {
        let (ks, kt) = (self.columns[source].k, self.columns[target].k);
        let row = self.row(s);
        let find = |k: usize, c: usize| {
            row.and_then(|r| r.basis.get(k - 1)).and_then(|b| b.iter().position(|&x| x == c))
        };
        let (a, b) = (find(ks, source), find(kt, target));
        let mut m = Matrix::zeros(self.prime, usize::from(b.is_some()), usize::from(a.is_some()));
        if let (Some(a), Some(b), Some(r)) = (a, b, row) {
            if kt == ks + 1 {
                m.set(0, 0, r.d[ks - 1].get(b, a) as i64);
            }
        }
        m
    }

    /// Sums the page's ranks by total degree through `max_degree`.
    pub fn total(&self) -> GradedDims {
        let mut out = GradedDims::new();
        if self.page == 1 {
            for c in &self.columns {
                for (&d, &r) in &c.entries.dims {
                    out.add(d, r);
                }
            }
        } else {
            for (&(k, s), &r) in &self.e2 {
                let d = self.total_degree(k, s);
                if d <= self.max_degree {
                    out.add(d, r);
                }
            }
        }
        out
    }
}

/// Builds `E¹` for `∂_n ∧_{hG} (S^j)^{∧n}` through total degree `max_degree`.
pub fn e1_page(n: u32, g: &PermGroupSpec, j: i64, p: Prime, max_degree: i64) -> Result<SSPage> {
    if n < 2 {
        return Err(Error::Unsupported(format!("the spectral sequence needs n >= 2, got {n}")));
    }
    if n > DEFAULT_BOUND {
        return Err(Error::Bound {
            what: "leaf count of the layer spectral sequence",
            bound: DEFAULT_BOUND as usize,
        });
    }
    if g.degree() != n {
        return Err(Error::Arity { expected: n as usize, found: g.degree() as usize });
    }
    let levels = enumerate_all_trees(n);
    let g_orbits: Vec<Orbits> = levels.iter().map(|l| orbits(l, g)).collect();
    let mut columns = Vec::new();
    let mut first = Vec::new();
    for (k, o) in g_orbits.iter().enumerate() {
        first.push(columns.len());
        for (idx, rep) in o.reps.iter().enumerate() {
            columns.push(Column {
                tree: rep.clone(),
                k: k + 1,
                stabilizer_order: o.stabilizers[idx].order(),
                entries: GradedDims::new(),
            });
        }
    }
    let column_of = |k: usize, t: &Tree| first[k] + g_orbits[k].of[t].0;

    let sylow = cyclic_sylow(g, p)?;
    // Enough rows to certify one degree past the window.
    let s_max = (max_degree + 1 - j * n as i64 + n as i64 - 1).max(-1);
    let mut rows = BTreeMap::new();
    let mut period = 1;
    if s_max >= 0 {
        let twist = Twist { p, j, i: 0, units: None };
        rows.insert(0, coinvariant_row(&levels, g, &twist, &column_of)?);
    }
    if let Some(sy) = &sylow {
        period = p.get() - 1;
        let units: BTreeMap<Perm, u32> = sy.normalizer.iter().cloned().collect();
        let normalizer =
            PermGroupSpec::from_closed_set(n, sy.normalizer.iter().map(|(h, _)| h.clone()).collect());
        let fixed: Vec<Vec<Tree>> = levels
            .iter()
            .map(|l| l.iter().filter(|t| t.relabel(&sy.generator) == **t).cloned().collect())
            .collect();
        for key in 1..=period.min(((s_max + 1) / 2).max(0) as u32) {
            let twist = Twist { p, j, i: key as u64, units: Some(&units) };
            rows.insert(key, coinvariant_row(&fixed, &normalizer, &twist, &column_of)?);
        }
    }
    let mut page = SSPage {
        n,
        j,
        prime: p,
        max_degree,
        page: 1,
        columns,
        d1: Vec::new(),
        e2: BTreeMap::new(),
        rows,
        period,
        s_max,
    };
    for s in 0..=s_max {
        let Some(row) = page.row(s) else { continue };
        let mut hits: Vec<(usize, i64)> = Vec::new();
        for (k, cols) in row.basis.iter().enumerate() {
            for &c in cols {
                hits.push((c, page.total_degree(k + 1, s)));
            }
        }
        for (c, d) in hits {
            if d <= max_degree {
                page.columns[c].entries.add(d, 1);
            }
        }
    }
    check_columns(&page, g, &g_orbits)?;
    Ok(page)
}

/// Each column must carry the homology of its stabilizer.
fn check_columns(page: &SSPage, g: &PermGroupSpec, g_orbits: &[Orbits]) -> Result<()> {
    let p = page.prime;
    let mut c = 0;
    for (k, o) in g_orbits.iter().enumerate() {
        for (idx, rep) in o.reps.iter().enumerate() {
            let stab = &o.stabilizers[idx];
            let twist = Twist { p, j: page.j, i: 0, units: None };
            let module =
                CharacterModule::from_fn_trusted(
                    stab.clone(),
                    |h| {
                        if twist.value(h, rep) == 1 {
                            1
                        } else {
                            -1
                        }
                    },
                );
            let top = page.max_degree - page.total_degree(k + 1, 0);
            let expected = small_group_homology(&module, p, top)?.shifted(page.total_degree(k + 1, 0));
            if !expected.same_ranks(&page.columns[c].entries) {
                return Err(Error::Integrity(format!(
                    "column {rep} disagrees with the homology of its stabilizer in {g}"
                )));
            }
            c += 1;
        }
    }
    Ok(())
}

/// Adds `d₁` and the `E²` ranks.
pub fn d1_matrices(page: &SSPage) -> Result<SSPage> {
    let mut out = page.clone();
    out.page = 2;
    out.d1.clear();
    out.e2.clear();
    let kmax = page.n as usize - 1;
    for s in 0..=page.s_max {
        let Some(row) = page.row(s) else { continue };
        for (k, m) in row.d.iter().enumerate() {
            for (r, c, v) in m.triplets() {
                out.d1.push(D1Block { s, source: row.basis[k][c], target: row.basis[k + 1][r], scalar: v });
            }
        }
        for k in 1..=kmax {
            let dim = row.basis[k - 1].len();
            if dim == 0 {
                continue;
            }
            let d_in = if k >= 2 { row.d[k - 2].clone() } else { Matrix::zeros(page.prime, dim, 0) };
            let d_out = if k < kmax { row.d[k - 1].clone() } else { Matrix::zeros(page.prime, 0, dim) };
            let rank = homology_rank(&d_in, &d_out)?;
            if rank > 0 {
                out.e2.insert((k, s), rank);
            }
        }
    }
    Ok(out)
}

/// True when no `d_r`, `r >= 2`, can hit or leave a class in total degree at
/// most `max_degree`.
fn degree_certified(page: &SSPage) -> bool {
    for &(k, s) in page.e2.keys() {
        for r in 2..page.n as usize {
            let target = (k + r, s + r as i64 - 1);
            if page.total_degree(k, s) - 1 > page.max_degree {
                continue;
            }
            if page.e2.contains_key(&target) {
                return false;
            }
        }
    }
    true
}

/// `H_*` of the `n`-th layer of the free spectral Lie algebra on `S^j`
/// through `max_degree`, by the spectral sequence over `G = Σ_n`.
pub fn layer_dims(n: u32, j: i64, p: Prime, max_degree: i64) -> Result<GradedDims> {
    if n == 0 {
        return Err(Error::Unsupported(String::from("layers start at n = 1")));
    }
    if n == 1 {
        let mut g = GradedDims::new();
        if j <= max_degree {
            g.add_label(j, String::from("i"));
        }
        return Ok(g);
    }
    if n > DEFAULT_BOUND {
        return Err(Error::Bound {
            what: "leaf count of the layer spectral sequence",
            bound: DEFAULT_BOUND as usize,
        });
    }
    let g = PermGroupSpec::symmetric(n)?;
    layer_dims_for(&g, j, p, max_degree)
}

/// As [`layer_dims`] for any group acting on the leaves.
pub fn layer_dims_for(g: &PermGroupSpec, j: i64, p: Prime, max_degree: i64) -> Result<GradedDims> {
    let page = d1_matrices(&e1_page(g.degree(), g, j, p, max_degree)?)?;
    let mut out = page.total();
    out.certified =
        page.columns.iter().filter(|c| c.entries.total() > 0).count() <= 1 || degree_certified(&page);
    Ok(out)
}

/// Labels each column with its canonical tree string.
pub fn column_labels(page: &SSPage) -> Vec<String> {
    page.columns.iter().map(|c| c.tree.to_string()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(q: u64) -> Prime {
        Prime::new(q).unwrap()
    }

    #[test]
    fn low_layers() {
        assert_eq!(layer_dims(1, 5, p(3), 10).unwrap().support(), [5]);
        for l in -2..=3 {
            let d = layer_dims(2, 2 * l, p(3), 40).unwrap();
            assert_eq!(d.dims.into_iter().collect::<Vec<_>>(), [(4 * l - 1, 1)]);
        }
        assert!(layer_dims(2, 3, p(3), 40).unwrap().dims.is_empty());
    }

    #[test]
    fn third_layer_at_three() {
        let d = layer_dims(3, 3, p(3), 14).unwrap();
        assert_eq!(d.support(), [9, 10, 13, 14]);
        assert!(d.certified);
        let d = layer_dims(3, 2, p(3), 13).unwrap();
        assert_eq!(d.support(), [4, 5, 8, 9, 12, 13]);
        let d = layer_dims(3, 1, p(3), 8).unwrap();
        assert_eq!(d.support(), [3, 4, 7, 8]);
    }

    #[test]
    fn two_column_page() {
        let g = PermGroupSpec::symmetric(3).unwrap();
        let page = e1_page(3, &g, 2, p(3), 13).unwrap();
        assert_eq!(page.columns.len(), 2);
        assert_eq!(page.columns[0].entries.support(), [5, 8, 9, 12, 13]);
        assert_eq!(page.columns[1].entries.dims.iter().collect::<Vec<_>>(), [(&4, &1)]);
        let page2 = d1_matrices(&page).unwrap();
        assert!(page2.d1.is_empty());
        assert!(page2.block(0, 1, 0).get(0, 0) == 0);
    }

    #[test]
    fn sylow_too_large() {
        let err = layer_dims(6, 1, p(3), 10).unwrap_err();
        assert_eq!(err.kind(), crate::ErrorKind::Unsupported);
    }
}
