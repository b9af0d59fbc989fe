//! Free shifted Lie algebras over `F_p`.
//!
//! The bracket has degree `-1`, satisfies `[x,y] = (-1)^{|x||y|}[y,x]`, the
//! Jacobi identity
//! `(-1)^{|x||z|}[x,[y,z]] + (-1)^{|y||x|}[y,[z,x]] + (-1)^{|z||y|}[z,[x,y]] = 0`
//! and, at `p = 3`, `[x,[x,x]] = 0`.
//!
//! Shifting degrees down by one turns these into the axioms of a Lie
//! superalgebra with `[x,y]_L = (-1)^{|y|}[x,y]`, so words are normalized
//! inside the free associative superalgebra, where the free Lie superalgebra
//! embeds and Lyndon words index a triangular basis.

use alloc::boxed::Box;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::fieldlin::Prime;

/// Largest weight the brute-force oracle accepts.
pub const MAX_BRUTE_WEIGHT: u32 = 6;

/// Named generators with integer degrees, in a fixed order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedVS {
    gens: Vec<(String, i64)>,
}

impl GradedVS {
    pub fn new(gens: Vec<(String, i64)>) -> Result<Self> {
        let names: BTreeSet<&str> = gens.iter().map(|(n, _)| n.as_str()).collect();
        if names.len() != gens.len() {
            return Err(Error::DuplicateLabel(String::from("generator names repeat")));
        }
        if let Some((bad, _)) =
            gens.iter().find(|(n, _)| n.is_empty() || n.contains(|c: char| "[], ".contains(c)))
        {
            return Err(Error::Parse(format!("invalid generator name {bad:?}")));
        }
        Ok(GradedVS { gens })
    }

    /// Parses `name:degree[,name:degree...]`.
    pub fn parse(spec: &str) -> Result<Self> {
        let mut gens = Vec::new();
        for item in spec.split(',').filter(|s| !s.trim().is_empty()) {
            let (name, deg) = item
                .split_once(':')
                .ok_or_else(|| Error::Parse(format!("expected name:degree, got {item:?}")))?;
            let deg: i64 = deg.trim().parse().map_err(|_| Error::Parse(format!("bad degree in {item:?}")))?;
            gens.push((String::from(name.trim()), deg));
        }
        if gens.is_empty() {
            return Err(Error::Parse(String::from("no generators given")));
        }
        GradedVS::new(gens)
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn name(&self, i: usize) -> &str {
        &self.gens[i].0
    }

    pub fn degree(&self, i: usize) -> i64 {
        self.gens[i].1
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.gens.iter().position(|(n, _)| n == name)
    }
}

/// A bracket word. Operation leaves stand for classes outside the bracket
/// algebra; every bracket containing one vanishes.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum LieWord {
    Gen(usize),
    Op { label: String, degree: i64 },
    Bracket(Box<LieWord>, Box<LieWord>),
}

/// A formal `F_p` combination of words; zero coefficients are never stored.
pub type LieComb = BTreeMap<LieWord, u32>;

impl LieWord {
    pub fn bracket(a: LieWord, b: LieWord) -> LieWord {
        LieWord::Bracket(Box::new(a), Box::new(b))
    }

    pub fn degree(&self, vs: &GradedVS) -> i64 {
        match self {
            LieWord::Gen(i) => vs.degree(*i),
            LieWord::Op { degree, .. } => *degree,
            LieWord::Bracket(a, b) => a.degree(vs) + b.degree(vs) - 1,
        }
    }

    pub fn weight(&self) -> usize {
        match self {
            LieWord::Gen(_) | LieWord::Op { .. } => 1,
            LieWord::Bracket(a, b) => a.weight() + b.weight(),
        }
    }

    pub fn display<'a>(&'a self, vs: &'a GradedVS) -> impl fmt::Display + 'a {
        WordDisplay { w: self, vs }
    }

    /// Parses nested `[a,b]` over generator names.
    pub fn parse(s: &str, vs: &GradedVS) -> Result<LieWord> {
        let s = s.trim();
        if let Some(inner) = s.strip_prefix('[').and_then(|r| r.strip_suffix(']')) {
            let mut depth = 0i32;
            for (i, c) in inner.char_indices() {
                match c {
                    '[' => depth += 1,
                    ']' => depth -= 1,
                    ',' if depth == 0 => {
                        let a = LieWord::parse(&inner[..i], vs)?;
                        let b = LieWord::parse(&inner[i + 1..], vs)?;
                        return Ok(LieWord::bracket(a, b));
                    }
                    _ => {}
                }
            }
            return Err(Error::Parse(format!("unbalanced bracket {s:?}")));
        }
        vs.index_of(s).map(LieWord::Gen).ok_or_else(|| Error::Parse(format!("unknown generator {s:?}")))
    }
}

struct WordDisplay<'a> {
    w: &'a LieWord,
    vs: &'a GradedVS,
}

impl fmt::Display for WordDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.w {
            LieWord::Gen(i) => f.write_str(self.vs.name(*i)),
            LieWord::Op { label, .. } => f.write_str(label),
            LieWord::Bracket(a, b) => {
                write!(f, "[{},{}]", a.display(self.vs), b.display(self.vs))
            }
        }
    }
}

type Poly = BTreeMap<Vec<usize>, u32>;

fn sign(e: i64) -> i64 {
    if e.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

fn add_scaled(target: &mut Poly, src: &Poly, c: u32, p: Prime) {
    for (w, &v) in src {
        let e = target.entry(w.clone()).or_insert(0);
        *e = p.add(*e, p.mul(v, c));
        if *e == 0 {
            target.remove(w);
        }
    }
}

/// Image in the free associative superalgebra; `None` if an operation leaf
/// sits inside a bracket.
fn expand(w: &LieWord, vs: &GradedVS, p: Prime) -> Option<Poly> {
    match w {
        LieWord::Gen(i) => Some(BTreeMap::from([(alloc::vec![*i], 1)])),
        LieWord::Op { .. } => None,
        LieWord::Bracket(a, b) => {
            let (ea, eb) = (expand(a, vs, p)?, expand(b, vs, p)?);
            let (da, db) = (a.degree(vs), b.degree(vs));
            let outer = sign(db);
            let twist = -sign((da - 1) * (db - 1));
            let mut out = Poly::new();
            for (u, &x) in &ea {
                for (v, &y) in &eb {
                    let xy = p.mul(x, y);
                    let mut uv = u.clone();
                    uv.extend_from_slice(v);
                    let mut vu = v.clone();
                    vu.extend_from_slice(u);
                    let c1 = p.mul(xy, p.reduce(outer));
                    let c2 = p.mul(xy, p.reduce(outer * twist));
                    add_scaled(&mut out, &BTreeMap::from([(uv, c1)]), 1, p);
                    add_scaled(&mut out, &BTreeMap::from([(vu, c2)]), 1, p);
                }
            }
            Some(out)
        }
    }
}

fn is_lyndon(w: &[usize]) -> bool {
    !w.is_empty()
        && (1..w.len()).all(|i| {
            let mut rot = w[i..].to_vec();
            rot.extend_from_slice(&w[..i]);
            rot.as_slice() > w
        })
}

/// The standard bracketing of a Lyndon word.
pub fn lyndon_bracketing(w: &[usize]) -> LieWord {
    if w.len() == 1 {
        return LieWord::Gen(w[0]);
    }
    // Split before the longest proper suffix that is Lyndon.
    let cut = (1..w.len()).find(|&i| is_lyndon(&w[i..])).expect("a letter is Lyndon");
    LieWord::bracket(lyndon_bracketing(&w[..cut]), lyndon_bracketing(&w[cut..]))
}

/// The basis word whose expansion has `w` as its smallest term.
fn basis_word_for(w: &[usize], vs: &GradedVS) -> Option<LieWord> {
    if is_lyndon(w) {
        return Some(lyndon_bracketing(w));
    }
    let half = w.len() / 2;
    if w.len().is_multiple_of(2) && w[..half] == w[half..] && is_lyndon(&w[..half]) {
        let b = lyndon_bracketing(&w[..half]);
        if b.degree(vs).rem_euclid(2) == 0 {
            return Some(LieWord::bracket(b.clone(), b));
        }
    }
    None
}

/// Rewrites a combination in the basis of [`lie_basis`]. Lone operation
/// leaves are kept; brackets involving them vanish.
pub fn normalize(comb: &LieComb, vs: &GradedVS, p: Prime) -> Result<LieComb> {
    let mut out = LieComb::new();
    let mut poly = Poly::new();
    for (w, &c) in comb {
        if let LieWord::Op { .. } = w {
            let e = out.entry(w.clone()).or_insert(0);
            *e = p.add(*e, c);
            if *e == 0 {
                out.remove(w);
            }
            continue;
        }
        if let Some(e) = expand(w, vs, p) {
            add_scaled(&mut poly, &e, c, p);
        }
    }
    while let Some((lead, &a)) = poly.iter().next() {
        let lead = lead.clone();
        let basis = basis_word_for(&lead, vs)
            .ok_or_else(|| Error::Integrity(format!("{lead:?} is not the leading word of a Lie element")))?;
        let e = expand(&basis, vs, p).expect("basis words have no operation leaves");
        let lc = e[&lead];
        let scale = p.mul(a, p.inv(lc));
        add_scaled(&mut poly, &e, p.neg(scale), p);
        out.insert(basis, scale);
    }
    Ok(out)
}

/// Normalizes a single word.
pub fn normalize_word(w: &LieWord, vs: &GradedVS, p: Prime) -> Result<LieComb> {
    normalize(&BTreeMap::from([(w.clone(), 1)]), vs, p)
}

/// A basis element with its weight and degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisWord {
    pub word: LieWord,
    pub weight: usize,
    pub degree: i64,
}

/// Lyndon words up to length `max_len` over `k` letters, by Duval's method.
pub fn lyndon_words(k: usize, max_len: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k == 0 || max_len == 0 {
        return out;
    }
    let mut w = alloc::vec![0usize];
    loop {
        out.push(w.clone());
        let m = w.len();
        while w.len() < max_len {
            w.push(w[w.len() - m]);
        }
        while let Some(&last) = w.last() {
            if last + 1 == k {
                w.pop();
            } else {
                break;
            }
        }
        match w.last_mut() {
            Some(last) => *last += 1,
            None => break,
        }
    }
    out
}

/// Basis of the free shifted Lie algebra through bracket length
/// `max_weight`: Lyndon words plus `[b,b]` for Lyndon `b` of even degree.
pub fn lie_basis(vs: &GradedVS, max_weight: usize, _p: Prime) -> Vec<BasisWord> {
    let mut out = Vec::new();
    for w in lyndon_words(vs.len(), max_weight) {
        let word = lyndon_bracketing(&w);
        let degree = word.degree(vs);
        if 2 * w.len() <= max_weight && degree.rem_euclid(2) == 0 {
            let sq = LieWord::bracket(word.clone(), word.clone());
            out.push(BasisWord { degree: sq.degree(vs), weight: 2 * w.len(), word: sq });
        }
        out.push(BasisWord { word, weight: w.len(), degree });
    }
    out.sort_by(|a, b| (a.weight, &a.word).cmp(&(b.weight, &b.word)));
    out
}

/// Counts of [`lie_basis`] by `(weight, degree)`.
pub fn basis_counts(vs: &GradedVS, max_weight: usize, p: Prime) -> BTreeMap<(usize, i64), usize> {
    let mut out = BTreeMap::new();
    for b in lie_basis(vs, max_weight, p) {
        *out.entry((b.weight, b.degree)).or_insert(0) += 1;
    }
    out
}

/// Ranks of the weight-`weight` part by degree, from all bracket words and
/// every single application of the defining relations.
pub fn brute_force_dims(vs: &GradedVS, weight: u32, p: Prime) -> Result<BTreeMap<i64, usize>> {
    if weight > MAX_BRUTE_WEIGHT {
        return Err(Error::Bound { what: "brute-force weight", bound: MAX_BRUTE_WEIGHT as usize });
    }
    let mut out = BTreeMap::new();
    if weight == 0 {
        return Ok(out);
    }
    for counts in compositions(weight, vs.len()) {
        let rank = brute_force_content(vs, &counts, p)?;
        if rank > 0 {
            let degree: i64 = counts.iter().enumerate().map(|(i, &c)| c as i64 * vs.degree(i)).sum::<i64>()
                - (weight as i64 - 1);
            *out.entry(degree).or_insert(0) += rank;
        }
    }
    Ok(out)
}

fn compositions(total: u32, parts: usize) -> Vec<Vec<u32>> {
    if parts == 0 {
        return if total == 0 { alloc::vec![Vec::new()] } else { Vec::new() };
    }
    let mut out = Vec::new();
    for first in 0..=total {
        for mut rest in compositions(total - first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Rank of the part with the given multiplicity of each generator.
pub fn brute_force_content(vs: &GradedVS, counts: &[u32], p: Prime) -> Result<usize> {
    let weight: u32 = counts.iter().sum();
    if weight > MAX_BRUTE_WEIGHT {
        return Err(Error::Bound { what: "brute-force weight", bound: MAX_BRUTE_WEIGHT as usize });
    }
    if counts.len() != vs.len() {
        return Err(Error::Arity { expected: vs.len(), found: counts.len() });
    }
    let mut letters = Vec::new();
    for (i, &c) in counts.iter().enumerate() {
        letters.extend(core::iter::repeat_n(i, c as usize));
    }
    if letters.is_empty() {
        return Ok(0);
    }
    let words = all_words(&letters);
    // Antisymmetry is imposed by passing to canonical representatives.
    let mut columns: BTreeMap<LieWord, usize> = BTreeMap::new();
    for w in &words {
        if let Some((c, _)) = canonical(w, vs) {
            let next = columns.len();
            columns.entry(c).or_insert(next);
        }
    }
    let mut echelon = Echelon::new(p, columns.len());
    for w in columns.keys().cloned().collect::<Vec<_>>() {
        for rel in node_relations(&w, vs, p) {
            let mut row = alloc::vec![0u32; columns.len()];
            for (term, coeff) in rel {
                if let Some((c, s)) = canonical(&term, vs) {
                    let col = columns[&c];
                    row[col] = p.add(row[col], p.mul(coeff, p.reduce(s)));
                }
            }
            echelon.insert(row);
        }
    }
    Ok(columns.len() - echelon.rank())
}

/// All bracketings of all orderings of a multiset of letters.
fn all_words(letters: &[usize]) -> Vec<LieWord> {
    let mut seqs: BTreeSet<Vec<usize>> = BTreeSet::new();
    permutations(letters.to_vec(), 0, &mut seqs);
    let mut out = BTreeSet::new();
    for s in seqs {
        out.extend(bracketings(&s));
    }
    out.into_iter().collect()
}

fn permutations(mut v: Vec<usize>, i: usize, out: &mut BTreeSet<Vec<usize>>) {
    if i == v.len() {
        out.insert(v);
        return;
    }
    for j in i..v.len() {
        v.swap(i, j);
        permutations(v.clone(), i + 1, out);
        v.swap(i, j);
    }
}

fn bracketings(s: &[usize]) -> Vec<LieWord> {
    if s.len() == 1 {
        return alloc::vec![LieWord::Gen(s[0])];
    }
    let mut out = Vec::new();
    for cut in 1..s.len() {
        for a in bracketings(&s[..cut]) {
            for b in bracketings(&s[cut..]) {
                out.push(LieWord::bracket(a.clone(), b));
            }
        }
    }
    out
}

/// Orders the children of every node using antisymmetry. `None` when the
/// word is forced to vanish by `[x,x] = -[x,x]`.
fn canonical(w: &LieWord, vs: &GradedVS) -> Option<(LieWord, i64)> {
    match w {
        LieWord::Bracket(a, b) => {
            let (ca, sa) = canonical(a, vs)?;
            let (cb, sb) = canonical(b, vs)?;
            let (da, db) = (ca.degree(vs), cb.degree(vs));
            if ca == cb && da.rem_euclid(2) == 1 {
                return None;
            }
            if ca > cb {
                Some((LieWord::bracket(cb, ca), sa * sb * sign(da * db)))
            } else {
                Some((LieWord::bracket(ca, cb), sa * sb))
            }
        }
        _ => Some((w.clone(), 1)),
    }
}

/// Jacobi and cubic relations applied at each node of `w`, in every
/// orientation of the node's children.
fn node_relations(w: &LieWord, vs: &GradedVS, p: Prime) -> Vec<Vec<(LieWord, u32)>> {
    let mut out = Vec::new();
    let LieWord::Bracket(a, b) = w else {
        return out;
    };
    let wrap = |rels: Vec<Vec<(LieWord, u32)>>, f: &dyn Fn(LieWord) -> LieWord| -> Vec<Vec<(LieWord, u32)>> {
        rels.into_iter().map(|r| r.into_iter().map(|(t, c)| (f(t), c)).collect()).collect()
    };
    let (a2, b2) = ((**a).clone(), (**b).clone());
    out.extend(wrap(node_relations(a, vs, p), &|t| LieWord::bracket(t, b2.clone())));
    out.extend(wrap(node_relations(b, vs, p), &|t| LieWord::bracket(a2.clone(), t)));

    // Up to sign `w` is `[x,[y,z]]` for each way of orienting its two nodes.
    for (x, yz) in [(&**a, &**b), (&**b, &**a)] {
        let LieWord::Bracket(y0, z0) = yz else { continue };
        for (y, z) in [(&**y0, &**z0), (&**z0, &**y0)] {
            let (dx, dy, dz) = (x.degree(vs), y.degree(vs), z.degree(vs));
            let t1 = LieWord::bracket(x.clone(), LieWord::bracket(y.clone(), z.clone()));
            let t2 = LieWord::bracket(y.clone(), LieWord::bracket(z.clone(), x.clone()));
            let t3 = LieWord::bracket(z.clone(), LieWord::bracket(x.clone(), y.clone()));
            out.push(alloc::vec![
                (t1, p.reduce(sign(dx * dz))),
                (t2, p.reduce(sign(dy * dx))),
                (t3, p.reduce(sign(dz * dy))),
            ]);
            if p.get() == 3 && x == y && y == z {
                out.push(alloc::vec![(
                    LieWord::bracket(x.clone(), LieWord::bracket(x.clone(), x.clone())),
                    1
                )]);
            }
        }
    }
    out
}

/// Incremental row echelon form over `F_p`.
struct Echelon {
    p: Prime,
    width: usize,
    rows: BTreeMap<usize, Vec<u32>>,
}

impl Echelon {
    fn new(p: Prime, width: usize) -> Self {
        Echelon { p, width, rows: BTreeMap::new() }
    }

    fn insert(&mut self, mut row: Vec<u32>) {
        debug_assert_eq!(row.len(), self.width);
        let p = self.p;
        for (&c, basis) in &self.rows {
            let f = row[c];
            if f != 0 {
                for (x, &y) in row.iter_mut().zip(basis).skip(c) {
                    *x = p.sub(*x, p.mul(f, y));
                }
            }
        }
        if let Some(c) = row.iter().position(|&x| x != 0) {
            let inv = p.inv(row[c]);
            for x in row.iter_mut().skip(c) {
                *x = p.mul(*x, inv);
            }
            self.rows.insert(c, row);
        }
    }

    fn rank(&self) -> usize {
        self.rows.len()
    }
}

impl fmt::Display for BasisWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} (weight {}, degree {})", self.word, self.weight, self.degree)
    }
}

/// Renders a combination as `c*word + ...` with coefficients in `0..p`.
pub fn format_comb(comb: &LieComb, vs: &GradedVS) -> String {
    if comb.is_empty() {
        return String::from("0");
    }
    let terms: Vec<String> = comb
        .iter()
        .map(|(w, c)| if *c == 1 { w.display(vs).to_string() } else { format!("{c}*{}", w.display(vs)) })
        .collect();
    terms.join(" + ")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vs(spec: &str) -> GradedVS {
        GradedVS::parse(spec).unwrap()
    }

    fn p(q: u64) -> Prime {
        Prime::new(q).unwrap()
    }

    #[test]
    fn commutativity_sign() {
        let v = vs("x:2,y:3");
        let yx = LieWord::bracket(LieWord::Gen(1), LieWord::Gen(0));
        let xy = LieWord::bracket(LieWord::Gen(0), LieWord::Gen(1));
        let n = normalize_word(&yx, &v, p(3)).unwrap();
        assert_eq!(n, BTreeMap::from([(xy, 1)]));
    }

    #[test]
    fn self_brackets() {
        let odd = vs("x:3");
        let x = LieWord::Gen(0);
        assert!(normalize_word(&LieWord::bracket(x.clone(), x.clone()), &odd, p(5)).unwrap().is_empty());
        let even = vs("x:2");
        let xx = LieWord::bracket(x.clone(), x.clone());
        assert_eq!(normalize_word(&xx, &even, p(5)).unwrap().len(), 1);
        for q in [3, 5] {
            let cubic = LieWord::bracket(x.clone(), xx.clone());
            assert!(normalize_word(&cubic, &even, p(q)).unwrap().is_empty());
        }
    }

    #[test]
    fn operation_leaves_die_in_brackets() {
        let v = vs("x:2");
        let op = LieWord::Op { label: String::from("Q^1 x"), degree: 6 };
        let w = LieWord::bracket(LieWord::Gen(0), op.clone());
        assert!(normalize_word(&w, &v, p(3)).unwrap().is_empty());
        assert_eq!(normalize_word(&op, &v, p(3)).unwrap().len(), 1);
    }

    #[test]
    fn small_bases() {
        let even = lie_basis(&vs("x:2"), 5, p(3));
        let shown: Vec<String> = even.iter().map(|b| b.word.display(&vs("x:2")).to_string()).collect();
        assert_eq!(shown, ["x", "[x,x]"]);
        assert_eq!(lie_basis(&vs("x:3"), 5, p(3)).len(), 1);
        let two = vs("x:1,y:1");
        let w2: Vec<_> = lie_basis(&two, 2, p(3)).into_iter().filter(|b| b.weight == 2).collect();
        assert_eq!(w2.len(), 1);
        assert_eq!(w2[0].word.display(&two).to_string(), "[x,y]");
    }

    #[test]
    fn brute_force_examples() {
        let three = vs("a:1,b:2,c:5");
        assert_eq!(brute_force_content(&three, &[1, 1, 1], p(3)).unwrap(), 2);
        assert_eq!(brute_force_dims(&vs("x:2"), 3, p(3)).unwrap().len(), 0);
        assert_eq!(brute_force_dims(&vs("x:2"), 3, p(5)).unwrap().len(), 0);
        assert_eq!(brute_force_dims(&vs("x:2,y:2"), 1, p(5)).unwrap(), BTreeMap::from([(2, 2)]));
        assert!(brute_force_dims(&vs("x:2"), 7, p(5)).is_err());
    }

    #[test]
    fn lyndon_enumeration() {
        // Necklace counts for two letters: 2, 1, 2, 3, 6.
        let counts: Vec<usize> =
            (1..=5).map(|n| lyndon_words(2, 5).iter().filter(|w| w.len() == n).count()).collect();
        assert_eq!(counts, [2, 1, 2, 3, 6]);
    }

    #[test]
    fn parse_words() {
        let v = vs("x:2,y:3");
        let w = LieWord::parse("[x,[x,y]]", &v).unwrap();
        assert_eq!(w.display(&v).to_string(), "[x,[x,y]]");
        assert_eq!(w.degree(&v), 5);
        assert!(LieWord::parse("[x,z]", &v).is_err());
    }
}
