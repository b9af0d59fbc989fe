//! Power operation words and the basis of the free algebra they generate
//! together with shifted Lie brackets.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::dims::GradedDims;
use crate::error::{Error, Result};
use crate::fieldlin::Prime;
use crate::grouphom::op_label;
use crate::shiftedlie::{lie_basis, GradedVS, LieWord};

/// Weight cap for generator sets whose enumeration would not terminate.
pub const DEFAULT_WEIGHT_CAP: usize = 9;

/// Lower bound on the innermost operation index.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Policy {
    /// `2s >= |x|`.
    #[default]
    Rational,
    /// `s >= floor(|x| / 2)`.
    AmLiteral,
    /// `2s > |x|`.
    Strict,
}

impl Policy {
    pub fn name(self) -> &'static str {
        match self {
            Policy::Rational => "rational",
            Policy::AmLiteral => "am-literal",
            Policy::Strict => "strict",
        }
    }

    /// Smallest `s` allowed on a class of degree `d`.
    pub fn min_s(self, d: i64) -> i64 {
        match self {
            Policy::Rational => div_ceil(d, 2),
            Policy::AmLiteral => d.div_euclid(2),
            Policy::Strict => d.div_euclid(2) + 1,
        }
    }

    pub fn allows(self, s: i64, d: i64) -> bool {
        s >= self.min_s(d)
    }
}

fn div_ceil(a: i64, b: i64) -> i64 {
    -((-a).div_euclid(b))
}

impl FromStr for Policy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rational" => Ok(Policy::Rational),
            "am-literal" => Ok(Policy::AmLiteral),
            "strict" => Ok(Policy::Strict),
            other => Err(Error::UnknownPolicy(String::from(other))),
        }
    }
}

impl fmt::Display for Policy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A composite `β^{ε_1} Q^{s_1} ... β^{ε_k} Q^{s_k}`, outermost first.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OpWord(pub Vec<(u8, i64)>);

impl OpWord {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn label(&self) -> String {
        let parts: Vec<String> = self.0.iter().map(|&(e, s)| op_label(e, s)).collect();
        parts.join(" ")
    }
}

/// Degree added by the operations: `Σ (2(p-1)s - ε - 1)`.
pub fn op_degree(op: &OpWord, p: Prime) -> i64 {
    let q = p.get() as i64;
    op.0.iter().map(|&(e, s)| 2 * (q - 1) * s - e as i64 - 1).sum()
}

/// Chain condition `s_i > p s_{i+1} - ε_{i+1}` plus the policy's excess
/// bound on the innermost operation.
pub fn cu_check(op: &OpWord, inner_degree: i64, p: Prime, policy: Policy) -> bool {
    let q = p.get() as i64;
    let chain = op.0.windows(2).all(|w| w[0].1 > q * w[1].1 - w[1].0 as i64);
    let excess = op.0.last().is_none_or(|&(_, s)| policy.allows(s, inner_degree));
    let eps = op.0.iter().all(|&(e, _)| e <= 1);
    chain && excess && eps
}

/// An operation word applied to a bracket word.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisElement {
    pub op: OpWord,
    pub word: LieWord,
    pub degree: i64,
    pub weight: usize,
    pub label: String,
}

/// Operation words of length `len` on a class of degree `d` whose total
/// degree lands in `lo..=hi`.
pub fn op_words(len: usize, d: i64, p: Prime, policy: Policy, lo: i64, hi: i64) -> Vec<OpWord> {
    let mut out = Vec::new();
    if len == 0 {
        if (lo..=hi).contains(&d) {
            out.push(OpWord::default());
        }
        return out;
    }
    let mut inner_first = Vec::with_capacity(len);
    extend_ops(len, d, policy.min_s(d), p, lo, hi, &mut inner_first, &mut out);
    out.sort();
    out
}

/// Smallest degree reachable by adding `left` more operations after one with
/// index `s` and Bockstein `e`, all lowest possible.
fn min_future(left: usize, mut s: i64, mut e: u8, p: Prime) -> i64 {
    let q = p.get() as i64;
    let mut add = 0;
    for _ in 0..left {
        s = q * s - e as i64 + 1;
        e = 1;
        add += 2 * (q - 1) * s - 2;
    }
    add
}

#[allow(clippy::too_many_arguments)]
fn extend_ops(
    left: usize,
    degree: i64,
    s_min: i64,
    p: Prime,
    lo: i64,
    hi: i64,
    inner_first: &mut Vec<(u8, i64)>,
    out: &mut Vec<OpWord>,
) {
    let q = p.get() as i64;
    let mut s = s_min;
    loop {
        let mut any = false;
        for e in [1u8, 0] {
            let next = degree + 2 * (q - 1) * s - e as i64 - 1;
            if next + min_future(left - 1, s, e, p) > hi {
                continue;
            }
            any = true;
            inner_first.push((e, s));
            if left == 1 {
                if next >= lo {
                    out.push(OpWord(inner_first.iter().rev().copied().collect()));
                }
            } else {
                extend_ops(left - 1, next, q * s - e as i64 + 1, p, lo, hi, inner_first, out);
            }
            inner_first.pop();
        }
        if !any {
            break;
        }
        s += 1;
    }
}

fn element(op: OpWord, word: LieWord, vs: &GradedVS, p: Prime) -> BasisElement {
    let base = word.degree(vs);
    let weight = word.weight() * (p.get() as usize).pow(op.len() as u32);
    let w = word.display(vs).to_string();
    let label = if op.is_empty() { w } else { format!("{} {w}", op.label()) };
    BasisElement { degree: base + op_degree(&op, p), weight, label, op, word }
}

/// The weight-`n` part of the free algebra on one class `i` of degree `j`,
/// through `max_degree`.
pub fn layer_basis_sphere(n: usize, j: i64, p: Prime, policy: Policy, max_degree: i64) -> Result<GradedDims> {
    layer_basis_sphere_window(n, j, p, policy, i64::MIN, max_degree)
}

pub fn layer_basis_sphere_window(
    n: usize,
    j: i64,
    p: Prime,
    policy: Policy,
    min_degree: i64,
    max_degree: i64,
) -> Result<GradedDims> {
    let vs = GradedVS::new(alloc::vec![(String::from("i"), j)])?;
    let q = p.get() as usize;
    let mut out = GradedDims::new();
    let (word, ops) = match power_of(n, q) {
        Some(k) => (LieWord::Gen(0), k),
        None if n.is_multiple_of(2) && j.rem_euclid(2) == 0 => match power_of(n / 2, q) {
            Some(k) => (LieWord::bracket(LieWord::Gen(0), LieWord::Gen(0)), k),
            None => return Ok(out),
        },
        None => return Ok(out),
    };
    for op in op_words(ops, word.degree(&vs), p, policy, min_degree, max_degree) {
        let e = element(op, word.clone(), &vs, p);
        out.add_label(e.degree, e.label);
    }
    Ok(out)
}

fn power_of(n: usize, q: usize) -> Option<usize> {
    let mut k = 0;
    let mut m = n;
    while m > 1 {
        if !m.is_multiple_of(q) {
            return None;
        }
        m /= q;
        k += 1;
    }
    (m == 1).then_some(k)
}

/// Whether every weight's bottom degree grows, so a degree bound alone
/// makes the basis finite.
pub fn degree_bounds_weight(vs: &GradedVS) -> bool {
    let all_two = (0..vs.len()).all(|i| vs.degree(i) >= 2);
    let single = vs.len() == 1 && vs.degree(0) >= 1;
    !vs.is_empty() && (all_two || single)
}

/// Basis elements with degree in `min_degree..=max_degree`, sorted by weight,
/// degree and label. The flag reports whether a weight cap cut the list.
pub fn slp_basis(
    vs: &GradedVS,
    min_degree: i64,
    max_degree: i64,
    p: Prime,
    policy: Policy,
    weight_cap: Option<usize>,
) -> Result<(Vec<BasisElement>, bool)> {
    let mut out = Vec::new();
    if vs.is_empty() || min_degree > max_degree {
        return Ok((out, false));
    }
    let complete = degree_bounds_weight(vs) && weight_cap.is_none();
    let cap = if complete {
        // A bracket of weight w has degree at least w(d - 1) + 1 when every
        // generator has degree at least d.
        if vs.len() == 1 {
            2
        } else {
            let d = (0..vs.len()).map(|i| vs.degree(i)).min().unwrap_or(2);
            ((max_degree - 1) / (d - 1)).max(1) as usize
        }
    } else {
        weight_cap.unwrap_or(DEFAULT_WEIGHT_CAP)
    };
    let q = p.get() as usize;
    for b in lie_basis(vs, cap, p) {
        let mut ops = 0;
        while complete || b.weight * q.pow(ops as u32) <= cap {
            let words = op_words(ops, b.degree, p, policy, i64::MIN, max_degree);
            // Once even the lowest composite is too high, longer ones are too.
            if words.is_empty() && ops > 0 {
                break;
            }
            for op in words {
                let e = element(op, b.word.clone(), vs, p);
                if e.degree >= min_degree {
                    out.push(e);
                }
            }
            ops += 1;
            if complete && ops > 64 {
                break;
            }
        }
    }
    out.sort_by(|a, b| (a.weight, a.degree, &a.label).cmp(&(b.weight, b.degree, &b.label)));
    Ok((out, !complete))
}

/// Per-degree counts of [`slp_basis`].
pub fn poincare(
    vs: &GradedVS,
    min_degree: i64,
    max_degree: i64,
    p: Prime,
    policy: Policy,
    weight_cap: Option<usize>,
) -> Result<GradedDims> {
    let (basis, truncated) = slp_basis(vs, min_degree, max_degree, p, policy, weight_cap)?;
    let mut out = GradedDims::new();
    for b in basis {
        out.add_label(b.degree, b.label);
    }
    out.truncated = truncated;
    out.certified = !truncated;
    Ok(out)
}

/// [`poincare`] split by weight.
pub fn poincare_by_weight(
    vs: &GradedVS,
    min_degree: i64,
    max_degree: i64,
    p: Prime,
    policy: Policy,
    weight_cap: Option<usize>,
) -> Result<BTreeMap<usize, GradedDims>> {
    let (basis, truncated) = slp_basis(vs, min_degree, max_degree, p, policy, weight_cap)?;
    let mut out: BTreeMap<usize, GradedDims> = BTreeMap::new();
    for b in basis {
        out.entry(b.weight).or_default().add_label(b.degree, b.label);
    }
    for g in out.values_mut() {
        g.truncated = truncated;
        g.certified = !truncated;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(q: u64) -> Prime {
        Prime::new(q).unwrap()
    }

    #[test]
    fn cu_examples() {
        let pol = Policy::Rational;
        assert!(cu_check(&OpWord(alloc::vec![(1, 6), (1, 2)]), 3, p(3), pol));
        assert!(!cu_check(&OpWord(alloc::vec![(0, 5), (1, 2)]), 3, p(3), pol));
        assert!(cu_check(&OpWord(alloc::vec![(1, 2)]), 3, p(3), pol));
        assert!(!cu_check(&OpWord(alloc::vec![(1, 1)]), 3, p(3), pol));
        assert!(cu_check(&OpWord(alloc::vec![(1, 1)]), 3, p(3), Policy::AmLiteral));
        assert!("bogus".parse::<Policy>().is_err());
    }

    #[test]
    fn degrees() {
        assert_eq!(op_degree(&OpWord::default(), p(3)), 0);
        assert_eq!(op_degree(&OpWord(alloc::vec![(1, 2)]), p(3)), 6);
        assert_eq!(op_degree(&OpWord(alloc::vec![(1, 6), (1, 2)]), p(3)), 28);
    }

    #[test]
    fn sphere_layers() {
        let d = layer_basis_sphere(3, 3, p(3), Policy::Rational, 14).unwrap();
        assert_eq!(d.support(), [9, 10, 13, 14]);
        assert_eq!(d.labels[&9], ["bQ^2 i"]);
        let d = layer_basis_sphere(9, 3, p(3), Policy::Rational, 31).unwrap();
        assert_eq!(d.support(), [31]);
        assert_eq!(d.labels[&31], ["bQ^6 bQ^2 i"]);
        assert!(layer_basis_sphere(5, 7, p(3), Policy::Rational, 60).unwrap().dims.is_empty());
        let d = layer_basis_sphere(2, 4, p(3), Policy::Rational, 60).unwrap();
        assert_eq!(d.dims.into_iter().collect::<Vec<_>>(), [(7, 1)]);
        let d = layer_basis_sphere(6, 2, p(3), Policy::Rational, 14).unwrap();
        assert_eq!(d.support(), [9, 10, 13, 14]);
        assert_eq!(d.labels[&10], ["Q^2 [i,i]"]);
    }

    #[test]
    fn poincare_examples() {
        let vs = GradedVS::parse("i:3").unwrap();
        let d = poincare(&vs, i64::MIN, 20, p(3), Policy::Rational, None).unwrap();
        assert_eq!(d.support(), [3, 9, 10, 13, 14, 17, 18]);
        let vs = GradedVS::parse("i:1").unwrap();
        let d = poincare(&vs, i64::MIN, 10, p(3), Policy::Rational, None).unwrap();
        assert_eq!(d.support(), [1, 3, 4, 7, 8]);
        let vs = GradedVS::parse("x:2").unwrap();
        let d = poincare(&vs, i64::MIN, 3, p(5), Policy::Rational, None).unwrap();
        assert_eq!(d.dims.into_iter().collect::<Vec<_>>(), [(2, 1), (3, 1)]);
        assert!(!d.truncated);
        let vs = GradedVS::parse("x:1,y:1").unwrap();
        let d = poincare(&vs, -5, 5, p(3), Policy::Rational, None).unwrap();
        assert!(d.truncated && !d.certified);
    }
}
