//! Mod `p` homology of permutation groups whose Sylow `p`-subgroup is trivial
//! or cyclic of order `p`, with coefficients in a one-dimensional character.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::dims::GradedDims;
use crate::error::{Error, Result};
use crate::fieldlin::{Matrix, Prime};
use crate::forest::{Perm, PermGroupSpec};

/// A group together with a character `G -> {±1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharacterModule {
    group: PermGroupSpec,
    values: BTreeMap<Perm, i8>,
}

impl CharacterModule {
    pub fn trivial(group: PermGroupSpec) -> Self {
        let values = group.elements().iter().map(|g| (g.clone(), 1)).collect();
        CharacterModule { group, values }
    }

    /// `sgn^j`, the action on the top class of `(S^j)^{∧n}`.
    pub fn sign_power(group: PermGroupSpec, j: i64) -> Self {
        let odd = j.rem_euclid(2) == 1;
        let values = group.elements().iter().map(|g| (g.clone(), if odd { g.sign() } else { 1 })).collect();
        CharacterModule { group, values }
    }

    /// Extends values on the generators multiplicatively, rejecting
    /// assignments that do not define a homomorphism.
    pub fn from_generator_values(group: PermGroupSpec, gens: &[i8]) -> Result<Self> {
        if gens.len() != group.generators().len() {
            return Err(Error::Arity { expected: group.generators().len(), found: gens.len() });
        }
        if gens.iter().any(|&v| v != 1 && v != -1) {
            return Err(Error::Parse(String::from("character values must be ±1")));
        }
        let mut values: BTreeMap<Perm, i8> = BTreeMap::new();
        let id = Perm::identity(group.degree());
        values.insert(id.clone(), 1);
        let mut frontier = alloc::vec![id];
        while let Some(g) = frontier.pop() {
            let vg = values[&g];
            for (s, &vs) in group.generators().iter().zip(gens) {
                let h = s.compose(&g);
                match values.get(&h) {
                    Some(&vh) if vh != vs * vg => {
                        return Err(Error::Parse(format!("generator values {gens:?} are not multiplicative")))
                    }
                    Some(_) => {}
                    None => {
                        values.insert(h.clone(), vs * vg);
                        frontier.push(h);
                    }
                }
            }
        }
        CharacterModule::from_fn(group, |g| values[g])
    }

    /// Builds a character from its values and checks multiplicativity on
    /// every pair of elements.
    pub fn from_fn(group: PermGroupSpec, f: impl Fn(&Perm) -> i8) -> Result<Self> {
        let values: BTreeMap<Perm, i8> = group.elements().iter().map(|g| (g.clone(), f(g))).collect();
        for (a, &va) in &values {
            for (b, &vb) in &values {
                if values[&a.compose(b)] != va * vb {
                    return Err(Error::Parse(format!("character is not multiplicative at {a}, {b}")));
                }
            }
        }
        Ok(CharacterModule { group, values })
    }

    /// As [`CharacterModule::from_fn`] without the multiplicativity check,
    /// for characters known to be homomorphisms by construction.
    pub(crate) fn from_fn_trusted(group: PermGroupSpec, f: impl Fn(&Perm) -> i8) -> Self {
        let values = group.elements().iter().map(|g| (g.clone(), f(g))).collect();
        CharacterModule { group, values }
    }

    pub fn group(&self) -> &PermGroupSpec {
        &self.group
    }

    pub fn value(&self, g: &Perm) -> i8 {
        self.values[g]
    }

    pub fn is_trivial(&self) -> bool {
        self.values.values().all(|&v| v == 1)
    }

    pub fn restrict(&self, sub: &PermGroupSpec) -> Result<CharacterModule> {
        if !sub.is_subgroup_of(&self.group) {
            return Err(Error::Unsupported(String::from("restriction to a non-subgroup")));
        }
        let values = sub.elements().iter().map(|g| (g.clone(), self.values[g])).collect();
        Ok(CharacterModule { group: sub.clone(), values })
    }
}

/// Exponent of `p` in `m`.
pub(crate) fn valuation(p: u32, mut m: usize) -> u32 {
    let mut v = 0;
    while m > 0 && m.is_multiple_of(p as usize) {
        m /= p as usize;
        v += 1;
    }
    v
}

/// Dimension of the coinvariants, for groups of order prime to `p`.
pub fn coinvariant_dim(m: &CharacterModule, p: Prime) -> Result<usize> {
    if m.group.order().is_multiple_of(p.get() as usize) {
        return Err(Error::Unsupported(format!(
            "{p} divides the group order {}; use small_group_homology",
            m.group.order(),
            p = p.get()
        )));
    }
    Ok(usize::from(m.is_trivial()))
}

/// A Sylow subgroup of order `p`: a generator and the action of its
/// normalizer, `g x g^-1 = x^u(g)`.
#[derive(Clone, Debug)]
pub struct CyclicSylow {
    pub generator: Perm,
    pub normalizer: Vec<(Perm, u32)>,
}

/// Finds the Sylow subgroup, `None` when `p` does not divide `|G|`.
pub fn cyclic_sylow(group: &PermGroupSpec, p: Prime) -> Result<Option<CyclicSylow>> {
    let q = p.get();
    match valuation(q, group.order()) {
        0 => return Ok(None),
        1 => {}
        v => {
            return Err(Error::Unsupported(format!(
                "Sylow {q}-subgroup of order {q}^{v} is not cyclic of order {q}"
            )))
        }
    }
    let x = group
        .elements()
        .iter()
        .find(|g| g.order() == q as usize)
        .cloned()
        .ok_or_else(|| Error::Integrity(format!("no element of order {q}")))?;
    let mut powers = alloc::vec![Perm::identity(group.degree())];
    for _ in 1..q {
        let next = x.compose(powers.last().expect("nonempty"));
        powers.push(next);
    }
    let mut normalizer = Vec::new();
    for g in group.elements() {
        let conj = g.compose(&x).compose(&g.inverse());
        if let Some(u) = powers.iter().position(|h| *h == conj) {
            normalizer.push((g.clone(), u as u32));
        }
    }
    Ok(Some(CyclicSylow { generator: x, normalizer }))
}

/// `H_s(G; χ)` for `0 <= s <= max_degree`.
///
/// With a cyclic Sylow subgroup `P` of order `p`, `H_s(G; χ)` is the
/// `N_G(P)`-coinvariants of `H_s(P; F_p)`, a line on which `g` acts by
/// `χ(g) u(g)^⌈s/2⌉`.
pub fn small_group_homology(m: &CharacterModule, p: Prime, max_degree: i64) -> Result<GradedDims> {
    let mut out = GradedDims::new();
    if max_degree < 0 {
        return Ok(out);
    }
    let Some(sylow) = cyclic_sylow(&m.group, p)? else {
        out.add(0, coinvariant_dim(m, p)?);
        return Ok(out);
    };
    out.add(0, usize::from(m.is_trivial()));
    for s in 1..=max_degree {
        let i = (s as u64).div_ceil(2);
        let fixed = sylow.normalizer.iter().all(|(g, u)| {
            let chi = p.reduce(m.value(g) as i64);
            p.mul(chi, p.pow(*u, i)) == 1
        });
        out.add(s, usize::from(fixed));
    }
    Ok(out)
}

/// Writes `β^ε Q^s` in the label grammar shared with operation words.
pub fn op_label(epsilon: u8, s: i64) -> String {
    if epsilon == 1 {
        format!("bQ^{s}")
    } else {
        format!("Q^{s}")
    }
}

/// Solves `degree = |x| + 2(p-1)s - ε` for `(ε, s)`.
pub fn solve_operation(p: Prime, base_degree: i64, degree: i64) -> Option<(u8, i64)> {
    let period = 2 * (p.get() as i64 - 1);
    (0..=1u8).find_map(|e| {
        let num = degree - base_degree + e as i64;
        (num.rem_euclid(period) == 0).then_some((e, num / period))
    })
}

/// `H_*((S^j)^{∧p}_{hΣ_p})` through `max_degree`, each class labelled by the
/// operation producing it from the fundamental class `i`.
pub fn extended_power_sphere(p: Prime, j: i64, max_degree: i64) -> Result<GradedDims> {
    let q = p.get();
    let group = PermGroupSpec::symmetric(q)?;
    let module = CharacterModule::sign_power(group, j);
    let bottom = j * q as i64;
    let h = small_group_homology(&module, p, max_degree - bottom)?;
    let mut out = GradedDims::new();
    for (s, rank) in h.dims {
        let degree = bottom + s;
        let (e, i) = solve_operation(p, j, degree)
            .ok_or_else(|| Error::Integrity(format!("no operation lands in degree {degree}")))?;
        debug_assert_eq!(rank, 1);
        out.add_label(degree, format!("{} i", op_label(e, i)));
    }
    Ok(out)
}

/// Transfer `H_s(G; χ) -> H_s(H; χ)` as a `dim_H × dim_G` matrix.
///
/// Bases are chosen so that corestriction is the identity wherever both sides
/// are nonzero; the transfer is then multiplication by `[G:H]`. This covers
/// `H = G` (identity), `p | [G:H]` (zero), the coset sum when `p ∤ |G|`, and
/// subgroups containing a Sylow subgroup with `p ∤ [G:H]`.
pub fn transfer_map(from: &CharacterModule, to: &PermGroupSpec, p: Prime, degree: i64) -> Result<Matrix> {
    let sub = from.restrict(to)?;
    let (dim_g, dim_h) = homology_pair(from, &sub, p, degree)?;
    let index = (from.group.order() / to.order()) as i64;
    let mut m = Matrix::zeros(p, dim_h, dim_g);
    if dim_g == 1 && dim_h == 1 {
        m.set(0, 0, index);
    }
    Ok(m)
}

/// Corestriction `H_s(H; χ) -> H_s(G; χ)` in the bases of [`transfer_map`].
pub fn corestriction_map(
    from: &CharacterModule,
    to: &PermGroupSpec,
    p: Prime,
    degree: i64,
) -> Result<Matrix> {
    let sub = from.restrict(to)?;
    let (dim_g, dim_h) = homology_pair(from, &sub, p, degree)?;
    let mut m = Matrix::zeros(p, dim_g, dim_h);
    if dim_g == 1 && dim_h == 1 {
        m.set(0, 0, 1);
    }
    Ok(m)
}

fn homology_pair(g: &CharacterModule, h: &CharacterModule, p: Prime, degree: i64) -> Result<(usize, usize)> {
    if degree < 0 {
        return Ok((0, 0));
    }
    let dg = small_group_homology(g, p, degree)?.rank(degree);
    let dh = small_group_homology(h, p, degree)?.rank(degree);
    if dg > dh {
        return Err(Error::Integrity(format!(
            "H_{degree} of the group exceeds that of a subgroup of index prime to p"
        )));
    }
    Ok((dg, dh))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(q: u64) -> Prime {
        Prime::new(q).unwrap()
    }

    #[test]
    fn coinvariants() {
        let s2 = PermGroupSpec::symmetric(2).unwrap();
        assert_eq!(coinvariant_dim(&CharacterModule::sign_power(s2.clone(), 1), p(3)).unwrap(), 0);
        assert_eq!(coinvariant_dim(&CharacterModule::trivial(s2), p(3)).unwrap(), 1);
        let one = PermGroupSpec::trivial(3).unwrap();
        assert_eq!(coinvariant_dim(&CharacterModule::trivial(one), p(3)).unwrap(), 1);
        let s3 = PermGroupSpec::symmetric(3).unwrap();
        assert!(coinvariant_dim(&CharacterModule::trivial(s3), p(3)).is_err());
    }

    #[test]
    fn symmetric_group_homology() {
        let s3 = PermGroupSpec::symmetric(3).unwrap();
        let triv = small_group_homology(&CharacterModule::trivial(s3.clone()), p(3), 8).unwrap();
        assert_eq!(triv.support(), [0, 3, 4, 7, 8]);
        let sign = small_group_homology(&CharacterModule::sign_power(s3, 1), p(3), 8).unwrap();
        assert_eq!(sign.support(), [1, 2, 5, 6]);
        let s5 = PermGroupSpec::symmetric(5).unwrap();
        let triv = small_group_homology(&CharacterModule::trivial(s5.clone()), p(5), 16).unwrap();
        assert_eq!(triv.support(), [0, 7, 8, 15, 16]);
        let sign = small_group_homology(&CharacterModule::sign_power(s5, 1), p(5), 16).unwrap();
        assert_eq!(sign.support(), [3, 4, 11, 12]);
        let s6 = PermGroupSpec::symmetric(6).unwrap();
        let err = small_group_homology(&CharacterModule::trivial(s6), p(3), 4).unwrap_err();
        assert_eq!(err.kind(), crate::ErrorKind::Unsupported);
    }

    #[test]
    fn extended_powers() {
        let e = extended_power_sphere(p(3), 3, 15).unwrap();
        assert_eq!(e.support(), [10, 11, 14, 15]);
        assert_eq!(e.labels[&10], ["bQ^2 i"]);
        let e = extended_power_sphere(p(3), 2, 14).unwrap();
        assert_eq!(e.support(), [6, 9, 10, 13, 14]);
        assert_eq!(e.labels[&6], ["Q^1 i"]);
        let e = extended_power_sphere(p(3), 1, 9).unwrap();
        assert_eq!(e.support(), [4, 5, 8, 9]);
    }

    #[test]
    fn generator_values_must_be_multiplicative() {
        let s3 = PermGroupSpec::symmetric(3).unwrap();
        assert!(CharacterModule::from_generator_values(s3.clone(), &[-1, 1]).is_ok());
        assert!(CharacterModule::from_generator_values(s3, &[1, -1]).is_err());
    }

    #[test]
    fn transfers() {
        let g = PermGroupSpec::fixing_first(4).unwrap();
        let m = CharacterModule::trivial(g.clone());
        let id = transfer_map(&m, &g, p(3), 3).unwrap();
        assert_eq!((id.rows(), id.cols(), id.get(0, 0)), (1, 1, 1));
        let s3 = PermGroupSpec::symmetric(3).unwrap();
        let s2 = s3.subgroup_where(|g| g.apply(3) == 3);
        let t = transfer_map(&CharacterModule::trivial(s3), &s2, p(3), 0).unwrap();
        assert_eq!((t.rows(), t.cols(), t.get(0, 0)), (1, 1, 0));
    }
}
