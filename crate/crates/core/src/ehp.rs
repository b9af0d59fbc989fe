//! Degreewise comparisons between sphere layers predicted by the EHP
//! sequences.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::dims::GradedDims;
use crate::error::{Error, Result};
use crate::fieldlin::Prime;
use crate::layers::layer_dims;
use crate::opbasis::{layer_basis_sphere, Policy};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComparisonRow {
    /// Degree on the left; the right side is read in `degree + shift`.
    pub degree: i64,
    pub lhs: usize,
    pub rhs: usize,
    pub agree: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComparisonReport {
    pub lhs: String,
    pub rhs: String,
    pub shift: i64,
    pub rows: Vec<ComparisonRow>,
    pub first_discrepancy: Option<i64>,
    /// Whether the spectral sequence confirmed the enumerated sides it could
    /// reach; `None` when it reached neither.
    pub oracle_agrees: Option<bool>,
}

impl ComparisonReport {
    pub fn agrees(&self) -> bool {
        self.first_discrepancy.is_none()
    }

    /// The same comparison read from the other side.
    pub fn swapped(&self) -> ComparisonReport {
        let rows = self
            .rows
            .iter()
            .map(|r| ComparisonRow { degree: r.degree + self.shift, lhs: r.rhs, rhs: r.lhs, agree: r.agree })
            .collect();
        ComparisonReport {
            lhs: self.rhs.clone(),
            rhs: self.lhs.clone(),
            shift: -self.shift,
            rows,
            first_discrepancy: self.first_discrepancy.map(|d| d + self.shift),
            oracle_agrees: self.oracle_agrees,
        }
    }
}

/// Compares `lhs` in degree `d` with `rhs` in degree `d + shift` for `d` in
/// `lo..=hi`. Without `lo` the window starts at the lowest class of either
/// side.
pub fn compare(
    lhs_name: String,
    lhs: &GradedDims,
    rhs_name: String,
    rhs: &GradedDims,
    shift: i64,
    lo: Option<i64>,
    hi: i64,
) -> ComparisonReport {
    let lowest = [lhs.support().first().copied(), rhs.support().first().map(|d| d - shift)]
        .into_iter()
        .flatten()
        .min();
    let lo = lo.or(lowest).unwrap_or(hi).min(hi);
    let rows: Vec<ComparisonRow> = (lo..=hi)
        .map(|d| {
            let (a, b) = (lhs.rank(d), rhs.rank(d + shift));
            ComparisonRow { degree: d, lhs: a, rhs: b, agree: a == b }
        })
        .collect();
    let first_discrepancy = rows.iter().find(|r| !r.agree).map(|r| r.degree);
    ComparisonReport { lhs: lhs_name, rhs: rhs_name, shift, rows, first_discrepancy, oracle_agrees: None }
}

fn layer_name(m: usize, j: i64) -> String {
    format!("D_{m}(S^{j})")
}

/// Checks enumerated sphere layers against the spectral sequence wherever it
/// runs and certifies.
fn oracle_check(sides: &[(usize, i64, &GradedDims)], p: Prime, hi: i64) -> Option<bool> {
    let mut seen = false;
    for &(m, j, dims) in sides {
        if let Ok(o) = layer_dims(m as u32, j, p, hi) {
            if o.certified {
                seen = true;
                if !o.same_ranks(&dims.window(i64::MIN, hi)) {
                    return Some(false);
                }
            }
        }
    }
    seen.then_some(true)
}

/// `H_d D_m(S^n)` against `H_{d+1} D_m(S^{n+1})` for odd `m`.
pub fn odd_iso_report(
    m: usize,
    n: i64,
    p: Prime,
    min_degree: Option<i64>,
    max_degree: i64,
    policy: Policy,
) -> Result<ComparisonReport> {
    if m.is_multiple_of(2) {
        return Err(Error::Parse(format!("the suspension comparison needs an odd layer, got {m}")));
    }
    let lhs = layer_basis_sphere(m, n, p, policy, max_degree)?;
    let rhs = layer_basis_sphere(m, n + 1, p, policy, max_degree + 1)?;
    let mut report = compare(
        layer_name(m, n),
        &lhs,
        format!("S^-1 {}", layer_name(m, n + 1)),
        &rhs,
        1,
        min_degree,
        max_degree,
    );
    if policy == Policy::Rational {
        report.oracle_agrees = oracle_check(&[(m, n, &lhs), (m, n + 1, &rhs)], p, max_degree);
    }
    Ok(report)
}

/// Which reading of the even-sphere sequence to check.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum LesForm {
    /// `H_d D_m(S^{4l+1})` against `H_{d-2}` of the bracket part of
    /// `D_{2m}(S^{2l})`.
    #[default]
    ShiftTwo,
    /// `H_d D_m(S^{4l-1})` against `H_d` of the bracket part of
    /// `D_{2m}(S^{2l})`.
    OddSource,
}

impl LesForm {
    pub fn name(self) -> &'static str {
        match self {
            LesForm::ShiftTwo => "shift-2",
            LesForm::OddSource => "odd-source",
        }
    }
}

impl core::str::FromStr for LesForm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "shift-2" => Ok(LesForm::ShiftTwo),
            "odd-source" => Ok(LesForm::OddSource),
            other => Err(Error::Parse(format!("unknown comparison form {other:?}"))),
        }
    }
}

/// With the middle term zero, the odd-sphere layer `D_m` matches the bracket
/// part of `D_{2m}` on the even sphere `S^{2l}`; `m` must be a power of `p`.
pub fn even_les_report(
    m: usize,
    l: i64,
    p: Prime,
    min_degree: Option<i64>,
    max_degree: i64,
    policy: Policy,
    form: LesForm,
) -> Result<ComparisonReport> {
    let q = p.get() as usize;
    let mut r = m;
    while r > 1 && r.is_multiple_of(q) {
        r /= q;
    }
    if r != 1 {
        return Err(Error::Parse(format!("{m} is not a power of {q}")));
    }
    let (source, shift) = match form {
        LesForm::ShiftTwo => (4 * l + 1, -2),
        LesForm::OddSource => (4 * l - 1, 0),
    };
    let lhs = layer_basis_sphere(m, source, p, policy, max_degree)?;
    let rhs = layer_basis_sphere(2 * m, 2 * l, p, policy, max_degree + shift.max(0))?;
    let mut report = compare(
        layer_name(m, source),
        &lhs,
        format!("[i,i] part of {}", layer_name(2 * m, 2 * l)),
        &rhs,
        shift,
        min_degree,
        max_degree,
    );
    if policy == Policy::Rational {
        report.oracle_agrees = oracle_check(&[(m, source, &lhs)], p, max_degree);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(q: u64) -> Prime {
        Prime::new(q).unwrap()
    }

    #[test]
    fn odd_sources_agree() {
        let r = odd_iso_report(3, 1, p(3), None, 40, Policy::Rational).unwrap();
        assert!(r.agrees());
        assert_eq!(r.oracle_agrees, Some(true));
        assert!(odd_iso_report(3, -1, p(3), None, 20, Policy::Rational).unwrap().agrees());
    }

    #[test]
    fn even_source_breaks_at_four() {
        let r = odd_iso_report(3, 2, p(3), None, 40, Policy::Rational).unwrap();
        assert_eq!(r.first_discrepancy, Some(4));
        assert!(odd_iso_report(2, 2, p(3), None, 40, Policy::Rational).is_err());
    }

    #[test]
    fn even_sequence_forms() {
        for l in 1..=2 {
            let r = even_les_report(1, l, p(3), None, 40, Policy::Rational, LesForm::ShiftTwo);
            assert!(r.unwrap().agrees());
            let r = even_les_report(3, l, p(3), None, 40, Policy::Rational, LesForm::OddSource);
            assert!(r.unwrap().agrees());
        }
        let r = even_les_report(3, 1, p(3), None, 40, Policy::Rational, LesForm::ShiftTwo).unwrap();
        assert_eq!(r.first_discrepancy, Some(11));
        assert!(even_les_report(6, 1, p(3), None, 40, Policy::Rational, LesForm::ShiftTwo).is_err());
    }

    #[test]
    fn swapping_negates_the_shift() {
        let r = odd_iso_report(3, 2, p(3), None, 30, Policy::Rational).unwrap();
        let s = r.swapped();
        assert_eq!(s.shift, -1);
        assert_eq!(s.first_discrepancy, Some(5));
        assert_eq!(s.swapped(), r);
    }
}
