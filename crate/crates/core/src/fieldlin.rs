//! Dense linear algebra over the prime field `F_p`, `p` odd.
//!
//! Every matrix carries its own modulus so results for different primes can
//! live side by side in one process. Matrices act on column vectors: a map
//! `A -> B` is stored as a `dim B × dim A` matrix.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};

/// An odd prime modulus.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Prime(u32);

impl Prime {
    pub fn new(p: u64) -> Result<Self> {
        if p < 3 || p.is_multiple_of(2) || p > u64::from(u16::MAX) {
            return Err(Error::InvalidPrime(p));
        }
        let mut d = 3;
        while d * d <= p {
            if p.is_multiple_of(d) {
                return Err(Error::InvalidPrime(p));
            }
            d += 2;
        }
        Ok(Prime(p as u32))
    }

    pub fn get(self) -> u32 {
        self.0
    }

    /// Canonical representative of an integer.
    pub fn reduce(self, x: i64) -> u32 {
        x.rem_euclid(i64::from(self.0)) as u32
    }

    pub fn add(self, a: u32, b: u32) -> u32 {
        ((u64::from(a) + u64::from(b)) % u64::from(self.0)) as u32
    }

    pub fn sub(self, a: u32, b: u32) -> u32 {
        ((u64::from(a) + u64::from(self.0) - u64::from(b)) % u64::from(self.0)) as u32
    }

    pub fn mul(self, a: u32, b: u32) -> u32 {
        ((u64::from(a) * u64::from(b)) % u64::from(self.0)) as u32
    }

    pub fn neg(self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.0 - a
        }
    }

    pub fn pow(self, base: u32, mut exp: u64) -> u32 {
        let mut acc = 1 % self.0;
        let mut b = base % self.0;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, b);
            }
            b = self.mul(b, b);
            exp >>= 1;
        }
        acc
    }

    /// Multiplicative inverse of a nonzero element.
    pub fn inv(self, a: u32) -> u32 {
        debug_assert!(!a.is_multiple_of(self.0), "inverse of zero");
        self.pow(a, u64::from(self.0 - 2))
    }

    /// `(-1)^e` as a field element.
    pub fn sign(self, e: i64) -> u32 {
        if e.rem_euclid(2) == 0 {
            1
        } else {
            self.0 - 1
        }
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A residue mod `p` that remembers its modulus.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FieldElement {
    value: u32,
    p: Prime,
}

impl FieldElement {
    pub fn new(value: i64, p: Prime) -> Self {
        FieldElement { value: p.reduce(value), p }
    }

    pub fn value(self) -> u32 {
        self.value
    }

    pub fn prime(self) -> Prime {
        self.p
    }

    fn same_field(self, other: Self) -> Result<Prime> {
        if self.p != other.p {
            return Err(Error::MixedModulus { left: self.p.get(), right: other.p.get() });
        }
        Ok(self.p)
    }

    pub fn try_add(self, other: Self) -> Result<Self> {
        let p = self.same_field(other)?;
        Ok(FieldElement { value: p.add(self.value, other.value), p })
    }

    pub fn try_sub(self, other: Self) -> Result<Self> {
        let p = self.same_field(other)?;
        Ok(FieldElement { value: p.sub(self.value, other.value), p })
    }

    pub fn try_mul(self, other: Self) -> Result<Self> {
        let p = self.same_field(other)?;
        Ok(FieldElement { value: p.mul(self.value, other.value), p })
    }

    pub fn inv(self) -> Option<Self> {
        (self.value != 0).then(|| FieldElement { value: self.p.inv(self.value), p: self.p })
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.value, self.p)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    p: Prime,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
    row_labels: Option<Vec<String>>,
    col_labels: Option<Vec<String>>,
}

/// Output of [`Matrix::rref`].
#[derive(Clone, Debug)]
pub struct Rref {
    pub rank: usize,
    pub reduced: Matrix,
    pub pivot_columns: Vec<usize>,
}

fn check_distinct(labels: &[String]) -> Result<()> {
    let mut seen = BTreeSet::new();
    for l in labels {
        if !seen.insert(l.as_str()) {
            return Err(Error::DuplicateLabel(l.clone()));
        }
    }
    Ok(())
}

impl Matrix {
    pub fn zeros(p: Prime, rows: usize, cols: usize) -> Self {
        Matrix { p, rows, cols, data: vec![0; rows * cols], row_labels: None, col_labels: None }
    }

    pub fn identity(p: Prime, n: usize) -> Self {
        let mut m = Self::zeros(p, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    /// Builds a matrix from integer rows, reducing each entry mod `p`.
    pub fn from_rows(p: Prime, cols: usize, rows: &[Vec<i64>]) -> Result<Self> {
        let mut m = Self::zeros(p, rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(Error::Shape(format!("row {i} has {} entries, expected {cols}", row.len())));
            }
            for (j, &x) in row.iter().enumerate() {
                m.data[i * cols + j] = p.reduce(x);
            }
        }
        Ok(m)
    }

    /// Builds a matrix from field elements, which must all share one prime.
    pub fn from_elements(rows: usize, cols: usize, entries: &[FieldElement]) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::Shape(format!("{} entries for a {rows}x{cols} matrix", entries.len())));
        }
        let Some(first) = entries.first() else {
            return Err(Error::Shape(String::from("cannot infer the prime of an empty matrix")));
        };
        let p = first.prime();
        let mut data = Vec::with_capacity(entries.len());
        for e in entries {
            if e.prime() != p {
                return Err(Error::MixedModulus { left: p.get(), right: e.prime().get() });
            }
            data.push(e.value());
        }
        Ok(Matrix { p, rows, cols, data, row_labels: None, col_labels: None })
    }

    pub fn with_labels(mut self, rows: Vec<String>, cols: Vec<String>) -> Result<Self> {
        if rows.len() != self.rows || cols.len() != self.cols {
            return Err(Error::Shape(String::from("label count differs from matrix shape")));
        }
        check_distinct(&rows)?;
        check_distinct(&cols)?;
        self.row_labels = Some(rows);
        self.col_labels = Some(cols);
        Ok(self)
    }

    pub fn prime(&self) -> Prime {
        self.p
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row_labels(&self) -> Option<&[String]> {
        self.row_labels.as_deref()
    }

    pub fn col_labels(&self) -> Option<&[String]> {
        self.col_labels.as_deref()
    }

    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: i64) {
        self.data[r * self.cols + c] = self.p.reduce(v);
    }

    /// Adds `v` to entry `(r, c)`.
    pub fn add_to(&mut self, r: usize, c: usize, v: u32) {
        let i = r * self.cols + c;
        self.data[i] = self.p.add(self.data[i], v % self.p.get());
    }

    pub fn row(&self, r: usize) -> &[u32] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    /// Nonzero entries as `(row, col, value)` in row-major order.
    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, u32)> + '_ {
        self.data
            .iter()
            .enumerate()
            .filter(|(_, &v)| v != 0)
            .map(move |(i, &v)| (i / self.cols, i % self.cols, v))
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.p, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.data[c * self.rows + r] = self.data[r * self.cols + c];
            }
        }
        t.row_labels = self.col_labels.clone();
        t.col_labels = self.row_labels.clone();
        t
    }

    /// The product `self · rhs`.
    pub fn mul(&self, rhs: &Matrix) -> Result<Matrix> {
        if self.p != rhs.p {
            return Err(Error::MixedModulus { left: self.p.get(), right: rhs.p.get() });
        }
        if self.cols != rhs.rows {
            return Err(Error::Shape(format!(
                "cannot compose {}x{} after {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let p = self.p;
        let mut out = Matrix::zeros(p, self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a == 0 {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.data[k * rhs.cols + j];
                    if b != 0 {
                        let idx = i * rhs.cols + j;
                        out.data[idx] = p.add(out.data[idx], p.mul(a, b));
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn apply(&self, v: &[u32]) -> Result<Vec<u32>> {
        if v.len() != self.cols {
            return Err(Error::Shape(format!(
                "vector of length {} for a matrix with {} columns",
                v.len(),
                self.cols
            )));
        }
        let p = self.p;
        Ok((0..self.rows)
            .map(|r| self.row(r).iter().zip(v).fold(0, |acc, (&a, &b)| p.add(acc, p.mul(a, b))))
            .collect())
    }

    /// Reduced row echelon form by Gauss–Jordan elimination.
    pub fn rref(&self) -> Rref {
        let p = self.p;
        let (rows, cols) = (self.rows, self.cols);
        let mut m = self.data.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            if r == rows {
                break;
            }
            let Some(pr) = (r..rows).find(|&i| m[i * cols + c] != 0) else {
                continue;
            };
            if pr != r {
                for j in 0..cols {
                    m.swap(pr * cols + j, r * cols + j);
                }
            }
            let inv = p.inv(m[r * cols + c]);
            for j in c..cols {
                m[r * cols + j] = p.mul(m[r * cols + j], inv);
            }
            for i in 0..rows {
                if i == r {
                    continue;
                }
                let f = m[i * cols + c];
                if f == 0 {
                    continue;
                }
                let nf = p.neg(f);
                for j in c..cols {
                    let x = m[r * cols + j];
                    if x != 0 {
                        m[i * cols + j] = p.add(m[i * cols + j], p.mul(nf, x));
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        let reduced =
            Matrix { p, rows, cols, data: m, row_labels: None, col_labels: self.col_labels.clone() };
        Rref { rank: pivots.len(), reduced, pivot_columns: pivots }
    }

    pub fn rank(&self) -> usize {
        // Eliminating along the shorter side is cheaper and gives the same rank.
        if self.rows > self.cols {
            self.transpose().rref().rank
        } else {
            self.rref().rank
        }
    }

    /// A basis of the null space, one vector per free column.
    pub fn kernel_basis(&self) -> Vec<Vec<u32>> {
        let Rref { reduced, pivot_columns, .. } = self.rref();
        let p = self.p;
        let is_pivot: Vec<bool> = {
            let mut v = vec![false; self.cols];
            for &c in &pivot_columns {
                v[c] = true;
            }
            v
        };
        (0..self.cols)
            .filter(|&c| !is_pivot[c])
            .map(|free| {
                let mut v = vec![0; self.cols];
                v[free] = 1;
                for (row, &pc) in pivot_columns.iter().enumerate() {
                    v[pc] = p.neg(reduced.get(row, free));
                }
                v
            })
            .collect()
    }
}

/// `dim ker(d_out) - rank(d_in)` at the middle term of `A --d_in--> B --d_out--> C`.
pub fn homology_rank(d_in: &Matrix, d_out: &Matrix) -> Result<usize> {
    if d_out.cols != d_in.rows {
        return Err(Error::Shape(format!(
            "outgoing map has {} columns but incoming map has {} rows",
            d_out.cols, d_in.rows
        )));
    }
    let composite = d_out.mul(d_in)?;
    if !composite.is_zero() {
        return Err(Error::Integrity(String::from("composite of consecutive differentials is nonzero")));
    }
    let kernel = d_in.rows - d_out.rank();
    Ok(kernel - d_in.rank())
}
