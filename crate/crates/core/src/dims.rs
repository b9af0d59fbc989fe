use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

/// Ranks of a graded `F_p` vector space, optionally with basis labels.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GradedDims {
    /// Degree to rank; zero ranks are never stored.
    pub dims: BTreeMap<i64, usize>,
    pub labels: BTreeMap<i64, Vec<String>>,
    /// Every rank in the reported window is proven exact.
    pub certified: bool,
    /// Output was cut at a weight or degree cap.
    pub truncated: bool,
}

impl GradedDims {
    pub fn new() -> Self {
        GradedDims { certified: true, ..Default::default() }
    }

    pub fn add(&mut self, degree: i64, rank: usize) {
        if rank > 0 {
            *self.dims.entry(degree).or_insert(0) += rank;
        }
    }

    pub fn add_label(&mut self, degree: i64, label: String) {
        self.add(degree, 1);
        self.labels.entry(degree).or_default().push(label);
    }

    pub fn rank(&self, degree: i64) -> usize {
        self.dims.get(&degree).copied().unwrap_or(0)
    }

    pub fn total(&self) -> usize {
        self.dims.values().sum()
    }

    /// Degrees carrying a nonzero rank, in increasing order.
    pub fn support(&self) -> Vec<i64> {
        self.dims.keys().copied().collect()
    }

    /// The part of `self` in degrees `lo..=hi`.
    pub fn window(&self, lo: i64, hi: i64) -> GradedDims {
        GradedDims {
            dims: self.dims.range(lo..=hi).map(|(&d, &r)| (d, r)).collect(),
            labels: self.labels.range(lo..=hi).map(|(&d, l)| (d, l.clone())).collect(),
            certified: self.certified,
            truncated: self.truncated,
        }
    }

    /// Shifts every degree by `by`.
    pub fn shifted(&self, by: i64) -> GradedDims {
        GradedDims {
            dims: self.dims.iter().map(|(&d, &r)| (d + by, r)).collect(),
            labels: self.labels.iter().map(|(&d, l)| (d + by, l.clone())).collect(),
            certified: self.certified,
            truncated: self.truncated,
        }
    }

    /// True when both have the same rank in every degree.
    pub fn same_ranks(&self, other: &GradedDims) -> bool {
        self.dims == other.dims
    }
}

impl FromIterator<(i64, usize)> for GradedDims {
    fn from_iter<I: IntoIterator<Item = (i64, usize)>>(iter: I) -> Self {
        let mut g = GradedDims::new();
        for (d, r) in iter {
            g.add(d, r);
        }
        g
    }
}
