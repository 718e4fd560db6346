use alloc::vec::Vec;

/// Bijection between pairs `(m, n)`, `m < n`, and flat indices `0..N(N−1)/2`,
/// ordered row-major in `m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwoExcitationBasis {
    n: usize,
    row_start: Vec<usize>,
}

impl TwoExcitationBasis {
    /// Basis for a chain of `n` emitters.
    pub fn new(n: usize) -> Self {
        let mut row_start = Vec::with_capacity(n + 1);
        let mut acc = 0;
        for m in 0..n {
            row_start.push(acc);
            acc += n - m - 1;
        }
        row_start.push(acc);
        Self { n, row_start }
    }

    /// Emitter count.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Sector dimension `N(N−1)/2`.
    pub fn dim(&self) -> usize {
        self.n * self.n.saturating_sub(1) / 2
    }

    /// Flat index of the unordered pair `{a, b}`; `None` when `a == b` or out of range.
    pub fn flatten(&self, a: usize, b: usize) -> Option<usize> {
        let (m, n) = if a < b { (a, b) } else { (b, a) };
        if m == n || n >= self.n {
            return None;
        }
        Some(self.row_start[m] + n - m - 1)
    }

    /// Pair `(m, n)` with `m < n` at a flat index.
    pub fn unflatten(&self, index: usize) -> Option<(usize, usize)> {
        if index >= self.dim() {
            return None;
        }
        let m = self.row_start.partition_point(|&s| s <= index) - 1;
        Some((m, m + 1 + index - self.row_start[m]))
    }

    /// Iterator over all pairs in flat order.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |m| (m + 1..self.n).map(move |n| (m, n)))
    }
}
