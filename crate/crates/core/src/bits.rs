//! Dense bit matrices and word-slice set operations.
//!
//! Rows are packed into `u64` words; all row slices of one matrix share a
//! width, so set algebra (union, complement, intersection counts) runs a
//! fixed number of word operations per row.

/// A dense 0/1 matrix with one packed bit row per logical row.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct BitMatrix {
    rows: usize,
    cols: usize,
    words_per_row: usize,
    words: Vec<u64>,
}

impl BitMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        let words_per_row = words_for(cols);
        BitMatrix {
            rows,
            cols,
            words_per_row,
            words: vec![0u64; rows * words_per_row],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn set(&mut self, r: usize, c: usize) {
        debug_assert!(r < self.rows && c < self.cols);
        self.words[r * self.words_per_row + (c >> 6)] |= 1u64 << (c & 63);
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        debug_assert!(r < self.rows && c < self.cols);
        self.words[r * self.words_per_row + (c >> 6)] >> (c & 63) & 1 == 1
    }

    pub fn row(&self, r: usize) -> &[u64] {
        let start = r * self.words_per_row;
        &self.words[start..start + self.words_per_row]
    }

    pub fn row_count_ones(&self, r: usize) -> u32 {
        self.row(r).iter().map(|w| w.count_ones()).sum()
    }

    /// Transpose; the result has the roles of rows and columns swapped.
    pub fn transposed(&self) -> BitMatrix {
        let mut t = BitMatrix::zero(self.cols, self.rows);
        for r in 0..self.rows {
            for c in iter_ones(self.row(r)) {
                t.set(c as usize, r);
            }
        }
        t
    }
}

pub(crate) fn words_for(bits: usize) -> usize {
    bits.div_ceil(64)
}

/// A row of all ones over `bits` columns, with the unused tail cleared.
pub(crate) fn full_row(bits: usize) -> Vec<u64> {
    let mut v = vec![u64::MAX; words_for(bits)];
    mask_tail(&mut v, bits);
    v
}

/// Clear any bits at positions >= `bits` in the final word.
pub(crate) fn mask_tail(words: &mut [u64], bits: usize) {
    let rem = bits & 63;
    if rem != 0 {
        if let Some(last) = words.last_mut() {
            *last &= (1u64 << rem) - 1;
        }
    }
}

pub(crate) fn count_ones(words: &[u64]) -> u32 {
    words.iter().map(|w| w.count_ones()).sum()
}

pub(crate) fn or_into(acc: &mut [u64], row: &[u64]) {
    for (a, r) in acc.iter_mut().zip(row) {
        *a |= r;
    }
}

/// acc &= !row
pub(crate) fn and_not_into(acc: &mut [u64], row: &[u64]) {
    for (a, r) in acc.iter_mut().zip(row) {
        *a &= !r;
    }
}

pub(crate) fn intersection_count(a: &[u64], b: &[u64]) -> u32 {
    a.iter().zip(b).map(|(x, y)| (x & y).count_ones()).sum()
}

/// Indices of set bits, ascending.
pub(crate) fn iter_ones(words: &[u64]) -> impl Iterator<Item = u32> + '_ {
    words.iter().enumerate().flat_map(|(i, &w)| {
        let base = (i as u32) << 6;
        std::iter::successors((w != 0).then_some(w), |&m| {
            let next = m & (m - 1);
            (next != 0).then_some(next)
        })
        .map(move |m| base + m.trailing_zeros())
    })
}
