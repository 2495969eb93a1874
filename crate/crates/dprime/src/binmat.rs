//! Dense and sparse binary matrices over F2.
//!
//! Dense rows are bit-packed into `u64` words for fast XOR/rank work;
//! the sparse form keeps sorted column lists per row, which is what the
//! belief-propagation decoder and the lifting code want.

/// A single bit-packed row vector over F2.
#[derive(Clone, PartialEq, Eq)]
pub struct BitVec {
    len: usize,
    words: Vec<u64>,
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        BitVec {
            len,
            words: vec![0; len.div_ceil(64)],
        }
    }

    pub fn from_indices(len: usize, ones: &[usize]) -> Self {
        let mut v = BitVec::zeros(len);
        for &i in ones {
            v.set(i, true);
        }
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        (self.words[i / 64] >> (i % 64)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, b: bool) {
        debug_assert!(i < self.len);
        let w = &mut self.words[i / 64];
        if b {
            *w |= 1u64 << (i % 64);
        } else {
            *w &= !(1u64 << (i % 64));
        }
    }

    #[inline]
    pub fn xor_assign(&mut self, other: &BitVec) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= *b;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Lowest set bit index, if any.
    pub fn first_one(&self) -> Option<usize> {
        for (wi, &w) in self.words.iter().enumerate() {
            if w != 0 {
                return Some(wi * 64 + w.trailing_zeros() as usize);
            }
        }
        None
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let b = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(wi * 64 + b)
                }
            })
        })
    }

    /// Parity of the F2 dot product with `other`.
    pub fn dot(&self, other: &BitVec) -> bool {
        debug_assert_eq!(self.len, other.len);
        let mut acc = 0u64;
        for (a, b) in self.words.iter().zip(&other.words) {
            acc ^= a & b;
        }
        acc.count_ones() % 2 == 1
    }
}

impl std::fmt::Debug for BitVec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for i in 0..self.len {
            write!(f, "{}", self.get(i) as u8)?;
        }
        Ok(())
    }
}

/// A dense binary matrix stored as bit-packed rows.
#[derive(Clone, PartialEq, Eq)]
pub struct BinMatrix {
    rows: Vec<BitVec>,
    cols: usize,
}

impl BinMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        BinMatrix {
            rows: vec![BitVec::zeros(cols); rows],
            cols,
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = BinMatrix::zeros(n, n);
        for i in 0..n {
            m.rows[i].set(i, true);
        }
        m
    }

    pub fn from_rows(rows: Vec<BitVec>, cols: usize) -> Self {
        debug_assert!(rows.iter().all(|r| r.len() == cols));
        BinMatrix { rows, cols }
    }

    /// Builds a matrix from 0/1 entries given row-major.
    pub fn from_dense(entries: &[&[u8]]) -> Self {
        let cols = entries.first().map_or(0, |r| r.len());
        let rows = entries
            .iter()
            .map(|r| {
                let ones: Vec<usize> = r
                    .iter()
                    .enumerate()
                    .filter(|(_, &e)| e != 0)
                    .map(|(i, _)| i)
                    .collect();
                BitVec::from_indices(cols, &ones)
            })
            .collect();
        BinMatrix { rows, cols }
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &BitVec {
        &self.rows[i]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut BitVec {
        &mut self.rows[i]
    }

    pub fn push_row(&mut self, r: BitVec) {
        debug_assert_eq!(r.len(), self.cols);
        self.rows.push(r);
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.rows[i].get(j)
    }

    pub fn set(&mut self, i: usize, j: usize, b: bool) {
        self.rows[i].set(j, b);
    }

    pub fn rows_iter(&self) -> impl Iterator<Item = &BitVec> {
        self.rows.iter()
    }

    /// y = M x over F2.
    pub fn mul_vec(&self, x: &BitVec) -> BitVec {
        debug_assert_eq!(x.len(), self.cols);
        let mut y = BitVec::zeros(self.nrows());
        for (i, r) in self.rows.iter().enumerate() {
            y.set(i, r.dot(x));
        }
        y
    }

    /// Rank over F2. Does not disturb `self`.
    pub fn rank(&self) -> usize {
        let mut work: Vec<BitVec> = self.rows.clone();
        let mut rank = 0;
        let mut pivot_rows: Vec<usize> = Vec::new();
        let mut pivot_cols: Vec<usize> = Vec::new();
        for r in 0..work.len() {
            for (&pr, &pc) in pivot_rows.iter().zip(&pivot_cols) {
                if work[r].get(pc) {
                    let (a, b) = split_two(&mut work, r, pr);
                    a.xor_assign(b);
                }
            }
            if let Some(c) = work[r].first_one() {
                pivot_rows.push(r);
                pivot_cols.push(c);
                rank += 1;
            }
        }
        rank
    }

    /// Row-space membership test helper: a reduced basis of the row space.
    pub fn row_basis(&self) -> RowBasis {
        let mut basis = RowBasis::new(self.cols);
        for r in &self.rows {
            basis.insert(r.clone());
        }
        basis
    }
}

impl std::fmt::Debug for BinMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for r in &self.rows {
            writeln!(f, "{:?}", r)?;
        }
        Ok(())
    }
}

fn split_two<'a, T>(v: &'a mut [T], a: usize, b: usize) -> (&'a mut T, &'a T) {
    debug_assert_ne!(a, b);
    if a < b {
        let (lo, hi) = v.split_at_mut(b);
        (&mut lo[a], &hi[0])
    } else {
        let (lo, hi) = v.split_at_mut(a);
        (&mut hi[0], &lo[b])
    }
}

/// Incrementally built echelon basis of a row space over F2.
pub struct RowBasis {
    cols: usize,
    /// (pivot column, reduced row) pairs; rows reduced against earlier pivots.
    rows: Vec<(usize, BitVec)>,
}

impl RowBasis {
    pub fn new(cols: usize) -> Self {
        RowBasis {
            cols,
            rows: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `v` against the basis; returns the remainder.
    pub fn reduce(&self, mut v: BitVec) -> BitVec {
        for (pc, row) in &self.rows {
            if v.get(*pc) {
                v.xor_assign(row);
            }
        }
        v
    }

    /// Inserts `v`; returns true if it increased the rank.
    pub fn insert(&mut self, v: BitVec) -> bool {
        let r = self.reduce(v);
        if let Some(pc) = r.first_one() {
            self.rows.push((pc, r));
            true
        } else {
            false
        }
    }

    /// True iff `v` lies in the span of the inserted rows.
    pub fn contains(&self, v: &BitVec) -> bool {
        self.reduce(v.clone()).is_zero()
    }

    pub fn cols(&self) -> usize {
        self.cols
    }
}

/// Sparse binary matrix: sorted column indices per row.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseBin {
    pub ncols: usize,
    pub rows: Vec<Vec<usize>>,
}

impl SparseBin {
    pub fn new(ncols: usize) -> Self {
        SparseBin {
            ncols,
            rows: Vec::new(),
        }
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(|r| r.len()).sum()
    }

    pub fn push_row(&mut self, mut cols: Vec<usize>) {
        cols.sort_unstable();
        cols.dedup();
        debug_assert!(cols.iter().all(|&c| c < self.ncols));
        self.rows.push(cols);
    }

    pub fn to_dense(&self) -> BinMatrix {
        let mut m = BinMatrix::zeros(self.nrows(), self.ncols);
        for (i, r) in self.rows.iter().enumerate() {
            for &c in r {
                m.set(i, c, true);
            }
        }
        m
    }

    pub fn from_dense(m: &BinMatrix) -> Self {
        SparseBin {
            ncols: m.ncols(),
            rows: m.rows_iter().map(|r| r.ones().collect()).collect(),
        }
    }

    /// Syndrome of a bit vector: (self ⊙ x) over F2.
    pub fn syndrome(&self, x: &BitVec) -> BitVec {
        let mut s = BitVec::zeros(self.nrows());
        for (i, row) in self.rows.iter().enumerate() {
            let mut p = false;
            for &c in row {
                p ^= x.get(c);
            }
            s.set(i, p);
        }
        s
    }

    /// Column degree census: `result[d]` = number of columns of degree d.
    pub fn col_degree_census(&self) -> Vec<usize> {
        let mut deg = vec![0usize; self.ncols];
        for r in &self.rows {
            for &c in r {
                deg[c] += 1;
            }
        }
        let max = deg.iter().copied().max().unwrap_or(0);
        let mut census = vec![0usize; max + 1];
        for d in deg {
            census[d] += 1;
        }
        census
    }
}
