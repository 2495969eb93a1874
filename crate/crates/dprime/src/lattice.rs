//! Construction D' lattices from nested binary codes.
//!
//! A lattice is described by a unimodular binary matrix `H̃` whose row
//! suffixes are the parity-check matrices of the nested codes, together
//! with the diagonal scaling `D` of powers of two. The lattice check
//! matrix is `H = D · H̃` and the generator is its exact inverse.
//! All arithmetic on `H` stays exact: entries are dyadic rationals
//! `h̃ / 2^e` represented by the binary row plus a per-row exponent.

use crate::binmat::{BinMatrix, BitVec, RowBasis, SparseBin};
use crate::exact::bareiss_det;
use num_bigint::{BigInt, BigUint};
use num_traits::One;

/// Errors from lattice construction and membership queries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LatticeError {
    /// `det(H̃)` is not ±1.
    NotUnimodular,
    /// Some level's parity-check rows do not have full rank over F2.
    RankDeficient { level: usize },
    /// Input vector length does not match the lattice dimension.
    DimensionMismatch { expected: usize, got: usize },
    /// Noise variance must be positive.
    NonPositiveNoise,
    /// Structural problem in the nested-code description.
    BadFamily(String),
}

impl std::fmt::Display for LatticeError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            LatticeError::NotUnimodular => write!(f, "check matrix is not unimodular"),
            LatticeError::RankDeficient { level } => {
                write!(f, "parity-check rows of level {} are rank deficient", level)
            }
            LatticeError::DimensionMismatch { expected, got } => {
                write!(f, "dimension mismatch: expected {}, got {}", expected, got)
            }
            LatticeError::NonPositiveNoise => write!(f, "noise variance must be positive"),
            LatticeError::BadFamily(s) => write!(f, "invalid nested code family: {}", s),
        }
    }
}

impl std::error::Error for LatticeError {}

/// A triangular form of `H̃` under row and column permutations.
///
/// Position `p` of the permuted matrix holds row `row_order[p]` and column
/// `col_order[p]`. The first `n - gap` positions form a lower-triangular
/// block with unit diagonal; the last `gap` rows are the dense gap of the
/// approximate-lower-triangular form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TriangularForm {
    pub row_order: Vec<usize>,
    pub col_order: Vec<usize>,
    pub gap: usize,
}

/// Designer metadata carried along with a code family.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FamilyMeta {
    /// Block-row index sets used to derive the level-1 code (1-based).
    pub a1: Vec<usize>,
    pub a2: Vec<usize>,
    /// Seed of the randomized design search that produced the family.
    pub seed: Option<u64>,
}

/// Nested binary codes C_0 ⊆ C_1 ⊆ … ⊆ C_{a-1} ⊆ F2^n described by one
/// n×n binary matrix whose row suffixes are the per-level parity checks.
#[derive(Clone)]
pub struct NestedCodeFamily {
    n: usize,
    a: usize,
    k: Vec<usize>,
    htilde: SparseBin,
    tri: Option<TriangularForm>,
    meta: FamilyMeta,
}

impl NestedCodeFamily {
    /// `htilde` holds the n rows as sorted 0-based column lists; rows
    /// `k[i]..n` are the parity-check matrix of level `i`.
    pub fn new(
        n: usize,
        k: Vec<usize>,
        htilde: SparseBin,
    ) -> Result<NestedCodeFamily, LatticeError> {
        if n == 0 {
            return Err(LatticeError::BadFamily("dimension must be positive".into()));
        }
        if k.is_empty() {
            return Err(LatticeError::BadFamily("at least one level required".into()));
        }
        if htilde.nrows() != n || htilde.ncols != n {
            return Err(LatticeError::BadFamily(format!(
                "H̃ must be {n}x{n}, got {}x{}",
                htilde.nrows(),
                htilde.ncols
            )));
        }
        if k.windows(2).any(|w| w[0] > w[1]) || *k.last().unwrap() > n {
            return Err(LatticeError::BadFamily(
                "code dimensions must satisfy k_0 ≤ … ≤ k_{a-1} ≤ n".into(),
            ));
        }
        if htilde.rows.iter().any(|r| r.iter().any(|&c| c >= n)) {
            return Err(LatticeError::BadFamily("column index out of range".into()));
        }
        Ok(NestedCodeFamily {
            n,
            a: k.len(),
            k,
            htilde,
            tri: None,
            meta: FamilyMeta::default(),
        })
    }

    pub fn with_triangular_form(mut self, tri: TriangularForm) -> Self {
        self.tri = Some(tri);
        self
    }

    pub fn with_meta(mut self, meta: FamilyMeta) -> Self {
        self.meta = meta;
        self
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of levels `a`.
    pub fn levels(&self) -> usize {
        self.a
    }

    pub fn dims(&self) -> &[usize] {
        &self.k
    }

    pub fn htilde(&self) -> &SparseBin {
        &self.htilde
    }

    pub fn triangular_form(&self) -> Option<&TriangularForm> {
        self.tri.as_ref()
    }

    pub fn meta(&self) -> &FamilyMeta {
        &self.meta
    }

    /// Parity-check matrix of level `i` (rows `k_i..n` of `H̃`).
    pub fn level_check(&self, i: usize) -> SparseBin {
        assert!(i < self.a);
        SparseBin {
            ncols: self.n,
            rows: self.htilde.rows[self.k[i]..].to_vec(),
        }
    }

    /// Row scaling exponents: row `j` of `H` equals row `j` of `H̃`
    /// divided by `2^{exp[j]}`.
    pub fn row_exponents(&self) -> Vec<u32> {
        let mut exp = vec![0u32; self.n];
        for (j, e) in exp.iter_mut().enumerate() {
            // j in [k_{i-1}, k_i) gets exponent i, with k_{-1} = 0, k_a = n.
            let mut lvl = 0u32;
            for (i, &ki) in self.k.iter().enumerate() {
                if j >= ki {
                    lvl = i as u32 + 1;
                }
            }
            *e = lvl;
        }
        exp
    }
}

/// A Construction D' lattice with exact check and generator data.
#[derive(Clone)]
pub struct LatticeSystem {
    codes: NestedCodeFamily,
    row_exp: Vec<u32>,
    tri: TriangularForm,
}

impl LatticeSystem {
    pub fn codes(&self) -> &NestedCodeFamily {
        &self.codes
    }

    pub fn n(&self) -> usize {
        self.codes.n
    }

    pub fn levels(&self) -> usize {
        self.codes.a
    }

    pub fn dims(&self) -> &[usize] {
        &self.codes.k
    }

    /// Per-row power-of-two exponents of `D^{-1}`.
    pub fn row_exp(&self) -> &[u32] {
        &self.row_exp
    }

    pub fn htilde(&self) -> &SparseBin {
        &self.codes.htilde
    }

    pub fn triangular_form(&self) -> &TriangularForm {
        &self.tri
    }

    /// `H̃ · x` over the integers.
    pub fn htilde_apply(&self, x: &[i64]) -> Vec<i64> {
        self.codes
            .htilde
            .rows
            .iter()
            .map(|row| {
                let mut acc: i128 = 0;
                for &c in row {
                    acc += x[c] as i128;
                }
                acc as i64
            })
            .collect()
    }

    /// `H · x` when it is an integer vector, else `None`.
    pub fn check_apply(&self, x: &[i64]) -> Option<Vec<i64>> {
        let w = self.htilde_apply(x);
        let mut b = vec![0i64; self.n()];
        for (j, (&wj, &e)) in w.iter().zip(&self.row_exp).enumerate() {
            let m = 1i64 << e;
            if wj.rem_euclid(m) != 0 {
                return None;
            }
            b[j] = wj / m;
        }
        Some(b)
    }
}

/// An integer vector known to lie on a Construction D' lattice.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticePoint {
    pub coords: Vec<i64>,
}

impl LatticePoint {
    pub fn new(coords: Vec<i64>) -> Self {
        LatticePoint { coords }
    }
}

/// Builds the lattice from nested codes, verifying rank and unimodularity.
pub fn build_lattice(codes: NestedCodeFamily) -> Result<LatticeSystem, LatticeError> {
    let n = codes.n;
    let dense = codes.htilde.to_dense();
    // Ranks of all row suffixes in one bottom-up elimination pass.
    let mut basis = RowBasis::new(n);
    let mut suffix_rank = vec![0usize; n + 1];
    for j in (0..n).rev() {
        basis.insert(dense.row(j).clone());
        suffix_rank[j] = basis.rank();
    }
    for (i, &ki) in codes.k.iter().enumerate() {
        let have = if ki < n { suffix_rank[ki] } else { 0 };
        if have != n - ki {
            return Err(LatticeError::RankDeficient { level: i });
        }
    }
    if suffix_rank[0] != n {
        // Determinant is even, hence not ±1.
        return Err(LatticeError::NotUnimodular);
    }
    let tri = match &codes.tri {
        Some(t) => {
            validate_triangular_form(&codes.htilde, t)?;
            t.clone()
        }
        None => match greedy_triangular_form(&codes.htilde) {
            Some(t) => t,
            None => {
                // Exact fallback; fine for small systems, designed
                // families always carry a triangular form.
                let m: Vec<Vec<BigInt>> = (0..n)
                    .map(|i| {
                        (0..n)
                            .map(|j| BigInt::from(dense.get(i, j) as u8))
                            .collect()
                    })
                    .collect();
                let d = bareiss_det(&m);
                if d != BigInt::one() && d != -BigInt::one() {
                    return Err(LatticeError::NotUnimodular);
                }
                full_gap_form(n)
            }
        },
    };
    let row_exp = codes.row_exponents();
    Ok(LatticeSystem {
        codes,
        row_exp,
        tri,
    })
}

/// Treats the whole matrix as gap: valid ALT data for any invertible H.
fn full_gap_form(n: usize) -> TriangularForm {
    TriangularForm {
        row_order: (0..n).collect(),
        col_order: (0..n).collect(),
        gap: n,
    }
}

/// Checks that the permutations describe a genuine unit-lower-triangular
/// block over the integers, and that the gap Schur complement has
/// determinant ±1 (which makes the whole matrix unimodular).
pub fn validate_triangular_form(
    htilde: &SparseBin,
    tri: &TriangularForm,
) -> Result<(), LatticeError> {
    let n = htilde.nrows();
    let bad = |m: &str| Err(LatticeError::BadFamily(m.into()));
    if tri.row_order.len() != n || tri.col_order.len() != n || tri.gap > n {
        return bad("triangular form has wrong shape");
    }
    let mut col_pos = vec![usize::MAX; n];
    for (p, &c) in tri.col_order.iter().enumerate() {
        if c >= n || col_pos[c] != usize::MAX {
            return bad("column order is not a permutation");
        }
        col_pos[c] = p;
    }
    let mut seen_row = vec![false; n];
    for &r in &tri.row_order {
        if r >= n || seen_row[r] {
            return bad("row order is not a permutation");
        }
        seen_row[r] = true;
    }
    let s = n - tri.gap;
    let g = tri.gap;
    for p in 0..s {
        let r = tri.row_order[p];
        let diag_pos = g + p;
        let mut has_diag = false;
        for &c in &htilde.rows[r] {
            let cp = col_pos[c];
            if cp == diag_pos {
                has_diag = true;
            } else if cp > diag_pos {
                return bad("entry above the triangular diagonal");
            }
        }
        if !has_diag {
            return bad("zero on the triangular diagonal");
        }
    }
    if g > 0 {
        let m = gap_schur_complement(htilde, tri);
        let mb: Vec<Vec<BigInt>> = m
            .iter()
            .map(|r| r.iter().map(|&e| BigInt::from(e)).collect())
            .collect();
        let d = bareiss_det(&mb);
        if d != BigInt::one() && d != -BigInt::one() {
            return Err(LatticeError::NotUnimodular);
        }
    }
    Ok(())
}

/// Schur complement of the triangular block: `X - C T^{-1} B` of the
/// permuted matrix `[B T; X C]`, an integer `gap × gap` matrix.
pub fn gap_schur_complement(htilde: &SparseBin, tri: &TriangularForm) -> Vec<Vec<i64>> {
    let n = htilde.nrows();
    let g = tri.gap;
    let s = n - g;
    let mut col_pos = vec![0usize; n];
    for (p, &c) in tri.col_order.iter().enumerate() {
        col_pos[c] = p;
    }
    // Y = T^{-1} B built by forward substitution, one gap column at a time.
    // Row p of [B | T] is htilde row row_order[p] split at position g.
    let mut y = vec![vec![0i64; g]; s];
    for p in 0..s {
        let r = tri.row_order[p];
        let mut acc = vec![0i64; g];
        for &c in &htilde.rows[r] {
            let cp = col_pos[c];
            if cp < g {
                // B entry.
                acc[cp] += 1;
            } else if cp < g + p {
                // Strictly-below-diagonal T entry multiplies solved rows.
                let yp = &y[cp - g];
                for (dst, &v) in acc.iter_mut().zip(yp) {
                    *dst -= v;
                }
            }
        }
        // Unit diagonal, so Y[p] = B[p] − Σ_{l<p} T[p,l] Y[l] directly.
        y[p] = acc;
    }
    let mut m = vec![vec![0i64; g]; g];
    for gp in 0..g {
        let r = tri.row_order[s + gp];
        let row = &mut m[gp];
        for &c in &htilde.rows[r] {
            let cp = col_pos[c];
            if cp < g {
                row[cp] += 1;
            } else {
                let yp = &y[cp - g];
                for (dst, &v) in row.iter_mut().zip(yp) {
                    *dst -= v;
                }
            }
        }
    }
    m
}

/// Tries to find a pure triangular permutation (gap 0) by peeling rows
/// whose support within the unassigned columns is a single column.
pub fn greedy_triangular_form(htilde: &SparseBin) -> Option<TriangularForm> {
    let n = htilde.nrows();
    let mut col_used = vec![false; n];
    let mut row_used = vec![false; n];
    let mut active_weight: Vec<usize> = htilde.rows.iter().map(|r| r.len()).collect();
    // Queue of candidate rows with active weight 1.
    let mut row_order = Vec::with_capacity(n);
    let mut col_order = Vec::with_capacity(n);
    let mut cols_to_rows: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (r, row) in htilde.rows.iter().enumerate() {
        for &c in row {
            cols_to_rows[c].push(r);
        }
    }
    let mut stack: Vec<usize> = (0..n).filter(|&r| active_weight[r] == 1).collect();
    while let Some(r) = stack.pop() {
        if row_used[r] || active_weight[r] != 1 {
            continue;
        }
        let c = *htilde.rows[r].iter().find(|&&c| !col_used[c])?;
        row_used[r] = true;
        col_used[c] = true;
        row_order.push(r);
        col_order.push(c);
        for &r2 in &cols_to_rows[c] {
            if !row_used[r2] {
                active_weight[r2] -= 1;
                if active_weight[r2] == 1 {
                    stack.push(r2);
                }
            }
        }
    }
    if row_order.len() != n {
        return None;
    }
    // Peeling found the diagonal top-down.
    Some(TriangularForm {
        row_order,
        col_order,
        gap: 0,
    })
}

/// Definition by congruences: `h_j · x ≡ 0 (mod 2^{i+1})` for every level
/// `i` and every parity row `j > k_i` of that level.
pub fn member_by_congruence(codes: &NestedCodeFamily, x: &[i64]) -> Result<bool, LatticeError> {
    if x.len() != codes.n {
        return Err(LatticeError::DimensionMismatch {
            expected: codes.n,
            got: x.len(),
        });
    }
    for (i, &ki) in codes.k.iter().enumerate() {
        let modulus = 1i128 << (i + 1);
        for row in &codes.htilde.rows[ki..] {
            let mut acc: i128 = 0;
            for &c in row {
                acc += x[c] as i128;
            }
            if acc.rem_euclid(modulus) != 0 {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Definition by check matrix: every entry of `H · x` is an integer.
pub fn member_by_check_matrix(sys: &LatticeSystem, x: &[i64]) -> Result<bool, LatticeError> {
    if x.len() != sys.n() {
        return Err(LatticeError::DimensionMismatch {
            expected: sys.n(),
            got: x.len(),
        });
    }
    Ok(sys.check_apply(x).is_some())
}

/// Exact lattice volume, a power of two: `2^{a·n − Σ k_i}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Volume {
    pub log2: u64,
}

impl Volume {
    pub fn as_biguint(&self) -> BigUint {
        BigUint::one() << self.log2
    }

    /// May overflow to infinity for very large lattices.
    pub fn approx_f64(&self) -> f64 {
        2f64.powf(self.log2 as f64)
    }
}

pub fn lattice_volume(sys: &LatticeSystem) -> Volume {
    let n = sys.n() as u64;
    let a = sys.levels() as u64;
    let ksum: u64 = sys.dims().iter().map(|&k| k as u64).sum();
    Volume {
        log2: a * n - ksum,
    }
}

/// Volume-to-noise ratio `V^{2/n} / (2πe σ²)`.
pub fn vnr(sys: &LatticeSystem, sigma2: f64) -> Result<f64, LatticeError> {
    if !(sigma2 > 0.0) {
        return Err(LatticeError::NonPositiveNoise);
    }
    let v = lattice_volume(sys);
    let n = sys.n() as f64;
    let v_pow = 2f64.powf(2.0 * v.log2 as f64 / n);
    Ok(v_pow / (2.0 * std::f64::consts::PI * std::f64::consts::E * sigma2))
}

/// The 4-dimensional worked example used throughout the tests: two levels
/// with k = (1, 3).
pub fn toy_family() -> NestedCodeFamily {
    let mut h = SparseBin::new(4);
    h.push_row(vec![0]);
    h.push_row(vec![0, 1]);
    h.push_row(vec![1, 2]);
    h.push_row(vec![0, 1, 2, 3]);
    NestedCodeFamily::new(4, vec![1, 3], h).unwrap()
}

/// Z^n as a one-level family (identity check matrix).
pub fn identity_family(n: usize) -> NestedCodeFamily {
    let mut h = SparseBin::new(n);
    for i in 0..n {
        h.push_row(vec![i]);
    }
    NestedCodeFamily::new(n, vec![n], h).unwrap()
}

// ---------------------------------------------------------------------------
// Sparse text format
// ---------------------------------------------------------------------------

/// Errors from reading the sparse text format.
#[derive(Debug)]
pub struct FormatError {
    pub line: usize,
    pub message: String,
}

impl std::fmt::Display for FormatError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "line {}: {}", self.line, self.message)
    }
}

impl std::error::Error for FormatError {}

/// Writes the family in the sparse text format: a header `n a k_0 … k_{a-1}`
/// followed by one line per row listing 1-positions (1-indexed, ascending),
/// then optional `#meta` lines.
pub fn write_family(codes: &NestedCodeFamily) -> String {
    let mut out = String::new();
    out.push_str(&format!("{} {}", codes.n, codes.a));
    for &k in &codes.k {
        out.push_str(&format!(" {}", k));
    }
    out.push('\n');
    for row in &codes.htilde.rows {
        let mut first = true;
        for &c in row {
            if !first {
                out.push(' ');
            }
            out.push_str(&(c + 1).to_string());
            first = false;
        }
        out.push('\n');
    }
    if let Some(tri) = &codes.tri {
        out.push_str(&format!("#meta gap={}\n", tri.gap));
        out.push_str(&format!("#meta roworder={}\n", join_usize(&tri.row_order)));
        out.push_str(&format!("#meta colorder={}\n", join_usize(&tri.col_order)));
    }
    if !codes.meta.a1.is_empty() {
        out.push_str(&format!("#meta a1={}\n", join_usize(&codes.meta.a1)));
        out.push_str(&format!("#meta a2={}\n", join_usize(&codes.meta.a2)));
    }
    if let Some(seed) = codes.meta.seed {
        out.push_str(&format!("#meta seed={}\n", seed));
    }
    out
}

fn join_usize(v: &[usize]) -> String {
    v.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

fn parse_usize_list(s: &str) -> Option<Vec<usize>> {
    if s.is_empty() {
        return Some(Vec::new());
    }
    s.split(',').map(|t| t.trim().parse().ok()).collect()
}

/// Parses the sparse text format written by [`write_family`].
pub fn read_family(text: &str) -> Result<NestedCodeFamily, FormatError> {
    let err = |line: usize, m: &str| FormatError {
        line,
        message: m.to_string(),
    };
    let mut lines = text.lines().enumerate();
    let (hline, header) = lines
        .next()
        .ok_or_else(|| err(0, "empty input"))?;
    let nums: Vec<usize> = header
        .split_whitespace()
        .map(|t| t.parse().map_err(|_| err(hline + 1, "bad header integer")))
        .collect::<Result<_, _>>()?;
    if nums.len() < 3 {
        return Err(err(hline + 1, "header needs n, a and the k_i"));
    }
    let (n, a) = (nums[0], nums[1]);
    if nums.len() != 2 + a {
        return Err(err(hline + 1, "header k count does not match a"));
    }
    let k = nums[2..].to_vec();
    let mut h = SparseBin::new(n);
    let mut gap = None;
    let mut roworder = None;
    let mut colorder = None;
    let mut meta = FamilyMeta::default();
    for (ln, raw) in lines {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("#meta") {
            let rest = rest.trim();
            let (key, val) = rest
                .split_once('=')
                .ok_or_else(|| err(ln + 1, "meta line needs key=value"))?;
            match key.trim() {
                "gap" => {
                    gap = Some(val.trim().parse().map_err(|_| err(ln + 1, "bad gap"))?)
                }
                "roworder" => {
                    roworder = Some(
                        parse_usize_list(val.trim()).ok_or_else(|| err(ln + 1, "bad roworder"))?,
                    )
                }
                "colorder" => {
                    colorder = Some(
                        parse_usize_list(val.trim()).ok_or_else(|| err(ln + 1, "bad colorder"))?,
                    )
                }
                "a1" => {
                    meta.a1 =
                        parse_usize_list(val.trim()).ok_or_else(|| err(ln + 1, "bad a1"))?
                }
                "a2" => {
                    meta.a2 =
                        parse_usize_list(val.trim()).ok_or_else(|| err(ln + 1, "bad a2"))?
                }
                "seed" => {
                    meta.seed =
                        Some(val.trim().parse().map_err(|_| err(ln + 1, "bad seed"))?)
                }
                other => return Err(err(ln + 1, &format!("unknown meta key '{}'", other))),
            }
            continue;
        }
        if line.starts_with('#') {
            continue;
        }
        let cols: Vec<usize> = line
            .split_whitespace()
            .map(|t| {
                let v: usize = t
                    .parse()
                    .map_err(|_| err(ln + 1, "bad column index"))?;
                if v == 0 || v > n {
                    return Err(err(ln + 1, "column index out of range"));
                }
                Ok(v - 1)
            })
            .collect::<Result<_, _>>()?;
        h.push_row(cols);
    }
    if h.nrows() != n {
        return Err(err(0, &format!("expected {} rows, found {}", n, h.nrows())));
    }
    let mut fam = NestedCodeFamily::new(n, k, h)
        .map_err(|e| err(0, &e.to_string()))?
        .with_meta(meta);
    if let (Some(gap), Some(row_order), Some(col_order)) = (gap, roworder, colorder) {
        fam = fam.with_triangular_form(TriangularForm {
            row_order,
            col_order,
            gap,
        });
    }
    Ok(fam)
}

/// Dense 0/1 matrix of the family's `H̃` (for rank work and tests).
pub fn htilde_dense(codes: &NestedCodeFamily) -> BinMatrix {
    codes.htilde.to_dense()
}

/// F2 syndrome of `x mod 2` against level `i`'s parity check.
pub fn level_syndrome_zero(sys: &LatticeSystem, i: usize, x: &[i64]) -> bool {
    let check = sys.codes().level_check(i);
    let bits = BitVec::from_indices(
        sys.n(),
        &x.iter()
            .enumerate()
            .filter(|(_, &v)| v.rem_euclid(2) == 1)
            .map(|(j, _)| j)
            .collect::<Vec<_>>(),
    );
    check.syndrome(&bits).is_zero()
}
