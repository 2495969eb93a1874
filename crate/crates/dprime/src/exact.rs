//! Exact integer linear algebra: fraction-free determinants, rational
//! inversion, and Hermite normal form of integer lattices.
//!
//! Everything here is exact; floating point never enters. The HNF routine
//! works modulo a known lattice exponent `q` so that entry growth stays
//! bounded even for large dimensions.

use num_bigint::BigInt;
use num_rational::Ratio;
use num_traits::{One, Zero};

/// Exact determinant of a square integer matrix by Bareiss elimination.
pub fn bareiss_det(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    debug_assert!(m.iter().all(|r| r.len() == n));
    let mut a: Vec<Vec<BigInt>> = m.to_vec();
    let mut sign = 1i32;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = num / &prev;
            }
            a[i][k] = BigInt::zero();
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if sign < 0 {
        -d
    } else {
        d
    }
}

/// Exact inverse of a square integer matrix, as rationals.
/// Returns `None` when singular.
pub fn rational_inverse(m: &[Vec<BigInt>]) -> Option<Vec<Vec<Ratio<BigInt>>>> {
    let n = m.len();
    let mut a: Vec<Vec<Ratio<BigInt>>> = m
        .iter()
        .map(|r| r.iter().map(|e| Ratio::from_integer(e.clone())).collect())
        .collect();
    let mut inv: Vec<Vec<Ratio<BigInt>>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        Ratio::one()
                    } else {
                        Ratio::zero()
                    }
                })
                .collect()
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        inv.swap(col, pivot);
        let p = a[col][col].clone();
        for j in 0..n {
            a[col][j] /= &p;
            inv[col][j] /= &p;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for j in 0..n {
                    let t = &a[col][j] * &f;
                    a[r][j] -= t;
                    let t = &inv[col][j] * &f;
                    inv[r][j] -= t;
                }
            }
        }
    }
    Some(inv)
}

/// Extended gcd: returns (g, x, y) with a*x + b*y = g, g >= 0.
pub fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        if a < 0 {
            (-a, -1, 0)
        } else {
            (a, 1, 0)
        }
    } else {
        let (g, x, y) = ext_gcd(b, a.rem_euclid(b));
        (g, y, x - (a.div_euclid(b)) * y)
    }
}

/// Lower-triangular column Hermite normal form of the integer lattice
/// spanned by the columns of `gen_cols` together with `q * I`.
///
/// Requires `q * Z^n` to be a sublattice of the span (all arithmetic is
/// done on residues in `[0, q)`). Column `j` of the result has zeros
/// above row `j`, positive diagonal `M_j` dividing `q`, and entries below
/// the diagonal reduced modulo the diagonal of their row.
pub struct LowerHnf {
    pub n: usize,
    /// Column-major basis; `cols[j][i]` is row `i` of basis column `j`.
    pub cols: Vec<Vec<u64>>,
    /// Diagonal entries `M_j = cols[j][j]`.
    pub diag: Vec<u64>,
}

impl LowerHnf {
    /// Reduces an integer vector to its canonical coset representative,
    /// returning the per-row digits `b` with `0 <= b[i] < diag[i]`.
    pub fn reduce_digits(&self, v: &[i64]) -> Vec<u64> {
        debug_assert_eq!(v.len(), self.n);
        let mut w: Vec<i128> = v.iter().map(|&e| e as i128).collect();
        let mut b = vec![0u64; self.n];
        for i in 0..self.n {
            let m = self.diag[i] as i128;
            let r = w[i].rem_euclid(m);
            let f = (w[i] - r) / m;
            b[i] = r as u64;
            if f != 0 {
                let col = &self.cols[i];
                for row in i..self.n {
                    w[row] -= f * col[row] as i128;
                }
            }
        }
        b
    }
}

pub fn hnf_mod_q(gen_cols: &[Vec<i64>], q: u64) -> LowerHnf {
    let n = gen_cols.first().map_or(0, |c| c.len());
    assert!(q > 0 && q < u32::MAX as u64);
    assert!(gen_cols.iter().all(|c| c.len() == n));
    let mut cols: Vec<Vec<u64>> = gen_cols
        .iter()
        .map(|c| c.iter().map(|&e| e.rem_euclid(q as i64) as u64).collect())
        .collect();
    cols.retain(|c| c.iter().any(|&e| e != 0));
    let mut basis: Vec<Vec<u64>> = Vec::with_capacity(n);
    let mut diag: Vec<u64> = Vec::with_capacity(n);
    for row in 0..n {
        // Repeatedly reduce entries at `row` by the smallest one until a
        // single non-zero column remains (gcd by repeated remainder).
        loop {
            let nz: Vec<usize> = cols
                .iter()
                .enumerate()
                .filter(|(_, c)| c[row] != 0)
                .map(|(j, _)| j)
                .collect();
            if nz.len() <= 1 {
                break;
            }
            let jmin = *nz.iter().min_by_key(|&&j| cols[j][row]).unwrap();
            let vmin = cols[jmin][row] as i64;
            for &j in &nz {
                if j == jmin {
                    continue;
                }
                let f = (cols[j][row] as i64) / vmin;
                for i in row..n {
                    let t = cols[j][i] as i64 - f * cols[jmin][i] as i64;
                    cols[j][i] = t.rem_euclid(q as i64) as u64;
                }
            }
        }
        let (m, mut col) = match cols.iter().position(|c| c[row] != 0) {
            Some(j) => {
                let v = cols[j][row];
                // Fold in the implicit q·e_row generator: gcd(v, q) is reachable.
                let (g, x, _) = ext_gcd(v as i64, q as i64);
                let pivot: Vec<u64> = cols[j]
                    .iter()
                    .map(|&e| (x * e as i64).rem_euclid(q as i64) as u64)
                    .collect();
                // Multiplying by x may lose span when gcd(x, q) > 1, so keep
                // the part of the old column that the pivot does not cover.
                let f = (v / g as u64) as i64;
                for i in row..n {
                    let t = cols[j][i] as i64 - f * pivot[i] as i64;
                    cols[j][i] = t.rem_euclid(q as i64) as u64;
                }
                debug_assert_eq!(cols[j][row] % g as u64, 0);
                cols[j][row] = 0;
                (g as u64, pivot)
            }
            None => (q, vec![0u64; n]),
        };
        col[row] = m;
        for (i, &e) in col.iter().enumerate().take(row) {
            debug_assert_eq!(e, 0, "column {} not zero above pivot row {}", i, row);
        }
        basis.push(col);
        diag.push(m);
        cols.retain(|c| c.iter().skip(row + 1).any(|&e| e != 0));
    }
    // Normalize: entry (i, j) for i > j reduced into [0, M_i), walking rows
    // downward so each row is fixed after its own step.
    for j in 0..n {
        for i in j + 1..n {
            let mi = diag[i] as i64;
            let cur = basis[j][i] as i64;
            let e = cur.rem_euclid(mi);
            let f = (cur - e) / mi;
            if f != 0 {
                basis[j][i] = e as u64;
                for r in i + 1..n {
                    let t = basis[j][r] as i64 - f * basis[i][r] as i64;
                    basis[j][r] = t.rem_euclid(q as i64) as u64;
                }
            }
        }
    }
    LowerHnf {
        n,
        cols: basis,
        diag,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::{Euclid, Signed};

    fn big(m: &[&[i64]]) -> Vec<Vec<BigInt>> {
        m.iter()
            .map(|r| r.iter().map(|&e| BigInt::from(e)).collect())
            .collect()
    }

    #[test]
    fn det_small() {
        assert_eq!(bareiss_det(&big(&[&[2, 1], &[1, 1]])), BigInt::from(1));
        assert_eq!(bareiss_det(&big(&[&[1, 2], &[2, 4]])), BigInt::from(0));
        assert_eq!(
            bareiss_det(&big(&[&[0, 1, 0], &[1, 0, 0], &[0, 0, 3]])),
            BigInt::from(-3)
        );
    }

    #[test]
    fn inverse_toy() {
        let m = big(&[&[1, 0], &[1, 2]]);
        let inv = rational_inverse(&m).unwrap();
        assert_eq!(inv[0][0], Ratio::from_integer(BigInt::from(1)));
        assert_eq!(inv[1][0], Ratio::new(BigInt::from(-1), BigInt::from(2)));
        assert!(rational_inverse(&big(&[&[1, 1], &[1, 1]])).is_none());
    }

    #[test]
    fn ext_gcd_identity() {
        for (a, b) in [(12, 18), (-4, 6), (0, 5), (7, 0), (96, 66)] {
            let (g, x, y) = ext_gcd(a, b);
            assert_eq!(a * x + b * y, g);
            assert!(g >= 0);
        }
    }

    /// Naive exact HNF over BigInt used as an oracle for `hnf_mod_q`.
    fn naive_hnf(gen_cols: &[Vec<i64>], q: i64) -> Vec<Vec<BigInt>> {
        let n = gen_cols[0].len();
        let mut cols: Vec<Vec<BigInt>> = gen_cols
            .iter()
            .map(|c| c.iter().map(|&e| BigInt::from(e)).collect())
            .collect();
        for i in 0..n {
            let mut e = vec![BigInt::zero(); n];
            e[i] = BigInt::from(q);
            cols.push(e);
        }
        let mut basis: Vec<Vec<BigInt>> = Vec::new();
        for row in 0..n {
            loop {
                let nz: Vec<usize> = cols
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| !c[row].is_zero())
                    .map(|(j, _)| j)
                    .collect();
                if nz.len() <= 1 {
                    break;
                }
                let ja = *nz
                    .iter()
                    .min_by_key(|&&j| cols[j][row].abs())
                    .unwrap();
                for &jb in &nz {
                    if jb != ja {
                        let f: BigInt = &cols[jb][row] / &cols[ja][row];
                        for r in 0..n {
                            let t = &cols[ja][r] * &f;
                            cols[jb][r] -= t;
                        }
                    }
                }
            }
            let j = cols
                .iter()
                .position(|c| !c[row].is_zero())
                .expect("full rank with qI present");
            let mut col = cols.swap_remove(j);
            if col[row].is_negative() {
                for e in col.iter_mut() {
                    *e = -e.clone();
                }
            }
            basis.push(col);
        }
        for j in 0..n {
            for i in j + 1..n {
                let mi = basis[i][i].clone();
                let f = basis[j][i].div_euclid(&mi);
                if !f.is_zero() {
                    let step = basis[i].clone();
                    for r in 0..n {
                        let t = &step[r] * &f;
                        basis[j][r] -= t;
                    }
                }
            }
        }
        basis
    }

    #[test]
    fn hnf_matches_naive_on_random_lattices() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for case in 0..60 {
            let n = rng.gen_range(1..6);
            let q: u64 = [2u64, 4, 6, 8, 12, 16, 30][rng.gen_range(0..7)];
            let ncols = rng.gen_range(1..n + 3);
            let cols: Vec<Vec<i64>> = (0..ncols)
                .map(|_| (0..n).map(|_| rng.gen_range(-20i64..20)).collect())
                .collect();
            let got = hnf_mod_q(&cols, q);
            let want = naive_hnf(&cols, q as i64);
            for j in 0..n {
                for i in 0..n {
                    assert_eq!(
                        want[j][i],
                        BigInt::from(got.cols[j][i]),
                        "case {}: entry ({}, {}) differs, n={}, q={}",
                        case,
                        i,
                        j,
                        n,
                        q
                    );
                }
            }
        }
    }

    #[test]
    fn hnf_reduce_digits_roundtrip() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let cols = vec![vec![2, 1, 0], vec![0, 3, 1], vec![0, 0, 1]];
        let q = 12u64;
        let hnf = hnf_mod_q(&cols, q);
        // Digits of a lattice point are all zero.
        for _ in 0..50 {
            let coef: Vec<i64> = (0..3).map(|_| rng.gen_range(-5i64..5)).collect();
            let mut v = vec![0i64; 3];
            for (j, &c) in coef.iter().enumerate() {
                for i in 0..3 {
                    v[i] += c * hnf.cols[j][i] as i64;
                }
            }
            assert!(hnf.reduce_digits(&v).iter().all(|&d| d == 0));
        }
        // Adding e_i changes the digits.
        let d0 = hnf.reduce_digits(&[0, 0, 0]);
        let d1 = hnf.reduce_digits(&[1, 0, 0]);
        assert_ne!(d0, d1);
    }
}
