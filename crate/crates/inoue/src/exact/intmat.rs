use std::fmt;

use num::bigint::BigInt;
use num::traits::{One, Signed, Zero};

/// Dense integer matrix with arbitrary-precision entries.
///
/// Everything here is exact; there is no floating point anywhere in the
/// structural computations built on top of this type.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntMat {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMat {
    pub fn new(rows: usize, cols: usize, data: Vec<BigInt>) -> Self {
        assert_eq!(data.len(), rows * cols, "entry count mismatch");
        IntMat { rows, cols, data }
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let r = rows.len();
        let c = if r == 0 { 0 } else { rows[0].len() };
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend(row.iter().map(|&x| BigInt::from(x)));
        }
        IntMat { rows: r, cols: c, data }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> BigInt) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        IntMat { rows, cols, data }
    }

    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMat {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { BigInt::one() } else { BigInt::zero() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.cols + j] = v;
    }

    pub fn at_i64(&self, i: usize, j: usize) -> i64 {
        use num::ToPrimitive;
        self.at(i, j).to_i64().expect("entry exceeds i64")
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn is_identity(&self) -> bool {
        self.is_square() && *self == IntMat::identity(self.rows)
    }

    pub fn transpose(&self) -> IntMat {
        Self::from_fn(self.cols, self.rows, |i, j| self.at(j, i).clone())
    }

    pub fn neg(&self) -> IntMat {
        IntMat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| -x).collect(),
        }
    }

    pub fn add(&self, other: &IntMat) -> IntMat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        IntMat {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &IntMat) -> IntMat {
        self.add(&other.neg())
    }

    pub fn scale(&self, k: &BigInt) -> IntMat {
        IntMat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * k).collect(),
        }
    }

    pub fn mul(&self, other: &IntMat) -> IntMat {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        Self::from_fn(self.rows, other.cols, |i, j| {
            let mut acc = BigInt::zero();
            for k in 0..self.cols {
                acc += self.at(i, k) * other.at(k, j);
            }
            acc
        })
    }

    /// v -> M v for a column vector.
    pub fn apply(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                let mut acc = BigInt::zero();
                for j in 0..self.cols {
                    acc += self.at(i, j) * &v[j];
                }
                acc
            })
            .collect()
    }

    /// zeta -> zeta M for a row vector.
    pub fn apply_row(&self, zeta: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(zeta.len(), self.rows);
        (0..self.cols)
            .map(|j| {
                let mut acc = BigInt::zero();
                for i in 0..self.rows {
                    acc += &zeta[i] * self.at(i, j);
                }
                acc
            })
            .collect()
    }

    pub fn trace(&self) -> BigInt {
        assert!(self.is_square());
        (0..self.rows).map(|i| self.at(i, i).clone()).sum()
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> BigInt {
        assert!(self.is_square());
        let n = self.rows;
        match n {
            0 => return BigInt::one(),
            1 => return self.at(0, 0).clone(),
            2 => return self.at(0, 0) * self.at(1, 1) - self.at(0, 1) * self.at(1, 0),
            _ => {}
        }
        let mut a: Vec<Vec<BigInt>> = (0..n)
            .map(|i| (0..n).map(|j| self.at(i, j).clone()).collect())
            .collect();
        let mut sign = 1i32;
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                    Some(i) => {
                        a.swap(k, i);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                    a[i][j] = &num / &prev;
                }
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

    pub fn is_unimodular(&self) -> bool {
        self.is_square() && self.det().abs().is_one()
    }

    /// Inverse of a matrix with determinant +-1 (adjugate divided by det).
    pub fn inverse_unimodular(&self) -> IntMat {
        assert!(self.is_square());
        let n = self.rows;
        let d = self.det();
        assert!(d.abs().is_one(), "matrix is not unimodular");
        let adj = Self::from_fn(n, n, |i, j| {
            // cofactor C_ji
            let minor = self.minor(j, i);
            let c = minor.det();
            if (i + j) % 2 == 0 {
                c
            } else {
                -c
            }
        });
        if d.is_one() {
            adj
        } else {
            adj.neg()
        }
    }

    fn minor(&self, skip_row: usize, skip_col: usize) -> IntMat {
        let rows: Vec<usize> = (0..self.rows).filter(|&i| i != skip_row).collect();
        let cols: Vec<usize> = (0..self.cols).filter(|&j| j != skip_col).collect();
        Self::from_fn(rows.len(), cols.len(), |i, j| self.at(rows[i], cols[j]).clone())
    }

    /// M^k for any integer k; negative powers require |det| = 1.
    pub fn pow(&self, k: i64) -> IntMat {
        assert!(self.is_square());
        let base = if k < 0 { self.inverse_unimodular() } else { self.clone() };
        let mut e = k.unsigned_abs();
        let mut acc = IntMat::identity(self.rows);
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&sq);
            }
            e >>= 1;
            if e > 0 {
                sq = sq.mul(&sq);
            }
        }
        acc
    }

    /// Coefficients (trace, det) of x^2 - trace*x + det for a 2x2 matrix.
    pub fn charpoly2(&self) -> (BigInt, BigInt) {
        assert!(self.rows == 2 && self.cols == 2);
        (self.trace(), self.det())
    }

    /// Coefficients (t, s, d) of x^3 - t x^2 + s x - d for a 3x3 matrix.
    pub fn charpoly3(&self) -> (BigInt, BigInt, BigInt) {
        assert!(self.rows == 3 && self.cols == 3);
        let t = self.trace();
        let mut s = BigInt::zero();
        for i in 0..3 {
            for j in i + 1..3 {
                s += self.at(i, i) * self.at(j, j) - self.at(i, j) * self.at(j, i);
            }
        }
        (t, s, self.det())
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row_i -= q * row_k
    fn row_sub(&mut self, i: usize, q: &BigInt, k: usize) {
        for j in 0..self.cols {
            let v = self.at(k, j) * q;
            let cur = self.at(i, j) - v;
            self.set(i, j, cur);
        }
    }

    /// col_j -= q * col_k
    fn col_sub(&mut self, j: usize, q: &BigInt, k: usize) {
        for i in 0..self.rows {
            let v = self.at(i, k) * q;
            let cur = self.at(i, j) - v;
            self.set(i, j, cur);
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -self.at(i, j);
            self.set(i, j, v);
        }
    }

    /// Smith normal form: S = U * self * V with U, V unimodular, S diagonal
    /// with nonnegative entries in a divisibility chain d1 | d2 | ...
    pub fn snf(&self) -> Snf {
        let mut s = self.clone();
        let mut u = IntMat::identity(self.rows);
        let mut v = IntMat::identity(self.cols);
        let n = self.rows.min(self.cols);
        let mut t = 0;
        while t < n {
            // find a nonzero pivot in the remaining block
            let pivot = (t..self.rows)
                .flat_map(|i| (t..self.cols).map(move |j| (i, j)))
                .filter(|&(i, j)| !s.at(i, j).is_zero())
                .min_by_key(|&(i, j)| s.at(i, j).abs());
            let (pi, pj) = match pivot {
                Some(p) => p,
                None => break,
            };
            s.swap_rows(t, pi);
            u.swap_rows(t, pi);
            s.swap_cols(t, pj);
            v.swap_cols(t, pj);

            // clear row and column t; restart whenever a remainder appears,
            // which strictly shrinks the pivot
            'reduce: loop {
                for i in t + 1..self.rows {
                    if !s.at(i, t).is_zero() {
                        let q = s.at(i, t) / s.at(t, t);
                        s.row_sub(i, &q, t);
                        u.row_sub(i, &q, t);
                        if !s.at(i, t).is_zero() {
                            s.swap_rows(t, i);
                            u.swap_rows(t, i);
                            continue 'reduce;
                        }
                    }
                }
                for j in t + 1..self.cols {
                    if !s.at(t, j).is_zero() {
                        let q = s.at(t, j) / s.at(t, t);
                        s.col_sub(j, &q, t);
                        v.col_sub(j, &q, t);
                        if !s.at(t, j).is_zero() {
                            s.swap_cols(t, j);
                            v.swap_cols(t, j);
                            continue 'reduce;
                        }
                    }
                }
                // pivot must divide the rest of the block
                let bad = (t + 1..self.rows)
                    .flat_map(|i| (t + 1..self.cols).map(move |j| (i, j)))
                    .find(|&(i, j)| !(s.at(i, j) % s.at(t, t)).is_zero());
                match bad {
                    Some((i, _)) => {
                        // fold row i into row t and keep reducing
                        let minus_one = -BigInt::one();
                        s.row_sub(t, &minus_one, i);
                        u.row_sub(t, &minus_one, i);
                        continue 'reduce;
                    }
                    None => break 'reduce,
                }
            }
            if s.at(t, t).is_negative() {
                s.negate_row(t);
                u.negate_row(t);
            }
            t += 1;
        }
        Snf { s, u, v }
    }

    /// Basis of the right kernel {x : self * x = 0} (columns as vectors).
    pub fn right_kernel(&self) -> Vec<Vec<BigInt>> {
        let Snf { s, v, .. } = self.snf();
        let n = self.rows.min(self.cols);
        let mut basis = Vec::new();
        for j in 0..self.cols {
            let diag_zero = j >= n || s.at(j, j).is_zero();
            if diag_zero {
                basis.push((0..self.cols).map(|i| v.at(i, j).clone()).collect());
            }
        }
        basis
    }
}

/// Result of `IntMat::snf`.
pub struct Snf {
    pub s: IntMat,
    pub u: IntMat,
    pub v: IntMat,
}

impl fmt::Display for IntMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.at(i, j))?;
            }
        }
        write!(f, "]")
    }
}

impl fmt::Debug for IntMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::FromPrimitive;

    fn bi(x: i64) -> BigInt {
        BigInt::from_i64(x).unwrap()
    }

    fn check_snf(m: &IntMat) {
        let Snf { s, u, v } = m.snf();
        assert_eq!(u.mul(m).mul(&v), s, "S = U m V violated for {m}");
        assert!(u.is_unimodular(), "U not unimodular");
        assert!(v.is_unimodular(), "V not unimodular");
        let n = m.rows().min(m.cols());
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    assert!(s.at(i, j).is_zero(), "off-diagonal entry in SNF");
                }
            }
            assert!(!s.at(i, i).is_negative());
        }
        for i in 0..n.saturating_sub(1) {
            if !s.at(i + 1, i + 1).is_zero() || s.at(i, i).is_zero() {
                if !s.at(i, i).is_zero() {
                    assert!(
                        (s.at(i + 1, i + 1) % s.at(i, i)).is_zero(),
                        "divisibility chain violated"
                    );
                }
            }
        }
    }

    #[test]
    fn snf_identity_is_identity() {
        let id = IntMat::identity(3);
        let Snf { s, u, v } = id.snf();
        assert_eq!(s, id);
        assert_eq!(u, IntMat::identity(3));
        assert_eq!(v, IntMat::identity(3));
    }

    #[test]
    fn snf_diag_2_3_gives_1_6() {
        let m = IntMat::from_i64(&[&[2, 0], &[0, 3]]);
        let Snf { s, .. } = m.snf();
        assert_eq!(*s.at(0, 0), bi(1));
        assert_eq!(*s.at(1, 1), bi(6));
        check_snf(&m);
    }

    #[test]
    fn snf_zero_matrix() {
        let m = IntMat::zero(2, 3);
        let Snf { s, .. } = m.snf();
        assert!(s.is_zero());
        check_snf(&m);
    }

    #[test]
    fn snf_randomized_small_matrices() {
        // deterministic pseudo-random sweep over shapes up to 4x4 and 2x4
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state % 13) as i64 - 6
        };
        for &(r, c) in &[(2, 2), (3, 3), (2, 4), (4, 4), (3, 2)] {
            for _ in 0..40 {
                let m = IntMat::from_fn(r, c, |_, _| BigInt::from(next()));
                check_snf(&m);
            }
        }
    }

    #[test]
    fn kernel_solves_exactly() {
        // K N = N' K commutant map is exercised elsewhere; here a plain kernel
        let m = IntMat::from_i64(&[&[1, 2, 3], &[2, 4, 6]]);
        let ker = m.right_kernel();
        assert_eq!(ker.len(), 2);
        for v in &ker {
            assert!(m.apply(v).iter().all(|x| x.is_zero()));
        }
    }

    #[test]
    fn inverse_and_pow() {
        let n = IntMat::from_i64(&[&[2, 1], &[1, 1]]);
        let inv = n.inverse_unimodular();
        assert!(n.mul(&inv).is_identity());
        assert_eq!(n.pow(-2), inv.mul(&inv));
        assert_eq!(n.pow(0), IntMat::identity(2));
        assert_eq!(n.pow(3), n.mul(&n).mul(&n));
    }

    #[test]
    fn charpoly3_matches_det_and_trace() {
        let m = IntMat::from_i64(&[&[0, 0, 1], &[1, 0, 1], &[0, 1, 0]]);
        let (t, s, d) = m.charpoly3();
        assert_eq!(t, bi(0));
        assert_eq!(s, bi(-1));
        assert_eq!(d, bi(1));
    }

    #[test]
    fn det_bareiss_matches_cofactor_small() {
        let m = IntMat::from_i64(&[&[3, 1, 2], &[0, 2, -1], &[4, 0, 1]]);
        // cofactor expansion by hand: 3*(2*1-(-1)*0) - 1*(0*1-(-1)*4) + 2*(0-8)
        assert_eq!(m.det(), bi(3 * 2 - 1 * 4 + 2 * (-8)));
    }
}
