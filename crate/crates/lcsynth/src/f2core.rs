//! Exact linear algebra over F2.
//!
//! Vectors and matrices are bit-packed into `u64` words. Everything here is
//! deterministic: elimination always pivots on the lowest eligible index, so
//! ranks, solution sets, duals and LU factors are reproducible across runs.

use std::fmt;

use crate::Error;

const WORD_BITS: usize = 64;

fn words_for(len: usize) -> usize {
    len.div_ceil(WORD_BITS)
}

/// A fixed-length vector over F2.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct F2Vector {
    len: usize,
    words: Vec<u64>,
}

impl F2Vector {
    pub fn zero(len: usize) -> Self {
        F2Vector {
            len,
            words: vec![0; words_for(len)],
        }
    }

    /// Standard basis vector `e_i` (0-indexed).
    pub fn unit(len: usize, i: usize) -> Self {
        let mut v = Self::zero(len);
        v.set(i, true);
        v
    }

    pub fn from_bits(bits: &[u8]) -> Self {
        let mut v = Self::zero(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            v.set(i, b & 1 == 1);
        }
        v
    }

    pub fn from_str_bits(s: &str) -> Result<Self, Error> {
        let mut v = Self::zero(s.chars().count());
        for (i, c) in s.chars().enumerate() {
            match c {
                '0' => {}
                '1' => v.set(i, true),
                _ => return Err(Error::Parse(format!("invalid bit character {c:?}"))),
            }
        }
        Ok(v)
    }

    /// Bits of `index`, lowest bit first, as a length-`len` vector.
    pub fn from_index(len: usize, index: u64) -> Self {
        let mut v = Self::zero(len);
        for i in 0..len.min(64) {
            if index >> i & 1 == 1 {
                v.set(i, true);
            }
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
        assert!(i < self.len);
        self.words[i / WORD_BITS] >> (i % WORD_BITS) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len);
        let mask = 1u64 << (i % WORD_BITS);
        if value {
            self.words[i / WORD_BITS] |= mask;
        } else {
            self.words[i / WORD_BITS] &= !mask;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn xor_assign(&mut self, other: &F2Vector) {
        assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn xor(&self, other: &F2Vector) -> F2Vector {
        let mut out = self.clone();
        out.xor_assign(other);
        out
    }

    /// Pointwise AND (the product `a * b` on binary vectors).
    pub fn and(&self, other: &F2Vector) -> F2Vector {
        assert_eq!(self.len, other.len);
        let mut out = self.clone();
        for (a, b) in out.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
        out
    }

    pub fn or(&self, other: &F2Vector) -> F2Vector {
        assert_eq!(self.len, other.len);
        let mut out = self.clone();
        for (a, b) in out.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
        out
    }

    pub fn not(&self) -> F2Vector {
        let mut out = self.clone();
        for w in out.words.iter_mut() {
            *w = !*w;
        }
        out.mask_tail();
        out
    }

    fn mask_tail(&mut self) {
        let rem = self.len % WORD_BITS;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }

    /// Inner product `self . other^T` mod 2.
    pub fn dot(&self, other: &F2Vector) -> bool {
        assert_eq!(self.len, other.len);
        let mut acc = 0u64;
        for (a, b) in self.words.iter().zip(&other.words) {
            acc ^= a & b;
        }
        acc.count_ones() % 2 == 1
    }

    /// Inner product over the integers (overlap weight).
    pub fn overlap(&self, other: &F2Vector) -> usize {
        self.and(other).weight()
    }

    /// True when `self` is contained in the support of `other`.
    pub fn subset_of(&self, other: &F2Vector) -> bool {
        self.words
            .iter()
            .zip(&other.words)
            .all(|(a, b)| a & !b == 0)
    }

    pub fn iter_bits(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(|i| self.get(i))
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.len).filter(|&i| self.get(i)).collect()
    }

    pub fn concat(&self, other: &F2Vector) -> F2Vector {
        let mut out = F2Vector::zero(self.len + other.len);
        for i in 0..self.len {
            out.set(i, self.get(i));
        }
        for i in 0..other.len {
            out.set(self.len + i, other.get(i));
        }
        out
    }

    /// The sub-vector given by `cols` in order.
    pub fn select(&self, cols: &[usize]) -> F2Vector {
        let mut out = F2Vector::zero(cols.len());
        for (k, &c) in cols.iter().enumerate() {
            out.set(k, self.get(c));
        }
        out
    }
}

impl fmt::Debug for F2Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.iter_bits() {
            write!(f, "{}", u8::from(b))?;
        }
        Ok(())
    }
}

impl fmt::Display for F2Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// A rectangular matrix over F2, stored as packed rows.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct F2Matrix {
    rows: usize,
    cols: usize,
    data: Vec<F2Vector>,
}

impl F2Matrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        F2Matrix {
            rows,
            cols,
            data: vec![F2Vector::zero(cols); rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    pub fn from_rows(rows: Vec<F2Vector>) -> Self {
        let cols = rows.first().map_or(0, F2Vector::len);
        assert!(rows.iter().all(|r| r.len() == cols));
        F2Matrix {
            rows: rows.len(),
            cols,
            data: rows,
        }
    }

    pub fn from_bits(rows: &[&[u8]]) -> Self {
        Self::from_rows(rows.iter().map(|r| F2Vector::from_bits(r)).collect())
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> bool) -> Self {
        let mut m = Self::zero(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_empty(&self) -> bool {
        self.rows == 0
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.data[i].get(j)
    }

    pub fn set(&mut self, i: usize, j: usize, value: bool) {
        self.data[i].set(j, value);
    }

    pub fn row(&self, i: usize) -> &F2Vector {
        &self.data[i]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut F2Vector {
        &mut self.data[i]
    }

    pub fn set_row(&mut self, i: usize, row: F2Vector) {
        assert_eq!(row.len(), self.cols);
        self.data[i] = row;
    }

    pub fn iter_rows(&self) -> impl Iterator<Item = &F2Vector> {
        self.data.iter()
    }

    pub fn into_rows(self) -> Vec<F2Vector> {
        self.data
    }

    pub fn col(&self, j: usize) -> F2Vector {
        let mut v = F2Vector::zero(self.rows);
        for i in 0..self.rows {
            v.set(i, self.get(i, j));
        }
        v
    }

    pub fn transpose(&self) -> F2Matrix {
        F2Matrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i))
    }

    pub fn add(&self, other: &F2Matrix) -> F2Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&other.data) {
            a.xor_assign(b);
        }
        out
    }

    /// Row-vector times matrix: `x M`.
    pub fn mul_vec(&self, x: &F2Vector) -> F2Vector {
        assert_eq!(x.len(), self.rows);
        let mut out = F2Vector::zero(self.cols);
        for i in 0..self.rows {
            if x.get(i) {
                out.xor_assign(&self.data[i]);
            }
        }
        out
    }

    pub fn mul(&self, other: &F2Matrix) -> F2Matrix {
        assert_eq!(self.cols, other.rows);
        let data = self.data.iter().map(|r| other.mul_vec(r)).collect();
        F2Matrix {
            rows: self.rows,
            cols: other.cols,
            data,
        }
    }

    pub fn vstack(&self, other: &F2Matrix) -> F2Matrix {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        F2Matrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn hstack(&self, other: &F2Matrix) -> F2Matrix {
        assert_eq!(self.rows, other.rows);
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a.concat(b))
            .collect();
        F2Matrix {
            rows: self.rows,
            cols: self.cols + other.cols,
            data,
        }
    }

    /// Submatrix given by row and column index lists, in order.
    pub fn select(&self, row_idx: &[usize], col_idx: &[usize]) -> F2Matrix {
        let data = row_idx.iter().map(|&i| self.data[i].select(col_idx)).collect();
        F2Matrix {
            rows: row_idx.len(),
            cols: col_idx.len(),
            data,
        }
    }

    pub fn is_symmetric(&self) -> bool {
        if self.rows != self.cols {
            return false;
        }
        (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(F2Vector::is_zero)
    }
}

impl fmt::Debug for F2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} {}", self.rows, self.cols)?;
        for r in &self.data {
            writeln!(f, "{r}")?;
        }
        Ok(())
    }
}

/// The matrix text format shared by all fixture files: a header `r c` line
/// followed by r lines of c characters in {0,1}.
impl fmt::Display for F2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl std::str::FromStr for F2Matrix {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let mut lines = s.lines().filter(|l| !l.trim().is_empty());
        let header = lines.next().ok_or_else(|| Error::Parse("empty matrix text".into()))?;
        let mut parts = header.split_whitespace();
        let rows: usize = parts
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| Error::Parse("bad matrix header".into()))?;
        let cols: usize = parts
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| Error::Parse("bad matrix header".into()))?;
        let mut data = Vec::with_capacity(rows);
        for _ in 0..rows {
            let line = lines
                .next()
                .ok_or_else(|| Error::Parse("matrix text ended early".into()))?;
            let v = F2Vector::from_str_bits(line.trim())?;
            if v.len() != cols {
                return Err(Error::Parse(format!(
                    "matrix row has {} columns, expected {cols}",
                    v.len()
                )));
            }
            data.push(v);
        }
        Ok(F2Matrix { rows, cols, data })
    }
}

/// Row echelon form computed in place; returns the pivot columns.
/// Pivoting is deterministic: lowest column first, lowest row first.
fn echelonize(m: &mut F2Matrix) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..m.cols {
        if r == m.rows {
            break;
        }
        let Some(p) = (r..m.rows).find(|&i| m.get(i, c)) else {
            continue;
        };
        m.data.swap(r, p);
        let pivot_row = m.data[r].clone();
        for (i, row) in m.data.iter_mut().enumerate() {
            if i != r && row.get(c) {
                row.xor_assign(&pivot_row);
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(m: &F2Matrix) -> usize {
    let mut work = m.clone();
    echelonize(&mut work).len()
}

/// Reduced row echelon form together with its pivot columns.
pub fn rref(m: &F2Matrix) -> (F2Matrix, Vec<usize>) {
    let mut work = m.clone();
    let pivots = echelonize(&mut work);
    (work, pivots)
}

/// The solution set of `A X = B` over F2.
///
/// `particular` is one solution; every solution is `particular` plus an
/// arbitrary combination of `kernel` rows added into each column.
#[derive(Clone, Debug)]
pub struct AffineSolution {
    pub particular: F2Matrix,
    pub kernel: Vec<F2Vector>,
}

impl AffineSolution {
    /// Number of solutions per column of `B` is `2^kernel.len()`.
    pub fn kernel_dim(&self) -> usize {
        self.kernel.len()
    }
}

/// Solve `A X = B` for `X`; returns `None` when the system is inconsistent.
///
/// The particular solution sets all free variables to zero, and the kernel
/// basis enumerates free columns in increasing order, so the output is
/// deterministic.
pub fn solve_affine(a: &F2Matrix, b: &F2Matrix) -> Option<AffineSolution> {
    assert_eq!(a.rows(), b.rows(), "A and B must have matching row counts");
    let aug = a.hstack(b);
    let (ech, pivots) = rref(&aug);
    // Any pivot in the B block marks an inconsistent row.
    if pivots.iter().any(|&c| c >= a.cols()) {
        return None;
    }
    let mut particular = F2Matrix::zero(a.cols(), b.cols());
    for (r, &c) in pivots.iter().enumerate() {
        for j in 0..b.cols() {
            particular.set(c, j, ech.get(r, a.cols() + j));
        }
    }
    let pivot_set: Vec<bool> = {
        let mut v = vec![false; a.cols()];
        for &c in &pivots {
            v[c] = true;
        }
        v
    };
    let mut kernel = Vec::new();
    for free in (0..a.cols()).filter(|&c| !pivot_set[c]) {
        let mut k = F2Vector::zero(a.cols());
        k.set(free, true);
        for (r, &c) in pivots.iter().enumerate() {
            if ech.get(r, free) {
                k.set(c, true);
            }
        }
        kernel.push(k);
    }
    Some(AffineSolution { particular, kernel })
}

/// Solve the single-vector system `x A = y` (row-vector convention).
pub fn solve_left(a: &F2Matrix, y: &F2Vector) -> Option<F2Vector> {
    let b = F2Matrix::from_rows(vec![y.clone()]).transpose();
    solve_affine(&a.transpose(), &b).map(|s| s.particular.col(0))
}

pub fn inverse(m: &F2Matrix) -> Result<F2Matrix, Error> {
    if m.rows() != m.cols() {
        return Err(Error::NotInvertible);
    }
    let sol = solve_affine(m, &F2Matrix::identity(m.rows())).ok_or(Error::NotInvertible)?;
    if !sol.kernel.is_empty() {
        return Err(Error::NotInvertible);
    }
    Ok(sol.particular)
}

/// A basis (as rows) for the dual space `{ v : G v^T = 0 }`.
///
/// Rows are produced per free column of the reduced echelon form of `G`,
/// in increasing column order.
pub fn dual_basis(g: &F2Matrix) -> F2Matrix {
    let (ech, pivots) = rref(g);
    let pivot_set = {
        let mut v = vec![false; g.cols()];
        for &c in &pivots {
            v[c] = true;
        }
        v
    };
    let mut rows = Vec::new();
    for free in (0..g.cols()).filter(|&c| !pivot_set[c]) {
        let mut v = F2Vector::zero(g.cols());
        v.set(free, true);
        for (r, &c) in pivots.iter().enumerate() {
            if ech.get(r, free) {
                v.set(c, true);
            }
        }
        rows.push(v);
    }
    if rows.is_empty() {
        F2Matrix::zero(0, g.cols())
    } else {
        F2Matrix::from_rows(rows)
    }
}

/// LU factorization with row pivoting: `P Q = L U` with unit diagonals.
///
/// `perm` lists, for each row of `L U`, the source row of `Q`, i.e.
/// `(L U)[i] = Q[perm[i]]`.
pub fn lu_decompose(q: &F2Matrix) -> Result<(Vec<usize>, F2Matrix, F2Matrix), Error> {
    if q.rows() != q.cols() {
        return Err(Error::NotInvertible);
    }
    let n = q.rows();
    let mut u = q.clone();
    let mut l = F2Matrix::identity(n);
    let mut perm: Vec<usize> = (0..n).collect();
    for i in 0..n {
        let p = (i..n).find(|&r| u.get(r, i)).ok_or(Error::NotInvertible)?;
        if p != i {
            u.data.swap(i, p);
            perm.swap(i, p);
            // Swap the already-built part of L.
            for j in 0..i {
                let (a, b) = (l.get(i, j), l.get(p, j));
                l.set(i, j, b);
                l.set(p, j, a);
            }
        }
        let pivot_row = u.data[i].clone();
        for r in i + 1..n {
            if u.get(r, i) {
                l.set(r, i, true);
                u.data[r].xor_assign(&pivot_row);
            }
        }
    }
    Ok((perm, l, u))
}

/// Membership test: is `v` in the row space of `m`?
pub fn in_row_space(m: &F2Matrix, v: &F2Vector) -> bool {
    solve_left(m, v).is_some()
}

/// Reduce `v` modulo the row space of `basis`: repeatedly cancel the leading
/// bit of `v` against echelon rows. With `basis` in echelon form the result
/// is the canonical coset representative.
pub fn reduce_mod_rows(basis: &F2Matrix, v: &F2Vector) -> F2Vector {
    let (ech, pivots) = rref(basis);
    let mut out = v.clone();
    for (r, &c) in pivots.iter().enumerate() {
        if out.get(c) {
            out.xor_assign(ech.row(r));
        }
    }
    out
}

/// A basis for the intersection of the row spaces of `a` and `b`.
pub fn row_space_intersection(a: &F2Matrix, b: &F2Matrix) -> F2Matrix {
    // Zassenhaus: echelonize [A|A; B|0]; rows with zero left half carry the
    // intersection in their right half.
    let top = a.hstack(a);
    let bottom = b.hstack(&F2Matrix::zero(b.rows(), b.cols()));
    let mut work = top.vstack(&bottom);
    echelonize(&mut work);
    let n = a.cols();
    let left_cols: Vec<usize> = (0..n).collect();
    let right_cols: Vec<usize> = (n..2 * n).collect();
    let mut rows = Vec::new();
    for i in 0..work.rows() {
        let left = work.row(i).select(&left_cols);
        let right = work.row(i).select(&right_cols);
        if left.is_zero() && !right.is_zero() {
            rows.push(right);
        }
    }
    if rows.is_empty() {
        F2Matrix::zero(0, n)
    } else {
        F2Matrix::from_rows(rows)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&str]) -> F2Matrix {
        F2Matrix::from_rows(
            rows.iter()
                .map(|r| F2Vector::from_str_bits(r).unwrap())
                .collect(),
        )
    }

    #[test]
    fn rank_examples() {
        assert_eq!(rank(&F2Matrix::identity(3)), 3);
        assert_eq!(rank(&F2Matrix::zero(2, 4)), 0);
        // row3 = row1 + row2
        assert_eq!(rank(&m(&["1100", "0110", "1010"])), 2);
    }

    #[test]
    fn solve_affine_examples() {
        let sol = solve_affine(&F2Matrix::identity(2), &F2Matrix::identity(2)).unwrap();
        assert_eq!(sol.particular, F2Matrix::identity(2));
        assert!(sol.kernel.is_empty());

        let sol = solve_affine(&m(&["11"]), &m(&["0"])).unwrap();
        assert!(sol.particular.is_zero());
        assert_eq!(sol.kernel, vec![F2Vector::from_bits(&[1, 1])]);

        assert!(solve_affine(&m(&["00"]), &m(&["1"])).is_none());
    }

    #[test]
    fn solve_affine_members_satisfy_system() {
        // Brute-check the full solution set on a small system.
        let a = m(&["1010", "0111", "1101"]);
        let b = m(&["1", "0", "1"]);
        let sol = solve_affine(&a, &b).unwrap();
        let dim = sol.kernel_dim();
        for mask in 0..1u32 << dim {
            let mut x = sol.particular.col(0);
            for (k, kern) in sol.kernel.iter().enumerate() {
                if mask >> k & 1 == 1 {
                    x.xor_assign(kern);
                }
            }
            for i in 0..a.rows() {
                assert_eq!(a.row(i).dot(&x), b.get(i, 0));
            }
        }
        // Count matches 2^kernel_dim by uniqueness of particular + kernel span.
        let mut seen = std::collections::HashSet::new();
        for mask in 0..1u32 << dim {
            let mut x = sol.particular.col(0);
            for (k, kern) in sol.kernel.iter().enumerate() {
                if mask >> k & 1 == 1 {
                    x.xor_assign(kern);
                }
            }
            seen.insert(x);
        }
        assert_eq!(seen.len(), 1 << dim);
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(inverse(&F2Matrix::identity(4)).unwrap(), F2Matrix::identity(4));
        let a = m(&["11", "01"]);
        let ainv = inverse(&a).unwrap();
        assert_eq!(ainv, a); // self-inverse over F2
        assert_eq!(a.mul(&ainv), F2Matrix::identity(2));
        assert!(inverse(&m(&["11", "11"])).is_err());
    }

    #[test]
    fn double_inverse_is_identity_map() {
        let a = m(&["110", "011", "111"]);
        let ainv = inverse(&a).unwrap();
        assert_eq!(inverse(&ainv).unwrap(), a);
    }

    #[test]
    fn dual_basis_examples() {
        // Even-weight [4,3] code.
        let d = dual_basis(&m(&["1111"]));
        assert_eq!(d.rows(), 3);
        for i in 0..(1u32 << 4) {
            let v = F2Vector::from_index(4, i as u64);
            let in_dual = v.weight() % 2 == 0;
            assert_eq!(in_row_space(&d, &v), in_dual, "{v}");
        }
        // Identity has trivial dual.
        assert_eq!(dual_basis(&F2Matrix::identity(5)).rows(), 0);
    }

    #[test]
    fn double_dual_spans_row_space() {
        let g = m(&["110011", "001101", "111000"]);
        let dd = dual_basis(&dual_basis(&g));
        assert_eq!(rank(&dd), rank(&g));
        for r in g.iter_rows() {
            assert!(in_row_space(&dd, r));
        }
    }

    #[test]
    fn lu_examples() {
        let (p, l, u) = lu_decompose(&F2Matrix::identity(3)).unwrap();
        assert_eq!(p, vec![0, 1, 2]);
        assert_eq!(l, F2Matrix::identity(3));
        assert_eq!(u, F2Matrix::identity(3));

        let q = m(&["01", "10"]);
        let (p, l, u) = lu_decompose(&q).unwrap();
        assert_eq!(p, vec![1, 0]);
        assert_eq!(l, F2Matrix::identity(2));
        assert_eq!(u, F2Matrix::identity(2));

        let q = m(&["10", "11"]);
        let (p, l, u) = lu_decompose(&q).unwrap();
        assert_eq!(p, vec![0, 1]);
        assert_eq!(l, q);
        assert_eq!(u, F2Matrix::identity(2));

        assert!(lu_decompose(&m(&["11", "11"])).is_err());
    }

    #[test]
    fn lu_round_trip() {
        let q = m(&["0110", "1010", "1111", "0001"]);
        let (p, l, u) = lu_decompose(&q).unwrap();
        let pq = F2Matrix::from_rows(p.iter().map(|&i| q.row(i).clone()).collect());
        assert_eq!(pq, l.mul(&u));
        for i in 0..4 {
            assert!(l.get(i, i) && u.get(i, i));
            for j in i + 1..4 {
                assert!(!l.get(i, j));
                assert!(!u.get(j, i));
            }
        }
    }

    #[test]
    fn matrix_text_round_trip() {
        let a = m(&["0110", "1010", "1111"]);
        let text = a.to_string();
        assert!(text.starts_with("3 4\n"));
        let b: F2Matrix = text.parse().unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn row_space_intersection_basic() {
        let a = m(&["1100", "0011"]);
        let b = m(&["1111", "1000"]);
        let i = row_space_intersection(&a, &b);
        assert_eq!(rank(&i), 1);
        assert!(in_row_space(&i, &F2Vector::from_bits(&[1, 1, 1, 1])));
    }
}
