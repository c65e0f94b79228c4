//! The binary symplectic group Sp(2n, F2).
//!
//! Clifford operators act on Pauli vectors `[a, b]` through symplectic
//! matrices (row-vector convention: `x F`). This module provides
//! transvections, the constrained solvers that find one or all symplectic
//! matrices satisfying a linear system, symplectic Gram-Schmidt completion,
//! the elementary-factor decomposition, and circuit emission for each
//! elementary factor.

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::f2core::{self, F2Matrix, F2Vector};
use crate::pauli::{symplectic_inner, PauliOperator};
use crate::Error;

/// The symplectic form `Omega = [[0, I], [I, 0]]`.
pub fn omega(n: usize) -> F2Matrix {
    F2Matrix::from_fn(2 * n, 2 * n, |i, j| {
        (i < n && j == n + i) || (i >= n && j == i - n)
    })
}

pub fn is_symplectic(f: &F2Matrix) -> bool {
    if f.rows() != f.cols() || f.rows() % 2 != 0 {
        return false;
    }
    let n = f.rows() / 2;
    let om = omega(n);
    f.mul(&om).mul(&f.transpose()) == om
}

/// A 2n x 2n binary matrix with `F Omega F^T = Omega`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SymplecticMatrix {
    mat: F2Matrix,
}

impl SymplecticMatrix {
    pub fn identity(n: usize) -> Self {
        SymplecticMatrix {
            mat: F2Matrix::identity(2 * n),
        }
    }

    pub fn from_matrix(mat: F2Matrix) -> Result<Self, Error> {
        if !is_symplectic(&mat) {
            return Err(Error::InvalidInput("matrix is not symplectic".into()));
        }
        Ok(SymplecticMatrix { mat })
    }

    /// Caller guarantees the symplectic condition.
    pub fn from_matrix_unchecked(mat: F2Matrix) -> Self {
        debug_assert!(is_symplectic(&mat));
        SymplecticMatrix { mat }
    }

    pub fn omega(n: usize) -> Self {
        SymplecticMatrix { mat: omega(n) }
    }

    pub fn num_qubits(&self) -> usize {
        self.mat.rows() / 2
    }

    pub fn matrix(&self) -> &F2Matrix {
        &self.mat
    }

    pub fn into_matrix(self) -> F2Matrix {
        self.mat
    }

    pub fn mul(&self, other: &SymplecticMatrix) -> SymplecticMatrix {
        SymplecticMatrix {
            mat: self.mat.mul(&other.mat),
        }
    }

    /// `x F` for a row vector x in F2^{2n}.
    pub fn apply(&self, x: &F2Vector) -> F2Vector {
        self.mat.mul_vec(x)
    }

    pub fn inverse(&self) -> SymplecticMatrix {
        SymplecticMatrix {
            mat: f2core::inverse(&self.mat).expect("symplectic matrices are invertible"),
        }
    }

    /// Blocks `[[A, B], [C, D]]` with each block n x n.
    pub fn blocks(&self) -> (F2Matrix, F2Matrix, F2Matrix, F2Matrix) {
        let n = self.num_qubits();
        let lo: Vec<usize> = (0..n).collect();
        let hi: Vec<usize> = (n..2 * n).collect();
        (
            self.mat.select(&lo, &lo),
            self.mat.select(&lo, &hi),
            self.mat.select(&hi, &lo),
            self.mat.select(&hi, &hi),
        )
    }
}

impl std::fmt::Debug for SymplecticMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{:?}", self.mat)
    }
}

/// The symplectic transvection `F_h = I + Omega h^T h`, acting as
/// `x F_h = x + <x, h> h`.
pub fn transvection(h: &F2Vector) -> SymplecticMatrix {
    assert!(h.len() % 2 == 0);
    let dim = h.len();
    let mut mat = F2Matrix::identity(dim);
    for i in 0..dim {
        let e = F2Vector::unit(dim, i);
        if symplectic_inner(&e, h) {
            mat.row_mut(i).xor_assign(h);
        }
    }
    SymplecticMatrix { mat }
}

/// Lexicographically smallest member of the affine set
/// `particular + span(kernel)` (position 0 weighted heaviest).
fn lex_smallest(particular: &F2Vector, kernel: &[F2Vector]) -> F2Vector {
    // Echelonize the kernel rows; clearing the pivot positions of the
    // particular solution yields the lexicographic minimum of the coset.
    let mut rows: Vec<F2Vector> = kernel.to_vec();
    let len = particular.len();
    let mut basis: Vec<(usize, F2Vector)> = Vec::new();
    for c in 0..len {
        let Some(pos) = rows.iter().position(|r| r.get(c)) else {
            continue;
        };
        let pivot = rows.swap_remove(pos);
        for r in rows.iter_mut() {
            if r.get(c) {
                r.xor_assign(&pivot);
            }
        }
        for (_, b) in basis.iter_mut() {
            if b.get(c) {
                b.xor_assign(&pivot);
            }
        }
        basis.push((c, pivot));
    }
    let mut out = particular.clone();
    for (c, b) in &basis {
        if out.get(*c) {
            out.xor_assign(b);
        }
    }
    out
}

/// Smallest vector `w` satisfying `<v_i, w> = rhs_i` for the given rows.
fn smallest_with_inner_products(rows: &[(F2Vector, bool)], dim: usize) -> Option<F2Vector> {
    // <v, w> = (v Omega) . w, a linear functional in w.
    let n = dim / 2;
    let om = omega(n);
    let a = F2Matrix::from_rows(rows.iter().map(|(v, _)| om.mul_vec(v)).collect());
    let b = F2Matrix::from_fn(rows.len(), 1, |i, _| rows[i].1);
    let sol = f2core::solve_affine(&a, &b)?;
    Some(lex_smallest(&sol.particular.col(0), &sol.kernel))
}

/// A symplectic matrix mapping `x` to `y` as a product of at most two
/// transvections: `F_{x+y}` when `<x, y> = 1`, otherwise routed through an
/// auxiliary vector `w` with `<x, w> = <y, w> = 1`.
pub fn map_vector(x: &F2Vector, y: &F2Vector) -> SymplecticMatrix {
    assert_eq!(x.len(), y.len());
    let n = x.len() / 2;
    if x == y {
        return SymplecticMatrix::identity(n);
    }
    if symplectic_inner(x, y) {
        return transvection(&x.xor(y));
    }
    let w = smallest_with_inner_products(&[(x.clone(), true), (y.clone(), true)], x.len())
        .expect("a common partner always exists for nonzero x, y");
    transvection(&w.xor(y)).mul(&transvection(&x.xor(&w)))
}

/// Find one `F` in Sp(2n, F2) with `x_i F = y_i` for all i.
///
/// The inputs must be linearly independent and satisfy
/// `<x_i, x_j> = <y_i, y_j>`; `F` is accumulated as a product of at most
/// `2t` transvections. Auxiliary vectors are chosen lexicographically
/// smallest so the result is reproducible.
pub fn find_symplectic(xs: &[F2Vector], ys: &[F2Vector]) -> Result<SymplecticMatrix, Error> {
    if xs.len() != ys.len() {
        return Err(Error::DimensionMismatch(
            "constraint lists have different lengths".into(),
        ));
    }
    if xs.is_empty() {
        return Err(Error::InvalidInput(
            "empty system: the dimension cannot be inferred".into(),
        ));
    }
    let dim = xs[0].len();
    let n = dim / 2;
    if f2core::rank(&F2Matrix::from_rows(xs.to_vec())) != xs.len() {
        return Err(Error::IncompatibleSystem(
            "constraint vectors are linearly dependent".into(),
        ));
    }
    for i in 0..xs.len() {
        for j in 0..xs.len() {
            if symplectic_inner(&xs[i], &xs[j]) != symplectic_inner(&ys[i], &ys[j]) {
                return Err(Error::IncompatibleSystem(format!(
                    "inner products <x_{i}, x_{j}> and <y_{i}, y_{j}> differ"
                )));
            }
        }
    }
    let mut f = SymplecticMatrix::identity(n);
    for i in 0..xs.len() {
        let xt = f.apply(&xs[i]);
        let y = &ys[i];
        if &xt == y {
            continue;
        }
        if symplectic_inner(&xt, y) {
            f = f.mul(&transvection(&xt.xor(y)));
        } else {
            let mut rows = vec![(xt.clone(), true), (y.clone(), true)];
            for j in 0..i {
                rows.push((ys[j].clone(), symplectic_inner(&ys[j], y)));
            }
            let w = smallest_with_inner_products(&rows, dim).ok_or_else(|| {
                Error::IncompatibleSystem("no auxiliary transvection vector exists".into())
            })?;
            f = f
                .mul(&transvection(&w.xor(y)))
                .mul(&transvection(&xt.xor(&w)));
        }
    }
    for i in 0..xs.len() {
        debug_assert_eq!(f.apply(&xs[i]), ys[i]);
    }
    Ok(f)
}

/// A symplectic basis: pairs `(u_a, v_a)` with `<u_a, v_b> = delta_ab` and
/// all other inner products zero.
#[derive(Clone, Debug)]
pub struct SymplecticBasis {
    pub u: Vec<F2Vector>,
    pub v: Vec<F2Vector>,
}

impl SymplecticBasis {
    pub fn standard(n: usize) -> Self {
        SymplecticBasis {
            u: (0..n).map(|i| F2Vector::unit(2 * n, i)).collect(),
            v: (0..n).map(|i| F2Vector::unit(2 * n, n + i)).collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.u.len()
    }

    pub fn is_valid(&self) -> bool {
        let n = self.u.len();
        if self.v.len() != n {
            return false;
        }
        for a in 0..n {
            for b in 0..n {
                if symplectic_inner(&self.u[a], &self.u[b])
                    || symplectic_inner(&self.v[a], &self.v[b])
                    || symplectic_inner(&self.u[a], &self.v[b]) != (a == b)
                {
                    return false;
                }
            }
        }
        true
    }

    /// Rows `u_1..u_n, v_1..v_n` as a 2n x 2n matrix.
    pub fn as_matrix(&self) -> F2Matrix {
        let mut rows = self.u.clone();
        rows.extend(self.v.iter().cloned());
        F2Matrix::from_rows(rows)
    }
}

/// Symplectic Gram-Schmidt: pair up the input vectors (first come, first
/// served) and complete them to a full symplectic basis of F2^{2n}.
///
/// Input vectors must be linearly independent. Each appears in the output:
/// the first unpaired vector takes the next `u` slot and its partner is the
/// earliest remaining vector with unit inner product, falling back to
/// standard basis vectors for the completion.
pub fn symplectic_gram_schmidt(vectors: &[F2Vector]) -> Result<SymplecticBasis, Error> {
    if vectors.is_empty() {
        return Err(Error::InvalidInput("need at least one vector".into()));
    }
    let dim = vectors[0].len();
    if dim % 2 != 0 || vectors.iter().any(|v| v.len() != dim) {
        return Err(Error::DimensionMismatch("vectors must share an even length".into()));
    }
    if f2core::rank(&F2Matrix::from_rows(vectors.to_vec())) != vectors.len() {
        return Err(Error::InvalidInput("input vectors are dependent".into()));
    }
    let n = dim / 2;
    let mut pool: Vec<F2Vector> = vectors.to_vec();
    for i in 0..dim {
        pool.push(F2Vector::unit(dim, i));
    }
    let mut basis = SymplecticBasis { u: Vec::new(), v: Vec::new() };
    while basis.u.len() < n {
        // Drop vectors that reduced to zero.
        pool.retain(|p| !p.is_zero());
        let x = pool.remove(0);
        let pos = pool
            .iter()
            .position(|w| symplectic_inner(&x, w))
            .expect("the form is non-degenerate, a partner exists");
        let y = pool.remove(pos);
        for p in pool.iter_mut() {
            if symplectic_inner(p, &y) {
                p.xor_assign(&x);
            }
            if symplectic_inner(p, &x) {
                p.xor_assign(&y);
            }
        }
        basis.u.push(x);
        basis.v.push(y);
    }
    debug_assert!(basis.is_valid());
    Ok(basis)
}

/// Complete pre-assigned slots into a symplectic basis.
///
/// `pairs` are already-symplectic (u, v) pairs occupying the first slots.
/// Each entry of `singles` is placed in the requested side of its own pair
/// and the missing partner is solved for, lexicographically smallest,
/// orthogonal to everything else.
pub fn complete_symplectic_basis(
    pairs: &[(F2Vector, F2Vector)],
    singles: &[(F2Vector, Side)],
) -> Result<SymplecticBasis, Error> {
    let dim = pairs
        .first()
        .map(|(u, _)| u.len())
        .or_else(|| singles.first().map(|(s, _)| s.len()))
        .ok_or_else(|| Error::InvalidInput("empty basis request".into()))?;
    let n = dim / 2;
    if pairs.len() + singles.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "{} pairs + {} singles != n = {n}",
            pairs.len(),
            singles.len()
        )));
    }
    let mut u: Vec<Option<F2Vector>> = Vec::new();
    let mut v: Vec<Option<F2Vector>> = Vec::new();
    for (x, z) in pairs {
        u.push(Some(x.clone()));
        v.push(Some(z.clone()));
    }
    for (s, side) in singles {
        match side {
            Side::U => {
                u.push(Some(s.clone()));
                v.push(None);
            }
            Side::V => {
                u.push(None);
                v.push(Some(s.clone()));
            }
        }
    }
    for slot in 0..n {
        let missing_side = if u[slot].is_none() {
            Side::U
        } else if v[slot].is_none() {
            Side::V
        } else {
            continue;
        };
        let mut rows: Vec<(F2Vector, bool)> = Vec::new();
        for other in 0..n {
            if let Some(x) = &u[other] {
                let want = other == slot && matches!(missing_side, Side::V);
                rows.push((x.clone(), want));
            }
            if let Some(z) = &v[other] {
                let want = other == slot && matches!(missing_side, Side::U);
                rows.push((z.clone(), want));
            }
        }
        let w = smallest_with_inner_products(&rows, dim).ok_or_else(|| {
            Error::IncompatibleSystem("cannot complete symplectic basis".into())
        })?;
        match missing_side {
            Side::U => u[slot] = Some(w),
            Side::V => v[slot] = Some(w),
        }
    }
    let basis = SymplecticBasis {
        u: u.into_iter().map(Option::unwrap).collect(),
        v: v.into_iter().map(Option::unwrap).collect(),
    };
    if !basis.is_valid() {
        return Err(Error::IncompatibleSystem(
            "slotted vectors do not extend to a symplectic basis".into(),
        ));
    }
    Ok(basis)
}

/// Which side of a symplectic pair a vector occupies.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    U,
    V,
}

/// The constraint system for [`enumerate_symplectic`]: images for subsets
/// of the `u` and `v` basis vectors.
#[derive(Clone, Debug)]
pub struct ConstraintSystem {
    /// (index a, image of u_a)
    pub u_images: Vec<(usize, F2Vector)>,
    /// (index b, image of v_b)
    pub v_images: Vec<(usize, F2Vector)>,
}

impl ConstraintSystem {
    fn validate(&self, basis: &SymplecticBasis) -> Result<(), Error> {
        let n = basis.n();
        let mut items: Vec<(F2Vector, F2Vector)> = Vec::new();
        for (a, img) in &self.u_images {
            if *a >= n {
                return Err(Error::InvalidInput("constraint index out of range".into()));
            }
            items.push((basis.u[*a].clone(), img.clone()));
        }
        for (b, img) in &self.v_images {
            if *b >= n {
                return Err(Error::InvalidInput("constraint index out of range".into()));
            }
            items.push((basis.v[*b].clone(), img.clone()));
        }
        for (x1, y1) in &items {
            for (x2, y2) in &items {
                if symplectic_inner(x1, x2) != symplectic_inner(y1, y2) {
                    return Err(Error::IncompatibleSystem(
                        "images do not preserve the symplectic inner products".into(),
                    ));
                }
            }
        }
        Ok(())
    }
}

/// Number of solutions `2^{alpha(alpha+1)/2}` with `alpha` free vectors.
pub fn solution_count(alpha: usize) -> u128 {
    1u128 << (alpha * (alpha + 1) / 2)
}

/// All symplectic matrices satisfying `u_i F = u'_i (i in I)`,
/// `v_j F = v'_j (j in J)`; exactly `2^{alpha(alpha+1)/2}` of them with
/// `alpha = |I-bar| + |J-bar|`.
///
/// Free-vector choice lists are enumerated by increasing coefficient index
/// over the working basis, so the output order is deterministic.
pub fn enumerate_symplectic(
    basis: &SymplecticBasis,
    constraints: &ConstraintSystem,
    max_solutions: Option<usize>,
) -> Result<Vec<SymplecticMatrix>, Error> {
    if !basis.is_valid() {
        return Err(Error::InvalidInput("not a symplectic basis".into()));
    }
    constraints.validate(basis)?;
    let n = basis.n();
    let dim = 2 * n;
    if constraints.u_images.is_empty() && constraints.v_images.is_empty() {
        return Err(Error::InvalidInput(
            "fully unconstrained enumeration is not supported; constrain at least one vector"
                .into(),
        ));
    }

    let in_i: Vec<bool> = {
        let mut v = vec![false; n];
        for (a, _) in &constraints.u_images {
            v[*a] = true;
        }
        v
    };
    let in_j: Vec<bool> = {
        let mut v = vec![false; n];
        for (b, _) in &constraints.v_images {
            v[*b] = true;
        }
        v
    };
    let ibar: Vec<usize> = (0..n).filter(|&a| !in_i[a]).collect();
    let jbar: Vec<usize> = (0..n).filter(|&b| !in_j[b]).collect();
    let alpha = ibar.len() + jbar.len();

    // Particular solution from the constrained rows alone.
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for (a, img) in &constraints.u_images {
        xs.push(basis.u[*a].clone());
        ys.push(img.clone());
    }
    for (b, img) in &constraints.v_images {
        xs.push(basis.v[*b].clone());
        ys.push(img.clone());
    }
    let f0 = find_symplectic(&xs, &ys)?;

    // Working basis: images of all basis vectors under F0.
    let a_mat = {
        let mut rows: Vec<F2Vector> = basis.u.iter().map(|x| f0.apply(x)).collect();
        rows.extend(basis.v.iter().map(|x| f0.apply(x)));
        F2Matrix::from_rows(rows)
    };
    let a_inv = f2core::inverse(&a_mat).expect("images of a basis stay invertible");

    if alpha == 0 {
        return Ok(vec![f0]);
    }

    // The pairs touched by any freedom span W-perp; free vectors range over
    // its 2^{2L} elements.
    let touched: Vec<usize> = (0..n).filter(|&d| !in_i[d] || !in_j[d]).collect();
    let l = touched.len();
    let wperp_rows: Vec<F2Vector> = touched
        .iter()
        .map(|&d| a_mat.row(d).clone())
        .chain(touched.iter().map(|&d| a_mat.row(n + d).clone()))
        .collect();
    let subspace: Vec<F2Vector> = (0..1u64 << (2 * l))
        .map(|mask| {
            let mut v = F2Vector::zero(dim);
            for (k, row) in wperp_rows.iter().enumerate() {
                if mask >> k & 1 == 1 {
                    v.xor_assign(row);
                }
            }
            v
        })
        .collect();

    // Fixed rows inside W-perp: u_d for constrained d in touched (d in I),
    // v_d likewise; they keep their F0 images.
    let fixed: Vec<(F2Vector, usize)> = touched
        .iter()
        .filter(|&&d| in_i[d])
        .map(|&d| (a_mat.row(d).clone(), d))
        .chain(
            touched
                .iter()
                .filter(|&&d| in_j[d])
                .map(|&d| (a_mat.row(n + d).clone(), n + d)),
        )
        .collect();

    // Free slots in replacement order: free u rows then free v rows.
    #[derive(Clone)]
    struct FreeSlot {
        row: usize,     // row index in the working matrix
        partner: usize, // row index of the symplectic partner
    }
    let free_slots: Vec<FreeSlot> = ibar
        .iter()
        .map(|&d| FreeSlot { row: d, partner: n + d })
        .chain(jbar.iter().map(|&d| FreeSlot { row: n + d, partner: d }))
        .collect();

    // Pre-filter each slot's candidates against the fixed rows.
    let mut base_choices: Vec<Vec<F2Vector>> = Vec::with_capacity(alpha);
    for slot in &free_slots {
        let cands: Vec<F2Vector> = subspace
            .iter()
            .filter(|w| {
                fixed.iter().all(|(row, idx)| {
                    symplectic_inner(w, row) == (*idx == slot.partner)
                })
            })
            .cloned()
            .collect();
        debug_assert_eq!(cands.len(), 1 << alpha);
        base_choices.push(cands);
    }

    let total = solution_count(alpha);
    let cap = max_solutions.map(|c| c as u128).unwrap_or(u128::MAX);
    let emit = total.min(cap);

    let mut out = Vec::with_capacity(emit as usize);
    // Odometer over the nested choices: level ell has 2^{alpha - ell}
    // candidates surviving the filters against earlier picks.
    let mut counters = vec![0usize; alpha];
    'outer: loop {
        let mut picks: Vec<F2Vector> = Vec::with_capacity(alpha);
        let mut pick_rows: Vec<usize> = Vec::with_capacity(alpha);
        let mut valid = true;
        for (ell, slot) in free_slots.iter().enumerate() {
            let cands: Vec<&F2Vector> = base_choices[ell]
                .iter()
                .filter(|w| {
                    picks.iter().zip(&pick_rows).all(|(prev, prev_row)| {
                        symplectic_inner(w, prev) == (*prev_row == slot.partner)
                    })
                })
                .collect();
            debug_assert_eq!(cands.len(), 1 << (alpha - ell));
            if counters[ell] >= cands.len() {
                valid = false;
                break;
            }
            picks.push(cands[counters[ell]].clone());
            pick_rows.push(slot.row);
        }
        if valid {
            let mut b_mat = a_mat.clone();
            for (slot, w) in free_slots.iter().zip(&picks) {
                b_mat.set_row(slot.row, w.clone());
            }
            let f_prime = a_inv.mul(&b_mat);
            let f = f0.mul(&SymplecticMatrix::from_matrix_unchecked(f_prime));
            out.push(f);
            if out.len() as u128 >= emit {
                break 'outer;
            }
        }
        // Advance the odometer (most significant digit first).
        let mut ell = alpha;
        loop {
            if ell == 0 {
                break 'outer;
            }
            ell -= 1;
            counters[ell] += 1;
            if counters[ell] < (1 << (alpha - ell)) {
                break;
            }
            counters[ell] = 0;
        }
    }
    Ok(out)
}

/// An elementary factor of a symplectic decomposition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ElementaryFactor {
    /// `Omega`: full Hadamard.
    Omega,
    /// `L_Q = [[Q, 0], [0, Q^-T]]`: CX ladders and permutations.
    LQ(F2Matrix),
    /// `T_R = [[I, R], [0, I]]` for symmetric R: P and CZ gates.
    TR(F2Matrix),
    /// `G_t`: Hadamard on the first t qubits.
    Gk(usize),
}

impl ElementaryFactor {
    pub fn matrix(&self, n: usize) -> F2Matrix {
        match self {
            ElementaryFactor::Omega => omega(n),
            ElementaryFactor::LQ(q) => {
                let qinvt = f2core::inverse(q).expect("L_Q needs invertible Q").transpose();
                F2Matrix::from_fn(2 * n, 2 * n, |i, j| {
                    if i < n && j < n {
                        q.get(i, j)
                    } else if i >= n && j >= n {
                        qinvt.get(i - n, j - n)
                    } else {
                        false
                    }
                })
            }
            ElementaryFactor::TR(r) => F2Matrix::from_fn(2 * n, 2 * n, |i, j| {
                if i == j {
                    true
                } else if i < n && j >= n {
                    r.get(i, j - n)
                } else {
                    false
                }
            }),
            ElementaryFactor::Gk(t) => F2Matrix::from_fn(2 * n, 2 * n, |i, j| {
                let (bi, qi) = (i >= n, i % n);
                let (bj, qj) = (j >= n, j % n);
                if qi != qj {
                    false
                } else if qi < *t {
                    bi != bj
                } else {
                    bi == bj
                }
            }),
        }
    }
}

/// Decompose a symplectic matrix into elementary factors whose product (in
/// list order) reproduces it: `F = L_Q1 . Omega . T_R1 . G_k . T_R2 . L_Q2`,
/// with identity factors dropped and shortcuts for matrices that are already
/// of a single elementary shape.
pub fn decompose(f: &SymplecticMatrix) -> Vec<ElementaryFactor> {
    let n = f.num_qubits();
    let (a, b, c, _d) = f.blocks();

    let mut factors: Vec<ElementaryFactor> = Vec::new();
    if c.is_zero() {
        // F = L_A T_{A^-1 B}
        factors.push(ElementaryFactor::LQ(a.clone()));
        let r = f2core::inverse(&a).expect("block A invertible when C = 0").mul(&b);
        if !r.is_zero() {
            factors.push(ElementaryFactor::TR(r));
        }
    } else {
        let k = f2core::rank(&a);
        // Row transform M and column transform N with M A N = diag(I_k, 0).
        let (m, nmat) = diagonalize_rank_normal_form(&a, k);
        let mut m = m;
        let n_inv_t = f2core::inverse(&nmat).expect("N invertible").transpose();
        let bp = m.mul(&b).mul(&n_inv_t);
        // bp = [[R_k, E'], [0, B_{n-k}]]
        let rows_hi: Vec<usize> = (k..n).collect();
        let cols_hi: Vec<usize> = (k..n).collect();
        let b_lower = bp.select(&rows_hi, &cols_hi);
        let q_nk = f2core::inverse(&b_lower).expect("lower-right block of B' is invertible");
        // M <- diag(I_k, Q_{n-k}) M
        let diag_q = F2Matrix::from_fn(n, n, |i, j| {
            if i < k || j < k {
                i == j
            } else {
                q_nk.get(i - k, j - k)
            }
        });
        m = diag_q.mul(&m);
        let bp = m.mul(&b).mul(&n_inv_t);
        // M <- [[I_k, E'], [0, I]] M
        let e_block = bp.select(&(0..k).collect::<Vec<_>>(), &cols_hi);
        let shear = F2Matrix::from_fn(n, n, |i, j| {
            if i == j {
                true
            } else if i < k && j >= k {
                e_block.get(i, j - k)
            } else {
                false
            }
        });
        m = shear.mul(&m);
        let bp = m.mul(&b).mul(&n_inv_t);
        let r_k = bp.select(&(0..k).collect::<Vec<_>>(), &(0..k).collect::<Vec<_>>());
        debug_assert!(r_k.is_symmetric());
        let r2 = F2Matrix::from_fn(n, n, |i, j| i < k && j < k && r_k.get(i, j));

        let q1 = f2core::inverse(&m).expect("row transform invertible");
        let q2 = f2core::inverse(&nmat).expect("column transform invertible");

        // G := L_{Q1^-1} F L_{Q2^-1} T_{R2} G_k Omega = [[I, 0], [R1, I]]
        let lq1_inv = ElementaryFactor::LQ(m.clone()).matrix(n);
        let lq2_inv = ElementaryFactor::LQ(nmat.clone()).matrix(n);
        let tr2 = ElementaryFactor::TR(r2.clone()).matrix(n);
        let gk = ElementaryFactor::Gk(k).matrix(n);
        let om = omega(n);
        let g = lq1_inv
            .mul(f.matrix())
            .mul(&lq2_inv)
            .mul(&tr2)
            .mul(&gk)
            .mul(&om);
        let lo: Vec<usize> = (0..n).collect();
        let hi: Vec<usize> = (n..2 * n).collect();
        let r1 = g.select(&hi, &lo);
        debug_assert!(r1.is_symmetric());
        debug_assert_eq!(g.select(&lo, &lo), F2Matrix::identity(n));
        debug_assert!(g.select(&lo, &hi).is_zero());

        if q1 != F2Matrix::identity(n) {
            factors.push(ElementaryFactor::LQ(q1));
        }
        factors.push(ElementaryFactor::Omega);
        if !r1.is_zero() {
            factors.push(ElementaryFactor::TR(r1));
        }
        if k > 0 {
            factors.push(ElementaryFactor::Gk(k));
        }
        if !r2.is_zero() {
            factors.push(ElementaryFactor::TR(r2));
        }
        if q2 != F2Matrix::identity(n) {
            factors.push(ElementaryFactor::LQ(q2));
        }
    }
    let factors: Vec<ElementaryFactor> = factors
        .into_iter()
        .filter(|f| match f {
            ElementaryFactor::LQ(q) => *q != F2Matrix::identity(q.rows()),
            ElementaryFactor::TR(r) => !r.is_zero(),
            ElementaryFactor::Gk(t) => *t > 0,
            ElementaryFactor::Omega => true,
        })
        .collect();
    debug_assert_eq!(&recompose(&factors, n), f.matrix());
    factors
}

/// Product of factor matrices in list order.
pub fn recompose(factors: &[ElementaryFactor], n: usize) -> F2Matrix {
    let mut acc = F2Matrix::identity(2 * n);
    for f in factors {
        acc = acc.mul(&f.matrix(n));
    }
    acc
}

/// Row transform M and column transform N with `M A N = diag(I_k, 0)`.
fn diagonalize_rank_normal_form(a: &F2Matrix, k: usize) -> (F2Matrix, F2Matrix) {
    let n = a.rows();
    // Track row ops in M (M A after each step) and column ops in N.
    let mut work = a.clone();
    let mut m = F2Matrix::identity(n);
    let mut nmat = F2Matrix::identity(n);
    let mut r = 0;
    for c in 0..n {
        if r == k {
            break;
        }
        let Some(p) = (r..n).find(|&i| work.get(i, c)) else {
            continue;
        };
        if p != r {
            // Swap rows in work and M.
            let (wr, wp) = (work.row(r).clone(), work.row(p).clone());
            work.set_row(r, wp);
            work.set_row(p, wr);
            let (mr, mp) = (m.row(r).clone(), m.row(p).clone());
            m.set_row(r, mp);
            m.set_row(p, mr);
        }
        let pivot_row = work.row(r).clone();
        let m_pivot = m.row(r).clone();
        for i in 0..n {
            if i != r && work.get(i, c) {
                work.row_mut(i).xor_assign(&pivot_row);
                m.row_mut(i).xor_assign(&m_pivot);
            }
        }
        // Move pivot column c to position r (column swap), then clear the
        // rest of row r by column ops.
        if c != r {
            for i in 0..n {
                let (vi, vc) = (work.get(i, r), work.get(i, c));
                work.set(i, r, vc);
                work.set(i, c, vi);
            }
            for i in 0..n {
                let (vi, vc) = (nmat.get(i, r), nmat.get(i, c));
                nmat.set(i, r, vc);
                nmat.set(i, c, vi);
            }
        }
        r += 1;
    }
    // Clear residual entries right of the identity block with column ops.
    for row in 0..k {
        for c in k..n {
            if work.get(row, c) {
                // col_c += col_row
                for i in 0..n {
                    let v = work.get(i, c) ^ work.get(i, row);
                    work.set(i, c, v);
                }
                for i in 0..n {
                    let v = nmat.get(i, c) ^ nmat.get(i, row);
                    nmat.set(i, c, v);
                }
            }
        }
    }
    debug_assert!({
        let expect = F2Matrix::from_fn(n, n, |i, j| i == j && i < k);
        m.mul(a).mul(&nmat) == expect
    });
    (m, nmat)
}

/// A quantum gate in an emitted circuit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Gate {
    H(usize),
    P(usize),
    Z(usize),
    X(usize),
    Y(usize),
    CX(usize, usize),
    CZ(usize, usize),
    Swap(usize, usize),
    /// Value of qubit q moves to position perm[q].
    Perm(Vec<usize>),
    T(usize),
    Tdg(usize),
}

impl Gate {
    pub fn name(&self) -> &'static str {
        match self {
            Gate::H(_) => "H",
            Gate::P(_) => "P",
            Gate::Z(_) => "Z",
            Gate::X(_) => "X",
            Gate::Y(_) => "Y",
            Gate::CX(..) => "CX",
            Gate::CZ(..) => "CZ",
            Gate::Swap(..) => "SWAP",
            Gate::Perm(_) => "PERM",
            Gate::T(_) => "T",
            Gate::Tdg(_) => "Tdg",
        }
    }

    pub fn qubits(&self) -> Vec<usize> {
        match self {
            Gate::H(q) | Gate::P(q) | Gate::Z(q) | Gate::X(q) | Gate::Y(q) | Gate::T(q)
            | Gate::Tdg(q) => vec![*q],
            Gate::CX(a, b) | Gate::CZ(a, b) | Gate::Swap(a, b) => vec![*a, *b],
            Gate::Perm(p) => p.clone(),
        }
    }

    /// Qubits the gate actually disturbs (fixed points of PERM excluded).
    fn active_qubits(&self) -> Vec<usize> {
        match self {
            Gate::Perm(p) => p
                .iter()
                .enumerate()
                .filter(|(q, &t)| *q != t)
                .map(|(q, _)| q)
                .collect(),
            _ => self.qubits(),
        }
    }

    pub fn is_two_qubit(&self) -> bool {
        matches!(self, Gate::CX(..) | Gate::CZ(..) | Gate::Swap(..))
    }
}

/// An ordered gate list; application order is list order, so the operator
/// is the product of gate matrices in reverse list order.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Circuit {
    n: usize,
    gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(n: usize) -> Self {
        Circuit { n, gates: Vec::new() }
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn push(&mut self, gate: Gate) {
        assert!(gate.qubits().iter().all(|&q| q < self.n));
        self.gates.push(gate);
    }

    pub fn extend(&mut self, other: &Circuit) {
        assert_eq!(self.n, other.n);
        self.gates.extend(other.gates.iter().cloned());
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn two_qubit_count(&self) -> usize {
        self.gates.iter().filter(|g| g.is_two_qubit()).count()
    }

    /// Greedy-stage circuit depth: gates on disjoint qubits share a stage.
    pub fn depth(&self) -> usize {
        let mut ready = vec![0usize; self.n];
        let mut depth = 0;
        for g in &self.gates {
            let qs = g.active_qubits();
            if qs.is_empty() {
                continue;
            }
            let stage = qs.iter().map(|&q| ready[q]).max().unwrap() + 1;
            for q in qs {
                ready[q] = stage;
            }
            depth = depth.max(stage);
        }
        depth
    }
}

impl Serialize for Circuit {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeSeq;
        let mut seq = serializer.serialize_seq(Some(self.gates.len()))?;
        for g in &self.gates {
            seq.serialize_element(&serde_json::json!({
                "gate": g.name(),
                "qubits": g.qubits(),
            }))?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for Circuit {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Entry {
            gate: String,
            qubits: Vec<usize>,
        }
        let entries: Vec<Entry> = Vec::deserialize(deserializer)?;
        let mut max_q = 0usize;
        let mut gates = Vec::new();
        for e in &entries {
            for &q in &e.qubits {
                max_q = max_q.max(q + 1);
            }
            let gate = match (e.gate.as_str(), e.qubits.as_slice()) {
                ("H", [q]) => Gate::H(*q),
                ("P", [q]) => Gate::P(*q),
                ("Z", [q]) => Gate::Z(*q),
                ("X", [q]) => Gate::X(*q),
                ("Y", [q]) => Gate::Y(*q),
                ("T", [q]) => Gate::T(*q),
                ("Tdg", [q]) => Gate::Tdg(*q),
                ("CX", [a, b]) => Gate::CX(*a, *b),
                ("CZ", [a, b]) => Gate::CZ(*a, *b),
                ("SWAP", [a, b]) => Gate::Swap(*a, *b),
                ("PERM", p) => Gate::Perm(p.to_vec()),
                (name, qs) => {
                    return Err(D::Error::custom(format!(
                        "unknown gate {name} on {} qubits",
                        qs.len()
                    )))
                }
            };
            gates.push(gate);
        }
        Ok(Circuit { n: max_q, gates })
    }
}

impl Circuit {
    /// Re-target a deserialized circuit to an explicit qubit count.
    pub fn with_qubits(mut self, n: usize) -> Result<Self, Error> {
        if self.gates.iter().any(|g| g.qubits().iter().any(|&q| q >= n)) {
            return Err(Error::InvalidInput("gate qubit index out of range".into()));
        }
        self.n = n;
        Ok(self)
    }
}

/// Emit the circuit of a single elementary factor.
///
/// Omega and G_t produce Hadamard layers; T_R produces P gates on the
/// diagonal support and CZ gates on the off-diagonal support; L_Q produces
/// an inverse permutation followed by the CX ladders of its LU factors.
pub fn factor_to_circuit(factor: &ElementaryFactor, n: usize) -> Circuit {
    let mut c = Circuit::new(n);
    match factor {
        ElementaryFactor::Omega => {
            for q in 0..n {
                c.push(Gate::H(q));
            }
        }
        ElementaryFactor::Gk(t) => {
            for q in 0..*t {
                c.push(Gate::H(q));
            }
        }
        ElementaryFactor::TR(r) => {
            for i in 0..n {
                if r.get(i, i) {
                    c.push(Gate::P(i));
                }
                for j in i + 1..n {
                    if r.get(i, j) {
                        c.push(Gate::CZ(i, j));
                    }
                }
            }
        }
        ElementaryFactor::LQ(q) => {
            let (perm, l, u) = f2core::lu_decompose(q).expect("L_Q requires invertible Q");
            if perm.iter().enumerate().any(|(i, &p)| i != p) {
                // v -> v P^T sends the value of qubit perm[j] to position j.
                let mut moves = vec![0usize; n];
                for (j, &src) in perm.iter().enumerate() {
                    moves[src] = j;
                }
                c.push(Gate::Perm(moves));
            }
            // CX ladders: L with controls ascending, U with controls
            // descending, so every control fires before it is overwritten.
            for ctrl in 0..n {
                for tgt in 0..ctrl {
                    if l.get(ctrl, tgt) {
                        c.push(Gate::CX(ctrl, tgt));
                    }
                }
            }
            for ctrl in (0..n).rev() {
                for tgt in ctrl + 1..n {
                    if u.get(ctrl, tgt) {
                        c.push(Gate::CX(ctrl, tgt));
                    }
                }
            }
        }
    }
    c
}

/// Concatenate factor circuits in factor order; the factor product in list
/// order is the induced symplectic matrix.
pub fn factors_to_circuit(factors: &[ElementaryFactor], n: usize) -> Circuit {
    let mut c = Circuit::new(n);
    for f in factors {
        c.extend(&factor_to_circuit(f, n));
    }
    c
}

/// Exact conjugation of Paulis by a Clifford circuit, tracking phases.
///
/// Maintains the images of each `X_q` and `Z_q`; the image of an arbitrary
/// Pauli is assembled as the phase-correct product of generator images.
#[derive(Clone, Debug)]
pub struct CliffordConjugator {
    n: usize,
    x_images: Vec<PauliOperator>,
    z_images: Vec<PauliOperator>,
}

impl CliffordConjugator {
    pub fn identity(n: usize) -> Self {
        CliffordConjugator {
            n,
            x_images: (0..n).map(|q| PauliOperator::single_x(n, q)).collect(),
            z_images: (0..n).map(|q| PauliOperator::single_z(n, q)).collect(),
        }
    }

    pub fn from_circuit(circuit: &Circuit) -> Self {
        let mut c = Self::identity(circuit.num_qubits());
        for g in circuit.gates() {
            c.append(g);
        }
        c
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    /// Apply one more gate: images become `g (image) g^dagger`.
    pub fn append(&mut self, gate: &Gate) {
        for img in self.x_images.iter_mut().chain(self.z_images.iter_mut()) {
            *img = conjugate_by_gate(img, gate);
        }
    }

    /// `U P U^dagger` with exact phase.
    pub fn conjugate(&self, p: &PauliOperator) -> PauliOperator {
        assert_eq!(p.num_qubits(), self.n);
        let mut out = PauliOperator::identity(self.n);
        // E(a, b) = i^{-ab^T} prod_q X_q^{a_q} prod_q Z_q^{b_q}; conjugation
        // is a homomorphism, so map each factor and reassemble.
        let mut ab = 0i64;
        for q in 0..self.n {
            if p.x_part().get(q) {
                out = out.multiply(&self.x_images[q]);
            }
        }
        for q in 0..self.n {
            if p.z_part().get(q) {
                out = out.multiply(&self.z_images[q]);
                if p.x_part().get(q) {
                    ab += 1;
                }
            }
        }
        let kappa = (out.kappa() as i64 + p.kappa() as i64 + ab).rem_euclid(4) as u8;
        out.with_kappa(kappa)
    }

    /// The induced symplectic matrix (phases discarded).
    pub fn symplectic(&self) -> SymplecticMatrix {
        let rows: Vec<F2Vector> = self
            .x_images
            .iter()
            .chain(self.z_images.iter())
            .map(PauliOperator::vector)
            .collect();
        SymplecticMatrix::from_matrix_unchecked(F2Matrix::from_rows(rows))
    }
}

/// Conjugate a Pauli by a single Clifford gate with exact phase tracking.
pub fn conjugate_by_gate(p: &PauliOperator, gate: &Gate) -> PauliOperator {
    let n = p.num_qubits();
    let mut a = p.x_part().clone();
    let mut b = p.z_part().clone();
    let mut kappa = p.kappa() as i64;
    match gate {
        Gate::H(q) => {
            let (aq, bq) = (a.get(*q), b.get(*q));
            if aq && bq {
                kappa += 2;
            }
            a.set(*q, bq);
            b.set(*q, aq);
        }
        Gate::P(q) => {
            let (aq, bq) = (a.get(*q), b.get(*q));
            if aq && bq {
                kappa += 2;
            }
            b.set(*q, aq ^ bq);
        }
        Gate::Z(q) => {
            if a.get(*q) {
                kappa += 2;
            }
        }
        Gate::X(q) => {
            if b.get(*q) {
                kappa += 2;
            }
        }
        Gate::Y(q) => {
            if a.get(*q) ^ b.get(*q) {
                kappa += 2;
            }
        }
        Gate::CX(c, t) => {
            let (ac, bc) = (a.get(*c), b.get(*c));
            let (at, bt) = (a.get(*t), b.get(*t));
            if ac && bt && !(at ^ bc) {
                kappa += 2;
            }
            a.set(*t, at ^ ac);
            b.set(*c, bc ^ bt);
        }
        Gate::CZ(c, t) => {
            let (ac, bc) = (a.get(*c), b.get(*c));
            let (at, bt) = (a.get(*t), b.get(*t));
            if ac && at && (bc ^ bt) {
                kappa += 2;
            }
            b.set(*c, bc ^ at);
            b.set(*t, bt ^ ac);
        }
        Gate::Swap(x, y) => {
            let (ax, bx) = (a.get(*x), b.get(*x));
            let (ay, by) = (a.get(*y), b.get(*y));
            a.set(*x, ay);
            a.set(*y, ax);
            b.set(*x, by);
            b.set(*y, bx);
        }
        Gate::Perm(perm) => {
            let mut na = F2Vector::zero(n);
            let mut nb = F2Vector::zero(n);
            for q in 0..n {
                if a.get(q) {
                    na.set(perm[q], true);
                }
                if b.get(q) {
                    nb.set(perm[q], true);
                }
            }
            a = na;
            b = nb;
        }
        Gate::T(_) | Gate::Tdg(_) => {
            panic!("T gates are not Clifford; use the qfd module for their conjugation")
        }
    }
    PauliOperator::new(a, b, kappa.rem_euclid(4) as u8)
}
