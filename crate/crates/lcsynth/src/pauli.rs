//! The n-qubit Heisenberg-Weyl group with exact phase tracking.
//!
//! Operators are stored as `i^kappa E(a, b)` where `E(a, b)` is the
//! Hermitian Pauli `i^{a b^T} X^{a_1}Z^{b_1} x ... x X^{a_n}Z^{b_n}` and
//! `kappa` lives mod 4. All group arithmetic is integer bookkeeping; no
//! floating point enters until a value is handed to the dense oracle.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;

use crate::f2core::F2Vector;
use crate::Error;

/// `i^kappa E(a, b)` on `n = a.len()` qubits.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PauliOperator {
    a: F2Vector,
    b: F2Vector,
    kappa: u8,
}

impl PauliOperator {
    pub fn identity(n: usize) -> Self {
        PauliOperator {
            a: F2Vector::zero(n),
            b: F2Vector::zero(n),
            kappa: 0,
        }
    }

    pub fn new(a: F2Vector, b: F2Vector, kappa: u8) -> Self {
        assert_eq!(a.len(), b.len());
        PauliOperator {
            a,
            b,
            kappa: kappa % 4,
        }
    }

    /// Hermitian `E(a, b)` itself.
    pub fn hermitian(a: F2Vector, b: F2Vector) -> Self {
        Self::new(a, b, 0)
    }

    /// Accepts integer vectors and reduces them to the binary form, absorbing
    /// the sign changes into `kappa`. The exponent of `i` changes by
    /// `a b^T - a0 b0^T` when `a = a0 + 2a1 + ...` is reduced mod 2.
    pub fn from_integer_vectors(a: &[i64], b: &[i64], kappa: i64) -> Self {
        assert_eq!(a.len(), b.len());
        let n = a.len();
        let mut a0 = F2Vector::zero(n);
        let mut b0 = F2Vector::zero(n);
        let mut full = 0i64;
        let mut reduced = 0i64;
        for i in 0..n {
            a0.set(i, a[i].rem_euclid(2) == 1);
            b0.set(i, b[i].rem_euclid(2) == 1);
            full += a[i] * b[i];
            reduced += (a[i].rem_euclid(2)) * (b[i].rem_euclid(2));
        }
        let kappa = (kappa + full - reduced).rem_euclid(4) as u8;
        PauliOperator { a: a0, b: b0, kappa }
    }

    pub fn single_x(n: usize, qubit: usize) -> Self {
        Self::hermitian(F2Vector::unit(n, qubit), F2Vector::zero(n))
    }

    pub fn single_z(n: usize, qubit: usize) -> Self {
        Self::hermitian(F2Vector::zero(n), F2Vector::unit(n, qubit))
    }

    pub fn single_y(n: usize, qubit: usize) -> Self {
        Self::hermitian(F2Vector::unit(n, qubit), F2Vector::unit(n, qubit))
    }

    pub fn num_qubits(&self) -> usize {
        self.a.len()
    }

    pub fn x_part(&self) -> &F2Vector {
        &self.a
    }

    pub fn z_part(&self) -> &F2Vector {
        &self.b
    }

    /// Exponent of the leading `i`, mod 4.
    pub fn kappa(&self) -> u8 {
        self.kappa
    }

    pub fn with_kappa(&self, kappa: u8) -> Self {
        PauliOperator {
            a: self.a.clone(),
            b: self.b.clone(),
            kappa: kappa % 4,
        }
    }

    /// The row vector `[a, b]` in F2^{2n}.
    pub fn vector(&self) -> F2Vector {
        self.a.concat(&self.b)
    }

    /// Inverse map of [`PauliOperator::vector`], with `kappa = 0`.
    pub fn from_vector(v: &F2Vector) -> Self {
        assert!(v.len() % 2 == 0);
        let n = v.len() / 2;
        let a = v.select(&(0..n).collect::<Vec<_>>());
        let b = v.select(&(n..2 * n).collect::<Vec<_>>());
        Self::hermitian(a, b)
    }

    pub fn is_identity(&self) -> bool {
        self.a.is_zero() && self.b.is_zero() && self.kappa == 0
    }

    /// Hermitian up to sign (kappa even).
    pub fn is_hermitian(&self) -> bool {
        self.kappa % 2 == 0
    }

    /// The +1/-1 sign of a Hermitian operator.
    pub fn sign(&self) -> i8 {
        assert!(self.is_hermitian(), "sign is defined for Hermitian operators");
        if self.kappa == 0 {
            1
        } else {
            -1
        }
    }

    pub fn adjoint(&self) -> Self {
        PauliOperator {
            a: self.a.clone(),
            b: self.b.clone(),
            kappa: (4 - self.kappa) % 4,
        }
    }

    pub fn negate(&self) -> Self {
        self.with_kappa(self.kappa + 2)
    }

    /// Number of qubits acted on non-trivially.
    pub fn weight(&self) -> usize {
        self.a.or(&self.b).weight()
    }

    pub fn commutes(&self, other: &PauliOperator) -> bool {
        !symplectic_inner(&self.vector(), &other.vector())
    }

    /// `self * other` with the phase tracked exactly:
    /// `E(a,b) E(c,d) = i^{b c^T - a d^T} E(a + c, b + d)` followed by the
    /// reduction of the integer-vector sum to binary form.
    pub fn multiply(&self, other: &PauliOperator) -> PauliOperator {
        assert_eq!(self.num_qubits(), other.num_qubits());
        let (a, b) = (&self.a, &self.b);
        let (c, d) = (&other.a, &other.b);
        let bc = b.overlap(c) as i64;
        let ad = a.overlap(d) as i64;
        let ac = a.xor(c);
        let bd = b.xor(d);
        let cross = (ac.overlap(&b.and(d)) + bd.overlap(&a.and(c))) as i64;
        let kappa = (self.kappa as i64 + other.kappa as i64 + (bc - ad) + 2 * cross).rem_euclid(4);
        PauliOperator {
            a: ac,
            b: bd,
            kappa: kappa as u8,
        }
    }

    /// Conjugation by another Pauli: `Q P Q^dagger = (-1)^{<P,Q>} P`.
    pub fn conjugate_by_pauli(&self, q: &PauliOperator) -> PauliOperator {
        if symplectic_inner(&self.vector(), &q.vector()) {
            self.negate()
        } else {
            self.clone()
        }
    }

    /// Parse a Pauli string: optional sign prefix (`+`, `-`, `+i`, `-i`,
    /// `i`) followed by one character per qubit in `{I, X, Y, Z}`.
    pub fn parse(s: &str) -> Result<Self, Error> {
        let s = s.trim();
        let (kappa, body) = if let Some(rest) = s.strip_prefix("+i").or_else(|| s.strip_prefix("i")) {
            (1u8, rest)
        } else if let Some(rest) = s.strip_prefix("-i") {
            (3u8, rest)
        } else if let Some(rest) = s.strip_prefix('+') {
            (0u8, rest)
        } else if let Some(rest) = s.strip_prefix('-') {
            (2u8, rest)
        } else {
            (0u8, s)
        };
        let body = body.trim();
        let n = body.chars().count();
        let mut a = F2Vector::zero(n);
        let mut b = F2Vector::zero(n);
        for (i, c) in body.chars().enumerate() {
            match c {
                'I' => {}
                'X' => a.set(i, true),
                'Z' => b.set(i, true),
                'Y' => {
                    a.set(i, true);
                    b.set(i, true);
                }
                _ => return Err(Error::Parse(format!("invalid Pauli character {c:?}"))),
            }
        }
        Ok(PauliOperator { a, b, kappa })
    }
}

impl fmt::Debug for PauliOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prefix = match self.kappa {
            0 => "+",
            1 => "+i",
            2 => "-",
            _ => "-i",
        };
        write!(f, "{prefix}")?;
        for i in 0..self.num_qubits() {
            let c = match (self.a.get(i), self.b.get(i)) {
                (false, false) => 'I',
                (true, false) => 'X',
                (false, true) => 'Z',
                (true, true) => 'Y',
            };
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl fmt::Display for PauliOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// The standard symplectic inner product `a' b^T + b' a^T` mod 2 on
/// F2^{2n}, with the form `Omega = [[0, I], [I, 0]]`.
pub fn symplectic_inner(u: &F2Vector, v: &F2Vector) -> bool {
    assert_eq!(u.len(), v.len());
    assert!(u.len() % 2 == 0, "symplectic vectors have even length");
    let n = u.len() / 2;
    let idx_a: Vec<usize> = (0..n).collect();
    let idx_b: Vec<usize> = (n..2 * n).collect();
    let (ua, ub) = (u.select(&idx_a), u.select(&idx_b));
    let (va, vb) = (v.select(&idx_a), v.select(&idx_b));
    va.dot(&ub) ^ vb.dot(&ua)
}

/// An exact scalar `2^{pow2/2} * sum_k coeffs[k] xi^k` with
/// `xi = exp(2 pi i / 2^level)`.
///
/// Every coefficient arising from Clifford or QFD conjugation identities is
/// of this shape, so sums of Paulis can be carried exactly and only the
/// oracle converts to floating point.
#[derive(Clone, Debug)]
pub struct Cyclotomic {
    level: u32,
    pow2: i32,
    coeffs: Vec<i64>,
}

impl Cyclotomic {
    pub fn zero() -> Self {
        Cyclotomic {
            level: 1,
            pow2: 0,
            coeffs: vec![0, 0],
        }
    }

    pub fn one() -> Self {
        Self::root(1, 0)
    }

    /// `xi^k` at the given level.
    pub fn root(level: u32, k: i64) -> Self {
        let order = 1usize << level;
        let mut coeffs = vec![0i64; order];
        coeffs[k.rem_euclid(order as i64) as usize] = 1;
        Cyclotomic {
            level,
            pow2: 0,
            coeffs,
        }
    }

    /// `i^kappa` as a cyclotomic value.
    pub fn phase_i(kappa: i64) -> Self {
        Self::root(2, kappa)
    }

    pub fn from_int(v: i64) -> Self {
        let mut c = Self::one();
        c.coeffs[0] = v;
        c
    }

    pub fn is_zero(&self) -> bool {
        // {1, xi, ..., xi^{N/2-1}} is a Q-basis (minimal polynomial
        // x^{N/2} + 1), so the value vanishes iff the folded coefficients do.
        let half = self.coeffs.len() / 2;
        if half == 0 {
            return self.coeffs.iter().all(|&c| c == 0);
        }
        (0..half).all(|k| self.coeffs[k] == self.coeffs[k + half])
    }

    /// Multiply by `2^{k/2}` (k may be negative).
    pub fn scale_sqrt2_pow(&self, k: i32) -> Self {
        let mut out = self.clone();
        out.pow2 += k;
        out
    }

    fn raise_level(&self, level: u32) -> Self {
        assert!(level >= self.level);
        let shift = 1usize << (level - self.level);
        let order = 1usize << level;
        let mut coeffs = vec![0i64; order];
        for (k, &c) in self.coeffs.iter().enumerate() {
            coeffs[k * shift] = c;
        }
        Cyclotomic {
            level,
            pow2: self.pow2,
            coeffs,
        }
    }

    pub fn add(&self, other: &Cyclotomic) -> Cyclotomic {
        // Align the sqrt(2) powers by folding sqrt2 = xi_8 - xi_8^3 into the
        // coefficients of the operand with the larger exponent; that pushes
        // the operand to level >= 3, so re-align the levels afterwards.
        let level = if self.pow2 != other.pow2 {
            self.level.max(other.level).max(3)
        } else {
            self.level.max(other.level)
        };
        let mut a = self.raise_level(level);
        let mut b = other.raise_level(level);
        while a.pow2 > b.pow2 {
            a = a.mul_sqrt2_into_coeffs();
        }
        while b.pow2 > a.pow2 {
            b = b.mul_sqrt2_into_coeffs();
        }
        debug_assert_eq!(a.level, b.level);
        let mut coeffs = a.coeffs.clone();
        for (c, d) in coeffs.iter_mut().zip(&b.coeffs) {
            *c += d;
        }
        Cyclotomic {
            level: a.level,
            pow2: a.pow2,
            coeffs,
        }
    }

    /// Multiply the polynomial part by sqrt(2) and decrement pow2, keeping
    /// the value fixed. Requires level >= 3 (sqrt2 = xi_8 - xi_8^3).
    fn mul_sqrt2_into_coeffs(&self) -> Cyclotomic {
        let s = self.raise_level(self.level.max(3));
        let order = 1usize << s.level;
        let e = order / 8;
        let mut coeffs = vec![0i64; order];
        for (k, &c) in s.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            add_root(&mut coeffs, k + e, c);
            add_root(&mut coeffs, k + 3 * e, -c);
        }
        Cyclotomic {
            level: s.level,
            pow2: s.pow2 - 1,
            coeffs,
        }
    }

    pub fn mul(&self, other: &Cyclotomic) -> Cyclotomic {
        let level = self.level.max(other.level);
        let a = self.raise_level(level);
        let b = other.raise_level(level);
        let order = 1usize << level;
        let mut coeffs = vec![0i64; order];
        for (k1, &c1) in a.coeffs.iter().enumerate() {
            if c1 == 0 {
                continue;
            }
            for (k2, &c2) in b.coeffs.iter().enumerate() {
                if c2 == 0 {
                    continue;
                }
                add_root(&mut coeffs, k1 + k2, c1 * c2);
            }
        }
        Cyclotomic {
            level,
            pow2: a.pow2 + b.pow2,
            coeffs,
        }
    }

    pub fn negate(&self) -> Cyclotomic {
        let mut out = self.clone();
        for c in out.coeffs.iter_mut() {
            *c = -*c;
        }
        out
    }

    /// Canonical form: fold `xi^{k + N/2} = -xi^k` into the lower half and
    /// strip trailing factors of 2 into `pow2`. Zero gets `pow2 = 0`.
    fn canonical(&self) -> (u32, i32, Vec<i64>) {
        let order = 1usize << self.level;
        let mut folded = vec![0i64; order / 2];
        for (k, &c) in self.coeffs.iter().enumerate() {
            if k < order / 2 {
                folded[k] += c;
            } else {
                folded[k - order / 2] -= c;
            }
        }
        if folded.iter().all(|&c| c == 0) {
            return (1, 0, vec![0]);
        }
        // Reduce to the smallest level representing the same value: entries
        // only at even positions can drop a level.
        let mut level = self.level;
        while level > 1 && folded.iter().skip(1).step_by(2).all(|&c| c == 0) {
            folded = folded.iter().step_by(2).copied().collect();
            level -= 1;
        }
        let mut pow2 = self.pow2;
        while folded.iter().all(|&c| c % 2 == 0) {
            for c in folded.iter_mut() {
                *c /= 2;
            }
            pow2 += 2;
        }
        (level, pow2, folded)
    }

    pub fn to_complex(&self) -> Complex64 {
        let order = 1usize << self.level;
        let mut acc = Complex64::new(0.0, 0.0);
        for (k, &c) in self.coeffs.iter().enumerate() {
            if c != 0 {
                let angle = 2.0 * std::f64::consts::PI * k as f64 / order as f64;
                acc += Complex64::from_polar(1.0, angle) * c as f64;
            }
        }
        acc * 2f64.powf(self.pow2 as f64 / 2.0)
    }
}

fn add_root(coeffs: &mut [i64], k: usize, c: i64) {
    let order = coeffs.len();
    coeffs[k % order] += c;
}

impl PartialEq for Cyclotomic {
    fn eq(&self, other: &Self) -> bool {
        // sqrt(2) parity must agree once canonicalized; values with odd
        // pow2 difference can still coincide (sqrt2 folds into level-3
        // coefficients), so normalize through mul_sqrt2_into_coeffs.
        let a = self.canonical();
        let b = other.canonical();
        if a == b {
            return true;
        }
        if (a.1 - b.1).rem_euclid(2) == 1 {
            let lifted = if a.1 > b.1 {
                (self.raise_level(3).mul_sqrt2_into_coeffs().canonical(), b)
            } else {
                (a, other.raise_level(3).mul_sqrt2_into_coeffs().canonical())
            };
            return lifted.0 == lifted.1;
        }
        false
    }
}

impl Eq for Cyclotomic {}

/// A formal complex combination of Hermitian Paulis, normalized so each
/// `(a, b)` key appears once.
#[derive(Clone, Debug, PartialEq)]
pub struct PauliSum {
    n: usize,
    terms: BTreeMap<(F2Vector, F2Vector), Cyclotomic>,
}

impl PauliSum {
    pub fn zero(n: usize) -> Self {
        PauliSum {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn from_operator(p: &PauliOperator) -> Self {
        let mut s = Self::zero(p.num_qubits());
        s.push(Cyclotomic::one(), p);
        s
    }

    /// Add `coeff * p`, folding p's phase into the coefficient.
    pub fn push(&mut self, coeff: Cyclotomic, p: &PauliOperator) {
        assert_eq!(p.num_qubits(), self.n);
        let c = coeff.mul(&Cyclotomic::phase_i(p.kappa() as i64));
        let key = (p.x_part().clone(), p.z_part().clone());
        let cur = self.terms.remove(&key).unwrap_or_else(Cyclotomic::zero);
        let new = cur.add(&c);
        if !new.is_zero() {
            self.terms.insert(key, new);
        }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&(F2Vector, F2Vector), &Cyclotomic)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, a: &F2Vector, b: &F2Vector) -> Cyclotomic {
        self.terms
            .get(&(a.clone(), b.clone()))
            .cloned()
            .unwrap_or_else(Cyclotomic::zero)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> PauliOperator {
        PauliOperator::parse("X").unwrap()
    }

    fn z() -> PauliOperator {
        PauliOperator::parse("Z").unwrap()
    }

    #[test]
    fn symplectic_inner_examples() {
        let u = F2Vector::from_bits(&[1, 0]);
        let v = F2Vector::from_bits(&[0, 1]);
        assert!(symplectic_inner(&u, &v));
        for bits in 0..4u64 {
            let w = F2Vector::from_index(2, bits);
            assert!(!symplectic_inner(&w, &w));
        }
        let u = F2Vector::from_bits(&[1, 1, 0, 0]);
        let v = F2Vector::from_bits(&[0, 1, 1, 0]);
        assert!(symplectic_inner(&u, &v));
    }

    #[test]
    fn multiply_xz() {
        // X Z = -i Y
        let p = x().multiply(&z());
        assert_eq!(p, PauliOperator::parse("-iY").unwrap());
        // Z X = +i Y
        let q = z().multiply(&x());
        assert_eq!(q, PauliOperator::parse("+iY").unwrap());
    }

    #[test]
    fn hermitian_involution() {
        for s in ["X", "Z", "Y", "XYZ", "-YZX"] {
            let p = PauliOperator::parse(s).unwrap();
            let sq = p.multiply(&p);
            assert!(sq.x_part().is_zero() && sq.z_part().is_zero());
            // i^k E * i^k E = i^{2k} E^2.
            assert_eq!(sq.kappa(), (2 * p.kappa()) % 4);
        }
    }

    #[test]
    fn anticommutation_chain() {
        // X Z X Z = -I
        let p = x().multiply(&z()).multiply(&x()).multiply(&z());
        assert_eq!(p, PauliOperator::parse("-I").unwrap());
    }

    #[test]
    fn commutes_examples() {
        let xx = PauliOperator::parse("XX").unwrap();
        let zz = PauliOperator::parse("ZZ").unwrap();
        assert!(xx.commutes(&zz));
        assert!(!x().commutes(&z()));
        assert!(x().commutes(&PauliOperator::identity(1)));
    }

    #[test]
    fn weight_examples() {
        assert_eq!(PauliOperator::parse("XZ").unwrap().weight(), 2);
        assert_eq!(PauliOperator::parse("Y").unwrap().weight(), 1);
        assert_eq!(
            PauliOperator::hermitian(
                F2Vector::from_bits(&[1, 1, 0]),
                F2Vector::from_bits(&[0, 1, 0])
            )
            .weight(),
            2
        );
    }

    #[test]
    fn integer_vector_reduction() {
        // E(a, b + 2x) = (-1)^{a x^T} E(a, b)
        let p = PauliOperator::from_integer_vectors(&[1], &[2], 0);
        assert_eq!(p, PauliOperator::parse("-X").unwrap());
        let p = PauliOperator::from_integer_vectors(&[1], &[3], 0);
        // E(1, 3) = i^3 D(1,1) = i^3 (-i) Y = i^2 Y... check via formula:
        // kappa += a.b - a0.b0 = 3 - 1 = 2.
        assert_eq!(p, PauliOperator::parse("-Y").unwrap());
    }

    #[test]
    fn parse_display_round_trip() {
        for s in ["+XYZI", "-IZ", "+iY", "-iXX"] {
            let p = PauliOperator::parse(s).unwrap();
            assert_eq!(format!("{p}"), s);
        }
    }

    #[test]
    fn multiply_associative() {
        let ops = ["XYZ", "-ZZI", "+iIXY", "YIX"];
        for a in &ops {
            for b in &ops {
                for c in &ops {
                    let (p, q, r) = (
                        PauliOperator::parse(a).unwrap(),
                        PauliOperator::parse(b).unwrap(),
                        PauliOperator::parse(c).unwrap(),
                    );
                    assert_eq!(
                        p.multiply(&q).multiply(&r),
                        p.multiply(&q.multiply(&r))
                    );
                }
            }
        }
    }

    #[test]
    fn cyclotomic_arithmetic() {
        let one = Cyclotomic::one();
        let i = Cyclotomic::phase_i(1);
        assert_eq!(i.mul(&i), Cyclotomic::phase_i(2));
        assert_eq!(i.mul(&i).mul(&i).mul(&i), one);
        // sqrt2 * sqrt2 = 2
        let r2 = Cyclotomic::one().scale_sqrt2_pow(1);
        assert_eq!(r2.mul(&r2), Cyclotomic::from_int(2));
        // (1+i)/sqrt2 = xi_8
        let sum = one.add(&i).scale_sqrt2_pow(-1);
        assert_eq!(sum, Cyclotomic::root(3, 1));
        assert!((sum.to_complex() - Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_4)).norm() < 1e-12);
    }

    #[test]
    fn cyclotomic_add_mixed_pow2() {
        // sqrt2 + 1 - 1 = sqrt2
        let r2 = Cyclotomic::one().scale_sqrt2_pow(1);
        let v = r2.add(&Cyclotomic::one()).add(&Cyclotomic::from_int(-1));
        assert_eq!(v, r2);
        assert!((v.to_complex().re - 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn pauli_sum_merges_terms() {
        let mut s = PauliSum::zero(1);
        s.push(Cyclotomic::one(), &x());
        s.push(Cyclotomic::one(), &PauliOperator::parse("-X").unwrap());
        assert!(s.is_empty());
    }
}
