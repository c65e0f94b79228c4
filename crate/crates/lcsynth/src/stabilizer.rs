//! Stabilizer and CSS code machinery.
//!
//! A [`StabilizerCode`] holds r signed Hermitian generators plus k logical
//! X/Z pairs; [`CssCode`] carries the classical generator matrices and the
//! coset matrices defining the logical Paulis, from which the stabilizer
//! view is derived.

use std::fmt;
use std::str::FromStr;

use crate::f2core::{self, F2Matrix, F2Vector};
use crate::pauli::{symplectic_inner, PauliOperator};
use crate::symplectic::SymplecticMatrix;
use crate::Error;

#[derive(Clone, Debug)]
pub struct StabilizerCode {
    n: usize,
    generators: Vec<PauliOperator>,
    logical_x: Vec<PauliOperator>,
    logical_z: Vec<PauliOperator>,
}

impl StabilizerCode {
    /// Validates: Hermitian commuting independent generators, logicals that
    /// commute with the stabilizer, and the delta_ij anticommutation table
    /// between logical X and Z.
    pub fn new(
        generators: Vec<PauliOperator>,
        logical_x: Vec<PauliOperator>,
        logical_z: Vec<PauliOperator>,
    ) -> Result<Self, Error> {
        let n = generators
            .first()
            .or(logical_x.first())
            .map(PauliOperator::num_qubits)
            .ok_or_else(|| Error::InvalidCode("empty code".into()))?;
        for p in generators.iter().chain(&logical_x).chain(&logical_z) {
            if p.num_qubits() != n {
                return Err(Error::InvalidCode("mixed qubit counts".into()));
            }
            if !p.is_hermitian() {
                return Err(Error::InvalidCode(format!("non-Hermitian element {p}")));
            }
        }
        for (i, g) in generators.iter().enumerate() {
            for h in generators.iter().skip(i + 1) {
                if !g.commutes(h) {
                    return Err(Error::InvalidCode(format!("generators {g} and {h} anticommute")));
                }
            }
        }
        let gmat = F2Matrix::from_rows(generators.iter().map(PauliOperator::vector).collect());
        if f2core::rank(&gmat) != generators.len() {
            return Err(Error::InvalidCode("dependent stabilizer generators".into()));
        }
        let r = generators.len();
        let k = n - r;
        if logical_x.len() != k || logical_z.len() != k {
            return Err(Error::InvalidCode(format!(
                "expected {k} logical X/Z pairs, got {}/{}",
                logical_x.len(),
                logical_z.len()
            )));
        }
        for l in logical_x.iter().chain(&logical_z) {
            for g in &generators {
                if !l.commutes(g) {
                    return Err(Error::InvalidCode(format!(
                        "logical {l} anticommutes with stabilizer {g}"
                    )));
                }
            }
        }
        for (i, x) in logical_x.iter().enumerate() {
            for (j, z) in logical_z.iter().enumerate() {
                let anti = !x.commutes(z);
                if anti != (i == j) {
                    return Err(Error::InvalidCode(format!(
                        "logical pairing violated between {x} and {z}"
                    )));
                }
            }
        }
        Ok(StabilizerCode {
            n,
            generators,
            logical_x,
            logical_z,
        })
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn num_generators(&self) -> usize {
        self.generators.len()
    }

    pub fn num_logical(&self) -> usize {
        self.n - self.generators.len()
    }

    pub fn generators(&self) -> &[PauliOperator] {
        &self.generators
    }

    pub fn logical_x(&self) -> &[PauliOperator] {
        &self.logical_x
    }

    pub fn logical_z(&self) -> &[PauliOperator] {
        &self.logical_z
    }

    /// The r x 2n binary generator matrix (signs dropped).
    pub fn generator_matrix(&self) -> F2Matrix {
        F2Matrix::from_rows(self.generators.iter().map(PauliOperator::vector).collect())
    }

    /// Syndrome of an error: bit i is the symplectic inner product of
    /// generator i with the error.
    pub fn syndrome(&self, error: &PauliOperator) -> F2Vector {
        assert_eq!(error.num_qubits(), self.n);
        let ev = error.vector();
        let mut s = F2Vector::zero(self.generators.len());
        for (i, g) in self.generators.iter().enumerate() {
            s.set(i, symplectic_inner(&g.vector(), &ev));
        }
        s
    }

    /// The actual group element of S with binary vector `v`, sign included;
    /// `None` when `v` is outside the row space of the generator matrix.
    pub fn element_with_sign(&self, v: &F2Vector) -> Option<PauliOperator> {
        let combo = f2core::solve_left(&self.generator_matrix(), v)?;
        let mut p = PauliOperator::identity(self.n);
        for (i, g) in self.generators.iter().enumerate() {
            if combo.get(i) {
                p = p.multiply(g);
            }
        }
        debug_assert_eq!(&p.vector(), v);
        Some(p)
    }

    /// Signed membership: does the exact element `p` (vector and sign)
    /// belong to the stabilizer group?
    pub fn contains(&self, p: &PauliOperator) -> bool {
        match self.element_with_sign(&p.vector()) {
            Some(e) => e.kappa() == p.kappa(),
            None => false,
        }
    }

    /// Exhaustive distance (enumerates the normalizer), capped at 2^24
    /// cosets; `None` when k = 0 or the enumeration is too large.
    pub fn distance(&self) -> Option<usize> {
        let r = self.generators.len();
        let dims = 2 * self.n - r;
        if self.num_logical() == 0 || dims > 24 {
            return None;
        }
        // Normalizer = vectors orthogonal (symplectically) to all rows of
        // G_S = null space of G_S * Omega.
        let gs = self.generator_matrix();
        let om = crate::symplectic::omega(self.n);
        let norm_basis = f2core::dual_basis(&gs.mul(&om));
        let mut best: Option<usize> = None;
        for mask in 1..1u64 << norm_basis.rows() {
            let mut v = F2Vector::zero(2 * self.n);
            for i in 0..norm_basis.rows() {
                if mask >> i & 1 == 1 {
                    v.xor_assign(norm_basis.row(i));
                }
            }
            if f2core::in_row_space(&gs, &v) {
                continue; // stabilizer element, not a logical operator
            }
            let w = PauliOperator::from_vector(&v).weight();
            best = Some(best.map_or(w, |b| b.min(w)));
        }
        best
    }

    /// How a symplectic matrix interacts with the stabilizer.
    pub fn check_normalizes(&self, f: &SymplecticMatrix) -> NormalizeVerdict {
        assert_eq!(f.num_qubits(), self.n);
        let gs = self.generator_matrix();
        let mut centralizes = true;
        for (i, g) in self.generators.iter().enumerate() {
            let image = f.apply(&g.vector());
            if image != g.vector() {
                centralizes = false;
            }
            if !f2core::in_row_space(&gs, &image) {
                return NormalizeVerdict::Neither { witness: i };
            }
        }
        if centralizes {
            NormalizeVerdict::Centralizes
        } else {
            let witness = self
                .generators
                .iter()
                .position(|g| f.apply(&g.vector()) != g.vector())
                .unwrap();
            NormalizeVerdict::NormalizesOnly { witness }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NormalizeVerdict {
    Centralizes,
    /// Maps the stabilizer group to itself but moves the indexed generator.
    NormalizesOnly { witness: usize },
    /// The indexed generator leaves the stabilizer group.
    Neither { witness: usize },
}

/// A CSS code determined by nested classical codes C2 in C1, with the coset
/// generator matrices fixing the logical Pauli representatives.
#[derive(Clone, Debug)]
pub struct CssCode {
    c1: F2Matrix,
    c2: F2Matrix,
    x_coset: F2Matrix,
    z_coset: F2Matrix,
    x_signs: Vec<i8>,
    z_signs: Vec<i8>,
}

/// Rows of `m` that are independent modulo the row space of `base`, kept in
/// input order.
fn coset_basis(m: &F2Matrix, base: &F2Matrix) -> Vec<F2Vector> {
    let mut span = base.clone();
    let mut out = Vec::new();
    for row in m.iter_rows() {
        if !f2core::in_row_space(&span, row) {
            out.push(row.clone());
            span = span.vstack(&F2Matrix::from_rows(vec![row.clone()]));
        }
    }
    out
}

impl CssCode {
    /// Build from generator matrices of C1 and C2 (C2 must be nested in
    /// C1). Signs default to +1; when given they apply to the X-type then
    /// Z-type stabilizer generators in construction order.
    pub fn new(c1: F2Matrix, c2: F2Matrix, signs: Option<(Vec<i8>, Vec<i8>)>) -> Result<Self, Error> {
        if c1.cols() != c2.cols() {
            return Err(Error::DimensionMismatch("C1 and C2 lengths differ".into()));
        }
        for row in c2.iter_rows() {
            if !f2core::in_row_space(&c1, row) {
                return Err(Error::InvalidCode("C2 is not contained in C1".into()));
            }
        }
        let k = f2core::rank(&c1) - f2core::rank(&c2);
        if k == 0 {
            return Err(Error::InvalidCode("k = 0: C1 equals C2".into()));
        }
        // Logical X representatives: rows of C1 independent mod C2.
        let x_rows = coset_basis(&c1, &c2);
        let x_coset = F2Matrix::from_rows(x_rows);
        // Logical Z representatives: basis of C2-perp mod C1-perp, adjusted
        // so that G_X G_Z^T = I_k, then reduced to canonical coset form.
        let c1_perp = f2core::dual_basis(&c1);
        let c2_perp = f2core::dual_basis(&c2);
        let m_rows = coset_basis(&c2_perp, &c1_perp);
        let m = F2Matrix::from_rows(m_rows);
        let pairing = x_coset.mul(&m.transpose());
        let p_inv_t = f2core::inverse(&pairing)
            .map_err(|_| Error::InvalidCode("degenerate X/Z coset pairing".into()))?
            .transpose();
        let z_raw = p_inv_t.mul(&m);
        let z_rows: Vec<F2Vector> = z_raw
            .iter_rows()
            .map(|row| f2core::reduce_mod_rows(&c1_perp, row))
            .collect();
        let z_coset = F2Matrix::from_rows(z_rows);
        debug_assert_eq!(x_coset.mul(&z_coset.transpose()), F2Matrix::identity(k));

        let rx = f2core::rank(&c2);
        let rz = c1_perp.rows();
        let (x_signs, z_signs) = match signs {
            Some((xs, zs)) => {
                if xs.len() != rx || zs.len() != rz {
                    return Err(Error::InvalidCode(format!(
                        "expected {rx} X signs and {rz} Z signs"
                    )));
                }
                (xs, zs)
            }
            None => (vec![1; rx], vec![1; rz]),
        };
        Ok(CssCode {
            c1,
            c2,
            x_coset,
            z_coset,
            x_signs,
            z_signs,
        })
    }

    pub fn num_qubits(&self) -> usize {
        self.c1.cols()
    }

    pub fn num_logical(&self) -> usize {
        self.x_coset.rows()
    }

    pub fn c1(&self) -> &F2Matrix {
        &self.c1
    }

    pub fn c2(&self) -> &F2Matrix {
        &self.c2
    }

    pub fn c1_perp(&self) -> F2Matrix {
        f2core::dual_basis(&self.c1)
    }

    pub fn x_coset(&self) -> &F2Matrix {
        &self.x_coset
    }

    pub fn z_coset(&self) -> &F2Matrix {
        &self.z_coset
    }

    /// X-type stabilizer generators: an independent row basis of C2.
    pub fn x_stabilizers(&self) -> Vec<F2Vector> {
        coset_basis(&self.c2, &F2Matrix::zero(0, self.c2.cols()))
    }

    /// Z-type stabilizer generators: the dual basis of C1.
    pub fn z_stabilizers(&self) -> Vec<F2Vector> {
        self.c1_perp().into_rows()
    }

    /// The logical Pauli generators `(X-bar list, Z-bar list)`.
    pub fn logical_paulis(&self) -> (Vec<PauliOperator>, Vec<PauliOperator>) {
        let n = self.num_qubits();
        let xs = self
            .x_coset
            .iter_rows()
            .map(|x| PauliOperator::hermitian(x.clone(), F2Vector::zero(n)))
            .collect();
        let zs = self
            .z_coset
            .iter_rows()
            .map(|z| PauliOperator::hermitian(F2Vector::zero(n), z.clone()))
            .collect();
        (xs, zs)
    }

    /// The stabilizer-code view: X-type generators first, then Z-type.
    pub fn to_stabilizer_code(&self) -> Result<StabilizerCode, Error> {
        let n = self.num_qubits();
        let mut generators = Vec::new();
        for (row, &s) in self.x_stabilizers().iter().zip(&self.x_signs) {
            let kappa = if s < 0 { 2 } else { 0 };
            generators.push(PauliOperator::new(row.clone(), F2Vector::zero(n), kappa));
        }
        for (row, &s) in self.z_stabilizers().iter().zip(&self.z_signs) {
            let kappa = if s < 0 { 2 } else { 0 };
            generators.push(PauliOperator::new(F2Vector::zero(n), row.clone(), kappa));
        }
        let (lx, lz) = self.logical_paulis();
        StabilizerCode::new(generators, lx, lz)
    }
}

impl fmt::Display for StabilizerCode {
    /// Code file format: header `n r k`, then r signed stabilizer rows,
    /// then k logical X rows and k logical Z rows.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{} {} {}",
            self.n,
            self.generators.len(),
            self.num_logical()
        )?;
        for g in &self.generators {
            writeln!(f, "{g}")?;
        }
        for l in &self.logical_x {
            writeln!(f, "{l}")?;
        }
        for l in &self.logical_z {
            writeln!(f, "{l}")?;
        }
        Ok(())
    }
}

impl FromStr for StabilizerCode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let mut lines = s
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("empty code file".into()))?;
        if header.eq_ignore_ascii_case("CSS") {
            return Err(Error::Parse(
                "CSS block format must be parsed with parse_css_blocks".into(),
            ));
        }
        let nums: Vec<usize> = header
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| Error::Parse("bad code header".into())))
            .collect::<Result<_, _>>()?;
        let [n, r, k] = nums[..] else {
            return Err(Error::Parse("code header must be `n r k`".into()));
        };
        let mut read_pauli = |what: &str| -> Result<PauliOperator, Error> {
            let line = lines
                .next()
                .ok_or_else(|| Error::Parse(format!("missing {what} line")))?;
            let p = PauliOperator::parse(line)?;
            if p.num_qubits() != n {
                return Err(Error::Parse(format!("{what} line has wrong qubit count")));
            }
            Ok(p)
        };
        let generators: Vec<PauliOperator> = (0..r)
            .map(|_| read_pauli("stabilizer"))
            .collect::<Result<_, _>>()?;
        let logical_x: Vec<PauliOperator> = (0..k)
            .map(|_| read_pauli("logical X"))
            .collect::<Result<_, _>>()?;
        let logical_z: Vec<PauliOperator> = (0..k)
            .map(|_| read_pauli("logical Z"))
            .collect::<Result<_, _>>()?;
        StabilizerCode::new(generators, logical_x, logical_z)
    }
}

/// Parse the CSS block form of the code file format:
/// a line `CSS`, then `C1` and `C2` tags each followed by a matrix in the
/// standard text format, and an optional `SIGNS` line of +/- tokens
/// (X-type then Z-type generators).
pub fn parse_css_blocks(s: &str) -> Result<CssCode, Error> {
    let mut lines = s
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .peekable();
    let header = lines.next().ok_or_else(|| Error::Parse("empty file".into()))?;
    if !header.eq_ignore_ascii_case("CSS") {
        return Err(Error::Parse("expected CSS header".into()));
    }
    let mut c1: Option<F2Matrix> = None;
    let mut c2: Option<F2Matrix> = None;
    let mut signs: Option<(Vec<i8>, Vec<i8>)> = None;
    while let Some(tag) = lines.next() {
        match tag.to_ascii_uppercase().as_str() {
            "C1" | "C2" => {
                let dims = lines
                    .next()
                    .ok_or_else(|| Error::Parse("matrix block ended early".into()))?;
                let rows: usize = dims
                    .split_whitespace()
                    .next()
                    .and_then(|t| t.parse().ok())
                    .ok_or_else(|| Error::Parse("bad matrix header".into()))?;
                let mut text = String::from(dims);
                text.push('\n');
                for _ in 0..rows {
                    let line = lines
                        .next()
                        .ok_or_else(|| Error::Parse("matrix block ended early".into()))?;
                    text.push_str(line);
                    text.push('\n');
                }
                let m: F2Matrix = text.parse()?;
                if tag.eq_ignore_ascii_case("C1") {
                    c1 = Some(m);
                } else {
                    c2 = Some(m);
                }
            }
            "SIGNS" => {
                let line = lines
                    .next()
                    .ok_or_else(|| Error::Parse("SIGNS block ended early".into()))?;
                let all: Vec<i8> = line
                    .split_whitespace()
                    .map(|t| match t {
                        "+" | "+1" | "1" => Ok(1),
                        "-" | "-1" => Ok(-1),
                        _ => Err(Error::Parse(format!("bad sign token {t:?}"))),
                    })
                    .collect::<Result<_, _>>()?;
                signs = Some((Vec::new(), all));
            }
            other => return Err(Error::Parse(format!("unknown block tag {other:?}"))),
        }
    }
    let c1 = c1.ok_or_else(|| Error::Parse("missing C1 block".into()))?;
    let c2 = c2.ok_or_else(|| Error::Parse("missing C2 block".into()))?;
    // The SIGNS line lists X-type then Z-type signs; split by the X count.
    let split_signs = match signs {
        None => None,
        Some((_, all)) => {
            let rx = f2core::rank(&c2);
            if all.len() < rx {
                return Err(Error::Parse("not enough signs".into()));
            }
            let (xs, zs) = all.split_at(rx);
            Some((xs.to_vec(), zs.to_vec()))
        }
    };
    CssCode::new(c1, c2, split_signs)
}

/// The `[[6,4,2]]` CSS code built from the [6,5,2] single-parity-check
/// code: stabilizers X^6 and Z^6 with the standard logical Paulis.
pub fn css_642() -> CssCode {
    let ones = F2Vector::from_bits(&[1; 6]);
    let mut c1_rows = vec![ones];
    for i in 1..5 {
        let mut v = F2Vector::zero(6);
        v.set(0, true);
        v.set(i, true);
        c1_rows.push(v);
    }
    let c1 = F2Matrix::from_rows(c1_rows);
    let c2 = F2Matrix::from_rows(vec![F2Vector::from_bits(&[1; 6])]);
    CssCode::new(c1, c2, None).expect("[[6,4,2]] construction is valid")
}

/// The `[[4,2,2]]` code with S = <XXXX, ZZZZ>.
pub fn css_422() -> CssCode {
    let ones = F2Vector::from_bits(&[1; 4]);
    let c1 = F2Matrix::from_rows(vec![
        ones.clone(),
        F2Vector::from_bits(&[1, 1, 0, 0]),
        F2Vector::from_bits(&[1, 0, 1, 0]),
    ]);
    let c2 = F2Matrix::from_rows(vec![ones]);
    CssCode::new(c1, c2, None).expect("[[4,2,2]] construction is valid")
}

/// The `[[5,1,3]]` perfect code with its standard generators.
pub fn code_513() -> StabilizerCode {
    let gens = ["XZZXI", "IXZZX", "XIXZZ", "ZXIXZ"]
        .iter()
        .map(|s| PauliOperator::parse(s).unwrap())
        .collect();
    StabilizerCode::new(
        gens,
        vec![PauliOperator::parse("XXXXX").unwrap()],
        vec![PauliOperator::parse("ZZZZZ").unwrap()],
    )
    .expect("[[5,1,3]] construction is valid")
}

/// The `[[6,2,2]]` CSS-T code with X^6 and negated weight-2 Z generators.
pub fn css_622() -> CssCode {
    let n = 6;
    let ones = F2Vector::from_bits(&[1; 6]);
    let pair = |i: usize| {
        let mut v = F2Vector::zero(n);
        v.set(i, true);
        v.set(i + 1, true);
        v
    };
    // C1-perp = <Z1Z2, Z3Z4, Z5Z6>, so C1 is its dual; C2 = <1...1>.
    let c1 = f2core::dual_basis(&F2Matrix::from_rows(vec![pair(0), pair(2), pair(4)]));
    let c2 = F2Matrix::from_rows(vec![ones]);
    CssCode::new(c1, c2, Some((vec![1], vec![-1, -1, -1]))).expect("[[6,2,2]] construction is valid")
}
