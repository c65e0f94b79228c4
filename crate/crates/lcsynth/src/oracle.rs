//! Dense complex-matrix ground truth at desk scale.
//!
//! Everything symbolic in this crate (Pauli conjugation identities, circuit
//! synthesis, QFD recursions, transversal-T verdicts) is checked against the
//! unitaries built here. The oracle is a verifier, not a simulator: sizes
//! are hard-capped and no effort is spent on performance beyond what the
//! test suite needs.
//!
//! Basis convention: basis index `i` encodes qubit `q` (0-indexed) in bit
//! `n - 1 - q`, i.e. qubit 0 is the most significant bit, matching the
//! Kronecker order `qubit 0 x qubit 1 x ...`.

use num_complex::Complex64;

use crate::f2core::F2Vector;
use crate::pauli::{PauliOperator, PauliSum};
use crate::stabilizer::StabilizerCode;
use crate::symplectic::{Circuit, Gate};
use crate::Error;

pub const MAX_DENSE_QUBITS: usize = 12;
pub const MAX_CONJUGATION_QUBITS: usize = 8;

/// A dense unitary (or general) matrix, stored column-major.
#[derive(Clone)]
pub struct DenseUnitary {
    n: usize,
    dim: usize,
    data: Vec<Complex64>,
}

impl DenseUnitary {
    pub fn identity(n: usize) -> Result<Self, Error> {
        if n > MAX_DENSE_QUBITS {
            return Err(Error::SizeCap(format!(
                "dense oracle capped at {MAX_DENSE_QUBITS} qubits, got {n}"
            )));
        }
        let dim = 1usize << n;
        let mut data = vec![Complex64::new(0.0, 0.0); dim * dim];
        for i in 0..dim {
            data[i * dim + i] = Complex64::new(1.0, 0.0);
        }
        Ok(DenseUnitary { n, dim, data })
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.data[col * self.dim + row]
    }

    pub fn set(&mut self, row: usize, col: usize, v: Complex64) {
        self.data[col * self.dim + row] = v;
    }

    fn col(&self, j: usize) -> &[Complex64] {
        &self.data[j * self.dim..(j + 1) * self.dim]
    }

    fn col_mut(&mut self, j: usize) -> &mut [Complex64] {
        &mut self.data[j * self.dim..(j + 1) * self.dim]
    }

    /// Bit of qubit `q` in basis index `i`.
    #[inline]
    fn qbit(&self, i: usize, q: usize) -> bool {
        i >> (self.n - 1 - q) & 1 == 1
    }

    fn qmask(&self, q: usize) -> usize {
        1 << (self.n - 1 - q)
    }

    pub fn mul(&self, other: &DenseUnitary) -> DenseUnitary {
        assert_eq!(self.dim, other.dim);
        let dim = self.dim;
        let mut out = DenseUnitary {
            n: self.n,
            dim,
            data: vec![Complex64::new(0.0, 0.0); dim * dim],
        };
        for j in 0..dim {
            let bcol = other.col(j);
            let ocol = out.col_mut(j);
            for (k, &bkj) in bcol.iter().enumerate() {
                if bkj.norm_sqr() == 0.0 {
                    continue;
                }
                let acol = self.col(k);
                for (i, &aik) in acol.iter().enumerate() {
                    ocol[i] += aik * bkj;
                }
            }
        }
        out
    }

    pub fn adjoint(&self) -> DenseUnitary {
        let mut out = self.clone();
        for i in 0..self.dim {
            for j in 0..self.dim {
                out.set(i, j, self.get(j, i).conj());
            }
        }
        out
    }

    pub fn scale(&self, s: Complex64) -> DenseUnitary {
        let mut out = self.clone();
        for v in out.data.iter_mut() {
            *v *= s;
        }
        out
    }

    pub fn add(&self, other: &DenseUnitary) -> DenseUnitary {
        assert_eq!(self.dim, other.dim);
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&other.data) {
            *a += b;
        }
        out
    }

    pub fn sub(&self, other: &DenseUnitary) -> DenseUnitary {
        assert_eq!(self.dim, other.dim);
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&other.data) {
            *a -= b;
        }
        out
    }

    pub fn frobenius_distance(&self, other: &DenseUnitary) -> f64 {
        assert_eq!(self.dim, other.dim);
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn approx_eq(&self, other: &DenseUnitary, tol: f64) -> bool {
        self.frobenius_distance(other) < tol
    }

    /// Frobenius distance up to a global phase.
    pub fn approx_eq_up_to_phase(&self, other: &DenseUnitary, tol: f64) -> bool {
        // Align on the largest entry of `other`.
        let (mut best, mut arg) = (0.0, Complex64::new(1.0, 0.0));
        for (a, b) in self.data.iter().zip(&other.data) {
            if b.norm() > best {
                best = b.norm();
                if a.norm() > 1e-12 {
                    arg = a / b;
                    arg /= arg.norm();
                }
            }
        }
        self.approx_eq(&other.scale(arg), tol)
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        let prod = self.mul(&self.adjoint());
        let id = DenseUnitary::identity(self.n).unwrap();
        prod.approx_eq(&id, tol)
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    fn apply_gate_to_col(&self, col: &mut [Complex64], gate: &Gate) {
        let dim = self.dim;
        match gate {
            Gate::H(q) => {
                let m = self.qmask(*q);
                let s = std::f64::consts::FRAC_1_SQRT_2;
                for i in 0..dim {
                    if i & m == 0 {
                        let (a, b) = (col[i], col[i | m]);
                        col[i] = (a + b) * s;
                        col[i | m] = (a - b) * s;
                    }
                }
            }
            Gate::P(q) => {
                let m = self.qmask(*q);
                for (i, v) in col.iter_mut().enumerate() {
                    if i & m != 0 {
                        *v *= Complex64::new(0.0, 1.0);
                    }
                }
            }
            Gate::T(q) | Gate::Tdg(q) => {
                let m = self.qmask(*q);
                let angle = if matches!(gate, Gate::T(_)) {
                    std::f64::consts::FRAC_PI_4
                } else {
                    -std::f64::consts::FRAC_PI_4
                };
                let phase = Complex64::from_polar(1.0, angle);
                for (i, v) in col.iter_mut().enumerate() {
                    if i & m != 0 {
                        *v *= phase;
                    }
                }
            }
            Gate::Z(q) => {
                let m = self.qmask(*q);
                for (i, v) in col.iter_mut().enumerate() {
                    if i & m != 0 {
                        *v = -*v;
                    }
                }
            }
            Gate::X(q) => {
                let m = self.qmask(*q);
                for i in 0..dim {
                    if i & m == 0 {
                        col.swap(i, i | m);
                    }
                }
            }
            Gate::Y(q) => {
                let m = self.qmask(*q);
                for i in 0..dim {
                    if i & m == 0 {
                        let (a, b) = (col[i], col[i | m]);
                        col[i] = Complex64::new(0.0, -1.0) * b;
                        col[i | m] = Complex64::new(0.0, 1.0) * a;
                    }
                }
            }
            Gate::CX(c, t) => {
                let mc = self.qmask(*c);
                let mt = self.qmask(*t);
                for i in 0..dim {
                    if i & mc != 0 && i & mt == 0 {
                        col.swap(i, i | mt);
                    }
                }
            }
            Gate::CZ(a, b) => {
                let ma = self.qmask(*a);
                let mb = self.qmask(*b);
                for (i, v) in col.iter_mut().enumerate() {
                    if i & ma != 0 && i & mb != 0 {
                        *v = -*v;
                    }
                }
            }
            Gate::Swap(a, b) => {
                let ma = self.qmask(*a);
                let mb = self.qmask(*b);
                for i in 0..dim {
                    if i & ma != 0 && i & mb == 0 {
                        col.swap(i, (i & !ma) | mb);
                    }
                }
            }
            Gate::Perm(perm) => {
                // Value of qubit q moves to position perm[q]: |v> -> |vQ>.
                let mut scratch = vec![Complex64::new(0.0, 0.0); dim];
                for (i, v) in col.iter().enumerate() {
                    let mut j = 0usize;
                    for q in 0..self.n {
                        if self.qbit(i, q) {
                            j |= self.qmask(perm[q]);
                        }
                    }
                    scratch[j] = *v;
                }
                col.copy_from_slice(&scratch);
            }
        }
    }

    /// Left-multiply by the gate: `self <- G self`.
    pub fn apply_gate(&mut self, gate: &Gate) {
        let dim = self.dim;
        let clone = self.clone();
        for j in 0..dim {
            let col = self.col_mut(j);
            clone.apply_gate_to_col(col, gate);
        }
    }
}

/// The unitary of a single gate embedded on `n` qubits.
pub fn gate_unitary(gate: &Gate, n: usize) -> Result<DenseUnitary, Error> {
    let mut u = DenseUnitary::identity(n)?;
    u.apply_gate(gate);
    Ok(u)
}

/// The unitary of a circuit. Gates are listed in application order, so the
/// matrix is the product of the gate unitaries in reverse list order.
pub fn circuit_unitary(circuit: &Circuit, n: usize) -> Result<DenseUnitary, Error> {
    assert_eq!(circuit.num_qubits(), n);
    let mut u = DenseUnitary::identity(n)?;
    for gate in circuit.gates() {
        u.apply_gate(gate);
    }
    Ok(u)
}

/// Dense matrix of `i^kappa E(a, b)`.
pub fn pauli_unitary(p: &PauliOperator) -> Result<DenseUnitary, Error> {
    let n = p.num_qubits();
    let mut u = DenseUnitary::identity(n)?;
    let dim = u.dim();
    let mut a_mask = 0usize;
    for q in 0..n {
        if p.x_part().get(q) {
            a_mask |= u.qmask(q);
        }
    }
    let mut data = vec![Complex64::new(0.0, 0.0); dim * dim];
    let ab = p.x_part().overlap(p.z_part()) as i64;
    let global = Complex64::from_polar(
        1.0,
        std::f64::consts::FRAC_PI_2 * ((p.kappa() as i64 + ab) % 4) as f64,
    );
    for v in 0..dim {
        // D(a, b)|v> = (-1)^{v.b} |v xor a>
        let mut parity = false;
        for q in 0..n {
            if p.z_part().get(q) && v >> (n - 1 - q) & 1 == 1 {
                parity = !parity;
            }
        }
        let sign = if parity { -1.0 } else { 1.0 };
        data[v * dim + (v ^ a_mask)] = global * sign;
    }
    u.data = data;
    Ok(u)
}

/// Dense matrix of a Pauli sum.
pub fn pauli_sum_unitary(s: &PauliSum) -> Result<DenseUnitary, Error> {
    let n = s.num_qubits();
    let mut acc = DenseUnitary::identity(n)?.scale(Complex64::new(0.0, 0.0));
    for ((a, b), coeff) in s.iter() {
        let term = pauli_unitary(&PauliOperator::hermitian(a.clone(), b.clone()))?;
        acc = acc.add(&term.scale(coeff.to_complex()));
    }
    Ok(acc)
}

/// Diagonal of the quadratic-form gate `tau_R^(ell)`: entry at basis state
/// `v` is `xi^{v R v^T}` with `xi = exp(2 pi i / 2^ell)`.
pub fn qfd_diagonal(ell: u32, r: &[Vec<i64>]) -> Vec<Complex64> {
    let n = r.len();
    let dim = 1usize << n;
    let modulus = 1i64 << ell;
    let mut diag = Vec::with_capacity(dim);
    for idx in 0..dim {
        let v: Vec<i64> = (0..n).map(|q| (idx >> (n - 1 - q) & 1) as i64).collect();
        let mut form = 0i64;
        for i in 0..n {
            for j in 0..n {
                form += v[i] * r[i][j] * v[j];
            }
        }
        let angle = 2.0 * std::f64::consts::PI * (form.rem_euclid(modulus)) as f64 / modulus as f64;
        diag.push(Complex64::from_polar(1.0, angle));
    }
    diag
}

/// Dense unitary of `tau_R^(ell)`.
pub fn qfd_unitary(ell: u32, r: &[Vec<i64>]) -> Result<DenseUnitary, Error> {
    let n = r.len();
    let mut u = DenseUnitary::identity(n)?;
    for (i, d) in qfd_diagonal(ell, r).into_iter().enumerate() {
        u.set(i, i, d);
    }
    Ok(u)
}

/// One term of a Pauli-basis decomposition.
pub type PauliTerm = (Complex64, F2Vector, F2Vector);

/// Decompose `U P U^dagger` in the Pauli basis: coefficients
/// `Tr(E(a,b) U P U^dagger) / 2^n`, dropping entries below 1e-10.
pub fn conjugate_dense(u: &DenseUnitary, p: &PauliOperator) -> Result<Vec<PauliTerm>, Error> {
    let n = u.num_qubits();
    if n > MAX_CONJUGATION_QUBITS {
        return Err(Error::SizeCap(format!(
            "Pauli decomposition capped at {MAX_CONJUGATION_QUBITS} qubits, got {n}"
        )));
    }
    let m = u.mul(&pauli_unitary(p)?).mul(&u.adjoint());
    decompose_in_pauli_basis(&m)
}

/// Pauli-basis coefficients of an arbitrary matrix.
pub fn decompose_in_pauli_basis(m: &DenseUnitary) -> Result<Vec<PauliTerm>, Error> {
    let n = m.num_qubits();
    let dim = m.dim();
    let mut terms = Vec::new();
    for a_bits in 0..1u64 << n {
        let a = F2Vector::from_index(n, a_bits);
        let mut a_mask = 0usize;
        for q in 0..n {
            if a.get(q) {
                a_mask |= 1 << (n - 1 - q);
            }
        }
        for b_bits in 0..1u64 << n {
            let b = F2Vector::from_index(n, b_bits);
            // Tr(E(a,b) M) = sum_v E[v, v^a] M[v^a, v];
            // E[v, v^a] = i^{ab} (-1)^{(v^a).b}
            let ab = a.overlap(&b) as i64;
            let phase = Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_2 * (ab % 4) as f64);
            let mut tr = Complex64::new(0.0, 0.0);
            for v in 0..dim {
                let w = v ^ a_mask;
                let mut parity = false;
                for q in 0..n {
                    if b.get(q) && w >> (n - 1 - q) & 1 == 1 {
                        parity = !parity;
                    }
                }
                let e = if parity { -phase } else { phase };
                tr += e * m.get(w, v);
            }
            let coeff = tr / dim as f64;
            if coeff.norm() > 1e-10 {
                terms.push((coeff, a.clone(), b));
            }
        }
    }
    Ok(terms)
}

/// Code projector `Pi_S = prod_i (I + nu_i E(c_i, d_i)) / 2`.
pub fn code_projector(code: &StabilizerCode) -> Result<DenseUnitary, Error> {
    let n = code.num_qubits();
    let id = DenseUnitary::identity(n)?;
    let mut proj = id.clone();
    for g in code.generators() {
        let e = pauli_unitary(g)?;
        proj = proj.mul(&id.add(&e).scale(Complex64::new(0.5, 0.0)));
    }
    Ok(proj)
}

/// `U Pi_S U^dagger = Pi_S` within Frobenius distance 1e-9.
pub fn check_projector_invariance(u: &DenseUnitary, code: &StabilizerCode) -> Result<bool, Error> {
    if u.num_qubits() > MAX_CONJUGATION_QUBITS {
        return Err(Error::SizeCap(format!(
            "projector check capped at {MAX_CONJUGATION_QUBITS} qubits"
        )));
    }
    let proj = code_projector(code)?;
    let conj = u.mul(&proj).mul(&u.adjoint());
    Ok(conj.frobenius_distance(&proj) < 1e-9)
}

/// Compare a symbolic Pauli sum against a dense matrix.
pub fn pauli_sum_matches(s: &PauliSum, m: &DenseUnitary, tol: f64) -> Result<bool, Error> {
    let dense = pauli_sum_unitary(s)?;
    Ok(dense.frobenius_distance(m) < tol)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h(n: usize, q: usize) -> DenseUnitary {
        gate_unitary(&Gate::H(q), n).unwrap()
    }

    #[test]
    fn hadamard_matrix() {
        let u = h(1, 0);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        assert!((u.get(0, 0).re - s).abs() < 1e-12);
        assert!((u.get(1, 1).re + s).abs() < 1e-12);
        assert!(u.is_unitary(1e-12));
    }

    #[test]
    fn cz_matrix() {
        let u = gate_unitary(&Gate::CZ(0, 1), 2).unwrap();
        for i in 0..4 {
            let expect = if i == 3 { -1.0 } else { 1.0 };
            assert!((u.get(i, i).re - expect).abs() < 1e-12);
        }
    }

    #[test]
    fn t_is_qfd_level3() {
        let t = gate_unitary(&Gate::T(0), 1).unwrap();
        let tau = qfd_unitary(3, &[vec![1]]).unwrap();
        assert!(t.approx_eq(&tau, 1e-12));
    }

    #[test]
    fn empty_circuit_is_identity() {
        let c = Circuit::new(3);
        let u = circuit_unitary(&c, 3).unwrap();
        assert!(u.approx_eq(&DenseUnitary::identity(3).unwrap(), 1e-12));
    }

    #[test]
    fn double_hadamard_is_identity() {
        let mut c = Circuit::new(1);
        c.push(Gate::H(0));
        c.push(Gate::H(0));
        let u = circuit_unitary(&c, 1).unwrap();
        assert!(u.approx_eq(&DenseUnitary::identity(1).unwrap(), 1e-12));
    }

    #[test]
    fn hxh_is_z() {
        let u = h(1, 0);
        let terms = conjugate_dense(&u, &PauliOperator::parse("X").unwrap()).unwrap();
        assert_eq!(terms.len(), 1);
        let (c, a, b) = &terms[0];
        assert!((c - Complex64::new(1.0, 0.0)).norm() < 1e-10);
        assert!(a.is_zero());
        assert_eq!(b.weight(), 1);
    }

    #[test]
    fn txt_is_x_plus_y_over_sqrt2() {
        let t = gate_unitary(&Gate::T(0), 1).unwrap();
        let terms = conjugate_dense(&t, &PauliOperator::parse("X").unwrap()).unwrap();
        assert_eq!(terms.len(), 2);
        for (c, _, _) in &terms {
            assert!((c - Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0)).norm() < 1e-10);
        }
    }

    #[test]
    fn pauli_unitaries_multiply_like_symbols() {
        // Exhaustive phase cross-check on one and two qubits.
        let strings1 = ["I", "X", "Y", "Z"];
        for p in &strings1 {
            for q in &strings1 {
                let sp = PauliOperator::parse(p).unwrap();
                let sq = PauliOperator::parse(q).unwrap();
                let lhs = pauli_unitary(&sp.multiply(&sq)).unwrap();
                let rhs = pauli_unitary(&sp).unwrap().mul(&pauli_unitary(&sq).unwrap());
                assert!(lhs.approx_eq(&rhs, 1e-10), "{p} * {q}");
            }
        }
        for pa in 0..16u64 {
            for pb in 0..16u64 {
                let p = PauliOperator::hermitian(
                    F2Vector::from_index(2, pa & 3),
                    F2Vector::from_index(2, pa >> 2),
                );
                let q = PauliOperator::hermitian(
                    F2Vector::from_index(2, pb & 3),
                    F2Vector::from_index(2, pb >> 2),
                );
                let lhs = pauli_unitary(&p.multiply(&q)).unwrap();
                let rhs = pauli_unitary(&p).unwrap().mul(&pauli_unitary(&q).unwrap());
                assert!(lhs.approx_eq(&rhs, 1e-10));
            }
        }
    }

    #[test]
    fn pauli_basis_orthonormal() {
        // Tr(E(a,b) E(a,b)) = N and cross terms vanish (n = 2).
        for bits in 0..16u64 {
            let p = PauliOperator::hermitian(
                F2Vector::from_index(2, bits & 3),
                F2Vector::from_index(2, bits >> 2),
            );
            let u = pauli_unitary(&p).unwrap();
            let terms = decompose_in_pauli_basis(&u).unwrap();
            assert_eq!(terms.len(), 1);
            assert!((terms[0].0 - Complex64::new(1.0, 0.0)).norm() < 1e-10);
        }
    }
}
