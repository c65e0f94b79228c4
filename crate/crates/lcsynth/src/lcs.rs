//! Logical Clifford synthesis.
//!
//! Given a stabilizer code and a target logical Clifford (specified by its
//! action on the logical Paulis), assemble the symplectic constraint system,
//! enumerate all solutions, factor each into elementary forms, emit circuits,
//! and fix signs with a Pauli correction. Every solution is verified
//! symbolically (exact phase tracking) and, at small qubit counts, against
//! the dense oracle.

use rayon::prelude::*;

use crate::f2core::{self, F2Matrix, F2Vector};
use crate::oracle;
use crate::pauli::PauliOperator;
use crate::stabilizer::{NormalizeVerdict, StabilizerCode};
use crate::symplectic::{
    self, decompose, enumerate_symplectic, factors_to_circuit, find_symplectic,
    CliffordConjugator, Circuit, ConstraintSystem, ElementaryFactor, Side, SymplecticBasis,
    SymplecticMatrix,
};
use crate::Error;

/// One factor in a formal product defining a target image.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GeneratorRef {
    /// Logical X on qubit i (0-indexed).
    Xbar(usize),
    /// Logical Y on qubit i.
    Ybar(usize),
    /// Logical Z on qubit i.
    Zbar(usize),
    /// Stabilizer generator i.
    Stab(usize),
}

/// A signed formal product of logical operators and stabilizer generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TargetImage {
    pub negate: bool,
    pub factors: Vec<GeneratorRef>,
}

impl TargetImage {
    pub fn of(factors: Vec<GeneratorRef>) -> Self {
        TargetImage { negate: false, factors }
    }

    /// Resolve to a concrete physical Pauli on the given code.
    pub fn resolve(&self, code: &StabilizerCode) -> Result<PauliOperator, Error> {
        let n = code.num_qubits();
        let k = code.num_logical();
        let mut p = PauliOperator::identity(n);
        for f in &self.factors {
            let factor = match f {
                GeneratorRef::Xbar(i) => code
                    .logical_x()
                    .get(*i)
                    .cloned()
                    .ok_or_else(|| Error::InvalidInput(format!("Xbar{} out of range (k={k})", i + 1)))?,
                GeneratorRef::Zbar(i) => code
                    .logical_z()
                    .get(*i)
                    .cloned()
                    .ok_or_else(|| Error::InvalidInput(format!("Zbar{} out of range (k={k})", i + 1)))?,
                GeneratorRef::Ybar(i) => {
                    let x = code.logical_x().get(*i).cloned().ok_or_else(|| {
                        Error::InvalidInput(format!("Ybar{} out of range (k={k})", i + 1))
                    })?;
                    let z = &code.logical_z()[*i];
                    let xz = x.multiply(z);
                    xz.with_kappa(xz.kappa() + 1)
                }
                GeneratorRef::Stab(i) => code
                    .generators()
                    .get(*i)
                    .cloned()
                    .ok_or_else(|| Error::InvalidInput(format!("S{} out of range", i + 1)))?,
            };
            p = p.multiply(&factor);
        }
        if self.negate {
            p = p.negate();
        }
        if !p.is_hermitian() {
            return Err(Error::InvalidInput(format!(
                "target image {self:?} resolves to a non-Hermitian operator"
            )));
        }
        Ok(p)
    }
}

/// A target logical Clifford, given by images for every logical X and Z.
#[derive(Clone, Debug)]
pub struct LogicalTarget {
    pub name: String,
    pub x_images: Vec<TargetImage>,
    pub z_images: Vec<TargetImage>,
}

impl LogicalTarget {
    pub fn identity(k: usize) -> Self {
        LogicalTarget {
            name: "identity".into(),
            x_images: (0..k).map(|i| TargetImage::of(vec![GeneratorRef::Xbar(i)])).collect(),
            z_images: (0..k).map(|i| TargetImage::of(vec![GeneratorRef::Zbar(i)])).collect(),
        }
    }

    /// Phase gate on logical qubit i (0-indexed): Xbar_i -> Ybar_i.
    pub fn phase(k: usize, i: usize) -> Self {
        let mut t = Self::identity(k);
        t.name = format!("phase{}", i + 1);
        t.x_images[i] = TargetImage::of(vec![GeneratorRef::Ybar(i)]);
        t
    }

    /// Targeted Hadamard on logical qubit i: Xbar_i <-> Zbar_i.
    pub fn hadamard(k: usize, i: usize) -> Self {
        let mut t = Self::identity(k);
        t.name = format!("hadamard{}", i + 1);
        t.x_images[i] = TargetImage::of(vec![GeneratorRef::Zbar(i)]);
        t.z_images[i] = TargetImage::of(vec![GeneratorRef::Xbar(i)]);
        t
    }

    /// Controlled-Z between logical qubits i and j.
    pub fn cz(k: usize, i: usize, j: usize) -> Self {
        let mut t = Self::identity(k);
        t.name = format!("cz{}{}", i + 1, j + 1);
        t.x_images[i] = TargetImage::of(vec![GeneratorRef::Xbar(i), GeneratorRef::Zbar(j)]);
        t.x_images[j] = TargetImage::of(vec![GeneratorRef::Zbar(i), GeneratorRef::Xbar(j)]);
        t
    }

    /// CNOT with logical control c and logical target tgt.
    pub fn cnot(k: usize, c: usize, tgt: usize) -> Self {
        let mut t = Self::identity(k);
        t.name = format!("cnot{}{}", c + 1, tgt + 1);
        t.x_images[c] = TargetImage::of(vec![GeneratorRef::Xbar(c), GeneratorRef::Xbar(tgt)]);
        t.z_images[tgt] = TargetImage::of(vec![GeneratorRef::Zbar(tgt), GeneratorRef::Zbar(c)]);
        t
    }

    /// Built-in target names: `identity`, `phase<i>`, `hadamard<i>`,
    /// `cz<i><j>`, `cnot<c><t>` (logical qubits 1-indexed, comma allowed).
    pub fn from_name(name: &str, k: usize) -> Result<Self, Error> {
        let lower = name.to_ascii_lowercase();
        let parse_indices = |rest: &str, want: usize| -> Result<Vec<usize>, Error> {
            let idx: Vec<usize> = if rest.contains(',') {
                rest.split(',')
                    .map(|t| {
                        t.trim()
                            .parse::<usize>()
                            .map_err(|_| Error::Parse(format!("bad index in target {name:?}")))
                    })
                    .collect::<Result<_, _>>()?
            } else {
                rest.chars()
                    .map(|c| {
                        c.to_digit(10)
                            .map(|d| d as usize)
                            .ok_or_else(|| Error::Parse(format!("bad index in target {name:?}")))
                    })
                    .collect::<Result<_, _>>()?
            };
            if idx.len() != want || idx.iter().any(|&i| i == 0 || i > k) {
                return Err(Error::Parse(format!(
                    "target {name:?} needs {want} logical indices in 1..={k}"
                )));
            }
            Ok(idx.iter().map(|i| i - 1).collect())
        };
        if lower == "identity" {
            Ok(Self::identity(k))
        } else if let Some(rest) = lower.strip_prefix("phase") {
            let i = parse_indices(rest, 1)?;
            Ok(Self::phase(k, i[0]))
        } else if let Some(rest) = lower.strip_prefix("hadamard") {
            let i = parse_indices(rest, 1)?;
            Ok(Self::hadamard(k, i[0]))
        } else if let Some(rest) = lower.strip_prefix("cnot") {
            let i = parse_indices(rest, 2)?;
            Ok(Self::cnot(k, i[0], i[1]))
        } else if let Some(rest) = lower.strip_prefix("cz") {
            let i = parse_indices(rest, 2)?;
            Ok(Self::cz(k, i[0], i[1]))
        } else {
            Err(Error::Parse(format!("unknown target name {name:?}")))
        }
    }

    /// Parse the target mini-language: one mapping per line, e.g.
    /// `Xbar1 -> Ybar1` or `Zbar2 -> Zbar1*Zbar2` or `Xbar1 -> -Xbar1*S1`.
    /// Unmentioned logicals map to themselves.
    pub fn parse(text: &str, k: usize) -> Result<Self, Error> {
        let mut t = Self::identity(k);
        t.name = "custom".into();
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (lhs, rhs) = line
                .split_once("->")
                .ok_or_else(|| Error::Parse(format!("target line missing `->`: {line:?}")))?;
            let lhs = lhs.trim();
            let (negate, rhs) = {
                let r = rhs.trim();
                match r.strip_prefix('-') {
                    Some(rest) => (true, rest.trim()),
                    None => (false, r),
                }
            };
            let mut factors = Vec::new();
            for tok in rhs.split('*') {
                let tok = tok.trim();
                if tok == "I" || tok.is_empty() {
                    continue;
                }
                factors.push(parse_generator_ref(tok, k)?);
            }
            let image = TargetImage { negate, factors };
            match parse_generator_ref(lhs, k)? {
                GeneratorRef::Xbar(i) => t.x_images[i] = image,
                GeneratorRef::Zbar(i) => t.z_images[i] = image,
                other => {
                    return Err(Error::Parse(format!(
                        "target line must map Xbar or Zbar, got {other:?}"
                    )))
                }
            }
        }
        Ok(t)
    }
}

fn parse_generator_ref(tok: &str, k: usize) -> Result<GeneratorRef, Error> {
    let bad = || Error::Parse(format!("bad generator token {tok:?}"));
    let parse_idx = |rest: &str| rest.trim().parse::<usize>().map_err(|_| bad());
    if let Some(rest) = tok.strip_prefix("Xbar") {
        let i = parse_idx(rest)?;
        if i == 0 || i > k {
            return Err(bad());
        }
        Ok(GeneratorRef::Xbar(i - 1))
    } else if let Some(rest) = tok.strip_prefix("Ybar") {
        let i = parse_idx(rest)?;
        if i == 0 || i > k {
            return Err(bad());
        }
        Ok(GeneratorRef::Ybar(i - 1))
    } else if let Some(rest) = tok.strip_prefix("Zbar") {
        let i = parse_idx(rest)?;
        if i == 0 || i > k {
            return Err(bad());
        }
        Ok(GeneratorRef::Zbar(i - 1))
    } else if let Some(rest) = tok.strip_prefix('S') {
        let i = parse_idx(rest)?;
        if i == 0 {
            return Err(bad());
        }
        Ok(GeneratorRef::Stab(i - 1))
    } else {
        Err(bad())
    }
}

/// The assembled symplectic constraint system for a synthesis run.
pub struct AssembledConstraints {
    pub basis: SymplecticBasis,
    pub constraints: ConstraintSystem,
    /// Signed required image for each logical X and Z.
    pub required_x: Vec<PauliOperator>,
    pub required_z: Vec<PauliOperator>,
}

/// Turn the target's conjugation relations into linear equations on F.
/// Logical pairs occupy the first k basis slots; stabilizer generators take
/// their own slots (pure Z-type generators sit on the v side, everything
/// else on the u side) and are constrained to be fixed, i.e. the solutions
/// centralize the stabilizer.
pub fn assemble_constraints(
    code: &StabilizerCode,
    target: &LogicalTarget,
) -> Result<AssembledConstraints, Error> {
    let k = code.num_logical();
    if target.x_images.len() != k || target.z_images.len() != k {
        return Err(Error::InvalidInput(format!(
            "target specifies {} X and {} Z images, code has k = {k}",
            target.x_images.len(),
            target.z_images.len()
        )));
    }
    let required_x: Vec<PauliOperator> = target
        .x_images
        .iter()
        .map(|im| im.resolve(code))
        .collect::<Result<_, _>>()?;
    let required_z: Vec<PauliOperator> = target
        .z_images
        .iter()
        .map(|im| im.resolve(code))
        .collect::<Result<_, _>>()?;
    // The images must reproduce the logical commutation table and commute
    // with the stabilizer.
    let all_src: Vec<&PauliOperator> = code.logical_x().iter().chain(code.logical_z()).collect();
    let all_img: Vec<&PauliOperator> = required_x.iter().chain(&required_z).collect();
    for i in 0..all_src.len() {
        for j in 0..all_src.len() {
            if all_src[i].commutes(all_src[j]) != all_img[i].commutes(all_img[j]) {
                return Err(Error::IncompatibleSystem(
                    "target images break the logical commutation table".into(),
                ));
            }
        }
        for g in code.generators() {
            if !all_img[i].commutes(g) {
                return Err(Error::IncompatibleSystem(
                    "a target image anticommutes with the stabilizer".into(),
                ));
            }
        }
    }

    let pairs: Vec<(F2Vector, F2Vector)> = code
        .logical_x()
        .iter()
        .zip(code.logical_z())
        .map(|(x, z)| (x.vector(), z.vector()))
        .collect();
    let singles: Vec<(F2Vector, Side)> = code
        .generators()
        .iter()
        .map(|g| {
            let side = if g.x_part().is_zero() { Side::V } else { Side::U };
            (g.vector(), side)
        })
        .collect();
    let basis = symplectic::complete_symplectic_basis(&pairs, &singles)?;

    let mut u_images: Vec<(usize, F2Vector)> = Vec::new();
    let mut v_images: Vec<(usize, F2Vector)> = Vec::new();
    for (i, img) in required_x.iter().enumerate() {
        u_images.push((i, img.vector()));
    }
    for (j, img) in required_z.iter().enumerate() {
        v_images.push((j, img.vector()));
    }
    for (slot_offset, (g, side)) in singles.iter().enumerate() {
        let slot = k + slot_offset;
        match side {
            Side::U => u_images.push((slot, g.clone())),
            Side::V => v_images.push((slot, g.clone())),
        }
    }
    Ok(AssembledConstraints {
        basis,
        constraints: ConstraintSystem { u_images, v_images },
        required_x,
        required_z,
    })
}

/// Verification state of one synthesis result.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerificationReport {
    /// Exact phase-tracking check of every stabilizer and logical image.
    pub symbolic: bool,
    /// Dense oracle check (projector invariance plus conjugation targets);
    /// `None` when the code exceeds the oracle cap.
    pub oracle: Option<bool>,
}

/// One synthesized physical realization of the target.
#[derive(Clone, Debug)]
pub struct SynthesisResult {
    pub f: SymplecticMatrix,
    pub factors: Vec<ElementaryFactor>,
    pub circuit: Circuit,
    pub pauli_correction: PauliOperator,
    pub verified: VerificationReport,
}

/// Options controlling [`synthesize_all`].
#[derive(Clone, Debug)]
pub struct SynthesisOptions {
    /// Stop enumerating beyond this many solutions (the full count is
    /// 2^{r(r+1)/2}); the default cap is 2^16.
    pub max_solutions: Option<usize>,
    /// Run the dense oracle on each solution when n is small enough.
    pub oracle_verify: bool,
}

impl Default for SynthesisOptions {
    fn default() -> Self {
        SynthesisOptions {
            max_solutions: Some(1 << 16),
            oracle_verify: true,
        }
    }
}

pub const ORACLE_VERIFY_MAX_QUBITS: usize = 8;

/// Enumerate physical Clifford realizations of the target, in a
/// deterministic order: primary key two-qubit-gate count, then circuit
/// depth, then enumeration index.
pub fn synthesize_all(
    code: &StabilizerCode,
    target: &LogicalTarget,
    options: &SynthesisOptions,
) -> Result<Vec<SynthesisResult>, Error> {
    let assembled = assemble_constraints(code, target)?;
    let sols = enumerate_symplectic(
        &assembled.basis,
        &assembled.constraints,
        options.max_solutions,
    )?;
    let n = code.num_qubits();
    let results: Vec<SynthesisResult> = sols
        .into_par_iter()
        .map(|f| {
            let factors = decompose(&f);
            let circuit = factors_to_circuit(&factors, n);
            let pauli_correction = fix_signs(code, &circuit, target)?;
            let verified = verify_result(code, &circuit, &pauli_correction, &assembled, options)?;
            Ok(SynthesisResult {
                f,
                factors,
                circuit,
                pauli_correction,
                verified,
            })
        })
        .collect::<Result<_, Error>>()?;
    let mut order: Vec<usize> = (0..results.len()).collect();
    order.sort_by_key(|&i| {
        (
            results[i].circuit.two_qubit_count(),
            results[i].circuit.depth(),
            i,
        )
    });
    Ok(order.into_iter().map(|i| results[i].clone()).collect())
}

/// Convert a normalizing solution into a centralizing one realizing the
/// same logical operation: find K with `K gamma(S') = gamma(S)`, solve for
/// H fixing the logicals with `gamma(S) H = K gamma(S)`, return `H F_n`.
pub fn centralize(
    code: &StabilizerCode,
    f_norm: &SymplecticMatrix,
) -> Result<SymplecticMatrix, Error> {
    match code.check_normalizes(f_norm) {
        NormalizeVerdict::Centralizes => return Ok(f_norm.clone()),
        NormalizeVerdict::NormalizesOnly { .. } => {}
        NormalizeVerdict::Neither { witness } => {
            return Err(Error::InvalidInput(format!(
                "matrix does not normalize the stabilizer (generator {witness})"
            )))
        }
    }
    let gs = code.generator_matrix();
    let s_prime = F2Matrix::from_rows(
        code.generators()
            .iter()
            .map(|g| f_norm.apply(&g.vector()))
            .collect(),
    );
    // K S' = S row by row.
    let k_rows: Vec<F2Vector> = gs
        .iter_rows()
        .map(|row| f2core::solve_left(&s_prime, row).expect("S' spans S"))
        .collect();
    let k_mat = F2Matrix::from_rows(k_rows);
    let kg = k_mat.mul(&gs);
    let mut xs: Vec<F2Vector> = Vec::new();
    let mut ys: Vec<F2Vector> = Vec::new();
    for l in code.logical_x().iter().chain(code.logical_z()) {
        xs.push(l.vector());
        ys.push(l.vector());
    }
    for i in 0..gs.rows() {
        xs.push(gs.row(i).clone());
        ys.push(kg.row(i).clone());
    }
    let h = find_symplectic(&xs, &ys)?;
    let f_c = h.mul(f_norm);
    debug_assert_eq!(code.check_normalizes(&f_c), NormalizeVerdict::Centralizes);
    Ok(f_c)
}

/// Find the Pauli correction that repairs all conjugation signs.
///
/// The circuit's symplectic action must already centralize the stabilizer
/// and send each logical to its target vector; post-multiplying by a Pauli
/// flips exactly the violated signs and cannot change F, since Paulis are
/// the kernel of the symplectic map. Among the valid corrections the
/// minimum-weight one is returned (lexicographically smallest on ties)
/// when r is small enough to scan, otherwise the solver's particular
/// solution.
pub fn fix_signs(
    code: &StabilizerCode,
    circuit: &Circuit,
    target: &LogicalTarget,
) -> Result<PauliOperator, Error> {
    let n = code.num_qubits();
    let conj = CliffordConjugator::from_circuit(circuit);
    let required_x: Vec<PauliOperator> = target
        .x_images
        .iter()
        .map(|im| im.resolve(code))
        .collect::<Result<_, _>>()?;
    let required_z: Vec<PauliOperator> = target
        .z_images
        .iter()
        .map(|im| im.resolve(code))
        .collect::<Result<_, _>>()?;

    let mut rows: Vec<F2Vector> = Vec::new();
    let mut rhs: Vec<bool> = Vec::new();
    {
        let mut add = |source: &PauliOperator, required: &PauliOperator| -> Result<(), Error> {
            let actual = conj.conjugate(source);
            if actual.vector() != required.vector() {
                return Err(Error::IncompatibleSystem(format!(
                    "circuit maps {source} to {actual}, expected the vector of {required}"
                )));
            }
            rows.push(source.vector());
            rhs.push(actual.kappa() != required.kappa());
            Ok(())
        };
        for g in code.generators() {
            add(g, g)?;
        }
        for (l, req) in code.logical_x().iter().zip(&required_x) {
            add(l, req)?;
        }
        for (l, req) in code.logical_z().iter().zip(&required_z) {
            add(l, req)?;
        }
    }
    // <row, c> = s  <=>  (row Omega) . c = s.
    let om = symplectic::omega(n);
    let a = F2Matrix::from_rows(rows.iter().map(|r| om.mul_vec(r)).collect());
    let b = F2Matrix::from_fn(rhs.len(), 1, |i, _| rhs[i]);
    let sol = f2core::solve_affine(&a, &b)
        .ok_or_else(|| Error::IncompatibleSystem("sign-fixing system is inconsistent".into()))?;
    let mut best = sol.particular.col(0);
    if sol.kernel.len() <= 16 {
        let mut best_op = PauliOperator::from_vector(&best);
        for mask in 1..1u64 << sol.kernel.len() {
            let mut v = sol.particular.col(0);
            for (i, kern) in sol.kernel.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    v.xor_assign(kern);
                }
            }
            let op = PauliOperator::from_vector(&v);
            if (op.weight(), &v) < (best_op.weight(), &best) {
                best = v.clone();
                best_op = op;
            }
        }
    }
    Ok(PauliOperator::from_vector(&best))
}

fn verify_result(
    code: &StabilizerCode,
    circuit: &Circuit,
    correction: &PauliOperator,
    assembled: &AssembledConstraints,
    options: &SynthesisOptions,
) -> Result<VerificationReport, Error> {
    let n = code.num_qubits();
    // Symbolic: with the correction applied, conjugation must reproduce
    // every stabilizer generator and target image exactly, signs included.
    let conj = CliffordConjugator::from_circuit(circuit);
    let conj_with_corr =
        |p: &PauliOperator| -> PauliOperator { conj.conjugate(&p.conjugate_by_pauli(correction)) };
    let mut symbolic = true;
    for g in code.generators() {
        if conj_with_corr(g) != *g {
            symbolic = false;
        }
    }
    for (l, req) in code
        .logical_x()
        .iter()
        .zip(&assembled.required_x)
        .chain(code.logical_z().iter().zip(&assembled.required_z))
    {
        if &conj_with_corr(l) != req {
            symbolic = false;
        }
    }
    let oracle_ok = if options.oracle_verify && n <= ORACLE_VERIFY_MAX_QUBITS {
        let u_circ = oracle::circuit_unitary(circuit, n)?;
        let u_corr = oracle::pauli_unitary(correction)?;
        // Post-multiplication: the correction acts before the circuit.
        let u = u_circ.mul(&u_corr);
        let mut ok = oracle::check_projector_invariance(&u, code)?;
        let ua = u.adjoint();
        for (l, req) in code
            .logical_x()
            .iter()
            .zip(&assembled.required_x)
            .chain(code.logical_z().iter().zip(&assembled.required_z))
            .chain(code.generators().iter().zip(code.generators()))
        {
            let img = u.mul(&oracle::pauli_unitary(l)?).mul(&ua);
            if !img.approx_eq(&oracle::pauli_unitary(req)?, 1e-10) {
                ok = false;
            }
        }
        Some(ok)
    } else {
        None
    };
    Ok(VerificationReport {
        symbolic,
        oracle: oracle_ok,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stabilizer::{code_513, css_642};

    fn code642() -> StabilizerCode {
        css_642().to_stabilizer_code().unwrap()
    }

    #[test]
    fn identity_target_first_solution_is_identity() {
        let code = code642();
        let target = LogicalTarget::identity(4);
        let results = synthesize_all(&code, &target, &SynthesisOptions::default()).unwrap();
        assert_eq!(results.len(), 8);
        assert_eq!(results[0].f, SymplecticMatrix::identity(6));
        assert!(results[0].circuit.is_empty());
        for r in &results {
            assert!(r.verified.symbolic);
            assert_eq!(r.verified.oracle, Some(true));
        }
    }

    #[test]
    fn phase1_minimal_solution_matches_reference() {
        let code = code642();
        let target = LogicalTarget::phase(4, 0);
        let results = synthesize_all(&code, &target, &SynthesisOptions::default()).unwrap();
        assert_eq!(results.len(), 8);
        // Minimal-cost solution: F = T_B with B supported on qubits {2, 6}.
        let best = &results[0];
        let mut b = F2Matrix::zero(6, 6);
        for (i, j) in [(1, 1), (1, 5), (5, 1), (5, 5)] {
            b.set(i, j, true);
        }
        let expect = ElementaryFactor::TR(b).matrix(6);
        assert_eq!(best.f.matrix(), &expect);
        use crate::symplectic::Gate;
        assert_eq!(best.circuit.gates(), &[Gate::P(1), Gate::CZ(1, 5), Gate::P(5)]);
        assert!(best.pauli_correction.is_identity());
        for r in &results {
            assert!(r.verified.symbolic);
            assert_eq!(r.verified.oracle, Some(true));
        }
    }

    #[test]
    fn cz12_needs_z6_correction() {
        let code = code642();
        let target = LogicalTarget::cz(4, 0, 1);
        let results = synthesize_all(&code, &target, &SynthesisOptions::default()).unwrap();
        assert_eq!(results.len(), 8);
        let best = &results[0];
        assert_eq!(best.pauli_correction, PauliOperator::parse("IIIIIZ").unwrap());
        assert!(best.verified.symbolic);
        assert_eq!(best.verified.oracle, Some(true));
    }

    #[test]
    fn cnot21_minimal_solution_matches_reference() {
        let code = code642();
        let target = LogicalTarget::cnot(4, 1, 0);
        let results = synthesize_all(&code, &target, &SynthesisOptions::default()).unwrap();
        assert_eq!(results.len(), 8);
        let best = &results[0];
        let a = F2Matrix::from_bits(&[
            &[1, 0, 0, 0, 0, 0],
            &[0, 1, 0, 0, 0, 0],
            &[1, 1, 1, 0, 0, 0],
            &[0, 0, 0, 1, 0, 0],
            &[0, 0, 0, 0, 1, 0],
            &[1, 1, 0, 0, 0, 1],
        ]);
        assert_eq!(best.f.matrix(), &ElementaryFactor::LQ(a).matrix(6));
        assert!(best.verified.symbolic);
    }

    #[test]
    fn hadamard1_solutions_verify() {
        let code = code642();
        let target = LogicalTarget::hadamard(4, 0);
        let results = synthesize_all(&code, &target, &SynthesisOptions::default()).unwrap();
        assert_eq!(results.len(), 8);
        for r in &results {
            assert!(r.verified.symbolic);
            assert_eq!(r.verified.oracle, Some(true));
        }
    }

    #[test]
    fn solution_count_513() {
        let code = code_513();
        let target = LogicalTarget::phase(1, 0);
        let opts = SynthesisOptions {
            max_solutions: None,
            oracle_verify: false,
        };
        let results = synthesize_all(&code, &target, &opts).unwrap();
        assert_eq!(results.len(), 1024);
        for r in &results {
            assert!(r.verified.symbolic);
        }
    }

    #[test]
    fn centralize_normalizing_hadamard() {
        // Transversal Hadamard + swap(1,6) normalizes but does not
        // centralize; conversion must fix every stabilizer and keep the
        // logical action.
        let code = code642();
        let mut a = F2Matrix::identity(6);
        a.set(0, 0, false);
        a.set(5, 5, false);
        a.set(0, 5, true);
        a.set(5, 0, true);
        let f = F2Matrix::from_fn(12, 12, |i, j| {
            if i < 6 && j >= 6 {
                a.get(i, j - 6)
            } else if i >= 6 && j < 6 {
                a.get(i - 6, j)
            } else {
                false
            }
        });
        let f_norm = SymplecticMatrix::from_matrix(f).unwrap();
        assert!(matches!(
            code.check_normalizes(&f_norm),
            NormalizeVerdict::NormalizesOnly { .. }
        ));
        let f_c = centralize(&code, &f_norm).unwrap();
        assert_eq!(code.check_normalizes(&f_c), NormalizeVerdict::Centralizes);
        // Logical images unchanged.
        for l in code.logical_x().iter().chain(code.logical_z()) {
            assert_eq!(f_c.apply(&l.vector()), f_norm.apply(&l.vector()));
        }
    }

    #[test]
    fn centralize_of_centralizing_is_fixed_point() {
        let code = code642();
        let f = SymplecticMatrix::identity(6);
        assert_eq!(centralize(&code, &f).unwrap(), f);
    }

    #[test]
    fn centralize_recovers_from_stabilizer_permutation() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand::rngs::StdRng::seed_from_u64(5);
        let code = code642();
        // Start from a centralizing solution (identity), compose with an H
        // permuting the stabilizer, recover a centralizing solution.
        let gs = code.generator_matrix();
        for _ in 0..10 {
            // Random invertible K permutes/mixes the generators.
            let k_mat = loop {
                let bits: u32 = rng.gen_range(0..16);
                let cand = F2Matrix::from_fn(2, 2, |i, j| bits >> (2 * i + j) & 1 == 1);
                if f2core::inverse(&cand).is_ok() {
                    break cand;
                }
            };
            let kg = k_mat.mul(&gs);
            let mut xs = Vec::new();
            let mut ys = Vec::new();
            for l in code.logical_x().iter().chain(code.logical_z()) {
                xs.push(l.vector());
                ys.push(l.vector());
            }
            for i in 0..gs.rows() {
                xs.push(gs.row(i).clone());
                ys.push(kg.row(i).clone());
            }
            let h = find_symplectic(&xs, &ys).unwrap();
            if code.check_normalizes(&h) == NormalizeVerdict::Centralizes {
                continue;
            }
            let fixed = centralize(&code, &h).unwrap();
            assert_eq!(code.check_normalizes(&fixed), NormalizeVerdict::Centralizes);
            for l in code.logical_x().iter().chain(code.logical_z()) {
                assert_eq!(fixed.apply(&l.vector()), l.vector());
            }
        }
    }

    #[test]
    fn fix_signs_recovers_prepended_pauli() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand::rngs::StdRng::seed_from_u64(3);
        let code = code642();
        let target = LogicalTarget::identity(4);
        for _ in 0..20 {
            // A random Pauli "error" folded into an identity-action circuit.
            let bits: u64 = rng.gen_range(0..1u64 << 12);
            let p = PauliOperator::from_vector(&F2Vector::from_index(12, bits));
            let mut circuit = Circuit::new(6);
            for q in 0..6 {
                if p.x_part().get(q) {
                    circuit.push(crate::symplectic::Gate::X(q));
                }
                if p.z_part().get(q) {
                    circuit.push(crate::symplectic::Gate::Z(q));
                }
            }
            let corr = fix_signs(&code, &circuit, &target).unwrap();
            // The correction must undo the error's signs exactly.
            let conj = CliffordConjugator::from_circuit(&circuit);
            for g in code
                .generators()
                .iter()
                .chain(code.logical_x())
                .chain(code.logical_z())
            {
                let img = conj.conjugate(&g.conjugate_by_pauli(&corr));
                assert_eq!(&img, g);
            }
        }
    }

    #[test]
    fn all_solutions_agree_on_logicals_up_to_stabilizer() {
        let code = code642();
        let target = LogicalTarget::phase(4, 0);
        let results = synthesize_all(&code, &target, &SynthesisOptions::default()).unwrap();
        let gs = code.generator_matrix();
        for r in &results {
            for l in code.logical_x().iter().chain(code.logical_z()) {
                let img0 = results[0].f.apply(&l.vector());
                let img = r.f.apply(&l.vector());
                assert!(f2core::in_row_space(&gs, &img.xor(&img0)));
            }
        }
    }

    #[test]
    fn target_parsing() {
        let t = LogicalTarget::parse("Xbar1 -> Ybar1\nZbar2 -> Zbar1*Zbar2", 4).unwrap();
        assert_eq!(t.x_images[0], TargetImage::of(vec![GeneratorRef::Ybar(0)]));
        assert_eq!(
            t.z_images[1],
            TargetImage::of(vec![GeneratorRef::Zbar(0), GeneratorRef::Zbar(1)])
        );
        assert_eq!(t.x_images[1], TargetImage::of(vec![GeneratorRef::Xbar(1)]));
        let named = LogicalTarget::from_name("cz12", 4).unwrap();
        assert_eq!(named.x_images[0].factors.len(), 2);
    }
}
