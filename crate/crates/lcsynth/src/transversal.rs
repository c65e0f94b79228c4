//! Transversal T / T-pattern / Z-rotation support checks.
//!
//! The decision procedures work in the Heisenberg picture: a diagonal
//! physical gate preserves the code space iff conjugating the code
//! projector reproduces it, which reduces to per-generator conditions on
//! the X-parts `a_j` and the pure-Z subgroup of the stabilizer. Verdicts
//! carry per-generator reports and, when only signs are off, the Pauli
//! correction that repairs them.

use num_complex::Complex64;

use crate::f2core::{self, F2Matrix, F2Vector};
use crate::pauli::{Cyclotomic, PauliOperator, PauliSum};
use crate::stabilizer::StabilizerCode;
use crate::Error;

/// Enumeration cap: supports and subgroup scans beyond 2^24 are refused.
pub const ENUM_CAP: usize = 24;

/// A per-qubit pattern of T powers, entries in Z8.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransversalPattern {
    t: Vec<u8>,
}

impl TransversalPattern {
    pub fn new(t: Vec<u8>) -> Result<Self, Error> {
        if t.iter().any(|&p| p > 7) {
            return Err(Error::InvalidInput("pattern entries must be in 0..=7".into()));
        }
        Ok(TransversalPattern { t })
    }

    /// All-ones: plain transversal T.
    pub fn uniform_t(n: usize) -> Self {
        TransversalPattern { t: vec![1; n] }
    }

    pub fn parse(s: &str) -> Result<Self, Error> {
        let t: Vec<u8> = s
            .trim()
            .chars()
            .map(|c| {
                c.to_digit(8)
                    .map(|d| d as u8)
                    .ok_or_else(|| Error::Parse(format!("invalid Z8 digit {c:?}")))
            })
            .collect::<Result<_, _>>()?;
        Ok(TransversalPattern { t })
    }

    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }

    pub fn powers(&self) -> &[u8] {
        &self.t
    }

    /// Sites with the given power, as an indicator vector.
    pub fn sites(&self, power: u8) -> F2Vector {
        let mut v = F2Vector::zero(self.t.len());
        for (i, &p) in self.t.iter().enumerate() {
            if p == power {
                v.set(i, true);
            }
        }
        v
    }

    /// True when powers stay in {0, 1, 7}.
    pub fn is_t_tdg_only(&self) -> bool {
        self.t.iter().all(|&p| p == 0 || p == 1 || p == 7)
    }

    /// `t' = t1 + t7` for {0,1,7} patterns.
    pub fn t_prime(&self) -> F2Vector {
        self.sites(1).or(&self.sites(7))
    }
}

/// Conjugation of a Pauli by plain transversal T:
/// `2^{-w(a)/2} sum_{y <= a} (-1)^{b y^T} E(a, b xor y)`.
pub fn conj_transversal_t(p: &PauliOperator) -> PauliSum {
    conj_pattern(p, &TransversalPattern::uniform_t(p.num_qubits()))
}

/// Conjugation of a Pauli by an arbitrary pattern of T powers:
/// prefactor `(-1)^{a (t3+t4+t5+t6)^T} / 2^{w(a*(t~1+t~3))/2}`, summed over
/// the coset `(a*t~2) <= z <= (a*(t~1+t~2+t~3))` with coefficient
/// `(-1)^{(b+t~3) z^T}`, where `t~1 = t1+t5, t~2 = t2+t6, t~3 = t3+t7`.
pub fn conj_pattern(p: &PauliOperator, pattern: &TransversalPattern) -> PauliSum {
    let n = p.num_qubits();
    assert_eq!(pattern.len(), n);
    let a = p.x_part();
    let b = p.z_part();
    let tt1 = pattern.sites(1).or(&pattern.sites(5));
    let tt2 = pattern.sites(2).or(&pattern.sites(6));
    let tt3 = pattern.sites(3).or(&pattern.sites(7));
    let t3456 = pattern
        .sites(3)
        .or(&pattern.sites(4))
        .or(&pattern.sites(5))
        .or(&pattern.sites(6));

    let free = a.and(&tt1.or(&tt3));
    let fixed = a.and(&tt2);
    let w = free.weight();
    let prefactor = a.overlap(&t3456) as i64;
    let mut sum = PauliSum::zero(n);
    let free_sites = free.support();
    for mask in 0..1u64 << free_sites.len() {
        let mut z = fixed.clone();
        for (k, &site) in free_sites.iter().enumerate() {
            if mask >> k & 1 == 1 {
                z.set(site, true);
            }
        }
        let e = prefactor + b.overlap(&z) as i64 + tt3.overlap(&z) as i64;
        let coeff = Cyclotomic::phase_i(2 * e).scale_sqrt2_pow(-(w as i32));
        let term = PauliOperator::new(a.clone(), b.xor(&z), p.kappa());
        sum.push(coeff, &term);
    }
    sum
}

/// Report for one stabilizer-group class with X-part `a_j`.
#[derive(Clone, Debug)]
pub struct GeneratorReport {
    /// The X-part a_j of this class of stabilizer elements.
    pub x_part: F2Vector,
    /// Condition 1: `w_H(a_j * t')` even.
    pub weight_even: bool,
    /// Condition 2: the punctured pure-Z subspace contains its dual.
    pub dual_contained: bool,
    /// A self-dual basis for A_j (embedded on n qubits) when condition 2
    /// holds.
    pub self_dual_basis: Option<Vec<F2Vector>>,
    /// Sign prescription on the punctured dual (the necessary set) holds.
    pub signs_ok_necessary: bool,
    /// Sign prescription on all of A_j (the affirmative verdict) holds.
    pub signs_ok: bool,
}

impl GeneratorReport {
    pub fn structure_ok(&self) -> bool {
        self.weight_even && self.dual_contained
    }
}

/// Verdict of a transversal-T / T-pattern check.
#[derive(Clone, Debug)]
pub struct TransversalVerdict {
    /// All conditions, including the sign prescription on every A_j.
    pub supported: bool,
    pub reports: Vec<GeneratorReport>,
    /// When the structure is right, the Pauli whose sandwich repairs any
    /// violated Z-signs (identity if none are violated). `None` when the
    /// structural conditions fail.
    pub pauli_correction: Option<PauliOperator>,
}

/// Basis of the pure Z-type subgroup `Z_S` (vectors only; signs live in the
/// stabilizer group itself).
fn pure_z_basis(code: &StabilizerCode) -> Vec<F2Vector> {
    let n = code.num_qubits();
    let gs = code.generator_matrix();
    let (ech, pivots) = f2core::rref(&gs);
    let x_cols: Vec<usize> = (0..n).collect();
    let z_cols: Vec<usize> = (n..2 * n).collect();
    let mut rows = Vec::new();
    for r in 0..pivots.len() {
        let row = ech.row(r);
        if row.select(&x_cols).is_zero() {
            rows.push(row.select(&z_cols));
        }
    }
    rows
}

/// Basis of the space of X-parts occurring in the stabilizer group.
fn x_part_basis(code: &StabilizerCode) -> Vec<F2Vector> {
    let n = code.num_qubits();
    let x_cols: Vec<usize> = (0..n).collect();
    let projected = F2Matrix::from_rows(
        code.generators()
            .iter()
            .map(|g| g.vector().select(&x_cols))
            .collect(),
    );
    let (ech, pivots) = f2core::rref(&projected);
    (0..pivots.len()).map(|r| ech.row(r).clone()).collect()
}

/// Rows spanning `{z in rowspace(zs) : z <= a}`.
fn z_subspace_below(zs: &[F2Vector], a: &F2Vector) -> Vec<F2Vector> {
    if zs.is_empty() {
        return Vec::new();
    }
    let n = a.len();
    let outside: Vec<usize> = (0..n).filter(|&i| !a.get(i)).collect();
    let zs_mat = F2Matrix::from_rows(zs.to_vec());
    if outside.is_empty() {
        return zs.to_vec();
    }
    // Combinations x with x . zs vanishing outside the support of a.
    let restricted = zs_mat.select(&(0..zs.len()).collect::<Vec<_>>(), &outside);
    let kernel = f2core::dual_basis(&restricted.transpose());
    (0..kernel.rows())
        .map(|i| zs_mat.mul_vec(kernel.row(i)))
        .collect()
}

fn puncture(rows: &[F2Vector], support: &[usize]) -> F2Matrix {
    if rows.is_empty() {
        return F2Matrix::zero(0, support.len());
    }
    let all: Vec<usize> = (0..rows.len()).collect();
    F2Matrix::from_rows(rows.to_vec()).select(&all, support)
}

fn embed(v: &F2Vector, support: &[usize], n: usize) -> F2Vector {
    let mut out = F2Vector::zero(n);
    for (k, &site) in support.iter().enumerate() {
        if v.get(k) {
            out.set(site, true);
        }
    }
    out
}

/// The actual sign exponent (0 or 2) of the pure-Z element `E(0, z)` in S.
fn actual_sign_exponent(code: &StabilizerCode, z: &F2Vector) -> Option<u8> {
    let n = code.num_qubits();
    let v = F2Vector::zero(n).concat(z);
    code.element_with_sign(&v).map(|e| e.kappa())
}

/// Required sign exponent for `E(0, z)`: `i^{z z^T + 2 t7 z^T}` (mod 4).
fn required_sign_exponent(z: &F2Vector, t7: &F2Vector) -> u8 {
    ((z.weight() + 2 * t7.overlap(z)) % 4) as u8
}

/// Greedy self-orthogonal enlargement of the punctured dual into a
/// self-dual code inside `zt` (all rows even weight). Returns `None` when
/// the dual is not contained, i.e. condition 2 fails. Candidates are the
/// echelon basis rows of the orthogonal complement within `zt`; rows whose
/// actual sign already matches the prescription are preferred, then the
/// lexicographically first eligible row.
fn self_dual_enlargement(
    zt: &F2Matrix,
    sign_mismatch: &dyn Fn(&F2Vector) -> bool,
) -> Option<Vec<F2Vector>> {
    let w = zt.cols();
    let dual = f2core::dual_basis(zt);
    for i in 0..dual.rows() {
        if !f2core::in_row_space(zt, dual.row(i)) {
            return None;
        }
    }
    let mut basis: Vec<F2Vector> = dual.into_rows();
    while basis.len() < w / 2 {
        let v_mat = if basis.is_empty() {
            F2Matrix::zero(0, w)
        } else {
            F2Matrix::from_rows(basis.clone())
        };
        // W = zt intersected with the dual of V: combinations of zt rows
        // orthogonal to V.
        let gram = zt.mul(&v_mat.transpose());
        let kernel = f2core::dual_basis(&gram.transpose());
        let mut candidates: Vec<F2Vector> = (0..kernel.rows())
            .map(|i| zt.transpose().mul_vec(kernel.row(i)))
            .filter(|cand| !f2core::in_row_space(&v_mat, cand))
            .collect();
        candidates.sort_by_key(|c| (sign_mismatch(c), c.clone()));
        let pick = candidates.into_iter().next()?;
        basis.push(pick);
    }
    Some(basis)
}

/// Decide whether the code supports plain transversal T.
pub fn check_transversal_t(code: &StabilizerCode) -> Result<TransversalVerdict, Error> {
    check_pattern(code, &TransversalPattern::uniform_t(code.num_qubits()))
}

/// Decide whether the code supports a {0,1,7} pattern of T powers.
///
/// Per nonzero X-part class `a_j`: (1) `w_H(a_j * t')` is even; (2) the
/// pure-Z subspace supported on `a_j * t'`, punctured to that support,
/// contains its dual (equivalently, contains a self-dual code A_j of half
/// dimension); (3) each `E(0, z)` for z in A_j carries the sign
/// `i^{z z^T + 2 t7 z^T}`. The affirmative verdict imposes the signs on all
/// of A_j; the report also carries the weaker necessary set (the dual).
pub fn check_pattern(
    code: &StabilizerCode,
    pattern: &TransversalPattern,
) -> Result<TransversalVerdict, Error> {
    if !pattern.is_t_tdg_only() {
        return Err(Error::InvalidInput(
            "support checks are defined for {0,1,7} patterns".into(),
        ));
    }
    let n = code.num_qubits();
    if pattern.len() != n {
        return Err(Error::DimensionMismatch("pattern length != n".into()));
    }
    let t_prime = pattern.t_prime();
    let t7 = pattern.sites(7);
    let zs = pure_z_basis(code);
    let x_basis = x_part_basis(code);
    if x_basis.len() > ENUM_CAP {
        return Err(Error::SizeCap(format!(
            "2^{} X-part classes exceed the enumeration cap",
            x_basis.len()
        )));
    }

    let mut reports = Vec::new();
    let mut correction_rows: Vec<F2Vector> = Vec::new();
    let mut correction_rhs: Vec<bool> = Vec::new();
    let mut structure_ok = true;
    let mut all_signs_ok = true;

    for mask in 1..1u64 << x_basis.len() {
        let mut a = F2Vector::zero(n);
        for (i, row) in x_basis.iter().enumerate() {
            if mask >> i & 1 == 1 {
                a.xor_assign(row);
            }
        }
        let at = a.and(&t_prime);
        if at.is_zero() {
            // No T sites touch this class; nothing to check.
            reports.push(GeneratorReport {
                x_part: a,
                weight_even: true,
                dual_contained: true,
                self_dual_basis: Some(Vec::new()),
                signs_ok_necessary: true,
                signs_ok: true,
            });
            continue;
        }
        let weight_even = at.weight() % 2 == 0;
        let support = at.support();
        let zj = z_subspace_below(&zs, &at);
        let zt = puncture(&zj, &support);
        let mismatch = |cand: &F2Vector| -> bool {
            let z = embed(cand, &support, n);
            match actual_sign_exponent(code, &z) {
                Some(actual) => actual != required_sign_exponent(&z, &t7),
                None => true,
            }
        };
        let self_dual = if weight_even {
            self_dual_enlargement(&zt, &mismatch)
        } else {
            None
        };
        let dual_contained = weight_even && self_dual.is_some();
        let (signs_ok, signs_ok_necessary, embedded) = match &self_dual {
            None => (false, false, None),
            Some(basis) => {
                let embedded: Vec<F2Vector> =
                    basis.iter().map(|v| embed(v, &support, n)).collect();
                // Both the actual group sign and the prescription are
                // characters on the self-orthogonal space A_j, so checking
                // a basis decides all of A_j.
                let all_ok = embedded.iter().all(|z| {
                    actual_sign_exponent(code, z) == Some(required_sign_exponent(z, &t7))
                });
                let dual_rows = f2core::dual_basis(&zt);
                let necessary_ok = (0..dual_rows.rows()).all(|i| {
                    let z = embed(dual_rows.row(i), &support, n);
                    actual_sign_exponent(code, &z) == Some(required_sign_exponent(&z, &t7))
                });
                for z in &embedded {
                    let actual = actual_sign_exponent(code, z).expect("A_j inside Z_S");
                    correction_rows.push(z.clone());
                    correction_rhs.push(actual != required_sign_exponent(z, &t7));
                }
                (all_ok, necessary_ok, Some(embedded))
            }
        };
        structure_ok &= weight_even && dual_contained;
        all_signs_ok &= signs_ok;
        reports.push(GeneratorReport {
            x_part: a,
            weight_even,
            dual_contained,
            self_dual_basis: embedded,
            signs_ok_necessary,
            signs_ok,
        });
    }

    let pauli_correction = if structure_ok {
        // Solve z . c = s over the collected prescription rows; the
        // correction is the X-part Pauli E(c, 0) sandwiching the gate.
        let a_mat = if correction_rows.is_empty() {
            F2Matrix::zero(0, n)
        } else {
            F2Matrix::from_rows(correction_rows.clone())
        };
        let b_mat = F2Matrix::from_fn(correction_rhs.len(), 1, |i, _| correction_rhs[i]);
        f2core::solve_affine(&a_mat, &b_mat).map(|sol| {
            let mut best = sol.particular.col(0);
            if sol.kernel.len() <= 16 {
                for mask in 1..1u64 << sol.kernel.len() {
                    let mut v = sol.particular.col(0);
                    for (i, k) in sol.kernel.iter().enumerate() {
                        if mask >> i & 1 == 1 {
                            v.xor_assign(k);
                        }
                    }
                    if (v.weight(), &v) < (best.weight(), &best) {
                        best = v.clone();
                    }
                }
            }
            PauliOperator::hermitian(best, F2Vector::zero(n))
        })
    } else {
        None
    };

    Ok(TransversalVerdict {
        supported: structure_ok && all_signs_ok,
        reports,
        pauli_correction,
    })
}

/// CSS-T witness: the first C2 codeword violating the conditions, if any.
#[derive(Clone, Debug)]
pub struct CssTVerdict {
    pub is_css_t: bool,
    pub witness: Option<F2Vector>,
}

/// A pair (C1, C2) is CSS-T when every x in C2 has even weight and C1-perp
/// contains a self-dual code of dimension w(x)/2 supported on x
/// (equivalently, the punctured `{z in C1-perp : z <= x}` contains its
/// dual). Enumerates C2, so dim C2 is capped.
pub fn is_css_t(c1: &F2Matrix, c2: &F2Matrix) -> Result<CssTVerdict, Error> {
    for row in c2.iter_rows() {
        if !f2core::in_row_space(c1, row) {
            return Err(Error::InvalidCode("C2 is not contained in C1".into()));
        }
    }
    let (c2_ech, c2_pivots) = f2core::rref(c2);
    let dim = c2_pivots.len();
    if dim > ENUM_CAP {
        return Err(Error::SizeCap(format!("dim C2 = {dim} exceeds the cap")));
    }
    let c1_perp = f2core::dual_basis(c1);
    let zs: Vec<F2Vector> = (0..c1_perp.rows()).map(|i| c1_perp.row(i).clone()).collect();
    for mask in 1..1u64 << dim {
        let mut x = F2Vector::zero(c2.cols());
        for i in 0..dim {
            if mask >> i & 1 == 1 {
                x.xor_assign(c2_ech.row(i));
            }
        }
        if x.weight() % 2 != 0 {
            return Ok(CssTVerdict { is_css_t: false, witness: Some(x) });
        }
        let support = x.support();
        let zx = z_subspace_below(&zs, &x);
        let zt = puncture(&zx, &support);
        let dual = f2core::dual_basis(&zt);
        let contained = (0..dual.rows()).all(|i| f2core::in_row_space(&zt, dual.row(i)));
        if !contained {
            return Ok(CssTVerdict { is_css_t: false, witness: Some(x) });
        }
    }
    Ok(CssTVerdict { is_css_t: true, witness: None })
}

/// Even pairwise and triple overlaps of all rows.
pub fn is_triorthogonal(g: &F2Matrix) -> bool {
    let rows = g.rows();
    for a in 0..rows {
        for b in a + 1..rows {
            if g.row(a).overlap(g.row(b)) % 2 != 0 {
                return false;
            }
            for c in b + 1..rows {
                if g.row(a).and(g.row(b)).overlap(g.row(c)) % 2 != 0 {
                    return false;
                }
            }
        }
    }
    true
}

/// Verdict of the logical-identity test with the first failing condition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LogicalIdentityVerdict {
    pub holds: bool,
    pub failing_condition: Option<String>,
}

/// Does transversal T realize the logical identity on this CSS-T code?
///
/// The four membership-with-sign conditions, checked on generating sets
/// (products follow because the required signs and group signs are both
/// characters once the pairwise conditions hold):
/// 1. `i^{w(x)} E(0, x)` in S for logical X rows x;
/// 2. `i^{w(x*a)} E(0, x*a)` in S for logical x and X-stabilizer a;
/// 3. `i^{w(x*y)} E(0, x*y)` in S for logical pairs;
/// 4. `i^{w(a*b)} E(0, a*b)` in S for X-stabilizer pairs.
pub fn check_logical_identity(
    css: &crate::stabilizer::CssCode,
) -> Result<LogicalIdentityVerdict, Error> {
    let code = css.to_stabilizer_code()?;
    let x_rows: Vec<F2Vector> = css.x_coset().iter_rows().cloned().collect();
    let a_rows: Vec<F2Vector> = css.x_stabilizers();
    let member = |z: &F2Vector| -> bool {
        let v = F2Vector::zero(code.num_qubits()).concat(z);
        match code.element_with_sign(&v) {
            Some(e) => e.kappa() as usize == z.weight() % 4,
            None => false,
        }
    };
    for (i, x) in x_rows.iter().enumerate() {
        if !member(x) {
            return Ok(LogicalIdentityVerdict {
                holds: false,
                failing_condition: Some(format!("condition 1 at logical X row {}", i + 1)),
            });
        }
    }
    for (i, x) in x_rows.iter().enumerate() {
        for (j, a) in a_rows.iter().enumerate() {
            if !member(&x.and(a)) {
                return Ok(LogicalIdentityVerdict {
                    holds: false,
                    failing_condition: Some(format!(
                        "condition 2 at logical row {} with X stabilizer {}",
                        i + 1,
                        j + 1
                    )),
                });
            }
        }
    }
    for i in 0..x_rows.len() {
        for j in i..x_rows.len() {
            if !member(&x_rows[i].and(&x_rows[j])) {
                return Ok(LogicalIdentityVerdict {
                    holds: false,
                    failing_condition: Some(format!(
                        "condition 3 at logical rows {} and {}",
                        i + 1,
                        j + 1
                    )),
                });
            }
        }
    }
    for i in 0..a_rows.len() {
        for j in i..a_rows.len() {
            if !member(&a_rows[i].and(&a_rows[j])) {
                return Ok(LogicalIdentityVerdict {
                    holds: false,
                    failing_condition: Some(format!(
                        "condition 4 at X stabilizers {} and {}",
                        i + 1,
                        j + 1
                    )),
                });
            }
        }
    }
    Ok(LogicalIdentityVerdict { holds: true, failing_condition: None })
}

/// Verdict of the logical-transversal-T test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LogicalTransversalTVerdict {
    pub holds: bool,
    pub triorthogonal: bool,
    /// A coset violating the mod-8 weight condition, if any.
    pub weight_witness: Option<(F2Vector, F2Vector)>,
}

/// Does physical transversal T realize logical transversal T (without any
/// Clifford correction)? Requires triorthogonality of `G1 = [G_X; G2]` and
/// `w_H(x xor a) = w_H(c) (mod 8)` for every logical combination
/// `x = sum c_i x_i` and every a in C2.
pub fn check_logical_transversal_t(
    css: &crate::stabilizer::CssCode,
) -> Result<LogicalTransversalTVerdict, Error> {
    let x_stabs = css.x_stabilizers();
    let g2 = if x_stabs.is_empty() {
        F2Matrix::zero(0, css.num_qubits())
    } else {
        F2Matrix::from_rows(x_stabs.clone())
    };
    let g1 = css.x_coset().vstack(&g2);
    let triorthogonal = is_triorthogonal(&g1);
    let k = css.x_coset().rows();
    let k2 = x_stabs.len();
    if k + k2 > ENUM_CAP {
        return Err(Error::SizeCap(format!("2^{} coset sweep exceeds the cap", k + k2)));
    }
    let mut weight_witness = None;
    'outer: for cmask in 0..1u64 << k {
        let mut x = F2Vector::zero(css.num_qubits());
        for i in 0..k {
            if cmask >> i & 1 == 1 {
                x.xor_assign(css.x_coset().row(i));
            }
        }
        let c_weight = cmask.count_ones() as usize;
        for amask in 0..1u64 << k2 {
            let mut xa = x.clone();
            for (j, a) in x_stabs.iter().enumerate() {
                if amask >> j & 1 == 1 {
                    xa.xor_assign(a);
                }
            }
            if xa.weight() % 8 != c_weight % 8 {
                weight_witness = Some((x.clone(), xa));
                break 'outer;
            }
        }
    }
    Ok(LogicalTransversalTVerdict {
        holds: triorthogonal && weight_witness.is_none(),
        triorthogonal,
        weight_witness,
    })
}

/// Per-generator outcome of the Z-rotation check.
#[derive(Clone, Debug)]
pub struct ZRotationReport {
    pub x_part: F2Vector,
    /// The two trigonometric sums pass (None when not enumerable).
    pub trig_ok: Option<bool>,
    /// Exact transversal-T conditions (populated at level 3).
    pub structural_ok: Option<bool>,
}

#[derive(Clone, Debug)]
pub struct ZRotationVerdict {
    pub supported: bool,
    pub reports: Vec<ZRotationReport>,
}

/// Does the transversal `pi/2^ell` Z-rotation preserve the code space?
///
/// Per nonzero X-part class the trigonometric conditions are
/// `sum_{v in Z_j} eps_v (i tan(2pi/2^ell))^{w(v)} = sec(2pi/2^ell)^{w(a_j)}`
/// and the corresponding cancellation sums over `y <= a_j, y not in Z_j`
/// (evaluated on coset representatives), in double precision, tolerance
/// 1e-9. At ell = 3 the conditions are additionally decided exactly via the
/// transversal-T structure, and the two paths must agree wherever both run.
pub fn check_z_rotation(code: &StabilizerCode, ell: u32) -> Result<ZRotationVerdict, Error> {
    if ell < 2 {
        return Err(Error::InvalidInput("Z-rotation level must be >= 2".into()));
    }
    let n = code.num_qubits();
    let zs = pure_z_basis(code);
    let x_basis = x_part_basis(code);
    if x_basis.len() > ENUM_CAP {
        return Err(Error::SizeCap("too many X-part classes".into()));
    }
    let structural = if ell == 3 {
        Some(check_transversal_t(code)?)
    } else {
        None
    };
    let theta = 2.0 * std::f64::consts::PI / (1u64 << ell) as f64;
    let (tan, sec) = (theta.tan(), 1.0 / theta.cos());

    let mut reports = Vec::new();
    let mut supported = true;
    for mask in 1..1u64 << x_basis.len() {
        let mut a = F2Vector::zero(n);
        for (i, row) in x_basis.iter().enumerate() {
            if mask >> i & 1 == 1 {
                a.xor_assign(row);
            }
        }
        let w = a.weight();
        let support = a.support();
        let zj = z_subspace_below(&zs, &a);
        let zt = puncture(&zj, &support);
        let (zt_ech, zt_pivots) = f2core::rref(&zt);
        let dim = zt_pivots.len();
        let enumerable = dim <= 20 && w - dim <= 20;
        let trig_ok = if enumerable {
            // Signs of all Z_j elements via the character on the basis.
            let basis_rows: Vec<F2Vector> = (0..dim).map(|i| zt_ech.row(i).clone()).collect();
            let basis_signs: Vec<bool> = basis_rows
                .iter()
                .map(|row| {
                    let z = embed(row, &support, n);
                    actual_sign_exponent(code, &z) == Some(2)
                })
                .collect();
            let mut elements: Vec<(F2Vector, bool)> = Vec::with_capacity(1 << dim);
            for m in 0..1u64 << dim {
                let mut v = F2Vector::zero(w);
                let mut neg = false;
                for (i, row) in basis_rows.iter().enumerate() {
                    if m >> i & 1 == 1 {
                        v.xor_assign(row);
                        neg ^= basis_signs[i];
                    }
                }
                elements.push((v, neg));
            }
            let sum_at = |y: &F2Vector| -> Complex64 {
                let mut acc = Complex64::new(0.0, 0.0);
                for (v, neg) in &elements {
                    let wt = v.xor(y).weight() as i32;
                    let mut term = Complex64::new(0.0, 1.0).powi(wt) * tan.powi(wt);
                    if *neg {
                        term = -term;
                    }
                    acc += term;
                }
                acc
            };
            let mut ok = (sum_at(&F2Vector::zero(w))
                - Complex64::new(sec.powi(w as i32), 0.0))
            .norm()
                < 1e-9;
            if ok {
                // Coset representatives of Z_j inside {y <= a}: free bits
                // at the non-pivot positions of the echelon form.
                let free_cols: Vec<usize> = (0..w).filter(|c| !zt_pivots.contains(c)).collect();
                for m in 1..1u64 << free_cols.len() {
                    let mut y = F2Vector::zero(w);
                    for (i, &c) in free_cols.iter().enumerate() {
                        if m >> i & 1 == 1 {
                            y.set(c, true);
                        }
                    }
                    if sum_at(&y).norm() > 1e-9 {
                        ok = false;
                        break;
                    }
                }
            }
            Some(ok)
        } else {
            None
        };
        let structural_ok = structural.as_ref().map(|v| {
            v.reports
                .iter()
                .find(|rep| rep.x_part == a)
                .map(|rep| rep.structure_ok() && rep.signs_ok)
                .unwrap_or(false)
        });
        if let (Some(t), Some(s)) = (trig_ok, structural_ok) {
            assert_eq!(
                t, s,
                "trigonometric and exact level-3 checks disagree on class {a}"
            );
        }
        let class_ok = match (trig_ok, structural_ok) {
            (Some(t), _) => t,
            (None, Some(s)) => s,
            (None, None) => {
                return Err(Error::SizeCap(format!(
                    "class {a} is too large for the trigonometric sums"
                )))
            }
        };
        supported &= class_ok;
        reports.push(ZRotationReport {
            x_part: a,
            trig_ok,
            structural_ok,
        });
    }
    Ok(ZRotationVerdict { supported, reports })
}

/// `2^ell` divides `m - 2 w_H(v)` for every codeword of a self-dual code.
pub fn selfdual_divisibility(c: &F2Matrix, ell: u32) -> Result<bool, Error> {
    let m = c.cols();
    let (ech, pivots) = f2core::rref(c);
    let dim = pivots.len();
    if dim * 2 != m {
        return Err(Error::InvalidCode("code is not half-dimension".into()));
    }
    for i in 0..dim {
        for j in i..dim {
            if ech.row(i).overlap(ech.row(j)) % 2 != 0 {
                return Err(Error::InvalidCode("code is not self-orthogonal".into()));
            }
        }
    }
    if dim > ENUM_CAP {
        return Err(Error::SizeCap("self-dual code too large to enumerate".into()));
    }
    let modulus = 1i64 << ell;
    for mask in 0..1u64 << dim {
        let mut v = F2Vector::zero(m);
        for i in 0..dim {
            if mask >> i & 1 == 1 {
                v.xor_assign(ech.row(i));
            }
        }
        if (m as i64 - 2 * v.weight() as i64).rem_euclid(modulus) != 0 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Drop the mixed B-block of a stabilizer generator matrix, yielding the
/// CSS code of the sufficiency construction. Returns the new code and a
/// warning when the input is degenerate (the distance bound then rests on
/// an extra assumption).
pub fn css_t_sufficiency(code: &StabilizerCode) -> Result<(StabilizerCode, Option<String>), Error> {
    let n = code.num_qubits();
    let mut x_rows: Vec<F2Vector> = Vec::new();
    let mut z_rows: Vec<F2Vector> = Vec::new();
    for g in code.generators() {
        if g.x_part().is_zero() {
            z_rows.push(g.z_part().clone());
        } else {
            x_rows.push(g.x_part().clone());
        }
    }
    let x_mat = if x_rows.is_empty() {
        F2Matrix::zero(0, n)
    } else {
        F2Matrix::from_rows(x_rows)
    };
    let z_mat = if z_rows.is_empty() {
        F2Matrix::zero(0, n)
    } else {
        F2Matrix::from_rows(z_rows)
    };
    // C2 = <A, C> (the X supports), C1 = dual of <D> (the pure-Z rows).
    // The pure-Z subgroup is unchanged, so its generators keep the signs
    // they carry in the input group; dropped B blocks leave X signs free.
    let c2 = x_mat;
    let c1 = f2core::dual_basis(&z_mat);
    let probe = crate::stabilizer::CssCode::new(c1.clone(), c2.clone(), None)?;
    let x_signs = vec![1i8; probe.x_stabilizers().len()];
    let z_signs: Vec<i8> = probe
        .z_stabilizers()
        .iter()
        .map(|z| {
            actual_sign_exponent(code, z)
                .map(|kappa| if kappa == 2 { -1 } else { 1 })
                .unwrap_or(1)
        })
        .collect();
    let css = crate::stabilizer::CssCode::new(c1, c2, Some((x_signs, z_signs)))?;
    let new_code = css.to_stabilizer_code()?;
    let warning = match code.distance() {
        Some(d) => {
            let degenerate = code.generators().iter().any(|g| g.weight() < d);
            degenerate.then(|| {
                "input code is degenerate: the distance bound assumes low-weight \
                 normalizer vectors stay outside the dropped block"
                    .to_string()
            })
        }
        None => Some("distance not computed; degeneracy caveat unchecked".to_string()),
    };
    Ok((new_code, warning))
}
