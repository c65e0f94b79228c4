//! Classical Reed-Muller codes and the quantum Reed-Muller family.
//!
//! Evaluation vectors index points as (x_m, ..., x_1) with x_1 the least
//! significant bit. QRM(r, m) is the CSS pair C2 = RM(r-1, m) inside
//! C1 = RM(r, m); its logical X generators are the degree-r monomial rows,
//! and the transversal pi/2^{m/r} Z-rotation induces the logical phase
//! polynomial built from partitions of the m variables into m/r blocks of
//! size r.

use crate::f2core::{self, F2Matrix, F2Vector};
use crate::stabilizer::CssCode;
use crate::Error;

/// A monomial in m binary variables, stored as the variable-selector d.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Monomial {
    d: F2Vector,
}

impl Monomial {
    pub fn new(d: F2Vector) -> Self {
        Monomial { d }
    }

    /// The monomial x_{i1} ... x_{it} from 1-indexed variable indices.
    pub fn from_vars(m: usize, vars: &[usize]) -> Self {
        let mut d = F2Vector::zero(m);
        for &v in vars {
            assert!(v >= 1 && v <= m);
            d.set(v - 1, true);
        }
        Monomial { d }
    }

    pub fn degree(&self) -> usize {
        self.d.weight()
    }

    pub fn selector(&self) -> &F2Vector {
        &self.d
    }

    pub fn vars(&self) -> Vec<usize> {
        self.d.support().iter().map(|i| i + 1).collect()
    }

    /// Evaluation vector over all 2^m points; x_1 is the least significant
    /// bit of the point index.
    pub fn evaluate(&self, m: usize) -> F2Vector {
        assert_eq!(self.d.len(), m);
        let mut ev = F2Vector::zero(1 << m);
        for p in 0..1usize << m {
            let all_set = self
                .d
                .support()
                .iter()
                .all(|&i| p >> i & 1 == 1);
            if all_set {
                ev.set(p, true);
            }
        }
        ev
    }
}

/// All monomials of the given degree, in lexicographic variable order
/// (x1x2 before x1x3 before x2x3).
pub fn monomials_of_degree(m: usize, degree: usize) -> Vec<Monomial> {
    let mut out = Vec::new();
    let mut current = Vec::new();
    fn rec(m: usize, degree: usize, start: usize, current: &mut Vec<usize>, out: &mut Vec<Monomial>) {
        if current.len() == degree {
            out.push(Monomial::from_vars(m, current));
            return;
        }
        for v in start..=m {
            current.push(v);
            rec(m, degree, v + 1, current, out);
            current.pop();
        }
    }
    rec(m, degree, 1, &mut current, &mut out);
    out
}

/// Generator matrix of RM(r, m): evaluation vectors of all monomials of
/// degree <= r, ordered by degree then lexicographically.
pub fn rm_generator(r: usize, m: usize) -> Result<F2Matrix, Error> {
    if r > m {
        return Err(Error::InvalidInput(format!("need r <= m, got r={r} m={m}")));
    }
    let mut rows = Vec::new();
    for t in 0..=r {
        for mono in monomials_of_degree(m, t) {
            rows.push(mono.evaluate(m));
        }
    }
    Ok(F2Matrix::from_rows(rows))
}

/// The QRM(r, m) code: C2 = RM(r-1, m), C1 = RM(r, m), logical X
/// generators the degree-r monomial rows.
pub fn qrm_construct(r: usize, m: usize) -> Result<CssCode, Error> {
    if r < 1 || 2 * r > m {
        return Err(Error::InvalidInput(format!(
            "QRM needs 1 <= r <= m/2, got r={r} m={m}"
        )));
    }
    let c2 = rm_generator(r - 1, m)?;
    let c1 = rm_generator(r, m)?;
    CssCode::new(c1, c2, None)
}

/// The logical phase polynomial of QRM(r, m): one term per partition of
/// the m variables into m/r blocks of size r.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LogicalGatePoly {
    m: usize,
    r: usize,
    /// Each term is the sorted list of logical-qubit indices (0-based into
    /// the degree-r monomial order).
    terms: Vec<Vec<usize>>,
}

impl LogicalGatePoly {
    pub fn terms(&self) -> &[Vec<usize>] {
        &self.terms
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Evaluate q(f) mod 2 at a logical basis selector.
    pub fn evaluate(&self, selector: &F2Vector) -> bool {
        let mut acc = false;
        for term in &self.terms {
            if term.iter().all(|&q| selector.get(q)) {
                acc = !acc;
            }
        }
        acc
    }

    /// The blocks of each term as monomials.
    pub fn term_monomials(&self) -> Vec<Vec<Monomial>> {
        let monos = monomials_of_degree(self.m, self.r);
        self.terms
            .iter()
            .map(|t| t.iter().map(|&q| monos[q].clone()).collect())
            .collect()
    }

    /// Render as a sum of products of v_i (1-indexed logical qubits).
    pub fn to_string_poly(&self) -> String {
        let mut parts: Vec<String> = Vec::new();
        for term in &self.terms {
            let factors: Vec<String> = term.iter().map(|q| format!("v{}", q + 1)).collect();
            parts.push(factors.join("*"));
        }
        parts.join(" + ")
    }
}

/// Number of partitions of m elements into m/r blocks of size r:
/// `m! / ((r!)^{m/r} (m/r)!)`.
pub fn partition_count(r: usize, m: usize) -> u128 {
    assert!(r >= 1 && m % r == 0);
    let fact = |x: usize| -> u128 { (1..=x as u128).product() };
    fact(m) / (fact(r).pow((m / r) as u32) * fact(m / r))
}

/// Enumerate the logical gate polynomial of QRM(r, m); requires r | m.
pub fn qrm_logical_action(r: usize, m: usize) -> Result<LogicalGatePoly, Error> {
    if r < 1 || 2 * r > m {
        return Err(Error::InvalidInput(format!(
            "QRM needs 1 <= r <= m/2, got r={r} m={m}"
        )));
    }
    if m % r != 0 {
        return Err(Error::InvalidInput(format!("r = {r} must divide m = {m}")));
    }
    let monos = monomials_of_degree(m, r);
    let index_of = |vars: &[usize]| -> usize {
        monos
            .iter()
            .position(|mo| mo.vars() == vars)
            .expect("block is a degree-r monomial")
    };
    // Partitions of {1..m} into blocks of size r: always group the smallest
    // unused variable with r-1 larger partners.
    let mut terms: Vec<Vec<usize>> = Vec::new();
    let mut used = vec![false; m + 1];
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    fn rec(
        m: usize,
        r: usize,
        used: &mut Vec<bool>,
        blocks: &mut Vec<Vec<usize>>,
        terms: &mut Vec<Vec<usize>>,
        index_of: &dyn Fn(&[usize]) -> usize,
    ) {
        let Some(first) = (1..=m).find(|&v| !used[v]) else {
            let mut term: Vec<usize> = blocks.iter().map(|b| index_of(b)).collect();
            term.sort_unstable();
            terms.push(term);
            return;
        };
        used[first] = true;
        let free: Vec<usize> = (first + 1..=m).filter(|&v| !used[v]).collect();
        // Choose r-1 partners for `first`.
        let mut choice = Vec::new();
        fn choose(
            free: &[usize],
            start: usize,
            want: usize,
            choice: &mut Vec<usize>,
            ctx: &mut (usize, usize, &mut Vec<bool>, &mut Vec<Vec<usize>>, &mut Vec<Vec<usize>>, &dyn Fn(&[usize]) -> usize),
            first: usize,
        ) {
            if choice.len() == want {
                let (m, r, used, blocks, terms, index_of) = (ctx.0, ctx.1, &mut *ctx.2, &mut *ctx.3, &mut *ctx.4, ctx.5);
                let mut block = vec![first];
                block.extend(choice.iter().copied());
                for &v in choice.iter() {
                    used[v] = true;
                }
                blocks.push(block);
                rec(m, r, used, blocks, terms, index_of);
                blocks.pop();
                for &v in choice.iter() {
                    used[v] = false;
                }
                return;
            }
            for idx in start..free.len() {
                choice.push(free[idx]);
                choose(free, idx + 1, want, choice, ctx, first);
                choice.pop();
            }
        }
        let mut ctx = (m, r, used, blocks, terms, index_of);
        choose(&free, 0, r - 1, &mut choice, &mut ctx, first);
        ctx.2[first] = false;
    }
    rec(m, r, &mut used, &mut blocks, &mut terms, &index_of);
    terms.sort();
    debug_assert_eq!(terms.len() as u128, partition_count(r, m));
    Ok(LogicalGatePoly { m, r, terms })
}

/// Weight residue of the coset `x_selector . G_X + C2` modulo the given
/// power of two. The residue must be constant over the coset; a
/// non-constant residue signals a broken construction and is an error.
pub fn coset_weight_residue(
    css: &CssCode,
    x_selector: &F2Vector,
    modulus: u64,
) -> Result<u64, Error> {
    let k = css.x_coset().rows();
    if x_selector.len() != k {
        return Err(Error::DimensionMismatch("selector length != k".into()));
    }
    let gens = css.x_stabilizers();
    if gens.len() > 26 {
        return Err(Error::SizeCap("C2 too large to enumerate".into()));
    }
    let base = css.x_coset().mul_vec(x_selector);
    let mut residue: Option<u64> = None;
    for mask in 0..1u64 << gens.len() {
        let mut u = base.clone();
        for (i, g) in gens.iter().enumerate() {
            if mask >> i & 1 == 1 {
                u.xor_assign(g);
            }
        }
        let w = u.weight() as u64 % modulus;
        match residue {
            None => residue = Some(w),
            Some(prev) if prev != w => {
                return Err(Error::InvalidCode(format!(
                    "coset weight residue not constant: {prev} vs {w}"
                )))
            }
            _ => {}
        }
    }
    Ok(residue.unwrap())
}

/// The [[15,1,3]] punctured quantum Reed-Muller code: C1 = punctured
/// RM(1,4), C2 = the simplex code (shortened RM(1,4)).
pub fn css_1513() -> CssCode {
    let m = 4;
    let full = rm_generator(1, m).unwrap();
    let cols: Vec<usize> = (1..1 << m).collect();
    let all_rows: Vec<usize> = (0..full.rows()).collect();
    let punctured = full.select(&all_rows, &cols);
    // C2 drops the all-ones row (shortening); C1 keeps it, listed after the
    // simplex rows so the coset representative is the all-ones row.
    let c2 = punctured.select(&[1, 2, 3, 4], &(0..15).collect::<Vec<_>>());
    let c1 = c2.vstack(&punctured.select(&[0], &(0..15).collect::<Vec<_>>()));
    CssCode::new(c1, c2, None).expect("[[15,1,3]] construction is valid")
}

/// The [[16,3,2]] code from decreasing monomial codes:
/// C2 = <1, x1, x2>, C1 = C2 + <x3, x4, x1 x2>.
pub fn css_1632() -> CssCode {
    let m = 4;
    let ev = |vars: &[usize]| Monomial::from_vars(m, vars).evaluate(m);
    let c2 = F2Matrix::from_rows(vec![ev(&[]), ev(&[1]), ev(&[2])]);
    let c1 = c2.vstack(&F2Matrix::from_rows(vec![ev(&[3]), ev(&[4]), ev(&[1, 2])]));
    CssCode::new(c1, c2, None).expect("[[16,3,2]] construction is valid")
}

/// The [[128,21,4]] code: C2 = RM(1,7), C1 = RM(2,7).
pub fn css_128_21_4() -> CssCode {
    qrm_construct(2, 7).expect("[[128,21,4]] construction is valid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transversal;

    #[test]
    fn rm_generator_examples() {
        let g = rm_generator(0, 3).unwrap();
        assert_eq!(g.rows(), 1);
        assert_eq!(g.row(0).weight(), 8);
        // RM(1,3) is self-dual.
        let g13 = rm_generator(1, 3).unwrap();
        assert_eq!(g13.rows(), 4);
        let dual = f2core::dual_basis(&g13);
        assert_eq!(f2core::rank(&dual), 4);
        for i in 0..dual.rows() {
            assert!(f2core::in_row_space(&g13, dual.row(i)));
        }
    }

    #[test]
    fn rm_minimum_distances() {
        for (r, m) in [(1usize, 3usize), (2, 4)] {
            let g = rm_generator(r, m).unwrap();
            let dim = g.rows();
            let mut min_w = usize::MAX;
            for mask in 1..1u64 << dim {
                let mut v = F2Vector::zero(1 << m);
                for i in 0..dim {
                    if mask >> i & 1 == 1 {
                        v.xor_assign(g.row(i));
                    }
                }
                min_w = min_w.min(v.weight());
            }
            assert_eq!(min_w, 1 << (m - r), "RM({r},{m})");
        }
    }

    #[test]
    fn rm_dual_is_rm() {
        // dual of RM(1,4) = RM(2,4).
        let g = rm_generator(1, 4).unwrap();
        let dual = f2core::dual_basis(&g);
        let rm24 = rm_generator(2, 4).unwrap();
        assert_eq!(f2core::rank(&dual), rm24.rows());
        for i in 0..dual.rows() {
            assert!(f2core::in_row_space(&rm24, dual.row(i)));
        }
    }

    #[test]
    fn evaluation_point_ordering() {
        // x1 is the least significant bit of the point index.
        let ev = Monomial::from_vars(3, &[1]).evaluate(3);
        for p in 0..8 {
            assert_eq!(ev.get(p), p & 1 == 1);
        }
        let ev = Monomial::from_vars(3, &[3]).evaluate(3);
        for p in 0..8 {
            assert_eq!(ev.get(p), p >> 2 & 1 == 1);
        }
    }

    #[test]
    fn qrm_parameters() {
        let q13 = qrm_construct(1, 3).unwrap();
        assert_eq!((q13.num_qubits(), q13.num_logical()), (8, 3));
        assert_eq!(q13.to_stabilizer_code().unwrap().distance(), Some(2));
        let q26 = qrm_construct(2, 6).unwrap();
        assert_eq!((q26.num_qubits(), q26.num_logical()), (64, 15));
        let q39 = qrm_construct(3, 9).unwrap();
        assert_eq!((q39.num_qubits(), q39.num_logical()), (512, 84));
        assert!(qrm_construct(4, 6).is_err());
    }

    #[test]
    fn logical_action_term_counts() {
        assert_eq!(qrm_logical_action(1, 3).unwrap().num_terms(), 1);
        assert_eq!(qrm_logical_action(2, 4).unwrap().num_terms(), 3);
        assert_eq!(qrm_logical_action(2, 6).unwrap().num_terms(), 15);
        assert_eq!(partition_count(1, 3), 1);
        assert_eq!(partition_count(2, 4), 3);
        assert_eq!(partition_count(2, 6), 15);
        assert_eq!(partition_count(3, 9), 280);
        assert!(qrm_logical_action(2, 7).is_err()); // r does not divide m
    }

    #[test]
    fn qrm13_polynomial_is_ccz() {
        let poly = qrm_logical_action(1, 3).unwrap();
        assert_eq!(poly.terms(), &[vec![0, 1, 2]]);
        assert_eq!(poly.to_string_poly(), "v1*v2*v3");
    }

    #[test]
    fn term_count_matches_enumeration_up_to_m9() {
        for (r, m) in [(1, 3), (1, 4), (2, 4), (2, 6), (3, 6), (1, 8), (2, 8), (4, 8), (3, 9)] {
            if r * 2 > m {
                continue;
            }
            let poly = qrm_logical_action(r, m).unwrap();
            assert_eq!(poly.num_terms() as u128, partition_count(r, m), "({r},{m})");
            // Terms are distinct partitions.
            let set: std::collections::HashSet<_> = poly.terms().iter().collect();
            assert_eq!(set.len(), poly.num_terms());
        }
    }

    #[test]
    fn coset_residues_qrm26() {
        let css = qrm_construct(2, 6).unwrap();
        let poly = qrm_logical_action(2, 6).unwrap();
        // f = x1x2 + x3x4 + x5x6: selector picks those three qubits.
        let monos = monomials_of_degree(6, 2);
        let mut sel = F2Vector::zero(15);
        for (i, mo) in monos.iter().enumerate() {
            if [vec![1, 2], vec![3, 4], vec![5, 6]].contains(&mo.vars()) {
                sel.set(i, true);
            }
        }
        assert!(poly.evaluate(&sel));
        assert_eq!(coset_weight_residue(&css, &sel, 8).unwrap(), 4);
        // f = 0.
        let zero = F2Vector::zero(15);
        assert_eq!(coset_weight_residue(&css, &zero, 8).unwrap(), 0);
    }

    #[test]
    fn coset_residue_qrm13() {
        let css = qrm_construct(1, 3).unwrap();
        // f = x1: both coset vectors have weight 4.
        let mut sel = F2Vector::zero(3);
        sel.set(0, true);
        assert_eq!(coset_weight_residue(&css, &sel, 8).unwrap(), 4);
    }

    #[test]
    fn induced_diagonal_matches_polynomial() {
        // r >= 2: residues equal 2^{m/r - 1} q(f) exactly. r = 1: equal
        // after the known logical transversal-X correction and global sign.
        let css = qrm_construct(2, 6).unwrap();
        let poly = qrm_logical_action(2, 6).unwrap();
        for sel_bits in 0..1u64 << 15 {
            let sel = F2Vector::from_index(15, sel_bits);
            let res = coset_weight_residue(&css, &sel, 8).unwrap();
            let expect = if poly.evaluate(&sel) { 4 } else { 0 };
            assert_eq!(res, expect);
        }
        for m in [3usize, 4] {
            let css = qrm_construct(1, m).unwrap();
            let poly = qrm_logical_action(1, m).unwrap();
            let k = m;
            let modulus = 1u64 << m;
            let ones = F2Vector::from_bits(&vec![1u8; k]);
            for sel_bits in 0..1u64 << k {
                let sel = F2Vector::from_index(k, sel_bits);
                let res = coset_weight_residue(&css, &sel, modulus).unwrap();
                let raw_sign = res == modulus / 2; // mu exponent of the raw diagonal
                let corrected = !poly.evaluate(&sel.xor(&ones)); // global -1 times mu(q)
                assert_eq!(raw_sign, corrected, "m={m} sel={sel}");
            }
        }
    }

    #[test]
    fn qrm_passes_css_t_when_r_small() {
        // r <= m/3 supports transversal T.
        for (r, m) in [(1usize, 3usize), (1, 4), (2, 6)] {
            let css = qrm_construct(r, m).unwrap();
            assert!(
                transversal::is_css_t(css.c1(), css.c2()).unwrap().is_css_t,
                "QRM({r},{m})"
            );
        }
    }

    #[test]
    fn fixture_1513() {
        let css = css_1513();
        assert_eq!((css.num_qubits(), css.num_logical()), (15, 1));
        assert_eq!(css.to_stabilizer_code().unwrap().distance(), Some(3));
        assert!(transversal::is_css_t(css.c1(), css.c2()).unwrap().is_css_t);
        // Realizes logical T-dagger, not the identity.
        let verdict = transversal::check_logical_identity(&css).unwrap();
        assert!(!verdict.holds);
    }

    #[test]
    fn fixture_1632() {
        let css = css_1632();
        assert_eq!((css.num_qubits(), css.num_logical()), (16, 3));
        assert_eq!(css.to_stabilizer_code().unwrap().distance(), Some(2));
        assert!(transversal::is_css_t(css.c1(), css.c2()).unwrap().is_css_t);
        // Generalized triorthogonality spot checks: the triple product of
        // the logical X rows is the full monomial (odd weight), pairwise
        // overlaps are even.
        let gx = css.x_coset();
        assert_eq!(gx.rows(), 3);
        let triple = gx.row(0).and(gx.row(1)).and(gx.row(2));
        assert_eq!(triple.weight() % 2, 1);
        for i in 0..3 {
            for j in i + 1..3 {
                assert_eq!(gx.row(i).overlap(gx.row(j)) % 2, 0);
            }
        }
    }

    #[test]
    fn logical_identity_on_128_21_4() {
        let css = css_128_21_4();
        assert_eq!((css.num_qubits(), css.num_logical()), (128, 21));
        let verdict = transversal::check_logical_identity(&css).unwrap();
        assert!(verdict.holds, "{:?}", verdict.failing_condition);
    }
}
