//! Chevalley–Eilenberg calculus on left-invariant forms of a Lie algebra:
//! exterior products, the differential `d`, contractions, pull-back by an
//! endomorphism, and the invariant SU(2)-structure system.
//!
//! Forms are stored on the dual basis `{v^i}` as sums of monomials
//! `v^{i₁…i_p}` (`i₁ < … < i_p`) encoded as bitmasks. The differential uses
//! `dα(x, y) = −α([x, y])` on 1-forms, so `[v₂, v₃] = −v₁` gives `dv¹ = v^{23}`.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::linalg::{Matrix, Vector};
use crate::qla::LieAlgebra;
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormError {
    #[error("endomorphism does not square to −1")]
    NotAlmostComplex,
}

/// A (possibly inhomogeneous) left-invariant form.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct InvariantForm {
    n: usize,
    terms: BTreeMap<u32, Scalar>,
}

fn indices(mask: u32) -> Vec<usize> {
    (0..32).filter(|b| mask & (1 << b) != 0).collect()
}

/// Sign of `v^A ∧ v^B` relative to `v^{A∪B}`, or `None` if they overlap.
fn wedge_sign(a: u32, b: u32) -> Option<i64> {
    if a & b != 0 {
        return None;
    }
    let mut swaps = 0u32;
    for j in indices(b) {
        // elements of a greater than j must pass j
        swaps += (a >> (j + 1)).count_ones();
    }
    Some(if swaps.is_multiple_of(2) { 1 } else { -1 })
}

impl InvariantForm {
    pub fn zero(n: usize) -> InvariantForm {
        InvariantForm { n, terms: BTreeMap::new() }
    }

    /// `c · v^{i₁} ∧ … ∧ v^{i_p}` for an arbitrary index order.
    pub fn monomial(n: usize, idx: &[usize], c: Scalar) -> InvariantForm {
        let mut f = InvariantForm::constant(n, c);
        for &i in idx {
            f = f.wedge(&InvariantForm::one_form(n, i));
        }
        f
    }

    pub fn constant(n: usize, c: Scalar) -> InvariantForm {
        let mut f = InvariantForm::zero(n);
        f.add_term(0, c);
        f
    }

    pub fn one_form(n: usize, i: usize) -> InvariantForm {
        let mut f = InvariantForm::zero(n);
        f.add_term(1 << i, Scalar::one());
        f
    }

    /// The 1-form `Σ c_i v^i`.
    pub fn from_covector(c: &Vector) -> InvariantForm {
        let mut f = InvariantForm::zero(c.len());
        for (i, x) in c.0.iter().enumerate() {
            f.add_term(1 << i, x.clone());
        }
        f
    }

    fn add_term(&mut self, mask: u32, c: Scalar) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(mask).or_insert_with(Scalar::zero);
        *e = &*e + &c;
        if e.is_zero() {
            self.terms.remove(&mask);
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (Vec<usize>, &Scalar)> {
        self.terms.iter().map(|(m, c)| (indices(*m), c))
    }

    /// Degrees present in this form.
    pub fn degrees(&self) -> Vec<usize> {
        let mut d: Vec<usize> = self.terms.keys().map(|m| m.count_ones() as usize).collect();
        d.dedup();
        d
    }

    pub fn add(&self, o: &InvariantForm) -> InvariantForm {
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(*m, c.clone());
        }
        out
    }

    pub fn sub(&self, o: &InvariantForm) -> InvariantForm {
        self.add(&o.scale(&Scalar::int(-1)))
    }

    pub fn scale(&self, c: &Scalar) -> InvariantForm {
        let mut out = InvariantForm::zero(self.n);
        for (m, x) in &self.terms {
            out.add_term(*m, x * c);
        }
        out
    }

    pub fn wedge(&self, o: &InvariantForm) -> InvariantForm {
        let mut out = InvariantForm::zero(self.n.max(o.n));
        for (a, x) in &self.terms {
            for (b, y) in &o.terms {
                if let Some(s) = wedge_sign(*a, *b) {
                    out.add_term(a | b, x * y * Scalar::int(s));
                }
            }
        }
        out
    }

    /// Value on basis vectors `v_{i₁}, …, v_{i_p}` (the degree-p part).
    pub fn eval(&self, idx: &[usize]) -> Scalar {
        let mut mask = 0u32;
        for &i in idx {
            if mask & (1 << i) != 0 {
                return Scalar::zero();
            }
            mask |= 1 << i;
        }
        let Some(c) = self.terms.get(&mask) else {
            return Scalar::zero();
        };
        // sign of the permutation sorting idx
        let mut inv = 0;
        for a in 0..idx.len() {
            for b in a + 1..idx.len() {
                if idx[a] > idx[b] {
                    inv += 1;
                }
            }
        }
        if inv % 2 == 0 {
            c.clone()
        } else {
            -c
        }
    }

    /// Interior product `i_X`, an antiderivation with `i_X v^j = v^j(X)`.
    pub fn contract(&self, x: &Vector) -> InvariantForm {
        let mut out = InvariantForm::zero(self.n);
        for (m, c) in &self.terms {
            for (pos, i) in indices(*m).into_iter().enumerate() {
                if x[i].is_zero() {
                    continue;
                }
                let s = if pos % 2 == 0 { Scalar::one() } else { Scalar::int(-1) };
                out.add_term(m & !(1 << i), c * &x[i] * s);
            }
        }
        out
    }

    /// Pull-back `(A*α)(x₁,…) = α(Ax₁,…)`; `a` has the images of basis
    /// vectors as columns.
    pub fn pullback(&self, a: &Matrix) -> InvariantForm {
        let n = self.n;
        let pulled: Vec<InvariantForm> = (0..n)
            .map(|k| InvariantForm::from_covector(&a.row(k)))
            .collect();
        let mut out = InvariantForm::zero(n);
        for (m, c) in &self.terms {
            let mut t = InvariantForm::constant(n, c.clone());
            for i in indices(*m) {
                t = t.wedge(&pulled[i]);
            }
            out = out.add(&t);
        }
        out
    }

    pub fn show(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, c)| {
                let idx = indices(*m);
                let mono = if idx.is_empty() {
                    "1".to_string()
                } else {
                    idx.iter().map(|&i| names[i].clone()).collect::<Vec<_>>().join("∧")
                };
                format!("({c})*{mono}")
            })
            .collect();
        parts.join(" + ")
    }
}

impl fmt::Debug for InvariantForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (1..=self.n).map(|i| format!("v^{i}")).collect();
        write!(f, "{}", self.show(&names))
    }
}

/// The Chevalley–Eilenberg differential.
pub fn ce_d(h: &LieAlgebra, alpha: &InvariantForm) -> InvariantForm {
    let n = h.dim();
    let dv: Vec<InvariantForm> = (0..n)
        .map(|k| {
            let mut f = InvariantForm::zero(n);
            for i in 0..n {
                for j in i + 1..n {
                    let c = h.constant(i, j, k);
                    if !c.is_zero() {
                        f.add_term((1 << i) | (1 << j), -c);
                    }
                }
            }
            f
        })
        .collect();
    let mut out = InvariantForm::zero(n);
    for (m, c) in &alpha.terms {
        let idx = indices(*m);
        for (r, &k) in idx.iter().enumerate() {
            let left: u32 = idx[..r].iter().map(|&i| 1u32 << i).sum();
            let right: u32 = idx[r + 1..].iter().map(|&i| 1u32 << i).sum();
            let mut l = InvariantForm::zero(n);
            l.add_term(left, c.clone());
            let mut rr = InvariantForm::zero(n);
            rr.add_term(right, Scalar::one());
            let t = l.wedge(&dv[k]).wedge(&rr);
            let t = if r % 2 == 0 { t } else { t.scale(&Scalar::int(-1)) };
            out = out.add(&t);
        }
    }
    out
}

fn check_almost_complex(j: &Matrix) -> Result<(), FormError> {
    let n = j.rows;
    if j.mul(j) != Matrix::identity(n).scale(&Scalar::int(-1)) {
        return Err(FormError::NotAlmostComplex);
    }
    Ok(())
}

/// `d^c ω = −dω(J·, J·, J·)` for a 2-form `ω`; `j` has the images of basis
/// vectors as columns.
pub fn dc(h: &LieAlgebra, omega: &InvariantForm, j: &Matrix) -> Result<InvariantForm, FormError> {
    check_almost_complex(j)?;
    Ok(ce_d(h, omega).pullback(j).scale(&Scalar::int(-1)))
}

/// Residuals of the invariant SU(2)-structure system.
#[derive(Clone, Debug, Serialize)]
pub struct SuStructureReport {
    /// `dΨ − θ∧Ψ`
    pub d_psi: String,
    /// `dθ`
    pub d_theta: String,
    /// `dd^cω`
    pub ddc_omega: String,
    /// `H + d^cω`
    pub torsion: String,
    /// `ω∧Ψ`
    pub compatibility: String,
    /// `dω − θ∧ω` (Lee form equation)
    pub lee: String,
    pub pass: bool,
}

/// Check `dΨ = θ∧Ψ`, `dθ = 0`, `dd^cω = 0`, `H = −d^cω` and `ω∧Ψ = 0`.
pub fn verify_su_structure(
    h: &LieAlgebra,
    omega: &InvariantForm,
    psi: &InvariantForm,
    theta: &InvariantForm,
    torsion: &InvariantForm,
    j: &Matrix,
) -> Result<SuStructureReport, FormError> {
    let names: Vec<String> = h.names().iter().map(|s| crate::qla::dual_name(s)).collect();
    let r_psi = ce_d(h, psi).sub(&theta.wedge(psi));
    let r_theta = ce_d(h, theta);
    let dco = dc(h, omega, j)?;
    let r_ddc = ce_d(h, &dco);
    let r_h = torsion.add(&dco);
    let r_compat = omega.wedge(psi);
    let r_lee = ce_d(h, omega).sub(&theta.wedge(omega));
    let pass = [&r_psi, &r_theta, &r_ddc, &r_h, &r_compat].iter().all(|f| f.is_zero());
    Ok(SuStructureReport {
        d_psi: r_psi.show(&names),
        d_theta: r_theta.show(&names),
        ddc_omega: r_ddc.show(&names),
        torsion: r_h.show(&names),
        compatibility: r_compat.show(&names),
        lee: r_lee.show(&names),
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qla::tests::su2r;
    use crate::scalar::Field;
    use proptest::prelude::*;

    fn h() -> LieAlgebra {
        su2r(&Field::base(), false).unwrap()
    }

    #[test]
    fn structure_equations() {
        let h = h();
        assert_eq!(ce_d(&h, &InvariantForm::one_form(4, 0)), InvariantForm::monomial(4, &[1, 2], Scalar::one()));
        assert_eq!(ce_d(&h, &InvariantForm::one_form(4, 1)), InvariantForm::monomial(4, &[2, 0], Scalar::one()));
        assert!(ce_d(&h, &InvariantForm::one_form(4, 3)).is_zero());
        assert!(ce_d(&h, &InvariantForm::monomial(4, &[0, 1, 2], Scalar::one())).is_zero());
    }

    #[test]
    fn not_almost_complex_rejected() {
        let h = h();
        let w = InvariantForm::monomial(4, &[0, 1], Scalar::one());
        assert_eq!(dc(&h, &w, &Matrix::identity(4)).unwrap_err(), FormError::NotAlmostComplex);
    }

    fn arb_form() -> impl Strategy<Value = InvariantForm> {
        proptest::collection::vec((0u32..16, -3i64..4), 1..6).prop_map(|ts| {
            let mut f = InvariantForm::zero(4);
            for (m, c) in ts {
                f.add_term(m, Scalar::int(c));
            }
            f
        })
    }

    proptest! {
        #[test]
        fn d_squared_vanishes(a in arb_form()) {
            let h = h();
            prop_assert!(ce_d(&h, &ce_d(&h, &a)).is_zero());
        }

        #[test]
        fn leibniz(a in arb_form(), b in arb_form(), p in 0usize..5) {
            let h = h();
            // restrict a to degree p so the sign is well defined
            let mut ap = InvariantForm::zero(4);
            for (m, c) in &a.terms {
                if m.count_ones() as usize == p {
                    ap.add_term(*m, c.clone());
                }
            }
            let lhs = ce_d(&h, &ap.wedge(&b));
            let sign = if p % 2 == 0 { Scalar::one() } else { Scalar::int(-1) };
            let rhs = ce_d(&h, &ap).wedge(&b).add(&ap.wedge(&ce_d(&h, &b)).scale(&sign));
            prop_assert_eq!(lhs, rhs);
        }
    }
}
