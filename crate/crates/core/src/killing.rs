//! The F-term and D-term equations on isotropic decompositions
//! `l ⊕ l̄ ⊂ g`, holomorphic divergences and the correspondence with real
//! solutions of the Killing spinor equations.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::geometry::{GeneralizedMetric, GeometryError, Side};
use crate::linalg::{Matrix, Vector};
use crate::qla::{Decomposition, QuadraticLieAlgebra, Subspace};
use crate::scalar::{rational_sign, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KillingError {
    #[error("subspace {0} is not isotropic")]
    NotIsotropic(&'static str),
    #[error("l and l̄ have different dimensions or pair degenerately")]
    Degenerate,
    #[error("divergence does not lie in l ⊕ l̄")]
    DivergenceOutside,
    #[error("no divergence was given")]
    MissingDivergence,
    #[error("not an orthogonal almost complex structure: {0}")]
    NotAlmostComplex(String),
}

/// Which of the three F-term (or D-term) equations to check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    Gravitino,
    Dilatino,
    Full,
}

/// A pair of transverse isotropic subspaces with nondegenerate sum, an
/// optional divergence, and dual bases `⟨ε_j, ε̄_k⟩ = δ_jk`.
#[derive(Clone, Debug)]
pub struct IsotropicPair {
    alg: Arc<QuadraticLieAlgebra>,
    l: Subspace,
    lbar: Subspace,
    minus: Subspace,
    dec: Decomposition,
    eps: Option<Vector>,
    e: Vec<Vector>,
    ebar: Vec<Vector>,
}

/// A bracket of two basis vectors with a component outside its target.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BracketFailure {
    /// `"l"` or `"l̄"`: which subspace the bracketed vectors come from.
    pub source: &'static str,
    pub left: usize,
    pub right: usize,
    pub offending: Vector,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FTermReport {
    pub variant: Variant,
    pub pass: bool,
    pub failures: Vec<BracketFailure>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DTermReport {
    pub variant: Variant,
    pub pass: bool,
    /// `w = Σ_j [ε_j, ε̄_j]`.
    pub w: Vector,
    /// Zero iff the equation holds.
    pub residual: Vector,
    /// Whether `w` agrees with its value in a second, random dual basis.
    pub basis_independent: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DivergenceReport {
    pub isometry: bool,
    pub holomorphic: bool,
    pub orthogonality: bool,
}

/// Reality conditions `τ(l) = l̄`, `τ(ε) = ε` and `⟨a, τ(a)⟩ > 0` on `l`;
/// positivity is only decided for Gaussian-rational data.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RealityReport {
    pub conjugate_pair: bool,
    pub real_divergence: bool,
    pub positive: Option<bool>,
}

impl IsotropicPair {
    pub fn new(
        alg: Arc<QuadraticLieAlgebra>,
        l: &[Vector],
        lbar: &[Vector],
        eps: Option<Vector>,
    ) -> Result<IsotropicPair, KillingError> {
        let l = alg.subspace(l);
        let lbar = alg.subspace(lbar);
        if !alg.is_isotropic(&l) {
            return Err(KillingError::NotIsotropic("l"));
        }
        if !alg.is_isotropic(&lbar) {
            return Err(KillingError::NotIsotropic("l̄"));
        }
        if l.dim() != lbar.dim() {
            return Err(KillingError::Degenerate);
        }
        let sum = l.sum(&lbar);
        if sum.dim() != 2 * l.dim() || alg.gram_of(sum.basis()).inverse().is_none() {
            return Err(KillingError::Degenerate);
        }
        let minus = alg.perp(&sum);
        let dec = Decomposition::new(&[l.clone(), lbar.clone(), minus.clone()]).map_err(|_| KillingError::Degenerate)?;
        if let Some(e) = &eps {
            if !sum.contains(e) {
                return Err(KillingError::DivergenceOutside);
            }
        }
        // ε_j = l-basis; ε̄_j = the dual basis inside l̄.
        let e = l.basis().to_vec();
        let pairing = Matrix::from_rows(
            &lbar.basis().iter().map(|b| Vector(e.iter().map(|a| alg.pair(a, b)).collect())).collect::<Vec<_>>(),
        );
        let inv = pairing.inverse().ok_or(KillingError::Degenerate)?;
        let ebar = combine(&inv, lbar.basis(), alg.dim());
        Ok(IsotropicPair { alg, l, lbar, minus, dec, eps, e, ebar })
    }

    /// The pair `(l̄, l)` with the same divergence.
    pub fn swapped(&self) -> IsotropicPair {
        IsotropicPair::new(self.alg.clone(), self.lbar.basis(), self.l.basis(), self.eps.clone())
            .expect("swapping preserves validity")
    }

    pub fn with_divergence(&self, eps: Option<Vector>) -> Result<IsotropicPair, KillingError> {
        IsotropicPair::new(self.alg.clone(), self.l.basis(), self.lbar.basis(), eps)
    }

    pub fn algebra(&self) -> &Arc<QuadraticLieAlgebra> {
        &self.alg
    }

    pub fn l(&self) -> &Subspace {
        &self.l
    }

    pub fn lbar(&self) -> &Subspace {
        &self.lbar
    }

    /// `V₋ = (l ⊕ l̄)^⊥`.
    pub fn complement(&self) -> &Subspace {
        &self.minus
    }

    pub fn divergence(&self) -> Option<&Vector> {
        self.eps.as_ref()
    }

    /// Dual bases `(ε_j, ε̄_j)` with `⟨ε_j, ε̄_k⟩ = δ_jk`.
    pub fn dual_bases(&self) -> (&[Vector], &[Vector]) {
        (&self.e, &self.ebar)
    }

    pub fn dim_l(&self) -> usize {
        self.e.len()
    }

    /// Components `(a_l, a_l̄, a₋)`.
    pub fn components(&self, a: &Vector) -> (Vector, Vector, Vector) {
        let mut p = self.dec.project(a);
        let m = p.pop().expect("three parts");
        let lb = p.pop().expect("three parts");
        let l = p.pop().expect("three parts");
        (l, lb, m)
    }

    /// `Σ_j [ε_j, ε̄_j]` for the given dual bases.
    fn trace_bracket(&self, e: &[Vector], ebar: &[Vector]) -> Vector {
        let mut w = Vector::zero(self.alg.dim());
        for (a, b) in e.iter().zip(ebar) {
            w = &w + &self.alg.bracket(a, b);
        }
        w
    }

    /// `w = Σ_j [ε_j, ε̄_j]`.
    pub fn w(&self) -> Vector {
        self.trace_bracket(&self.e, &self.ebar)
    }

    /// `w` recomputed in a random dual basis `ε' = Aε`, `ε̄' = A^{-T}ε̄`.
    fn w_in_random_basis(&self, seed: u64) -> Vector {
        let k = self.dim_l();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = loop {
            let mut m = Matrix::zero(k, k);
            for r in 0..k {
                for c in 0..k {
                    m[(r, c)] = Scalar::int(rng.gen_range(-3..=3));
                }
            }
            if m.inverse().is_some() {
                break m;
            }
        };
        let inv_t = a.inverse().expect("checked").transpose();
        let n = self.alg.dim();
        let e2 = combine(&a.transpose(), &self.e, n);
        let ebar2 = combine(&inv_t.transpose(), &self.ebar, n);
        self.trace_bracket(&e2, &ebar2)
    }

    /// The F-term equations: gravitino `[l,l], [l̄,l̄] ⊂ l ⊕ l̄`, dilatino
    /// `[l,l]₊ ⊂ l, [l̄,l̄]₊ ⊂ l̄`, or full `[l,l] ⊂ l, [l̄,l̄] ⊂ l̄`.
    pub fn check_fterm(&self, variant: Variant) -> FTermReport {
        let mut failures = Vec::new();
        for (source, basis, own) in [("l", &self.e, 0usize), ("l̄", &self.ebar, 1usize)] {
            for i in 0..basis.len() {
                for j in (i + 1)..basis.len() {
                    let br = self.alg.bracket(&basis[i], &basis[j]);
                    let (cl, clb, cm) = self.components(&br);
                    let other = if own == 0 { clb } else { cl };
                    let offending = match variant {
                        Variant::Gravitino => cm,
                        Variant::Dilatino => other,
                        Variant::Full => &other + &cm,
                    };
                    if !offending.is_zero() {
                        failures.push(BracketFailure { source, left: i, right: j, offending });
                    }
                }
            }
        }
        FTermReport { variant, pass: failures.is_empty(), failures }
    }

    /// The F-term gravitino equation through a basis `{w_α}` of `V₋`:
    /// `[w_α, ε_j]_l̄ = 0 = [w_α, ε̄_j]_l`.
    pub fn fterm_gravitino_via_complement(&self) -> bool {
        self.minus.basis().iter().all(|w| {
            self.e.iter().all(|e| self.components(&self.alg.bracket(w, e)).1.is_zero())
                && self.ebar.iter().all(|e| self.components(&self.alg.bracket(w, e)).0.is_zero())
        })
    }

    /// The D-term equations: gravitino `w ∈ l ⊕ l̄`, dilatino
    /// `½w₊ = ε_l̄ − ε_l`, or full `½w = ε_l̄ − ε_l`.
    pub fn check_dterm(&self, variant: Variant) -> Result<DTermReport, KillingError> {
        let w = self.w();
        let (wl, wlb, wm) = self.components(&w);
        let residual = match variant {
            Variant::Gravitino => wm,
            _ => {
                let eps = self.eps.as_ref().ok_or(KillingError::MissingDivergence)?;
                let (el, elb, _) = self.components(eps);
                let target = &elb - &el;
                let half = Scalar::rational(1, 2);
                let lhs = match variant {
                    Variant::Dilatino => (&wl + &wlb).scale(&half),
                    _ => w.scale(&half),
                };
                &lhs - &target
            }
        };
        let basis_independent = self.w_in_random_basis(0x5eed) == w;
        Ok(DTermReport { variant, pass: residual.is_zero(), w, residual, basis_independent })
    }

    /// Isometry `[ε, l⊕l̄] ⊂ l⊕l̄`, holomorphy `[ε,l] ⊂ l, [ε,l̄] ⊂ l̄`, and
    /// orthogonality `ε ⊥ [l,l] + [l̄,l̄]`.
    pub fn check_divergence(&self) -> Result<DivergenceReport, KillingError> {
        let eps = self.eps.as_ref().ok_or(KillingError::MissingDivergence)?;
        let mut isometry = true;
        let mut holomorphic = true;
        for (basis, own) in [(&self.e, 0usize), (&self.ebar, 1usize)] {
            for b in basis {
                let (cl, clb, cm) = self.components(&self.alg.bracket(eps, b));
                isometry &= cm.is_zero();
                let other = if own == 0 { clb } else { cl };
                holomorphic &= cm.is_zero() && other.is_zero();
            }
        }
        let mut orthogonality = true;
        for basis in [&self.e, &self.ebar] {
            for i in 0..basis.len() {
                for j in (i + 1)..basis.len() {
                    orthogonality &= self.alg.pair(eps, &self.alg.bracket(&basis[i], &basis[j])).is_zero();
                }
            }
        }
        Ok(DivergenceReport { isometry, holomorphic, orthogonality })
    }

    /// Full F-term and D-term equations together.
    pub fn is_solution(&self) -> Result<bool, KillingError> {
        Ok(self.check_fterm(Variant::Full).pass && self.check_dterm(Variant::Full)?.pass)
    }

    /// The reality conditions under coefficient conjugation `i ↦ −i`
    /// (parameters are assumed real).
    pub fn reality(&self) -> RealityReport {
        let conjugate_pair = self.l.conj() == self.lbar;
        let real_divergence = self.eps.as_ref().is_none_or(|e| e.conj() == *e);
        let k = self.dim_l();
        let mut h = Matrix::zero(k, k);
        for r in 0..k {
            for c in 0..k {
                h[(r, c)] = self.alg.pair(&self.e[r], &self.e[c].conj());
            }
        }
        RealityReport { conjugate_pair, real_divergence, positive: hermitian_positive(&h) }
    }
}

/// Rows of `coeffs` applied to `basis`: `out_j = Σ_k coeffs[(k, j)] basis_k`.
fn combine(coeffs: &Matrix, basis: &[Vector], n: usize) -> Vec<Vector> {
    (0..coeffs.cols)
        .map(|j| {
            let mut v = Vector::zero(n);
            for (k, b) in basis.iter().enumerate() {
                v.axpy(&coeffs[(k, j)], b);
            }
            v
        })
        .collect()
}

/// Sylvester's criterion for a Hermitian matrix with Gaussian-rational
/// entries; `None` when a leading minor is not a rational number.
fn hermitian_positive(h: &Matrix) -> Option<bool> {
    for k in 1..=h.rows {
        let mut m = Matrix::zero(k, k);
        for r in 0..k {
            for c in 0..k {
                m[(r, c)] = h[(r, c)].clone();
            }
        }
        if rational_sign(&m.determinant())? <= 0 {
            return Some(false);
        }
    }
    Some(true)
}

/// The isotropic pair `l ⊕ l̄ = V₊^{1,0} ⊕ V₊^{0,1}` with `ε = ε₊` of a
/// generalized metric with an orthogonal almost complex structure on `V₊`.
pub fn from_real_solution(m: &GeneralizedMetric, j: &Matrix, eps_plus: &Vector) -> Result<IsotropicPair, KillingError> {
    let (hol, anti) = m.eigenspaces(Side::Plus, j).map_err(|e| match e {
        GeometryError::NotAlmostComplex(s) => KillingError::NotAlmostComplex(s),
        other => KillingError::NotAlmostComplex(other.to_string()),
    })?;
    let eps = m.project(Side::Plus, eps_plus);
    IsotropicPair::new(m.algebra().clone(), hol.basis(), anti.basis(), Some(eps))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ceforms::InvariantForm;
    use crate::qla::{courant_double, LieAlgebra};
    use crate::scalar::Field;
    use crate::spinor::tests::hopf;

    fn at_solution(p: &IsotropicPair, v: &Vector) -> Vector {
        let l = p.algebra().field().parse("a/x").unwrap();
        v.map(|c| c.substitute("l", &l).unwrap())
    }

    fn hopf_pair() -> (IsotropicPair, GeneralizedMetric, Matrix, Vector) {
        let (m, j, eps) = hopf();
        let p = from_real_solution(&m, &j, &eps).unwrap();
        (p, m, j, eps)
    }

    fn trivial_double(n: usize) -> IsotropicPair {
        let lie = LieAlgebra::abelian((1..=n).map(|i| format!("e_{i}")).collect(), Field::base());
        let g = Arc::new(courant_double(&lie, &InvariantForm::zero(n)).unwrap());
        let l: Vec<Vector> = (0..n).map(|i| g.basis(i)).collect();
        let lb: Vec<Vector> = (0..n).map(|i| g.basis(n + i)).collect();
        IsotropicPair::new(g, &l, &lb, Some(Vector::zero(2 * n))).unwrap()
    }

    #[test]
    fn validation() {
        let p = trivial_double(2);
        let g = p.algebra().clone();
        let b = |i: usize| g.basis(i);
        assert_eq!(
            IsotropicPair::new(g.clone(), &[&b(0) + &b(2)], &[b(1)], None).unwrap_err(),
            KillingError::NotIsotropic("l")
        );
        assert_eq!(IsotropicPair::new(g.clone(), &[b(0)], &[b(1)], None).unwrap_err(), KillingError::Degenerate);
        assert_eq!(
            IsotropicPair::new(g.clone(), &[b(0)], &[b(2)], Some(b(1))).unwrap_err(),
            KillingError::DivergenceOutside
        );
        let (e, eb) = p.dual_bases();
        for (i, x) in e.iter().enumerate() {
            for (j, y) in eb.iter().enumerate() {
                assert_eq!(g.pair(x, y), if i == j { Scalar::one() } else { Scalar::zero() });
            }
        }
    }

    #[test]
    fn trivial_double_passes_everything() {
        let p = trivial_double(2);
        for v in [Variant::Gravitino, Variant::Dilatino, Variant::Full] {
            assert!(p.check_fterm(v).pass);
            assert!(p.check_dterm(v).unwrap().pass);
        }
        assert!(p.complement().dim() == 0);
        assert_eq!(p.check_divergence().unwrap(), DivergenceReport { isometry: true, holomorphic: true, orthogonality: true });
    }

    #[test]
    fn hopf_fterm_holds_exactly_on_shell() {
        let (p, _, _, _) = hopf_pair();
        let r = p.check_fterm(Variant::Full);
        assert!(!r.pass);
        let f = p.algebra().field().clone();
        let factor = f.parse("1 - l*x/a").unwrap();
        for fail in &r.failures {
            // Only the V₋ component survives, and it vanishes at ℓ = a/x.
            assert!(at_solution(&p, &fail.offending).is_zero());
            for c in fail.offending.iter().filter(|c| !c.is_zero()) {
                assert!(!(c / &factor).mentions("l"));
            }
        }
        assert!(p.check_fterm(Variant::Dilatino).pass);
        assert_eq!(p.check_fterm(Variant::Gravitino).pass, p.fterm_gravitino_via_complement());
    }

    #[test]
    fn hopf_dterm_matches_the_closed_form() {
        let (p, _, _, _) = hopf_pair();
        let g = p.algebra();
        let f = g.field().clone();
        let r = p.check_dterm(Variant::Full).unwrap();
        assert!(r.basis_independent);
        // w = i(−(x/a)v₁ − (2 − ℓx/a)v¹).
        let i = Scalar::i();
        let expect = &g.v("v_1").scale(&(&i * &f.parse("-x/a").unwrap()))
            + &g.v("v^1").scale(&(&i * &f.parse("-(2 - l*x/a)").unwrap()));
        assert_eq!(r.w, expect);
        assert!(!r.pass);
        assert!(at_solution(&p, &r.residual).is_zero());
        assert!(at_solution(&p, &p.check_dterm(Variant::Gravitino).unwrap().residual).is_zero());
    }

    #[test]
    fn hopf_dterm_without_divergence_fails() {
        let (p, _, _, _) = hopf_pair();
        let p0 = p.with_divergence(Some(Vector::zero(8))).unwrap();
        let r = p0.check_dterm(Variant::Dilatino).unwrap();
        assert!(!at_solution(&p, &r.residual).is_zero());
        let (wl, wlb, _) = p0.components(&r.w);
        assert_eq!(r.residual, (&wl + &wlb).scale(&Scalar::rational(1, 2)));
        assert_eq!(p.with_divergence(None).unwrap().check_dterm(Variant::Full).unwrap_err(), KillingError::MissingDivergence);
    }

    #[test]
    fn hopf_divergence_is_holomorphic() {
        let (p, _, _, _) = hopf_pair();
        let r = p.check_divergence().unwrap();
        assert!(r.holomorphic && r.isometry && r.orthogonality);
        let e1 = p.dual_bases().0[0].clone();
        let q = p.with_divergence(Some(e1)).unwrap();
        assert!(!q.check_divergence().unwrap().holomorphic);
        let z = p.with_divergence(Some(Vector::zero(8))).unwrap().check_divergence().unwrap();
        assert!(z.holomorphic && z.isometry && z.orthogonality);
    }

    #[test]
    fn real_structure_and_flip() {
        let (p, m, j, eps) = hopf_pair();
        let r = p.reality();
        assert!(r.conjugate_pair && r.real_divergence);
        assert_eq!(r.positive, None);
        let q = from_real_solution(&m, &j.scale(&Scalar::int(-1)), &eps).unwrap();
        assert_eq!(q.l(), p.lbar());
        assert_eq!(q.lbar(), p.l());
        let bad = j.scale(&Scalar::int(2));
        assert!(matches!(from_real_solution(&m, &bad, &eps), Err(KillingError::NotAlmostComplex(_))));
        // Positivity is decided on rational data.
        let t = trivial_double(2);
        let g = t.algebra().clone();
        let plus: Vec<Vector> = (0..2).map(|i| &g.basis(i) + &g.basis(2 + i)).collect();
        let gm = GeneralizedMetric::new(g.clone(), &plus).unwrap();
        let jj = gm.endomorphism(Side::Plus, &plus, &[plus[1].clone(), -&plus[0]]).unwrap();
        let rp = from_real_solution(&gm, &jj, &Vector::zero(4)).unwrap();
        assert_eq!(rp.reality().positive, Some(true));
    }
}
