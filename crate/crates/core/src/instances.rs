//! Built-in examples: the Hopf family on `g_ℓ = su(2) ⊕ u(1)` twisted by
//! `ℓ v^{123}`, its T-dual, the hyperholomorphic triple, Manin doubles, and a
//! random rational quadratic Lie algebra for property checks.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::ceforms::InvariantForm;
use crate::geometry::{GeneralizedMetric, Side};
use crate::killing::{from_real_solution, IsotropicPair};
use crate::linalg::{Matrix, Vector};
use crate::qla::{courant_double, LieAlgebra, QuadraticLieAlgebra};
use crate::scalar::{Field, Scalar};

/// Combining circumflex used to name the basis of the T-dual copy.
pub const HAT: char = '\u{302}';

/// `su(2)` with basis `v_1, v_2, v_3` and `[v_2, v_3] = −v_1` (cyclically),
/// plus a central `v_4`; basis names carry `prefix` (e.g. `"v"` or `"v̂"`).
pub fn su2_u1(field: &Arc<Field>, prefix: &str) -> LieAlgebra {
    let names: Vec<String> = (1..=4).map(|i| format!("{prefix}_{i}")).collect();
    let e = |i: usize| Vector::basis(4, i).scale(&Scalar::int(-1));
    let mut br = BTreeMap::new();
    br.insert((1, 2), e(0));
    br.insert((2, 0), e(1));
    br.insert((0, 1), e(2));
    LieAlgebra::new(names, &br, field.clone()).expect("su(2) ⊕ u(1) is a Lie algebra")
}

/// The quadratic Lie algebra `g_ℓ` on `(su(2) ⊕ u(1)) ⊕ (su(2) ⊕ u(1))*`
/// twisted by the closed form `ℓ v^{123}`.
pub fn g_ell(field: &Arc<Field>, ell: &Scalar, prefix: &str) -> QuadraticLieAlgebra {
    let h = su2_u1(field, prefix);
    courant_double(&h, &InvariantForm::monomial(4, &[0, 1, 2], ell.clone())).expect("ℓ v^{123} is closed")
}

/// A member of the Hopf family: `V₊ = span{v_i + (a/x) v^i, v_4 + ax v^4}`,
/// divergence `ε^x = −x v^4` and complex structure `±J_x`.
#[derive(Clone, Debug)]
pub struct HopfInstance {
    pub ell: Scalar,
    pub x: Scalar,
    pub a: Scalar,
    pub level: Scalar,
    pub algebra: Arc<QuadraticLieAlgebra>,
    pub metric: GeneralizedMetric,
    /// `ε^x = −x v^4`.
    pub eps: Vector,
    /// `ε₊ = π₊ ε^x = −½(a⁻¹ v_4 + x v^4)`.
    pub eps_plus: Vector,
    /// The complex structure on `V₊` (`J_x`, or `−J_x` when flipped).
    pub j: Matrix,
    pub pair: IsotropicPair,
    pub on_shell: bool,
}

impl HopfInstance {
    /// `v_i + g(v_i)` for `i = 1..4`.
    pub fn lift(&self, i: usize) -> Vector {
        hopf_lift(&self.algebra, &self.x, &self.a, i)
    }

    /// The isotropic pair of another orthogonal complex structure on `V₊`,
    /// with the same divergence.
    pub fn pair_for(&self, j: &Matrix) -> IsotropicPair {
        from_real_solution(&self.metric, j, &self.eps).expect("compatible complex structure")
    }
}

fn hopf_lift(g: &QuadraticLieAlgebra, x: &Scalar, a: &Scalar, i: usize) -> Vector {
    let c = if i == 4 { a * x } else { a / x };
    &g.basis(i - 1) + &g.basis(3 + i).scale(&c)
}

/// The Hopf instance with parameters `(ℓ, x, a)` at level `k`, using the
/// basis names of `g_ℓ` (`v`) or of its T-dual copy (`v̂`).
pub fn hopf_on(alg: Arc<QuadraticLieAlgebra>, ell: &Scalar, x: &Scalar, a: &Scalar, k: &Scalar, flip: bool) -> HopfInstance {
    let lift = |i: usize| hopf_lift(&alg, x, a, i);
    let plus: Vec<Vector> = (1..=4).map(lift).collect();
    let metric = GeneralizedMetric::new(alg.clone(), &plus).expect("the Hopf metric is nondegenerate");
    // J_x v₄ = x v₁, J_x v₂ = v₃, lifted to V₊.
    let xinv = Scalar::one() / x.clone();
    let images = [lift(4).scale(&-&xinv), lift(3), -&lift(2), lift(1).scale(x)];
    let mut j = metric.endomorphism(Side::Plus, &plus, &images).expect("J_x is defined on V₊");
    if flip {
        j = j.scale(&Scalar::int(-1));
    }
    let eps = alg.basis(7).scale(&-x);
    let eps_plus = metric.project(Side::Plus, &eps);
    let pair = from_real_solution(&metric, &j, &eps).expect("J_x is an orthogonal complex structure");
    HopfInstance {
        ell: ell.clone(),
        x: x.clone(),
        a: a.clone(),
        level: k.clone(),
        on_shell: (a - &(ell * x)).is_zero(),
        algebra: alg,
        metric,
        eps,
        eps_plus,
        j,
        pair,
    }
}

/// The Hopf instance on `g_ℓ` with basis names `v_i, v^i`.
pub fn hopf(field: &Arc<Field>, ell: &Scalar, x: &Scalar, a: &Scalar, k: &Scalar) -> HopfInstance {
    hopf_on(Arc::new(g_ell(field, ell, "v")), ell, x, a, k, false)
}

/// The hyperholomorphic triple `(I, J, K)` on `V₊` of a Hopf instance, with
/// `I = J_x`, `Jv₄ = xv₂`, `Jv₃ = v₁`, `Kv₁ = v₂`, `Kv₄ = xv₃`.
pub fn hyper_triple(h: &HopfInstance) -> [Matrix; 3] {
    let l = |i: usize| h.lift(i);
    let x = &h.x;
    let xinv = Scalar::one() / x.clone();
    let plus: Vec<Vector> = (1..=4).map(l).collect();
    let jm = [-&l(3), l(4).scale(&-&xinv), l(1), l(2).scale(x)];
    let km = [l(2), -&l(1), l(4).scale(&-&xinv), l(3).scale(x)];
    let end = |images: &[Vector]| h.metric.endomorphism(Side::Plus, &plus, images).expect("defined on V₊");
    let i0 = [l(4).scale(&-&xinv), l(3), -&l(2), l(1).scale(x)];
    [end(&i0), end(&jm), end(&km)]
}

/// Whether `I² = J² = K² = IJK = −Id` on `V₊` (all vanish on `V₋`).
pub fn hamilton_relations(m: &GeneralizedMetric, t: &[Matrix; 3]) -> bool {
    let minus_id = m.projector(Side::Plus).scale(&Scalar::int(-1));
    let [i, j, k] = t;
    i.mul(i) == minus_id && j.mul(j) == minus_id && k.mul(k) == minus_id && i.mul(j).mul(k) == minus_id
}

/// The T-duality isometry `ψ: g_ℓ → ĝ_ℓ`, identity on indices 1–3 and
/// `v_4 ↦ v̂^4`, `v^4 ↦ v̂_4`; columns are images of the source basis.
pub fn tduality_matrix() -> Matrix {
    let mut m = Matrix::zero(8, 8);
    for i in 0..8 {
        let target = match i {
            3 => 7,
            7 => 3,
            i => i,
        };
        m[(target, i)] = Scalar::one();
    }
    m
}

/// The T-dual copy `ĝ_ℓ` with hatted basis names.
pub fn hat_algebra(field: &Arc<Field>, ell: &Scalar) -> QuadraticLieAlgebra {
    g_ell(field, ell, &format!("v{HAT}"))
}

/// Basis name with hats removed, for the identification `ĝ_ℓ ≅ g_ℓ`.
pub fn unhat(name: &str) -> String {
    name.chars().filter(|&c| c != HAT).collect()
}

/// The Manin double `h ⊕ h*` with `l = h`, `l̄ = h*` and zero divergence.
pub fn manin_double(h: &LieAlgebra) -> IsotropicPair {
    let n = h.dim();
    let g = Arc::new(courant_double(h, &InvariantForm::zero(n)).expect("zero form is closed"));
    let l: Vec<Vector> = (0..n).map(|i| g.basis(i)).collect();
    let lb: Vec<Vector> = (0..n).map(|i| g.basis(n + i)).collect();
    IsotropicPair::new(g, &l, &lb, Some(Vector::zero(2 * n))).expect("h and h* are transverse isotropic")
}

/// A random 6-dimensional quadratic Lie algebra with rational constants:
/// the double of `ℚ ⋉_M ℚ²` for a random `M`, written in a random basis.
pub fn random_quadratic(seed: u64) -> QuadraticLieAlgebra {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut small = || Scalar::rational(rng.gen_range(-3..=3), rng.gen_range(1..=2));
    let names: Vec<String> = (0..3).map(|i| format!("f_{i}")).collect();
    let mut br = BTreeMap::new();
    let m = [[small(), small()], [small(), small()]];
    for (i, row) in m.iter().enumerate() {
        br.insert((0, i + 1), Vector(vec![Scalar::zero(), row[0].clone(), row[1].clone()]));
    }
    let h = LieAlgebra::new(names, &br, Field::base()).expect("a semidirect product is a Lie algebra");
    let d = courant_double(&h, &InvariantForm::zero(3)).expect("zero form is closed");
    let p = loop {
        let mut p = Matrix::zero(6, 6);
        for r in 0..6 {
            for c in 0..6 {
                p[(r, c)] = Scalar::int(rng.gen_range(-1..=1));
            }
        }
        if p.inverse().is_some() {
            break p;
        }
    };
    // New basis b_j = Σ_i p_ij e_i.
    let new: Vec<Vector> = (0..6).map(|j| p.col(j)).collect();
    let pinv = p.inverse().expect("checked");
    let mut br = BTreeMap::new();
    for i in 0..6 {
        for j in (i + 1)..6 {
            br.insert((i, j), pinv.apply(&d.bracket(&new[i], &new[j])));
        }
    }
    let gram = d.gram_of(&new);
    let names = (1..=6).map(|i| format!("r_{i}")).collect();
    QuadraticLieAlgebra::build(names, &br, gram, Field::base()).expect("a change of basis preserves the axioms")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::killing::Variant;
    use crate::sva::{StateMap, Sva};

    fn on_shell() -> HopfInstance {
        let f = Field::with_params(&["l", "x"]);
        let (l, x) = (f.sym("l"), f.sym("x"));
        hopf(&f, &l, &x, &(&l * &x), &Scalar::int(2))
    }

    #[test]
    fn hopf_on_and_off_shell() {
        let h = on_shell();
        assert!(h.on_shell);
        assert!(h.pair.is_solution().unwrap());
        let f = Field::with_params(&["l", "x", "a"]);
        let off = hopf(&f, &f.sym("l"), &f.sym("x"), &f.sym("a"), &Scalar::int(2));
        assert!(!off.on_shell);
        assert!(!off.pair.check_fterm(Variant::Full).pass);
        let q = Field::base();
        let one = Scalar::one();
        let r = hopf(&q, &one, &one, &one, &Scalar::int(2));
        assert!(r.on_shell && r.pair.is_solution().unwrap());
        let expect = &h.algebra.v("v_4").scale(&(Scalar::rational(-1, 2) / h.a.clone()))
            + &h.algebra.v("v^4").scale(&(&h.x * &Scalar::rational(-1, 2)));
        assert_eq!(h.eps_plus, expect);
    }

    #[test]
    fn hyper_triple_is_quaternionic_and_each_member_solves() {
        let h = on_shell();
        let t = hyper_triple(&h);
        assert_eq!(t[0], h.j);
        assert!(hamilton_relations(&h.metric, &t));
        let swapped = [t[1].clone(), t[0].clone(), t[2].clone()];
        assert!(!hamilton_relations(&h.metric, &swapped));
        for j in &t {
            let p = h.pair_for(j);
            assert!(p.is_solution().unwrap());
            assert!(p.check_divergence().unwrap().holomorphic);
        }
    }

    #[test]
    fn tduality_is_an_isometry_exchanging_the_metrics() {
        let f = Field::with_params(&["l", "x"]);
        let (l, x) = (f.sym("l"), f.sym("x"));
        let g = Arc::new(g_ell(&f, &l, "v"));
        let gh = Arc::new(hat_algebra(&f, &l));
        let k = Scalar::int(2);
        let sva = Sva::new(g.clone(), k.clone());
        let target = Arc::new(Sva::new(gh.clone(), k.clone()));
        let psi = StateMap::new(&sva, target, tduality_matrix()).unwrap();
        let h = hopf_on(g.clone(), &l, &x, &(&l * &x), &k, false);
        let xh = Scalar::one() / (&l * &x);
        let hh = hopf_on(gh.clone(), &l, &xh, &(&l * &xh), &k, false);
        let image: Vec<Vector> = h.metric.plus().basis().iter().map(|v| psi.matrix().apply(v)).collect();
        assert_eq!(gh.subspace(&image), *hh.metric.plus());
        assert_eq!(psi.matrix().apply(&h.eps_plus), hh.eps_plus);
        // ψ intertwines J_x with Ĵ, where Ĵ v̂₄ = (1/ℓx) v̂₁.
        let pm = psi.matrix();
        let pinv = pm.inverse().unwrap();
        assert_eq!(pm.mul(&h.j).mul(&pinv), hh.j);
        // ψ∘ψ = id under the hat identification.
        assert_eq!(pm.mul(pm), Matrix::identity(8));
        for (a, b) in g.names().iter().zip(gh.names()) {
            assert_eq!(*a, unhat(b));
        }
    }

    #[test]
    fn manin_doubles() {
        let f = Field::base();
        let ab = manin_double(&LieAlgebra::abelian(vec!["e_1".into(), "e_2".into()], f.clone()));
        assert!(ab.is_solution().unwrap());
        assert!(ab.w().is_zero());
        let su2 = su2_u1(&f, "v");
        let p = manin_double(&su2);
        assert!(p.check_fterm(Variant::Full).pass);
        assert!(p.check_dterm(Variant::Gravitino).unwrap().pass);
        // su(2) ⊕ u(1) is unimodular, so w vanishes; the affine algebra is not.
        assert!(p.w().is_zero());
        let mut br = BTreeMap::new();
        br.insert((0, 1), Vector(vec![Scalar::zero(), Scalar::one()]));
        let aff = LieAlgebra::new(vec!["e_1".into(), "e_2".into()], &br, f.clone()).unwrap();
        let p = manin_double(&aff);
        assert!(p.check_fterm(Variant::Full).pass);
        let w = p.w();
        assert!(!w.is_zero());
        let (e, eb) = p.dual_bases();
        for basis in [e, eb] {
            for a in basis {
                for b in basis {
                    assert!(p.algebra().pair(&w, &p.algebra().bracket(a, b)).is_zero());
                }
            }
        }
    }

    #[test]
    fn random_quadratic_is_valid_and_nonabelian() {
        for seed in 0..3 {
            let g = random_quadratic(seed);
            assert_eq!(g.dim(), 6);
            let nonzero = (0..6).any(|i| (0..6).any(|j| !g.bracket(&g.basis(i), &g.basis(j)).is_zero()));
            assert!(nonzero);
        }
    }
}
