//! N=2 (and N=4) superconformal generators built from an isotropic pair
//! `l ⊕ l̄ ⊂ g`, and residual checks of the superconformal relations in the
//! universal superaffine vertex algebra.

use serde::Serialize;
use thiserror::Error;

use crate::killing::IsotropicPair;
use crate::linalg::Vector;
use crate::scalar::Scalar;
use crate::sva::{LambdaValue, State, StateMap, Sva};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SusyError {
    #[error("the level must be nonzero")]
    ZeroLevel,
    #[error("the construction with a dilaton term needs a divergence")]
    MissingDivergence,
    #[error("the isotropic pair lives on a different algebra than the vertex algebra")]
    AlgebraMismatch,
}

/// Which current to build: `J₀` with `H′`, or `J` with `H`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Construction {
    J0HPrime,
    JH,
}

/// A current `J` (even) and a Neveu–Schwarz vector `H` (odd).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuperconformalPair {
    pub j: State,
    pub h: State,
    pub construction: Construction,
}

/// All the vectors of the construction:
/// `J₀ = (i/k):e^j e_j:`, `J = J₀ − (2/k)S(iu)`, `H₀`, `H′ = H₀ + (1/k)Tw`
/// and `H = H′ − (2/k)Te + (2/k²)S(:[u,e^j]e_j: + :e^j[u,e_j]:)`.
#[derive(Debug, Clone)]
pub struct Generators {
    pub j0: State,
    pub j: State,
    pub h0: State,
    pub h_prime: State,
    pub h: State,
    pub w: State,
    pub u: State,
    pub e: State,
}

struct Basis {
    e: Vec<State>,
    ebar: Vec<State>,
}

fn check(sva: &Sva, pair: &IsotropicPair) -> Result<(), SusyError> {
    if sva.level().is_zero() {
        return Err(SusyError::ZeroLevel);
    }
    let (a, b) = (sva.algebra(), pair.algebra());
    if a.dim() != b.dim() || a.gram() != b.gram() || a.names() != b.names() {
        return Err(SusyError::AlgebraMismatch);
    }
    Ok(())
}

fn basis(sva: &Sva, pair: &IsotropicPair) -> Basis {
    let (e, eb) = pair.dual_bases();
    Basis { e: e.iter().map(|v| sva.pi(v)).collect(), ebar: eb.iter().map(|v| sva.pi(v)).collect() }
}

fn pi_bracket(sva: &Sva, a: &Vector, b: &Vector) -> State {
    sva.pi(&sva.algebra().bracket(a, b))
}

/// The vector `w = Π([ε̄_j, ε_j]_l − [ε̄_j, ε_j]_l̄)` of the Lie algebra.
pub fn w_vector(pair: &IsotropicPair) -> Vector {
    let g = pair.algebra();
    let (e, eb) = pair.dual_bases();
    let mut w = Vector::zero(g.dim());
    for (a, b) in e.iter().zip(eb) {
        let (cl, clb, _) = pair.components(&g.bracket(b, a));
        w = &(&w + &cl) - &clb;
    }
    w
}

/// `H₀` of the construction, with its four triple products.
pub fn h0(sva: &Sva, pair: &IsotropicPair) -> State {
    let k = sva.level().clone();
    let kinv = Scalar::one() / k.clone();
    let kinv2 = &kinv * &kinv;
    let b = basis(sva, pair);
    let (ev, ebv) = pair.dual_bases();
    let mut quad = State::zero();
    for j in 0..b.e.len() {
        quad.add_assign(&sva.nop(&b.e[j], &sva.apply_s(&b.ebar[j])));
        quad.add_assign(&sva.nop(&b.ebar[j], &sva.apply_s(&b.e[j])));
    }
    let mut cubic = State::zero();
    for j in 0..b.e.len() {
        for m in 0..b.e.len() {
            let t1 = sva.nop(&b.e[j], &sva.nop(&b.ebar[m], &pi_bracket(sva, &ebv[j], &ev[m])));
            let t2 = sva.nop(&b.ebar[j], &sva.nop(&b.e[m], &pi_bracket(sva, &ev[j], &ebv[m])));
            let t3 = sva.nop(&b.e[j], &sva.nop(&b.e[m], &pi_bracket(sva, &ebv[j], &ebv[m])));
            let t4 = sva.nop(&b.ebar[j], &sva.nop(&b.ebar[m], &pi_bracket(sva, &ev[j], &ev[m])));
            cubic.add_assign(&t1.add(&t2).sub(&t3).sub(&t4));
        }
    }
    quad.scale(&kinv).add(&cubic.scale(&kinv2))
}

/// The three-term form of `H₀` valid when the full F-term equations hold:
/// `(1/k)(…) + (1/k²)(2:e_j(:e^k[e^j,e_k]₋:): + :e^j(:e^k[e_j,e_k]_l:): + :e_j(:e_k[e^j,e^k]_l̄:):)`.
pub fn h0_reduced(sva: &Sva, pair: &IsotropicPair) -> State {
    let k = sva.level().clone();
    let kinv = Scalar::one() / k.clone();
    let b = basis(sva, pair);
    let (ev, ebv) = pair.dual_bases();
    let g = sva.algebra();
    let mut quad = State::zero();
    for j in 0..b.e.len() {
        quad.add_assign(&sva.nop(&b.e[j], &sva.apply_s(&b.ebar[j])));
        quad.add_assign(&sva.nop(&b.ebar[j], &sva.apply_s(&b.e[j])));
    }
    let mut cubic = State::zero();
    for j in 0..b.e.len() {
        for m in 0..b.e.len() {
            let minus = sva.pi(&pair.components(&g.bracket(&ebv[j], &ev[m])).2);
            let in_l = sva.pi(&pair.components(&g.bracket(&ev[j], &ev[m])).0);
            let in_lbar = sva.pi(&pair.components(&g.bracket(&ebv[j], &ebv[m])).1);
            let t1 = sva.nop(&b.e[j], &sva.nop(&b.ebar[m], &minus)).scale(&Scalar::int(2));
            let t2 = sva.nop(&b.ebar[j], &sva.nop(&b.ebar[m], &in_l));
            let t3 = sva.nop(&b.e[j], &sva.nop(&b.e[m], &in_lbar));
            cubic.add_assign(&t1.add(&t2).add(&t3));
        }
    }
    quad.scale(&kinv).add(&cubic.scale(&(&kinv * &kinv)))
}

/// Build every vector of the construction. Without a divergence, `ε = 0`.
pub fn generators(sva: &Sva, pair: &IsotropicPair) -> Result<Generators, SusyError> {
    check(sva, pair)?;
    let k = sva.level().clone();
    let kinv = Scalar::one() / k.clone();
    let i = Scalar::i();
    let b = basis(sva, pair);
    let mut j0 = State::zero();
    for (e, eb) in b.e.iter().zip(&b.ebar) {
        j0.add_assign(&sva.nop(eb, e));
    }
    let j0 = j0.scale(&(&i * &kinv));
    let w = sva.pi(&w_vector(pair));
    let h0 = h0(sva, pair);
    let h_prime = h0.add(&sva.apply_t(&w).scale(&kinv));
    let eps = pair.divergence().cloned().unwrap_or_else(|| Vector::zero(sva.dim()));
    let (el, elb, _) = pair.components(&eps);
    let uvec = &el - &elb;
    let e = sva.pi(&eps);
    let u = sva.pi(&uvec);
    let two_over_k = &Scalar::int(2) * &kinv;
    let j = j0.sub(&sva.apply_s(&u).scale(&(&two_over_k * &i)));
    let (ev, ebv) = pair.dual_bases();
    let mut corr = State::zero();
    for m in 0..b.e.len() {
        corr.add_assign(&sva.nop(&pi_bracket(sva, &uvec, &ebv[m]), &b.e[m]));
        corr.add_assign(&sva.nop(&b.ebar[m], &pi_bracket(sva, &uvec, &ev[m])));
    }
    let h = h_prime
        .sub(&sva.apply_t(&e).scale(&two_over_k))
        .add(&sva.apply_s(&corr).scale(&(&two_over_k * &kinv)));
    Ok(Generators { j0, j, h0, h_prime, h, w, u, e })
}

/// The pair `(J₀, H′)` or `(J, H)`.
pub fn build_generators(sva: &Sva, pair: &IsotropicPair, construction: Construction) -> Result<SuperconformalPair, SusyError> {
    if construction == Construction::JH && pair.divergence().is_none() {
        return Err(SusyError::MissingDivergence);
    }
    let g = generators(sva, pair)?;
    Ok(match construction {
        Construction::J0HPrime => SuperconformalPair { j: g.j0, h: g.h_prime, construction },
        Construction::JH => SuperconformalPair { j: g.j, h: g.h, construction },
    })
}

/// The central charge predicted by the construction:
/// `3 dim l` for `J₀`, and `3(dim l + (4/k)⟨ε, w − ε⟩)` for `J`.
pub fn predicted_central_charge(pair: &IsotropicPair, level: &Scalar, construction: Construction) -> Scalar {
    let n = Scalar::int(pair.dim_l() as i64);
    let three = Scalar::int(3);
    match construction {
        Construction::J0HPrime => &three * &n,
        Construction::JH => {
            let g = pair.algebra();
            let eps = pair.divergence().cloned().unwrap_or_else(|| Vector::zero(g.dim()));
            let ip = g.pair(&eps, &(&w_vector(pair) - &eps));
            &three * &(&n + &(&(&Scalar::int(4) / level) * &ip))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct N2Report {
    /// `c` read off the `λχ` coefficient of `−[J_Λ J]`; `None` if that
    /// coefficient is not a multiple of the vacuum.
    pub c: Option<Scalar>,
    /// `[J_Λ J] + H + (λχ/3)c`.
    pub jj_residual: LambdaValue,
    /// `[H_Λ J] − (2T + 2λ + χS)J`.
    pub hj_residual: LambdaValue,
    /// `[H_Λ H] − (2T + χS + 3λ)H − (χλ²/3)c`, when requested.
    pub ns_residual: Option<LambdaValue>,
    pub pass: bool,
}

/// `(2T + 2λ + χS)J`.
fn current_rhs(sva: &Sva, j: &State) -> LambdaValue {
    let two = Scalar::int(2);
    let mut v = LambdaValue::constant(sva.apply_t(j).scale(&two));
    v.add_term(1, false, j, &two);
    v.add_term(0, true, &sva.apply_s(j), &Scalar::one());
    v
}

/// Check the N=2 relations `[J_Λ J] = −(H + (λχ/3)c)` and
/// `[H_Λ J] = (2T + 2λ + χS)J`, and optionally the Neveu–Schwarz relation.
pub fn verify_n2(sva: &Sva, sc: &SuperconformalPair, neveu_schwarz: bool) -> N2Report {
    let jj = sva.lambda_bracket(&sc.j, &sc.j);
    let lc = jj.coeff(1, true);
    let vac = State::vacuum();
    let c = if lc.sub(&vac.scale(&lc.vacuum_coefficient())).is_zero() {
        Some(&lc.vacuum_coefficient() * &Scalar::int(-3))
    } else {
        None
    };
    let c_or_zero = c.clone().unwrap_or_else(Scalar::zero);
    let mut rhs = LambdaValue::constant(sc.h.clone());
    rhs.add_term(1, true, &vac, &(&c_or_zero / &Scalar::int(3)));
    let jj_residual = jj.add(&rhs);
    let hj_residual = sva.lambda_bracket(&sc.h, &sc.j).sub(&current_rhs(sva, &sc.j));
    let ns_residual = neveu_schwarz.then(|| {
        let mut rhs = LambdaValue::constant(sva.apply_t(&sc.h).scale(&Scalar::int(2)));
        rhs.add_term(0, true, &sva.apply_s(&sc.h), &Scalar::one());
        rhs.add_term(1, false, &sc.h, &Scalar::int(3));
        rhs.add_term(2, true, &vac, &(&c_or_zero / &Scalar::int(3)));
        sva.lambda_bracket(&sc.h, &sc.h).sub(&rhs)
    });
    let parities_ok = sc.j.parity().map_or(sc.j.is_zero(), |p| p == 0) && sc.h.parity().map_or(sc.h.is_zero(), |p| p == 1);
    let pass = parities_ok
        && c.is_some()
        && jj_residual.is_zero()
        && hj_residual.is_zero()
        && ns_residual.as_ref().is_none_or(LambdaValue::is_zero);
    N2Report { c, jj_residual, hj_residual, ns_residual, pass }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct N4Report {
    pub diagonal: Vec<N2Report>,
    /// `(i, j, [Jⁱ_Λ Jʲ] + ε_{ijk}(S + 2χ)J^k)` for the six ordered pairs.
    pub cross: Vec<(usize, usize, LambdaValue)>,
    pub pass: bool,
}

/// Check the N=4 relations for three currents sharing one `H`.
pub fn verify_n4(sva: &Sva, currents: &[State; 3], h: &State) -> N4Report {
    let diagonal: Vec<N2Report> = currents
        .iter()
        .map(|j| verify_n2(sva, &SuperconformalPair { j: j.clone(), h: h.clone(), construction: Construction::J0HPrime }, false))
        .collect();
    let mut cross = Vec::new();
    for i in 0..3 {
        for j in 0..3 {
            if i == j {
                continue;
            }
            let k = 3 - i - j;
            // ε_{ijk} = +1 for cyclic (i, j, k).
            let sign = if (j + 3 - i) % 3 == 1 { Scalar::one() } else { Scalar::int(-1) };
            let mut rhs = LambdaValue::constant(sva.apply_s(&currents[k]));
            rhs.add_term(0, true, &currents[k], &Scalar::int(2));
            let residual = sva.lambda_bracket(&currents[i], &currents[j]).add(&rhs.scale(&sign));
            cross.push((i, j, residual));
        }
    }
    let c_agree = diagonal.windows(2).all(|w| w[0].c == w[1].c);
    let pass = c_agree && diagonal.iter().all(|r| r.pass) && cross.iter().all(|(_, _, r)| r.is_zero());
    N4Report { diagonal, cross, pass }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MirrorReport {
    /// `ψ(J) + Ĵ`.
    pub j_residual: State,
    /// `ψ(H) − Ĥ`.
    pub h_residual: State,
    pub pass: bool,
}

/// The mirror involution `ψ(J) = −Ĵ`, `ψ(H) = Ĥ`.
pub fn verify_mirror(sc: &SuperconformalPair, sc_hat: &SuperconformalPair, psi: &StateMap) -> MirrorReport {
    let j_residual = psi.apply(&sc.j).add(&sc_hat.j);
    let h_residual = psi.apply(&sc.h).sub(&sc_hat.h);
    let pass = j_residual.is_zero() && h_residual.is_zero();
    MirrorReport { j_residual, h_residual, pass }
}
