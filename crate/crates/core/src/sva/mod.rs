//! Normal forms and the Λ-bracket in the universal superaffine vertex algebra
//! `V^k(g_super)`.
//!
//! The SUSY vertex algebra generated by `Πg` is strongly generated, as an
//! ordinary vertex superalgebra, by the odd fields `a ∈ Πg` and the even
//! currents `Sa`. Their λ-brackets are
//!
//! ```text
//! [a_λ b]   = k⟨a,b⟩|0⟩          [Sa_λ b] = [a_λ Sb] = [a,b]
//! [Sa_λ Sb] = S[a,b] + λk⟨a,b⟩|0⟩
//! ```
//!
//! and the Λ-bracket is recovered as `[A_Λ B] = [SA_λ B] + χ[A_λ B]`. The
//! engine rewrites everything into right-nested normally ordered monomials
//! with sorted generators using the non-commutative Wick formula,
//! skew-symmetry, quasi-commutativity and quasi-associativity. The SUSY
//! calculus on top of it (sesquilinearity, Λ-skew-symmetry, Jacobi, SUSY Wick)
//! lives in [`lambda`] and is checked against the engine in the tests.

pub mod identities;
pub mod lambda;
pub mod morphism;
pub mod state;

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use smallvec::SmallVec;
use thiserror::Error;

use crate::linalg::Vector;
use crate::qla::QuadraticLieAlgebra;
use crate::scalar::Scalar;

pub use lambda::{Bounds, DoubleLambdaValue, LambdaValue};
pub use morphism::StateMap;
pub use state::{mono_parity, Gen, LPoly, Monomial, State};

use state::binom;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SvaError {
    #[error("linear map is not an isomorphism of quadratic Lie algebras: {0}")]
    NotIsomorphism(String),
    #[error("unknown generator {0}")]
    UnknownGenerator(String),
}

/// Sparse structure data for one ordered pair of basis vectors.
#[derive(Clone, Default)]
struct PairData {
    bracket: Vec<(u16, Scalar)>,
    level_pairing: Scalar,
}

/// The universal superaffine vertex algebra of a quadratic Lie algebra at a
/// given level.
pub struct Sva {
    alg: Arc<QuadraticLieAlgebra>,
    level: Scalar,
    table: Vec<PairData>,
    memo: bool,
    nop_cache: Mutex<HashMap<(Gen, Monomial), State>>,
    bracket_cache: Mutex<HashMap<(Monomial, Monomial), LPoly>>,
}

impl std::fmt::Debug for Sva {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Sva(dim = {}, k = {})", self.alg.dim(), self.level)
    }
}

fn sign(odd: bool) -> Scalar {
    if odd {
        Scalar::int(-1)
    } else {
        Scalar::one()
    }
}

impl Sva {
    pub fn new(alg: Arc<QuadraticLieAlgebra>, level: Scalar) -> Sva {
        let n = alg.dim();
        let mut table = vec![PairData::default(); n * n];
        for a in 0..n {
            for b in 0..n {
                let br = alg.bracket(&alg.basis(a), &alg.basis(b));
                let entry = &mut table[a * n + b];
                entry.bracket =
                    br.0.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, c)| (i as u16, c.clone())).collect();
                entry.level_pairing = &level * &alg.gram()[(a, b)];
            }
        }
        Sva {
            alg,
            level,
            table,
            memo: true,
            nop_cache: Mutex::new(HashMap::new()),
            bracket_cache: Mutex::new(HashMap::new()),
        }
    }

    /// Disable (or re-enable) memoization. Results are identical either way.
    pub fn with_memo(mut self, memo: bool) -> Sva {
        self.memo = memo;
        self
    }

    pub fn algebra(&self) -> &Arc<QuadraticLieAlgebra> {
        &self.alg
    }

    pub fn level(&self) -> &Scalar {
        &self.level
    }

    pub fn names(&self) -> &[String] {
        self.alg.names()
    }

    pub fn dim(&self) -> usize {
        self.alg.dim()
    }

    // ------------------------------------------------------------------
    // Constructors of states

    /// `Π v` for a vector `v` of the Lie algebra (odd, linear in `v`).
    pub fn pi(&self, v: &Vector) -> State {
        let mut out = State::zero();
        for (i, c) in v.0.iter().enumerate() {
            out.add_term(smallvec::smallvec![Gen::new(i)], c.clone());
        }
        out
    }

    /// The odd generator attached to a named basis vector.
    pub fn generator(&self, name: &str) -> Result<State, SvaError> {
        let i = self.alg.index_of(name).ok_or_else(|| SvaError::UnknownGenerator(name.to_string()))?;
        Ok(State::gen(Gen::new(i)))
    }

    pub fn render(&self, x: &State) -> String {
        x.render(self.names())
    }

    // ------------------------------------------------------------------
    // Derivations

    /// Normally ordered product of a list of generators, right-nested.
    pub fn build(&self, gens: &[Gen]) -> State {
        if is_canonical(gens) {
            return State::from_mono(gens.iter().copied().collect(), Scalar::one());
        }
        let mut acc = State::vacuum();
        for g in gens.iter().rev() {
            acc = self.nop_gen_state(*g, &acc);
        }
        acc
    }

    pub fn apply_t(&self, x: &State) -> State {
        let mut out = State::zero();
        for (m, c) in x.terms() {
            for i in 0..m.len() {
                let mut g: Monomial = m.clone();
                g[i] = g[i].with_t(1);
                out.add_scaled(c, &self.build(&g));
            }
        }
        out
    }

    pub fn apply_t_pow(&self, x: &State, n: usize) -> State {
        let mut y = x.clone();
        for _ in 0..n {
            if y.is_zero() {
                break;
            }
            y = self.apply_t(&y);
        }
        y
    }

    /// The odd derivation `S`: `S(:ab:) = :(Sa)b: + (−1)^{|a|}:a(Sb):`.
    pub fn apply_s(&self, x: &State) -> State {
        let mut out = State::zero();
        for (m, c) in x.terms() {
            let mut odd_before = false;
            for i in 0..m.len() {
                let mut g: Monomial = m.clone();
                g[i] = g[i].apply_s();
                out.add_scaled(&(c * &sign(odd_before)), &self.build(&g));
                odd_before ^= m[i].is_odd();
            }
        }
        out
    }

    // ------------------------------------------------------------------
    // Normally ordered product

    pub fn nop(&self, x: &State, y: &State) -> State {
        let mut out = State::zero();
        for (ma, ca) in x.terms() {
            for (mb, cb) in y.terms() {
                out.add_scaled(&(ca * cb), &self.nop_mono(ma, mb));
            }
        }
        out
    }

    fn nop_gen_state(&self, g: Gen, y: &State) -> State {
        let mut out = State::zero();
        for (m, c) in y.terms() {
            out.add_scaled(c, &self.nop_gen(g, m));
        }
        out
    }

    fn nop_mono(&self, ma: &[Gen], mb: &[Gen]) -> State {
        if ma.is_empty() {
            return State::from_mono(mb.iter().copied().collect(), Scalar::one());
        }
        if mb.is_empty() {
            return State::from_mono(ma.iter().copied().collect(), Scalar::one());
        }
        if ma.len() == 1 {
            return self.nop_gen(ma[0], mb);
        }
        // Quasi-associativity:
        // :(:a A':) B: = :a :A' B:: + :(∫_0^T a)[A'_λ B]: + p(a,A') :(∫_0^T A')[a_λ B]:
        let a = ma[0];
        let rest = &ma[1..];
        let rest_state = State::from_mono(rest.iter().copied().collect(), Scalar::one());
        let mut out = self.nop_gen_state(a, &self.nop_mono(rest, mb));
        let y = self.bracket_mono(rest, mb);
        for (j, yj) in y.coeffs.iter().enumerate() {
            if yj.is_zero() {
                continue;
            }
            let ta = State::gen(a.with_t(j as u16 + 1));
            out.add_scaled(&Scalar::rational(1, j as i64 + 1), &self.nop(&ta, yj));
        }
        let x = self.bracket_mono(&[a], mb);
        let s = sign(a.is_odd() && mono_parity(rest) == 1);
        for (j, xj) in x.coeffs.iter().enumerate() {
            if xj.is_zero() {
                continue;
            }
            let tr = self.apply_t_pow(&rest_state, j + 1);
            out.add_scaled(&(&s * &Scalar::rational(1, j as i64 + 1)), &self.nop(&tr, xj));
        }
        out
    }

    /// `:g M:` for a single generator `g` and a normal monomial `M`.
    fn nop_gen(&self, g: Gen, mb: &[Gen]) -> State {
        if mb.is_empty() {
            return State::gen(g);
        }
        let h = mb[0];
        if g < h || (g == h && !g.is_odd()) {
            let mut m: Monomial = SmallVec::with_capacity(mb.len() + 1);
            m.push(g);
            m.extend_from_slice(mb);
            return State::from_mono(m, Scalar::one());
        }
        let key = (g, Monomial::from_slice(mb));
        if self.memo {
            if let Some(v) = self.nop_cache.lock().unwrap().get(&key) {
                return v.clone();
            }
        }
        let rest = &mb[1..];
        // Quasi-commutativity in the form
        // :g:hM':: = p(g,h):h:gM':: + :(∫_{-T}^0 [g_λ h] dλ) M':
        let corr = self.int_minus_t(&self.gen_bracket(g, h));
        let mut out = State::zero();
        if g == h {
            out.add_scaled(&Scalar::rational(1, 2), &self.nop_gen_state_mono(&corr, rest));
        } else {
            let s = sign(g.is_odd() && h.is_odd());
            let inner = self.nop_gen(g, rest);
            out.add_scaled(&s, &self.nop_gen_state(h, &inner));
            out.add_assign(&self.nop_gen_state_mono(&corr, rest));
        }
        if self.memo {
            self.nop_cache.lock().unwrap().insert(key, out.clone());
        }
        out
    }

    fn nop_gen_state_mono(&self, x: &State, mb: &[Gen]) -> State {
        let mut out = State::zero();
        for (m, c) in x.terms() {
            out.add_scaled(c, &self.nop_mono(m, mb));
        }
        out
    }

    /// `∫_{-T}^0 P(λ) dλ`, i.e. `Σ_j (−1)^j T^{j+1} P_j / (j+1)`.
    pub fn int_minus_t(&self, p: &LPoly) -> State {
        let mut out = State::zero();
        for (j, pj) in p.coeffs.iter().enumerate() {
            if pj.is_zero() {
                continue;
            }
            let c = Scalar::rational(if j % 2 == 0 { 1 } else { -1 }, j as i64 + 1);
            out.add_scaled(&c, &self.apply_t_pow(pj, j + 1));
        }
        out
    }

    // ------------------------------------------------------------------
    // Ordinary λ-bracket of the component vertex algebra

    /// `[x_λ y]` in the underlying (non-SUSY) vertex superalgebra.
    pub fn lambda_bracket_even(&self, x: &State, y: &State) -> LPoly {
        let mut out = LPoly::zero();
        for (ma, ca) in x.terms() {
            for (mb, cb) in y.terms() {
                out.add_scaled(&(ca * cb), &self.bracket_mono(ma, mb));
            }
        }
        out.trim()
    }

    fn gen_bracket(&self, g: Gen, h: Gen) -> LPoly {
        let n = self.dim();
        let data = &self.table[g.idx as usize * n + h.idx as usize];
        // Base bracket of the underlying (T-free) generators.
        let mut base = LPoly::zero();
        let mut brk = State::zero();
        for (c, x) in &data.bracket {
            brk.add_term(smallvec::smallvec![Gen { t: 0, s: g.s && h.s, idx: *c }], x.clone());
        }
        match (g.s, h.s) {
            (false, false) => base.add_at(0, &State::vacuum(), &data.level_pairing),
            (true, true) => {
                base.add_at(0, &brk, &Scalar::one());
                base.add_at(1, &State::vacuum(), &data.level_pairing);
            }
            _ => base.add_at(0, &brk, &Scalar::one()),
        }
        if g.t == 0 && h.t == 0 {
            return base;
        }
        // [T^m A_λ T^n B] = (−λ)^m (λ+T)^n [A_λ B]
        let (m, nn) = (g.t as usize, h.t as usize);
        let sm = sign(m % 2 == 1);
        let mut out = LPoly::zero();
        for (p, x) in base.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for j in 0..=nn {
                let tx = self.apply_t_pow(x, j);
                if tx.is_zero() {
                    continue;
                }
                out.add_at(p + m + nn - j, &tx, &(&sm * &Scalar::int(binom(nn, j))));
            }
        }
        out
    }

    fn bracket_mono(&self, ma: &[Gen], mb: &[Gen]) -> LPoly {
        if ma.is_empty() || mb.is_empty() {
            return LPoly::zero();
        }
        if ma.len() == 1 && mb.len() == 1 {
            return self.gen_bracket(ma[0], mb[0]);
        }
        let key = (Monomial::from_slice(ma), Monomial::from_slice(mb));
        if self.memo {
            if let Some(v) = self.bracket_cache.lock().unwrap().get(&key) {
                return v.clone();
            }
        }
        let out = if mb.len() == 1 {
            // Skew-symmetry: [A_λ b] = −p(A,b) [b_{−λ−T} A]
            let q = self.bracket_mono(mb, ma);
            let s = -sign(mono_parity(ma) == 1 && mb[0].is_odd());
            self.substitute_minus_lambda_minus_t(&q).scale(&s)
        } else {
            // Non-commutative Wick formula:
            // [A_λ :bB':] = :[A_λ b]B': + p(A,b):b[A_λ B']: + ∫_0^λ [[A_λ b]_μ B'] dμ
            let b = mb[0];
            let rest = &mb[1..];
            let rest_state = State::from_mono(rest.iter().copied().collect(), Scalar::one());
            let mut out = LPoly::zero();
            let x = self.bracket_mono(ma, &[b]);
            for (n, xn) in x.coeffs.iter().enumerate() {
                if xn.is_zero() {
                    continue;
                }
                out.add_at(n, &self.nop(xn, &rest_state), &Scalar::one());
                let z = self.lambda_bracket_even(xn, &rest_state);
                for (m, zm) in z.coeffs.iter().enumerate() {
                    out.add_at(n + m + 1, zm, &Scalar::rational(1, m as i64 + 1));
                }
            }
            let s = sign(mono_parity(ma) == 1 && b.is_odd());
            let y = self.bracket_mono(ma, rest);
            for (n, yn) in y.coeffs.iter().enumerate() {
                if !yn.is_zero() {
                    out.add_at(n, &self.nop_gen_state(b, yn), &s);
                }
            }
            out.trim()
        };
        if self.memo {
            self.bracket_cache.lock().unwrap().insert(key, out.clone());
        }
        out
    }

    /// `Σ_n (−λ−T)^n Q_n`, binomials expanded before the operators act.
    pub fn substitute_minus_lambda_minus_t(&self, q: &LPoly) -> LPoly {
        let mut out = LPoly::zero();
        for (n, qn) in q.coeffs.iter().enumerate() {
            if qn.is_zero() {
                continue;
            }
            for j in 0..=n {
                let t = self.apply_t_pow(qn, j);
                if t.is_zero() {
                    break;
                }
                // (−λ)^{n−j} (−T)^j
                let c = Scalar::int(binom(n, j)) * sign(n % 2 == 1);
                out.add_at(n - j, &t, &c);
            }
        }
        out.trim()
    }

    // ------------------------------------------------------------------
    // The Λ-bracket

    /// `[x_Λ y] = [Sx_λ y] + χ[x_λ y]`.
    pub fn lambda_bracket(&self, x: &State, y: &State) -> LambdaValue {
        LambdaValue {
            even: self.lambda_bracket_even(&self.apply_s(x), y),
            odd: self.lambda_bracket_even(x, y),
        }
    }

    /// Number of cached entries (for diagnostics).
    pub fn cache_size(&self) -> usize {
        self.nop_cache.lock().unwrap().len() + self.bracket_cache.lock().unwrap().len()
    }
}

/// Generators nondecreasing with no repeated odd generator.
fn is_canonical(gens: &[Gen]) -> bool {
    gens.windows(2).all(|w| w[0] < w[1] || (w[0] == w[1] && !w[0].is_odd()))
}

#[cfg(test)]
mod tests;
