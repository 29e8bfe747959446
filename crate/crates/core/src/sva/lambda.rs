//! Values of Λ-brackets and the SUSY Λ-calculus: sesquilinearity,
//! skew-symmetry under `Λ ↦ −Λ−∇`, double-Λ arithmetic for the Jacobi
//! identity, and the two definite integrals.

use std::collections::BTreeMap;

use super::state::{binom, LPoly, State};
use super::Sva;
use crate::scalar::Scalar;

/// `Σ_n λⁿ (even_n + χ odd_n)`, the general element of `𝓛 ⊗ V`.
#[derive(Clone, PartialEq, Eq, Default, Debug)]
pub struct LambdaValue {
    pub even: LPoly,
    pub odd: LPoly,
}

impl LambdaValue {
    pub fn zero() -> LambdaValue {
        LambdaValue::default()
    }

    /// The constant value `x` (no λ, no χ).
    pub fn constant(x: State) -> LambdaValue {
        LambdaValue { even: LPoly::constant(x), odd: LPoly::zero() }
    }

    /// `λⁿ χ^J x`.
    pub fn term(n: usize, chi: bool, x: &State) -> LambdaValue {
        let mut v = LambdaValue::zero();
        v.add_term(n, chi, x, &Scalar::one());
        v
    }

    pub fn is_zero(&self) -> bool {
        self.even.is_zero() && self.odd.is_zero()
    }

    /// Coefficient of `λⁿ χ^J`.
    pub fn coeff(&self, n: usize, chi: bool) -> State {
        if chi {
            self.odd.coeff(n)
        } else {
            self.even.coeff(n)
        }
    }

    pub fn add_term(&mut self, n: usize, chi: bool, x: &State, c: &Scalar) {
        if chi {
            self.odd.add_at(n, x, c);
        } else {
            self.even.add_at(n, x, c);
        }
    }

    pub fn add(&self, o: &LambdaValue) -> LambdaValue {
        let mut out = self.clone();
        out.even.add_assign(&o.even);
        out.odd.add_assign(&o.odd);
        out.trim()
    }

    pub fn sub(&self, o: &LambdaValue) -> LambdaValue {
        self.add(&o.scale(&Scalar::int(-1)))
    }

    pub fn scale(&self, c: &Scalar) -> LambdaValue {
        LambdaValue { even: self.even.scale(c), odd: self.odd.scale(c) }.trim()
    }

    pub fn trim(self) -> LambdaValue {
        LambdaValue { even: self.even.trim(), odd: self.odd.trim() }
    }

    /// Left multiplication by `λ`.
    pub fn mul_lambda(&self) -> LambdaValue {
        let shift = |p: &LPoly| {
            let mut out = LPoly::zero();
            for (n, x) in p.coeffs.iter().enumerate() {
                out.add_at(n + 1, x, &Scalar::one());
            }
            out
        };
        LambdaValue { even: shift(&self.even), odd: shift(&self.odd) }
    }

    /// Left multiplication by `χ`, using `χ² = −λ`.
    pub fn mul_chi(&self) -> LambdaValue {
        LambdaValue { even: self.odd.scale(&Scalar::int(-1)), odd: self.even.clone() }.mul_lambda_odd_part()
    }

    // helper for mul_chi: the even part produced from χ·χ carries one λ.
    fn mul_lambda_odd_part(self) -> LambdaValue {
        let mut even = LPoly::zero();
        for (n, x) in self.even.coeffs.iter().enumerate() {
            even.add_at(n + 1, x, &Scalar::one());
        }
        LambdaValue { even, odd: self.odd }
    }

    /// Map every State coefficient.
    pub fn map_states(&self, f: impl Fn(&State) -> State) -> LambdaValue {
        let map = |p: &LPoly| {
            let mut out = LPoly::zero();
            for (n, x) in p.coeffs.iter().enumerate() {
                out.add_at(n, &f(x), &Scalar::one());
            }
            out
        };
        LambdaValue { even: map(&self.even), odd: map(&self.odd) }.trim()
    }

    /// Deterministic text form, e.g. `[x] + lambda*chi*[y]`.
    pub fn render(&self, names: &[String]) -> String {
        let mut parts = Vec::new();
        for (chi, p) in [(false, &self.even), (true, &self.odd)] {
            for (n, x) in p.coeffs.iter().enumerate() {
                if x.is_zero() {
                    continue;
                }
                let mut var = match n {
                    0 => String::new(),
                    1 => "lambda*".into(),
                    n => format!("lambda^{n}*"),
                };
                if chi {
                    var.push_str("chi*");
                }
                parts.push(format!("{var}[{}]", x.render(names)));
            }
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

/// Exponents of `λ^i χ^I γ^j η^J`, always written in this order.
pub type DoubleKey = (u32, bool, u32, bool);

/// Element of `𝓛 ⊗ 𝓛' ⊗ V` with variables `Λ = (λ, χ)` and `Γ = (γ, η)`.
#[derive(Clone, PartialEq, Eq, Default, Debug)]
pub struct DoubleLambdaValue {
    pub terms: BTreeMap<DoubleKey, State>,
}

/// Product of two ordered monomials: returns the sign-adjusted coefficient
/// and the key, applying `χ² = −λ`, `η² = −γ` and the odd/odd commutation
/// `ηχ = −χη`.
pub fn mul_keys(a: DoubleKey, b: DoubleKey) -> (i64, DoubleKey) {
    let (i, ci, j, ej) = a;
    let (i2, ci2, j2, ej2) = b;
    let mut s = 1i64;
    // move χ^{ci2} left across η^{ej}
    if ej && ci2 {
        s = -s;
    }
    let (mut li, chi) = (i + i2, ci ^ ci2);
    if ci && ci2 {
        s = -s;
        li += 1;
    }
    let (mut gj, eta) = (j + j2, ej ^ ej2);
    if ej && ej2 {
        s = -s;
        gj += 1;
    }
    (s, (li, chi, gj, eta))
}

impl DoubleLambdaValue {
    pub fn zero() -> DoubleLambdaValue {
        DoubleLambdaValue::default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.values().all(State::is_zero)
    }

    pub fn add_term(&mut self, key: DoubleKey, x: &State, c: &Scalar) {
        if x.is_zero() || c.is_zero() {
            return;
        }
        let e = self.terms.entry(key).or_default();
        e.add_scaled(c, x);
        if e.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn add_assign(&mut self, o: &DoubleLambdaValue) {
        for (k, x) in &o.terms {
            self.add_term(*k, x, &Scalar::one());
        }
    }

    pub fn scale(&self, c: &Scalar) -> DoubleLambdaValue {
        let mut out = DoubleLambdaValue::zero();
        for (k, x) in &self.terms {
            out.add_term(*k, x, c);
        }
        out
    }

    pub fn sub(&self, o: &DoubleLambdaValue) -> DoubleLambdaValue {
        let mut out = self.clone();
        out.add_assign(&o.scale(&Scalar::int(-1)));
        out
    }

    /// Left multiplication by the monomial `key`.
    pub fn mul_left(&self, key: DoubleKey) -> DoubleLambdaValue {
        let mut out = DoubleLambdaValue::zero();
        for (k, x) in &self.terms {
            let (s, nk) = mul_keys(key, *k);
            out.add_term(nk, x, &Scalar::int(s));
        }
        out
    }

    /// Embed a value in `Λ` only.
    pub fn from_lambda(v: &LambdaValue) -> DoubleLambdaValue {
        let mut out = DoubleLambdaValue::zero();
        for (chi, p) in [(false, &v.even), (true, &v.odd)] {
            for (n, x) in p.coeffs.iter().enumerate() {
                out.add_term((n as u32, chi, 0, false), x, &Scalar::one());
            }
        }
        out
    }

    /// Embed a value in `Γ` only (renaming `λ, χ` to `γ, η`).
    pub fn from_gamma(v: &LambdaValue) -> DoubleLambdaValue {
        let mut out = DoubleLambdaValue::zero();
        for (chi, p) in [(false, &v.even), (true, &v.odd)] {
            for (n, x) in p.coeffs.iter().enumerate() {
                out.add_term((0, false, n as u32, chi), x, &Scalar::one());
            }
        }
        out
    }

    /// Project onto a Γ-free value, if it is one.
    pub fn to_lambda(&self) -> Option<LambdaValue> {
        let mut out = LambdaValue::zero();
        for ((i, ci, j, ej), x) in &self.terms {
            if *j != 0 || *ej {
                return None;
            }
            out.add_term(*i as usize, *ci, x, &Scalar::one());
        }
        Some(out.trim())
    }

    pub fn render(&self, names: &[String]) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let pw = |v: &str, n: u32| match n {
            0 => String::new(),
            1 => format!("{v}*"),
            n => format!("{v}^{n}*"),
        };
        self.terms
            .iter()
            .map(|((i, ci, j, ej), x)| {
                format!(
                    "{}{}{}{}[{}]",
                    pw("lambda", *i),
                    if *ci { "chi*" } else { "" },
                    pw("gamma", *j),
                    if *ej { "eta*" } else { "" },
                    x.render(names)
                )
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

/// Integration bounds for [`Sva::integrate`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Bounds {
    /// `∫_0^Λ dΓ`: left `∂_η`, then `∫_0^λ dγ`.
    ZeroToLambda,
    /// `∫_{−∇}^0 dΓ` of a Λ-free value: left `∂_η`, then `∫_{−T}^0 dγ`.
    MinusNablaToZero,
}

impl Sva {
    /// `S` applied to a Λ-value, commuting `S` to the right with
    /// `[S, λ] = 0` and `Sχ = −χS + 2λ`.
    pub fn lv_apply_s(&self, v: &LambdaValue) -> LambdaValue {
        let mut out = LambdaValue::zero();
        for (n, x) in v.even.coeffs.iter().enumerate() {
            out.add_term(n, false, &self.apply_s(x), &Scalar::one());
        }
        for (n, x) in v.odd.coeffs.iter().enumerate() {
            out.add_term(n, true, &self.apply_s(x), &Scalar::int(-1));
            out.add_term(n + 1, false, x, &Scalar::int(2));
        }
        out.trim()
    }

    pub fn lv_apply_t(&self, v: &LambdaValue) -> LambdaValue {
        v.map_states(|x| self.apply_t(x))
    }

    /// `[b_{−Λ−∇} a]` from the value `q = [b_Γ a]`: expand in Γ, replace
    /// `Γ` by `(−λ−T, −χ−S)` and apply the operators to the coefficients.
    pub fn substitute_minus_lambda_minus_nabla(&self, q: &LambdaValue) -> LambdaValue {
        // Σ_n Γ^n (E_n + η O_n) ↦ Σ_n (−λ−T)^n (E_n − χ O_n − S O_n)
        let mut even_in = LPoly::zero();
        let mut odd_in = LPoly::zero();
        for (n, e) in q.even.coeffs.iter().enumerate() {
            even_in.add_at(n, e, &Scalar::one());
        }
        for (n, o) in q.odd.coeffs.iter().enumerate() {
            even_in.add_at(n, &self.apply_s(o), &Scalar::int(-1));
            odd_in.add_at(n, o, &Scalar::int(-1));
        }
        LambdaValue {
            even: self.substitute_minus_lambda_minus_t(&even_in),
            odd: self.substitute_minus_lambda_minus_t(&odd_in),
        }
        .trim()
    }

    /// `∫_{−∇}^0 dΛ A = ∫_{−T}^0 ∂_χ A dλ`.
    pub fn integrate_minus_nabla(&self, v: &LambdaValue) -> State {
        self.int_minus_t(&v.odd)
    }

    /// Definite integrals over the inner variable Γ.
    ///
    /// `ZeroToLambda` returns `∫_0^Λ dΓ v`. `MinusNablaToZero` expects a
    /// Λ-free value and returns the State `∫_{−∇}^0 dΓ v` as a constant.
    pub fn integrate(&self, v: &DoubleLambdaValue, bounds: Bounds) -> LambdaValue {
        match bounds {
            Bounds::ZeroToLambda => {
                let mut out = LambdaValue::zero();
                for ((i, ci, j, ej), x) in &v.terms {
                    if !*ej {
                        continue;
                    }
                    // left ∂_η passes χ^I with sign (−1)^I; ∫_0^λ γ^j dγ = λ^{j+1}/(j+1)
                    let s = if *ci { -1 } else { 1 };
                    out.add_term((i + j + 1) as usize, *ci, x, &Scalar::rational(s, *j as i64 + 1));
                }
                out.trim()
            }
            Bounds::MinusNablaToZero => {
                let mut odd = LPoly::zero();
                for ((i, ci, j, ej), x) in &v.terms {
                    assert!(*i == 0 && !*ci, "∫_{{−∇}}^0 dΓ expects a Λ-free value");
                    if *ej {
                        odd.add_at(*j as usize, x, &Scalar::one());
                    }
                }
                LambdaValue::constant(self.int_minus_t(&odd))
            }
        }
    }

    /// `[x_Λ y]` with y carrying a Λ-polynomial on its left:
    /// `[a_Λ q(Γ) b] = (−1)^{|q|(|a|+1)} q(Γ)[a_Λ b]` in double variables.
    pub fn bracket_into_gamma(&self, a: &State, pa: u8, inner: &DoubleLambdaValue) -> DoubleLambdaValue {
        let mut out = DoubleLambdaValue::zero();
        for (&(i, ci, j, ej), x) in &inner.terms {
            assert!(i == 0 && !ci, "inner value must be Γ-only");
            let v = DoubleLambdaValue::from_lambda(&self.lambda_bracket(a, x));
            let q_odd = ej;
            let s = if q_odd && pa == 0 { -1 } else { 1 };
            out.add_assign(&v.mul_left((0, false, j, ej)).scale(&Scalar::int(s)));
        }
        out
    }

    /// `[[a_Λ b]_{Λ+Γ} c]` for a Λ-value `[a_Λ b]`.
    ///
    /// A polynomial `q(Λ)` in the left slot is pulled out as
    /// `[q(Λ)x_Ψ c] = (−1)^{|q|} q(Λ)[x_Ψ c]`: the Λ-bracket is odd, so an odd
    /// `χ` crossing the bracket symbol picks up a sign.
    pub fn bracket_shifted(&self, ab: &LambdaValue, c: &State) -> DoubleLambdaValue {
        let mut out = DoubleLambdaValue::zero();
        for (chi, p) in [(false, &ab.even), (true, &ab.odd)] {
            for (i, x) in p.coeffs.iter().enumerate() {
                if x.is_zero() {
                    continue;
                }
                let inner = self.lambda_bracket(x, c);
                // Ψ^{m|M} ↦ (λ+γ)^m (χ+η)^M
                let mut expanded = DoubleLambdaValue::zero();
                for (big_m, q) in [(false, &inner.even), (true, &inner.odd)] {
                    for (m, y) in q.coeffs.iter().enumerate() {
                        if y.is_zero() {
                            continue;
                        }
                        for r in 0..=m {
                            let c = Scalar::int(binom(m, r));
                            let base = DoubleLambdaValue::from_lambda(&LambdaValue::constant(y.clone()));
                            let key = (r as u32, false, (m - r) as u32, false);
                            if big_m {
                                let t1 = base.mul_left((0, true, 0, false)).mul_left(key);
                                let t2 = base.mul_left((0, false, 0, true)).mul_left(key);
                                expanded.add_assign(&t1.scale(&c));
                                expanded.add_assign(&t2.scale(&c));
                            } else {
                                expanded.add_assign(&base.mul_left(key).scale(&c));
                            }
                        }
                    }
                }
                let s = if chi { -1 } else { 1 };
                out.add_assign(&expanded.mul_left((i as u32, chi, 0, false)).scale(&Scalar::int(s)));
            }
        }
        out
    }

    /// `[b_Γ (Λ-value)]` with the Λ-polynomial pulled out by the Koszul rule
    /// (`[b_Γ q(Λ) x] = (−1)^{|q|(|b|+1)} q(Λ)[b_Γ x]`).
    pub fn bracket_gamma_over_lambda(&self, b: &State, pb: u8, ac: &LambdaValue) -> DoubleLambdaValue {
        let mut out = DoubleLambdaValue::zero();
        for (chi, p) in [(false, &ac.even), (true, &ac.odd)] {
            for (i, x) in p.coeffs.iter().enumerate() {
                if x.is_zero() {
                    continue;
                }
                let v = DoubleLambdaValue::from_gamma(&self.lambda_bracket(b, x));
                let s = if chi && pb == 0 { -1 } else { 1 };
                out.add_assign(&v.mul_left((i as u32, chi, 0, false)).scale(&Scalar::int(s)));
            }
        }
        out
    }

    /// The SUSY Jacobi defect
    /// `[a_Λ[b_Γ c]] − (−1)^{|a|+1}[[a_Λ b]_{Λ+Γ} c] − (−1)^{(|a|+1)(|b|+1)}[b_Γ[a_Λ c]]`
    /// for homogeneous `a, b`.
    pub fn jacobi_defect(&self, a: &State, b: &State, c: &State) -> DoubleLambdaValue {
        let pa = a.parity().unwrap_or(0);
        let pb = b.parity().unwrap_or(0);
        let bc = DoubleLambdaValue::from_gamma(&self.lambda_bracket(b, c));
        let lhs = self.bracket_into_gamma(a, pa, &bc);
        let r1 = self.bracket_shifted(&self.lambda_bracket(a, b), c);
        let r2 = self.bracket_gamma_over_lambda(b, pb, &self.lambda_bracket(a, c));
        let s1 = if pa == 1 { 1 } else { -1 };
        let s2 = if pa == 0 && pb == 0 { -1 } else { 1 };
        lhs.sub(&r1.scale(&Scalar::int(s1))).sub(&r2.scale(&Scalar::int(s2)))
    }

    /// Λ-skew-symmetry: `(−1)^{|a||b|}[b_{−Λ−∇} a]`, which must equal `[a_Λ b]`.
    pub fn skew_value(&self, a: &State, b: &State) -> LambdaValue {
        let pa = a.parity().unwrap_or(0);
        let pb = b.parity().unwrap_or(0);
        let v = self.substitute_minus_lambda_minus_nabla(&self.lambda_bracket(b, a));
        if pa == 1 && pb == 1 {
            v.scale(&Scalar::int(-1))
        } else {
            v
        }
    }

    /// `[a_Λ :bc:]` assembled by the SUSY non-commutative Wick formula
    /// `:[a_Λ b]c: + (−1)^{(|a|+1)|b|}:b[a_Λ c]: + ∫_0^Λ dΓ [[a_Λ b]_Γ c]`.
    pub fn susy_wick(&self, a: &State, b: &State, c: &State) -> LambdaValue {
        let pa = a.parity().unwrap_or(0);
        let pb = b.parity().unwrap_or(0);
        let ab = self.lambda_bracket(a, b);
        let mut out = ab.map_states(|x| self.nop(x, c));
        // :b χ^I λ^n y: = (−1)^{I|b|} χ^I λ^n :b y:
        let ac = self.lambda_bracket(a, c);
        let s = if pa == 0 && pb == 1 { -1 } else { 1 };
        let mut second = LambdaValue::zero();
        for (chi, p) in [(false, &ac.even), (true, &ac.odd)] {
            for (n, y) in p.coeffs.iter().enumerate() {
                let sg = if chi && pb == 1 { -s } else { s };
                second.add_term(n, chi, &self.nop(b, y), &Scalar::int(sg));
            }
        }
        out = out.add(&second);
        // [[a_Λ b]_Γ c] with Λ-powers pulled to the left (odd χ crosses the odd bracket)
        let mut nested = DoubleLambdaValue::zero();
        for (chi, p) in [(false, &ab.even), (true, &ab.odd)] {
            for (i, x) in p.coeffs.iter().enumerate() {
                if x.is_zero() {
                    continue;
                }
                let v = DoubleLambdaValue::from_gamma(&self.lambda_bracket(x, c));
                let s = if chi { -1 } else { 1 };
                nested.add_assign(&v.mul_left((i as u32, chi, 0, false)).scale(&Scalar::int(s)));
            }
        }
        out.add(&self.integrate(&nested, Bounds::ZeroToLambda))
    }
}
