//! Generators, monomials and states of the superaffine vertex algebra.

use std::collections::BTreeMap;
use std::fmt;

use smallvec::SmallVec;

use crate::scalar::Scalar;

/// `T^t S^s` applied to the odd generator attached to basis vector `idx`.
///
/// Field order gives the canonical ordering: T-degree, then S-flag, then
/// basis index.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Gen {
    pub t: u16,
    pub s: bool,
    pub idx: u16,
}

impl Gen {
    pub fn new(idx: usize) -> Gen {
        Gen { t: 0, s: false, idx: idx as u16 }
    }

    /// Odd generators are `T^m a`; even ones are `T^m S a`.
    pub fn is_odd(&self) -> bool {
        !self.s
    }

    pub fn parity(&self) -> u8 {
        u8::from(self.is_odd())
    }

    pub fn with_t(self, dt: u16) -> Gen {
        Gen { t: self.t + dt, ..self }
    }

    /// `S` applied once: `S(T^m a) = T^m Sa`, `S(T^m Sa) = T^{m+1} a`.
    pub fn apply_s(self) -> Gen {
        if self.s {
            Gen { t: self.t + 1, s: false, idx: self.idx }
        } else {
            Gen { s: true, ..self }
        }
    }

    pub fn render(&self, names: &[String]) -> String {
        let mut out = String::new();
        match self.t {
            0 => {}
            1 => out.push('T'),
            t => out.push_str(&format!("T^{t}")),
        }
        if self.s {
            out.push('S');
        }
        out.push_str(&names[self.idx as usize]);
        out
    }
}

/// Right-nested normally ordered product `:g₁(:g₂(…):):` with generators in
/// nondecreasing canonical order (odd generators never repeat).
pub type Monomial = SmallVec<[Gen; 4]>;

pub fn mono_parity(m: &[Gen]) -> u8 {
    (m.iter().filter(|g| g.is_odd()).count() % 2) as u8
}

/// Finite linear combination of normal-form monomials.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct State {
    pub(crate) terms: BTreeMap<Monomial, Scalar>,
}

impl State {
    pub fn zero() -> State {
        State { terms: BTreeMap::new() }
    }

    pub fn vacuum() -> State {
        State::from_mono(Monomial::new(), Scalar::one())
    }

    pub fn from_mono(m: Monomial, c: Scalar) -> State {
        let mut s = State::zero();
        s.add_term(m, c);
        s
    }

    pub fn gen(g: Gen) -> State {
        State::from_mono(smallvec::smallvec![g], Scalar::one())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &[Gen]) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    /// Coefficient of the vacuum.
    pub fn vacuum_coefficient(&self) -> Scalar {
        self.coefficient(&[])
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(e) => {
                *e = &*e + &c;
                if e.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn add_assign(&mut self, o: &State) {
        for (m, c) in &o.terms {
            self.add_term(m.clone(), c.clone());
        }
    }

    /// `self += c · o`.
    pub fn add_scaled(&mut self, c: &Scalar, o: &State) {
        if c.is_zero() {
            return;
        }
        for (m, x) in &o.terms {
            self.add_term(m.clone(), c * x);
        }
    }

    pub fn add(&self, o: &State) -> State {
        let mut out = self.clone();
        out.add_assign(o);
        out
    }

    pub fn sub(&self, o: &State) -> State {
        let mut out = self.clone();
        out.add_scaled(&Scalar::int(-1), o);
        out
    }

    pub fn scale(&self, c: &Scalar) -> State {
        let mut out = State::zero();
        out.add_scaled(c, self);
        out
    }

    pub fn neg(&self) -> State {
        self.scale(&Scalar::int(-1))
    }

    /// Parity if homogeneous (`None` for zero or mixed states).
    pub fn parity(&self) -> Option<u8> {
        let mut ps = self.terms.keys().map(|m| mono_parity(m));
        let first = ps.next()?;
        if ps.all(|p| p == first) {
            Some(first)
        } else {
            None
        }
    }

    /// Apply `f` to every coefficient.
    pub fn map_coeffs(&self, f: impl Fn(&Scalar) -> Scalar) -> State {
        let mut out = State::zero();
        for (m, c) in &self.terms {
            out.add_term(m.clone(), f(c));
        }
        out
    }

    /// Deterministic text rendering with the given basis names.
    pub fn render(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mono = render_mono(m, names);
                if m.is_empty() {
                    format!("({c})")
                } else if c.is_one() {
                    mono
                } else {
                    format!("({c})*{mono}")
                }
            })
            .collect();
        parts.join(" + ")
    }
}

pub fn render_mono(m: &[Gen], names: &[String]) -> String {
    match m.len() {
        0 => "|0>".into(),
        1 => m[0].render(names),
        _ => format!(":{}:", m.iter().map(|g| g.render(names)).collect::<Vec<_>>().join(" ")),
    }
}

impl fmt::Debug for State {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self
            .terms
            .keys()
            .flat_map(|m| m.iter().map(|g| g.idx as usize + 1))
            .max()
            .unwrap_or(0);
        let names: Vec<String> = (0..n).map(|i| format!("w{i}")).collect();
        write!(f, "{}", self.render(&names))
    }
}

/// Polynomial in an even variable with State coefficients: `Σ λⁿ coeffs[n]`.
#[derive(Clone, PartialEq, Eq, Default, Debug)]
pub struct LPoly {
    pub coeffs: Vec<State>,
}

impl LPoly {
    pub fn zero() -> LPoly {
        LPoly { coeffs: Vec::new() }
    }

    pub fn constant(s: State) -> LPoly {
        let mut p = LPoly::zero();
        p.add_at(0, &s, &Scalar::one());
        p
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(State::is_zero)
    }

    pub fn coeff(&self, n: usize) -> State {
        self.coeffs.get(n).cloned().unwrap_or_default()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.iter().rposition(|s| !s.is_zero())
    }

    /// `self += c · λⁿ · s`.
    pub fn add_at(&mut self, n: usize, s: &State, c: &Scalar) {
        if s.is_zero() || c.is_zero() {
            return;
        }
        if self.coeffs.len() <= n {
            self.coeffs.resize(n + 1, State::zero());
        }
        self.coeffs[n].add_scaled(c, s);
    }

    pub fn add_assign(&mut self, o: &LPoly) {
        for (n, s) in o.coeffs.iter().enumerate() {
            self.add_at(n, s, &Scalar::one());
        }
    }

    pub fn add_scaled(&mut self, c: &Scalar, o: &LPoly) {
        for (n, s) in o.coeffs.iter().enumerate() {
            self.add_at(n, s, c);
        }
    }

    pub fn scale(&self, c: &Scalar) -> LPoly {
        let mut out = LPoly::zero();
        out.add_scaled(c, self);
        out
    }

    pub fn trim(mut self) -> LPoly {
        while self.coeffs.last().is_some_and(State::is_zero) {
            self.coeffs.pop();
        }
        self
    }

    pub fn render(&self, names: &[String], var: &str) -> String {
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, s)| !s.is_zero())
            .map(|(n, s)| match n {
                0 => format!("[{}]", s.render(names)),
                1 => format!("{var}*[{}]", s.render(names)),
                n => format!("{var}^{n}*[{}]", s.render(names)),
            })
            .collect();
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

pub(crate) fn binom(n: usize, k: usize) -> i64 {
    let mut r: i64 = 1;
    for i in 0..k {
        r = r * (n - i) as i64 / (i + 1) as i64;
    }
    r
}
