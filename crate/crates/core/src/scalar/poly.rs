//! Sparse multivariate polynomials with rational coefficients.
//!
//! Monomials are exponent vectors with trailing zeros trimmed, so a polynomial
//! written over a field with few variables stays valid after the field is
//! extended by more variables. Terms are kept in a `BTreeMap`, whose key order
//! is lexicographic with variable 0 most significant; that order is a
//! monomial order and is used by division and the leading-term helpers.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use smallvec::SmallVec;

pub type Rat = BigRational;

/// Exponent vector with trailing zeros removed.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Mono(pub SmallVec<[u16; 6]>);

impl Mono {
    pub fn one() -> Self {
        Mono(SmallVec::new())
    }

    pub fn var(v: usize, e: u16) -> Self {
        let mut m = SmallVec::from_elem(0, v + 1);
        m[v] = e;
        let mut out = Mono(m);
        out.trim();
        out
    }

    fn trim(&mut self) {
        while self.0.last() == Some(&0) {
            self.0.pop();
        }
    }

    pub fn exp(&self, v: usize) -> u16 {
        self.0.get(v).copied().unwrap_or(0)
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn mul(&self, other: &Mono) -> Mono {
        let n = self.0.len().max(other.0.len());
        let mut m: SmallVec<[u16; 6]> = SmallVec::with_capacity(n);
        for i in 0..n {
            m.push(self.exp(i) + other.exp(i));
        }
        Mono(m)
    }

    /// `self / other` if `other` divides `self`.
    pub fn div(&self, other: &Mono) -> Option<Mono> {
        if other.0.len() > self.0.len() {
            return None;
        }
        let mut m = self.0.clone();
        for (i, e) in other.0.iter().enumerate() {
            if m[i] < *e {
                return None;
            }
            m[i] -= e;
        }
        let mut out = Mono(m);
        out.trim();
        Some(out)
    }

    pub fn with_exp(&self, v: usize, e: u16) -> Mono {
        let mut m = self.0.clone();
        if m.len() <= v {
            m.resize(v + 1, 0);
        }
        m[v] = e;
        let mut out = Mono(m);
        out.trim();
        out
    }

    pub fn min(&self, other: &Mono) -> Mono {
        let n = self.0.len().min(other.0.len());
        let mut out = Mono((0..n).map(|i| self.0[i].min(other.0[i])).collect());
        out.trim();
        out
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }
}

impl fmt::Debug for Mono {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0.as_slice())
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    pub terms: BTreeMap<Mono, Rat>,
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.terms)
    }
}

impl Poly {
    pub fn zero() -> Self {
        Poly { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::constant(Rat::one())
    }

    pub fn constant(c: Rat) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Mono::one(), c);
        }
        Poly { terms }
    }

    pub fn monomial(m: Mono, c: Rat) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Poly { terms }
    }

    pub fn var(v: usize) -> Self {
        Self::monomial(Mono::var(v, 1), Rat::one())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&Mono::one()).is_some_and(|c| c.is_one())
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms.contains_key(&Mono::one()))
    }

    pub fn constant_value(&self) -> Option<Rat> {
        if self.terms.is_empty() {
            Some(Rat::zero())
        } else if self.is_constant() {
            self.terms.values().next().cloned()
        } else {
            None
        }
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn leading(&self) -> Option<(&Mono, &Rat)> {
        self.terms.iter().next_back()
    }

    fn add_term(&mut self, m: Mono, c: Rat) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let (mut big, small) = if self.terms.len() >= other.terms.len() {
            (self.clone(), other)
        } else {
            (other.clone(), self)
        };
        for (m, c) in &small.terms {
            big.add_term(m.clone(), c.clone());
        }
        big
    }

    pub fn add_assign(&mut self, other: &Poly) {
        for (m, c) in &other.terms {
            self.add_term(m.clone(), c.clone());
        }
    }

    pub fn neg(&self) -> Poly {
        Poly { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }

    pub fn scale(&self, c: &Rat) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly { terms: self.terms.iter().map(|(m, d)| (m.clone(), d * c)).collect() }
    }

    pub fn mul_term(&self, m: &Mono, c: &Rat) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly { terms: self.terms.iter().map(|(n, d)| (n.mul(m), d * c)).collect() }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        if let Some(c) = self.constant_value() {
            return other.scale(&c);
        }
        if let Some(c) = other.constant_value() {
            return self.scale(&c);
        }
        let mut out = Poly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Highest index of a variable that occurs, if any.
    pub fn max_var(&self) -> Option<usize> {
        self.terms.keys().filter(|m| !m.is_one()).map(|m| m.0.len() - 1).max()
    }

    pub fn contains_var(&self, v: usize) -> bool {
        self.terms.keys().any(|m| m.exp(v) > 0)
    }

    pub fn vars(&self) -> Vec<usize> {
        let mut seen = Vec::new();
        for m in self.terms.keys() {
            for (i, e) in m.0.iter().enumerate() {
                if *e > 0 && !seen.contains(&i) {
                    seen.push(i);
                }
            }
        }
        seen.sort_unstable();
        seen
    }

    pub fn degree_in(&self, v: usize) -> u16 {
        self.terms.keys().map(|m| m.exp(v)).max().unwrap_or(0)
    }

    /// Coefficients with respect to variable `v`: `self = Σ coeffs[e] v^e`.
    pub fn coeffs_in(&self, v: usize) -> Vec<Poly> {
        let d = self.degree_in(v) as usize;
        let mut out = vec![Poly::zero(); d + 1];
        for (m, c) in &self.terms {
            let e = m.exp(v) as usize;
            out[e].add_term(m.with_exp(v, 0), c.clone());
        }
        out
    }

    pub fn from_coeffs_in(v: usize, coeffs: &[Poly]) -> Poly {
        let mut out = Poly::zero();
        for (e, p) in coeffs.iter().enumerate() {
            for (m, c) in &p.terms {
                out.add_term(m.mul(&Mono::var(v, e as u16)), c.clone());
            }
        }
        out
    }

    /// Leading coefficient in lex order.
    pub fn lc(&self) -> Rat {
        self.leading().map(|(_, c)| c.clone()).unwrap_or_else(Rat::zero)
    }

    /// Scale so that the lex-leading coefficient is 1.
    pub fn monic(&self) -> Poly {
        match self.leading() {
            None => Poly::zero(),
            Some((_, c)) if c.is_one() => self.clone(),
            Some((_, c)) => self.scale(&c.recip()),
        }
    }

    /// Exact division; `None` when `other` does not divide `self`.
    pub fn div_exact(&self, other: &Poly) -> Option<Poly> {
        assert!(!other.is_zero(), "polynomial division by zero");
        if let Some(c) = other.constant_value() {
            return Some(self.scale(&c.recip()));
        }
        if other.is_monomial() {
            let (m, c) = other.leading().unwrap();
            let inv = c.recip();
            let mut out = BTreeMap::new();
            for (n, d) in &self.terms {
                out.insert(n.div(m)?, d * &inv);
            }
            return Some(Poly { terms: out });
        }
        let (lm, lc) = other.leading().map(|(m, c)| (m.clone(), c.clone())).unwrap();
        let mut rem = self.clone();
        let mut quo = Poly::zero();
        while let Some((m, c)) = rem.leading().map(|(m, c)| (m.clone(), c.clone())) {
            let qm = m.div(&lm)?;
            let qc = c / &lc;
            rem = rem.sub(&other.mul_term(&qm, &qc));
            quo.add_term(qm, qc);
        }
        Some(quo)
    }

    /// Replace variable `v` by the polynomial `value`.
    pub fn substitute(&self, v: usize, value: &Poly) -> Poly {
        let coeffs = self.coeffs_in(v);
        let mut out = Poly::zero();
        for c in coeffs.iter().rev() {
            out = out.mul(value).add(c);
        }
        out
    }

    /// Largest monomial dividing every term.
    pub fn content_gcd_mono(&self) -> Mono {
        let mut it = self.terms.keys();
        let mut g = match it.next() {
            Some(m) => m.clone(),
            None => return Mono::one(),
        };
        for m in it {
            g = Mono::min(&g, m);
            if g.is_one() {
                break;
            }
        }
        g
    }

    pub fn to_string_with(&self, names: &dyn Fn(usize) -> String) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if k == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mut factors = Vec::new();
            if !a.is_one() || m.is_one() {
                factors.push(format!("{}", a));
            }
            for (v, e) in m.0.iter().enumerate() {
                match *e {
                    0 => {}
                    1 => factors.push(names(v)),
                    e => factors.push(format!("{}^{}", names(v), e)),
                }
            }
            out.push_str(&factors.join("*"));
        }
        out
    }
}

/// Multivariate gcd over ℚ, normalized to be monic in lex order.
pub fn gcd(a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    if a.is_constant() || b.is_constant() {
        return Poly::one();
    }
    if a.is_monomial() || b.is_monomial() {
        let g = Mono::min(&a.content_gcd_mono(), &b.content_gcd_mono());
        return Poly::monomial(g, Rat::one());
    }
    let va = a.vars();
    let vb = b.vars();
    // A variable present in only one argument cannot occur in the gcd.
    if let Some(&v) = va.iter().find(|v| !vb.contains(v)) {
        return gcd(&content_in(a, v), b);
    }
    if let Some(&v) = vb.iter().find(|v| !va.contains(v)) {
        return gcd(a, &content_in(b, v));
    }
    let v = *va.last().unwrap();
    let ca = content_in(a, v);
    let cb = content_in(b, v);
    let c = gcd(&ca, &cb);
    let pa = a.div_exact(&ca).expect("content divides");
    let pb = b.div_exact(&cb).expect("content divides");
    let g = primitive_prs(pa, pb, v);
    c.mul(&g).monic()
}

/// gcd of the coefficients of `p` viewed as a polynomial in `v`.
pub fn content_in(p: &Poly, v: usize) -> Poly {
    let mut g = Poly::zero();
    for c in p.coeffs_in(v) {
        if c.is_zero() {
            continue;
        }
        g = gcd(&g, &c);
        if g.is_one() {
            break;
        }
    }
    g
}

fn primitive_part(p: &Poly, v: usize) -> Poly {
    let c = content_in(p, v);
    p.div_exact(&c).expect("content divides").monic()
}

fn pseudo_rem(a: &Poly, b: &Poly, v: usize) -> Poly {
    let db = b.degree_in(v);
    let bc = b.coeffs_in(v);
    let lcb = bc[db as usize].clone();
    let mut r = a.clone();
    loop {
        if r.is_zero() {
            return r;
        }
        let dr = r.degree_in(v);
        if dr < db {
            return r;
        }
        let lcr = r.coeffs_in(v)[dr as usize].clone();
        let shift = Mono::var(v, dr - db);
        let t = b.mul(&lcr).mul_term(&shift, &Rat::one());
        r = r.mul(&lcb).sub(&t);
    }
}

fn primitive_prs(a: Poly, b: Poly, v: usize) -> Poly {
    let (mut r0, mut r1) = if a.degree_in(v) >= b.degree_in(v) { (a, b) } else { (b, a) };
    loop {
        if r1.degree_in(v) == 0 {
            return Poly::one();
        }
        let r = pseudo_rem(&r0, &r1, v);
        if r.is_zero() {
            return primitive_part(&r1, v);
        }
        r0 = r1;
        r1 = primitive_part(&r, v);
    }
}

pub fn rat_from_i64(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> Poly {
        Poly::var(1)
    }
    fn y() -> Poly {
        Poly::var(2)
    }
    fn c(n: i64) -> Poly {
        Poly::constant(rat_from_i64(n))
    }

    #[test]
    fn gcd_of_products() {
        let f = x().add(&y()).mul(&x().sub(&c(1)));
        let g = x().add(&y()).mul(&y().add(&c(3)));
        let h = gcd(&f, &g);
        assert_eq!(h, x().add(&y()).monic());
    }

    #[test]
    fn gcd_coprime_is_one() {
        let f = x().mul(&x()).add(&c(1));
        let g = x().add(&c(1));
        assert!(gcd(&f, &g).is_one());
    }

    #[test]
    fn exact_division_roundtrip() {
        let f = x().add(&y()).pow(3);
        let g = x().add(&y());
        assert_eq!(f.div_exact(&g).unwrap(), g.pow(2));
        assert!(x().div_exact(&y()).is_none());
    }

    #[test]
    fn substitute_var() {
        let f = x().mul(&x()).add(&y());
        assert_eq!(f.substitute(1, &c(2)), y().add(&c(4)));
    }
}
