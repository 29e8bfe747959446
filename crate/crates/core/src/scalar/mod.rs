//! Exact scalars: rational functions over ℚ(i) in named parameters, extended
//! by a tower of declared square roots.
//!
//! A [`Field`] lists its variables in declaration order. Variable 0 is always
//! the imaginary unit `i`; later variables are free parameters or radicals
//! `r` with a relation `r² = f` where `f` only mentions earlier variables.
//! A [`Scalar`] is stored as `num / den` with
//!
//! * every algebraic variable (i and radicals) of degree ≤ 1 in `num`,
//! * `den` a polynomial in the free parameters only (denominators are
//!   rationalized by multiplying with conjugates),
//! * `gcd(num, den) = 1` and `den` monic in lex order.
//!
//! Under those rules the representation of an element is unique as long as the
//! declared tower really is a field extension of degree 2 at each step;
//! checking that is left to the caller, and a failure shows up as
//! [`ScalarError::NotInvertible`] when a nonzero element has zero norm.

mod parse;
pub mod poly;

use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::sync::LazyLock;
use thiserror::Error;

pub use poly::{Mono, Poly, Rat};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScalarError {
    #[error("undeclared symbol `{0}`")]
    UndeclaredSymbol(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("element is not invertible: the radical tower is inconsistent")]
    NotInvertible,
    #[error("symbol `{0}` is already declared")]
    Redeclared(String),
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

#[derive(Debug, Clone)]
enum VarKind {
    Imaginary,
    Param,
    /// `r² = num / den`; `den` only involves parameters.
    Radical { num: Poly, den: Poly },
}

#[derive(Debug, Clone)]
struct VarDef {
    name: String,
    kind: VarKind,
}

static NEXT_FIELD_ID: AtomicU64 = AtomicU64::new(1);

/// A field tower: ℚ(i) adjoined with parameters and radicals, in order.
#[derive(Debug)]
pub struct Field {
    id: u64,
    /// Ids of this field and every field it extends.
    lineage: Vec<u64>,
    vars: Vec<VarDef>,
}

static BASE: LazyLock<Arc<Field>> = LazyLock::new(|| {
    let id = NEXT_FIELD_ID.fetch_add(1, Ordering::Relaxed);
    Arc::new(Field {
        id,
        lineage: vec![id],
        vars: vec![VarDef { name: "i".into(), kind: VarKind::Imaginary }],
    })
});

impl Field {
    /// ℚ(i).
    pub fn base() -> Arc<Field> {
        BASE.clone()
    }

    /// Convenience constructor: ℚ(i) with the given free parameters.
    pub fn with_params(names: &[&str]) -> Arc<Field> {
        let mut f = Field::base();
        for n in names {
            f = f.add_param(n).expect("distinct parameter names");
        }
        f
    }

    fn extend(self: &Arc<Self>, def: VarDef) -> Result<Arc<Field>, ScalarError> {
        if self.index_of(&def.name).is_some() {
            return Err(ScalarError::Redeclared(def.name));
        }
        let id = NEXT_FIELD_ID.fetch_add(1, Ordering::Relaxed);
        let mut lineage = self.lineage.clone();
        lineage.push(id);
        let mut vars = self.vars.clone();
        vars.push(def);
        Ok(Arc::new(Field { id, lineage, vars }))
    }

    pub fn add_param(self: &Arc<Self>, name: &str) -> Result<Arc<Field>, ScalarError> {
        self.extend(VarDef { name: name.to_string(), kind: VarKind::Param })
    }

    /// Adjoin `name` with `name² = square`. `square` must live in this field.
    pub fn add_radical(self: &Arc<Self>, name: &str, square: &Scalar) -> Result<Arc<Field>, ScalarError> {
        if square.is_zero() {
            return Err(ScalarError::NotInvertible);
        }
        self.extend(VarDef {
            name: name.to_string(),
            kind: VarKind::Radical { num: square.num.clone(), den: square.den.clone() },
        })
    }

    /// Adjoin `name = √(expr)` with `expr` parsed in this field.
    pub fn add_radical_expr(self: &Arc<Self>, name: &str, expr: &str) -> Result<Arc<Field>, ScalarError> {
        let sq = Scalar::parse(expr, self)?;
        self.add_radical(name, &sq)
    }

    /// Return a field containing a radical `name` with the given square,
    /// reusing an existing declaration of that name if its square matches.
    pub fn ensure_radical(self: &Arc<Self>, name: &str, square: &Scalar) -> Result<Arc<Field>, ScalarError> {
        if let Some(v) = self.index_of(name) {
            if let VarKind::Radical { num, den } = &self.vars[v].kind {
                if *num == square.num && *den == square.den {
                    return Ok(self.clone());
                }
            }
            return Err(ScalarError::Redeclared(name.to_string()));
        }
        self.add_radical(name, square)
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v.name == name)
    }

    pub fn var_name(&self, v: usize) -> &str {
        &self.vars[v].name
    }

    pub fn num_vars(&self) -> usize {
        self.vars.len()
    }

    pub fn is_param(&self, v: usize) -> bool {
        matches!(self.vars[v].kind, VarKind::Param)
    }

    pub fn param_names(&self) -> Vec<String> {
        self.vars.iter().filter(|v| matches!(v.kind, VarKind::Param)).map(|v| v.name.clone()).collect()
    }

    /// The scalar given by a declared symbol (or `i`).
    pub fn symbol(self: &Arc<Self>, name: &str) -> Result<Scalar, ScalarError> {
        let v = self.index_of(name).ok_or_else(|| ScalarError::UndeclaredSymbol(name.to_string()))?;
        Ok(Scalar { num: Poly::var(v), den: Poly::one(), field: self.clone() })
    }

    /// Shorthand for [`Field::symbol`] that panics on an unknown name.
    pub fn sym(self: &Arc<Self>, name: &str) -> Scalar {
        self.symbol(name).unwrap_or_else(|e| panic!("{e}"))
    }

    pub fn parse(self: &Arc<Self>, expr: &str) -> Result<Scalar, ScalarError> {
        Scalar::parse(expr, self)
    }

    pub fn extends(&self, other: &Field) -> bool {
        self.lineage.contains(&other.id)
    }

    fn algebraic(&self) -> impl Iterator<Item = (usize, Poly, Poly)> + '_ {
        self.vars.iter().enumerate().rev().filter_map(|(v, d)| match &d.kind {
            VarKind::Imaginary => Some((v, Poly::constant(-Rat::one()), Poly::one())),
            VarKind::Radical { num, den } => Some((v, num.clone(), den.clone())),
            VarKind::Param => None,
        })
    }
}

fn join(a: &Arc<Field>, b: &Arc<Field>) -> Arc<Field> {
    if Arc::ptr_eq(a, b) || a.extends(b) {
        a.clone()
    } else if b.extends(a) {
        b.clone()
    } else {
        panic!("scalars from unrelated fields cannot be combined");
    }
}

/// Apply the radical relations so every algebraic variable has degree ≤ 1.
/// Returns `(p', m)` with `p = p' / m` and `m` free of algebraic variables.
fn reduce(p: &Poly, field: &Field) -> (Poly, Poly) {
    let mut cur = p.clone();
    let mut mult = Poly::one();
    for (v, rn, rd) in field.algebraic() {
        let d = cur.degree_in(v);
        if d < 2 {
            continue;
        }
        let coeffs = cur.coeffs_in(v);
        let top = d as u32 / 2;
        let mut out = Poly::zero();
        for (e, c) in coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let h = e as u32 / 2;
            let mut t = c.clone();
            if e % 2 == 1 {
                t = t.mul(&Poly::var(v));
            }
            if h > 0 {
                t = t.mul(&rn.pow(h));
            }
            if top > h && !rd.is_one() {
                t = t.mul(&rd.pow(top - h));
            }
            out.add_assign(&t);
        }
        if !rd.is_one() {
            mult = mult.mul(&rd.pow(top));
        }
        cur = out;
    }
    (cur, mult)
}

/// Exact element of a [`Field`].
#[derive(Clone)]
pub struct Scalar {
    num: Poly,
    den: Poly,
    field: Arc<Field>,
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        self.num == other.num && self.den == other.den
    }
}
impl Eq for Scalar {}

impl Hash for Scalar {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.num.hash(state);
        self.den.hash(state);
    }
}

impl Scalar {
    fn from_parts(num: Poly, den: Poly, field: Arc<Field>) -> Scalar {
        debug_assert!(!den.is_zero());
        if num.is_zero() {
            return Scalar { num, den: Poly::one(), field };
        }
        if let Some(c) = den.constant_value() {
            if c.is_one() {
                return Scalar { num, den, field };
            }
            return Scalar { num: num.scale(&c.recip()), den: Poly::one(), field };
        }
        let g = poly::gcd(&num, &den);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (num.div_exact(&g).expect("gcd divides"), den.div_exact(&g).expect("gcd divides"))
        };
        let lc = den.lc();
        if lc.is_one() {
            Scalar { num, den, field }
        } else {
            let inv = lc.recip();
            Scalar { num: num.scale(&inv), den: den.scale(&inv), field }
        }
    }

    /// Normalize a raw `num / den` where both may contain algebraic
    /// variables of any degree.
    fn from_raw(num: Poly, den: Poly, field: Arc<Field>) -> Result<Scalar, ScalarError> {
        let (num, mn) = reduce(&num, &field);
        let (den, md) = reduce(&den, &field);
        if den.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        let mut num = num.mul(&md);
        let mut den = den.mul(&mn);
        // Rationalize: clear algebraic variables from the denominator.
        for (v, _, _) in field.algebraic().collect::<Vec<_>>() {
            if !den.contains_var(v) {
                continue;
            }
            let cs = den.coeffs_in(v);
            let conj = cs[0].sub(&cs[1].mul(&Poly::var(v)));
            let (n2, m1) = reduce(&num.mul(&conj), &field);
            let (d2, m2) = reduce(&den.mul(&conj), &field);
            if d2.is_zero() {
                return Err(ScalarError::NotInvertible);
            }
            num = n2.mul(&m2);
            den = d2.mul(&m1);
        }
        if den.is_zero() {
            return Err(ScalarError::NotInvertible);
        }
        Ok(Scalar::from_parts(num, den, field))
    }

    pub fn zero() -> Scalar {
        Scalar { num: Poly::zero(), den: Poly::one(), field: Field::base() }
    }

    pub fn one() -> Scalar {
        Scalar::int(1)
    }

    pub fn int(n: i64) -> Scalar {
        Scalar { num: Poly::constant(poly::rat_from_i64(n)), den: Poly::one(), field: Field::base() }
    }

    pub fn rational(n: i64, d: i64) -> Scalar {
        assert!(d != 0, "zero denominator");
        Scalar::from_rat(Rat::new(BigInt::from(n), BigInt::from(d)))
    }

    pub fn from_rat(r: Rat) -> Scalar {
        Scalar { num: Poly::constant(r), den: Poly::one(), field: Field::base() }
    }

    /// The imaginary unit.
    pub fn i() -> Scalar {
        Scalar { num: Poly::var(0), den: Poly::one(), field: Field::base() }
    }

    pub fn parse(expr: &str, field: &Arc<Field>) -> Result<Scalar, ScalarError> {
        parse::parse(expr, field)
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    /// Reinterpret in an extension field.
    pub fn lift(&self, field: &Arc<Field>) -> Scalar {
        Scalar { num: self.num.clone(), den: self.den.clone(), field: join(&self.field, field) }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn numerator(&self) -> &Poly {
        &self.num
    }

    pub fn denominator(&self) -> &Poly {
        &self.den
    }

    /// Value as a rational number, if the scalar has no variables.
    pub fn to_rational(&self) -> Option<Rat> {
        let n = self.num.constant_value()?;
        let d = self.den.constant_value()?;
        Some(n / d)
    }

    /// True when no parameter, radical or `i` occurs.
    pub fn is_rational(&self) -> bool {
        self.to_rational().is_some()
    }

    /// Gaussian rational `(re, im)`, if the scalar involves only `i`.
    pub fn to_gaussian(&self) -> Option<(Rat, Rat)> {
        if !self.den.is_constant() || self.num.terms.keys().any(|m| m.0.len() > 1) {
            return None;
        }
        let d = self.den.constant_value()?;
        let re = self.num.terms.get(&Mono::one()).cloned().unwrap_or_else(Rat::zero) / &d;
        let im = self.num.terms.get(&Mono::var(0, 1)).cloned().unwrap_or_else(Rat::zero) / &d;
        Some((re, im))
    }

    pub fn neg(&self) -> Scalar {
        Scalar { num: self.num.neg(), den: self.den.clone(), field: self.field.clone() }
    }

    pub fn add(&self, o: &Scalar) -> Scalar {
        if o.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return o.clone();
        }
        let field = join(&self.field, &o.field);
        if self.den == o.den {
            let num = self.num.add(&o.num);
            if self.den.is_one() {
                return Scalar::from_parts(num, Poly::one(), field);
            }
            return Scalar::from_parts(num, self.den.clone(), field);
        }
        let num = self.num.mul(&o.den).add(&o.num.mul(&self.den));
        Scalar::from_parts(num, self.den.mul(&o.den), field)
    }

    pub fn sub(&self, o: &Scalar) -> Scalar {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Scalar) -> Scalar {
        if self.is_zero() || o.is_zero() {
            return Scalar::zero();
        }
        let field = join(&self.field, &o.field);
        if let Some(c) = o.num.constant_value().filter(|_| o.den.is_one()) {
            return Scalar { num: self.num.scale(&c), den: self.den.clone(), field };
        }
        if let Some(c) = self.num.constant_value().filter(|_| self.den.is_one()) {
            return Scalar { num: o.num.scale(&c), den: o.den.clone(), field };
        }
        let (num, m) = reduce(&self.num.mul(&o.num), &field);
        let den = self.den.mul(&o.den).mul(&m);
        Scalar::from_parts(num, den, field)
    }

    pub fn inv(&self) -> Result<Scalar, ScalarError> {
        if self.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        Scalar::from_raw(self.den.clone(), self.num.clone(), self.field.clone())
    }

    pub fn checked_div(&self, o: &Scalar) -> Result<Scalar, ScalarError> {
        Ok(self.mul(&o.inv()?))
    }

    pub fn pow(&self, e: i32) -> Result<Scalar, ScalarError> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut acc = Scalar::one();
        for _ in 0..e.unsigned_abs() {
            acc = acc.mul(&base);
        }
        Ok(acc)
    }

    /// Complex conjugation `i ↦ −i`; parameters and radicals are fixed.
    pub fn conj(&self) -> Scalar {
        let mut num = self.num.clone();
        for (m, c) in num.terms.iter_mut() {
            if m.exp(0) % 2 == 1 {
                *c = -c.clone();
            }
        }
        Scalar { num, den: self.den.clone(), field: self.field.clone() }
    }

    /// Replace the symbol `name` by `value`.
    pub fn substitute(&self, name: &str, value: &Scalar) -> Result<Scalar, ScalarError> {
        let field = join(&self.field, &value.field);
        let v = field.index_of(name).ok_or_else(|| ScalarError::UndeclaredSymbol(name.to_string()))?;
        if !self.num.contains_var(v) && !self.den.contains_var(v) {
            return Ok(self.clone());
        }
        let eval = |p: &Poly| -> Scalar {
            let mut acc = Scalar::zero();
            for c in p.coeffs_in(v).iter().rev() {
                acc = acc.mul(value).add(&Scalar { num: c.clone(), den: Poly::one(), field: field.clone() });
            }
            acc
        };
        let n = eval(&self.num);
        let d = eval(&self.den);
        if d.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        n.checked_div(&d)
    }

    /// Whether the symbol `name` occurs.
    pub fn mentions(&self, name: &str) -> bool {
        match self.field.index_of(name) {
            Some(v) => self.num.contains_var(v) || self.den.contains_var(v),
            None => false,
        }
    }

    fn poly_str(&self, p: &Poly) -> String {
        let f = self.field.clone();
        p.to_string_with(&move |v| f.var_name(v).to_string())
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.poly_str(&self.num);
        if self.den.is_one() {
            return f.write_str(&n);
        }
        let d = self.poly_str(&self.den);
        let n = if self.num.terms.len() > 1 { format!("({n})") } else { n };
        let d = if self.den.terms.len() > 1 || self.den.terms.keys().next().is_some_and(|m| m.degree() > 1) || !self.den.lc().is_one() {
            format!("({d})")
        } else {
            d
        };
        write!(f, "{n}/{d}")
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Default for Scalar {
    fn default() -> Self {
        Scalar::zero()
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::int(n)
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $body:expr) => {
        impl $tr<&Scalar> for &Scalar {
            type Output = Scalar;
            fn $m(self, o: &Scalar) -> Scalar {
                $body(self, o)
            }
        }
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, o: Scalar) -> Scalar {
                $body(&self, &o)
            }
        }
        impl $tr<&Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, o: &Scalar) -> Scalar {
                $body(&self, o)
            }
        }
        impl $tr<Scalar> for &Scalar {
            type Output = Scalar;
            fn $m(self, o: Scalar) -> Scalar {
                $body(self, &o)
            }
        }
    };
}

binop!(Add, add, |a: &Scalar, b: &Scalar| a.add(b));
binop!(Sub, sub, |a: &Scalar, b: &Scalar| a.sub(b));
binop!(Mul, mul, |a: &Scalar, b: &Scalar| a.mul(b));
// Division panics on a zero divisor, like integer division.
binop!(Div, div, |a: &Scalar, b: &Scalar| a.checked_div(b).expect("division by zero scalar"));

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar::neg(&self)
    }
}
impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar::neg(self)
    }
}

/// Is the leading coefficient of a rational scalar positive? `None` if symbolic.
pub fn rational_sign(s: &Scalar) -> Option<i32> {
    let r = s.to_rational()?;
    Some(if r.is_zero() { 0 } else if r.is_positive() { 1 } else { -1 })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fxa() -> Arc<Field> {
        let f = Field::with_params(&["x", "a", "l"]);
        let sq = f.parse("x/a").unwrap();
        f.add_radical("r", &sq).unwrap()
    }

    #[test]
    fn i_squared() {
        assert_eq!(Scalar::i() * Scalar::i(), Scalar::int(-1));
    }

    #[test]
    fn radical_relation() {
        let f = fxa();
        let r = f.sym("r");
        assert_eq!(&r * &r, f.parse("x/a").unwrap());
    }

    #[test]
    fn commutativity_cancels() {
        let f = fxa();
        assert!(f.parse("(x*a - a*x)/l").unwrap().is_zero());
    }

    #[test]
    fn inverses() {
        assert_eq!(Scalar::int(2).inv().unwrap(), Scalar::rational(1, 2));
        let f = fxa();
        assert_eq!(f.parse("x/a").unwrap().inv().unwrap(), f.parse("a/x").unwrap());
        let z = Scalar::one() + Scalar::i();
        let w = z.inv().unwrap();
        assert_eq!(w, (Scalar::one() - Scalar::i()) * Scalar::rational(1, 2));
        assert!((&w * &z).is_one());
    }

    #[test]
    fn radical_inverse() {
        let f = fxa();
        let z = f.parse("1 + r + i*x").unwrap();
        assert!((&z * &z.inv().unwrap()).is_one());
        assert!(!z.inv().unwrap().denominator().contains_var(f.index_of("r").unwrap()));
    }

    #[test]
    fn zero_division_reported() {
        let f = fxa();
        assert_eq!(f.parse("1/(x - x)"), Err(ScalarError::DivisionByZero));
        assert!(matches!(f.parse("y"), Err(ScalarError::UndeclaredSymbol(_))));
    }

    #[test]
    fn inconsistent_tower_detected() {
        let f = Field::base().add_radical("s", &Scalar::int(4)).unwrap();
        let z = f.parse("s - 2").unwrap();
        assert!(!z.is_zero());
        assert_eq!(z.inv(), Err(ScalarError::NotInvertible));
    }

    #[test]
    fn normal_form_cancels_common_factor() {
        let f = Field::with_params(&["x", "y"]);
        let a = f.parse("(x^2 - y^2)/(x + y)").unwrap();
        assert_eq!(a, f.parse("x - y").unwrap());
        assert!(a.denominator().is_one());
    }

    #[test]
    fn substitute_param() {
        let f = Field::with_params(&["x", "l"]);
        let a = f.parse("1/(l*x) + x").unwrap();
        let b = a.substitute("x", &f.parse("1/l").unwrap()).unwrap();
        assert_eq!(b, f.parse("1 + 1/l").unwrap());
    }

    #[test]
    fn conj_flips_i() {
        let f = fxa();
        let a = f.parse("x + i*r").unwrap();
        assert_eq!(a.conj(), f.parse("x - i*r").unwrap());
    }

    #[test]
    fn display_is_readable() {
        let f = Field::with_params(&["x", "a"]);
        assert_eq!(f.parse("a/x").unwrap().to_string(), "a/x");
        assert_eq!(f.parse("-1/2").unwrap().to_string(), "-1/2");
    }
}
