//! Generalized metrics, generalized connections and their torsion, divergences
//! and the canonical torsion-free connection with prescribed divergence.

use std::sync::Arc;

use rand::Rng;
use thiserror::Error;

use crate::linalg::{Matrix, Vector};
use crate::qla::{QuadraticLieAlgebra, Subspace};
use crate::scalar::{rational_sign, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeometryError {
    #[error("pairing restricted to the subspace is degenerate")]
    Degenerate,
    #[error("connection is not compatible with the pairing: {0}")]
    NotCompatible(String),
    #[error("a factor has dimension 1, the divergence term is singular")]
    RankOne,
    #[error("arguments do not lie in a single factor")]
    MixedFactors,
    #[error("tensor is not in Σ: {0}")]
    NotInSigma(String),
    #[error("not an orthogonal almost complex structure on the factor: {0}")]
    NotAlmostComplex(String),
}

/// One of the two factors of a generalized metric.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Plus,
    Minus,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::Plus => Side::Minus,
            Side::Minus => Side::Plus,
        }
    }
}

/// An orthogonal decomposition `g = V₊ ⊕ V₋` with nondegenerate factors.
#[derive(Clone, Debug)]
pub struct GeneralizedMetric {
    alg: Arc<QuadraticLieAlgebra>,
    plus: Subspace,
    minus: Subspace,
    pi_plus: Matrix,
    pi_minus: Matrix,
}

impl GeneralizedMetric {
    /// `V₊` is spanned by `plus`; `V₋` is its orthogonal complement.
    pub fn new(alg: Arc<QuadraticLieAlgebra>, plus: &[Vector]) -> Result<GeneralizedMetric, GeometryError> {
        let plus = alg.subspace(plus);
        let minus = alg.perp(&plus);
        if alg.gram_of(plus.basis()).inverse().is_none() || alg.gram_of(minus.basis()).inverse().is_none() {
            return Err(GeometryError::Degenerate);
        }
        let n = alg.dim();
        let dual = alg.dual_basis(plus.basis()).ok_or(GeometryError::Degenerate)?;
        // π₊(v) = Σ ⟨v, e^i⟩ e_i.
        let mut pi_plus = Matrix::zero(n, n);
        for j in 0..n {
            let ej = alg.basis(j);
            let mut img = Vector::zero(n);
            for (b, d) in plus.basis().iter().zip(&dual) {
                img.axpy(&alg.pair(&ej, d), b);
            }
            for r in 0..n {
                pi_plus[(r, j)] = img[r].clone();
            }
        }
        let pi_minus = Matrix::identity(n).sub(&pi_plus);
        Ok(GeneralizedMetric { alg, plus, minus, pi_plus, pi_minus })
    }

    pub fn algebra(&self) -> &Arc<QuadraticLieAlgebra> {
        &self.alg
    }

    pub fn factor(&self, side: Side) -> &Subspace {
        match side {
            Side::Plus => &self.plus,
            Side::Minus => &self.minus,
        }
    }

    pub fn plus(&self) -> &Subspace {
        &self.plus
    }

    pub fn minus(&self) -> &Subspace {
        &self.minus
    }

    pub fn projector(&self, side: Side) -> &Matrix {
        match side {
            Side::Plus => &self.pi_plus,
            Side::Minus => &self.pi_minus,
        }
    }

    pub fn project(&self, side: Side, v: &Vector) -> Vector {
        self.projector(side).apply(v)
    }

    pub fn dim(&self, side: Side) -> usize {
        self.factor(side).dim()
    }

    /// A basis `{e_i}` of a factor together with its metric dual `{e^i}`.
    pub fn frame(&self, side: Side) -> (Vec<Vector>, Vec<Vector>) {
        let basis = self.factor(side).basis().to_vec();
        let dual = self.alg.dual_basis(&basis).expect("factor is nondegenerate");
        (basis, dual)
    }

    /// Which factor a nonzero vector lies in, if any.
    pub fn side_of(&self, v: &Vector) -> Option<Side> {
        if self.project(Side::Minus, v).is_zero() {
            Some(Side::Plus)
        } else if self.project(Side::Plus, v).is_zero() {
            Some(Side::Minus)
        } else {
            None
        }
    }

    /// The endomorphism of `g` sending `domain[i] ↦ image[i]` on a basis of
    /// the factor and vanishing on the other factor.
    pub fn endomorphism(&self, side: Side, domain: &[Vector], image: &[Vector]) -> Option<Matrix> {
        let other = self.factor(side.other()).basis();
        if domain.len() + other.len() != self.alg.dim() || domain.len() != image.len() {
            return None;
        }
        let mut src: Vec<Vector> = domain.to_vec();
        src.extend(other.iter().cloned());
        let mut dst: Vec<Vector> = image.to_vec();
        dst.extend(other.iter().map(|v| Vector::zero(v.len())));
        let inv = Matrix::from_cols(&src).inverse()?;
        Some(Matrix::from_cols(&dst).mul(&inv))
    }

    /// For an orthogonal almost complex structure `J` on a factor, the
    /// `±i`-eigenspaces `(V^{1,0}, V^{0,1})` inside the complexified factor.
    pub fn eigenspaces(&self, side: Side, j: &Matrix) -> Result<(Subspace, Subspace), GeometryError> {
        let alg = &self.alg;
        let basis = self.factor(side).basis();
        let images: Vec<Vector> = basis.iter().map(|b| j.apply(b)).collect();
        for (b, jb) in basis.iter().zip(&images) {
            if !self.factor(side).contains(jb) {
                return Err(GeometryError::NotAlmostComplex("J does not preserve the factor".into()));
            }
            if j.apply(jb) != -b {
                return Err(GeometryError::NotAlmostComplex("J² ≠ −1".into()));
            }
        }
        for (a, ja) in basis.iter().zip(&images) {
            for (b, jb) in basis.iter().zip(&images) {
                if alg.pair(ja, jb) != alg.pair(a, b) {
                    return Err(GeometryError::NotAlmostComplex("J is not an isometry".into()));
                }
            }
        }
        let i = Scalar::i();
        let hol: Vec<Vector> = basis.iter().zip(&images).map(|(b, jb)| b - &jb.scale(&i)).collect();
        let anti: Vec<Vector> = basis.iter().zip(&images).map(|(b, jb)| b + &jb.scale(&i)).collect();
        Ok((alg.subspace(&hol), alg.subspace(&anti)))
    }

    /// Whether `V₊` is positive and `V₋` negative definite. Decided by the
    /// signs of leading principal minors, which is only possible for purely
    /// rational Gram data; `None` otherwise.
    pub fn is_riemannian(&self) -> Option<bool> {
        let pos = definite_sign(&self.alg.gram_of(self.plus.basis()), 1)?;
        let neg = definite_sign(&self.alg.gram_of(self.minus.basis()), -1)?;
        Some(pos && neg)
    }
}

/// Is `g` definite with sign `sign`? Uses Sylvester's criterion.
fn definite_sign(g: &Matrix, sign: i32) -> Option<bool> {
    let n = g.rows;
    for k in 1..=n {
        let mut m = Matrix::zero(k, k);
        for r in 0..k {
            for c in 0..k {
                m[(r, c)] = g[(r, c)].clone();
            }
        }
        let s = rational_sign(&m.determinant())?;
        let want = if sign > 0 || k % 2 == 0 { 1 } else { -1 };
        if s != want {
            return Some(false);
        }
    }
    Some(true)
}

/// A trilinear form on the algebra, stored densely on basis triples.
#[derive(Clone, PartialEq, Eq)]
pub struct Tensor3 {
    n: usize,
    data: Vec<Scalar>,
}

impl std::fmt::Debug for Tensor3 {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Tensor3[")?;
        for i in 0..self.n {
            for j in 0..self.n {
                for k in 0..self.n {
                    let c = self.get(i, j, k);
                    if !c.is_zero() {
                        write!(f, " ({i},{j},{k}):{c}")?;
                    }
                }
            }
        }
        write!(f, " ]")
    }
}

impl Tensor3 {
    pub fn zero(n: usize) -> Tensor3 {
        Tensor3 { n, data: vec![Scalar::zero(); n * n * n] }
    }

    /// Tabulate `f` on basis triples.
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize, usize) -> Scalar) -> Tensor3 {
        let mut t = Tensor3::zero(n);
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    t.data[(i * n + j) * n + k] = f(i, j, k);
                }
            }
        }
        t
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> &Scalar {
        &self.data[(i * self.n + j) * self.n + k]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn add(&self, o: &Tensor3) -> Tensor3 {
        Tensor3 { n: self.n, data: self.data.iter().zip(&o.data).map(|(a, b)| a + b).collect() }
    }

    pub fn sub(&self, o: &Tensor3) -> Tensor3 {
        Tensor3 { n: self.n, data: self.data.iter().zip(&o.data).map(|(a, b)| a - b).collect() }
    }

    pub fn scale(&self, c: &Scalar) -> Tensor3 {
        Tensor3 { n: self.n, data: self.data.iter().map(|a| a * c).collect() }
    }

    /// Value on arbitrary vectors, by multilinearity.
    pub fn eval(&self, a: &Vector, b: &Vector, c: &Vector) -> Scalar {
        let mut acc = Scalar::zero();
        for (i, ai) in a.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
            for (j, bj) in b.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
                let ab = ai * bj;
                for (k, ck) in c.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
                    let t = self.get(i, j, k);
                    if !t.is_zero() {
                        acc = acc + &ab * &(ck * t);
                    }
                }
            }
        }
        acc
    }

    /// The covector `φ(a, b, ·)` on basis vectors.
    pub fn contract12(&self, a: &Vector, b: &Vector) -> Vector {
        Vector((0..self.n).map(|k| self.eval(a, b, &Vector::basis(self.n, k))).collect())
    }

    pub fn is_totally_skew(&self) -> bool {
        let n = self.n;
        (0..n).all(|i| {
            (0..n).all(|j| {
                (0..n).all(|k| {
                    let t = self.get(i, j, k);
                    *t == -self.get(j, i, k) && *t == -self.get(i, k, j)
                })
            })
        })
    }

    /// Pull back along a linear map: `(a, b, c) ↦ φ(Pa, Pb, Pc)`.
    pub fn pullback(&self, p: &Matrix) -> Tensor3 {
        let cols: Vec<Vector> = (0..self.n).map(|j| p.col(j)).collect();
        Tensor3::from_fn(self.n, |i, j, k| self.eval(&cols[i], &cols[j], &cols[k]))
    }
}

/// A generalized connection, stored as one matrix `D_{e_i}` per basis vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Connection {
    ops: Vec<Matrix>,
}

impl Connection {
    pub fn zero(n: usize) -> Connection {
        Connection { ops: vec![Matrix::zero(n, n); n] }
    }

    pub fn from_ops(ops: Vec<Matrix>) -> Connection {
        Connection { ops }
    }

    /// Tabulate `(a, b) ↦ D_a b` on basis vectors.
    pub fn from_fn(n: usize, f: impl Fn(&Vector, &Vector) -> Vector) -> Connection {
        let ops = (0..n)
            .map(|i| {
                let a = Vector::basis(n, i);
                let cols: Vec<Vector> = (0..n).map(|j| f(&a, &Vector::basis(n, j))).collect();
                Matrix::from_cols(&cols)
            })
            .collect();
        Connection { ops }
    }

    /// The connection `⟨D_a b, c⟩ = φ(a, b, c)`.
    pub fn from_tensor(alg: &QuadraticLieAlgebra, phi: &Tensor3) -> Connection {
        Connection::from_fn(alg.dim(), |a, b| alg.raise(&phi.contract12(a, b)))
    }

    pub fn ops(&self) -> &[Matrix] {
        &self.ops
    }

    pub fn dim(&self) -> usize {
        self.ops.len()
    }

    /// `D_a b`.
    pub fn apply(&self, a: &Vector, b: &Vector) -> Vector {
        let n = self.dim();
        let mut out = Vector::zero(n);
        for (i, ai) in a.iter().enumerate() {
            if !ai.is_zero() {
                out.axpy(ai, &self.ops[i].apply(b));
            }
        }
        out
    }

    pub fn add(&self, o: &Connection) -> Connection {
        Connection { ops: self.ops.iter().zip(&o.ops).map(|(a, b)| a.add(b)).collect() }
    }

    pub fn sub(&self, o: &Connection) -> Connection {
        Connection { ops: self.ops.iter().zip(&o.ops).map(|(a, b)| a.sub(b)).collect() }
    }

    /// The trilinear form `⟨D_a b, c⟩`.
    pub fn tensor(&self, alg: &QuadraticLieAlgebra) -> Tensor3 {
        let n = self.dim();
        let g = alg.gram();
        Tensor3::from_fn(n, |i, j, k| {
            let col = self.ops[i].col(j);
            let mut acc = Scalar::zero();
            for (r, v) in col.iter().enumerate() {
                if !v.is_zero() {
                    acc = acc + v * &g[(r, k)];
                }
            }
            acc
        })
    }

    /// First basis triple violating `⟨D_a b, c⟩ + ⟨b, D_a c⟩ = 0`, if any.
    fn compatibility_defect(&self, alg: &QuadraticLieAlgebra) -> Option<(usize, usize, usize)> {
        let t = self.tensor(alg);
        let n = self.dim();
        for i in 0..n {
            for j in 0..n {
                for k in j..n {
                    if !(t.get(i, j, k) + t.get(i, k, j)).is_zero() {
                        return Some((i, j, k));
                    }
                }
            }
        }
        None
    }

    pub fn is_compatible(&self, alg: &QuadraticLieAlgebra) -> bool {
        self.compatibility_defect(alg).is_none()
    }

    /// Whether `D` is compatible and preserves both factors of `M`.
    pub fn is_metric_compatible(&self, m: &GeneralizedMetric) -> bool {
        if !self.is_compatible(m.algebra()) {
            return false;
        }
        let n = self.dim();
        (0..n).all(|i| {
            [Side::Plus, Side::Minus].iter().all(|&s| {
                m.factor(s).basis().iter().all(|b| m.factor(s).contains(&self.ops[i].apply(b)))
            })
        })
    }

    /// The covector `tr D : a ↦ tr(b ↦ D_b a)`, as components on the basis.
    pub fn trace(&self, alg: &QuadraticLieAlgebra) -> Vector {
        let n = self.dim();
        let dual: Vec<Vector> = (0..n).map(|i| alg.gram_inv().col(i)).collect();
        Vector(
            (0..n)
                .map(|k| {
                    let mut acc = Scalar::zero();
                    for (i, d) in dual.iter().enumerate() {
                        acc = acc + alg.pair(&self.ops[i].col(k), d);
                    }
                    acc
                })
                .collect(),
        )
    }

    /// The divergence `α_D = −tr D`, identified with a vector through the
    /// pairing.
    pub fn divergence(&self, alg: &QuadraticLieAlgebra) -> Vector {
        alg.raise(&-&self.trace(alg))
    }
}

/// Torsion `T_D(a,b,c) = ⟨D_a b − D_b a − [a,b], c⟩ + ⟨D_c a, b⟩`.
pub fn torsion(alg: &QuadraticLieAlgebra, d: &Connection) -> Result<Tensor3, GeometryError> {
    if let Some((i, j, k)) = d.compatibility_defect(alg) {
        let names = alg.names();
        return Err(GeometryError::NotCompatible(format!(
            "⟨D_{0} {1}, {2}⟩ + ⟨{1}, D_{0} {2}⟩ ≠ 0",
            names[i], names[j], names[k]
        )));
    }
    let n = alg.dim();
    let dt = d.tensor(alg);
    let brackets: Vec<Vec<Vector>> =
        (0..n).map(|i| (0..n).map(|j| alg.bracket(&alg.basis(i), &alg.basis(j))).collect()).collect();
    let t = Tensor3::from_fn(n, |i, j, k| {
        dt.get(i, j, k) - dt.get(j, i, k) + dt.get(k, i, j) - alg.pair(&brackets[i][j], &alg.basis(k))
    });
    assert!(t.is_totally_skew(), "torsion of a compatible connection is totally skew");
    Ok(t)
}

/// The Weyl term `φ^ε_a b = ⟨a,b⟩ε − ⟨ε,b⟩a`, defined when `ε, a, b` lie in
/// one factor of `M`.
pub fn weyl_term(m: &GeneralizedMetric, eps: &Vector, a: &Vector, b: &Vector) -> Result<Vector, GeometryError> {
    let nonzero: Vec<&Vector> = [eps, a, b].into_iter().filter(|v| !v.is_zero()).collect();
    let side = match nonzero.first() {
        None => return Ok(Vector::zero(a.len())),
        Some(v) => m.side_of(v).ok_or(GeometryError::MixedFactors)?,
    };
    if nonzero.iter().any(|v| m.side_of(v) != Some(side)) {
        return Err(GeometryError::MixedFactors);
    }
    Ok(raw_weyl(m.algebra(), eps, a, b))
}

fn raw_weyl(alg: &QuadraticLieAlgebra, eps: &Vector, a: &Vector, b: &Vector) -> Vector {
    &eps.scale(&alg.pair(a, b)) - &a.scale(&alg.pair(eps, b))
}

/// The tensor `(a,b,c) ↦ ⟨φ^{ε_s}_{a_s} b_s, c_s⟩` on the factor `side`, where
/// `ε_s` is the projection of `eps`.
pub fn weyl_tensor(m: &GeneralizedMetric, side: Side, eps: &Vector) -> Tensor3 {
    let alg = m.algebra();
    let n = alg.dim();
    let e = m.project(side, eps);
    let proj: Vec<Vector> = (0..n).map(|i| m.project(side, &alg.basis(i))).collect();
    Tensor3::from_fn(n, |i, j, k| {
        let w = raw_weyl(alg, &e, &proj[i], &proj[j]);
        alg.pair(&w, &proj[k])
    })
}

/// The pure-type connection `D̃_a b = [a₋,b₊]₊ + [a₊,b₋]₋`.
pub fn pure_type_connection(m: &GeneralizedMetric) -> Connection {
    let alg = m.algebra();
    Connection::from_fn(alg.dim(), |a, b| {
        let (ap, am) = (m.project(Side::Plus, a), m.project(Side::Minus, a));
        let (bp, bm) = (m.project(Side::Plus, b), m.project(Side::Minus, b));
        &m.project(Side::Plus, &alg.bracket(&am, &bp)) + &m.project(Side::Minus, &alg.bracket(&ap, &bm))
    })
}

/// The torsion-free `V₊`-compatible connection with `tr D = −⟨ε,·⟩`:
///
/// ```text
/// D_a b = [a₋,b₊]₊ + [a₊,b₋]₋ + ⅓[a₊,b₊]₊ + ⅓[a₋,b₋]₋
///       + φ^{ε₊}_{a₊}b₊ / (dim V₊ − 1) + φ^{ε₋}_{a₋}b₋ / (dim V₋ − 1)
/// ```
pub fn canonical_connection(m: &GeneralizedMetric, eps: &Vector) -> Result<Connection, GeometryError> {
    let (dp, dm) = (m.dim(Side::Plus), m.dim(Side::Minus));
    if dp == 1 || dm == 1 {
        return Err(GeometryError::RankOne);
    }
    let alg = m.algebra();
    let third = Scalar::rational(1, 3);
    let weights = [
        (Side::Plus, weight(dp)),
        (Side::Minus, weight(dm)),
    ];
    let eps_parts: Vec<Vector> = weights.iter().map(|(s, _)| m.project(*s, eps)).collect();
    Ok(Connection::from_fn(alg.dim(), |a, b| {
        let (ap, am) = (m.project(Side::Plus, a), m.project(Side::Minus, a));
        let (bp, bm) = (m.project(Side::Plus, b), m.project(Side::Minus, b));
        let mut out = &m.project(Side::Plus, &alg.bracket(&am, &bp)) + &m.project(Side::Minus, &alg.bracket(&ap, &bm));
        out.axpy(&third, &m.project(Side::Plus, &alg.bracket(&ap, &bp)));
        out.axpy(&third, &m.project(Side::Minus, &alg.bracket(&am, &bm)));
        for ((s, w), e) in weights.iter().zip(&eps_parts) {
            let (x, y) = match s {
                Side::Plus => (&ap, &bp),
                Side::Minus => (&am, &bm),
            };
            out.axpy(w, &raw_weyl(alg, e, x, y));
        }
        out
    }))
}

/// `1 / (d − 1)`, or zero for an empty factor (whose Weyl term vanishes).
fn weight(d: usize) -> Scalar {
    if d == 0 {
        Scalar::zero()
    } else {
        Scalar::rational(1, d as i64 - 1)
    }
}

/// Check that `φ` lies in `Σ_side`: supported on the factor, skew in the
/// last two slots, with vanishing cyclic sum.
pub fn check_sigma(m: &GeneralizedMetric, side: Side, phi: &Tensor3) -> Result<(), GeometryError> {
    let alg = m.algebra();
    let n = alg.dim();
    if *phi != phi.pullback(m.projector(side)) {
        return Err(GeometryError::NotInSigma("not supported on the factor".into()));
    }
    let (basis, _) = m.frame(side);
    let k = basis.len();
    let vals = Tensor3::from_fn(k, |i, j, l| phi.eval(&basis[i], &basis[j], &basis[l]));
    for i in 0..k {
        for j in 0..k {
            for l in 0..k {
                if !(vals.get(i, j, l) + vals.get(i, l, j)).is_zero() {
                    return Err(GeometryError::NotInSigma("not skew in the last two slots".into()));
                }
                if !(vals.get(i, j, l) + vals.get(j, l, i) + vals.get(l, i, j)).is_zero() {
                    return Err(GeometryError::NotInSigma("cyclic sum does not vanish".into()));
                }
            }
        }
    }
    debug_assert_eq!(n, phi.dim());
    Ok(())
}

/// The trace vector `Σ_i φ_{e_i} e^i`, where `⟨φ_a b, c⟩ = φ(a,b,c)`.
pub fn sigma_trace(m: &GeneralizedMetric, side: Side, phi: &Tensor3) -> Vector {
    let alg = m.algebra();
    let (basis, dual) = m.frame(side);
    let mut cov = Vector::zero(alg.dim());
    for (b, d) in basis.iter().zip(&dual) {
        cov = &cov + &phi.contract12(b, d);
    }
    alg.raise(&cov)
}

/// Split `φ ∈ Σ_side` as `φ⁰ + φ^ε` with `φ⁰` trace-free and
/// `ε = (1/(dim − 1)) Σ_i φ_{e_i} e^i`.
pub fn sigma_decompose(m: &GeneralizedMetric, side: Side, phi: &Tensor3) -> Result<(Tensor3, Vector), GeometryError> {
    let d = m.dim(side);
    if d <= 1 {
        return Err(GeometryError::RankOne);
    }
    check_sigma(m, side, phi)?;
    let eps = sigma_trace(m, side, phi).scale(&weight(d));
    let phi0 = phi.sub(&weyl_tensor(m, side, &eps));
    Ok((phi0, eps))
}

/// A random element of `Σ⁰_side` with small integer coordinates in the
/// factor basis. Empty factors give zero.
pub fn random_sigma0<R: Rng>(m: &GeneralizedMetric, side: Side, rng: &mut R) -> Tensor3 {
    let alg = m.algebra();
    let n = alg.dim();
    let (basis, dual) = m.frame(side);
    let k = basis.len();
    if k < 2 {
        return Tensor3::zero(n);
    }
    // ψ skew in the last two slots, in factor coordinates.
    let mut psi = Tensor3::zero(k);
    for i in 0..k {
        for j in 0..k {
            for l in (j + 1)..k {
                let c = Scalar::int(rng.gen_range(-3..=3));
                psi.data[(i * k + j) * k + l] = c.clone();
                psi.data[(i * k + l) * k + j] = -c;
            }
        }
    }
    let cyc = Tensor3::from_fn(k, |i, j, l| psi.get(i, j, l) + psi.get(j, l, i) + psi.get(l, i, j));
    let local = psi.sub(&cyc.scale(&Scalar::rational(1, 3)));
    // Coordinates of π(e_p) along the factor basis are ⟨e_p, e^i⟩.
    let coords: Vec<Vector> =
        (0..n).map(|p| Vector(dual.iter().map(|d| alg.pair(&alg.basis(p), d)).collect())).collect();
    let phi = Tensor3::from_fn(n, |p, q, r| local.eval(&coords[p], &coords[q], &coords[r]));
    let (phi0, _) = sigma_decompose(m, side, &phi).expect("constructed in Σ");
    phi0
}

/// Whether `ε` is an infinitesimal isometry: `[ε, V_±] ⊂ V_±`.
pub fn is_isometry(eps: &Vector, m: &GeneralizedMetric) -> bool {
    let alg = m.algebra();
    [Side::Plus, Side::Minus]
        .iter()
        .all(|&s| m.factor(s).basis().iter().all(|b| m.factor(s).contains(&alg.bracket(eps, b))))
}
