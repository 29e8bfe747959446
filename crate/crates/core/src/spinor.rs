//! The exterior-algebra model `S = Λ*V^{0,1}` of the spinors of an
//! even-dimensional factor, and the gravitino, dilatino and Dirac operators.
//!
//! Clifford multiplication follows `v·v = ⟨v,v⟩` and is given on the model by
//! `a·σ = √2 ι_{⟨a^{1,0},·⟩}σ + √2 a^{0,1} ∧ σ`. The pure spinor is `η = 1`.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::geometry::{self, Connection, GeneralizedMetric, GeometryError, Side};
use crate::linalg::{Matrix, Vector};
use crate::scalar::{Field, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpinorError {
    #[error("vector does not lie in the complexified factor")]
    WrongFactor,
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

/// An element of `Λ*V^{0,1}`, indexed by bitmasks over the basis `{ε̄_j}`.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct Spinor(BTreeMap<u32, Scalar>);

impl Spinor {
    pub fn zero() -> Spinor {
        Spinor(BTreeMap::new())
    }

    /// The pure spinor `1 ∈ Λ⁰`.
    pub fn one() -> Spinor {
        Spinor::monomial(0, Scalar::one())
    }

    pub fn monomial(mask: u32, c: Scalar) -> Spinor {
        let mut s = Spinor::zero();
        s.add_term(mask, c);
        s
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn coefficient(&self, mask: u32) -> Scalar {
        self.0.get(&mask).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (u32, &Scalar)> {
        self.0.iter().map(|(m, c)| (*m, c))
    }

    fn add_term(&mut self, mask: u32, c: Scalar) {
        if c.is_zero() {
            return;
        }
        let e = self.0.entry(mask).or_default();
        *e = &*e + &c;
        if e.is_zero() {
            self.0.remove(&mask);
        }
    }

    pub fn add(&self, o: &Spinor) -> Spinor {
        let mut out = self.clone();
        for (m, c) in o.terms() {
            out.add_term(m, c.clone());
        }
        out
    }

    pub fn sub(&self, o: &Spinor) -> Spinor {
        self.add(&o.scale(&Scalar::int(-1)))
    }

    pub fn scale(&self, c: &Scalar) -> Spinor {
        let mut out = Spinor::zero();
        for (m, v) in self.terms() {
            out.add_term(m, v * c);
        }
        out
    }

    /// `Some(0)` for even, `Some(1)` for odd exterior degree, `None` if mixed
    /// or zero.
    pub fn chirality(&self) -> Option<u32> {
        let mut it = self.0.keys().map(|m| m.count_ones() % 2);
        let first = it.next()?;
        it.all(|p| p == first).then_some(first)
    }

    /// Each coefficient divided by a common scalar, if the spinor is a
    /// multiple of `o`.
    pub fn ratio_to(&self, o: &Spinor) -> Option<Scalar> {
        let (m, c) = o.terms().next()?;
        let r = &self.coefficient(m) / c;
        (o.scale(&r) == *self).then_some(r)
    }

    pub fn render(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        self.terms()
            .map(|(m, c)| {
                let mono = if m == 0 {
                    "1".to_string()
                } else {
                    (0..32).filter(|k| m >> k & 1 == 1).map(|k| format!("ē{}", k + 1)).collect::<Vec<_>>().join("∧")
                };
                format!("({c})*{mono}")
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

impl fmt::Debug for Spinor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// Sign of moving a new factor `k` past the lower-index factors of `mask`.
fn koszul(mask: u32, k: usize) -> Scalar {
    if (mask & ((1u32 << k) - 1)).count_ones().is_multiple_of(2) {
        Scalar::one()
    } else {
        Scalar::int(-1)
    }
}

/// The spinor module of one factor of a generalized metric with an
/// orthogonal almost complex structure.
#[derive(Clone, Debug)]
pub struct SpinorModel {
    metric: GeneralizedMetric,
    side: Side,
    j: Matrix,
    field: Arc<Field>,
    sqrt2: Scalar,
    /// Basis of `V^{1,0}`.
    eps: Vec<Vector>,
    /// Basis of `V^{0,1}` with `⟨ε_j, ε̄_k⟩ = δ_jk`.
    eps_bar: Vec<Vector>,
}

impl SpinorModel {
    /// Build the model on `side` for the almost complex structure `j`
    /// (an endomorphism of `g` preserving the factor). `√2` is adjoined to
    /// the scalar field if not already present.
    pub fn new(metric: GeneralizedMetric, side: Side, j: Matrix) -> Result<SpinorModel, SpinorError> {
        let (hol, anti) = metric.eigenspaces(side, &j)?;
        let eps_bar = anti.basis().to_vec();
        SpinorModel::with_basis(metric, side, j, hol.basis(), &eps_bar)
    }

    /// As [`SpinorModel::new`], with a prescribed basis `{ε̄_j}` of `V^{0,1}`;
    /// `{ε_j}` is taken as the dual basis in `V^{1,0}` spanned by `hol`.
    fn with_basis(
        metric: GeneralizedMetric,
        side: Side,
        j: Matrix,
        hol: &[Vector],
        eps_bar: &[Vector],
    ) -> Result<SpinorModel, SpinorError> {
        let alg = metric.algebra().clone();
        let field = alg.field().ensure_radical("sqrt2", &Scalar::int(2)).expect("sqrt2 is √2 wherever declared");
        let sqrt2 = field.sym("sqrt2");
        // ε_j = Σ_k C_jk hol_k with Σ_k C_jk ⟨hol_k, ε̄_l⟩ = δ_jl.
        let pairing = Matrix::from_rows(
            &hol.iter().map(|h| Vector(eps_bar.iter().map(|e| alg.pair(h, e)).collect())).collect::<Vec<_>>(),
        );
        let inv = pairing.inverse().ok_or(GeometryError::NotAlmostComplex("V^{1,0} and V^{0,1} do not pair".into()))?;
        let n = alg.dim();
        let eps: Vec<Vector> = (0..hol.len())
            .map(|jx| {
                let mut v = Vector::zero(n);
                for (k, h) in hol.iter().enumerate() {
                    v.axpy(&inv[(k, jx)], h);
                }
                v
            })
            .collect();
        Ok(SpinorModel { metric, side, j, field, sqrt2, eps, eps_bar: eps_bar.to_vec() })
    }

    pub fn metric(&self) -> &GeneralizedMetric {
        &self.metric
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn complex_structure(&self) -> &Matrix {
        &self.j
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn sqrt2(&self) -> &Scalar {
        &self.sqrt2
    }

    /// Basis `{ε_j}` of `V^{1,0}`.
    pub fn holomorphic_basis(&self) -> &[Vector] {
        &self.eps
    }

    /// Basis `{ε̄_j}` of `V^{0,1}`, dual to `{ε_j}`.
    pub fn antiholomorphic_basis(&self) -> &[Vector] {
        &self.eps_bar
    }

    /// Complex dimension `n` of `V^{1,0}`; the model has rank `2ⁿ`.
    pub fn rank(&self) -> usize {
        self.eps.len()
    }

    /// The spinor `ε̄_{i₁} ∧ … ∧ ε̄_{i_k}` for the set bits of `mask`.
    pub fn basis_spinors(&self) -> Vec<Spinor> {
        (0..1u32 << self.rank()).map(|m| Spinor::monomial(m, Scalar::one())).collect()
    }

    /// Clifford multiplication `v·σ`.
    pub fn clifford_act(&self, v: &Vector, s: &Spinor) -> Result<Spinor, SpinorError> {
        if !self.metric.project(self.side.other(), v).is_zero() {
            return Err(SpinorError::WrongFactor);
        }
        Ok(self.act(v, s))
    }

    fn act(&self, v: &Vector, s: &Spinor) -> Spinor {
        let alg = self.metric.algebra();
        let mut out = Spinor::zero();
        for k in 0..self.rank() {
            // v = Σ ⟨v, ε̄_k⟩ ε_k + Σ ⟨v, ε_k⟩ ε̄_k.
            let contract = &alg.pair(v, &self.eps_bar[k]) * &self.sqrt2;
            let wedge = &alg.pair(v, &self.eps[k]) * &self.sqrt2;
            for (m, c) in s.terms() {
                let bit = 1u32 << k;
                if m & bit != 0 && !contract.is_zero() {
                    out.add_term(m & !bit, &(&contract * c) * &koszul(m, k));
                }
                if m & bit == 0 && !wedge.is_zero() {
                    out.add_term(m | bit, &(&wedge * c) * &koszul(m, k));
                }
            }
        }
        out
    }

    /// Clifford product `v₁·v₂·…·v_r·σ`.
    pub fn act_word(&self, word: &[&Vector], s: &Spinor) -> Spinor {
        word.iter().rev().fold(s.clone(), |acc, v| self.act(v, &acc))
    }

    /// The spin lift of a skew endomorphism `A` of the factor applied to `σ`:
    /// `¼ Σ_i (A e_i)·e^i·σ`.
    pub fn spin_lift(&self, a: impl Fn(&Vector) -> Vector, s: &Spinor) -> Spinor {
        let (basis, dual) = self.metric.frame(self.side);
        let mut out = Spinor::zero();
        for (b, d) in basis.iter().zip(&dual) {
            let ab = self.metric.project(self.side, &a(b));
            out = out.add(&self.act_word(&[&ab, d], s));
        }
        out.scale(&Scalar::rational(1, 4))
    }

    /// Gravitino operator `D^S_{a}η = ¼ Σ_i [a, e_i]_s·e^i·η` for `a` in the
    /// other factor, evaluated at the pure spinor.
    pub fn gravitino_residual(&self, a: &Vector) -> Spinor {
        let alg = self.metric.algebra();
        let a = self.metric.project(self.side.other(), a);
        self.spin_lift(|b| alg.bracket(&a, b), &Spinor::one())
    }

    /// `⅙ Σ_{k,i} e^k·[e_k, e_i]_s·e^i·η − ε_s·η`; vanishes iff the dilatino
    /// equation holds.
    pub fn dilatino_residual(&self, eps: &Vector) -> Spinor {
        let alg = self.metric.algebra();
        let (basis, dual) = self.metric.frame(self.side);
        let one = Spinor::one();
        let mut h = Spinor::zero();
        for (ek, dk) in basis.iter().zip(&dual) {
            for (ei, di) in basis.iter().zip(&dual) {
                let br = self.metric.project(self.side, &alg.bracket(ek, ei));
                h = h.add(&self.act_word(&[dk, &br, di], &one));
            }
        }
        let e = self.metric.project(self.side, eps);
        h.scale(&Scalar::rational(1, 6)).sub(&self.act(&e, &one))
    }

    /// The Dirac operator `Σ_k e^k·D^S_{e_k}` of a connection preserving the
    /// factor, as its values on the basis spinors.
    pub fn dirac(&self, d: &Connection) -> Vec<Spinor> {
        let (basis, dual) = self.metric.frame(self.side);
        self.basis_spinors()
            .iter()
            .map(|s| {
                let mut out = Spinor::zero();
                for (b, db) in basis.iter().zip(&dual) {
                    let inner = self.spin_lift(|v| d.apply(b, v), s);
                    out = out.add(&self.act(db, &inner));
                }
                out
            })
            .collect()
    }

    /// Whether the Dirac operator of the canonical connection with divergence
    /// `eps` is unchanged by `samples` random trace-free perturbations in
    /// `Σ⁰₊ ⊕ Σ⁰₋`. Exact comparison.
    pub fn dirac_independence_check(&self, eps: &Vector, samples: usize, seed: u64) -> Result<bool, SpinorError> {
        let alg = self.metric.algebra();
        let d = geometry::canonical_connection(&self.metric, eps)?;
        let base = self.dirac(&d);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..samples {
            let phi = geometry::random_sigma0(&self.metric, Side::Plus, &mut rng)
                .add(&geometry::random_sigma0(&self.metric, Side::Minus, &mut rng));
            let d2 = d.add(&Connection::from_tensor(alg, &phi));
            if self.dirac(&d2) != base {
                return Ok(false);
            }
        }
        Ok(true)
    }
}
