//! Lie algebras and quadratic Lie algebras with exact structure constants,
//! subspaces, complementary decompositions and the Courant double `h ⊕ h*`
//! twisted by a closed 3-form.

use std::collections::BTreeMap;
use std::sync::Arc;

use thiserror::Error;

use crate::ceforms::InvariantForm;
use crate::linalg::{self, Matrix, Vector};
use crate::scalar::{Field, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QlaError {
    #[error("antisymmetry fails for basis pair ({0}, {1})")]
    AntisymmetryFailure(String, String),
    #[error("Jacobi identity fails for basis triple ({0}, {1}, {2})")]
    JacobiFailure(String, String, String),
    #[error("pairing is not invariant on basis triple ({0}, {1}, {2})")]
    InvarianceFailure(String, String, String),
    #[error("pairing is degenerate or not symmetric")]
    DegeneratePairing,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("3-form is not closed")]
    NotClosed,
    #[error("subspaces are not complementary")]
    NotComplementary,
}

/// Sparse structure constants: `table[i][j] = [(k, c_ij^k), …]`.
type Table = Vec<Vec<Vec<(usize, Scalar)>>>;

fn sparse(v: &Vector) -> Vec<(usize, Scalar)> {
    v.0.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(k, c)| (k, c.clone())).collect()
}

fn apply_table(table: &Table, a: &Vector, b: &Vector) -> Vector {
    let n = a.len();
    let mut out = Vector::zero(n);
    for (i, ai) in a.0.iter().enumerate() {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.0.iter().enumerate() {
            if bj.is_zero() {
                continue;
            }
            let ab = ai * bj;
            for (k, c) in &table[i][j] {
                out[*k] = &out[*k] + &(&ab * c);
            }
        }
    }
    out
}

/// A finite-dimensional Lie algebra given by structure constants.
#[derive(Clone, Debug)]
pub struct LieAlgebra {
    names: Vec<String>,
    table: Table,
    field: Arc<Field>,
}

impl LieAlgebra {
    /// Build from the brackets of basis pairs `(i, j) ↦ [e_i, e_j]`. Pairs
    /// not listed (in either order) bracket to zero; a pair listed in both
    /// orders must be consistent.
    pub fn new(
        names: Vec<String>,
        brackets: &BTreeMap<(usize, usize), Vector>,
        field: Arc<Field>,
    ) -> Result<LieAlgebra, QlaError> {
        let n = names.len();
        let mut dense = vec![vec![Vector::zero(n); n]; n];
        for (&(i, j), v) in brackets {
            if v.len() != n {
                return Err(QlaError::DimensionMismatch { expected: n, found: v.len() });
            }
            if i == j && !v.is_zero() {
                return Err(QlaError::AntisymmetryFailure(names[i].clone(), names[j].clone()));
            }
            if let Some(w) = brackets.get(&(j, i)) {
                if !(v + w).is_zero() {
                    return Err(QlaError::AntisymmetryFailure(names[i].clone(), names[j].clone()));
                }
            }
            dense[i][j] = v.clone();
            dense[j][i] = -v;
        }
        let table = dense.iter().map(|row| row.iter().map(sparse).collect()).collect();
        let lie = LieAlgebra { names, table, field };
        lie.check_jacobi()?;
        Ok(lie)
    }

    pub fn abelian(names: Vec<String>, field: Arc<Field>) -> LieAlgebra {
        let n = names.len();
        LieAlgebra { names, table: vec![vec![Vec::new(); n]; n], field }
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn basis(&self, i: usize) -> Vector {
        Vector::basis(self.dim(), i)
    }

    /// Structure constant `c_ij^k`.
    pub fn constant(&self, i: usize, j: usize, k: usize) -> Scalar {
        self.table[i][j].iter().find(|(m, _)| *m == k).map(|(_, c)| c.clone()).unwrap_or_default()
    }

    pub fn bracket(&self, a: &Vector, b: &Vector) -> Vector {
        apply_table(&self.table, a, b)
    }

    fn check_jacobi(&self) -> Result<(), QlaError> {
        let n = self.dim();
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    let (a, b, c) = (self.basis(i), self.basis(j), self.basis(k));
                    let s = &(&self.bracket(&a, &self.bracket(&b, &c)) + &self.bracket(&b, &self.bracket(&c, &a)))
                        + &self.bracket(&c, &self.bracket(&a, &b));
                    if !s.is_zero() {
                        return Err(QlaError::JacobiFailure(
                            self.names[i].clone(),
                            self.names[j].clone(),
                            self.names[k].clone(),
                        ));
                    }
                }
            }
        }
        Ok(())
    }

    /// Matrix of `ad_a` (columns are images of basis vectors).
    pub fn ad(&self, a: &Vector) -> Matrix {
        let cols: Vec<Vector> = (0..self.dim()).map(|j| self.bracket(a, &self.basis(j))).collect();
        Matrix::from_cols(&cols)
    }
}

/// A Lie algebra with an invariant nondegenerate symmetric pairing.
#[derive(Clone, Debug)]
pub struct QuadraticLieAlgebra {
    lie: LieAlgebra,
    gram: Matrix,
    gram_inv: Matrix,
}

impl QuadraticLieAlgebra {
    pub fn new(lie: LieAlgebra, gram: Matrix) -> Result<QuadraticLieAlgebra, QlaError> {
        let n = lie.dim();
        if gram.rows != n || gram.cols != n {
            return Err(QlaError::DimensionMismatch { expected: n, found: gram.rows });
        }
        if gram != gram.transpose() {
            return Err(QlaError::DegeneratePairing);
        }
        let gram_inv = gram.inverse().ok_or(QlaError::DegeneratePairing)?;
        let q = QuadraticLieAlgebra { lie, gram, gram_inv };
        q.check_invariance()?;
        Ok(q)
    }

    /// Build directly from the bracket table and Gram matrix, verifying
    /// antisymmetry, Jacobi, symmetry/nondegeneracy and invariance.
    pub fn build(
        names: Vec<String>,
        brackets: &BTreeMap<(usize, usize), Vector>,
        gram: Matrix,
        field: Arc<Field>,
    ) -> Result<QuadraticLieAlgebra, QlaError> {
        QuadraticLieAlgebra::new(LieAlgebra::new(names, brackets, field)?, gram)
    }

    fn check_invariance(&self) -> Result<(), QlaError> {
        let n = self.dim();
        for i in 0..n {
            for j in 0..n {
                let ab = self.bracket(&self.basis(i), &self.basis(j));
                for k in 0..n {
                    let ac = self.bracket(&self.basis(i), &self.basis(k));
                    let s = self.pair(&ab, &self.basis(k)) + self.pair(&self.basis(j), &ac);
                    if !s.is_zero() {
                        return Err(QlaError::InvarianceFailure(
                            self.lie.names[i].clone(),
                            self.lie.names[j].clone(),
                            self.lie.names[k].clone(),
                        ));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn lie(&self) -> &LieAlgebra {
        &self.lie
    }

    pub fn dim(&self) -> usize {
        self.lie.dim()
    }

    pub fn names(&self) -> &[String] {
        self.lie.names()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.lie.names.iter().position(|n| n == name)
    }

    pub fn field(&self) -> &Arc<Field> {
        self.lie.field()
    }

    pub fn gram(&self) -> &Matrix {
        &self.gram
    }

    pub fn gram_inv(&self) -> &Matrix {
        &self.gram_inv
    }

    pub fn basis(&self, i: usize) -> Vector {
        self.lie.basis(i)
    }

    /// Basis vector by name; panics on an unknown name.
    pub fn v(&self, name: &str) -> Vector {
        let i = self.index_of(name).unwrap_or_else(|| panic!("no basis vector named `{name}`"));
        self.basis(i)
    }

    pub fn bracket(&self, a: &Vector, b: &Vector) -> Vector {
        self.lie.bracket(a, b)
    }

    pub fn try_bracket(&self, a: &Vector, b: &Vector) -> Result<Vector, QlaError> {
        self.check_len(a)?;
        self.check_len(b)?;
        Ok(self.bracket(a, b))
    }

    fn check_len(&self, a: &Vector) -> Result<(), QlaError> {
        if a.len() != self.dim() {
            return Err(QlaError::DimensionMismatch { expected: self.dim(), found: a.len() });
        }
        Ok(())
    }

    pub fn pair(&self, a: &Vector, b: &Vector) -> Scalar {
        let mut acc = Scalar::zero();
        for (i, ai) in a.0.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            for (j, bj) in b.0.iter().enumerate() {
                let g = &self.gram[(i, j)];
                if bj.is_zero() || g.is_zero() {
                    continue;
                }
                acc = acc + ai * bj * g;
            }
        }
        acc
    }

    pub fn try_pair(&self, a: &Vector, b: &Vector) -> Result<Scalar, QlaError> {
        self.check_len(a)?;
        self.check_len(b)?;
        Ok(self.pair(a, b))
    }

    /// The vector `a♯` with `⟨a♯, b⟩ = Σ_i a_i b_i` — i.e. raising an index.
    pub fn raise(&self, covector: &Vector) -> Vector {
        self.gram_inv.apply(covector)
    }

    /// Vectors `{e^i}` with `⟨e^i, e_j⟩ = δ_ij` for a basis `{e_j}` of a
    /// subspace on which the pairing is nondegenerate.
    pub fn dual_basis(&self, basis: &[Vector]) -> Option<Vec<Vector>> {
        let k = basis.len();
        let mut g = Matrix::zero(k, k);
        for i in 0..k {
            for j in 0..k {
                g[(i, j)] = self.pair(&basis[i], &basis[j]);
            }
        }
        let inv = g.inverse()?;
        Some(
            (0..k)
                .map(|i| {
                    let mut v = Vector::zero(self.dim());
                    for j in 0..k {
                        v.axpy(&inv[(i, j)], &basis[j]);
                    }
                    v
                })
                .collect(),
        )
    }

    pub fn subspace(&self, vectors: &[Vector]) -> Subspace {
        Subspace::new(self.dim(), vectors)
    }

    /// Orthogonal complement of a subspace.
    pub fn perp(&self, s: &Subspace) -> Subspace {
        if s.dim() == 0 {
            return Subspace::whole(self.dim());
        }
        let m = Matrix::from_rows(s.basis()).mul(&self.gram);
        Subspace::new(self.dim(), &m.nullspace())
    }

    /// Gram matrix of the pairing restricted to a list of vectors.
    pub fn gram_of(&self, vs: &[Vector]) -> Matrix {
        let k = vs.len();
        let mut g = Matrix::zero(k, k);
        for i in 0..k {
            for j in 0..k {
                g[(i, j)] = self.pair(&vs[i], &vs[j]);
            }
        }
        g
    }

    pub fn is_isotropic(&self, s: &Subspace) -> bool {
        self.gram_of(s.basis()).is_zero()
    }

    /// Human-readable rendering of a vector in this basis.
    pub fn show(&self, v: &Vector) -> String {
        show_vector(self.names(), v)
    }
}

pub fn show_vector(names: &[String], v: &Vector) -> String {
    let parts: Vec<String> = v
        .0
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, c)| {
            if c.is_one() {
                names[i].clone()
            } else {
                format!("({c})*{}", names[i])
            }
        })
        .collect();
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}

/// A linear subspace, stored by its canonical reduced row echelon basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    ambient: usize,
    basis: Vec<Vector>,
}

impl Subspace {
    pub fn new(ambient: usize, vectors: &[Vector]) -> Subspace {
        Subspace { ambient, basis: linalg::rref_basis(vectors) }
    }

    pub fn whole(n: usize) -> Subspace {
        Subspace::new(n, &(0..n).map(|i| Vector::basis(n, i)).collect::<Vec<_>>())
    }

    pub fn zero(n: usize) -> Subspace {
        Subspace { ambient: n, basis: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn basis(&self) -> &[Vector] {
        &self.basis
    }

    pub fn contains(&self, v: &Vector) -> bool {
        v.is_zero() || linalg::coordinates(&self.basis, v).is_some()
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        let mut vs = self.basis.clone();
        vs.extend(other.basis.iter().cloned());
        Subspace::new(self.ambient, &vs)
    }

    /// Complex-conjugate subspace `τ(self)`.
    pub fn conj(&self) -> Subspace {
        Subspace::new(self.ambient, &self.basis.iter().map(Vector::conj).collect::<Vec<_>>())
    }
}

/// A splitting of the ambient space into complementary subspaces, with the
/// component projections precomputed.
#[derive(Clone, Debug)]
pub struct Decomposition {
    parts: Vec<Subspace>,
    /// Inverse of the matrix whose columns are the concatenated bases.
    coords: Matrix,
}

impl Decomposition {
    pub fn new(parts: &[Subspace]) -> Result<Decomposition, QlaError> {
        let n = parts.first().map_or(0, Subspace::ambient_dim);
        let cols: Vec<Vector> = parts.iter().flat_map(|p| p.basis().iter().cloned()).collect();
        if cols.len() != n {
            return Err(QlaError::NotComplementary);
        }
        let coords = Matrix::from_cols(&cols).inverse().ok_or(QlaError::NotComplementary)?;
        Ok(Decomposition { parts: parts.to_vec(), coords })
    }

    pub fn parts(&self) -> &[Subspace] {
        &self.parts
    }

    /// Components of `a`, one per subspace; they sum to `a`.
    pub fn project(&self, a: &Vector) -> Vec<Vector> {
        let c = self.coords.apply(a);
        let mut out = Vec::with_capacity(self.parts.len());
        let mut offset = 0;
        for p in &self.parts {
            let mut v = Vector::zero(a.len());
            for (k, b) in p.basis().iter().enumerate() {
                v.axpy(&c[offset + k], b);
            }
            offset += p.dim();
            out.push(v);
        }
        out
    }

    /// Component of `a` in part `idx`.
    pub fn component(&self, idx: usize, a: &Vector) -> Vector {
        self.project(a).swap_remove(idx)
    }

    /// Projector matrix onto part `idx`.
    pub fn projector(&self, idx: usize) -> Matrix {
        let n = self.coords.rows;
        let cols: Vec<Vector> = (0..n).map(|j| self.component(idx, &Vector::basis(n, j))).collect();
        Matrix::from_cols(&cols)
    }
}

/// Components of `a` along complementary subspaces.
pub fn project(dec: &[Subspace], a: &Vector) -> Result<Vec<Vector>, QlaError> {
    Ok(Decomposition::new(dec)?.project(a))
}

/// Name of the dual basis vector for a base name: `v_1 ↦ v^1`, otherwise `x ↦ x*`.
pub fn dual_name(name: &str) -> String {
    match name.find('_') {
        Some(p) => format!("{}^{}", &name[..p], &name[p + 1..]),
        None => format!("{name}*"),
    }
}

/// The quadratic Lie algebra `h ⊕ h*` with bracket
/// `[v + α, w + β] = [v,w] − β([v,·]) + α([w,·]) + i_w i_v H`
/// and pairing `⟨v + α, w + β⟩ = ½(α(w) + β(v))`.
pub fn courant_double(h: &LieAlgebra, h3: &InvariantForm) -> Result<QuadraticLieAlgebra, QlaError> {
    let n = h.dim();
    if !crate::ceforms::ce_d(h, h3).is_zero() {
        return Err(QlaError::NotClosed);
    }
    let mut names: Vec<String> = h.names().to_vec();
    names.extend(h.names().iter().map(|s| dual_name(s)));
    let mut br = BTreeMap::new();
    for i in 0..n {
        for j in 0..n {
            // [v_i, v_j]
            if i < j {
                let mut v = Vector::zero(2 * n);
                for k in 0..n {
                    v[k] = h.constant(i, j, k);
                    v[n + k] = h3.eval(&[i, j, k]);
                }
                br.insert((i, j), v);
            }
            // [v_i, v^j] = −v^j ∘ ad_{v_i}
            let mut v = Vector::zero(2 * n);
            for m in 0..n {
                v[n + m] = -h.constant(i, m, j);
            }
            br.insert((i, n + j), v);
        }
    }
    let mut gram = Matrix::zero(2 * n, 2 * n);
    let half = Scalar::rational(1, 2);
    for i in 0..n {
        gram[(i, n + i)] = half.clone();
        gram[(n + i, i)] = half.clone();
    }
    QuadraticLieAlgebra::build(names, &br, gram, h.field().clone())
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::ceforms::InvariantForm;

    pub(crate) fn su2r(field: &Arc<Field>, flip: bool) -> Result<LieAlgebra, QlaError> {
        let names: Vec<String> = (1..=4).map(|i| format!("v_{i}")).collect();
        let e = |i: usize, s: i64| {
            let mut v = Vector::zero(4);
            v[i] = Scalar::int(s);
            v
        };
        let mut br = BTreeMap::new();
        br.insert((1, 2), e(0, -1));
        br.insert((2, 0), e(1, -1));
        br.insert((0, 1), e(2, if flip { 1 } else { -1 }));
        LieAlgebra::new(names, &br, field.clone())
    }

    pub(crate) fn g_ell() -> QuadraticLieAlgebra {
        let f = Field::with_params(&["l"]);
        let h = su2r(&f, false).unwrap();
        let h3 = InvariantForm::monomial(4, &[0, 1, 2], f.sym("l"));
        courant_double(&h, &h3).unwrap()
    }

    #[test]
    fn su2_accepted_and_bad_constants_rejected() {
        let f = Field::base();
        assert!(su2r(&f, false).is_ok());
        // Flipping one of the three diagonal constants yields sl(2) ⊕ ℝ, still a Lie algebra.
        assert!(su2r(&f, true).is_ok());
        let names: Vec<String> = (1..=4).map(|i| format!("v_{i}")).collect();
        let e = |i: usize, s: i64| Vector::basis(4, i).scale(&Scalar::int(s));
        let mut br = BTreeMap::new();
        br.insert((1, 2), e(0, -1));
        br.insert((2, 0), e(1, -1));
        br.insert((0, 1), e(2, -1));
        br.insert((0, 3), e(0, 1));
        assert_eq!(
            LieAlgebra::new(names.clone(), &br, f.clone()).unwrap_err(),
            QlaError::JacobiFailure("v_1".into(), "v_2".into(), "v_4".into())
        );
        let mut br = BTreeMap::new();
        br.insert((1, 2), e(0, -1));
        br.insert((2, 1), e(0, -1));
        assert!(matches!(LieAlgebra::new(names, &br, f), Err(QlaError::AntisymmetryFailure(..))));
    }

    #[test]
    fn abelian_identity_gram_accepted() {
        let names: Vec<String> = vec!["a".into(), "b".into()];
        let lie = LieAlgebra::abelian(names, Field::base());
        assert!(QuadraticLieAlgebra::new(lie, Matrix::identity(2)).is_ok());
    }

    #[test]
    fn g_ell_brackets() {
        let g = g_ell();
        let l = g.field().sym("l");
        let expect = &(-&g.v("v_1")) + &g.v("v^1").scale(&l);
        assert_eq!(g.bracket(&g.v("v_2"), &g.v("v_3")), expect);
        assert_eq!(g.bracket(&g.v("v_1"), &g.v("v^2")), -&g.v("v^3"));
        assert_eq!(g.pair(&g.v("v_1"), &g.v("v^1")), Scalar::rational(1, 2));
        assert!(g.pair(&g.v("v_1"), &g.v("v_1")).is_zero());
    }

    #[test]
    fn non_closed_twist_rejected() {
        // su(2) ⊕ ℝ is unimodular, so every 3-form on it is closed.
        let f = Field::base();
        let h = su2r(&f, false).unwrap();
        assert!(courant_double(&h, &InvariantForm::monomial(4, &[0, 1, 3], Scalar::one())).is_ok());
        // aff(1) ⊕ ℝ² is not: d(e^{234}) = −e^{1234}.
        let names: Vec<String> = (1..=4).map(|i| format!("e_{i}")).collect();
        let mut br = BTreeMap::new();
        br.insert((0, 1), Vector::basis(4, 1));
        let h = LieAlgebra::new(names, &br, f).unwrap();
        let h3 = InvariantForm::monomial(4, &[1, 2, 3], Scalar::one());
        assert_eq!(courant_double(&h, &h3).unwrap_err(), QlaError::NotClosed);
    }

    #[test]
    fn abelian_double_is_split() {
        let lie = LieAlgebra::abelian(vec!["e_1".into(), "e_2".into()], Field::base());
        let g = courant_double(&lie, &InvariantForm::zero(2)).unwrap();
        assert_eq!(g.dim(), 4);
        assert!(g.is_isotropic(&g.subspace(&[g.v("e_1"), g.v("e_2")])));
    }

    #[test]
    fn projection_onto_complements() {
        let g = g_ell();
        let a = Vector::basis(8, 0);
        let s1 = g.subspace(std::slice::from_ref(&a));
        let rest = g.subspace(&(1..8).map(|i| Vector::basis(8, i)).collect::<Vec<_>>());
        let parts = project(&[s1.clone(), rest.clone()], &a).unwrap();
        assert_eq!(parts[0], a);
        assert!(parts[1].is_zero());
        assert_eq!(project(&[s1.clone(), s1], &a).unwrap_err(), QlaError::NotComplementary);
    }
}
