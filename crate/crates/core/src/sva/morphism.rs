//! Maps of superaffine vertex algebras induced by isomorphisms of quadratic
//! Lie algebras.

use std::sync::Arc;

use super::state::{Gen, State};
use super::{Sva, SvaError};
use crate::linalg::{Matrix, Vector};

/// The vertex algebra map `ψ^{ch}` induced by a Lie algebra isometry `ψ`.
#[derive(Debug)]
pub struct StateMap {
    matrix: Matrix,
    target: Arc<Sva>,
}

impl StateMap {
    /// `matrix` has the image of source basis vector `j` as column `j`.
    pub fn new(source: &Sva, target: Arc<Sva>, matrix: Matrix) -> Result<StateMap, SvaError> {
        let (s, t) = (source.algebra(), target.algebra());
        if matrix.rows != t.dim() || matrix.cols != s.dim() {
            return Err(SvaError::NotIsomorphism("dimension mismatch".into()));
        }
        if matrix.inverse().is_none() {
            return Err(SvaError::NotIsomorphism("not invertible".into()));
        }
        if source.level() != target.level() {
            return Err(SvaError::NotIsomorphism("levels differ".into()));
        }
        let image: Vec<Vector> = (0..s.dim()).map(|j| matrix.col(j)).collect();
        for i in 0..s.dim() {
            for j in 0..s.dim() {
                if t.pair(&image[i], &image[j]) != s.gram()[(i, j)] {
                    return Err(SvaError::NotIsomorphism(format!(
                        "pairing of {} and {} not preserved",
                        s.names()[i],
                        s.names()[j]
                    )));
                }
                let lhs = matrix.apply(&s.bracket(&s.basis(i), &s.basis(j)));
                if lhs != t.bracket(&image[i], &image[j]) {
                    return Err(SvaError::NotIsomorphism(format!(
                        "bracket of {} and {} not preserved",
                        s.names()[i],
                        s.names()[j]
                    )));
                }
            }
        }
        Ok(StateMap { matrix, target })
    }

    /// Identity map of an algebra.
    pub fn identity(sva: Arc<Sva>) -> StateMap {
        let n = sva.dim();
        StateMap { matrix: Matrix::identity(n), target: sva }
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn target(&self) -> &Arc<Sva> {
        &self.target
    }

    fn image_gen(&self, g: Gen) -> State {
        let mut out = State::zero();
        for r in 0..self.matrix.rows {
            let c = &self.matrix[(r, g.idx as usize)];
            if !c.is_zero() {
                out.add_term(smallvec::smallvec![Gen { idx: r as u16, ..g }], c.clone());
            }
        }
        out
    }

    pub fn apply(&self, x: &State) -> State {
        let mut out = State::zero();
        for (m, c) in x.terms() {
            let mut acc = State::vacuum();
            for g in m.iter().rev() {
                acc = self.target.nop(&self.image_gen(*g), &acc);
            }
            out.add_scaled(c, &acc);
        }
        out
    }
}
