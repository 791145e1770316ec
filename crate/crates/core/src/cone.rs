//! Polyhedral ordering cones `K = {y : ⟨y_j*, y⟩ ≤ 0 ∀j}`.
//!
//! `K` splits as `Y0 + K1` where `Y0` is the lineality space and `K1` is a
//! pointed cone inside a complement `Y1`. The projection `π` onto `Y1` along
//! `Y0` is cached together with the coordinate map onto `Y1`.

use crate::error::{Error, Result};
use crate::exactmath::{
    dot, is_zero_vec, kernel, solve_linear, strict_feasible, unit, zeros, LinConstraint,
    LinearSolution, Matrix, Scalar, Subspace,
};
use crate::polyhedron::{HPolyhedron, VPolyhedron};
use crate::semiclosed::{Region, SemiClosedPolyhedron};

#[derive(Clone, Debug, PartialEq)]
pub struct OrderingCone<T> {
    dim: usize,
    rows: Vec<Vec<T>>,
    y0: Subspace<T>,
    y1: Subspace<T>,
    /// Rows of `K1` written in the coordinates of the `Y1` basis.
    k1_rows: Vec<Vec<T>>,
    pi: Matrix<T>,
    /// Coordinates of `π(y)` in the `Y1` basis (the map `Φ₁ ∘ π`).
    y1_coords: Matrix<T>,
}

impl<T: Scalar> OrderingCone<T> {
    pub fn build(dim: usize, rows: Vec<Vec<T>>) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::WholeSpaceCone);
        }
        for (i, r) in rows.iter().enumerate() {
            if r.len() != dim {
                return Err(Error::DimensionMismatch(format!(
                    "cone row {i} has length {}, expected {dim}",
                    r.len()
                )));
            }
            if is_zero_vec(r) {
                return Err(Error::ZeroRow(i));
            }
        }
        let y0 = kernel(&Matrix::from_rows(dim, rows.clone()));
        let y1 = y0.complement();
        // columns [Y1 | Y0] form a basis; invert it to read off coordinates
        let cols: Vec<Vec<T>> = y1.basis().iter().chain(y0.basis()).cloned().collect();
        let basis = Matrix::from_columns(dim, &cols);
        let mut inv_cols = Vec::with_capacity(dim);
        for i in 0..dim {
            match solve_linear(&basis, &unit(dim, i)) {
                LinearSolution::Solution { particular, .. } => inv_cols.push(particular),
                LinearSolution::Inconsistent => unreachable!("Y0 ⊕ Y1 spans the space"),
            }
        }
        let inv = Matrix::from_columns(dim, &inv_cols);
        let d1 = y1.dim();
        let y1_coords = Matrix::from_rows(dim, inv.rows()[..d1].to_vec());
        let w = Matrix::from_columns(dim, y1.basis());
        let pi = if d1 == 0 {
            Matrix::zeros(dim, dim)
        } else {
            w.mul(&y1_coords)
        };
        let k1_rows = rows
            .iter()
            .map(|r| y1.basis().iter().map(|b| dot(r, b)).collect())
            .collect();
        Ok(OrderingCone {
            dim,
            rows,
            y0,
            y1,
            k1_rows,
            pi,
            y1_coords,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rows(&self) -> &[Vec<T>] {
        &self.rows
    }

    /// The lineality space `ℓ(K) = Y0`.
    pub fn y0(&self) -> &Subspace<T> {
        &self.y0
    }

    pub fn y1(&self) -> &Subspace<T> {
        &self.y1
    }

    pub fn k1_rows(&self) -> &[Vec<T>] {
        &self.k1_rows
    }

    /// Projection onto `Y1` along `Y0`, as a `dim × dim` matrix.
    pub fn pi(&self) -> &Matrix<T> {
        &self.pi
    }

    pub fn y1_coords(&self) -> &Matrix<T> {
        &self.y1_coords
    }

    fn values(&self, y: &[T]) -> Vec<T> {
        self.rows.iter().map(|r| dot(r, y)).collect()
    }

    pub fn in_k(&self, y: &[T]) -> bool {
        self.values(y).iter().all(|v| !v.is_positive())
    }

    /// Strict-row formula for the interior: every row negative.
    pub fn in_int(&self, y: &[T]) -> bool {
        self.values(y).iter().all(|v| v.is_negative())
    }

    /// `y ∈ K ∖ ℓ(K)`: in `K` and some row strictly negative.
    pub fn in_k_minus_l(&self, y: &[T]) -> bool {
        let vals = self.values(y);
        vals.iter().all(|v| !v.is_positive()) && vals.iter().any(|v| v.is_negative())
    }

    pub fn as_polyhedron(&self) -> HPolyhedron<T> {
        HPolyhedron::from_constraints(
            self.dim,
            self.rows
                .iter()
                .map(|r| LinConstraint::le(r.clone(), T::zero())),
        )
    }

    pub fn as_semiclosed(&self) -> SemiClosedPolyhedron<T> {
        self.as_polyhedron().into()
    }

    /// `int K` as a semi-closed set (every row strict).
    pub fn interior_piece(&self) -> SemiClosedPolyhedron<T> {
        SemiClosedPolyhedron::from_constraints(
            self.dim,
            self.rows
                .iter()
                .map(|r| LinConstraint::lt(r.clone(), T::zero())),
        )
    }

    pub fn has_nonempty_interior(&self) -> bool {
        !strict_feasible(self.dim, &self.interior_piece().constraints()).is_empty()
    }

    /// One piece `{y ∈ K : ⟨y_j*, y⟩ < 0}` per row; empty pieces are dropped.
    pub fn k_minus_l_pieces(&self) -> Region<T> {
        let pieces = (0..self.rows.len())
            .map(|j| {
                self.as_semiclosed()
                    .with(LinConstraint::lt(self.rows[j].clone(), T::zero()))
            })
            .filter(|p| !p.is_empty())
            .collect();
        Region::new(self.dim, pieces)
    }

    pub fn generators(&self) -> VPolyhedron<T> {
        self.as_polyhedron().to_generators()
    }

    /// Coordinates of `π(y)` in the `Y1` basis.
    pub fn to_y1(&self, y: &[T]) -> Vec<T> {
        self.y1_coords.mul_vec(y)
    }

    /// `π(y) ∈ K1 ∖ {0}`, decided in `Y1` coordinates.
    pub fn quotient_check(&self, y: &[T]) -> bool {
        let z = self.to_y1(y);
        let in_k1 = self.k1_rows.iter().all(|r| !dot(r, &z).is_positive());
        in_k1 && !is_zero_vec(&z)
    }

    /// The pointed part `K1` as a cone on `Y1` coordinates.
    pub fn pointed_part(&self) -> Result<OrderingCone<T>> {
        OrderingCone::build(self.y1.dim(), self.k1_rows.clone())
    }

    /// Checks `(K∖ℓ(K)) + K ⊆ K∖ℓ(K)` on the pairs whose first entry is in
    /// `K∖ℓ(K)` and `int K + K ⊆ int K` on the pairs whose first entry is in
    /// `int K`; pairs whose second entry lies outside `K` are ignored.
    pub fn translation_invariance_check(&self, pairs: &[(Vec<T>, Vec<T>)]) -> bool {
        pairs.iter().all(|(w, k)| {
            if !self.in_k(k) {
                return true;
            }
            let s: Vec<T> = w
                .iter()
                .zip(k)
                .map(|(a, b)| a.clone() + b.clone())
                .collect();
            (!self.in_k_minus_l(w) || self.in_k_minus_l(&s)) && (!self.in_int(w) || self.in_int(&s))
        })
    }

    /// Largest value of `⟨a, k⟩` over `k ∈ K` is zero, i.e. `a` lies in the
    /// cone spanned by the rows.
    pub fn in_polar(&self, a: &[T]) -> bool {
        let probe = self
            .as_semiclosed()
            .with(LinConstraint::gt(a.to_vec(), T::zero()));
        probe.is_empty()
    }

    /// Unit-free zero vector of the ambient space.
    pub fn origin(&self) -> Vec<T> {
        zeros(self.dim)
    }
}
