//! Exact scalar substrate: vectors, matrices, linear constraints, linear
//! algebra and a simplex LP that also decides strict systems.
//!
//! Everything here is generic over [`Scalar`]. The crate is meant to be used
//! with [`crate::Rat`]; any other field type works as long as its arithmetic
//! is exact (machine floats compile, but comparisons against zero are taken
//! literally).

mod linalg;
mod lp;

use std::fmt;

use num_traits::{FromPrimitive, Signed};

pub use linalg::{kernel, rank, solve_linear, LinearSolution, Subspace};
pub use lp::{lp_count, lp_optimize, strict_feasible, Feasibility, LpOutcome, Sense};

/// Field element used by every geometric routine.
pub trait Scalar:
    Clone + PartialOrd + fmt::Debug + fmt::Display + Signed + FromPrimitive + Send + Sync + 'static
{
}

impl<T> Scalar for T where
    T: Clone
        + PartialOrd
        + fmt::Debug
        + fmt::Display
        + Signed
        + FromPrimitive
        + Send
        + Sync
        + 'static
{
}

pub fn from_int<T: Scalar>(v: i64) -> T {
    T::from_i64(v).expect("scalar type must represent small integers")
}

pub fn dot<T: Scalar>(a: &[T], b: &[T]) -> T {
    debug_assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .fold(T::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
}

pub fn vec_add<T: Scalar>(a: &[T], b: &[T]) -> Vec<T> {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.clone() + y.clone())
        .collect()
}

pub fn vec_sub<T: Scalar>(a: &[T], b: &[T]) -> Vec<T> {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.clone() - y.clone())
        .collect()
}

pub fn vec_scale<T: Scalar>(a: &[T], s: &T) -> Vec<T> {
    a.iter().map(|x| x.clone() * s.clone()).collect()
}

pub fn vec_neg<T: Scalar>(a: &[T]) -> Vec<T> {
    a.iter().map(|x| -x.clone()).collect()
}

pub fn is_zero_vec<T: Scalar>(a: &[T]) -> bool {
    a.iter().all(|x| x.is_zero())
}

pub fn zeros<T: Scalar>(n: usize) -> Vec<T> {
    vec![T::zero(); n]
}

pub fn unit<T: Scalar>(n: usize, i: usize) -> Vec<T> {
    let mut v = zeros(n);
    v[i] = T::one();
    v
}

/// Scales `v` by a positive factor so that its first nonzero entry is ±1.
/// Returns the divisor used (zero for a zero vector, which is left as is).
pub fn normalize_direction<T: Scalar>(v: &mut [T]) -> T {
    let Some(lead) = v.iter().find(|x| !x.is_zero()).map(|x| x.abs()) else {
        return T::zero();
    };
    if !lead.is_one() {
        for x in v.iter_mut() {
            *x = x.clone() / lead.clone();
        }
    }
    lead
}

/// Dense row-major matrix with explicit shape (so that 0×n maps are representable).
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<T> {
    nrows: usize,
    ncols: usize,
    rows: Vec<Vec<T>>,
}

impl<T: Scalar> Matrix<T> {
    /// Builds a matrix from rows; every row must have length `ncols`.
    pub fn from_rows(ncols: usize, rows: Vec<Vec<T>>) -> Self {
        assert!(
            rows.iter().all(|r| r.len() == ncols),
            "matrix rows must all have length {ncols}"
        );
        Matrix {
            nrows: rows.len(),
            ncols,
            rows,
        }
    }

    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        Matrix {
            nrows,
            ncols,
            rows: vec![zeros(ncols); nrows],
        }
    }

    pub fn identity(n: usize) -> Self {
        Matrix {
            nrows: n,
            ncols: n,
            rows: (0..n).map(|i| unit(n, i)).collect(),
        }
    }

    /// Matrix whose columns are the given vectors (each of length `nrows`).
    pub fn from_columns(nrows: usize, cols: &[Vec<T>]) -> Self {
        let rows = (0..nrows)
            .map(|i| cols.iter().map(|c| c[i].clone()).collect())
            .collect();
        Matrix {
            nrows,
            ncols: cols.len(),
            rows,
        }
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rows(&self) -> &[Vec<T>] {
        &self.rows
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.rows[i]
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.rows[i][j]
    }

    pub fn column(&self, j: usize) -> Vec<T> {
        self.rows.iter().map(|r| r[j].clone()).collect()
    }

    pub fn mul_vec(&self, x: &[T]) -> Vec<T> {
        assert_eq!(x.len(), self.ncols, "matrix-vector shape mismatch");
        self.rows.iter().map(|r| dot(r, x)).collect()
    }

    /// Row vector times matrix: `aᵀ M`.
    pub fn left_mul(&self, a: &[T]) -> Vec<T> {
        assert_eq!(a.len(), self.nrows, "vector-matrix shape mismatch");
        (0..self.ncols)
            .map(|j| {
                a.iter()
                    .zip(&self.rows)
                    .fold(T::zero(), |acc, (ai, r)| acc + ai.clone() * r[j].clone())
            })
            .collect()
    }

    pub fn mul(&self, other: &Matrix<T>) -> Matrix<T> {
        assert_eq!(self.ncols, other.nrows, "matrix product shape mismatch");
        let rows = self.rows.iter().map(|r| other.left_mul(r)).collect();
        Matrix {
            nrows: self.nrows,
            ncols: other.ncols,
            rows,
        }
    }

    pub fn transpose(&self) -> Matrix<T> {
        Matrix::from_columns(self.ncols, &self.rows)
    }

    pub fn sub(&self, other: &Matrix<T>) -> Matrix<T> {
        assert_eq!((self.nrows, self.ncols), (other.nrows, other.ncols));
        let rows = self
            .rows
            .iter()
            .zip(&other.rows)
            .map(|(a, b)| vec_sub(a, b))
            .collect();
        Matrix {
            nrows: self.nrows,
            ncols: self.ncols,
            rows,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(|r| is_zero_vec(r))
    }
}

/// Relation of a single linear row `⟨a, x⟩ rel b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Relation {
    Eq,
    Le,
    Lt,
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Relation::Eq => "=",
            Relation::Le => "<=",
            Relation::Lt => "<",
        })
    }
}

/// One linear row `⟨coeffs, x⟩ rel rhs`.
#[derive(Clone, Debug, PartialEq)]
pub struct LinConstraint<T> {
    pub coeffs: Vec<T>,
    pub rhs: T,
    pub rel: Relation,
}

impl<T: Scalar> LinConstraint<T> {
    pub fn new(coeffs: Vec<T>, rel: Relation, rhs: T) -> Self {
        LinConstraint { coeffs, rhs, rel }
    }

    pub fn eq(coeffs: Vec<T>, rhs: T) -> Self {
        Self::new(coeffs, Relation::Eq, rhs)
    }

    pub fn le(coeffs: Vec<T>, rhs: T) -> Self {
        Self::new(coeffs, Relation::Le, rhs)
    }

    pub fn lt(coeffs: Vec<T>, rhs: T) -> Self {
        Self::new(coeffs, Relation::Lt, rhs)
    }

    /// `⟨a, x⟩ ≥ b`, stored as `⟨−a, x⟩ ≤ −b`.
    pub fn ge(coeffs: Vec<T>, rhs: T) -> Self {
        Self::le(vec_neg(&coeffs), -rhs)
    }

    /// `⟨a, x⟩ > b`, stored as `⟨−a, x⟩ < −b`.
    pub fn gt(coeffs: Vec<T>, rhs: T) -> Self {
        Self::lt(vec_neg(&coeffs), -rhs)
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    pub fn eval(&self, x: &[T]) -> T {
        dot(&self.coeffs, x)
    }

    pub fn holds(&self, x: &[T]) -> bool {
        let lhs = self.eval(x);
        match self.rel {
            Relation::Eq => lhs == self.rhs,
            Relation::Le => lhs <= self.rhs,
            Relation::Lt => lhs < self.rhs,
        }
    }

    pub fn is_strict(&self) -> bool {
        self.rel == Relation::Lt
    }

    /// The same row with `<` relaxed to `≤`.
    pub fn relaxed(&self) -> Self {
        let rel = if self.rel == Relation::Lt {
            Relation::Le
        } else {
            self.rel
        };
        LinConstraint::new(self.coeffs.clone(), rel, self.rhs.clone())
    }

    /// Rows whose union is the complement of this row.
    pub fn negation(&self) -> Vec<LinConstraint<T>> {
        match self.rel {
            Relation::Le => vec![Self::gt(self.coeffs.clone(), self.rhs.clone())],
            Relation::Lt => vec![Self::ge(self.coeffs.clone(), self.rhs.clone())],
            Relation::Eq => vec![
                Self::lt(self.coeffs.clone(), self.rhs.clone()),
                Self::gt(self.coeffs.clone(), self.rhs.clone()),
            ],
        }
    }

    /// Positive rescaling so the first nonzero coefficient is ±1.
    pub fn normalized(&self) -> Self {
        let mut coeffs = self.coeffs.clone();
        let lead = normalize_direction(&mut coeffs);
        if lead.is_zero() {
            return self.clone();
        }
        let mut rhs = self.rhs.clone() / lead;
        if self.rel == Relation::Eq && coeffs.iter().find(|c| !c.is_zero()).unwrap().is_negative() {
            coeffs = vec_neg(&coeffs);
            rhs = -rhs;
        }
        LinConstraint::new(coeffs, self.rel, rhs)
    }

    /// Substitutes `x = T u + b`: the returned row lives on `u`.
    pub fn substitute(&self, map: &Matrix<T>, offset: &[T]) -> Self {
        LinConstraint::new(
            map.left_mul(&self.coeffs),
            self.rel,
            self.rhs.clone() - dot(&self.coeffs, offset),
        )
    }

    /// Degenerate row with zero coefficients: `Some(true)` if it always
    /// holds, `Some(false)` if never, `None` if the row is not degenerate.
    pub fn trivial_truth(&self) -> Option<bool> {
        if !is_zero_vec(&self.coeffs) {
            return None;
        }
        let zero = T::zero();
        Some(match self.rel {
            Relation::Eq => self.rhs == zero,
            Relation::Le => zero <= self.rhs,
            Relation::Lt => zero < self.rhs,
        })
    }

    /// Embeds the row into a larger variable space: coefficient `i` moves to `positions[i]`.
    pub fn embed(&self, dim: usize, positions: &[usize]) -> Self {
        let mut coeffs = zeros(dim);
        for (c, &p) in self.coeffs.iter().zip(positions) {
            coeffs[p] = c.clone();
        }
        LinConstraint::new(coeffs, self.rel, self.rhs.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rat;

    fn r(n: i64) -> Rat {
        from_int(n)
    }

    #[test]
    fn negation_of_equality_gives_two_strict_rows() {
        let row = LinConstraint::eq(vec![r(1), r(0)], r(2));
        let neg = row.negation();
        assert_eq!(neg.len(), 2);
        assert!(neg.iter().all(|n| n.is_strict()));
        assert!(neg[0].holds(&[r(1), r(0)]));
        assert!(neg[1].holds(&[r(3), r(0)]));
        assert!(!neg[0].holds(&[r(2), r(0)]) && !neg[1].holds(&[r(2), r(0)]));
    }

    #[test]
    fn substitution_matches_direct_evaluation() {
        // y1 <= 0 pulled back along (t1, t2) -> (t1 - t2, t2)
        let row = LinConstraint::le(vec![r(1), r(0)], r(0));
        let map = Matrix::from_rows(2, vec![vec![r(1), r(-1)], vec![r(0), r(1)]]);
        let pulled = row.substitute(&map, &[r(0), r(0)]);
        assert_eq!(pulled.coeffs, vec![r(1), r(-1)]);
        for (a, b) in [(0, 0), (1, 2), (3, 1), (-2, -5)] {
            let x = [r(a), r(b)];
            assert_eq!(pulled.holds(&x), row.holds(&map.mul_vec(&x)));
        }
    }

    #[test]
    fn normalized_keeps_direction() {
        let row = LinConstraint::le(vec![r(-4), r(2)], r(6));
        let n = row.normalized();
        assert_eq!(n.coeffs, vec![r(-1), Rat::new(1.into(), 2.into())]);
        assert_eq!(n.rhs, Rat::new(3.into(), 2.into()));
    }
}
