use super::{dot, is_zero_vec, unit, zeros, Matrix, Scalar};

/// Reduced row echelon form. Returns the nonzero reduced rows and their pivot columns.
pub(crate) fn rref<T: Scalar>(mut rows: Vec<Vec<T>>, ncols: usize) -> (Vec<Vec<T>>, Vec<usize>) {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = T::one() / rows[r][c].clone();
        for x in rows[r].iter_mut() {
            *x = x.clone() * inv.clone();
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                for j in 0..rows[i].len() {
                    let v = rows[r][j].clone() * f.clone();
                    rows[i][j] = rows[i][j].clone() - v;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    (rows, pivots)
}

pub fn rank<T: Scalar>(vectors: &[Vec<T>]) -> usize {
    match vectors.first() {
        None => 0,
        Some(v) => rref(vectors.to_vec(), v.len()).1.len(),
    }
}

/// Outcome of [`solve_linear`].
#[derive(Clone, Debug, PartialEq)]
pub enum LinearSolution<T> {
    Solution {
        particular: Vec<T>,
        kernel: Subspace<T>,
    },
    Inconsistent,
}

/// Solves `A x = b` exactly.
pub fn solve_linear<T: Scalar>(a: &Matrix<T>, b: &[T]) -> LinearSolution<T> {
    assert_eq!(a.nrows(), b.len(), "right-hand side length mismatch");
    let n = a.ncols();
    let aug: Vec<Vec<T>> = a
        .rows()
        .iter()
        .zip(b)
        .map(|(r, bi)| {
            let mut row = r.clone();
            row.push(bi.clone());
            row
        })
        .collect();
    let (red, pivots) = rref(aug, n + 1);
    if pivots.last() == Some(&n) {
        return LinearSolution::Inconsistent;
    }
    let mut particular = zeros(n);
    for (row, &p) in red.iter().zip(&pivots) {
        particular[p] = row[n].clone();
    }
    LinearSolution::Solution {
        particular,
        kernel: kernel_from_rref(&red, &pivots, n),
    }
}

fn kernel_from_rref<T: Scalar>(red: &[Vec<T>], pivots: &[usize], n: usize) -> Subspace<T> {
    let mut basis = Vec::new();
    for free in (0..n).filter(|c| !pivots.contains(c)) {
        let mut v = unit(n, free);
        for (row, &p) in red.iter().zip(pivots) {
            v[p] = -row[free].clone();
        }
        basis.push(v);
    }
    Subspace {
        ambient_dim: n,
        basis,
    }
}

/// Null space `{x : A x = 0}`.
pub fn kernel<T: Scalar>(a: &Matrix<T>) -> Subspace<T> {
    let n = a.ncols();
    let (red, pivots) = rref(a.rows().to_vec(), n);
    kernel_from_rref(&red, &pivots, n)
}

/// Linear subspace given by a basis of linearly independent vectors.
#[derive(Clone, Debug, PartialEq)]
pub struct Subspace<T> {
    ambient_dim: usize,
    basis: Vec<Vec<T>>,
}

impl<T: Scalar> Subspace<T> {
    pub fn zero(ambient_dim: usize) -> Self {
        Subspace {
            ambient_dim,
            basis: Vec::new(),
        }
    }

    pub fn full(ambient_dim: usize) -> Self {
        Subspace {
            ambient_dim,
            basis: (0..ambient_dim).map(|i| unit(ambient_dim, i)).collect(),
        }
    }

    /// Span of arbitrary vectors; keeps the first maximal independent subset in input order.
    pub fn span(ambient_dim: usize, vectors: impl IntoIterator<Item = Vec<T>>) -> Self {
        let mut s = Subspace::zero(ambient_dim);
        for v in vectors {
            s.try_push(v);
        }
        s
    }

    fn try_push(&mut self, v: Vec<T>) -> bool {
        assert_eq!(v.len(), self.ambient_dim, "vector length mismatch");
        if is_zero_vec(&v) || self.contains(&v) {
            return false;
        }
        self.basis.push(v);
        true
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<T>] {
        &self.basis
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn contains(&self, v: &[T]) -> bool {
        if is_zero_vec(v) {
            return true;
        }
        if self.basis.is_empty() {
            return false;
        }
        let mut rows = self.basis.clone();
        rows.push(v.to_vec());
        rank(&rows) == self.basis.len()
    }

    /// Complement spanned by the first standard basis vectors independent of `self`.
    pub fn complement(&self) -> Subspace<T> {
        let mut all = self.clone();
        let mut out = Subspace::zero(self.ambient_dim);
        for i in 0..self.ambient_dim {
            if all.dim() == self.ambient_dim {
                break;
            }
            let e = unit(self.ambient_dim, i);
            if all.try_push(e.clone()) {
                out.basis.push(e);
            }
        }
        out
    }

    pub fn sum(&self, other: &Subspace<T>) -> Subspace<T> {
        Subspace::span(
            self.ambient_dim,
            self.basis.iter().chain(&other.basis).cloned(),
        )
    }

    /// Vectors orthogonal to every basis vector.
    pub fn orthogonal(&self) -> Subspace<T> {
        if self.basis.is_empty() {
            return Subspace::full(self.ambient_dim);
        }
        kernel(&Matrix::from_rows(self.ambient_dim, self.basis.clone()))
    }

    pub fn image(&self, map: &Matrix<T>) -> Subspace<T> {
        Subspace::span(map.nrows(), self.basis.iter().map(|b| map.mul_vec(b)))
    }

    /// True iff `v` is orthogonal to the whole subspace.
    pub fn annihilated_by(&self, v: &[T]) -> bool {
        self.basis.iter().all(|b| dot(b, v).is_zero())
    }
}
