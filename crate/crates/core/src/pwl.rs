//! Continuous piecewise affine maps `f(x) = T_k x + b_k` on `x ∈ P_k`, and the
//! problem `Min_K { f(x) | x ∈ D }` built from them.

use crate::cone::OrderingCone;
use crate::error::{Error, Result};
use crate::exactmath::{dot, vec_add, vec_sub, LinConstraint, Matrix, Scalar};
use crate::polyhedron::{consolidate_union, HPolyhedron, Union, VPolyhedron};
use crate::semiclosed::{Region, SemiClosedPolyhedron};

#[derive(Clone, Debug, PartialEq)]
pub struct Piece<T> {
    pub domain: HPolyhedron<T>,
    pub map: Matrix<T>,
    pub offset: Vec<T>,
}

impl<T: Scalar> Piece<T> {
    pub fn apply(&self, x: &[T]) -> Vec<T> {
        vec_add(&self.map.mul_vec(x), &self.offset)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PiecewiseLinearFn<T> {
    pub source_dim: usize,
    pub image_dim: usize,
    pub pieces: Vec<Piece<T>>,
}

impl<T: Scalar> PiecewiseLinearFn<T> {
    pub fn new(source_dim: usize, image_dim: usize, pieces: Vec<Piece<T>>) -> Result<Self> {
        if pieces.is_empty() {
            return Err(Error::DimensionMismatch(
                "a function needs at least one piece".into(),
            ));
        }
        for (k, p) in pieces.iter().enumerate() {
            if p.domain.dim != source_dim
                || p.map.ncols() != source_dim
                || p.map.nrows() != image_dim
                || p.offset.len() != image_dim
            {
                return Err(Error::DimensionMismatch(format!(
                    "piece {k}: expected domain dim {source_dim} and a {image_dim}x{source_dim} map"
                )));
            }
        }
        Ok(PiecewiseLinearFn {
            source_dim,
            image_dim,
            pieces,
        })
    }

    /// A single affine piece on the whole space.
    pub fn affine(map: Matrix<T>, offset: Vec<T>) -> Self {
        let (m, n) = (map.nrows(), map.ncols());
        PiecewiseLinearFn {
            source_dim: n,
            image_dim: m,
            pieces: vec![Piece {
                domain: HPolyhedron::whole(n),
                map,
                offset,
            }],
        }
    }

    /// Value at `x`, taken from the first piece containing it.
    pub fn eval(&self, x: &[T]) -> Option<Vec<T>> {
        self.pieces
            .iter()
            .find(|p| p.domain.contains(x))
            .map(|p| p.apply(x))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Problem<T> {
    pub f: PiecewiseLinearFn<T>,
    pub feasible: HPolyhedron<T>,
    pub cone: OrderingCone<T>,
}

impl<T: Scalar> Problem<T> {
    pub fn new(
        f: PiecewiseLinearFn<T>,
        feasible: HPolyhedron<T>,
        cone: OrderingCone<T>,
    ) -> Result<Self> {
        if feasible.dim != f.source_dim {
            return Err(Error::DimensionMismatch(format!(
                "feasible set has dim {}, function source dim {}",
                feasible.dim, f.source_dim
            )));
        }
        if cone.dim() != f.image_dim {
            return Err(Error::DimensionMismatch(format!(
                "cone has dim {}, function image dim {}",
                cone.dim(),
                f.image_dim
            )));
        }
        Ok(Problem { f, feasible, cone })
    }

    /// `D ∩ P_k`.
    pub fn cell(&self, k: usize) -> HPolyhedron<T> {
        self.feasible.intersect(&self.f.pieces[k].domain)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum CoverCheck<T> {
    Ok,
    Gap(Vec<T>),
}

#[derive(Clone, Debug, PartialEq)]
pub enum ConsistencyCheck<T> {
    Ok,
    Mismatch { k: usize, l: usize, witness: Vec<T> },
}

#[derive(Clone, Debug, PartialEq)]
pub enum KCheck<T> {
    Yes,
    /// Along cone row `row`, the affine part of piece `l` drops below the
    /// function at `point ∈ D ∩ P_k`; `anchor` is a relative-interior point
    /// of `D ∩ P_l`. Concavity fails on the segment between them.
    No {
        row: usize,
        k: usize,
        l: usize,
        point: Vec<T>,
        anchor: Vec<T>,
    },
}

impl<T> KCheck<T> {
    pub fn is_yes(&self) -> bool {
        matches!(self, KCheck::Yes)
    }
}

/// The pieces must cover the whole source space.
pub fn validate_cover<T: Scalar>(f: &PiecewiseLinearFn<T>) -> CoverCheck<T> {
    let cover = Region::new(
        f.source_dim,
        f.pieces
            .iter()
            .map(|p| SemiClosedPolyhedron::from(p.domain.clone()))
            .collect(),
    );
    match Region::whole(f.source_dim).difference(&cover).witness() {
        None => CoverCheck::Ok,
        Some(w) => CoverCheck::Gap(w),
    }
}

/// Affine maps of overlapping pieces must agree on the overlap; checked on
/// the generators of every pairwise intersection.
pub fn validate_consistency<T: Scalar>(f: &PiecewiseLinearFn<T>) -> ConsistencyCheck<T> {
    for k in 0..f.pieces.len() {
        for l in k + 1..f.pieces.len() {
            let (pk, pl) = (&f.pieces[k], &f.pieces[l]);
            let gens = pk.domain.intersect(&pl.domain).to_generators();
            if gens.is_empty() {
                continue;
            }
            let dt = pk.map.sub(&pl.map);
            let db = vec_sub(&pl.offset, &pk.offset);
            if let Some(p) = gens.points.iter().find(|p| dt.mul_vec(p) != db) {
                return ConsistencyCheck::Mismatch {
                    k,
                    l,
                    witness: p.clone(),
                };
            }
            let base = &gens.points[0];
            let bad_dir = gens
                .rays
                .iter()
                .chain(gens.lineality.basis())
                .find(|r| !dt.mul_vec(r).iter().all(|c| c.is_zero()));
            if let Some(r) = bad_dir {
                return ConsistencyCheck::Mismatch {
                    k,
                    l,
                    witness: vec_add(base, r),
                };
            }
        }
    }
    ConsistencyCheck::Ok
}

pub fn eval<T: Scalar>(f: &PiecewiseLinearFn<T>, x: &[T]) -> Option<Vec<T>> {
    f.eval(x)
}

/// Relative-interior point of a nonempty closed polyhedron.
fn relative_interior_point<T: Scalar>(p: &HPolyhedron<T>) -> Option<Vec<T>> {
    let n = SemiClosedPolyhedron::from(p.clone()).normalize();
    let strictified = SemiClosedPolyhedron::from_constraints(
        n.dim,
        n.equalities.iter().cloned().chain(
            n.closed
                .iter()
                .map(|r| LinConstraint::lt(r.coeffs.clone(), r.rhs.clone())),
        ),
    );
    strictified.witness()
}

/// Decides whether `f` is a `K`-function on `D`.
///
/// With `h_j = ⟨y_j*, f⟩`, `f` is a `K`-function iff every `h_j` is concave on
/// `D`. A continuous piecewise affine `h` is concave on `D` iff each affine
/// part that is active on a full-dimensional cell of `D` majorizes `h` on all
/// of `D`; one strict LP per (row, cell, full-dimensional cell) decides it.
pub fn is_k_function<T: Scalar>(problem: &Problem<T>) -> Result<KCheck<T>> {
    let d = &problem.feasible;
    let Some(d_dim) = d.affine_dim() else {
        return Err(Error::EmptyFeasible);
    };
    let pieces = &problem.f.pieces;
    let cells: Vec<HPolyhedron<T>> = (0..pieces.len()).map(|k| problem.cell(k)).collect();
    let full: Vec<usize> = (0..pieces.len())
        .filter(|&k| cells[k].affine_dim() == Some(d_dim))
        .collect();
    for (j, y) in problem.cone.rows().iter().enumerate() {
        // h_{j,k}(x) = ⟨y, T_k x⟩ + ⟨y, b_k⟩
        let affine: Vec<(Vec<T>, T)> = pieces
            .iter()
            .map(|p| (p.map.left_mul(y), dot(y, &p.offset)))
            .collect();
        for k in 0..pieces.len() {
            if cells[k].is_empty() {
                continue;
            }
            for &l in &full {
                if l == k {
                    continue;
                }
                // h_l(x) - h_k(x) < 0 somewhere on D ∩ P_k ?
                let coeffs = vec_sub(&affine[l].0, &affine[k].0);
                let rhs = affine[k].1.clone() - affine[l].1.clone();
                let probe = SemiClosedPolyhedron::from(cells[k].clone())
                    .with(LinConstraint::lt(coeffs, rhs));
                if let Some(point) = probe.witness() {
                    let anchor = relative_interior_point(&cells[l])
                        .expect("full-dimensional cell is nonempty");
                    return Ok(KCheck::No {
                        row: j,
                        k,
                        l,
                        point,
                        anchor,
                    });
                }
            }
        }
    }
    Ok(KCheck::Yes)
}

/// `M_k = T_k(D ∩ P_k) + b_k`; empty cells give empty entries.
pub fn image_pieces<T: Scalar>(problem: &Problem<T>) -> Vec<VPolyhedron<T>> {
    (0..problem.f.pieces.len())
        .map(|k| {
            let p = &problem.f.pieces[k];
            problem
                .cell(k)
                .to_generators()
                .affine_image(&p.map, &p.offset)
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct ImagePlusCone<T> {
    /// `M_k + K` in half-space form, one per piece (empty pieces kept).
    pub pieces: Vec<HPolyhedron<T>>,
    /// `f(D) + K` as one polyhedron, present when consolidation was requested.
    pub consolidated: Option<HPolyhedron<T>>,
}

/// The sets `M_k + K`; with `convex` set, also their union as one polyhedron.
pub fn image_plus_cone<T: Scalar>(
    problem: &Problem<T>,
    ms: &[VPolyhedron<T>],
    convex: bool,
) -> Result<ImagePlusCone<T>> {
    let k_gens = problem.cone.generators();
    let dim = problem.f.image_dim;
    let pieces: Vec<HPolyhedron<T>> = ms
        .iter()
        .map(|m| {
            if m.is_empty() {
                HPolyhedron::empty(dim)
            } else {
                m.minkowski_sum(&k_gens).to_halfspaces()
            }
        })
        .collect();
    let consolidated = if convex {
        let nonempty: Vec<HPolyhedron<T>> =
            pieces.iter().filter(|p| !p.is_empty()).cloned().collect();
        match consolidate_union(dim, &nonempty) {
            Union::Single(h) => Some(h),
            Union::NotConvex => return Err(Error::ConsolidationFailed),
        }
    } else {
        None
    };
    Ok(ImagePlusCone {
        pieces,
        consolidated,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::from_int;
    use crate::Rat;

    fn r(n: i64) -> Rat {
        from_int(n)
    }

    fn v(xs: &[i64]) -> Vec<Rat> {
        xs.iter().map(|&x| r(x)).collect()
    }

    fn m(rows: &[[i64; 2]]) -> Matrix<Rat> {
        Matrix::from_rows(2, rows.iter().map(|row| v(row)).collect())
    }

    fn upper() -> HPolyhedron<Rat> {
        HPolyhedron::whole(2).with_ge(v(&[0, 1]), r(0))
    }

    fn lower() -> HPolyhedron<Rat> {
        HPolyhedron::whole(2).with_le(v(&[0, 1]), r(0))
    }

    fn problem(map_up: [[i64; 2]; 2], map_down: [[i64; 2]; 2]) -> Problem<Rat> {
        let f = PiecewiseLinearFn::new(
            2,
            2,
            vec![
                Piece {
                    domain: upper(),
                    map: m(&map_up),
                    offset: v(&[0, 0]),
                },
                Piece {
                    domain: lower(),
                    map: m(&map_down),
                    offset: v(&[0, 0]),
                },
            ],
        )
        .unwrap();
        let d = HPolyhedron::whole(2)
            .with_le(v(&[1, 0]), r(0))
            .with_le(v(&[0, 1]), r(1));
        let k = OrderingCone::build(2, vec![v(&[1, 0]), v(&[0, 1])]).unwrap();
        Problem::new(f, d, k).unwrap()
    }

    fn fixture_a() -> Problem<Rat> {
        problem([[1, -1], [0, 1]], [[1, 1], [0, 1]])
    }

    fn fixture_b() -> Problem<Rat> {
        problem([[1, 1], [0, 1]], [[1, -1], [0, 1]])
    }

    #[test]
    fn cover_examples() {
        assert_eq!(validate_cover(&fixture_a().f), CoverCheck::Ok);
        let half = PiecewiseLinearFn::new(
            2,
            2,
            vec![Piece {
                domain: upper(),
                map: Matrix::identity(2),
                offset: v(&[0, 0]),
            }],
        )
        .unwrap();
        match validate_cover(&half) {
            CoverCheck::Gap(w) => assert!(w[1] < r(0)),
            CoverCheck::Ok => panic!("half plane does not cover"),
        }
        let lin = PiecewiseLinearFn::affine(Matrix::<Rat>::identity(2), v(&[0, 0]));
        assert_eq!(validate_cover(&lin), CoverCheck::Ok);
    }

    #[test]
    fn consistency_examples() {
        let mut f = fixture_a().f;
        assert_eq!(validate_consistency(&f), ConsistencyCheck::Ok);
        f.pieces[1].offset = v(&[1, 0]);
        match validate_consistency(&f) {
            ConsistencyCheck::Mismatch { witness, .. } => assert_eq!(witness[1], r(0)),
            ConsistencyCheck::Ok => panic!("offset change breaks agreement"),
        }
        let disjoint = PiecewiseLinearFn::new(
            1,
            1,
            vec![
                Piece {
                    domain: HPolyhedron::whole(1).with_le(v(&[1]), r(0)),
                    map: Matrix::identity(1),
                    offset: v(&[0]),
                },
                Piece {
                    domain: HPolyhedron::whole(1).with_ge(v(&[1]), r(1)),
                    map: Matrix::identity(1),
                    offset: v(&[5]),
                },
            ],
        )
        .unwrap();
        assert_eq!(validate_consistency(&disjoint), ConsistencyCheck::Ok);
    }

    #[test]
    fn evaluation() {
        let half = Rat::new(1.into(), 2.into());
        let a = fixture_a();
        assert_eq!(
            a.f.eval(&[r(-1), half.clone()]).unwrap(),
            vec![Rat::new((-3).into(), 2.into()), half]
        );
        assert_eq!(a.f.eval(&v(&[-1, 0])).unwrap(), v(&[-1, 0]));
        assert_eq!(fixture_b().f.eval(&v(&[0, -2])).unwrap(), v(&[2, -2]));
    }

    #[test]
    fn k_function_verdicts() {
        assert!(is_k_function(&fixture_a()).unwrap().is_yes());
        match is_k_function(&fixture_b()).unwrap() {
            KCheck::No { row, .. } => assert_eq!(row, 0),
            KCheck::Yes => panic!("fixture B is not a K-function"),
        }
        let mut lin = fixture_a();
        lin.f = PiecewiseLinearFn::affine(Matrix::identity(2), v(&[0, 0]));
        assert!(is_k_function(&lin).unwrap().is_yes());
        let mut empty = fixture_a();
        empty.feasible = HPolyhedron::empty(2);
        assert_eq!(is_k_function(&empty), Err(Error::EmptyFeasible));
    }

    #[test]
    fn image_plus_cone_consolidation() {
        let a = fixture_a();
        let ms = image_pieces(&a);
        let q = image_plus_cone(&a, &ms, true)
            .unwrap()
            .consolidated
            .unwrap();
        let expected = HPolyhedron::whole(2)
            .with_le(v(&[1, 0]), r(0))
            .with_le(v(&[0, 1]), r(1))
            .with_le(v(&[1, 1]), r(0));
        assert!(q.inclusion_check(&expected) && expected.inclusion_check(&q));

        let b = fixture_b();
        let ms = image_pieces(&b);
        let parts = image_plus_cone(&b, &ms, false).unwrap().pieces;
        assert_eq!(consolidate_union(2, &parts), Union::NotConvex);
    }

    #[test]
    fn empty_feasible_set_gives_empty_images() {
        let mut a = fixture_a();
        a.feasible = HPolyhedron::empty(2);
        assert!(image_pieces(&a).iter().all(|m| m.is_empty()));
    }
}
