//! Closed polyhedra in half-space form and generator form.

mod dd;

use crate::exactmath::{
    from_int, is_zero_vec, lp_optimize, normalize_direction, rank, strict_feasible, vec_add,
    vec_sub, zeros, LinConstraint, LpOutcome, Matrix, Relation, Scalar, Sense, Subspace,
};
use crate::semiclosed::{Region, SemiClosedPolyhedron};

/// `{x : ⟨aᵢ, x⟩ = bᵢ, ⟨cⱼ, x⟩ ≤ dⱼ}`.
#[derive(Clone, Debug, PartialEq)]
pub struct HPolyhedron<T> {
    pub dim: usize,
    pub equalities: Vec<LinConstraint<T>>,
    pub inequalities: Vec<LinConstraint<T>>,
}

impl<T: Scalar> HPolyhedron<T> {
    /// The whole space (no rows).
    pub fn whole(dim: usize) -> Self {
        HPolyhedron {
            dim,
            equalities: Vec::new(),
            inequalities: Vec::new(),
        }
    }

    /// Canonical empty set `0·x ≤ −1`.
    pub fn empty(dim: usize) -> Self {
        HPolyhedron {
            dim,
            equalities: Vec::new(),
            inequalities: vec![LinConstraint::le(zeros(dim), from_int(-1))],
        }
    }

    /// Builds from mixed rows; strict rows are rejected by panicking.
    pub fn from_constraints(dim: usize, rows: impl IntoIterator<Item = LinConstraint<T>>) -> Self {
        let mut p = HPolyhedron::whole(dim);
        for row in rows {
            p.push(row);
        }
        p
    }

    pub fn push(&mut self, row: LinConstraint<T>) {
        assert_eq!(row.dim(), self.dim, "row length must equal the dimension");
        match row.rel {
            Relation::Eq => self.equalities.push(row),
            Relation::Le => self.inequalities.push(row),
            Relation::Lt => panic!("closed polyhedra carry no strict rows"),
        }
    }

    pub fn with_le(mut self, coeffs: Vec<T>, rhs: T) -> Self {
        self.push(LinConstraint::le(coeffs, rhs));
        self
    }

    pub fn with_ge(mut self, coeffs: Vec<T>, rhs: T) -> Self {
        self.push(LinConstraint::ge(coeffs, rhs));
        self
    }

    pub fn with_eq(mut self, coeffs: Vec<T>, rhs: T) -> Self {
        self.push(LinConstraint::eq(coeffs, rhs));
        self
    }

    pub fn constraints(&self) -> Vec<LinConstraint<T>> {
        self.equalities
            .iter()
            .chain(&self.inequalities)
            .cloned()
            .collect()
    }

    pub fn contains(&self, x: &[T]) -> bool {
        self.equalities
            .iter()
            .chain(&self.inequalities)
            .all(|r| r.holds(x))
    }

    pub fn is_empty(&self) -> bool {
        strict_feasible(self.dim, &self.constraints()).is_empty()
    }

    pub fn interior_witness(&self) -> Option<Vec<T>> {
        strict_feasible(self.dim, &self.constraints()).witness()
    }

    pub fn intersect(&self, other: &HPolyhedron<T>) -> HPolyhedron<T> {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        HPolyhedron {
            dim: self.dim,
            equalities: self
                .equalities
                .iter()
                .chain(&other.equalities)
                .cloned()
                .collect(),
            inequalities: self
                .inequalities
                .iter()
                .chain(&other.inequalities)
                .cloned()
                .collect(),
        }
    }

    /// Decides `self ⊆ other` by maximizing every row of `other` over `self`.
    pub fn inclusion_check(&self, other: &HPolyhedron<T>) -> bool {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        let rows = self.constraints();
        if strict_feasible(self.dim, &rows).is_empty() {
            return true;
        }
        let bounded_by = |coeffs: &[T], rhs: &T| match lp_optimize(coeffs, Sense::Max, &rows) {
            LpOutcome::Optimal { value, .. } => value <= *rhs,
            LpOutcome::Unbounded => false,
            LpOutcome::Infeasible => true,
        };
        other
            .inequalities
            .iter()
            .all(|r| bounded_by(&r.coeffs, &r.rhs))
            && other.equalities.iter().all(|r| {
                bounded_by(&r.coeffs, &r.rhs)
                    && bounded_by(&crate::exactmath::vec_neg(&r.coeffs), &-r.rhs.clone())
            })
    }

    /// `{x : T x + b ∈ self}` by substitution.
    pub fn affine_preimage(&self, map: &Matrix<T>, offset: &[T]) -> HPolyhedron<T> {
        assert_eq!(
            map.nrows(),
            self.dim,
            "map must land in the polyhedron's space"
        );
        HPolyhedron {
            dim: map.ncols(),
            equalities: self
                .equalities
                .iter()
                .map(|r| r.substitute(map, offset))
                .collect(),
            inequalities: self
                .inequalities
                .iter()
                .map(|r| r.substitute(map, offset))
                .collect(),
        }
    }

    /// Generator form via double description on the homogenized cone.
    pub fn to_generators(&self) -> VPolyhedron<T> {
        let n = self.dim;
        let homog = |r: &LinConstraint<T>| {
            let mut h = r.coeffs.clone();
            h.push(-r.rhs.clone());
            h
        };
        let eqs: Vec<Vec<T>> = self.equalities.iter().map(homog).collect();
        let mut les: Vec<Vec<T>> = Vec::with_capacity(self.inequalities.len() + 1);
        let mut t_nonneg = zeros(n + 1);
        t_nonneg[n] = from_int(-1);
        les.push(t_nonneg);
        les.extend(self.inequalities.iter().map(homog));
        let g = dd::cone_generators(n + 1, &eqs, &les);

        let mut points = Vec::new();
        let mut rays = Vec::new();
        for r in g.rays {
            let t = r[n].clone();
            let x = r[..n].to_vec();
            if t.is_positive() {
                points.push(x.iter().map(|v| v.clone() / t.clone()).collect());
            } else if !is_zero_vec(&x) {
                rays.push(x);
            }
        }
        if points.is_empty() {
            return VPolyhedron::empty(n);
        }
        let lineality = Subspace::span(n, g.lineality.into_iter().map(|l| l[..n].to_vec()));
        VPolyhedron {
            dim: n,
            points,
            rays,
            lineality,
        }
    }

    /// Dimension of the affine hull, `None` when empty.
    pub fn affine_dim(&self) -> Option<usize> {
        self.to_generators().affine_dim()
    }

    /// Drops rows implied by the remaining ones and turns implicit equalities
    /// into equalities.
    pub fn normalize(&self) -> HPolyhedron<T> {
        let sc = SemiClosedPolyhedron::from(self.clone()).normalize();
        sc.closure()
    }
}

/// `conv(points) + cone(rays) + lineality`.
#[derive(Clone, Debug, PartialEq)]
pub struct VPolyhedron<T> {
    pub dim: usize,
    pub points: Vec<Vec<T>>,
    pub rays: Vec<Vec<T>>,
    pub lineality: Subspace<T>,
}

impl<T: Scalar> VPolyhedron<T> {
    pub fn empty(dim: usize) -> Self {
        VPolyhedron {
            dim,
            points: Vec::new(),
            rays: Vec::new(),
            lineality: Subspace::zero(dim),
        }
    }

    pub fn point(p: Vec<T>) -> Self {
        let dim = p.len();
        VPolyhedron {
            dim,
            points: vec![p],
            rays: Vec::new(),
            lineality: Subspace::zero(dim),
        }
    }

    pub fn new(dim: usize, points: Vec<Vec<T>>, rays: Vec<Vec<T>>, lineality: Subspace<T>) -> Self {
        assert!(points.iter().chain(&rays).all(|v| v.len() == dim));
        assert_eq!(lineality.ambient_dim(), dim);
        if points.is_empty() {
            return VPolyhedron::empty(dim);
        }
        let rays = rays.into_iter().filter(|r| !is_zero_vec(r)).collect();
        VPolyhedron {
            dim,
            points,
            rays,
            lineality,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn affine_dim(&self) -> Option<usize> {
        let base = self.points.first()?;
        let dirs: Vec<Vec<T>> = self.points[1..]
            .iter()
            .map(|p| vec_sub(p, base))
            .chain(self.rays.iter().cloned())
            .chain(self.lineality.basis().iter().cloned())
            .collect();
        Some(rank(&dirs))
    }

    /// Half-space form: generators of the polar of the homogenized cone.
    pub fn to_halfspaces(&self) -> HPolyhedron<T> {
        let n = self.dim;
        if self.points.is_empty() {
            return HPolyhedron::empty(n);
        }
        let lift = |v: &Vec<T>, t: i64| {
            let mut h = v.clone();
            h.push(from_int(t));
            h
        };
        let eqs: Vec<Vec<T>> = self.lineality.basis().iter().map(|l| lift(l, 0)).collect();
        let les: Vec<Vec<T>> = self
            .points
            .iter()
            .map(|p| lift(p, 1))
            .chain(self.rays.iter().map(|r| lift(r, 0)))
            .collect();
        let g = dd::cone_generators(n + 1, &eqs, &les);
        let mut out = HPolyhedron::whole(n);
        for l in g.lineality {
            let a = l[..n].to_vec();
            if !is_zero_vec(&a) {
                out.equalities.push(LinConstraint::eq(a, -l[n].clone()));
            }
        }
        for r in g.rays {
            let a = r[..n].to_vec();
            if !is_zero_vec(&a) {
                out.inequalities.push(LinConstraint::le(a, -r[n].clone()));
            }
        }
        out
    }

    pub fn minkowski_sum(&self, other: &VPolyhedron<T>) -> VPolyhedron<T> {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        if self.is_empty() || other.is_empty() {
            return VPolyhedron::empty(self.dim);
        }
        let mut points = Vec::new();
        for p in &self.points {
            for q in &other.points {
                let s = vec_add(p, q);
                if !points.contains(&s) {
                    points.push(s);
                }
            }
        }
        let mut rays: Vec<Vec<T>> = Vec::new();
        for r in self.rays.iter().chain(&other.rays) {
            if !rays.contains(r) {
                rays.push(r.clone());
            }
        }
        VPolyhedron {
            dim: self.dim,
            points,
            rays,
            lineality: self.lineality.sum(&other.lineality),
        }
    }

    /// `{T x + b : x ∈ self}`.
    pub fn affine_image(&self, map: &Matrix<T>, offset: &[T]) -> VPolyhedron<T> {
        assert_eq!(
            map.ncols(),
            self.dim,
            "map must start in the polyhedron's space"
        );
        let m = map.nrows();
        if self.is_empty() {
            return VPolyhedron::empty(m);
        }
        let mut points: Vec<Vec<T>> = Vec::new();
        for p in &self.points {
            let q = vec_add(&map.mul_vec(p), offset);
            if !points.contains(&q) {
                points.push(q);
            }
        }
        let mut rays: Vec<Vec<T>> = Vec::new();
        for r in &self.rays {
            let mut d = map.mul_vec(r);
            if is_zero_vec(&d) {
                continue;
            }
            normalize_direction(&mut d);
            if !rays.contains(&d) {
                rays.push(d);
            }
        }
        VPolyhedron {
            dim: m,
            points,
            rays,
            lineality: self.lineality.image(map),
        }
    }

    /// Membership by solving for convex/conic/linear multipliers.
    pub fn contains(&self, x: &[T]) -> bool {
        if self.is_empty() {
            return false;
        }
        let np = self.points.len();
        let nr = self.rays.len();
        let nl = self.lineality.dim();
        let nv = np + nr + nl;
        let mut rows = Vec::new();
        for i in 0..self.dim {
            let mut coeffs = zeros(nv);
            for (j, p) in self.points.iter().enumerate() {
                coeffs[j] = p[i].clone();
            }
            for (j, r) in self.rays.iter().enumerate() {
                coeffs[np + j] = r[i].clone();
            }
            for (j, l) in self.lineality.basis().iter().enumerate() {
                coeffs[np + nr + j] = l[i].clone();
            }
            rows.push(LinConstraint::eq(coeffs, x[i].clone()));
        }
        let mut sum = zeros(nv);
        for c in sum.iter_mut().take(np) {
            *c = T::one();
        }
        rows.push(LinConstraint::eq(sum, T::one()));
        for j in 0..np + nr {
            let mut c = zeros(nv);
            c[j] = from_int(-1);
            rows.push(LinConstraint::le(c, T::zero()));
        }
        !strict_feasible(nv, &rows).is_empty()
    }
}

/// Outcome of [`consolidate_union`].
#[derive(Clone, Debug, PartialEq)]
pub enum Union<T> {
    Single(HPolyhedron<T>),
    NotConvex,
}

/// Returns the union as one polyhedron when it is convex.
///
/// The candidate is the convex hull of all generators; it equals the union
/// iff hull ∖ ⋃ parts is empty.
pub fn consolidate_union<T: Scalar>(dim: usize, parts: &[HPolyhedron<T>]) -> Union<T> {
    let gens: Vec<VPolyhedron<T>> = parts
        .iter()
        .map(|p| p.to_generators())
        .filter(|g| !g.is_empty())
        .collect();
    if gens.is_empty() {
        return Union::Single(HPolyhedron::empty(dim));
    }
    let mut hull = VPolyhedron::empty(dim);
    for g in &gens {
        if hull.is_empty() {
            hull = g.clone();
            continue;
        }
        for p in &g.points {
            if !hull.points.contains(p) {
                hull.points.push(p.clone());
            }
        }
        for r in &g.rays {
            if !hull.rays.contains(r) {
                hull.rays.push(r.clone());
            }
        }
        hull.lineality = hull.lineality.sum(&g.lineality);
    }
    let hull_h = hull.to_halfspaces();
    debug_assert!(parts.iter().all(|p| p.inclusion_check(&hull_h)));
    let union = Region::new(
        dim,
        parts
            .iter()
            .cloned()
            .map(SemiClosedPolyhedron::from)
            .collect(),
    );
    let rest =
        Region::new(dim, vec![SemiClosedPolyhedron::from(hull_h.clone())]).difference(&union);
    if rest.is_empty() {
        Union::Single(hull_h)
    } else {
        Union::NotConvex
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rat;

    fn r(n: i64) -> Rat {
        from_int(n)
    }

    fn v(xs: &[i64]) -> Vec<Rat> {
        xs.iter().map(|&x| r(x)).collect()
    }

    fn unit_square() -> HPolyhedron<Rat> {
        HPolyhedron::whole(2)
            .with_ge(v(&[1, 0]), r(0))
            .with_le(v(&[1, 0]), r(1))
            .with_ge(v(&[0, 1]), r(0))
            .with_le(v(&[0, 1]), r(1))
    }

    fn same_set(a: &HPolyhedron<Rat>, b: &HPolyhedron<Rat>) -> bool {
        a.inclusion_check(b) && b.inclusion_check(a)
    }

    #[test]
    fn square_vertices() {
        let g = unit_square().to_generators();
        assert_eq!(g.points.len(), 4);
        for p in [v(&[0, 0]), v(&[1, 0]), v(&[0, 1]), v(&[1, 1])] {
            assert!(g.points.contains(&p), "missing {p:?}");
        }
        assert!(g.rays.is_empty());
        assert!(g.lineality.is_zero());
    }

    #[test]
    fn orthant_generators() {
        let k = HPolyhedron::whole(2)
            .with_le(v(&[1, 0]), r(0))
            .with_le(v(&[0, 1]), r(0));
        let g = k.to_generators();
        assert_eq!(g.points, vec![v(&[0, 0])]);
        assert_eq!(g.rays.len(), 2);
        assert!(g.rays.contains(&v(&[-1, 0])) && g.rays.contains(&v(&[0, -1])));
    }

    #[test]
    fn line_has_lineality() {
        let line = HPolyhedron::whole(2).with_eq(v(&[1, 0]), r(0));
        let g = line.to_generators();
        assert_eq!(g.points, vec![v(&[0, 0])]);
        assert!(g.rays.is_empty());
        assert_eq!(g.lineality.dim(), 1);
        assert!(g.lineality.contains(&v(&[0, 1])));
    }

    #[test]
    fn simplex_halfspaces() {
        let s = VPolyhedron::new(
            2,
            vec![v(&[0, 0]), v(&[1, 0]), v(&[0, 1])],
            vec![],
            Subspace::zero(2),
        );
        let h = s.to_halfspaces();
        let expected = HPolyhedron::whole(2)
            .with_ge(v(&[1, 0]), r(0))
            .with_ge(v(&[0, 1]), r(0))
            .with_le(v(&[1, 1]), r(1));
        assert!(same_set(&h, &expected));
        assert_eq!(h.inequalities.len(), 3);
    }

    #[test]
    fn cone_halfspaces_and_empty() {
        let k = VPolyhedron::new(
            2,
            vec![v(&[0, 0])],
            vec![v(&[-1, 0]), v(&[0, -1])],
            Subspace::zero(2),
        );
        let expected = HPolyhedron::whole(2)
            .with_le(v(&[1, 0]), r(0))
            .with_le(v(&[0, 1]), r(0));
        assert!(same_set(&k.to_halfspaces(), &expected));
        let e = VPolyhedron::<Rat>::empty(2).to_halfspaces();
        assert!(e.is_empty());
        assert_eq!(e, HPolyhedron::empty(2));
    }

    #[test]
    fn empty_system_has_no_points() {
        let p = HPolyhedron::whole(1)
            .with_le(v(&[1]), r(0))
            .with_ge(v(&[1]), r(1));
        assert!(p.to_generators().is_empty());
    }

    #[test]
    fn fixture_feasible_set_absorbs_cone() {
        let d = HPolyhedron::whole(2)
            .with_le(v(&[1, 0]), r(0))
            .with_le(v(&[0, 1]), r(1));
        let k = HPolyhedron::whole(2)
            .with_le(v(&[1, 0]), r(0))
            .with_le(v(&[0, 1]), r(0));
        let sum = d
            .to_generators()
            .minkowski_sum(&k.to_generators())
            .to_halfspaces();
        assert!(same_set(&sum, &d));
    }

    #[test]
    fn sum_with_origin_and_segments() {
        let sq = unit_square().to_generators();
        let s = sq.minkowski_sum(&VPolyhedron::point(v(&[0, 0])));
        assert!(same_set(&s.to_halfspaces(), &unit_square()));
        let a = VPolyhedron::new(2, vec![v(&[0, 0]), v(&[1, 0])], vec![], Subspace::zero(2));
        let b = VPolyhedron::new(2, vec![v(&[0, 0]), v(&[0, 1])], vec![], Subspace::zero(2));
        assert!(same_set(
            &a.minkowski_sum(&b).to_halfspaces(),
            &unit_square()
        ));
    }

    #[test]
    fn preimage_examples() {
        let p = HPolyhedron::whole(2).with_le(v(&[1, 0]), r(0));
        let id = Matrix::identity(2);
        assert_eq!(p.affine_preimage(&id, &v(&[0, 0])), p);
        let t = Matrix::from_rows(2, vec![v(&[1, -1]), v(&[0, 1])]);
        let pre = p.affine_preimage(&t, &v(&[0, 0]));
        assert_eq!(pre.inequalities[0].coeffs, v(&[1, -1]));
        for (a, b) in [(0, 0), (1, 2), (2, 1), (-3, 4)] {
            let x = v(&[a, b]);
            assert_eq!(pre.contains(&x), p.contains(&t.mul_vec(&x)));
        }
        assert!(HPolyhedron::<Rat>::empty(2)
            .affine_preimage(&t, &v(&[0, 0]))
            .is_empty());
    }

    #[test]
    fn image_of_fixture_piece() {
        // D ∩ P1 = {t1 <= 0, 0 <= t2 <= 1} under (t1 - t2, t2)
        let piece = HPolyhedron::whole(2)
            .with_le(v(&[1, 0]), r(0))
            .with_ge(v(&[0, 1]), r(0))
            .with_le(v(&[0, 1]), r(1));
        let t = Matrix::from_rows(2, vec![v(&[1, -1]), v(&[0, 1])]);
        let img = piece.to_generators().affine_image(&t, &v(&[0, 0]));
        assert_eq!(img.points.len(), 2);
        assert!(img.points.contains(&v(&[0, 0])) && img.points.contains(&v(&[-1, 1])));
        assert_eq!(img.rays, vec![v(&[-1, 0])]);
        for (a, b) in [(0, 0), (-1, 1), (-3, 0), (-5, 1)] {
            let x = v(&[a, b]);
            if piece.contains(&x) {
                assert!(img.contains(&t.mul_vec(&x)));
            }
        }
        let zero = Matrix::zeros(2, 2);
        let collapsed = piece.to_generators().affine_image(&zero, &v(&[3, 4]));
        assert_eq!(collapsed.points, vec![v(&[3, 4])]);
        assert!(collapsed.rays.is_empty());
    }

    #[test]
    fn intersection_and_inclusion() {
        let a = HPolyhedron::whole(2).with_le(v(&[1, 0]), r(0));
        let b = HPolyhedron::whole(2).with_ge(v(&[1, 0]), r(0));
        let i = a.intersect(&b);
        assert!(!i.is_empty());
        assert!(same_set(
            &i,
            &HPolyhedron::whole(2).with_eq(v(&[1, 0]), r(0))
        ));
        let d = HPolyhedron::whole(2)
            .with_le(v(&[1, 0]), r(0))
            .with_le(v(&[0, 1]), r(1));
        assert!(d.contains(&v(&[0, 1])));
        let big = HPolyhedron::whole(2).with_le(v(&[1, 0]), r(2));
        assert!(unit_square().inclusion_check(&big));
        assert!(!big.inclusion_check(&unit_square()));
    }

    #[test]
    fn consolidation_examples() {
        let seg = |a: i64, b: i64| {
            HPolyhedron::whole(1)
                .with_ge(v(&[1]), r(a))
                .with_le(v(&[1]), r(b))
        };
        match consolidate_union(1, &[seg(0, 1), seg(1, 2)]) {
            Union::Single(p) => assert!(same_set(&p, &seg(0, 2))),
            Union::NotConvex => panic!("adjacent segments are convex"),
        }
        assert_eq!(
            consolidate_union(1, &[seg(0, 1), seg(2, 3)]),
            Union::NotConvex
        );
    }

    #[test]
    fn normalize_finds_implicit_equality() {
        let p = HPolyhedron::whole(2)
            .with_le(v(&[1, 0]), r(0))
            .with_ge(v(&[1, 0]), r(0))
            .with_le(v(&[0, 1]), r(1))
            .with_le(v(&[0, 1]), r(2));
        let n = p.normalize();
        assert_eq!(n.equalities.len(), 1);
        assert_eq!(n.inequalities.len(), 1);
        assert!(same_set(&n, &p));
    }
}
