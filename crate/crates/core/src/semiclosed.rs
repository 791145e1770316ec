//! Semi-closed polyhedra (systems mixing `=`, `≤` and `<`) and finite unions of them.

use crate::exactmath::{from_int, strict_feasible, zeros, LinConstraint, Matrix, Relation, Scalar};
use crate::polyhedron::{HPolyhedron, VPolyhedron};

/// Row count above which Fourier–Motzkin prunes redundant rows with LPs mid-way.
const FM_PRUNE_THRESHOLD: usize = 32;

#[derive(Clone, Debug, PartialEq)]
pub struct SemiClosedPolyhedron<T> {
    pub dim: usize,
    pub equalities: Vec<LinConstraint<T>>,
    pub closed: Vec<LinConstraint<T>>,
    pub strict: Vec<LinConstraint<T>>,
}

impl<T: Scalar> From<HPolyhedron<T>> for SemiClosedPolyhedron<T> {
    fn from(p: HPolyhedron<T>) -> Self {
        SemiClosedPolyhedron {
            dim: p.dim,
            equalities: p.equalities,
            closed: p.inequalities,
            strict: Vec::new(),
        }
    }
}

impl<T: Scalar> SemiClosedPolyhedron<T> {
    pub fn whole(dim: usize) -> Self {
        SemiClosedPolyhedron {
            dim,
            equalities: Vec::new(),
            closed: Vec::new(),
            strict: Vec::new(),
        }
    }

    pub fn empty(dim: usize) -> Self {
        HPolyhedron::empty(dim).into()
    }

    pub fn from_constraints(dim: usize, rows: impl IntoIterator<Item = LinConstraint<T>>) -> Self {
        let mut s = Self::whole(dim);
        for r in rows {
            s.push(r);
        }
        s
    }

    pub fn push(&mut self, row: LinConstraint<T>) {
        assert_eq!(row.dim(), self.dim, "row length must equal the dimension");
        match row.rel {
            Relation::Eq => self.equalities.push(row),
            Relation::Le => self.closed.push(row),
            Relation::Lt => self.strict.push(row),
        }
    }

    pub fn with(mut self, row: LinConstraint<T>) -> Self {
        self.push(row);
        self
    }

    pub fn constraints(&self) -> Vec<LinConstraint<T>> {
        self.equalities
            .iter()
            .chain(&self.closed)
            .chain(&self.strict)
            .cloned()
            .collect()
    }

    pub fn row_count(&self) -> usize {
        self.equalities.len() + self.closed.len() + self.strict.len()
    }

    pub fn is_closed(&self) -> bool {
        self.strict.is_empty()
    }

    pub fn contains(&self, x: &[T]) -> bool {
        self.equalities
            .iter()
            .chain(&self.closed)
            .chain(&self.strict)
            .all(|r| r.holds(x))
    }

    pub fn witness(&self) -> Option<Vec<T>> {
        strict_feasible(self.dim, &self.constraints()).witness()
    }

    pub fn is_empty(&self) -> bool {
        self.witness().is_none()
    }

    /// Strict rows relaxed; for a nonempty set this is its topological closure.
    pub fn closure(&self) -> HPolyhedron<T> {
        HPolyhedron {
            dim: self.dim,
            equalities: self.equalities.clone(),
            inequalities: self
                .closed
                .iter()
                .cloned()
                .chain(self.strict.iter().map(|r| r.relaxed()))
                .collect(),
        }
    }

    pub fn intersect(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        let mut out = self.clone();
        for r in other.constraints() {
            out.push(r);
        }
        out
    }

    /// `{x : T x + b ∈ self}`; strictness of every row is kept.
    pub fn affine_preimage(&self, map: &Matrix<T>, offset: &[T]) -> Self {
        assert_eq!(map.nrows(), self.dim, "map must land in the set's space");
        Self::from_constraints(
            map.ncols(),
            self.constraints().iter().map(|r| r.substitute(map, offset)),
        )
    }

    /// Set difference `self ∖ cut` as a union of disjoint pieces.
    ///
    /// Piece `i` keeps rows `0..i` of `cut` and negates row `i`; the negation
    /// of `≤` is a strict row, of `<` a closed row, of `=` two strict pieces.
    pub fn difference(&self, cut: &Self) -> Region<T> {
        assert_eq!(self.dim, cut.dim, "dimension mismatch");
        if self.is_empty() {
            return Region::empty(self.dim);
        }
        if self.intersect(cut).is_empty() {
            return Region::single(self.clone());
        }
        let mut pieces = Vec::new();
        let mut prefix = self.clone();
        for row in cut.constraints() {
            if row.trivial_truth() == Some(true) {
                continue;
            }
            for neg in row.negation() {
                let piece = prefix.clone().with(neg);
                if !piece.is_empty() {
                    pieces.push(piece);
                }
            }
            prefix.push(row);
        }
        Region::new(self.dim, pieces)
    }

    /// `self ⊆ other`.
    pub fn is_subset_of(&self, other: &Self) -> bool {
        self.difference(other).is_empty()
    }

    /// Removes redundant rows, turns implicit equalities into equalities and
    /// rescales rows. Empty inputs become the canonical empty set.
    pub fn normalize(&self) -> Self {
        let mut rows = Vec::new();
        for r in self.constraints() {
            match r.trivial_truth() {
                Some(true) => continue,
                Some(false) => return Self::empty(self.dim),
                None => rows.push(r.normalized()),
            }
        }
        if strict_feasible(self.dim, &rows).is_empty() {
            return Self::empty(self.dim);
        }
        // implicit equalities
        for i in 0..rows.len() {
            if rows[i].rel != Relation::Le {
                continue;
            }
            let mut probe = rows.clone();
            probe[i] = LinConstraint::lt(rows[i].coeffs.clone(), rows[i].rhs.clone());
            if strict_feasible(self.dim, &probe).is_empty() {
                rows[i] =
                    LinConstraint::eq(rows[i].coeffs.clone(), rows[i].rhs.clone()).normalized();
            }
        }
        // redundancy: row i is dropped if the others already exclude its complement
        let mut kept: Vec<LinConstraint<T>> = Vec::new();
        for i in 0..rows.len() {
            let others: Vec<LinConstraint<T>> =
                kept.iter().chain(&rows[i + 1..]).cloned().collect();
            let implied = rows[i].negation().into_iter().all(|neg| {
                let mut probe = others.clone();
                probe.push(neg);
                strict_feasible(self.dim, &probe).is_empty()
            });
            if !implied {
                kept.push(rows[i].clone());
            }
        }
        Self::from_constraints(self.dim, reduce_by_equalities(kept))
    }

    /// Fourier–Motzkin elimination of the coordinates in `drop`.
    ///
    /// Strict rows `a·x < b` are lifted to `a·x + ε ≤ b` with a fresh
    /// coordinate `ε > 0` that is never eliminated, so the elimination itself
    /// runs on a closed system; rows that still carry `ε` come back strict.
    /// The result lives on the remaining coordinates, in their original order.
    pub fn fm_project(&self, drop: &[usize]) -> Self {
        let n = self.dim;
        let mut drop_sorted: Vec<usize> = drop.to_vec();
        drop_sorted.sort_unstable();
        drop_sorted.dedup();
        assert!(
            drop_sorted.iter().all(|&i| i < n),
            "drop index out of range"
        );
        let lifted = n + 1;
        let mut ineq_count = 0;
        let mut rows: Vec<Tracked<T>> = self
            .constraints()
            .into_iter()
            .map(|row| {
                let history = if row.rel == Relation::Eq {
                    Vec::new()
                } else {
                    ineq_count += 1;
                    vec![ineq_count - 1]
                };
                let mut coeffs = row.coeffs;
                coeffs.push(if row.rel == Relation::Lt {
                    T::one()
                } else {
                    T::zero()
                });
                let rel = if row.rel == Relation::Eq {
                    Relation::Eq
                } else {
                    Relation::Le
                };
                Tracked {
                    row: LinConstraint::new(coeffs, rel, row.rhs),
                    history,
                }
            })
            .collect();
        let mut fourier_steps = 0;
        for &v in &drop_sorted {
            let (next, was_fourier) = match eliminate(rows, v) {
                Some(r) => r,
                None => return Self::empty(n - drop_sorted.len()),
            };
            rows = next;
            if was_fourier {
                fourier_steps += 1;
                // Chernikov: a row built from more than k + 1 original
                // inequalities after k combination steps is redundant
                rows.retain(|t| t.row.rel == Relation::Eq || t.history.len() <= fourier_steps + 1);
            }
            if rows.len() > FM_PRUNE_THRESHOLD {
                rows = prune_redundant(lifted, rows);
            }
        }
        let keep: Vec<usize> = (0..n).filter(|i| !drop_sorted.contains(i)).collect();
        let mut out = Self::whole(keep.len());
        for t in rows {
            let rel = if t.row.coeffs[n].is_positive() {
                Relation::Lt
            } else {
                t.row.rel
            };
            let row = LinConstraint::new(
                keep.iter().map(|&i| t.row.coeffs[i].clone()).collect(),
                rel,
                t.row.rhs,
            );
            match row.trivial_truth() {
                Some(true) => {}
                Some(false) => return Self::empty(keep.len()),
                None => out.push(row),
            }
        }
        out
    }

    /// `{T x + b : x ∈ self}` via projection of the graph.
    pub fn affine_image(&self, map: &Matrix<T>, offset: &[T]) -> Self {
        assert_eq!(map.ncols(), self.dim, "map must start in the set's space");
        let n = self.dim;
        let m = map.nrows();
        let x_pos: Vec<usize> = (0..n).collect();
        let mut graph = Self::whole(n + m);
        for r in self.constraints() {
            graph.push(r.embed(n + m, &x_pos));
        }
        for i in 0..m {
            let mut coeffs = zeros(n + m);
            for j in 0..n {
                coeffs[j] = -map.get(i, j).clone();
            }
            coeffs[n + i] = T::one();
            graph.push(LinConstraint::eq(coeffs, offset[i].clone()));
        }
        graph.fm_project(&x_pos).normalize()
    }
}

/// Brings the equalities to reduced echelon form and clears their pivot
/// columns from every inequality, so each row shows only what the
/// equalities leave free.
fn reduce_by_equalities<T: Scalar>(rows: Vec<LinConstraint<T>>) -> Vec<LinConstraint<T>> {
    let (mut eqs, mut ineqs): (Vec<_>, Vec<_>) =
        rows.into_iter().partition(|r| r.rel == Relation::Eq);
    let mut pivots = Vec::new();
    for i in 0..eqs.len() {
        let Some(p) = eqs[i].coeffs.iter().position(|c| !c.is_zero()) else {
            continue;
        };
        let lead = eqs[i].coeffs[p].clone();
        let e = LinConstraint::eq(
            eqs[i]
                .coeffs
                .iter()
                .map(|c| c.clone() / lead.clone())
                .collect(),
            eqs[i].rhs.clone() / lead,
        );
        for (j, other) in eqs.iter_mut().enumerate() {
            if j != i {
                *other = clear_column(other, &e, p);
            }
        }
        eqs[i] = e;
        pivots.push(i);
    }
    for r in ineqs.iter_mut() {
        for &i in &pivots {
            let p = eqs[i]
                .coeffs
                .iter()
                .position(|c| !c.is_zero())
                .expect("pivot row");
            *r = clear_column(r, &eqs[i], p).normalized();
        }
    }
    eqs.retain(|r| r.trivial_truth().is_none());
    eqs.sort_by_key(|r| r.coeffs.iter().position(|c| !c.is_zero()));
    eqs.into_iter().chain(ineqs).collect()
}

/// `r − (r_p / e_p) e` with `e_p` nonzero.
fn clear_column<T: Scalar>(
    r: &LinConstraint<T>,
    e: &LinConstraint<T>,
    p: usize,
) -> LinConstraint<T> {
    if r.coeffs[p].is_zero() {
        return r.clone();
    }
    let f = r.coeffs[p].clone() / e.coeffs[p].clone();
    LinConstraint::new(
        r.coeffs
            .iter()
            .zip(&e.coeffs)
            .map(|(a, b)| a.clone() - f.clone() * b.clone())
            .collect(),
        r.rel,
        r.rhs.clone() - f * e.rhs.clone(),
    )
}

/// A row with the set of original inequalities it was combined from.
#[derive(Clone, Debug)]
struct Tracked<T> {
    row: LinConstraint<T>,
    history: Vec<usize>,
}

fn merge_history(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut h: Vec<usize> = a.iter().chain(b).copied().collect();
    h.sort_unstable();
    h.dedup();
    h
}

/// One elimination step; `None` when a contradictory constant row appears.
/// The flag tells whether rows were combined (as opposed to substituted).
fn eliminate<T: Scalar>(rows: Vec<Tracked<T>>, v: usize) -> Option<(Vec<Tracked<T>>, bool)> {
    let mut out: Vec<Tracked<T>> = Vec::new();
    let pivot = rows
        .iter()
        .position(|t| t.row.rel == Relation::Eq && !t.row.coeffs[v].is_zero());
    let fourier = pivot.is_none();
    if let Some(e_idx) = pivot {
        let e = rows[e_idx].row.clone();
        for (i, t) in rows.into_iter().enumerate() {
            if i == e_idx {
                continue;
            }
            if t.row.coeffs[v].is_zero() {
                out.push(t);
                continue;
            }
            let r = &t.row;
            let f = r.coeffs[v].clone() / e.coeffs[v].clone();
            let coeffs = r
                .coeffs
                .iter()
                .zip(&e.coeffs)
                .map(|(a, b)| a.clone() - f.clone() * b.clone())
                .collect();
            let row = LinConstraint::new(coeffs, r.rel, r.rhs.clone() - f * e.rhs.clone());
            out.push(Tracked {
                row,
                history: t.history,
            });
        }
    } else {
        let mut upper = Vec::new();
        let mut lower = Vec::new();
        for t in rows {
            let c = t.row.coeffs[v].clone();
            if c.is_positive() {
                upper.push(t);
            } else if c.is_negative() {
                lower.push(t);
            } else {
                out.push(t);
            }
        }
        for u in &upper {
            for l in &lower {
                let cu = u.row.coeffs[v].clone();
                let cl = -l.row.coeffs[v].clone();
                let coeffs = u
                    .row
                    .coeffs
                    .iter()
                    .zip(&l.row.coeffs)
                    .map(|(a, b)| cl.clone() * a.clone() + cu.clone() * b.clone())
                    .collect();
                let rel = if u.row.is_strict() || l.row.is_strict() {
                    Relation::Lt
                } else {
                    Relation::Le
                };
                let rhs = cl.clone() * u.row.rhs.clone() + cu.clone() * l.row.rhs.clone();
                out.push(Tracked {
                    row: LinConstraint::new(coeffs, rel, rhs),
                    history: merge_history(&u.history, &l.history),
                });
            }
        }
    }
    dedupe(out).map(|rows| (rows, fourier))
}

/// Drops constant rows (or reports a contradiction) and keeps only the
/// tightest row for each normalized coefficient vector and relation class.
fn dedupe<T: Scalar>(rows: Vec<Tracked<T>>) -> Option<Vec<Tracked<T>>> {
    let mut out: Vec<Tracked<T>> = Vec::new();
    for t in rows {
        match t.row.trivial_truth() {
            Some(true) => continue,
            Some(false) => return None,
            None => {}
        }
        let r = t.row.normalized();
        if r.rel == Relation::Eq {
            if !out.iter().any(|o| o.row == r) {
                out.push(Tracked {
                    row: r,
                    history: t.history,
                });
            }
            continue;
        }
        match out
            .iter_mut()
            .find(|o| o.row.rel != Relation::Eq && o.row.coeffs == r.coeffs)
        {
            Some(o) => {
                let tighter = r.rhs < o.row.rhs || (r.rhs == o.row.rhs && r.is_strict());
                if tighter {
                    *o = Tracked {
                        row: r,
                        history: t.history,
                    };
                }
            }
            None => out.push(Tracked {
                row: r,
                history: t.history,
            }),
        }
    }
    Some(out)
}

/// Removes inequality rows implied by the remaining ones; one LP per row.
fn prune_redundant<T: Scalar>(dim: usize, rows: Vec<Tracked<T>>) -> Vec<Tracked<T>> {
    let mut kept: Vec<Tracked<T>> = Vec::new();
    for i in 0..rows.len() {
        if rows[i].row.rel == Relation::Eq {
            kept.push(rows[i].clone());
            continue;
        }
        let others: Vec<LinConstraint<T>> = kept
            .iter()
            .chain(&rows[i + 1..])
            .map(|t| t.row.clone())
            .collect();
        let implied = rows[i].row.negation().into_iter().all(|neg| {
            let mut probe = others.clone();
            probe.push(neg);
            strict_feasible(dim, &probe).is_empty()
        });
        if !implied {
            kept.push(rows[i].clone());
        }
    }
    kept
}

/// `P + C` for a closed polyhedron in generator form and a semi-closed set.
pub fn sc_sum<T: Scalar>(
    p: &VPolyhedron<T>,
    c: &SemiClosedPolyhedron<T>,
) -> SemiClosedPolyhedron<T> {
    sc_sum_h(&p.to_halfspaces(), c)
}

/// `P + C` with `P` in half-space form: project `{(z, p) : p ∈ P, z − p ∈ C}` onto `z`.
pub fn sc_sum_h<T: Scalar>(
    p: &HPolyhedron<T>,
    c: &SemiClosedPolyhedron<T>,
) -> SemiClosedPolyhedron<T> {
    assert_eq!(p.dim, c.dim, "dimension mismatch");
    let n = p.dim;
    let p_pos: Vec<usize> = (n..2 * n).collect();
    let mut sys = SemiClosedPolyhedron::whole(2 * n);
    for r in p.constraints() {
        sys.push(r.embed(2 * n, &p_pos));
    }
    for r in c.constraints() {
        let mut coeffs = zeros(2 * n);
        for i in 0..n {
            coeffs[i] = r.coeffs[i].clone();
            coeffs[n + i] = -r.coeffs[i].clone();
        }
        sys.push(LinConstraint::new(coeffs, r.rel, r.rhs.clone()));
    }
    sys.fm_project(&p_pos).normalize()
}

/// Finite union of semi-closed polyhedra.
#[derive(Clone, Debug, PartialEq)]
pub struct Region<T> {
    pub dim: usize,
    pub pieces: Vec<SemiClosedPolyhedron<T>>,
}

impl<T: Scalar> Region<T> {
    pub fn new(dim: usize, pieces: Vec<SemiClosedPolyhedron<T>>) -> Self {
        assert!(
            pieces.iter().all(|p| p.dim == dim),
            "piece dimension mismatch"
        );
        Region { dim, pieces }
    }

    pub fn empty(dim: usize) -> Self {
        Region {
            dim,
            pieces: Vec::new(),
        }
    }

    pub fn single(piece: SemiClosedPolyhedron<T>) -> Self {
        Region {
            dim: piece.dim,
            pieces: vec![piece],
        }
    }

    pub fn whole(dim: usize) -> Self {
        Region::single(SemiClosedPolyhedron::whole(dim))
    }

    pub fn len(&self) -> usize {
        self.pieces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pieces.iter().all(|p| p.is_empty())
    }

    pub fn contains(&self, x: &[T]) -> bool {
        self.pieces.iter().any(|p| p.contains(x))
    }

    pub fn witness(&self) -> Option<Vec<T>> {
        self.pieces.iter().find_map(|p| p.witness())
    }

    /// True when every piece is written without strict rows.
    pub fn is_closed_form(&self) -> bool {
        self.pieces.iter().all(|p| p.is_closed())
    }

    pub fn pruned(&self) -> Self {
        Region::new(
            self.dim,
            self.pieces
                .iter()
                .filter(|p| !p.is_empty())
                .cloned()
                .collect(),
        )
    }

    pub fn union(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        Region::new(
            self.dim,
            self.pieces.iter().chain(&other.pieces).cloned().collect(),
        )
    }

    /// Pairwise intersections of pieces, empty ones dropped.
    pub fn intersect(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        let mut pieces = Vec::new();
        for a in &self.pieces {
            for b in &other.pieces {
                let c = a.intersect(b);
                if !c.is_empty() {
                    pieces.push(c);
                }
            }
        }
        Region::new(self.dim, pieces)
    }

    /// `self ∖ ⋃ cuts`, folding the single-piece difference over every cut.
    pub fn difference(&self, cuts: &Self) -> Self {
        assert_eq!(self.dim, cuts.dim, "dimension mismatch");
        let mut current = self.pruned();
        for cut in &cuts.pieces {
            if cut.is_empty() {
                continue;
            }
            let mut next = Vec::new();
            for piece in &current.pieces {
                next.extend(piece.difference(cut).pieces);
            }
            current = Region::new(self.dim, next);
            if current.pieces.is_empty() {
                break;
            }
        }
        current
    }

    pub fn is_subset_of(&self, other: &Self) -> bool {
        self.difference(other).is_empty()
    }

    pub fn closures(&self) -> Vec<HPolyhedron<T>> {
        self.pieces.iter().map(|p| p.closure()).collect()
    }
}

/// Region difference as a free function.
pub fn region_difference<T: Scalar>(r: &Region<T>, cuts: &Region<T>) -> Region<T> {
    r.difference(cuts)
}

/// Convenience for tests and fixtures: `{x : lo ≤ x_i ≤ hi}` boxes etc.
pub fn interval<T: Scalar>(lo: i64, hi: i64) -> SemiClosedPolyhedron<T> {
    SemiClosedPolyhedron::whole(1)
        .with(LinConstraint::ge(vec![T::one()], from_int(lo)))
        .with(LinConstraint::le(vec![T::one()], from_int(hi)))
}
