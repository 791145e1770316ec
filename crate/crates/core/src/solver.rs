//! Efficient and weakly efficient sets of `Q = f(D) + K`, pulled back to the
//! decision space.
//!
//! A point `y ∈ Q` is efficient when no `y' ∈ Q` has `y − y' ∈ K ∖ ℓ(K)`, and
//! weakly efficient when no `y' ∈ Q` has `y − y' ∈ int K`. Both sets come out
//! as [`Region`]s; the weak one is always a union of closed pieces.

use crate::cone::OrderingCone;
use crate::error::{Error, Result};
use crate::exactmath::{lp_count, rank, LinConstraint, Matrix, Relation, Scalar};
use crate::polyhedron::{consolidate_union, HPolyhedron, Union, VPolyhedron};
use crate::pwl::{image_pieces, image_plus_cone, is_k_function, Piece, PiecewiseLinearFn, Problem};
use crate::semiclosed::{sc_sum, sc_sum_h, Region, SemiClosedPolyhedron};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FrontierKind {
    Efficient,
    WeaklyEfficient,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FrontierDecomposition<T> {
    pub image_pieces: Region<T>,
    pub kind: FrontierKind,
}

/// `H + int K` for a closed half-space `H`.
#[derive(Clone, Debug, PartialEq)]
pub enum HalfspaceSum<T> {
    OpenHalfspace(LinConstraint<T>),
    WholeSpace,
    Empty,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    /// Row-by-row expansion of `Q ∖ (Q + int K)` through half-space sums.
    Paper,
    /// Direct difference `Q ∖ ⋃_k (M_k + int K)`.
    Generic,
    /// Both, with an equality check between them.
    Both,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolveOptions {
    pub method: Method,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            method: Method::Paper,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Connectivity {
    pub connected: bool,
    pub components: Vec<Vec<usize>>,
    /// False when computed on closures of non-closed pieces.
    pub certified: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SolveStats {
    pub image_pieces: usize,
    pub q_pieces: usize,
    pub frontier_pieces: usize,
    pub weak_frontier_pieces: usize,
    pub sol_pieces: usize,
    pub wsol_pieces: usize,
    pub lp_count: u64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolveReport<T> {
    pub sol: Region<T>,
    pub wsol: Option<Region<T>>,
    pub convex: bool,
    pub sol_closed: bool,
    pub wsol_closed: Option<bool>,
    pub sol_connectivity: Connectivity,
    pub wsol_connectivity: Option<Connectivity>,
    /// For each `sol` piece, the `(function piece, frontier piece)` cells it came from.
    pub sol_provenance: Vec<Vec<(usize, usize)>>,
    pub wsol_provenance: Vec<Vec<(usize, usize)>>,
    pub stats: SolveStats,
    pub notes: Vec<String>,
}

/// `H + int H_j` where `H = {⟨a,y⟩ ≤ β}` and `H_j = {⟨y_j*,y⟩ ≤ 0}`.
pub fn halfspace_plus_open<T: Scalar>(h: &LinConstraint<T>, yj: &[T]) -> HalfspaceSum<T> {
    assert!(yj.iter().any(|c| !c.is_zero()), "cone row must be nonzero");
    if let Some(holds) = h.trivial_truth() {
        return if holds {
            HalfspaceSum::WholeSpace
        } else {
            HalfspaceSum::Empty
        };
    }
    match proportionality(&h.coeffs, yj) {
        Some(lambda) if lambda.is_positive() => {
            HalfspaceSum::OpenHalfspace(LinConstraint::lt(h.coeffs.clone(), h.rhs.clone()))
        }
        _ => HalfspaceSum::WholeSpace,
    }
}

/// `λ` with `a = λ·b`, if one exists (`b` nonzero).
fn proportionality<T: Scalar>(a: &[T], b: &[T]) -> Option<T> {
    let i = b.iter().position(|c| !c.is_zero())?;
    let lambda = a[i].clone() / b[i].clone();
    a.iter()
        .zip(b)
        .all(|(x, y)| *x == lambda.clone() * y.clone())
        .then_some(lambda)
}

/// `H + int K` for a cone with nonempty interior.
///
/// The sum is the open half-space `{⟨a,y⟩ < β}` exactly when `a` lies in the
/// cone spanned by the rows of `K`, and the whole space otherwise. Comparing
/// `a` with single rows only recognizes the case where `a` is a positive
/// multiple of one row; any other `a` from the spanned cone (for instance a
/// positive combination of two rows) still yields the open half-space.
pub fn halfspace_plus_interior<T: Scalar>(
    h: &LinConstraint<T>,
    cone: &OrderingCone<T>,
) -> HalfspaceSum<T> {
    if h.trivial_truth().is_some() {
        return halfspace_plus_open(h, &cone.rows()[0]);
    }
    for yj in cone.rows() {
        if let open @ HalfspaceSum::OpenHalfspace(_) = halfspace_plus_open(h, yj) {
            return open;
        }
    }
    if cone.in_polar(&h.coeffs) {
        HalfspaceSum::OpenHalfspace(LinConstraint::lt(h.coeffs.clone(), h.rhs.clone()))
    } else {
        HalfspaceSum::WholeSpace
    }
}

fn q_pieces<T: Scalar>(ms: &[VPolyhedron<T>], cone: &OrderingCone<T>) -> Vec<HPolyhedron<T>> {
    let k_gens = cone.generators();
    ms.iter()
        .filter(|m| !m.is_empty())
        .map(|m| m.minkowski_sum(&k_gens).to_halfspaces())
        .collect()
}

fn as_region<T: Scalar>(dim: usize, parts: &[HPolyhedron<T>]) -> Region<T> {
    Region::new(
        dim,
        parts
            .iter()
            .cloned()
            .map(SemiClosedPolyhedron::from)
            .collect(),
    )
}

/// `E(Q|K) = Q ∖ ⋃_{k,j} (M_k + C_j)` with `C_j` the pieces of `K ∖ ℓ(K)`.
pub fn efficient_frontier<T: Scalar>(
    ms: &[VPolyhedron<T>],
    cone: &OrderingCone<T>,
) -> Result<FrontierDecomposition<T>> {
    let q = q_pieces(ms, cone);
    frontier_over(&q, ms, cone)
}

fn frontier_over<T: Scalar>(
    q: &[HPolyhedron<T>],
    ms: &[VPolyhedron<T>],
    cone: &OrderingCone<T>,
) -> Result<FrontierDecomposition<T>> {
    if q.is_empty() {
        return Err(Error::AllEmpty);
    }
    let dim = cone.dim();
    let strict_parts = cone.k_minus_l_pieces();
    let mut cuts = Vec::new();
    for m in ms.iter().filter(|m| !m.is_empty()) {
        for c in &strict_parts.pieces {
            cuts.push(sc_sum(m, c));
        }
    }
    let e = as_region(dim, q).difference(&Region::new(dim, cuts));
    Ok(FrontierDecomposition {
        image_pieces: simplify(&e).0,
        kind: FrontierKind::Efficient,
    })
}

/// `E^w(Q|K) = Q ∖ (Q + int K)` expanded over the rows of each `Q_k = M_k + K`:
/// `Q_k + int K = ⋂_i (H_{k,i} + int K)`, hence
/// `E^w = ⋂_k ⋃_i ⋃_{k₁} (Q_{k₁} ∖ (H_{k,i} + int K))`.
pub fn weak_frontier_paper<T: Scalar>(
    ms: &[VPolyhedron<T>],
    cone: &OrderingCone<T>,
) -> Result<FrontierDecomposition<T>> {
    let q = q_pieces(ms, cone);
    weak_paper_over(&q, cone)
}

fn weak_paper_over<T: Scalar>(
    q: &[HPolyhedron<T>],
    cone: &OrderingCone<T>,
) -> Result<FrontierDecomposition<T>> {
    if !cone.has_nonempty_interior() {
        return Err(Error::EmptyInterior);
    }
    if q.is_empty() {
        return Err(Error::AllEmpty);
    }
    let dim = cone.dim();
    let q_sc: Vec<SemiClosedPolyhedron<T>> =
        q.iter().cloned().map(SemiClosedPolyhedron::from).collect();
    let mut acc: Option<Region<T>> = None;
    for qk in q {
        let qk = qk.normalize();
        let mut rows = Vec::new();
        let mut whole = false;
        for row in qk.constraints() {
            let halves = if row.rel == Relation::Eq {
                vec![
                    LinConstraint::le(row.coeffs.clone(), row.rhs.clone()),
                    LinConstraint::ge(row.coeffs.clone(), row.rhs.clone()),
                ]
            } else {
                vec![row]
            };
            for h in halves {
                match halfspace_plus_interior(&h, cone) {
                    HalfspaceSum::OpenHalfspace(open) => rows.push(open),
                    HalfspaceSum::WholeSpace => {}
                    HalfspaceSum::Empty => whole = true,
                }
            }
        }
        // Q_k + int K empty: nothing is removed on account of k
        if whole {
            continue;
        }
        let mut part = Vec::new();
        for open in &rows {
            for p in &q_sc {
                for neg in open.negation() {
                    let piece = p.clone().with(neg);
                    if !piece.is_empty() {
                        part.push(piece);
                    }
                }
            }
        }
        let part = simplify(&Region::new(dim, part)).0;
        acc = Some(match acc {
            None => part,
            Some(a) => simplify(&a.intersect(&part)).0,
        });
    }
    let image_pieces = acc.unwrap_or_else(|| Region::new(dim, q_sc));
    Ok(FrontierDecomposition {
        image_pieces: simplify(&image_pieces).0,
        kind: FrontierKind::WeaklyEfficient,
    })
}

/// `E^w(Q|K) = Q ∖ ⋃_k (M_k + int K)`.
pub fn weak_frontier_generic<T: Scalar>(
    ms: &[VPolyhedron<T>],
    cone: &OrderingCone<T>,
) -> Result<FrontierDecomposition<T>> {
    let q = q_pieces(ms, cone);
    weak_generic_over(&q, cone)
}

fn weak_generic_over<T: Scalar>(
    q: &[HPolyhedron<T>],
    cone: &OrderingCone<T>,
) -> Result<FrontierDecomposition<T>> {
    if !cone.has_nonempty_interior() {
        return Err(Error::EmptyInterior);
    }
    if q.is_empty() {
        return Err(Error::AllEmpty);
    }
    let dim = cone.dim();
    let interior = cone.interior_piece();
    let cuts = q.iter().map(|qk| sc_sum_h(qk, &interior)).collect();
    let e = as_region(dim, q).difference(&Region::new(dim, cuts));
    Ok(FrontierDecomposition {
        image_pieces: simplify(&e).0,
        kind: FrontierKind::WeaklyEfficient,
    })
}

/// `⋃_{k,j} D ∩ P_k ∩ T_k⁻¹(E_j − b_k)`, with the `(k, j)` cell of every piece.
pub fn pull_back<T: Scalar>(
    frontier: &FrontierDecomposition<T>,
    problem: &Problem<T>,
) -> (Region<T>, Vec<Vec<(usize, usize)>>) {
    let n = problem.f.source_dim;
    let mut pieces = Vec::new();
    let mut cells = Vec::new();
    for (k, piece) in problem.f.pieces.iter().enumerate() {
        let cell = SemiClosedPolyhedron::from(problem.cell(k));
        if cell.is_empty() {
            continue;
        }
        for (j, e) in frontier.image_pieces.pieces.iter().enumerate() {
            let pre = cell.intersect(&e.affine_preimage(&piece.map, &piece.offset));
            if !pre.is_empty() {
                pieces.push(pre);
                cells.push((k, j));
            }
        }
    }
    let (region, groups) = simplify(&Region::new(n, pieces));
    let provenance = groups
        .iter()
        .map(|g| g.iter().map(|&i| cells[i]).collect())
        .collect();
    (region, provenance)
}

/// Replaces `(f, K)` by `(π∘f, K1)` written in the coordinates of `Y1`.
pub fn quotient_reduce<T: Scalar>(problem: &Problem<T>) -> Result<Problem<T>> {
    let phi: &Matrix<T> = problem.cone.y1_coords();
    let cone = problem.cone.pointed_part()?;
    let pieces = problem
        .f
        .pieces
        .iter()
        .map(|p| Piece {
            domain: p.domain.clone(),
            map: phi.mul(&p.map),
            offset: phi.mul_vec(&p.offset),
        })
        .collect();
    let f = PiecewiseLinearFn::new(problem.f.source_dim, cone.dim(), pieces)?;
    Problem::new(f, problem.feasible.clone(), cone)
}

/// Connected components of the intersection graph of closed pieces.
pub fn connectivity_certificate<T: Scalar>(region: &Region<T>) -> Result<Connectivity> {
    if !region.is_closed_form() {
        return Err(Error::HasStrictRows);
    }
    let closed: Vec<HPolyhedron<T>> = region.closures();
    Ok(Connectivity {
        certified: true,
        ..components(&closed)
    })
}

fn components<T: Scalar>(parts: &[HPolyhedron<T>]) -> Connectivity {
    let n = parts.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while parent[r] != r {
            r = parent[r];
        }
        let mut c = i;
        while parent[c] != r {
            let next = parent[c];
            parent[c] = r;
            c = next;
        }
        r
    }
    for i in 0..n {
        for j in i + 1..n {
            let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
            if ri != rj && !parts[i].intersect(&parts[j]).is_empty() {
                parent[ri.max(rj)] = ri.min(rj);
            }
        }
    }
    let mut comps: Vec<Vec<usize>> = Vec::new();
    let mut root_of: Vec<Option<usize>> = vec![None; n];
    for i in 0..n {
        let r = find(&mut parent, i);
        match root_of[r] {
            Some(c) => comps[c].push(i),
            None => {
                root_of[r] = Some(comps.len());
                comps.push(vec![i]);
            }
        }
    }
    Connectivity {
        connected: comps.len() <= 1,
        components: comps,
        certified: false,
    }
}

/// Descriptive connectivity for possibly non-closed regions: components of
/// the closures, certified only when every piece is closed.
pub fn describe_connectivity<T: Scalar>(region: &Region<T>) -> Connectivity {
    connectivity_certificate(region).unwrap_or_else(|_| components(&region.closures()))
}

/// Same point set, decided by two region differences.
pub fn decomposition_equal<T: Scalar>(a: &Region<T>, b: &Region<T>) -> bool {
    a.difference(b).is_empty() && b.difference(a).is_empty()
}

/// Reduces a region without changing the set it describes: drops empty and
/// covered pieces, closes pieces whose closure is already inside the region,
/// and merges closed pieces whose union is convex. Returns, for every output
/// piece, the input indices it absorbed.
pub fn simplify<T: Scalar>(region: &Region<T>) -> (Region<T>, Vec<Vec<usize>>) {
    let dim = region.dim;
    let mut items: Vec<Item<T>> = region
        .pieces
        .iter()
        .enumerate()
        .filter_map(|(i, p)| {
            p.witness().map(|w| Item {
                piece: p.normalize(),
                sources: vec![i],
                witness: w,
            })
        })
        .collect();

    absorb_covered(&mut items);

    // a piece may be closed when its closure stays within the region
    let whole = Region::new(dim, items.iter().map(|it| it.piece.clone()).collect());
    for it in items.iter_mut() {
        if !it.piece.is_closed() {
            let closed = SemiClosedPolyhedron::from(it.piece.closure());
            if Region::single(closed.clone()).is_subset_of(&whole) {
                it.piece = closed.normalize();
            }
        }
    }

    // greedy pairwise merge of closed pieces; disjoint pieces never merge
    let mut merged = true;
    while merged {
        merged = false;
        'outer: for a in 0..items.len() {
            if !items[a].piece.is_closed() {
                continue;
            }
            for b in a + 1..items.len() {
                if !items[b].piece.is_closed() || !may_merge(&items[a], &items[b]) {
                    continue;
                }
                let pair = [items[a].piece.closure(), items[b].piece.closure()];
                if let Union::Single(h) = consolidate_union(dim, &pair) {
                    let gone = items.remove(b);
                    items[a].piece = SemiClosedPolyhedron::from(h).normalize();
                    items[a].witness = items[a].piece.witness().expect("merged piece is nonempty");
                    items[a].sources.extend(gone.sources);
                    merged = true;
                    break 'outer;
                }
            }
        }
    }

    // a merge can cover a remaining piece
    absorb_covered(&mut items);

    for it in items.iter_mut() {
        it.sources.sort_unstable();
    }
    let groups = items.iter().map(|it| it.sources.clone()).collect();
    (
        Region::new(dim, items.into_iter().map(|it| it.piece).collect()),
        groups,
    )
}

struct Item<T> {
    piece: SemiClosedPolyhedron<T>,
    sources: Vec<usize>,
    witness: Vec<T>,
}

/// Affine dimension of a normalized nonempty piece.
fn flat_dim<T: Scalar>(p: &SemiClosedPolyhedron<T>) -> usize {
    let eqs: Vec<Vec<T>> = p.equalities.iter().map(|r| r.coeffs.clone()).collect();
    p.dim - rank(&eqs)
}

/// Necessary conditions for a convex union once covered pieces are gone:
/// equal affine dimension, the midpoint of the two witnesses lies in one of
/// the pieces, and the pieces meet.
fn may_merge<T: Scalar>(a: &Item<T>, b: &Item<T>) -> bool {
    if flat_dim(&a.piece) != flat_dim(&b.piece) {
        return false;
    }
    let two = T::one() + T::one();
    let mid: Vec<T> = a
        .witness
        .iter()
        .zip(&b.witness)
        .map(|(x, y)| (x.clone() + y.clone()) / two.clone())
        .collect();
    (a.piece.contains(&mid) || b.piece.contains(&mid)) && !a.piece.intersect(&b.piece).is_empty()
}

/// Drops every piece contained in another single piece, handing its sources over.
fn absorb_covered<T: Scalar>(items: &mut Vec<Item<T>>) {
    let mut i = 0;
    while i < items.len() {
        let covered = (0..items.len()).find(|&j| {
            j != i
                && items[j].piece.contains(&items[i].witness)
                && items[i].piece.is_subset_of(&items[j].piece)
        });
        match covered {
            Some(j) => {
                let gone = items.remove(i);
                let j = if j > i { j - 1 } else { j };
                items[j].sources.extend(gone.sources);
            }
            None => i += 1,
        }
    }
}

/// True when the region, as a point set, is topologically closed. Only valid
/// on output of [`simplify`], where a strict row survives only if the closure
/// of its piece leaves the region.
fn closed_after_simplify<T: Scalar>(region: &Region<T>) -> bool {
    region.is_closed_form()
}

pub fn solve<T: Scalar>(problem: &Problem<T>, options: &SolveOptions) -> Result<SolveReport<T>> {
    let lp_start = lp_count();
    let n = problem.f.source_dim;
    let mut notes = Vec::new();
    let mut stats = SolveStats::default();

    if problem.feasible.is_empty() {
        notes.push("feasible set is empty".to_string());
        let empty = Region::empty(n);
        let conn = connectivity_certificate(&empty)?;
        stats.lp_count = lp_count() - lp_start;
        return Ok(SolveReport {
            sol: empty.clone(),
            wsol: Some(empty),
            convex: true,
            sol_closed: true,
            wsol_closed: Some(true),
            sol_connectivity: conn.clone(),
            wsol_connectivity: Some(conn),
            sol_provenance: Vec::new(),
            wsol_provenance: Vec::new(),
            stats,
            notes,
        });
    }

    let convex = is_k_function(problem)?.is_yes();
    let ms = image_pieces(problem);
    stats.image_pieces = ms.iter().filter(|m| !m.is_empty()).count();
    let ipc = image_plus_cone(problem, &ms, convex)?;
    let q: Vec<HPolyhedron<T>> = match ipc.consolidated {
        Some(h) => vec![h],
        None => ipc.pieces.into_iter().filter(|p| !p.is_empty()).collect(),
    };
    stats.q_pieces = q.len();

    let cone = &problem.cone;
    if cone.k_minus_l_pieces().pieces.is_empty() {
        notes.push(
            "ordering cone equals its lineality space; every feasible point is efficient"
                .to_string(),
        );
    }
    let e = frontier_over(&q, &ms, cone)?;
    stats.frontier_pieces = e.image_pieces.len();
    let (sol, sol_provenance) = pull_back(&e, problem);
    let sol_closed = closed_after_simplify(&sol);
    if convex && !sol_closed {
        notes.push("K-function case produced a non-closed solution set".to_string());
    }
    let sol_connectivity = describe_connectivity(&sol);

    let (mut wsol, mut wsol_closed, mut wsol_connectivity) = (None, None, None);
    let mut wsol_provenance = Vec::new();
    if cone.has_nonempty_interior() {
        let ew = match options.method {
            Method::Paper => weak_paper_over(&q, cone)?,
            Method::Generic => weak_generic_over(&q, cone)?,
            Method::Both => {
                let a = weak_paper_over(&q, cone)?;
                let b = weak_generic_over(&q, cone)?;
                if !decomposition_equal(&a.image_pieces, &b.image_pieces) {
                    return Err(Error::MethodDisagreement);
                }
                notes.push("paper and generic weak frontiers agree".to_string());
                a
            }
        };
        stats.weak_frontier_pieces = ew.image_pieces.len();
        let (w, prov) = pull_back(&ew, problem);
        wsol_closed = Some(closed_after_simplify(&w));
        wsol_connectivity = Some(describe_connectivity(&w));
        wsol_provenance = prov;
        wsol = Some(w);
    } else {
        notes.push(
            "interior of the ordering cone is empty; weakly efficient set not computed".to_string(),
        );
    }

    stats.sol_pieces = sol.len();
    stats.wsol_pieces = wsol.as_ref().map_or(0, |w| w.len());
    stats.lp_count = lp_count() - lp_start;
    Ok(SolveReport {
        sol,
        wsol,
        convex,
        sol_closed,
        wsol_closed,
        sol_connectivity,
        wsol_connectivity,
        sol_provenance,
        wsol_provenance,
        stats,
        notes,
    })
}
