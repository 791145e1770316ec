use std::cell::Cell;

use super::{dot, from_int, zeros, LinConstraint, Relation, Scalar};

thread_local! {
    static LP_COUNT: Cell<u64> = const { Cell::new(0) };
}

/// Number of LPs solved so far on the current thread.
pub fn lp_count() -> u64 {
    LP_COUNT.with(|c| c.get())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sense {
    Min,
    Max,
}

#[derive(Clone, Debug, PartialEq)]
pub enum LpOutcome<T> {
    Optimal { value: T, point: Vec<T> },
    Unbounded,
    Infeasible,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Feasibility<T> {
    Witness(Vec<T>),
    Empty,
}

impl<T> Feasibility<T> {
    pub fn is_empty(&self) -> bool {
        matches!(self, Feasibility::Empty)
    }

    pub fn witness(self) -> Option<Vec<T>> {
        match self {
            Feasibility::Witness(w) => Some(w),
            Feasibility::Empty => None,
        }
    }
}

/// Dense simplex tableau over `[A | b]` with an objective row of reduced costs.
struct Tableau<T> {
    rows: Vec<Vec<T>>,
    obj: Vec<T>,
    basis: Vec<usize>,
    ncols: usize,
}

enum Step {
    Optimal,
    Unbounded,
}

impl<T: Scalar> Tableau<T> {
    fn pivot(&mut self, r: usize, c: usize) {
        let inv = T::one() / self.rows[r][c].clone();
        for x in self.rows[r].iter_mut() {
            *x = x.clone() * inv.clone();
        }
        let prow = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, p) in row.iter_mut().zip(&prow) {
                if !p.is_zero() {
                    *x = x.clone() - p.clone() * f.clone();
                }
            }
        }
        if !self.obj[c].is_zero() {
            let f = self.obj[c].clone();
            for (x, p) in self.obj.iter_mut().zip(&prow) {
                if !p.is_zero() {
                    *x = x.clone() - p.clone() * f.clone();
                }
            }
        }
        self.basis[r] = c;
    }

    fn set_objective(&mut self, cost: &[T]) {
        let mut obj = cost.to_vec();
        obj.push(T::zero());
        for (row, &b) in self.rows.iter().zip(&self.basis) {
            let cb = cost[b].clone();
            if cb.is_zero() {
                continue;
            }
            for (x, a) in obj.iter_mut().zip(row) {
                *x = x.clone() - cb.clone() * a.clone();
            }
        }
        self.obj = obj;
    }

    /// Minimizes the current objective with Bland's rule over the allowed columns.
    fn run(&mut self, allowed: &[bool]) -> Step {
        loop {
            let Some(c) = (0..self.ncols).find(|&j| allowed[j] && self.obj[j].is_negative()) else {
                return Step::Optimal;
            };
            let mut best: Option<(usize, T)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if !row[c].is_positive() {
                    continue;
                }
                let ratio = row[self.ncols].clone() / row[c].clone();
                let better = match &best {
                    None => true,
                    Some((bi, br)) => {
                        ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi])
                    }
                };
                if better {
                    best = Some((i, ratio));
                }
            }
            match best {
                None => return Step::Unbounded,
                Some((r, _)) => self.pivot(r, c),
            }
        }
    }
}

/// Exact LP over free variables with `=` and `≤` rows.
///
/// Free variables are split as `x = x⁺ − x⁻`; rows that cannot start from
/// their slack get an artificial for phase one. Pivoting follows Bland's rule in both phases.
pub fn lp_optimize<T: Scalar>(
    objective: &[T],
    sense: Sense,
    constraints: &[LinConstraint<T>],
) -> LpOutcome<T> {
    LP_COUNT.with(|c| c.set(c.get() + 1));
    let n = objective.len();
    assert!(
        constraints.iter().all(|c| c.rel != Relation::Lt),
        "lp_optimize accepts closed rows only"
    );
    assert!(
        constraints.iter().all(|c| c.dim() == n),
        "constraint length must match the objective"
    );
    let m = constraints.len();
    let n_slack = constraints.iter().filter(|c| c.rel == Relation::Le).count();
    let n_struct = 2 * n + n_slack;
    // a `≤` row with nonnegative right-hand side starts with its slack basic
    let needs_art: Vec<bool> = constraints
        .iter()
        .map(|c| c.rel == Relation::Eq || c.rhs.is_negative())
        .collect();
    let n_art = needs_art.iter().filter(|&&a| a).count();
    let ncols = n_struct + n_art;

    let mut rows = Vec::with_capacity(m);
    let mut basis = Vec::with_capacity(m);
    let mut slack = 2 * n;
    let mut art = n_struct;
    for (i, c) in constraints.iter().enumerate() {
        let mut row = zeros(ncols + 1);
        for (j, a) in c.coeffs.iter().enumerate() {
            row[j] = a.clone();
            row[n + j] = -a.clone();
        }
        let mut own_slack = None;
        if c.rel == Relation::Le {
            row[slack] = T::one();
            own_slack = Some(slack);
            slack += 1;
        }
        row[ncols] = c.rhs.clone();
        if c.rhs.is_negative() {
            for x in row.iter_mut() {
                *x = -x.clone();
            }
        }
        if needs_art[i] {
            row[art] = T::one();
            basis.push(art);
            art += 1;
        } else {
            basis.push(own_slack.expect("rows without artificial are slack rows"));
        }
        rows.push(row);
    }

    let mut tab = Tableau {
        rows,
        obj: Vec::new(),
        basis,
        ncols,
    };

    // phase one: minimize the sum of artificials
    let mut cost1 = zeros(ncols);
    for c in cost1.iter_mut().skip(n_struct) {
        *c = T::one();
    }
    tab.set_objective(&cost1);
    let all = vec![true; ncols];
    tab.run(&all);
    if !tab.obj[ncols].is_zero() {
        return LpOutcome::Infeasible;
    }

    // drive remaining artificials out of the basis, dropping redundant rows
    let mut i = 0;
    while i < tab.rows.len() {
        if tab.basis[i] >= n_struct {
            match (0..n_struct).find(|&j| !tab.rows[i][j].is_zero()) {
                Some(j) => {
                    tab.pivot(i, j);
                    i += 1;
                }
                None => {
                    tab.rows.remove(i);
                    tab.basis.remove(i);
                }
            }
        } else {
            i += 1;
        }
    }

    let mut cost2 = zeros(ncols);
    for j in 0..n {
        let c = match sense {
            Sense::Min => objective[j].clone(),
            Sense::Max => -objective[j].clone(),
        };
        cost2[n + j] = -c.clone();
        cost2[j] = c;
    }
    tab.set_objective(&cost2);
    let allowed: Vec<bool> = (0..ncols).map(|j| j < n_struct).collect();
    if let Step::Unbounded = tab.run(&allowed) {
        return LpOutcome::Unbounded;
    }

    let mut split = zeros(ncols);
    for (row, &b) in tab.rows.iter().zip(&tab.basis) {
        split[b] = row[ncols].clone();
    }
    let point: Vec<T> = (0..n)
        .map(|j| split[j].clone() - split[n + j].clone())
        .collect();
    let value = dot(objective, &point);
    LpOutcome::Optimal { value, point }
}

/// Decides a mixed system of `=`, `≤`, `<` rows over `dim` free variables.
///
/// Strict rows become `⟨a, x⟩ + ε ≤ b`; with `ε ≤ 1` added, the system is
/// strictly feasible iff the maximal `ε` is positive.
pub fn strict_feasible<T: Scalar>(dim: usize, constraints: &[LinConstraint<T>]) -> Feasibility<T> {
    for c in constraints {
        if c.trivial_truth() == Some(false) {
            return Feasibility::Empty;
        }
    }
    let rows: Vec<LinConstraint<T>> = constraints
        .iter()
        .filter(|c| c.trivial_truth().is_none())
        .map(|c| {
            assert_eq!(c.dim(), dim, "constraint length mismatch");
            let mut coeffs = c.coeffs.clone();
            let rel = match c.rel {
                Relation::Lt => {
                    coeffs.push(T::one());
                    Relation::Le
                }
                rel => {
                    coeffs.push(T::zero());
                    rel
                }
            };
            LinConstraint::new(coeffs, rel, c.rhs.clone())
        })
        .chain(std::iter::once(LinConstraint::le(
            {
                let mut v = zeros(dim + 1);
                v[dim] = T::one();
                v
            },
            from_int(1),
        )))
        .collect();
    let mut objective = zeros(dim + 1);
    objective[dim] = T::one();
    match lp_optimize(&objective, Sense::Max, &rows) {
        LpOutcome::Optimal { value, mut point } if value.is_positive() => {
            point.pop();
            Feasibility::Witness(point)
        }
        _ => Feasibility::Empty,
    }
}
