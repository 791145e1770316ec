//! Brute-force efficiency decisions taken straight from the definitions.
//!
//! Nothing here touches the set algebra of the solver: a point is classified
//! by strict LPs over each cell `D ∩ P_k`, and grid cross-checks compare those
//! verdicts with membership in a solver decomposition.

use crate::error::{Error, Result};
use crate::exactmath::{dot, strict_feasible, LinConstraint, Scalar};
use crate::pwl::Problem;
use crate::solver::SolveReport;

#[derive(Clone, Debug, PartialEq)]
pub struct GridSpec<T> {
    pub lower: Vec<T>,
    pub upper: Vec<T>,
    /// Points per axis, endpoints included.
    pub steps: Vec<usize>,
}

impl<T: Scalar> GridSpec<T> {
    pub fn new(lower: Vec<T>, upper: Vec<T>, steps: Vec<usize>) -> Result<Self> {
        if lower.len() != upper.len() || lower.len() != steps.len() {
            return Err(Error::DimensionMismatch(
                "grid box and steps differ in length".into(),
            ));
        }
        if steps.contains(&0) {
            return Err(Error::Parse("grid steps must be positive".into()));
        }
        if lower.iter().zip(&upper).any(|(l, u)| l > u) {
            return Err(Error::Parse(
                "grid box has lower bound above upper bound".into(),
            ));
        }
        Ok(GridSpec {
            lower,
            upper,
            steps,
        })
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    fn axis(&self, i: usize) -> Vec<T> {
        let n = self.steps[i];
        if n == 1 {
            return vec![self.lower[i].clone()];
        }
        let span = self.upper[i].clone() - self.lower[i].clone();
        let den = T::from_usize(n - 1).expect("step count fits the scalar");
        (0..n)
            .map(|s| {
                let s = T::from_usize(s).expect("step index fits the scalar");
                self.lower[i].clone() + span.clone() * s / den.clone()
            })
            .collect()
    }

    /// All grid points, last coordinate varying fastest.
    pub fn points(&self) -> Vec<Vec<T>> {
        let axes: Vec<Vec<T>> = (0..self.dim()).map(|i| self.axis(i)).collect();
        let mut out = vec![Vec::new()];
        for axis in &axes {
            let mut next = Vec::with_capacity(out.len() * axis.len());
            for p in &out {
                for c in axis {
                    let mut q = p.clone();
                    q.push(c.clone());
                    next.push(q);
                }
            }
            out = next;
        }
        out
    }
}

fn feasible_value<T: Scalar>(u: &[T], problem: &Problem<T>) -> Result<Vec<T>> {
    if !problem.feasible.constraints().iter().all(|r| r.holds(u)) {
        return Err(Error::NotFeasible);
    }
    problem.f.eval(u).ok_or(Error::CoverGap)
}

/// Rows on `x` saying `⟨y_i*, y − T_k x − b_k⟩ (rel) 0`.
fn domination_row<T: Scalar>(
    yi: &[T],
    y: &[T],
    problem: &Problem<T>,
    k: usize,
    strict: bool,
) -> LinConstraint<T> {
    let piece = &problem.f.pieces[k];
    let coeffs: Vec<T> = piece.map.left_mul(yi).into_iter().map(|c| -c).collect();
    let rhs = dot(yi, &piece.offset) - dot(yi, y);
    if strict {
        LinConstraint::lt(coeffs, rhs)
    } else {
        LinConstraint::le(coeffs, rhs)
    }
}

fn cell_rows<T: Scalar>(problem: &Problem<T>, k: usize) -> Vec<LinConstraint<T>> {
    let mut rows = problem.feasible.constraints();
    rows.extend(problem.f.pieces[k].domain.constraints());
    rows
}

/// `f(u)` is efficient in `f(D)`: no `x ∈ D` with `f(u) − f(x) ∈ K ∖ ℓ(K)`.
pub fn is_efficient<T: Scalar>(u: &[T], problem: &Problem<T>) -> Result<bool> {
    let y = feasible_value(u, problem)?;
    let cone_rows = problem.cone.rows();
    let n = problem.f.source_dim;
    for k in 0..problem.f.pieces.len() {
        for j in 0..cone_rows.len() {
            let mut rows = cell_rows(problem, k);
            for (i, yi) in cone_rows.iter().enumerate() {
                rows.push(domination_row(yi, &y, problem, k, i == j));
            }
            if !strict_feasible(n, &rows).is_empty() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// `f(u)` is weakly efficient in `f(D)`: no `x ∈ D` with `f(u) − f(x) ∈ int K`.
pub fn is_weakly_efficient<T: Scalar>(u: &[T], problem: &Problem<T>) -> Result<bool> {
    let y = feasible_value(u, problem)?;
    let n = problem.f.source_dim;
    for k in 0..problem.f.pieces.len() {
        let mut rows = cell_rows(problem, k);
        for yi in problem.cone.rows() {
            rows.push(domination_row(yi, &y, problem, k, true));
        }
        if !strict_feasible(n, &rows).is_empty() {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Clone, Debug, PartialEq)]
pub struct Mismatch<T> {
    pub point: Vec<T>,
    pub oracle_sol: bool,
    pub decomp_sol: bool,
    pub oracle_wsol: Option<bool>,
    pub decomp_wsol: Option<bool>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Crosscheck<T> {
    pub mismatches: Vec<Mismatch<T>>,
    pub checked: usize,
    pub skipped: usize,
}

/// Compares oracle verdicts with decomposition membership on every grid point
/// inside `D`; points outside `D` are skipped.
pub fn grid_crosscheck<T: Scalar>(
    problem: &Problem<T>,
    report: &SolveReport<T>,
    grid: &GridSpec<T>,
) -> Result<Crosscheck<T>> {
    if grid.dim() != problem.f.source_dim {
        return Err(Error::DimensionMismatch(format!(
            "grid has dim {}, problem source dim {}",
            grid.dim(),
            problem.f.source_dim
        )));
    }
    let mut out = Crosscheck {
        mismatches: Vec::new(),
        checked: 0,
        skipped: 0,
    };
    for u in grid.points() {
        if !problem.feasible.constraints().iter().all(|r| r.holds(&u)) {
            out.skipped += 1;
            continue;
        }
        out.checked += 1;
        let oracle_sol = is_efficient(&u, problem)?;
        let decomp_sol = report.sol.contains(&u);
        let (oracle_wsol, decomp_wsol) = match &report.wsol {
            Some(w) => (
                Some(is_weakly_efficient(&u, problem)?),
                Some(w.contains(&u)),
            ),
            None => (None, None),
        };
        if oracle_sol != decomp_sol || oracle_wsol != decomp_wsol {
            out.mismatches.push(Mismatch {
                point: u,
                oracle_sol,
                decomp_sol,
                oracle_wsol,
                decomp_wsol,
            });
        }
    }
    Ok(out)
}
