//! Double description for cones `{z : E z = 0, A z ≤ 0}`.
//!
//! Constraints are added one at a time to the whole space. The state is a
//! lineality basis plus the extreme rays of the pointed remainder; each ray
//! carries the set of processed inequalities it makes tight, and two rays are
//! combined only when they are adjacent (no third ray is tight on everything
//! both are tight on).

use crate::exactmath::{dot, normalize_direction, unit, Scalar};

#[derive(Clone, Debug)]
struct Ray<T> {
    v: Vec<T>,
    tight: Vec<bool>,
}

#[derive(Clone, Debug)]
pub(crate) struct ConeGenerators<T> {
    pub lineality: Vec<Vec<T>>,
    pub rays: Vec<Vec<T>>,
}

struct DoubleDescription<T> {
    lineality: Vec<Vec<T>>,
    rays: Vec<Ray<T>>,
    processed: usize,
}

fn combine<T: Scalar>(a: &[T], ca: &T, b: &[T], cb: &T) -> Vec<T> {
    a.iter()
        .zip(b)
        .map(|(x, y)| ca.clone() * x.clone() + cb.clone() * y.clone())
        .collect()
}

impl<T: Scalar> DoubleDescription<T> {
    fn new(dim: usize) -> Self {
        DoubleDescription {
            lineality: (0..dim).map(|i| unit(dim, i)).collect(),
            rays: Vec::new(),
            processed: 0,
        }
    }

    /// Removes a lineality direction not annihilated by `h` and projects the
    /// rest of the state onto `h = 0` along it. Returns that direction.
    fn split_lineality(&mut self, h: &[T]) -> Option<(Vec<T>, T)> {
        let idx = self.lineality.iter().position(|l| !dot(h, l).is_zero())?;
        let l = self.lineality.remove(idx);
        let hl = dot(h, &l);
        for other in self.lineality.iter_mut() {
            let c = -(dot(h, other) / hl.clone());
            if !c.is_zero() {
                *other = combine(other, &T::one(), &l, &c);
                normalize_direction(other);
            }
        }
        for ray in self.rays.iter_mut() {
            let c = -(dot(h, &ray.v) / hl.clone());
            if !c.is_zero() {
                ray.v = combine(&ray.v, &T::one(), &l, &c);
                normalize_direction(&mut ray.v);
            }
        }
        Some((l, hl))
    }

    fn adjacent(&self, a: usize, b: usize) -> bool {
        let common: Vec<usize> = (0..self.processed)
            .filter(|&i| self.rays[a].tight[i] && self.rays[b].tight[i])
            .collect();
        !self
            .rays
            .iter()
            .enumerate()
            .any(|(k, r)| k != a && k != b && common.iter().all(|&i| r.tight[i]))
    }

    /// Rays on the hyperplane plus combinations of adjacent pairs across it.
    fn crossing_rays(&self, signs: &[T]) -> Vec<Ray<T>> {
        let mut out = Vec::new();
        for (a, sa) in signs.iter().enumerate() {
            if !sa.is_positive() {
                continue;
            }
            for (b, sb) in signs.iter().enumerate() {
                if !sb.is_negative() || !self.adjacent(a, b) {
                    continue;
                }
                let mut v = combine(&self.rays[b].v, sa, &self.rays[a].v, &-sb.clone());
                normalize_direction(&mut v);
                let tight = self.rays[a]
                    .tight
                    .iter()
                    .zip(&self.rays[b].tight)
                    .map(|(x, y)| *x && *y)
                    .collect();
                out.push(Ray { v, tight });
            }
        }
        out
    }

    fn add_equality(&mut self, h: &[T]) {
        if self.split_lineality(h).is_some() {
            return;
        }
        let signs: Vec<T> = self.rays.iter().map(|r| dot(h, &r.v)).collect();
        let mut next: Vec<Ray<T>> = self
            .rays
            .iter()
            .zip(&signs)
            .filter(|(_, s)| s.is_zero())
            .map(|(r, _)| r.clone())
            .collect();
        next.extend(self.crossing_rays(&signs));
        self.rays = next;
    }

    fn add_inequality(&mut self, h: &[T]) {
        let p = self.processed;
        if let Some((mut l, hl)) = self.split_lineality(h) {
            if hl.is_positive() {
                l = l.into_iter().map(|x| -x).collect();
            }
            for ray in self.rays.iter_mut() {
                ray.tight.push(true);
            }
            let mut tight = vec![true; p];
            tight.push(false);
            self.rays.push(Ray { v: l, tight });
            self.processed += 1;
            return;
        }
        let signs: Vec<T> = self.rays.iter().map(|r| dot(h, &r.v)).collect();
        let mut next = Vec::new();
        for (r, s) in self.rays.iter().zip(&signs) {
            if !s.is_positive() {
                let mut r = r.clone();
                r.tight.push(s.is_zero());
                next.push(r);
            }
        }
        for mut r in self.crossing_rays(&signs) {
            r.tight.push(true);
            next.push(r);
        }
        self.rays = next;
        self.processed += 1;
    }
}

pub(crate) fn cone_generators<T: Scalar>(
    dim: usize,
    equalities: &[Vec<T>],
    inequalities: &[Vec<T>],
) -> ConeGenerators<T> {
    let mut dd = DoubleDescription::new(dim);
    for h in equalities {
        dd.add_equality(h);
    }
    for h in inequalities {
        dd.add_inequality(h);
    }
    let mut rays: Vec<Vec<T>> = Vec::new();
    for r in dd.rays {
        if !rays.contains(&r.v) {
            rays.push(r.v);
        }
    }
    ConeGenerators {
        lineality: dd.lineality,
        rays,
    }
}
