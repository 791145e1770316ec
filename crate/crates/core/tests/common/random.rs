//! Seeded generators for random geometry and random problems.

use polyfront::exactmath::{from_int, rank, vec_add, vec_scale};
use polyfront::pwl::Piece;
use polyfront::{
    HPolyhedron, OrderingCone, PiecewiseLinearFn, Problem, Rat, RatConstraint, RatMatrix as Matrix,
    VPolyhedron,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub struct Gen {
    rng: ChaCha8Rng,
}

impl Gen {
    pub fn new(seed: u64) -> Self {
        Gen {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn int(&mut self, lo: i64, hi: i64) -> i64 {
        self.rng.gen_range(lo..=hi)
    }

    pub fn coin(&mut self) -> bool {
        self.rng.gen_bool(0.5)
    }

    pub fn pick(&mut self, n: usize) -> usize {
        self.rng.gen_range(0..n)
    }

    pub fn vec(&mut self, n: usize, lo: i64, hi: i64) -> Vec<Rat> {
        (0..n).map(|_| from_int(self.int(lo, hi))).collect()
    }

    pub fn nonzero_vec(&mut self, n: usize, lo: i64, hi: i64) -> Vec<Rat> {
        loop {
            let v = self.vec(n, lo, hi);
            if v.iter().any(|c| *c != from_int(0)) {
                return v;
            }
        }
    }

    /// A rational with denominator up to 4 in `[lo, hi]`.
    pub fn rat(&mut self, lo: i64, hi: i64) -> Rat {
        let den = self.int(1, 4);
        let num = self.int(lo * den, hi * den);
        Rat::new(num.into(), den.into())
    }

    pub fn rat_vec(&mut self, n: usize, lo: i64, hi: i64) -> Vec<Rat> {
        (0..n).map(|_| self.rat(lo, hi)).collect()
    }

    /// Random rows; emptiness and unboundedness both occur.
    pub fn h_system(&mut self, dim: usize, rows: usize) -> HPolyhedron {
        HPolyhedron::from_constraints(
            dim,
            (0..rows).map(|_| {
                let a = self.nonzero_vec(dim, -3, 3);
                let b = from_int(self.int(-3, 3));
                RatConstraint::le(a, b)
            }),
        )
    }

    /// Nonempty system containing a random integer center.
    pub fn nonempty_h(&mut self, dim: usize, rows: usize) -> HPolyhedron {
        let center = self.vec(dim, -1, 1);
        HPolyhedron::from_constraints(
            dim,
            (0..rows).map(|_| {
                let a = self.nonzero_vec(dim, -2, 2);
                let slack: Rat = from_int(self.int(0, 3));
                let b = polyfront::exactmath::dot(&a, &center) + slack;
                RatConstraint::le(a, b)
            }),
        )
    }

    pub fn bounded_h(&mut self, dim: usize, extra: usize) -> HPolyhedron {
        let mut p = self.nonempty_h(dim, extra);
        for i in 0..dim {
            let mut e = vec![from_int::<Rat>(0); dim];
            e[i] = from_int(1);
            let hi = self.int(1, 3);
            let lo = self.int(-3, -1);
            p = p.with_le(e.clone(), from_int(hi)).with_ge(e, from_int(lo));
        }
        p
    }

    pub fn v_polytope(&mut self, dim: usize) -> VPolyhedron {
        let npts = self.int(1, 4) as usize;
        let nrays = self.int(0, 2) as usize;
        let points = (0..npts).map(|_| self.vec(dim, -2, 2)).collect();
        let rays = (0..nrays).map(|_| self.nonzero_vec(dim, -1, 1)).collect();
        VPolyhedron::new(dim, points, rays, polyfront::Subspace::zero(dim))
    }

    /// A point of `v` as a random convex combination plus cone part.
    pub fn sample_v(&mut self, v: &VPolyhedron) -> Vec<Rat> {
        let weights: Vec<Rat> = (0..v.points.len())
            .map(|_| from_int(self.int(0, 4)))
            .collect();
        let total: Rat = weights.iter().cloned().fold(from_int(0), |a, b| a + b);
        let mut x = vec![from_int::<Rat>(0); v.dim];
        if total == from_int(0) {
            x = v.points[0].clone();
        } else {
            for (p, w) in v.points.iter().zip(&weights) {
                x = vec_add(&x, &vec_scale(p, &(w.clone() / total.clone())));
            }
        }
        for r in &v.rays {
            x = vec_add(&x, &vec_scale(r, &self.rat(0, 2)));
        }
        for l in v.lineality.basis() {
            x = vec_add(&x, &vec_scale(l, &self.rat(-2, 2)));
        }
        x
    }

    fn invertible(&mut self, m: usize) -> Vec<Vec<Rat>> {
        loop {
            let rows: Vec<Vec<Rat>> = (0..m)
                .map(|i| {
                    let mut r = self.vec(m, -1, 1);
                    r[i] = from_int(self.int(1, 2));
                    r
                })
                .collect();
            if rank(&rows) == m {
                return rows;
            }
        }
    }

    /// Orthant-like cones: scaled orthants, simplicial cones, an extra
    /// redundant row, or (in dimension 3) a two-row cone with a lineality line.
    pub fn cone(&mut self, m: usize) -> OrderingCone {
        let kind = self.pick(if m == 3 { 4 } else { 3 });
        let rows = match kind {
            0 => (0..m)
                .map(|i| {
                    let mut r = vec![from_int::<Rat>(0); m];
                    r[i] = from_int(self.int(1, 3));
                    r
                })
                .collect(),
            1 => self.invertible(m),
            2 => {
                let mut rows = self.invertible(m);
                let extra = rows
                    .iter()
                    .fold(vec![from_int::<Rat>(0); m], |acc, r| vec_add(&acc, r));
                if extra.iter().any(|c| *c != from_int(0)) {
                    rows.push(extra);
                }
                rows
            }
            _ => {
                let a = self.nonzero_vec(m, -1, 1);
                let mut b = self.nonzero_vec(m, -1, 1);
                while rank(&[a.clone(), b.clone()]) < 2 {
                    b = self.nonzero_vec(m, -1, 1);
                }
                vec![a, b]
            }
        };
        OrderingCone::build(m, rows).expect("generated cone is valid")
    }

    fn matrix(&mut self, m: usize, n: usize) -> Matrix {
        Matrix::from_rows(n, (0..m).map(|_| self.vec(n, -2, 2)).collect())
    }

    /// Continuous piecewise affine map with one, two or three pieces; the
    /// pieces are half-spaces or parallel strips with matching kinks.
    pub fn pwl(&mut self, n: usize, m: usize) -> PiecewiseLinearFn {
        let t = self.matrix(m, n);
        let b = self.vec(m, -2, 2);
        let count = 1 + self.pick(3);
        if count == 1 {
            return PiecewiseLinearFn::affine(t, b);
        }
        let c = self.nonzero_vec(n, -1, 1);
        let d1 = self.int(-1, 1);
        let mut cuts = vec![d1];
        if count == 3 {
            cuts.push(d1 + self.int(1, 2));
        }
        // kink across c·x = d: T' = T + u cᵀ, b' = b − u d
        let mut pieces = Vec::new();
        let (mut cur_t, mut cur_b) = (t, b);
        for (idx, &d) in cuts.iter().enumerate() {
            let mut dom = HPolyhedron::whole(n).with_le(c.clone(), from_int(d));
            if idx > 0 {
                dom = dom.with_ge(c.clone(), from_int(cuts[idx - 1]));
            }
            pieces.push(Piece {
                domain: dom,
                map: cur_t.clone(),
                offset: cur_b.clone(),
            });
            let u = self.vec(m, -2, 2);
            let outer = Matrix::from_rows(n, u.iter().map(|ui| vec_scale(&c, ui)).collect());
            cur_t = add(&cur_t, &outer);
            cur_b = polyfront::exactmath::vec_sub(&cur_b, &vec_scale(&u, &from_int(d)));
        }
        pieces.push(Piece {
            domain: HPolyhedron::whole(n).with_ge(c.clone(), from_int(*cuts.last().unwrap())),
            map: cur_t,
            offset: cur_b,
        });
        PiecewiseLinearFn::new(n, m, pieces).unwrap()
    }

    pub fn problem(&mut self, n: usize, m: usize) -> Problem {
        let f = self.pwl(n, m);
        let rows = self.int(1, 3) as usize;
        let feasible = if self.coin() {
            self.bounded_h(n, rows - 1)
        } else {
            self.nonempty_h(n, rows)
        };
        let cone = self.cone(m);
        Problem::new(f, feasible, cone).unwrap()
    }

    /// Problem with source dim 1..=3 and image dim 2..=3.
    pub fn any_problem(&mut self) -> Problem {
        let n = self.int(1, 3) as usize;
        let m = self.int(2, 3) as usize;
        self.problem(n, m)
    }
}

fn add(a: &Matrix, b: &Matrix) -> Matrix {
    Matrix::from_rows(
        a.ncols(),
        a.rows()
            .iter()
            .zip(b.rows())
            .map(|(x, y)| vec_add(x, y))
            .collect(),
    )
}
