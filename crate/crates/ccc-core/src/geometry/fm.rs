//! Fourier–Motzkin elimination over exact rationals.
//!
//! A `LinearSystem` is a finite set of constraints `a·x REL b` with
//! REL ∈ {=, ≥, >}. Elimination is exact and preserves strictness, so the
//! projection of the solution set is again the solution set of the output.
//! That single fact powers feasibility tests, witness extraction and the
//! cone/cell projections used everywhere else in the crate.

use crate::linalg::{dot_qq, primitive_of_rational, q_from_i64, Q};
use num_traits::{Signed, Zero};
use std::cmp::Ordering;
use std::collections::HashMap;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Rel {
    Eq,
    Ge,
    Gt,
}

/// One constraint `normal·x REL offset`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constraint {
    pub normal: Vec<Q>,
    pub offset: Q,
    pub rel: Rel,
}

impl Constraint {
    pub fn new(normal: Vec<Q>, offset: Q, rel: Rel) -> Self {
        Constraint {
            normal,
            offset,
            rel,
        }
    }

    pub fn from_i64(normal: &[i64], offset: i64, rel: Rel) -> Self {
        Constraint {
            normal: normal.iter().map(|&v| q_from_i64(v)).collect(),
            offset: q_from_i64(offset),
            rel,
        }
    }

    pub fn satisfied_by(&self, x: &[Q]) -> bool {
        let v = dot_qq(&self.normal, x);
        match self.rel {
            Rel::Eq => v == self.offset,
            Rel::Ge => v >= self.offset,
            Rel::Gt => v > self.offset,
        }
    }

    pub fn is_trivial_normal(&self) -> bool {
        self.normal.iter().all(|c| c.is_zero())
    }

    /// Integer-primitive key `([a…, b], rel)` identifying the constraint up to
    /// positive scaling.
    fn key(&self) -> (Vec<i64>, Rel) {
        let mut v = self.normal.clone();
        v.push(self.offset.clone());
        (primitive_of_rational(&v), self.rel)
    }
}

#[derive(Clone, Debug, Default)]
pub struct LinearSystem {
    pub dim: usize,
    pub constraints: Vec<Constraint>,
}

impl LinearSystem {
    pub fn new(dim: usize) -> Self {
        LinearSystem {
            dim,
            constraints: Vec::new(),
        }
    }

    pub fn push(&mut self, c: Constraint) {
        assert_eq!(c.normal.len(), self.dim, "constraint dimension mismatch");
        self.constraints.push(c);
    }

    pub fn satisfied_by(&self, x: &[Q]) -> bool {
        self.constraints.iter().all(|c| c.satisfied_by(x))
    }

    /// Drop duplicates (up to positive scaling) and keep only the strongest
    /// bound per normal direction. Returns false if a constant constraint is
    /// already violated.
    fn simplify(&mut self) -> bool {
        let mut eqs: Vec<Constraint> = Vec::new();
        let mut best: HashMap<Vec<i64>, (Q, Rel)> = HashMap::new();
        let mut seen_eq: HashMap<Vec<i64>, ()> = HashMap::new();
        for c in std::mem::take(&mut self.constraints) {
            if c.is_trivial_normal() {
                let ok = match c.rel {
                    Rel::Eq => c.offset.is_zero(),
                    Rel::Ge => !c.offset.is_positive(),
                    Rel::Gt => c.offset.is_negative(),
                };
                if !ok {
                    return false;
                }
                continue;
            }
            match c.rel {
                Rel::Eq => {
                    let (mut key, _) = c.key();
                    // Orient equality keys so a and −a collide.
                    if let Some(first) = key.iter().find(|v| **v != 0) {
                        if *first < 0 {
                            for v in key.iter_mut() {
                                *v = -*v;
                            }
                        }
                    }
                    if seen_eq.insert(key, ()).is_none() {
                        eqs.push(c);
                    }
                }
                Rel::Ge | Rel::Gt => {
                    let dirkey = primitive_of_rational(&c.normal);
                    // Rescale offset to the primitive normal.
                    let scale = scale_factor(&c.normal, &dirkey);
                    let off = &c.offset * &scale;
                    match best.get_mut(&dirkey) {
                        None => {
                            best.insert(dirkey, (off, c.rel));
                        }
                        Some((b, r)) => match off.cmp(b) {
                            Ordering::Greater => {
                                *b = off;
                                *r = c.rel;
                            }
                            Ordering::Equal => {
                                if c.rel == Rel::Gt {
                                    *r = Rel::Gt;
                                }
                            }
                            Ordering::Less => {}
                        },
                    }
                }
            }
        }
        self.constraints = eqs;
        for (dir, (off, rel)) in best {
            let normal: Vec<Q> = dir.iter().map(|&v| q_from_i64(v)).collect();
            self.constraints.push(Constraint::new(normal, off, rel));
        }
        // Deterministic order for downstream consumers.
        self.constraints
            .sort_by(|a, b| a.key().cmp(&b.key()).then(a.rel.cmp(&b.rel)));
        true
    }

    /// Eliminate variable `var`, producing a system on the same coordinates
    /// with that column zero. Returns None if infeasibility is detected on a
    /// constant row along the way.
    pub fn eliminate(&self, var: usize) -> Option<LinearSystem> {
        assert!(var < self.dim);
        let mut sys = self.clone();
        if !sys.simplify() {
            return None;
        }
        // Prefer substitution through an equality that mentions the variable.
        if let Some(pos) = sys
            .constraints
            .iter()
            .position(|c| c.rel == Rel::Eq && !c.normal[var].is_zero())
        {
            let eq = sys.constraints.remove(pos);
            let pivot = eq.normal[var].clone();
            let mut out = LinearSystem::new(self.dim);
            for c in &sys.constraints {
                if c.normal[var].is_zero() {
                    out.push(c.clone());
                } else {
                    let factor = &c.normal[var] / &pivot;
                    let normal: Vec<Q> = (0..self.dim)
                        .map(|i| &c.normal[i] - &factor * &eq.normal[i])
                        .collect();
                    let offset = &c.offset - &factor * &eq.offset;
                    out.push(Constraint::new(normal, offset, c.rel));
                }
            }
            if !out.simplify() {
                return None;
            }
            return Some(out);
        }
        let mut lower = Vec::new(); // coefficient > 0
        let mut upper = Vec::new(); // coefficient < 0
        let mut out = LinearSystem::new(self.dim);
        for c in &sys.constraints {
            if c.normal[var].is_zero() {
                out.push(c.clone());
            } else if c.normal[var].is_positive() {
                lower.push(c.clone());
            } else {
                upper.push(c.clone());
            }
        }
        for lo in &lower {
            for hi in &upper {
                // (−hi_j)·lo + lo_j·hi with lo_j > 0, hi_j < 0.
                let a = lo.normal[var].clone();
                let b = -hi.normal[var].clone();
                let normal: Vec<Q> = (0..self.dim)
                    .map(|i| &b * &lo.normal[i] + &a * &hi.normal[i])
                    .collect();
                let offset = &b * &lo.offset + &a * &hi.offset;
                let rel = if lo.rel == Rel::Gt || hi.rel == Rel::Gt {
                    Rel::Gt
                } else {
                    Rel::Ge
                };
                out.push(Constraint::new(normal, offset, rel));
            }
        }
        if !out.simplify() {
            return None;
        }
        Some(out)
    }

    /// Exact feasibility by eliminating every variable.
    pub fn is_feasible(&self) -> bool {
        let mut sys = self.clone();
        if !sys.simplify() {
            return false;
        }
        for var in (0..self.dim).rev() {
            match sys.eliminate(var) {
                Some(s) => sys = s,
                None => return false,
            }
        }
        sys.simplify()
    }

    /// One interior witness of the solution set, or None if empty.
    /// `bias` perturbs the choices so two calls can return distinct points
    /// on any cell of positive dimension.
    pub fn sample(&self, bias: u32) -> Option<Vec<Q>> {
        let mut stages: Vec<LinearSystem> = Vec::with_capacity(self.dim + 1);
        let mut sys = self.clone();
        if !sys.simplify() {
            return None;
        }
        stages.push(sys.clone());
        for var in (0..self.dim).rev() {
            sys = sys.eliminate(var)?;
            stages.push(sys.clone());
        }
        let mut x = vec![Q::zero(); self.dim];
        // stages[k] still involves variables 0..self.dim−k.
        for var in 0..self.dim {
            let stage = &stages[self.dim - var - 1];
            let mut forced: Option<Q> = None;
            let mut lo: Option<(Q, bool)> = None; // (value, strict)
            let mut hi: Option<(Q, bool)> = None;
            for c in &stage.constraints {
                if c.normal[var].is_zero() {
                    continue;
                }
                // normal·x REL offset with variables above `var` already fixed.
                let mut rest = c.offset.clone();
                for i in 0..self.dim {
                    if i != var && !c.normal[i].is_zero() {
                        rest -= &c.normal[i] * &x[i];
                    }
                }
                let bound = &rest / &c.normal[var];
                match c.rel {
                    Rel::Eq => forced = Some(bound),
                    Rel::Ge | Rel::Gt => {
                        let strict = c.rel == Rel::Gt;
                        if c.normal[var].is_positive() {
                            if lo.as_ref().is_none_or(|(v, s)| {
                                bound > *v || (bound == *v && strict && !s)
                            }) {
                                lo = Some((bound, strict));
                            }
                        } else if hi.as_ref().is_none_or(|(v, s)| {
                            bound < *v || (bound == *v && strict && !s)
                        }) {
                            hi = Some((bound, strict));
                        }
                    }
                }
            }
            let step = q_from_i64(1 + bias as i64);
            x[var] = if let Some(v) = forced {
                v
            } else {
                match (lo, hi) {
                    (None, None) => Q::zero(),
                    (Some((l, ls)), None) => {
                        if ls {
                            l + step
                        } else {
                            l
                        }
                    }
                    (None, Some((h, hs))) => {
                        if hs {
                            h - step
                        } else {
                            h
                        }
                    }
                    (Some((l, _)), Some((h, _))) => {
                        if l == h {
                            l
                        } else {
                            // Interior point, biased away from the midpoint.
                            let w = q_from_i64(2 + bias as i64);
                            &l + (&h - &l) / w
                        }
                    }
                }
            };
        }
        debug_assert!(self.satisfied_by(&x), "sample point violates its system");
        if self.satisfied_by(&x) {
            Some(x)
        } else {
            None
        }
    }

    /// Exact projection onto the image of a linear map `y = M x`.
    /// Input constraints are in x (dim = M.cols); the result is in y.
    pub fn project_through(&self, matrix: &[Vec<Q>]) -> LinearSystem {
        let out_dim = matrix.len();
        let in_dim = self.dim;
        for row in matrix {
            assert_eq!(row.len(), in_dim, "projection matrix shape mismatch");
        }
        // Variables ordered (x, y); add y_i = Σ M_ij x_j; eliminate all x.
        let total = in_dim + out_dim;
        let mut sys = LinearSystem::new(total);
        for c in &self.constraints {
            let mut normal = c.normal.clone();
            normal.extend(std::iter::repeat_n(Q::zero(), out_dim));
            sys.push(Constraint::new(normal, c.offset.clone(), c.rel));
        }
        for (i, row) in matrix.iter().enumerate() {
            let mut normal: Vec<Q> = row.iter().map(|v| -v.clone()).collect();
            normal.extend((0..out_dim).map(|j| {
                if j == i {
                    Q::from_integer(1.into())
                } else {
                    Q::zero()
                }
            }));
            sys.push(Constraint::new(normal, Q::zero(), Rel::Eq));
        }
        for var in (0..in_dim).rev() {
            match sys.eliminate(var) {
                Some(s) => sys = s,
                None => {
                    // Empty input projects to an infeasible marker system.
                    let mut empty = LinearSystem::new(out_dim);
                    empty.push(Constraint::new(
                        vec![Q::zero(); out_dim],
                        q_from_i64(1),
                        Rel::Ge,
                    ));
                    return empty;
                }
            }
        }
        let mut out = LinearSystem::new(out_dim);
        for c in sys.constraints {
            let normal = c.normal[in_dim..].to_vec();
            out.push(Constraint::new(normal, c.offset, c.rel));
        }
        out.simplify();
        out
    }
}

fn scale_factor(original: &[Q], primitive: &[i64]) -> Q {
    // factor with primitive = factor·original componentwise.
    for (o, p) in original.iter().zip(primitive) {
        if !o.is_zero() {
            return q_from_i64(*p) / o;
        }
    }
    Q::from_integer(1.into())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ge(n: &[i64], b: i64) -> Constraint {
        Constraint::from_i64(n, b, Rel::Ge)
    }
    fn gt(n: &[i64], b: i64) -> Constraint {
        Constraint::from_i64(n, b, Rel::Gt)
    }
    fn eq(n: &[i64], b: i64) -> Constraint {
        Constraint::from_i64(n, b, Rel::Eq)
    }

    #[test]
    fn feasibility_box() {
        let mut sys = LinearSystem::new(2);
        sys.push(ge(&[1, 0], 0));
        sys.push(ge(&[-1, 0], -1));
        sys.push(gt(&[0, 1], 0));
        sys.push(gt(&[0, -1], -1));
        assert!(sys.is_feasible());
        let p = sys.sample(0).unwrap();
        assert!(sys.satisfied_by(&p));
        let q = sys.sample(3).unwrap();
        assert!(sys.satisfied_by(&q));
        assert_ne!(p, q, "biased samples should differ on a 2-cell");

        sys.push(gt(&[1, 1], 5));
        assert!(!sys.is_feasible());
    }

    #[test]
    fn strictness_matters() {
        // x ≥ 1 and x ≤ 1 feasible; x > 1 and x ≤ 1 not.
        let mut s1 = LinearSystem::new(1);
        s1.push(ge(&[1], 1));
        s1.push(ge(&[-1], -1));
        assert!(s1.is_feasible());
        assert_eq!(s1.sample(0).unwrap(), vec![q_from_i64(1)]);
        let mut s2 = LinearSystem::new(1);
        s2.push(gt(&[1], 1));
        s2.push(ge(&[-1], -1));
        assert!(!s2.is_feasible());
    }

    #[test]
    fn equality_substitution() {
        let mut sys = LinearSystem::new(3);
        sys.push(eq(&[1, 1, 1], 3));
        sys.push(eq(&[1, -1, 0], 0));
        sys.push(gt(&[0, 0, 1], 0));
        assert!(sys.is_feasible());
        let p = sys.sample(0).unwrap();
        assert!(sys.satisfied_by(&p));
    }

    #[test]
    fn projection_of_triangle() {
        // Triangle conv{(0,0),(1,0),(0,1)} closed, projected to the x-axis.
        let mut sys = LinearSystem::new(2);
        sys.push(ge(&[1, 0], 0));
        sys.push(ge(&[0, 1], 0));
        sys.push(ge(&[-1, -1], -1));
        let proj = sys.project_through(&[vec![q_from_i64(1), q_from_i64(0)]]);
        assert!(proj.satisfied_by(&[q_from_i64(0)]));
        assert!(proj.satisfied_by(&[q_from_i64(1)]));
        assert!(!proj.satisfied_by(&[q_from_i64(2)]));
        assert!(!proj.satisfied_by(&[q_from_i64(-1)]));
    }

    #[test]
    fn dimension_zero() {
        let sys = LinearSystem::new(0);
        assert!(sys.is_feasible());
        assert_eq!(sys.sample(0).unwrap(), Vec::<Q>::new());
    }
}
