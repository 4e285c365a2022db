//! Relatively open polyhedral cells in H-representation.
//!
//! A cell is cut out by finitely many equalities `a·x = b` and strict
//! inequalities `a·x > b`. Any feasible such system is relatively open and
//! convex, and its dimension is the ambient dimension minus the rank of the
//! equality normals, so the compactly supported Euler characteristic of every
//! cell is (−1)^dim with no special cases. Closed polyhedra are handled as
//! unions of their relatively open faces.

use super::fm::{Constraint, LinearSystem, Rel};
use super::GeometryError;
use crate::linalg::{dot_qq, q_from_i64, QMat, Q};
use num_traits::Zero;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cell {
    ambient: usize,
    equalities: Vec<(Vec<Q>, Q)>,
    stricts: Vec<(Vec<Q>, Q)>,
    dim: usize,
}

impl Cell {
    pub fn new(
        ambient: usize,
        equalities: Vec<(Vec<Q>, Q)>,
        stricts: Vec<(Vec<Q>, Q)>,
    ) -> Result<Cell, GeometryError> {
        for (n, _) in equalities.iter().chain(stricts.iter()) {
            if n.len() != ambient {
                return Err(GeometryError::DimensionMismatch {
                    expected: ambient,
                    got: n.len(),
                });
            }
        }
        let mut sys = LinearSystem::new(ambient);
        for (n, b) in &equalities {
            sys.push(Constraint::new(n.clone(), b.clone(), Rel::Eq));
        }
        for (n, b) in &stricts {
            sys.push(Constraint::new(n.clone(), b.clone(), Rel::Gt));
        }
        if !sys.is_feasible() {
            return Err(GeometryError::EmptyCell);
        }
        let eq_rank = if equalities.is_empty() {
            0
        } else {
            QMat::from_rows(equalities.iter().map(|(n, _)| n.clone()).collect()).rank()
        };
        Ok(Cell {
            ambient,
            equalities,
            stricts,
            dim: ambient - eq_rank,
        })
    }

    /// Whole space R^n as a single cell.
    pub fn full(ambient: usize) -> Cell {
        Cell::new(ambient, vec![], vec![]).expect("full space is nonempty")
    }

    /// The single point {p}.
    pub fn point(p: &[Q]) -> Cell {
        let n = p.len();
        let eqs = (0..n)
            .map(|i| {
                let mut normal = vec![Q::zero(); n];
                normal[i] = q_from_i64(1);
                (normal, p[i].clone())
            })
            .collect();
        Cell::new(n, eqs, vec![]).expect("a point is nonempty")
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn equalities(&self) -> &[(Vec<Q>, Q)] {
        &self.equalities
    }

    pub fn stricts(&self) -> &[(Vec<Q>, Q)] {
        &self.stricts
    }

    /// All constraints are homogeneous, so the cell is a relatively open cone.
    pub fn is_conical(&self) -> bool {
        self.equalities
            .iter()
            .chain(self.stricts.iter())
            .all(|(_, b)| b.is_zero())
    }

    pub fn contains(&self, x: &[Q]) -> bool {
        debug_assert_eq!(x.len(), self.ambient);
        self.equalities.iter().all(|(n, b)| dot_qq(n, x) == *b)
            && self.stricts.iter().all(|(n, b)| dot_qq(n, x) > *b)
    }

    /// Closure membership: equalities hold, strict inequalities weakly.
    pub fn closure_contains(&self, x: &[Q]) -> bool {
        self.equalities.iter().all(|(n, b)| dot_qq(n, x) == *b)
            && self.stricts.iter().all(|(n, b)| dot_qq(n, x) >= *b)
    }

    pub fn system(&self) -> LinearSystem {
        let mut sys = LinearSystem::new(self.ambient);
        for (n, b) in &self.equalities {
            sys.push(Constraint::new(n.clone(), b.clone(), Rel::Eq));
        }
        for (n, b) in &self.stricts {
            sys.push(Constraint::new(n.clone(), b.clone(), Rel::Gt));
        }
        sys
    }

    /// H-system of the closure (strict inequalities weakened).
    pub fn closure_system(&self) -> LinearSystem {
        let mut sys = LinearSystem::new(self.ambient);
        for (n, b) in &self.equalities {
            sys.push(Constraint::new(n.clone(), b.clone(), Rel::Eq));
        }
        for (n, b) in &self.stricts {
            sys.push(Constraint::new(n.clone(), b.clone(), Rel::Ge));
        }
        sys
    }

    /// An interior witness; `bias` selects among distinct points when dim > 0.
    pub fn sample_point(&self, bias: u32) -> Vec<Q> {
        self.system()
            .sample(bias)
            .expect("cell invariant guarantees nonemptiness")
    }

    /// Intersect with extra constraints; None if the result is empty.
    pub fn intersect(
        &self,
        equalities: Vec<(Vec<Q>, Q)>,
        stricts: Vec<(Vec<Q>, Q)>,
    ) -> Option<Cell> {
        let mut eqs = self.equalities.clone();
        eqs.extend(equalities);
        let mut sts = self.stricts.clone();
        sts.extend(stricts);
        Cell::new(self.ambient, eqs, sts).ok()
    }

    /// All relatively open faces of the closure of this cell, including the
    /// cell itself and the minimal face.
    pub fn faces(&self) -> Vec<Cell> {
        faces_of_closed_system(self.ambient, &self.closure_system())
    }

    /// Bounded iff the recession cone of the closure is {0}.
    pub fn is_bounded(&self) -> bool {
        let mut rec = LinearSystem::new(self.ambient);
        for (n, _) in &self.equalities {
            rec.push(Constraint::new(n.clone(), Q::zero(), Rel::Eq));
        }
        for (n, _) in &self.stricts {
            rec.push(Constraint::new(n.clone(), Q::zero(), Rel::Ge));
        }
        for i in 0..self.ambient {
            for s in [1i64, -1] {
                let mut probe = rec.clone();
                let mut normal = vec![Q::zero(); self.ambient];
                normal[i] = q_from_i64(s);
                probe.push(Constraint::new(normal, q_from_i64(1), Rel::Ge));
                if probe.is_feasible() {
                    return false;
                }
            }
        }
        true
    }

    /// Tangent cone of the cell at a point of its closure: homogenized
    /// equalities plus the active strict inequalities, inactive ones dropped.
    pub fn tangent_cone_at(&self, x: &[Q]) -> Option<Cell> {
        if !self.closure_contains(x) {
            return None;
        }
        let eqs: Vec<(Vec<Q>, Q)> = self
            .equalities
            .iter()
            .map(|(n, _)| (n.clone(), Q::zero()))
            .collect();
        let mut sts = Vec::new();
        for (n, b) in &self.stricts {
            if dot_qq(n, x) == *b {
                sts.push((n.clone(), Q::zero()));
            }
        }
        Some(Cell::new(self.ambient, eqs, sts).expect("tangent cone of a nonempty cell"))
    }

    /// Translate the cell by `t`.
    pub fn translate(&self, t: &[Q]) -> Cell {
        let shift = |(n, b): &(Vec<Q>, Q)| {
            let nb = b + dot_qq(n, t);
            (n.clone(), nb)
        };
        Cell {
            ambient: self.ambient,
            equalities: self.equalities.iter().map(shift).collect(),
            stricts: self.stricts.iter().map(shift).collect(),
            dim: self.dim,
        }
    }

    /// All lattice points, or Err if the cell is unbounded.
    pub fn lattice_points(&self) -> Result<Vec<Vec<i64>>, GeometryError> {
        lattice_points_of_system(self.ambient, &self.system())
    }
}

/// Relatively open faces of a closed system (equalities plus weak
/// inequalities). Enumerates active subsets of the irredundant inequalities
/// with feasibility pruning.
pub fn faces_of_closed_system(ambient: usize, sys: &LinearSystem) -> Vec<Cell> {
    let mut eqs: Vec<(Vec<Q>, Q)> = Vec::new();
    let mut ineqs: Vec<(Vec<Q>, Q)> = Vec::new();
    for c in &sys.constraints {
        match c.rel {
            Rel::Eq => eqs.push((c.normal.clone(), c.offset.clone())),
            Rel::Ge => ineqs.push((c.normal.clone(), c.offset.clone())),
            Rel::Gt => panic!("faces_of_closed_system expects a closed system"),
        }
    }
    // Drop inequalities implied by the remaining ones, one at a time, so the
    // active-set search below stays small.
    let mut keep: Vec<(Vec<Q>, Q)> = ineqs;
    let mut i = 0;
    while i < keep.len() {
        let mut probe = LinearSystem::new(ambient);
        for (n, b) in &eqs {
            probe.push(Constraint::new(n.clone(), b.clone(), Rel::Eq));
        }
        for (j, (n, b)) in keep.iter().enumerate() {
            if j != i {
                probe.push(Constraint::new(n.clone(), b.clone(), Rel::Ge));
            }
        }
        let (n, b) = &keep[i];
        let neg: Vec<Q> = n.iter().map(|v| -v.clone()).collect();
        probe.push(Constraint::new(neg, -b.clone(), Rel::Gt));
        if probe.is_feasible() {
            i += 1; // cuts the set: irredundant
        } else {
            keep.remove(i);
        }
    }
    let mut out = Vec::new();
    let mut active = Vec::new();
    enumerate_faces(ambient, &eqs, &keep, 0, &mut active, &mut out);
    out
}

fn enumerate_faces(
    ambient: usize,
    eqs: &[(Vec<Q>, Q)],
    ineqs: &[(Vec<Q>, Q)],
    next: usize,
    active: &mut Vec<bool>,
    out: &mut Vec<Cell>,
) {
    // Prune: is the current partial assignment feasible at all (remaining weak)?
    let mut sys = LinearSystem::new(ambient);
    for (n, b) in eqs {
        sys.push(Constraint::new(n.clone(), b.clone(), Rel::Eq));
    }
    for (i, (n, b)) in ineqs.iter().enumerate() {
        let rel = if i < next {
            if active[i] {
                Rel::Eq
            } else {
                Rel::Gt
            }
        } else {
            Rel::Ge
        };
        sys.push(Constraint::new(n.clone(), b.clone(), rel));
    }
    if !sys.is_feasible() {
        return;
    }
    if next == ineqs.len() {
        let mut cell_eqs: Vec<(Vec<Q>, Q)> = eqs.to_vec();
        let mut cell_sts = Vec::new();
        for (i, (n, b)) in ineqs.iter().enumerate() {
            if active[i] {
                cell_eqs.push((n.clone(), b.clone()));
            } else {
                cell_sts.push((n.clone(), b.clone()));
            }
        }
        out.push(Cell::new(ambient, cell_eqs, cell_sts).expect("feasibility checked"));
        return;
    }
    for choice in [false, true] {
        active.push(choice);
        enumerate_faces(ambient, eqs, ineqs, next + 1, active, out);
        active.pop();
    }
}

/// All lattice points of the solution set of `sys`; Err if unbounded.
pub fn lattice_points_of_system(
    ambient: usize,
    sys: &LinearSystem,
) -> Result<Vec<Vec<i64>>, GeometryError> {
    if !sys.is_feasible() {
        return Ok(vec![]);
    }
    if ambient == 0 {
        return Ok(vec![vec![]]);
    }
    let mut bounds = Vec::with_capacity(ambient);
    for i in 0..ambient {
        let mut row = vec![Q::zero(); ambient];
        row[i] = q_from_i64(1);
        let proj = sys.project_through(&[row]);
        let mut lo: Option<Q> = None;
        let mut hi: Option<Q> = None;
        for c in &proj.constraints {
            if c.normal[0].is_zero() {
                continue;
            }
            let bound = &c.offset / &c.normal[0];
            match c.rel {
                Rel::Eq => {
                    lo = Some(bound.clone());
                    hi = Some(bound);
                }
                Rel::Ge | Rel::Gt => {
                    if c.normal[0] > Q::zero() {
                        if lo.as_ref().is_none_or(|v| bound > *v) {
                            lo = Some(bound);
                        }
                    } else if hi.as_ref().is_none_or(|v| bound < *v) {
                        hi = Some(bound);
                    }
                }
            }
        }
        let (Some(lo), Some(hi)) = (lo, hi) else {
            return Err(GeometryError::Unbounded);
        };
        let lo_i = lo.ceil().to_integer();
        let hi_i = hi.floor().to_integer();
        let lo_i = i64::try_from(&lo_i).map_err(|_| GeometryError::Unbounded)?;
        let hi_i = i64::try_from(&hi_i).map_err(|_| GeometryError::Unbounded)?;
        bounds.push(lo_i..=hi_i);
    }
    let mut out = Vec::new();
    let mut point = vec![0i64; ambient];
    enumerate_box(sys, &bounds, 0, &mut point, &mut out);
    Ok(out)
}

fn enumerate_box(
    sys: &LinearSystem,
    bounds: &[std::ops::RangeInclusive<i64>],
    coord: usize,
    point: &mut Vec<i64>,
    out: &mut Vec<Vec<i64>>,
) {
    if coord == bounds.len() {
        let x: Vec<Q> = point.iter().map(|&v| q_from_i64(v)).collect();
        if sys.satisfied_by(&x) {
            out.push(point.clone());
        }
        return;
    }
    for v in bounds[coord].clone() {
        point[coord] = v;
        enumerate_box(sys, bounds, coord + 1, point, out);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qv(v: &[i64]) -> Vec<Q> {
        v.iter().map(|&x| q_from_i64(x)).collect()
    }

    fn closed_square() -> LinearSystem {
        let mut sys = LinearSystem::new(2);
        sys.push(Constraint::from_i64(&[1, 0], 0, Rel::Ge));
        sys.push(Constraint::from_i64(&[-1, 0], -1, Rel::Ge));
        sys.push(Constraint::from_i64(&[0, 1], 0, Rel::Ge));
        sys.push(Constraint::from_i64(&[0, -1], -1, Rel::Ge));
        sys
    }

    #[test]
    fn square_has_nine_faces() {
        let faces = faces_of_closed_system(2, &closed_square());
        assert_eq!(faces.len(), 9);
        let mut by_dim = [0usize; 3];
        for f in &faces {
            by_dim[f.dim()] += 1;
        }
        assert_eq!(by_dim, [4, 4, 1]);
        // Faces partition the closure: sample points of distinct faces differ
        // and satisfy exactly their own constraints.
        for (i, f) in faces.iter().enumerate() {
            let p = f.sample_point(0);
            for (j, g) in faces.iter().enumerate() {
                assert_eq!(g.contains(&p), i == j);
            }
        }
    }

    #[test]
    fn open_interval_cell() {
        let c = Cell::new(
            1,
            vec![],
            vec![(qv(&[1]), q_from_i64(0)), (qv(&[-1]), q_from_i64(-1))],
        )
        .unwrap();
        assert_eq!(c.dim(), 1);
        assert!(c.is_bounded());
        let p = c.sample_point(0);
        assert!(c.contains(&p));
        assert!(!c.contains(&qv(&[0])));
        assert!(c.closure_contains(&qv(&[0])));
        assert_eq!(c.lattice_points().unwrap(), Vec::<Vec<i64>>::new());
    }

    #[test]
    fn line_in_plane() {
        let c = Cell::new(2, vec![(qv(&[0, 1]), q_from_i64(0))], vec![]).unwrap();
        assert_eq!(c.dim(), 1);
        assert!(!c.is_bounded());
        let p = c.sample_point(0);
        assert_eq!(p[1], q_from_i64(0));
    }

    #[test]
    fn empty_cell_rejected() {
        let r = Cell::new(
            1,
            vec![],
            vec![(qv(&[1]), q_from_i64(0)), (qv(&[-1]), q_from_i64(0))],
        );
        assert!(r.is_err());
    }

    #[test]
    fn tangent_cone_at_corner() {
        // Open square, tangent cone at the origin corner of its closure.
        let c = Cell::new(
            2,
            vec![],
            vec![
                (qv(&[1, 0]), q_from_i64(0)),
                (qv(&[-1, 0]), q_from_i64(-1)),
                (qv(&[0, 1]), q_from_i64(0)),
                (qv(&[0, -1]), q_from_i64(-1)),
            ],
        )
        .unwrap();
        let t = c.tangent_cone_at(&qv(&[0, 0])).unwrap();
        assert!(t.is_conical());
        assert!(t.contains(&qv(&[1, 1])));
        assert!(!t.contains(&qv(&[-1, 1])));
        // Interior point: no active constraints, tangent cone is everything.
        let t2 = c
            .tangent_cone_at(&[q_from_i64(1) / q_from_i64(2), q_from_i64(1) / q_from_i64(2)])
            .unwrap();
        assert_eq!(t2.stricts().len(), 0);
    }

    #[test]
    fn lattice_points_triangle() {
        let mut sys = LinearSystem::new(2);
        sys.push(Constraint::from_i64(&[1, 0], 0, Rel::Ge));
        sys.push(Constraint::from_i64(&[0, 1], 0, Rel::Ge));
        sys.push(Constraint::from_i64(&[-1, -1], -2, Rel::Ge));
        let pts = lattice_points_of_system(2, &sys).unwrap();
        assert_eq!(pts.len(), 6);
    }
}
