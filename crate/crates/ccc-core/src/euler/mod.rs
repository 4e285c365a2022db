//! Euler calculus of polyhedral constructible functions.
//!
//! A constructible function is a finite integer combination of indicator
//! functions of relatively open polyhedral cells. Because every cell is
//! relatively open and convex, its compactly supported Euler characteristic
//! is (−1)^dim, and integration against Euler characteristic measure is the
//! linear extension. Pushforward integrates over fibers; its target
//! arrangement is generated by the exact Fourier–Motzkin images of the term
//! cells (the image of a relatively open convex cell is relatively open with
//! constant fiber dimension, so value breaks only occur on the bounding
//! hyperplanes of those images), and a second interior sample per target
//! cell turns that argument into a runtime check.

pub mod conical;
pub mod ss;

pub use conical::ConicalFunction;
pub use ss::SingularSupportCore;

use crate::geometry::arrangement::{Arrangement, Hyperplane};
use crate::geometry::{Cell, GeometryError};
use crate::linalg::{dot_qq, q_from_i64, QMat, Q};
use num_traits::Zero;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum EulerError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("operation requires a conical function")]
    NotConical,
    #[error("product space dimension {0} exceeds the supported bound 4")]
    ProductDimTooLarge(usize),
    #[error("scaling factor must be a positive integer, got {0}")]
    BadScale(i64),
    #[error("pushforward value not constant on a target cell")]
    PushforwardNotConstant,
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IndicatorKind {
    /// Indicator of the closure: 1 on every face.
    Standard,
    /// (−1)^dim on the relative interior, 0 elsewhere.
    Costandard,
}

/// f = Σ weight · 1_cell over finitely many relatively open cells.
#[derive(Clone, Debug)]
pub struct ConstructibleFunction {
    ambient: usize,
    terms: Vec<(Cell, i64)>,
}

impl ConstructibleFunction {
    pub fn zero(ambient: usize) -> Self {
        ConstructibleFunction {
            ambient,
            terms: vec![],
        }
    }

    pub fn from_terms(ambient: usize, terms: Vec<(Cell, i64)>) -> Result<Self, EulerError> {
        for (c, _) in &terms {
            if c.ambient_dim() != ambient {
                return Err(EulerError::DimensionMismatch {
                    expected: ambient,
                    got: c.ambient_dim(),
                });
            }
        }
        Ok(ConstructibleFunction {
            ambient,
            terms: terms.into_iter().filter(|(_, w)| *w != 0).collect(),
        })
    }

    pub fn indicator(kind: IndicatorKind, cell: &Cell) -> Self {
        match kind {
            IndicatorKind::Standard => {
                let terms = cell.faces().into_iter().map(|f| (f, 1)).collect();
                ConstructibleFunction {
                    ambient: cell.ambient_dim(),
                    terms,
                }
            }
            IndicatorKind::Costandard => {
                let sign = if cell.dim() % 2 == 0 { 1 } else { -1 };
                ConstructibleFunction {
                    ambient: cell.ambient_dim(),
                    terms: vec![(cell.clone(), sign)],
                }
            }
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn terms(&self) -> &[(Cell, i64)] {
        &self.terms
    }

    pub fn evaluate(&self, x: &[Q]) -> Result<i64, EulerError> {
        if x.len() != self.ambient {
            return Err(EulerError::DimensionMismatch {
                expected: self.ambient,
                got: x.len(),
            });
        }
        Ok(self
            .terms
            .iter()
            .filter(|(c, _)| c.contains(x))
            .map(|(_, w)| *w)
            .sum())
    }

    pub fn evaluate_z(&self, x: &[i64]) -> Result<i64, EulerError> {
        let xq: Vec<Q> = x.iter().map(|&v| q_from_i64(v)).collect();
        self.evaluate(&xq)
    }

    /// Integration against Euler characteristic measure: every relatively
    /// open cell contributes (−1)^dim.
    pub fn integrate(&self) -> i64 {
        self.terms
            .iter()
            .map(|(c, w)| if c.dim() % 2 == 0 { *w } else { -*w })
            .sum()
    }

    pub fn add(&self, other: &ConstructibleFunction) -> Result<Self, EulerError> {
        if other.ambient != self.ambient {
            return Err(EulerError::DimensionMismatch {
                expected: self.ambient,
                got: other.ambient,
            });
        }
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        Ok(ConstructibleFunction {
            ambient: self.ambient,
            terms,
        })
    }

    pub fn negate(&self) -> Self {
        ConstructibleFunction {
            ambient: self.ambient,
            terms: self.terms.iter().map(|(c, w)| (c.clone(), -w)).collect(),
        }
    }

    pub fn sub(&self, other: &ConstructibleFunction) -> Result<Self, EulerError> {
        self.add(&other.negate())
    }

    pub fn scale_weights(&self, k: i64) -> Self {
        ConstructibleFunction {
            ambient: self.ambient,
            terms: self
                .terms
                .iter()
                .filter(|(_, w)| k * w != 0)
                .map(|(c, w)| (c.clone(), k * w))
                .collect(),
        }
    }

    /// Pullback along a linear map u (matrix rows = codomain coordinates):
    /// (u*f)(x) = f(u x), by substituting a·(Ux) = (Uᵀa)·x in every constraint.
    pub fn pullback(&self, u: &QMat) -> Result<Self, EulerError> {
        if u.rows != self.ambient {
            return Err(EulerError::DimensionMismatch {
                expected: self.ambient,
                got: u.rows,
            });
        }
        let domain = u.cols;
        let ut = u.transpose();
        let mut terms = Vec::new();
        for (c, w) in &self.terms {
            let sub = |(n, b): &(Vec<Q>, Q)| (ut.mul_vec(n), b.clone());
            let eqs: Vec<(Vec<Q>, Q)> = c.equalities().iter().map(sub).collect();
            let sts: Vec<(Vec<Q>, Q)> = c.stricts().iter().map(sub).collect();
            if let Ok(cell) = Cell::new(domain, eqs, sts) {
                terms.push((cell, *w));
            }
        }
        Ok(ConstructibleFunction {
            ambient: domain,
            terms,
        })
    }

    /// Pushforward along a linear map u: fiberwise Euler integration.
    pub fn pushforward(&self, u: &QMat) -> Result<Self, EulerError> {
        if u.cols != self.ambient {
            return Err(EulerError::DimensionMismatch {
                expected: self.ambient,
                got: u.cols,
            });
        }
        let target = u.rows;
        let mut hyperplanes = Vec::new();
        for (c, _) in &self.terms {
            let image = c.system().project_through(&u.data);
            for cons in &image.constraints {
                if let Some(h) = Hyperplane::new(&cons.normal, &cons.offset) {
                    hyperplanes.push(h);
                }
            }
        }
        let arr = Arrangement::from_hyperplanes(target, hyperplanes);
        let fiber_integral = |y: &[Q]| -> i64 {
            let mut acc = 0i64;
            for (c, w) in &self.terms {
                let eqs: Vec<(Vec<Q>, Q)> = u
                    .data
                    .iter()
                    .zip(y)
                    .map(|(row, yi)| (row.clone(), yi.clone()))
                    .collect();
                if let Some(slice) = c.intersect(eqs, vec![]) {
                    acc += if slice.dim() % 2 == 0 { *w } else { -*w };
                }
            }
            acc
        };
        let mut terms = Vec::new();
        for ac in &arr.cells {
            let v = fiber_integral(&ac.sample);
            if ac.cell.dim() > 0 {
                let alt = ac.cell.sample_point(2);
                if alt != ac.sample && fiber_integral(&alt) != v {
                    return Err(EulerError::PushforwardNotConstant);
                }
            }
            if v != 0 {
                terms.push((ac.cell.clone(), v));
            }
        }
        Ok(ConstructibleFunction {
            ambient: target,
            terms,
        })
    }

    /// Convolution f ⋆ g = v_!(f × g) along the addition map, computed
    /// literally as a product-space pushforward.
    pub fn convolve(&self, other: &ConstructibleFunction) -> Result<Self, EulerError> {
        if other.ambient != self.ambient {
            return Err(EulerError::DimensionMismatch {
                expected: self.ambient,
                got: other.ambient,
            });
        }
        let n = self.ambient;
        if 2 * n > 4 {
            return Err(EulerError::ProductDimTooLarge(2 * n));
        }
        let mut product_terms = Vec::new();
        for (c, w) in &self.terms {
            for (d, v) in &other.terms {
                let pad = |(nrm, b): &(Vec<Q>, Q), first: bool| {
                    let mut out = vec![Q::zero(); 2 * n];
                    for i in 0..n {
                        out[if first { i } else { n + i }] = nrm[i].clone();
                    }
                    (out, b.clone())
                };
                let mut eqs: Vec<(Vec<Q>, Q)> =
                    c.equalities().iter().map(|x| pad(x, true)).collect();
                eqs.extend(d.equalities().iter().map(|x| pad(x, false)));
                let mut sts: Vec<(Vec<Q>, Q)> =
                    c.stricts().iter().map(|x| pad(x, true)).collect();
                sts.extend(d.stricts().iter().map(|x| pad(x, false)));
                let cell = Cell::new(2 * n, eqs, sts).expect("product of nonempty cells");
                product_terms.push((cell, w * v));
            }
        }
        let product = ConstructibleFunction {
            ambient: 2 * n,
            terms: product_terms,
        };
        // Addition map [I | I].
        let mut add = QMat::new(n, 2 * n);
        for i in 0..n {
            add.data[i][i] = q_from_i64(1);
            add.data[i][n + i] = q_from_i64(1);
        }
        product.pushforward(&add)
    }

    /// The dilation x ↦ f(x/k) for a positive integer k.
    pub fn scale_argument(&self, k: i64) -> Result<Self, EulerError> {
        if k <= 0 {
            return Err(EulerError::BadScale(k));
        }
        let kq = q_from_i64(k);
        let terms = self
            .terms
            .iter()
            .map(|(c, w)| {
                let stretch = |(n, b): &(Vec<Q>, Q)| (n.clone(), b * &kq);
                let cell = Cell::new(
                    self.ambient,
                    c.equalities().iter().map(stretch).collect(),
                    c.stricts().iter().map(stretch).collect(),
                )
                .expect("dilation preserves nonemptiness");
                (cell, *w)
            })
            .collect();
        Ok(ConstructibleFunction {
            ambient: self.ambient,
            terms,
        })
    }

    pub fn translate(&self, t: &[Q]) -> Self {
        ConstructibleFunction {
            ambient: self.ambient,
            terms: self
                .terms
                .iter()
                .map(|(c, w)| (c.translate(t), *w))
                .collect(),
        }
    }

    /// The common-refinement arrangement of all term cells.
    pub fn refinement(&self) -> Arrangement {
        let cells: Vec<&Cell> = self.terms.iter().map(|(c, _)| c).collect();
        Arrangement::refine(self.ambient, &cells)
    }

    /// Canonical form: one term per refinement cell with nonzero value.
    pub fn canonical_form(&self) -> Self {
        let arr = self.refinement();
        let mut terms = Vec::new();
        for ac in &arr.cells {
            let v = self
                .evaluate(&ac.sample)
                .expect("sample has matching dimension");
            if v != 0 {
                terms.push((ac.cell.clone(), v));
            }
        }
        ConstructibleFunction {
            ambient: self.ambient,
            terms,
        }
    }

    /// Decide pointwise equality by sampling every cell of the common
    /// refinement; exact because both functions are constant on those cells.
    pub fn equals(&self, other: &ConstructibleFunction) -> Result<bool, EulerError> {
        if other.ambient != self.ambient {
            return Err(EulerError::DimensionMismatch {
                expected: self.ambient,
                got: other.ambient,
            });
        }
        let cells: Vec<&Cell> = self
            .terms
            .iter()
            .chain(other.terms.iter())
            .map(|(c, _)| c)
            .collect();
        let arr = Arrangement::refine(self.ambient, &cells);
        for ac in &arr.cells {
            if self.evaluate(&ac.sample)? != other.evaluate(&ac.sample)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn is_zero_function(&self) -> bool {
        self.terms.is_empty()
            || self
                .refinement()
                .cells
                .iter()
                .all(|ac| self.evaluate(&ac.sample).unwrap() == 0)
    }

    /// Support is contained in cells with all-homogeneous constraints.
    pub fn is_conical_presentation(&self) -> bool {
        self.terms.iter().all(|(c, _)| c.is_conical())
    }
}

/// Indicator of a closed polytope given by a weak-inequality system, as a
/// standard constructible function (sum over the faces).
pub fn standard_of_closed_system(
    ambient: usize,
    sys: &crate::geometry::LinearSystem,
) -> Result<ConstructibleFunction, EulerError> {
    let faces = crate::geometry::cell::faces_of_closed_system(ambient, sys);
    if faces.is_empty() {
        return Ok(ConstructibleFunction::zero(ambient));
    }
    ConstructibleFunction::from_terms(ambient, faces.into_iter().map(|f| (f, 1)).collect())
}

pub fn point_indicator(p: &[Q]) -> ConstructibleFunction {
    ConstructibleFunction {
        ambient: p.len(),
        terms: vec![(Cell::point(p), 1)],
    }
}

pub fn constant_function(ambient: usize, value: i64) -> ConstructibleFunction {
    if value == 0 {
        return ConstructibleFunction::zero(ambient);
    }
    ConstructibleFunction {
        ambient,
        terms: vec![(Cell::full(ambient), value)],
    }
}

/// Evaluate a rational point into Q coordinates.
pub fn qpoint(coords: &[i64]) -> Vec<Q> {
    coords.iter().map(|&v| q_from_i64(v)).collect()
}

/// Helper for building cells from integer data in tests and fixtures.
pub fn cell_from_i64(
    ambient: usize,
    eqs: &[(&[i64], i64)],
    sts: &[(&[i64], i64)],
) -> Result<Cell, GeometryError> {
    let conv = |(n, b): &(&[i64], i64)| {
        (
            n.iter().map(|&v| q_from_i64(v)).collect::<Vec<Q>>(),
            q_from_i64(*b),
        )
    };
    Cell::new(
        ambient,
        eqs.iter().map(conv).collect(),
        sts.iter().map(conv).collect(),
    )
}

/// ⟨a, x⟩ for rational a over rational x (re-export for downstream modules).
pub fn pair(a: &[Q], x: &[Q]) -> Q {
    dot_qq(a, x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::LinearSystem;
    use crate::geometry::{Constraint, Rel};

    fn closed_interval(a: i64, b: i64) -> ConstructibleFunction {
        let mut sys = LinearSystem::new(1);
        sys.push(Constraint::from_i64(&[1], a, Rel::Ge));
        sys.push(Constraint::from_i64(&[-1], -b, Rel::Ge));
        standard_of_closed_system(1, &sys).unwrap()
    }

    fn open_interval(a: i64, b: i64) -> Cell {
        cell_from_i64(1, &[], &[(&[1], a), (&[-1], -b)]).unwrap()
    }

    #[test]
    fn indicator_values() {
        // Costandard of (0,1): −1 on the interval, 0 elsewhere.
        let j = ConstructibleFunction::indicator(IndicatorKind::Costandard, &open_interval(0, 1));
        assert_eq!(j.evaluate(&[q_from_i64(1) / q_from_i64(2)]).unwrap(), -1);
        assert_eq!(j.evaluate_z(&[0]).unwrap(), 0);
        assert_eq!(j.evaluate_z(&[5]).unwrap(), 0);
        // Standard of the ray [0,∞): 1 at 0 and on the open ray.
        let ray = cell_from_i64(1, &[], &[(&[1], 0)]).unwrap();
        let i = ConstructibleFunction::indicator(IndicatorKind::Standard, &ray);
        assert_eq!(i.evaluate_z(&[0]).unwrap(), 1);
        assert_eq!(i.evaluate_z(&[7]).unwrap(), 1);
        assert_eq!(i.evaluate_z(&[-1]).unwrap(), 0);
        // Costandard of the closed square: +1 on the interior, 0 on the boundary.
        let square = cell_from_i64(
            2,
            &[],
            &[
                (&[1, 0], 0),
                (&[-1, 0], -1),
                (&[0, 1], 0),
                (&[0, -1], -1),
            ],
        )
        .unwrap();
        let jq = ConstructibleFunction::indicator(IndicatorKind::Costandard, &square);
        assert_eq!(
            jq.evaluate(&[q_from_i64(1) / q_from_i64(2), q_from_i64(1) / q_from_i64(3)])
                .unwrap(),
            1
        );
        assert_eq!(jq.evaluate_z(&[0, 0]).unwrap(), 0);
    }

    #[test]
    fn evaluate_mixed() {
        let i = closed_interval(0, 1);
        let j = ConstructibleFunction::indicator(IndicatorKind::Costandard, &open_interval(0, 1));
        assert_eq!(i.evaluate_z(&[1]).unwrap(), 1);
        assert_eq!(j.evaluate_z(&[1]).unwrap(), 0);
        let diff = i.sub(&j).unwrap();
        // 1 − (−1) = 2 at the midpoint.
        assert_eq!(diff.evaluate(&[q_from_i64(1) / q_from_i64(2)]).unwrap(), 2);
    }

    #[test]
    fn integrate_examples() {
        // ∫ j_P = 1 for any cell.
        let square = cell_from_i64(2, &[], &[(&[1, 0], 0), (&[0, 1], 0)]).unwrap();
        let j = ConstructibleFunction::indicator(IndicatorKind::Costandard, &square);
        assert_eq!(j.integrate(), 1);
        // χ_c of a closed polytope is 1.
        assert_eq!(closed_interval(-2, 5).integrate(), 1);
        // χ_c of a closed ray is 0: point + open ray.
        let ray = cell_from_i64(1, &[], &[(&[1], 0)]).unwrap();
        let i = ConstructibleFunction::indicator(IndicatorKind::Standard, &ray);
        assert_eq!(i.integrate(), 0);
    }

    #[test]
    fn pullback_examples() {
        let square_i = {
            let mut sys = LinearSystem::new(2);
            sys.push(Constraint::from_i64(&[1, 0], 0, Rel::Ge));
            sys.push(Constraint::from_i64(&[-1, 0], -1, Rel::Ge));
            sys.push(Constraint::from_i64(&[0, 1], 0, Rel::Ge));
            sys.push(Constraint::from_i64(&[0, -1], -1, Rel::Ge));
            standard_of_closed_system(2, &sys).unwrap()
        };
        // Pull back along the diagonal t ↦ (t,t): indicator of [0,1].
        let diag = QMat::from_i64_rows(&[vec![1], vec![1]]);
        let pulled = square_i.pullback(&diag).unwrap();
        assert!(pulled.equals(&closed_interval(0, 1)).unwrap());
        // Identity pullback is the identity.
        let id = QMat::identity(2);
        assert!(square_i.pullback(&id).unwrap().equals(&square_i).unwrap());
        // Zero map pulls back to the constant f(0).
        let zero = QMat::new(2, 1);
        let z = square_i.pullback(&zero).unwrap();
        assert_eq!(z.evaluate_z(&[42]).unwrap(), square_i.evaluate_z(&[0, 0]).unwrap());
    }

    #[test]
    fn pushforward_examples() {
        let proj = QMat::from_i64_rows(&[vec![1, 0]]);
        // j of the open unit square pushes to j of (0,1).
        let open_square = cell_from_i64(
            2,
            &[],
            &[(&[1, 0], 0), (&[-1, 0], -1), (&[0, 1], 0), (&[0, -1], -1)],
        )
        .unwrap();
        let j = ConstructibleFunction::indicator(IndicatorKind::Costandard, &open_square);
        let pushed = j.pushforward(&proj).unwrap();
        let expected =
            ConstructibleFunction::indicator(IndicatorKind::Costandard, &open_interval(0, 1));
        assert!(pushed.equals(&expected).unwrap());
        // i of the closed triangle pushes to i of [0,1].
        let mut tri = LinearSystem::new(2);
        tri.push(Constraint::from_i64(&[1, 0], 0, Rel::Ge));
        tri.push(Constraint::from_i64(&[0, 1], 0, Rel::Ge));
        tri.push(Constraint::from_i64(&[-1, -1], -1, Rel::Ge));
        let i_tri = standard_of_closed_system(2, &tri).unwrap();
        let pushed_tri = i_tri.pushforward(&proj).unwrap();
        assert!(pushed_tri.equals(&closed_interval(0, 1)).unwrap());
        // Pushforward to a point integrates.
        let to_point = QMat::new(0, 2);
        let at_point = i_tri.pushforward(&to_point).unwrap();
        assert_eq!(at_point.evaluate(&[]).unwrap(), i_tri.integrate());
    }

    #[test]
    fn convolution_examples() {
        let a = closed_interval(0, 1);
        let b = closed_interval(0, 2);
        let c = a.convolve(&b).unwrap();
        assert!(c.equals(&closed_interval(0, 3)).unwrap());
        // Dirac unit.
        let delta = point_indicator(&[q_from_i64(0)]);
        assert!(a.convolve(&delta).unwrap().equals(&a).unwrap());
    }

    #[test]
    fn scale_argument_examples() {
        let one = ConstructibleFunction::from_terms(1, vec![(open_interval(0, 1), 1)]).unwrap();
        let two = one.scale_argument(2).unwrap();
        let expected =
            ConstructibleFunction::from_terms(1, vec![(open_interval(0, 2), 1)]).unwrap();
        assert!(two.equals(&expected).unwrap());
        assert!(one.scale_argument(1).unwrap().equals(&one).unwrap());
        let delta = point_indicator(&[q_from_i64(0)]);
        assert!(delta.scale_argument(5).unwrap().equals(&delta).unwrap());
        assert!(one.scale_argument(0).is_err());
    }

    #[test]
    fn equality_is_semantic() {
        // The same function presented with different cell decompositions.
        let whole = closed_interval(0, 2);
        let left = closed_interval(0, 1);
        let right = closed_interval(1, 2);
        let point = point_indicator(&[q_from_i64(1)]);
        let glued = left.add(&right).unwrap().sub(&point).unwrap();
        assert!(whole.equals(&glued).unwrap());
        assert!(!whole.equals(&left).unwrap());
    }
}
