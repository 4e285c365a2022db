//! Conical functions, specialization at a point, and the Fourier–Sato
//! transform for functions.
//!
//! FT(f)(ξ) integrates f over the half-space {⟨ξ,v⟩ ≤ 1} for ξ ≠ 0, and
//! FT(f)(0) = ∫f. The half-space is split into the open part and the
//! hyperplane so every integrand stays a combination of relatively open
//! cells. For a conical cell C the two pieces contribute
//! (−1)^dim C + (−1)^{dim C − 1}·[sup_C ξ > 0], and the sup test reduces to
//! dot products against precomputed generators of the closure, which keeps
//! transform evaluation cheap on every cell of the output arrangement.

use super::{ConstructibleFunction, EulerError};
use crate::geometry::arrangement::{Arrangement, Hyperplane};
use crate::geometry::{Cell, Cone};
use crate::linalg::{dot_zq, primitive_of_rational, Q};
use num_traits::Zero;

/// A constructible function all of whose cells are homogeneous, hence
/// invariant under positive dilation.
#[derive(Clone, Debug)]
pub struct ConicalFunction(ConstructibleFunction);

impl ConicalFunction {
    pub fn new(f: ConstructibleFunction) -> Result<Self, EulerError> {
        if !f.is_conical_presentation() {
            return Err(EulerError::NotConical);
        }
        Ok(ConicalFunction(f))
    }

    pub fn as_function(&self) -> &ConstructibleFunction {
        &self.0
    }

    pub fn into_function(self) -> ConstructibleFunction {
        self.0
    }

    pub fn ambient_dim(&self) -> usize {
        self.0.ambient_dim()
    }

    pub fn evaluate(&self, x: &[Q]) -> Result<i64, EulerError> {
        self.0.evaluate(x)
    }

    pub fn evaluate_z(&self, x: &[i64]) -> Result<i64, EulerError> {
        self.0.evaluate_z(x)
    }

    /// Pullback along the antipodal map.
    pub fn antipode(&self) -> ConicalFunction {
        let terms = self
            .0
            .terms()
            .iter()
            .map(|(c, w)| {
                let flip = |(n, b): &(Vec<Q>, Q)| {
                    (n.iter().map(|v| -v.clone()).collect::<Vec<Q>>(), b.clone())
                };
                let cell = Cell::new(
                    c.ambient_dim(),
                    c.equalities().iter().map(flip).collect(),
                    c.stricts().iter().map(flip).collect(),
                )
                .expect("antipode of a nonempty cone is nonempty");
                (cell, *w)
            })
            .collect();
        ConicalFunction(
            ConstructibleFunction::from_terms(self.0.ambient_dim(), terms)
                .expect("dimensions preserved"),
        )
    }
}

/// Germ of f at x as a conical function on the tangent space: per term whose
/// closure contains x, keep homogenized equalities and the active strict
/// inequalities. Agrees with f on a punctured neighborhood translated to the
/// origin.
pub fn specialize(f: &ConstructibleFunction, x: &[Q]) -> Result<ConicalFunction, EulerError> {
    if x.len() != f.ambient_dim() {
        return Err(EulerError::DimensionMismatch {
            expected: f.ambient_dim(),
            got: x.len(),
        });
    }
    let mut terms = Vec::new();
    for (c, w) in f.terms() {
        if let Some(tc) = c.tangent_cone_at(x) {
            terms.push((tc, *w));
        }
    }
    ConicalFunction::new(ConstructibleFunction::from_terms(f.ambient_dim(), terms)?)
}

/// Per-term data reused across every evaluation point of the transform.
struct TermGeometry {
    weight: i64,
    dim: usize,
    closure_generators: Vec<Vec<i64>>,
}

fn term_geometry(cell: &Cell, weight: i64) -> TermGeometry {
    let mut normals: Vec<Vec<i64>> = Vec::new();
    for (n, _) in cell.equalities() {
        let p = primitive_of_rational(n);
        if p.iter().any(|&v| v != 0) {
            normals.push(p.iter().map(|&v| -v).collect());
            normals.push(p);
        }
    }
    for (n, _) in cell.stricts() {
        let p = primitive_of_rational(n);
        if p.iter().any(|&v| v != 0) {
            normals.push(p);
        }
    }
    // closure(C) = {x : ⟨n,x⟩ ≥ 0 ∀ normals n} = cone(normals)∨.
    let closure = Cone::from_generators(cell.ambient_dim(), normals).dual();
    TermGeometry {
        weight,
        dim: cell.dim(),
        closure_generators: closure.generators().to_vec(),
    }
}

fn ft_value(terms: &[TermGeometry], xi: &[Q]) -> i64 {
    let mut acc = 0i64;
    for t in terms {
        let has_pos = t
            .closure_generators
            .iter()
            .any(|g| dot_zq(g, xi) > Q::zero());
        let base = if t.dim % 2 == 0 { 1 } else { -1 };
        // (−1)^dim from the open half-space, plus (−1)^{dim−1} from the
        // hyperplane slice when the cone sees positive values of ξ.
        let contribution = if has_pos { 0 } else { base };
        acc += t.weight * contribution;
    }
    acc
}

/// The Fourier–Sato transform for functions.
pub fn fourier_sato(f: &ConicalFunction) -> Result<ConicalFunction, EulerError> {
    let n = f.ambient_dim();
    let geoms: Vec<TermGeometry> = f
        .as_function()
        .terms()
        .iter()
        .map(|(c, w)| term_geometry(c, *w))
        .collect();
    let mut hyperplanes = Vec::new();
    for g in &geoms {
        for v in &g.closure_generators {
            if let Some(h) = Hyperplane::from_i64(v, 0) {
                hyperplanes.push(h);
            }
        }
    }
    // Coordinate hyperplanes guarantee that the origin is its own cell, so
    // the special value FT(f)(0) = ∫f is always representable.
    for i in 0..n {
        let mut e = vec![0i64; n];
        e[i] = 1;
        if let Some(h) = Hyperplane::from_i64(&e, 0) {
            hyperplanes.push(h);
        }
    }
    let arr = Arrangement::from_hyperplanes(n, hyperplanes);
    let total = f.as_function().integrate();
    let origin = vec![Q::zero(); n];
    let mut terms = Vec::new();
    for ac in &arr.cells {
        let value = if ac.cell.contains(&origin) {
            total
        } else {
            let v = ft_value(&geoms, &ac.sample);
            if ac.cell.dim() > 0 {
                let alt = ac.cell.sample_point(2);
                if alt != ac.sample {
                    debug_assert_eq!(ft_value(&geoms, &alt), v, "transform not cellwise constant");
                }
            }
            v
        };
        if value != 0 {
            terms.push((ac.cell.clone(), value));
        }
    }
    ConicalFunction::new(ConstructibleFunction::from_terms(n, terms)?)
}

/// Microlocalization μ_x(f) = FT(ν_x(f)).
pub fn microlocalize(
    f: &ConstructibleFunction,
    x: &[Q],
) -> Result<ConicalFunction, EulerError> {
    fourier_sato(&specialize(f, x)?)
}

/// Direct evaluation of FT(f) at a single covector, bypassing the output
/// arrangement; `xi = 0` returns ∫f.
pub fn ft_value_at(f: &ConicalFunction, xi: &[Q]) -> i64 {
    if xi.iter().all(|v| v.is_zero()) {
        return f.as_function().integrate();
    }
    let geoms: Vec<TermGeometry> = f
        .as_function()
        .terms()
        .iter()
        .map(|(c, w)| term_geometry(c, *w))
        .collect();
    ft_value(&geoms, xi)
}

/// FT of the standard indicator of a cone is the plain indicator of the
/// relative interior of the dual cone; used as the closed-form side of the
/// exchange identities in tests.
pub fn indicator_of_relint(cone: &Cone) -> ConstructibleFunction {
    ConstructibleFunction::from_terms(
        cone.ambient_dim(),
        vec![(cone.relative_interior(), 1)],
    )
    .expect("relative interior is a valid cell")
}
