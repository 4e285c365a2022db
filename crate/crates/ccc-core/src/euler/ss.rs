//! Singular support of a constructible function, recorded as a finite core:
//! per cell of the base refinement, the covector cells where the
//! microlocalization is nonzero. The closure of the union of base×covector
//! pairs is the singular support; the core itself is what every criterion in
//! this crate consumes, so the genuine closure is never materialized.

use super::conical::microlocalize;
use super::{ConstructibleFunction, EulerError};
use crate::geometry::{Cell, Cone};
use crate::linalg::{dot_zq, primitive_of_rational, q_from_i64, Q};
use crate::toric::Fan;
use num_traits::Zero;

#[derive(Clone, Debug)]
pub struct SsEntry {
    pub base: Cell,
    pub base_sample: Vec<Q>,
    /// Covector cells with the (nonzero) microlocal value on each.
    pub covectors: Vec<(Cell, i64)>,
}

#[derive(Clone, Debug)]
pub struct SingularSupportCore {
    pub ambient: usize,
    pub entries: Vec<SsEntry>,
}

impl SingularSupportCore {
    /// Microlocal value μ_{x,ξ} for x in a recorded base cell and ξ in a
    /// recorded covector cell; zero off the core.
    pub fn value(&self, x: &[Q], xi: &[Q]) -> i64 {
        for e in &self.entries {
            if e.base.contains(x) {
                for (c, v) in &e.covectors {
                    if c.contains(xi) {
                        return *v;
                    }
                }
                return 0;
            }
        }
        0
    }

    /// Pairs violating dim(base) + dim(covector) ≤ ambient. The singular
    /// support lies in a Lagrangian-dimensional set, so this must be empty.
    pub fn dimension_bound_violations(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for e in &self.entries {
            for (c, _) in &e.covectors {
                if e.base.dim() + c.dim() > self.ambient {
                    out.push((e.base.dim(), c.dim()));
                }
            }
        }
        out
    }
}

/// Compute the singular-support core of f: refine the term cells, compute μ
/// at a sample of each base cell, and keep the nonzero covector cells. A
/// second base sample checks that the covector pattern is constant on the
/// cell.
pub fn singular_support(f: &ConstructibleFunction) -> Result<SingularSupportCore, EulerError> {
    let n = f.ambient_dim();
    let arr = f.refinement();
    let mut entries = Vec::new();
    for ac in &arr.cells {
        let mu = microlocalize(f, &ac.sample)?;
        if ac.cell.dim() > 0 {
            let alt = ac.cell.sample_point(2);
            if alt != ac.sample {
                let mu2 = microlocalize(f, &alt)?;
                if !mu.as_function().equals(mu2.as_function())? {
                    return Err(EulerError::PushforwardNotConstant);
                }
            }
        }
        let canonical = mu.as_function().canonical_form();
        let covectors: Vec<(Cell, i64)> = canonical.terms().to_vec();
        if !covectors.is_empty() {
            entries.push(SsEntry {
                base: ac.cell.clone(),
                base_sample: ac.sample.clone(),
                covectors,
            });
        }
    }
    Ok(SingularSupportCore {
        ambient: n,
        entries,
    })
}

/// Witness for a failed conical-Lagrangian containment test.
#[derive(Clone, Debug)]
pub struct LambdaWitness {
    pub base_sample: Vec<Q>,
    pub covector_sample: Vec<Q>,
    pub value: i64,
}

/// Does SS(f) lie in the union over fan cones τ of (τ^⊥ + M) × (−τ)?
/// For each recorded pair (B, D) the test asks for a single cone τ with
/// D ⊆ −τ and the affine span of B inside m + τ^⊥ for one lattice point m.
pub fn ss_subset_lambda(
    f: &ConstructibleFunction,
    fan: &Fan,
) -> Result<(bool, Option<LambdaWitness>), EulerError> {
    if f.ambient_dim() != fan.dim() {
        return Err(EulerError::DimensionMismatch {
            expected: fan.dim(),
            got: f.ambient_dim(),
        });
    }
    let core = singular_support(f)?;
    let cones: Vec<(Cone, Vec<Vec<i64>>)> = (0..fan.cone_count())
        .map(|i| (fan.geometric_cone(i).antipode(), fan.cone_ray_vectors(i)))
        .collect();
    for e in &core.entries {
        // Direction space of the affine span of the base cell.
        let eq_normals: Vec<Vec<Q>> = e.base.equalities().iter().map(|(n, _)| n.clone()).collect();
        let direction = if eq_normals.is_empty() {
            crate::linalg::Subspace::full(core.ambient)
        } else {
            let rows = crate::linalg::QMat::from_rows(eq_normals);
            crate::linalg::Subspace::span(core.ambient, rows.nullspace())
        };
        for (d, v) in &e.covectors {
            let d_closure = closure_cone(d);
            let mut found = false;
            for (neg_tau, tau_rays) in &cones {
                // D ⊆ −τ.
                if !d_closure
                    .generators()
                    .iter()
                    .all(|g| neg_tau.contains_z(g))
                {
                    continue;
                }
                // Every ray of τ constant on the affine span of B…
                if !tau_rays.iter().all(|r| {
                    direction
                        .basis
                        .iter()
                        .all(|bvec| dot_zq(r, bvec).is_zero())
                }) {
                    continue;
                }
                // …with values realized by one lattice point.
                let x0 = &e.base_sample;
                let mut rhs = Vec::with_capacity(tau_rays.len());
                let mut integral = true;
                for r in tau_rays {
                    let c = dot_zq(r, x0);
                    if c.denom() == &num_bigint::BigInt::from(1) {
                        rhs.push(i64::try_from(c.numer()).expect("pairing fits i64"));
                    } else {
                        integral = false;
                        break;
                    }
                }
                if !integral {
                    continue;
                }
                if crate::linalg::solve_integer(tau_rays, &rhs).is_some() {
                    found = true;
                    break;
                }
            }
            if !found {
                return Ok((
                    false,
                    Some(LambdaWitness {
                        base_sample: e.base_sample.clone(),
                        covector_sample: d.sample_point(0),
                        value: *v,
                    }),
                ));
            }
        }
    }
    Ok((true, None))
}

/// Closure of a conical cell as a cone.
fn closure_cone(cell: &Cell) -> Cone {
    debug_assert!(cell.is_conical());
    let mut normals: Vec<Vec<i64>> = Vec::new();
    for (n, _) in cell.equalities() {
        let p = primitive_of_rational(n);
        if p.iter().any(|&x| x != 0) {
            normals.push(p.iter().map(|&x| -x).collect());
            normals.push(p);
        }
    }
    for (n, _) in cell.stricts() {
        let p = primitive_of_rational(n);
        if p.iter().any(|&x| x != 0) {
            normals.push(p);
        }
    }
    Cone::from_generators(cell.ambient_dim(), normals).dual()
}

/// Convenience: value of μ_x(f) at a given covector.
pub fn mu_value(f: &ConstructibleFunction, x: &[Q], xi: &[Q]) -> Result<i64, EulerError> {
    if xi.iter().all(|v| v.is_zero()) {
        return Ok(super::conical::specialize(f, x)?.as_function().integrate());
    }
    let mu = microlocalize(f, x)?;
    mu.evaluate(xi)
}

pub fn qvec(v: &[i64]) -> Vec<Q> {
    v.iter().map(|&x| q_from_i64(x)).collect()
}
