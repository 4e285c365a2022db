//! Toric input models: fans with smoothness/completeness validation,
//! equivariant line bundles as Cartier data, Klyachko filtration data with
//! per-cone splittings, and the bundle-to-constructible-function map.

pub mod cartier;
pub mod fixtures;
pub mod klyachko;
pub mod morelli;
pub mod random;

pub use cartier::CartierData;
pub use klyachko::{ConeSplitting, KlyachkoBundle, Splittings};

use crate::geometry::arrangement::{Arrangement, Hyperplane};
use crate::geometry::Cone;
use crate::linalg::{primitive, QMat};
use num_integer::Integer;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ToricError {
    #[error("ray {0} is not primitive")]
    NonPrimitiveRay(usize),
    #[error("duplicate ray {0:?}")]
    DuplicateRay(Vec<i64>),
    #[error("ray index {0} out of range")]
    BadRayIndex(usize),
    #[error("ray {0:?} has wrong dimension")]
    BadRayDim(Vec<i64>),
    #[error("fan is not smooth (cone {0:?})")]
    NotSmooth(Vec<usize>),
    #[error("fan is not simplicial (cone {0:?})")]
    NotSimplicial(Vec<usize>),
    #[error("cones {0:?} and {1:?} intersect off their common face")]
    Overlap(Vec<usize>, Vec<usize>),
    #[error("incompatible Cartier data on the shared face of cones {0:?} and {1:?}")]
    IncompatibleCartier(Vec<usize>, Vec<usize>),
    #[error("every ray must lie in a cone carrying Cartier data; ray {0} does not")]
    UncoveredRay(usize),
    #[error("Klyachko filtration data violates its invariants: {0}")]
    BadFiltration(String),
    #[error("condition (C) fails on cone {0:?}")]
    ConditionCFailure(Vec<usize>),
    #[error("fans disagree between operands")]
    FanMismatch,
    #[error("{0}")]
    Invalid(String),
}

/// A fan in N_R: primitive rays plus cones given as ray-index sets. All faces
/// are carried explicitly (for simplicial cones the faces are exactly the
/// subsets). Each cone stores an ordered ray list fixing its orientation;
/// the default order is ascending ray index.
#[derive(Clone, Debug)]
pub struct Fan {
    dim: usize,
    rays: Vec<Vec<i64>>,
    /// The cones as supplied (sorted ray-index lists).
    input_cones: Vec<Vec<usize>>,
    /// Face closure of the input cones, sorted by (size, lex); entry 0 is ∅.
    cones: Vec<Vec<usize>>,
    /// Oriented ray list per cone of `cones`.
    orientation: Vec<Vec<usize>>,
    simplicial: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FanReport {
    pub simplicial: bool,
    pub smooth: bool,
    pub complete: bool,
    pub overlap_witness: Option<(Vec<usize>, Vec<usize>)>,
}

impl Fan {
    pub fn new(
        dim: usize,
        rays: Vec<Vec<i64>>,
        cones: Vec<Vec<usize>>,
    ) -> Result<Fan, ToricError> {
        for (i, r) in rays.iter().enumerate() {
            if r.len() != dim {
                return Err(ToricError::BadRayDim(r.clone()));
            }
            if r.iter().all(|&v| v == 0) || primitive(r) != *r {
                return Err(ToricError::NonPrimitiveRay(i));
            }
        }
        for i in 0..rays.len() {
            for j in i + 1..rays.len() {
                if rays[i] == rays[j] {
                    return Err(ToricError::DuplicateRay(rays[i].clone()));
                }
            }
        }
        let mut input: Vec<Vec<usize>> = Vec::new();
        for c in cones {
            let mut c = c;
            c.sort_unstable();
            c.dedup();
            for &i in &c {
                if i >= rays.len() {
                    return Err(ToricError::BadRayIndex(i));
                }
            }
            input.push(c);
        }
        input.sort();
        input.dedup();
        let simplicial = input.iter().all(|c| {
            let mat: Vec<Vec<i64>> = c.iter().map(|&i| rays[i].clone()).collect();
            c.is_empty() || QMat::from_i64_rows(&mat).rank() == c.len()
        });
        // Face closure. For simplicial cones the faces are exactly the ray
        // subsets; otherwise keep the cones as given plus the zero cone.
        let mut all: Vec<Vec<usize>> = vec![vec![]];
        if simplicial {
            for c in &input {
                let k = c.len();
                for mask in 1u32..(1 << k) {
                    let face: Vec<usize> = (0..k).filter(|&b| mask & (1 << b) != 0).map(|b| c[b]).collect();
                    all.push(face);
                }
            }
        } else {
            all.extend(input.iter().cloned());
        }
        all.sort_by(|a, b| (a.len(), a.clone()).cmp(&(b.len(), b.clone())));
        all.dedup();
        let orientation = all.clone();
        Ok(Fan {
            dim,
            rays,
            input_cones: input,
            cones: all,
            orientation,
            simplicial,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rays(&self) -> &[Vec<i64>] {
        &self.rays
    }

    pub fn ray(&self, i: usize) -> &[i64] {
        &self.rays[i]
    }

    pub fn input_cones(&self) -> &[Vec<usize>] {
        &self.input_cones
    }

    pub fn cone_count(&self) -> usize {
        self.cones.len()
    }

    pub fn cone_rays(&self, idx: usize) -> &[usize] {
        &self.cones[idx]
    }

    pub fn cone_ray_vectors(&self, idx: usize) -> Vec<Vec<i64>> {
        self.cones[idx].iter().map(|&i| self.rays[i].clone()).collect()
    }

    /// Dimension of a (simplicial) cone is its ray count.
    pub fn cone_dim(&self, idx: usize) -> usize {
        self.cones[idx].len()
    }

    pub fn cones_of_dim(&self, d: usize) -> Vec<usize> {
        (0..self.cones.len()).filter(|&i| self.cone_dim(i) == d).collect()
    }

    pub fn zero_cone(&self) -> usize {
        0
    }

    pub fn top_cones(&self) -> Vec<usize> {
        self.cones_of_dim(self.dim)
    }

    /// Input cones of maximal dimension (the chart cover used by Cartier data).
    pub fn maximal_input_cones(&self) -> Vec<Vec<usize>> {
        let d = self.input_cones.iter().map(|c| c.len()).max().unwrap_or(0);
        self.input_cones.iter().filter(|c| c.len() == d).cloned().collect()
    }

    pub fn index_of_cone(&self, ray_set: &[usize]) -> Option<usize> {
        let mut key = ray_set.to_vec();
        key.sort_unstable();
        key.dedup();
        self.cones.iter().position(|c| *c == key)
    }

    /// σ_a a face of σ_b (subset of rays; valid for simplicial fans).
    pub fn is_face(&self, a: usize, b: usize) -> bool {
        self.cones[a].iter().all(|r| self.cones[b].contains(r))
    }

    pub fn geometric_cone(&self, idx: usize) -> Cone {
        Cone::from_generators(self.dim, self.cone_ray_vectors(idx))
    }

    /// A lattice point in the relative interior (`variant` picks different
    /// points for positive-dimensional cones).
    pub fn relint_sample(&self, idx: usize, variant: u64) -> Vec<i64> {
        let mut p = vec![0i64; self.dim];
        for (k, &ri) in self.cones[idx].iter().enumerate() {
            let coef = 1 + (variant as i64) * (k as i64 + 1);
            for (i, &v) in self.rays[ri].iter().enumerate() {
                p[i] += coef * v;
            }
        }
        p
    }

    /// Facets of a cone with incidence signs: τ runs over the
    /// codimension-one faces; the sign is the oriented incidence number
    /// (for the default ascending orientation, (−1)^position of the missing
    /// ray).
    pub fn facets_with_signs(&self, idx: usize) -> Vec<(usize, i64)> {
        let rays = &self.cones[idx];
        if rays.is_empty() {
            return vec![];
        }
        let mut out = Vec::new();
        for drop_pos in 0..rays.len() {
            let face: Vec<usize> = rays
                .iter()
                .enumerate()
                .filter(|(p, _)| *p != drop_pos)
                .map(|(_, &r)| r)
                .collect();
            let fidx = self
                .index_of_cone(&face)
                .expect("face closure contains every facet");
            out.push((fidx, self.incidence_sign(idx, fidx, drop_pos)));
        }
        out
    }

    fn incidence_sign(&self, sigma: usize, tau: usize, _drop_pos: usize) -> i64 {
        let so = &self.orientation[sigma];
        let to = &self.orientation[tau];
        let missing = so
            .iter()
            .position(|r| !self.cones[tau].contains(r))
            .expect("facet misses exactly one ray");
        // Move the missing ray to the front of σ's orientation, then compare
        // the remainder with τ's orientation.
        let mut rest: Vec<usize> = so.clone();
        let m = rest.remove(missing);
        debug_assert!(!to.contains(&m));
        let perm_sign = permutation_sign(&rest, to);
        let front_sign = if missing % 2 == 0 { 1 } else { -1 };
        front_sign * perm_sign
    }

    /// Reorder each cone's oriented ray list with a deterministic scramble;
    /// certified quantities must not change under this.
    pub fn with_scrambled_orientation(&self, seed: u64) -> Fan {
        let mut fan = self.clone();
        for (i, ord) in fan.orientation.iter_mut().enumerate() {
            if ord.len() >= 2 {
                let k = ((seed + i as u64) % ord.len() as u64) as usize;
                ord.rotate_left(k);
                if (seed / 7 + i as u64) % 2 == 1 {
                    ord.swap(0, 1);
                }
            }
        }
        fan
    }

    pub fn validate(&self) -> FanReport {
        let mut smooth = self.simplicial;
        if self.simplicial {
            for c in &self.input_cones {
                if !c.is_empty() && !self.cone_is_smooth(c) {
                    smooth = false;
                    break;
                }
            }
        }
        let overlap_witness = self.find_overlap();
        let complete = overlap_witness.is_none() && self.simplicial && self.is_complete();
        FanReport {
            simplicial: self.simplicial,
            smooth,
            complete,
            overlap_witness,
        }
    }

    /// Validation that fails loudly; smoothness required by most consumers.
    pub fn require_smooth(&self) -> Result<(), ToricError> {
        if !self.simplicial {
            let c = self
                .input_cones
                .iter()
                .find(|c| {
                    let mat: Vec<Vec<i64>> = c.iter().map(|&i| self.rays[i].clone()).collect();
                    !c.is_empty() && QMat::from_i64_rows(&mat).rank() != c.len()
                })
                .cloned()
                .unwrap_or_default();
            return Err(ToricError::NotSimplicial(c));
        }
        if let Some((a, b)) = self.find_overlap() {
            return Err(ToricError::Overlap(a, b));
        }
        for c in &self.input_cones {
            if !c.is_empty() && !self.cone_is_smooth(c) {
                return Err(ToricError::NotSmooth(c.clone()));
            }
        }
        Ok(())
    }

    fn cone_is_smooth(&self, cone: &[usize]) -> bool {
        // gcd of the maximal minors of the ray matrix must be 1.
        let k = cone.len();
        let mat: Vec<Vec<i64>> = cone.iter().map(|&i| self.rays[i].clone()).collect();
        let cols: Vec<usize> = (0..self.dim).collect();
        let mut g: i64 = 0;
        for combo in combinations(&cols, k) {
            let minor: Vec<Vec<i64>> = mat
                .iter()
                .map(|row| combo.iter().map(|&c| row[c]).collect())
                .collect();
            g = g.gcd(&det_i64(&minor));
            if g == 1 {
                return true;
            }
        }
        g == 1
    }

    fn find_overlap(&self) -> Option<(Vec<usize>, Vec<usize>)> {
        let geoms: Vec<Cone> = self
            .input_cones
            .iter()
            .map(|c| Cone::from_generators(self.dim, c.iter().map(|&i| self.rays[i].clone()).collect()))
            .collect();
        for i in 0..geoms.len() {
            for j in i + 1..geoms.len() {
                let mut normals = Vec::new();
                for g in [&geoms[i], &geoms[j]] {
                    normals.extend(g.h_normals());
                }
                // σ_i ∩ σ_j = dual of the cone generated by both H-normal sets.
                let intersection = Cone::from_generators(self.dim, normals).dual();
                let common: Vec<usize> = self.input_cones[i]
                    .iter()
                    .filter(|r| self.input_cones[j].contains(r))
                    .copied()
                    .collect();
                let face =
                    Cone::from_generators(self.dim, common.iter().map(|&r| self.rays[r].clone()).collect());
                if intersection != face {
                    return Some((self.input_cones[i].clone(), self.input_cones[j].clone()));
                }
            }
        }
        None
    }

    fn is_complete(&self) -> bool {
        let tops: Vec<&Vec<usize>> = self
            .input_cones
            .iter()
            .filter(|c| c.len() == self.dim)
            .collect();
        if tops.is_empty() {
            return self.dim == 0;
        }
        let top_normals: Vec<Vec<Vec<i64>>> = tops
            .iter()
            .map(|c| {
                Cone::from_generators(self.dim, c.iter().map(|&i| self.rays[i].clone()).collect())
                    .h_normals()
            })
            .collect();
        let mut hyperplanes = Vec::new();
        for normals in &top_normals {
            for n in normals {
                if let Some(h) = Hyperplane::from_i64(n, 0) {
                    hyperplanes.push(h);
                }
            }
        }
        let arr = Arrangement::from_hyperplanes(self.dim, hyperplanes);
        for cell in &arr.cells {
            if cell.cell.dim() < self.dim {
                continue;
            }
            let covered = top_normals.iter().any(|normals| {
                normals.iter().all(|n| {
                    let nq: Vec<crate::linalg::Q> =
                        n.iter().map(|&v| crate::linalg::q_from_i64(v)).collect();
                    crate::linalg::dot_qq(&nq, &cell.sample) >= crate::linalg::q_zero()
                })
            });
            if !covered {
                return false;
            }
        }
        true
    }

    /// Wall hyperplane normals: for each codimension-one cone, the primitive
    /// lattice normal of its span.
    pub fn wall_normals(&self) -> Vec<Vec<i64>> {
        let mut out = Vec::new();
        for idx in self.cones_of_dim(self.dim.saturating_sub(1)) {
            let rays = self.cone_ray_vectors(idx);
            let kernel = if rays.is_empty() {
                (0..self.dim)
                    .map(|i| (0..self.dim).map(|j| i64::from(i == j)).collect())
                    .collect()
            } else {
                crate::linalg::integer_kernel(&rays)
            };
            for k in kernel {
                let mut p = primitive(&k);
                if let Some(first) = p.iter().find(|&&v| v != 0) {
                    if *first < 0 {
                        p = p.iter().map(|&v| -v).collect();
                    }
                }
                out.push(p);
            }
        }
        out.sort();
        out.dedup();
        out
    }
}

fn permutation_sign(a: &[usize], b: &[usize]) -> i64 {
    assert_eq!(a.len(), b.len());
    let mut perm: Vec<usize> = a
        .iter()
        .map(|x| b.iter().position(|y| y == x).expect("same ray sets"))
        .collect();
    let mut sign = 1i64;
    for i in 0..perm.len() {
        while perm[i] != i {
            let j = perm[i];
            perm.swap(i, j);
            sign = -sign;
        }
    }
    sign
}

fn det_i64(m: &[Vec<i64>]) -> i64 {
    let n = m.len();
    match n {
        0 => 1,
        1 => m[0][0],
        2 => m[0][0] * m[1][1] - m[0][1] * m[1][0],
        _ => {
            let mut acc = 0i64;
            for j in 0..n {
                let minor: Vec<Vec<i64>> = m[1..]
                    .iter()
                    .map(|row| {
                        row.iter()
                            .enumerate()
                            .filter(|(c, _)| *c != j)
                            .map(|(_, &v)| v)
                            .collect()
                    })
                    .collect();
                let term = m[0][j] * det_i64(&minor);
                acc += if j % 2 == 0 { term } else { -term };
            }
            acc
        }
    }
}

fn combinations(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if items.len() < k {
        return vec![];
    }
    let mut out = Vec::new();
    for (i, &x) in items.iter().enumerate() {
        for mut rest in combinations(&items[i + 1..], k - 1) {
            rest.insert(0, x);
            out.push(rest);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::fixtures;
    use super::*;

    #[test]
    fn p2_is_smooth_and_complete() {
        let fan = fixtures::p2();
        let report = fan.validate();
        assert!(report.simplicial && report.smooth && report.complete);
        assert!(report.overlap_witness.is_none());
        assert_eq!(fan.cone_count(), 1 + 3 + 3);
        assert_eq!(fan.top_cones().len(), 3);
    }

    #[test]
    fn a2_is_smooth_not_complete() {
        let fan = fixtures::a2();
        let report = fan.validate();
        assert!(report.smooth);
        assert!(!report.complete);
    }

    #[test]
    fn determinant_two_cone_not_smooth() {
        let fan = Fan::new(2, vec![vec![1, 0], vec![1, 2]], vec![vec![0, 1]]).unwrap();
        let report = fan.validate();
        assert!(report.simplicial);
        assert!(!report.smooth);
    }

    #[test]
    fn overlapping_cones_detected() {
        // cone(e1,e2) and cone(e1+e2 … ) sharing interior: overlap witness.
        let fan = Fan::new(
            2,
            vec![vec![1, 0], vec![0, 1], vec![1, 1], vec![-1, 0]],
            vec![vec![0, 1], vec![2, 3]],
        )
        .unwrap();
        let report = fan.validate();
        assert!(report.overlap_witness.is_some());
        assert!(fan.require_smooth().is_err());
    }

    #[test]
    fn face_closure_and_incidence_signs() {
        let fan = fixtures::p1xp1();
        assert_eq!(fan.cone_count(), 1 + 4 + 4);
        // d∘d = 0 for the incidence signs: for each top cone σ and the zero
        // cone, the two paths through the facets cancel.
        for &sigma in &fan.top_cones() {
            let mut total = 0i64;
            for (tau, s1) in fan.facets_with_signs(sigma) {
                for (ups, s2) in fan.facets_with_signs(tau) {
                    assert_eq!(ups, 0);
                    total += s1 * s2;
                }
            }
            assert_eq!(total, 0);
        }
    }

    #[test]
    fn f1_fixture_valid() {
        let fan = fixtures::f1();
        let report = fan.validate();
        assert!(report.smooth && report.complete);
        assert_eq!(fan.top_cones().len(), 4);
    }

    #[test]
    fn wall_normals_of_p1() {
        let fan = fixtures::p1();
        // Codim-one cones of P¹'s fan: the zero cone; its span has normal ±1.
        assert_eq!(fan.wall_normals(), vec![vec![1]]);
    }
}
