//! Rational polyhedral cones with canonical primitive generator sets.
//!
//! Canonical form: a lattice basis of the lineality space in reduced echelon
//! form (stored with both signs) plus the primitive extreme rays of the image
//! in the orthogonal complement, all sorted lexicographically. Two cones are
//! equal as sets iff their canonical generator lists are equal, which gives
//! syntactic equality everywhere downstream.

use super::cell::{faces_of_closed_system, Cell};
use super::fm::{Constraint, LinearSystem, Rel};
use crate::linalg::{dot_qq, dot_zq, primitive, primitive_of_rational, q_from_i64, QMat, Q};
use num_traits::{Signed, Zero};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cone {
    ambient: usize,
    generators: Vec<Vec<i64>>,
}

impl Cone {
    pub fn from_generators(ambient: usize, generators: Vec<Vec<i64>>) -> Cone {
        for g in &generators {
            assert_eq!(g.len(), ambient, "generator dimension mismatch");
        }
        let mut gens: Vec<Vec<i64>> = generators
            .iter()
            .map(|g| primitive(g))
            .filter(|g| g.iter().any(|&v| v != 0))
            .collect();
        gens.sort();
        gens.dedup();
        let canonical = canonicalize(ambient, &gens);
        Cone {
            ambient,
            generators: canonical,
        }
    }

    pub fn zero(ambient: usize) -> Cone {
        Cone {
            ambient,
            generators: vec![],
        }
    }

    pub fn full(ambient: usize) -> Cone {
        let mut gens = Vec::new();
        for i in 0..ambient {
            let mut v = vec![0i64; ambient];
            v[i] = 1;
            gens.push(v.clone());
            v[i] = -1;
            gens.push(v);
        }
        Cone::from_generators(ambient, gens)
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn generators(&self) -> &[Vec<i64>] {
        &self.generators
    }

    /// Dimension of the linear span of the cone.
    pub fn dim(&self) -> usize {
        if self.generators.is_empty() {
            return 0;
        }
        QMat::from_i64_rows(&self.generators).rank()
    }

    pub fn is_zero(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn contains_q(&self, x: &[Q]) -> bool {
        cone_membership_q(&self.generators, x)
    }

    pub fn contains_z(&self, x: &[i64]) -> bool {
        let xq: Vec<Q> = x.iter().map(|&v| q_from_i64(v)).collect();
        self.contains_q(&xq)
    }

    pub fn contains_cone(&self, other: &Cone) -> bool {
        other.generators.iter().all(|g| self.contains_z(g))
    }

    pub fn antipode(&self) -> Cone {
        Cone::from_generators(
            self.ambient,
            self.generators
                .iter()
                .map(|g| g.iter().map(|&v| -v).collect())
                .collect(),
        )
    }

    /// The dual cone {ξ : ⟨ξ, v⟩ ≥ 0 for all v in the cone}, computed by
    /// Fourier–Motzkin elimination of the coefficient variables from
    /// x = Σ λᵢ vᵢ, λ ≥ 0: the inequality normals of the resulting
    /// H-description generate the dual.
    pub fn dual(&self) -> Cone {
        let k = self.generators.len();
        let n = self.ambient;
        // Variables (λ_1..λ_k, x_1..x_n).
        let mut sys = LinearSystem::new(k + n);
        for i in 0..n {
            let mut normal = vec![Q::zero(); k + n];
            for (j, g) in self.generators.iter().enumerate() {
                normal[j] = q_from_i64(-g[i]);
            }
            normal[k + i] = q_from_i64(1);
            sys.push(Constraint::new(normal, Q::zero(), Rel::Eq));
        }
        for j in 0..k {
            let mut normal = vec![Q::zero(); k + n];
            normal[j] = q_from_i64(1);
            sys.push(Constraint::new(normal, Q::zero(), Rel::Ge));
        }
        for var in (0..k).rev() {
            sys = sys
                .eliminate(var)
                .expect("cone membership system is always feasible");
        }
        let mut duals = Vec::new();
        for c in &sys.constraints {
            let normal = primitive_of_rational(&c.normal[k..]);
            if normal.iter().all(|&v| v == 0) {
                continue;
            }
            match c.rel {
                Rel::Ge | Rel::Gt => duals.push(normal),
                Rel::Eq => {
                    duals.push(normal.iter().map(|&v| -v).collect());
                    duals.push(normal);
                }
            }
        }
        Cone::from_generators(n, duals)
    }

    /// H-description of the (closed) cone: inequality normals. Equalities of
    /// non-full-dimensional cones show up as ± pairs.
    pub fn h_normals(&self) -> Vec<Vec<i64>> {
        self.dual().generators().to_vec()
    }

    /// Closed H-system of the cone.
    pub fn closure_system(&self) -> LinearSystem {
        let mut sys = LinearSystem::new(self.ambient);
        for normal in self.h_normals() {
            let nq: Vec<Q> = normal.iter().map(|&v| q_from_i64(v)).collect();
            sys.push(Constraint::new(nq, Q::zero(), Rel::Ge));
        }
        sys
    }

    /// All relatively open faces of the cone, as cells.
    pub fn faces(&self) -> Vec<Cell> {
        faces_of_closed_system(self.ambient, &self.closure_system())
    }

    /// The relative interior, as a cell: span equalities plus strict facet
    /// inequalities.
    pub fn relative_interior(&self) -> Cell {
        let mut eqs = Vec::new();
        let mut sts = Vec::new();
        for normal in self.h_normals() {
            let neg: Vec<i64> = normal.iter().map(|&v| -v).collect();
            let nq: Vec<Q> = normal.iter().map(|&v| q_from_i64(v)).collect();
            if self
                .generators
                .iter()
                .all(|g| dot_zq(g, &nq.clone()).is_zero())
            {
                // Normal vanishes on the span: part of an equality pair.
                if normal > neg {
                    eqs.push((nq, Q::zero()));
                }
            } else {
                sts.push((nq, Q::zero()));
            }
        }
        Cell::new(self.ambient, eqs, sts).expect("relative interior of a cone is nonempty")
    }
}

/// Is `x` a nonnegative combination of `gens`? Carathéodory: it is iff it is
/// one of a linearly independent subset, so small subset enumeration with an
/// exact solve decides membership.
fn cone_membership_q(gens: &[Vec<i64>], x: &[Q]) -> bool {
    if x.iter().all(|v| v.is_zero()) {
        return true;
    }
    if gens.is_empty() {
        return false;
    }
    let n = x.len();
    let k = gens.len();
    let max_size = n.min(k);
    let mut subset: Vec<usize> = Vec::new();
    subsets_up_to(k, max_size, &mut subset, &mut |s: &[usize]| {
        if s.is_empty() {
            return false;
        }
        let cols: Vec<Vec<Q>> = s
            .iter()
            .map(|&i| gens[i].iter().map(|&v| q_from_i64(v)).collect())
            .collect();
        // Solve Σ λ_j cols_j = x.
        let mut rows = Vec::with_capacity(n);
        for coord in 0..n {
            rows.push(s.iter().enumerate().map(|(j, _)| cols[j][coord].clone()).collect());
        }
        let m = QMat::from_rows(rows);
        if let Some(lambda) = m.solve(x) {
            if m.mul_vec(&lambda) == x.to_vec() && lambda.iter().all(|l| !l.is_negative()) {
                return true;
            }
        }
        false
    })
}

fn subsets_up_to(
    k: usize,
    max_size: usize,
    current: &mut Vec<usize>,
    visit: &mut impl FnMut(&[usize]) -> bool,
) -> bool {
    if visit(current) {
        return true;
    }
    if current.len() == max_size {
        return false;
    }
    let start = current.last().map_or(0, |&l| l + 1);
    for i in start..k {
        current.push(i);
        if subsets_up_to(k, max_size, current, visit) {
            return true;
        }
        current.pop();
    }
    false
}

/// Minimal canonical generator set: ± an echelon lattice basis of the
/// lineality space, plus primitive extreme rays of the projection to its
/// orthogonal complement.
fn canonicalize(ambient: usize, gens: &[Vec<i64>]) -> Vec<Vec<i64>> {
    if gens.is_empty() {
        return vec![];
    }
    // Lineality: generators whose negative stays inside the cone.
    let mut lin_vecs: Vec<Vec<Q>> = Vec::new();
    for g in gens {
        let neg: Vec<Q> = g.iter().map(|&v| q_from_i64(-v)).collect();
        if cone_membership_q(gens, &neg) {
            lin_vecs.push(g.iter().map(|&v| q_from_i64(v)).collect());
        }
    }
    let lin = crate::linalg::Subspace::span(ambient, lin_vecs);
    let mut canonical: Vec<Vec<i64>> = Vec::new();
    for b in &lin.basis {
        let p = primitive_of_rational(b);
        canonical.push(p.iter().map(|&v| -v).collect());
        canonical.push(p);
    }
    // Project the generators orthogonally off the lineality space.
    let mut projected: Vec<Vec<i64>> = Vec::new();
    for g in gens {
        let mut gq: Vec<Q> = g.iter().map(|&v| q_from_i64(v)).collect();
        for b in &lin.basis {
            let scale = dot_qq(&gq, b) / dot_qq(b, b);
            for i in 0..ambient {
                let sub = &scale * &b[i];
                gq[i] -= sub;
            }
        }
        let p = primitive_of_rational(&gq);
        if p.iter().any(|&v| v != 0) {
            projected.push(p);
        }
    }
    projected.sort();
    projected.dedup();
    // Extreme rays of the pointed projected cone.
    for (i, g) in projected.iter().enumerate() {
        let others: Vec<Vec<i64>> = projected
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, v)| v.clone())
            .collect();
        let gq: Vec<Q> = g.iter().map(|&v| q_from_i64(v)).collect();
        if !cone_membership_q(&others, &gq) {
            canonical.push(g.clone());
        }
    }
    canonical.sort();
    canonical.dedup();
    canonical
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dual_of_planar_cone() {
        // Fourier–Motzkin oracle example: cone((1,0),(1,2))∨ = cone((0,1),(2,−1)).
        let c = Cone::from_generators(2, vec![vec![1, 0], vec![1, 2]]);
        let d = c.dual();
        assert_eq!(d.generators(), &[vec![0, 1], vec![2, -1]]);
        // Dual of the dual returns the canonical original.
        assert_eq!(d.dual(), c);
    }

    #[test]
    fn dual_of_zero_and_ray() {
        let zero = Cone::zero(2);
        let full = zero.dual();
        assert_eq!(
            full.generators(),
            &[vec![-1, 0], vec![0, -1], vec![0, 1], vec![1, 0]]
        );
        assert_eq!(full.dual(), zero);
        let ray = Cone::from_generators(1, vec![vec![1]]);
        assert_eq!(ray.dual(), ray);
    }

    #[test]
    fn canonicalization_drops_interior_generators() {
        let c = Cone::from_generators(2, vec![vec![1, 0], vec![1, 1], vec![1, 2]]);
        assert_eq!(c.generators(), &[vec![1, 0], vec![1, 2]]);
        let half = Cone::from_generators(2, vec![vec![0, 1], vec![1, 0], vec![-1, 0]]);
        assert_eq!(
            half.generators(),
            &[vec![-1, 0], vec![0, 1], vec![1, 0]]
        );
    }

    #[test]
    fn membership() {
        let c = Cone::from_generators(2, vec![vec![1, 0], vec![1, 2]]);
        assert!(c.contains_z(&[1, 1]));
        assert!(c.contains_z(&[0, 0]));
        assert!(c.contains_z(&[2, 4]));
        assert!(!c.contains_z(&[0, 1]));
        assert!(!c.contains_z(&[-1, 0]));
    }

    #[test]
    fn faces_of_quadrant_and_ray() {
        let quad = Cone::from_generators(2, vec![vec![1, 0], vec![0, 1]]);
        let faces = quad.faces();
        assert_eq!(faces.len(), 4); // origin, two open rays, open quadrant
        let mut dims: Vec<usize> = faces.iter().map(|f| f.dim()).collect();
        dims.sort_unstable();
        assert_eq!(dims, vec![0, 1, 1, 2]);

        let ray = Cone::from_generators(1, vec![vec![1]]);
        let rf = ray.faces();
        assert_eq!(rf.len(), 2); // origin and open ray
    }

    #[test]
    fn relative_interior_of_lower_dimensional_cone() {
        let ray = Cone::from_generators(2, vec![vec![1, 2]]);
        let ri = ray.relative_interior();
        assert_eq!(ri.dim(), 1);
        assert!(ri.contains(&[q_from_i64(1), q_from_i64(2)]));
        assert!(!ri.contains(&[q_from_i64(0), q_from_i64(0)]));
        assert!(!ri.contains(&[q_from_i64(2), q_from_i64(1)]));
    }
}
