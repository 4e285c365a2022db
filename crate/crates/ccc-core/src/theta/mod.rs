//! Complexes of translated-dual-cone generators with poset-constrained
//! scalar differentials: the computational form of the constructible
//! complexes attached to equivariant bundles.
//!
//! A generator is a pair (cone σ, lattice base χ), standing for the
//! extension by zero of the rank-one constant sheaf on the open translated
//! dual cone (χ + σ∨)°. Hom spaces between generators are at most
//! one-dimensional — nonzero exactly when τ ⊆ σ and χ_s − χ_t ∈ τ∨ — so a
//! differential is a scalar matrix per adjacent degree pair, d∘d = 0 is a
//! finite exact check, and every constructor here enforces both.

pub mod bridge;
pub mod map;
pub mod micro;
pub mod morse;
pub mod vect;

pub use map::ThetaMap;
pub use micro::{cohomology_table, microlocal_complex, mu_sheaf, MicrolocalComplex, MuSheaf};
pub use morse::{klyachko_extract, MorseEngine, MorseLevel, MorseReport};
pub use vect::VectComplex;

use crate::linalg::{dot_zz, QMat};
use crate::toric::klyachko::Splittings;
use crate::toric::{Fan, KlyachkoBundle, ToricError};
use num_traits::Zero;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ThetaError {
    #[error("differential entry violates the generator partial order: {from} → {to}")]
    PosetViolation { from: String, to: String },
    #[error("d∘d ≠ 0 at degree {0}")]
    NotAComplex(i64),
    #[error("chain map identity fails at degree {0}")]
    NotAChainMap(i64),
    #[error("matrix shape mismatch at degree {0}")]
    Shape(i64),
    #[error("operands live over different fans")]
    FanMismatch,
    #[error("map precondition fails on cone {0:?}: difference not in the dual cone")]
    NotASectionWeight(Vec<usize>),
    #[error(transparent)]
    Toric(#[from] ToricError),
    #[error(transparent)]
    Vect(#[from] vect::VectError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThetaGenerator {
    /// Index into the fan's cone list.
    pub cone: usize,
    /// Lattice representative of the base character.
    pub base: Vec<i64>,
    pub degree: i64,
    /// Provenance label (which splitting vector or construction step).
    pub tag: String,
}

impl ThetaGenerator {
    /// Bases are compared modulo the annihilator of the cone: the pairings
    /// with every ray of the cone must agree.
    pub fn same_weight(&self, fan: &Fan, other: &ThetaGenerator) -> bool {
        self.cone == other.cone
            && fan
                .cone_rays(self.cone)
                .iter()
                .all(|&r| dot_zz(fan.ray(r), &self.base) == dot_zz(fan.ray(r), &other.base))
    }
}

/// Is a component from generator `s` to generator `t` allowed:
/// cone(t) a face of cone(s) and base(s) − base(t) in cone(t)∨.
pub fn hom_allowed(fan: &Fan, s: &ThetaGenerator, t: &ThetaGenerator) -> bool {
    if !fan.is_face(t.cone, s.cone) {
        return false;
    }
    let diff: Vec<i64> = s.base.iter().zip(&t.base).map(|(a, b)| a - b).collect();
    fan.cone_rays(t.cone)
        .iter()
        .all(|&r| dot_zz(fan.ray(r), &diff) >= 0)
}

#[derive(Clone, Debug)]
pub struct ThetaComplex {
    fan: Fan,
    min_degree: i64,
    /// generators[k] lives in degree min_degree + k.
    generators: Vec<Vec<ThetaGenerator>>,
    /// diffs[k]: degree k → k+1, shaped next×current.
    diffs: Vec<QMat>,
}

impl ThetaComplex {
    pub fn new(
        fan: Fan,
        min_degree: i64,
        generators: Vec<Vec<ThetaGenerator>>,
        diffs: Vec<QMat>,
    ) -> Result<ThetaComplex, ThetaError> {
        if !generators.is_empty() && diffs.len() + 1 != generators.len() {
            return Err(ThetaError::Shape(min_degree));
        }
        for (k, m) in diffs.iter().enumerate() {
            if m.rows != generators[k + 1].len() || m.cols != generators[k].len() {
                return Err(ThetaError::Shape(min_degree + k as i64));
            }
            for (t, row) in m.data.iter().enumerate() {
                for (s, entry) in row.iter().enumerate() {
                    if !entry.is_zero()
                        && !hom_allowed(&fan, &generators[k][s], &generators[k + 1][t])
                    {
                        return Err(ThetaError::PosetViolation {
                            from: format!("{:?}", generators[k][s]),
                            to: format!("{:?}", generators[k + 1][t]),
                        });
                    }
                }
            }
        }
        for k in 0..diffs.len().saturating_sub(1) {
            if !diffs[k + 1].mul(&diffs[k]).is_zero() {
                return Err(ThetaError::NotAComplex(min_degree + k as i64));
            }
        }
        Ok(ThetaComplex {
            fan,
            min_degree,
            generators,
            diffs,
        })
    }

    pub fn fan(&self) -> &Fan {
        &self.fan
    }

    pub fn min_degree(&self) -> i64 {
        self.min_degree
    }

    pub fn degree_count(&self) -> usize {
        self.generators.len()
    }

    pub fn generators_at(&self, offset: usize) -> &[ThetaGenerator] {
        &self.generators[offset]
    }

    pub fn all_generators(&self) -> impl Iterator<Item = &ThetaGenerator> {
        self.generators.iter().flatten()
    }

    pub fn diff_at(&self, offset: usize) -> Option<&QMat> {
        self.diffs.get(offset)
    }

    pub fn generator_count(&self) -> usize {
        self.generators.iter().map(|g| g.len()).sum()
    }

    /// Compactly supported sections: one basis element per generator in its
    /// degree, matrices the scalar differentials verbatim.
    pub fn sections(&self) -> VectComplex {
        VectComplex::new(
            self.min_degree,
            self.generators.iter().map(|g| g.len()).collect(),
            self.diffs.clone(),
        )
        .expect("constructor invariants give a complex")
    }

    /// Degree shift: C[s]^k = C^{k+s}; odd shifts negate the differential.
    pub fn shift(&self, s: i64) -> ThetaComplex {
        let sign = if s.rem_euclid(2) == 0 { 1i64 } else { -1 };
        let generators: Vec<Vec<ThetaGenerator>> = self
            .generators
            .iter()
            .map(|gens| {
                gens.iter()
                    .map(|g| ThetaGenerator {
                        degree: g.degree - s,
                        ..g.clone()
                    })
                    .collect()
            })
            .collect();
        let diffs = self
            .diffs
            .iter()
            .map(|m| {
                let mut m = m.clone();
                if sign < 0 {
                    for row in m.data.iter_mut() {
                        for v in row.iter_mut() {
                            *v = -v.clone();
                        }
                    }
                }
                m
            })
            .collect();
        ThetaComplex {
            fan: self.fan.clone(),
            min_degree: self.min_degree - s,
            generators,
            diffs,
        }
    }

    pub fn direct_sum(&self, other: &ThetaComplex) -> Result<ThetaComplex, ThetaError> {
        if self.fan.rays() != other.fan.rays() || self.fan.input_cones() != other.fan.input_cones()
        {
            return Err(ThetaError::FanMismatch);
        }
        let lo = self.min_degree.min(other.min_degree);
        let hi = (self.min_degree + self.generators.len() as i64)
            .max(other.min_degree + other.generators.len() as i64);
        let len = (hi - lo) as usize;
        let gens_of = |c: &ThetaComplex, d: i64| -> Vec<ThetaGenerator> {
            let k = d - c.min_degree;
            if k < 0 || k as usize >= c.generators.len() {
                vec![]
            } else {
                c.generators[k as usize].clone()
            }
        };
        let mut generators: Vec<Vec<ThetaGenerator>> = Vec::with_capacity(len);
        for k in 0..len {
            let d = lo + k as i64;
            let mut gens = gens_of(self, d);
            gens.extend(gens_of(other, d));
            generators.push(gens);
        }
        let mut diffs: Vec<QMat> = Vec::new();
        for k in 0..len.saturating_sub(1) {
            let d = lo + k as i64;
            let rows = generators[k + 1].len();
            let cols = generators[k].len();
            let mut m = QMat::new(rows, cols);
            let a_cols = gens_of(self, d).len();
            let a_rows = gens_of(self, d + 1).len();
            if let Some(block) = self.diff_for_degree(d) {
                for r in 0..block.rows {
                    for c in 0..block.cols {
                        m.data[r][c] = block.data[r][c].clone();
                    }
                }
            }
            if let Some(block) = other.diff_for_degree(d) {
                for r in 0..block.rows {
                    for c in 0..block.cols {
                        m.data[a_rows + r][a_cols + c] = block.data[r][c].clone();
                    }
                }
            }
            diffs.push(m);
        }
        ThetaComplex::new(self.fan.clone(), lo, generators, diffs)
    }

    fn diff_for_degree(&self, d: i64) -> Option<&QMat> {
        let k = d - self.min_degree;
        if k < 0 {
            None
        } else {
            self.diffs.get(k as usize)
        }
    }

    /// Translate every generator base by a lattice vector.
    pub fn translate(&self, t: &[i64]) -> ThetaComplex {
        let generators = self
            .generators
            .iter()
            .map(|gens| {
                gens.iter()
                    .map(|g| ThetaGenerator {
                        base: g.base.iter().zip(t).map(|(a, b)| a + b).collect(),
                        ..g.clone()
                    })
                    .collect()
            })
            .collect();
        ThetaComplex {
            fan: self.fan.clone(),
            min_degree: self.min_degree,
            generators,
            diffs: self.diffs.clone(),
        }
    }
}

/// The Čech resolution of a bundle, transported to translated-dual-cone
/// generators: degree k carries one generator per codimension-k cone and
/// adapted basis vector, with base the vector's weight; the differential
/// entry from (σ, b) to a facet (τ, b′) is the coefficient of b′ in the
/// τ-basis expansion of b, times the orientation sign of the facet.
pub fn cech_complex(bundle: &KlyachkoBundle) -> Result<ThetaComplex, ThetaError> {
    let splittings = bundle.validate()?;
    cech_complex_from_splittings(bundle, &splittings)
}

pub fn cech_complex_from_splittings(
    bundle: &KlyachkoBundle,
    splittings: &Splittings,
) -> Result<ThetaComplex, ThetaError> {
    let fan = bundle.fan();
    let n = fan.dim();
    let r = bundle.rank();
    let mut positions: Vec<(usize, usize)> = vec![(usize::MAX, usize::MAX); fan.cone_count()];
    let mut generators: Vec<Vec<ThetaGenerator>> = vec![vec![]; n + 1];
    for d in (0..=n).rev() {
        for cone in fan.cones_of_dim(d) {
            let k = n - d;
            let split = splittings.for_cone(cone);
            positions[cone] = (k, generators[k].len());
            for (i, w) in split.weights.iter().enumerate() {
                generators[k].push(ThetaGenerator {
                    cone,
                    base: w.clone(),
                    degree: k as i64,
                    tag: format!("c{cone}v{i}"),
                });
            }
        }
    }
    let mut diffs = Vec::with_capacity(n);
    for k in 0..n {
        let rows = generators[k + 1].len();
        let cols = generators[k].len();
        let mut m = QMat::new(rows, cols);
        for cone in fan.cones_of_dim(n - k) {
            let (ck, cpos) = positions[cone];
            debug_assert_eq!(ck, k);
            let b_sigma = basis_matrix(&splittings.for_cone(cone).basis, r);
            for (tau, sign) in fan.facets_with_signs(cone) {
                let (tk, tpos) = positions[tau];
                debug_assert_eq!(tk, k + 1);
                let b_tau = basis_matrix(&splittings.for_cone(tau).basis, r);
                let inv = b_tau
                    .inverse()
                    .expect("adapted bases are bases of the fiber");
                let change = inv.mul(&b_sigma);
                for t in 0..r {
                    for s in 0..r {
                        if !change.data[t][s].is_zero() {
                            let signed = if sign >= 0 {
                                change.data[t][s].clone()
                            } else {
                                -change.data[t][s].clone()
                            };
                            m.data[tpos + t][cpos + s] = signed;
                        }
                    }
                }
            }
        }
        diffs.push(m);
    }
    ThetaComplex::new(fan.clone(), 0, generators, diffs)
}

fn basis_matrix(vectors: &[Vec<crate::linalg::Q>], r: usize) -> QMat {
    // Columns are the basis vectors.
    let mut m = QMat::new(r, vectors.len());
    for (c, v) in vectors.iter().enumerate() {
        for (i, x) in v.iter().enumerate() {
            m.data[i][c] = x.clone();
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::toric::fixtures;
    use crate::toric::klyachko::cartier_to_klyachko;
    use num_traits::Signed;

    #[test]
    fn cech_of_o1_on_p1() {
        let b = cartier_to_klyachko(&fixtures::o_p1(1));
        let c = cech_complex(&b).unwrap();
        assert_eq!(c.degree_count(), 2);
        assert_eq!(c.generators_at(0).len(), 2);
        assert_eq!(c.generators_at(1).len(), 1);
        let sect = c.sections();
        assert_eq!(sect.betti_at(0), 1);
        assert_eq!(sect.betti_at(1), 0);
        let d = c.diff_at(0).unwrap();
        for row in &d.data {
            for v in row {
                assert_eq!(v.abs(), crate::linalg::q_one());
            }
        }
    }

    #[test]
    fn cech_of_trivial_rank1_on_p2() {
        let b = fixtures::trivial_bundle(fixtures::p2(), 1);
        let c = cech_complex(&b).unwrap();
        assert_eq!(
            (0..3).map(|k| c.generators_at(k).len()).collect::<Vec<_>>(),
            vec![3, 3, 1]
        );
        let sect = c.sections();
        assert_eq!(sect.betti_at(0), 1);
        assert_eq!(sect.betti_at(1), 0);
        assert_eq!(sect.betti_at(2), 0);
    }

    #[test]
    fn generator_count_additivity() {
        let a = cartier_to_klyachko(&fixtures::o_p1(2));
        let b = cartier_to_klyachko(&fixtures::o_p1(-1));
        let sum = a.direct_sum(&b).unwrap();
        let ca = cech_complex(&a).unwrap();
        let cb = cech_complex(&b).unwrap();
        let cs = cech_complex(&sum).unwrap();
        for k in 0..2 {
            assert_eq!(
                cs.generators_at(k).len(),
                ca.generators_at(k).len() + cb.generators_at(k).len()
            );
        }
    }

    #[test]
    fn sections_of_bundles_concentrate_in_degree_zero() {
        for bundle in [
            fixtures::tangent_p2(),
            fixtures::trivial_bundle(fixtures::p1xp1(), 2),
            cartier_to_klyachko(&fixtures::o_p1xp1(3, 2)),
            fixtures::fujino_bundle(2, 1),
        ] {
            let c = cech_complex(&bundle).unwrap();
            let sect = c.sections();
            assert!(sect.concentrated_in(0));
            assert_eq!(sect.betti_at(0), bundle.rank());
        }
    }

    #[test]
    fn orientation_scramble_preserves_betti() {
        let b = fixtures::tangent_p2();
        let scrambled = b.fan().with_scrambled_orientation(3);
        let b2 = crate::toric::KlyachkoBundle::new(
            scrambled,
            b.rank(),
            (0..b.fan().rays().len())
                .map(|r| b.filtration(r).to_vec())
                .collect(),
        )
        .unwrap();
        let s1 = cech_complex(&b).unwrap().sections();
        let s2 = cech_complex(&b2).unwrap().sections();
        assert_eq!(s1.betti(), s2.betti());
    }

    #[test]
    fn shift_and_sum() {
        let b = cartier_to_klyachko(&fixtures::o_p1(1));
        let c = cech_complex(&b).unwrap();
        let shifted = c.shift(1);
        assert_eq!(shifted.min_degree(), -1);
        let sum = c.direct_sum(&shifted).unwrap();
        let sect = sum.sections();
        assert_eq!(sect.betti_at(-1), 1);
        assert_eq!(sect.betti_at(0), 1);
    }
}
