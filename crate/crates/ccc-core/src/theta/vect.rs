//! Bounded complexes of finite-dimensional rational vector spaces with exact
//! rank computations: Betti numbers, cohomology bases, and induced maps on
//! cohomology for chain maps (used for Morse-filtration injectivity and
//! microlocal restriction surjectivity tests).

use crate::linalg::{QMat, Q};
use num_traits::Zero;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum VectError {
    #[error("differential shape mismatch at degree {0}")]
    Shape(i64),
    #[error("d∘d ≠ 0 at degree {0}")]
    NotAComplex(i64),
    #[error("chain map identity fails at degree {0}")]
    NotAChainMap(i64),
}

/// dims[k] is the dimension in degree `min_degree + k`; maps[k] sends that
/// degree to the next one.
#[derive(Clone, Debug)]
pub struct VectComplex {
    pub min_degree: i64,
    pub dims: Vec<usize>,
    pub maps: Vec<QMat>,
}

impl VectComplex {
    pub fn new(min_degree: i64, dims: Vec<usize>, maps: Vec<QMat>) -> Result<Self, VectError> {
        if dims.is_empty() {
            return Ok(VectComplex {
                min_degree,
                dims,
                maps,
            });
        }
        if maps.len() + 1 != dims.len() {
            return Err(VectError::Shape(min_degree));
        }
        for (k, m) in maps.iter().enumerate() {
            if m.rows != dims[k + 1] || m.cols != dims[k] {
                return Err(VectError::Shape(min_degree + k as i64));
            }
        }
        for k in 0..maps.len().saturating_sub(1) {
            if !maps[k + 1].mul(&maps[k]).is_zero() {
                return Err(VectError::NotAComplex(min_degree + k as i64));
            }
        }
        Ok(VectComplex {
            min_degree,
            dims,
            maps,
        })
    }

    pub fn empty() -> Self {
        VectComplex {
            min_degree: 0,
            dims: vec![],
            maps: vec![],
        }
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    fn offset_of(&self, degree: i64) -> Option<usize> {
        let k = degree - self.min_degree;
        if k < 0 || k as usize >= self.dims.len() {
            None
        } else {
            Some(k as usize)
        }
    }

    pub fn dim_at(&self, degree: i64) -> usize {
        self.offset_of(degree).map_or(0, |k| self.dims[k])
    }

    fn outgoing(&self, k: usize) -> Option<&QMat> {
        self.maps.get(k)
    }

    fn incoming(&self, k: usize) -> Option<&QMat> {
        if k == 0 {
            None
        } else {
            self.maps.get(k - 1)
        }
    }

    pub fn betti_at(&self, degree: i64) -> usize {
        let Some(k) = self.offset_of(degree) else {
            return 0;
        };
        let out_rank = self.outgoing(k).map_or(0, |m| m.rank());
        let in_rank = self.incoming(k).map_or(0, |m| m.rank());
        self.dims[k] - out_rank - in_rank
    }

    /// Nonzero Betti numbers by degree.
    pub fn betti(&self) -> BTreeMap<i64, usize> {
        let mut out = BTreeMap::new();
        for k in 0..self.dims.len() {
            let d = self.min_degree + k as i64;
            let b = self.betti_at(d);
            if b > 0 {
                out.insert(d, b);
            }
        }
        out
    }

    pub fn euler_characteristic(&self) -> i64 {
        let mut acc = 0i64;
        for k in 0..self.dims.len() {
            let d = self.min_degree + k as i64;
            let sign = if d.rem_euclid(2) == 0 { 1 } else { -1 };
            acc += sign * self.dims[k] as i64;
        }
        acc
    }

    pub fn is_exact(&self) -> bool {
        self.betti().is_empty()
    }

    /// All cohomology concentrated in the single given degree (vacuously true
    /// for an exact complex).
    pub fn concentrated_in(&self, degree: i64) -> bool {
        self.betti().keys().all(|&d| d == degree)
    }

    /// Representatives of H^degree as vectors in the chain group, together
    /// with an independent basis of the incoming image.
    pub fn cohomology_basis(&self, degree: i64) -> (Vec<Vec<Q>>, Vec<Vec<Q>>) {
        let Some(k) = self.offset_of(degree) else {
            return (vec![], vec![]);
        };
        let n = self.dims[k];
        let kernel: Vec<Vec<Q>> = match self.outgoing(k) {
            Some(m) => m.nullspace(),
            None => QMat::identity(n).data,
        };
        let image: Vec<Vec<Q>> = match self.incoming(k) {
            Some(m) => {
                let span = crate::linalg::Subspace::span(
                    n,
                    (0..m.cols)
                        .map(|c| (0..m.rows).map(|r| m.data[r][c].clone()).collect())
                        .collect(),
                );
                span.basis
            }
            None => vec![],
        };
        // Extend the image basis by kernel vectors to pick representatives.
        let mut span = crate::linalg::Subspace::span(n, image.clone());
        let mut reps = Vec::new();
        for v in kernel {
            if !span.contains(&v) {
                span = span.sum(&crate::linalg::Subspace::span(n, vec![v.clone()]));
                reps.push(v);
            }
        }
        (reps, image)
    }

    /// Matrix of the induced map H^degree(self) → H^degree(target) for a
    /// chain map given degreewise; `map_at` is the block at this degree.
    pub fn induced_on_cohomology(
        &self,
        target: &VectComplex,
        map_at: &QMat,
        degree: i64,
    ) -> QMat {
        let (src_reps, _) = self.cohomology_basis(degree);
        let (tgt_reps, tgt_image) = target.cohomology_basis(degree);
        let h_src = src_reps.len();
        let h_tgt = tgt_reps.len();
        if h_src == 0 || target.offset_of(degree).is_none() {
            return QMat::new(h_tgt, h_src);
        }
        let m = target.dim_at(degree);
        // Solve [image | reps]·(a;b) = F·v; b is the class of F·v.
        let cols: Vec<Vec<Q>> = tgt_image.iter().chain(tgt_reps.iter()).cloned().collect();
        let mut sysrows = Vec::with_capacity(m);
        for i in 0..m {
            sysrows.push(cols.iter().map(|c| c[i].clone()).collect::<Vec<Q>>());
        }
        let sys = QMat::from_rows(sysrows);
        let mut out = QMat::new(h_tgt, h_src);
        for (j, v) in src_reps.iter().enumerate() {
            let fv = map_at.mul_vec(v);
            let sol = sys
                .solve(&fv)
                .expect("chain map lands in cycles, so the class is defined");
            for i in 0..h_tgt {
                out.data[i][j] = sol[tgt_image.len() + i].clone();
            }
        }
        out
    }

    pub fn h_dim(&self, degree: i64) -> usize {
        self.betti_at(degree)
    }
}

/// Rank-based injectivity of an induced cohomology map.
pub fn injective(map: &QMat) -> bool {
    map.rank() == map.cols
}

pub fn surjective(map: &QMat) -> bool {
    map.rank() == map.rows
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::q_from_i64;

    #[test]
    fn betti_of_two_term_complex() {
        // k² → k, surjective: H⁰ = 1, H¹ = 0.
        let d = QMat::from_i64_rows(&[vec![1, -1]]);
        let c = VectComplex::new(0, vec![2, 1], vec![d]).unwrap();
        assert_eq!(c.betti_at(0), 1);
        assert_eq!(c.betti_at(1), 0);
        assert_eq!(c.euler_characteristic(), 1);
        assert!(c.concentrated_in(0));
    }

    #[test]
    fn rejects_non_complexes() {
        let d0 = QMat::from_i64_rows(&[vec![1], vec![0]]);
        let d1 = QMat::from_i64_rows(&[vec![1, 0]]);
        assert!(matches!(
            VectComplex::new(0, vec![1, 2, 1], vec![d0, d1]),
            Err(VectError::NotAComplex(_))
        ));
    }

    #[test]
    fn induced_map_detects_noninjectivity() {
        // Sub: 0 → k (H⁰ = k). Full: k → k iso (H⁰ = 0): induced map 1→0 not injective.
        let sub = VectComplex::new(0, vec![1], vec![]).unwrap();
        let full = VectComplex::new(0, vec![1, 1], vec![QMat::identity(1)]).unwrap();
        let incl = QMat::identity(1);
        let induced = sub.induced_on_cohomology(&full, &incl, 0);
        assert_eq!(induced.rows, 0);
        assert_eq!(induced.cols, 1);
        assert!(!injective(&induced));
        // And a genuinely injective case.
        let same = full.induced_on_cohomology(&full, &QMat::identity(1), 0);
        assert!(injective(&same));
        let _ = q_from_i64(0);
    }
}
