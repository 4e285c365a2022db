//! Hyperplane arrangements by feasible sign-vector enumeration.
//!
//! Cells are indexed by sign vectors over a normalized hyperplane list.
//! Enumeration walks a ternary tree over the hyperplanes, reusing a witness
//! point per branch so an exact feasibility solve is only paid when a new
//! cell actually opens up.

use super::cell::Cell;
use super::fm::{Constraint, LinearSystem, Rel};
use crate::linalg::{primitive_of_rational, q_from_i64, Q};
use num_traits::Zero;
use std::cmp::Ordering;

/// `normal · x = offset` with primitive integer normal whose first nonzero
/// entry is positive.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Hyperplane {
    pub normal: Vec<i64>,
    pub offset: Q,
}

impl Hyperplane {
    /// Normalize a rational constraint `normal·x = offset`; None if the
    /// normal vanishes.
    pub fn new(normal: &[Q], offset: &Q) -> Option<Hyperplane> {
        let prim = primitive_of_rational(normal);
        if prim.iter().all(|&v| v == 0) {
            return None;
        }
        // offset rescales by the same positive factor that takes normal to prim.
        let idx = normal.iter().position(|v| !v.is_zero()).unwrap();
        let mut factor = q_from_i64(prim[idx]) / &normal[idx];
        let mut prim = prim;
        if prim.iter().find(|&&v| v != 0).copied().unwrap() < 0 {
            for v in prim.iter_mut() {
                *v = -*v;
            }
            factor = -factor;
        }
        Some(Hyperplane {
            normal: prim,
            offset: offset * &factor,
        })
    }

    pub fn from_i64(normal: &[i64], offset: i64) -> Option<Hyperplane> {
        let nq: Vec<Q> = normal.iter().map(|&v| q_from_i64(v)).collect();
        Hyperplane::new(&nq, &q_from_i64(offset))
    }

    pub fn eval(&self, x: &[Q]) -> Ordering {
        let v: Q = self
            .normal
            .iter()
            .zip(x)
            .map(|(&a, xi)| xi * q_from_i64(a))
            .sum();
        v.cmp(&self.offset)
    }

    fn constraint(&self, sign: i8) -> Constraint {
        let nq: Vec<Q> = self.normal.iter().map(|&v| q_from_i64(v)).collect();
        match sign {
            0 => Constraint::new(nq, self.offset.clone(), Rel::Eq),
            1 => Constraint::new(nq, self.offset.clone(), Rel::Gt),
            -1 => Constraint::new(
                nq.iter().map(|v| -v.clone()).collect(),
                -self.offset.clone(),
                Rel::Gt,
            ),
            _ => unreachable!(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct ArrangementCell {
    pub signs: Vec<i8>,
    pub cell: Cell,
    pub sample: Vec<Q>,
}

/// A polyhedral stratification of R^n generated by a hyperplane list: the
/// cells are the nonempty sign classes, so they partition the space and the
/// closure of each cell is a union of cells.
#[derive(Clone, Debug)]
pub struct Arrangement {
    pub ambient: usize,
    pub hyperplanes: Vec<Hyperplane>,
    pub cells: Vec<ArrangementCell>,
}

impl Arrangement {
    pub fn from_hyperplanes(ambient: usize, hyperplanes: Vec<Hyperplane>) -> Arrangement {
        let mut hs = hyperplanes;
        hs.sort();
        hs.dedup();
        let mut cells = Vec::new();
        let origin_free = LinearSystem::new(ambient);
        let seed = origin_free.sample(0).expect("ambient space is nonempty");
        enumerate(ambient, &hs, 0, &mut Vec::new(), seed, &mut cells);
        cells.sort_by(|a, b| a.signs.cmp(&b.signs));
        Arrangement {
            ambient,
            hyperplanes: hs,
            cells,
        }
    }

    /// Common refinement of a family of cells: the arrangement generated by
    /// every defining hyperplane of every input cell. Each input cell is a
    /// union of output cells.
    pub fn refine(ambient: usize, cells: &[&Cell]) -> Arrangement {
        let mut hs = Vec::new();
        for c in cells {
            assert_eq!(c.ambient_dim(), ambient, "refine dimension mismatch");
            for (n, b) in c.equalities().iter().chain(c.stricts().iter()) {
                if let Some(h) = Hyperplane::new(n, b) {
                    hs.push(h);
                }
            }
        }
        Arrangement::from_hyperplanes(ambient, hs)
    }

    /// The cell containing a point.
    pub fn locate(&self, x: &[Q]) -> Option<&ArrangementCell> {
        let signs: Vec<i8> = self
            .hyperplanes
            .iter()
            .map(|h| match h.eval(x) {
                Ordering::Less => -1,
                Ordering::Equal => 0,
                Ordering::Greater => 1,
            })
            .collect();
        self.cells
            .binary_search_by(|c| c.signs.cmp(&signs))
            .ok()
            .map(|i| &self.cells[i])
    }
}

fn enumerate(
    ambient: usize,
    hyperplanes: &[Hyperplane],
    depth: usize,
    signs: &mut Vec<i8>,
    witness: Vec<Q>,
    out: &mut Vec<ArrangementCell>,
) {
    if depth == hyperplanes.len() {
        let mut eqs = Vec::new();
        let mut sts = Vec::new();
        for (h, &s) in hyperplanes.iter().zip(signs.iter()) {
            let c = h.constraint(s);
            match c.rel {
                Rel::Eq => eqs.push((c.normal, c.offset)),
                _ => sts.push((c.normal, c.offset)),
            }
        }
        let cell = Cell::new(ambient, eqs, sts).expect("witnessed sign class is nonempty");
        debug_assert!(cell.contains(&witness));
        out.push(ArrangementCell {
            signs: signs.clone(),
            cell,
            sample: witness,
        });
        return;
    }
    let h = &hyperplanes[depth];
    let witness_sign = match h.eval(&witness) {
        Ordering::Less => -1i8,
        Ordering::Equal => 0,
        Ordering::Greater => 1,
    };
    for s in [-1i8, 0, 1] {
        if s == witness_sign {
            signs.push(s);
            enumerate(ambient, hyperplanes, depth + 1, signs, witness.clone(), out);
            signs.pop();
        } else {
            // Need a fresh witness for this branch, if it is feasible at all.
            let mut sys = LinearSystem::new(ambient);
            for (i, &sig) in signs.iter().enumerate() {
                sys.push(hyperplanes[i].constraint(sig));
            }
            sys.push(h.constraint(s));
            if let Some(w) = sys.sample(0) {
                signs.push(s);
                enumerate(ambient, hyperplanes, depth + 1, signs, w, out);
                signs.pop();
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    #[test]
    fn breakpoints_on_line() {
        // Two open intervals (0,2), (1,3): refinement has 4 points + 5 intervals.
        let c1 = Cell::new(
            1,
            vec![],
            vec![
                (vec![Q::one()], q_from_i64(0)),
                (vec![-Q::one()], q_from_i64(-2)),
            ],
        )
        .unwrap();
        let c2 = Cell::new(
            1,
            vec![],
            vec![
                (vec![Q::one()], q_from_i64(1)),
                (vec![-Q::one()], q_from_i64(-3)),
            ],
        )
        .unwrap();
        let arr = Arrangement::refine(1, &[&c1, &c2]);
        assert_eq!(arr.hyperplanes.len(), 4);
        assert_eq!(arr.cells.len(), 9);
        let points = arr.cells.iter().filter(|c| c.cell.dim() == 0).count();
        assert_eq!(points, 4);
    }

    #[test]
    fn crossing_lines() {
        let hs = vec![
            Hyperplane::from_i64(&[1, 0], 0).unwrap(),
            Hyperplane::from_i64(&[0, 1], 0).unwrap(),
        ];
        let arr = Arrangement::from_hyperplanes(2, hs);
        assert_eq!(arr.cells.len(), 9); // 1 point, 4 open rays, 4 open sectors
        let by_dim: Vec<usize> = (0..=2)
            .map(|d| arr.cells.iter().filter(|c| c.cell.dim() == d).count())
            .collect();
        assert_eq!(by_dim, vec![1, 4, 4]);
    }

    #[test]
    fn square_refinement_sign_classes() {
        // Single open square: 25 sign classes over its 4 hyperplanes; the 9
        // bounded ones partition the closed square. Cross-checked against
        // brute-force sign enumeration.
        let square = Cell::new(
            2,
            vec![],
            vec![
                (vec![q_from_i64(1), q_from_i64(0)], q_from_i64(0)),
                (vec![q_from_i64(-1), q_from_i64(0)], q_from_i64(-1)),
                (vec![q_from_i64(0), q_from_i64(1)], q_from_i64(0)),
                (vec![q_from_i64(0), q_from_i64(-1)], q_from_i64(-1)),
            ],
        )
        .unwrap();
        let arr = Arrangement::refine(2, &[&square]);

        // Brute-force oracle over all 3^4 sign vectors.
        let mut count = 0;
        for senum in 0..81u32 {
            let mut signs = Vec::new();
            let mut v = senum;
            for _ in 0..4 {
                signs.push((v % 3) as i8 - 1);
                v /= 3;
            }
            let mut sys = LinearSystem::new(2);
            for (h, &s) in arr.hyperplanes.iter().zip(signs.iter()) {
                sys.push(h.constraint(s));
            }
            if sys.is_feasible() {
                count += 1;
            }
        }
        assert_eq!(arr.cells.len(), count);
        assert_eq!(count, 25);
        let bounded = arr.cells.iter().filter(|c| c.cell.is_bounded()).count();
        assert_eq!(bounded, 9);
        // Euler consistency: alternating sum over the bounded refinement of a
        // closed polytope is χ of a compact contractible set.
        let chi: i64 = arr
            .cells
            .iter()
            .filter(|c| c.cell.is_bounded())
            .map(|c| if c.cell.dim() % 2 == 0 { 1 } else { -1 })
            .sum();
        assert_eq!(chi, 1);
    }

    #[test]
    fn refine_soundness_membership() {
        // sample_point(D) ∈ C iff D ⊆ C, for every input C and output D.
        let tri = Cell::new(
            2,
            vec![],
            vec![
                (vec![q_from_i64(1), q_from_i64(0)], q_from_i64(0)),
                (vec![q_from_i64(0), q_from_i64(1)], q_from_i64(0)),
                (vec![q_from_i64(-1), q_from_i64(-1)], q_from_i64(-2)),
            ],
        )
        .unwrap();
        let band = Cell::new(
            2,
            vec![],
            vec![
                (vec![q_from_i64(0), q_from_i64(1)], q_from_i64(0)),
                (vec![q_from_i64(0), q_from_i64(-1)], q_from_i64(-1)),
            ],
        )
        .unwrap();
        let arr = Arrangement::refine(2, &[&tri, &band]);
        for d in &arr.cells {
            for c in [&tri, &band] {
                let inside = c.contains(&d.sample);
                let alt = d.cell.sample_point(2);
                assert_eq!(c.contains(&alt), inside, "cell not constant inside input");
            }
        }
    }

    #[test]
    fn locate_finds_cells() {
        let hs = vec![Hyperplane::from_i64(&[1, 1], 1).unwrap()];
        let arr = Arrangement::from_hyperplanes(2, hs);
        assert_eq!(arr.cells.len(), 3);
        let p = vec![q_from_i64(5), q_from_i64(5)];
        let c = arr.locate(&p).unwrap();
        assert!(c.cell.contains(&p));
    }
}
