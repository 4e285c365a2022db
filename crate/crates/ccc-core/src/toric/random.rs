//! Seeded random bundle generation for property tests: random jump patterns
//! in [−3, 3] with random rational subspace chains, rejection-sampled
//! through validation so every emitted bundle satisfies condition (C).

use super::klyachko::KlyachkoBundle;
use super::Fan;
use crate::linalg::{q_from_i64, Subspace, Q};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_chain(rng: &mut ChaCha8Rng, rank: usize) -> Vec<(i64, Subspace)> {
    loop {
        let steps = rng.gen_range(1..=rank);
        // Strictly increasing dimensions ending at the full fiber.
        let mut dims: Vec<usize> = (1..rank).collect();
        for i in (1..dims.len()).rev() {
            let j = rng.gen_range(0..=i);
            dims.swap(i, j);
        }
        let mut dims: Vec<usize> = dims.into_iter().take(steps - 1).collect();
        dims.push(rank);
        dims.sort_unstable();
        dims.dedup();
        // Random flag: spans of prefixes of random vectors.
        let vectors: Vec<Vec<Q>> = (0..rank)
            .map(|_| (0..rank).map(|_| q_from_i64(rng.gen_range(-2..=2))).collect())
            .collect();
        if Subspace::span(rank, vectors.clone()).dim() != rank {
            continue;
        }
        let mut jumps: Vec<i64> = Vec::new();
        let mut k = rng.gen_range(-3..=0);
        for _ in 0..dims.len() {
            jumps.push(k);
            k += rng.gen_range(1..=2);
        }
        let chain: Vec<(i64, Subspace)> = dims
            .iter()
            .zip(jumps)
            .map(|(&d, j)| (j, Subspace::span(rank, vectors[..d].to_vec())))
            .collect();
        // Spans of prefixes can repeat dimensions when vectors are dependent.
        if chain.windows(2).all(|w| w[1].1.dim() > w[0].1.dim())
            && chain.last().unwrap().1.dim() == rank
        {
            return chain;
        }
    }
}

/// A random bundle of the given rank that passes validation; resamples until
/// condition (C) holds (on surfaces this is nearly always immediate).
pub fn random_bundle(fan: &Fan, rank: usize, rng: &mut ChaCha8Rng) -> KlyachkoBundle {
    loop {
        let filtrations: Vec<Vec<(i64, Subspace)>> = (0..fan.rays().len())
            .map(|_| random_chain(rng, rank))
            .collect();
        if let Ok(b) = KlyachkoBundle::new(fan.clone(), rank, filtrations) {
            if b.validate().is_ok() {
                return b;
            }
        }
    }
}

/// A random conical constructible function: integer combination of standard
/// and costandard indicators of simplicial cones with small generators.
pub fn random_conical(
    dim: usize,
    rng: &mut ChaCha8Rng,
) -> crate::euler::ConicalFunction {
    use crate::euler::{ConstructibleFunction, IndicatorKind};
    let terms = rng.gen_range(1..=2);
    let mut f = ConstructibleFunction::zero(dim);
    for _ in 0..terms {
        let gens: Vec<Vec<i64>> = (0..dim)
            .map(|_| {
                loop {
                    let v: Vec<i64> = (0..dim).map(|_| rng.gen_range(-2..=2)).collect();
                    if v.iter().any(|&x| x != 0) {
                        return crate::linalg::primitive(&v);
                    }
                }
            })
            .collect();
        let cone = crate::geometry::Cone::from_generators(dim, gens);
        let kind = if rng.gen_bool(0.5) {
            IndicatorKind::Standard
        } else {
            IndicatorKind::Costandard
        };
        let weight = loop {
            let w = rng.gen_range(-2..=2i64);
            if w != 0 {
                break w;
            }
        };
        let ind = ConstructibleFunction::indicator(kind, &cone.relative_interior());
        f = f.add(&ind.scale_weights(weight)).unwrap();
    }
    crate::euler::ConicalFunction::new(f).expect("cones are conical")
}

/// A random bounded cell (polytope interior/face) in low dimension.
pub fn random_cell(dim: usize, rng: &mut ChaCha8Rng) -> crate::geometry::Cell {
    use crate::geometry::{Constraint, LinearSystem, Rel};
    loop {
        let mut sys = LinearSystem::new(dim);
        // Box constraints keep it bounded; extra random cuts vary the shape.
        for i in 0..dim {
            let lo = rng.gen_range(-3..=0);
            let hi = rng.gen_range(1..=4);
            let mut e = vec![0i64; dim];
            e[i] = 1;
            sys.push(Constraint::from_i64(&e, lo, Rel::Gt));
            e[i] = -1;
            sys.push(Constraint::from_i64(&e, -hi, Rel::Gt));
        }
        for _ in 0..rng.gen_range(0..=2) {
            let normal: Vec<i64> = (0..dim).map(|_| rng.gen_range(-2..=2)).collect();
            if normal.iter().all(|&v| v == 0) {
                continue;
            }
            sys.push(Constraint::from_i64(&normal, rng.gen_range(-3..=1), Rel::Gt));
        }
        let eqs = vec![];
        let sts: Vec<(Vec<Q>, Q)> = sys
            .constraints
            .iter()
            .map(|c| (c.normal.clone(), c.offset.clone()))
            .collect();
        if let Ok(cell) = crate::geometry::Cell::new(dim, eqs, sts) {
            return cell;
        }
    }
}

/// A random closed lattice polytope in dimension ≤ 2, as the convex hull of
/// random lattice points, H-described by eliminating the hull coefficients.
pub fn random_polytope_system(
    dim: usize,
    rng: &mut ChaCha8Rng,
) -> (Vec<Vec<i64>>, crate::geometry::LinearSystem) {
    use crate::geometry::{Constraint, LinearSystem, Rel};
    let count = rng.gen_range(1..=4);
    let mut vertices: Vec<Vec<i64>> = (0..count)
        .map(|_| (0..dim).map(|_| rng.gen_range(-3..=3)).collect())
        .collect();
    vertices.sort();
    vertices.dedup();
    // P = conv(v_i): image of the standard simplex under Σ λ_i v_i.
    let k = vertices.len();
    let mut sys = LinearSystem::new(k + dim);
    for i in 0..dim {
        let mut normal = vec![Q::from_integer(0.into()); k + dim];
        for (j, v) in vertices.iter().enumerate() {
            normal[j] = q_from_i64(-v[i]);
        }
        normal[k + i] = q_from_i64(1);
        sys.push(Constraint::new(normal, Q::from_integer(0.into()), Rel::Eq));
    }
    let mut simplex = vec![Q::from_integer(0.into()); k + dim];
    for s in simplex.iter_mut().take(k) {
        *s = q_from_i64(1);
    }
    sys.push(Constraint::new(simplex, q_from_i64(1), Rel::Eq));
    for j in 0..k {
        let mut normal = vec![Q::from_integer(0.into()); k + dim];
        normal[j] = q_from_i64(1);
        sys.push(Constraint::new(normal, Q::from_integer(0.into()), Rel::Ge));
    }
    let mut reduced = sys;
    for var in (0..k).rev() {
        reduced = reduced.eliminate(var).expect("hull system is feasible");
    }
    let mut out = LinearSystem::new(dim);
    for c in reduced.constraints {
        out.push(Constraint::new(
            c.normal[k..].to_vec(),
            c.offset,
            c.rel,
        ));
    }
    (vertices, out)
}
