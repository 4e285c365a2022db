//! Standard fans and bundles used across tests, examples and the
//! acceptance suite.

use super::cartier::CartierData;
use super::klyachko::{cartier_to_klyachko, KlyachkoBundle};
use super::Fan;
use crate::linalg::Subspace;

pub fn p1() -> Fan {
    Fan::new(1, vec![vec![1], vec![-1]], vec![vec![0], vec![1]]).unwrap()
}

pub fn p2() -> Fan {
    Fan::new(
        2,
        vec![vec![1, 0], vec![0, 1], vec![-1, -1]],
        vec![vec![0, 1], vec![1, 2], vec![0, 2]],
    )
    .unwrap()
}

pub fn p1xp1() -> Fan {
    Fan::new(
        2,
        vec![vec![1, 0], vec![0, 1], vec![-1, 0], vec![0, -1]],
        vec![vec![0, 1], vec![1, 2], vec![2, 3], vec![0, 3]],
    )
    .unwrap()
}

/// The Hirzebruch surface F₁ (the blowup of P² at a fixed point).
pub fn f1() -> Fan {
    Fan::new(
        2,
        vec![vec![1, 0], vec![0, 1], vec![1, 1], vec![-1, -1]],
        vec![vec![0, 2], vec![1, 2], vec![1, 3], vec![0, 3]],
    )
    .unwrap()
}

/// Affine plane: one smooth 2-cone.
pub fn a2() -> Fan {
    Fan::new(2, vec![vec![1, 0], vec![0, 1]], vec![vec![0, 1]]).unwrap()
}

/// Affine 3-space: one smooth 3-cone (the smallest setting where
/// condition (C) can fail).
pub fn a3() -> Fan {
    Fan::new(
        3,
        vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]],
        vec![vec![0, 1, 2]],
    )
    .unwrap()
}

/// O(d) on P¹ with the standard equivariant structure m₊ = 0, m₋ = d.
pub fn o_p1(d: i64) -> CartierData {
    // Input cones sort to [[0],[1]] = [σ₊, σ₋].
    CartierData::new(p1(), vec![vec![0], vec![d]]).unwrap()
}

/// O(d) on P² with m = 0 at cone(e₁,e₂).
pub fn o_p2(d: i64) -> CartierData {
    // Input cones sort to [[0,1],[0,2],[1,2]].
    CartierData::new(p2(), vec![vec![0, 0], vec![0, d], vec![d, 0]]).unwrap()
}

/// O(a,b) on P¹×P¹ with m = 0 at cone(e₁,e₂).
pub fn o_p1xp1(a: i64, b: i64) -> CartierData {
    // Input cones sort to [[0,1],[0,3],[1,2],[2,3]].
    CartierData::new(
        p1xp1(),
        vec![vec![0, 0], vec![0, b], vec![a, 0], vec![a, b]],
    )
    .unwrap()
}

/// A line bundle on F₁ from explicit characters, in input-cone order
/// [[0,2],[0,3],[1,2],[1,3]].
pub fn f1_line(m: [[i64; 2]; 4]) -> Result<CartierData, super::ToricError> {
    CartierData::new(f1(), m.iter().map(|v| v.to_vec()).collect())
}

pub fn trivial_bundle(fan: Fan, rank: usize) -> KlyachkoBundle {
    let filtrations = (0..fan.rays().len())
        .map(|_| vec![(0i64, Subspace::full(rank))])
        .collect();
    KlyachkoBundle::new(fan, rank, filtrations).unwrap()
}

/// The tangent bundle of P²: fiber N ⊗ Q, and for each ray α the filtration
/// 0 ⊂ ⟨α⟩ ⊂ N with jumps at 0 and 1.
pub fn tangent_p2() -> KlyachkoBundle {
    let fan = p2();
    let full = Subspace::full(2);
    let filtrations = (0..3)
        .map(|ray| {
            let alpha: Vec<crate::linalg::Q> = fan
                .ray(ray)
                .iter()
                .map(|&v| crate::linalg::q_from_i64(v))
                .collect();
            vec![
                (0, Subspace::span(2, vec![alpha])),
                (1, full.clone()),
            ]
        })
        .collect();
    KlyachkoBundle::new(fan, 2, filtrations).unwrap()
}

pub fn o_p1_bundle(d: i64) -> KlyachkoBundle {
    cartier_to_klyachko(&o_p1(d))
}

pub fn o_p2_bundle(d: i64) -> KlyachkoBundle {
    cartier_to_klyachko(&o_p2(d))
}

pub fn o_p1xp1_bundle(a: i64, b: i64) -> KlyachkoBundle {
    cartier_to_klyachko(&o_p1xp1(a, b))
}

/// Fr_n^* T_{P²} ⊗ O(−m): the Frobenius pullback of the tangent bundle
/// twisted down.
pub fn fujino_bundle(n: i64, m: i64) -> KlyachkoBundle {
    tangent_p2()
        .frobenius_pullback(n)
        .unwrap()
        .tensor_line(&o_p2(-m))
        .unwrap()
}
