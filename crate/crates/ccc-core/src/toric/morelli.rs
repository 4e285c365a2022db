//! The bundle-to-constructible-function map: for each cone σ and each weight
//! χ of the σ-splitting, the costandard indicator of χ + σ∨ enters with sign
//! (−1)^{dim σ}. Since σ∨ is full dimensional for the pointed cones of a
//! fan, each summand is (−1)^{dim σ}(−1)^n on the open translated dual cone
//! {x : ⟨α, x − χ⟩ > 0 for every ray α of σ}.

use super::klyachko::{KlyachkoBundle, Splittings};
use super::ToricError;
use crate::euler::{ConstructibleFunction, EulerError};
use crate::geometry::Cell;
use crate::linalg::{dot_zz, q_from_i64, Q};

/// The open translated dual cone (χ + σ∨)° as a cell: one strict inequality
/// per ray of σ.
pub fn open_dual_cone_cell(
    fan: &super::Fan,
    cone: usize,
    chi: &[i64],
) -> Cell {
    let n = fan.dim();
    let stricts: Vec<(Vec<Q>, Q)> = fan
        .cone_rays(cone)
        .iter()
        .map(|&r| {
            let ray = fan.ray(r);
            let normal: Vec<Q> = ray.iter().map(|&v| q_from_i64(v)).collect();
            (normal, q_from_i64(dot_zz(ray, chi)))
        })
        .collect();
    Cell::new(n, vec![], stricts).expect("translated dual cones are nonempty")
}

/// The closed translated dual cone χ + σ∨ as a weak-inequality system.
pub fn closed_dual_cone_system(
    fan: &super::Fan,
    cone: usize,
    chi: &[i64],
) -> crate::geometry::LinearSystem {
    use crate::geometry::{Constraint, LinearSystem, Rel};
    let mut sys = LinearSystem::new(fan.dim());
    for &r in fan.cone_rays(cone) {
        let ray = fan.ray(r);
        let normal: Vec<Q> = ray.iter().map(|&v| q_from_i64(v)).collect();
        sys.push(Constraint::new(
            normal,
            q_from_i64(dot_zz(ray, chi)),
            Rel::Ge,
        ));
    }
    sys
}

pub fn morelli_eq1(bundle: &KlyachkoBundle) -> Result<ConstructibleFunction, ToricError> {
    let splittings = bundle.validate()?;
    Ok(morelli_eq1_from_splittings(bundle, &splittings))
}

pub fn morelli_eq1_from_splittings(
    bundle: &KlyachkoBundle,
    splittings: &Splittings,
) -> ConstructibleFunction {
    let fan = bundle.fan();
    let n = fan.dim();
    let mut terms = Vec::new();
    for cone in 0..fan.cone_count() {
        let d = fan.cone_dim(cone);
        let sign = if (d + n) % 2 == 0 { 1i64 } else { -1 };
        for chi in &splittings.for_cone(cone).weights {
            terms.push((open_dual_cone_cell(fan, cone, chi), sign));
        }
    }
    ConstructibleFunction::from_terms(n, terms).expect("cells share the fan dimension")
}

/// Convenience wrapper returning a well-typed error for euler-level failures.
pub fn morelli_supported_values(
    f: &ConstructibleFunction,
    points: &[Vec<i64>],
) -> Result<Vec<i64>, EulerError> {
    points.iter().map(|p| f.evaluate_z(p)).collect()
}

#[cfg(test)]
mod tests {
    use super::super::fixtures;
    use super::super::klyachko::cartier_to_klyachko;
    use super::*;
    use crate::euler::{cell_from_i64, ConstructibleFunction, IndicatorKind};

    #[test]
    fn o1_on_p1_is_open_interval_indicator() {
        let b = cartier_to_klyachko(&fixtures::o_p1(1));
        let mo = morelli_eq1(&b).unwrap();
        let open = cell_from_i64(1, &[], &[(&[1], 0), (&[-1], -1)]).unwrap();
        let expected = ConstructibleFunction::from_terms(1, vec![(open, 1)]).unwrap();
        assert!(mo.equals(&expected).unwrap());
        assert_eq!(mo.evaluate_z(&[0]).unwrap(), 0);
        assert_eq!(mo.evaluate_z(&[1]).unwrap(), 0);
        let _ = IndicatorKind::Standard;
    }

    #[test]
    fn additivity_under_direct_sum() {
        let a = cartier_to_klyachko(&fixtures::o_p1(2));
        let b = cartier_to_klyachko(&fixtures::o_p1(-1));
        let sum = a.direct_sum(&b).unwrap();
        let mo_sum = morelli_eq1(&sum).unwrap();
        let mo_a = morelli_eq1(&a).unwrap();
        let mo_b = morelli_eq1(&b).unwrap();
        assert!(mo_sum.equals(&mo_a.add(&mo_b).unwrap()).unwrap());
    }

    #[test]
    fn rule_a_values_for_ample_line_bundle_on_p2() {
        // mo(O(1)) on P² takes value 1 exactly on the interior of the unit
        // triangle; lattice points of the closed triangle are on the boundary
        // here, so they evaluate to 0.
        let b = cartier_to_klyachko(&fixtures::o_p2(1));
        let mo = morelli_eq1(&b).unwrap();
        assert_eq!(mo.evaluate_z(&[0, 0]).unwrap(), 0);
        let third = crate::linalg::Q::new(1.into(), 4.into());
        assert_eq!(
            mo.evaluate(&[third.clone(), third]).unwrap(),
            1,
            "interior of the triangle carries 1"
        );
        assert_eq!(mo.evaluate_z(&[2, 2]).unwrap(), 0);
    }
}
