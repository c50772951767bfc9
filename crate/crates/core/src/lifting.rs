//! Lifting idempotents modulo a nilpotent ideal `H` of a finite ring.
//!
//! Tower versions live in `tower::lifting` and run these at the top level,
//! then check every projection.

use serde::{Deserialize, Serialize};

use crate::algebra::ideal::{invert_in_one_plus_h, left_ideal, right_ideal, SubspaceIdeal};
use crate::algebra::radical::radical;
use crate::algebra::Algebra;
use crate::error::{Error, Result};
use crate::field::Elem;
use crate::linalg::Subspace;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LiftSide {
    /// `e_z = u⁻¹ e'_z`, lying in `R f_z`.
    Left,
    /// `e_z = e'_z u⁻¹`, lying in `f_z R`.
    Right,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LiftedIdempotent {
    pub idempotent: Vec<Elem>,
    pub iterations: usize,
    pub nilpotency_index: usize,
    pub iteration_bound: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdempotentFamily {
    pub elements: Vec<Vec<Elem>>,
    /// `products[w][z] = e_w·e_z`.
    pub products: Vec<Vec<Vec<Elem>>>,
    /// `1 - Σ e_z`.
    pub completeness_residual: Vec<Elem>,
    pub side: LiftSide,
    /// `u = Σ e'_z` before orthogonalization, and how it was inverted.
    pub u: Vec<Elem>,
    pub u_in_one_plus_h: bool,
}

impl IdempotentFamily {
    pub fn is_complete_orthogonal(&self, a: &Algebra) -> bool {
        let z = a.zero();
        self.completeness_residual == z
            && self.elements.iter().enumerate().all(|(w, ew)| {
                self.products[w].iter().enumerate().all(|(v, p)| if v == w { p == ew } else { *p == z })
            })
    }
}

pub(crate) fn nil_index(a: &Algebra, h: &Subspace) -> Result<usize> {
    let cls = SubspaceIdeal::classify(a, h.clone());
    if !cls.two_sided() {
        return Err(Error::Hypothesis("H is not a two-sided ideal".into()));
    }
    a.nilpotency_index(h).ok_or_else(|| Error::Hypothesis("H is not nilpotent".into()))
}

fn ceil_log2(n: usize) -> usize {
    let mut k = 0;
    while (1usize << k) < n {
        k += 1;
    }
    k
}

/// Newton iteration `g ← 3g² − 2g³` from `g = f`.
pub fn lift_idempotent(a: &Algebra, f: &[Elem], h: &Subspace) -> Result<LiftedIdempotent> {
    let fld = a.field();
    let nu = nil_index(a, h)?;
    let defect = a.sub(&a.mul(f, f), f);
    if !h.contains(fld, &defect) {
        return Err(Error::Hypothesis("f² − f does not lie in H".into()));
    }
    let three = fld.from_int(3);
    let two = fld.from_int(2);
    let bound = ceil_log2(nu) + 1;
    let mut g = f.to_vec();
    let mut iterations = 0;
    while a.mul(&g, &g) != g {
        let g2 = a.mul(&g, &g);
        let g3 = a.mul(&g2, &g);
        g = a.sub(&a.scale(three, &g2), &a.scale(two, &g3));
        iterations += 1;
        if iterations > bound {
            return Err(Error::Inconsistent(format!("Newton iteration exceeded {bound} steps")));
        }
    }
    if !h.contains(fld, &a.sub(&g, f)) {
        return Err(Error::Inconsistent("lift left the class f + H".into()));
    }
    let corner: Vec<Vec<Elem>> = (0..a.dim()).map(|i| a.mul3(f, &a.basis(i), f)).collect();
    if !a.span(&corner).contains(fld, &g) {
        return Err(Error::Inconsistent("lift is not in fRf".into()));
    }
    Ok(LiftedIdempotent { idempotent: g, iterations, nilpotency_index: nu, iteration_bound: bound })
}

fn family_record(a: &Algebra, elements: Vec<Vec<Elem>>, side: LiftSide, u: Vec<Elem>, in_h: bool) -> IdempotentFamily {
    let products = elements.iter().map(|ew| elements.iter().map(|ez| a.mul(ew, ez)).collect()).collect();
    let mut sum = a.zero();
    for e in &elements {
        sum = a.add(&sum, e);
    }
    IdempotentFamily {
        completeness_residual: a.sub(a.unit(), &sum),
        elements,
        products,
        side,
        u,
        u_in_one_plus_h: in_h,
    }
}

/// Turns a half-orthogonal family of idempotents (`e_w e_z ∈ J(A)` for
/// `z < w`) with invertible sum `u` into `u⁻¹e_z` or `e_z u⁻¹`.
pub fn orthogonalize(a: &Algebra, family: &[Vec<Elem>], h: &Subspace, side: LiftSide) -> Result<IdempotentFamily> {
    orthogonalize_within(a, family, h, &radical(a)?.space, side)
}

/// [`orthogonalize`] with half-orthogonality checked against a given ideal
/// `jac` contained in the radical.
fn orthogonalize_within(
    a: &Algebra,
    family: &[Vec<Elem>],
    h: &Subspace,
    jac: &Subspace,
    side: LiftSide,
) -> Result<IdempotentFamily> {
    let fld = a.field();
    for (z, e) in family.iter().enumerate() {
        if !a.is_idempotent(e) {
            return Err(Error::Hypothesis(format!("member {z} is not idempotent")));
        }
    }
    for w in 0..family.len() {
        for z in 0..w {
            if !jac.contains(fld, &a.mul(&family[w], &family[z])) {
                return Err(Error::Hypothesis(format!("e_{w}·e_{z} is not in the radical")));
            }
        }
    }
    let mut u = a.zero();
    for e in family {
        u = a.add(&u, e);
    }
    let in_h = h.contains(fld, &a.sub(&u, a.unit()));
    let uinv = if in_h {
        invert_in_one_plus_h(a, &u, h)?
    } else {
        a.inverse(&u).ok_or_else(|| Error::NotInvertible("u = Σ e_z is not invertible".into()))?
    };
    let elements: Vec<Vec<Elem>> = family
        .iter()
        .map(|e| match side {
            LiftSide::Left => a.mul(&uinv, e),
            LiftSide::Right => a.mul(e, &uinv),
        })
        .collect();
    let fam = family_record(a, elements, side, u, in_h);
    if !fam.is_complete_orthogonal(a) {
        return Err(Error::Inconsistent("orthogonalized family is not complete orthogonal".into()));
    }
    Ok(fam)
}

/// Lifts a family that is complete and orthogonal modulo `H`.
pub fn lift_orthogonal_family(a: &Algebra, fs: &[Vec<Elem>], h: &Subspace, side: LiftSide) -> Result<IdempotentFamily> {
    let fld = a.field();
    nil_index(a, h)?;
    let mut sum = a.zero();
    for (z, f) in fs.iter().enumerate() {
        if !h.contains(fld, &a.sub(&a.mul(f, f), f)) {
            return Err(Error::Hypothesis(format!("f_{z}² − f_{z} is not in H")));
        }
        for (w, g) in fs.iter().enumerate() {
            if w != z && !h.contains(fld, &a.mul(g, f)) {
                return Err(Error::Hypothesis(format!("f_{w}·f_{z} is not in H")));
            }
        }
        sum = a.add(&sum, f);
    }
    if !h.contains(fld, &a.sub(&sum, a.unit())) {
        return Err(Error::Hypothesis("Σ f_z is not in 1 + H".into()));
    }
    let lifted: Vec<Vec<Elem>> = fs
        .iter()
        .map(|f| lift_idempotent(a, f, h).map(|l| l.idempotent))
        .collect::<Result<_>>()?;
    // lifted products e_w e_z lie in f_w f_z + H ⊂ H, and H is nilpotent, so H ⊂ J(A)
    let fam = orthogonalize_within(a, &lifted, h, h, side)?;
    for (z, (e, f)) in fam.elements.iter().zip(fs).enumerate() {
        if !h.contains(fld, &a.sub(e, f)) {
            return Err(Error::Inconsistent(format!("e_{z} is not in f_{z} + H")));
        }
        let one_sided = match side {
            LiftSide::Left => left_ideal(a, &[f.clone()]),
            LiftSide::Right => right_ideal(a, &[f.clone()]),
        };
        if !one_sided.contains(fld, e) {
            return Err(Error::Inconsistent(format!("e_{z} is not in the chosen one-sided ideal of f_{z}")));
        }
    }
    Ok(fam)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::builtins::*;
    use crate::field::FiniteField;

    fn h_of(a: &Algebra) -> Subspace {
        radical(a).unwrap().space
    }

    #[test]
    fn already_idempotent_is_fixed() {
        let f = FiniteField::prime(2).unwrap();
        let a = truncated_power(&f, 2);
        let l = lift_idempotent(&a, a.unit(), &h_of(&a)).unwrap();
        assert_eq!(l.idempotent, a.one());
        assert_eq!(l.iterations, 0);
    }

    #[test]
    fn one_plus_x_over_f3() {
        let f = FiniteField::prime(3).unwrap();
        let a = truncated_power(&f, 2);
        assert_eq!(lift_idempotent(&a, &[1, 1], &h_of(&a)).unwrap().idempotent, vec![1, 0]);
    }

    #[test]
    fn x_over_f2() {
        let f = FiniteField::prime(2).unwrap();
        let a = truncated_power(&f, 2);
        assert_eq!(lift_idempotent(&a, &[0, 1], &h_of(&a)).unwrap().idempotent, vec![0, 0]);
    }

    #[test]
    fn defect_outside_h_is_rejected() {
        let f = FiniteField::prime(3).unwrap();
        let a = truncated_power(&f, 2);
        assert!(matches!(lift_idempotent(&a, &[2, 0], &h_of(&a)), Err(Error::Hypothesis(_))));
    }

    fn mat2_dual() -> Algebra {
        let f = FiniteField::prime(2).unwrap();
        matrix_over(&truncated_power(&f, 2), 2)
    }

    // basis index of E_ij ⊗ x^s in Mat_2(F_2[x]/(x²))
    fn idx(i: usize, j: usize, s: usize) -> usize {
        (i * 2 + j) * 2 + s
    }

    fn elem(terms: &[(usize, usize, usize)]) -> Vec<Elem> {
        let mut v = vec![0; 8];
        for &(i, j, s) in terms {
            v[idx(i, j, s)] ^= 1;
        }
        v
    }

    #[test]
    fn mohamed_mueller_example() {
        let a = mat2_dual();
        let h = h_of(&a);
        let e1 = elem(&[(0, 0, 0)]);
        let e2 = elem(&[(1, 1, 0), (1, 0, 1)]);
        let fam = orthogonalize(&a, &[e1, e2], &h, LiftSide::Left).unwrap();
        assert_eq!(fam.u, elem(&[(0, 0, 0), (1, 1, 0), (1, 0, 1)]));
        assert!(fam.u_in_one_plus_h);
        assert_eq!(fam.elements[0], elem(&[(0, 0, 0), (1, 0, 1)]));
        assert_eq!(fam.elements[1], elem(&[(1, 1, 0), (1, 0, 1)]));
    }

    #[test]
    fn half_orthogonality_order_matters() {
        let a = mat2_dual();
        let h = h_of(&a);
        let e1 = elem(&[(0, 0, 0), (0, 1, 0)]); // E11 + E12, idempotent
        let e2 = elem(&[(1, 1, 0)]);
        // e2·e1 = 0 but e1·e2 = E12 ∉ H: the order (e2, e1) violates the hypothesis
        assert!(orthogonalize(&a, &[e1.clone(), e2.clone()], &h, LiftSide::Left).is_ok());
        assert!(matches!(orthogonalize(&a, &[e2, e1], &h, LiftSide::Left), Err(Error::Hypothesis(_))));
    }

    #[test]
    fn u_equal_to_one_keeps_family() {
        let a = mat2_dual();
        let h = h_of(&a);
        let fam = [elem(&[(0, 0, 0)]), elem(&[(1, 1, 0)])];
        let out = orthogonalize(&a, &fam, &h, LiftSide::Right).unwrap();
        assert_eq!(out.elements, fam.to_vec());
    }

    #[test]
    fn family_in_dual_numbers() {
        let f = FiniteField::prime(2).unwrap();
        let a = truncated_power(&f, 2);
        let h = h_of(&a);
        for side in [LiftSide::Left, LiftSide::Right] {
            let fam = lift_orthogonal_family(&a, &[vec![1, 1], vec![0, 1]], &h, side).unwrap();
            assert_eq!(fam.elements, vec![vec![1, 0], vec![0, 0]]);
        }
    }

    #[test]
    fn diagonal_family_pipeline() {
        let a = mat2_dual();
        let h = h_of(&a);
        let fs = [elem(&[(0, 0, 0)]), elem(&[(1, 1, 0), (1, 0, 1)])];
        let fam = lift_orthogonal_family(&a, &fs, &h, LiftSide::Left).unwrap();
        assert!(fam.is_complete_orthogonal(&a));
        assert_eq!(fam.elements[0], elem(&[(0, 0, 0), (1, 0, 1)]));
    }
}
