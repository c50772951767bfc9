//! Idempotent lifting over a tower: lift at the top level, then check every
//! projection.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::analysis::{quotient_tower, StronglyClosedCertificate};
use super::RingTower;
use crate::error::{Error, Result};
use crate::field::Elem;
use crate::lifting::{lift_idempotent, lift_orthogonal_family, IdempotentFamily, LiftSide, LiftedIdempotent};
use crate::linalg::Subspace;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TowerIdempotent {
    pub top: LiftedIdempotent,
    /// Projection of the lift to each level.
    pub levels: Vec<Vec<Elem>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TowerFamily {
    pub top: IdempotentFamily,
    /// `levels[n][z]`: image of `e_z` in `R_n`.
    pub levels: Vec<Vec<Vec<Elem>>>,
    /// `1 − Σ e_z` at each level.
    pub residuals: Vec<Vec<Elem>>,
}

fn check_h(t: &RingTower, h: &[Subspace]) -> Result<()> {
    crate::linalg::check_dims("ideal tower depth", h.len(), t.depth())?;
    for (n, tr) in t.transitions.iter().enumerate() {
        if h[n + 1].image(t.field(), tr) != h[n] {
            return Err(Error::Hypothesis(format!("H_{} does not map onto H_{n}", n + 1)));
        }
    }
    Ok(())
}

/// `f` is given at the top level.
pub fn lift_idempotent_tower(t: &RingTower, f: &[Elem], h: &[Subspace]) -> Result<TowerIdempotent> {
    check_h(t, h)?;
    let top = t.top();
    let fld = t.field();
    let lifted = lift_idempotent(&t.levels[top], f, &h[top])?;
    let mut levels = Vec::new();
    for n in 0..=top {
        let a = &t.levels[n];
        let e = t.project(&lifted.idempotent, top, n);
        let fn_ = t.project(f, top, n);
        if !a.is_idempotent(&e) {
            return Err(Error::Inconsistent(format!("level {n}: the projected lift is not idempotent")));
        }
        if !h[n].contains(fld, &a.sub(&e, &fn_)) {
            return Err(Error::Inconsistent(format!("level {n}: e − f is not in H")));
        }
        let corner: Vec<Vec<Elem>> = (0..a.dim()).map(|i| a.mul3(&fn_, &a.basis(i), &fn_)).collect();
        if !a.span(&corner).contains(fld, &e) {
            return Err(Error::Inconsistent(format!("level {n}: e is not in f·R·f")));
        }
        levels.push(e);
    }
    Ok(TowerIdempotent { top: lifted, levels })
}

fn verify_family(t: &RingTower, fam: &IdempotentFamily) -> Result<TowerFamily> {
    let top = t.top();
    let mut levels = Vec::new();
    let mut residuals = Vec::new();
    for n in 0..=top {
        let a = &t.levels[n];
        let es: Vec<Vec<Elem>> = fam.elements.iter().map(|e| t.project(e, top, n)).collect();
        let mut sum = a.zero();
        for (w, ew) in es.iter().enumerate() {
            for (z, ez) in es.iter().enumerate() {
                let p = a.mul(ew, ez);
                let want = if w == z { ew.clone() } else { a.zero() };
                if p != want {
                    return Err(Error::Inconsistent(format!("level {n}: e_{w}·e_{z} is wrong")));
                }
            }
            sum = a.add(&sum, ew);
        }
        let res = a.sub(a.unit(), &sum);
        if res != a.zero() {
            return Err(Error::Inconsistent(format!("level {n}: the family does not sum to 1")));
        }
        residuals.push(res);
        levels.push(es);
    }
    Ok(TowerFamily { top: fam.clone(), levels, residuals })
}

pub fn lift_orthogonal_family_tower(t: &RingTower, fs: &[Vec<Elem>], h: &[Subspace], side: LiftSide) -> Result<TowerFamily> {
    check_h(t, h)?;
    let top = t.top();
    let fam = lift_orthogonal_family(&t.levels[top], fs, &h[top], side)?;
    verify_family(t, &fam)
}

/// Lifts a complete orthogonal family of `S = R/H` (given at the top level of
/// the quotient tower). The section is perturbed by random elements of `H`
/// when `perturb` is set, so it is not multiplicative.
pub fn lift_from_quotient(
    t: &RingTower,
    h: &[Subspace],
    certificate: Option<&StronglyClosedCertificate>,
    family: &[Vec<Elem>],
    side: LiftSide,
    seed: u64,
    perturb: bool,
) -> Result<TowerFamily> {
    let cert = certificate.ok_or_else(|| Error::Hypothesis("strong-closedness certificate missing".into()))?;
    if cert.depth != t.depth() {
        return Err(Error::Hypothesis("strong-closedness certificate is for a different depth".into()));
    }
    check_h(t, h)?;
    let qt = quotient_tower(t, h)?;
    let top = t.top();
    let s = &qt.tower.levels[top];
    let mut sum = s.zero();
    for (w, a) in family.iter().enumerate() {
        for (z, b) in family.iter().enumerate() {
            let want = if w == z { a.clone() } else { s.zero() };
            if s.mul(a, b) != want {
                return Err(Error::Hypothesis(format!("quotient family is not orthogonal at ({w}, {z})")));
            }
        }
        sum = s.add(&sum, a);
    }
    if sum != s.one() {
        return Err(Error::Hypothesis("quotient family does not sum to 1".into()));
    }
    let fld = t.field();
    let a = &t.levels[top];
    let q = &qt.quotients[top];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let fs: Vec<Vec<Elem>> = family
        .iter()
        .map(|x| {
            let mut r = q.lift(a, x);
            if perturb && !h[top].is_zero() {
                let c: Vec<Elem> = (0..h[top].dim()).map(|_| rng.gen_range(0..fld.q())).collect();
                r = a.add(&r, &h[top].from_coords(fld, &c));
            }
            r
        })
        .collect();
    let out = lift_orthogonal_family_tower(t, &fs, h, side)?;
    for n in 0..=top {
        for (z, e) in out.levels[n].iter().enumerate() {
            let want = qt.tower.project(&family[z], top, n);
            if qt.quotients[n].project(&t.levels[n], e) != want {
                return Err(Error::Inconsistent(format!("level {n}: e_{z} does not reduce to the quotient family")));
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::super::analysis::{strongly_closed_check, topological_jacobson_radical};
    use super::super::*;
    use super::*;
    use crate::algebra::wedderburn::wedderburn;

    #[test]
    fn zero_ideal_family_is_kept() {
        let t = product_tower(3, 3).unwrap();
        let h: Vec<Subspace> = t.levels.iter().map(|a| Subspace::zero(a.dim())).collect();
        let fs: Vec<Vec<Elem>> = (0..3).map(|i| t.levels[2].basis(i)).collect();
        let out = lift_orthogonal_family_tower(&t, &fs, &h, LiftSide::Left).unwrap();
        assert_eq!(out.top.elements, fs);
    }

    #[test]
    fn adic_unit_family() {
        let t = adic_tower(2, 4).unwrap();
        let r = topological_jacobson_radical(&t, 0).unwrap();
        let cert = strongly_closed_check(&t, &r.levels, 2, 0, false).unwrap();
        let out = lift_from_quotient(&t, &r.levels, Some(&cert), &[vec![1]], LiftSide::Left, 0, true).unwrap();
        assert_eq!(out.top.elements, vec![t.levels[3].one()]);
    }

    #[test]
    fn perturbed_section_in_dual_matrix_tower() {
        let t = dual_matrix_tower(3).unwrap();
        let r = topological_jacobson_radical(&t, 0).unwrap();
        let cert = strongly_closed_check(&t, &r.levels, 2, 5, true).unwrap();
        let qt = quotient_tower(&t, &r.levels).unwrap();
        let s = &qt.tower.levels[2];
        let w = wedderburn(s, 3).unwrap();
        let fam: Vec<Vec<Elem>> = w.primitive_idempotents().into_iter().map(|(_, e)| e).collect();
        assert_eq!(fam.len(), 2);
        for seed in 0..5 {
            let out = lift_from_quotient(&t, &r.levels, Some(&cert), &fam, LiftSide::Right, seed, true).unwrap();
            assert!(out.top.is_complete_orthogonal(&t.levels[2]));
        }
        assert!(matches!(
            lift_from_quotient(&t, &r.levels, None, &fam, LiftSide::Left, 0, false),
            Err(Error::Hypothesis(_))
        ));
    }
}
