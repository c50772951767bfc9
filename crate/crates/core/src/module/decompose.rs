//! Krull–Schmidt decomposition through primitive idempotents of `End(M)`.

use serde::{Deserialize, Serialize};

use super::{endo_algebra, hom_space, FiniteModule};
use crate::algebra::ideal::quotient;
use crate::algebra::wedderburn::wedderburn_of_semisimple;
use crate::error::{Error, Result};
use crate::field::Elem;
use crate::lifting::{lift_orthogonal_family, LiftSide};
use crate::linalg::{self, Matrix, Subspace};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalWitness {
    pub end_dim: usize,
    pub end_radical_dim: usize,
    /// `End/J ≅ F_{residue_order}`.
    pub residue_order: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summand {
    /// Echelon basis of the summand inside `M`.
    pub basis: Vec<Vec<Elem>>,
    /// The idempotent endomorphism projecting onto the summand.
    pub idempotent: Matrix,
    pub class: usize,
    pub local: LocalWitness,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionCertificate {
    pub summands: Vec<Summand>,
    /// Summand indices grouped by isomorphism class.
    pub classes: Vec<Vec<usize>>,
    /// `(i, j, X)`: `v ↦ v·X` is an isomorphism from summand `i` onto summand `j`.
    pub isomorphisms: Vec<(usize, usize, Matrix)>,
    pub seed: u64,
}

impl DecompositionCertificate {
    pub fn summand_modules(&self, m: &FiniteModule) -> Result<Vec<FiniteModule>> {
        let f = m.field();
        self.summands.iter().map(|s| m.submodule(&Subspace::span(f, m.dim, &s.basis))).collect()
    }

    /// `(summand dimension, multiplicity)` per class, sorted.
    pub fn class_profile(&self) -> Vec<(usize, usize)> {
        let mut v: Vec<(usize, usize)> =
            self.classes.iter().map(|c| (self.summands[c[0]].basis.len(), c.len())).collect();
        v.sort();
        v
    }
}

/// Whether `End(M)/J` is a field; returns the witness if so.
pub fn local_witness(m: &FiniteModule, seed: u64) -> Result<Option<LocalWitness>> {
    if m.dim == 0 {
        return Ok(None);
    }
    let e = endo_algebra(m)?;
    let j = e.radical()?.space;
    if j.is_full() {
        return Ok(None);
    }
    let s = quotient(&e.algebra, &j)?;
    let w = wedderburn_of_semisimple(&s.algebra, seed)?;
    if w.components.len() == 1 && w.components[0].n == 1 {
        Ok(Some(LocalWitness {
            end_dim: e.algebra.dim(),
            end_radical_dim: j.dim(),
            residue_order: w.components[0].residue_order,
        }))
    } else {
        Ok(None)
    }
}

/// Isomorphism test for modules with local endomorphism rings: `M ≅ N` iff some
/// composite `f·g` of basis maps `f: M → N`, `g: N → M` avoids `J(End M)`.
pub fn indecomposable_isomorphism(m: &FiniteModule, n: &FiniteModule) -> Result<Option<Matrix>> {
    if m.dim != n.dim {
        return Ok(None);
    }
    let f = m.field();
    let e = endo_algebra(m)?;
    let j = e.radical()?.space;
    let mn = hom_space(m, n)?;
    let nm = hom_space(n, m)?;
    for x in &mn {
        for y in &nm {
            let c = e.coords_of(&x.mul(f, y)).ok_or_else(|| Error::Inconsistent("composite is not an endomorphism".into()))?;
            if !j.contains(f, &c) {
                if linalg::rank(f, x) != m.dim {
                    return Err(Error::Inconsistent("split map between equal dimensions is not bijective".into()));
                }
                return Ok(Some(x.clone()));
            }
        }
    }
    Ok(None)
}

pub fn decompose_indecomposable(m: &FiniteModule, seed: u64) -> Result<DecompositionCertificate> {
    let f = m.field().clone();
    if m.dim == 0 {
        return Ok(DecompositionCertificate { summands: vec![], classes: vec![], isomorphisms: vec![], seed });
    }
    let e = endo_algebra(m)?;
    let ea = e.algebra.as_ref();
    let j = e.radical()?.space;
    let s = quotient(ea, &j)?;
    let w = wedderburn_of_semisimple(&s.algebra, seed)?;
    let prims = w.primitive_idempotents();
    let fs: Vec<Vec<Elem>> = prims.iter().map(|(_, x)| s.lift(ea, x)).collect();
    let fam = lift_orthogonal_family(ea, &fs, &j, LiftSide::Left)?;
    let mut summands = Vec::new();
    let mut total = Subspace::zero(m.dim);
    for ((class, _), idem) in prims.iter().zip(&fam.elements) {
        let x = e.matrix_of(idem);
        let image = Subspace::from_matrix(&f, &x);
        total = total.sum(&f, &image);
        let sub = m.submodule(&image)?;
        let local = local_witness(&sub, seed)?
            .ok_or_else(|| Error::Inconsistent("summand endomorphism ring is not local".into()))?;
        summands.push(Summand { basis: image.vectors(), idempotent: x, class: *class, local });
    }
    if !total.is_full() || summands.iter().map(|s| s.basis.len()).sum::<usize>() != m.dim {
        return Err(Error::Inconsistent("summands do not form a direct sum decomposition".into()));
    }
    let mut classes: Vec<Vec<usize>> = vec![Vec::new(); w.components.len()];
    for (i, s) in summands.iter().enumerate() {
        classes[s.class].push(i);
    }
    let mods: Vec<FiniteModule> = summands
        .iter()
        .map(|s| m.submodule(&Subspace::span(&f, m.dim, &s.basis)))
        .collect::<Result<_>>()?;
    let mut isomorphisms = Vec::new();
    for c in &classes {
        for &other in &c[1..] {
            let iso = indecomposable_isomorphism(&mods[c[0]], &mods[other])?
                .ok_or_else(|| Error::Inconsistent("summands in one class are not isomorphic".into()))?;
            isomorphisms.push((c[0], other, iso));
        }
    }
    for a in 0..classes.len() {
        for b in a + 1..classes.len() {
            if indecomposable_isomorphism(&mods[classes[a][0]], &mods[classes[b][0]])?.is_some() {
                return Err(Error::Inconsistent("summands in different classes are isomorphic".into()));
            }
        }
    }
    Ok(DecompositionCertificate { summands, classes, isomorphisms, seed })
}

/// Matches the summands of two decompositions of the same module class by class.
pub fn decompositions_match(m: &FiniteModule, a: &DecompositionCertificate, b: &DecompositionCertificate) -> Result<bool> {
    if a.summands.len() != b.summands.len() || a.classes.len() != b.classes.len() {
        return Ok(false);
    }
    let ma = a.summand_modules(m)?;
    let mb = b.summand_modules(m)?;
    let mut used = vec![false; b.classes.len()];
    for ca in &a.classes {
        let rep = &ma[ca[0]];
        let mut found = false;
        for (k, cb) in b.classes.iter().enumerate() {
            if !used[k] && cb.len() == ca.len() && indecomposable_isomorphism(rep, &mb[cb[0]])?.is_some() {
                used[k] = true;
                found = true;
                break;
            }
        }
        if !found {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::builtins::*;
    use crate::field::FiniteField;
    use crate::module::Side;
    use std::sync::Arc;

    #[test]
    fn simple_module_has_one_summand() {
        let f = FiniteField::prime(2).unwrap();
        let s = FiniteModule::regular(Arc::new(truncated_power(&f, 1)), Side::Right);
        let d = decompose_indecomposable(&s, 1).unwrap();
        assert_eq!(d.summands.len(), 1);
    }

    #[test]
    fn two_nonisomorphic_summands() {
        let f = FiniteField::prime(2).unwrap();
        let a = Arc::new(truncated_power(&f, 2));
        let big = FiniteModule::regular(a.clone(), Side::Right);
        let rad = big.radical().unwrap();
        let (simple, _) = big.quotient(&rad).unwrap();
        let m = FiniteModule::direct_sum(&[simple, big]).unwrap();
        let d = decompose_indecomposable(&m, 5).unwrap();
        assert_eq!(d.summands.len(), 2);
        assert_eq!(d.classes.len(), 2);
        let mut dims: Vec<usize> = d.summands.iter().map(|s| s.basis.len()).collect();
        dims.sort();
        assert_eq!(dims, vec![1, 2]);
    }

    #[test]
    fn square_of_simple_is_one_class() {
        let f = FiniteField::prime(3).unwrap();
        let a = Arc::new(truncated_power(&f, 1));
        let m = FiniteModule::regular(a, Side::Right).power(2).unwrap();
        let d = decompose_indecomposable(&m, 2).unwrap();
        assert_eq!(d.summands.len(), 2);
        assert_eq!(d.classes, vec![vec![0, 1]]);
        assert_eq!(d.isomorphisms.len(), 1);
    }

    #[test]
    fn two_seeds_match() {
        let f = FiniteField::prime(2).unwrap();
        let a = Arc::new(upper_triangular(&f, 2));
        let m = FiniteModule::direct_sum(&[
            FiniteModule::regular(a.clone(), Side::Right),
            FiniteModule::regular(a.clone(), Side::Right),
        ])
        .unwrap();
        let d1 = decompose_indecomposable(&m, 1).unwrap();
        let d2 = decompose_indecomposable(&m, 99).unwrap();
        assert_eq!(d1.summands.len(), 4);
        assert!(decompositions_match(&m, &d1, &d2).unwrap());
    }
}
