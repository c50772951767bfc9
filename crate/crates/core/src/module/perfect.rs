//! Local T-nilpotency of families of indecomposable modules and perfect
//! decomposition verdicts.
//!
//! Within a family of modules with local endomorphism rings, the radical maps
//! `rad(M_i, M_j)` are all of `Hom` when `M_i ≇ M_j`, and `J(End M_i)·φ` for an
//! isomorphism `φ` otherwise. A family of bounded composition length `b` is
//! certified by Harada–Sai: the span `W_k` of all `k`-fold composites of radical
//! maps vanishes by `k = 2^b − 1`.

use serde::{Deserialize, Serialize};

use super::decompose::{decompose_indecomposable, indecomposable_isomorphism, local_witness, DecompositionCertificate, LocalWitness};
use super::{endo_algebra, hom_space, FiniteModule};
use crate::algebra::wedderburn::wedderburn_of_semisimple;
use crate::error::{Error, Result};
use crate::field::Elem;
use crate::linalg::{self, Matrix, Subspace};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FamilyKind {
    /// The family is exactly the listed modules.
    Finite,
    /// The listed modules are the first terms of an infinite family.
    Truncated,
}

#[derive(Clone, Debug)]
pub struct ModuleFamily {
    pub kind: FamilyKind,
    pub labels: Vec<String>,
    pub members: Vec<FiniteModule>,
    /// Designated maps `(from, to, X)`, tried first when looking for witnesses.
    pub maps: Vec<(usize, usize, Matrix)>,
}

impl ModuleFamily {
    pub fn finite(members: Vec<FiniteModule>) -> Self {
        let labels = (0..members.len()).map(|i| format!("M{i}")).collect();
        ModuleFamily { kind: FamilyKind::Finite, labels, members, maps: Vec::new() }
    }
}

/// Composition length, summed over the Loewy layers `H^i M / H^{i+1} M`.
pub fn composition_length(m: &FiniteModule, seed: u64) -> Result<usize> {
    let f = m.field();
    let h = crate::algebra::radical::radical(&m.algebra)?.space;
    let mut layer_top = Subspace::full(m.dim);
    let mut total = 0;
    while !layer_top.is_zero() {
        let sub = m.submodule(&layer_top)?;
        let rad_sub = sub.radical_with(&h);
        let (layer, _) = sub.quotient(&rad_sub)?;
        let e = endo_algebra(&layer)?;
        let w = wedderburn_of_semisimple(&e.algebra, seed)?;
        total += w.components.iter().map(|c| c.n).sum::<usize>();
        let next: Vec<Vec<Elem>> = rad_sub.vectors().iter().map(|c| layer_top.from_coords(f, c)).collect();
        let next = Subspace::span(f, m.dim, &next);
        if next.dim() >= layer_top.dim() {
            return Err(Error::Inconsistent("radical layer did not shrink".into()));
        }
        layer_top = next;
    }
    Ok(total)
}

/// Bases of `rad(M_i, M_j)` for a family of modules with local endomorphism rings.
#[derive(Clone, Debug)]
pub struct RadicalMaps {
    pub local: Vec<LocalWitness>,
    /// Isomorphism class of each member.
    pub class: Vec<usize>,
    pub basis: Vec<Vec<Vec<Matrix>>>,
}

impl RadicalMaps {
    pub fn of(members: &[FiniteModule], seed: u64) -> Result<Self> {
        let n = members.len();
        let mut local = Vec::with_capacity(n);
        for (i, m) in members.iter().enumerate() {
            local.push(local_witness(m, seed)?.ok_or_else(|| {
                Error::Hypothesis(format!("family member {i} does not have a local endomorphism ring"))
            })?);
        }
        let mut class = vec![usize::MAX; n];
        let mut iso: Vec<Option<Matrix>> = vec![None; n];
        let mut reps: Vec<usize> = Vec::new();
        for i in 0..n {
            for (c, &r) in reps.iter().enumerate() {
                if let Some(phi) = indecomposable_isomorphism(&members[r], &members[i])? {
                    class[i] = c;
                    iso[i] = Some(phi);
                    break;
                }
            }
            if class[i] == usize::MAX {
                class[i] = reps.len();
                reps.push(i);
                iso[i] = Some(Matrix::identity(members[i].dim));
            }
        }
        let mut basis = vec![vec![Vec::new(); n]; n];
        for i in 0..n {
            let f = members[i].field();
            let e = endo_algebra(&members[i])?;
            let j_end: Vec<Matrix> = e.radical()?.space.vectors().iter().map(|v| e.matrix_of(v)).collect();
            for j in 0..n {
                basis[i][j] = if class[i] != class[j] {
                    hom_space(&members[i], &members[j])?
                } else {
                    // φ_i^{-1}: M_i → rep, then φ_j: rep → M_j
                    let inv_i = linalg::inverse(f, iso[i].as_ref().unwrap())
                        .ok_or_else(|| Error::Inconsistent("class isomorphism is not invertible".into()))?;
                    let phi = inv_i.mul(f, iso[j].as_ref().unwrap());
                    j_end.iter().map(|x| x.mul(f, &phi)).collect()
                };
            }
        }
        Ok(RadicalMaps { local, class, basis })
    }

    pub fn len(&self) -> usize {
        self.class.len()
    }

    pub fn is_empty(&self) -> bool {
        self.class.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HaradaSaiCertificate {
    /// Largest composition length in the family.
    pub length_bound: usize,
    /// `2^b − 1`.
    pub composition_bound: usize,
    /// First `k` with every `k`-fold composite of radical maps equal to zero.
    pub vanishes_at: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NonisomorphismChain {
    /// `(from, to, X)` in order of application.
    pub maps: Vec<(usize, usize, Matrix)>,
    pub element: Vec<Elem>,
    /// Images of `element` after each map, all nonzero.
    pub images: Vec<Vec<Elem>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum TNilpotency {
    Certificate(HaradaSaiCertificate),
    Witness(NonisomorphismChain),
    Unknown { depth: usize },
}

fn harada_sai(members: &[FiniteModule], rad: &RadicalMaps, seed: u64) -> Result<HaradaSaiCertificate> {
    let n = members.len();
    let mut b = 0;
    for m in members {
        b = b.max(composition_length(m, seed)?);
    }
    let bound = (1usize << b.min(62)) - 1;
    let span = |i: usize, j: usize, ms: &[Matrix]| {
        let f = members[i].field();
        let vs: Vec<Vec<Elem>> = ms.iter().map(|x| x.data.clone()).collect();
        Subspace::span(f, members[i].dim * members[j].dim, &vs)
    };
    let mut w: Vec<Vec<Subspace>> = (0..n).map(|i| (0..n).map(|j| span(i, j, &rad.basis[i][j])).collect()).collect();
    let mut k = 1;
    while w.iter().flatten().any(|s| !s.is_zero()) {
        if k >= bound {
            return Err(Error::Inconsistent(format!(
                "composites of {bound} radical maps do not vanish at composition length {b}"
            )));
        }
        let mut next = vec![vec![Subspace::zero(0); n]; n];
        for i in 0..n {
            let f = members[i].field();
            for j in 0..n {
                let mut prods = Vec::new();
                for l in 0..n {
                    for hv in w[i][l].vectors() {
                        let h = Matrix { rows: members[i].dim, cols: members[l].dim, data: hv };
                        for g in &rad.basis[l][j] {
                            prods.push(h.mul(f, g));
                        }
                    }
                }
                next[i][j] = span(i, j, &prods);
            }
        }
        w = next;
        k += 1;
    }
    Ok(HaradaSaiCertificate { length_bound: b, composition_bound: bound, vanishes_at: k })
}

/// Depth-first search for `depth` radical maps whose composite keeps some
/// basis element nonzero. Designated maps are tried before basis maps.
fn find_witness(family: &ModuleFamily, rad: &RadicalMaps, depth: usize) -> Option<NonisomorphismChain> {
    let members = &family.members;
    let n = members.len();
    let designated: Vec<Vec<(usize, Matrix)>> = (0..n)
        .map(|i| {
            family
                .maps
                .iter()
                .filter(|(a, b, x)| *a == i && is_radical_map(members, rad, *a, *b, x))
                .map(|(_, b, x)| (*b, x.clone()))
                .collect()
        })
        .collect();
    let mut budget = 100_000usize;
    fn dfs(
        members: &[FiniteModule],
        rad: &RadicalMaps,
        designated: &[Vec<(usize, Matrix)>],
        at: usize,
        v: &[Elem],
        depth: usize,
        path: &mut Vec<(usize, usize, Matrix)>,
        images: &mut Vec<Vec<Elem>>,
        budget: &mut usize,
    ) -> bool {
        if path.len() == depth {
            return true;
        }
        if *budget == 0 {
            return false;
        }
        *budget -= 1;
        let f = members[at].field();
        let mut options: Vec<(usize, Matrix)> = designated[at].clone();
        for j in 0..members.len() {
            options.extend(rad.basis[at][j].iter().map(|x| (j, x.clone())));
        }
        for (j, x) in options {
            let w = x.vec_mul(f, v);
            if linalg::is_zero_vec(&w) {
                continue;
            }
            path.push((at, j, x));
            images.push(w.clone());
            if dfs(members, rad, designated, j, &w, depth, path, images, budget) {
                return true;
            }
            path.pop();
            images.pop();
        }
        false
    }
    for i in 0..n {
        for s in 0..members[i].dim {
            let v = linalg::unit_vec(members[i].dim, s);
            let mut path = Vec::new();
            let mut images = Vec::new();
            if dfs(members, rad, &designated, i, &v, depth, &mut path, &mut images, &mut budget) {
                return Some(NonisomorphismChain { maps: path, element: v, images });
            }
        }
    }
    None
}

fn is_radical_map(members: &[FiniteModule], rad: &RadicalMaps, i: usize, j: usize, x: &Matrix) -> bool {
    let f = members[i].field();
    let vs: Vec<Vec<Elem>> = rad.basis[i][j].iter().map(|m| m.data.clone()).collect();
    x.rows == members[i].dim
        && x.cols == members[j].dim
        && Subspace::span(f, x.data.len(), &vs).contains(f, &x.data)
}

impl NonisomorphismChain {
    /// Recomputes the images and checks every map is a radical map.
    pub fn verify(&self, family: &ModuleFamily, rad: &RadicalMaps) -> Result<()> {
        let mut v = self.element.clone();
        let mut at = self.maps.first().map_or(0, |m| m.0);
        for (k, (i, j, x)) in self.maps.iter().enumerate() {
            if *i != at || !is_radical_map(&family.members, rad, *i, *j, x) {
                return Err(Error::Inconsistent(format!("map {k} of the chain is not a radical map in sequence")));
            }
            v = x.vec_mul(family.members[*i].field(), &v);
            if linalg::is_zero_vec(&v) || v != self.images[k] {
                return Err(Error::Inconsistent(format!("image {k} of the chain is zero or mismatched")));
            }
            at = *j;
        }
        Ok(())
    }
}

pub fn local_t_nilpotency_check(family: &ModuleFamily, depth: usize, seed: u64) -> Result<TNilpotency> {
    if depth == 0 {
        return Err(Error::Hypothesis("depth must be at least 1".into()));
    }
    let rad = RadicalMaps::of(&family.members, seed)?;
    match family.kind {
        FamilyKind::Finite => Ok(TNilpotency::Certificate(harada_sai(&family.members, &rad, seed)?)),
        FamilyKind::Truncated => match find_witness(family, &rad, depth) {
            Some(w) => {
                w.verify(family, &rad)?;
                Ok(TNilpotency::Witness(w))
            }
            None => Ok(TNilpotency::Unknown { depth }),
        },
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PerfectCertificate {
    pub decomposition: Option<DecompositionCertificate>,
    pub local: Vec<LocalWitness>,
    pub t_nilpotency: Option<HaradaSaiCertificate>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum PerfectVerdict {
    Perfect(PerfectCertificate),
    NotPerfect(NonisomorphismChain),
    Unknown { depth: usize },
}

impl PerfectVerdict {
    pub fn name(&self) -> &'static str {
        match self {
            PerfectVerdict::Perfect(_) => "PERFECT",
            PerfectVerdict::NotPerfect(_) => "NOT_PERFECT",
            PerfectVerdict::Unknown { .. } => "UNKNOWN",
        }
    }
}

/// Verdict for a single finite module: decompose, then certify the summands.
pub fn perfect_decomposition_verdict_module(m: &FiniteModule, depth: usize, seed: u64) -> Result<PerfectVerdict> {
    let d = decompose_indecomposable(m, seed)?;
    let summands = d.summand_modules(m)?;
    let fam = ModuleFamily::finite(summands);
    match perfect_decomposition_verdict(&fam, depth, seed)? {
        PerfectVerdict::Perfect(mut c) => {
            c.decomposition = Some(d);
            Ok(PerfectVerdict::Perfect(c))
        }
        other => Err(Error::Inconsistent(format!("a finite module received the verdict {}", other.name()))),
    }
}

pub fn perfect_decomposition_verdict(family: &ModuleFamily, depth: usize, seed: u64) -> Result<PerfectVerdict> {
    if family.members.is_empty() {
        return Ok(PerfectVerdict::Perfect(PerfectCertificate { decomposition: None, local: vec![], t_nilpotency: None }));
    }
    let rad = RadicalMaps::of(&family.members, seed)?;
    Ok(match local_t_nilpotency_check(family, depth, seed)? {
        TNilpotency::Certificate(c) => {
            PerfectVerdict::Perfect(PerfectCertificate { decomposition: None, local: rad.local, t_nilpotency: Some(c) })
        }
        TNilpotency::Witness(w) => PerfectVerdict::NotPerfect(w),
        TNilpotency::Unknown { depth } => PerfectVerdict::Unknown { depth },
    })
}

/// `{F_p[x]/(x^n)}_{1 ≤ n ≤ top}` as right modules over `F_p[x]/(x^top)`, with
/// the maps `1 ↦ x` from each member to the next.
pub fn truncated_chain_family(p: u32, top: usize) -> Result<ModuleFamily> {
    use crate::algebra::builtins::truncated_power;
    use crate::field::FiniteField;
    use std::sync::Arc;
    let f = FiniteField::prime(p)?;
    let a = Arc::new(truncated_power(&f, top));
    let regular = FiniteModule::regular(a, super::Side::Right);
    let mut members = Vec::new();
    for n in 1..=top {
        let ideal = Subspace::span(&f, top, &(n..top).map(|i| linalg::unit_vec(top, i)).collect::<Vec<_>>());
        members.push(regular.quotient(&ideal)?.0);
    }
    let mut maps = Vec::new();
    for n in 1..top {
        let mut x = Matrix::zeros(n, n + 1);
        for i in 0..n {
            x.set(i, i + 1, 1);
        }
        maps.push((n - 1, n, x));
    }
    let labels = (1..=top).map(|n| format!("F_{p}[x]/(x^{n})")).collect();
    Ok(ModuleFamily { kind: FamilyKind::Truncated, labels, members, maps })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::builtins::*;
    use crate::field::FiniteField;
    use crate::module::Side;
    use std::sync::Arc;

    #[test]
    fn simple_family_bound_one() {
        let f = FiniteField::prime(2).unwrap();
        let s = FiniteModule::regular(Arc::new(truncated_power(&f, 1)), Side::Right);
        let r = local_t_nilpotency_check(&ModuleFamily::finite(vec![s]), 1, 0).unwrap();
        match r {
            TNilpotency::Certificate(c) => {
                assert_eq!(c.length_bound, 1);
                assert_eq!(c.composition_bound, 1);
                assert_eq!(c.vanishes_at, 1);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn dual_numbers_bound_three() {
        let f = FiniteField::prime(2).unwrap();
        let m = FiniteModule::regular(Arc::new(truncated_power(&f, 2)), Side::Right);
        match local_t_nilpotency_check(&ModuleFamily::finite(vec![m]), 3, 0).unwrap() {
            TNilpotency::Certificate(c) => {
                assert_eq!(c.composition_bound, 3);
                assert!(c.vanishes_at <= 3);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn chain_family_is_not_perfect() {
        let fam = truncated_chain_family(2, 6).unwrap();
        match perfect_decomposition_verdict(&fam, 5, 0).unwrap() {
            PerfectVerdict::NotPerfect(w) => {
                assert_eq!(w.maps.len(), 5);
                assert!(w.images.iter().all(|v| !linalg::is_zero_vec(v)));
            }
            other => panic!("{}", other.name()),
        }
    }

    #[test]
    fn composition_lengths() {
        let f = FiniteField::prime(2).unwrap();
        let m = FiniteModule::regular(Arc::new(truncated_power(&f, 3)), Side::Right);
        assert_eq!(composition_length(&m, 0).unwrap(), 3);
        let t = FiniteModule::regular(Arc::new(matrix_algebra(&f, 2)), Side::Right);
        assert_eq!(composition_length(&t, 0).unwrap(), 2);
    }

    #[test]
    fn empty_family_is_perfect() {
        let fam = ModuleFamily::finite(vec![]);
        assert_eq!(perfect_decomposition_verdict(&fam, 1, 0).unwrap().name(), "PERFECT");
    }

    #[test]
    fn finite_module_is_perfect() {
        let f = FiniteField::prime(2).unwrap();
        let m = FiniteModule::regular(Arc::new(upper_triangular(&f, 2)), Side::Right);
        assert_eq!(perfect_decomposition_verdict_module(&m, 3, 0).unwrap().name(), "PERFECT");
    }
}
