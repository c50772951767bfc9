//! Σ-coperfectness of `M` over `E = End_A(M)^op`: descending chains of cyclic
//! `E`-submodules of `M^k`, and the cross-check against perfect decompositions.

use serde::{Deserialize, Serialize};

use super::EndoTower;
use crate::error::{Error, Result};
use crate::field::{Elem, FiniteField};
use crate::linalg::{self, Matrix, Subspace};
use crate::module::chains::{longest_chain_exhaustive, EXHAUSTIVE_LIMIT};
use crate::module::perfect::{composition_length, perfect_decomposition_verdict, FamilyKind, ModuleFamily, PerfectVerdict};
use crate::module::{hom_space, FiniteModule};

/// `v·E` in `M^k` for `E` given by basis matrices acting diagonally.
pub fn cyclic_span(f: &FiniteField, v: &[Elem], basis: &[Matrix]) -> Subspace {
    let d = basis.first().map_or(v.len(), |b| b.rows);
    let k = v.len() / d.max(1);
    let vs: Vec<Vec<Elem>> = basis
        .iter()
        .map(|x| (0..k).flat_map(|c| x.vec_mul(f, &v[c * d..(c + 1) * d])).collect())
        .collect();
    Subspace::span(f, v.len(), &vs)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SigmaChain {
    pub copies: usize,
    pub generators: Vec<Vec<Elem>>,
    pub dims: Vec<usize>,
}

impl SigmaChain {
    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    /// Each generator lies in the previous cyclic submodule but not in the next.
    pub fn verify(&self, f: &FiniteField, basis: &[Matrix]) -> Result<()> {
        let spans: Vec<Subspace> = self.generators.iter().map(|g| cyclic_span(f, g, basis)).collect();
        if spans.iter().map(|s| s.dim()).collect::<Vec<_>>() != self.dims {
            return Err(Error::Inconsistent("chain dimensions do not match".into()));
        }
        for (k, s) in spans.iter().enumerate() {
            if s.is_zero() {
                return Err(Error::Inconsistent(format!("chain entry {k} is zero")));
            }
            if k + 1 < spans.len() {
                if !s.contains(f, &self.generators[k + 1]) {
                    return Err(Error::Inconsistent(format!("generator {} is not in entry {k}", k + 1)));
                }
                if spans[k + 1].contains(f, &self.generators[k]) {
                    return Err(Error::Inconsistent(format!("chain is not strict at entry {k}")));
                }
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CopyBound {
    pub copies: usize,
    /// Exact longest chain, when `M^k` was enumerated.
    pub max_chain_length: Option<usize>,
    /// `k · length_E(M)`.
    pub length_bound: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum SigmaCoperfect {
    Certificate { bounds: Vec<CopyBound>, max_chain_length: usize, depth: usize },
    Witness { chain: SigmaChain, refined: Option<SigmaChain>, depth: usize },
    Unknown { depth: usize },
}

impl SigmaCoperfect {
    pub fn name(&self) -> &'static str {
        match self {
            SigmaCoperfect::Certificate { .. } => "CERTIFICATE",
            SigmaCoperfect::Witness { .. } => "WITNESS",
            SigmaCoperfect::Unknown { .. } => "UNKNOWN",
        }
    }
}

fn offsets(members: &[FiniteModule]) -> Vec<usize> {
    let mut off = vec![0];
    for m in members {
        off.push(off.last().unwrap() + m.dim);
    }
    off
}

/// Generators along the family maps, starting from the first basis vector of
/// member 0, placed in `⊕ members`.
fn shift_generators(family: &ModuleFamily, count: usize) -> Option<Vec<Vec<Elem>>> {
    let members = &family.members[..count];
    let f = members[0].field();
    let off = offsets(members);
    let total = *off.last().unwrap();
    let mut local = linalg::unit_vec(members[0].dim, 0);
    let mut gens = Vec::new();
    for k in 0..count {
        if k > 0 {
            let (_, _, x) = family.maps.iter().find(|(i, j, _)| *i == k - 1 && *j == k)?;
            local = x.vec_mul(f, &local);
        }
        let mut g = vec![0; total];
        g[off[k]..off[k + 1]].copy_from_slice(&local);
        gens.push(g);
    }
    Some(gens)
}

fn chain_from(f: &FiniteField, gens: Vec<Vec<Elem>>, basis: &[Matrix]) -> SigmaChain {
    let dims = gens.iter().map(|g| cyclic_span(f, g, basis).dim()).collect();
    SigmaChain { copies: 1, generators: gens, dims }
}

/// For truncated families, a chain along the family maps of length `≥ depth`,
/// re-verified in `refined` (the next truncation) when given. For finite
/// families, exhaustion of `M^k`, `k ≤ depth`, or the composition-length bound.
pub fn sigma_coperfect_check(t: &EndoTower, refined: Option<&ModuleFamily>, depth: usize, seed: u64) -> Result<SigmaCoperfect> {
    if depth == 0 {
        return Err(Error::Hypothesis("depth must be at least 1".into()));
    }
    let e = t.top();
    let f = e.algebra.field().clone();
    let n = t.levels.len();
    if t.family.kind == FamilyKind::Truncated {
        let Some(gens) = shift_generators(&t.family, n) else {
            return Ok(SigmaCoperfect::Unknown { depth });
        };
        let chain = chain_from(&f, gens, &e.basis);
        if chain.len() < depth || chain.verify(&f, &e.basis).is_err() {
            return Ok(SigmaCoperfect::Unknown { depth });
        }
        let refined = match refined {
            Some(r) if r.members.len() > n => {
                if r.members[..n].iter().zip(&t.family.members).any(|(a, b)| a.dim != b.dim) {
                    return Err(Error::Hypothesis("the refinement does not extend the family".into()));
                }
                let big = FiniteModule::direct_sum(&r.members[..n + 1])?;
                let basis = hom_space(&big, &big)?;
                let Some(gens) = shift_generators(r, n + 1) else {
                    return Err(Error::Hypothesis("the refinement lacks the family maps".into()));
                };
                // the old generators, padded by the new summand, must reappear
                let total = big.dim;
                for (old, new) in chain.generators.iter().zip(&gens) {
                    let mut padded = old.clone();
                    padded.resize(total, 0);
                    if &padded != new {
                        return Err(Error::Inconsistent("refined generators differ from the truncated ones".into()));
                    }
                }
                let rc = chain_from(&f, gens, &basis);
                rc.verify(&f, &basis)?;
                Some(rc)
            }
            _ => None,
        };
        return Ok(SigmaCoperfect::Witness { chain, refined, depth });
    }
    let m = e.module();
    let len = composition_length(&m, seed)?;
    let mut bounds = Vec::new();
    for k in 1..=depth {
        let mk = m.power(k)?;
        let exact = longest_chain_exhaustive(&mk, EXHAUSTIVE_LIMIT).map(|c| c.len());
        if let Some(l) = exact {
            if l > k * len {
                return Err(Error::Inconsistent(format!("a chain in M^{k} is longer than its composition length")));
            }
        }
        bounds.push(CopyBound { copies: k, max_chain_length: exact, length_bound: k * len });
    }
    let max_chain_length = bounds.iter().map(|b| b.max_chain_length.unwrap_or(b.length_bound)).max().unwrap_or(0);
    Ok(SigmaCoperfect::Certificate { bounds, max_chain_length, depth })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BridgeCheck {
    pub implication: String,
    /// `holds`, `violated` or `not applicable`.
    pub status: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BridgeReport {
    pub components: Vec<String>,
    pub kind: FamilyKind,
    pub depth: usize,
    pub seed: u64,
    pub perfect: PerfectVerdict,
    pub coperfect: SigmaCoperfect,
    /// `J(E_n) = 0` per level, when every component is semisimple.
    pub semisimple_levels: Option<Vec<bool>>,
    pub checks: Vec<BridgeCheck>,
    pub consistent: bool,
}

fn check(implication: &str, applies: bool, holds: bool) -> BridgeCheck {
    let status = match (applies, holds) {
        (false, _) => "not applicable",
        (true, true) => "holds",
        (true, false) => "violated",
    };
    BridgeCheck { implication: implication.to_string(), status: status.to_string() }
}

/// Runs both pipelines and checks the proven implications between them. A
/// violation is an internal inconsistency.
pub fn perfectness_bridge(t: &EndoTower, refined: Option<&ModuleFamily>, depth: usize, seed: u64) -> Result<BridgeReport> {
    let n = t.levels.len();
    let family = ModuleFamily {
        kind: t.family.kind,
        labels: t.family.labels[..n].to_vec(),
        members: t.family.members[..n].to_vec(),
        maps: t.family.maps.iter().filter(|(i, j, _)| *i < n && *j < n).cloned().collect(),
    };
    let (perfect, coperfect) = std::thread::scope(|s| {
        let a = s.spawn(|| perfect_decomposition_verdict(&family, depth, seed));
        let b = s.spawn(|| sigma_coperfect_check(t, refined, depth, seed));
        (a.join().expect("perfect pipeline"), b.join().expect("coperfect pipeline"))
    });
    let (perfect, coperfect) = (perfect?, coperfect?);
    let all_semisimple = family.members.iter().map(|m| m.is_semisimple()).collect::<Result<Vec<_>>>()?.into_iter().all(|b| b);
    let semisimple_levels = if all_semisimple {
        Some(t.levels.iter().map(|e| e.radical().map(|r| r.space.is_zero())).collect::<Result<Vec<_>>>()?)
    } else {
        None
    };
    let is_perfect = matches!(perfect, PerfectVerdict::Perfect(_));
    let not_perfect = matches!(perfect, PerfectVerdict::NotPerfect(_));
    let certificate = matches!(coperfect, SigmaCoperfect::Certificate { .. });
    let witness = matches!(coperfect, SigmaCoperfect::Witness { .. });
    let checks = vec![
        check("perfect decomposition ⇒ endo-Σ-coperfect (no descending witness)", is_perfect, !witness),
        check("not perfect, countably generated ⇒ not endo-Σ-coperfect (no certificate)", not_perfect, !certificate),
        check("endo-Σ-coperfect, countably generated ⇒ perfect decomposition", certificate, !not_perfect),
        check(
            "semisimple components ⇒ perfect and semisimple endomorphism levels",
            all_semisimple,
            !not_perfect && semisimple_levels.as_ref().is_some_and(|v| v.iter().all(|&b| b)),
        ),
    ];
    let consistent = checks.iter().all(|c| c.status != "violated");
    let report = BridgeReport {
        components: family.labels.clone(),
        kind: family.kind,
        depth,
        seed,
        perfect,
        coperfect,
        semisimple_levels,
        checks,
        consistent,
    };
    if !consistent {
        let transcript = serde_json::to_string_pretty(&report).unwrap_or_default();
        return Err(Error::Inconsistent(format!("perfectness bridge violated:\n{transcript}")));
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::builtins::truncated_power;
    use crate::endo::endo_tower;
    use crate::module::perfect::truncated_chain_family;
    use crate::module::Side;
    use std::sync::Arc;

    fn simple() -> FiniteModule {
        let f = FiniteField::prime(2).unwrap();
        FiniteModule::regular(Arc::new(truncated_power(&f, 1)), Side::Right)
    }

    #[test]
    fn simple_module_chains_have_length_one() {
        let t = endo_tower(&ModuleFamily::finite(vec![simple()]), 1).unwrap();
        match sigma_coperfect_check(&t, None, 3, 0).unwrap() {
            SigmaCoperfect::Certificate { max_chain_length, .. } => assert_eq!(max_chain_length, 1),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn simple_cubed_is_bounded_by_three() {
        let s = simple();
        let m = FiniteModule::direct_sum(&[s.clone(), s.clone(), s]).unwrap();
        let t = endo_tower(&ModuleFamily::finite(vec![m]), 1).unwrap();
        match sigma_coperfect_check(&t, None, 3, 0).unwrap() {
            SigmaCoperfect::Certificate { max_chain_length, bounds, .. } => {
                assert_eq!(max_chain_length, 3);
                assert!(bounds.iter().all(|b| b.max_chain_length.is_some()));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn chain_family_witness_survives_refinement() {
        let fam = truncated_chain_family(2, 6).unwrap();
        let t = endo_tower(&fam, 6).unwrap();
        let refined = truncated_chain_family(2, 7).unwrap();
        match sigma_coperfect_check(&t, Some(&refined), 5, 0).unwrap() {
            SigmaCoperfect::Witness { chain, refined, .. } => {
                assert_eq!(chain.len(), 6);
                assert_eq!(refined.unwrap().len(), 7);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn bridge_examples() {
        let fam = truncated_chain_family(2, 6).unwrap();
        let t = endo_tower(&fam, 6).unwrap();
        let refined = truncated_chain_family(2, 7).unwrap();
        let r = perfectness_bridge(&t, Some(&refined), 5, 0).unwrap();
        assert!(r.consistent);
        assert_eq!(r.perfect.name(), "NOT_PERFECT");

        let s = simple();
        let t = endo_tower(&ModuleFamily::finite(vec![s.clone(), s.clone(), s]), 3).unwrap();
        let r = perfectness_bridge(&t, None, 2, 0).unwrap();
        assert_eq!(r.perfect.name(), "PERFECT");
        assert_eq!(r.semisimple_levels, Some(vec![true, true, true]));
    }
}
