//! Descending chains of cyclic submodules.

use std::collections::HashMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::FiniteModule;
use crate::error::{Error, Result};
use crate::field::Elem;
use crate::linalg::{self, Subspace};

/// Modules with at most this many elements are searched exhaustively.
pub const EXHAUSTIVE_LIMIT: usize = 4096;

/// Random generators tried per node in the non-exhaustive search.
const RANDOM_CANDIDATES: usize = 8;
const NODE_BUDGET: usize = 20_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubmoduleChain {
    /// Generator of each entry, largest entry first.
    pub generators: Vec<Vec<Elem>>,
    /// Echelon basis of each entry.
    pub bases: Vec<Vec<Vec<Elem>>>,
    /// `strict[i]`: entry `i` strictly contains entry `i + 1` (the last entry against 0).
    pub strict: Vec<bool>,
}

impl SubmoduleChain {
    pub fn from_generators(m: &FiniteModule, generators: Vec<Vec<Elem>>) -> Self {
        let subs: Vec<Subspace> = generators.iter().map(|g| m.cyclic_submodule(g)).collect();
        let f = m.field();
        let strict = (0..subs.len())
            .map(|i| match subs.get(i + 1) {
                Some(next) => subs[i].contains_space(f, next) && subs[i].dim() > next.dim(),
                None => !subs[i].is_zero(),
            })
            .collect();
        SubmoduleChain { generators, bases: subs.iter().map(|s| s.vectors()).collect(), strict }
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn dims(&self) -> Vec<usize> {
        self.bases.iter().map(|b| b.len()).collect()
    }

    /// Recomputes every entry from its generator and checks strict descent.
    pub fn verify(&self, m: &FiniteModule) -> Result<()> {
        let again = Self::from_generators(m, self.generators.clone());
        if again.bases != self.bases {
            return Err(Error::Inconsistent("chain entry differs from the submodule its generator spans".into()));
        }
        if let Some(i) = again.strict.iter().position(|s| !s) {
            return Err(Error::Inconsistent(format!("chain is not strictly descending at entry {i}")));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum CoperfectVerdict {
    /// Every descending chain of cyclic submodules terminates; the longest found is recorded.
    Terminates { max_chain_length: usize, longest: SubmoduleChain, exhaustive: bool, depth: usize },
    /// A strictly descending chain of the requested depth.
    Chain { chain: SubmoduleChain, depth: usize },
}

/// All cyclic submodules, deduplicated, with one generator each.
fn all_cyclic(m: &FiniteModule, limit: usize) -> Option<Vec<(Subspace, Vec<Elem>)>> {
    let elems = m.elements(limit)?;
    let mut seen: HashMap<Subspace, Vec<Elem>> = HashMap::new();
    let mut order = Vec::new();
    for v in elems.into_iter().skip(1) {
        let c = m.cyclic_submodule(&v);
        if !seen.contains_key(&c) {
            seen.insert(c.clone(), v);
            order.push(c);
        }
    }
    Some(order.into_iter().map(|c| {
        let g = seen[&c].clone();
        (c, g)
    }).collect())
}

/// Longest strictly descending chain of nonzero cyclic submodules, by
/// exhaustive enumeration. `None` if `|M|` exceeds `limit`.
pub fn longest_chain_exhaustive(m: &FiniteModule, limit: usize) -> Option<SubmoduleChain> {
    let f = m.field();
    let mut cyc = all_cyclic(m, limit)?;
    cyc.sort_by(|a, b| a.0.dim().cmp(&b.0.dim()).then_with(|| a.1.cmp(&b.1)));
    // best[i]: longest chain starting at cyc[i]; next[i] its successor
    let mut best = vec![1usize; cyc.len()];
    let mut next = vec![usize::MAX; cyc.len()];
    for i in 0..cyc.len() {
        for j in 0..i {
            if cyc[j].0.dim() < cyc[i].0.dim() && cyc[i].0.contains_space(f, &cyc[j].0) && best[j] + 1 > best[i] {
                best[i] = best[j] + 1;
                next[i] = j;
            }
        }
    }
    let start = (0..cyc.len()).max_by(|&a, &b| best[a].cmp(&best[b]).then_with(|| b.cmp(&a)));
    let mut gens = Vec::new();
    let mut cur = start;
    while let Some(i) = cur {
        gens.push(cyc[i].1.clone());
        cur = (next[i] != usize::MAX).then_some(next[i]);
    }
    Some(SubmoduleChain::from_generators(m, gens))
}

struct Search<'a> {
    m: &'a FiniteModule,
    rng: ChaCha8Rng,
    memo: HashMap<Subspace, (usize, Option<Vec<Elem>>)>,
    nodes: usize,
}

impl Search<'_> {
    /// Longest chain strictly below the cyclic module `c`; returns its length
    /// and the generator of its first entry.
    fn below(&mut self, c: &Subspace) -> (usize, Option<Vec<Elem>>) {
        if let Some(r) = self.memo.get(c) {
            return r.clone();
        }
        self.nodes += 1;
        let f = self.m.field().clone();
        let mut cands: Vec<Vec<Elem>> = Vec::new();
        for b in c.vectors() {
            cands.push(b.clone());
            for a in &self.m.action {
                cands.push(a.vec_mul(&f, &b));
            }
        }
        for _ in 0..RANDOM_CANDIDATES {
            let coeffs: Vec<Elem> = (0..c.dim()).map(|_| rand::Rng::gen_range(&mut self.rng, 0..f.q())).collect();
            cands.push(c.from_coords(&f, &coeffs));
        }
        let mut best = (0usize, None);
        let mut tried: Vec<Subspace> = Vec::new();
        for g in cands {
            if linalg::is_zero_vec(&g) {
                continue;
            }
            let s = self.m.cyclic_submodule(&g);
            if s.dim() >= c.dim() || tried.contains(&s) {
                continue;
            }
            tried.push(s.clone());
            let len = if self.nodes < NODE_BUDGET { self.below(&s).0 + 1 } else { 1 };
            if len > best.0 {
                best = (len, Some(g));
            }
        }
        self.memo.insert(c.clone(), best.clone());
        best
    }
}

/// Longest chain found by a seeded search starting from `start` (or from the
/// basis vectors and `seeds` of `M`). Lower bound only.
pub fn longest_chain_search(m: &FiniteModule, starts: &[Vec<Elem>], seed: u64) -> SubmoduleChain {
    let mut s = Search { m, rng: ChaCha8Rng::seed_from_u64(seed), memo: HashMap::new(), nodes: 0 };
    let mut roots: Vec<Vec<Elem>> = starts.to_vec();
    roots.extend((0..m.dim).map(|i| linalg::unit_vec(m.dim, i)));
    let mut best: Vec<Vec<Elem>> = Vec::new();
    for r in roots {
        if linalg::is_zero_vec(&r) {
            continue;
        }
        let c = m.cyclic_submodule(&r);
        let (len, _) = s.below(&c);
        if len + 1 > best.len() {
            let mut gens = vec![r];
            let mut cur = c;
            while let Some((_, Some(g))) = s.memo.get(&cur).cloned() {
                cur = m.cyclic_submodule(&g);
                gens.push(g);
            }
            best = gens;
        }
    }
    SubmoduleChain::from_generators(m, best)
}

/// Searches for a strictly descending chain of `depth` nonzero cyclic
/// submodules. A finite module always terminates; the longest chain found is
/// returned either way.
pub fn coperfect_witness_search(m: &FiniteModule, depth: usize, seed: u64) -> Result<CoperfectVerdict> {
    if depth == 0 {
        return Err(Error::Hypothesis("depth must be at least 1".into()));
    }
    let (longest, exhaustive) = match longest_chain_exhaustive(m, EXHAUSTIVE_LIMIT) {
        Some(c) => (c, true),
        None => (longest_chain_search(m, &[], seed), false),
    };
    longest.verify(m)?;
    if longest.len() > m.dim {
        return Err(Error::Inconsistent("cyclic chain longer than the dimension".into()));
    }
    Ok(CoperfectVerdict::Terminates { max_chain_length: longest.len(), longest, exhaustive, depth })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::builtins::*;
    use crate::field::FiniteField;
    use crate::module::Side;
    use std::sync::Arc;

    fn max_len(v: &CoperfectVerdict) -> usize {
        match v {
            CoperfectVerdict::Terminates { max_chain_length, .. } => *max_chain_length,
            CoperfectVerdict::Chain { chain, .. } => chain.len(),
        }
    }

    #[test]
    fn simple_module() {
        let f = FiniteField::prime(2).unwrap();
        let m = FiniteModule::regular(Arc::new(truncated_power(&f, 1)), Side::Right);
        assert_eq!(max_len(&coperfect_witness_search(&m, 3, 0).unwrap()), 1);
    }

    #[test]
    fn truncated_quartic() {
        let f = FiniteField::prime(2).unwrap();
        let m = FiniteModule::regular(Arc::new(truncated_power(&f, 4)), Side::Right);
        let v = coperfect_witness_search(&m, 4, 0).unwrap();
        assert_eq!(max_len(&v), 4);
        if let CoperfectVerdict::Terminates { longest, .. } = v {
            assert_eq!(longest.dims(), vec![4, 3, 2, 1]);
        }
    }

    #[test]
    fn semisimple_square() {
        let f = FiniteField::prime(2).unwrap();
        let m = FiniteModule::regular(Arc::new(truncated_power(&f, 1)), Side::Right).power(2).unwrap();
        assert_eq!(max_len(&coperfect_witness_search(&m, 2, 0).unwrap()), 1);
    }

    #[test]
    fn search_matches_exhaustive_on_small_cases() {
        let f = FiniteField::prime(2).unwrap();
        let m = FiniteModule::regular(Arc::new(truncated_power(&f, 5)), Side::Right);
        let a = longest_chain_exhaustive(&m, 4096).unwrap();
        let b = longest_chain_search(&m, &[], 3);
        assert_eq!(a.len(), b.len());
        b.verify(&m).unwrap();
    }
}
