//! Radical towers, T-nilpotency and strong closedness certificates, and the
//! semisimple and perfect classifiers.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{RingTower, TowerIntent};
use crate::algebra::ideal::{quotient, right_ideal, Quotient};
use crate::algebra::radical::radical;
use crate::algebra::wedderburn::wedderburn;
use crate::algebra::Algebra;
use crate::error::{Error, Result};
use crate::field::Elem;
use crate::linalg::{self, Subspace};
use crate::module::{radical_oracle as module_radical_oracle, FiniteModule, Side};

/// Levels with at most this many elements are cross-checked against the
/// intersection of maximal right ideals.
pub const ORACLE_LIMIT: usize = 1024;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TpCheck {
    pub level: usize,
    /// `"kernel"` for `ker(R_N → R_level)`, `"random"` for `kernel + x·R_N`.
    pub ideal_kind: String,
    pub ideal_dim: usize,
    /// `dim (I + H)` inside the top level.
    pub formula_dim: usize,
    pub agrees: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RadicalTower {
    pub levels: Vec<Subspace>,
    /// `π(H_{n+1}) = H_n` for each transition.
    pub surjective: Vec<bool>,
    /// Levels compared with the maximal-right-ideal oracle.
    pub oracle_checked: Vec<usize>,
    pub tp_checks: Vec<TpCheck>,
}

impl RadicalTower {
    pub fn dims(&self) -> Vec<usize> {
        self.levels.iter().map(|h| h.dim()).collect()
    }

    pub fn consistent(&self) -> bool {
        self.surjective.iter().all(|&b| b) && self.tp_checks.iter().all(|c| c.agrees)
    }
}

/// `tp(R/I)` through the module radical of `R/I`, pulled back to `R`.
fn top_via_module(a: &Arc<Algebra>, ideal: &Subspace, h: &Subspace) -> Result<Subspace> {
    let f = a.field();
    let regular = FiniteModule::regular(a.clone(), Side::Right);
    if ideal.is_full() {
        return Ok(ideal.clone());
    }
    let (m, proj) = regular.quotient(ideal)?;
    let rad = m.radical_with(h);
    Ok(Subspace::preimage(f, &proj, &rad))
}

pub fn topological_jacobson_radical(t: &RingTower, seed: u64) -> Result<RadicalTower> {
    let f = t.field().clone();
    let mut levels = Vec::with_capacity(t.depth());
    let mut oracle_checked = Vec::new();
    for (n, a) in t.levels.iter().enumerate() {
        let h = radical(a)?.space;
        let reg = FiniteModule::regular(Arc::new(a.clone()), Side::Right);
        if let Some(o) = module_radical_oracle(&reg, ORACLE_LIMIT) {
            if o != h {
                return Err(Error::Inconsistent(format!("level {n}: radical differs from the maximal-right-ideal oracle")));
            }
            oracle_checked.push(n);
        }
        levels.push(h);
    }
    let surjective: Vec<bool> = t
        .transitions
        .iter()
        .enumerate()
        .map(|(n, tr)| levels[n + 1].image(&f, tr) == levels[n])
        .collect();
    let top = t.top();
    let ra = Arc::new(t.levels[top].clone());
    let h_top = &levels[top];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut tp_checks = Vec::new();
    for n in 0..=top {
        let kernel = t.kernel(top, n);
        let x = ra.random_element(&mut rng);
        let random = kernel.sum(&f, &right_ideal(&ra, &[x]));
        for (kind, ideal) in [("kernel", kernel), ("random", random)] {
            let formula = ideal.sum(&f, h_top);
            let via_module = top_via_module(&ra, &ideal, h_top)?;
            let mut agrees = formula == via_module;
            if kind == "kernel" {
                // R/I ≅ R_n, whose top is R_n/H_n
                agrees &= Subspace::preimage(&f, &t.projection(top, n), &levels[n]) == formula;
            }
            tp_checks.push(TpCheck { level: n, ideal_kind: kind.into(), ideal_dim: ideal.dim(), formula_dim: formula.dim(), agrees });
        }
    }
    Ok(RadicalTower { levels, surjective, oracle_checked, tp_checks })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TNilpotencyCertificate {
    /// `k_n` with `H_n^{k_n} = 0`.
    pub indices: Vec<usize>,
    pub depth: usize,
}

/// Levelwise nilpotency indices; any product of `k_n` elements of `H` maps to 0 in `R_n`.
pub fn t_nilpotency_check(t: &RingTower, h: &[Subspace]) -> Result<TNilpotencyCertificate> {
    linalg::check_dims("ideal tower depth", h.len(), t.depth())?;
    let mut indices = Vec::new();
    for (n, (a, hn)) in t.levels.iter().zip(h).enumerate() {
        let rad = radical(a)?.space;
        if !rad.contains_space(a.field(), hn) {
            return Err(Error::Hypothesis(format!("level {n}: H is not inside the radical, so it is not topologically nil")));
        }
        indices.push(a.nilpotency_index(hn).ok_or_else(|| Error::Inconsistent(format!("level {n}: H is not nilpotent")))?);
    }
    Ok(TNilpotencyCertificate { indices, depth: t.depth() })
}

/// The tower `S_n = R_n/H_n` with induced transitions.
#[derive(Clone, Debug)]
pub struct QuotientTower {
    pub tower: RingTower,
    pub quotients: Vec<Quotient>,
}

pub fn quotient_tower(t: &RingTower, h: &[Subspace]) -> Result<QuotientTower> {
    let f = t.field();
    let mut quotients = Vec::new();
    for (a, hn) in t.levels.iter().zip(h) {
        quotients.push(quotient(a, hn)?);
    }
    let transitions = (0..t.transitions.len())
        .map(|n| quotients[n + 1].section.mul(f, &t.transitions[n]).mul(f, &quotients[n].projection))
        .collect();
    let levels = quotients.iter().map(|q| q.algebra.clone()).collect();
    let tower = RingTower::new(&format!("{} / H", t.name), levels, transitions, t.intent)?;
    Ok(QuotientTower { tower, quotients })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StronglyClosedCertificate {
    pub depth: usize,
    pub index_size: usize,
    pub seed: u64,
    pub perturbed_section: bool,
    /// `family[x][n]`: the quotient family, zero below level `x`.
    pub family: Vec<Vec<Vec<Elem>>>,
    /// `lifts[x][n] ∈ R_n`, compatible under the transitions.
    pub lifts: Vec<Vec<Vec<Elem>>>,
    /// Number of levels where the naive preimage had to be repaired by an element of `H`.
    pub repairs: usize,
}

/// Lifts a zero-convergent family of `S = lim R_n/H_n` (entry `x` vanishing
/// below level `x`) to a compatible family in `R`, level by level.
pub fn strongly_closed_check(
    t: &RingTower,
    h: &[Subspace],
    index_size: usize,
    seed: u64,
    perturb: bool,
) -> Result<StronglyClosedCertificate> {
    let f = t.field().clone();
    let qt = quotient_tower(t, h)?;
    let s = &qt.tower;
    let top = t.top();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // a family in S: entry x lies in ker(S_N → S_{x-1})
    let mut family = Vec::new();
    for x in 0..index_size {
        let sn = &s.levels[top];
        let elem = if x == 0 {
            sn.random_element(&mut rng)
        } else if x <= top {
            let k = s.kernel(top, x - 1);
            let c: Vec<Elem> = (0..k.dim()).map(|_| rng.gen_range(0..f.q())).collect();
            k.from_coords(&f, &c)
        } else {
            sn.zero()
        };
        family.push((0..=top).map(|n| s.project(&elem, top, n)).collect::<Vec<_>>());
    }
    let mut lifts = Vec::new();
    let mut repairs = 0;
    for entries in &family {
        let mut chain: Vec<Vec<Elem>> = Vec::new();
        for n in 0..=top {
            let q = &qt.quotients[n];
            let a = &t.levels[n];
            if linalg::is_zero_vec(&entries[n]) {
                chain.push(a.zero());
                continue;
            }
            let mut r = q.lift(a, &entries[n]);
            if perturb && !h[n].is_zero() {
                let c: Vec<Elem> = (0..h[n].dim()).map(|_| rng.gen_range(0..f.q())).collect();
                r = a.add(&r, &h[n].from_coords(&f, &c));
            }
            if n > 0 {
                let down = t.transitions[n - 1].vec_mul(&f, &r);
                let diff = linalg::vsub(&f, &down, &chain[n - 1]);
                if !linalg::is_zero_vec(&diff) {
                    if !h[n - 1].contains(&f, &diff) {
                        return Err(Error::Inconsistent(format!("level {n}: preimages differ outside H")));
                    }
                    let fix = Subspace::preimage_vector(&f, &t.transitions[n - 1], &h[n], &diff)
                        .ok_or_else(|| Error::Inconsistent(format!("level {n}: H_{n} does not surject onto H_{}", n - 1)))?;
                    r = a.sub(&r, &fix);
                    repairs += 1;
                }
            }
            chain.push(r);
        }
        lifts.push(chain);
    }
    // verification
    for (x, (entries, chain)) in family.iter().zip(&lifts).enumerate() {
        for n in 0..=top {
            if qt.quotients[n].project(&t.levels[n], &chain[n]) != entries[n] {
                return Err(Error::Inconsistent(format!("entry {x}: lift does not project to the family at level {n}")));
            }
            if n > 0 && t.transitions[n - 1].vec_mul(&f, &chain[n]) != chain[n - 1] {
                return Err(Error::Inconsistent(format!("entry {x}: lifts are not compatible at level {n}")));
            }
            if linalg::is_zero_vec(&entries[n]) && !linalg::is_zero_vec(&chain[n]) {
                return Err(Error::Inconsistent(format!("entry {x}: zero was lifted to a nonzero element")));
            }
        }
    }
    Ok(StronglyClosedCertificate {
        depth: t.depth(),
        index_size,
        seed,
        perturbed_section: perturb,
        family,
        lifts,
        repairs,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrackedFactor {
    pub order: u64,
    pub n: usize,
    /// Level at which the factor first appears.
    pub level: usize,
    /// Central idempotent at the top level.
    pub idempotent: Vec<Elem>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum SemisimpleVerdict {
    Semisimple { factors: Vec<(u64, usize)>, tracked: Vec<TrackedFactor>, depth: usize },
    Not { witness_level: usize, radical_dim: usize, depth: usize },
}

impl SemisimpleVerdict {
    pub fn is_semisimple(&self) -> bool {
        matches!(self, SemisimpleVerdict::Semisimple { .. })
    }
}

pub fn classify_semisimple(t: &RingTower, seed: u64) -> Result<SemisimpleVerdict> {
    let f = t.field().clone();
    for (n, a) in t.levels.iter().enumerate() {
        let r = radical(a)?;
        if r.dim() > 0 {
            return Ok(SemisimpleVerdict::Not { witness_level: n, radical_dim: r.dim(), depth: t.depth() });
        }
    }
    let data: Vec<_> = t.levels.iter().map(|a| wedderburn(a, seed)).collect::<Result<_>>()?;
    // parent[n][c]: component of level n-1 that component c of level n maps onto
    let mut first_level: Vec<Vec<usize>> = vec![Vec::new(); t.depth()];
    first_level[0] = vec![0; data[0].components.len()];
    for n in 1..t.depth() {
        let lower = &data[n - 1].components;
        let mut hit = vec![false; lower.len()];
        let mut new_dim = 0;
        for c in &data[n].components {
            let img = t.transitions[n - 1].vec_mul(&f, &c.central_idempotent);
            if linalg::is_zero_vec(&img) {
                first_level[n].push(n);
                new_dim += c.n * c.n * c.residue_degree;
                continue;
            }
            let k = lower
                .iter()
                .position(|d| d.central_idempotent == img)
                .ok_or_else(|| Error::Inconsistent(format!("level {n}: a central idempotent maps to a non-primitive one")))?;
            if hit[k] || (lower[k].residue_order, lower[k].n) != (c.residue_order, c.n) {
                return Err(Error::Inconsistent(format!("level {n}: simple factors are not matched one to one")));
            }
            hit[k] = true;
            let origin = first_level[n - 1][k];
            first_level[n].push(origin);
        }
        if hit.iter().any(|h| !h) {
            return Err(Error::Inconsistent(format!("level {n}: a lower factor is not hit")));
        }
        let kernel = t.kernel(n, n - 1);
        if kernel.dim() != new_dim {
            return Err(Error::Inconsistent(format!("level {n}: the kernel is not the sum of the new factors")));
        }
    }
    let top = t.top();
    let tracked: Vec<TrackedFactor> = data[top]
        .components
        .iter()
        .zip(&first_level[top])
        .map(|(c, &lvl)| TrackedFactor { order: c.residue_order, n: c.n, level: lvl, idempotent: c.central_idempotent.clone() })
        .collect();
    let factors = data[top].factors();
    Ok(SemisimpleVerdict::Semisimple { factors, tracked, depth: t.depth() })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum PerfectnessVerdict {
    Perfect,
    NotPerfect,
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ImpliedCondition {
    pub label: String,
    pub statement: String,
    pub status: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PerfectnessReport {
    pub tower: String,
    pub intent: TowerIntent,
    pub depth: usize,
    pub seed: u64,
    pub level_dims: Vec<usize>,
    pub radical_dims: Vec<usize>,
    pub radical_surjective: bool,
    pub tp_formula_holds: bool,
    pub t_nilpotency: TNilpotencyCertificate,
    pub strongly_closed: StronglyClosedCertificate,
    pub quotient: SemisimpleVerdict,
    pub verdict: PerfectnessVerdict,
    pub reason: String,
    pub implied: Vec<ImpliedCondition>,
    pub notes: Vec<String>,
}

fn implied_conditions(status: &str) -> Vec<ImpliedCondition> {
    [
        ("(i)", "every left contramodule has a projective cover"),
        ("(i')", "every flat left contramodule has a projective cover"),
        ("(ii)", "every descending chain of cyclic discrete right modules terminates"),
        ("(iii)", "all flat left contramodules are projective"),
        ("(iii')", "all Bass flat left contramodules are projective"),
        ("(iv)", "the ring is topologically left perfect"),
    ]
    .iter()
    .map(|(l, s)| ImpliedCondition { label: l.to_string(), statement: s.to_string(), status: status.to_string() })
    .collect()
}

pub fn classify_perfect(t: &RingTower, seed: u64) -> Result<PerfectnessReport> {
    let rad = topological_jacobson_radical(t, seed)?;
    let tnil = t_nilpotency_check(t, &rad.levels)?;
    let sc = strongly_closed_check(t, &rad.levels, 3, seed, false)?;
    let qt = quotient_tower(t, &rad.levels)?;
    let quotient = classify_semisimple(&qt.tower, seed)?;
    if !rad.consistent() {
        return Err(Error::Inconsistent("radical tower fails surjectivity or the tp formula".into()));
    }
    if !quotient.is_semisimple() {
        return Err(Error::Inconsistent("the quotient by the radical tower is not semisimple".into()));
    }
    let verdict = PerfectnessVerdict::Perfect;
    let reason = "the base consists of open two-sided ideals with finite, hence left perfect, quotients; \
                  the radical tower is T-nilpotent by the levelwise indices and strongly closed by the recorded lifts, \
                  and the quotient is semisimple"
        .to_string();
    let notes = vec![
        "perfect quotients by a base of open ideals give (iv) only when the ideals are two-sided, as they are for towers"
            .to_string(),
    ];
    Ok(PerfectnessReport {
        tower: t.name.clone(),
        intent: t.intent,
        depth: t.depth(),
        seed,
        level_dims: t.levels.iter().map(|a| a.dim()).collect(),
        radical_dims: rad.dims(),
        radical_surjective: rad.surjective.iter().all(|&b| b),
        tp_formula_holds: rad.tp_checks.iter().all(|c| c.agrees),
        t_nilpotency: tnil,
        strongly_closed: sc,
        quotient,
        verdict,
        reason,
        implied: implied_conditions("equivalent to (iv); holds"),
        notes,
    })
}

#[cfg(test)]
mod tests {
    use super::super::*;
    use super::*;

    #[test]
    fn adic_radical() {
        let t = adic_tower(2, 5).unwrap();
        let r = topological_jacobson_radical(&t, 0).unwrap();
        assert_eq!(r.dims(), vec![0, 1, 2, 3, 4]);
        assert!(r.consistent());
        let k = t_nilpotency_check(&t, &r.levels).unwrap();
        assert_eq!(k.indices, vec![1, 2, 3, 4, 5]);
    }

    #[test]
    fn triangular_constant() {
        let t = triangular_tower(3).unwrap();
        let r = topological_jacobson_radical(&t, 1).unwrap();
        for h in &r.levels {
            assert_eq!(h.vectors(), vec![vec![0, 1, 0]]);
        }
        assert_eq!(t_nilpotency_check(&t, &r.levels).unwrap().indices, vec![2, 2, 2]);
        let rep = classify_perfect(&t, 0).unwrap();
        assert_eq!(rep.verdict, PerfectnessVerdict::Perfect);
        match rep.quotient {
            SemisimpleVerdict::Semisimple { factors, .. } => assert_eq!(factors, vec![(2, 1), (2, 1)]),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn semisimple_showcase() {
        let t = semisimple_showcase_tower(3).unwrap();
        match classify_semisimple(&t, 7).unwrap() {
            SemisimpleVerdict::Semisimple { factors, tracked, .. } => {
                assert_eq!(factors, vec![(2, 1), (2, 2), (4, 1)]);
                let mut levels: Vec<usize> = tracked.iter().map(|t| t.level).collect();
                levels.sort();
                assert_eq!(levels, vec![0, 1, 2]);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn adic_is_not_semisimple() {
        let t = adic_tower(2, 4).unwrap();
        assert!(matches!(classify_semisimple(&t, 0).unwrap(), SemisimpleVerdict::Not { witness_level: 1, .. }));
    }

    #[test]
    fn strongly_closed_adic_lift() {
        let t = adic_tower(2, 4).unwrap();
        let r = topological_jacobson_radical(&t, 0).unwrap();
        let c = strongly_closed_check(&t, &r.levels, 3, 11, true).unwrap();
        assert_eq!(c.lifts.len(), 3);
        let zero = vec![Subspace::zero(1), Subspace::zero(2), Subspace::zero(3), Subspace::zero(4)];
        // H = 0 is not the radical, but lifting along the identity still works
        let id = strongly_closed_check(&t, &zero, 2, 0, false).unwrap();
        for (fam, lift) in id.family.iter().zip(&id.lifts) {
            assert_eq!(fam, lift);
        }
    }

    #[test]
    fn constant_f5() {
        let t = prime_field_tower(5, 3).unwrap();
        match classify_semisimple(&t, 0).unwrap() {
            SemisimpleVerdict::Semisimple { factors, .. } => assert_eq!(factors, vec![(5, 1)]),
            other => panic!("{other:?}"),
        }
    }
}
