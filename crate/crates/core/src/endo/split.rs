//! Splitting of `⊕_n N_n → colim N_n` for `ω`-indexed systems, in the two
//! decidable regimes: systems that are constant past the truncation, and the
//! chain `F_p[x]/(xⁿ)` with `1 ↦ x`.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::algebra::builtins::{cyclic_group_algebra, truncated_power};
use crate::error::{Error, Result};
use crate::field::{Elem, FiniteField};
use crate::linalg::{self, Matrix, Subspace};
use crate::module::perfect::truncated_chain_family;
use crate::module::{FiniteModule, Side};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Ground {
    /// A finite algebra.
    Finite,
    /// `F_p[x]`, seen through `F_p[x]/(x^m)` acting on every listed module.
    Polynomial { p: u32 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Tail {
    /// Identity maps on the last module from here on.
    Constant,
    /// The system goes on in a way not recorded here.
    Open,
}

#[derive(Clone, Debug)]
pub struct OmegaSystem {
    pub ground: Ground,
    pub modules: Vec<FiniteModule>,
    /// `maps[n]: N_n → N_{n+1}`.
    pub maps: Vec<Matrix>,
    pub tail: Tail,
}

fn is_hom(a: &FiniteModule, b: &FiniteModule, x: &Matrix) -> bool {
    let f = a.field();
    x.rows == a.dim
        && x.cols == b.dim
        && (0..a.algebra.dim()).all(|g| a.action[g].mul(f, x) == x.mul(f, &b.action[g]))
}

impl OmegaSystem {
    pub fn new(ground: Ground, modules: Vec<FiniteModule>, maps: Vec<Matrix>, tail: Tail) -> Result<Self> {
        if modules.is_empty() || maps.len() + 1 != modules.len() {
            return Err(Error::Module(format!("{} modules need {} maps", modules.len(), modules.len().saturating_sub(1))));
        }
        for (n, x) in maps.iter().enumerate() {
            if modules[n].algebra != modules[n + 1].algebra || modules[n].side != modules[n + 1].side {
                return Err(Error::Module(format!("modules {n} and {} are over different algebras", n + 1)));
            }
            if !is_hom(&modules[n], &modules[n + 1], x) {
                return Err(Error::Module(format!("map {n} → {} is not a module homomorphism", n + 1)));
            }
        }
        Ok(OmegaSystem { ground, modules, maps, tail })
    }

    pub fn depth(&self) -> usize {
        self.modules.len()
    }

    /// `N = N = ⋯` with identities.
    pub fn constant(m: &FiniteModule, depth: usize) -> Result<Self> {
        let d = depth.max(1);
        Self::new(Ground::Finite, vec![m.clone(); d], vec![Matrix::identity(m.dim); d - 1], Tail::Constant)
    }

    /// `F_p[x]/(x^n)`, `n = 1..=depth`, with `1 ↦ x`.
    pub fn chain(p: u32, depth: usize) -> Result<Self> {
        let fam = truncated_chain_family(p, depth.max(1))?;
        let maps = fam.maps.into_iter().map(|(_, _, x)| x).collect();
        Self::new(Ground::Polynomial { p }, fam.members, maps, Tail::Open)
    }

    /// `F_2[C_3] → e·F_2[C_3] = e·F_2[C_3] = ⋯` for `e = 1 + g + g²`, along `r ↦ e·r`.
    pub fn group_algebra_example(depth: usize) -> Result<Self> {
        let f = FiniteField::prime(2)?;
        let a = Arc::new(cyclic_group_algebra(&f, 3));
        let reg = FiniteModule::regular(a.clone(), Side::Right);
        let e = vec![1, 1, 1];
        let image = reg.cyclic_submodule(&e);
        let sub = reg.submodule(&image)?;
        let mut into = Matrix::zeros(3, image.dim());
        for i in 0..3 {
            let v = a.mul(&e, &a.basis(i));
            let c = image.coords(&f, &v).expect("e·r lies in e·R");
            for (j, x) in c.into_iter().enumerate() {
                into.set(i, j, x);
            }
        }
        let d = depth.max(2);
        let mut modules = vec![reg];
        let mut maps = vec![into];
        for _ in 1..d {
            modules.push(sub.clone());
        }
        for _ in 2..d {
            maps.push(Matrix::identity(sub.dim));
        }
        Self::new(Ground::Finite, modules, maps, Tail::Constant)
    }

    /// `N_n → N_last`.
    fn to_last(&self, n: usize) -> Matrix {
        let f = self.modules[0].field();
        let mut m = Matrix::identity(self.modules[n].dim);
        for x in &self.maps[n..] {
            m = m.mul(f, x);
        }
        m
    }
}

/// `σ: colim ≅ N_last → N_stage`, a hom with `σ·ψ_stage = id`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitSection {
    pub stage: usize,
    pub matrix: Matrix,
    pub verified: bool,
}

/// The image `s` of the generator of `N_1` is divisible by `x^k` for every
/// `k < depth`, while `x^B` kills `N_1 ⊕ ⋯ ⊕ N_B`; no finite support can hold
/// a preimage of `s` under a section.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HeightObstruction {
    pub p: u32,
    pub depth: usize,
    /// `witnesses[k] ∈ N_{k+1}` with `witnesses[k]·x^k` = image of the generator.
    pub witnesses: Vec<Vec<Elem>>,
    /// Least `e` with `x^e·N_n = 0`, per summand.
    pub exponents: Vec<usize>,
    /// `(B, h)`: `x^B` kills the first `B` summands, `s` has height `h ≥ B`.
    pub exceeded: Vec<(usize, usize)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum SplitVerdict {
    Split { section: SplitSection },
    NotSplit { obstruction: HeightObstruction },
    Unknown { depth: usize },
}

impl SplitVerdict {
    pub fn name(&self) -> &'static str {
        match self {
            SplitVerdict::Split { .. } => "SPLIT",
            SplitVerdict::NotSplit { .. } => "NOT_SPLIT",
            SplitVerdict::Unknown { .. } => "UNKNOWN",
        }
    }
}

fn x_power(m: &FiniteModule, k: usize) -> Matrix {
    let a = &m.algebra;
    let x = if a.dim() > 1 { a.basis(1) } else { a.zero() };
    m.action_matrix(&a.pow(&x, k as u64))
}

fn exponent(m: &FiniteModule) -> usize {
    (0..=m.dim).find(|&e| x_power(m, e).is_zero()).unwrap_or(m.dim + 1)
}

impl HeightObstruction {
    pub fn verify(&self, s: &OmegaSystem) -> Result<()> {
        let f = s.modules[0].field();
        let g = linalg::unit_vec(s.modules[0].dim, 0);
        let mut img = g.clone();
        for k in 0..self.depth {
            if k > 0 {
                img = s.maps[k - 1].vec_mul(f, &img);
            }
            if linalg::is_zero_vec(&img) {
                return Err(Error::Inconsistent(format!("the generator dies in N_{}", k + 1)));
            }
            let w = &self.witnesses[k];
            if x_power(&s.modules[k], k).vec_mul(f, w) != img {
                return Err(Error::Inconsistent(format!("witness {k} does not reach the generator's image")));
            }
        }
        for (n, &e) in self.exponents.iter().enumerate() {
            if exponent(&s.modules[n]) != e {
                return Err(Error::Inconsistent(format!("exponent of N_{} is wrong", n + 1)));
            }
        }
        for &(b, h) in &self.exceeded {
            let bound = self.exponents[..b].iter().copied().max().unwrap_or(0);
            if bound > b || h < b || h >= self.depth {
                return Err(Error::Inconsistent(format!("height bound {b} is not exceeded")));
            }
        }
        Ok(())
    }
}

fn chain_obstruction(s: &OmegaSystem, p: u32) -> Result<Option<HeightObstruction>> {
    let a = &s.modules[0].algebra;
    let f = a.field();
    if a.as_ref() != &truncated_power(f, a.dim()) {
        return Ok(None);
    }
    let d = s.depth();
    let exponents: Vec<usize> = s.modules.iter().map(exponent).collect();
    if exponents.iter().enumerate().any(|(n, &e)| e != n + 1 || s.modules[n].dim != n + 1) {
        return Ok(None);
    }
    let g = linalg::unit_vec(s.modules[0].dim, 0);
    let mut img = g;
    let mut witnesses = Vec::new();
    for k in 0..d {
        if k > 0 {
            img = s.maps[k - 1].vec_mul(f, &img);
        }
        let xk = x_power(&s.modules[k], k);
        let space = Subspace::full(s.modules[k].dim);
        match Subspace::preimage_vector(f, &xk, &space, &img) {
            Some(w) if !linalg::is_zero_vec(&img) => witnesses.push(w),
            _ => return Ok(None),
        }
    }
    let exceeded = (1..d).map(|b| (b, d - 1)).collect();
    let ob = HeightObstruction { p, depth: d, witnesses, exponents, exceeded };
    ob.verify(s)?;
    Ok(Some(ob))
}

pub fn split_omega_limit_check(s: &OmegaSystem) -> Result<SplitVerdict> {
    let f = s.modules[0].field();
    let last = s.modules.last().unwrap();
    if s.tail == Tail::Constant {
        for n in 0..s.depth() {
            let psi = s.to_last(n);
            if s.modules[n].dim != last.dim || linalg::rank(f, &psi) != last.dim {
                continue;
            }
            let sigma = linalg::inverse(f, &psi).ok_or_else(|| Error::Inconsistent("square full-rank matrix without inverse".into()))?;
            let verified = sigma.mul(f, &psi) == Matrix::identity(last.dim) && is_hom(last, &s.modules[n], &sigma);
            if !verified {
                return Err(Error::Inconsistent("the section does not compose to the identity".into()));
            }
            return Ok(SplitVerdict::Split { section: SplitSection { stage: n, matrix: sigma, verified } });
        }
        return Err(Error::Inconsistent("the last stage maps isomorphically onto the colimit".into()));
    }
    if let Ground::Polynomial { p } = s.ground {
        if let Some(ob) = chain_obstruction(s, p)? {
            return Ok(SplitVerdict::NotSplit { obstruction: ob });
        }
    }
    Ok(SplitVerdict::Unknown { depth: s.depth() })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_system_splits_at_first_stage() {
        let f = FiniteField::prime(2).unwrap();
        let m = FiniteModule::regular(Arc::new(truncated_power(&f, 2)), Side::Right);
        match split_omega_limit_check(&OmegaSystem::constant(&m, 4).unwrap()).unwrap() {
            SplitVerdict::Split { section } => {
                assert_eq!(section.stage, 0);
                assert_eq!(section.matrix, Matrix::identity(2));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn chain_does_not_split() {
        let s = OmegaSystem::chain(2, 6).unwrap();
        match split_omega_limit_check(&s).unwrap() {
            SplitVerdict::NotSplit { obstruction } => {
                obstruction.verify(&s).unwrap();
                assert_eq!(obstruction.exponents, vec![1, 2, 3, 4, 5, 6]);
                assert_eq!(obstruction.exceeded.len(), 5);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn group_algebra_images_split() {
        let s = OmegaSystem::group_algebra_example(4).unwrap();
        match split_omega_limit_check(&s).unwrap() {
            SplitVerdict::Split { section } => assert_eq!(section.stage, 1),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn non_homomorphism_is_rejected() {
        let f = FiniteField::prime(2).unwrap();
        let m = FiniteModule::regular(Arc::new(truncated_power(&f, 2)), Side::Right);
        let bad = Matrix::from_rows(&[vec![0, 1], vec![1, 0]], 2);
        assert!(matches!(OmegaSystem::new(Ground::Finite, vec![m.clone(), m], vec![bad], Tail::Open), Err(Error::Module(_))));
    }

    #[test]
    fn open_finite_system_is_unknown() {
        let f = FiniteField::prime(2).unwrap();
        let m = FiniteModule::regular(Arc::new(truncated_power(&f, 2)), Side::Right);
        let s = OmegaSystem::new(Ground::Finite, vec![m.clone(), m], vec![Matrix::identity(2)], Tail::Open).unwrap();
        assert_eq!(split_omega_limit_check(&s).unwrap(), SplitVerdict::Unknown { depth: 2 });
    }
}
