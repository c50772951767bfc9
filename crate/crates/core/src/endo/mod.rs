//! Endomorphism rings `E_n = End_A(M_1 ⊕ ⋯ ⊕ M_n)^op` of truncated direct sums
//! with the finite topology, and the realization of a finite ring with a
//! listed base of right ideals as such a ring.
//!
//! Endomorphisms are matrices acting on the right of row vectors, so the
//! product `X·Y` is "first `X`, then `Y`" and `M` is a right `E_n`-module.

pub mod bass;
pub mod coperfect;
pub mod split;

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::algebra::builtins::matrix_over;
use crate::algebra::{matrix_subalgebra, Algebra};
use crate::error::{Error, Result};
use crate::field::Elem;
use crate::linalg::{self, Matrix, Subspace};
use crate::module::perfect::ModuleFamily;
use crate::module::{EndoAlgebra, FiniteModule, Side};

/// `Ann(M_1 ⊕ ⋯ ⊕ M_k)` inside `E_N`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BaseIdeal {
    pub components: usize,
    pub dim: usize,
    pub right_ideal: bool,
}

#[derive(Clone, Debug)]
pub struct EndoTower {
    pub family: ModuleFamily,
    /// `levels[n-1] = E_n`.
    pub levels: Vec<EndoAlgebra>,
    /// `structure_maps[n-1]`: `E_{n+1} → E_n`, `X ↦` its `M^{(n)}` corner, in coordinates.
    pub structure_maps: Vec<Matrix>,
    pub base: Vec<BaseIdeal>,
    /// Basis of each `Ann_k` in `E_N` coordinates.
    pub base_spaces: Vec<Subspace>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EndoTowerSummary {
    pub components: Vec<String>,
    pub level_dims: Vec<usize>,
    pub module_dims: Vec<usize>,
    pub base: Vec<BaseIdeal>,
}

fn offsets(members: &[FiniteModule]) -> Vec<usize> {
    let mut off = vec![0];
    for m in members {
        off.push(off.last().unwrap() + m.dim);
    }
    off
}

/// Checks the structure constants of `e` against its matrix representation;
/// a faithful matrix representation makes the algebra axioms automatic.
fn check_representation(e: &EndoAlgebra) -> Result<()> {
    let a = &e.algebra;
    let f = a.field();
    for i in 0..a.dim() {
        for j in 0..a.dim() {
            if e.basis[i].mul(f, &e.basis[j]) != e.matrix_of(a.basis_product(i, j)) {
                return Err(Error::Inconsistent(format!("endomorphism basis product ({i}, {j}) disagrees with the table")));
            }
        }
    }
    Ok(())
}

fn corner(x: &Matrix, d: usize) -> Matrix {
    let mut m = Matrix::zeros(d, d);
    for r in 0..d {
        for c in 0..d {
            m.set(r, c, x.get(r, c));
        }
    }
    m
}

pub fn endo_tower(family: &ModuleFamily, n: usize) -> Result<EndoTower> {
    if n == 0 || n > family.members.len() {
        return Err(Error::Hypothesis(format!("truncation {n} is outside 1..={}", family.members.len())));
    }
    let members = &family.members[..n];
    let f = members[0].field().clone();
    let off = offsets(members);
    let mut levels = Vec::new();
    for k in 1..=n {
        let sum = FiniteModule::direct_sum(&members[..k])?;
        let e = EndoAlgebra::of(&sum)?;
        check_representation(&e)?;
        levels.push(e);
    }
    let mut structure_maps = Vec::new();
    for k in 1..n {
        let (hi, lo) = (&levels[k], &levels[k - 1]);
        let d = off[k];
        let mut m = Matrix::zeros(hi.algebra.dim(), lo.algebra.dim());
        for (i, b) in hi.basis.iter().enumerate() {
            let c = lo.coords_of(&corner(b, d)).ok_or_else(|| Error::Inconsistent("corner of an endomorphism is not an endomorphism".into()))?;
            for (j, v) in c.into_iter().enumerate() {
                m.set(i, j, v);
            }
        }
        if linalg::rank(&f, &m) != lo.algebra.dim() {
            return Err(Error::Inconsistent(format!("corner map E_{} → E_{k} is not surjective", k + 1)));
        }
        structure_maps.push(m);
    }
    let top = levels.last().unwrap();
    let big = off[n];
    let mut base = Vec::new();
    let mut base_spaces = Vec::new();
    for k in 0..=n {
        let rows = off[k];
        // coordinates whose combination vanishes on the first `rows` basis vectors
        let restr: Vec<Vec<Elem>> = top.basis.iter().map(|b| b.data[..rows * big].to_vec()).collect();
        let ann = if rows == 0 {
            Subspace::full(top.algebra.dim())
        } else {
            Subspace::span(&f, top.algebra.dim(), &linalg::left_kernel(&f, &Matrix::from_rows(&restr, rows * big)))
        };
        let right_ideal = ann.vectors().iter().all(|c| {
            let x = top.matrix_of(c);
            top.basis.iter().all(|b| x.mul(&f, b).data[..rows * big].iter().all(|&v| v == 0))
        });
        base.push(BaseIdeal { components: k, dim: ann.dim(), right_ideal });
        base_spaces.push(ann);
    }
    if base.windows(2).any(|w| w[1].dim > w[0].dim) {
        return Err(Error::Inconsistent("annihilators do not decrease".into()));
    }
    Ok(EndoTower { family: family.clone(), levels, structure_maps, base, base_spaces })
}

impl EndoTower {
    pub fn top(&self) -> &EndoAlgebra {
        self.levels.last().unwrap()
    }

    pub fn module(&self) -> Result<FiniteModule> {
        FiniteModule::direct_sum(&self.family.members[..self.levels.len()])
    }

    pub fn summary(&self) -> EndoTowerSummary {
        let n = self.levels.len();
        EndoTowerSummary {
            components: self.family.labels[..n].to_vec(),
            level_dims: self.levels.iter().map(|e| e.algebra.dim()).collect(),
            module_dims: self.family.members[..n].iter().map(|m| m.dim).collect(),
            base: self.base.clone(),
        }
    }

    /// For `N` copies of one component: `E_N ≅ Mat_N(E_1)` through block
    /// placement. Returns `None` if the components differ.
    pub fn matrix_cross_check(&self) -> Result<Option<bool>> {
        let n = self.levels.len();
        let first = &self.family.members[0];
        if self.family.members[..n].iter().any(|m| m.dim != first.dim || m.action != first.action) {
            return Ok(None);
        }
        let e1 = &self.levels[0];
        let mat = matrix_over(&e1.algebra, n);
        let top = self.top();
        let f = top.algebra.field();
        let d = first.dim;
        let r = e1.algebra.dim();
        let mut images = Vec::new();
        for i in 0..n {
            for j in 0..n {
                for t in 0..r {
                    let mut x = Matrix::zeros(n * d, n * d);
                    for a in 0..d {
                        for b in 0..d {
                            x.set(i * d + a, j * d + b, e1.basis[t].get(a, b));
                        }
                    }
                    match top.coords_of(&x) {
                        Some(c) => images.push(c),
                        None => return Ok(Some(false)),
                    }
                }
            }
        }
        if images.len() != top.algebra.dim() || linalg::rank(f, &Matrix::from_rows(&images, top.algebra.dim())) != images.len() {
            return Ok(Some(false));
        }
        for x in 0..mat.dim() {
            for y in 0..mat.dim() {
                let want = Matrix::from_rows(&images, top.algebra.dim()).vec_mul(f, mat.basis_product(x, y));
                if top.algebra.mul(&images[x], &images[y]) != want {
                    return Ok(Some(false));
                }
            }
        }
        Ok(Some(true))
    }
}

/// `(A, M)` with `End_A(M)^op ≅ R`, and the verified isomorphism.
#[derive(Clone, Debug)]
pub struct Realization {
    pub module: FiniteModule,
    pub generator_count: usize,
    pub endo: EndoAlgebra,
    /// `ρ(r)`: right multiplication by `r` on `M`.
    pub rho: Vec<Matrix>,
    pub report: RealizationReport,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RealizationReport {
    pub ring_dim: usize,
    pub ideal_dims: Vec<usize>,
    pub module_dim: usize,
    pub acting_algebra_dim: usize,
    pub generators: usize,
    pub endo_dim: usize,
    /// Elements on which both compositions were checked.
    pub elements_checked: usize,
    pub exhaustive: bool,
    pub isomorphism: bool,
}

const REALIZE_ELEMENT_LIMIT: usize = 1 << 12;

/// `M = ⊕_I R/I` acted on by the projections and the maps
/// `s_{I,J}: r + J ↦ s·r + I` for `s·J ⊂ I`. The zero ideal must be listed.
pub fn realize_ring_as_endo(r: &Algebra, ideals: &[Subspace]) -> Result<Realization> {
    let f = r.field();
    let n = r.dim();
    for (k, i) in ideals.iter().enumerate() {
        let cls = crate::algebra::SubspaceIdeal::classify(r, i.clone());
        if !cls.right {
            return Err(Error::Ideal(format!("base member {k} is not a right ideal")));
        }
    }
    let zero_at = ideals
        .iter()
        .position(|i| i.is_zero())
        .ok_or_else(|| Error::Hypothesis("the base must contain the zero ideal".into()))?;
    let dims: Vec<usize> = ideals.iter().map(|i| n - i.dim()).collect();
    let mut off = vec![0];
    for d in &dims {
        off.push(off.last().unwrap() + d);
    }
    let total = *off.last().unwrap();
    let block_map = |src: usize, dst: usize, g: &dyn Fn(&[Elem]) -> Vec<Elem>| {
        let mut x = Matrix::zeros(total, total);
        for k in 0..dims[src] {
            let lifted = ideals[src].quotient_lift(&linalg::unit_vec(dims[src], k));
            let img = ideals[dst].quotient_coords(f, &g(&lifted));
            for (c, v) in img.into_iter().enumerate() {
                x.set(off[src] + k, off[dst] + c, v);
            }
        }
        x
    };
    let mut gens = Vec::new();
    for (a, _) in ideals.iter().enumerate() {
        gens.push(block_map(a, a, &|v: &[Elem]| v.to_vec()));
    }
    for (i, ii) in ideals.iter().enumerate() {
        for (j, jj) in ideals.iter().enumerate() {
            // {s : s·J ⊂ I}, a subspace
            let conds: Vec<Vec<Elem>> = (0..n)
                .map(|s| {
                    let es = r.basis(s);
                    jj.vectors().iter().flat_map(|v| ii.quotient_coords(f, &r.mul(&es, v))).collect()
                })
                .collect();
            let width = jj.dim() * dims[i];
            let allowed = if width == 0 {
                (0..n).map(|s| linalg::unit_vec(n, s)).collect()
            } else {
                linalg::left_kernel(f, &Matrix::from_rows(&conds, width))
            };
            for s in Subspace::span(f, n, &allowed).vectors() {
                gens.push(block_map(j, i, &|v: &[Elem]| r.mul(&s, v)));
            }
        }
    }
    let (acting, basis) = matrix_subalgebra(f, total, &gens)?;
    let module = FiniteModule::new_unchecked(Arc::new(acting), Side::Right, total, basis)?;
    let endo = EndoAlgebra::of(&module)?;
    let rho: Vec<Matrix> = (0..n)
        .map(|t| {
            let rt = r.basis(t);
            let mut x = Matrix::zeros(total, total);
            for a in 0..ideals.len() {
                x = x.add(f, &block_map(a, a, &|v: &[Elem]| r.mul(v, &rt)));
            }
            x
        })
        .collect();
    // σ(X) = image of 1 + 0 in the R/0 summand
    let sigma = |x: &Matrix| -> Vec<Elem> {
        let mut one = vec![0; total];
        let coords = ideals[zero_at].quotient_coords(f, r.unit());
        one[off[zero_at]..off[zero_at] + n].copy_from_slice(&coords);
        let img = x.vec_mul(f, &one);
        ideals[zero_at].quotient_lift(&img[off[zero_at]..off[zero_at] + n])
    };
    let rho_of = |v: &[Elem]| -> Matrix {
        let mut x = Matrix::zeros(total, total);
        for (t, &c) in v.iter().enumerate() {
            if c != 0 {
                x = x.add(f, &rho[t].scale(f, c));
            }
        }
        x
    };
    let mut ok = endo.algebra.dim() == n;
    for t in 0..n {
        ok &= endo.coords_of(&rho[t]).is_some();
    }
    for i in 0..n {
        for j in 0..n {
            ok &= rho_of(r.basis_product(i, j)) == rho[i].mul(f, &rho[j]);
        }
    }
    let elements = r.elements(REALIZE_ELEMENT_LIMIT);
    let exhaustive = elements.is_some();
    let sample: Vec<Vec<Elem>> = elements.unwrap_or_else(|| (0..n).map(|t| r.basis(t)).collect());
    for v in &sample {
        ok &= sigma(&rho_of(v)) == *v;
    }
    let endo_elems: Vec<Vec<Elem>> = endo
        .algebra
        .elements(REALIZE_ELEMENT_LIMIT)
        .unwrap_or_else(|| (0..endo.algebra.dim()).map(|t| endo.algebra.basis(t)).collect());
    for c in &endo_elems {
        let x = endo.matrix_of(c);
        ok &= rho_of(&sigma(&x)) == x;
    }
    let report = RealizationReport {
        ring_dim: n,
        ideal_dims: ideals.iter().map(|i| i.dim()).collect(),
        module_dim: total,
        acting_algebra_dim: module.algebra.dim(),
        generators: gens.len(),
        endo_dim: endo.algebra.dim(),
        elements_checked: sample.len() + endo_elems.len(),
        exhaustive,
        isomorphism: ok,
    };
    if !ok {
        return Err(Error::Inconsistent(format!("End_A(M)^op is not isomorphic to R: {report:?}")));
    }
    Ok(Realization { module, generator_count: gens.len(), endo, rho, report })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::builtins::{matrix_algebra, truncated_power};
    use crate::field::FiniteField;

    fn f2() -> FiniteField {
        FiniteField::prime(2).unwrap()
    }

    #[test]
    fn single_component_is_discrete() {
        let s = FiniteModule::regular(Arc::new(truncated_power(&f2(), 1)), Side::Right);
        let t = endo_tower(&ModuleFamily::finite(vec![s]), 1).unwrap();
        assert_eq!(t.summary().level_dims, vec![1]);
        assert_eq!(t.base.last().unwrap().dim, 0);
    }

    #[test]
    fn dual_number_components() {
        let fam = crate::module::perfect::truncated_chain_family(2, 2).unwrap();
        let t = endo_tower(&fam, 2).unwrap();
        assert_eq!(t.summary().level_dims, vec![1, 5]);
        let dims: Vec<usize> = t.base.iter().map(|b| b.dim).collect();
        assert_eq!(dims, vec![5, 3, 0]);
        assert!(t.base.iter().all(|b| b.right_ideal));
    }

    #[test]
    fn simple_cubed_is_a_matrix_ring() {
        let s = FiniteModule::regular(Arc::new(truncated_power(&f2(), 1)), Side::Right);
        let t = endo_tower(&ModuleFamily::finite(vec![s.clone(), s.clone(), s]), 3).unwrap();
        assert_eq!(t.top().algebra.dim(), 9);
        assert_eq!(t.matrix_cross_check().unwrap(), Some(true));
    }

    #[test]
    fn realizations() {
        let f = f2();
        let r = truncated_power(&f, 1);
        let out = realize_ring_as_endo(&r, &[Subspace::zero(1)]).unwrap();
        assert!(out.report.isomorphism && out.report.module_dim == 1);

        let r = truncated_power(&f, 2);
        let x = Subspace::span(&f, 2, &[vec![0, 1]]);
        let out = realize_ring_as_endo(&r, &[Subspace::zero(2), x]).unwrap();
        assert_eq!(out.report.module_dim, 3);

        let r = matrix_algebra(&f, 2);
        // row-major E_11, E_12, E_21, E_22; E_11·R is a maximal right ideal
        let max = Subspace::span(&f, 4, &[vec![1, 0, 0, 0], vec![0, 1, 0, 0]]);
        let out = realize_ring_as_endo(&r, &[Subspace::zero(4), max]).unwrap();
        assert!(out.report.exhaustive && out.report.isomorphism);
    }
}
