//! Finite modules over structure-constant algebras.
//!
//! A module is an `F_q`-space of row vectors with one action matrix per basis
//! element of the algebra: `v ↦ v·A_i`. For a right module `A_{ab} = A_a A_b`,
//! for a left module `a·v = v·A_a` and `A_{ab} = A_b A_a`.
//! Module maps are matrices `X` acting by `v ↦ v·X`.

pub mod chains;
pub mod decompose;
pub mod perfect;

use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::radical::{radical, radical_with_rep};
use crate::algebra::SubspaceIdeal;
use crate::algebra::{algebra_from_matrix_basis, Algebra};
use crate::error::{Error, Result};
use crate::field::{Elem, FiniteField};
use crate::linalg::{self, Matrix, Subspace};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

#[derive(Clone, Debug)]
pub struct FiniteModule {
    pub algebra: Arc<Algebra>,
    pub side: Side,
    pub dim: usize,
    pub action: Vec<Matrix>,
}

impl FiniteModule {
    pub fn new(algebra: Arc<Algebra>, side: Side, dim: usize, action: Vec<Matrix>) -> Result<Self> {
        let m = Self::new_unchecked(algebra, side, dim, action)?;
        m.validate()?;
        Ok(m)
    }

    pub fn new_unchecked(algebra: Arc<Algebra>, side: Side, dim: usize, action: Vec<Matrix>) -> Result<Self> {
        linalg::check_dims("number of action matrices", action.len(), algebra.dim())?;
        for a in &action {
            if a.rows != dim || a.cols != dim {
                return Err(Error::Module(format!("action matrix is {}×{}, expected {dim}×{dim}", a.rows, a.cols)));
            }
        }
        Ok(FiniteModule { algebra, side, dim, action })
    }

    pub fn field(&self) -> &FiniteField {
        self.algebra.field()
    }

    pub fn validate(&self) -> Result<()> {
        let a = &self.algebra;
        let f = a.field();
        if self.action_matrix(a.unit()) != Matrix::identity(self.dim) {
            return Err(Error::Module("the unit does not act as the identity".into()));
        }
        for i in 0..a.dim() {
            for j in 0..a.dim() {
                let lhs = self.action_matrix(a.basis_product(i, j));
                let rhs = match self.side {
                    Side::Right => self.action[i].mul(f, &self.action[j]),
                    Side::Left => self.action[j].mul(f, &self.action[i]),
                };
                if lhs != rhs {
                    return Err(Error::Module(format!("action is not multiplicative on basis pair ({i}, {j})")));
                }
            }
        }
        Ok(())
    }

    /// Matrix of `v ↦ v·a` (or `a·v` for left modules).
    pub fn action_matrix(&self, a: &[Elem]) -> Matrix {
        let f = self.field();
        let mut m = Matrix::zeros(self.dim, self.dim);
        for (i, &c) in a.iter().enumerate() {
            if c != 0 {
                m = m.add(f, &self.action[i].scale(f, c));
            }
        }
        m
    }

    pub fn act(&self, v: &[Elem], a: &[Elem]) -> Vec<Elem> {
        self.action_matrix(a).vec_mul(self.field(), v)
    }

    /// `A` acting on itself by right (or left) multiplication.
    pub fn regular(algebra: Arc<Algebra>, side: Side) -> Self {
        let action = (0..algebra.dim())
            .map(|i| {
                let e = algebra.basis(i);
                match side {
                    Side::Right => algebra.right_mul_matrix(&e),
                    Side::Left => algebra.left_mul_matrix(&e),
                }
            })
            .collect();
        let dim = algebra.dim();
        FiniteModule { algebra, side, dim, action }
    }

    pub fn size(&self, limit: usize) -> Option<usize> {
        linalg::space_size(self.field().q(), self.dim, limit)
    }

    pub fn elements(&self, limit: usize) -> Option<Vec<Vec<Elem>>> {
        let s = self.size(limit)?;
        Some((0..s).map(|i| linalg::vec_from_index(i, self.field().q(), self.dim)).collect())
    }

    pub fn random_element<R: Rng>(&self, rng: &mut R) -> Vec<Elem> {
        (0..self.dim).map(|_| rng.gen_range(0..self.field().q())).collect()
    }

    /// Submodule generated by `gens`.
    pub fn generated(&self, gens: &[Vec<Elem>]) -> Subspace {
        let f = self.field();
        let vs: Vec<Vec<Elem>> = gens.iter().flat_map(|g| self.action.iter().map(move |m| m.vec_mul(f, g))).collect();
        Subspace::span(f, self.dim, &vs)
    }

    pub fn cyclic_submodule(&self, m: &[Elem]) -> Subspace {
        self.generated(&[m.to_vec()])
    }

    pub fn is_submodule(&self, s: &Subspace) -> bool {
        let f = self.field();
        s.vectors().iter().all(|v| self.action.iter().all(|m| s.contains(f, &m.vec_mul(f, v))))
    }

    /// The submodule as a module in its echelon basis.
    pub fn submodule(&self, s: &Subspace) -> Result<FiniteModule> {
        if !self.is_submodule(s) {
            return Err(Error::Module("subspace is not a submodule".into()));
        }
        let f = self.field();
        let basis = s.vectors();
        let action = self
            .action
            .iter()
            .map(|m| {
                let rows: Vec<Vec<Elem>> =
                    basis.iter().map(|v| s.coords(f, &m.vec_mul(f, v)).expect("submodule")).collect();
                Matrix::from_rows(&rows, s.dim())
            })
            .collect();
        Ok(FiniteModule { algebra: self.algebra.clone(), side: self.side, dim: s.dim(), action })
    }

    /// `M/S` in the basis of free columns, with the projection matrix.
    pub fn quotient(&self, s: &Subspace) -> Result<(FiniteModule, Matrix)> {
        if !self.is_submodule(s) {
            return Err(Error::Module("subspace is not a submodule".into()));
        }
        let f = self.field();
        let free = s.free_columns();
        let k = free.len();
        let mut proj = Matrix::zeros(self.dim, k);
        for i in 0..self.dim {
            for (j, &x) in s.quotient_coords(f, &linalg::unit_vec(self.dim, i)).iter().enumerate() {
                proj.set(i, j, x);
            }
        }
        let action = self
            .action
            .iter()
            .map(|m| {
                let rows: Vec<Vec<Elem>> = free
                    .iter()
                    .map(|&c| proj.vec_mul(f, &m.vec_mul(f, &linalg::unit_vec(self.dim, c))))
                    .collect();
                Matrix::from_rows(&rows, k)
            })
            .collect();
        Ok((FiniteModule { algebra: self.algebra.clone(), side: self.side, dim: k, action }, proj))
    }

    /// `H(A)·M`, spanned by `v·h` over bases of `M` and of the radical.
    pub fn radical_with(&self, h: &Subspace) -> Subspace {
        let f = self.field();
        let mut vs = Vec::new();
        for hv in h.vectors() {
            let m = self.action_matrix(&hv);
            for i in 0..self.dim {
                vs.push(m.row(i).to_vec());
            }
        }
        Subspace::span(f, self.dim, &vs)
    }

    pub fn radical(&self) -> Result<Subspace> {
        Ok(self.radical_with(&radical(&self.algebra)?.space))
    }

    /// Span of the action matrices as an algebra (the image of `A` in `End_F(M)`).
    pub fn image_algebra(&self) -> Result<Algebra> {
        let f = self.field();
        let n = self.dim;
        let mut vs: Vec<Vec<Elem>> = self.action.iter().map(|m| m.data.clone()).collect();
        vs.push(Matrix::identity(n).data);
        let space = Subspace::span(f, n * n, &vs);
        Ok(algebra_from_matrix_basis(f, n, &space)?.0)
    }

    pub fn is_semisimple(&self) -> Result<bool> {
        if self.dim == 0 {
            return Ok(true);
        }
        let f = self.field();
        let n = self.dim;
        let mut vs: Vec<Vec<Elem>> = self.action.iter().map(|m| m.data.clone()).collect();
        vs.push(Matrix::identity(n).data);
        let (img, basis) = algebra_from_matrix_basis(f, n, &Subspace::span(f, n * n, &vs))?;
        Ok(radical_with_rep(&img, &basis)?.space.is_zero())
    }

    pub fn top(&self) -> Result<(FiniteModule, Matrix)> {
        let rad = self.radical()?;
        let (t, proj) = self.quotient(&rad)?;
        if !t.is_semisimple()? {
            return Err(Error::Inconsistent("top is not semisimple".into()));
        }
        Ok((t, proj))
    }

    /// Block-diagonal direct sum.
    pub fn direct_sum(parts: &[FiniteModule]) -> Result<FiniteModule> {
        let first = parts.first().ok_or_else(|| Error::Module("empty direct sum".into()))?;
        if parts.iter().any(|m| m.algebra.as_ref() != first.algebra.as_ref() || m.side != first.side) {
            return Err(Error::Module("summands over different algebras or sides".into()));
        }
        let n: usize = parts.iter().map(|m| m.dim).sum();
        let action = (0..first.algebra.dim())
            .map(|i| {
                let mut big = Matrix::zeros(n, n);
                let mut off = 0;
                for m in parts {
                    for r in 0..m.dim {
                        for c in 0..m.dim {
                            big.set(off + r, off + c, m.action[i].get(r, c));
                        }
                    }
                    off += m.dim;
                }
                big
            })
            .collect();
        Ok(FiniteModule { algebra: first.algebra.clone(), side: first.side, dim: n, action })
    }

    pub fn power(&self, k: usize) -> Result<FiniteModule> {
        Self::direct_sum(&vec![self.clone(); k])
    }

    /// Pulls the action back along an algebra map `B -> A` given by the images of `B`'s basis.
    pub fn restrict_along(&self, b: Arc<Algebra>, images: &[Vec<Elem>]) -> Result<FiniteModule> {
        let action = images.iter().map(|x| self.action_matrix(x)).collect();
        FiniteModule::new(b, self.side, self.dim, action)
    }
}

/// Basis of `Hom_A(M, N)` as `dim M × dim N` matrices.
pub fn hom_space(m: &FiniteModule, n: &FiniteModule) -> Result<Vec<Matrix>> {
    if m.algebra.as_ref() != n.algebra.as_ref() || m.side != n.side {
        return Err(Error::Module("modules over different algebras or sides".into()));
    }
    let f = m.field();
    let (dm, dn) = (m.dim, n.dim);
    let unknowns = dm * dn;
    if unknowns == 0 {
        return Ok(Vec::new());
    }
    // v·A_g·X = (v·X)·B_g for each algebra generator g:  A_g X − X B_g = 0
    let mut rows = Vec::new();
    for g in m.algebra.generating_set() {
        let (ai, bi) = (&m.action[g], &n.action[g]);
        for r in 0..dm {
            for c in 0..dn {
                let mut eq = vec![0; unknowns];
                for k in 0..dm {
                    let x = ai.get(r, k);
                    if x != 0 {
                        eq[k * dn + c] = f.add(eq[k * dn + c], x);
                    }
                }
                for k in 0..dn {
                    let x = bi.get(k, c);
                    if x != 0 {
                        eq[r * dn + k] = f.sub(eq[r * dn + k], x);
                    }
                }
                if !linalg::is_zero_vec(&eq) {
                    rows.push(eq);
                }
            }
        }
    }
    let ker = if rows.is_empty() {
        (0..unknowns).map(|i| linalg::unit_vec(unknowns, i)).collect()
    } else {
        linalg::right_kernel(f, &Matrix::from_rows(&rows, unknowns))
    };
    let space = Subspace::span(f, unknowns, &ker);
    Ok(space.vectors().into_iter().map(|v| Matrix { rows: dm, cols: dn, data: v }).collect())
}

/// The endomorphism algebra with maps acting on the right of row vectors, so that
/// the product `X·Y` means "first `X`, then `Y`". This is `End_A(M)^op` in the
/// composition convention, and `M` is a right module over it.
#[derive(Clone, Debug)]
pub struct EndoAlgebra {
    pub algebra: Arc<Algebra>,
    pub basis: Vec<Matrix>,
    space: Subspace,
    dim_m: usize,
}

impl EndoAlgebra {
    pub fn of(m: &FiniteModule) -> Result<Self> {
        let basis = hom_space(m, m)?;
        let f = m.field();
        let n = m.dim;
        let flat: Vec<Vec<Elem>> = basis.iter().map(|x| x.data.clone()).collect();
        let space = Subspace::span(f, n * n, &flat);
        let (algebra, basis) = algebra_from_matrix_basis(f, n, &space)?;
        Ok(EndoAlgebra { algebra: Arc::new(algebra), basis, space, dim_m: n })
    }

    pub fn matrix_of(&self, x: &[Elem]) -> Matrix {
        let f = self.algebra.field();
        let mut m = Matrix::zeros(self.dim_m, self.dim_m);
        for (i, &c) in x.iter().enumerate() {
            if c != 0 {
                m = m.add(f, &self.basis[i].scale(f, c));
            }
        }
        m
    }

    /// `J(End M)`, computed through the action on `M`.
    pub fn radical(&self) -> Result<SubspaceIdeal> {
        radical_with_rep(&self.algebra, &self.basis)
    }

    pub fn coords_of(&self, m: &Matrix) -> Option<Vec<Elem>> {
        self.space.coords(self.algebra.field(), &m.data)
    }

    /// `M` as a right module over this algebra.
    pub fn module(&self) -> FiniteModule {
        FiniteModule {
            algebra: self.algebra.clone(),
            side: Side::Right,
            dim: self.dim_m,
            action: self.basis.clone(),
        }
    }
}

pub fn endo_algebra(m: &FiniteModule) -> Result<EndoAlgebra> {
    EndoAlgebra::of(m)
}

/// Isomorphism search: random invertible Hom elements, then exhaustive search
/// when `|Hom| ≤ limit`. `Ok(None)` means no isomorphism exists; an error means
/// the search was inconclusive.
pub fn find_isomorphism<R: Rng>(m: &FiniteModule, n: &FiniteModule, rng: &mut R, limit: usize) -> Result<Option<Matrix>> {
    if m.dim != n.dim {
        return Ok(None);
    }
    let f = m.field();
    let hom = hom_space(m, n)?;
    let combine = |c: &[Elem]| {
        let mut x = Matrix::zeros(m.dim, n.dim);
        for (h, &k) in hom.iter().zip(c) {
            if k != 0 {
                x = x.add(f, &h.scale(f, k));
            }
        }
        x
    };
    for h in &hom {
        if linalg::rank(f, h) == m.dim {
            return Ok(Some(h.clone()));
        }
    }
    for _ in 0..64 {
        let c: Vec<Elem> = (0..hom.len()).map(|_| rng.gen_range(0..f.q())).collect();
        let x = combine(&c);
        if linalg::rank(f, &x) == m.dim {
            return Ok(Some(x));
        }
    }
    match linalg::space_size(f.q(), hom.len(), limit) {
        Some(total) => {
            for i in 0..total {
                let x = combine(&linalg::vec_from_index(i, f.q(), hom.len()));
                if linalg::rank(f, &x) == m.dim {
                    return Ok(Some(x));
                }
            }
            Ok(None)
        }
        None => Err(Error::Budget("Hom space too large for exhaustive isomorphism search".into())),
    }
}

/// Intersection of all maximal submodules, found by enumerating the simple
/// submodules of the dual module `M* = Hom_F(M, F)` and taking annihilators.
/// Returns `None` when `|M|` exceeds `limit`.
pub fn radical_oracle(m: &FiniteModule, limit: usize) -> Option<Subspace> {
    let f = m.field();
    let q = f.q();
    let n = m.dim;
    let elems = m.elements(limit)?;
    let dual: Vec<Matrix> = m.action.iter().map(|a| a.transpose()).collect();
    let cyclic = |v: &[Elem]| {
        let vs: Vec<Vec<Elem>> = dual.iter().map(|a| a.vec_mul(f, v)).collect();
        Subspace::span(f, n, &vs)
    };
    let dims: Vec<usize> = elems.iter().map(|v| cyclic(v).dim()).collect();
    let mut seen: Vec<Subspace> = Vec::new();
    let mut rad = Subspace::full(n);
    for v in elems.iter().skip(1) {
        let c = cyclic(v);
        if seen.contains(&c) {
            continue;
        }
        let simple = c.elements(f).iter().all(|w| linalg::is_zero_vec(w) || dims[linalg::vec_index(w, q)] == c.dim());
        if simple {
            let ann = Subspace::span(f, n, &c.annihilator(f));
            rad = rad.intersect(f, &ann);
        }
        seen.push(c);
    }
    Some(rad)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::builtins::*;

    fn dual_numbers_module() -> FiniteModule {
        let f = FiniteField::prime(2).unwrap();
        FiniteModule::regular(Arc::new(truncated_power(&f, 3)), Side::Right)
    }

    #[test]
    fn cyclic_submodules() {
        let m = dual_numbers_module();
        assert!(m.cyclic_submodule(&[0, 0, 0]).is_zero());
        assert!(m.cyclic_submodule(&[1, 0, 0]).is_full());
        let s = m.cyclic_submodule(&[0, 1, 0]);
        assert_eq!(s.vectors(), vec![vec![0, 1, 0], vec![0, 0, 1]]);
    }

    #[test]
    fn radical_and_top() {
        let m = dual_numbers_module();
        let r = m.radical().unwrap();
        assert_eq!(r.dim(), 2);
        let (t, _) = m.top().unwrap();
        assert_eq!(t.dim, 1);
    }

    #[test]
    fn endo_of_simple_square() {
        let f = FiniteField::prime(2).unwrap();
        let a = Arc::new(truncated_power(&f, 1));
        let s = FiniteModule::regular(a, Side::Right);
        let e = endo_algebra(&s.power(2).unwrap()).unwrap();
        assert_eq!(e.algebra.dim(), 4);
        assert!(e.radical().unwrap().space.is_zero());
        assert!(radical(&e.algebra).unwrap().space.is_zero());
        assert!(!e.algebra.is_commutative());
    }

    #[test]
    fn endo_of_regular_dual_numbers() {
        let f = FiniteField::prime(2).unwrap();
        let m = FiniteModule::regular(Arc::new(truncated_power(&f, 2)), Side::Right);
        let e = endo_algebra(&m).unwrap();
        assert_eq!(e.algebra.dim(), 2);
        assert!(e.algebra.is_commutative());
        assert_eq!(radical(&e.algebra).unwrap().dim(), 1);
    }

    #[test]
    fn oracle_matches_radical() {
        let f = FiniteField::prime(2).unwrap();
        for a in [truncated_power(&f, 3), upper_triangular(&f, 2), matrix_algebra(&f, 2)] {
            let a = Arc::new(a);
            for side in [Side::Left, Side::Right] {
                let m = FiniteModule::regular(a.clone(), side);
                assert_eq!(m.radical().unwrap(), radical_oracle(&m, 1024).unwrap());
            }
        }
    }

    #[test]
    fn left_regular_is_valid() {
        let f = FiniteField::prime(2).unwrap();
        let a = Arc::new(matrix_algebra(&f, 2));
        FiniteModule::regular(a.clone(), Side::Left).validate().unwrap();
        FiniteModule::regular(a, Side::Right).validate().unwrap();
    }
}
