//! Finite-dimensional associative unital algebras over `F_q`, given by
//! structure constants `e_i · e_j = Σ_k c[i][j][k] e_k`.

pub mod builtins;
pub mod ideal;
pub mod radical;
pub mod wedderburn;

use std::fmt;

use rand::Rng;

use crate::error::{Error, Result};
use crate::field::{Elem, FiniteField};
use crate::linalg::{self, Matrix, Subspace};

pub use ideal::{Quotient, SubspaceIdeal};

#[derive(Clone, PartialEq, Eq)]
pub struct Algebra {
    field: FiniteField,
    dim: usize,
    table: Vec<Elem>,
    unit: Vec<Elem>,
}

impl fmt::Debug for Algebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Algebra({:?}, dim {})", self.field, self.dim)
    }
}

impl Algebra {
    /// Builds and validates an algebra from a dense table `c[(i·n + j)·n + k]`.
    pub fn new(field: FiniteField, dim: usize, table: Vec<Elem>, unit: Vec<Elem>) -> Result<Self> {
        let a = Self::new_unchecked(field, dim, table, unit)?;
        a.validate()?;
        Ok(a)
    }

    /// Shape checks only; no associativity or unit check.
    pub fn new_unchecked(field: FiniteField, dim: usize, table: Vec<Elem>, unit: Vec<Elem>) -> Result<Self> {
        linalg::check_dims("structure table", table.len(), dim * dim * dim)?;
        linalg::check_dims("unit vector", unit.len(), dim)?;
        if dim == 0 {
            return Err(Error::Algebra("the zero ring is not supported".into()));
        }
        let q = field.q();
        if table.iter().chain(&unit).any(|&c| c >= q) {
            return Err(Error::Algebra("coefficient outside the field".into()));
        }
        Ok(Algebra { field, dim, table, unit })
    }

    pub fn from_triples(
        field: FiniteField,
        dim: usize,
        triples: &[(usize, usize, usize, Elem)],
        unit: Vec<Elem>,
    ) -> Result<Self> {
        let mut table = vec![0; dim * dim * dim];
        for &(i, j, k, v) in triples {
            if i >= dim || j >= dim || k >= dim {
                return Err(Error::Algebra(format!("index ({i}, {j}, {k}) out of range")));
            }
            let slot = &mut table[(i * dim + j) * dim + k];
            *slot = field.add(*slot, v);
        }
        Self::new(field, dim, table, unit)
    }

    pub fn field(&self) -> &FiniteField {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn unit(&self) -> &[Elem] {
        &self.unit
    }

    /// Nonzero structure constants in lexicographic order.
    pub fn triples(&self) -> Vec<(usize, usize, usize, Elem)> {
        let n = self.dim;
        let mut out = Vec::new();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let v = self.table[(i * n + j) * n + k];
                    if v != 0 {
                        out.push((i, j, k, v));
                    }
                }
            }
        }
        out
    }

    pub fn table(&self) -> &[Elem] {
        &self.table
    }

    /// `e_i · e_j` as a coordinate slice.
    #[inline]
    pub fn basis_product(&self, i: usize, j: usize) -> &[Elem] {
        let n = self.dim;
        &self.table[(i * n + j) * n..(i * n + j + 1) * n]
    }

    /// `|A|` if it fits in `limit`.
    pub fn size(&self, limit: usize) -> Option<usize> {
        linalg::space_size(self.field.q(), self.dim, limit)
    }

    pub fn zero(&self) -> Vec<Elem> {
        vec![0; self.dim]
    }

    pub fn one(&self) -> Vec<Elem> {
        self.unit.clone()
    }

    pub fn basis(&self, i: usize) -> Vec<Elem> {
        linalg::unit_vec(self.dim, i)
    }

    pub fn add(&self, a: &[Elem], b: &[Elem]) -> Vec<Elem> {
        linalg::vadd(&self.field, a, b)
    }

    pub fn sub(&self, a: &[Elem], b: &[Elem]) -> Vec<Elem> {
        linalg::vsub(&self.field, a, b)
    }

    pub fn scale(&self, c: Elem, a: &[Elem]) -> Vec<Elem> {
        linalg::vscale(&self.field, c, a)
    }

    pub fn mul(&self, a: &[Elem], b: &[Elem]) -> Vec<Elem> {
        let f = &self.field;
        let n = self.dim;
        let mut out = vec![0; n];
        for (i, &ai) in a.iter().enumerate() {
            if ai == 0 {
                continue;
            }
            for (j, &bj) in b.iter().enumerate() {
                if bj == 0 {
                    continue;
                }
                let c = f.mul(ai, bj);
                linalg::vaxpy(f, &mut out, c, self.basis_product(i, j));
            }
        }
        out
    }

    pub fn mul3(&self, a: &[Elem], b: &[Elem], c: &[Elem]) -> Vec<Elem> {
        self.mul(&self.mul(a, b), c)
    }

    pub fn pow(&self, a: &[Elem], mut e: u64) -> Vec<Elem> {
        let mut base = a.to_vec();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// Matrix `L` with `y·L = a·y`.
    pub fn left_mul_matrix(&self, a: &[Elem]) -> Matrix {
        let rows: Vec<Vec<Elem>> = (0..self.dim).map(|j| self.mul(a, &self.basis(j))).collect();
        Matrix::from_rows(&rows, self.dim)
    }

    /// Matrix `R` with `y·R = y·a`.
    pub fn right_mul_matrix(&self, a: &[Elem]) -> Matrix {
        let rows: Vec<Vec<Elem>> = (0..self.dim).map(|j| self.mul(&self.basis(j), a)).collect();
        Matrix::from_rows(&rows, self.dim)
    }

    pub fn is_unit(&self, a: &[Elem]) -> bool {
        linalg::rank(&self.field, &self.left_mul_matrix(a)) == self.dim
    }

    pub fn inverse(&self, a: &[Elem]) -> Option<Vec<Elem>> {
        // a·x = 1  ⇔  x·L_a = 1
        let x = linalg::solve_left(&self.field, &self.left_mul_matrix(a), &self.unit)?;
        (self.mul(&x, a) == self.unit).then_some(x)
    }

    pub fn is_idempotent(&self, a: &[Elem]) -> bool {
        self.mul(a, a) == a
    }

    /// Checks associativity on basis triples and the two unit laws.
    pub fn validate(&self) -> Result<()> {
        let n = self.dim;
        for i in 0..n {
            for j in 0..n {
                let ij = self.basis_product(i, j).to_vec();
                for k in 0..n {
                    let lhs = self.mul(&ij, &self.basis(k));
                    let rhs = self.mul(&self.basis(i), self.basis_product(j, k));
                    if lhs != rhs {
                        return Err(Error::Algebra(format!(
                            "associativity fails on basis triple ({i}, {j}, {k})"
                        )));
                    }
                }
            }
        }
        for i in 0..n {
            let e = self.basis(i);
            if self.mul(&self.unit, &e) != e {
                return Err(Error::Algebra(format!("unit fails on the left at basis element {i}")));
            }
            if self.mul(&e, &self.unit) != e {
                return Err(Error::Algebra(format!("unit fails on the right at basis element {i}")));
            }
        }
        Ok(())
    }

    pub fn is_commutative(&self) -> bool {
        let n = self.dim;
        (0..n).all(|i| (0..n).all(|j| self.basis_product(i, j) == self.basis_product(j, i)))
    }

    pub fn center(&self) -> Subspace {
        let f = &self.field;
        let n = self.dim;
        let mut big = Matrix::zeros(n, n * n);
        for i in 0..n {
            let e = self.basis(i);
            let d = self.right_mul_matrix(&e).sub(f, &self.left_mul_matrix(&e));
            for r in 0..n {
                for c in 0..n {
                    big.set(r, i * n + c, d.get(r, c));
                }
            }
        }
        Subspace::span(f, n, &linalg::left_kernel(f, &big))
    }

    /// `span{u·v : u ∈ U, v ∈ V}`.
    pub fn product_space(&self, u: &Subspace, v: &Subspace) -> Subspace {
        let mut vs = Vec::new();
        for a in u.vectors() {
            for b in v.vectors() {
                vs.push(self.mul(&a, &b));
            }
        }
        Subspace::span(&self.field, self.dim, &vs)
    }

    /// Smallest `k ≥ 1` with `H^k = 0`, or `None` if the powers stabilize at a nonzero space.
    pub fn nilpotency_index(&self, h: &Subspace) -> Option<usize> {
        if h.is_zero() {
            return Some(1);
        }
        let mut power = h.clone();
        let mut k = 1;
        loop {
            let next = self.product_space(&power, h);
            k += 1;
            if next.is_zero() {
                return Some(k);
            }
            if next.dim() == power.dim() {
                return None;
            }
            power = next;
        }
    }

    /// Minimal polynomial of `a` over `F_q`.
    pub fn min_poly(&self, a: &[Elem]) -> Vec<Elem> {
        let f = &self.field;
        let mut powers = vec![self.one()];
        loop {
            let next = self.mul(powers.last().unwrap(), a);
            let m = Matrix::from_rows(&powers, self.dim);
            if let Some(c) = linalg::solve_left(f, &m, &next) {
                let mut poly: Vec<Elem> = c.iter().map(|&x| f.neg(x)).collect();
                poly.push(1);
                return poly;
            }
            powers.push(next);
        }
    }

    /// Evaluates a polynomial at `a`.
    pub fn eval_poly(&self, poly: &[Elem], a: &[Elem]) -> Vec<Elem> {
        let mut acc = self.zero();
        for &c in poly.iter().rev() {
            acc = self.mul(&acc, a);
            acc = self.add(&acc, &self.scale(c, &self.unit));
        }
        acc
    }

    pub fn random_element<R: Rng>(&self, rng: &mut R) -> Vec<Elem> {
        (0..self.dim).map(|_| rng.gen_range(0..self.field.q())).collect()
    }

    /// All elements, when there are at most `limit` of them.
    pub fn elements(&self, limit: usize) -> Option<Vec<Vec<Elem>>> {
        let size = self.size(limit)?;
        Some((0..size).map(|i| linalg::vec_from_index(i, self.field.q(), self.dim)).collect())
    }

    pub fn opposite(&self) -> Algebra {
        let n = self.dim;
        let mut table = vec![0; n * n * n];
        for i in 0..n {
            for j in 0..n {
                table[(i * n + j) * n..(i * n + j + 1) * n].copy_from_slice(self.basis_product(j, i));
            }
        }
        Algebra { field: self.field.clone(), dim: n, table, unit: self.unit.clone() }
    }

    /// Same algebra in the basis `b_i = Σ_j P[i][j] e_j`.
    pub fn change_basis(&self, p: &Matrix) -> Result<Algebra> {
        let f = &self.field;
        let n = self.dim;
        let pinv = linalg::inverse(f, p).ok_or_else(|| Error::NotInvertible("basis change".into()))?;
        let mut table = vec![0; n * n * n];
        for i in 0..n {
            for j in 0..n {
                let prod = self.mul(p.row(i), p.row(j));
                let coords = pinv.vec_mul(f, &prod);
                table[(i * n + j) * n..(i * n + j + 1) * n].copy_from_slice(&coords);
            }
        }
        let unit = pinv.vec_mul(f, &self.unit);
        Algebra::new_unchecked(f.clone(), n, table, unit)
    }

    /// The same ring as an `F_p`-algebra of dimension `n·d`, basis `α^t e_i` at index `i·d + t`.
    pub fn restrict_scalars(&self) -> Algebra {
        let f = &self.field;
        let d = f.d() as usize;
        if d == 1 {
            return self.clone();
        }
        let fp = FiniteField::prime(f.p()).unwrap();
        let n = self.dim;
        let nd = n * d;
        let alpha_pow: Vec<Elem> = (0..d).map(|t| f.pow(f.alpha(), t as u64)).collect();
        let mut table = vec![0; nd * nd * nd];
        for i in 0..n {
            for s in 0..d {
                for j in 0..n {
                    for t in 0..d {
                        let c = f.mul(alpha_pow[s], alpha_pow[t]);
                        let prod = self.scale(c, self.basis_product(i, j));
                        let flat = self.to_prime_coords(&prod);
                        let (a, b) = (i * d + s, j * d + t);
                        table[(a * nd + b) * nd..(a * nd + b + 1) * nd].copy_from_slice(&flat);
                    }
                }
            }
        }
        let unit = self.to_prime_coords(&self.unit);
        Algebra { field: fp, dim: nd, table, unit }
    }

    pub fn to_prime_coords(&self, a: &[Elem]) -> Vec<Elem> {
        a.iter().flat_map(|&c| self.field.to_digits(c)).collect()
    }

    pub fn from_prime_coords(&self, v: &[Elem]) -> Vec<Elem> {
        let d = self.field.d() as usize;
        v.chunks(d).map(|ch| self.field.from_digits(ch)).collect()
    }

    /// Basis indices generating `A` as a unital algebra, chosen greedily.
    pub fn generating_set(&self) -> Vec<usize> {
        let f = &self.field;
        let mut gens: Vec<usize> = Vec::new();
        let mut reached = self.span(&[self.unit.clone()]);
        for i in 0..self.dim {
            if reached.contains(f, &self.basis(i)) {
                continue;
            }
            gens.push(i);
            // words in the generators, grown by right multiplication
            let mut space = self.span(&[self.unit.clone()]);
            let mut frontier = vec![self.unit.clone()];
            while let Some(v) = frontier.pop() {
                for &g in &gens {
                    let w = self.mul(&v, &self.basis(g));
                    if !space.contains(f, &w) {
                        space = space.sum(f, &self.span(&[w.clone()]));
                        frontier.push(w);
                    }
                }
            }
            reached = space;
            if reached.is_full() {
                break;
            }
        }
        gens
    }

    /// Sub-`F_q`-space spanned by vectors.
    pub fn span(&self, vs: &[Vec<Elem>]) -> Subspace {
        Subspace::span(&self.field, self.dim, vs)
    }
}

/// Direct product of algebras over a common field.
pub fn direct_product(parts: &[Algebra]) -> Result<Algebra> {
    let Some(first) = parts.first() else {
        return Err(Error::Algebra("empty product".into()));
    };
    let f = first.field().clone();
    if parts.iter().any(|a| a.field() != &f) {
        return Err(Error::Algebra("factors over different fields".into()));
    }
    let n: usize = parts.iter().map(|a| a.dim()).sum();
    let mut table = vec![0; n * n * n];
    let mut unit = Vec::with_capacity(n);
    let mut off = 0;
    for a in parts {
        let m = a.dim();
        for i in 0..m {
            for j in 0..m {
                for k in 0..m {
                    table[((off + i) * n + off + j) * n + off + k] = a.table()[(i * m + j) * m + k];
                }
            }
        }
        unit.extend_from_slice(a.unit());
        off += m;
    }
    Algebra::new_unchecked(f, n, table, unit)
}

/// Unital subalgebra of `Mat_m(F_q)` generated by `gens`, with its basis matrices.
pub fn matrix_subalgebra(f: &FiniteField, m: usize, gens: &[Matrix]) -> Result<(Algebra, Vec<Matrix>)> {
    let flat = |x: &Matrix| x.data.clone();
    let mut space = Subspace::span(f, m * m, &[flat(&Matrix::identity(m))]);
    for g in gens {
        space = space.sum(f, &Subspace::span(f, m * m, &[flat(g)]));
    }
    loop {
        let basis: Vec<Matrix> =
            space.vectors().into_iter().map(|v| Matrix { rows: m, cols: m, data: v }).collect();
        let mut grown = space.clone();
        for a in &basis {
            for b in &basis {
                let prod = flat(&a.mul(f, b));
                if !grown.contains(f, &prod) {
                    grown = grown.sum(f, &Subspace::span(f, m * m, &[prod]));
                }
            }
        }
        if grown.dim() == space.dim() {
            break;
        }
        space = grown;
    }
    algebra_from_matrix_basis(f, m, &space)
}

/// Structure constants of a multiplicatively closed space of `m×m` matrices containing `I`.
pub fn algebra_from_matrix_basis(f: &FiniteField, m: usize, space: &Subspace) -> Result<(Algebra, Vec<Matrix>)> {
    let basis: Vec<Matrix> = space.vectors().into_iter().map(|v| Matrix { rows: m, cols: m, data: v }).collect();
    let n = basis.len();
    let mut table = vec![0; n * n * n];
    for (i, a) in basis.iter().enumerate() {
        for (j, b) in basis.iter().enumerate() {
            let prod = a.mul(f, b);
            let c = space
                .coords(f, &prod.data)
                .ok_or_else(|| Error::Algebra("matrix space is not closed under products".into()))?;
            table[(i * n + j) * n..(i * n + j + 1) * n].copy_from_slice(&c);
        }
    }
    let unit = space
        .coords(f, &Matrix::identity(m).data)
        .ok_or_else(|| Error::Algebra("matrix space does not contain the identity".into()))?;
    // matrix multiplication is associative and I is the identity, so no axiom check is needed
    Ok((Algebra::new_unchecked(f.clone(), n, table, unit)?, basis))
}

#[cfg(test)]
mod tests {
    use super::builtins::*;
    use super::*;

    #[test]
    fn generating_sets() {
        let f = FiniteField::prime(2).unwrap();
        assert_eq!(truncated_power(&f, 4).generating_set(), vec![1]);
        let m = matrix_algebra(&f, 2);
        let g = m.generating_set();
        assert!(g.len() <= 3 && !g.is_empty());
        assert!(matrix_algebra(&f, 1).generating_set().is_empty());
    }

    #[test]
    fn mat2_f2_is_valid() {
        let f = FiniteField::prime(2).unwrap();
        let a = matrix_algebra(&f, 2);
        assert_eq!(a.dim(), 4);
        a.validate().unwrap();
    }

    #[test]
    fn perturbed_constant_is_reported() {
        let f = FiniteField::prime(2).unwrap();
        let a = matrix_algebra(&f, 2);
        let mut table = a.table().to_vec();
        // e_0·e_1 = e_1 becomes e_0·e_1 = e_1 + e_3
        table[(0 * 4 + 1) * 4 + 3] = 1;
        let err = Algebra::new(f, 4, table, a.unit().to_vec()).unwrap_err();
        assert!(matches!(err, Error::Algebra(ref s) if s.contains("basis triple") || s.contains("unit")), "{err}");
    }

    #[test]
    fn truncated_cube() {
        let f = FiniteField::prime(2).unwrap();
        let a = truncated_poly(&f, &[0, 0, 0, 1]).unwrap();
        assert_eq!(a.dim(), 3);
        a.validate().unwrap();
    }

    #[test]
    fn restriction_of_scalars_is_an_algebra() {
        let f4 = FiniteField::new(2, 2).unwrap();
        let a = matrix_algebra(&f4, 2);
        let r = a.restrict_scalars();
        assert_eq!(r.dim(), 8);
        r.validate().unwrap();
    }

    #[test]
    fn center_of_matrix_algebra_is_scalars() {
        let f = FiniteField::prime(3).unwrap();
        let a = matrix_algebra(&f, 2);
        assert_eq!(a.center().dim(), 1);
    }

    #[test]
    fn min_poly_of_x() {
        let f = FiniteField::prime(3).unwrap();
        let a = truncated_poly(&f, &[0, 0, 1]).unwrap();
        assert_eq!(a.min_poly(&[0, 1]), vec![0, 0, 1]);
    }
}
