//! Subspace ideals, quotients and inverses in `1 + H`.

use serde::{Deserialize, Serialize};

use super::Algebra;
use crate::error::{Error, Result};
use crate::field::Elem;
use crate::linalg::{Matrix, Subspace};

/// A subspace together with the sides on which it absorbs multiplication.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubspaceIdeal {
    pub space: Subspace,
    pub left: bool,
    pub right: bool,
}

impl SubspaceIdeal {
    pub fn classify(a: &Algebra, space: Subspace) -> Self {
        let f = a.field();
        let vs = space.vectors();
        let left = (0..a.dim()).all(|i| vs.iter().all(|v| space.contains(f, &a.mul(&a.basis(i), v))));
        let right = (0..a.dim()).all(|i| vs.iter().all(|v| space.contains(f, &a.mul(v, &a.basis(i)))));
        SubspaceIdeal { space, left, right }
    }

    pub fn two_sided(&self) -> bool {
        self.left && self.right
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }
}

/// Two-sided ideal generated by a set of elements.
pub fn two_sided_closure(a: &Algebra, gens: &[Vec<Elem>]) -> Subspace {
    let f = a.field();
    let mut vs = Vec::new();
    for g in gens {
        for i in 0..a.dim() {
            for j in 0..a.dim() {
                vs.push(a.mul3(&a.basis(i), g, &a.basis(j)));
            }
        }
    }
    Subspace::span(f, a.dim(), &vs)
}

/// Right ideal `g·A`.
pub fn right_ideal(a: &Algebra, gens: &[Vec<Elem>]) -> Subspace {
    let vs: Vec<Vec<Elem>> = gens.iter().flat_map(|g| (0..a.dim()).map(|i| a.mul(g, &a.basis(i)))).collect();
    a.span(&vs)
}

/// Left ideal `A·g`.
pub fn left_ideal(a: &Algebra, gens: &[Vec<Elem>]) -> Subspace {
    let vs: Vec<Vec<Elem>> = gens.iter().flat_map(|g| (0..a.dim()).map(|i| a.mul(&a.basis(i), g))).collect();
    a.span(&vs)
}

/// `A/I` with the projection and the section through the free coordinates.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub algebra: Algebra,
    /// `dim A × dim A/I`; `v·projection` gives quotient coordinates.
    pub projection: Matrix,
    /// `dim A/I × dim A`; a linear section, not multiplicative in general.
    pub section: Matrix,
    pub ideal: Subspace,
}

impl Quotient {
    pub fn project(&self, a: &Algebra, v: &[Elem]) -> Vec<Elem> {
        self.projection.vec_mul(a.field(), v)
    }

    pub fn lift(&self, a: &Algebra, v: &[Elem]) -> Vec<Elem> {
        self.section.vec_mul(a.field(), v)
    }
}

pub fn quotient(a: &Algebra, ideal: &Subspace) -> Result<Quotient> {
    let f = a.field();
    let cls = SubspaceIdeal::classify(a, ideal.clone());
    if !cls.two_sided() {
        return Err(Error::Ideal(format!(
            "quotient needs a two-sided ideal (left: {}, right: {})",
            cls.left, cls.right
        )));
    }
    if ideal.is_full() {
        return Err(Error::Ideal("quotient by the whole algebra".into()));
    }
    let free = ideal.free_columns();
    let m = free.len();
    let n = a.dim();
    let mut projection = Matrix::zeros(n, m);
    for i in 0..n {
        let c = ideal.quotient_coords(f, &a.basis(i));
        for (j, &x) in c.iter().enumerate() {
            projection.set(i, j, x);
        }
    }
    let mut section = Matrix::zeros(m, n);
    for (j, &col) in free.iter().enumerate() {
        section.set(j, col, 1);
    }
    let mut table = vec![0; m * m * m];
    for (i, &ci) in free.iter().enumerate() {
        for (j, &cj) in free.iter().enumerate() {
            let prod = a.basis_product(ci, cj);
            let c = projection.vec_mul(f, prod);
            table[(i * m + j) * m..(i * m + j + 1) * m].copy_from_slice(&c);
        }
    }
    let unit = projection.vec_mul(f, a.unit());
    let algebra = Algebra::new_unchecked(f.clone(), m, table, unit)?;
    Ok(Quotient { algebra, projection, section, ideal: ideal.clone() })
}

/// Inverse of `u ∈ 1 + H` for a nilpotent two-sided ideal `H`, as the finite
/// geometric series `Σ_{k<ν} (1 - u)^k`.
pub fn invert_in_one_plus_h(a: &Algebra, u: &[Elem], h: &Subspace) -> Result<Vec<Elem>> {
    let f = a.field();
    let t = a.sub(a.unit(), u);
    if !h.contains(f, &t) {
        return Err(Error::Hypothesis("u - 1 does not lie in H".into()));
    }
    let nu = a
        .nilpotency_index(h)
        .ok_or_else(|| Error::Hypothesis("H is not nilpotent".into()))?;
    let mut acc = a.one();
    let mut term = a.one();
    for _ in 1..nu {
        term = a.mul(&term, &t);
        acc = a.add(&acc, &term);
    }
    if a.mul(u, &acc) != a.unit() || a.mul(&acc, u) != a.unit() {
        return Err(Error::Inconsistent("geometric series did not invert u".into()));
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::super::builtins::*;
    use super::super::radical::radical;
    use super::*;
    use crate::field::FiniteField;

    #[test]
    fn one_is_its_own_inverse() {
        let f = FiniteField::prime(3).unwrap();
        let a = truncated_power(&f, 3);
        let h = radical(&a).unwrap().space;
        assert_eq!(invert_in_one_plus_h(&a, a.unit(), &h).unwrap(), a.one());
    }

    #[test]
    fn inverse_of_one_plus_x() {
        let f = FiniteField::prime(3).unwrap();
        let a = truncated_power(&f, 3);
        let h = radical(&a).unwrap().space;
        // 1 - x + x^2 = (1, 2, 1) over F_3
        assert_eq!(invert_in_one_plus_h(&a, &[1, 1, 0], &h).unwrap(), vec![1, 2, 1]);
    }

    #[test]
    fn unipotent_matrix_is_self_inverse() {
        let f = FiniteField::prime(2).unwrap();
        let r = truncated_power(&f, 2);
        let m = matrix_over(&r, 2);
        // I + x·E21: E21 ⊗ x sits at index (1·2 + 0)·2 + 1 = 5
        let mut u = m.one();
        u[5] = 1;
        let h = radical(&m).unwrap().space;
        assert_eq!(invert_in_one_plus_h(&m, &u, &h).unwrap(), u);
    }

    #[test]
    fn quotient_requires_two_sided() {
        let f = FiniteField::prime(2).unwrap();
        let a = matrix_algebra(&f, 2);
        // span(E11, E12) is a right ideal only
        let s = a.span(&[a.basis(0), a.basis(1)]);
        assert!(matches!(quotient(&a, &s), Err(Error::Ideal(_))));
    }

    #[test]
    fn triangular_mod_radical() {
        let f = FiniteField::prime(2).unwrap();
        let t = upper_triangular(&f, 2);
        let h = radical(&t).unwrap().space;
        let q = quotient(&t, &h).unwrap();
        assert_eq!(q.algebra.dim(), 2);
        assert!(q.algebra.is_commutative());
        assert_eq!(radical(&q.algebra).unwrap().dim(), 0);
    }
}
