//! Jacobson radical in characteristic `p`.
//!
//! The algebra is viewed over `F_p` through its left regular representation
//! of degree `N`. Starting from `I_{-1} = A`, each step keeps the `a ∈ I_{i-1}`
//! with `g_i(a·b) = 0` for every basis element `b`, where
//! `g_i(z) = Tr(Ẑ^{p^i}) / p^i mod p` for an integer lift `Ẑ` of `L_z`.
//! Each `g_i` is `F_p`-linear on `I_{i-1}`, so every step is a kernel
//! computation, and `I_l` with `p^l ≤ N < p^{l+1}` is the radical.

use super::{Algebra, SubspaceIdeal};
use crate::error::{Error, Result};
use crate::field::{Elem, FiniteField};
use crate::linalg::{self, Matrix, Subspace};

fn int_mat_mul(a: &[u64], b: &[u64], n: usize, m: u64) -> Vec<u64> {
    let mut out = vec![0u64; n * n];
    for i in 0..n {
        for k in 0..n {
            let x = a[i * n + k];
            if x == 0 {
                continue;
            }
            for j in 0..n {
                out[i * n + j] = (out[i * n + j] + x * b[k * n + j]) % m;
            }
        }
    }
    out
}

fn trace_of_power(mat: &[u64], n: usize, mut e: u64, m: u64) -> u64 {
    let mut base = mat.to_vec();
    let mut acc: Vec<u64> = (0..n * n).map(|i| if i % (n + 1) == 0 { 1 % m } else { 0 }).collect();
    while e > 0 {
        if e & 1 == 1 {
            acc = int_mat_mul(&acc, &base, n, m);
        }
        e >>= 1;
        if e > 0 {
            base = int_mat_mul(&base, &base, n, m);
        }
    }
    (0..n).fold(0, |s, i| (s + acc[i * n + i]) % m)
}

/// Radical over `F_q`, returned with its sides (always two-sided).
pub fn radical(a: &Algebra) -> Result<SubspaceIdeal> {
    let rep: Vec<Matrix> = (0..a.dim()).map(|k| a.left_mul_matrix(&a.basis(k))).collect();
    radical_with_rep(a, &rep)
}

/// Expands an `F_q` matrix into the `F_p` matrix of the same map on digit vectors.
fn expand_to_prime(f: &FiniteField, m: &Matrix) -> Matrix {
    let d = f.d() as usize;
    if d == 1 {
        return m.clone();
    }
    let alpha_pow: Vec<Elem> = (0..d).map(|t| f.pow(f.alpha(), t as u64)).collect();
    let mut out = Matrix::zeros(m.rows * d, m.cols * d);
    for r in 0..m.rows {
        for c in 0..m.cols {
            let x = m.get(r, c);
            if x == 0 {
                continue;
            }
            for (t, &ap) in alpha_pow.iter().enumerate() {
                for (u, digit) in f.to_digits(f.mul(ap, x)).into_iter().enumerate() {
                    out.set(r * d + t, c * d + u, digit);
                }
            }
        }
    }
    out
}

/// Radical computed through a faithful (anti-)representation: `rep[i]` is the
/// matrix of basis element `i`. The trace functions only need a faithful
/// representation, so a small module beats the regular one.
pub fn radical_with_rep(a: &Algebra, rep: &[Matrix]) -> Result<SubspaceIdeal> {
    let f = a.field();
    linalg::check_dims("representation size", rep.len(), a.dim())?;
    let d = f.d() as usize;
    let fp = FiniteField::prime(f.p())?;
    let p = fp.p() as u64;
    let b = a.restrict_scalars();
    let n = b.dim();
    let alpha_pow: Vec<Elem> = (0..d).map(|t| f.pow(f.alpha(), t as u64)).collect();
    let prime_rep: Vec<Matrix> = rep
        .iter()
        .flat_map(|m| alpha_pow.iter().map(|&c| expand_to_prime(f, &m.scale(f, c))).collect::<Vec<_>>())
        .collect();
    let deg = prime_rep.first().map_or(0, |m| m.rows);
    let flat: Vec<Vec<Elem>> = prime_rep.iter().map(|m| m.data.clone()).collect();
    if Subspace::span(&fp, deg * deg, &flat).dim() != n {
        return Err(Error::Algebra("representation is not faithful".into()));
    }
    let mut l = 0u32;
    while p.pow(l + 1) <= deg as u64 {
        l += 1;
    }
    let rep_of = |z: &[Elem]| -> Vec<u64> {
        let mut acc = vec![0u64; deg * deg];
        for (k, &c) in z.iter().enumerate() {
            if c == 0 {
                continue;
            }
            for (slot, &x) in acc.iter_mut().zip(&prime_rep[k].data) {
                *slot = (*slot + c as u64 * x as u64) % p;
            }
        }
        acc
    };
    let mut current = Subspace::full(n);
    for i in 0..=l {
        if current.is_zero() {
            break;
        }
        let pi = p.pow(i);
        let m = pi * p;
        let vs = current.vectors();
        let mut g = Matrix::zeros(vs.len(), n);
        for (j, v) in vs.iter().enumerate() {
            for k in 0..n {
                let z = b.mul(v, &b.basis(k));
                let t = trace_of_power(&rep_of(&z), deg, pi, m);
                if t % pi != 0 {
                    return Err(Error::Inconsistent(format!(
                        "trace of a {pi}-th power is not divisible by {pi}"
                    )));
                }
                g.set(j, k, ((t / pi) % p) as Elem);
            }
        }
        let ker = linalg::left_kernel(&fp, &g);
        let next: Vec<Vec<Elem>> = ker.iter().map(|c| current.basis.vec_mul(&fp, c)).collect();
        current = Subspace::span(&fp, n, &next);
    }
    let vs: Vec<Vec<Elem>> = current.vectors().iter().map(|v| a.from_prime_coords(v)).collect();
    let space = Subspace::span(f, a.dim(), &vs);
    if space.dim() * d != current.dim() {
        return Err(Error::Inconsistent("radical is not an F_q-subspace".into()));
    }
    let ideal = SubspaceIdeal::classify(a, space);
    if !ideal.two_sided() {
        return Err(Error::Inconsistent("computed radical is not a two-sided ideal".into()));
    }
    if a.nilpotency_index(&ideal.space).is_none() {
        return Err(Error::Inconsistent("computed radical is not nilpotent".into()));
    }
    Ok(ideal)
}

/// Brute force from the definition: `x` is in the radical iff `1 - a·x` is a
/// unit for every `a`. Returns `None` when `|A|` exceeds `limit`.
pub fn radical_oracle(a: &Algebra, limit: usize) -> Option<Subspace> {
    let f = a.field();
    let q = f.q();
    let n = a.dim();
    let elems = a.elements(limit)?;
    let units: Vec<bool> = elems.iter().map(|y| a.is_unit(y)).collect();
    let one = a.one();
    let mut members = Vec::new();
    for x in &elems {
        let rx = a.right_mul_matrix(x);
        let ok = elems.iter().all(|e| {
            let ax = rx.vec_mul(f, e);
            units[linalg::vec_index(&linalg::vsub(f, &one, &ax), q)]
        });
        if ok {
            members.push(x.clone());
        }
    }
    let space = Subspace::span(f, n, &members);
    // the member set must be exactly a subspace
    if linalg::space_size(q, space.dim(), usize::MAX) != Some(members.len()) {
        return None;
    }
    Some(space)
}

#[cfg(test)]
mod tests {
    use super::super::builtins::*;
    use super::*;
    use crate::field::FiniteField;

    #[test]
    fn truncated_power_radical() {
        for p in [2, 3, 5] {
            let f = FiniteField::prime(p).unwrap();
            for n in 1..=5 {
                let a = truncated_power(&f, n);
                let r = radical(&a).unwrap();
                let expected = a.span(&(1..n).map(|i| a.basis(i)).collect::<Vec<_>>());
                assert_eq!(r.space, expected, "p={p} n={n}");
            }
        }
    }

    #[test]
    fn matrix_algebra_is_semisimple() {
        let f = FiniteField::prime(2).unwrap();
        assert!(radical(&matrix_algebra(&f, 2)).unwrap().space.is_zero());
        assert!(radical(&matrix_algebra(&f, 3)).unwrap().space.is_zero());
    }

    #[test]
    fn triangular_radical() {
        let f = FiniteField::prime(2).unwrap();
        let t = upper_triangular(&f, 2);
        let r = radical(&t).unwrap();
        // basis E11, E12, E22: the radical is span(E12)
        assert_eq!(r.space.vectors(), vec![vec![0, 1, 0]]);
    }

    #[test]
    fn group_algebra_in_modular_case() {
        // F_3[C_3] = F_3[x]/((x-1)^3): radical of dimension 2
        let f = FiniteField::prime(3).unwrap();
        let a = cyclic_group_algebra(&f, 3);
        assert_eq!(radical(&a).unwrap().dim(), 2);
        let f2 = FiniteField::prime(2).unwrap();
        assert_eq!(radical(&cyclic_group_algebra(&f2, 3)).unwrap().dim(), 0);
    }

    #[test]
    fn oracle_agrees_on_named_examples() {
        let f = FiniteField::prime(2).unwrap();
        for a in [upper_triangular(&f, 2), truncated_power(&f, 3), matrix_algebra(&f, 2), upper_triangular(&f, 3)] {
            assert_eq!(radical(&a).unwrap().space, radical_oracle(&a, 4096).unwrap());
        }
    }

    #[test]
    fn small_representation_agrees() {
        let f = FiniteField::prime(2).unwrap();
        let t = upper_triangular(&f, 3);
        // basis E_ij (i ≤ j) acting on row vectors of length 3
        let mut rep = Vec::new();
        for i in 0..3 {
            for j in i..3 {
                let mut m = Matrix::zeros(3, 3);
                m.set(i, j, 1);
                rep.push(m);
            }
        }
        assert_eq!(radical_with_rep(&t, &rep).unwrap().space, radical(&t).unwrap().space);
        let f4 = FiniteField::new(2, 2).unwrap();
        let a = truncated_power(&f4, 3);
        let rep: Vec<Matrix> = (0..3).map(|k| a.right_mul_matrix(&a.basis(k))).collect();
        assert_eq!(radical_with_rep(&a, &rep).unwrap().dim(), 2);
    }

    #[test]
    fn over_f4() {
        let f4 = FiniteField::new(2, 2).unwrap();
        let a = truncated_power(&f4, 3);
        assert_eq!(radical(&a).unwrap().dim(), 2);
        let m = matrix_algebra(&f4, 2);
        assert!(radical(&m).unwrap().space.is_zero());
    }
}
