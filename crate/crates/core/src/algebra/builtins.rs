//! Named algebras and seeded random samplers.

use rand::Rng;

use super::{matrix_subalgebra, Algebra};
use crate::error::{Error, Result};
use crate::field::FiniteField;
use crate::linalg::{self, Matrix};
use crate::poly;

/// `Mat_n(F_q)` with basis `E_ij` at index `i·n + j`.
pub fn matrix_algebra(f: &FiniteField, n: usize) -> Algebra {
    let dim = n * n;
    let mut triples = Vec::new();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                triples.push((i * n + j, j * n + k, i * n + k, 1));
            }
        }
    }
    let mut unit = vec![0; dim];
    for i in 0..n {
        unit[i * n + i] = 1;
    }
    Algebra::from_triples(f.clone(), dim, &triples, unit).expect("matrix algebra")
}

/// `F_q[x]/(g)` for a monic `g`, basis `1, x, …, x^{deg g - 1}`.
pub fn truncated_poly(f: &FiniteField, g: &[u32]) -> Result<Algebra> {
    let g = poly::trim(g.to_vec());
    let n = match poly::deg(&g) {
        Some(d) if d >= 1 => d,
        _ => return Err(Error::Algebra("modulus must have positive degree".into())),
    };
    if g[n] != 1 {
        return Err(Error::Algebra("modulus must be monic".into()));
    }
    let mut table = vec![0; n * n * n];
    for i in 0..n {
        for j in 0..n {
            let mut mono = vec![0; i + j + 1];
            mono[i + j] = 1;
            let r = poly::rem(f, &mono, &g);
            for (k, &c) in r.iter().enumerate() {
                table[(i * n + j) * n + k] = c;
            }
        }
    }
    Algebra::new(f.clone(), n, table, linalg::unit_vec(n, 0))
}

/// `F_q[x]/(x^n)`.
pub fn truncated_power(f: &FiniteField, n: usize) -> Algebra {
    let mut g = vec![0; n + 1];
    g[n] = 1;
    truncated_poly(f, &g).expect("x^n is monic")
}

/// Group algebra `F_q[C_m]`, basis `g^0, …, g^{m-1}`.
pub fn cyclic_group_algebra(f: &FiniteField, m: usize) -> Algebra {
    let mut g = vec![0; m + 1];
    g[0] = f.neg(1);
    g[m] = 1;
    truncated_poly(f, &g).expect("x^m - 1 is monic")
}

/// Upper triangular `T_n(F_q)`, basis `E_ij` (`i ≤ j`) in row-major order.
pub fn upper_triangular(f: &FiniteField, n: usize) -> Algebra {
    let mut index = vec![vec![usize::MAX; n]; n];
    let mut count = 0;
    for i in 0..n {
        for j in i..n {
            index[i][j] = count;
            count += 1;
        }
    }
    let mut triples = Vec::new();
    for i in 0..n {
        for j in i..n {
            for k in j..n {
                triples.push((index[i][j], index[j][k], index[i][k], 1));
            }
        }
    }
    let mut unit = vec![0; count];
    for i in 0..n {
        unit[index[i][i]] = 1;
    }
    Algebra::from_triples(f.clone(), count, &triples, unit).expect("triangular algebra")
}

/// `Mat_n(A)` with basis `E_ij ⊗ a_k` at index `(i·n + j)·dim A + k`.
pub fn matrix_over(a: &Algebra, n: usize) -> Algebra {
    let m = a.dim();
    let dim = n * n * m;
    let mut triples = Vec::new();
    for i in 0..n {
        for j in 0..n {
            for l in 0..n {
                for s in 0..m {
                    for t in 0..m {
                        for (k, &c) in a.basis_product(s, t).iter().enumerate() {
                            if c != 0 {
                                triples.push(((i * n + j) * m + s, (j * n + l) * m + t, (i * n + l) * m + k, c));
                            }
                        }
                    }
                }
            }
        }
    }
    let mut unit = vec![0; dim];
    for i in 0..n {
        for k in 0..m {
            unit[(i * n + i) * m + k] = a.unit()[k];
        }
    }
    let mut table = vec![0; dim * dim * dim];
    for (x, y, z, c) in triples {
        table[(x * dim + y) * dim + z] = c;
    }
    // Mat_n of a valid algebra satisfies the axioms, so the O(dim^5) check is skipped
    Algebra::new_unchecked(a.field().clone(), dim, table, unit).expect("matrix ring over an algebra")
}

/// `F_{q^k}` as an `F_q`-algebra, via the first monic irreducible of degree `k`.
pub fn field_extension(f: &FiniteField, k: usize) -> Result<Algebra> {
    if k == 1 {
        return truncated_poly(f, &[0, 1]);
    }
    let q = f.q() as u64;
    let count = q.checked_pow(k as u32).ok_or_else(|| Error::Unsupported("extension too large".into()))?;
    for code in 0..count {
        let mut g = linalg::vec_from_index(code as usize, f.q(), k);
        g.push(1);
        if g[0] != 0 && poly::is_irreducible(f, &g) {
            return truncated_poly(f, &g);
        }
    }
    Err(Error::Unsupported(format!("no irreducible polynomial of degree {k}")))
}

/// Random invertible `n×n` matrix.
pub fn random_invertible<R: Rng>(f: &FiniteField, n: usize, rng: &mut R) -> Matrix {
    loop {
        let data = (0..n * n).map(|_| rng.gen_range(0..f.q())).collect();
        let m = Matrix { rows: n, cols: n, data };
        if linalg::rank(f, &m) == n {
            return m;
        }
    }
}

/// Random algebra of dimension at most `max_dim`: a unital subalgebra of a small
/// matrix algebra generated by one or two random matrices, some of them upper
/// triangular or block shaped, presented in a random basis.
pub fn random_algebra<R: Rng>(f: &FiniteField, max_dim: usize, rng: &mut R) -> Algebra {
    loop {
        let m = rng.gen_range(2..=4);
        let ngens = rng.gen_range(1..=2);
        let shape = rng.gen_range(0..3);
        let gens: Vec<Matrix> = (0..ngens)
            .map(|_| {
                let mut g = Matrix::zeros(m, m);
                for i in 0..m {
                    for j in 0..m {
                        let allowed = match shape {
                            0 => true,
                            1 => i <= j,
                            _ => (i < m / 2) == (j < m / 2) || i < j,
                        };
                        if allowed {
                            g.set(i, j, rng.gen_range(0..f.q()));
                        }
                    }
                }
                g
            })
            .collect();
        let (a, _) = matrix_subalgebra(f, m, &gens).expect("subalgebra");
        if a.dim() <= max_dim {
            let p = random_invertible(f, a.dim(), rng);
            return a.change_basis(&p).expect("basis change");
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn shapes() {
        let f = FiniteField::prime(2).unwrap();
        assert_eq!(upper_triangular(&f, 2).dim(), 3);
        assert_eq!(cyclic_group_algebra(&f, 3).dim(), 3);
        let r = truncated_power(&f, 2);
        let m = matrix_over(&r, 2);
        assert_eq!(m.dim(), 8);
        m.validate().unwrap();
        let f4 = field_extension(&f, 2).unwrap();
        assert_eq!(f4.dim(), 2);
    }

    #[test]
    fn random_algebras_are_valid() {
        let f = FiniteField::prime(3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..10 {
            let a = random_algebra(&f, 6, &mut rng);
            assert!(a.dim() <= 6);
            a.validate().unwrap();
        }
    }
}
