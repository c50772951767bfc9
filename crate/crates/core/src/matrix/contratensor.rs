//! `N ⊙_R C` for a right module `N` and a left module `C` over a finite ring:
//! the coequalizer of `N ⊗ R[C] ⇉ N ⊗ C`. Both arrows are additive in the
//! formal sum and linear in `n`, `r` and `c`, so the relations
//! `n ⊗ (r·c) − (n·r) ⊗ c` on basis triples span the same subspace.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::Elem;
use crate::linalg::{self, Matrix, Subspace};
use crate::module::{FiniteModule, Side};

#[derive(Clone, Debug)]
pub struct Contratensor {
    /// `dim N · dim C`, basis `n_i ⊗ c_j` at `i·dim C + j`.
    pub ambient_dim: usize,
    pub relations: Subspace,
}

impl Contratensor {
    pub fn dim(&self) -> usize {
        self.ambient_dim - self.relations.dim()
    }
}

fn tensor(f: &crate::field::FiniteField, u: &[Elem], w: &[Elem]) -> Vec<Elem> {
    let mut out = vec![0; u.len() * w.len()];
    for (a, &x) in u.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (b, &y) in w.iter().enumerate() {
            out[a * w.len() + b] = f.mul(x, y);
        }
    }
    out
}

fn check_pair(n: &FiniteModule, c: &FiniteModule) -> Result<()> {
    if n.side != Side::Right || c.side != Side::Left {
        return Err(Error::Module("the contratensor pairs a right module with a left module".into()));
    }
    if n.algebra.as_ref() != c.algebra.as_ref() {
        return Err(Error::Module("modules over different rings".into()));
    }
    Ok(())
}

/// The relation `n ⊗ (r·c) − (n·r) ⊗ c`.
pub fn relation(n: &FiniteModule, c: &FiniteModule, nv: &[Elem], r: &[Elem], cv: &[Elem]) -> Vec<Elem> {
    let f = n.field();
    linalg::vsub(f, &tensor(f, nv, &c.act(cv, r)), &tensor(f, &n.act(nv, r), cv))
}

pub fn contratensor(n: &FiniteModule, c: &FiniteModule) -> Result<Contratensor> {
    check_pair(n, c)?;
    let f = n.field();
    let mut rels = Vec::new();
    for i in 0..n.dim {
        let ni = linalg::unit_vec(n.dim, i);
        for t in 0..n.algebra.dim() {
            let r = n.algebra.basis(t);
            for j in 0..c.dim {
                rels.push(relation(n, c, &ni, &r, &linalg::unit_vec(c.dim, j)));
            }
        }
    }
    let ambient_dim = n.dim * c.dim;
    Ok(Contratensor { ambient_dim, relations: Subspace::span(f, ambient_dim, &rels) })
}

/// `R^k` as a left `R`-module.
pub fn free_left(r: &Arc<crate::algebra::Algebra>, k: usize) -> Result<FiniteModule> {
    FiniteModule::regular(r.clone(), Side::Left).power(k)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContratensorReport {
    pub index_size: usize,
    pub module_dim: usize,
    pub ambient_dim: usize,
    pub relation_dim: usize,
    pub dim: usize,
    /// `dim N^X`.
    pub target_dim: usize,
    /// `φ: N ⊗ R^X → N^X`, `n ⊗ c ↦ (n·c_x)_x`, kills the relations.
    pub phi_kills_relations: bool,
    pub phi_surjective: bool,
    /// `ψ(m at x) = m ⊗ (1 at x)` inverts `φ` on both sides.
    pub inverse_verified: bool,
    /// `φ((n ⊗ c)·r) = φ(n ⊗ c)·r`.
    pub right_linear: bool,
}

impl ContratensorReport {
    pub fn isomorphic(&self) -> bool {
        self.dim == self.target_dim && self.phi_kills_relations && self.phi_surjective && self.inverse_verified && self.right_linear
    }
}

/// `N ⊙_R R[[X]]` for finite `X` of size `k`, with the explicit isomorphism to `N^X`.
pub fn contratensor_free(n: &FiniteModule, k: usize) -> Result<ContratensorReport> {
    let r = n.algebra.clone();
    let c = free_left(&r, k)?;
    let ct = contratensor(n, &c)?;
    let f = n.field();
    let (dn, rd) = (n.dim, r.dim());
    let dc = c.dim;
    // φ on the ambient basis n_i ⊗ (r_t at x)
    let mut phi = Matrix::zeros(dn * dc, k * dn);
    for i in 0..dn {
        let ni = linalg::unit_vec(dn, i);
        for x in 0..k {
            for t in 0..rd {
                let img = n.act(&ni, &r.basis(t));
                for (a, &v) in img.iter().enumerate() {
                    phi.set(i * dc + x * rd + t, x * dn + a, v);
                }
            }
        }
    }
    let phi_kills_relations = ct.relations.vectors().iter().all(|v| linalg::is_zero_vec(&phi.vec_mul(f, v)));
    let phi_surjective = linalg::rank(f, &phi) == k * dn;
    // ψ: (n_a at x) ↦ n_a ⊗ (1 at x)
    let mut psi = Matrix::zeros(k * dn, dn * dc);
    for x in 0..k {
        for a in 0..dn {
            let mut cv = vec![0; dc];
            cv[x * rd..(x + 1) * rd].copy_from_slice(r.unit());
            let tv = tensor(f, &linalg::unit_vec(dn, a), &cv);
            for (col, &v) in tv.iter().enumerate() {
                psi.set(x * dn + a, col, v);
            }
        }
    }
    let phi_psi = psi.mul(f, &phi) == Matrix::identity(k * dn);
    let psi_phi = (0..dn * dc).all(|b| {
        let e = linalg::unit_vec(dn * dc, b);
        let back = psi.vec_mul(f, &phi.vec_mul(f, &e));
        ct.relations.contains(f, &linalg::vsub(f, &back, &e))
    });
    let mut right_linear = true;
    let right_c = FiniteModule::regular(r.clone(), Side::Right).power(k)?;
    for t in 0..rd {
        let rt = r.basis(t);
        for i in 0..dn {
            for j in 0..dc {
                let cv = linalg::unit_vec(dc, j);
                let moved = tensor(f, &linalg::unit_vec(dn, i), &right_c.act(&cv, &rt));
                let lhs = phi.vec_mul(f, &moved);
                let img = phi.vec_mul(f, &tensor(f, &linalg::unit_vec(dn, i), &cv));
                let rhs: Vec<Elem> = (0..k).flat_map(|x| n.act(&img[x * dn..(x + 1) * dn], &rt)).collect();
                if lhs != rhs {
                    right_linear = false;
                }
            }
        }
    }
    Ok(ContratensorReport {
        index_size: k,
        module_dim: dn,
        ambient_dim: ct.ambient_dim,
        relation_dim: ct.relations.dim(),
        dim: ct.dim(),
        target_dim: k * dn,
        phi_kills_relations,
        phi_surjective,
        inverse_verified: phi_psi && psi_phi,
        right_linear,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::builtins::{truncated_power, upper_triangular};
    use crate::field::FiniteField;

    #[test]
    fn free_contratensor_is_a_power() {
        let f = FiniteField::prime(2).unwrap();
        for a in [upper_triangular(&f, 2), truncated_power(&f, 2)] {
            let n = FiniteModule::regular(Arc::new(a), Side::Right);
            for k in 1..=3 {
                let rep = contratensor_free(&n, k).unwrap();
                assert!(rep.isomorphic(), "{rep:?}");
                assert_eq!(rep.dim, k * n.dim);
            }
        }
    }

    #[test]
    fn basis_triples_match_all_triples() {
        let f = FiniteField::prime(2).unwrap();
        let r = Arc::new(truncated_power(&f, 2));
        let n = FiniteModule::regular(r.clone(), Side::Right);
        let c = free_left(&r, 2).unwrap();
        let fast = contratensor(&n, &c).unwrap();
        let mut rels = Vec::new();
        for nv in n.elements(1 << 10).unwrap() {
            for rv in r.elements(1 << 10).unwrap() {
                for cv in c.elements(1 << 10).unwrap() {
                    rels.push(relation(&n, &c, &nv, &rv, &cv));
                }
            }
        }
        assert_eq!(Subspace::span(&f, fast.ambient_dim, &rels), fast.relations);
    }
}
