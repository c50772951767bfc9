//! Wedderburn–Artin decomposition of a semisimple algebra.
//!
//! Central idempotents come from factoring minimal polynomials of random
//! central elements; a component is split further until its center is a field,
//! detected by the dimension of the fixed space of `z ↦ z^q`. Inside each
//! simple component a primitive idempotent `ε` is found the same way, and
//! matrix units are solved for on the minimal left ideal `Bε`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::builtins::{matrix_over, truncated_poly};
use super::radical::radical;
use super::{direct_product, Algebra};
use crate::error::{Error, Result};
use crate::field::Elem;
use crate::linalg::{self, Matrix, Subspace};
use crate::poly;

const MAX_RETRIES: usize = 512;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WedderburnComponent {
    pub central_idempotent: Vec<Elem>,
    /// Matrix size `n_x`.
    pub n: usize,
    /// Residue field `F_{q^k}` with `k = residue_degree`.
    pub residue_degree: usize,
    pub residue_order: u64,
    /// Central element generating the residue field, and its minimal polynomial.
    pub field_generator: Vec<Elem>,
    pub field_min_poly: Vec<Elem>,
    /// `E_ij` stored at `i·n + j`.
    pub matrix_units: Vec<Vec<Elem>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WedderburnDatum {
    pub components: Vec<WedderburnComponent>,
    pub seed: u64,
    pub random_draws: usize,
    pub reassembly_verified: bool,
}

impl WedderburnDatum {
    /// Sorted multiset of `(q_x, n_x)`.
    pub fn factors(&self) -> Vec<(u64, usize)> {
        let mut v: Vec<(u64, usize)> = self.components.iter().map(|c| (c.residue_order, c.n)).collect();
        v.sort();
        v
    }

    /// Primitive orthogonal idempotents `E^x_ii`, component by component.
    pub fn primitive_idempotents(&self) -> Vec<(usize, Vec<Elem>)> {
        let mut out = Vec::new();
        for (x, c) in self.components.iter().enumerate() {
            for i in 0..c.n {
                out.push((x, c.matrix_units[i * c.n + i].clone()));
            }
        }
        out
    }
}

/// Minimal polynomial of `z` inside the corner whose unit is `e`.
pub fn min_poly_rel(a: &Algebra, e: &[Elem], z: &[Elem]) -> Vec<Elem> {
    let f = a.field();
    let mut powers = vec![e.to_vec()];
    loop {
        let next = a.mul(powers.last().unwrap(), z);
        let m = Matrix::from_rows(&powers, a.dim());
        if let Some(c) = linalg::solve_left(f, &m, &next) {
            let mut p: Vec<Elem> = c.iter().map(|&x| f.neg(x)).collect();
            p.push(1);
            return p;
        }
        powers.push(next);
    }
}

/// `g(z)` with constant term `g_0·e`.
pub fn eval_rel(a: &Algebra, g: &[Elem], z: &[Elem], e: &[Elem]) -> Vec<Elem> {
    let mut acc = a.zero();
    for &c in g.iter().rev() {
        acc = a.mul(&acc, z);
        acc = a.add(&acc, &a.scale(c, e));
    }
    acc
}

fn random_in(a: &Algebra, s: &Subspace, rng: &mut ChaCha8Rng) -> Vec<Elem> {
    let q = a.field().q();
    let c: Vec<Elem> = (0..s.dim()).map(|_| rng.gen_range(0..q)).collect();
    s.from_coords(a.field(), &c)
}

/// If the minimal polynomial of `z` (relative to `e`) has two distinct
/// irreducible factors, a nontrivial idempotent polynomial in `z`.
fn split_by(a: &Algebra, e: &[Elem], z: &[Elem]) -> Option<Vec<Elem>> {
    let f = a.field();
    let m = min_poly_rel(a, e, z);
    let fz = poly::factor(f, &m).ok()?;
    if fz.factors.len() < 2 {
        return None;
    }
    let (g, mult) = &fz.factors[0];
    let mut first = vec![1];
    for _ in 0..*mult {
        first = poly::mul(f, &first, g);
    }
    let rest = poly::divrem(f, &m, &first).0;
    let u = poly::crt_idempotent(f, &first, &rest)?;
    Some(eval_rel(a, &u, z, e))
}

/// Number of field factors of a commutative semisimple corner `K` (dim of `ker(Frob - 1)`).
fn field_factor_count(a: &Algebra, k: &Subspace) -> usize {
    let f = a.field();
    let rows: Vec<Vec<Elem>> = k
        .vectors()
        .iter()
        .map(|z| {
            let fr = a.sub(&a.pow(z, f.q() as u64), z);
            k.coords(f, &fr).expect("center is closed under powers")
        })
        .collect();
    linalg::left_kernel(f, &Matrix::from_rows(&rows, k.dim())).len()
}

fn corner(a: &Algebra, e: &[Elem], space: &Subspace) -> Subspace {
    let vs: Vec<Vec<Elem>> = space.vectors().iter().map(|v| a.mul3(e, v, e)).collect();
    a.span(&vs)
}

struct Ctx<'a> {
    a: &'a Algebra,
    rng: ChaCha8Rng,
    draws: usize,
}

impl Ctx<'_> {
    fn draw(&mut self, s: &Subspace) -> Result<Vec<Elem>> {
        self.draws += 1;
        if self.draws > MAX_RETRIES * 64 {
            return Err(Error::Budget("too many random draws in decomposition".into()));
        }
        Ok(random_in(self.a, s, &mut self.rng))
    }

    fn central_idempotents(&mut self, e: Vec<Elem>, center: &Subspace, out: &mut Vec<Vec<Elem>>) -> Result<()> {
        let k = corner(self.a, &e, center);
        if field_factor_count(self.a, &k) == 1 {
            out.push(e);
            return Ok(());
        }
        for _ in 0..MAX_RETRIES {
            let z = self.draw(&k)?;
            if let Some(eps) = split_by(self.a, &e, &z) {
                let rest = self.a.sub(&e, &eps);
                self.central_idempotents(eps, center, out)?;
                self.central_idempotents(rest, center, out)?;
                return Ok(());
            }
        }
        Err(Error::Budget("could not split the center".into()))
    }

    fn primitive_idempotent(&mut self, e: Vec<Elem>, field_dim: usize) -> Result<Vec<Elem>> {
        let full = Subspace::full(self.a.dim());
        let mut e = e;
        loop {
            let c = corner(self.a, &e, &full);
            if c.dim() == field_dim {
                return Ok(e);
            }
            let mut found = None;
            for _ in 0..MAX_RETRIES {
                let b = self.draw(&c)?;
                if let Some(eps) = split_by(self.a, &e, &b) {
                    found = Some(eps);
                    break;
                }
            }
            let eps = found.ok_or_else(|| Error::Budget("no primitive idempotent found".into()))?;
            let other = self.a.sub(&e, &eps);
            let d1 = corner(self.a, &eps, &full).dim();
            let d2 = corner(self.a, &other, &full).dim();
            e = if d1 <= d2 { eps } else { other };
        }
    }
}

pub fn wedderburn(a: &Algebra, seed: u64) -> Result<WedderburnDatum> {
    let rad = radical(a)?;
    if rad.dim() > 0 {
        return Err(Error::NotSemisimple(format!("radical has dimension {}", rad.dim())));
    }
    wedderburn_of_semisimple(a, seed)
}

/// Same as [`wedderburn`] without the radical computation, for algebras already
/// known to be semisimple (quotients by a radical). A successful reassembly
/// check certifies semisimplicity after the fact.
pub fn wedderburn_of_semisimple(a: &Algebra, seed: u64) -> Result<WedderburnDatum> {
    let f = a.field();
    let mut ctx = Ctx { a, rng: ChaCha8Rng::seed_from_u64(seed), draws: 0 };
    let center = a.center();
    let mut idems = Vec::new();
    ctx.central_idempotents(a.one(), &center, &mut idems)?;
    let full = Subspace::full(a.dim());
    let mut components = Vec::new();
    for e in idems {
        let kspace = corner(a, &e, &center);
        let k = kspace.dim();
        let bspace = {
            let vs: Vec<Vec<Elem>> = (0..a.dim()).map(|i| a.mul(&e, &a.basis(i))).collect();
            a.span(&vs)
        };
        let n2 = bspace.dim() / k;
        let n = (n2 as f64).sqrt().round() as usize;
        if n * n * k != bspace.dim() {
            return Err(Error::Inconsistent("simple component has non-square dimension".into()));
        }
        let mut gen = None;
        for _ in 0..MAX_RETRIES {
            let z = ctx.draw(&kspace)?;
            let m = min_poly_rel(a, &e, &z);
            if m.len() == k + 1 {
                gen = Some((z, m));
                break;
            }
        }
        let (z, mu) = gen.ok_or_else(|| Error::Budget("no generator of the residue field".into()))?;
        let eps = ctx.primitive_idempotent(e.clone(), k)?;
        let units = matrix_units(a, &e, &eps, n, &bspace, &corner(a, &eps, &full))?;
        components.push(WedderburnComponent {
            central_idempotent: e,
            n,
            residue_degree: k,
            residue_order: (f.q() as u64).pow(k as u32),
            field_generator: z,
            field_min_poly: mu,
            matrix_units: units,
        });
    }
    components.sort_by(|x, y| {
        (x.residue_order, x.n, &x.central_idempotent).cmp(&(y.residue_order, y.n, &y.central_idempotent))
    });
    let mut datum = WedderburnDatum { components, seed, random_draws: ctx.draws, reassembly_verified: false };
    verify_reassembly(a, &datum)?;
    datum.reassembly_verified = true;
    Ok(datum)
}

fn matrix_units(
    a: &Algebra,
    e: &[Elem],
    eps: &[Elem],
    n: usize,
    bspace: &Subspace,
    kcorner: &Subspace,
) -> Result<Vec<Vec<Elem>>> {
    let f = a.field();
    let rest = a.sub(e, eps);
    let w = {
        let vs: Vec<Vec<Elem>> = bspace.vectors().iter().map(|b| a.mul3(&rest, b, eps)).collect();
        a.span(&vs)
    };
    let kb = kcorner.vectors();
    let mut v = vec![eps.to_vec()];
    let mut covered = Subspace::zero(a.dim());
    for cand in w.vectors() {
        if covered.contains(f, &cand) {
            continue;
        }
        let orbit: Vec<Vec<Elem>> = kb.iter().map(|k| a.mul(&cand, k)).collect();
        covered = covered.sum(f, &a.span(&orbit));
        v.push(cand);
    }
    if v.len() != n || covered.dim() != w.dim() {
        return Err(Error::Inconsistent("minimal left ideal has the wrong rank".into()));
    }
    let bb = bspace.vectors();
    let dim = a.dim();
    let mut system = Matrix::zeros(bb.len(), n * dim);
    for (s, b) in bb.iter().enumerate() {
        for (l, vl) in v.iter().enumerate() {
            let prod = a.mul(b, vl);
            for t in 0..dim {
                system.set(s, l * dim + t, prod[t]);
            }
        }
    }
    let mut units = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let mut target = vec![0; n * dim];
            target[j * dim..(j + 1) * dim].copy_from_slice(&v[i]);
            let x = linalg::solve_left(f, &system, &target)
                .ok_or_else(|| Error::Inconsistent("matrix unit system is inconsistent".into()))?;
            units.push(bspace.basis.vec_mul(f, &x));
        }
    }
    Ok(units)
}

/// Checks that `z^s E_ij ↦` the standard basis of `⊕ Mat_{n_x}(F_q[t]/(μ_x))` is
/// an algebra isomorphism onto `A`.
pub fn verify_reassembly(a: &Algebra, d: &WedderburnDatum) -> Result<()> {
    let f = a.field();
    let mut parts = Vec::new();
    let mut images: Vec<Vec<Elem>> = Vec::new();
    for c in &d.components {
        let residue = truncated_poly(f, &c.field_min_poly)?;
        let m = residue.dim();
        parts.push(matrix_over(&residue, c.n));
        let zpows: Vec<Vec<Elem>> = (0..m)
            .scan(c.central_idempotent.clone(), |acc, _| {
                let cur = acc.clone();
                *acc = a.mul(acc, &c.field_generator);
                Some(cur)
            })
            .collect();
        for i in 0..c.n {
            for j in 0..c.n {
                for zp in &zpows {
                    images.push(a.mul(zp, &c.matrix_units[i * c.n + j]));
                }
            }
        }
    }
    let target = direct_product(&parts)?;
    if target.dim() != a.dim() {
        return Err(Error::Inconsistent("component dimensions do not add up".into()));
    }
    let phi = Matrix::from_rows(&images, a.dim());
    if linalg::rank(f, &phi) != a.dim() {
        return Err(Error::Inconsistent("reassembly map is not bijective".into()));
    }
    if phi.vec_mul(f, target.unit()) != a.unit() {
        return Err(Error::Inconsistent("reassembly map is not unital".into()));
    }
    for i in 0..target.dim() {
        for j in 0..target.dim() {
            let lhs = phi.vec_mul(f, target.basis_product(i, j));
            let rhs = a.mul(&images[i], &images[j]);
            if lhs != rhs {
                return Err(Error::Inconsistent(format!("reassembly map not multiplicative at ({i}, {j})")));
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::super::builtins::*;
    use super::*;
    use crate::field::FiniteField;

    #[test]
    fn group_algebra_c3_over_f2() {
        let f = FiniteField::prime(2).unwrap();
        let d = wedderburn(&cyclic_group_algebra(&f, 3), 7).unwrap();
        assert_eq!(d.factors(), vec![(2, 1), (4, 1)]);
    }

    #[test]
    fn mat2_over_f3() {
        let f = FiniteField::prime(3).unwrap();
        let d = wedderburn(&matrix_algebra(&f, 2), 7).unwrap();
        assert_eq!(d.factors(), vec![(3, 2)]);
    }

    #[test]
    fn product_f2_mat2() {
        let f = FiniteField::prime(2).unwrap();
        let a = direct_product(&[truncated_power(&f, 1), matrix_algebra(&f, 2)]).unwrap();
        let d = wedderburn(&a, 3).unwrap();
        assert_eq!(d.factors(), vec![(2, 1), (2, 2)]);
        assert!(d.reassembly_verified);
    }

    #[test]
    fn non_semisimple_is_rejected() {
        let f = FiniteField::prime(2).unwrap();
        assert!(matches!(wedderburn(&truncated_power(&f, 2), 1), Err(Error::NotSemisimple(_))));
    }

    #[test]
    fn larger_cases() {
        let f = FiniteField::prime(2).unwrap();
        let m3 = matrix_algebra(&f, 3);
        assert_eq!(wedderburn(&m3, 1).unwrap().factors(), vec![(2, 3)]);
        let f4 = field_extension(&f, 2).unwrap();
        let m2f4 = matrix_over(&f4, 2);
        assert_eq!(wedderburn(&m2f4, 2).unwrap().factors(), vec![(4, 2)]);
        let f5 = FiniteField::prime(5).unwrap();
        assert_eq!(wedderburn(&cyclic_group_algebra(&f5, 4), 0).unwrap().factors(), vec![(5, 1); 4]);
    }
}
