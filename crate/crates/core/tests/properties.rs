use std::sync::Arc;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use toporing::algebra::builtins::{cyclic_group_algebra, matrix_algebra, random_algebra, random_invertible, truncated_power, upper_triangular};
use toporing::algebra::ideal::{left_ideal, quotient};
use toporing::algebra::radical::{radical, radical_oracle};
use toporing::algebra::wedderburn::{verify_reassembly, wedderburn};
use toporing::algebra::Algebra;
use toporing::endo::bass::{bass_flat, random_bass_sequence};
use toporing::field::{Elem, FiniteField};
use toporing::lifting::lift_idempotent;
use toporing::linalg::{self, Matrix};
use toporing::matrix::{agree_on_certified, mat_mul, BaseRing, IndexSet, WindowedMatrix};
use toporing::module::decompose::{decompose_indecomposable, decompositions_match};
use toporing::module::perfect::{truncated_chain_family, RadicalMaps};
use toporing::module::{radical_oracle as module_radical_oracle, FiniteModule, Side};
use toporing::poly;
use toporing::tower::adic_tower;

fn field(p: u32) -> FiniteField {
    FiniteField::prime(p).unwrap()
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `v ↦ v·P` carries the module onto an isomorphic copy with scrambled basis.
fn scramble(m: &FiniteModule, r: &mut ChaCha8Rng) -> FiniteModule {
    let f = m.field();
    let p = random_invertible(f, m.dim, r);
    let pinv = linalg::inverse(f, &p).unwrap();
    let action = m.action.iter().map(|a| pinv.mul(f, a).mul(f, &p)).collect();
    FiniteModule::new(m.algebra.clone(), m.side, m.dim, action).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, ..ProptestConfig::default() })]

    #[test]
    fn field_axioms(d in 1u32..=3, a in 0u32..1000, b in 0u32..1000, c in 0u32..1000) {
        let f = FiniteField::new(2, d).unwrap();
        let (a, b, c) = (a % f.q(), b % f.q(), c % f.q());
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
        if a != 0 {
            prop_assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
        }
    }

    #[test]
    fn random_algebras_are_associative_with_unit(seed in any::<u64>(), p in prop::sample::select(vec![2u32, 3])) {
        let mut r = rng(seed);
        let a = random_algebra(&field(p), 6, &mut r);
        prop_assert!(a.validate().is_ok());
        let (x, y, z) = (a.random_element(&mut r), a.random_element(&mut r), a.random_element(&mut r));
        prop_assert_eq!(a.mul(&a.mul(&x, &y), &z), a.mul(&x, &a.mul(&y, &z)));
        prop_assert_eq!(a.mul(&a.one(), &x), x.clone());
    }

    #[test]
    fn radical_matches_oracle(seed in any::<u64>(), p in prop::sample::select(vec![2u32, 3])) {
        let a = random_algebra(&field(p), 5, &mut rng(seed));
        let h = radical(&a).unwrap();
        prop_assert_eq!(Some(h.space.clone()), radical_oracle(&a, 1 << 12));
        // A/H is semisimple and decomposes
        let q = quotient(&a, &h.space).unwrap();
        let d = wedderburn(&q.algebra, seed).unwrap();
        prop_assert!(verify_reassembly(&q.algebra, &d).is_ok());
    }

    #[test]
    fn matrix_units_multiply_correctly(seed in any::<u64>()) {
        let f = field(2);
        let a = matrix_algebra(&f, 2);
        let p = random_invertible(&f, a.dim(), &mut rng(seed));
        let a = a.change_basis(&p).unwrap();
        let d = wedderburn(&a, seed).unwrap();
        prop_assert_eq!(d.factors(), vec![(2, 2)]);
        let c = &d.components[0];
        for i in 0..2 { for j in 0..2 { for k in 0..2 { for l in 0..2 {
            let want = if j == k { c.matrix_units[i * 2 + l].clone() } else { a.zero() };
            prop_assert_eq!(a.mul(&c.matrix_units[i * 2 + j], &c.matrix_units[k * 2 + l]), want);
        }}}}
    }

    #[test]
    fn module_radical_matches_oracle(seed in any::<u64>()) {
        let mut r = rng(seed);
        let a = Arc::new(random_algebra(&field(2), 5, &mut r));
        let m = FiniteModule::regular(a.clone(), Side::Right);
        let sub = m.cyclic_submodule(&a.random_element(&mut r));
        let (q, _) = m.quotient(&sub).unwrap();
        for n in [m, q] {
            prop_assert_eq!(Some(n.radical().unwrap()), module_radical_oracle(&n, 1 << 12));
        }
    }

    #[test]
    fn lifted_idempotents(seed in any::<u64>()) {
        let mut r = rng(seed);
        let a = random_algebra(&field(2), 6, &mut r);
        let h = radical(&a).unwrap().space;
        let q = quotient(&a, &h).unwrap();
        let prims = wedderburn(&q.algebra, seed).unwrap().primitive_idempotents();
        let mut fbar = q.algebra.zero();
        for (_, e) in &prims {
            if r.gen_bool(0.5) {
                fbar = q.algebra.add(&fbar, e);
            }
        }
        let c: Vec<Elem> = (0..h.dim()).map(|_| r.gen_range(0..2)).collect();
        let f = a.add(&q.lift(&a, &fbar), &h.from_coords(a.field(), &c));
        let e = lift_idempotent(&a, &f, &h).unwrap().idempotent;
        prop_assert!(a.is_idempotent(&e));
        prop_assert!(h.contains(a.field(), &a.sub(&e, &f)));
    }

    #[test]
    fn windowed_products_are_associative(seed in any::<u64>(), w in 2usize..6) {
        let mut r = rng(seed);
        let base = BaseRing::new(adic_tower(3, 3).unwrap());
        let m: Vec<WindowedMatrix> = (0..3).map(|_| WindowedMatrix::random(&base, IndexSet::Omega, w, &mut r).unwrap()).collect();
        let lhs = mat_mul(&mat_mul(&m[0], &m[1]).unwrap(), &m[2]).unwrap();
        let rhs = mat_mul(&m[0], &mat_mul(&m[1], &m[2]).unwrap()).unwrap();
        prop_assert!(agree_on_certified(&lhs, &rhs).0);
        let id = WindowedMatrix::identity(&base, IndexSet::Omega, w).unwrap();
        prop_assert!(agree_on_certified(&mat_mul(&id, &m[0]).unwrap(), &m[0]).0);
    }

    #[test]
    fn bass_flats_are_projective(seed in any::<u64>()) {
        let mut r = rng(seed);
        let a = random_algebra(&field(2), 6, &mut r);
        let seq = random_bass_sequence(&a, &mut r);
        let b = bass_flat(&a, &seq).unwrap();
        let mut p = a.one();
        for x in &seq {
            p = a.mul(&p, x);
        }
        prop_assert!(b.projective());
        prop_assert_eq!(b.colimit_dim, left_ideal(&a, &[a.pow(&p, a.dim() as u64 + 1)]).dim());
    }
}

#[test]
fn factorization_of_200_polynomials() {
    let mut r = rng(7);
    for k in 0..200 {
        let f = if k % 2 == 0 { field(2) } else { FiniteField::new(3, 1 + (k % 4 == 1) as u32).unwrap() };
        let deg = r.gen_range(1..=12);
        let mut a: Vec<Elem> = (0..deg).map(|_| r.gen_range(0..f.q())).collect();
        a.push(r.gen_range(1..f.q()));
        let fz = poly::factor(&f, &a).unwrap();
        assert_eq!(fz.expand(&f), poly::trim(a.clone()), "#{k}");
        for (g, _) in &fz.factors {
            assert_eq!(*g.last().unwrap(), 1, "#{k}: factor not monic");
            // no factor of degree ≤ deg/2 divides an irreducible g
            assert!(brute_irreducible(&f, g), "#{k}: {} is reducible", poly::to_string(g));
        }
    }
}

/// Trial division by every monic polynomial of degree at most `deg/2`.
fn brute_irreducible(f: &FiniteField, g: &[Elem]) -> bool {
    let d = poly::deg(g).unwrap();
    for e in 1..=d / 2 {
        let count = (f.q() as usize).pow(e as u32);
        for idx in 0..count {
            let mut h = linalg::vec_from_index(idx, f.q(), e);
            h.push(1);
            if poly::rem(f, g, &h).is_empty() {
                return false;
            }
        }
    }
    true
}

#[test]
fn krull_schmidt_on_20_modules() {
    let fam = truncated_chain_family(2, 4).unwrap();
    let mut r = rng(11);
    for k in 0..20 {
        let mut parts = Vec::new();
        let mut mult = [0usize; 4];
        while parts.is_empty() || r.gen_bool(0.5) && parts.len() < 4 {
            let i = r.gen_range(0..4);
            mult[i] += 1;
            parts.push(fam.members[i].clone());
        }
        let m = scramble(&FiniteModule::direct_sum(&parts).unwrap(), &mut r);
        let expected: Vec<(usize, usize)> = (0..4).filter(|&i| mult[i] > 0).map(|i| (i + 1, mult[i])).collect();
        let d1 = decompose_indecomposable(&m, k).unwrap();
        let d2 = decompose_indecomposable(&m, k + 100).unwrap();
        assert_eq!(d1.class_profile(), expected, "#{k}");
        assert!(decompositions_match(&m, &d1, &d2).unwrap(), "#{k}");
    }
}

#[test]
fn harada_sai_composites_vanish() {
    let f = field(2);
    let t2 = Arc::new(upper_triangular(&f, 2));
    let reg = FiniteModule::regular(t2, Side::Right);
    let d = decompose_indecomposable(&reg, 0).unwrap();
    let mut t2_members = d.summand_modules(&reg).unwrap();
    let top = reg.top().unwrap().0;
    t2_members.extend(decompose_indecomposable(&top, 0).unwrap().summand_modules(&top).unwrap());
    for members in [truncated_chain_family(2, 4).unwrap().members, t2_members] {
        let b = members.iter().map(|m| m.dim).max().unwrap();
        let len = (1usize << b) - 1;
        let rad = RadicalMaps::of(&members, 0).unwrap();
        let mut r = rng(b as u64);
        for s in 0..500 {
            let mut i = r.gen_range(0..members.len());
            let mut acc = Matrix::identity(members[i].dim);
            for _ in 0..len {
                let j = r.gen_range(0..members.len());
                let mut x = Matrix::zeros(members[i].dim, members[j].dim);
                for g in &rad.basis[i][j] {
                    if r.gen_bool(0.5) {
                        x = x.add(&f, g);
                    }
                }
                acc = acc.mul(&f, &x);
                i = j;
            }
            assert!(acc.is_zero(), "sample {s}: a composite of {len} radical maps is nonzero");
        }
    }
}

#[test]
fn modules_over_semisimple_algebras_split() {
    let f = field(2);
    let mut r = rng(3);
    for a in [cyclic_group_algebra(&f, 3), matrix_algebra(&f, 2), truncated_power(&f, 1)] {
        let a: Arc<Algebra> = Arc::new(a);
        let reg = FiniteModule::regular(a.clone(), Side::Right);
        for k in 1..=3 {
            let m = reg.power(k).unwrap();
            let g = m.random_element(&mut r);
            let n = m.submodule(&m.cyclic_submodule(&g)).unwrap();
            for x in [&m, &n] {
                assert!(x.radical().unwrap().is_zero());
                let d = decompose_indecomposable(x, 0).unwrap();
                let parts = d.summand_modules(x).unwrap();
                assert!(parts.iter().all(|p| p.radical().unwrap().is_zero()));
                assert_eq!(parts.iter().map(|p| p.dim).sum::<usize>(), x.dim);
            }
        }
    }
}
