//! Univariate polynomials over `F_q` and their factorization
//! (square-free split, distinct-degree split, Cantor–Zassenhaus).
//!
//! A polynomial is a coefficient vector, lowest degree first, with no
//! trailing zeros. The zero polynomial is the empty vector.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Elem, FiniteField};

pub type Poly = Vec<Elem>;

pub fn trim(mut a: Poly) -> Poly {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

pub fn deg(a: &[Elem]) -> Option<usize> {
    if a.is_empty() {
        None
    } else {
        Some(a.len() - 1)
    }
}

pub fn is_one(a: &[Elem]) -> bool {
    a == [1]
}

pub fn x() -> Poly {
    vec![0, 1]
}

pub fn add(f: &FiniteField, a: &[Elem], b: &[Elem]) -> Poly {
    let n = a.len().max(b.len());
    let out = (0..n)
        .map(|i| f.add(*a.get(i).unwrap_or(&0), *b.get(i).unwrap_or(&0)))
        .collect();
    trim(out)
}

pub fn sub(f: &FiniteField, a: &[Elem], b: &[Elem]) -> Poly {
    let n = a.len().max(b.len());
    let out = (0..n)
        .map(|i| f.sub(*a.get(i).unwrap_or(&0), *b.get(i).unwrap_or(&0)))
        .collect();
    trim(out)
}

pub fn scale(f: &FiniteField, c: Elem, a: &[Elem]) -> Poly {
    trim(a.iter().map(|&x| f.mul(c, x)).collect())
}

pub fn mul(f: &FiniteField, a: &[Elem], b: &[Elem]) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            if y != 0 {
                out[i + j] = f.add(out[i + j], f.mul(x, y));
            }
        }
    }
    trim(out)
}

/// Quotient and remainder; panics on division by zero.
pub fn divrem(f: &FiniteField, a: &[Elem], b: &[Elem]) -> (Poly, Poly) {
    let db = deg(b).expect("division by the zero polynomial");
    let lead_inv = f.inv(b[db]).unwrap();
    let mut r = trim(a.to_vec());
    if r.len() <= db {
        return (Vec::new(), r);
    }
    let mut q = vec![0; r.len() - db];
    while let Some(dr) = deg(&r) {
        if dr < db {
            break;
        }
        let c = f.mul(r[dr], lead_inv);
        q[dr - db] = c;
        for (j, &bj) in b.iter().enumerate() {
            if bj != 0 {
                r[dr - db + j] = f.sub(r[dr - db + j], f.mul(c, bj));
            }
        }
        r = trim(r);
    }
    (trim(q), r)
}

pub fn rem(f: &FiniteField, a: &[Elem], b: &[Elem]) -> Poly {
    divrem(f, a, b).1
}

pub fn monic(f: &FiniteField, a: &[Elem]) -> Poly {
    match a.last() {
        None => Vec::new(),
        Some(&c) => scale(f, f.inv(c).unwrap(), a),
    }
}

pub fn gcd(f: &FiniteField, a: &[Elem], b: &[Elem]) -> Poly {
    let mut a = trim(a.to_vec());
    let mut b = trim(b.to_vec());
    while !b.is_empty() {
        let r = rem(f, &a, &b);
        a = b;
        b = r;
    }
    monic(f, &a)
}

/// `(g, s, t)` with `s·a + t·b = g = gcd(a, b)` monic.
pub fn ext_gcd(f: &FiniteField, a: &[Elem], b: &[Elem]) -> (Poly, Poly, Poly) {
    let (mut r0, mut r1) = (trim(a.to_vec()), trim(b.to_vec()));
    let (mut s0, mut s1): (Poly, Poly) = (vec![1], Vec::new());
    let (mut t0, mut t1): (Poly, Poly) = (Vec::new(), vec![1]);
    while !r1.is_empty() {
        let (q, r) = divrem(f, &r0, &r1);
        let s2 = sub(f, &s0, &mul(f, &q, &s1));
        let t2 = sub(f, &t0, &mul(f, &q, &t1));
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    if let Some(&c) = r0.last() {
        let ci = f.inv(c).unwrap();
        (scale(f, ci, &r0), scale(f, ci, &s0), scale(f, ci, &t0))
    } else {
        (r0, s0, t0)
    }
}

pub fn mulmod(f: &FiniteField, a: &[Elem], b: &[Elem], m: &[Elem]) -> Poly {
    rem(f, &mul(f, a, b), m)
}

pub fn powmod(f: &FiniteField, a: &[Elem], mut e: u64, m: &[Elem]) -> Poly {
    let mut base = rem(f, a, m);
    let mut acc = rem(f, &[1], m);
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(f, &acc, &base, m);
        }
        base = mulmod(f, &base, &base, m);
        e >>= 1;
    }
    acc
}

pub fn derivative(f: &FiniteField, a: &[Elem]) -> Poly {
    if a.len() <= 1 {
        return Vec::new();
    }
    trim((1..a.len()).map(|i| f.mul(f.from_int(i as i64), a[i])).collect())
}

pub fn eval(f: &FiniteField, a: &[Elem], x: Elem) -> Elem {
    a.iter().rev().fold(0, |acc, &c| f.add(f.mul(acc, x), c))
}

/// `a(x)^{1/p}` for a polynomial whose derivative vanishes.
fn pth_root(f: &FiniteField, a: &[Elem]) -> Poly {
    let p = f.p() as usize;
    let e = (f.q() / f.p()) as u64; // a^{q/p} is the p-th root in F_q
    let n = (a.len() - 1) / p + 1;
    trim((0..n).map(|i| f.pow(*a.get(i * p).unwrap_or(&0), e)).collect())
}

/// Monic square-free factors with multiplicities.
fn squarefree(f: &FiniteField, a: &[Elem]) -> Vec<(Poly, u32)> {
    let mut out = Vec::new();
    if deg(a).unwrap_or(0) == 0 {
        return out;
    }
    let da = derivative(f, a);
    let mut c = gcd(f, a, &da);
    let mut w = divrem(f, a, &c).0;
    let mut i = 1;
    while !is_one(&w) {
        let y = gcd(f, &w, &c);
        let fac = divrem(f, &w, &y).0;
        if !is_one(&fac) {
            out.push((monic(f, &fac), i));
        }
        w = y;
        c = divrem(f, &c, &w).0;
        i += 1;
    }
    if !is_one(&c) {
        let root = pth_root(f, &c);
        for (g, m) in squarefree(f, &root) {
            out.push((g, m * f.p()));
        }
    }
    out
}

/// Splits a monic square-free polynomial into `(product, degree)` pairs.
fn distinct_degree(f: &FiniteField, a: &[Elem]) -> Vec<(Poly, usize)> {
    let mut out = Vec::new();
    let mut rest = a.to_vec();
    let mut h = x();
    let mut k = 1;
    while deg(&rest).unwrap_or(0) >= 2 * k {
        h = powmod(f, &h, f.q() as u64, &rest);
        let g = gcd(f, &sub(f, &h, &x()), &rest);
        if !is_one(&g) {
            out.push((g.clone(), k));
            rest = divrem(f, &rest, &g).0;
            h = rem(f, &h, &rest);
        }
        k += 1;
    }
    if deg(&rest).unwrap_or(0) > 0 {
        let d = deg(&rest).unwrap();
        out.push((rest, d));
    }
    out
}

/// Splits a monic product of distinct irreducibles of degree `k`.
fn equal_degree(f: &FiniteField, a: &[Elem], k: usize, rng: &mut ChaCha8Rng) -> Vec<Poly> {
    let n = deg(a).unwrap();
    if n == k {
        return vec![a.to_vec()];
    }
    loop {
        let r: Poly = trim((0..n).map(|_| rng.gen_range(0..f.q())).collect());
        if deg(&r).unwrap_or(0) == 0 {
            continue;
        }
        let b = if f.p() == 2 {
            // absolute trace from F_{q^k} to F_2
            let m = f.d() as usize * k;
            let mut t = rem(f, &r, a);
            let mut acc = t.clone();
            for _ in 1..m {
                t = mulmod(f, &t, &t, a);
                acc = add(f, &acc, &t);
            }
            acc
        } else {
            // r^{(q^k - 1)/2} = (r^{1 + q + … + q^{k-1}})^{(q-1)/2}
            let mut t = rem(f, &r, a);
            let mut prod = t.clone();
            for _ in 1..k {
                t = powmod(f, &t, f.q() as u64, a);
                prod = mulmod(f, &prod, &t, a);
            }
            sub(f, &powmod(f, &prod, ((f.q() - 1) / 2) as u64, a), &[1])
        };
        let g = gcd(f, &b, a);
        let dg = deg(&g).unwrap_or(0);
        if dg > 0 && dg < n {
            let h = divrem(f, a, &g).0;
            let mut out = equal_degree(f, &g, k, rng);
            out.extend(equal_degree(f, &monic(f, &h), k, rng));
            return out;
        }
    }
}

/// Complete factorization `a = unit · Π g_i^{m_i}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Factorization {
    pub unit: Elem,
    /// Monic irreducible factors with multiplicities, sorted.
    pub factors: Vec<(Poly, u32)>,
}

impl Factorization {
    pub fn expand(&self, f: &FiniteField) -> Poly {
        let mut acc = vec![self.unit];
        for (g, m) in &self.factors {
            for _ in 0..*m {
                acc = mul(f, &acc, g);
            }
        }
        trim(acc)
    }

    /// Factors listed with repetition.
    pub fn flat(&self) -> Vec<Poly> {
        self.factors
            .iter()
            .flat_map(|(g, m)| std::iter::repeat(g.clone()).take(*m as usize))
            .collect()
    }
}

/// Canonical order: by degree, then by coefficients from the top down.
fn canonical_cmp(a: &Poly, b: &Poly) -> std::cmp::Ordering {
    a.len().cmp(&b.len()).then_with(|| a.iter().rev().cmp(b.iter().rev()))
}

pub fn factor(f: &FiniteField, a: &[Elem]) -> Result<Factorization> {
    let a = trim(a.to_vec());
    let Some(&lead) = a.last() else {
        return Err(Error::Unsupported("cannot factor the zero polynomial".into()));
    };
    let m = monic(f, &a);
    // The factorization is unique, so the seed only affects running time.
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_f00d);
    let mut factors: Vec<(Poly, u32)> = Vec::new();
    for (sq, mult) in squarefree(f, &m) {
        for (part, k) in distinct_degree(f, &sq) {
            for g in equal_degree(f, &part, k, &mut rng) {
                factors.push((monic(f, &g), mult));
            }
        }
    }
    factors.sort_by(|x, y| canonical_cmp(&x.0, &y.0));
    // merge repeated factors coming from different square-free layers
    let mut merged: Vec<(Poly, u32)> = Vec::new();
    for (g, m) in factors {
        match merged.last_mut() {
            Some((h, k)) if *h == g => *k += m,
            _ => merged.push((g, m)),
        }
    }
    Ok(Factorization { unit: lead, factors: merged })
}

pub fn is_irreducible(f: &FiniteField, a: &[Elem]) -> bool {
    match deg(a) {
        None | Some(0) => false,
        Some(1) => true,
        Some(_) => {
            let fz = factor(f, a).expect("nonzero");
            fz.factors.len() == 1 && fz.factors[0].1 == 1
        }
    }
}

/// `u` with `u ≡ 1 mod a` and `u ≡ 0 mod b`, for coprime `a`, `b`.
pub fn crt_idempotent(f: &FiniteField, a: &[Elem], b: &[Elem]) -> Option<Poly> {
    let (g, _s, t) = ext_gcd(f, a, b);
    if !is_one(&g) {
        return None;
    }
    let ab = mul(f, a, b);
    Some(rem(f, &mul(f, &t, b), &ab))
}

pub fn to_string(a: &[Elem]) -> String {
    if a.is_empty() {
        return "0".into();
    }
    let mut terms = Vec::new();
    for (i, &c) in a.iter().enumerate().rev() {
        if c == 0 {
            continue;
        }
        let mono = match i {
            0 => String::new(),
            1 => "x".into(),
            _ => format!("x^{i}"),
        };
        terms.push(match (c, i) {
            (_, 0) => c.to_string(),
            (1, _) => mono,
            _ => format!("{c}*{mono}"),
        });
    }
    terms.join(" + ")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn flat_strings(f: &FiniteField, a: &[Elem]) -> Vec<String> {
        factor(f, a).unwrap().flat().iter().map(|g| to_string(g)).collect()
    }

    #[test]
    fn cube_minus_one_over_f2() {
        let f = FiniteField::prime(2).unwrap();
        assert_eq!(flat_strings(&f, &[1, 0, 0, 1]), vec!["x + 1", "x^2 + x + 1"]);
    }

    #[test]
    fn square_over_f3() {
        let f = FiniteField::prime(3).unwrap();
        assert_eq!(flat_strings(&f, &[0, 0, 1]), vec!["x", "x"]);
    }

    #[test]
    fn x4_x_1_irreducible() {
        let f = FiniteField::prime(2).unwrap();
        assert!(is_irreducible(&f, &[1, 1, 0, 0, 1]));
    }

    #[test]
    fn zero_is_rejected() {
        let f = FiniteField::prime(2).unwrap();
        assert!(factor(&f, &[]).is_err());
    }

    #[test]
    fn pth_powers_are_handled() {
        // (x^2 + x + 1)^2 (x+1)^3 over F_2
        let f = FiniteField::prime(2).unwrap();
        let g = mul(&f, &[1, 1, 1], &[1, 1, 1]);
        let h = mul(&f, &g, &mul(&f, &[1, 1], &mul(&f, &[1, 1], &[1, 1])));
        let fz = factor(&f, &h).unwrap();
        assert_eq!(fz.factors, vec![(vec![1, 1], 3), (vec![1, 1, 1], 2)]);
        assert_eq!(fz.expand(&f), h);
    }

    #[test]
    fn over_f4() {
        let f = FiniteField::new(2, 2).unwrap();
        // x^2 + x + 1 splits over F_4
        let fz = factor(&f, &[1, 1, 1]).unwrap();
        assert_eq!(fz.factors.len(), 2);
        assert_eq!(fz.expand(&f), vec![1, 1, 1]);
    }

    #[test]
    fn crt() {
        let f = FiniteField::prime(3).unwrap();
        let a = vec![1, 1]; // x + 1
        let b = vec![0, 1]; // x
        let u = crt_idempotent(&f, &a, &b).unwrap();
        assert!(rem(&f, &sub(&f, &u, &[1]), &a).is_empty());
        assert!(rem(&f, &u, &b).is_empty());
    }
}
