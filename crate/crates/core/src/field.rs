//! Finite fields `F_q`, `q = p^d`, given by a monic irreducible polynomial.
//!
//! Elements are `u32` codes: the base-`p` digits of a code are the
//! coefficients of the element in the power basis `1, α, …, α^{d-1}`.
//! Extension fields multiply through log/exp tables.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

pub type Elem = u32;

/// Largest supported order of a proper extension field.
pub const MAX_EXTENSION_ORDER: u32 = 1 << 12;

#[derive(Clone)]
pub struct FiniteField {
    inner: Arc<Inner>,
}

struct Inner {
    p: u32,
    d: u32,
    q: u32,
    modulus: Vec<u32>,
    exp: Vec<u32>,
    log: Vec<u32>,
}

impl PartialEq for FiniteField {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (self.inner.p == other.inner.p && self.inner.modulus == other.inner.modulus)
    }
}
impl Eq for FiniteField {}

impl fmt::Debug for FiniteField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.inner.d == 1 {
            write!(f, "F_{}", self.inner.p)
        } else {
            write!(f, "F_{}[{:?}]", self.inner.p, self.inner.modulus)
        }
    }
}

fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut i = 2u64;
    while i * i <= p as u64 {
        if p as u64 % i == 0 {
            return false;
        }
        i += 1;
    }
    true
}

// Polynomial helpers over F_p on coefficient vectors (low to high).
fn pmul_mod(a: &[u32], b: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let d = m.len() - 1;
    let mut prod = vec![0u64; a.len() + b.len()];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p as u64;
        }
    }
    for k in (d..prod.len()).rev() {
        let c = prod[k];
        if c == 0 {
            continue;
        }
        prod[k] = 0;
        for t in 0..d {
            let sub = c * m[t] as u64 % p as u64;
            prod[k - d + t] = (prod[k - d + t] + p as u64 - sub) % p as u64;
        }
    }
    prod.truncate(d);
    prod.resize(d, 0);
    prod.into_iter().map(|x| x as u32).collect()
}

fn digits(mut a: u32, p: u32, d: u32) -> Vec<u32> {
    let mut v = Vec::with_capacity(d as usize);
    for _ in 0..d {
        v.push(a % p);
        a /= p;
    }
    v
}

fn undigits(v: &[u32], p: u32) -> u32 {
    v.iter().rev().fold(0, |acc, &c| acc * p + c)
}

/// Trial division by every monic polynomial of degree `1..=deg/2`.
fn is_irreducible_prime(m: &[u32], p: u32) -> bool {
    let deg = m.len() - 1;
    if deg <= 1 {
        return true;
    }
    for k in 1..=deg / 2 {
        let count = (p as u64).pow(k as u32);
        for code in 0..count {
            let mut g: Vec<u32> = Vec::with_capacity(k + 1);
            let mut c = code;
            for _ in 0..k {
                g.push((c % p as u64) as u32);
                c /= p as u64;
            }
            g.push(1);
            if prem(m, &g, p).iter().all(|&x| x == 0) {
                return false;
            }
        }
    }
    true
}

fn prem(a: &[u32], g: &[u32], p: u32) -> Vec<u32> {
    let mut r: Vec<u64> = a.iter().map(|&x| x as u64).collect();
    let k = g.len() - 1;
    if r.len() <= k {
        return a.to_vec();
    }
    for i in (k..r.len()).rev() {
        let c = r[i] % p as u64;
        if c == 0 {
            continue;
        }
        for t in 0..=k {
            let sub = c * g[t] as u64 % p as u64;
            r[i - k + t] = (r[i - k + t] + p as u64 - sub) % p as u64;
        }
    }
    r.truncate(k);
    r.into_iter().map(|x| x as u32).collect()
}

impl FiniteField {
    /// The prime field `F_p`.
    pub fn prime(p: u32) -> Result<Self> {
        Self::with_modulus(p, &[0, 1])
    }

    /// `F_{p^d}` with the lexicographically first monic irreducible modulus.
    pub fn new(p: u32, d: u32) -> Result<Self> {
        if d == 0 {
            return Err(Error::Field("degree must be positive".into()));
        }
        if d == 1 {
            return Self::prime(p);
        }
        if !is_prime(p) {
            return Err(Error::Field(format!("{p} is not prime")));
        }
        let count = (p as u64).pow(d);
        for code in 0..count {
            let mut m = digits(code as u32, p, d);
            m.push(1);
            if m[0] != 0 && is_irreducible_prime(&m, p) {
                return Self::with_modulus(p, &m);
            }
        }
        Err(Error::Field(format!("no irreducible polynomial of degree {d} over F_{p}")))
    }

    /// Field with an explicit monic modulus (coefficients low to high).
    pub fn with_modulus(p: u32, modulus: &[u32]) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::Field(format!("{p} is not prime")));
        }
        if p > 46_000 {
            return Err(Error::Field(format!("characteristic {p} too large")));
        }
        if modulus.len() < 2 || *modulus.last().unwrap() != 1 {
            return Err(Error::Field("modulus must be monic of positive degree".into()));
        }
        if modulus.iter().any(|&c| c >= p) {
            return Err(Error::Field("modulus coefficient out of range".into()));
        }
        let d = (modulus.len() - 1) as u32;
        let q = (p as u64).pow(d);
        if d > 1 && q > MAX_EXTENSION_ORDER as u64 {
            return Err(Error::Field(format!("extension field of order {q} is too large")));
        }
        let q = q as u32;
        if d > 1 && !is_irreducible_prime(modulus, p) {
            return Err(Error::Field(format!("modulus {modulus:?} is reducible over F_{p}")));
        }
        let (exp, log) = if d > 1 {
            build_tables(p, d, q, modulus)?
        } else {
            (Vec::new(), Vec::new())
        };
        Ok(FiniteField {
            inner: Arc::new(Inner { p, d, q, modulus: modulus.to_vec(), exp, log }),
        })
    }

    pub fn p(&self) -> u32 {
        self.inner.p
    }
    pub fn d(&self) -> u32 {
        self.inner.d
    }
    pub fn q(&self) -> u32 {
        self.inner.q
    }
    pub fn modulus(&self) -> &[u32] {
        &self.inner.modulus
    }
    pub fn is_prime_field(&self) -> bool {
        self.inner.d == 1
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        let p = self.inner.p;
        if self.inner.d == 1 {
            let s = a + b;
            if s >= p {
                s - p
            } else {
                s
            }
        } else {
            let (mut a, mut b) = (a, b);
            let mut out = 0;
            let mut place = 1;
            for _ in 0..self.inner.d {
                out += ((a % p + b % p) % p) * place;
                a /= p;
                b /= p;
                place *= p;
            }
            out
        }
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        let p = self.inner.p;
        if self.inner.d == 1 {
            if a == 0 {
                0
            } else {
                p - a
            }
        } else {
            let mut a = a;
            let mut out = 0;
            let mut place = 1;
            for _ in 0..self.inner.d {
                out += ((p - a % p) % p) * place;
                a /= p;
                place *= p;
            }
            out
        }
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if self.inner.d == 1 {
            ((a as u64 * b as u64) % self.inner.p as u64) as u32
        } else {
            if a == 0 || b == 0 {
                return 0;
            }
            let n = self.inner.q - 1;
            let l = (self.inner.log[a as usize] + self.inner.log[b as usize]) % n;
            self.inner.exp[l as usize]
        }
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: Elem) -> Option<Elem> {
        if a == 0 {
            return None;
        }
        if self.inner.d == 1 {
            Some(self.pow(a, (self.inner.p - 2) as u64))
        } else {
            let n = self.inner.q - 1;
            let l = self.inner.log[a as usize];
            Some(self.inner.exp[((n - l) % n) as usize])
        }
    }

    pub fn pow(&self, a: Elem, mut e: u64) -> Elem {
        let mut base = a;
        let mut acc = 1;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Image of an integer under `Z -> F_p ⊆ F_q`.
    pub fn from_int(&self, n: i64) -> Elem {
        n.rem_euclid(self.inner.p as i64) as u32
    }

    /// Prime-field coordinates of `a` in the power basis.
    pub fn to_digits(&self, a: Elem) -> Vec<u32> {
        digits(a, self.inner.p, self.inner.d)
    }

    pub fn from_digits(&self, v: &[u32]) -> Elem {
        undigits(v, self.inner.p)
    }

    /// The generator `α` of the power basis (equal to `1`'s successor code `p`).
    pub fn alpha(&self) -> Elem {
        if self.inner.d == 1 {
            // any element works as the power basis is just {1}
            1
        } else {
            self.inner.p
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        0..self.inner.q
    }
}

fn build_tables(p: u32, d: u32, q: u32, m: &[u32]) -> Result<(Vec<u32>, Vec<u32>)> {
    let n = q - 1;
    for g in 2..q {
        let gd = digits(g, p, d);
        let mut exp = Vec::with_capacity(n as usize);
        let mut cur = digits(1, p, d);
        let mut ok = true;
        for i in 0..n {
            let code = undigits(&cur, p);
            if i > 0 && code == 1 {
                ok = false;
                break;
            }
            exp.push(code);
            cur = pmul_mod(&cur, &gd, m, p);
        }
        if ok && undigits(&cur, p) == 1 {
            let mut log = vec![0u32; q as usize];
            for (i, &e) in exp.iter().enumerate() {
                log[e as usize] = i as u32;
            }
            return Ok((exp, log));
        }
    }
    Err(Error::Field("no primitive element found".into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_arithmetic() {
        let f = FiniteField::prime(5).unwrap();
        assert_eq!(f.add(3, 4), 2);
        assert_eq!(f.mul(3, 4), 2);
        assert_eq!(f.inv(2), Some(3));
        assert_eq!(f.neg(0), 0);
        assert_eq!(f.sub(1, 3), 3);
    }

    #[test]
    fn f4_is_a_field() {
        let f = FiniteField::new(2, 2).unwrap();
        assert_eq!(f.modulus(), &[1, 1, 1]);
        for a in 1..4 {
            assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
        }
        // α^2 = α + 1
        let a = f.alpha();
        assert_eq!(f.mul(a, a), f.add(a, 1));
    }

    #[test]
    fn rejects_reducible_modulus() {
        assert!(FiniteField::with_modulus(2, &[1, 0, 1]).is_err());
        assert!(FiniteField::prime(4).is_err());
    }

    #[test]
    fn f9_distributes() {
        let f = FiniteField::new(3, 2).unwrap();
        for a in f.elements() {
            for b in f.elements() {
                for c in [0, 1, 4, 8] {
                    assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                }
            }
        }
    }
}
