//! Dense linear algebra over a `FiniteField`.
//!
//! Vectors are rows. A matrix `M` acts on row vectors by `v ↦ v·M`, and
//! subspaces are stored as reduced row echelon bases.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Elem, FiniteField};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Matrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Elem>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<Elem>], cols: usize) -> Self {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "row length mismatch");
            data.extend_from_slice(r);
        }
        Matrix { rows: rows.len(), cols, data }
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Elem {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Elem) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Elem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<Elem>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn col(&self, j: usize) -> Vec<Elem> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j);
            }
        }
        t
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn mul(&self, f: &FiniteField, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "matrix product shape mismatch");
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                let orow = other.row(k);
                let base = i * other.cols;
                for j in 0..other.cols {
                    let b = orow[j];
                    if b != 0 {
                        out.data[base + j] = f.add(out.data[base + j], f.mul(a, b));
                    }
                }
            }
        }
        out
    }

    pub fn add(&self, f: &FiniteField, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(&a, &b)| f.add(a, b)).collect(),
        }
    }

    pub fn sub(&self, f: &FiniteField, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(&a, &b)| f.sub(a, b)).collect(),
        }
    }

    pub fn scale(&self, f: &FiniteField, c: Elem) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|&a| f.mul(a, c)).collect() }
    }

    /// Row vector times matrix.
    pub fn vec_mul(&self, f: &FiniteField, v: &[Elem]) -> Vec<Elem> {
        assert_eq!(v.len(), self.rows, "vector length mismatch");
        let mut out = vec![0; self.cols];
        for (k, &a) in v.iter().enumerate() {
            if a == 0 {
                continue;
            }
            let r = self.row(k);
            for j in 0..self.cols {
                if r[j] != 0 {
                    out[j] = f.add(out[j], f.mul(a, r[j]));
                }
            }
        }
        out
    }

    /// Matrix times column vector.
    pub fn mul_vec(&self, f: &FiniteField, v: &[Elem]) -> Vec<Elem> {
        assert_eq!(v.len(), self.cols, "vector length mismatch");
        (0..self.rows).map(|i| dot(f, self.row(i), v)).collect()
    }

    /// Stack `self` on top of `other`.
    pub fn vstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Matrix { rows: self.rows + other.rows, cols: self.cols, data }
    }

    pub fn hstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.rows, other.rows);
        let mut m = Matrix::zeros(self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(i, j, self.get(i, j));
            }
            for j in 0..other.cols {
                m.set(i, self.cols + j, other.get(i, j));
            }
        }
        m
    }
}

pub fn dot(f: &FiniteField, a: &[Elem], b: &[Elem]) -> Elem {
    let mut s = 0;
    for (&x, &y) in a.iter().zip(b) {
        if x != 0 && y != 0 {
            s = f.add(s, f.mul(x, y));
        }
    }
    s
}

pub fn vadd(f: &FiniteField, a: &[Elem], b: &[Elem]) -> Vec<Elem> {
    a.iter().zip(b).map(|(&x, &y)| f.add(x, y)).collect()
}

pub fn vsub(f: &FiniteField, a: &[Elem], b: &[Elem]) -> Vec<Elem> {
    a.iter().zip(b).map(|(&x, &y)| f.sub(x, y)).collect()
}

pub fn vscale(f: &FiniteField, c: Elem, a: &[Elem]) -> Vec<Elem> {
    a.iter().map(|&x| f.mul(c, x)).collect()
}

/// `a + c·b` in place.
pub fn vaxpy(f: &FiniteField, a: &mut [Elem], c: Elem, b: &[Elem]) {
    if c == 0 {
        return;
    }
    for (x, &y) in a.iter_mut().zip(b) {
        if y != 0 {
            *x = f.add(*x, f.mul(c, y));
        }
    }
}

pub fn is_zero_vec(v: &[Elem]) -> bool {
    v.iter().all(|&x| x == 0)
}

pub fn unit_vec(n: usize, i: usize) -> Vec<Elem> {
    let mut v = vec![0; n];
    v[i] = 1;
    v
}

/// Index of a vector in the enumeration `Σ v_i q^i`.
pub fn vec_index(v: &[Elem], q: u32) -> usize {
    v.iter().rev().fold(0usize, |acc, &c| acc * q as usize + c as usize)
}

pub fn vec_from_index(mut idx: usize, q: u32, n: usize) -> Vec<Elem> {
    let mut v = Vec::with_capacity(n);
    for _ in 0..n {
        v.push((idx % q as usize) as Elem);
        idx /= q as usize;
    }
    v
}

/// `q^n`, or `None` when it exceeds `limit`.
pub fn space_size(q: u32, n: usize, limit: usize) -> Option<usize> {
    let mut s: usize = 1;
    for _ in 0..n {
        s = s.checked_mul(q as usize)?;
        if s > limit {
            return None;
        }
    }
    Some(s)
}

/// Reduced row echelon form.
#[derive(Clone, Debug)]
pub struct Rref {
    /// The reduced matrix with zero rows removed.
    pub matrix: Matrix,
    pub pivots: Vec<usize>,
}

impl Rref {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

pub fn rref(f: &FiniteField, m: &Matrix) -> Rref {
    let mut a = m.clone();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..a.cols {
        if r == a.rows {
            break;
        }
        let Some(piv) = (r..a.rows).find(|&i| a.get(i, c) != 0) else { continue };
        if piv != r {
            for j in 0..a.cols {
                a.data.swap(piv * a.cols + j, r * a.cols + j);
            }
        }
        let inv = f.inv(a.get(r, c)).unwrap();
        for j in c..a.cols {
            let v = a.get(r, j);
            a.set(r, j, f.mul(v, inv));
        }
        let prow: Vec<Elem> = a.row(r).to_vec();
        for i in 0..a.rows {
            if i == r {
                continue;
            }
            let factor = a.get(i, c);
            if factor == 0 {
                continue;
            }
            let nf = f.neg(factor);
            let start = i * a.cols;
            for j in c..a.cols {
                if prow[j] != 0 {
                    a.data[start + j] = f.add(a.data[start + j], f.mul(nf, prow[j]));
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    a.data.truncate(r * a.cols);
    a.rows = r;
    Rref { matrix: a, pivots }
}

pub fn rank(f: &FiniteField, m: &Matrix) -> usize {
    rref(f, m).rank()
}

/// Basis of `{x : m·x = 0}`.
pub fn right_kernel(f: &FiniteField, m: &Matrix) -> Vec<Vec<Elem>> {
    let r = rref(f, m);
    let n = m.cols;
    let mut is_pivot = vec![false; n];
    for &p in &r.pivots {
        is_pivot[p] = true;
    }
    let mut basis = Vec::new();
    for free in (0..n).filter(|&j| !is_pivot[j]) {
        let mut x = vec![0; n];
        x[free] = 1;
        for (row, &p) in r.pivots.iter().enumerate() {
            x[p] = f.neg(r.matrix.get(row, free));
        }
        basis.push(x);
    }
    basis
}

/// Basis of `{v : v·m = 0}`.
pub fn left_kernel(f: &FiniteField, m: &Matrix) -> Vec<Vec<Elem>> {
    right_kernel(f, &m.transpose())
}

/// Some `x` with `m·x = b`.
pub fn solve_right(f: &FiniteField, m: &Matrix, b: &[Elem]) -> Option<Vec<Elem>> {
    assert_eq!(b.len(), m.rows);
    let aug = m.hstack(&Matrix { rows: b.len(), cols: 1, data: b.to_vec() });
    let r = rref(f, &aug);
    if r.pivots.last() == Some(&m.cols) {
        return None;
    }
    let mut x = vec![0; m.cols];
    for (row, &p) in r.pivots.iter().enumerate() {
        x[p] = r.matrix.get(row, m.cols);
    }
    Some(x)
}

/// Some `v` with `v·m = b`.
pub fn solve_left(f: &FiniteField, m: &Matrix, b: &[Elem]) -> Option<Vec<Elem>> {
    solve_right(f, &m.transpose(), b)
}

pub fn inverse(f: &FiniteField, m: &Matrix) -> Option<Matrix> {
    if m.rows != m.cols {
        return None;
    }
    let n = m.rows;
    let r = rref(f, &m.hstack(&Matrix::identity(n)));
    if r.rank() < n || r.pivots[n - 1] != n - 1 {
        return None;
    }
    let mut inv = Matrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            inv.set(i, j, r.matrix.get(i, n + j));
        }
    }
    Some(inv)
}

/// A subspace of `F^n`, stored by its canonical reduced echelon basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Subspace {
    pub ambient: usize,
    pub basis: Matrix,
    pub pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(n: usize) -> Self {
        Subspace { ambient: n, basis: Matrix::zeros(0, n), pivots: Vec::new() }
    }

    pub fn full(n: usize) -> Self {
        Subspace { ambient: n, basis: Matrix::identity(n), pivots: (0..n).collect() }
    }

    pub fn span(f: &FiniteField, n: usize, vectors: &[Vec<Elem>]) -> Self {
        if vectors.is_empty() {
            return Self::zero(n);
        }
        let r = rref(f, &Matrix::from_rows(vectors, n));
        Subspace { ambient: n, basis: r.matrix, pivots: r.pivots }
    }

    pub fn from_matrix(f: &FiniteField, m: &Matrix) -> Self {
        let r = rref(f, m);
        Subspace { ambient: m.cols, basis: r.matrix, pivots: r.pivots }
    }

    pub fn dim(&self) -> usize {
        self.pivots.len()
    }

    pub fn is_zero(&self) -> bool {
        self.pivots.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.pivots.len() == self.ambient
    }

    pub fn vectors(&self) -> Vec<Vec<Elem>> {
        self.basis.row_vecs()
    }

    /// Remainder of `v` after clearing the pivot coordinates.
    pub fn reduce(&self, f: &FiniteField, v: &[Elem]) -> Vec<Elem> {
        let mut w = v.to_vec();
        for (row, &p) in self.pivots.iter().enumerate() {
            let c = w[p];
            if c != 0 {
                vaxpy(f, &mut w, f.neg(c), self.basis.row(row));
            }
        }
        w
    }

    pub fn contains(&self, f: &FiniteField, v: &[Elem]) -> bool {
        is_zero_vec(&self.reduce(f, v))
    }

    pub fn contains_space(&self, f: &FiniteField, other: &Subspace) -> bool {
        (0..other.dim()).all(|i| self.contains(f, other.basis.row(i)))
    }

    /// Coordinates of a member in the echelon basis.
    pub fn coords(&self, f: &FiniteField, v: &[Elem]) -> Option<Vec<Elem>> {
        if !self.contains(f, v) {
            return None;
        }
        Some(self.pivots.iter().map(|&p| v[p]).collect())
    }

    pub fn from_coords(&self, f: &FiniteField, c: &[Elem]) -> Vec<Elem> {
        let mut v = vec![0; self.ambient];
        for (row, &x) in c.iter().enumerate() {
            vaxpy(f, &mut v, x, self.basis.row(row));
        }
        v
    }

    pub fn sum(&self, f: &FiniteField, other: &Subspace) -> Subspace {
        Subspace::from_matrix(f, &self.basis.vstack(&other.basis))
    }

    pub fn intersect(&self, f: &FiniteField, other: &Subspace) -> Subspace {
        if self.is_zero() || other.is_zero() {
            return Subspace::zero(self.ambient);
        }
        let stacked = self.basis.vstack(&other.basis);
        let ker = left_kernel(f, &stacked);
        let vs: Vec<Vec<Elem>> = ker
            .iter()
            .map(|c| {
                let a = &c[..self.dim()];
                self.basis.vec_mul(f, a)
            })
            .collect();
        Subspace::span(f, self.ambient, &vs)
    }

    /// Non-pivot coordinates, used as a basis of a complement.
    pub fn free_columns(&self) -> Vec<usize> {
        let mut piv = vec![false; self.ambient];
        for &p in &self.pivots {
            piv[p] = true;
        }
        (0..self.ambient).filter(|&j| !piv[j]).collect()
    }

    /// Coordinates of the class of `v` in `F^n / self`, in the basis of free columns.
    pub fn quotient_coords(&self, f: &FiniteField, v: &[Elem]) -> Vec<Elem> {
        let r = self.reduce(f, v);
        self.free_columns().iter().map(|&j| r[j]).collect()
    }

    /// The section `F^n/self -> F^n` supported on the free columns.
    pub fn quotient_lift(&self, c: &[Elem]) -> Vec<Elem> {
        let mut v = vec![0; self.ambient];
        for (&j, &x) in self.free_columns().iter().zip(c) {
            v[j] = x;
        }
        v
    }

    /// Enumerate every element (caller bounds the size).
    pub fn elements(&self, f: &FiniteField) -> Vec<Vec<Elem>> {
        let k = self.dim();
        let total = (f.q() as usize).pow(k as u32);
        (0..total).map(|i| self.from_coords(f, &vec_from_index(i, f.q(), k))).collect()
    }

    /// Image under `v ↦ v·m`.
    pub fn image(&self, f: &FiniteField, m: &Matrix) -> Subspace {
        let vs: Vec<Vec<Elem>> = self.vectors().iter().map(|v| m.vec_mul(f, v)).collect();
        Subspace::span(f, m.cols, &vs)
    }

    /// Preimage under `v ↦ v·m` of `target`.
    pub fn preimage(f: &FiniteField, m: &Matrix, target: &Subspace) -> Subspace {
        // v·m ∈ target  ⇔  (v·m)·C = 0 for a matrix C whose kernel is target
        let comp = target.annihilator(f);
        let c = Matrix::from_rows(&comp, target.ambient).transpose();
        let mc = if comp.is_empty() { Matrix::zeros(m.rows, 0) } else { m.mul(f, &c) };
        if mc.cols == 0 {
            return Subspace::full(m.rows);
        }
        Subspace::span(f, m.rows, &left_kernel(f, &mc))
    }

    /// Some `v ∈ source` with `v·m = target`.
    pub fn preimage_vector(f: &FiniteField, m: &Matrix, source: &Subspace, target: &[Elem]) -> Option<Vec<Elem>> {
        if source.is_zero() {
            return is_zero_vec(target).then(|| vec![0; m.rows]);
        }
        let c = solve_left(f, &source.basis.mul(f, m), target)?;
        Some(source.basis.vec_mul(f, &c))
    }

    /// Basis of the linear functionals (as vectors `c` with `v·c = 0`) vanishing on self.
    pub fn annihilator(&self, f: &FiniteField) -> Vec<Vec<Elem>> {
        if self.is_zero() {
            return (0..self.ambient).map(|i| unit_vec(self.ambient, i)).collect();
        }
        right_kernel(f, &self.basis)
    }
}

pub fn check_dims(what: &str, got: usize, want: usize) -> Result<()> {
    if got != want {
        return Err(Error::Dimension(format!("{what}: expected {want}, got {got}")));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_over_f3_has_full_rank() {
        let f = FiniteField::prime(3).unwrap();
        let r = rref(&f, &Matrix::identity(3));
        assert_eq!(r.rank(), 3);
        assert!(right_kernel(&f, &Matrix::identity(3)).is_empty());
    }

    #[test]
    fn zero_matrix_has_rank_zero() {
        let f = FiniteField::prime(2).unwrap();
        let z = Matrix::zeros(2, 2);
        assert_eq!(rank(&f, &z), 0);
        assert_eq!(right_kernel(&f, &z).len(), 2);
    }

    #[test]
    fn solve_and_inverse() {
        let f = FiniteField::prime(5).unwrap();
        let m = Matrix::from_rows(&[vec![1, 2], vec![3, 4]], 2);
        let inv = inverse(&f, &m).unwrap();
        assert_eq!(m.mul(&f, &inv), Matrix::identity(2));
        let x = solve_right(&f, &m, &[1, 0]).unwrap();
        assert_eq!(m.mul_vec(&f, &x), vec![1, 0]);
        let sing = Matrix::from_rows(&[vec![1, 2], vec![2, 4]], 2);
        assert!(inverse(&f, &sing).is_none());
        assert!(solve_right(&f, &sing, &[1, 0]).is_none());
    }

    #[test]
    fn intersection_and_preimage() {
        let f = FiniteField::prime(2).unwrap();
        let u = Subspace::span(&f, 3, &[vec![1, 0, 0], vec![0, 1, 0]]);
        let w = Subspace::span(&f, 3, &[vec![0, 1, 0], vec![0, 0, 1]]);
        let i = u.intersect(&f, &w);
        assert_eq!(i.vectors(), vec![vec![0, 1, 0]]);
        let proj = Matrix::from_rows(&[vec![1, 0], vec![0, 0], vec![0, 1]], 2);
        let target = Subspace::span(&f, 2, &[vec![1, 0]]);
        let pre = Subspace::preimage(&f, &proj, &target);
        assert_eq!(pre.dim(), 2);
        assert!(pre.contains(&f, &[0, 1, 0]));
    }
}
