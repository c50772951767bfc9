//! Row-zero-convergent `Y×Y` matrices over a tower `R = lim R_n`, seen through
//! a window of rows.
//!
//! A known row carries finitely many entries (stored as canonical elements of
//! the top level `R_N`) and a precision `ℓ`: every entry outside the stored
//! columns lies in `K_ℓ = ker(R_N → R_ℓ)`, and stored entries only matter
//! modulo `K_ℓ`. Rows outside the window, or whose product cannot be
//! certified, are `None`.

pub mod contratensor;
pub mod transport;

use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::Elem;
use crate::linalg::{self, Matrix, Subspace};
use crate::tower::RingTower;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum IndexSet {
    Finite(usize),
    Omega,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Row {
    /// Entries in columns `0..entries.len()`, canonical modulo `K_precision`.
    pub entries: Vec<Vec<Elem>>,
    pub precision: usize,
}

/// Linear data for reducing `R_N` modulo each `K_ℓ` canonically.
#[derive(Clone, Debug)]
pub struct BaseRing {
    pub tower: RingTower,
    projections: Vec<Matrix>,
    kernels: Vec<Subspace>,
}

impl BaseRing {
    pub fn new(tower: RingTower) -> Arc<Self> {
        let top = tower.top();
        let projections = (0..=top).map(|n| tower.projection(top, n)).collect();
        let kernels = (0..=top).map(|n| tower.kernel(top, n)).collect();
        Arc::new(BaseRing { tower, projections, kernels })
    }

    /// A finite ring with the discrete topology.
    pub fn discrete(a: &crate::algebra::Algebra) -> Arc<Self> {
        Self::new(RingTower::new("discrete", vec![a.clone()], vec![], crate::tower::TowerIntent::Exact).expect("one level"))
    }

    pub fn top(&self) -> usize {
        self.tower.top()
    }

    pub fn ring(&self) -> &crate::algebra::Algebra {
        &self.tower.levels[self.top()]
    }

    pub fn kernel(&self, level: usize) -> &Subspace {
        &self.kernels[level]
    }

    /// Canonical representative of `v` modulo `K_level`.
    pub fn reduce(&self, v: &[Elem], level: usize) -> Vec<Elem> {
        self.kernels[level].reduce(self.ring().field(), v)
    }

    pub fn project(&self, v: &[Elem], level: usize) -> Vec<Elem> {
        self.projections[level].vec_mul(self.ring().field(), v)
    }

    pub fn vanishes_at(&self, v: &[Elem], level: usize) -> bool {
        self.kernels[level].contains(self.ring().field(), v)
    }
}

impl Row {
    pub(crate) fn normalize(mut self, base: &BaseRing) -> Row {
        for e in self.entries.iter_mut() {
            *e = base.reduce(e, self.precision);
        }
        while self.entries.last().is_some_and(|e| linalg::is_zero_vec(e)) {
            self.entries.pop();
        }
        self
    }

    /// `1 +` the last column whose entry is nonzero at `level`.
    pub fn support(&self, base: &BaseRing, level: usize) -> usize {
        self.entries.iter().rposition(|e| !base.vanishes_at(e, level)).map_or(0, |i| i + 1)
    }

    pub fn entry(&self, col: usize, dim: usize) -> Vec<Elem> {
        self.entries.get(col).cloned().unwrap_or_else(|| vec![0; dim])
    }

    /// The row modulo `K_level`, for `level ≤ precision`.
    pub fn at_level(&self, base: &BaseRing, level: usize) -> Row {
        Row { entries: self.entries.clone(), precision: level }.normalize(base)
    }
}

#[derive(Clone, Debug)]
pub struct WindowedMatrix {
    pub base: Arc<BaseRing>,
    pub index: IndexSet,
    pub rows: Vec<Option<Row>>,
}

/// Outcome of a windowed decision.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "result", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Decision {
    True,
    False,
    Undecided { window: usize },
}

impl WindowedMatrix {
    pub fn window(&self) -> usize {
        self.rows.len()
    }

    fn dim(&self) -> usize {
        self.base.ring().dim()
    }

    fn build(base: &Arc<BaseRing>, index: IndexSet, window: usize, mut entry: impl FnMut(usize, usize) -> Option<Vec<Elem>>, width: usize) -> Self {
        let top = base.top();
        let rows = (0..window)
            .map(|x| {
                let entries: Vec<Vec<Elem>> =
                    (0..width).map(|y| entry(x, y).unwrap_or_else(|| vec![0; base.ring().dim()])).collect();
                Some(Row { entries, precision: top }.normalize(base))
            })
            .collect();
        WindowedMatrix { base: base.clone(), index, rows }
    }

    fn size_for(index: IndexSet, window: usize) -> Result<(usize, usize)> {
        match index {
            IndexSet::Finite(n) => {
                if window != n {
                    return Err(Error::Window(format!("finite index set of size {n} needs window {n}")));
                }
                Ok((n, n))
            }
            IndexSet::Omega => Ok((window, window + 1)),
        }
    }

    pub fn identity(base: &Arc<BaseRing>, index: IndexSet, window: usize) -> Result<Self> {
        let (w, width) = Self::size_for(index, window)?;
        let one = base.ring().one();
        Ok(Self::build(base, index, w, |x, y| (x == y).then(|| one.clone()), width))
    }

    pub fn zero(base: &Arc<BaseRing>, index: IndexSet, window: usize) -> Result<Self> {
        let (w, width) = Self::size_for(index, window)?;
        Ok(Self::build(base, index, w, |_, _| None, width))
    }

    /// `r·E_ij`.
    pub fn elementary(base: &Arc<BaseRing>, index: IndexSet, window: usize, i: usize, j: usize, r: &[Elem]) -> Result<Self> {
        let (w, width) = Self::size_for(index, window)?;
        let width = width.max(j + 1);
        if let IndexSet::Finite(n) = index {
            if i >= n || j >= n {
                return Err(Error::Window(format!("E_{i}{j} is outside an index set of size {n}")));
            }
        }
        Ok(Self::build(base, index, w, |x, y| (x == i && y == j).then(|| r.to_vec()), width))
    }

    /// `S` with `S_{x, x+1} = 1`.
    pub fn shift(base: &Arc<BaseRing>, window: usize) -> Self {
        let one = base.ring().one();
        Self::build(base, IndexSet::Omega, window, |x, y| (y == x + 1).then(|| one.clone()), window + 1)
    }

    /// `Sᵀ` with `Sᵀ_{x+1, x} = 1`.
    pub fn shift_transpose(base: &Arc<BaseRing>, window: usize) -> Self {
        let one = base.ring().one();
        Self::build(base, IndexSet::Omega, window, |x, y| (x == y + 1).then(|| one.clone()), window)
    }

    /// Random rows supported in columns below `window`, with random precision.
    pub fn random<R: Rng>(base: &Arc<BaseRing>, index: IndexSet, window: usize, rng: &mut R) -> Result<Self> {
        let (w, _) = Self::size_for(index, window)?;
        let top = base.top();
        let ring = base.ring();
        let rows = (0..w)
            .map(|_| {
                let width = rng.gen_range(0..=w);
                let entries = (0..width)
                    .map(|_| if rng.gen_bool(0.4) { ring.zero() } else { ring.random_element(rng) })
                    .collect();
                let precision = if matches!(index, IndexSet::Finite(_)) { top } else { rng.gen_range(0..=top) };
                Some(Row { entries, precision }.normalize(base))
            })
            .collect();
        Ok(WindowedMatrix { base: base.clone(), index, rows })
    }

    /// A finite-index matrix from dense entries `entries[x][y] ∈ R_N`.
    pub fn from_dense(base: &Arc<BaseRing>, entries: &[Vec<Vec<Elem>>]) -> Self {
        let n = entries.len();
        Self::build(base, IndexSet::Finite(n), n, |x, y| Some(entries[x][y].clone()), n)
    }

    pub fn row(&self, x: usize) -> Option<&Row> {
        self.rows.get(x).and_then(|r| r.as_ref())
    }

    /// Entry `(x, y)` modulo `K_level`, if certified.
    pub fn entry_at(&self, x: usize, y: usize, level: usize) -> Option<Vec<Elem>> {
        let r = self.row(x)?;
        (level <= r.precision).then(|| self.base.reduce(&r.entry(y, self.dim()), level))
    }

    /// Restriction to the first `w` rows.
    pub fn restrict(&self, w: usize) -> Self {
        WindowedMatrix { base: self.base.clone(), index: self.index, rows: self.rows.iter().take(w).cloned().collect() }
    }

    pub fn certified_rows(&self) -> usize {
        self.rows.iter().filter(|r| r.is_some()).count()
    }
}

fn same_base(a: &WindowedMatrix, b: &WindowedMatrix) -> Result<()> {
    if !Arc::ptr_eq(&a.base, &b.base) && a.base.ring() != b.base.ring() {
        return Err(Error::Window("matrices over different base rings".into()));
    }
    if a.index != b.index {
        return Err(Error::Window("matrices over different index sets".into()));
    }
    Ok(())
}

/// Row `x` of `a·b`, or `None` if no precision can be certified.
fn product_row(a: &WindowedMatrix, b: &WindowedMatrix, x: usize) -> Option<Row> {
    let base = &a.base;
    let ring = base.ring();
    let ra = a.row(x)?;
    // the support shrinks with the level, so search from the top precision down
    for level in (0..=ra.precision).rev() {
        let s = ra.support(base, level);
        let ok = (0..s).all(|y| b.row(y).is_some_and(|rb| rb.precision >= level));
        if !ok {
            continue;
        }
        let width = (0..s).map(|y| b.row(y).unwrap().entries.len()).max().unwrap_or(0);
        let mut entries = vec![ring.zero(); width];
        for y in 0..s {
            let ay = &ra.entries[y];
            if base.vanishes_at(ay, level) {
                continue;
            }
            for (z, byz) in b.row(y).unwrap().entries.iter().enumerate() {
                let prod = ring.mul(ay, byz);
                entries[z] = ring.add(&entries[z], &prod);
            }
        }
        return Some(Row { entries, precision: level }.normalize(base));
    }
    None
}

/// `(ab)_{xz} = Σ_y a_{xy} b_{yz}` on the rows of `a`'s window. Uncertifiable
/// rows come back as `None`.
pub fn mat_mul(a: &WindowedMatrix, b: &WindowedMatrix) -> Result<WindowedMatrix> {
    same_base(a, b)?;
    let rows = (0..a.window()).map(|x| product_row(a, b, x)).collect();
    Ok(WindowedMatrix { base: a.base.clone(), index: a.index, rows })
}

/// One entry of `a·b` modulo `K_level`; an error if the window cannot certify it.
pub fn mat_mul_entry(a: &WindowedMatrix, b: &WindowedMatrix, x: usize, z: usize, level: usize) -> Result<Vec<Elem>> {
    same_base(a, b)?;
    let r = product_row(a, b, x).ok_or_else(|| Error::Window(format!("row {x} of the product is not certified")))?;
    if r.precision < level {
        return Err(Error::Window(format!("row {x} of the product is certified only up to level {}", r.precision)));
    }
    Ok(a.base.reduce(&r.entry(z, a.dim()), level))
}

/// Rows `x` certified in both, compared at the smaller precision.
pub fn agree_on_certified(a: &WindowedMatrix, b: &WindowedMatrix) -> (bool, usize) {
    let mut compared = 0;
    for x in 0..a.window().min(b.window()) {
        if let (Some(ra), Some(rb)) = (a.row(x), b.row(x)) {
            let l = ra.precision.min(rb.precision);
            if ra.at_level(&a.base, l) != rb.at_level(&b.base, l) {
                return (false, compared);
            }
            compared += 1;
        }
    }
    (true, compared)
}

/// `K_{X,I}`: matrices whose rows in `X` have all entries in the right ideal `I`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OpenMatrixIdeal {
    pub rows: Vec<usize>,
    /// A right ideal of `R_N`; it must contain `K_level` for some level.
    pub ideal: Subspace,
}

impl OpenMatrixIdeal {
    /// Smallest level `ℓ` with `K_ℓ ⊂ I`.
    pub fn open_level(&self, base: &BaseRing) -> Result<usize> {
        let f = base.ring().field();
        (0..=base.top())
            .find(|&l| self.ideal.contains_space(f, base.kernel(l)))
            .ok_or_else(|| Error::Window("the ideal is not open".into()))
    }
}

pub fn ideal_member(a: &WindowedMatrix, k: &OpenMatrixIdeal) -> Result<Decision> {
    let base = &a.base;
    let f = base.ring().field();
    let level = k.open_level(base)?;
    for &x in &k.rows {
        let Some(r) = a.row(x) else {
            return Ok(Decision::Undecided { window: a.window() });
        };
        if r.precision < level {
            return Ok(Decision::Undecided { window: a.window() });
        }
        if r.entries.iter().any(|e| !k.ideal.contains(f, e)) {
            return Ok(Decision::False);
        }
    }
    Ok(Decision::True)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::builtins::truncated_power;
    use crate::field::FiniteField;
    use crate::tower::adic_tower;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn f2() -> Arc<BaseRing> {
        BaseRing::discrete(&truncated_power(&FiniteField::prime(2).unwrap(), 1))
    }

    #[test]
    fn identity_is_a_unit() {
        let base = f2();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let a = WindowedMatrix::random(&base, IndexSet::Omega, 5, &mut rng).unwrap();
        let i = WindowedMatrix::identity(&base, IndexSet::Omega, 5).unwrap();
        let (ok, n) = agree_on_certified(&mat_mul(&i, &a).unwrap(), &a);
        assert!(ok && n == 5);
        let (ok, n) = agree_on_certified(&mat_mul(&a, &i).unwrap(), &a);
        assert!(ok && n == 5);
    }

    #[test]
    fn delta_rule() {
        let base = f2();
        let one = vec![1];
        let e12 = WindowedMatrix::elementary(&base, IndexSet::Finite(4), 4, 0, 1, &one).unwrap();
        let e23 = WindowedMatrix::elementary(&base, IndexSet::Finite(4), 4, 1, 2, &one).unwrap();
        let e13 = WindowedMatrix::elementary(&base, IndexSet::Finite(4), 4, 0, 2, &one).unwrap();
        assert!(agree_on_certified(&mat_mul(&e12, &e23).unwrap(), &e13).0);
        let zero = WindowedMatrix::zero(&base, IndexSet::Finite(4), 4).unwrap();
        assert!(agree_on_certified(&mat_mul(&e12, &e13).unwrap(), &zero).0);
    }

    #[test]
    fn shifts() {
        let base = f2();
        let w = 6;
        let s = WindowedMatrix::shift(&base, w + 1);
        let st = WindowedMatrix::shift_transpose(&base, w + 1);
        let sst = mat_mul(&s.restrict(w), &st).unwrap();
        let id = WindowedMatrix::identity(&base, IndexSet::Omega, w).unwrap();
        assert_eq!(agree_on_certified(&sst, &id), (true, w));
        let sts = mat_mul(&st.restrict(w), &s).unwrap();
        let e00 = WindowedMatrix::elementary(&base, IndexSet::Omega, w, 0, 0, &[1]).unwrap();
        for x in 0..w {
            let want: Vec<Vec<Elem>> = (0..=w).map(|z| {
                let i = u32::from(x == z);
                let e = e00.entry_at(x, z, 0).unwrap()[0];
                vec![i ^ e]
            }).collect();
            let got: Vec<Vec<Elem>> = (0..=w).map(|z| sts.entry_at(x, z, 0).unwrap()).collect();
            assert_eq!(got, want, "row {x}");
        }
    }

    #[test]
    fn short_window_is_undecided() {
        let base = f2();
        let s = WindowedMatrix::shift(&base, 4);
        let st = WindowedMatrix::shift_transpose(&base, 4);
        let p = mat_mul(&s, &st).unwrap();
        assert!(p.row(3).is_none());
        assert!(matches!(mat_mul_entry(&s, &st, 3, 3, 0), Err(Error::Window(_))));
    }

    #[test]
    fn ideal_membership() {
        let base = f2();
        let k = OpenMatrixIdeal { rows: vec![0], ideal: Subspace::zero(1) };
        let zero = WindowedMatrix::zero(&base, IndexSet::Finite(3), 3).unwrap();
        assert_eq!(ideal_member(&zero, &k).unwrap(), Decision::True);
        let e11 = WindowedMatrix::elementary(&base, IndexSet::Finite(3), 3, 0, 0, &[1]).unwrap();
        assert_eq!(ideal_member(&e11, &k).unwrap(), Decision::False);

        let t = adic_tower(2, 2).unwrap();
        let dual = BaseRing::new(t);
        let xideal = dual.kernel(0).clone();
        let k = OpenMatrixIdeal { rows: vec![0], ideal: xideal };
        let m = WindowedMatrix::elementary(&dual, IndexSet::Omega, 4, 0, 2, &[0, 1]).unwrap();
        assert_eq!(ideal_member(&m, &k).unwrap(), Decision::True);
        let far = OpenMatrixIdeal { rows: vec![9], ideal: k.ideal.clone() };
        assert!(matches!(ideal_member(&m, &far).unwrap(), Decision::Undecided { .. }));
    }
}
