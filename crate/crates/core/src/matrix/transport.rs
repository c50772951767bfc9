//! The transports `V_Y` (discrete right modules to row modules) and `𝕍_Y`
//! (left modules to column contramodules) for a finite ring `R` and finite `Y`,
//! plus windowed versions for `Y = ω`.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{BaseRing, WindowedMatrix};
use crate::algebra::builtins::matrix_over;
use crate::algebra::Algebra;
use crate::error::{Error, Result};
use crate::field::Elem;
use crate::linalg::{self, Matrix, Subspace};
use crate::module::{hom_space, FiniteModule, Side};

/// `Mat_s(R)` with basis `E_ij ⊗ r_t` at index `(i·s + j)·dim R + t`.
pub fn matrix_ring(r: &Algebra, s: usize) -> Arc<Algebra> {
    Arc::new(matrix_over(r, s))
}

fn block_action(m: &FiniteModule, s: usize, transpose: bool) -> Vec<Matrix> {
    let (d, rd) = (m.dim, m.algebra.dim());
    let mut out = Vec::with_capacity(s * s * rd);
    for i in 0..s {
        for j in 0..s {
            for t in 0..rd {
                let mut big = Matrix::zeros(s * d, s * d);
                let (bi, bj) = if transpose { (j, i) } else { (i, j) };
                for r in 0..d {
                    for c in 0..d {
                        big.set(bi * d + r, bj * d + c, m.action[t].get(r, c));
                    }
                }
                out.push(big);
            }
        }
    }
    out
}

/// `V_Y(N) = N^Y` with `(m·a)_y = Σ_x m_x a_{xy}`.
pub fn transport_discrete(n: &FiniteModule, s: usize) -> Result<FiniteModule> {
    if n.side != Side::Right {
        return Err(Error::Module("V_Y takes a right module".into()));
    }
    let mat = matrix_ring(&n.algebra, s);
    FiniteModule::new_unchecked(mat, Side::Right, s * n.dim, block_action(n, s, false))
}

/// `𝕍_Y(C) = C^Y` with `(a·c)_x = Σ_y a_{xy} c_y`.
pub fn transport_contra(c: &FiniteModule, s: usize) -> Result<FiniteModule> {
    if c.side != Side::Left {
        return Err(Error::Module("the contra transport takes a left module".into()));
    }
    let mat = matrix_ring(&c.algebra, s);
    FiniteModule::new_unchecked(mat, Side::Left, s * c.dim, block_action(c, s, true))
}

/// `diag(f, …, f)`: the image of a homomorphism under either transport.
pub fn transport_morphism(f: &Matrix, s: usize) -> Matrix {
    let mut big = Matrix::zeros(s * f.rows, s * f.cols);
    for b in 0..s {
        for r in 0..f.rows {
            for c in 0..f.cols {
                big.set(b * f.rows + r, b * f.cols + c, f.get(r, c));
            }
        }
    }
    big
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomComparison {
    pub source_dim: usize,
    pub transported_dim: usize,
    /// `|Hom| = q^dim` on both sides.
    pub equal: bool,
}

/// Compares `Hom_R(N, N')` with `Hom(V_Y N, V_Y N')`; the transport of a
/// basis must stay independent, so equal dimensions give a bijection.
pub fn compare_homs(n: &FiniteModule, n2: &FiniteModule, s: usize) -> Result<HomComparison> {
    let f = n.field();
    let h = hom_space(n, n2)?;
    let (vn, vn2) = match n.side {
        Side::Right => (transport_discrete(n, s)?, transport_discrete(n2, s)?),
        Side::Left => (transport_contra(n, s)?, transport_contra(n2, s)?),
    };
    let hv = hom_space(&vn, &vn2)?;
    let images: Vec<Vec<Elem>> = h.iter().map(|x| transport_morphism(x, s).data.clone()).collect();
    let independent = linalg::rank(f, &Matrix::from_rows(&images, s * s * n.dim * n2.dim)) == h.len();
    Ok(HomComparison { source_dim: h.len(), transported_dim: hv.len(), equal: independent && h.len() == hv.len() })
}

/// Recovers `N` from `V_Y(N)·e_11` (or `C` from `e_11·𝕍_Y(C)`): the block at
/// index 0, with the corner ring `e_11 Mat_Y(R) e_11 ≅ R` acting through
/// `r ↦ E_00 ⊗ r`. Returns the recovered module.
pub fn corner_recovery(v: &FiniteModule, r: &Arc<Algebra>, s: usize) -> Result<FiniteModule> {
    let f = v.field();
    let rd = r.dim();
    let d = v.dim / s;
    let mut e11 = vec![0; s * s * rd];
    e11[..rd].copy_from_slice(r.unit());
    let image = v.action_matrix(&e11);
    let corner = Subspace::from_matrix(f, &image);
    let block0 = Subspace::span(f, v.dim, &(0..d).map(|i| linalg::unit_vec(v.dim, i)).collect::<Vec<_>>());
    if corner != block0 {
        return Err(Error::Inconsistent("the corner is not the first block".into()));
    }
    let action = (0..rd)
        .map(|t| {
            let big = &v.action[t];
            let mut m = Matrix::zeros(d, d);
            for a in 0..d {
                for b in 0..d {
                    m.set(a, b, big.get(a, b));
                }
            }
            m
        })
        .collect();
    FiniteModule::new(r.clone(), v.side, d, action)
}

/// `m·a` for a finitely supported row `m ∈ N^{(ω)}` (indexed by the first
/// `m.len()` positions), `N` a module over the level-`level` ring.
pub fn act_on_row(n: &FiniteModule, m: &[Vec<Elem>], a: &WindowedMatrix, level: usize) -> Result<Vec<Vec<Elem>>> {
    let base = &a.base;
    if base.tower.levels[level] != *n.algebra {
        return Err(Error::Window(format!("the module is not over level {level} of the base")));
    }
    let f = n.field();
    let mut out: Vec<Vec<Elem>> = Vec::new();
    for (x, mx) in m.iter().enumerate() {
        if linalg::is_zero_vec(mx) {
            continue;
        }
        let row = a.row(x).ok_or_else(|| Error::Window(format!("row {x} is outside the window")))?;
        if row.precision < level {
            return Err(Error::Window(format!("row {x} is only certified up to level {}", row.precision)));
        }
        for (y, e) in row.entries.iter().enumerate() {
            let r = base.project(e, level);
            if out.len() <= y {
                out.resize(y + 1, vec![0; n.dim]);
            }
            out[y] = linalg::vadd(f, &out[y], &n.act(mx, &r));
        }
    }
    while out.last().is_some_and(|v| linalg::is_zero_vec(v)) {
        out.pop();
    }
    Ok(out)
}

/// A zero-convergent family in `R[[Y]]` seen at one level: coefficients
/// modulo `K_level`, zero beyond `coeffs.len()`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZeroConvergentFamily {
    pub level: usize,
    pub coeffs: Vec<Vec<Elem>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CornerReport {
    pub row: usize,
    pub window: usize,
    pub level: usize,
    /// Free entries per row at this level (the window width).
    pub free_entries: usize,
    /// `dim R_level`.
    pub entry_dim: usize,
    /// `dim K_level`, the tail allowance per entry.
    pub tail_ideal_dim: usize,
    pub samples: usize,
    pub round_trip: bool,
    pub linear: bool,
}

/// Row `x` of a windowed matrix as a family in `R[[Y]]` at `level`.
pub fn corner_to_family(a: &WindowedMatrix, x: usize, level: usize) -> Result<ZeroConvergentFamily> {
    let r = a.row(x).ok_or_else(|| Error::Window(format!("row {x} is outside the window")))?;
    if r.precision < level {
        return Err(Error::Window(format!("row {x} is only certified up to level {}", r.precision)));
    }
    let mut coeffs: Vec<Vec<Elem>> = r.entries.iter().map(|e| a.base.project(e, level)).collect();
    while coeffs.last().is_some_and(|v| linalg::is_zero_vec(v)) {
        coeffs.pop();
    }
    Ok(ZeroConvergentFamily { level, coeffs })
}

/// `e_xx·Mat_Y(R)` against `R[[Y]]`: rows of `window` sampled matrices go to
/// families and back, and left multiplication by `E_xx ⊗ r` becomes
/// coefficientwise multiplication.
pub fn free_contra_corner(base: &Arc<BaseRing>, index: super::IndexSet, x: usize, window: usize, level: usize, samples: &[WindowedMatrix]) -> Result<CornerReport> {
    if level > base.top() {
        return Err(Error::Window(format!("level {level} is above the top level {}", base.top())));
    }
    if x >= window {
        return Err(Error::Window(format!("row {x} is outside a window of {window}")));
    }
    let ring = base.ring();
    let lvl = &base.tower.levels[level];
    let mut round_trip = true;
    let mut linear = true;
    let mut count = 0;
    for a in samples {
        let Ok(fam) = corner_to_family(a, x, level) else { continue };
        count += 1;
        // back: the family lifted through the canonical section
        let lifted: Vec<Vec<Elem>> = fam
            .coeffs
            .iter()
            .map(|c| {
                let pre = Subspace::preimage_vector(ring.field(), &base.tower.projection(base.top(), level), &Subspace::full(ring.dim()), c)
                    .expect("projections are surjective");
                base.reduce(&pre, level)
            })
            .collect();
        let again = super::Row { entries: lifted, precision: level }.normalize(base);
        if again != a.row(x).unwrap().at_level(base, level) {
            round_trip = false;
        }
        for t in 0..ring.dim() {
            let r = ring.basis(t);
            let e = WindowedMatrix::elementary(base, index, a.window(), x, x, &r)?;
            let prod = super::mat_mul(&e, a)?;
            let Ok(got) = corner_to_family(&prod, x, level) else { continue };
            let rl = base.project(&r, level);
            let mut want: Vec<Vec<Elem>> = fam.coeffs.iter().map(|c| lvl.mul(&rl, c)).collect();
            while want.last().is_some_and(|v| linalg::is_zero_vec(v)) {
                want.pop();
            }
            if got.coeffs != want {
                linear = false;
            }
        }
    }
    let free_entries = match index {
        super::IndexSet::Finite(n) => n,
        super::IndexSet::Omega => window,
    };
    Ok(CornerReport {
        row: x,
        window,
        level,
        free_entries,
        entry_dim: lvl.dim(),
        tail_ideal_dim: base.kernel(level).dim(),
        samples: count,
        round_trip,
        linear,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::builtins::{truncated_power, upper_triangular};
    use crate::field::FiniteField;

    fn simple_t2(side: Side) -> FiniteModule {
        let f = FiniteField::prime(2).unwrap();
        let t = Arc::new(upper_triangular(&f, 2));
        FiniteModule::regular(t, side)
    }

    #[test]
    fn transports_are_modules() {
        let n = simple_t2(Side::Right);
        let v = transport_discrete(&n, 2).unwrap();
        v.validate().unwrap();
        let c = simple_t2(Side::Left);
        let w = transport_contra(&c, 2).unwrap();
        w.validate().unwrap();
    }

    #[test]
    fn corners_recover_the_module() {
        for side in [Side::Right, Side::Left] {
            let n = simple_t2(side);
            let v = match side {
                Side::Right => transport_discrete(&n, 3).unwrap(),
                Side::Left => transport_contra(&n, 3).unwrap(),
            };
            let back = corner_recovery(&v, &n.algebra, 3).unwrap();
            assert_eq!(back.action, n.action);
        }
    }

    #[test]
    fn hom_counts_survive() {
        let n = simple_t2(Side::Right);
        let cmp = compare_homs(&n, &n, 2).unwrap();
        assert!(cmp.equal, "{cmp:?}");
        assert_eq!(cmp.source_dim, 3);
    }

    #[test]
    fn omega_row_action() {
        let f = FiniteField::prime(2).unwrap();
        let r = truncated_power(&f, 1);
        let base = BaseRing::discrete(&r);
        let n = FiniteModule::regular(Arc::new(r), Side::Right);
        let s = WindowedMatrix::shift(&base, 4);
        let out = act_on_row(&n, &[vec![1], vec![0], vec![1]], &s, 0).unwrap();
        assert_eq!(out, vec![vec![0], vec![1], vec![0], vec![1]]);
    }
}
