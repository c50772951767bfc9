//! Towers `R_N → ⋯ → R_1 → R_0` of finite rings with surjective unital
//! transitions: truncations of a complete separated ring with a countable base
//! of open two-sided ideals.
//!
//! `transitions[n]` is the `dim R_{n+1} × dim R_n` matrix of `R_{n+1} → R_n`
//! acting on row vectors.

pub mod analysis;
pub mod lifting;

use serde::{Deserialize, Serialize};

use crate::algebra::builtins::{field_extension, matrix_algebra, matrix_over, truncated_power, upper_triangular};
use crate::algebra::{direct_product, Algebra};
use crate::error::{Error, Result};
use crate::field::{Elem, FiniteField};
use crate::linalg::{self, Matrix, Subspace};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TowerIntent {
    /// The first levels of an infinite tower.
    Truncation,
    /// A finite ring presented as a tower whose transitions become isomorphisms.
    Exact,
}

#[derive(Clone, Debug)]
pub struct RingTower {
    pub name: String,
    pub levels: Vec<Algebra>,
    pub transitions: Vec<Matrix>,
    pub intent: TowerIntent,
}

impl RingTower {
    pub fn new(name: &str, levels: Vec<Algebra>, transitions: Vec<Matrix>, intent: TowerIntent) -> Result<Self> {
        let t = RingTower { name: name.to_string(), levels, transitions, intent };
        t.validate()?;
        Ok(t)
    }

    pub fn depth(&self) -> usize {
        self.levels.len()
    }

    pub fn top(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn field(&self) -> &FiniteField {
        self.levels[0].field()
    }

    pub fn validate(&self) -> Result<()> {
        if self.levels.is_empty() {
            return Err(Error::Tower("a tower needs at least one level".into()));
        }
        if self.transitions.len() + 1 != self.levels.len() {
            return Err(Error::Tower(format!(
                "{} levels need {} transitions, got {}",
                self.levels.len(),
                self.levels.len() - 1,
                self.transitions.len()
            )));
        }
        let f = self.field();
        for (n, t) in self.transitions.iter().enumerate() {
            let (hi, lo) = (&self.levels[n + 1], &self.levels[n]);
            if hi.field() != f || lo.field() != f {
                return Err(Error::Tower(format!("levels {n} and {} are over different fields", n + 1)));
            }
            if t.rows != hi.dim() || t.cols != lo.dim() {
                return Err(Error::Tower(format!(
                    "transition {}→{n} is {}×{}, expected {}×{}",
                    n + 1,
                    t.rows,
                    t.cols,
                    hi.dim(),
                    lo.dim()
                )));
            }
            if linalg::rank(f, t) != lo.dim() {
                return Err(Error::Tower(format!("transition {}→{n} is not surjective", n + 1)));
            }
            if t.vec_mul(f, hi.unit()) != lo.unit() {
                return Err(Error::Tower(format!("transition {}→{n} is not unital", n + 1)));
            }
            for i in 0..hi.dim() {
                for j in 0..hi.dim() {
                    let lhs = t.vec_mul(f, hi.basis_product(i, j));
                    let rhs = lo.mul(t.row(i), t.row(j));
                    if lhs != rhs {
                        return Err(Error::Tower(format!(
                            "transition {}→{n} is not multiplicative on basis pair ({i}, {j})",
                            n + 1
                        )));
                    }
                }
            }
            let ker = Subspace::span(f, hi.dim(), &linalg::left_kernel(f, t));
            let cls = crate::algebra::SubspaceIdeal::classify(hi, ker);
            if !cls.two_sided() {
                return Err(Error::Tower(format!("kernel of transition {}→{n} is not two-sided", n + 1)));
            }
        }
        Ok(())
    }

    /// Composite `R_from → R_to` for `from ≥ to`.
    pub fn projection(&self, from: usize, to: usize) -> Matrix {
        let f = self.field();
        let mut m = Matrix::identity(self.levels[from].dim());
        for k in (to..from).rev() {
            m = m.mul(f, &self.transitions[k]);
        }
        m
    }

    pub fn project(&self, v: &[Elem], from: usize, to: usize) -> Vec<Elem> {
        self.projection(from, to).vec_mul(self.field(), v)
    }

    /// `ker(R_from → R_to)` inside `R_from`.
    pub fn kernel(&self, from: usize, to: usize) -> Subspace {
        let f = self.field();
        Subspace::span(f, self.levels[from].dim(), &linalg::left_kernel(f, &self.projection(from, to)))
    }

    /// The first `k` levels.
    pub fn truncate(&self, k: usize) -> Result<RingTower> {
        if k == 0 || k > self.depth() {
            return Err(Error::Tower(format!("cannot truncate a tower of depth {} to {k}", self.depth())));
        }
        Ok(RingTower {
            name: self.name.clone(),
            levels: self.levels[..k].to_vec(),
            transitions: self.transitions[..k - 1].to_vec(),
            intent: self.intent,
        })
    }
}

/// Projection `A × B → A` onto the leading factor of dimension `keep`.
fn drop_tail(total: usize, keep: usize) -> Matrix {
    let mut m = Matrix::zeros(total, keep);
    for i in 0..keep {
        m.set(i, i, 1);
    }
    m
}

/// `R_n = A` for all `n`, identity transitions.
pub fn constant_tower(name: &str, a: &Algebra, depth: usize) -> Result<RingTower> {
    let levels = vec![a.clone(); depth.max(1)];
    let transitions = vec![Matrix::identity(a.dim()); depth.max(1) - 1];
    RingTower::new(name, levels, transitions, TowerIntent::Exact)
}

/// `R_n = F_p[x]/(x^{n+1})`, reduction transitions.
pub fn adic_tower(p: u32, depth: usize) -> Result<RingTower> {
    let f = FiniteField::prime(p)?;
    let levels: Vec<Algebra> = (1..=depth.max(1)).map(|n| truncated_power(&f, n)).collect();
    let transitions = (1..depth.max(1)).map(|n| drop_tail(n + 1, n)).collect();
    RingTower::new(&format!("adic F_{p}[[x]]"), levels, transitions, TowerIntent::Truncation)
}

/// `R_n = F_p^{n+1}`, transitions dropping the last factor.
pub fn product_tower(p: u32, depth: usize) -> Result<RingTower> {
    let f = FiniteField::prime(p)?;
    let one = truncated_power(&f, 1);
    let levels: Vec<Algebra> =
        (1..=depth.max(1)).map(|n| direct_product(&vec![one.clone(); n])).collect::<Result<_>>()?;
    let transitions = (1..depth.max(1)).map(|n| drop_tail(n + 1, n)).collect();
    RingTower::new(&format!("product F_{p}^N"), levels, transitions, TowerIntent::Truncation)
}

/// `F_2 ← F_2 × Mat_2(F_2) ← F_2 × Mat_2(F_2) × F_4`, then constant.
pub fn semisimple_showcase_tower(depth: usize) -> Result<RingTower> {
    let f = FiniteField::prime(2)?;
    let factors = [truncated_power(&f, 1), matrix_algebra(&f, 2), field_extension(&f, 2)?];
    let mut levels = Vec::new();
    let mut transitions = Vec::new();
    for n in 0..depth.max(1) {
        let k = (n + 1).min(factors.len());
        levels.push(direct_product(&factors[..k])?);
        if n > 0 {
            let (hi, lo) = (levels[n].dim(), levels[n - 1].dim());
            transitions.push(drop_tail(hi, lo));
        }
    }
    RingTower::new("F_2 x Mat_2(F_2) x F_4", levels, transitions, TowerIntent::Exact)
}

pub fn triangular_tower(depth: usize) -> Result<RingTower> {
    let f = FiniteField::prime(2)?;
    constant_tower("constant T_2(F_2)", &upper_triangular(&f, 2), depth)
}

/// Constant `Mat_2(F_2[x]/(x²))`.
pub fn dual_matrix_tower(depth: usize) -> Result<RingTower> {
    let f = FiniteField::prime(2)?;
    constant_tower("constant Mat_2(F_2[x]/(x^2))", &matrix_over(&truncated_power(&f, 2), 2), depth)
}

pub fn prime_field_tower(p: u32, depth: usize) -> Result<RingTower> {
    let f = FiniteField::prime(p)?;
    constant_tower(&format!("constant F_{p}"), &truncated_power(&f, 1), depth)
}

/// Names accepted by [`builtin_tower`].
pub const BUILTIN_TOWERS: &[&str] =
    &["adic2", "adic3", "product3", "semisimple", "triangular", "dual-matrix", "constant2", "constant5"];

pub fn builtin_tower(name: &str, depth: usize) -> Result<RingTower> {
    match name {
        "adic2" => adic_tower(2, depth),
        "adic3" => adic_tower(3, depth),
        "product3" => product_tower(3, depth),
        "semisimple" => semisimple_showcase_tower(depth),
        "triangular" => triangular_tower(depth),
        "dual-matrix" => dual_matrix_tower(depth),
        "constant2" => prime_field_tower(2, depth),
        "constant5" => prime_field_tower(5, depth),
        _ => Err(Error::Parse(format!("unknown built-in tower '{name}'"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtins_are_valid() {
        for name in BUILTIN_TOWERS {
            let t = builtin_tower(name, 4).unwrap();
            assert_eq!(t.depth(), 4, "{name}");
        }
    }

    #[test]
    fn non_surjective_transition_is_reported() {
        let f = FiniteField::prime(2).unwrap();
        let a = truncated_power(&f, 2);
        let zero = Matrix::zeros(2, 2);
        let err = RingTower::new("bad", vec![a.clone(), a], vec![zero], TowerIntent::Exact).unwrap_err();
        assert!(err.to_string().contains("not surjective"), "{err}");
    }

    #[test]
    fn non_multiplicative_transition_is_reported() {
        let f = FiniteField::prime(2).unwrap();
        let a = truncated_power(&f, 2);
        // 1 ↦ 1, x ↦ 1 + x is unital and bijective but (x·x) ↦ 0 ≠ (1+x)²
        let t = Matrix::from_rows(&[vec![1, 0], vec![1, 1]], 2);
        let err = RingTower::new("bad", vec![a.clone(), a], vec![t], TowerIntent::Exact).unwrap_err();
        assert!(err.to_string().contains("multiplicative"), "{err}");
    }

    #[test]
    fn kernels_of_adic_tower() {
        let t = adic_tower(2, 4).unwrap();
        assert_eq!(t.kernel(3, 0).dim(), 3);
        assert_eq!(t.kernel(3, 3).dim(), 0);
        assert_eq!(t.project(&[0, 1, 1, 1], 3, 1), vec![0, 1]);
    }
}
