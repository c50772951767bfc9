//! Bass flats `B = colim(R →a_1 R →a_2 ⋯)` over a finite ring, along right
//! multiplications, for periodic sequences `a_{n+p} = a_n`.
//!
//! Over the cofinal stages the system is `R` along `ρ_P`, `P = a_1⋯a_p`. By
//! Fitting, `R = ker ρ_P^k ⊕ R·P^k` for large `k`, `ρ_P` is bijective on the
//! second summand, and so `B ≅ R·P^k = R·e` for the idempotent component `e`
//! of `1`.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::Algebra;
use crate::error::{Error, Result};
use crate::field::Elem;
use crate::linalg::{self, Matrix, Subspace};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum BassVerdict {
    /// `r ↦ r·e` splits `R → B` with the inclusion as section.
    Projective { idempotent: Vec<Elem> },
    NotProjective { reason: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BassFlatDatum {
    pub ring_dim: usize,
    /// One period of the sequence.
    pub sequence: Vec<Vec<Elem>>,
    /// Least `s ≥ 1` with `R·a_1⋯a_n` constant for `n ≥ s`.
    pub stabilization: usize,
    /// `dim R·a_1⋯a_n` for `n = 1..=stabilization`.
    pub stage_dims: Vec<usize>,
    pub colimit_dim: usize,
    pub colimit_basis: Vec<Vec<Elem>>,
    pub verdict: BassVerdict,
}

impl BassFlatDatum {
    pub fn projective(&self) -> bool {
        matches!(self.verdict, BassVerdict::Projective { .. })
    }
}

fn left_ideal_of(r: &Algebra, x: &[Elem]) -> Subspace {
    let vs: Vec<Vec<Elem>> = (0..r.dim()).map(|i| r.mul(&r.basis(i), x)).collect();
    r.span(&vs)
}

pub fn bass_flat(r: &Algebra, sequence: &[Vec<Elem>]) -> Result<BassFlatDatum> {
    let f = r.field();
    let n = r.dim();
    if sequence.is_empty() {
        return Err(Error::Hypothesis("a Bass sequence needs at least one element".into()));
    }
    for (k, a) in sequence.iter().enumerate() {
        linalg::check_dims(&format!("length of sequence element {k}"), a.len(), n)?;
    }
    let p = sequence.len();
    let mut period = r.one();
    for a in sequence {
        period = r.mul(&period, a);
    }
    // Fitting exponent of ρ_P
    let mut power = r.one();
    let mut rank = n;
    let mut k = 0;
    loop {
        let next = r.mul(&power, &period);
        let rk = left_ideal_of(r, &next).dim();
        if rk == rank {
            break;
        }
        power = next;
        rank = rk;
        k += 1;
    }
    // stages past (k + 1)·p are stable
    let horizon = (k + 1) * p + 1;
    let mut prod = r.one();
    let mut dims = Vec::new();
    for i in 0..horizon {
        prod = r.mul(&prod, &sequence[i % p]);
        dims.push(left_ideal_of(r, &prod).dim());
    }
    let last = *dims.last().unwrap();
    let stabilization = dims.iter().rposition(|&d| d != last).map_or(1, |i| i + 2);
    dims.truncate(stabilization);
    let image = left_ideal_of(r, &power);
    let kernel = Subspace::span(f, n, &linalg::left_kernel(f, &r.right_mul_matrix(&power)));
    if image.dim() + kernel.dim() != n || !image.intersect(f, &kernel).is_zero() {
        return Err(Error::Inconsistent("Fitting decomposition failed".into()));
    }
    let both: Vec<Vec<Elem>> = kernel.vectors().into_iter().chain(image.vectors()).collect();
    let coords = linalg::solve_left(f, &Matrix::from_rows(&both, n), r.unit())
        .ok_or_else(|| Error::Inconsistent("1 is outside ker ⊕ im".into()))?;
    let ims = image.vectors();
    let mut e = r.zero();
    for (c, v) in coords[kernel.dim()..].iter().zip(&ims) {
        e = r.add(&e, &r.scale(*c, v));
    }
    let verdict = if r.is_idempotent(&e)
        && left_ideal_of(r, &e) == image
        && ims.iter().all(|b| r.mul(b, &e) == *b)
        && ims.iter().all(|b| image.contains(f, &r.mul(b, &period)))
        && Subspace::span(f, n, &ims.iter().map(|b| r.mul(b, &period)).collect::<Vec<_>>()) == image
    {
        BassVerdict::Projective { idempotent: e }
    } else {
        BassVerdict::NotProjective { reason: "the Fitting component of 1 does not split the colimit".into() }
    };
    if !matches!(verdict, BassVerdict::Projective { .. }) {
        return Err(Error::Inconsistent("a Bass flat over a finite ring is not projective".into()));
    }
    Ok(BassFlatDatum {
        ring_dim: n,
        sequence: sequence.to_vec(),
        stabilization,
        stage_dims: dims,
        colimit_dim: image.dim(),
        colimit_basis: ims,
        verdict,
    })
}

/// A period of length `1..=4` of random elements, some of them units.
pub fn random_bass_sequence<R: Rng>(r: &Algebra, rng: &mut R) -> Vec<Vec<Elem>> {
    let p = rng.gen_range(1..=4);
    (0..p)
        .map(|_| {
            if rng.gen_bool(0.3) {
                r.one()
            } else {
                r.random_element(rng)
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::builtins::{cyclic_group_algebra, truncated_power};
    use crate::field::FiniteField;

    #[test]
    fn examples() {
        let f = FiniteField::prime(2).unwrap();
        let r = truncated_power(&f, 2);
        let b = bass_flat(&r, &[r.one()]).unwrap();
        assert_eq!((b.colimit_dim, b.stabilization), (2, 1));
        let b = bass_flat(&r, &[vec![0, 1]]).unwrap();
        assert_eq!((b.colimit_dim, b.stabilization), (0, 2));
        assert_eq!(b.verdict, BassVerdict::Projective { idempotent: vec![0, 0] });
        let g = cyclic_group_algebra(&f, 3);
        let b = bass_flat(&g, &[g.basis(1)]).unwrap();
        assert_eq!(b.colimit_dim, 3);
    }
}
