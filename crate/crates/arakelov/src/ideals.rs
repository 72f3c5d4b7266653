//! Exact fractional-ideal arithmetic over the order fixed by a
//! `NumberField`: canonical Hermite normal forms, products via structure
//! constants, scaling by an element inverse, norms, and the degree-zero
//! divisor attached to an ideal.
//!
//! Canonical form: an ideal I is stored as a positive denominator `den`
//! and an upper-triangular integer matrix `hnf` with positive diagonal and
//! `0 <= hnf[i][j] < hnf[i][i]` for j > i, whose columns are the
//! coordinates (w.r.t. the integral basis) of a ℤ-basis of den·I, with
//! gcd(den, entries) = 1. Two ideals are equal iff their forms are equal.

use rug::{Integer, Rational};

use crate::divisor::ArakelovDivisor;
use crate::error::{Error, Result};
use crate::field::{FieldElement, NumberField};
use crate::real::ln_rational;

#[derive(Clone, Debug)]
pub struct FracIdeal {
    den: Integer,
    /// Column-major: hnf[j] is the j-th basis vector.
    hnf: Vec<Vec<Integer>>,
    norm: Rational,
}

impl PartialEq for FracIdeal {
    fn eq(&self, other: &Self) -> bool {
        self.den == other.den && self.hnf == other.hnf
    }
}
impl Eq for FracIdeal {}

fn is_zero(x: &Integer) -> bool {
    x.cmp0() == std::cmp::Ordering::Equal
}

/// Column HNF of a full-rank integer column set (length-n columns).
fn hnf_columns(mut cols: Vec<Vec<Integer>>, n: usize) -> Result<Vec<Vec<Integer>>> {
    let mut pivots: Vec<Vec<Integer>> = vec![Vec::new(); n];
    // Bottom row upward: concentrate the gcd of the current row into a
    // single column, which becomes the pivot for that row.
    for row in (0..n).rev() {
        loop {
            let mut nonzero: Vec<usize> =
                (0..cols.len()).filter(|&j| !is_zero(&cols[j][row])).collect();
            match nonzero.len() {
                0 => return Err(Error::Parameter("generators are rank deficient".into())),
                1 => {
                    let mut piv = cols.swap_remove(nonzero[0]);
                    if piv[row].cmp0() == std::cmp::Ordering::Less {
                        for x in piv.iter_mut() {
                            *x = -x.clone();
                        }
                    }
                    pivots[row] = piv;
                    break;
                }
                _ => {
                    // reduce every entry modulo the smallest one
                    nonzero.sort_by(|&a, &b| {
                        cols[a][row]
                            .clone()
                            .abs()
                            .cmp(&cols[b][row].clone().abs())
                            .then(a.cmp(&b))
                    });
                    let jmin = nonzero[0];
                    let amin = cols[jmin][row].clone();
                    for &j in &nonzero[1..] {
                        let q = Integer::from(&cols[j][row] / &amin); // truncating is fine here
                        if is_zero(&q) {
                            continue;
                        }
                        for i in 0..n {
                            let s = Integer::from(&q * &cols[jmin][i]);
                            cols[j][i] -= s;
                        }
                    }
                }
            }
        }
    }
    // leftover columns are linear combinations already cleared in every row
    debug_assert!(cols.iter().all(|c| c.iter().all(is_zero)));
    // upper-triangularity: pivot of row i must have zeros below i
    for (i, col) in pivots.iter().enumerate() {
        debug_assert!(col[i].cmp0() == std::cmp::Ordering::Greater);
        debug_assert!(col[i + 1..].iter().all(is_zero));
    }
    // reduce off-diagonal entries: 0 <= H[i][j] < H[i][i] for j > i
    for j in 0..n {
        for i in (0..j).rev() {
            let (q, _) = <(Integer, Integer)>::from(pivots[j][i].div_rem_euc_ref(&pivots[i][i]));
            if !is_zero(&q) {
                for t in 0..n {
                    let s = Integer::from(&q * &pivots[i][t]);
                    pivots[j][t] -= s;
                }
            }
        }
    }
    Ok(pivots)
}

impl FracIdeal {
    /// The ring of integers itself (identity HNF).
    pub fn ring_of_integers(n: usize) -> FracIdeal {
        let hnf: Vec<Vec<Integer>> = (0..n)
            .map(|j| {
                let mut c = vec![Integer::new(); n];
                c[j] = Integer::from(1);
                c
            })
            .collect();
        FracIdeal { den: Integer::from(1), hnf, norm: Rational::from(1) }
    }

    /// Canonical HNF of the ℤ-module spanned by rational coordinate
    /// vectors (any count >= n, full rank).
    pub fn from_generators(gens: &[Vec<Rational>]) -> Result<FracIdeal> {
        if gens.is_empty() {
            return Err(Error::Parameter("no generators".into()));
        }
        let n = gens[0].len();
        if gens.len() < n || gens.iter().any(|g| g.len() != n) {
            return Err(Error::Parameter("generators are rank deficient".into()));
        }
        let mut den = Integer::from(1);
        for g in gens {
            for c in g {
                den.lcm_mut(c.denom());
            }
        }
        let cols: Vec<Vec<Integer>> = gens
            .iter()
            .map(|g| {
                g.iter()
                    .map(|c| {
                        let scaled = Rational::from(c * &den);
                        debug_assert_eq!(scaled.denom(), &Integer::from(1));
                        scaled.numer().clone()
                    })
                    .collect()
            })
            .collect();
        let hnf = hnf_columns(cols, n)?;
        Ok(Self::normalized(den, hnf))
    }

    fn normalized(mut den: Integer, mut hnf: Vec<Vec<Integer>>) -> FracIdeal {
        let n = hnf.len();
        let mut g = den.clone();
        for col in &hnf {
            for x in col {
                g.gcd_mut(x);
            }
        }
        if g > 1 {
            den /= &g;
            for col in hnf.iter_mut() {
                for x in col.iter_mut() {
                    *x /= &g;
                }
            }
        }
        let mut det = Rational::from(1);
        for (j, col) in hnf.iter().enumerate() {
            det *= &col[j];
        }
        let mut den_pow = Rational::from(1);
        for _ in 0..n {
            den_pow *= &den;
        }
        let norm = det / den_pow;
        FracIdeal { den, hnf, norm }
    }

    pub fn den(&self) -> &Integer {
        &self.den
    }

    pub fn hnf(&self) -> &[Vec<Integer>] {
        &self.hnf
    }

    pub fn dim(&self) -> usize {
        self.hnf.len()
    }

    pub fn norm(&self) -> &Rational {
        &self.norm
    }

    pub fn is_ring_of_integers(&self) -> bool {
        *self == FracIdeal::ring_of_integers(self.dim())
    }

    /// N(I⁻¹) as an exact integer; None when I⁻¹ is not of integral norm.
    pub fn inverse_norm_integer(&self) -> Option<Integer> {
        let inv = self.norm.clone().recip();
        if inv.denom() == &Integer::from(1) {
            Some(inv.numer().clone())
        } else {
            None
        }
    }

    /// j-th basis element of the ideal as a field element.
    pub fn basis_element(&self, j: usize) -> FieldElement {
        FieldElement {
            coords: self.hnf[j]
                .iter()
                .map(|x| Rational::from((x.clone(), self.den.clone())))
                .collect(),
        }
    }

    /// Exact membership test by back substitution on the triangular form.
    pub fn contains(&self, coords: &[Rational]) -> bool {
        let n = self.dim();
        // solve hnf · x = den·coords over ℤ
        let mut rhs: Vec<Rational> =
            coords.iter().map(|c| Rational::from(c * &self.den)).collect();
        for i in (0..n).rev() {
            let x = Rational::from(&rhs[i] / &self.hnf[i][i]);
            if x.denom() != &Integer::from(1) {
                return false;
            }
            for t in 0..=i {
                let s = Rational::from(&x * &self.hnf[i][t]);
                rhs[t] -= s;
            }
        }
        true
    }

    pub fn contains_one(&self) -> bool {
        let mut one = vec![Rational::new(); self.dim()];
        one[0] = Rational::from(1);
        self.contains(&one)
    }

    /// Ideal product via the n² pairwise basis products.
    pub fn mul(&self, other: &FracIdeal, field: &NumberField) -> Result<FracIdeal> {
        let mut gens = Vec::with_capacity(self.dim() * other.dim());
        for i in 0..self.dim() {
            let a = self.basis_element(i);
            for j in 0..other.dim() {
                let b = other.basis_element(j);
                gens.push(field.mul_elements(&a, &b).coords);
            }
        }
        let prod = FracIdeal::from_generators(&gens)?;
        debug_assert_eq!(
            prod.norm,
            Rational::from(&self.norm * &other.norm),
            "ideal norm must be multiplicative"
        );
        Ok(prod)
    }

    /// f⁻¹·I for a nonzero element f.
    pub fn scale_by_element_inverse(
        &self,
        f: &FieldElement,
        field: &NumberField,
    ) -> Result<FracIdeal> {
        if f.is_zero() {
            return Err(Error::Parameter("cannot scale by the inverse of zero".into()));
        }
        let minv = field
            .mul_matrix(f)?
            .inverse()
            .ok_or_else(|| Error::Internal("multiplication matrix of nonzero element is singular".into()))?;
        let gens: Vec<Vec<Rational>> = (0..self.dim())
            .map(|j| minv.mul_vec(&self.basis_element(j).coords))
            .collect();
        FracIdeal::from_generators(&gens)
    }
}

/// The degree-zero Arakelov divisor d(J) = (J, u) with u_σ = N(J)^{-1/n}
/// at every place.
pub fn associated_divisor(ideal: &FracIdeal, field: &NumberField) -> ArakelovDivisor {
    let prec = field.precision_bits;
    let ln_norm = ln_rational(prec, ideal.norm());
    let coord = -ln_norm / Rational::from(field.n as u32);
    ArakelovDivisor { ideal: ideal.clone(), log_u: vec![coord; field.num_places()] }
}
