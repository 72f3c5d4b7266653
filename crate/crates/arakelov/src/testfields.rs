//! Fields used across the unit tests: the two worked examples plus a few
//! small fields of each signature.

use rug::ops::Pow;
use rug::{Integer, Rational};

use crate::field::{build_field, NumberField};

fn ints(v: &[i64]) -> Vec<Integer> {
    v.iter().map(|&x| Integer::from(x)).collect()
}

fn q(n: i64, d: i64) -> Rational {
    Rational::from((n, d))
}

pub(crate) fn rational_field() -> NumberField {
    build_field(&ints(&[0, 1]), None, None).unwrap()
}

pub(crate) fn gaussian_field() -> NumberField {
    build_field(&ints(&[1, 0, 1]), None, None).unwrap()
}

pub(crate) fn sqrt2_field() -> NumberField {
    build_field(&ints(&[-2, 0, 1]), None, None).unwrap()
}

/// x² − x − 1 with power basis (1, φ).
pub(crate) fn golden_field() -> NumberField {
    build_field(&ints(&[-1, -1, 1]), None, None).unwrap()
}

/// The real quadratic field of discriminant 10^80 + 129 with the basis
/// {1, −(1+√Δ)/2}.
pub(crate) fn example1_field() -> NumberField {
    let d = Integer::from(10).pow(80) + Integer::from(129);
    let poly = vec![-d, Integer::from(0), Integer::from(1)];
    let basis = vec![vec![q(1, 1), q(0, 1)], vec![q(-1, 2), q(-1, 2)]];
    build_field(&poly, Some(&basis), None).unwrap()
}

/// The totally real cubic field of discriminant ≈ 10^28 with the reduced
/// integral basis {1, α − 29666, α² − 93735α − 586254455}.
pub(crate) fn example2_field() -> NumberField {
    let poly = ints(&[-1000470997815, -1090173446, -88998, 1]);
    let basis = vec![
        vec![q(1, 1), q(0, 1), q(0, 1)],
        vec![q(-29666, 1), q(1, 1), q(0, 1)],
        vec![q(-586254455, 1), q(-93735, 1), q(1, 1)],
    ];
    build_field(&poly, Some(&basis), None).unwrap()
}

/// Random genuine fractional ideal: the module f·O_F + g·O_F for random
/// nonzero f, g with bounded numerators and denominators.
pub(crate) fn random_ideal(
    field: &NumberField,
    rng: &mut rand_chacha::ChaCha8Rng,
    span: i64,
) -> Option<crate::ideals::FracIdeal> {
    use rand::Rng;
    let of = crate::ideals::FracIdeal::ring_of_integers(field.n);
    let mut gens = Vec::new();
    for _ in 0..2 {
        let f = crate::field::FieldElement {
            coords: (0..field.n)
                .map(|_| Rational::from((rng.gen_range(-span..=span), rng.gen_range(1i64..=3))))
                .collect(),
        };
        if f.is_zero() {
            return None;
        }
        for j in 0..field.n {
            gens.push(field.mul_elements(&f, &of.basis_element(j)).coords);
        }
    }
    crate::ideals::FracIdeal::from_generators(&gens).ok()
}
