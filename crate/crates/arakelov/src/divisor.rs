//! Arakelov divisors in log coordinates: a fractional ideal together with
//! the logs of the infinite part, one per place. The log representation is
//! canonical — the magnitudes in play (Example-1 scale is |log u| ≈ 7·10¹⁹)
//! must never be exponentiated except under an explicit guard.

use rug::ops::CompleteRound;
use rug::Float;

use crate::error::{Error, Result};
use crate::field::NumberField;
use crate::ideals::FracIdeal;
use crate::real::{flt, ln_rational, pi};

#[derive(Clone, Debug)]
pub struct ArakelovDivisor {
    pub ideal: FracIdeal,
    /// log u_σ per infinite place, in the field's place order.
    pub log_u: Vec<Float>,
}

impl ArakelovDivisor {
    /// The zero divisor (O_F, 1).
    pub fn zero(field: &NumberField) -> ArakelovDivisor {
        ArakelovDivisor {
            ideal: FracIdeal::ring_of_integers(field.n),
            log_u: vec![Float::new(field.precision_bits); field.num_places()],
        }
    }

    /// deg(D) = −(Σ_σ deg σ · log u_σ + log N(I)).
    pub fn degree(&self, field: &NumberField) -> Float {
        let prec = field.precision_bits;
        let mut acc = ln_rational(prec, self.ideal.norm());
        for (d, lu) in field.place_degrees().iter().zip(&self.log_u) {
            acc += lu * flt(prec, *d);
        }
        -acc
    }

    /// Componentwise group law: ideal product, log parts added.
    pub fn add(&self, other: &ArakelovDivisor, field: &NumberField) -> Result<ArakelovDivisor> {
        let prec = field.precision_bits;
        Ok(ArakelovDivisor {
            ideal: self.ideal.mul(&other.ideal, field)?,
            log_u: self
                .log_u
                .iter()
                .zip(&other.log_u)
                .map(|(a, b)| (a + b).complete(prec))
                .collect(),
        })
    }

    /// (I, u) ↦ (I, e^{d/n} u), the degree-zero translate.
    pub fn translate_to_degree_zero(&self, field: &NumberField) -> ArakelovDivisor {
        let prec = field.precision_bits;
        let d = self.degree(field);
        let shift = d / flt(prec, field.n as u32);
        ArakelovDivisor {
            ideal: self.ideal.clone(),
            log_u: self.log_u.iter().map(|lu| (lu + &shift).complete(prec)).collect(),
        }
    }

    /// e(D): 0 when O_F ⊄ I, otherwise e^{−π‖1‖²_D}. Requires the
    /// magnitude guard |log u_σ| ≤ 2 log ∂_F since u is exponentiated.
    pub fn effectivity(&self, field: &NumberField) -> Result<Float> {
        let prec = field.precision_bits;
        let guard = &field.ln_ideal_norm_const * flt(prec, 2);
        for lu in &self.log_u {
            if lu.clone().abs() > guard {
                return Err(Error::Domain(
                    "effectivity overflow: |log u| exceeds 2 log ∂_F; reduce the divisor first".into(),
                ));
            }
        }
        if !self.ideal.contains_one() {
            return Ok(Float::new(prec));
        }
        let mut norm1 = Float::new(prec);
        for (d, lu) in field.place_degrees().iter().zip(&self.log_u) {
            let u = lu.clone().exp();
            norm1 += (&u * &u).complete(prec) * flt(prec, *d);
        }
        Ok((-(pi(prec) * norm1)).exp())
    }
}

/// ‖log s‖ = √(Σ_σ deg σ · (log s_σ)²), the computable upper bound for the
/// Pic distance of (O_F, s) to the origin.
pub fn log_vector_norm(degrees: &[u32], log_s: &[Float]) -> Float {
    assert_eq!(degrees.len(), log_s.len(), "one log coordinate per place");
    let prec = crate::real::prec_of(log_s);
    let mut acc = Float::new(prec);
    for (d, ls) in degrees.iter().zip(log_s) {
        acc += (ls * ls).complete(prec) * flt(prec, *d);
    }
    acc.sqrt()
}

/// The principal divisor (f) = (f⁻¹·O_F, |f|); degree 0 by the product
/// formula.
pub fn principal_divisor(
    f: &crate::field::FieldElement,
    field: &NumberField,
) -> Result<ArakelovDivisor> {
    if f.is_zero() {
        return Err(Error::Parameter("principal divisor of zero".into()));
    }
    let ideal = FracIdeal::ring_of_integers(field.n).scale_by_element_inverse(f, field)?;
    let log_u = field
        .element_at_places(f)
        .iter()
        .map(|v| v.abs().ln())
        .collect();
    Ok(ArakelovDivisor { ideal, log_u })
}
