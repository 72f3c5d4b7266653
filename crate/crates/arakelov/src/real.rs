//! Small helpers around `rug::Float` so the rest of the crate can stay
//! terse: constructors at an explicit precision, logs of exact rationals,
//! and a minimal complex type used by root finding and embeddings.
//!
//! Every `Float` in this crate carries its precision with it; operations
//! derive the target precision from their inputs via [`prec_of`].

use rug::float::Constant;
use rug::ops::CompleteRound;
use rug::{Float, Integer, Rational};

/// New float of precision `prec` from anything rug can assign.
pub fn flt<T>(prec: u32, value: T) -> Float
where
    Float: rug::Assign<T>,
{
    Float::with_val(prec, value)
}

pub fn zero(prec: u32) -> Float {
    Float::new(prec)
}

pub fn pi(prec: u32) -> Float {
    Float::with_val(prec, Constant::Pi)
}

/// ln of an exact positive rational.
pub fn ln_rational(prec: u32, q: &Rational) -> Float {
    assert!(q.cmp0() == std::cmp::Ordering::Greater, "ln of non-positive rational");
    let num = Float::with_val(prec, q.numer()).ln();
    let den = Float::with_val(prec, q.denom()).ln();
    num - den
}

/// ln of an exact positive integer.
pub fn ln_integer(prec: u32, z: &Integer) -> Float {
    assert!(z.cmp0() == std::cmp::Ordering::Greater, "ln of non-positive integer");
    Float::with_val(prec, z).ln()
}

/// Working precision of a nonempty float slice.
pub fn prec_of(xs: &[Float]) -> u32 {
    xs.iter().map(Float::prec).max().expect("empty slice has no precision")
}

/// 2^(-e) at precision `prec`, for tolerance thresholds like 2^(-P/2).
pub fn pow2_neg(prec: u32, e: u32) -> Float {
    Float::with_val(prec, Float::i_exp(1, -(e as i32)))
}

/// Dot product at the precision of the inputs.
pub fn dot(a: &[Float], b: &[Float]) -> Float {
    debug_assert_eq!(a.len(), b.len());
    let p = prec_of(a).max(prec_of(b));
    let mut acc = Float::new(p);
    for (x, y) in a.iter().zip(b) {
        acc += (x * y).complete(p);
    }
    acc
}

pub fn norm_sq(a: &[Float]) -> Float {
    dot(a, a)
}

/// Minimal complex arithmetic on `Float` pairs (rug's Complex type lives
/// behind the MPC binding which we do not link).
#[derive(Clone, Debug)]
pub struct Cx {
    pub re: Float,
    pub im: Float,
}

impl Cx {
    pub fn new(re: Float, im: Float) -> Self {
        Cx { re, im }
    }

    pub fn zero(prec: u32) -> Self {
        Cx { re: Float::new(prec), im: Float::new(prec) }
    }

    pub fn from_real(re: Float) -> Self {
        let p = re.prec();
        Cx { re, im: Float::new(p) }
    }

    pub fn prec(&self) -> u32 {
        self.re.prec().max(self.im.prec())
    }

    pub fn add(&self, o: &Cx) -> Cx {
        let p = self.prec().max(o.prec());
        Cx::new((&self.re + &o.re).complete(p), (&self.im + &o.im).complete(p))
    }

    pub fn sub(&self, o: &Cx) -> Cx {
        let p = self.prec().max(o.prec());
        Cx::new((&self.re - &o.re).complete(p), (&self.im - &o.im).complete(p))
    }

    pub fn mul(&self, o: &Cx) -> Cx {
        let p = self.prec().max(o.prec());
        let re = (&self.re * &o.re).complete(p) - (&self.im * &o.im).complete(p);
        let im = (&self.re * &o.im).complete(p) + (&self.im * &o.re).complete(p);
        Cx::new(re, im)
    }

    pub fn div(&self, o: &Cx) -> Cx {
        let p = self.prec().max(o.prec());
        let d = o.abs_sq();
        let re = ((&self.re * &o.re).complete(p) + (&self.im * &o.im).complete(p)) / &d;
        let im = ((&self.im * &o.re).complete(p) - (&self.re * &o.im).complete(p)) / &d;
        Cx::new(re, im)
    }

    pub fn scale(&self, s: &Float) -> Cx {
        let p = self.prec().max(s.prec());
        Cx::new((&self.re * s).complete(p), (&self.im * s).complete(p))
    }

    pub fn abs_sq(&self) -> Float {
        let p = self.prec();
        (&self.re * &self.re).complete(p) + (&self.im * &self.im).complete(p)
    }

    pub fn abs(&self) -> Float {
        self.abs_sq().sqrt()
    }
}
