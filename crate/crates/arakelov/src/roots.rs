//! Root isolation for monic squarefree integer polynomials at arbitrary
//! precision.
//!
//! Strategy: Aberth-Ehrlich simultaneous iteration at a moderate base
//! precision from deterministic starting points on a circle, then Newton
//! polishing with a doubling precision schedule up to the working
//! precision. Real roots get an exact rational sign-change certificate
//! (the polynomial is evaluated exactly at dyadic points bracketing the
//! approximation), complex roots a backward-error residual check.
//!
//! The caller is responsible for squarefreeness; multiple roots make the
//! iteration stall and surface as a precision error.

use rug::{Float, Integer, Rational};

use crate::error::{Error, Result};
use crate::real::{flt, Cx};

/// Embeddings of a number field: the real roots (ascending) and one
/// representative per conjugate pair of complex roots (Im > 0, sorted by
/// real part then imaginary part).
#[derive(Clone, Debug)]
pub struct PolyRoots {
    pub real: Vec<Float>,
    pub complex: Vec<Cx>,
}

fn eval_cx(coeffs: &[Integer], z: &Cx, prec: u32) -> Cx {
    let mut acc = Cx::zero(prec);
    for c in coeffs.iter().rev() {
        acc = acc.mul(z);
        acc.re += c;
    }
    acc
}

fn derivative(coeffs: &[Integer]) -> Vec<Integer> {
    coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| Integer::from(c * i as u32))
        .collect()
}

fn eval_rational_exact(coeffs: &[Integer], x: &Rational) -> Rational {
    let mut acc = Rational::new();
    for c in coeffs.iter().rev() {
        acc *= x;
        acc += c;
    }
    acc
}

/// One pass of Aberth-Ehrlich corrections; returns the largest relative
/// correction that was applied.
fn aberth_pass(coeffs: &[Integer], deriv: &[Integer], zs: &mut [Cx], prec: u32) -> Float {
    let n = zs.len();
    let mut worst = Float::new(prec);
    for j in 0..n {
        let pj = eval_cx(coeffs, &zs[j], prec);
        let dj = eval_cx(deriv, &zs[j], prec);
        if dj.abs_sq().is_zero() {
            // Sitting on a critical point; nudge deterministically.
            zs[j].re += Float::with_val(prec, 1e-3);
            continue;
        }
        let newton = pj.div(&dj);
        let mut repulse = Cx::zero(prec);
        for (k, zk) in zs.iter().enumerate() {
            if k != j {
                let diff = zs[j].sub(zk);
                if diff.abs_sq().is_zero() {
                    continue;
                }
                let one = Cx::new(flt(prec, 1), Float::new(prec));
                repulse = repulse.add(&one.div(&diff));
            }
        }
        let denom = Cx::new(flt(prec, 1), Float::new(prec)).sub(&newton.mul(&repulse));
        let w = if denom.abs_sq().is_zero() { newton.clone() } else { newton.div(&denom) };
        let scale = zs[j].abs().max(&flt(prec, 1));
        let rel = w.abs() / scale;
        if rel > worst {
            worst = rel;
        }
        zs[j] = zs[j].sub(&w);
    }
    worst
}

fn newton_polish(coeffs: &[Integer], deriv: &[Integer], z: &Cx, prec: u32, steps: usize) -> Cx {
    let mut z = Cx::new(flt(prec, &z.re), flt(prec, &z.im));
    for _ in 0..steps {
        let p = eval_cx(coeffs, &z, prec);
        let d = eval_cx(deriv, &z, prec);
        if d.abs_sq().is_zero() {
            break;
        }
        z = z.sub(&p.div(&d));
    }
    z
}

/// Exact certificate that a simple real root lies within `2^h_exp` of `x`:
/// the polynomial changes sign on the dyadic interval [x-h, x+h].
fn certify_real(coeffs: &[Integer], x: &Float, h_exp: i32) -> bool {
    let xq = match x.to_rational() {
        Some(q) => q,
        None => return false,
    };
    let h = Rational::from((Integer::from(1), Integer::from(1))) << h_exp;
    let lo = eval_rational_exact(coeffs, &(xq.clone() - &h));
    let hi = eval_rational_exact(coeffs, &(xq + &h));
    let sl = lo.cmp0() as i32;
    let sh = hi.cmp0() as i32;
    sl == 0 || sh == 0 || sl != sh
}

/// All roots of a monic squarefree integer polynomial, refined so that the
/// residual is below the backward-error scale at precision `prec` and real
/// roots carry an exact bracketing certificate.
pub fn roots_of_monic(coeffs: &[Integer], prec: u32) -> Result<PolyRoots> {
    let n = coeffs.len() - 1;
    assert!(n >= 1 && coeffs[n] == 1, "monic polynomial required");
    if n == 1 {
        let r = flt(prec, &coeffs[0]);
        return Ok(PolyRoots { real: vec![-r], complex: vec![] });
    }

    let deriv = derivative(coeffs);
    let base_prec = 192u32;

    // Deterministic starting points on a circle of radius 1 + max |c_i|;
    // the 0.375 phase keeps every point off the real axis.
    let radius = {
        let mut m = Integer::from(1);
        for c in &coeffs[..n] {
            let a = c.clone().abs();
            if a > m {
                m = a;
            }
        }
        flt(base_prec, &m) + 1u32
    };
    let two_pi = crate::real::pi(base_prec) * 2u32;
    let mut zs: Vec<Cx> = (0..n)
        .map(|j| {
            let theta = &two_pi * flt(base_prec, j as f64 + 0.375)
                / flt(base_prec, n as u32);
            Cx::new(
                &radius * theta.clone().cos(),
                &radius * theta.sin(),
            )
        })
        .collect();

    let tol = Float::with_val(base_prec, Float::i_exp(1, -(base_prec as i32) + 48));
    let mut converged = false;
    for _ in 0..600 {
        let worst = aberth_pass(coeffs, &deriv, &mut zs, base_prec);
        if worst < tol {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::Precision("Aberth iteration did not converge; polynomial may have multiple roots".into()));
    }

    // Newton with doubling precision up to the working precision.
    let work = prec + 64;
    let mut p = base_prec;
    while p < work {
        p = (p * 2).min(work);
        for z in zs.iter_mut() {
            *z = newton_polish(coeffs, &deriv, z, p, 3);
        }
    }

    // Classify. Conjugate symmetry of real polynomials means genuinely
    // complex roots have |Im| bounded below by half the root separation,
    // far above the iteration noise floor at working precision.
    let im_thresh = Float::with_val(work, Float::i_exp(1, -(prec as i32) / 3));
    let mut real = Vec::new();
    let mut complex = Vec::new();
    for z in &zs {
        let scale = z.abs().max(&flt(work, 1));
        if (z.im.clone() / &scale).abs() < im_thresh {
            real.push(z.re.clone());
        } else if z.im.is_sign_positive() {
            complex.push(z.clone());
        }
    }
    if real.len() + 2 * complex.len() != n {
        return Err(Error::Precision(format!(
            "root classification inconsistent: {} real + 2*{} complex != {}",
            real.len(),
            complex.len(),
            n
        )));
    }

    // Final real polish on the real axis plus exact certificates.
    for x in real.iter_mut() {
        let mut zr = Cx::from_real(x.clone());
        zr = newton_polish(coeffs, &deriv, &zr, work, 2);
        *x = zr.re;
        let h_exp = x.get_exp().unwrap_or(0) - prec as i32 + 24;
        if !certify_real(coeffs, x, h_exp) && !certify_real(coeffs, x, h_exp + 24) {
            return Err(Error::Precision("real root failed its sign-change certificate".into()));
        }
    }

    // Residual check for complex representatives (backward-error scale).
    for z in &complex {
        let res = eval_cx(coeffs, z, work).abs();
        let mut scale = Float::new(work);
        let az = z.abs();
        let mut pow = flt(work, 1);
        for c in coeffs {
            scale += flt(work, c).abs() * &pow;
            pow *= &az;
        }
        let bound = scale * Float::with_val(work, Float::i_exp(1, -(prec as i32) + 48));
        if res > bound {
            return Err(Error::Precision("complex root residual above tolerance".into()));
        }
    }

    real.sort_by(|a, b| a.partial_cmp(b).expect("roots are finite"));
    complex.sort_by(|a, b| {
        (&a.re, &a.im).partial_cmp(&(&b.re, &b.im)).expect("roots are finite")
    });
    Ok(PolyRoots { real, complex })
}
