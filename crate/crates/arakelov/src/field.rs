//! Number fields presented by a monic integer polynomial together with an
//! integral basis of an order, plus the embedding and constant data every
//! later stage consumes.
//!
//! Conventions fixed here once and used everywhere else:
//! * places are ordered real-then-complex, real embeddings ascending,
//!   complex representatives (Im > 0) sorted by (Re, Im);
//! * the real embedding uses one coordinate per real place and the pair
//!   (√2·Re, √2·Im) per complex place, so the trace form becomes the
//!   standard Euclidean form;
//! * element coordinates are exact rationals with respect to the integral
//!   basis, whose first element must be 1.

use rug::ops::CompleteRound;
use rug::{Float, Integer, Rational};

use crate::error::{Error, Result};
use crate::qmat::QMat;
use crate::real::{flt, Cx};
use crate::roots;

/// An infinite place: the value stored is the image of the generator α.
#[derive(Clone, Debug)]
pub enum Place {
    Real(Float),
    Complex(Cx),
}

impl Place {
    pub fn degree(&self) -> u32 {
        match self {
            Place::Real(_) => 1,
            Place::Complex(_) => 2,
        }
    }
}

/// Field element in exact coordinates with respect to the integral basis.
#[derive(Clone, Debug, PartialEq)]
pub struct FieldElement {
    pub coords: Vec<Rational>,
}

impl FieldElement {
    pub fn from_integer_coords(coords: &[i64]) -> Self {
        FieldElement { coords: coords.iter().map(|&c| Rational::from(c)).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.cmp0() == std::cmp::Ordering::Equal)
    }
}

#[derive(Clone, Debug)]
pub struct NumberField {
    /// Defining polynomial, coefficients low to high, monic.
    pub poly: Vec<Integer>,
    pub n: usize,
    pub r1: usize,
    pub r2: usize,
    pub places: Vec<Place>,
    /// Column j = power-basis coordinates of the j-th integral basis element.
    pub integral_basis: QMat,
    /// disc = det(Tr(ω_i ω_j)), exact.
    pub disc: Integer,
    /// (2/π)^{r2} √|Δ|; bounds the norms of LLL-reduced ideals.
    pub ideal_norm_const: Float,
    /// (2^{(n-1)/2} √n)^n times `ideal_norm_const`; bounds the Pic distance
    /// moved by one LLL reduction on a divisor.
    pub reduce_dist_const: Float,
    pub ln_ideal_norm_const: Float,
    pub ln_reduce_dist_const: Float,
    pub precision_bits: u32,
    /// structure[(i*n + j)*n + k] = coefficient of ω_k in ω_i·ω_j.
    structure: Vec<Rational>,
    /// n×n rows of the real embedding of the integral basis (√2 convention).
    embed_rows: Vec<Vec<Float>>,
    /// basis_at_places[p][j] = σ_p(ω_j) as a complex value.
    basis_at_places: Vec<Vec<Cx>>,
}

/// Degree-wise power sums Tr(α^m) for m = 0..=top via Newton's identities.
fn power_traces(poly: &[Integer], top: usize) -> Vec<Rational> {
    let n = poly.len() - 1;
    let mut p = vec![Rational::new(); top + 1];
    p[0] = Rational::from(n as u32);
    for m in 1..=top {
        // monic: x^n + a_{n-1} x^{n-1} + ... + a_0 with a_j = poly[j]
        let mut acc = Rational::new();
        if m <= n {
            acc -= Rational::from(&poly[n - m] * Integer::from(m));
            for i in 1..m {
                acc -= Rational::from(&poly[n - i] * p[m - i].clone());
            }
        } else {
            for i in 1..=n {
                acc -= Rational::from(&poly[n - i] * p[m - i].clone());
            }
        }
        p[m] = acc;
    }
    p
}

/// α^m in power-basis coordinates for m = 0..=top (reduction mod poly).
fn power_reductions(poly: &[Integer], top: usize) -> Vec<Vec<Rational>> {
    let n = poly.len() - 1;
    let mut out: Vec<Vec<Rational>> = Vec::with_capacity(top + 1);
    for m in 0..=top {
        if m < n {
            let mut v = vec![Rational::new(); n];
            v[m] = Rational::from(1);
            out.push(v);
        } else {
            // α^m = α·α^{m-1}: shift then reduce the α^n term.
            let prev = out[m - 1].clone();
            let mut v = vec![Rational::new(); n];
            for k in 1..n {
                v[k] = prev[k - 1].clone();
            }
            let lead = prev[n - 1].clone();
            for k in 0..n {
                v[k] -= Rational::from(&lead * &poly[k]);
            }
            out.push(v);
        }
    }
    out
}

/// Degree of gcd(p, p') over the rationals; > 0 means repeated factors.
fn gcd_with_derivative_degree(poly: &[Integer]) -> usize {
    fn deg(p: &[Rational]) -> Option<usize> {
        p.iter().rposition(|c| c.cmp0() != std::cmp::Ordering::Equal)
    }
    fn rem(num: &[Rational], den: &[Rational]) -> Vec<Rational> {
        let dd = deg(den).expect("division by zero polynomial");
        let mut r = num.to_vec();
        while let Some(dn) = deg(&r) {
            if dn < dd {
                break;
            }
            let f = Rational::from(&r[dn] / &den[dd]);
            for i in 0..=dd {
                let s = Rational::from(&f * &den[i]);
                r[dn - dd + i] -= s;
            }
            r.truncate(dn); // leading term is now exactly zero
        }
        r
    }
    let a: Vec<Rational> = poly.iter().map(Rational::from).collect();
    let b: Vec<Rational> = poly
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| Rational::from(c * Integer::from(i)))
        .collect();
    let (mut a, mut b) = (a, b);
    loop {
        match deg(&b) {
            None => return deg(&a).unwrap_or(0),
            Some(0) => return 0,
            Some(_) => {
                let r = rem(&a, &b);
                a = b;
                b = r;
            }
        }
    }
}

/// Evaluate a power-basis coordinate vector at a complex root.
fn eval_coords_at(coords: &[Rational], alpha: &Cx, prec: u32) -> Cx {
    let mut acc = Cx::zero(prec);
    for c in coords.iter().rev() {
        acc = acc.mul(alpha);
        acc.re += flt(prec, c);
    }
    acc
}

pub fn build_field(
    poly: &[Integer],
    integral_basis: Option<&[Vec<Rational>]>,
    precision_bits: Option<u32>,
) -> Result<NumberField> {
    let n = poly.len().saturating_sub(1);
    if n == 0 {
        return Err(Error::Parameter("polynomial must have degree >= 1".into()));
    }
    if poly[n] != 1 {
        return Err(Error::Parameter("polynomial must be monic".into()));
    }
    if gcd_with_derivative_degree(poly) > 0 {
        return Err(Error::Parameter("polynomial has repeated factors".into()));
    }

    let basis_cols: Vec<Vec<Rational>> = match integral_basis {
        Some(cols) => {
            if cols.len() != n || cols.iter().any(|c| c.len() != n) {
                return Err(Error::Parameter("integral basis must be an n×n matrix".into()));
            }
            cols.to_vec()
        }
        None => (0..n)
            .map(|j| {
                let mut v = vec![Rational::new(); n];
                v[j] = Rational::from(1);
                v
            })
            .collect(),
    };
    let basis = QMat::from_columns(&basis_cols);
    // first basis element must be exactly 1
    let one_ok = basis.at(0, 0) == &Rational::from(1)
        && (1..n).all(|i| basis.at(i, 0).cmp0() == std::cmp::Ordering::Equal);
    if !one_ok {
        return Err(Error::Parameter("first integral basis element must be 1".into()));
    }
    let basis_inv = basis
        .inverse()
        .ok_or_else(|| Error::Parameter("integral basis is not invertible".into()))?;

    // Structure constants and the trace form, all exact.
    let powers = power_reductions(poly, 2 * n - 2);
    let traces = power_traces(poly, 2 * n - 2);
    let mut structure = vec![Rational::new(); n * n * n];
    let mut gram = QMat::zero(n, n);
    for i in 0..n {
        for j in 0..=i {
            // power-basis coordinates of ω_i ω_j
            let mut prod = vec![Rational::new(); n];
            let mut trace = Rational::new();
            for a in 0..n {
                if basis.at(a, i).cmp0() == std::cmp::Ordering::Equal {
                    continue;
                }
                for b in 0..n {
                    if basis.at(b, j).cmp0() == std::cmp::Ordering::Equal {
                        continue;
                    }
                    let coeff = Rational::from(basis.at(a, i) * basis.at(b, j));
                    for k in 0..n {
                        let s = Rational::from(&coeff * &powers[a + b][k]);
                        prod[k] += s;
                    }
                    trace += coeff * traces[a + b].clone();
                }
            }
            let in_omega = basis_inv.mul_vec(&prod);
            for k in 0..n {
                structure[(i * n + j) * n + k] = in_omega[k].clone();
                structure[(j * n + i) * n + k] = in_omega[k].clone();
            }
            *gram.at_mut(i, j) = trace.clone();
            *gram.at_mut(j, i) = trace;
        }
    }
    let disc_q = gram.det();
    if disc_q.denom() != &Integer::from(1) {
        return Err(Error::Parameter("integral basis does not span an order (trace form is not integral)".into()));
    }
    let disc = disc_q.numer().clone();
    if disc.cmp0() == std::cmp::Ordering::Equal {
        return Err(Error::Parameter("discriminant is zero".into()));
    }

    let prec = precision_bits.unwrap_or_else(|| 192.max(4 * disc.significant_bits()));

    let rt = roots::roots_of_monic(poly, prec)?;
    // Integer-root check: a rational root of a monic integer polynomial is
    // an integer; together with squarefreeness this certifies
    // irreducibility for n <= 3 (higher degrees are the caller's problem).
    for x in rt.real.iter().filter(|_| n >= 2) {
        if let Some(k) = x.to_integer() {
            let mut acc = Integer::new();
            for c in poly.iter().rev() {
                acc *= &k;
                acc += c;
            }
            let close = (x.clone() - flt(prec, &k)).abs() < crate::real::pow2_neg(prec, prec / 2);
            if close && acc.cmp0() == std::cmp::Ordering::Equal {
                return Err(Error::Parameter(format!("polynomial is reducible: integer root {}", k)));
            }
        }
    }
    let r1 = rt.real.len();
    let r2 = rt.complex.len();
    debug_assert_eq!(r1 + 2 * r2, n);

    let places: Vec<Place> = rt
        .real
        .iter()
        .map(|x| Place::Real(x.clone()))
        .chain(rt.complex.iter().map(|z| Place::Complex(z.clone())))
        .collect();

    // Embedding rows and per-place basis values.
    let sqrt2 = flt(prec, 2).sqrt();
    let mut embed_rows: Vec<Vec<Float>> = Vec::with_capacity(n);
    let mut basis_at_places: Vec<Vec<Cx>> = Vec::with_capacity(r1 + r2);
    for place in &places {
        match place {
            Place::Real(x) => {
                let alpha = Cx::from_real(x.clone());
                let vals: Vec<Cx> =
                    (0..n).map(|j| eval_coords_at(&basis.column(j), &alpha, prec)).collect();
                embed_rows.push(vals.iter().map(|v| v.re.clone()).collect());
                basis_at_places.push(vals);
            }
            Place::Complex(z) => {
                let vals: Vec<Cx> =
                    (0..n).map(|j| eval_coords_at(&basis.column(j), z, prec)).collect();
                embed_rows.push(vals.iter().map(|v| (&sqrt2 * &v.re).complete(prec)).collect());
                embed_rows.push(vals.iter().map(|v| (&sqrt2 * &v.im).complete(prec)).collect());
                basis_at_places.push(vals);
            }
        }
    }

    let abs_disc = disc.clone().abs();
    let sqrt_abs_disc = flt(prec, &abs_disc).sqrt();
    let two_over_pi = flt(prec, 2) / crate::real::pi(prec);
    let ideal_norm_const = {
        let mut v = sqrt_abs_disc.clone();
        for _ in 0..r2 {
            v *= &two_over_pi;
        }
        v
    };
    // (2^{(n-1)/2} √n)^n = 2^{n(n-1)/2} n^{n/2}
    let lattice_factor = {
        let mut v = Float::with_val(prec, Float::i_exp(1, (n * (n - 1) / 2) as i32));
        if n % 2 == 1 {
            // odd n: 2^{n(n-1)/2} is exact; n^{n/2} = n^{(n-1)/2}·√n
            v *= flt(prec, n as u32).sqrt();
            for _ in 0..(n - 1) / 2 {
                v *= n as u32;
            }
        } else {
            for _ in 0..n / 2 {
                v *= n as u32;
            }
        }
        v
    };
    let reduce_dist_const = (&lattice_factor * &ideal_norm_const).complete(prec);
    let ln_ideal_norm_const = ideal_norm_const.clone().ln();
    let ln_reduce_dist_const = reduce_dist_const.clone().ln();

    Ok(NumberField {
        poly: poly.to_vec(),
        n,
        r1,
        r2,
        places,
        integral_basis: basis,
        disc,
        ideal_norm_const,
        reduce_dist_const,
        ln_ideal_norm_const,
        ln_reduce_dist_const,
        precision_bits: prec,
        structure,
        embed_rows,
        basis_at_places,
    })
}

impl NumberField {
    pub fn num_places(&self) -> usize {
        self.r1 + self.r2
    }

    pub fn place_degrees(&self) -> Vec<u32> {
        self.places.iter().map(Place::degree).collect()
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement { coords: vec![Rational::new(); self.n] }
    }

    pub fn one(&self) -> FieldElement {
        let mut coords = vec![Rational::new(); self.n];
        coords[0] = Rational::from(1);
        FieldElement { coords }
    }

    pub fn add_elements(&self, f: &FieldElement, g: &FieldElement) -> FieldElement {
        FieldElement {
            coords: f
                .coords
                .iter()
                .zip(&g.coords)
                .map(|(a, b)| Rational::from(a + b))
                .collect(),
        }
    }

    pub fn mul_elements(&self, f: &FieldElement, g: &FieldElement) -> FieldElement {
        let n = self.n;
        let mut coords = vec![Rational::new(); n];
        for i in 0..n {
            if f.coords[i].cmp0() == std::cmp::Ordering::Equal {
                continue;
            }
            for j in 0..n {
                if g.coords[j].cmp0() == std::cmp::Ordering::Equal {
                    continue;
                }
                let c = Rational::from(&f.coords[i] * &g.coords[j]);
                for k in 0..n {
                    let s = Rational::from(&c * &self.structure[(i * n + j) * n + k]);
                    coords[k] += s;
                }
            }
        }
        FieldElement { coords }
    }

    /// Matrix of multiplication by f on the integral basis; column j holds
    /// the coordinates of f·ω_j. Its determinant is N(f) exactly.
    pub fn mul_matrix(&self, f: &FieldElement) -> Result<QMat> {
        if f.is_zero() {
            return Err(Error::Parameter("multiplication matrix of the zero element".into()));
        }
        let n = self.n;
        let mut m = QMat::zero(n, n);
        for j in 0..n {
            for k in 0..n {
                let mut acc = Rational::new();
                for i in 0..n {
                    if f.coords[i].cmp0() == std::cmp::Ordering::Equal {
                        continue;
                    }
                    acc += Rational::from(&f.coords[i] * &self.structure[(i * n + j) * n + k]);
                }
                *m.at_mut(k, j) = acc;
            }
        }
        Ok(m)
    }

    pub fn element_norm(&self, f: &FieldElement) -> Result<Rational> {
        Ok(self.mul_matrix(f)?.det())
    }

    /// The real embedding ι(f) ∈ ℝ^n with the √2 convention for complex
    /// places, so ‖ι(f)‖² = Σ_σ deg σ |σ(f)|².
    pub fn embed_element(&self, f: &FieldElement) -> Vec<Float> {
        let prec = self.precision_bits;
        self.embed_rows
            .iter()
            .map(|row| {
                let mut acc = Float::new(prec);
                for (c, w) in f.coords.iter().zip(row) {
                    if c.cmp0() != std::cmp::Ordering::Equal {
                        acc += w * flt(prec, c);
                    }
                }
                acc
            })
            .collect()
    }

    /// σ(f) at every infinite place (one complex value per place).
    pub fn element_at_places(&self, f: &FieldElement) -> Vec<Cx> {
        let prec = self.precision_bits;
        self.basis_at_places
            .iter()
            .map(|row| {
                let mut acc = Cx::zero(prec);
                for (c, w) in f.coords.iter().zip(row) {
                    if c.cmp0() != std::cmp::Ordering::Equal {
                        acc = acc.add(&w.scale(&flt(prec, c)));
                    }
                }
                acc
            })
            .collect()
    }

    /// Embedding of the j-th integral basis element (row picture of
    /// `embed_element` on coordinate vectors).
    pub fn embedded_basis_column(&self, j: usize) -> Vec<Float> {
        self.embed_rows.iter().map(|row| row[j].clone()).collect()
    }
}
