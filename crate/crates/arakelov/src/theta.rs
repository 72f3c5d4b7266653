//! The theta-sum evaluation of h⁰: assembling the split quadratic form
//! Q = Q1 + 2·Q2·i from Gram-Schmidt and dual-block data, choosing the
//! enumeration bound M for a target error, summing the surviving terms,
//! and bounding the dropped tail rigorously.

use rug::ops::CompleteRound;
use rug::Float;

use crate::error::{Error, Result};
use crate::lattice::{DualBlockData, GsoData, TriangularForm};
use crate::real::{flt, pi, prec_of};

/// Whether the evaluation used a nontrivial Poisson split (k > 0).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EvalPath {
    Plain,
    Split,
}

impl EvalPath {
    pub fn as_str(self) -> &'static str {
        match self {
            EvalPath::Plain => "plain",
            EvalPath::Split => "split",
        }
    }
}

/// Q1 split into its two independent triangular blocks (dual variables
/// first), the cross-term matrix of Q2, and the Poisson prefactor 1/γ.
#[derive(Clone, Debug)]
pub struct QuadraticSplit {
    pub k: usize,
    pub dual_form: TriangularForm,
    pub primal_form: TriangularForm,
    /// q2[l][j]: coefficient of x_{l+1}·x_{k+j+1}, so
    /// Q2(x) = Σ q2[l][j]·x_l·x_{k+j}.
    pub q2: Vec<Vec<Float>>,
    pub gamma: Float,
}

impl QuadraticSplit {
    pub fn dims(&self) -> usize {
        self.k + self.primal_form.len()
    }

    pub fn q1_value(&self, x: &[i64]) -> Float {
        let mut acc = Float::new(self.gamma.prec());
        if self.k > 0 {
            acc += self.dual_form.value(&x[..self.k]);
        }
        if !self.primal_form.is_empty() {
            acc += self.primal_form.value(&x[self.k..]);
        }
        acc
    }

    pub fn q2_value(&self, x: &[i64]) -> Float {
        let prec = self.gamma.prec();
        let mut acc = Float::new(prec);
        for (l, row) in self.q2.iter().enumerate() {
            if x[l] == 0 {
                continue;
            }
            for (j, c) in row.iter().enumerate() {
                if x[self.k + j] != 0 {
                    acc += c * flt(prec, x[l] * x[self.k + j]);
                }
            }
        }
        acc
    }

    pub fn min_diag(&self) -> Float {
        self.dual_form
            .min_diag()
            .into_iter()
            .chain(self.primal_form.min_diag())
            .reduce(|a, b| a.min(&b))
            .expect("form has at least one variable")
    }
}

/// Assemble the split form from the reduced basis data. With k = 0 this
/// degenerates to the plain form q(x) with γ = 1 and Q2 ≡ 0.
pub fn split_form(gso: &GsoData, dual: &DualBlockData) -> QuadraticSplit {
    let n = gso.norms_sq.len();
    let k = dual.k;
    let dual_form = TriangularForm {
        diag: dual.c_norms_sq.clone(),
        off: (0..k).map(|i| (i + 1..k).map(|r| dual.c_mu[r][i].clone()).collect()).collect(),
    };
    let primal_form = TriangularForm {
        diag: gso.norms_sq[k..].to_vec(),
        off: (k..n).map(|j| (j + 1..n).map(|t| gso.mu[t][j].clone()).collect()).collect(),
    };
    let prec = prec_of(&gso.norms_sq);
    let q2 = (0..k)
        .map(|l| {
            (k..n)
                .map(|j| {
                    let mut acc = Float::new(prec);
                    for i in 0..k {
                        acc += (&gso.mu[j][i] * &dual.cross[l][i]).complete(prec);
                    }
                    acc
                })
                .collect()
        })
        .collect();
    QuadraticSplit { k, dual_form, primal_form, q2, gamma: dual.gamma.clone() }
}

/// Enumeration bound for a target error delta:
/// M ≈ (log(1/δ) + (n+1)·log 3 + (n(n+1)/2 − 1)·log 2)/(π − 1), floored by
/// the tail-bound preconditions and rounded up to the next integer.
pub fn choose_m(n: usize, delta: f64, lambda_sq_lower: &Float) -> Result<f64> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::Parameter(format!("delta must be in (0,1), got {}", delta)));
    }
    if !(lambda_sq_lower.clone() > 0) {
        return Err(Error::Parameter("lambda_sq_lower must be positive".into()));
    }
    let nf = n as f64;
    let formula = ((1.0 / delta).ln()
        + (nf + 1.0) * 3f64.ln()
        + (nf * (nf + 1.0) / 2.0 - 1.0) * 2f64.ln())
        / (std::f64::consts::PI - 1.0);
    let half_n = nf / 2.0;
    let entropy_floor = if half_n > 1.0 { half_n * half_n.ln() } else { 0.0 };
    let m = formula.max(lambda_sq_lower.to_f64()).max(entropy_floor).max(1.0);
    Ok(m.ceil())
}

/// Closed-form bound for the dropped tail Σ_{Q1(x) > M} e^{−π Q1(x)}:
/// (π/(π−1))·(3/λ)ⁿ·e^{−(π−1)M} − (2√M/λ − 1)ⁿ·e^{−πM}, valid for any
/// lower bound λ on the shortest vector length once
/// M ≥ max(λ², (n/2)·log(n/2)).
pub fn tail_bound(lambda: &Float, n: usize, m: f64) -> Result<Float> {
    let prec = lambda.prec().max(64);
    let lambda_sq = (lambda * lambda).complete(prec);
    let nf = n as f64;
    let floor = if nf > 2.0 { (nf / 2.0) * (nf / 2.0).ln() } else { 0.0 };
    if flt(prec, m) < lambda_sq || m < floor {
        return Err(Error::Parameter(format!(
            "tail bound needs M ≥ max(λ², (n/2)log(n/2)); got M = {}",
            m
        )));
    }
    let pi_v = pi(prec);
    let mf = flt(prec, m);
    let mut first = pi_v.clone() / (pi_v.clone() - 1u32);
    let ratio = flt(prec, 3) / lambda.clone();
    for _ in 0..n {
        first *= &ratio;
    }
    first *= (-((pi_v.clone() - 1u32) * &mf)).exp();
    let mut second = flt(prec, 1);
    let base = flt(prec, 2) * mf.clone().sqrt() / lambda.clone() - 1u32;
    for _ in 0..n {
        second *= &base;
    }
    second *= (-(pi_v.clone() * &mf)).exp();
    Ok(first - second)
}

/// The value of h⁰ together with the accounting the caller needs.
#[derive(Clone, Debug)]
pub struct H0Result {
    pub value: Float,
    pub m: f64,
    pub delta: Option<f64>,
    pub term_count: usize,
    pub path: EvalPath,
    pub tail_bound: Float,
}

/// Sum the theta series over the enumerated half-list (one representative
/// per ± pair):  log((1/γ)·(1 + Σ 2·e^{−π Q1(x)}·cos(2π Q2(x)))).
///
/// Q2 is bilinear across the two blocks, so the half-list contains (a,b)
/// and (a,−b) separately and the even cosine makes this exactly the real
/// value of the full complex sum.
pub fn theta_sum(split: &QuadraticSplit, vectors: &[Vec<i64>], m: f64) -> Result<H0Result> {
    let prec = split.gamma.prec();
    let pi_v = pi(prec);
    let two_pi = pi_v.clone() * flt(prec, 2);
    let mut sum = flt(prec, 1);
    for x in vectors {
        let q1 = split.q1_value(x);
        let q2 = split.q2_value(x);
        let term = (-(&pi_v * &q1).complete(prec)).exp() * (two_pi.clone() * q2).cos();
        sum += flt(prec, 2) * term;
    }
    if sum <= 0 {
        return Err(Error::Internal("theta sum is non-positive".into()));
    }
    let value = sum.ln() - split.gamma.clone().ln();
    let lambda_lower = split.min_diag().sqrt();
    let tail = match tail_bound(&lambda_lower, split.dims(), m) {
        Ok(t) => t,
        // outside the closed form's validity only the trivial bound holds
        Err(_) => flt(prec, f64::INFINITY),
    };
    Ok(H0Result {
        value,
        m,
        delta: None,
        term_count: 1 + 2 * vectors.len(),
        path: if split.k > 0 { EvalPath::Split } else { EvalPath::Plain },
        tail_bound: tail,
    })
}
