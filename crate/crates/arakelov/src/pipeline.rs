//! The full computation: LLL reduction on a divisor, divisor addition with
//! reduction, the jump algorithm (repeated doubling plus reduction), the
//! good-divisor decomposition, the h⁰ evaluation, and grid sweeps with a
//! good-divisor cache.
//!
//! Sign conventions. A reduction of a degree-zero divisor D produces an
//! ideal J and a vector `log_s` with D ≡ d(J) + (O_F, e^{log_s}) modulo
//! principal divisors; `log_s` is the genuine componentwise log. Trace
//! rows print `log_omega` in the opposite convention (the coordinates v
//! with ω = e^{−v}), which is how the reference tables are laid out.

use rayon::prelude::*;
use rug::ops::CompleteRound;
use rug::{Float, Integer};

use crate::divisor::{log_vector_norm, ArakelovDivisor};
use crate::error::{Error, Result};
use crate::field::{FieldElement, NumberField};
use crate::ideals::{associated_divisor, FracIdeal};
use crate::lattice;
use crate::real::{flt, ln_rational, pow2_neg};
use crate::theta::{self, H0Result};

#[derive(Clone, Debug)]
pub struct TraceRow {
    pub step: usize,
    pub ideal: FracIdeal,
    pub norm_j_inv: Integer,
    /// Table convention: the vector v with ω_step = e^{−v}.
    pub log_omega: Vec<Float>,
}

/// Outcome of one or more reductions: D ≡ d(ideal) + (O_F, e^{log_s}).
#[derive(Clone, Debug)]
pub struct ReductionOutcome {
    pub ideal: FracIdeal,
    pub log_s: Vec<Float>,
    pub trace: Option<Vec<TraceRow>>,
}

impl ReductionOutcome {
    pub fn norm_j_inv(&self) -> Integer {
        self.ideal.inverse_norm_integer().expect("outcome invariant: J^{-1} is integral")
    }
}

/// Check the three contract invariants of a single-reduction outcome.
fn check_single_step(ideal: &FracIdeal, log_s: &[Float], field: &NumberField) -> Result<()> {
    let prec = field.precision_bits;
    if !ideal.contains_one() {
        return Err(Error::Internal("reduction produced J without 1 ∈ J".into()));
    }
    let norm_inv = ideal
        .inverse_norm_integer()
        .ok_or_else(|| Error::Internal("N(J^{-1}) is not an integer".into()))?;
    // N(J^{-1}) ≤ 2^{n(n-1)/2} ∂_F
    let bound = Float::with_val(prec, Float::i_exp(1, (field.n * (field.n - 1) / 2) as i32))
        * &field.ideal_norm_const;
    if flt(prec, &norm_inv) > bound {
        return Err(Error::Internal(format!("N(J^{{-1}}) = {} exceeds the reduction bound", norm_inv)));
    }
    let dist_slack = pow2_neg(prec, prec / 4);
    if log_vector_norm(&field.place_degrees(), log_s)
        > (&field.ln_reduce_dist_const + &dist_slack).complete(prec)
    {
        return Err(Error::Internal("‖log s‖ exceeds log D_F after one reduction".into()));
    }
    let mut degsum = Float::new(prec);
    let mut scale = flt(prec, 1);
    for (d, ls) in field.place_degrees().iter().zip(log_s) {
        degsum += ls * flt(prec, *d);
        scale = scale.max(&ls.clone().abs());
    }
    if degsum.abs() > pow2_neg(prec, prec / 2) * scale {
        return Err(Error::Internal("s does not have norm 1".into()));
    }
    Ok(())
}

/// LLL reduction on a degree-zero divisor; `guard` bounds the per-place
/// |log u| that may be exponentiated.
fn reduce_with_guard(
    divisor: &ArakelovDivisor,
    guard: &Float,
    field: &NumberField,
) -> Result<ReductionOutcome> {
    let prec = field.precision_bits;
    if divisor.degree(field).abs() > pow2_neg(prec, prec / 4) {
        return Err(Error::Domain("reduction requires a divisor of degree 0".into()));
    }
    for lu in &divisor.log_u {
        if lu.clone().abs() > *guard {
            return Err(Error::Domain(
                "per-place |log u| exceeds the reduction guard; use the jump algorithm".into(),
            ));
        }
    }
    let basis = lattice::embedded_divisor_lattice(divisor, field);
    let reduced = lattice::lll(&basis)?;
    // b_1 = u·ι(f) with f exact from the transform row
    let mut coords = vec![rug::Rational::new(); field.n];
    for (j, c) in reduced.transform[0].iter().enumerate() {
        if c.cmp0() != std::cmp::Ordering::Equal {
            let basis_el = divisor.ideal.basis_element(j);
            for (t, bc) in basis_el.coords.iter().enumerate() {
                coords[t] += rug::Rational::from(bc * c);
            }
        }
    }
    let f = FieldElement { coords };
    let ideal = divisor.ideal.scale_by_element_inverse(&f, field)?;
    // log s_σ = log |b_1|_σ + (1/n) log N(J), |b_1| read off the lattice
    let ln_norm_over_n = ln_rational(prec, ideal.norm()) / flt(prec, field.n as u32);
    let b1 = &reduced.basis.cols[0];
    let mut log_s = Vec::with_capacity(field.num_places());
    let mut row = 0usize;
    for deg in field.place_degrees() {
        let abs_sq = if deg == 1 {
            let v = &b1[row];
            row += 1;
            (v * v).complete(prec)
        } else {
            // rows hold √2·Re and √2·Im
            let re = &b1[row];
            let im = &b1[row + 1];
            row += 2;
            ((re * re).complete(prec) + (im * im).complete(prec)) / flt(prec, 2)
        };
        log_s.push(abs_sq.ln() / flt(prec, 2) + &ln_norm_over_n);
    }
    check_single_step(&ideal, &log_s, field)?;
    Ok(ReductionOutcome { ideal, log_s, trace: None })
}

/// Internal guard: one doubled reduced vector stays within 2·log D_F
/// (log s ≤ (n−1)/n·log D_F per place plus the N(J)^{−1/n} factor).
fn internal_guard(field: &NumberField) -> Float {
    let prec = field.precision_bits;
    &field.ln_reduce_dist_const * flt(prec, 2)
}

/// Public single-shot reduction with the documented |log u| ≤ 2 log ∂_F
/// guard; callers at larger magnitude must use `jump`.
pub fn reduce_divisor(divisor: &ArakelovDivisor, field: &NumberField) -> Result<ReductionOutcome> {
    let prec = field.precision_bits;
    let guard = &field.ln_ideal_norm_const * flt(prec, 2);
    reduce_with_guard(divisor, &guard, field)
}

/// Reduction norm bound 2^{n(n-1)/2}·∂_F used in the add precondition.
fn add_norm_bound(field: &NumberField) -> Float {
    let prec = field.precision_bits;
    Float::with_val(prec, Float::i_exp(1, (field.n * (field.n - 1) / 2) as i32))
        * &field.ideal_norm_const
}

/// Addition of two reduced divisors d(J₁) + d(J₂) followed by reduction:
/// reduce d(J₁J₂) and return that outcome.
pub fn add_reduce(
    r1: &ReductionOutcome,
    r2: &ReductionOutcome,
    field: &NumberField,
) -> Result<ReductionOutcome> {
    let prec = field.precision_bits;
    let bound = add_norm_bound(field);
    for r in [r1, r2] {
        let ni = r
            .ideal
            .inverse_norm_integer()
            .ok_or_else(|| Error::Domain("input ideal inverse norm is not integral".into()))?;
        if flt(prec, &ni) > bound {
            return Err(Error::Domain("input ideal norm exceeds the reduced bound".into()));
        }
    }
    let product = r1.ideal.mul(&r2.ideal, field)?;
    let d3 = associated_divisor(&product, field);
    reduce_with_guard(&d3, &internal_guard(field), field)
}

/// The jump algorithm: walk from the origin to the divisor (O_F, u) given
/// by `log_u` (degree 0) by t doublings, each followed by a reduction.
/// Always returns a trace with rows 0..=max(t, 1).
pub fn jump(log_u: &[Float], field: &NumberField) -> Result<ReductionOutcome> {
    let prec = field.precision_bits;
    if log_u.len() != field.num_places() {
        return Err(Error::Parameter("log_u must have one coordinate per infinite place".into()));
    }
    // degree-0 precondition, with tolerance scaled to the input magnitude
    let mut degsum = Float::new(prec);
    let mut scale = flt(prec, 1);
    for (d, lu) in field.place_degrees().iter().zip(log_u) {
        degsum += lu * flt(prec, *d);
        scale = scale.max(&lu.clone().abs());
    }
    if degsum.abs() > pow2_neg(prec, prec / 4) * scale {
        return Err(Error::Domain("jump requires Σ deg σ · log u_σ = 0".into()));
    }

    let w: Vec<Float> = log_u.iter().map(|lu| -lu.clone()).collect();
    let nf = flt(prec, field.n as u32);
    let mut t = 0u32;
    if w.iter().any(|wi| !wi.is_zero()) {
        loop {
            let ok = w.iter().all(|wi| {
                let lhs = ((&nf * wi).complete(prec)).abs() >> t;
                lhs < field.ln_ideal_norm_const
            });
            if ok {
                break;
            }
            t += 1;
            if t > 10_000 {
                return Err(Error::Domain("jump target is unreasonably far away".into()));
            }
        }
    }
    let z: Vec<Float> = w.iter().map(|wi| wi.clone() >> t).collect();

    let mut trace = vec![TraceRow {
        step: 0,
        ideal: FracIdeal::ring_of_integers(field.n),
        norm_j_inv: Integer::from(1),
        log_omega: z.clone(),
    }];

    if t == 0 {
        // already within reach: a single reduction on (O_F, u)
        let d0 = ArakelovDivisor {
            ideal: FracIdeal::ring_of_integers(field.n),
            log_u: log_u.to_vec(),
        };
        let out = reduce_with_guard(&d0, &internal_guard(field), field)?;
        trace.push(TraceRow {
            step: 1,
            ideal: out.ideal.clone(),
            norm_j_inv: out.norm_j_inv(),
            log_omega: out.log_s.iter().map(|x| -x.clone()).collect(),
        });
        return Ok(ReductionOutcome { ideal: out.ideal, log_s: out.log_s, trace: Some(trace) });
    }

    // row 0 convention: J_0 = O_F, ω_0 = e^{−z}
    let mut ideal = FracIdeal::ring_of_integers(field.n);
    let mut log_omega: Vec<Float> = z.iter().map(|x| -x.clone()).collect();
    for step in 1..=t as usize {
        // W_i = 2·W_{i−1} = (J², v²) with v = ω·N(J)^{−1/n}
        let squared = ideal.mul(&ideal, field)?;
        let ln_norm_over_n = ln_rational(prec, ideal.norm()) / &nf;
        let log_v2: Vec<Float> =
            log_omega.iter().map(|lo| (lo - &ln_norm_over_n).complete(prec) * 2u32).collect();
        let out = reduce_with_guard(
            &ArakelovDivisor { ideal: squared, log_u: log_v2 },
            &internal_guard(field),
            field,
        )?;
        ideal = out.ideal;
        log_omega = out.log_s;
        trace.push(TraceRow {
            step,
            ideal: ideal.clone(),
            norm_j_inv: ideal.inverse_norm_integer().expect("outcome invariant"),
            log_omega: log_omega.iter().map(|x| -x.clone()).collect(),
        });
    }
    Ok(ReductionOutcome { ideal, log_s: log_omega, trace: Some(trace) })
}

/// Find a reduced divisor close to D (degree 0): split off the ideal part,
/// reduce it, jump to the infinite part, and add the two reductions.
/// The combined distance satisfies ‖log s‖ < 3 log D_F.
pub fn good_divisor(divisor: &ArakelovDivisor, field: &NumberField) -> Result<ReductionOutcome> {
    let prec = field.precision_bits;
    if divisor.degree(field).abs() > pow2_neg(prec, prec / 4) {
        return Err(Error::Domain("good divisor search requires degree 0".into()));
    }
    if divisor.ideal.is_ring_of_integers() {
        return jump(&divisor.log_u, field);
    }
    // D = D₁ + D₂ with D₁ = d(I) and D₂ = (O_F, N(I)^{1/n} u)
    let d1 = associated_divisor(&divisor.ideal, field);
    let r1 = reduce_with_guard(&d1, &internal_guard(field), field)?;
    let ln_norm_over_n = ln_rational(prec, divisor.ideal.norm()) / flt(prec, field.n as u32);
    let log_u2: Vec<Float> =
        divisor.log_u.iter().map(|lu| (lu + &ln_norm_over_n).complete(prec)).collect();
    let r2 = jump(&log_u2, field)?;
    let r3 = add_reduce(&r1, &r2, field)?;
    let log_s: Vec<Float> = (0..field.num_places())
        .map(|p| (&r1.log_s[p] + &r2.log_s[p]).complete(prec) + &r3.log_s[p])
        .collect();
    let three_bound =
        &field.ln_reduce_dist_const * flt(prec, 3) + pow2_neg(prec, prec / 4);
    if log_vector_norm(&field.place_degrees(), &log_s) > three_bound {
        return Err(Error::Internal("combined ‖log s‖ exceeds 3 log D_F".into()));
    }
    Ok(ReductionOutcome { ideal: r3.ideal, log_s, trace: r2.trace })
}

/// Lattice, reduction and theta stages shared by `h0` and `sweep`.
fn evaluate_theta(
    ideal: &FracIdeal,
    log_s: &[Float],
    d: &Float,
    delta: f64,
    m_override: Option<f64>,
    field: &NumberField,
) -> Result<H0Result> {
    let lat = lattice::divisor_lattice(ideal, log_s, d, field)?;
    let reduced = lattice::lll(&lat)?;
    let g = lattice::gso(&reduced.basis)?;
    let db = lattice::dual_block(&reduced.basis, &g)?;
    let split = theta::split_form(&g, &db);
    let m = match m_override {
        Some(m) => m,
        None => theta::choose_m(field.n, delta, &split.min_diag())?,
    };
    let vectors = lattice::enumerate(
        &split.dual_form,
        &split.primal_form,
        &flt(field.precision_bits, m),
    );
    let mut result = theta::theta_sum(&split, &vectors, m)?;
    result.delta = Some(delta);
    Ok(result)
}

/// h⁰ of an arbitrary Arakelov divisor with target error `delta`.
pub fn h0(divisor: &ArakelovDivisor, delta: f64, field: &NumberField) -> Result<H0Result> {
    h0_with_m(divisor, delta, None, field)
}

/// h⁰ with an expert override of the enumeration bound M.
pub fn h0_with_m(
    divisor: &ArakelovDivisor,
    delta: f64,
    m_override: Option<f64>,
    field: &NumberField,
) -> Result<H0Result> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::Parameter(format!("delta must_be in (0,1), got {}", delta)));
    }
    let d = divisor.degree(field);
    let translated = divisor.translate_to_degree_zero(field);
    let good = good_divisor(&translated, field)?;
    evaluate_theta(&good.ideal, &good.log_s, &d, delta, m_override, field)
}

#[derive(Clone, Debug)]
pub struct CacheEntry {
    pub grid_index: Vec<usize>,
    /// Absolute log_u of the translated divisor at this grid center.
    pub center_log_u: Vec<Float>,
    pub outcome: ReductionOutcome,
}

#[derive(Clone, Debug)]
pub struct GoodDivisorCache {
    pub entries: Vec<CacheEntry>,
    pub grid_step: f64,
}

impl GoodDivisorCache {
    /// Index of the entry closest to `log_u` in the degree-weighted
    /// metric; earlier (lexicographically smaller grid index) entries win
    /// ties because the comparison is strict.
    pub fn nearest(&self, log_u: &[Float], degrees: &[u32]) -> usize {
        let mut best = 0usize;
        let mut best_dist: Option<Float> = None;
        for (i, entry) in self.entries.iter().enumerate() {
            let prec = crate::real::prec_of(log_u);
            let mut dist = Float::new(prec);
            for ((a, b), deg) in log_u.iter().zip(&entry.center_log_u).zip(degrees) {
                let diff = (a - b).complete(prec);
                dist += (&diff * &diff).complete(prec) * flt(prec, *deg);
            }
            if best_dist.as_ref().map_or(true, |bd| dist < *bd) {
                best = i;
                best_dist = Some(dist);
            }
        }
        best
    }
}

#[derive(Clone, Debug)]
pub struct SweepRow {
    pub offsets: Vec<f64>,
    pub h0: f64,
    pub m: f64,
    pub term_count: usize,
    pub cache_index: usize,
}

#[derive(Clone, Debug)]
pub struct SweepResult {
    pub rows: Vec<SweepRow>,
    pub cache: GoodDivisorCache,
}

/// Orthonormality of the sweep directions in the degree-weighted inner
/// product, and the degree-0 constraint on each.
fn validate_directions(directions: &[Vec<Float>], field: &NumberField) -> Result<()> {
    let prec = field.precision_bits;
    let degrees = field.place_degrees();
    let tol = pow2_neg(prec, prec / 4);
    for dir in directions {
        if dir.len() != field.num_places() {
            return Err(Error::Parameter("direction length must match the number of places".into()));
        }
        let mut degsum = Float::new(prec);
        for (d, x) in degrees.iter().zip(dir) {
            degsum += x * flt(prec, *d);
        }
        if degsum.abs() > tol {
            return Err(Error::Parameter("sweep directions must have degree 0".into()));
        }
    }
    for i in 0..directions.len() {
        for j in 0..=i {
            let mut ip = Float::new(prec);
            for ((a, b), d) in directions[i].iter().zip(&directions[j]).zip(&degrees) {
                ip += (a * b).complete(prec) * flt(prec, *d);
            }
            let want = if i == j { flt(prec, 1) } else { Float::new(prec) };
            if (ip - want).abs() > tol {
                return Err(Error::Parameter(
                    "sweep directions must be orthonormal in the degree-weighted inner product".into(),
                ));
            }
        }
    }
    Ok(())
}

fn multi_indices(counts: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for &c in counts {
        let mut next = Vec::with_capacity(out.len() * c);
        for prefix in &out {
            for v in 0..c {
                let mut p = prefix.clone();
                p.push(v);
                next.push(p);
            }
        }
        out = next;
    }
    out
}

/// Sweep h⁰ over a box spanned by orthonormal degree-zero directions.
/// Good divisors are computed once at the centers of a unit grid
/// (duplicates by ideal are stored once, first occurrence wins); every
/// sample point reuses the nearest cache entry with the offset folded
/// exactly into log s, and re-runs only the lattice and theta stages.
pub fn sweep(
    base: &ArakelovDivisor,
    directions: &[Vec<Float>],
    extents: &[(f64, usize)],
    delta: f64,
    field: &NumberField,
) -> Result<SweepResult> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::Parameter(format!("delta must be in (0,1), got {}", delta)));
    }
    if directions.is_empty() || directions.len() != extents.len() {
        return Err(Error::Parameter("need one (length, samples) extent per direction".into()));
    }
    for (len, samples) in extents {
        if !len.is_finite() || *len < 0.0 || *samples == 0 {
            return Err(Error::Parameter("extent lengths must be ≥ 0 with ≥ 1 samples".into()));
        }
    }
    validate_directions(directions, field)?;

    let prec = field.precision_bits;
    let degrees = field.place_degrees();
    let d = base.degree(field);
    let translated = base.translate_to_degree_zero(field);

    // Cache construction along the unit grid, sequential in lex order.
    let cell_counts: Vec<usize> =
        extents.iter().map(|(len, _)| (len.ceil() as usize).max(1)).collect();
    let mut entries: Vec<CacheEntry> = Vec::new();
    for idx in multi_indices(&cell_counts) {
        let mut center_log_u = translated.log_u.clone();
        for (dim, &cell) in idx.iter().enumerate() {
            let offset = flt(prec, cell as f64 + 0.5);
            for (p, coord) in directions[dim].iter().enumerate() {
                center_log_u[p] += (coord * &offset).complete(prec);
            }
        }
        let center = ArakelovDivisor { ideal: translated.ideal.clone(), log_u: center_log_u.clone() };
        let outcome = good_divisor(&center, field)?;
        if !entries.iter().any(|e| e.outcome.ideal == outcome.ideal) {
            entries.push(CacheEntry { grid_index: idx, center_log_u, outcome });
        }
    }
    let cache = GoodDivisorCache { entries, grid_step: 1.0 };

    // Sample points; the evaluation per point is independent and
    // deterministic, so the parallel map preserves the output exactly.
    let sample_counts: Vec<usize> = extents.iter().map(|(_, s)| *s).collect();
    let sample_indices = multi_indices(&sample_counts);
    let rows: Result<Vec<SweepRow>> = sample_indices
        .par_iter()
        .map(|idx| {
            let offsets: Vec<f64> = idx
                .iter()
                .enumerate()
                .map(|(dim, &j)| {
                    let (len, samples) = extents[dim];
                    if samples == 1 {
                        0.0
                    } else {
                        len * j as f64 / (samples - 1) as f64
                    }
                })
                .collect();
            let mut log_u = translated.log_u.clone();
            for (dim, &t) in offsets.iter().enumerate() {
                let tf = flt(prec, t);
                for (p, coord) in directions[dim].iter().enumerate() {
                    log_u[p] += (coord * &tf).complete(prec);
                }
            }
            let ci = cache.nearest(&log_u, &degrees);
            let entry = &cache.entries[ci];
            let log_s: Vec<Float> = (0..field.num_places())
                .map(|p| {
                    (&entry.outcome.log_s[p] + &log_u[p]).complete(prec) - &entry.center_log_u[p]
                })
                .collect();
            let r = evaluate_theta(&entry.outcome.ideal, &log_s, &d, delta, None, field)?;
            Ok(SweepRow {
                offsets,
                h0: r.value.to_f64(),
                m: r.m,
                term_count: r.term_count,
                cache_index: ci,
            })
        })
        .collect();
    Ok(SweepResult { rows: rows?, cache })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testfields::{example1_field, example2_field, golden_field};
    use rug::ops::Pow;
    use rug::Rational;

    fn zeros(field: &NumberField) -> Vec<Float> {
        vec![Float::new(field.precision_bits); field.num_places()]
    }

    #[test]
    fn reduce_zero_divisor_is_trivial() {
        let field = golden_field();
        let d = ArakelovDivisor::zero(&field);
        let out = reduce_divisor(&d, &field).unwrap();
        assert!(out.ideal.is_ring_of_integers());
        for ls in &out.log_s {
            assert!(ls.clone().abs() < pow2_neg(64, field.precision_bits / 3));
        }
    }

    #[test]
    fn reduce_rejects_bad_inputs() {
        let field = golden_field();
        let prec = field.precision_bits;
        // wrong degree
        let d = ArakelovDivisor {
            ideal: FracIdeal::ring_of_integers(2),
            log_u: vec![flt(prec, 1.0), flt(prec, 1.0)],
        };
        assert!(matches!(reduce_divisor(&d, &field), Err(Error::Domain(_))));
        // magnitude guard: degree 0 but far out (golden field: 2 log ∂_F ≈ 1.6)
        let d = ArakelovDivisor {
            ideal: FracIdeal::ring_of_integers(2),
            log_u: vec![flt(prec, 40.0), flt(prec, -40.0)],
        };
        assert!(matches!(reduce_divisor(&d, &field), Err(Error::Domain(_))));
    }

    #[test]
    fn example1_first_jump_step_norm_129() {
        // reduction of (O_F, ω²) with z = 2^{-61} w gives N(J⁻¹) = 129
        let field = example1_field();
        let prec = field.precision_bits;
        let w0: Float = flt(prec, 10).pow(20u32) / flt(prec, 2).sqrt();
        let z = vec![(w0.clone() >> 61u32), (-w0.clone() >> 61u32)];
        let log_u: Vec<Float> = z.iter().map(|zi| zi * flt(prec, -2)).collect();
        let d = ArakelovDivisor { ideal: FracIdeal::ring_of_integers(2), log_u };
        let out = reduce_with_guard(&d, &internal_guard(&field), &field).unwrap();
        assert_eq!(out.norm_j_inv(), Integer::from(129));
    }

    #[test]
    fn add_reduce_identity() {
        let field = golden_field();
        let of = ReductionOutcome {
            ideal: FracIdeal::ring_of_integers(2),
            log_s: zeros(&field),
            trace: None,
        };
        let out = add_reduce(&of, &of, &field).unwrap();
        assert!(out.ideal.is_ring_of_integers());
        for ls in &out.log_s {
            assert!(ls.clone().abs() < pow2_neg(64, field.precision_bits / 3));
        }
    }

    #[test]
    fn jump_zero_vector() {
        let field = golden_field();
        let out = jump(&zeros(&field), &field).unwrap();
        assert!(out.ideal.is_ring_of_integers());
        let trace = out.trace.as_ref().unwrap();
        assert_eq!(trace.len(), 2); // convention row + the single reduction
        assert_eq!(trace[0].norm_j_inv, Integer::from(1));
    }

    #[test]
    fn jump_rejects_nonzero_degree() {
        let field = golden_field();
        let prec = field.precision_bits;
        let out = jump(&[flt(prec, 1.0), flt(prec, 1.0)], &field);
        assert!(matches!(out, Err(Error::Domain(_))));
    }

    #[test]
    fn example1_jump_full_trace() {
        let field = example1_field();
        let prec = field.precision_bits;
        let scale: Float = flt(prec, 10).pow(20u32) / flt(prec, 2).sqrt();
        // our place order: σ1 = −√Δ, so w = (+|w|, −|w|) here
        let log_u = vec![-scale.clone(), scale.clone()];
        let out = jump(&log_u, &field).unwrap();
        let trace = out.trace.as_ref().unwrap();
        assert_eq!(trace.len(), 62, "t = 61 plus the convention row");
        // z magnitude matches the printed value
        let z0 = trace[0].log_omega[0].to_f64();
        assert!((z0.abs() - 30.66587).abs() < 5e-6, "z = {}", z0);
        // row 1 reproduces the regression anchor
        assert_eq!(trace[1].norm_j_inv, Integer::from(129));
        // final row
        assert_eq!(
            out.norm_j_inv(),
            "742409068975056334669660076059992618001".parse::<Integer>().unwrap()
        );
        let last = trace.last().unwrap();
        assert!((last.log_omega[0].to_f64().abs() - 0.80975).abs() < 5e-6);
        // per-step distance bound
        for row in trace {
            let norm = log_vector_norm(&field.place_degrees(), &row.log_omega);
            if row.step > 0 {
                assert!(norm < field.ln_reduce_dist_const);
            }
        }
        // ‖log s‖ of the final outcome matches the printed 1.14516
        let norm = log_vector_norm(&field.place_degrees(), &out.log_s);
        assert!((norm.to_f64() - 1.14516).abs() < 5e-6, "‖log s‖ = {}", norm.to_f64());
    }

    #[test]
    fn example2_jump_trace() {
        let field = example2_field();
        let prec = field.precision_bits;
        // w = 10^10 e1 + 10^10 e2 in the paper's coordinates (ascending
        // real places, same as ours)
        let sqrt2 = flt(prec, 2).sqrt();
        let sqrt6 = flt(prec, 6).sqrt();
        let e1 = [
            flt(prec, 1) / &sqrt2,
            Float::new(prec),
            flt(prec, -1) / &sqrt2,
        ];
        let e2 = [
            flt(prec, 1) / &sqrt6,
            flt(prec, -2) / &sqrt6,
            flt(prec, 1) / &sqrt6,
        ];
        let ten10 = flt(prec, 10).pow(10u32);
        let w: Vec<Float> =
            (0..3).map(|p| (&e1[p] + &e2[p]).complete(prec) * &ten10).collect();
        assert!((w[0].to_f64() - 11153550716.50411).abs() < 1e-4);
        let log_u: Vec<Float> = w.iter().map(|wi| -wi.clone()).collect();
        let out = jump(&log_u, &field).unwrap();
        let trace = out.trace.as_ref().unwrap();
        assert_eq!(trace.len(), 31, "t = 30 plus the convention row");
        let z = &trace[0].log_omega;
        assert!((z[0].to_f64() - 10.38755).abs() < 5e-6);
        assert!((z[1].to_f64() + 7.60422).abs() < 5e-6);
        // the text prints −2.78333 but the true value (and the table row)
        // is −2.783336…
        assert!((z[2].to_f64() + 2.783336).abs() < 5e-6);
        assert_eq!(out.norm_j_inv(), Integer::from(938139713086i64));
    }

    #[test]
    fn good_divisor_skips_to_jump_for_trivial_ideal() {
        let field = golden_field();
        let prec = field.precision_bits;
        let d = ArakelovDivisor {
            ideal: FracIdeal::ring_of_integers(2),
            log_u: vec![flt(prec, 2.25), flt(prec, -2.25)],
        };
        let via_good = good_divisor(&d, &field).unwrap();
        let via_jump = jump(&d.log_u, &field).unwrap();
        assert_eq!(via_good.ideal, via_jump.ideal);
    }

    #[test]
    fn good_divisor_composite_bound() {
        let field = golden_field();
        let prec = field.precision_bits;
        // nontrivial ideal of small norm: 2·O_F scaled to degree 0
        let two = FracIdeal::from_generators(&[
            vec![Rational::from(2), Rational::new()],
            vec![Rational::new(), Rational::from(2)],
        ])
        .unwrap();
        let div = ArakelovDivisor { ideal: two, log_u: vec![flt(prec, 0.7), flt(prec, -0.7)] };
        let div = div.translate_to_degree_zero(&field);
        let out = good_divisor(&div, &field).unwrap();
        let bound = &field.ln_reduce_dist_const * flt(prec, 3);
        assert!(log_vector_norm(&field.place_degrees(), &out.log_s) < bound);
        assert!(out.ideal.contains_one());
    }

    #[test]
    fn h0_example1_value() {
        let field = example1_field();
        let prec = field.precision_bits;
        let w0: Float = flt(prec, 10).pow(20u32) / flt(prec, 2).sqrt();
        let quarter = ln_rational(prec, &Rational::from(field.disc.clone())) / flt(prec, 4);
        // v = Δ^{-1/4} e^{-w} in our place order (w = (+, −))
        let log_v = vec![
            -((&quarter + &w0).complete(prec)),
            w0.clone() - &quarter,
        ];
        let w = ArakelovDivisor { ideal: FracIdeal::ring_of_integers(2), log_u: log_v };
        let r = h0(&w, 1e-5, &field).unwrap();
        assert!(
            (r.value.to_f64() - 0.47250).abs() < 1e-4,
            "h0 = {} (expected ≈ 0.47250)",
            r.value.to_f64()
        );
        assert_eq!(r.m, 8.0);
        assert_eq!(r.path, theta::EvalPath::Split);
        assert!(r.tail_bound.to_f64() <= 1e-5);
        assert_eq!(r.term_count, 9);
    }

    #[test]
    fn theta_constant_over_the_rationals() {
        // h⁰(Z, 1) = log Σ_m e^{−πm²}; pipeline must survive n = 1 where
        // ∂_F = D_F = 1
        let field = crate::testfields::rational_field();
        let r = h0(&ArakelovDivisor::zero(&field), 1e-5, &field).unwrap();
        assert!((r.value.to_f64() - 0.0829091).abs() < 1e-5, "h0 = {}", r.value.to_f64());
    }

    #[test]
    fn sweep_zero_length_single_point() {
        let field = golden_field();
        let prec = field.precision_bits;
        let w = ArakelovDivisor::zero(&field);
        let e1 = vec![
            flt(prec, 1) / flt(prec, 2).sqrt(),
            flt(prec, -1) / flt(prec, 2).sqrt(),
        ];
        let res = sweep(&w, &[e1], &[(0.0, 1)], 1e-4, &field).unwrap();
        assert_eq!(res.cache.entries.len(), 1);
        assert_eq!(res.rows.len(), 1);
        assert_eq!(res.rows[0].offsets, vec![0.0]);
        // h0 of the zero divisor: direct evaluation agrees
        let direct = h0(&w, 1e-4, &field).unwrap();
        assert!((res.rows[0].h0 - direct.value.to_f64()).abs() < 2e-4);
    }

    #[test]
    fn sweep_rejects_bad_directions() {
        let field = golden_field();
        let prec = field.precision_bits;
        let not_deg0 = vec![flt(prec, 1.0), flt(prec, 0.5)];
        assert!(matches!(
            sweep(&ArakelovDivisor::zero(&field), &[not_deg0], &[(2.0, 3)], 1e-4, &field),
            Err(Error::Parameter(_))
        ));
        let not_unit = vec![flt(prec, 1.0), flt(prec, -1.0)];
        assert!(matches!(
            sweep(&ArakelovDivisor::zero(&field), &[not_unit], &[(2.0, 3)], 1e-4, &field),
            Err(Error::Parameter(_))
        ));
    }

    #[test]
    fn sweep_cache_consistency_small() {
        // a short interval on the golden field: grid cells produce valid
        // rows referencing real cache entries
        let field = golden_field();
        let prec = field.precision_bits;
        let e1 = vec![
            flt(prec, 1) / flt(prec, 2).sqrt(),
            flt(prec, -1) / flt(prec, 2).sqrt(),
        ];
        let res = sweep(&ArakelovDivisor::zero(&field), &[e1], &[(3.0, 7)], 1e-4, &field).unwrap();
        assert_eq!(res.rows.len(), 7);
        assert!(!res.cache.entries.is_empty());
        for row in &res.rows {
            assert!(row.cache_index < res.cache.entries.len());
            assert!(row.h0.is_finite());
        }
        // offsets ascending
        for pair in res.rows.windows(2) {
            assert!(pair[0].offsets[0] < pair[1].offsets[0]);
        }
    }
}
