//! Bessel values J_m(z), normalized combination coefficients, and the
//! certified truncation bounds that drive segment sizing.
//!
//! The production path is Miller's downward recurrence ([`bessel_row`]); the
//! independent ground truth is direct power-series summation
//! ([`series_reference`]), kept deliberately free of any recurrence so the two
//! routes share nothing but arithmetic.

use crate::error::{Error, Result};

/// Hard cap on the truncation order searched by [`choose_k`].
pub const MAX_TRUNCATION_ORDER: usize = 200;

/// A normalized, symmetric coefficient set a_{-k..k} for a linear
/// combination of walk powers.
///
/// Invariants enforced at construction:
/// * Σ a_m = 1 (the raw Bessel row is divided by its own sum),
/// * a_{-m} = (-1)^m a_m bit-exactly (negative orders are mirrored, never
///   recomputed),
/// * `abs_sum` ≥ 1.
#[derive(Debug, Clone)]
pub struct CoefficientSet {
    /// Segment parameter (negative in production use).
    pub z: f64,
    /// Truncation order; coefficients run m = -k..k.
    pub k: usize,
    /// Coefficients indexed by m + k.
    pub a: Vec<f64>,
    /// Σ |a_m|.
    pub abs_sum: f64,
    /// Σ J_m(z) over m = -k..k before normalization.
    pub raw_norm: f64,
    /// Certified truncation bound at nu_max = 1, see [`truncation_bound`].
    pub bound: f64,
}

impl CoefficientSet {
    /// Coefficient a_m for m in -k..=k.
    pub fn coeff(&self, m: i64) -> f64 {
        self.a[(m + self.k as i64) as usize]
    }

    /// Coefficients as a slice ordered m = -k..k.
    pub fn values(&self) -> &[f64] {
        &self.a
    }

    /// Number of terms, M = 2k + 1.
    pub fn len(&self) -> usize {
        self.a.len()
    }

    pub fn is_empty(&self) -> bool {
        self.a.is_empty()
    }
}

/// J_{-k..k}(z) by Miller's downward recurrence.
///
/// The recurrence starts at `m_start = k + ceil(10 + 2|z|)` with seed values
/// (1, 0), runs J_{m-1} = (2m/z) J_m - J_{m+1} down to 0, and normalizes with
/// J_0 + 2 Σ J_{2s} = 1. Negative orders are mirrored through
/// J_{-m} = (-1)^m J_m, so that symmetry is exact by construction. Values are
/// returned indexed by m + k.
pub fn bessel_row(z: f64, k: usize) -> Vec<f64> {
    let positive = miller_nonnegative(z, k);
    mirror(&positive, k)
}

/// J_0(z), ..., J_max_order(z) via Miller's recurrence.
fn miller_nonnegative(z: f64, max_order: usize) -> Vec<f64> {
    if z == 0.0 {
        let mut out = vec![0.0; max_order + 1];
        out[0] = 1.0;
        return out;
    }
    let margin = (10.0 + 2.0 * z.abs()).ceil() as usize;
    let m_start = max_order + margin;
    let mut values = vec![0.0_f64; m_start + 2];
    values[m_start + 1] = 0.0;
    values[m_start] = 1.0;
    for m in (1..=m_start).rev() {
        let next = (2.0 * m as f64 / z) * values[m] - values[m + 1];
        values[m - 1] = next;
        // Rescale when the dominant solution grows too large; the final
        // normalization cancels any common factor.
        if next.abs() > 1e250 {
            for v in values.iter_mut().skip(m - 1) {
                *v *= 1e-250;
            }
        }
    }
    let mut norm = values[0];
    let mut m = 2;
    while m <= m_start {
        norm += 2.0 * values[m];
        m += 2;
    }
    values.truncate(max_order + 1);
    for v in values.iter_mut() {
        *v /= norm;
    }
    values
}

/// Expand nonnegative orders into a full row -k..k using
/// J_{-m} = (-1)^m J_m exactly.
fn mirror(positive: &[f64], k: usize) -> Vec<f64> {
    let mut out = vec![0.0; 2 * k + 1];
    for m in 0..=k {
        let v = positive[m];
        out[k + m] = v;
        out[k - m] = if m % 2 == 0 { v } else { -v };
    }
    out
}

// Double-double scalar: an unevaluated sum hi + lo carrying ~31 digits.
// The alternating Bessel series has terms up to ~1e11 at |z| = 30, so the
// oracle needs the extra digits to certify 1e-13 absolute accuracy.
#[derive(Debug, Clone, Copy)]
struct DoubleDouble {
    hi: f64,
    lo: f64,
}

impl DoubleDouble {
    fn from(x: f64) -> Self {
        Self { hi: x, lo: 0.0 }
    }

    fn two_sum(a: f64, b: f64) -> Self {
        let s = a + b;
        let bb = s - a;
        let err = (a - (s - bb)) + (b - bb);
        Self { hi: s, lo: err }
    }

    fn two_prod(a: f64, b: f64) -> Self {
        let p = a * b;
        let err = a.mul_add(b, -p);
        Self { hi: p, lo: err }
    }

    fn renorm(hi: f64, lo: f64) -> Self {
        let s = hi + lo;
        Self {
            hi: s,
            lo: lo - (s - hi),
        }
    }

    fn add(self, other: Self) -> Self {
        let s = Self::two_sum(self.hi, other.hi);
        let t = Self::two_sum(self.lo, other.lo);
        let first = Self::renorm(s.hi, s.lo + t.hi);
        Self::renorm(first.hi, first.lo + t.lo)
    }

    fn mul(self, other: Self) -> Self {
        let p = Self::two_prod(self.hi, other.hi);
        Self::renorm(p.hi, p.lo + self.hi * other.lo + self.lo * other.hi)
    }

    fn div_f64(self, x: f64) -> Self {
        let q1 = self.hi / x;
        let prod = Self::two_prod(q1, x);
        let remainder = self.add(Self {
            hi: -prod.hi,
            lo: -prod.lo,
        });
        let q2 = (remainder.hi + remainder.lo) / x;
        Self::renorm(q1, q2)
    }

    fn neg(self) -> Self {
        Self {
            hi: -self.hi,
            lo: -self.lo,
        }
    }
}

/// Direct power-series evaluation of J_m(z), the test oracle.
///
/// Sums (-1)^s (z/2)^{m+2s} / (s! (m+s)!) until a term drops below 1e-18 in
/// magnitude. Terms and the running sum are carried in double-double
/// precision because the alternating terms dwarf the result at moderate |z|.
/// Independent of the recurrence path on purpose.
pub fn series_reference(z: f64, m: i64) -> f64 {
    let m_abs = m.unsigned_abs() as usize;
    let sign = if m < 0 && m_abs % 2 == 1 { -1.0 } else { 1.0 };
    let half = DoubleDouble::from(z / 2.0);
    // term_0 = (z/2)^m / m!, built incrementally to avoid overflow.
    let mut term = DoubleDouble::from(1.0);
    for i in 1..=m_abs {
        term = term.mul(half).div_f64(i as f64);
    }
    let mut sum = term;
    let half_sq = half.mul(half);
    let mut s = 0usize;
    while term.hi.abs() >= 1e-18 && s < 600 {
        s += 1;
        term = term
            .mul(half_sq)
            .div_f64(s as f64 * (m_abs + s) as f64)
            .neg();
        sum = sum.add(term);
    }
    sign * (sum.hi + sum.lo)
}

/// The explicit tail bound 4 |z/2|^{k+1} / (k+1)! on Σ_{|m|>k} |J_m(z)|,
/// valid for |z| ≤ k.
pub fn jbnd_tail(z: f64, k: usize) -> f64 {
    // |z/2|^{k+1} / (k+1)! without overflowing intermediates.
    let half = z.abs() / 2.0;
    let mut b = 1.0_f64;
    for i in 1..=(k + 1) {
        b *= half / i as f64;
    }
    4.0 * b
}

/// Roundoff allowance for evaluating a (2k+1)-term sum against e^{iνz} in
/// f64; added to the analytic truncation bound so the certificate stays valid
/// under floating-point measurement.
fn evaluation_floor(k: usize) -> f64 {
    4.0 * (2 * k + 3) as f64 * f64::EPSILON
}

/// Certified bound on ‖V_k − V_∞‖ for the normalized coefficients at
/// truncation order `k`, where every relevant walk eigenphase satisfies
/// |sin θ| ≤ `nu_max`.
///
/// The bound is assembled from the explicit tail estimates: with
/// b = |z/2|^{k+1}/(k+1)! the unnormalized tail is at most 4b, the
/// normalization factor is at least 1 − 4b, and pairing the ±m tail terms
/// gives the ν-weighted form. The returned value is
///
/// ```text
/// min( 8b, 2·nu_max·b·(2|z| + 3(k+1)²) ) / (1 − 4b)  +  floor(k)
/// ```
///
/// where `floor(k)` is a small f64 evaluation allowance. Infinite when
/// 4b ≥ 1/2 (the truncation is not yet meaningful there).
pub fn truncation_bound(z: f64, k: usize, nu_max: f64) -> Result<f64> {
    if z.abs() > k as f64 {
        return Err(Error::Parameter(format!(
            "truncation bound requires |z| <= k, got z = {z}, k = {k}"
        )));
    }
    if !(0.0..=1.0).contains(&nu_max) {
        return Err(Error::Parameter(format!(
            "nu_max must lie in [0, 1], got {nu_max}"
        )));
    }
    if z == 0.0 {
        return Ok(0.0);
    }
    let tail = jbnd_tail(z, k); // 4b
    if tail >= 0.5 {
        return Ok(f64::INFINITY);
    }
    let b = tail / 4.0;
    let kp = (k + 1) as f64;
    let refined = 2.0 * nu_max * b * (2.0 * z.abs() + 3.0 * kp * kp);
    let crude = 8.0 * b;
    Ok(refined.min(crude) / (1.0 - tail) + evaluation_floor(k))
}

/// Normalized LCU coefficients for segment parameter `z` at order `k`.
///
/// Requires |z| ≤ k, which keeps the normalizing sum Σ J_m ≥ 1 − 4|z/2|^{k+1}/(k+1)!
/// safely positive.
pub fn lcu_coefficients(z: f64, k: usize) -> Result<CoefficientSet> {
    if z.abs() > k as f64 {
        return Err(Error::Parameter(format!(
            "lcu coefficients require |z| <= k, got z = {z}, k = {k}"
        )));
    }
    let row = bessel_row(z, k);
    let raw_norm: f64 = row.iter().sum();
    if raw_norm <= 0.0 {
        return Err(Error::Numeric(format!(
            "coefficient normalization is not positive: {raw_norm}"
        )));
    }
    // Normalize nonnegative orders and mirror, so the parity symmetry stays
    // bit-exact after division.
    let positive: Vec<f64> = (0..=k).map(|m| row[k + m] / raw_norm).collect();
    let a = mirror(&positive, k);
    let abs_sum = a.iter().map(|x| x.abs()).sum();
    let bound = truncation_bound(z, k, 1.0)?;
    Ok(CoefficientSet {
        z,
        k,
        a,
        abs_sum,
        raw_norm,
        bound,
    })
}

/// Σ_m |J_m(z)|, summed until the explicit tail bound at the running cutoff
/// falls below 1e-10.
pub fn abs_sum_estimate(z: f64) -> f64 {
    if z == 0.0 {
        return 1.0;
    }
    let mut k = z.abs().ceil() as usize + 1;
    while jbnd_tail(z, k) > 1e-10 && k < 4 * MAX_TRUNCATION_ORDER {
        k += 1;
    }
    let positive = miller_nonnegative(z, k);
    positive[0].abs() + 2.0 * positive[1..].iter().map(|v| v.abs()).sum::<f64>()
}

/// Smallest k ≥ max(1, ⌈|z|⌉) whose certified truncation bound is at most
/// `delta`. Errors once the search passes [`MAX_TRUNCATION_ORDER`].
pub fn choose_k(z: f64, delta: f64, nu_max: f64) -> Result<usize> {
    if delta <= 0.0 {
        return Err(Error::Parameter(format!(
            "per-segment budget must be positive, got {delta}"
        )));
    }
    let mut k = (z.abs().ceil() as usize).max(1);
    loop {
        if truncation_bound(z, k, nu_max)? <= delta {
            return Ok(k);
        }
        k += 1;
        if k > MAX_TRUNCATION_ORDER {
            return Err(Error::Capacity(format!(
                "no truncation order up to {MAX_TRUNCATION_ORDER} meets budget {delta} at z = {z}"
            )));
        }
    }
}
