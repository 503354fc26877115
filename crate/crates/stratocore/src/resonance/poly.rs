//! The resonance polynomial and its positive roots in `a₃`.
//!
//! For `(k, m, n = k + m)` write `x, y, z` for `ω(k)², ω(m)², ω(n)²`. The
//! oscillating triad condition `ω(k) ± ω(m) = ±ω(n)` holds for some signs iff
//! `x² + y² + z² − 2xy − 2xz − 2yz = 0`. Clearing the denominators
//! `|ǩ|⁴|m̌|⁴|ň|⁴` gives a polynomial that is homogeneous of degree 12 in the
//! check frequencies. With `|ǩ|² = H_k + k₃²/a₃²` and `H_k = |ǩ_h|²` fixed by
//! `a_h`, its product with `a₃⁸` is `Σ_α P_α a₃^{8−α}` with only even powers,
//! so roots are found in `u = a₃²` on a quartic.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Num, Signed, ToPrimitive, Zero};

use super::exact::{rational_square, MAX_DENOMINATOR};
use crate::math::sqrt;
use crate::{Error, Result};

/// `(H, V)` such that `|ǩ|² = H + V t` with `t = 1/a₃²`.
fn split<T: Num + Clone>(k: [i64; 3], inv_a1: &T, inv_a2: &T) -> [T; 2] {
    let sq = |x: i64| from_i64::<T>(x * x);
    let h = sq(k[0]) * inv_a1.clone() + sq(k[1]) * inv_a2.clone();
    [h, sq(k[2])]
}

fn from_i64<T: Num + Clone>(x: i64) -> T {
    let neg = x < 0;
    let mut n = x.unsigned_abs();
    let mut acc = T::zero();
    let mut pow = T::one();
    while n > 0 {
        if n & 1 == 1 {
            acc = acc + pow.clone();
        }
        pow = pow.clone() + pow;
        n >>= 1;
    }
    if neg {
        T::zero() - acc
    } else {
        acc
    }
}

fn pmul<T: Num + Clone>(a: &[T], b: &[T]) -> Vec<T> {
    let mut out = vec![T::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = out[i + j].clone() + x.clone() * y.clone();
        }
    }
    out
}

fn padd<T: Num + Clone>(acc: &mut Vec<T>, p: &[T], s: T) {
    if acc.len() < p.len() {
        acc.resize(p.len(), T::zero());
    }
    for (a, x) in acc.iter_mut().zip(p.iter()) {
        *a = a.clone() + s.clone() * x.clone();
    }
}

/// Coefficients `f_j` of `t^j`, `j = 0..=4`, of the cleared polynomial.
fn t_coefficients<T: Num + Clone>(k: [i64; 3], m: [i64; 3], inv_a1: &T, inv_a2: &T) -> Vec<T> {
    let n = [k[0] + m[0], k[1] + m[1], k[2] + m[2]];
    let [hk, vk] = split(k, inv_a1, inv_a2);
    let [hm, vm] = split(m, inv_a1, inv_a2);
    let [hn, vn] = split(n, inv_a1, inv_a2);
    let pk = [hk.clone(), vk];
    let pm = [hm.clone(), vm];
    let pn = [hn.clone(), vn];
    let two = T::one() + T::one();
    let mut out: Vec<T> = vec![T::zero(); 5];
    let sq = |p: &[T; 2]| pmul(p, p);
    padd(&mut out, &pmul(&sq(&pm), &sq(&pn)), hk.clone() * hk.clone());
    padd(&mut out, &pmul(&sq(&pk), &sq(&pn)), hm.clone() * hm.clone());
    padd(&mut out, &pmul(&sq(&pk), &sq(&pm)), hn.clone() * hn.clone());
    let minus = |x: T| T::zero() - two.clone() * x;
    padd(
        &mut out,
        &pmul(&pmul(&pk, &pm), &sq(&pn)),
        minus(hk.clone() * hm.clone()),
    );
    padd(
        &mut out,
        &pmul(&pmul(&pk, &pn), &sq(&pm)),
        minus(hk.clone() * hn.clone()),
    );
    padd(&mut out, &pmul(&pmul(&pm, &pn), &sq(&pk)), minus(hm * hn));
    out
}

/// `[P₀, …, P₈]` with `a₃⁸ · poly = Σ_α P_α a₃^{8−α}`; odd entries are zero.
pub fn poly_coefficients(k: [i64; 3], m: [i64; 3], a_h: [f64; 2]) -> [f64; 9] {
    let inv = [1.0 / (a_h[0] * a_h[0]), 1.0 / (a_h[1] * a_h[1])];
    let f = t_coefficients::<f64>(k, m, &inv[0], &inv[1]);
    let mut out = [0.0; 9];
    for (j, c) in f.into_iter().enumerate() {
        out[2 * j] = c;
    }
    out
}

/// `(P₀, P₈)`: the pure-horizontal and pure-vertical leading sums.
pub fn leading_terms(k: [i64; 3], m: [i64; 3], a_h: [f64; 2]) -> (f64, f64) {
    let c = poly_coefficients(k, m, a_h);
    (c[0], c[8])
}

/// The three-square combination minus the two cross terms and the
/// `2|ǩ_h|²|m̌_h|²|ǩ|²|m̌|²|ň|⁴` term, evaluated at check frequencies.
/// Zero exactly when some oscillating labeling is resonant.
pub fn resonance_polynomial(k: [i64; 3], m: [i64; 3], a: [f64; 3]) -> f64 {
    let (v, _) = polynomial_and_scale(k, m, a);
    v
}

/// Value and the sum of absolute values of its six terms.
pub(crate) fn polynomial_and_scale(k: [i64; 3], m: [i64; 3], a: [f64; 3]) -> (f64, f64) {
    let n = [k[0] + m[0], k[1] + m[1], k[2] + m[2]];
    let parts = |v: [i64; 3]| {
        let c = [v[0] as f64 / a[0], v[1] as f64 / a[1], v[2] as f64 / a[2]];
        let h = c[0] * c[0] + c[1] * c[1];
        (h, h + c[2] * c[2])
    };
    let (hk, kk) = parts(k);
    let (hm, mm) = parts(m);
    let (hn, nn) = parts(n);
    let terms = [
        hk * hk * mm * mm * nn * nn,
        hm * hm * kk * kk * nn * nn,
        hn * hn * kk * kk * mm * mm,
        -2.0 * hk * hn * kk * nn * mm * mm,
        -2.0 * hm * hn * mm * nn * kk * kk,
        -2.0 * hk * hm * kk * mm * nn * nn,
    ];
    let v = terms.iter().sum();
    let s = terms.iter().map(|x| x.abs()).sum();
    (v, s)
}

#[derive(Clone, Debug, PartialEq)]
pub enum RootWarning {
    /// Relative root sensitivity `scale / (|∂_{a₃} poly| a₃)` above the threshold.
    Precision { root: f64, condition: f64 },
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct RootReport {
    /// Positive roots `a₃` in increasing order.
    pub roots: Vec<f64>,
    /// `|poly(a₃)| / Σ|terms|` at each root.
    pub residuals: Vec<f64>,
    pub warnings: Vec<RootWarning>,
}

/// Search window and conditioning threshold for [`a3_resonant_roots`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RootOptions {
    pub a3_min: f64,
    pub a3_max: f64,
    pub condition_threshold: f64,
}

impl Default for RootOptions {
    fn default() -> Self {
        Self {
            a3_min: 1e-2,
            a3_max: 100.0,
            condition_threshold: 1e8,
        }
    }
}

type Poly = Vec<BigRational>;

fn trim(mut p: Poly) -> Poly {
    while p.len() > 1 && p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

fn is_zero_poly(p: &Poly) -> bool {
    p.iter().all(|c| c.is_zero())
}

fn eval(p: &Poly, x: &BigRational) -> BigRational {
    let mut acc = BigRational::zero();
    for c in p.iter().rev() {
        acc = acc * x + c;
    }
    acc
}

fn deriv(p: &Poly) -> Poly {
    if p.len() <= 1 {
        return vec![BigRational::zero()];
    }
    trim(
        (1..p.len())
            .map(|i| &p[i] * BigRational::from_integer(BigInt::from(i as i64)))
            .collect(),
    )
}

/// Quotient and remainder of polynomial division.
fn divrem(a: &Poly, b: &Poly) -> (Poly, Poly) {
    let b = trim(b.clone());
    let mut r = trim(a.clone());
    let db = b.len() - 1;
    if r.len() < b.len() {
        return (vec![BigRational::zero()], r);
    }
    let mut q = vec![BigRational::zero(); r.len() - db];
    let lead = b[db].clone();
    while r.len() >= b.len() && !is_zero_poly(&r) {
        let shift = r.len() - b.len();
        let c = r[r.len() - 1].clone() / &lead;
        for (i, bc) in b.iter().enumerate() {
            r[i + shift] = &r[i + shift] - &c * bc;
        }
        q[shift] = c;
        r.pop();
        r = trim(r);
        if r.len() == 1 && r[0].is_zero() {
            break;
        }
    }
    (trim(q), r)
}

fn gcd(a: &Poly, b: &Poly) -> Poly {
    let (mut x, mut y) = (trim(a.clone()), trim(b.clone()));
    while !is_zero_poly(&y) {
        let (_, r) = divrem(&x, &y);
        x = y;
        y = r;
    }
    x
}

fn sign(x: &BigRational) -> i8 {
    if x.is_zero() {
        0
    } else if x.is_positive() {
        1
    } else {
        -1
    }
}

fn sturm_chain(p: &Poly) -> Vec<Poly> {
    let mut chain = vec![p.clone(), deriv(p)];
    loop {
        let n = chain.len();
        if is_zero_poly(&chain[n - 1]) {
            chain.pop();
            break;
        }
        let (_, r) = divrem(&chain[n - 2], &chain[n - 1]);
        if is_zero_poly(&r) {
            break;
        }
        chain.push(r.into_iter().map(|c| -c).collect());
    }
    chain
}

fn variations(chain: &[Poly], x: &BigRational) -> usize {
    let mut last = 0i8;
    let mut v = 0;
    for p in chain {
        let s = sign(&eval(p, x));
        if s != 0 {
            if last != 0 && s != last {
                v += 1;
            }
            last = s;
        }
    }
    v
}

fn half(a: &BigRational, b: &BigRational) -> BigRational {
    (a + b) / BigRational::from_integer(BigInt::from(2))
}

/// Isolate the roots of a square-free `p` in `(lo, hi]` into intervals that
/// contain exactly one root each.
fn isolate(
    chain: &[Poly],
    lo: BigRational,
    hi: BigRational,
    out: &mut Vec<(BigRational, BigRational)>,
    depth: u32,
) {
    let count = variations(chain, &lo) - variations(chain, &hi);
    if count == 0 {
        return;
    }
    if count == 1 || depth > 200 {
        out.push((lo, hi));
        return;
    }
    let mid = half(&lo, &hi);
    isolate(chain, lo, mid.clone(), out, depth + 1);
    isolate(chain, mid, hi, out, depth + 1);
}

/// Exact bisection down to a relative width of `1e-6`, then floating
/// bisection in `a₃` on the direct form, which changes sign with the quartic.
fn refine(p: &Poly, mut lo: BigRational, mut hi: BigRational, direct: impl Fn(f64) -> f64) -> f64 {
    let s_hi = sign(&eval(p, &hi));
    if s_hi == 0 {
        return sqrt(hi.to_f64().unwrap_or(f64::NAN));
    }
    for _ in 0..200 {
        let width = (&hi - &lo).to_f64().unwrap_or(0.0);
        if width <= 1e-6 * hi.to_f64().unwrap_or(1.0).abs() {
            break;
        }
        let mid = half(&lo, &hi);
        let s = sign(&eval(p, &mid));
        if s == 0 {
            return sqrt(mid.to_f64().unwrap_or(f64::NAN));
        }
        if s == s_hi {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let (mut a, mut b) = (
        sqrt(lo.to_f64().unwrap_or(0.0)),
        sqrt(hi.to_f64().unwrap_or(0.0)),
    );
    let sb = direct(b).signum();
    for _ in 0..64 {
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            break;
        }
        let v = direct(mid);
        if v == 0.0 {
            return mid;
        }
        if v.signum() == sb {
            b = mid;
        } else {
            a = mid;
        }
    }
    0.5 * (a + b)
}

/// `1/a²`, as a small rational when `a²` is one, else exactly from the float.
fn inverse_square(a: f64) -> Result<BigRational> {
    if let Some((p, q)) = rational_square(a, MAX_DENOMINATOR) {
        return Ok(BigRational::new(BigInt::from(q), BigInt::from(p)));
    }
    let x = exact(a)?;
    Ok((&x * &x).recip())
}

fn exact(x: f64) -> Result<BigRational> {
    BigRational::from_float(x).ok_or_else(|| Error::Root(format!("non-finite parameter {}", x)))
}

/// All `a₃ ∈ [a3_min, a3_max]` making `(k, m, k + m)` resonant for some
/// oscillating labeling, with `a_h` fixed.
///
/// Needs `k_h, m_h, n_h ≠ 0` (so `P₀ ≠ 0`). Roots are isolated with an exact
/// Sturm sequence in `u = a₃²` and refined by bisection; ill-conditioned roots
/// come back with a [`RootWarning::Precision`] entry.
pub fn a3_resonant_roots(
    k: [i64; 3],
    m: [i64; 3],
    a_h: [f64; 2],
    opts: RootOptions,
) -> Result<RootReport> {
    let n = [k[0] + m[0], k[1] + m[1], k[2] + m[2]];
    for (name, v) in [("k", k), ("m", m), ("n", n)] {
        if v[0] == 0 && v[1] == 0 {
            return Err(Error::Root(format!(
                "P0 = 0: {}_h = 0 for {} = {:?}",
                name, name, v
            )));
        }
    }
    if !(opts.a3_min > 0.0 && opts.a3_max > opts.a3_min) {
        return Err(Error::Root(format!(
            "bad search window [{}, {}]",
            opts.a3_min, opts.a3_max
        )));
    }
    let inv1 = inverse_square(a_h[0])?;
    let inv2 = inverse_square(a_h[1])?;
    let f = t_coefficients::<BigRational>(k, m, &inv1, &inv2);
    // a₃⁸ Σ f_j a₃^{−2j} = Σ f_j u^{4−j}; store low → high in u
    let q: Poly = trim(f.into_iter().rev().collect());
    let mut report = RootReport::default();
    if is_zero_poly(&q) {
        return Err(Error::Root("polynomial vanishes identically".into()));
    }
    if q.len() == 1 {
        return Ok(report);
    }
    let g = gcd(&q, &deriv(&q));
    let sqfree = if g.len() > 1 { divrem(&q, &g).0 } else { q };
    let chain = sturm_chain(&sqfree);
    let lo = exact(opts.a3_min * opts.a3_min)?;
    let hi = exact(opts.a3_max * opts.a3_max)?;
    let mut intervals = Vec::new();
    isolate(&chain, lo, hi, &mut intervals, 0);
    let a = |a3: f64| [a_h[0], a_h[1], a3];
    for (l, h) in intervals {
        let root = refine(&sqfree, l, h, |x| polynomial_and_scale(k, m, a(x)).0);
        let (v, s) = polynomial_and_scale(k, m, a(root));
        report
            .residuals
            .push(if s > 0.0 { v.abs() / s } else { 0.0 });
        let dh = 1e-7 * root;
        let dv = (polynomial_and_scale(k, m, a(root + dh)).0
            - polynomial_and_scale(k, m, a(root - dh)).0)
            / (2.0 * dh);
        let condition = if dv != 0.0 {
            s / (dv.abs() * root)
        } else {
            f64::INFINITY
        };
        if condition > opts.condition_threshold {
            report
                .warnings
                .push(RootWarning::Precision { root, condition });
        }
        report.roots.push(root);
    }
    Ok(report)
}

/// One root found by [`a3_root_scan`], with the first pair that produced it.
#[derive(Clone, Debug, PartialEq)]
pub struct ScanRoot {
    pub k: [i64; 3],
    pub m: [i64; 3],
    pub a3: f64,
    pub residual: f64,
    pub warned: bool,
}

/// Roots in `a₃` for every `(k, m)` with `k_h, m_h, n_h ≠ 0` and
/// `|k|∞, |m|∞, |n|∞ ≤ cutoff`.
///
/// The polynomial depends only on the squared components of `k`, `m`, `n`
/// and is symmetric under permuting them, so each class is solved once and
/// reported with its lexicographically first pair.
pub fn a3_root_scan(cutoff: i64, a_h: [f64; 2], opts: RootOptions) -> Result<Vec<ScanRoot>> {
    let mut seen = alloc::collections::BTreeSet::new();
    let mut out = Vec::new();
    let mut failure = None;
    super::for_each_pair(cutoff, |k, m, n| {
        if failure.is_some()
            || [k, m, n]
                .iter()
                .any(|v| (v[0] == 0 && v[1] == 0) || v.iter().any(|x| x.abs() > cutoff))
        {
            return;
        }
        let mut key = [k, m, n].map(|v| v.map(|x| x * x));
        key.sort();
        if !seen.insert(key) {
            return;
        }
        match a3_resonant_roots(k, m, a_h, opts) {
            Ok(r) => {
                for (i, (&a3, &residual)) in r.roots.iter().zip(r.residuals.iter()).enumerate() {
                    let warned = r
                        .warnings
                        .iter()
                        .any(|RootWarning::Precision { root, .. }| *root == r.roots[i]);
                    out.push(ScanRoot {
                        k,
                        m,
                        a3,
                        residual,
                        warned,
                    });
                }
            }
            Err(e) => failure = Some(e),
        }
    });
    match failure {
        Some(e) => Err(e),
        None => Ok(out),
    }
}
