//! Complete exponential sums, multiplicative weight functions, weighted
//! generating-function evaluators, congruence-solution counters, and
//! the major/minor arc dissection.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::arith::{self, gcd, mul_mod, pow_mod, FactoredInteger};
use crate::conv::cyclic_convolve_exact;
use crate::cubes::{ParamSet, WeightMap};
use crate::error::{Error, Result};
use crate::smooth::SmoothSet;

/// A reduced rational point a/q on the unit torus.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RationalPoint {
    pub a: u64,
    pub q: u64,
}

impl RationalPoint {
    pub fn new(a: u64, q: u64) -> Result<RationalPoint> {
        let reduced = q >= 1 && a <= q && (gcd(a, q) == 1 || (a == 0 && q == 1));
        if !reduced {
            return Err(Error::Validation(format!(
                "rational point requires 0 <= a <= q, gcd(a, q) = 1, got {a}/{q}"
            )));
        }
        Ok(RationalPoint { a, q })
    }

    pub fn value(&self) -> f64 {
        self.a as f64 / self.q as f64
    }
}

/// e(x) = exp(2 pi i x).
#[inline]
pub fn unit_phase(x: f64) -> Complex64 {
    let (s, c) = (2.0 * std::f64::consts::PI * x).sin_cos();
    Complex64::new(c, s)
}

/// Exact fractional part of alpha * m for alpha in [0, 1) and m up to
/// 2^128.
///
/// alpha is decomposed into mantissa * 2^exp; the 53 x 128 bit product
/// is formed in full and reduced mod 2^(-exp), so the only rounding is
/// the final conversion back to f64. Plain f64 multiplication would
/// lose the fractional part entirely for arguments beyond 2^53.
pub fn frac_mul(alpha: f64, m: u128) -> f64 {
    debug_assert!((0.0..1.0).contains(&alpha), "alpha = {alpha}");
    if alpha == 0.0 || m == 0 {
        return 0.0;
    }
    let bits = alpha.to_bits();
    let exp_field = ((bits >> 52) & 0x7ff) as i64;
    let frac_field = bits & ((1u64 << 52) - 1);
    let (mant, exp) = if exp_field == 0 {
        (frac_field, -1074i64)
    } else {
        (frac_field | (1 << 52), exp_field - 1075)
    };
    let s = (-exp) as u32; // alpha * m = mant * m / 2^s, s >= 53
    let m_lo = m as u64 as u128;
    let m_hi = m >> 64;
    let p_lo = mant as u128 * m_lo;
    let p_hi = mant as u128 * m_hi;
    // total = hi * 2^64 + lo with hi <= 2^118
    let lo = p_lo as u64;
    let hi = p_hi + (p_lo >> 64);
    const TWO64: f64 = 18_446_744_073_709_551_616.0;
    let frac = if s >= 192 {
        (hi as f64 * TWO64 + lo as f64) * (-(s as f64)).exp2()
    } else if s <= 64 {
        let r = lo & (u64::MAX >> (64 - s));
        r as f64 * (-(s as f64)).exp2()
    } else {
        let keep = s - 64; // < 128
        let r_hi = if keep >= 128 {
            hi
        } else {
            hi & ((1u128 << keep) - 1)
        };
        (r_hi as f64 * TWO64 + lo as f64) * (-(s as f64)).exp2()
    };
    if frac >= 1.0 {
        frac - 1.0
    } else {
        frac
    }
}

/// Pairwise (cascade) summation of complex terms.
pub fn pairwise_sum(terms: &[Complex64]) -> Complex64 {
    match terms.len() {
        0 => Complex64::new(0.0, 0.0),
        n if n <= 16 => terms.iter().sum(),
        n => pairwise_sum(&terms[..n / 2]) + pairwise_sum(&terms[n / 2..]),
    }
}

/// Complete power sum S_k(q, a) = sum_{r=1}^{q} e_q(a r^k).
pub fn gauss_power_sum(q: u64, a: u64, k: u32) -> Complex64 {
    assert!(q >= 1);
    let a = a % q;
    let terms: Vec<Complex64> = (1..=q)
        .map(|r| {
            let t = mul_mod(a, pow_mod(r, k as u64, q), q);
            unit_phase(t as f64 / q as f64)
        })
        .collect();
    pairwise_sum(&terms)
}

/// All moduli |S_k(q, a)| for a = 0..q at once, via a DFT of the
/// k-th-power histogram.
pub fn gauss_power_sum_all(q: u64, k: u32) -> Vec<f64> {
    use rustfft::{num_complex::Complex, FftPlanner};
    let qn = q as usize;
    let mut hist = vec![0.0f64; qn];
    for r in 1..=q {
        hist[pow_mod(r, k as u64, q) as usize] += 1.0;
    }
    let mut buf: Vec<Complex<f64>> = hist.into_iter().map(|c| Complex::new(c, 0.0)).collect();
    FftPlanner::new().plan_fft_forward(qn).process(&mut buf);
    buf.into_iter().map(|c| c.norm()).collect()
}

/// tau_k(q): tau_2(q) = q^(-1/2); for k = 3, 4 (and 12) the prime-power
/// table tau_k(p^(uk+1)) = k p^(-u-1/2) and tau_k(p^(uk+v)) = p^(-u-1)
/// for 2 <= v <= k. Exponents are formed as exact rationals before the
/// single powf call.
pub fn tau_weight(q: &FactoredInteger, k: u32) -> f64 {
    assert!((2..=4).contains(&k) || k == 12);
    if k == 2 {
        return arith::eval_multiplicative(|p, e| (p as f64).powf(-(e as f64) / 2.0), q);
    }
    arith::eval_multiplicative(
        |p, e| {
            let v = (e - 1) % k + 1;
            let u = (e - v) / k;
            if v == 1 {
                k as f64 * (p as f64).powf(-((2 * u + 1) as f64) / 2.0)
            } else {
                (p as f64).powf(-((u + 1) as f64))
            }
        },
        q,
    )
}

/// w_k(q): the three-case prime-power table
/// w_k(p^(3ku+v)) = p^(-u-v/3k) for u >= 1, p^(-1/2) for u = 0, v = 1,
/// and p^(-1) for u = 0, 2 <= v <= 3k.
pub fn w_weight(q: &FactoredInteger, k: u32) -> f64 {
    assert!((2..=4).contains(&k));
    let period = 3 * k;
    arith::eval_multiplicative(
        |p, e| {
            let v = (e - 1) % period + 1;
            let u = (e - v) / period;
            if u >= 1 {
                // -u - v/3k = -e/3k exactly
                (p as f64).powf(-(e as f64) / period as f64)
            } else if v == 1 {
                (p as f64).powf(-0.5)
            } else {
                1.0 / p as f64
            }
        },
        q,
    )
}

/// Shifted complete sum sum_{r=1}^{q} e_q(a (r^3 + c)^k + b r).
/// b = 0 recovers the plain shifted power sum.
pub fn shifted_sum(q: u64, a: u64, b: u64, c: u64, k: u32) -> Complex64 {
    assert!(q >= 1);
    let (a, b, c) = (a % q, b % q, c % q);
    let terms: Vec<Complex64> = (1..=q)
        .map(|r| {
            let base = (pow_mod(r, 3, q) + c) % q;
            let t = (mul_mod(a, pow_mod(base, k as u64, q), q) + mul_mod(b, r, q)) % q;
            unit_phase(t as f64 / q as f64)
        })
        .collect();
    pairwise_sum(&terms)
}

/// Result of the normalized product sum over reduced residues.
#[derive(Debug, Clone, Copy)]
pub struct ProductSum {
    /// Real part (the sum is real by conjugate symmetry).
    pub value: f64,
    /// |imaginary residue| of the computed sum.
    pub imag_abs: f64,
    /// L1 mass of the normalized summand.
    pub l1: f64,
    /// Forward rounding bound for the sum: each complete-sum factor
    /// carries ~q*eps of absolute noise, amplified by the other factors
    /// (leave-one-out products). Instances whose factors cancel exactly
    /// would otherwise fail any fixed relative test.
    pub noise_floor: f64,
    /// Set when a listed prime divides q; the value is still computed.
    pub prime_divides_q: bool,
}

impl ProductSum {
    /// Conjugate-symmetry check: the imaginary residue is no more than
    /// `rel` of the summand mass beyond the rounding floor.
    pub fn is_real(&self, rel: f64) -> bool {
        self.imag_abs <= rel * self.l1 + self.noise_floor
    }

    /// Imaginary residue relative to the attainable scale.
    pub fn imag_ratio(&self) -> f64 {
        self.imag_abs / (self.l1 + self.noise_floor).max(f64::MIN_POSITIVE)
    }
}

/// q^(-S) sum_{(a,q)=1} e(-a n / q) prod_i S_{c_i}(q, a) over all
/// slots, where the first block of slots carries prime-scaled shifts
/// p^3 c and the rest plain shifts c. Arity is generic: any slot counts
/// are accepted.
pub fn product_sum(q: u64, scaled: &[(u64, u64)], plain: &[u64], n: u64, k: u32) -> ProductSum {
    assert!(q >= 1);
    let prime_divides_q = scaled.iter().any(|&(p, _)| q % p == 0);
    let shifts: Vec<u64> = scaled
        .iter()
        .map(|&(p, c)| mul_mod(pow_mod(p, 3, q), c % q, q))
        .chain(plain.iter().map(|&c| c % q))
        .collect();
    let mut distinct: Vec<u64> = shifts.clone();
    distinct.sort_unstable();
    distinct.dedup();
    let slot_count = shifts.len() as i32;
    let n_mod = n % q;
    let mut terms: Vec<Complex64> = Vec::new();
    let mut noise = 0.0f64;
    for a in 1..=q {
        if gcd(a, q) != 1 {
            continue;
        }
        let front = if q == 1 {
            unit_phase(0.0)
        } else {
            unit_phase(((q - mul_mod(a, n_mod, q)) % q) as f64 / q as f64)
        };
        let table: Vec<(u64, Complex64)> = distinct
            .iter()
            .map(|&c| (c, shifted_sum(q, a, 0, c, k)))
            .collect();
        let mut prod = front;
        let mags: Vec<f64> = shifts
            .iter()
            .map(|&c| table.iter().find(|&&(tc, _)| tc == c).unwrap().1.norm())
            .collect();
        for &c in &shifts {
            let v = table.iter().find(|&&(tc, _)| tc == c).unwrap().1;
            prod *= v;
        }
        terms.push(prod);
        // leave-one-out amplification of the per-factor rounding
        let mut loo_max = 0.0f64;
        for j in 0..mags.len() {
            let loo: f64 = mags
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != j)
                .map(|(_, &m)| m)
                .product();
            loo_max = loo_max.max(loo);
        }
        noise += 1e-14 * q as f64 * loo_max.max(1.0);
    }
    let scale = (q as f64).powi(-slot_count);
    let total = pairwise_sum(&terms) * scale;
    let l1: f64 = terms.iter().map(|t| t.norm()).sum::<f64>() * scale;
    ProductSum {
        value: total.re,
        imag_abs: total.im.abs(),
        l1,
        noise_floor: noise * scale,
        prime_divides_q,
    }
}

/// Weighted generating functions evaluated on the torus.
pub enum Generating<'a> {
    /// sum_x a_x e(alpha x^k)
    WeightedPowers { weights: &'a WeightMap, k: u32 },
    /// sum_p sum_h b_h e(alpha p^(3k) h^k), p over the given primes
    PrimeScaledPowers {
        weights: &'a WeightMap,
        primes: &'a [u64],
        k: u32,
    },
    /// sum_{x in A} e(alpha x^3)
    SmoothCubes { set: &'a SmoothSet },
    /// sum_{x in A} e(alpha x^12)
    SmoothTwelfth { set: &'a SmoothSet },
}

fn checked_pow(base: u64, exp: u32, what: &str) -> Result<u128> {
    let mut acc: u128 = 1;
    for _ in 0..exp {
        acc = acc
            .checked_mul(base as u128)
            .ok_or_else(|| Error::Overflow(format!("{what}: {base}^{exp} exceeds 128 bits")))?;
    }
    Ok(acc)
}

/// Evaluate a generating function. Integer phase arguments are formed
/// in 128-bit arithmetic and reduced to the torus through `frac_mul`,
/// keeping full phase accuracy for arguments far beyond 2^53.
pub fn eval_generating(g: &Generating, alpha: f64) -> Result<Complex64> {
    let alpha = alpha.rem_euclid(1.0);
    let mut terms: Vec<Complex64> = Vec::new();
    match g {
        Generating::WeightedPowers { weights, k } => {
            for (&x, &mult) in &weights.entries {
                let arg = checked_pow(x, *k, "x^k term")?;
                terms.push(unit_phase(frac_mul(alpha, arg)) * mult as f64);
            }
        }
        Generating::PrimeScaledPowers { weights, primes, k } => {
            for &p in primes.iter() {
                let scale = checked_pow(p, 3 * *k, "p^(3k) factor")?;
                for (&h, &mult) in &weights.entries {
                    let hk = checked_pow(h, *k, "h^k term")?;
                    let arg = scale.checked_mul(hk).ok_or_else(|| {
                        Error::Overflow(format!("p^(3k) h^k term with p={p}, h={h}"))
                    })?;
                    terms.push(unit_phase(frac_mul(alpha, arg)) * mult as f64);
                }
            }
        }
        Generating::SmoothCubes { set } => {
            for &x in &set.members {
                terms.push(unit_phase(frac_mul(alpha, checked_pow(x, 3, "x^3 term")?)));
            }
        }
        Generating::SmoothTwelfth { set } => {
            for &x in &set.members {
                terms.push(unit_phase(frac_mul(alpha, checked_pow(x, 12, "x^12 term")?)));
            }
        }
    }
    Ok(pairwise_sum(&terms))
}

/// Congruence-solution counters from the arc-pruning analysis.
pub enum CongruenceMode<'a> {
    /// Solutions of T(x1)^k + T(x2)^k = T(x3)^k + T(x4)^k (mod q) with
    /// x_i in [1, P]^3.
    R { p_limit: u64, k: u32 },
    /// Same with T(p x_i)^k, x_i in [1, h13]^3 and p over the primes.
    N {
        h13: u64,
        primes: &'a [u64],
        k: u32,
    },
}

/// Histogram of T(x) mod q over x in [1, limit]^3, by two cyclic
/// convolutions of the cube-residue histogram.
fn t_histogram(q: u64, limit: u64) -> Result<Vec<u128>> {
    let qn = q as usize;
    let mut cube = vec![0u128; qn];
    for j in 0..q.min(limit) {
        let x = j + 1;
        let count = (limit - x) / q + 1;
        cube[pow_mod(x, 3, q) as usize] += count as u128;
    }
    let two = cyclic_convolve_exact(&cube, &cube, qn)?;
    cyclic_convolve_exact(&two, &cube, qn)
}

/// Exact count via value histograms, two self-convolutions over Z/q and
/// a diagonal inner product; never a naive 4-tuple enumeration.
pub fn congruence_count(mode: &CongruenceMode, q: u64) -> Result<u128> {
    if q == 0 || q > 1_000_000 {
        return Err(Error::Validation(format!("q must be in [1, 10^6], got {q}")));
    }
    let qn = q as usize;
    let single: Vec<u128> = match mode {
        CongruenceMode::R { p_limit, k } => {
            let p3 = (*p_limit as u128).pow(3);
            if p3 > 100_000_000 {
                return Err(Error::Resource(format!(
                    "P^3 = {p3} exceeds the 10^8 enumeration budget"
                )));
            }
            let t_hist = t_histogram(q, *p_limit)?;
            let mut single = vec![0u128; qn];
            for (v, &count) in t_hist.iter().enumerate() {
                if count > 0 {
                    single[pow_mod(v as u64, *k as u64, q) as usize] += count;
                }
            }
            single
        }
        CongruenceMode::N { h13, primes, k } => {
            let budget = (*h13 as u128).pow(3) * primes.len() as u128;
            if budget > 100_000_000 {
                return Err(Error::Resource(format!(
                    "H * prime-count = {budget} exceeds the 10^8 budget"
                )));
            }
            let t_hist = t_histogram(q, *h13)?;
            let mut single = vec![0u128; qn];
            for &p in primes.iter() {
                let p3 = pow_mod(p, 3, q);
                for (v, &count) in t_hist.iter().enumerate() {
                    if count > 0 {
                        let scaled = mul_mod(p3, v as u64, q);
                        single[pow_mod(scaled, *k as u64, q) as usize] += count;
                    }
                }
            }
            single
        }
    };
    let pair = cyclic_convolve_exact(&single, &single, qn)?;
    let mut total: u128 = 0;
    for &b in &pair {
        total = total
            .checked_add(
                b.checked_mul(b)
                    .ok_or_else(|| Error::Overflow("pair-histogram square".into()))?,
            )
            .ok_or_else(|| Error::Overflow("diagonal inner product".into()))?;
    }
    Ok(total)
}

/// A family of major arcs: center height bound and half-width rule.
#[derive(Debug, Clone, Copy)]
pub enum ArcScheme {
    /// Centers a/q with q <= height, half-width height/(q n).
    Major { height: f64, n: u64 },
    /// Centers with q <= m^k, half-width m/(q^(1/k) n).
    MajorPrime { m: f64, k: u32, n: u64 },
    /// Narrow arcs: q <= r, half-width r/n.
    Narrow { r: f64, n: u64 },
}

impl ArcScheme {
    pub fn height(&self) -> f64 {
        match *self {
            ArcScheme::Major { height, .. } => height,
            ArcScheme::MajorPrime { m, k, .. } => m.powi(k as i32),
            ArcScheme::Narrow { r, .. } => r,
        }
    }

    pub fn width(&self, q: u64) -> f64 {
        match *self {
            ArcScheme::Major { height, n } => height / (q as f64 * n as f64),
            ArcScheme::MajorPrime { m, k, n } => m / ((q as f64).powf(1.0 / k as f64) * n as f64),
            ArcScheme::Narrow { r, n } => r / n as f64,
        }
    }
}

/// Classification of a torus point against an arc scheme.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArcClass {
    Inside { a: u64, q: u64 },
    Minor,
}

/// Continued-fraction convergents (a_i, q_i) of alpha with q_i <= q_max,
/// in increasing denominator order.
pub fn convergents(alpha: f64, q_max: u64) -> Vec<(u64, u64)> {
    let mut out = Vec::new();
    let (mut h0, mut h1) = (0u64, 1u64); // numerators h_{-2}, h_{-1}
    let (mut k0, mut k1) = (1u64, 0u64); // denominators
    let mut x = alpha;
    for _ in 0..64 {
        let a = x.floor();
        if !a.is_finite() || a < 0.0 || a > 1e18 {
            break;
        }
        let ai = a as u64;
        let h2 = match ai.checked_mul(h1).and_then(|v| v.checked_add(h0)) {
            Some(v) => v,
            None => break,
        };
        let k2 = match ai.checked_mul(k1).and_then(|v| v.checked_add(k0)) {
            Some(v) => v,
            None => break,
        };
        if k2 > q_max {
            break;
        }
        out.push((h2, k2));
        let frac = x - a;
        if frac < 1e-15 {
            break;
        }
        x = 1.0 / frac;
        (h0, h1) = (h1, h2);
        (k0, k1) = (k1, k2);
    }
    out
}

/// Best rational approximation with denominator at most q_max; the
/// returned (a, q) satisfies |alpha - a/q| <= 1/(q (q_max + 1)) by the
/// convergent gap bound.
pub fn dirichlet_approx(alpha: f64, q_max: u64) -> (u64, u64) {
    convergents(alpha, q_max).last().copied().unwrap_or((0, 1))
}

/// Locate alpha against the arc scheme: scans convergents for the
/// unique (a, q) with q <= height and |alpha - a/q| <= width(q).
pub fn locate_arc(alpha: f64, scheme: &ArcScheme) -> ArcClass {
    debug_assert!((0.0..1.0).contains(&alpha));
    let height = scheme.height().floor() as u64;
    if height == 0 {
        return ArcClass::Minor;
    }
    for (a, q) in convergents(alpha, height) {
        if (alpha - a as f64 / q as f64).abs() <= scheme.width(q) {
            return ArcClass::Inside { a, q };
        }
    }
    ArcClass::Minor
}

/// The pruning weight tau_k(q) / (1 + n |alpha - a/q|) on the arcs of
/// the full major-arc scheme, zero on the minor arcs. A derived view
/// over locate_arc and tau_weight; no separate state.
pub fn upsilon(alpha: f64, params: &ParamSet) -> f64 {
    let scheme = ArcScheme::Major {
        height: params.m.powi(params.k as i32),
        n: params.n,
    };
    let alpha = alpha.rem_euclid(1.0);
    match locate_arc(alpha, &scheme) {
        ArcClass::Minor => 0.0,
        ArcClass::Inside { a, q } => {
            let beta = (alpha - a as f64 / q as f64).abs();
            tau_weight(&arith::factorize(q), params.k) / (1.0 + params.n as f64 * beta)
        }
    }
}

/// Maximum of q^(-1) |S_k(q, a)| / tau_k(q) over (a, q) = 1, q up to
/// q_max.
#[derive(Debug, Clone, serde::Serialize)]
pub struct GaussRatioScan {
    pub k: u32,
    pub q_max: u64,
    pub max_ratio: f64,
    pub argmax_q: u64,
}

/// Exact scan: per-prime-power maxima over unit residues come from one
/// DFT each, and the per-modulus maximum is multiplicative over coprime
/// parts because the CRT unit correspondence a -> (a q2^(k-1), a q1^(k-1))
/// is a bijection. Validated against the direct scan in tests.
pub fn gauss_ratio_scan(k: u32, q_max: u64) -> GaussRatioScan {
    use std::collections::HashMap;
    let lpf = crate::smooth::least_prime_factor_table(q_max);
    let mut prime_powers: Vec<u64> = Vec::new();
    for p in 2..=q_max {
        if lpf[p as usize] == 0 {
            let mut pe = p;
            loop {
                prime_powers.push(pe);
                match pe.checked_mul(p) {
                    Some(next) if next <= q_max => pe = next,
                    _ => break,
                }
            }
        }
    }
    let table: HashMap<u64, f64> = prime_powers
        .par_iter()
        .map(|&pe| {
            let moduli = gauss_power_sum_all(pe, k);
            let p = smallest_prime_factor(pe);
            let tau = tau_weight(&arith::factorize(pe), k);
            let mut best = 0.0f64;
            for a in 1..pe {
                if a % p != 0 {
                    best = best.max(moduli[a as usize]);
                }
            }
            (pe, best / (pe as f64 * tau))
        })
        .collect();
    let mut max_ratio = 1.0; // q = 1: S_k(1, 0) = 1, tau_k(1) = 1
    let mut argmax_q = 1u64;
    for q in 2..=q_max {
        let mut ratio = 1.0f64;
        let mut n = q;
        while n > 1 {
            let p = if lpf[n as usize] == 0 {
                n
            } else {
                lpf[n as usize] as u64
            };
            let mut pe = 1u64;
            while n % p == 0 {
                n /= p;
                pe *= p;
            }
            ratio *= table[&pe];
        }
        if ratio > max_ratio {
            max_ratio = ratio;
            argmax_q = q;
        }
    }
    GaussRatioScan {
        k,
        q_max,
        max_ratio,
        argmax_q,
    }
}

fn smallest_prime_factor(n: u64) -> u64 {
    for p in [2u64, 3, 5] {
        if n % p == 0 {
            return p;
        }
    }
    let mut d = 7;
    while d * d <= n {
        if n % d == 0 {
            return d;
        }
        d += 2;
    }
    n
}

/// Sampled scan of |S_y(q, a, b)| / (q^1.01 w_k(q)): exhaustive over
/// small q, seeded random (a, b, c) samples per larger modulus.
#[derive(Debug, Clone, serde::Serialize)]
pub struct ShiftedSumScan {
    pub k: u32,
    pub q_max: u64,
    pub max_ratio: f64,
    pub argmax: (u64, u64, u64, u64),
}

pub fn shifted_sum_scan(k: u32, q_max: u64, samples_per_q: u32, seed: u64) -> ShiftedSumScan {
    use rand::{Rng, SeedableRng};
    let mut best = (0.0f64, (1u64, 0u64, 0u64, 0u64));
    let consider = |q: u64, a: u64, b: u64, c: u64, best: &mut (f64, (u64, u64, u64, u64))| {
        let norm = (q as f64).powf(1.01) * w_weight(&arith::factorize(q), k);
        let ratio = shifted_sum(q, a, b, c, k).norm() / norm;
        if ratio > best.0 {
            *best = (ratio, (q, a, b, c));
        }
    };
    for q in 1..=q_max.min(24) {
        for a in 1..=q {
            if gcd(a, q) != 1 {
                continue;
            }
            for b in 0..q {
                for c in 0..q {
                    consider(q, a, b, c, &mut best);
                }
            }
        }
    }
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    for q in 25..=q_max {
        for _ in 0..samples_per_q {
            let a = loop {
                let a = rng.gen_range(1..=q);
                if gcd(a, q) == 1 {
                    break a;
                }
            };
            consider(q, a, rng.gen_range(0..q), rng.gen_range(0..q), &mut best);
        }
    }
    ShiftedSumScan {
        k,
        q_max,
        max_ratio: best.0,
        argmax: best.1,
    }
}
