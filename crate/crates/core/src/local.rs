//! Singular series and local solubility: p-adic solution counting,
//! per-prime local densities, divisibility-constraint checking, the
//! shifted-cube residue classes, brute-force congruence solubility, and
//! the quartic companion series.

use num_complex::Complex64;

use crate::arith::{gcd, mul_mod, pow_mod, ResidueSet};
use crate::conv::{cyclic_convolve_exact, cyclic_convolve_f64};
use crate::error::{Error, Result};
use crate::expsums::{pairwise_sum, unit_phase};

/// One variable slot of the congruence sum: the additive shift c, with
/// an optional prime scaling (effective shift p^3 c).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Slot {
    pub shift: u64,
    pub prime_scale: Option<u64>,
}

impl Slot {
    pub fn plain(shift: u64) -> Slot {
        Slot {
            shift,
            prime_scale: None,
        }
    }

    pub fn scaled(prime: u64, shift: u64) -> Slot {
        Slot {
            shift,
            prime_scale: Some(prime),
        }
    }

    pub fn effective_shift(&self, modulus: u64) -> u64 {
        match self.prime_scale {
            Some(p) => mul_mod(pow_mod(p, 3, modulus), self.shift % modulus, modulus),
            None => self.shift % modulus,
        }
    }

    /// The shift value itself (p^3 c for scaled slots), not reduced.
    pub fn shift_value(&self) -> u128 {
        match self.prime_scale {
            Some(p) => (p as u128).pow(3) * self.shift as u128,
            None => self.shift as u128,
        }
    }
}

/// Exponent gamma(p) = 2 tau + 1 where p^tau exactly divides 3k; the
/// Hensel depth from which nonsingular solutions lift.
pub fn gamma_exponent(p: u64, k: u32) -> u32 {
    let mut n = 3 * k;
    let mut tau = 0;
    while n % p as u32 == 0 {
        n /= p as u32;
        tau += 1;
    }
    2 * tau + 1
}

/// The residue classes {x^3 + c}, their unit-restricted part, and their
/// k-th powers, all modulo a prime power.
#[derive(Debug, Clone)]
pub struct ShiftedCubeClasses {
    pub all: ResidueSet,
    pub units: ResidueSet,
    pub powers: ResidueSet,
}

/// Compute the three class sets modulo p^gamma.
pub fn t_sets(c: u64, p: u64, gamma: u32, k: u32) -> ShiftedCubeClasses {
    let m = p.pow(gamma);
    let mut all = ResidueSet::empty(m);
    let mut units = ResidueSet::empty(m);
    for x in 1..=m {
        let v = (pow_mod(x, 3, m) + c % m) % m;
        all.insert(v);
        if x % p != 0 && v % p != 0 {
            units.insert(v);
        }
    }
    let powers = all.power_image(k);
    ShiftedCubeClasses { all, units, powers }
}

const DEPTH_MODULUS_CAP: u64 = 1_000_000;

fn slot_histogram_f64(slot: &Slot, k: u32, m: u64) -> Vec<f64> {
    let d = slot.effective_shift(m);
    let mut hist = vec![0.0f64; m as usize];
    for x in 1..=m {
        let v = pow_mod((pow_mod(x, 3, m) + d) % m, k as u64, m);
        hist[v as usize] += 1.0;
    }
    hist
}

/// Exact count of tuples x in [1, p^h]^s with
/// sum_i (x_i^3 + d_i)^k = n (mod p^h), by per-slot value histograms
/// convolved over Z/p^h; never direct tuple enumeration.
///
/// `unit_first` restricts the first slot to p not dividing x_1 and p
/// not dividing x_1^3 + d_1 (the starred count).
pub fn count_solutions_mod(
    slots: &[Slot],
    k: u32,
    n: u64,
    p: u64,
    h: u32,
    unit_first: bool,
) -> Result<u128> {
    assert!(!slots.is_empty());
    let m = p
        .checked_pow(h)
        .filter(|&m| m <= DEPTH_MODULUS_CAP)
        .ok_or_else(|| Error::Resource(format!("modulus {p}^{h} exceeds 10^6")))?;
    if m == 1 {
        return Ok(1);
    }
    // total tuples must stay within the exact convolution range
    let log_total = slots.len() as f64 * (m as f64).log2();
    if log_total > 85.0 {
        return Err(Error::Resource(format!(
            "{}^{} tuples exceed the exact counting range",
            m,
            slots.len()
        )));
    }
    let mn = m as usize;
    let mut acc: Option<Vec<u128>> = None;
    for (i, slot) in slots.iter().enumerate() {
        let d = slot.effective_shift(m);
        let mut hist = vec![0u128; mn];
        for x in 1..=m {
            let base = (pow_mod(x, 3, m) + d) % m;
            if i == 0 && unit_first && (x % p == 0 || base % p == 0) {
                continue;
            }
            hist[pow_mod(base, k as u64, m) as usize] += 1;
        }
        acc = Some(match acc {
            None => hist,
            Some(prev) => cyclic_convolve_exact(&prev, &hist, mn)?,
        });
    }
    Ok(acc.unwrap()[(n % m) as usize])
}

/// A prime with its stabilized local density value.
#[derive(Debug, Clone, serde::Serialize)]
pub struct LocalFactor {
    pub p: u64,
    pub depth: u32,
    pub value: f64,
    pub stabilized: bool,
}

/// Depth policy for the density iteration.
#[derive(Debug, Clone, Copy)]
pub struct DepthPolicy {
    /// Stop when consecutive depths agree to this relative tolerance.
    pub rel_tol: f64,
    /// Never let p^h exceed this.
    pub modulus_cap: u64,
}

impl Default for DepthPolicy {
    fn default() -> Self {
        DepthPolicy {
            rel_tol: 1e-6,
            modulus_cap: DEPTH_MODULUS_CAP,
        }
    }
}

/// Normalized solution density at one depth:
/// p^((1-s)h) M_n(p^h) = p^h * (density of the target residue), with the
/// per-slot histograms convolved as probability vectors in f64. Keeps
/// full-arity computations feasible where exact integer counts overflow.
pub fn density_at_depth(slots: &[Slot], k: u32, n: u64, p: u64, h: u32) -> Result<f64> {
    let m = p
        .checked_pow(h)
        .filter(|&m| m <= DEPTH_MODULUS_CAP)
        .ok_or_else(|| Error::Resource(format!("modulus {p}^{h} exceeds 10^6")))?;
    if m == 1 {
        return Ok(1.0);
    }
    let inv = 1.0 / m as f64;
    let mut acc: Option<Vec<f64>> = None;
    for slot in slots {
        let mut hist = slot_histogram_f64(slot, k, m);
        for v in hist.iter_mut() {
            *v *= inv;
        }
        acc = Some(match acc {
            None => hist,
            Some(prev) => cyclic_convolve_f64(&prev, &hist),
        });
    }
    Ok(m as f64 * acc.unwrap()[(n % m) as usize])
}

/// Local density sigma(p): iterate the depth from gamma(p) until two
/// consecutive depths agree (stabilized) or the modulus cap is hit.
pub fn sigma_p(
    slots: &[Slot],
    k: u32,
    n: u64,
    p: u64,
    policy: &DepthPolicy,
) -> Result<LocalFactor> {
    let gamma = gamma_exponent(p, k);
    let mut h = gamma;
    let mut value = density_at_depth(slots, k, n, p, h)?;
    loop {
        let next_h = h + 1;
        let next_m = (p as f64).powi(next_h as i32);
        if next_m > policy.modulus_cap as f64 {
            return Ok(LocalFactor {
                p,
                depth: h,
                value,
                stabilized: false,
            });
        }
        let next = density_at_depth(slots, k, n, p, next_h)?;
        let scale = value.abs().max(1e-12);
        if (next - value).abs() <= policy.rel_tol * scale {
            return Ok(LocalFactor {
                p,
                depth: next_h,
                value: next,
                stabilized: true,
            });
        }
        h = next_h;
        value = next;
    }
}

/// Truncated singular series over primes up to the cutoff.
#[derive(Debug, Clone, serde::Serialize)]
pub struct SingularSeries {
    pub value: f64,
    /// Tail decay exponent (s+t-1)/3k - 1 from the dyadic tail bound.
    pub tail_exponent: f64,
    pub factors: Vec<LocalFactor>,
}

pub fn singular_series(
    slots: &[Slot],
    k: u32,
    n: u64,
    prime_cutoff: u64,
    policy: &DepthPolicy,
) -> Result<SingularSeries> {
    let primes = crate::arith::sieve_primes(prime_cutoff)?;
    let mut factors = Vec::with_capacity(primes.len());
    for &p in &primes {
        factors.push(sigma_p(slots, k, n, p, policy)?);
    }
    let value = factors.iter().map(|f| f.value).product();
    let tail_exponent = (slots.len() as f64 - 1.0) / (3.0 * k as f64) - 1.0;
    Ok(SingularSeries {
        value,
        tail_exponent,
        factors,
    })
}

/// Divisibility constraints that certify local solubility.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct LocalConditions {
    pub residue: u64,
    pub modulus: u64,
}

impl LocalConditions {
    pub fn for_k(k: u32) -> Result<LocalConditions> {
        match k {
            2 => Ok(LocalConditions {
                residue: 28,
                modulus: 108,
            }),
            3 => Ok(LocalConditions {
                residue: 0,
                modulus: 162,
            }),
            _ => Err(Error::Unsupported(format!(
                "local conditions are defined for k = 2, 3 only, got k = {k}"
            ))),
        }
    }
}

/// Per-slot outcome of the condition check.
#[derive(Debug, Clone, serde::Serialize)]
pub struct ConditionDiagnostic {
    pub slot: usize,
    pub shift_mod: u64,
    pub satisfied: bool,
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct ConditionReport {
    pub all_satisfied: bool,
    pub conditions: LocalConditions,
    pub diagnostics: Vec<ConditionDiagnostic>,
}

/// True iff every slot's shift value (p^3 c for scaled slots) lies in
/// the required residue class for this k.
pub fn check_local_conditions(slots: &[Slot], k: u32) -> Result<ConditionReport> {
    let cond = LocalConditions::for_k(k)?;
    let mut diagnostics = Vec::with_capacity(slots.len());
    let mut all = true;
    for (i, slot) in slots.iter().enumerate() {
        let shift_mod = (slot.shift_value() % cond.modulus as u128) as u64;
        let ok = shift_mod == cond.residue;
        all &= ok;
        diagnostics.push(ConditionDiagnostic {
            slot: i,
            shift_mod,
            satisfied: ok,
        });
    }
    Ok(ConditionReport {
        all_satisfied: all,
        conditions: cond,
        diagnostics,
    })
}

/// Solubility table of x_1^e + ... + x_v^e = n (mod m), first slot
/// optionally restricted to units, decided by iterated sumset closure
/// of the power-residue classes.
#[derive(Debug, Clone)]
pub struct Solubility {
    pub reachable: ResidueSet,
    pub all_soluble: bool,
}

pub fn congruence_soluble(
    exponent: u32,
    variables: u32,
    modulus: u64,
    unit_first: bool,
) -> Result<Solubility> {
    if modulus > 10_000 {
        return Err(Error::Validation(format!(
            "modulus {modulus} exceeds the 10^4 solubility budget"
        )));
    }
    if variables == 0 {
        return Err(Error::Validation("need at least one variable".into()));
    }
    let full = crate::arith::power_residues(exponent, modulus, false);
    let first = if unit_first {
        crate::arith::power_residues(exponent, modulus, true)
    } else {
        full.clone()
    };
    let mut reachable = first;
    for _ in 1..variables {
        reachable = reachable.sumset(&full);
    }
    let all_soluble = reachable.cardinality() == modulus;
    Ok(Solubility {
        reachable,
        all_soluble,
    })
}

/// Complex table of S_12(q, b) for all b, via one DFT of the
/// twelfth-power histogram.
fn twelfth_power_sums(q: u64) -> Vec<Complex64> {
    use rustfft::{num_complex::Complex, FftPlanner};
    let qn = q as usize;
    let mut hist = vec![Complex::new(0.0, 0.0); qn];
    for r in 1..=q {
        hist[pow_mod(r, 12, q) as usize].re += 1.0;
    }
    FftPlanner::new().plan_fft_forward(qn).process(&mut hist);
    // the forward transform carries e(-bj/q); conjugate to get S_12
    hist.into_iter().map(|c| Complex64::new(c.re, -c.im)).collect()
}

/// One term of the quartic companion series:
/// S_m(q) = q^(-46) sum_{(a,q)=1} S_12(q, 81a)^46 e_q(-a (n - m)).
pub fn quartic_term(q: u64, n: u64, m: u64) -> Complex64 {
    assert!(q >= 1);
    if q == 1 {
        return Complex64::new(1.0, 0.0);
    }
    let table = twelfth_power_sums(q);
    let delta = (n as i128 - m as i128).rem_euclid(q as i128) as u64;
    let mut terms = Vec::new();
    for a in 1..=q {
        if gcd(a, q) != 1 {
            continue;
        }
        let b = mul_mod(81 % q, a, q);
        let s_norm = table[b as usize] / q as f64;
        let phase = unit_phase(((q - mul_mod(a, delta, q)) % q) as f64 / q as f64);
        terms.push(s_norm.powu(46) * phase);
    }
    pairwise_sum(&terms)
}

/// sigma_m(p): partial sum of S_m(p^l) over l with p^l below the cap.
pub fn quartic_sigma_p(p: u64, n: u64, m: u64, modulus_cap: u64) -> f64 {
    let mut total = 1.0; // l = 0 term
    let mut q = p;
    while q <= modulus_cap {
        total += quartic_term(q, n, m).re;
        match q.checked_mul(p) {
            Some(next) => q = next,
            None => break,
        }
    }
    total
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct QuarticSeries {
    pub value: f64,
    pub positive: bool,
    pub imag_residue: f64,
}

/// Truncated quartic singular series: sum of S_m(q) over q <= cutoff.
pub fn quartic_series(m: u64, n: u64, cutoff: u64) -> Result<QuarticSeries> {
    if cutoff > 200 {
        return Err(Error::Validation(format!(
            "quartic series cutoff {cutoff} exceeds 200"
        )));
    }
    let mut value = 0.0;
    let mut imag = 0.0f64;
    for q in 1..=cutoff.max(1) {
        let t = quartic_term(q, n, m);
        value += t.re;
        imag = imag.max(t.im.abs() / t.norm().max(1e-300));
    }
    Ok(QuarticSeries {
        value,
        positive: value > 0.0,
        imag_residue: imag,
    })
}

/// Both sides of the depth identity for the quartic series at p = 3:
/// sum_{l=0}^{h} S_m(3^l) and 3^(-45h) M_{n,m}(3^h), the latter through
/// normalized histogram convolutions modulo 3^(h-4) with 46 slots.
pub fn quartic_depth_identity(n: u64, m: u64, h: u32) -> Result<(f64, f64)> {
    if h < 5 {
        return Err(Error::Validation("identity requires depth h >= 5".into()));
    }
    if (n as i128 - m as i128).rem_euclid(81) != 0 {
        return Err(Error::Validation("requires m = n (mod 81)".into()));
    }
    let mut lhs = 1.0;
    for l in 1..=h {
        lhs += quartic_term(3u64.pow(l), n, m).re;
    }
    // M_{n,m}(3^h) counts x in [1, 3^h]^46 with sum x_i^12 = (n-m)/81
    // (mod 3^(h-4)); each residue class mod 3^(h-4) is hit 81 times.
    let mu = 3u64.pow(h - 4);
    let target = (((n as i128 - m as i128) / 81).rem_euclid(mu as i128)) as u64;
    let mut hist = vec![0.0f64; mu as usize];
    for x in 1..=mu {
        hist[pow_mod(x, 12, mu) as usize] += 1.0 / mu as f64;
    }
    let mut acc = hist.clone();
    for _ in 1..46 {
        acc = cyclic_convolve_f64(&acc, &hist);
    }
    // 3^(-45h) M = 3^h * density
    let rhs = 3f64.powi(h as i32) * acc[target as usize];
    Ok((lhs, rhs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expsums::product_sum;

    #[test]
    fn gamma_exponents() {
        assert_eq!(gamma_exponent(2, 2), 3); // 2 || 6
        assert_eq!(gamma_exponent(3, 2), 3);
        assert_eq!(gamma_exponent(5, 2), 1);
        assert_eq!(gamma_exponent(2, 3), 1); // 3k = 9
        assert_eq!(gamma_exponent(3, 3), 5); // 9 || 9
        assert_eq!(gamma_exponent(2, 4), 5); // 4 || 12
        assert_eq!(gamma_exponent(3, 4), 3);
    }

    #[test]
    fn t_sets_at_27() {
        // pinned class data for C = 1 (mod 27)
        for c in [1u64, 28, 55, 109] {
            let t = t_sets(c, 3, 3, 2);
            assert_eq!(
                t.powers.iter().collect::<Vec<_>>(),
                vec![0, 1, 4, 13, 22],
                "c = {c}"
            );
            assert_eq!(t.units.cardinality(), 3, "c = {c}");
        }
    }

    #[test]
    fn t_sets_cardinality_closed_form() {
        // |T_C(p)| = (p+2)/3 for p = 1 (mod 3), any shift
        for p in crate::arith::sieve_primes(200).unwrap() {
            if p % 3 != 1 {
                continue;
            }
            for c in [0u64, 1, 5, 17] {
                let t = t_sets(c, p, 1, 2);
                assert_eq!(t.all.cardinality(), (p + 2) / 3, "p={p}, c={c}");
                assert!(t.units.cardinality() >= 1);
            }
        }
        // |T_C(p)| = p for p = 2 (mod 3)
        for p in [5u64, 11, 17, 23] {
            let t = t_sets(3, p, 1, 2);
            assert_eq!(t.all.cardinality(), p);
        }
    }

    #[test]
    fn count_solutions_examples() {
        // s'=1, k=2, C=2, p=5, h=1, target 4: x = 1 and x = 5 hit
        let c = count_solutions_mod(&[Slot::plain(2)], 2, 4, 5, 1, false).unwrap();
        assert_eq!(c, 2);
        // modulus 1
        let c = count_solutions_mod(&[Slot::plain(7); 3], 2, 0, 5, 0, false).unwrap();
        assert_eq!(c, 1);
        // target outside the sumset of per-slot value sets:
        // (x^3)^2 mod 9 lies in {0, 1, 4, 7}; two slots never reach 6
        let c = count_solutions_mod(&[Slot::plain(0), Slot::plain(0)], 2, 6, 3, 2, false).unwrap();
        let mut reach = std::collections::HashSet::new();
        for x in 1..=9u64 {
            for y in 1..=9u64 {
                reach.insert(
                    (pow_mod(pow_mod(x, 3, 9), 2, 9) + pow_mod(pow_mod(y, 3, 9), 2, 9)) % 9,
                );
            }
        }
        assert!(!reach.contains(&6));
        assert_eq!(c, 0);
    }

    #[test]
    fn count_matches_enumeration() {
        // direct tuple enumeration oracle on small instances
        let slots = [Slot::scaled(2, 3), Slot::plain(5)];
        for (p, h, n) in [(3u64, 2u32, 7u64), (5, 1, 2), (7, 1, 0)] {
            let m = p.pow(h);
            let got = count_solutions_mod(&slots, 2, n, p, h, false).unwrap();
            let mut want = 0u128;
            for x1 in 1..=m {
                for x2 in 1..=m {
                    let v1 = pow_mod((pow_mod(x1, 3, m) + slots[0].effective_shift(m)) % m, 2, m);
                    let v2 = pow_mod((pow_mod(x2, 3, m) + slots[1].effective_shift(m)) % m, 2, m);
                    if (v1 + v2) % m == n % m {
                        want += 1;
                    }
                }
            }
            assert_eq!(got, want, "p={p}, h={h}, n={n}");
        }
    }

    #[test]
    fn orthogonality_identity_reduced_arity() {
        // partial sums of the product sum at p^l against the normalized
        // count p^((1-s)h) M_n(p^h), the two routes fully independent
        let scaled = [(5u64, 29u64)];
        let plain = [2u64, 30];
        let slots = [Slot::scaled(5, 29), Slot::plain(2), Slot::plain(30)];
        let n = 37u64;
        for k in [2u32, 3] {
            for p in [2u64, 3, 5, 7] {
                let h = gamma_exponent(p, k) + 2;
                let mut partial = 0.0;
                for l in 0..=h {
                    partial += product_sum(p.pow(l), &scaled, &plain, n, k).value;
                }
                let count = count_solutions_mod(&slots, k, n, p, h, false).unwrap();
                let normalized =
                    (p as f64).powi(((1 - slots.len() as i64) * h as i64) as i32) * count as f64;
                assert!(
                    (partial - normalized).abs() <= 1e-8 * normalized.abs().max(1e-6),
                    "k={k}, p={p}, h={h}: {partial} vs {normalized}"
                );
            }
        }
    }

    #[test]
    fn density_route_matches_exact_count() {
        let slots = [Slot::scaled(3, 4), Slot::plain(11), Slot::plain(6)];
        for (p, h, n, k) in [(2u64, 4u32, 9u64, 2u32), (3, 3, 14, 3), (7, 2, 3, 2)] {
            let exact = count_solutions_mod(&slots, k, n, p, h, false).unwrap();
            let normalized =
                (p as f64).powi(((1 - slots.len() as i64) * h as i64) as i32) * exact as f64;
            let density = density_at_depth(&slots, k, n, p, h).unwrap();
            assert!(
                (density - normalized).abs() <= 1e-9 * normalized.max(1e-9),
                "p={p} h={h}: {density} vs {normalized}"
            );
        }
    }

    #[test]
    fn sigma_nonnegative_and_stabilizes() {
        let slots = [Slot::scaled(5, 8), Slot::plain(28), Slot::plain(136)];
        for p in [2u64, 3, 5, 11, 13] {
            let f = sigma_p(&slots, 2, 100, p, &DepthPolicy::default()).unwrap();
            assert!(f.value >= -1e-12, "sigma({p}) = {}", f.value);
            assert!(f.stabilized, "sigma({p}) did not stabilize");
        }
    }

    #[test]
    fn sigma_three_positive_under_conditions() {
        // compliant k=2 instance: all shift values = 28 (mod 108);
        // p^3 c = 28 (mod 108) for p=5, c=8 (125*8 = 1000 = 9*108 + 28)
        let slots = [
            Slot::scaled(5, 8),
            Slot::scaled(5, 8),
            Slot::scaled(5, 8),
            Slot::scaled(5, 8),
            Slot::plain(28),
            Slot::plain(28),
            Slot::plain(28),
            Slot::plain(28),
        ];
        let report = check_local_conditions(&slots, 2).unwrap();
        assert!(report.all_satisfied);
        for n in [1u64, 17, 100, 3000] {
            // starred-count route: nonsingular solutions at depth gamma
            let starred = count_solutions_mod(&slots, 2, n, 3, 3, true).unwrap();
            assert!(starred > 0, "no nonsingular solution mod 27 for n = {n}");
            let f = sigma_p(&slots, 2, n, 3, &DepthPolicy::default()).unwrap();
            assert!(f.value > 0.0, "sigma(3) = {} for n = {n}", f.value);
        }
    }

    #[test]
    fn local_conditions_diagnostics() {
        let slots = [Slot::plain(28), Slot::plain(27)];
        let report = check_local_conditions(&slots, 2).unwrap();
        assert!(!report.all_satisfied);
        assert!(report.diagnostics[0].satisfied);
        assert!(!report.diagnostics[1].satisfied);
        assert_eq!(report.diagnostics[1].slot, 1);
        // k=3 conditions
        let slots = [Slot::plain(162), Slot::plain(324)];
        let report = check_local_conditions(&slots, 3).unwrap();
        assert!(report.all_satisfied);
        assert!(check_local_conditions(&slots, 4).is_err());
    }

    #[test]
    fn singular_series_truncation_stability() {
        let slots = [
            Slot::scaled(5, 8),
            Slot::scaled(5, 8),
            Slot::plain(28),
            Slot::plain(28),
        ];
        let policy = DepthPolicy::default();
        let s1 = singular_series(&slots, 2, 53, 25, &policy).unwrap();
        let s2 = singular_series(&slots, 2, 53, 50, &policy).unwrap();
        let rel = (s2.value - s1.value).abs() / s2.value.abs().max(1e-12);
        assert!(rel < 5.0 / 25.0, "truncation drift {rel}");
        assert!(s2.value >= 0.0);
        assert_eq!(s1.tail_exponent, 3.0 / 6.0 - 1.0);
    }

    #[test]
    fn solubility_examples() {
        // sixth powers mod 8, one odd slot: soluble for every class
        let s = congruence_soluble(6, 8, 8, true).unwrap();
        assert!(s.all_soluble);
        // ninth powers mod 243 with 17 variables, first a unit
        let s = congruence_soluble(9, 17, 243, true).unwrap();
        assert!(s.all_soluble);
        // squares mod 4: 2 and 3 unreachable with one variable
        let s = congruence_soluble(2, 1, 4, false).unwrap();
        assert!(!s.all_soluble);
        assert!(s.reachable.contains(0) && s.reachable.contains(1));
        assert!(!s.reachable.contains(2) && !s.reachable.contains(3));
    }

    #[test]
    fn solubility_periodic_in_n() {
        let s = congruence_soluble(6, 3, 8, true).unwrap();
        for n in 0..8u64 {
            assert_eq!(s.reachable.contains(n), s.reachable.contains(n + 8));
        }
    }

    #[test]
    fn quartic_series_basics() {
        assert_eq!(quartic_term(1, 100, 19).re, 1.0);
        // conjugate pairing keeps terms real; terms that cancel to zero
        // are compared at the unit scale of S_m(1) = 1
        for q in 2..=40u64 {
            let t = quartic_term(q, 1000, 19);
            assert!(t.im.abs() <= 1e-9 * t.re.abs().max(1.0), "q={q}: {t}");
        }
        // m = n (mod 81): truncation positive
        let qs = quartic_series(19, 19 + 81 * 12, 100).unwrap();
        assert!(qs.positive, "series = {}", qs.value);
    }

    #[test]
    fn quartic_depth_identity_holds() {
        let n = 81 * 7 + 19;
        let m = 19u64;
        for h in [5u32, 6] {
            let (lhs, rhs) = quartic_depth_identity(n, m, h).unwrap();
            assert!(
                (lhs - rhs).abs() <= 1e-8 * rhs.abs().max(1e-9),
                "h={h}: {lhs} vs {rhs}"
            );
        }
    }

    #[test]
    fn compliant_series_pinned_value() {
        // desk instance with every shift in the certified class; the
        // truncated value at Q = 50 was recorded on the first run and
        // is pinned here (the spec-level floor is 0.1)
        let slots = [
            Slot::scaled(5, 8),
            Slot::scaled(5, 8),
            Slot::scaled(5, 8),
            Slot::scaled(5, 8),
            Slot::plain(28),
            Slot::plain(28),
            Slot::plain(28),
            Slot::plain(28),
        ];
        let s = singular_series(&slots, 2, 100, 50, &DepthPolicy::default()).unwrap();
        assert!(s.value >= 0.1, "series value {}", s.value);
        assert!(
            (2.8..3.1).contains(&s.value),
            "series value {} left the pinned window",
            s.value
        );
    }

    #[test]
    fn sigma_deviation_scan_pinned() {
        // |sigma(p) - 1| p^2 over p in [11, 97] on seeded compliant
        // instances; observed maximum 10.72, pinned at 12
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(99);
        let policy = DepthPolicy::default();
        let mut max_dev = 0.0f64;
        for _ in 0..8 {
            let c_plain = 28 + 108 * rng.gen_range(0u64..5);
            let slots = [
                Slot::scaled(5, 8 + 108 * rng.gen_range(0u64..5)),
                Slot::scaled(5, 8 + 108 * rng.gen_range(0u64..5)),
                Slot::plain(c_plain),
                Slot::plain(28),
                Slot::plain(136),
                Slot::plain(28 + 108 * rng.gen_range(0u64..3)),
            ];
            let n = rng.gen_range(1u64..100_000);
            for p in [11u64, 13, 17, 23, 37, 53, 71, 97] {
                let f = sigma_p(&slots, 2, n, p, &policy).unwrap();
                max_dev = max_dev.max((f.value - 1.0).abs() * (p * p) as f64);
            }
        }
        assert!(max_dev <= 12.0, "deviation {max_dev}");
    }

    #[test]
    fn budget_errors() {
        assert!(matches!(
            count_solutions_mod(&[Slot::plain(1)], 2, 0, 2, 21, false),
            Err(crate::error::Error::Resource(_))
        ));
        assert!(matches!(
            congruence_soluble(2, 2, 20_000, false),
            Err(crate::error::Error::Validation(_))
        ));
        assert!(matches!(
            quartic_series(1, 1, 300),
            Err(crate::error::Error::Validation(_))
        ));
    }
}
