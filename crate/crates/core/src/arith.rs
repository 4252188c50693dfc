//! Arithmetic substrate: primes, factorization, modular arithmetic,
//! residue sets, and a generic evaluator for multiplicative functions
//! defined by prime-power rules.
//!
//! All operations are pure and reentrant; nothing here holds shared
//! mutable state.

use crate::error::{Error, Result};

/// Greatest common divisor.
pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// `a * b mod m` without overflow.
#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

/// `a^e mod m`. Returns 0 when m == 1.
pub fn pow_mod(mut a: u64, mut e: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, a, m);
        }
        a = mul_mod(a, a, m);
        e >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for the full 64-bit range.
///
/// The witness set {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37} decides
/// primality for every n < 3.3 * 10^24, so no probabilistic failure is
/// possible here.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let d = n - 1;
    let s = d.trailing_zeros();
    let d = d >> s;
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Ascending list of primes in [2, limit].
///
/// Odd-only sieve of Eratosthenes; errors when the range [2, limit] is
/// empty.
pub fn sieve_primes(limit: u64) -> Result<Vec<u64>> {
    if limit < 2 {
        return Err(Error::EmptyRange(format!(
            "sieve_primes requires limit >= 2, got {limit}"
        )));
    }
    let n = limit as usize;
    // index i represents the odd number 2i + 3
    let len = if n >= 3 { (n - 1) / 2 } else { 0 };
    let mut composite = vec![false; len];
    let mut i = 0usize;
    while (2 * i + 3) * (2 * i + 3) <= n {
        if !composite[i] {
            let p = 2 * i + 3;
            let mut j = (p * p - 3) / 2;
            while j < len {
                composite[j] = true;
                j += p;
            }
        }
        i += 1;
    }
    let mut primes = Vec::with_capacity(len / 2 + 1);
    primes.push(2);
    for (i, &c) in composite.iter().enumerate() {
        if !c {
            primes.push((2 * i + 3) as u64);
        }
    }
    Ok(primes)
}

/// Primes in the closed real interval [lo, hi].
pub fn primes_in_range(lo: f64, hi: f64) -> Vec<u64> {
    if hi < 2.0 || hi < lo {
        return Vec::new();
    }
    let lo = lo.ceil().max(2.0) as u64;
    let hi = hi.floor() as u64;
    match sieve_primes(hi.max(2)) {
        Ok(ps) => ps.into_iter().filter(|&p| p >= lo && p <= hi).collect(),
        Err(_) => Vec::new(),
    }
}

/// A positive integer with its canonical prime-power decomposition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactoredInteger {
    pub value: u64,
    /// (prime, exponent) pairs, primes strictly increasing, exponents >= 1.
    pub factors: Vec<(u64, u32)>,
}

impl FactoredInteger {
    /// Rebuild the value from the factor list; used by invariants.
    pub fn product(&self) -> u64 {
        self.factors
            .iter()
            .map(|&(p, e)| p.pow(e))
            .product::<u64>()
            .max(1)
    }
}

fn pollard_rho(n: u64) -> u64 {
    // Brent's cycle variant; n must be odd, composite, not a prime power
    // split by trial division already.
    let mut c = 1u64;
    loop {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let mut x = 2u64;
        let mut y = 2u64;
        let mut d = 1u64;
        while d == 1 {
            x = f(x);
            y = f(f(y));
            d = gcd(x.abs_diff(y), n);
        }
        if d != n {
            return d;
        }
        c += 1;
    }
}

/// Canonical factorization of q; q = 1 yields an empty factor list.
///
/// Trial division up to 10^6, then Pollard rho on the cofactor with a
/// deterministic primality check; instant for every 64-bit input in
/// scope.
pub fn factorize(q: u64) -> FactoredInteger {
    assert!(q >= 1, "factorize requires a positive integer");
    let value = q;
    let mut factors: Vec<(u64, u32)> = Vec::new();
    let mut n = q;
    let push = |p: u64, e: u32, factors: &mut Vec<(u64, u32)>| {
        if e > 0 {
            factors.push((p, e));
        }
    };
    for p in [2u64, 3, 5] {
        let mut e = 0;
        while n % p == 0 {
            n /= p;
            e += 1;
        }
        push(p, e, &mut factors);
    }
    let mut d = 7u64;
    let wheel = [4u64, 2, 4, 2, 4, 6, 2, 6];
    let mut w = 0usize;
    while d <= 1_000_000 && d * d <= n {
        let mut e = 0;
        while n % d == 0 {
            n /= d;
            e += 1;
        }
        push(d, e, &mut factors);
        d += wheel[w];
        w = (w + 1) & 7;
    }
    // Cofactor is 1, a prime, a prime square, or a semiprime with both
    // factors above 10^6; Pollard rho splits the last case.
    let mut stack = vec![n];
    let mut extra: Vec<u64> = Vec::new();
    while let Some(m) = stack.pop() {
        if m == 1 {
            continue;
        }
        if is_prime(m) {
            extra.push(m);
            continue;
        }
        let f = pollard_rho(m);
        stack.push(f);
        stack.push(m / f);
    }
    extra.sort_unstable();
    let mut i = 0;
    while i < extra.len() {
        let p = extra[i];
        let mut e = 0;
        while i < extra.len() && extra[i] == p {
            e += 1;
            i += 1;
        }
        factors.push((p, e));
    }
    factors.sort_unstable_by_key(|&(p, _)| p);
    FactoredInteger { value, factors }
}

/// Product of `rule(p, e)` over the factorization; 1 for q = 1.
pub fn eval_multiplicative<F: Fn(u64, u32) -> f64>(rule: F, q: &FactoredInteger) -> f64 {
    q.factors.iter().map(|&(p, e)| rule(p, e)).product()
}

/// A set of residues modulo a fixed modulus, stored as a bitset.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidueSet {
    modulus: u64,
    bits: Vec<u64>,
}

impl ResidueSet {
    pub fn empty(modulus: u64) -> Self {
        assert!(modulus >= 1);
        let words = (modulus as usize).div_ceil(64);
        ResidueSet {
            modulus,
            bits: vec![0; words],
        }
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    #[inline]
    pub fn insert(&mut self, r: u64) {
        let r = (r % self.modulus) as usize;
        self.bits[r >> 6] |= 1 << (r & 63);
    }

    #[inline]
    pub fn contains(&self, r: u64) -> bool {
        let r = (r % self.modulus) as usize;
        self.bits[r >> 6] >> (r & 63) & 1 == 1
    }

    /// Number of members (popcount).
    pub fn cardinality(&self) -> u64 {
        self.bits.iter().map(|w| w.count_ones() as u64).sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        (0..self.modulus).filter(move |&r| self.contains(r))
    }

    /// Residues not in the set.
    pub fn complement(&self) -> ResidueSet {
        let mut out = ResidueSet::empty(self.modulus);
        for r in 0..self.modulus {
            if !self.contains(r) {
                out.insert(r);
            }
        }
        out
    }

    /// Sumset {a + b mod m : a in self, b in other}.
    pub fn sumset(&self, other: &ResidueSet) -> ResidueSet {
        assert_eq!(self.modulus, other.modulus);
        let mut out = ResidueSet::empty(self.modulus);
        for a in self.iter() {
            for b in other.iter() {
                out.insert(a + b);
            }
        }
        out
    }

    /// Image of the set under r -> r^k mod m.
    pub fn power_image(&self, k: u32) -> ResidueSet {
        let mut out = ResidueSet::empty(self.modulus);
        for r in self.iter() {
            out.insert(pow_mod(r, k as u64, self.modulus));
        }
        out
    }
}

/// The set {x^k mod m : 1 <= x <= m}, optionally restricted to
/// gcd(x, m) = 1.
pub fn power_residues(k: u32, m: u64, units_only: bool) -> ResidueSet {
    assert!(m >= 1 && k >= 1);
    let mut set = ResidueSet::empty(m);
    for x in 1..=m {
        if units_only && gcd(x, m) != 1 {
            continue;
        }
        set.insert(pow_mod(x, k as u64, m));
    }
    set
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn sieve_small() {
        assert_eq!(sieve_primes(10).unwrap(), vec![2, 3, 5, 7]);
        assert_eq!(sieve_primes(2).unwrap(), vec![2]);
        // 25 primes below 100, counted by hand sieve
        assert_eq!(sieve_primes(100).unwrap().len(), 25);
        assert!(matches!(sieve_primes(1), Err(Error::EmptyRange(_))));
    }

    #[test]
    fn sieve_matches_trial_division() {
        let primes = sieve_primes(2000).unwrap();
        let slow: Vec<u64> = (2..=2000).filter(|&n| is_prime(n)).collect();
        assert_eq!(primes, slow);
    }

    #[test]
    fn factorize_examples() {
        assert_eq!(factorize(12).factors, vec![(2, 2), (3, 1)]);
        assert_eq!(factorize(1).factors, vec![]);
        // 2^63 - 25 = 9223372036854775783, the largest prime below 2^63
        let n = (1u64 << 63) - 25;
        let f = factorize(n);
        assert!(is_prime(n));
        assert_eq!(f.factors, vec![(n, 1)]);
        // semiprime with both factors above the trial-division bound
        let p = 1_000_003u64;
        let q = 1_000_033u64;
        let f = factorize(p * q);
        assert_eq!(f.factors, vec![(p, 1), (q, 1)]);
    }

    #[test]
    fn miller_rabin_agrees_with_sieve() {
        let primes = sieve_primes(10_000).unwrap();
        let mut it = primes.iter().peekable();
        for n in 2..=10_000u64 {
            let in_sieve = it.peek() == Some(&&n);
            if in_sieve {
                it.next();
            }
            assert_eq!(is_prime(n), in_sieve, "n = {n}");
        }
    }

    #[test]
    fn power_residues_examples() {
        let cubes9 = power_residues(3, 9, false);
        assert_eq!(cubes9.iter().collect::<Vec<_>>(), vec![0, 1, 8]);
        let cubes7 = power_residues(3, 7, false);
        assert_eq!(cubes7.iter().collect::<Vec<_>>(), vec![0, 1, 6]);
        for m in 1..40 {
            assert_eq!(power_residues(1, m, false).cardinality(), m);
        }
    }

    #[test]
    fn power_residues_contains_one() {
        for m in 2..200u64 {
            for k in 1..6 {
                assert!(power_residues(k, m, false).contains(1));
            }
        }
    }

    #[test]
    fn eval_multiplicative_examples() {
        // table entries w2(4) = 1/2, w2(3) = 3^(-1/2)
        let w2 = |p: u64, e: u32| -> f64 {
            let (p, e) = (p as f64, e as i64);
            let k3 = 6i64; // 3k with k = 2
            let (u, v) = ((e - 1) / k3, (e - 1) % k3 + 1);
            if u >= 1 {
                p.powf(-(u as f64) - v as f64 / k3 as f64)
            } else if v == 1 {
                p.powf(-0.5)
            } else {
                1.0 / p
            }
        };
        let q = factorize(12);
        let got = eval_multiplicative(w2, &q);
        assert!((got - 0.5 / 3f64.sqrt()).abs() < 1e-12);
        assert_eq!(eval_multiplicative(|_, _| 7.0, &factorize(1)), 1.0);
    }

    proptest! {
        // factorize . multiply round-trips on random 64-bit composites
        #[test]
        fn factorize_round_trip(a in 2u64..1u64 << 31, b in 2u64..1u64 << 31) {
            let n = a as u64 * b as u64;
            let f = factorize(n);
            prop_assert_eq!(f.product(), n);
            for w in f.factors.windows(2) {
                prop_assert!(w[0].0 < w[1].0);
            }
            for &(p, e) in &f.factors {
                prop_assert!(is_prime(p));
                prop_assert!(e >= 1);
            }
        }

        // multiplicativity of eval_multiplicative on coprime arguments
        #[test]
        fn eval_multiplicative_is_multiplicative(q1 in 1u64..20_000, q2 in 1u64..20_000) {
            prop_assume!(gcd(q1, q2) == 1);
            let rule = |p: u64, e: u32| (p as f64).powf(-(e as f64) / 3.0);
            let lhs = eval_multiplicative(rule, &factorize(q1 * q2));
            let rhs = eval_multiplicative(rule, &factorize(q1))
                * eval_multiplicative(rule, &factorize(q2));
            prop_assert!((lhs - rhs).abs() <= 1e-15 * rhs.abs().max(1.0));
        }

        #[test]
        fn power_residue_cardinality_bounded(k in 1u32..6, m in 1u64..500) {
            let set = power_residues(k, m, false);
            prop_assert!(set.cardinality() <= m);
            prop_assert_eq!(set.cardinality(), set.iter().count() as u64);
        }
    }
}
