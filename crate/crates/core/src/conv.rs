//! Exact and floating-point cyclic convolutions over Z/m.
//!
//! Histograms of residue values are the workhorse of the congruence
//! counters: solution counts become iterated cyclic convolutions. Small
//! moduli are convolved directly; larger ones go through three
//! number-theoretic transforms with CRT reconstruction, so counts stay
//! exact.

use crate::error::{Error, Result};

/// Direct/NTT crossover.
const DIRECT_LIMIT: usize = 4096;

/// CRT range of the three NTT primes is ~4.7e26; stay a factor 2 under.
const EXACT_ENTRY_LIMIT: f64 = 2.3e26;

/// Exact cyclic convolution of two nonnegative histograms over Z/m.
///
/// Errors when an output entry could exceed the exact range.
pub fn cyclic_convolve_exact(a: &[u128], b: &[u128], m: usize) -> Result<Vec<u128>> {
    assert_eq!(a.len(), m);
    assert_eq!(b.len(), m);
    let sum_a: f64 = a.iter().map(|&x| x as f64).sum();
    let max_b = b.iter().copied().max().unwrap_or(0) as f64;
    if sum_a * max_b > EXACT_ENTRY_LIMIT {
        return Err(Error::Resource(
            "exact convolution entries exceed the 3-prime CRT range".into(),
        ));
    }
    if m <= DIRECT_LIMIT {
        let mut out = vec![0u128; m];
        for (i, &ai) in a.iter().enumerate() {
            if ai == 0 {
                continue;
            }
            for (j, &bj) in b.iter().enumerate() {
                if bj == 0 {
                    continue;
                }
                let k = i + j;
                let k = if k >= m { k - m } else { k };
                out[k] += ai * bj;
            }
        }
        Ok(out)
    } else {
        Ok(ntt_cyclic(a, b, m))
    }
}

/// Cyclic convolution of f64 vectors (used for normalized densities).
pub fn cyclic_convolve_f64(a: &[f64], b: &[f64]) -> Vec<f64> {
    let m = a.len();
    assert_eq!(b.len(), m);
    if m <= DIRECT_LIMIT {
        let mut out = vec![0.0f64; m];
        for (i, &ai) in a.iter().enumerate() {
            if ai == 0.0 {
                continue;
            }
            for (j, &bj) in b.iter().enumerate() {
                let k = i + j;
                let k = if k >= m { k - m } else { k };
                out[k] += ai * bj;
            }
        }
        return out;
    }
    use rustfft::{num_complex::Complex, FftPlanner};
    let mut planner = FftPlanner::<f64>::new();
    let fft = planner.plan_fft_forward(m);
    let ifft = planner.plan_fft_inverse(m);
    let mut fa: Vec<Complex<f64>> = a.iter().map(|&x| Complex::new(x, 0.0)).collect();
    let mut fb: Vec<Complex<f64>> = b.iter().map(|&x| Complex::new(x, 0.0)).collect();
    fft.process(&mut fa);
    fft.process(&mut fb);
    for (x, y) in fa.iter_mut().zip(&fb) {
        *x *= y;
    }
    ifft.process(&mut fa);
    fa.iter().map(|c| c.re / m as f64).collect()
}

/// Linear convolution of f64 vectors (used for density grids).
pub fn linear_convolve_f64(a: &[f64], b: &[f64]) -> Vec<f64> {
    let out_len = a.len() + b.len() - 1;
    if a.len().min(b.len()) <= 64 {
        let mut out = vec![0.0f64; out_len];
        for (i, &ai) in a.iter().enumerate() {
            for (j, &bj) in b.iter().enumerate() {
                out[i + j] += ai * bj;
            }
        }
        return out;
    }
    use rustfft::{num_complex::Complex, FftPlanner};
    let n = out_len.next_power_of_two();
    let mut planner = FftPlanner::<f64>::new();
    let fft = planner.plan_fft_forward(n);
    let ifft = planner.plan_fft_inverse(n);
    let mut fa = vec![Complex::new(0.0, 0.0); n];
    let mut fb = vec![Complex::new(0.0, 0.0); n];
    for (x, &v) in fa.iter_mut().zip(a) {
        x.re = v;
    }
    for (x, &v) in fb.iter_mut().zip(b) {
        x.re = v;
    }
    fft.process(&mut fa);
    fft.process(&mut fb);
    for (x, y) in fa.iter_mut().zip(&fb) {
        *x *= y;
    }
    ifft.process(&mut fa);
    fa[..out_len].iter().map(|c| c.re / n as f64).collect()
}

// Three NTT-friendly primes with primitive root 3.
const NTT_PRIMES: [u64; 3] = [998_244_353, 1_004_535_809, 469_762_049];

fn pow_mod_p(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = (acc as u128 * a as u128 % p as u128) as u64;
        }
        a = (a as u128 * a as u128 % p as u128) as u64;
        e >>= 1;
    }
    acc
}

fn ntt(values: &mut [u64], invert: bool, p: u64) {
    let n = values.len();
    debug_assert!(n.is_power_of_two());
    let mut j = 0usize;
    for i in 1..n {
        let mut bit = n >> 1;
        while j & bit != 0 {
            j ^= bit;
            bit >>= 1;
        }
        j |= bit;
        if i < j {
            values.swap(i, j);
        }
    }
    let mut len = 2usize;
    while len <= n {
        let mut w = pow_mod_p(3, (p - 1) / len as u64, p);
        if invert {
            w = pow_mod_p(w, p - 2, p);
        }
        for start in (0..n).step_by(len) {
            let mut wn = 1u64;
            for i in start..start + len / 2 {
                let u = values[i];
                let v = (values[i + len / 2] as u128 * wn as u128 % p as u128) as u64;
                values[i] = if u + v >= p { u + v - p } else { u + v };
                values[i + len / 2] = if u >= v { u - v } else { u + p - v };
                wn = (wn as u128 * w as u128 % p as u128) as u64;
            }
        }
        len <<= 1;
    }
    if invert {
        let n_inv = pow_mod_p(n as u64, p - 2, p);
        for v in values.iter_mut() {
            *v = (*v as u128 * n_inv as u128 % p as u128) as u64;
        }
    }
}

fn convolve_mod_p(a: &[u128], b: &[u128], size: usize, p: u64) -> Vec<u64> {
    let mut fa: Vec<u64> = a.iter().map(|&x| (x % p as u128) as u64).collect();
    let mut fb: Vec<u64> = b.iter().map(|&x| (x % p as u128) as u64).collect();
    fa.resize(size, 0);
    fb.resize(size, 0);
    ntt(&mut fa, false, p);
    ntt(&mut fb, false, p);
    for (x, &y) in fa.iter_mut().zip(&fb) {
        *x = (*x as u128 * y as u128 % p as u128) as u64;
    }
    ntt(&mut fa, true, p);
    fa
}

fn ntt_cyclic(a: &[u128], b: &[u128], m: usize) -> Vec<u128> {
    let size = (2 * m - 1).next_power_of_two();
    let per_prime: Vec<Vec<u64>> = NTT_PRIMES
        .iter()
        .map(|&p| convolve_mod_p(a, b, size, p))
        .collect();
    let (m1, m2, m3) = (
        NTT_PRIMES[0] as u128,
        NTT_PRIMES[1] as u128,
        NTT_PRIMES[2] as u128,
    );
    let inv_m1_mod_m2 = pow_mod_p(NTT_PRIMES[0] % NTT_PRIMES[1], NTT_PRIMES[1] - 2, NTT_PRIMES[1]) as u128;
    let m1m2_mod_m3 = (m1 * m2 % m3) as u64;
    let inv_m1m2_mod_m3 = pow_mod_p(m1m2_mod_m3, NTT_PRIMES[2] - 2, NTT_PRIMES[2]) as u128;
    let mut out = vec![0u128; m];
    for i in 0..2 * m - 1 {
        let r1 = per_prime[0][i] as u128;
        let r2 = per_prime[1][i] as u128;
        let r3 = per_prime[2][i] as u128;
        // Garner reconstruction: x = r1 + m1 t1 + m1 m2 t2
        let t1 = (r2 + m2 - r1 % m2) % m2 * inv_m1_mod_m2 % m2;
        let x12 = r1 + m1 * t1;
        let t2 = (r3 + m3 - x12 % m3) % m3 * inv_m1m2_mod_m3 % m3;
        let x = x12 + m1 * m2 * t2;
        let k = if i >= m { i - m } else { i };
        out[k] += x;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_matches_direct_small() {
        let m = 17usize;
        let a: Vec<u128> = (0..m as u128).map(|i| i * i + 1).collect();
        let b: Vec<u128> = (0..m as u128).map(|i| 3 * i + 2).collect();
        let got = cyclic_convolve_exact(&a, &b, m).unwrap();
        let mut want = vec![0u128; m];
        for i in 0..m {
            for j in 0..m {
                want[(i + j) % m] += a[i] * b[j];
            }
        }
        assert_eq!(got, want);
    }

    #[test]
    fn ntt_matches_direct() {
        // force the NTT path with m just above the crossover
        let m = DIRECT_LIMIT + 5;
        let a: Vec<u128> = (0..m as u128).map(|i| (i * 37 + 11) % 1000).collect();
        let b: Vec<u128> = (0..m as u128).map(|i| (i * 101 + 7) % 1000).collect();
        let got = cyclic_convolve_exact(&a, &b, m).unwrap();
        let direct = ntt_free_direct(&a, &b, m);
        assert_eq!(got, direct);
    }

    fn ntt_free_direct(a: &[u128], b: &[u128], m: usize) -> Vec<u128> {
        let mut out = vec![0u128; m];
        for i in 0..m {
            if a[i] == 0 {
                continue;
            }
            for j in 0..m {
                out[(i + j) % m] += a[i] * b[j];
            }
        }
        out
    }

    #[test]
    fn big_entries_preserved() {
        // entries near 10^16 must survive CRT exactly
        let m = DIRECT_LIMIT + 1;
        let mut a = vec![0u128; m];
        let mut b = vec![0u128; m];
        a[1] = 10_000_000_000_000_000;
        a[2] = 123_456_789_012_345;
        b[3] = 7;
        b[0] = 999_999_937;
        let got = cyclic_convolve_exact(&a, &b, m).unwrap();
        let want = ntt_free_direct(&a, &b, m);
        assert_eq!(got, want);
    }

    #[test]
    fn f64_linear_matches_direct() {
        let a: Vec<f64> = (0..300).map(|i| (i as f64).sin().abs()).collect();
        let b: Vec<f64> = (0..200).map(|i| (i as f64 * 0.7).cos().abs()).collect();
        let got = linear_convolve_f64(&a, &b);
        let mut want = vec![0.0; a.len() + b.len() - 1];
        for i in 0..a.len() {
            for j in 0..b.len() {
                want[i + j] += a[i] * b[j];
            }
        }
        for (g, w) in got.iter().zip(&want) {
            assert!((g - w).abs() < 1e-9 * (1.0 + w.abs()));
        }
    }
}
