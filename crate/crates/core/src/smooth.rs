//! Smooth sets A(Y, R), smooth counting, and Dickman's function.

use crate::error::Result;

/// The integers in [1, Y] whose prime factors are all <= R.
#[derive(Debug, Clone)]
pub struct SmoothSet {
    pub bound: u64,
    pub smoothness: u64,
    /// Ascending member list; always contains 1.
    pub members: Vec<u64>,
}

impl SmoothSet {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

/// Least-prime-factor table for [0, n]; lpf[p] == 0 marks p prime
/// (and lpf[0] = lpf[1] = 0).
pub fn least_prime_factor_table(n: u64) -> Vec<u32> {
    let n = n as usize;
    let mut lpf = vec![0u32; n + 1];
    let mut primes: Vec<u32> = Vec::new();
    for i in 2..=n {
        if lpf[i] == 0 {
            primes.push(i as u32);
        }
        for &p in &primes {
            let m = i * p as usize;
            if m > n || (lpf[i] != 0 && p > lpf[i]) {
                break;
            }
            lpf[m] = p;
            if i % p as usize == 0 {
                break;
            }
        }
    }
    lpf
}

#[inline]
fn is_smooth(mut n: u64, r: u64, lpf: &[u32]) -> bool {
    while n > 1 {
        let p = match lpf[n as usize] {
            0 => n, // n itself is prime
            p => p as u64,
        };
        if p > r {
            return false;
        }
        while n % p == 0 {
            n /= p;
        }
    }
    true
}

/// Exact A(Y, R) built from a least-prime-factor sieve, never from
/// per-element factorization. R < 2 yields {1}.
pub fn smooth_set(bound: u64, smoothness: u64) -> SmoothSet {
    assert!(bound >= 1 && smoothness >= 1);
    if smoothness < 2 {
        return SmoothSet {
            bound,
            smoothness,
            members: vec![1],
        };
    }
    let lpf = least_prime_factor_table(bound);
    let members = (1..=bound)
        .filter(|&n| is_smooth(n, smoothness, &lpf))
        .collect();
    SmoothSet {
        bound,
        smoothness,
        members,
    }
}

/// Count of A(Y, R) without materializing the member list.
pub fn smooth_count(bound: u64, smoothness: u64) -> u64 {
    if smoothness < 2 {
        return 1;
    }
    let lpf = least_prime_factor_table(bound);
    (1..=bound).filter(|&n| is_smooth(n, smoothness, &lpf)).count() as u64
}

/// Dickman's function tabulated on a uniform grid.
///
/// rho(x) = 1 on [0, 1]; for x > 1 it solves the delay equation
/// x rho'(x) = -rho(x - 1). The table is filled with a fixed-step
/// trapezoidal update applied to the equivalent integral identity
/// x rho(x) = int_{x-1}^{x} rho(t) dt, which keeps every node a
/// positive average of earlier nodes. The grid is aligned so the
/// delayed argument always lands on a node.
#[derive(Debug, Clone)]
pub struct RhoTable {
    pub step: f64,
    pub values: Vec<f64>,
}

pub const RHO_DEFAULT_STEP: f64 = 1e-4;
pub const RHO_DEFAULT_MAX: f64 = 20.0;

impl RhoTable {
    pub fn build(x_max: f64, step: f64) -> RhoTable {
        assert!(step > 0.0 && x_max >= 1.0);
        let per_unit = (1.0 / step).round() as usize;
        assert!(
            (per_unit as f64 * step - 1.0).abs() < 1e-12,
            "step must divide 1 so the delayed node is exact"
        );
        let n = (x_max / step).ceil() as usize;
        let mut values = vec![1.0f64; n + 1];
        // Trapezoid for int_{x-1}^{x} rho, with the unknown endpoint
        // moved to the left side:
        //   (x - h/2) rho_i = h (rho_{i-P}/2 + sum_{i-P < j < i} rho_j).
        // The bracket is a sliding window sum, rebuilt from scratch once
        // per unit of x: the incremental form would otherwise carry an
        // absolute rounding floor from the region where rho ~ 1, which
        // dwarfs rho itself past x ~ 17.
        let mut window: f64 = 0.5 + (per_unit - 1) as f64; // over the all-ones prefix
        for i in per_unit + 1..=n {
            if (i - per_unit - 1) % per_unit == 0 && i > per_unit + 1 {
                window = 0.5 * values[i - per_unit]
                    + values[i - per_unit + 1..i].iter().sum::<f64>();
            }
            let x = i as f64 * step;
            let v = step * window / (x - 0.5 * step);
            values[i] = v;
            window += v - 0.5 * values[i - per_unit] - 0.5 * values[i + 1 - per_unit];
        }
        RhoTable { step, values }
    }

    /// rho(x): 0 for x < 0, 1 on [0, 1], table interpolation beyond.
    pub fn eval(&self, x: f64) -> f64 {
        if x < 0.0 {
            return 0.0;
        }
        if x <= 1.0 {
            return 1.0;
        }
        let t = x / self.step;
        let i = t.floor() as usize;
        if i + 1 >= self.values.len() {
            return *self.values.last().unwrap();
        }
        let frac = t - i as f64;
        self.values[i] * (1.0 - frac) + self.values[i + 1] * frac
    }

    pub fn x_max(&self) -> f64 {
        (self.values.len() - 1) as f64 * self.step
    }
}

/// rho with the default table (built once per call site; cheap).
pub fn dickman_rho(x: f64) -> f64 {
    use std::sync::OnceLock;
    static TABLE: OnceLock<RhoTable> = OnceLock::new();
    TABLE
        .get_or_init(|| RhoTable::build(RHO_DEFAULT_MAX, RHO_DEFAULT_STEP))
        .eval(x)
}

/// Smooth-count report comparing Psi(Y, Y^(1/u))/Y with rho(u).
#[derive(Debug, Clone, serde::Serialize)]
pub struct PsiRatioReport {
    pub bound: u64,
    pub u: f64,
    pub smoothness: u64,
    pub psi: u64,
    pub ratio: f64,
    pub rho: f64,
}

/// Report only, no assertion: counts A(Y, Y^(1/u)) and pairs the ratio
/// with rho(u).
pub fn psi_ratio_report(bound: u64, u: f64) -> Result<PsiRatioReport> {
    use crate::error::Error;
    if bound < 100 || u < 1.0 {
        return Err(Error::Validation(format!(
            "psi_ratio_report requires Y >= 100 and u >= 1, got Y={bound}, u={u}"
        )));
    }
    let smoothness = (bound as f64).powf(1.0 / u).floor() as u64;
    if smoothness < 2 {
        return Err(Error::Validation(format!(
            "Y^(1/u) = {smoothness} < 2: no primes allowed"
        )));
    }
    let psi = smooth_count(bound, smoothness);
    Ok(PsiRatioReport {
        bound,
        u,
        smoothness,
        psi,
        ratio: psi as f64 / bound as f64,
        rho: dickman_rho(u),
    })
}
