//! Oscillatory integrals and archimedean densities: the arc integrals
//! v(beta), the value densities behind them, grid convolution for the
//! singular integral, the major-arc approximants of the generating
//! functions, and the smooth-weighted torus sum.

use num_complex::Complex64;

use crate::cubes::ParamSet;
use crate::error::{Error, Result};
use crate::expsums::{frac_mul, pairwise_sum, shifted_sum, unit_phase};
use crate::local::Slot;
use crate::smooth::RhoTable;

/// Which arc integral to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IntegralMode {
    /// int_{P/2}^{P} e(beta (x^3 + c)^k) dx
    Plain,
    /// int_{H1}^{H2} e(beta p^(3k) (x^3 + c)^k) dx
    Scaled,
}

/// Value of an oscillatory quadrature with an accuracy flag: the flag
/// is set when the panel floor was reached before the tolerance.
#[derive(Debug, Clone, Copy)]
pub struct Quadrature {
    pub value: Complex64,
    pub accuracy_warning: bool,
}

const SIMPSON_MAX_DEPTH: u32 = 24;
const PANEL_CAP: usize = 1 << 16;

fn simpson_once(
    a: f64,
    b: f64,
    fa: Complex64,
    fm: Complex64,
    fb: Complex64,
) -> Complex64 {
    (fa + fm * 4.0 + fb) * ((b - a) / 6.0)
}

#[allow(clippy::too_many_arguments)]
fn adaptive_step<F: Fn(f64) -> Complex64>(
    f: &F,
    a: f64,
    b: f64,
    fa: Complex64,
    fm: Complex64,
    fb: Complex64,
    whole: Complex64,
    tol: f64,
    depth: u32,
    depth_cap: u32,
    warning: &mut bool,
) -> Complex64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = simpson_once(a, m, fa, flm, fm);
    let right = simpson_once(m, b, fm, frm, fb);
    let delta = left + right - whole;
    if delta.norm() <= 15.0 * tol || depth >= depth_cap {
        if delta.norm() > 15.0 * tol {
            *warning = true;
        }
        return left + right + delta / 15.0;
    }
    adaptive_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth + 1, depth_cap, warning)
        + adaptive_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth + 1, depth_cap, warning)
}

/// Adaptive Simpson quadrature of a complex integrand with oscillation-
/// aware pre-splitting: initial panels are sized against the phase
/// derivative bound so each panel sees O(1) cycles.
pub fn adaptive_quadrature<F: Fn(f64) -> Complex64>(
    f: F,
    a: f64,
    b: f64,
    abs_tol: f64,
    max_phase_derivative: f64,
) -> Quadrature {
    assert!(b >= a);
    if a == b {
        return Quadrature {
            value: Complex64::new(0.0, 0.0),
            accuracy_warning: false,
        };
    }
    let cycles = max_phase_derivative * (b - a);
    // past the panel cap the oscillation cannot be resolved at all:
    // flag immediately and keep the refinement shallow
    let (panels, depth_cap, mut warning) = if cycles > PANEL_CAP as f64 {
        (PANEL_CAP, 4, true)
    } else {
        ((cycles.ceil() as usize).max(1), SIMPSON_MAX_DEPTH, false)
    };
    let mut total = Complex64::new(0.0, 0.0);
    let width = (b - a) / panels as f64;
    let tol_per = abs_tol / panels as f64;
    for i in 0..panels {
        let pa = a + i as f64 * width;
        let pb = pa + width;
        let pm = 0.5 * (pa + pb);
        let (fa, fm, fb) = (f(pa), f(pm), f(pb));
        let whole = simpson_once(pa, pb, fa, fm, fb);
        total += adaptive_step(&f, pa, pb, fa, fm, fb, whole, tol_per, 0, depth_cap, &mut warning);
    }
    Quadrature {
        value: total,
        accuracy_warning: warning,
    }
}

/// The arc integral for one slot.
///
/// The phase argument is formed as beta_eff * (x^3 + c)^k with the
/// effective multiplier beta p^(3k) in scaled mode. Panel widths are
/// capped by the inverse phase derivative at the right endpoint.
pub fn v_integral(
    mode: IntegralMode,
    beta: f64,
    c: u64,
    p: Option<u64>,
    params: &ParamSet,
) -> Result<Quadrature> {
    let (lo, hi, beta_eff) = match mode {
        IntegralMode::Plain => {
            if params.p < 2.0 {
                return Err(Error::Validation("plain mode requires P >= 2".into()));
            }
            (params.p / 2.0, params.p, beta)
        }
        IntegralMode::Scaled => {
            if params.h1 < 1.0 {
                return Err(Error::Validation("scaled mode requires H1 >= 1".into()));
            }
            let p = p.ok_or_else(|| Error::Validation("scaled mode requires a prime".into()))?
                as f64;
            (params.h1, params.h2, beta * p.powi(3 * params.k as i32))
        }
    };
    let k = params.k as i32;
    let cf = c as f64;
    let f = |x: f64| unit_phase((beta_eff * (x.powi(3) + cf).powi(k)).rem_euclid(1.0));
    // d/dx [beta (x^3+c)^k] = 3k beta x^2 (x^3+c)^(k-1), largest at hi
    let dphase = (beta_eff.abs() * 3.0 * k as f64 * hi * hi * (hi.powi(3) + cf).powi(k - 1))
        .max(1e-300);
    Ok(adaptive_quadrature(f, lo, hi, 1e-9 * (hi - lo), dphase))
}

/// The density transported by the change of variables g = (x^3 + c)^k:
/// (1/3k) g^(1/k - 1) (g^(1/k) - c)^(-2/3), with the extra 1/p factor
/// in scaled mode.
pub fn b_density(gamma: f64, c: f64, k: u32, p: Option<u64>) -> Result<f64> {
    let root = gamma.powf(1.0 / k as f64);
    if root <= c || gamma <= 0.0 {
        return Err(Error::Domain(format!(
            "gamma^(1/k) = {root} must exceed the shift {c}"
        )));
    }
    let scale = match p {
        Some(p) => 1.0 / (3.0 * k as f64 * p as f64),
        None => 1.0 / (3.0 * k as f64),
    };
    Ok(scale * gamma.powf(1.0 / k as f64 - 1.0) * (root - c).powf(-2.0 / 3.0))
}

/// Support of one slot density on the value axis.
pub fn slot_support(slot: &Slot, params: &ParamSet) -> (f64, f64) {
    let k = params.k as i32;
    match slot.prime_scale {
        None => {
            let c = slot.shift as f64;
            (
                (params.p.powi(3) / 8.0 + c).powi(k),
                (params.p.powi(3) + c).powi(k),
            )
        }
        Some(p) => {
            let p3 = (p as f64).powi(3);
            let c_scaled = p3 * slot.shift as f64;
            (
                (params.h * p3 / 2.0 + c_scaled).powi(k),
                (2.0 * params.h * p3 / 3.0 + c_scaled).powi(k),
            )
        }
    }
}

/// A sampled density on a uniform grid.
#[derive(Debug, Clone)]
pub struct DensityGrid {
    pub lo: f64,
    pub step: f64,
    pub masses: Vec<f64>,
}

impl DensityGrid {
    /// Sample the slot density on [lo, hi] with the given step.
    pub fn build_slot(slot: &Slot, params: &ParamSet, step: f64) -> Result<DensityGrid> {
        let (lo, hi) = slot_support(slot, params);
        let bins = ((hi - lo) / step).ceil() as usize + 1;
        let c_eff = slot.shift_value() as f64;
        let mut masses = Vec::with_capacity(bins);
        for i in 0..bins {
            let g = (lo + i as f64 * step).min(hi);
            masses.push(b_density(g, c_eff, params.k, slot.prime_scale)?);
        }
        Ok(DensityGrid { lo, step, masses })
    }

    pub fn hi(&self) -> f64 {
        self.lo + (self.masses.len() - 1) as f64 * self.step
    }

    /// Trapezoid mass of the grid.
    pub fn mass(&self) -> f64 {
        if self.masses.len() < 2 {
            return 0.0;
        }
        let inner: f64 = self.masses[1..self.masses.len() - 1].iter().sum();
        self.step * (inner + 0.5 * (self.masses[0] + self.masses[self.masses.len() - 1]))
    }

    /// Linear interpolation; zero outside the support.
    pub fn eval(&self, x: f64) -> f64 {
        let t = (x - self.lo) / self.step;
        if t < 0.0 || t > (self.masses.len() - 1) as f64 {
            return 0.0;
        }
        let i = (t.floor() as usize).min(self.masses.len() - 2);
        let frac = t - i as f64;
        self.masses[i] * (1.0 - frac) + self.masses[i + 1] * frac
    }
}

fn convolve_pair(a: &DensityGrid, b: &DensityGrid) -> DensityGrid {
    assert!(
        (a.step - b.step).abs() <= 1e-9 * a.step,
        "grids must share a step"
    );
    let masses = crate::conv::linear_convolve_f64(&a.masses, &b.masses)
        .into_iter()
        .map(|v| v * a.step)
        .collect();
    DensityGrid {
        lo: a.lo + b.lo,
        step: a.step,
        masses,
    }
}

fn tree_convolve(grids: &[DensityGrid]) -> DensityGrid {
    match grids.len() {
        1 => grids[0].clone(),
        n => {
            let left = tree_convolve(&grids[..n / 2]);
            let right = tree_convolve(&grids[n / 2..]);
            convolve_pair(&left, &right)
        }
    }
}

/// Resample a grid to a new step by linear interpolation.
fn resample(grid: &DensityGrid, step: f64) -> DensityGrid {
    if (grid.step - step).abs() <= 1e-12 * step {
        return grid.clone();
    }
    let hi = grid.hi();
    let bins = ((hi - grid.lo) / step).ceil() as usize + 1;
    let masses = (0..bins)
        .map(|i| grid.eval((grid.lo + i as f64 * step).min(hi)))
        .collect();
    DensityGrid {
        lo: grid.lo,
        step,
        masses,
    }
}

/// Iterated convolution of slot densities evaluated at v: trapezoid
/// end-correction on every leaf, balanced pairwise tree in fixed order.
/// A single slot returns the density itself.
pub fn phi_convolve(slots: &[DensityGrid], v: f64) -> f64 {
    assert!(!slots.is_empty());
    if slots.len() == 1 {
        return slots[0].eval(v);
    }
    let step = slots.iter().map(|g| g.step).fold(f64::INFINITY, f64::min);
    let leaves: Vec<DensityGrid> = slots
        .iter()
        .map(|g| {
            let mut g = resample(g, step);
            if let Some(first) = g.masses.first_mut() {
                *first *= 0.5;
            }
            if let Some(last) = g.masses.last_mut() {
                *last *= 0.5;
            }
            g
        })
        .collect();
    tree_convolve(&leaves).eval(v).max(0.0)
}

/// Full convolved density for reuse across evaluation points.
pub fn phi_density(slots: &[DensityGrid]) -> DensityGrid {
    assert!(slots.len() >= 2);
    let step = slots.iter().map(|g| g.step).fold(f64::INFINITY, f64::min);
    let leaves: Vec<DensityGrid> = slots
        .iter()
        .map(|g| {
            let mut g = resample(g, step);
            if let Some(first) = g.masses.first_mut() {
                *first *= 0.5;
            }
            if let Some(last) = g.masses.last_mut() {
                *last *= 0.5;
            }
            g
        })
        .collect();
    tree_convolve(&leaves)
}

/// Default grid resolution for the singular integral.
pub const DEFAULT_GRID_BINS: usize = 1 << 20;

/// The singular integral at n: the convolution of all slot densities,
/// sampled at total resolution `bins` across the summed support.
pub fn singular_integral(slots: &[Slot], n: u64, params: &ParamSet, bins: usize) -> Result<f64> {
    assert!(!slots.is_empty());
    let mut lo_sum = 0.0;
    let mut hi_sum = 0.0;
    for slot in slots {
        let (lo, hi) = slot_support(slot, params);
        lo_sum += lo;
        hi_sum += hi;
    }
    let v = n as f64;
    if v < lo_sum || v > hi_sum {
        return Ok(0.0);
    }
    let step = (hi_sum - lo_sum) / bins as f64;
    let grids: Vec<DensityGrid> = slots
        .iter()
        .map(|s| DensityGrid::build_slot(s, params, step))
        .collect::<Result<_>>()?;
    Ok(phi_convolve(&grids, v))
}

/// Major-arc approximant mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ApproxMode {
    /// q^(-1) sum_y S_y(q, a) v_y(beta) over smooth pairs y
    V,
    /// q^(-1) sum_{y, p} S_{py}(q, a) v_{y,p}(beta)
    W,
}

/// Result of the approximant with the shared-factor flag for mode W.
#[derive(Debug, Clone, Copy)]
pub struct MajorArcApprox {
    pub value: Complex64,
    pub q_shares_prime_factor: bool,
    pub accuracy_warning: bool,
}

/// Evaluate the major-arc approximant at alpha = a/q + beta.
///
/// Smooth pairs are grouped by their shift c = y1^3 + y2^3 with
/// multiplicities, so the quadrature runs once per distinct shift.
pub fn major_arc_approx(
    mode: ApproxMode,
    alpha: f64,
    a: u64,
    q: u64,
    params: &ParamSet,
    smooth_members: &[u64],
    primes: &[u64],
) -> Result<MajorArcApprox> {
    // torus distance: alpha just below 1 pairs with the center 0/1
    let mut beta = alpha - a as f64 / q as f64;
    beta -= beta.round();
    let mut shift_mult: std::collections::BTreeMap<u64, u64> = std::collections::BTreeMap::new();
    for &y1 in smooth_members {
        for &y2 in smooth_members {
            *shift_mult.entry(y1.pow(3) + y2.pow(3)).or_insert(0) += 1;
        }
    }
    let mut total = Complex64::new(0.0, 0.0);
    let mut warning = false;
    let mut shares = false;
    match mode {
        ApproxMode::V => {
            for (&c, &mult) in &shift_mult {
                let s = shifted_sum(q, a, 0, c % q, params.k);
                let v = v_integral(IntegralMode::Plain, beta, c, None, params)?;
                warning |= v.accuracy_warning;
                total += s * v.value * mult as f64;
            }
        }
        ApproxMode::W => {
            for &p in primes {
                if q % p == 0 {
                    shares = true;
                }
                let p3 = p.pow(3);
                for (&c, &mult) in &shift_mult {
                    let s = shifted_sum(q, a, 0, (p3 % q) * (c % q) % q, params.k);
                    let v = v_integral(IntegralMode::Scaled, beta, c, Some(p), params)?;
                    warning |= v.accuracy_warning;
                    total += s * v.value * mult as f64;
                }
            }
        }
    }
    Ok(MajorArcApprox {
        value: total / q as f64,
        q_shares_prime_factor: shares,
        accuracy_warning: warning,
    })
}

/// The smooth-weighted torus sum
/// sum_{P^(12 eta) < x <= n} (1/12) x^(-11/12) rho(log x / (12 eta log P)) e(beta x),
/// summed in blocks with pairwise accumulation.
pub fn w_beta(beta: f64, n: u64, p: f64, eta: f64, rho: &RhoTable) -> Result<Complex64> {
    let x_min = p.powf(12.0 * eta);
    if x_min >= n as f64 {
        return Err(Error::Validation(format!(
            "requires P^(12 eta) = {x_min} < n = {n}"
        )));
    }
    let beta_frac = beta.rem_euclid(1.0);
    let denom = 12.0 * eta * p.ln();
    let start = x_min.floor() as u64 + 1;
    let mut blocks: Vec<Complex64> = Vec::new();
    let mut block: Vec<Complex64> = Vec::with_capacity(4096);
    for x in start..=n {
        let xf = x as f64;
        let coeff = xf.powf(-11.0 / 12.0) / 12.0 * rho.eval(xf.ln() / denom);
        block.push(unit_phase(frac_mul(beta_frac, x as u128)) * coeff);
        if block.len() == 4096 {
            blocks.push(pairwise_sum(&block));
            block.clear();
        }
    }
    if !block.is_empty() {
        blocks.push(pairwise_sum(&block));
    }
    Ok(pairwise_sum(&blocks))
}
