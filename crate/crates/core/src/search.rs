//! Representability engine and claim verifiers: minimal summand counts
//! over powers of cube-sum members, the power-of-two obstruction for
//! four squares, quartic residue coverage, and exact toy-scale
//! representation counts.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::cubes::{c_residues, CubeCache, ResidueSource, WeightMap};
use crate::error::{Error, Result};

/// Outcome of a minimal-representation query for one n.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct SearchRecord {
    pub n: u64,
    pub k: u32,
    /// None when no representation with at most s_cap summands exists.
    pub s_min: Option<u32>,
    /// Ascending witness, lexicographically smallest among the
    /// minimal-length representations; empty when s_min is None.
    pub witness: Vec<u64>,
}

/// Layered reachability table over [0, N]: layer s holds the integers
/// expressible as a sum of exactly s k-th powers of members.
pub struct MinimalSTable {
    pub k: u32,
    pub limit: u64,
    pub s_cap: u32,
    /// members c with c^k <= limit, ascending
    steps: Vec<u64>,
    layers: Vec<Vec<u64>>,
}

#[inline]
fn get_bit(words: &[u64], i: u64) -> bool {
    words[(i >> 6) as usize] >> (i & 63) & 1 == 1
}

/// dst |= src << shift (bit-level, within the same length).
fn or_shifted(dst: &mut [u64], src: &[u64], shift: u64) {
    let word_shift = (shift >> 6) as usize;
    let bit_shift = shift & 63;
    let n = dst.len();
    if bit_shift == 0 {
        for i in (word_shift..n).rev() {
            dst[i] |= src[i - word_shift];
        }
    } else {
        for i in (word_shift..n).rev() {
            let mut w = src[i - word_shift] << bit_shift;
            if i > word_shift {
                w |= src[i - word_shift - 1] >> (64 - bit_shift);
            }
            dst[i] |= w;
        }
    }
}

impl MinimalSTable {
    /// Breadth-first layered dynamic program: layer s+1 is the union of
    /// layer s shifted by every step. Shifts are computed in parallel
    /// and merged by word-wise OR, which is order-independent.
    pub fn build(k: u32, limit: u64, s_cap: u32, cache: &CubeCache) -> Result<MinimalSTable> {
        let root = (limit as f64).powf(1.0 / k as f64).ceil() as u64 + 1;
        if cache.limit() < root.saturating_sub(1) {
            return Err(Error::Validation(format!(
                "cache limit {} is below N^(1/k) = {root}",
                cache.limit()
            )));
        }
        let steps: Vec<u64> = cache
            .members()
            .take_while(|&c| {
                (c as u128).checked_pow(k).map_or(false, |v| v <= limit as u128)
            })
            .map(|c| c.pow(k))
            .collect();
        let words = (limit as usize + 1).div_ceil(64);
        let mut zero_layer = vec![0u64; words];
        zero_layer[0] = 1; // the empty sum reaches 0
        let mut layers = vec![zero_layer];
        for _ in 1..=s_cap {
            let prev = layers.last().unwrap();
            let next = steps
                .par_iter()
                .fold(
                    || vec![0u64; words],
                    |mut acc, &step| {
                        or_shifted(&mut acc, prev, step);
                        acc
                    },
                )
                .reduce(
                    || vec![0u64; words],
                    |mut a, b| {
                        for (x, y) in a.iter_mut().zip(b) {
                            *x |= y;
                        }
                        a
                    },
                );
            layers.push(next);
        }
        Ok(MinimalSTable {
            k,
            limit,
            s_cap,
            steps,
            layers,
        })
    }

    /// Exact minimal summand count, None when above the cap.
    pub fn s_min(&self, n: u64) -> Option<u32> {
        assert!(n <= self.limit);
        (0..=self.s_cap).find(|&s| get_bit(&self.layers[s as usize], n))
    }

    /// Witness reconstruction: at every level pick the smallest member
    /// whose power leaves a remainder reachable one layer down. The
    /// greedy choice is the global minimum over all minimal
    /// representations, so the ascending witness is lexicographically
    /// smallest.
    pub fn record(&self, n: u64) -> SearchRecord {
        let s_min = self.s_min(n);
        let mut witness = Vec::new();
        if let Some(s) = s_min {
            let mut rest = n;
            for level in (1..=s).rev() {
                let prev = &self.layers[(level - 1) as usize];
                for &step in &self.steps {
                    if step > rest {
                        break;
                    }
                    if get_bit(prev, rest - step) {
                        witness.push(nth_root(step, self.k));
                        rest -= step;
                        break;
                    }
                }
            }
            debug_assert_eq!(rest, 0);
            witness.sort_unstable();
        }
        SearchRecord {
            n,
            k: self.k,
            s_min,
            witness,
        }
    }

    pub fn records(&self, lo: u64, hi: u64) -> Vec<SearchRecord> {
        (lo..=hi.min(self.limit))
            .into_par_iter()
            .map(|n| self.record(n))
            .collect()
    }

    /// Largest n in [lo, hi] with s_min above the cap, plus one; lo when
    /// every n is representable.
    pub fn onset(&self, lo: u64, hi: u64) -> u64 {
        let mut onset = lo;
        for n in lo..=hi.min(self.limit) {
            if self.s_min(n).is_none() {
                onset = n + 1;
            }
        }
        onset
    }
}

fn nth_root(v: u64, k: u32) -> u64 {
    let mut r = (v as f64).powf(1.0 / k as f64).round() as u64;
    while r.pow(k) > v {
        r -= 1;
    }
    while (r + 1).pow(k) <= v {
        r += 1;
    }
    r
}

/// Report of the four-squares power-of-two obstruction at level j.
#[derive(Debug, Clone, serde::Serialize)]
pub struct SquaresLowerBound {
    pub j: u32,
    pub target: u64,
    /// All unordered positive quadruples with square sum = target.
    pub solutions: Vec<[u64; 4]>,
    pub expected_root: u64,
    pub unique_expected: bool,
    pub root_mod_nine: u64,
    pub root_class_in_cube_sums: bool,
    /// target has no representation by four squares of cube-sum members
    pub insoluble_in_cube_sums: bool,
}

/// Enumerate ALL positive quadruples with x1^2+..+x4^2 = 2^(6+12j) by
/// meet-in-the-middle over pairs, then check the expected unique
/// solution and its residue obstruction.
pub fn verify_squares_lower_bound(j: u32) -> Result<SquaresLowerBound> {
    if j > 1 {
        return Err(Error::Resource(
            "meet-in-the-middle budget covers j in {0, 1}".into(),
        ));
    }
    let target = 1u64 << (6 + 12 * j);
    let max_x = (target as f64).sqrt() as u64;
    // pair sums a = x1^2 + x2^2 with x1 <= x2
    let mut pairs: BTreeMap<u64, Vec<(u64, u64)>> = BTreeMap::new();
    for x1 in 1..=max_x {
        let s1 = x1 * x1;
        for x2 in x1..=max_x {
            let s = s1 + x2 * x2;
            if s > target {
                break;
            }
            pairs.entry(s).or_default().push((x1, x2));
        }
    }
    let mut solutions: Vec<[u64; 4]> = Vec::new();
    for (&a, left) in &pairs {
        let b = match target.checked_sub(a) {
            Some(b) if b >= a => b,
            _ => continue,
        };
        if let Some(right) = pairs.get(&b) {
            for &(x1, x2) in left {
                for &(x3, x4) in right {
                    if x2 <= x3 {
                        solutions.push([x1, x2, x3, x4]);
                    }
                }
            }
        }
    }
    solutions.sort_unstable();
    solutions.dedup();
    let expected_root = 1u64 << (2 + 6 * j);
    let unique_expected = solutions == vec![[expected_root; 4]];
    let root_mod_nine = expected_root % 9;
    let classes = c_residues(9, ResidueSource::Exact, None);
    let root_class_in_cube_sums = classes.contains(root_mod_nine);
    Ok(SquaresLowerBound {
        j,
        target,
        solutions,
        expected_root,
        unique_expected,
        root_mod_nine,
        root_class_in_cube_sums,
        insoluble_in_cube_sums: unique_expected && !root_class_in_cube_sums,
    })
}

/// One slot of a quartic coverage witness: the residue contributed and
/// a generating (p, x) with (p^3 T(x))^4 = value (mod 81).
#[derive(Debug, Clone, serde::Serialize)]
pub struct CoveragePart {
    pub value: u64,
    pub p: u64,
    pub triple: [u64; 3],
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct CoverageWitness {
    pub residue: u64,
    pub parts: Vec<CoveragePart>,
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct CoverageReport {
    pub covered: bool,
    pub single_values: Vec<u64>,
    pub witnesses: Vec<CoverageWitness>,
}

/// Check that the 11-fold sumset of {T(p x)^4 mod 81 : 1 <= p, x_i <= 81}
/// covers all residue classes, with one witness decomposition per class.
pub fn quartic_residue_coverage() -> CoverageReport {
    // T(p x) = p^3 T(x), and T(x) mod 81 ranges over the cube-sum
    // classes; find a generating triple for every class first.
    let t_classes = c_residues(81, ResidueSource::Exact, None);
    let mut triple_for: BTreeMap<u64, [u64; 3]> = BTreeMap::new();
    'outer: for x1 in 1..=81u64 {
        for x2 in x1..=81u64 {
            for x3 in x2..=81u64 {
                let t = (x1.pow(3) + x2.pow(3) + x3.pow(3)) % 81;
                triple_for.entry(t).or_insert([x1, x2, x3]);
                if triple_for.len() as u64 == t_classes.cardinality() {
                    break 'outer;
                }
            }
        }
    }
    // single-slot values with a generating (p, triple) each
    let mut gen_for: BTreeMap<u64, CoveragePart> = BTreeMap::new();
    for p in 1..=81u64 {
        let p3 = p.pow(3) % 81;
        for (&t, &triple) in &triple_for {
            let v = ((p3 * t) % 81).pow(4) % 81;
            gen_for.entry(v).or_insert(CoveragePart { value: v, p, triple });
        }
    }
    let single_values: Vec<u64> = gen_for.keys().copied().collect();
    // 11-fold sumset layers for backtracking
    let mut layers: Vec<Vec<bool>> = vec![vec![false; 81]];
    layers[0][0] = true;
    for _ in 0..11 {
        let prev = layers.last().unwrap();
        let mut next = vec![false; 81];
        for r in 0..81usize {
            if prev[r] {
                for &v in &single_values {
                    next[(r + v as usize) % 81] = true;
                }
            }
        }
        layers.push(next);
    }
    let covered = layers[11].iter().all(|&b| b);
    let mut witnesses = Vec::with_capacity(81);
    for residue in 0..81u64 {
        if !layers[11][residue as usize] {
            continue;
        }
        let mut parts = Vec::with_capacity(11);
        let mut rest = residue;
        for level in (1..=11u32).rev() {
            let prev = &layers[(level - 1) as usize];
            for &v in &single_values {
                let rem = (rest + 81 - v) % 81;
                if prev[rem as usize] {
                    parts.push(gen_for[&v].clone());
                    rest = rem;
                    break;
                }
            }
        }
        witnesses.push(CoverageWitness { residue, parts });
    }
    CoverageReport {
        covered,
        single_values,
        witnesses,
    }
}

/// Toy-scale configuration for exact representation counting.
#[derive(Debug, Clone)]
pub struct ToyConfig {
    pub k: u32,
    /// plain-slot weights keyed by the value x (fed as x^k)
    pub a_weights: WeightMap,
    /// prime-scaled-slot weights keyed by h (fed as (p^3 h)^k)
    pub b_weights: WeightMap,
    pub primes: Vec<u64>,
    /// number of plain slots
    pub s: u32,
    /// number of prime-scaled slots
    pub t: u32,
}

/// Which counting problem to solve.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RepMode {
    /// t prime-scaled k-th powers plus s plain k-th powers
    R,
    /// 11-style quartic form: prime-scaled fourth powers plus
    /// 81 * twelfth powers of the plain values
    R4,
    /// prime-scaled powers only
    K,
}

const REP_BUDGET: usize = 100_000_000;

fn convolve_sparse(
    a: &BTreeMap<u128, u128>,
    b: &BTreeMap<u128, u128>,
    cap: u128,
) -> Result<BTreeMap<u128, u128>> {
    if a.len().saturating_mul(b.len()) > REP_BUDGET {
        return Err(Error::Resource(format!(
            "sparse convolution {} x {} exceeds the 10^8 budget",
            a.len(),
            b.len()
        )));
    }
    let mut out = BTreeMap::new();
    for (&ka, &va) in a {
        if ka > cap {
            break;
        }
        for (&kb, &vb) in b {
            let key = ka + kb;
            if key > cap {
                break;
            }
            *out.entry(key).or_insert(0u128) += va * vb;
        }
    }
    Ok(out)
}

fn plain_histogram(cfg: &ToyConfig, mode: RepMode) -> Result<BTreeMap<u128, u128>> {
    let mut hist = BTreeMap::new();
    for (&x, &mult) in &cfg.a_weights.entries {
        let key = match mode {
            RepMode::R => (x as u128).pow(cfg.k),
            RepMode::R4 => 81u128 * (x as u128).pow(12),
            RepMode::K => unreachable!(),
        };
        *hist.entry(key).or_insert(0u128) += mult as u128;
    }
    Ok(hist)
}

fn scaled_histogram(cfg: &ToyConfig) -> BTreeMap<u128, u128> {
    let mut hist = BTreeMap::new();
    for &p in &cfg.primes {
        let scale = (p as u128).pow(3 * cfg.k);
        for (&h, &mult) in &cfg.b_weights.entries {
            let key = scale * (h as u128).pow(cfg.k);
            *hist.entry(key).or_insert(0u128) += mult as u128;
        }
    }
    hist
}

/// Exact representation count at the target by iterated convolution of
/// integer-valued histograms; mirrors the orthogonality identity
/// without any integration.
pub fn rep_count(mode: RepMode, cfg: &ToyConfig, target: u128) -> Result<u128> {
    let (s, t) = match mode {
        RepMode::K => (0, cfg.t),
        _ => (cfg.s, cfg.t),
    };
    let mut acc: Option<BTreeMap<u128, u128>> = None;
    let scaled = scaled_histogram(cfg);
    for _ in 0..t {
        acc = Some(match acc {
            None => scaled.clone(),
            Some(prev) => convolve_sparse(&prev, &scaled, target)?,
        });
    }
    if s > 0 {
        let plain = plain_histogram(cfg, mode)?;
        for _ in 0..s {
            acc = Some(match acc {
                None => plain.clone(),
                Some(prev) => convolve_sparse(&prev, &plain, target)?,
            });
        }
    }
    Ok(acc
        .and_then(|hist| hist.get(&target).copied())
        .unwrap_or(0))
}
