//! Command-line surface for the cubewaring library.
//!
//! Subcommands mirror the library modules; report-style output is CSV
//! (numeric fields, no quoting) or JSON documents carrying a schema
//! version. `verify` runs the full acceptance suite.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use cubewaring::analytic::{self, ApproxMode, IntegralMode};
use cubewaring::arith;
use cubewaring::cachefile::{write_cache, MappedCubeCache};
use cubewaring::cubes::{build_weights, c_residues, CubeCache, ParamSet, ResidueSource, WeightMode};
use cubewaring::error::Error;
use cubewaring::expsums::{self, ArcClass, ArcScheme, CongruenceMode, Generating};
use cubewaring::local::{self, DepthPolicy, Slot};
use cubewaring::search::{self, RepMode, ToyConfig};
use cubewaring::smooth;
use cubewaring::verify;

#[derive(Parser)]
#[command(name = "cubewaring", version, about = "Sums of three cubes: caches, exponential sums, local densities, and representability searches")]
struct Cli {
    /// Worker threads (0 keeps the library default)
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    /// Cache directory; overrides CUBEWARING_CACHE_DIR
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Membership caches and residue classes of sums of three cubes
    Cubes {
        #[command(subcommand)]
        cmd: CubesCmd,
    },
    /// Smooth sets and Dickman's function
    Smooth {
        #[command(subcommand)]
        cmd: SmoothCmd,
    },
    /// Complete exponential sums, weights, counters and arcs
    Expsum {
        #[command(subcommand)]
        cmd: ExpsumCmd,
    },
    /// Local densities, singular series and congruence solubility
    Local {
        #[command(subcommand)]
        cmd: LocalCmd,
    },
    /// Oscillatory integrals and major-arc approximants
    Analytic {
        #[command(subcommand)]
        cmd: AnalyticCmd,
    },
    /// Representability searches and claim verifiers
    Search {
        #[command(subcommand)]
        cmd: SearchCmd,
    },
    /// Run the acceptance suite and print one line per criterion
    Verify,
}

#[derive(Subcommand)]
enum CubesCmd {
    /// Build a membership cache and persist it
    Build {
        #[arg(long)]
        limit: u64,
        /// Also store ordered representation counts r3(n)
        #[arg(long)]
        counts: bool,
        /// Output file (defaults to cube-cache-LIMIT.bin in the cache dir)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Query integers: CSV rows n,in_c,r3
    Query {
        #[arg(long)]
        n: Option<u64>,
        #[arg(long)]
        lo: Option<u64>,
        #[arg(long)]
        hi: Option<u64>,
        #[arg(long)]
        cache: Option<PathBuf>,
    },
    /// Residue classes mod m as one CSV row
    Residues {
        #[arg(long = "mod")]
        modulus: u64,
        #[arg(long, value_enum, default_value_t = SourceArg::Exact)]
        source: SourceArg,
        #[arg(long)]
        cache: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SourceArg {
    Exact,
    Cache,
}

#[derive(Subcommand)]
enum SmoothCmd {
    /// Members of A(bound, smoothness), one per line
    List {
        #[arg(long)]
        bound: u64,
        #[arg(long)]
        smoothness: u64,
    },
    /// Dickman's function at x
    Rho {
        #[arg(long)]
        x: f64,
    },
    /// Smooth-count report: CSV bound,u,smoothness,psi,ratio,rho
    Psi {
        #[arg(long)]
        bound: u64,
        #[arg(long)]
        u: f64,
    },
}

#[derive(Args)]
struct ParamArgs {
    #[arg(long)]
    k: u32,
    #[arg(long)]
    n: u64,
    #[arg(long, default_value_t = 0.1)]
    eta: f64,
}

impl ParamArgs {
    fn build(&self) -> Result<ParamSet, Error> {
        ParamSet::new(self.k, self.n, self.eta)
    }
}

#[derive(Subcommand)]
enum ExpsumCmd {
    /// Complete power sum S_k(q, a): CSV re,im,abs
    Sk {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        a: u64,
        #[arg(long)]
        k: u32,
    },
    /// Shifted sum with linear twist: CSV re,im,abs
    Sy {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        a: u64,
        #[arg(long, default_value_t = 0)]
        b: u64,
        #[arg(long)]
        c: u64,
        #[arg(long)]
        k: u32,
    },
    /// Multiplicative weight w_k(q)
    W {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        k: u32,
    },
    /// Multiplicative weight tau_k(q)
    Tau {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        k: u32,
    },
    /// Evaluate the generating functions on a torus grid:
    /// CSV alpha,h_abs,w_abs,classification
    Eval {
        #[command(flatten)]
        params: ParamArgs,
        /// Number of grid points on [0, 1)
        #[arg(long, default_value_t = 64)]
        grid: u64,
    },
    /// Congruence-solution counts: CSV q,N,R (whichever are requested)
    Count {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        k: u32,
        /// Variable bound P for the plain count R(q, P)
        #[arg(long)]
        p_limit: Option<u64>,
        /// Variable bound H^(1/3) for the prime-scaled count N(q, P)
        #[arg(long)]
        h13: Option<u64>,
        /// Primes for the prime-scaled count, comma separated
        #[arg(long, value_delimiter = ',')]
        primes: Vec<u64>,
    },
    /// Classify a torus point against an arc scheme
    Arc {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long)]
        alpha: f64,
        #[arg(long, value_enum, default_value_t = SchemeArg::Major)]
        scheme: SchemeArg,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SchemeArg {
    Major,
    Majorp,
    Narrow,
}

fn parse_slots(scaled: &[String], plain: &[u64]) -> Result<Vec<Slot>, Error> {
    let mut slots = Vec::new();
    for spec in scaled {
        let (p, c) = spec
            .split_once(':')
            .ok_or_else(|| Error::Validation(format!("scaled slot '{spec}' wants p:c")))?;
        let p = p
            .parse()
            .map_err(|_| Error::Validation(format!("bad prime in '{spec}'")))?;
        let c = c
            .parse()
            .map_err(|_| Error::Validation(format!("bad shift in '{spec}'")))?;
        slots.push(Slot::scaled(p, c));
    }
    slots.extend(plain.iter().map(|&c| Slot::plain(c)));
    Ok(slots)
}

#[derive(Subcommand)]
enum LocalCmd {
    /// Shifted-cube residue classes mod p^gamma: JSON
    Tsets {
        #[arg(long)]
        c: u64,
        #[arg(long)]
        p: u64,
        #[arg(long)]
        gamma: u32,
        #[arg(long)]
        k: u32,
    },
    /// One local density factor: JSON
    Sigma {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        n: u64,
        /// Prime-scaled slots as p:c, comma separated
        #[arg(long, value_delimiter = ',')]
        scaled: Vec<String>,
        /// Plain shifts, comma separated
        #[arg(long, value_delimiter = ',')]
        shifts: Vec<u64>,
    },
    /// Truncated singular series with the per-prime factor table: JSON
    Series {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        n: u64,
        #[arg(long, value_delimiter = ',')]
        scaled: Vec<String>,
        #[arg(long, value_delimiter = ',')]
        shifts: Vec<u64>,
        #[arg(long, default_value_t = 50)]
        cutoff: u64,
    },
    /// Solubility of x1^e + ... + xv^e = n (mod m) for every n
    Soluble {
        #[arg(long)]
        exponent: u32,
        #[arg(long)]
        vars: u32,
        #[arg(long)]
        modulus: u64,
        #[arg(long)]
        unit_first: bool,
    },
    /// Truncated quartic companion series: JSON
    Quartic {
        #[arg(long)]
        m: u64,
        #[arg(long)]
        n: u64,
        #[arg(long, default_value_t = 100)]
        cutoff: u64,
    },
    /// Check the divisibility constraints on the slot shifts: JSON
    Conditions {
        #[arg(long)]
        k: u32,
        #[arg(long, value_delimiter = ',')]
        scaled: Vec<String>,
        #[arg(long, value_delimiter = ',')]
        shifts: Vec<u64>,
    },
}

#[derive(Subcommand)]
enum AnalyticCmd {
    /// Arc integral: CSV beta,abs
    V {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, value_enum, default_value_t = VModeArg::Plain)]
        mode: VModeArg,
        #[arg(long)]
        beta: f64,
        #[arg(long)]
        c: u64,
        #[arg(long)]
        p: Option<u64>,
    },
    /// Singular integral: CSV n,j,normalized
    J {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, value_delimiter = ',')]
        scaled: Vec<String>,
        #[arg(long, value_delimiter = ',')]
        shifts: Vec<u64>,
        /// log2 of the total grid resolution
        #[arg(long, default_value_t = 20)]
        bins_log2: u32,
    },
    /// Major-arc approximant of h or W at alpha near a/q
    Approx {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, value_enum)]
        mode: ApproxModeArg,
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        a: u64,
        #[arg(long)]
        q: u64,
    },
    /// Smooth-weighted torus sum: CSV beta,re,im,abs
    Wbeta {
        #[arg(long)]
        beta: f64,
        #[arg(long)]
        n: u64,
        #[arg(long)]
        p: f64,
        #[arg(long, default_value_t = 0.1)]
        eta: f64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum VModeArg {
    Plain,
    Scaled,
}

#[derive(Clone, Copy, ValueEnum)]
enum ApproxModeArg {
    V,
    W,
}

#[derive(Subcommand)]
enum SearchCmd {
    /// Minimal summand counts: CSV n,s_min (witness in JSON mode)
    Table {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        lo: u64,
        #[arg(long)]
        hi: u64,
        #[arg(long, default_value_t = 8)]
        s_cap: u32,
        #[arg(long)]
        cache: Option<PathBuf>,
        /// Cache limit to build when no file is given
        #[arg(long)]
        cache_limit: Option<u64>,
        #[arg(long)]
        json: bool,
    },
    /// The four-squares power-of-two obstruction: JSON report
    Lower {
        #[arg(long)]
        j: u32,
    },
    /// Quartic residue coverage mod 81: JSON report
    Coverage,
    /// Exact toy-scale representation count
    Repcount {
        #[arg(long, value_enum)]
        mode: RepModeArg,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        target: u128,
        /// Plain-slot value range lo:hi (biggest cube slice)
        #[arg(long)]
        a_range: String,
        /// Scaled-slot value range lo:hi
        #[arg(long, default_value = "0:0")]
        b_range: String,
        /// Smoothness bound for the pair values
        #[arg(long, default_value_t = 1)]
        pair_smoothness: u64,
        /// Pair value bound
        #[arg(long, default_value_t = 1)]
        pair_bound: u64,
        #[arg(long, value_delimiter = ',')]
        primes: Vec<u64>,
        #[arg(long)]
        s: u32,
        #[arg(long)]
        t: u32,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum RepModeArg {
    R,
    R4,
    K,
}

fn cache_path(cli_dir: &Option<PathBuf>, file: &Option<PathBuf>, limit: Option<u64>) -> PathBuf {
    if let Some(f) = file {
        return f.clone();
    }
    let dir = cli_dir
        .clone()
        .or_else(|| std::env::var_os("CUBEWARING_CACHE_DIR").map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("."));
    match limit {
        Some(l) => dir.join(format!("cube-cache-{l}.bin")),
        None => dir.join("cube-cache.bin"),
    }
}

fn parse_range(spec: &str) -> Result<(u64, u64), Error> {
    let (lo, hi) = spec
        .split_once(':')
        .ok_or_else(|| Error::Validation(format!("range '{spec}' wants lo:hi")))?;
    Ok((
        lo.parse()
            .map_err(|_| Error::Validation(format!("bad range start '{lo}'")))?,
        hi.parse()
            .map_err(|_| Error::Validation(format!("bad range end '{hi}'")))?,
    ))
}

fn run(cli: Cli) -> Result<i32, Error> {
    match cli.command {
        Command::Cubes { cmd } => match cmd {
            CubesCmd::Build { limit, counts, out } => {
                let cache = CubeCache::build(limit, counts)?;
                let path = cache_path(&cli.cache_dir, &out, Some(limit));
                write_cache(&cache, &path)?;
                println!("{}", path.display());
                Ok(0)
            }
            CubesCmd::Query { n, lo, hi, cache } => {
                let path = cache_path(&cli.cache_dir, &cache, None);
                let mapped = MappedCubeCache::open(&path)?;
                let (lo, hi) = match (n, lo, hi) {
                    (Some(n), None, None) => (n, n),
                    (None, Some(lo), Some(hi)) => (lo, hi),
                    _ => {
                        return Err(Error::Validation(
                            "give either --n or both --lo and --hi".into(),
                        ))
                    }
                };
                if hi > mapped.limit() || lo == 0 || lo > hi {
                    return Err(Error::Validation(format!(
                        "range [{lo}, {hi}] not within the cache limit {}",
                        mapped.limit()
                    )));
                }
                for n in lo..=hi {
                    let r3 = mapped.r3(n).map(|c| c.to_string()).unwrap_or_default();
                    println!("{n},{},{r3}", mapped.contains(n) as u8);
                }
                Ok(0)
            }
            CubesCmd::Residues {
                modulus,
                source,
                cache,
            } => {
                let set = match source {
                    SourceArg::Exact => c_residues(modulus, ResidueSource::Exact, None),
                    SourceArg::Cache => {
                        let path = cache_path(&cli.cache_dir, &cache, None);
                        let owned = MappedCubeCache::open(&path)?.to_cache();
                        c_residues(modulus, ResidueSource::Cache, Some(&owned))
                    }
                };
                let row: Vec<String> = set.iter().map(|r| r.to_string()).collect();
                println!("{}", row.join(","));
                Ok(0)
            }
        },
        Command::Smooth { cmd } => match cmd {
            SmoothCmd::List { bound, smoothness } => {
                for m in smooth::smooth_set(bound, smoothness).members {
                    println!("{m}");
                }
                Ok(0)
            }
            SmoothCmd::Rho { x } => {
                println!("{:.10}", smooth::dickman_rho(x));
                Ok(0)
            }
            SmoothCmd::Psi { bound, u } => {
                let r = smooth::psi_ratio_report(bound, u)?;
                println!(
                    "{},{},{},{},{:.8},{:.8}",
                    r.bound, r.u, r.smoothness, r.psi, r.ratio, r.rho
                );
                Ok(0)
            }
        },
        Command::Expsum { cmd } => match cmd {
            ExpsumCmd::Sk { q, a, k } => {
                let v = expsums::gauss_power_sum(q, a, k);
                println!("{:.12},{:.12},{:.12}", v.re, v.im, v.norm());
                Ok(0)
            }
            ExpsumCmd::Sy { q, a, b, c, k } => {
                let v = expsums::shifted_sum(q, a, b, c, k);
                println!("{:.12},{:.12},{:.12}", v.re, v.im, v.norm());
                Ok(0)
            }
            ExpsumCmd::W { q, k } => {
                println!("{:.12}", expsums::w_weight(&arith::factorize(q), k));
                Ok(0)
            }
            ExpsumCmd::Tau { q, k } => {
                println!("{:.12}", expsums::tau_weight(&arith::factorize(q), k));
                Ok(0)
            }
            ExpsumCmd::Eval { params, grid } => {
                let ps = params.build()?;
                let a_w = build_weights(&ps, WeightMode::A)?;
                let b_w = build_weights(&ps, WeightMode::B)?;
                let primes = arith::primes_in_range(ps.m / 2.0, ps.m);
                let h_gen = Generating::WeightedPowers {
                    weights: &a_w,
                    k: ps.k,
                };
                let w_gen = Generating::PrimeScaledPowers {
                    weights: &b_w,
                    primes: &primes,
                    k: ps.k,
                };
                let scheme = ArcScheme::Major {
                    height: ps.m.powi(ps.k as i32),
                    n: ps.n,
                };
                for j in 0..grid {
                    let alpha = j as f64 / grid as f64;
                    let h = expsums::eval_generating(&h_gen, alpha)?;
                    let w = expsums::eval_generating(&w_gen, alpha)?;
                    let class = match expsums::locate_arc(alpha, &scheme) {
                        ArcClass::Inside { a, q } => format!("{a}/{q}"),
                        ArcClass::Minor => "minor".into(),
                    };
                    println!("{alpha:.8},{:.6},{:.6},{class}", h.norm(), w.norm());
                }
                Ok(0)
            }
            ExpsumCmd::Count {
                q,
                k,
                p_limit,
                h13,
                primes,
            } => {
                let n_count = h13
                    .map(|h13| {
                        expsums::congruence_count(
                            &CongruenceMode::N {
                                h13,
                                primes: &primes,
                                k,
                            },
                            q,
                        )
                    })
                    .transpose()?;
                let r_count = p_limit
                    .map(|p| expsums::congruence_count(&CongruenceMode::R { p_limit: p, k }, q))
                    .transpose()?;
                match (n_count, r_count) {
                    (Some(n), Some(r)) => println!("{q},{n},{r}"),
                    (Some(n), None) => println!("{q},{n}"),
                    (None, Some(r)) => println!("{q},{r}"),
                    (None, None) => {
                        return Err(Error::Validation(
                            "request --p-limit and/or --h13".into(),
                        ))
                    }
                }
                Ok(0)
            }
            ExpsumCmd::Arc {
                params,
                alpha,
                scheme,
            } => {
                let ps = params.build()?;
                let scheme = match scheme {
                    SchemeArg::Major => ArcScheme::Major {
                        height: ps.m.powi(ps.k as i32),
                        n: ps.n,
                    },
                    SchemeArg::Majorp => ArcScheme::MajorPrime {
                        m: ps.m,
                        k: ps.k,
                        n: ps.n,
                    },
                    SchemeArg::Narrow => ArcScheme::Narrow {
                        r: ps.p.ln().powf(0.2),
                        n: ps.n,
                    },
                };
                match expsums::locate_arc(alpha.rem_euclid(1.0), &scheme) {
                    ArcClass::Inside { a, q } => println!("inside,{a},{q}"),
                    ArcClass::Minor => println!("minor"),
                }
                Ok(0)
            }
        },
        Command::Local { cmd } => match cmd {
            LocalCmd::Tsets { c, p, gamma, k } => {
                let t = local::t_sets(c, p, gamma, k);
                let doc = json!({
                    "schema": 1,
                    "c": c, "p": p, "gamma": gamma, "k": k,
                    "all": t.all.iter().collect::<Vec<_>>(),
                    "units": t.units.iter().collect::<Vec<_>>(),
                    "powers": t.powers.iter().collect::<Vec<_>>(),
                });
                println!("{doc}");
                Ok(0)
            }
            LocalCmd::Sigma {
                p,
                k,
                n,
                scaled,
                shifts,
            } => {
                let slots = parse_slots(&scaled, &shifts)?;
                let f = local::sigma_p(&slots, k, n, p, &DepthPolicy::default())?;
                let doc = json!({
                    "schema": 1,
                    "p": f.p, "h": f.depth, "sigma": f.value, "stabilized": f.stabilized,
                });
                println!("{doc}");
                Ok(0)
            }
            LocalCmd::Series {
                k,
                n,
                scaled,
                shifts,
                cutoff,
            } => {
                let slots = parse_slots(&scaled, &shifts)?;
                let s = local::singular_series(&slots, k, n, cutoff, &DepthPolicy::default())?;
                let factors: Vec<_> = s
                    .factors
                    .iter()
                    .map(|f| {
                        json!({"p": f.p, "h": f.depth, "sigma": f.value, "stabilized": f.stabilized})
                    })
                    .collect();
                let doc = json!({
                    "schema": 1,
                    "value": s.value,
                    "tail_exponent": s.tail_exponent,
                    "factors": factors,
                });
                println!("{doc}");
                Ok(0)
            }
            LocalCmd::Soluble {
                exponent,
                vars,
                modulus,
                unit_first,
            } => {
                let s = local::congruence_soluble(exponent, vars, modulus, unit_first)?;
                for n in 0..modulus {
                    println!("{n},{}", s.reachable.contains(n) as u8);
                }
                Ok(if s.all_soluble { 0 } else { 1 })
            }
            LocalCmd::Quartic { m, n, cutoff } => {
                let qs = local::quartic_series(m, n, cutoff)?;
                let doc = json!({
                    "schema": 1,
                    "m": m, "n": n, "cutoff": cutoff,
                    "value": qs.value, "positive": qs.positive,
                });
                println!("{doc}");
                Ok(0)
            }
            LocalCmd::Conditions { k, scaled, shifts } => {
                let slots = parse_slots(&scaled, &shifts)?;
                let report = local::check_local_conditions(&slots, k)?;
                let doc = json!({
                    "schema": 1,
                    "all_satisfied": report.all_satisfied,
                    "residue": report.conditions.residue,
                    "modulus": report.conditions.modulus,
                    "diagnostics": report.diagnostics.iter().map(|d| json!({
                        "slot": d.slot, "shift_mod": d.shift_mod, "satisfied": d.satisfied,
                    })).collect::<Vec<_>>(),
                });
                println!("{doc}");
                Ok(if report.all_satisfied { 0 } else { 1 })
            }
        },
        Command::Analytic { cmd } => match cmd {
            AnalyticCmd::V {
                params,
                mode,
                beta,
                c,
                p,
            } => {
                let ps = params.build()?;
                let mode = match mode {
                    VModeArg::Plain => IntegralMode::Plain,
                    VModeArg::Scaled => IntegralMode::Scaled,
                };
                let v = analytic::v_integral(mode, beta, c, p, &ps)?;
                if v.accuracy_warning {
                    eprintln!("warning: tolerance not reached at the panel floor");
                }
                println!("{beta:.6e},{:.12e}", v.value.norm());
                Ok(0)
            }
            AnalyticCmd::J {
                params,
                scaled,
                shifts,
                bins_log2,
            } => {
                let ps = params.build()?;
                let slots = parse_slots(&scaled, &shifts)?;
                let j = analytic::singular_integral(&slots, ps.n, &ps, 1usize << bins_log2)?;
                let t = slots.iter().filter(|s| s.prime_scale.is_some()).count() as i32;
                let s = slots.len() as i32 - t;
                let scale = ps.p.powi(s) * ps.h.powf(t as f64 / 3.0) / ps.n as f64;
                println!("{},{:.12e},{:.12e}", ps.n, j, j / scale);
                Ok(0)
            }
            AnalyticCmd::Approx {
                params,
                mode,
                alpha,
                a,
                q,
            } => {
                let ps = params.build()?;
                let primes = arith::primes_in_range(ps.m / 2.0, ps.m);
                let (mode, members) = match mode {
                    ApproxModeArg::V => (
                        ApproxMode::V,
                        smooth::smooth_set(ps.p.floor() as u64, ps.smoothness_bound()).members,
                    ),
                    ApproxModeArg::W => (
                        ApproxMode::W,
                        smooth::smooth_set(ps.h3.floor() as u64, ps.smoothness_bound()).members,
                    ),
                };
                let r = analytic::major_arc_approx(mode, alpha, a, q, &ps, &members, &primes)?;
                if r.q_shares_prime_factor {
                    eprintln!("note: q shares a factor with a slice prime");
                }
                println!("{:.12},{:.12},{:.12}", r.value.re, r.value.im, r.value.norm());
                Ok(0)
            }
            AnalyticCmd::Wbeta { beta, n, p, eta } => {
                let rho = smooth::RhoTable::build(
                    smooth::RHO_DEFAULT_MAX,
                    smooth::RHO_DEFAULT_STEP,
                );
                let v = analytic::w_beta(beta, n, p, eta, &rho)?;
                println!("{beta:.6e},{:.10},{:.10},{:.10}", v.re, v.im, v.norm());
                Ok(0)
            }
        },
        Command::Search { cmd } => match cmd {
            SearchCmd::Table {
                k,
                lo,
                hi,
                s_cap,
                cache,
                cache_limit,
                json: as_json,
            } => {
                let owned = match (&cache, cache_limit) {
                    (Some(_), _) | (None, None) => {
                        let path = cache_path(&cli.cache_dir, &cache, None);
                        MappedCubeCache::open(&path)?.to_cache()
                    }
                    (None, Some(limit)) => CubeCache::build(limit, false)?,
                };
                let table = search::MinimalSTable::build(k, hi, s_cap, &owned)?;
                if as_json {
                    let records = table.records(lo, hi);
                    let doc = json!({
                        "schema": 1,
                        "k": k, "s_cap": s_cap,
                        "onset": table.onset(lo, hi),
                        "records": records,
                    });
                    println!("{doc}");
                } else {
                    for n in lo..=hi {
                        match table.s_min(n) {
                            Some(s) => println!("{n},{s}"),
                            None => println!("{n},"),
                        }
                    }
                }
                Ok(0)
            }
            SearchCmd::Lower { j } => {
                let r = search::verify_squares_lower_bound(j)?;
                let doc = json!({"schema": 1, "report": r});
                println!("{doc}");
                Ok(if r.insoluble_in_cube_sums { 0 } else { 1 })
            }
            SearchCmd::Coverage => {
                let r = search::quartic_residue_coverage();
                let doc = json!({"schema": 1, "report": r});
                println!("{doc}");
                Ok(if r.covered { 0 } else { 1 })
            }
            SearchCmd::Repcount {
                mode,
                k,
                target,
                a_range,
                b_range,
                pair_smoothness,
                pair_bound,
                primes,
                s,
                t,
            } => {
                let pairs = smooth::smooth_set(pair_bound, pair_smoothness);
                let (a_lo, a_hi) = parse_range(&a_range)?;
                let (b_lo, b_hi) = parse_range(&b_range)?;
                let cfg = ToyConfig {
                    k,
                    a_weights: cubewaring::cubes::WeightMap::from_enumeration(a_lo, a_hi, &pairs),
                    b_weights: if b_hi >= b_lo && b_hi > 0 {
                        cubewaring::cubes::WeightMap::from_enumeration(b_lo, b_hi, &pairs)
                    } else {
                        cubewaring::cubes::WeightMap::default()
                    },
                    primes,
                    s,
                    t,
                };
                let mode = match mode {
                    RepModeArg::R => RepMode::R,
                    RepModeArg::R4 => RepMode::R4,
                    RepModeArg::K => RepMode::K,
                };
                println!("{target},{}", search::rep_count(mode, &cfg, target)?);
                Ok(0)
            }
        },
        Command::Verify => {
            let results = verify::run_all();
            let mut all = true;
            for r in &results {
                println!("{}", r.line());
                all &= r.passed;
            }
            println!(
                "{}: {}/{} criteria passed",
                if all { "OK" } else { "FAILED" },
                results.iter().filter(|r| r.passed).count(),
                results.len()
            );
            Ok(if all { 0 } else { 1 })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.threads > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(cli.threads)
            .build_global()
            .ok();
    }
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
