//! `starconf`: exact star-configuration containment on generic hypersurfaces.
//!
//! Subcommands: `classify`, `hilbert`, `certify`, `decompose`, `table`,
//! `selftest`. JSON is the machine interface; the human-readable output is
//! aligned plain text. All randomness is seeded and reproducible: the same
//! flags and seed give byte-identical output, regardless of `--jobs`.

use std::collections::BTreeMap;
use std::fs;
use std::io::Read;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use starconf::certify::{
    certify_tuple, experimental_certify, Certificate, CertVerdict, Strategy,
};
use starconf::classify::{classify, Classification, Verdict};
use starconf::field::{Field, FieldConfig, FieldKind, Fp, Rationals, DEFAULT_PRIME};
use starconf::membership::decompose;
use starconf::poly::{parse_poly, random_form, MultiPoly};
use starconf::star::{expected_hf, hilbert_function, random_general_forms, star_generators};
use starconf::Error;

#[derive(Parser)]
#[command(
    name = "starconf",
    version,
    about = "Decide, certify, and construct star-configuration containments on generic hypersurfaces",
    propagate_version = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify a tuple (n, l, r, d)
    Classify(ClassifyArgs),
    /// Hilbert function of star-configuration points against the closed form
    Hilbert(HilbertArgs),
    /// Produce a full-rank certificate for the tuple (n, n+2, 3, d)
    Certify(CertifyArgs),
    /// Decompose a form as a sum of star products
    Decompose(DecomposeArgs),
    /// Emit the classification grid, optionally with certificates attached
    Table(TableArgs),
    /// Run the built-in invariant suites
    Selftest(SelftestArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum FieldArg {
    /// Prime field F_p (fast; sound for generic statements)
    Prime,
    /// Exact rationals (slow; no modular reduction anywhere)
    Rational,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum StrategyArg {
    /// Rank of the degree-d slice of the tangent-space ideal
    Macaulay,
    /// Rank of the structured evaluation matrix at the configuration points
    Evaluation,
}

impl From<StrategyArg> for Strategy {
    fn from(s: StrategyArg) -> Self {
        match s {
            StrategyArg::Macaulay => Strategy::MacaulayRank,
            StrategyArg::Evaluation => Strategy::EvaluationMatrix,
        }
    }
}

#[derive(Args, Clone)]
struct FieldOpts {
    /// Coefficient field
    #[arg(long, value_enum, default_value_t = FieldArg::Prime)]
    field: FieldArg,

    /// Modulus for the prime field
    #[arg(long, default_value_t = DEFAULT_PRIME, env = "STAR_PRIME")]
    prime: u64,
}

impl FieldOpts {
    fn config(&self) -> FieldConfig {
        match self.field {
            FieldArg::Prime => FieldConfig::prime_field(self.prime),
            FieldArg::Rational => FieldConfig::rational(),
        }
    }
}

#[derive(Args)]
struct ClassifyArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    l: usize,
    #[arg(long)]
    r: usize,
    #[arg(long)]
    d: usize,
    /// Emit the classification record as JSON
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct HilbertArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    l: usize,
    /// Largest degree to tabulate (default: l)
    #[arg(long)]
    tmax: Option<usize>,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[command(flatten)]
    field: FieldOpts,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct CertifyArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    d: usize,
    /// Probe an arbitrary l (with --r): experimental mode, random multipliers
    #[arg(long)]
    l: Option<usize>,
    /// Probe an arbitrary r (with --l): experimental mode, random multipliers
    #[arg(long)]
    r: Option<usize>,
    #[arg(long, value_enum, default_value_t = StrategyArg::Macaulay)]
    strategy: StrategyArg,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Redraws allowed after a rank shortfall
    #[arg(long, default_value_t = 3)]
    retries: u32,
    #[command(flatten)]
    field: FieldOpts,
    /// Write the certificate JSON to this file
    #[arg(long)]
    out: Option<String>,
    /// Print the certificate JSON instead of the summary
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct DecomposeArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    r: usize,
    /// File with one linear form per line (text grammar, variables x0..xn)
    #[arg(long, requires = "target", conflicts_with = "random")]
    forms: Option<String>,
    /// File with the target form F
    #[arg(long, requires = "forms")]
    target: Option<String>,
    /// Build a random instance F = sum L_sigma M_sigma and round-trip it
    #[arg(long, requires = "d")]
    random: bool,
    /// Degree of the random target
    #[arg(long)]
    d: Option<usize>,
    /// Number of random forms (default: n + 2)
    #[arg(long)]
    l: Option<usize>,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[command(flatten)]
    field: FieldOpts,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct TableArgs {
    /// Largest n; the grid covers 1 <= n <= nmax, 1 <= l <= n+6, 1 <= r <= l
    #[arg(long)]
    nmax: usize,
    /// Largest d
    #[arg(long)]
    dmax: usize,
    /// Attach certificates to the certifiable positive rows (l = n+2, r = 3)
    #[arg(long)]
    certify: bool,
    /// Worker threads for certification
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 3)]
    retries: u32,
    #[command(flatten)]
    field: FieldOpts,
    #[arg(long, value_enum, default_value_t = TableFormat::Json)]
    format: TableFormat,
    #[arg(long)]
    out: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum TableFormat {
    Json,
    Csv,
}

#[derive(Args)]
struct SelftestArgs {
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[command(flatten)]
    field: FieldOpts,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Classify(args) => cmd_classify(args),
        Command::Hilbert(args) => cmd_hilbert(args),
        Command::Certify(args) => cmd_certify(args),
        Command::Decompose(args) => cmd_decompose(args),
        Command::Table(args) => cmd_table(args),
        Command::Selftest(args) => cmd_selftest(args),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}

fn cmd_classify(args: ClassifyArgs) -> anyhow::Result<u8> {
    if args.n == 0 || args.l == 0 || args.r == 0 || args.d == 0 {
        bail!("all of --n --l --r --d must be positive");
    }
    let c = classify(args.n, args.l, args.r, args.d);
    if args.json {
        println!("{}", serde_json::to_string_pretty(&c)?);
    } else {
        print_classification(&c);
    }
    Ok(0)
}

fn print_classification(c: &Classification) {
    println!("tuple   {}", c.tuple);
    println!("verdict {}", c.verdict);
    println!("case    {}", c.case);
    if let Some(bound) = c.bound {
        println!("bound   {bound}  (l*n - C(l, n))");
    }
    if c.verdict == Verdict::GenericNoLargeD {
        println!("note    negative for all large d; open at this d");
    }
}

fn cmd_hilbert(args: HilbertArgs) -> anyhow::Result<u8> {
    if args.n == 0 || args.l < args.n {
        bail!("need l >= n >= 1 for the point case");
    }
    let r = args.l - args.n + 1;
    let tmax = args.tmax.unwrap_or(args.l);
    let config = args.field.config();
    let rows = match config.kind {
        FieldKind::PrimeField => {
            hilbert_rows(&Fp::new(config.prime)?, args.n, args.l, r, tmax, args.seed)?
        }
        FieldKind::Rational => hilbert_rows(&Rationals, args.n, args.l, r, tmax, args.seed)?,
    };
    let all_match = rows.iter().all(|row| row.matches);
    if args.json {
        println!("{}", serde_json::to_string_pretty(&rows)?);
    } else {
        println!("star configuration of type (l, r) = ({}, {r}) in P^{}", args.l, args.n);
        println!("{:>3}  {:>8}  {:>8}  match", "t", "HF", "expected");
        for row in &rows {
            println!(
                "{:>3}  {:>8}  {:>8}  {}",
                row.t,
                row.hf,
                row.expected,
                if row.matches { "yes" } else { "NO" }
            );
        }
    }
    Ok(if all_match { 0 } else { 1 })
}

#[derive(Serialize)]
struct HilbertRow {
    t: usize,
    hf: u64,
    expected: u64,
    matches: bool,
}

fn hilbert_rows<F: Field>(
    field: &F,
    n: usize,
    l: usize,
    r: usize,
    tmax: usize,
    seed: u64,
) -> anyhow::Result<Vec<HilbertRow>> {
    let mut rng = starconf::field::seeded_rng(seed);
    let forms = random_general_forms(field, n, l, &mut rng)?;
    let gens = star_generators(&forms, r)?;
    Ok((0..=tmax)
        .map(|t| {
            let hf = hilbert_function(field, n + 1, &gens, t) as u64;
            let expected = expected_hf(n, l, t);
            HilbertRow { t, hf, expected, matches: hf == expected }
        })
        .collect())
}

fn cmd_certify(args: CertifyArgs) -> anyhow::Result<u8> {
    let config = args.field.config();
    let cert = match (args.l, args.r) {
        (None, None) => certify_tuple(
            &config,
            args.n,
            args.d,
            args.strategy.into(),
            args.seed,
            args.retries,
        )?,
        (l, r) => {
            let l = l.unwrap_or(args.n + 2);
            let r = r.unwrap_or(3);
            experimental_certify(&config, args.n, l, r, args.d, args.seed, args.retries)?
        }
    };
    let json = serde_json::to_string_pretty(&cert)?;
    if let Some(path) = &args.out {
        fs::write(path, format!("{json}\n")).with_context(|| format!("writing {path}"))?;
    }
    if args.json {
        println!("{json}");
    } else {
        println!("tuple    {}", cert.tuple);
        println!("strategy {:?}", cert.strategy);
        println!("verdict  {:?}", cert.verdict);
        println!("rank     {}/{}", cert.achieved_rank, cert.target_rank);
        println!("retries  {}", cert.retries_used);
        if let Some(path) = &args.out {
            println!("written  {path}");
        }
    }
    Ok(match cert.verdict {
        CertVerdict::Certified => 0,
        CertVerdict::Inconclusive => 1,
    })
}

fn cmd_decompose(args: DecomposeArgs) -> anyhow::Result<u8> {
    if args.n == 0 || args.r == 0 {
        bail!("--n and --r must be positive");
    }
    let config = args.field.config();
    match config.kind {
        FieldKind::PrimeField => decompose_in(&Fp::new(config.prime)?, &args),
        FieldKind::Rational => decompose_in(&Rationals, &args),
    }
}

fn decompose_in<F: Field>(field: &F, args: &DecomposeArgs) -> anyhow::Result<u8> {
    let nvars = args.n + 1;
    let (forms, target) = if args.random {
        let d = args.d.expect("clap enforces --d with --random");
        if args.r > d {
            bail!("degree obstruction: r = {} exceeds d = {d}", args.r);
        }
        let l = args.l.unwrap_or(args.n + 2);
        let mut rng = starconf::field::seeded_rng(args.seed);
        let forms = random_general_forms(field, args.n, l, &mut rng)?;
        let mut target = MultiPoly::zero(field.clone(), nvars, d);
        for sigma in subsets(l, args.r) {
            let mut prod = random_form(field, nvars, d - args.r, &mut rng);
            for &i in &sigma {
                prod = prod.mul(&forms.forms()[i]);
            }
            target = target.add(&prod);
        }
        (forms, target)
    } else {
        let forms_path = args
            .forms
            .as_ref()
            .ok_or_else(|| anyhow!("either --random or --forms/--target is required"))?;
        let target_path = args.target.as_ref().expect("clap enforces --target with --forms");
        let forms_text = read_text(forms_path)?;
        let lines: Vec<&str> =
            forms_text.lines().map(str::trim).filter(|s| !s.is_empty()).collect();
        let forms: Vec<MultiPoly<F>> = lines
            .iter()
            .map(|line| parse_poly(field, nvars, line))
            .collect::<Result<_, _>>()?;
        let forms = starconf::star::LinearFormSet::new(field.clone(), args.n, forms)?;
        let target_text = read_text(target_path)?;
        let line = target_text
            .lines()
            .map(str::trim)
            .find(|s| !s.is_empty())
            .ok_or_else(|| anyhow!("{target_path} contains no polynomial"))?;
        let target = parse_poly(field, nvars, line)?;
        (forms, target)
    };

    match decompose(&target, &forms, args.r) {
        Ok(dec) => {
            let rebuilt = dec.reconstruct(&forms, target.degree())?;
            let verified = rebuilt == target;
            if args.json {
                let multipliers: BTreeMap<String, String> = dec
                    .multipliers
                    .iter()
                    .map(|(sigma, m)| (label(sigma), m.to_string()))
                    .collect();
                #[derive(Serialize)]
                struct Output {
                    r: usize,
                    multipliers: BTreeMap<String, String>,
                    verified: bool,
                }
                let out = Output { r: dec.r, multipliers, verified };
                println!("{}", serde_json::to_string_pretty(&out)?);
            } else {
                for (sigma, m) in &dec.multipliers {
                    println!("M[{}] = {}", label(sigma), m);
                }
                println!("reconstruction {}", if verified { "verified" } else { "FAILED" });
            }
            if !verified {
                bail!("reconstruction mismatch (internal error)");
            }
            Ok(0)
        }
        Err(Error::NotDecomposable) => {
            println!("not decomposable with these forms");
            Ok(1)
        }
        Err(e) => Err(e.into()),
    }
}

fn label(sigma: &[usize]) -> String {
    sigma.iter().map(|i| (i + 1).to_string()).collect::<Vec<_>>().join(",")
}

fn subsets(l: usize, r: usize) -> Vec<Vec<usize>> {
    // Lexicographic subset enumeration, matching the library's layout.
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: usize, l: usize, r: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == r {
            out.push(cur.clone());
            return;
        }
        for i in start..l {
            cur.push(i);
            rec(i + 1, l, r, cur, out);
            cur.pop();
        }
    }
    rec(0, l, r, &mut cur, &mut out);
    out
}

/// One row of the classification table, optionally with a certificate.
#[derive(Serialize)]
struct TableEntry {
    #[serde(flatten)]
    classification: Classification,
    #[serde(skip_serializing_if = "Option::is_none")]
    certificate: Option<Certificate>,
}

fn cmd_table(args: TableArgs) -> anyhow::Result<u8> {
    if args.nmax == 0 || args.dmax == 0 {
        bail!("--nmax and --dmax must be positive");
    }
    let config = args.field.config();
    config.validate()?;

    let mut grid: Vec<Classification> = Vec::new();
    for n in 1..=args.nmax {
        for l in 1..=n + 6 {
            for r in 1..=l {
                for d in 1..=args.dmax {
                    grid.push(classify(n, l, r, d));
                }
            }
        }
    }

    let entries: Vec<TableEntry> = if args.certify {
        let jobs = args.jobs.max(1);
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .context("building worker pool")?;
        // Certificates attach to the certifiable positive rows. Per-tuple
        // seeds derive from the base seed and the tuple, so the outcome is
        // independent of scheduling.
        pool.install(|| {
            use rayon::prelude::*;
            grid.into_par_iter()
                .map(|c| {
                    let t = c.tuple;
                    let certificate = if c.verdict == Verdict::GenericYes
                        && t.n >= 2
                        && t.l == t.n + 2
                        && t.r == 3
                        && t.d >= 3
                    {
                        let seed = tuple_seed(args.seed, t.n, t.l, t.r, t.d);
                        Some(certify_tuple(
                            &config,
                            t.n,
                            t.d,
                            Strategy::MacaulayRank,
                            seed,
                            args.retries,
                        ))
                    } else {
                        None
                    };
                    certificate
                        .transpose()
                        .map(|certificate| TableEntry { classification: c, certificate })
                })
                .collect::<Result<Vec<_>, _>>()
        })?
    } else {
        grid.into_iter()
            .map(|c| TableEntry { classification: c, certificate: None })
            .collect()
    };

    let rendered = match args.format {
        TableFormat::Json => {
            let mut s = serde_json::to_string_pretty(&entries)?;
            s.push('\n');
            s
        }
        TableFormat::Csv => {
            let mut s = String::from("n,l,r,d,verdict,case,bound,certified\n");
            for e in &entries {
                let c = &e.classification;
                let bound = c.bound.map(|b| b.to_string()).unwrap_or_default();
                let certified = match &e.certificate {
                    None => "",
                    Some(cert) if cert.certified() => "yes",
                    Some(_) => "no",
                };
                s.push_str(&format!(
                    "{},{},{},{},{},{},{},{}\n",
                    c.tuple.n, c.tuple.l, c.tuple.r, c.tuple.d, c.verdict, c.case, bound, certified
                ));
            }
            s
        }
    };
    match &args.out {
        Some(path) => fs::write(path, rendered).with_context(|| format!("writing {path}"))?,
        None => print!("{rendered}"),
    }

    // A certificate contradicting the classification would be a soundness
    // bug; fail loudly rather than emit it silently.
    for e in &entries {
        if let Some(cert) = &e.certificate {
            if cert.certified()
                && matches!(e.classification.verdict, Verdict::GenericNo | Verdict::Infeasible)
            {
                bail!("certificate contradicts classification for {}", e.classification.tuple);
            }
        }
    }
    Ok(0)
}

/// splitmix64-style mixing of the base seed and the tuple, so parallel runs
/// and reordered grids cannot perturb per-tuple randomness.
fn tuple_seed(base: u64, n: usize, l: usize, r: usize, d: usize) -> u64 {
    fn mix(mut x: u64) -> u64 {
        x = x.wrapping_add(0x9E3779B97F4A7C15);
        let mut z = x;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
        z ^ (z >> 31)
    }
    let mut acc = mix(base);
    for v in [n, l, r, d] {
        acc = mix(acc ^ v as u64);
    }
    acc
}

fn cmd_selftest(args: SelftestArgs) -> anyhow::Result<u8> {
    let config = args.field.config();
    let results = starconf::selftest::run(&config, args.seed)?;
    let mut passed = 0usize;
    let mut failed = 0usize;
    for r in &results {
        passed += r.passed;
        failed += r.failed;
        if r.ok() {
            println!("{:<24} PASS  ({} checks)", r.name, r.passed);
        } else {
            println!("{:<24} FAIL  ({} passed, {} failed)  {}", r.name, r.passed, r.failed, r.detail);
        }
    }
    println!("total: {passed} passed, {failed} failed");
    Ok(if failed == 0 { 0 } else { 1 })
}

fn read_text(path: &str) -> anyhow::Result<String> {
    let mut buf = String::new();
    fs::File::open(path)
        .with_context(|| format!("opening {path}"))?
        .read_to_string(&mut buf)
        .with_context(|| format!("reading {path}"))?;
    Ok(buf)
}
