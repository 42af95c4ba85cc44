use std::fs;
use std::io::{self, Read};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use num_rational::BigRational;

use triset::bounds::{self, BoundExpr, ChainStep, Settings, Verdict};
use triset::decompose::{decompose, degree_audit, DecompositionTask, Limits};
use triset::groups::{self, GroupCatalogEntry, OneParameterUnipotent, RationalHomomorphism, SubgroupPresentation};
use triset::poly::{parse_polynomial, parse_polynomial_file, prem, Polynomial, VariableOrder};
use triset::triangular::TriangularRepresentation;
use triset::Error;

#[derive(Parser)]
#[command(
    name = "triset",
    version,
    about = "Triangular decompositions, algebraic subgroups and degree bounds"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decompose a polynomial system into triangular sets.
    Decompose(DecomposeArgs),
    /// Pseudo-remainder of a polynomial modulo a triangular set.
    Prem(PremArgs),
    /// Restrict a representation to the first r variables.
    Eliminate(EliminateArgs),
    /// Representation of the product of two ideals.
    Product(ProductArgs),
    /// Preimage of a subgroup under a rational homomorphism.
    Preimage(PreimageArgs),
    /// Equations of the group generated by unipotent one-parameter subgroups.
    Unipotent(UnipotentArgs),
    /// Proto-Galois check for catalog groups.
    ProtoCheck(ProtoArgs),
    /// Degree bound formulas and their verification.
    Bounds(BoundsArgs),
}

#[derive(Args)]
struct DecomposeArgs {
    /// Input file in the polynomial text format; `-` or omitted reads stdin.
    input: Option<String>,
    /// Variable order override, ascending, comma separated.
    #[arg(long)]
    vars: Option<String>,
    /// Audit output degrees against the bound for input degree d.
    #[arg(long, value_name = "d")]
    audit: Option<u32>,
    #[arg(long, default_value_t = Limits::default().max_steps)]
    max_steps: u64,
    #[arg(long, default_value_t = Limits::default().max_degree)]
    max_degree: u32,
}

#[derive(Args)]
struct PremArgs {
    /// Dividend.
    #[arg(long, allow_hyphen_values = true)]
    f: String,
    /// Triangular set, members separated by `;`.
    #[arg(long)]
    set: String,
    /// Variable order, ascending; inferred alphabetically when omitted.
    #[arg(long)]
    vars: Option<String>,
}

#[derive(Args)]
struct EliminateArgs {
    /// Representation file; with --system, a polynomial system to decompose first.
    input: Option<String>,
    /// Number of leading variables to keep.
    #[arg(long, short = 'r')]
    keep: usize,
    #[arg(long)]
    system: bool,
}

#[derive(Args)]
struct ProductArgs {
    first: String,
    second: String,
}

#[derive(Args)]
struct PreimageArgs {
    /// Source group: a catalog name such as GL(2), or a polynomial file in x11, x12, ...
    #[arg(long)]
    source: String,
    /// Target group, same forms as --source.
    #[arg(long)]
    target: String,
    /// `det`, `identity`, or a file with l*l numerator lines, `---`, and a denominator line.
    #[arg(long, default_value = "det")]
    map: String,
    /// Check the result on this many random matrices.
    #[arg(long, default_value_t = 0)]
    samples: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
}

#[derive(Args)]
struct UnipotentArgs {
    /// Nilpotent generators, row-major in brackets, e.g. "[[0,1],[0,0]]".
    #[arg(required = true)]
    generators: Vec<String>,
    #[arg(long, default_value_t = 0)]
    samples: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
}

#[derive(Args)]
struct ProtoArgs {
    candidate: String,
    galois: String,
}

#[derive(Args)]
struct BoundsArgs {
    #[arg(long)]
    n: u32,
    /// Compare against the earlier tower bounds.
    #[arg(long)]
    compare_feng: bool,
    /// Check every step of the inequality chain.
    #[arg(long)]
    verify_chain: bool,
    /// Largest decimal digit count evaluated exactly.
    #[arg(long, env = "TRISET_DIGIT_LIMIT", default_value_t = bounds::DEFAULT_DIGIT_LIMIT)]
    digit_limit: u64,
}

/// Failure classes mapped to exit codes.
enum Failure {
    /// A verification ran and reported a negative verdict.
    Verification,
    Usage(String),
    Runtime(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse { .. } | Error::Structure(_) | Error::Precondition(_) | Error::UnknownPair(_) => {
                Failure::Usage(e.to_string())
            }
            _ => Failure::Runtime(e.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match cli.command {
        Command::Decompose(a) => run_decompose(a),
        Command::Prem(a) => run_prem(a),
        Command::Eliminate(a) => run_eliminate(a),
        Command::Product(a) => run_product(a),
        Command::Preimage(a) => run_preimage(a),
        Command::Unipotent(a) => run_unipotent(a),
        Command::ProtoCheck(a) => run_proto(a),
        Command::Bounds(a) => run_bounds(a),
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification) => ExitCode::from(1),
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
    }
}

fn read_input(path: Option<&str>) -> io::Result<String> {
    match path {
        None | Some("-") => {
            let mut s = String::new();
            io::stdin().read_to_string(&mut s)?;
            Ok(s)
        }
        Some(p) => fs::read_to_string(p).map_err(|e| io::Error::new(e.kind(), format!("{p}: {e}"))),
    }
}

fn parse_vars(s: &str) -> Result<Arc<VariableOrder>, Failure> {
    let names: Vec<&str> = s.split(',').map(str::trim).filter(|v| !v.is_empty()).collect();
    Ok(VariableOrder::new(&names)?)
}

fn is_blank(text: &str) -> bool {
    text.lines()
        .all(|l| l.split('#').next().unwrap_or("").trim().is_empty())
}

fn run_decompose(a: DecomposeArgs) -> Outcome {
    let text = read_input(a.input.as_deref())?;
    let order = a.vars.as_deref().map(parse_vars).transpose()?;
    let (order, gens, ineqs) = if is_blank(&text) {
        let order = match order {
            Some(o) => o,
            None => VariableOrder::new::<&str>(&[])?,
        };
        (order, Vec::new(), Vec::new())
    } else {
        let file = parse_polynomial_file(&text, order.as_ref())?;
        let gens: Vec<Polynomial> = file.equations().into_iter().filter(|p| !p.is_zero()).collect();
        (file.order.clone(), gens, file.inequations())
    };
    let limits = Limits {
        max_steps: a.max_steps,
        max_degree: a.max_degree,
    };
    let task = DecompositionTask::with_inequations(&order, gens, ineqs)?.limits(limits)?;
    let rep = decompose(&task)?;
    print!("{}", rep.to_text());
    if let Some(d) = a.audit {
        let audit = degree_audit(&rep, order.len() as u32, d)?;
        println!();
        println!("{audit}");
        if !audit.within {
            return Err(Failure::Verification);
        }
    }
    Ok(())
}

/// Identifiers in order of first appearance, sorted.
fn infer_vars(texts: &[&str]) -> Vec<String> {
    let mut out: Vec<String> = Vec::new();
    for t in texts {
        let mut cur = String::new();
        for ch in t.chars().chain(std::iter::once(' ')) {
            if ch.is_ascii_alphanumeric() || ch == '_' {
                cur.push(ch);
            } else {
                if cur.chars().next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_') && !out.contains(&cur) {
                    out.push(cur.clone());
                }
                cur.clear();
            }
        }
    }
    out.sort();
    out
}

fn run_prem(a: PremArgs) -> Outcome {
    let members: Vec<&str> = a.set.split(';').map(str::trim).filter(|s| !s.is_empty()).collect();
    let order = match &a.vars {
        Some(v) => parse_vars(v)?,
        None => {
            let mut all = vec![a.f.as_str()];
            all.extend(&members);
            VariableOrder::new(&infer_vars(&all))?
        }
    };
    let f = parse_polynomial(&a.f, &order)?;
    let set = members
        .iter()
        .map(|m| parse_polynomial(m, &order))
        .collect::<triset::Result<Vec<_>>>()?;
    println!("{}", prem(&f, &set)?);
    Ok(())
}

fn read_representation(path: Option<&str>) -> Result<TriangularRepresentation, Failure> {
    Ok(TriangularRepresentation::from_text(&read_input(path)?)?)
}

fn run_eliminate(a: EliminateArgs) -> Outcome {
    let rep = if a.system {
        let file = parse_polynomial_file(&read_input(a.input.as_deref())?, None)?;
        let task = DecompositionTask::with_inequations(&file.order, file.equations(), file.inequations())?;
        decompose(&task)?
    } else {
        read_representation(a.input.as_deref())?
    };
    print!("{}", rep.restrict(a.keep)?.to_text());
    Ok(())
}

fn run_product(a: ProductArgs) -> Outcome {
    let x = read_representation(Some(&a.first))?;
    let y = read_representation(Some(&a.second))?;
    print!("{}", x.product(&y)?.to_text());
    Ok(())
}

fn group_arg(s: &str) -> Result<SubgroupPresentation, Failure> {
    if let Ok(g) = s.parse::<GroupCatalogEntry>() {
        return Ok(g.presentation()?);
    }
    let text = fs::read_to_string(s)
        .map_err(|e| Failure::Usage(format!("`{s}` is neither a catalog group nor a readable file: {e}")))?;
    let file = parse_polynomial_file(&text, None)?;
    let k = file.order.len();
    let n = (1..=k)
        .find(|n| n * n == k)
        .ok_or_else(|| Failure::Usage(format!("{s}: {k} variables is not a square")))?;
    Ok(SubgroupPresentation::new(n, file.equations())?)
}

fn map_arg(s: &str, n: usize, l: usize) -> Result<RationalHomomorphism, Failure> {
    match s {
        "det" => Ok(RationalHomomorphism::determinant(n)?),
        "identity" => Ok(RationalHomomorphism::identity(n)?),
        path => {
            let file = parse_polynomial_file(&fs::read_to_string(path)?, None)?;
            let [num, den] = file.sections.as_slice() else {
                return Err(Failure::Usage(format!(
                    "{path}: expected numerators, `---`, denominator"
                )));
            };
            let [q] = den.equations.as_slice() else {
                return Err(Failure::Usage(format!("{path}: expected exactly one denominator")));
            };
            let _ = l;
            Ok(RationalHomomorphism::new(n, l, num.equations.clone(), q.clone())?)
        }
    }
}

fn report_samples(r: groups::SampleReport) -> Outcome {
    println!();
    println!("{:<12} {}", "samples", r.samples);
    println!("{:<12} {}", "inside", r.inside);
    println!("{:<12} {}", "mismatches", r.mismatches);
    if r.mismatches > 0 {
        return Err(Failure::Verification);
    }
    Ok(())
}

fn run_preimage(a: PreimageArgs) -> Outcome {
    let h = group_arg(&a.source)?;
    let hp = group_arg(&a.target)?;
    let tau = map_arg(&a.map, h.n(), hp.n())?;
    let rep = groups::preimage_intersection(&h, &hp, &tau)?;
    print!("{}", rep.to_text());
    if a.samples > 0 {
        report_samples(groups::check_preimage_samples(&h, &hp, &tau, &rep, a.samples, a.seed)?)?;
    }
    Ok(())
}

fn parse_matrix(s: &str) -> Result<(usize, Vec<BigRational>), Failure> {
    let bad = || Failure::Usage(format!("cannot read matrix `{s}`; expected e.g. [[0,1],[0,0]]"));
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let inner = t.strip_prefix('[').and_then(|x| x.strip_suffix(']')).ok_or_else(bad)?;
    let mut rows = Vec::new();
    for row in inner.split("],") {
        let row = row.trim_start_matches('[').trim_end_matches(']');
        let vals = row
            .split(',')
            .map(|v| v.parse::<BigRational>().map_err(|_| bad()))
            .collect::<Result<Vec<_>, _>>()?;
        rows.push(vals);
    }
    let n = rows.len();
    if rows.iter().any(|r| r.len() != n) {
        return Err(bad());
    }
    Ok((n, rows.into_iter().flatten().collect()))
}

fn run_unipotent(a: UnipotentArgs) -> Outcome {
    let gens = a
        .generators
        .iter()
        .map(|g| {
            let (n, m) = parse_matrix(g)?;
            OneParameterUnipotent::new(n, m).map_err(|e| Failure::Usage(e.to_string()))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let rep = groups::unipotent_group_equations(&gens)?;
    print!("{}", rep.to_text());
    if a.samples > 0 {
        report_samples(groups::check_unipotent_samples(&gens, &rep, a.samples, a.seed)?)?;
    }
    Ok(())
}

fn run_proto(a: ProtoArgs) -> Outcome {
    let h: GroupCatalogEntry = a.candidate.parse()?;
    let g: GroupCatalogEntry = a.galois.parse()?;
    let v = groups::proto_check(h, g)?;
    println!("candidate  {h}");
    println!("galois     {g}");
    for line in &v.trace {
        println!("  {line}");
    }
    match v.failed {
        None => {
            println!("verdict    pass");
            Ok(())
        }
        Some(c) => {
            println!("verdict    fail at clause {c}");
            Err(Failure::Verification)
        }
    }
}

const EXPR_WIDTH: usize = 56;

fn shorten(s: &str, w: usize) -> String {
    if s.chars().count() <= w {
        s.to_string()
    } else {
        let head: String = s.chars().take(w - 3).collect();
        format!("{head}...")
    }
}

/// Exact digits, or the tower form `2^2^...^x` from the log profile.
fn size_of(e: &BoundExpr, settings: &Settings) -> String {
    if let Ok(Some(v)) = bounds::eval_exact(e, settings.digit_limit) {
        let digits = bounds::digit_count(v.magnitude());
        return if digits <= 20 {
            v.to_string()
        } else {
            format!("{digits} digits")
        };
    }
    match bounds::log_profile(e) {
        Ok(p) => {
            let hi = p.hi.numer().to_string().parse::<f64>().unwrap_or(f64::NAN)
                / p.hi.denom().to_string().parse::<f64>().unwrap_or(f64::NAN);
            let top = if hi < 1e6 {
                format!("{hi:.2}")
            } else {
                format!("{hi:.3e}")
            };
            format!("<= {}{top}", "2^".repeat(p.depth as usize))
        }
        Err(_) => "?".into(),
    }
}

fn print_steps(title: &str, steps: &[ChainStep]) -> usize {
    println!("{title}");
    println!("{:-<100}", "");
    let mut failed = 0;
    for (i, s) in steps.iter().enumerate() {
        if !matches!(s.verdict, Verdict::Holds) {
            failed += 1;
        }
        println!("{:<4} {:<80} {}", i + 1, shorten(&s.label, 80), s.verdict);
    }
    println!();
    failed
}

fn run_bounds(a: BoundsArgs) -> Outcome {
    let settings = Settings {
        digit_limit: a.digit_limit,
        ..Settings::default()
    };
    let n = a.n;
    let rows: Vec<(&str, BoundExpr)> = vec![
        ("D", bounds::bound_D(n)?),
        ("d1", bounds::bound_d1(n)?),
        ("d2", bounds::bound_d2(n)?),
        ("d3", bounds::bound_d3(n)?),
        ("dbar", bounds::bound_dbar(n)?),
        ("J(n)", bounds::schur_j(n)),
    ];
    println!("bounds for n = {n}");
    println!("{:<6} {:<28} expression", "symbol", "size");
    println!("{:-<100}", "");
    for (sym, e) in &rows {
        println!(
            "{:<6} {:<28} {}",
            sym,
            size_of(e, &settings),
            shorten(&e.to_string(), EXPR_WIDTH)
        );
    }
    println!();
    let mut failed = 0;
    if a.verify_chain {
        failed += print_steps("inequality chain", &bounds::verify_chain(n, &settings)?);
    }
    if a.compare_feng {
        let steps = if n == 2 {
            bounds::section4_report(&settings)?
        } else {
            bounds::feng_comparison(n, &settings)?
        };
        failed += print_steps("comparison with the earlier tower bounds", &steps);
    }
    if a.verify_chain || a.compare_feng {
        if failed == 0 {
            println!("all verdicts hold");
        } else {
            println!("{failed} verdict(s) did not hold");
            return Err(Failure::Verification);
        }
    }
    Ok(())
}
