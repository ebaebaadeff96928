use std::fmt::Write as _;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde_json::{json, Value};

use waring_core::apolarity::{sylvester_decompose, two_squares};
use waring_core::certificate::Certificate;
use waring_core::decomposition::{Decomposition, PowerSum};
use waring_core::fiber::{krank_lower_probe, krank_upper, DEFAULT_BUDGET};
use waring_core::parse::parse_binary;
use waring_core::poly::{default_names, BinaryForm, MultiForm};
use waring_core::reproduce::{paper_examples, run_case};
use waring_core::scalar::{scalar_string, Field, GaussRational};
use waring_core::series::{froeberg_series, generic_k_rank, secant_codim, si_thresholds, RankStatus};
use waring_core::sextic::{three_cubes, CubesCertificate};
use waring_core::structured::{canonical_form, monomial_k_factor, monomial_krank_upper, CanonicalVariant};
use waring_core::{Error, Tolerances};

const FALLBACK_SEED: u64 = 1;

#[derive(Parser)]
#[command(name = "waring", version, about = "Generic k-ranks and power-sum decompositions of forms")]
struct Cli {
    /// Print machine-readable JSON.
    #[arg(long, global = true)]
    json: bool,
    /// Relative singular-value cutoff for numerical rank.
    #[arg(long, global = true, value_name = "EPS")]
    rank_tol: Option<f64>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generic ranks and Hilbert-series data.
    #[command(subcommand)]
    Rank(RankCmd),
    /// Decompositions of a single form.
    #[command(subcommand)]
    Decompose(DecomposeCmd),
    /// Bounds on the k-rank of a binary form.
    #[command(subcommand)]
    Krank(KrankCmd),
    /// Monomials as sums of k-th powers.
    #[command(subcommand)]
    Monomial(MonomialCmd),
    /// Reproduction suite and certificate checks.
    #[command(subcommand)]
    Verify(VerifyCmd),
}

#[derive(Args)]
struct Nkd {
    #[arg(long)]
    n: u32,
    #[arg(long)]
    k: u32,
    #[arg(long)]
    d: u32,
}

#[derive(Subcommand)]
enum RankCmd {
    /// Generic k-rank of forms of degree kd in n variables.
    Generic(Nkd),
    /// Fröberg series of n variables and the given generator degrees.
    Series {
        #[arg(long)]
        n: usize,
        #[arg(long, value_delimiter = ',', required = true)]
        degrees: Vec<u32>,
        #[arg(long, default_value_t = 20)]
        cutoff: usize,
    },
    /// Expected codimension of the s-th k-secant variety.
    Codim {
        #[command(flatten)]
        nkd: Nkd,
        #[arg(long)]
        s: u64,
    },
    /// The thresholds s_i and their codimensions.
    Thresholds(Nkd),
}

#[derive(Args)]
struct PolyArg {
    /// A binary form in x and y, e.g. "x^3 - 2*x*y^2".
    #[arg(long)]
    poly: String,
}

#[derive(Subcommand)]
enum DecomposeCmd {
    /// Minimal sum of powers of linear forms.
    Sylvester(PolyArg),
    /// A sum of two squares (even degree).
    TwoSquares(PolyArg),
    /// A sextic as at most three cubes of quadratics.
    SexticCubes {
        #[command(flatten)]
        poly: PolyArg,
        /// Move each multiplier into its quadratic by a cube root.
        #[arg(long)]
        fold: bool,
    },
    /// p = Σ y^(jd) p_j^(k-j).
    Canonical {
        #[command(flatten)]
        poly: PolyArg,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        d: u32,
        /// Allow a y^d coefficient where a leading term vanishes.
        #[arg(long)]
        relaxed: bool,
    },
}

#[derive(Subcommand)]
enum KrankCmd {
    /// Upper bound with certificate and a catalecticant lower bound.
    Bound {
        #[command(flatten)]
        poly: PolyArg,
        #[arg(long)]
        k: u32,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: usize,
        /// Fiber samples for the lower bound.
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        samples: usize,
        /// Defaults to $WARING_SEED, then 1.
        #[arg(long)]
        seed: Option<u64>,
    },
}

#[derive(Args)]
struct MonomialArgs {
    #[arg(long, value_delimiter = ',', required = true)]
    exponents: Vec<u32>,
    #[arg(long)]
    k: u32,
}

#[derive(Subcommand)]
enum MonomialCmd {
    /// x^a = m1 * m2^(k-1).
    Factor(MonomialArgs),
    /// An explicit sum of k-th powers.
    Decompose(MonomialArgs),
}

#[derive(Subcommand)]
enum VerifyCmd {
    /// Runs every worked example.
    PaperExamples,
    /// Re-checks a JSON certificate.
    Cert { file: std::path::PathBuf },
}

/// What a command printed and how it ended.
struct Report {
    text: String,
    json: Value,
    code: u8,
}

impl Report {
    fn ok(text: String, json: Value) -> Self {
        Self { text, json, code: 0 }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Parse { .. } => 2,
        Error::Precondition(_)
        | Error::ZeroForm
        | Error::DegreeMismatch { .. }
        | Error::VariableMismatch { .. }
        | Error::NotInvertible
        | Error::DivisionByZero => 3,
        Error::BudgetExhausted(_) => 4,
        _ => 1,
    }
}

fn seed_from_env(flag: Option<u64>) -> Result<u64, Error> {
    if let Some(s) = flag {
        return Ok(s);
    }
    match std::env::var("WARING_SEED") {
        Ok(v) => v.trim().parse().map_err(|_| Error::Parse { pos: 0, msg: format!("WARING_SEED is not an integer: {v}") }),
        Err(_) => Ok(FALLBACK_SEED),
    }
}

fn power_sum_text<F: Field>(p: &PowerSum<F>) -> String {
    let mut s = String::new();
    for t in &p.terms {
        let _ = writeln!(s, "  {} * ({})^{}", scalar_string(&t.coef), t.base, p.exponent);
    }
    s
}

fn decomposition_text(d: &Decomposition) -> String {
    match d {
        Decomposition::Exact(p) => power_sum_text(p),
        Decomposition::Float(p) => power_sum_text(p),
    }
}

fn mode_name(d: &Decomposition) -> &'static str {
    if d.is_exact() {
        "exact"
    } else {
        "float"
    }
}

fn power_sum_report(f: &BinaryForm<GaussRational>, dec: &Decomposition) -> Report {
    let cert = Certificate::power_sum(&f.to_multi(), dec, None);
    let text = format!(
        "{} terms ({})\n{}residual: {:e}",
        dec.len(),
        mode_name(dec),
        decomposition_text(dec),
        cert.residual
    );
    Report::ok(text, serde_json::to_value(&cert).expect("certificate serializes"))
}

fn rank(cmd: RankCmd) -> Result<Report, Error> {
    Ok(match cmd {
        RankCmd::Generic(Nkd { n, k, d }) => {
            let r = generic_k_rank(n, k, d)?;
            let status = match r.status {
                RankStatus::Proven => "proven",
                RankStatus::Conjectural => "conjectural",
            };
            let mut text = format!("{} ({status})", r.value);
            if r.exceptional {
                text.push_str(" exceptional");
            }
            Report::ok(text, serde_json::to_value(&r).expect("rank serializes"))
        }
        RankCmd::Series { n, degrees, cutoff } => {
            let s = froeberg_series(n, &degrees, cutoff);
            let coeffs: Vec<String> = s.coeffs().iter().map(ToString::to_string).collect();
            Report::ok(coeffs.join(" "), json!({ "n": n, "degrees": degrees, "cutoff": cutoff, "coefficients": coeffs }))
        }
        RankCmd::Codim { nkd: Nkd { n, k, d }, s } => {
            let c = secant_codim(n, k, d, s)?;
            Report::ok(c.to_string(), json!({ "n": n, "k": k, "d": d, "s": s, "codim": c.to_string() }))
        }
        RankCmd::Thresholds(Nkd { n, k, d }) => {
            let t = si_thresholds(n, k, d)?;
            let text = t.iter().map(|(i, c)| format!("s_{i}: {c}")).collect::<Vec<_>>().join("\n");
            let rows: Vec<Value> = t.iter().map(|(i, c)| json!({ "i": i, "value": c.to_string() })).collect();
            Report::ok(text, json!({ "n": n, "k": k, "d": d, "thresholds": rows }))
        }
    })
}

fn decompose(cmd: DecomposeCmd, tol: &Tolerances) -> Result<Report, Error> {
    Ok(match cmd {
        DecomposeCmd::Sylvester(PolyArg { poly }) => {
            let f = parse_binary(&poly)?;
            power_sum_report(&f, &sylvester_decompose(&f, tol)?)
        }
        DecomposeCmd::TwoSquares(PolyArg { poly }) => {
            let f = parse_binary(&poly)?;
            power_sum_report(&f, &two_squares(&f, tol)?)
        }
        DecomposeCmd::SexticCubes { poly: PolyArg { poly }, fold } => {
            let p = parse_binary(&poly)?;
            let mut cert = three_cubes(&p, tol)?;
            if fold {
                cert = CubesCertificate { terms: cert.folded(), ..cert };
            }
            let c = Certificate::sextic_cubes(&p, &cert);
            let text = format!(
                "branch: {}\n{} cubes ({})\n{}residual: {:e}",
                cert.branch.name(),
                cert.len(),
                mode_name(&cert.terms),
                decomposition_text(&cert.terms),
                c.residual
            );
            Report::ok(text, serde_json::to_value(&c).expect("certificate serializes"))
        }
        DecomposeCmd::Canonical { poly: PolyArg { poly }, k, d, relaxed } => {
            let p = parse_binary(&poly)?;
            let variant = if relaxed { CanonicalVariant::Relaxed } else { CanonicalVariant::Unique };
            let cf = canonical_form(&p, k, d, variant)?;
            let c = Certificate::canonical(&p, &cf);
            let mut text = String::new();
            for (j, part) in cf.parts.iter().enumerate() {
                let _ = writeln!(text, "  y^{} * {} * ({})^{}", j as u32 * d, part.scale, part.base, part.power);
            }
            let _ = write!(text, "exact reconstruction: {}", cf.reconstruct() == p);
            Report::ok(text, serde_json::to_value(&c).expect("certificate serializes"))
        }
    })
}

fn krank(cmd: KrankCmd, tol: &Tolerances) -> Result<Report, Error> {
    let KrankCmd::Bound { poly: PolyArg { poly }, k, budget, samples, seed } = cmd;
    let seed = seed_from_env(seed)?;
    let f = parse_binary(&poly)?;
    let up = krank_upper(&f, k, budget, seed, tol)?;
    let low = krank_lower_probe(&f, k, k / 2, samples, seed, tol)?;
    let cert = Certificate::power_sum(&f.to_multi(), &up.certificate, None);
    let source = serde_json::to_value(up.source).expect("source serializes");
    let confidence = serde_json::to_value(low.confidence).expect("confidence serializes");
    let text = format!(
        "upper: {} ({}{})\n{}lower: {} ({})",
        up.bound,
        source.as_str().unwrap_or_default(),
        if up.heuristic { ", heuristic" } else { "" },
        decomposition_text(&up.certificate),
        low.bound,
        confidence.as_str().unwrap_or_default(),
    );
    let json = json!({
        "upper": up.bound,
        "upperSource": source,
        "heuristic": up.heuristic,
        "upperCertificate": cert,
        "lower": low.bound,
        "lowerConfidence": confidence,
        "samples": low.samples,
        "seed": seed,
    });
    Ok(Report { text, json, code: if up.heuristic { 4 } else { 0 } })
}

fn monomial(cmd: MonomialCmd, tol: &Tolerances) -> Result<Report, Error> {
    Ok(match cmd {
        MonomialCmd::Factor(MonomialArgs { exponents, k }) => {
            let m = monomial_k_factor(&exponents, k)?;
            let text = format!("m1 = {:?}\nm2 = {:?}\nd = {}", m.m1, m.m2, m.d);
            Report::ok(text, json!({ "a": m.a, "k": m.k, "d": m.d, "m1": m.m1, "m2": m.m2, "q": m.q, "r": m.r }))
        }
        MonomialCmd::Decompose(MonomialArgs { exponents, k }) => {
            let dec = monomial_krank_upper(&exponents, k, tol)?;
            let names = default_names(exponents.len());
            let target = MultiForm::from_terms(exponents.len(), exponents.iter().sum(), [(exponents.clone(), GaussRational::one())])?;
            let cert = Certificate::power_sum(&target, &dec, Some(names));
            let text = format!("{} terms ({})\n{}residual: {:e}", dec.len(), mode_name(&dec), decomposition_text(&dec), cert.residual);
            Report::ok(text, serde_json::to_value(&cert).expect("certificate serializes"))
        }
    })
}

fn verify(cmd: VerifyCmd, tol: &Tolerances) -> Result<Report, Error> {
    Ok(match cmd {
        VerifyCmd::PaperExamples => {
            let mut reports: Vec<_> = paper_examples().par_iter().map(run_case).collect();
            reports.sort_by_key(|r| r.name);
            let failed = reports.iter().filter(|r| !r.passed).count();
            let mut text = String::new();
            for r in &reports {
                let _ = writeln!(text, "{} {}: {}", if r.passed { "PASS" } else { "FAIL" }, r.name, r.detail);
            }
            let _ = write!(text, "{} of {} cases passed", reports.len() - failed, reports.len());
            let rows: Vec<Value> =
                reports.iter().map(|r| json!({ "name": r.name, "passed": r.passed, "detail": r.detail })).collect();
            Report { text, json: json!({ "cases": rows, "failed": failed }), code: u8::from(failed > 0) }
        }
        VerifyCmd::Cert { file } => {
            let s = std::fs::read_to_string(&file)
                .map_err(|e| Error::Precondition(format!("cannot read {}: {e}", file.display())))?;
            let cert = Certificate::from_json(&s)?;
            let r = cert.verify(tol)?;
            let text = format!("{} ({:?}, residual {:e})", if r.ok { "valid" } else { "INVALID" }, r.mode, r.residual);
            Report { text, json: serde_json::to_value(&r).expect("report serializes"), code: u8::from(!r.ok) }
        }
    })
}

fn run(cli: Cli) -> Result<Report, Error> {
    let mut tol = Tolerances::default();
    if let Some(eps) = cli.rank_tol {
        if !(eps > 0.0 && eps < 1.0) {
            return Err(Error::Precondition(format!("--rank-tol must lie in (0, 1), got {eps}")));
        }
        tol = tol.with_rank_eps(eps);
    }
    match cli.cmd {
        Cmd::Rank(c) => rank(c),
        Cmd::Decompose(c) => decompose(c, &tol),
        Cmd::Krank(c) => krank(c, &tol),
        Cmd::Monomial(c) => monomial(c, &tol),
        Cmd::Verify(c) => verify(c, &tol),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let json = cli.json;
    match run(cli) {
        Ok(r) => {
            if json {
                println!("{}", serde_json::to_string_pretty(&r.json).expect("json output"));
            } else {
                println!("{}", r.text);
            }
            ExitCode::from(r.code)
        }
        Err(e) => {
            if json {
                println!("{}", json!({ "error": e.to_string(), "code": exit_code(&e) }));
            }
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn error_classes_map_to_codes() {
        assert_eq!(exit_code(&Error::Parse { pos: 0, msg: String::new() }), 2);
        assert_eq!(exit_code(&Error::ZeroForm), 3);
        assert_eq!(exit_code(&Error::DegreeMismatch { left: 4, right: 6 }), 3);
        assert_eq!(exit_code(&Error::BudgetExhausted(String::new())), 4);
        assert_eq!(exit_code(&Error::Internal(String::new())), 1);
    }

    #[test]
    fn explicit_seed_wins() {
        assert_eq!(seed_from_env(Some(9)).unwrap(), 9);
    }

    #[test]
    fn clap_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
