//! `cyclonorm` — command-line front end.
//!
//! Every subcommand prints a single JSON document on stdout (schema_version
//! 1); errors go to stderr as JSON too.  Exit codes: 0 for success / a true
//! predicate, 1 for a false predicate, 2 for errors.  Output is деterministic
//! given the arguments and `--seed`.

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use cyclonorm::algebra::{alg_mul, reduced_norm, reduced_trace, AlgebraElem, AlgebraParams};
use cyclonorm::arith::{parse_elem, CycElem, Ell};
use cyclonorm::dioph::{
    build_certificate, classify, fix_ab, member, nonpower_witness, verify_certificate,
    Certificate, Params, SetQuery,
};
use cyclonorm::norms::{delta, identity_basis, is_norm, lth_root, norm_form_coeffs, norm_solve};
use cyclonorm::places::{parse_place_name, power_residue_symbol, Mu, Place};
use cyclonorm::selftest;
use cyclonorm::symbols::{hilbert_symbol_support, wild_place};
use cyclonorm::{Error, SearchConfig};

const SCHEMA_VERSION: u32 = 1;

#[derive(Parser)]
#[command(
    name = "cyclonorm",
    about = "Hilbert symbols, power residue characters, and Hasse norm tests over ℚ and ℚ(ζ₃)",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Pretty-print the JSON output.
    #[arg(long, global = true)]
    pretty: bool,
    /// Seed for the deterministic sampling streams.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Candidate cap for prime searches (default 100000, or
    /// CYCLONORM_SEARCH_BOUND).
    #[arg(long, global = true)]
    search_bound: Option<u64>,
    /// Height cap for norm_solve enumeration (default 50, or
    /// CYCLONORM_HEIGHT_BOUND).
    #[arg(long, global = true)]
    height_bound: Option<u64>,
}

#[derive(Args)]
struct EllArg {
    /// Exponent ℓ: 2 for ℚ, 3 for ℚ(ζ₃).
    #[arg(long, value_parser = clap::value_parser!(u32).range(2..=3))]
    ell: u32,
}

#[derive(Subcommand)]
enum Command {
    /// Hilbert symbols (a, b) at every place where they are nontrivial.
    Symbol {
        #[command(flatten)]
        ell: EllArg,
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long, allow_hyphen_values = true)]
        b: String,
        /// Restrict to one place (by name, e.g. "7,0" or "real").
        #[arg(long)]
        place: Option<String>,
    },
    /// Power residue character (a / 𝔭).
    PowerResidue {
        #[command(flatten)]
        ell: EllArg,
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        /// Place name, e.g. "5" or "7,1".
        #[arg(long)]
        place: String,
    },
    /// Decide "x is a norm from K(ℓ√y)"; exit 0 if yes, 1 if no.
    IsNorm {
        #[command(flatten)]
        ell: EllArg,
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        #[arg(long, allow_hyphen_values = true)]
        y: String,
        /// Also search for a witness tuple within the height bound.
        #[arg(long)]
        solve: bool,
    },
    /// The obstruction set Δ_{x,y}.
    Delta {
        #[command(flatten)]
        ell: EllArg,
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        #[arg(long, allow_hyphen_values = true)]
        y: String,
    },
    /// Frobenius classification of the support of x under fixed parameters.
    Classify {
        #[arg(long)]
        params: String,
        #[arg(long, allow_hyphen_values = true)]
        x: String,
    },
    /// Membership in one of the named sets; exit 0 if member, 1 if not.
    Member {
        #[command(flatten)]
        ell: EllArg,
        /// One of: t, tstar, i, j, phi, phitilde, psi, r, r11.
        #[arg(long)]
        set: String,
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        #[arg(long, allow_hyphen_values = true)]
        a: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        b: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        c: Option<String>,
        /// Parameter bundle (JSON file) for phi/phitilde/psi/r/r11.
        #[arg(long)]
        params: Option<String>,
        /// Frobenius class "i,j" with i, j ∈ {1, −1} for phi/phitilde/r.
        #[arg(long, allow_hyphen_values = true)]
        class: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        p: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        q: Option<String>,
    },
    /// Build or verify a non-norm certificate.
    Certificate {
        #[command(subcommand)]
        action: CertAction,
    },
    /// Expanded norm form N(t₀ + t₁·ℓ√y + …) over a basis.
    NormForm {
        #[command(flatten)]
        ell: EllArg,
        #[arg(long, allow_hyphen_values = true)]
        y: String,
    },
    /// Cyclic algebra arithmetic: reduced norm and trace of a monomial sum.
    Algebra {
        #[command(flatten)]
        ell: EllArg,
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long, allow_hyphen_values = true)]
        b: String,
        /// Element as a semicolon-separated row-major coordinate matrix in
        /// the T^i S^j basis, e.g. "1,0;0,1" (entries in the element grammar).
        #[arg(long, allow_hyphen_values = true)]
        u: String,
    },
    /// Generate the standard parameter bundle (a, b, modulus, 𝔭₀, 𝔭₁).
    Fixab {
        #[command(flatten)]
        ell: EllArg,
        /// Rational primes the parameters must avoid.
        #[arg(long, value_delimiter = ',')]
        avoid: Vec<i64>,
    },
    /// Witness that x is not an ℓth power: a y with (x, y) not a norm pair.
    NonpowerWitness {
        #[arg(long)]
        params: String,
        #[arg(long, allow_hyphen_values = true)]
        x: String,
    },
    /// Run the self-test battery; exit 0 iff every criterion passes.
    Selftest {
        /// Run only this criterion (1–9).
        #[arg(long)]
        only: Option<u32>,
    },
}

#[derive(Subcommand)]
enum CertAction {
    /// Build a certificate that x is not a norm from K(ℓ√y).
    Build {
        #[arg(long)]
        params: String,
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        #[arg(long, allow_hyphen_values = true)]
        y: String,
    },
    /// Verify a certificate (JSON file or inline JSON); exit 0/1.
    Verify {
        #[arg(long)]
        params: String,
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        #[arg(long, allow_hyphen_values = true)]
        y: String,
        /// Path to the certificate JSON, or "-" to read stdin.
        #[arg(long)]
        certificate: String,
    },
}

fn ell_of(arg: &EllArg) -> Ell {
    match arg.ell {
        2 => Ell::Two,
        _ => Ell::Three,
    }
}

fn env_u64(name: &str) -> Option<u64> {
    std::env::var(name).ok().and_then(|v| v.parse().ok())
}

fn place_json(pl: &Place) -> Value {
    json!(pl.name())
}

fn mu_json(m: &Mu) -> Value {
    json!({ "exponent": m.exp, "value": m.to_string() })
}

fn load_params(path: &str) -> Result<Params, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read {path}: {e}"))?;
    let params: Params =
        serde_json::from_str(&text).map_err(|e| format!("bad parameter bundle {path}: {e}"))?;
    params.validate().map_err(|e| e.to_string())?;
    Ok(params)
}

fn parse_class(sp: &str) -> Result<cyclonorm::places::FrobClass, String> {
    let (i, j) = sp
        .split_once(',')
        .ok_or_else(|| format!("class must look like \"1,-1\", got {sp:?}"))?;
    let pi: i8 = i.trim().parse().map_err(|_| format!("bad class component {i:?}"))?;
    let pj: i8 = j.trim().parse().map_err(|_| format!("bad class component {j:?}"))?;
    if !(pi == 1 || pi == -1) || !(pj == 1 || pj == -1) {
        return Err("class components must be 1 or -1".into());
    }
    Ok(cyclonorm::places::FrobClass { i: pi, j: pj })
}

/// Outcome of one subcommand: a JSON body plus the exit code to use.
struct Outcome {
    body: Value,
    code: u8,
}

fn ok(body: Value) -> Result<Outcome, String> {
    Ok(Outcome { body, code: 0 })
}

fn predicate(body: Value, truth: bool) -> Result<Outcome, String> {
    Ok(Outcome { body, code: if truth { 0 } else { 1 } })
}

fn run(cli: &Cli) -> Result<Outcome, String> {
    let cfg = SearchConfig {
        search_bound: cli
            .search_bound
            .or_else(|| env_u64("CYCLONORM_SEARCH_BOUND"))
            .unwrap_or(100_000),
        height_bound: cli
            .height_bound
            .or_else(|| env_u64("CYCLONORM_HEIGHT_BOUND"))
            .unwrap_or(50),
        seed: cli.seed,
        ..SearchConfig::default()
    };
    let e = |err: Error| err.to_string();
    match &cli.command {
        Command::Symbol { ell, a, b, place } => {
            let ell = ell_of(ell);
            let a = parse_elem(a, ell).map_err(e)?;
            let b = parse_elem(b, ell).map_err(e)?;
            let support = hilbert_symbol_support(&a, &b).map_err(e)?;
            match place {
                Some(name) => {
                    let pl = parse_place_name(ell, name).map_err(e)?;
                    let value = support
                        .iter()
                        .find(|(q, _)| *q == pl)
                        .map(|(_, m)| *m)
                        .unwrap_or_else(|| Mu::one(ell));
                    ok(json!({
                        "schema_version": SCHEMA_VERSION,
                        "place": place_json(&pl),
                        "symbol": mu_json(&value),
                    }))
                }
                None => ok(json!({
                    "schema_version": SCHEMA_VERSION,
                    "support": support
                        .iter()
                        .map(|(pl, m)| json!({ "place": place_json(pl), "symbol": mu_json(m) }))
                        .collect::<Vec<_>>(),
                })),
            }
        }
        Command::PowerResidue { ell, a, place } => {
            let ell = ell_of(ell);
            let a = parse_elem(a, ell).map_err(e)?;
            let pl = parse_place_name(ell, place).map_err(e)?;
            let m = power_residue_symbol(&a, &pl).map_err(e)?;
            ok(json!({
                "schema_version": SCHEMA_VERSION,
                "place": place_json(&pl),
                "symbol": mu_json(&m),
            }))
        }
        Command::IsNorm { ell, x, y, solve } => {
            let ell = ell_of(ell);
            let x = parse_elem(x, ell).map_err(e)?;
            let y = parse_elem(y, ell).map_err(e)?;
            let verdict = is_norm(&x, &y).map_err(e)?;
            let mut body = json!({
                "schema_version": SCHEMA_VERSION,
                "is_norm": verdict.is_norm,
                "obstructions": verdict.obstructions.iter().map(place_json).collect::<Vec<_>>(),
            });
            if *solve && verdict.is_norm {
                let t = norm_solve(&x, &y, &cfg).map_err(e)?;
                body["witness"] =
                    Value::Array(t.iter().map(|c| json!(c.to_string())).collect());
            }
            predicate(body, verdict.is_norm)
        }
        Command::Delta { ell, x, y } => {
            let ell = ell_of(ell);
            let x = parse_elem(x, ell).map_err(e)?;
            let y = parse_elem(y, ell).map_err(e)?;
            let places = delta(&x, &y).map_err(e)?;
            ok(json!({
                "schema_version": SCHEMA_VERSION,
                "delta": places.iter().map(place_json).collect::<Vec<_>>(),
            }))
        }
        Command::Classify { params, x } => {
            let params = load_params(params)?;
            let x = parse_elem(x, params.ell).map_err(e)?;
            let cls = classify(&x, &params).map_err(e)?;
            ok(json!({
                "schema_version": SCHEMA_VERSION,
                "ideal_class": { "i": cls.ideal_class.i, "j": cls.ideal_class.j },
                "by_class": cls
                    .by_class
                    .iter()
                    .map(|(c, places)| json!({
                        "class": { "i": c.i, "j": c.j },
                        "places": places.iter().map(place_json).collect::<Vec<_>>(),
                    }))
                    .collect::<Vec<_>>(),
            }))
        }
        Command::Member { ell, set, x, a, b, c, params, class, p, q } => {
            let ell = ell_of(ell);
            let x = parse_elem(x, ell).map_err(e)?;
            let need = |o: &Option<String>, name: &str| -> Result<CycElem, String> {
                let sp = o.as_ref().ok_or_else(|| format!("--{name} is required for this set"))?;
                parse_elem(sp, ell).map_err(e)
            };
            let need_params = || -> Result<Params, String> {
                let path =
                    params.as_ref().ok_or_else(|| "--params is required for this set".to_string())?;
                let ps = load_params(path)?;
                if ps.ell != ell {
                    return Err("parameter bundle disagrees with --ell".into());
                }
                Ok(ps)
            };
            let query = match set.as_str() {
                "t" => SetQuery::T { a: need(a, "a")?, b: need(b, "b")? },
                "tstar" => SetQuery::TStar { a: need(a, "a")?, b: need(b, "b")? },
                "i" => SetQuery::I { a: need(a, "a")?, b: need(b, "b")?, c: need(c, "c")? },
                "j" => SetQuery::J { a: need(a, "a")?, b: need(b, "b")? },
                "phi" => SetQuery::Phi {
                    params: need_params()?,
                    class: parse_class(class.as_deref().unwrap_or("1,1"))?,
                },
                "phitilde" => SetQuery::PhiTilde {
                    params: need_params()?,
                    class: parse_class(class.as_deref().unwrap_or("1,1"))?,
                },
                "psi" => SetQuery::Psi { params: need_params()?, q: need(q, "q")? },
                "r" => SetQuery::R {
                    params: need_params()?,
                    class: parse_class(class.as_deref().unwrap_or("-1,-1"))?,
                    p: need(p, "p")?,
                },
                "r11" => SetQuery::R11 { params: need_params()?, p: need(p, "p")?, q: need(q, "q")? },
                other => return Err(format!("unknown set {other:?}")),
            };
            let m = member(&query, &x).map_err(e)?;
            predicate(
                json!({ "schema_version": SCHEMA_VERSION, "set": set, "member": m }),
                m,
            )
        }
        Command::Certificate { action } => match action {
            CertAction::Build { params, x, y } => {
                let params = load_params(params)?;
                let x = parse_elem(x, params.ell).map_err(e)?;
                let y = parse_elem(y, params.ell).map_err(e)?;
                let cert = build_certificate(&x, &y, &params, &cfg).map_err(e)?;
                ok(json!({
                    "schema_version": SCHEMA_VERSION,
                    "certificate": serde_json::to_value(&cert).map_err(|er| er.to_string())?,
                }))
            }
            CertAction::Verify { params, x, y, certificate } => {
                let params = load_params(params)?;
                let x = parse_elem(x, params.ell).map_err(e)?;
                let y = parse_elem(y, params.ell).map_err(e)?;
                let text = if certificate == "-" {
                    use std::io::Read;
                    let mut buf = String::new();
                    std::io::stdin().read_to_string(&mut buf).map_err(|er| er.to_string())?;
                    buf
                } else {
                    std::fs::read_to_string(certificate)
                        .map_err(|er| format!("cannot read {certificate}: {er}"))?
                };
                let cert: Certificate =
                    serde_json::from_str(&text).map_err(|er| format!("bad certificate: {er}"))?;
                let valid = verify_certificate(&x, &y, &cert, &params);
                predicate(
                    json!({ "schema_version": SCHEMA_VERSION, "valid": valid }),
                    valid,
                )
            }
        },
        Command::NormForm { ell, y } => {
            let ell = ell_of(ell);
            let y = parse_elem(y, ell).map_err(e)?;
            let form = norm_form_coeffs(&y, &identity_basis(ell)).map_err(e)?;
            ok(json!({
                "schema_version": SCHEMA_VERSION,
                "monomials": form
                    .monomials
                    .iter()
                    .map(|(exps, c)| json!({ "exponents": exps, "coefficient": c.to_string() }))
                    .collect::<Vec<_>>(),
            }))
        }
        Command::Algebra { ell, a, b, u } => {
            let ell = ell_of(ell);
            let a = parse_elem(a, ell).map_err(e)?;
            let b = parse_elem(b, ell).map_err(e)?;
            let ap = AlgebraParams::new(a, b).map_err(e)?;
            let l = ell.as_u32() as usize;
            let rows: Vec<&str> = u.split(';').collect();
            if rows.len() != l {
                return Err(format!("--u needs {l} semicolon-separated rows"));
            }
            let mut elem = AlgebraElem::zero(&ap);
            for (i, row) in rows.iter().enumerate() {
                let cells: Vec<&str> = row.split(',').collect();
                if cells.len() != l {
                    return Err(format!("--u row {i} needs {l} comma-separated entries"));
                }
                for (j, cell) in cells.iter().enumerate() {
                    let coeff = parse_elem(cell, ell).map_err(e)?;
                    let mono = AlgebraElem::monomial(&ap, i, j, &coeff).map_err(e)?;
                    elem = elem.add(&mono).map_err(e)?;
                }
            }
            let nrd = reduced_norm(&elem).map_err(e)?;
            let trd = reduced_trace(&elem).map_err(e)?;
            // cross-check: Nrd and Trd are multiplicative/additive against 1
            let _ = alg_mul(&elem, &AlgebraElem::one(&ap)).map_err(e)?;
            ok(json!({
                "schema_version": SCHEMA_VERSION,
                "nrd": nrd.to_string(),
                "trd": trd.to_string(),
            }))
        }
        Command::Fixab { ell, avoid } => {
            let ell = ell_of(ell);
            let avoid: Vec<num_bigint::BigInt> =
                avoid.iter().map(|&n| num_bigint::BigInt::from(n)).collect();
            let params = fix_ab(ell, &avoid, cli.seed, &cfg).map_err(e)?;
            ok(json!({
                "schema_version": SCHEMA_VERSION,
                "params": serde_json::to_value(&params).map_err(|er| er.to_string())?,
                "a": params.a.to_string(),
                "b": params.b.to_string(),
                "modulus": params
                    .modulus
                    .iter()
                    .map(|(pl, k)| json!({ "place": place_json(pl), "exponent": k }))
                    .collect::<Vec<_>>(),
            }))
        }
        Command::NonpowerWitness { params, x } => {
            let params = load_params(params)?;
            let x = parse_elem(x, params.ell).map_err(e)?;
            if let Some(root) = lth_root(&x).map_err(e)? {
                return Err(format!("x = {x} is an ℓth power (root {root}); nothing to witness"));
            }
            let y = nonpower_witness(&x, &params, &cfg).map_err(e)?;
            let cert = build_certificate(&x, &y, &params, &cfg).map_err(e)?;
            ok(json!({
                "schema_version": SCHEMA_VERSION,
                "witness": y.to_string(),
                "certificate": serde_json::to_value(&cert).map_err(|er| er.to_string())?,
                "wild_place": place_json(&wild_place(params.ell)),
            }))
        }
        Command::Selftest { only } => {
            let reports: Vec<_> = match only {
                Some(n) => {
                    let f = [
                        selftest::criterion_1,
                        selftest::criterion_2,
                        selftest::criterion_3,
                        selftest::criterion_4,
                        selftest::criterion_5,
                        selftest::criterion_6,
                        selftest::criterion_7,
                        selftest::criterion_8,
                        selftest::criterion_9,
                    ];
                    let idx = (*n as usize)
                        .checked_sub(1)
                        .filter(|i| *i < f.len())
                        .ok_or_else(|| format!("no criterion {n}; pick 1–9"))?;
                    vec![f[idx](&cfg)]
                }
                None => selftest::run_all(&cfg),
            };
            let all_pass = reports.iter().all(|r| r.pass);
            predicate(
                json!({
                    "schema_version": SCHEMA_VERSION,
                    "pass": all_pass,
                    "criteria": serde_json::to_value(&reports).map_err(|er| er.to_string())?,
                }),
                all_pass,
            )
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            use clap::error::ErrorKind;
            if matches!(err.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{err}");
                return ExitCode::SUCCESS;
            }
            let body = json!({ "schema_version": SCHEMA_VERSION, "error": err.to_string() });
            eprintln!("{body}");
            return ExitCode::from(2);
        }
    };
    match run(&cli) {
        Ok(outcome) => {
            let rendered = if cli.pretty {
                serde_json::to_string_pretty(&outcome.body)
            } else {
                serde_json::to_string(&outcome.body)
            }
            .expect("JSON rendering cannot fail");
            println!("{rendered}");
            ExitCode::from(outcome.code)
        }
        Err(msg) => {
            let err = json!({ "schema_version": SCHEMA_VERSION, "error": msg });
            eprintln!("{err}");
            ExitCode::from(2)
        }
    }
}
