//! `etafold`: classification, cobordism and eta invariants of circle-bundle
//! total spaces from the command line.

mod render;
mod verify;

use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use etafold_core::bundle::{
    chern_family_type_i, chern_family_type_iii, classify_total_space, enumerate_standard_quotients,
    BundleSpec, FiveManifoldClass, ManifoldType,
};
use etafold_core::cobordism::{beta, spinc_class, EpsilonSign};
use etafold_core::eta::eta_family_table_for_target;
use etafold_core::{CohomologyClass, Error, IntersectionForm};
use serde_json::{json, Value};

#[derive(Parser, Debug)]
#[command(
    name = "etafold",
    version,
    about = "Invariants of circle-bundle 5-manifolds with fundamental group Z/2"
)]
struct Cli {
    /// Pin the unresolved sign in the pin^+ formula to +1 or -1. Without it,
    /// every sign-dependent field is reported for both branches.
    #[arg(long, global = true, env = "ETAFOLD_EPSILON", allow_hyphen_values = true, value_parser = parse_epsilon)]
    epsilon: Option<EpsilonSign>,

    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Classify the total space of the bundle with Chern class k d.
    Classify {
        /// Intersection form, e.g. `diag(1,1,-1)`, `cp(2,1)`, `even(1)`, `0,1;1,0`.
        #[arg(long, allow_hyphen_values = true)]
        base: IntersectionForm,
        /// Primitive class, comma separated.
        #[arg(long, allow_hyphen_values = true)]
        d: CohomologyClass,
        #[arg(long, default_value_t = 2, allow_hyphen_values = true)]
        k: i64,
    },
    /// Standard simply connected quotients of a Z/2 total space, given either
    /// by a bundle (`--base`, `--d`) or by invariants (`--type`, `--b2`, ...).
    Quotients {
        #[arg(
            long,
            allow_hyphen_values = true,
            requires = "d",
            conflicts_with = "kind"
        )]
        base: Option<IntersectionForm>,
        #[arg(long, allow_hyphen_values = true, requires = "base")]
        d: Option<CohomologyClass>,
        #[arg(long = "type", value_enum, requires = "b2")]
        kind: Option<TypeArg>,
        #[arg(long)]
        b2: Option<u32>,
        /// pin^+ class in Z/16 (type III).
        #[arg(long, allow_hyphen_values = true)]
        pin: Option<i64>,
        /// `<d^2,[B]>` mod 8 (type I).
        #[arg(long, allow_hyphen_values = true)]
        q: Option<i64>,
    },
    /// Chern-class families d_k over cp(a,b).
    Family {
        #[arg(long, allow_hyphen_values = true)]
        base: IntersectionForm,
        #[arg(long = "type", value_enum, default_value = "iii")]
        kind: FamilyType,
        /// Number of members.
        #[arg(long = "K", default_value_t = 10)]
        count: usize,
        /// Type III: c in [P] = sign + 4c.
        #[arg(long, default_value_t = 0)]
        target: u8,
        /// Type I: the residue <d_k^2> = +-q mod 8.
        #[arg(long)]
        q: Option<u8>,
    },
    /// Spin^c coordinates (d^2, ind) and the pin^+ class of (B, d).
    Cobordism {
        #[arg(long, allow_hyphen_values = true)]
        base: IntersectionForm,
        #[arg(long, allow_hyphen_values = true)]
        d: CohomologyClass,
    },
    /// Eta invariants along the type III family over cp(a,b).
    EtaTable {
        #[arg(long)]
        a: usize,
        #[arg(long)]
        b: usize,
        #[arg(long = "K", default_value_t = 10)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        target: u8,
    },
    /// Run the enumeration-based property suites.
    Verify {
        /// Largest base rank to enumerate (at most 8).
        #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u64).range(1..=8))]
        max_rank: u64,
        /// Largest absolute coordinate of enumerated classes.
        #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(i64).range(1..=16))]
        max_coord: i64,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum TypeArg {
    I,
    Ii,
    Iii,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FamilyType {
    I,
    Iii,
}

fn parse_epsilon(s: &str) -> Result<EpsilonSign, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

#[derive(Debug)]
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Self {
            code: 2,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Self {
            code: if e.is_internal() { 1 } else { 2 },
            message: e.to_string(),
        }
    }
}

fn branches(eps: Option<EpsilonSign>) -> Vec<EpsilonSign> {
    match eps {
        Some(e) => vec![e],
        None => EpsilonSign::BOTH.to_vec(),
    }
}

fn classify(
    base: IntersectionForm,
    d: CohomologyClass,
    k: i64,
    eps: Option<EpsilonSign>,
) -> Result<Value, Failure> {
    let spec = BundleSpec::new(base, k, d)?;
    let first = classify_total_space(&spec, EpsilonSign::Plus)?;
    let mut out = json!({
        "base": spec.base().to_string(),
        "d": spec.primitive_class().to_string(),
        "k": spec.multiplier(),
        "chern_class": spec.chern_class().to_string(),
        "fundamental_group_order": first.fundamental_group_order,
        "b2": first.b2,
        "orientable": first.orientable,
        "h2_torsion_free": first.h2_torsion_free,
        "type": first.manifold_type.to_string(),
    });
    match first.manifold_type {
        ManifoldType::III => {
            let mut rows = Vec::new();
            for e in branches(eps) {
                let m = classify_total_space(&spec, e)?;
                let name = m
                    .standard_name
                    .ok_or_else(|| Error::Internal("type III without a name".into()))?;
                rows.push(json!({
                    "epsilon": e.value(),
                    "pin_plus": beta(spec.base(), spec.primitive_class(), e)?.value(),
                    "q": m.pin_plus,
                    "summands": name.summands,
                    "name": name.to_string(),
                }));
            }
            out["branches"] = Value::Array(rows);
        }
        ManifoldType::I => {
            out["type_i_q"] = json!(first.type_i_q);
            out["type_i_s"] = json!(first.type_i_s);
            out["exceptional"] = json!(first.is_exceptional_type_i());
        }
        ManifoldType::II | ManifoldType::NotApplicable => {}
    }
    Ok(out)
}

fn quotient_row(m: &FiveManifoldClass, eps: Option<EpsilonSign>) -> Result<Value, Failure> {
    let qs = enumerate_standard_quotients(m)?;
    Ok(json!({
        "epsilon": eps.map(EpsilonSign::value),
        "type": m.manifold_type.to_string(),
        "b2": m.b2,
        "q": m.pin_plus.or(m.type_i_q),
        "quotients": qs.iter().map(ToString::to_string).collect::<Vec<_>>(),
    }))
}

fn quotients(
    base: Option<IntersectionForm>,
    d: Option<CohomologyClass>,
    kind: Option<TypeArg>,
    b2: Option<u32>,
    pin: Option<i64>,
    q: Option<i64>,
    eps: Option<EpsilonSign>,
) -> Result<Value, Failure> {
    let mut rows = Vec::new();
    if let (Some(base), Some(d)) = (base, d) {
        let spec = BundleSpec::new(base, 2, d)?;
        let first = classify_total_space(&spec, EpsilonSign::Plus)?;
        if first.manifold_type == ManifoldType::III {
            for e in branches(eps) {
                rows.push(quotient_row(&classify_total_space(&spec, e)?, Some(e))?);
            }
        } else {
            rows.push(quotient_row(&first, None)?);
        }
    } else {
        let (Some(kind), Some(b2)) = (kind, b2) else {
            return Err(Failure::input(
                "give either --base and --d, or --type and --b2",
            ));
        };
        let m = match kind {
            TypeArg::Ii => {
                if b2 % 2 == 0 {
                    return Err(Failure::input(format!("type II needs odd b2, got {b2}")));
                }
                FiveManifoldClass::type_ii(b2)
            }
            TypeArg::Iii => {
                let pin = pin.ok_or_else(|| Failure::input("type III needs --pin"))?;
                FiveManifoldClass::type_iii(b2, pin.rem_euclid(16) as u8)
                    .map_err(|e| Failure::input(e.to_string()))?
            }
            TypeArg::I => {
                let q = q.ok_or_else(|| Failure::input("type I needs --q"))?;
                FiveManifoldClass::type_i(b2, q.rem_euclid(8) as u8)
            }
        };
        rows.push(quotient_row(&m, None)?);
    }
    Ok(json!({ "branches": rows }))
}

fn family(
    base: IntersectionForm,
    kind: FamilyType,
    count: usize,
    target: u8,
    q: Option<u8>,
    eps: Option<EpsilonSign>,
) -> Result<Value, Failure> {
    match kind {
        FamilyType::Iii => {
            let mut out = Vec::new();
            for e in branches(eps) {
                let rows = chern_family_type_iii(&base, count, target, e)?
                    .into_iter()
                    .map(|m| {
                        Ok(json!({
                            "k": m.k,
                            "d_k": m.class.to_string(),
                            "d_squared": base.square(&m.class)?,
                            "pin_plus": beta(&base, &m.class, e)?.value(),
                        }))
                    })
                    .collect::<Result<Vec<_>, Error>>()?;
                out.push(json!({ "epsilon": e.value(), "rows": rows }));
            }
            Ok(json!({
                "base": base.to_string(),
                "type": "III",
                "target": target,
                "branches": out,
            }))
        }
        FamilyType::I => {
            let q = q.ok_or_else(|| Failure::input("type I family needs --q"))?;
            let rows = chern_family_type_i(q, &base, count)?
                .into_iter()
                .map(|m| {
                    Ok(json!({
                        "k": m.k,
                        "d_k": m.class.to_string(),
                        "d_squared": base.square(&m.class)?,
                    }))
                })
                .collect::<Result<Vec<_>, Error>>()?;
            Ok(json!({
                "base": base.to_string(),
                "type": "I",
                "q": q,
                "rows": rows,
            }))
        }
    }
}

fn cobordism(
    base: IntersectionForm,
    d: CohomologyClass,
    eps: Option<EpsilonSign>,
) -> Result<Value, Failure> {
    let class = spinc_class(&base, &d)?;
    let mut rows = Vec::new();
    for e in branches(eps) {
        let b = beta(&base, &d, e)?;
        rows.push(json!({ "epsilon": e.value(), "beta": b.value(), "up_to_sign": b.up_to_sign() }));
    }
    Ok(json!({
        "base": base.to_string(),
        "d": d.to_string(),
        "d_squared": class.d_squared(),
        "index": class.index(),
        "signature": base.signature(),
        "beta": rows,
    }))
}

fn eta_table(
    a: usize,
    b: usize,
    count: usize,
    target: u8,
    eps: Option<EpsilonSign>,
) -> Result<Value, Failure> {
    let mut out = Vec::new();
    for e in branches(eps) {
        let r = eta_family_table_for_target(a, b, count, target, e)?;
        out.push(json!({
            "epsilon": e.value(),
            "rows": r.rows,
            "distinct_count": r.distinct_count,
        }));
    }
    Ok(json!({
        "base": IntersectionForm::diagonal(a, b).to_string(),
        "target": target,
        "level": 2,
        "branches": out,
    }))
}

fn run(cli: Cli) -> Result<(Value, bool), Failure> {
    let eps = cli.epsilon;
    let value = match cli.command {
        Command::Classify { base, d, k } => classify(base, d, k, eps)?,
        Command::Quotients {
            base,
            d,
            kind,
            b2,
            pin,
            q,
        } => quotients(base, d, kind, b2, pin, q, eps)?,
        Command::Family {
            base,
            kind,
            count,
            target,
            q,
        } => family(base, kind, count, target, q, eps)?,
        Command::Cobordism { base, d } => cobordism(base, d, eps)?,
        Command::EtaTable {
            a,
            b,
            count,
            target,
        } => eta_table(a, b, count, target, eps)?,
        Command::Verify {
            max_rank,
            max_coord,
        } => {
            let report = verify::run(max_rank as usize, max_coord);
            let ok = report.passed;
            return Ok((serde_json::to_value(report).expect("report serializes"), ok));
        }
    };
    Ok((value, true))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let json = cli.json;
    match run(cli) {
        Ok((value, ok)) => {
            let body = if json {
                serde_json::to_string_pretty(&value).expect("json output") + "\n"
            } else {
                render::text(&value)
            };
            // a closed pipe (`| head`) is not an error
            let _ = std::io::stdout().lock().write_all(body.as_bytes());
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
