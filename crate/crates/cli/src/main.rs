//! `kloost`: command-line access to binary Kloosterman sums over GF(2^m).
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or input error,
//! 3 enumeration cap exceeded without `--force`.

mod output;

use std::io::{self, Write};
use std::process::ExitCode;

use clap::builder::BoolishValueParser;
use clap::{ArgAction, ArgGroup, Parser, Subcommand};
use serde_json::{json, Value};

use kloost::charsum::{char_sum, curve_power_sums, lemma10_closed, lpoly_build, SumKind};
use kloost::cubic::{count_irreducible_cubics, curve_point_count};
use kloost::distribution::{distribution_closed, distribution_brute, distribution_fast, DistMode, DistTable};
use kloost::equation::{count_solutions, enumerate_solutions};
use kloost::kloosterman::{
    classify24, classify_all, congruence_mod3, congruence_mod8, kloosterman_direct, Classification,
    Mod3Verdict,
};
use kloost::verify::{run_suite, Suite, Verdict};
use kloost::{Error, FieldContext, FieldElement};

use output::{FieldInfo, Format, OutputRecord, Report, Status};

#[derive(Parser, Debug)]
#[command(name = "kloost", version, about = "Binary Kloosterman sums over GF(2^m)")]
struct Cli {
    /// Override the field modulus (hex encoding, bit i = coefficient of x^i).
    #[arg(long, global = true, value_parser = parse_hex_u64)]
    modulus: Option<u64>,
    #[arg(long, global = true, value_enum, default_value = "json")]
    format: Format,
    /// Lift enumeration caps.
    #[arg(
        long,
        global = true,
        env = "KLOOST_FORCE",
        action = ArgAction::SetTrue,
        value_parser = BoolishValueParser::new()
    )]
    force: bool,
    /// Accepted for interface stability; nothing here is randomized.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate K(a) directly, with its residues.
    Ksum {
        #[arg(long)]
        m: u32,
        #[arg(long)]
        a: String,
    },
    /// Classify K(a) mod 24 from trace data (m even).
    #[command(group(ArgGroup::new("target").required(true).args(["a", "all"])))]
    Classify {
        #[arg(long)]
        m: u32,
        #[arg(long)]
        a: Option<String>,
        #[arg(long)]
        all: bool,
    },
    /// Number of a in F_q* per residue class of K(a) mod 24 (m even).
    Distribution {
        #[arg(long)]
        m: u32,
        #[arg(long, value_parser = ["fast", "closed", "brute"])]
        mode: String,
    },
    /// Solutions of x^(2^k) + x^(2^k - 1) = a.
    SolveEq {
        #[arg(long)]
        m: u32,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        a: String,
    },
    /// Points on y² + cy + xy = x³ and the irreducible-cubic count P₃(1, c).
    CurveCount {
        #[arg(long)]
        m: u32,
        #[arg(long)]
        c: String,
    },
    /// Character sums of x³, x⁹, x³ + x, x⁹ + x³ against their closed forms.
    Expsums {
        #[arg(long)]
        m: u32,
    },
    /// L-polynomial of y² + y = x⁹ + x³ over GF(2).
    Lpoly,
    /// Run verification suites over a range of degrees.
    Verify {
        #[arg(long)]
        m_min: u32,
        #[arg(long)]
        m_max: u32,
        #[arg(long, default_value = "all")]
        suite: String,
    },
}

enum CliError {
    Usage(String),
    Cap(String),
    Failed(String),
    Io(io::Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> CliError {
        match e {
            Error::FieldTooLarge { .. } => CliError::Cap(format!("{e} (use --force to lift)")),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> CliError {
        CliError::Io(e)
    }
}

fn parse_hex_u64(s: &str) -> Result<u64, String> {
    let t = s.trim_start_matches("0x").trim_start_matches("0X");
    u64::from_str_radix(t, 16).map_err(|e| format!("invalid hex {s:?}: {e}"))
}

struct Env {
    modulus: Option<u64>,
    force: bool,
}

impl Env {
    fn field(&self, m: u32) -> Result<FieldContext, CliError> {
        let ctx = FieldContext::new(m, self.modulus)?;
        Ok(if self.force { ctx.lift_caps() } else { ctx })
    }
}

fn nonzero(ctx: &FieldContext, hex: &str) -> Result<FieldElement, CliError> {
    let a = ctx.parse_hex(hex)?;
    if a.is_zero() {
        return Err(Error::ZeroInput.into());
    }
    Ok(a)
}

fn record(command: &'static str, ctx: Option<&FieldContext>, payload: Value) -> OutputRecord {
    OutputRecord { command, field: ctx.map(FieldInfo::of), payload, status: None }
}

fn opt_hex(e: Option<FieldElement>) -> Value {
    e.map_or(Value::Null, |x| Value::String(x.to_hex()))
}

fn opt_cell<T: ToString>(v: Option<T>) -> String {
    v.map_or_else(String::new, |x| x.to_string())
}

fn mod3_json(v: Mod3Verdict) -> Value {
    match v {
        Mod3Verdict::Residue(r) => json!(r),
        Mod3Verdict::NonzeroUndetermined => json!("nonzero_undetermined"),
    }
}

fn ksum(env: &Env, m: u32, a: &str) -> Result<Report, CliError> {
    let ctx = env.field(m)?;
    let a = nonzero(&ctx, a)?;
    let k = kloosterman_direct(&ctx, a)?.value();
    let mod8 = congruence_mod8(&ctx, a)?;
    let mod3 = congruence_mod3(&ctx, a)?;
    let mut rep = Report::new(&["m", "a", "value", "mod8", "mod3", "mod24", "tr_a"]);
    rep.records.push(record(
        "ksum",
        Some(&ctx),
        json!({
            "a": a.to_hex(),
            "value": k,
            "tr_a": ctx.tr(a),
            "mod8": k.rem_euclid(8),
            "mod3": k.rem_euclid(3),
            "mod24": k.rem_euclid(24),
            "predicted_mod8": mod8,
            "predicted_mod3": mod3_json(mod3),
        }),
    ));
    rep.rows.push(vec![
        m.to_string(),
        a.to_hex(),
        k.to_string(),
        k.rem_euclid(8).to_string(),
        k.rem_euclid(3).to_string(),
        k.rem_euclid(24).to_string(),
        ctx.tr(a).to_string(),
    ]);
    Ok(rep)
}

fn classification_json(c: &Classification) -> Value {
    json!({
        "a": c.a.to_hex(),
        "case": c.case.as_str(),
        "witness": c.witness.to_hex(),
        "eps": c.eps,
        "delta": c.delta,
        "tr_a": c.tr_a,
        "mod8": c.mod8,
        "mod3": c.mod3,
        "mod24": c.mod24,
    })
}

fn classify(env: &Env, m: u32, a: Option<&str>) -> Result<Report, CliError> {
    let ctx = env.field(m)?;
    let list = match a {
        Some(a) => vec![classify24(&ctx, nonzero(&ctx, a)?)?],
        None => classify_all(&ctx)?,
    };
    let mut rep = Report::new(&["m", "a", "case", "witness", "eps", "delta", "tr_a", "mod8", "mod3", "mod24"]);
    let items: Vec<Value> = list.iter().map(classification_json).collect();
    rep.records.push(record("classify", Some(&ctx), json!({ "classifications": items })));
    for c in &list {
        rep.rows.push(vec![
            m.to_string(),
            c.a.to_hex(),
            c.case.as_str().to_string(),
            c.witness.to_hex(),
            opt_cell(c.eps),
            opt_cell(c.delta),
            c.tr_a.to_string(),
            c.mod8.to_string(),
            c.mod3.to_string(),
            c.mod24.to_string(),
        ]);
    }
    Ok(rep)
}

fn distribution(env: &Env, m: u32, mode: &str) -> Result<Report, CliError> {
    let mode: DistMode = mode.parse()?;
    let (ctx, table): (Option<FieldContext>, DistTable) = match mode {
        DistMode::Closed => {
            // Closed forms need no field, but record it when one can be built.
            let ctx = if m <= kloost::field::MAX_DEGREE { env.field(m).ok() } else { None };
            (ctx, distribution_closed(m)?)
        }
        DistMode::Fast => {
            let ctx = env.field(m)?;
            let t = distribution_fast(&ctx)?;
            (Some(ctx), t)
        }
        DistMode::Brute => {
            let ctx = env.field(m)?;
            let t = distribution_brute(&ctx)?;
            (Some(ctx), t)
        }
    };
    let mode_name = match mode {
        DistMode::Fast => "fast",
        DistMode::Closed => "closed",
        DistMode::Brute => "brute",
    };
    let counts: serde_json::Map<String, Value> =
        table.counts.iter().map(|(k, v)| (k.to_string(), json!(v))).collect();
    let mut rep = Report::new(&["m", "mode", "residue", "count"]);
    rep.records.push(record(
        "distribution",
        ctx.as_ref(),
        json!({ "mode": mode_name, "m": m, "counts": counts, "total": table.total() }),
    ));
    for (k, v) in &table.counts {
        rep.rows.push(vec![m.to_string(), mode_name.to_string(), k.to_string(), v.to_string()]);
    }
    Ok(rep)
}

fn solve_eq(env: &Env, m: u32, k: u32, a: &str) -> Result<Report, CliError> {
    let ctx = env.field(m)?;
    let a = nonzero(&ctx, a)?;
    let r = count_solutions(&ctx, k, a)?;
    let sols = enumerate_solutions(&ctx, k, a)?;
    let sol_hex: Vec<String> = sols.iter().map(|x| x.to_hex()).collect();
    let mut rep = Report::new(&["m", "k", "a", "s", "case", "count", "root_b", "solutions"]);
    rep.records.push(record(
        "solve-eq",
        Some(&ctx),
        json!({
            "k": k,
            "a": a.to_hex(),
            "s": r.s,
            "case": r.case.as_str(),
            "count": r.count,
            "root_b": opt_hex(r.root_b),
            "solutions": sol_hex,
        }),
    ));
    rep.rows.push(vec![
        m.to_string(),
        k.to_string(),
        a.to_hex(),
        r.s.to_string(),
        r.case.as_str().to_string(),
        r.count.to_string(),
        opt_cell(r.root_b.map(|b| b.to_hex())),
        sol_hex.join(";"),
    ]);
    Ok(rep)
}

fn curve_count(env: &Env, m: u32, c: &str) -> Result<Report, CliError> {
    let ctx = env.field(m)?;
    let c = nonzero(&ctx, c)?;
    let points = curve_point_count(&ctx, c)?;
    let p3 = count_irreducible_cubics(&ctx, FieldElement::ONE, c)?;
    let epsilon = (c == FieldElement::ONE) as u64;
    let predicted = if epsilon == 0 {
        let c3 = ctx.pow(c, 3);
        let k = kloosterman_direct(&ctx, ctx.mul(c3, c) + c3)?.value();
        Some(ctx.q() as i64 + 1 + ctx.chi(c) as i64 * k)
    } else {
        None
    };
    let mut rep = Report::new(&["m", "c", "points", "p3", "epsilon", "kloosterman_prediction"]);
    rep.records.push(record(
        "curve-count",
        Some(&ctx),
        json!({
            "c": c.to_hex(),
            "points": points,
            "p3": p3,
            "epsilon": epsilon,
            "census_matches_points": 3 * p3 + epsilon == points,
            "kloosterman_prediction": predicted,
        }),
    ));
    rep.rows.push(vec![
        m.to_string(),
        c.to_hex(),
        points.to_string(),
        p3.to_string(),
        epsilon.to_string(),
        opt_cell(predicted),
    ]);
    Ok(rep)
}

fn expsums(env: &Env, m: u32) -> Result<Report, CliError> {
    let ctx = env.field(m)?;
    let mut rep = Report::new(&["m", "kind", "full_sum", "star_sum", "closed"]);
    let mut sums = serde_json::Map::new();
    for kind in SumKind::ALL {
        let full = char_sum(&ctx, &kind.poly())?;
        let closed = if m % 2 == 0 { Some(lemma10_closed(kind, m)?) } else { None };
        sums.insert(
            kind.as_str().to_string(),
            json!({ "full_sum": full, "star_sum": full - 1, "closed": closed }),
        );
        rep.rows.push(vec![
            m.to_string(),
            kind.as_str().to_string(),
            full.to_string(),
            (full - 1).to_string(),
            opt_cell(closed),
        ]);
    }
    rep.records.push(record("expsums", Some(&ctx), json!({ "sums": sums })));
    Ok(rep)
}

fn poly_mul(a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

const LPOLY_CHECK_DEGREES: u32 = 8;

fn lpoly() -> Result<Report, CliError> {
    let f = SumKind::X9PlusX3.poly();
    let brute = curve_power_sums(&f, LPOLY_CHECK_DEGREES)?;
    let l = lpoly_build([brute[0], brute[1], brute[2], brute[3]])?;
    let predicted = l.power_sums(LPOLY_CHECK_DEGREES)?;
    // (2t² - 2t + 1)(2t² + 2t + 1)²(2t² + 1), constant term first.
    let plus = [1, 2, 2];
    let product = poly_mul(&poly_mul(&poly_mul(&[1, -2, 2], &plus), &plus), &[1, 0, 2]);
    let factorization_ok = product == l.coeffs;
    let mut rep = Report::new(&["index", "coefficient", "brute_sum", "predicted_sum"]);
    rep.records.push(record(
        "lpoly",
        None,
        json!({
            "coefficients": l.coeffs,
            "brute_power_sums": brute,
            "predicted_power_sums": predicted,
            "factorization_ok": factorization_ok,
            "functional_equation_ok": l.satisfies_functional_equation(),
        }),
    ));
    for i in 0..=LPOLY_CHECK_DEGREES as usize {
        let (b, p) = if i == 0 { (None, None) } else { (Some(brute[i - 1]), Some(predicted[i - 1])) };
        rep.rows.push(vec![i.to_string(), l.coeffs[i].to_string(), opt_cell(b), opt_cell(p)]);
    }
    Ok(rep)
}

fn verify(env: &Env, m_min: u32, m_max: u32, suite: &str, out: &mut impl Write, format: Format) -> Result<(), CliError> {
    let suites: Vec<Suite> = if suite == "all" {
        Suite::ALL.to_vec()
    } else {
        vec![suite.parse().map_err(|e: Error| CliError::Usage(e.to_string()))?]
    };
    if m_min > m_max {
        return Err(CliError::Usage(format!("--m-min {m_min} exceeds --m-max {m_max}")));
    }
    let ctxs: Vec<FieldContext> = (m_min..=m_max).map(|m| env.field(m)).collect::<Result<_, _>>()?;
    if !env.force {
        for ctx in &ctxs {
            for &s in &suites {
                let applies = !(matches!(s, Suite::Lemma10 | Suite::Lemma12 | Suite::Thm13 | Suite::Thm16)
                    && ctx.m() % 2 == 1);
                if applies && ctx.m() > s.cap() {
                    return Err(CliError::Cap(format!(
                        "suite {s} at m = {} exceeds its cap of {} (use --force to lift)",
                        ctx.m(),
                        s.cap()
                    )));
                }
            }
        }
    }

    let mut rep = Report::new(&["suite", "m", "status", "checks", "detail"]);
    let mut failure = None;
    'outer: for &s in &suites {
        for ctx in &ctxs {
            let o = run_suite(ctx, s)?;
            let (status, detail) = match &o.verdict {
                Verdict::Pass => (Status::Pass, String::new()),
                Verdict::Skipped(why) => (Status::Skipped, why.to_string()),
                Verdict::Fail(c) => (Status::Fail, c.to_string()),
            };
            rep.records.push(OutputRecord {
                command: "verify",
                field: Some(FieldInfo::of(ctx)),
                payload: json!({ "suite": s.name(), "checks": o.checks, "detail": detail }),
                status: Some(status),
            });
            rep.rows.push(vec![
                s.name().to_string(),
                ctx.m().to_string(),
                format!("{status:?}").to_lowercase(),
                o.checks.to_string(),
                detail.clone(),
            ]);
            if status == Status::Fail {
                failure = Some(format!("suite {s}, m = {}: {detail}", ctx.m()));
                break 'outer;
            }
        }
    }
    rep.render(format, out)?;
    match failure {
        Some(msg) => Err(CliError::Failed(msg)),
        None => Ok(()),
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let env = Env { modulus: cli.modulus, force: cli.force };
    let stdout = io::stdout();
    let mut out = stdout.lock();
    let rep = match &cli.command {
        Command::Ksum { m, a } => ksum(&env, *m, a)?,
        Command::Classify { m, a, all: _ } => classify(&env, *m, a.as_deref())?,
        Command::Distribution { m, mode } => distribution(&env, *m, mode)?,
        Command::SolveEq { m, k, a } => solve_eq(&env, *m, *k, a)?,
        Command::CurveCount { m, c } => curve_count(&env, *m, c)?,
        Command::Expsums { m } => expsums(&env, *m)?,
        Command::Lpoly => lpoly()?,
        Command::Verify { m_min, m_max, suite } => {
            return verify(&env, *m_min, *m_max, suite, &mut out, cli.format);
        }
    };
    rep.render(cli.format, &mut out)?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Failed(msg)) => {
            eprintln!("verification failed: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Cap(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
        Err(CliError::Io(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
