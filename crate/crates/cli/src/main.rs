use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde_json::{json, Map, Value};

use cyclemotive::chow::{
    chow_congruence_targets, chow_htilde, chow_invariant_closed, chow_invariant_recursive, chow_series, ChowError,
    ChowIndex,
};
use cyclemotive::ffcount::{toric_count, CongruenceReport};
use cyclemotive::io::{
    bigint_to_json, congruence_to_json, grading_from_json, laurent_to_json, measure_value_to_json, poly_to_json,
    read_expr, read_fan, read_json, render_json, series_to_json, IoError,
};
use cyclemotive::motive::{eval_measure, Measure, MotiveError};
use cyclemotive::toric::Grading;
use cyclemotive::verify::{run_suites, SUITES};

const EXIT_VERIFY: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_UNSUPPORTED: u8 = 3;
const EXIT_MISMATCH: u8 = 4;

#[derive(Parser)]
#[command(name = "cyclemotive", version, about = "Exact motivic invariants and Chow variety fixed-point formulas")]
struct Cli {
    /// Emit canonical JSON instead of human-readable text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Evaluate an expression file under a measure.
    Motive {
        /// e-poly, euler, h-tilde, h-bar, count-poly or count:q[,m]
        #[arg(long)]
        measure: String,
        file: PathBuf,
    },
    /// Chow-variety invariants of projective space.
    Chow {
        #[arg(short)]
        p: u32,
        #[arg(short)]
        d: Option<u32>,
        #[arg(short)]
        n: u32,
        #[arg(long, value_enum)]
        method: Option<Method>,
        /// Print the generating series up to degree D.
        #[arg(long, value_name = "D")]
        series: Option<u32>,
        /// Print the image in Z[u,u^-1].
        #[arg(long)]
        htilde: bool,
        /// Congruence report over F_{q^m}, given as q,m.
        #[arg(long, value_name = "q,m")]
        congruence: Option<String>,
    },
    /// Toric variety from a fan file.
    Toric {
        file: PathBuf,
        #[arg(long)]
        census: bool,
        #[arg(long = "e-poly")]
        e_poly: bool,
        #[arg(long)]
        lambda: bool,
        /// Point count over F_{q^m}, given as q,m.
        #[arg(long, value_name = "q,m")]
        count: Option<String>,
        /// Euler series of p-cycles to total degree D; an optional grading file
        /// identifies orbit closures.
        #[arg(long = "euler-series", value_name = "p,D[,grading]")]
        euler_series: Option<String>,
    },
    /// Run built-in verification suites.
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Closed,
    Recursive,
    Both,
}

struct Failure {
    code: u8,
    msg: String,
}

impl Failure {
    fn input(msg: impl ToString) -> Self {
        Self {
            code: EXIT_INPUT,
            msg: msg.to_string(),
        }
    }
}

impl From<IoError> for Failure {
    fn from(e: IoError) -> Self {
        Failure::input(e)
    }
}

impl From<MotiveError> for Failure {
    fn from(e: MotiveError) -> Self {
        let code = match e {
            MotiveError::NotCountable { .. } => EXIT_UNSUPPORTED,
            _ => EXIT_INPUT,
        };
        Self {
            code,
            msg: e.to_string(),
        }
    }
}

impl From<ChowError> for Failure {
    fn from(e: ChowError) -> Self {
        Failure::input(e)
    }
}

/// Output collected by a command: ordered keyed items plus an exit code.
/// Items without human text appear only in JSON.
struct Output {
    items: Vec<(&'static str, Option<String>, Value)>,
    code: u8,
}

impl Output {
    fn new() -> Self {
        Self {
            items: Vec::new(),
            code: 0,
        }
    }

    fn push(&mut self, key: &'static str, human: String, json: Value) {
        self.items.push((key, Some(human), json));
    }

    fn push_json(&mut self, key: &'static str, json: Value) {
        self.items.push((key, None, json));
    }

    fn emit(&self, as_json: bool) {
        if as_json {
            let map: Map<String, Value> = self.items.iter().map(|(k, _, v)| (k.to_string(), v.clone())).collect();
            print!("{}", render_json(&Value::Object(map)));
            return;
        }
        let human: Vec<_> = self.items.iter().filter_map(|(k, h, _)| h.as_ref().map(|h| (k, h))).collect();
        if let [(_, h)] = human.as_slice() {
            println!("{h}");
        } else {
            for (k, h) in human {
                println!("{k}: {h}");
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.cmd {
        Cmd::Motive { measure, file } => cmd_motive(&measure, &file),
        Cmd::Chow {
            p,
            d,
            n,
            method,
            series,
            htilde,
            congruence,
        } => cmd_chow(p, d, n, method, series, htilde, congruence.as_deref()),
        Cmd::Toric {
            file,
            census,
            e_poly,
            lambda,
            count,
            euler_series,
        } => cmd_toric(&file, census, e_poly, lambda, count.as_deref(), euler_series.as_deref()),
        Cmd::Verify { suite } => cmd_verify(&suite),
    };
    match result {
        Ok(out) => {
            out.emit(cli.json);
            ExitCode::from(out.code)
        }
        Err(f) => {
            eprintln!("error: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}

fn parse_u<T: std::str::FromStr>(s: &str, what: &str) -> Result<T, Failure> {
    s.trim().parse().map_err(|_| Failure::input(format!("invalid {what} `{s}`")))
}

/// Parses `q` or `q,m`; `m` defaults to 1.
fn parse_q_m(s: &str) -> Result<(BigInt, u32), Failure> {
    let mut parts = s.split(',');
    let q: BigInt = parse_u(parts.next().unwrap_or(""), "field size")?;
    let m = match parts.next() {
        Some(m) => parse_u(m, "extension degree")?,
        None => 1,
    };
    if parts.next().is_some() {
        return Err(Failure::input(format!("expected q[,m], got `{s}`")));
    }
    Ok((q, m))
}

fn parse_measure(s: &str) -> Result<Measure, Failure> {
    Ok(match s {
        "e-poly" => Measure::EPoly,
        "euler" => Measure::Euler,
        "h-tilde" => Measure::HTildeQuotient,
        "h-bar" => Measure::HBarQuotient,
        "count-poly" => Measure::CountPoly,
        _ => match s.strip_prefix("count:") {
            Some(rest) => {
                let (q, m) = parse_q_m(rest)?;
                Measure::count_at(q, m)?
            }
            None => return Err(Failure::input(format!("unknown measure `{s}`"))),
        },
    })
}

fn cmd_motive(measure: &str, file: &Path) -> Result<Output, Failure> {
    let m = parse_measure(measure)?;
    let expr = read_expr(file)?;
    let value = eval_measure(&expr, &m)?;
    let mut out = Output::new();
    out.push_json("measure", json!(measure));
    out.push("value", value.to_string(), measure_value_to_json(&value));
    Ok(out)
}

fn congruence_human(r: &CongruenceReport, lambda: &BigInt) -> String {
    let mark = |ok: Option<bool>| match ok {
        Some(true) => "✓",
        Some(false) => "✗",
        None => "?",
    };
    let qm1 = &r.q - 1u32;
    match &r.actual {
        Some(a) => format!(
            "{a} ≡ {} mod {} {}, ≡ {lambda} mod {qm1} {}",
            r.expected_mod_q,
            r.q,
            mark(r.holds_mod_q),
            mark(r.holds_mod_q_minus_1)
        ),
        None => format!(
            "{}: expected ≡ {} mod {}, ≡ {lambda} mod {qm1}",
            r.note.as_deref().unwrap_or("untested"),
            r.expected_mod_q,
            r.q
        ),
    }
}

fn cmd_chow(
    p: u32,
    d: Option<u32>,
    n: u32,
    method: Option<Method>,
    series: Option<u32>,
    htilde: bool,
    congruence: Option<&str>,
) -> Result<Output, Failure> {
    let mut out = Output::new();
    let needs_d = method.is_some() || htilde || congruence.is_some() || series.is_none();
    let idx = match (d, needs_d) {
        (Some(d), _) => Some(ChowIndex::new(p, d, n)?),
        (None, true) => return Err(Failure::input("-d is required unless only --series is requested")),
        (None, false) => {
            ChowIndex::new(p, 0, n)?;
            None
        }
    };

    if let Some(idx) = idx.filter(|_| method.is_some() || (!htilde && congruence.is_none() && series.is_none())) {
        match method.unwrap_or(Method::Closed) {
            Method::Closed => {
                let v = chow_invariant_closed(idx);
                out.push("value", v.to_string(), bigint_to_json(&v));
            }
            Method::Recursive => {
                let v = chow_invariant_recursive(idx);
                out.push("value", v.to_string(), bigint_to_json(&v));
            }
            Method::Both => {
                let closed = chow_invariant_closed(idx);
                let rec = chow_invariant_recursive(idx);
                if closed != rec {
                    out.code = EXIT_MISMATCH;
                    out.push("closed", closed.to_string(), bigint_to_json(&closed));
                    out.push("recursive", rec.to_string(), bigint_to_json(&rec));
                    eprintln!("error: closed form {closed} and recursion {rec} disagree");
                } else {
                    out.push("value", closed.to_string(), bigint_to_json(&closed));
                }
            }
        }
    }
    if let Some(order) = series {
        let s = chow_series(p, n, order)?;
        let coeffs = s.univariate_coeffs().expect("chow series is univariate");
        let human = coeffs.iter().map(ToString::to_string).collect::<Vec<_>>().join(",");
        out.push("series", human, series_to_json(&s));
    }
    if let Some(idx) = idx {
        if htilde {
            let h = chow_htilde(idx);
            out.push("htilde", h.to_string(), laurent_to_json(&h));
        }
        if let Some(c) = congruence {
            let (q, m) = parse_q_m(c)?;
            let q: u64 = u64::try_from(&q).map_err(|_| Failure::input(format!("field size {q} out of range")))?;
            let r = chow_congruence_targets(idx, q, m)?;
            if r.is_tested() && !r.passed() {
                out.code = EXIT_MISMATCH;
            }
            let lambda = chow_invariant_closed(idx);
            out.push("congruence", congruence_human(&r, &lambda), congruence_to_json(&r));
        }
    }
    Ok(out)
}

fn cmd_toric(
    file: &Path,
    census: bool,
    e_poly: bool,
    lambda: bool,
    count: Option<&str>,
    euler_series: Option<&str>,
) -> Result<Output, Failure> {
    let fan = read_fan(file)?;
    let mut out = Output::new();
    let nothing = !census && !e_poly && !lambda && count.is_none() && euler_series.is_none();
    if census || nothing {
        let c = fan.census();
        let human = c.iter().map(ToString::to_string).collect::<Vec<_>>().join(",");
        out.push("census", human, json!(c));
    }
    if e_poly || nothing {
        let e = fan.e_poly();
        out.push("e_poly", e.to_string(), poly_to_json(&e));
    }
    if lambda || nothing {
        out.push("lambda", fan.lambda().to_string(), json!(fan.lambda()));
    }
    if let Some(c) = count {
        let (q, m) = parse_q_m(c)?;
        let v = toric_count(&fan, &q, m).map_err(Failure::input)?;
        out.push("count", v.to_string(), bigint_to_json(&v));
    }
    if let Some(spec) = euler_series {
        let mut parts = spec.splitn(3, ',');
        let p: usize = parse_u(parts.next().unwrap_or(""), "cycle dimension")?;
        let order: u32 = parse_u(
            parts
                .next()
                .ok_or_else(|| Failure::input(format!("expected p,D[,grading-file], got `{spec}`")))?,
            "order",
        )?;
        let grading = match parts.next() {
            Some(path) => grading_from_json(&read_json(Path::new(path))?)?,
            None => Grading::Free,
        };
        let s = fan.euler_series(p, &grading, order).map_err(Failure::input)?;
        out.push("euler_series", s.to_string(), series_to_json(&s));
    }
    Ok(out)
}

fn cmd_verify(suite: &str) -> Result<Output, Failure> {
    let names: Vec<&str> = if suite == "all" {
        SUITES.to_vec()
    } else if SUITES.contains(&suite) {
        vec![suite]
    } else {
        return Err(Failure::input(format!(
            "unknown suite `{suite}`; expected one of {} or all",
            SUITES.join(", ")
        )));
    };
    let reports = run_suites(&names);
    let all = reports.iter().all(|r| r.passed());
    let mut human = Vec::new();
    for r in &reports {
        let status = if r.passed() { "pass" } else { "FAIL" };
        human.push(format!("{}: {status} ({} checks)", r.name, r.checks));
        for f in &r.failures {
            human.push(format!("  {f}"));
        }
    }
    let mut out = Output::new();
    out.push_json("passed", json!(all));
    out.push("suites", human.join("\n"), Value::Array(reports.iter().map(|r| r.to_json()).collect()));
    if !all {
        out.code = EXIT_VERIFY;
    }
    Ok(out)
}
