use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::mpsc;
use std::thread;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use relpos::expr::WordSpec;
use relpos::operators::Pipeline;
use relpos::position::{position_rows, positions_csv, PositionRow};
use relpos::reconstruct::{reconstruct, RSpec, ReconstructionOutcome};
use relpos::spectral::{analyze, SpectralReport};
use relpos::verify::{self, Certificate, Scale, THEOREMS};
use relpos::word::set_index_budget;
use relpos::{BinarySubstitution, Error, WordStream};

const EXIT_VIOLATION: u8 = 2;
const EXIT_BUDGET: u8 = 3;
const EXIT_INPUT: u8 = 4;

/// Relative position functions of binary words.
#[derive(Parser, Debug)]
#[command(name = "relpos", version)]
struct Cli {
    /// Largest word index any stream may expand to.
    #[arg(long, global = true, value_name = "N")]
    max_index: Option<usize>,

    /// Abort with exit code 3 after this many seconds.
    #[arg(long, global = true, value_name = "SECS")]
    timeout: Option<f64>,

    /// Output format; each command has its own default.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
    Human,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print a prefix of a word, e.g. `fib`, `periodic:aab`, `tm | clone:2`.
    Generate {
        spec: String,
        #[arg(long, default_value_t = 32)]
        length: usize,
    },
    /// Positions, r and differences for n = 1..=N.
    Positions {
        spec: String,
        #[arg(long, default_value_t = 20)]
        n: usize,
    },
    /// Rebuild a word from its relative position function.
    Reconstruct {
        #[command(flatten)]
        source: RSource,
        #[arg(long, default_value_t = 10)]
        pairs: usize,
    },
    /// Apply an operator pipeline to a word.
    Apply {
        spec: String,
        #[arg(long)]
        pipeline: String,
        #[arg(long, default_value_t = 32)]
        length: usize,
    },
    /// Spectral report of a substitution.
    Analyze { substitution: String },
    /// Check an identity, or all of them.
    Verify {
        id: Option<String>,
        #[arg(long, conflicts_with = "id")]
        all: bool,
        #[arg(long, conflicts_with_all = ["id", "all"])]
        list: bool,
        /// Number of series terms.
        #[arg(long)]
        n: Option<usize>,
        /// Word length for the exhaustive searches.
        #[arg(long)]
        len: Option<usize>,
        #[arg(long, default_value_t = Scale::default().seed)]
        seed: u64,
    },
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct RSource {
    /// `k*n+j`, `fib` or `tm`.
    #[arg(long, allow_hyphen_values = true)]
    formula: Option<String>,
    /// Whitespace-separated values r(1), r(2), …; `#` starts a comment.
    #[arg(long)]
    file: Option<PathBuf>,
    #[arg(long, value_parser = ["fib", "tm"])]
    preset: Option<String>,
}

/// Failure of a command, carrying its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            e if e.is_budget() => EXIT_BUDGET,
            Error::MalformedSupertile { .. } => EXIT_VIOLATION,
            _ => EXIT_INPUT,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<relpos::ParseError> for Failure {
    fn from(e: relpos::ParseError) -> Self {
        Error::from(e).into()
    }
}

/// Text to print and the exit code to finish with.
struct Output {
    text: String,
    code: u8,
}

impl Output {
    fn ok(text: String) -> Self {
        Output { text, code: 0 }
    }
}

fn json<T: serde::Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serializes");
    s.push('\n');
    s
}

fn build(spec: &str) -> Result<WordStream, Failure> {
    Ok(spec.parse::<WordSpec>()?.build()?)
}

fn emit_word(w: &WordStream, length: usize, format: Option<Format>) -> Result<Output, Failure> {
    Ok(Output::ok(match format {
        Some(Format::Json) => {
            let mut s = w.export(length)?.to_json();
            s.push('\n');
            s
        }
        _ => format!("{}\n", w.prefix(length)?),
    }))
}

fn human_rows(rows: &[PositionRow]) -> String {
    let mut out = format!(
        "{:>8} {:>10} {:>10} {:>8} {:>8} {:>8} {:>8}\n",
        "n", "p_a", "p_b", "r", "Δp_a", "Δp_b", "Δr"
    );
    for r in rows {
        let _ = writeln!(
            out,
            "{:>8} {:>10} {:>10} {:>8} {:>8} {:>8} {:>8}",
            r.n, r.p_a, r.p_b, r.r, r.delta_pa, r.delta_pb, r.delta_r
        );
    }
    out
}

fn cmd_reconstruct(source: &RSource, pairs: usize, format: Option<Format>) -> Result<Output, Failure> {
    let r = if let Some(f) = &source.formula {
        RSpec::parse_formula(f)?
    } else if let Some(p) = &source.preset {
        RSpec::parse_formula(p)?
    } else {
        let path = source.file.as_ref().expect("clap requires one source");
        let text = std::fs::read_to_string(path).map_err(|e| Failure {
            code: EXIT_INPUT,
            message: format!("cannot read {}: {e}", path.display()),
        })?;
        RSpec::parse_list(&text)?
    };
    let outcome = reconstruct(&r, pairs)?;
    let json_format = format == Some(Format::Json);
    Ok(match outcome {
        ReconstructionOutcome::Success(pw) => {
            let word = pw.determined_prefix().to_string();
            let text = if json_format {
                json(&serde_json::json!({
                    "status": "success",
                    "r": r.description(),
                    "pairs": pairs,
                    "determined_length": pw.determined_len(),
                    "word": word,
                }))
            } else {
                format!("{word}\n")
            };
            Output::ok(text)
        }
        ReconstructionOutcome::Failure(v) => {
            let text = if json_format {
                json(&serde_json::json!({ "status": "violation", "r": r.description(), "violation": v }))
            } else {
                format!("{v}\n")
            };
            Output {
                text,
                code: EXIT_VIOLATION,
            }
        }
    })
}

fn signed_term(out: &mut String, coef: i64, var: &str) {
    if coef == 0 {
        return;
    }
    let sign = if coef < 0 { "-" } else { "+" };
    let mag = coef.unsigned_abs();
    let body = match (mag, var) {
        (m, "") => m.to_string(),
        (1, v) => v.to_string(),
        (m, v) => format!("{m}{v}"),
    };
    if out.is_empty() {
        if coef < 0 {
            out.push('-');
        }
        out.push_str(&body);
    } else {
        let _ = write!(out, " {sign} {body}");
    }
}

fn human_report(r: &SpectralReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "substitution   {}", r.substitution);
    let _ = writeln!(out, "matrix         {}", r.matrix);
    let _ = writeln!(out, "primitive      {}", r.primitive);
    if let (Some(pf), Some(lim)) = (&r.perron_frobenius, &r.limits) {
        let _ = writeln!(out, "lambda_pf      {}", pf.lambda_pf);
        let _ = writeln!(out, "conjugate      {}", pf.conjugate);
        let _ = writeln!(out, "u              {}", pf.u);
        let _ = writeln!(out, "freq(a)        {}", lim.freq_a);
        let _ = writeln!(out, "freq(b)        {}", lim.freq_b);
        let _ = writeln!(out, "lim p_a(n)/n   {}", lim.lim_pa_over_n);
        let _ = writeln!(out, "lim p_b(n)/n   {}", lim.lim_pb_over_n);
        let _ = writeln!(out, "lim r(n)/n     {}", lim.lim_r_over_n);
    }
    if let Some((m, n)) = r.golden_form {
        let _ = writeln!(out, "golden form    m = {m}, n = {n}");
    }
    match r.linear_class {
        Some(k) => {
            let _ = writeln!(out, "linear class   {k}");
        }
        None if r.primitive => {
            let _ = writeln!(out, "linear class   none");
        }
        None => {}
    }
    if let Some(p) = &r.pisa {
        let f = &p.closed_form;
        let mut pb = String::new();
        signed_term(&mut pb, f.a, "p_a(n)");
        signed_term(&mut pb, f.b, "n");
        signed_term(&mut pb, f.c, "");
        let mut rr = String::new();
        signed_term(&mut rr, f.a - 1, "p_a(n)");
        signed_term(&mut rr, f.b, "n");
        signed_term(&mut rr, f.c, "");
        if rr.is_empty() {
            rr.push('0');
        }
        let _ = writeln!(out, "pisa           k = {}, l = {}, m = {} ({:?})", p.k, p.l, p.m, p.pisot);
        let _ = writeln!(out, "closed form    p_b(n) = {pb}");
        let _ = writeln!(out, "               r(n) = {rr}");
    }
    out
}

fn cmd_verify(
    id: Option<&str>,
    all: bool,
    list: bool,
    scale: Scale,
    format: Option<Format>,
) -> Result<Output, Failure> {
    if list {
        let mut out = String::new();
        for t in THEOREMS {
            let _ = writeln!(out, "{:<22} {}", t.id, t.statement);
        }
        return Ok(Output::ok(out));
    }
    let selected: Vec<_> = match (id, all) {
        (Some(id), _) => vec![verify::find(id).ok_or_else(|| Failure {
            code: EXIT_INPUT,
            message: format!("unknown theorem id `{id}`; see `relpos verify --list`"),
        })?],
        (None, true) => THEOREMS.iter().collect(),
        (None, false) => {
            return Err(Failure {
                code: EXIT_INPUT,
                message: "name a theorem id or pass --all".into(),
            })
        }
    };
    let results: Vec<Result<Certificate, Error>> = thread::scope(|s| {
        let handles: Vec<_> = selected.iter().map(|t| s.spawn(move || t.run(&scale))).collect();
        handles.into_iter().map(|h| h.join().expect("check panicked")).collect()
    });
    let mut certs = Vec::new();
    for r in results {
        certs.push(r?);
    }
    let failed = certs.iter().any(|c| !c.passed);
    let text = match format {
        Some(Format::Human) => {
            let mut out = String::new();
            for c in &certs {
                let verdict = if c.passed { "PASS" } else { "FAIL" };
                let _ = writeln!(out, "{verdict} {:<22} {:>10} checks  {}", c.id, c.checked, c.detail);
            }
            out
        }
        _ if certs.len() == 1 => json(&certs[0]),
        _ => json(&certs),
    };
    Ok(Output {
        text,
        code: if failed { EXIT_VIOLATION } else { 0 },
    })
}

fn run(cli: Cli) -> Result<Output, Failure> {
    let format = cli.format;
    match cli.command {
        Command::Generate { spec, length } => emit_word(&build(&spec)?, length, format),
        Command::Positions { spec, n } => {
            let rows = position_rows(&build(&spec)?, n)?;
            Ok(Output::ok(match format {
                Some(Format::Json) => json(&rows),
                Some(Format::Human) => human_rows(&rows),
                _ => positions_csv(&rows),
            }))
        }
        Command::Reconstruct { source, pairs } => cmd_reconstruct(&source, pairs, format),
        Command::Apply { spec, pipeline, length } => {
            let pipeline: Pipeline = pipeline.parse()?;
            emit_word(&pipeline.apply(&build(&spec)?)?, length, format)
        }
        Command::Analyze { substitution } => {
            let sigma: BinarySubstitution = substitution.parse()?;
            let report = analyze(&sigma)?;
            Ok(Output::ok(match format {
                Some(Format::Human) => human_report(&report),
                _ => json(&report),
            }))
        }
        Command::Verify { id, all, list, n, len, seed } => {
            cmd_verify(id.as_deref(), all, list, Scale { n, len, seed }, format)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_INPUT) } else { ExitCode::SUCCESS };
        }
    };
    if let Some(budget) = cli.max_index {
        set_index_budget(budget);
    }
    let timeout = match cli.timeout {
        Some(t) if t.is_finite() && t > 0.0 => Some(Duration::from_secs_f64(t)),
        Some(t) => {
            eprintln!("error: --timeout must be a positive number of seconds, got {t}");
            return ExitCode::from(EXIT_INPUT);
        }
        None => None,
    };
    let (tx, rx) = mpsc::channel();
    thread::spawn(move || {
        let _ = tx.send(run(cli));
    });
    let result = match timeout {
        Some(t) => match rx.recv_timeout(t) {
            Ok(r) => r,
            Err(_) => Err(Failure {
                code: EXIT_BUDGET,
                message: format!("timed out after {} s", t.as_secs_f64()),
            }),
        },
        None => rx.recv().unwrap_or_else(|_| {
            Err(Failure {
                code: 1,
                message: "internal error".into(),
            })
        }),
    };
    match result {
        Ok(out) => {
            print!("{}", out.text);
            ExitCode::from(out.code)
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
