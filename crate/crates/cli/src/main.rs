mod family;

use std::fmt::Display;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hypermoments::construction::build_family;
use hypermoments::galois::sn_witness;
use hypermoments::lemmas::verify_lemmas;
use hypermoments::second_moment::{second_moment_brute, second_moment_closed};
use hypermoments::{
    bias_report, moment_table, nagao_predicted, nagao_sum, parse_bivariate, parse_univariate, primes_in,
    to_monic_model, Error, PowerFamily, PrimeCtx, PrimeRange, Zx,
};
use rayon::prelude::*;
use serde_json::{json, Value};

const EXIT_INPUT: u8 = 2;
const EXIT_RANGE: u8 = 3;
const EXIT_VERIFY: u8 = 4;

#[derive(Debug)]
pub struct CliError {
    code: u8,
    msg: String,
}

impl CliError {
    fn new(code: u8, msg: impl Into<String>) -> Self {
        CliError { code, msg: msg.into() }
    }

    pub fn input(msg: impl Into<String>) -> Self {
        Self::new(EXIT_INPUT, msg)
    }

    fn range(msg: impl Into<String>) -> Self {
        Self::new(EXIT_RANGE, msg)
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::InvalidRange { .. } | Error::PrimeTooLarge(_) => EXIT_RANGE,
            Error::Verification(_) | Error::ZeroModP(_) | Error::InexactDivision | Error::DivisionByZero => EXIT_VERIFY,
            _ => EXIT_INPUT,
        };
        CliError::new(code, e.to_string())
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::input(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::input(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::input(e.to_string())
    }
}

type CliResult<T = ()> = Result<T, CliError>;

#[derive(Parser)]
#[command(name = "hypermoments", version, about = "Frobenius trace moments of hyperelliptic families")]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Per-prime moments p·A_r(p) by point counting
    Moments {
        #[command(flatten)]
        family: FamilyArgs,
        /// Moment orders
        #[arg(long, value_delimiter = ',', default_value = "1")]
        r: Vec<u32>,
        #[command(flatten)]
        range: RangeArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Prime-averaged first moment, weighted by log p and unweighted
    Nagao {
        #[command(flatten)]
        family: FamilyArgs,
        /// Use the closed form at generic primes (builtin families only)
        #[arg(long)]
        predicted: bool,
        #[command(flatten)]
        range: RangeArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Build the family with 4g+2 prescribed points
    Construct {
        #[arg(long)]
        genus: u32,
        /// `a..b` or a comma list; defaults to 1..4g+2
        #[arg(long, allow_hyphen_values = true)]
        roots: Option<String>,
        /// Also emit the model monic in x
        #[arg(long)]
        monic: bool,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Second moments of y^2 = x^n + x^h T^k, direct and closed form
    SecondMoment {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        h: u32,
        #[arg(long)]
        k: u32,
        /// Report the mean p^1 coefficient and the deviation from p^2
        #[arg(long)]
        bias: bool,
        #[command(flatten)]
        range: RangeArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Check the character-sum closed forms against enumeration
    VerifyLemmas {
        #[command(flatten)]
        range: RangeArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Look for Frobenius cycle types certifying Galois group S_n
    SnWitness {
        /// Polynomial in x, or in x and T together with --t
        #[arg(long)]
        f: String,
        /// Specialize T to this value first
        #[arg(long, allow_hyphen_values = true)]
        t: Option<Zx>,
        #[command(flatten)]
        range: RangeArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
}

#[derive(Args)]
struct FamilyArgs {
    /// Inline polynomial in x and T, a family JSON file (`@path` or `*.json`),
    /// or builtin:shift_square | builtin:linear_twist | builtin:big_rank | builtin:power:n,h,k
    #[arg(long)]
    family: String,
    /// f(x) for builtin:shift_square and builtin:linear_twist
    #[arg(long)]
    f: Option<String>,
    /// Genus (builtin:big_rank, or to check an inline family)
    #[arg(long)]
    genus: Option<u32>,
    /// Roots for builtin:big_rank
    #[arg(long, allow_hyphen_values = true)]
    roots: Option<String>,
}

#[derive(Args)]
struct RangeArgs {
    #[arg(long, default_value_t = 3)]
    pmin: u64,
    #[arg(long)]
    pmax: u64,
    /// Primes to leave out
    #[arg(long, value_delimiter = ',')]
    skip: Vec<u64>,
}

impl RangeArgs {
    /// A range ending below 3 holds no odd primes and is accepted as empty.
    fn build(&self) -> CliResult<PrimeRange> {
        if self.pmax >= 1 << 32 {
            return Err(CliError::range(format!("pmax {} is beyond the supported 2^32", self.pmax)));
        }
        let lo = if self.pmax < 3 { self.pmax } else { self.pmin };
        Ok(PrimeRange::with_skip(lo, self.pmax, self.skip.iter().copied().collect())?)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args)]
struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Write here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads
    #[arg(long)]
    jobs: Option<usize>,
}

impl OutputArgs {
    fn setup(&self) -> CliResult {
        if let Some(n) = self.jobs {
            if n == 0 {
                return Err(CliError::range("--jobs must be at least 1"));
            }
            rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build_global()
                .map_err(|e| CliError::range(e.to_string()))?;
        }
        Ok(())
    }

    fn sink(&self) -> CliResult<Box<dyn Write>> {
        Ok(match &self.out {
            Some(path) => Box::new(BufWriter::new(File::create(path)?)),
            None => Box::new(BufWriter::new(io::stdout().lock())),
        })
    }

    fn json(&self, v: &Value) -> CliResult {
        let mut w = self.sink()?;
        serde_json::to_writer_pretty(&mut w, v)?;
        writeln!(w)?;
        w.flush()?;
        Ok(())
    }

    fn csv(&self, header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> CliResult {
        let mut w = csv::Writer::from_writer(self.sink()?);
        w.write_record(header)?;
        for row in rows {
            w.write_record(&row)?;
        }
        w.flush()?;
        Ok(())
    }
}

fn opt<T: Display>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn cmd_moments(family: FamilyArgs, r: Vec<u32>, range: RangeArgs, out: OutputArgs) -> CliResult {
    out.setup()?;
    let res = family::resolve(&family.family, family.f.as_deref(), family.genus, family.roots.as_deref())?;
    let range = range.build()?;
    let table = moment_table(&res.family, &r, &range, res.model.as_ref())?;
    match out.format {
        Format::Json => out.json(&serde_json::to_value(&table)?),
        Format::Csv => {
            let n = table[0].rows.len();
            let rows = (0..n).flat_map(|i| {
                table.iter().map(move |s| {
                    let row = &s.rows[i];
                    vec![
                        row.p.to_string(),
                        s.r.to_string(),
                        row.p_times_a.to_string(),
                        opt(row.predicted),
                        row.generic.to_string(),
                    ]
                })
            });
            out.csv(&["p", "r", "p_times_A_numer", "predicted", "generic_flag"], rows)
        }
    }
}

fn cmd_nagao(family: FamilyArgs, predicted: bool, range: RangeArgs, out: OutputArgs) -> CliResult {
    out.setup()?;
    if range.pmax < 3 {
        return Err(CliError::range(format!("P = {} is below 3", range.pmax)));
    }
    let res = family::resolve(&family.family, family.f.as_deref(), family.genus, family.roots.as_deref())?;
    let range = range.build()?;
    let est = if predicted {
        let model = res
            .model
            .as_ref()
            .ok_or_else(|| CliError::input("--predicted needs a builtin family with a closed form"))?;
        nagao_predicted::<f64>(model, &range)?
    } else {
        nagao_sum(&res.family, &range)?
    };
    match out.format {
        Format::Json => out.json(&serde_json::to_value(&est)?),
        Format::Csv => {
            let skipped = est.skipped.iter().map(u64::to_string).collect::<Vec<_>>().join(";");
            let row = vec![
                est.cutoff.to_string(),
                est.s_theta.to_string(),
                est.s_pi.to_string(),
                est.n_primes.to_string(),
                skipped,
            ];
            out.csv(&["P", "s_theta", "s_pi", "n_primes", "skipped"], [row])
        }
    }
}

fn cmd_construct(genus: u32, roots: Option<String>, monic: bool, out: OutputArgs) -> CliResult {
    out.setup()?;
    let rd = family::root_data(genus, roots.as_deref())?;
    let res = build_family(&rd)?;
    let fam = res.family()?;
    let monic_f = if monic { Some(to_monic_model(&res.f, genus)?) } else { None };
    match out.format {
        Format::Json => {
            let mut v = json!({ "family": fam.to_json(), "construction": res.to_json() });
            if let Some(m) = &monic_f {
                v["monic"] = serde_json::to_value(m)?;
            }
            out.json(&v)
        }
        Format::Csv => {
            let c = res.to_json();
            let mut rows: Vec<Vec<String>> = Vec::new();
            let mut push = |section: &str, index: String, value: &str| {
                rows.push(vec![section.to_string(), index, value.to_string()]);
            };
            for (i, v) in c.r.iter().enumerate() {
                push("R", i.to_string(), v);
            }
            for (name, v) in [("A", &c.a), ("L", &c.l), ("point_scale", &c.point_scale), ("scale", &c.scale)] {
                push(name, String::new(), v);
            }
            for (name, list) in [("q", &c.q), ("h", &c.h), ("D", &c.d)] {
                for (i, v) in list.iter().enumerate() {
                    push(name, i.to_string(), v);
                }
            }
            for (coef, i, j) in res.f.terms() {
                push("F", format!("{i}:{j}"), &coef.to_string());
            }
            for (k, pt) in c.points.iter().enumerate() {
                push("point_x", k.to_string(), &pt.x);
                for (j, v) in pt.y.iter().enumerate() {
                    push("point_y", format!("{k}:{j}"), v);
                }
            }
            if let Some(m) = &monic_f {
                for (coef, i, j) in m.terms() {
                    push("monic", format!("{i}:{j}"), &coef.to_string());
                }
            }
            out.csv(&["section", "index", "value"], rows)
        }
    }
}

struct SecondMomentRow {
    p: u64,
    brute: i64,
    closed: Option<i128>,
    deviation: f64,
}

impl SecondMomentRow {
    fn c2(&self) -> Option<i128> {
        let p = self.p as i128;
        self.closed.map(|v| v / (p * p - p))
    }
}

fn cmd_second_moment(n: u32, h: u32, k: u32, bias: bool, range: RangeArgs, out: OutputArgs) -> CliResult {
    out.setup()?;
    let fam = PowerFamily::new(n, h, k)?;
    let range = range.build()?;
    let rows = primes_in(&range)
        .par_iter()
        .map(|&p| {
            let ctx = PrimeCtx::new(p)?;
            let brute = second_moment_brute(&fam, &ctx);
            let pf = p as f64;
            Ok(SecondMomentRow {
                p,
                brute,
                closed: second_moment_closed(&fam, &ctx),
                deviation: (brute as f64 - pf * pf) / pf.powf(1.5),
            })
        })
        .collect::<Result<Vec<_>, Error>>()?;
    let mean_c1 = if bias { bias_report(&fam, &range, false)?.mean_c1 } else { None };
    match out.format {
        Format::Json => {
            let rows: Vec<Value> = rows
                .iter()
                .map(|r| {
                    let mut v = json!({
                        "p": r.p,
                        "pA2_brute": r.brute.to_string(),
                        "pA2_closed": r.closed.map(|c| c.to_string()),
                        "applicable": r.closed.is_some(),
                        "c2": r.c2().map(|c| c.to_string()),
                        "c1": r.c2().map(|c| (-c).to_string()),
                    });
                    if bias {
                        v["deviation"] = json!(r.deviation);
                    }
                    v
                })
                .collect();
            let mut v = json!({ "n": n, "h": h, "k": k, "P": range.hi, "rows": rows });
            if bias {
                v["mean_c1"] = json!(mean_c1);
            }
            out.json(&v)
        }
        Format::Csv => {
            let mut header = vec!["p", "pA2_brute", "pA2_closed", "applicable", "c2", "c1"];
            if bias {
                header.push("deviation");
            }
            let body = rows.iter().map(|r| {
                let mut row = vec![
                    r.p.to_string(),
                    r.brute.to_string(),
                    opt(r.closed),
                    r.closed.is_some().to_string(),
                    opt(r.c2()),
                    opt(r.c2().map(|c| -c)),
                ];
                if bias {
                    row.push(format!("{:.6}", r.deviation));
                }
                row
            });
            out.csv(&header, body)?;
            if bias {
                eprintln!("mean_c1,{}", opt(mean_c1));
            }
            Ok(())
        }
    }
}

fn cmd_verify_lemmas(range: RangeArgs, out: OutputArgs) -> CliResult {
    out.setup()?;
    let reports = verify_lemmas(&range.build()?)?;
    let status = |ok: bool| if ok { "PASS" } else { "FAIL" };
    match out.format {
        Format::Json => {
            let v: Vec<Value> = reports
                .iter()
                .map(|r| {
                    let mut v = serde_json::to_value(r).expect("plain struct");
                    v["status"] = json!(status(r.passed()));
                    v
                })
                .collect();
            out.json(&Value::Array(v))?;
        }
        Format::Csv => {
            let rows = reports.iter().map(|r| {
                vec![
                    r.lemma.to_string(),
                    r.primes.to_string(),
                    r.checks.to_string(),
                    r.failures.to_string(),
                    status(r.passed()).to_string(),
                ]
            });
            out.csv(&["lemma", "primes", "checks", "failures", "status"], rows)?;
        }
    }
    if reports.iter().all(|r| r.passed()) {
        Ok(())
    } else {
        Err(CliError::new(EXIT_VERIFY, "a lemma check failed"))
    }
}

fn cmd_sn_witness(f: String, t: Option<Zx>, range: RangeArgs, out: OutputArgs) -> CliResult {
    out.setup()?;
    let poly = match &t {
        Some(t) => parse_bivariate(&f)?.specialize_t(t),
        None => parse_univariate(&f)?,
    };
    let w = sn_witness(&poly, &range.build()?)?;
    match out.format {
        Format::Json => out.json(&serde_json::to_value(&w)?),
        Format::Csv => {
            let rows = w.census.iter().map(|(k, v)| vec![k.clone(), v.to_string()]);
            out.csv(&["pattern", "primes"], rows)?;
            eprintln!(
                "status={} n_cycle={} n_minus_one_cycle={} transposition={}",
                serde_json::to_value(w.status)?.as_str().unwrap_or_default(),
                opt(w.n_cycle),
                opt(w.n_minus_one_cycle),
                opt(w.transposition)
            );
            Ok(())
        }
    }
}

fn run(cli: Cli) -> CliResult {
    match cli.cmd {
        Command::Moments { family, r, range, out } => cmd_moments(family, r, range, out),
        Command::Nagao { family, predicted, range, out } => cmd_nagao(family, predicted, range, out),
        Command::Construct { genus, roots, monic, out } => cmd_construct(genus, roots, monic, out),
        Command::SecondMoment { n, h, k, bias, range, out } => cmd_second_moment(n, h, k, bias, range, out),
        Command::VerifyLemmas { range, out } => cmd_verify_lemmas(range, out),
        Command::SnWitness { f, t, range, out } => cmd_sn_witness(f, t, range, out),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.msg);
            ExitCode::from(e.code)
        }
    }
}
