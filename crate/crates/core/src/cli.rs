//! Command-line front end.
//!
//! Exit status: 0 when every applicable check holds, 1 when a check whose hypothesis
//! passed fails (or a residual exceeds its threshold), 2 for configuration errors and
//! inputs that cannot be evaluated.
//!
//! All numbers are written with 17 significant digits (`{:.16e}`), independent of
//! locale. Non-finite values become `null` in JSON and `NaN`/`inf` in CSV and text.

use std::io::{self, Write};

use clap::{Parser, Subcommand, ValueEnum};
use serde::ser::Error as _;
use serde::{Serialize, Serializer};
use serde_json::value::RawValue;

use crate::bounds::{conjugate_of, Certifier, Lemma, Theorem};
use crate::error::{Error, Result};
use crate::funcat::{check_convexity, ConvexityReport, FunctionDescriptor, Interval, Verdict};
use crate::kernel::{kernel_breakpoints, kernel_p_moment, kernel_p_norm, m};
use crate::means::{
    check_proposition, mean_arithmetic, mean_identric, mean_logarithmic, mean_p_logarithmic, MeanPair, Proposition,
    PropositionReport, Variant,
};
use crate::quadrature::{integrate_2d_moving, QuadratureOptions};
use crate::rng::{random_interval, SplitMix64, GENERATOR_ID};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;

/// Largest identity residual reported as a pass.
pub const IDENTITY_THRESHOLD: f64 = 1e-8;
/// Largest relative kernel discrepancy reported as a pass.
pub const KERNEL_THRESHOLD: f64 = 1e-8;

/// Column order of verify and sweep CSV output.
pub const RECORD_COLUMNS: [&str; 10] =
    ["case_id", "a", "b", "q", "theorem", "gap", "bound", "ratio", "hypothesis", "holds"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum VariantArg {
    AsPrinted,
    AsDerived,
}

impl From<VariantArg> for Variant {
    fn from(v: VariantArg) -> Self {
        match v {
            VariantArg::AsPrinted => Variant::AsPrinted,
            VariantArg::AsDerived => Variant::AsDerived,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "hadamard", version, about = "Certify midpoint-rule error bounds for functions with convex |f'|^q")]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,

    /// Absolute quadrature tolerance on interval means and kernel integrals.
    #[arg(long, global = true, default_value_t = 1e-10)]
    pub tol: f64,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate the T2, T3 and KO bounds and the sandwich on one interval.
    Verify(VerifyArgs),
    /// Residual of one of the two kernel identities.
    Identity(IdentityArgs),
    /// Closed-form kernel moment with a numeric cross-check.
    Kernel(KernelArgs),
    /// Special means and the four mean inequalities.
    Means(MeansArgs),
    /// Seeded random intervals, three bounds per case.
    Sweep(SweepArgs),
}

#[derive(Debug, clap::Args)]
#[command(allow_negative_numbers = true)]
pub struct VerifyArgs {
    /// Function spec: `name` or `name:param[,param]`, e.g. `pow:3`.
    #[arg(long = "fn")]
    pub function: String,
    #[arg(long, num_args = 2, value_names = ["A", "B"], required = true)]
    pub interval: Vec<f64>,
    #[arg(long, default_value_t = 2.0)]
    pub q: f64,
}

#[derive(Debug, clap::Args)]
#[command(allow_negative_numbers = true)]
pub struct IdentityArgs {
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
    pub lemma: u8,
    #[arg(long = "fn")]
    pub function: String,
    #[arg(long, num_args = 2, value_names = ["A", "B"], required = true)]
    pub interval: Vec<f64>,
}

#[derive(Debug, clap::Args)]
#[command(allow_negative_numbers = true)]
pub struct KernelArgs {
    #[arg(long)]
    pub p: f64,
}

#[derive(Debug, clap::Args)]
#[command(allow_negative_numbers = true)]
pub struct MeansArgs {
    #[arg(long)]
    pub a: f64,
    #[arg(long)]
    pub b: f64,
    /// Order of the p-logarithmic mean; omitted from the output when absent.
    #[arg(long)]
    pub p: Option<f64>,
    #[arg(long, default_value_t = 2)]
    pub n: i32,
    #[arg(long, default_value_t = 2.0)]
    pub q: f64,
    /// Restrict to one variant; both are reported by default.
    #[arg(long, value_enum)]
    pub variant: Option<VariantArg>,
}

#[derive(Debug, clap::Args)]
#[command(allow_negative_numbers = true)]
pub struct SweepArgs {
    #[arg(long = "fn")]
    pub function: String,
    #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u64).range(1..))]
    pub cases: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 2.0)]
    pub q: f64,
    /// Sampling range for endpoints, intersected with the function domain.
    #[arg(long = "interval-range", num_args = 2, value_names = ["LO", "HI"])]
    pub interval_range: Option<Vec<f64>>,
}

/// Parses `args` (program name first), runs the command, and returns the exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cfg = match RunConfig::try_parse_from(args) {
        Ok(cfg) => cfg,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            let target: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    execute(&cfg, out, err)
}

pub fn execute(cfg: &RunConfig, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let outcome = match &cfg.command {
        Command::Verify(args) => cmd_verify(cfg, args, out),
        Command::Identity(args) => cmd_identity(cfg, args, out),
        Command::Kernel(args) => cmd_kernel(cfg, args, out),
        Command::Means(args) => cmd_means(cfg, args, out),
        Command::Sweep(args) => cmd_sweep(cfg, args, out),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_CONFIG
        }
    }
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error(transparent)]
    Eval(#[from] Error),
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

type CliResult<T> = std::result::Result<T, CliError>;

/// Float serialised with 17 significant digits; non-finite values become `null`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Num(pub f64);

impl Serialize for Num {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        if self.0.is_finite() {
            RawValue::from_string(fmt_num(self.0)).map_err(S::Error::custom)?.serialize(serializer)
        } else {
            serializer.serialize_none()
        }
    }
}

pub fn fmt_num(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        format!("{x}")
    }
}

/// One bound (or sandwich) check, the unit of verify and sweep output.
#[derive(Debug, Clone, Serialize)]
pub struct Record {
    pub case_id: u64,
    pub function: String,
    pub a: Num,
    pub b: Num,
    pub q: Num,
    /// `T2`, `T3`, `KO`, or `HH` for the sandwich.
    pub theorem: String,
    pub gap: Num,
    pub bound: Num,
    pub ratio: Num,
    pub hypothesis_verdict: Verdict,
    pub holds: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lower: Option<Num>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub middle: Option<Num>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub upper: Option<Num>,
}

impl Record {
    /// A check counts towards the exit status only when its hypothesis passed.
    pub fn is_failure(&self) -> bool {
        self.hypothesis_verdict == Verdict::NoViolationFound && !self.holds
    }

    fn csv_row(&self) -> [String; 10] {
        [
            self.case_id.to_string(),
            fmt_num(self.a.0),
            fmt_num(self.b.0),
            fmt_num(self.q.0),
            self.theorem.clone(),
            fmt_num(self.gap.0),
            fmt_num(self.bound.0),
            fmt_num(self.ratio.0),
            self.hypothesis_verdict.to_string(),
            self.holds.to_string(),
        ]
    }

    fn text_line(&self) -> String {
        let mut line = format!(
            "{:>4} {:<3} a={} b={} gap={} bound={} ratio={} hypothesis={} holds={}",
            self.case_id,
            self.theorem,
            fmt_num(self.a.0),
            fmt_num(self.b.0),
            fmt_num(self.gap.0),
            fmt_num(self.bound.0),
            fmt_num(self.ratio.0),
            self.hypothesis_verdict,
            self.holds
        );
        if let (Some(l), Some(mid), Some(u)) = (self.lower, self.middle, self.upper) {
            line.push_str(&format!(" lower={} middle={} upper={}", fmt_num(l.0), fmt_num(mid.0), fmt_num(u.0)));
        }
        line
    }
}

fn exit_status(records: &[Record]) -> i32 {
    if records.iter().any(Record::is_failure) {
        EXIT_FAILED
    } else {
        EXIT_OK
    }
}

fn parse_interval(values: &[f64]) -> Result<Interval> {
    Interval::new(values[0], values[1])
}

fn bound_records(
    certifier: &Certifier,
    fd: &FunctionDescriptor,
    iv: &Interval,
    q: f64,
    case_id: u64,
) -> Result<Vec<Record>> {
    [Theorem::T2, Theorem::T3, Theorem::KO]
        .into_iter()
        .map(|theorem| {
            let r = certifier.bound(theorem, fd, iv, q)?;
            Ok(Record {
                case_id,
                function: fd.to_string(),
                a: Num(iv.a()),
                b: Num(iv.b()),
                q: Num(r.q),
                theorem: theorem.to_string(),
                gap: Num(r.gap),
                bound: Num(r.bound),
                ratio: Num(r.ratio),
                hypothesis_verdict: r.hypothesis.verdict,
                holds: r.holds,
                lower: None,
                middle: None,
                upper: None,
            })
        })
        .collect()
}

/// Sandwich as a record: `gap = middle − lower`, `bound = upper − lower`, and the
/// hypothesis is convexity of `f` itself.
fn sandwich_record(
    certifier: &Certifier,
    fd: &FunctionDescriptor,
    iv: &Interval,
    q: f64,
    case_id: u64,
) -> Result<Record> {
    fd.check_interval(iv)?;
    let s = certifier.hh_sandwich(fd, iv)?;
    let hypothesis = if iv.is_degenerate() {
        ConvexityReport::vacuous()
    } else {
        let opts = certifier.convexity;
        check_convexity(|x| fd.eval(x), iv, opts.grid_points, opts.tol)?
    };
    let (gap, bound) = (s.middle - s.lower, s.upper - s.lower);
    Ok(Record {
        case_id,
        function: fd.to_string(),
        a: Num(iv.a()),
        b: Num(iv.b()),
        q: Num(q),
        theorem: "HH".into(),
        gap: Num(gap),
        bound: Num(bound),
        ratio: Num(gap / bound),
        hypothesis_verdict: hypothesis.verdict,
        holds: s.ordered,
        lower: Some(Num(s.lower)),
        middle: Some(Num(s.middle)),
        upper: Some(Num(s.upper)),
    })
}

fn write_records(
    format: Format,
    header: Option<(&str, u64)>,
    records: &[Record],
    out: &mut dyn Write,
) -> CliResult<()> {
    match format {
        Format::Json => {
            #[derive(Serialize)]
            struct Doc<'a> {
                #[serde(skip_serializing_if = "Option::is_none")]
                generator: Option<&'a str>,
                #[serde(skip_serializing_if = "Option::is_none")]
                seed: Option<u64>,
                records: &'a [Record],
            }
            let doc = Doc { generator: header.map(|h| h.0), seed: header.map(|h| h.1), records };
            serde_json::to_writer_pretty(&mut *out, &doc)?;
            writeln!(out)?;
        }
        Format::Csv => {
            if let Some((generator, seed)) = header {
                writeln!(out, "# generator={generator} seed={seed}")?;
            }
            let mut w = csv::Writer::from_writer(&mut *out);
            w.write_record(RECORD_COLUMNS)?;
            for r in records {
                w.write_record(r.csv_row())?;
            }
            w.flush()?;
        }
        Format::Text => {
            if let Some((generator, seed)) = header {
                writeln!(out, "# generator={generator} seed={seed}")?;
            }
            for r in records {
                writeln!(out, "{}", r.text_line())?;
            }
        }
    }
    Ok(())
}

fn cmd_verify(cfg: &RunConfig, args: &VerifyArgs, out: &mut dyn Write) -> CliResult<i32> {
    let fd: FunctionDescriptor = args.function.parse()?;
    let iv = parse_interval(&args.interval)?;
    fd.check_interval(&iv)?;
    conjugate_of(args.q)?;
    let certifier = Certifier::with_tol(cfg.tol);

    let mut records = bound_records(&certifier, &fd, &iv, args.q, 0)?;
    records.push(sandwich_record(&certifier, &fd, &iv, args.q, 0)?);

    if cfg.format == Format::Text {
        writeln!(out, "{fd} on {iv}, q = {}", args.q)?;
    }
    write_records(cfg.format, None, &records, out)?;
    Ok(exit_status(&records))
}

/// Runs the bound evaluations of `cmd_verify` on `cases` seeded intervals.
pub fn sweep_records(
    fd: &FunctionDescriptor,
    q: f64,
    range: (f64, f64),
    cases: u64,
    seed: u64,
    certifier: &Certifier,
) -> Result<Vec<Record>> {
    conjugate_of(q)?;
    let mut rng = SplitMix64::new(seed);
    let mut records = Vec::with_capacity(3 * cases as usize);
    for case_id in 0..cases {
        let iv = random_interval(&mut rng, fd.domain(), range)?;
        records.extend(bound_records(certifier, fd, &iv, q, case_id)?);
    }
    Ok(records)
}

fn cmd_sweep(cfg: &RunConfig, args: &SweepArgs, out: &mut dyn Write) -> CliResult<i32> {
    let fd: FunctionDescriptor = args.function.parse()?;
    let range = match &args.interval_range {
        Some(r) => (r[0], r[1]),
        None => fd.domain().default_range(),
    };
    let records = sweep_records(&fd, args.q, range, args.cases, args.seed, &Certifier::with_tol(cfg.tol))?;
    write_records(cfg.format, Some((GENERATOR_ID, args.seed)), &records, out)?;
    Ok(exit_status(&records))
}

fn cmd_identity(cfg: &RunConfig, args: &IdentityArgs, out: &mut dyn Write) -> CliResult<i32> {
    let fd: FunctionDescriptor = args.function.parse()?;
    let iv = parse_interval(&args.interval)?;
    let lemma = if args.lemma == 1 { Lemma::L1 } else { Lemma::L2 };
    let residual = Certifier::with_tol(cfg.tol).verify_identity(lemma, &fd, &iv)?;
    let within = residual <= IDENTITY_THRESHOLD;

    match cfg.format {
        Format::Json => {
            #[derive(Serialize)]
            struct Doc {
                lemma: Lemma,
                function: String,
                a: Num,
                b: Num,
                residual: Num,
                threshold: Num,
                within_threshold: bool,
            }
            let doc = Doc {
                lemma,
                function: fd.to_string(),
                a: Num(iv.a()),
                b: Num(iv.b()),
                residual: Num(residual),
                threshold: Num(IDENTITY_THRESHOLD),
                within_threshold: within,
            };
            serde_json::to_writer_pretty(&mut *out, &doc)?;
            writeln!(out)?;
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut *out);
            w.write_record(["lemma", "function", "a", "b", "residual", "within_threshold"])?;
            w.write_record([
                format!("{lemma:?}"),
                fd.to_string(),
                fmt_num(iv.a()),
                fmt_num(iv.b()),
                fmt_num(residual),
                within.to_string(),
            ])?;
            w.flush()?;
        }
        Format::Text => {
            writeln!(out, "lemma {lemma:?} for {fd} on {iv}")?;
            writeln!(out, "residual = {} (threshold {})", fmt_num(residual), fmt_num(IDENTITY_THRESHOLD))?;
        }
    }
    Ok(if within { EXIT_OK } else { EXIT_FAILED })
}

#[derive(Debug, Clone, Serialize)]
struct KernelSummary {
    p: Num,
    closed_form: Num,
    pieces: [Num; 4],
    p_norm: Num,
    numeric: Num,
    numeric_error_estimate: Num,
    discrepancy: Num,
}

fn cmd_kernel(cfg: &RunConfig, args: &KernelArgs, out: &mut dyn Write) -> CliResult<i32> {
    let p = args.p;
    let moment = kernel_p_moment(p)?;
    let norm = kernel_p_norm(p)?;
    let numeric = integrate_2d_moving(
        |t, s| (m(t) - m(s)).abs().powf(p),
        kernel_breakpoints,
        &[0.5],
        &QuadratureOptions::with_tol(cfg.tol),
    )?;
    let discrepancy = (moment.closed_form - numeric.value).abs();
    let summary = KernelSummary {
        p: Num(p),
        closed_form: Num(moment.closed_form),
        pieces: moment.pieces.map(Num),
        p_norm: Num(norm),
        numeric: Num(numeric.value),
        numeric_error_estimate: Num(numeric.error_estimate),
        discrepancy: Num(discrepancy),
    };

    match cfg.format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut *out, &summary)?;
            writeln!(out)?;
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut *out);
            w.write_record(["p", "closed_form", "j1", "j2", "j3", "j4", "p_norm", "numeric", "discrepancy"])?;
            let mut row = vec![fmt_num(p), fmt_num(moment.closed_form)];
            row.extend(moment.pieces.iter().map(|&j| fmt_num(j)));
            row.extend([fmt_num(norm), fmt_num(numeric.value), fmt_num(discrepancy)]);
            w.write_record(row)?;
            w.flush()?;
        }
        Format::Text => {
            writeln!(out, "p           = {}", fmt_num(p))?;
            writeln!(out, "moment      = {}", fmt_num(moment.closed_form))?;
            for (i, j) in moment.pieces.iter().enumerate() {
                writeln!(out, "J{}          = {}", i + 1, fmt_num(*j))?;
            }
            writeln!(out, "p-norm      = {}", fmt_num(norm))?;
            writeln!(
                out,
                "numeric     = {} (error estimate {})",
                fmt_num(numeric.value),
                fmt_num(numeric.error_estimate)
            )?;
            writeln!(out, "discrepancy = {}", fmt_num(discrepancy))?;
        }
    }
    let ok = numeric.converged && discrepancy <= KERNEL_THRESHOLD * moment.closed_form.max(1.0);
    Ok(if ok { EXIT_OK } else { EXIT_FAILED })
}

#[derive(Debug, Clone, Serialize)]
struct PropositionRow {
    proposition: Proposition,
    variant: Variant,
    #[serde(skip_serializing_if = "Option::is_none")]
    n: Option<i32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    q: Option<Num>,
    lhs: Num,
    rhs: Num,
    holds: bool,
}

fn proposition_reports(mp: &MeanPair, args: &MeansArgs) -> Result<Vec<PropositionRow>> {
    let variants: Vec<Variant> = match args.variant {
        Some(v) => vec![v.into()],
        None => vec![Variant::AsPrinted, Variant::AsDerived],
    };
    let mut rows = Vec::new();
    let mut push = |id: Proposition, variant: Variant, n: Option<i32>, q: Option<f64>| -> Result<()> {
        let r: PropositionReport = check_proposition(id, mp, n, q, variant)?;
        rows.push(PropositionRow {
            proposition: id,
            variant,
            n,
            q: q.map(Num),
            lhs: Num(r.lhs),
            rhs: Num(r.rhs),
            holds: r.holds,
        });
        Ok(())
    };
    for &v in &variants {
        push(Proposition::P1, v, Some(args.n), None)?;
    }
    // P2 and P4 read the same under either variant.
    push(Proposition::P2, variants[0], Some(args.n), Some(args.q))?;
    for &v in &variants {
        push(Proposition::P3, v, None, Some(args.q))?;
    }
    push(Proposition::P4, variants[0], None, Some(args.q))?;
    Ok(rows)
}

fn cmd_means(cfg: &RunConfig, args: &MeansArgs, out: &mut dyn Write) -> CliResult<i32> {
    let mp = MeanPair::new(args.a, args.b)?;
    let lp = args.p.map(|p| mean_p_logarithmic(&mp, p)).transpose()?;
    let (am, lm, im) = (mean_arithmetic(&mp), mean_logarithmic(&mp), mean_identric(&mp));
    let rows = proposition_reports(&mp, args)?;

    match cfg.format {
        Format::Json => {
            #[derive(Serialize)]
            struct Doc {
                a: Num,
                b: Num,
                arithmetic: Num,
                logarithmic: Num,
                identric: Num,
                #[serde(skip_serializing_if = "Option::is_none")]
                p: Option<Num>,
                #[serde(skip_serializing_if = "Option::is_none")]
                p_logarithmic: Option<Num>,
                propositions: Vec<PropositionRow>,
            }
            let doc = Doc {
                a: Num(args.a),
                b: Num(args.b),
                arithmetic: Num(am),
                logarithmic: Num(lm),
                identric: Num(im),
                p: args.p.map(Num),
                p_logarithmic: lp.map(Num),
                propositions: rows.clone(),
            };
            serde_json::to_writer_pretty(&mut *out, &doc)?;
            writeln!(out)?;
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut *out);
            w.write_record(["item", "variant", "lhs", "rhs", "holds"])?;
            let mut means = vec![("A", am), ("L", lm), ("I", im)];
            if let Some(lp) = lp {
                means.push(("L_p", lp));
            }
            for (name, value) in means {
                w.write_record([name, "", &fmt_num(value), "", ""])?;
            }
            for r in &rows {
                w.write_record([
                    r.proposition.to_string(),
                    r.variant.to_string(),
                    fmt_num(r.lhs.0),
                    fmt_num(r.rhs.0),
                    r.holds.to_string(),
                ])?;
            }
            w.flush()?;
        }
        Format::Text => {
            writeln!(out, "A   = {}", fmt_num(am))?;
            writeln!(out, "L   = {}", fmt_num(lm))?;
            writeln!(out, "I   = {}", fmt_num(im))?;
            if let (Some(p), Some(lp)) = (args.p, lp) {
                writeln!(out, "L_p = {} (p = {p})", fmt_num(lp))?;
            }
            for r in &rows {
                writeln!(
                    out,
                    "{} {:<10} lhs={} rhs={} holds={}",
                    r.proposition,
                    r.variant.to_string(),
                    fmt_num(r.lhs.0),
                    fmt_num(r.rhs.0),
                    r.holds
                )?;
            }
        }
    }
    Ok(if rows.iter().all(|r| r.holds) { EXIT_OK } else { EXIT_FAILED })
}
