//! The `goursat` command line: argument parsing, output records and the
//! `plain` / `csv` / `structured` renderings.
//!
//! Exit codes: `0` success, `1` verification failure (the two derivations
//! disagree), `2` usage or parse error.
//!
//! Structured output is a single JSON object per invocation:
//!
//! ```text
//! {"schema_version": "1", "kind": "<derive|trace|enumeration|verify|spectrum|report>", ...}
//! ```
//!
//! Every integer in it is a decimal string. CSV class records use the columns
//! `word,r,s,q,codim,derived,degree`; `derived` is space-separated and `s`,
//! `q` are empty for the all-`G` class.

use std::io::{self, Write};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::analysis::{self, AnalysisError, ClassReport, EquivalenceSummary, SpectrumReport};
use crate::closed_form::{derived_closed, value_table, ValueTableRecord};
use crate::recurrence::{
    derive_recurrence, format_trace, nonholonomy_degree, small_growth_vector, trace_recurrence,
    DerivedVector, SmallGrowthVector,
};
use crate::word::{self, count_admissible, enumerate_admissible, ClassCode, ClassParams};

pub const SCHEMA_VERSION: &str = "1";

/// Longest small growth vector printed term by term; longer ones use runs.
const SGRV_EXPAND_CAP: usize = 4096;

pub const EXIT_OK: u8 = 0;
pub const EXIT_FAILURE: u8 = 1;
pub const EXIT_USAGE: u8 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Plain,
    Csv,
    Structured,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Recurrence,
    Closed,
    Both,
}

#[derive(Debug, Parser)]
#[command(name = "goursat", version, about = "Small growth vectors of Goursat distributions")]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Plain, global = true)]
    pub format: Format,

    /// Worker threads for sweeps (defaults to available parallelism).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Derived vector, small growth vector and nonholonomy degree of a class.
    Derive {
        word: String,
        #[arg(long, value_enum, default_value_t = Method::Both)]
        method: Method,
    },
    /// Letter-annotated table of the intermediate derived vectors.
    Trace { word: String },
    /// Admissible words of length r in lexicographic order.
    Enumerate {
        r: usize,
        /// Print only the number of words.
        #[arg(long)]
        count_only: bool,
        /// Emit a full class record per word.
        #[arg(long)]
        report: bool,
        /// Skip this many words.
        #[arg(long, default_value_t = 0)]
        offset: usize,
        /// Emit at most this many words.
        #[arg(long)]
        limit: Option<usize>,
    },
    /// Cross-check closed form against the recurrence for all lengths up to r_max.
    Verify { r_max: usize },
    /// Realized and missing nonholonomy degrees in length r.
    Spectrum {
        r: usize,
        /// List at most this many missing values.
        #[arg(long)]
        max_missing: Option<usize>,
    },
    /// Every per-class quantity, including the value table.
    Report { word: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParamsRecord {
    pub s: String,
    pub q: String,
    pub k: Vec<String>,
    pub l: Vec<String>,
    pub n: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SgrvRun {
    pub dim: String,
    pub multiplicity: String,
}

/// One class: word, parameters, derived vector and derived quantities.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassRecord {
    pub word: String,
    pub r: String,
    pub codim: String,
    /// `None` for the all-`G` class.
    pub params: Option<ParamsRecord>,
    pub derived: Vec<String>,
    pub degree: String,
    /// Expanded small growth vector, omitted when very long.
    pub sgrv: Option<Vec<String>>,
    pub sgrv_runs: Vec<SgrvRun>,
    pub big_growth: Vec<String>,
    pub value_table: Option<ValueTableRecord>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceRowRecord {
    pub letter: String,
    pub vector: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceRecord {
    pub word: String,
    pub rows: Vec<TraceRowRecord>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnumerationPage {
    pub r: String,
    pub count: String,
    pub offset: String,
    pub words: Vec<String>,
    pub reports: Option<Vec<ClassRecord>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LengthRecord {
    pub r: String,
    pub classes: String,
    pub divergences: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DivergenceRecord {
    pub word: String,
    pub recurrence: Vec<String>,
    pub closed: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyRecord {
    pub r_max: String,
    pub lengths: Vec<LengthRecord>,
    pub total_classes: String,
    pub total_divergences: String,
    pub first_divergence: Option<DivergenceRecord>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpectrumRecord {
    pub r: String,
    pub lower_bound: String,
    pub upper_bound: String,
    pub min: String,
    pub max: String,
    pub realized: Vec<String>,
    pub missing: Vec<String>,
    pub missing_count: String,
    pub missing_truncated: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Payload {
    Derive(ClassRecord),
    Trace(TraceRecord),
    Enumeration(EnumerationPage),
    Verify(VerifyRecord),
    Spectrum(SpectrumRecord),
    Report(ClassRecord),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutputRecord {
    pub schema_version: String,
    #[serde(flatten)]
    pub payload: Payload,
}

impl OutputRecord {
    pub fn new(payload: Payload) -> Self {
        OutputRecord {
            schema_version: SCHEMA_VERSION.to_string(),
            payload,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("records serialize")
    }
}

/// CSV row for one class.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CsvClassRow {
    pub word: String,
    pub r: String,
    pub s: String,
    pub q: String,
    pub codim: String,
    pub derived: String,
    pub degree: String,
}

fn dec(x: &BigUint) -> String {
    x.to_str_radix(10)
}

fn strings<T: ToString>(xs: &[T]) -> Vec<String> {
    xs.iter().map(ToString::to_string).collect()
}

fn params_record(params: &ClassParams) -> Option<ParamsRecord> {
    params.profile().map(|p| ParamsRecord {
        s: p.s().to_string(),
        q: p.q().to_string(),
        k: strings(p.k()),
        l: strings(p.l()),
        n: strings(&p.n()),
    })
}

fn sgrv_fields(sgrv: &SmallGrowthVector) -> (Option<Vec<String>>, Vec<SgrvRun>) {
    let expanded = sgrv.expand(SGRV_EXPAND_CAP).map(|v| strings(&v));
    let runs = sgrv
        .runs()
        .iter()
        .map(|(d, m)| SgrvRun { dim: d.to_string(), multiplicity: dec(m) })
        .collect();
    (expanded, runs)
}

fn sgrv_plain(sgrv: &SmallGrowthVector) -> String {
    match sgrv.expand(SGRV_EXPAND_CAP) {
        Some(v) => strings(&v).join(" "),
        None => sgrv.to_run_string(),
    }
}

/// Record for a word whose derived vector is already known.
pub fn class_record(code: &ClassCode, params: &ClassParams, derived: &DerivedVector) -> ClassRecord {
    let sgrv = small_growth_vector(derived);
    let (expanded, runs) = sgrv_fields(&sgrv);
    ClassRecord {
        word: code.to_string(),
        r: code.len().to_string(),
        codim: code.codimension().to_string(),
        params: params_record(params),
        derived: derived.to_decimal_strings(),
        degree: dec(&nonholonomy_degree(derived)),
        sgrv: expanded,
        sgrv_runs: runs,
        big_growth: strings(&crate::recurrence::big_growth_vector(code.len())),
        value_table: params.profile().map(|p| value_table(p).to_record()),
    }
}

pub fn report_record(rep: &ClassReport) -> ClassRecord {
    class_record(&rep.code, &rep.params, &rep.derived)
}

pub fn csv_row(rec: &ClassRecord) -> CsvClassRow {
    let (s, q) = match &rec.params {
        Some(p) => (p.s.clone(), p.q.clone()),
        None => (String::new(), String::new()),
    };
    CsvClassRow {
        word: rec.word.clone(),
        r: rec.r.clone(),
        s,
        q,
        codim: rec.codim.clone(),
        derived: rec.derived.join(" "),
        degree: rec.degree.clone(),
    }
}

pub fn verify_record(r_max: usize, summary: &EquivalenceSummary) -> VerifyRecord {
    VerifyRecord {
        r_max: r_max.to_string(),
        lengths: summary
            .lengths
            .iter()
            .map(|l| LengthRecord {
                r: l.r.to_string(),
                classes: l.classes.to_string(),
                divergences: l.divergences.to_string(),
            })
            .collect(),
        total_classes: summary.total_classes().to_string(),
        total_divergences: summary.total_divergences().to_string(),
        first_divergence: summary.first_divergence.as_ref().map(|d| DivergenceRecord {
            word: d.word.to_string(),
            recurrence: d.recurrence.to_decimal_strings(),
            closed: d.closed.to_decimal_strings(),
        }),
    }
}

pub fn spectrum_record(s: &SpectrumReport) -> SpectrumRecord {
    SpectrumRecord {
        r: s.r.to_string(),
        lower_bound: dec(&s.lower_bound()),
        upper_bound: dec(&s.upper_bound()),
        min: dec(&s.min),
        max: dec(&s.max),
        realized: s.realized.iter().map(dec).collect(),
        missing: s.missing.iter().map(dec).collect(),
        missing_count: dec(&s.missing_count),
        missing_truncated: s.missing_truncated,
    }
}

fn csv_bytes<S: Serialize>(rows: impl IntoIterator<Item = S>) -> io::Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.serialize(row).map_err(io::Error::other)?;
    }
    w.into_inner().map_err(|e| io::Error::other(e.to_string()))
}

/// Headers are taken from the row type, so empty row sets still get one.
fn csv_with_header<S: Serialize>(header: &[&str], rows: Vec<S>) -> io::Result<Vec<u8>> {
    if rows.is_empty() {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(header).map_err(io::Error::other)?;
        return w.into_inner().map_err(|e| io::Error::other(e.to_string()));
    }
    csv_bytes(rows)
}

const CLASS_HEADER: [&str; 7] = ["word", "r", "s", "q", "codim", "derived", "degree"];

fn write_class_plain(out: &mut dyn Write, rec: &ClassRecord, sgrv: &SmallGrowthVector) -> io::Result<()> {
    writeln!(out, "word: {}", rec.word)?;
    if let Some(p) = &rec.params {
        writeln!(out, "params: s={} k=({}) l=({}) n=({}) q={}", p.s, p.k.join(","), p.l.join(","), p.n.join(","), p.q)?;
    } else {
        writeln!(out, "params: generic")?;
    }
    writeln!(out, "derived: {}", rec.derived.join(" "))?;
    writeln!(out, "sgrv: {}", sgrv_plain(sgrv))?;
    writeln!(out, "degree: {}", rec.degree)?;
    writeln!(out, "codim: {}", rec.codim)
}

enum Failure {
    Usage(String),
    Verification(String),
    Io(io::Error),
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

impl From<word::ParseError> for Failure {
    fn from(e: word::ParseError) -> Self {
        Failure::Usage(format!("parse error: {e}"))
    }
}

impl From<word::WordError> for Failure {
    fn from(e: word::WordError) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<AnalysisError> for Failure {
    fn from(e: AnalysisError) -> Self {
        match e {
            AnalysisError::Word(w) => w.into(),
            other => Failure::Verification(other.to_string()),
        }
    }
}

fn parse_word(text: &str) -> Result<ClassCode, Failure> {
    Ok(word::parse(text)?)
}

fn check_len(r: usize) -> Result<(), Failure> {
    if r < 2 {
        return Err(word::WordError::LengthTooSmall(r).into());
    }
    Ok(())
}

fn structured(out: &mut dyn Write, payload: Payload) -> io::Result<()> {
    writeln!(out, "{}", OutputRecord::new(payload).to_json())
}

fn cmd_derive(cli_format: Format, word: &str, method: Method, out: &mut dyn Write) -> Result<(), Failure> {
    let code = parse_word(word)?;
    let derived = match method {
        Method::Recurrence => derive_recurrence(&code).map_err(|e| Failure::Verification(e.to_string()))?,
        Method::Closed => derived_closed(&code),
        Method::Both => analysis::class_report(&code)?.derived,
    };
    let params = word::extract_params(&code);
    let rec = class_record(&code, &params, &derived);
    match cli_format {
        Format::Plain => {
            let sgrv = small_growth_vector(&derived);
            writeln!(out, "derived: {}", rec.derived.join(" "))?;
            writeln!(out, "sgrv: {}", sgrv_plain(&sgrv))?;
            writeln!(out, "degree: {}", rec.degree)?;
        }
        Format::Csv => out.write_all(&csv_bytes([csv_row(&rec)])?)?,
        Format::Structured => structured(out, Payload::Derive(rec))?,
    }
    Ok(())
}

fn cmd_trace(format: Format, word: &str, out: &mut dyn Write) -> Result<(), Failure> {
    let code = parse_word(word)?;
    let rows = trace_recurrence(&code).map_err(|e| Failure::Verification(e.to_string()))?;
    match format {
        Format::Plain => out.write_all(format_trace(&rows).as_bytes())?,
        Format::Csv => {
            #[derive(Serialize)]
            struct Row {
                step: usize,
                letter: char,
                vector: String,
            }
            let body = csv_bytes(rows.iter().enumerate().map(|(i, r)| Row {
                step: i + 1,
                letter: r.letter.as_char(),
                vector: r.vector.to_string(),
            }))?;
            out.write_all(&body)?;
        }
        Format::Structured => structured(
            out,
            Payload::Trace(TraceRecord {
                word: code.to_string(),
                rows: rows
                    .iter()
                    .map(|r| TraceRowRecord {
                        letter: r.letter.to_string(),
                        vector: r.vector.to_decimal_strings(),
                    })
                    .collect(),
            }),
        )?,
    }
    Ok(())
}

struct EnumerateArgs {
    r: usize,
    count_only: bool,
    report: bool,
    offset: usize,
    limit: Option<usize>,
}

fn cmd_enumerate(format: Format, a: EnumerateArgs, out: &mut dyn Write) -> Result<(), Failure> {
    check_len(a.r)?;
    let count = dec(&count_admissible(a.r)?);
    if a.count_only {
        match format {
            Format::Plain => writeln!(out, "{count}")?,
            Format::Csv => {
                #[derive(Serialize)]
                struct Row<'a> {
                    r: usize,
                    count: &'a str,
                }
                out.write_all(&csv_bytes([Row { r: a.r, count: &count }])?)?
            }
            Format::Structured => structured(
                out,
                Payload::Enumeration(EnumerationPage {
                    r: a.r.to_string(),
                    count,
                    offset: a.offset.to_string(),
                    words: Vec::new(),
                    reports: None,
                }),
            )?,
        }
        return Ok(());
    }

    let page = enumerate_admissible(a.r)?
        .skip(a.offset)
        .take(a.limit.unwrap_or(usize::MAX));
    match format {
        Format::Plain => {
            for w in page {
                if a.report {
                    let d = derive_recurrence(&w).map_err(|e| Failure::Verification(e.to_string()))?;
                    writeln!(out, "{w}  derived: {d}  degree: {}", nonholonomy_degree(&d))?;
                } else {
                    writeln!(out, "{w}")?;
                }
            }
            writeln!(out, "count: {count}")?;
        }
        Format::Csv => {
            if a.report {
                let mut rows = Vec::new();
                for w in page {
                    rows.push(csv_row(&report_record(&analysis::class_report(&w)?)));
                }
                out.write_all(&csv_with_header(&CLASS_HEADER, rows)?)?;
            } else {
                #[derive(Serialize)]
                struct Row {
                    word: String,
                }
                let rows: Vec<Row> = page.map(|w| Row { word: w.to_string() }).collect();
                out.write_all(&csv_with_header(&["word"], rows)?)?;
            }
        }
        Format::Structured => {
            let words: Vec<ClassCode> = page.collect();
            let reports = if a.report {
                let mut recs = Vec::with_capacity(words.len());
                for w in &words {
                    recs.push(report_record(&analysis::class_report(w)?));
                }
                Some(recs)
            } else {
                None
            };
            structured(
                out,
                Payload::Enumeration(EnumerationPage {
                    r: a.r.to_string(),
                    count,
                    offset: a.offset.to_string(),
                    words: words.iter().map(ToString::to_string).collect(),
                    reports,
                }),
            )?;
        }
    }
    Ok(())
}

fn cmd_verify(format: Format, r_max: usize, jobs: Option<usize>, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), Failure> {
    check_len(r_max)?;
    let start = Instant::now();
    let summary = analysis::verify_equivalence(r_max, jobs)?;
    writeln!(err, "verified in {:.3} s", start.elapsed().as_secs_f64())?;
    let rec = verify_record(r_max, &summary);
    match format {
        Format::Plain => {
            for l in &rec.lengths {
                writeln!(out, "r={} classes={} divergences={}", l.r, l.classes, l.divergences)?;
            }
            writeln!(out, "total classes={} divergences={}", rec.total_classes, rec.total_divergences)?;
            if let Some(d) = &rec.first_divergence {
                writeln!(out, "first divergence: {} recurrence: {} closed: {}", d.word, d.recurrence.join(" "), d.closed.join(" "))?;
            }
        }
        Format::Csv => out.write_all(&csv_bytes(rec.lengths.iter())?)?,
        Format::Structured => structured(out, Payload::Verify(rec.clone()))?,
    }
    match summary.first_divergence {
        Some(d) => Err(Failure::Verification(format!(
            "closed form diverges from the recurrence on {}: {} vs {}",
            d.word, d.closed, d.recurrence
        ))),
        None => Ok(()),
    }
}

fn cmd_spectrum(format: Format, r: usize, max_missing: Option<usize>, jobs: Option<usize>, out: &mut dyn Write) -> Result<(), Failure> {
    check_len(r)?;
    let s = analysis::degree_spectrum(r, jobs, max_missing)?;
    let rec = spectrum_record(&s);
    match format {
        Format::Plain => {
            writeln!(out, "r: {}", rec.r)?;
            writeln!(out, "bounds: {} {}", rec.lower_bound, rec.upper_bound)?;
            writeln!(out, "min: {}", rec.min)?;
            writeln!(out, "max: {}", rec.max)?;
            writeln!(out, "realized: {}", rec.realized.join(" "))?;
            let suffix = if rec.missing_truncated { " ..." } else { "" };
            writeln!(out, "missing: {}{suffix}", rec.missing.join(" "))?;
            writeln!(out, "missing_count: {}", rec.missing_count)?;
        }
        Format::Csv => {
            #[derive(Serialize)]
            struct Row<'a> {
                r: &'a str,
                degree: &'a str,
                status: &'a str,
            }
            let rows = rec
                .realized
                .iter()
                .map(|d| (d, "realized"))
                .chain(rec.missing.iter().map(|d| (d, "missing")))
                .map(|(d, status)| Row { r: &rec.r, degree: d, status });
            out.write_all(&csv_bytes(rows)?)?;
        }
        Format::Structured => structured(out, Payload::Spectrum(rec))?,
    }
    Ok(())
}

fn cmd_report(format: Format, word: &str, out: &mut dyn Write) -> Result<(), Failure> {
    let code = parse_word(word)?;
    let rep = analysis::class_report(&code)?;
    let rec = report_record(&rep);
    match format {
        Format::Plain => {
            write_class_plain(out, &rec, &rep.sgrv)?;
            writeln!(out, "big_growth: {}", rec.big_growth.join(" "))?;
            if let Some(t) = &rec.value_table {
                writeln!(out, "values:")?;
                for row in &t.rows {
                    if row.factor == "1" {
                        writeln!(out, "  {}", row.values.join(" "))?;
                    } else {
                        writeln!(out, "  {} ({})", row.factor, row.values.join(" "))?;
                    }
                }
                writeln!(out, "multiplicities: {}", t.multiplicities.join(" "))?;
            }
        }
        Format::Csv => out.write_all(&csv_bytes([csv_row(&rec)])?)?,
        Format::Structured => structured(out, Payload::Report(rec))?,
    }
    Ok(())
}

/// Parses `args` (including the program name) and runs the command, writing
/// results to `out` and diagnostics to `err`. Returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let target: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    let format = cli.format;
    let jobs = cli.jobs;
    let result = match cli.command {
        Command::Derive { word, method } => cmd_derive(format, &word, method, out),
        Command::Trace { word } => cmd_trace(format, &word, out),
        Command::Enumerate { r, count_only, report, offset, limit } => cmd_enumerate(
            format,
            EnumerateArgs { r, count_only, report, offset, limit },
            out,
        ),
        Command::Verify { r_max } => cmd_verify(format, r_max, jobs, out, err),
        Command::Spectrum { r, max_missing } => cmd_spectrum(format, r, max_missing, jobs, out),
        Command::Report { word } => cmd_report(format, &word, out),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Verification(msg)) => {
            let _ = writeln!(err, "verification failed: {msg}");
            EXIT_FAILURE
        }
        Err(Failure::Io(e)) if e.kind() == io::ErrorKind::BrokenPipe => EXIT_OK,
        Err(Failure::Io(e)) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_FAILURE
        }
    }
}
