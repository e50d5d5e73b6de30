use std::ffi::OsString;
use std::io::Write;
use std::net::IpAddr;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use stream_audit::agreement::{AlphaMetric, KappaWeighting};
use stream_audit::error::ScoreError;
use stream_audit::grading::{parse_session, serialize_session, GraderSession, ScoringConfig, DEFAULT_FULL_CREDIT_THRESHOLD};
use stream_audit::metadata::{AnswerFormat, BaselineKind, EvaluationMetadata, FormatShare, GradingMethod, SimpleFormat};
use stream_audit::render::{export_scorecard, import_scorecard, render_svg, render_text, Glyphs, Theme};
use stream_audit::report::{report_digest, schema_descriptor, validate_report_against};
use stream_audit::rubric::rubric_to_json;
use stream_audit::scaffold::{export_checklist, scaffold_report, ChecklistFormat, Detail};
use stream_audit::Rubric;

use crate::workflow::{self, to_document, WorkflowError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FINDINGS: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_IO: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "stream-audit", version, about = "Audit AI evaluation reports against the STREAM v1 reporting standard")]
pub struct Cli {
    /// Rubric to grade against: `builtin` or a path to a stream-rubric/v1 file.
    #[arg(long, global = true, default_value = "builtin")]
    pub rubric: String,
    /// Share of applicable full-credit items needed for Satisfied.
    #[arg(long, global = true, value_parser = parse_threshold)]
    pub threshold: Option<f64>,
    /// Produce a provisional scorecard when judgments are still pending.
    #[arg(long, global = true)]
    pub allow_pending: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a blank report skeleton for the planned evaluations.
    Scaffold {
        /// One per evaluation, as FORMAT:GRADING:BASELINE, e.g. `open_ended:both:human_baseline`.
        /// Mixed formats take shares: `mixed(multiple_choice=0.6,short_answer=0.4):auto_graded:no_human_baseline`.
        #[arg(long = "plan", required = true, value_parser = parse_plan)]
        plans: Vec<EvaluationMetadata>,
        /// Inline the criterion texts as guidance comments.
        #[arg(long)]
        guidance: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Check a report's structure; exits 1 when there are findings.
    Validate {
        report: PathBuf,
        #[arg(long, value_enum, default_value = "text")]
        format: DocFormat,
    },
    /// Resolve every requirement that can be checked mechanically.
    Assess {
        report: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Start an empty grading session for a report.
    NewSession {
        report: PathBuf,
        #[arg(long)]
        grader: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Apply a grading session to the auto-assessment.
    Grade {
        report: PathBuf,
        #[arg(long)]
        session: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Grade and score a report; later sessions win where they overlap.
    Score {
        report: PathBuf,
        #[arg(long, num_args = 1.., required = true)]
        sessions: Vec<PathBuf>,
        #[arg(long, value_enum, default_value = "json")]
        format: ScoreFormat,
        #[arg(long)]
        ascii: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Draw an exported scorecard.
    Render {
        scorecard: PathBuf,
        #[arg(long, value_enum, default_value = "svg")]
        format: RenderFormat,
        #[arg(long)]
        ascii: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Inter-grader agreement over independently graded sessions.
    Agreement {
        #[arg(long)]
        report: PathBuf,
        #[arg(long, num_args = 2.., required = true)]
        sessions: Vec<PathBuf>,
        #[arg(long, value_enum, default_value = "quadratic")]
        weighting: Weighting,
        #[arg(long, value_enum, default_value = "interval")]
        metric: Metric,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Print the reporting checklist.
    Checklist {
        #[arg(long, value_enum, default_value = "summary")]
        detail: DetailArg,
        #[arg(long, value_enum, default_value = "markdown")]
        format: ChecklistArg,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Print a machine-readable descriptor.
    Schema {
        #[arg(value_enum, default_value = "report")]
        which: SchemaKind,
    },
    /// Run the HTTP grading service.
    Serve {
        #[arg(long, default_value_t = 8080)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        bind: IpAddr,
        #[arg(long, env = "STREAM_AUDIT_DATA_DIR", default_value = "stream-audit-data")]
        data_dir: PathBuf,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum DocFormat {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ScoreFormat {
    Json,
    Text,
    Svg,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum RenderFormat {
    Svg,
    Text,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Weighting {
    None,
    Linear,
    Quadratic,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Metric {
    Nominal,
    Ordinal,
    Interval,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum DetailArg {
    Summary,
    Expanded,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ChecklistArg {
    Text,
    Markdown,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum SchemaKind {
    Report,
    Rubric,
}

impl From<Weighting> for KappaWeighting {
    fn from(w: Weighting) -> Self {
        match w {
            Weighting::None => KappaWeighting::None,
            Weighting::Linear => KappaWeighting::Linear,
            Weighting::Quadratic => KappaWeighting::Quadratic,
        }
    }
}

impl From<Metric> for AlphaMetric {
    fn from(m: Metric) -> Self {
        match m {
            Metric::Nominal => AlphaMetric::Nominal,
            Metric::Ordinal => AlphaMetric::Ordinal,
            Metric::Interval => AlphaMetric::Interval,
        }
    }
}

fn parse_threshold(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|_| format!("`{s}` is not a number"))?;
    if (0.0..=1.0).contains(&v) {
        Ok(v)
    } else {
        Err(format!("{v} is outside 0..1"))
    }
}

fn snake<T: serde::de::DeserializeOwned>(what: &str, s: &str) -> Result<T, String> {
    serde_json::from_value(serde_json::Value::String(s.trim().to_string())).map_err(|_| format!("unknown {what} `{s}`"))
}

fn parse_format(s: &str) -> Result<AnswerFormat, String> {
    let Some(inner) = s.strip_prefix("mixed(").and_then(|r| r.strip_suffix(')')) else {
        return snake("answer format", s);
    };
    let mut shares = Vec::new();
    for part in inner.split(',') {
        let (name, share) = part.split_once('=').ok_or_else(|| format!("mixed share `{part}` needs FORMAT=PROPORTION"))?;
        let format: SimpleFormat = snake("answer format", name)?;
        let proportion = share.trim().parse().map_err(|_| format!("`{share}` is not a proportion"))?;
        shares.push(FormatShare { format, proportion });
    }
    Ok(AnswerFormat::Mixed(shares))
}

pub fn parse_plan(s: &str) -> Result<EvaluationMetadata, String> {
    let (rest, baseline) = s.rsplit_once(':').ok_or("expected FORMAT:GRADING:BASELINE")?;
    let (format, grading) = rest.rsplit_once(':').ok_or("expected FORMAT:GRADING:BASELINE")?;
    let meta = EvaluationMetadata::new(
        parse_format(format)?,
        snake::<GradingMethod>("grading method", grading)?,
        snake::<BaselineKind>("baseline kind", baseline)?,
    );
    match meta.problems().as_slice() {
        [] => Ok(meta),
        problems => Err(problems.join("; ")),
    }
}

/// A failed invocation with its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn io(message: impl Into<String>) -> Self {
        Failure { code: EXIT_IO, message: message.into() }
    }
}

impl From<WorkflowError> for Failure {
    fn from(e: WorkflowError) -> Self {
        match e {
            WorkflowError::Score(ScoreError::Pending(n)) => {
                Failure { code: EXIT_FINDINGS, message: format!("{n} judgments pending; pass --allow-pending for a provisional scorecard") }
            }
            other => Failure::io(other.to_string()),
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::io(format!("{}: {e}", path.display())))
}

fn read_session(path: &Path) -> Result<GraderSession, Failure> {
    parse_session(&read(path)?).map_err(|e| Failure::io(format!("{}: {e}", path.display())))
}

fn load_report(path: &Path, err: &mut dyn Write) -> Result<stream_audit::report::ParsedReport, Failure> {
    let parsed = workflow::load_report(&read(path)?).map_err(|e| Failure::io(format!("{}: {e}", path.display())))?;
    for w in &parsed.warnings {
        let _ = writeln!(err, "warning: {w}");
    }
    Ok(parsed)
}

/// Writes to the output file atomically, or to `out` when there is none.
fn emit(output: Option<&Path>, text: &str, out: &mut dyn Write) -> Result<(), Failure> {
    match output {
        Some(path) => write_atomic(path, text.as_bytes()).map_err(|e| Failure::io(format!("{}: {e}", path.display()))),
        None => out.write_all(text.as_bytes()).map_err(|e| Failure::io(e.to_string())),
    }
}

pub fn write_atomic(path: &Path, bytes: &[u8]) -> std::io::Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    let tmp = dir.join(format!(".{name}.{}.tmp", std::process::id()));
    std::fs::write(&tmp, bytes)?;
    std::fs::rename(&tmp, path).inspect_err(|_| {
        let _ = std::fs::remove_file(&tmp);
    })
}

fn now() -> String {
    chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true)
}

fn load_rubric(spec: &str) -> Result<Rubric, Failure> {
    let source = if matches!(spec, "builtin" | "stream-v1") { spec.to_string() } else { read(Path::new(spec))? };
    Rubric::from_name_or_source(&source).map_err(|e| Failure::io(format!("rubric {spec}: {e}")))
}

/// Parses `args` and runs the command, returning the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(rendered.as_bytes()) } else { out.write_all(rendered.as_bytes()) };
            return code;
        }
    };
    match execute(cli, out, err) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn execute(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Failure> {
    let rubric = load_rubric(&cli.rubric)?;
    let config = ScoringConfig {
        full_credit_threshold: cli.threshold.unwrap_or(DEFAULT_FULL_CREDIT_THRESHOLD),
        allow_pending: cli.allow_pending,
    };
    match cli.command {
        Command::Scaffold { plans, guidance, output } => {
            let text = scaffold_report(&rubric, &plans, guidance).map_err(|e| Failure { code: EXIT_USAGE, message: e.to_string() })?;
            emit(output.as_deref(), &text, out)?;
        }
        Command::Validate { report, format } => {
            let parsed = load_report(&report, err)?;
            let findings = validate_report_against(&parsed.report, &rubric);
            let text = match format {
                DocFormat::Json => to_document(&findings),
                DocFormat::Text => findings.iter().map(|f| format!("{f}\n")).collect(),
            };
            emit(None, &text, out)?;
            if !findings.is_empty() {
                let _ = writeln!(err, "{} findings", findings.len());
                return Ok(EXIT_FINDINGS);
            }
        }
        Command::Assess { report, output } => {
            let parsed = load_report(&report, err)?;
            let assessment = workflow::assess_with_sessions(&parsed, &[], &rubric)?;
            emit(output.as_deref(), &to_document(&assessment), out)?;
            let _ = writeln!(err, "{} judgments pending", assessment.pending());
        }
        Command::NewSession { report, grader, output } => {
            let parsed = load_report(&report, err)?;
            let t = now();
            let session = GraderSession::new(&grader, &report_digest(&parsed.report), &rubric.version, &t);
            emit(output.as_deref(), &serialize_session(&session), out)?;
        }
        Command::Grade { report, session, output } => {
            let parsed = load_report(&report, err)?;
            let session = read_session(&session)?;
            let assessment = workflow::assess_with_sessions(&parsed, &[session], &rubric)?;
            emit(output.as_deref(), &to_document(&assessment), out)?;
            let _ = writeln!(err, "{} judgments pending", assessment.pending());
        }
        Command::Score { report, sessions, format, ascii, output } => {
            let parsed = load_report(&report, err)?;
            let sessions = sessions.iter().map(|p| read_session(p)).collect::<Result<Vec<_>, _>>()?;
            let card = workflow::scorecard(&parsed, &sessions, &rubric, &config)?;
            let text = match format {
                ScoreFormat::Json => export_scorecard(&card),
                ScoreFormat::Svg => render_svg(&card, &Theme::default()),
                ScoreFormat::Text => render_text(&card, glyphs(ascii)),
            };
            emit(output.as_deref(), &text, out)?;
            if card.provisional {
                let _ = writeln!(err, "provisional: {} judgments pending", card.pending);
            }
        }
        Command::Render { scorecard, format, ascii, output } => {
            let card = import_scorecard(&read(&scorecard)?).map_err(|e| Failure::io(format!("{}: {e}", scorecard.display())))?;
            let text = match format {
                RenderFormat::Svg => render_svg(&card, &Theme::default()),
                RenderFormat::Text => render_text(&card, glyphs(ascii)),
            };
            emit(output.as_deref(), &text, out)?;
        }
        Command::Agreement { report, sessions, weighting, metric, output } => {
            let parsed = load_report(&report, err)?;
            let sessions = sessions.iter().map(|p| read_session(p)).collect::<Result<Vec<_>, _>>()?;
            let doc = workflow::agreement(&parsed, &sessions, &rubric, weighting.into(), metric.into())?;
            emit(output.as_deref(), &to_document(&doc), out)?;
        }
        Command::Checklist { detail, format, output } => {
            let detail = match detail {
                DetailArg::Summary => Detail::Summary,
                DetailArg::Expanded => Detail::Expanded,
            };
            let format = match format {
                ChecklistArg::Text => ChecklistFormat::Text,
                ChecklistArg::Markdown => ChecklistFormat::Markdown,
            };
            emit(output.as_deref(), &export_checklist(&rubric, detail, format), out)?;
        }
        Command::Schema { which } => {
            let text = match which {
                SchemaKind::Report => to_document(&schema_descriptor()),
                SchemaKind::Rubric => rubric_to_json(&rubric),
            };
            emit(None, &text, out)?;
        }
        Command::Serve { port, bind, data_dir } => {
            let runtime = tokio::runtime::Runtime::new().map_err(|e| Failure::io(e.to_string()))?;
            runtime
                .block_on(crate::service::serve(std::net::SocketAddr::new(bind, port), data_dir, rubric))
                .map_err(|e| Failure::io(e.to_string()))?;
        }
    }
    Ok(EXIT_OK)
}

fn glyphs(ascii: bool) -> Glyphs {
    if ascii {
        Glyphs::Ascii
    } else {
        Glyphs::Unicode
    }
}
