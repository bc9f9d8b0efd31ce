use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use repcat_core::ar_model::{a_component, build_gamma_full, build_gamma_np, canonicalize, DCoord};
use repcat_core::cluster_tilting::{
    check_p_triangulation, enumerate_in, OrbitCategory, SearchBudget, TiltingSet,
};
use repcat_core::equivalence::phi_p_inverse;
use repcat_core::export::{matrix_csv, to_csv, to_dot, to_json, to_text};
use repcat_core::polygon_model::{
    build_gamma_circle, enumerate_edges, render_svg, PolygonConfig, TaggedEdge,
};
use repcat_core::report::{run_suite, CheckResult, Report, Suite};
use repcat_core::translation_quiver::TranslationQuiver;
use repcat_core::Error;

const BUDGET_ENV: &str = "REPCAT_BUDGET_MS";

#[derive(Parser)]
#[command(
    name = "repcat",
    version,
    about = "Repetitive cluster categories of type D"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// Type D_n, n >= 3.
    #[arg(long)]
    n: u32,
    /// Orbit parameter, p >= 1.
    #[arg(long, default_value_t = 1)]
    p: u32,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Write to this file instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Search budget in milliseconds; overrides REPCAT_BUDGET_MS.
    #[arg(long)]
    budget: Option<u64>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Dot,
    Svg,
    Csv,
    Text,
}

#[derive(Clone, Copy, ValueEnum)]
enum Which {
    #[value(name = "gamma_np")]
    GammaNp,
    #[value(name = "gamma_circle")]
    GammaCircle,
    #[value(name = "gamma_full")]
    GammaFull,
    #[value(name = "a_component")]
    AComponent,
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    Iso,
    Diagram,
    Decomposition,
    Serre,
    Cy,
    All,
}

#[derive(Clone, Copy, ValueEnum)]
enum Action {
    Enumerate,
    Count,
    Check,
    /// Compatibility matrix of the indecomposables.
    Matrix,
}

#[derive(Subcommand)]
enum Command {
    /// Emit one of the translation quivers.
    Quiver {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum)]
        which: Which,
    },
    /// Dimension of Hom (or Ext^1) between two tagged edges.
    Hom {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
        #[arg(long)]
        ext: bool,
    },
    /// Run a verification suite and print a report.
    Verify {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum)]
        suite: SuiteArg,
    },
    /// Cluster-tilting objects.
    Tilting {
        #[command(flatten)]
        common: Common,
        #[arg(value_enum)]
        action: Action,
    },
}

enum Failure {
    Core(Error),
    Usage(String),
    Io(std::io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e)
    }
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Io(_) => 1,
            Failure::Core(e) => match e {
                Error::Parse(_) => 2,
                Error::InvalidParams { .. }
                | Error::InvalidLevel { .. }
                | Error::NotZeroLevel(_)
                | Error::LabelOutOfRange { .. }
                | Error::InvalidEdge(_)
                | Error::DomainIndexOutOfRange { .. } => 3,
                Error::BudgetExceeded => 4,
                _ => 1,
            },
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Core(e) => e.fmt(f),
            Failure::Usage(s) => f.write_str(s),
            Failure::Io(e) => e.fmt(f),
        }
    }
}

/// Output text and whether the command succeeded.
struct Outcome {
    text: String,
    ok: bool,
}

impl Outcome {
    fn ok(text: String) -> Self {
        Outcome { text, ok: true }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let common = match &cli.command {
        Command::Quiver { common, .. }
        | Command::Hom { common, .. }
        | Command::Verify { common, .. }
        | Command::Tilting { common, .. } => common.clone(),
    };
    let result = run(cli.command).and_then(|outcome| {
        emit(&common, &outcome.text)?;
        Ok(outcome.ok)
    });
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("repcat: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn emit(common: &Common, text: &str) -> Result<(), Failure> {
    match &common.out {
        Some(path) => std::fs::write(path, text)?,
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn run(command: Command) -> Result<Outcome, Failure> {
    match command {
        Command::Quiver { common, which } => cmd_quiver(&common, which),
        Command::Hom {
            common,
            from,
            to,
            ext,
        } => cmd_hom(&common, &from, &to, ext),
        Command::Verify { common, suite } => cmd_verify(&common, suite),
        Command::Tilting { common, action } => cmd_tilting(&common, action),
    }
}

fn serialize_quiver<V>(
    g: &TranslationQuiver<V>,
    format: Format,
    name: &str,
) -> Result<String, Failure>
where
    V: repcat_core::translation_quiver::VertexId + std::fmt::Display + serde::Serialize,
{
    Ok(match format {
        Format::Json => to_json(g),
        Format::Dot => to_dot(g, name),
        Format::Csv => to_csv(g),
        Format::Text => to_text(g),
        Format::Svg => {
            return Err(Failure::Usage(
                "svg output is only available for gamma_circle".into(),
            ))
        }
    })
}

fn cmd_quiver(common: &Common, which: Which) -> Result<Outcome, Failure> {
    let (n, p) = (common.n, common.p);
    let format = common.format.unwrap_or(Format::Json);
    let text = match which {
        Which::GammaNp => {
            let g = build_gamma_np(n, p)?;
            serialize_quiver(g.quiver(), format, &format!("gamma_{n}_{p}"))?
        }
        Which::GammaFull => {
            let g = build_gamma_full(n * p)?;
            serialize_quiver(g.quiver(), format, &format!("gamma_full_{}", n * p))?
        }
        Which::AComponent => {
            let g = a_component(n, p)?;
            serialize_quiver(&g, format, &format!("a_component_{n}_{p}"))?
        }
        Which::GammaCircle => {
            let cfg = PolygonConfig::new(n, p)?;
            if format == Format::Svg {
                render_svg(cfg, &enumerate_edges(cfg))
            } else {
                let g = build_gamma_circle(cfg)?;
                serialize_quiver(&g, format, &format!("gamma_circle_{n}_{p}"))?
            }
        }
    };
    Ok(Outcome::ok(text))
}

fn edge_object(literal: &str, n: u32, p: u32) -> Result<DCoord, Failure> {
    let m: TaggedEdge = literal.parse()?;
    Ok(phi_p_inverse(m, n, p)?)
}

fn cmd_hom(common: &Common, from: &str, to: &str, ext: bool) -> Result<Outcome, Failure> {
    let (n, p) = (common.n, common.p);
    PolygonConfig::new(n, p)?;
    let x = edge_object(from, n, p)?;
    let y = edge_object(to, n, p)?;
    let cat = OrbitCategory::new(n, p)?;
    let (x, y) = (canonicalize(x, n, p).0, canonicalize(y, n, p).0);
    let dim = if ext { cat.ext1(x, y) } else { cat.hom(x, y) };
    let text = match common.format.unwrap_or(Format::Text) {
        Format::Text => format!("{dim}\n"),
        Format::Json => {
            let v = serde_json::json!({
                "from": from,
                "to": to,
                "kind": if ext { "ext1" } else { "hom" },
                "dim": dim,
            });
            format!("{v}\n")
        }
        _ => return Err(Failure::Usage("hom supports text and json output".into())),
    };
    Ok(Outcome::ok(text))
}

fn report_text(report: &Report, format: Format) -> Result<String, Failure> {
    match format {
        Format::Json => Ok(serde_json::to_string_pretty(report).expect("report serializes") + "\n"),
        Format::Text => {
            let mut out = String::new();
            for c in &report.checks {
                let status = if c.passed() { "ok" } else { "fail" };
                out.push_str(&format!("{status} {}\n", c.check));
                if !c.passed() {
                    out.push_str(&format!("  witness: {}\n", c.witness));
                }
            }
            Ok(out)
        }
        _ => Err(Failure::Usage(
            "reports support json and text output".into(),
        )),
    }
}

fn cmd_verify(common: &Common, suite: SuiteArg) -> Result<Outcome, Failure> {
    let suite = match suite {
        SuiteArg::Iso => Suite::Iso,
        SuiteArg::Diagram => Suite::Diagram,
        SuiteArg::Decomposition => Suite::Decomposition,
        SuiteArg::Serre => Suite::Serre,
        SuiteArg::Cy => Suite::Cy,
        SuiteArg::All => Suite::All,
    };
    let report = run_suite(suite, common.n, common.p)?;
    let text = report_text(&report, common.format.unwrap_or(Format::Json))?;
    Ok(Outcome {
        text,
        ok: report.passed(),
    })
}

fn budget(common: &Common) -> Result<SearchBudget, Failure> {
    let ms = match common.budget {
        Some(ms) => Some(ms),
        None => match std::env::var(BUDGET_ENV) {
            Ok(s) => Some(s.trim().parse().map_err(|_| {
                Failure::Usage(format!("{BUDGET_ENV} must be milliseconds, got {s:?}"))
            })?),
            Err(_) => None,
        },
    };
    Ok(ms.map_or_else(SearchBudget::unlimited, SearchBudget::with_millis))
}

fn set_literals(t: &TiltingSet, n: u32, p: u32) -> Result<Vec<String>, Failure> {
    Ok(t.edges(n, p)?.iter().map(ToString::to_string).collect())
}

fn cmd_tilting(common: &Common, action: Action) -> Result<Outcome, Failure> {
    let (n, p) = (common.n, common.p);
    let budget = budget(common)?;
    let cat = OrbitCategory::new(n, p)?;
    let format = common.format;
    if let Action::Matrix = action {
        if !matches!(format, None | Some(Format::Csv)) {
            return Err(Failure::Usage(
                "the compatibility matrix is csv only".into(),
            ));
        }
        let labels = cat
            .objects()
            .iter()
            .map(|o| repcat_core::equivalence::phi_p(o.coord(), n, p))
            .collect::<Result<Vec<_>, _>>()?;
        return Ok(Outcome::ok(matrix_csv(
            &labels,
            &cat.compatibility_matrix(),
        )));
    }
    let sets = enumerate_in(&cat, &budget)?.tilting;
    match action {
        Action::Enumerate => {
            let listed = sets
                .iter()
                .map(|t| set_literals(t, n, p))
                .collect::<Result<Vec<_>, _>>()?;
            let text = match format.unwrap_or(Format::Json) {
                Format::Json => {
                    serde_json::to_string_pretty(&listed).expect("strings serialize") + "\n"
                }
                Format::Text => listed.iter().map(|s| s.join(" ") + "\n").collect(),
                _ => {
                    return Err(Failure::Usage(
                        "enumerate supports json and text output".into(),
                    ))
                }
            };
            Ok(Outcome::ok(text))
        }
        Action::Count => {
            let text = match format.unwrap_or(Format::Text) {
                Format::Text => format!("{}\n", sets.len()),
                Format::Json => format!("{}\n", serde_json::json!({"count": sets.len()})),
                _ => return Err(Failure::Usage("count supports text and json output".into())),
            };
            Ok(Outcome::ok(text))
        }
        Action::Check => {
            let small = OrbitCategory::new(n, 1)?;
            let mut failures = Vec::new();
            for t in &sets {
                let (_, r) = check_p_triangulation(t, &small, n, p)?;
                if !r.is_ok() {
                    failures.push(r);
                }
            }
            let checks = vec![
                CheckResult::from_failures("p_triangulation", &failures),
                if sets.len() == small_count(&small, &budget)? {
                    CheckResult::ok("count_matches_p1")
                } else {
                    CheckResult::fail("count_matches_p1", sets.len())
                },
            ];
            let report = Report { n, p, checks };
            let text = report_text(&report, format.unwrap_or(Format::Json))?;
            Ok(Outcome {
                text,
                ok: report.passed(),
            })
        }
        Action::Matrix => unreachable!("handled above"),
    }
}

fn small_count(small: &OrbitCategory, budget: &SearchBudget) -> Result<usize, Failure> {
    Ok(enumerate_in(small, budget)?.tilting.len())
}
