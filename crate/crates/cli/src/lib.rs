//! Command-line driver: catalog export, property checks, simplicity,
//! derivations, identities and reduced algebras on JSON algebra files.

pub mod catalog;
pub mod file;
pub mod report;

use std::io::Read;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use nalg_core::checks::{
    check_binary_jordan, check_dxy_identity, check_jts_identity, check_total_commutativity, dxy_sides,
};
use nalg_core::derivations::{compare, derivation_algebra, inner_derivation_space, skew_space, Inclusion};
use nalg_core::ideals::{describe_subspace, simplicity, SimplicityCertificate, SimplicityStatus};
use nalg_core::identities::{identity_space, lifting_span, parse_identity, verify_identity, Mode};
use nalg_core::{AlgebraError, ArgGroup, FieldError, LinalgError, NAryAlgebra, Verdict, Witness, WitnessKind};
use thiserror::Error;

pub use catalog::CatalogArgs;
use report::{Report, ReportStatus, WitnessReport};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("invalid algebra file: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
}

impl From<FieldError> for CliError {
    fn from(e: FieldError) -> Self {
        CliError::Algebra(e.into())
    }
}

impl From<LinalgError> for CliError {
    fn from(e: LinalgError) -> Self {
        CliError::Algebra(e.into())
    }
}

/// Exit code for input and usage errors.
pub const INPUT_ERROR: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "nalg",
    version,
    about = "Exact computations with finite-dimensional n-ary algebras"
)]
pub struct Cli {
    /// Worker threads (default: available parallelism). Results do not depend on it.
    #[arg(long, global = true, env = "NALG_PAR")]
    pub par: Option<usize>,
    /// Print reports as JSON.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Emit a catalog algebra as an algebra file.
    Catalog(CatalogArgs),
    /// Check a structural identity; exit 0 on pass, 1 with a witness on failure.
    Check {
        kind: CheckKind,
        file: PathBuf,
        /// For `dxy`: evaluate at these arguments instead of scanning the basis,
        /// each a comma-separated list of elements such as `a,b`.
        #[arg(long, allow_hyphen_values = true)]
        x: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        y: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        z: Option<String>,
    },
    /// Decide simplicity; exit 0 simple, 1 not simple, 2 undetermined.
    Simple { file: PathBuf },
    /// Derivation algebra, optionally compared with inner derivations and skew operators.
    Der {
        file: PathBuf,
        #[arg(long)]
        inner: bool,
        #[arg(long = "compare-skew")]
        compare_skew: bool,
    },
    /// Multilinear identities of degree 1 or 2.
    Identities(IdentityArgs),
    /// Freeze one argument and emit the reduced algebra file.
    Reduce {
        file: PathBuf,
        /// 1-based slot.
        #[arg(long)]
        slot: usize,
        /// Element as a combination of basis labels, e.g. `b1` or `2*b1 - b2`.
        #[arg(long, allow_hyphen_values = true)]
        element: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Algebra file utilities.
    File {
        #[command(subcommand)]
        action: FileCommand,
    },
}

#[derive(Debug, Subcommand)]
pub enum FileCommand {
    /// Parse a file and confirm that it round-trips exactly.
    Validate { file: PathBuf },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CheckKind {
    Commutative,
    Dxy,
    Jts,
    BinaryJordan,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    General,
    Commutative,
}

#[derive(Debug, Clone, clap::Args)]
pub struct IdentityArgs {
    pub file: PathBuf,
    #[arg(long, default_value_t = 1)]
    pub degree: usize,
    #[arg(long, value_enum, default_value_t = ModeArg::General)]
    pub mode: ModeArg,
    /// `lifting` (consequences of the degree-1 identities) or another algebra file.
    #[arg(long)]
    pub modulo: Option<String>,
    /// Verify an identity such as `[y,x,x] = [x,x,y]`; exit 1 if it fails.
    #[arg(long, allow_hyphen_values = true)]
    pub verify: Vec<String>,
}

/// Result of one invocation: what to print and how to exit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn error(e: &CliError) -> Self {
        Outcome {
            code: INPUT_ERROR,
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        }
    }
}

pub fn read_input(path: &Path) -> Result<String, CliError> {
    let io = |source| CliError::Io {
        path: path.display().to_string(),
        source,
    };
    if path == Path::new("-") {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(io)?;
        Ok(s)
    } else {
        std::fs::read_to_string(path).map_err(io)
    }
}

fn load(path: &Path) -> Result<NAryAlgebra, CliError> {
    file::parse(&read_input(path)?)
}

/// Print the algebra file, or write it to `out` and say so.
fn emit_file(alg: &NAryAlgebra, out: Option<&Path>) -> Result<Outcome, CliError> {
    let text = file::emit(alg) + "\n";
    let stdout = match out {
        None => text,
        Some(p) => {
            std::fs::write(p, text).map_err(|source| CliError::Io {
                path: p.display().to_string(),
                source,
            })?;
            format!("wrote {}\n", p.display())
        }
    };
    Ok(Outcome {
        code: 0,
        stdout,
        stderr: String::new(),
    })
}

fn verdict_report(command: String, alg: &NAryAlgebra, v: &Verdict) -> Report {
    let status = if v.passed() {
        ReportStatus::Pass
    } else {
        ReportStatus::Fail
    };
    let mut r = Report::new(command, status);
    r.witness = v.witness.as_ref().map(|w| WitnessReport::new(alg, w));
    r
}

/// Explicit `D_{x,y}` arguments, if any were given.
pub struct DxyArgs<'a> {
    pub x: Option<&'a str>,
    pub y: Option<&'a str>,
    pub z: Option<&'a str>,
}

fn parse_list(alg: &NAryAlgebra, text: &str) -> Result<Vec<nalg_core::Element>, CliError> {
    text.split(',').map(|t| Ok(alg.parse_element(t)?)).collect()
}

fn dxy_at(alg: &NAryAlgebra, args: &DxyArgs) -> Result<Option<Verdict>, CliError> {
    let (x, y, z) = match (args.x, args.y, args.z) {
        (None, None, None) => return Ok(None),
        (Some(x), Some(y), Some(z)) => (parse_list(alg, x)?, parse_list(alg, y)?, parse_list(alg, z)?),
        _ => return Err(CliError::Input("--x, --y and --z must be given together".into())),
    };
    let (l, r) = dxy_sides(alg, &x, &y, &z)?;
    if l == r {
        return Ok(Some(Verdict::pass()));
    }
    let groups = vec![ArgGroup::new("x", x), ArgGroup::new("y", y), ArgGroup::new("z", z)];
    Ok(Some(Verdict::fail(Witness::new(WitnessKind::Dxy, groups, l, r))))
}

fn cmd_check(kind: CheckKind, path: &Path, at: &DxyArgs) -> Result<Report, CliError> {
    let alg = load(path)?;
    if kind != CheckKind::Dxy && (at.x.is_some() || at.y.is_some() || at.z.is_some()) {
        return Err(CliError::Input("--x, --y and --z apply to dxy only".into()));
    }
    if let Some(v) = dxy_at(&alg, at)? {
        return Ok(verdict_report(
            format!("check dxy {} (given arguments)", path.display()),
            &alg,
            &v,
        ));
    }
    let (name, verdict) = match kind {
        CheckKind::Commutative => ("commutative", check_total_commutativity(&alg)),
        CheckKind::Dxy => ("dxy", check_dxy_identity(&alg)),
        CheckKind::Jts => ("jts", check_jts_identity(&alg)?),
        CheckKind::BinaryJordan => ("binary-jordan", check_binary_jordan(&alg)?),
    };
    Ok(verdict_report(
        format!("check {name} {}", path.display()),
        &alg,
        &verdict,
    ))
}

fn cmd_simple(path: &Path) -> Result<Report, CliError> {
    let alg = load(path)?;
    let s = simplicity(&alg);
    let status = match s.status {
        SimplicityStatus::Simple => ReportStatus::Simple,
        SimplicityStatus::NotSimple => ReportStatus::NotSimple,
        SimplicityStatus::Undetermined => ReportStatus::Undetermined,
    };
    let mut r = Report::new(format!("simple {}", path.display()), status);
    match &s.certificate {
        Some(SimplicityCertificate::Burnside { dim }) => r.line(format!(
            "certificate: multiplication operators generate a matrix algebra of dimension {dim}"
        )),
        Some(SimplicityCertificate::WitnessSpin { generator }) => r.line(format!(
            "certificate: ideal generated by {}",
            alg.format_element(generator)
        )),
        Some(SimplicityCertificate::Abelian) => r.line("certificate: the product is zero"),
        None => r.line("no certificate: no proper ideal among the candidates, operators do not generate End(V)"),
    }
    if let Some(ideal) = &s.ideal {
        r.line(format!("ideal = span{{{}}}", describe_subspace(&alg, ideal).join(", ")));
    }
    Ok(r)
}

fn relation(a: &str, b: &str, inc: Inclusion) -> String {
    match inc {
        Inclusion::Equal => format!("{a} = {b}"),
        Inclusion::FirstInSecond => format!("{a} ⊊ {b}"),
        Inclusion::SecondInFirst => format!("{b} ⊊ {a}"),
        Inclusion::Incomparable => format!("{a} and {b} are incomparable"),
    }
}

fn cmd_der(path: &Path, inner: bool, compare_skew: bool) -> Result<Report, CliError> {
    let alg = load(path)?;
    let der = derivation_algebra(&alg);
    let mut r = Report::new(format!("der {}", path.display()), ReportStatus::Done);
    let mut summary = vec![format!("dim Der = {}", der.dim())];
    let inder_rel = if inner {
        let inder = inner_derivation_space(&alg);
        summary.push(format!("dim Inder = {}", inder.dim()));
        Some(compare(&der, &inder)?)
    } else {
        None
    };
    let skew_rel = if compare_skew {
        Some(compare(&der, &skew_space(alg.field(), alg.dim()))?)
    } else {
        None
    };
    match (inder_rel, skew_rel) {
        (Some(Inclusion::Equal), Some(Inclusion::Equal)) => summary.push("Der = Inder = skew".into()),
        (i, s) => {
            summary.extend(i.map(|i| relation("Der", "Inder", i)));
            summary.extend(s.map(|s| relation("Der", "skew", s)));
        }
    }
    r.line(summary.join("; "));
    for (k, m) in der.operators().iter().enumerate() {
        let rows: Vec<String> = (0..m.rows())
            .map(|i| {
                format!(
                    "[{}]",
                    m.row(i).iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")
                )
            })
            .collect();
        r.line(format!("D{} = [{}]", k + 1, rows.join(", ")));
    }
    Ok(r)
}

fn cmd_identities(args: &IdentityArgs) -> Result<Report, CliError> {
    let alg = load(&args.file)?;
    let mode = match args.mode {
        ModeArg::General => Mode::General,
        ModeArg::Commutative => Mode::Commutative,
    };
    let space = identity_space(&alg, args.degree, mode)?;
    let mode_name = format!("{:?}", args.mode).to_lowercase();
    let mut r = Report::new(
        format!(
            "identities {} --degree {} --mode {mode_name}",
            args.file.display(),
            args.degree
        ),
        ReportStatus::Done,
    );
    r.line(format!("monomials: {}", space.monomials().len()));
    r.line(format!("solution dimension {}", space.dim()));
    if !space.linearization_exact() {
        r.line(format!(
            "note: in characteristic {} multilinear identities need not capture all identities of degree {}",
            alg.field().characteristic(),
            args.degree
        ));
    }
    for g in space.describe() {
        r.line(format!("  {g}"));
    }
    match args.modulo.as_deref() {
        None => {}
        Some("lifting") => {
            if args.degree != 2 {
                return Err(CliError::Input("--modulo lifting needs --degree 2".into()));
            }
            let base = identity_space(&alg, 1, mode)?;
            let lifted = lifting_span(&base, mode)?;
            let contained = space.contains(&lifted)?;
            r.line(format!("lifted from degree 1: dimension {}", lifted.dim()));
            r.line(format!(
                "lifted identities hold: {}",
                if contained { "yes" } else { "no" }
            ));
            if contained {
                r.line(format!("new identities modulo lifting: {}", space.dim() - lifted.dim()));
            }
        }
        Some(other) => {
            let other_alg = load(Path::new(other))?;
            let other_space = identity_space(&other_alg, args.degree, mode)?;
            r.line(format!("identities of {other}: dimension {}", other_space.dim()));
            r.line(format!(
                "identities of {other} hold here: {}",
                if space.contains(&other_space)? { "yes" } else { "no" }
            ));
            r.line(format!(
                "identities here hold in {other}: {}",
                if other_space.contains(&space)? { "yes" } else { "no" }
            ));
        }
    }
    for text in &args.verify {
        let p = parse_identity(alg.field(), text)?;
        let v = verify_identity(&alg, &p.monomials, &p.coefficients)?;
        r.line(format!("verify {text}: {}", if v.passed() { "holds" } else { "fails" }));
        if let (Some(w), None) = (&v.witness, &r.witness) {
            r.status = ReportStatus::Fail;
            r.witness = Some(WitnessReport::new(&alg, w));
        } else if r.status == ReportStatus::Done {
            r.status = ReportStatus::Pass;
        }
    }
    Ok(r)
}

fn cmd_validate(path: &Path) -> Result<Report, CliError> {
    let text = read_input(path)?;
    let parsed = file::AlgebraFile::parse(&text)?;
    let alg = parsed.to_algebra()?;
    if file::parse(&file::emit(&alg))? != alg {
        return Err(CliError::Input("the file does not round-trip".into()));
    }
    let mut r = Report::new(format!("file validate {}", path.display()), ReportStatus::Done);
    r.line(format!("field: {}", alg.field().name()));
    r.line(format!("arity: {}", alg.arity()));
    r.line(format!("dimension: {}", alg.dim()));
    r.line(format!("basis: {}", alg.labels().join(", ")));
    r.line(format!("symmetry: {:?}", alg.symmetry()).to_lowercase());
    r.line(format!("nonzero products: {}", alg.entries().len()));
    Ok(r)
}

fn report_outcome(r: Result<Report, CliError>, json: bool) -> Outcome {
    match r {
        Ok(r) => Outcome {
            code: r.exit_code(),
            stdout: r.render(json),
            stderr: String::new(),
        },
        Err(e) => Outcome::error(&e),
    }
}

/// Run one command. Never panics on bad input; errors map to exit code 3.
pub fn run(cli: &Cli) -> Outcome {
    let json = cli.json;
    match &cli.command {
        Command::Catalog(args) => catalog::build(args)
            .and_then(|alg| emit_file(&alg, args.out.as_deref()))
            .unwrap_or_else(|e| Outcome::error(&e)),
        Command::Reduce {
            file,
            slot,
            element,
            out,
        } => (|| {
            let alg = load(file)?;
            let a = alg.parse_element(element)?;
            emit_file(&alg.reduce(*slot, &a)?, out.as_deref())
        })()
        .unwrap_or_else(|e| Outcome::error(&e)),
        Command::Check { kind, file, x, y, z } => {
            let at = DxyArgs {
                x: x.as_deref(),
                y: y.as_deref(),
                z: z.as_deref(),
            };
            report_outcome(cmd_check(*kind, file, &at), json)
        }
        Command::Simple { file } => report_outcome(cmd_simple(file), json),
        Command::Der {
            file,
            inner,
            compare_skew,
        } => report_outcome(cmd_der(file, *inner, *compare_skew), json),
        Command::Identities(args) => report_outcome(cmd_identities(args), json),
        Command::File {
            action: FileCommand::Validate { file },
        } => report_outcome(cmd_validate(file), json),
    }
}

/// Parse arguments and run; clap usage errors also exit with code 3.
pub fn run_args<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(&cli),
        Err(e) => {
            let code = match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => 0,
                _ => INPUT_ERROR,
            };
            let text = e.render().to_string();
            if code == 0 {
                Outcome {
                    code,
                    stdout: text,
                    stderr: String::new(),
                }
            } else {
                Outcome {
                    code,
                    stdout: String::new(),
                    stderr: text,
                }
            }
        }
    }
}
