//! Command-line front end. Input is a JSON document with rationals written as
//! strings; reports go to stdout as text or a single JSON object.
//!
//! Exit codes: 0 on success, 1 on I/O failure, 2 on invalid input or a
//! violated precondition.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::arrangement::{self, Arrangement, Hyperplane, Limits};
use crate::error::Error;
use crate::exactla::{self, format_scalar, Scalar};
use crate::factors::{self, ExponentVector};
use crate::poset::{self, format_index_set, Flat};
use crate::resolution::{self, Justification, ResolutionData, ResolutionSource};

pub const LIMIT_ENV: &str = "ARRDMOD_LIMIT";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HyperplaneEntry {
    pub coeffs: Vec<Scalar>,
    pub constant: Scalar,
}

/// Parsed and shape-checked input file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InputDocument {
    pub dim: usize,
    pub hyperplanes: Vec<HyperplaneEntry>,
    pub beta: Option<Vec<Scalar>>,
    pub multiplicities: Option<Vec<Vec<u32>>>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawInput {
    dim: usize,
    hyperplanes: Vec<RawHyperplane>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    beta: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    resolution: Option<RawResolution>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawHyperplane {
    coeffs: Vec<String>,
    constant: String,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawResolution {
    multiplicities: Vec<Vec<String>>,
}

fn rational_field(text: &str, field: &str) -> Result<Scalar, Error> {
    exactla::parse_scalar(text)
        .ok_or_else(|| Error::malformed(format!("{field}: `{text}` is not a rational \"p\" or \"p/q\"")))
}

impl InputDocument {
    pub fn parse(text: &str) -> Result<Self, Error> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let raw: RawInput = serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            Error::malformed(format!("{path}: {}", e.inner()))
        })?;

        let mut hyperplanes = Vec::with_capacity(raw.hyperplanes.len());
        for (i, h) in raw.hyperplanes.iter().enumerate() {
            if h.coeffs.len() != raw.dim {
                return Err(Error::malformed(format!(
                    "hyperplanes[{i}].coeffs: has {} entries, dim is {}",
                    h.coeffs.len(),
                    raw.dim
                )));
            }
            let coeffs = h
                .coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| rational_field(c, &format!("hyperplanes[{i}].coeffs[{k}]")))
                .collect::<Result<_, _>>()?;
            let constant = rational_field(&h.constant, &format!("hyperplanes[{i}].constant"))?;
            hyperplanes.push(HyperplaneEntry { coeffs, constant });
        }

        let m = hyperplanes.len();
        let beta = match &raw.beta {
            None => None,
            Some(entries) => {
                if entries.len() != m {
                    return Err(Error::malformed(format!(
                        "beta: has {} entries, there are {m} hyperplanes",
                        entries.len()
                    )));
                }
                Some(
                    entries
                        .iter()
                        .enumerate()
                        .map(|(i, b)| rational_field(b, &format!("beta[{i}]")))
                        .collect::<Result<_, _>>()?,
                )
            }
        };

        let multiplicities = match &raw.resolution {
            None => None,
            Some(res) => {
                let mut rows = Vec::with_capacity(res.multiplicities.len());
                for (j, row) in res.multiplicities.iter().enumerate() {
                    if row.len() != m {
                        return Err(Error::malformed(format!(
                            "resolution.multiplicities[{j}]: has {} entries, there are {m} hyperplanes",
                            row.len()
                        )));
                    }
                    let parsed = row
                        .iter()
                        .enumerate()
                        .map(|(i, r)| {
                            r.parse::<u32>().map_err(|_| {
                                Error::malformed(format!(
                                    "resolution.multiplicities[{j}][{i}]: `{r}` is not a nonnegative integer"
                                ))
                            })
                        })
                        .collect::<Result<Vec<_>, _>>()?;
                    rows.push(parsed);
                }
                Some(rows)
            }
        };

        Ok(InputDocument {
            dim: raw.dim,
            hyperplanes,
            beta,
            multiplicities,
        })
    }

    /// Canonical JSON rendering; `parse` inverts it.
    pub fn render(&self) -> String {
        let raw = RawInput {
            dim: self.dim,
            hyperplanes: self
                .hyperplanes
                .iter()
                .map(|h| RawHyperplane {
                    coeffs: h.coeffs.iter().map(format_scalar).collect(),
                    constant: format_scalar(&h.constant),
                })
                .collect(),
            beta: self
                .beta
                .as_ref()
                .map(|b| b.iter().map(format_scalar).collect()),
            resolution: self.multiplicities.as_ref().map(|rows| RawResolution {
                multiplicities: rows
                    .iter()
                    .map(|row| row.iter().map(u32::to_string).collect())
                    .collect(),
            }),
        };
        serde_json::to_string_pretty(&raw).expect("plain data serializes")
    }

    pub fn arrangement(&self) -> Result<Arrangement, Error> {
        let hyperplanes = self
            .hyperplanes
            .iter()
            .map(|h| Hyperplane::new(h.coeffs.clone(), h.constant.clone()))
            .collect::<Result<_, _>>()?;
        Arrangement::new(self.dim, hyperplanes)
    }

    pub fn exponents(&self) -> Option<ExponentVector> {
        self.beta.clone().map(ExponentVector::new)
    }

    pub fn resolution(&self) -> Result<Option<ResolutionData>, Error> {
        self.multiplicities
            .clone()
            .map(|rows| ResolutionData::user_supplied(self.hyperplanes.len(), rows))
            .transpose()
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "arrdmod",
    version,
    about = "Exact invariants of twisted D-modules on rational hyperplane arrangements"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// General position, normal crossing and centrality.
    Classify(CommonArgs),
    /// Intersection poset of flats.
    Flats(FlatsArgs),
    /// Decomposition-factor supports (normal crossing only).
    Factors(CommonArgs),
    /// Factor and flat counts, with closed forms for general position.
    Count(CommonArgs),
    /// Plane blow-up centers and multiplicity matrix.
    Resolve(CommonArgs),
    /// Extended exponents and factors on the plane blow-up.
    Pullback(CommonArgs),
    /// Irreducibility verdict.
    Verdict(CommonArgs),
    /// Non-resonance certificate forms.
    Certificate(CommonArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Debug, Args)]
struct CommonArgs {
    /// Input JSON document.
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Maximum number of hyperplanes for enumeration.
    #[arg(long)]
    limit: Option<usize>,
}

#[derive(Debug, Args)]
struct FlatsArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Also write the Hasse diagram as Graphviz DOT.
    #[arg(long)]
    dot: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome {
            code: 0,
            stdout,
            stderr: String::new(),
        }
    }

    fn fail(code: i32, stderr: String) -> Self {
        Outcome {
            code,
            stdout: String::new(),
            stderr,
        }
    }
}

enum Failure {
    Io(String),
    Invalid(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Invalid(e.to_string())
    }
}

/// Runs one command. `args` excludes the program name; the limit override
/// comes from `ARRDMOD_LIMIT` when `--limit` is absent.
pub fn execute<I, S>(args: I) -> Outcome
where
    I: IntoIterator<Item = S>,
    S: Into<OsString> + Clone,
{
    execute_with_env(args, std::env::var(LIMIT_ENV).ok())
}

pub fn execute_with_env<I, S>(args: I, limit_env: Option<String>) -> Outcome
where
    I: IntoIterator<Item = S>,
    S: Into<OsString> + Clone,
{
    let argv = std::iter::once(OsString::from("arrdmod")).chain(args.into_iter().map(Into::into));
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome::fail(2, text)
            } else {
                Outcome::ok(text)
            };
        }
    };
    match run(cli, limit_env) {
        Ok(stdout) => Outcome::ok(stdout),
        Err(Failure::Io(msg)) => Outcome::fail(1, format!("error: {msg}\n")),
        Err(Failure::Invalid(msg)) => Outcome::fail(2, format!("error: {msg}\n")),
    }
}

struct Context {
    name: &'static str,
    doc: InputDocument,
    arr: Arrangement,
    limits: Limits,
    format: Format,
}

impl Context {
    fn load(name: &'static str, args: &CommonArgs, limit_env: Option<String>) -> Result<Self, Failure> {
        let limits = match (args.limit, limit_env) {
            (Some(limit), _) => Limits::uniform(limit),
            (None, Some(env)) => Limits::uniform(env.trim().parse().map_err(|_| {
                Failure::Invalid(format!("{LIMIT_ENV}: `{env}` is not a nonnegative integer"))
            })?),
            (None, None) => Limits::default(),
        };
        let text = read_input(&args.input)?;
        let doc = InputDocument::parse(&text)?;
        let arr = doc.arrangement()?;
        Ok(Context {
            name,
            doc,
            arr,
            limits,
            format: args.format,
        })
    }

    fn beta(&self) -> Result<ExponentVector, Failure> {
        self.doc.exponents().ok_or_else(|| {
            Failure::Invalid(format!("{} requires `beta` in the input document", self.name))
        })
    }

    fn emit(&self, mut report: Value, text: String) -> String {
        match self.format {
            Format::Json => {
                report
                    .as_object_mut()
                    .expect("reports are objects")
                    .insert("command".into(), json!(self.name));
                let mut out = serde_json::to_string(&report).expect("json values serialize");
                out.push('\n');
                out
            }
            Format::Text => text,
        }
    }
}

fn read_input(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Io(format!("cannot read {}: {e}", path.display())))
}

fn run(cli: Cli, limit_env: Option<String>) -> Result<String, Failure> {
    match cli.command {
        Command::Classify(a) => classify_cmd(&Context::load("classify", &a, limit_env)?),
        Command::Flats(a) => flats_cmd(&Context::load("flats", &a.common, limit_env)?, a.dot.as_deref()),
        Command::Factors(a) => factors_cmd(&Context::load("factors", &a, limit_env)?),
        Command::Count(a) => count_cmd(&Context::load("count", &a, limit_env)?),
        Command::Resolve(a) => resolve_cmd(&Context::load("resolve", &a, limit_env)?),
        Command::Pullback(a) => pullback_cmd(&Context::load("pullback", &a, limit_env)?),
        Command::Verdict(a) => verdict_cmd(&Context::load("verdict", &a, limit_env)?),
        Command::Certificate(a) => certificate_cmd(&Context::load("certificate", &a, limit_env)?),
    }
}

fn scalars(v: &[Scalar]) -> Vec<String> {
    v.iter().map(format_scalar).collect()
}

fn one_based(set: &[usize]) -> Vec<usize> {
    set.iter().map(|i| i + 1).collect()
}

fn flat_json(f: &Flat) -> Value {
    json!({
        "closure": one_based(&f.closure_set),
        "codim": f.codim,
        "dim": f.dim(),
    })
}

fn classify_cmd(cx: &Context) -> Result<String, Failure> {
    let c = arrangement::classify_with(&cx.arr, &cx.limits)?;
    let common = match c.common_intersection.dim() {
        None => json!({ "status": "EMPTY" }),
        Some(d) => json!({
            "status": "NONEMPTY",
            "dim": d,
            "base_point": scalars(&c.common_intersection.base_point().expect("nonempty")),
        }),
    };
    let text = format!(
        "arrangement: {}\ngeneral position: {}\nnormal crossing: {}\ncentral: {}\ncommon intersection: {}\n",
        cx.arr, c.general_position, c.normal_crossing, c.central, c.common_intersection
    );
    let report = json!({
        "dim": cx.arr.dim(),
        "hyperplanes": cx.arr.len(),
        "general_position": c.general_position,
        "normal_crossing": c.normal_crossing,
        "central": c.central,
        "common_intersection": common,
    });
    Ok(cx.emit(report, text))
}

fn flats_cmd(cx: &Context, dot: Option<&Path>) -> Result<String, Failure> {
    let poset = poset::enumerate_flats_with(&cx.arr, &cx.limits)?;
    if let Some(path) = dot {
        std::fs::write(path, poset::hasse_dot(&poset))
            .map_err(|e| Failure::Io(format!("cannot write {}: {e}", path.display())))?;
    }
    let mut text = format!("{} flats\n", poset.len());
    for f in poset.flats() {
        let _ = writeln!(text, "  {:<12} codim {}  {}", f.label(), f.codim, f.subspace);
    }
    let _ = writeln!(text, "{} cover relations", poset.covers().len());
    let report = json!({
        "count": poset.len(),
        "flats": poset.flats().iter().map(flat_json).collect::<Vec<_>>(),
        "covers": poset.covers(),
    });
    Ok(cx.emit(report, text))
}

fn factors_cmd(cx: &Context) -> Result<String, Failure> {
    let beta = cx.beta()?;
    let r = factors::decomposition_factors_with(&cx.arr, &beta, &cx.limits)?;
    let mut text = format!("beta = {beta}\n{} decomposition factors\n", r.count);
    for f in &r.supports {
        let _ = writeln!(text, "  support {} (dim {})", f.label(), f.dim());
    }
    let report = json!({
        "beta": scalars(beta.entries()),
        "count": r.count,
        "supports": r.supports.iter().map(flat_json).collect::<Vec<_>>(),
    });
    Ok(cx.emit(report, text))
}

fn count_cmd(cx: &Context) -> Result<String, Failure> {
    let beta = cx.beta()?;
    let class = arrangement::classify_with(&cx.arr, &cx.limits)?;
    if !class.normal_crossing {
        return Err(Failure::Invalid(
            "count requires a normal crossing arrangement; run `pullback` or `verdict`".into(),
        ));
    }
    let r = factors::decomposition_factors_with(&cx.arr, &beta, &cx.limits)?;
    let flats = poset::enumerate_flats_with(&cx.arr, &cx.limits)?.len();
    let (n, m, k) = (cx.arr.dim() as u64, cx.arr.len() as u64, beta.integer_count() as u64);
    let formulas = class.general_position.then(|| {
        (
            factors::count_general_position(n, k),
            factors::flat_count_general_position(n, m),
        )
    });
    let mut text = format!(
        "integer exponents: {k}\ndecomposition factors: {}\nflats: {flats}\n",
        r.count
    );
    if let Some((c, f)) = formulas {
        let _ = writeln!(text, "general position closed forms: factors {c}, flats {f}");
    }
    let report = json!({
        "integer_exponents": k,
        "count": r.count,
        "flat_count": flats,
        "general_position": class.general_position,
        "formula_count": formulas.map(|x| x.0),
        "formula_flat_count": formulas.map(|x| x.1),
    });
    Ok(cx.emit(report, text))
}

fn source_name(s: ResolutionSource) -> &'static str {
    match s {
        ResolutionSource::PlaneBlowup(_) => "PLANE_BLOWUP",
        ResolutionSource::UserSupplied => "USER_SUPPLIED",
    }
}

fn resolve_cmd(cx: &Context) -> Result<String, Failure> {
    let res = resolution::plane_resolution(&cx.arr)?;
    let mut text = format!("{} blow-up centers\n", res.centers().len());
    for (j, c) in res.centers().iter().enumerate() {
        let _ = writeln!(
            text,
            "  E{}: point ({}) on lines {}  multiplicities {}",
            j + 1,
            scalars(&c.point).join(", "),
            format_index_set(&c.incident),
            resolution::format_form(
                &res.multiplicities()[j].iter().map(|&x| i64::from(x)).collect::<Vec<_>>()
            ),
        );
    }
    let report = json!({
        "source": source_name(res.source()),
        "centers": res.centers().iter().map(|c| json!({
            "point": scalars(&c.point),
            "incident": one_based(&c.incident),
        })).collect::<Vec<_>>(),
        "multiplicities": res.multiplicities(),
    });
    Ok(cx.emit(report, text))
}

fn pullback_cmd(cx: &Context) -> Result<String, Failure> {
    let beta = cx.beta()?;
    let r = resolution::pullback_factors(&cx.arr, &beta)?;
    let supports: Vec<String> = r.supports.iter().map(ToString::to_string).collect();
    let text = format!(
        "exceptional exponents: ({})\n{} decomposition factors of the pull-back\n  {}\n",
        scalars(&r.exponents.exceptional).join(", "),
        r.count,
        supports.join("\n  ")
    );
    let report = json!({
        "beta": scalars(beta.entries()),
        "exceptional_exponents": scalars(&r.exponents.exceptional),
        "count": r.count,
        "supports": supports,
    });
    Ok(cx.emit(report, text))
}

fn verdict_cmd(cx: &Context) -> Result<String, Failure> {
    let beta = cx.beta()?;
    let res = cx.doc.resolution()?;
    let v = resolution::irreducibility_verdict(&cx.arr, &beta, res.as_ref())?;
    let j = &v.justification;
    let mut report = json!({
        "status": v.status.to_string(),
        "rule": j.rule(),
        "rule_name": j.rule_name(),
    });
    let obj = report.as_object_mut().expect("object");
    let detail = match j {
        Justification::IntegerExponent { witness } => {
            obj.insert("witness".into(), json!(witness + 1));
            format!("witness hyperplane {}: {}", witness + 1, cx.arr.hyperplane(*witness))
        }
        Justification::NormalCrossing { certificate }
        | Justification::ResolutionCertificate { certificate, .. } => {
            obj.insert("certificate".into(), json!(certificate.forms()));
            format!("certificate {certificate}")
        }
        Justification::ConcurrentLines { exponent_sum } => {
            obj.insert("exponent_sum".into(), json!(format_scalar(exponent_sum)));
            format!("concurrent lines with exponent sum {}", format_scalar(exponent_sum))
        }
        Justification::Undecided { reason } => {
            obj.insert("reason".into(), json!(reason));
            reason.clone()
        }
    };
    let text = format!("{} ({} {})\n{detail}\n", v.status, j.rule(), j.rule_name());
    Ok(cx.emit(report, text))
}

fn certificate_cmd(cx: &Context) -> Result<String, Failure> {
    let res = cx.doc.resolution()?;
    let c = resolution::certificate(&cx.arr, res.as_ref())?;
    let mut text = format!("{} forms\n", c.forms().len());
    for f in c.forms() {
        let _ = writeln!(text, "  {}", resolution::format_form(f));
    }
    let report = json!({ "forms": c.forms() });
    Ok(cx.emit(report, text))
}
