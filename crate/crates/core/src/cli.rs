//! Command-line front end.
//!
//! Exit codes: 0 success, 1 a numerical check did not pass (rigidity not
//! certified, or the two curvature routes disagree), 2 input error,
//! 3 Killing form not of compact type, 4 center present.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::binorm::{binormalize, BiInvariantMetric, DiagonalMetric};
use crate::curvature::{scalar_curvature_closed, scalar_curvature_koszul};
use crate::error::{input, Error, Result};
use crate::homogeneous::{
    block_sum_defect, group_as_homogeneous, HomogeneousFile, HomogeneousSpec,
};
use crate::lie_core::{self, killing, Signature};
use crate::rigidity::{
    self, gap_breakdown, su2_shrink_example, RigidityConfig, RigidityReport, Su2ShrinkRecord,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_NONCOMPACT: i32 = 3;
pub const EXIT_CENTER: i32 = 4;

/// Default agreement tolerance between curvature routes, relative to `1 + |R|`.
const AGREE_TOL: f64 = 1e-9;

#[derive(Debug, Parser)]
#[command(
    name = "liecurv",
    version,
    about = "Scalar curvature of invariant metrics and rigidity of bi-invariant ones"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Table,
    Structured,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Killing form, center and defects of an algebra.
    Algebra(AlgebraArgs),
    /// Scalar curvature of a diagonal metric by two independent routes.
    Scalar(ScalarArgs),
    /// Search for a metric g >= g0 with R_g >= R_g0 other than g0.
    Rigidity(RigidityArgs),
    /// Block data of a homogeneous spec.
    Homogeneous(HomogeneousArgs),
    /// Worked examples.
    #[command(subcommand)]
    Example(Example),
}

#[derive(Debug, Subcommand)]
pub enum Example {
    /// su(2) with g0 = B/8 and lambda = (x, x, 1/2).
    Su2Shrink {
        #[arg(long)]
        lambda: String,
    },
}

#[derive(Debug, Args)]
pub struct Source {
    /// Built-in name (su2, suN, soN, u1, abelianN, sums joined by +) or algebra file.
    #[arg(long, conflicts_with = "homogeneous")]
    pub algebra: Option<String>,
    /// Homogeneous spec file.
    #[arg(long)]
    pub homogeneous: Option<PathBuf>,
    /// s in g0 = s*B; defaults to 1/8 for su2 and 1 otherwise.
    #[arg(long)]
    pub scale: Option<f64>,
}

#[derive(Debug, Args)]
pub struct AlgebraArgs {
    #[arg(conflicts_with = "algebra")]
    pub name: Option<String>,
    #[arg(long)]
    pub algebra: Option<String>,
    #[arg(long)]
    pub scale: Option<f64>,
}

#[derive(Debug, Args)]
pub struct ScalarArgs {
    #[command(flatten)]
    pub source: Source,
    /// Comma-separated values, or @file with one value per line.
    #[arg(long)]
    pub lambda: String,
    #[arg(long)]
    pub tol: Option<f64>,
}

#[derive(Debug, Args)]
pub struct RigidityArgs {
    #[command(flatten)]
    pub source: Source,
    #[arg(long, default_value_t = 10.0)]
    pub max_lambda: f64,
    #[arg(long, default_value_t = 64)]
    pub starts: usize,
    #[arg(long, default_value_t = 10_000)]
    pub samples: usize,
    #[arg(long, env = "LIECURV_SEED", default_value_t = rigidity::DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
    #[arg(long, default_value_t = 1e-6)]
    pub tol_lambda: f64,
    /// Include every start's final point in the report.
    #[arg(long)]
    pub trajectories: bool,
}

#[derive(Debug, Args)]
pub struct HomogeneousArgs {
    #[arg(conflicts_with = "homogeneous")]
    pub path: Option<PathBuf>,
    #[arg(long)]
    pub homogeneous: Option<PathBuf>,
    #[arg(long)]
    pub lambda: Option<String>,
}

/// Resolved configuration, echoed into every report.
#[derive(Debug, Clone, Default, Serialize)]
pub struct Echo {
    pub command: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub algebra: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub homogeneous: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scale: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tol_lambda: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_lambda: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub starts: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct AlgebraReport {
    pub name: String,
    pub dim: usize,
    pub signature: Signature,
    pub semisimple: bool,
    pub center_dim: usize,
    pub jacobi_defect: f64,
    /// After binormalization; absent when no invariant metric exists.
    pub antisymmetry_defect: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ScalarReport {
    pub name: String,
    /// `closed-form` or `homogeneous`.
    pub primary_method: &'static str,
    pub r: f64,
    /// `koszul` or `gap-decomposition`.
    pub check_method: &'static str,
    pub r_check: f64,
    pub discrepancy: f64,
    pub agree: bool,
    pub r_reference: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct HomogeneousReport {
    pub name: String,
    pub blocks: usize,
    pub d: Vec<usize>,
    pub b: Vec<f64>,
    pub c: Vec<f64>,
    /// Nonzero `A[i][j][k]` as `[i, j, k, value]`.
    #[serde(rename = "A")]
    pub a: Vec<(usize, usize, usize, f64)>,
    pub a_symmetry_defect: f64,
    pub block_sum_defect: Vec<f64>,
    pub central_blocks: Vec<usize>,
    pub r_reference: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ErrorReport {
    pub error: String,
    pub exit_code: i32,
}

#[derive(Debug, Serialize)]
struct Document<'a, T: Serialize> {
    config: &'a Echo,
    result: &'a T,
}

/// What a run printed and how it ended.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::CenterPresent { .. } => EXIT_CENTER,
        Error::NotAMetric => EXIT_NONCOMPACT,
        _ => EXIT_INPUT,
    }
}

/// Parses `1,2,3` or `@path` (one value per line, blank lines and `#` comments skipped).
pub fn parse_lambda(text: &str) -> Result<Vec<f64>> {
    let (body, sep) = match text.strip_prefix('@') {
        Some(path) => (std::fs::read_to_string(path)?, '\n'),
        None => (text.to_string(), ','),
    };
    let mut out = Vec::new();
    for tok in body.split(sep) {
        let tok = tok.split('#').next().unwrap_or("").trim();
        if tok.is_empty() {
            continue;
        }
        let v: f64 = tok
            .parse()
            .map_err(|_| input(format!("bad lambda value `{tok}`")))?;
        out.push(v);
    }
    if out.is_empty() {
        return Err(input("empty lambda"));
    }
    Ok(out)
}

fn metric_for(alg: &lie_core::LieAlgebra, scale: f64) -> Result<BiInvariantMetric> {
    BiInvariantMetric::reductive(alg, scale)
}

enum Resolved {
    Group {
        source: String,
        scale: f64,
        alg: lie_core::LieAlgebra,
    },
    Spec(HomogeneousSpec),
}

fn resolve_source(src: &Source, echo: &mut Echo) -> Result<Resolved> {
    match (&src.algebra, &src.homogeneous) {
        (Some(a), None) => {
            let alg = lie_core::resolve(a, None)?;
            let scale = src.scale.unwrap_or_else(|| lie_core::default_scale(a));
            echo.algebra = Some(a.clone());
            echo.scale = Some(scale);
            Ok(Resolved::Group {
                source: a.clone(),
                scale,
                alg,
            })
        }
        (None, Some(p)) => {
            if src.scale.is_some() {
                return Err(input(
                    "--scale applies to --algebra; a homogeneous file carries its own scale",
                ));
            }
            echo.homogeneous = Some(p.display().to_string());
            Ok(Resolved::Spec(HomogeneousFile::load(p)?))
        }
        _ => Err(input(
            "exactly one of --algebra or --homogeneous is required",
        )),
    }
}

fn cmd_algebra(
    args: &AlgebraArgs,
    echo: &mut Echo,
) -> Result<(i32, AlgebraReport, Option<String>)> {
    let source = args
        .name
        .as_ref()
        .or(args.algebra.as_ref())
        .ok_or_else(|| input("algebra name or file required"))?;
    let alg = lie_core::resolve(source, None)?;
    let scale = args
        .scale
        .unwrap_or_else(|| lie_core::default_scale(source));
    echo.algebra = Some(source.clone());
    echo.scale = Some(scale);
    let kd = killing(&alg);
    let antisymmetry_defect = metric_for(&alg, scale)
        .and_then(|m| binormalize(&alg, &m))
        .map(|m| m.antisymmetry_defect())
        .ok();
    let report = AlgebraReport {
        name: alg.name().to_string(),
        dim: alg.dim(),
        signature: kd.signature,
        semisimple: kd.semisimple,
        center_dim: kd.center_dim,
        jacobi_defect: alg.jacobi_defect(),
        antisymmetry_defect,
    };
    if kd.is_noncompact() {
        let msg = format!(
            "not of compact type: Killing form has {} positive eigenvalue(s)",
            kd.signature.positives
        );
        return Ok((EXIT_NONCOMPACT, report, Some(msg)));
    }
    Ok((EXIT_OK, report, None))
}

fn cmd_scalar(args: &ScalarArgs, echo: &mut Echo) -> Result<(i32, ScalarReport)> {
    let tol = args.tol.unwrap_or(AGREE_TOL);
    echo.tol = Some(tol);
    let resolved = resolve_source(&args.source, echo)?;
    let raw = parse_lambda(&args.lambda)?;
    echo.lambda = Some(raw.clone());
    let lambda = DiagonalMetric::new(raw)?;
    let report = match resolved {
        Resolved::Group { source, scale, alg } => {
            let model = binormalize(&alg, &metric_for(&alg, scale)?)?;
            let closed = scalar_curvature_closed(&model, &lambda)?;
            let koszul = scalar_curvature_koszul(&model, &lambda)?;
            let r_reference =
                scalar_curvature_closed(&model, &DiagonalMetric::ones(model.dim()))?.r;
            let discrepancy = (closed.r - koszul.r).abs();
            ScalarReport {
                name: source,
                primary_method: "closed-form",
                r: closed.r,
                check_method: "koszul",
                r_check: koszul.r,
                discrepancy,
                agree: discrepancy <= tol * (1.0 + closed.r.abs()),
                r_reference,
            }
        }
        Resolved::Spec(spec) => {
            let r = spec.scalar_curvature(&lambda)?;
            let r_reference = spec.reference_curvature();
            let g = gap_breakdown(&spec, &lambda)?;
            let r_check = r_reference - g.casimir_part - g.q_part;
            let discrepancy = (r - r_check).abs();
            ScalarReport {
                name: spec.name.clone(),
                primary_method: "homogeneous",
                r,
                check_method: "gap-decomposition",
                r_check,
                discrepancy,
                agree: discrepancy <= tol * (1.0 + r.abs()),
                r_reference,
            }
        }
    };
    let code = if report.agree {
        EXIT_OK
    } else {
        EXIT_CHECK_FAILED
    };
    Ok((code, report))
}

fn cmd_rigidity(args: &RigidityArgs, echo: &mut Echo) -> Result<(i32, RigidityReport)> {
    echo.seed = Some(args.seed);
    echo.tol = Some(args.tol);
    echo.tol_lambda = Some(args.tol_lambda);
    echo.max_lambda = Some(args.max_lambda);
    echo.starts = Some(args.starts);
    echo.samples = Some(args.samples);
    let spec = match resolve_source(&args.source, echo)? {
        Resolved::Group { source, scale, alg } => {
            let model = binormalize(&alg, &metric_for(&alg, scale)?)?;
            let mut spec = group_as_homogeneous(&model);
            spec.name = source;
            spec
        }
        Resolved::Spec(spec) => spec,
    };
    let cfg = RigidityConfig {
        max_lambda: args.max_lambda,
        n_starts: args.starts,
        n_samples: args.samples,
        seed: args.seed,
        tol: args.tol,
        tol_lambda: args.tol_lambda,
        keep_trajectories: args.trajectories,
        ..Default::default()
    };
    let report = rigidity::verify_rigidity(&spec, &cfg)?;
    let code = if report.certified {
        EXIT_OK
    } else {
        EXIT_CHECK_FAILED
    };
    Ok((code, report))
}

fn cmd_homogeneous(args: &HomogeneousArgs, echo: &mut Echo) -> Result<HomogeneousReport> {
    let path = args
        .path
        .as_ref()
        .or(args.homogeneous.as_ref())
        .ok_or_else(|| input("homogeneous spec file required"))?;
    echo.homogeneous = Some(path.display().to_string());
    let spec = HomogeneousFile::load(path)?;
    let r = match &args.lambda {
        Some(text) => {
            let raw = parse_lambda(text)?;
            echo.lambda = Some(raw.clone());
            Some(spec.scalar_curvature(&DiagonalMetric::new(raw)?)?)
        }
        None => None,
    };
    Ok(HomogeneousReport {
        name: spec.name.clone(),
        blocks: spec.blocks(),
        d: spec.d.clone(),
        b: spec.b.clone(),
        c: spec.c.clone(),
        a: spec.a.nonzeros().collect(),
        a_symmetry_defect: spec.a_symmetry_defect(),
        block_sum_defect: block_sum_defect(&spec),
        central_blocks: spec.central_blocks(),
        r_reference: spec.reference_curvature(),
        r,
    })
}

fn cmd_su2_shrink(lambda: &str, echo: &mut Echo) -> Result<Su2ShrinkRecord> {
    let raw = parse_lambda(lambda)?;
    echo.algebra = Some("su2".into());
    echo.scale = Some(0.125);
    echo.lambda = Some(raw.clone());
    if raw.len() != 1 {
        return Err(Error::DimensionMismatch {
            expected: 1,
            found: raw.len(),
        });
    }
    su2_shrink_example(raw[0])
}

fn table(rows: &[(&str, String)]) -> String {
    let w = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    rows.iter()
        .map(|(k, v)| format!("{k:<w$}  {v}\n"))
        .collect()
}

fn list<T: std::fmt::Display>(v: &[T]) -> String {
    v.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(", ")
}

fn echo_rows(e: &Echo) -> Vec<(&'static str, String)> {
    let mut rows = vec![("command", e.command.to_string())];
    if let Some(v) = &e.algebra {
        rows.push(("algebra", v.clone()));
    }
    if let Some(v) = &e.homogeneous {
        rows.push(("homogeneous", v.clone()));
    }
    if let Some(v) = e.scale {
        rows.push(("scale", v.to_string()));
    }
    if let Some(v) = &e.lambda {
        rows.push(("lambda", list(v)));
    }
    if let Some(v) = e.seed {
        rows.push(("seed", v.to_string()));
    }
    if let Some(v) = e.tol {
        rows.push(("tol", format!("{v:e}")));
    }
    if let Some(v) = e.tol_lambda {
        rows.push(("tol lambda", format!("{v:e}")));
    }
    if let Some(v) = e.max_lambda {
        rows.push(("max lambda", v.to_string()));
    }
    if let Some(v) = e.starts {
        rows.push(("starts", v.to_string()));
    }
    if let Some(v) = e.samples {
        rows.push(("samples", v.to_string()));
    }
    rows
}

trait Tabular {
    fn rows(&self) -> Vec<(&'static str, String)>;
}

impl Tabular for AlgebraReport {
    fn rows(&self) -> Vec<(&'static str, String)> {
        let s = self.signature;
        vec![
            ("name", self.name.clone()),
            ("dim", self.dim.to_string()),
            (
                "killing signature",
                format!(
                    "{} negative, {} zero, {} positive",
                    s.negatives, s.zeros, s.positives
                ),
            ),
            ("semisimple", self.semisimple.to_string()),
            ("center dim", self.center_dim.to_string()),
            ("jacobi defect", format!("{:e}", self.jacobi_defect)),
            (
                "antisymmetry defect",
                self.antisymmetry_defect
                    .map_or("n/a".into(), |d| format!("{d:e}")),
            ),
        ]
    }
}

impl Tabular for ScalarReport {
    fn rows(&self) -> Vec<(&'static str, String)> {
        vec![
            ("name", self.name.clone()),
            ("R", format!("{} ({})", self.r, self.primary_method)),
            (
                "R check",
                format!("{} ({})", self.r_check, self.check_method),
            ),
            ("discrepancy", format!("{:e}", self.discrepancy)),
            ("agree", self.agree.to_string()),
            ("R at g0", self.r_reference.to_string()),
        ]
    }
}

impl Tabular for RigidityReport {
    fn rows(&self) -> Vec<(&'static str, String)> {
        let mut rows = vec![
            ("spec", self.spec.clone()),
            ("blocks", self.blocks.to_string()),
            (
                "box",
                format!("[{}, {}]", self.search_box[0], self.search_box[1]),
            ),
            ("R at g0", self.r_reference.to_string()),
            ("best R", self.best_r.to_string()),
            ("best lambda", list(&self.best_lambda)),
            ("max violation", format!("{:e}", self.max_violation)),
            ("min sample gap", format!("{:e}", self.min_sample_gap)),
            (
                "worst near-equality",
                format!("{:e}", self.worst_near_equality_distance),
            ),
            ("evaluated points", self.evaluated_points.to_string()),
            (
                "starts converged",
                format!("{}/{}", self.starts_converged, self.n_starts),
            ),
            ("certified", self.certified.to_string()),
            ("note", self.note.to_string()),
        ];
        if let Some(t) = &self.trajectories {
            for s in t {
                rows.push(("start end", format!("{} -> R {}", list(&s.end), s.r)));
            }
        }
        rows
    }
}

impl Tabular for HomogeneousReport {
    fn rows(&self) -> Vec<(&'static str, String)> {
        let mut rows = vec![
            ("name", self.name.clone()),
            ("blocks", self.blocks.to_string()),
            ("d", list(&self.d)),
            ("b", list(&self.b)),
            ("c", list(&self.c)),
            ("A nonzeros", self.a.len().to_string()),
            ("A symmetry defect", format!("{:e}", self.a_symmetry_defect)),
            (
                "block sum defect",
                self.block_sum_defect
                    .iter()
                    .map(|v| format!("{v:e}"))
                    .collect::<Vec<_>>()
                    .join(", "),
            ),
            ("central blocks", format!("{:?}", self.central_blocks)),
            ("R at g0", self.r_reference.to_string()),
        ];
        if let Some(r) = self.r {
            rows.push(("R", r.to_string()));
        }
        rows
    }
}

impl Tabular for Su2ShrinkRecord {
    fn rows(&self) -> Vec<(&'static str, String)> {
        vec![
            ("metric", list(&self.metric)),
            (
                "R_g",
                format!("{} (closed), {} (koszul)", self.r_closed, self.r_koszul),
            ),
            ("R_g0", self.r_reference.to_string()),
            ("g < g0", self.g_is_smaller.to_string()),
            ("R_g < R_g0", self.scalar_is_smaller.to_string()),
            ("crossover", self.crossover.to_string()),
            (
                "x^2 (R_g - R_g0)",
                format!("{} (tends to -1)", self.scaled_difference),
            ),
        ]
    }
}

fn render<T: Serialize + Tabular>(format: Format, echo: &Echo, result: &T) -> String {
    match format {
        Format::Structured => {
            let doc = Document {
                config: echo,
                result,
            };
            serde_json::to_string_pretty(&doc).expect("reports serialize") + "\n"
        }
        Format::Table => {
            let mut rows = echo_rows(echo);
            rows.extend(result.rows());
            table(&rows)
        }
    }
}

fn fail(format: Format, echo: &Echo, err: &Error) -> Outcome {
    let code = exit_code(err);
    let stdout = match format {
        Format::Structured => {
            let r = ErrorReport {
                error: err.to_string(),
                exit_code: code,
            };
            serde_json::to_string_pretty(&Document {
                config: echo,
                result: &r,
            })
            .expect("reports serialize")
                + "\n"
        }
        Format::Table => String::new(),
    };
    Outcome {
        code,
        stdout,
        stderr: format!("error: {err}\n"),
    }
}

/// Runs a parsed command line.
pub fn execute(cli: &Cli) -> Outcome {
    let f = cli.format;
    let mut echo = Echo::default();
    match &cli.command {
        Command::Algebra(a) => {
            echo.command = "algebra";
            match cmd_algebra(a, &mut echo) {
                Ok((code, rep, msg)) => Outcome {
                    code,
                    stdout: render(f, &echo, &rep),
                    stderr: msg.map(|m| format!("error: {m}\n")).unwrap_or_default(),
                },
                Err(e) => fail(f, &echo, &e),
            }
        }
        Command::Scalar(a) => {
            echo.command = "scalar";
            match cmd_scalar(a, &mut echo) {
                Ok((code, rep)) => Outcome {
                    code,
                    stdout: render(f, &echo, &rep),
                    stderr: String::new(),
                },
                Err(e) => fail(f, &echo, &e),
            }
        }
        Command::Rigidity(a) => {
            echo.command = "rigidity";
            match cmd_rigidity(a, &mut echo) {
                Ok((code, rep)) => Outcome {
                    code,
                    stdout: render(f, &echo, &rep),
                    stderr: format!("wall time {:.3} s\n", rep.wall_time.as_secs_f64()),
                },
                Err(e) => fail(f, &echo, &e),
            }
        }
        Command::Homogeneous(a) => {
            echo.command = "homogeneous";
            match cmd_homogeneous(a, &mut echo) {
                Ok(rep) => Outcome {
                    code: EXIT_OK,
                    stdout: render(f, &echo, &rep),
                    stderr: String::new(),
                },
                Err(e) => fail(f, &echo, &e),
            }
        }
        Command::Example(Example::Su2Shrink { lambda }) => {
            echo.command = "example su2-shrink";
            match cmd_su2_shrink(lambda, &mut echo) {
                Ok(rep) => Outcome {
                    code: EXIT_OK,
                    stdout: render(f, &echo, &rep),
                    stderr: String::new(),
                },
                Err(e) => fail(f, &echo, &e),
            }
        }
    }
}

/// Parses and runs; usage errors map to exit 2, `--help` to exit 0.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => execute(&cli),
        Err(e) => {
            let text = e.render().to_string();
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            if e.use_stderr() {
                Outcome {
                    code,
                    stdout: String::new(),
                    stderr: text,
                }
            } else {
                Outcome {
                    code,
                    stdout: text,
                    stderr: String::new(),
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn go(args: &[&str]) -> Outcome {
        run(std::iter::once("liecurv").chain(args.iter().copied()))
    }

    #[test]
    fn lambda_parsing() {
        assert_eq!(parse_lambda("1, 2,3").unwrap(), vec![1.0, 2.0, 3.0]);
        assert!(parse_lambda("1,x").is_err());
        assert!(parse_lambda("").is_err());
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("l.txt");
        std::fs::write(&p, "0.5\n\n2 # second\n").unwrap();
        assert_eq!(
            parse_lambda(&format!("@{}", p.display())).unwrap(),
            vec![0.5, 2.0]
        );
    }

    #[test]
    fn algebra_info() {
        let o = go(&["algebra", "su2"]);
        assert_eq!(o.code, 0);
        assert!(o.stdout.contains("semisimple           true"));
        let o = go(&["--format", "structured", "algebra", "--algebra", "so5"]);
        let v: serde_json::Value = serde_json::from_str(&o.stdout).unwrap();
        assert_eq!(v["result"]["dim"], 10);
        assert_eq!(v["result"]["center_dim"], 0);
        assert_eq!(go(&["algebra", "abelian2"]).code, 0);
        assert_eq!(go(&["algebra", "nope"]).code, 2);
    }

    #[test]
    fn scalar_golden_values() {
        let o = go(&[
            "--format",
            "structured",
            "scalar",
            "--algebra",
            "su2",
            "--scale",
            "0.125",
            "--lambda",
            "1,1,1",
        ]);
        assert_eq!(o.code, 0);
        let v: serde_json::Value = serde_json::from_str(&o.stdout).unwrap();
        assert_eq!(v["result"]["r"], 6.0);
        assert!(v["result"]["discrepancy"].as_f64().unwrap() <= 1e-9);
        assert_eq!(v["config"]["lambda"], serde_json::json!([1.0, 1.0, 1.0]));

        let o = go(&[
            "--format",
            "structured",
            "scalar",
            "--algebra",
            "su2",
            "--lambda",
            "0.05,0.05,0.5",
        ]);
        let v: serde_json::Value = serde_json::from_str(&o.stdout).unwrap();
        assert!((v["result"]["r"].as_f64().unwrap() + 240.0).abs() < 1e-9);
    }

    #[test]
    fn scalar_input_errors() {
        assert_eq!(
            go(&["scalar", "--algebra", "su2", "--lambda", "1,0,1"]).code,
            2
        );
        assert_eq!(
            go(&["scalar", "--algebra", "su2", "--lambda", "1,1"]).code,
            2
        );
        assert_eq!(go(&["scalar", "--lambda", "1"]).code, 2);
        assert_eq!(go(&["scalar", "--algebra", "su2"]).code, 2);
    }

    #[test]
    fn example_shrink() {
        let o = go(&[
            "--format",
            "structured",
            "example",
            "su2-shrink",
            "--lambda",
            "0.2",
        ]);
        assert_eq!(o.code, 0);
        let v: serde_json::Value = serde_json::from_str(&o.stdout).unwrap();
        assert!((v["result"]["r_closed"].as_f64().unwrap() - 15.0).abs() < 1e-12);
        assert_eq!(v["result"]["scalar_is_smaller"], false);
        assert_eq!(go(&["example", "su2-shrink", "--lambda", "1.5"]).code, 2);
    }

    #[test]
    fn rigidity_center_present() {
        let o = go(&[
            "rigidity",
            "--algebra",
            "su2+u1",
            "--starts",
            "2",
            "--samples",
            "10",
        ]);
        assert_eq!(o.code, 4);
        assert!(o.stderr.contains("center present"));
    }

    #[test]
    fn help_is_not_an_error() {
        assert_eq!(go(&["--help"]).code, 0);
        assert_eq!(go(&["bogus"]).code, 2);
    }
}
