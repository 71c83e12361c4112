//! Argument parsing and dispatch for the `subadj` binary.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use subadj_core::families::{cbf_report, contract_and_degree, normalize_vertical, FamilyModel, LogFibration};
use subadj_core::omega::{self, Collision, MarkedLine};
use subadj_core::surfaces::SurfaceModel;
use subadj_core::trees::{enumerate_decompositions, StableTree};
use subadj_core::weights::{f_charge, f_vertex_coefficients, WeightVector};
use subadj_core::{rational, LabelSet, Rational};

use crate::report::{
    CbfJson, CollisionRow, CutRow, FamilyJson, FsupportReport, ModelReport, OmegaReport, Render, SectionJson, Split,
    StepRow, StrataReport, VertexRow,
};
use crate::schema::{self, parse_label_list, parse_rational_list, qs, ModelFile, TreeSpec, Q};
use crate::{models, verify, CliError};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Table,
    Json,
}

/// Exact computations on weighted pointed rational curves and their families.
#[derive(Debug, Parser)]
#[command(name = "subadj", version)]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Table, global = true)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List the boundary decompositions of {1..n}, or the edge cuts of a tree.
    Strata {
        #[arg(long, conflicts_with = "tree", required_unless_present = "tree")]
        n: Option<u32>,
        /// Tree JSON file.
        #[arg(long)]
        tree: Option<PathBuf>,
    },
    /// Correction coefficients on a stable tree for a weight vector.
    Fsupport {
        #[arg(long)]
        tree: PathBuf,
        /// Comma-separated weights, e.g. `1/2,1/2,1/2,1/2`.
        #[arg(long)]
        d: String,
    },
    /// Build the canonical section and read off pole and collision orders.
    Omega {
        #[arg(long)]
        d: String,
        /// Multiplier; defaults to the least m with every m·d integral.
        #[arg(long)]
        m: Option<u64>,
        /// Comma-separated marked points; defaults to 0, 1, …, n−1.
        #[arg(long, allow_hyphen_values = true)]
        points: Option<String>,
        /// Labels that collide, e.g. `1,2`. Repeatable.
        #[arg(long)]
        collide: Vec<String>,
        /// Contact order of the approach.
        #[arg(long, default_value_t = 1)]
        tangency: u32,
        /// Collision point; defaults to a point left of every marked point.
        #[arg(long, allow_hyphen_values = true)]
        base: Option<String>,
        /// Include numerator and denominator coefficients.
        #[arg(long)]
        section: bool,
    },
    /// Classes, intersection matrix and fibers of a surface model.
    Model { file: PathBuf },
    /// Discriminant and moduli parts for a surface or family model.
    Cbf {
        file: PathBuf,
        /// Replace vertical coefficients by the normalized ones first.
        #[arg(long)]
        normalize: bool,
        /// Exit with status 1 unless every report flag holds.
        #[arg(long)]
        check: bool,
    },
    /// Run the bundled example checks.
    Verify,
}

enum Loaded {
    Surface(SurfaceModel),
    Family(FamilyModel),
}

fn read_or_bundled(path: &Path) -> Result<(String, Option<PathBuf>), CliError> {
    if path.exists() {
        let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
        return Ok((schema::read_file(path)?, Some(base)));
    }
    let name = path.to_string_lossy();
    models::bundled(&name)
        .map(|t| (t.to_string(), None))
        .ok_or_else(|| CliError::Io(format!("{name}: no such file or bundled model")))
}

fn load_model(path: &Path) -> Result<Loaded, CliError> {
    let (text, base) = read_or_bundled(path)?;
    match schema::parse_model(&text, &path.to_string_lossy())? {
        ModelFile::Surface(s) => Ok(Loaded::Surface(s.build()?)),
        ModelFile::Family(f) => {
            let fam = match base {
                Some(base) => f.build(&|p: &str| {
                    let full = base.join(p);
                    if full.exists() {
                        schema::read_file(&full)
                    } else {
                        read_or_bundled(Path::new(p)).map(|(t, _)| t)
                    }
                })?,
                None => f.build(&|p: &str| read_or_bundled(Path::new(p)).map(|(t, _)| t))?,
            };
            Ok(Loaded::Family(fam))
        }
    }
}

fn load_tree(path: &Path) -> Result<StableTree, CliError> {
    let (text, _) = read_or_bundled(path)?;
    let spec: TreeSpec =
        serde_json::from_str(&text).map_err(|e| CliError::Json(format!("{}: {e}", path.display())))?;
    let tree = spec.build();
    tree.ensure_valid()?;
    Ok(tree)
}

fn split(first: LabelSet, second: LabelSet) -> Split {
    Split { first: first.to_vec(), second: second.to_vec() }
}

fn strata(n: Option<u32>, tree: Option<&Path>) -> Result<StrataReport, CliError> {
    let (n, source, decs) = match (n, tree) {
        (Some(n), _) => (n, "boundary", enumerate_decompositions(n)?),
        (None, Some(path)) => {
            let t = load_tree(path)?;
            (t.n, "edge_cuts", t.edge_cuts()?)
        }
        (None, None) => return Err(CliError::Usage(String::from("give --n or --tree"))),
    };
    let decompositions: Vec<Split> = decs.iter().map(|s| split(s.first(), s.second())).collect();
    Ok(StrataReport { n, source: source.to_string(), count: decompositions.len(), decompositions })
}

fn fsupport(tree: &Path, d: &str) -> Result<FsupportReport, CliError> {
    let t = load_tree(tree)?;
    let d = WeightVector::new(parse_rational_list(d)?)?;
    if d.len() != t.n as usize {
        return Err(subadj_core::Error::SizeMismatch { expected: t.n as usize, found: d.len() }.into());
    }
    let mut cuts = Vec::new();
    for cut in t.edge_cuts()? {
        let charge = f_charge(&d, &cut)?;
        cuts.push(CutRow {
            first: cut.first().to_vec(),
            second: cut.second().to_vec(),
            alpha_first: Q(d.alpha(cut.first())?),
            charged: charge.charged.to_vec(),
            coefficient: Q(charge.coefficient),
        });
    }
    let vertices = f_vertex_coefficients(&t, &d)?
        .into_iter()
        .map(|(id, c)| VertexRow { id, tails: t.tails_at(id).to_vec(), coefficient: Q(c) })
        .collect();
    let seq = t.contraction_sequence(&d)?;
    let contraction = seq
        .steps
        .iter()
        .map(|s| StepRow { vertex: s.vertex, carried: s.carried.to_vec(), alpha: Q(s.alpha.clone()) })
        .collect();
    Ok(FsupportReport { weights: qs(d.entries()), cuts, vertices, contraction, k0: seq.k0, distinguished: seq.distinguished() })
}

struct OmegaArgs<'a> {
    d: &'a str,
    m: Option<u64>,
    points: Option<&'a str>,
    collide: &'a [String],
    tangency: u32,
    base: Option<&'a str>,
    section: bool,
}

fn omega_report(a: OmegaArgs) -> Result<OmegaReport, CliError> {
    let d = WeightVector::new(parse_rational_list(a.d)?)?;
    let n = d.len();
    let m = a.m.unwrap_or_else(|| d.least_multiplier());
    let line = match a.points {
        Some(s) => MarkedLine::new(parse_rational_list(s)?)?,
        None => MarkedLine::standard(n),
    };
    if line.len() != n {
        return Err(subadj_core::Error::SizeMismatch { expected: n, found: line.len() }.into());
    }
    let w = omega::canonical_section(&line, &d, m)?;
    let pole_orders = (1..=n as u32).map(|l| w.pole_order(l)).collect::<Result<Vec<_>, _>>()?;
    let divisor = w.divisor();
    let base = match a.base {
        Some(s) => rational::parse(s)?,
        None => line.points().iter().min().cloned().unwrap_or_else(rational::zero) - rational::one(),
    };
    let mp = Rational::from_integer((m * w.p).into());
    let mut collisions = Vec::new();
    for spec in a.collide {
        let colliding = LabelSet::from_labels(parse_label_list(spec)?)?;
        let mut c = Collision::transversal(colliding, base.clone());
        c.tangency = a.tangency;
        let order = omega::collision_order(&d, m, &line, &c)?;
        let k = colliding.len() as usize;
        let moduli_coefficient = if k >= 2 && k + 2 <= n {
            Some(Q(omega::moduli_coefficient(&d, m, colliding)?))
        } else {
            None
        };
        collisions.push(CollisionRow {
            colliding: colliding.to_vec(),
            base: Q(base.clone()),
            tangency: a.tangency,
            order,
            normalized: Q(Rational::from_integer(order.into()) / &mp),
            moduli_coefficient,
        });
    }
    let section = a.section.then(|| SectionJson {
        numerator: qs(w.numerator.coeffs()),
        denominator: qs(w.denominator.coeffs()),
        form_weight: w.form_weight,
    });
    Ok(OmegaReport {
        weights: qs(d.entries()),
        m,
        p: w.p,
        form_weight: w.form_weight,
        points: qs(line.points()),
        pole_orders,
        divisor_empty: divisor.is_empty(),
        divisor_degree: divisor.degree(),
        collisions,
        section,
    })
}

fn emit<T: Serialize + Render>(value: &T, format: Format, out: &mut dyn Write) -> Result<(), CliError> {
    let text = match format {
        Format::Json => serde_json::to_string_pretty(value).map_err(|e| CliError::Json(e.to_string()))? + "\n",
        Format::Table => value.table(),
    };
    out.write_all(text.as_bytes()).map_err(|e| CliError::Io(e.to_string()))
}

/// Runs one parsed command; `Ok(false)` means a requested assertion failed.
pub fn execute(cli: &Cli, out: &mut dyn Write) -> Result<bool, CliError> {
    let f = cli.format;
    match &cli.command {
        Command::Strata { n, tree } => emit(&strata(*n, tree.as_deref())?, f, out)?,
        Command::Fsupport { tree, d } => emit(&fsupport(tree, d)?, f, out)?,
        Command::Omega { d, m, points, collide, tangency, base, section } => {
            let args = OmegaArgs {
                d,
                m: *m,
                points: points.as_deref(),
                collide,
                tangency: *tangency,
                base: base.as_deref(),
                section: *section,
            };
            emit(&omega_report(args)?, f, out)?
        }
        Command::Model { file } => match load_model(file)? {
            Loaded::Surface(s) => emit(&ModelReport::of(&s)?, f, out)?,
            Loaded::Family(_) => {
                return Err(CliError::Schema(format!("{}: `model` takes a surface model", file.display())))
            }
        },
        Command::Cbf { file, normalize, check } => match load_model(file)? {
            Loaded::Surface(s) => {
                let s = if *normalize { normalize_vertical(&s)? } else { s };
                let report = CbfJson::from(&cbf_report(&LogFibration::new(s)?)?);
                emit(&report, f, out)?;
                return Ok(!check || report.flags_hold());
            }
            Loaded::Family(fam) => {
                let (c, deg) = contract_and_degree(&fam)?;
                let report = FamilyJson::of(&c, &deg);
                emit(&report, f, out)?;
                return Ok(!check || (report.deg_m_nonnegative && report.truncation_agrees));
            }
        },
        Command::Verify => {
            let report = verify::run_all();
            emit(&report, f, out)?;
            return Ok(report.passed);
        }
    }
    Ok(true)
}

fn report_error(e: &CliError, json: bool, err: &mut dyn Write) {
    let _ = if json {
        let v = serde_json::json!({ "error": { "code": e.code(), "message": e.to_string() } });
        writeln!(err, "{v}")
    } else {
        writeln!(err, "error[{}]: {e}", e.code())
    };
}

/// Parses `args` (including the program name) and runs; returns the exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let args: Vec<std::ffi::OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{e}");
                return 0;
            }
            let json = args.windows(2).any(|w| w[0] == "--format" && w[1] == "json")
                || args.iter().any(|a| a == "--format=json");
            let msg = e.render().to_string();
            let first = msg.lines().next().unwrap_or("").trim_start_matches("error: ").to_string();
            report_error(&CliError::Usage(first), json, err);
            return 2;
        }
    };
    match execute(&cli, out) {
        Ok(true) => 0,
        Ok(false) => {
            report_error(&CliError::Assertion(String::from("a requested check failed")), cli.format == Format::Json, err);
            1
        }
        Err(e) => {
            report_error(&e, cli.format == Format::Json, err);
            e.exit_code()
        }
    }
}
