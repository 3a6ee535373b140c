//! Command-line front end.
//!
//! Every command prints `key=value` lines with keys in natural order (digit
//! runs compare numerically). Exit status is 0 on success, 1 on a domain error
//! (reported as `error=<Code>`) and 2 on malformed input or usage.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt::Display;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use num_traits::Zero;

use crate::complex::{CellComplex, Subcomplex};
use crate::error::{Error, ParseError};
use crate::flatends::{self, EndDescriptor, LatticeGroup, WarpMode, DEFAULT_CAP};
use crate::formats;
use crate::hodge::{Condition, WeightedComplex};
use crate::linalg::Rational;
use crate::models::{self, ModelSpec, SweepBoundary};
use crate::pairs::{ker_pullback_cohomology, Pair};

#[derive(Debug, Parser)]
#[command(name = "hodgecw", version, about = "Exact cohomology, harmonic cochains and flat-end invariants")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, clap::Args)]
struct WeightArgs {
    /// `weights v1` file; cells default to weight 1 only with --default-unit.
    #[arg(long)]
    weights: Option<PathBuf>,
    #[arg(long)]
    default_unit: bool,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check that the boundary of every boundary vanishes.
    Validate { complex: PathBuf },
    /// Rational Betti numbers.
    Betti { complex: PathBuf },
    /// Euler characteristic.
    Euler { complex: PathBuf },
    /// Harmonic cochains under diagonal weights.
    Harmonic {
        complex: PathBuf,
        #[command(flatten)]
        weights: WeightArgs,
        #[arg(long)]
        deg: Option<usize>,
        /// Subcomplex carrying the relative condition.
        #[arg(long)]
        rel: Option<PathBuf>,
    },
    /// Split a cochain into harmonic, exact and coexact parts.
    HodgeSplit {
        complex: PathBuf,
        /// `cochain v1` file.
        #[arg(long)]
        cochain: PathBuf,
        #[command(flatten)]
        weights: WeightArgs,
    },
    /// Long exact sequence of a pair, degree by degree.
    PairAudit {
        complex: PathBuf,
        #[arg(long)]
        sub: PathBuf,
    },
    /// Image of relative in absolute cohomology.
    ImRelAbs {
        complex: PathBuf,
        #[arg(long)]
        sub: PathBuf,
        #[arg(long)]
        deg: Option<usize>,
    },
    /// Cohomology of the cochains vanishing on a subcomplex.
    KerPullback {
        complex: PathBuf,
        #[arg(long)]
        fiber: PathBuf,
        #[arg(long)]
        deg: Option<usize>,
    },
    /// Invariant and anti-invariant harmonic dimensions on the double.
    Double {
        complex: PathBuf,
        #[arg(long)]
        sub: PathBuf,
        /// Weights on the original complex, copied to both halves.
        #[command(flatten)]
        weights: WeightArgs,
        #[arg(long)]
        deg: Option<usize>,
    },
    /// Absolute degree-k against relative degree-(n-k) harmonic dimensions.
    Duality {
        complex: PathBuf,
        #[arg(long)]
        sub: PathBuf,
        #[command(flatten)]
        weights: WeightArgs,
    },
    /// Finite group generated by integer matrices, with traces and Lefschetz numbers.
    GroupClosure {
        group: PathBuf,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: usize,
    },
    /// Betti numbers of the invariant part of the exterior algebra.
    EquivBetti {
        group: PathBuf,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: usize,
    },
    /// Average Lefschetz number over the group.
    ChiEquivariant {
        group: PathBuf,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: usize,
    },
    /// End contribution and boundary term of one end.
    QEnd {
        /// `nu=<ν>,n=<n>,group=<file>|trivial,cover=<c>[,parabolic]`
        #[arg(long)]
        end: String,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: usize,
    },
    /// L2 Euler characteristic from chi and the ends.
    ChiL2 {
        #[arg(long, allow_hyphen_values = true)]
        chi: i64,
        /// Repeat once per end.
        #[arg(long)]
        end: Vec<String>,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: usize,
    },
    /// L2 Euler characteristic of a cone or shrinking warped product.
    ChiL2Warped {
        #[arg(long, allow_hyphen_values = true)]
        chi: i64,
        /// Betti numbers b_0..b_{n-1} of the cross-section, comma separated.
        #[arg(long, value_delimiter = ',', num_args = 0..)]
        betti: Vec<i64>,
        #[arg(long, value_enum)]
        case: Case,
        #[arg(long)]
        n: usize,
    },
    /// Print a model complex, or write it with its subcomplexes to --out.
    Model {
        #[arg(value_enum)]
        kind: Kind,
        #[arg(long, default_value_t = 3)]
        res: usize,
        #[arg(long)]
        nu: Option<usize>,
        #[arg(long, default_value_t = 0)]
        m: usize,
        #[arg(long, default_value_t = 2)]
        rank: usize,
        #[arg(long)]
        shells: Option<usize>,
        #[arg(long, default_value_t = 1)]
        segments: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write radial weights (end models only, needs --out).
        #[arg(long, requires = "out")]
        radial: bool,
    },
    /// Relative harmonic dimensions of radially weighted end models.
    Sweep {
        #[arg(long)]
        nu: usize,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, value_delimiter = ',', required = true)]
        shells: Vec<usize>,
        #[arg(long, default_value_t = 3)]
        res: usize,
        #[arg(long, value_enum, default_value_t = Side::Inner)]
        boundary: Side,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Case {
    Cone,
    Shrinking,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Side {
    Inner,
    Both,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Kind {
    Circle,
    Interval,
    Torus,
    Sphere,
    Ball,
    Annulus,
    PuncturedTorus,
    EndModel,
    CoreModel,
}

enum Failure {
    Usage(String),
    Parse { input: String, error: ParseError },
    Io { input: String, message: String },
    Domain(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e)
    }
}

type Outcome<T> = std::result::Result<T, Failure>;

/// Report lines, sorted on output.
#[derive(Default)]
struct Report {
    lines: Vec<(String, String)>,
    raw: Option<String>,
}

impl Report {
    fn put(&mut self, key: impl Into<String>, value: impl Display) {
        self.lines.push((key.into(), value.to_string()));
    }

    fn render(mut self) -> String {
        if let Some(raw) = self.raw {
            return raw;
        }
        self.lines.sort_by(|a, b| natural_cmp(&a.0, &b.0));
        self.lines.iter().map(|(k, v)| format!("{k}={v}\n")).collect()
    }
}

fn natural_cmp(a: &str, b: &str) -> Ordering {
    fn chunks(s: &str) -> Vec<(bool, &str)> {
        let mut out = Vec::new();
        let mut start = 0;
        let bytes = s.as_bytes();
        for i in 1..=bytes.len() {
            if i == bytes.len() || bytes[i].is_ascii_digit() != bytes[start].is_ascii_digit() {
                out.push((bytes[start].is_ascii_digit(), &s[start..i]));
                start = i;
            }
        }
        out
    }
    let (ca, cb) = (chunks(a), chunks(b));
    for (x, y) in ca.iter().zip(&cb) {
        let ord = match (x, y) {
            ((true, x), (true, y)) => {
                let (x, y) = (x.trim_start_matches('0'), y.trim_start_matches('0'));
                x.len().cmp(&y.len()).then_with(|| x.cmp(y))
            }
            ((_, x), (_, y)) => x.cmp(y),
        };
        if ord != Ordering::Equal {
            return ord;
        }
    }
    ca.len().cmp(&cb.len()).then_with(|| a.cmp(b))
}

/// Runs one command line (including the program name) and returns the exit
/// status with everything that should go to standard output.
pub fn run<I, T>(args: I) -> (i32, String)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => (0, e.to_string()),
                _ => {
                    let text = e.to_string();
                    let first = text.lines().next().unwrap_or("").trim_start_matches("error: ").to_string();
                    (2, render_failure(Failure::Usage(first)))
                }
            };
        }
    };
    match execute(cli.command) {
        Ok(report) => (0, report.render()),
        Err(f) => {
            let code = match f {
                Failure::Domain(_) => 1,
                _ => 2,
            };
            (code, render_failure(f))
        }
    }
}

fn render_failure(f: Failure) -> String {
    let mut r = Report::default();
    match f {
        Failure::Usage(message) => {
            r.put("error", "UsageError");
            r.put("message", message);
        }
        Failure::Parse { input, error } => {
            r.put("error", "ParseError");
            r.put("input", input);
            r.put("line", error.line);
            r.put("message", error.message);
        }
        Failure::Io { input, message } => {
            r.put("error", "IoError");
            r.put("input", input);
            r.put("message", message);
        }
        Failure::Domain(e) => {
            r.put("error", e.code());
            r.put("message", &e);
            if let Error::InvalidComplex(violations) = &e {
                for (i, v) in violations.iter().enumerate() {
                    r.put(format!("violation.{i}.dim"), v.dim);
                    r.put(format!("violation.{i}.cell"), &v.column);
                }
            }
        }
    }
    r.render()
}

fn read(path: &Path, input: &str) -> Outcome<String> {
    fs::read_to_string(path)
        .map_err(|e| Failure::Io { input: input.to_string(), message: format!("{}: {e}", path.display()) })
}

/// Reads and parses a file, attributing parse errors to `input`.
fn load<T>(path: &Path, input: &str, parse: impl FnOnce(&str) -> crate::error::Result<T>) -> Outcome<T> {
    let text = read(path, input)?;
    parse(&text).map_err(|e| match e {
        Error::Parse(error) => Failure::Parse { input: format!("{input} {}", path.display()), error },
        other => Failure::Domain(other),
    })
}

fn load_complex(path: &Path) -> Outcome<CellComplex> {
    Ok(load(path, "<complex>", formats::parse_complex)?.validated()?)
}

fn load_sub(path: &Path, flag: &str, x: &CellComplex) -> Outcome<Subcomplex> {
    load(path, flag, |t| formats::parse_subcomplex(t, x))
}

fn load_weighted(x: CellComplex, args: &WeightArgs) -> Outcome<WeightedComplex> {
    Ok(match &args.weights {
        None => WeightedComplex::uniform(x),
        Some(p) => {
            let map = load(p, "--weights", |t| formats::parse_weights(t, &x))?;
            WeightedComplex::from_map(x, &map, args.default_unit)?
        }
    })
}

fn load_group(path: &Path, input: &str, cap: usize) -> Outcome<LatticeGroup> {
    let (m, gens) = load(path, input, formats::parse_group)?;
    Ok(flatends::closure(m, &gens, cap)?)
}

fn degrees(top: usize, deg: Option<usize>) -> Outcome<Vec<usize>> {
    match deg {
        Some(k) if k > top => Err(Error::DegreeOutOfRange { degree: k, top }.into()),
        Some(k) => Ok(vec![k]),
        None => Ok((0..=top).collect()),
    }
}

/// `name` alone when a single degree was requested, else `name.k`.
fn keyed(name: &str, k: usize, single: bool) -> String {
    if single {
        name.to_string()
    } else {
        format!("{name}.{k}")
    }
}

fn join<T: Display>(values: &[T]) -> String {
    values.iter().map(T::to_string).collect::<Vec<_>>().join(" ")
}

fn parse_end(spec: &str, cap: usize) -> Outcome<EndDescriptor> {
    let usage = |msg: String| Failure::Usage(format!("--end `{spec}`: {msg}"));
    let (mut nu, mut n, mut group, mut cover, mut parabolic) = (None, None, None, 1u64, false);
    for part in spec.split(',') {
        match part.split_once('=') {
            None if part == "parabolic" => parabolic = true,
            None => return Err(usage(format!("unrecognised field `{part}`"))),
            Some((key, value)) => {
                let int = |v: &str| v.parse::<u64>().map_err(|_| usage(format!("`{key}` needs an integer, got `{v}`")));
                match key {
                    "nu" => nu = Some(int(value)? as usize),
                    "n" => n = Some(int(value)? as usize),
                    "cover" => cover = int(value)?,
                    "group" => group = Some(value.to_string()),
                    _ => return Err(usage(format!("unrecognised field `{key}`"))),
                }
            }
        }
    }
    let nu = nu.ok_or_else(|| usage("missing `nu`".into()))?;
    let n = n.ok_or_else(|| usage("missing `n`".into()))?;
    if parabolic {
        if group.is_some() {
            return Err(usage("a parabolic end takes no group".into()));
        }
        return Ok(EndDescriptor::parabolic(nu, n)?);
    }
    let group = match group.as_deref() {
        None | Some("trivial") => None,
        Some(path) => Some(load_group(Path::new(path), "--end", cap)?),
    };
    Ok(EndDescriptor::flat(nu, n, group, cover)?)
}

fn model_spec(kind: Kind, res: usize, nu: Option<usize>, m: usize, rank: usize, shells: Option<usize>, segments: usize) -> Outcome<ModelSpec> {
    let need = |v: Option<usize>, flag: &str| v.ok_or_else(|| Failure::Usage(format!("model {kind:?} requires {flag}")));
    Ok(match kind {
        Kind::Circle => ModelSpec::Circle { res },
        Kind::Interval => ModelSpec::Interval { segments },
        Kind::Torus => ModelSpec::Torus { rank, res },
        Kind::Sphere => ModelSpec::Sphere { nu: need(nu, "--nu")? },
        Kind::Ball => ModelSpec::Ball { nu: need(nu, "--nu")? },
        Kind::Annulus => ModelSpec::Annulus { res, segments },
        Kind::PuncturedTorus => ModelSpec::PuncturedTorus { res },
        Kind::EndModel => ModelSpec::EndModel { nu: need(nu, "--nu")?, m, shells: need(shells, "--shells")?, res },
        Kind::CoreModel => ModelSpec::CoreModel { nu: need(nu, "--nu")?, m, res },
    })
}

fn kind_name(kind: Kind) -> String {
    kind.to_possible_value().map(|v| v.get_name().to_string()).unwrap_or_default()
}

fn write(path: &Path, text: &str) -> Outcome<()> {
    fs::write(path, text).map_err(|e| Failure::Io { input: "--out".into(), message: format!("{}: {e}", path.display()) })
}

fn execute(command: Command) -> Outcome<Report> {
    let mut r = Report::default();
    match command {
        Command::Validate { complex } => {
            let x = load(&complex, "<complex>", formats::parse_complex)?;
            x.validate().map_err(Error::InvalidComplex)?;
            r.put("status", "ok");
            r.put("dim", x.top_dim());
            for k in 0..=x.top_dim() {
                r.put(format!("cells.{k}"), x.num_cells(k));
            }
        }
        Command::Betti { complex } => {
            let x = load_complex(&complex)?;
            for (k, b) in x.betti_numbers().iter().enumerate() {
                r.put(format!("b{k}"), b);
            }
        }
        Command::Euler { complex } => {
            r.put("euler", load_complex(&complex)?.euler());
        }
        Command::Harmonic { complex, weights, deg, rel } => {
            let x = load_complex(&complex)?;
            let (condition, sub) = match rel {
                Some(p) => (Condition::Relative, load_sub(&p, "--rel", &x)?),
                None => (Condition::Absolute, Subcomplex::empty(&x)),
            };
            let w = load_weighted(x, &weights)?;
            r.put("condition", condition.name());
            let single = deg.is_some();
            for k in degrees(w.complex().top_dim(), deg)? {
                let h = w.harmonic_basis(k, condition, &sub)?;
                r.put(keyed("dim", k, single), h.dim());
                if single {
                    r.put("degree", k);
                    r.put("cells", w.complex().ids(k).join(" "));
                    for (i, v) in h.vectors.iter().enumerate() {
                        r.put(format!("basis.{i}"), join(v));
                    }
                }
            }
        }
        Command::HodgeSplit { complex, cochain, weights } => {
            let x = load_complex(&complex)?;
            let (k, v) = load(&cochain, "--cochain", |t| formats::parse_cochain(t, &x))?;
            let w = load_weighted(x, &weights)?;
            let s = w.hodge_split(k, &v)?;
            let orthogonal = w.inner(k, &s.harmonic, &s.exact).is_zero()
                && w.inner(k, &s.harmonic, &s.coexact).is_zero()
                && w.inner(k, &s.exact, &s.coexact).is_zero();
            r.put("degree", k);
            r.put("cells", w.complex().ids(k).join(" "));
            r.put("harmonic", join(&s.harmonic));
            r.put("exact", join(&s.exact));
            r.put("coexact", join(&s.coexact));
            r.put("orthogonal", orthogonal);
        }
        Command::PairAudit { complex, sub } => {
            let x = load_complex(&complex)?;
            let a = load_sub(&sub, "--sub", &x)?;
            let report = Pair::new(x, a)?.les_audit()?;
            for d in &report.degrees {
                let k = d.degree;
                r.put(format!("rel.{k}"), d.rel_dim);
                r.put(format!("abs.{k}"), d.abs_dim);
                r.put(format!("sub.{k}"), d.sub_dim);
                r.put(format!("rank_i.{k}"), d.rank_i);
                r.put(format!("rank_j.{k}"), d.rank_j);
                r.put(format!("rank_b.{k}"), d.rank_b);
                r.put(format!("exact.{k}"), d.exact_at_rel && d.exact_at_abs && d.exact_at_sub);
            }
            r.put("compositions_vanish", report.compositions_vanish);
            r.put("exact", report.all_exact());
            r.put("alternating_sum", report.alternating_sum());
        }
        Command::ImRelAbs { complex, sub, deg } => {
            let x = load_complex(&complex)?;
            let a = load_sub(&sub, "--sub", &x)?;
            let pair = Pair::new(x, a)?;
            let single = deg.is_some();
            for k in degrees(pair.complex().top_dim(), deg)? {
                let img = pair.image_rel_to_abs(k)?;
                r.put(keyed("image", k, single), img.rank);
                if single {
                    r.put("degree", k);
                    r.put("cells", pair.complex().ids(k).join(" "));
                    for (i, v) in img.basis.iter().enumerate() {
                        r.put(format!("basis.{i}"), join(v));
                    }
                }
            }
        }
        Command::KerPullback { complex, fiber, deg } => {
            let x = load_complex(&complex)?;
            let t = load_sub(&fiber, "--fiber", &x)?;
            let single = deg.is_some();
            for k in degrees(x.top_dim(), deg)? {
                r.put(keyed("dim", k, single), ker_pullback_cohomology(&x, &t, k)?);
            }
        }
        Command::Double { complex, sub, weights, deg } => {
            let x = load_complex(&complex)?;
            let a = load_sub(&sub, "--sub", &x)?;
            let map = match &weights.weights {
                Some(p) => Some(load(p, "--weights", |t| formats::parse_weights(t, &x))?),
                None => None,
            };
            let (d, sigma) = x.double(&a)?;
            let w = match map {
                None => WeightedComplex::uniform(d),
                Some(map) => {
                    let mut doubled: HashMap<String, Rational> = HashMap::new();
                    for (id, value) in map {
                        for copy in [id.clone(), format!("{id}@0"), format!("{id}@1")] {
                            if d.locate(&copy).is_some() {
                                doubled.insert(copy, value.clone());
                            }
                        }
                    }
                    WeightedComplex::from_map(d, &doubled, weights.default_unit)?
                }
            };
            let single = deg.is_some();
            for k in degrees(w.complex().top_dim(), deg)? {
                let s = w.double_split(&sigma, k)?;
                r.put(keyed("inv", k, single), s.invariant);
                r.put(keyed("anti", k, single), s.anti_invariant);
                r.put(keyed("betti", k, single), w.complex().betti(k));
            }
        }
        Command::Duality { complex, sub, weights } => {
            let x = load_complex(&complex)?;
            let a = load_sub(&sub, "--sub", &x)?;
            let w = load_weighted(x, &weights)?;
            let mut all = true;
            for k in 0..=w.complex().top_dim() {
                let d = w.duality_check(k, &a)?;
                r.put(format!("abs.{k}"), d.abs_dim);
                r.put(format!("rel.{}", d.dual_degree), d.rel_dim);
                all &= d.equal();
            }
            r.put("equal", all);
        }
        Command::GroupClosure { group, cap } => {
            let g = load_group(&group, "<group>", cap)?;
            r.put("order", g.order());
            r.put("rank", g.rank());
            for (i, e) in g.elements().iter().enumerate() {
                let rows: Vec<String> = e.entries().chunks(g.rank().max(1)).take(g.rank()).map(join).collect();
                r.put(format!("element.{i}"), rows.join("; "));
                r.put(format!("traces.{i}"), join(&flatends::exterior_traces(e)));
                r.put(format!("lefschetz.{i}"), flatends::lefschetz(e)?);
            }
        }
        Command::EquivBetti { group, cap } => {
            let g = load_group(&group, "<group>", cap)?;
            for (k, b) in flatends::invariant_betti_numbers(&g)?.iter().enumerate() {
                r.put(format!("b{k}"), b);
            }
        }
        Command::ChiEquivariant { group, cap } => {
            let g = load_group(&group, "<group>", cap)?;
            r.put("order", g.order());
            r.put("chi_equivariant", flatends::chi_equivariant(&g)?);
        }
        Command::QEnd { end, cap } => {
            let e = parse_end(&end, cap)?;
            r.put("q", flatends::q_end(&e)?);
            r.put("boundary_term", flatends::boundary_term(&e)?);
        }
        Command::ChiL2 { chi, end, cap } => {
            let ends = end.iter().map(|s| parse_end(s, cap)).collect::<Outcome<Vec<_>>>()?;
            let report = flatends::chi_l2(chi, &ends)?;
            r.put("chi_l2", report.chi_l2);
            r.put("euler_form_integral", report.euler_form_integral);
            r.put("q_sum", report.q_sum);
        }
        Command::ChiL2Warped { chi, betti, case, n } => {
            let mode = match case {
                Case::Cone => WarpMode::Cone,
                Case::Shrinking => WarpMode::Shrinking,
            };
            r.put("chi_l2", flatends::chi_l2_warped(chi, &betti, mode, n)?);
        }
        Command::Model { kind, res, nu, m, rank, shells, segments, out, radial } => {
            let spec = model_spec(kind, res, nu, m, rank, shells, segments)?;
            let model = models::build(&spec)?;
            let Some(dir) = out else {
                r.raw = Some(formats::write_complex(&model.complex));
                return Ok(r);
            };
            let name = kind_name(kind);
            let path = dir.join(format!("{name}.cc"));
            write(&path, &formats::write_complex(&model.complex))?;
            r.put("complex", path.display());
            for (sub_name, s) in &model.subcomplexes {
                let path = dir.join(format!("{name}.{sub_name}.sc"));
                write(&path, &formats::write_subcomplex(&model.complex, s))?;
                r.put(format!("sub.{sub_name}"), path.display());
            }
            if radial {
                let w = models::radial_weights(&model, &Rational::from_integer(1.into()), &Rational::from_integer(1.into()))?;
                let ws: Vec<Vec<Rational>> = (0..=model.complex.top_dim()).map(|k| w.weights(k).to_vec()).collect();
                let path = dir.join(format!("{name}.weights"));
                write(&path, &formats::write_weights(&model.complex, &ws))?;
                r.put("weights", path.display());
            }
            for k in 0..=model.complex.top_dim() {
                r.put(format!("cells.{k}"), model.complex.num_cells(k));
            }
        }
        Command::Sweep { nu, m, k, shells, res, boundary } => {
            let side = match boundary {
                Side::Inner => SweepBoundary::Inner,
                Side::Both => SweepBoundary::Both,
            };
            let rows = models::sweep(nu, m, k, &shells, side, res)?;
            for (i, row) in rows.iter().enumerate() {
                r.put(format!("row.{i}.shells"), row.shells);
                r.put(format!("row.{i}.dim"), row.dim);
            }
            if let Some(first) = rows.first() {
                r.put("unit_dim", first.unit_dim);
            }
        }
    }
    Ok(r)
}
