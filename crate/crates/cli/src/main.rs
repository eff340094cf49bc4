mod export;
mod input;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use stratakit::category::category_isomorphism;
use stratakit::chain::HomologyMode;
use stratakit::{abrams_complex, ChainComplex, CombinatorialCss, ConfSpace, DeltaComplex, HomologyResult};

use report::{RunReport, Timing};

/// Face categories, subdivisions, duals and integer homology of cellular
/// stratified spaces.
#[derive(Debug, Parser)]
#[command(name = "stratakit", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Write the report (or the exported artifact) to this path.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Compute Betti numbers over the rationals and skip torsion.
    #[arg(long, global = true)]
    rank_only: bool,
    /// Add wall-clock timing to the report. It is excluded from the digest.
    #[arg(long, global = true)]
    timing: bool,
}

#[derive(Debug, Clone, Args)]
struct Input {
    /// JSON input file.
    #[arg(long)]
    file: Option<PathBuf>,
    /// Named built-in input.
    #[arg(long)]
    fixture: Option<String>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check a stratified space and list every problem found.
    Validate(Input),
    /// Summarize the face category.
    Facecat(Input),
    /// Barycentric subdivision with its homology.
    Sd(Input),
    /// Homology of a Δ-complex, or of the subdivision of a space.
    Homology(Input),
    /// The stellar dual.
    Dual(Input),
    /// The Salvetti complex, the dual of the dual.
    Salvetti(Input),
    /// Sign-vector stratifications of a real hyperplane arrangement.
    Arrangement {
        #[command(subcommand)]
        op: ArrangementOp,
    },
    /// Configuration spaces of points in a graph.
    Conf(ConfArgs),
    /// The discretized configuration space of a subdivided graph.
    Abrams(AbramsArgs),
    /// Render a space as DOT, OFF or JSON.
    Export {
        #[command(subcommand)]
        format: ExportFormat,
    },
}

#[derive(Debug, Clone, Args)]
struct OrderArgs {
    #[command(flatten)]
    input: Input,
    /// Number of copies of the ambient space.
    #[arg(long, default_value_t = 1)]
    order: usize,
}

#[derive(Debug, Subcommand)]
enum ArrangementOp {
    /// Strata of the order-ℓ stratification.
    Faces(OrderArgs),
    /// The strata in the complement of the arrangement and their order complex.
    Complement(OrderArgs),
    /// The Salvetti complex of the complement.
    Salvetti(OrderArgs),
    /// Strata indexed by one level-1 face per copy.
    Symmetric(OrderArgs),
}

#[derive(Debug, Clone, Args)]
struct ConfArgs {
    #[command(flatten)]
    input: Input,
    /// Number of points.
    #[arg(long, default_value_t = 2)]
    k: usize,
    /// Ordered configurations (the default).
    #[arg(long, conflicts_with = "unordered")]
    ordered: bool,
    /// Unordered configurations, the quotient by the symmetric group.
    #[arg(long)]
    unordered: bool,
    /// Cross-check against the discretized model.
    #[arg(long)]
    oracle: bool,
    /// Subdivisions per edge for the discretized model; defaults to k + 1.
    #[arg(long)]
    subdivide: Option<usize>,
}

#[derive(Debug, Clone, Args)]
struct AbramsArgs {
    #[command(flatten)]
    input: Input,
    #[arg(long, default_value_t = 2)]
    k: usize,
    /// Subdivisions per edge; defaults to k + 1.
    #[arg(long)]
    subdivide: Option<usize>,
}

#[derive(Debug, Clone, Args)]
struct DotArgs {
    #[command(flatten)]
    input: Input,
    /// Draw the Hasse diagram of the face poset instead of the category.
    #[arg(long)]
    hasse: bool,
}

#[derive(Debug, Subcommand)]
enum ExportFormat {
    Dot(DotArgs),
    /// Triangles of the barycentric subdivision of a space of dimension ≤ 2.
    Off(Input),
    /// The space in its JSON exchange format.
    Json(Input),
}

/// Why a run stopped. Validation failures exit with 2, everything else
/// with 1.
#[derive(Debug)]
pub enum Failure {
    Io(String),
    Parse(String),
    Usage(String),
    Invalid(Vec<String>),
}

impl From<stratakit::Error> for Failure {
    fn from(e: stratakit::Error) -> Self {
        match e {
            stratakit::Error::Schema { .. } => Failure::Parse(e.to_string()),
            e => Failure::Invalid(vec![e.to_string()]),
        }
    }
}

enum Outcome {
    Report(RunReport),
    Artifact(String, RunReport),
}

fn homology_of(k: &DeltaComplex, rank_only: bool) -> Result<HomologyResult, Failure> {
    let mode = if rank_only { HomologyMode::RankOnly } else { HomologyMode::Integral };
    Ok(ChainComplex::from_delta(k)?.homology_with(mode))
}

fn sd_report(report: &mut RunReport, x: &CombinatorialCss, rank_only: bool) -> Result<(), Failure> {
    let k = x.sd()?;
    let h = homology_of(&k, rank_only)?;
    report.complex(&k, &h);
    Ok(())
}

fn validate(input: &Input) -> Result<RunReport, Failure> {
    let (json, source) = input::space(&input.file, &input.fixture)?;
    let mut report = RunReport::new("validate", &source);
    let x = match json.to_css() {
        Ok(x) => x,
        Err(e @ stratakit::Error::Schema { .. }) => return Err(e.into()),
        Err(e) => {
            // closed flags could not be computed; supply them so that the
            // remaining checks still run
            let mut flagged = json.clone();
            for o in &flagged.objects {
                flagged.closed.entry(o.id.to_string()).or_insert(false);
            }
            let x = flagged.to_css()?;
            let problems = x
                .validate()
                .into_iter()
                .filter(|d| !matches!(d, stratakit::CssDiagnostic::ClosedFlagMismatch { .. }));
            report.diagnostics.extend(problems.map(|d| d.to_string()));
            if report.diagnostics.is_empty() {
                report.diagnostics.push(e.to_string());
            }
            report.detail("cells", x.num_cells()).detail("valid", false);
            return Ok(report);
        }
    };
    report.diagnostics.extend(x.validate().iter().map(|d| d.to_string()));
    let valid = report.diagnostics.is_empty();
    report
        .detail("cells", x.num_cells())
        .detail("morphisms", x.category().num_morphisms())
        .detail("cell_counts", x.cell_counts())
        .detail("closed_cells", x.closed_flags().iter().filter(|&&c| c).count())
        .detail("valid", valid);
    Ok(report)
}

fn facecat(input: &Input) -> Result<RunReport, Failure> {
    let (x, source) = input::valid_space(&input.file, &input.fixture)?;
    let c = x.category();
    let mut report = RunReport::new("facecat", &source);
    let cells: Vec<serde_json::Value> = (0..x.num_cells())
        .map(|v| serde_json::json!({"name": c.object_name(v), "dim": x.dim(v), "closed": x.is_closed(v)}))
        .collect();
    let mut parallel = 0;
    for a in 0..c.num_objects() {
        for b in 0..c.num_objects() {
            if c.hom(a, b).len() > 1 {
                parallel += 1;
            }
        }
    }
    let poset = c.underlying_poset()?;
    report
        .detail("cell_counts", x.cell_counts())
        .detail("morphisms", c.num_morphisms())
        .detail("composites", c.composition_table().len())
        .detail("parallel_hom_sets", parallel)
        .detail("poset_covers", poset.covers())
        .detail("cells", cells);
    Ok(report)
}

fn space_op(name: &str, input: &Input, rank_only: bool) -> Result<RunReport, Failure> {
    let (x, source) = input::valid_space(&input.file, &input.fixture)?;
    let mut report = RunReport::new(name, &source);
    match name {
        "sd" => {
            sd_report(&mut report, &x, rank_only)?;
            report.detail("cell_counts", x.cell_counts());
            if x.all_closed() {
                report.detail("cell_euler_characteristic", x.cell_euler_characteristic());
            }
        }
        "dual" => {
            let d = x.dual()?;
            sd_report(&mut report, &d, rank_only)?;
            report
                .detail("cell_counts", d.cell_counts())
                .detail("closed_cells", d.closed_flags().iter().filter(|&&c| c).count());
        }
        "salvetti" => {
            let s = x.salvetti_complex()?;
            sd_report(&mut report, &s, rank_only)?;
            report.detail("cell_counts", s.cell_counts());
            if x.all_closed() {
                let iso = category_isomorphism(s.category(), x.category()).is_some();
                report.detail("isomorphic_to_input", iso);
            }
        }
        _ => unreachable!("unknown space operation {name}"),
    }
    Ok(report)
}

fn homology(input: &Input, rank_only: bool) -> Result<RunReport, Failure> {
    let (k, source) = input::complex(&input.file, &input.fixture)?;
    let mut report = RunReport::new("homology", &source);
    let h = homology_of(&k, rank_only)?;
    report.complex(&k, &h);
    Ok(report)
}

fn arrangement(op: &ArrangementOp, rank_only: bool) -> Result<RunReport, Failure> {
    let (name, args) = match op {
        ArrangementOp::Faces(a) => ("faces", a),
        ArrangementOp::Complement(a) => ("complement", a),
        ArrangementOp::Salvetti(a) => ("salvetti", a),
        ArrangementOp::Symmetric(a) => ("symmetric", a),
    };
    let (a, source) = input::arrangement(&args.input.file, &args.input.fixture)?;
    let order = args.order;
    let mut report = RunReport::new(&format!("arrangement {name}"), &source);
    report.param("order", order);
    match op {
        ArrangementOp::Faces(_) => {
            let s = a.faces_higher(order)?;
            let expected = if (a.dim() * order) % 2 == 0 { 1 } else { -1 };
            if s.euler_sum() != expected {
                report.diagnostics.push(format!("alternating stratum count {} differs from {expected}", s.euler_sum()));
            }
            let strata: Vec<serde_json::Value> = s
                .signs
                .iter()
                .zip(&s.dims)
                .map(|(v, d)| serde_json::json!({"sign": v.to_string(), "dim": d}))
                .collect();
            report
                .detail("strata", s.len())
                .detail("dim_counts", s.dim_counts())
                .detail("alternating_sum", s.euler_sum())
                .detail("poset_covers", s.poset.covers().len())
                .detail("sign_vectors", strata);
        }
        ArrangementOp::Complement(_) => {
            let c = a.complement_poset(order)?;
            let k = c.poset.order_complex()?;
            let h = homology_of(&k, rank_only)?;
            report.complex(&k, &h);
            let signs: Vec<String> = c.signs.iter().map(|v| v.to_string()).collect();
            report.detail("strata", c.len()).detail("dim_counts", c.dim_counts()).detail("sign_vectors", signs);
        }
        ArrangementOp::Salvetti(_) => {
            let cells = a.salvetti_cellular(order)?;
            let k = a.higher_salvetti(order)?;
            let h = homology_of(&k, rank_only)?;
            report.complex(&k, &h);
            report.detail("cell_counts", cells.cell_counts());
        }
        ArrangementOp::Symmetric(_) => {
            let sub = a.symmetric_subdivision(order)?;
            let k = sub.poset.order_complex()?;
            let h = homology_of(&k, rank_only)?;
            report.complex(&k, &h);
            report
                .detail("strata", sub.len())
                .detail("alternating_sum", sub.euler_sum())
                .detail("target_strata", sub.target.len());
        }
    }
    Ok(report)
}

fn conf(args: &ConfArgs, rank_only: bool) -> Result<RunReport, Failure> {
    let (g, source) = input::graph(&args.input.file, &args.input.fixture)?;
    let mut report = RunReport::new("conf", &source);
    report.param("k", args.k).param("ordered", !args.unordered);
    let c = ConfSpace::new(&g, args.k)?;
    let space = if args.unordered { c.unordered()? } else { c.css.clone() };
    let k = space.sd()?;
    let h = homology_of(&k, rank_only)?;
    report.complex(&k, &h);
    report.detail("cell_counts", space.cell_counts());
    if args.oracle {
        let n = args.subdivide.unwrap_or(args.k + 1);
        report.param("subdivide", n);
        let ordered = if args.unordered { homology_of(&c.css.sd()?, rank_only)? } else { h.clone() };
        let oracle = homology_of(&abrams_complex(&g, args.k, n)?.sd()?, rank_only)?;
        let conditions: Vec<String> = g.subdivide(n)?.abrams_violations(args.k).iter().map(|v| v.to_string()).collect();
        report.detail("oracle_homology", oracle.to_string()).detail("oracle_conditions", conditions);
        report.detail("oracle_agrees", oracle == ordered);
        if oracle != ordered {
            report.diagnostics.push(format!("ordered homology {ordered} differs from the discretized model {oracle}"));
        }
    }
    Ok(report)
}

fn abrams(args: &AbramsArgs, rank_only: bool) -> Result<RunReport, Failure> {
    let (g, source) = input::graph(&args.input.file, &args.input.fixture)?;
    let n = args.subdivide.unwrap_or(args.k + 1);
    let mut report = RunReport::new("abrams", &source);
    report.param("k", args.k).param("subdivide", n);
    let x = abrams_complex(&g, args.k, n)?;
    sd_report(&mut report, &x, rank_only)?;
    let conditions: Vec<String> = g.subdivide(n)?.abrams_violations(args.k).iter().map(|v| v.to_string()).collect();
    report.detail("cell_counts", x.cell_counts()).detail("conditions", conditions);
    Ok(report)
}

fn export(format: &ExportFormat) -> Result<(String, RunReport), Failure> {
    match format {
        ExportFormat::Dot(args) => {
            let (json, source) = input::space(&args.input.file, &args.input.fixture)?;
            let x = json.to_css()?;
            let text = if args.hasse {
                export::dot_hasse(&x.category().underlying_poset()?)
            } else {
                export::dot_category(&x)
            };
            let mut report = RunReport::new("export dot", &source);
            report.param("hasse", args.hasse);
            Ok((text, report))
        }
        ExportFormat::Off(input) => {
            let (x, source) = input::valid_space(&input.file, &input.fixture)?;
            let k = x.sd()?;
            let text = export::off(&k).map_err(|e| Failure::Invalid(vec![e]))?;
            let mut report = RunReport::new("export off", &source);
            report.f_vector = Some(k.f_vector());
            report.euler_characteristic = Some(k.euler_characteristic());
            Ok((text, report))
        }
        ExportFormat::Json(input) => {
            let (json, source) = input::space(&input.file, &input.fixture)?;
            let x = json.to_css()?;
            Ok((export::json(&x), RunReport::new("export json", &source)))
        }
    }
}

fn run(cli: &Cli) -> Result<Outcome, Failure> {
    let rank_only = cli.rank_only;
    let report = match &cli.command {
        Command::Validate(i) => validate(i)?,
        Command::Facecat(i) => facecat(i)?,
        Command::Sd(i) => space_op("sd", i, rank_only)?,
        Command::Dual(i) => space_op("dual", i, rank_only)?,
        Command::Salvetti(i) => space_op("salvetti", i, rank_only)?,
        Command::Homology(i) => homology(i, rank_only)?,
        Command::Arrangement { op } => arrangement(op, rank_only)?,
        Command::Conf(a) => conf(a, rank_only)?,
        Command::Abrams(a) => abrams(a, rank_only)?,
        Command::Export { format } => {
            let (text, report) = export(format)?;
            return Ok(Outcome::Artifact(text, report));
        }
    };
    Ok(Outcome::Report(report))
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(value) = std::env::var("STRATAKIT_THREADS") else {
        return Ok(());
    };
    let n: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Failure::Usage(format!("STRATAKIT_THREADS must be a positive integer, got {value:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Failure::Usage(format!("cannot configure {n} threads: {e}")))
}

fn write_out(path: &Option<PathBuf>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| Failure::Io(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn finish(cli: &Cli, started: Instant) -> Result<ExitCode, Failure> {
    configure_threads()?;
    let outcome = run(cli)?;
    let elapsed = Timing { elapsed_ms: started.elapsed().as_secs_f64() * 1000.0 };
    let mut report = match outcome {
        Outcome::Report(mut report) => {
            report.param("rank_only", cli.rank_only);
            report.seal();
            if cli.timing {
                report.timing = Some(elapsed);
            }
            write_out(&cli.out, &report.to_pretty())?;
            report
        }
        Outcome::Artifact(text, mut report) => {
            match &cli.out {
                Some(path) => {
                    write_out(&cli.out, &text)?;
                    report.detail("written_to", path.display().to_string()).detail("bytes", text.len());
                    report.seal();
                    if cli.timing {
                        report.timing = Some(elapsed);
                    }
                    print!("{}", report.to_pretty());
                }
                None => print!("{text}"),
            }
            report
        }
    };
    if report.diagnostics.is_empty() {
        Ok(ExitCode::SUCCESS)
    } else {
        for d in report.diagnostics.drain(..) {
            eprintln!("stratakit: {d}");
        }
        Ok(ExitCode::from(2))
    }
}

fn main() -> ExitCode {
    let started = Instant::now();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match finish(&cli, started) {
        Ok(code) => code,
        Err(Failure::Invalid(problems)) => {
            for p in problems {
                eprintln!("stratakit: {p}");
            }
            ExitCode::from(2)
        }
        Err(Failure::Io(m) | Failure::Parse(m) | Failure::Usage(m)) => {
            eprintln!("stratakit: {m}");
            ExitCode::from(1)
        }
    }
}
