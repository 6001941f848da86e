//! Command-line front door: mapper/multiscale pipelines, persistence,
//! metrics, generator bases, Reeb graphs, and the theorem verification table.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use nervelab::complex::{Chain, SimplicialComplex, VertexId};
use nervelab::covers::{Codomain, Cover, LebesgueMode, TowerOfCovers, Value};
use nervelab::error::Result;
use nervelab::generators::{
    classify_survival, minimal_generator_basis, BasisMode, Verdict,
};
use nervelab::io;
use nervelab::metrics::{
    build_correspondence, correspondence_distortion, d_delta_metric, df_metric, label_mapper,
    MetricMode, PseudoMetric,
};
use nervelab::persistence::{
    bottleneck_distance, cech_filtration, persistence_diagram, tower_diagram, tower_module,
    DiagramMode,
};
use nervelab::pullback::{mapper, multiscale_mapper, push_cycle, Mapper};
use nervelab::reeb::{reeb_graph, reeb_h1_check, reeb_metric};
use nervelab::z2::Eliminator;

#[derive(Parser)]
#[command(name = "nervelab", version, about = "Nerve, mapper and Reeb pipelines")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct InstanceArgs {
    /// Simplicial complex JSON
    #[arg(long)]
    complex: PathBuf,
    /// Vertex function JSON
    #[arg(long)]
    function: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// Nerve of the pullback cover of a function
    Mapper {
        #[command(flatten)]
        instance: InstanceArgs,
        #[arg(long)]
        cover: PathBuf,
        #[arg(long, default_value_t = 3)]
        dim_cap: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Tower of mappers over a tower of covers
    Multiscale {
        #[command(flatten)]
        instance: InstanceArgs,
        #[arg(long)]
        tower: PathBuf,
        #[arg(long, default_value_t = 3)]
        dim_cap: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Persistence diagrams and distances
    #[command(subcommand)]
    Persistence(PersistenceCmd),
    /// Pseudometrics and correspondence distortion
    #[command(subcommand)]
    Metrics(MetricsCmd),
    /// Minimal generator bases and survival classification
    #[command(subcommand)]
    Generators(GeneratorsCmd),
    /// Reeb graph of a real-valued function
    Reeb {
        #[command(flatten)]
        instance: InstanceArgs,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Run the theorem suite on an instance and print a pass/fail table
    Verify {
        #[command(flatten)]
        instance: InstanceArgs,
        #[arg(long)]
        cover: PathBuf,
        #[arg(long, default_value_t = 3)]
        dim_cap: usize,
        /// Seed recorded in the report (the suite itself is deterministic)
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Subcommand)]
enum PersistenceCmd {
    /// Intrinsic Cech diagram of a finite metric (CSV input)
    Cech {
        #[arg(long)]
        metric: PathBuf,
        /// Homology dimension of the reported diagram
        #[arg(long, default_value_t = 1)]
        dim: usize,
        #[arg(long, default_value_t = 2)]
        dim_cap: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// H1 diagram of a multiscale mapper tower (index births)
    Tower {
        #[command(flatten)]
        instance: InstanceArgs,
        #[arg(long)]
        tower: PathBuf,
        #[arg(long, default_value_t = 3)]
        dim_cap: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Bottleneck distance between two diagram CSVs
    Bottleneck {
        #[arg(long)]
        left: PathBuf,
        #[arg(long)]
        right: PathBuf,
    },
}

#[derive(Subcommand)]
enum MetricsCmd {
    /// The function-induced pseudometric d_f on domain vertices
    Df {
        #[command(flatten)]
        instance: InstanceArgs,
        #[arg(long, default_value = "exact")]
        mode: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// The labelled nerve pseudometric d_delta
    Ddelta {
        #[command(flatten)]
        instance: InstanceArgs,
        #[arg(long)]
        cover: PathBuf,
        #[arg(long, default_value = "exact")]
        mode: String,
        #[arg(long, default_value_t = 3)]
        dim_cap: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Distortion of the canonical correspondence, against the 5 s_max bound
    Distortion {
        #[command(flatten)]
        instance: InstanceArgs,
        #[arg(long)]
        cover: PathBuf,
        #[arg(long, default_value = "exact")]
        mode: String,
        #[arg(long, default_value_t = 3)]
        dim_cap: usize,
    },
}

#[derive(Subcommand)]
enum GeneratorsCmd {
    /// Minimal generator basis of H1 under a metric CSV
    Basis {
        #[arg(long)]
        complex: PathBuf,
        #[arg(long)]
        metric: PathBuf,
        #[arg(long, default_value = "greedy")]
        mode: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// DEAD / SURVIVES-INDEPENDENT / UNDETERMINED per generator
    Classify {
        #[command(flatten)]
        instance: InstanceArgs,
        #[arg(long)]
        cover: PathBuf,
        #[arg(long, default_value = "exact")]
        mode: String,
        #[arg(long, default_value_t = 3)]
        dim_cap: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn metric_mode(s: &str) -> Result<MetricMode> {
    match s {
        "exact" => Ok(MetricMode::Exact),
        "approx" => Ok(MetricMode::Approx),
        other => Err(nervelab::Error::InvalidInput(format!(
            "unknown metric mode {other:?} (use exact or approx)"
        ))),
    }
}

fn basis_mode(s: &str) -> Result<BasisMode> {
    match s {
        "exact" => Ok(BasisMode::Exact),
        "greedy" => Ok(BasisMode::Greedy),
        other => Err(nervelab::Error::InvalidInput(format!(
            "unknown basis mode {other:?} (use exact or greedy)"
        ))),
    }
}

fn load_instance(
    args: &InstanceArgs,
) -> Result<(SimplicialComplex, BTreeMap<VertexId, Value>, Codomain)> {
    let complex = io::parse_complex(&io::read_json(&args.complex)?)?;
    let doc = io::read_json(&args.function)?;
    let values = io::parse_values(&doc)?;
    let codomain = codomain_for(&doc, &values)?;
    Ok((complex, values, codomain))
}

/// The codomain comes from the function file when present; otherwise it is
/// the value range of a real-valued function.
fn codomain_for(doc: &serde_json::Value, values: &BTreeMap<VertexId, Value>) -> Result<Codomain> {
    if let Some(c) = doc.get("codomain") {
        return io::parse_codomain(c);
    }
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for v in values.values() {
        match v {
            Value::Real(x) => {
                lo = lo.min(*x);
                hi = hi.max(*x);
            }
            Value::Point(_) => {
                return Err(nervelab::Error::InvalidInput(
                    "point-valued functions need an explicit codomain".into(),
                ))
            }
        }
    }
    if !lo.is_finite() {
        return Err(nervelab::Error::InvalidInput("function has no values".into()));
    }
    Codomain::real(lo, hi.max(lo + f64::EPSILON))
}

fn load_cover(path: &Path) -> Result<Cover> {
    io::parse_cover(&io::read_json(path)?)
}

fn load_tower(path: &Path) -> Result<TowerOfCovers> {
    io::parse_tower(&io::read_json(path)?)
}

fn emit(out: Option<&PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(path) => io::write_text(path, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn betti_summary(complex: &SimplicialComplex) -> Result<Vec<usize>> {
    (0..=complex.dim_cap().min(2))
        .map(|k| Ok(complex.homology_basis(k)?.betti))
        .collect()
}

fn run_mapper(
    instance: &InstanceArgs,
    cover: &Path,
    dim_cap: usize,
    out: Option<&PathBuf>,
    dot: Option<&PathBuf>,
) -> Result<()> {
    let (complex, values, _) = load_instance(instance)?;
    let cover = load_cover(cover)?;
    let m = mapper(&complex, &values, &cover, dim_cap)?;
    let betti = betti_summary(&m.nerve)?;
    let mut doc = io::complex_to_json(&m.nerve);
    let elements: Vec<serde_json::Value> = m
        .pullback
        .elements()
        .iter()
        .map(|el| {
            json!({
                "name": el.name,
                "alpha": el.alpha,
                "component": el.comp,
                "vertices": el.vertices.iter().collect::<Vec<_>>(),
            })
        })
        .collect();
    doc["elements"] = json!(elements);
    doc["betti"] = json!(betti);
    if let Some(path) = out {
        io::write_json(path, &doc)?;
    } else {
        println!("{}", serde_json::to_string_pretty(&doc)?);
    }
    if let Some(path) = dot {
        io::write_text(path, &io::mapper_to_dot(&m))?;
    }
    eprintln!("mapper: {} elements, betti {:?}", m.pullback.elements().len(), betti);
    Ok(())
}

fn run_multiscale(
    instance: &InstanceArgs,
    tower: &Path,
    dim_cap: usize,
    out: Option<&PathBuf>,
) -> Result<()> {
    let (complex, values, _) = load_instance(instance)?;
    let tower = load_tower(tower)?;
    let mm = multiscale_mapper(&complex, &values, &tower, dim_cap)?;
    let mut nerves = Vec::new();
    let mut betti1 = Vec::new();
    for m in &mm.mappers {
        nerves.push(io::complex_to_json(&m.nerve));
        betti1.push(m.nerve.homology_basis(1)?.betti);
    }
    let doc = json!({ "scales": mm.scales, "nerves": nerves, "betti1": betti1 });
    if let Some(path) = out {
        io::write_json(path, &doc)?;
    } else {
        println!("{}", serde_json::to_string_pretty(&doc)?);
    }
    Ok(())
}

fn run_persistence(cmd: &PersistenceCmd) -> Result<()> {
    match cmd {
        PersistenceCmd::Cech {
            metric,
            dim,
            dim_cap,
            out,
        } => {
            let text = std::fs::read_to_string(metric)?;
            let m = io::parse_metric_csv(&text, MetricMode::Exact)?;
            let filt = cech_filtration(&m, *dim_cap, None)?;
            let d = persistence_diagram(&filt, *dim);
            emit(out.as_ref(), &io::diagram_to_csv(&d))
        }
        PersistenceCmd::Tower {
            instance,
            tower,
            dim_cap,
            out,
        } => {
            let (complex, values, _) = load_instance(instance)?;
            let tower = load_tower(tower)?;
            let mm = multiscale_mapper(&complex, &values, &tower, *dim_cap)?;
            let module = tower_module(&mm, 1)?;
            let d = tower_diagram(&module)?;
            emit(out.as_ref(), &io::diagram_to_csv(&d))?;
            eprintln!("scales: {:?}", module.scales);
            Ok(())
        }
        PersistenceCmd::Bottleneck { left, right } => {
            let a = io::parse_diagram_csv(&std::fs::read_to_string(left)?, DiagramMode::Scale)?;
            let b = io::parse_diagram_csv(&std::fs::read_to_string(right)?, DiagramMode::Scale)?;
            let dist = bottleneck_distance(&a, &b);
            let rendered = if dist.is_infinite() {
                json!("inf")
            } else {
                json!(dist)
            };
            println!("{}", json!({ "bottleneck": rendered }));
            Ok(())
        }
    }
}

fn metric_csv(m: &PseudoMetric) -> String {
    io::metric_to_csv(&m.points().to_vec(), &|i, j| m.distance(i, j))
}

fn run_metrics(cmd: &MetricsCmd) -> Result<()> {
    match cmd {
        MetricsCmd::Df {
            instance,
            mode,
            out,
        } => {
            let (complex, values, codomain) = load_instance(instance)?;
            let m = df_metric(&complex, &values, &codomain, metric_mode(mode)?)?;
            emit(out.as_ref(), &metric_csv(&m))
        }
        MetricsCmd::Ddelta {
            instance,
            cover,
            mode,
            dim_cap,
            out,
        } => {
            let (complex, values, _) = load_instance(instance)?;
            let cover = load_cover(cover)?;
            let m = mapper(&complex, &values, &cover, *dim_cap)?;
            let labeling = label_mapper(&m)?;
            let dd = d_delta_metric(&m, &labeling, metric_mode(mode)?)?;
            emit(out.as_ref(), &metric_csv(&dd))
        }
        MetricsCmd::Distortion {
            instance,
            cover,
            mode,
            dim_cap,
        } => {
            let (complex, values, codomain) = load_instance(instance)?;
            let cover = load_cover(cover)?;
            let mode = metric_mode(mode)?;
            let m = mapper(&complex, &values, &cover, *dim_cap)?;
            let labeling = label_mapper(&m)?;
            let df = df_metric(&complex, &values, &codomain, mode)?;
            let dd = d_delta_metric(&m, &labeling, mode)?;
            let corr = build_correspondence(&m, &labeling);
            let distortion = correspondence_distortion(&corr, &df, &dd)?;
            let bound = 5.0 * cover.s_max();
            println!(
                "{}",
                json!({
                    "distortion": distortion,
                    "bound": bound,
                    "pass": distortion <= bound + 1e-9,
                })
            );
            Ok(())
        }
    }
}

fn run_generators(cmd: &GeneratorsCmd) -> Result<()> {
    match cmd {
        GeneratorsCmd::Basis {
            complex,
            metric,
            mode,
            out,
        } => {
            let complex = io::parse_complex(&io::read_json(complex)?)?;
            let m = io::parse_metric_csv(&std::fs::read_to_string(metric)?, MetricMode::Exact)?;
            let basis = minimal_generator_basis(&complex, &m, basis_mode(mode)?)?;
            let doc = io::basis_to_json(&basis);
            if let Some(path) = out {
                io::write_json(path, &doc)
            } else {
                println!("{}", serde_json::to_string_pretty(&doc)?);
                Ok(())
            }
        }
        GeneratorsCmd::Classify {
            instance,
            cover,
            mode,
            dim_cap,
            out,
        } => {
            let (complex, values, codomain) = load_instance(instance)?;
            let cover = load_cover(cover)?;
            let mode = basis_mode(mode)?;
            let metric_mode = match mode {
                BasisMode::Exact => MetricMode::Exact,
                BasisMode::Greedy => MetricMode::Approx,
            };
            let df = df_metric(&complex, &values, &codomain, metric_mode)?;
            let basis = minimal_generator_basis(&complex, &df, mode)?;
            let m = mapper(&complex, &values, &cover, *dim_cap)?;
            let lambda = cover.lebesgue_number(match mode {
                BasisMode::Exact => LebesgueMode::Exact,
                BasisMode::Greedy => LebesgueMode::PairsUpperBound,
            })?;
            let report = classify_survival(&basis, &m, lambda)?;
            let entries: Vec<serde_json::Value> = report
                .entries
                .iter()
                .map(|e| {
                    let verdict = match e.verdict {
                        Verdict::Dead => "DEAD",
                        Verdict::SurvivesIndependent => "SURVIVES-INDEPENDENT",
                        Verdict::Undetermined => "UNDETERMINED",
                    };
                    json!({
                        "size": e.size,
                        "verdict": verdict,
                        "image_null": e.image_null,
                    })
                })
                .collect();
            let doc = json!({
                "lebesgue": report.lebesgue,
                "s_max": report.s_max,
                "survivors_independent": report.survivors_independent,
                "generators": entries,
            });
            if let Some(path) = out {
                io::write_json(path, &doc)
            } else {
                println!("{}", serde_json::to_string_pretty(&doc)?);
                Ok(())
            }
        }
    }
}

fn run_reeb(instance: &InstanceArgs, out: Option<&PathBuf>, dot: Option<&PathBuf>) -> Result<()> {
    let (complex, values, _) = load_instance(instance)?;
    let reeb = reeb_graph(&complex, &values)?;
    let nodes: Vec<serde_json::Value> = reeb
        .nodes
        .iter()
        .map(|n| json!({ "value": n.value, "vertices": n.vertices.iter().collect::<Vec<_>>() }))
        .collect();
    let doc = json!({
        "nodes": nodes,
        "edges": reeb.edges,
        "betti1": reeb.betti1(),
    });
    if let Some(path) = out {
        io::write_json(path, &doc)?;
    } else {
        println!("{}", serde_json::to_string_pretty(&doc)?);
    }
    if let Some(path) = dot {
        io::write_text(path, &io::reeb_to_dot(&reeb))?;
    }
    Ok(())
}

struct VerifyRow {
    name: &'static str,
    measured: String,
    bound: String,
    pass: bool,
}

fn h1_pushforward_rank(complex: &SimplicialComplex, m: &Mapper) -> Result<(usize, usize)> {
    let nerve = &m.nerve;
    let mut elim = Eliminator::new(nerve.simplices(1).len());
    if nerve.dim_cap() >= 2 {
        let bdry = nerve.boundary_matrix(2)?;
        for j in 0..bdry.ncols() {
            elim.insert(bdry.column(j));
        }
    }
    let mut rank = 0;
    for z in &complex.homology_basis(1)?.cycles {
        let image: Chain = push_cycle(&m.pullback, z)?;
        if elim.insert(&image.to_vector(nerve)?) {
            rank += 1;
        }
    }
    Ok((rank, nerve.homology_basis(1)?.betti))
}

fn run_verify(
    instance: &InstanceArgs,
    cover_path: &Path,
    dim_cap: usize,
    seed: u64,
) -> Result<bool> {
    let (complex, values, codomain) = load_instance(instance)?;
    let cover = load_cover(cover_path)?;
    let m = mapper(&complex, &values, &cover, dim_cap)?;
    let mut rows: Vec<VerifyRow> = Vec::new();

    // H1 surjectivity of the pushforward
    let (rank, betti1) = h1_pushforward_rank(&complex, &m)?;
    rows.push(VerifyRow {
        name: "h1-surjectivity",
        measured: format!("rank {rank}"),
        bound: format!("betti1 {betti1}"),
        pass: rank == betti1,
    });

    // correspondence distortion vs 5 s_max
    let df = df_metric(&complex, &values, &codomain, MetricMode::Exact)?;
    let labeling = label_mapper(&m)?;
    let dd = d_delta_metric(&m, &labeling, MetricMode::Exact)?;
    let corr = build_correspondence(&m, &labeling);
    let distortion = correspondence_distortion(&corr, &df, &dd)?;
    let delta = cover.s_max();
    rows.push(VerifyRow {
        name: "distortion-5smax",
        measured: format!("{distortion}"),
        bound: format!("{}", 5.0 * delta),
        pass: distortion <= 5.0 * delta + 1e-9,
    });

    // bottleneck between the Cech diagrams of (P, d_delta) and (X, d_f)
    let mut ic_pass = true;
    let mut ic_measured = String::new();
    for k in [0usize, 1] {
        let da = persistence_diagram(&cech_filtration(&dd, 2, None)?, k);
        let db = persistence_diagram(&cech_filtration(&df, 2, None)?, k);
        let dist = bottleneck_distance(&da, &db);
        ic_pass &= dist <= 10.0 * delta + 1e-9;
        if !ic_measured.is_empty() {
            ic_measured.push(' ');
        }
        ic_measured.push_str(&format!("H{k}:{dist}"));
    }
    rows.push(VerifyRow {
        name: "cech-10delta",
        measured: ic_measured,
        bound: format!("{}", 10.0 * delta),
        pass: ic_pass,
    });

    // survival windows
    let basis = minimal_generator_basis(&complex, &df, BasisMode::Exact)
        .or_else(|_| minimal_generator_basis(&complex, &df, BasisMode::Greedy))?;
    let lambda = cover.lebesgue_number(LebesgueMode::Exact)?;
    let report = classify_survival(&basis, &m, lambda)?;
    let window_ok = report
        .entries
        .iter()
        .all(|e| e.verdict != Verdict::Dead || e.image_null)
        && report.survivors_independent;
    rows.push(VerifyRow {
        name: "size-windows",
        measured: format!(
            "sizes {:?}",
            report.entries.iter().map(|e| e.size).collect::<Vec<_>>()
        ),
        bound: format!("lambda {lambda}, 4smax {}", 4.0 * report.s_max),
        pass: window_ok,
    });

    // Reeb basis count (real-valued functions only)
    if values.values().all(|v| matches!(v, Value::Real(_))) {
        let reeb = reeb_graph(&complex, &values)?;
        let check = reeb_h1_check(&reeb, &basis)?;
        let _ = reeb_metric(&reeb, &df)?;
        rows.push(VerifyRow {
            name: "reeb-basis",
            measured: format!("beta1 {}", check.beta1_reeb),
            bound: format!("positive sizes {}", check.positive_sizes),
            pass: check.ok(),
        });
    }

    println!("seed {seed}");
    println!("{:<20} {:<28} {:<28} result", "check", "measured", "bound");
    let mut all = true;
    for row in &rows {
        all &= row.pass;
        println!(
            "{:<20} {:<28} {:<28} {}",
            row.name,
            row.measured,
            row.bound,
            if row.pass { "PASS" } else { "FAIL" }
        );
    }
    Ok(all)
}

fn dispatch(cli: &Cli) -> Result<bool> {
    match &cli.command {
        Command::Mapper {
            instance,
            cover,
            dim_cap,
            out,
            dot,
        } => run_mapper(instance, cover, *dim_cap, out.as_ref(), dot.as_ref()).map(|_| true),
        Command::Multiscale {
            instance,
            tower,
            dim_cap,
            out,
        } => run_multiscale(instance, tower, *dim_cap, out.as_ref()).map(|_| true),
        Command::Persistence(cmd) => run_persistence(cmd).map(|_| true),
        Command::Metrics(cmd) => run_metrics(cmd).map(|_| true),
        Command::Generators(cmd) => run_generators(cmd).map(|_| true),
        Command::Reeb { instance, out, dot } => {
            run_reeb(instance, out.as_ref(), dot.as_ref()).map(|_| true)
        }
        Command::Verify {
            instance,
            cover,
            dim_cap,
            seed,
        } => run_verify(instance, cover, *dim_cap, *seed),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            println!("{}", json!({ "error": e.to_string() }));
            ExitCode::from(2)
        }
    }
}
