mod manifest;
mod svg;

use std::cell::RefCell;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::rc::Rc;
use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use ilab_core::analysis::{
    bipartite_edges, extract_structure, flatness_audit, joint_bound, match_structure, monte_carlo, Table,
};
use ilab_core::constructions::{
    gen_algebraic, gen_desargues, gen_dual_cycles, gen_reye, gen_tricolor, gen_two_slit, quadric_rulings,
    sample_probabilistic, search_dual_cycles, AlgebraicParams, ProbParams, Slits,
};
use ilab_core::exactgeom::{format_rat, parse_rat, RatScalar};
use ilab_core::incidence::{ConsistencyVerdict, IncidenceTable};
use ilab_core::io::Config;
use ilab_core::transforms::{dualize, extract_planarity, lift_to_concurrent, project_generic, undualize};
use ilab_core::{ColoredLineConfig, LineRef};

use manifest::{Run, Sink};

#[derive(Parser)]
#[command(
    name = "ilab",
    version,
    about = "Colored line configurations: generate, transform, verify"
)]
struct Cli {
    /// Worker threads; results do not depend on this.
    #[arg(long, global = true, env = "ILAB_THREADS")]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a configuration.
    Gen {
        #[command(subcommand)]
        which: GenCmd,
        /// Output file; a manifest is written next to it.
        #[arg(long, short, global = true)]
        out: Option<PathBuf>,
    },
    /// Run verifiers and print a JSON verdict.
    Verify(VerifyArgs),
    /// Lift, project or dualize a configuration.
    Transform(TransformArgs),
    /// Reports on configurations and experiments.
    Analyze(AnalyzeArgs),
    /// Render a configuration as SVG.
    Export(ExportArgs),
    /// Re-run the command recorded in a manifest and compare output hashes.
    Replay { manifest: PathBuf },
}

#[derive(Subcommand)]
enum GenCmd {
    Algebraic {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        p: u64,
    },
    Probabilistic {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        seed: u64,
        /// Selection probability as `num/den`; default `2 n^(-2/(2k-1))`.
        #[arg(long)]
        probability: Option<String>,
        /// Emit the stage-1 selection instead of the configuration after deletion.
        #[arg(long)]
        before_deletion: bool,
    },
    Tricolor {
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        steps: Vec<i64>,
    },
    Reye,
    Desargues,
    DualCycles {
        #[arg(long)]
        r: usize,
        /// Three slopes; default 1,2,3.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        slopes: Vec<String>,
        /// One start per cycle; default 1, 5, 25, ...
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        starts: Vec<String>,
        /// Search small rationals up to this height for parameters whose
        /// report is valid, instead of using slopes and starts.
        #[arg(long, conflicts_with_all = ["slopes", "starts"])]
        search: Option<i64>,
    },
    TwoSlit {
        #[arg(long)]
        family: u8,
        #[arg(long)]
        count: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long, value_enum, default_value = "generic")]
        slits: SlitKind,
        /// Append this many rulings of the opposite quadric family.
        #[arg(long, default_value_t = 0)]
        rulings: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SlitKind {
    Generic,
    Quadric,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum PlanarExpect {
    Planar,
    Spatial,
}

#[derive(Args)]
struct VerifyArgs {
    config: PathBuf,
    #[arg(long)]
    k_consistency: Option<usize>,
    /// Passes when no point carries more than this many colors.
    #[arg(long)]
    max_colorful: Option<usize>,
    /// Passes when no incidence of at least this many colors is flat.
    #[arg(long)]
    flatness: Option<usize>,
    /// Passes when removing any single line breaks consistency, at the
    /// `--k-consistency` order or one less than the number of colors.
    #[arg(long)]
    minimality: bool,
    /// Expected planarity; the bare flag expects a configuration spanning
    /// more than a plane.
    #[arg(long, value_enum, num_args = 0..=1, default_missing_value = "spatial")]
    planarity: Option<PlanarExpect>,
    #[arg(long, short)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct TransformArgs {
    input: PathBuf,
    /// Send grid lines to concurrent classes.
    #[arg(long)]
    lift: bool,
    /// Certified generic projection to this dimension.
    #[arg(long)]
    project: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Dualize a planar line configuration to a point set.
    #[arg(long)]
    dualize: bool,
    /// Turn a point set back into lines.
    #[arg(long)]
    undualize: bool,
    #[arg(long, short)]
    out: PathBuf,
}

#[derive(Args)]
#[command(args_conflicts_with_subcommands = true)]
struct AnalyzeArgs {
    #[command(subcommand)]
    experiment: Option<Experiment>,
    config: Option<PathBuf>,
    /// Print the incidence structure.
    #[arg(long)]
    structure: bool,
    /// Find a relabeling onto table I or II.
    #[arg(long)]
    match_structure: Option<Table>,
    /// Flatness audit of incidences with at least this many colors.
    #[arg(long)]
    flatness: Option<usize>,
    /// Evaluate the line-count bound for this consistency order.
    #[arg(long)]
    joint_bound: Option<usize>,
    #[arg(long, short)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Experiment {
    /// Seeded trials of the random construction.
    MonteCarlo {
        #[arg(long)]
        k: usize,
        #[arg(long, value_delimiter = ',', required = true)]
        n: Vec<u32>,
        #[arg(long)]
        trials: usize,
        #[arg(long)]
        seed: u64,
        /// Per-trial CSV; the summary goes to `<out>.summary.csv`.
        #[arg(long, short)]
        out: PathBuf,
    },
    /// Intersection graph of two sampled line families.
    TwoSlit {
        #[arg(long)]
        count: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long, value_enum, default_value = "generic")]
        slits: SlitKind,
        #[arg(long, default_value_t = 0)]
        rulings: usize,
    },
}

#[derive(Args)]
struct ExportArgs {
    input: PathBuf,
    #[arg(long)]
    svg: PathBuf,
    /// Seed of the projection to the plane, when one is needed.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

/// Failed checks exit with 1; everything else that goes wrong exits with 2.
enum Outcome {
    Pass,
    Fail,
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    if let Some(t) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let run = Run::new(argv[1..].to_vec(), Sink::Write);
    match dispatch(cli.command, run) {
        Ok(Outcome::Pass) => ExitCode::SUCCESS,
        Ok(Outcome::Fail) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn dispatch(cmd: Command, run: Run) -> Result<Outcome> {
    match cmd {
        Command::Gen { which, out } => cmd_gen(which, out, run),
        Command::Verify(a) => cmd_verify(a, run),
        Command::Transform(a) => cmd_transform(a, run),
        Command::Analyze(a) => cmd_analyze(a, run),
        Command::Export(a) => cmd_export(a, run),
        Command::Replay { manifest } => cmd_replay(&manifest),
    }
}

fn timed<T>(run: &mut Run, label: &str, f: impl FnOnce() -> T) -> T {
    let start = Instant::now();
    let v = f();
    run.timings_ms.insert(label.to_string(), start.elapsed().as_millis());
    v
}

/// Writes to `out` with a manifest, or prints to stdout.
fn deliver(mut run: Run, out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => {
            run.emit(path, text.as_bytes())?;
            run.finish(path)
        }
        None => stdout(text),
    }
}

/// Prints to stdout; a closed pipe is not an error.
fn stdout(text: &str) -> Result<()> {
    use std::io::Write;
    match std::io::stdout().lock().write_all(text.as_bytes()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(e.into()),
        _ => Ok(()),
    }
}

fn rationals(v: &[String]) -> Result<Vec<RatScalar>> {
    v.iter().map(|s| parse_rat(s).map_err(Into::into)).collect()
}

fn slits(kind: SlitKind) -> Slits {
    match kind {
        SlitKind::Generic => Slits::generic(),
        SlitKind::Quadric => Slits::quadric(),
    }
}

fn cmd_gen(which: GenCmd, out: Option<PathBuf>, mut run: Run) -> Result<Outcome> {
    let cfg: Config = match which {
        GenCmd::Algebraic { k, p } => {
            let params = AlgebraicParams::with_defaults(k, p)?;
            timed(&mut run, "generate", || gen_algebraic(&params))?.into()
        }
        GenCmd::Probabilistic {
            k,
            n,
            seed,
            probability,
            before_deletion,
        } => {
            run.seeds.push(seed);
            let params = match probability {
                Some(p) => ProbParams::with_probability(k, n, seed, &parse_rat(&p)?)?,
                None => ProbParams::new(k, n, seed)?,
            };
            let sample = timed(&mut run, "generate", || sample_probabilistic(&params));
            eprintln!("{}", serde_json::to_string(&sample.report)?);
            if before_deletion {
                sample.before_deletion().into()
            } else {
                sample.after_deletion().into()
            }
        }
        GenCmd::Tricolor { steps } => gen_tricolor(&steps)?.into(),
        GenCmd::Reye => timed(&mut run, "generate", gen_reye)?.into(),
        GenCmd::Desargues => timed(&mut run, "generate", gen_desargues)?.into(),
        GenCmd::DualCycles {
            r,
            slopes,
            starts,
            search,
        } => {
            let result = match search {
                Some(bound) => {
                    let (hit, tried) = timed(&mut run, "search", || search_dual_cycles(r, bound))?;
                    hit.ok_or_else(|| anyhow!("no valid parameters among {tried} candidates"))?
                }
                None => {
                    let slopes = if slopes.is_empty() {
                        vec!["1".into(), "2".into(), "3".into()]
                    } else {
                        slopes
                    };
                    let slopes: [RatScalar; 3] = rationals(&slopes)?
                        .try_into()
                        .map_err(|_| anyhow!("need exactly three slopes"))?;
                    let starts = if starts.is_empty() {
                        (0..r).map(|i| 5u64.pow(i as u32).to_string()).collect()
                    } else {
                        starts
                    };
                    let starts = rationals(&starts)?;
                    if starts.len() != r {
                        bail!("need {r} starts, got {}", starts.len());
                    }
                    gen_dual_cycles(&slopes, &starts)?
                }
            };
            eprintln!("{}", serde_json::to_string(&result.report)?);
            result.config.into()
        }
        GenCmd::TwoSlit {
            family,
            count,
            seed,
            slits: kind,
            rulings,
        } => {
            run.seeds.push(seed);
            let mut lines = gen_two_slit(family, &slits(kind), count, seed)?;
            if rulings > 0 {
                if !matches!(kind, SlitKind::Quadric) {
                    bail!("--rulings needs --slits quadric");
                }
                lines.extend(quadric_rulings(family == 2, rulings));
            }
            ColoredLineConfig::new(3, vec![lines])?.into()
        }
    };
    deliver(run, out.as_deref(), &cfg.to_json())?;
    Ok(Outcome::Pass)
}

fn load(run: &mut Run, path: &Path) -> Result<Config> {
    let text = run.read_input(path)?;
    Config::from_json(&text).with_context(|| format!("parsing {}", path.display()))
}

fn line_json(r: LineRef) -> Value {
    json!({ "color": r.color + 1, "index": r.index + 1 })
}

fn consistency_json(v: &ConsistencyVerdict) -> Value {
    let failures: Vec<Value> = v
        .failures
        .iter()
        .map(|f| {
            json!({
                "line": line_json(f.line),
                "colors": f.colors.iter().map(|c| c + 1).collect::<Vec<_>>(),
            })
        })
        .collect();
    json!({ "check": "k-consistency", "k": v.k, "pass": v.consistent, "failures": failures })
}

fn table_of(cfg: &Config) -> Result<IncidenceTable> {
    Ok(match cfg {
        Config::Grid(g) => g.incidence_table(),
        Config::Lines(l) => l.incidence_table(),
        Config::Points(p) => p.incidence_table(),
    })
}

fn cmd_verify(a: VerifyArgs, mut run: Run) -> Result<Outcome> {
    let cfg = load(&mut run, &a.config)?;
    let table = timed(&mut run, "incidences", || table_of(&cfg))?;
    let mut checks = Vec::new();
    if let Some(k) = a.k_consistency {
        checks.push(consistency_json(&table.k_consistency(k)?));
    }
    if let Some(m) = a.max_colorful {
        let order = table.max_colorful_order();
        let witness = order
            .witness
            .map(|i| table.points()[i].iter().map(|&r| line_json(r)).collect::<Vec<_>>());
        checks.push(json!({
            "check": "max-colorful", "bound": m, "order": order.order,
            "pass": order.order <= m, "witness": witness,
        }));
    }
    if a.minimality {
        let k = a.k_consistency.unwrap_or(table.num_colors().saturating_sub(1).max(1));
        let v = timed(&mut run, "minimality", || table.minimality(k))?;
        checks.push(json!({
            "check": "minimality", "k": k, "consistent": v.consistent, "pass": v.minimal(),
            "redundant": v.redundant.iter().map(|&r| line_json(r)).collect::<Vec<_>>(),
        }));
    }
    if let Some(t) = a.flatness {
        let lines = cfg.to_lines()?;
        let audit = flatness_audit(&lines, t)?;
        let flat: Vec<Value> = audit
            .iter()
            .filter(|e| e.flat)
            .map(|e| json!({ "point": e.point.to_string(), "lines": e.lines.iter().map(|&r| line_json(r)).collect::<Vec<_>>(), "rank": e.rank }))
            .collect();
        checks.push(json!({
            "check": "flatness", "t": t, "d": lines.d(), "audited": audit.len(),
            "pass": flat.is_empty(), "flat": flat,
        }));
    }
    if let Some(expect) = a.planarity {
        let v = extract_planarity(&cfg.to_lines()?);
        let pass = v.planar == (expect == PlanarExpect::Planar);
        checks.push(json!({
            "check": "planarity", "expect": if expect == PlanarExpect::Planar { "planar" } else { "spatial" },
            "planar": v.planar, "span_dim": v.span_dim, "pass": pass,
        }));
    }
    let pass = checks.iter().all(|c| c["pass"] == true);
    let report = json!({
        "config": a.config.display().to_string(),
        "model": cfg.model(),
        "class_sizes": table.class_sizes(),
        "checks": checks,
        "pass": pass,
    });
    deliver(run, a.out.as_deref(), &(serde_json::to_string_pretty(&report)? + "\n"))?;
    Ok(if pass { Outcome::Pass } else { Outcome::Fail })
}

fn cmd_transform(a: TransformArgs, mut run: Run) -> Result<Outcome> {
    if a.dualize && a.undualize {
        bail!("--dualize and --undualize exclude each other");
    }
    let mut cfg = load(&mut run, &a.input)?;
    if a.lift {
        cfg = match cfg {
            Config::Grid(g) => lift_to_concurrent(&g).into(),
            _ => bail!("--lift needs a grid configuration"),
        };
    }
    if let Some(d) = a.project {
        run.seeds.push(a.seed);
        let lines = cfg.to_lines()?;
        let p = timed(&mut run, "project", || project_generic(&lines, d, a.seed))?;
        eprintln!(
            "projection attempt {}, {} new crossings",
            p.attempt,
            p.new_crossings.len()
        );
        cfg = p.config.into();
    }
    if a.dualize {
        cfg = dualize(&cfg.to_lines()?)?.into();
    }
    if a.undualize {
        cfg = match cfg {
            Config::Points(p) => undualize(&p)?.into(),
            _ => bail!("--undualize needs a point configuration"),
        };
    }
    deliver(run, Some(&a.out), &cfg.to_json())?;
    Ok(Outcome::Pass)
}

fn cmd_analyze(a: AnalyzeArgs, mut run: Run) -> Result<Outcome> {
    match a.experiment {
        Some(Experiment::MonteCarlo {
            k,
            n,
            trials,
            seed,
            out,
        }) => {
            run.seeds.push(seed);
            let grid: Vec<(usize, u32)> = n.iter().map(|&n| (k, n)).collect();
            let report = timed(&mut run, "trials", || monte_carlo(&grid, trials, seed))?;
            let mut summary = out.clone().into_os_string();
            summary.push(".summary.csv");
            run.emit(&out, report.to_csv().as_bytes())?;
            run.emit(Path::new(&summary), report.summary_csv().as_bytes())?;
            stdout(&report.summary_csv())?;
            run.finish(&out)?;
            return Ok(Outcome::Pass);
        }
        Some(Experiment::TwoSlit {
            count,
            seed,
            slits: kind,
            rulings,
        }) => {
            run.seeds.push(seed);
            let s = slits(kind);
            let mut first = gen_two_slit(1, &s, count, seed)?;
            let mut second = gen_two_slit(2, &s, count, seed)?;
            if rulings > 0 {
                if !matches!(kind, SlitKind::Quadric) {
                    bail!("--rulings needs --slits quadric");
                }
                first.extend(quadric_rulings(false, rulings));
                second.extend(quadric_rulings(true, rulings));
            }
            let r = timed(&mut run, "graph", || bipartite_edges(&first, &second));
            let report = json!({
                "first": first.len(), "second": second.len(), "edges": r.edges,
                "k33": r.k33.map(|(l, rr)| json!({ "first": l, "second": rr })),
            });
            stdout(&(serde_json::to_string_pretty(&report)? + "\n"))?;
            return Ok(Outcome::Pass);
        }
        None => {}
    }
    let path = a
        .config
        .ok_or_else(|| anyhow!("analyze needs a configuration file or an experiment"))?;
    let cfg = load(&mut run, &path)?;
    let mut report = serde_json::Map::new();
    let mut pass = true;
    let structure = || -> Result<_> {
        Ok(match &cfg {
            Config::Grid(g) => extract_structure(g),
            Config::Lines(l) => extract_structure(l),
            Config::Points(p) => extract_structure(p),
        })
    };
    if a.structure {
        report.insert("structure".into(), json!(structure()?.to_string()));
    }
    if let Some(t) = a.match_structure {
        let s = structure()?;
        let m = match_structure(&s, t)?;
        pass &= m.is_some();
        let value = m.map(|map| {
            let colors: Vec<String> = (0..4).map(|c| format!("{}->{}", c + 1, map.colors[c] + 1)).collect();
            json!({
                "colors": colors,
                "lines": map.lines.iter().map(|p| p.iter().map(|i| i + 1).collect::<Vec<_>>()).collect::<Vec<_>>(),
                "relabeled": s.relabel(&map).to_string(),
            })
        });
        report.insert("isomorphism".into(), value.unwrap_or(Value::Null));
    }
    if let Some(t) = a.flatness {
        let lines = cfg.to_lines()?;
        let audit = flatness_audit(&lines, t)?;
        let flat = audit.iter().filter(|e| e.flat).count();
        if lines.d() != t {
            eprintln!("note: ambient dimension {} differs from t = {t}", lines.d());
        }
        report.insert(
            "flatness".into(),
            json!({ "t": t, "d": lines.d(), "audited": audit.len(), "flat": flat }),
        );
    }
    if let Some(k) = a.joint_bound {
        let table = table_of(&cfg)?;
        let b = joint_bound(table.num_colors(), k, table.num_lines());
        report.insert(
            "joint_bound".into(),
            json!({ "m": b.m, "k": b.k, "lines": b.total_lines, "bound": format_rat(&b.bound), "satisfied": b.satisfied }),
        );
    }
    deliver(
        run,
        a.out.as_deref(),
        &(serde_json::to_string_pretty(&Value::Object(report))? + "\n"),
    )?;
    Ok(if pass { Outcome::Pass } else { Outcome::Fail })
}

fn cmd_export(a: ExportArgs, mut run: Run) -> Result<Outcome> {
    let cfg = load(&mut run, &a.input)?;
    let text = match cfg {
        Config::Points(p) => svg::render_points(&p),
        other => {
            let lines = other.to_lines()?;
            let planar = if lines.d() == 2 {
                lines
            } else {
                run.seeds.push(a.seed);
                project_generic(&lines, 2, a.seed)?.config
            };
            svg::render_lines(&planar)
        }
    };
    run.emit(&a.svg, text.as_bytes())?;
    run.finish(&a.svg)?;
    Ok(Outcome::Pass)
}

fn cmd_replay(path: &Path) -> Result<Outcome> {
    let m = manifest::load(path)?;
    for input in &m.inputs {
        let bytes = std::fs::read(&input.path).with_context(|| format!("reading input {}", input.path))?;
        if manifest::sha256_hex(&bytes) != input.sha256 {
            bail!("input {} changed since the recorded run", input.path);
        }
    }
    let mut argv = vec!["ilab".to_string()];
    argv.extend(m.args.iter().cloned());
    let cli = Cli::try_parse_from(&argv).map_err(|e| anyhow!("recorded arguments no longer parse: {e}"))?;
    if matches!(cli.command, Command::Replay { .. }) {
        bail!("refusing to replay a replay");
    }
    let mismatches = Rc::new(RefCell::new(Vec::new()));
    let run = Run::new(
        m.args.clone(),
        Sink::Replay {
            expected: m.outputs.clone(),
            mismatches: mismatches.clone(),
        },
    );
    dispatch(cli.command, run)?;
    let mismatches = mismatches.take();
    let report =
        json!({ "manifest": path.display().to_string(), "outputs": m.outputs.len(), "mismatches": mismatches });
    stdout(&(serde_json::to_string_pretty(&report)? + "\n"))?;
    Ok(if mismatches.is_empty() {
        Outcome::Pass
    } else {
        Outcome::Fail
    })
}
