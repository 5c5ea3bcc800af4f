use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use aperiodica::cyclo::{consts, parse_rational};
use aperiodica::delone::{
    cluster_classes, delone_radii, flc_profile, li_indistinguishable, local_topology_distance, repetitivity_radius,
    Repetitivity,
};
use aperiodica::geometry::samples;
use aperiodica::inflation::{fixed_point_patch, Seed};
use aperiodica::io::{render_svg, PatchDocument, RenderOptions};
use aperiodica::symmetry::{
    bernoulli_sample, detect_periods, exact_point_group, fair_coin_period_probability, lattice_intersect,
    li_symmetry_test, metric_aperiodicity_estimate, rotation_matrix, scd_layer_analysis, statistical_symmetry,
    LatticeZ2Q, DEFAULT_STAT_TOLERANCE,
};
use aperiodica::{CycloNumber, Error, Isometry, PointSet, TilingSystem};

const EXIT_USAGE: u8 = 2;
const EXIT_FALSIFIED: u8 = 3;

#[derive(Parser)]
#[command(name = "aperiodica", version, about = "Inflation tilings and Delone-set diagnostics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a fixed-point patch and write it as a JSON document.
    Generate {
        #[arg(long)]
        system: TilingSystem,
        /// Seed name, with or without the system prefix (`octagon`, `ab-octagon`, ...).
        #[arg(long)]
        seed: String,
        /// Inflation level `k`.
        #[arg(long, default_value_t = 0)]
        steps: usize,
        /// Also store the vertex (pinwheel: control point) set.
        #[arg(long)]
        with_points: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write a reference point set (`z`, `z-defect`, `z2`, `z-line`, `fibonacci`).
    Sample {
        name: SampleName,
        #[arg(long, default_value_t = 20.0)]
        window: f64,
        /// Offset `p/q` for `z`.
        #[arg(long, default_value = "0")]
        offset: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run one analysis and print a JSON report.
    Analyze {
        analysis: Analysis,
        #[command(flatten)]
        opts: AnalyzeOpts,
    },
    /// Render a document as SVG.
    Render {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        show_points: bool,
        #[arg(long)]
        no_arrows: bool,
        #[arg(long, default_value_t = 40.0)]
        scale: f64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SampleName {
    Z,
    ZDefect,
    Z2,
    ZLine,
    Fibonacci,
}

#[derive(Clone, Copy, ValueEnum)]
enum Analysis {
    Radii,
    Flc,
    Clusters,
    Repetitivity,
    Li,
    Distance,
    Pointgroup,
    Periods,
    Lisym,
    Statsym,
    Coincidence,
    Bernoulli,
}

#[derive(Args)]
struct AnalyzeOpts {
    #[arg(long)]
    input: Option<PathBuf>,
    /// Second document for `li` and `distance`.
    #[arg(long)]
    other: Option<PathBuf>,
    /// Cluster radius (or margin / FLC radius).
    #[arg(long, default_value_t = 2.0)]
    rho: f64,
    /// Restrict the input to this window radius.
    #[arg(long)]
    window: Option<f64>,
    #[arg(long, default_value_t = DEFAULT_STAT_TOLERANCE)]
    tolerance: f64,
    /// Rotation order `m` for `lisym`/`statsym` (rotation by 2π/m).
    #[arg(long, default_value_t = 10)]
    order: u32,
    /// Compose the rotation with complex conjugation.
    #[arg(long)]
    reflect: bool,
    /// Expected group name (`pointgroup`) or classification (`periods`).
    #[arg(long)]
    expect: Option<String>,
    /// `cos φ` and `sin φ` as rationals for `coincidence`.
    #[arg(long, default_value = "4/5")]
    cos: String,
    #[arg(long, default_value = "3/5")]
    sin: String,
    #[arg(long, default_value_t = 3)]
    layers: usize,
    #[arg(long, default_value_t = 0.5)]
    p: f64,
    #[arg(long, default_value_t = 1)]
    dim: u8,
    #[arg(long, default_value_t = 64)]
    extent: usize,
    #[arg(long, default_value_t = 2000)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    rng_seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

enum Failure {
    Usage(String),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type Outcome = std::result::Result<bool, Failure>;

fn read_doc(path: &Path) -> std::result::Result<PatchDocument, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
    PatchDocument::from_json(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn write_out(out: &Option<PathBuf>, text: &str) -> std::result::Result<(), Failure> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| Failure::Io(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn parse_seed(system: TilingSystem, name: &str) -> std::result::Result<Seed, Failure> {
    let seed: Seed = format!("{}-{name}", system.name())
        .parse()
        .or_else(|_| name.parse())
        .map_err(|e: Error| Failure::Usage(e.to_string()))?;
    if seed.system() != system {
        return Err(Failure::Usage(format!("seed `{seed}` does not belong to system `{system}`")));
    }
    Ok(seed)
}

/// `ζ_m` as an element of a field compatible with `field`.
fn root_of_unity(m: u32, field: u8) -> std::result::Result<CycloNumber, Failure> {
    Ok(match (m, field) {
        (1, f) => CycloNumber::one(f),
        (2, f) => -CycloNumber::one(f),
        (4, 4) => CycloNumber::zeta(4),
        (4, 8) => CycloNumber::zeta_pow(8, 2),
        (8, 4 | 8) => CycloNumber::zeta(8),
        (5, 5) => CycloNumber::zeta(5),
        (10, 5) => consts::zeta10(),
        _ => return Err(Failure::Usage(format!("no {m}-fold rotation over Q(zeta_{field})"))),
    })
}

fn input_set(o: &AnalyzeOpts, path: &Option<PathBuf>) -> std::result::Result<PointSet, Failure> {
    let path = path.as_ref().ok_or_else(|| Failure::Usage("--input is required".into()))?;
    let s = read_doc(path)?.point_set()?;
    Ok(match o.window {
        Some(w) => s.restrict(w)?,
        None => s,
    })
}

fn analyze(a: Analysis, o: &AnalyzeOpts) -> Outcome {
    let (report, ok): (Value, bool) = match a {
        Analysis::Radii => {
            let s = input_set(o, &o.input)?;
            let r = delone_radii(&s, o.rho)?;
            (json!({"analysis": "radii", "window": s.window(), "margin": o.rho, "report": r}), true)
        }
        Analysis::Flc => {
            let s = input_set(o, &o.input)?;
            let w = s.window();
            let windows = [w / 2.0, 3.0 * w / 4.0, w];
            let r = flc_profile(&s, o.rho, &windows)?;
            let ok = r.consistent;
            (json!({"analysis": "flc", "window": w, "rho": o.rho, "report": r}), ok)
        }
        Analysis::Clusters => {
            let s = input_set(o, &o.input)?;
            let c = cluster_classes(&s, o.rho)?;
            let classes: Vec<Value> = c
                .iter()
                .map(|k| json!({"representative": k.representative, "multiplicity": k.multiplicity}))
                .collect();
            (json!({"analysis": "clusters", "window": s.window(), "rho": o.rho, "count": c.len(), "classes": classes}), true)
        }
        Analysis::Repetitivity => {
            let s = input_set(o, &o.input)?;
            let r = repetitivity_radius(&s, o.rho)?;
            let ok = matches!(r, Repetitivity::Witnessed { .. });
            (json!({"analysis": "repetitivity", "window": s.window(), "rho": o.rho, "report": r}), ok)
        }
        Analysis::Li => {
            let s = input_set(o, &o.input)?;
            let t = input_set(o, &o.other)?;
            let v = li_indistinguishable(&s, &t, o.rho)?;
            let ok = v.indistinguishable;
            (li_json("li", &s, o.rho, &v), ok)
        }
        Analysis::Distance => {
            let s = input_set(o, &o.input)?;
            let t = input_set(o, &o.other)?;
            let d = local_topology_distance(&s, &t)?;
            (json!({"analysis": "distance", "window": s.window().min(t.window()), "report": d}), true)
        }
        Analysis::Pointgroup => {
            let s = input_set(o, &o.input)?;
            let g = exact_point_group(&s, &CycloNumber::zero(s.field()), 24)?;
            let ok = o.expect.as_ref().is_none_or(|e| *e == g.group_name);
            (json!({"analysis": "pointgroup", "window": s.window(), "report": g}), ok)
        }
        Analysis::Periods => {
            let s = input_set(o, &o.input)?;
            let r = detect_periods(&s, 1.0)?;
            let class = serde_json::to_value(r.classification).expect("serializable");
            let ok = o.expect.as_ref().is_none_or(|e| class == Value::String(e.clone()));
            (json!({"analysis": "periods", "window": s.window(), "report": r}), ok)
        }
        Analysis::Lisym | Analysis::Statsym => {
            let s = input_set(o, &o.input)?;
            let w = root_of_unity(o.order, s.field())?;
            let r = Isometry::new(w, o.reflect, CycloNumber::zero(w.index()))?;
            if let Analysis::Lisym = a {
                let v = li_symmetry_test(&s, &r, o.rho)?;
                let ok = v.indistinguishable;
                let mut j = li_json("lisym", &s, o.rho, &v);
                j["order"] = json!(o.order);
                j["reflect"] = json!(o.reflect);
                (j, ok)
            } else {
                let st = statistical_symmetry(&s, &r, o.rho, o.tolerance, 1)?;
                let ok = st.symmetric;
                let j = json!({"analysis": "statsym", "window": s.window(), "rho": o.rho, "order": o.order, "reflect": o.reflect, "report": st});
                (j, ok)
            }
        }
        Analysis::Coincidence => {
            let c = parse_rational(&o.cos)?;
            let sn = parse_rational(&o.sin)?;
            let z2 = LatticeZ2Q::z2();
            let rot = z2.transform(&rotation_matrix(c, sn)?)?;
            let i = lattice_intersect(&z2, &rot)?;
            let scd = scd_layer_analysis(&z2, c, sn, o.layers)?;
            let j = json!({
                "analysis": "coincidence",
                "cos": c.to_string(),
                "sin": sn.to_string(),
                "index": i.index_in_g,
                "report": scd,
            });
            (j, true)
        }
        Analysis::Bernoulli => {
            let (dim, p, extent) = (o.dim, o.p, o.extent);
            bernoulli_sample(dim, p, extent, 0)?;
            let e = metric_aperiodicity_estimate(|s| bernoulli_sample(dim, p, extent, s).expect("checked"), o.trials, o.rng_seed)?;
            let exact = (dim == 1 && p == 0.5 && extent <= 120).then(|| fair_coin_period_probability(extent as u32));
            let j = json!({
                "analysis": "bernoulli",
                "dim": dim,
                "p": p,
                "extent": extent,
                "rng_seed": o.rng_seed,
                "report": e,
                "exact_probability": exact,
            });
            (j, true)
        }
    };
    let mut text = serde_json::to_string_pretty(&report).expect("reports serialize");
    text.push('\n');
    write_out(&o.out, &text)?;
    Ok(ok)
}

fn li_json(name: &str, s: &PointSet, rho: f64, v: &aperiodica::delone::LiVerdict) -> Value {
    let counterexample = v.counterexample.as_ref().map(|(side, k)| {
        json!({"side": format!("{side:?}").to_lowercase(), "cluster": k})
    });
    json!({
        "analysis": name,
        "window": s.window(),
        "rho": rho,
        "indistinguishable": v.indistinguishable,
        "counterexample": counterexample,
    })
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Generate { system, seed, steps, with_points, out } => {
            let seed = parse_seed(system, &seed)?;
            let p = fixed_point_patch(system, seed, steps)?;
            let mut doc = PatchDocument::from_patch(&p);
            if with_points {
                doc = doc.with_points(&p.full_vertex_set()?);
            }
            write_out(&out, &doc.to_json())?;
            Ok(true)
        }
        Command::Sample { name, window, offset, out } => {
            let q = parse_rational(&offset)?;
            let s = match name {
                SampleName::Z => samples::z_sample(window, q),
                SampleName::ZDefect => samples::z_with_defects(window, q, &[0]),
                SampleName::Z2 => samples::z2_sample(window),
                SampleName::ZLine => samples::z_line_in_plane(window),
                SampleName::Fibonacci => samples::fibonacci_sample(window),
            };
            write_out(&out, &PatchDocument::from_point_set(&s).to_json())?;
            Ok(true)
        }
        Command::Analyze { analysis, opts } => analyze(analysis, &opts),
        Command::Render { input, out, show_points, no_arrows, scale } => {
            let doc = read_doc(&input)?;
            let opts = RenderOptions { show_points, show_arrows: !no_arrows, scale };
            write_out(&out, &render_svg(&doc, &opts)?)?;
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    if let Some(n) = std::env::var("APERIODICA_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_FALSIFIED),
        Err(Failure::Usage(m) | Failure::Io(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}
