use clap::{Args, Parser, Subcommand};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use swept_region::job::{parse_num, JobSpec};
use swept_region::oracle::{self, OracleConfig, ValidationGrid};
use swept_region::plot::{render_svg, PlotOptions};
use swept_region::region::{self, RegionFormula};
use swept_region::transitions::TransitionOptions;

/// Compiles a convex polygon sweeping along a piecewise trajectory into a
/// quantifier-free safety predicate, and certifies it against a sampling
/// oracle.
#[derive(Parser)]
#[command(name = "swept-region", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Compile a job file into formula artifacts next to it.
    Compile {
        job: PathBuf,
        /// Extra formats beside json: latex, cas (repeatable or comma list).
        #[arg(long, value_delimiter = ',')]
        format: Vec<String>,
        /// Output directory (default: alongside the job file).
        #[arg(short, long)]
        out_dir: Option<PathBuf>,
    },
    /// Evaluate a compiled formula at a point; prints SAFE or UNSAFE.
    Eval {
        region: PathBuf,
        #[arg(allow_hyphen_values = true)]
        x: String,
        #[arg(allow_hyphen_values = true)]
        y: String,
    },
    /// Certify a job's compiled formula against the sampling oracle.
    Validate {
        job: PathBuf,
        /// Override the validation grid: x0,x1,y0,y1,step.
        #[arg(long, value_name = "X0,X1,Y0,Y1,STEP")]
        grid: Option<String>,
        /// Override the completeness margin.
        #[arg(long)]
        margin: Option<String>,
        #[arg(short, long)]
        out_dir: Option<PathBuf>,
    },
    /// Render the unsafe region, trajectory and transition snapshots.
    Plot {
        job: PathBuf,
        #[arg(short, long, default_value = "out.svg")]
        output: PathBuf,
        /// Raster cells along the longer window axis.
        #[arg(long, default_value_t = 256)]
        resolution: usize,
    },
    /// Run the built-in example jobs.
    Examples(ExamplesArgs),
}

#[derive(Args)]
struct ExamplesArgs {
    /// Compile and validate every built-in job.
    #[arg(long)]
    all: bool,
    /// Directory for artifacts (default: current directory).
    #[arg(short, long)]
    out_dir: Option<PathBuf>,
}

const BUILTIN_JOBS: &[(&str, &str)] = &[
    ("corner-dive", include_str!("../jobs/corner-dive.job")),
    ("uav-descent", include_str!("../jobs/uav-descent.job")),
    ("climb-out", include_str!("../jobs/climb-out.job")),
    ("arc-line-arc", include_str!("../jobs/arc-line-arc.job")),
];

fn main() -> ExitCode {
    if let Ok(n) = std::env::var("SWEPT_REGION_THREADS") {
        if let Ok(n) = n.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build_global();
        }
    }
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, String> {
    match cli.cmd {
        Cmd::Compile {
            job,
            format,
            out_dir,
        } => {
            let spec = JobSpec::load(&job).map_err(|e| e.to_string())?;
            cmd_compile(&spec, &stem(&job), out_dir.as_deref(), &format)?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Eval { region, x, y } => {
            let text = std::fs::read_to_string(&region)
                .map_err(|e| format!("cannot read {}: {e}", region.display()))?;
            let f: RegionFormula = serde_json::from_str(&text).map_err(|e| e.to_string())?;
            let q = (parse_num(&x)?, parse_num(&y)?);
            let unsafe_ = f.evaluate(q).map_err(|e| e.to_string())?;
            if unsafe_ {
                println!("UNSAFE");
                Ok(ExitCode::from(1))
            } else {
                println!("SAFE");
                Ok(ExitCode::SUCCESS)
            }
        }
        Cmd::Validate {
            job,
            grid,
            margin,
            out_dir,
        } => {
            let spec = JobSpec::load(&job).map_err(|e| e.to_string())?;
            let mut cfg = spec.oracle_config().map_err(|e| e.to_string())?;
            if let Some(g) = grid {
                cfg.grid = parse_grid(&g)?;
            }
            if let Some(m) = margin {
                cfg.margin = Some(parse_num(&m)?);
            }
            let pass = cmd_validate(&spec, &cfg, &stem(&job), out_dir.as_deref())?;
            Ok(if pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Cmd::Plot {
            job,
            output,
            resolution,
        } => {
            let spec = JobSpec::load(&job).map_err(|e| e.to_string())?;
            let (p, t) = instance(&spec)?;
            let f = region::compile(&t, &p, &TransitionOptions::default())
                .map_err(|e| e.to_string())?;
            let opts = PlotOptions {
                window: spec.plot_window().map_err(|e| e.to_string())?,
                resolution,
                ..Default::default()
            };
            let svg = render_svg(&f, &t, &p, &opts);
            std::fs::write(&output, svg).map_err(|e| e.to_string())?;
            println!("wrote {}", output.display());
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Examples(args) => {
            if !args.all {
                for (name, _) in BUILTIN_JOBS {
                    println!("{name}");
                }
                return Ok(ExitCode::SUCCESS);
            }
            let mut all_pass = true;
            for (name, text) in BUILTIN_JOBS {
                let spec = JobSpec::from_str(text).map_err(|e| e.to_string())?;
                cmd_compile(&spec, name, args.out_dir.as_deref(), &["latex".into()])?;
                let cfg = spec.oracle_config().map_err(|e| e.to_string())?;
                all_pass &= cmd_validate(&spec, &cfg, name, args.out_dir.as_deref())?;
            }
            Ok(if all_pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
    }
}

fn stem(job: &Path) -> String {
    job.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "job".into())
}

fn artifact(out_dir: Option<&Path>, stem: &str, ext: &str) -> PathBuf {
    out_dir
        .unwrap_or(Path::new("."))
        .join(format!("{stem}.{ext}"))
}

fn instance(spec: &JobSpec) -> Result<(swept_region::Polygon, swept_region::Trajectory), String> {
    let p = spec.polygon().map_err(|e| e.to_string())?;
    let t = spec.trajectory().map_err(|e| e.to_string())?;
    Ok((p, t))
}

fn cmd_compile(
    spec: &JobSpec,
    stem: &str,
    out_dir: Option<&Path>,
    formats: &[String],
) -> Result<(), String> {
    let (p, t) = instance(spec)?;
    let f = region::compile(&t, &p, &TransitionOptions::default()).map_err(|e| e.to_string())?;
    let mut wanted: Vec<String> = formats.to_vec();
    if let Some(extra) = &spec.formats {
        wanted.extend(extra.clone());
    }
    let json = serde_json::to_string_pretty(&f).map_err(|e| e.to_string())?;
    let path = artifact(out_dir, stem, "region.json");
    std::fs::write(&path, json + "\n").map_err(|e| e.to_string())?;
    println!("wrote {}", path.display());
    for fmt in &wanted {
        match fmt.as_str() {
            "json" => {}
            "latex" => {
                let path = artifact(out_dir, stem, "tex");
                std::fs::write(&path, region::to_latex(&f) + "\n").map_err(|e| e.to_string())?;
                println!("wrote {}", path.display());
            }
            "cas" => {
                let window = spec.plot_window().map_err(|e| e.to_string())?;
                let path = artifact(out_dir, stem, "cas.txt");
                std::fs::write(&path, region::to_cas(&f, window) + "\n")
                    .map_err(|e| e.to_string())?;
                println!("wrote {}", path.display());
            }
            other => return Err(format!("unknown format `{other}` (json|latex|cas)")),
        }
    }
    Ok(())
}

fn cmd_validate(
    spec: &JobSpec,
    cfg: &OracleConfig,
    stem: &str,
    out_dir: Option<&Path>,
) -> Result<bool, String> {
    let (p, t) = instance(spec)?;
    let f = region::compile(&t, &p, &TransitionOptions::default()).map_err(|e| e.to_string())?;
    let report = oracle::validate(&f, &t, &p, cfg).map_err(|e| e.to_string())?;
    let path = artifact(out_dir, stem, "report.json");
    let json = serde_json::to_string_pretty(&report).map_err(|e| e.to_string())?;
    std::fs::write(&path, json + "\n").map_err(|e| e.to_string())?;
    println!("{stem}: {}", report.summary());
    Ok(report.pass())
}

fn parse_grid(s: &str) -> Result<ValidationGrid, String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 5 {
        return Err("--grid wants x0,x1,y0,y1,step".into());
    }
    let v: Vec<f64> = parts
        .iter()
        .map(|p| parse_num(p))
        .collect::<Result<_, _>>()?;
    let grid = ValidationGrid {
        x0: v[0],
        x1: v[1],
        y0: v[2],
        y1: v[3],
        step: v[4],
    };
    if !grid.is_valid() {
        return Err("empty or inverted grid".into());
    }
    Ok(grid)
}
