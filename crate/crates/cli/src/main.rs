use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use vorticity_cli::commands::{self, ContourSpec, SimulateOptions};
use vorticity_cli::output::OutputDir;
use vorticity_cli::render::render_svg;
use vorticity_cli::validate::{default_suite, run_suite};
use vorticity_cli::{CliError, CliResult, RunConfig};
use vorticity_core::lattice::LatticeDescription;
use vorticity_core::EngineKind;

#[derive(Parser)]
#[command(
    name = "vorticity",
    version,
    about = "Vorticity matrices of XY-model Gibbs states"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum EngineArg {
    Exact,
    Block,
}

impl From<EngineArg> for EngineKind {
    fn from(e: EngineArg) -> Self {
        match e {
            EngineArg::Exact => EngineKind::Exact,
            EngineArg::Block => EngineKind::Block,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Compute vorticity fields for every beta in a run config.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        /// Overrides `output_dir` from the config.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum)]
        engine: Option<EngineArg>,
        #[arg(long)]
        jobs: Option<usize>,
        /// Include wall-clock timings in the manifest (breaks byte-identical reruns).
        #[arg(long)]
        record_timings: bool,
    },
    /// Degree of a field file along a closed contour.
    Degree {
        field: PathBuf,
        /// Ring depth inside the interior sites' bounding box.
        #[arg(long, conflicts_with = "rect")]
        depth: Option<usize>,
        /// Rectangle `x0,y0,x1,y1`.
        #[arg(long, value_parser = parse_rect, allow_hyphen_values = true)]
        rect: Option<[i64; 4]>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Reproduce the ring-degree table with the block engine.
    Table1 {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Run the self-check suite.
    Validate,
    /// Render a field file as an SVG of principal directions.
    Render {
        field: PathBuf,
        /// `lattice.json` from a simulate run, for boundary angle ticks.
        #[arg(long)]
        lattice: Option<PathBuf>,
        /// Vortex threshold; defaults to the relative threshold.
        #[arg(long)]
        epsilon: Option<f64>,
        /// Output SVG path; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn parse_rect(s: &str) -> Result<[i64; 4], String> {
    let parts = s
        .split(',')
        .map(|p| p.trim().parse::<i64>().map_err(|e| format!("{p:?}: {e}")))
        .collect::<Result<Vec<_>, _>>()?;
    parts
        .try_into()
        .map_err(|p: Vec<i64>| format!("expected x0,y0,x1,y1, got {} values", p.len()))
}

fn read_lattice(path: &Path) -> CliResult<LatticeDescription> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| CliError::Schema(format!("{}: {e}", path.display())))
}

fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Simulate {
            config,
            out,
            engine,
            jobs,
            record_timings,
        } => {
            let config = RunConfig::load(&config)?;
            let result = commands::simulate(
                &config,
                &SimulateOptions {
                    out,
                    engine: engine.map(Into::into),
                    jobs,
                    record_timings,
                },
            )?;
            for r in &result.reports {
                println!(
                    "beta {}: {} vortices -> {}",
                    r.beta,
                    r.vortices.len(),
                    result.out_dir.join(&r.field_file).display()
                );
            }
            Ok(())
        }
        Command::Degree {
            field,
            depth,
            rect,
            out,
        } => {
            let spec = match (depth, rect) {
                (_, Some(r)) => ContourSpec::Rect(r),
                (Some(d), None) => ContourSpec::Depth(d),
                (None, None) => ContourSpec::Depth(1),
            };
            print!("{}", commands::degree_file(&field, spec, out.as_deref())?);
            Ok(())
        }
        Command::Table1 { config, out, jobs } => {
            let config = commands::load_table1_config(config.as_deref())?;
            let report = commands::table1_report(&config, jobs)?;
            commands::write_table1(&report, &out)?;
            print!("{}", report.to_text());
            Ok(())
        }
        Command::Validate => {
            let report = run_suite(&default_suite());
            print!("{}", report.to_text());
            if report.all_passed() {
                Ok(())
            } else {
                Err(CliError::Validation("one or more checks failed".into()))
            }
        }
        Command::Render {
            field,
            lattice,
            epsilon,
            out,
        } => {
            let f = commands::read_field(&field)?;
            let lattice = lattice.as_deref().map(read_lattice).transpose()?;
            let svg = render_svg(&f, lattice.as_ref(), epsilon);
            match out {
                Some(path) => {
                    let dir = path
                        .parent()
                        .filter(|p| !p.as_os_str().is_empty())
                        .unwrap_or(Path::new("."));
                    let name = path
                        .file_name()
                        .ok_or_else(|| CliError::Usage("--out needs a file name".into()))?;
                    OutputDir::create(dir)?.write(&name.to_string_lossy(), svg.as_bytes())?;
                }
                None => print!("{svg}"),
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
