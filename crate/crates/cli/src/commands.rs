//! The five subcommands as library functions; `main` only parses flags.

use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;
use vorticity_core::io::{
    field_to_csv_string, fmt_f64, read_field_csv, to_json_string, DegreeRecord,
};
use vorticity_core::lattice::LatticeDescription;
use vorticity_core::vortex::{
    assemble_table1, default_threshold, table1_jobs, table1_scan_point, Table1Config, Table1Report,
};
use vorticity_core::{
    compute_field, detect_vortices, lattice_degree, Contour, EngineKind, Lattice, Prepared,
    SiteRole, VorticityField,
};

use crate::config::RunConfig;
use crate::error::{CliError, CliResult};
use crate::output::{Manifest, OutputDir, Timings};

fn pool(jobs: Option<usize>) -> CliResult<rayon::ThreadPool> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(j) = jobs {
        if j == 0 {
            return Err(CliError::Usage("--jobs must be at least 1".into()));
        }
        builder = builder.num_threads(j);
    }
    builder
        .build()
        .map_err(|e| CliError::Usage(format!("cannot start worker pool: {e}")))
}

fn json<T: Serialize>(value: &T) -> CliResult<String> {
    Ok(to_json_string(value)?)
}

#[derive(Clone, Debug, Serialize)]
pub struct DegreeOutcome {
    pub depth: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub report: Option<DegreeRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

/// Everything written for one β.
#[derive(Clone, Debug, Serialize)]
pub struct BetaReport {
    pub beta: f64,
    pub engine: EngineKind,
    pub field_file: String,
    pub vortex_threshold: f64,
    pub vortices: Vec<[i64; 2]>,
    pub degrees: Vec<DegreeOutcome>,
}

pub struct SimulateOutput {
    pub out_dir: PathBuf,
    pub fields: Vec<VorticityField>,
    pub reports: Vec<BetaReport>,
    pub manifest: Manifest,
}

pub struct SimulateOptions {
    pub out: Option<PathBuf>,
    pub engine: Option<EngineKind>,
    pub jobs: Option<usize>,
    pub record_timings: bool,
}

/// Degree of `field` along the ring at `depth` of the config's lattice.
fn ring_degree(lattice: &Lattice, field: &VorticityField, depth: usize) -> DegreeOutcome {
    let result = lattice
        .ring_contour(depth)
        .and_then(|c| lattice_degree(field, &c));
    match result {
        Ok(r) => DegreeOutcome {
            depth,
            report: Some(DegreeRecord::new(format!("ring depth {depth}"), &r)),
            error: None,
        },
        Err(e) => DegreeOutcome {
            depth,
            report: None,
            error: Some(e.to_string()),
        },
    }
}

pub fn simulate(config: &RunConfig, options: &SimulateOptions) -> CliResult<SimulateOutput> {
    let mut config = config.clone();
    if let Some(engine) = options.engine {
        config.engine = engine;
    }
    config.validate()?;
    let out_dir = options
        .out
        .clone()
        .or_else(|| config.output_dir.as_ref().map(PathBuf::from))
        .ok_or_else(|| {
            CliError::Usage("no output directory: pass --out or set `output_dir`".into())
        })?;

    let lattice = Lattice::build(config.lattice)?;
    let angles = lattice.boundary_angles(config.d, config.phi);
    let spec = config.hamiltonian();
    let basis = config.basis.basis();
    let engine = config.engine;
    let start = Instant::now();
    let prepared = Prepared::new(&lattice, &spec, &angles, engine, &config.engine_options())?;
    let prepare_seconds = start.elapsed().as_secs_f64();

    let pool = pool(options.jobs)?;
    let results: Vec<(VorticityField, BetaReport, String, f64)> = pool.install(|| {
        config
            .betas
            .par_iter()
            .enumerate()
            .map(|(idx, &beta)| {
                let t = Instant::now();
                let state = prepared.state(beta)?;
                let field = compute_field(&lattice, &state, &basis)?;
                let eps = config.epsilon.unwrap_or_else(|| default_threshold(&field));
                let vortices = detect_vortices(&field, eps)?;
                let degrees = config
                    .contour_depths
                    .iter()
                    .map(|&d| ring_degree(&lattice, &field, d))
                    .collect();
                let csv = field_to_csv_string(&field)?;
                let report = BetaReport {
                    beta,
                    engine,
                    field_file: format!("field_{}_b{idx:02}.csv", engine.as_str()),
                    vortex_threshold: eps,
                    vortices: vortices.sites.iter().map(|s| [s.x, s.y]).collect(),
                    degrees,
                };
                Ok((field, report, csv, t.elapsed().as_secs_f64()))
            })
            .collect::<CliResult<Vec<_>>>()
    })?;

    let mut out = OutputDir::create(&out_dir)?;
    let description: LatticeDescription = lattice.to_description(Some(&angles));
    out.write("lattice.json", json(&description)?.as_bytes())?;
    let mut fields = Vec::new();
    let mut reports = Vec::new();
    let mut per_beta = Vec::new();
    for (idx, (field, report, csv, secs)) in results.into_iter().enumerate() {
        out.write(&report.field_file, csv.as_bytes())?;
        let name = format!("degree_{}_b{idx:02}.json", engine.as_str());
        out.write(&name, json(&report)?.as_bytes())?;
        fields.push(field);
        reports.push(report);
        per_beta.push(secs);
    }
    let manifest = Manifest {
        tool: "vorticity",
        cli_version: env!("CARGO_PKG_VERSION"),
        core_version: vorticity_core::VERSION,
        command: "simulate",
        config_hash: config.hash(),
        config: serde_json::to_value(&config).expect("config serializes"),
        engine: engine.as_str(),
        reconstructed_engine: engine == EngineKind::Block,
        files: out.files().to_vec(),
        timings: options.record_timings.then_some(Timings {
            prepare_seconds,
            per_beta_seconds: per_beta,
        }),
    };
    write_plain(&out_dir.join("manifest.json"), json(&manifest)?.as_bytes())?;
    Ok(SimulateOutput {
        out_dir,
        fields,
        reports,
        manifest,
    })
}

fn write_plain(path: &Path, bytes: &[u8]) -> CliResult<()> {
    crate::output::write_atomic(path, bytes)
}

pub fn read_field(path: &Path) -> CliResult<VorticityField> {
    let file = std::fs::File::open(path).map_err(|e| CliError::io(path, e))?;
    Ok(read_field_csv(std::io::BufReader::new(file))?)
}

/// How `degree` picks its contour.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ContourSpec {
    /// Ring at this depth inside the bounding box of the interior sites.
    Depth(usize),
    /// Counterclockwise boundary of `[x0, x1] x [y0, y1]`.
    Rect([i64; 4]),
}

impl ContourSpec {
    pub fn label(&self) -> String {
        match self {
            ContourSpec::Depth(d) => format!("ring depth {d}"),
            ContourSpec::Rect([x0, y0, x1, y1]) => format!("rect {x0},{y0},{x1},{y1}"),
        }
    }

    pub fn contour(&self, field: &VorticityField) -> CliResult<Contour> {
        match *self {
            ContourSpec::Rect([x0, y0, x1, y1]) => Ok(Contour::ring(x0, y0, x1, y1, 1)?),
            ContourSpec::Depth(depth) => {
                let interior: Vec<_> = field
                    .entries
                    .iter()
                    .filter(|e| e.role == SiteRole::Interior)
                    .map(|e| e.site)
                    .collect();
                if interior.is_empty() {
                    return Err(CliError::Usage("field file has no interior sites".into()));
                }
                let x0 = interior.iter().map(|s| s.x).min().unwrap();
                let x1 = interior.iter().map(|s| s.x).max().unwrap();
                let y0 = interior.iter().map(|s| s.y).min().unwrap();
                let y1 = interior.iter().map(|s| s.y).max().unwrap();
                Ok(Contour::ring(x0, y0, x1, y1, depth)?)
            }
        }
    }
}

pub fn degree(field: &VorticityField, spec: ContourSpec) -> CliResult<DegreeRecord> {
    let contour = spec.contour(field)?;
    let report = lattice_degree(field, &contour)?;
    Ok(DegreeRecord::new(spec.label(), &report))
}

/// Reads a field file, computes the degree and writes `degree.json` if `out` is set.
pub fn degree_file(path: &Path, spec: ContourSpec, out: Option<&Path>) -> CliResult<String> {
    let field = read_field(path)?;
    let record = degree(&field, spec)?;
    let text = json(&record)?;
    if let Some(dir) = out {
        let mut o = OutputDir::create(dir)?;
        o.write("degree.json", text.as_bytes())?;
    }
    Ok(text)
}

pub fn load_table1_config(path: Option<&Path>) -> CliResult<Table1Config> {
    let Some(path) = path else {
        return Ok(Table1Config::default());
    };
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let config: Table1Config = serde_json::from_str(&text)
        .map_err(|e| CliError::Schema(format!("{}: {e}", path.display())))?;
    config
        .lattice
        .validate()
        .map_err(|e| CliError::Schema(e.to_string()))?;
    if config.ks.is_empty() || config.given_degrees.is_empty() || config.depths.is_empty() {
        return Err(CliError::Schema(
            "`ks`, `given_degrees` and `depths` must be non-empty".into(),
        ));
    }
    Ok(config)
}

/// Runs every scan point in parallel and assembles the report.
pub fn table1_report(config: &Table1Config, jobs: Option<usize>) -> CliResult<Table1Report> {
    let pool = pool(jobs)?;
    let points = pool.install(|| {
        table1_jobs(config)
            .into_par_iter()
            .map(|(k, d, phi)| table1_scan_point(config, k, d, phi))
            .collect::<Result<Vec<_>, _>>()
    })?;
    Ok(assemble_table1(config, points))
}

pub fn table1_csv(report: &Table1Report) -> String {
    let opt = |v: Option<f64>| v.map(fmt_f64).unwrap_or_default();
    let mut out = String::from("k,given_degree,depth,d,s_abs,winding,paper_value,abs_error\n");
    for r in &report.rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            fmt_f64(r.k),
            r.given_degree,
            r.depth,
            fmt_f64(r.d),
            opt(r.s_abs),
            r.winding.map(|w| w.to_string()).unwrap_or_default(),
            opt(r.paper_value),
            opt(r.abs_error)
        ));
    }
    out
}

pub fn write_table1(report: &Table1Report, out: &Path) -> CliResult<()> {
    let mut o = OutputDir::create(out)?;
    o.write("table1.txt", report.to_text().as_bytes())?;
    o.write("table1.csv", table1_csv(report).as_bytes())?;
    o.write("table1.json", json(report)?.as_bytes())?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use vorticity_core::{FieldEntry, Mat2, Site, VorticityMatrix};

    use super::*;

    fn field(sites: &[(i64, i64, SiteRole)]) -> VorticityField {
        VorticityField {
            entries: sites
                .iter()
                .map(|&(x, y, role)| FieldEntry {
                    site: Site::new(x, y),
                    role,
                    matrix: VorticityMatrix::from_omega(Mat2::new(1.0, 0.0, 0.0, 0.0)),
                })
                .collect(),
        }
    }

    #[test]
    fn depth_ring_uses_interior_bounding_box() {
        let mut sites = Vec::new();
        for y in 0..5 {
            for x in 0..5 {
                let edge = x == 0 || y == 0 || x == 4 || y == 4;
                sites.push((
                    x,
                    y,
                    if edge {
                        SiteRole::Boundary
                    } else {
                        SiteRole::Interior
                    },
                ));
            }
        }
        let f = field(&sites);
        let c = ContourSpec::Depth(1).contour(&f).unwrap();
        assert_eq!(c.len(), 8);
        assert_eq!(c.sites[0], Site::new(1, 1));
    }

    #[test]
    fn constant_field_has_degree_zero() {
        let sites: Vec<_> = (0..3)
            .flat_map(|y| (0..3).map(move |x| (x, y, SiteRole::Interior)))
            .collect();
        let r = degree(&field(&sites), ContourSpec::Depth(1)).unwrap();
        assert!(r.s_abs < 1e-12);
        assert_eq!(r.winding, Some(0));
    }

    #[test]
    fn zero_jobs_is_usage_error() {
        assert!(matches!(pool(Some(0)), Err(CliError::Usage(_))));
    }
}
