//! Analysis of vorticity fields: vortices, principal directions, contour
//! degrees, symmetry and boundary diagnostics, and the Table 1 harness.

use std::f64::consts::{FRAC_PI_4, PI};

use serde::{Deserialize, Serialize};

use crate::basis::BasisArray;
use crate::block::{BlockHamiltonian, BlockSpectrum, DEFAULT_BLOCK_CAP};
use crate::engine::{compute_field, EngineOptions, Prepared};
use crate::error::{Error, Result};
use crate::field::{EngineKind, VorticityField};
use crate::lattice::{BoundaryAngles, Contour, Lattice, LatticeSpec, Site, SiteRole};
use crate::model::HamiltonianSpec;
use crate::su2::{contour_degree, ContourField, DegreeReport, Su2Element, SINGULAR_REL_TOL};

/// Relative vortex threshold: `ε = 1e-6 · max_i ‖Ω̂^i‖_F`.
pub const DEFAULT_VORTEX_REL_TOL: f64 = 1e-6;
/// `‖Ω̂‖` below this fraction of `‖Ω‖` is rounding noise.
pub const NOISE_REL_TOL: f64 = 1e-12;

fn max_omega_norm(field: &VorticityField) -> f64 {
    field
        .entries
        .iter()
        .map(|e| e.matrix.omega.norm())
        .fold(0.0, f64::max)
}

/// `max(1e-6 · max ‖Ω̂‖, 1e-12 · max ‖Ω‖)`; the second term keeps an
/// all-vortex field from being judged against its own rounding noise.
pub fn default_threshold(field: &VorticityField) -> f64 {
    (DEFAULT_VORTEX_REL_TOL * field.max_norm()).max(NOISE_REL_TOL * max_omega_norm(field))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VortexSet {
    pub threshold: f64,
    pub sites: Vec<Site>,
}

impl VortexSet {
    pub fn contains(&self, site: Site) -> bool {
        self.sites.contains(&site)
    }

    pub fn len(&self) -> usize {
        self.sites.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sites.is_empty()
    }
}

/// Sites with `‖Ω̂‖_F ≤ ε`.
pub fn detect_vortices(field: &VorticityField, eps: f64) -> Result<VortexSet> {
    if !(eps > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "vortex threshold must be positive, got {eps}"
        )));
    }
    Ok(VortexSet {
        threshold: eps,
        sites: field
            .entries
            .iter()
            .filter(|e| e.matrix.norm() <= eps)
            .map(|e| e.site)
            .collect(),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PrincipalEntry {
    pub site: Site,
    /// The positive eigenvalue `√(−det Ω̂)`; the other is its negative.
    pub eigenvalue: f64,
    /// Axis of the positive eigenvector, in `[0, π)`.
    pub angle: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PrincipalField {
    pub threshold: f64,
    pub entries: Vec<PrincipalEntry>,
}

/// Principal directions at every site with `‖Ω̂‖_F > ε`.
pub fn principal_field(field: &VorticityField, eps: f64) -> PrincipalField {
    PrincipalField {
        threshold: eps,
        entries: field
            .entries
            .iter()
            .filter(|e| e.matrix.norm() > eps)
            .map(|e| PrincipalEntry {
                site: e.site,
                eigenvalue: 0.5 * e.matrix.eigengap(),
                angle: e.matrix.principal_angle(),
            })
            .collect(),
    }
}

/// The contour field built from `Ω̂` along `contour`.
pub fn contour_field(field: &VorticityField, contour: &Contour) -> Result<ContourField> {
    let samples = contour
        .sites
        .iter()
        .map(|&s| {
            field
                .get(s)
                .map(|e| Su2Element::from_real_traceless(&e.matrix.reduced))
                .ok_or(Error::UnknownSite(s))
        })
        .collect::<Result<Vec<_>>>()?;
    ContourField::new(samples)
}

/// Degree of `Ω̂` along a lattice contour.
pub fn lattice_degree(field: &VorticityField, contour: &Contour) -> Result<DegreeReport> {
    let cf = contour_field(field, contour)?;
    let eps = SINGULAR_REL_TOL * cf.max_lambda();
    for (i, s) in cf.samples().iter().enumerate() {
        let e = field.get(contour.sites[i]).expect("sampled above");
        let noise = NOISE_REL_TOL * e.matrix.omega.norm();
        if !(s.lambda() > eps) || e.matrix.norm() <= noise {
            return Err(Error::VortexOnContour {
                site: contour.sites[i],
                segment: i,
            });
        }
    }
    contour_degree(&cf).map_err(|e| match e {
        Error::SingularSegment { segment, .. } => Error::VortexOnContour {
            site: contour.sites[segment],
            segment,
        },
        other => other,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FerroReport {
    pub beta: f64,
    pub per_site: Vec<(Site, f64)>,
    pub max: f64,
    /// Free boundary with an even site count, where the discrepancy must vanish.
    pub asserted: bool,
}

/// Site-wise `max |Ω_β − Ω_{−β}|` between two fields over the same sites.
pub fn ferro_antiferro(
    positive: &VorticityField,
    negative: &VorticityField,
    beta: f64,
    asserted: bool,
) -> Result<FerroReport> {
    if positive.len() != negative.len() {
        return Err(Error::InvalidArgument(
            "fields cover different site sets".into(),
        ));
    }
    let per_site: Vec<(Site, f64)> = positive
        .entries
        .iter()
        .zip(&negative.entries)
        .map(|(p, n)| {
            if p.site != n.site {
                return Err(Error::InvalidArgument(
                    "fields cover different site sets".into(),
                ));
            }
            Ok((p.site, (p.matrix.omega - n.matrix.omega).abs().max()))
        })
        .collect::<Result<_>>()?;
    let max = per_site.iter().map(|&(_, d)| d).fold(0.0, f64::max);
    Ok(FerroReport {
        beta,
        per_site,
        max,
        asserted,
    })
}

/// Runs one engine at `β` and `−β` and compares the vorticity matrices.
pub fn ferro_antiferro_report(
    lattice: &Lattice,
    spec: &HamiltonianSpec,
    angles: &BoundaryAngles,
    beta: f64,
    basis: &BasisArray,
    engine: EngineKind,
    options: &EngineOptions,
) -> Result<FerroReport> {
    let prepared = Prepared::new(lattice, spec, angles, engine, options)?;
    let pos = compute_field(lattice, &prepared.state(beta)?, basis)?;
    let neg = compute_field(lattice, &prepared.state(-beta)?, basis)?;
    let free = lattice.spec().boundary_layers == 0;
    ferro_antiferro(&pos, &neg, beta, free && lattice.len().is_multiple_of(2))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FidelityStats {
    /// `(site, |principal angle − θ| mod π)` for each regular compared site.
    pub per_site: Vec<(Site, f64)>,
    pub mean: Option<f64>,
    pub max: Option<f64>,
    /// Interior sites next to the boundary stood in for boundary sites.
    pub proxy: bool,
}

/// Axial distance in `[0, π/2]` between two directions defined mod `π`.
pub fn axial_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(PI);
    d.min(PI - d)
}

/// Compares principal directions with the compression directions `θ_j`.
///
/// Boundary sites present in the field are compared with their own `θ_j`.
/// Without them, boundary-adjacent interior sites are compared with the
/// axial mean of their boundary neighbours' angles.
pub fn boundary_fidelity(
    lattice: &Lattice,
    field: &VorticityField,
    angles: &BoundaryAngles,
) -> FidelityStats {
    let eps = default_threshold(field);
    let regular = |i: usize| {
        field
            .get(lattice.site(i))
            .filter(|e| e.matrix.norm() > eps && eps > 0.0)
            .map(|e| e.matrix.principal_angle())
    };
    let has_boundary = field.entries.iter().any(|e| e.role == SiteRole::Boundary);
    let mut per_site = Vec::new();
    if has_boundary {
        for (j, theta) in angles.iter() {
            if let Some(angle) = regular(j) {
                per_site.push((lattice.site(j), axial_distance(angle, theta)));
            }
        }
    } else {
        for i in lattice.interior_indices() {
            let (mut s, mut c, mut any) = (0.0, 0.0, false);
            for j in lattice.neighbors(i) {
                if let Some(t) = angles.theta(j) {
                    s += (2.0 * t).sin();
                    c += (2.0 * t).cos();
                    any = true;
                }
            }
            if any {
                if let Some(angle) = regular(i) {
                    per_site.push((lattice.site(i), axial_distance(angle, 0.5 * s.atan2(c))));
                }
            }
        }
    }
    let (mean, max) = if per_site.is_empty() {
        (None, None)
    } else {
        let sum: f64 = per_site.iter().map(|&(_, d)| d).sum();
        let max = per_site.iter().map(|&(_, d)| d).fold(0.0, f64::max);
        (Some(sum / per_site.len() as f64), Some(max))
    };
    FidelityStats {
        per_site,
        mean,
        max,
        proxy: !has_boundary,
    }
}

/// Published degrees, indexed `[given degree − 1][column]` with columns
/// (k=2 depth 1, k=10 depth 1, k=2 depth 2, k=10 depth 2).
pub const PUBLISHED_TABLE1: [[f64; 4]; 3] = [
    [1.05, 1.09, 0.89, 1.05],
    [1.98, 2.03, 1.70, 1.78],
    [2.76, 2.75, 2.01, 2.50],
];

pub fn published_value(k: f64, given_degree: u32, depth: usize) -> Option<f64> {
    let row = PUBLISHED_TABLE1.get((given_degree as usize).checked_sub(1)?)?;
    let col = match (k, depth) {
        (2.0, 1) => 0,
        (10.0, 1) => 1,
        (2.0, 2) => 2,
        (10.0, 2) => 3,
        _ => return None,
    };
    Some(row[col])
}

/// How a given degree `D` becomes the boundary multiplier `d`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DegreeConvention {
    /// `d = D`.
    Direct,
    /// `d = D / 2`.
    Half,
}

impl DegreeConvention {
    pub const ALL: [DegreeConvention; 2] = [DegreeConvention::Direct, DegreeConvention::Half];

    pub fn d_for(self, given_degree: u32) -> f64 {
        match self {
            DegreeConvention::Direct => given_degree as f64,
            DegreeConvention::Half => given_degree as f64 / 2.0,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            DegreeConvention::Direct => "d = D",
            DegreeConvention::Half => "d = D/2",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Table1Config {
    pub lattice: LatticeSpec,
    pub beta: f64,
    pub n: f64,
    pub ks: Vec<f64>,
    pub given_degrees: Vec<u32>,
    pub depths: Vec<usize>,
    pub scan_d: Vec<f64>,
    pub phi: f64,
    /// Boundary phase of the `d = 0` control row; at `φ = 0` every
    /// compressed σˣ vanishes and the field is all vortices.
    pub control_phi: f64,
    pub block_cap: usize,
}

impl Default for Table1Config {
    fn default() -> Self {
        Self {
            lattice: LatticeSpec::new(23, 33, 2),
            beta: 1.0,
            n: 1.0,
            ks: vec![2.0, 10.0],
            given_degrees: vec![1, 2, 3],
            depths: vec![1, 2],
            scan_d: vec![0.5, 1.0, 1.5, 2.0, 3.0],
            phi: 0.0,
            control_phi: FRAC_PI_4,
            block_cap: DEFAULT_BLOCK_CAP,
        }
    }
}

/// Degrees on every requested ring for one `(k, d)` block-engine run.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScanPoint {
    pub k: f64,
    pub d: f64,
    pub phi: f64,
    pub rings: Vec<RingDegree>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RingDegree {
    pub depth: usize,
    pub s: Option<f64>,
    pub winding: Option<i64>,
    pub min_lambda: Option<f64>,
    pub error: Option<String>,
}

impl ScanPoint {
    pub fn ring(&self, depth: usize) -> Option<&RingDegree> {
        self.rings.iter().find(|r| r.depth == depth)
    }

    pub fn s_abs(&self, depth: usize) -> Option<f64> {
        self.ring(depth).and_then(|r| r.s).map(f64::abs)
    }
}

/// One block-engine eigendecomposition and the ring degrees at `(k, d, φ)`.
pub fn table1_scan_point(config: &Table1Config, k: f64, d: f64, phi: f64) -> Result<ScanPoint> {
    let lattice = Lattice::build(config.lattice)?;
    let angles = lattice.boundary_angles(d, phi);
    let spec = HamiltonianSpec::xy(config.n, k);
    let h = BlockHamiltonian::build(&lattice, &spec, &angles, config.block_cap)?;
    let state = BlockSpectrum::new(&h)?.gibbs(config.beta)?;
    let field = compute_field(&lattice, &state, &BasisArray::delta())?;
    let rings = config
        .depths
        .iter()
        .map(|&depth| {
            let degree = lattice
                .ring_contour(depth)
                .and_then(|c| lattice_degree(&field, &c));
            match degree {
                Ok(r) => RingDegree {
                    depth,
                    s: Some(r.s),
                    winding: r.winding,
                    min_lambda: Some(r.min_lambda),
                    error: None,
                },
                Err(e) => RingDegree {
                    depth,
                    s: None,
                    winding: None,
                    min_lambda: None,
                    error: Some(e.to_string()),
                },
            }
        })
        .collect();
    Ok(ScanPoint { k, d, phi, rings })
}

/// Every `(k, d, φ)` the harness needs: the scan plus the `d = 0` controls.
pub fn table1_jobs(config: &Table1Config) -> Vec<(f64, f64, f64)> {
    let mut jobs = Vec::new();
    for &k in &config.ks {
        for &d in &config.scan_d {
            jobs.push((k, d, config.phi));
        }
        jobs.push((k, 0.0, config.control_phi));
    }
    jobs
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Table1Row {
    pub k: f64,
    pub given_degree: u32,
    pub depth: usize,
    pub d: f64,
    pub s: Option<f64>,
    pub s_abs: Option<f64>,
    pub winding: Option<i64>,
    pub paper_value: Option<f64>,
    /// `| |s| − D |`.
    pub abs_error: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OrderingCheck {
    pub k: f64,
    pub given_degree: u32,
    pub depth1_error: Option<f64>,
    pub depth2_error: Option<f64>,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Table1Report {
    pub config: Table1Config,
    pub scan: Vec<ScanPoint>,
    /// Mean depth-1 `| |s| − D |` per convention; `None` if a ring failed.
    pub convention_scores: Vec<(DegreeConvention, Option<f64>)>,
    pub convention: DegreeConvention,
    pub rows: Vec<Table1Row>,
    pub controls: Vec<ScanPoint>,
    pub ordering: Vec<OrderingCheck>,
}

fn find_point(points: &[ScanPoint], k: f64, d: f64) -> Option<&ScanPoint> {
    points.iter().find(|p| p.k == k && p.d == d)
}

/// Calibrates the degree convention over the scan and lays out the table.
///
/// The convention minimizing the mean depth-1 error over all `(k, D)` wins;
/// ties and failures fall back to [`DegreeConvention::Direct`].
pub fn assemble_table1(config: &Table1Config, points: Vec<ScanPoint>) -> Table1Report {
    let (controls, scan): (Vec<ScanPoint>, Vec<ScanPoint>) =
        points.into_iter().partition(|p| p.d == 0.0);
    let first = config.depths.iter().copied().min().unwrap_or(1);
    let convention_scores: Vec<(DegreeConvention, Option<f64>)> = DegreeConvention::ALL
        .iter()
        .map(|&conv| {
            let errors: Option<Vec<f64>> = config
                .ks
                .iter()
                .flat_map(|&k| config.given_degrees.iter().map(move |&g| (k, g)))
                .map(|(k, g)| {
                    find_point(&scan, k, conv.d_for(g))
                        .and_then(|p| p.s_abs(first))
                        .map(|s| (s - g as f64).abs())
                })
                .collect();
            let score = errors
                .filter(|e| !e.is_empty())
                .map(|e| e.iter().sum::<f64>() / e.len() as f64);
            (conv, score)
        })
        .collect();
    let convention = convention_scores
        .iter()
        .filter_map(|&(c, s)| s.map(|s| (c, s)))
        .fold(
            None,
            |best: Option<(DegreeConvention, f64)>, (c, s)| match best {
                Some((_, b)) if b <= s => best,
                _ => Some((c, s)),
            },
        )
        .map_or(DegreeConvention::Direct, |(c, _)| c);

    let mut rows = Vec::new();
    for &g in &config.given_degrees {
        for &depth in &config.depths {
            for &k in &config.ks {
                let d = convention.d_for(g);
                let ring = find_point(&scan, k, d).and_then(|p| p.ring(depth));
                let s = ring.and_then(|r| r.s);
                rows.push(Table1Row {
                    k,
                    given_degree: g,
                    depth,
                    d,
                    s,
                    s_abs: s.map(f64::abs),
                    winding: ring.and_then(|r| r.winding),
                    paper_value: published_value(k, g, depth),
                    abs_error: s.map(|s| (s.abs() - g as f64).abs()),
                });
            }
        }
    }
    let error_at = |k: f64, g: u32, depth: usize| {
        rows.iter()
            .find(|r| r.k == k && r.given_degree == g && r.depth == depth)
            .and_then(|r| r.abs_error)
    };
    let mut ordering = Vec::new();
    for &k in &config.ks {
        for &g in config.given_degrees.iter().filter(|&&g| g >= 2) {
            let (e1, e2) = (error_at(k, g, 1), error_at(k, g, 2));
            ordering.push(OrderingCheck {
                k,
                given_degree: g,
                depth1_error: e1,
                depth2_error: e2,
                holds: matches!((e1, e2), (Some(a), Some(b)) if b >= a),
            });
        }
    }
    Table1Report {
        config: config.clone(),
        scan,
        convention_scores,
        convention,
        rows,
        controls,
        ordering,
    }
}

/// Sequential harness: every scan point, then [`assemble_table1`].
pub fn table1_harness(config: &Table1Config) -> Result<Table1Report> {
    let points = table1_jobs(config)
        .into_iter()
        .map(|(k, d, phi)| table1_scan_point(config, k, d, phi))
        .collect::<Result<Vec<_>>>()?;
    Ok(assemble_table1(config, points))
}

impl Table1Report {
    pub fn row(&self, k: f64, given_degree: u32, depth: usize) -> Option<&Table1Row> {
        self.rows
            .iter()
            .find(|r| r.k == k && r.given_degree == given_degree && r.depth == depth)
    }

    /// Aligned text in the published layout, computed `|s|` beside the
    /// published value.
    pub fn to_text(&self) -> String {
        use std::fmt::Write;
        let fmt = |v: Option<f64>| v.map_or_else(|| "    -".to_string(), |v| format!("{v:5.2}"));
        let mut out = String::new();
        let spec = self.config.lattice;
        let _ = writeln!(
            out,
            "block engine (reconstructed), {}x{} with {} boundary layers, beta = {}",
            spec.total_width, spec.total_height, spec.boundary_layers, self.config.beta
        );
        let _ = writeln!(out, "degree convention: {}", self.convention.as_str());
        for (c, s) in &self.convention_scores {
            let _ = writeln!(out, "  {:8} mean depth-1 error {}", c.as_str(), fmt(*s));
        }
        let _ = writeln!(out);
        let mut header = String::from("given ");
        for &depth in &self.config.depths {
            for &k in &self.config.ks {
                let _ = write!(header, "| k={k:<3} depth {depth}  ");
            }
        }
        let _ = writeln!(out, "{}", header.trim_end());
        let mut sub = String::from("      ");
        for _ in 0..self.config.depths.len() * self.config.ks.len() {
            sub.push_str("| |s|   publ. ");
        }
        let _ = writeln!(out, "{}", sub.trim_end());
        for &g in &self.config.given_degrees {
            let mut line = format!("{g:<6}");
            for &depth in &self.config.depths {
                for &k in &self.config.ks {
                    let r = self.row(k, g, depth);
                    let _ = write!(
                        line,
                        "| {} {} ",
                        fmt(r.and_then(|r| r.s_abs)),
                        fmt(r.and_then(|r| r.paper_value))
                    );
                }
            }
            let _ = writeln!(out, "{}", line.trim_end());
        }
        let _ = writeln!(out);
        let _ = writeln!(out, "calibration scan (|s|, winding):");
        for p in &self.scan {
            let mut line = format!("  k={:<4} d={:<4}", p.k, p.d);
            for r in &p.rings {
                let w = r.winding.map_or("-".to_string(), |w| w.to_string());
                let _ = write!(
                    line,
                    "  depth {}: {} ({w})",
                    r.depth,
                    fmt(r.s.map(f64::abs))
                );
            }
            let _ = writeln!(out, "{line}");
        }
        let _ = writeln!(
            out,
            "controls (d = 0, phi = {:.6}):",
            self.config.control_phi
        );
        for p in &self.controls {
            let mut line = format!("  k={:<4}", p.k);
            for r in &p.rings {
                let _ = write!(line, "  depth {}: {}", r.depth, fmt(r.s.map(f64::abs)));
            }
            let _ = writeln!(out, "{line}");
        }
        let _ = writeln!(out, "ordering (depth-2 error >= depth-1 error):");
        for o in &self.ordering {
            let _ = writeln!(
                out,
                "  k={:<4} D={}  {} vs {}  {}",
                o.k,
                o.given_degree,
                fmt(o.depth1_error),
                fmt(o.depth2_error),
                if o.holds { "holds" } else { "violated" }
            );
        }
        out
    }
}
