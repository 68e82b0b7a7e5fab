//! Self-check suite behind `vorticity validate`.
//!
//! Each check owns the implementation it exercises, so a test can swap in a
//! broken one and confirm the check notices.

use serde::Serialize;
use vorticity_core::exact::{
    build_hamiltonian, sector_gibbs, CompressionProjector, GibbsState, SectorOptions,
};
use vorticity_core::su2::{synthetic_field, winding_oracle};
use vorticity_core::vortex::{default_threshold, ferro_antiferro_report};
use vorticity_core::{
    compute_field, contour_degree, detect_vortices, BasisArray, BoundaryMode, EngineKind,
    EngineOptions, HamiltonianSpec, Lattice, LatticeSpec, Mat2, OrthogonalMap, Prepared,
    VorticityField, VorticityMatrix,
};

pub type CheckFn = Box<dyn Fn() -> Result<String, String> + Send + Sync>;

pub struct Check {
    pub name: &'static str,
    pub run: CheckFn,
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub results: Vec<CheckResult>,
}

impl SuiteReport {
    pub fn all_passed(&self) -> bool {
        self.results.iter().all(|r| r.passed)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for r in &self.results {
            let tag = if r.passed { "PASS" } else { "FAIL" };
            out.push_str(&format!("{tag}  {:<34} {}\n", r.name, r.detail));
        }
        let failed = self.results.iter().filter(|r| !r.passed).count();
        out.push_str(&format!("{} checks, {failed} failed\n", self.results.len()));
        out
    }
}

pub fn run_suite(checks: &[Check]) -> SuiteReport {
    SuiteReport {
        results: checks
            .iter()
            .map(|c| {
                let (passed, detail) = match (c.run)() {
                    Ok(d) => (true, d),
                    Err(d) => (false, d),
                };
                CheckResult {
                    name: c.name,
                    passed,
                    detail,
                }
            })
            .collect(),
    }
}

fn core<T>(r: vorticity_core::Result<T>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn thetas() -> impl Iterator<Item = f64> {
    (0..64).map(|j| -3.0 + 0.1 * j as f64)
}

/// `Π² = Π`, `Πᵀ = Π` and `Tr Π = 1` for the given projector builder.
pub fn projector_check(projector: impl Fn(f64) -> Mat2 + Send + Sync + 'static) -> Check {
    Check {
        name: "compression projector",
        run: Box::new(move || {
            let mut worst = 0.0f64;
            for t in thetas() {
                let m = projector(t);
                let r = (m * m - m)
                    .abs()
                    .max()
                    .max((m - m.transpose()).abs().max())
                    .max((m.trace() - 1.0).abs());
                worst = worst.max(r);
            }
            if worst <= 1e-12 {
                Ok(format!("max residual {worst:.2e}"))
            } else {
                Err(format!(
                    "Pi^2 = Pi violated: max residual {worst:.3e} > 1e-12"
                ))
            }
        }),
    }
}

fn closed_form_check() -> Check {
    Check {
        name: "compressed spin closed forms",
        run: Box::new(|| {
            let worst = thetas()
                .map(|t| CompressionProjector::new(t).closed_form_residual())
                .fold(0.0, f64::max);
            if worst <= 1e-12 {
                Ok(format!("max residual {worst:.2e}"))
            } else {
                Err(format!("max residual {worst:.3e} > 1e-12"))
            }
        }),
    }
}

fn basis_check() -> Check {
    Check {
        name: "conjugated bases stay orthonormal",
        run: Box::new(|| {
            for j in 0..8 {
                let s = 0.7 * j as f64 + 0.1;
                for p in [OrthogonalMap::rotation(s), OrthogonalMap::reflection(s)] {
                    let b = BasisArray::delta().conjugate(&p);
                    core(BasisArray::new(*b.elements()))?;
                    if !b.is_delta_symmetric() {
                        return Err(format!("basis at s = {s} is not delta-symmetric"));
                    }
                }
            }
            Ok("16 bases".into())
        }),
    }
}

fn prepared(
    spec: LatticeSpec,
    h: HamiltonianSpec,
    engine: EngineKind,
    d: f64,
    phi: f64,
) -> Result<(Lattice, Prepared), String> {
    let lattice = core(Lattice::build(spec))?;
    let angles = lattice.boundary_angles(d, phi);
    let p = core(Prepared::new(
        &lattice,
        &h,
        &angles,
        engine,
        &EngineOptions::default(),
    ))?;
    Ok((lattice, p))
}

/// Small fields from every engine path, shared by several checks.
fn sample_fields(betas: &[f64]) -> Result<Vec<VorticityField>, String> {
    let xy = HamiltonianSpec::xy(1.0, 2.0);
    let cases = [
        (LatticeSpec::new(4, 4, 1), xy, EngineKind::Exact),
        (
            LatticeSpec::new(3, 3, 1),
            xy.with_mode(BoundaryMode::Full),
            EngineKind::Exact,
        ),
        (LatticeSpec::new(5, 5, 1), xy, EngineKind::Block),
    ];
    let mut fields = Vec::new();
    for (spec, h, engine) in cases {
        let (lattice, p) = prepared(spec, h, engine, 1.0, 0.3)?;
        for &beta in betas {
            let state = core(p.state(beta))?;
            fields.push(core(compute_field(&lattice, &state, &BasisArray::delta()))?);
        }
    }
    Ok(fields)
}

/// `(Ω̂)² + det(Ω̂)·Id = 0` on sampled fields, using `residual` per site.
pub fn cayley_hamilton_check(
    residual: impl Fn(&VorticityMatrix) -> f64 + Send + Sync + 'static,
) -> Check {
    Check {
        name: "cayley-hamilton",
        run: Box::new(move || {
            let fields = sample_fields(&[0.5, 1.0, 2.0])?;
            let worst = fields
                .iter()
                .flat_map(|f| f.entries.iter())
                .map(|e| residual(&e.matrix))
                .fold(0.0, f64::max);
            if worst <= 1e-12 {
                Ok(format!("max residual {worst:.2e}"))
            } else {
                Err(format!(
                    "max residual {worst:.3e} > 1e-12 (sign note: a traceless 2x2 \
                     matrix satisfies X^2 + det(X) Id = 0; the form X^2 - det(X) Id \
                     is the known sign slip and fails here)"
                ))
            }
        }),
    }
}

fn max_reduced(fields: &[VorticityField]) -> f64 {
    fields.iter().map(|f| f.max_norm()).fold(0.0, f64::max)
}

fn beta_zero_check() -> Check {
    Check {
        name: "infinite temperature degeneracy",
        run: Box::new(|| {
            let worst = max_reduced(&sample_fields(&[0.0])?);
            if worst <= 1e-12 {
                Ok(format!("max |Omega-hat| {worst:.2e}"))
            } else {
                Err(format!("max |Omega-hat| {worst:.3e} > 1e-12 at beta = 0"))
            }
        }),
    }
}

fn free_boundary_check() -> Check {
    Check {
        name: "free boundary degeneracy",
        run: Box::new(|| {
            let mut fields = Vec::new();
            for (w, h, n, k) in [
                (2, 1, 1.0, 1.0),
                (2, 2, 0.7, 1.9),
                (3, 3, 1.3, 0.4),
                (4, 2, 2.0, 10.0),
            ] {
                for engine in [EngineKind::Exact, EngineKind::Block] {
                    let (lattice, p) = prepared(
                        LatticeSpec::new(w, h, 0),
                        HamiltonianSpec::xy(n, k),
                        engine,
                        0.0,
                        0.0,
                    )?;
                    for beta in [0.5, 1.0, 2.0] {
                        let state = core(p.state(beta))?;
                        fields.push(core(compute_field(&lattice, &state, &BasisArray::delta()))?);
                    }
                }
            }
            let worst = max_reduced(&fields);
            if worst <= 1e-12 {
                Ok(format!("max |Omega-hat| {worst:.2e}"))
            } else {
                Err(format!("max |Omega-hat| {worst:.3e} > 1e-12"))
            }
        }),
    }
}

fn covariance_check() -> Check {
    Check {
        name: "basis covariance",
        run: Box::new(|| {
            let xy = HamiltonianSpec::xy(1.0, 3.0);
            let mut worst = 0.0f64;
            for engine in [EngineKind::Exact, EngineKind::Block] {
                let (lattice, p) = prepared(LatticeSpec::new(4, 4, 1), xy, engine, 1.0, 0.2)?;
                let state = core(p.state(1.0))?;
                let delta = BasisArray::delta();
                let a = core(compute_field(&lattice, &state, &delta))?;
                let eps = default_threshold(&a);
                let va = core(detect_vortices(&a, eps))?;
                for j in 0..4 {
                    let s = 1.1 * j as f64 + 0.3;
                    for q in [OrthogonalMap::rotation(s), OrthogonalMap::reflection(s)] {
                        let b = core(compute_field(&lattice, &state, &delta.conjugate(&q)))?;
                        for (x, y) in a.entries.iter().zip(&b.entries) {
                            worst = worst
                                .max((y.matrix.omega - q.conjugate(&x.matrix.omega)).abs().max());
                        }
                        if core(detect_vortices(&b, eps))?.sites != va.sites {
                            return Err(format!("vortex sets differ under P(s = {s})"));
                        }
                    }
                }
            }
            if worst <= 1e-10 {
                Ok(format!("max deviation {worst:.2e}"))
            } else {
                Err(format!("max deviation {worst:.3e} > 1e-10"))
            }
        }),
    }
}

fn sector_check() -> Check {
    Check {
        name: "sector decomposition",
        run: Box::new(|| {
            let lattice = core(Lattice::build(LatticeSpec::new(3, 3, 1)))?;
            let angles = lattice.boundary_angles(1.0, 0.4);
            let spec = HamiltonianSpec::xy(1.0, 2.0).with_mode(BoundaryMode::Full);
            let full = core(GibbsState::new(
                core(build_hamiltonian(&lattice, &spec, &angles, 1 << 10))?,
                1.3,
            ))?;
            let sectors = core(sector_gibbs(
                &lattice,
                &spec,
                &angles,
                1.3,
                &SectorOptions::default(),
            ))?;
            let mut worst = 0.0f64;
            for i in lattice.interior_indices() {
                let a = core(full.reduced_density(i))?;
                let b = core(sectors.reduced_density(i))?;
                worst = worst.max((a - b).abs().max());
            }
            if worst <= 1e-10 {
                Ok(format!("max density deviation {worst:.2e}"))
            } else {
                Err(format!("max density deviation {worst:.3e} > 1e-10"))
            }
        }),
    }
}

fn ferro_check() -> Check {
    Check {
        name: "ferro/antiferro on free even lattices",
        run: Box::new(|| {
            let mut worst = 0.0f64;
            for engine in [EngineKind::Exact, EngineKind::Block] {
                for (w, h) in [(2, 2), (2, 3), (4, 2)] {
                    let lattice = core(Lattice::build(LatticeSpec::new(w, h, 0)))?;
                    let angles = lattice.boundary_angles(0.0, 0.0);
                    let r = core(ferro_antiferro_report(
                        &lattice,
                        &HamiltonianSpec::xy(1.0, 2.0),
                        &angles,
                        1.0,
                        &BasisArray::delta(),
                        engine,
                        &EngineOptions::default(),
                    ))?;
                    worst = worst.max(r.max);
                }
            }
            if worst <= 1e-10 {
                Ok(format!("max discrepancy {worst:.2e}"))
            } else {
                Err(format!("max discrepancy {worst:.3e} > 1e-10"))
            }
        }),
    }
}

fn synthetic_degree_check() -> Check {
    Check {
        name: "synthetic degree",
        run: Box::new(|| {
            let mut worst = 0.0f64;
            for n in 1..=3i64 {
                for a in [0.5, 1.0, 2.0] {
                    let field = core(synthetic_field(n, a, 32 * n as usize))?;
                    let s = core(contour_degree(&field))?.s;
                    worst = worst.max((s - n as f64).abs());
                    let w = core(winding_oracle(&field))?;
                    if w != n {
                        return Err(format!("winding {w} for n = {n}, a = {a}"));
                    }
                }
            }
            if worst <= 0.05 {
                Ok(format!("max |s - n| {worst:.4}"))
            } else {
                Err(format!("max |s - n| {worst:.4} > 0.05"))
            }
        }),
    }
}

/// Every check with the library's own implementations.
pub fn default_suite() -> Vec<Check> {
    vec![
        projector_check(|t| CompressionProjector::new(t).matrix),
        closed_form_check(),
        basis_check(),
        cayley_hamilton_check(|m| m.cayley_hamilton_residual()),
        beta_zero_check(),
        free_boundary_check(),
        covariance_check(),
        sector_check(),
        ferro_check(),
        synthetic_degree_check(),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corrupted_projector_fails() {
        let broken = projector_check(|t| 1.0001 * CompressionProjector::new(t).matrix);
        let report = run_suite(&[broken]);
        assert!(!report.all_passed());
        assert!(report.results[0].detail.contains("Pi^2 = Pi"));
    }

    #[test]
    fn sign_flipped_cayley_hamilton_fails_with_note() {
        let flipped = cayley_hamilton_check(|m| {
            let r = m.reduced;
            (r * r - r.determinant() * Mat2::identity()).abs().max()
        });
        let report = run_suite(&[flipped]);
        assert!(!report.all_passed());
        assert!(
            report.results[0].detail.contains("sign note"),
            "{}",
            report.results[0].detail
        );
    }

    #[test]
    fn default_suite_passes() {
        let report = run_suite(&default_suite());
        assert!(report.all_passed(), "{}", report.to_text());
    }
}
