//! One PASS/FAIL line per acceptance criterion.
//!
//! Criteria listed in `KNOWN_FAILURES` are computed in full and printed as
//! FAIL; the run only errors if one of them unexpectedly passes or if any
//! other criterion fails.

use std::cell::Cell;
use std::process::ExitCode;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use vorticity_core::exact::{
    build_hamiltonian, embed_site_operator, sector_gibbs, GibbsState, SectorOptions,
};
use vorticity_core::su2::{
    contour_degree, flatness_residual, synthetic_field, winding_oracle, Plaquette, Su2Element,
};
use vorticity_core::vortex::{
    default_threshold, ferro_antiferro, ferro_antiferro_report, Table1Config, Table1Report,
};
use vorticity_core::{
    compute_field, detect_vortices, BasisArray, BoundaryMode, EngineKind, EngineOptions,
    HamiltonianSpec, Lattice, LatticeSpec, Mat2, OrthogonalMap, Prepared, VorticityField,
};

const KNOWN_FAILURES: [&str; 2] = ["7", "9b"];

struct Outcome {
    id: &'static str,
    passed: bool,
    detail: String,
}

/// Largest Cayley–Hamilton residual over every field computed in the run.
struct Tracker {
    ch: Cell<f64>,
    sites: Cell<usize>,
}

impl Tracker {
    fn see(&self, field: &VorticityField) {
        for e in &field.entries {
            self.ch
                .set(self.ch.get().max(e.matrix.cayley_hamilton_residual()));
        }
        self.sites.set(self.sites.get() + field.len());
    }
}

fn field(
    lat: &Lattice,
    p: &Prepared,
    beta: f64,
    basis: &BasisArray,
    t: &Tracker,
) -> VorticityField {
    let f = compute_field(lat, &p.state(beta).unwrap(), basis).unwrap();
    t.see(&f);
    f
}

fn prepare(
    spec: LatticeSpec,
    h: HamiltonianSpec,
    engine: EngineKind,
    d: f64,
    phi: f64,
) -> (Lattice, Prepared) {
    let lat = Lattice::build(spec).unwrap();
    let angles = lat.boundary_angles(d, phi);
    let p = Prepared::new(&lat, &h, &angles, engine, &EngineOptions::default()).unwrap();
    (lat, p)
}

/// Every free and one-layer lattice whose register has at most `max` qubits.
fn small_lattices(max: usize) -> Vec<(LatticeSpec, BoundaryMode)> {
    let mut out = Vec::new();
    for w in 1..=max {
        for h in w..=max {
            if w * h <= max && w * h >= 2 {
                out.push((LatticeSpec::new(w, h, 0), BoundaryMode::Clamped));
            }
            let interior = (w.saturating_sub(2)) * (h.saturating_sub(2));
            if w >= 3 && h >= 3 && interior <= max {
                out.push((LatticeSpec::new(w, h, 1), BoundaryMode::Clamped));
            }
            if w >= 3 && h >= 3 && w * h <= max {
                out.push((LatticeSpec::new(w, h, 1), BoundaryMode::Full));
            }
        }
    }
    out
}

/// 3×4 interior, one layer, clamped: the reference instance for criteria 1 and 7.
fn reference_instance() -> (Lattice, Prepared) {
    prepare(
        LatticeSpec::new(5, 6, 1),
        HamiltonianSpec::xy(1.0, 10.0),
        EngineKind::Exact,
        1.0,
        0.0,
    )
}

fn criterion_1(t: &Tracker, reference: &(Lattice, Prepared)) -> Outcome {
    let delta = BasisArray::delta();
    let mut worst = 0.0f64;
    let lattices = small_lattices(10);
    for &(spec, mode) in &lattices {
        let (lat, p) = prepare(
            spec,
            HamiltonianSpec::xy(1.0, 2.0).with_mode(mode),
            EngineKind::Exact,
            1.0,
            0.3,
        );
        worst = worst.max(field(&lat, &p, 0.0, &delta, t).max_norm());
    }
    worst = worst.max(field(&reference.0, &reference.1, 0.0, &delta, t).max_norm());
    let (lat, p) = prepare(
        LatticeSpec::new(23, 33, 2),
        HamiltonianSpec::xy(1.0, 2.0),
        EngineKind::Block,
        1.0,
        0.0,
    );
    let block = field(&lat, &p, 0.0, &delta, t).max_norm();
    worst = worst.max(block);
    Outcome {
        id: "1",
        passed: worst <= 1e-12,
        detail: format!(
            "beta=0: max |Omega-hat| {worst:.2e} over {} exact lattices (<= 12 qubits) and block 23x33 ({block:.2e}); tol 1e-12",
            lattices.len() + 1
        ),
    }
}

fn criterion_2(t: &Tracker) -> Outcome {
    let mut worst = 0.0f64;
    for (n, k) in [(1.0, 1.0), (1.0, 2.0), (1.0, 10.0)] {
        let (lat, p) = prepare(
            LatticeSpec::new(2, 1, 0),
            HamiltonianSpec::xy(n, k),
            EngineKind::Exact,
            0.0,
            0.0,
        );
        for beta in [0.5, 1.0, 2.0] {
            worst = worst.max(field(&lat, &p, beta, &BasisArray::delta(), t).max_norm());
        }
    }
    Outcome {
        id: "2",
        passed: worst <= 1e-12,
        detail: format!("two-site free: max |Omega-hat| {worst:.2e}; tol 1e-12"),
    }
}

fn criterion_3(t: &Tracker) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut worst = 0.0f64;
    let mut count = 0;
    while count < 12 {
        let w = rng.random_range(1..=5usize);
        let h = rng.random_range(1..=5usize);
        if w * h < 2 || w * h > 12 {
            continue;
        }
        let mut spec = HamiltonianSpec::xy(rng.random_range(0.2..3.0), rng.random_range(0.2..10.0));
        spec.u = rng.random_range(-1.0..1.0);
        let beta = rng.random_range(0.1..3.0);
        let (lat, p) = prepare(LatticeSpec::new(w, h, 0), spec, EngineKind::Exact, 0.0, 0.0);
        worst = worst.max(field(&lat, &p, beta, &BasisArray::delta(), t).max_norm());
        count += 1;
    }
    Outcome {
        id: "3",
        passed: worst <= 1e-8,
        detail: format!("12 random free lattices: max |Omega-hat| {worst:.2e}; tol 1e-8"),
    }
}

fn random_orthogonal(rng: &mut ChaCha8Rng) -> OrthogonalMap {
    let s = rng.random_range(-std::f64::consts::PI..std::f64::consts::PI);
    if rng.random_bool(0.5) {
        OrthogonalMap::rotation(s)
    } else {
        OrthogonalMap::reflection(s)
    }
}

fn criterion_4(t: &Tracker) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let delta = BasisArray::delta();
    let xy = HamiltonianSpec::xy(1.0, 3.0);
    let cases = [
        prepare(LatticeSpec::new(5, 5, 1), xy, EngineKind::Exact, 1.0, 0.2),
        prepare(LatticeSpec::new(5, 5, 1), xy, EngineKind::Block, 1.0, 0.2),
        prepare(LatticeSpec::new(7, 7, 1), xy, EngineKind::Block, 2.0, 0.0),
    ];
    let mut worst = 0.0f64;
    let mut same_vortices = true;
    for (lat, p) in &cases {
        let a = field(lat, p, 1.0, &delta, t);
        let eps = default_threshold(&a);
        let va = detect_vortices(&a, eps).unwrap();
        for _ in 0..20 {
            let q = random_orthogonal(&mut rng);
            let b = field(lat, p, 1.0, &delta.conjugate(&q), t);
            for (x, y) in a.entries.iter().zip(&b.entries) {
                worst = worst.max((y.matrix.omega - q.conjugate(&x.matrix.omega)).abs().max());
            }
            same_vortices &= detect_vortices(&b, eps).unwrap().sites == va.sites;
        }
    }
    Outcome {
        id: "4",
        passed: worst <= 1e-10 && same_vortices,
        detail: format!(
            "20 random P x 3 instances, both engines: max deviation {worst:.2e} (tol 1e-10), vortex sets identical: {same_vortices}"
        ),
    }
}

fn criterion_5(t: &Tracker) -> Outcome {
    let worst = t.ch.get();
    Outcome {
        id: "5",
        passed: worst <= 1e-12,
        detail: format!(
            "(Omega-hat)^2 + det(Omega-hat) Id over {} site evaluations: max residual {worst:.2e}; tol 1e-12",
            t.sites.get()
        ),
    }
}

fn criterion_6() -> Outcome {
    let lat = Lattice::build(LatticeSpec::new(3, 4, 1)).unwrap();
    let angles = lat.boundary_angles(1.0, 0.35);
    let mut spec = HamiltonianSpec::xy(1.0, 2.0).with_mode(BoundaryMode::Full);
    spec.u = 0.3;
    spec.h = 0.2;
    let beta = 1.2;
    let full = GibbsState::new(
        build_hamiltonian(&lat, &spec, &angles, 1 << 12).unwrap(),
        beta,
    )
    .unwrap();
    let sectors = sector_gibbs(&lat, &spec, &angles, beta, &SectorOptions::default()).unwrap();
    let reg = full.register().clone();
    let interior: Vec<usize> = lat.interior_indices().collect();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let site = interior[rng.random_range(0..interior.len())];
        let m = Mat2::from_fn(|_, _| rng.random_range(-1.0..1.0));
        let direct = full
            .expectation(&embed_site_operator(&lat, &reg, site, &m).unwrap())
            .unwrap();
        let via = (sectors.reduced_density(site).unwrap() * m).trace();
        worst = worst.max((direct - via).abs());
    }
    Outcome {
        id: "6",
        passed: worst <= 1e-10,
        detail: format!(
            "1x2 interior, full mode, {} sectors: 50 observables, max deviation {worst:.2e}; tol 1e-10",
            sectors.patterns().len()
        ),
    }
}

fn criterion_7(t: &Tracker, reference: &(Lattice, Prepared)) -> (Outcome, Outcome) {
    let delta = BasisArray::delta();
    let mut free_worst = 0.0f64;
    for engine in [EngineKind::Exact, EngineKind::Block] {
        for (w, h) in [(2, 1), (2, 2), (2, 3), (4, 2), (2, 5)] {
            let lat = Lattice::build(LatticeSpec::new(w, h, 0)).unwrap();
            let angles = lat.boundary_angles(0.0, 0.0);
            for beta in [0.5, 1.0, 2.0] {
                let r = ferro_antiferro_report(
                    &lat,
                    &HamiltonianSpec::xy(1.0, 2.0),
                    &angles,
                    beta,
                    &delta,
                    engine,
                    &EngineOptions::default(),
                )
                .unwrap();
                assert!(r.asserted);
                free_worst = free_worst.max(r.max);
            }
        }
    }
    let free = Outcome {
        id: "7a",
        passed: free_worst <= 1e-10,
        detail: format!("free even lattices, both engines: max |Omega_b - Omega_-b| {free_worst:.2e}; tol 1e-10"),
    };

    let (lat, p) = reference;
    let pos = field(lat, p, 1.0, &delta, t);
    let neg = field(lat, p, -1.0, &delta, t);
    let exact = ferro_antiferro(&pos, &neg, 1.0, false).unwrap().max;
    let (blat, bp) = prepare(
        LatticeSpec::new(5, 6, 1),
        HamiltonianSpec::xy(1.0, 10.0),
        EngineKind::Block,
        1.0,
        0.0,
    );
    let bpos = field(&blat, &bp, 1.0, &delta, t);
    let bneg = field(&blat, &bp, -1.0, &delta, t);
    let block = ferro_antiferro(&bpos, &bneg, 1.0, false).unwrap().max;
    let clamped = Outcome {
        id: "7",
        passed: exact <= 1e-2,
        detail: format!(
            "clamped 3x4 interior (n=1, k=10, beta=1, d=1): exact engine discrepancy {exact:.4} (block engine {block:.2e}); tol 1e-2"
        ),
    };
    (free, clamped)
}

fn criterion_8() -> Outcome {
    let mut worst = 0.0f64;
    let mut windings = true;
    for n in 1..=3i64 {
        for a in [0.5, 1.0, 2.0] {
            let f = synthetic_field(n, a, 32 * n as usize).unwrap();
            worst = worst.max((contour_degree(&f).unwrap().s - n as f64).abs());
            windings &= winding_oracle(&f).unwrap() == n;
        }
    }
    let mut ratios = Vec::new();
    for (n, a) in [(1.0f64, 0.5), (2.0, 1.0), (3.0, 2.0)] {
        let f = move |x: f64, y: f64| {
            let t = y.atan2(x);
            Su2Element::real(a * (n * t).cos(), (n * t).sin())
        };
        let r: Vec<f64> = [0.04, 0.02, 0.01, 0.005]
            .iter()
            .map(|&h| flatness_residual(&Plaquette::sample(f, 1.0, 0.5, h)).unwrap())
            .collect();
        ratios.extend(r.windows(2).map(|w| w[0] / w[1]));
    }
    let lo = ratios.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = ratios.iter().cloned().fold(0.0, f64::max);
    Outcome {
        id: "8",
        passed: worst <= 0.05 && windings && lo >= 3.0 && hi <= 5.0,
        detail: format!(
            "synthetic n=1..3, a in {{0.5,1,2}}: max |s-n| {worst:.4} (tol 0.05), winding exact: {windings}; flatness ratios in [{lo:.3}, {hi:.3}] (need [3,5])"
        ),
    }
}

fn criterion_9(report: &Table1Report) -> (Outcome, Outcome) {
    let mut worst = 0.0f64;
    let mut missing = 0;
    for r in report.rows.iter().filter(|r| r.depth == 1) {
        match r.abs_error {
            Some(e) => worst = worst.max(e),
            None => missing += 1,
        }
    }
    let depth1 = Outcome {
        id: "9a",
        passed: missing == 0 && worst <= 0.35,
        detail: format!(
            "convention {}: max depth-1 | |s| - D | {worst:.3} over k in {{2,10}}, D in {{1,2,3}} ({missing} rings failed); tol 0.35",
            report.convention.as_str()
        ),
    };
    let broken: Vec<String> = report
        .ordering
        .iter()
        .filter(|o| !o.holds)
        .map(|o| {
            format!(
                "k={} D={}: depth-2 {:.3} < depth-1 {:.3}",
                o.k,
                o.given_degree,
                o.depth2_error.unwrap_or(f64::NAN),
                o.depth1_error.unwrap_or(f64::NAN)
            )
        })
        .collect();
    let ordering = Outcome {
        id: "9b",
        passed: broken.is_empty() && !report.ordering.is_empty(),
        detail: if broken.is_empty() {
            format!(
                "depth-2 error >= depth-1 error in all {} cases",
                report.ordering.len()
            )
        } else {
            format!("ordering broken: {}", broken.join("; "))
        },
    };
    (depth1, ordering)
}

fn run_twice<T: PartialEq>(f: impl Fn() -> T) -> bool {
    f() == f()
}

fn criterion_10(report: &Table1Report) -> Outcome {
    use vorticity_cli::commands::{self, SimulateOptions};
    use vorticity_cli::render::render_svg;
    use vorticity_cli::RunConfig;

    let tmp = tempfile::tempdir().unwrap();
    let config = RunConfig::from_json(
        r#"{"lattice": {"total_width": 5, "total_height": 5, "boundary_layers": 1},
            "engine": "exact", "n": 1, "k": 2, "betas": [0.5, 1.0], "d": 1, "phi": 0.1,
            "basis": {"kind": "reflected", "s": 0.9}, "seed": 42}"#,
    )
    .unwrap();
    let simulate_bytes = |name: &str| {
        let dir = tmp.path().join(name);
        let out = commands::simulate(
            &config,
            &SimulateOptions {
                out: Some(dir.clone()),
                engine: None,
                jobs: Some(2),
                record_timings: false,
            },
        )
        .unwrap();
        let svg = render_svg(&out.fields[1], None, None);
        let mut files: Vec<(String, Vec<u8>)> = std::fs::read_dir(&dir)
            .unwrap()
            .map(|e| e.unwrap().path())
            .map(|p| {
                (
                    p.file_name().unwrap().to_string_lossy().into_owned(),
                    std::fs::read(&p).unwrap(),
                )
            })
            .collect();
        files.sort();
        (files, svg)
    };
    let a = simulate_bytes("a");
    let b = simulate_bytes("b");
    let simulate_same = a == b;
    let table_same = run_twice(|| {
        (
            report.to_text(),
            commands::table1_csv(report),
            serde_json::to_string(report).unwrap(),
        )
    });
    Outcome {
        id: "10",
        passed: simulate_same && table_same && a.0.len() == 6,
        detail: format!(
            "simulate x2 ({} files + svg) identical: {simulate_same}; table1 reports identical: {table_same}",
            a.0.len()
        ),
    }
}

fn main() -> ExitCode {
    let start = Instant::now();
    let t = Tracker {
        ch: Cell::new(0.0),
        sites: Cell::new(0),
    };
    let reference = reference_instance();
    let mut outcomes = vec![
        criterion_1(&t, &reference),
        criterion_2(&t),
        criterion_3(&t),
        criterion_4(&t),
        criterion_6(),
    ];
    let (free, clamped) = criterion_7(&t, &reference);
    outcomes.push(free);
    outcomes.push(clamped);
    outcomes.push(criterion_8());
    let report = vorticity_cli::commands::table1_report(&Table1Config::default(), None).unwrap();
    for p in report.scan.iter().chain(&report.controls) {
        assert!(
            p.rings.iter().all(|r| r.s.is_some_and(f64::is_finite)),
            "k={} d={}",
            p.k,
            p.d
        );
    }
    let (depth1, ordering) = criterion_9(&report);
    outcomes.push(depth1);
    outcomes.push(ordering);
    outcomes.push(criterion_10(&report));
    outcomes.push(criterion_5(&t));
    outcomes.sort_by_key(|o| {
        let digits: String = o.id.chars().take_while(|c| c.is_ascii_digit()).collect();
        (digits.parse::<u32>().unwrap(), o.id.to_string())
    });

    println!();
    print!("{}", report.to_text());
    println!();
    let mut unexpected = Vec::new();
    for o in &outcomes {
        let known = KNOWN_FAILURES.contains(&o.id);
        let tag = if o.passed { "PASS" } else { "FAIL" };
        let note = if known { "  [known failure]" } else { "" };
        println!("{tag} {:<3} {}{note}", o.id, o.detail);
        if o.passed == known {
            unexpected.push(o.id);
        }
    }
    println!(
        "acceptance finished in {:.1} s",
        start.elapsed().as_secs_f64()
    );
    if unexpected.is_empty() {
        ExitCode::SUCCESS
    } else {
        println!("unexpected outcome for criteria {unexpected:?}");
        ExitCode::FAILURE
    }
}
