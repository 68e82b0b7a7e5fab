use vorticity_core::su2::{
    contour_degree, flatness_residual, synthetic_field, Plaquette, Su2Element,
};
use vorticity_core::vortex::lattice_degree;
use vorticity_core::{
    compute_field, BasisArray, EngineKind, EngineOptions, Error, HamiltonianSpec, Lattice,
    LatticeSpec, Prepared,
};

#[test]
fn synthetic_fields_reach_their_degree() {
    for n in 1..=3i64 {
        for a in [0.5, 1.0, 2.0] {
            let f = synthetic_field(n, a, 32 * n as usize).unwrap();
            let r = contour_degree(&f).unwrap();
            assert!((r.s - n as f64).abs() <= 0.05, "n={n} a={a}: {}", r.s);
            assert_eq!(r.winding, Some(n));
        }
    }
}

#[test]
fn flatness_refines_quadratically() {
    for (n, a) in [(1.0f64, 0.5), (2.0, 2.0), (3.0, 1.5)] {
        let field = move |x: f64, y: f64| {
            let t = y.atan2(x);
            Su2Element::real(a * (n * t).cos(), (n * t).sin())
        };
        let r: Vec<f64> = [0.02, 0.01, 0.005]
            .iter()
            .map(|&h| flatness_residual(&Plaquette::sample(field, 1.0, 0.5, h)).unwrap())
            .collect();
        for w in r.windows(2) {
            let ratio = w[0] / w[1];
            assert!((3.0..=5.0).contains(&ratio), "n={n} a={a}: {ratio}");
        }
    }
}

#[test]
fn infinite_temperature_contour_is_singular() {
    let lat = Lattice::build(LatticeSpec::new(7, 7, 1)).unwrap();
    let angles = lat.boundary_angles(1.0, 0.0);
    let p = Prepared::new(
        &lat,
        &HamiltonianSpec::xy(1.0, 2.0),
        &angles,
        EngineKind::Block,
        &EngineOptions::default(),
    )
    .unwrap();
    let field = compute_field(&lat, &p.state(0.0).unwrap(), &BasisArray::delta()).unwrap();
    let ring = lat.ring_contour(1).unwrap();
    assert!(matches!(
        lattice_degree(&field, &ring),
        Err(Error::VortexOnContour { .. })
    ));
}

#[test]
fn block_ring_degree_is_rotation_invariant() {
    let lat = Lattice::build(LatticeSpec::new(9, 11, 2)).unwrap();
    let angles = lat.boundary_angles(1.0, 0.0);
    let p = Prepared::new(
        &lat,
        &HamiltonianSpec::xy(1.0, 10.0),
        &angles,
        EngineKind::Block,
        &EngineOptions::default(),
    )
    .unwrap();
    let field = compute_field(&lat, &p.state(1.0).unwrap(), &BasisArray::delta()).unwrap();
    let ring = lat.ring_contour(1).unwrap();
    let r = lattice_degree(&field, &ring).unwrap();
    for start in [1, 5, ring.len() - 1] {
        let q = lattice_degree(&field, &ring.rotated(start)).unwrap();
        assert!((q.s - r.s).abs() <= 1e-10);
        assert_eq!(q.winding, r.winding);
    }
}
