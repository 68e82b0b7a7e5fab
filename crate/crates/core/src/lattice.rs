//! Rectangular lattice geometry.
//!
//! Sites are integer points `(x, y)` with `0 <= x < total_width` and
//! `0 <= y < total_height`, `y` pointing "north". The outermost
//! `boundary_layers` rings form the boundary, everything else is interior.
//!
//! Site order is row-major (`index = y * total_width + x`). This order is the
//! single source of truth for tensor-factor order in the exact engine, for the
//! site blocks of the block engine and for every file written downstream.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeSpec {
    pub total_width: usize,
    pub total_height: usize,
    pub boundary_layers: usize,
}

impl LatticeSpec {
    pub fn new(total_width: usize, total_height: usize, boundary_layers: usize) -> Self {
        Self {
            total_width,
            total_height,
            boundary_layers,
        }
    }

    pub fn interior_width(&self) -> Option<usize> {
        self.total_width
            .checked_sub(2 * self.boundary_layers)
            .filter(|w| *w >= 1)
    }

    pub fn interior_height(&self) -> Option<usize> {
        self.total_height
            .checked_sub(2 * self.boundary_layers)
            .filter(|h| *h >= 1)
    }

    pub fn validate(&self) -> Result<()> {
        match (self.interior_width(), self.interior_height()) {
            (Some(_), Some(_)) => Ok(()),
            _ => Err(Error::EmptyInterior {
                width: self.total_width,
                height: self.total_height,
                layers: self.boundary_layers,
            }),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Site {
    pub x: i64,
    pub y: i64,
}

impl Site {
    pub const fn new(x: i64, y: i64) -> Self {
        Self { x, y }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SiteRole {
    Interior,
    Boundary,
}

impl SiteRole {
    pub fn as_str(self) -> &'static str {
        match self {
            SiteRole::Interior => "interior",
            SiteRole::Boundary => "boundary",
        }
    }
}

impl std::str::FromStr for SiteRole {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "interior" => Ok(SiteRole::Interior),
            "boundary" => Ok(SiteRole::Boundary),
            other => Err(Error::Parse(format!("unknown site role `{other}`"))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Lattice {
    spec: LatticeSpec,
    sites: Vec<Site>,
    roles: Vec<SiteRole>,
    nn_pairs: Vec<(usize, usize)>,
    center: (f64, f64),
}

impl Lattice {
    pub fn build(spec: LatticeSpec) -> Result<Self> {
        spec.validate()?;
        let (w, h, l) = (spec.total_width, spec.total_height, spec.boundary_layers);
        let mut sites = Vec::with_capacity(w * h);
        let mut roles = Vec::with_capacity(w * h);
        for y in 0..h {
            for x in 0..w {
                sites.push(Site::new(x as i64, y as i64));
                let boundary = x < l || y < l || x >= w - l || y >= h - l;
                roles.push(if boundary {
                    SiteRole::Boundary
                } else {
                    SiteRole::Interior
                });
            }
        }
        // each pair emitted once, lower index first
        let mut nn_pairs = Vec::with_capacity(2 * w * h);
        for y in 0..h {
            for x in 0..w {
                let i = y * w + x;
                if x + 1 < w {
                    nn_pairs.push((i, i + 1));
                }
                if y + 1 < h {
                    nn_pairs.push((i, i + w));
                }
            }
        }
        let center = ((w as f64 - 1.0) / 2.0, (h as f64 - 1.0) / 2.0);
        Ok(Self {
            spec,
            sites,
            roles,
            nn_pairs,
            center,
        })
    }

    pub fn spec(&self) -> LatticeSpec {
        self.spec
    }

    pub fn len(&self) -> usize {
        self.sites.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sites.is_empty()
    }

    pub fn sites(&self) -> &[Site] {
        &self.sites
    }

    pub fn site(&self, index: usize) -> Site {
        self.sites[index]
    }

    pub fn role(&self, index: usize) -> SiteRole {
        self.roles[index]
    }

    pub fn roles(&self) -> &[SiteRole] {
        &self.roles
    }

    pub fn is_boundary(&self, index: usize) -> bool {
        self.roles[index] == SiteRole::Boundary
    }

    pub fn nn_pairs(&self) -> &[(usize, usize)] {
        &self.nn_pairs
    }

    pub fn center(&self) -> (f64, f64) {
        self.center
    }

    pub fn index_of(&self, site: Site) -> Option<usize> {
        let (w, h) = (self.spec.total_width as i64, self.spec.total_height as i64);
        if site.x < 0 || site.y < 0 || site.x >= w || site.y >= h {
            return None;
        }
        Some((site.y * w + site.x) as usize)
    }

    pub fn interior_indices(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(|&i| !self.is_boundary(i))
    }

    pub fn boundary_indices(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(|&i| self.is_boundary(i))
    }

    pub fn interior_count(&self) -> usize {
        self.interior_indices().count()
    }

    pub fn neighbors(&self, index: usize) -> impl Iterator<Item = usize> + '_ {
        self.nn_pairs.iter().filter_map(move |&(a, b)| {
            if a == index {
                Some(b)
            } else if b == index {
                Some(a)
            } else {
                None
            }
        })
    }

    /// Polar angle of `site` about the geometric center, in `(-pi, pi]`.
    pub fn polar_angle(&self, site: Site) -> Result<f64> {
        let dx = site.x as f64 - self.center.0;
        let dy = site.y as f64 - self.center.1;
        if dx == 0.0 && dy == 0.0 {
            return Err(Error::SiteAtCenter(site));
        }
        let angle = dy.atan2(dx);
        Ok(if angle <= -PI {
            angle + 2.0 * PI
        } else {
            angle
        })
    }

    /// Boundary compression angles `theta_j = d * omega_j + phi`.
    pub fn boundary_angles(&self, d: f64, phi: f64) -> BoundaryAngles {
        let theta = (0..self.len())
            .map(|i| {
                if self.is_boundary(i) {
                    // boundary sites of a rectangle never sit on the center
                    let omega = self.polar_angle(self.sites[i]).unwrap_or(0.0);
                    Some(d * omega + phi)
                } else {
                    None
                }
            })
            .collect();
        BoundaryAngles { d, phi, theta }
    }

    /// The closed rectangular cycle of interior sites at distance `depth`
    /// from the boundary (depth 1 = the interior's outermost ring).
    pub fn ring_contour(&self, depth: usize) -> Result<Contour> {
        let l = self.spec.boundary_layers as i64;
        let x0 = l;
        let y0 = l;
        let x1 = self.spec.total_width as i64 - 1 - l;
        let y1 = self.spec.total_height as i64 - 1 - l;
        let ring = Contour::ring(x0, y0, x1, y1, depth)?;
        Ok(Contour {
            sites: ring.sites,
            depth: Some(depth),
        })
    }

    pub fn to_description(&self, angles: Option<&BoundaryAngles>) -> LatticeDescription {
        let sites = (0..self.len())
            .map(|i| SiteRecord {
                x: self.sites[i].x,
                y: self.sites[i].y,
                role: self.roles[i],
                theta: angles.and_then(|a| a.theta(i)),
            })
            .collect();
        LatticeDescription {
            spec: self.spec,
            center: [self.center.0, self.center.1],
            d: angles.map(|a| a.d),
            phi: angles.map(|a| a.phi),
            sites,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BoundaryAngles {
    pub d: f64,
    pub phi: f64,
    theta: Vec<Option<f64>>,
}

impl BoundaryAngles {
    pub fn theta(&self, index: usize) -> Option<f64> {
        self.theta.get(index).copied().flatten()
    }

    /// `(site index, theta)` for every boundary site, in site order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.theta
            .iter()
            .enumerate()
            .filter_map(|(i, t)| t.map(|t| (i, t)))
    }
}

/// A closed cycle of lattice sites; the last site connects back to the first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Contour {
    pub sites: Vec<Site>,
    pub depth: Option<usize>,
}

impl Contour {
    /// Counterclockwise ring inset by `depth - 1` inside the rectangle
    /// `[x0, x1] x [y0, y1]`, starting at its lower-left corner.
    pub fn ring(x0: i64, y0: i64, x1: i64, y1: i64, depth: usize) -> Result<Self> {
        let extent = (x1 - x0).min(y1 - y0);
        // a simple cycle needs at least a 2x2 rectangle
        let max = if extent < 1 {
            0
        } else {
            (extent as usize).div_ceil(2)
        };
        if depth == 0 || depth > max {
            return Err(Error::DepthOutOfRange { depth, max });
        }
        let inset = depth as i64 - 1;
        let (x0, y0, x1, y1) = (x0 + inset, y0 + inset, x1 - inset, y1 - inset);
        if x1 <= x0 || y1 <= y0 {
            return Err(Error::DepthOutOfRange { depth, max });
        }
        let mut sites = Vec::with_capacity(2 * ((x1 - x0) + (y1 - y0)) as usize);
        for x in x0..x1 {
            sites.push(Site::new(x, y0));
        }
        for y in y0..y1 {
            sites.push(Site::new(x1, y));
        }
        for x in (x0 + 1..=x1).rev() {
            sites.push(Site::new(x, y1));
        }
        for y in (y0 + 1..=y1).rev() {
            sites.push(Site::new(x0, y));
        }
        Ok(Self {
            sites,
            depth: Some(depth),
        })
    }

    pub fn len(&self) -> usize {
        self.sites.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sites.is_empty()
    }

    pub fn reversed(&self) -> Self {
        let mut sites = self.sites.clone();
        sites.reverse();
        Self {
            sites,
            depth: self.depth,
        }
    }

    pub fn rotated(&self, start: usize) -> Self {
        let mut sites = self.sites.clone();
        if !sites.is_empty() {
            let k = start % sites.len();
            sites.rotate_left(k);
        }
        Self {
            sites,
            depth: self.depth,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SiteRecord {
    pub x: i64,
    pub y: i64,
    pub role: SiteRole,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub theta: Option<f64>,
}

/// JSON form of a lattice with its boundary-angle table.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LatticeDescription {
    pub spec: LatticeSpec,
    pub center: [f64; 2],
    pub d: Option<f64>,
    pub phi: Option<f64>,
    pub sites: Vec<SiteRecord>,
}

#[cfg(test)]
mod tests {
    use std::collections::HashSet;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

    use approx::assert_abs_diff_eq;

    use super::*;

    fn lattice(w: usize, h: usize, l: usize) -> Lattice {
        Lattice::build(LatticeSpec::new(w, h, l)).unwrap()
    }

    #[test]
    fn five_by_five_counts() {
        let lat = lattice(5, 5, 1);
        assert_eq!(lat.len(), 25);
        assert_eq!(lat.interior_count(), 9);
        assert_eq!(lat.boundary_indices().count(), 16);
        assert_eq!(lat.nn_pairs().len(), 40);
    }

    #[test]
    fn table_lattice_interior() {
        let lat = lattice(23, 33, 2);
        assert_eq!(lat.interior_count(), 19 * 29);
        assert_eq!(lat.interior_count(), 551);
    }

    #[test]
    fn three_by_three_single_interior() {
        let lat = lattice(3, 3, 1);
        assert_eq!(lat.interior_count(), 1);
        assert_eq!(lat.boundary_indices().count(), 8);
        assert_eq!(lat.interior_indices().next(), lat.index_of(Site::new(1, 1)));
    }

    #[test]
    fn empty_interior_rejected() {
        assert!(matches!(
            Lattice::build(LatticeSpec::new(4, 6, 2)),
            Err(Error::EmptyInterior { .. })
        ));
        assert!(Lattice::build(LatticeSpec::new(2, 2, 0)).is_ok());
    }

    #[test]
    fn degrees_and_pairs() {
        let lat = lattice(6, 4, 1);
        let mut degree = vec![0usize; lat.len()];
        let mut seen = HashSet::new();
        for &(a, b) in lat.nn_pairs() {
            let (sa, sb) = (lat.site(a), lat.site(b));
            assert_eq!((sa.x - sb.x).abs() + (sa.y - sb.y).abs(), 1);
            assert!(seen.insert((a.min(b), a.max(b))));
            degree[a] += 1;
            degree[b] += 1;
        }
        assert_eq!(degree.iter().sum::<usize>(), 2 * lat.nn_pairs().len());
        for (i, s) in lat.sites().iter().enumerate() {
            let on_x = s.x == 0 || s.x == 5;
            let on_y = s.y == 0 || s.y == 3;
            let expected = match (on_x, on_y) {
                (true, true) => 2,
                (true, false) | (false, true) => 3,
                _ => 4,
            };
            assert_eq!(degree[i], expected, "site {s:?}");
        }
    }

    #[test]
    fn polar_angle_axes() {
        let lat = lattice(5, 5, 1);
        assert_abs_diff_eq!(lat.polar_angle(Site::new(4, 2)).unwrap(), 0.0);
        assert_abs_diff_eq!(lat.polar_angle(Site::new(2, 4)).unwrap(), FRAC_PI_2);
        assert_abs_diff_eq!(lat.polar_angle(Site::new(0, 2)).unwrap(), PI);
        assert!(matches!(
            lat.polar_angle(Site::new(2, 2)),
            Err(Error::SiteAtCenter(_))
        ));
    }

    #[test]
    fn boundary_angle_formula() {
        let lat = lattice(5, 5, 1);
        let constant = lat.boundary_angles(0.0, FRAC_PI_4);
        for (_, t) in constant.iter() {
            assert_eq!(t, FRAC_PI_4);
        }
        assert_eq!(constant.iter().count(), 16);
        let east = lat.index_of(Site::new(4, 2)).unwrap();
        assert_eq!(lat.boundary_angles(1.0, 0.0).theta(east), Some(0.0));
        let north = lat.index_of(Site::new(2, 4)).unwrap();
        assert_abs_diff_eq!(
            lat.boundary_angles(2.0, 0.1).theta(north).unwrap(),
            PI + 0.1,
            epsilon = 1e-15
        );
        assert_eq!(constant.theta(lat.index_of(Site::new(2, 2)).unwrap()), None);
    }

    #[test]
    fn rings() {
        let lat = lattice(5, 5, 1);
        let ring = lat.ring_contour(1).unwrap();
        assert_eq!(ring.len(), 8);
        assert!(ring.sites.iter().all(|&s| s != Site::new(2, 2)));

        let ring2 = lattice(7, 7, 1).ring_contour(2).unwrap();
        assert_eq!(ring2.len(), 8);
        assert!(!ring2.sites.contains(&Site::new(3, 3)));

        assert_eq!(
            lattice(23, 33, 2).ring_contour(1).unwrap().len(),
            2 * (19 + 29) - 4
        );
        assert!(matches!(
            lat.ring_contour(2),
            Err(Error::DepthOutOfRange { .. })
        ));
        assert!(lat.ring_contour(0).is_err());
    }

    #[test]
    fn ring_is_simple_nn_cycle_of_interior_sites() {
        let lat = lattice(23, 33, 2);
        for depth in 1..=9 {
            let ring = lat.ring_contour(depth).unwrap();
            let w = 19 - 2 * (depth - 1);
            let h = 29 - 2 * (depth - 1);
            assert_eq!(ring.len(), 2 * (w + h) - 4);
            let unique: HashSet<_> = ring.sites.iter().collect();
            assert_eq!(unique.len(), ring.len());
            for t in 0..ring.len() {
                let (a, b) = (ring.sites[t], ring.sites[(t + 1) % ring.len()]);
                assert_eq!((a.x - b.x).abs() + (a.y - b.y).abs(), 1);
                assert!(!lat.is_boundary(lat.index_of(a).unwrap()));
            }
        }
        assert!(lat.ring_contour(10).is_err());
    }

    proptest::proptest! {
        #[test]
        fn phi_shift_is_equivariant(d in -3.0f64..3.0, phi in -3.0f64..3.0, shift in -2.0f64..2.0) {
            let lat = lattice(7, 6, 2);
            let a = lat.boundary_angles(d, phi);
            let b = lat.boundary_angles(d, phi + shift);
            for ((i, ta), (j, tb)) in a.iter().zip(b.iter()) {
                proptest::prop_assert_eq!(i, j);
                proptest::prop_assert!((tb - ta - shift).abs() < 1e-12);
            }
        }
    }
}
