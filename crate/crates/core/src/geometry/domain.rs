//! Implicit descriptions of the ball, shell and perturbed ball-and-shell family.
//!
//! Every domain contains the unit ball and is contained in the ball of radius
//! `outer + 1`. Only the [`Fournais`] variant carries a zero-thickness wall: the
//! unit sphere minus the rooms, reported through [`DomainSpec::severs`].

use std::f64::consts::FRAC_PI_2;

use crate::error::{invalid, Error, Result};
use crate::oracles::choose_r_window;
use crate::vec3::{direction, dist, dot, norm, scale, sub, Vec3};

use super::points::{epsilon_upper_bound, SpherePointSet};
use super::sphere_mesh::CubeSphere;
use super::web::SheetWeb;

/// Radius of the inner ball; the whole family is normalized to it.
pub const INNER_RADIUS: f64 = 1.0;

/// Largest cube-sphere edge resolution used for hole labelling.
pub const MAX_MESH_PER_EDGE: usize = 1024;

#[derive(Clone, Debug, PartialEq)]
pub struct Ball {
    pub radius: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Shell {
    pub inner: f64,
    pub outer: f64,
}

/// Inner ball and outer shell joined through small balls around the centers.
#[derive(Clone, Debug, PartialEq)]
pub struct Fournais {
    points: SpherePointSet,
    epsilon: f64,
    outer: f64,
}

/// The wall thickened to `1/n`, pierced by radial passages over the rooms.
#[derive(Clone, Debug, PartialEq)]
pub struct Passage {
    base: Fournais,
    n: u32,
}

/// A passage domain with a thickened sheet web added across the wall layer.
#[derive(Clone, Debug, PartialEq)]
pub struct Sheet {
    base: Passage,
    m: u32,
    web: SheetWeb,
    holes: usize,
    mesh_per_edge: usize,
}

/// A sheet domain with one radial pole drilled from every hole to the outside.
#[derive(Clone, Debug, PartialEq)]
pub struct Pole {
    base: Sheet,
    l: u32,
    directions: Vec<Vec3>,
    clearance: f64,
    mesh_per_edge: usize,
}

/// Gaussian-mollified dilation of a base domain.
#[derive(Clone, Debug, PartialEq)]
pub struct Smoothed {
    base: Box<DomainSpec>,
    delta: f64,
    width: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub enum DomainSpec {
    Ball(Ball),
    Shell(Shell),
    Fournais(Fournais),
    Passage(Passage),
    Sheet(Sheet),
    Pole(Pole),
    Smoothed(Smoothed),
}

fn slab(r: f64, lo: f64, hi: f64) -> f64 {
    (lo - r).max(r - hi)
}

/// Distance estimate to a segment `{t * dir : t in [a, b]}`.
fn segment_distance(x: &Vec3, dir: &Vec3, a: f64, b: f64) -> f64 {
    let t = dot(x, dir).clamp(a, b);
    dist(x, &scale(dir, t))
}

/// Signed distance estimate to the cone of directions within chord `epsilon` of `z`.
fn cone_distance(x: &Vec3, z: &Vec3, epsilon: f64) -> f64 {
    let r = norm(x);
    if r == 0.0 {
        return 0.0;
    }
    let angle = (dot(x, z) / r).clamp(-1.0, 1.0).acos();
    let opening = 2.0 * (0.5 * epsilon).asin();
    let gap = angle - opening;
    if gap >= FRAC_PI_2 {
        r
    } else {
        r * gap.sin()
    }
}

impl Ball {
    pub fn new(radius: f64) -> Result<Self> {
        if !(radius > 0.0) {
            return Err(invalid("ball radius must be positive"));
        }
        Ok(Self { radius })
    }
}

impl Shell {
    pub fn new(inner: f64, outer: f64) -> Result<Self> {
        if !(inner > 0.0 && inner < outer) {
            return Err(invalid("shell radii must satisfy 0 < inner < outer"));
        }
        Ok(Self { inner, outer })
    }
}

impl Fournais {
    pub fn points(&self) -> &SpherePointSet {
        &self.points
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn outer(&self) -> f64 {
        self.outer
    }

    /// Whether a unit direction lies in a room of the wall.
    pub fn in_room(&self, theta: &Vec3) -> bool {
        self.points.nearest_distance(theta) < self.epsilon
    }

    pub fn contains(&self, x: &Vec3) -> bool {
        let r = norm(x);
        r < INNER_RADIUS || (r > INNER_RADIUS && r < self.outer) || self.in_room(x)
    }

    /// Whether the segment `p -> q` crosses the wall outside every room.
    pub fn severs(&self, p: &Vec3, q: &Vec3) -> bool {
        let d = sub(q, p);
        let a = dot(&d, &d);
        let b = 2.0 * dot(p, &d);
        let c = dot(p, p) - INNER_RADIUS * INNER_RADIUS;
        let disc = b * b - 4.0 * a * c;
        if a == 0.0 || disc < 0.0 {
            return false;
        }
        let sq = disc.sqrt();
        for t in [(-b - sq) / (2.0 * a), (-b + sq) / (2.0 * a)] {
            if (0.0..=1.0).contains(&t) {
                let hit = [p[0] + t * d[0], p[1] + t * d[1], p[2] + t * d[2]];
                if !self.in_room(&hit) {
                    return true;
                }
            }
        }
        false
    }

    fn signed_distance(&self, x: &Vec3) -> f64 {
        let r = norm(x);
        let rooms = self
            .points
            .centers()
            .iter()
            .map(|z| dist(x, z) - self.epsilon)
            .fold(f64::INFINITY, f64::min);
        (r - INNER_RADIUS).min(slab(r, INNER_RADIUS, self.outer)).min(rooms)
    }

    fn room_cone_distance(&self, x: &Vec3) -> f64 {
        self.points
            .centers()
            .iter()
            .map(|z| cone_distance(x, z, self.epsilon))
            .fold(f64::INFINITY, f64::min)
    }
}

impl Passage {
    pub fn base(&self) -> &Fournais {
        &self.base
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// Outer radius of the wall layer.
    pub fn wall_top(&self) -> f64 {
        INNER_RADIUS + 1.0 / self.n as f64
    }

    pub fn contains(&self, x: &Vec3) -> bool {
        let r = norm(x);
        let top = self.wall_top();
        r < INNER_RADIUS
            || (r > top && r < self.base.outer)
            || (r >= INNER_RADIUS && r <= top && self.base.in_room(&direction(x)))
    }

    fn signed_distance(&self, x: &Vec3) -> f64 {
        let r = norm(x);
        let top = self.wall_top();
        let passages = slab(r, INNER_RADIUS, top).max(self.base.room_cone_distance(x));
        (r - INNER_RADIUS).min(slab(r, top, self.base.outer)).min(passages)
    }
}

impl Sheet {
    pub fn base(&self) -> &Passage {
        &self.base
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn web(&self) -> &SheetWeb {
        &self.web
    }

    /// Number of connected pieces of the sphere left free by rooms and sheets.
    pub fn hole_count(&self) -> usize {
        self.holes
    }

    pub fn mesh_per_edge(&self) -> usize {
        self.mesh_per_edge
    }

    pub fn fournais(&self) -> &Fournais {
        &self.base.base
    }

    /// Whether a unit direction belongs to the sphere's free region (a hole cross-section).
    pub fn is_free_direction(&self, theta: &Vec3) -> bool {
        !self.base.base.in_room(theta) && !self.web.covers(theta)
    }

    /// Distance from a free direction to the edge of its piece.
    pub fn clearance(&self, theta: &Vec3) -> f64 {
        let f = &self.base.base;
        (f.points.nearest_distance(theta) - f.epsilon).min(self.web.distance(theta) - self.web.half_width())
    }

    pub fn contains(&self, x: &Vec3) -> bool {
        if self.base.contains(x) {
            return true;
        }
        let r = norm(x);
        r >= INNER_RADIUS && r <= self.base.wall_top() && self.web.covers(&direction(x))
    }

    fn signed_distance(&self, x: &Vec3) -> f64 {
        let r = norm(x);
        let web = r * (self.web.distance(&direction(x)) - self.web.half_width());
        let sheets = slab(r, INNER_RADIUS, self.base.wall_top()).max(web);
        self.base.signed_distance(x).min(sheets)
    }
}

impl Pole {
    pub fn base(&self) -> &Sheet {
        &self.base
    }

    pub fn l(&self) -> u32 {
        self.l
    }

    pub fn directions(&self) -> &[Vec3] {
        &self.directions
    }

    /// Smallest distance from a pole direction to the edge of its hole.
    pub fn clearance(&self) -> f64 {
        self.clearance
    }

    pub fn mesh_per_edge(&self) -> usize {
        self.mesh_per_edge
    }

    pub fn pole_radius(&self) -> f64 {
        1.0 / self.l as f64
    }

    fn pole_distance(&self, x: &Vec3) -> f64 {
        let a = self.base.base.wall_top();
        let b = self.base.base.base.outer;
        self.directions
            .iter()
            .map(|d| segment_distance(x, d, a, b))
            .fold(f64::INFINITY, f64::min)
    }

    pub fn contains(&self, x: &Vec3) -> bool {
        self.base.contains(x) && self.pole_distance(x) > self.pole_radius()
    }

    fn signed_distance(&self, x: &Vec3) -> f64 {
        self.base.signed_distance(x).max(self.pole_radius() - self.pole_distance(x))
    }

    /// Half the smallest feature: a stand-in for the dilation radius below which
    /// the topology is kept.
    pub fn delta_limit(&self) -> f64 {
        let sheet = &self.base;
        0.5 * (1.0 / self.l as f64)
            .min(sheet.web.half_width())
            .min(1.0 / sheet.base.n as f64)
    }
}

/// Three-point Gauss-Hermite rule per axis.
const HERMITE_WEIGHTS: [f64; 3] = [1.0 / 6.0, 2.0 / 3.0, 1.0 / 6.0];
const HERMITE_NODES: [f64; 3] = [-1.732_050_807_568_877_2, 0.0, 1.732_050_807_568_877_2];

impl Smoothed {
    pub fn base(&self) -> &DomainSpec {
        &self.base
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn width(&self) -> f64 {
        self.width
    }

    pub fn is_identity(&self) -> bool {
        self.delta == 0.0 && self.width == 0.0
    }

    /// Gaussian-weighted fraction of the neighbourhood of `x` lying in the dilation.
    pub fn mollified_indicator(&self, x: &Vec3) -> f64 {
        let sd = self.base.signed_distance(x);
        let reach = 6.0 * self.width;
        if sd < self.delta - reach {
            return 1.0;
        }
        if sd > self.delta + reach {
            return 0.0;
        }
        let mut mass = 0.0;
        for (a, wa) in HERMITE_NODES.iter().zip(HERMITE_WEIGHTS) {
            for (b, wb) in HERMITE_NODES.iter().zip(HERMITE_WEIGHTS) {
                for (c, wc) in HERMITE_NODES.iter().zip(HERMITE_WEIGHTS) {
                    let p = [
                        x[0] + a * self.width,
                        x[1] + b * self.width,
                        x[2] + c * self.width,
                    ];
                    if self.base.signed_distance(&p) < self.delta {
                        mass += wa * wb * wc;
                    }
                }
            }
        }
        mass
    }

    /// Members are the base plus every point whose mollified dilation indicator exceeds one half.
    pub fn contains(&self, x: &Vec3) -> bool {
        if self.is_identity() {
            return self.base.contains(x);
        }
        self.base.contains(x) || self.mollified_indicator(x) > 0.5
    }
}

impl DomainSpec {
    pub fn kind(&self) -> &'static str {
        match self {
            DomainSpec::Ball(_) => "ball",
            DomainSpec::Shell(_) => "shell",
            DomainSpec::Fournais(_) => "fournais",
            DomainSpec::Passage(_) => "passage",
            DomainSpec::Sheet(_) => "sheet",
            DomainSpec::Pole(_) => "pole",
            DomainSpec::Smoothed(_) => "smoothed",
        }
    }

    pub fn contains(&self, x: &Vec3) -> bool {
        match self {
            DomainSpec::Ball(b) => norm(x) < b.radius,
            DomainSpec::Shell(s) => {
                let r = norm(x);
                r > s.inner && r < s.outer
            }
            DomainSpec::Fournais(f) => f.contains(x),
            DomainSpec::Passage(p) => p.contains(x),
            DomainSpec::Sheet(s) => s.contains(x),
            DomainSpec::Pole(p) => p.contains(x),
            DomainSpec::Smoothed(s) => s.contains(x),
        }
    }

    /// Whether the domain carries zero-thickness walls.
    pub fn has_cuts(&self) -> bool {
        matches!(self, DomainSpec::Fournais(_))
    }

    /// Whether the segment between two members crosses a wall.
    pub fn severs(&self, p: &Vec3, q: &Vec3) -> bool {
        match self {
            DomainSpec::Fournais(f) => f.severs(p, q),
            _ => false,
        }
    }

    /// Signed distance estimate: negative inside, roughly 1-Lipschitz.
    pub fn signed_distance(&self, x: &Vec3) -> f64 {
        match self {
            DomainSpec::Ball(b) => norm(x) - b.radius,
            DomainSpec::Shell(s) => slab(norm(x), s.inner, s.outer),
            DomainSpec::Fournais(f) => f.signed_distance(x),
            DomainSpec::Passage(p) => p.signed_distance(x),
            DomainSpec::Sheet(s) => s.signed_distance(x),
            DomainSpec::Pole(p) => p.signed_distance(x),
            DomainSpec::Smoothed(s) => {
                if s.is_identity() {
                    s.base.signed_distance(x)
                } else {
                    s.base.signed_distance(x) - s.delta
                }
            }
        }
    }

    /// Outer radius `R` of the family member (the ball radius for a ball).
    pub fn outer_radius(&self) -> f64 {
        match self {
            DomainSpec::Ball(b) => b.radius,
            DomainSpec::Shell(s) => s.outer,
            DomainSpec::Fournais(f) => f.outer,
            DomainSpec::Passage(p) => p.base.outer,
            DomainSpec::Sheet(s) => s.base.base.outer,
            DomainSpec::Pole(p) => p.base.base.base.outer,
            DomainSpec::Smoothed(s) => s.base.outer_radius(),
        }
    }

    /// Radius of a ball centered at the origin that contains the domain.
    pub fn bounding_radius(&self) -> f64 {
        match self {
            DomainSpec::Fournais(f) => f.outer.max(INNER_RADIUS + f.epsilon),
            DomainSpec::Smoothed(s) => {
                if s.is_identity() {
                    s.base.bounding_radius()
                } else {
                    s.base.bounding_radius() + s.delta + 6.0 * s.width
                }
            }
            other => other.outer_radius(),
        }
    }

    /// Smallest geometric feature a grid must resolve.
    pub fn min_feature_size(&self) -> f64 {
        match self {
            DomainSpec::Ball(b) => b.radius,
            DomainSpec::Shell(s) => s.outer - s.inner,
            DomainSpec::Fournais(f) => f.epsilon.min(f.outer - INNER_RADIUS),
            DomainSpec::Passage(p) => {
                let gap = p.base.outer - p.wall_top();
                p.base.epsilon.min(1.0 / p.n as f64).min(gap)
            }
            DomainSpec::Sheet(s) => {
                DomainSpec::Passage(s.base.clone()).min_feature_size().min(s.web.half_width())
            }
            DomainSpec::Pole(p) => {
                DomainSpec::Sheet(p.base.clone()).min_feature_size().min(p.pole_radius())
            }
            DomainSpec::Smoothed(s) => s.base.min_feature_size(),
        }
    }

    /// Dilation radius below which smoothing is expected to keep the topology.
    pub fn delta_limit(&self) -> f64 {
        match self {
            DomainSpec::Pole(p) => p.delta_limit(),
            other => 0.5 * other.min_feature_size(),
        }
    }
}

macro_rules! impl_from {
    ($($t:ident),*) => {$(
        impl From<$t> for DomainSpec {
            fn from(v: $t) -> Self {
                DomainSpec::$t(v)
            }
        }
    )*};
}
impl_from!(Ball, Shell, Fournais, Passage, Sheet, Pole, Smoothed);

pub fn make_fournais(points: SpherePointSet, epsilon: f64, outer: f64) -> Result<Fournais> {
    let bound = epsilon_upper_bound(&points);
    if !(epsilon > 0.0 && epsilon < bound) {
        return Err(Error::EpsilonOutOfRange { epsilon, bound });
    }
    make_fournais_relaxed(points, epsilon, outer)
}

/// Half the smallest distance between centers, or 1 for a single center.
pub fn room_separation_bound(points: &SpherePointSet) -> f64 {
    let c = points.centers();
    let mut pair = f64::INFINITY;
    for i in 0..c.len() {
        for j in i + 1..c.len() {
            pair = pair.min(dist(&c[i], &c[j]));
        }
    }
    if pair.is_finite() {
        0.5 * pair
    } else {
        1.0
    }
}

/// Like [`make_fournais`] but only requires the rooms to be disjoint.
///
/// Domains built this way are valid on their own; [`make_sheet`] still
/// rejects them when `epsilon` is at or above [`epsilon_upper_bound`].
pub fn make_fournais_relaxed(points: SpherePointSet, epsilon: f64, outer: f64) -> Result<Fournais> {
    let bound = room_separation_bound(&points);
    if !(epsilon > 0.0 && epsilon < bound) {
        return Err(Error::EpsilonOutOfRange { epsilon, bound });
    }
    let (lower, upper) = choose_r_window(INNER_RADIUS)?;
    if !(outer > lower && outer < upper) {
        return Err(Error::RadiusOutsideWindow { radius: outer, lower, upper });
    }
    Ok(Fournais { points, epsilon, outer })
}

pub fn make_passage(base: Fournais, n: u32) -> Result<Passage> {
    if n == 0 {
        return Err(invalid("passage index n must be positive"));
    }
    if INNER_RADIUS + 1.0 / n as f64 >= base.outer {
        return Err(invalid("wall layer reaches the outer radius"));
    }
    Ok(Passage { base, n })
}

fn sheet_web(base: &Passage, m: u32) -> Result<SheetWeb> {
    if m == 0 {
        return Err(invalid("sheet index m must be positive"));
    }
    let bound = epsilon_upper_bound(&base.base.points);
    if base.base.epsilon >= bound {
        return Err(Error::EpsilonOutOfRange { epsilon: base.base.epsilon, bound });
    }
    SheetWeb::new(&base.base.points, base.base.epsilon / m as f64)
}

/// Builds the sheet domain, labelling holes on the coarsest cube-sphere mesh
/// whose pitch is at most `epsilon / (2m)`.
pub fn make_sheet(base: Passage, m: u32) -> Result<Sheet> {
    let web = sheet_web(&base, m)?;
    let target = 0.5 * web.half_width();
    let per_edge = (2.0 / target).ceil() as usize;
    if per_edge > MAX_MESH_PER_EDGE {
        return Err(Error::MeshTooCoarse {
            pitch: 2.0 / MAX_MESH_PER_EDGE as f64,
            half_width: web.half_width(),
        });
    }
    make_sheet_with_mesh(base, m, per_edge)
}

/// Builds the sheet domain on a cube-sphere mesh with `per_edge` cells per face edge.
pub fn make_sheet_with_mesh(base: Passage, m: u32, per_edge: usize) -> Result<Sheet> {
    let web = sheet_web(&base, m)?;
    let mesh = CubeSphere::new(per_edge.max(1));
    if mesh.pitch() > 0.5 * web.half_width() {
        return Err(Error::MeshTooCoarse { pitch: mesh.pitch(), half_width: web.half_width() });
    }
    let mut sheet = Sheet { base, m, web, holes: 0, mesh_per_edge: per_edge };
    let (_, holes) = mesh.components(|t| sheet.is_free_direction(t));
    let bound = 2 * sheet.base.base.points.len() + 2;
    if holes > bound {
        return Err(Error::HoleBound { holes, bound });
    }
    sheet.holes = holes;
    Ok(sheet)
}

/// Picks one pole direction per hole, as far from the hole's edge as the
/// cube-sphere mesh of pitch `<= epsilon / (4 m)` allows.
///
/// Returns the directions (in order of each hole's lowest mesh index), the
/// smallest clearance and the mesh resolution used.
pub fn pole_directions(sheet: &Sheet) -> Result<(Vec<Vec3>, f64, usize)> {
    let target = 0.25 * sheet.web.half_width();
    let per_edge = (2.0 / target).ceil() as usize;
    if per_edge > MAX_MESH_PER_EDGE {
        return Err(Error::MeshTooCoarse {
            pitch: 2.0 / MAX_MESH_PER_EDGE as f64,
            half_width: sheet.web.half_width(),
        });
    }
    let mesh = CubeSphere::new(per_edge);
    let (labels, count) = mesh.components(|t| sheet.is_free_direction(t));
    let mut best: Vec<Option<(f64, usize)>> = vec![None; count];
    for (cell, label) in labels.iter().enumerate() {
        if let Some(k) = label {
            let c = sheet.clearance(&mesh.center(cell));
            let slot = &mut best[*k as usize];
            if slot.map_or(true, |(b, _)| c > b) {
                *slot = Some((c, cell));
            }
        }
    }
    let mut directions = Vec::with_capacity(count);
    let mut eta = f64::INFINITY;
    for (c, cell) in best.into_iter().flatten() {
        directions.push(mesh.center(cell));
        eta = eta.min(c);
    }
    if count > 0 && eta < mesh.pitch() {
        return Err(Error::PoleClearance { eta, pitch: mesh.pitch() });
    }
    Ok((directions, eta, per_edge))
}

pub fn make_pole(base: Sheet, l: u32) -> Result<Pole> {
    let (directions, clearance, mesh_per_edge) = pole_directions(&base)?;
    let required = if clearance.is_finite() { (1.0 / clearance).ceil().max(1.0) as u32 } else { 1 };
    if l < required {
        return Err(Error::PoleTooWide { l, required });
    }
    Ok(Pole { base, l, directions, clearance, mesh_per_edge })
}

/// Reassembles a pole domain from stored directions without re-running the selection.
pub fn pole_from_parts(
    base: Sheet,
    l: u32,
    directions: Vec<Vec3>,
    clearance: f64,
    mesh_per_edge: usize,
) -> Result<Pole> {
    if l == 0 {
        return Err(invalid("pole index l must be positive"));
    }
    for d in &directions {
        if (norm(d) - 1.0).abs() > 1e-9 {
            return Err(invalid("pole directions must be unit vectors"));
        }
    }
    Ok(Pole { base, l, directions, clearance, mesh_per_edge })
}

/// Reassembles a sheet domain with a stored hole count.
pub fn sheet_from_parts(base: Passage, m: u32, holes: usize, mesh_per_edge: usize) -> Result<Sheet> {
    let web = sheet_web(&base, m)?;
    Ok(Sheet { base, m, web, holes, mesh_per_edge })
}

/// Smoothed domain without the topology guard. `delta = width = 0` is the identity.
pub fn smoothed_unchecked(base: DomainSpec, delta: f64, width: f64) -> Result<Smoothed> {
    let identity = delta == 0.0 && width == 0.0;
    if !identity && !(width > 0.0 && width < delta) {
        return Err(invalid("smoothing requires 0 < width < delta"));
    }
    Ok(Smoothed { base: Box::new(base), delta, width })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poles_fournais(eps: f64) -> Fournais {
        make_fournais(SpherePointSet::poles(), eps, 1.8).unwrap()
    }

    #[test]
    fn fournais_membership() {
        let f = make_fournais(SpherePointSet::new(vec![[0.0, 0.0, 1.0]]).unwrap(), 0.2, 1.8).unwrap();
        assert!(f.contains(&[0.0, 0.0, 0.0]));
        assert!(f.contains(&[0.0, 0.0, 1.0]));
        assert!(!f.contains(&[1.0, 0.0, 0.0]));
        assert!(f.severs(&[0.99, 0.0, 0.0], &[1.01, 0.0, 0.0]));
        assert!(!f.severs(&[0.0, 0.0, 0.99], &[0.0, 0.0, 1.01]));
    }

    #[test]
    fn fournais_rejects_bad_parameters() {
        assert!(matches!(
            make_fournais(SpherePointSet::poles(), 0.6, 1.8),
            Err(Error::EpsilonOutOfRange { .. })
        ));
        assert!(matches!(
            make_fournais(SpherePointSet::poles(), 0.2, 2.1),
            Err(Error::RadiusOutsideWindow { .. })
        ));
        assert!(make_fournais(SpherePointSet::poles(), 0.0, 1.8).is_err());
    }

    #[test]
    fn passage_membership() {
        let n = 4;
        let p = make_passage(poles_fournais(0.25), n).unwrap();
        let r = 1.0 + 0.5 / n as f64;
        assert!(p.contains(&[0.0, 0.0, r]));
        assert!(!p.contains(&[r, 0.0, 0.0]));
        assert!(p.contains(&[0.0, 0.0, 0.5]));
        assert!(p.contains(&[1.5, 0.0, 0.0]));
    }

    #[test]
    fn sheet_on_great_circle_is_member() {
        let t = std::f64::consts::FRAC_1_SQRT_2;
        for m in 1..=4 {
            let s = make_sheet(make_passage(poles_fournais(0.25), 2).unwrap(), m).unwrap();
            let r = 1.25;
            assert!(s.contains(&[0.0, t * r, t * r]), "m = {m}");
        }
    }

    #[test]
    fn antipodal_rooms_leave_two_holes() {
        // the polar level circles degenerate to points on the vertical great circle
        for m in 1..=8 {
            let s = make_sheet(make_passage(poles_fournais(0.25), 2).unwrap(), m).unwrap();
            assert_eq!(s.hole_count(), 2, "m = {m}");
        }
    }

    #[test]
    fn coarse_sheet_mesh_is_rejected() {
        let p = make_passage(poles_fournais(0.25), 2).unwrap();
        assert!(matches!(make_sheet_with_mesh(p, 4, 8), Err(Error::MeshTooCoarse { .. })));
    }

    #[test]
    fn pole_membership() {
        let s = make_sheet(make_passage(poles_fournais(0.25), 2).unwrap(), 1).unwrap();
        let l = 4;
        let pole = make_pole(s, l).unwrap();
        assert_eq!(pole.directions().len(), 2);
        let a = 1.5;
        let mid = 0.5 * (a + 1.8);
        for d in pole.directions() {
            assert!(!pole.contains(&scale(d, mid)));
        }
        // same radius, angular distance well beyond 3/l from both axes
        let probe = [0.0, mid, 0.0];
        for d in pole.directions() {
            assert!(segment_distance(&probe, d, a, 1.8) >= 3.0 / l as f64);
        }
        assert!(pole.contains(&probe));
    }

    #[test]
    fn pole_rejects_thick_poles() {
        let s = make_sheet(make_passage(poles_fournais(0.25), 2).unwrap(), 1).unwrap();
        assert!(matches!(make_pole(s, 0), Err(Error::PoleTooWide { .. })));
    }

    #[test]
    fn smoothing_identity_and_ball_bounds() {
        let ball: DomainSpec = Ball::new(1.0).unwrap().into();
        let id = smoothed_unchecked(ball.clone(), 0.0, 0.0).unwrap();
        assert!(id.contains(&[0.5, 0.5, 0.5]) && !id.contains(&[1.0, 0.0, 0.1]));
        let s = smoothed_unchecked(ball, 0.05, 0.02).unwrap();
        assert!(s.contains(&[0.0, 0.0, 1.0]));
        assert!(s.contains(&[0.0, 1.04, 0.0]));
        assert!(!s.contains(&[0.0, 1.1, 0.0]));
        assert!(smoothed_unchecked(Ball::new(1.0).unwrap().into(), 0.05, 0.06).is_err());
    }

    #[test]
    fn signed_distance_sign_matches_membership_for_ball_and_shell() {
        let shell: DomainSpec = Shell::new(1.0, 1.8).unwrap().into();
        for x in [[0.0, 0.0, 0.5], [1.4, 0.0, 0.0], [0.0, 2.0, 0.0]] {
            assert_eq!(shell.contains(&x), shell.signed_distance(&x) < 0.0);
        }
    }
}
