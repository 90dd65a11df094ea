//! Checks for the extra geometric claims attached to catalog entries.

use std::collections::BTreeSet;

use num_rational::Rational64;

use crate::geometry::{coplanar, IntBox, RationalVec3};
use crate::lattices::{self, VertexSetLabel};
use crate::wythoff::{ComplexRegion, Edge, Face};

use super::VerifyError;

/// Outcome of a single check: pass flag and a short explanation.
pub type Outcome = (bool, String);

fn first_failure<T: std::fmt::Display>(what: &str, bad: Option<T>, ok: String) -> Outcome {
    match bad {
        Some(b) => (false, format!("{what}: {b}")),
        None => (true, ok),
    }
}

/// Result of comparing a complex against a larger one on the same box.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubcomplexReport {
    pub missing_vertices: usize,
    pub missing_edges: usize,
    pub missing_faces: usize,
    pub inner_faces: usize,
    pub outer_faces: usize,
}

impl SubcomplexReport {
    pub fn holds(&self) -> bool {
        self.missing_vertices == 0 && self.missing_edges == 0 && self.missing_faces == 0
    }

    /// Ratio of interior face counts.
    pub fn face_ratio(&self) -> Option<Rational64> {
        (self.outer_faces > 0).then(|| Rational64::new(self.inner_faces as i64, self.outer_faces as i64))
    }
}

/// Compares interior vertices, edges and faces of `inner` against `outer`.
pub fn check_subcomplex(inner: &ComplexRegion, outer: &ComplexRegion) -> Result<SubcomplexReport, VerifyError> {
    if inner.bounds() != outer.bounds() {
        return Err(VerifyError::MismatchedBoxes(inner.bounds(), outer.bounds()));
    }
    let outer_v = outer.interior_vertices();
    let outer_e = outer.interior_edges();
    let inner_faces = inner.interior_faces();
    Ok(SubcomplexReport {
        missing_vertices: inner.interior_vertices().difference(&outer_v).count(),
        missing_edges: inner.interior_edges().difference(&outer_e).count(),
        missing_faces: inner_faces.iter().filter(|f| !outer.contains_face(f)).count(),
        inner_faces: inner_faces.len(),
        outer_faces: outer.interior_faces().len(),
    })
}

pub fn same_edge_graph(a: &ComplexRegion, b: &ComplexRegion) -> Outcome {
    let (va, vb) = (a.interior_vertices(), b.interior_vertices());
    let (ea, eb) = (a.interior_edges(), b.interior_edges());
    (
        va == vb && ea == eb,
        format!("{}/{} vertices, {}/{} edges", va.len(), vb.len(), ea.len(), eb.len()),
    )
}

pub fn uniform_degree(region: &ComplexRegion, degree: usize) -> Outcome {
    let bad = region
        .interior_vertices()
        .into_iter()
        .find(|v| region.neighbors(v).len() != degree);
    first_failure("vertex of other degree", bad, format!("every interior vertex has degree {degree}"))
}

fn sorted_abs(v: RationalVec3) -> [i64; 3] {
    let mut h = v.halves().map(i64::abs);
    h.sort_unstable();
    h
}

pub fn edge_vectors(region: &ComplexRegion, vector: RationalVec3) -> Outcome {
    let want = sorted_abs(vector);
    let bad = region.interior_edges().into_iter().find(|e| {
        let (a, b) = e.endpoints();
        sorted_abs(b - a) != want
    });
    first_failure("edge of other type", bad, format!("all edges of type {vector}"))
}

pub fn vertex_set_negated(region: &ComplexRegion, label: VertexSetLabel) -> Outcome {
    let b = region.bounds();
    let expected: BTreeSet<RationalVec3> = b.integer_points().filter(|p| lattices::contains(label, &-*p)).collect();
    let got = region.interior_vertices();
    (
        got == expected,
        format!("{} interior vertices, {} points of -{label}", got.len(), expected.len()),
    )
}

/// Coordinate axis parallel to an infinite face's period.
fn axis_of(face: &Face) -> Option<usize> {
    let h = face.period?.halves();
    let nonzero: Vec<usize> = (0..3).filter(|&i| h[i] != 0).collect();
    (nonzero.len() == 1).then(|| nonzero[0])
}

pub fn helix_axes_per_edge(region: &ComplexRegion, counts: [usize; 3]) -> Outcome {
    for e in region.interior_edges() {
        let mut got = [0usize; 3];
        for &i in region.faces_at_edge(&e) {
            match axis_of(&region.faces()[i]) {
                Some(a) => got[a] += 1,
                None => return (false, format!("face at {e} has no coordinate axis")),
            }
        }
        if got != counts {
            return (false, format!("edge {e}: axis counts {got:?}"));
        }
    }
    (true, format!("axis counts {counts:?} at every interior edge"))
}

pub fn helix_axis_classes(region: &ComplexRegion) -> Outcome {
    let mut seen = [0usize; 3];
    for f in region.interior_faces() {
        match axis_of(f) {
            Some(a) => seen[a] += 1,
            None => return (false, "face axis not along a coordinate axis".into()),
        }
    }
    (seen.iter().all(|&c| c > 0), format!("faces per axis {seen:?}"))
}

/// True if `p` is a vertex of `face`.
fn is_face_vertex(face: &Face, p: &RationalVec3) -> bool {
    let Some(period) = face.period else {
        return face.vertices.contains(p);
    };
    let ph = period.halves();
    let axis = (0..3).find(|&i| ph[i] != 0).expect("nonzero period");
    face.vertices[..face.cycle_len()].iter().any(|v| {
        let d = (*p - *v).halves();
        d[axis] % ph[axis] == 0 && {
            let m = d[axis] / ph[axis];
            (0..3).all(|i| d[i] == m * ph[i])
        }
    })
}

fn window(face: &Face, start: i64, len: usize) -> Vec<RationalVec3> {
    (0..len as i64).map(|k| face.vertex_at(start + k)).collect()
}

fn spans(points: &[RationalVec3]) -> [i64; 3] {
    let mut out = [0; 3];
    for (i, o) in out.iter_mut().enumerate() {
        let lo = points.iter().map(|p| p.halves()[i]).min().unwrap_or(0);
        let hi = points.iter().map(|p| p.halves()[i]).max().unwrap_or(0);
        *o = (hi - lo) / 2;
    }
    out
}

fn in_unit_cube(points: &[RationalVec3]) -> bool {
    points.iter().all(RationalVec3::is_integral) && spans(points).iter().all(|&s| s <= 1)
}

fn in_unit_square(points: &[RationalVec3]) -> bool {
    in_unit_cube(points) && spans(points).contains(&0)
}

/// Faces are Petrie polygons of the unit cubic tessellation: two but not
/// three consecutive edges in a unit square, three but not four in a unit
/// cube.
pub fn petrie_of_cubic_tessellation(region: &ComplexRegion) -> Outcome {
    for f in region.interior_faces() {
        for i in 0..f.cycle_len() as i64 {
            let ok = in_unit_square(&window(f, i, 3))
                && !in_unit_square(&window(f, i, 4))
                && in_unit_cube(&window(f, i, 4))
                && !in_unit_cube(&window(f, i, 5));
            if !ok {
                return (false, format!("window at vertex {} of a face through {}", i, f.vertices[0]));
            }
        }
    }
    (true, format!("{} faces checked", region.interior_faces().len()))
}

/// The twelve edges of the unit cube with the given minimal corner.
fn unit_cube_edges(min: RationalVec3) -> BTreeSet<Edge> {
    let mut out = BTreeSet::new();
    for b in 0..8i64 {
        let corner = min + RationalVec3::new(b & 1, (b >> 1) & 1, (b >> 2) & 1);
        for axis in 0..3 {
            if (b >> axis) & 1 == 0 {
                let mut d = [0; 3];
                d[axis] = 1;
                out.insert(Edge::new(corner, corner + RationalVec3::new(d[0], d[1], d[2])));
            }
        }
    }
    out
}

/// Unit cube having the diagonal edge `a b` as a main diagonal.
fn cube_of_diagonal(a: RationalVec3, b: RationalVec3) -> BTreeSet<Edge> {
    let (ha, hb) = (a.halves(), b.halves());
    unit_cube_edges(RationalVec3::from_halves([0, 1, 2].map(|i| ha[i].min(hb[i]))))
}

fn shared(cubes: &[BTreeSet<Edge>]) -> BTreeSet<Edge> {
    cubes[1..]
        .iter()
        .fold(cubes[0].clone(), |acc, c| acc.intersection(c).copied().collect())
}

/// Each edge is a main diagonal of a unit cube. The cubes of three
/// consecutive edges share exactly one edge, whose ends are not vertices of
/// the face; four consecutive cubes share no edge, and the shared edges of
/// the two overlapping triples are adjacent edges of a common cube.
pub fn cube_triple_windows(region: &ComplexRegion) -> Outcome {
    for f in region.interior_faces() {
        for i in 0..f.cycle_len() as i64 {
            let w = window(f, i, 5);
            if w.windows(2).any(|p| sorted_abs(p[1] - p[0]) != [2, 2, 2]) {
                return (false, format!("non-diagonal edge near {}", w[0]));
            }
            let cubes: Vec<BTreeSet<Edge>> = w.windows(2).map(|p| cube_of_diagonal(p[0], p[1])).collect();
            let first = shared(&cubes[0..3]);
            let second = shared(&cubes[1..4]);
            if first.len() != 1 || second.len() != 1 || !shared(&cubes[0..4]).is_empty() {
                return (false, format!("cube window at {} shares {} edges", w[0], first.len()));
            }
            let (e1, e2) = (*first.first().unwrap(), *second.first().unwrap());
            let ends = |e: Edge| {
                let (a, b) = e.endpoints();
                [a, b]
            };
            if ends(e1).iter().any(|p| is_face_vertex(f, p)) {
                return (false, format!("shared edge {e1} touches the face"));
            }
            let common = ends(e1).iter().filter(|p| ends(e2).contains(p)).count();
            if common != 1 || !cubes[1].contains(&e1) || !cubes[1].contains(&e2) {
                return (false, format!("shared edges {e1} and {e2} are not adjacent"));
            }
        }
    }
    (true, format!("{} faces checked", region.interior_faces().len()))
}

/// Three consecutive edges lie in a 2x2x2 cube: the ends of the window are
/// opposite corners and the middle vertices are centres of adjacent faces.
pub fn double_cube_windows(region: &ComplexRegion) -> Outcome {
    for f in region.interior_faces() {
        for i in 0..f.cycle_len() as i64 {
            let w = window(f, i, 4);
            let diag = w[3] - w[0];
            if sorted_abs(diag) != [4, 4, 4] {
                return (false, format!("window at {} does not span a 2-cube", w[0]));
            }
            let centre = w[0].midpoint(&w[3]).expect("even diagonal");
            let axis = |p: RationalVec3| {
                let h = (p - centre).halves();
                let nz: Vec<usize> = (0..3).filter(|&k| h[k] != 0).collect();
                (nz.len() == 1 && h[nz[0]].abs() == 2).then(|| nz[0])
            };
            match (axis(w[1]), axis(w[2])) {
                (Some(a), Some(b)) if a != b => {}
                _ => return (false, format!("middle vertices of window at {} are not adjacent face centres", w[0])),
            }
        }
    }
    (true, format!("{} faces checked", region.interior_faces().len()))
}

fn plane_points(face: &Face) -> Vec<RationalVec3> {
    let n = face.cycle_len() as i64;
    (0..=n + 1).map(|k| face.vertex_at(k)).collect()
}

/// The faces at every interior edge split into two pairs of coplanar faces.
pub fn coplanar_face_pairs(region: &ComplexRegion) -> Outcome {
    let pair_ok = |a: &Face, b: &Face| {
        let mut pts = plane_points(a);
        pts.extend(plane_points(b));
        coplanar(&pts)
    };
    for e in region.interior_edges() {
        let idx = region.faces_at_edge(&e);
        if idx.len() != 4 {
            return (false, format!("edge {e} has {} faces", idx.len()));
        }
        let f = |k: usize| &region.faces()[idx[k]];
        let matched = [[0, 1, 2, 3], [0, 2, 1, 3], [0, 3, 1, 2]]
            .iter()
            .any(|m| pair_ok(f(m[0]), f(m[1])) && pair_ok(f(m[2]), f(m[3])));
        if !matched {
            return (false, format!("faces at {e} do not pair up in planes"));
        }
    }
    (true, format!("{} edges checked", region.interior_edges().len()))
}

/// Faces of a box-shaped region compared up to `[3,4]`; needs a box
/// symmetric about the origin.
pub fn symmetric_about_origin(b: &IntBox) -> bool {
    (0..3).all(|i| b.min[i] == -b.max[i]) && b.max[0] == b.max[1] && b.max[1] == b.max[2]
}
