//! Independent constructions used to cross-check built complexes.
//!
//! Nothing here uses generators: faces come straight from the geometry of
//! the tetrahedron-octahedron honeycomb `S`, whose vertices are the points of
//! `L_aa0` and whose face planes are the planes `n·x = c` with `n` of type
//! `(±1,±1,±1)` and `c` even.

use std::collections::{BTreeSet, HashMap};

use crate::catalog::OracleKind;
use crate::geometry::{IntBox, RationalVec3};
use crate::wythoff::{ComplexRegion, Face};

use super::VerifyError;

/// A face plane of `S`, oriented so that `n·(1,1,1) > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SPlane {
    normal: [i64; 3],
    offset: i64,
}

impl SPlane {
    pub fn new(normal: [i64; 3], offset: i64) -> Result<SPlane, VerifyError> {
        if normal.iter().any(|c| c.abs() != 1) || offset.rem_euclid(2) != 0 {
            return Err(VerifyError::NotAnSPlane { normal, offset });
        }
        let sign = if normal.iter().sum::<i64>() > 0 { 1 } else { -1 };
        Ok(SPlane {
            normal: normal.map(|c| c * sign),
            offset: offset * sign,
        })
    }

    pub fn normal(&self) -> [i64; 3] {
        self.normal
    }

    pub fn offset(&self) -> i64 {
        self.offset
    }

    fn value(&self, p: [i64; 3]) -> i64 {
        (0..3).map(|i| self.normal[i] * p[i]).sum()
    }

    pub fn contains(&self, p: &RationalVec3) -> bool {
        p.to_integers().is_some_and(|q| self.value(q) == self.offset)
    }

    /// The six unit directions of the triangular lattice in the plane, in
    /// counterclockwise order seen from the tip of the normal.
    fn directions(&self) -> [[i64; 3]; 6] {
        let mut all = Vec::new();
        for i in 0..3 {
            for j in (i + 1)..3 {
                for (si, sj) in [(1, 1), (1, -1), (-1, 1), (-1, -1)] {
                    let mut d = [0; 3];
                    d[i] = si;
                    d[j] = sj;
                    if self.value(d) == 0 {
                        all.push(d);
                    }
                }
            }
        }
        debug_assert_eq!(all.len(), 6);
        let dot = |a: [i64; 3], b: [i64; 3]| (0..3).map(|k| a[k] * b[k]).sum::<i64>();
        let cross = |a: [i64; 3], b: [i64; 3]| {
            [
                a[1] * b[2] - a[2] * b[1],
                a[2] * b[0] - a[0] * b[2],
                a[0] * b[1] - a[1] * b[0],
            ]
        };
        let mut out = [all[0]; 6];
        for k in 1..6 {
            let prev = out[k - 1];
            out[k] = *all
                .iter()
                .find(|d| dot(prev, **d) == 1 && dot(cross(prev, **d), self.normal) > 0)
                .expect("hexagonal star");
        }
        out
    }
}

/// All face planes of `S` meeting the box.
pub fn s_planes_meeting(bounds: &IntBox) -> Vec<SPlane> {
    let mut out = Vec::new();
    for normal in [[1, 1, 1], [1, 1, -1], [1, -1, 1], [-1, 1, 1]] {
        let (mut lo, mut hi) = (0, 0);
        for i in 0..3 {
            let (a, b) = (normal[i] * bounds.min[i], normal[i] * bounds.max[i]);
            lo += a.min(b);
            hi += a.max(b);
        }
        for c in lo..=hi {
            if c.rem_euclid(2) == 0 {
                out.push(SPlane { normal, offset: c });
            }
        }
    }
    out
}

/// The faces of one kind in the triangular tessellation of `plane`, for
/// every face with a vertex in the box.
///
/// A path leaves each vertex along the k-th edge counted from the edge it
/// arrived by, turning alternately right and left (Petrie polygons for
/// k = 1, 2-zigzags for k = 2) or always left (2-holes).
pub fn triangular_oracle(plane: SPlane, kind: OracleKind, bounds: &IntBox) -> BTreeSet<Face> {
    let dirs = plane.directions();
    let (k, alternate) = match kind {
        OracleKind::Petrie => (1, true),
        OracleKind::TwoZigzag => (2, true),
        OracleKind::TwoHole => (2, false),
    };
    let step = |v: RationalVec3, d: usize| {
        let [x, y, z] = dirs[d];
        v + RationalVec3::new(x, y, z)
    };
    let mut faces = BTreeSet::new();
    for start in bounds.integer_points().filter(|p| plane.contains(p)) {
        for d0 in 0..6 {
            for s0 in [1i64, -1] {
                let mut verts = vec![start, step(start, d0)];
                let mut state = (d0, s0);
                let mut seen: HashMap<(usize, i64), usize> = HashMap::new();
                loop {
                    let t = verts.len() - 1;
                    if let Some(&t0) = seen.get(&state) {
                        let offset = verts[t] - verts[t0];
                        let face = if offset.is_zero() {
                            Face::from_cycle(verts[t0..t].to_vec())
                        } else {
                            Face::from_segment(verts[t0..=t].to_vec())
                        };
                        faces.insert(face.canonical());
                        break;
                    }
                    seen.insert(state, t);
                    let (d, s) = state;
                    let back = (d + 3) % 6;
                    let exit = (back as i64 + s * k).rem_euclid(6) as usize;
                    verts.push(step(verts[t], exit));
                    state = (exit, if alternate { -s } else { s });
                }
            }
        }
    }
    faces
}

/// Union of [`triangular_oracle`] over every face plane of `S` meeting the box.
pub fn triangular_oracle_all(kind: OracleKind, bounds: &IntBox) -> BTreeSet<Face> {
    s_planes_meeting(bounds)
        .into_iter()
        .flat_map(|p| triangular_oracle(p, kind, bounds))
        .collect()
}

/// The 2-skeleton of `S`: the triangles of its octahedra and tetrahedra.
pub fn semiregular_s(bounds: IntBox, margin: i64) -> ComplexRegion {
    let reach = bounds.expand(margin).expand(1);
    let p = |x: i64, y: i64, z: i64| RationalVec3::new(x, y, z);
    let mut faces = Vec::new();
    for c in reach.integer_points() {
        let [x, y, z] = c.to_integers().expect("integer point");
        if (x + y + z).rem_euclid(2) == 1 {
            for sx in [-1, 1] {
                for sy in [-1, 1] {
                    for sz in [-1, 1] {
                        faces.push(Face::from_cycle(vec![p(x + sx, y, z), p(x, y + sy, z), p(x, y, z + sz)]));
                    }
                }
            }
        }
        let corners: Vec<RationalVec3> = (0..8)
            .map(|b| p(x + (b & 1), y + ((b >> 1) & 1), z + ((b >> 2) & 1)))
            .filter(|q| q.to_integers().is_some_and(|[a, b, c]| (a + b + c).rem_euclid(2) == 0))
            .collect();
        for skip in 0..4 {
            let tri: Vec<RationalVec3> = (0..4).filter(|&i| i != skip).map(|i| corners[i]).collect();
            faces.push(Face::from_cycle(tri));
        }
    }
    ComplexRegion::from_faces(bounds, margin, faces)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wythoff::FaceClass;

    fn p(x: i64, y: i64, z: i64) -> RationalVec3 {
        RationalVec3::new(x, y, z)
    }

    #[test]
    fn planes_are_validated_and_oriented() {
        assert!(SPlane::new([1, 1, 1], 1).is_err());
        assert!(SPlane::new([1, 0, 1], 0).is_err());
        let pl = SPlane::new([-1, -1, 1], 2).unwrap();
        assert_eq!((pl.normal(), pl.offset()), ([1, 1, -1], -2));
    }

    #[test]
    fn oracle_face_shapes() {
        let bx = IntBox::cube(-2, 2).unwrap();
        let plane = SPlane::new([1, 1, -1], 0).unwrap();
        let holes = triangular_oracle(plane, OracleKind::TwoHole, &bx);
        assert!(holes.iter().all(|f| f.class == FaceClass::ConvexPolygon(6)));
        let hex = Face::from_cycle(vec![p(0, 0, 0), p(1, 0, 1), p(1, 1, 2), p(0, 2, 2), p(-1, 2, 1), p(-1, 1, 0)]);
        assert!(holes.contains(&hex.canonical()));
        let petrie = triangular_oracle(plane, OracleKind::Petrie, &bx);
        assert!(petrie.iter().all(|f| f.class == FaceClass::Zigzag && f.cycle_len() == 2));
        let zz = triangular_oracle(plane, OracleKind::TwoZigzag, &bx);
        let golden = Face::from_segment(vec![p(-1, 1, 0), p(0, 0, 0), p(1, 0, 1)]);
        assert_eq!(golden.period, Some(p(2, -1, 1)));
        assert!(zz.contains(&golden.canonical()));
    }

    #[test]
    fn semiregular_vertex_figure_is_cuboctahedral() {
        let region = semiregular_s(IntBox::cube(-1, 1).unwrap(), 2);
        assert_eq!(region.neighbors(&RationalVec3::ZERO).len(), 12);
        let e = crate::wythoff::Edge::new(RationalVec3::ZERO, p(1, 1, 0));
        assert_eq!(region.faces_per_edge(&e).unwrap(), 4);
    }
}
