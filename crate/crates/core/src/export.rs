//! OFF export of the finite faces of a region plus a JSON sidecar holding
//! everything OFF cannot express.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;

use crate::geometry::{IntBox, RationalVec3};
use crate::wythoff::{ComplexRegion, FaceClass, GeneratorSetSpec};

/// Interior of a region, scaled and indexed for export.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Sidecar {
    pub entry: String,
    pub bounds: IntBox,
    pub margin: i64,
    pub scale: i64,
    pub generators: GeneratorSetSpec,
    pub vertices: Vec<RationalVec3>,
    /// Pairs of vertex indices.
    pub edges: Vec<[usize; 2]>,
    /// Finite faces with every vertex in the box, as vertex indices; these
    /// are the OFF polygons.
    pub finite_faces: Vec<Vec<usize>>,
    /// Finite faces leaving the box, as coordinates.
    pub clipped_faces: Vec<Vec<RationalVec3>>,
    pub infinite_faces: Vec<InfiniteFace>,
}

/// One period of an infinite face meeting the box.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InfiniteFace {
    pub class: FaceClass,
    pub segment: Vec<RationalVec3>,
    pub period: RationalVec3,
}

pub fn sidecar(entry: &str, generators: GeneratorSetSpec, region: &ComplexRegion, scale: i64) -> Sidecar {
    let verts: Vec<RationalVec3> = region.interior_vertices().into_iter().collect();
    let index: BTreeMap<RationalVec3, usize> = verts.iter().enumerate().map(|(i, v)| (*v, i)).collect();
    let edges = region
        .interior_edges()
        .into_iter()
        .map(|e| {
            let (a, b) = e.endpoints();
            [index[&a], index[&b]]
        })
        .collect();
    let mut finite_faces = Vec::new();
    let mut clipped_faces = Vec::new();
    let mut infinite_faces = Vec::new();
    for face in region.interior_faces() {
        let scaled = |v: &RationalVec3| v.scale(scale);
        match face.period {
            None => match face.vertices.iter().map(|v| index.get(v).copied()).collect::<Option<Vec<_>>>() {
                Some(ids) => finite_faces.push(ids),
                None => clipped_faces.push(face.vertices.iter().map(scaled).collect()),
            },
            Some(p) => infinite_faces.push(InfiniteFace {
                class: face.class,
                segment: face.vertices.iter().map(scaled).collect(),
                period: p.scale(scale),
            }),
        }
    }
    Sidecar {
        entry: entry.to_string(),
        bounds: region.bounds(),
        margin: region.margin(),
        scale,
        generators,
        vertices: verts.iter().map(|v| v.scale(scale)).collect(),
        edges,
        finite_faces,
        clipped_faces,
        infinite_faces,
    }
}

impl Sidecar {
    /// OFF text: `OFF`, the counts line `nv nf ne`, vertices, polygons.
    pub fn to_off(&self) -> String {
        let mut out = String::from("OFF\n");
        let _ = writeln!(out, "{} {} {}", self.vertices.len(), self.finite_faces.len(), self.edges.len());
        for v in &self.vertices {
            let [x, y, z] = v.coords();
            let _ = writeln!(out, "{} {} {}", decimal(x), decimal(y), decimal(z));
        }
        for f in &self.finite_faces {
            let ids: Vec<String> = f.iter().map(usize::to_string).collect();
            let _ = writeln!(out, "{} {}", f.len(), ids.join(" "));
        }
        out
    }
}

/// Exact decimal form of a half-integer.
fn decimal(r: num_rational::Rational64) -> String {
    if r.is_integer() {
        r.to_integer().to_string()
    } else {
        let twice = (r * 2).to_integer();
        let sign = if twice < 0 { "-" } else { "" };
        format!("{sign}{}.5", twice.abs() / 2)
    }
}
