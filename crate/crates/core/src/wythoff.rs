//! Wythoff's construction of a regular complex from its distinguished
//! generators, face tracing, vertex-figures and face-mirror detection.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::geometry::{collinear, coplanar, IntBox, Isometry, RationalVec3, SignedPermMatrix};
use crate::point_groups::{classify_edge_stabilizer, EdgeStabilizerSpec, PointGroupError};

#[derive(Debug, Clone, Error)]
pub enum WythoffError {
    #[error("invalid generator set: {0}")]
    InvalidGenerators(String),
    #[error(transparent)]
    EdgeStabilizer(#[from] PointGroupError),
    #[error("degenerate face: {0}")]
    DegenerateFace(String),
    #[error("unsupported face: {0}")]
    UnsupportedFace(String),
    #[error("face orbit did not close within {0} steps")]
    TraceOverflow(usize),
    #[error("base vertex {base} lies outside the box {bounds}")]
    BaseOutsideBox { base: RationalVec3, bounds: IntBox },
    #[error("exploration exceeded {cap} group elements")]
    ResourceLimit {
        cap: usize,
        partial: Box<ComplexRegion>,
    },
    #[error("{0} is not in the interior of the region")]
    BoundaryArtifact(String),
    #[error("unknown vertex-figure label {0:?}")]
    UnknownVertexFigure(String),
}

/// The distinguished generators `R0`, `R1` and the edge stabilizer `G2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorSet {
    r0: Isometry,
    r1: Isometry,
    g2: EdgeStabilizerSpec,
    base_vertex: RationalVec3,
    names: BTreeMap<String, Isometry>,
}

impl GeneratorSet {
    /// Validates and assembles a generator set. `g2` lists named generators
    /// of the edge stabilizer.
    pub fn new(
        r0: Isometry,
        r1: Isometry,
        g2: BTreeMap<String, Isometry>,
        base_vertex: RationalVec3,
    ) -> Result<Self, WythoffError> {
        let invalid = |msg: String| Err(WythoffError::InvalidGenerators(msg));
        if !r0.is_involution() {
            return invalid(format!("R0 = {r0} is not an involution"));
        }
        if !r1.is_involution() {
            return invalid(format!("R1 = {r1} is not an involution"));
        }
        if r1.apply(base_vertex) != base_vertex {
            return invalid(format!("R1 = {r1} moves the base vertex {base_vertex}"));
        }
        let twin = r0.apply(base_vertex);
        if twin == base_vertex {
            return invalid(format!("R0 = {r0} fixes the base vertex"));
        }
        let gens: Vec<Isometry> = g2.values().copied().collect();
        let spec = classify_edge_stabilizer(&gens, (base_vertex, twin))?;
        Ok(GeneratorSet {
            r0,
            r1,
            g2: spec,
            base_vertex,
            names: g2,
        })
    }

    pub fn from_spec(spec: &GeneratorSetSpec) -> Result<Self, WythoffError> {
        GeneratorSet::new(spec.r0, spec.r1, spec.g2.clone(), spec.base_vertex)
    }

    pub fn to_spec(&self) -> GeneratorSetSpec {
        GeneratorSetSpec {
            r0: self.r0,
            r1: self.r1,
            g2: self.names.clone(),
            base_vertex: self.base_vertex,
        }
    }

    pub fn r0(&self) -> &Isometry {
        &self.r0
    }

    pub fn r1(&self) -> &Isometry {
        &self.r1
    }

    pub fn g2(&self) -> &EdgeStabilizerSpec {
        &self.g2
    }

    /// Named generators of `G2`.
    pub fn g2_names(&self) -> &BTreeMap<String, Isometry> {
        &self.names
    }

    pub fn base_vertex(&self) -> RationalVec3 {
        self.base_vertex
    }

    pub fn twin(&self) -> RationalVec3 {
        self.r0.apply(self.base_vertex)
    }

    pub fn base_edge(&self) -> Edge {
        Edge::new(self.base_vertex, self.twin())
    }

    /// `R0`, `R1`, then the `G2` generators in name order.
    pub fn generators(&self) -> Vec<Isometry> {
        let mut out = vec![self.r0, self.r1];
        out.extend(self.names.values().copied());
        out
    }

    /// Replaces `R0` and/or `R1`, keeping `G2` and the base vertex.
    pub fn with_r0_r1(&self, r0: Isometry, r1: Isometry) -> Result<Self, WythoffError> {
        GeneratorSet::new(r0, r1, self.names.clone(), self.base_vertex)
    }
}

/// Serialized form of a generator set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorSetSpec {
    pub r0: Isometry,
    pub r1: Isometry,
    pub g2: BTreeMap<String, Isometry>,
    #[serde(default)]
    pub base_vertex: RationalVec3,
}

/// Combinatorial and geometric type of a face.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FaceClass {
    ConvexPolygon(usize),
    SkewPolygon(usize),
    Zigzag,
    /// Helix over a `k`-gon.
    Helix(usize),
}

impl FaceClass {
    pub fn is_finite(&self) -> bool {
        matches!(self, FaceClass::ConvexPolygon(_) | FaceClass::SkewPolygon(_))
    }

    pub fn is_planar(&self) -> bool {
        matches!(self, FaceClass::ConvexPolygon(_) | FaceClass::Zigzag)
    }
}

impl fmt::Display for FaceClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FaceClass::ConvexPolygon(p) => write!(f, "{p}_c"),
            FaceClass::SkewPolygon(p) => write!(f, "{p}_s"),
            FaceClass::Zigzag => f.write_str("inf_2"),
            FaceClass::Helix(k) => write!(f, "inf_{k}"),
        }
    }
}

impl FromStr for FaceClass {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || format!("unknown face class {s:?}");
        if let Some(k) = s.strip_prefix("inf_") {
            return match k.parse::<usize>().map_err(|_| bad())? {
                2 => Ok(FaceClass::Zigzag),
                k @ (3 | 4) => Ok(FaceClass::Helix(k)),
                _ => Err(bad()),
            };
        }
        let (p, kind) = s.split_once('_').ok_or_else(bad)?;
        let p: usize = p.parse().map_err(|_| bad())?;
        if p < 3 {
            return Err(bad());
        }
        match kind {
            "c" => Ok(FaceClass::ConvexPolygon(p)),
            "s" => Ok(FaceClass::SkewPolygon(p)),
            _ => Err(bad()),
        }
    }
}

impl Serialize for FaceClass {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for FaceClass {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

/// An unordered pair of distinct vertices, stored with `a < b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Edge(RationalVec3, RationalVec3);

impl Edge {
    pub fn new(a: RationalVec3, b: RationalVec3) -> Self {
        if a <= b {
            Edge(a, b)
        } else {
            Edge(b, a)
        }
    }

    pub fn endpoints(&self) -> (RationalVec3, RationalVec3) {
        (self.0, self.1)
    }

    pub fn transform(&self, g: &Isometry) -> Edge {
        Edge::new(g.apply(self.0), g.apply(self.1))
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.0, self.1)
    }
}

/// A face: a finite vertex cycle, or one period of an infinite polygon.
///
/// For infinite faces `vertices` holds `n + 1` consecutive vertices where
/// the last equals the first translated by `period`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Face {
    pub class: FaceClass,
    pub vertices: Vec<RationalVec3>,
    pub period: Option<RationalVec3>,
}

/// The vertices of a face near a box, in order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FaceRun {
    pub vertices: Vec<RationalVec3>,
    /// True for finite faces, whose run closes up.
    pub closed: bool,
}

impl FaceRun {
    pub fn edges(&self) -> Vec<Edge> {
        let v = &self.vertices;
        let mut out: Vec<Edge> = v.windows(2).map(|w| Edge::new(w[0], w[1])).collect();
        if self.closed && v.len() > 2 {
            out.push(Edge::new(v[v.len() - 1], v[0]));
        }
        out
    }

    /// `(prev, vertex, next)` triples.
    pub fn corners(&self) -> Vec<(RationalVec3, RationalVec3, RationalVec3)> {
        let v = &self.vertices;
        let n = v.len();
        if self.closed {
            (0..n).map(|i| (v[(i + n - 1) % n], v[i], v[(i + 1) % n])).collect()
        } else {
            (1..n.saturating_sub(1)).map(|i| (v[i - 1], v[i], v[i + 1])).collect()
        }
    }
}

impl Face {
    /// A finite face from its vertex cycle.
    pub fn from_cycle(vertices: Vec<RationalVec3>) -> Face {
        let p = vertices.len();
        let class = if coplanar(&vertices) {
            FaceClass::ConvexPolygon(p)
        } else {
            FaceClass::SkewPolygon(p)
        };
        Face {
            class,
            vertices,
            period: None,
        }
    }

    /// An infinite face from `n + 1` consecutive vertices; the period is
    /// the difference of the last and first.
    pub fn from_segment(vertices: Vec<RationalVec3>) -> Face {
        let n = vertices.len() - 1;
        let period = vertices[n] - vertices[0];
        let class = if coplanar(&vertices) {
            FaceClass::Zigzag
        } else {
            FaceClass::Helix(n)
        };
        Face {
            class,
            vertices,
            period: Some(period),
        }
    }

    pub fn is_finite(&self) -> bool {
        self.period.is_none()
    }

    /// Number of distinct vertices in one cycle or one period.
    pub fn cycle_len(&self) -> usize {
        match self.period {
            None => self.vertices.len(),
            Some(_) => self.vertices.len() - 1,
        }
    }

    /// The `k`-th vertex, counting from `vertices[0]`; wraps finite faces.
    pub fn vertex_at(&self, k: i64) -> RationalVec3 {
        let n = self.cycle_len() as i64;
        let (q, j) = k.div_mod_floor(&n);
        match self.period {
            None => self.vertices[j as usize],
            Some(p) => self.vertices[j as usize] + p.scale(q),
        }
    }

    pub fn transform(&self, g: &Isometry) -> Face {
        Face {
            class: self.class,
            vertices: self.vertices.iter().map(|v| g.apply(*v)).collect(),
            period: self.period.map(|p| g.linear().apply(p)),
        }
    }

    /// Canonical representative, so that equal faces compare equal.
    ///
    /// Finite faces start at their smallest vertex and run in the direction
    /// of the smaller neighbour. Infinite faces get a lexicographically
    /// positive period and start at the smallest vertex in the slab
    /// `0 <= v·p < p·p`.
    pub fn canonical(&self) -> Face {
        match self.period {
            None => {
                let n = self.vertices.len();
                let mut best: Option<Vec<RationalVec3>> = None;
                for reversed in [false, true] {
                    let mut cyc = self.vertices.clone();
                    if reversed {
                        cyc.reverse();
                    }
                    for s in 0..n {
                        let mut cand = cyc.clone();
                        cand.rotate_left(s);
                        if best.as_ref().is_none_or(|b| cand < *b) {
                            best = Some(cand);
                        }
                    }
                }
                Face {
                    class: self.class,
                    vertices: best.unwrap_or_default(),
                    period: None,
                }
            }
            Some(p) => {
                let (verts, p) = if p > RationalVec3::ZERO {
                    (self.vertices.clone(), p)
                } else {
                    let mut v = self.vertices.clone();
                    v.reverse();
                    (v, -p)
                };
                let n = verts.len() - 1;
                let pp = p.dot4(&p);
                let reduce = |v: RationalVec3| -> (RationalVec3, i64) {
                    let q = Integer::div_floor(&v.dot4(&p), &pp);
                    (v - p.scale(q), q)
                };
                let (start, _) = (0..n)
                    .map(|j| (j, reduce(verts[j]).0))
                    .min_by_key(|&(_, r)| r)
                    .expect("infinite face has vertices");
                let shift = -reduce(verts[start]).1;
                let oriented = Face {
                    class: self.class,
                    vertices: verts,
                    period: Some(p),
                };
                let vertices = (0..=n as i64)
                    .map(|k| oriented.vertex_at(start as i64 + k) + p.scale(shift))
                    .collect();
                Face {
                    class: self.class,
                    vertices,
                    period: Some(p),
                }
            }
        }
    }

    /// Consecutive vertices covering every vertex of the face inside `bx`,
    /// padded by one vertex on each side for infinite faces. Empty if the
    /// face misses the box.
    pub fn run_within(&self, bx: &IntBox) -> FaceRun {
        let Some(p) = self.period else {
            let meets = self.vertices.iter().any(|v| bx.contains(v));
            return FaceRun {
                vertices: if meets { self.vertices.clone() } else { Vec::new() },
                closed: true,
            };
        };
        let n = self.cycle_len() as i64;
        let ph = p.halves();
        let mut range: Option<(i64, i64)> = None;
        for j in 0..n {
            let h = self.vertices[j as usize].halves();
            let mut lo = i64::MIN;
            let mut hi = i64::MAX;
            for i in 0..3 {
                let (a, b) = (2 * bx.min[i] - h[i], 2 * bx.max[i] - h[i]);
                match ph[i].cmp(&0) {
                    std::cmp::Ordering::Equal => {
                        if a > 0 || b < 0 {
                            lo = 1;
                            hi = 0;
                        }
                    }
                    std::cmp::Ordering::Greater => {
                        lo = lo.max(Integer::div_ceil(&a, &ph[i]));
                        hi = hi.min(Integer::div_floor(&b, &ph[i]));
                    }
                    std::cmp::Ordering::Less => {
                        lo = lo.max(Integer::div_ceil(&b, &ph[i]));
                        hi = hi.min(Integer::div_floor(&a, &ph[i]));
                    }
                }
            }
            if lo <= hi {
                let (kl, kh) = (j + lo * n, j + hi * n);
                range = Some(match range {
                    None => (kl, kh),
                    Some((a, b)) => (a.min(kl), b.max(kh)),
                });
            }
        }
        let vertices = match range {
            None => Vec::new(),
            Some((lo, hi)) => (lo - 1..=hi + 1).map(|k| self.vertex_at(k)).collect(),
        };
        FaceRun {
            vertices,
            closed: false,
        }
    }

    /// True if every vertex of the face lies in one plane.
    pub fn is_planar(&self) -> bool {
        self.class.is_planar()
    }
}

/// Traces the base face: the orbit of the base vertex under `⟨R0, R1⟩`.
///
/// The step map applies `R1`, then `R0`, so the vertices run
/// `o, R0(o), R0(R1(R0(o))), ...`.
pub fn trace_base_face(gs: &GeneratorSet, max_steps: usize) -> Result<Face, WythoffError> {
    let step = gs.r1().then(gs.r0());
    let o = gs.base_vertex();
    let n = step.linear().order();
    let power = step.power(n as i64);
    let face = if power.is_identity() {
        let mut vertices = vec![o];
        let mut v = step.apply(o);
        while v != o {
            if vertices.len() >= max_steps {
                return Err(WythoffError::TraceOverflow(max_steps));
            }
            vertices.push(v);
            v = step.apply(v);
        }
        if vertices.len() < 3 {
            return Err(WythoffError::DegenerateFace(format!(
                "face orbit has only {} vertices",
                vertices.len()
            )));
        }
        Face::from_cycle(vertices)
    } else {
        if n + 1 > max_steps {
            return Err(WythoffError::TraceOverflow(max_steps));
        }
        let mut vertices = vec![step.inverse().apply(o), o];
        for _ in 1..n {
            let last = *vertices.last().expect("nonempty");
            vertices.push(step.apply(last));
        }
        if n == 1 || collinear(&vertices) {
            return Err(WythoffError::DegenerateFace(format!(
                "twist {step} yields a linear apeirogon"
            )));
        }
        let face = Face::from_segment(vertices);
        if face.period != Some(power.translation()) {
            return Err(WythoffError::DegenerateFace(format!(
                "period {:?} differs from the twist translation {}",
                face.period,
                power.translation()
            )));
        }
        match face.class {
            FaceClass::Zigzag if n == 2 => {}
            FaceClass::Helix(3 | 4) => {}
            _ => {
                return Err(WythoffError::UnsupportedFace(format!(
                    "infinite face with twist {step} of linear order {n}"
                )))
            }
        }
        face
    };
    let d = (face.vertices[1] - face.vertices[0]).norm2();
    let uneven = (0..face.cycle_len() as i64).any(|k| (face.vertex_at(k + 1) - face.vertex_at(k)).norm2() != d);
    if uneven {
        return Err(WythoffError::DegenerateFace("unequal edge lengths".into()));
    }
    Ok(face)
}

const DEFAULT_TRACE_STEPS: usize = 64;

/// [`trace_base_face`] with a generous step bound.
pub fn base_face(gs: &GeneratorSet) -> Result<Face, WythoffError> {
    trace_base_face(gs, DEFAULT_TRACE_STEPS)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BuildOptions {
    /// Width of the collar explored around the requested box.
    pub margin: i64,
    /// Maximum number of group elements visited.
    pub node_cap: usize,
    /// Fail instead of exploring from a base vertex outside the box.
    pub require_base: bool,
}

impl Default for BuildOptions {
    fn default() -> Self {
        BuildOptions {
            margin: 2,
            node_cap: 4_000_000,
            require_base: false,
        }
    }
}

/// A bounded realization of a complex.
///
/// The complex is explored on the requested box widened by a margin; the
/// requested box is the interior, where every query is exact.
#[derive(Debug, Clone)]
pub struct ComplexRegion {
    bounds: IntBox,
    margin: i64,
    vertices: BTreeSet<RationalVec3>,
    edges: BTreeSet<Edge>,
    faces: Vec<Face>,
    edge_faces: HashMap<Edge, Vec<usize>>,
    corners: HashMap<RationalVec3, Vec<(usize, RationalVec3, RationalVec3)>>,
    neighbors: HashMap<RationalVec3, BTreeSet<RationalVec3>>,
}

impl PartialEq for ComplexRegion {
    fn eq(&self, other: &Self) -> bool {
        self.bounds == other.bounds
            && self.margin == other.margin
            && self.vertices == other.vertices
            && self.edges == other.edges
            && self.faces == other.faces
    }
}

impl ComplexRegion {
    /// Assembles a region from faces, keeping those that meet the widened box.
    pub fn from_faces(bounds: IntBox, margin: i64, faces: impl IntoIterator<Item = Face>) -> Self {
        let working = bounds.expand(margin);
        let canonical: BTreeSet<Face> = faces.into_iter().map(|f| f.canonical()).collect();
        let mut region = ComplexRegion {
            bounds,
            margin,
            vertices: BTreeSet::new(),
            edges: BTreeSet::new(),
            faces: Vec::new(),
            edge_faces: HashMap::new(),
            corners: HashMap::new(),
            neighbors: HashMap::new(),
        };
        for face in canonical {
            let run = face.run_within(&working);
            if run.vertices.is_empty() {
                continue;
            }
            let idx = region.faces.len();
            for e in run.edges() {
                let (a, b) = e.endpoints();
                if !working.contains(&a) && !working.contains(&b) {
                    continue;
                }
                region.edges.insert(e);
                region.edge_faces.entry(e).or_default().push(idx);
                region.neighbors.entry(a).or_default().insert(b);
                region.neighbors.entry(b).or_default().insert(a);
            }
            for (prev, v, next) in run.corners() {
                if working.contains(&v) {
                    region.corners.entry(v).or_default().push((idx, prev, next));
                }
            }
            region
                .vertices
                .extend(run.vertices.iter().filter(|v| working.contains(v)));
            region.faces.push(face);
        }
        region
    }

    pub fn bounds(&self) -> IntBox {
        self.bounds
    }

    pub fn margin(&self) -> i64 {
        self.margin
    }

    pub fn working_box(&self) -> IntBox {
        self.bounds.expand(self.margin)
    }

    /// Vertices in the widened box.
    pub fn vertices(&self) -> &BTreeSet<RationalVec3> {
        &self.vertices
    }

    /// Edges with an endpoint in the widened box.
    pub fn edges(&self) -> &BTreeSet<Edge> {
        &self.edges
    }

    /// Canonical faces meeting the widened box, sorted.
    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn is_interior_vertex(&self, v: &RationalVec3) -> bool {
        self.bounds.contains(v)
    }

    pub fn is_interior_edge(&self, e: &Edge) -> bool {
        let (a, b) = e.endpoints();
        self.bounds.contains(&a) && self.bounds.contains(&b)
    }

    pub fn interior_vertices(&self) -> BTreeSet<RationalVec3> {
        self.vertices.iter().copied().filter(|v| self.bounds.contains(v)).collect()
    }

    pub fn interior_edges(&self) -> BTreeSet<Edge> {
        self.edges.iter().copied().filter(|e| self.is_interior_edge(e)).collect()
    }

    /// Faces with a vertex in the interior box.
    pub fn interior_faces(&self) -> Vec<&Face> {
        self.faces
            .iter()
            .filter(|f| !f.run_within(&self.bounds).vertices.is_empty())
            .collect()
    }

    pub fn contains_face(&self, face: &Face) -> bool {
        self.faces.binary_search(&face.canonical()).is_ok()
    }

    /// Faces containing an edge, as indices into [`faces`](Self::faces).
    pub fn faces_at_edge(&self, e: &Edge) -> &[usize] {
        self.edge_faces.get(e).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Corners `(face index, previous vertex, next vertex)` at a vertex.
    pub fn corners_at(&self, v: &RationalVec3) -> &[(usize, RationalVec3, RationalVec3)] {
        self.corners.get(v).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn neighbors(&self, v: &RationalVec3) -> BTreeSet<RationalVec3> {
        self.neighbors.get(v).cloned().unwrap_or_default()
    }

    /// The number of faces containing an interior edge.
    pub fn faces_per_edge(&self, e: &Edge) -> Result<usize, WythoffError> {
        if !self.is_interior_edge(e) {
            return Err(WythoffError::BoundaryArtifact(format!("edge {e}")));
        }
        Ok(self.faces_at_edge(e).len())
    }

    /// The vertex-figure at an interior vertex.
    pub fn vertex_figure(&self, v: &RationalVec3) -> Result<VertexFigure, WythoffError> {
        if !self.is_interior_vertex(v) {
            return Err(WythoffError::BoundaryArtifact(format!("vertex {v}")));
        }
        let mut edges: BTreeMap<(RationalVec3, RationalVec3), usize> = BTreeMap::new();
        for &(_, prev, next) in self.corners_at(v) {
            let key = if prev <= next { (prev, next) } else { (next, prev) };
            *edges.entry(key).or_default() += 1;
        }
        Ok(VertexFigure {
            center: *v,
            neighbor_positions: self.neighbors(v),
            edges,
        })
    }

    /// True if the interiors agree: vertices, edges and faces meeting the box.
    pub fn same_interior(&self, other: &ComplexRegion) -> bool {
        self.bounds == other.bounds
            && self.interior_vertices() == other.interior_vertices()
            && self.interior_edges() == other.interior_edges()
            && self.interior_faces() == other.interior_faces()
    }
}

pub fn build_complex(gs: &GeneratorSet, bounds: IntBox) -> Result<ComplexRegion, WythoffError> {
    build_complex_with(gs, bounds, &BuildOptions::default())
}

/// Breadth-first enumeration of the group elements whose image of the base
/// vertex lies in the widened box, followed by face collection.
pub fn build_complex_with(
    gs: &GeneratorSet,
    bounds: IntBox,
    opts: &BuildOptions,
) -> Result<ComplexRegion, WythoffError> {
    let base = gs.base_vertex();
    if opts.require_base && !bounds.contains(&base) {
        return Err(WythoffError::BaseOutsideBox { base, bounds });
    }
    let face = base_face(gs)?;
    let explore = bounds.expand(opts.margin).hull_with(&base);

    let mut moves = gs.generators();
    for g in gs.g2().generators.iter() {
        if !g.then(g).is_identity() {
            moves.push(g.inverse());
        }
    }

    let mut seen: HashSet<Isometry> = HashSet::from([Isometry::IDENTITY]);
    let mut queue = VecDeque::from([Isometry::IDENTITY]);
    let mut faces: HashSet<Face> = HashSet::new();
    while let Some(g) = queue.pop_front() {
        faces.insert(face.transform(&g).canonical());
        for h in &moves {
            let next = h.then(&g);
            if explore.contains(&next.apply(base)) && seen.insert(next) {
                if seen.len() > opts.node_cap {
                    let partial = ComplexRegion::from_faces(bounds, opts.margin, faces);
                    return Err(WythoffError::ResourceLimit {
                        cap: opts.node_cap,
                        partial: Box::new(partial),
                    });
                }
                queue.push_back(next);
            }
        }
    }
    Ok(ComplexRegion::from_faces(bounds, opts.margin, faces))
}

/// The number of elements of `G2` that map the base face onto itself.
pub fn flag_stabilizer_order(gs: &GeneratorSet) -> Result<usize, WythoffError> {
    let face = base_face(gs)?.canonical();
    Ok(gs
        .g2()
        .elements
        .iter()
        .filter(|g| face.transform(g).canonical() == face)
        .count())
}

/// Faces per edge predicted by the group: `|G2|` over the flag stabilizer.
pub fn algebraic_r(gs: &GeneratorSet) -> Result<usize, WythoffError> {
    Ok(gs.g2().r / flag_stabilizer_order(gs)?)
}

/// The neighbours of a vertex and the multigraph induced by face corners.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VertexFigure {
    pub center: RationalVec3,
    pub neighbor_positions: BTreeSet<RationalVec3>,
    /// Multiplicity of each edge `{u, w}` with `u < w`.
    #[serde(serialize_with = "serialize_vf_edges")]
    pub edges: BTreeMap<(RationalVec3, RationalVec3), usize>,
}

fn serialize_vf_edges<S: Serializer>(
    edges: &BTreeMap<(RationalVec3, RationalVec3), usize>,
    s: S,
) -> Result<S::Ok, S::Error> {
    #[derive(Serialize)]
    struct Entry {
        ends: [RationalVec3; 2],
        multiplicity: usize,
    }
    let v: Vec<Entry> = edges
        .iter()
        .map(|(&(a, b), &m)| Entry {
            ends: [a, b],
            multiplicity: m,
        })
        .collect();
    v.serialize(s)
}

impl VertexFigure {
    /// Neighbour vectors relative to the center.
    pub fn relative(&self) -> Vec<RationalVec3> {
        self.neighbor_positions.iter().map(|u| *u - self.center).collect()
    }

    /// The figure translated to the origin.
    pub fn centered(&self) -> VertexFigure {
        let c = self.center;
        VertexFigure {
            center: RationalVec3::ZERO,
            neighbor_positions: self.neighbor_positions.iter().map(|u| *u - c).collect(),
            edges: self.edges.iter().map(|(&(a, b), &m)| ((a - c, b - c), m)).collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VertexFigureShape {
    Tetrahedron,
    Cube,
    Octahedron,
    Cuboctahedron,
    /// The cuboctahedral edge graph realized with skew square circuits.
    NsCuboctahedron,
    Square,
}

/// A reference vertex-figure, optionally with every edge doubled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct VertexFigureLabel {
    pub shape: VertexFigureShape,
    pub double: bool,
}

impl VertexFigureShape {
    pub const ALL: [VertexFigureShape; 6] = [
        VertexFigureShape::Tetrahedron,
        VertexFigureShape::Cube,
        VertexFigureShape::Octahedron,
        VertexFigureShape::Cuboctahedron,
        VertexFigureShape::NsCuboctahedron,
        VertexFigureShape::Square,
    ];
}

const SHAPE_NAMES: [(VertexFigureShape, &str); 6] = [
    (VertexFigureShape::Tetrahedron, "tetrahedron"),
    (VertexFigureShape::Cube, "cube"),
    (VertexFigureShape::Octahedron, "octahedron"),
    (VertexFigureShape::Cuboctahedron, "cuboctahedron"),
    (VertexFigureShape::NsCuboctahedron, "ns-cuboctahedron"),
    (VertexFigureShape::Square, "square"),
];

impl fmt::Display for VertexFigureLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = SHAPE_NAMES
            .iter()
            .find(|(s, _)| *s == self.shape)
            .map(|(_, n)| *n)
            .unwrap_or_default();
        if self.double {
            write!(f, "double {name}")
        } else {
            f.write_str(name)
        }
    }
}

impl FromStr for VertexFigureLabel {
    type Err = WythoffError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (double, rest) = match s.strip_prefix("double ") {
            Some(r) => (true, r),
            None => (false, s),
        };
        let shape = SHAPE_NAMES
            .iter()
            .find(|(_, n)| *n == rest)
            .map(|(sh, _)| *sh)
            .ok_or_else(|| WythoffError::UnknownVertexFigure(s.to_string()))?;
        Ok(VertexFigureLabel { shape, double })
    }
}

impl Serialize for VertexFigureLabel {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for VertexFigureLabel {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

/// Points and edges (with multiplicity) of a reference vertex-figure.
pub fn reference_model(label: VertexFigureLabel) -> (Vec<RationalVec3>, Vec<(usize, usize, usize)>) {
    let p = RationalVec3::new;
    let points: Vec<RationalVec3> = match label.shape {
        VertexFigureShape::Tetrahedron => vec![p(1, -1, 1), p(-1, 1, 1), p(1, 1, -1), p(-1, -1, -1)],
        VertexFigureShape::Cube => {
            let mut v = Vec::new();
            for x in [-1, 1] {
                for y in [-1, 1] {
                    for z in [-1, 1] {
                        v.push(p(x, y, z));
                    }
                }
            }
            v
        }
        VertexFigureShape::Octahedron => {
            vec![p(1, 0, 0), p(-1, 0, 0), p(0, 1, 0), p(0, -1, 0), p(0, 0, 1), p(0, 0, -1)]
        }
        VertexFigureShape::Cuboctahedron | VertexFigureShape::NsCuboctahedron => {
            let mut v = Vec::new();
            for a in [-1, 1] {
                for b in [-1, 1] {
                    v.push(p(a, b, 0));
                    v.push(p(a, 0, b));
                    v.push(p(0, a, b));
                }
            }
            v
        }
        VertexFigureShape::Square => vec![p(1, 0, 0), p(0, 1, 0), p(-1, 0, 0), p(0, -1, 0)],
    };
    let adjacent = |a: &RationalVec3, b: &RationalVec3| -> bool {
        let d = a.dot(b);
        match label.shape {
            VertexFigureShape::Tetrahedron => true,
            VertexFigureShape::Cube => (*a - *b).norm2() == 4.into(),
            VertexFigureShape::Octahedron | VertexFigureShape::Square => d == 0.into(),
            VertexFigureShape::Cuboctahedron => d == 1.into(),
            VertexFigureShape::NsCuboctahedron => d == (-1).into(),
        }
    };
    let mult = if label.double { 2 } else { 1 };
    let mut edges = Vec::new();
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            if adjacent(&points[i], &points[j]) {
                edges.push((i, j, mult));
            }
        }
    }
    (points, edges)
}

/// True iff the figure is congruent, up to one similarity fixing the
/// center, to the reference model with matching edge multiplicities.
/// The reference model congruent to a vertex-figure, if any.
pub fn identify_vertex_figure(vf: &VertexFigure) -> Option<VertexFigureLabel> {
    VertexFigureShape::ALL
        .into_iter()
        .flat_map(|shape| [false, true].map(|double| VertexFigureLabel { shape, double }))
        .find(|label| match_vertex_figure(vf, *label))
}

pub fn match_vertex_figure(vf: &VertexFigure, expected: VertexFigureLabel) -> bool {
    let (model, model_edges) = reference_model(expected);
    let pts = vf.relative();
    let index: HashMap<RationalVec3, usize> = vf
        .neighbor_positions
        .iter()
        .enumerate()
        .map(|(i, u)| (*u, i))
        .collect();
    let mut vf_edges = Vec::new();
    for (&(a, b), &m) in &vf.edges {
        match (index.get(&a), index.get(&b)) {
            (Some(&i), Some(&j)) => vf_edges.push((i, j, m)),
            _ => return false,
        }
    }
    congruent_graphs(&pts, &vf_edges, &model, &model_edges)
}

/// Backtracking search for a bijection preserving the Gram matrix up to a
/// common scale and the edge multiplicities.
pub fn congruent_graphs(
    a: &[RationalVec3],
    a_edges: &[(usize, usize, usize)],
    b: &[RationalVec3],
    b_edges: &[(usize, usize, usize)],
) -> bool {
    let n = a.len();
    if n == 0 || n != b.len() || a_edges.len() != b_edges.len() {
        return false;
    }
    let mut ma = vec![vec![0usize; n]; n];
    for &(i, j, m) in a_edges {
        ma[i][j] = m;
        ma[j][i] = m;
    }
    let mut mb = vec![vec![0usize; n]; n];
    for &(i, j, m) in b_edges {
        mb[i][j] = m;
        mb[j][i] = m;
    }
    let na = a[0].dot4(&a[0]) as i128;
    let nb = b[0].dot4(&b[0]) as i128;
    if a.iter().any(|u| u.dot4(u) as i128 != na) || b.iter().any(|u| u.dot4(u) as i128 != nb) {
        return false;
    }
    let gram_ok = |i: usize, j: usize, bi: usize, bj: usize| {
        a[i].dot4(&a[j]) as i128 * nb == b[bi].dot4(&b[bj]) as i128 * na
    };
    fn search(
        k: usize,
        assign: &mut Vec<usize>,
        used: &mut Vec<bool>,
        ma: &[Vec<usize>],
        mb: &[Vec<usize>],
        gram_ok: &dyn Fn(usize, usize, usize, usize) -> bool,
    ) -> bool {
        let n = used.len();
        if k == n {
            return true;
        }
        for cand in 0..n {
            if used[cand] {
                continue;
            }
            let ok = (0..k).all(|i| ma[i][k] == mb[assign[i]][cand] && gram_ok(i, k, assign[i], cand));
            if ok {
                used[cand] = true;
                assign.push(cand);
                if search(k + 1, assign, used, ma, mb, gram_ok) {
                    return true;
                }
                assign.pop();
                used[cand] = false;
            }
        }
        false
    }
    search(0, &mut Vec::with_capacity(n), &mut vec![false; n], &ma, &mb, &gram_ok)
}

/// Reflection in an affine plane, computed exactly.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PlaneReflection {
    normal: [i64; 3],
    point: RationalVec3,
}

impl PlaneReflection {
    /// The plane through the first three non-collinear points, if any.
    pub fn through(points: &[RationalVec3]) -> Option<PlaneReflection> {
        let p0 = *points.first()?;
        for i in 1..points.len() {
            for j in i + 1..points.len() {
                let n = (points[i] - p0).cross4(&(points[j] - p0));
                if n != [0; 3] {
                    let g = n.iter().fold(0i64, |g, x| g.gcd(x));
                    return Some(PlaneReflection {
                        normal: n.map(|x| x / g),
                        point: p0,
                    });
                }
            }
        }
        None
    }

    pub fn normal(&self) -> [i64; 3] {
        self.normal
    }

    fn reflect_halves(&self, h: [i64; 3], affine: bool) -> Option<[i64; 3]> {
        let n = self.normal;
        let base = if affine { self.point.halves() } else { [0; 3] };
        let s: i64 = (0..3).map(|i| n[i] * (h[i] - base[i])).sum();
        let nn: i64 = n.iter().map(|x| x * x).sum();
        let mut out = [0; 3];
        for i in 0..3 {
            let num = 2 * s * n[i];
            if num % nn != 0 {
                return None;
            }
            out[i] = h[i] - num / nn;
        }
        Some(out)
    }

    /// The mirror image of a point, if representable with half-integers.
    pub fn apply(&self, v: RationalVec3) -> Option<RationalVec3> {
        self.reflect_halves(v.halves(), true).map(RationalVec3::from_halves)
    }

    pub fn apply_face(&self, f: &Face) -> Option<Face> {
        let vertices = f.vertices.iter().map(|v| self.apply(*v)).collect::<Option<Vec<_>>>()?;
        let period = match f.period {
            None => None,
            Some(p) => Some(RationalVec3::from_halves(self.reflect_halves(p.halves(), false)?)),
        };
        Some(Face {
            class: f.class,
            vertices,
            period,
        })
    }

    /// The reflection as an isometry, when its linear part is a signed
    /// permutation.
    pub fn as_isometry(&self) -> Option<Isometry> {
        let e = |i: usize| {
            let mut h = [0; 3];
            h[i] = 2;
            self.reflect_halves(h, false)
        };
        let rows = [e(0)?, e(1)?, e(2)?].map(|h| h.map(|x| x / 2));
        let linear = SignedPermMatrix::from_rows(rows).ok()?;
        let t = self.apply(RationalVec3::ZERO)?;
        Some(Isometry::new(linear, t))
    }
}

/// True iff the reflection in the plane of the base face is a symmetry of
/// the region, tested on every interior element whose image is in range.
pub fn detect_face_mirror(gs: &GeneratorSet, cr: &ComplexRegion) -> bool {
    let Ok(face) = base_face(gs) else {
        return false;
    };
    if !face.is_planar() {
        return false;
    }
    let Some(mirror) = PlaneReflection::through(&face.vertices) else {
        return false;
    };
    let working = cr.working_box();
    let mut checked = 0usize;
    for v in cr.interior_vertices() {
        match mirror.apply(v) {
            None => return false,
            Some(w) if working.contains(&w) => {
                if !cr.vertices().contains(&w) {
                    return false;
                }
                checked += 1;
            }
            Some(_) => {}
        }
    }
    for e in cr.interior_edges() {
        let (a, b) = e.endpoints();
        let (Some(a2), Some(b2)) = (mirror.apply(a), mirror.apply(b)) else {
            return false;
        };
        if working.contains(&a2) && working.contains(&b2) && !cr.edges().contains(&Edge::new(a2, b2)) {
            return false;
        }
    }
    for f in cr.interior_faces() {
        let Some(img) = mirror.apply_face(f) else {
            return false;
        };
        if !img.run_within(&working).vertices.is_empty() && !cr.contains_face(&img) {
            return false;
        }
    }
    checked > 0
}
