//! Operations on generator sets: `λ0`, `λ1`, the Petrie-type operation that
//! swaps mirror vectors `(0,1)` and `(0,2)`, the apeir construction, and the
//! constrained search that recovers generator sets from geometric data.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{IntBox, Isometry, RationalVec3, SignedPermMatrix};
use crate::lattices::{self, VertexSetLabel};
use crate::point_groups::{self, closure, G2Kind, PointGroupLabel};
use crate::wythoff::{
    self, base_face, build_complex, detect_face_mirror, match_vertex_figure, ComplexRegion, Face, FaceClass,
    GeneratorSet, PlaneReflection, VertexFigureLabel, WythoffError,
};

#[derive(Debug, Clone, Error)]
pub enum GenOpsError {
    #[error("invalid element {id:?}: {reason}")]
    InvalidElement { id: String, reason: String },
    #[error("precondition violated: {0}")]
    PreconditionViolation(String),
    #[error(transparent)]
    Wythoff(#[from] WythoffError),
    #[error("invalid polyhedron data: {0}")]
    InvalidPolyhedron(String),
    #[error("reconstruction failed: {0}")]
    ReconstructionFailure(String),
    #[error("reconstruction is ambiguous: {} inequivalent candidates: {}", .0.len(), .0.join("; "))]
    Ambiguous(Vec<String>),
}

/// A catalog operation producing a generator set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case", deny_unknown_fields)]
pub enum OperationExpr {
    Lambda0 { base: String, element: String },
    Lambda1 { base: String, element: String },
    PetrieLambda { base: String },
    Apeir { polyhedron: String },
}

impl OperationExpr {
    /// The catalog entry this operation starts from, if any.
    pub fn base(&self) -> Option<&str> {
        match self {
            OperationExpr::Lambda0 { base, .. }
            | OperationExpr::Lambda1 { base, .. }
            | OperationExpr::PetrieLambda { base } => Some(base),
            OperationExpr::Apeir { .. } => None,
        }
    }
}

impl fmt::Display for OperationExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OperationExpr::Lambda0 { base, element } => write!(f, "{base}^lambda0({element})"),
            OperationExpr::Lambda1 { base, element } => write!(f, "{base}^lambda1({element})"),
            OperationExpr::PetrieLambda { base } => write!(f, "{base}^petrie"),
            OperationExpr::Apeir { polyhedron } => write!(f, "skel2(apeir {polyhedron})"),
        }
    }
}

/// Resolves an element id against the edge stabilizer of `gs`.
///
/// Ids are `G2` generator names, `R0`/`R1`, the selectors `@half_turn`,
/// `@reflection_perp_r0_axis` and `@reflection_perp_r1_mirror`, or products
/// `A*B*C` read left to right (apply `A` first). The result must lie in `G2`.
pub fn resolve_element(gs: &GeneratorSet, id: &str) -> Result<Isometry, GenOpsError> {
    let invalid = |reason: String| GenOpsError::InvalidElement {
        id: id.to_string(),
        reason,
    };
    let mut acc = Isometry::IDENTITY;
    for factor in id.split('*').map(str::trim) {
        let g = match factor {
            "R0" => *gs.r0(),
            "R1" => *gs.r1(),
            "@half_turn" => select_half_turn(gs).map_err(invalid)?,
            "@reflection_perp_r0_axis" => select_reflection_perp_r0_axis(gs).map_err(invalid)?,
            "@reflection_perp_r1_mirror" => select_reflection_perp_r1_mirror(gs).map_err(invalid)?,
            name => *gs
                .g2_names()
                .get(name)
                .ok_or_else(|| invalid(format!("no element named {name:?}")))?,
        };
        acc = acc.then(&g);
    }
    if !gs.g2().contains(&acc) {
        return Err(invalid(format!("{acc} is not an element of G2")));
    }
    Ok(acc)
}

fn g2_reflections(gs: &GeneratorSet) -> Vec<(Isometry, RationalVec3)> {
    gs.g2()
        .elements
        .iter()
        .filter(|g| g.fixed_space_dimension() == Some(2))
        .filter_map(|g| g.rotation_data().axis.map(|n| (*g, n)))
        .collect()
}

fn unique<T>(mut found: Vec<T>, what: &str) -> Result<T, String> {
    match found.len() {
        1 => Ok(found.remove(0)),
        0 => Err(format!("G2 has no {what}")),
        n => Err(format!("G2 has {n} candidates for the {what}")),
    }
}

fn select_half_turn(gs: &GeneratorSet) -> Result<Isometry, String> {
    let found = gs
        .g2()
        .elements
        .iter()
        .copied()
        .filter(|g| g.linear().is_proper() && g.is_involution())
        .collect();
    unique(found, "half-turn")
}

fn select_reflection_perp_r0_axis(gs: &GeneratorSet) -> Result<Isometry, String> {
    if gs.r0().fixed_space_dimension() != Some(1) {
        return Err("R0 is not a half-turn".into());
    }
    let axis = gs.r0().rotation_data().axis.ok_or("R0 has no axis")?;
    let found = g2_reflections(gs)
        .into_iter()
        .filter(|(_, n)| *n == axis)
        .map(|(g, _)| g)
        .collect();
    unique(found, "reflection with mirror perpendicular to the R0 axis")
}

fn select_reflection_perp_r1_mirror(gs: &GeneratorSet) -> Result<Isometry, String> {
    if gs.r1().fixed_space_dimension() != Some(2) {
        return Err("R1 is not a plane reflection".into());
    }
    let n1 = gs.r1().rotation_data().axis.ok_or("R1 has no normal")?;
    let found = g2_reflections(gs)
        .into_iter()
        .filter(|(_, n)| n.dot4(&n1) == 0)
        .map(|(g, _)| g)
        .collect();
    unique(found, "reflection with mirror perpendicular to the R1 mirror")
}

fn require_in_g2(gs: &GeneratorSet, r: &Isometry) -> Result<(), GenOpsError> {
    if gs.g2().contains(r) {
        Ok(())
    } else {
        Err(GenOpsError::InvalidElement {
            id: r.to_string(),
            reason: "not an element of G2".into(),
        })
    }
}

/// `(R0, R1, G2) ↦ (R0·R, R1, G2)`.
pub fn lambda0(gs: &GeneratorSet, r: &Isometry) -> Result<GeneratorSet, GenOpsError> {
    require_in_g2(gs, r)?;
    let r0 = gs.r0().then(r);
    if !r0.is_involution() {
        return Err(GenOpsError::PreconditionViolation(format!("R0·R = {r0} is not an involution")));
    }
    Ok(gs.with_r0_r1(r0, *gs.r1())?)
}

/// `(R0, R1, G2) ↦ (R0, R1·R, G2)`.
pub fn lambda1(gs: &GeneratorSet, r: &Isometry) -> Result<GeneratorSet, GenOpsError> {
    require_in_g2(gs, r)?;
    let r1 = gs.r1().then(r);
    if !r1.is_involution() {
        return Err(GenOpsError::PreconditionViolation(format!("R1·R = {r1} is not an involution")));
    }
    Ok(gs.with_r0_r1(*gs.r0(), r1)?)
}

/// The reflection in the plane of the base face, when the face is planar
/// and the reflection has a signed permutation linear part.
pub fn face_plane_reflection(gs: &GeneratorSet) -> Result<Option<Isometry>, GenOpsError> {
    let face = base_face(gs)?;
    if !face.is_planar() {
        return Ok(None);
    }
    Ok(PlaneReflection::through(&face.vertices).and_then(|m| m.as_isometry()))
}

/// `(R0, R1, S) ↦ (R0, T3·R1, S)` for cyclic `G2 = ⟨S⟩`.
pub fn petrie_lambda(gs: &GeneratorSet, t3: &Isometry) -> Result<GeneratorSet, GenOpsError> {
    let pre = |m: String| Err(GenOpsError::PreconditionViolation(m));
    if gs.g2().kind != G2Kind::Cyclic {
        return pre("G2 is not cyclic".into());
    }
    if t3.fixed_space_dimension() != Some(2) || !t3.is_involution() {
        return pre(format!("T3 = {t3} is not a plane reflection"));
    }
    let face = base_face(gs)?;
    if face.vertices.iter().any(|v| t3.apply(*v) != *v) {
        return pre(format!("T3 = {t3} does not fix the base face"));
    }
    for (name, g) in [("R0", gs.r0()), ("R1", gs.r1())] {
        if t3.then(g) != g.then(t3) {
            return pre(format!("T3 does not commute with {name}"));
        }
    }
    for s in gs.g2_names().values() {
        if s.conjugate_by(t3) != s.inverse() {
            return pre(format!("T3 does not invert {s}"));
        }
    }
    Ok(gs.with_r0_r1(*gs.r0(), t3.then(gs.r1()))?)
}

/// Replaces a dihedral `G2` by its rotation subgroup `⟨S⟩`.
pub fn rotation_form(gs: &GeneratorSet) -> Result<GeneratorSet, GenOpsError> {
    let s = gs
        .g2()
        .elements
        .iter()
        .filter(|g| g.linear().is_proper())
        .max_by_key(|g| g.order().unwrap_or(0))
        .copied()
        .ok_or_else(|| GenOpsError::PreconditionViolation("G2 is empty".into()))?;
    let names = BTreeMap::from([("S".to_string(), s)]);
    Ok(GeneratorSet::new(*gs.r0(), *gs.r1(), names, gs.base_vertex())?)
}

/// A finite rational regular polyhedron centered at `o`, given by its
/// initial vertex `w` and distinguished generators `T1, T2, T3`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RationalPolyhedron {
    pub schlafli: String,
    pub initial_vertex: RationalVec3,
    pub t1: Isometry,
    pub t2: Isometry,
    pub t3: Isometry,
}

/// Generators `T0..T3` of the apeirotope `apeir Q`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ApeirData {
    pub t: [Isometry; 4],
    pub base_vertex: RationalVec3,
}

pub fn apeir(q: &RationalPolyhedron) -> Result<ApeirData, GenOpsError> {
    let bad = |m: String| Err(GenOpsError::InvalidPolyhedron(format!("{}: {m}", q.schlafli)));
    let w = q.initial_vertex;
    for (name, t) in [("T1", &q.t1), ("T2", &q.t2), ("T3", &q.t3)] {
        if !t.is_involution() || !t.translation().is_zero() {
            return bad(format!("{name} = {t} is not a linear involution"));
        }
    }
    if q.t1.apply(w) == w {
        return bad("T1 fixes the initial vertex".into());
    }
    if q.t2.apply(w) != w || q.t3.apply(w) != w {
        return bad("T2 and T3 must fix the initial vertex".into());
    }
    Ok(ApeirData {
        t: [Isometry::point_reflection(w), q.t1, q.t2, q.t3],
        base_vertex: RationalVec3::ZERO,
    })
}

impl ApeirData {
    /// The 2-skeleton as `(R0, R1, G2) = (T0, T1, ⟨T2, T3⟩)`.
    pub fn skeleton(&self) -> Result<GeneratorSet, GenOpsError> {
        let names = BTreeMap::from([("T2".to_string(), self.t[2]), ("T3".to_string(), self.t[3])]);
        Ok(GeneratorSet::new(self.t[0], self.t[1], names, self.base_vertex)?)
    }
}

/// Geometric data from which a generator set is recovered by search.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Constraints {
    pub mirror_vector: (usize, usize),
    /// The twin vertex; when absent every member of the vertex set near
    /// the origin is tried.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub twin: Option<RationalVec3>,
    /// `R1` applied to the twin vertex.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub neighbor: Option<RationalVec3>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub face: Option<FaceClass>,
    /// Explicit base face: a vertex cycle, or a segment when `period` is set.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base_face: Option<Vec<RationalVec3>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub period: Option<RationalVec3>,
    pub g2: PointGroupLabel,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<usize>,
    pub vertex_set: VertexSetLabel,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vertex_figure: Option<VertexFigureLabel>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub special_group: Option<PointGroupLabel>,
}

impl Constraints {
    fn expected_face(&self) -> Option<Face> {
        let verts = self.base_face.clone()?;
        let face = match self.period {
            Some(p) => {
                let mut seg = verts;
                if seg.last().copied() != seg.first().map(|f| *f + p) {
                    let first = seg[0];
                    seg.push(first + p);
                }
                Face::from_segment(seg)
            }
            None => Face::from_cycle(verts),
        };
        Some(face.canonical())
    }
}

/// Result of a reconstruction search.
#[derive(Debug, Clone)]
pub struct Reconstruction {
    pub generators: GeneratorSet,
    /// Generator sets satisfying every constraint.
    pub hits: usize,
    /// Distinct regions built by the hits.
    pub distinct_regions: usize,
    /// Classes of regions up to point symmetries fixing the origin.
    pub congruence_classes: usize,
}

/// Box used to test candidate generator sets.
const SEARCH_BOX: (i64, i64) = (-1, 1);
/// Range of candidate twin coordinates when the twin is not given.
const TWIN_RANGE: i64 = 2;

/// Exhaustive search for generator sets matching the constraints.
///
/// `R1` ranges over linear involutions, `R0` over involutions sending the
/// origin to the twin, and `G2` over subgroups of the stabilizer of the
/// twin with the requested label. Every candidate is built and checked.
/// Candidates building congruent regions are equivalent; anything else is
/// reported as an ambiguity.
pub fn reconstruct_generators(c: &Constraints) -> Result<Reconstruction, GenOpsError> {
    let fail = |m: String| Err(GenOpsError::ReconstructionFailure(m));
    let order = match c.g2 {
        PointGroupLabel::Cyclic(p) => p,
        PointGroupLabel::Dihedral(p) => 2 * p,
        other => return fail(format!("{other} is not an edge stabilizer label")),
    };
    if let Some(r) = c.r {
        if matches!(c.g2, PointGroupLabel::Dihedral(_)) && r % 2 == 1 {
            return fail(format!("dihedral edge stabilizers have even order, got r = {r}"));
        }
        if r != order {
            return fail(format!("r = {r} does not match G2 = {}", c.g2));
        }
    }
    let expected_face = c.expected_face();
    let face_class = c.face.or(expected_face.as_ref().map(|f| f.class));
    let all = SignedPermMatrix::all();
    let twins: Vec<RationalVec3> = match c.twin {
        Some(t) => vec![t],
        None => lattices::enumerate(c.vertex_set, &IntBox::cube(-TWIN_RANGE, TWIN_RANGE).expect("valid box"))
            .into_iter()
            .filter(|v| !v.is_zero())
            .collect(),
    };
    let bounds = IntBox::cube(SEARCH_BOX.0, SEARCH_BOX.1).expect("valid box");
    let expected_vertices = lattices::enumerate(c.vertex_set, &bounds);

    let mut candidates = Vec::new();
    for &twin in &twins {
        let stabilizer: Vec<SignedPermMatrix> = all.iter().copied().filter(|m| m.apply(twin) == twin).collect();
        let groups = subgroups_with_label(&stabilizer, c.g2);
        let r1s: Vec<Isometry> = all
            .iter()
            .map(|m| Isometry::linear_map(*m))
            .filter(|g| g.is_involution() && g.fixed_space_dimension() == Some(c.mirror_vector.1))
            .filter(|g| g.apply(twin) != twin)
            .filter(|g| c.neighbor.is_none_or(|n| g.apply(twin) == n))
            .collect();
        let r0s: Vec<Isometry> = all
            .iter()
            .map(|m| Isometry::new(*m, twin))
            .filter(|g| g.is_involution() && g.apply(twin).is_zero())
            .filter(|g| g.fixed_space_dimension() == Some(c.mirror_vector.0))
            .collect();
        for g2 in &groups {
            for r0 in &r0s {
                for r1 in &r1s {
                    candidates.push((*r0, *r1, g2.clone()));
                }
            }
        }
    }

    let hits: Vec<(GeneratorSet, ComplexRegion)> = candidates
        .par_iter()
        .filter_map(|(r0, r1, g2)| {
            let names = name_g2(r0, g2);
            let gs = GeneratorSet::new(*r0, *r1, names, RationalVec3::ZERO).ok()?;
            let face = base_face(&gs).ok()?;
            if face_class.is_some_and(|fc| fc != face.class) {
                return None;
            }
            if expected_face.as_ref().is_some_and(|f| *f != face.canonical()) {
                return None;
            }
            if let Some(sg) = c.special_group {
                if point_groups::special_group(&gs).identify() != sg {
                    return None;
                }
            }
            if wythoff::algebraic_r(&gs).ok()? != order {
                return None;
            }
            let region = build_complex(&gs, bounds).ok()?;
            let edges_ok = region
                .interior_edges()
                .iter()
                .all(|e| region.faces_per_edge(e).ok() == Some(order));
            if !edges_ok || region.interior_vertices() != expected_vertices {
                return None;
            }
            if let Some(vf) = c.vertex_figure {
                let fig = region.vertex_figure(&RationalVec3::ZERO).ok()?;
                if !match_vertex_figure(&fig, vf) {
                    return None;
                }
            }
            if detect_face_mirror(&gs, &region) {
                return None;
            }
            Some((gs, region))
        })
        .collect();

    if hits.is_empty() {
        return fail(format!(
            "no generator set among {} candidates satisfies the constraints",
            candidates.len()
        ));
    }
    let mut hits = hits;
    hits.sort_by_key(|(gs, _)| gs.generators());

    let mut regions: Vec<(usize, BTreeSet<Face>)> = Vec::new();
    for (i, (_, region)) in hits.iter().enumerate() {
        let faces: BTreeSet<Face> = region.interior_faces().into_iter().cloned().collect();
        if !regions.iter().any(|(_, f)| *f == faces) {
            regions.push((i, faces));
        }
    }
    let mut classes: Vec<(usize, BTreeSet<Face>)> = Vec::new();
    for (i, faces) in &regions {
        if !classes.iter().any(|(_, rep)| congruent_by_point_symmetry(rep, faces)) {
            classes.push((*i, faces.clone()));
        }
    }
    if classes.len() > 1 {
        return Err(GenOpsError::Ambiguous(
            classes
                .iter()
                .map(|(i, _)| {
                    let gs = &hits[*i].0;
                    format!("R0={} R1={} G2={:?}", gs.r0(), gs.r1(), gs.g2().generators)
                })
                .collect(),
        ));
    }
    Ok(Reconstruction {
        generators: hits[0].0.clone(),
        hits: hits.len(),
        distinct_regions: regions.len(),
        congruence_classes: classes.len(),
    })
}

/// True if some element of `[3,4]` maps one face set onto the other.
pub fn congruent_by_point_symmetry(a: &BTreeSet<Face>, b: &BTreeSet<Face>) -> bool {
    a.len() == b.len()
        && SignedPermMatrix::all().into_iter().any(|m| {
            let g = Isometry::linear_map(m);
            a.iter().all(|f| b.contains(&f.transform(&g).canonical()))
        })
}

/// Subgroups of `stabilizer` with the given label, each with a minimal
/// generating list.
fn subgroups_with_label(stabilizer: &[SignedPermMatrix], label: PointGroupLabel) -> Vec<Vec<Isometry>> {
    let mut seen: BTreeSet<BTreeSet<SignedPermMatrix>> = BTreeSet::new();
    let mut out = Vec::new();
    let mut consider = |gens: Vec<SignedPermMatrix>| {
        let g = closure(&gens);
        if g.identify() == label && seen.insert(g.elements().clone()) {
            out.push(gens.into_iter().map(Isometry::linear_map).collect());
        }
    };
    for (i, a) in stabilizer.iter().enumerate() {
        consider(vec![*a]);
        for b in &stabilizer[i + 1..] {
            if a.is_proper() || b.is_proper() {
                continue;
            }
            consider(vec![*a, *b]);
        }
    }
    out
}

/// Names for the generators of a reconstructed edge stabilizer: `S` for a
/// cyclic group; for dihedral groups of order 4 the half-turn `R2`, the
/// reflection `R2hat` whose mirror is perpendicular to the axis of `R0` and
/// the other reflection `R2tilde`; otherwise `R2`, `R2hat` in order.
fn name_g2(r0: &Isometry, gens: &[Isometry]) -> BTreeMap<String, Isometry> {
    if gens.len() == 1 {
        return BTreeMap::from([("S".to_string(), gens[0])]);
    }
    let (a, b) = (gens[0], gens[1]);
    let half_turn = a.then(&b);
    if half_turn.is_involution() {
        let axis = (r0.fixed_space_dimension() == Some(1))
            .then(|| r0.rotation_data().axis)
            .flatten();
        let (hat, tilde) = if axis.is_some() && b.rotation_data().axis == axis {
            (b, a)
        } else {
            (a, b)
        };
        return BTreeMap::from([
            ("R2".to_string(), half_turn),
            ("R2hat".to_string(), hat),
            ("R2tilde".to_string(), tilde),
        ]);
    }
    BTreeMap::from([("R2".to_string(), a), ("R2hat".to_string(), b)])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iso(s: &str) -> Isometry {
        s.parse().unwrap()
    }

    fn p(x: i64, y: i64, z: i64) -> RationalVec3 {
        RationalVec3::new(x, y, z)
    }

    fn k5_1_1() -> GeneratorSet {
        let g2 = BTreeMap::from([("R2".into(), iso("(z,y,x)")), ("R2hat".into(), iso("(x,-y,z)"))]);
        GeneratorSet::new(iso("(-x,y,-z)+(1,0,1)"), iso("(-x,z,y)"), g2, RationalVec3::ZERO).unwrap()
    }

    #[test]
    fn lambda0_gives_point_reflection() {
        let gs = k5_1_1();
        let r = resolve_element(&gs, "R2hat").unwrap();
        let k01 = lambda0(&gs, &r).unwrap();
        assert_eq!(*k01.r0(), Isometry::point_reflection(p(1, 0, 1)));
        assert_eq!(point_groups::mirror_vector(&k01).unwrap(), (0, 1));
        let back = lambda0(&k01, &r).unwrap();
        assert_eq!(back, gs);
    }

    #[test]
    fn element_resolution() {
        let gs = k5_1_1();
        assert_eq!(resolve_element(&gs, "@reflection_perp_r0_axis").unwrap(), iso("(x,-y,z)"));
        assert_eq!(resolve_element(&gs, "@half_turn").unwrap(), iso("(z,-y,x)"));
        assert_eq!(resolve_element(&gs, "R2*R2hat").unwrap(), iso("(z,-y,x)"));
        assert!(matches!(
            resolve_element(&gs, "R0"),
            Err(GenOpsError::InvalidElement { .. })
        ));
        assert!(resolve_element(&gs, "nosuch").is_err());
    }

    #[test]
    fn lambda_preconditions() {
        let gs = k5_1_1();
        // R1 = (-x,z,y) times the half-turn (z,-y,x) has order 4.
        let half = resolve_element(&gs, "@half_turn").unwrap();
        assert!(matches!(lambda1(&gs, &half), Err(GenOpsError::PreconditionViolation(_))));
        assert!(matches!(lambda0(&gs, &iso("(y,x,z)")), Err(GenOpsError::InvalidElement { .. })));
    }

    #[test]
    fn apeir_validation() {
        let q = RationalPolyhedron {
            schlafli: "{4,3}".into(),
            initial_vertex: p(1, 1, 1),
            t1: iso("(-x,y,z)"),
            t2: iso("(y,x,z)"),
            t3: iso("(x,z,y)"),
        };
        let data = apeir(&q).unwrap();
        assert_eq!(data.t[0].apply(RationalVec3::ZERO), p(1, 1, 1));
        let skel = data.skeleton().unwrap();
        assert_eq!(base_face(&skel).unwrap().class, FaceClass::Zigzag);
        let mut bad = q.clone();
        bad.t2 = iso("(-x,y,z)");
        assert!(apeir(&bad).is_err());
    }

    #[test]
    fn inconsistent_constraints_fail() {
        let c = Constraints {
            mirror_vector: (1, 2),
            twin: Some(p(1, 1, 1)),
            neighbor: None,
            face: Some(FaceClass::SkewPolygon(4)),
            base_face: None,
            period: None,
            g2: PointGroupLabel::Dihedral(2),
            r: Some(3),
            vertex_set: VertexSetLabel::Bcc,
            vertex_figure: None,
            special_group: None,
        };
        assert!(matches!(
            reconstruct_generators(&c),
            Err(GenOpsError::ReconstructionFailure(_))
        ));
    }

    fn k02_constraints(period: RationalVec3) -> Constraints {
        Constraints {
            mirror_vector: (0, 2),
            twin: Some(p(1, 0, 1)),
            neighbor: None,
            face: None,
            base_face: Some(vec![p(0, 1, 1), p(0, 0, 0), p(1, 0, 1)]),
            period: Some(period),
            g2: PointGroupLabel::Dihedral(2),
            r: Some(4),
            vertex_set: VertexSetLabel::Fcc,
            vertex_figure: None,
            special_group: None,
        }
    }

    #[test]
    fn zigzag_complex_from_its_face() {
        let rec = reconstruct_generators(&k02_constraints(p(1, -1, 0))).unwrap();
        let gs = rec.generators;
        assert_eq!(*gs.r0(), Isometry::point_reflection(p(1, 0, 1)));
        assert_eq!(gs.r1().apply(p(1, 0, 1)), p(0, 1, 1));
        assert_eq!(gs.r1().fixed_space_dimension(), Some(2));
        assert_eq!(rec.congruence_classes, 1);
        // The period (1,1,0) is not parallel to the plane x + y - z = 0 of
        // the listed vertices, so no generator set produces it.
        assert!(matches!(
            reconstruct_generators(&k02_constraints(p(1, 1, 0))),
            Err(GenOpsError::ReconstructionFailure(_))
        ));
    }

    #[test]
    fn cyclic_reconstruction_from_row_data() {
        let c = Constraints {
            mirror_vector: (1, 2),
            twin: None,
            neighbor: None,
            face: Some(FaceClass::SkewPolygon(4)),
            base_face: None,
            period: None,
            g2: PointGroupLabel::Cyclic(3),
            r: Some(3),
            vertex_set: VertexSetLabel::Bcc,
            vertex_figure: Some("cube".parse().unwrap()),
            special_group: None,
        };
        let gs = reconstruct_generators(&c).unwrap().generators;
        assert_eq!(point_groups::mirror_vector(&gs).unwrap(), (1, 2));
        assert_eq!(gs.g2().label(), PointGroupLabel::Cyclic(3));
    }

    #[test]
    fn petrie_operation_is_an_involution() {
        let q = RationalPolyhedron {
            schlafli: "{3,3}".into(),
            initial_vertex: p(1, 1, 1),
            t1: iso("(x,-z,-y)"),
            t2: iso("(y,x,z)"),
            t3: iso("(x,z,y)"),
        };
        let rot = rotation_form(&apeir(&q).unwrap().skeleton().unwrap()).unwrap();
        assert_eq!(point_groups::mirror_vector(&rot).unwrap(), (0, 2));
        let t3 = face_plane_reflection(&rot).unwrap().unwrap();
        let dual = petrie_lambda(&rot, &t3).unwrap();
        assert_eq!(point_groups::mirror_vector(&dual).unwrap(), (0, 1));
        assert_eq!(petrie_lambda(&dual, &t3).unwrap(), rot);
        assert!(petrie_lambda(&k5_1_1(), &t3).is_err());
    }
}
