//! Checks every expected property of a catalog entry on a bounded region.

pub mod claims;
pub mod oracles;

use std::collections::{BTreeSet, HashMap};
use std::fmt::{self, Write as _};
use std::sync::{Arc, Mutex};
use std::time::{Duration, Instant};

use num_rational::Rational64;
use num_traits::Signed;
use serde::Serialize;
use thiserror::Error;

use crate::catalog::{Catalog, CatalogEntry, CatalogError, Claim, ExpectedProperties, MirrorSpec, Relation};
use crate::gen_ops::{self, congruent_by_point_symmetry};
use crate::geometry::IntBox;
use crate::lattices;
use crate::point_groups;
use crate::wythoff::{self, BuildOptions, ComplexRegion, Face, GeneratorSet, WythoffError};

pub use claims::{check_subcomplex, SubcomplexReport};
pub use oracles::{semiregular_s, triangular_oracle, SPlane};

#[derive(Debug, Clone, Error)]
pub enum VerifyError {
    #[error("degenerate box {0}: every axis needs min < max")]
    DegenerateBox(IntBox),
    #[error("regions built on different boxes {0} and {1}")]
    MismatchedBoxes(IntBox, IntBox),
    #[error("({normal:?}, {offset}) is not a face plane of the tetrahedron-octahedron honeycomb")]
    NotAnSPlane { normal: [i64; 3], offset: i64 },
    #[error(transparent)]
    Catalog(#[from] CatalogError),
    #[error(transparent)]
    Wythoff(#[from] WythoffError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skipped => "SKIP",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub status: Status,
    pub detail: String,
}

impl CheckResult {
    fn new(name: impl Into<String>, (ok, detail): (bool, String)) -> Self {
        CheckResult {
            name: name.into(),
            status: if ok { Status::Pass } else { Status::Fail },
            detail,
        }
    }

    fn compare<T: PartialEq + fmt::Display>(name: &str, expected: T, got: T) -> Self {
        let detail = if expected == got {
            format!("{got}")
        } else {
            format!("expected {expected}, got {got}")
        };
        CheckResult::new(name, (expected == got, detail))
    }

    fn skipped(name: impl Into<String>, detail: impl Into<String>) -> Self {
        CheckResult {
            name: name.into(),
            status: Status::Skipped,
            detail: detail.into(),
        }
    }

    fn failed(name: impl Into<String>, detail: impl fmt::Display) -> Self {
        CheckResult::new(name, (false, detail.to_string()))
    }
}

/// Verification outcome for one entry.
#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub entry: String,
    pub bounds: IntBox,
    pub margin: i64,
    pub scale: i64,
    pub checks: Vec<CheckResult>,
    /// Wall-clock time; left out of JSON so that output is reproducible.
    #[serde(skip)]
    pub elapsed: Duration,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != Status::Fail)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| c.status == Status::Fail)
    }

    pub fn check(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let verdict = if self.passed() { "PASS" } else { "FAIL" };
        let _ = writeln!(
            out,
            "{} on {} (margin {}, scale {}): {verdict} in {:.2?}",
            self.entry, self.bounds, self.margin, self.scale, self.elapsed
        );
        let width = self.checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
        for c in &self.checks {
            let _ = writeln!(out, "  {} {:width$}  {}", c.status, c.name, c.detail);
        }
        out
    }
}

/// Checks entries of one catalog on one box, sharing built regions.
pub struct Verifier<'a> {
    catalog: &'a Catalog,
    bounds: IntBox,
    options: BuildOptions,
    regions: Mutex<HashMap<String, Arc<ComplexRegion>>>,
}

impl<'a> Verifier<'a> {
    pub fn new(catalog: &'a Catalog, bounds: IntBox) -> Result<Self, VerifyError> {
        Verifier::with_options(catalog, bounds, BuildOptions::default())
    }

    pub fn with_options(catalog: &'a Catalog, bounds: IntBox, options: BuildOptions) -> Result<Self, VerifyError> {
        if bounds.is_degenerate() {
            return Err(VerifyError::DegenerateBox(bounds));
        }
        Ok(Verifier {
            catalog,
            bounds,
            options,
            regions: Mutex::new(HashMap::new()),
        })
    }

    pub fn bounds(&self) -> IntBox {
        self.bounds
    }

    /// The region of a named entry, built once.
    pub fn region(&self, name: &str) -> Result<Arc<ComplexRegion>, VerifyError> {
        if let Some(r) = self.regions.lock().expect("region cache").get(name) {
            return Ok(r.clone());
        }
        let gs = self.catalog.resolve(name)?;
        let region = Arc::new(wythoff::build_complex_with(&gs, self.bounds, &self.options)?);
        self.regions
            .lock()
            .expect("region cache")
            .insert(name.to_string(), region.clone());
        Ok(region)
    }

    pub fn verify(&self, name: &str) -> Result<Report, VerifyError> {
        let started = Instant::now();
        let entry = self.catalog.get(name)?;
        let mut checks = Vec::new();
        match self.catalog.resolve_detailed(name) {
            Ok(res) => {
                if let Some(rec) = res.reconstruction {
                    checks.push(CheckResult::new(
                        "reconstruction",
                        (
                            rec.congruence_classes == 1,
                            format!(
                                "{} matching generator sets, {} regions, {} congruence class",
                                rec.hits, rec.distinct_regions, rec.congruence_classes
                            ),
                        ),
                    ));
                }
                let gs = res.generators.clone();
                match self.region(name) {
                    Ok(region) => self.column_checks(entry, &gs, &region, &mut checks),
                    Err(e) => checks.push(CheckResult::failed("build", e)),
                }
            }
            Err(e) => checks.push(CheckResult::failed("generators", e)),
        }
        Ok(Report {
            entry: name.to_string(),
            bounds: self.bounds,
            margin: self.options.margin,
            scale: 1,
            checks,
            elapsed: started.elapsed(),
        })
    }

    fn column_checks(&self, entry: &CatalogEntry, gs: &GeneratorSet, region: &ComplexRegion, out: &mut Vec<CheckResult>) {
        let exp = &entry.expected;
        match (entry.mirror_vector, point_groups::mirror_vector(gs)) {
            (MirrorSpec::Vector(i, j), Ok(got)) => {
                out.push(CheckResult::compare("mirror_vector", format!("({i},{j})"), format!("({},{})", got.0, got.1)))
            }
            (MirrorSpec::Skeleton, Ok(got)) => {
                out.push(CheckResult::new("mirror_vector", (true, format!("({},{}) skeleton", got.0, got.1))))
            }
            (_, Err(e)) => out.push(CheckResult::failed("mirror_vector", e)),
        }
        out.push(CheckResult::compare("g2", exp.g2, gs.g2().label()));
        match wythoff::algebraic_r(gs) {
            Ok(r) => out.push(CheckResult::compare("r_algebraic", exp.r, r)),
            Err(e) => out.push(CheckResult::failed("r_algebraic", e)),
        }
        let edges = region.interior_edges();
        let bad_edge = edges
            .iter()
            .find(|e| region.faces_per_edge(e).ok() != Some(exp.r));
        out.push(CheckResult::new(
            "r_geometric",
            match bad_edge {
                _ if edges.is_empty() => (false, "no interior edge".into()),
                Some(e) => (false, format!("edge {e} lies in {} faces", region.faces_at_edge(e).len())),
                None => (true, format!("{} faces at each of {} interior edges", exp.r, edges.len())),
            },
        ));
        let face = wythoff::base_face(gs);
        match &face {
            Ok(f) => out.push(CheckResult::compare("face", exp.face, f.class)),
            Err(e) => out.push(CheckResult::failed("face", e)),
        }
        let verts = region.interior_vertices();
        match exp.vertex_set {
            Some(label) => {
                let want = lattices::enumerate(label, &self.bounds);
                let detail = format!("{} interior vertices, {} points of {label}", verts.len(), want.len());
                out.push(CheckResult::new("vertex_set", (verts == want, detail)));
            }
            None => out.push(CheckResult::skipped("vertex_set", "no label; see claims")),
        }
        out.push(self.vertex_figures(exp.vertex_figure, gs, region));
        out.push(CheckResult::compare(
            "special_group",
            exp.special_group,
            point_groups::special_group(gs).identify(),
        ));
        out.push(CheckResult::compare(
            "face_mirror",
            exp.face_mirror,
            wythoff::detect_face_mirror(gs, region),
        ));
        match wythoff::flag_stabilizer_order(gs) {
            Ok(k) => out.push(CheckResult::compare("flag_stabilizer", exp.flag_stabilizer, k)),
            Err(e) => out.push(CheckResult::failed("flag_stabilizer", e)),
        }
        for claim in &exp.claims {
            let name = format!("claim:{}", claim.kind_name());
            out.push(match self.claim(entry, gs, region, face.as_ref().ok(), claim) {
                Ok(Some(outcome)) => CheckResult::new(name, outcome),
                Ok(None) => CheckResult::skipped(name, self.skip_reason(claim)),
                Err(e) => CheckResult::failed(name, e),
            });
        }
    }

    fn skip_reason(&self, claim: &Claim) -> String {
        match claim {
            Claim::Unverified { statement, reason } => format!("{statement}: {reason}"),
            _ => "needs a cube box centred at the origin".into(),
        }
    }

    fn vertex_figures(&self, label: wythoff::VertexFigureLabel, gs: &GeneratorSet, region: &ComplexRegion) -> CheckResult {
        let base = gs.base_vertex();
        if !region.is_interior_vertex(&base) {
            return CheckResult::skipped("vertex_figure", format!("base vertex {base} outside the box"));
        }
        let verts = region.interior_vertices();
        for v in &verts {
            match region.vertex_figure(v) {
                Ok(fig) if wythoff::match_vertex_figure(&fig, label) => {}
                Ok(_) => return CheckResult::failed("vertex_figure", format!("vertex figure at {v} is not a {label}")),
                Err(e) => return CheckResult::failed("vertex_figure", e),
            }
        }
        CheckResult::new(
            "vertex_figure",
            (true, format!("{label} at all {} interior vertices", verts.len())),
        )
    }

    fn claim(
        &self,
        entry: &CatalogEntry,
        gs: &GeneratorSet,
        region: &ComplexRegion,
        face: Option<&Face>,
        claim: &Claim,
    ) -> Result<Option<claims::Outcome>, VerifyError> {
        let symmetric = claims::symmetric_about_origin(&self.bounds);
        Ok(Some(match claim {
            Claim::BaseFace { vertices, period } => {
                let want = match period {
                    Some(p) => {
                        let mut seg = vertices.clone();
                        if seg.last().copied() != Some(seg[0] + *p) {
                            seg.push(seg[0] + *p);
                        }
                        Face::from_segment(seg)
                    }
                    None => Face::from_cycle(vertices.clone()),
                };
                let got = face.map(Face::canonical);
                let show = |f: &Face| {
                    let vs: Vec<String> = f.vertices.iter().map(|v| v.to_string()).collect();
                    vs.join(" ")
                };
                (
                    got.as_ref() == Some(&want.canonical()),
                    got.map(|f| show(&f)).unwrap_or_else(|| "no base face".into()),
                )
            }
            Claim::SubcomplexOf { outer, face_ratio } => {
                let rep = check_subcomplex(region, &*self.region(outer)?)?;
                let mut ok = rep.holds();
                let mut detail = format!(
                    "missing {} vertices, {} edges, {} faces; {}/{} faces",
                    rep.missing_vertices, rep.missing_edges, rep.missing_faces, rep.inner_faces, rep.outer_faces
                );
                if let Some(text) = face_ratio {
                    let want: Rational64 = text.parse().map_err(|_| {
                        VerifyError::Catalog(CatalogError::Schema {
                            entry: entry.name.clone(),
                            message: format!("bad face ratio {text:?}"),
                        })
                    })?;
                    let got = rep.face_ratio().unwrap_or_default();
                    let tolerance = want / 10;
                    ok &= (got - want).abs() <= tolerance;
                    let _ = write!(detail, "; ratio {got}, expected {want} within 10%");
                }
                (ok, detail)
            }
            Claim::SameEdgeGraph { other } => claims::same_edge_graph(region, &*self.region(other)?),
            Claim::TriangularOracle { oracle } => {
                let want = oracles::triangular_oracle_all(*oracle, &self.bounds);
                let got: BTreeSet<Face> = region.interior_faces().into_iter().cloned().collect();
                let extra = got.difference(&want).count();
                let missing = want.difference(&got).count();
                (
                    extra == 0 && missing == 0,
                    format!("{} faces; {extra} not in oracle, {missing} oracle faces missing", got.len()),
                )
            }
            Claim::SemiregularS => {
                let s = semiregular_s(self.bounds, region.margin());
                (
                    region.same_interior(&s),
                    format!("{} vs {} interior faces", region.interior_faces().len(), s.interior_faces().len()),
                )
            }
            Claim::CoplanarFacePairs => claims::coplanar_face_pairs(region),
            Claim::UniformDegree { degree } => claims::uniform_degree(region, *degree),
            Claim::EdgeVectors { vector } => claims::edge_vectors(region, *vector),
            Claim::HelixAxesPerEdge { counts } => claims::helix_axes_per_edge(region, *counts),
            Claim::HelixAxisClasses => claims::helix_axis_classes(region),
            Claim::PetrieOfCubicTessellation => claims::petrie_of_cubic_tessellation(region),
            Claim::CubeTripleWindows => claims::cube_triple_windows(region),
            Claim::DoubleCubeWindows => claims::double_cube_windows(region),
            Claim::VertexSetNegated { label } => claims::vertex_set_negated(region, *label),
            Claim::Lambda0Image { element, other, relation } => {
                let r = gen_ops::resolve_element(gs, element).map_err(|source| CatalogError::Operation {
                    entry: entry.name.clone(),
                    source,
                })?;
                let image = gen_ops::lambda0(gs, &r).map_err(|source| CatalogError::Operation {
                    entry: entry.name.clone(),
                    source,
                })?;
                let built = wythoff::build_complex_with(&image, self.bounds, &self.options)?;
                let target = self.region(other)?;
                match relation {
                    Relation::Equal => (
                        built.same_interior(&target),
                        format!("λ0({element}) has {} interior faces", built.interior_faces().len()),
                    ),
                    Relation::Congruent if !symmetric => return Ok(None),
                    Relation::Congruent => {
                        let a: BTreeSet<Face> = built.interior_faces().into_iter().cloned().collect();
                        let b: BTreeSet<Face> = target.interior_faces().into_iter().cloned().collect();
                        (
                            congruent_by_point_symmetry(&a, &b),
                            format!("λ0({element}) vs {other}: {} and {} faces", a.len(), b.len()),
                        )
                    }
                }
            }
            Claim::PetrieDualSharesSkeleton => {
                let op = |source| CatalogError::Operation {
                    entry: entry.name.clone(),
                    source,
                };
                let rot = gen_ops::rotation_form(gs).map_err(op)?;
                let t3 = gen_ops::face_plane_reflection(&rot).map_err(op)?;
                let Some(t3) = t3 else {
                    return Ok(Some((false, "no plane reflection through the base face".into())));
                };
                let dual = gen_ops::petrie_lambda(&rot, &t3).map_err(op)?;
                let mv = |g: &GeneratorSet| point_groups::mirror_vector(g).map(|(i, j)| format!("({i},{j})"));
                let built = wythoff::build_complex_with(&dual, self.bounds, &self.options)?;
                let (a, b) = (mv(&rot).unwrap_or_default(), mv(&dual).unwrap_or_default());
                (
                    built.same_interior(region),
                    format!("rotation form {a}, Petrie dual {b}"),
                )
            }
            Claim::Unverified { .. } => return Ok(None),
        }))
    }
}

/// Measured properties of a generator set, in catalog form.
pub fn describe(gs: &GeneratorSet, bounds: IntBox) -> Result<ExpectedProperties, VerifyError> {
    let region = wythoff::build_complex(gs, bounds)?;
    let fig = region.vertex_figure(&gs.base_vertex())?;
    let vertex_figure = wythoff::identify_vertex_figure(&fig)
        .ok_or_else(|| WythoffError::UnknownVertexFigure(format!("vertex-figure at {}", gs.base_vertex())))?;
    let verts = region.interior_vertices();
    let vertex_set = lattices::VertexSetLabel::ALL
        .into_iter()
        .find(|l| lattices::enumerate(*l, &bounds) == verts);
    Ok(ExpectedProperties {
        g2: gs.g2().label(),
        r: wythoff::algebraic_r(gs)?,
        face: wythoff::base_face(gs)?.class,
        vertex_figure,
        vertex_set,
        special_group: point_groups::special_group(gs).identify(),
        face_mirror: wythoff::detect_face_mirror(gs, &region),
        flag_stabilizer: wythoff::flag_stabilizer_order(gs)?,
        claims: Vec::new(),
    })
}

/// Verifies one entry on one box.
pub fn verify_entry(catalog: &Catalog, name: &str, bounds: IntBox) -> Result<Report, VerifyError> {
    Verifier::new(catalog, bounds)?.verify(name)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattices::VertexSetLabel;

    fn cube(lo: i64, hi: i64) -> IntBox {
        IntBox::cube(lo, hi).unwrap()
    }

    #[test]
    fn subcomplex_direction_and_boxes() {
        let c = Catalog::load_default().unwrap();
        let v = Verifier::new(&c, cube(-2, 2)).unwrap();
        let rep = check_subcomplex(&v.region("K6_1_1").unwrap(), &v.region("K4_1_1").unwrap()).unwrap();
        assert!(rep.holds());
        let ratio = rep.face_ratio().unwrap();
        assert!((ratio - Rational64::new(1, 2)).abs() <= Rational64::new(1, 20));
        assert!(check_subcomplex(&v.region("K9_1_1").unwrap(), &v.region("K1_1_1").unwrap()).unwrap().holds());
        assert!(!check_subcomplex(&v.region("K3_1_1").unwrap(), &v.region("K2_1_1").unwrap()).unwrap().holds());

        let other = Verifier::new(&c, cube(-1, 1)).unwrap();
        assert!(matches!(
            check_subcomplex(&other.region("K6_1_1").unwrap(), &v.region("K4_1_1").unwrap()),
            Err(VerifyError::MismatchedBoxes(..))
        ));
    }

    #[test]
    fn degenerate_boxes_are_rejected() {
        let c = Catalog::load_default().unwrap();
        let flat = IntBox::new([0, 0, 0], [0, 3, 3]).unwrap();
        assert!(matches!(verify_entry(&c, "K5_1_1", flat), Err(VerifyError::DegenerateBox(_))));
    }

    #[test]
    fn semiregular_vertices_are_fcc() {
        let b = cube(0, 2);
        let s = semiregular_s(b, 2);
        assert_eq!(s.interior_vertices(), lattices::enumerate(VertexSetLabel::Fcc, &b));
        assert_eq!(s.interior_vertices().len(), 14);
        for e in s.interior_edges() {
            assert_eq!(s.faces_per_edge(&e).unwrap(), 4);
        }
    }

    #[test]
    fn cubic_skeleton_on_a_corner_box() {
        let c = Catalog::load_default().unwrap();
        let rep = verify_entry(&c, "skel_434", cube(0, 3)).unwrap();
        assert!(rep.passed(), "{}", rep.render_text());
        assert_eq!(rep.check("face_mirror").unwrap().detail, "true");
        assert_eq!(rep.check("flag_stabilizer").unwrap().detail, "2");
        assert_eq!(rep.check("face").unwrap().detail, "4_c");
    }

    #[test]
    fn catalog_rows_from_the_examples() {
        let c = Catalog::load_default().unwrap();
        let v = Verifier::new(&c, cube(-3, 3)).unwrap();
        for name in ["K8_1_1", "K6_1_1"] {
            let rep = v.verify(name).unwrap();
            assert!(rep.passed(), "{}", rep.render_text());
        }
        let rep = v.verify("K6_1_1").unwrap();
        assert_eq!(rep.check("g2").unwrap().detail, "C3");
        assert_eq!(rep.check("special_group").unwrap().detail, "[3,4]+");
        assert_eq!(rep.check("face").unwrap().detail, "inf_4");
    }

    #[test]
    fn failures_carry_witnesses() {
        let text = include_str!("../../data/catalog.json").replace(
            r#""vertex_figure": "tetrahedron",
        "vertex_set": "W_a",
        "special_group": "[3,4]+""#,
            r#""vertex_figure": "cube",
        "vertex_set": "W_a",
        "special_group": "[3,4]+""#,
        );
        let c = Catalog::from_json_str(&text).unwrap();
        let rep = verify_entry(&c, "K6_1_1", cube(-1, 1)).unwrap();
        assert!(!rep.passed());
        let fail = rep.failures().next().unwrap();
        assert_eq!(fail.name, "vertex_figure");
        assert!(fail.detail.contains("is not a cube"), "{}", fail.detail);
    }
}
