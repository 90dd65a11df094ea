//! Acceptance run: one PASS/FAIL line per criterion on the box [-3,3]^3.
//!
//! Runs without the libtest harness so the lines always reach stdout. The
//! process fails if any criterion fails in a way other than the single
//! known discrepancy recorded under criterion 3.

mod common;

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use polycomplex::catalog::{Catalog, Claim, MirrorSpec, Source};
use polycomplex::gen_ops::{self, Constraints, GenOpsError, OperationExpr};
use polycomplex::geometry::{IntBox, RationalVec3};
use polycomplex::lattices::VertexSetLabel;
use polycomplex::point_groups::{self, PointGroupLabel};
use polycomplex::verify::{Report, Status, Verifier};
use polycomplex::wythoff::{self, build_complex, Face, GeneratorSet};

const COLUMNS: [&str; 8] = [
    "mirror_vector",
    "g2",
    "r_algebraic",
    "r_geometric",
    "face",
    "vertex_set",
    "vertex_figure",
    "special_group",
];

struct Outcome {
    pass: bool,
    detail: String,
    /// A failure that is analysed and expected; it does not fail the run.
    known: bool,
}

impl Outcome {
    fn of(pass: bool, detail: impl Into<String>) -> Self {
        Outcome {
            pass,
            detail: detail.into(),
            known: false,
        }
    }
}

struct Run {
    catalog: Catalog,
    bounds: IntBox,
    reports: BTreeMap<String, Report>,
    total: Duration,
}

impl Run {
    fn report(&self, name: &str) -> &Report {
        &self.reports[name]
    }

    fn check_passes(&self, entry: &str, check: &str) -> Result<(), String> {
        match self.report(entry).check(check) {
            Some(c) if c.status == Status::Pass => Ok(()),
            Some(c) => Err(format!("{entry} {check}: {}", c.detail)),
            None => Err(format!("{entry} has no {check} check")),
        }
    }

    fn flag_transitive(&self) -> Vec<&str> {
        self.catalog
            .entries()
            .filter(|e| e.mirror_vector != MirrorSpec::Skeleton)
            .map(|e| e.name.as_str())
            .collect()
    }

    fn skeletons(&self) -> Vec<&str> {
        self.catalog
            .entries()
            .filter(|e| e.mirror_vector == MirrorSpec::Skeleton)
            .map(|e| e.name.as_str())
            .collect()
    }
}

fn p(x: i64, y: i64, z: i64) -> RationalVec3 {
    RationalVec3::new(x, y, z)
}

fn first_error(results: impl IntoIterator<Item = Result<(), String>>) -> Option<String> {
    results.into_iter().find_map(Result::err)
}

fn criterion_1(run: &Run) -> Outcome {
    let names = run.flag_transitive();
    let slowest = names
        .iter()
        .map(|n| (run.report(n).elapsed, *n))
        .max()
        .unwrap_or_default();
    let errors = first_error(
        names
            .iter()
            .flat_map(|n| COLUMNS.iter().map(move |c| run.check_passes(n, c))),
    );
    let timing = slowest.0 < Duration::from_secs(10) && run.total < Duration::from_secs(180);
    let detail = format!(
        "{} entries x {} columns; slowest {} {:.2?}, total {:.2?}",
        names.len(),
        COLUMNS.len(),
        slowest.1,
        slowest.0,
        run.total
    );
    match errors {
        None if names.len() == 21 && timing => Outcome::of(true, detail),
        None => Outcome::of(false, format!("{detail}; count or time limit exceeded")),
        Some(e) => Outcome::of(false, e),
    }
}

fn criterion_2(run: &Run) -> Outcome {
    let ft = run.flag_transitive();
    let sk = run.skeletons();
    let mut errors = Vec::new();
    for (names, mirror, stab) in [(&ft, false, 1), (&sk, true, 2)] {
        for n in names.iter() {
            let gs = run.catalog.resolve(n).expect("entry resolves");
            let region = build_complex(&gs, run.bounds).expect("region builds");
            if wythoff::detect_face_mirror(&gs, &region) != mirror {
                errors.push(format!("{n}: face mirror should be {mirror}"));
            }
            if wythoff::flag_stabilizer_order(&gs).ok() != Some(stab) {
                errors.push(format!("{n}: flag stabilizer should have order {stab}"));
            }
        }
    }
    match errors.first() {
        None if ft.len() == 21 && sk.len() == 4 => Outcome::of(
            true,
            "no face mirror on 21 entries; face mirror and flag stabilizer of order 2 on 4 skeletons",
        ),
        None => Outcome::of(false, "wrong entry counts"),
        Some(e) => Outcome::of(false, e.clone()),
    }
}

/// Reference base faces: vertices in order, and the period for
/// infinite faces.
fn reference_faces() -> Vec<(&'static str, Vec<RationalVec3>, Option<RationalVec3>)> {
    vec![
        ("K_0_1", vec![p(-1, 1, 0), p(0, 0, 0), p(1, 0, 1)], Some(p(2, -1, 1))),
        ("K_0_2", vec![p(0, 1, 1), p(0, 0, 0), p(1, 0, 1)], Some(p(1, 1, 0))),
        (
            "K_2_1",
            vec![p(0, 0, 0), p(1, 0, 1), p(1, 1, 2), p(0, 2, 2), p(-1, 2, 1), p(-1, 1, 0)],
            None,
        ),
        ("K_2_2", vec![p(0, 0, 0), p(1, 0, 1), p(0, 1, 1)], None),
    ]
}

fn canonical_text(f: &Face) -> String {
    serde_json::to_string(&f.canonical()).expect("faces serialize")
}

fn reference_face(vertices: &[RationalVec3], period: Option<RationalVec3>) -> Face {
    match period {
        Some(t) => {
            // The listed vertices end one period after they start when the
            // listing covers a full period.
            let mut seg = vertices.to_vec();
            if seg.last().copied() != Some(vertices[0] + t) {
                seg.push(vertices[0] + t);
            }
            Face::from_segment(seg)
        }
        None => Face::from_cycle(vertices.to_vec()),
    }
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

fn criterion_3(run: &Run) -> Outcome {
    let mut exact = Vec::new();
    let mut mismatched = Vec::new();
    for (name, verts, period) in reference_faces() {
        let gs = run.catalog.resolve(name).expect("entry resolves");
        let got = wythoff::base_face(&gs).expect("base face traces");
        if canonical_text(&got) == canonical_text(&reference_face(&verts, period)) {
            exact.push(name);
        } else {
            mismatched.push((name, verts, period, got));
        }
    }
    if mismatched.is_empty() {
        return Outcome::of(true, format!("{} base faces byte-exact", exact.len()));
    }
    let mut lines = vec![format!("{} of 4 base faces byte-exact ({})", exact.len(), exact.join(", "))];
    let mut all_understood = true;
    for (name, verts, period, got) in &mismatched {
        let built_period = got.period.unwrap_or(RationalVec3::ZERO);
        let same_vertices = canonical_text(got) == canonical_text(&reference_face(verts, got.period));
        let reference_period = period.unwrap_or(RationalVec3::ZERO);
        // The reference listing puts the face in the plane x + y - z = 0.
        let in_plane = |v: &RationalVec3| {
            let [x, y, z] = v.coords();
            x + y - z == 0.into()
        };
        let understood = *name == "K_0_2"
            && same_vertices
            && built_period == p(1, -1, 0)
            && verts.iter().all(in_plane)
            && !in_plane(&reference_period)
            && matches!(
                gen_ops::reconstruct_generators(&k02_constraints(reference_period)),
                Err(GenOpsError::ReconstructionFailure(_))
            )
            && gen_ops::reconstruct_generators(&k02_constraints(built_period))
                .map(|r| wythoff::build_complex(&r.generators, run.bounds).ok()
                    == build_complex(&gs_of(run, name), run.bounds).ok())
                .unwrap_or(false);
        all_understood &= understood;
        lines.push(format!(
            "{name}: vertices {}; reference period {reference_period} is not parallel to the face plane \
             x+y-z=0 and no generator set realizes it; the constructed face has period {built_period}{}",
            if same_vertices { "match" } else { "differ" },
            if understood { "" } else { " [unexplained]" }
        ));
    }
    Outcome {
        pass: false,
        detail: lines.join("; "),
        known: all_understood && mismatched.len() == 1,
    }
}

fn gs_of(run: &Run, name: &str) -> GeneratorSet {
    run.catalog.resolve(name).expect("entry resolves")
}

fn criterion_4(run: &Run) -> Outcome {
    let cases = [
        ("K_2_2", "claim:semiregular_s"),
        ("K_0_2", "claim:triangular_oracle"),
        ("K_0_1", "claim:triangular_oracle"),
        ("K_2_1", "claim:triangular_oracle"),
    ];
    match first_error(cases.iter().map(|(n, c)| run.check_passes(n, c))) {
        None => Outcome::of(
            true,
            "K_2_2 = semiregular S, K_0_2 = Petrie polygons, K_0_1 = 2-zigzags, K_2_1 = 2-holes (both inclusions)",
        ),
        Some(e) => Outcome::of(false, e),
    }
}

fn lambda(op: &OperationExpr, gs: &GeneratorSet, r: &polycomplex::geometry::Isometry) -> Result<GeneratorSet, GenOpsError> {
    match op {
        OperationExpr::Lambda0 { .. } => gen_ops::lambda0(gs, r),
        _ => gen_ops::lambda1(gs, r),
    }
}

fn criterion_5(run: &Run) -> Outcome {
    let mut errors = Vec::new();
    let mut applications = 0;
    for entry in run.catalog.entries() {
        let Source::Derived(op) = &entry.source else { continue };
        let (OperationExpr::Lambda0 { base, element } | OperationExpr::Lambda1 { base, element }) = op else {
            continue;
        };
        applications += 1;
        let base_gs = gs_of(run, base);
        let r = gen_ops::resolve_element(&base_gs, element).expect("element resolves");
        let image = lambda(op, &base_gs, &r).expect("operation applies");
        if image.to_spec() != gs_of(run, &entry.name).to_spec() {
            errors.push(format!("{}: catalog generators differ from the operation", entry.name));
        }
        match lambda(op, &image, &r) {
            Ok(back) if back.r0() == base_gs.r0() && back.r1() == base_gs.r1() && back.g2() == base_gs.g2() => {}
            _ => errors.push(format!("{}: applying {op} twice does not restore {base}", entry.name)),
        }
        let a = build_complex(&base_gs, run.bounds).expect("region builds");
        let b = build_complex(&image, run.bounds).expect("region builds");
        if a.interior_vertices() != b.interior_vertices() || a.interior_edges() != b.interior_edges() {
            errors.push(format!("{}: vertex or edge set changed", entry.name));
        }
        if matches!(op, OperationExpr::Lambda1 { .. }) {
            let o = base_gs.base_vertex();
            if a.vertex_figure(&o).ok() != b.vertex_figure(&o).ok() {
                errors.push(format!("{}: vertex figure at o changed", entry.name));
            }
        }
    }
    let mut swaps = 0;
    for n in run.skeletons() {
        let gs = gs_of(run, n);
        let Ok(rot) = gen_ops::rotation_form(&gs) else { continue };
        let before = point_groups::mirror_vector(&rot).ok();
        if !matches!(before, Some((0, 1 | 2))) {
            continue;
        }
        let Ok(Some(t3)) = gen_ops::face_plane_reflection(&rot) else {
            errors.push(format!("{n}: no plane reflection through the base face"));
            continue;
        };
        let dual = match gen_ops::petrie_lambda(&rot, &t3) {
            Ok(d) => d,
            Err(e) => {
                errors.push(format!("{n}: {e}"));
                continue;
            }
        };
        let after = point_groups::mirror_vector(&dual).ok();
        let swapped = matches!((before, after), (Some((0, 2)), Some((0, 1))) | (Some((0, 1)), Some((0, 2))));
        let involution = gen_ops::petrie_lambda(&dual, &t3).ok().as_ref() == Some(&rot);
        if !swapped || !involution {
            errors.push(format!("{n}: Petrie operation gives {before:?} -> {after:?}"));
        }
        swaps += 1;
    }
    if swaps < 2 {
        errors.push(format!("Petrie operation applied to only {swaps} skeletons"));
    }
    match errors.first() {
        None => Outcome::of(
            true,
            format!(
                "{applications} catalog derivations invert and keep vertices and edges; \
                 lambda1 keeps the vertex figure; {swaps} skeletons swap (0,1) and (0,2)"
            ),
        ),
        Some(e) => Outcome::of(false, e.clone()),
    }
}

fn criterion_6(run: &Run) -> Outcome {
    let want = [
        ("K2_1_1", "K3_1_1"),
        ("K6_1_1", "K4_1_1"),
        ("K9_1_1", "K1_1_1"),
        ("K7_1_1", "K3_1_1"),
    ];
    let mut errors = Vec::new();
    for (inner, outer) in want {
        let declared = run.catalog.get(inner).expect("entry exists").expected.claims.iter().any(
            |c| matches!(c, Claim::SubcomplexOf { outer: o, .. } if o == outer),
        );
        if !declared {
            errors.push(format!("{inner} does not declare containment in {outer}"));
        }
        if let Err(e) = run.check_passes(inner, "claim:subcomplex_of") {
            errors.push(e);
        }
    }
    if let Err(e) = run.check_passes("K_0_2", "claim:same_edge_graph") {
        errors.push(e);
    }
    let ratio = run
        .report("K6_1_1")
        .check("claim:subcomplex_of")
        .map(|c| c.detail.clone())
        .unwrap_or_default();
    match errors.first() {
        None => Outcome::of(
            true,
            format!("4 containments hold (K6_1_1 in K4_1_1: {ratio}); K_0_2 and K1_1_2 share an edge graph"),
        ),
        Some(e) => Outcome::of(false, e.clone()),
    }
}

fn criterion_7(run: &Run) -> Outcome {
    let reconstructed: Vec<&str> = run
        .catalog
        .entries()
        .filter(|e| matches!(e.source, Source::Reconstructed(_)))
        .map(|e| e.name.as_str())
        .collect();
    let derived: Vec<&str> = run
        .catalog
        .entries()
        .filter(|e| matches!(&e.source, Source::Derived(OperationExpr::Lambda1 { .. })))
        .map(|e| e.name.as_str())
        .collect();
    let mut errors = Vec::new();
    for n in reconstructed.iter().chain(&derived) {
        let rep = run.report(n);
        if let Some(f) = rep.failures().next() {
            errors.push(format!("{n} {}: {}", f.name, f.detail));
        }
    }
    for n in &reconstructed {
        match run.catalog.resolve_detailed(n) {
            Ok(res) => match &res.reconstruction {
                Some(r) if r.congruence_classes == 1 => {}
                Some(r) => errors.push(format!("{n}: {} congruence classes", r.congruence_classes)),
                None => errors.push(format!("{n}: no reconstruction summary")),
            },
            Err(e) => errors.push(format!("{n}: {e}")),
        }
    }
    match errors.first() {
        None if reconstructed.len() == 8 && derived.len() == 4 => Outcome::of(
            true,
            format!(
                "8 reconstructed and 4 lambda1-derived entries pass; each reconstruction is unique up to congruence ({})",
                derived.join(", ")
            ),
        ),
        None => Outcome::of(
            false,
            format!("{} reconstructed, {} lambda1-derived entries", reconstructed.len(), derived.len()),
        ),
        Some(e) => Outcome::of(false, e.clone()),
    }
}

fn criterion_8() -> Outcome {
    let start = Instant::now();
    let laws = common::all_laws();
    let elapsed = start.elapsed();
    let errors: Vec<String> = laws
        .iter()
        .filter_map(|(name, r)| r.as_ref().err().map(|e| format!("{name}: {e}")))
        .collect();
    match errors.first() {
        None if elapsed < Duration::from_secs(30) => Outcome::of(
            true,
            format!("{} exhaustive suites in {elapsed:.2?}", laws.len()),
        ),
        None => Outcome::of(false, format!("suites took {elapsed:.2?}")),
        Some(e) => Outcome::of(false, e.clone()),
    }
}

fn main() -> ExitCode {
    let catalog = Catalog::load_default().expect("catalog loads");
    let bounds = IntBox::cube(-3, 3).expect("box");
    let verifier = Verifier::new(&catalog, bounds).expect("verifier");
    let start = Instant::now();
    let reports: BTreeMap<String, Report> = catalog
        .names()
        .iter()
        .map(|n| (n.clone(), verifier.verify(n).expect("entry verifies")))
        .collect();
    let total = start.elapsed();
    drop(verifier);
    let run = Run {
        catalog,
        bounds,
        reports,
        total,
    };

    let outcomes = [
        criterion_1(&run),
        criterion_2(&run),
        criterion_3(&run),
        criterion_4(&run),
        criterion_5(&run),
        criterion_6(&run),
        criterion_7(&run),
        criterion_8(),
    ];
    let mut ok = true;
    for (i, o) in outcomes.iter().enumerate() {
        let status = if o.pass { "PASS" } else { "FAIL" };
        println!("criterion {}: {status}: {}", i + 1, o.detail);
        ok &= o.pass || o.known;
    }
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
