//! Exhaustive algebraic checks shared by the property suite and the
//! acceptance run. Each returns a summary on success or the first
//! counterexample on failure.

use std::collections::{BTreeSet, VecDeque};

use polycomplex::geometry::{IntBox, Isometry, RationalVec3, SignedPermMatrix};
use polycomplex::lattices::{self, VertexSetLabel};
use polycomplex::point_groups;

/// Group laws over all 48 signed permutation matrices, checked against
/// plain integer matrix arithmetic.
pub fn signed_perm_laws() -> Result<String, String> {
    let all = SignedPermMatrix::all();
    if all.len() != 48 || all.iter().collect::<BTreeSet<_>>().len() != 48 {
        return Err(format!("expected 48 distinct matrices, got {}", all.len()));
    }
    let mul = |a: [[i64; 3]; 3], b: [[i64; 3]; 3]| {
        let mut c = [[0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                c[i][j] = (0..3).map(|k| a[i][k] * b[k][j]).sum();
            }
        }
        c
    };
    for a in &all {
        if SignedPermMatrix::from_rows(a.rows()).ok() != Some(*a) {
            return Err(format!("row round trip fails for {a}"));
        }
        if a.to_string().parse::<SignedPermMatrix>().ok() != Some(*a) {
            return Err(format!("formula round trip fails for {a}"));
        }
        if !a.then(&a.inverse()).is_identity() || !a.inverse().then(a).is_identity() {
            return Err(format!("inverse fails for {a}"));
        }
        if a.power(a.order() as i64) != SignedPermMatrix::IDENTITY {
            return Err(format!("order fails for {a}"));
        }
        let det = {
            let m = a.rows();
            m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
                + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
        };
        if det != a.determinant() {
            return Err(format!("determinant fails for {a}"));
        }
        for b in &all {
            // Row vectors: applying a then b multiplies by A·B.
            if a.then(b).rows() != mul(a.rows(), b.rows()) {
                return Err(format!("product fails for {a}, {b}"));
            }
            for c in &all {
                if a.then(b).then(c) != a.then(&b.then(c)) {
                    return Err(format!("associativity fails for {a}, {b}, {c}"));
                }
            }
        }
    }
    Ok("48 matrices: products, associativity, inverses, orders, determinants".into())
}

/// Isometry laws for every linear part combined with a grid of half-integer
/// translations.
pub fn isometry_laws() -> Result<String, String> {
    let ts: Vec<RationalVec3> = [[0, 0, 0], [1, 0, 0], [1, -1, 2], [-3, 2, 1], [4, 4, -4]]
        .iter()
        .map(|&h| RationalVec3::from_halves(h))
        .collect();
    let isos: Vec<Isometry> = SignedPermMatrix::all()
        .into_iter()
        .flat_map(|m| ts.iter().map(move |&t| Isometry::new(m, t)))
        .collect();
    let probe = RationalVec3::from_halves([3, -1, 2]);
    let mut count = 0;
    for a in &isos {
        if !a.then(&a.inverse()).is_identity() {
            return Err(format!("inverse fails for {a}"));
        }
        if a.to_string().parse::<Isometry>().ok() != Some(*a) {
            return Err(format!("formula round trip fails for {a}"));
        }
        let json = serde_json::to_string(a).map_err(|e| e.to_string())?;
        if serde_json::from_str::<Isometry>(&json).map_err(|e| e.to_string())? != *a {
            return Err(format!("JSON round trip fails for {a}"));
        }
        if a.is_involution() != (a.then(a).is_identity() && !a.is_identity()) {
            return Err(format!("involution test fails for {a}"));
        }
        for b in isos.iter().step_by(7) {
            if a.then(b).apply(probe) != b.apply(a.apply(probe)) {
                return Err(format!("composition order fails for {a}, {b}"));
            }
            for c in isos.iter().step_by(29) {
                if a.then(b).then(c) != a.then(&b.then(c)) {
                    return Err(format!("associativity fails for {a}, {b}, {c}"));
                }
                count += 1;
            }
        }
    }
    Ok(format!("{} isometries, {count} associativity triples", isos.len()))
}

/// `closure` is idempotent and agrees with a naive word enumeration for
/// every pair of generators.
pub fn closure_laws() -> Result<String, String> {
    let all = SignedPermMatrix::all();
    let mut pairs = 0;
    for a in &all {
        for b in &all {
            let g = point_groups::closure(&[*a, *b]);
            let again: Vec<SignedPermMatrix> = g.elements().iter().copied().collect();
            if point_groups::closure(&again).elements() != g.elements() {
                return Err(format!("closure of <{a}, {b}> is not idempotent"));
            }
            let mut naive = BTreeSet::from([SignedPermMatrix::IDENTITY]);
            loop {
                let next: BTreeSet<SignedPermMatrix> = naive
                    .iter()
                    .flat_map(|x| [*x, x.then(a), x.then(b)])
                    .collect();
                if next == naive {
                    break;
                }
                naive = next;
            }
            if &naive != g.elements() {
                return Err(format!("closure of <{a}, {b}> disagrees with word enumeration"));
            }
            if g.elements().iter().any(|x| g.elements().iter().any(|y| !g.contains(&x.then(y)))) {
                return Err(format!("closure of <{a}, {b}> is not closed"));
            }
            pairs += 1;
        }
    }
    Ok(format!("{pairs} generator pairs"))
}

fn span(gens: &[[i64; 3]], origin: [i64; 3], bx: &IntBox) -> BTreeSet<RationalVec3> {
    let wide = bx.expand(4);
    let start = RationalVec3::new(origin[0], origin[1], origin[2]);
    let mut seen = BTreeSet::from([start]);
    let mut queue = VecDeque::from([start]);
    while let Some(p) = queue.pop_front() {
        for g in gens {
            for s in [1, -1] {
                let q = p + RationalVec3::new(s * g[0], s * g[1], s * g[2]);
                if wide.contains(&q) && seen.insert(q) {
                    queue.push_back(q);
                }
            }
        }
    }
    seen.into_iter().filter(|p| bx.contains(p)).collect()
}

/// Lattice membership and enumeration on `[-4,4]^3` against sets generated
/// from lattice bases.
pub fn lattice_laws() -> Result<String, String> {
    let bx = IntBox::cube(-4, 4).map_err(|e| e.to_string())?;
    let fcc = [[1, 1, 0], [1, 0, 1], [0, 1, 1]];
    let bcc = [[2, 0, 0], [0, 2, 0], [1, 1, 1]];
    let double_fcc = [[2, 2, 0], [2, 0, 2], [0, 2, 2]];
    let all: BTreeSet<RationalVec3> = bx.integer_points().collect();
    let oracle = |label| -> BTreeSet<RationalVec3> {
        match label {
            VertexSetLabel::Z3 => all.clone(),
            VertexSetLabel::Fcc => span(&fcc, [0, 0, 0], &bx),
            VertexSetLabel::Bcc => span(&bcc, [0, 0, 0], &bx),
            VertexSetLabel::Va => all.difference(&span(&bcc, [0, 0, 1], &bx)).copied().collect(),
            VertexSetLabel::Wa => span(&double_fcc, [0, 0, 0], &bx)
                .union(&span(&double_fcc, [1, -1, 1], &bx))
                .copied()
                .collect(),
        }
    };
    let mut sizes = Vec::new();
    for label in VertexSetLabel::ALL {
        let want = oracle(label);
        if lattices::enumerate(label, &bx) != want {
            return Err(format!("enumeration of {label} disagrees with its basis span"));
        }
        if let Some(p) = all.iter().find(|p| lattices::contains(label, p) != want.contains(p)) {
            return Err(format!("membership of {p} in {label} disagrees with its basis span"));
        }
        let half = RationalVec3::from_halves([1, 0, 0]);
        if lattices::contains(label, &half) {
            return Err(format!("{label} contains a non-integral point"));
        }
        sizes.push(format!("{label} {}", want.len()));
    }
    Ok(sizes.join(", "))
}

/// Every exhaustive law, in order.
#[allow(dead_code)]
pub fn all_laws() -> Vec<(&'static str, Result<String, String>)> {
    vec![
        ("signed permutation matrices", signed_perm_laws()),
        ("isometries", isometry_laws()),
        ("point-group closure", closure_laws()),
        ("lattices on [-4,4]^3", lattice_laws()),
    ]
}
