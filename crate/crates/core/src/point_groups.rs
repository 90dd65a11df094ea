//! Finite groups of signed permutation matrices and edge stabilizers.

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::geometry::{Isometry, RationalVec3, SignedPermMatrix};
use crate::wythoff::GeneratorSet;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PointGroupError {
    #[error("G2 generator {generator} moves the base edge {a}-{b}")]
    GeneratorMovesEdge {
        generator: Isometry,
        a: RationalVec3,
        b: RationalVec3,
    },
    #[error("edge stabilizer has more than {max} elements")]
    TooLarge { max: usize },
    #[error("edge stabilizer is neither cyclic nor dihedral: {0}")]
    NotCyclicOrDihedral(String),
    #[error("{which} is not an involution: {iso}")]
    NotInvolution { which: &'static str, iso: Isometry },
    #[error("unknown point group label {0:?}")]
    UnknownLabel(String),
}

/// A finite subgroup of the octahedral group `[3,4]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinitePointGroup {
    elements: BTreeSet<SignedPermMatrix>,
    generators: Vec<SignedPermMatrix>,
}

/// The smallest group containing `gens`.
pub fn closure(gens: &[SignedPermMatrix]) -> FinitePointGroup {
    let mut elements = BTreeSet::from([SignedPermMatrix::IDENTITY]);
    let mut queue = VecDeque::from([SignedPermMatrix::IDENTITY]);
    while let Some(g) = queue.pop_front() {
        for h in gens {
            let gh = g.then(h);
            if elements.insert(gh) {
                queue.push_back(gh);
            }
        }
    }
    FinitePointGroup {
        elements,
        generators: gens.to_vec(),
    }
}

impl FinitePointGroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &BTreeSet<SignedPermMatrix> {
        &self.elements
    }

    pub fn generators(&self) -> &[SignedPermMatrix] {
        &self.generators
    }

    pub fn contains(&self, m: &SignedPermMatrix) -> bool {
        self.elements.contains(m)
    }

    pub fn is_proper(&self) -> bool {
        self.elements.iter().all(SignedPermMatrix::is_proper)
    }

    pub fn contains_inversion(&self) -> bool {
        self.contains(&SignedPermMatrix::NEG_IDENTITY)
    }

    pub fn is_cyclic(&self) -> bool {
        let n = self.order();
        self.elements.iter().any(|g| g.order() == n)
    }

    /// The subgroup of proper elements.
    pub fn rotation_subgroup(&self) -> FinitePointGroup {
        let rot: Vec<_> = self.elements.iter().copied().filter(|g| g.is_proper()).collect();
        FinitePointGroup {
            elements: rot.iter().copied().collect(),
            generators: rot,
        }
    }

    pub fn identify(&self) -> PointGroupLabel {
        identify(self)
    }
}

/// Names of the point groups that occur as special groups, vertex-figure
/// groups and edge stabilizers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PointGroupLabel {
    /// `[3,4]`, full octahedral group of order 48.
    Octahedral,
    /// `[3,4]+`, rotations of the cube.
    OctahedralRotation,
    /// `[3,3]`, full tetrahedral group.
    Tetrahedral,
    /// `[3,3]*`, pyritohedral group.
    Pyritohedral,
    /// `[3,3]+`, rotations of the tetrahedron.
    TetrahedralRotation,
    /// `[4,2]`, order 16 with central inversion.
    Prismatic,
    /// Rotation group of order `p`.
    Cyclic(usize),
    /// Group of order `2p` generated by reflections in planes through a line.
    Dihedral(usize),
    Other {
        order: usize,
        proper: bool,
        inversion: bool,
    },
}

/// Identifies a group by its order, properness and whether it contains `-I`.
pub fn identify(group: &FinitePointGroup) -> PointGroupLabel {
    let order = group.order();
    let proper = group.is_proper();
    let inversion = group.contains_inversion();
    match (order, proper, inversion) {
        (48, _, _) => PointGroupLabel::Octahedral,
        (24, true, _) => PointGroupLabel::OctahedralRotation,
        (24, false, true) => PointGroupLabel::Pyritohedral,
        (24, false, false) => PointGroupLabel::Tetrahedral,
        (12, true, _) => PointGroupLabel::TetrahedralRotation,
        (16, _, true) => PointGroupLabel::Prismatic,
        (n, true, _) if n <= 4 && group.is_cyclic() => PointGroupLabel::Cyclic(n),
        (n, false, false) if n % 2 == 0 && n <= 8 && is_reflection_dihedral(group) => {
            PointGroupLabel::Dihedral(n / 2)
        }
        _ => PointGroupLabel::Other {
            order,
            proper,
            inversion,
        },
    }
}

/// True if the improper elements are reflections whose mirrors share a line
/// and the rotations form a cyclic group.
fn is_reflection_dihedral(group: &FinitePointGroup) -> bool {
    let rotations = group.rotation_subgroup();
    if 2 * rotations.order() != group.order() || !rotations.is_cyclic() {
        return false;
    }
    let normals: Vec<RationalVec3> = group
        .elements
        .iter()
        .filter(|g| !g.is_proper())
        .filter_map(|g| {
            let d = g.rotation_data();
            (d.order == 2).then_some(d.axis).flatten()
        })
        .collect();
    if normals.len() != rotations.order() {
        return false;
    }
    // Mirrors share a line iff all normals lie in one plane through o.
    let mut with_origin = normals.clone();
    with_origin.push(RationalVec3::ZERO);
    crate::geometry::coplanar(&with_origin)
}

impl fmt::Display for PointGroupLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PointGroupLabel::Octahedral => f.write_str("[3,4]"),
            PointGroupLabel::OctahedralRotation => f.write_str("[3,4]+"),
            PointGroupLabel::Tetrahedral => f.write_str("[3,3]"),
            PointGroupLabel::Pyritohedral => f.write_str("[3,3]*"),
            PointGroupLabel::TetrahedralRotation => f.write_str("[3,3]+"),
            PointGroupLabel::Prismatic => f.write_str("[4,2]"),
            PointGroupLabel::Cyclic(p) => write!(f, "C{p}"),
            PointGroupLabel::Dihedral(p) => write!(f, "D{p}"),
            PointGroupLabel::Other {
                order,
                proper,
                inversion,
            } => write!(
                f,
                "other({order},{},{})",
                if *proper { "proper" } else { "improper" },
                if *inversion { "-I" } else { "no-I" }
            ),
        }
    }
}

impl FromStr for PointGroupLabel {
    type Err = PointGroupError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || PointGroupError::UnknownLabel(s.to_string());
        Ok(match s {
            "[3,4]" => PointGroupLabel::Octahedral,
            "[3,4]+" => PointGroupLabel::OctahedralRotation,
            "[3,3]" => PointGroupLabel::Tetrahedral,
            "[3,3]*" => PointGroupLabel::Pyritohedral,
            "[3,3]+" => PointGroupLabel::TetrahedralRotation,
            "[4,2]" => PointGroupLabel::Prismatic,
            _ => {
                let (kind, n) = s.split_at(1.min(s.len()));
                let n: usize = n.parse().map_err(|_| bad())?;
                match kind {
                    "C" => PointGroupLabel::Cyclic(n),
                    "D" => PointGroupLabel::Dihedral(n),
                    _ => return Err(bad()),
                }
            }
        })
    }
}

impl Serialize for PointGroupLabel {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for PointGroupLabel {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Closure of a set of isometries, or `None` once it exceeds `cap` elements.
pub fn isometry_closure(gens: &[Isometry], cap: usize) -> Option<Vec<Isometry>> {
    let mut seen = HashSet::from([Isometry::IDENTITY]);
    let mut queue = VecDeque::from([Isometry::IDENTITY]);
    while let Some(g) = queue.pop_front() {
        for h in gens {
            let gh = g.then(h);
            if seen.insert(gh) {
                if seen.len() > cap {
                    return None;
                }
                queue.push_back(gh);
            }
        }
    }
    let mut out: Vec<Isometry> = seen.into_iter().collect();
    out.sort();
    Some(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum G2Kind {
    Cyclic,
    Dihedral,
}

/// The pointwise stabilizer of the base edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeStabilizerSpec {
    pub kind: G2Kind,
    /// Group order.
    pub r: usize,
    pub generators: Vec<Isometry>,
    /// All group elements, sorted.
    pub elements: Vec<Isometry>,
}

impl EdgeStabilizerSpec {
    /// `r < 2` cannot occur in a polygonal complex.
    pub fn is_below_minimum(&self) -> bool {
        self.r < 2
    }

    pub fn label(&self) -> PointGroupLabel {
        match self.kind {
            G2Kind::Cyclic => PointGroupLabel::Cyclic(self.r),
            G2Kind::Dihedral => PointGroupLabel::Dihedral(self.r / 2),
        }
    }

    pub fn contains(&self, g: &Isometry) -> bool {
        self.elements.binary_search(g).is_ok()
    }
}

const MAX_EDGE_STABILIZER: usize = 8;

pub fn classify_edge_stabilizer(
    gens: &[Isometry],
    base_edge: (RationalVec3, RationalVec3),
) -> Result<EdgeStabilizerSpec, PointGroupError> {
    let (a, b) = base_edge;
    for g in gens {
        if g.apply(a) != a || g.apply(b) != b {
            return Err(PointGroupError::GeneratorMovesEdge { generator: *g, a, b });
        }
    }
    let elements = isometry_closure(gens, MAX_EDGE_STABILIZER).ok_or(PointGroupError::TooLarge {
        max: MAX_EDGE_STABILIZER,
    })?;
    let r = elements.len();
    let linear: Vec<SignedPermMatrix> = elements.iter().map(Isometry::linear).collect();
    let group = closure(&linear);
    let kind = if group.is_proper() {
        if !group.is_cyclic() {
            return Err(PointGroupError::NotCyclicOrDihedral(format!(
                "rotation group of order {r} is not cyclic"
            )));
        }
        G2Kind::Cyclic
    } else {
        if !is_reflection_dihedral(&group) {
            return Err(PointGroupError::NotCyclicOrDihedral(format!(
                "improper group of order {r} is not generated by reflections"
            )));
        }
        G2Kind::Dihedral
    };
    Ok(EdgeStabilizerSpec {
        kind,
        r,
        generators: gens.to_vec(),
        elements,
    })
}

/// Fixed-space dimensions of `R0` and `R1`.
pub fn mirror_vector(gs: &GeneratorSet) -> Result<(usize, usize), PointGroupError> {
    let dim = |which, iso: &Isometry| {
        if !iso.is_involution() {
            return Err(PointGroupError::NotInvolution { which, iso: *iso });
        }
        // Involutions always fix the midpoint of x and its image.
        Ok(iso.fixed_space_dimension().unwrap_or(0))
    };
    Ok((dim("R0", gs.r0())?, dim("R1", gs.r1())?))
}

/// The special group: linear parts of all generators.
pub fn special_group(gs: &GeneratorSet) -> FinitePointGroup {
    let gens: Vec<SignedPermMatrix> = gs.generators().iter().map(Isometry::linear).collect();
    closure(&gens)
}

/// Linear parts of the stabilizer of the base vertex, generated by `R1` and `G2`.
pub fn vertex_figure_group(gs: &GeneratorSet) -> FinitePointGroup {
    let mut gens = vec![gs.r1().linear()];
    gens.extend(gs.g2().generators.iter().map(Isometry::linear));
    closure(&gens)
}
