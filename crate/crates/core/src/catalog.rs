//! The named complexes: generator data plus expected properties.
//!
//! The default catalog is embedded from `data/catalog.json`; see
//! `docs/catalog-schema.md` for the format.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::marker::PhantomData;
use std::path::Path;
use std::sync::{Arc, RwLock};

use serde::de::{MapAccess, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::gen_ops::{self, Constraints, GenOpsError, OperationExpr, RationalPolyhedron};
use crate::geometry::RationalVec3;
use crate::lattices::VertexSetLabel;
use crate::point_groups::PointGroupLabel;
use crate::wythoff::{FaceClass, GeneratorSet, GeneratorSetSpec, VertexFigureLabel, WythoffError};

const DEFAULT_CATALOG: &str = include_str!("../data/catalog.json");

#[derive(Debug, Clone, Error)]
pub enum CatalogError {
    #[error("cannot read catalog {path}: {message}")]
    Io { path: String, message: String },
    #[error("catalog is not valid JSON: {0}")]
    Json(String),
    #[error("entry {entry}: schema violation: {message}")]
    Schema { entry: String, message: String },
    #[error("entry {entry}: unknown reference {reference:?}")]
    UnresolvedReference { entry: String, reference: String },
    #[error("derivation cycle through {0}")]
    Cycle(String),
    #[error("entry {entry}: invalid generators: {source}")]
    InvalidGenerators { entry: String, source: WythoffError },
    #[error("unknown entry {0:?}")]
    UnknownEntry(String),
    #[error("entry {entry}: {source}")]
    Operation { entry: String, source: GenOpsError },
}

/// Mirror vector of an entry, or the marker for apeirotope 2-skeletons.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MirrorSpec {
    Vector(usize, usize),
    Skeleton,
}

impl fmt::Display for MirrorSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MirrorSpec::Vector(i, j) => write!(f, "({i},{j})"),
            MirrorSpec::Skeleton => f.write_str("skeleton"),
        }
    }
}

impl Serialize for MirrorSpec {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            MirrorSpec::Vector(i, j) => [i, j].serialize(s),
            MirrorSpec::Skeleton => s.serialize_str("skeleton"),
        }
    }
}

impl<'de> Deserialize<'de> for MirrorSpec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Vector([usize; 2]),
            Word(String),
        }
        match Raw::deserialize(d)? {
            Raw::Vector([i, j]) => Ok(MirrorSpec::Vector(i, j)),
            Raw::Word(w) if w == "skeleton" => Ok(MirrorSpec::Skeleton),
            Raw::Word(w) => Err(serde::de::Error::custom(format!("invalid mirror vector {w:?}"))),
        }
    }
}

/// Where the generators of an entry come from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum Source {
    Explicit(GeneratorSetSpec),
    Derived(OperationExpr),
    Reconstructed(Constraints),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OracleKind {
    Petrie,
    TwoZigzag,
    TwoHole,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    Equal,
    Congruent,
}

/// A geometric statement about an entry, checked by the verifier.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Claim {
    /// The traced base face, vertex by vertex.
    BaseFace {
        vertices: Vec<RationalVec3>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        period: Option<RationalVec3>,
    },
    /// Every interior vertex, edge and face is one of `outer`.
    SubcomplexOf {
        outer: String,
        /// Expected ratio of interior face counts, within 10%.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        face_ratio: Option<String>,
    },
    SameEdgeGraph { other: String },
    /// Faces are exactly the paths of one kind in the triangular
    /// tessellations of the face planes of the tetrahedron-octahedron
    /// honeycomb.
    TriangularOracle { oracle: OracleKind },
    /// The complex is the 2-skeleton of the tetrahedron-octahedron honeycomb.
    SemiregularS,
    /// The faces at each edge form two pairs of coplanar faces.
    CoplanarFacePairs,
    UniformDegree { degree: usize },
    /// Every edge vector is a signed permutation of `vector`.
    EdgeVectors { vector: RationalVec3 },
    /// At each edge, the number of helical faces with axis along x, y, z.
    HelixAxesPerEdge { counts: [usize; 3] },
    /// Helix axes are parallel to coordinate axes and all three occur.
    HelixAxisClasses,
    /// Faces are Petrie polygons of the cubical tessellation by unit cubes.
    PetrieOfCubicTessellation,
    /// Windows of consecutive diagonal edges and their unit cubes.
    CubeTripleWindows,
    /// Windows of three consecutive edges in a 2x2x2 cube.
    DoubleCubeWindows,
    /// The vertex set is the negative of `label`.
    VertexSetNegated { label: VertexSetLabel },
    /// Applying `λ0(element)` yields `other`.
    Lambda0Image {
        element: String,
        other: String,
        relation: Relation,
    },
    /// The operation swapping mirror vectors `(0,1)` and `(0,2)`, applied to
    /// the rotation form, rebuilds the same 2-skeleton.
    PetrieDualSharesSkeleton,
    /// A statement recorded but not checked at this scale.
    Unverified { statement: String, reason: String },
}

impl Claim {
    /// Other entries this claim refers to.
    pub fn references(&self) -> Vec<&str> {
        match self {
            Claim::SubcomplexOf { outer, .. } => vec![outer],
            Claim::SameEdgeGraph { other } | Claim::Lambda0Image { other, .. } => vec![other],
            _ => Vec::new(),
        }
    }

    pub fn kind_name(&self) -> String {
        serde_json::to_value(self)
            .ok()
            .and_then(|v| v.get("kind").and_then(|k| k.as_str()).map(str::to_string))
            .unwrap_or_default()
    }
}

fn default_flag_stabilizer() -> usize {
    1
}

/// Expected column values and extra claims.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExpectedProperties {
    pub g2: PointGroupLabel,
    pub r: usize,
    pub face: FaceClass,
    pub vertex_figure: VertexFigureLabel,
    /// Absent when the vertex set has no label of its own.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vertex_set: Option<VertexSetLabel>,
    pub special_group: PointGroupLabel,
    #[serde(default)]
    pub face_mirror: bool,
    #[serde(default = "default_flag_stabilizer")]
    pub flag_stabilizer: usize,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub claims: Vec<Claim>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CatalogEntry {
    #[serde(skip)]
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub title: Option<String>,
    pub mirror_vector: MirrorSpec,
    pub source: Source,
    pub expected: ExpectedProperties,
}

/// Summary of a reconstruction search.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ReconstructionSummary {
    pub hits: usize,
    pub distinct_regions: usize,
    pub congruence_classes: usize,
}

/// A resolved entry.
#[derive(Debug, Clone)]
pub struct Resolution {
    pub generators: GeneratorSet,
    pub reconstruction: Option<ReconstructionSummary>,
}

/// JSON object read with duplicate-key detection, preserving order.
struct UniqueMap<V>(Vec<(String, V)>);

impl<'de, V: Deserialize<'de>> Deserialize<'de> for UniqueMap<V> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V2<V>(PhantomData<V>);
        impl<'de, V: Deserialize<'de>> Visitor<'de> for V2<V> {
            type Value = UniqueMap<V>;
            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a JSON object")
            }
            fn visit_map<A: MapAccess<'de>>(self, mut map: A) -> Result<Self::Value, A::Error> {
                let mut out: Vec<(String, V)> = Vec::new();
                while let Some((k, v)) = map.next_entry::<String, V>()? {
                    if out.iter().any(|(seen, _)| *seen == k) {
                        return Err(serde::de::Error::custom(format!("duplicate entry name {k:?}")));
                    }
                    out.push((k, v));
                }
                Ok(UniqueMap(out))
            }
        }
        d.deserialize_map(V2(PhantomData))
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCatalog {
    #[allow(dead_code)]
    schema_version: u32,
    #[serde(default)]
    polyhedra: BTreeMap<String, RationalPolyhedron>,
    entries: UniqueMap<serde_json::Value>,
}

/// The loaded catalog. Immutable apart from the resolution memo.
#[derive(Debug)]
pub struct Catalog {
    entries: BTreeMap<String, CatalogEntry>,
    order: Vec<String>,
    polyhedra: BTreeMap<String, RationalPolyhedron>,
    memo: RwLock<HashMap<String, Arc<Resolution>>>,
}

impl Catalog {
    /// The embedded default catalog.
    pub fn load_default() -> Result<Catalog, CatalogError> {
        Catalog::from_json_str(DEFAULT_CATALOG)
    }

    pub fn load_path(path: impl AsRef<Path>) -> Result<Catalog, CatalogError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| CatalogError::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        })?;
        Catalog::from_json_str(&text)
    }

    pub fn from_json_str(text: &str) -> Result<Catalog, CatalogError> {
        let raw: RawCatalog = serde_json::from_str(text).map_err(|e| CatalogError::Json(e.to_string()))?;
        let mut entries = BTreeMap::new();
        let mut order = Vec::new();
        for (name, value) in raw.entries.0 {
            let mut entry: CatalogEntry = serde_json::from_value(value).map_err(|e| CatalogError::Schema {
                entry: name.clone(),
                message: e.to_string(),
            })?;
            entry.name = name.clone();
            order.push(name.clone());
            entries.insert(name, entry);
        }
        let catalog = Catalog {
            entries,
            order,
            polyhedra: raw.polyhedra,
            memo: RwLock::new(HashMap::new()),
        };
        catalog.validate()?;
        Ok(catalog)
    }

    fn validate(&self) -> Result<(), CatalogError> {
        for entry in self.entries.values() {
            let unresolved = |reference: &str| CatalogError::UnresolvedReference {
                entry: entry.name.clone(),
                reference: reference.to_string(),
            };
            match &entry.source {
                Source::Explicit(spec) => {
                    GeneratorSet::from_spec(spec).map_err(|source| CatalogError::InvalidGenerators {
                        entry: entry.name.clone(),
                        source,
                    })?;
                }
                Source::Derived(op) => {
                    if let Some(base) = op.base() {
                        if !self.entries.contains_key(base) {
                            return Err(unresolved(base));
                        }
                    }
                    if let OperationExpr::Apeir { polyhedron } = op {
                        if !self.polyhedra.contains_key(polyhedron) {
                            return Err(unresolved(polyhedron));
                        }
                    }
                }
                Source::Reconstructed(_) => {}
            }
            for claim in &entry.expected.claims {
                for r in claim.references() {
                    if !self.entries.contains_key(r) {
                        return Err(unresolved(r));
                    }
                }
            }
        }
        for name in self.entries.keys() {
            let mut path = vec![name.as_str()];
            let mut current = name.as_str();
            while let Some(base) = self.derived_base(current) {
                if path.contains(&base) {
                    return Err(CatalogError::Cycle(path.join(" -> ") + " -> " + base));
                }
                path.push(base);
                current = base;
            }
        }
        Ok(())
    }

    fn derived_base(&self, name: &str) -> Option<&str> {
        match &self.entries.get(name)?.source {
            Source::Derived(op) => op.base(),
            _ => None,
        }
    }

    /// Entry names in catalog order.
    pub fn names(&self) -> &[String] {
        &self.order
    }

    pub fn entries(&self) -> impl Iterator<Item = &CatalogEntry> {
        self.order.iter().map(|n| &self.entries[n])
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, name: &str) -> Result<&CatalogEntry, CatalogError> {
        self.entries
            .get(name)
            .ok_or_else(|| CatalogError::UnknownEntry(name.to_string()))
    }

    pub fn polyhedron(&self, name: &str) -> Option<&RationalPolyhedron> {
        self.polyhedra.get(name)
    }

    pub fn resolve(&self, name: &str) -> Result<GeneratorSet, CatalogError> {
        Ok(self.resolve_detailed(name)?.generators.clone())
    }

    /// Resolves an entry, memoizing the result.
    pub fn resolve_detailed(&self, name: &str) -> Result<Arc<Resolution>, CatalogError> {
        if let Some(hit) = self.memo.read().expect("memo lock").get(name) {
            return Ok(hit.clone());
        }
        let entry = self.get(name)?;
        let op_err = |source: GenOpsError| CatalogError::Operation {
            entry: name.to_string(),
            source,
        };
        let resolution = match &entry.source {
            Source::Explicit(spec) => Resolution {
                generators: GeneratorSet::from_spec(spec).map_err(|source| CatalogError::InvalidGenerators {
                    entry: name.to_string(),
                    source,
                })?,
                reconstruction: None,
            },
            Source::Derived(op) => Resolution {
                generators: self.apply(op).map_err(|e| match e {
                    CatalogError::Operation { source, .. } => op_err(source),
                    other => other,
                })?,
                reconstruction: None,
            },
            Source::Reconstructed(c) => {
                let rec = gen_ops::reconstruct_generators(c).map_err(op_err)?;
                Resolution {
                    generators: rec.generators,
                    reconstruction: Some(ReconstructionSummary {
                        hits: rec.hits,
                        distinct_regions: rec.distinct_regions,
                        congruence_classes: rec.congruence_classes,
                    }),
                }
            }
        };
        let resolution = Arc::new(resolution);
        self.memo
            .write()
            .expect("memo lock")
            .insert(name.to_string(), resolution.clone());
        Ok(resolution)
    }

    /// Evaluates an operation against this catalog.
    pub fn apply(&self, op: &OperationExpr) -> Result<GeneratorSet, CatalogError> {
        let wrap = |entry: &str| {
            let entry = entry.to_string();
            move |source: GenOpsError| CatalogError::Operation { entry, source }
        };
        match op {
            OperationExpr::Lambda0 { base, element } => {
                let gs = self.resolve(base)?;
                let r = gen_ops::resolve_element(&gs, element).map_err(wrap(base))?;
                gen_ops::lambda0(&gs, &r).map_err(wrap(base))
            }
            OperationExpr::Lambda1 { base, element } => {
                let gs = self.resolve(base)?;
                let r = gen_ops::resolve_element(&gs, element).map_err(wrap(base))?;
                gen_ops::lambda1(&gs, &r).map_err(wrap(base))
            }
            OperationExpr::PetrieLambda { base } => {
                let gs = self.resolve(base)?;
                let t3 = gen_ops::face_plane_reflection(&gs).map_err(wrap(base))?.ok_or_else(|| {
                    wrap(base)(GenOpsError::PreconditionViolation(
                        "base face has no signed-permutation plane reflection".into(),
                    ))
                })?;
                gen_ops::petrie_lambda(&gs, &t3).map_err(wrap(base))
            }
            OperationExpr::Apeir { polyhedron } => {
                let q = self
                    .polyhedra
                    .get(polyhedron)
                    .ok_or_else(|| CatalogError::UnknownEntry(polyhedron.clone()))?;
                gen_ops::apeir(q)
                    .and_then(|d| d.skeleton())
                    .map_err(wrap(polyhedron))
            }
        }
    }
}

/// A loadable single-entry catalog holding an explicit generator set.
pub fn fragment_json(
    name: &str,
    mirror: MirrorSpec,
    gs: &GeneratorSet,
    expected: &ExpectedProperties,
) -> serde_json::Value {
    let entry = CatalogEntry {
        name: name.to_string(),
        title: None,
        mirror_vector: mirror,
        source: Source::Explicit(gs.to_spec()),
        expected: ExpectedProperties {
            claims: Vec::new(),
            ..expected.clone()
        },
    };
    serde_json::json!({
        "schema_version": 1,
        "entries": { name: entry },
    })
}
