//! Vertex sets of the regular complexes: three lattices and two point sets.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::geometry::{IntBox, RationalVec3};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown vertex set label {0:?}")]
pub struct UnknownVertexSet(pub String);

/// The vertex sets occurring in the classification, at scale `a = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VertexSetLabel {
    /// All integer points.
    Z3,
    /// Integer points with even coordinate sum.
    Fcc,
    /// Integer points whose coordinates all have the same parity.
    Bcc,
    /// `Z³` minus the translate `(0,0,1) + BCC`.
    Va,
    /// `2·FCC ∪ ((1,-1,1) + 2·FCC)`.
    Wa,
}

impl VertexSetLabel {
    pub const ALL: [VertexSetLabel; 5] = [
        VertexSetLabel::Z3,
        VertexSetLabel::Fcc,
        VertexSetLabel::Bcc,
        VertexSetLabel::Va,
        VertexSetLabel::Wa,
    ];

    pub fn contains(&self, p: &RationalVec3) -> bool {
        contains(*self, p)
    }
}

pub fn contains(label: VertexSetLabel, p: &RationalVec3) -> bool {
    let Some([x, y, z]) = p.to_integers() else {
        return false;
    };
    match label {
        VertexSetLabel::Z3 => true,
        VertexSetLabel::Fcc => is_fcc(x, y, z),
        VertexSetLabel::Bcc => is_bcc(x, y, z),
        VertexSetLabel::Va => !is_bcc(x, y, z - 1),
        VertexSetLabel::Wa => is_double_fcc(x, y, z) || is_double_fcc(x - 1, y + 1, z - 1),
    }
}

fn is_fcc(x: i64, y: i64, z: i64) -> bool {
    (x + y + z).rem_euclid(2) == 0
}

fn is_bcc(x: i64, y: i64, z: i64) -> bool {
    let px = x.rem_euclid(2);
    px == y.rem_euclid(2) && px == z.rem_euclid(2)
}

fn is_double_fcc(x: i64, y: i64, z: i64) -> bool {
    [x, y, z].iter().all(|c| c.rem_euclid(2) == 0) && is_fcc(x / 2, y / 2, z / 2)
}

/// All members of the set inside the closed box.
pub fn enumerate(label: VertexSetLabel, bx: &IntBox) -> BTreeSet<RationalVec3> {
    bx.integer_points().filter(|p| contains(label, p)).collect()
}

impl fmt::Display for VertexSetLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            VertexSetLabel::Z3 => "aZ3",
            VertexSetLabel::Fcc => "L_aa0",
            VertexSetLabel::Bcc => "L_aaa",
            VertexSetLabel::Va => "V_a",
            VertexSetLabel::Wa => "W_a",
        })
    }
}

impl FromStr for VertexSetLabel {
    type Err = UnknownVertexSet;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        VertexSetLabel::ALL
            .into_iter()
            .find(|l| l.to_string() == s)
            .ok_or_else(|| UnknownVertexSet(s.to_string()))
    }
}

impl Serialize for VertexSetLabel {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for VertexSetLabel {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
