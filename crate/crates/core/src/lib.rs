//! Exact construction, classification and verification of the regular
//! polygonal complexes of euclidean 3-space.

pub mod catalog;
pub mod export;
pub mod gen_ops;
pub mod geometry;
pub mod lattices;
pub mod point_groups;
pub mod verify;
pub mod wythoff;
