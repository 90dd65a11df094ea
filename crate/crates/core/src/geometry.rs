//! Exact vectors, signed permutation matrices and isometries of euclidean 3-space.
//!
//! Isometries act on row vectors from the right: `x ↦ xM + t`. Composition
//! follows the same convention, so [`compose`]`(a, b)` means "apply `a`, then
//! `b`".

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_integer::Integer;
use num_rational::Rational64;
use num_traits::Zero;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeometryError {
    #[error("matrix {0:?} is not a signed permutation matrix")]
    NotSignedPermutation(Vec<Vec<i64>>),
    #[error("cannot parse rational {0:?}")]
    InvalidRational(String),
    #[error("coordinate {0} is neither an integer nor a half-integer")]
    UnsupportedDenominator(Rational64),
    #[error("cannot parse coordinate formula {0:?}")]
    InvalidFormula(String),
    #[error("box bound {min} exceeds {max} on axis {axis}")]
    InvertedBox { axis: usize, min: i64, max: i64 },
}

/// Parses `"p"` or `"p/q"` into an exact rational.
pub fn parse_rational(s: &str) -> Result<Rational64, GeometryError> {
    let bad = || GeometryError::InvalidRational(s.to_string());
    let t = s.trim();
    match t.split_once('/') {
        Some((n, d)) => {
            let n: i64 = n.trim().parse().map_err(|_| bad())?;
            let d: i64 = d.trim().parse().map_err(|_| bad())?;
            if d == 0 {
                return Err(bad());
            }
            Ok(Rational64::new(n, d))
        }
        None => t.parse::<i64>().map(Rational64::from_integer).map_err(|_| bad()),
    }
}

/// Canonical text form of a rational: `"3"`, `"-1/2"`.
pub fn format_rational(r: Rational64) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// A point or vector whose coordinates are integers or half-integers.
///
/// Stored internally in half-units so that all arithmetic stays in `i64`.
/// The derived ordering is lexicographic on `(x, y, z)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct RationalVec3 {
    halves: [i64; 3],
}

impl RationalVec3 {
    pub const ZERO: RationalVec3 = RationalVec3 { halves: [0; 3] };

    /// An integer point.
    pub const fn new(x: i64, y: i64, z: i64) -> Self {
        RationalVec3 {
            halves: [2 * x, 2 * y, 2 * z],
        }
    }

    /// A point given by twice its coordinates.
    pub const fn from_halves(halves: [i64; 3]) -> Self {
        RationalVec3 { halves }
    }

    pub fn from_rationals(c: [Rational64; 3]) -> Result<Self, GeometryError> {
        let mut halves = [0; 3];
        for (h, r) in halves.iter_mut().zip(c) {
            let twice = r * 2;
            if !twice.is_integer() {
                return Err(GeometryError::UnsupportedDenominator(r));
            }
            *h = twice.to_integer();
        }
        Ok(RationalVec3 { halves })
    }

    pub const fn halves(&self) -> [i64; 3] {
        self.halves
    }

    pub fn coord(&self, i: usize) -> Rational64 {
        Rational64::new(self.halves[i], 2)
    }

    pub fn coords(&self) -> [Rational64; 3] {
        [self.coord(0), self.coord(1), self.coord(2)]
    }

    pub fn is_integral(&self) -> bool {
        self.halves.iter().all(|h| h % 2 == 0)
    }

    /// Integer coordinates, if the point is integral.
    pub fn to_integers(&self) -> Option<[i64; 3]> {
        self.is_integral()
            .then(|| [self.halves[0] / 2, self.halves[1] / 2, self.halves[2] / 2])
    }

    pub fn is_zero(&self) -> bool {
        self.halves == [0; 3]
    }

    pub fn scale(&self, k: i64) -> Self {
        RationalVec3 {
            halves: self.halves.map(|h| h * k),
        }
    }

    /// Four times the dot product; always an integer.
    pub fn dot4(&self, other: &Self) -> i64 {
        (0..3).map(|i| self.halves[i] * other.halves[i]).sum()
    }

    pub fn dot(&self, other: &Self) -> Rational64 {
        Rational64::new(self.dot4(other), 4)
    }

    pub fn norm2(&self) -> Rational64 {
        self.dot(self)
    }

    /// Four times the cross product, as an integer vector.
    pub fn cross4(&self, other: &Self) -> [i64; 3] {
        let a = self.halves;
        let b = other.halves;
        [
            a[1] * b[2] - a[2] * b[1],
            a[2] * b[0] - a[0] * b[2],
            a[0] * b[1] - a[1] * b[0],
        ]
    }

    /// The midpoint of two points, if it is still representable.
    pub fn midpoint(&self, other: &Self) -> Option<Self> {
        let s = *self + *other;
        s.halves
            .iter()
            .all(|h| h % 2 == 0)
            .then(|| RationalVec3::from_halves(s.halves.map(|h| h / 2)))
    }
}

impl Add for RationalVec3 {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        RationalVec3::from_halves([
            self.halves[0] + o.halves[0],
            self.halves[1] + o.halves[1],
            self.halves[2] + o.halves[2],
        ])
    }
}

impl Sub for RationalVec3 {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        self + (-o)
    }
}

impl Neg for RationalVec3 {
    type Output = Self;
    fn neg(self) -> Self {
        RationalVec3::from_halves(self.halves.map(|h| -h))
    }
}

impl fmt::Debug for RationalVec3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for RationalVec3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [x, y, z] = self.coords().map(format_rational);
        write!(f, "({x},{y},{z})")
    }
}

impl Serialize for RationalVec3 {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.coords().map(format_rational).serialize(s)
    }
}

impl<'de> Deserialize<'de> for RationalVec3 {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = <[String; 3]>::deserialize(d)?;
        let mut c = [Rational64::zero(); 3];
        for (slot, s) in c.iter_mut().zip(&raw) {
            *slot = parse_rational(s).map_err(D::Error::custom)?;
        }
        RationalVec3::from_rationals(c).map_err(D::Error::custom)
    }
}

/// True if all points lie in one plane (or on one line).
pub fn coplanar(points: &[RationalVec3]) -> bool {
    let Some(&p0) = points.first() else {
        return true;
    };
    let Some(&p1) = points.iter().find(|&&p| p != p0) else {
        return true;
    };
    let u = p1 - p0;
    let Some(normal) = points
        .iter()
        .map(|&p| u.cross4(&(p - p0)))
        .find(|n| *n != [0; 3])
    else {
        return true;
    };
    points.iter().all(|&p| {
        let d = (p - p0).halves();
        normal[0] * d[0] + normal[1] * d[1] + normal[2] * d[2] == 0
    })
}

/// True if all points lie on one line.
pub fn collinear(points: &[RationalVec3]) -> bool {
    let Some(&p0) = points.first() else {
        return true;
    };
    let Some(&p1) = points.iter().find(|&&p| p != p0) else {
        return true;
    };
    let u = p1 - p0;
    points.iter().all(|&p| u.cross4(&(p - p0)) == [0; 3])
}

/// An orthogonal matrix with exactly one entry `±1` in each row and column.
///
/// The image of a row vector is `(xM)_j = sign[j] * x[perm[j]]`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SignedPermMatrix {
    perm: [u8; 3],
    sign: [i8; 3],
}

const PERMUTATIONS: [[u8; 3]; 6] = [
    [0, 1, 2],
    [0, 2, 1],
    [1, 0, 2],
    [1, 2, 0],
    [2, 0, 1],
    [2, 1, 0],
];

impl SignedPermMatrix {
    pub const IDENTITY: SignedPermMatrix = SignedPermMatrix {
        perm: [0, 1, 2],
        sign: [1, 1, 1],
    };
    pub const NEG_IDENTITY: SignedPermMatrix = SignedPermMatrix {
        perm: [0, 1, 2],
        sign: [-1, -1, -1],
    };

    /// Builds the map `x ↦ (sign[0]·x[perm[0]], sign[1]·x[perm[1]], sign[2]·x[perm[2]])`.
    pub fn from_images(perm: [u8; 3], sign: [i8; 3]) -> Option<Self> {
        let valid_perm = PERMUTATIONS.contains(&perm);
        let valid_sign = sign.iter().all(|s| *s == 1 || *s == -1);
        (valid_perm && valid_sign).then_some(SignedPermMatrix { perm, sign })
    }

    /// All 48 elements of the full octahedral group `[3,4]`, in sorted order.
    pub fn all() -> Vec<SignedPermMatrix> {
        let mut out = Vec::with_capacity(48);
        for perm in PERMUTATIONS {
            for bits in 0..8u8 {
                let sign = [0, 1, 2].map(|i| if bits >> i & 1 == 1 { -1 } else { 1 });
                out.push(SignedPermMatrix { perm, sign });
            }
        }
        out.sort();
        out
    }

    pub fn from_rows(rows: [[i64; 3]; 3]) -> Result<Self, GeometryError> {
        let bad = || GeometryError::NotSignedPermutation(rows.iter().map(|r| r.to_vec()).collect());
        let mut perm = [0u8; 3];
        let mut sign = [0i8; 3];
        for j in 0..3 {
            let nonzero: Vec<usize> = (0..3).filter(|&i| rows[i][j] != 0).collect();
            if nonzero.len() != 1 {
                return Err(bad());
            }
            let i = nonzero[0];
            sign[j] = match rows[i][j] {
                1 => 1,
                -1 => -1,
                _ => return Err(bad()),
            };
            perm[j] = i as u8;
        }
        SignedPermMatrix::from_images(perm, sign).ok_or_else(bad)
    }

    pub fn rows(&self) -> [[i64; 3]; 3] {
        let mut rows = [[0; 3]; 3];
        for j in 0..3 {
            rows[self.perm[j] as usize][j] = self.sign[j] as i64;
        }
        rows
    }

    pub fn perm(&self) -> [u8; 3] {
        self.perm
    }

    pub fn signs(&self) -> [i8; 3] {
        self.sign
    }

    pub fn apply(&self, v: RationalVec3) -> RationalVec3 {
        let h = v.halves();
        RationalVec3::from_halves([0, 1, 2].map(|j| self.sign[j] as i64 * h[self.perm[j] as usize]))
    }

    /// The product `self · other`: apply `self`, then `other`.
    pub fn then(&self, other: &SignedPermMatrix) -> SignedPermMatrix {
        let mut perm = [0u8; 3];
        let mut sign = [0i8; 3];
        for j in 0..3 {
            let k = other.perm[j] as usize;
            perm[j] = self.perm[k];
            sign[j] = other.sign[j] * self.sign[k];
        }
        SignedPermMatrix { perm, sign }
    }

    pub fn inverse(&self) -> SignedPermMatrix {
        let mut perm = [0u8; 3];
        let mut sign = [0i8; 3];
        for j in 0..3 {
            let i = self.perm[j] as usize;
            perm[i] = j as u8;
            sign[i] = self.sign[j];
        }
        SignedPermMatrix { perm, sign }
    }

    pub fn determinant(&self) -> i64 {
        let p = self.perm;
        let inversions = (0..3)
            .flat_map(|i| (i + 1..3).map(move |j| (i, j)))
            .filter(|&(i, j)| p[i] > p[j])
            .count();
        let parity = if inversions % 2 == 0 { 1 } else { -1 };
        parity * self.sign.iter().map(|&s| s as i64).product::<i64>()
    }

    pub fn is_proper(&self) -> bool {
        self.determinant() == 1
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::IDENTITY
    }

    pub fn order(&self) -> usize {
        let mut m = *self;
        let mut n = 1;
        while !m.is_identity() {
            m = m.then(self);
            n += 1;
        }
        n
    }

    pub fn power(&self, k: i64) -> SignedPermMatrix {
        let base = if k < 0 { self.inverse() } else { *self };
        (0..k.unsigned_abs()).fold(Self::IDENTITY, |acc, _| acc.then(&base))
    }

    /// Rotation data of this matrix, or of its negative when it is improper.
    pub fn rotation_data(&self) -> RotationData {
        let proper = self.is_proper();
        let rot = if proper { *self } else { self.then(&Self::NEG_IDENTITY) };
        let order = rot.order();
        let angle = match order {
            1 => AngleClass::Zero,
            2 => AngleClass::Pi,
            3 => AngleClass::TwoPiOverThree,
            _ => AngleClass::PiOverTwo,
        };
        let axis = (order > 1).then(|| rotation_axis(&rot, order)).flatten();
        RotationData {
            proper,
            order,
            element_order: self.order(),
            angle,
            axis,
        }
    }
}

fn rotation_axis(rot: &SignedPermMatrix, order: usize) -> Option<RationalVec3> {
    for i in 0..3 {
        let mut e = [0i64; 3];
        e[i] = 2;
        let mut v = RationalVec3::from_halves(e);
        let mut sum = RationalVec3::ZERO;
        for _ in 0..order {
            sum = sum + v;
            v = rot.apply(v);
        }
        if !sum.is_zero() {
            let h = sum.halves();
            let g = h.iter().fold(0i64, |g, &x| g.gcd(&x));
            let mut dir = h.map(|x| x / g);
            if dir.iter().find(|x| **x != 0).is_some_and(|x| *x < 0) {
                dir = dir.map(|x| -x);
            }
            return Some(RationalVec3::new(dir[0], dir[1], dir[2]));
        }
    }
    None
}

impl Mul for SignedPermMatrix {
    type Output = SignedPermMatrix;
    fn mul(self, rhs: Self) -> Self {
        self.then(&rhs)
    }
}

impl fmt::Debug for SignedPermMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for SignedPermMatrix {
    /// Formula form, e.g. `(-y,x,z)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = (0..3)
            .map(|j| {
                let var = ["x", "y", "z"][self.perm[j] as usize];
                if self.sign[j] < 0 {
                    format!("-{var}")
                } else {
                    var.to_string()
                }
            })
            .collect();
        write!(f, "({})", parts.join(","))
    }
}

impl FromStr for SignedPermMatrix {
    type Err = GeometryError;

    /// Parses formula form such as `(-y,x,z)`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || GeometryError::InvalidFormula(s.to_string());
        let inner = s
            .trim()
            .strip_prefix('(')
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(bad)?;
        let parts: Vec<&str> = inner.split(',').map(str::trim).collect();
        if parts.len() != 3 {
            return Err(bad());
        }
        let mut perm = [0u8; 3];
        let mut sign = [1i8; 3];
        for (j, part) in parts.iter().enumerate() {
            let (sg, var) = match part.strip_prefix('-') {
                Some(v) => (-1, v),
                None => (1, *part),
            };
            perm[j] = match var {
                "x" => 0,
                "y" => 1,
                "z" => 2,
                _ => return Err(bad()),
            };
            sign[j] = sg;
        }
        SignedPermMatrix::from_images(perm, sign).ok_or_else(bad)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AngleClass {
    Zero,
    Pi,
    TwoPiOverThree,
    PiOverTwo,
}

impl fmt::Display for AngleClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AngleClass::Zero => "0",
            AngleClass::Pi => "pi",
            AngleClass::TwoPiOverThree => "2pi/3",
            AngleClass::PiOverTwo => "pi/2",
        })
    }
}

/// Rotation order, angle and axis of a matrix (of its negative, if improper).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RotationData {
    pub proper: bool,
    /// Order of the rotation part.
    pub order: usize,
    /// Order of the matrix itself.
    pub element_order: usize,
    pub angle: AngleClass,
    /// Primitive integer axis direction, first nonzero coordinate positive.
    pub axis: Option<RationalVec3>,
}

/// An isometry `x ↦ xM + t` with signed permutation linear part.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Isometry {
    linear: SignedPermMatrix,
    translation: RationalVec3,
}

/// Apply `a`, then `b`.
pub fn compose(a: &Isometry, b: &Isometry) -> Isometry {
    a.then(b)
}

impl Isometry {
    pub const IDENTITY: Isometry = Isometry {
        linear: SignedPermMatrix::IDENTITY,
        translation: RationalVec3::ZERO,
    };

    pub const fn new(linear: SignedPermMatrix, translation: RationalVec3) -> Self {
        Isometry { linear, translation }
    }

    pub const fn linear_map(linear: SignedPermMatrix) -> Self {
        Isometry::new(linear, RationalVec3::ZERO)
    }

    pub const fn translation_by(t: RationalVec3) -> Self {
        Isometry::new(SignedPermMatrix::IDENTITY, t)
    }

    /// The point reflection `x ↦ -x + w`, centered at `w/2`.
    pub const fn point_reflection(w: RationalVec3) -> Self {
        Isometry::new(SignedPermMatrix::NEG_IDENTITY, w)
    }

    pub fn linear(&self) -> SignedPermMatrix {
        self.linear
    }

    pub fn translation(&self) -> RationalVec3 {
        self.translation
    }

    pub fn apply(&self, v: RationalVec3) -> RationalVec3 {
        self.linear.apply(v) + self.translation
    }

    /// Apply `self`, then `other`.
    pub fn then(&self, other: &Isometry) -> Isometry {
        Isometry {
            linear: self.linear.then(&other.linear),
            translation: other.linear.apply(self.translation) + other.translation,
        }
    }

    pub fn inverse(&self) -> Isometry {
        let inv = self.linear.inverse();
        Isometry {
            linear: inv,
            translation: -inv.apply(self.translation),
        }
    }

    pub fn power(&self, k: i64) -> Isometry {
        let base = if k < 0 { self.inverse() } else { *self };
        (0..k.unsigned_abs()).fold(Self::IDENTITY, |acc, _| acc.then(&base))
    }

    /// `g⁻¹ · self · g` in right-action order: `g⁻¹`, then `self`, then `g`.
    pub fn conjugate_by(&self, g: &Isometry) -> Isometry {
        g.inverse().then(self).then(g)
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::IDENTITY
    }

    pub fn is_involution(&self) -> bool {
        !self.is_identity() && self.then(self).is_identity()
    }

    pub fn is_translation(&self) -> bool {
        self.linear.is_identity()
    }

    /// The order of the isometry, or `None` if it has infinite order.
    pub fn order(&self) -> Option<usize> {
        let n = self.linear.order();
        self.power(n as i64).is_identity().then(|| {
            (1..=n)
                .find(|&k| self.power(k as i64).is_identity())
                .unwrap_or(n)
        })
    }

    /// Dimension of the fixed-point set, or `None` when it is empty.
    pub fn fixed_space_dimension(&self) -> Option<usize> {
        self.fixed_space().map(|(_, dirs)| dirs)
    }

    /// A fixed point and the dimension of the fixed space, if nonempty.
    ///
    /// The fixed point solves `x(M - I) = -t` exactly.
    pub fn fixed_space(&self) -> Option<([Rational64; 3], usize)> {
        let m = self.linear.rows();
        let t = self.translation.coords();
        // Equation j: sum_i x_i (M_ij - δ_ij) = -t_j.
        let mut aug: Vec<[Rational64; 4]> = (0..3)
            .map(|j| {
                let mut row = [Rational64::zero(); 4];
                for (i, slot) in row.iter_mut().take(3).enumerate() {
                    let delta = if i == j { 1 } else { 0 };
                    *slot = Rational64::from_integer(m[i][j] - delta);
                }
                row[3] = -t[j];
                row
            })
            .collect();
        let pivots = row_reduce(&mut aug);
        if pivots.contains(&3) {
            return None;
        }
        let mut x = [Rational64::zero(); 3];
        for (r, &c) in pivots.iter().enumerate() {
            x[c] = aug[r][3];
        }
        Some((x, 3 - pivots.len()))
    }

    /// Rotation data of the linear part.
    pub fn rotation_data(&self) -> RotationData {
        self.linear.rotation_data()
    }
}

/// Reduced row echelon form in place; returns pivot columns.
fn row_reduce(rows: &mut [[Rational64; 4]]) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..4 {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let lead = rows[r][c];
        for v in rows[r].iter_mut() {
            *v /= lead;
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c];
                for k in 0..4 {
                    let sub = f * rows[r][k];
                    rows[i][k] -= sub;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    pivots
}

impl fmt::Debug for Isometry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Isometry {
    /// Formula form, e.g. `(-x,y,-z)+(1,0,1)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.translation.is_zero() {
            write!(f, "{}", self.linear)
        } else {
            write!(f, "{}+{}", self.linear, self.translation)
        }
    }
}

impl FromStr for Isometry {
    type Err = GeometryError;

    /// Parses `(-x,y,-z)+(1,0,1)` or a bare linear formula.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let Some((lin, trans)) = s.split_once(")+(") else {
            return Ok(Isometry::linear_map(s.parse()?));
        };
        let linear: SignedPermMatrix = format!("{lin})").parse()?;
        let inner = trans
            .strip_suffix(')')
            .ok_or_else(|| GeometryError::InvalidFormula(s.to_string()))?;
        let parts: Vec<&str> = inner.split(',').collect();
        if parts.len() != 3 {
            return Err(GeometryError::InvalidFormula(s.to_string()));
        }
        let mut c = [Rational64::zero(); 3];
        for (slot, p) in c.iter_mut().zip(parts) {
            *slot = parse_rational(p)?;
        }
        Ok(Isometry::new(linear, RationalVec3::from_rationals(c)?))
    }
}

#[derive(Serialize, Deserialize)]
struct IsometryRepr {
    linear: [[i64; 3]; 3],
    translation: RationalVec3,
}

impl Serialize for Isometry {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        IsometryRepr {
            linear: self.linear.rows(),
            translation: self.translation,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Isometry {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let repr = IsometryRepr::deserialize(d)?;
        let linear = SignedPermMatrix::from_rows(repr.linear).map_err(D::Error::custom)?;
        Ok(Isometry::new(linear, repr.translation))
    }
}

/// A closed axis-aligned box with integer bounds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IntBox {
    pub min: [i64; 3],
    pub max: [i64; 3],
}

impl IntBox {
    pub fn new(min: [i64; 3], max: [i64; 3]) -> Result<Self, GeometryError> {
        for axis in 0..3 {
            if min[axis] > max[axis] {
                return Err(GeometryError::InvertedBox {
                    axis,
                    min: min[axis],
                    max: max[axis],
                });
            }
        }
        Ok(IntBox { min, max })
    }

    /// The cube `[lo, hi]³`.
    pub fn cube(lo: i64, hi: i64) -> Result<Self, GeometryError> {
        IntBox::new([lo; 3], [hi; 3])
    }

    /// True if some axis has zero extent.
    pub fn is_degenerate(&self) -> bool {
        (0..3).any(|i| self.min[i] == self.max[i])
    }

    pub fn contains(&self, v: &RationalVec3) -> bool {
        let h = v.halves();
        (0..3).all(|i| 2 * self.min[i] <= h[i] && h[i] <= 2 * self.max[i])
    }

    pub fn expand(&self, margin: i64) -> IntBox {
        IntBox {
            min: self.min.map(|m| m - margin),
            max: self.max.map(|m| m + margin),
        }
    }

    /// Smallest integer box containing `self` and `v`.
    pub fn hull_with(&self, v: &RationalVec3) -> IntBox {
        let h = v.halves();
        let mut out = *self;
        for i in 0..3 {
            out.min[i] = out.min[i].min(Integer::div_floor(&h[i], &2));
            out.max[i] = out.max[i].max(Integer::div_ceil(&h[i], &2));
        }
        out
    }

    /// All integer points in the box, lexicographically ordered.
    pub fn integer_points(&self) -> impl Iterator<Item = RationalVec3> + '_ {
        (self.min[0]..=self.max[0]).flat_map(move |x| {
            (self.min[1]..=self.max[1])
                .flat_map(move |y| (self.min[2]..=self.max[2]).map(move |z| RationalVec3::new(x, y, z)))
        })
    }

    pub fn num_integer_points(&self) -> usize {
        (0..3)
            .map(|i| (self.max[i] - self.min[i] + 1) as usize)
            .product()
    }
}

impl fmt::Display for IntBox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.min.iter().all(|m| *m == self.min[0]) && self.max.iter().all(|m| *m == self.max[0]) {
            write!(f, "[{},{}]^3", self.min[0], self.max[0])
        } else {
            let axes: Vec<String> = (0..3)
                .map(|i| format!("[{},{}]", self.min[i], self.max[i]))
                .collect();
            f.write_str(&axes.join("x"))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iso(s: &str) -> Isometry {
        s.parse().unwrap()
    }

    #[test]
    fn compose_and_apply_examples() {
        let r0 = iso("(-x,y,-z)+(1,0,1)");
        let r1 = iso("(-x,z,y)");
        let r2hat = iso("(x,-y,z)");
        assert_eq!(compose(&Isometry::IDENTITY, &r0), r0);
        assert_eq!(r0.apply(RationalVec3::ZERO), RationalVec3::new(1, 0, 1));
        let twist = compose(&r0, &r1);
        assert_eq!(twist.linear().order(), 4);
        assert_eq!(compose(&r0, &r2hat), iso("(-x,-y,-z)+(1,0,1)"));

        let s = iso("(-z,x,-y)");
        assert_eq!(s.apply(RationalVec3::new(1, 0, 0)), RationalVec3::new(0, 1, 0));
        assert_eq!(s.inverse(), iso("(y,-z,-x)"));
        assert!(compose(&s, &s.inverse()).is_identity());
    }

    #[test]
    fn matrix_rows_follow_right_action() {
        let m: SignedPermMatrix = "(-y,x,z)".parse().unwrap();
        assert_eq!(m.rows(), [[0, 1, 0], [-1, 0, 0], [0, 0, 1]]);
        assert_eq!(SignedPermMatrix::from_rows(m.rows()).unwrap(), m);
        assert!(SignedPermMatrix::from_rows([[1, 1, 0], [0, 0, 1], [0, 0, 0]]).is_err());
        assert!(SignedPermMatrix::from_rows([[2, 0, 0], [0, 1, 0], [0, 0, 1]]).is_err());
    }

    #[test]
    fn fixed_space_dimensions() {
        assert_eq!(Isometry::IDENTITY.fixed_space_dimension(), Some(3));
        assert_eq!(iso("(-x,y,-z)+(1,0,1)").fixed_space_dimension(), Some(1));
        let pr = Isometry::point_reflection(RationalVec3::new(1, 0, 1));
        let (center, dim) = pr.fixed_space().unwrap();
        assert_eq!(dim, 0);
        assert_eq!(RationalVec3::from_rationals(center).unwrap(), RationalVec3::from_halves([1, 0, 1]));
        assert_eq!(pr.inverse(), pr);
        assert_eq!(Isometry::translation_by(RationalVec3::new(1, 0, 0)).fixed_space_dimension(), None);
        assert_eq!(iso("(x,y,-z)+(1,0,0)").fixed_space_dimension(), None);
        assert_eq!(iso("(x,y,-z)").fixed_space_dimension(), Some(2));
    }

    #[test]
    fn rotation_data_examples() {
        let id = SignedPermMatrix::IDENTITY.rotation_data();
        assert!(id.proper);
        assert_eq!(id.order, 1);
        let s: SignedPermMatrix = "(-y,x,z)".parse().unwrap();
        let d = s.rotation_data();
        assert_eq!((d.proper, d.order, d.angle), (true, 4, AngleClass::PiOverTwo));
        assert_eq!(d.axis, Some(RationalVec3::new(0, 0, 1)));
        let r1: SignedPermMatrix = "(-x,z,y)".parse().unwrap();
        let d = r1.rotation_data();
        assert_eq!((d.proper, d.order), (true, 2));
        assert_eq!(d.axis, Some(RationalVec3::new(0, 1, 1)));
        let refl: SignedPermMatrix = "(x,y,-z)".parse().unwrap();
        let d = refl.rotation_data();
        assert!(!d.proper);
        assert_eq!((d.order, d.element_order), (2, 2));
        assert_eq!(d.axis, Some(RationalVec3::new(0, 0, 1)));
    }

    #[test]
    fn rational_round_trip() {
        for s in ["0", "-3", "1/2", "-5/2"] {
            assert_eq!(format_rational(parse_rational(s).unwrap()), s);
        }
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("0.5").is_err());
        assert!(RationalVec3::from_rationals([Rational64::new(1, 3), 0.into(), 0.into()]).is_err());
    }

    #[test]
    fn isometry_json_format() {
        let r0 = iso("(-y,x,z)+(1/2,0,-1)");
        let json = serde_json::to_string(&r0).unwrap();
        assert_eq!(
            json,
            r#"{"linear":[[0,1,0],[-1,0,0],[0,0,1]],"translation":["1/2","0","-1"]}"#
        );
        let back: Isometry = serde_json::from_str(&json).unwrap();
        assert_eq!(back, r0);
    }

    #[test]
    fn planarity() {
        let tri = [RationalVec3::ZERO, RationalVec3::new(1, 0, 1), RationalVec3::new(0, 1, 1)];
        assert!(coplanar(&tri));
        let mut skew = tri.to_vec();
        skew.push(RationalVec3::new(1, 1, 0));
        assert!(!coplanar(&skew));
        assert!(collinear(&[RationalVec3::ZERO, RationalVec3::new(1, 1, 1), RationalVec3::new(3, 3, 3)]));
    }

    #[test]
    fn box_operations() {
        let b = IntBox::cube(-1, 1).unwrap();
        assert_eq!(b.num_integer_points(), 27);
        assert!(b.contains(&RationalVec3::from_halves([1, -2, 2])));
        assert!(!b.contains(&RationalVec3::from_halves([3, 0, 0])));
        assert!(IntBox::cube(2, 1).is_err());
        assert!(IntBox::cube(0, 0).unwrap().is_degenerate());
        let h = b.hull_with(&RationalVec3::from_halves([5, 0, -7]));
        assert_eq!((h.min, h.max), ([-1, -1, -4], [3, 1, 1]));
    }
}
