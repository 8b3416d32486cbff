//! Codon state and rigid-body geometry.
//!
//! A codon is a T: the red and blue arms point in opposite directions along
//! the horizontal axis, the vertical arm sits at +π/2 from the red arm, and
//! all three meet at the middle, which doubles as the center of mass. Every
//! field is a circle centered at an arm tip; the yellow field shares the
//! vertical tip with the purple/green field.

use std::f64::consts::{FRAC_PI_2, PI, TAU};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use serde::{Deserialize, Serialize};

use crate::error::{Result, SimError};
pub use crate::params::{FieldRadii, SimParams};

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Vec2 {
    pub x: f64,
    pub y: f64,
}

impl Vec2 {
    pub const ZERO: Vec2 = Vec2 { x: 0.0, y: 0.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn from_angle(theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        Self { x: c, y: s }
    }

    pub fn dot(self, o: Vec2) -> f64 {
        self.x * o.x + self.y * o.y
    }

    /// z component of the 3D cross product.
    pub fn cross(self, o: Vec2) -> f64 {
        self.x * o.y - self.y * o.x
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn distance(self, o: Vec2) -> f64 {
        (o - self).norm()
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl Add for Vec2 {
    type Output = Vec2;
    fn add(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x + o.x, self.y + o.y)
    }
}

impl AddAssign for Vec2 {
    fn add_assign(&mut self, o: Vec2) {
        self.x += o.x;
        self.y += o.y;
    }
}

impl Sub for Vec2 {
    type Output = Vec2;
    fn sub(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x - o.x, self.y - o.y)
    }
}

impl SubAssign for Vec2 {
    fn sub_assign(&mut self, o: Vec2) {
        self.x -= o.x;
        self.y -= o.y;
    }
}

impl Mul<f64> for Vec2 {
    type Output = Vec2;
    fn mul(self, s: f64) -> Vec2 {
        Vec2::new(self.x * s, self.y * s)
    }
}

impl Neg for Vec2 {
    type Output = Vec2;
    fn neg(self) -> Vec2 {
        Vec2::new(-self.x, -self.y)
    }
}

/// Signed angle in (-π, π] that rotates `from` onto `to`.
pub fn signed_angle(from: Vec2, to: Vec2) -> f64 {
    from.cross(to).atan2(from.dot(to))
}

/// Wraps an angle into [0, 2π).
pub fn normalize_angle(theta: f64) -> f64 {
    let a = theta.rem_euclid(TAU);
    if a >= TAU {
        0.0
    } else {
        a
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CodonId(pub u32);

impl CodonId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for CodonId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// Type0 codons carry a purple vertical field and encode 0; Type1 codons
/// carry a green vertical field and encode 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CodonType {
    Type0,
    Type1,
}

impl CodonType {
    pub fn bit(self) -> char {
        match self {
            CodonType::Type0 => '0',
            CodonType::Type1 => '1',
        }
    }

    pub fn from_bit(c: char) -> Option<Self> {
        match c {
            '0' => Some(CodonType::Type0),
            '1' => Some(CodonType::Type1),
            _ => None,
        }
    }

    pub fn vertical_field(self) -> FieldKind {
        match self {
            CodonType::Type0 => FieldKind::Purple,
            CodonType::Type1 => FieldKind::Green,
        }
    }

    pub fn complement(self) -> Self {
        match self {
            CodonType::Type0 => CodonType::Type1,
            CodonType::Type1 => CodonType::Type0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Pose {
    pub x: f64,
    pub y: f64,
    pub angle: f64,
}

impl Pose {
    pub fn new(x: f64, y: f64, angle: f64) -> Self {
        Self {
            x,
            y,
            angle: normalize_angle(angle),
        }
    }

    pub fn middle(&self) -> Vec2 {
        Vec2::new(self.x, self.y)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Velocity {
    pub vx: f64,
    pub vy: f64,
    pub omega: f64,
}

impl Velocity {
    pub fn linear(&self) -> Vec2 {
        Vec2::new(self.vx, self.vy)
    }

    pub fn is_finite(&self) -> bool {
        self.vx.is_finite() && self.vy.is_finite() && self.omega.is_finite()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Arm {
    Red,
    Blue,
    Vertical,
}

impl Arm {
    pub const ALL: [Arm; 3] = [Arm::Red, Arm::Blue, Arm::Vertical];

    pub fn index(self) -> usize {
        self as usize
    }

    /// Direction of the arm relative to the codon angle.
    pub fn offset_angle(self) -> f64 {
        match self {
            Arm::Red => 0.0,
            Arm::Blue => PI,
            Arm::Vertical => FRAC_PI_2,
        }
    }

    pub fn length(self, params: &SimParams) -> f64 {
        match self {
            Arm::Red | Arm::Blue => params.arm_length_horizontal,
            Arm::Vertical => params.arm_length_vertical,
        }
    }

    /// The arm a red-blue or vertical bond attaches to on the other codon.
    pub fn partner(self) -> Arm {
        match self {
            Arm::Red => Arm::Blue,
            Arm::Blue => Arm::Red,
            Arm::Vertical => Arm::Vertical,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FieldKind {
    Red,
    Blue,
    Green,
    Purple,
    Yellow,
}

impl FieldKind {
    pub const ALL: [FieldKind; 5] = [
        FieldKind::Red,
        FieldKind::Blue,
        FieldKind::Green,
        FieldKind::Purple,
        FieldKind::Yellow,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            FieldKind::Red => "red",
            FieldKind::Blue => "blue",
            FieldKind::Green => "green",
            FieldKind::Purple => "purple",
            FieldKind::Yellow => "yellow",
        }
    }

    pub(crate) fn small_key(self) -> &'static str {
        match self {
            FieldKind::Red => "radius_small_red",
            FieldKind::Blue => "radius_small_blue",
            FieldKind::Green => "radius_small_green",
            FieldKind::Purple => "radius_small_purple",
            FieldKind::Yellow => "radius_small_yellow",
        }
    }

    pub(crate) fn large_key(self) -> &'static str {
        match self {
            FieldKind::Red => "radius_large_red",
            FieldKind::Blue => "radius_large_blue",
            FieldKind::Green => "radius_large_green",
            FieldKind::Purple => "radius_large_purple",
            FieldKind::Yellow => "radius_large_yellow",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub enum FieldSize {
    #[default]
    Small,
    Large,
}

impl FieldSize {
    pub fn is_large(self) -> bool {
        self == FieldSize::Large
    }

    pub fn from_large(large: bool) -> Self {
        if large {
            FieldSize::Large
        } else {
            FieldSize::Small
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub enum LocationState {
    #[default]
    S0,
    S1,
    S2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub enum SplittingState {
    #[default]
    X,
    Y,
    Z,
}

/// Axis-aligned rectangle confining codon middles.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Container {
    pub x_min: f64,
    pub y_min: f64,
    pub x_max: f64,
    pub y_max: f64,
}

impl Container {
    /// `[0, width] x [0, height]`.
    pub fn new(width: f64, height: f64) -> Self {
        Self {
            x_min: 0.0,
            y_min: 0.0,
            x_max: width,
            y_max: height,
        }
    }

    pub fn centered(width: f64, height: f64) -> Self {
        Self {
            x_min: -width / 2.0,
            y_min: -height / 2.0,
            x_max: width / 2.0,
            y_max: height / 2.0,
        }
    }

    pub fn width(&self) -> f64 {
        self.x_max - self.x_min
    }

    pub fn height(&self) -> f64 {
        self.y_max - self.y_min
    }

    pub fn center(&self) -> Vec2 {
        Vec2::new((self.x_min + self.x_max) / 2.0, (self.y_min + self.y_max) / 2.0)
    }

    /// Walls count as inside: the boundary rule parks codons on them.
    pub fn contains(&self, p: Vec2) -> bool {
        p.x >= self.x_min && p.x <= self.x_max && p.y >= self.y_min && p.y <= self.y_max
    }
}

/// One mobile automaton. Pose, velocity, the five field sizes, the three
/// bond slots and the two protocol states are the full per-codon state;
/// the timers are bookkeeping for the 150-step clauses.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Codon {
    pub id: CodonId,
    pub ctype: CodonType,
    pub pose: Pose,
    pub vel: Velocity,
    /// Indexed by [`FieldKind::index`].
    pub fields: [FieldSize; 5],
    /// Indexed by [`Arm::index`].
    pub bonds: [Option<CodonId>; 3],
    pub location: LocationState,
    pub splitting: SplittingState,
    pub yellow_timer: u32,
    pub z_timer: u32,
}

/// A fresh, free codon: every field small, no bonds, states S0/X.
pub fn make_codon(ctype: CodonType, pose: Pose, id: CodonId, container: &Container) -> Result<Codon> {
    if !(pose.x.is_finite() && pose.y.is_finite() && pose.angle.is_finite())
        || !container.contains(pose.middle())
    {
        return Err(SimError::OutOfBounds { x: pose.x, y: pose.y });
    }
    Ok(Codon {
        id,
        ctype,
        pose: Pose::new(pose.x, pose.y, pose.angle),
        vel: Velocity::default(),
        fields: [FieldSize::Small; 5],
        bonds: [None; 3],
        location: LocationState::S0,
        splitting: SplittingState::X,
        yellow_timer: 0,
        z_timer: 0,
    })
}

impl Codon {
    pub fn middle(&self) -> Vec2 {
        self.pose.middle()
    }

    pub fn arm_direction(&self, arm: Arm) -> Vec2 {
        Vec2::from_angle(self.pose.angle + arm.offset_angle())
    }

    pub fn tip(&self, arm: Arm, params: &SimParams) -> Vec2 {
        self.middle() + self.arm_direction(arm) * arm.length(params)
    }

    pub fn bond(&self, arm: Arm) -> Option<CodonId> {
        self.bonds[arm.index()]
    }

    pub fn field(&self, kind: FieldKind) -> FieldSize {
        self.fields[kind.index()]
    }

    pub fn set_field(&mut self, kind: FieldKind, size: FieldSize) {
        self.fields[kind.index()] = size;
    }

    pub fn vertical_field(&self) -> FieldKind {
        self.ctype.vertical_field()
    }

    /// Current radius of a field, per its size flag.
    pub fn field_radius(&self, kind: FieldKind, params: &SimParams) -> f64 {
        params.radius(kind, self.field(kind).is_large())
    }

    /// Where a field is centered.
    pub fn field_center(&self, kind: FieldKind, params: &SimParams) -> Vec2 {
        match kind {
            FieldKind::Red => self.tip(Arm::Red, params),
            FieldKind::Blue => self.tip(Arm::Blue, params),
            FieldKind::Green | FieldKind::Purple | FieldKind::Yellow => self.tip(Arm::Vertical, params),
        }
    }

    pub fn horizontal_bond_count(&self) -> usize {
        usize::from(self.bonds[Arm::Red.index()].is_some())
            + usize::from(self.bonds[Arm::Blue.index()].is_some())
    }

    pub fn is_free(&self) -> bool {
        self.bonds.iter().all(Option::is_none)
    }

    /// The seven discrete variables packed into an index in `0..288`.
    pub fn discrete_state_index(&self) -> usize {
        discrete_state_index(&self.fields, self.location, self.splitting)
    }
}

/// Packs five binary field flags and the two three-valued protocol states.
pub fn discrete_state_index(
    fields: &[FieldSize; 5],
    location: LocationState,
    splitting: SplittingState,
) -> usize {
    let mut idx = 0;
    for f in fields {
        idx = idx * 2 + usize::from(f.is_large());
    }
    idx = idx * 3 + location as usize;
    idx * 3 + splitting as usize
}

pub const DISCRETE_STATE_COUNT: usize = 32 * 9;

pub fn tip_position(codon: &Codon, arm: Arm, params: &SimParams) -> Vec2 {
    codon.tip(arm, params)
}

/// Circles intersect or touch.
pub fn fields_touch(center_a: Vec2, radius_a: f64, center_b: Vec2, radius_b: f64) -> bool {
    center_a.distance(center_b) <= radius_a + radius_b
}

/// Deviation from perfect linear alignment: the angle between arm A and the
/// reversed arm B. Zero when the arms point straight at each other.
pub fn alignment_error(a: &Codon, arm_a: Arm, b: &Codon, arm_b: Arm) -> f64 {
    signed_angle(a.arm_direction(arm_a), -b.arm_direction(arm_b)).abs()
}
