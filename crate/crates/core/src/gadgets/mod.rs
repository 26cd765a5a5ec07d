//! Guard-segment gadgets and the families of galleries built from them.

mod builder;
mod double_torus;
mod families;
mod sausage;

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::error::{Error, Result};
use crate::geometry::{Point, Rational, Segment, SimplePolygon};

pub use builder::{GalleryBuilder, PocketOptions};
pub(crate) use builder::chord_of;
pub use families::{family_segments, generate_family, generate_family_with, FamilyOptions};
pub use sausage::{sausage_nerve, validate_sausages, SausageReport, SpuriousPattern};

/// Side of a directed segment `a -> b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    Left,
    Right,
}

/// A spike in the polygon boundary whose tip is a polygon vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pocket {
    pub name: String,
    pub apex: Point,
    /// Index of `apex` among the polygon vertices.
    pub tip: usize,
    /// Where the spike meets the core, in counter-clockwise order.
    pub aperture: (Point, Point),
    /// The wedge seen from the tip is spanned by these two points.
    pub targets: (Point, Point),
}

/// A registered guard segment with its four pockets, in the order
/// `P_upper`, `P_middle`, `P_lower`, `P_left`. The first, second and fourth
/// sit on `pocket_side`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GuardSegmentSpec {
    pub segment: Segment,
    pub pocket_side: Side,
    pub aperture: Rational,
    pub pockets: [Pocket; 4],
}

impl GuardSegmentSpec {
    pub fn tips(&self) -> [usize; 4] {
        [self.pockets[0].tip, self.pockets[1].tip, self.pockets[2].tip, self.pockets[3].tip]
    }
}

/// Which construction produced an instance.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    Circle,
    Clover(usize),
    Chain(usize),
    /// Number of circles, a multiple of 4.
    Necklace(usize),
    Grid { h: usize, v: usize },
    Torus,
    DoubleTorus,
    /// Galleries from the formula compiler.
    Compiled,
    /// Anything loaded from a file without a known tag.
    Custom(String),
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Circle => write!(f, "circle"),
            Family::Clover(k) => write!(f, "clover({k})"),
            Family::Chain(k) => write!(f, "chain({k})"),
            Family::Necklace(k) => write!(f, "necklace({k})"),
            Family::Grid { h, v } => write!(f, "grid({h},{v})"),
            Family::Torus => write!(f, "torus"),
            Family::DoubleTorus => write!(f, "double_torus"),
            Family::Compiled => write!(f, "compiled"),
            Family::Custom(s) => write!(f, "custom:{s}"),
        }
    }
}

impl FromStr for Family {
    type Err = Error;

    /// Parses `circle`, `clover(3)`, `clover:3`, `grid(3,2)`, `grid:3x2`,
    /// `double_torus` and the like.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::InvalidParameter(alloc::format!("unknown family {s:?}"));
        let (name, args) = match s.find(['(', ':']) {
            Some(i) => (&s[..i], s[i + 1..].trim_end_matches(')')),
            None => (s, ""),
        };
        if name.eq_ignore_ascii_case("custom") {
            return Ok(Family::Custom(args.into()));
        }
        let nums: Vec<usize> = if args.is_empty() {
            Vec::new()
        } else {
            args.split([',', 'x'])
                .map(|a| a.trim().parse::<usize>().map_err(|_| bad()))
                .collect::<Result<_>>()?
        };
        let one = || if nums.len() == 1 { Ok(nums[0]) } else { Err(bad()) };
        match name.to_ascii_lowercase().replace('-', "_").as_str() {
            "circle" if nums.is_empty() => Ok(Family::Circle),
            "clover" => Ok(Family::Clover(one()?)),
            "chain" => Ok(Family::Chain(one()?)),
            "necklace" => Ok(Family::Necklace(one()?)),
            "grid" if nums.len() == 2 => Ok(Family::Grid { h: nums[0], v: nums[1] }),
            "torus" if nums.is_empty() => Ok(Family::Torus),
            "double_torus" | "doubletorus" if nums.is_empty() => Ok(Family::DoubleTorus),
            "compiled" => Ok(Family::Compiled),
            _ => Err(bad()),
        }
    }
}

/// A polygon with its registered guard segments and pockets.
#[derive(Clone, Debug, PartialEq)]
pub struct GalleryInstance {
    pub polygon: SimplePolygon,
    /// Convex region the pockets were carved into.
    pub core: Vec<Point>,
    pub guard_segments: Vec<GuardSegmentSpec>,
    /// Single-point guard sites that count like degenerate segments.
    pub guard_points: Vec<Point>,
    pub extra_pockets: Vec<Pocket>,
    pub family: Family,
    pub expected_k: usize,
}

impl GalleryInstance {
    pub fn segments(&self) -> Vec<Segment> {
        self.guard_segments.iter().map(|g| g.segment.clone()).collect()
    }

    /// Every pocket, segment pockets first.
    pub fn pockets(&self) -> impl Iterator<Item = &Pocket> + '_ {
        self.guard_segments.iter().flat_map(|g| g.pockets.iter()).chain(self.extra_pockets.iter())
    }

    /// Checks that every pocket tip is the recorded polygon vertex.
    pub fn check_pockets(&self) -> Result<()> {
        for p in self.pockets() {
            if p.tip >= self.polygon.len() || *self.polygon.vertex(p.tip) != p.apex {
                return Err(Error::InvalidParameter(alloc::format!("pocket {} does not match vertex {}", p.name, p.tip)));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn family_round_trip() {
        for f in [
            Family::Circle,
            Family::Clover(3),
            Family::Chain(2),
            Family::Necklace(4),
            Family::Grid { h: 3, v: 2 },
            Family::Torus,
            Family::DoubleTorus,
        ] {
            assert_eq!(alloc::format!("{f}").parse::<Family>().unwrap(), f);
        }
        assert_eq!("grid:4x1".parse::<Family>().unwrap(), Family::Grid { h: 4, v: 1 });
        assert!("hexagon".parse::<Family>().is_err());
    }
}
