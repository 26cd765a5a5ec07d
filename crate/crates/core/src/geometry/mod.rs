//! Exact rational planar primitives.

mod hull;
mod point;
mod polygon;
mod predicates;

pub use hull::convex_hull;
pub use point::{int, rat, rational_from_f64, Point, Rational};
#[allow(unused_imports)]
pub(crate) use point::{half, sign, to_f64};
pub use polygon::{
    signed_area2, validate_simple, Containment, Segment, SimplePolygon, ValidationReport, Violation,
};
pub use predicates::{
    angle_cmp, cross_sign, dot_diff_sign, dot_sign, line_intersection, on_segment, orient_sign, orientation,
    param_on, same_direction, segments_cross_properly, segments_intersect, strictly_inside_segment,
    Orientation,
};

/// Alias matching the point type's role in exact predicates.
pub type ExactPoint = Point;
/// Alias for a closed exact segment.
pub type SegmentE = Segment;
