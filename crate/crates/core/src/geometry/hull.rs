use alloc::vec::Vec;

use super::point::Point;
use super::predicates::orient_sign;

/// Counter-clockwise convex hull without collinear points, starting at the
/// lexicographically smallest point.
pub fn convex_hull(points: &[Point]) -> Vec<Point> {
    let mut pts: Vec<Point> = points.to_vec();
    pts.sort();
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let mut lower: Vec<Point> = Vec::new();
    for p in &pts {
        while lower.len() >= 2 && orient_sign(&lower[lower.len() - 2], &lower[lower.len() - 1], p) <= 0 {
            lower.pop();
        }
        lower.push(p.clone());
    }
    let mut upper: Vec<Point> = Vec::new();
    for p in pts.iter().rev() {
        while upper.len() >= 2 && orient_sign(&upper[upper.len() - 2], &upper[upper.len() - 1], p) <= 0 {
            upper.pop();
        }
        upper.push(p.clone());
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn square_with_inner_and_edge_points() {
        let p = |x, y| Point::from_ints(x, y);
        let h = convex_hull(&[p(0, 0), p(2, 0), p(1, 0), p(2, 2), p(1, 1), p(0, 2), p(0, 0)]);
        assert_eq!(h, vec![p(0, 0), p(2, 0), p(2, 2), p(0, 2)]);
    }
}
