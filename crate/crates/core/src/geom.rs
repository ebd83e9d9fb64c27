//! Exact integer geometry used by the geometric loader and by the test oracles.
//!
//! All predicates run on `i64` coordinates bounded by [`COORD_LIMIT`] and are
//! evaluated in `i128`, so no predicate ever rounds.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

/// Absolute bound on input coordinates. Keeps every product of two cross
/// products inside `i128`.
pub const COORD_LIMIT: i64 = 1 << 30;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct IPoint {
    pub x: i64,
    pub y: i64,
}

impl IPoint {
    pub const fn new(x: i64, y: i64) -> Self {
        IPoint { x, y }
    }

    pub fn in_range(self) -> bool {
        self.x.abs() <= COORD_LIMIT && self.y.abs() <= COORD_LIMIT
    }

    pub fn to_f64(self) -> [f64; 2] {
        [self.x as f64, self.y as f64]
    }

    fn sub(self, o: IPoint) -> (i128, i128) {
        (
            i128::from(self.x) - i128::from(o.x),
            i128::from(self.y) - i128::from(o.y),
        )
    }
}

fn cross(u: (i128, i128), v: (i128, i128)) -> i128 {
    u.0 * v.1 - u.1 * v.0
}

fn dot(u: (i128, i128), v: (i128, i128)) -> i128 {
    u.0 * v.0 + u.1 * v.1
}

/// Sign of the turn a -> b -> c: positive for counterclockwise.
pub fn orient(a: IPoint, b: IPoint, c: IPoint) -> i32 {
    cross(b.sub(a), c.sub(a)).signum() as i32
}

/// Whether `p` lies on the closed segment `ab`.
pub fn on_segment(p: IPoint, a: IPoint, b: IPoint) -> bool {
    orient(a, b, p) == 0 && p.x >= a.x.min(b.x) && p.x <= a.x.max(b.x) && p.y >= a.y.min(b.y) && p.y <= a.y.max(b.y)
}

/// A non-negative rational `num / den` with `den > 0`.
#[derive(Clone, Copy, Debug)]
pub struct Frac {
    pub num: i128,
    pub den: i128,
}

impl Frac {
    fn new(num: i128, den: i128) -> Self {
        if den < 0 {
            Frac { num: -num, den: -den }
        } else {
            Frac { num, den }
        }
    }

    pub fn to_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

impl PartialEq for Frac {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Frac {}

impl PartialOrd for Frac {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Frac {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.num * other.den).cmp(&(other.num * self.den))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PieceIntersection {
    None,
    /// Transversal crossing interior to both pieces, at parameter `t` along
    /// the first and `s` along the second.
    Proper {
        t: Frac,
        s: Frac,
    },
    /// The pieces meet in exactly one point which is an endpoint of at least
    /// one of them.
    Touch(IPoint),
    /// Collinear with a shared portion of positive length.
    Overlap,
}

/// Classifies the intersection of the closed segments `ab` and `cd`.
pub fn intersect_pieces(a: IPoint, b: IPoint, c: IPoint, d: IPoint) -> PieceIntersection {
    if a.x.max(b.x) < c.x.min(d.x)
        || c.x.max(d.x) < a.x.min(b.x)
        || a.y.max(b.y) < c.y.min(d.y)
        || c.y.max(d.y) < a.y.min(b.y)
    {
        return PieceIntersection::None;
    }
    let o1 = orient(a, b, c);
    let o2 = orient(a, b, d);
    let o3 = orient(c, d, a);
    let o4 = orient(c, d, b);

    if o1 == 0 && o2 == 0 {
        // Collinear: project onto the dominant axis of ab.
        let dir = b.sub(a);
        let key = |p: IPoint| dot(p.sub(a), dir);
        let (lo1, hi1) = (0, dot(dir, dir));
        let (mut lo2, mut hi2) = (key(c), key(d));
        if lo2 > hi2 {
            std::mem::swap(&mut lo2, &mut hi2);
        }
        let lo = lo1.max(lo2);
        let hi = hi1.min(hi2);
        return match lo.cmp(&hi) {
            Ordering::Greater => PieceIntersection::None,
            Ordering::Less => PieceIntersection::Overlap,
            Ordering::Equal => {
                let p = [a, b, c, d]
                    .into_iter()
                    .find(|&p| key(p) == lo && on_segment(p, a, b) && on_segment(p, c, d))
                    .expect("touching collinear pieces share an endpoint");
                PieceIntersection::Touch(p)
            }
        };
    }

    if o1 * o2 < 0 && o3 * o4 < 0 {
        let den = cross(b.sub(a), d.sub(c));
        let t = Frac::new(cross(c.sub(a), d.sub(c)), den);
        let s = Frac::new(cross(c.sub(a), b.sub(a)), den);
        return PieceIntersection::Proper { t, s };
    }

    for (p, u, v) in [(c, a, b), (d, a, b), (a, c, d), (b, c, d)] {
        if on_segment(p, u, v) {
            return PieceIntersection::Touch(p);
        }
    }
    PieceIntersection::None
}

/// Compares direction vectors by counterclockwise angle from the positive x axis.
pub fn angle_cmp(u: (i64, i64), v: (i64, i64)) -> Ordering {
    let half = |w: (i64, i64)| if w.1 > 0 || (w.1 == 0 && w.0 > 0) { 0 } else { 1 };
    half(u).cmp(&half(v)).then_with(|| {
        let c = cross((i128::from(u.0), i128::from(u.1)), (i128::from(v.0), i128::from(v.1)));
        0.cmp(&c)
    })
}

/// Twice the signed area of a closed polygon (positive when counterclockwise).
pub fn signed_area2(polygon: &[IPoint]) -> i128 {
    let n = polygon.len();
    (0..n)
        .map(|i| {
            let p = polygon[i];
            let q = polygon[(i + 1) % n];
            i128::from(p.x) * i128::from(q.y) - i128::from(q.x) * i128::from(p.y)
        })
        .sum()
}

/// Winding number of a closed polygon around `p`; `p` must not lie on it.
pub fn winding_number(polygon: &[IPoint], p: IPoint) -> i64 {
    let n = polygon.len();
    let mut wn = 0;
    for i in 0..n {
        let a = polygon[i];
        let b = polygon[(i + 1) % n];
        if a.y <= p.y {
            if b.y > p.y && orient(a, b, p) > 0 {
                wn += 1;
            }
        } else if b.y <= p.y && orient(a, b, p) < 0 {
            wn -= 1;
        }
    }
    wn
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(x: i64, y: i64) -> IPoint {
        IPoint::new(x, y)
    }

    #[test]
    fn proper_crossing_of_square_diagonals() {
        match intersect_pieces(p(0, 0), p(4, 4), p(0, 4), p(4, 0)) {
            PieceIntersection::Proper { t, s } => {
                assert_eq!(t, Frac::new(1, 2));
                assert_eq!(s, Frac::new(1, 2));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn touches_and_overlaps() {
        assert_eq!(
            intersect_pieces(p(0, 0), p(4, 0), p(2, 0), p(2, 5)),
            PieceIntersection::Touch(p(2, 0))
        );
        assert_eq!(
            intersect_pieces(p(0, 0), p(4, 0), p(4, 0), p(9, 3)),
            PieceIntersection::Touch(p(4, 0))
        );
        assert_eq!(
            intersect_pieces(p(0, 0), p(4, 0), p(3, 0), p(9, 0)),
            PieceIntersection::Overlap
        );
        assert_eq!(
            intersect_pieces(p(0, 0), p(4, 0), p(4, 0), p(9, 0)),
            PieceIntersection::Touch(p(4, 0))
        );
        assert_eq!(
            intersect_pieces(p(0, 0), p(4, 0), p(5, 0), p(9, 0)),
            PieceIntersection::None
        );
        assert_eq!(
            intersect_pieces(p(0, 0), p(4, 0), p(0, 1), p(4, 2)),
            PieceIntersection::None
        );
    }

    #[test]
    fn angle_order_is_counterclockwise() {
        let mut dirs = vec![(0, -1), (-1, 0), (1, 1), (1, 0), (0, 1), (-1, -1)];
        dirs.sort_by(|&a, &b| angle_cmp(a, b));
        assert_eq!(dirs, vec![(1, 0), (1, 1), (0, 1), (-1, 0), (-1, -1), (0, -1)]);
    }

    #[test]
    fn winding_of_ccw_square() {
        let sq = [p(0, 0), p(4, 0), p(4, 4), p(0, 4)];
        assert_eq!(winding_number(&sq, p(2, 2)), 1);
        assert_eq!(winding_number(&sq, p(9, 2)), 0);
        let rev: Vec<_> = sq.iter().rev().copied().collect();
        assert_eq!(winding_number(&rev, p(2, 2)), -1);
        assert_eq!(signed_area2(&sq), 32);
    }
}
