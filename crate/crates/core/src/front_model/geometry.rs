//! Exact segment predicates on an integer lattice.
//!
//! Coordinates are scaled by the common denominator of the whole diagram. When
//! the scaled values are small the predicates run on `i128`, otherwise on
//! `BigInt`; both share one generic implementation.

use std::fmt::Debug;
use std::hash::Hash;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive};

use super::{FrontPoint, Q};

pub trait LatticeInt: Clone + Ord + Signed + Hash + Debug {
    fn to_big(&self) -> BigInt;
    fn from_big(v: &BigInt) -> Self;
}

impl LatticeInt for i128 {
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
    fn from_big(v: &BigInt) -> Self {
        v.to_i128().expect("lattice coordinate fits in i128")
    }
}

impl LatticeInt for BigInt {
    fn to_big(&self) -> BigInt {
        self.clone()
    }
    fn from_big(v: &BigInt) -> Self {
        v.clone()
    }
}

#[derive(Debug, Clone)]
pub struct LSeg<T> {
    pub a: [T; 2],
    pub b: [T; 2],
    pub strand: usize,
    pub edge: usize,
}

impl<T: LatticeInt> LSeg<T> {
    pub fn ymin(&self) -> &T {
        std::cmp::min(&self.a[0], &self.b[0])
    }
    pub fn ymax(&self) -> &T {
        std::cmp::max(&self.a[0], &self.b[0])
    }
    pub fn is_vertical(&self) -> bool {
        self.a[0] == self.b[0]
    }
    pub fn has_endpoint(&self, p: &[T; 2]) -> bool {
        &self.a == p || &self.b == p
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Inter<T> {
    None,
    /// Interiors cross at a single point.
    Proper,
    /// A single common point that is an endpoint of at least one segment.
    Touch([T; 2]),
    /// Collinear with a common sub-segment of positive length; carries one shared point.
    Overlap([T; 2]),
}

fn sub<T: LatticeInt>(p: &[T; 2], q: &[T; 2]) -> [T; 2] {
    [p[0].clone() - q[0].clone(), p[1].clone() - q[1].clone()]
}

fn cross<T: LatticeInt>(u: &[T; 2], v: &[T; 2]) -> T {
    u[0].clone() * v[1].clone() - u[1].clone() * v[0].clone()
}

pub fn orient<T: LatticeInt>(o: &[T; 2], a: &[T; 2], b: &[T; 2]) -> i8 {
    let c = cross(&sub(a, o), &sub(b, o));
    if c.is_positive() {
        1
    } else if c.is_negative() {
        -1
    } else {
        0
    }
}

pub fn classify<T: LatticeInt>(s: &LSeg<T>, t: &LSeg<T>) -> Inter<T> {
    let d1 = orient(&s.a, &s.b, &t.a);
    let d2 = orient(&s.a, &s.b, &t.b);
    let d3 = orient(&t.a, &t.b, &s.a);
    let d4 = orient(&t.a, &t.b, &s.b);
    if d1 == 0 && d2 == 0 {
        // collinear; neither segment is vertical, so compare y-extents
        let lo = std::cmp::max(s.ymin(), t.ymin()).clone();
        let hi = std::cmp::min(s.ymax(), t.ymax()).clone();
        if lo > hi {
            return Inter::None;
        }
        let pick = |y: &T| -> [T; 2] {
            for p in [&s.a, &s.b, &t.a, &t.b] {
                if &p[0] == y {
                    return p.clone();
                }
            }
            unreachable!("overlap bound is an endpoint")
        };
        if lo == hi {
            return Inter::Touch(pick(&lo));
        }
        return Inter::Overlap(pick(&lo));
    }
    if d1 * d2 > 0 || d3 * d4 > 0 {
        return Inter::None;
    }
    if d1 != 0 && d2 != 0 && d3 != 0 && d4 != 0 {
        return Inter::Proper;
    }
    let p = if d1 == 0 {
        t.a.clone()
    } else if d2 == 0 {
        t.b.clone()
    } else if d3 == 0 {
        s.a.clone()
    } else {
        s.b.clone()
    };
    Inter::Touch(p)
}

/// Exact crossing point of two properly crossing segments, in lattice units as a
/// rational pair.
pub fn crossing_point<T: LatticeInt>(s: &LSeg<T>, t: &LSeg<T>) -> (Q, Q) {
    let big = |p: &[T; 2]| [p[0].to_big(), p[1].to_big()];
    let (sa, sb, ta, tb) = (big(&s.a), big(&s.b), big(&t.a), big(&t.b));
    let r = [&sb[0] - &sa[0], &sb[1] - &sa[1]];
    let d = [&tb[0] - &ta[0], &tb[1] - &ta[1]];
    let w = [&ta[0] - &sa[0], &ta[1] - &sa[1]];
    let den = &r[0] * &d[1] - &r[1] * &d[0];
    let num = &w[0] * &d[1] - &w[1] * &d[0];
    let u = Q::new(num, den);
    (
        Q::from_integer(sa[0].clone()) + &u * Q::from_integer(r[0].clone()),
        Q::from_integer(sa[1].clone()) + &u * Q::from_integer(r[1].clone()),
    )
}

/// Visit candidate pairs whose y-extents intersect (closed intervals).
pub fn sweep_pairs<T: LatticeInt, F: FnMut(usize, usize)>(segs: &[LSeg<T>], mut f: F) {
    let mut order: Vec<usize> = (0..segs.len()).collect();
    order.sort_by(|&i, &j| segs[i].ymin().cmp(segs[j].ymin()).then(i.cmp(&j)));
    for (pos, &i) in order.iter().enumerate() {
        let top = segs[i].ymax();
        for &j in &order[pos + 1..] {
            if segs[j].ymin() > top {
                break;
            }
            f(i, j);
        }
    }
}

/// Common denominator of every coordinate, and all coordinates scaled by it.
pub struct Scaled {
    pub scale: BigInt,
    pub coords: Vec<Vec<[BigInt; 2]>>,
    pub small: bool,
}

pub fn scale_points(strands: &[&[FrontPoint]]) -> Scaled {
    let mut l = BigInt::one();
    for pts in strands {
        for p in pts.iter() {
            l = l.lcm(p.y.denom());
            l = l.lcm(p.z.denom());
        }
    }
    let limit = BigInt::one() << 61;
    let mut small = true;
    let coords = strands
        .iter()
        .map(|pts| {
            pts.iter()
                .map(|p| {
                    let y = p.y.numer() * (&l / p.y.denom());
                    let z = p.z.numer() * (&l / p.z.denom());
                    if y.abs() > limit || z.abs() > limit {
                        small = false;
                    }
                    [y, z]
                })
                .collect()
        })
        .collect();
    Scaled { scale: l, coords, small }
}

pub fn unscale(scale: &BigInt, v: &BigInt) -> Q {
    Q::new(v.clone(), scale.clone())
}

pub fn unscale_q(scale: &BigInt, v: &Q) -> Q {
    v / Q::from_integer(scale.clone())
}

pub fn is_zero<T: LatticeInt>(v: &T) -> bool {
    v.is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seg(a: [i128; 2], b: [i128; 2]) -> LSeg<i128> {
        LSeg { a, b, strand: 0, edge: 0 }
    }

    #[test]
    fn classification_cases() {
        assert_eq!(classify(&seg([0, 0], [2, 2]), &seg([0, 2], [2, 0])), Inter::Proper);
        assert_eq!(classify(&seg([0, 0], [2, 2]), &seg([1, 1], [3, 0])), Inter::Touch([1, 1]));
        assert_eq!(classify(&seg([0, 0], [2, 2]), &seg([1, 1], [3, 3])), Inter::Overlap([1, 1]));
        assert_eq!(classify(&seg([0, 0], [2, 2]), &seg([2, 2], [3, 3])), Inter::Touch([2, 2]));
        assert_eq!(classify(&seg([0, 0], [2, 2]), &seg([0, 1], [2, 3])), Inter::None);
        assert_eq!(classify(&seg([0, 0], [2, 0]), &seg([3, 1], [4, -1])), Inter::None);
    }

    #[test]
    fn big_and_small_agree() {
        let s = seg([0, 0], [4, 2]);
        let t = seg([0, 3], [4, -1]);
        let sb = LSeg { a: [BigInt::from(0), BigInt::from(0)], b: [BigInt::from(4), BigInt::from(2)], strand: 0, edge: 0 };
        let tb = LSeg { a: [BigInt::from(0), BigInt::from(3)], b: [BigInt::from(4), BigInt::from(-1)], strand: 0, edge: 0 };
        assert_eq!(classify(&s, &t), Inter::Proper);
        assert_eq!(classify(&sb, &tb), Inter::Proper);
        assert_eq!(crossing_point(&s, &t), crossing_point(&sb, &tb));
        assert_eq!(crossing_point(&s, &t), (Q::from_integer(2.into()), Q::from_integer(1.into())));
    }
}
