//! Exact piecewise-linear fronts in the `(y, z)` plane.
//!
//! A front lifts to a Legendrian curve for `ker(dz + x dy)` by `x = -dz/dy` on each
//! edge; at corners and cusps the lift moves parallel to `x`, which is tangent to the
//! contact planes. Crossing resolutions are never stored: the strand with the larger
//! `x` (smaller slope) is in front for a viewer on the positive `x` axis.

mod check;
pub mod geometry;
mod invariants;
pub mod rational;

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use check::{
    analyze, Analysis, check_embedded, check_embedded_diagram, check_generic, crossings, Crossing, SegRef,
    ValidationReport, Violation, ViolationKind,
};
pub use invariants::{
    closure_integral, lift, linking_number, rotation_number, stabilize, thurston_bennequin,
    writhe, LiftedPoint, Stabilization,
};
pub use rational::{q, qr, Q};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FrontError {
    #[error("vertical edge {edge} in strand at {at}")]
    VerticalEdge { edge: usize, at: String },
    #[error("odd number of cusps ({0}) on a closed front")]
    OddCuspCount(usize),
    #[error("strand is not closed")]
    NotClosed,
    #[error("front is not generic: {0}")]
    NotGeneric(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FrontPoint {
    #[serde(with = "rational")]
    pub y: Q,
    #[serde(with = "rational")]
    pub z: Q,
}

impl FrontPoint {
    pub fn new(y: Q, z: Q) -> Self {
        FrontPoint { y, z }
    }

    pub fn int(y: i64, z: i64) -> Self {
        FrontPoint { y: q(y), z: q(z) }
    }

    pub fn shifted(&self, dz: &Q) -> Self {
        FrontPoint { y: self.y.clone(), z: &self.z + dz }
    }
}

impl std::fmt::Display for FrontPoint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {})", rational::display(&self.y), rational::display(&self.z))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrontStrand {
    pub points: Vec<FrontPoint>,
    pub cusps: BTreeSet<usize>,
    pub closed: bool,
}

impl FrontStrand {
    pub fn open(points: Vec<FrontPoint>) -> Self {
        let mut s = FrontStrand { points, cusps: BTreeSet::new(), closed: false };
        s.mark_cusps();
        s
    }

    pub fn closed(points: Vec<FrontPoint>) -> Self {
        let mut s = FrontStrand { points, cusps: BTreeSet::new(), closed: true };
        s.mark_cusps();
        s
    }

    pub fn from_ints(pts: &[(i64, i64)], closed: bool) -> Self {
        let pts = pts.iter().map(|&(y, z)| FrontPoint::int(y, z)).collect();
        if closed {
            Self::closed(pts)
        } else {
            Self::open(pts)
        }
    }

    pub fn edge_count(&self) -> usize {
        match (self.closed, self.points.len()) {
            (_, 0) | (_, 1) => 0,
            (true, n) => n,
            (false, n) => n - 1,
        }
    }

    pub fn edge(&self, i: usize) -> (&FrontPoint, &FrontPoint) {
        let n = self.points.len();
        (&self.points[i], &self.points[(i + 1) % n])
    }

    pub fn slope(&self, i: usize) -> Option<Q> {
        let (a, b) = self.edge(i);
        let dy = &b.y - &a.y;
        if dy == q(0) {
            None
        } else {
            Some((&b.z - &a.z) / dy)
        }
    }

    /// +1, -1 or 0 according to the y-direction of edge `i`.
    pub fn dy_sign(&self, i: usize) -> i8 {
        let (a, b) = self.edge(i);
        match b.y.cmp(&a.y) {
            std::cmp::Ordering::Greater => 1,
            std::cmp::Ordering::Less => -1,
            std::cmp::Ordering::Equal => 0,
        }
    }

    /// Indices whose incident edges exist on both sides.
    pub fn interior_vertices(&self) -> Vec<usize> {
        let n = self.points.len();
        if self.closed {
            if n < 2 {
                return vec![];
            }
            (0..n).collect()
        } else if n < 3 {
            vec![]
        } else {
            (1..n - 1).collect()
        }
    }

    /// Edges entering and leaving interior vertex `i`.
    pub fn edges_at(&self, i: usize) -> (usize, usize) {
        let n = self.points.len();
        if self.closed {
            ((i + n - 1) % n, i)
        } else {
            (i - 1, i)
        }
    }

    /// Recompute the cusp set from y-reversals.
    pub fn mark_cusps(&mut self) {
        let marks = self
            .interior_vertices()
            .into_iter()
            .filter(|&i| {
                let (a, b) = self.edges_at(i);
                let (sa, sb) = (self.dy_sign(a), self.dy_sign(b));
                sa != 0 && sb != 0 && sa != sb
            })
            .collect();
        self.cusps = marks;
    }

    pub fn translated(&self, dz: &Q) -> Self {
        FrontStrand {
            points: self.points.iter().map(|p| p.shifted(dz)).collect(),
            cusps: self.cusps.clone(),
            closed: self.closed,
        }
    }

    pub fn reversed(&self) -> Self {
        let n = self.points.len();
        let points: Vec<FrontPoint> = self.points.iter().rev().cloned().collect();
        let cusps = self.cusps.iter().map(|&i| n - 1 - i).collect();
        FrontStrand { points, cusps, closed: self.closed }
    }

    pub fn reflected_y(&self) -> Self {
        FrontStrand {
            points: self.points.iter().map(|p| FrontPoint::new(-&p.y, p.z.clone())).collect(),
            cusps: self.cusps.clone(),
            closed: self.closed,
        }
    }

    pub fn start(&self) -> &FrontPoint {
        &self.points[0]
    }

    pub fn end(&self) -> &FrontPoint {
        &self.points[self.points.len() - 1]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum End {
    Start,
    End,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct StrandEnd {
    pub strand: usize,
    pub end: End,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiagramVertex {
    pub position: FrontPoint,
    pub ends: Vec<StrandEnd>,
}

/// Strands plus the graph vertices where open strand ends meet.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct FrontDiagram {
    pub strands: Vec<FrontStrand>,
    #[serde(default)]
    pub vertices: Vec<DiagramVertex>,
}

impl FrontDiagram {
    pub fn knot(strand: FrontStrand) -> Self {
        FrontDiagram { strands: vec![strand], vertices: vec![] }
    }

    pub fn from_strands(strands: Vec<FrontStrand>) -> Self {
        FrontDiagram { strands, vertices: vec![] }
    }

    /// Slope of the edge of `end` adjacent to its endpoint.
    pub fn end_slope(&self, end: StrandEnd) -> Option<Q> {
        let s = &self.strands[end.strand];
        match end.end {
            End::Start => s.slope(0),
            End::End => s.slope(s.edge_count().checked_sub(1)?),
        }
    }

    pub fn end_point(&self, end: StrandEnd) -> &FrontPoint {
        let s = &self.strands[end.strand];
        match end.end {
            End::Start => s.start(),
            End::End => s.end(),
        }
    }

    pub fn translated(&self, dz: &Q) -> Self {
        FrontDiagram {
            strands: self.strands.iter().map(|s| s.translated(dz)).collect(),
            vertices: self
                .vertices
                .iter()
                .map(|v| DiagramVertex { position: v.position.shifted(dz), ends: v.ends.clone() })
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cusp_marking_follows_reversals() {
        let s = FrontStrand::from_ints(&[(0, 0), (1, 1), (2, 0), (1, -1)], true);
        assert_eq!(s.cusps, [0, 2].into_iter().collect());
        let o = FrontStrand::from_ints(&[(0, 0), (2, 1), (1, 3), (3, 3)], false);
        assert_eq!(o.cusps, [1, 2].into_iter().collect());
    }

    #[test]
    fn json_round_trip_is_byte_stable() {
        let mut d = FrontDiagram::knot(FrontStrand::from_ints(&[(0, 0), (1, 1), (2, 0), (1, -1)], true));
        d.strands[0].points[1].z = qr(3, 2);
        let a = d.to_json();
        let back: FrontDiagram = serde_json::from_str(&a).unwrap();
        assert_eq!(back, d);
        assert_eq!(back.to_json(), a);
    }

    #[test]
    fn reversal_maps_cusps() {
        let s = FrontStrand::from_ints(&[(0, 0), (2, 1), (1, 3), (3, 3)], false);
        let r = s.reversed();
        assert_eq!(r.cusps, [1, 2].into_iter().collect());
        assert_eq!(r.reversed(), s);
    }
}
