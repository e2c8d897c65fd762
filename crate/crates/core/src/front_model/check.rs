//! Genericity and embeddedness validation.

use std::collections::HashMap;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::geometry::{classify, crossing_point, scale_points, sweep_pairs, Inter, LSeg, LatticeInt};
use super::{End, FrontDiagram, FrontPoint, FrontStrand, Q, StrandEnd};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SegRef {
    pub strand: usize,
    pub edge: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Crossing {
    pub point: FrontPoint,
    /// Smaller slope, hence larger `x`.
    pub over: SegRef,
    pub under: SegRef,
    /// +1 when both strands run in the same y-direction.
    pub sign: i8,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ViolationKind {
    TooFewPoints,
    VerticalEdge,
    CuspMarkerMismatch,
    DegenerateCusp,
    TangentialCrossing,
    SingularTouch,
    TriplePoint,
    VertexTangency,
    BadVertexEnd,
}

impl ViolationKind {
    pub fn label(self) -> &'static str {
        match self {
            ViolationKind::TooFewPoints => "too few points",
            ViolationKind::VerticalEdge => "vertical edge",
            ViolationKind::CuspMarkerMismatch => "cusp marker mismatch",
            ViolationKind::DegenerateCusp => "degenerate cusp",
            ViolationKind::TangentialCrossing => "tangential crossing",
            ViolationKind::SingularTouch => "crossing at cusp or vertex",
            ViolationKind::TriplePoint => "triple point",
            ViolationKind::VertexTangency => "coincident tangency at vertex",
            ViolationKind::BadVertexEnd => "bad vertex end",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub kind: ViolationKind,
    pub at: FrontPoint,
    pub detail: String,
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} at {}: {}", self.kind.label(), self.at, self.detail)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn has(&self, kind: ViolationKind) -> bool {
        self.violations.iter().any(|v| v.kind == kind)
    }
}

/// Everything the pairwise scan finds; shared by the genericity check, the
/// embeddedness check and the invariant engine.
#[derive(Debug, Clone, Default)]
pub struct Analysis {
    pub violations: Vec<Violation>,
    pub crossings: Vec<Crossing>,
    /// Single common points that are polyline vertices of at least one segment,
    /// excluding the shared point of consecutive edges.
    pub touches: Vec<(SegRef, SegRef, FrontPoint)>,
    pub overlaps: Vec<(SegRef, SegRef, FrontPoint)>,
    pub has_vertical: bool,
}

fn edge_list(s: &FrontStrand) -> Vec<(usize, usize)> {
    let n = s.points.len();
    (0..s.edge_count()).map(|e| (e, (e + 1) % n)).collect()
}

fn shared_points(s: &FrontStrand, e1: usize, e2: usize) -> Vec<usize> {
    let (e1, e2) = (e1.min(e2), e1.max(e2));
    let m = s.edge_count();
    let mut out = vec![];
    if e2 == e1 + 1 {
        out.push(e2);
    }
    if s.closed && e1 == 0 && e2 + 1 == m && m > 1 {
        out.push(0);
    }
    out
}

pub fn analyze(d: &FrontDiagram) -> Analysis {
    let refs: Vec<&[FrontPoint]> = d.strands.iter().map(|s| s.points.as_slice()).collect();
    let sc = scale_points(&refs);
    if sc.small {
        let coords: Vec<Vec<[i128; 2]>> = sc
            .coords
            .iter()
            .map(|v| v.iter().map(|p| [i128::from_big(&p[0]), i128::from_big(&p[1])]).collect())
            .collect();
        analyze_impl(d, coords, &sc.scale)
    } else {
        analyze_impl(d, sc.coords, &sc.scale)
    }
}

fn analyze_impl<T: LatticeInt>(d: &FrontDiagram, coords: Vec<Vec<[T; 2]>>, scale: &BigInt) -> Analysis {
    let mut out = Analysis::default();
    let unl = |p: &[T; 2]| FrontPoint::new(Q::new(p[0].to_big(), scale.clone()), Q::new(p[1].to_big(), scale.clone()));
    let mut segs: Vec<LSeg<T>> = vec![];
    let mut seg_index: HashMap<SegRef, usize> = HashMap::new();
    let mut slope_of: HashMap<SegRef, Q> = HashMap::new();

    for (si, s) in d.strands.iter().enumerate() {
        if s.points.len() < 2 {
            out.violations.push(Violation {
                kind: ViolationKind::TooFewPoints,
                at: s.points.first().cloned().unwrap_or_else(|| FrontPoint::int(0, 0)),
                detail: format!("strand {si} has {} points", s.points.len()),
            });
            continue;
        }
        for (e, (i, j)) in edge_list(s).into_iter().enumerate() {
            let a = coords[si][i].clone();
            let b = coords[si][j].clone();
            let r = SegRef { strand: si, edge: e };
            if a[0] == b[0] {
                out.has_vertical = true;
                out.violations.push(Violation {
                    kind: ViolationKind::VerticalEdge,
                    at: s.points[i].clone(),
                    detail: format!("strand {si} edge {e}"),
                });
                continue;
            }
            let dy = b[0].to_big() - a[0].to_big();
            let dz = b[1].to_big() - a[1].to_big();
            slope_of.insert(r, Q::new(dz, dy));
            seg_index.insert(r, segs.len());
            segs.push(LSeg { a, b, strand: si, edge: e });
        }
        // cusp markers against y-reversals
        for &c in &s.cusps {
            let valid = s.interior_vertices().contains(&c);
            if !valid {
                out.violations.push(Violation {
                    kind: ViolationKind::CuspMarkerMismatch,
                    at: s.points.get(c).cloned().unwrap_or_else(|| s.points[0].clone()),
                    detail: format!("strand {si}: cusp marker {c} is not an interior vertex"),
                });
            }
        }
        for i in s.interior_vertices() {
            let (ea, eb) = s.edges_at(i);
            let (da, db) = (s.dy_sign(ea), s.dy_sign(eb));
            if da == 0 || db == 0 {
                continue;
            }
            let reversal = da != db;
            if reversal != s.cusps.contains(&i) {
                out.violations.push(Violation {
                    kind: ViolationKind::CuspMarkerMismatch,
                    at: s.points[i].clone(),
                    detail: format!(
                        "strand {si} vertex {i}: {}",
                        if reversal { "y-reversal without cusp marker" } else { "cusp marker without y-reversal" }
                    ),
                });
            }
            if reversal && s.slope(ea) == s.slope(eb) {
                out.violations.push(Violation {
                    kind: ViolationKind::DegenerateCusp,
                    at: s.points[i].clone(),
                    detail: format!("strand {si} vertex {i}: equal slopes on both branches"),
                });
            }
        }
    }

    // strand ends attached to graph vertices
    let mut vertex_of_end: HashMap<StrandEnd, usize> = HashMap::new();
    for (vi, v) in d.vertices.iter().enumerate() {
        let mut slopes: Vec<(Q, StrandEnd)> = vec![];
        for &end in &v.ends {
            let ok = end.strand < d.strands.len()
                && !d.strands[end.strand].closed
                && d.strands[end.strand].points.len() >= 2
                && d.end_point(end) == &v.position;
            if !ok {
                out.violations.push(Violation {
                    kind: ViolationKind::BadVertexEnd,
                    at: v.position.clone(),
                    detail: format!("vertex {vi}: end {:?} does not lie at the vertex", end),
                });
                continue;
            }
            if vertex_of_end.insert(end, vi).is_some() {
                out.violations.push(Violation {
                    kind: ViolationKind::BadVertexEnd,
                    at: v.position.clone(),
                    detail: format!("end {:?} attached to two vertices", end),
                });
            }
            if let Some(sl) = d.end_slope(end) {
                slopes.push((sl, end));
            }
        }
        for (i, (a, ea)) in slopes.iter().enumerate() {
            for (b, eb) in &slopes[i + 1..] {
                if a == b {
                    out.violations.push(Violation {
                        kind: ViolationKind::VertexTangency,
                        at: v.position.clone(),
                        detail: format!("vertex {vi}: ends {:?} and {:?} share slope {}", ea, eb, super::rational::display(a)),
                    });
                }
            }
        }
    }

    let end_at = |r: SegRef, p: &[T; 2], seg: &LSeg<T>| -> Option<StrandEnd> {
        let s = &d.strands[r.strand];
        if s.closed {
            return None;
        }
        let last = s.edge_count() - 1;
        if r.edge == 0 && &seg.a == p {
            return Some(StrandEnd { strand: r.strand, end: End::Start });
        }
        if r.edge == last && &seg.b == p {
            return Some(StrandEnd { strand: r.strand, end: End::End });
        }
        None
    };

    let mut crossing_points: HashMap<(Q, Q), Vec<usize>> = HashMap::new();
    let mut pairs: Vec<(usize, usize)> = vec![];
    sweep_pairs(&segs, |i, j| pairs.push((i, j)));
    for (i, j) in pairs {
        let (s, t) = (&segs[i], &segs[j]);
        let (rs, rt) = (SegRef { strand: s.strand, edge: s.edge }, SegRef { strand: t.strand, edge: t.edge });
        let (rs, rt, s, t) = if rs <= rt { (rs, rt, s, t) } else { (rt, rs, t, s) };
        let shared = if rs.strand == rt.strand { shared_points(&d.strands[rs.strand], rs.edge, rt.edge) } else { vec![] };
        match classify(s, t) {
            Inter::None => {}
            Inter::Proper => {
                let (y, z) = crossing_point(s, t);
                let point = FrontPoint::new(super::geometry::unscale_q(scale, &y), super::geometry::unscale_q(scale, &z));
                let (ss, st) = (&slope_of[&rs], &slope_of[&rt]);
                let (over, under) = if ss < st { (rs, rt) } else { (rt, rs) };
                let dys = (s.b[0].clone() - s.a[0].clone()).signum();
                let dyt = (t.b[0].clone() - t.a[0].clone()).signum();
                let sign = if dys == dyt { 1 } else { -1 };
                crossing_points.entry((y, z)).or_default().push(out.crossings.len());
                out.crossings.push(Crossing { point, over, under, sign });
            }
            Inter::Touch(p) => {
                let pt = unl(&p);
                let is_shared = shared.iter().any(|&k| coords[rs.strand][k] == p);
                if is_shared {
                    continue;
                }
                out.touches.push((rs, rt, pt.clone()));
                let at_vertex = match (end_at(rs, &p, s), end_at(rt, &p, t)) {
                    (Some(a), Some(b)) => match (vertex_of_end.get(&a), vertex_of_end.get(&b)) {
                        (Some(x), Some(y)) => x == y,
                        _ => false,
                    },
                    _ => false,
                };
                if !at_vertex {
                    out.violations.push(Violation {
                        kind: ViolationKind::SingularTouch,
                        at: pt,
                        detail: format!("strand {} edge {} meets strand {} edge {} at a polyline vertex", rs.strand, rs.edge, rt.strand, rt.edge),
                    });
                }
            }
            Inter::Overlap(p) => {
                let pt = unl(&p);
                out.overlaps.push((rs, rt, pt.clone()));
                let degenerate_cusp = !shared.is_empty();
                if !degenerate_cusp {
                    out.violations.push(Violation {
                        kind: ViolationKind::TangentialCrossing,
                        at: pt,
                        detail: format!("strand {} edge {} and strand {} edge {} overlap with equal slopes", rs.strand, rs.edge, rt.strand, rt.edge),
                    });
                }
            }
        }
    }
    for idxs in crossing_points.values() {
        if idxs.len() > 1 {
            out.violations.push(Violation {
                kind: ViolationKind::TriplePoint,
                at: out.crossings[idxs[0]].point.clone(),
                detail: format!("{} crossings share one point", idxs.len()),
            });
        }
    }
    out.violations.sort_by(|a, b| a.at.cmp(&b.at).then(a.detail.cmp(&b.detail)));
    out.crossings.sort_by(|a, b| a.point.cmp(&b.point).then(a.over.cmp(&b.over)));
    out.touches.sort();
    out.overlaps.sort();
    out
}

pub fn check_generic(d: &FrontDiagram) -> ValidationReport {
    ValidationReport { violations: analyze(d).violations }
}

pub fn crossings(d: &FrontDiagram) -> Vec<Crossing> {
    analyze(d).crossings
}

/// Closed interval of slopes the lift passes through at `p` on edge `r`.
fn slope_range(d: &FrontDiagram, r: SegRef, p: &FrontPoint) -> (Q, Q) {
    let s = &d.strands[r.strand];
    let n = s.points.len();
    let (a, b) = (r.edge, (r.edge + 1) % n);
    let own = s.slope(r.edge).expect("non-vertical");
    let vertex = if &s.points[a] == p {
        Some(a)
    } else if &s.points[b] == p {
        Some(b)
    } else {
        None
    };
    match vertex {
        Some(k) if s.interior_vertices().contains(&k) => {
            let (ea, eb) = s.edges_at(k);
            let (x, y) = (s.slope(ea).expect("non-vertical"), s.slope(eb).expect("non-vertical"));
            if x <= y {
                (x, y)
            } else {
                (y, x)
            }
        }
        _ => (own.clone(), own),
    }
}

/// True iff the Legendrian lift of every strand is embedded and the lifts are
/// pairwise disjoint. Graph vertices are ignored.
pub fn check_embedded_diagram(d: &FrontDiagram) -> bool {
    let a = analyze(d);
    if a.has_vertical || !a.overlaps.is_empty() {
        return false;
    }
    for s in &d.strands {
        if s.points.len() < 2 {
            return false;
        }
    }
    for (rs, rt, p) in &a.touches {
        let (lo1, hi1) = slope_range(d, *rs, p);
        let (lo2, hi2) = slope_range(d, *rt, p);
        if lo1 <= hi2 && lo2 <= hi1 {
            return false;
        }
    }
    true
}

pub fn check_embedded(knot: &FrontStrand) -> bool {
    check_embedded_diagram(&FrontDiagram::knot(knot.clone()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::front_model::{qr, DiagramVertex, FrontStrand};

    fn unknot() -> FrontStrand {
        FrontStrand::from_ints(&[(0, 0), (1, 1), (2, 0), (1, -1)], true)
    }

    #[test]
    fn unknot_is_clean() {
        let d = FrontDiagram::knot(unknot());
        assert!(check_generic(&d).is_clean());
        assert!(check_embedded(&unknot()));
    }

    #[test]
    fn equal_slope_overlap_is_tangential() {
        let a = FrontStrand::from_ints(&[(0, 0), (4, 4)], false);
        let b = FrontStrand::from_ints(&[(2, 2), (6, 6)], false);
        let d = FrontDiagram::from_strands(vec![a, b]);
        let r = check_generic(&d);
        assert!(r.has(ViolationKind::TangentialCrossing));
        assert!(r.violations.iter().any(|v| v.to_string().contains("tangential crossing")));
        assert!(!check_embedded_diagram(&d));
    }

    #[test]
    fn vertical_edge_reported() {
        let a = FrontStrand::from_ints(&[(0, 0), (0, 4), (1, 5)], false);
        let r = check_generic(&FrontDiagram::knot(a));
        assert!(r.has(ViolationKind::VerticalEdge));
    }

    #[test]
    fn missing_cusp_marker_reported() {
        let mut s = unknot();
        s.cusps.clear();
        assert!(check_generic(&FrontDiagram::knot(s)).has(ViolationKind::CuspMarkerMismatch));
    }

    #[test]
    fn triple_point_reported() {
        let a = FrontStrand::from_ints(&[(-2, 0), (2, 0)], false);
        let b = FrontStrand::from_ints(&[(-2, -2), (2, 2)], false);
        let c = FrontStrand::from_ints(&[(-2, 2), (2, -2)], false);
        let r = check_generic(&FrontDiagram::from_strands(vec![a, b, c]));
        assert!(r.has(ViolationKind::TriplePoint));
        let a2 = FrontStrand::from_ints(&[(-2, 1), (2, 1)], false);
        let b2 = FrontStrand::from_ints(&[(-2, -2), (2, 2)], false);
        let c2 = FrontStrand::from_ints(&[(-2, 2), (2, -2)], false);
        let d = FrontDiagram::from_strands(vec![a2, b2, c2]);
        assert!(check_generic(&d).is_clean());
        assert_eq!(crossings(&d).len(), 3);
    }

    #[test]
    fn crossing_through_cusp_reported() {
        let a = FrontStrand::from_ints(&[(0, 0), (2, 1), (0, 2)], false);
        let b = FrontStrand::from_ints(&[(1, -3), (2, 1), (3, 5)], false);
        let d = FrontDiagram::from_strands(vec![a, b]);
        assert!(check_generic(&d).has(ViolationKind::SingularTouch));
    }

    #[test]
    fn crossing_resolution_from_slopes() {
        let a = FrontStrand::from_ints(&[(0, 0), (4, 4)], false);
        let b = FrontStrand::from_ints(&[(0, 4), (4, 0)], false);
        let c = crossings(&FrontDiagram::from_strands(vec![a, b]));
        assert_eq!(c.len(), 1);
        assert_eq!(c[0].over, SegRef { strand: 1, edge: 0 });
        assert_eq!(c[0].sign, 1);
        assert_eq!(c[0].point, FrontPoint::int(2, 2));
    }

    #[test]
    fn graph_vertex_touch_is_allowed_only_at_vertex() {
        let a = FrontStrand::from_ints(&[(0, 0), (2, 1)], false);
        let b = FrontStrand::from_ints(&[(0, 0), (2, -1)], false);
        let mut d = FrontDiagram::from_strands(vec![a, b]);
        assert!(check_generic(&d).has(ViolationKind::SingularTouch));
        d.vertices.push(DiagramVertex {
            position: FrontPoint::int(0, 0),
            ends: vec![StrandEnd { strand: 0, end: End::Start }, StrandEnd { strand: 1, end: End::Start }],
        });
        assert!(check_generic(&d).is_clean());
    }

    #[test]
    fn vertex_tangency_reported() {
        let a = FrontStrand::from_ints(&[(0, 0), (2, 2)], false);
        let b = FrontStrand::from_ints(&[(0, 0), (-2, -2)], false);
        let d = FrontDiagram {
            strands: vec![a, b],
            vertices: vec![DiagramVertex {
                position: FrontPoint::int(0, 0),
                ends: vec![StrandEnd { strand: 0, end: End::Start }, StrandEnd { strand: 1, end: End::Start }],
            }],
        };
        assert!(check_generic(&d).has(ViolationKind::VertexTangency));
    }

    #[test]
    fn corner_on_segment_embeddedness_depends_on_slope_interval() {
        // corner with slopes 0 and 2 at (2,0), sitting on a line of slope 1
        let corner = FrontStrand::from_ints(&[(0, 0), (2, 0), (4, 4)], false);
        let through = FrontStrand::from_ints(&[(0, -2), (4, 2)], false);
        let d = FrontDiagram::from_strands(vec![corner.clone(), through]);
        assert!(!check_embedded_diagram(&d));
        let steep = FrontStrand::new_translated_line();
        let d2 = FrontDiagram::from_strands(vec![corner, steep]);
        assert!(check_embedded_diagram(&d2));
        assert!(!check_generic(&d2).is_clean());
    }

    impl FrontStrand {
        fn new_translated_line() -> FrontStrand {
            // slope 3 through (2,0)
            FrontStrand::open(vec![
                FrontPoint::new(qr(1, 1), qr(-3, 1)),
                FrontPoint::new(qr(3, 1), qr(3, 1)),
            ])
        }
    }
}
