//! Per-graph geometry shared by every realization: collars, band cores, gaps and
//! the minimal vertical feature size.

use std::collections::BTreeMap;

use num_traits::{Signed, Zero};

use super::RealizeError;
use crate::curve_model::{Segment, SegmentList};
use crate::front_model::{crossings, q, FrontPoint, FrontStrand, Q};
use crate::legendrian_graph::{edge_core_segments, point_at_distance, EdgeEnd, HandleExtent, LegendrianGraphFront};
use crate::ribbon::AbstractRibbon;

/// The removed open piece of a band core, in core orientation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Gap {
    /// Index of the core segment containing the gap.
    pub segment: usize,
    pub start: FrontPoint,
    pub end: FrontPoint,
    pub midline: Q,
    /// Half-width of the itinerary window around the core at the midline.
    pub window: Option<Q>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BandGeometry {
    pub edge: usize,
    pub core: FrontStrand,
    pub gap: Gap,
    /// Upper bound for connector half-lengths at the source and target collars.
    pub lambda_cap: [Q; 2],
}

#[derive(Debug, Clone)]
pub struct Layout {
    pub graph: LegendrianGraphFront,
    pub ribbon: AbstractRibbon,
    pub radii: Vec<Q>,
    pub bands: Vec<BandGeometry>,
    pub g_min: Q,
}

pub(crate) fn z_at(a: &FrontPoint, b: &FrontPoint, y: &Q) -> Q {
    &a.z + (y - &a.y) * (&b.z - &a.z) / (&b.y - &a.y)
}

pub(crate) fn lerp(a: &FrontPoint, b: &FrontPoint, t: &Q) -> FrontPoint {
    FrontPoint::new(&a.y + t * (&b.y - &a.y), &a.z + t * (&b.z - &a.z))
}

fn min_opt(acc: &mut Option<Q>, v: Q) {
    match acc {
        Some(a) if *a <= v => {}
        _ => *acc = Some(v),
    }
}

impl Layout {
    pub fn new(graph: &LegendrianGraphFront, ribbon: &AbstractRibbon) -> Result<Self, RealizeError> {
        let radii = graph.collar_radii();
        let xs = crossings(&graph.diagram);
        let mut bands = vec![];
        for (ei, e) in graph.edges.iter().enumerate() {
            let ext = HandleExtent { source: radii[e.source].clone(), target: radii[e.target].clone() };
            let core = edge_core_segments(graph, ei, &ext)?;
            let mut best: Option<(Q, Q, usize, Q, Q)> = None;
            for j in 0..core.edge_count() {
                let (a, b) = core.edge(j);
                let (lo, hi) = if a.y < b.y { (a.y.clone(), b.y.clone()) } else { (b.y.clone(), a.y.clone()) };
                let mut cuts = vec![lo.clone(), hi.clone()];
                for c in &xs {
                    for r in [c.over, c.under] {
                        if r.strand == e.strand && r.edge == j && c.point.y > lo && c.point.y < hi {
                            cuts.push(c.point.y.clone());
                        }
                    }
                }
                cuts.sort();
                cuts.dedup();
                for w in cuts.windows(2) {
                    let len = &w[1] - &w[0];
                    let better = match &best {
                        None => true,
                        Some((bl, by, ..)) => len > *bl || (len == *bl && w[0] < *by),
                    };
                    if better && len.is_positive() {
                        best = Some((len, w[0].clone(), j, w[0].clone(), w[1].clone()));
                    }
                }
            }
            let (len, _, j, lo, hi) = best.ok_or(RealizeError::GapNotFound { handle: ei })?;
            let (a, b) = core.edge(j);
            let (y0, y1) = (&lo + &len / q(4), &hi - &len / q(4));
            let (ys, ye) = if a.y < b.y { (y0, y1) } else { (y1, y0) };
            let start = FrontPoint::new(ys.clone(), z_at(a, b, &ys));
            let end = FrontPoint::new(ye.clone(), z_at(a, b, &ye));
            let midline = (&ys + &ye) / q(2);
            let zc = z_at(a, b, &midline);
            let mut window: Option<Q> = None;
            for (si, s) in graph.diagram.strands.iter().enumerate() {
                for k in 0..s.edge_count() {
                    if si == e.strand && k == j {
                        continue;
                    }
                    let (p, r) = s.edge(k);
                    if p.y == r.y {
                        continue;
                    }
                    let (plo, phi) = if p.y < r.y { (&p.y, &r.y) } else { (&r.y, &p.y) };
                    if &midline >= plo && &midline <= phi {
                        min_opt(&mut window, (z_at(p, r, &midline) - &zc).abs() / q(2));
                    }
                }
            }
            let m = core.edge_count();
            let mut caps = [&radii[e.source] / q(2), &radii[e.target] / q(2)];
            if j == 0 {
                let d = (&start.y - &core.points[0].y).abs() / q(2);
                if d < caps[0] {
                    caps[0] = d;
                }
            }
            if j + 1 == m {
                let d = (&core.end().y - &end.y).abs() / q(2);
                if d < caps[1] {
                    caps[1] = d;
                }
            }
            bands.push(BandGeometry {
                edge: ei,
                core,
                gap: Gap { segment: j, start, end, midline, window },
                lambda_cap: caps,
            });
        }
        let g_min = feature_size(graph, &radii, &bands);
        Ok(Layout { graph: graph.clone(), ribbon: ribbon.clone(), radii, bands, g_min })
    }

    /// Point of the edge's end segment at y-distance `t` from its vertex.
    pub fn along(&self, edge: usize, end: EdgeEnd, t: &Q) -> FrontPoint {
        point_at_distance(self.graph.edge_front(edge), end, t)
    }

    pub fn radius(&self, edge: usize, end: EdgeEnd) -> &Q {
        &self.radii[self.graph.edges[edge].vertex(end)]
    }

    /// Largest number of strands through a handle or of chords in a disk.
    pub fn max_multiplicity(&self, segments: &SegmentList) -> usize {
        let mut per: BTreeMap<(u8, usize), usize> = BTreeMap::new();
        for s in &segments.segments {
            let key = match s {
                Segment::Pass { handle, .. } => (0, *handle),
                Segment::Chord { vertex, .. } => (1, *vertex),
            };
            *per.entry(key).or_default() += 1;
        }
        per.values().copied().max().unwrap_or(1)
    }
}

/// Smallest vertical distance that a displacement of the skeleton must stay below
/// so that no new incidences between skeleton pieces appear.
fn feature_size(graph: &LegendrianGraphFront, radii: &[Q], bands: &[BandGeometry]) -> Q {
    let mut best: Option<Q> = None;
    let segs: Vec<(&FrontPoint, &FrontPoint)> = graph
        .diagram
        .strands
        .iter()
        .flat_map(|s| (0..s.edge_count()).map(move |k| s.edge(k)))
        .filter(|(a, b)| a.y != b.y)
        .collect();
    for (i, (a, b)) in segs.iter().enumerate() {
        for (c, d) in &segs[i + 1..] {
            let lo = std::cmp::max(a.y.clone().min(b.y.clone()), c.y.clone().min(d.y.clone()));
            let hi = std::cmp::min(a.y.clone().max(b.y.clone()), c.y.clone().max(d.y.clone()));
            if lo >= hi {
                continue;
            }
            for y in [&lo, &hi] {
                let dz = (z_at(a, b, y) - z_at(c, d, y)).abs();
                if !dz.is_zero() {
                    min_opt(&mut best, dz);
                }
            }
        }
    }
    for (vi, v) in graph.vertices.iter().enumerate() {
        for (i, x) in v.incident_ends.iter().enumerate() {
            for y in &v.incident_ends[i + 1..] {
                let ds = (&x.slope - &y.slope).abs();
                if !ds.is_zero() {
                    min_opt(&mut best, ds * &radii[vi] / q(4));
                }
            }
        }
    }
    for s in &graph.diagram.strands {
        for &c in &s.cusps {
            let (ea, eb) = s.edges_at(c);
            let (pa, pb) = (s.edge(ea), s.edge(eb));
            let dy = std::cmp::min((&pa.1.y - &pa.0.y).abs(), (&pb.1.y - &pb.0.y).abs());
            let ds = (s.slope(ea).expect("non-vertical") - s.slope(eb).expect("non-vertical")).abs();
            min_opt(&mut best, ds * dy / q(4));
        }
    }
    for b in bands {
        if let Some(w) = &b.gap.window {
            min_opt(&mut best, w * q(2));
        }
    }
    best.unwrap_or_else(|| q(1))
}
