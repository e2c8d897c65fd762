//! Front pieces per handle and their gluing.

use std::collections::BTreeMap;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::layout::{lerp, z_at, Layout};
use super::{pass_at, Placement, Plan, RealizeError};
use crate::curve_model::{Direction, Pass, Segment, SegmentList};
use crate::front_model::{q, rational, FrontPoint, FrontStrand, Q};
use crate::legendrian_graph::EdgeEnd;
use crate::ribbon::HalfEdge;

/// Where a piece starts or stops: an attaching arc and the prominence there.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Node {
    pub half: HalfEdge,
    #[serde(with = "rational")]
    pub prominence: Q,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PassSpec {
    pub segment: usize,
    pub direction: Direction,
    pub strand_rank: usize,
    pub p_entry: Q,
    pub gain: Q,
}

impl PassSpec {
    fn p_exit(&self) -> Q {
        &self.p_entry + &self.gain
    }

    /// Prominence at the source and target collars.
    fn ends(&self) -> (Q, Q) {
        match self.direction {
            Direction::WithCore => (self.p_entry.clone(), self.p_exit()),
            Direction::AgainstCore => (self.p_exit(), self.p_entry.clone()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PassPiece {
    pub segment: usize,
    pub handle: usize,
    /// Position in the vertical order of the handle's strands, from 0.
    pub order: usize,
    pub entry: Node,
    pub exit: Node,
    /// Displacement relative to the core on the source and target halves.
    #[serde(with = "rational::vec")]
    pub heights: Vec<Q>,
    #[serde(with = "rational")]
    pub jump: Q,
    pub points: Vec<FrontPoint>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HandleFragment {
    pub handle: usize,
    pub pieces: Vec<PassPiece>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChordSpec {
    pub segment: usize,
    pub from: HalfEdge,
    pub to: HalfEdge,
    pub p: Q,
    /// Smallest linear index of the two endpoints on the disk boundary.
    pub disk_min: usize,
    /// Connector factors at the two collars.
    pub lambda: [Q; 2],
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChordPiece {
    pub segment: usize,
    pub vertex: usize,
    pub order: usize,
    pub from: Node,
    pub to: Node,
    #[serde(with = "rational")]
    pub height: Q,
    pub points: Vec<FrontPoint>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fragments {
    pub one: Vec<PassPiece>,
    pub zero: Vec<ChordPiece>,
}

fn end_index(end: EdgeEnd) -> usize {
    match end {
        EdgeEnd::Source => 0,
        EdgeEnd::Target => 1,
    }
}

/// Strands of one handle: copies of the core on either side of the gap, each at
/// `ε·P + μ·(order + jitter)`, joined by a straight chord across the gap.
pub fn build_one_handle_fragment(
    layout: &Layout,
    handle: usize,
    specs: &[PassSpec],
    placement: &Placement,
) -> HandleFragment {
    let band = &layout.bands[handle];
    let k = specs.len();
    let mut idx: Vec<usize> = (0..k).collect();
    idx.sort_by(|&a, &b| {
        let (sa, ta) = specs[a].ends();
        let (sb, tb) = specs[b].ends();
        (sa + ta, specs[a].strand_rank).cmp(&(sb + tb, specs[b].strand_rank))
    });
    let mut order = vec![0; k];
    for (o, &i) in idx.iter().enumerate() {
        order[i] = o;
    }
    let (eps, mu) = (&placement.epsilon, &placement.mu);
    let core = &band.core;
    let g = band.gap.segment;
    let last = core.points.len() - 1;
    let kk = q(k as i64 + 2);
    let pieces = specs
        .iter()
        .enumerate()
        .map(|(i, s)| {
            let rho = q(order[i] as i64);
            let micro = mu * (&rho + &placement.jitter[s.segment]);
            let (ps, pt) = s.ends();
            let hs = eps * &ps + &micro;
            let ht = eps * &pt + &micro;
            let lam = &placement.lambda[s.segment];
            let ls = &band.lambda_cap[0] * &lam[0];
            let lt = &band.lambda_cap[1] * &lam[1];
            let nudge = &placement.nudge[s.segment];
            let ta = (&rho + q(1) + &nudge[0]) / (q(4) * &kk);
            let fb = (&rho + q(1) + &nudge[1]) / &kk;
            let tb = q(1) - &fb * &fb / q(4);
            let mut pts = vec![layout.along(handle, EdgeEnd::Source, &(layout.radius(handle, EdgeEnd::Source) + &ls)).shifted(&hs)];
            pts.extend(core.points[1..=g].iter().map(|p| p.shifted(&hs)));
            pts.push(lerp(&band.gap.start, &band.gap.end, &ta).shifted(&hs));
            pts.push(lerp(&band.gap.start, &band.gap.end, &tb).shifted(&ht));
            pts.extend(core.points[g + 1..last].iter().map(|p| p.shifted(&ht)));
            pts.push(layout.along(handle, EdgeEnd::Target, &(layout.radius(handle, EdgeEnd::Target) + &lt)).shifted(&ht));
            let pass = Pass { handle, direction: s.direction, rank: s.strand_rank };
            let (jump, heights) = match s.direction {
                Direction::WithCore => (&ht - &hs, vec![hs, ht]),
                Direction::AgainstCore => {
                    pts.reverse();
                    (&hs - &ht, vec![hs, ht])
                }
            };
            PassPiece {
                segment: s.segment,
                handle,
                order: order[i],
                entry: Node { half: pass.entry(), prominence: s.p_entry.clone() },
                exit: Node { half: pass.exit(), prominence: s.p_exit() },
                heights,
                jump,
                points: pts,
            }
        })
        .collect();
    HandleFragment { handle, pieces }
}

/// Chords of one disk: translates of the two skeleton pieces through the vertex,
/// stacked by prominence, equal prominence resolved by the disk order.
pub fn build_zero_handle_fragment(
    layout: &Layout,
    vertex: usize,
    specs: &[ChordSpec],
    placement: &Placement,
) -> Vec<ChordPiece> {
    let mut idx: Vec<usize> = (0..specs.len()).collect();
    idx.sort_by(|&a, &b| (&specs[a].p, specs[a].disk_min).cmp(&(&specs[b].p, specs[b].disk_min)));
    let w = &layout.graph.vertices[vertex].position;
    let r = &layout.radii[vertex];
    let (eps, mu) = (&placement.epsilon, &placement.mu);
    let mut out: Vec<ChordPiece> = idx
        .iter()
        .enumerate()
        .map(|(o, &i)| {
            let s = &specs[i];
            let h = eps * &s.p + mu * (q(o as i64) + &placement.jitter[s.segment]);
            let cap = |half: HalfEdge| &layout.bands[half.edge].lambda_cap[end_index(half.end)];
            let la = cap(s.from) * &s.lambda[0];
            let lb = cap(s.to) * &s.lambda[1];
            let points = vec![
                layout.along(s.from.edge, s.from.end, &(r - &la)).shifted(&h),
                w.shifted(&h),
                layout.along(s.to.edge, s.to.end, &(r - &lb)).shifted(&h),
            ];
            ChordPiece {
                segment: s.segment,
                vertex,
                order: o,
                from: Node { half: s.from, prominence: s.p.clone() },
                to: Node { half: s.to, prominence: s.p.clone() },
                height: h,
                points,
            }
        })
        .collect();
    out.sort_by_key(|c| c.segment);
    out
}

pub(crate) fn build_fragments(layout: &Layout, plan: &Plan, placement: &Placement) -> Result<Fragments, RealizeError> {
    let segs = &plan.segments;
    let n = segs.len();
    let mut k: BTreeMap<usize, usize> = BTreeMap::new();
    for (_, p) in segs.passes() {
        *k.entry(p.handle).or_default() += 1;
    }
    let mut by_handle: BTreeMap<usize, Vec<PassSpec>> = BTreeMap::new();
    for i in 0..n {
        if let Some((handle, direction, rank)) = pass_at(segs, i) {
            let gain = plan.gains.gain_of(i).cloned().ok_or(RealizeError::EndpointMismatch { segment: i })?;
            by_handle.entry(handle).or_default().push(PassSpec {
                segment: i,
                direction,
                strand_rank: rank,
                p_entry: plan.prominence.start[i].clone(),
                gain,
            });
        }
    }
    let mut one: Vec<PassPiece> = by_handle
        .iter()
        .flat_map(|(h, specs)| build_one_handle_fragment(layout, *h, specs, placement).pieces)
        .collect();
    one.sort_by_key(|p| p.segment);

    let ribbon = &layout.ribbon;
    let mut by_vertex: BTreeMap<usize, Vec<(ChordSpec, [(usize, usize); 2])>> = BTreeMap::new();
    for i in 0..n {
        if let Segment::Chord { vertex, from, to } = segs.segments[i] {
            let prev = (i + n - 1) % n;
            let next = (i + 1) % n;
            let pa = ribbon.disk_position(from.half, from.rank, k[&from.half.edge]);
            let pb = ribbon.disk_position(to.half, to.rank, k[&to.half.edge]);
            let spec = ChordSpec {
                segment: i,
                from: from.half,
                to: to.half,
                p: plan.prominence.start[i].clone(),
                disk_min: 0,
                lambda: [
                    placement.lambda[prev][end_index(from.half.end)].clone(),
                    placement.lambda[next][end_index(to.half.end)].clone(),
                ],
            };
            by_vertex.entry(vertex).or_default().push((spec, [pa, pb]));
        }
    }
    let mut zero = vec![];
    for (v, list) in by_vertex {
        let mut keys: Vec<(usize, usize)> = list.iter().flat_map(|(_, ps)| *ps).collect();
        keys.sort();
        let specs: Vec<ChordSpec> = list
            .into_iter()
            .map(|(mut s, ps)| {
                s.disk_min = ps.iter().map(|p| keys.binary_search(p).expect("present")).min().expect("two ends");
                s
            })
            .collect();
        zero.extend(build_zero_handle_fragment(layout, v, &specs, placement));
    }
    zero.sort_by_key(|c| c.segment);
    Ok(Fragments { one, zero })
}

fn collinear_through(a: &FrontPoint, b: &FrontPoint, c: &FrontPoint) -> bool {
    let (u0, u1) = (&b.y - &a.y, &b.z - &a.z);
    let (v0, v1) = (&c.y - &b.y, &c.z - &b.z);
    (&u0 * &v1 - &u1 * &v0).is_zero() && (&u0 * &v0 + &u1 * &v1) > q(0)
}

/// Drop repeated points and interior points of straight runs of a closed polygon.
pub(crate) fn clean_closed(mut pts: Vec<FrontPoint>) -> Vec<FrontPoint> {
    loop {
        let n = pts.len();
        if n < 3 {
            return pts;
        }
        let drop = (0..n).find(|&i| {
            let (a, b, c) = (&pts[(i + n - 1) % n], &pts[i], &pts[(i + 1) % n]);
            a == b || collinear_through(a, b, c)
        });
        match drop {
            Some(i) => {
                pts.remove(i);
            }
            None => return pts,
        }
    }
}

/// Concatenate the pieces in curve order into one closed strand; every pass must
/// hand over to its chord at the same arc and prominence.
pub fn glue(frags: &Fragments, segments: &SegmentList) -> Result<FrontStrand, RealizeError> {
    let n = segments.len();
    let pass: BTreeMap<usize, &PassPiece> = frags.one.iter().map(|p| (p.segment, p)).collect();
    let chord: BTreeMap<usize, &ChordPiece> = frags.zero.iter().map(|c| (c.segment, c)).collect();
    let mut pts = vec![];
    for i in 0..n {
        let mismatch = RealizeError::EndpointMismatch { segment: i };
        if i % 2 == 0 {
            let p = pass.get(&i).ok_or(mismatch.clone())?;
            let c = chord.get(&((i + 1) % n)).ok_or(mismatch.clone())?;
            if p.exit != c.from {
                return Err(mismatch);
            }
            pts.extend(p.points.iter().cloned());
        } else {
            let c = chord.get(&i).ok_or(mismatch.clone())?;
            let p = pass.get(&((i + 1) % n)).ok_or(mismatch.clone())?;
            if c.to != p.entry {
                return Err(mismatch);
            }
            pts.extend(c.points.iter().cloned());
        }
    }
    Ok(FrontStrand::closed(clean_closed(pts)))
}

/// Crossings of the knot with the gap midlines, inside the itinerary windows, in
/// knot order.
pub fn itinerary(layout: &Layout, knot: &FrontStrand) -> Vec<(usize, Direction)> {
    let n = knot.points.len();
    let mut hits: Vec<(usize, Q, usize, Direction)> = vec![];
    for band in &layout.bands {
        let gap = &band.gap;
        let ym = &gap.midline;
        let zc = z_at(&gap.start, &gap.end, ym);
        let core_up = gap.end.y > gap.start.y;
        for i in 0..n {
            let (a, b) = (&knot.points[i], &knot.points[(i + 1) % n]);
            let (lo, hi) = if a.y < b.y { (&a.y, &b.y) } else { (&b.y, &a.y) };
            if !(lo <= ym && ym < hi) {
                continue;
            }
            let z = z_at(a, b, ym);
            let inside = match &gap.window {
                Some(w) => {
                    let d = &z - &zc;
                    &d < w && &-d < w
                }
                None => true,
            };
            if inside {
                let dir = if (b.y > a.y) == core_up { Direction::WithCore } else { Direction::AgainstCore };
                let t = (ym - &a.y) / (&b.y - &a.y);
                hits.push((i, t, band.edge, dir));
            }
        }
    }
    hits.sort_by(|x, y| (x.0, &x.1).cmp(&(y.0, &y.1)));
    hits.into_iter().map(|(_, _, e, d)| (e, d)).collect()
}
