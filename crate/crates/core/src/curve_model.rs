//! Simple closed curves on an abstract ribbon, given as cyclic words of band
//! passes with explicit strand ranks.
//!
//! Pass `i` leaves its band at the exit arc and the implied chord of the 0-handle
//! joins it to the entry arc of pass `i + 1`. Chord endpoints sit on the arcs at the
//! positions fixed by the ranks, so the ranks alone determine the embedding.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::legendrian_graph::EdgeEnd;
use crate::ribbon::{AbstractRibbon, BandSide, BoundaryLetter, HalfEdge};

pub const CRV_FORMAT: &str = "CRV";
pub const CRV_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    WithCore,
    AgainstCore,
}

impl Direction {
    pub fn flipped(self) -> Self {
        match self {
            Direction::WithCore => Direction::AgainstCore,
            Direction::AgainstCore => Direction::WithCore,
        }
    }

    pub fn sign(self) -> i64 {
        match self {
            Direction::WithCore => 1,
            Direction::AgainstCore => -1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Pass {
    pub handle: usize,
    pub direction: Direction,
    pub rank: usize,
}

impl Pass {
    pub fn new(handle: usize, direction: Direction, rank: usize) -> Self {
        Pass { handle, direction, rank }
    }

    pub fn entry(&self) -> HalfEdge {
        match self.direction {
            Direction::WithCore => HalfEdge::new(self.handle, EdgeEnd::Source),
            Direction::AgainstCore => HalfEdge::new(self.handle, EdgeEnd::Target),
        }
    }

    pub fn exit(&self) -> HalfEdge {
        self.entry().opposite()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ArcPoint {
    pub half: HalfEdge,
    pub rank: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Chord {
    pub vertex: usize,
    pub from: ArcPoint,
    pub to: ArcPoint,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveOnRibbon {
    pub passes: Vec<Pass>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct CrvDocument {
    format: String,
    version: u32,
    passes: Vec<Pass>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum CurveError {
    #[error("schema error: {0}")]
    Schema(String),
    #[error("curve has no passes")]
    Empty,
    #[error("pass {pass} refers to unknown handle {handle}")]
    UnknownHandle { pass: usize, handle: usize },
    #[error("ranks in handle {handle} are not a bijection onto 1..={k}")]
    BadRanks { handle: usize, k: usize },
    #[error("passes {pass} and {next} do not meet in a common 0-handle")]
    Disconnected { pass: usize, next: usize },
    #[error("chord after pass {pass} returns to the arc it left")]
    NotNormalized { pass: usize },
    #[error("chords after passes {first} and {second} cross in 0-handle {vertex}")]
    NotSimple { vertex: usize, first: usize, second: usize },
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveReport {
    pub errors: Vec<CurveError>,
}

impl CurveReport {
    pub fn is_valid(&self) -> bool {
        self.errors.is_empty()
    }

    pub fn into_result(self) -> Result<(), CurveError> {
        match self.errors.into_iter().next() {
            Some(e) => Err(e),
            None => Ok(()),
        }
    }
}

impl CurveOnRibbon {
    pub fn new(passes: Vec<Pass>) -> Self {
        CurveOnRibbon { passes }
    }

    pub fn handle_counts(&self, n_handles: usize) -> Vec<usize> {
        let mut k = vec![0; n_handles];
        for p in &self.passes {
            if p.handle < n_handles {
                k[p.handle] += 1;
            }
        }
        k
    }

    /// Chord `i` runs from the exit of pass `i` to the entry of pass `i + 1`.
    pub fn chords(&self, r: &AbstractRibbon) -> Vec<Chord> {
        let n = self.passes.len();
        (0..n)
            .map(|i| {
                let (p, nx) = (self.passes[i], self.passes[(i + 1) % n]);
                Chord {
                    vertex: r.vertex_of(p.exit()),
                    from: ArcPoint { half: p.exit(), rank: p.rank },
                    to: ArcPoint { half: nx.entry(), rank: nx.rank },
                }
            })
            .collect()
    }

    pub fn reversed(&self) -> Self {
        CurveOnRibbon {
            passes: self
                .passes
                .iter()
                .rev()
                .map(|p| Pass { handle: p.handle, direction: p.direction.flipped(), rank: p.rank })
                .collect(),
        }
    }

    pub fn to_document(&self) -> String {
        let doc = CrvDocument { format: CRV_FORMAT.into(), version: CRV_VERSION, passes: self.passes.clone() };
        serde_json::to_string_pretty(&doc).expect("serializable")
    }
}

pub fn parse_curve(text: &str) -> Result<CurveOnRibbon, CurveError> {
    let doc: CrvDocument = serde_json::from_str(text).map_err(|e| CurveError::Schema(e.to_string()))?;
    if doc.format != CRV_FORMAT {
        return Err(CurveError::Schema(format!("expected format {CRV_FORMAT}, found {}", doc.format)));
    }
    if doc.version != CRV_VERSION {
        return Err(CurveError::Schema(format!("unsupported version {}", doc.version)));
    }
    Ok(CurveOnRibbon { passes: doc.passes })
}

fn interleaved(a: (usize, usize), b: (usize, usize)) -> bool {
    let (a0, a1) = (a.0.min(a.1), a.0.max(a.1));
    let (b0, b1) = (b.0.min(b.1), b.0.max(b.1));
    (a0 < b0 && b0 < a1 && a1 < b1) || (b0 < a0 && a0 < b1 && b1 < a1)
}

pub fn validate_curve(r: &AbstractRibbon, curve: &CurveOnRibbon) -> CurveReport {
    let mut errors = vec![];
    let n = curve.passes.len();
    if n == 0 {
        return CurveReport { errors: vec![CurveError::Empty] };
    }
    let nh = r.one_handles.len();
    for (i, p) in curve.passes.iter().enumerate() {
        if p.handle >= nh {
            errors.push(CurveError::UnknownHandle { pass: i, handle: p.handle });
        }
    }
    if !errors.is_empty() {
        return CurveReport { errors };
    }
    let k = curve.handle_counts(nh);
    let mut ranks: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for p in &curve.passes {
        ranks.entry(p.handle).or_default().push(p.rank);
    }
    for (h, mut rs) in ranks {
        rs.sort();
        if rs != (1..=k[h]).collect::<Vec<_>>() {
            errors.push(CurveError::BadRanks { handle: h, k: k[h] });
        }
    }
    for i in 0..n {
        let (p, nx) = (curve.passes[i], curve.passes[(i + 1) % n]);
        if r.vertex_of(p.exit()) != r.vertex_of(nx.entry()) {
            errors.push(CurveError::Disconnected { pass: i, next: (i + 1) % n });
        } else if p.exit() == nx.entry() {
            errors.push(CurveError::NotNormalized { pass: i });
        }
    }
    if !errors.is_empty() {
        return CurveReport { errors };
    }
    let chords = curve.chords(r);
    let mut by_vertex: BTreeMap<usize, Vec<(usize, (usize, usize), (usize, usize))>> = BTreeMap::new();
    for (i, c) in chords.iter().enumerate() {
        let a = r.disk_position(c.from.half, c.from.rank, k[c.from.half.edge]);
        let b = r.disk_position(c.to.half, c.to.rank, k[c.to.half.edge]);
        by_vertex.entry(c.vertex).or_default().push((i, a, b));
    }
    for (v, list) in by_vertex {
        let mut keys: Vec<(usize, usize)> = list.iter().flat_map(|(_, a, b)| [*a, *b]).collect();
        keys.sort();
        let idx = |p: &(usize, usize)| keys.binary_search(p).expect("present");
        let lin: Vec<(usize, (usize, usize))> = list.iter().map(|(i, a, b)| (*i, (idx(a), idx(b)))).collect();
        for (x, (i, ci)) in lin.iter().enumerate() {
            for (j, cj) in &lin[x + 1..] {
                if interleaved(*ci, *cj) {
                    errors.push(CurveError::NotSimple { vertex: v, first: *i, second: *j });
                }
            }
        }
    }
    CurveReport { errors }
}

/// The curve obtained by pushing a boundary cycle into the surface.
pub fn boundary_parallel(word: &[BoundaryLetter]) -> CurveOnRibbon {
    let mut k: BTreeMap<usize, usize> = BTreeMap::new();
    for l in word {
        *k.entry(l.edge).or_default() += 1;
    }
    let passes = word
        .iter()
        .map(|l| {
            let direction = match l.from {
                EdgeEnd::Source => Direction::WithCore,
                EdgeEnd::Target => Direction::AgainstCore,
            };
            let rank = match l.side {
                BandSide::Bottom => 1,
                BandSide::Top => k[&l.edge],
            };
            Pass { handle: l.edge, direction, rank }
        })
        .collect();
    CurveOnRibbon { passes }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Segment {
    Pass { pass: usize, handle: usize, direction: Direction, rank: usize },
    Chord { vertex: usize, from: ArcPoint, to: ArcPoint },
}

impl Segment {
    pub fn is_pass(&self) -> bool {
        matches!(self, Segment::Pass { .. })
    }
}

/// `segments[2j]` is a band pass, `segments[2j + 1]` the following chord.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SegmentList {
    pub segments: Vec<Segment>,
    /// Index, in the input curve, of the pass chosen as the first segment.
    pub start_pass: usize,
    pub reversed: bool,
}

impl SegmentList {
    pub fn len(&self) -> usize {
        self.segments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.segments.is_empty()
    }

    /// Passes in order, as (segment index, pass data).
    pub fn passes(&self) -> impl Iterator<Item = (usize, Pass)> + '_ {
        self.segments.iter().enumerate().filter_map(|(i, s)| match *s {
            Segment::Pass { handle, direction, rank, .. } => Some((i, Pass { handle, direction, rank })),
            _ => None,
        })
    }

    /// The curve read off the segment list, starting at the first segment.
    pub fn curve(&self) -> CurveOnRibbon {
        CurveOnRibbon { passes: self.passes().map(|(_, p)| p).collect() }
    }
}

/// Default first pass: lexicographically smallest (handle, rank).
pub fn default_start(curve: &CurveOnRibbon) -> usize {
    (0..curve.passes.len())
        .min_by_key(|&i| (curve.passes[i].handle, curve.passes[i].rank))
        .expect("non-empty curve")
}

/// Cut the curve into alternating pass and chord segments. `start_pass` indexes
/// the input curve; with `reverse` the curve is traversed backwards.
pub fn subdivide(r: &AbstractRibbon, curve: &CurveOnRibbon, start_pass: Option<usize>, reverse: bool) -> SegmentList {
    let n = curve.passes.len();
    let start = start_pass.unwrap_or_else(|| default_start(curve)) % n;
    let (work, first) = if reverse { (curve.reversed(), n - 1 - start) } else { (curve.clone(), start) };
    let rotated: Vec<(usize, Pass)> = (0..n)
        .map(|j| {
            let w = (first + j) % n;
            let original = if reverse { n - 1 - w } else { w };
            (original, work.passes[w])
        })
        .collect();
    let rc = CurveOnRibbon { passes: rotated.iter().map(|(_, p)| *p).collect() };
    let chords = rc.chords(r);
    let mut segments = Vec::with_capacity(2 * n);
    for (j, (orig, p)) in rotated.iter().enumerate() {
        segments.push(Segment::Pass { pass: *orig, handle: p.handle, direction: p.direction, rank: p.rank });
        let c = chords[j];
        segments.push(Segment::Chord { vertex: c.vertex, from: c.from, to: c.to });
    }
    SegmentList { segments, start_pass: start, reversed: reverse }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// One vertex, one loop edge (an annulus core).
    fn loop_ribbon() -> AbstractRibbon {
        AbstractRibbon::from_rotations(
            vec![vec![HalfEdge::new(0, EdgeEnd::Target), HalfEdge::new(0, EdgeEnd::Source)]],
            1,
        )
        .unwrap()
    }

    /// Genus-one pattern: two loops with interleaved ends.
    fn torus_ribbon() -> AbstractRibbon {
        AbstractRibbon::from_rotations(
            vec![vec![
                HalfEdge::new(1, EdgeEnd::Target),
                HalfEdge::new(0, EdgeEnd::Target),
                HalfEdge::new(1, EdgeEnd::Source),
                HalfEdge::new(0, EdgeEnd::Source),
            ]],
            2,
        )
        .unwrap()
    }

    #[test]
    fn smallest_curve_is_valid() {
        let r = loop_ribbon();
        let c = CurveOnRibbon::new(vec![Pass::new(0, Direction::WithCore, 1)]);
        assert!(validate_curve(&r, &c).is_valid());
        let s = subdivide(&r, &c, None, false);
        assert_eq!(s.len(), 2);
        assert!(s.segments[0].is_pass() && !s.segments[1].is_pass());
    }

    #[test]
    fn crossing_chords_are_not_simple() {
        let r = torus_ribbon();
        // band 0 twice in parallel but ranks paired so the chords cross
        let c = CurveOnRibbon::new(vec![Pass::new(0, Direction::WithCore, 1), Pass::new(0, Direction::WithCore, 2)]);
        let rep = validate_curve(&r, &c);
        assert!(rep.errors.iter().any(|e| matches!(e, CurveError::NotSimple { .. })), "{:?}", rep);
    }

    #[test]
    fn same_arc_chord_is_not_normalized() {
        let r = loop_ribbon();
        let c = CurveOnRibbon::new(vec![Pass::new(0, Direction::WithCore, 1), Pass::new(0, Direction::AgainstCore, 2)]);
        let rep = validate_curve(&r, &c);
        assert!(rep.errors.contains(&CurveError::NotNormalized { pass: 0 }));
    }

    #[test]
    fn bad_ranks_and_disconnected() {
        let r = loop_ribbon();
        let c = CurveOnRibbon::new(vec![Pass::new(0, Direction::WithCore, 2)]);
        assert_eq!(validate_curve(&r, &c).errors, vec![CurveError::BadRanks { handle: 0, k: 1 }]);
        let two = AbstractRibbon::from_rotations(
            vec![
                vec![HalfEdge::new(0, EdgeEnd::Source), HalfEdge::new(0, EdgeEnd::Target)],
                vec![HalfEdge::new(1, EdgeEnd::Source), HalfEdge::new(1, EdgeEnd::Target)],
            ],
            2,
        )
        .unwrap();
        let c = CurveOnRibbon::new(vec![Pass::new(0, Direction::WithCore, 1), Pass::new(1, Direction::WithCore, 1)]);
        assert!(matches!(validate_curve(&two, &c).errors[0], CurveError::Disconnected { .. }));
    }

    #[test]
    fn reversal_reverses_segment_order() {
        let r = torus_ribbon();
        let c = CurveOnRibbon::new(vec![Pass::new(0, Direction::WithCore, 1), Pass::new(1, Direction::WithCore, 1)]);
        assert!(validate_curve(&r, &c).is_valid());
        assert!(validate_curve(&r, &c.reversed()).is_valid());
        let f = subdivide(&r, &c, Some(0), false);
        let b = subdivide(&r, &c, Some(0), true);
        let fp: Vec<usize> = f.passes().map(|(_, p)| p.handle).collect();
        let bp: Vec<usize> = b.passes().map(|(_, p)| p.handle).collect();
        assert_eq!(fp, vec![0, 1]);
        assert_eq!(bp, vec![0, 1]);
        assert!(b.passes().all(|(_, p)| p.direction == Direction::AgainstCore));
        assert_eq!(f.segments[0], Segment::Pass { pass: 0, handle: 0, direction: Direction::WithCore, rank: 1 });
    }

    #[test]
    fn document_round_trip() {
        let c = CurveOnRibbon::new(vec![Pass::new(0, Direction::WithCore, 1), Pass::new(1, Direction::AgainstCore, 1)]);
        let d = c.to_document();
        assert_eq!(parse_curve(&d).unwrap(), c);
        assert!(parse_curve("{\"format\":\"LGF\",\"version\":1,\"passes\":[]}").is_err());
    }
}
