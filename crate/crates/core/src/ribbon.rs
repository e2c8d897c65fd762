//! Abstract ribbons: oriented fatgraphs with a handle decomposition.
//!
//! Conventions for the abstract handle of edge `e`: the core runs from the source
//! to the target, strand rank 1 is the bottom (right-hand) side. At a vertex the
//! attaching arcs follow the counter-clockwise order of the incidences; along a
//! source arc the ranks ascend, along a target arc they descend.

use serde::{Deserialize, Serialize};

use crate::curve_model::CurveOnRibbon;
use crate::front_model::{q, FrontDiagram, FrontPoint, FrontStrand, Q};
use crate::legendrian_graph::{edge_core_segments, point_at_distance, EdgeEnd, HandleExtent, LegendrianGraphFront};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct HalfEdge {
    pub edge: usize,
    pub end: EdgeEnd,
}

impl HalfEdge {
    pub fn new(edge: usize, end: EdgeEnd) -> Self {
        HalfEdge { edge, end }
    }

    pub fn dart(self) -> usize {
        2 * self.edge + usize::from(self.end == EdgeEnd::Target)
    }

    pub fn from_dart(d: usize) -> Self {
        HalfEdge { edge: d / 2, end: if d % 2 == 0 { EdgeEnd::Source } else { EdgeEnd::Target } }
    }

    pub fn opposite(self) -> Self {
        HalfEdge { edge: self.edge, end: self.end.other() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZeroHandle {
    pub vertex: usize,
    pub attaching_arcs: Vec<HalfEdge>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OneHandle {
    pub edge: usize,
    pub source: usize,
    pub target: usize,
    pub core: Option<FrontStrand>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BandSide {
    Bottom,
    Top,
}

/// One band side on a boundary cycle, traversed from `from` to the opposite end.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BoundaryLetter {
    pub edge: usize,
    pub side: BandSide,
    pub from: EdgeEnd,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AbstractRibbon {
    pub zero_handles: Vec<ZeroHandle>,
    pub one_handles: Vec<OneHandle>,
    pub boundary_count: usize,
    pub genus: usize,
    pub euler: i64,
    pub components: usize,
    #[serde(skip)]
    arc_index: Vec<(usize, usize)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundarySummary {
    pub count: usize,
    pub words: Vec<Vec<BoundaryLetter>>,
}

impl AbstractRibbon {
    /// Fatgraph from counter-clockwise rotations; every half-edge of edges
    /// `0..n_edges` must occur exactly once.
    pub fn from_rotations(rotations: Vec<Vec<HalfEdge>>, n_edges: usize) -> Result<Self, String> {
        let mut arc_index = vec![(usize::MAX, 0); 2 * n_edges];
        for (v, rot) in rotations.iter().enumerate() {
            for (i, h) in rot.iter().enumerate() {
                if h.edge >= n_edges {
                    return Err(format!("edge {} out of range", h.edge));
                }
                if arc_index[h.dart()].0 != usize::MAX {
                    return Err(format!("half-edge {:?} listed twice", h));
                }
                arc_index[h.dart()] = (v, i);
            }
        }
        if arc_index.iter().any(|a| a.0 == usize::MAX) {
            return Err("some half-edge is missing".into());
        }
        let one_handles = (0..n_edges)
            .map(|e| OneHandle {
                edge: e,
                source: arc_index[2 * e].0,
                target: arc_index[2 * e + 1].0,
                core: None,
            })
            .collect();
        let zero_handles = rotations
            .into_iter()
            .enumerate()
            .map(|(vertex, attaching_arcs)| ZeroHandle { vertex, attaching_arcs })
            .collect();
        let mut r = AbstractRibbon {
            zero_handles,
            one_handles,
            boundary_count: 0,
            genus: 0,
            euler: 0,
            components: 0,
            arc_index,
        };
        r.derive_topology();
        Ok(r)
    }

    fn derive_topology(&mut self) {
        let v = self.zero_handles.len();
        let e = self.one_handles.len();
        self.euler = v as i64 - e as i64;
        self.boundary_count = boundary_components(self).count;
        // connected components by union-find over vertices
        let mut parent: Vec<usize> = (0..v).collect();
        fn find(p: &mut Vec<usize>, x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut y = x;
            while p[y] != r {
                let n = p[y];
                p[y] = r;
                y = n;
            }
            r
        }
        for h in &self.one_handles {
            let (a, b) = (find(&mut parent, h.source), find(&mut parent, h.target));
            parent[a] = b;
        }
        self.components = (0..v).filter(|&x| find(&mut parent, x) == x).count();
        let twice_g = 2 * self.components as i64 - self.euler - self.boundary_count as i64;
        debug_assert!(twice_g >= 0 && twice_g % 2 == 0);
        self.genus = (twice_g / 2) as usize;
    }

    pub fn vertex_of(&self, h: HalfEdge) -> usize {
        self.arc_index[h.dart()].0
    }

    pub fn arc_position(&self, h: HalfEdge) -> usize {
        self.arc_index[h.dart()].1
    }

    /// Next half-edge counter-clockwise at the same vertex.
    pub fn sigma(&self, h: HalfEdge) -> HalfEdge {
        let (v, i) = self.arc_index[h.dart()];
        let rot = &self.zero_handles[v].attaching_arcs;
        rot[(i + 1) % rot.len()]
    }

    pub fn half_edges(&self) -> impl Iterator<Item = HalfEdge> + '_ {
        (0..2 * self.one_handles.len()).map(HalfEdge::from_dart)
    }

    /// Position of a strand endpoint on the boundary of its disk, as
    /// (arc index in counter-clockwise order, offset within the arc).
    pub fn disk_position(&self, h: HalfEdge, rank: usize, k: usize) -> (usize, usize) {
        let within = match h.end {
            EdgeEnd::Source => rank - 1,
            EdgeEnd::Target => k - rank,
        };
        (self.arc_position(h), within)
    }
}

pub fn build_ribbon(graph: &LegendrianGraphFront) -> AbstractRibbon {
    let rotations = graph
        .vertices
        .iter()
        .map(|v| v.incident_ends.iter().map(|i| HalfEdge::new(i.edge, i.end)).collect())
        .collect();
    let mut r = AbstractRibbon::from_rotations(rotations, graph.edges.len()).expect("graph rotations are complete");
    let radii = graph.collar_radii();
    for (ei, e) in graph.edges.iter().enumerate() {
        let ext = HandleExtent { source: radii[e.source].clone(), target: radii[e.target].clone() };
        r.one_handles[ei].core = edge_core_segments(graph, ei, &ext).ok();
    }
    r
}

/// Boundary cycles are the orbits of `h -> sigma(opposite(h))`: leave along the
/// band of `h`, arrive at the opposite end, continue counter-clockwise.
pub fn boundary_components(r: &AbstractRibbon) -> BoundarySummary {
    let n = 2 * r.one_handles.len();
    let mut seen = vec![false; n];
    let mut words = vec![];
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut word = vec![];
        let mut h = HalfEdge::from_dart(start);
        while !seen[h.dart()] {
            seen[h.dart()] = true;
            let side = match h.end {
                EdgeEnd::Source => BandSide::Bottom,
                EdgeEnd::Target => BandSide::Top,
            };
            word.push(BoundaryLetter { edge: h.edge, side, from: h.end });
            h = r.sigma(h.opposite());
        }
        words.push(word);
    }
    // isolated vertices bound one disk each
    let isolated = r.zero_handles.iter().filter(|z| z.attaching_arcs.is_empty()).count();
    for _ in 0..isolated {
        words.push(vec![]);
    }
    BoundarySummary { count: words.len(), words }
}

/// Pass-parity per handle.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Z2Class(pub Vec<u8>);

impl Z2Class {
    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&b| b == 0)
    }
}

pub fn pass_parity(r: &AbstractRibbon, curve: &CurveOnRibbon) -> Z2Class {
    let mut v = vec![0u8; r.one_handles.len()];
    for p in &curve.passes {
        v[p.handle] ^= 1;
    }
    Z2Class(v)
}

/// A curve is nontrivial iff it crosses some cocore an odd number of times; the
/// witness is the first such handle.
pub fn is_homologically_nontrivial(r: &AbstractRibbon, curve: &CurveOnRibbon) -> (bool, Option<usize>) {
    let c = pass_parity(r, curve);
    let w = c.0.iter().position(|&b| b == 1);
    (w.is_some(), w)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Z2Report {
    pub class: Z2Class,
    pub nontrivial: bool,
    pub h1_rank: usize,
}

#[derive(Clone)]
struct Bits(Vec<u64>);

impl Bits {
    fn new(n: usize) -> Self {
        Bits(vec![0; n.div_ceil(64)])
    }
    fn flip(&mut self, i: usize) {
        self.0[i / 64] ^= 1 << (i % 64);
    }
    fn get(&self, i: usize) -> bool {
        self.0[i / 64] >> (i % 64) & 1 == 1
    }
    fn xor(&mut self, o: &Bits) {
        for (a, b) in self.0.iter_mut().zip(&o.0) {
            *a ^= b;
        }
    }
    fn lowest(&self) -> Option<usize> {
        self.0.iter().enumerate().find(|(_, w)| **w != 0).map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
    }
}

/// Incremental row-echelon basis over Z/2.
struct Echelon {
    rows: Vec<(usize, Bits)>,
}

impl Echelon {
    fn reduce(&self, v: &mut Bits) {
        for (p, r) in &self.rows {
            if v.get(*p) {
                v.xor(r);
            }
        }
    }
    fn insert(&mut self, mut v: Bits) -> bool {
        self.reduce(&mut v);
        match v.lowest() {
            Some(p) => {
                for (_, r) in self.rows.iter_mut() {
                    if r.get(p) {
                        r.xor(&v);
                    }
                }
                self.rows.push((p, v));
                true
            }
            None => false,
        }
    }
}

/// Cellular Z/2 homology of the handle surface, computed from scratch.
///
/// 0-cells: a centre per disk and three points `f, m, l` per attaching arc.
/// 1-cells: spokes, arc halves, gap arcs, cores and the two band sides.
/// 2-cells: disk sectors between consecutive spokes and the two half-bands.
/// The curve is pushed onto cores and spokes and tested against the image of
/// the boundary map.
pub fn z2_homology_oracle(r: &AbstractRibbon, curve: &CurveOnRibbon) -> Z2Report {
    let e = r.one_handles.len();
    let nd = 2 * e;
    // 1-cell numbering
    let spoke = |d: usize| d;
    let arc_a = |d: usize| nd + d;
    let arc_b = |d: usize| 2 * nd + d;
    let gap = |d: usize| 3 * nd + d;
    let core = |x: usize| 4 * nd + x;
    let bottom = |x: usize| 4 * nd + e + x;
    let top = |x: usize| 4 * nd + 2 * e + x;
    let n1 = 4 * nd + 3 * e;
    // 0-cell numbering
    let nv = r.zero_handles.len();
    let centre = |v: usize| v;
    let fp = |d: usize| nv + d;
    let mp = |d: usize| nv + nd + d;
    let lp = |d: usize| nv + 2 * nd + d;
    let n0 = nv + 3 * nd;

    let mut d1: Vec<Bits> = vec![Bits::new(n0); n1];
    let mut set1 = |c: usize, a: usize, b: usize| {
        d1[c].flip(a);
        d1[c].flip(b);
    };
    for d in 0..nd {
        let h = HalfEdge::from_dart(d);
        let v = r.vertex_of(h);
        let nxt = r.sigma(h).dart();
        set1(spoke(d), centre(v), mp(d));
        set1(arc_a(d), fp(d), mp(d));
        set1(arc_b(d), mp(d), lp(d));
        set1(gap(d), lp(d), fp(nxt));
    }
    for x in 0..e {
        let (s, t) = (2 * x, 2 * x + 1);
        set1(core(x), mp(s), mp(t));
        set1(bottom(x), fp(s), lp(t));
        set1(top(x), lp(s), fp(t));
    }

    let mut d2: Vec<Bits> = vec![];
    for d in 0..nd {
        let nxt = r.sigma(HalfEdge::from_dart(d)).dart();
        let mut c = Bits::new(n1);
        c.flip(spoke(d));
        c.flip(arc_b(d));
        c.flip(gap(d));
        c.flip(arc_a(nxt));
        c.flip(spoke(nxt));
        d2.push(c);
    }
    for x in 0..e {
        let (s, t) = (2 * x, 2 * x + 1);
        let mut lo = Bits::new(n1);
        for c in [core(x), arc_b(t), bottom(x), arc_a(s)] {
            lo.flip(c);
        }
        let mut hi = Bits::new(n1);
        for c in [core(x), arc_b(s), top(x), arc_a(t)] {
            hi.flip(c);
        }
        d2.push(lo);
        d2.push(hi);
    }

    // rank of the boundary maps
    let mut ech1 = Echelon { rows: vec![] };
    let rank1 = d1.iter().filter(|c| ech1.insert((*c).clone())).count();
    let mut ech2 = Echelon { rows: vec![] };
    let rank2 = d2.iter().filter(|c| ech2.insert((*c).clone())).count();
    // isolated vertices are extra 0-cells without 1-cells; they do not affect H1
    let h1_rank = (n1 - rank1) - rank2;

    let mut chain = Bits::new(n1);
    for p in &curve.passes {
        let (s, t) = (2 * p.handle, 2 * p.handle + 1);
        chain.flip(core(p.handle));
        // the two chord spokes meeting this pass
        chain.flip(spoke(s));
        chain.flip(spoke(t));
    }
    let mut probe = chain.clone();
    ech2.reduce(&mut probe);
    let nontrivial = probe.lowest().is_some();
    Z2Report { class: pass_parity(r, curve), nontrivial, h1_rank }
}

/// Boundary of the ribbon in the front, traced per boundary cycle. Each band side
/// is a vertical translate of its edge by `width`; near a vertex consecutive sides
/// are joined through a point above or below the vertex.
pub fn render_ribbon_front(graph: &LegendrianGraphFront, width: Option<Q>) -> FrontDiagram {
    let ribbon = build_ribbon(graph);
    let radii = graph.collar_radii();
    let min_r = radii.iter().min().cloned().unwrap_or_else(|| q(1));
    let w = width.unwrap_or_else(|| &min_r / q(4));
    let side_offset = |edge: usize, side: BandSide| -> Q {
        let s = graph.edge_front(edge);
        let d = if s.dy_sign(0) > 0 { q(1) } else { q(-1) };
        match side {
            BandSide::Bottom => -(&w * d),
            BandSide::Top => &w * d,
        }
    };
    let summary = boundary_components(&ribbon);
    let mut strands = vec![];
    for word in &summary.words {
        let mut pts: Vec<FrontPoint> = vec![];
        for (i, letter) in word.iter().enumerate() {
            let s = graph.edge_front(letter.edge);
            let off = side_offset(letter.edge, letter.side);
            let e = &graph.edges[letter.edge];
            let (rs, rt) = (&radii[e.source], &radii[e.target]);
            let mut body: Vec<FrontPoint> = vec![point_at_distance(s, EdgeEnd::Source, rs)];
            body.extend(s.points[1..s.points.len() - 1].iter().cloned());
            body.push(point_at_distance(s, EdgeEnd::Target, rt));
            if letter.from == EdgeEnd::Target {
                body.reverse();
            }
            pts.extend(body.into_iter().map(|p| p.shifted(&off)));
            // join to the next side through the vertex
            let next = word[(i + 1) % word.len()];
            let arrive = letter.from.other();
            let v = &graph.vertices[e.vertex(arrive)];
            let next_off = side_offset(next.edge, next.side);
            let mid = (&off + &next_off) / q(2);
            pts.push(v.position.shifted(&mid));
        }
        let mut clean: Vec<FrontPoint> = vec![];
        for p in pts {
            if clean.last() != Some(&p) {
                clean.push(p);
            }
        }
        if clean.len() > 1 && clean.first() == clean.last() {
            clean.pop();
        }
        strands.push(FrontStrand::closed(clean));
    }
    FrontDiagram::from_strands(strands)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::sample::{all_curves, fatgraphs};

    #[test]
    fn diamond_is_an_annulus() {
        let r = build_ribbon(&fixtures::diamond_loop());
        assert_eq!((r.genus, r.boundary_count, r.euler), (0, 2, 0));
        assert_eq!(boundary_components(&r).count, 2);
    }

    #[test]
    fn wedge_is_a_punctured_torus() {
        let r = build_ribbon(&fixtures::wedge_of_unknots());
        assert_eq!((r.genus, r.boundary_count), (1, 1));
        let words = boundary_components(&r).words;
        assert_eq!(words.len(), 1);
        assert_eq!(words[0].len(), 4);
    }

    #[test]
    fn darts_round_trip() {
        for d in 0..10 {
            let h = HalfEdge::from_dart(d);
            assert_eq!(h.dart(), d);
            assert_eq!(h.opposite().opposite(), h);
        }
    }

    #[test]
    fn every_band_side_on_one_boundary_cycle() {
        for r in fatgraphs(3) {
            let b = boundary_components(&r);
            let total: usize = b.words.iter().map(Vec::len).sum();
            assert_eq!(total, 2 * r.one_handles.len());
            assert_eq!(b.count, r.boundary_count);
        }
    }

    #[test]
    fn homology_rank_matches_topology() {
        let graphs = [fixtures::diamond_loop(), fixtures::wedge_of_unknots(), fixtures::theta_with_crossing(), fixtures::worked_example()];
        for g in &graphs {
            let r = build_ribbon(g);
            let empty = CurveOnRibbon { passes: vec![] };
            assert_eq!(z2_homology_oracle(&r, &empty).h1_rank, 2 * r.genus + r.boundary_count - 1);
        }
        for r in fatgraphs(3) {
            let empty = CurveOnRibbon { passes: vec![] };
            assert_eq!(z2_homology_oracle(&r, &empty).h1_rank, 2 * r.genus + r.boundary_count - 1);
        }
    }

    #[test]
    fn parity_rule_agrees_with_cellular_homology() {
        for r in fatgraphs(3) {
            for c in all_curves(&r, 4) {
                let (fast, _) = is_homologically_nontrivial(&r, &c);
                assert_eq!(fast, z2_homology_oracle(&r, &c).nontrivial, "{c:?}");
            }
        }
    }

    #[test]
    fn boundary_curves_are_trivial() {
        let r = build_ribbon(&fixtures::wedge_of_unknots());
        let (nt, w) = is_homologically_nontrivial(&r, &fixtures::wedge_boundary_curve());
        assert!(!nt);
        assert_eq!(w, None);
    }

    #[test]
    fn ribbon_boundary_front_has_one_strand_per_cycle() {
        let g = fixtures::wedge_of_unknots();
        let f = render_ribbon_front(&g, None);
        assert_eq!(f.strands.len(), build_ribbon(&g).boundary_count);
        assert!(f.strands.iter().all(|s| s.closed));
    }
}
