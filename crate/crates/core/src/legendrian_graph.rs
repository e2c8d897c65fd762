//! Fronts of generic Legendrian graphs: vertex incidence data, cyclic orders and
//! per-edge cores.
//!
//! Every open strand of the underlying diagram is one edge, running from its
//! source vertex (first point) to its target vertex (last point). The cyclic order
//! at a vertex lists the ends arriving from the left by decreasing slope, followed
//! by the ends leaving to the right by increasing slope. For one-sided vertices
//! the same rule applies; it is the order induced on the contact plane.

use num_traits::Signed;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::front_model::{
    check_generic, crossings, q, DiagramVertex, End, FrontDiagram, FrontPoint, FrontStrand, StrandEnd, Violation, Q,
};

pub const LGF_FORMAT: &str = "LGF";
pub const LGF_VERSION: u32 = 1;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("schema error: {0}")]
    Schema(String),
    #[error("graph front is not generic: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    Genericity(Vec<Violation>),
    #[error("vertex {0} has valency 1")]
    ValencyOneVertex(usize),
    #[error("collar of edge {edge} cannot be placed")]
    DegenerateExtent { edge: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EdgeEnd {
    Source,
    Target,
}

impl EdgeEnd {
    pub fn other(self) -> Self {
        match self {
            EdgeEnd::Source => EdgeEnd::Target,
            EdgeEnd::Target => EdgeEnd::Source,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Left,
    Right,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Incidence {
    pub edge: usize,
    pub end: EdgeEnd,
    #[serde(with = "crate::front_model::rational")]
    pub slope: Q,
    pub side: Side,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphVertex {
    pub position: FrontPoint,
    /// Counter-clockwise cyclic order.
    pub incident_ends: Vec<Incidence>,
}

impl GraphVertex {
    pub fn valency(&self) -> usize {
        self.incident_ends.len()
    }

    pub fn position_of(&self, edge: usize, end: EdgeEnd) -> Option<usize> {
        self.incident_ends.iter().position(|i| i.edge == edge && i.end == end)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphEdge {
    pub strand: usize,
    pub source: usize,
    pub target: usize,
}

impl GraphEdge {
    pub fn vertex(&self, end: EdgeEnd) -> usize {
        match end {
            EdgeEnd::Source => self.source,
            EdgeEnd::Target => self.target,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LegendrianGraphFront {
    pub diagram: FrontDiagram,
    pub vertices: Vec<GraphVertex>,
    pub edges: Vec<GraphEdge>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct LgfDocument {
    format: String,
    version: u32,
    diagram: FrontDiagram,
    edges: Vec<GraphEdge>,
}

impl LegendrianGraphFront {
    /// Build from a diagram whose strands are the edges, in strand order.
    pub fn from_diagram(diagram: FrontDiagram) -> Result<Self, GraphError> {
        let mut edges = vec![];
        for (si, _) in diagram.strands.iter().enumerate() {
            let find = |end: End| {
                diagram
                    .vertices
                    .iter()
                    .position(|v| v.ends.contains(&StrandEnd { strand: si, end }))
                    .ok_or_else(|| GraphError::Schema(format!("strand {si} has a dangling {:?} end", end)))
            };
            edges.push(GraphEdge { strand: si, source: find(End::Start)?, target: find(End::End)? });
        }
        Self::assemble(diagram, edges)
    }

    fn assemble(diagram: FrontDiagram, edges: Vec<GraphEdge>) -> Result<Self, GraphError> {
        let ns = diagram.strands.len();
        let mut used = vec![false; ns];
        for (ei, e) in edges.iter().enumerate() {
            if e.strand >= ns || used[e.strand] {
                return Err(GraphError::Schema(format!("edge {ei} uses strand {} twice or out of range", e.strand)));
            }
            used[e.strand] = true;
            let s = &diagram.strands[e.strand];
            if s.closed {
                return Err(GraphError::Schema(format!("edge {ei} is a closed strand")));
            }
            if s.points.len() < 2 {
                return Err(GraphError::Schema(format!("edge {ei} has fewer than two points")));
            }
            for (end, v) in [(End::Start, e.source), (End::End, e.target)] {
                let ok = diagram
                    .vertices
                    .get(v)
                    .map(|vx| vx.ends.contains(&StrandEnd { strand: e.strand, end }))
                    .unwrap_or(false);
                if !ok {
                    return Err(GraphError::Schema(format!("edge {ei}: vertex {v} does not hold its {:?} end", end)));
                }
            }
        }
        if let Some(s) = used.iter().position(|u| !u) {
            return Err(GraphError::Schema(format!("strand {s} is not an edge")));
        }
        for (vi, v) in diagram.vertices.iter().enumerate() {
            if v.ends.is_empty() {
                return Err(GraphError::Schema(format!("vertex {vi} is isolated")));
            }
        }
        let report = check_generic(&diagram);
        if !report.is_clean() {
            return Err(GraphError::Genericity(report.violations));
        }
        let mut strand_edge = vec![0usize; ns];
        for (ei, e) in edges.iter().enumerate() {
            strand_edge[e.strand] = ei;
        }
        let mut vertices = vec![];
        for (vi, v) in diagram.vertices.iter().enumerate() {
            if v.ends.len() == 1 {
                return Err(GraphError::ValencyOneVertex(vi));
            }
            let mut left = vec![];
            let mut right = vec![];
            for se in &v.ends {
                let s = &diagram.strands[se.strand];
                let (slope, other) = match se.end {
                    End::Start => (s.slope(0), &s.points[1]),
                    End::End => (s.slope(s.edge_count() - 1), &s.points[s.points.len() - 2]),
                };
                let slope = slope.expect("generic diagrams have no vertical edges");
                let side = if other.y < v.position.y { Side::Left } else { Side::Right };
                let end = match se.end {
                    End::Start => EdgeEnd::Source,
                    End::End => EdgeEnd::Target,
                };
                let inc = Incidence { edge: strand_edge[se.strand], end, slope, side };
                match side {
                    Side::Left => left.push(inc),
                    Side::Right => right.push(inc),
                }
            }
            left.sort_by(|a, b| b.slope.cmp(&a.slope));
            right.sort_by(|a, b| a.slope.cmp(&b.slope));
            left.extend(right);
            vertices.push(GraphVertex { position: v.position.clone(), incident_ends: left });
        }
        Ok(LegendrianGraphFront { diagram, vertices, edges })
    }

    /// Build from vertex positions and edges given as (source, target, polyline).
    pub fn from_edges(positions: &[FrontPoint], edges: Vec<(usize, usize, Vec<FrontPoint>)>) -> Result<Self, GraphError> {
        let mut vertices: Vec<DiagramVertex> =
            positions.iter().map(|p| DiagramVertex { position: p.clone(), ends: vec![] }).collect();
        let mut strands = vec![];
        for (si, (s, t, pts)) in edges.into_iter().enumerate() {
            for (v, end) in [(s, End::Start), (t, End::End)] {
                vertices
                    .get_mut(v)
                    .ok_or_else(|| GraphError::Schema(format!("edge {si}: no vertex {v}")))?
                    .ends
                    .push(StrandEnd { strand: si, end });
            }
            strands.push(FrontStrand::open(pts));
        }
        Self::from_diagram(FrontDiagram { strands, vertices })
    }

    pub fn edge_front(&self, edge: usize) -> &FrontStrand {
        &self.diagram.strands[self.edges[edge].strand]
    }

    pub fn incidence(&self, edge: usize, end: EdgeEnd) -> &Incidence {
        let v = &self.vertices[self.edges[edge].vertex(end)];
        &v.incident_ends[v.position_of(edge, end).expect("incidence recorded")]
    }

    pub fn to_document(&self) -> String {
        let doc = LgfDocument {
            format: LGF_FORMAT.into(),
            version: LGF_VERSION,
            diagram: self.diagram.clone(),
            edges: self.edges.clone(),
        };
        serde_json::to_string_pretty(&doc).expect("serializable")
    }

    pub fn translated(&self, dz: &Q) -> Self {
        let mut g = self.clone();
        g.diagram = self.diagram.translated(dz);
        for v in &mut g.vertices {
            v.position = v.position.shifted(dz);
        }
        g
    }

    /// Collar radius per vertex: a quarter of the shortest clean prefix among its
    /// incidences, where the clean prefix of an end is the y-extent of its first
    /// edge segment, cut at the nearest crossing on that segment.
    pub fn collar_radii(&self) -> Vec<Q> {
        let xs = crossings(&self.diagram);
        self.vertices
            .iter()
            .map(|v| {
                let mut best: Option<Q> = None;
                for inc in &v.incident_ends {
                    let strand = self.edges[inc.edge].strand;
                    let s = &self.diagram.strands[strand];
                    let seg = match inc.end {
                        EdgeEnd::Source => 0,
                        EdgeEnd::Target => s.edge_count() - 1,
                    };
                    let (a, b) = s.edge(seg);
                    let mut len = (&b.y - &a.y).abs();
                    for c in &xs {
                        for r in [c.over, c.under] {
                            if r.strand == strand && r.edge == seg {
                                let d = (&c.point.y - &v.position.y).abs();
                                if d < len {
                                    len = d;
                                }
                            }
                        }
                    }
                    best = Some(match best {
                        Some(b) if b <= len => b,
                        _ => len,
                    });
                }
                best.expect("vertices have incidences") / q(4)
            })
            .collect()
    }
}


pub fn parse_graph(text: &str) -> Result<LegendrianGraphFront, GraphError> {
    let doc: LgfDocument = serde_json::from_str(text).map_err(|e| GraphError::Schema(e.to_string()))?;
    if doc.format != LGF_FORMAT {
        return Err(GraphError::Schema(format!("expected format {LGF_FORMAT}, found {}", doc.format)));
    }
    if doc.version != LGF_VERSION {
        return Err(GraphError::Schema(format!("unsupported version {}", doc.version)));
    }
    LegendrianGraphFront::assemble(doc.diagram, doc.edges)
}

/// Collar distances (in y) at the two ends of an edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HandleExtent {
    pub source: Q,
    pub target: Q,
}

/// Point of the end segment at y-distance `r` from the vertex.
pub fn point_at_distance(strand: &FrontStrand, end: EdgeEnd, r: &Q) -> FrontPoint {
    let (v, w) = match end {
        EdgeEnd::Source => (&strand.points[0], &strand.points[1]),
        EdgeEnd::Target => (&strand.points[strand.points.len() - 1], &strand.points[strand.points.len() - 2]),
    };
    let dy = &w.y - &v.y;
    let t = r / dy.abs();
    FrontPoint::new(&v.y + &t * &dy, &v.z + &t * (&w.z - &v.z))
}

/// The core sub-polyline of an edge between its two collar points. Collars that
/// would reach past the first corner are shrunk to half of that segment.
pub fn edge_core_segments(
    graph: &LegendrianGraphFront,
    edge: usize,
    extent: &HandleExtent,
) -> Result<FrontStrand, GraphError> {
    let s = graph.edge_front(edge);
    if !extent.source.is_positive() || !extent.target.is_positive() {
        return Err(GraphError::DegenerateExtent { edge });
    }
    let m = s.edge_count();
    let first = s.edge(0);
    let last = s.edge(m - 1);
    let len_first = (&first.1.y - &first.0.y).abs();
    let len_last = (&last.1.y - &last.0.y).abs();
    let mut rs = extent.source.clone();
    let mut rt = extent.target.clone();
    if m == 1 {
        if &rs + &rt >= len_first {
            rs = &len_first / q(4);
            rt = rs.clone();
        }
    } else {
        if rs >= len_first {
            rs = &len_first / q(2);
        }
        if rt >= len_last {
            rt = &len_last / q(2);
        }
    }
    let mut pts = vec![point_at_distance(s, EdgeEnd::Source, &rs)];
    pts.extend(s.points[1..s.points.len() - 1].iter().cloned());
    pts.push(point_at_distance(s, EdgeEnd::Target, &rt));
    Ok(FrontStrand::open(pts))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::front_model::{qr, DiagramVertex};

    fn two_unknots_wedged() -> FrontDiagram {
        let a = FrontStrand::from_ints(&[(0, 0), (1, 1), (0, 2), (-1, 1), (0, 0)], false);
        let b = FrontStrand::from_ints(&[(0, 0), (1, -2), (0, -4), (-1, -2), (0, 0)], false);
        FrontDiagram {
            strands: vec![a, b],
            vertices: vec![DiagramVertex {
                position: FrontPoint::int(0, 0),
                ends: vec![
                    StrandEnd { strand: 0, end: End::Start },
                    StrandEnd { strand: 0, end: End::End },
                    StrandEnd { strand: 1, end: End::Start },
                    StrandEnd { strand: 1, end: End::End },
                ],
            }],
        }
    }

    #[test]
    fn wedge_of_two_unknots() {
        let g = LegendrianGraphFront::from_diagram(two_unknots_wedged()).unwrap();
        assert_eq!(g.vertices.len(), 1);
        assert_eq!(g.edges.len(), 2);
        assert_eq!(g.vertices[0].valency(), 4);
        let order: Vec<(usize, EdgeEnd)> = g.vertices[0].incident_ends.iter().map(|i| (i.edge, i.end)).collect();
        assert_eq!(
            order,
            vec![(1, EdgeEnd::Target), (0, EdgeEnd::Target), (1, EdgeEnd::Source), (0, EdgeEnd::Source)]
        );
    }

    #[test]
    fn cyclic_order_survives_translation() {
        let g = LegendrianGraphFront::from_diagram(two_unknots_wedged()).unwrap();
        let t = LegendrianGraphFront::from_diagram(g.diagram.translated(&qr(7, 3))).unwrap();
        let key = |g: &LegendrianGraphFront| -> Vec<(usize, EdgeEnd)> {
            g.vertices[0].incident_ends.iter().map(|i| (i.edge, i.end)).collect()
        };
        assert_eq!(key(&g), key(&t));
    }

    #[test]
    fn document_round_trip() {
        let g = LegendrianGraphFront::from_diagram(two_unknots_wedged()).unwrap();
        let doc = g.to_document();
        let back = parse_graph(&doc).unwrap();
        assert_eq!(back, g);
        assert_eq!(back.to_document(), doc);
    }

    #[test]
    fn valency_one_rejected() {
        let a = FrontStrand::from_ints(&[(0, 0), (2, 1)], false);
        let d = FrontDiagram {
            strands: vec![a],
            vertices: vec![
                DiagramVertex { position: FrontPoint::int(0, 0), ends: vec![StrandEnd { strand: 0, end: End::Start }] },
                DiagramVertex { position: FrontPoint::int(2, 1), ends: vec![StrandEnd { strand: 0, end: End::End }] },
            ],
        };
        assert_eq!(LegendrianGraphFront::from_diagram(d), Err(GraphError::ValencyOneVertex(0)));
    }

    #[test]
    fn bad_format_is_schema_error() {
        assert!(matches!(parse_graph("{\"format\": \"LGF\"}"), Err(GraphError::Schema(_))));
    }

    #[test]
    fn straight_core_with_ten_percent_collars() {
        // theta-like graph with straight edges between two vertices
        let e0 = FrontStrand::from_ints(&[(0, 0), (10, 0)], false);
        let e1 = FrontStrand::from_ints(&[(0, 0), (5, 3), (10, 0)], false);
        let d = FrontDiagram {
            strands: vec![e0, e1],
            vertices: vec![
                DiagramVertex {
                    position: FrontPoint::int(0, 0),
                    ends: vec![StrandEnd { strand: 0, end: End::Start }, StrandEnd { strand: 1, end: End::Start }],
                },
                DiagramVertex {
                    position: FrontPoint::int(10, 0),
                    ends: vec![StrandEnd { strand: 0, end: End::End }, StrandEnd { strand: 1, end: End::End }],
                },
            ],
        };
        let g = LegendrianGraphFront::from_diagram(d).unwrap();
        let core = edge_core_segments(&g, 0, &HandleExtent { source: q(1), target: q(1) }).unwrap();
        assert_eq!(core.points, vec![FrontPoint::int(1, 0), FrontPoint::int(9, 0)]);
        let core1 = edge_core_segments(&g, 1, &HandleExtent { source: q(1), target: q(1) }).unwrap();
        assert_eq!(core1.points.len(), 3);
        assert_eq!(core1.points[0], FrontPoint::new(q(1), qr(3, 5)));
        assert_eq!(g.collar_radii(), vec![qr(5, 4), qr(5, 4)]);
    }

    #[test]
    fn core_keeps_interior_cusp() {
        let g = LegendrianGraphFront::from_diagram(two_unknots_wedged()).unwrap();
        let core = edge_core_segments(&g, 0, &HandleExtent { source: qr(1, 4), target: qr(1, 4) }).unwrap();
        assert_eq!(core.cusps.len(), 2);
        assert_eq!(core.start(), &FrontPoint::new(qr(1, 4), qr(1, 4)));
    }
}
