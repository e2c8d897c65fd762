//! Legendrian lift and classical invariants of closed fronts.

use serde::{Deserialize, Serialize};

use super::{analyze, q, qr, FrontDiagram, FrontError, FrontPoint, FrontStrand, Q};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LiftedPoint {
    #[serde(with = "super::rational")]
    pub x: Q,
    #[serde(with = "super::rational")]
    pub y: Q,
    #[serde(with = "super::rational")]
    pub z: Q,
}

/// Two samples per edge, both carrying that edge's `x = -slope`. Read in order they
/// form the lifted polyline; consecutive samples at a shared front point differ
/// only in `x`.
pub fn lift(strand: &FrontStrand) -> Result<Vec<LiftedPoint>, FrontError> {
    let mut out = Vec::with_capacity(2 * strand.edge_count());
    for e in 0..strand.edge_count() {
        let (a, b) = strand.edge(e);
        let x = -strand.slope(e).ok_or(FrontError::VerticalEdge { edge: e, at: a.to_string() })?;
        out.push(LiftedPoint { x: x.clone(), y: a.y.clone(), z: a.z.clone() });
        out.push(LiftedPoint { x, y: b.y.clone(), z: b.z.clone() });
    }
    Ok(out)
}

/// Sum of `x * dy` over the edges; vertical edges contribute their `dz` so the
/// identity `z(start) - z(end)` always holds.
pub fn closure_integral(strand: &FrontStrand) -> Q {
    let mut acc = q(0);
    for e in 0..strand.edge_count() {
        let (a, b) = strand.edge(e);
        let dy = &b.y - &a.y;
        match strand.slope(e) {
            Some(s) => acc -= s * dy,
            None => acc -= &b.z - &a.z,
        }
    }
    acc
}

fn require_generic_closed(knot: &FrontStrand) -> Result<FrontDiagram, FrontError> {
    if !knot.closed {
        return Err(FrontError::NotClosed);
    }
    let d = FrontDiagram::knot(knot.clone());
    Ok(d)
}

pub fn writhe(knot: &FrontStrand) -> Result<i64, FrontError> {
    let d = require_generic_closed(knot)?;
    let a = analyze(&d);
    if let Some(v) = a.violations.first() {
        return Err(FrontError::NotGeneric(v.to_string()));
    }
    Ok(a.crossings.iter().map(|c| c.sign as i64).sum())
}

pub fn thurston_bennequin(knot: &FrontStrand) -> Result<i64, FrontError> {
    let w = writhe(knot)?;
    let c = knot.cusps.len();
    if c % 2 == 1 {
        return Err(FrontError::OddCuspCount(c));
    }
    Ok(w - (c / 2) as i64)
}

/// Half of (downward cusps minus upward cusps), following the orientation.
pub fn rotation_number(knot: &FrontStrand) -> Result<i64, FrontError> {
    let _ = require_generic_closed(knot)?;
    let (mut down, mut up) = (0i64, 0i64);
    for &c in &knot.cusps {
        let (ea, eb) = knot.edges_at(c);
        let (si, so) = (
            knot.slope(ea).ok_or(FrontError::VerticalEdge { edge: ea, at: knot.points[c].to_string() })?,
            knot.slope(eb).ok_or(FrontError::VerticalEdge { edge: eb, at: knot.points[c].to_string() })?,
        );
        let right = knot.dy_sign(ea) > 0;
        let is_down = if right { si < so } else { si > so };
        if is_down {
            down += 1;
        } else {
            up += 1;
        }
    }
    if (down + up) % 2 == 1 {
        return Err(FrontError::OddCuspCount((down + up) as usize));
    }
    Ok((down - up) / 2)
}

/// Linking number of strands `a` and `b` of a generic diagram of closed fronts.
pub fn linking_number(d: &FrontDiagram, a: usize, b: usize) -> Result<i64, FrontError> {
    let an = analyze(d);
    if let Some(v) = an.violations.first() {
        return Err(FrontError::NotGeneric(v.to_string()));
    }
    let total: i64 = an
        .crossings
        .iter()
        .filter(|c| {
            let (s, t) = (c.over.strand, c.under.strand);
            (s == a && t == b) || (s == b && t == a)
        })
        .map(|c| c.sign as i64)
        .sum();
    Ok(total / 2)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stabilization {
    /// Two downward cusps: rotation number goes up by one.
    Positive,
    /// Two upward cusps: rotation number goes down by one.
    Negative,
}

/// Insert a zigzag in the middle of edge `edge`; `size` is the vertical excursion.
pub fn stabilize(strand: &FrontStrand, edge: usize, kind: Stabilization, size: &Q) -> FrontStrand {
    let (p, qq) = strand.edge(edge);
    let dy = &qq.y - &p.y;
    let s = strand.slope(edge).expect("non-vertical edge");
    let c = match kind {
        Stabilization::Positive => size.clone(),
        Stabilization::Negative => -size.clone(),
    };
    let at = |t: Q, off: Q| {
        let y = &p.y + &t * &dy;
        let z = &p.z + &s * (&t * &dy) + off;
        FrontPoint::new(y, z)
    };
    let a = at(qr(3, 5), c.clone());
    let b = at(qr(2, 5), -c);
    let mut points = strand.points.clone();
    points.splice(edge + 1..edge + 1, [a, b]);
    if strand.closed {
        FrontStrand::closed(points)
    } else {
        FrontStrand::open(points)
    }
}
