//! Packaged inputs: small graphs and curves used by the tests and the CLI.

use crate::curve_model::{CurveOnRibbon, Direction, Pass};
use crate::front_model::{q, qr, FrontPoint};
use crate::legendrian_graph::LegendrianGraphFront;

use Direction::{AgainstCore as A, WithCore as W};

fn pt(y: i64, z: i64) -> FrontPoint {
    FrontPoint::int(y, z)
}

fn pts(v: &[(i64, i64)]) -> Vec<FrontPoint> {
    v.iter().map(|&(y, z)| pt(y, z)).collect()
}

fn curve(passes: &[(usize, Direction, usize)]) -> CurveOnRibbon {
    CurveOnRibbon::new(passes.iter().map(|&(h, d, r)| Pass::new(h, d, r)).collect())
}

/// A single vertex with one loop edge shaped like the standard unknot front.
pub fn diamond_loop() -> LegendrianGraphFront {
    LegendrianGraphFront::from_edges(&[pt(0, 0)], vec![(0, 0, pts(&[(0, 0), (1, 1), (0, 2), (-1, 1), (0, 0)]))])
        .expect("generic")
}

pub fn diamond_curve() -> CurveOnRibbon {
    curve(&[(0, W, 1)])
}

/// Theta graph between two vertices; the third edge crosses the first once.
pub fn theta_with_crossing() -> LegendrianGraphFront {
    LegendrianGraphFront::from_edges(
        &[pt(0, 0), pt(10, 0)],
        vec![
            (0, 1, pts(&[(0, 0), (5, 3), (10, 0)])),
            (0, 1, pts(&[(0, 0), (5, -3), (10, 0)])),
            (0, 1, pts(&[(0, 0), (7, 3), (10, 0)])),
        ],
    )
    .expect("generic")
}

pub fn theta_curve() -> CurveOnRibbon {
    curve(&[(0, W, 1), (2, A, 1)])
}

/// Three vertices `u, v, w`, a triangle `X, Y, Z` (with a cusp on `Y`) and loops
/// `H`, `W` at `u` and `U` at `v`. Edge ids: X=0, Y=1, Z=2, H=3, W=4, U=5.
pub fn worked_example() -> LegendrianGraphFront {
    let u = pt(0, 0);
    let v = pt(6, 12);
    let w = pt(6, -6);
    let p = |y: crate::front_model::Q, z: crate::front_model::Q| FrontPoint::new(y, z);
    LegendrianGraphFront::from_edges(
        &[u.clone(), v.clone(), w.clone()],
        vec![
            (0, 1, vec![u.clone(), v.clone()]),
            (1, 2, vec![v.clone(), pt(9, 3), w.clone()]),
            (2, 0, vec![w.clone(), u.clone()]),
            (0, 0, vec![u.clone(), p(q(-1), qr(-6, 5)), pt(-2, -1), u.clone()]),
            (0, 0, vec![u.clone(), p(q(2), qr(3, 4)), p(q(1), qr(5, 4)), u.clone()]),
            (1, 1, vec![v.clone(), p(qr(15, 2), q(13)), p(q(7), qr(27, 2)), v.clone()]),
        ],
    )
    .expect("generic")
}

/// Eight passes, sixteen segments.
pub fn worked_example_curve() -> CurveOnRibbon {
    curve(&[(0, W, 1), (1, W, 1), (2, W, 1), (4, W, 1), (2, A, 2), (1, A, 2), (0, A, 2), (3, W, 1)])
}

/// The value printed for the gain of the last pass in the worked example.
pub const WORKED_EXAMPLE_PRINTED_LAST_GAIN: i64 = 5;

/// Two edges between two vertices that run along a common piece with equal slopes.
pub fn tangential_crossing() -> crate::front_model::FrontDiagram {
    use crate::front_model::{DiagramVertex, End, FrontDiagram, FrontStrand, StrandEnd};
    let a = FrontStrand::from_ints(&[(0, 0), (4, 4), (8, 0)], false);
    let b = FrontStrand::from_ints(&[(0, 0), (2, -2), (3, 3), (5, 5), (8, 0)], false);
    FrontDiagram {
        strands: vec![a, b],
        vertices: vec![
            DiagramVertex {
                position: pt(0, 0),
                ends: vec![StrandEnd { strand: 0, end: End::Start }, StrandEnd { strand: 1, end: End::Start }],
            },
            DiagramVertex {
                position: pt(8, 0),
                ends: vec![StrandEnd { strand: 0, end: End::End }, StrandEnd { strand: 1, end: End::End }],
            },
        ],
    }
}

/// Two diamond loops wedged at one vertex with interleaved ends.
pub fn wedge_of_unknots() -> LegendrianGraphFront {
    LegendrianGraphFront::from_edges(
        &[pt(0, 0)],
        vec![
            (0, 0, pts(&[(0, 0), (1, 1), (0, 2), (-1, 1), (0, 0)])),
            (0, 0, pts(&[(0, 0), (1, -2), (0, -4), (-1, -2), (0, 0)])),
        ],
    )
    .expect("generic")
}

/// The boundary of the wedge ribbon pushed inside: crosses each cocore twice.
pub fn wedge_boundary_curve() -> CurveOnRibbon {
    let r = crate::ribbon::build_ribbon(&wedge_of_unknots());
    let b = crate::ribbon::boundary_components(&r);
    crate::curve_model::boundary_parallel(&b.words[0])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::front_model::ViolationKind;
    use crate::legendrian_graph::GraphError;

    #[test]
    fn tangential_fixture_is_rejected() {
        match LegendrianGraphFront::from_diagram(tangential_crossing()) {
            Err(GraphError::Genericity(v)) => {
                assert!(v.iter().any(|x| x.kind == ViolationKind::TangentialCrossing), "{:?}", v)
            }
            other => panic!("{:?}", other),
        }
    }
}
