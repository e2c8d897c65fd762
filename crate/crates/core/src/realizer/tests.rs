use super::*;
use crate::fixtures;
use crate::ribbon::{boundary_components, build_ribbon};

#[test]
fn gains_bottom_to_top() {
    assert_eq!(relative_gain_raw(1), vec![0]);
    assert_eq!(relative_gain_raw(5), vec![-2, -1, 0, 1, 2]);
    assert_eq!(relative_gain_raw(4), vec![-2, -1, 1, 2]);
}

#[test]
fn minimal_curve_realizes_as_translate() {
    let g = fixtures::diamond_loop();
    let r = realize(&g, &fixtures::diamond_curve(), &RealizerParams::default()).unwrap();
    assert!(r.report.is_clean(), "{:#?}", r.report);
    assert_eq!(r.report.tb, -1);
    assert_eq!(r.report.rot, 0);
    assert_eq!(r.report.plan.prominence.start, vec![q(0), q(0)]);
}

#[test]
fn theta_curve_realizes() {
    let g = fixtures::theta_with_crossing();
    let r = realize(&g, &fixtures::theta_curve(), &RealizerParams::default()).unwrap();
    assert!(r.report.is_clean(), "{:#?}", r.report);
}

#[test]
fn worked_example_realizes() {
    let g = fixtures::worked_example();
    let r = realize(&g, &fixtures::worked_example_curve(), &RealizerParams::default()).unwrap();
    assert!(r.report.is_clean(), "{:#?}", r.report);
    assert_eq!(r.report.plan.segments.len(), 16);
    assert_eq!(r.report.plan.distinguished_handle, 3);
}

#[test]
fn boundary_curve_is_trivial() {
    let g = fixtures::wedge_of_unknots();
    let c = fixtures::wedge_boundary_curve();
    let rb = build_ribbon(&g);
    assert!(validate_curve(&rb, &c).is_valid());
    assert!(matches!(realize(&g, &c, &RealizerParams::default()), Err(RealizeError::NoOddHandle { .. })));
}

#[test]
fn boundary_pushoffs_are_valid_curves() {
    for g in [fixtures::worked_example(), fixtures::theta_with_crossing(), fixtures::wedge_of_unknots()] {
        let rb = build_ribbon(&g);
        for w in boundary_components(&rb).words {
            let c = crate::curve_model::boundary_parallel(&w);
            assert!(validate_curve(&rb, &c).is_valid(), "{:?}", validate_curve(&rb, &c));
        }
    }
}

#[test]
fn balance_examples() {
    let mk = |d: Direction, gain: i64| GainEntry {
        segment: 0,
        handle: 0,
        direction: d,
        rank: 1,
        k: 3,
        a: q(0),
        raw: 0,
        sign: d.sign(),
        gain: q(gain),
    };
    let t = GainTable { entries: vec![mk(Direction::WithCore, 0), mk(Direction::WithCore, 0), mk(Direction::AgainstCore, 0)] };
    let mut extra = t.clone();
    extra.entries.push(GainEntry { handle: 1, ..mk(Direction::WithCore, 3) });
    let (b, theta) = balance(&extra, 0);
    assert_eq!(theta, q(3));
    // share θ/(k+ - k-) = 3 on each pass of the handle
    assert_eq!(b.entries[0].gain, q(-3));
    assert_eq!(b.entries[1].gain, q(-3));
    assert_eq!(b.entries[2].gain, q(3));
    assert_eq!(b.total(), q(0));
    let (same, z) = balance(&t, 0);
    assert_eq!((same, z), (t, q(0)));
    let one = GainTable { entries: vec![mk(Direction::WithCore, 0), GainEntry { handle: 1, ..mk(Direction::WithCore, -5) }] };
    assert_eq!(balance(&one, 0).0.entries[0].gain, q(5));
}

#[test]
fn corrupted_gain_breaks_gluing() {
    let g = fixtures::worked_example();
    let rb = build_ribbon(&g);
    let params = RealizerParams::default();
    let mut p = plan(&rb, &fixtures::worked_example_curve(), &params).unwrap();
    p.gains.entries[0].gain += q(1);
    p.prominence.end[0] += q(1);
    let layout = Layout::new(&g, &rb).unwrap();
    let err = realize_planned(&layout, p, &params).unwrap_err();
    assert!(matches!(err, RealizeError::EndpointMismatch { .. }), "{err}");
}

#[test]
fn reversed_and_restarted_curves_realize() {
    let g = fixtures::worked_example();
    let c = fixtures::worked_example_curve();
    let rb = build_ribbon(&g);
    assert!(validate_curve(&rb, &c.reversed()).is_valid());
    for params in [
        RealizerParams { reverse: true, ..RealizerParams::default() },
        RealizerParams { start_pass: Some(3), ..RealizerParams::default() },
    ] {
        let r = realize(&g, &c, &params).unwrap();
        assert!(r.report.is_clean(), "{:#?}", r.report);
    }
}

#[test]
fn explicit_epsilon_is_kept_when_small() {
    let g = fixtures::diamond_loop();
    let params = RealizerParams { epsilon: Some(q(1) / q(1024)), ..RealizerParams::default() };
    let r = realize(&g, &fixtures::diamond_curve(), &params).unwrap();
    assert_eq!(r.report.epsilon, q(1) / q(1024));
}

#[test]
fn jumps_equal_scaled_gains() {
    let r = realize(&fixtures::worked_example(), &fixtures::worked_example_curve(), &RealizerParams::default()).unwrap();
    assert_eq!(r.report.jumps.len(), 8);
    for j in &r.report.jumps {
        assert_eq!(j.expected, j.actual);
    }
}
