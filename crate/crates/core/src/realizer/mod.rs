//! Legendrian realization of a simple closed curve on the ribbon of a front.
//!
//! Pipeline: subdivide the curve, assign relative gains per band pass, balance
//! them on a distinguished odd handle, integrate the gains into a prominence
//! profile, then build vertically displaced copies of the skeleton per handle
//! and glue them into one closed front.

mod fragment;
mod layout;

use std::collections::BTreeMap;

use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::curve_model::{subdivide, validate_curve, CurveError, CurveOnRibbon, Direction, Segment, SegmentList};
use crate::front_model::{
    self, check_embedded, check_generic, closure_integral, q, rational, rotation_number, thurston_bennequin,
    FrontDiagram, FrontStrand, ValidationReport, Q,
};
use crate::legendrian_graph::{GraphError, LegendrianGraphFront};
use crate::ribbon::{build_ribbon, pass_parity, AbstractRibbon, Z2Class};

pub use fragment::{
    build_one_handle_fragment, build_zero_handle_fragment, glue, itinerary, ChordPiece, Fragments, HandleFragment,
    Node, PassPiece, PassSpec, ChordSpec,
};
pub use layout::{BandGeometry, Gap, Layout};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RealizeError {
    #[error("invalid graph: {0}")]
    Graph(#[from] GraphError),
    #[error("invalid curve: {0}")]
    Curve(#[from] CurveError),
    #[error("curve is homologically trivial: every cocore is crossed an even number of times")]
    NoOddHandle { class: Z2Class },
    #[error("relative gains do not sum to zero (total {total})")]
    UnbalancedGains { total: String },
    #[error("no crossing-free piece on the core of handle {handle}")]
    GapNotFound { handle: usize },
    #[error("fragments do not meet after segment {segment}")]
    EndpointMismatch { segment: usize },
    #[error("no generic placement found after {attempts} attempts: {reason}")]
    PlacementFailed { attempts: usize, reason: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GainEntry {
    /// Index of the pass in the segment list.
    pub segment: usize,
    pub handle: usize,
    pub direction: Direction,
    pub rank: usize,
    pub k: usize,
    #[serde(with = "rational")]
    pub a: Q,
    pub raw: i64,
    pub sign: i64,
    #[serde(with = "rational")]
    pub gain: Q,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GainTable {
    pub entries: Vec<GainEntry>,
}

impl GainTable {
    pub fn total(&self) -> Q {
        self.entries.iter().fold(q(0), |acc, e| acc + &e.gain)
    }

    pub fn gain_of(&self, segment: usize) -> Option<&Q> {
        self.entries.iter().find(|e| e.segment == segment).map(|e| &e.gain)
    }
}

/// Prominence at both ends of every segment.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProminenceMap {
    #[serde(with = "rational::vec")]
    pub start: Vec<Q>,
    #[serde(with = "rational::vec")]
    pub end: Vec<Q>,
}

impl ProminenceMap {
    pub fn range(&self) -> (Q, Q) {
        let all = || self.start.iter().chain(&self.end);
        (all().min().cloned().unwrap_or_else(|| q(0)), all().max().cloned().unwrap_or_else(|| q(0)))
    }

    /// Smallest positive difference between two prominence values, if any.
    pub fn min_difference(&self) -> Option<Q> {
        let mut vals: Vec<&Q> = self.start.iter().chain(&self.end).collect();
        vals.sort();
        vals.dedup();
        vals.windows(2).map(|w| w[1] - w[0]).min()
    }
}

fn raw_from_a(a: &Q) -> i64 {
    if a.is_negative() {
        rational::floor_i64(a)
    } else if a.is_zero() {
        0
    } else {
        rational::ceil_i64(a)
    }
}

fn a_value(h: usize, k: usize) -> Q {
    q(h as i64) - Q::new((k as i64 + 1).into(), 2.into())
}

/// Integer gains of the `k` strands of a handle, bottom to top.
pub fn relative_gain_raw(k: usize) -> Vec<i64> {
    (1..=k).map(|h| raw_from_a(&a_value(h, k))).collect()
}

pub fn relative_gain(segments: &SegmentList) -> GainTable {
    let mut k: BTreeMap<usize, usize> = BTreeMap::new();
    for (_, p) in segments.passes() {
        *k.entry(p.handle).or_default() += 1;
    }
    let entries = segments
        .passes()
        .map(|(i, p)| {
            let kh = k[&p.handle];
            let a = a_value(p.rank, kh);
            let raw = raw_from_a(&a);
            let sign = p.direction.sign();
            GainEntry {
                segment: i,
                handle: p.handle,
                direction: p.direction,
                rank: p.rank,
                k: kh,
                a,
                raw,
                sign,
                gain: q(sign * raw),
            }
        })
        .collect();
    GainTable { entries }
}

pub fn select_distinguished_handle(r: &AbstractRibbon, segments: &SegmentList) -> Result<usize, RealizeError> {
    let class = pass_parity(r, &segments.curve());
    class.0.iter().position(|&b| b == 1).ok_or(RealizeError::NoOddHandle { class })
}

/// Spread the total gain over the passes of `hstar`; returns the new table and θ.
pub fn balance(gains: &GainTable, hstar: usize) -> (GainTable, Q) {
    let theta = gains.total();
    let count = |d: Direction| gains.entries.iter().filter(|e| e.handle == hstar && e.direction == d).count() as i64;
    let diff = count(Direction::WithCore) - count(Direction::AgainstCore);
    let mut out = gains.clone();
    if theta.is_zero() || diff == 0 {
        return (out, theta);
    }
    let share = &theta / q(diff);
    for e in out.entries.iter_mut().filter(|e| e.handle == hstar) {
        match e.direction {
            Direction::WithCore => e.gain -= &share,
            Direction::AgainstCore => e.gain += &share,
        }
    }
    (out, theta)
}

pub fn prominence(segments: &SegmentList, gains: &GainTable) -> Result<ProminenceMap, RealizeError> {
    let total = gains.total();
    if !total.is_zero() {
        return Err(RealizeError::UnbalancedGains { total: rational::display(&total) });
    }
    let by_seg: BTreeMap<usize, &Q> = gains.entries.iter().map(|e| (e.segment, &e.gain)).collect();
    let n = segments.len();
    let mut start = Vec::with_capacity(n);
    let mut end = Vec::with_capacity(n);
    let mut p = q(0);
    for i in 0..n {
        start.push(p.clone());
        if let Some(g) = by_seg.get(&i) {
            p += *g;
        }
        end.push(p.clone());
    }
    if !p.is_zero() {
        return Err(RealizeError::UnbalancedGains { total: rational::display(&p) });
    }
    Ok(ProminenceMap { start, end })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RealizerParams {
    pub epsilon: Option<Q>,
    pub mu: Option<Q>,
    pub start_pass: Option<usize>,
    pub reverse: bool,
    pub max_attempts: usize,
    pub seed: u64,
}

impl Default for RealizerParams {
    fn default() -> Self {
        RealizerParams { epsilon: None, mu: None, start_pass: None, reverse: false, max_attempts: 40, seed: 0x5eed }
    }
}

/// Combinatorial data computed before any geometry.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Plan {
    pub segments: SegmentList,
    pub raw_gains: GainTable,
    #[serde(with = "rational")]
    pub theta: Q,
    pub distinguished_handle: usize,
    pub gains: GainTable,
    pub prominence: ProminenceMap,
}

pub fn plan(r: &AbstractRibbon, curve: &CurveOnRibbon, params: &RealizerParams) -> Result<Plan, RealizeError> {
    validate_curve(r, curve).into_result()?;
    let segments = subdivide(r, curve, params.start_pass, params.reverse);
    let hstar = select_distinguished_handle(r, &segments)?;
    let raw_gains = relative_gain(&segments);
    let (gains, theta) = balance(&raw_gains, hstar);
    let prominence = prominence(&segments, &gains)?;
    Ok(Plan { segments, raw_gains, theta, distinguished_handle: hstar, gains, prominence })
}

/// Per-attempt placement: vertical units and the perturbation applied to ranks,
/// connector lengths and chord endpoints.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Placement {
    pub epsilon: Q,
    pub mu: Q,
    /// Indexed by segment: rank jitter in `[0, 1/2)`.
    pub jitter: Vec<Q>,
    /// Indexed by segment: connector length factors in `[1/2, 3/4)` for the two
    /// ends of a pass (entry, exit in core orientation: source, target).
    pub lambda: Vec<[Q; 2]>,
    /// Indexed by segment: chord endpoint nudges across the gap.
    pub nudge: Vec<[Q; 2]>,
}

impl Placement {
    pub fn unperturbed(n: usize, epsilon: Q, mu: Q) -> Self {
        Placement {
            epsilon,
            mu,
            jitter: vec![q(0); n],
            lambda: vec![[rational::qr(1, 2), rational::qr(1, 2)]; n],
            nudge: vec![[q(0), q(0)]; n],
        }
    }

    fn random(n: usize, epsilon: Q, mu: Q, rng: &mut ChaCha8Rng) -> Self {
        let mut frac = |den: i64| rational::qr(rng.gen_range(0..den), 2 * den);
        let jitter = (0..n).map(|_| frac(64)).collect();
        let lambda = (0..n).map(|_| [rational::qr(1, 2) + frac(64) / q(2), rational::qr(1, 2) + frac(64) / q(2)]).collect();
        let nudge = (0..n).map(|_| [frac(64), frac(64)]).collect();
        Placement { epsilon, mu, jitter, lambda, nudge }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct JumpCheck {
    pub segment: usize,
    #[serde(with = "rational")]
    pub expected: Q,
    #[serde(with = "rational")]
    pub actual: Q,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RealizationReport {
    pub plan: Plan,
    #[serde(with = "rational")]
    pub epsilon: Q,
    #[serde(with = "rational")]
    pub mu: Q,
    pub attempts: usize,
    pub tb: i64,
    pub rot: i64,
    pub crossings: usize,
    pub cusps: usize,
    #[serde(with = "rational")]
    pub closure_integral: Q,
    pub endpoint_match: bool,
    pub generic: ValidationReport,
    pub embedded: bool,
    pub components: usize,
    pub itinerary: Vec<(usize, Direction)>,
    pub itinerary_matches: bool,
    pub handle_counts_match: bool,
    pub jumps: Vec<JumpCheck>,
}

impl RealizationReport {
    pub fn is_clean(&self) -> bool {
        self.endpoint_match
            && self.closure_integral.is_zero()
            && self.generic.is_clean()
            && self.embedded
            && self.components == 1
            && self.itinerary_matches
            && self.handle_counts_match
            && self.jumps.iter().all(|j| j.expected == j.actual)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Realization {
    pub knot: FrontStrand,
    pub report: RealizationReport,
}

impl Realization {
    pub fn diagram(&self) -> FrontDiagram {
        FrontDiagram::knot(self.knot.clone())
    }
}

fn expected_word(segments: &SegmentList) -> Vec<(usize, Direction)> {
    segments.passes().map(|(_, p)| (p.handle, p.direction)).collect()
}

fn is_rotation<T: PartialEq>(a: &[T], b: &[T]) -> bool {
    a.len() == b.len() && (a.is_empty() || (0..a.len()).any(|s| (0..a.len()).all(|i| a[(s + i) % a.len()] == b[i])))
}

fn handle_counts(word: &[(usize, Direction)]) -> BTreeMap<(usize, Direction), usize> {
    let mut m = BTreeMap::new();
    for w in word {
        *m.entry(*w).or_default() += 1;
    }
    m
}

pub fn realize(
    graph: &LegendrianGraphFront,
    curve: &CurveOnRibbon,
    params: &RealizerParams,
) -> Result<Realization, RealizeError> {
    let ribbon = build_ribbon(graph);
    let plan = plan(&ribbon, curve, params)?;
    let layout = Layout::new(graph, &ribbon)?;
    realize_planned(&layout, plan, params)
}

/// Geometric stage; the plan may come from outside (tests corrupt it).
pub fn realize_planned(layout: &Layout, plan: Plan, params: &RealizerParams) -> Result<Realization, RealizeError> {
    let n = plan.segments.len();
    let (pmin, pmax) = plan.prominence.range();
    let mpd = plan.prominence.min_difference().unwrap_or_else(|| q(1));
    let kmax = layout.max_multiplicity(&plan.segments);
    let bound = layout.g_min.clone() / (q(2) * (&pmax - &pmin + &mpd / q(2)));
    let mut eps0 = match &params.epsilon {
        Some(e) if e.is_positive() => e.clone(),
        _ => rational::pow2_below(&bound),
    };
    while eps0 >= bound {
        eps0 /= q(2);
    }
    let mu_of = |eps: &Q| {
        let auto = eps * &mpd / q(2 * (kmax as i64 + 1));
        match &params.mu {
            Some(m) if m.is_positive() => {
                let mut m = m.clone();
                while m > auto {
                    m /= q(2);
                }
                m
            }
            _ => auto,
        }
    };
    let word = expected_word(&plan.segments);
    let mut last_reason = String::new();
    for attempt in 0..params.max_attempts.max(1) {
        let eps = &eps0 / q(1i64 << (attempt / 4).min(60));
        let mu = mu_of(&eps);
        let placement = if attempt == 0 {
            Placement::unperturbed(n, eps, mu)
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(params.seed.wrapping_add(attempt as u64));
            Placement::random(n, eps, mu, &mut rng)
        };
        let frags = fragment::build_fragments(layout, &plan, &placement)?;
        let knot = glue(&frags, &plan.segments)?;
        let d = FrontDiagram::knot(knot.clone());
        let generic = check_generic(&d);
        if !generic.is_clean() {
            last_reason = generic.violations.iter().map(|v| v.to_string()).next().unwrap_or_default();
            continue;
        }
        if !check_embedded(&knot) {
            last_reason = "lift is not embedded".into();
            continue;
        }
        let found = itinerary(layout, &knot);
        if !is_rotation(&found, &word) {
            last_reason = "itinerary differs from the curve".into();
            continue;
        }
        let jumps = frags
            .one
            .iter()
            .map(|p| JumpCheck {
                segment: p.segment,
                expected: &placement.epsilon * plan.gains.gain_of(p.segment).expect("pass has a gain"),
                actual: p.jump.clone(),
            })
            .collect();
        let tb = thurston_bennequin(&knot).map_err(|e| RealizeError::PlacementFailed {
            attempts: attempt + 1,
            reason: e.to_string(),
        })?;
        let rot = rotation_number(&knot).map_err(|e| RealizeError::PlacementFailed {
            attempts: attempt + 1,
            reason: e.to_string(),
        })?;
        let report = RealizationReport {
            epsilon: placement.epsilon.clone(),
            mu: placement.mu.clone(),
            attempts: attempt + 1,
            tb,
            rot,
            crossings: front_model::crossings(&d).len(),
            cusps: knot.cusps.len(),
            closure_integral: closure_integral(&knot),
            endpoint_match: true,
            generic,
            embedded: true,
            components: d.strands.len(),
            handle_counts_match: handle_counts(&found) == handle_counts(&word),
            itinerary_matches: true,
            itinerary: found,
            jumps,
            plan,
        };
        return Ok(Realization { knot, report });
    }
    Err(RealizeError::PlacementFailed { attempts: params.max_attempts.max(1), reason: last_reason })
}

/// Pass data of segment `i`, if it is a pass.
pub(crate) fn pass_at(segments: &SegmentList, i: usize) -> Option<(usize, Direction, usize)> {
    match segments.segments[i] {
        Segment::Pass { handle, direction, rank, .. } => Some((handle, direction, rank)),
        _ => None,
    }
}

#[cfg(test)]
mod tests;
