//! Random and exhaustive instance generators for property tests.

use std::collections::{BTreeMap, BTreeSet};

use itertools::Itertools;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::curve_model::{CurveOnRibbon, Direction, Pass};
use crate::front_model::FrontPoint;
use crate::legendrian_graph::{EdgeEnd, LegendrianGraphFront};
use crate::ribbon::{AbstractRibbon, HalfEdge};

/// Seed for randomized harnesses: `LEGREAL_SEED` if set, else `default`.
pub fn seed_from_env(default: u64) -> u64 {
    std::env::var("LEGREAL_SEED").ok().and_then(|s| s.trim().parse().ok()).unwrap_or(default)
}

fn random_edge<R: Rng>(rng: &mut R, a: &FrontPoint, b: &FrontPoint, cusps: usize) -> Option<Vec<FrontPoint>> {
    let span = 12i64;
    let ai = (a.y.to_integer(), b.y.to_integer());
    let (ya, yb): (i64, i64) = (ai.0.try_into().ok()?, ai.1.try_into().ok()?);
    let (lo, hi) = (ya.min(yb), ya.max(yb));
    let z = |rng: &mut R| rng.gen_range(-span * 2..=span * 3);
    let mut pts = vec![a.clone()];
    match cusps {
        0 => {
            if ya == yb {
                return None;
            }
            if hi - lo >= 2 && rng.gen_bool(0.7) {
                pts.push(FrontPoint::int(rng.gen_range(lo + 1..hi), z(rng)));
            }
        }
        1 => {
            if rng.gen_bool(0.5) {
                pts.push(FrontPoint::int(rng.gen_range(hi + 1..=hi + span), z(rng)));
            } else {
                pts.push(FrontPoint::int(rng.gen_range(lo - span..lo), z(rng)));
            }
        }
        _ => {
            let up = FrontPoint::int(rng.gen_range(hi + 1..=hi + span), z(rng));
            let down = FrontPoint::int(rng.gen_range(lo - span..lo), z(rng));
            if rng.gen_bool(0.5) {
                pts.extend([up, down]);
            } else {
                pts.extend([down, up]);
            }
        }
    }
    pts.push(b.clone());
    Some(pts)
}

/// A random generic graph front with at most `max_vertices` vertices and
/// `max_edges` edges, every vertex of valency at least two.
pub fn random_graph<R: Rng>(rng: &mut R, max_vertices: usize, max_edges: usize) -> LegendrianGraphFront {
    loop {
        let nv = rng.gen_range(1..=max_vertices.max(1));
        let mut ys: Vec<i64> = (0..nv).map(|_| rng.gen_range(0..40)).collect();
        ys.sort();
        ys.dedup();
        let positions: Vec<FrontPoint> = ys.iter().map(|&y| FrontPoint::int(y, rng.gen_range(0..40))).collect();
        let nv = positions.len();
        let ne = rng.gen_range(1..=max_edges.max(1));
        let mut edges = vec![];
        for _ in 0..ne {
            let (s, t) = (rng.gen_range(0..nv), rng.gen_range(0..nv));
            let cusps = if s == t { 2 } else { rng.gen_range(0..=2) };
            if let Some(p) = random_edge(rng, &positions[s], &positions[t], cusps) {
                edges.push((s, t, p));
            }
        }
        let mut deg = vec![0; nv];
        for (s, t, _) in &edges {
            deg[*s] += 1;
            deg[*t] += 1;
        }
        if edges.is_empty() || deg.iter().any(|&d| d == 1) {
            continue;
        }
        let keep: Vec<usize> = (0..nv).filter(|&v| deg[v] > 0).collect();
        let index: BTreeMap<usize, usize> = keep.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let pos: Vec<FrontPoint> = keep.iter().map(|&v| positions[v].clone()).collect();
        let edges = edges.into_iter().map(|(s, t, p)| (index[&s], index[&t], p)).collect();
        if let Ok(g) = LegendrianGraphFront::from_edges(&pos, edges) {
            return g;
        }
    }
}

/// Boundary points of one disk in counter-clockwise order, as (arc slot, within).
fn disk_points(r: &AbstractRibbon, v: usize, w: &[usize]) -> Vec<(HalfEdge, usize)> {
    r.zero_handles[v].attaching_arcs.iter().flat_map(|h| (0..w[h.edge]).map(move |i| (*h, i))).collect()
}

fn feasible(counts: &BTreeMap<HalfEdge, usize>, total: usize) -> bool {
    total % 2 == 0 && counts.values().all(|&c| 2 * c <= total)
}

/// Random non-crossing matching of the disk points with no chord inside an arc.
fn greedy_matching<R: Rng>(rng: &mut R, pts: &[(HalfEdge, usize)]) -> Option<Vec<(usize, usize)>> {
    let mut live: Vec<usize> = (0..pts.len()).collect();
    let mut counts: BTreeMap<HalfEdge, usize> = BTreeMap::new();
    for p in pts {
        *counts.entry(p.0).or_default() += 1;
    }
    if !feasible(&counts, live.len()) {
        return None;
    }
    let mut out = vec![];
    while !live.is_empty() {
        let m = live.len();
        let options: Vec<usize> = (0..m)
            .filter(|&i| {
                let (a, b) = (pts[live[i]].0, pts[live[(i + 1) % m]].0);
                if a == b {
                    return false;
                }
                let mut c = counts.clone();
                *c.get_mut(&a).expect("counted") -= 1;
                *c.get_mut(&b).expect("counted") -= 1;
                feasible(&c, m - 2)
            })
            .collect();
        let &i = options.choose(rng)?;
        let (x, y) = (live[i], live[(i + 1) % m]);
        *counts.get_mut(&pts[x].0).expect("counted") -= 1;
        *counts.get_mut(&pts[y].0).expect("counted") -= 1;
        out.push((x, y));
        live.retain(|&z| z != x && z != y);
    }
    Some(out)
}

/// All non-crossing perfect matchings of `pts` (a linear order) avoiding same-arc pairs.
fn all_matchings(pts: &[(HalfEdge, usize)]) -> Vec<Vec<(usize, usize)>> {
    fn rec(pts: &[(HalfEdge, usize)], idx: &[usize]) -> Vec<Vec<(usize, usize)>> {
        if idx.is_empty() {
            return vec![vec![]];
        }
        let mut out = vec![];
        let first = idx[0];
        for j in (1..idx.len()).step_by(2) {
            if pts[idx[j]].0 == pts[first].0 {
                continue;
            }
            let inner = rec(pts, &idx[1..j]);
            if inner.is_empty() {
                continue;
            }
            let outer = rec(pts, &idx[j + 1..]);
            for a in &inner {
                for b in &outer {
                    let mut m = vec![(first, idx[j])];
                    m.extend(a.iter().copied());
                    m.extend(b.iter().copied());
                    out.push(m);
                }
            }
        }
        out
    }
    let idx: Vec<usize> = (0..pts.len()).collect();
    rec(pts, &idx)
}

/// Components of the multicurve with `w[e]` strands through handle `e` and the
/// given chord matching at every disk.
pub fn trace_components(
    w: &[usize],
    partner: &BTreeMap<(HalfEdge, usize), (HalfEdge, usize)>,
) -> Vec<CurveOnRibbon> {
    let mut seen: BTreeSet<(usize, usize)> = BTreeSet::new();
    let mut comps = vec![];
    for e in 0..w.len() {
        for rho in 1..=w[e] {
            if seen.contains(&(e, rho)) {
                continue;
            }
            let mut passes = vec![];
            let (mut h, mut dir, mut rank) = (e, Direction::WithCore, rho);
            while seen.insert((h, rank)) {
                passes.push(Pass::new(h, dir, rank));
                let exit = Pass::new(h, dir, rank).exit();
                let within = match exit.end {
                    EdgeEnd::Source => rank - 1,
                    EdgeEnd::Target => w[h] - rank,
                };
                let (nh, nw) = partner[&(exit, within)];
                h = nh.edge;
                (dir, rank) = match nh.end {
                    EdgeEnd::Source => (Direction::WithCore, nw + 1),
                    EdgeEnd::Target => (Direction::AgainstCore, w[h] - nw),
                };
            }
            comps.push(renumber(CurveOnRibbon::new(passes)));
        }
    }
    comps
}

/// Ranks of a sub-multicurve, compressed to `1..=k` per handle in order.
fn renumber(c: CurveOnRibbon) -> CurveOnRibbon {
    let mut per: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for p in &c.passes {
        per.entry(p.handle).or_default().push(p.rank);
    }
    for v in per.values_mut() {
        v.sort();
    }
    CurveOnRibbon::new(
        c.passes
            .iter()
            .map(|p| Pass::new(p.handle, p.direction, per[&p.handle].binary_search(&p.rank).expect("present") + 1))
            .collect(),
    )
}

fn partner_map(
    r: &AbstractRibbon,
    w: &[usize],
    matchings: &[Vec<(usize, usize)>],
) -> BTreeMap<(HalfEdge, usize), (HalfEdge, usize)> {
    let mut partner = BTreeMap::new();
    for (v, m) in matchings.iter().enumerate() {
        let pts = disk_points(r, v, w);
        for &(a, b) in m {
            partner.insert(pts[a], pts[b]);
            partner.insert(pts[b], pts[a]);
        }
    }
    partner
}

/// A random multicurve with at most `max_total` strands, as its components.
pub fn random_multicurve<R: Rng>(rng: &mut R, r: &AbstractRibbon, max_total: usize) -> Option<Vec<CurveOnRibbon>> {
    let ne = r.one_handles.len();
    if ne == 0 {
        return None;
    }
    for _ in 0..200 {
        let budget = rng.gen_range(1..=max_total.max(1));
        let mut w = vec![0usize; ne];
        for _ in 0..budget {
            w[rng.gen_range(0..ne)] += 1;
        }
        let mut matchings = vec![];
        let mut ok = true;
        for v in 0..r.zero_handles.len() {
            match greedy_matching(rng, &disk_points(r, v, &w)) {
                Some(m) => matchings.push(m),
                None => {
                    ok = false;
                    break;
                }
            }
        }
        if ok {
            let partner = partner_map(r, &w, &matchings);
            return Some(trace_components(&w, &partner));
        }
    }
    None
}

/// A random homologically nontrivial simple closed curve: the longest nontrivial
/// component of a random multicurve.
pub fn random_curve<R: Rng>(rng: &mut R, r: &AbstractRibbon, max_passes: usize) -> Option<CurveOnRibbon> {
    for _ in 0..50 {
        let comps = random_multicurve(rng, r, max_passes)?;
        let good: Vec<CurveOnRibbon> =
            comps.into_iter().filter(|c| crate::ribbon::is_homologically_nontrivial(r, c).0).collect();
        if let Some(c) = good.into_iter().max_by_key(|c| c.passes.len()) {
            return Some(c);
        }
    }
    None
}

/// Every multicurve with at most `max_total` strands, flattened into components.
pub fn all_curves(r: &AbstractRibbon, max_total: usize) -> Vec<CurveOnRibbon> {
    let ne = r.one_handles.len();
    let mut out = vec![];
    let mut w = vec![0usize; ne];
    fn weights(i: usize, left: usize, w: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
        if i == w.len() {
            f(w);
            return;
        }
        for x in 0..=left {
            w[i] = x;
            weights(i + 1, left - x, w, f);
        }
        w[i] = 0;
    }
    weights(0, max_total, &mut w, &mut |w: &[usize]| {
        if w.iter().all(|&x| x == 0) {
            return;
        }
        let per_disk: Vec<Vec<Vec<(usize, usize)>>> =
            (0..r.zero_handles.len()).map(|v| all_matchings(&disk_points(r, v, w))).collect();
        if per_disk.iter().any(|m| m.is_empty()) {
            return;
        }
        for choice in per_disk.iter().map(|m| m.iter()).multi_cartesian_product() {
            let ms: Vec<Vec<(usize, usize)>> = choice.into_iter().cloned().collect();
            let partner = partner_map(r, w, &ms);
            out.extend(trace_components(w, &partner));
        }
    });
    out
}

fn cycles_of(sigma: &[usize]) -> Vec<Vec<usize>> {
    let mut seen = vec![false; sigma.len()];
    let mut out = vec![];
    for s in 0..sigma.len() {
        if seen[s] {
            continue;
        }
        let mut cyc = vec![];
        let mut d = s;
        while !seen[d] {
            seen[d] = true;
            cyc.push(d);
            d = sigma[d];
        }
        out.push(cyc);
    }
    out
}

/// Fatgraph with rotation `sigma` on darts `2e + end`, if connected.
pub fn fatgraph_from_sigma(sigma: &[usize]) -> Option<AbstractRibbon> {
    let ne = sigma.len() / 2;
    let rot: Vec<Vec<HalfEdge>> =
        cycles_of(sigma).into_iter().map(|c| c.into_iter().map(HalfEdge::from_dart).collect()).collect();
    let r = AbstractRibbon::from_rotations(rot, ne).ok()?;
    (r.components == 1).then_some(r)
}

fn canonical(sigma: &[usize], maps: &[Vec<usize>]) -> Vec<usize> {
    let n = sigma.len();
    let mut best: Option<Vec<usize>> = None;
    for phi in maps {
        let mut inv = vec![0; n];
        for (d, &x) in phi.iter().enumerate() {
            inv[x] = d;
        }
        let conj: Vec<usize> = (0..n).map(|x| phi[sigma[inv[x]]]).collect();
        if best.as_ref().map_or(true, |b| conj < *b) {
            best = Some(conj);
        }
    }
    best.expect("identity map present")
}

/// Connected fatgraphs with exactly `ne` edges, one per class under edge
/// relabelling and reversal.
pub fn fatgraphs(ne: usize) -> Vec<AbstractRibbon> {
    let n = 2 * ne;
    let mut maps = vec![];
    for perm in (0..ne).permutations(ne) {
        for flips in 0..(1usize << ne) {
            maps.push(
                (0..n)
                    .map(|d| {
                        let (e, b) = (d / 2, d % 2);
                        2 * perm[e] + (b ^ ((flips >> e) & 1))
                    })
                    .collect::<Vec<usize>>(),
            );
        }
    }
    let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut out = vec![];
    for sigma in (0..n).permutations(n) {
        let c = canonical(&sigma, &maps);
        if c != sigma || !seen.insert(c) {
            continue;
        }
        if let Some(r) = fatgraph_from_sigma(&sigma) {
            out.push(r);
        }
    }
    out
}

/// A random connected fatgraph with `ne` edges.
pub fn random_fatgraph<R: Rng>(rng: &mut R, ne: usize) -> AbstractRibbon {
    loop {
        let mut sigma: Vec<usize> = (0..2 * ne).collect();
        sigma.shuffle(rng);
        if let Some(r) = fatgraph_from_sigma(&sigma) {
            return r;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve_model::validate_curve;
    use crate::ribbon::build_ribbon;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn random_curves_are_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let g = random_graph(&mut rng, 4, 6);
            let r = build_ribbon(&g);
            if let Some(c) = random_curve(&mut rng, &r, 12) {
                assert!(validate_curve(&r, &c).is_valid(), "{:?}", validate_curve(&r, &c));
            }
        }
    }

    #[test]
    fn fatgraph_counts() {
        // one edge: the loop with interleaved or nested ends, and the segment
        assert_eq!(fatgraphs(1).len(), 2);
        for r in fatgraphs(2) {
            assert_eq!(r.components, 1);
        }
    }

    #[test]
    fn enumerated_curves_are_valid() {
        for r in fatgraphs(2) {
            for c in all_curves(&r, 4) {
                assert!(validate_curve(&r, &c).is_valid());
            }
        }
    }
}
