//! Contact surgery diagrams from abstract open books whose pages are ribbons of
//! model graphs and whose monodromy is a word of Dehn twists.
//!
//! The model graph is a row of pieces along `z = 0`, four units apart: an `A`
//! piece is two diamond loops with interleaved ends (a one-holed torus), a `B`
//! piece is one diamond below its vertex (an annulus). Consecutive vertices are
//! joined by tents of slope `±1/2`.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::curve_model::{CurveOnRibbon, Direction, Pass};
use crate::front_model::{
    check_embedded_diagram, check_generic, q, qr, rational, rotation_number, thurston_bennequin, FrontDiagram,
    FrontPoint, FrontStrand, Q,
};
use crate::legendrian_graph::LegendrianGraphFront;
use crate::realizer::{plan, realize, RealizeError, RealizerParams};
use crate::ribbon::{build_ribbon, is_homologically_nontrivial, AbstractRibbon, Z2Class};

pub const OBK_FORMAT: &str = "OBK";
pub const SRG_FORMAT: &str = "SRG";
pub const DOC_VERSION: u32 = 1;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OpenBookError {
    #[error("schema error: {0}")]
    Schema(String),
    #[error("open books need at least one boundary component")]
    NoBoundary,
    #[error("unknown generator {0}")]
    UnknownCurve(String),
    #[error("word curve {index} is homologically trivial")]
    HomologicallyTrivialWordCurve { index: usize, class: Z2Class },
    #[error("realizing {name}: {source}")]
    Realize { name: String, source: RealizeError },
    #[error("no generic stacking of the components found")]
    Stacking,
}

#[derive(Debug, Clone)]
pub struct ModelGraph {
    pub genus: usize,
    pub boundary: usize,
    /// `None` for the disk page, which has no edges.
    pub graph: Option<LegendrianGraphFront>,
    pub ribbon: AbstractRibbon,
    /// Edge ids per `A` piece (upper loop, lower loop) and per `B` piece.
    pub a_edges: Vec<(usize, usize)>,
    pub b_edges: Vec<usize>,
}

fn diamond(c: &FrontPoint, up: bool, h: i64) -> Vec<FrontPoint> {
    let s = if up { 1 } else { -1 };
    let p = |dy: Q, dz: i64| FrontPoint::new(&c.y + dy, &c.z + q(s * dz));
    vec![c.clone(), p(q(1), h), p(q(0), 2 * h), p(q(-1), h), c.clone()]
}

pub fn build_model_graph(genus: usize, boundary: usize) -> Result<ModelGraph, OpenBookError> {
    if boundary == 0 {
        return Err(OpenBookError::NoBoundary);
    }
    let pieces = genus + boundary - 1;
    if pieces == 0 {
        let ribbon = AbstractRibbon::from_rotations(vec![vec![]], 0).expect("single vertex");
        return Ok(ModelGraph { genus, boundary, graph: None, ribbon, a_edges: vec![], b_edges: vec![] });
    }
    let centres: Vec<FrontPoint> = (0..pieces).map(|i| FrontPoint::int(4 * i as i64, 0)).collect();
    let mut edges = vec![];
    let mut a_edges = vec![];
    let mut b_edges = vec![];
    for (i, c) in centres.iter().enumerate() {
        if i < genus {
            a_edges.push((edges.len(), edges.len() + 1));
            edges.push((i, i, diamond(c, true, 1)));
            edges.push((i, i, diamond(c, false, 2)));
        } else {
            b_edges.push(edges.len());
            edges.push((i, i, diamond(c, false, 1)));
        }
    }
    for i in 0..pieces.saturating_sub(1) {
        let (a, b) = (&centres[i], &centres[i + 1]);
        let top = FrontPoint::new(&a.y + q(2), q(1));
        edges.push((i, i + 1, vec![a.clone(), top, b.clone()]));
    }
    let graph = LegendrianGraphFront::from_edges(&centres, edges).expect("model graph is generic");
    let ribbon = build_ribbon(&graph);
    Ok(ModelGraph { genus, boundary, graph: Some(graph), ribbon, a_edges, b_edges })
}

fn single_pass(edge: usize) -> CurveOnRibbon {
    CurveOnRibbon::new(vec![Pass::new(edge, Direction::WithCore, 1)])
}

/// Named curves in factorization order: `A{i}_2, A{i}_1` per `A` piece, then `B{j}`.
pub fn model_monodromy_curves(m: &ModelGraph) -> Vec<(String, CurveOnRibbon)> {
    let mut out = vec![];
    for (i, (upper, lower)) in m.a_edges.iter().enumerate() {
        out.push((format!("A{}_2", i + 1), single_pass(*lower)));
        out.push((format!("A{}_1", i + 1), single_pass(*upper)));
    }
    for (j, e) in m.b_edges.iter().enumerate() {
        out.push((format!("B{}", j + 1), single_pass(*e)));
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CurveRef {
    Named(String),
    Inline(CurveOnRibbon),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WordEntry {
    pub curve: CurveRef,
    pub sign: i8,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OpenBookSpec {
    pub genus: usize,
    pub boundary: usize,
    /// Applied right to left.
    pub word: Vec<WordEntry>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct ObkDocument {
    format: String,
    version: u32,
    #[serde(flatten)]
    spec: OpenBookSpec,
}

impl OpenBookSpec {
    pub fn to_document(&self) -> String {
        let doc = ObkDocument { format: OBK_FORMAT.into(), version: DOC_VERSION, spec: self.clone() };
        serde_json::to_string_pretty(&doc).expect("serializable")
    }
}

pub fn parse_open_book(text: &str) -> Result<OpenBookSpec, OpenBookError> {
    let doc: ObkDocument = serde_json::from_str(text).map_err(|e| OpenBookError::Schema(e.to_string()))?;
    if doc.format != OBK_FORMAT || doc.version != DOC_VERSION {
        return Err(OpenBookError::Schema(format!("expected {OBK_FORMAT} version {DOC_VERSION}")));
    }
    if doc.spec.word.iter().any(|w| w.sign != 1 && w.sign != -1) {
        return Err(OpenBookError::Schema("signs must be +1 or -1".into()));
    }
    Ok(doc.spec)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Group {
    L1,
    L2,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurgeryComponent {
    pub name: String,
    pub group: Group,
    pub coefficient: i8,
    #[serde(with = "rational")]
    pub level: Q,
    pub tb: i64,
    pub rot: i64,
    pub knot: FrontStrand,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurgeryDiagram {
    pub genus: usize,
    pub boundary: usize,
    #[serde(with = "rational")]
    pub epsilon: Q,
    #[serde(with = "rational")]
    pub eta: Q,
    pub components: Vec<SurgeryComponent>,
    pub generic: bool,
    pub embedded: bool,
}

#[derive(Serialize)]
struct SrgDocument<'a> {
    format: &'static str,
    version: u32,
    #[serde(flatten)]
    diagram: &'a SurgeryDiagram,
}

impl SurgeryDiagram {
    pub fn front(&self) -> FrontDiagram {
        FrontDiagram::from_strands(self.components.iter().map(|c| c.knot.clone()).collect())
    }

    pub fn to_document(&self) -> String {
        serde_json::to_string_pretty(&SrgDocument { format: SRG_FORMAT, version: DOC_VERSION, diagram: self })
            .expect("serializable")
    }
}

fn resolve(m: &ModelGraph, c: &CurveRef) -> Result<CurveOnRibbon, OpenBookError> {
    match c {
        CurveRef::Inline(c) => Ok(c.clone()),
        CurveRef::Named(n) => model_monodromy_curves(m)
            .into_iter()
            .find(|(name, _)| name == n)
            .map(|(_, c)| c)
            .ok_or_else(|| OpenBookError::UnknownCurve(n.clone())),
    }
}

pub fn compile(spec: &OpenBookSpec, params: &RealizerParams) -> Result<SurgeryDiagram, OpenBookError> {
    let m = build_model_graph(spec.genus, spec.boundary)?;
    let mut word = vec![];
    for (i, w) in spec.word.iter().enumerate() {
        let c = resolve(&m, &w.curve)?;
        let (nontrivial, _) = if m.ribbon.one_handles.is_empty() {
            (false, None)
        } else {
            is_homologically_nontrivial(&m.ribbon, &c)
        };
        if !nontrivial {
            let class = if m.ribbon.one_handles.is_empty() {
                Z2Class(vec![])
            } else {
                crate::ribbon::pass_parity(&m.ribbon, &c)
            };
            return Err(OpenBookError::HomologicallyTrivialWordCurve { index: i, class });
        }
        word.push((format!("L{}", i + 1), c, w.sign));
    }
    let Some(graph) = &m.graph else {
        return Ok(SurgeryDiagram {
            genus: spec.genus,
            boundary: spec.boundary,
            epsilon: q(1),
            eta: q(0),
            components: vec![],
            generic: true,
            embedded: true,
        });
    };
    let cancel = model_monodromy_curves(&m);
    let err = |name: &str| {
        let name = name.to_string();
        move |source| OpenBookError::Realize { name, source }
    };
    // common vertical unit: the smallest automatic choice over all components
    let mut eps: Option<Q> = None;
    let mut range = q(0);
    for (name, c) in word.iter().map(|(n, c, _)| (n, c)).chain(cancel.iter().map(|(n, c)| (n, c))) {
        let r = realize(graph, c, params).map_err(err(name))?;
        let (lo, hi) = r.report.plan.prominence.range();
        if &hi - &lo > range {
            range = hi - lo;
        }
        if eps.as_ref().map_or(true, |e| r.report.epsilon < *e) {
            eps = Some(r.report.epsilon.clone());
        }
    }
    let eps = eps.expect("at least one component");
    let eta = q(4) * &eps * (&range + q(1));
    let fixed = RealizerParams { epsilon: Some(eps.clone()), ..params.clone() };
    let mut knots = vec![];
    for (name, c, sign) in &word {
        let r = realize(graph, c, &fixed).map_err(err(name))?;
        knots.push((name.clone(), Group::L1, -*sign, r.knot));
    }
    for (name, c) in &cancel {
        let r = realize(graph, c, &fixed).map_err(err(name))?;
        knots.push((name.clone(), Group::L2, 1, r.knot));
    }
    let nw = word.len() as i64;
    let base_levels: Vec<Q> = knots
        .iter()
        .enumerate()
        .map(|(i, (name, g, ..))| match g {
            Group::L1 => -(q(nw - i as i64) * &eta),
            Group::L2 => {
                if name.ends_with("_1") {
                    &eps * q(2)
                } else {
                    eps.clone()
                }
            }
        })
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    for attempt in 0..params.max_attempts.max(1) {
        let levels: Vec<Q> = base_levels
            .iter()
            .zip(&knots)
            .map(|(t, (_, g, ..))| {
                if attempt == 0 || *g == Group::L2 {
                    t.clone()
                } else {
                    t + &eta * qr(rng.gen_range(0..64), 512)
                }
            })
            .collect();
        let strands: Vec<FrontStrand> = knots.iter().zip(&levels).map(|((.., k), t)| k.translated(t)).collect();
        let d = FrontDiagram::from_strands(strands.clone());
        if !check_generic(&d).is_clean() || !check_embedded_diagram(&d) {
            continue;
        }
        let mut components = vec![];
        for ((name, group, coefficient, _), (strand, level)) in knots.iter().zip(strands.into_iter().zip(levels)) {
            let tb = thurston_bennequin(&strand).map_err(|e| OpenBookError::Schema(e.to_string()))?;
            let rot = rotation_number(&strand).map_err(|e| OpenBookError::Schema(e.to_string()))?;
            components.push(SurgeryComponent {
                name: name.clone(),
                group: *group,
                coefficient: i8::try_from(*coefficient).expect("±1"),
                level,
                tb,
                rot,
                knot: strand,
            });
        }
        return Ok(SurgeryDiagram {
            genus: spec.genus,
            boundary: spec.boundary,
            epsilon: eps,
            eta,
            components,
            generic: true,
            embedded: true,
        });
    }
    Err(OpenBookError::Stacking)
}

/// Prominence range of a curve on the model ribbon; zero for the named curves.
pub fn curve_range(m: &ModelGraph, c: &CurveOnRibbon) -> Result<Q, RealizeError> {
    let p = plan(&m.ribbon, c, &RealizerParams::default())?;
    let (lo, hi) = p.prominence.range();
    Ok(hi - lo)
}

/// Count of components by group.
pub fn group_counts(d: &SurgeryDiagram) -> BTreeMap<Group, usize> {
    let mut m = BTreeMap::new();
    for c in &d.components {
        *m.entry(c.group).or_default() += 1;
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;

    #[test]
    fn model_topology() {
        for (g, b) in [(1, 1), (0, 2), (2, 3), (1, 2)] {
            let m = build_model_graph(g, b).unwrap();
            assert_eq!((m.ribbon.genus, m.ribbon.boundary_count), (g, b));
        }
        let disk = build_model_graph(0, 1).unwrap();
        assert!(disk.graph.is_none());
        assert_eq!((disk.ribbon.genus, disk.ribbon.boundary_count), (0, 1));
        let m = build_model_graph(2, 3).unwrap();
        assert_eq!(m.ribbon.euler, -5);
    }

    #[test]
    fn named_curves_are_nontrivial() {
        let m = build_model_graph(2, 2).unwrap();
        let names: Vec<String> = model_monodromy_curves(&m).into_iter().map(|(n, _)| n).collect();
        assert_eq!(names, vec!["A1_2", "A1_1", "A2_2", "A2_1", "B1"]);
        for (_, c) in model_monodromy_curves(&m) {
            assert!(is_homologically_nontrivial(&m.ribbon, &c).0);
            assert_eq!(curve_range(&m, &c).unwrap(), q(0));
        }
    }

    #[test]
    fn torus_page_empty_word() {
        let d = compile(&OpenBookSpec { genus: 1, boundary: 1, word: vec![] }, &RealizerParams::default()).unwrap();
        assert_eq!(d.components.len(), 2);
        assert!(d.components.iter().all(|c| c.coefficient == 1 && c.tb == -1));
    }

    #[test]
    fn annulus_single_twist() {
        let spec = OpenBookSpec {
            genus: 0,
            boundary: 2,
            word: vec![WordEntry { curve: CurveRef::Named("B1".into()), sign: 1 }],
        };
        let d = compile(&spec, &RealizerParams::default()).unwrap();
        assert_eq!(d.components.len(), 2);
        assert_eq!(d.components[0].coefficient, -1);
        assert!(d.components[0].level < q(0));
        assert_eq!(d.components[1].coefficient, 1);
        assert_eq!(d.components[1].level, d.epsilon);
        assert!(!d.components[0].level.is_zero());
    }

    #[test]
    fn document_round_trip() {
        let spec = OpenBookSpec {
            genus: 1,
            boundary: 2,
            word: vec![
                WordEntry { curve: CurveRef::Named("A1_1".into()), sign: -1 },
                WordEntry { curve: CurveRef::Inline(single_pass(2)), sign: 1 },
            ],
        };
        assert_eq!(parse_open_book(&spec.to_document()).unwrap(), spec);
    }
}
