//! Coloring-harmonica certificates and their verifier.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::canvas::{Color, ListAssignment};
use crate::plane_graph::{edge, Edge, PlaneGraph, VertexId};

/// Where a harmonica starts: a single vertex or an edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Origin {
    Vertex(VertexId),
    Edge([VertexId; 2]),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum HarmonicaStep {
    /// From the singleton-list vertex `u` through triangle `uxy`; `residual`
    /// is the common pair left on `x` and `y`.
    Start {
        u: VertexId,
        x: VertexId,
        y: VertexId,
        residual: [Color; 2],
    },
    /// From the edge `uv` carrying pair `residual` through triangle `uvz`.
    Step {
        u: VertexId,
        v: VertexId,
        z: VertexId,
        residual: [Color; 2],
    },
    /// The closing triangle `uvw`, all three lists equal to `residual`.
    Base {
        u: VertexId,
        v: VertexId,
        w: VertexId,
        residual: [Color; 2],
    },
}

impl HarmonicaStep {
    pub fn kind(&self) -> &'static str {
        match self {
            HarmonicaStep::Start { .. } => "start",
            HarmonicaStep::Step { .. } => "step",
            HarmonicaStep::Base { .. } => "base",
        }
    }

    pub fn verts(&self) -> [VertexId; 3] {
        match *self {
            HarmonicaStep::Start { u, x, y, .. } => [u, x, y],
            HarmonicaStep::Step { u, v, z, .. } => [u, v, z],
            HarmonicaStep::Base { u, v, w, .. } => [u, v, w],
        }
    }

    pub fn residual(&self) -> [Color; 2] {
        match *self {
            HarmonicaStep::Start { residual, .. }
            | HarmonicaStep::Step { residual, .. }
            | HarmonicaStep::Base { residual, .. } => residual,
        }
    }

    fn triangle_edges(&self) -> [Edge; 3] {
        let [a, b, c] = self.verts();
        [edge(a, b), edge(b, c), edge(a, c)]
    }
}

/// A triangle chain witnessing a coloring harmonica.
///
/// Which ends of a `Step` edge get deleted is not stored: an end survives
/// exactly when it is reused by the following `Start`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HarmonicaCertificate {
    pub origin: Origin,
    pub steps: Vec<HarmonicaStep>,
    pub to: VertexId,
}

#[derive(Serialize, Deserialize)]
struct StepJson {
    kind: String,
    residual: [Color; 2],
    verts: [VertexId; 3],
}

#[derive(Serialize, Deserialize)]
struct CertificateJson {
    from: Origin,
    steps: Vec<StepJson>,
    to: VertexId,
}

impl Serialize for HarmonicaCertificate {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        CertificateJson {
            from: self.origin,
            steps: self
                .steps
                .iter()
                .map(|st| StepJson {
                    kind: st.kind().to_string(),
                    residual: st.residual(),
                    verts: st.verts(),
                })
                .collect(),
            to: self.to,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for HarmonicaCertificate {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = CertificateJson::deserialize(d)?;
        let steps = raw
            .steps
            .into_iter()
            .map(|s| {
                let [a, b, c] = s.verts;
                let residual = s.residual;
                Ok(match s.kind.as_str() {
                    "start" => HarmonicaStep::Start {
                        u: a,
                        x: b,
                        y: c,
                        residual,
                    },
                    "step" => HarmonicaStep::Step {
                        u: a,
                        v: b,
                        z: c,
                        residual,
                    },
                    "base" => HarmonicaStep::Base {
                        u: a,
                        v: b,
                        w: c,
                        residual,
                    },
                    other => return Err(serde::de::Error::unknown_variant(other, &["start", "step", "base"])),
                })
            })
            .collect::<Result<_, D::Error>>()?;
        Ok(HarmonicaCertificate {
            origin: raw.from,
            steps,
            to: raw.to,
        })
    }
}

impl HarmonicaCertificate {
    /// Vertices deleted after step `i`.
    pub fn dropped(&self, i: usize) -> BTreeSet<VertexId> {
        match self.steps.get(i) {
            Some(HarmonicaStep::Start { u, .. }) => [*u].into(),
            Some(HarmonicaStep::Step { u, v, .. }) => {
                let reused = match self.steps.get(i + 1) {
                    Some(HarmonicaStep::Start { x, y, .. }) => [*x, *y],
                    _ => [VertexId::MAX; 2],
                };
                [*u, *v].into_iter().filter(|p| !reused.contains(p)).collect()
            }
            _ => BTreeSet::new(),
        }
    }

    pub fn vertices(&self) -> BTreeSet<VertexId> {
        self.steps.iter().flat_map(|s| s.verts()).collect()
    }

    pub fn edges(&self) -> BTreeSet<Edge> {
        self.steps.iter().flat_map(|s| s.triangle_edges()).collect()
    }

    /// Vertices and edges of the harmonica left after the first `level` steps.
    pub fn level(&self, level: usize) -> (BTreeSet<VertexId>, BTreeSet<Edge>) {
        let rest = &self.steps[level..];
        (
            rest.iter().flat_map(|s| s.verts()).collect(),
            rest.iter().flat_map(|s| s.triangle_edges()).collect(),
        )
    }

    /// Number of edge stages: every `Step` plus the closing `Base`.
    pub fn chain_len(&self) -> usize {
        self.steps
            .iter()
            .filter(|s| !matches!(s, HarmonicaStep::Start { .. }))
            .count()
    }
}

/// The first clause a certificate fails.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyFailure {
    pub step: Option<usize>,
    pub clause: String,
}

impl fmt::Display for VerifyFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.step {
            Some(i) => write!(f, "step {i}: {}", self.clause),
            None => write!(f, "{}", self.clause),
        }
    }
}

fn fail<T>(step: Option<usize>, clause: impl Into<String>) -> Result<T, VerifyFailure> {
    Err(VerifyFailure {
        step,
        clause: clause.into(),
    })
}

fn pair(s: &BTreeSet<Color>) -> Option<[Color; 2]> {
    let v: Vec<_> = s.iter().copied().collect();
    (v.len() == 2).then(|| [v[0], v[1]])
}

/// Checks that `cert` is a coloring harmonica from `from` to `to` contained in
/// `(graph, lists)`.
pub fn verify_coloring_harmonica(
    graph: &PlaneGraph,
    lists: &ListAssignment,
    cert: &HarmonicaCertificate,
    from: Origin,
    to: VertexId,
) -> Result<(), VerifyFailure> {
    if cert.origin != from {
        return fail(
            None,
            format!("certificate starts at {:?}, expected {:?}", cert.origin, from),
        );
    }
    if cert.to != to {
        return fail(None, format!("certificate ends at {}, expected {}", cert.to, to));
    }
    let n = cert.steps.len();
    if n == 0 {
        return fail(None, "no steps");
    }
    for (i, s) in cert.steps.iter().enumerate() {
        let ok = match (i, s) {
            (0, HarmonicaStep::Start { .. }) => matches!(from, Origin::Vertex(_)),
            (0, _) => matches!(from, Origin::Edge(_)),
            (_, HarmonicaStep::Start { .. }) => matches!(cert.steps[i - 1], HarmonicaStep::Step { .. }),
            (_, _) => matches!(cert.steps[i - 1], HarmonicaStep::Start { .. }),
        };
        if !ok {
            return fail(Some(i), "step order");
        }
        if matches!(s, HarmonicaStep::Base { .. }) != (i == n - 1) {
            return fail(Some(i), "the chain must end with exactly one base triangle");
        }
    }
    for v in cert.vertices() {
        if !graph.contains_vertex(v) {
            return fail(None, format!("unknown vertex {v}"));
        }
    }

    let mut current: BTreeMap<VertexId, BTreeSet<Color>> = BTreeMap::new();
    let list =
        |cur: &BTreeMap<VertexId, BTreeSet<Color>>, v: VertexId| cur.get(&v).cloned().unwrap_or_else(|| lists.of(v));
    let mut seen: BTreeSet<VertexId> = BTreeSet::new();
    let (mut at_vertex, mut at_edge) = match from {
        Origin::Vertex(u) => {
            seen.insert(u);
            (Some(u), None)
        }
        Origin::Edge([u, v]) => {
            if u == v {
                return fail(None, "origin edge has equal ends");
            }
            seen.extend([u, v]);
            (None, Some((u, v)))
        }
    };
    if seen.contains(&to) {
        return fail(None, "u, v, w must be distinct");
    }
    let mut carried: BTreeSet<VertexId> = BTreeSet::new();
    for (i, s) in cert.steps.iter().enumerate() {
        let [a, b, c] = s.verts();
        if !graph.is_triangle(a, b, c) {
            return fail(Some(i), format!("{a}{b}{c} is not a triangle"));
        }
        match *s {
            HarmonicaStep::Start { u, x, y, residual } => {
                if at_vertex != Some(u) {
                    return fail(Some(i), "start must continue from the current vertex");
                }
                let reused = [x, y].iter().filter(|v| carried.contains(v)).count();
                if reused > 1 {
                    return fail(Some(i), "only one end of the previous edge may survive");
                }
                for v in [x, y] {
                    if seen.contains(&v) && !carried.contains(&v) {
                        return fail(Some(i), format!("vertex {v} was already deleted"));
                    }
                }
                let lu = list(&current, u);
                if lu.len() != 1 {
                    return fail(Some(i), "|L(u)| = 1");
                }
                let rx: BTreeSet<_> = list(&current, x).difference(&lu).copied().collect();
                let ry: BTreeSet<_> = list(&current, y).difference(&lu).copied().collect();
                if rx != ry {
                    return fail(Some(i), "L(x) - L(u) = L(y) - L(u)");
                }
                if pair(&rx) != Some(residual) {
                    return fail(Some(i), "|L(x) - L(u)| = 2");
                }
                current.insert(x, rx.clone());
                current.insert(y, rx);
                seen.extend([x, y]);
                carried.clear();
                at_vertex = None;
                at_edge = Some((x, y));
            }
            HarmonicaStep::Step { u, v, z, residual } => {
                if at_edge.map(|(p, q)| edge(p, q)) != Some(edge(u, v)) {
                    return fail(Some(i), "step must continue from the current edge");
                }
                if seen.contains(&z) {
                    return fail(Some(i), format!("vertex {z} was already used"));
                }
                let (lu, lv, lz) = (list(&current, u), list(&current, v), list(&current, z));
                if lu != lv || !lu.is_subset(&lz) {
                    return fail(Some(i), "L(u) = L(v) ⊆ L(z)");
                }
                if pair(&lu) != Some(residual) {
                    return fail(Some(i), "|L(u)| = |L(v)| = 2");
                }
                if lz.len() != 3 {
                    return fail(Some(i), "|L(z)| = 3");
                }
                current.insert(z, lz.difference(&lu).copied().collect());
                seen.insert(z);
                carried = [u, v].into();
                at_edge = None;
                at_vertex = Some(z);
            }
            HarmonicaStep::Base { u, v, w, residual } => {
                if at_edge.map(|(p, q)| edge(p, q)) != Some(edge(u, v)) {
                    return fail(Some(i), "base must continue from the current edge");
                }
                if w != to || seen.contains(&w) {
                    return fail(Some(i), "base must close at the target vertex");
                }
                let (lu, lv, lw) = (list(&current, u), list(&current, v), list(&current, w));
                if !(lu == lv && lv == lw) {
                    return fail(Some(i), "L(u) = L(v) = L(w)");
                }
                if pair(&lu) != Some(residual) {
                    return fail(Some(i), "|L(u)| = 2");
                }
            }
        }
    }

    // outer-face incidence at every level of the recursion
    for (i, s) in cert.steps.iter().enumerate() {
        let (vs, es) = cert.level(i);
        let inc = graph.outer_incidence(&vs, &es);
        let needed = match *s {
            HarmonicaStep::Start { u, x, y, .. } => [u, x, y, to],
            HarmonicaStep::Step { u, v, z, .. } => [u, v, z, to],
            HarmonicaStep::Base { u, v, w, .. } => [u, v, w, to],
        };
        for v in needed {
            if !inc.vertices.contains(&v) {
                return fail(Some(i), format!("vertex {v} is not on the outer face"));
            }
        }
        if let HarmonicaStep::Step { u, v, .. } | HarmonicaStep::Base { u, v, .. } = *s {
            if !inc.edges.contains(&edge(u, v)) {
                return fail(Some(i), format!("edge {u}{v} is not on the outer face"));
            }
        }
    }
    Ok(())
}
