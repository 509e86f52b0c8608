//! Colorability with a certificate on either side.

use std::collections::BTreeSet;

use serde::Serialize;
use thiserror::Error;

use crate::canvas::{validate_canvas, CanvasJson, Color, ListAssignment, Precolored};
use crate::governments::Government;
use crate::plane_graph::{PlaneGraph, VertexId};
use crate::solver::{find_coloring, Coloring, SolverError};

use super::certificate::{verify_coloring_harmonica, HarmonicaCertificate, Origin};
use super::detect::find_coloring_harmonica;
use super::government::{convert_harmonica, find_government_harmonica};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Decision {
    Colorable(Coloring),
    Obstructed(HarmonicaCertificate),
}

impl Decision {
    pub fn is_colorable(&self) -> bool {
        matches!(self, Decision::Colorable(_))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecideError {
    #[error("hypotheses violated: {}", .0.join("; "))]
    HypothesesViolated(Vec<String>),
    #[error(transparent)]
    Solver(#[from] SolverError),
    /// Solver and detector disagree. Carries a replayable dump.
    #[error("colorability and harmonica search disagree: {0}")]
    Disagreement(String),
}

/// Every violated size or position requirement, empty when the instance
/// qualifies.
pub fn audit_hypotheses(graph: &PlaneGraph, lists: &ListAssignment, p1: VertexId, p2: VertexId) -> Vec<String> {
    let mut out = Vec::new();
    if p1 == p2 {
        out.push("p1 and p2 must differ".to_string());
    }
    for (name, p) in [("p1", p1), ("p2", p2)] {
        if !graph.contains_vertex(p) {
            out.push(format!("{name} = {p} is not a vertex"));
        } else if !graph.on_outer(p) {
            out.push(format!("{name} = {p} is not on the outer boundary"));
        }
    }
    if lists.size(p1) < 1 {
        out.push(format!("|L(p1)| >= 1 fails at {p1}"));
    }
    if lists.size(p2) < 2 {
        out.push(format!("|L(p2)| >= 2 fails at {p2}"));
    }
    for v in graph.vertices() {
        if v == p1 || v == p2 {
            continue;
        }
        let need = if graph.on_outer(v) { 3 } else { 5 };
        if lists.size(v) < need {
            out.push(format!("|L({v})| >= {need} fails"));
        }
    }
    out
}

#[derive(Serialize)]
struct Dump<'a> {
    canvas: CanvasJson,
    p1: VertexId,
    p2: VertexId,
    coloring: Option<&'a Coloring>,
    certificate: Option<&'a HarmonicaCertificate>,
}

fn dump(
    graph: &PlaneGraph,
    lists: &ListAssignment,
    p1: VertexId,
    p2: VertexId,
    coloring: Option<&Coloring>,
    certificate: Option<&HarmonicaCertificate>,
) -> String {
    serde_json::to_string(&Dump {
        canvas: CanvasJson::from_parts(graph, &Precolored::empty(), lists),
        p1,
        p2,
        coloring,
        certificate,
    })
    .expect("dump serializes")
}

/// Runs the exhaustive solver and the harmonica detector, checks that exactly
/// one of them succeeds, and returns the verified witness.
pub fn decide_with_certificate(
    graph: &PlaneGraph,
    lists: &ListAssignment,
    p1: VertexId,
    p2: VertexId,
) -> Result<Decision, DecideError> {
    let audit = audit_hypotheses(graph, lists, p1, p2);
    if !audit.is_empty() {
        return Err(DecideError::HypothesesViolated(audit));
    }
    let coloring = find_coloring(graph, lists, &Coloring::new())?;
    let cert = find_coloring_harmonica(graph, lists, p1, p2);
    match (coloring, cert) {
        (Some(c), None) if c.is_proper_for(graph, lists) => Ok(Decision::Colorable(c)),
        (None, Some(h)) if verify_coloring_harmonica(graph, lists, &h, Origin::Vertex(p1), p2).is_ok() => {
            Ok(Decision::Obstructed(h))
        }
        (c, h) => Err(DecideError::Disagreement(dump(
            graph,
            lists,
            p1,
            p2,
            c.as_ref(),
            h.as_ref(),
        ))),
    }
}

/// The route through government harmonicas: add a fresh colour to `p2`,
/// take the dictatorship of `p1`'s colour on a boundary edge at `p1`, look
/// for a government harmonica to a boundary edge at `p2`, and convert it.
/// Returns `None` when no choice of boundary edges yields a certificate.
pub fn certify_via_governments(
    graph: &PlaneGraph,
    lists: &ListAssignment,
    p1: VertexId,
    p2: VertexId,
) -> Option<HarmonicaCertificate> {
    let l1 = lists.of(p1);
    if l1.len() != 1 {
        return None;
    }
    let c = *l1.iter().next().unwrap();
    let c0: Color = graph.vertices().flat_map(|v| lists.of(v)).max().unwrap_or(0) + 1;
    let mut extended = lists.clone();
    extended.set(p2, lists.of(p2).into_iter().chain([c0]));
    let boundary_nbrs = |p: VertexId| -> BTreeSet<VertexId> {
        let walk = graph.outer_walk();
        let n = walk.len();
        (0..n)
            .filter(|&i| walk[i] == p)
            .flat_map(|i| [walk[(i + n - 1) % n], walk[(i + 1) % n]])
            .filter(|&v| v != p)
            .collect()
    };
    for v1 in boundary_nbrs(p1) {
        if v1 == p2 {
            continue;
        }
        let Some(gov) = Government::dictatorship((p1, v1), p1, c, lists.of(v1).into_iter().filter(|&x| x != c)) else {
            continue;
        };
        let Ok(t) = validate_canvas(graph.clone(), Precolored::path(&[p1, v1]), extended.clone()) else {
            continue;
        };
        for v2 in boundary_nbrs(p2) {
            let Some(h) = find_government_harmonica(&t, (p1, v1), (p2, v2), &gov) else {
                continue;
            };
            if let Ok(conv) = convert_harmonica(graph, &extended, &h, c0) {
                if verify_coloring_harmonica(graph, lists, &conv.certificate, Origin::Vertex(p1), p2).is_ok() {
                    return Some(conv.certificate);
                }
            }
        }
    }
    None
}
