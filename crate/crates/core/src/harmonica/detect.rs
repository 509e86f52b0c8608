//! Exhaustive search for a coloring harmonica inside a list-assigned graph.

use std::collections::{BTreeMap, BTreeSet};

use crate::canvas::{Color, ListAssignment};
use crate::plane_graph::{PlaneGraph, VertexId};

use super::certificate::{verify_coloring_harmonica, HarmonicaCertificate, HarmonicaStep, Origin};

struct Search<'a> {
    graph: &'a PlaneGraph,
    lists: &'a ListAssignment,
    origin: Origin,
    to: VertexId,
    current: BTreeMap<VertexId, BTreeSet<Color>>,
    seen: BTreeSet<VertexId>,
    carried: BTreeSet<VertexId>,
    steps: Vec<HarmonicaStep>,
}

fn as_pair(s: &BTreeSet<Color>) -> Option<[Color; 2]> {
    let v: Vec<_> = s.iter().copied().collect();
    (v.len() == 2).then(|| [v[0], v[1]])
}

impl Search<'_> {
    fn list(&self, v: VertexId) -> BTreeSet<Color> {
        self.current.get(&v).cloned().unwrap_or_else(|| self.lists.of(v))
    }

    fn usable(&self, v: VertexId) -> bool {
        v != self.to && (!self.seen.contains(&v) || self.carried.contains(&v))
    }

    fn certificate(&self) -> HarmonicaCertificate {
        HarmonicaCertificate {
            origin: self.origin,
            steps: self.steps.clone(),
            to: self.to,
        }
    }

    fn search_vertex(&mut self, u: VertexId) -> bool {
        let lu = self.list(u);
        if lu.len() != 1 {
            return false;
        }
        let mut nbrs: Vec<VertexId> = self.graph.neighbors(u).filter(|&v| self.usable(v)).collect();
        nbrs.sort_unstable();
        for (i, &x) in nbrs.iter().enumerate() {
            for &y in &nbrs[i + 1..] {
                if !self.graph.has_edge(x, y) || (self.carried.contains(&x) && self.carried.contains(&y)) {
                    continue;
                }
                let rx: BTreeSet<Color> = self.list(x).difference(&lu).copied().collect();
                let ry: BTreeSet<Color> = self.list(y).difference(&lu).copied().collect();
                let Some(residual) = as_pair(&rx).filter(|_| rx == ry) else {
                    continue;
                };
                let saved = (
                    self.current.clone(),
                    self.seen.clone(),
                    std::mem::take(&mut self.carried),
                );
                self.current.insert(x, rx.clone());
                self.current.insert(y, rx);
                self.seen.extend([x, y]);
                self.steps.push(HarmonicaStep::Start { u, x, y, residual });
                if self.search_edge(x, y) {
                    return true;
                }
                self.steps.pop();
                (self.current, self.seen, self.carried) = saved;
            }
        }
        false
    }

    fn search_edge(&mut self, u: VertexId, v: VertexId) -> bool {
        let lu = self.list(u);
        if lu != self.list(v) {
            return false;
        }
        let Some(residual) = as_pair(&lu) else {
            return false;
        };
        let w = self.to;
        if self.graph.is_triangle(u, v, w) && !self.seen.contains(&w) && self.list(w) == lu {
            self.steps.push(HarmonicaStep::Base { u, v, w, residual });
            let cert = self.certificate();
            if verify_coloring_harmonica(self.graph, self.lists, &cert, self.origin, w).is_ok() {
                return true;
            }
            self.steps.pop();
        }
        let mut common: Vec<VertexId> = self
            .graph
            .neighbors(u)
            .filter(|&z| z != w && self.graph.has_edge(v, z) && !self.seen.contains(&z))
            .collect();
        common.sort_unstable();
        for z in common {
            let lz = self.list(z);
            if lz.len() != 3 || !lu.is_subset(&lz) {
                continue;
            }
            let saved = (self.current.clone(), self.carried.clone());
            self.current.insert(z, lz.difference(&lu).copied().collect());
            self.seen.insert(z);
            self.carried = [u, v].into();
            self.steps.push(HarmonicaStep::Step { u, v, z, residual });
            if self.search_vertex(z) {
                return true;
            }
            self.steps.pop();
            self.seen.remove(&z);
            (self.current, self.carried) = saved;
        }
        false
    }
}

/// A coloring harmonica from `origin` to `to` contained in `(graph, lists)`,
/// or `None` after exhausting every triangle chain.
///
/// Candidates are tried in increasing vertex order, the closing triangle
/// before a further step, so the returned certificate is deterministic.
pub fn find_harmonica_from(
    graph: &PlaneGraph,
    lists: &ListAssignment,
    origin: Origin,
    to: VertexId,
) -> Option<HarmonicaCertificate> {
    let mut s = Search {
        graph,
        lists,
        origin,
        to,
        current: BTreeMap::new(),
        seen: BTreeSet::new(),
        carried: BTreeSet::new(),
        steps: Vec::new(),
    };
    let found = match origin {
        Origin::Vertex(u) => {
            if u == to || !graph.contains_vertex(u) || !graph.contains_vertex(to) {
                return None;
            }
            s.seen.insert(u);
            s.search_vertex(u)
        }
        Origin::Edge([u, v]) => {
            if u == v || u == to || v == to || !graph.has_edge(u, v) || !graph.contains_vertex(to) {
                return None;
            }
            s.seen.extend([u, v]);
            s.search_edge(u, v)
        }
    };
    found.then(|| s.certificate())
}

pub fn find_coloring_harmonica(
    graph: &PlaneGraph,
    lists: &ListAssignment,
    p1: VertexId,
    p2: VertexId,
) -> Option<HarmonicaCertificate> {
    find_harmonica_from(graph, lists, Origin::Vertex(p1), p2)
}
