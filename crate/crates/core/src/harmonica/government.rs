//! Harmonicas carrying a government from one boundary edge to another, and
//! their conversion into coloring harmonicas.

use std::collections::BTreeSet;

use serde::Serialize;
use thiserror::Error;

use crate::canvas::{validate_canvas, Canvas, Color, ListAssignment, Precolored};
use crate::governments::{classify, Classification, Government, GovernmentKind};
use crate::plane_graph::{edge, Edge, PlaneGraph, VertexId};
use crate::solver::phi;

use super::certificate::{verify_coloring_harmonica, HarmonicaCertificate, HarmonicaStep, Origin, VerifyFailure};

/// One application of the recursive definition.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum RuleApplication {
    /// The graph is the single edge `path`, which is also the target.
    Trivial { path: (VertexId, VertexId) },
    /// Dictatorship whose dictator is the only vertex shared with the target.
    Meet {
        path: (VertexId, VertexId),
        dictator: VertexId,
        target: (VertexId, VertexId),
    },
    /// Dictator `z` in colour `color` spans triangle `z u1 u2`; continues
    /// from `u1 u2` with the democracy on `l0`.
    Triangle {
        path: (VertexId, VertexId),
        z: VertexId,
        color: Color,
        u1: VertexId,
        u2: VertexId,
        l0: [Color; 2],
    },
    /// Democracy on `l0` over `path`, common neighbour `z` with list
    /// `l0 + color`; `deleted` leaves and the dictatorship at `z` continues.
    Fan {
        path: (VertexId, VertexId),
        z: VertexId,
        color: Color,
        l0: [Color; 2],
        deleted: VertexId,
    },
}

impl RuleApplication {
    pub fn number(&self) -> u8 {
        match self {
            RuleApplication::Trivial { .. } => 1,
            RuleApplication::Meet { .. } => 2,
            RuleApplication::Triangle { .. } => 3,
            RuleApplication::Fan { .. } => 4,
        }
    }

    fn piece(&self) -> (Vec<VertexId>, Vec<Edge>) {
        match *self {
            RuleApplication::Trivial { path: (a, b) } => (vec![a, b], vec![edge(a, b)]),
            RuleApplication::Meet {
                path: (a, b),
                target: (c, d),
                ..
            } => (vec![a, b, c, d], vec![edge(a, b), edge(c, d)]),
            RuleApplication::Triangle {
                path: (a, b),
                z,
                u1,
                u2,
                ..
            } => (
                vec![a, b, z, u1, u2],
                vec![edge(a, b), edge(z, u1), edge(z, u2), edge(u1, u2)],
            ),
            RuleApplication::Fan { path: (a, b), z, .. } => (vec![a, b, z], vec![edge(a, b), edge(a, z), edge(b, z)]),
        }
    }
}

/// A harmonica from `path` to `target` with government `government`,
/// contained in some host canvas.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GovernmentHarmonica {
    pub path: (VertexId, VertexId),
    pub target: (VertexId, VertexId),
    pub government: Government,
    pub rules: Vec<RuleApplication>,
}

impl GovernmentHarmonica {
    /// Vertices and edges from rule `level` on.
    pub fn level(&self, level: usize) -> (BTreeSet<VertexId>, BTreeSet<Edge>) {
        let mut vs = BTreeSet::new();
        let mut es = BTreeSet::new();
        for r in &self.rules[level..] {
            let (v, e) = r.piece();
            vs.extend(v);
            es.extend(e);
        }
        (vs, es)
    }

    pub fn vertices(&self) -> BTreeSet<VertexId> {
        self.level(0).0
    }

    pub fn edges(&self) -> BTreeSet<Edge> {
        self.level(0).1
    }

    pub fn rule_trace(&self) -> Vec<u8> {
        self.rules.iter().map(RuleApplication::number).collect()
    }

    /// The harmonica's own graph with the inherited embedding.
    pub fn graph(&self, host: &PlaneGraph) -> PlaneGraph {
        let (vs, es) = self.level(0);
        host.edge_subgraph(&vs, &es)
            .expect("harmonica vertices lie in the host")
    }
}

fn two(s: &BTreeSet<Color>) -> Option<[Color; 2]> {
    let v: Vec<_> = s.iter().copied().collect();
    (v.len() == 2).then(|| [v[0], v[1]])
}

struct Search<'a> {
    host: &'a PlaneGraph,
    lists: &'a ListAssignment,
    target: (VertexId, VertexId),
    root_path: (VertexId, VertexId),
    root_government: Government,
    rules: Vec<RuleApplication>,
}

impl Search<'_> {
    fn candidate(&self) -> GovernmentHarmonica {
        GovernmentHarmonica {
            path: self.root_path,
            target: self.target,
            government: self.root_government.clone(),
            rules: self.rules.clone(),
        }
    }

    /// Every level is a canvas precoloured on its current edge, with the
    /// target on its outer face.
    fn levels_ok(&self) -> bool {
        let h = self.candidate();
        let mut path = self.root_path;
        for (i, r) in self.rules.iter().enumerate() {
            let (vs, es) = h.level(i);
            let Ok(g) = self.host.edge_subgraph(&vs, &es) else {
                return false;
            };
            if g.component_count() != 1 || !g.outer_edges().contains(&edge(self.target.0, self.target.1)) {
                return false;
            }
            if validate_canvas(g, Precolored::path(&[path.0, path.1]), self.lists.clone()).is_err() {
                return false;
            }
            path = match *r {
                RuleApplication::Triangle { u1, u2, .. } => (u1, u2),
                RuleApplication::Fan {
                    path: (a, b),
                    z,
                    deleted,
                    ..
                } => (z, if deleted == a { b } else { a }),
                _ => path,
            };
        }
        true
    }

    fn push_and_check(&mut self, r: RuleApplication) -> bool {
        self.rules.push(r);
        if self.levels_ok() {
            return true;
        }
        self.rules.pop();
        false
    }

    fn go(&mut self, path: (VertexId, VertexId), gov: &Government, deleted: &BTreeSet<VertexId>) -> bool {
        let (a, b) = path;
        let (t0, t1) = self.target;
        if edge(a, b) == edge(t0, t1) && self.push_and_check(RuleApplication::Trivial { path }) {
            return true;
        }
        match gov.kind() {
            GovernmentKind::Dictatorship {
                dictator: z,
                color: c,
                satellites,
            } => {
                let (z, c) = (*z, *c);
                let other = if z == a { b } else { a };
                let shared: Vec<VertexId> = [t0, t1].into_iter().filter(|v| *v == a || *v == b).collect();
                if shared == [z] {
                    let far = if t0 == z { t1 } else { t0 };
                    if !deleted.contains(&far)
                        && self.push_and_check(RuleApplication::Meet {
                            path,
                            dictator: z,
                            target: self.target,
                        })
                    {
                        return true;
                    }
                }
                let mut nbrs: Vec<VertexId> = self.host.neighbors(z).filter(|v| !deleted.contains(v)).collect();
                nbrs.sort_unstable();
                for (i, &u1) in nbrs.iter().enumerate() {
                    for &u2 in &nbrs[i + 1..] {
                        if !self.host.has_edge(u1, u2) {
                            continue;
                        }
                        let l0_of = |u: VertexId| -> Option<BTreeSet<Color>> {
                            if u == other {
                                Some(satellites.clone())
                            } else {
                                let l = self.lists.of(u);
                                (l.len() == 3 && l.contains(&c)).then(|| l.into_iter().filter(|&x| x != c).collect())
                            }
                        };
                        let (Some(m1), Some(m2)) = (l0_of(u1), l0_of(u2)) else {
                            continue;
                        };
                        let Some(l0) = two(&m1).filter(|_| m1 == m2) else {
                            continue;
                        };
                        let Some(next) = Government::democracy((u1, u2), l0[0], l0[1]) else {
                            continue;
                        };
                        let mut del = deleted.clone();
                        del.insert(z);
                        if u1 != other && u2 != other {
                            del.insert(other);
                        }
                        self.rules.push(RuleApplication::Triangle {
                            path,
                            z,
                            color: c,
                            u1,
                            u2,
                            l0,
                        });
                        if self.go((u1, u2), &next, &del) {
                            return true;
                        }
                        self.rules.pop();
                    }
                }
            }
            GovernmentKind::Democracy { colors } => {
                let l0: BTreeSet<Color> = [colors.0, colors.1].into();
                let l0a = [colors.0.min(colors.1), colors.0.max(colors.1)];
                let mut common: Vec<VertexId> = self
                    .host
                    .neighbors(a)
                    .filter(|&z| self.host.has_edge(b, z) && !deleted.contains(&z))
                    .collect();
                common.sort_unstable();
                for z in common {
                    let lz = self.lists.of(z);
                    if lz.len() != 3 || !l0.is_subset(&lz) {
                        continue;
                    }
                    let c = *lz.difference(&l0).next().unwrap();
                    for (gone, kept) in [(a, b), (b, a)] {
                        let Some(next) = Government::dictatorship((z, kept), z, c, l0.iter().copied()) else {
                            continue;
                        };
                        let mut del = deleted.clone();
                        del.insert(gone);
                        self.rules.push(RuleApplication::Fan {
                            path,
                            z,
                            color: c,
                            l0: l0a,
                            deleted: gone,
                        });
                        if self.go((z, kept), &next, &del) {
                            return true;
                        }
                        self.rules.pop();
                    }
                }
            }
        }
        false
    }
}

/// A harmonica from `p` to `p_prime` with government `c` contained in `t`,
/// found by trying every rule at every level.
pub fn find_government_harmonica(
    t: &Canvas,
    p: (VertexId, VertexId),
    p_prime: (VertexId, VertexId),
    c: &Government,
) -> Option<GovernmentHarmonica> {
    let g = t.graph();
    if c.set().path() != p || !g.has_edge(p.0, p.1) || !g.has_edge(p_prime.0, p_prime.1) {
        return None;
    }
    let outer = g.outer_edges();
    if !outer.contains(&edge(p.0, p.1)) || !outer.contains(&edge(p_prime.0, p_prime.1)) {
        return None;
    }
    let mut s = Search {
        host: g,
        lists: t.lists(),
        target: p_prime,
        root_path: p,
        root_government: c.clone(),
        rules: Vec::new(),
    };
    s.go(p, c, &BTreeSet::new()).then(|| s.candidate())
}

/// Vertices breaking the list-size-three property of harmonica vertices
/// outside the starting edge.
pub fn harmonica_list_violations(h: &GovernmentHarmonica, lists: &ListAssignment) -> Vec<VertexId> {
    let (vs, es) = h.level(0);
    let degree = |v: VertexId| es.iter().filter(|&&(a, b)| a == v || b == v).count();
    vs.into_iter()
        .filter(|&v| v != h.path.0 && v != h.path.1)
        .filter(|&v| !(v == h.target.0 || v == h.target.1) || degree(v) >= 2)
        .filter(|&v| lists.size(v) != 3)
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConvertError {
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(&'static str),
    #[error("converted structure does not verify: {0}")]
    DoesNotVerify(String),
}

impl From<VerifyFailure> for ConvertError {
    fn from(f: VerifyFailure) -> Self {
        ConvertError::DoesNotVerify(f.to_string())
    }
}

/// The coloring harmonica obtained from a government harmonica whose
/// outgoing set is dictated at `w` in colour `d`.
#[derive(Debug, Clone)]
pub struct ConvertedHarmonica {
    pub certificate: HarmonicaCertificate,
    /// `L` with `d` removed from the list of `w`.
    pub lists: ListAssignment,
    /// Harmonica vertices minus degree-one ends of the two edges.
    pub vertices: BTreeSet<VertexId>,
    pub w: VertexId,
}

pub fn convert_harmonica(
    host: &PlaneGraph,
    lists: &ListAssignment,
    h: &GovernmentHarmonica,
    d: Color,
) -> Result<ConvertedHarmonica, ConvertError> {
    use ConvertError::HypothesisViolated as Bad;
    let hg = h.graph(host);
    let out = phi(&hg, lists, h.government.set(), h.target).map_err(|_| Bad("target edge lies in the harmonica"))?;
    let Ok(Classification::Government(dict)) = classify(&out) else {
        return Err(Bad("outgoing set is a dictatorship"));
    };
    let Some((w, dc)) = dict.dictator() else {
        return Err(Bad("outgoing set is a dictatorship"));
    };
    if dc != d {
        return Err(Bad("dictated color is d"));
    }
    let w_prime = if w == h.target.0 { h.target.1 } else { h.target.0 };
    let (u, v, origin) = match h.government.dictator() {
        Some((u, c)) => {
            let v = if u == h.path.0 { h.path.1 } else { h.path.0 };
            if lists.of(u) != BTreeSet::from([c]) {
                return Err(Bad("|L(u)| = 1 at the dictator"));
            }
            if hg.degree(v) >= 2 && lists.of(v).difference(&lists.of(u)).count() != 2 {
                return Err(Bad("|L(v) - L(u)| = 2"));
            }
            (u, v, Origin::Vertex(u))
        }
        None => {
            let (u, v) = h.path;
            if lists.size(u) != 2 || lists.size(v) != 2 {
                return Err(Bad("|L(u)| = |L(v)| = 2"));
            }
            (u, v, Origin::Edge([u, v]))
        }
    };
    if u == w || v == w {
        return Err(Bad("u, v, w pairwise distinct"));
    }

    let mut steps = Vec::new();
    for r in &h.rules {
        match *r {
            RuleApplication::Triangle { z, u1, u2, l0, .. } => steps.push(HarmonicaStep::Start {
                u: z,
                x: u1,
                y: u2,
                residual: l0,
            }),
            RuleApplication::Fan {
                path: (a, b), z, l0, ..
            } if z == w => {
                steps.push(HarmonicaStep::Base {
                    u: a,
                    v: b,
                    w,
                    residual: l0,
                });
                break;
            }
            RuleApplication::Fan {
                path: (a, b), z, l0, ..
            } => steps.push(HarmonicaStep::Step {
                u: a,
                v: b,
                z,
                residual: l0,
            }),
            RuleApplication::Trivial { .. } | RuleApplication::Meet { .. } => {}
        }
    }
    let mut new_lists = lists.clone();
    new_lists.set(w, lists.of(w).into_iter().filter(|&x| x != d));
    let certificate = HarmonicaCertificate { origin, steps, to: w };

    let mut vertices = h.vertices();
    for end in [v, w_prime] {
        if hg.degree(end) == 1 {
            vertices.remove(&end);
        }
    }
    if certificate.vertices() != vertices {
        return Err(ConvertError::DoesNotVerify(
            "certificate vertices differ from the reduced harmonica".into(),
        ));
    }
    verify_coloring_harmonica(host, &new_lists, &certificate, origin, w)?;
    Ok(ConvertedHarmonica {
        certificate,
        lists: new_lists,
        vertices,
        w,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::governments::{find_confederacy, find_government};
    use crate::harmonica::find_coloring_harmonica;

    fn g(rot: &[(VertexId, &[VertexId])], outer: &[VertexId]) -> PlaneGraph {
        PlaneGraph::new(rot.iter().map(|(v, r)| (*v, r.to_vec())).collect(), outer.to_vec()).unwrap()
    }

    fn lists(l: &[(VertexId, &[Color])]) -> ListAssignment {
        l.iter().map(|(v, c)| (*v, c.iter().copied().collect())).collect()
    }

    fn edge_graph() -> PlaneGraph {
        g(&[(1, &[2]), (2, &[1])], &[1, 2])
    }

    #[test]
    fn single_edge_is_trivial() {
        let l = lists(&[(1, &[1, 2]), (2, &[1, 2, 3])]);
        let t = validate_canvas(edge_graph(), Precolored::path(&[1, 2]), l).unwrap();
        let gov = Government::democracy((1, 2), 1, 2).unwrap();
        let h = find_government_harmonica(&t, (1, 2), (1, 2), &gov).unwrap();
        assert_eq!(h.rule_trace(), vec![1]);
        let gov = Government::dictatorship((1, 2), 1, 1, [2, 3]).unwrap();
        assert_eq!(
            find_government_harmonica(&t, (1, 2), (2, 1), &gov)
                .unwrap()
                .rule_trace(),
            vec![1]
        );
    }

    #[test]
    fn two_edges_meeting_at_the_dictator() {
        // path 1-2-3, P = 12 with dictator 2, P' = 23
        let p3 = g(&[(1, &[2]), (2, &[1, 3]), (3, &[2])], &[1, 2, 3, 2]);
        let l = lists(&[(1, &[1, 2, 3]), (2, &[1]), (3, &[2, 3, 4])]);
        let t = validate_canvas(p3, Precolored::path(&[1, 2]), l).unwrap();
        let gov = Government::dictatorship((1, 2), 2, 1, [2, 3]).unwrap();
        let h = find_government_harmonica(&t, (1, 2), (2, 3), &gov).unwrap();
        assert_eq!(h.rule_trace(), vec![2]);
        assert!(harmonica_list_violations(&h, t.lists()).is_empty());
        // a democracy cannot use the second rule
        let gov = Government::democracy((1, 2), 2, 3).unwrap();
        assert!(find_government_harmonica(&t, (1, 2), (2, 3), &gov).is_none());
    }

    #[test]
    fn triangle_democracy_converts_to_base() {
        // P = 12 democracy on {1,2}; z = 3 with list {1,2,5}; P' = 3-1 dictated at 3 in 5
        let tri = g(&[(1, &[2, 3]), (2, &[3, 1]), (3, &[1, 2])], &[1, 2, 3]);
        let l = lists(&[(1, &[1, 2]), (2, &[1, 2]), (3, &[1, 2, 5])]);
        let t = validate_canvas(tri.clone(), Precolored::path(&[1, 2]), l.clone()).unwrap();
        let gov = Government::democracy((1, 2), 1, 2).unwrap();
        let h = find_government_harmonica(&t, (1, 2), (3, 1), &gov).unwrap();
        assert_eq!(h.rule_trace(), vec![4, 1]);
        let conv = convert_harmonica(&tri, &l, &h, 5).unwrap();
        assert_eq!(
            conv.certificate.steps,
            vec![HarmonicaStep::Base {
                u: 1,
                v: 2,
                w: 3,
                residual: [1, 2]
            }]
        );
        assert_eq!(conv.lists.of(3), BTreeSet::from([1, 2]));
    }

    /// u=1, v=2 (x), y=3, w=4, w'=5 hanging off w.
    fn k2_with_tail() -> (PlaneGraph, ListAssignment) {
        let graph = g(
            &[
                (1, &[2, 3]),
                (2, &[4, 3, 1]),
                (3, &[1, 2, 4]),
                (4, &[5, 3, 2]),
                (5, &[4]),
            ],
            &[1, 2, 4, 5, 4, 3],
        );
        let l = lists(&[
            (1, &[1]),
            (2, &[1, 2, 3]),
            (3, &[1, 2, 3]),
            (4, &[2, 3, 9]),
            (5, &[4, 5, 9]),
        ]);
        (graph, l)
    }

    #[test]
    fn k2_strip_recast() {
        let (graph, l) = k2_with_tail();
        let t = validate_canvas(graph.clone(), Precolored::path(&[1, 2]), l.clone()).unwrap();
        let gov = Government::dictatorship((1, 2), 1, 1, [2, 3]).unwrap();
        let h = find_government_harmonica(&t, (1, 2), (4, 5), &gov).unwrap();
        assert_eq!(h.rule_trace(), vec![3, 4, 2]);
        assert!(harmonica_list_violations(&h, &l).is_empty());
        let conv = convert_harmonica(&graph, &l, &h, 9).unwrap();
        // w' has degree one and is dropped
        assert!(!conv.vertices.contains(&5));
        let direct = find_coloring_harmonica(&graph, &conv.lists, 1, 4).unwrap();
        assert_eq!(conv.certificate, direct);
    }

    #[test]
    fn conversion_checks_hypotheses() {
        let (graph, l) = k2_with_tail();
        let t = validate_canvas(graph.clone(), Precolored::path(&[1, 2]), l.clone()).unwrap();
        let gov = Government::dictatorship((1, 2), 1, 1, [2, 3]).unwrap();
        let h = find_government_harmonica(&t, (1, 2), (4, 5), &gov).unwrap();
        assert_eq!(
            convert_harmonica(&graph, &l, &h, 2).unwrap_err(),
            ConvertError::HypothesisViolated("dictated color is d")
        );
    }

    #[test]
    fn outgoing_set_is_a_single_government() {
        let (graph, l) = k2_with_tail();
        let t = validate_canvas(graph, Precolored::path(&[1, 2]), l).unwrap();
        let gov = Government::dictatorship((1, 2), 1, 1, [2, 3]).unwrap();
        let h = find_government_harmonica(&t, (1, 2), (4, 5), &gov).unwrap();
        let hg = h.graph(t.graph());
        let out = phi(&hg, t.lists(), gov.set(), (4, 5)).unwrap();
        assert!(find_government(&out).is_some());
        assert!(find_confederacy(&out).is_none());
    }
}
