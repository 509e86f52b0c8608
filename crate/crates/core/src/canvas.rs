//! Canvases: a plane graph, a precoloured subgraph of its outer boundary and
//! a list assignment with at least five colours inside and three on the
//! boundary away from the precoloured part.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::plane_graph::{edge, Edge, GraphError, GraphJson, PlaneGraph, VertexId};

pub type Color = u32;

/// Per-vertex colour lists. Entries for vertices outside the graph are allowed
/// and ignored.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct ListAssignment(BTreeMap<VertexId, BTreeSet<Color>>);

impl ListAssignment {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, v: VertexId) -> Option<&BTreeSet<Color>> {
        self.0.get(&v)
    }

    /// The list of `v`, or the empty set.
    pub fn of(&self, v: VertexId) -> BTreeSet<Color> {
        self.0.get(&v).cloned().unwrap_or_default()
    }

    pub fn size(&self, v: VertexId) -> usize {
        self.0.get(&v).map_or(0, BTreeSet::len)
    }

    pub fn set(&mut self, v: VertexId, colors: impl IntoIterator<Item = Color>) {
        self.0.insert(v, colors.into_iter().collect());
    }

    pub fn with(mut self, v: VertexId, colors: impl IntoIterator<Item = Color>) -> Self {
        self.set(v, colors);
        self
    }

    pub fn iter(&self) -> impl Iterator<Item = (VertexId, &BTreeSet<Color>)> {
        self.0.iter().map(|(v, l)| (*v, l))
    }
}

impl FromIterator<(VertexId, BTreeSet<Color>)> for ListAssignment {
    fn from_iter<I: IntoIterator<Item = (VertexId, BTreeSet<Color>)>>(iter: I) -> Self {
        ListAssignment(iter.into_iter().collect())
    }
}

/// The precoloured subgraph `S`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Precolored {
    pub vertices: BTreeSet<VertexId>,
    pub edges: BTreeSet<Edge>,
}

impl Precolored {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn vertices(vs: impl IntoIterator<Item = VertexId>) -> Self {
        Precolored {
            vertices: vs.into_iter().collect(),
            edges: BTreeSet::new(),
        }
    }

    /// The path `p[0] p[1] ...` as a subgraph.
    pub fn path(p: &[VertexId]) -> Self {
        Precolored {
            vertices: p.iter().copied().collect(),
            edges: p.windows(2).map(|w| edge(w[0], w[1])).collect(),
        }
    }

    /// All proper colourings of `S` from `lists`, by exhaustive search.
    pub fn colorings(&self, lists: &ListAssignment) -> Vec<BTreeMap<VertexId, Color>> {
        let order: Vec<_> = self.vertices.iter().copied().collect();
        let mut out = Vec::new();
        let mut cur = BTreeMap::new();
        self.extend(&order, lists, &mut cur, &mut out, usize::MAX);
        out
    }

    pub fn is_colorable(&self, lists: &ListAssignment) -> bool {
        let order: Vec<_> = self.vertices.iter().copied().collect();
        let mut out = Vec::new();
        self.extend(&order, lists, &mut BTreeMap::new(), &mut out, 1);
        !out.is_empty()
    }

    fn extend(
        &self,
        order: &[VertexId],
        lists: &ListAssignment,
        cur: &mut BTreeMap<VertexId, Color>,
        out: &mut Vec<BTreeMap<VertexId, Color>>,
        limit: usize,
    ) {
        if out.len() >= limit {
            return;
        }
        let Some((&v, rest)) = order.split_first() else {
            out.push(cur.clone());
            return;
        };
        for c in lists.of(v) {
            let clash = cur.iter().any(|(&u, &cu)| cu == c && self.edges.contains(&edge(u, v)));
            if !clash {
                cur.insert(v, c);
                self.extend(rest, lists, cur, out, limit);
                cur.remove(&v);
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "clause")]
pub enum Violation {
    MissingList { vertex: VertexId },
    InteriorBelowFive { vertex: VertexId, size: usize },
    OuterBelowThree { vertex: VertexId, size: usize },
    SVertexNotInGraph { vertex: VertexId },
    SVertexNotOnBoundary { vertex: VertexId },
    SEdgeNotOnBoundary { u: VertexId, v: VertexId },
    SNotColorable,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::MissingList { vertex } => write!(f, "vertex {vertex} has an empty list"),
            Violation::InteriorBelowFive { vertex, size } => {
                write!(f, "interior vertex below 5: {vertex} has {size}")
            }
            Violation::OuterBelowThree { vertex, size } => {
                write!(f, "outer vertex below 3: {vertex} has {size}")
            }
            Violation::SVertexNotInGraph { vertex } => write!(f, "S vertex {vertex} not in graph"),
            Violation::SVertexNotOnBoundary { vertex } => {
                write!(f, "S vertex {vertex} not on outer boundary")
            }
            Violation::SEdgeNotOnBoundary { u, v } => write!(f, "S edge {u}-{v} not on outer boundary"),
            Violation::SNotColorable => write!(f, "S has no proper L-coloring"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Canvas {
    graph: PlaneGraph,
    s: Precolored,
    lists: ListAssignment,
}

impl Canvas {
    pub fn graph(&self) -> &PlaneGraph {
        &self.graph
    }

    pub fn precolored(&self) -> &Precolored {
        &self.s
    }

    pub fn lists(&self) -> &ListAssignment {
        &self.lists
    }

    pub fn into_parts(self) -> (PlaneGraph, Precolored, ListAssignment) {
        (self.graph, self.s, self.lists)
    }
}

/// Every violated canvas clause, or the canvas.
pub fn validate_canvas(graph: PlaneGraph, s: Precolored, lists: ListAssignment) -> Result<Canvas, Vec<Violation>> {
    let violations = canvas_violations(&graph, &s, &lists);
    if violations.is_empty() {
        Ok(Canvas { graph, s, lists })
    } else {
        Err(violations)
    }
}

pub fn canvas_violations(graph: &PlaneGraph, s: &Precolored, lists: &ListAssignment) -> Vec<Violation> {
    let mut out = Vec::new();
    let boundary = graph.outer_vertices();
    let boundary_edges = graph.outer_edges();
    for v in graph.vertices() {
        let size = lists.size(v);
        if size == 0 {
            out.push(Violation::MissingList { vertex: v });
        } else if !boundary.contains(&v) && size < 5 {
            out.push(Violation::InteriorBelowFive { vertex: v, size });
        } else if boundary.contains(&v) && !s.vertices.contains(&v) && size < 3 {
            out.push(Violation::OuterBelowThree { vertex: v, size });
        }
    }
    for &v in &s.vertices {
        if !graph.contains_vertex(v) {
            out.push(Violation::SVertexNotInGraph { vertex: v });
        } else if !boundary.contains(&v) {
            out.push(Violation::SVertexNotOnBoundary { vertex: v });
        }
    }
    for &(u, v) in &s.edges {
        if !boundary_edges.contains(&(u, v)) || !s.vertices.contains(&u) || !s.vertices.contains(&v) {
            out.push(Violation::SEdgeNotOnBoundary { u, v });
        }
    }
    if !s.is_colorable(lists) {
        out.push(Violation::SNotColorable);
    }
    out
}

/// `outer` contains `inner`: subgraph, equal `S`, equal lists on `inner`'s vertices.
pub fn contains_canvas(outer: &Canvas, inner: &Canvas) -> bool {
    let g = outer.graph();
    let h = inner.graph();
    h.vertices().all(|v| g.contains_vertex(v))
        && h.edges().iter().all(|&(a, b)| g.has_edge(a, b))
        && outer.precolored() == inner.precolored()
        && h.vertices().all(|v| outer.lists().get(v) == inner.lists().get(v))
}

/// Wire form of a canvas file.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct CanvasJson {
    pub vertices: Vec<VertexId>,
    pub rotations: BTreeMap<VertexId, Vec<VertexId>>,
    pub outer: Vec<VertexId>,
    pub lists: BTreeMap<VertexId, Vec<Color>>,
    #[serde(rename = "S", default)]
    pub s: PrecoloredJson,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize, PartialEq, Eq)]
pub struct PrecoloredJson {
    #[serde(default)]
    pub vertices: Vec<VertexId>,
    #[serde(default)]
    pub edges: Vec<[VertexId; 2]>,
}

impl CanvasJson {
    pub fn from_parts(graph: &PlaneGraph, s: &Precolored, lists: &ListAssignment) -> Self {
        let g = GraphJson::from(graph);
        CanvasJson {
            vertices: g.vertices,
            rotations: g.rotations,
            outer: g.outer,
            lists: lists.iter().map(|(v, l)| (v, l.iter().copied().collect())).collect(),
            s: PrecoloredJson {
                vertices: s.vertices.iter().copied().collect(),
                edges: s.edges.iter().map(|&(a, b)| [a, b]).collect(),
            },
        }
    }

    pub fn graph(&self) -> Result<PlaneGraph, GraphError> {
        PlaneGraph::from_parts(&self.vertices, &self.rotations, self.outer.clone())
    }

    pub fn list_assignment(&self) -> ListAssignment {
        self.lists
            .iter()
            .map(|(&v, l)| (v, l.iter().copied().collect()))
            .collect()
    }

    pub fn precolored(&self) -> Precolored {
        Precolored {
            vertices: self.s.vertices.iter().copied().collect(),
            edges: self.s.edges.iter().map(|&[a, b]| edge(a, b)).collect(),
        }
    }
}

impl From<&Canvas> for CanvasJson {
    fn from(c: &Canvas) -> Self {
        CanvasJson::from_parts(c.graph(), c.precolored(), c.lists())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(rot: &[(VertexId, &[VertexId])], outer: &[VertexId]) -> PlaneGraph {
        PlaneGraph::new(rot.iter().map(|(v, r)| (*v, r.to_vec())).collect(), outer.to_vec()).unwrap()
    }

    fn wheel5() -> PlaneGraph {
        // hub 0, rim 1..5
        g(
            &[
                (0, &[1, 5, 4, 3, 2]),
                (1, &[5, 0, 2]),
                (2, &[1, 0, 3]),
                (3, &[2, 0, 4]),
                (4, &[3, 0, 5]),
                (5, &[4, 0, 1]),
            ],
            &[1, 2, 3, 4, 5],
        )
    }

    #[test]
    fn single_edge_with_distinct_singletons_is_a_canvas() {
        let graph = g(&[(1, &[2]), (2, &[1])], &[1, 2]);
        let lists = ListAssignment::new().with(1, [1]).with(2, [2]);
        assert!(validate_canvas(graph.clone(), Precolored::path(&[1, 2]), lists).is_ok());
        let same = ListAssignment::new().with(1, [1]).with(2, [1]);
        assert_eq!(
            validate_canvas(graph, Precolored::path(&[1, 2]), same).unwrap_err(),
            vec![Violation::SNotColorable]
        );
    }

    #[test]
    fn outer_vertex_below_three() {
        let graph = g(&[(1, &[2, 3]), (2, &[3, 1]), (3, &[1, 2])], &[1, 2, 3]);
        let lists = ListAssignment::new()
            .with(1, [1, 2, 3])
            .with(2, [1, 2])
            .with(3, [1, 2, 3]);
        let err = validate_canvas(graph, Precolored::empty(), lists).unwrap_err();
        assert_eq!(err, vec![Violation::OuterBelowThree { vertex: 2, size: 2 }]);
        assert!(err[0].to_string().contains("outer vertex below 3"));
    }

    #[test]
    fn wheel_hub_below_five() {
        let mut lists = ListAssignment::new().with(0, [1, 2, 3, 4]);
        for v in 1..=5 {
            lists.set(v, [1, 2, 3]);
        }
        let err = validate_canvas(wheel5(), Precolored::empty(), lists).unwrap_err();
        assert_eq!(err, vec![Violation::InteriorBelowFive { vertex: 0, size: 4 }]);
        assert!(err[0].to_string().contains("interior vertex below 5"));
    }

    #[test]
    fn precolored_must_sit_on_boundary() {
        let mut lists = ListAssignment::new().with(0, [1, 2, 3, 4, 5]);
        for v in 1..=5 {
            lists.set(v, [1, 2, 3]);
        }
        let err = validate_canvas(wheel5(), Precolored::vertices([0]), lists.clone()).unwrap_err();
        assert_eq!(err, vec![Violation::SVertexNotOnBoundary { vertex: 0 }]);
        let chord = Precolored {
            vertices: BTreeSet::from([1, 3]),
            edges: BTreeSet::from([(1, 3)]),
        };
        let err = validate_canvas(wheel5(), chord, lists).unwrap_err();
        assert_eq!(err, vec![Violation::SEdgeNotOnBoundary { u: 1, v: 3 }]);
    }

    #[test]
    fn extra_list_entries_are_ignored() {
        let graph = g(&[(1, &[2]), (2, &[1])], &[1, 2]);
        let lists = ListAssignment::new().with(1, [1]).with(2, [2]).with(99, [7]);
        assert!(validate_canvas(graph, Precolored::path(&[1, 2]), lists).is_ok());
    }

    #[test]
    fn containment() {
        let full = g(&[(1, &[2, 3]), (2, &[3, 1]), (3, &[1, 2])], &[1, 2, 3]);
        let lists = ListAssignment::new().with(1, [1]).with(2, [2, 3, 4]).with(3, [2, 3, 4]);
        let s = Precolored::vertices([1]);
        let t = validate_canvas(full.clone(), s.clone(), lists.clone()).unwrap();
        assert!(contains_canvas(&t, &t));

        let mut e = full.edges();
        e.remove(&(2, 3));
        let path = full.edge_subgraph(&full.vertex_set(), &e).unwrap();
        let t2 = validate_canvas(path.clone(), s.clone(), lists.clone()).unwrap();
        assert!(contains_canvas(&t, &t2));

        let shrunk = lists.with(2, [2, 3, 5]);
        let t3 = validate_canvas(path, s, shrunk).unwrap();
        assert!(!contains_canvas(&t, &t3));
    }

    #[test]
    fn json_round_trip() {
        let graph = wheel5();
        let mut lists = ListAssignment::new().with(0, [1, 2, 3, 4, 5]);
        for v in 1..=5 {
            lists.set(v, [1, 2, 3]);
        }
        let t = validate_canvas(graph, Precolored::path(&[1, 2]), lists).unwrap();
        let text = serde_json::to_string(&CanvasJson::from(&t)).unwrap();
        let back: CanvasJson = serde_json::from_str(&text).unwrap();
        let t2 = validate_canvas(back.graph().unwrap(), back.precolored(), back.list_assignment()).unwrap();
        assert_eq!(t, t2);
    }
}
