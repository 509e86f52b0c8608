//! Exhaustive list-colouring search and extension sets of edge colourings.
//!
//! This is the ground truth every structural claim is checked against, so it
//! favours plain backtracking with forward checking over anything clever.

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::canvas::{Canvas, Color, ListAssignment};
use crate::plane_graph::{edge, Edge, GraphError, PlaneGraph, VertexId};

/// A (partial) assignment of colours to vertices.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Coloring(pub BTreeMap<VertexId, Color>);

impl Coloring {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, v: VertexId) -> Option<Color> {
        self.0.get(&v).copied()
    }

    pub fn with(mut self, v: VertexId, c: Color) -> Self {
        self.0.insert(v, c);
        self
    }

    pub fn insert(&mut self, v: VertexId, c: Color) {
        self.0.insert(v, c);
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (VertexId, Color)> + '_ {
        self.0.iter().map(|(v, c)| (*v, *c))
    }

    /// Colours every vertex of `graph` properly from `lists`.
    pub fn is_proper_for(&self, graph: &PlaneGraph, lists: &ListAssignment) -> bool {
        graph
            .vertices()
            .all(|v| self.get(v).is_some_and(|c| lists.of(v).contains(&c)))
            && graph.edges().iter().all(|&(a, b)| self.get(a) != self.get(b))
    }
}

impl FromIterator<(VertexId, Color)> for Coloring {
    fn from_iter<I: IntoIterator<Item = (VertexId, Color)>>(iter: I) -> Self {
        Coloring(iter.into_iter().collect())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolverError {
    #[error("pinned vertices {0} and {1} are adjacent and share color {2}")]
    PinnedConflict(VertexId, VertexId, Color),
    #[error("pinned color {1} is not in the list of {0}")]
    PinnedOutsideList(VertexId, Color),
    #[error("pinned vertex {0} is not in the graph")]
    PinnedUnknownVertex(VertexId),
    #[error("more than 128 distinct colors")]
    TooManyColors,
    #[error("{0}-{1} is not an edge with both ends on the outer boundary")]
    NotABoundaryEdge(VertexId, VertexId),
    #[error("coloring set is on {0:?}, expected {1:?}")]
    PathMismatch((VertexId, VertexId), (VertexId, VertexId)),
    #[error("edge coloring ({0}, {1}) is not proper")]
    ImproperMember(Color, Color),
    #[error("{0}-{1} is not a chord separating the two paths")]
    NotASeparatingChord(VertexId, VertexId),
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

pub type SolverResult<T> = Result<T, SolverError>;

/// Compact search problem: vertices indexed by ascending id, colours by
/// ascending value, domains as bitmasks.
struct Problem {
    ids: Vec<VertexId>,
    adj: Vec<Vec<usize>>,
    palette: Vec<Color>,
    domains: Vec<u128>,
}

impl Problem {
    fn build(graph: &PlaneGraph, lists: &ListAssignment, pinned: &Coloring) -> SolverResult<Problem> {
        for (v, c) in pinned.iter() {
            if !graph.contains_vertex(v) {
                return Err(SolverError::PinnedUnknownVertex(v));
            }
            if !lists.of(v).contains(&c) {
                return Err(SolverError::PinnedOutsideList(v, c));
            }
            for w in graph.neighbors(v) {
                if v < w && pinned.get(w) == Some(c) {
                    return Err(SolverError::PinnedConflict(v, w, c));
                }
            }
        }
        let ids: Vec<VertexId> = graph.vertices().collect();
        let index: BTreeMap<VertexId, usize> = ids.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let palette: Vec<Color> = ids
            .iter()
            .flat_map(|&v| lists.of(v))
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        if palette.len() > 128 {
            return Err(SolverError::TooManyColors);
        }
        let bit = |c: Color| 1u128 << palette.binary_search(&c).unwrap();
        let adj = ids
            .iter()
            .map(|&v| graph.neighbors(v).map(|w| index[&w]).collect())
            .collect();
        let domains = ids
            .iter()
            .map(|&v| match pinned.get(v) {
                Some(c) => bit(c),
                None => lists.of(v).into_iter().fold(0, |m, c| m | bit(c)),
            })
            .collect();
        Ok(Problem {
            ids,
            adj,
            palette,
            domains,
        })
    }

    /// Fail-first search; `color_order` lists palette indices in try order.
    fn solve(&self, color_order: &[u8]) -> Option<Coloring> {
        let n = self.ids.len();
        let mut domains = self.domains.clone();
        let mut assigned = vec![None; n];
        if domains.contains(&0) {
            return None;
        }
        // propagate singleton domains of pinned vertices up front
        if self.dfs(&mut domains, &mut assigned, color_order) {
            Some(
                assigned
                    .iter()
                    .enumerate()
                    .map(|(i, c)| (self.ids[i], self.palette[c.unwrap() as usize]))
                    .collect(),
            )
        } else {
            None
        }
    }

    fn dfs(&self, domains: &mut Vec<u128>, assigned: &mut Vec<Option<u8>>, color_order: &[u8]) -> bool {
        let Some(v) = (0..assigned.len())
            .filter(|&i| assigned[i].is_none())
            .min_by_key(|&i| domains[i].count_ones())
        else {
            return true;
        };
        for &c in color_order {
            let b = 1u128 << c;
            if domains[v] & b == 0 {
                continue;
            }
            let saved = domains.clone();
            assigned[v] = Some(c);
            domains[v] = b;
            let mut wiped = false;
            for &w in &self.adj[v] {
                if assigned[w].is_none() {
                    domains[w] &= !b;
                    if domains[w] == 0 {
                        wiped = true;
                        break;
                    }
                }
            }
            if !wiped && self.dfs(domains, assigned, color_order) {
                return true;
            }
            *domains = saved;
            assigned[v] = None;
        }
        false
    }

    fn ascending(&self) -> Vec<u8> {
        (0..self.palette.len() as u8).collect()
    }
}

/// A proper list colouring extending `pinned`, or `None` if none exists.
pub fn find_coloring(graph: &PlaneGraph, lists: &ListAssignment, pinned: &Coloring) -> SolverResult<Option<Coloring>> {
    let p = Problem::build(graph, lists, pinned)?;
    Ok(p.solve(&p.ascending()))
}

/// Like [`find_coloring`] but tries colours in a random order, so repeated
/// calls spread over the solution space.
pub fn sample_coloring<R: Rng>(
    graph: &PlaneGraph,
    lists: &ListAssignment,
    pinned: &Coloring,
    rng: &mut R,
) -> SolverResult<Option<Coloring>> {
    let p = Problem::build(graph, lists, pinned)?;
    let mut order = p.ascending();
    order.shuffle(rng);
    Ok(p.solve(&order))
}

/// Every proper list colouring extending `pinned`, lexicographic by vertex id
/// then colour.
pub struct Colorings {
    problem: Problem,
    // per depth: candidates left, domains before the choice, chosen colour
    stack: Vec<(u128, Vec<u128>, u8)>,
    started: bool,
}

impl Iterator for Colorings {
    type Item = Coloring;

    fn next(&mut self) -> Option<Coloring> {
        let n = self.problem.ids.len();
        if !self.started {
            self.started = true;
            if n == 0 || self.problem.domains.contains(&0) {
                return None;
            }
            let d = self.problem.domains.clone();
            self.stack.push((d[0], d, 0));
        }
        while !self.stack.is_empty() {
            let depth = self.stack.len() - 1;
            let top = &mut self.stack[depth];
            if top.0 == 0 {
                self.stack.pop();
                continue;
            }
            let c = top.0.trailing_zeros() as u8;
            let b = 1u128 << c;
            top.0 &= !b;
            top.2 = c;
            let mut domains = top.1.clone();
            domains[depth] = b;
            let wiped = self.problem.adj[depth].iter().any(|&w| {
                if w > depth {
                    domains[w] &= !b;
                    domains[w] == 0
                } else {
                    false
                }
            });
            if wiped {
                continue;
            }
            if depth + 1 == n {
                return Some(
                    self.stack
                        .iter()
                        .enumerate()
                        .map(|(i, f)| (self.problem.ids[i], self.problem.palette[f.2 as usize]))
                        .collect(),
                );
            }
            self.stack.push((domains[depth + 1], domains, 0));
        }
        None
    }
}

pub fn enumerate_colorings(graph: &PlaneGraph, lists: &ListAssignment, pinned: &Coloring) -> SolverResult<Colorings> {
    Ok(Colorings {
        problem: Problem::build(graph, lists, pinned)?,
        stack: Vec::new(),
        started: false,
    })
}

/// A set of proper colourings of a single edge `path.0 path.1`; members are
/// `(colour at path.0, colour at path.1)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeColoringSet {
    path: (VertexId, VertexId),
    members: BTreeSet<(Color, Color)>,
}

impl EdgeColoringSet {
    pub fn new(path: (VertexId, VertexId), members: impl IntoIterator<Item = (Color, Color)>) -> SolverResult<Self> {
        let members: BTreeSet<_> = members.into_iter().collect();
        if let Some(&(a, b)) = members.iter().find(|(a, b)| a == b) {
            return Err(SolverError::ImproperMember(a, b));
        }
        Ok(EdgeColoringSet { path, members })
    }

    pub fn empty(path: (VertexId, VertexId)) -> Self {
        EdgeColoringSet {
            path,
            members: BTreeSet::new(),
        }
    }

    /// All proper list colourings of the edge.
    pub fn all(path: (VertexId, VertexId), lists: &ListAssignment) -> Self {
        let members = lists
            .of(path.0)
            .into_iter()
            .flat_map(|a| {
                lists
                    .of(path.1)
                    .into_iter()
                    .filter(move |&b| b != a)
                    .map(move |b| (a, b))
            })
            .collect();
        EdgeColoringSet { path, members }
    }

    pub fn path(&self) -> (VertexId, VertexId) {
        self.path
    }

    pub fn members(&self) -> &BTreeSet<(Color, Color)> {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, m: (Color, Color)) -> bool {
        self.members.contains(&m)
    }

    pub fn is_subset(&self, other: &EdgeColoringSet) -> bool {
        self.path == other.path && self.members.is_subset(&other.members)
    }

    /// `C(v)`: the colours `v` receives across the set.
    pub fn colors_at(&self, v: VertexId) -> BTreeSet<Color> {
        if v == self.path.0 {
            self.members.iter().map(|m| m.0).collect()
        } else if v == self.path.1 {
            self.members.iter().map(|m| m.1).collect()
        } else {
            BTreeSet::new()
        }
    }

    /// The same set described along the reversed edge.
    pub fn reversed(&self) -> Self {
        EdgeColoringSet {
            path: (self.path.1, self.path.0),
            members: self.members.iter().map(|&(a, b)| (b, a)).collect(),
        }
    }

    /// Re-express on `path` given in either orientation.
    pub fn oriented(&self, path: (VertexId, VertexId)) -> SolverResult<Self> {
        if path == self.path {
            Ok(self.clone())
        } else if path == (self.path.1, self.path.0) {
            Ok(self.reversed())
        } else {
            Err(SolverError::PathMismatch(self.path, path))
        }
    }

    pub fn respects(&self, lists: &ListAssignment) -> bool {
        let (la, lb) = (lists.of(self.path.0), lists.of(self.path.1));
        self.members.iter().all(|(a, b)| la.contains(a) && lb.contains(b))
    }

    pub fn subset(&self, keep: impl Fn(&(Color, Color)) -> bool) -> Self {
        EdgeColoringSet {
            path: self.path,
            members: self.members.iter().copied().filter(|m| keep(m)).collect(),
        }
    }

    pub fn union(&self, other: &EdgeColoringSet) -> SolverResult<Self> {
        let other = other.oriented(self.path)?;
        Ok(EdgeColoringSet {
            path: self.path,
            members: self.members.union(&other.members).copied().collect(),
        })
    }
}

fn check_boundary_edge(graph: &PlaneGraph, e: (VertexId, VertexId)) -> SolverResult<()> {
    if graph.has_edge(e.0, e.1) && graph.on_outer(e.0) && graph.on_outer(e.1) {
        Ok(())
    } else {
        Err(SolverError::NotABoundaryEdge(e.0, e.1))
    }
}

/// Colourings of `target` that extend to a full colouring whose restriction
/// to `from.path()` lies in `from`. Computed by one pinned existence query
/// per candidate pair.
pub fn phi(
    graph: &PlaneGraph,
    lists: &ListAssignment,
    from: &EdgeColoringSet,
    target: (VertexId, VertexId),
) -> SolverResult<EdgeColoringSet> {
    let (a, b) = from.path();
    let mut out = BTreeSet::new();
    let candidates = EdgeColoringSet::all(target, lists);
    for &(ca, cb) in from.members() {
        let base = Coloring::new().with(a, ca).with(b, cb);
        if Problem::build(graph, lists, &base).is_err() {
            continue;
        }
        for &(x, y) in candidates.members() {
            if out.contains(&(x, y)) {
                continue;
            }
            let agrees = |v: VertexId, c: Color| base.get(v).is_none_or(|bc| bc == c);
            if !agrees(target.0, x) || !agrees(target.1, y) {
                continue;
            }
            let pinned = base.clone().with(target.0, x).with(target.1, y);
            if let Ok(p) = Problem::build(graph, lists, &pinned) {
                if p.solve(&p.ascending()).is_some() {
                    out.insert((x, y));
                }
            }
        }
    }
    Ok(EdgeColoringSet {
        path: target,
        members: out,
    })
}

/// The same set as [`phi`], by enumerating every full colouring and
/// projecting. Exponential; kept as an independent route for cross-checks.
pub fn phi_by_enumeration(
    graph: &PlaneGraph,
    lists: &ListAssignment,
    from: &EdgeColoringSet,
    target: (VertexId, VertexId),
) -> SolverResult<EdgeColoringSet> {
    let (a, b) = from.path();
    let members = enumerate_colorings(graph, lists, &Coloring::new())?
        .filter(|c| from.contains((c.get(a).unwrap(), c.get(b).unwrap())))
        .map(|c| (c.get(target.0).unwrap(), c.get(target.1).unwrap()))
        .collect();
    Ok(EdgeColoringSet { path: target, members })
}

/// `Φ_T(P′, C)` on a canvas, with both edges required on the outer boundary.
pub fn extension_set(
    canvas: &Canvas,
    p: (VertexId, VertexId),
    c: &EdgeColoringSet,
    p_prime: (VertexId, VertexId),
) -> SolverResult<EdgeColoringSet> {
    let g = canvas.graph();
    check_boundary_edge(g, p)?;
    check_boundary_edge(g, p_prime)?;
    let c = c.oriented(p)?;
    phi(g, canvas.lists(), &c, p_prime)
}

/// The two closed arcs of the outer cycle between the ends of `u`.
fn outer_arcs(graph: &PlaneGraph, u: (VertexId, VertexId)) -> Option<(BTreeSet<VertexId>, BTreeSet<VertexId>)> {
    let walk = graph.outer_walk();
    let n = walk.len();
    let i = walk.iter().position(|&v| v == u.0)?;
    let j = walk.iter().position(|&v| v == u.1)?;
    let arc = |from: usize, to: usize| {
        let mut s = BTreeSet::new();
        let mut k = from;
        loop {
            s.insert(walk[k]);
            if k == to {
                break;
            }
            k = (k + 1) % n;
        }
        s
    };
    Some((arc(i, j), arc(j, i)))
}

/// Checks `Φ(P′, Φ(U, C)) = Φ(P′, C)` for a chord `U` separating `P` from `P′`.
/// `U = P′` is accepted as a degenerate separation.
pub fn check_chord_composition(
    canvas: &Canvas,
    p: (VertexId, VertexId),
    c: &EdgeColoringSet,
    u: (VertexId, VertexId),
    p_prime: (VertexId, VertexId),
) -> SolverResult<bool> {
    let g = canvas.graph();
    let chords = g.chords_of_outer()?;
    let degenerate = edge(u.0, u.1) == edge(p_prime.0, p_prime.1);
    if !degenerate && !chords.contains(&edge(u.0, u.1)) {
        return Err(SolverError::NotASeparatingChord(u.0, u.1));
    }
    let (a, b) = outer_arcs(g, u).ok_or(SolverError::NotASeparatingChord(u.0, u.1))?;
    let inside = |s: &BTreeSet<VertexId>, e: (VertexId, VertexId)| s.contains(&e.0) && s.contains(&e.1);
    let separates = (inside(&a, p) && inside(&b, p_prime)) || (inside(&b, p) && inside(&a, p_prime));
    if !separates {
        return Err(SolverError::NotASeparatingChord(u.0, u.1));
    }
    let direct = extension_set(canvas, p, c, p_prime)?;
    let through = phi(g, canvas.lists(), &phi(g, canvas.lists(), &c.oriented(p)?, u)?, p_prime)?;
    Ok(direct == through)
}

/// Number of proper colourings of a precoloured induced path `p q r` that do
/// not extend to the whole canvas. Requires a chordless outer cycle.
pub fn count_bad_wheel_colorings(canvas: &Canvas) -> SolverResult<usize> {
    let g = canvas.graph();
    let s = canvas.precolored();
    let violated = |m: &str| Err(SolverError::PreconditionViolated(m.to_string()));
    if s.vertices.len() != 3 || s.edges.len() != 2 {
        return violated("S is not a path of length two");
    }
    let ends: Vec<Edge> = s.edges.iter().copied().collect();
    let shared: Vec<VertexId> = [ends[0].0, ends[0].1]
        .into_iter()
        .filter(|v| *v == ends[1].0 || *v == ends[1].1)
        .collect();
    if shared.len() != 1 {
        return violated("S is not a path of length two");
    }
    let q = shared[0];
    let others: Vec<VertexId> = s.vertices.iter().copied().filter(|&v| v != q).collect();
    if g.has_edge(others[0], others[1]) {
        return violated("S is not induced");
    }
    // on a walk boundary a chord is any edge off the walk joining two walk vertices
    let outer_edges = g.outer_edges();
    if g.edges()
        .iter()
        .any(|&(a, b)| g.on_outer(a) && g.on_outer(b) && !outer_edges.contains(&(a, b)))
    {
        return violated("outer boundary has a chord");
    }
    let mut bad = 0;
    for col in s.colorings(canvas.lists()) {
        let pinned = Coloring(col);
        if find_coloring(g, canvas.lists(), &pinned)?.is_none() {
            bad += 1;
        }
    }
    Ok(bad)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canvas::{validate_canvas, Precolored};

    fn g(rot: &[(VertexId, &[VertexId])], outer: &[VertexId]) -> PlaneGraph {
        PlaneGraph::new(rot.iter().map(|(v, r)| (*v, r.to_vec())).collect(), outer.to_vec()).unwrap()
    }

    fn triangle() -> PlaneGraph {
        g(&[(1, &[2, 3]), (2, &[3, 1]), (3, &[1, 2])], &[1, 2, 3])
    }

    fn diamond() -> PlaneGraph {
        g(
            &[(1, &[2, 3]), (2, &[4, 3, 1]), (3, &[1, 2, 4]), (4, &[3, 2])],
            &[1, 2, 4, 3],
        )
    }

    fn edge_graph() -> PlaneGraph {
        g(&[(1, &[2]), (2, &[1])], &[1, 2])
    }

    /// Brute force over the full product of lists.
    fn product_colorings(graph: &PlaneGraph, lists: &ListAssignment) -> Vec<Coloring> {
        let ids: Vec<_> = graph.vertices().collect();
        let mut out = vec![Coloring::new()];
        for &v in &ids {
            out = out
                .into_iter()
                .flat_map(|c| lists.of(v).into_iter().map(move |x| c.clone().with(v, x)))
                .collect();
        }
        out.retain(|c| graph.edges().iter().all(|&(a, b)| c.get(a) != c.get(b)));
        out
    }

    #[test]
    fn two_colors_do_not_color_a_triangle() {
        let lists = ListAssignment::new().with(1, [1, 2]).with(2, [1, 2]).with(3, [1, 2]);
        assert_eq!(find_coloring(&triangle(), &lists, &Coloring::new()).unwrap(), None);
    }

    #[test]
    fn third_color_goes_to_w() {
        let lists = ListAssignment::new().with(1, [1, 2]).with(2, [1, 2]).with(3, [1, 2, 3]);
        let c = find_coloring(&triangle(), &lists, &Coloring::new()).unwrap().unwrap();
        assert_eq!(c.get(3), Some(3));
        assert!(c.is_proper_for(&triangle(), &lists));
        // 12 assignments in the product, exactly 2 proper
        assert_eq!(product_colorings(&triangle(), &lists).len(), 2);
        assert_eq!(
            enumerate_colorings(&triangle(), &lists, &Coloring::new())
                .unwrap()
                .count(),
            2
        );
    }

    #[test]
    fn single_edge() {
        let lists = ListAssignment::new().with(1, [1]).with(2, [1, 2]);
        let c = find_coloring(&edge_graph(), &lists, &Coloring::new()).unwrap().unwrap();
        assert_eq!(c, Coloring::new().with(1, 1).with(2, 2));
    }

    #[test]
    fn enumeration_counts_and_order() {
        let lists = ListAssignment::new().with(1, [1, 2]).with(2, [1, 2]);
        let all: Vec<_> = enumerate_colorings(&edge_graph(), &lists, &Coloring::new())
            .unwrap()
            .collect();
        assert_eq!(
            all,
            vec![
                Coloring::new().with(1, 1).with(2, 2),
                Coloring::new().with(1, 2).with(2, 1)
            ]
        );
        let l3 = ListAssignment::new()
            .with(1, [1, 2, 3])
            .with(2, [1, 2, 3])
            .with(3, [1, 2, 3]);
        let tri: Vec<_> = enumerate_colorings(&triangle(), &l3, &Coloring::new())
            .unwrap()
            .collect();
        assert_eq!(tri.len(), 6);
        let mut sorted = tri.clone();
        sorted.sort_by_key(|c| c.iter().map(|(_, x)| x).collect::<Vec<_>>());
        assert_eq!(tri, sorted);
    }

    #[test]
    fn diamond_count_matches_product() {
        let lists = diamond_lists();
        let n = enumerate_colorings(&diamond(), &lists, &Coloring::new())
            .unwrap()
            .count();
        assert_eq!(n, product_colorings(&diamond(), &lists).len());
    }

    #[test]
    fn pinned_conflicts() {
        let lists = ListAssignment::new().with(1, [1, 2]).with(2, [1, 2]);
        let pinned = Coloring::new().with(1, 1).with(2, 1);
        assert_eq!(
            find_coloring(&edge_graph(), &lists, &pinned),
            Err(SolverError::PinnedConflict(1, 2, 1))
        );
        assert_eq!(
            find_coloring(&edge_graph(), &lists, &Coloring::new().with(1, 5)),
            Err(SolverError::PinnedOutsideList(1, 5))
        );
    }

    fn diamond_lists() -> ListAssignment {
        ListAssignment::new()
            .with(1, [1, 2])
            .with(2, [1, 2, 3])
            .with(3, [1, 2, 3])
            .with(4, [1, 2, 3])
    }

    #[test]
    fn phi_on_single_edge_is_identity() {
        let lists = ListAssignment::new().with(1, [1, 2, 3]).with(2, [1, 2, 3]);
        let t = validate_canvas(edge_graph(), Precolored::path(&[1, 2]), lists).unwrap();
        let c = EdgeColoringSet::new((1, 2), [(1, 2), (3, 1)]).unwrap();
        assert_eq!(extension_set(&t, (1, 2), &c, (1, 2)).unwrap(), c);
    }

    #[test]
    fn phi_on_triangle() {
        let lists = ListAssignment::new().with(1, [1, 2]).with(2, [1, 2]).with(3, [1, 2, 3]);
        let t = validate_canvas(triangle(), Precolored::path(&[1, 2]), lists).unwrap();
        let c = EdgeColoringSet::new((1, 2), [(1, 2)]).unwrap();
        let out = extension_set(&t, (1, 2), &c, (2, 3)).unwrap();
        assert_eq!(out, EdgeColoringSet::new((2, 3), [(2, 3)]).unwrap());
    }

    #[test]
    fn phi_on_diamond_and_chord_composition() {
        // a=1 b=2 c=3 d=4; P = ab, P' = dc
        let t = validate_canvas(diamond(), Precolored::path(&[1, 2]), diamond_lists()).unwrap();
        let c = EdgeColoringSet::new((1, 2), [(1, 2)]).unwrap();
        let out = extension_set(&t, (1, 2), &c, (4, 3)).unwrap();
        assert_eq!(out, EdgeColoringSet::new((4, 3), [(1, 3)]).unwrap());
        let by_enum = phi_by_enumeration(t.graph(), t.lists(), &c, (4, 3)).unwrap();
        assert_eq!(out, by_enum);
        assert!(check_chord_composition(&t, (1, 2), &c, (2, 3), (4, 3)).unwrap());
        // U = P' on the boundary is the degenerate case
        assert!(check_chord_composition(&t, (1, 2), &c, (4, 3), (4, 3)).unwrap());
        // an outer edge that is not P' is not a separating chord
        assert!(matches!(
            check_chord_composition(&t, (1, 2), &c, (2, 4), (4, 3)),
            Err(SolverError::NotASeparatingChord(2, 4))
        ));
    }

    #[test]
    fn phi_requires_boundary_edges() {
        let lists = ListAssignment::new().with(1, [1, 2, 3]).with(2, [1, 2, 3]);
        let t = validate_canvas(edge_graph(), Precolored::path(&[1, 2]), lists).unwrap();
        let c = EdgeColoringSet::new((1, 2), [(1, 2)]).unwrap();
        assert!(matches!(
            extension_set(&t, (1, 2), &c, (1, 3)),
            Err(SolverError::NotABoundaryEdge(1, 3))
        ));
    }

    #[test]
    fn bad_wheel_colorings_when_g_is_s() {
        let path = g(&[(1, &[2]), (2, &[1, 3]), (3, &[2])], &[1, 2, 3, 2]);
        let lists = ListAssignment::new().with(1, [1, 2]).with(2, [1, 2, 3]).with(3, [1, 2]);
        let t = validate_canvas(path, Precolored::path(&[1, 2, 3]), lists).unwrap();
        assert_eq!(count_bad_wheel_colorings(&t).unwrap(), 0);
    }

    #[test]
    fn bad_wheel_colorings_reject_chords_and_triangles() {
        let lists = ListAssignment::new()
            .with(1, [1, 2, 3])
            .with(2, [1, 2, 3])
            .with(3, [1, 2, 3])
            .with(4, [1, 2, 3]);
        let t = validate_canvas(diamond(), Precolored::path(&[1, 2, 4]), lists.clone()).unwrap();
        assert!(matches!(
            count_bad_wheel_colorings(&t),
            Err(SolverError::PreconditionViolated(_))
        ));
        let t = validate_canvas(triangle(), Precolored::path(&[1, 2, 3]), lists).unwrap();
        assert!(matches!(
            count_bad_wheel_colorings(&t),
            Err(SolverError::PreconditionViolated(_))
        ));
    }

    #[test]
    fn bad_wheel_colorings_on_a_four_cycle() {
        // cycle 1-2-3-4, S = 1-2-3; G = S plus one vertex
        let c4 = g(&[(1, &[2, 4]), (2, &[3, 1]), (3, &[4, 2]), (4, &[1, 3])], &[1, 2, 3, 4]);
        let lists = ListAssignment::new()
            .with(1, [1, 2])
            .with(2, [3])
            .with(3, [1, 2])
            .with(4, [1, 2, 3]);
        let t = validate_canvas(c4, Precolored::path(&[1, 2, 3]), lists).unwrap();
        // 4 loses at most two of its three colours
        assert_eq!(count_bad_wheel_colorings(&t).unwrap(), 0);
        let (g4, s, mut lists) = t.into_parts();
        lists.set(4, [1, 2, 4]);
        lists.set(3, [1, 4]);
        let t = validate_canvas(g4, s, lists).unwrap();
        assert_eq!(count_bad_wheel_colorings(&t).unwrap(), 0);
    }

    #[test]
    fn sampling_returns_proper_colorings() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        let lists = diamond_lists();
        for _ in 0..20 {
            let c = sample_coloring(&diamond(), &lists, &Coloring::new(), &mut rng)
                .unwrap()
                .unwrap();
            assert!(c.is_proper_for(&diamond(), &lists));
        }
    }
}
