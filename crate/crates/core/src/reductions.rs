//! Democratic reduction of a boundary path and the matching colouring lift.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;
use thiserror::Error;

use crate::canvas::{validate_canvas, Canvas, Color, Precolored, Violation};
use crate::plane_graph::{edge, GraphError, VertexId};
use crate::solver::Coloring;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReductionError {
    #[error("path is empty")]
    EmptyPath,
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("path vertex {0} is not on the outer boundary")]
    NotOnBoundary(VertexId),
    #[error("path is not induced: {0}-{1} is an edge")]
    NotInduced(VertexId, VertexId),
    #[error("{0}-{1} is not an edge of the outer boundary")]
    NotABoundaryPath(VertexId, VertexId),
    #[error("path vertex {0} is a cutvertex of the outer boundary")]
    Cutvertex(VertexId),
    #[error("path vertex {0} is the end of a chord to {1}")]
    ChordEnd(VertexId, VertexId),
    #[error("path covers the whole outer boundary")]
    CoversBoundary,
    #[error("L0 must have exactly two colors, got {0:?}")]
    BadL0(BTreeSet<Color>),
    #[error("L0 is not contained in the list of {0}")]
    ListMissesL0(VertexId),
    #[error("{0} is not a boundary neighbour of an end of the path")]
    WrongCenter(VertexId),
    #[error("L(x) - L0 is empty for center {0}")]
    CenterListExhausted(VertexId),
    #[error("precolored vertex {0} is adjacent to the path")]
    PrecoloredNeighbour(VertexId),
    #[error("deleting the path disconnects the graph")]
    Disconnects,
    #[error("reduced triple is not a canvas: {0:?}")]
    ReducedNotCanvas(Vec<Violation>),
    #[error("reduced coloring is not a proper L'-coloring: {0}")]
    ImproperInput(String),
}

/// `T(P, L0, x)` together with the data needed to lift colourings back.
#[derive(Debug, Clone)]
pub struct DemocraticReduction {
    source: Canvas,
    reduced: Canvas,
    /// `p1 … pk` with `p1` next to `x`.
    path: Vec<VertexId>,
    l0: (Color, Color),
    x: VertexId,
    y: VertexId,
    /// Colours removed from each touched list.
    deltas: BTreeMap<VertexId, BTreeSet<Color>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ReductionReport {
    pub path: Vec<VertexId>,
    pub l0: [Color; 2],
    pub x: VertexId,
    pub y: VertexId,
    pub x_precolored: bool,
    pub deltas: BTreeMap<VertexId, BTreeSet<Color>>,
}

impl DemocraticReduction {
    pub fn source(&self) -> &Canvas {
        &self.source
    }

    pub fn reduced(&self) -> &Canvas {
        &self.reduced
    }

    pub fn path(&self) -> &[VertexId] {
        &self.path
    }

    pub fn l0(&self) -> (Color, Color) {
        self.l0
    }

    pub fn x(&self) -> VertexId {
        self.x
    }

    pub fn y(&self) -> VertexId {
        self.y
    }

    pub fn deltas(&self) -> &BTreeMap<VertexId, BTreeSet<Color>> {
        &self.deltas
    }

    pub fn report(&self) -> ReductionReport {
        ReductionReport {
            path: self.path.clone(),
            l0: [self.l0.0, self.l0.1],
            x: self.x,
            y: self.y,
            x_precolored: self.reduced.precolored().vertices.contains(&self.x)
                && !self.source.precolored().vertices.contains(&self.x),
            deltas: self.deltas.clone(),
        }
    }
}

/// Boundary neighbours of each occurrence of `v` in the outer walk.
fn walk_neighbours(walk: &[VertexId], v: VertexId) -> Vec<(VertexId, VertexId)> {
    let n = walk.len();
    (0..n)
        .filter(|&i| walk[i] == v)
        .map(|i| (walk[(i + n - 1) % n], walk[(i + 1) % n]))
        .collect()
}

pub fn democratic_reduction(
    t: &Canvas,
    path: &[VertexId],
    l0: impl IntoIterator<Item = Color>,
    x: VertexId,
) -> Result<DemocraticReduction, ReductionError> {
    let g = t.graph();
    let lists = t.lists();
    let l0: BTreeSet<Color> = l0.into_iter().collect();
    if path.is_empty() {
        return Err(ReductionError::EmptyPath);
    }
    g.check_path(path)?;
    let walk = g.outer_walk();
    let outer_edges = g.outer_edges();
    let pset: BTreeSet<VertexId> = path.iter().copied().collect();
    for &p in path {
        if !g.on_outer(p) {
            return Err(ReductionError::NotOnBoundary(p));
        }
    }
    for (i, &a) in path.iter().enumerate() {
        for &b in &path[i + 1..] {
            if g.has_edge(a, b) && !path.windows(2).any(|w| edge(w[0], w[1]) == edge(a, b)) {
                return Err(ReductionError::NotInduced(a, b));
            }
        }
    }
    for w in path.windows(2) {
        if !outer_edges.contains(&edge(w[0], w[1])) {
            return Err(ReductionError::NotABoundaryPath(w[0], w[1]));
        }
    }
    for &p in path {
        if walk_neighbours(walk, p).len() > 1 {
            return Err(ReductionError::Cutvertex(p));
        }
        for q in g.neighbors(p) {
            if g.on_outer(q) && !outer_edges.contains(&edge(p, q)) {
                return Err(ReductionError::ChordEnd(p, q));
            }
        }
    }
    if g.outer_vertices() == pset {
        return Err(ReductionError::CoversBoundary);
    }
    if l0.len() != 2 {
        return Err(ReductionError::BadL0(l0));
    }
    for &p in path {
        if !l0.is_subset(&lists.of(p)) {
            return Err(ReductionError::ListMissesL0(p));
        }
    }

    // orient so that p1 is the end next to x; y sits beyond the other end
    let outside = |v: VertexId| {
        let (a, b) = walk_neighbours(walk, v)[0];
        [a, b].into_iter().filter(|w| !pset.contains(w)).collect::<Vec<_>>()
    };
    let first = path[0];
    let last = *path.last().unwrap();
    let path: Vec<VertexId> = if path.len() == 1 || outside(first).contains(&x) {
        path.to_vec()
    } else if outside(last).contains(&x) {
        path.iter().rev().copied().collect()
    } else {
        return Err(ReductionError::WrongCenter(x));
    };
    let y = {
        let pk = *path.last().unwrap();
        let (a, b) = walk_neighbours(walk, pk)[0];
        if path.len() == 1 {
            if a == x {
                b
            } else if b == x {
                a
            } else {
                return Err(ReductionError::WrongCenter(x));
            }
        } else {
            outside(pk)[0]
        }
    };
    if lists.of(x).difference(&l0).next().is_none() {
        return Err(ReductionError::CenterListExhausted(x));
    }

    let s = t.precolored();
    let neighbours: BTreeSet<VertexId> = path
        .iter()
        .flat_map(|&p| g.neighbors(p))
        .filter(|w| !pset.contains(w))
        .collect();
    for &w in &neighbours {
        if w != x && w != y && s.vertices.contains(&w) {
            return Err(ReductionError::PrecoloredNeighbour(w));
        }
    }

    let reduced_graph = g.delete_vertices(&pset)?;
    if reduced_graph.component_count() != 1 {
        return Err(ReductionError::Disconnects);
    }
    let mut new_lists = lists.clone();
    let mut deltas = BTreeMap::new();
    for w in neighbours.iter().copied().filter(|&w| w != y).chain([x]) {
        let old = lists.of(w);
        let removed: BTreeSet<Color> = old.intersection(&l0).copied().collect();
        new_lists.set(w, old.difference(&l0).copied());
        if !removed.is_empty() {
            deltas.insert(w, removed);
        }
    }
    let mut s_new = Precolored {
        vertices: s.vertices.difference(&pset).copied().collect(),
        edges: s
            .edges
            .iter()
            .copied()
            .filter(|(a, b)| !pset.contains(a) && !pset.contains(b))
            .collect(),
    };
    if new_lists.size(x) < 3 {
        s_new.vertices.insert(x);
    }
    let reduced = validate_canvas(reduced_graph, s_new, new_lists).map_err(ReductionError::ReducedNotCanvas)?;
    let mut it = l0.iter().copied();
    Ok(DemocraticReduction {
        source: t.clone(),
        reduced,
        path,
        l0: (it.next().unwrap(), it.next().unwrap()),
        x,
        y,
        deltas,
    })
}

/// Lifts a colouring of the reduced canvas: `p_k` avoids `y`, then each
/// `p_i` avoids `p_{i+1}`, always taking the smaller available colour of `L0`.
pub fn extend_reduced_coloring(r: &DemocraticReduction, phi: &Coloring) -> Result<Coloring, ReductionError> {
    let rg = r.reduced.graph();
    let rl = r.reduced.lists();
    for v in rg.vertices() {
        match phi.get(v) {
            None => return Err(ReductionError::ImproperInput(format!("{v} is uncolored"))),
            Some(c) if !rl.of(v).contains(&c) => {
                return Err(ReductionError::ImproperInput(format!(
                    "{v} has color {c} outside its list"
                )))
            }
            _ => {}
        }
    }
    for (a, b) in rg.edges() {
        if phi.get(a) == phi.get(b) {
            return Err(ReductionError::ImproperInput(format!("{a}-{b} is monochromatic")));
        }
    }
    let mut out: Coloring = rg.vertices().map(|v| (v, phi.get(v).unwrap())).collect();
    let (a, b) = r.l0;
    let pick = |avoid: Option<Color>| if avoid == Some(a) { b } else { a };
    let mut next = phi.get(r.y);
    for &p in r.path.iter().rev() {
        let c = pick(next);
        out.insert(p, c);
        next = Some(c);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canvas::ListAssignment;
    use crate::plane_graph::PlaneGraph;
    use crate::solver::{enumerate_colorings, find_coloring};

    fn g(rot: &[(VertexId, &[VertexId])], outer: &[VertexId]) -> PlaneGraph {
        PlaneGraph::new(rot.iter().map(|(v, r)| (*v, r.to_vec())).collect(), outer.to_vec()).unwrap()
    }

    // x=1, q=2, y=3, z=4
    fn c4() -> PlaneGraph {
        g(&[(1, &[2, 4]), (2, &[3, 1]), (3, &[4, 2]), (4, &[1, 3])], &[1, 2, 3, 4])
    }

    fn c4_canvas(lx: &[Color]) -> Canvas {
        // a short list at x needs x precoloured
        let s = if lx.len() < 3 {
            Precolored::vertices([1])
        } else {
            Precolored::empty()
        };
        let lists = ListAssignment::new()
            .with(1, lx.iter().copied())
            .with(2, [1, 2, 3])
            .with(3, [1, 2, 4])
            .with(4, [3, 4, 5]);
        validate_canvas(c4(), s, lists).unwrap()
    }

    /// Wheel on rim 1..=6 with hub 0.
    fn wheel6() -> PlaneGraph {
        let mut rot: Vec<(VertexId, Vec<VertexId>)> = vec![(0, vec![1, 6, 5, 4, 3, 2])];
        for i in 1..=6u32 {
            let prev = if i == 1 { 6 } else { i - 1 };
            let next = if i == 6 { 1 } else { i + 1 };
            rot.push((i, vec![prev, 0, next]));
        }
        PlaneGraph::new(rot.into_iter().collect(), vec![1, 2, 3, 4, 5, 6]).unwrap()
    }

    #[test]
    fn four_cycle_single_vertex() {
        let r = democratic_reduction(&c4_canvas(&[1, 2, 3]), &[2], [1, 2], 1).unwrap();
        assert_eq!(r.y(), 3);
        assert_eq!(r.reduced().graph().vertex_set(), BTreeSet::from([1, 3, 4]));
        assert_eq!(r.reduced().lists().of(1), BTreeSet::from([3]));
        // y keeps its list
        assert_eq!(r.reduced().lists().of(3), BTreeSet::from([1, 2, 4]));
        assert!(r.reduced().precolored().vertices.contains(&1));
        assert!(r.report().x_precolored);
    }

    #[test]
    fn exhausted_center() {
        assert_eq!(
            democratic_reduction(&c4_canvas(&[1, 2]), &[2], [1, 2], 1).unwrap_err(),
            ReductionError::CenterListExhausted(1)
        );
    }

    #[test]
    fn named_preconditions() {
        let t = c4_canvas(&[1, 2, 3]);
        assert_eq!(
            democratic_reduction(&t, &[2], [1, 4], 1).unwrap_err(),
            ReductionError::ListMissesL0(2)
        );
        assert_eq!(
            democratic_reduction(&t, &[2], [1, 2], 4).unwrap_err(),
            ReductionError::WrongCenter(4)
        );
        assert!(matches!(
            democratic_reduction(&t, &[2], [1], 1).unwrap_err(),
            ReductionError::BadL0(_)
        ));
        assert!(matches!(
            democratic_reduction(&t, &[2, 4], [1, 2], 1).unwrap_err(),
            ReductionError::Graph(_)
        ));
        assert_eq!(
            democratic_reduction(&t, &[1, 2, 3, 4], [1, 2], 1).unwrap_err(),
            ReductionError::NotInduced(1, 4)
        );
        assert_eq!(
            democratic_reduction(&t, &[], [1, 2], 1).unwrap_err(),
            ReductionError::EmptyPath
        );
    }

    #[test]
    fn interior_neighbour_keeps_three_colors() {
        let mut lists = ListAssignment::new().with(0, [1, 2, 3, 4, 5]);
        for i in 1..=6 {
            lists.set(i, [1, 2, 3 + i]);
        }
        let t = validate_canvas(wheel6(), Precolored::empty(), lists).unwrap();
        let r = democratic_reduction(&t, &[1, 2, 3], [1, 2], 6).unwrap();
        assert_eq!(r.y(), 4);
        assert_eq!(r.reduced().lists().of(0), BTreeSet::from([3, 4, 5]));
        assert_eq!(r.reduced().lists().of(6), BTreeSet::from([9]));
        assert_eq!(r.reduced().lists().of(4), BTreeSet::from([1, 2, 7]));
        assert!(r.reduced().graph().on_outer(0));
        // the same path given backwards is re-oriented
        let back = democratic_reduction(&t, &[3, 2, 1], [1, 2], 6).unwrap();
        assert_eq!(back.path(), &[1, 2, 3]);
    }

    #[test]
    fn chord_ends_are_rejected() {
        let mut lists = ListAssignment::new();
        for i in 1..=4 {
            lists.set(i, [1, 2, 3]);
        }
        let diamond = g(
            &[(1, &[2, 3]), (2, &[4, 3, 1]), (3, &[1, 2, 4]), (4, &[3, 2])],
            &[1, 2, 4, 3],
        );
        let t = validate_canvas(diamond, Precolored::empty(), lists).unwrap();
        assert_eq!(
            democratic_reduction(&t, &[2], [1, 2], 1).unwrap_err(),
            ReductionError::ChordEnd(2, 3)
        );
    }

    #[test]
    fn lift_prefers_smaller_color() {
        let r = democratic_reduction(&c4_canvas(&[1, 2, 3]), &[2], [1, 2], 1).unwrap();
        // y colored outside L0: both colours free, take 1
        let phi = Coloring::new().with(1, 3).with(3, 4).with(4, 5);
        let full = extend_reduced_coloring(&r, &phi).unwrap();
        assert_eq!(full.get(2), Some(1));
        let phi = Coloring::new().with(1, 3).with(3, 1).with(4, 4);
        assert_eq!(extend_reduced_coloring(&r, &phi).unwrap().get(2), Some(2));
        let bad = Coloring::new().with(1, 3).with(3, 4).with(4, 3);
        assert!(matches!(
            extend_reduced_coloring(&r, &bad),
            Err(ReductionError::ImproperInput(_))
        ));
    }

    #[test]
    fn every_reduced_coloring_lifts() {
        let mut lists = ListAssignment::new().with(0, [1, 2, 3, 4, 5]);
        for i in 1..=6 {
            lists.set(i, [1, 2, 3 + i % 3]);
        }
        let t = validate_canvas(wheel6(), Precolored::empty(), lists).unwrap();
        for path in [&[1][..], &[1, 2], &[1, 2, 3], &[2, 3, 4, 5]] {
            let r = democratic_reduction(&t, path, [1, 2], 6).unwrap();
            let rc = r.reduced();
            let mut n = 0;
            for phi in enumerate_colorings(rc.graph(), rc.lists(), &Coloring::new()).unwrap() {
                let full = extend_reduced_coloring(&r, &phi).unwrap();
                assert!(full.is_proper_for(t.graph(), t.lists()));
                assert!(rc.graph().vertices().all(|v| full.get(v) == phi.get(v)));
                n += 1;
            }
            assert!(n > 0);
        }
        assert!(find_coloring(t.graph(), t.lists(), &Coloring::new()).unwrap().is_some());
    }

    #[test]
    fn single_vertex_path_with_precolored_center() {
        // x precoloured with a single colour, P a single vertex
        let lists = ListAssignment::new()
            .with(1, [3])
            .with(2, [1, 2, 3])
            .with(3, [1, 2, 4])
            .with(4, [3, 4, 5]);
        let t = validate_canvas(c4(), Precolored::vertices([1]), lists).unwrap();
        let r = democratic_reduction(&t, &[2], [1, 2], 1).unwrap();
        assert_eq!(r.reduced().lists().of(1), BTreeSet::from([3]));
        assert!(r.deltas().get(&1).is_none());
        assert_eq!(r.reduced().precolored().vertices, BTreeSet::from([1]));
    }
}
