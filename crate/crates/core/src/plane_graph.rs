//! Embedded plane graphs given by a rotation system and a designated outer walk.
//!
//! The embedding is data: every vertex carries the cyclic order of its
//! neighbours, and faces are traced from that order. A dart `(u, v)` is
//! followed by `(v, w)` where `w` is the neighbour after `u` in the rotation
//! of `v`. Graphs are immutable snapshots; deletion produces a new graph and
//! vertex ids are never renumbered.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type VertexId = u32;

/// An undirected edge, stored with the smaller id first.
pub type Edge = (VertexId, VertexId);

pub fn edge(a: VertexId, b: VertexId) -> Edge {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("graph has no vertices")]
    EmptyGraph,
    #[error("unknown vertex {0}")]
    UnknownVertex(VertexId),
    #[error("loop or parallel edge at {0}-{1}")]
    ParallelEdgeOrLoop(VertexId, VertexId),
    #[error("rotation of {0} lists {1} but the rotation of {1} does not list {0}")]
    AsymmetricRotation(VertexId, VertexId),
    #[error("rotation system is not planar: V={vertices} E={edges} F={faces} components={components}")]
    NonPlanarEmbedding {
        vertices: usize,
        edges: usize,
        faces: usize,
        components: usize,
    },
    #[error("outer walk {0:?} is not a traced face")]
    OuterWalkNotAFace(Vec<VertexId>),
    #[error("outer walk is not a cycle")]
    OuterWalkNotCycle,
    #[error("deleting every vertex leaves an empty graph")]
    EmptyResult,
    #[error("{0:?} is not a path of the graph")]
    NotAPath(Vec<VertexId>),
}

pub type GraphResult<T> = Result<T, GraphError>;

/// Faces of a rotation system. Isolated vertices form a one-vertex face.
#[derive(Debug, Clone)]
pub(crate) struct FaceMap {
    pub faces: Vec<Vec<VertexId>>,
    pub dart_face: HashMap<(VertexId, VertexId), usize>,
    pub isolated_face: HashMap<VertexId, usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlaneGraph {
    rotations: BTreeMap<VertexId, Vec<VertexId>>,
    outer: Vec<VertexId>,
}

/// Vertices and edges lying on the outer face of a subgraph, measured in the
/// embedding inherited from the host.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct OuterIncidence {
    pub vertices: BTreeSet<VertexId>,
    pub edges: BTreeSet<Edge>,
}

impl PlaneGraph {
    /// Builds and validates an embedded graph from per-vertex rotations.
    ///
    /// The outer walk may be given in either orientation; it is stored in the
    /// orientation produced by face tracing.
    pub fn new(rotations: BTreeMap<VertexId, Vec<VertexId>>, outer: Vec<VertexId>) -> GraphResult<Self> {
        if rotations.is_empty() {
            return Err(GraphError::EmptyGraph);
        }
        for (&u, nbrs) in &rotations {
            let mut seen = BTreeSet::new();
            for &v in nbrs {
                if v == u || !seen.insert(v) {
                    return Err(GraphError::ParallelEdgeOrLoop(u, v));
                }
                match rotations.get(&v) {
                    None => return Err(GraphError::UnknownVertex(v)),
                    Some(back) if !back.contains(&u) => return Err(GraphError::AsymmetricRotation(u, v)),
                    Some(_) => {}
                }
            }
        }
        for v in &outer {
            if !rotations.contains_key(v) {
                return Err(GraphError::UnknownVertex(*v));
            }
        }
        let mut g = PlaneGraph {
            rotations,
            outer: Vec::new(),
        };
        let fm = g.face_map();
        let (v, e, f, c) = (g.vertex_count(), g.edge_count(), fm.faces.len(), g.component_count());
        if v + f != e + 2 * c {
            return Err(GraphError::NonPlanarEmbedding {
                vertices: v,
                edges: e,
                faces: f,
                components: c,
            });
        }
        let matched = fm
            .faces
            .iter()
            .find_map(|face| {
                cyclic_offset(face, &outer).map(|k| rotate(face, k)).or_else(|| {
                    let rev: Vec<_> = outer.iter().rev().copied().collect();
                    cyclic_offset(face, &rev).map(|k| {
                        let r = rotate(face, k);
                        // keep the caller's starting vertex
                        let start = r.iter().position(|&x| Some(&x) == outer.first()).unwrap_or(0);
                        rotate(&r, start)
                    })
                })
            })
            .ok_or_else(|| GraphError::OuterWalkNotAFace(outer.clone()))?;
        g.outer = matched;
        Ok(g)
    }

    /// Builds from an explicit vertex list; vertices missing from `rotations`
    /// are isolated.
    pub fn from_parts(
        vertices: &[VertexId],
        rotations: &BTreeMap<VertexId, Vec<VertexId>>,
        outer: Vec<VertexId>,
    ) -> GraphResult<Self> {
        let mut rot = rotations.clone();
        for &v in vertices {
            rot.entry(v).or_default();
        }
        for v in rotations.keys() {
            if !vertices.contains(v) {
                return Err(GraphError::UnknownVertex(*v));
            }
        }
        Self::new(rot, outer)
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.rotations.keys().copied()
    }

    pub fn vertex_set(&self) -> BTreeSet<VertexId> {
        self.rotations.keys().copied().collect()
    }

    pub fn contains_vertex(&self, v: VertexId) -> bool {
        self.rotations.contains_key(&v)
    }

    pub fn vertex_count(&self) -> usize {
        self.rotations.len()
    }

    pub fn edge_count(&self) -> usize {
        self.rotations.values().map(Vec::len).sum::<usize>() / 2
    }

    pub fn rotation(&self, v: VertexId) -> &[VertexId] {
        self.rotations.get(&v).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn rotations(&self) -> &BTreeMap<VertexId, Vec<VertexId>> {
        &self.rotations
    }

    pub fn neighbors(&self, v: VertexId) -> impl Iterator<Item = VertexId> + '_ {
        self.rotation(v).iter().copied()
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.rotation(v).len()
    }

    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        self.rotation(u).contains(&v)
    }

    pub fn edges(&self) -> BTreeSet<Edge> {
        self.rotations
            .iter()
            .flat_map(|(&u, nbrs)| nbrs.iter().filter(move |&&v| u < v).map(move |&v| (u, v)))
            .collect()
    }

    pub fn is_triangle(&self, a: VertexId, b: VertexId, c: VertexId) -> bool {
        a != b && b != c && a != c && self.has_edge(a, b) && self.has_edge(b, c) && self.has_edge(a, c)
    }

    /// The outer walk, in traced orientation.
    pub fn outer_walk(&self) -> &[VertexId] {
        &self.outer
    }

    pub fn outer_vertices(&self) -> BTreeSet<VertexId> {
        self.outer.iter().copied().collect()
    }

    pub fn on_outer(&self, v: VertexId) -> bool {
        self.outer.contains(&v)
    }

    /// Edges traversed by the outer walk.
    pub fn outer_edges(&self) -> BTreeSet<Edge> {
        walk_darts(&self.outer).map(|(a, b)| edge(a, b)).collect()
    }

    pub fn outer_is_cycle(&self) -> bool {
        let distinct: BTreeSet<_> = self.outer.iter().collect();
        self.outer.len() >= 3 && distinct.len() == self.outer.len()
    }

    /// The neighbours of `v` along the outer walk, one pair per occurrence.
    pub fn outer_neighbors(&self, v: VertexId) -> Vec<(VertexId, VertexId)> {
        let n = self.outer.len();
        (0..n)
            .filter(|&i| self.outer[i] == v)
            .map(|i| (self.outer[(i + n - 1) % n], self.outer[(i + 1) % n]))
            .collect()
    }

    pub fn component_count(&self) -> usize {
        let mut seen = BTreeSet::new();
        let mut count = 0;
        for v in self.vertices() {
            if seen.insert(v) {
                count += 1;
                let mut queue = VecDeque::from([v]);
                while let Some(x) = queue.pop_front() {
                    for y in self.neighbors(x) {
                        if seen.insert(y) {
                            queue.push_back(y);
                        }
                    }
                }
            }
        }
        count
    }

    /// Checks that `path` is a path: distinct vertices, consecutive ones adjacent.
    pub fn check_path(&self, path: &[VertexId]) -> GraphResult<()> {
        let distinct: BTreeSet<_> = path.iter().collect();
        let ok = !path.is_empty()
            && distinct.len() == path.len()
            && path.iter().all(|&v| self.contains_vertex(v))
            && path.windows(2).all(|w| self.has_edge(w[0], w[1]));
        if ok {
            Ok(())
        } else {
            Err(GraphError::NotAPath(path.to_vec()))
        }
    }

    fn next_dart(&self, u: VertexId, v: VertexId) -> (VertexId, VertexId) {
        let rot = self.rotation(v);
        let pos = rot.iter().position(|&x| x == u).expect("dart not in rotation");
        (v, rot[(pos + 1) % rot.len()])
    }

    pub(crate) fn face_map(&self) -> FaceMap {
        let mut faces = Vec::new();
        let mut dart_face = HashMap::new();
        let mut isolated_face = HashMap::new();
        for (&u, nbrs) in &self.rotations {
            if nbrs.is_empty() {
                isolated_face.insert(u, faces.len());
                faces.push(vec![u]);
                continue;
            }
            for &v in nbrs {
                if dart_face.contains_key(&(u, v)) {
                    continue;
                }
                let id = faces.len();
                let mut walk = Vec::new();
                let mut dart = (u, v);
                while !dart_face.contains_key(&dart) {
                    dart_face.insert(dart, id);
                    walk.push(dart.0);
                    dart = self.next_dart(dart.0, dart.1);
                }
                faces.push(walk);
            }
        }
        FaceMap {
            faces,
            dart_face,
            isolated_face,
        }
    }

    /// All faces as closed walks. Every dart lies in exactly one face.
    pub fn trace_faces(&self) -> Vec<Vec<VertexId>> {
        self.face_map().faces
    }

    fn outer_face_index(&self, fm: &FaceMap) -> usize {
        if self.outer.len() >= 2 {
            fm.dart_face[&(self.outer[0], self.outer[1])]
        } else {
            fm.isolated_face[&self.outer[0]]
        }
    }

    /// Edges `uv` with both ends on the outer cycle that are not cycle edges.
    pub fn chords_of_outer(&self) -> GraphResult<BTreeSet<Edge>> {
        if !self.outer_is_cycle() {
            return Err(GraphError::OuterWalkNotCycle);
        }
        let on_cycle = self.outer_vertices();
        let cycle_edges = self.outer_edges();
        Ok(self
            .edges()
            .into_iter()
            .filter(|e| on_cycle.contains(&e.0) && on_cycle.contains(&e.1) && !cycle_edges.contains(e))
            .collect())
    }

    /// Articulation points (lowpoint method).
    pub fn cutvertices(&self) -> BTreeSet<VertexId> {
        struct Dfs<'a> {
            g: &'a PlaneGraph,
            disc: HashMap<VertexId, usize>,
            low: HashMap<VertexId, usize>,
            time: usize,
            cut: BTreeSet<VertexId>,
        }
        impl Dfs<'_> {
            fn visit(&mut self, u: VertexId, parent: Option<VertexId>) {
                self.time += 1;
                self.disc.insert(u, self.time);
                self.low.insert(u, self.time);
                let mut children = 0;
                for v in self.g.neighbors(u) {
                    if Some(v) == parent {
                        continue;
                    }
                    if let Some(&dv) = self.disc.get(&v) {
                        let lu = self.low[&u].min(dv);
                        self.low.insert(u, lu);
                    } else {
                        children += 1;
                        self.visit(v, Some(u));
                        let lu = self.low[&u].min(self.low[&v]);
                        self.low.insert(u, lu);
                        if parent.is_some() && self.low[&v] >= self.disc[&u] {
                            self.cut.insert(u);
                        }
                    }
                }
                if parent.is_none() && children > 1 {
                    self.cut.insert(u);
                }
            }
        }
        let mut dfs = Dfs {
            g: self,
            disc: HashMap::new(),
            low: HashMap::new(),
            time: 0,
            cut: BTreeSet::new(),
        };
        for v in self.vertices() {
            if !dfs.disc.contains_key(&v) {
                dfs.visit(v, None);
            }
        }
        dfs.cut
    }

    /// Union-find over host faces merged by removing everything outside the
    /// kept subgraph. Returns the host face map and the class representative
    /// of every face.
    fn merged_faces(&self, keep: &dyn Fn(VertexId, VertexId) -> bool) -> (FaceMap, Vec<usize>) {
        let fm = self.face_map();
        let mut parent: Vec<usize> = (0..fm.faces.len()).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for (&u, nbrs) in &self.rotations {
            for &v in nbrs {
                if u < v && !keep(u, v) {
                    let a = find(&mut parent, fm.dart_face[&(u, v)]);
                    let b = find(&mut parent, fm.dart_face[&(v, u)]);
                    parent[a] = b;
                }
            }
        }
        let classes = (0..fm.faces.len()).map(|i| find(&mut parent, i)).collect();
        (fm, classes)
    }

    /// Which vertices and edges of the subgraph `(vertices, edges)` lie on the
    /// outer face of that subgraph, using the inherited embedding.
    pub fn outer_incidence(&self, vertices: &BTreeSet<VertexId>, edges: &BTreeSet<Edge>) -> OuterIncidence {
        let keep =
            |u: VertexId, v: VertexId| vertices.contains(&u) && vertices.contains(&v) && edges.contains(&edge(u, v));
        let (fm, class) = self.merged_faces(&keep);
        let outer_class = class[self.outer_face_index(&fm)];
        let mut inc = OuterIncidence::default();
        for &v in vertices {
            if !self.contains_vertex(v) {
                continue;
            }
            let rot = self.rotation(v);
            if rot.is_empty() {
                if class[fm.isolated_face[&v]] == outer_class {
                    inc.vertices.insert(v);
                }
                continue;
            }
            let mut has_kept_edge = false;
            for &w in rot {
                if keep(v, w) {
                    has_kept_edge = true;
                    if class[fm.dart_face[&(v, w)]] == outer_class {
                        inc.vertices.insert(v);
                        inc.edges.insert(edge(v, w));
                    }
                }
            }
            if !has_kept_edge && class[fm.dart_face[&(v, rot[0])]] == outer_class {
                inc.vertices.insert(v);
            }
        }
        inc
    }

    /// The subgraph on `vertices` using only `edges`, with the inherited
    /// embedding and a recomputed outer walk.
    pub fn edge_subgraph(&self, vertices: &BTreeSet<VertexId>, edges: &BTreeSet<Edge>) -> GraphResult<PlaneGraph> {
        if vertices.is_empty() {
            return Err(GraphError::EmptyResult);
        }
        for &v in vertices {
            if !self.contains_vertex(v) {
                return Err(GraphError::UnknownVertex(v));
            }
        }
        let keep =
            |u: VertexId, v: VertexId| vertices.contains(&u) && vertices.contains(&v) && edges.contains(&edge(u, v));
        let rotations: BTreeMap<_, _> = vertices
            .iter()
            .map(|&v| {
                (
                    v,
                    self.rotation(v)
                        .iter()
                        .copied()
                        .filter(|&w| keep(v, w))
                        .collect::<Vec<_>>(),
                )
            })
            .collect();
        let mut sub = PlaneGraph {
            rotations,
            outer: Vec::new(),
        };
        let (host_fm, class) = self.merged_faces(&keep);
        let outer_class = class[self.outer_face_index(&host_fm)];
        let sub_fm = sub.face_map();
        let class_of_face = |face: &Vec<VertexId>| -> usize {
            if face.len() == 1 && sub.rotation(face[0]).is_empty() {
                let v = face[0];
                match self.rotation(v).first() {
                    Some(&w) => class[host_fm.dart_face[&(v, w)]],
                    None => class[host_fm.isolated_face[&v]],
                }
            } else {
                class[host_fm.dart_face[&(face[0], face[1 % face.len()])]]
            }
        };
        let candidates: Vec<usize> = (0..sub_fm.faces.len())
            .filter(|&i| class_of_face(&sub_fm.faces[i]) == outer_class)
            .collect();

        // longest surviving arc of the old outer walk, ties to the smallest id
        let old = &self.outer;
        let n = old.len();
        let survives: Vec<bool> = (0..n).map(|i| n >= 2 && keep(old[i], old[(i + 1) % n])).collect();
        let mut best_arc: Option<(usize, VertexId, (VertexId, VertexId))> = None;
        if survives.iter().any(|&s| s) {
            for start in 0..n {
                if !survives[start] || (survives[(start + n - 1) % n] && survives.iter().any(|&s| !s)) {
                    continue;
                }
                let mut len = 0;
                let mut min_id = VertexId::MAX;
                while len < n && survives[(start + len) % n] {
                    min_id = min_id.min(old[(start + len) % n]).min(old[(start + len + 1) % n]);
                    len += 1;
                }
                let key = (len, min_id, (old[start], old[(start + 1) % n]));
                let better = match &best_arc {
                    None => true,
                    Some((bl, bm, _)) => len > *bl || (len == *bl && min_id < *bm),
                };
                if better {
                    best_arc = Some(key);
                }
            }
        }
        let chosen = if let Some((_, _, dart)) = best_arc {
            sub_fm.dart_face[&dart]
        } else if let Some(&i) = candidates.iter().max_by(|&&a, &&b| {
            let fa = &sub_fm.faces[a];
            let fb = &sub_fm.faces[b];
            fa.len()
                .cmp(&fb.len())
                .then_with(|| fb.iter().min().cmp(&fa.iter().min()))
        }) {
            i
        } else {
            let v = *vertices.iter().next().unwrap();
            match sub.rotation(v).first() {
                Some(&w) => sub_fm.dart_face[&(v, w)],
                None => sub_fm.isolated_face[&v],
            }
        };
        let face = &sub_fm.faces[chosen];
        let start = face
            .iter()
            .enumerate()
            .min_by_key(|&(_, &v)| v)
            .map(|(i, _)| i)
            .unwrap_or(0);
        sub.outer = rotate(face, start);
        debug_assert!(PlaneGraph::new(sub.rotations.clone(), sub.outer.clone()).is_ok());
        Ok(sub)
    }

    /// Induced embedded subgraph after removing `removed`.
    pub fn delete_vertices(&self, removed: &BTreeSet<VertexId>) -> GraphResult<PlaneGraph> {
        for &v in removed {
            if !self.contains_vertex(v) {
                return Err(GraphError::UnknownVertex(v));
            }
        }
        let keep: BTreeSet<_> = self.vertices().filter(|v| !removed.contains(v)).collect();
        let edges = self
            .edges()
            .into_iter()
            .filter(|e| keep.contains(&e.0) && keep.contains(&e.1))
            .collect();
        self.edge_subgraph(&keep, &edges)
    }
}

/// Darts of a closed walk, including the closing one.
pub fn walk_darts(walk: &[VertexId]) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
    let n = walk.len();
    (0..if n >= 2 { n } else { 0 }).map(move |i| (walk[i], walk[(i + 1) % n]))
}

fn cyclic_offset(face: &[VertexId], walk: &[VertexId]) -> Option<usize> {
    let n = face.len();
    if n != walk.len() || n == 0 {
        return None;
    }
    (0..n).find(|&k| (0..n).all(|i| face[(k + i) % n] == walk[i]))
}

fn rotate(face: &[VertexId], k: usize) -> Vec<VertexId> {
    let n = face.len();
    (0..n).map(|i| face[(k + i) % n]).collect()
}

/// Wire form: `{"outer":[..],"rotations":{id:[..]},"vertices":[..]}`.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct GraphJson {
    pub vertices: Vec<VertexId>,
    pub rotations: BTreeMap<VertexId, Vec<VertexId>>,
    pub outer: Vec<VertexId>,
}

impl From<&PlaneGraph> for GraphJson {
    fn from(g: &PlaneGraph) -> Self {
        GraphJson {
            vertices: g.vertices().collect(),
            rotations: g.rotations.clone(),
            outer: g.outer.clone(),
        }
    }
}

impl TryFrom<&GraphJson> for PlaneGraph {
    type Error = GraphError;

    fn try_from(j: &GraphJson) -> GraphResult<Self> {
        PlaneGraph::from_parts(&j.vertices, &j.rotations, j.outer.clone())
    }
}
