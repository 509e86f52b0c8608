//! Random near-triangulations of a disk.

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::plane_graph::{PlaneGraph, VertexId};

use super::GenError;

/// How the outer polygon is split before interior vertices are stacked.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiskStyle {
    /// A hub joined to every outer vertex; the outer cycle stays chordless.
    Hub,
    /// Random diagonals; every outer cycle longer than three has chords.
    Diagonals,
    /// Either of the above with equal probability.
    Mixed,
}

/// Triangles are stored with the orientation of inner faces, so that the dart
/// `a -> b` of face `(a, b, c)` is followed by `b -> c`.
fn split_polygon<R: Rng>(poly: &[VertexId], rng: &mut R, out: &mut Vec<[VertexId; 3]>) {
    let n = poly.len();
    if n == 3 {
        out.push([poly[0], poly[1], poly[2]]);
        return;
    }
    let i = rng.gen_range(0..n);
    let j = (i + rng.gen_range(2..n - 1)) % n;
    let (i, j) = (i.min(j), i.max(j));
    let first: Vec<_> = poly[i..=j].to_vec();
    let second: Vec<_> = poly[j..].iter().chain(&poly[..=i]).copied().collect();
    split_polygon(&first, rng, out);
    split_polygon(&second, rng, out);
}

fn rotations_from_faces(faces: &[[VertexId; 3]], outer: &[VertexId]) -> BTreeMap<VertexId, Vec<VertexId>> {
    // in the rotation at b, a is followed by c for every traced dart pair a->b->c
    let mut succ: BTreeMap<VertexId, BTreeMap<VertexId, VertexId>> = BTreeMap::new();
    let mut add = |a: VertexId, b: VertexId, c: VertexId| {
        succ.entry(b).or_default().insert(a, c);
    };
    for &[a, b, c] in faces {
        add(a, b, c);
        add(b, c, a);
        add(c, a, b);
    }
    let n = outer.len();
    for i in 0..n {
        add(outer[i], outer[(i + 1) % n], outer[(i + 2) % n]);
    }
    succ.into_iter()
        .map(|(v, s)| {
            let start = *s.keys().next().unwrap();
            let mut rot = vec![start];
            let mut cur = s[&start];
            while cur != start {
                rot.push(cur);
                cur = s[&cur];
            }
            (v, rot)
        })
        .collect()
}

/// Outer cycle `1..=outer_len`, interior vertices numbered after it.
pub fn random_disk_triangulation_styled(
    seed: u64,
    outer_len: usize,
    interior_count: usize,
    style: DiskStyle,
) -> Result<PlaneGraph, GenError> {
    if outer_len < 3 {
        return Err(GenError::InfeasibleParameters(format!("outer length {outer_len} < 3")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let hub = match style {
        DiskStyle::Hub => true,
        DiskStyle::Diagonals => false,
        DiskStyle::Mixed => interior_count > 0 && rng.gen_bool(0.5),
    };
    if hub && interior_count == 0 && outer_len > 3 {
        return Err(GenError::InfeasibleParameters(
            "a chordless outer cycle needs an interior vertex".into(),
        ));
    }
    let outer: Vec<VertexId> = (1..=outer_len as VertexId).collect();
    let inner: Vec<VertexId> = outer.iter().rev().copied().collect();
    let mut faces = Vec::new();
    let mut next = outer_len as VertexId + 1;
    let mut remaining = interior_count;
    if hub && interior_count > 0 {
        let h = next;
        next += 1;
        remaining -= 1;
        for i in 0..outer_len {
            faces.push([inner[i], inner[(i + 1) % outer_len], h]);
        }
    } else {
        split_polygon(&inner, &mut rng, &mut faces);
    }
    for _ in 0..remaining {
        let k = rng.gen_range(0..faces.len());
        let [a, b, c] = faces.swap_remove(k);
        let v = next;
        next += 1;
        faces.extend([[a, b, v], [b, c, v], [c, a, v]]);
    }
    faces.shuffle(&mut rng);
    let rotations = rotations_from_faces(&faces, &outer);
    PlaneGraph::new(rotations, outer).map_err(|e| GenError::InfeasibleParameters(e.to_string()))
}

pub fn random_disk_triangulation(seed: u64, outer_len: usize, interior_count: usize) -> Result<PlaneGraph, GenError> {
    random_disk_triangulation_styled(seed, outer_len, interior_count, DiskStyle::Mixed)
}

/// Triangles all of whose corners lie on the outer walk.
pub fn outer_triangles(g: &PlaneGraph) -> Vec<[VertexId; 3]> {
    let outer = g.outer_vertices();
    let mut out = BTreeSet::new();
    for &(a, b) in &g.edges() {
        if !outer.contains(&a) || !outer.contains(&b) {
            continue;
        }
        for c in g.neighbors(a) {
            if c != b && outer.contains(&c) && g.has_edge(b, c) {
                let mut t = [a, b, c];
                t.sort();
                out.insert(t);
            }
        }
    }
    out.into_iter().collect()
}
