//! Instance profiles: which hypotheses a generated canvas satisfies.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use rand::seq::{IteratorRandom, SliceRandom};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::canvas::{validate_canvas, Canvas, Color, ListAssignment, Precolored};
use crate::governments::{classify, is_confederacy, Classification, Government};
use crate::harmonica::audit_hypotheses;
use crate::plane_graph::{edge, PlaneGraph, VertexId};
use crate::solver::EdgeColoringSet;

use super::triangulation::{outer_triangles, random_disk_triangulation_styled, DiskStyle};
use super::GenError;

const ATTEMPTS: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProfileId {
    Thm1,
    Thm2,
    Thm3,
    Lemma5,
    Prop2,
    Reduction,
    Thm9,
}

impl ProfileId {
    pub const ALL: [ProfileId; 7] = [
        ProfileId::Thm1,
        ProfileId::Thm2,
        ProfileId::Thm3,
        ProfileId::Lemma5,
        ProfileId::Prop2,
        ProfileId::Reduction,
        ProfileId::Thm9,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ProfileId::Thm1 => "thm1",
            ProfileId::Thm2 => "thm2",
            ProfileId::Thm3 => "thm3",
            ProfileId::Lemma5 => "lemma5",
            ProfileId::Prop2 => "prop2",
            ProfileId::Reduction => "reduction",
            ProfileId::Thm9 => "thm9",
        }
    }

    fn stream(self) -> u64 {
        self as u64 + 1
    }
}

impl fmt::Display for ProfileId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ProfileId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        ProfileId::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| format!("unknown profile {s:?}"))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratorProfile {
    pub id: ProfileId,
    /// Inclusive range of outer cycle lengths.
    pub outer: (usize, usize),
    /// Inclusive range of interior vertex counts, further capped by `max_vertices`.
    pub interior: (usize, usize),
    pub max_vertices: usize,
    /// Colours are drawn from `1..=palette`.
    pub palette: Color,
    /// Probability of planting a harmonica-shaped list pattern.
    pub bias: f64,
    pub seed: u64,
}

impl GeneratorProfile {
    pub fn new(id: ProfileId, seed: u64) -> Self {
        let (outer, interior, max_vertices) = match id {
            ProfileId::Thm1 | ProfileId::Thm2 => ((3, 10), (0, 8), 14),
            ProfileId::Thm3 => ((3, 9), (0, 6), 12),
            ProfileId::Lemma5 => ((4, 9), (1, 6), 12),
            ProfileId::Prop2 => ((5, 8), (0, 3), 10),
            ProfileId::Reduction => ((4, 9), (1, 6), 12),
            ProfileId::Thm9 => ((3, 7), (0, 3), 8),
        };
        GeneratorProfile {
            id,
            outer,
            interior,
            max_vertices,
            palette: 8,
            bias: 0.5,
            seed,
        }
    }

    pub fn with_seed(&self, seed: u64) -> Self {
        GeneratorProfile { seed, ..self.clone() }
    }

    pub(crate) fn stream(&self) -> u64 {
        self.id.stream()
    }
}

/// The profile-specific pieces of an instance besides the canvas.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Designation {
    Terminals {
        p1: VertexId,
        p2: VertexId,
    },
    /// The precoloured path of the canvas is the induced path to test.
    Wheel,
    Chord {
        p: (VertexId, VertexId),
        colorings: Vec<(Color, Color)>,
        chord: (VertexId, VertexId),
        p_prime: (VertexId, VertexId),
    },
    Reduction {
        path: Vec<VertexId>,
        l0: (Color, Color),
        center: VertexId,
    },
    Government {
        p: (VertexId, VertexId),
        colorings: Vec<(Color, Color)>,
        p_prime: (VertexId, VertexId),
        planted: bool,
    },
}

#[derive(Debug, Clone)]
pub struct Instance {
    pub profile: ProfileId,
    pub canvas: Canvas,
    pub designation: Designation,
}

impl Instance {
    pub fn graph(&self) -> &PlaneGraph {
        self.canvas.graph()
    }

    pub fn lists(&self) -> &ListAssignment {
        self.canvas.lists()
    }

    /// Every hypothesis of the profile that the instance fails; empty when it
    /// qualifies.
    pub fn audit(&self) -> Vec<String> {
        let g = self.graph();
        let l = self.lists();
        match &self.designation {
            Designation::Terminals { p1, p2 } => match self.profile {
                ProfileId::Thm1 => {
                    let mut out = Vec::new();
                    if !g.outer_edges().contains(&edge(*p1, *p2)) {
                        out.push("p1 p2 is an outer edge".to_string());
                    }
                    if l.of(*p1) == l.of(*p2) || l.size(*p1) == 0 || l.size(*p2) == 0 {
                        out.push("L(p1) != L(p2), both nonempty".to_string());
                    }
                    out
                }
                ProfileId::Thm2 => {
                    let mut out = audit_hypotheses(g, l, *p1, *p2);
                    if l.size(*p1) < 2 {
                        out.push("|L(p1)| >= 2".to_string());
                    }
                    out
                }
                _ => audit_hypotheses(g, l, *p1, *p2),
            },
            Designation::Wheel => {
                let s = self.canvas.precolored();
                let mut out = Vec::new();
                if s.vertices.len() != 3 || s.edges.len() != 2 {
                    out.push("S is a path of length two".to_string());
                }
                if !g.chords_of_outer().map(|c| c.is_empty()).unwrap_or(false) {
                    out.push("outer cycle is chordless".to_string());
                }
                out
            }
            Designation::Chord { p, chord, p_prime, .. } => {
                let mut out = Vec::new();
                if !g
                    .chords_of_outer()
                    .map(|c| c.contains(&edge(chord.0, chord.1)))
                    .unwrap_or(false)
                {
                    out.push("U is a chord".to_string());
                }
                if !g.outer_edges().contains(&edge(p.0, p.1)) || !g.outer_edges().contains(&edge(p_prime.0, p_prime.1))
                {
                    out.push("P and P' are outer edges".to_string());
                }
                out
            }
            Designation::Reduction { .. } => Vec::new(),
            Designation::Government { p, colorings, .. } => {
                let set = EdgeColoringSet::new(*p, colorings.iter().copied());
                match set {
                    Ok(s) if matches!(classify(&s), Ok(Classification::Government(_))) || is_confederacy(&s) => {
                        Vec::new()
                    }
                    _ => vec!["C is a government or a confederacy".to_string()],
                }
            }
        }
    }
}

fn subset<R: Rng>(rng: &mut R, palette: Color, k: usize, exclude: &BTreeSet<Color>) -> BTreeSet<Color> {
    (1..=palette)
        .filter(|c| !exclude.contains(c))
        .choose_multiple(rng, k)
        .into_iter()
        .collect()
}

/// Exact sizes everywhere not yet fixed: three on the outer walk, five inside.
fn fill_lists<R: Rng>(g: &PlaneGraph, rng: &mut R, palette: Color, mut lists: ListAssignment) -> ListAssignment {
    for v in g.vertices() {
        if lists.get(v).is_none() {
            let k = if g.on_outer(v) { 3 } else { 5 };
            lists.set(v, subset(rng, palette, k, &BTreeSet::new()));
        }
    }
    lists
}

fn random_graph<R: Rng>(p: &GeneratorProfile, rng: &mut R, style: DiskStyle) -> Result<PlaneGraph, GenError> {
    pick_graph(p, rng, style, false)
}

/// `long` keeps the boundary near its maximum, leaving room for planted chains.
fn pick_graph<R: Rng>(p: &GeneratorProfile, rng: &mut R, style: DiskStyle, long: bool) -> Result<PlaneGraph, GenError> {
    let lo = if long {
        p.outer.0.max(p.outer.1.saturating_sub(2))
    } else {
        p.outer.0
    };
    let outer = rng.gen_range(lo..=p.outer.1);
    let cap = p.max_vertices.saturating_sub(outer);
    let lo = p.interior.0.min(cap);
    let interior = rng.gen_range(lo..=p.interior.1.min(cap).max(lo));
    random_disk_triangulation_styled(rng.gen(), outer, interior, style)
}

/// Boundary neighbours of `v` on the outer walk.
fn walk_neighbours(g: &PlaneGraph, v: VertexId) -> Vec<VertexId> {
    let walk = g.outer_walk();
    let n = walk.len();
    let mut out: Vec<_> = (0..n)
        .filter(|&i| walk[i] == v)
        .flat_map(|i| [walk[(i + n - 1) % n], walk[(i + 1) % n]])
        .filter(|&w| w != v)
        .collect();
    out.sort();
    out.dedup();
    out
}

/// A triangle chain along the outer walk with the list pattern of a
/// coloring harmonica. The caller decides the list of `w`.
struct Planted {
    p1: VertexId,
    first: (VertexId, VertexId),
    w: VertexId,
    last_pair: BTreeSet<Color>,
    lists: ListAssignment,
    stages: usize,
}

/// The longest of a few planted chains.
fn plant_longest<R: Rng>(g: &PlaneGraph, rng: &mut R, palette: Color) -> Option<Planted> {
    (0..8)
        .filter_map(|_| plant_chain(g, rng, palette))
        .max_by_key(|p| p.stages)
}

fn plant_chain<R: Rng>(g: &PlaneGraph, rng: &mut R, palette: Color) -> Option<Planted> {
    let tris = outer_triangles(g);
    let start = *tris.choose(rng)?;
    let p1 = *start.choose(rng)?;
    let mut color: Color = rng.gen_range(1..=palette);
    let mut lists = ListAssignment::new().with(p1, [color]);
    let mut used: BTreeSet<VertexId> = [p1].into();
    let mut cur = p1;
    let mut first = None;
    let target = rng.gen_range(1..=4);
    let mut stages = 0;
    loop {
        stages += 1;
        let opts: Vec<(VertexId, VertexId)> = tris
            .iter()
            .filter(|t| t.contains(&cur))
            .map(|t| {
                let o: Vec<_> = t.iter().copied().filter(|&v| v != cur).collect();
                (o[0], o[1])
            })
            .filter(|(x, y)| !used.contains(x) && !used.contains(y))
            .collect();
        let &(x, y) = opts.choose(rng)?;
        let pair = subset(rng, palette, 2, &[color].into());
        lists.set(x, pair.iter().copied().chain([color]));
        lists.set(y, pair.iter().copied().chain([color]));
        used.extend([x, y]);
        first.get_or_insert((x, y));
        let nexts: Vec<VertexId> = tris
            .iter()
            .filter(|t| t.contains(&x) && t.contains(&y))
            .flat_map(|t| t.iter().copied())
            .filter(|v| !used.contains(v))
            .collect();
        let &z = nexts.choose(rng)?;
        let continues = tris
            .iter()
            .any(|t| t.contains(&z) && t.iter().filter(|v| **v != z && !used.contains(*v)).count() == 2);
        if !continues || stages >= target {
            return Some(Planted {
                p1,
                first: first.unwrap(),
                w: z,
                last_pair: pair,
                lists,
                stages,
            });
        }
        color = *subset(rng, palette, 1, &pair).iter().next()?;
        lists.set(z, pair.iter().copied().chain([color]));
        used.insert(z);
        cur = z;
    }
}

/// Two colourings or more of `p` forming a government or a confederacy.
fn random_collection<R: Rng>(rng: &mut R, p: (VertexId, VertexId), lists: &ListAssignment) -> Option<EdgeColoringSet> {
    let random_government = |rng: &mut R| -> Option<Government> {
        if rng.gen_bool(0.3) {
            let common: Vec<Color> = lists.of(p.0).intersection(&lists.of(p.1)).copied().collect();
            let pick = common.choose_multiple(rng, 2).copied().collect::<Vec<_>>();
            if pick.len() == 2 {
                return Government::democracy(p, pick[0], pick[1]);
            }
        }
        let (d, s) = if rng.gen_bool(0.5) { (p.0, p.1) } else { (p.1, p.0) };
        let c = *lists.of(d).iter().choose(rng)?;
        let avail: Vec<Color> = lists.of(s).into_iter().filter(|&x| x != c).collect();
        if avail.len() < 2 {
            return None;
        }
        let k = rng.gen_range(2..=avail.len());
        Government::dictatorship(p, d, c, avail.choose_multiple(rng, k).copied())
    };
    let first = random_government(rng)?;
    if rng.gen_bool(0.35) {
        for _ in 0..8 {
            if let Some(second) = random_government(rng) {
                let u = first.set().union(second.set()).ok()?;
                if is_confederacy(&u) {
                    return Some(u);
                }
            }
        }
    }
    Some(first.into_set())
}

fn small_list<R: Rng>(rng: &mut R, palette: Color) -> BTreeSet<Color> {
    let k = rng.gen_range(1..=3);
    subset(rng, palette, k, &BTreeSet::new())
}

fn outer_edge<R: Rng>(g: &PlaneGraph, rng: &mut R) -> (VertexId, VertexId) {
    let walk = g.outer_walk();
    let i = rng.gen_range(0..walk.len());
    (walk[i], walk[(i + 1) % walk.len()])
}

fn attempt<R: Rng>(p: &GeneratorProfile, rng: &mut R) -> Result<Option<Instance>, GenError> {
    let pal = p.palette;
    let canvas = |g: PlaneGraph, s: Precolored, l: ListAssignment| validate_canvas(g, s, l).ok();
    let inst = match p.id {
        ProfileId::Thm1 => {
            let g = random_graph(p, rng, DiskStyle::Mixed)?;
            let (p1, p2) = outer_edge(&g, rng);
            let a = rng.gen_range(1..=pal);
            let b = *subset(rng, pal, 1, &[a].into()).iter().next().unwrap();
            let lists = fill_lists(&g, rng, pal, ListAssignment::new().with(p1, [a]).with(p2, [b]));
            canvas(g, Precolored::path(&[p1, p2]), lists).map(|c| (c, Designation::Terminals { p1, p2 }))
        }
        ProfileId::Thm2 => {
            let g = random_graph(p, rng, DiskStyle::Mixed)?;
            let ends: Vec<VertexId> = g.outer_walk().choose_multiple(rng, 2).copied().collect();
            let (p1, p2) = (ends[0], ends[1]);
            let lists = ListAssignment::new()
                .with(p1, subset(rng, pal, 2, &BTreeSet::new()))
                .with(p2, subset(rng, pal, 2, &BTreeSet::new()));
            let lists = fill_lists(&g, rng, pal, lists);
            canvas(g, Precolored::vertices([p1, p2]), lists).map(|c| (c, Designation::Terminals { p1, p2 }))
        }
        ProfileId::Thm3 => {
            let planted = rng.gen_bool(p.bias);
            let g = pick_graph(
                p,
                rng,
                if planted {
                    DiskStyle::Diagonals
                } else {
                    DiskStyle::Mixed
                },
                planted,
            )?;
            let (p1, p2, lists) = match planted.then(|| plant_longest(&g, rng, pal)).flatten() {
                Some(pl) => (pl.p1, pl.w, pl.lists.with(pl.w, pl.last_pair)),
                None => {
                    let ends: Vec<VertexId> = g.outer_walk().choose_multiple(rng, 2).copied().collect();
                    let k1 = rng.gen_range(1..=2);
                    let l = ListAssignment::new()
                        .with(ends[0], subset(rng, pal, k1, &BTreeSet::new()))
                        .with(ends[1], subset(rng, pal, 2, &BTreeSet::new()));
                    (ends[0], ends[1], l)
                }
            };
            let lists = fill_lists(&g, rng, pal, lists);
            canvas(g, Precolored::vertices([p1, p2]), lists).map(|c| (c, Designation::Terminals { p1, p2 }))
        }
        ProfileId::Lemma5 => {
            let g = random_graph(p, rng, DiskStyle::Hub)?;
            let walk = g.outer_walk().to_vec();
            let i = rng.gen_range(0..walk.len());
            let path = [walk[i], walk[(i + 1) % walk.len()], walk[(i + 2) % walk.len()]];
            let mut lists = ListAssignment::new();
            for v in path {
                lists.set(v, small_list(rng, pal));
            }
            let lists = fill_lists(&g, rng, pal, lists);
            canvas(g, Precolored::path(&path), lists).map(|c| (c, Designation::Wheel))
        }
        ProfileId::Prop2 => {
            let g = random_graph(p, rng, DiskStyle::Diagonals)?;
            let chords: Vec<_> = g
                .chords_of_outer()
                .map_err(|e| GenError::InfeasibleParameters(e.to_string()))?
                .into_iter()
                .collect();
            let Some(&u) = chords.choose(rng) else { return Ok(None) };
            let walk = g.outer_walk().to_vec();
            let n = walk.len();
            let i = walk.iter().position(|&v| v == u.0).unwrap();
            let j = walk.iter().position(|&v| v == u.1).unwrap();
            // outer edges on each closed arc between the chord ends
            let arc_edges = |from: usize, to: usize| {
                let mut out = Vec::new();
                let mut k = from;
                while k != to {
                    out.push((walk[k], walk[(k + 1) % n]));
                    k = (k + 1) % n;
                }
                out
            };
            let side_a = arc_edges(i, j);
            let side_b = arc_edges(j, i);
            let (pp, pq) = if rng.gen_bool(0.5) {
                (side_a, side_b)
            } else {
                (side_b, side_a)
            };
            let pe = *pp.choose(rng).unwrap();
            let pe2 = *pq.choose(rng).unwrap();
            let pe = if rng.gen_bool(0.5) { pe } else { (pe.1, pe.0) };
            let mut lists = ListAssignment::new();
            lists.set(pe.0, small_list(rng, pal));
            lists.set(pe.1, small_list(rng, pal));
            let lists = fill_lists(&g, rng, pal, lists);
            let all: Vec<(Color, Color)> = EdgeColoringSet::all(pe, &lists).members().iter().copied().collect();
            if all.is_empty() {
                return Ok(None);
            }
            let k = rng.gen_range(1..=all.len());
            let colorings = all
                .choose_multiple(rng, k)
                .copied()
                .collect::<BTreeSet<_>>()
                .into_iter()
                .collect();
            canvas(g, Precolored::path(&[pe.0, pe.1]), lists).map(|c| {
                (
                    c,
                    Designation::Chord {
                        p: pe,
                        colorings,
                        chord: u,
                        p_prime: pe2,
                    },
                )
            })
        }
        ProfileId::Reduction => {
            let g = random_graph(p, rng, DiskStyle::Hub)?;
            let walk = g.outer_walk().to_vec();
            let n = walk.len();
            let k = rng.gen_range(1..=3.min(n - 2));
            let i = rng.gen_range(0..n);
            let at = |d: usize| walk[(i + d) % n];
            let path: Vec<VertexId> = (1..=k).map(at).collect();
            let x = at(0);
            let l0 = subset(rng, pal, 2, &BTreeSet::new());
            let mut lists = ListAssignment::new();
            for &v in &path {
                lists.set(v, l0.iter().copied().chain(subset(rng, pal, 1, &l0)));
            }
            // plant the pair on interior neighbours to exercise list deltas
            for v in path.iter().flat_map(|&v| g.neighbors(v)).collect::<BTreeSet<_>>() {
                if !g.on_outer(v) && rng.gen_bool(p.bias) {
                    lists.set(v, l0.iter().copied().chain(subset(rng, pal, 3, &l0)));
                }
            }
            // a precoloured edge away from the path and its two outside neighbours
            let free: Vec<usize> = (k + 2..n).collect();
            let s = if free.len() >= 2 && rng.gen_bool(0.5) {
                let j = rng.gen_range(0..free.len() - 1);
                let (a, b) = (at(free[j]), at(free[j + 1]));
                let ca = rng.gen_range(1..=pal);
                lists.set(a, [ca]);
                lists.set(b, subset(rng, pal, 1, &[ca].into()));
                Precolored::path(&[a, b])
            } else {
                Precolored::empty()
            };
            let lists = fill_lists(&g, rng, pal, lists);
            let mut it = l0.iter().copied();
            let l0 = (it.next().unwrap(), it.next().unwrap());
            canvas(g, s, lists).map(|c| (c, Designation::Reduction { path, l0, center: x }))
        }
        ProfileId::Thm9 => {
            let planted = rng.gen_bool(p.bias);
            let g = pick_graph(
                p,
                rng,
                if planted {
                    DiskStyle::Diagonals
                } else {
                    DiskStyle::Mixed
                },
                planted,
            )?;
            match planted.then(|| plant_longest(&g, rng, pal)).flatten() {
                Some(pl) => {
                    let d = *subset(rng, pal, 1, &pl.last_pair).iter().next().unwrap();
                    let lists = pl.lists.clone().with(pl.w, pl.last_pair.iter().copied().chain([d]));
                    let lists = fill_lists(&g, rng, pal, lists);
                    let pe = (pl.p1, pl.first.0);
                    let c = *lists.of(pl.p1).iter().next().unwrap();
                    let sats: Vec<Color> = lists.of(pl.first.0).into_iter().filter(|&x| x != c).collect();
                    let gov = Government::dictatorship(pe, pl.p1, c, sats);
                    let w2 = *walk_neighbours(&g, pl.w).choose(rng).unwrap();
                    match gov {
                        Some(gov) => canvas(g, Precolored::path(&[pe.0, pe.1]), lists).map(|cv| {
                            (
                                cv,
                                Designation::Government {
                                    p: pe,
                                    colorings: gov.set().members().iter().copied().collect(),
                                    p_prime: (pl.w, w2),
                                    planted: true,
                                },
                            )
                        }),
                        None => None,
                    }
                }
                None => {
                    let pe = outer_edge(&g, rng);
                    let pe2 = outer_edge(&g, rng);
                    let mut lists = ListAssignment::new();
                    lists.set(pe.0, small_list(rng, pal));
                    lists.set(pe.1, small_list(rng, pal));
                    let lists = fill_lists(&g, rng, pal, lists);
                    let Some(set) = random_collection(rng, pe, &lists) else {
                        return Ok(None);
                    };
                    canvas(g, Precolored::path(&[pe.0, pe.1]), lists).map(|cv| {
                        (
                            cv,
                            Designation::Government {
                                p: pe,
                                colorings: set.members().iter().copied().collect(),
                                p_prime: pe2,
                                planted: false,
                            },
                        )
                    })
                }
            }
        }
    };
    Ok(inst.map(|(canvas, designation)| Instance {
        profile: p.id,
        canvas,
        designation,
    }))
}

/// A canvas drawn under `profile`, deterministic in `profile.seed`.
pub fn random_canvas(profile: &GeneratorProfile) -> Result<Instance, GenError> {
    if profile.outer.0 < 3 || profile.outer.0 > profile.outer.1 || profile.palette < 5 {
        return Err(GenError::InfeasibleParameters(format!("{profile:?}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(profile.seed);
    for _ in 0..ATTEMPTS {
        if let Some(inst) = attempt(profile, &mut rng)? {
            return Ok(inst);
        }
    }
    Err(GenError::Exhausted(ATTEMPTS))
}
