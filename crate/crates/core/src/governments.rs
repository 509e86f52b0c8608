//! Dictatorships, democracies and confederacies of edge colourings.
//!
//! Members of a set are pairwise distinct colourings; the alternative reading
//! of "disjoint" (disjoint colour sets at each end) is not implemented.

use std::collections::BTreeSet;

use serde::Serialize;
use thiserror::Error;

use crate::canvas::Color;
use crate::plane_graph::VertexId;
use crate::solver::EdgeColoringSet;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GovernmentError {
    #[error("a government needs at least two colorings, got {0}")]
    TooSmall(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GovernmentKind {
    Dictatorship {
        dictator: VertexId,
        color: Color,
        /// Colours taken by the other end.
        satellites: BTreeSet<Color>,
    },
    Democracy {
        colors: (Color, Color),
    },
}

/// A set of edge colourings known to be a government, with its witness.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Government {
    set: EdgeColoringSet,
    kind: GovernmentKind,
}

impl Government {
    pub fn set(&self) -> &EdgeColoringSet {
        &self.set
    }

    pub fn kind(&self) -> &GovernmentKind {
        &self.kind
    }

    pub fn into_set(self) -> EdgeColoringSet {
        self.set
    }

    pub fn is_dictatorship(&self) -> bool {
        matches!(self.kind, GovernmentKind::Dictatorship { .. })
    }

    pub fn dictator(&self) -> Option<(VertexId, Color)> {
        match self.kind {
            GovernmentKind::Dictatorship { dictator, color, .. } => Some((dictator, color)),
            GovernmentKind::Democracy { .. } => None,
        }
    }

    /// `{(c, s) : s ∈ satellites}` on `path`, with `dictator` one of its ends.
    pub fn dictatorship(
        path: (VertexId, VertexId),
        dictator: VertexId,
        color: Color,
        satellites: impl IntoIterator<Item = Color>,
    ) -> Option<Government> {
        let members: Vec<_> = satellites
            .into_iter()
            .map(|s| if dictator == path.0 { (color, s) } else { (s, color) })
            .collect();
        if dictator != path.0 && dictator != path.1 {
            return None;
        }
        let set = EdgeColoringSet::new(path, members).ok()?;
        match classify(&set) {
            Ok(Classification::Government(g)) if g.dictator() == Some((dictator, color)) => Some(g),
            _ => None,
        }
    }

    /// `{(a, b), (b, a)}` on `path`.
    pub fn democracy(path: (VertexId, VertexId), a: Color, b: Color) -> Option<Government> {
        let set = EdgeColoringSet::new(path, [(a, b), (b, a)]).ok()?;
        match classify(&set) {
            Ok(Classification::Government(g)) if !g.is_dictatorship() => Some(g),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Classification {
    /// Two distinct colourings agreeing at one end cannot also be swapped
    /// copies of each other, so the two patterns never overlap.
    Government(Government),
    Neither,
}

impl Classification {
    pub fn government(&self) -> Option<&Government> {
        match self {
            Classification::Government(g) => Some(g),
            Classification::Neither => None,
        }
    }
}

fn is_democracy(set: &EdgeColoringSet) -> Option<(Color, Color)> {
    let m: Vec<_> = set.members().iter().copied().collect();
    (m.len() == 2 && m[0].0 == m[1].1 && m[1].0 == m[0].1).then_some(m[0])
}

/// Exact classification; the dictator test runs before the democracy test,
/// `p1` before `p2`.
pub fn classify(set: &EdgeColoringSet) -> Result<Classification, GovernmentError> {
    if set.len() < 2 {
        return Err(GovernmentError::TooSmall(set.len()));
    }
    let (p1, p2) = set.path();
    for p in [p1, p2] {
        let at = set.colors_at(p);
        if at.len() == 1 {
            let color = *at.iter().next().unwrap();
            let other = if p == p1 { p2 } else { p1 };
            return Ok(Classification::Government(Government {
                set: set.clone(),
                kind: GovernmentKind::Dictatorship {
                    dictator: p,
                    color,
                    satellites: set.colors_at(other),
                },
            }));
        }
    }
    if let Some(colors) = is_democracy(set) {
        return Ok(Classification::Government(Government {
            set: set.clone(),
            kind: GovernmentKind::Democracy { colors },
        }));
    }
    Ok(Classification::Neither)
}

pub fn is_government(set: &EdgeColoringSet) -> bool {
    matches!(classify(set), Ok(Classification::Government(_)))
}

/// Maximal dictatorships (every colouring with a given colour at one end,
/// when there are at least two) followed by all democracies, in a fixed order.
pub fn maximal_governments(set: &EdgeColoringSet) -> Vec<Government> {
    let (p1, p2) = set.path();
    let mut out = Vec::new();
    for p in [p1, p2] {
        for c in set.colors_at(p) {
            let class = set.subset(|m| if p == p1 { m.0 == c } else { m.1 == c });
            if class.len() >= 2 {
                if let Ok(Classification::Government(g)) = classify(&class) {
                    out.push(g);
                }
            }
        }
    }
    for &(a, b) in set.members() {
        if a < b && set.contains((b, a)) {
            let class = set.subset(|m| *m == (a, b) || *m == (b, a));
            if let Ok(Classification::Government(g)) = classify(&class) {
                out.push(g);
            }
        }
    }
    out
}

/// A government inside `set`, preferring the largest dictatorship.
pub fn find_government(set: &EdgeColoringSet) -> Option<Government> {
    let all = maximal_governments(set);
    let best_dict = all
        .iter()
        .filter(|g| g.is_dictatorship())
        .max_by_key(|g| (g.set().len(), std::cmp::Reverse(g.dictator())));
    best_dict.or_else(|| all.first()).cloned()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Confederacy {
    pub first: Government,
    pub second: Government,
}

impl Confederacy {
    pub fn union(&self) -> EdgeColoringSet {
        self.first.set().union(self.second.set()).expect("same path")
    }
}

/// Two governments inside `set` whose union is not a government.
///
/// Being a non-government is preserved by enlarging a set of two or more
/// colourings, so it suffices to pair up the maximal governments.
pub fn find_confederacy(set: &EdgeColoringSet) -> Option<Confederacy> {
    let all = maximal_governments(set);
    for (i, a) in all.iter().enumerate() {
        for b in &all[i + 1..] {
            let u = a.set().union(b.set()).expect("same path");
            if !is_government(&u) {
                return Some(Confederacy {
                    first: a.clone(),
                    second: b.clone(),
                });
            }
        }
    }
    None
}

/// Whether `set` itself is a confederacy.
pub fn is_confederacy(set: &EdgeColoringSet) -> bool {
    !is_government(set) && set.len() >= 2 && {
        // some split into two governments covering the whole set
        let gs = all_government_subsets(set);
        gs.iter().enumerate().any(|(i, a)| {
            gs[i..]
                .iter()
                .any(|b| a.set().union(b.set()).map(|u| u == *set).unwrap_or(false))
        })
    }
}

/// Every subset of `set` that is a government. Exponential; small sets only.
pub fn all_government_subsets(set: &EdgeColoringSet) -> Vec<Government> {
    let m: Vec<_> = set.members().iter().copied().collect();
    assert!(m.len() <= 20, "subset enumeration on {} members", m.len());
    let mut out = Vec::new();
    for mask in 1u32..(1 << m.len()) {
        if mask.count_ones() < 2 {
            continue;
        }
        let sub = EdgeColoringSet::new(set.path(), (0..m.len()).filter(|i| mask >> i & 1 == 1).map(|i| m[i]))
            .expect("subset of a proper set");
        if let Ok(Classification::Government(g)) = classify(&sub) {
            out.push(g);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(m: &[(Color, Color)]) -> EdgeColoringSet {
        EdgeColoringSet::new((1, 2), m.iter().copied()).unwrap()
    }

    /// Subset brute force: some pair of government subsets with a non-government union.
    fn confederacy_oracle(s: &EdgeColoringSet) -> bool {
        let gs = all_government_subsets(s);
        gs.iter().enumerate().any(|(i, a)| {
            gs[i + 1..]
                .iter()
                .any(|b| !is_government(&a.set().union(b.set()).unwrap()))
        })
    }

    #[test]
    fn dictatorship_at_p1() {
        let c = classify(&set(&[(1, 2), (1, 3)])).unwrap();
        let g = c.government().unwrap();
        assert_eq!(g.dictator(), Some((1, 1)));
        assert_eq!(
            g.kind(),
            &GovernmentKind::Dictatorship {
                dictator: 1,
                color: 1,
                satellites: [2, 3].into()
            }
        );
    }

    #[test]
    fn democracy_and_neither() {
        let c = classify(&set(&[(1, 2), (2, 1)])).unwrap();
        assert_eq!(
            c.government().unwrap().kind(),
            &GovernmentKind::Democracy { colors: (1, 2) }
        );
        assert_eq!(classify(&set(&[(1, 2), (2, 3)])).unwrap(), Classification::Neither);
        assert_eq!(classify(&set(&[(1, 2)])), Err(GovernmentError::TooSmall(1)));
    }

    #[test]
    fn democracy_is_symmetric_in_members() {
        let a = classify(&set(&[(3, 5), (5, 3)])).unwrap();
        let b = classify(&EdgeColoringSet::new((1, 2), [(5, 3), (3, 5)]).unwrap()).unwrap();
        assert_eq!(a, b);
        assert!(a.government().is_some());
    }

    #[test]
    fn dictatorship_at_p2() {
        let g = find_government(&set(&[(2, 1), (3, 1), (4, 5)])).unwrap();
        assert_eq!(g.dictator(), Some((2, 1)));
        assert_eq!(g.set().len(), 2);
    }

    #[test]
    fn find_government_cases() {
        assert!(find_government(&set(&[(1, 2)])).is_none());
        assert!(find_government(&set(&[(1, 2), (2, 3), (3, 4)])).is_none());
        let g = find_government(&set(&[(1, 2), (1, 3), (1, 4), (2, 1)])).unwrap();
        assert_eq!(g.set().len(), 3);
        let d = find_government(&set(&[(1, 2), (2, 1), (3, 4)])).unwrap();
        assert!(!d.is_dictatorship());
    }

    #[test]
    fn confederacy_of_two_dictatorships() {
        let s = set(&[(1, 2), (1, 3), (2, 1), (2, 3)]);
        let c = find_confederacy(&s).unwrap();
        assert_eq!(c.first.dictator(), Some((1, 1)));
        assert_eq!(c.second.dictator(), Some((1, 2)));
        assert!(!is_government(&c.union()));
        assert!(is_confederacy(&s));
    }

    #[test]
    fn confederacy_of_two_democracies() {
        let s = set(&[(1, 2), (2, 1), (3, 4), (4, 3)]);
        let c = find_confederacy(&s).unwrap();
        assert!(!c.first.is_dictatorship() && !c.second.is_dictatorship());
        assert!(is_confederacy(&s));
    }

    #[test]
    fn a_government_alone_has_no_confederacy() {
        assert!(find_confederacy(&set(&[(1, 2), (1, 3), (1, 4)])).is_none());
        assert!(find_confederacy(&set(&[(1, 2), (2, 1)])).is_none());
    }

    #[test]
    fn constructors() {
        let d = Government::dictatorship((1, 2), 2, 7, [1, 3]).unwrap();
        assert_eq!(d.set().members(), &BTreeSet::from([(1, 7), (3, 7)]));
        assert!(Government::dictatorship((1, 2), 2, 7, [7, 3]).is_none());
        assert!(Government::dictatorship((1, 2), 2, 7, [3]).is_none());
        assert!(Government::democracy((1, 2), 4, 6).is_some());
        assert!(Government::democracy((1, 2), 4, 4).is_none());
    }

    #[test]
    fn confederacy_search_matches_subset_oracle() {
        // every set of proper colourings from a 3-colour palette
        let all: Vec<(Color, Color)> = (1..=3)
            .flat_map(|a| (1..=3).filter(move |&b| b != a).map(move |b| (a, b)))
            .collect();
        for mask in 0u32..(1 << all.len()) {
            let s =
                EdgeColoringSet::new((1, 2), (0..all.len()).filter(|i| mask >> i & 1 == 1).map(|i| all[i])).unwrap();
            assert_eq!(find_confederacy(&s).is_some(), confederacy_oracle(&s), "{s:?}");
            assert_eq!(find_government(&s).is_some(), !all_government_subsets(&s).is_empty());
        }
    }
}
