//! Runs every property of a profile over seeded trials.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::canvas::{Canvas, CanvasJson};
use crate::governments::{classify, find_confederacy, find_government, Classification};
use crate::harmonica::{
    certify_via_governments, convert_harmonica, decide_with_certificate, find_government_harmonica,
    harmonica_list_violations, ConvertError, Decision,
};
use crate::reductions::{democratic_reduction, extend_reduced_coloring, ReductionError};
use crate::solver::{
    check_chord_composition, count_bad_wheel_colorings, extension_set, find_coloring, phi, sample_coloring, Coloring,
    EdgeColoringSet,
};

use super::derive_seed;
use super::profiles::{random_canvas, Designation, GeneratorProfile, Instance, ProfileId};

/// Reduced colourings sampled and lifted per reduction instance.
const LIFT_SAMPLES: usize = 3;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct PropertyCounts {
    pub fail: u64,
    pub pass: u64,
    pub skip: u64,
}

/// A failing trial, replayable from the canvas fields alone.
#[derive(Debug, Clone, Serialize)]
pub struct Counterexample {
    #[serde(flatten)]
    pub canvas: CanvasJson,
    pub designation: Designation,
    pub profile: ProfileId,
    pub property: String,
    pub seed: u64,
    pub trace: String,
    pub trial: usize,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct SuiteReport {
    pub counterexamples: Vec<Counterexample>,
    pub properties: BTreeMap<String, PropertyCounts>,
    pub seed: u64,
    /// Tallies that are not pass/fail, such as verdict counts.
    pub stats: BTreeMap<String, u64>,
    pub trials: usize,
    #[serde(skip)]
    pub wall_clock: Duration,
}

impl SuiteReport {
    pub fn failures(&self) -> u64 {
        self.properties.values().map(|c| c.fail).sum()
    }

    pub fn all_passed(&self) -> bool {
        self.failures() == 0
    }

    pub fn counts(&self, property: &str) -> PropertyCounts {
        self.properties.get(property).copied().unwrap_or_default()
    }

    pub fn stat(&self, name: &str) -> u64 {
        self.stats.get(name).copied().unwrap_or(0)
    }
}

enum Outcome {
    Pass,
    Fail(String),
    Skip,
}

#[derive(Default)]
struct Trial {
    outcomes: Vec<(&'static str, Outcome)>,
    stats: Vec<&'static str>,
}

impl Trial {
    fn record(&mut self, name: &'static str, o: Outcome) {
        self.outcomes.push((name, o));
    }

    fn check(&mut self, name: &'static str, ok: bool, why: impl FnOnce() -> String) {
        self.record(name, if ok { Outcome::Pass } else { Outcome::Fail(why()) });
    }
}

fn properties(id: ProfileId) -> &'static [&'static str] {
    match id {
        ProfileId::Thm1 => &["thm1/colorable"],
        ProfileId::Thm2 => &["thm2/colorable"],
        ProfileId::Thm3 => &["thm3/equivalence", "thm3/obstruction_sound", "thm3/government_route"],
        ProfileId::Lemma5 => &["lemma5/at_most_one_bad"],
        ProfileId::Prop2 => &["prop2/chord_composition"],
        ProfileId::Reduction => &["reduction/canvas", "reduction/lift"],
        ProfileId::Thm9 => &[
            "thm9/contains_government",
            "thm9/confederacy_xor_harmonica",
            "thm9/confederacy_propagates",
            "thm9/harmonica_lists",
            "thm9/conversion_round_trip",
        ],
    }
}

fn colorable(t: &mut Trial, name: &'static str, inst: &Instance) {
    match find_coloring(inst.graph(), inst.lists(), &Coloring::new()) {
        Ok(Some(c)) => t.check(name, c.is_proper_for(inst.graph(), inst.lists()), || {
            "improper coloring".into()
        }),
        Ok(None) => t.record(name, Outcome::Fail("no coloring".into())),
        Err(e) => t.record(name, Outcome::Fail(e.to_string())),
    }
}

fn thm3(t: &mut Trial, inst: &Instance, p1: u32, p2: u32) {
    let (g, l) = (inst.graph(), inst.lists());
    match decide_with_certificate(g, l, p1, p2) {
        Ok(Decision::Colorable(_)) => {
            t.record("thm3/equivalence", Outcome::Pass);
            t.record("thm3/obstruction_sound", Outcome::Skip);
            t.record("thm3/government_route", Outcome::Skip);
            t.stats.push("thm3/colorable");
        }
        Ok(Decision::Obstructed(cert)) => {
            t.record("thm3/equivalence", Outcome::Pass);
            t.stats.push("thm3/obstructed");
            t.stats.push(match cert.chain_len() {
                1 => "thm3/chain_len_1",
                2 => "thm3/chain_len_2",
                _ => "thm3/chain_len_3_plus",
            });
            // the solver alone, not the detector, must find nothing
            let none = matches!(find_coloring(g, l, &Coloring::new()), Ok(None));
            t.check("thm3/obstruction_sound", none, || "solver found a coloring".into());
            match certify_via_governments(g, l, p1, p2) {
                Some(_) => t.record("thm3/government_route", Outcome::Pass),
                None => t.record(
                    "thm3/government_route",
                    Outcome::Fail("no certificate from the government route".into()),
                ),
            }
        }
        Err(e) => {
            t.record("thm3/equivalence", Outcome::Fail(e.to_string()));
            t.record("thm3/obstruction_sound", Outcome::Skip);
            t.record("thm3/government_route", Outcome::Skip);
        }
    }
}

fn reduction(t: &mut Trial, inst: &Instance, path: &[u32], l0: (u32, u32), center: u32, seed: u64) {
    let r = match democratic_reduction(&inst.canvas, path, [l0.0, l0.1], center) {
        Ok(r) => r,
        Err(e @ (ReductionError::ReducedNotCanvas(_) | ReductionError::ImproperInput(_))) => {
            t.record("reduction/canvas", Outcome::Fail(e.to_string()));
            t.record("reduction/lift", Outcome::Skip);
            return;
        }
        Err(_) => {
            t.record("reduction/canvas", Outcome::Skip);
            t.record("reduction/lift", Outcome::Skip);
            return;
        }
    };
    t.record("reduction/canvas", Outcome::Pass);
    if !r.deltas().is_empty() {
        t.stats.push("reduction/with_deltas");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let red = r.reduced();
    for _ in 0..LIFT_SAMPLES {
        match sample_coloring(red.graph(), red.lists(), &Coloring::new(), &mut rng) {
            Ok(Some(phi)) => match extend_reduced_coloring(&r, &phi) {
                Ok(full) => t.check("reduction/lift", full.is_proper_for(inst.graph(), inst.lists()), || {
                    format!("lift {:?} of {:?} is improper", full.0, phi.0)
                }),
                Err(e) => t.record("reduction/lift", Outcome::Fail(e.to_string())),
            },
            _ => t.record("reduction/lift", Outcome::Skip),
        }
    }
}

fn thm9(t: &mut Trial, inst: &Instance, p: (u32, u32), colorings: &[(u32, u32)], p_prime: (u32, u32), planted: bool) {
    let c = EdgeColoringSet::new(p, colorings.iter().copied()).expect("audited");
    let out = match extension_set(&inst.canvas, p, &c, p_prime) {
        Ok(o) => o,
        Err(e) => {
            for name in properties(ProfileId::Thm9) {
                t.record(name, Outcome::Fail(e.to_string()));
            }
            return;
        }
    };
    t.check("thm9/contains_government", find_government(&out).is_some(), || {
        format!("{out:?}")
    });
    let confed = find_confederacy(&out).is_some();
    let gov = match classify(&c) {
        Ok(Classification::Government(g)) => Some(g),
        _ => None,
    };
    if gov.is_none() {
        t.check("thm9/confederacy_propagates", confed, || format!("{out:?}"));
    } else {
        t.record("thm9/confederacy_propagates", Outcome::Skip);
    }
    let harmonica = gov
        .as_ref()
        .and_then(|g| find_government_harmonica(&inst.canvas, p, p_prime, g));
    t.check("thm9/confederacy_xor_harmonica", confed != harmonica.is_some(), || {
        format!(
            "confederacy: {confed}, harmonica: {:?}",
            harmonica.as_ref().map(|h| h.rule_trace())
        )
    });
    let Some(h) = harmonica else {
        t.record("thm9/harmonica_lists", Outcome::Skip);
        t.record("thm9/conversion_round_trip", Outcome::Skip);
        return;
    };
    t.stats.push(if planted {
        "thm9/harmonica_planted"
    } else {
        "thm9/harmonica_random"
    });
    let bad = harmonica_list_violations(&h, inst.lists());
    t.check("thm9/harmonica_lists", bad.is_empty(), || {
        format!("list sizes differ from 3 at {bad:?}")
    });

    let host = inst.graph();
    let dictated = phi(&h.graph(host), inst.lists(), h.government.set(), h.target)
        .ok()
        .and_then(|s| match classify(&s) {
            Ok(Classification::Government(g)) => g.dictator(),
            _ => None,
        })
        .filter(|(w, _)| *w != p.0 && *w != p.1);
    let Some((_, d)) = dictated else {
        t.record("thm9/conversion_round_trip", Outcome::Skip);
        return;
    };
    match convert_harmonica(host, inst.lists(), &h, d) {
        Ok(conv) => {
            t.stats.push("thm9/converted");
            let blocked = matches!(find_coloring(host, &conv.lists, &Coloring::new()), Ok(None));
            t.check("thm9/conversion_round_trip", blocked, || {
                "host colorable after removing d at w".into()
            });
        }
        Err(ConvertError::HypothesisViolated(_)) => t.record("thm9/conversion_round_trip", Outcome::Skip),
        Err(e) => t.record("thm9/conversion_round_trip", Outcome::Fail(e.to_string())),
    }
}

fn evaluate(inst: &Instance, seed: u64) -> Trial {
    let mut t = Trial::default();
    match &inst.designation {
        Designation::Terminals { p1, p2 } => match inst.profile {
            ProfileId::Thm1 => colorable(&mut t, "thm1/colorable", inst),
            ProfileId::Thm2 => colorable(&mut t, "thm2/colorable", inst),
            _ => thm3(&mut t, inst, *p1, *p2),
        },
        Designation::Wheel => match count_bad_wheel_colorings(&inst.canvas) {
            Ok(n) => t.check("lemma5/at_most_one_bad", n <= 1, || {
                format!("{n} colorings of S do not extend")
            }),
            Err(e) => t.record("lemma5/at_most_one_bad", Outcome::Fail(e.to_string())),
        },
        Designation::Chord {
            p,
            colorings,
            chord,
            p_prime,
        } => {
            let c = EdgeColoringSet::new(*p, colorings.iter().copied()).expect("proper colorings");
            match check_chord_composition(&inst.canvas, *p, &c, *chord, *p_prime) {
                Ok(ok) => t.check("prop2/chord_composition", ok, || "compositions differ".into()),
                Err(e) => t.record("prop2/chord_composition", Outcome::Fail(e.to_string())),
            }
        }
        Designation::Reduction { path, l0, center } => reduction(&mut t, inst, path, *l0, *center, seed),
        Designation::Government {
            p,
            colorings,
            p_prime,
            planted,
        } => thm9(&mut t, inst, *p, colorings, *p_prime, *planted),
    }
    t
}

fn dump(canvas: &Canvas) -> CanvasJson {
    CanvasJson::from_parts(canvas.graph(), canvas.precolored(), canvas.lists())
}

/// Runs `trials` instances of every profile. Trial `i` of a profile draws its
/// instance from a seed derived from `seed`, the profile and `i` alone, so the
/// report does not depend on scheduling.
pub fn run_property_suite(profiles: &[GeneratorProfile], trials: usize, seed: u64) -> SuiteReport {
    let start = Instant::now();
    let mut report = SuiteReport {
        seed,
        trials,
        ..Default::default()
    };
    for profile in profiles {
        for name in properties(profile.id) {
            report.properties.entry(name.to_string()).or_default();
        }
        let results: Vec<(u64, Option<Instance>, Trial)> = (0..trials)
            .into_par_iter()
            .map(|i| {
                let s = derive_seed(seed, profile.stream(), i as u64);
                match random_canvas(&profile.with_seed(s)) {
                    Ok(inst) if inst.audit().is_empty() => {
                        let t = evaluate(&inst, derive_seed(s, 0, 0));
                        (s, Some(inst), t)
                    }
                    _ => {
                        let mut t = Trial::default();
                        for name in properties(profile.id) {
                            t.record(name, Outcome::Skip);
                        }
                        (s, None, t)
                    }
                }
            })
            .collect();
        for (i, (s, inst, t)) in results.into_iter().enumerate() {
            for stat in t.stats {
                *report.stats.entry(stat.to_string()).or_default() += 1;
            }
            for (name, o) in t.outcomes {
                let c = report.properties.entry(name.to_string()).or_default();
                match o {
                    Outcome::Pass => c.pass += 1,
                    Outcome::Skip => c.skip += 1,
                    Outcome::Fail(trace) => {
                        c.fail += 1;
                        let inst = inst.as_ref().expect("failures come from generated instances");
                        report.counterexamples.push(Counterexample {
                            canvas: dump(&inst.canvas),
                            designation: inst.designation.clone(),
                            profile: profile.id,
                            property: name.to_string(),
                            seed: s,
                            trace,
                            trial: i,
                        });
                    }
                }
            }
        }
    }
    report.wall_clock = start.elapsed();
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_runs_pass() {
        for id in ProfileId::ALL {
            let r = run_property_suite(&[GeneratorProfile::new(id, 0)], 20, 3);
            assert!(r.all_passed(), "{id}: {}", serde_json::to_string(&r).unwrap());
        }
    }

    #[test]
    fn reports_are_deterministic() {
        let ps: Vec<_> = ProfileId::ALL.iter().map(|&id| GeneratorProfile::new(id, 0)).collect();
        let a = serde_json::to_string(&run_property_suite(&ps, 8, 42)).unwrap();
        let b = serde_json::to_string(&run_property_suite(&ps, 8, 42)).unwrap();
        assert_eq!(a, b);
    }
}
