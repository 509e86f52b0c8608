//! Harmonica obstructions: the coloring form, the government form, the
//! conversion between them, and the certified decision procedure.

mod certificate;
mod decide;
mod detect;
mod government;

pub use certificate::{verify_coloring_harmonica, HarmonicaCertificate, HarmonicaStep, Origin, VerifyFailure};
pub use decide::{audit_hypotheses, certify_via_governments, decide_with_certificate, DecideError, Decision};
pub use detect::{find_coloring_harmonica, find_harmonica_from};
pub use government::{
    convert_harmonica, find_government_harmonica, harmonica_list_violations, ConvertError, ConvertedHarmonica,
    GovernmentHarmonica, RuleApplication,
};
