//! Normalization of substates: factoring a nonzero substate through its
//! weight as `ω = ω̄ ∘ (1∘ω)` with `ω̄` a state, unique when it exists.
//!
//! Whether every nonzero substate normalizes is governed entirely by the
//! scalars: it holds exactly when the scalar monoid has division, which on
//! finite monoids coincides with freeness from zero divisors and with the
//! geometric-series witness. [`check_normalization_theorem`] evaluates all
//! of these on one monoid, together with the two instance-level clauses
//! (normalizability of sampled substates, nonzero scalars being epi) run
//! inside the weight-module instance over that monoid.

use std::sync::Arc;

use serde::Serialize;

use crate::category::wmod::WMod;
use crate::category::{is_total, states, substates, Effectus};
use crate::functors::SeparationOutcome;
use crate::modules::HomsetTooLarge;
use crate::monoid::{geometric_normalizer, has_division, zero_divisors, FiniteEffectMonoid};
use crate::report::{CheckReport, Violation};

/// Why the produced state is known to be the only one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Certificate {
    /// Every state of the object was enumerated and exactly one matched.
    Exhaustive { states_checked: usize },
    /// Forced algebraically: scaling by a nonzero rational is injective,
    /// so the exact quotient is the only candidate.
    Algebraic,
}

/// A successful factorization `ω = ω̄ ∘ (1∘ω)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Normalization<M> {
    /// The unique state ω̄.
    pub state: M,
    /// The weight `1∘ω` as a scalar morphism.
    pub weight: M,
    pub certificate: Certificate,
}

#[derive(Debug, Clone, PartialEq)]
pub enum NormalizeError<M> {
    ZeroSubstate,
    /// No unique state factors the substate; `states` holds every state
    /// that does (empty: none at all, two or more: ambiguous).
    NotNormalizable { weight: M, states: Vec<M> },
    HomsetTooLarge(HomsetTooLarge),
}

impl<M> From<HomsetTooLarge> for NormalizeError<M> {
    fn from(e: HomsetTooLarge) -> Self {
        NormalizeError::HomsetTooLarge(e)
    }
}

/// Factors a nonzero substate `ω: I → A` as a state composed with its
/// weight. On instances with complete homsets the states of `A` are
/// enumerated and matched; on the rational backend the quotient is built
/// by exact division and uniqueness is algebraic.
pub fn normalize<C: Effectus>(
    c: &C,
    omega: &C::Mor,
) -> Result<Normalization<C::Mor>, NormalizeError<C::Mor>> {
    let a = c.target(omega);
    let unit = c.unit();
    if *omega == c.zero_mor(&unit, &a) {
        return Err(NormalizeError::ZeroSubstate);
    }
    let weight = c.compose(&c.truth(&a), omega);

    if c.homsets_complete() {
        let candidates = states(c, &a)?;
        let states_checked = candidates.len();
        let matches: Vec<C::Mor> = candidates
            .into_iter()
            .filter(|st| c.compose(st, &weight) == *omega)
            .collect();
        match matches.len() {
            1 => Ok(Normalization {
                state: matches.into_iter().next().expect("length checked"),
                weight,
                certificate: Certificate::Exhaustive { states_checked },
            }),
            _ => Err(NormalizeError::NotNormalizable {
                weight,
                states: matches,
            }),
        }
    } else {
        match c.divide_by_scalar(omega, &weight) {
            Some(state)
                if is_total(c, &state) && c.compose(&state, &weight) == *omega =>
            {
                Ok(Normalization {
                    state,
                    weight,
                    certificate: Certificate::Algebraic,
                })
            }
            _ => Err(NormalizeError::NotNormalizable {
                weight,
                states: Vec::new(),
            }),
        }
    }
}

/// Whether postcomposition by the scalar `s` is injective on substates of
/// the sampled objects: `ω₁∘s = ω₂∘s` forces `ω₁ = ω₂`.
pub fn check_scalar_epi<C: Effectus>(
    c: &C,
    s: &C::Mor,
    sample: &[C::Obj],
) -> SeparationOutcome {
    let mut skipped = Vec::new();
    for a in sample {
        let subs = match substates(c, a) {
            Ok(m) => m,
            Err(e) => {
                skipped.push(format!("substates of {}: {}", c.show_obj(a), e));
                continue;
            }
        };
        for x in 0..subs.len() {
            for y in x + 1..subs.len() {
                if c.compose(&subs[x], s) == c.compose(&subs[y], s) {
                    return SeparationOutcome {
                        holds: false,
                        witness: Some((c.show_mor(&subs[x]), c.show_mor(&subs[y]))),
                        skipped,
                    };
                }
            }
        }
    }
    SeparationOutcome {
        holds: true,
        witness: None,
        skipped,
    }
}

/// The equivalent conditions of the normalization theorem, evaluated on
/// one finite scalar monoid. The first three are decided exactly on the
/// monoid; the last two are run inside the weight-module instance over it,
/// on its sample objects plus a binary coproduct, so they are evidence
/// rather than proof. `report` flags every pairwise disagreement.
#[derive(Debug, Clone, Serialize)]
pub struct NormalizationTheorem {
    pub scalars: String,
    pub has_division: bool,
    pub zero_divisor_free: bool,
    /// Geometric series of every `s ≠ 1` stabilizes at 1.
    pub geometric_unit: bool,
    /// Every sampled nonzero substate has a unique normalization.
    pub substates_normalizable: bool,
    /// First substate that fails to normalize, when one does.
    pub normalization_witness: Option<String>,
    /// Every nonzero scalar is epi on sampled substates.
    pub scalars_epi: bool,
    pub epi_witness: Option<(String, String)>,
    pub report: CheckReport,
}

pub fn check_normalization_theorem(m: &Arc<FiniteEffectMonoid>) -> NormalizationTheorem {
    let division = has_division(m);
    let zdf = zero_divisors(m).is_free();
    let geometric = m
        .elements()
        .filter(|&s| s != m.one())
        .all(|s| geometric_normalizer(m, s) == m.one());

    let c = WMod::finite(m.clone());
    let mut sample = c.sample_objects();
    let unit = c.unit();
    let doubled = c.coproduct(&[unit.clone(), unit.clone()]).object;
    if !sample.contains(&doubled) {
        sample.push(doubled);
    }

    let mut substates_normalizable = true;
    let mut normalization_witness = None;
    'outer: for a in &sample {
        let subs = substates(&c, a).expect("finite backend homsets are enumerable");
        for omega in subs {
            if omega == c.zero_mor(&unit, a) {
                continue;
            }
            if let Err(e) = normalize(&c, &omega) {
                substates_normalizable = false;
                let what = match e {
                    NormalizeError::NotNormalizable { states, .. } => format!(
                        "{} on {} has {} matching states",
                        c.show_mor(&omega),
                        c.show_obj(a),
                        states.len()
                    ),
                    other => format!("{other:?}"),
                };
                normalization_witness = Some(what);
                break 'outer;
            }
        }
    }

    let scalar_mors = substates(&c, &unit).expect("scalars are enumerable");
    let zero_scalar = c.zero_mor(&unit, &unit);
    let mut scalars_epi = true;
    let mut epi_witness = None;
    for s in scalar_mors.iter().filter(|s| **s != zero_scalar) {
        let outcome = check_scalar_epi(&c, s, &sample);
        if !outcome.holds {
            scalars_epi = false;
            epi_witness = outcome.witness;
            break;
        }
    }

    let mut report = CheckReport::new(
        format!(
            "normalization theorem over a scalar monoid of size {}",
            m.size()
        ),
        vec![],
    );
    let clauses = [
        ("substates normalizable", substates_normalizable),
        ("has division", division),
        ("zero-divisor free", zdf),
        ("geometric series unit", geometric),
        ("nonzero scalars epi", scalars_epi),
    ];
    for (name_a, a) in &clauses {
        for (name_b, b) in &clauses {
            if a != b {
                report.violations.push(Violation::new(
                    "normalization/equivalence",
                    vec![name_a.to_string(), name_b.to_string()],
                    format!("clause '{name_a}' = {a} but clause '{name_b}' = {b}"),
                ));
            }
        }
    }

    NormalizationTheorem {
        scalars: format!("finite effect monoid of size {}", m.size()),
        has_division: division,
        zero_divisor_free: zdf,
        geometric_unit: geometric,
        substates_normalizable,
        normalization_witness,
        scalars_epi,
        epi_witness,
        report,
    }
}

/// Morphisms that agree under precomposition with every state also agree
/// with every substate. Holds in instances whose substates all normalize;
/// it is exactly what normalization buys.
pub fn check_states_determine_substates<C: Effectus>(
    c: &C,
    sample: &[C::Obj],
) -> CheckReport {
    let mut report = CheckReport::new(
        format!("{}: states determine substates", c.name()),
        vec![],
    );
    if !c.homsets_complete() {
        report.skip("homsets are sampled; the verdict is relative to the sample");
    }
    for a in sample {
        let (sts, subs) = match (states(c, a), substates(c, a)) {
            (Ok(s), Ok(w)) => (s, w),
            _ => {
                report.skip(format!("probes for {} exceed the cap", c.show_obj(a)));
                continue;
            }
        };
        for b in sample {
            let hom = match c.morphisms(a, b) {
                Ok(h) => h,
                Err(e) => {
                    report.skip(format!(
                        "hom({}, {}): {}",
                        c.show_obj(a),
                        c.show_obj(b),
                        e
                    ));
                    continue;
                }
            };
            for x in 0..hom.len() {
                for y in x + 1..hom.len() {
                    let (f, g) = (&hom[x], &hom[y]);
                    let states_agree = sts
                        .iter()
                        .all(|st| c.compose(f, st) == c.compose(g, st));
                    if !states_agree {
                        continue;
                    }
                    if let Some(w) = subs
                        .iter()
                        .find(|w| c.compose(f, w) != c.compose(g, w))
                    {
                        report.violations.push(Violation::new(
                            "normalization/states-determine-substates",
                            vec![c.show_mor(f), c.show_mor(g), c.show_mor(w)],
                            "the pair agrees on every state but not on this substate",
                        ));
                    }
                }
            }
        }
    }
    report
}
