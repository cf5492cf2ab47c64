//! Structure-preserving maps between the categorical instances: the
//! predicate functor into opposite effect modules, the substate functor
//! into weight modules, the equivalence between partial functions and
//! weight modules over the Booleans, and the powerset functor into finite
//! Boolean algebras.
//!
//! Functors into module categories are materialized as finite tables, so
//! they exist only over sources with complete homsets; sources that sample
//! their homsets are refused with an error rather than approximated.

use std::sync::Arc;

use crate::algebra::{FiniteCarrier, FinitePcm};
use crate::category::checks::{derived_scalar_monoid, predicate_algebra};
use crate::category::emod_op::{EModOp, EModOpMor};
use crate::category::pfn::{Pfn, PfnMor};
use crate::category::wmod::{WMod, WModMap, WModMor};
use crate::category::{cotuple, predicates, states, substates, Effectus};
use crate::modules::{FiniteEffectModule, FiniteWeightModule, HomsetTooLarge, WeightModule};
use crate::report::{CheckReport, Violation};

/// Why a functor could not be materialized on the requested sample.
#[derive(Debug)]
pub enum FunctorError {
    /// The source instance samples its homsets, so the module of
    /// predicates or substates would be incomplete.
    SampledHomsets,
    HomsetTooLarge(HomsetTooLarge),
}

impl std::fmt::Display for FunctorError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            FunctorError::SampledHomsets => {
                write!(f, "source homsets are sampled, not complete")
            }
            FunctorError::HomsetTooLarge(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for FunctorError {}

impl From<HomsetTooLarge> for FunctorError {
    fn from(e: HomsetTooLarge) -> Self {
        FunctorError::HomsetTooLarge(e)
    }
}

type ObjMap<'a, C, D> =
    Box<dyn Fn(&<C as Effectus>::Obj) -> <D as Effectus>::Obj + 'a>;
type MorMap<'a, C, D> =
    Box<dyn Fn(&<C as Effectus>::Mor) -> <D as Effectus>::Mor + 'a>;

/// A functor between two instances together with the isomorphism
/// `unit : I_D -> F(I_C)` that makes it unit-preserving.
pub struct EffectusMorphism<'a, C: Effectus, D: Effectus> {
    pub name: String,
    pub source: &'a C,
    pub target: D,
    on_obj: ObjMap<'a, C, D>,
    on_mor: MorMap<'a, C, D>,
    pub unit: D::Mor,
}

impl<C: Effectus, D: Effectus> EffectusMorphism<'_, C, D> {
    pub fn on_obj(&self, a: &C::Obj) -> D::Obj {
        (self.on_obj)(a)
    }

    pub fn on_mor(&self, f: &C::Mor) -> D::Mor {
        (self.on_mor)(f)
    }
}

/// The closure of `sample` that functor checks quantify over: the sample,
/// the unit object, and all pairwise coproducts.
fn sample_closure<C: Effectus>(c: &C, sample: &[C::Obj]) -> Vec<C::Obj> {
    let mut out: Vec<C::Obj> = Vec::new();
    let push = |o: C::Obj, out: &mut Vec<C::Obj>| {
        if !out.contains(&o) {
            out.push(o);
        }
    };
    for a in sample {
        push(a.clone(), &mut out);
    }
    push(c.unit(), &mut out);
    for a in sample {
        for b in sample {
            push(c.coproduct(&[a.clone(), b.clone()]).object, &mut out);
        }
    }
    out
}

type Prepared<O, M> = Vec<(O, FiniteEffectModule, Vec<M>)>;

/// Sends an object to its algebra of predicates, made into an effect
/// module over the derived scalars by `r . p = r∘p`, and a morphism to
/// precomposition. Lands in the opposite category of effect modules.
///
/// Every object the checks will touch (the sample, the unit, pairwise
/// coproducts) is materialized up front; applying the functor to any other
/// object panics.
pub fn pred_functor<'a, C: Effectus>(
    c: &'a C,
    sample: &[C::Obj],
) -> Result<EffectusMorphism<'a, C, EModOp>, FunctorError> {
    let derived = derived_scalar_monoid(c)?.ok_or(FunctorError::SampledHomsets)?;
    let scalars = Arc::new(derived);
    let unit = c.unit();
    let scal_mors = c.morphisms(&unit, &unit)?;

    let mut prepared: Prepared<C::Obj, C::Mor> = Vec::new();
    for a in sample_closure(c, sample) {
        let pa = predicate_algebra(c, &a)?
            .expect("complete homsets always yield a predicate algebra");
        let n = pa.predicates.len();
        let mut action = vec![0; scal_mors.len() * n];
        for (r, s) in scal_mors.iter().enumerate() {
            for (i, p) in pa.predicates.iter().enumerate() {
                let rp = c.compose(s, p);
                action[r * n + i] = pa
                    .predicates
                    .iter()
                    .position(|q| *q == rp)
                    .expect("scaling a predicate yields a predicate");
            }
        }
        let module = FiniteEffectModule::new(scalars.clone(), pa.algebra, action)
            .expect("tables are sized by construction");
        prepared.push((a, module, pa.predicates));
    }
    let prepared = Arc::new(prepared);

    let find = {
        let prepared = prepared.clone();
        move |a: &C::Obj| -> usize {
            prepared
                .iter()
                .position(|(o, _, _)| o == a)
                .expect("object outside the prepared sample closure")
        }
    };

    let unit_mor = {
        let i = find(&unit);
        let (_, module, preds) = &prepared[i];
        let table = preds
            .iter()
            .map(|p| {
                scal_mors
                    .iter()
                    .position(|s| s == p)
                    .expect("predicates of the unit are the scalars")
            })
            .collect();
        EModOpMor {
            source: FiniteEffectModule::regular(scalars.clone()),
            target: module.clone(),
            table,
        }
    };

    let obj_prepared = prepared.clone();
    let obj_find = find.clone();
    let mor_prepared = prepared.clone();
    let mor_find = find;
    Ok(EffectusMorphism {
        name: format!("predicates of {}", c.name()),
        source: c,
        target: EModOp::new(scalars),
        on_obj: Box::new(move |a| obj_prepared[obj_find(a)].1.clone()),
        on_mor: Box::new(move |f| {
            let (_, m_src, p_src) = &mor_prepared[mor_find(&c.source(f))];
            let (_, m_tgt, p_tgt) = &mor_prepared[mor_find(&c.target(f))];
            let table = p_tgt
                .iter()
                .map(|q| {
                    let qf = c.compose(q, f);
                    p_src
                        .iter()
                        .position(|p| *p == qf)
                        .expect("precomposition yields a predicate")
                })
                .collect();
            EModOpMor {
                source: m_src.clone(),
                target: m_tgt.clone(),
                table,
            }
        }),
        unit: unit_mor,
    })
}

type PreparedSub<O, M> = Vec<(O, FiniteWeightModule, Vec<M>)>;

/// Sends an object to its weight module of substates over the opposite of
/// the derived scalars, with `ω . r = ω∘r` and weight `1∘ω`, and a
/// morphism to postcomposition. Same materialization contract as
/// [`pred_functor`].
pub fn substate_functor<'a, C: Effectus>(
    c: &'a C,
    sample: &[C::Obj],
) -> Result<EffectusMorphism<'a, C, WMod>, FunctorError> {
    let derived = derived_scalar_monoid(c)?.ok_or(FunctorError::SampledHomsets)?;
    let op = Arc::new(derived.opposite());
    let unit = c.unit();
    let scal_mors = c.morphisms(&unit, &unit)?;

    let mut prepared: PreparedSub<C::Obj, C::Mor> = Vec::new();
    for a in sample_closure(c, sample) {
        let subs = c.morphisms(&unit, &a)?;
        let n = subs.len();
        let pos = |m: &C::Mor| {
            subs.iter()
                .position(|s| s == m)
                .expect("substates are closed under the operations used")
        };
        let zero = pos(&c.zero_mor(&unit, &a));
        let truth = c.truth(&a);
        let weight: Vec<usize> = subs
            .iter()
            .map(|w| {
                let t = c.compose(&truth, w);
                scal_mors
                    .iter()
                    .position(|s| *s == t)
                    .expect("the weight of a substate is a scalar")
            })
            .collect();
        let mut sum = vec![None; n * n];
        for (i, x) in subs.iter().enumerate() {
            for (j, y) in subs.iter().enumerate() {
                sum[i * n + j] = c.mor_sum(x, y).map(|s| pos(&s));
            }
        }
        let mut action = vec![0; scal_mors.len() * n];
        for (r, s) in scal_mors.iter().enumerate() {
            for (i, w) in subs.iter().enumerate() {
                action[r * n + i] = pos(&c.compose(w, s));
            }
        }
        let carrier = FiniteCarrier::with_labels(subs.iter().map(|w| c.show_mor(w)).collect())
            .unwrap_or_else(|_| FiniteCarrier::new(n).expect("substates are nonempty"));
        let pcm = FinitePcm::new(carrier, zero, sum).expect("positions are in range");
        let module = FiniteWeightModule::new(op.clone(), pcm, action, weight)
            .expect("tables are sized by construction");
        prepared.push((a, module, subs));
    }
    let prepared = Arc::new(prepared);

    let find = {
        let prepared = prepared.clone();
        move |a: &C::Obj| -> usize {
            prepared
                .iter()
                .position(|(o, _, _)| o == a)
                .expect("object outside the prepared sample closure")
        }
    };

    let unit_mor = {
        let i = find(&unit);
        let (_, module, subs) = &prepared[i];
        let table = (0..scal_mors.len())
            .map(|r| {
                subs.iter()
                    .position(|s| *s == scal_mors[r])
                    .expect("substates of the unit are the scalars")
            })
            .collect();
        WModMor {
            source: WeightModule::Finite(FiniteWeightModule::regular(op.clone())),
            target: WeightModule::Finite(module.clone()),
            map: WModMap::Table(table),
        }
    };

    let obj_prepared = prepared.clone();
    let obj_find = find.clone();
    let mor_prepared = prepared.clone();
    let mor_find = find;
    Ok(EffectusMorphism {
        name: format!("substates of {}", c.name()),
        source: c,
        target: WMod::finite(op),
        on_obj: Box::new(move |a| WeightModule::Finite(obj_prepared[obj_find(a)].1.clone())),
        on_mor: Box::new(move |f| {
            let (_, m_src, s_src) = &mor_prepared[mor_find(&c.source(f))];
            let (_, m_tgt, s_tgt) = &mor_prepared[mor_find(&c.target(f))];
            let table = s_src
                .iter()
                .map(|w| {
                    let fw = c.compose(f, w);
                    s_tgt
                        .iter()
                        .position(|v| *v == fw)
                        .expect("postcomposition yields a substate")
                })
                .collect();
            WModMor {
                source: WeightModule::Finite(m_src.clone()),
                target: WeightModule::Finite(m_tgt.clone()),
                map: WModMap::Table(table),
            }
        }),
        unit: unit_mor,
    })
}

/// Functor laws, unit preservation, and coproduct preservation for a
/// materialized functor, on the sample it was prepared with.
pub fn check_effectus_morphism<C: Effectus, D: Effectus>(
    f: &EffectusMorphism<'_, C, D>,
    sample: &[C::Obj],
) -> CheckReport {
    let mut report = CheckReport::new(format!("{}: functor laws", f.name), vec![]);
    let mut vs = Vec::new();
    let c = f.source;
    let d = &f.target;

    if d.inverse(&f.unit).is_none() {
        vs.push(Violation::new(
            "functor/unit-iso",
            vec![d.show_mor(&f.unit)],
            "the unit witness is not an isomorphism",
        ));
    }

    for a in sample {
        let fa = f.on_obj(a);
        if f.on_mor(&c.identity(a)) != d.identity(&fa) {
            vs.push(Violation::new(
                "functor/identity",
                vec![c.show_obj(a)],
                "the identity is not sent to the identity",
            ));
        }
        let truth_image = f.on_mor(&c.truth(a));
        if truth_image != d.compose(&f.unit, &d.truth(&fa)) {
            vs.push(Violation::new(
                "functor/truth",
                vec![c.show_obj(a)],
                "truth does not factor through the unit witness",
            ));
        }
        for b in sample {
            if f.on_mor(&c.zero_mor(a, b)) != d.zero_mor(&fa, &f.on_obj(b)) {
                vs.push(Violation::new(
                    "functor/zero",
                    vec![c.show_obj(a), c.show_obj(b)],
                    "the zero morphism is not sent to zero",
                ));
            }
        }
    }

    for a in sample {
        for b in sample {
            let hom = match c.morphisms(a, b) {
                Ok(h) => h,
                Err(e) => {
                    report.skip(format!("hom({}, {}): {}", c.show_obj(a), c.show_obj(b), e));
                    continue;
                }
            };
            // Defined sums must be preserved; the images of a non-summable
            // pair may well become summable, e.g. when a homset collapses.
            for x in &hom {
                for y in &hom {
                    let Some(s) = c.mor_sum(x, y) else { continue };
                    let imaged = d.mor_sum(&f.on_mor(x), &f.on_mor(y));
                    if imaged.as_ref() != Some(&f.on_mor(&s)) {
                        vs.push(Violation::new(
                            "functor/sum",
                            vec![c.show_mor(x), c.show_mor(y)],
                            "a defined sum is not preserved",
                        ));
                    }
                }
            }
            for e in sample {
                let post = match c.morphisms(b, e) {
                    Ok(h) => h,
                    Err(err) => {
                        report.skip(format!(
                            "hom({}, {}): {}",
                            c.show_obj(b),
                            c.show_obj(e),
                            err
                        ));
                        continue;
                    }
                };
                for x in &hom {
                    let fx = f.on_mor(x);
                    for g in &post {
                        let composite = f.on_mor(&c.compose(g, x));
                        if composite != d.compose(&f.on_mor(g), &fx) {
                            vs.push(Violation::new(
                                "functor/composition",
                                vec![c.show_mor(g), c.show_mor(x)],
                                "composition is not preserved",
                            ));
                        }
                    }
                }
            }
        }
    }

    for a in sample {
        for b in sample {
            let cop_c = c.coproduct(&[a.clone(), b.clone()]);
            let cop_d = d.coproduct(&[f.on_obj(a), f.on_obj(b)]);
            let images: Vec<D::Mor> =
                cop_c.coprojections.iter().map(|k| f.on_mor(k)).collect();
            let Some(t) = cotuple(d, &cop_d, &images) else {
                vs.push(Violation::new(
                    "functor/coproduct",
                    vec![c.show_obj(a), c.show_obj(b)],
                    "the comparison cotuple out of the image coproduct is undefined",
                ));
                continue;
            };
            let Some(t_inv) = d.inverse(&t) else {
                vs.push(Violation::new(
                    "functor/coproduct",
                    vec![c.show_obj(a), c.show_obj(b)],
                    "the comparison morphism is not an isomorphism",
                ));
                continue;
            };
            for (i, k) in cop_d.coprojections.iter().enumerate() {
                if d.compose(&t, k) != images[i] {
                    vs.push(Violation::new(
                        "functor/coproduct",
                        vec![c.show_obj(a), c.show_obj(b)],
                        format!("the comparison does not restore coprojection {i}"),
                    ));
                }
            }
            for (i, p) in cop_c.projections.iter().enumerate() {
                let through = d.compose(&cop_d.projections[i], &t_inv);
                if f.on_mor(p) != through {
                    vs.push(Violation::new(
                        "functor/coproduct",
                        vec![c.show_obj(a), c.show_obj(b)],
                        format!("partial projection {i} is not preserved"),
                    ));
                }
            }
        }
    }

    report.violations = vs;
    report
}

/// Verdict of a faithfulness or separation check: when it fails, `witness`
/// holds a pair of distinct morphisms that no probe distinguishes.
#[derive(Debug)]
pub struct SeparationOutcome {
    pub holds: bool,
    pub witness: Option<(String, String)>,
    pub skipped: Vec<String>,
}

/// Injectivity of the morphism map on every sampled homset.
pub fn check_faithful<C: Effectus, D: Effectus>(
    f: &EffectusMorphism<'_, C, D>,
    sample: &[C::Obj],
) -> SeparationOutcome {
    let c = f.source;
    let mut skipped = Vec::new();
    for a in sample {
        for b in sample {
            let hom = match c.morphisms(a, b) {
                Ok(h) => h,
                Err(e) => {
                    skipped.push(format!("hom({}, {}): {}", c.show_obj(a), c.show_obj(b), e));
                    continue;
                }
            };
            let images: Vec<D::Mor> = hom.iter().map(|m| f.on_mor(m)).collect();
            for x in 0..hom.len() {
                for y in x + 1..hom.len() {
                    if images[x] == images[y] {
                        return SeparationOutcome {
                            holds: false,
                            witness: Some((c.show_mor(&hom[x]), c.show_mor(&hom[y]))),
                            skipped,
                        };
                    }
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

/// What probes a separation check uses.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum SeparationMode {
    /// Postcomposition with predicates of the target.
    Predicate,
    /// Precomposition with substates of the source.
    Substate,
    /// Precomposition with total states of the source.
    State,
}

/// Whether distinct parallel morphisms are always distinguished by the
/// chosen probes, on the sampled homsets. A passing verdict on a sample is
/// evidence, not proof, for instances with more objects than the sample.
pub fn check_separation<C: Effectus>(
    c: &C,
    mode: SeparationMode,
    sample: &[C::Obj],
) -> SeparationOutcome {
    let mut skipped = Vec::new();
    for a in sample {
        for b in sample {
            let hom = match c.morphisms(a, b) {
                Ok(h) => h,
                Err(e) => {
                    skipped.push(format!("hom({}, {}): {}", c.show_obj(a), c.show_obj(b), e));
                    continue;
                }
            };
            let probes = match mode {
                SeparationMode::Predicate => predicates(c, b),
                SeparationMode::Substate => substates(c, a),
                SeparationMode::State => states(c, a),
            };
            let probes = match probes {
                Ok(p) => p,
                Err(e) => {
                    skipped.push(format!("probes for ({}, {}): {}", c.show_obj(a), c.show_obj(b), e));
                    continue;
                }
            };
            for x in 0..hom.len() {
                for y in x + 1..hom.len() {
                    let (f, g) = (&hom[x], &hom[y]);
                    let separated = match mode {
                        SeparationMode::Predicate => probes
                            .iter()
                            .any(|q| c.compose(q, f) != c.compose(q, g)),
                        _ => probes.iter().any(|w| c.compose(f, w) != c.compose(g, w)),
                    };
                    if !separated {
                        return SeparationOutcome {
                            holds: false,
                            witness: Some((c.show_mor(f), c.show_mor(g))),
                            skipped,
                        };
                    }
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

// ---------------------------------------------------------------------------
// The equivalence between weight modules over the Booleans and partial
// functions.

/// Both directions of the equivalence: a weight module over the Booleans
/// is a pointed set, which maps to its set of nonzero elements; a set maps
/// to the pointed set got by adjoining a fresh basepoint.
pub struct PointedEquivalence {
    pub wmod: WMod,
    pub pfn: Pfn,
}

fn finite_module(w: &WeightModule) -> &FiniteWeightModule {
    match w {
        WeightModule::Finite(m) => m,
        WeightModule::ConeSlice(_) => {
            panic!("the pointed-set equivalence works on finite weight modules")
        }
    }
}

/// Nonzero element indices in carrier order; the zero element may sit
/// anywhere in the carrier.
fn nonzero_indices(w: &FiniteWeightModule) -> Vec<usize> {
    (0..w.size()).filter(|&x| x != w.zero()).collect()
}

impl PointedEquivalence {
    pub fn new() -> Self {
        PointedEquivalence {
            wmod: WMod::finite(Arc::new(crate::monoid::FiniteEffectMonoid::two())),
            pfn: Pfn::new(),
        }
    }

    pub fn to_pfn_obj(&self, w: &WeightModule) -> usize {
        finite_module(w).size() - 1
    }

    pub fn to_pfn_mor(&self, f: &WModMor) -> PfnMor {
        let src = finite_module(&f.source);
        let tgt = finite_module(&f.target);
        let WModMap::Table(t) = &f.map else {
            panic!("the pointed-set equivalence works on finite weight modules")
        };
        let src_nz = nonzero_indices(src);
        let tgt_nz = nonzero_indices(tgt);
        let map = src_nz
            .iter()
            .map(|&x| {
                if t[x] == tgt.zero() {
                    None
                } else {
                    Some(tgt_nz.iter().position(|&y| y == t[x]).expect("nonzero"))
                }
            })
            .collect();
        PfnMor {
            source: src_nz.len(),
            target: tgt_nz.len(),
            map,
        }
    }

    pub fn to_wmod_obj(&self, n: usize) -> WeightModule {
        let labels: Vec<String> = std::iter::once("*".to_string())
            .chain((0..n).map(|i| format!("p{i}")))
            .collect();
        let refs: Vec<&str> = labels.iter().map(|s| s.as_str()).collect();
        WeightModule::Finite(FiniteWeightModule::pointed_set(&refs))
    }

    pub fn to_wmod_mor(&self, f: &PfnMor) -> WModMor {
        let mut table = vec![0];
        table.extend(f.map.iter().map(|v| v.map_or(0, |y| y + 1)));
        WModMor {
            source: self.to_wmod_obj(f.source),
            target: self.to_wmod_obj(f.target),
            map: WModMap::Table(table),
        }
    }

    /// The natural isomorphism from a module to the round trip through
    /// partial functions: renumber the nonzero elements, basepoint first.
    pub fn unit_iso(&self, w: &WeightModule) -> WModMor {
        let src = finite_module(w);
        let nz = nonzero_indices(src);
        let mut table = vec![0; src.size()];
        for (i, &x) in nz.iter().enumerate() {
            table[x] = i + 1;
        }
        WModMor {
            source: w.clone(),
            target: self.to_wmod_obj(nz.len()),
            map: WModMap::Table(table),
        }
    }

    /// The module-to-sets direction as a checkable functor.
    pub fn forward(&self) -> EffectusMorphism<'_, WMod, Pfn> {
        EffectusMorphism {
            name: "pointed sets to partial functions".into(),
            source: &self.wmod,
            target: Pfn::new(),
            on_obj: Box::new(|w| PointedEquivalence::new().to_pfn_obj(w)),
            on_mor: Box::new(|f| PointedEquivalence::new().to_pfn_mor(f)),
            unit: PfnMor {
                source: 1,
                target: 1,
                map: vec![Some(0)],
            },
        }
    }

    /// The sets-to-modules direction as a checkable functor.
    pub fn backward(&self) -> EffectusMorphism<'_, Pfn, WMod> {
        let two = Arc::new(crate::monoid::FiniteEffectMonoid::two());
        EffectusMorphism {
            name: "partial functions to pointed sets".into(),
            source: &self.pfn,
            target: WMod::finite(two.clone()),
            on_obj: Box::new(|n| PointedEquivalence::new().to_wmod_obj(*n)),
            on_mor: Box::new(|f| PointedEquivalence::new().to_wmod_mor(f)),
            unit: WModMor {
                source: WeightModule::Finite(FiniteWeightModule::regular(two)),
                target: PointedEquivalence::new().to_wmod_obj(1),
                map: WModMap::Table(vec![0, 1]),
            },
        }
    }
}

impl Default for PointedEquivalence {
    fn default() -> Self {
        Self::new()
    }
}

/// Functor laws for both directions, plus the natural isomorphisms of the
/// round trips, on all pointed sets with at most `max_points` nonzero
/// elements and one module whose zero sits away from index 0.
pub fn check_pointed_equivalence(max_points: usize) -> CheckReport {
    let eq = PointedEquivalence::new();
    let mut report = CheckReport::new("pointed-set equivalence", vec![]);

    let mut wsample: Vec<WeightModule> = (0..=max_points).map(|n| eq.to_wmod_obj(n)).collect();
    wsample.push(permuted_two_point_module());
    let psample: Vec<usize> = (0..=max_points).collect();

    report.absorb(check_effectus_morphism(&eq.forward(), &wsample));
    report.absorb(check_effectus_morphism(&eq.backward(), &psample));

    // Unit of the equivalence: W ≅ round trip, naturally in W.
    for w in &wsample {
        let eta = eq.unit_iso(w);
        if eq.wmod.inverse(&eta).is_none() {
            report.violations.push(Violation::new(
                "equivalence/unit-iso",
                vec![eq.wmod.show_obj(w)],
                "the renumbering into the round trip is not an isomorphism",
            ));
        }
    }
    for w in &wsample {
        for v in &wsample {
            let hom = eq
                .wmod
                .morphisms(w, v)
                .expect("finite pointed-set homsets are enumerable");
            let eta_w = eq.unit_iso(w);
            let eta_v = eq.unit_iso(v);
            for f in &hom {
                let round = eq.to_wmod_mor(&eq.to_pfn_mor(f));
                if eq.wmod.compose(&round, &eta_w) != eq.wmod.compose(&eta_v, f) {
                    report.violations.push(Violation::new(
                        "equivalence/naturality",
                        vec![eq.wmod.show_mor(f)],
                        "the unit isomorphism square does not commute",
                    ));
                }
            }
        }
    }

    // Counit: the other round trip is the identity on the nose.
    for &n in &psample {
        if eq.to_pfn_obj(&eq.to_wmod_obj(n)) != n {
            report.violations.push(Violation::new(
                "equivalence/counit",
                vec![n.to_string()],
                "the set round trip changes the object",
            ));
        }
        for &m in &psample {
            let hom = eq.pfn.morphisms(&n, &m).expect("finite");
            for f in &hom {
                if eq.to_pfn_mor(&eq.to_wmod_mor(f)) != *f {
                    report.violations.push(Violation::new(
                        "equivalence/counit",
                        vec![eq.pfn.show_mor(f)],
                        "the set round trip changes the morphism",
                    ));
                }
            }
        }
    }

    report
}

/// A two-element module whose zero is at carrier index 1, exercising code
/// paths that must not assume where the zero sits.
fn permuted_two_point_module() -> WeightModule {
    let two = Arc::new(crate::monoid::FiniteEffectMonoid::two());
    let carrier = FiniteCarrier::with_labels(vec!["x".into(), "*".into()]).expect("distinct");
    let sum = vec![None, Some(0), Some(0), Some(1)];
    let pcm = FinitePcm::new(carrier, 1, sum).expect("well formed");
    let module = FiniteWeightModule::new(two, pcm, vec![1, 1, 0, 1], vec![1, 0]).expect("sized");
    WeightModule::Finite(module)
}

// ---------------------------------------------------------------------------
// The powerset functor into finite Boolean algebras.

/// A map of finite powerset Boolean algebras, stored in the direction of
/// the algebras: `table[s]`, for `s` a subset bitmask over the target's
/// atoms, is the preimage bitmask over the source's atoms. Composition of
/// the underlying partial functions therefore reverses here. Finite
/// carriers make countable joins finite, so these algebras are complete.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BoolAlgMap {
    pub source_atoms: usize,
    pub target_atoms: usize,
    pub table: Vec<usize>,
}

/// The image of a partial function: sends a subset of the target to the
/// set of points that are defined and land in it.
pub fn powerset_image(f: &PfnMor) -> BoolAlgMap {
    let table = (0..1usize << f.target)
        .map(|s| {
            (0..f.source)
                .filter(|&x| f.map[x].is_some_and(|v| (s >> v) & 1 == 1))
                .fold(0, |acc, x| acc | (1 << x))
        })
        .collect();
    BoolAlgMap {
        source_atoms: f.source,
        target_atoms: f.target,
        table,
    }
}

/// Functoriality, faithfulness, sum preservation, and additivity of the
/// induced injection from predicates to subsets, exhaustively on sets of
/// at most `max_size` points.
pub fn check_powerset_functor(max_size: usize) -> CheckReport {
    let c = Pfn::new();
    let mut report = CheckReport::new("powerset functor on partial functions", vec![]);
    let mut vs = Vec::new();
    let objects: Vec<usize> = (0..=max_size).collect();

    for &a in &objects {
        let id = powerset_image(&c.identity(&a));
        if id.table.iter().enumerate().any(|(s, &t)| s != t) {
            vs.push(Violation::new(
                "powerset/identity",
                vec![a.to_string()],
                "the identity is not sent to the identity",
            ));
        }
        let truth = powerset_image(&c.truth(&a));
        if truth.table != vec![0, (1 << a) - 1] {
            vs.push(Violation::new(
                "powerset/truth",
                vec![a.to_string()],
                "truth is not sent to the full-set map",
            ));
        }
        for &b in &objects {
            let zero = powerset_image(&c.zero_mor(&a, &b));
            if zero.table.iter().any(|&t| t != 0) {
                vs.push(Violation::new(
                    "powerset/zero",
                    vec![a.to_string(), b.to_string()],
                    "the zero morphism is not sent to the empty-set map",
                ));
            }
        }
    }

    for &a in &objects {
        for &b in &objects {
            let hom = c.morphisms(&a, &b).expect("small finite homsets");
            let images: Vec<BoolAlgMap> = hom.iter().map(powerset_image).collect();
            for x in 0..hom.len() {
                for y in x + 1..hom.len() {
                    if images[x] == images[y] {
                        vs.push(Violation::new(
                            "powerset/faithful",
                            vec![c.show_mor(&hom[x]), c.show_mor(&hom[y])],
                            "distinct partial functions have the same image",
                        ));
                    }
                }
            }
            let full = (1usize << b) - 1;
            for (x, f) in hom.iter().enumerate() {
                for (y, g) in hom.iter().enumerate() {
                    if let Some(s) = c.mor_sum(f, g) {
                        let ps = powerset_image(&s);
                        let joined: Vec<usize> = (0..ps.table.len())
                            .map(|m| images[x].table[m] | images[y].table[m])
                            .collect();
                        if ps.table != joined
                            || images[x].table[full] & images[y].table[full] != 0
                        {
                            vs.push(Violation::new(
                                "powerset/sum",
                                vec![c.show_mor(f), c.show_mor(g)],
                                "finite sums are not sent to disjoint joins",
                            ));
                        }
                    }
                }
            }
            for &e in &objects {
                let post = c.morphisms(&b, &e).expect("small finite homsets");
                for f in &hom {
                    let pf = powerset_image(f);
                    for g in &post {
                        let composite = powerset_image(&c.compose(g, f));
                        let pg = powerset_image(g);
                        let through: Vec<usize> =
                            pg.table.iter().map(|&s| pf.table[s]).collect();
                        if composite.table != through {
                            vs.push(Violation::new(
                                "powerset/composition",
                                vec![c.show_mor(g), c.show_mor(f)],
                                "composition is not reversed through the tables",
                            ));
                        }
                    }
                }
            }
        }
    }

    // Predicates embed additively as subsets: the domain map.
    for &a in &objects {
        let preds = predicates(&c, &a).expect("small finite homsets");
        let domains: Vec<usize> = preds.iter().map(|p| powerset_image(p).table[1]).collect();
        for x in 0..preds.len() {
            for y in x + 1..preds.len() {
                if domains[x] == domains[y] {
                    vs.push(Violation::new(
                        "powerset/predicate-injection",
                        vec![c.show_mor(&preds[x]), c.show_mor(&preds[y])],
                        "distinct predicates map to the same subset",
                    ));
                }
            }
        }
        for (x, p) in preds.iter().enumerate() {
            for (y, q) in preds.iter().enumerate() {
                if let Some(s) = c.mor_sum(p, q) {
                    let dom = powerset_image(&s).table[1];
                    if dom != domains[x] | domains[y] || domains[x] & domains[y] != 0 {
                        vs.push(Violation::new(
                            "powerset/predicate-injection",
                            vec![c.show_mor(p), c.show_mor(q)],
                            "the embedding does not turn sums into disjoint joins",
                        ));
                    }
                }
            }
        }
    }

    report.violations = vs;
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{are_isomorphic, FiniteEffectAlgebra};
    use crate::category::emod_op::EModOp;
    use crate::modules::{
        check_effect_module_axioms, check_weight_module_axioms, EffectModule,
    };
    use crate::monoid::FiniteEffectMonoid;

    fn two() -> Arc<FiniteEffectMonoid> {
        Arc::new(FiniteEffectMonoid::two())
    }

    #[test]
    fn predicates_of_partial_functions_are_powersets() {
        let c = Pfn::new();
        let sample = vec![0usize, 1, 2];
        let f = pred_functor(&c, &sample).expect("complete homsets");
        for &n in &[0usize, 1, 2] {
            let module = f.on_obj(&n);
            assert!(are_isomorphic(
                module.algebra(),
                &FiniteEffectAlgebra::powerset(n as u32)
            ));
            let report = check_effect_module_axioms(&EffectModule::Finite(module));
            assert!(report.passed(), "{:?}", report.violations);
        }
        let laws = check_effectus_morphism(&f, &sample);
        assert!(laws.complete(), "{:?} {:?}", laws.violations, laws.skipped);
        assert!(check_faithful(&f, &sample).holds);
    }

    #[test]
    fn pred_functor_over_weight_modules_is_lawful() {
        let c = WMod::finite(two());
        let sample = c.sample_objects();
        let f = pred_functor(&c, &sample).expect("complete homsets");
        let laws = check_effectus_morphism(&f, &sample);
        assert!(laws.complete(), "{:?} {:?}", laws.violations, laws.skipped);
    }

    #[test]
    fn substates_of_partial_functions_are_pointed_sets() {
        let c = Pfn::new();
        let sample = vec![0usize, 1, 2];
        let f = substate_functor(&c, &sample).expect("complete homsets");
        for &n in &[0usize, 1, 2] {
            let WeightModule::Finite(module) = f.on_obj(&n) else {
                unreachable!()
            };
            assert_eq!(module.size(), n + 1);
            for x in 0..module.size() {
                if x != module.zero() {
                    assert_eq!(module.weight_of(x), module.scalars().one());
                }
                for y in 0..module.size() {
                    if x != module.zero() && y != module.zero() {
                        assert_eq!(module.sum(x, y), None, "pointed sets have flat sums");
                    }
                }
            }
            let report =
                check_weight_module_axioms(&WeightModule::Finite(module));
            assert!(report.passed(), "{:?}", report.violations);
        }
        let laws = check_effectus_morphism(&f, &sample);
        assert!(laws.complete(), "{:?} {:?}", laws.violations, laws.skipped);
        assert!(check_faithful(&f, &sample).holds);
    }

    #[test]
    fn separation_agrees_with_faithfulness_on_partial_functions() {
        let c = Pfn::new();
        let sample = vec![0usize, 1, 2, 3];
        let pred = check_separation(&c, SeparationMode::Predicate, &sample);
        let sub = check_separation(&c, SeparationMode::Substate, &sample);
        let state = check_separation(&c, SeparationMode::State, &sample);
        assert!(pred.holds && sub.holds && state.holds);

        let small = vec![0usize, 1, 2];
        let pf = pred_functor(&c, &small).expect("complete homsets");
        let sf = substate_functor(&c, &small).expect("complete homsets");
        assert_eq!(
            check_separation(&c, SeparationMode::Predicate, &small).holds,
            check_faithful(&pf, &small).holds
        );
        assert_eq!(
            check_separation(&c, SeparationMode::Substate, &small).holds,
            check_faithful(&sf, &small).holds
        );
    }

    #[test]
    fn a_substate_blind_module_category_is_caught_with_a_witness() {
        // Over the Booleans, the four-element chain has only the zero
        // substate in the opposite module category, so parallel morphisms
        // out of it cannot be told apart by substates.
        let c = EModOp::new(two());
        let chain = FiniteEffectModule::trivial_action(
            two(),
            FiniteEffectAlgebra::four_chain(),
        )
        .expect("valid module");
        let sample = vec![FiniteEffectModule::regular(two()), chain];

        let sub = check_separation(&c, SeparationMode::Substate, &sample);
        assert!(!sub.holds);
        assert!(sub.witness.is_some());

        let sf = substate_functor(&c, &sample).expect("complete homsets");
        let faithful = check_faithful(&sf, &sample);
        assert_eq!(sub.holds, faithful.holds);
        let laws = check_effectus_morphism(&sf, &sample);
        assert!(laws.complete(), "{:?} {:?}", laws.violations, laws.skipped);

        // Predicates still separate, and the predicate functor agrees.
        let pred = check_separation(&c, SeparationMode::Predicate, &sample);
        let pf = pred_functor(&c, &sample).expect("complete homsets");
        assert!(pred.holds);
        assert_eq!(pred.holds, check_faithful(&pf, &sample).holds);
    }

    #[test]
    fn pointed_equivalence_round_trips() {
        let report = check_pointed_equivalence(3);
        assert!(
            report.complete(),
            "{:?} {:?}",
            report.violations,
            report.skipped
        );
    }

    #[test]
    fn equivalence_formula_examples() {
        let eq = PointedEquivalence::new();
        assert_eq!(eq.to_pfn_obj(&eq.to_wmod_obj(2)), 2);

        // A map sending everything to the basepoint becomes the
        // nowhere-defined partial function.
        let w = eq.to_wmod_obj(2);
        let WeightModule::Finite(m) = &w else { unreachable!() };
        let collapse = WModMor {
            source: w.clone(),
            target: w.clone(),
            map: WModMap::Table(vec![0; m.size()]),
        };
        let image = eq.to_pfn_mor(&collapse);
        assert!(image.map.iter().all(|v| v.is_none()));
    }

    #[test]
    fn powerset_functor_is_faithful_and_additive() {
        let report = check_powerset_functor(3);
        assert!(
            report.complete(),
            "{:?} {:?}",
            report.violations,
            report.skipped
        );

        // All nine partial maps on a two-point set stay distinct.
        let c = Pfn::new();
        let hom = c.morphisms(&2, &2).unwrap();
        assert_eq!(hom.len(), 9);
        let mut images: Vec<Vec<usize>> =
            hom.iter().map(|f| powerset_image(f).table).collect();
        images.sort();
        images.dedup();
        assert_eq!(images.len(), 9);

        let f = PfnMor {
            source: 2,
            target: 2,
            map: vec![Some(0), None],
        };
        let image = powerset_image(&f);
        assert_eq!(image.table[0b01], 0b01);
        assert_eq!(image.table[0b00], 0);
    }
}
